//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use oddtorsion::classify::audit::audit_sweep;
use oddtorsion::classify::{conductor_exponent, global_rep, mult_type, split_by_c4c6, FieldKind, RepKind};
use oddtorsion::families::{self, build_curve, params_i64, TorsionStructure};
use oddtorsion::numtheory::{self, factor, square_class};
use oddtorsion::tate::{self, KodairaType};
use oddtorsion::weierstrass::{transform, AdmissibleChange, WeierstrassModel};

const BOUND: i64 = 20;
const PROPERTY_CASES: u32 = 10_000;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn bi(n: i64) -> BigInt {
    BigInt::from(n)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_instances() -> Vec<families::FamilyParams> {
    TorsionStructure::ALL
        .iter()
        .flat_map(|&t| families::sweep(t, BOUND))
        .collect()
}

fn master_sweep() -> Outcome {
    let report = audit_sweep(&TorsionStructure::ALL, BOUND);
    if let Some(d) = report.discrepancies.first() {
        return Err(format!("{} discrepancies, first: {d}", report.discrepancies.len()));
    }
    if let Some((p, msg)) = report.incomplete.first() {
        return Err(format!("{} incomplete, first: {p}: {msg}", report.incomplete.len()));
    }
    Ok(format!(
        "{} instances, {} bad primes, {} comparisons, 0 discrepancies",
        report.instances, report.primes_checked, report.comparisons
    ))
}

fn minimal_discriminant_identity() -> Outcome {
    let mut primes = 0;
    let instances = all_instances();
    for params in &instances {
        let curve = build_curve(params);
        let gamma = families::gamma(params);
        ensure(curve.discriminant() == BigRational::from_integer(gamma.clone()), || {
            format!("{params}: model discriminant != gamma")
        })?;
        let u = families::u_t(params);
        let support = families::gamma_primes(params).map_err(|e| e.to_string())?;
        for p in tate::bad_prime_candidates(&curve).map_err(|e| e.to_string())? {
            ensure(support.contains(&p), || {
                format!("{params}: oracle prime {p} outside gamma support")
            })?;
        }
        for p in &support {
            let d = tate::tate(&curve, p).map_err(|e| e.to_string())?;
            let expected = numtheory::vp(&gamma, p).unwrap() as i64 - 12 * numtheory::vp(&u, p).unwrap() as i64;
            ensure(d.min_disc_valuation as i64 == expected, || {
                format!("{params} p = {p}: oracle {} vs {expected}", d.min_disc_valuation)
            })?;
            primes += 1;
        }
    }
    Ok(format!("{} instances, {primes} primes", instances.len()))
}

fn pinned_curves() -> Outcome {
    let c5 = params_i64(TorsionStructure::C5, 1, 1).map_err(|e| e.to_string())?;
    let g = global_rep(&c5).map_err(|e| e.to_string())?;
    ensure(g.conductor == bi(11), || format!("C5(1,1) conductor {}", g.conductor))?;
    let d = tate::tate(&build_curve(&c5), &bi(11)).map_err(|e| e.to_string())?;
    ensure(d.kodaira == KodairaType::I(1) && d.split == Some(true), || {
        "C5(1,1) at 11".into()
    })?;
    ensure(g.locals.len() == 1 && g.locals[0].kind == RepKind::Steinberg, || {
        "C5(1,1) pi_11".into()
    })?;
    ensure(tate::global_conductor(&build_curve(&c5)) == Ok(bi(11)), || {
        "C5(1,1) oracle".into()
    })?;

    let c30 = params_i64(TorsionStructure::C3Zero, 1, 0).map_err(|e| e.to_string())?;
    let g = global_rep(&c30).map_err(|e| e.to_string())?;
    ensure(g.conductor == bi(27), || format!("C3_0(1) conductor {}", g.conductor))?;
    let d = tate::tate(&build_curve(&c30), &bi(3)).map_err(|e| e.to_string())?;
    ensure(d.kodaira == KodairaType::II && d.f_p == 3, || "C3_0(1) at 3".into())?;
    ensure(
        matches!(
            g.locals[0].kind,
            RepKind::DihedralSupercuspidal {
                field: FieldKind::Ramified,
                a_xi: 2,
                ord_xi: 6,
                ..
            }
        ) && g.locals[0].f_p == 3,
        || format!("C3_0(1) pi_3 = {}", g.locals[0].kind),
    )?;

    let c3 = params_i64(TorsionStructure::C3, 1, 1).map_err(|e| e.to_string())?;
    let curve = build_curve(&c3);
    let d2 = tate::tate(&curve, &bi(2)).map_err(|e| e.to_string())?;
    let d13 = tate::tate(&curve, &bi(13)).map_err(|e| e.to_string())?;
    ensure(d2.kodaira == KodairaType::I(1) && d2.split == Some(false), || {
        "C3(1,1) at 2".into()
    })?;
    ensure(d13.kodaira == KodairaType::I(1) && d13.split == Some(true), || {
        "C3(1,1) at 13".into()
    })?;
    let r2 = mult_type(&c3, &bi(2)).map_err(|e| e.to_string())?;
    let r13 = mult_type(&c3, &bi(13)).map_err(|e| e.to_string())?;
    ensure((r2.n, r2.split, r13.n, r13.split) == (1, false, 1, true), || {
        "C3(1,1) table types".into()
    })?;
    let g = global_rep(&c3).map_err(|e| e.to_string())?;
    ensure(
        g.conductor == bi(26) && tate::global_conductor(&curve) == Ok(bi(26)),
        || "C3(1,1) conductor".into(),
    )?;
    Ok("C5(1,1) N = 11, C3_0(1) N = 27, C3(1,1) N = 26".into())
}

fn conductor_formula() -> Outcome {
    let mut locals = 0;
    let mut f2_cases = 0;
    for params in all_instances() {
        let curve = build_curve(&params);
        let g = global_rep(&params).map_err(|e| format!("{params}: {e}"))?;
        for l in &g.locals {
            let d = tate::tate(&curve, &l.p).map_err(|e| e.to_string())?;
            let f = conductor_exponent(&l.kind, &l.p);
            ensure(f == l.f_p && f == d.f_p, || {
                format!("{params} p = {}: formula {f}, emitted {}, oracle {}", l.p, l.f_p, d.f_p)
            })?;
            if l.p == bi(2) && d.kodaira.is_additive() && d.f_p == 2 {
                ensure(
                    matches!(
                        l.kind,
                        RepKind::DihedralSupercuspidal {
                            field: FieldKind::Unramified,
                            a_xi: 1,
                            ..
                        }
                    ),
                    || format!("{params}: f_2 = 2 but {}", l.kind),
                )?;
                f2_cases += 1;
            }
            locals += 1;
        }
        let oracle = tate::global_conductor(&curve).map_err(|e| e.to_string())?;
        ensure(g.conductor == oracle, || {
            format!("{params}: N {} vs oracle {oracle}", g.conductor)
        })?;
    }
    ensure(f2_cases > 0, || "no additive f_2 = 2 instance".into())?;
    Ok(format!("{locals} local descriptors, {f2_cases} with additive f_2 = 2"))
}

fn split_concordance() -> Outcome {
    let mut checked = 0;
    for params in all_instances() {
        let curve = build_curve(&params);
        for d in tate::all_local_data(&curve).map_err(|e| e.to_string())? {
            if !d.kodaira.is_multiplicative() || d.p < bi(5) {
                continue;
            }
            let table = mult_type(&params, &d.p).map_err(|e| e.to_string())?.split;
            let c4c6 = split_by_c4c6(&params, &d.p).map_err(|e| e.to_string())?;
            ensure(table == c4c6 && Some(c4c6) == d.split, || {
                format!("{params} p = {}: table {table}, c4c6 {c4c6}, oracle {:?}", d.p, d.split)
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} multiplicative primes >= 5"))
}

fn rational(range: i64) -> impl Strategy<Value = BigRational> {
    (-range..=range, 1..=range).prop_map(|(n, d)| BigRational::new(bi(n), bi(d)))
}

fn nonzero_rational(range: i64) -> impl Strategy<Value = BigRational> {
    rational(range).prop_filter("nonzero", |q| !q.is_zero())
}

fn run<S: Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases: PROPERTY_CASES,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))
}

fn property_suites() -> Outcome {
    let model = || {
        prop::array::uniform5(rational(1000)).prop_map(|[a1, a2, a3, a4, a6]| WeierstrassModel::new(a1, a2, a3, a4, a6))
    };
    run("invariants", model(), |m| {
        let inv = m.invariants();
        let lhs = BigRational::from_integer(bi(1728)) * &inv.disc;
        prop_assert_eq!(lhs, inv.c4.pow(3) - inv.c6.pow(2));
        Ok(())
    })?;

    let change = (nonzero_rational(50), rational(50), rational(50), rational(50));
    run("transform covariance", (model(), change), |(m, (u, r, s, w))| {
        let t = AdmissibleChange::new(u.clone(), r, s, w).unwrap();
        let m2 = transform(&m, &t).unwrap();
        let (i1, i2) = (m.invariants(), m2.invariants());
        prop_assert_eq!(&i2.c4 * u.pow(4), i1.c4);
        prop_assert_eq!(&i2.c6 * u.pow(6), i1.c6);
        prop_assert_eq!(&i2.disc * u.pow(12), i1.disc);
        prop_assert_eq!(i2.j, i1.j);
        let back = transform(&m2, &t.inverse()).unwrap();
        prop_assert_eq!(back, m);
        Ok(())
    })?;

    let prime = prop::sample::select(vec![2i64, 3, 5, 7, 11, 13, 101, 7919]);
    let big = || nonzero_rational(1_000_000);
    run("square classes", (prime, big(), big()), |(p, x, y)| {
        let p = bi(p);
        let cx = square_class(&x, &p).unwrap();
        let cy = square_class(&y, &p).unwrap();
        prop_assert!(square_class(&(&x * &x), &p).unwrap().is_trivial());
        prop_assert!(cx.mul(&cx).unwrap().is_trivial());
        prop_assert_eq!(square_class(&(&x * &y), &p).unwrap(), cx.mul(&cy).unwrap());
        prop_assert_eq!(
            square_class(&BigRational::from_integer(cx.representative()), &p).unwrap(),
            cx
        );
        Ok(())
    })?;

    let factors = prop::collection::vec(1u64..=u32::MAX as u64, 1..4);
    run("factorization", (any::<bool>(), factors), |(neg, fs)| {
        let mut n = fs.iter().fold(BigInt::one(), |acc, f| acc * BigInt::from(*f));
        if neg {
            n = -n;
        }
        let f = factor(&n).unwrap();
        prop_assert_eq!(f.value(), n.clone());
        for (p, k) in f.factors() {
            prop_assert!(*k >= 1);
            prop_assert!(p.is_positive() && numtheory::is_probable_prime(p));
        }
        Ok(())
    })?;
    Ok(format!("4 suites x {PROPERTY_CASES} cases"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        ("master sweep", master_sweep),
        ("minimal discriminant identity", minimal_discriminant_identity),
        ("pinned curves", pinned_curves),
        ("conductor formula consistency", conductor_formula),
        ("split test concordance", split_concordance),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {} {name}: {msg} ({secs:.1} s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name}: {msg} ({secs:.1} s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
