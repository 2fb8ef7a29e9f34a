use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use oddtorsion::families::{
    build_curve, c3_decompose, f_model, f_model_spec, gamma_primes, minimal_discriminant, sweep, TorsionStructure,
};
use oddtorsion::numtheory::{vp, vp_rational};
use oddtorsion::tate::tate;

fn squarefree(n: &BigInt) -> bool {
    let mut k = BigInt::from(2);
    while &k * &k <= *n {
        if (n % (&k * &k)).is_zero() {
            return false;
        }
        k += 1;
    }
    true
}

#[test]
fn model_discriminant_is_gamma() {
    for t in TorsionStructure::ALL {
        for p in sweep(t, 20) {
            let md = minimal_discriminant(&p).unwrap();
            let disc = build_curve(&p).discriminant();
            assert!(disc.is_integer(), "{p}");
            assert_eq!(disc.to_integer(), md.gamma, "{p}");
        }
    }
}

#[test]
fn minimal_discriminant_matches_oracle() {
    let mut bad = Vec::new();
    for t in TorsionStructure::ALL {
        for p in sweep(t, 20) {
            let md = minimal_discriminant(&p).unwrap();
            let m = build_curve(&p);
            for q in gamma_primes(&p).unwrap() {
                let local = tate(&m, &q).unwrap();
                let expect = vp(&md.delta, &q).unwrap();
                if u64::from(local.min_disc_valuation) != expect {
                    bad.push(format!(
                        "{p} at {q}: table {expect}, oracle {}",
                        local.min_disc_valuation
                    ));
                }
            }
        }
    }
    assert!(
        bad.is_empty(),
        "{} mismatches, first: {:?}",
        bad.len(),
        &bad[..bad.len().min(20)]
    );
}

#[test]
fn c3_decomposition_round_trip() {
    for a in -10_000i64..=10_000 {
        if a == 0 {
            continue;
        }
        let a = BigInt::from(a);
        let dec = c3_decompose(&a).unwrap();
        assert_eq!(dec.c.pow(3) * &dec.d * &dec.d * &dec.e, a);
        assert!(dec.d.is_positive() && dec.e.is_positive());
        assert!(squarefree(&dec.d) && squarefree(&dec.e));
        assert!(dec.d.gcd(&dec.e).is_one());
    }
}

#[test]
fn f_model_scaling_law() {
    for t in TorsionStructure::ALL {
        for p in sweep(t, 6) {
            let base = build_curve(&p).discriminant();
            for &j in t.f_model_indices() {
                let spec = f_model_spec(&p, j).unwrap();
                let f = f_model(&p, j).unwrap();
                assert_eq!(f.discriminant() * spec.u.pow(12), base, "{p} j={j}");
            }
        }
    }
}

#[test]
fn gamma_prime_support_is_complete() {
    for t in TorsionStructure::ALL {
        for p in sweep(t, 12) {
            let md = minimal_discriminant(&p).unwrap();
            let primes = gamma_primes(&p).unwrap();
            let mut rest = md.gamma.abs();
            for q in &primes {
                while (&rest % q).is_zero() {
                    rest /= q;
                }
            }
            assert!(rest.is_one(), "{p}: leftover {rest}");
            assert!(vp_rational(&build_curve(&p).discriminant(), &primes[0]).unwrap() > 0);
        }
    }
}
