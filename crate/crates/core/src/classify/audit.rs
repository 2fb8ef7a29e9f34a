//! Table-versus-oracle comparison over single instances and sweeps.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{classify_rep, global_rep, mult_primes, mult_type, split_by_c4c6, ClassifyError, FieldKind, RepKind};
use crate::families::{self, build_curve, f_model, FamilyError, FamilyParams, TorsionStructure};
use crate::numtheory::{self, legendre, NumTheoryError};
use crate::tate::{self, KodairaType, LocalReductionData, TateError};
use crate::weierstrass::WeierstrassModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    DiscriminantIdentity,
    MinimalValuation,
    MultMembership,
    MultType,
    SplitConcordance,
    RepRow,
    ConductorExponent,
    KindConsistency,
    TwistRamification,
    WitnessModel,
    TwoAdicConductorTwo,
    GlobalConductor,
}

impl Check {
    pub fn name(&self) -> &'static str {
        match self {
            Check::DiscriminantIdentity => "discriminant_identity",
            Check::MinimalValuation => "minimal_valuation",
            Check::MultMembership => "mult_membership",
            Check::MultType => "mult_type",
            Check::SplitConcordance => "split_concordance",
            Check::RepRow => "rep_row",
            Check::ConductorExponent => "conductor_exponent",
            Check::KindConsistency => "kind_consistency",
            Check::TwistRamification => "twist_ramification",
            Check::WitnessModel => "witness_model",
            Check::TwoAdicConductorTwo => "two_adic_conductor_two",
            Check::GlobalConductor => "global_conductor",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub params: FamilyParams,
    pub p: Option<BigInt>,
    pub check: Check,
    pub table_verdict: String,
    pub oracle_verdict: String,
    pub rule_id: Option<String>,
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", self.params)?;
        if let Some(p) = &self.p {
            write!(f, "p = {p} ")?;
        }
        write!(
            f,
            "[{}] table: {}, oracle: {}",
            self.check, self.table_verdict, self.oracle_verdict
        )?;
        if let Some(id) = &self.rule_id {
            write!(f, " ({id})")?;
        }
        Ok(())
    }
}

/// Outcome of auditing one parameter pair.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InstanceAudit {
    pub primes_checked: usize,
    /// Number of (p, check) comparisons made.
    pub comparisons: usize,
    pub discrepancies: Vec<Discrepancy>,
    /// Set when factoring ran out of time; nothing else is reported.
    pub incomplete: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub bound: i64,
    pub instances: usize,
    pub primes_checked: usize,
    pub comparisons: usize,
    pub discrepancies: Vec<Discrepancy>,
    pub incomplete: Vec<(FamilyParams, String)>,
}

impl AuditReport {
    pub fn absorb(&mut self, params: &FamilyParams, audit: InstanceAudit) {
        self.instances += 1;
        self.primes_checked += audit.primes_checked;
        self.comparisons += audit.comparisons;
        self.discrepancies.extend(audit.discrepancies);
        if let Some(msg) = audit.incomplete {
            self.incomplete.push((params.clone(), msg));
        }
    }

    pub fn is_clean(&self) -> bool {
        self.discrepancies.is_empty() && self.incomplete.is_empty()
    }
}

fn incomplete_reason(e: &ClassifyError) -> Option<String> {
    let nt = match e {
        ClassifyError::NumTheory(nt) => nt,
        ClassifyError::Family(FamilyError::NumTheory(nt)) => nt,
        _ => return None,
    };
    matches!(nt, NumTheoryError::IncompleteFactorization { .. }).then(|| nt.to_string())
}

fn oracle_kind(d: &LocalReductionData) -> String {
    match d.split {
        Some(true) => format!("{} split", d.kodaira),
        Some(false) => format!("{} non-split", d.kodaira),
        None => d.kodaira.to_string(),
    }
}

/// Does `t^2 + a1 t - a2` have a root mod `p`? These are the tangent slopes
/// at a node placed at the origin.
fn tangents_rational(a1: &BigInt, a2: &BigInt, p: &BigInt) -> bool {
    if p <= &BigInt::from(3) {
        let mut t = BigInt::zero();
        while &t < p {
            if (&t * &t + a1 * &t - a2).mod_floor(p).is_zero() {
                return true;
            }
            t += 1;
        }
        return false;
    }
    let disc = a1 * a1 + BigInt::from(4) * a2;
    legendre(&disc, p).is_ok_and(|s| s == 1)
}

fn p_integral_coeffs(m: &WeierstrassModel, p: &BigInt) -> Option<[BigInt; 5]> {
    if !m.is_integral_at(p) {
        return None;
    }
    // Clearing p-unit denominators does not change anything mod p.
    let c = m.coefficients();
    let mut out: [BigInt; 5] = Default::default();
    for (o, x) in out.iter_mut().zip(c) {
        let inv = x.denom().modpow(&(p - 2u32), p);
        *o = (x.numer() * inv).mod_floor(p);
    }
    Some(out)
}

/// Checks the F-model a multiplicative row points at: p-integral, minimal,
/// node at the origin, tangent slopes matching the row's S/NS.
fn witness_verdict(params: &FamilyParams, j: u32, p: &BigInt, min_val: u32, split: bool) -> Result<(), String> {
    let m = f_model(params, j).map_err(|e| e.to_string())?;
    let Some([a1, a2, a3, a4, a6]) = p_integral_coeffs(&m, p) else {
        return Err(format!("F{j} not {p}-integral"));
    };
    let v = numtheory::vp_rational(&m.discriminant(), p).map_err(|e| e.to_string())?;
    if v != min_val as i64 {
        return Err(format!("F{j} has v_p(disc) = {v}, minimal is {min_val}"));
    }
    if !(a3.is_zero() && a4.is_zero() && a6.is_zero()) {
        return Err(format!("F{j} singular point not at the origin mod {p}"));
    }
    let s = tangents_rational(&a1, &a2, p);
    if s != split {
        return Err(format!("F{j} tangents {}", if s { "rational" } else { "irrational" }));
    }
    Ok(())
}

struct Sink<'a> {
    params: &'a FamilyParams,
    out: InstanceAudit,
}

impl Sink<'_> {
    fn compare(
        &mut self,
        p: Option<&BigInt>,
        check: Check,
        ok: bool,
        table: String,
        oracle: String,
        rule: Option<&str>,
    ) {
        self.out.comparisons += 1;
        if !ok {
            self.out.discrepancies.push(Discrepancy {
                params: self.params.clone(),
                p: p.cloned(),
                check,
                table_verdict: table,
                oracle_verdict: oracle,
                rule_id: rule.map(str::to_string),
            });
        }
    }

    fn fail(&mut self, p: Option<&BigInt>, check: Check, err: &ClassifyError, oracle: String) {
        let rule = match err {
            ClassifyError::MultipleRules { ids, .. } => Some(ids.join(",")),
            _ => None,
        };
        self.out.comparisons += 1;
        self.out.discrepancies.push(Discrepancy {
            params: self.params.clone(),
            p: p.cloned(),
            check,
            table_verdict: err.to_string(),
            oracle_verdict: oracle,
            rule_id: rule,
        });
    }
}

fn kind_consistent(kind: &RepKind, d: &LocalReductionData) -> bool {
    match (&d.kodaira, d.split) {
        (KodairaType::I0, _) => matches!(kind, RepKind::UnramifiedPrincipalSeries),
        (KodairaType::I(_), Some(true)) => matches!(kind, RepKind::Steinberg),
        (KodairaType::I(_), _) => matches!(kind, RepKind::TwistedSteinberg { a_twist: 0, .. }),
        (KodairaType::IStar(_), _) => matches!(kind, RepKind::TwistedSteinberg { a_twist: 1, .. }),
        _ => matches!(
            kind,
            RepKind::RamifiedPrincipalSeries { .. } | RepKind::DihedralSupercuspidal { .. }
        ),
    }
}

/// Runs every check on one parameter pair.
pub fn audit_instance(params: &FamilyParams) -> InstanceAudit {
    let mut sink = Sink {
        params,
        out: InstanceAudit::default(),
    };
    if let Err(msg) = audit_into(params, &mut sink) {
        sink.out.incomplete = Some(msg);
        sink.out.discrepancies.clear();
    }
    sink.out
}

fn audit_into(params: &FamilyParams, sink: &mut Sink<'_>) -> Result<(), String> {
    let curve = build_curve(params);
    let gamma = families::gamma(params);
    let disc = curve.discriminant();
    sink.compare(
        None,
        Check::DiscriminantIdentity,
        disc == BigRational::from_integer(gamma.clone()),
        gamma.to_string(),
        disc.to_string(),
        None,
    );

    let md = match families::minimal_discriminant(params) {
        Ok(md) => md,
        Err(e) => return handle_fatal(sink, ClassifyError::from(e)),
    };
    let primes = match families::gamma_primes(params) {
        Ok(ps) => ps,
        Err(e) => return handle_fatal(sink, ClassifyError::from(e)),
    };
    let mult = match mult_primes(params) {
        Ok(m) => m,
        Err(e) => return handle_fatal(sink, e),
    };
    let mult_set: BTreeSet<&BigInt> = mult.iter().map(|(p, _)| p).collect();

    let mut oracle_conductor = BigInt::one();
    let mut table_locals = Vec::new();
    for p in &primes {
        let d = match tate::tate(&curve, p) {
            Ok(d) => d,
            Err(TateError::NumTheory(nt @ NumTheoryError::IncompleteFactorization { .. })) => {
                return Err(nt.to_string())
            }
            Err(e) => {
                sink.compare(Some(p), Check::RepRow, false, "classified".into(), e.to_string(), None);
                continue;
            }
        };
        oracle_conductor *= p.pow(d.f_p);
        let vd = numtheory::vp(&md.delta, p).map_err(|e| e.to_string())? as u32;
        sink.compare(
            Some(p),
            Check::MinimalValuation,
            vd == d.min_disc_valuation,
            vd.to_string(),
            d.min_disc_valuation.to_string(),
            None,
        );
        if vd == 0 {
            continue;
        }
        sink.out.primes_checked += 1;

        let is_mult = d.kodaira.is_multiplicative();
        let ids: Vec<&str> = mult.iter().filter(|(q, _)| q == p).map(|(_, id)| *id).collect();
        sink.compare(
            Some(p),
            Check::MultMembership,
            mult_set.contains(p) == is_mult,
            if mult_set.contains(p) {
                "multiplicative"
            } else {
                "not multiplicative"
            }
            .into(),
            oracle_kind(&d),
            ids.first().copied(),
        );

        if is_mult {
            let split = d.split.unwrap_or(false);
            match mult_type(params, p) {
                Ok(r) => {
                    sink.compare(
                        Some(p),
                        Check::MultType,
                        r.n == d.n && r.split == split,
                        format!("I{} {}", r.n, if r.split { "split" } else { "non-split" }),
                        oracle_kind(&d),
                        Some(r.rule_id),
                    );
                    if let Some(j) = r.witness_model {
                        let verdict = witness_verdict(params, j, p, d.min_disc_valuation, r.split);
                        sink.compare(
                            Some(p),
                            Check::WitnessModel,
                            verdict.is_ok(),
                            verdict.err().unwrap_or_default(),
                            oracle_kind(&d),
                            Some(r.rule_id),
                        );
                    }
                    if p >= &BigInt::from(5) {
                        match split_by_c4c6(params, p) {
                            Ok(s) => sink.compare(
                                Some(p),
                                Check::SplitConcordance,
                                s == r.split && s == split,
                                format!("row {}, c4c6 {}", r.split, s),
                                split.to_string(),
                                Some(r.rule_id),
                            ),
                            Err(e) => sink.fail(Some(p), Check::SplitConcordance, &e, split.to_string()),
                        }
                    }
                }
                Err(e) => sink.fail(Some(p), Check::MultType, &e, oracle_kind(&d)),
            }
        }

        let rep = match classify_rep(params, p) {
            Ok(r) => r,
            Err(e) => {
                if let Some(msg) = incomplete_reason(&e) {
                    return Err(msg);
                }
                sink.fail(
                    Some(p),
                    Check::RepRow,
                    &e,
                    format!("{}, f = {}", oracle_kind(&d), d.f_p),
                );
                continue;
            }
        };
        let rule = Some(rep.rule_id.as_str());
        sink.compare(
            Some(p),
            Check::ConductorExponent,
            rep.f_p == d.f_p,
            rep.f_p.to_string(),
            d.f_p.to_string(),
            rule,
        );
        sink.compare(
            Some(p),
            Check::KindConsistency,
            kind_consistent(&rep.kind, &d),
            rep.kind.name().into(),
            oracle_kind(&d),
            rule,
        );
        if let RepKind::TwistedSteinberg { twist_class, a_twist } = &rep.kind {
            let unram = numtheory::is_unramified_quadratic(twist_class);
            let expect_unram = *a_twist == 0;
            sink.compare(
                Some(p),
                Check::TwistRamification,
                if expect_unram {
                    unram && !twist_class.is_trivial()
                } else {
                    !unram
                },
                format!("a_twist = {a_twist}"),
                format!("twist class {}", if unram { "unramified" } else { "ramified" }),
                rule,
            );
        }
        if p == &BigInt::from(2) && d.f_p == 2 && d.kodaira.is_additive() {
            let ok = matches!(
                rep.kind,
                RepKind::DihedralSupercuspidal {
                    field: FieldKind::Unramified,
                    a_xi: 1,
                    ..
                }
            );
            sink.compare(
                Some(p),
                Check::TwoAdicConductorTwo,
                ok,
                rep.kind.to_string(),
                "f = 2".into(),
                rule,
            );
        }
        table_locals.push(rep);
    }

    // The oracle's conductor must also be supported on the gamma primes.
    let full = tate::global_conductor(&curve);
    match full {
        Ok(n) if n == oracle_conductor => {}
        Ok(n) => sink.compare(
            None,
            Check::GlobalConductor,
            false,
            oracle_conductor.to_string(),
            n.to_string(),
            None,
        ),
        Err(e) => return Err(e.to_string()),
    }
    let table_conductor = table_locals.iter().fold(BigInt::one(), |acc, l| acc * l.p.pow(l.f_p));
    sink.compare(
        None,
        Check::GlobalConductor,
        table_conductor == oracle_conductor,
        table_conductor.to_string(),
        oracle_conductor.to_string(),
        None,
    );
    if sink.out.discrepancies.is_empty() {
        match global_rep(params) {
            Ok(g) => sink.compare(
                None,
                Check::GlobalConductor,
                g.conductor == oracle_conductor,
                g.conductor.to_string(),
                oracle_conductor.to_string(),
                None,
            ),
            Err(e) => sink.fail(None, Check::GlobalConductor, &e, oracle_conductor.to_string()),
        }
    }
    Ok(())
}

fn handle_fatal(sink: &mut Sink<'_>, e: ClassifyError) -> Result<(), String> {
    if let Some(msg) = incomplete_reason(&e) {
        return Err(msg);
    }
    sink.fail(None, Check::RepRow, &e, "n/a".into());
    Ok(())
}

/// Audits every sweep instance of the given families, in sweep order.
pub fn audit_sweep(families: &[TorsionStructure], bound: i64) -> AuditReport {
    let mut report = AuditReport {
        bound,
        ..Default::default()
    };
    for &t in families {
        for params in families::sweep(t, bound) {
            let audit = audit_instance(&params);
            report.absorb(&params, audit);
        }
    }
    report
}
