//! Table-driven classification: multiplicative primes, split/non-split type,
//! and the local representation `pi_p` at every prime.
//!
//! Nothing here runs Tate's algorithm; [`audit`] compares these answers with
//! [`crate::tate`].

pub mod audit;
pub mod matrix;
pub mod rules;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::families::{self, build_curve, FamilyError, FamilyParams, TorsionStructure};
use crate::numtheory::{self, legendre, square_class_int, NumTheoryError, SquareClass, UnitTag};
use crate::weierstrass::{gamma_invariant, WeierstrassError};

use rules::{Ctx, RepTemplate};

/// Label of `pi_infinity` for every member of every family.
pub const INFINITY_LABEL: &str = "holomorphic discrete series, weight 2";

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("no rule matched for {params} at p = {p} ({table})")]
    NoRule {
        params: String,
        p: BigInt,
        table: &'static str,
    },
    #[error("several rules matched for {params} at p = {p}: {ids:?}")]
    MultipleRules {
        params: String,
        p: BigInt,
        ids: Vec<String>,
    },
    #[error("{0}")]
    NotApplicable(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
    #[error(transparent)]
    NumTheory(#[from] NumTheoryError),
}

pub type Result<T> = std::result::Result<T, ClassifyError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultTypeResult {
    pub p: BigInt,
    pub n: u32,
    pub split: bool,
    pub rule_id: &'static str,
    pub witness_model: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Unramified,
    Ramified,
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Unramified => write!(f, "unramified"),
            FieldKind::Ramified => write!(f, "ramified"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RepKind {
    UnramifiedPrincipalSeries,
    RamifiedPrincipalSeries {
        a_chi: u32,
        ord_chi: u32,
    },
    Steinberg,
    TwistedSteinberg {
        twist_class: SquareClass,
        a_twist: u32,
    },
    DihedralSupercuspidal {
        field: FieldKind,
        field_disc_class: Option<SquareClass>,
        a_xi: u32,
        ord_xi: u32,
    },
}

impl RepKind {
    pub fn name(&self) -> &'static str {
        match self {
            RepKind::UnramifiedPrincipalSeries => "UnramifiedPrincipalSeries",
            RepKind::RamifiedPrincipalSeries { .. } => "RamifiedPrincipalSeries",
            RepKind::Steinberg => "Steinberg",
            RepKind::TwistedSteinberg { .. } => "TwistedSteinberg",
            RepKind::DihedralSupercuspidal { .. } => "DihedralSupercuspidal",
        }
    }
}

impl fmt::Display for RepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepKind::UnramifiedPrincipalSeries => write!(f, "chi x chi^-1, a(chi) = 0"),
            RepKind::RamifiedPrincipalSeries { a_chi, ord_chi } => {
                write!(f, "chi x chi^-1, a(chi) = {a_chi}, ord = {ord_chi}")
            }
            RepKind::Steinberg => write!(f, "St"),
            RepKind::TwistedSteinberg { a_twist, .. } => write!(f, "(gamma, .) St, a(twist) = {a_twist}"),
            RepKind::DihedralSupercuspidal {
                field, a_xi, ord_xi, ..
            } => {
                write!(f, "omega_(F,xi), F {field}, a(xi) = {a_xi}, ord = {ord_xi}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalRepDescriptor {
    pub p: BigInt,
    pub kind: RepKind,
    pub f_p: u32,
    pub rule_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalRepReport {
    pub params: FamilyParams,
    pub locals: Vec<LocalRepDescriptor>,
    pub conductor: BigInt,
    pub infinity_label: &'static str,
}

/// Conductor exponent of a representation with trivial central character.
pub fn conductor_exponent(kind: &RepKind, p: &BigInt) -> u32 {
    match kind {
        RepKind::UnramifiedPrincipalSeries => 0,
        RepKind::RamifiedPrincipalSeries { a_chi, .. } => 2 * a_chi,
        RepKind::Steinberg => 1,
        RepKind::TwistedSteinberg { a_twist, .. } => {
            if *a_twist == 0 {
                1
            } else {
                2 * a_twist
            }
        }
        RepKind::DihedralSupercuspidal {
            field,
            field_disc_class,
            a_xi,
            ..
        } => match field {
            FieldKind::Unramified => 2 * a_xi,
            FieldKind::Ramified if p != &BigInt::from(2) => 1 + a_xi,
            FieldKind::Ramified => a_xi + field_disc_class.as_ref().map_or(3, disc_valuation_at_two),
        },
    }
}

/// Valuation of the discriminant of the quadratic extension of `Q_2` cut out
/// by a ramified class.
fn disc_valuation_at_two(cls: &SquareClass) -> u32 {
    if cls.val_parity() == 1 {
        3
    } else {
        2
    }
}

/// The class of the unramified quadratic extension: a nonsquare unit for odd
/// `p`, the unit 5 at 2.
pub fn unramified_class(p: &BigInt) -> Result<SquareClass> {
    if p == &BigInt::from(2) {
        return Ok(square_class_int(&BigInt::from(5), p)?);
    }
    let mut n = BigInt::from(2);
    while legendre(&n, p)? != -1 {
        n += 1;
    }
    Ok(square_class_int(&n, p)?)
}

fn label(params: &FamilyParams) -> String {
    params.to_string()
}

/// Primes of multiplicative reduction by the table, each with every row that
/// names it.
pub fn mult_primes(params: &FamilyParams) -> Result<Vec<(BigInt, &'static str)>> {
    let mut out = Vec::new();
    if params.torsion == TorsionStructure::C3Zero {
        return Ok(out);
    }
    for p in families::gamma_primes(params)? {
        let ctx = Ctx::new(params, &p);
        for rule in rules::mult_prime_rules(params.torsion) {
            if rule.scope.contains(&ctx) && (rule.holds)(&ctx) {
                out.push((p.clone(), rule.id));
            }
        }
    }
    Ok(out)
}

/// Every multiplicative-type row that applies at `p` with `n > 0`.
pub fn matching_mult_type_rules(params: &FamilyParams, p: &BigInt) -> Vec<(&'static rules::MultTypeRule, i64)> {
    let ctx = Ctx::new(params, p);
    rules::mult_type_rules(params.torsion)
        .filter(|r| r.scope.contains(&ctx) && (r.holds)(&ctx))
        .map(|r| (r, (r.n)(&ctx)))
        .filter(|(_, n)| *n > 0 && *n < rules::INF)
        .collect()
}

/// The unique multiplicative-type row at `p`.
pub fn mult_type(params: &FamilyParams, p: &BigInt) -> Result<MultTypeResult> {
    let matches = matching_mult_type_rules(params, p);
    match matches.as_slice() {
        [] => Err(ClassifyError::NoRule {
            params: label(params),
            p: p.clone(),
            table: "multiplicative type",
        }),
        [(rule, n)] => Ok(MultTypeResult {
            p: p.clone(),
            n: *n as u32,
            split: rule.split,
            rule_id: rule.id,
            witness_model: rule.witness,
        }),
        many => Err(ClassifyError::MultipleRules {
            params: label(params),
            p: p.clone(),
            ids: many.iter().map(|(r, _)| r.id.to_string()).collect(),
        }),
    }
}

/// `(-c4 c6 / p) = 1`, for multiplicative reduction at `p >= 5`.
pub fn split_by_c4c6(params: &FamilyParams, p: &BigInt) -> Result<bool> {
    if p < &BigInt::from(5) {
        return Err(ClassifyError::NotApplicable(format!(
            "the c4 c6 split test needs p >= 5, got {p}"
        )));
    }
    let inv = build_curve(params).invariants();
    let x = -(&inv.c4 * &inv.c6);
    if x.is_zero() {
        return Err(ClassifyError::NotApplicable(format!("c4 c6 vanishes for {params}")));
    }
    // Any model works: -c4 c6 scales by u^-10, so strip the even p-power.
    let (vn, num) = numtheory::split_off(x.numer(), p)?;
    let (vd, den) = numtheory::split_off(x.denom(), p)?;
    if (vn + vd) % 2 == 1 {
        return Err(ClassifyError::NotApplicable(format!(
            "-c4 c6 has odd valuation at {p} for {params}; not multiplicative"
        )));
    }
    Ok(legendre(&(num * den), p)? == 1)
}

fn instantiate(template: RepTemplate, params: &FamilyParams, p: &BigInt) -> Result<RepKind> {
    Ok(match template {
        RepTemplate::Unramified => RepKind::UnramifiedPrincipalSeries,
        RepTemplate::PrincipalSeries { a_chi, ord_chi } => RepKind::RamifiedPrincipalSeries { a_chi, ord_chi },
        RepTemplate::TwistRamified => RepKind::TwistedSteinberg {
            twist_class: gamma_invariant(&build_curve(params), p)?,
            a_twist: 1,
        },
        RepTemplate::Supercuspidal { ramified, a_xi, ord_xi } => {
            let (field, class) = if ramified {
                let md = families::minimal_discriminant(params)?;
                (FieldKind::Ramified, square_class_int(&md.delta, p)?)
            } else {
                (FieldKind::Unramified, unramified_class(p)?)
            };
            RepKind::DihedralSupercuspidal {
                field,
                field_disc_class: Some(class),
                a_xi,
                ord_xi,
            }
        }
    })
}

/// Candidate classifications at `p`, one per matching row.
pub(crate) fn rep_candidates(params: &FamilyParams, p: &BigInt) -> Result<Vec<(String, RepKind)>> {
    let ctx = Ctx::new(params, p);
    let mut out = Vec::new();
    for rule in rules::rep_rules(params.torsion) {
        if rule.scope.contains(&ctx) && (rule.holds)(&ctx) {
            out.push((rule.id.to_string(), instantiate(rule.template, params, p)?));
        }
    }
    for (rule, _) in matching_mult_type_rules(params, p) {
        let kind = if rule.split {
            RepKind::Steinberg
        } else {
            RepKind::TwistedSteinberg {
                twist_class: gamma_invariant(&build_curve(params), p)?,
                a_twist: 0,
            }
        };
        out.push((rule.id.to_string(), kind));
    }
    Ok(out)
}

/// The local representation at `p` from the unique matching row.
pub fn classify_rep(params: &FamilyParams, p: &BigInt) -> Result<LocalRepDescriptor> {
    if !numtheory::is_probable_prime(p) {
        return Err(NumTheoryError::NotPrime(p.clone()).into());
    }
    let mut candidates = rep_candidates(params, p)?;
    match candidates.len() {
        0 => Err(ClassifyError::NoRule {
            params: label(params),
            p: p.clone(),
            table: "representation",
        }),
        1 => {
            let (rule_id, kind) = candidates.pop().expect("one candidate");
            Ok(LocalRepDescriptor {
                p: p.clone(),
                f_p: conductor_exponent(&kind, p),
                kind,
                rule_id,
            })
        }
        _ => Err(ClassifyError::MultipleRules {
            params: label(params),
            p: p.clone(),
            ids: candidates.into_iter().map(|(id, _)| id).collect(),
        }),
    }
}

/// Local representations at every prime dividing the minimal discriminant.
pub fn global_rep(params: &FamilyParams) -> Result<GlobalRepReport> {
    let md = families::minimal_discriminant(params)?;
    let mut locals = Vec::new();
    for p in families::gamma_primes(params)? {
        if numtheory::vp(&md.delta, &p)? == 0 {
            continue;
        }
        locals.push(classify_rep(params, &p)?);
    }
    let conductor = locals.iter().fold(BigInt::one(), |acc, l| acc * l.p.pow(l.f_p));
    Ok(GlobalRepReport {
        params: params.clone(),
        locals,
        conductor,
        infinity_label: INFINITY_LABEL,
    })
}

/// True iff the class is that of a ramified quadratic character.
pub fn is_ramified_class(cls: &SquareClass) -> bool {
    !numtheory::is_unramified_quadratic(cls)
}

/// True iff the class at 2 is one of the ramified unit classes 3, 7.
pub fn is_unit_ramified_at_two(cls: &SquareClass) -> bool {
    cls.val_parity() == 0 && matches!(cls.unit_tag(), UnitTag::Mod8(3) | UnitTag::Mod8(7))
}
