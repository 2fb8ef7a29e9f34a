//! The nine parameterized families `E_T(a, b)` with an odd-order torsion point.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::numtheory::{self, NumTheoryError};
use crate::weierstrass::{transform, AdmissibleChange, WeierstrassError, WeierstrassModel};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("unknown torsion structure {0:?}")]
    UnknownTorsion(String),
    #[error("gcd(a,b) must be 1, got gcd({a}, {b}) = {gcd}")]
    NotCoprime { a: BigInt, b: BigInt, gcd: BigInt },
    #[error("parameter a must be nonzero")]
    ZeroParameter,
    #[error("parameter a = {0} must be cube-free for C3_0")]
    NotCubeFree(BigInt),
    #[error("singular member: the discriminant vanishes at ({a}, {b})")]
    Singular { a: BigInt, b: BigInt },
    #[error("{torsion} has no auxiliary model with index {j}")]
    UnknownFModel { torsion: TorsionStructure, j: u32 },
    #[error("internal consistency error: {0}")]
    Internal(String),
    #[error(transparent)]
    NumTheory(#[from] NumTheoryError),
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
}

pub type Result<T> = std::result::Result<T, FamilyError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TorsionStructure {
    C3,
    C3Zero,
    C5,
    C6,
    C7,
    C9,
    C10,
    C12,
    C2xC6,
}

impl TorsionStructure {
    pub const ALL: [TorsionStructure; 9] = [
        TorsionStructure::C3,
        TorsionStructure::C3Zero,
        TorsionStructure::C5,
        TorsionStructure::C6,
        TorsionStructure::C7,
        TorsionStructure::C9,
        TorsionStructure::C10,
        TorsionStructure::C12,
        TorsionStructure::C2xC6,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            TorsionStructure::C3 => "C3",
            TorsionStructure::C3Zero => "C3_0",
            TorsionStructure::C5 => "C5",
            TorsionStructure::C6 => "C6",
            TorsionStructure::C7 => "C7",
            TorsionStructure::C9 => "C9",
            TorsionStructure::C10 => "C10",
            TorsionStructure::C12 => "C12",
            TorsionStructure::C2xC6 => "C2xC6",
        }
    }

    /// True when the family only uses the parameter `a`.
    pub fn is_single_parameter(&self) -> bool {
        *self == TorsionStructure::C3Zero
    }

    /// Auxiliary model indices available for this family.
    pub fn f_model_indices(&self) -> &'static [u32] {
        match self {
            TorsionStructure::C3 => &[1, 2],
            TorsionStructure::C3Zero => &[],
            TorsionStructure::C5 | TorsionStructure::C7 | TorsionStructure::C9 => &[1],
            TorsionStructure::C6 => &[1, 2, 3, 4, 5],
            TorsionStructure::C10 | TorsionStructure::C12 => &[1, 2],
            TorsionStructure::C2xC6 => &[1, 2, 3, 4],
        }
    }

    /// Whether `(a, b)` and `(-a, -b)` give the same model. Holds exactly when
    /// every coefficient is homogeneous of even degree.
    pub fn is_even(&self) -> bool {
        matches!(
            self,
            TorsionStructure::C7 | TorsionStructure::C12 | TorsionStructure::C2xC6
        )
    }
}

impl fmt::Display for TorsionStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for TorsionStructure {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().replace(['×', '*'], "x").replace(' ', "");
        TorsionStructure::ALL
            .into_iter()
            .find(|t| t.tag().eq_ignore_ascii_case(&norm))
            .or(match norm.to_ascii_uppercase().as_str() {
                "C30" | "C3^0" => Some(TorsionStructure::C3Zero),
                "C2XC6" | "C2C6" | "Z2XZ6" => Some(TorsionStructure::C2xC6),
                _ => None,
            })
            .ok_or_else(|| FamilyError::UnknownTorsion(s.to_string()))
    }
}

/// `a = c^3 d^2 e` with `d, e` positive, squarefree and coprime.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct C3Decomposition {
    pub c: BigInt,
    pub d: BigInt,
    pub e: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FamilyParams {
    pub torsion: TorsionStructure,
    pub a: BigInt,
    /// Zero and ignored for `C3_0`.
    pub b: BigInt,
    pub c3: Option<C3Decomposition>,
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.torsion.is_single_parameter() {
            write!(f, "{}({})", self.torsion, self.a)
        } else {
            write!(f, "{}({}, {})", self.torsion, self.a, self.b)
        }
    }
}

pub fn c3_decompose(a: &BigInt) -> Result<C3Decomposition> {
    if a.is_zero() {
        return Err(FamilyError::ZeroParameter);
    }
    let fac = numtheory::factor(a)?;
    let mut c = BigInt::from(fac.sign());
    let mut d = BigInt::one();
    let mut e = BigInt::one();
    for (p, k) in fac.factors() {
        c *= p.pow(k / 3);
        match k % 3 {
            2 => d *= p,
            1 => e *= p,
            _ => {}
        }
    }
    Ok(C3Decomposition { c, d, e })
}

fn is_cube_free(a: &BigInt) -> Result<bool> {
    Ok(numtheory::factor(a)?.factors().iter().all(|(_, k)| *k < 3))
}

pub fn validate_params(torsion: TorsionStructure, a: &BigInt, b: &BigInt) -> Result<FamilyParams> {
    let params = if torsion.is_single_parameter() {
        if a.is_zero() {
            return Err(FamilyError::ZeroParameter);
        }
        if !is_cube_free(a)? {
            return Err(FamilyError::NotCubeFree(a.clone()));
        }
        FamilyParams {
            torsion,
            a: a.clone(),
            b: BigInt::zero(),
            c3: None,
        }
    } else {
        let g = a.gcd(b);
        if !g.is_one() {
            return Err(FamilyError::NotCoprime {
                a: a.clone(),
                b: b.clone(),
                gcd: g,
            });
        }
        let c3 = if torsion == TorsionStructure::C3 && !a.is_zero() {
            Some(c3_decompose(a)?)
        } else {
            None
        };
        FamilyParams {
            torsion,
            a: a.clone(),
            b: b.clone(),
            c3,
        }
    };
    if gamma(&params).is_zero() {
        return Err(FamilyError::Singular {
            a: a.clone(),
            b: b.clone(),
        });
    }
    Ok(params)
}

/// Convenience wrapper over [`validate_params`] for small parameters.
pub fn params_i64(torsion: TorsionStructure, a: i64, b: i64) -> Result<FamilyParams> {
    validate_params(torsion, &BigInt::from(a), &BigInt::from(b))
}

fn coefficients(p: &FamilyParams) -> [BigInt; 3] {
    let (a, b) = (&p.a, &p.b);
    let a2p = a * a;
    let b2p = b * b;
    match p.torsion {
        TorsionStructure::C3Zero => [BigInt::zero(), BigInt::zero(), a.clone()],
        TorsionStructure::C3 => [a.clone(), BigInt::zero(), &a2p * b],
        TorsionStructure::C5 => [a - b, -(a * b), -(&a2p * b)],
        TorsionStructure::C6 => [a - b, -(a * b) - &b2p, -(&a2p * b) - a * &b2p],
        TorsionStructure::C7 => [
            &a2p + a * b - &b2p,
            &a2p * &b2p - a * &b2p * b,
            &a2p * &a2p * &b2p - &a2p * a * &b2p * b,
        ],
        TorsionStructure::C9 => {
            let a1 = &a2p * a + a * &b2p - &b2p * b;
            let a2 = a2p.pow(2) * &b2p - 2i64 * &a2p * a * &b2p * b + 2i64 * &a2p * b2p.pow(2) - a * b2p.pow(2) * b;
            let a3 = &a2p * a * &a2;
            [a1, a2, a3]
        }
        TorsionStructure::C10 => {
            let a1 = &a2p * a - 2i64 * &a2p * b - 2i64 * a * &b2p + 2i64 * &b2p * b;
            let a2 = -(&a2p * a * &b2p * b) + 3i64 * &a2p * b2p.pow(2) - 2i64 * a * b2p.pow(2) * b;
            let a3 = (&a2p * a - 3i64 * &a2p * b + a * &b2p) * &a2;
            [a1, a2, a3]
        }
        TorsionStructure::C12 => {
            let a1 = -a2p.pow(2) + 2i64 * &a2p * a * b + 2i64 * &a2p * &b2p - 8i64 * a * &b2p * b + 6i64 * b2p.pow(2);
            let a2 = b
                * (a - 2i64 * b)
                * (a - b).pow(2)
                * (&a2p - 3i64 * a * b + 3i64 * &b2p)
                * (&a2p - 2i64 * a * b + 2i64 * &b2p);
            let a3 = a * (b - a).pow(3) * &a2;
            [a1, a2, a3]
        }
        TorsionStructure::C2xC6 => {
            let a1 = -19i64 * &a2p + 2i64 * a * b + &b2p;
            let a2 = -10i64 * a2p.pow(2) + 22i64 * &a2p * a * b - 14i64 * &a2p * &b2p + 2i64 * a * &b2p * b;
            let a3 = 90i64 * a.pow(6) - 198i64 * a.pow(5) * b + 116i64 * a2p.pow(2) * &b2p + 4i64 * a.pow(3) * b.pow(3)
                - 14i64 * &a2p * b2p.pow(2)
                + 2i64 * a * b.pow(5);
            [a1, a2, a3]
        }
    }
}

/// The family model `y^2 + a1 xy + a3 y = x^3 + a2 x^2`.
pub fn build_curve(params: &FamilyParams) -> WeierstrassModel {
    let [a1, a2, a3] = coefficients(params);
    WeierstrassModel::from_integers([a1, a2, a3, BigInt::zero(), BigInt::zero()])
}

/// Factors whose product has the same prime support as the discriminant.
/// Factoring these separately is far cheaper than factoring the product.
pub fn discriminant_factors(params: &FamilyParams) -> Vec<BigInt> {
    let (a, b) = (&params.a, &params.b);
    let a2p = a * a;
    let b2p = b * b;
    let ab = a * b;
    let mut v = match params.torsion {
        TorsionStructure::C3Zero => vec![BigInt::from(3), a.clone()],
        TorsionStructure::C3 => vec![a.clone(), b.clone(), a - 27i64 * b],
        TorsionStructure::C5 => vec![a.clone(), b.clone(), &a2p + 11i64 * &ab - &b2p],
        TorsionStructure::C6 => vec![a.clone(), b.clone(), a + 9i64 * b, a + b],
        TorsionStructure::C7 => vec![
            a.clone(),
            b.clone(),
            a - b,
            &a2p * a + 5i64 * &a2p * b - 8i64 * a * &b2p + &b2p * b,
        ],
        TorsionStructure::C9 => vec![
            a.clone(),
            b.clone(),
            a - b,
            &a2p - &ab + &b2p,
            &a2p * a + 3i64 * &a2p * b - 6i64 * a * &b2p + &b2p * b,
        ],
        TorsionStructure::C10 => vec![
            a.clone(),
            b.clone(),
            a - b,
            a - 2i64 * b,
            &a2p + 2i64 * &ab - 4i64 * &b2p,
            &a2p - 3i64 * &ab + &b2p,
        ],
        TorsionStructure::C12 => vec![
            a.clone(),
            b.clone(),
            a - b,
            a - 2i64 * b,
            &a2p - 6i64 * &ab + 6i64 * &b2p,
            &a2p - 2i64 * &ab + 2i64 * &b2p,
            &a2p - 3i64 * &ab + 3i64 * &b2p,
        ],
        TorsionStructure::C2xC6 => vec![
            BigInt::from(2),
            a.clone(),
            b - a,
            b - 9i64 * a,
            b - 3i64 * a,
            b + 3i64 * a,
            b - 5i64 * a,
        ],
    };
    v.retain(|x| !x.is_zero());
    v
}

/// `gamma_T`, the discriminant of [`build_curve`] as a product of factors.
pub fn gamma(params: &FamilyParams) -> BigInt {
    let (a, b) = (&params.a, &params.b);
    let a2p = a * a;
    let b2p = b * b;
    let ab = a * b;
    match params.torsion {
        TorsionStructure::C3Zero => -27i64 * a2p.pow(2),
        TorsionStructure::C3 => a.pow(8) * b.pow(3) * (a - 27i64 * b),
        TorsionStructure::C5 => {
            let g: BigInt = a.pow(5) * b.pow(5) * (&a2p + 11i64 * &ab - &b2p);
            -g
        }
        TorsionStructure::C6 => &a2p * b.pow(6) * (a + 9i64 * b) * (a + b).pow(3),
        TorsionStructure::C7 => {
            let g: BigInt =
                a.pow(7) * b.pow(7) * (a - b).pow(7) * (&a2p * a + 5i64 * &a2p * b - 8i64 * a * &b2p + &b2p * b);
            -g
        }
        TorsionStructure::C9 => {
            let g: BigInt = (&a2p * b - a * &b2p).pow(9)
                * (&a2p - &ab + &b2p).pow(3)
                * (&a2p * a + 3i64 * &a2p * b - 6i64 * a * &b2p + &b2p * b);
            -g
        }
        TorsionStructure::C10 => {
            a.pow(5)
                * b.pow(10)
                * (a - b).pow(10)
                * (a - 2i64 * b).pow(5)
                * (&a2p + 2i64 * &ab - 4i64 * &b2p)
                * (&a2p - 3i64 * &ab + &b2p).pow(2)
        }
        TorsionStructure::C12 => {
            &a2p * b.pow(12)
                * (a - b).pow(12)
                * (a - 2i64 * b).pow(6)
                * (&a2p - 6i64 * &ab + 6i64 * &b2p)
                * (&a2p - 2i64 * &ab + 2i64 * &b2p).pow(3)
                * (&a2p - 3i64 * &ab + 3i64 * &b2p).pow(4)
        }
        TorsionStructure::C2xC6 => {
            (2i64 * a).pow(6)
                * (b - a).pow(6)
                * (b - 9i64 * a).pow(2)
                * (&b2p - 9i64 * &a2p).pow(2)
                * (b - 5i64 * a).pow(6)
        }
    }
}

fn v2(x: &BigInt) -> Option<u64> {
    numtheory::vp_opt(x, &BigInt::from(2))
}

/// `u_T`: the scaling that takes the family model to a global minimal model.
pub fn u_t(params: &FamilyParams) -> BigInt {
    let (a, b) = (&params.a, &params.b);
    let n = |k: u32| BigInt::from(k);
    match params.torsion {
        TorsionStructure::C3 => {
            let dec = params
                .c3
                .as_ref()
                .expect("validated C3 parameters carry a decomposition");
            &dec.c * &dec.c * &dec.d
        }
        TorsionStructure::C6 => {
            if v2(&(a + b)).is_none_or(|v| v >= 3) {
                n(2)
            } else {
                n(1)
            }
        }
        TorsionStructure::C10 | TorsionStructure::C12 => {
            if v2(a).is_none_or(|v| v >= 1) {
                n(2)
            } else {
                n(1)
            }
        }
        TorsionStructure::C2xC6 => match v2(&(a + b)) {
            Some(0) => n(1),
            Some(1) => n(16),
            _ => n(4),
        },
        _ => n(1),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalDiscriminant {
    pub gamma: BigInt,
    pub u: BigInt,
    pub delta: BigInt,
}

pub fn minimal_discriminant(params: &FamilyParams) -> Result<MinimalDiscriminant> {
    let gamma = gamma(params);
    let u = u_t(params);
    let scale = u.pow(12);
    let (delta, rem) = gamma.div_rem(&scale);
    if !rem.is_zero() {
        return Err(FamilyError::Internal(format!(
            "{params}: gamma = {gamma} is not divisible by u^12 with u = {u}"
        )));
    }
    Ok(MinimalDiscriminant { gamma, u, delta })
}

/// Primes dividing `gamma_T`, in increasing order.
pub fn gamma_primes(params: &FamilyParams) -> Result<Vec<BigInt>> {
    let mut primes = Vec::new();
    for f in discriminant_factors(params) {
        for p in numtheory::factor(&f)?.primes() {
            primes.push(p.clone());
        }
    }
    if let Some(dec) = &params.c3 {
        for x in [&dec.c, &dec.d] {
            primes.extend(numtheory::factor(x)?.primes().cloned());
        }
    }
    primes.sort();
    primes.dedup();
    Ok(primes)
}

/// One row of the change-of-variables table for the auxiliary models.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FModelSpec {
    pub torsion: TorsionStructure,
    pub j: u32,
    pub z: BigRational,
    pub u: BigRational,
    pub r: BigRational,
    pub s: BigRational,
    pub w: BigRational,
}

impl FModelSpec {
    pub fn change(&self) -> AdmissibleChange {
        AdmissibleChange {
            u: self.u.clone(),
            r: self.r.clone(),
            s: self.s.clone(),
            w: self.w.clone(),
        }
    }
}

fn q(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

pub fn f_model_spec(params: &FamilyParams, j: u32) -> Result<FModelSpec> {
    let t = params.torsion;
    if !t.f_model_indices().contains(&j) {
        return Err(FamilyError::UnknownFModel { torsion: t, j });
    }
    let (a, b) = (q(params.a.clone()), q(params.b.clone()));
    let one = BigRational::one();
    let zero = BigRational::zero();
    let k = |n: i64| q(BigInt::from(n));
    let ab_lin = || &a * &b * (&a - &b) * (&a - k(2) * &b);
    let (z, u, r, s, w) = match (t, j) {
        (TorsionStructure::C3, _) => {
            let dec = params
                .c3
                .as_ref()
                .expect("validated C3 parameters carry a decomposition");
            let (c, d, e) = (q(dec.c.clone()), q(dec.d.clone()), q(dec.e.clone()));
            if j == 1 {
                let z = &c * &c * &d;
                let r = &z * &z * &b;
                (z.clone(), z, r, zero.clone(), zero)
            } else {
                let z = &c * &c * &d / k(3);
                let r = -(&c * &c * &d * &d * &e * &e * &z * &z);
                let s = -(&c * &c * &c * &d * &d * &e);
                let w = (&c * &d * &e * &z).pow(3);
                (z.clone(), z, r, s, w)
            }
        }
        (TorsionStructure::C5, 1) | (TorsionStructure::C6, 1) => {
            let z = &a * &b;
            (z.clone(), one, z.clone(), z.clone(), z)
        }
        (TorsionStructure::C6, 2) => {
            let z = k(3) * &b - &a;
            let r = &a * &z / k(9);
            let w = k(2) * &a * (&a + k(3) * &b).pow(2) / k(27);
            (z, one / k(3), r, k(2) * &b, w)
        }
        (TorsionStructure::C6, 3) => {
            let z = &a + &b;
            (z.clone(), one, z, zero.clone(), zero)
        }
        (TorsionStructure::C6, 4) => (one, k(2), k(4), zero, k(8)),
        (TorsionStructure::C6, 5) => {
            let z = &a + &b;
            (z.clone(), k(2), k(4) * z, zero.clone(), zero)
        }
        (TorsionStructure::C7, 1) => {
            let z = &a * &b * (&a - &b);
            (z.clone(), one, z.clone(), z, zero)
        }
        (TorsionStructure::C9, 1) => {
            let z = &a * &b * (&a - &b);
            let s = &a * &b * &z;
            (z.clone(), one, z, s, zero)
        }
        (TorsionStructure::C10 | TorsionStructure::C12, 1) => {
            let z = ab_lin();
            (z.clone(), one, z.clone(), z, zero)
        }
        (TorsionStructure::C10 | TorsionStructure::C12, 2) => {
            let z = ab_lin();
            (z.clone(), k(2), k(4) * &z, k(8) * &z, zero)
        }
        (TorsionStructure::C2xC6, 1) => {
            let z = (&b * &b - k(9) * &a * &a) * (&b - k(5) * &a);
            let r = k(2) * &a * (&b - &a) * &z;
            (z, one, r.clone(), r, zero)
        }
        (TorsionStructure::C2xC6, 2 | 4) => {
            let z = if j == 2 { k(16) } else { k(4) };
            let w = k(2) * z.pow(3);
            (z.clone(), z.clone(), zero, -z, w)
        }
        (TorsionStructure::C2xC6, 3) => {
            let z = k(16);
            let r = -(&z * &z);
            let w = z.pow(3);
            (z.clone(), z, r, zero, w)
        }
        _ => return Err(FamilyError::UnknownFModel { torsion: t, j }),
    };
    if u.is_zero() {
        return Err(FamilyError::Internal(format!(
            "{params}: zero scale in auxiliary model {j}"
        )));
    }
    Ok(FModelSpec {
        torsion: t,
        j,
        z,
        u,
        r,
        s,
        w,
    })
}

/// The auxiliary model `F_{T,j}` obtained from [`build_curve`].
pub fn f_model(params: &FamilyParams, j: u32) -> Result<WeierstrassModel> {
    let spec = f_model_spec(params, j)?;
    Ok(transform(&build_curve(params), &spec.change())?)
}

/// Every valid parameter choice with `|a|, |b| <= bound`. For the families
/// where `(a, b)` and `(-a, -b)` give the same model only one of the pair is
/// kept.
pub fn sweep(torsion: TorsionStructure, bound: i64) -> Vec<FamilyParams> {
    let mut out = Vec::new();
    if torsion.is_single_parameter() {
        for a in -bound..=bound {
            if let Ok(p) = params_i64(torsion, a, 0) {
                out.push(p);
            }
        }
        return out;
    }
    for a in -bound..=bound {
        for b in -bound..=bound {
            if torsion.is_even() && (a < 0 || (a == 0 && b < 0)) {
                continue;
            }
            if a.gcd(&b) != 1 {
                continue;
            }
            if let Ok(p) = params_i64(torsion, a, b) {
                out.push(p);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn parse_tags() {
        for t in TorsionStructure::ALL {
            assert_eq!(t.tag().parse::<TorsionStructure>().unwrap(), t);
        }
        assert_eq!("C2×C6".parse::<TorsionStructure>().unwrap(), TorsionStructure::C2xC6);
        assert!("C4".parse::<TorsionStructure>().is_err());
    }

    #[test]
    fn validation() {
        assert!(params_i64(TorsionStructure::C5, 1, 1).is_ok());
        assert!(matches!(
            params_i64(TorsionStructure::C5, 2, 4),
            Err(FamilyError::NotCoprime { .. })
        ));
        assert!(matches!(
            params_i64(TorsionStructure::C3, 1, 0),
            Err(FamilyError::Singular { .. })
        ));
        assert!(matches!(
            params_i64(TorsionStructure::C5, 0, 1),
            Err(FamilyError::Singular { .. })
        ));
        assert_eq!(
            params_i64(TorsionStructure::C3Zero, 0, 0),
            Err(FamilyError::ZeroParameter)
        );
        assert_eq!(
            params_i64(TorsionStructure::C3Zero, 16, 5),
            Err(FamilyError::NotCubeFree(bi(16)))
        );
        assert_eq!(params_i64(TorsionStructure::C3Zero, 2, 5).unwrap().b, bi(0));
    }

    #[test]
    fn decompose_examples() {
        let d = c3_decompose(&bi(72)).unwrap();
        assert_eq!((d.c, d.d, d.e), (bi(2), bi(3), bi(1)));
        let d = c3_decompose(&bi(-8)).unwrap();
        assert_eq!((d.c, d.d, d.e), (bi(-2), bi(1), bi(1)));
        let d = c3_decompose(&bi(12)).unwrap();
        assert_eq!((d.c, d.d, d.e), (bi(1), bi(2), bi(3)));
        assert_eq!(c3_decompose(&bi(0)), Err(FamilyError::ZeroParameter));
    }

    #[test]
    fn curve_examples() {
        let m = build_curve(&params_i64(TorsionStructure::C5, 1, 1).unwrap());
        assert_eq!(m, WeierstrassModel::from_i64([0, -1, -1, 0, 0]));
        let m = build_curve(&params_i64(TorsionStructure::C3Zero, 1, 0).unwrap());
        assert_eq!(m, WeierstrassModel::from_i64([0, 0, 1, 0, 0]));
        let m = build_curve(&params_i64(TorsionStructure::C6, 1, 1).unwrap());
        assert_eq!(m, WeierstrassModel::from_i64([0, -2, -2, 0, 0]));
    }

    #[test]
    fn minimal_discriminant_examples() {
        let md = minimal_discriminant(&params_i64(TorsionStructure::C5, 1, 1).unwrap()).unwrap();
        assert_eq!(md.delta, bi(-11));
        let md = minimal_discriminant(&params_i64(TorsionStructure::C6, 7, 1).unwrap()).unwrap();
        assert_eq!((md.gamma, md.u, md.delta), (bi(401408), bi(2), bi(98)));
        let md = minimal_discriminant(&params_i64(TorsionStructure::C3Zero, 2, 0).unwrap()).unwrap();
        assert_eq!(md.delta, bi(-432));
    }

    #[test]
    fn f_model_examples() {
        let p = params_i64(TorsionStructure::C5, 1, 1).unwrap();
        let spec = f_model_spec(&p, 1).unwrap();
        assert_eq!(spec.change(), AdmissibleChange::from_i64(1, 1, 1, 1).unwrap());
        assert!(f_model(&p, 1).unwrap().is_integral());

        let p = params_i64(TorsionStructure::C3, 1, 1).unwrap();
        let spec = f_model_spec(&p, 1).unwrap();
        assert_eq!(spec.change(), AdmissibleChange::from_i64(1, 1, 0, 0).unwrap());
        assert!(f_model(&p, 1).unwrap().is_integral());

        assert!(matches!(f_model(&p, 3), Err(FamilyError::UnknownFModel { .. })));
    }

    #[test]
    fn sweep_dedups_even_families() {
        let s = sweep(TorsionStructure::C7, 2);
        assert!(s.iter().all(|p| p.a > bi(0) || (p.a.is_zero() && p.b > bi(0))));
        let s = sweep(TorsionStructure::C5, 2);
        assert!(s.iter().any(|p| p.a < bi(0)));
        let s = sweep(TorsionStructure::C3Zero, 10);
        assert_eq!(s.len(), 18);
    }
}
