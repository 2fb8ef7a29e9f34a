//! Weierstrass models `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` over Q.
//!
//! Coefficients are exact rationals: some of the auxiliary models used for
//! the split/non-split analysis are reached through changes of variables with
//! `u = 1/3`, so integrality is something to check rather than assume.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::numtheory::{square_class, vp_rational, NumTheoryError, SquareClass};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum WeierstrassError {
    #[error("admissible change has u = 0")]
    ZeroScale,
    #[error("the model is singular (discriminant 0)")]
    Singular,
    #[error("the model is not integral")]
    NotIntegral,
    #[error("gamma invariant needs potentially multiplicative reduction, but v_{p}(j) = {vj}")]
    NotPotentiallyMultiplicative { p: BigInt, vj: String },
    #[error(transparent)]
    NumTheory(#[from] NumTheoryError),
}

pub type Result<T> = std::result::Result<T, WeierstrassError>;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeierstrassModel {
    pub a1: BigRational,
    pub a2: BigRational,
    pub a3: BigRational,
    pub a4: BigRational,
    pub a6: BigRational,
}

impl WeierstrassModel {
    pub fn new(a1: BigRational, a2: BigRational, a3: BigRational, a4: BigRational, a6: BigRational) -> Self {
        WeierstrassModel { a1, a2, a3, a4, a6 }
    }

    pub fn from_integers(coeffs: [BigInt; 5]) -> Self {
        let [a1, a2, a3, a4, a6] = coeffs.map(BigRational::from_integer);
        WeierstrassModel { a1, a2, a3, a4, a6 }
    }

    pub fn from_i64(coeffs: [i64; 5]) -> Self {
        Self::from_integers(coeffs.map(BigInt::from))
    }

    pub fn coefficients(&self) -> [&BigRational; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    pub fn is_integral(&self) -> bool {
        self.coefficients().iter().all(|c| c.is_integer())
    }

    /// True when every coefficient has nonnegative valuation at `p`.
    pub fn is_integral_at(&self, p: &BigInt) -> bool {
        self.coefficients()
            .iter()
            .all(|c| c.is_zero() || c.denom() % p != BigInt::zero())
    }

    /// Integer coefficients, or `None` if some coefficient has a denominator.
    pub fn integer_coefficients(&self) -> Option<[BigInt; 5]> {
        if !self.is_integral() {
            return None;
        }
        Some(self.coefficients().map(|c| c.to_integer()))
    }

    /// `(b2, b4, b6, b8)`.
    pub fn b_invariants(&self) -> [BigRational; 4] {
        let WeierstrassModel { a1, a2, a3, a4, a6 } = self;
        let b2 = a1 * a1 + rat(4) * a2;
        let b4 = rat(2) * a4 + a1 * a3;
        let b6 = a3 * a3 + rat(4) * a6;
        let b8 = a1 * a1 * a6 + rat(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        [b2, b4, b6, b8]
    }

    pub fn invariants(&self) -> Invariants {
        let [b2, b4, b6, _] = self.b_invariants();
        let c4 = &b2 * &b2 - rat(24) * &b4;
        let c6 = -(&b2 * &b2 * &b2) + rat(36) * &b2 * &b4 - rat(216) * &b6;
        let disc = (&c4 * &c4 * &c4 - &c6 * &c6) / rat(1728);
        let j = if disc.is_zero() {
            JInvariant::Infinite
        } else {
            JInvariant::Finite(&c4 * &c4 * &c4 / &disc)
        };
        Invariants { c4, c6, disc, j }
    }

    pub fn discriminant(&self) -> BigRational {
        self.invariants().disc
    }

    pub fn is_singular(&self) -> bool {
        self.discriminant().is_zero()
    }
}

impl fmt::Display for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}, {}, {}]", self.a1, self.a2, self.a3, self.a4, self.a6)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JInvariant {
    Finite(BigRational),
    /// Marker for singular models.
    Infinite,
}

impl JInvariant {
    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            JInvariant::Finite(j) => Some(j),
            JInvariant::Infinite => None,
        }
    }
}

/// `c4`, `c6`, the discriminant and `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invariants {
    pub c4: BigRational,
    pub c6: BigRational,
    pub disc: BigRational,
    pub j: JInvariant,
}

/// The substitution `x = u^2 x' + r`, `y = u^3 y' + u^2 s x' + w`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdmissibleChange {
    pub u: BigRational,
    pub r: BigRational,
    pub s: BigRational,
    pub w: BigRational,
}

impl AdmissibleChange {
    pub fn new(u: BigRational, r: BigRational, s: BigRational, w: BigRational) -> Result<Self> {
        if u.is_zero() {
            return Err(WeierstrassError::ZeroScale);
        }
        Ok(AdmissibleChange { u, r, s, w })
    }

    pub fn from_i64(u: i64, r: i64, s: i64, w: i64) -> Result<Self> {
        Self::new(rat(u), rat(r), rat(s), rat(w))
    }

    pub fn identity() -> Self {
        AdmissibleChange {
            u: BigRational::one(),
            r: BigRational::zero(),
            s: BigRational::zero(),
            w: BigRational::zero(),
        }
    }

    /// Pure scaling by `u`.
    pub fn scaling(u: BigRational) -> Result<Self> {
        Self::new(u, BigRational::zero(), BigRational::zero(), BigRational::zero())
    }

    /// The change equal to applying `self` first and then `next`.
    pub fn then(&self, next: &AdmissibleChange) -> AdmissibleChange {
        let u2 = &self.u * &self.u;
        AdmissibleChange {
            u: &self.u * &next.u,
            r: &self.r + &u2 * &next.r,
            s: &self.s + &self.u * &next.s,
            w: &self.w + &u2 * &self.s * &next.r + &u2 * &self.u * &next.w,
        }
    }

    pub fn inverse(&self) -> AdmissibleChange {
        let ui = self.u.recip();
        let ui2 = &ui * &ui;
        let ui3 = &ui2 * &ui;
        AdmissibleChange {
            u: ui.clone(),
            r: -(&ui2 * &self.r),
            s: -(&ui * &self.s),
            w: ui3 * (&self.r * &self.s - &self.w),
        }
    }
}

/// Applies the change of variables, returning the image model.
pub fn transform(m: &WeierstrassModel, t: &AdmissibleChange) -> Result<WeierstrassModel> {
    if t.u.is_zero() {
        return Err(WeierstrassError::ZeroScale);
    }
    let AdmissibleChange { u, r, s, w } = t;
    let WeierstrassModel { a1, a2, a3, a4, a6 } = m;
    let two = rat(2);
    let three = rat(3);
    let u2 = u * u;
    let u3 = &u2 * u;
    let u4 = &u2 * &u2;
    let u6 = &u3 * &u3;

    let n1 = a1 + &two * s;
    let n2 = a2 - s * a1 + &three * r - s * s;
    let n3 = a3 + r * a1 + &two * w;
    let n4 = a4 - s * a3 + &two * r * a2 - (w + r * s) * a1 + &three * r * r - &two * s * w;
    let n6 = a6 + r * a4 + r * r * a2 + r * r * r - w * a3 - w * w - r * w * a1;

    Ok(WeierstrassModel {
        a1: n1 / u,
        a2: n2 / u2,
        a3: n3 / u3,
        a4: n4 / u4,
        a6: n6 / u6,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NaiveReduction {
    Good,
    Multiplicative,
    Additive,
}

/// Reduction type read off `v_p(Δ)` and `v_p(c4)`. The model must already be
/// minimal at `p`; use [`crate::tate::tate`] when that is not known.
pub fn naive_reduction(m: &WeierstrassModel, p: &BigInt) -> Result<NaiveReduction> {
    if !m.is_integral_at(p) {
        return Err(WeierstrassError::NotIntegral);
    }
    let inv = m.invariants();
    if inv.disc.is_zero() {
        return Err(WeierstrassError::Singular);
    }
    if vp_rational(&inv.disc, p)? == 0 {
        return Ok(NaiveReduction::Good);
    }
    let c4_unit = !inv.c4.is_zero() && vp_rational(&inv.c4, p)? == 0;
    Ok(if c4_unit {
        NaiveReduction::Multiplicative
    } else {
        NaiveReduction::Additive
    })
}

/// `v_p(j)`, or `None` when `j = 0`.
pub fn vp_j(m: &WeierstrassModel, p: &BigInt) -> Result<Option<i64>> {
    let inv = m.invariants();
    match inv.j {
        JInvariant::Infinite => Err(WeierstrassError::Singular),
        JInvariant::Finite(j) if j.is_zero() => Ok(None),
        JInvariant::Finite(j) => Ok(Some(vp_rational(&j, p)?)),
    }
}

/// Class of `-c4/c6` in `Q_p^x / (Q_p^x)^2`, defined when `v_p(j) < 0`.
pub fn gamma_invariant(m: &WeierstrassModel, p: &BigInt) -> Result<SquareClass> {
    match vp_j(m, p)? {
        Some(vj) if vj < 0 => {}
        other => {
            return Err(WeierstrassError::NotPotentiallyMultiplicative {
                p: p.clone(),
                vj: other.map_or("+inf".to_string(), |v| v.to_string()),
            })
        }
    }
    let inv = m.invariants();
    let ratio = -(&inv.c4 / &inv.c6);
    Ok(square_class(&ratio, p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::{is_unramified_quadratic, legendre};

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn invariants_of_y2_plus_y_eq_x3() {
        let inv = WeierstrassModel::from_i64([0, 0, 1, 0, 0]).invariants();
        assert_eq!(inv.c4, rat(0));
        assert_eq!(inv.c6, rat(-216));
        assert_eq!(inv.disc, rat(-27));
        assert_eq!(inv.j, JInvariant::Finite(rat(0)));
    }

    #[test]
    fn zero_model_is_singular() {
        let m = WeierstrassModel::from_i64([0; 5]);
        let inv = m.invariants();
        assert!(inv.disc.is_zero());
        assert_eq!(inv.j, JInvariant::Infinite);
        assert!(m.is_singular());
    }

    #[test]
    fn c5_member_at_one_one() {
        let m = WeierstrassModel::from_i64([0, -1, -1, 0, 0]);
        assert_eq!(m.discriminant(), rat(-11));
    }

    #[test]
    fn identity_change_is_noop() {
        let m = WeierstrassModel::from_i64([1, -1, 3, 4, -7]);
        assert_eq!(transform(&m, &AdmissibleChange::identity()).unwrap(), m);
    }

    #[test]
    fn scaling_law() {
        let m = WeierstrassModel::from_i64([1, -1, 3, 4, -7]);
        let t = AdmissibleChange::from_i64(3, 0, 0, 0).unwrap();
        let m2 = transform(&m, &t).unwrap();
        let u12 = BigRational::from_integer(bi(3).pow(12));
        assert_eq!(m2.discriminant() * u12, m.discriminant());
    }

    #[test]
    fn c6_change_with_third_scale_is_integral() {
        // C6 member at (a, b) = (5, 1); z = 3b - a.
        let (a, b) = (5i64, 1i64);
        let m = WeierstrassModel::from_i64([a - b, -a * b - b * b, -a * a * b - a * b * b, 0, 0]);
        let z = 3 * b - a;
        let t = AdmissibleChange::new(
            BigRational::new(bi(1), bi(3)),
            BigRational::new(bi(a * z), bi(9)),
            rat(2 * b),
            BigRational::new(bi(2 * a * (a + 3 * b) * (a + 3 * b)), bi(27)),
        )
        .unwrap();
        let f = transform(&m, &t).unwrap();
        assert!(f.is_integral(), "{f}");
    }

    #[test]
    fn zero_scale_rejected() {
        let m = WeierstrassModel::from_i64([0, 0, 1, 0, 0]);
        let t = AdmissibleChange {
            u: rat(0),
            ..AdmissibleChange::identity()
        };
        assert_eq!(transform(&m, &t), Err(WeierstrassError::ZeroScale));
        assert!(AdmissibleChange::from_i64(0, 1, 1, 1).is_err());
    }

    #[test]
    fn inverse_undoes_change() {
        let m = WeierstrassModel::from_i64([1, 2, 3, 4, 5]);
        let t = AdmissibleChange::new(
            BigRational::new(bi(2), bi(3)),
            rat(5),
            BigRational::new(bi(-1), bi(2)),
            rat(7),
        )
        .unwrap();
        let back = transform(&transform(&m, &t).unwrap(), &t.inverse()).unwrap();
        assert_eq!(back, m);
        assert_eq!(t.then(&t.inverse()), AdmissibleChange::identity());
    }

    #[test]
    fn naive_reduction_examples() {
        let c5 = WeierstrassModel::from_i64([0, -1, -1, 0, 0]);
        assert_eq!(naive_reduction(&c5, &bi(2)), Ok(NaiveReduction::Good));
        assert_eq!(naive_reduction(&c5, &bi(11)), Ok(NaiveReduction::Multiplicative));
        let c30 = WeierstrassModel::from_i64([0, 0, 1, 0, 0]);
        assert_eq!(naive_reduction(&c30, &bi(3)), Ok(NaiveReduction::Additive));
    }

    #[test]
    fn gamma_for_c3_member() {
        // C3 at a = b = 1: y^2 + xy + y = x^3, discriminant -26.
        let m = WeierstrassModel::from_i64([1, 0, 1, 0, 0]);
        assert_eq!(m.discriminant(), rat(-26));
        let g2 = gamma_invariant(&m, &bi(2)).unwrap();
        assert!(is_unramified_quadratic(&g2));
        assert!(!g2.is_trivial());

        let g13 = gamma_invariant(&m, &bi(13)).unwrap();
        let inv = m.invariants();
        let prod = -(inv.c4 * inv.c6).to_integer();
        assert_eq!(legendre(&prod, &bi(13)), Ok(1));
        assert!(g13.is_trivial());
    }

    #[test]
    fn gamma_precondition() {
        let m = WeierstrassModel::from_i64([0, -1, -1, 0, 0]);
        assert!(matches!(
            gamma_invariant(&m, &bi(3)),
            Err(WeierstrassError::NotPotentiallyMultiplicative { .. })
        ));
        let j0 = WeierstrassModel::from_i64([0, 0, 1, 0, 0]);
        assert!(gamma_invariant(&j0, &bi(3)).is_err());
    }
}
