//! Tate's algorithm over Q.
//!
//! This module is the independent referee for the table engine in
//! [`crate::classify`]: it knows nothing about the parameterized families and
//! works from the Weierstrass coefficients alone. The loop follows the usual
//! presentation (move the singular point to the origin, peel off types II,
//! III, IV, analyse the cubic, then the I_n* sub-loop or the triple-root
//! branch), and divides through by `p` whenever the model turns out not to be
//! minimal.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::numtheory::{self, legendre, NumTheoryError};
use crate::weierstrass::{AdmissibleChange, WeierstrassError, WeierstrassModel};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TateError {
    #[error("the model is singular")]
    Singular,
    #[error("the model is not integral at {0}")]
    NotIntegral(BigInt),
    #[error(transparent)]
    NumTheory(#[from] NumTheoryError),
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
}

pub type Result<T> = std::result::Result<T, TateError>;

/// Kodaira symbol of the special fibre.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KodairaType {
    I0,
    /// `I_n`, `n >= 1`.
    I(u32),
    II,
    III,
    IV,
    I0Star,
    /// `I_n^*`, `n >= 1`.
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaType {
    pub fn is_multiplicative(&self) -> bool {
        matches!(self, KodairaType::I(_))
    }

    pub fn is_additive(&self) -> bool {
        !matches!(self, KodairaType::I0 | KodairaType::I(_))
    }

    /// Number of irreducible components of the special fibre.
    pub fn components(&self) -> u32 {
        match *self {
            KodairaType::I0 => 1,
            KodairaType::I(n) => n,
            KodairaType::II => 1,
            KodairaType::III => 2,
            KodairaType::IV => 3,
            KodairaType::I0Star => 5,
            KodairaType::IStar(n) => 5 + n,
            KodairaType::IVStar => 7,
            KodairaType::IIIStar => 8,
            KodairaType::IIStar => 9,
        }
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I0 => write!(f, "I0"),
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::II => write!(f, "II"),
            KodairaType::III => write!(f, "III"),
            KodairaType::IV => write!(f, "IV"),
            KodairaType::I0Star => write!(f, "I0*"),
            KodairaType::IStar(n) => write!(f, "I{n}*"),
            KodairaType::IVStar => write!(f, "IV*"),
            KodairaType::IIIStar => write!(f, "III*"),
            KodairaType::IIStar => write!(f, "II*"),
        }
    }
}

/// Output of Tate's algorithm at one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalReductionData {
    pub p: BigInt,
    pub kodaira: KodairaType,
    /// Conductor exponent.
    pub f_p: u32,
    /// `n` for `I_n` and `I_n^*`, zero otherwise.
    pub n: u32,
    /// Present iff the type is `I_n`.
    pub split: Option<bool>,
    /// `v_p` of the minimal discriminant.
    pub min_disc_valuation: u32,
}

struct TateRun {
    data: LocalReductionData,
    model: [BigInt; 5],
    change: AdmissibleChange,
    scaled: bool,
}

fn rat(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

fn pdiv(x: &BigInt, p: &BigInt) -> bool {
    (x % p).is_zero()
}

fn val(x: &BigInt, p: &BigInt) -> u64 {
    numtheory::vp(x, p).unwrap_or(u64::MAX)
}

fn reduce(x: &BigInt, p: &BigInt) -> BigInt {
    x.mod_floor(p)
}

fn inv_mod(x: &BigInt, p: &BigInt) -> BigInt {
    // p is prime and x a unit, so x^(p-2) is the inverse.
    reduce(x, p).modpow(&(p - 2u32), p)
}

/// Does `a t^2 + b t + c` have a root in F_p?
fn quad_has_root(a: &BigInt, b: &BigInt, c: &BigInt, p: &BigInt) -> bool {
    let (a, b, c) = (reduce(a, p), reduce(b, p), reduce(c, p));
    if a.is_zero() {
        return !b.is_zero() || c.is_zero();
    }
    if p <= &BigInt::from(3) {
        // Direct search over F_2 or F_3.
        let mut t = BigInt::zero();
        while &t < p {
            if (&a * &t * &t + &b * &t + &c).mod_floor(p).is_zero() {
                return true;
            }
            t += 1;
        }
        return false;
    }
    let disc = &b * &b - BigInt::from(4) * &a * &c;
    legendre(&disc, p).map(|s| s >= 0).unwrap_or(false)
}

struct Curve {
    a: [BigInt; 5],
}

impl Curve {
    fn b(&self) -> [BigInt; 4] {
        let [a1, a2, a3, a4, a6] = &self.a;
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        [b2, b4, b6, b8]
    }

    fn c4_c6_disc(&self) -> (BigInt, BigInt, BigInt) {
        let [b2, b4, b6, b8] = self.b();
        let c4 = &b2 * &b2 - 24 * &b4;
        let c6 = -(&b2 * &b2 * &b2) + 36 * &b2 * &b4 - 216 * &b6;
        let disc = -(&b2 * &b2 * &b8) - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6;
        (c4, c6, disc)
    }

    /// Translation `x -> x + r`, `y -> y + s x + t`.
    fn rst(&mut self, r: &BigInt, s: &BigInt, t: &BigInt, change: &mut AdmissibleChange) {
        let [a1, a2, a3, a4, a6] = &self.a;
        let n1 = a1 + 2 * s;
        let n2 = a2 - s * a1 + 3 * r - s * s;
        let n3 = a3 + r * a1 + 2 * t;
        let n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
        let n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
        self.a = [n1, n2, n3, n4, n6];
        let step = AdmissibleChange {
            u: BigRational::one(),
            r: rat(r),
            s: rat(s),
            w: rat(t),
        };
        *change = change.then(&step);
    }

    fn divide_by(&mut self, p: &BigInt, change: &mut AdmissibleChange) {
        let [a1, a2, a3, a4, a6] = &self.a;
        self.a = [a1 / p, a2 / p.pow(2), a3 / p.pow(3), a4 / p.pow(4), a6 / p.pow(6)];
        let step = AdmissibleChange {
            u: rat(p),
            r: BigRational::zero(),
            s: BigRational::zero(),
            w: BigRational::zero(),
        };
        *change = change.then(&step);
    }
}

/// Scales a `p`-integral model by a `p`-unit so all coefficients are integers.
fn integralize(m: &WeierstrassModel, p: &BigInt) -> Result<([BigInt; 5], AdmissibleChange)> {
    if !m.is_integral_at(p) {
        return Err(TateError::NotIntegral(p.clone()));
    }
    if let Some(coeffs) = m.integer_coefficients() {
        return Ok((coeffs, AdmissibleChange::identity()));
    }
    let d = m.coefficients().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let t = AdmissibleChange::scaling(BigRational::new(BigInt::one(), d))?;
    let scaled = crate::weierstrass::transform(m, &t)?;
    let coeffs = scaled
        .integer_coefficients()
        .expect("clearing denominators yields an integral model");
    Ok((coeffs, t))
}

fn run(m: &WeierstrassModel, p: &BigInt) -> Result<TateRun> {
    if !numtheory::is_probable_prime(p) {
        return Err(NumTheoryError::NotPrime(p.clone()).into());
    }
    if m.is_singular() {
        return Err(TateError::Singular);
    }
    let (coeffs, mut change) = integralize(m, p)?;
    let mut curve = Curve { a: coeffs };
    let mut scaled = false;
    let two = BigInt::from(2);
    let three = BigInt::from(3);
    let is2 = p == &two;
    let is3 = p == &three;
    let half = (p + 1u32) / 2u32;
    let p2 = p * p;

    loop {
        let (c4, c6, disc) = curve.c4_c6_disc();
        let n = val(&disc, p) as u32;
        let done =
            |kodaira: KodairaType, f_p: u32, idx: u32, split: Option<bool>, curve: &Curve, change: AdmissibleChange| {
                TateRun {
                    data: LocalReductionData {
                        p: p.clone(),
                        kodaira,
                        f_p,
                        n: idx,
                        split,
                        min_disc_valuation: n,
                    },
                    model: curve.a.clone(),
                    change,
                    scaled,
                }
            };
        if n == 0 {
            return Ok(done(KodairaType::I0, 0, 0, None, &curve, change));
        }

        // Move the singular point of the reduction to (0, 0).
        let [b2, b4, b6, _] = curve.b();
        let [a1, a2, a3, a4, a6] = curve.a.clone();
        let (r, t) = if is2 {
            if pdiv(&b2, p) {
                let r = reduce(&a4, p);
                let t = reduce(&(&r * (1 + &a2 + &a4) + &a6), p);
                (r, t)
            } else {
                let r = reduce(&a3, p);
                let t = reduce(&(&r + &a4), p);
                (r, t)
            }
        } else if is3 {
            let r = if pdiv(&b2, p) {
                reduce(&-&b6, p)
            } else {
                reduce(&-(&b2 * &b4), p)
            };
            let t = reduce(&(&a1 * &r + &a3), p);
            (r, t)
        } else {
            let r = if pdiv(&c4, p) {
                reduce(&(-inv_mod(&BigInt::from(12), p) * &b2), p)
            } else {
                let c4_12 = BigInt::from(12) * &c4;
                reduce(&(-inv_mod(&c4_12, p) * (&c6 + &b2 * &c4)), p)
            };
            let t = reduce(&(-&half * (&a1 * &r + &a3)), p);
            (r, t)
        };
        curve.rst(&r, &BigInt::zero(), &t, &mut change);

        if !pdiv(&c4, p) {
            let [a1, a2, ..] = &curve.a;
            let split = quad_has_root(&BigInt::one(), a1, &-a2, p);
            return Ok(done(KodairaType::I(n), 1, n, Some(split), &curve, change));
        }

        let [_, _, b6, b8] = curve.b();
        if val(&curve.a[4], p) < 2 {
            return Ok(done(KodairaType::II, n, 0, None, &curve, change));
        }
        if val(&b8, p) < 3 {
            return Ok(done(KodairaType::III, n - 1, 0, None, &curve, change));
        }
        if val(&b6, p) < 3 {
            return Ok(done(KodairaType::IV, n - 2, 0, None, &curve, change));
        }

        // Arrange p | a1, a2; p^2 | a3, a4; p^3 | a6.
        let (s, t) = if is2 {
            let s = reduce(&curve.a[1], p);
            let t = p * reduce(&(&curve.a[4] / &p2), p);
            (s, t)
        } else {
            (-&curve.a[0] * &half, -&curve.a[2] * &half)
        };
        curve.rst(&BigInt::zero(), &s, &t, &mut change);

        let b = &curve.a[1] / p;
        let c = &curve.a[3] / &p2;
        let d = &curve.a[4] / (&p2 * p);
        let w = 27 * &d * &d - &b * &b * &c * &c + 4 * &b * &b * &b * &d - 18 * &b * &c * &d + 4 * &c * &c * &c;
        let x = 3 * &c - &b * &b;

        if !pdiv(&w, p) {
            return Ok(done(KodairaType::I0Star, n - 4, 0, None, &curve, change));
        }

        if !pdiv(&x, p) {
            // Double root: I_m^*.
            let r = if is2 {
                reduce(&c, p)
            } else if is3 {
                reduce(&(&c * inv_mod(&b, p)), p)
            } else {
                reduce(&((&b * &c - 9 * &d) * inv_mod(&(2 * &x), p)), p)
            };
            curve.rst(&(p * r), &BigInt::zero(), &BigInt::zero(), &mut change);
            let mut ix = 3u32;
            let mut iy = 3u32;
            let mut mx = p2.clone();
            let mut my = p2.clone();
            loop {
                let a3t = &curve.a[2] / &my;
                let a6t = &curve.a[4] / (&mx * &my);
                if !pdiv(&(&a3t * &a3t + 4 * &a6t), p) {
                    break;
                }
                let t = if is2 {
                    &my * reduce(&a6t, p)
                } else {
                    &my * reduce(&(-&a3t * &half), p)
                };
                curve.rst(&BigInt::zero(), &BigInt::zero(), &t, &mut change);
                my *= p;
                iy += 1;
                let a2t = &curve.a[1] / p;
                let a4t = &curve.a[3] / (p * &mx);
                let a6t = &curve.a[4] / (&mx * &my);
                if !pdiv(&(&a4t * &a4t - 4 * &a6t * &a2t), p) {
                    break;
                }
                let r = if is2 {
                    &mx * reduce(&(&a6t * inv_mod(&a2t, p)), p)
                } else {
                    &mx * reduce(&(-&a4t * inv_mod(&(2 * &a2t), p)), p)
                };
                curve.rst(&r, &BigInt::zero(), &BigInt::zero(), &mut change);
                mx *= p;
                ix += 1;
            }
            let m_star = ix + iy - 5;
            return Ok(done(
                KodairaType::IStar(m_star),
                n - m_star - 4,
                m_star,
                None,
                &curve,
                change,
            ));
        }

        // Triple root: move it to T = 0.
        let r = if is2 {
            reduce(&b, p)
        } else if is3 {
            reduce(&-&d, p)
        } else {
            reduce(&(-&b * inv_mod(&three, p)), p)
        };
        curve.rst(&(p * r), &BigInt::zero(), &BigInt::zero(), &mut change);
        let p4 = &p2 * &p2;
        let x3 = &curve.a[2] / &p2;
        let x6 = &curve.a[4] / &p4;
        if !pdiv(&(&x3 * &x3 + 4 * &x6), p) {
            return Ok(done(KodairaType::IVStar, n - 6, 0, None, &curve, change));
        }
        let t = if is2 { reduce(&x6, p) } else { reduce(&(&x3 * &half), p) };
        curve.rst(&BigInt::zero(), &BigInt::zero(), &(-&p2 * t), &mut change);
        if val(&curve.a[3], p) < 4 {
            return Ok(done(KodairaType::IIIStar, n - 7, 0, None, &curve, change));
        }
        if val(&curve.a[4], p) < 6 {
            return Ok(done(KodairaType::IIStar, n - 8, 0, None, &curve, change));
        }
        // Not minimal: divide through and start over.
        curve.divide_by(p, &mut change);
        scaled = true;
    }
}

/// Local reduction data of `m` at `p`. The model must be integral at `p`.
pub fn tate(m: &WeierstrassModel, p: &BigInt) -> Result<LocalReductionData> {
    Ok(run(m, p)?.data)
}

/// A model minimal at `p` together with the change that produces it. When `m`
/// is already minimal the change is the identity and `m` is returned as is.
pub fn minimal_model_at(m: &WeierstrassModel, p: &BigInt) -> Result<(WeierstrassModel, AdmissibleChange)> {
    let out = run(m, p)?;
    if !out.scaled {
        return Ok((m.clone(), AdmissibleChange::identity()));
    }
    Ok((WeierstrassModel::from_integers(out.model), out.change))
}

/// Primes dividing the discriminant of `m`.
pub fn bad_prime_candidates(m: &WeierstrassModel) -> Result<Vec<BigInt>> {
    let disc = m.discriminant();
    if disc.is_zero() {
        return Err(TateError::Singular);
    }
    let mut primes: Vec<BigInt> = numtheory::factor(disc.numer())?.primes().cloned().collect();
    for p in numtheory::factor(disc.denom())?.primes() {
        if !primes.contains(p) {
            primes.push(p.clone());
        }
    }
    primes.sort();
    Ok(primes)
}

/// Local data at every prime dividing the discriminant of an integral model,
/// including primes where the model merely fails to be minimal (those come
/// back as `I0`).
pub fn all_local_data(m: &WeierstrassModel) -> Result<Vec<LocalReductionData>> {
    if !m.is_integral() {
        return Err(TateError::NotIntegral(BigInt::zero()));
    }
    bad_prime_candidates(m)?.iter().map(|p| tate(m, p)).collect()
}

/// `prod p^f_p` over the primes of bad reduction.
pub fn global_conductor(m: &WeierstrassModel) -> Result<BigInt> {
    Ok(all_local_data(m)?
        .iter()
        .fold(BigInt::one(), |acc, d| acc * d.p.pow(d.f_p)))
}

/// Conductor-exponent bounds that hold for every elliptic curve over Q.
pub fn exponent_bound(p: &BigInt) -> u32 {
    if p == &BigInt::from(2) {
        8
    } else if p == &BigInt::from(3) {
        5
    } else {
        2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weierstrass::transform;

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn model(c: [i64; 5]) -> WeierstrassModel {
        WeierstrassModel::from_i64(c)
    }

    #[test]
    fn good_prime() {
        let d = tate(&model([0, -1, -1, 0, 0]), &bi(3)).unwrap();
        assert_eq!(d.kodaira, KodairaType::I0);
        assert_eq!(d.f_p, 0);
        assert_eq!(d.split, None);
    }

    #[test]
    fn curve_11a3_split_i1() {
        let d = tate(&model([0, -1, -1, 0, 0]), &bi(11)).unwrap();
        assert_eq!(d.kodaira, KodairaType::I(1));
        assert_eq!((d.f_p, d.n, d.split), (1, 1, Some(true)));
    }

    #[test]
    fn y2_plus_y_is_type_ii_at_3() {
        let d = tate(&model([0, 0, 1, 0, 0]), &bi(3)).unwrap();
        assert_eq!(d.kodaira, KodairaType::II);
        assert_eq!(d.f_p, 3);
        assert_eq!(global_conductor(&model([0, 0, 1, 0, 0])).unwrap(), bi(27));
    }

    #[test]
    fn conductors_of_known_curves() {
        // Reference conductors of small curves (Cremona labels in comments).
        let cases: [([i64; 5], i64); 11] = [
            ([0, -1, 0, -4, 4], 24),    // 24a1
            ([0, 1, 0, 4, 4], 20),      // 20a1
            ([0, 1, 1, -9, -15], 19),   // 19a1
            ([0, -1, 1, -10, -20], 11), // 11a1
            ([1, 0, 1, 4, -6], 14),     // 14a1
            ([1, 1, 1, -10, -10], 15),  // 15a1
            ([0, 1, 1, -2, 0], 389),    // 389a1
            ([0, 0, 1, -1, 0], 37),     // 37a1
            ([0, 0, 0, -1, 0], 32),     // 32a2: y^2 = x^3 - x
            ([0, 0, 0, 0, 1], 36),      // 36a1: y^2 = x^3 + 1
            ([0, 0, 1, 0, -7], 27),     // 27a1
        ];
        for (c, n) in cases {
            assert_eq!(global_conductor(&model(c)).unwrap(), bi(n), "{c:?}");
        }
    }

    #[test]
    fn kodaira_types_at_2_and_3() {
        // y^2 = x^3 - x: 32a2, type III at 2 with f = 5.
        let d = tate(&model([0, 0, 0, -1, 0]), &bi(2)).unwrap();
        assert_eq!((d.kodaira, d.f_p), (KodairaType::III, 5));
        // y^2 = x^3 + 1: 36a1, IV at 2 and III at 3, both with f = 2.
        let d = tate(&model([0, 0, 0, 0, 1]), &bi(2)).unwrap();
        assert_eq!((d.kodaira, d.f_p), (KodairaType::IV, 2));
        let d = tate(&model([0, 0, 0, 0, 1]), &bi(3)).unwrap();
        assert_eq!((d.kodaira, d.f_p), (KodairaType::III, 2));
    }

    #[test]
    fn scaled_model_is_reduced_back() {
        let m = model([0, -1, -1, 0, 0]);
        for p in [2i64, 3, 5] {
            let big = transform(&m, &AdmissibleChange::from_i64(1, 0, 0, 0).unwrap()).unwrap();
            let t = AdmissibleChange::scaling(BigRational::new(bi(1), bi(p))).unwrap();
            let big = transform(&big, &t).unwrap();
            assert!(big.is_integral());
            let d = tate(&big, &bi(p)).unwrap();
            assert_eq!(d.kodaira, KodairaType::I0);
            assert_eq!(d.min_disc_valuation, 0);
            let (min, change) = minimal_model_at(&big, &bi(p)).unwrap();
            assert_eq!(transform(&big, &change).unwrap(), min);
            assert_eq!(numtheory::vp_rational(&min.discriminant(), &bi(p)).unwrap(), 0);
        }
    }

    #[test]
    fn minimal_model_identity_when_minimal() {
        let m = model([0, -1, -1, 0, 0]);
        let (min, change) = minimal_model_at(&m, &bi(11)).unwrap();
        assert_eq!(min, m);
        assert_eq!(change, AdmissibleChange::identity());
    }

    #[test]
    fn c6_member_drops_twelve_at_two() {
        // C6 at (7, 1): v2(a + b) = 3, so the raw model is not minimal at 2.
        let (a, b) = (7i64, 1i64);
        let m = model([a - b, -a * b - b * b, -a * a * b - a * b * b, 0, 0]);
        let raw = numtheory::vp_rational(&m.discriminant(), &bi(2)).unwrap();
        let (min, change) = minimal_model_at(&m, &bi(2)).unwrap();
        let reduced = numtheory::vp_rational(&min.discriminant(), &bi(2)).unwrap();
        assert_eq!(raw - reduced, 12);
        assert_eq!(change.u, BigRational::from_integer(bi(2)));
        assert_eq!(tate(&m, &bi(2)).unwrap().min_disc_valuation as i64, reduced);
    }

    #[test]
    fn singular_and_non_integral_rejected() {
        assert_eq!(tate(&model([0; 5]), &bi(2)), Err(TateError::Singular));
        let m = WeierstrassModel::new(
            BigRational::new(bi(1), bi(2)),
            BigRational::zero(),
            BigRational::one(),
            BigRational::zero(),
            BigRational::zero(),
        );
        assert_eq!(tate(&m, &bi(2)), Err(TateError::NotIntegral(bi(2))));
        // integral away from 2 is enough at 3
        assert!(tate(&m, &bi(3)).is_ok());
    }

    #[test]
    fn quad_roots_small_fields() {
        // t^2 + t + 1 is irreducible over F_2, t^2 + t is not.
        assert!(!quad_has_root(&bi(1), &bi(1), &bi(1), &bi(2)));
        assert!(quad_has_root(&bi(1), &bi(1), &bi(0), &bi(2)));
        // t^2 + 1 over F_3 has no root; t^2 - 1 does.
        assert!(!quad_has_root(&bi(1), &bi(0), &bi(1), &bi(3)));
        assert!(quad_has_root(&bi(1), &bi(0), &bi(-1), &bi(3)));
        // t^2 - 2 over F_7: 3^2 = 2.
        assert!(quad_has_root(&bi(1), &bi(0), &bi(-2), &bi(7)));
        assert!(!quad_has_root(&bi(1), &bi(0), &bi(-3), &bi(7)));
    }
}
