//! Exact integer and rational number theory.
//!
//! Everything here works on arbitrary-precision integers. Factorization runs
//! trial division by the primes below 10^6, then Pollard rho with Brent's
//! cycle detection on whatever cofactor is left. Primality is Miller-Rabin
//! with the first thirteen prime bases, which is deterministic below
//! 3.317 * 10^24; above that bound a few extra bases are added and the answer
//! is a strong probable prime.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::LazyLock;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Environment variable holding the factorization timeout in milliseconds.
pub const FACTOR_TIMEOUT_ENV: &str = "ODDTORSION_FACTOR_TIMEOUT_MS";

const TRIAL_BOUND: u32 = 1_000_000;
const DEFAULT_TIMEOUT: Duration = Duration::from_secs(30);

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum NumTheoryError {
    #[error("infinite valuation: the argument is zero")]
    InfiniteValuation,
    #[error("{0} must be nonzero")]
    Zero(&'static str),
    #[error("{0} is not a prime")]
    NotPrime(BigInt),
    #[error("the Legendre symbol needs an odd prime, got {0}")]
    EvenPrime(BigInt),
    #[error("square classes at different primes ({0} and {1}) cannot be multiplied")]
    PrimeMismatch(BigInt, BigInt),
    #[error("incomplete factorization: cofactor {cofactor} could not be split in time")]
    IncompleteFactorization {
        cofactor: BigInt,
        partial: PrimeFactorization,
    },
}

pub type Result<T> = std::result::Result<T, NumTheoryError>;

static SMALL_PRIMES: LazyLock<Vec<u32>> = LazyLock::new(|| sieve(TRIAL_BOUND));

fn sieve(bound: u32) -> Vec<u32> {
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn check_prime_arg(p: &BigInt) -> Result<()> {
    if p < &BigInt::from(2) {
        return Err(NumTheoryError::NotPrime(p.clone()));
    }
    Ok(())
}

/// Largest `k` with `p^k | n`.
pub fn vp(n: &BigInt, p: &BigInt) -> Result<u64> {
    check_prime_arg(p)?;
    if n.is_zero() {
        return Err(NumTheoryError::InfiniteValuation);
    }
    let mut k = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return Ok(k);
        }
        m = q;
        k += 1;
    }
}

/// Valuation of a nonzero integer, `None` for zero. Handy for table predicates
/// that read "v_p(x) > 0" and must treat zero as divisible.
pub fn vp_opt(n: &BigInt, p: &BigInt) -> Option<u64> {
    vp(n, p).ok()
}

/// `v_p(numerator) - v_p(denominator)` of the reduced fraction.
pub fn vp_rational(q: &BigRational, p: &BigInt) -> Result<i64> {
    if q.is_zero() {
        check_prime_arg(p)?;
        return Err(NumTheoryError::InfiniteValuation);
    }
    let num = vp(q.numer(), p)? as i64;
    let den = vp(q.denom(), p)? as i64;
    Ok(num - den)
}

/// Strips every factor `p` from `n`, returning the exponent and the cofactor.
pub fn split_off(n: &BigInt, p: &BigInt) -> Result<(u64, BigInt)> {
    let k = vp(n, p)?;
    Ok((k, n / p.pow(k as u32)))
}

// Miller-Rabin ------------------------------------------------------------

const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const MR_EXTRA_BASES: [u32; 8] = [43, 47, 53, 59, 61, 67, 71, 73];

fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES[..12] {
        let p = p as u64;
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    // The first twelve prime bases are deterministic for every u64.
    'witness: for &a in &MR_BASES[..12] {
        let mut x = powmod_u64(a as u64, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin primality test; exact below 3.317 * 10^24.
pub fn is_probable_prime(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in MR_BASES.iter().chain(MR_EXTRA_BASES.iter()) {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'witness: for &a in MR_BASES.iter().chain(MR_EXTRA_BASES.iter()) {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// Factorization -----------------------------------------------------------

/// `sign * prod p^e` with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFactorization {
    sign: i8,
    factors: Vec<(BigInt, u32)>,
}

impl PrimeFactorization {
    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn factors(&self) -> &[(BigInt, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// Multiplies the factorization back out.
    pub fn value(&self) -> BigInt {
        let prod = self.factors.iter().fold(BigInt::one(), |acc, (p, e)| acc * p.pow(*e));
        if self.sign < 0 {
            -prod
        } else {
            prod
        }
    }

    fn from_map(sign: i8, map: BTreeMap<BigInt, u32>) -> Self {
        PrimeFactorization {
            sign,
            factors: map.into_iter().collect(),
        }
    }
}

impl fmt::Display for PrimeFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "{}", self.sign);
        }
        if self.sign < 0 {
            write!(f, "-")?;
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Knobs for [`factor_with`].
#[derive(Debug, Clone, Copy)]
pub struct FactorConfig {
    /// Wall-clock budget for the Pollard rho phase; `None` means unbounded.
    pub timeout: Option<Duration>,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            timeout: Some(DEFAULT_TIMEOUT),
        }
    }
}

impl FactorConfig {
    /// Reads the timeout from [`FACTOR_TIMEOUT_ENV`], falling back to the default.
    pub fn from_env() -> Self {
        match std::env::var(FACTOR_TIMEOUT_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
        {
            Some(0) => FactorConfig { timeout: None },
            Some(ms) => FactorConfig {
                timeout: Some(Duration::from_millis(ms)),
            },
            None => FactorConfig::default(),
        }
    }
}

/// Complete factorization of a nonzero integer using [`FactorConfig::from_env`].
pub fn factor(n: &BigInt) -> Result<PrimeFactorization> {
    factor_with(n, &FactorConfig::from_env())
}

pub fn factor_with(n: &BigInt, config: &FactorConfig) -> Result<PrimeFactorization> {
    if n.is_zero() {
        return Err(NumTheoryError::Zero("the integer to factor"));
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut found = BTreeMap::new();
    let mut m = n.abs();

    if let Some(small) = m.to_u64() {
        let rest = trial_divide_u64(small, &mut found);
        m = BigInt::from(rest);
    } else {
        trial_divide_big(&mut m, &mut found);
    }

    let deadline = config.timeout.map(|t| Instant::now() + t);
    let mut stack = Vec::new();
    if !m.is_one() {
        stack.push(m);
    }
    while let Some(x) = stack.pop() {
        if is_probable_prime(&x) {
            *found.entry(x).or_insert(0) += 1;
            continue;
        }
        match brent_split(&x, deadline) {
            Some(d) => {
                let other = &x / &d;
                stack.push(d);
                stack.push(other);
            }
            None => {
                let mut cofactor = x;
                for y in stack {
                    cofactor *= y;
                }
                return Err(NumTheoryError::IncompleteFactorization {
                    cofactor,
                    partial: PrimeFactorization::from_map(sign, found),
                });
            }
        }
    }
    Ok(PrimeFactorization::from_map(sign, found))
}

fn trial_divide_u64(mut m: u64, found: &mut BTreeMap<BigInt, u32>) -> u64 {
    if m == 1 || is_prime_u64(m) {
        return m;
    }
    for &p in SMALL_PRIMES.iter() {
        let p = p as u64;
        if p * p > m {
            break;
        }
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            found.insert(BigInt::from(p), e);
            if m == 1 || is_prime_u64(m) {
                break;
            }
        }
    }
    m
}

fn trial_divide_big(m: &mut BigInt, found: &mut BTreeMap<BigInt, u32>) {
    if is_probable_prime(m) {
        return;
    }
    for &p in SMALL_PRIMES.iter() {
        if (&*m % p).is_zero() {
            let mut e = 0;
            while (&*m % p).is_zero() {
                *m /= p;
                e += 1;
            }
            found.insert(BigInt::from(p), e);
            if let Some(small) = m.to_u64() {
                *m = BigInt::from(trial_divide_u64(small, found));
                return;
            }
            if is_probable_prime(m) {
                return;
            }
        }
    }
}

/// Finds a nontrivial divisor of the odd composite `n`.
fn brent_split(n: &BigInt, deadline: Option<Instant>) -> Option<BigInt> {
    if n.is_even() {
        return Some(BigInt::from(2));
    }
    let one = BigInt::one();
    const BATCH: u64 = 128;
    for c in 1u32.. {
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut y = BigInt::from(2);
        let mut r: u64 = 1;
        let mut q = BigInt::one();
        let mut g = BigInt::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..BATCH.min(r - k) {
                    y = f(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += BATCH;
            }
            r *= 2;
            if let Some(d) = deadline {
                if Instant::now() > d {
                    return None;
                }
            }
        }
        if &g == n {
            // Batched gcd overshot; retrace one step at a time.
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n && g != one {
            return Some(g);
        }
        if let Some(d) = deadline {
            if Instant::now() > d {
                return None;
            }
        }
    }
    None
}

// Quadratic symbols and square classes ------------------------------------

/// Legendre symbol `(a/p)` for an odd prime `p`; zero when `p | a`.
pub fn legendre(a: &BigInt, p: &BigInt) -> Result<i8> {
    check_prime_arg(p)?;
    if p.is_even() {
        return Err(NumTheoryError::EvenPrime(p.clone()));
    }
    let r = a.mod_floor(p);
    if r.is_zero() {
        return Ok(0);
    }
    let e = (p - 1u32) >> 1;
    if r.modpow(&e, p).is_one() {
        Ok(1)
    } else {
        Ok(-1)
    }
}

/// Class of a unit in `Z_p^x / (Z_p^x)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnitTag {
    /// Odd p: the unit is a square mod p.
    Square,
    /// Odd p: the unit is a nonsquare mod p.
    NonSquare,
    /// p = 2: the unit's residue mod 8 (one of 1, 3, 5, 7).
    Mod8(u8),
}

/// Canonical representative of an element of `Q_p^x / (Q_p^x)^2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SquareClass {
    p: BigInt,
    val_parity: u8,
    unit: UnitTag,
}

impl SquareClass {
    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn val_parity(&self) -> u8 {
        self.val_parity
    }

    pub fn unit_tag(&self) -> UnitTag {
        self.unit
    }

    /// The identity class at `p`.
    pub fn trivial(p: &BigInt) -> Self {
        SquareClass {
            p: p.clone(),
            val_parity: 0,
            unit: if p == &BigInt::from(2) {
                UnitTag::Mod8(1)
            } else {
                UnitTag::Square
            },
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.val_parity == 0 && matches!(self.unit, UnitTag::Square | UnitTag::Mod8(1))
    }

    /// Group law in `Q_p^x / (Q_p^x)^2`.
    pub fn mul(&self, other: &SquareClass) -> Result<SquareClass> {
        if self.p != other.p {
            return Err(NumTheoryError::PrimeMismatch(self.p.clone(), other.p.clone()));
        }
        let unit = match (self.unit, other.unit) {
            (UnitTag::Mod8(x), UnitTag::Mod8(y)) => UnitTag::Mod8(((x as u16 * y as u16) % 8) as u8),
            (x, y) if x == y => UnitTag::Square,
            _ => UnitTag::NonSquare,
        };
        Ok(SquareClass {
            p: self.p.clone(),
            val_parity: (self.val_parity + other.val_parity) % 2,
            unit,
        })
    }

    /// A rational number lying in this class.
    pub fn representative(&self) -> BigInt {
        let unit = match self.unit {
            UnitTag::Square => BigInt::one(),
            UnitTag::Mod8(r) => BigInt::from(r),
            UnitTag::NonSquare => {
                let mut n = BigInt::from(2);
                while legendre(&n, &self.p) != Ok(-1) {
                    n += 1;
                }
                n
            }
        };
        if self.val_parity == 1 {
            unit * &self.p
        } else {
            unit
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = match self.unit {
            UnitTag::Square => "square".to_string(),
            UnitTag::NonSquare => "nonsquare".to_string(),
            UnitTag::Mod8(r) => format!("{r} mod 8"),
        };
        if self.val_parity == 1 {
            write!(f, "p * ({unit}) at p = {}", self.p)
        } else {
            write!(f, "{unit} at p = {}", self.p)
        }
    }
}

/// Class of `x` in `Q_p^x / (Q_p^x)^2`.
pub fn square_class(x: &BigRational, p: &BigInt) -> Result<SquareClass> {
    check_prime_arg(p)?;
    if x.is_zero() {
        return Err(NumTheoryError::Zero("the square-class argument"));
    }
    let (vn, num) = split_off(x.numer(), p)?;
    let (vd, den) = split_off(x.denom(), p)?;
    let val_parity = ((vn + vd) % 2) as u8;
    // num/den and num*den differ by the square den^2.
    let unit_part = num * den;
    let unit = if p == &BigInt::from(2) {
        UnitTag::Mod8(unit_part.mod_floor(&BigInt::from(8)).to_u8().unwrap_or(0))
    } else if legendre(&unit_part, p)? == 1 {
        UnitTag::Square
    } else {
        UnitTag::NonSquare
    };
    Ok(SquareClass {
        p: p.clone(),
        val_parity,
        unit,
    })
}

/// Integer convenience wrapper for [`square_class`].
pub fn square_class_int(x: &BigInt, p: &BigInt) -> Result<SquareClass> {
    square_class(&BigRational::from_integer(x.clone()), p)
}

/// True iff the quadratic character attached to the class has conductor 0.
pub fn is_unramified_quadratic(cls: &SquareClass) -> bool {
    match cls.unit {
        UnitTag::Mod8(r) => cls.val_parity == 0 && (r == 1 || r == 5),
        _ => cls.val_parity == 0,
    }
}
