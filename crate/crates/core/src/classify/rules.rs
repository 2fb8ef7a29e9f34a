//! Rule tables: multiplicative primes, multiplicative types and local
//! representations, one entry per table row, each with a stable id.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::families::{C3Decomposition, FamilyParams, TorsionStructure};
use crate::numtheory::{self, legendre};

use TorsionStructure::*;

/// Stand-in for `v_p(0)`; larger than any valuation a condition compares to.
pub(crate) const INF: i64 = 1 << 40;

/// Evaluation context: one parameter choice and one prime.
pub struct Ctx<'a> {
    pub params: &'a FamilyParams,
    pub a: &'a BigInt,
    pub b: &'a BigInt,
    pub p: &'a BigInt,
    p_small: Option<u64>,
}

impl<'a> Ctx<'a> {
    pub fn new(params: &'a FamilyParams, p: &'a BigInt) -> Self {
        Ctx {
            params,
            a: &params.a,
            b: &params.b,
            p,
            p_small: p.to_u64(),
        }
    }

    pub fn v(&self, x: &BigInt) -> i64 {
        numtheory::vp_opt(x, self.p).map_or(INF, |v| v as i64)
    }

    pub fn p_is(&self, n: u64) -> bool {
        self.p_small == Some(n)
    }

    pub fn p_mod(&self, m: u32) -> u32 {
        self.p.mod_floor(&BigInt::from(m)).to_u32().expect("small residue")
    }

    /// `p = 1 mod 6`.
    pub fn p_one_mod_six(&self) -> bool {
        self.p_mod(6) == 1
    }

    /// `p = 5 mod 6` or `p = 2`.
    pub fn p_five_mod_six_or_two(&self) -> bool {
        self.p_mod(6) == 5 || self.p_is(2)
    }

    pub fn leg(&self, x: &BigInt) -> i8 {
        legendre(x, self.p).unwrap_or(0)
    }

    pub fn c3(&self) -> &C3Decomposition {
        self.params.c3.as_ref().expect("C3 parameters carry a decomposition")
    }

    pub fn int(&self, n: i64) -> BigInt {
        BigInt::from(n)
    }

    pub fn rem(&self, x: &BigInt, m: i64) -> i64 {
        x.mod_floor(&BigInt::from(m)).to_i64().expect("small residue")
    }
}

/// Which primes a row talks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    Any,
    Eq(u64),
    Ne(u64),
    Ge(u64),
}

impl Scope {
    pub fn contains(&self, ctx: &Ctx) -> bool {
        match *self {
            Scope::Any => true,
            Scope::Eq(q) => ctx.p_is(q),
            Scope::Ne(q) => !ctx.p_is(q),
            Scope::Ge(q) => ctx.p >= &BigInt::from(q),
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::Any => write!(f, "p >= 2"),
            Scope::Eq(q) => write!(f, "p = {q}"),
            Scope::Ne(q) => write!(f, "p != {q}"),
            Scope::Ge(q) => write!(f, "p >= {q}"),
        }
    }
}

/// A row of the multiplicative-prime table.
pub struct MultPrimeRule {
    pub id: &'static str,
    pub torsion: TorsionStructure,
    pub scope: Scope,
    pub condition: &'static str,
    pub holds: fn(&Ctx) -> bool,
}

/// A row of the multiplicative-type table. A row with both an S and an NS
/// alternative appears here as two rules.
pub struct MultTypeRule {
    pub id: &'static str,
    pub torsion: TorsionStructure,
    pub scope: Scope,
    pub n_formula: &'static str,
    pub condition: &'static str,
    pub split: bool,
    pub witness: Option<u32>,
    /// Marked rows decide S/NS from a side condition rather than a model.
    pub starred: bool,
    pub holds: fn(&Ctx) -> bool,
    pub n: fn(&Ctx) -> i64,
}

/// Representation data attached to a row, before it is instantiated at a
/// concrete prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepTemplate {
    Unramified,
    PrincipalSeries { a_chi: u32, ord_chi: u32 },
    TwistRamified,
    Supercuspidal { ramified: bool, a_xi: u32, ord_xi: u32 },
}

impl fmt::Display for RepTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepTemplate::Unramified => write!(f, "chi x chi^-1, a(chi) = 0"),
            RepTemplate::PrincipalSeries { a_chi, ord_chi } => {
                write!(f, "chi x chi^-1, a(chi) = {a_chi}, ord(chi|units) = {ord_chi}")
            }
            RepTemplate::TwistRamified => write!(f, "(gamma, .) St, a((gamma, .)) = 1"),
            RepTemplate::Supercuspidal { ramified, a_xi, ord_xi } => write!(
                f,
                "omega_(F,xi), F {}, a(xi) = {a_xi}, ord(xi|units) = {ord_xi}",
                if *ramified { "ramified" } else { "unramified" }
            ),
        }
    }
}

/// A good-reduction or additive row of the representation tables.
pub struct RepRule {
    pub id: &'static str,
    pub torsion: TorsionStructure,
    pub scope: Scope,
    pub condition: &'static str,
    pub template: RepTemplate,
    pub holds: fn(&Ctx) -> bool,
}

macro_rules! mp {
    ($id:literal, $t:expr, $scope:expr, $cond:literal, $f:expr) => {
        MultPrimeRule {
            id: $id,
            torsion: $t,
            scope: $scope,
            condition: $cond,
            holds: $f,
        }
    };
}

pub static MULT_PRIME_RULES: &[MultPrimeRule] = &[
    mp!("c3.mult.1", C3, Scope::Any, "v_p(b) > 0", |c| c.v(c.b) > 0),
    mp!("c3.mult.2", C3, Scope::Ne(3), "v_p(a - 27b) > 0", |c| c
        .v(&(c.a - 27i64 * c.b))
        > 0),
    mp!("c5.mult.1", C5, Scope::Any, "v_p(ab) > 0", |c| c.v(&(c.a * c.b)) > 0),
    mp!("c5.mult.2", C5, Scope::Ge(7), "v_p(a^2 + 11ab - b^2) > 0", |c| c
        .v(&q_c5(c))
        > 0),
    mp!("c6.mult.1", C6, Scope::Eq(2), "v_2(a + b) >= 3", |c| c.v(&(c.a + c.b))
        >= 3),
    mp!("c6.mult.2", C6, Scope::Eq(3), "v_3(a + b) > 0 and v_3(a) = 0", |c| c
        .v(&(c.a + c.b))
        > 0
        && c.v(c.a) == 0),
    mp!("c6.mult.3", C6, Scope::Any, "v_p(b) > 0", |c| c.v(c.b) > 0),
    mp!("c6.mult.4", C6, Scope::Ne(3), "v_p(a) > 0", |c| c.v(c.a) > 0),
    mp!("c6.mult.5", C6, Scope::Ge(5), "v_p((a + b)(a + 9b)) > 0", |c| c
        .v(&((c.a + c.b) * (c.a + 9i64 * c.b)))
        > 0),
    mp!("c7.mult.1", C7, Scope::Any, "v_p(ab(a - b)) > 0", |c| c
        .v(&(c.a * c.b * (c.a - c.b)))
        > 0),
    mp!(
        "c7.mult.2",
        C7,
        Scope::Ge(13),
        "v_p(a^3 + 5a^2b - 8ab^2 + b^3) > 0",
        |c| c.v(&cubic_c7(c)) > 0
    ),
    mp!("c9.mult.1", C9, Scope::Any, "v_p(ab(a - b)) > 0", |c| c
        .v(&(c.a * c.b * (c.a - c.b)))
        > 0),
    mp!(
        "c9.mult.2",
        C9,
        Scope::Ge(7),
        "v_p((a^2 - ab + b^2)(a^3 + 3a^2b - 6ab^2 + b^3)) > 0",
        |c| c.v(&(q_c9(c) * cubic_c9(c))) > 0
    ),
    mp!("c10.mult.1", C10, Scope::Any, "v_p(ab(a - b)(a - 2b)) > 0", |c| c
        .v(&lin4(c))
        > 0),
    mp!(
        "c10.mult.2",
        C10,
        Scope::Ge(7),
        "v_p((a^2 + 2ab - 4b^2)(a^2 - 3ab + b^2)) > 0",
        |c| c.v(&(q1_c10(c) * q2_c10(c))) > 0
    ),
    mp!(
        "c12.mult.1",
        C12,
        Scope::Any,
        "v_p(ab(a - b)(a - 2b)) > 0, with v_3(a) = 0 if p = 3",
        |c| c.v(&lin4(c)) > 0 && !(c.p_is(3) && c.v(c.a) > 0)
    ),
    mp!(
        "c12.mult.2",
        C12,
        Scope::Ge(5),
        "v_p((a^2 - 6ab + 6b^2)(a^2 - 2ab + 2b^2)(a^2 - 3ab + 3b^2)) > 0",
        |c| c.v(&(q6_c12(c) * q2_c12(c) * q3_c12(c))) > 0
    ),
    mp!(
        "c2xc6.mult.1",
        C2xC6,
        Scope::Any,
        "v_p(2a(b - a)(b - 5a)) > 0, with v_3(b) = 0 if p = 3",
        |c| c.v(&(2i64 * c.a * (c.b - c.a) * (c.b - 5i64 * c.a))) > 0 && !(c.p_is(3) && c.v(c.b) > 0)
    ),
    mp!(
        "c2xc6.mult.2",
        C2xC6,
        Scope::Ge(5),
        "v_p((b - 9a)(b^2 - 9a^2)) > 0",
        |c| c.v(&((c.b - 9i64 * c.a) * (c.b * c.b - 9i64 * c.a * c.a))) > 0
    ),
];

/// The C12 condition with a^2 - 2ab + 2b^2 repeated, kept for the audit
/// that shows it misses multiplicative primes.
pub fn c12_literal_condition(ctx: &Ctx) -> bool {
    ctx.v(&(q2_c12(ctx) * q2_c12(ctx) * q3_c12(ctx))) > 0
}

pub fn q_c5(c: &Ctx) -> BigInt {
    c.a * c.a + 11i64 * c.a * c.b - c.b * c.b
}

fn cubic_c7(c: &Ctx) -> BigInt {
    c.a.pow(3) + 5i64 * c.a * c.a * c.b - 8i64 * c.a * c.b * c.b + c.b.pow(3)
}

fn q_c9(c: &Ctx) -> BigInt {
    c.a * c.a - c.a * c.b + c.b * c.b
}

fn cubic_c9(c: &Ctx) -> BigInt {
    c.a.pow(3) + 3i64 * c.a * c.a * c.b - 6i64 * c.a * c.b * c.b + c.b.pow(3)
}

fn lin4(c: &Ctx) -> BigInt {
    c.a * c.b * (c.a - c.b) * (c.a - 2i64 * c.b)
}

fn q1_c10(c: &Ctx) -> BigInt {
    c.a * c.a + 2i64 * c.a * c.b - 4i64 * c.b * c.b
}

fn q2_c10(c: &Ctx) -> BigInt {
    c.a * c.a - 3i64 * c.a * c.b + c.b * c.b
}

pub fn q6_c12(c: &Ctx) -> BigInt {
    c.a * c.a - 6i64 * c.a * c.b + 6i64 * c.b * c.b
}

pub fn q2_c12(c: &Ctx) -> BigInt {
    c.a * c.a - 2i64 * c.a * c.b + 2i64 * c.b * c.b
}

pub fn q3_c12(c: &Ctx) -> BigInt {
    c.a * c.a - 3i64 * c.a * c.b + 3i64 * c.b * c.b
}

macro_rules! mt {
    ($id:literal, $t:expr, $scope:expr, $nf:literal, $cond:literal, $split:expr, $w:expr, $star:expr, $holds:expr, $n:expr) => {
        MultTypeRule {
            id: $id,
            torsion: $t,
            scope: $scope,
            n_formula: $nf,
            condition: $cond,
            split: $split,
            witness: $w,
            starred: $star,
            holds: $holds,
            n: $n,
        }
    };
}

const S: bool = true;
const NS: bool = false;

pub static MULT_TYPE_RULES: &[MultTypeRule] = &[
    // C3
    mt!(
        "c3.type.1",
        C3,
        Scope::Any,
        "3 v_p(b)",
        "",
        S,
        Some(1),
        false,
        |_| true,
        |c| 3 * c.v(c.b)
    ),
    mt!(
        "c3.type.2s",
        C3,
        Scope::Ne(3),
        "v_p(a - 27b)",
        "p = 1 mod 6",
        S,
        Some(2),
        true,
        |c| c.p_one_mod_six(),
        |c| c.v(&(c.a - 27i64 * c.b))
    ),
    mt!(
        "c3.type.2ns",
        C3,
        Scope::Ne(3),
        "v_p(a - 27b)",
        "p = 5 mod 6 or p = 2",
        NS,
        Some(2),
        true,
        |c| c.p_five_mod_six_or_two(),
        |c| c.v(&(c.a - 27i64 * c.b))
    ),
    // C5
    mt!(
        "c5.type.1",
        C5,
        Scope::Any,
        "5 v_p(ab)",
        "",
        S,
        Some(1),
        false,
        |_| true,
        |c| 5 * c.v(&(c.a * c.b))
    ),
    mt!(
        "c5.type.2s",
        C5,
        Scope::Ge(7),
        "v_p(a^2 + 11ab - b^2)",
        "(-5(a^2 + b^2) / p) = 1",
        S,
        None,
        true,
        |c| c.leg(&(-5i64 * (c.a * c.a + c.b * c.b))) == 1,
        |c| c.v(&q_c5(c))
    ),
    mt!(
        "c5.type.2ns",
        C5,
        Scope::Ge(7),
        "v_p(a^2 + 11ab - b^2)",
        "(-5(a^2 + b^2) / p) = -1",
        NS,
        None,
        true,
        |c| c.leg(&(-5i64 * (c.a * c.a + c.b * c.b))) == -1,
        |c| c.v(&q_c5(c))
    ),
    // C6
    mt!(
        "c6.type.1",
        C6,
        Scope::Any,
        "6 v_p(b)",
        "",
        S,
        Some(1),
        false,
        |_| true,
        |c| 6 * c.v(c.b)
    ),
    mt!(
        "c6.type.2s",
        C6,
        Scope::Ne(3),
        "2 v_p(a)",
        "p = 1 mod 6",
        S,
        Some(1),
        true,
        |c| c.p_one_mod_six(),
        |c| 2 * c.v(c.a)
    ),
    mt!(
        "c6.type.2ns",
        C6,
        Scope::Ne(3),
        "2 v_p(a)",
        "p = 5 mod 6 or p = 2",
        NS,
        Some(1),
        true,
        |c| c.p_five_mod_six_or_two(),
        |c| 2 * c.v(c.a)
    ),
    mt!(
        "c6.type.3s",
        C6,
        Scope::Ge(5),
        "v_p(a + 9b)",
        "p = 1 mod 6",
        S,
        Some(2),
        true,
        |c| c.p_one_mod_six(),
        |c| c.v(&(c.a + 9i64 * c.b))
    ),
    mt!(
        "c6.type.3ns",
        C6,
        Scope::Ge(5),
        "v_p(a + 9b)",
        "p = 5 mod 6",
        NS,
        Some(2),
        true,
        |c| c.p_mod(6) == 5,
        |c| c.v(&(c.a + 9i64 * c.b))
    ),
    mt!(
        "c6.type.4",
        C6,
        Scope::Ge(3),
        "3 v_p(a + b)",
        "v_3(a) = 0 if p = 3",
        S,
        Some(3),
        false,
        |c| !(c.p_is(3) && c.v(c.a) > 0),
        |c| 3 * c.v(&(c.a + c.b))
    ),
    mt!(
        "c6.type.5",
        C6,
        Scope::Eq(2),
        "v_2(a + 9b) - 3",
        "v_2(a + b) = 3",
        NS,
        Some(4),
        false,
        |c| c.v(&(c.a + c.b)) == 3,
        |c| c.v(&(c.a + 9i64 * c.b)) - 3
    ),
    mt!(
        "c6.type.6",
        C6,
        Scope::Eq(2),
        "3 v_2(a + b) - 9",
        "v_2(a + b) > 3",
        S,
        Some(5),
        false,
        |c| c.v(&(c.a + c.b)) > 3,
        |c| 3 * c.v(&(c.a + c.b)) - 9
    ),
    // C7
    mt!(
        "c7.type.1",
        C7,
        Scope::Any,
        "7 v_p(ab(a - b))",
        "",
        S,
        Some(1),
        false,
        |_| true,
        |c| 7 * c.v(&(c.a * c.b * (c.a - c.b)))
    ),
    mt!(
        "c7.type.2s",
        C7,
        Scope::Ge(13),
        "v_p(a^3 + 5a^2b - 8ab^2 + b^3)",
        "(-7(a^2 - ab + b^2) / p) = 1",
        S,
        None,
        true,
        |c| c.leg(&(-7i64 * q_c9(c))) == 1,
        |c| c.v(&cubic_c7(c))
    ),
    mt!(
        "c7.type.2ns",
        C7,
        Scope::Ge(13),
        "v_p(a^3 + 5a^2b - 8ab^2 + b^3)",
        "(-7(a^2 - ab + b^2) / p) = -1",
        NS,
        None,
        true,
        |c| c.leg(&(-7i64 * q_c9(c))) == -1,
        |c| c.v(&cubic_c7(c))
    ),
    // C9
    mt!(
        "c9.type.1",
        C9,
        Scope::Any,
        "9 v_p(ab(a - b))",
        "",
        S,
        Some(1),
        false,
        |_| true,
        |c| 9 * c.v(&(c.a * c.b * (c.a - c.b)))
    ),
    mt!(
        "c9.type.2s",
        C9,
        Scope::Ge(7),
        "3 v_p(a^2 - ab + b^2) + v_p(a^3 + 3a^2b - 6ab^2 + b^3)",
        "p = 1 mod 6",
        S,
        None,
        true,
        |c| c.p_one_mod_six(),
        |c| 3 * c.v(&q_c9(c)) + c.v(&cubic_c9(c))
    ),
    mt!(
        "c9.type.2ns",
        C9,
        Scope::Ge(7),
        "3 v_p(a^2 - ab + b^2) + v_p(a^3 + 3a^2b - 6ab^2 + b^3)",
        "p = 5 mod 6",
        NS,
        None,
        true,
        |c| c.p_mod(6) == 5,
        |c| 3 * c.v(&q_c9(c)) + c.v(&cubic_c9(c))
    ),
    // C10
    mt!(
        "c10.type.1",
        C10,
        Scope::Any,
        "v_p(a^5 b^10 (a - 2b)^5 (a - b)^10)",
        "v_2(a) = 0 if p = 2",
        S,
        Some(1),
        false,
        |c| !(c.p_is(2) && c.v(c.a) > 0),
        |c| 5 * c.v(c.a) + 10 * c.v(c.b) + 5 * c.v(&(c.a - 2i64 * c.b)) + 10 * c.v(&(c.a - c.b))
    ),
    mt!(
        "c10.type.2",
        C10,
        Scope::Eq(2),
        "v_2(a^5 (a - 2b)^5) + v_2(a^2 + 2ab - 4b^2) - 12",
        "v_2(a) > 0",
        S,
        Some(2),
        false,
        |c| c.v(c.a) > 0,
        |c| 5 * c.v(c.a) + 5 * c.v(&(c.a - 2i64 * c.b)) + c.v(&q1_c10(c)) - 12
    ),
    mt!(
        "c10.type.3s",
        C10,
        Scope::Ge(7),
        "v_p(a^2 + 2ab - 4b^2)",
        "((b^2 - a^2) / p) = 1",
        S,
        None,
        true,
        |c| c.leg(&(c.b * c.b - c.a * c.a)) == 1,
        |c| c.v(&q1_c10(c))
    ),
    mt!(
        "c10.type.3ns",
        C10,
        Scope::Ge(7),
        "v_p(a^2 + 2ab - 4b^2)",
        "((b^2 - a^2) / p) = -1",
        NS,
        None,
        true,
        |c| c.leg(&(c.b * c.b - c.a * c.a)) == -1,
        |c| c.v(&q1_c10(c))
    ),
    mt!(
        "c10.type.4s",
        C10,
        Scope::Ge(7),
        "2 v_p(a^2 - 3ab + b^2)",
        "(-(ab + b^2) / p) = 1",
        S,
        None,
        true,
        |c| c.leg(&(-(c.a * c.b + c.b * c.b))) == 1,
        |c| 2 * c.v(&q2_c10(c))
    ),
    mt!(
        "c10.type.4ns",
        C10,
        Scope::Ge(7),
        "2 v_p(a^2 - 3ab + b^2)",
        "(-(ab + b^2) / p) = -1",
        NS,
        None,
        true,
        |c| c.leg(&(-(c.a * c.b + c.b * c.b))) == -1,
        |c| 2 * c.v(&q2_c10(c))
    ),
    // C12
    mt!(
        "c12.type.1",
        C12,
        Scope::Any,
        "v_p(b^12 (a - b)^12 (a - 2b)^6)",
        "v_2(a) = 0 if p = 2; v_3(a) = 0 if p = 3",
        S,
        Some(1),
        false,
        |c| !((c.p_is(2) || c.p_is(3)) && c.v(c.a) > 0),
        |c| 12 * c.v(c.b) + 12 * c.v(&(c.a - c.b)) + 6 * c.v(&(c.a - 2i64 * c.b))
    ),
    mt!(
        "c12.type.2",
        C12,
        Scope::Eq(2),
        "6 v_2(a - 2b) - 6",
        "v_2(a) = 1",
        S,
        Some(2),
        false,
        |c| c.v(c.a) == 1,
        |c| 6 * c.v(&(c.a - 2i64 * c.b)) - 6
    ),
    mt!(
        "c12.type.3",
        C12,
        Scope::Eq(2),
        "2 v_2(a) - 2",
        "v_2(a) >= 2",
        NS,
        Some(2),
        false,
        |c| c.v(c.a) >= 2,
        |c| 2 * c.v(c.a) - 2
    ),
    mt!(
        "c12.type.4s",
        C12,
        Scope::Ge(5),
        "2 v_p(a) + v_p(a^2 - 6ab + 6b^2)",
        "p = 1 mod 6",
        S,
        None,
        true,
        |c| c.p_one_mod_six(),
        |c| 2 * c.v(c.a) + c.v(&q6_c12(c))
    ),
    mt!(
        "c12.type.4ns",
        C12,
        Scope::Ge(5),
        "2 v_p(a) + v_p(a^2 - 6ab + 6b^2)",
        "p = 5 mod 6",
        NS,
        None,
        true,
        |c| c.p_mod(6) == 5,
        |c| 2 * c.v(c.a) + c.v(&q6_c12(c))
    ),
    mt!(
        "c12.type.5",
        C12,
        Scope::Ge(5),
        "3 v_p(a^2 - 2ab + 2b^2) + 4 v_p(a^2 - 3ab + 3b^2)",
        "",
        S,
        None,
        true,
        |_| true,
        |c| 3 * c.v(&q2_c12(c)) + 4 * c.v(&q3_c12(c))
    ),
    // C2 x C6
    mt!(
        "c2xc6.type.1",
        C2xC6,
        Scope::Any,
        "6 v_p(2a(b - 5a)(b - a))",
        "v_3(b) = 0 if p = 3; v_2(a + b) = 0 if p = 2",
        S,
        Some(1),
        false,
        |c| !(c.p_is(3) && c.v(c.b) > 0) && !(c.p_is(2) && c.v(&(c.a + c.b)) > 0),
        |c| 6 * c.v(&(2i64 * c.a * (c.b - 5i64 * c.a) * (c.b - c.a)))
    ),
    mt!(
        "c2xc6.type.2s",
        C2xC6,
        Scope::Ge(5),
        "2 v_p((b^2 - 9a^2)(b - 9a))",
        "p = 1 mod 6",
        S,
        None,
        true,
        |c| c.p_one_mod_six(),
        |c| 2 * c.v(&((c.b * c.b - 9i64 * c.a * c.a) * (c.b - 9i64 * c.a)))
    ),
    mt!(
        "c2xc6.type.2ns",
        C2xC6,
        Scope::Ge(5),
        "2 v_p((b^2 - 9a^2)(b - 9a))",
        "p = 5 mod 6",
        NS,
        None,
        true,
        |c| c.p_mod(6) == 5,
        |c| 2 * c.v(&((c.b * c.b - 9i64 * c.a * c.a) * (c.b - 9i64 * c.a)))
    ),
    mt!(
        "c2xc6.type.3ns",
        C2xC6,
        Scope::Eq(2),
        "6 v_2(b - 5a) + 2 v_2(b + 3a) - 24",
        "v_2(a - b) = 2 and ab - b^2 = 4 mod 16",
        NS,
        Some(2),
        true,
        |c| c.v(&(c.a - c.b)) == 2 && c.rem(&(c.a * c.b - c.b * c.b), 16) == 4,
        |c| 6 * c.v(&(c.b - 5i64 * c.a)) + 2 * c.v(&(c.b + 3i64 * c.a)) - 24
    ),
    mt!(
        "c2xc6.type.3s",
        C2xC6,
        Scope::Eq(2),
        "6 v_2(b - 5a) + 2 v_2(b + 3a) - 24",
        "v_2(a - b) = 2 and ab - b^2 = 12 mod 16",
        S,
        Some(2),
        true,
        |c| c.v(&(c.a - c.b)) == 2 && c.rem(&(c.a * c.b - c.b * c.b), 16) == 12,
        |c| 6 * c.v(&(c.b - 5i64 * c.a)) + 2 * c.v(&(c.b + 3i64 * c.a)) - 24
    ),
    mt!(
        "c2xc6.type.4",
        C2xC6,
        Scope::Eq(2),
        "6 v_2(b - a) - 18",
        "v_2(a - b) >= 4",
        S,
        Some(2),
        false,
        |c| c.v(&(c.a - c.b)) >= 4,
        |c| 6 * c.v(&(c.b - c.a)) - 18
    ),
    mt!(
        "c2xc6.type.5",
        C2xC6,
        Scope::Eq(2),
        "2 v_2(b - 9a) - 6",
        "v_2(a - b) = 3",
        NS,
        Some(3),
        false,
        |c| c.v(&(c.a - c.b)) == 3,
        |c| 2 * c.v(&(c.b - 9i64 * c.a)) - 6
    ),
    mt!(
        "c2xc6.type.6",
        C2xC6,
        Scope::Eq(2),
        "2 v_2(b - 3a) - 2",
        "v_2(a - b) = 1",
        NS,
        Some(4),
        false,
        |c| c.v(&(c.a - c.b)) == 1,
        |c| 2 * c.v(&(c.b - 3i64 * c.a)) - 2
    ),
];

macro_rules! rr {
    ($id:literal, $t:expr, $scope:expr, $cond:literal, $tpl:expr, $f:expr) => {
        RepRule {
            id: $id,
            torsion: $t,
            scope: $scope,
            condition: $cond,
            template: $tpl,
            holds: $f,
        }
    };
}

const fn ps(a_chi: u32, ord_chi: u32) -> RepTemplate {
    RepTemplate::PrincipalSeries { a_chi, ord_chi }
}

const fn sc_ram(a_xi: u32, ord_xi: u32) -> RepTemplate {
    RepTemplate::Supercuspidal {
        ramified: true,
        a_xi,
        ord_xi,
    }
}

const fn sc_unr(a_xi: u32, ord_xi: u32) -> RepTemplate {
    RepTemplate::Supercuspidal {
        ramified: false,
        a_xi,
        ord_xi,
    }
}

/// `b d^2 e^3 (b^3 d^2 e^5 - c) mod 9`.
pub fn c3_x_mod9(c: &Ctx) -> i64 {
    let dec = c.c3();
    let (d, e) = (&dec.d, &dec.e);
    let x = c.b * d * d * e.pow(3) * (c.b.pow(3) * d * d * e.pow(5) - &dec.c);
    c.rem(&x, 9)
}

fn va_mod3_nonzero(c: &Ctx) -> bool {
    let v = c.v(c.a);
    v % 3 != 0
}

fn delta_t_unit(c: &Ctx) -> bool {
    crate::families::minimal_discriminant(c.params).is_ok_and(|md| c.v(&md.delta) == 0)
}

pub static REP_RULES: &[RepRule] = &[
    // Good reduction.
    rr!(
        "c3.good",
        C3,
        Scope::Any,
        "v_p(d e b (a - 27b)) = 0",
        RepTemplate::Unramified,
        |c| {
            let dec = c.c3();
            c.v(&(&dec.d * &dec.e * c.b * (c.a - 27i64 * c.b))) == 0
        }
    ),
    rr!(
        "c3_0.good",
        C3Zero,
        Scope::Any,
        "v_p(3a) = 0",
        RepTemplate::Unramified,
        |c| c.v(&(3i64 * c.a)) == 0
    ),
    rr!(
        "c6.good",
        C6,
        Scope::Any,
        "v_p(ab(a + 9b)(a + b)) = 0",
        RepTemplate::Unramified,
        |c| c.v(&(c.a * c.b * (c.a + 9i64 * c.b) * (c.a + c.b))) == 0
    ),
    rr!(
        "c5.good",
        C5,
        Scope::Any,
        "v_p(Delta_T) = 0",
        RepTemplate::Unramified,
        delta_t_unit
    ),
    rr!(
        "c7.good",
        C7,
        Scope::Any,
        "v_p(Delta_T) = 0",
        RepTemplate::Unramified,
        delta_t_unit
    ),
    rr!(
        "c9.good",
        C9,
        Scope::Any,
        "v_p(Delta_T) = 0",
        RepTemplate::Unramified,
        delta_t_unit
    ),
    rr!(
        "c10.good",
        C10,
        Scope::Any,
        "v_p(Delta_T) = 0",
        RepTemplate::Unramified,
        delta_t_unit
    ),
    rr!(
        "c12.good",
        C12,
        Scope::Any,
        "v_p(Delta_T) = 0",
        RepTemplate::Unramified,
        delta_t_unit
    ),
    rr!(
        "c2xc6.good",
        C2xC6,
        Scope::Any,
        "v_p(Delta_T) = 0",
        RepTemplate::Unramified,
        delta_t_unit
    ),
    // C3, additive.
    rr!(
        "c3.add.1",
        C3,
        Scope::Ne(3),
        "p = 1 mod 3, v_p(a) = 1, 2 mod 3",
        ps(1, 3),
        |c| c.p_mod(3) == 1 && va_mod3_nonzero(c)
    ),
    rr!(
        "c3.add.2",
        C3,
        Scope::Ne(3),
        "p = 2 mod 3, v_p(a) = 1, 2 mod 3",
        sc_unr(1, 3),
        |c| c.p_mod(3) == 2 && va_mod3_nonzero(c)
    ),
    rr!(
        "c3.add.3",
        C3,
        Scope::Eq(3),
        "v_3(a) = 0 mod 3, v_3(a - 27b) = 3, b d^2 e^3 (b^3 d^2 e^5 - c) != -2 mod 9",
        sc_ram(2, 6),
        |c| c.v(c.a) % 3 == 0 && c.v(&(c.a - 27i64 * c.b)) == 3 && c3_x_mod9(c) != 7
    ),
    rr!("c3.add.4", C3, Scope::Eq(3), "v_3(a - 27b) = 5", sc_ram(2, 6), |c| c
        .v(&(c.a - 27i64 * c.b))
        == 5),
    rr!("c3.add.5", C3, Scope::Eq(3), "v_3(a) = 1", sc_ram(2, 6), |c| c.v(c.a)
        == 1),
    rr!(
        "c3.add.6",
        C3,
        Scope::Eq(3),
        "v_3(a) = 0 mod 3, v_3(a - 27b) = 3, b d^2 e^3 (b^3 d^2 e^5 - c) = -2 mod 9",
        sc_unr(1, 4),
        |c| c.v(c.a) % 3 == 0 && c.v(&(c.a - 27i64 * c.b)) == 3 && c3_x_mod9(c) == 7
    ),
    rr!(
        "c3.add.7",
        C3,
        Scope::Eq(3),
        "v_3(a) = 2, ab = 18 mod 27",
        sc_unr(2, 6),
        |c| c.v(c.a) == 2 && c.rem(&(c.a * c.b), 27) == 18
    ),
    rr!(
        "c3.add.8",
        C3,
        Scope::Eq(3),
        "v_3(a) = 2, ab = 9 mod 27",
        ps(2, 6),
        |c| c.v(c.a) == 2 && c.rem(&(c.a * c.b), 27) == 9
    ),
    rr!("c3.add.9", C3, Scope::Eq(3), "v_3(a - 27b) = 6", ps(1, 2), |c| c
        .v(&(c.a - 27i64 * c.b))
        == 6),
    rr!(
        "c3.add.10",
        C3,
        Scope::Eq(3),
        "v_3(a - 27b) - 6 >= 1",
        RepTemplate::TwistRamified,
        |c| c.v(&(c.a - 27i64 * c.b)) >= 7
    ),
    rr!(
        "c3.add.11",
        C3,
        Scope::Eq(3),
        "v_3(a) = 1, 2 mod 3, v_3(a) > 2",
        sc_ram(4, 6),
        |c| va_mod3_nonzero(c) && c.v(c.a) > 2
    ),
    // C3_0, additive.
    rr!(
        "c3_0.add.1",
        C3Zero,
        Scope::Ne(3),
        "p = 1 mod 3, v_p(a) = 1, 2",
        ps(1, 3),
        |c| c.p_mod(3) == 1 && (1..=2).contains(&c.v(c.a))
    ),
    rr!(
        "c3_0.add.2",
        C3Zero,
        Scope::Ne(3),
        "p = 2 mod 3, v_p(a) = 1, 2",
        sc_unr(1, 3),
        |c| c.p_mod(3) == 2 && (1..=2).contains(&c.v(c.a))
    ),
    rr!(
        "c3_0.add.3",
        C3Zero,
        Scope::Eq(3),
        "v_3(a) = 0, a = +-1, +-4 mod 9",
        sc_ram(2, 6),
        |c| c.v(c.a) == 0 && [1, 4, 5, 8].contains(&c.rem(c.a, 9))
    ),
    rr!(
        "c3_0.add.4",
        C3Zero,
        Scope::Eq(3),
        "v_3(a) = 0, a = +-2 mod 9",
        sc_unr(1, 4),
        |c| c.v(c.a) == 0 && [2, 7].contains(&c.rem(c.a, 9))
    ),
    rr!("c3_0.add.5", C3Zero, Scope::Eq(3), "v_3(a) = 1, 2", sc_ram(4, 6), |c| {
        (1..=2).contains(&c.v(c.a))
    }),
    // C6, additive.
    rr!("c6.add.1", C6, Scope::Eq(2), "v_2(a + b) = 1, 2", sc_unr(1, 3), |c| (1
        ..=2)
        .contains(&c.v(&(c.a + c.b)))),
    rr!("c6.add.2", C6, Scope::Eq(3), "v_3(a) = 1", sc_unr(1, 4), |c| c.v(c.a)
        == 1),
    rr!(
        "c6.add.3",
        C6,
        Scope::Eq(3),
        "v_3(a + 9b) = 2, v_3(a) = 2",
        ps(1, 2),
        |c| c.v(c.a) == 2 && c.v(&(c.a + 9i64 * c.b)) == 2
    ),
    rr!(
        "c6.add.4",
        C6,
        Scope::Eq(3),
        "v_3(a + 9b) >= 3, v_3(a) = 2",
        RepTemplate::TwistRamified,
        |c| c.v(c.a) == 2 && c.v(&(c.a + 9i64 * c.b)) >= 3
    ),
    rr!(
        "c6.add.5",
        C6,
        Scope::Eq(3),
        "v_3(a) >= 3",
        RepTemplate::TwistRamified,
        |c| c.v(c.a) >= 3
    ),
    // Remaining families, additive.
    rr!("c5.add.1", C5, Scope::Eq(5), "v_5(a + 18b) = 1", sc_unr(1, 6), |c| c
        .v(&(c.a + 18i64 * c.b))
        == 1),
    rr!("c5.add.2", C5, Scope::Eq(5), "v_5(a + 18b) >= 2", ps(1, 4), |c| c
        .v(&(c.a + 18i64 * c.b))
        >= 2),
    rr!("c7.add.1", C7, Scope::Eq(7), "v_7(a + 4b) >= 1", ps(1, 6), |c| c
        .v(&(c.a + 4i64 * c.b))
        >= 1),
    rr!("c9.add.1", C9, Scope::Eq(3), "v_3(a + b) >= 1", sc_ram(2, 6), |c| c
        .v(&(c.a + c.b))
        >= 1),
    rr!("c10.add.1", C10, Scope::Eq(5), "v_5(a + b) >= 1", ps(1, 4), |c| c
        .v(&(c.a + c.b))
        >= 1),
    rr!(
        "c12.add.1",
        C12,
        Scope::Eq(3),
        "v_3(a) >= 1",
        RepTemplate::TwistRamified,
        |c| c.v(c.a) >= 1
    ),
    rr!(
        "c2xc6.add.1",
        C2xC6,
        Scope::Eq(3),
        "v_3(b) >= 1",
        RepTemplate::TwistRamified,
        |c| c.v(c.b) >= 1
    ),
];

pub fn mult_prime_rules(t: TorsionStructure) -> impl Iterator<Item = &'static MultPrimeRule> {
    MULT_PRIME_RULES.iter().filter(move |r| r.torsion == t)
}

pub fn mult_type_rules(t: TorsionStructure) -> impl Iterator<Item = &'static MultTypeRule> {
    MULT_TYPE_RULES.iter().filter(move |r| r.torsion == t)
}

pub fn rep_rules(t: TorsionStructure) -> impl Iterator<Item = &'static RepRule> {
    REP_RULES.iter().filter(move |r| r.torsion == t)
}
