//! The representation ring R = R(ℤ/2) = ℤ[t]/(t² − 1), its prime ideals and
//! their localizations.
//!
//! Spec R has two minimal primes, I = (t − 1) with support {1} and
//! J = (t + 1) with support G, and the maximal ideals (I, p), (J, p) for p
//! prime. The only coincidence is (I, 2) = (J, 2).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepRingError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("cannot parse prime ideal {0:?}; expected I, J, (I,p) or (J,p)")]
    BadIdealName(String),
    #[error("unknown localization mode {0:?}; expected quotient or genuine")]
    BadMode(String),
}

/// `a + b·t` in ℤ[t]/(t² − 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RingElem {
    pub a: BigInt,
    pub b: BigInt,
}

impl RingElem {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        RingElem {
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn zero() -> Self {
        Self::new(0, 0)
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    pub fn t() -> Self {
        Self::new(0, 1)
    }

    /// 1 − t, the element both composites of the paired invariant multiply by.
    pub fn one_minus_t() -> Self {
        Self::new(1, -1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Value under t ↦ `sign` (sign = ±1).
    pub fn eval(&self, sign: i8) -> BigInt {
        if sign >= 0 {
            &self.a + &self.b
        } else {
            &self.a - &self.b
        }
    }

    /// The automorphism t ↦ −t, which exchanges I and J.
    pub fn sign_twist(&self) -> Self {
        RingElem {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// Action of `t` on a module with t-matrix `t_action`: returns `a·1 + b·T`.
    pub fn act_on(&self, t_action: &IntMatrix) -> IntMatrix {
        let n = t_action.rows();
        IntMatrix::scalar(n, &self.a)
            .checked_add(&t_action.scale(&self.b))
            .expect("square action matrix")
    }
}

/// Product under t² = 1: (a+bt)(c+dt) = (ac+bd) + (ad+bc)t.
pub fn ring_mul(x: &RingElem, y: &RingElem) -> RingElem {
    RingElem {
        a: &x.a * &y.a + &x.b * &y.b,
        b: &x.a * &y.b + &x.b * &y.a,
    }
}

impl Mul for &RingElem {
    type Output = RingElem;
    fn mul(self, rhs: &RingElem) -> RingElem {
        ring_mul(self, rhs)
    }
}

impl Mul for RingElem {
    type Output = RingElem;
    fn mul(self, rhs: RingElem) -> RingElem {
        ring_mul(&self, &rhs)
    }
}

impl Add for &RingElem {
    type Output = RingElem;
    fn add(self, rhs: &RingElem) -> RingElem {
        RingElem {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl Add for RingElem {
    type Output = RingElem;
    fn add(self, rhs: RingElem) -> RingElem {
        &self + &rhs
    }
}

impl Sub for &RingElem {
    type Output = RingElem;
    fn sub(self, rhs: &RingElem) -> RingElem {
        RingElem {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl Sub for RingElem {
    type Output = RingElem;
    fn sub(self, rhs: RingElem) -> RingElem {
        &self - &rhs
    }
}

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.a),
            (true, false) if self.b.is_one() => write!(f, "t"),
            (true, false) => write!(f, "{}t", self.b),
            (false, false) => {
                if self.b.is_one() {
                    write!(f, "{} + t", self.a)
                } else if self.b == -BigInt::one() {
                    write!(f, "{} - t", self.a)
                } else if self.b < BigInt::zero() {
                    write!(f, "{} - {}t", self.a, -self.b.clone())
                } else {
                    write!(f, "{} + {}t", self.a, self.b)
                }
            }
        }
    }
}

/// Segal support of a prime of R.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Support {
    /// support {1}
    Trivial,
    /// support G
    Whole,
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Support::Trivial => write!(f, "{{1}}"),
            Support::Whole => write!(f, "G"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpotKind {
    MinimalI,
    MinimalJ,
    MaximalI(u64),
    MaximalJ(u64),
}

/// A point of Spec R. Construction normalizes (J,2) to (I,2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeSpot {
    kind: SpotKind,
    support: Support,
}

impl PrimeSpot {
    pub fn new(kind: SpotKind) -> Result<Self, RepRingError> {
        let kind = match kind {
            SpotKind::MaximalI(p) | SpotKind::MaximalJ(p) if !is_prime(p) => {
                return Err(RepRingError::NotPrime(p))
            }
            SpotKind::MaximalJ(2) => SpotKind::MaximalI(2),
            k => k,
        };
        let support = match kind {
            SpotKind::MinimalI | SpotKind::MaximalI(_) => Support::Trivial,
            SpotKind::MinimalJ | SpotKind::MaximalJ(_) => Support::Whole,
        };
        Ok(PrimeSpot { kind, support })
    }

    pub fn minimal_i() -> Self {
        PrimeSpot {
            kind: SpotKind::MinimalI,
            support: Support::Trivial,
        }
    }

    pub fn minimal_j() -> Self {
        PrimeSpot {
            kind: SpotKind::MinimalJ,
            support: Support::Whole,
        }
    }

    pub fn maximal_i(p: u64) -> Result<Self, RepRingError> {
        Self::new(SpotKind::MaximalI(p))
    }

    pub fn maximal_j(p: u64) -> Result<Self, RepRingError> {
        Self::new(SpotKind::MaximalJ(p))
    }

    pub fn kind(&self) -> SpotKind {
        self.kind
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn is_maximal(&self) -> bool {
        matches!(self.kind, SpotKind::MaximalI(_) | SpotKind::MaximalJ(_))
    }

    /// The residue characteristic of a maximal ideal.
    pub fn prime(&self) -> Option<u64> {
        match self.kind {
            SpotKind::MaximalI(p) | SpotKind::MaximalJ(p) => Some(p),
            _ => None,
        }
    }

    /// +1 if the prime contains I (t ↦ 1 in the quotient), −1 if it contains J.
    pub fn t_sign(&self) -> i8 {
        match self.kind {
            SpotKind::MinimalI | SpotKind::MaximalI(_) => 1,
            SpotKind::MinimalJ | SpotKind::MaximalJ(_) => -1,
        }
    }

    /// Image under the automorphism t ↦ −t.
    pub fn sign_twist(&self) -> Self {
        let kind = match self.kind {
            SpotKind::MinimalI => SpotKind::MinimalJ,
            SpotKind::MinimalJ => SpotKind::MinimalI,
            SpotKind::MaximalI(p) => SpotKind::MaximalJ(p),
            SpotKind::MaximalJ(p) => SpotKind::MaximalI(p),
        };
        Self::new(kind).expect("twist of a valid spot is valid")
    }

    /// Ideal membership of `a + bt`.
    pub fn contains(&self, x: &RingElem) -> bool {
        let v = x.eval(self.t_sign());
        match self.kind {
            SpotKind::MinimalI | SpotKind::MinimalJ => v.is_zero(),
            SpotKind::MaximalI(p) | SpotKind::MaximalJ(p) => v.is_multiple_of(&BigInt::from(p)),
        }
    }

    /// Whether this prime contains the other one (inclusion in Spec R).
    pub fn contains_prime(&self, other: &PrimeSpot) -> bool {
        if self == other {
            return true;
        }
        matches!(
            (self.kind, other.kind),
            (
                SpotKind::MaximalI(2),
                SpotKind::MinimalI | SpotKind::MinimalJ
            ) | (SpotKind::MaximalI(_), SpotKind::MinimalI)
                | (SpotKind::MaximalJ(_), SpotKind::MinimalJ)
        )
    }
}

impl fmt::Display for PrimeSpot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SpotKind::MinimalI => write!(f, "I"),
            SpotKind::MinimalJ => write!(f, "J"),
            SpotKind::MaximalI(p) => write!(f, "(I,{p})"),
            SpotKind::MaximalJ(p) => write!(f, "(J,{p})"),
        }
    }
}

impl FromStr for PrimeSpot {
    type Err = RepRingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        classify_ideal(s)
    }
}

/// Parses `I`, `J`, `(I,p)`, `I,p`, `(J,p)` or `J,p` into a normalized spot.
pub fn classify_ideal(name: &str) -> Result<PrimeSpot, RepRingError> {
    let bad = || RepRingError::BadIdealName(name.to_string());
    let compact: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = compact
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .unwrap_or(&compact);
    let (letter, prime) = match inner.split_once(',') {
        Some((l, p)) => (l, Some(p.parse::<u64>().map_err(|_| bad())?)),
        None => (inner, None),
    };
    let kind = match (letter, prime) {
        ("I", None) => SpotKind::MinimalI,
        ("J", None) => SpotKind::MinimalJ,
        ("I", Some(p)) => SpotKind::MaximalI(p),
        ("J", Some(p)) => SpotKind::MaximalJ(p),
        _ => return Err(bad()),
    };
    PrimeSpot::new(kind)
}

/// What R_𝔭 looks like.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalizationTarget {
    /// ℚ, with t ↦ ±1.
    Rationals { t_sign: i8 },
    /// ℤ₍p₎, with t ↦ ±1, for odd p.
    Zp { p: u64, t_sign: i8 },
    /// At (I,2): genuine localization keeps the zero divisors 1 ± t, so R_𝔭
    /// is not a domain. Only the quotient convention (t ↦ 1) yields ℤ₍₂₎.
    Special2,
}

impl fmt::Display for LocalizationTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |s: i8| if s > 0 { "+1" } else { "-1" };
        match self {
            LocalizationTarget::Rationals { t_sign } => write!(f, "Q (t -> {})", sign(*t_sign)),
            LocalizationTarget::Zp { p, t_sign } => write!(f, "Z_({p}) (t -> {})", sign(*t_sign)),
            LocalizationTarget::Special2 => {
                write!(f, "special (not a DVR; zero divisors 1-t, 1+t)")
            }
        }
    }
}

pub fn localization_target(s: &PrimeSpot) -> LocalizationTarget {
    match s.kind {
        SpotKind::MinimalI | SpotKind::MinimalJ => {
            LocalizationTarget::Rationals { t_sign: s.t_sign() }
        }
        SpotKind::MaximalI(2) | SpotKind::MaximalJ(2) => LocalizationTarget::Special2,
        SpotKind::MaximalI(p) | SpotKind::MaximalJ(p) => LocalizationTarget::Zp {
            p,
            t_sign: s.t_sign(),
        },
    }
}

/// How to localize a module at a maximal ideal.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum LocalizationMode {
    /// Impose t = ±1, then localize the abelian group at p.
    #[default]
    Quotient,
    /// Localize the abelian group at p and keep the involution.
    Genuine,
}

impl FromStr for LocalizationMode {
    type Err = RepRingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "quotient" => Ok(LocalizationMode::Quotient),
            "genuine" => Ok(LocalizationMode::Genuine),
            _ => Err(RepRingError::BadMode(s.to_string())),
        }
    }
}

impl fmt::Display for LocalizationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalizationMode::Quotient => write!(f, "quotient"),
            LocalizationMode::Genuine => write!(f, "genuine"),
        }
    }
}

/// The points of Spec R for primes up to `max_prime`, minimal primes first,
/// then maximal ideals in the left-to-right order of the usual picture
/// (… (I,5) (I,3) (I,2)=(J,2) (J,3) (J,5) …).
pub fn spec_r_points(max_prime: u64) -> Vec<PrimeSpot> {
    let primes: Vec<u64> = (2..=max_prime).filter(|&p| is_prime(p)).collect();
    let mut out = vec![PrimeSpot::minimal_i(), PrimeSpot::minimal_j()];
    for &p in primes.iter().rev() {
        out.push(PrimeSpot::maximal_i(p).expect("prime"));
    }
    for &p in primes.iter().filter(|&&p| p != 2) {
        out.push(PrimeSpot::maximal_j(p).expect("prime"));
    }
    out
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in SMALL {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
