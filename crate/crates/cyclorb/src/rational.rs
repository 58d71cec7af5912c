//! Exact rational arithmetic for conformal spins.
//!
//! Spins live on the unit circle, so the natural value type is a rational
//! number reduced modulo 1. All spin arithmetic in this crate is exact;
//! floating point enters only when a phase `e^{2 pi i h}` is actually
//! evaluated for a numeric comparison.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact rational, used for central charges (not reduced mod anything).
pub type Rational = Ratio<i64>;

/// Parse a rational from the text form `-?p` or `-?p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        None => {
            let num = i64::from_str(s).ok()?;
            Some(Rational::from_integer(num))
        }
        Some((num, den)) => {
            let num = i64::from_str(num.trim()).ok()?;
            let den = i64::from_str(den.trim()).ok()?;
            if den <= 0 {
                return None;
            }
            Some(Rational::new(num, den))
        }
    }
}

/// Format a rational as `p` or `p/q` (reduced form).
pub fn format_rational(r: &Rational) -> String {
    if r.denom() == &1 {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A rational number reduced modulo 1, kept in `[0, 1)`.
///
/// Addition, negation and subtraction are exact; `half` and friends are
/// convenience constructors for common spin values.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalMod1(Ratio<i64>);

impl RationalMod1 {
    pub const ZERO: RationalMod1 = RationalMod1(Ratio::new_raw(0, 1));

    /// Reduce an arbitrary rational modulo 1 into `[0, 1)`.
    pub fn from_ratio(r: Rational) -> Self {
        let f = r.floor();
        RationalMod1(r - f)
    }

    /// Build from numerator and positive denominator; `None` if `den <= 0`.
    pub fn new(num: i64, den: i64) -> Option<Self> {
        if den <= 0 {
            return None;
        }
        Some(Self::from_ratio(Rational::new(num, den)))
    }

    /// The canonical representative in `[0, 1)`.
    pub fn as_ratio(&self) -> Rational {
        self.0
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().expect("rational fits in f64")
    }

    /// The phase `e^{2 pi i v}` of this value.
    pub fn phase(&self) -> Complex64 {
        Complex64::new(0.0, 2.0 * std::f64::consts::PI * self.to_f64()).exp()
    }
}

impl Add for RationalMod1 {
    type Output = RationalMod1;
    fn add(self, rhs: Self) -> Self {
        Self::from_ratio(self.0 + rhs.0)
    }
}

impl Sub for RationalMod1 {
    type Output = RationalMod1;
    fn sub(self, rhs: Self) -> Self {
        Self::from_ratio(self.0 - rhs.0)
    }
}

impl Neg for RationalMod1 {
    type Output = RationalMod1;
    fn neg(self) -> Self {
        Self::from_ratio(-self.0)
    }
}

impl fmt::Display for RationalMod1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(&self.0))
    }
}

impl fmt::Debug for RationalMod1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalMod1({})", self)
    }
}

/// Parse a spin string (`-?p` or `-?p/q`) and reduce it mod 1.
pub fn parse_mod1(s: &str) -> Option<RationalMod1> {
    parse_rational(s).map(RationalMod1::from_ratio)
}

/// Phase `e^{2 pi i r}` of an arbitrary rational.
pub fn phase_of(r: &Rational) -> Complex64 {
    RationalMod1::from_ratio(*r).phase()
}

/// Greatest common divisor of two non-negative integers.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `true` when `r` is an integer after sign normalization.
pub fn is_integer(r: &Rational) -> bool {
    r.denom().abs() == 1
}
