//! Arithmetic backends for register amplitudes.
//!
//! The protocol's circuits only ever produce amplitudes of the form
//! a + b·√2 with rational a, b (Bell states introduce 1/√2 factors, Pauli
//! gates permute and negate, collapse renormalises by 1/√p for dyadic p), so
//! ℚ(√2) is closed under everything the register does. [`Sqrt2Ext`]
//! implements that field exactly; `f64` is the fast backend for sampling.

use core::fmt;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact rational number, the currency of probabilities and efficiency
/// figures.
pub type Rational = Ratio<i64>;

/// Threshold below which an `f64` probability is treated as an impossible
/// branch rather than a numerical residue.
const F64_NEGLIGIBLE: f64 = 1e-15;

/// Arithmetic backend for amplitudes and probabilities.
///
/// The engine needs a ring containing 1/√2, a partial `1/√x` for collapse
/// renormalisation, and a way to recognise (numerically or exactly) zero.
pub trait Field: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    /// The constant 1/√2, the only irrational the Bell algebra needs.
    fn frac_1_sqrt_2() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `1/√x` for a probability `x > 0`; `None` when the result does not lie
    /// in the field (exact backends refuse rather than approximate).
    fn recip_sqrt(&self) -> Option<Self>;
    /// Whether a probability is (numerically or exactly) zero, used to prune
    /// impossible branches.
    fn is_negligible(&self) -> bool;
    fn to_f64(&self) -> f64;
    /// The exact rational value, when the backend can certify one.
    fn as_rational(&self) -> Option<Rational>;
}

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn frac_1_sqrt_2() -> Self {
        core::f64::consts::FRAC_1_SQRT_2
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn recip_sqrt(&self) -> Option<Self> {
        (*self > 0.0).then(|| 1.0 / libm::sqrt(*self))
    }

    fn is_negligible(&self) -> bool {
        libm::fabs(*self) < F64_NEGLIGIBLE
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn as_rational(&self) -> Option<Rational> {
        None
    }
}

/// An element a + b·√2 of the field ℚ(√2), with exact rational coefficients.
///
/// Closed under ring operations; [`Field::recip_sqrt`] is defined exactly for
/// the dyadic probabilities this engine produces (p with p·2^k a perfect
/// square for k ∈ {0, 1}) and returns `None` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sqrt2Ext {
    /// Rational part a.
    pub rational: Rational,
    /// Coefficient b of √2.
    pub root2: Rational,
}

impl Sqrt2Ext {
    pub fn new(rational: Rational, root2: Rational) -> Self {
        Self { rational, root2 }
    }

    pub fn from_rational(rational: Rational) -> Self {
        Self::new(rational, Rational::zero())
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n))
    }
}

impl fmt::Display for Sqrt2Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.root2.is_zero() {
            write!(f, "{}", self.rational)
        } else if self.rational.is_zero() {
            write!(f, "{}·√2", self.root2)
        } else {
            write!(f, "{} + {}·√2", self.rational, self.root2)
        }
    }
}

/// Floor of √m for non-negative m, by Newton refinement of a float seed.
fn isqrt(m: i128) -> i128 {
    debug_assert!(m >= 0);
    if m < 2 {
        return m;
    }
    let mut x = libm::sqrt(m as f64) as i128 + 1;
    while x * x > m {
        x -= 1;
    }
    x
}

impl Field for Sqrt2Ext {
    fn zero() -> Self {
        Self::from_integer(0)
    }

    fn one() -> Self {
        Self::from_integer(1)
    }

    fn frac_1_sqrt_2() -> Self {
        // 1/√2 = (1/2)·√2.
        Self::new(Rational::zero(), Rational::new(1, 2))
    }

    fn add(&self, rhs: &Self) -> Self {
        Self::new(self.rational + rhs.rational, self.root2 + rhs.root2)
    }

    fn sub(&self, rhs: &Self) -> Self {
        Self::new(self.rational - rhs.rational, self.root2 - rhs.root2)
    }

    fn mul(&self, rhs: &Self) -> Self {
        // (a + b√2)(c + d√2) = (ac + 2bd) + (ad + bc)√2.
        let two = Rational::from_integer(2);
        Self::new(
            self.rational * rhs.rational + two * self.root2 * rhs.root2,
            self.rational * rhs.root2 + self.root2 * rhs.rational,
        )
    }

    fn neg(&self) -> Self {
        Self::new(-self.rational, -self.root2)
    }

    fn recip_sqrt(&self) -> Option<Self> {
        // Probabilities are rational, so refuse a nonzero √2 part outright.
        if !self.root2.is_zero() || !self.rational.is_positive() {
            return None;
        }
        // 1/√(p/q) = √(pq)/p. If pq = s² the result is rational s/p; if
        // pq = 2t² it is (t/p)·√2. Anything else leaves ℚ(√2).
        let p = *self.rational.numer() as i128;
        let q = *self.rational.denom() as i128;
        let m = p * q;
        let s = isqrt(m);
        if s * s == m {
            return Some(Self::from_rational(Rational::new(s as i64, p as i64)));
        }
        if m % 2 == 0 {
            let t = isqrt(m / 2);
            if 2 * t * t == m {
                return Some(Self::new(
                    Rational::zero(),
                    Rational::new(t as i64, p as i64),
                ));
            }
        }
        None
    }

    fn is_negligible(&self) -> bool {
        self.rational.is_zero() && self.root2.is_zero()
    }

    fn to_f64(&self) -> f64 {
        let ratio_f64 = |r: &Rational| {
            r.to_f64()
                .unwrap_or_else(|| *r.numer() as f64 / *r.denom() as f64)
        };
        ratio_f64(&self.rational) + ratio_f64(&self.root2) * core::f64::consts::SQRT_2
    }

    fn as_rational(&self) -> Option<Rational> {
        self.root2.is_zero().then_some(self.rational)
    }
}
