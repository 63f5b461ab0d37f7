//! Arbitrary-precision dyadic floating point: `mantissa * 2^exp`.
//!
//! Every operation rounds to a caller-chosen precision (bits of mantissa),
//! with round-to-nearest, ties-to-even. Values are normalized so the mantissa
//! is odd (or zero), which makes equality structural. This backs the
//! simultaneous root finder, where the default working precision is 128 bits
//! and retries double it.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 128;

/// A dyadic rational `mantissa * 2^exp` with odd (or zero) mantissa.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    mantissa: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mantissa: BigInt::from(1),
            exp: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    fn normalize(mut mantissa: BigInt, mut exp: i64) -> Self {
        if mantissa.is_zero() {
            return Dyadic::zero();
        }
        let tz = mantissa.magnitude().trailing_zeros().unwrap_or(0);
        if tz > 0 {
            mantissa >>= tz;
            exp += tz as i64;
        }
        Dyadic { mantissa, exp }
    }

    /// Rounds `mantissa * 2^exp` to `prec` significant bits, nearest-ties-even.
    fn round_to(mantissa: BigInt, exp: i64, prec: u32) -> Self {
        if mantissa.is_zero() {
            return Dyadic::zero();
        }
        let bits = mantissa.magnitude().bits();
        if bits <= prec as u64 {
            return Self::normalize(mantissa, exp);
        }
        let shift = bits - prec as u64;
        let sign = mantissa.sign();
        let mag = mantissa.magnitude();
        let q: BigUint = mag >> shift;
        let rem: BigUint = mag - (&q << shift);
        let half: BigUint = BigUint::from(1u8) << (shift - 1);
        let round_up = match rem.cmp(&half) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => q.bit(0),
        };
        let q = if round_up { q + 1u8 } else { q };
        let m = BigInt::from_biguint(sign, q);
        Self::normalize(m, exp + shift as i64)
    }

    pub fn from_bigint(x: &BigInt) -> Self {
        Self::normalize(x.clone(), 0)
    }

    pub fn from_i64(x: i64) -> Self {
        Self::from_bigint(&BigInt::from(x))
    }

    /// Exact conversion from an f64 (must be finite).
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite f64");
        if x == 0.0 {
            return Dyadic::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7FF) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Self::normalize(BigInt::from(sign * mant as i64), exp)
    }

    pub fn from_rational(x: &BigRational, prec: u32) -> Self {
        let num = Self::from_bigint(x.numer());
        let den = Self::from_bigint(x.denom());
        num.div(&den, prec)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        // keep only the top 64 bits to avoid huge conversions
        let bits = self.mantissa.magnitude().bits();
        if bits > 64 {
            let shift = bits - 64;
            let top: BigInt = &self.mantissa >> shift;
            top.to_f64().unwrap_or(f64::NAN) * exp2_i64(self.exp + shift as i64)
        } else {
            self.mantissa.to_f64().unwrap_or(f64::NAN) * exp2_i64(self.exp)
        }
    }

    pub fn signum(&self) -> i8 {
        if self.mantissa.is_zero() {
            0
        } else if self.mantissa.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mantissa: -&self.mantissa,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mantissa: self.mantissa.abs(),
            exp: self.exp,
        }
    }

    pub fn add(&self, other: &Self, prec: u32) -> Self {
        if self.is_zero() {
            return Self::round_to(other.mantissa.clone(), other.exp, prec);
        }
        if other.is_zero() {
            return Self::round_to(self.mantissa.clone(), self.exp, prec);
        }
        let (hi, lo) = if self.exp >= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        let diff = hi.exp - lo.exp;
        // if the low addend is far below the ulp of the result, it only matters
        // as a sticky bit; keep enough guard bits to round correctly
        let guard = prec as i64 + 64;
        if diff > guard + lo.mantissa.magnitude().bits() as i64 + hi.mantissa.magnitude().bits() as i64
        {
            return Self::round_to(hi.mantissa.clone(), hi.exp, prec);
        }
        let m = (&hi.mantissa << diff as u64) + &lo.mantissa;
        Self::round_to(m, lo.exp, prec)
    }

    pub fn sub(&self, other: &Self, prec: u32) -> Self {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Self, prec: u32) -> Self {
        Self::round_to(&self.mantissa * &other.mantissa, self.exp + other.exp, prec)
    }

    pub fn mul_i64(&self, k: i64, prec: u32) -> Self {
        Self::round_to(&self.mantissa * BigInt::from(k), self.exp, prec)
    }

    /// Division, rounded to `prec` bits. Panics on a zero divisor.
    pub fn div(&self, other: &Self, prec: u32) -> Self {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let nb = self.mantissa.magnitude().bits() as i64;
        let db = other.mantissa.magnitude().bits() as i64;
        let shift = (prec as i64 + 3 + db - nb).max(0) as u64;
        let num = &self.mantissa << shift;
        let q = num / &other.mantissa;
        Self::round_to(q, self.exp - shift as i64 - other.exp, prec)
    }

    /// Square root of a nonnegative value, rounded to `prec` bits.
    pub fn sqrt(&self, prec: u32) -> Self {
        assert!(self.signum() >= 0, "sqrt of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let bits = self.mantissa.magnitude().bits() as i64;
        let mut shift = (2 * (prec as i64 + 2) - bits).max(0);
        if (self.exp - shift) % 2 != 0 {
            shift += 1;
        }
        let m = self.mantissa.magnitude() << shift as u64;
        let root = m.sqrt();
        Self::round_to(BigInt::from(root), (self.exp - shift) / 2, prec)
    }

    /// Exact comparison.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        match (self.signum(), other.signum()) {
            (a, b) if a != b => a.cmp(&b),
            (0, 0) => Ordering::Equal,
            _ => {
                // same nonzero sign: compare aligned mantissas
                let (a, b) = if self.exp >= other.exp {
                    ((&self.mantissa << (self.exp - other.exp) as u64), other.mantissa.clone())
                } else {
                    (self.mantissa.clone(), &other.mantissa << (other.exp - self.exp) as u64)
                };
                a.cmp(&b)
            }
        }
    }

    /// `2^k` as a dyadic.
    pub fn exp2(k: i64) -> Self {
        Dyadic {
            mantissa: BigInt::from(1),
            exp: k,
        }
    }
}

fn exp2_i64(e: i64) -> f64 {
    if e > 1023 {
        f64::INFINITY
    } else if e < -1074 {
        0.0
    } else {
        f64::powi(2.0, e as i32)
    }
}

/// A complex point at a recorded working precision, with finite components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexPoint {
    pub re: Dyadic,
    pub im: Dyadic,
    pub precision: u32,
}

impl ComplexPoint {
    pub fn new(re: Dyadic, im: Dyadic, precision: u32) -> Self {
        ComplexPoint { re, im, precision }
    }

    pub fn zero(precision: u32) -> Self {
        ComplexPoint::new(Dyadic::zero(), Dyadic::zero(), precision)
    }

    pub fn from_f64(re: f64, im: f64, precision: u32) -> Self {
        ComplexPoint::new(Dyadic::from_f64(re), Dyadic::from_f64(im), precision)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.precision;
        ComplexPoint::new(self.re.add(&other.re, p), self.im.add(&other.im, p), p)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.precision;
        ComplexPoint::new(self.re.sub(&other.re, p), self.im.sub(&other.im, p), p)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.precision;
        let re = self.re.mul(&other.re, p).sub(&self.im.mul(&other.im, p), p);
        let im = self.re.mul(&other.im, p).add(&self.im.mul(&other.re, p), p);
        ComplexPoint::new(re, im, p)
    }

    pub fn div(&self, other: &Self) -> Self {
        let p = self.precision;
        let d = other.norm_sqr();
        let re = self
            .re
            .mul(&other.re, p)
            .add(&self.im.mul(&other.im, p), p)
            .div(&d, p);
        let im = self
            .im
            .mul(&other.re, p)
            .sub(&self.re.mul(&other.im, p), p)
            .div(&d, p);
        ComplexPoint::new(re, im, p)
    }

    pub fn norm_sqr(&self) -> Dyadic {
        let p = self.precision;
        self.re.mul(&self.re, p).add(&self.im.mul(&self.im, p), p)
    }

    pub fn modulus(&self) -> Dyadic {
        self.norm_sqr().sqrt(self.precision)
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    fn d(x: f64) -> Dyadic {
        Dyadic::from_f64(x)
    }

    #[test]
    fn arithmetic_matches_f64_on_exact_inputs() {
        let a = d(3.5);
        let b = d(-0.125);
        assert_eq!(a.add(&b, P).to_f64(), 3.375);
        assert_eq!(a.mul(&b, P).to_f64(), -0.4375);
        assert_eq!(a.sub(&b, P).to_f64(), 3.625);
        assert_eq!(a.div(&b, P).to_f64(), -28.0);
    }

    #[test]
    fn sqrt_squares_back() {
        let two = d(2.0);
        let r = two.sqrt(P);
        let back = r.mul(&r, P);
        let err = back.sub(&two, P).abs();
        assert!(err.cmp_value(&Dyadic::exp2(-120)) == Ordering::Less);
    }

    #[test]
    fn rounding_respects_precision() {
        // 1 + 2^-200 at 128 bits collapses to 1
        let tiny = Dyadic::exp2(-200);
        let one = Dyadic::one();
        assert_eq!(one.add(&tiny, P), one);
        // but not at 256 bits
        assert_ne!(one.add(&tiny, 256), one);
    }

    #[test]
    fn comparison_is_exact() {
        let a = d(1.0);
        let b = Dyadic::one().add(&Dyadic::exp2(-300), 512);
        assert_eq!(a.cmp_value(&b), Ordering::Less);
        assert_eq!(b.cmp_value(&a), Ordering::Greater);
        assert_eq!(a.cmp_value(&d(1.0)), Ordering::Equal);
    }

    #[test]
    fn from_rational_round_trip() {
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        let x = Dyadic::from_rational(&third, P);
        assert!((x.to_f64() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn complex_division() {
        let a = ComplexPoint::from_f64(1.0, 2.0, P);
        let b = ComplexPoint::from_f64(3.0, -1.0, P);
        let q = a.div(&b);
        let back = q.mul(&b);
        let err = back.sub(&a);
        assert!(err.modulus().cmp_value(&Dyadic::exp2(-120)) == Ordering::Less);
    }
}
