//! Integer polynomials with arbitrary-precision coefficients.
//!
//! Coefficients are stored ascending by degree; the leading coefficient is
//! nonzero unless the polynomial is zero (empty coefficient vector). Real-root
//! counting uses Sturm sequences on the square-free part, so roots of any
//! multiplicity are counted once.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A polynomial with integer coefficients, ascending by degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    /// Builds a polynomial, trimming trailing zero coefficients.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of a nonzero polynomial.
    ///
    /// Panics on the zero polynomial.
    pub fn degree(&self) -> usize {
        assert!(!self.is_zero(), "degree of the zero polynomial");
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("leading of zero polynomial")
    }

    pub fn is_monic(&self) -> bool {
        !self.is_zero() && self.leading().is_one()
    }

    /// `x - r` for a rational `r = p/q`, cleared to integer coefficients `q x - p`.
    pub fn linear_from_rational(r: &BigRational) -> Self {
        IntPolynomial::new(vec![-r.numer().clone(), r.denom().clone()])
    }

    pub fn eval_bigint(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + bigint_to_f64(c);
        }
        acc
    }

    /// Exact interval enclosure of `p([lo, hi])` by interval Horner evaluation.
    pub fn eval_interval(&self, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
        debug_assert!(lo <= hi);
        let mut alo = BigRational::zero();
        let mut ahi = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            let c = BigRational::from_integer(c.clone());
            let products = [&alo * lo, &alo * hi, &ahi * lo, &ahi * hi];
            let mut nlo = products[0].clone();
            let mut nhi = products[0].clone();
            for p in &products[1..] {
                if *p < nlo {
                    nlo = p.clone();
                }
                if *p > nhi {
                    nhi = p.clone();
                }
            }
            alo = nlo + &c;
            ahi = nhi + &c;
        }
        (alo, ahi)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return IntPolynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        IntPolynomial::new(coeffs)
    }

    pub fn neg(&self) -> Self {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        IntPolynomial::new(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPolynomial::new(coeffs)
    }

    /// Divides by the integer content, keeping the sign of the leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return IntPolynomial::zero();
        }
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = num_integer::gcd(g, c.clone());
        }
        IntPolynomial::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Square-free part `p / gcd(p, p')`, primitive, same leading sign as `p`.
    pub fn square_free_part(&self) -> Self {
        assert!(!self.is_zero());
        let dp = self.derivative();
        if dp.is_zero() {
            // constant polynomial
            return self.primitive();
        }
        let g = rat::gcd(&rat::from_int(self), &rat::from_int(&dp));
        if g.len() <= 1 {
            return self.primitive();
        }
        let (q, r) = rat::div_rem(&rat::from_int(self), &g);
        debug_assert!(rat::is_zero(&r));
        rat::to_primitive_int(&q)
    }

    /// Sturm sequence of the square-free part, as primitive integer polynomials.
    pub fn sturm_sequence(&self) -> Vec<IntPolynomial> {
        let sf = self.square_free_part();
        let mut seq = vec![sf.clone()];
        let d = sf.derivative();
        if d.is_zero() {
            return seq;
        }
        seq.push(d.primitive());
        loop {
            let a = rat::from_int(&seq[seq.len() - 2]);
            let b = rat::from_int(&seq[seq.len() - 1]);
            let (_, r) = rat::div_rem(&a, &b);
            if rat::is_zero(&r) {
                break;
            }
            let neg: Vec<BigRational> = r.iter().map(|c| -c).collect();
            seq.push(rat::to_primitive_int(&neg));
        }
        seq
    }

    /// Number of distinct real roots in the open interval `(lo, hi)`.
    ///
    /// Requires that neither endpoint is a root of the square-free part.
    pub fn count_roots_between(&self, lo: &BigRational, hi: &BigRational) -> usize {
        let seq = self.sturm_sequence();
        let va = sign_variations(&seq, lo);
        let vb = sign_variations(&seq, hi);
        va.saturating_sub(vb)
    }

    /// Isolating intervals for every distinct real root in `(lo, hi)`.
    ///
    /// Returned intervals are disjoint and sorted; a point interval marks an
    /// exact rational root. Endpoints of `(lo, hi)` must not be roots.
    pub fn isolate_roots_between(
        &self,
        lo: &BigRational,
        hi: &BigRational,
    ) -> Vec<(BigRational, BigRational)> {
        let sf = self.square_free_part();
        let seq = self.sturm_sequence();
        let mut out = Vec::new();
        let mut stack = vec![(lo.clone(), hi.clone())];
        while let Some((a, b)) = stack.pop() {
            let count = sign_variations(&seq, &a).saturating_sub(sign_variations(&seq, &b));
            match count {
                0 => {}
                1 => out.push((a, b)),
                _ => {
                    let mid = (&a + &b) / BigRational::from_integer(BigInt::from(2));
                    if sf.eval_rational(&mid).is_zero() {
                        out.push((mid.clone(), mid.clone()));
                        // nudge off the root so the sub-counts are valid
                        let eps = (&b - &a) / BigRational::from_integer(BigInt::from(1 << 20));
                        stack.push((a, &mid - &eps));
                        stack.push((&mid + &eps, b));
                    } else {
                        stack.push((a, mid.clone()));
                        stack.push((mid, b));
                    }
                }
            }
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        out
    }
}

fn sign_of(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn sign_variations(seq: &[IntPolynomial], x: &BigRational) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for p in seq {
        let s = sign_of(&p.eval_rational(x));
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Lossy conversion used only to seed numeric algorithms.
pub fn bigint_to_f64(x: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::MAX)
}

/// Lossy conversion used only for reporting.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses a rational from `"p/q"` or a plain integer string.
pub fn parse_rational(s: &str) -> Result<BigRational, crate::Error> {
    let bad = |m: &str| crate::Error::InvalidInput(format!("rational '{s}': {m}"));
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad("bad numerator"))?;
        let q: BigInt = q.trim().parse().map_err(|_| bad("bad denominator"))?;
        if q.is_zero() {
            return Err(bad("zero denominator"));
        }
        Ok(BigRational::new(p, q))
    } else {
        let p: BigInt = s.parse().map_err(|_| bad("bad integer"))?;
        Ok(BigRational::from_integer(p))
    }
}

/// Formats a rational as `"p/q"` (or `"p"` when the denominator is 1).
pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    if i == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

// JSON form: array of decimal-string coefficients, ascending degree.
impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        strings.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let strings = Vec::<String>::deserialize(deserializer)?;
        let mut coeffs = Vec::with_capacity(strings.len());
        for s in &strings {
            let c: BigInt = s
                .parse()
                .map_err(|_| serde::de::Error::custom(format!("bad coefficient '{s}'")))?;
            coeffs.push(c);
        }
        Ok(IntPolynomial::new(coeffs))
    }
}

/// Polynomial arithmetic over the rationals, used by gcd and Sturm remainders.
pub(crate) mod rat {
    use super::*;

    pub type RatPoly = Vec<BigRational>;

    pub fn from_int(p: &IntPolynomial) -> RatPoly {
        p.coeffs()
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }

    pub fn is_zero(p: &RatPoly) -> bool {
        p.iter().all(|c| c.is_zero())
    }

    pub fn trim(p: &mut RatPoly) {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
    }

    /// Euclidean division `a = q*b + r`.
    pub fn div_rem(a: &RatPoly, b: &RatPoly) -> (RatPoly, RatPoly) {
        let mut r = a.clone();
        trim(&mut r);
        let mut b = b.clone();
        trim(&mut b);
        assert!(!b.is_empty(), "division by zero polynomial");
        let db = b.len() - 1;
        let lead = b[db].clone();
        if r.len() <= db {
            return (Vec::new(), r);
        }
        let mut q = vec![BigRational::zero(); r.len() - db];
        while r.len() > db && !r.is_empty() {
            let dr = r.len() - 1;
            let factor = &r[dr] / &lead;
            q[dr - db] = factor.clone();
            for i in 0..=db {
                let t = &b[i] * &factor;
                r[dr - db + i] -= t;
            }
            trim(&mut r);
            if r.len() <= db {
                break;
            }
        }
        (q, r)
    }

    pub fn gcd(a: &RatPoly, b: &RatPoly) -> RatPoly {
        let mut a = a.clone();
        let mut b = b.clone();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let (_, r) = div_rem(&a, &b);
            a = b;
            b = r;
            trim(&mut b);
        }
        a
    }

    /// Clears denominators and divides by the content; keeps the leading sign.
    pub fn to_primitive_int(p: &RatPoly) -> IntPolynomial {
        let mut p = p.clone();
        trim(&mut p);
        if p.is_empty() {
            return IntPolynomial::zero();
        }
        let mut denom_lcm = BigInt::one();
        for c in &p {
            denom_lcm = num_integer::lcm(denom_lcm, c.denom().clone());
        }
        let ints: Vec<BigInt> = p
            .iter()
            .map(|c| c.numer() * (&denom_lcm / c.denom()))
            .collect();
        IntPolynomial::new(ints).primitive()
    }
}
