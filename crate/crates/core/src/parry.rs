//! Parry polynomials and the integer criterion for manufacturing Parry numbers.
//!
//! For a post-critically finite map, the infinite expansion of 1 is `v w^inf`
//! with preperiod `k` and lowest period `p`, and the associated monic integer
//! polynomial is
//!
//! ```text
//! P(z) = z^(k+p) - sum_{j=1}^{k+p} s(j) d(j) z^(k+p-j) - z^k + sum_{j=1}^{k} s(j) d(j) z^(k-j)
//! ```
//!
//! with `beta` among its zeros. The criterion side takes distinct nonzero
//! integers `M(1..n)` subject to the size hypotheses, derives the itinerary
//! and sign configuration, solves `x^n = M(1) x^(n-1) + ... + M(n)` inside
//! `(It(1), It(1)+1)`, and certifies the produced map by exact orbit
//! simulation: `f^(k-1)(1)` lands in `I_It(k)` for every `k < n` and
//! `beta f^(n-1)(1) - a(n)` is the zero coordinate vector.

use num_bigint::BigInt;
use num_complex::Complex64;

use crate::dyadic::{ComplexPoint, Dyadic};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebraic::{AlgebraicReal, QBetaElement};
use crate::error::Error;
use crate::map::{
    finite_to_infinite, to_itinerary, Expansion, ExpansionStep, GBetaMap, Itinerary, PcfData,
    PcfOutcome, Shape, SignConfiguration,
};
use crate::poly::IntPolynomial;
use crate::Result;

/// A generalized Parry polynomial with its provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParryPolynomial {
    pub poly: IntPolynomial,
    /// Preperiod of the infinite expansion of 1.
    pub k: usize,
    /// Lowest period of the infinite expansion of 1.
    pub p: usize,
    /// The expansion the polynomial was built from.
    pub expansion: Expansion,
}

impl ParryPolynomial {
    pub fn degree(&self) -> usize {
        self.k + self.p
    }

    /// Largest digit of the expansion, a valid bound for truncation tails.
    pub fn max_digit(&self) -> u32 {
        self.expansion.steps().iter().map(|s| s.d).max().unwrap_or(0)
    }
}

/// Builds the Parry polynomial from an infinite expansion of 1 written with
/// minimal preperiod and period. Periodic expansions produce
/// `z^p - sum s(j) d(j) z^(p-j) - 1`.
pub fn build_parry_polynomial(exp: &Expansion) -> Result<ParryPolynomial> {
    let (k, p) = match exp.shape() {
        Shape::Periodic(p) => (0usize, p),
        Shape::Preperiodic(k, p) => (k, p),
        _ => return Err(Error::NotInfinite),
    };
    let n = k + p;
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] += BigInt::one();
    for (idx, st) in exp.steps().iter().enumerate() {
        let j = idx + 1;
        let sd = BigInt::from(st.s as i64 * st.d as i64);
        coeffs[n - j] -= &sd;
        if j <= k {
            coeffs[k - j] += &sd;
        }
    }
    coeffs[k] -= BigInt::one();
    let poly = IntPolynomial::new(coeffs);
    debug_assert!(poly.is_monic());
    Ok(ParryPolynomial {
        poly,
        k,
        p,
        expansion: exp.clone(),
    })
}

/// The Parry polynomial of a PCF map, via exact orbit detection.
pub fn parry_from_map(map: &GBetaMap, max_steps: usize) -> Result<ParryPolynomial> {
    match map.detect_pcf(max_steps)? {
        PcfOutcome::Pcf(data) => build_parry_polynomial(&data.expansion),
        PcfOutcome::Undetermined => Err(Error::NotInfinite),
    }
}

/// Horner evaluation at a dyadic complex point. Needed for residuals at large
/// `|z|`, where f64 evaluation of a high-degree polynomial loses everything
/// to cancellation.
fn eval_poly_dyadic(p: &IntPolynomial, z: &ComplexPoint, prec: u32) -> ComplexPoint {
    let zp = ComplexPoint::new(z.re.clone(), z.im.clone(), prec);
    let mut acc = ComplexPoint::zero(prec);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(&zp).add(&ComplexPoint::new(
            Dyadic::from_bigint(c),
            Dyadic::zero(),
            prec,
        ));
    }
    acc
}

/// Truncated series `1 - sum_{j<=n} s(j) d(j) z^-j`.
fn one_minus_digit_series(exp: &Expansion, z: Complex64, n: usize) -> Complex64 {
    let inv = 1.0 / z;
    let mut acc = Complex64::new(0.0, 0.0);
    let products = exp.unroll_products(n);
    for sd in products.iter().rev() {
        acc = (acc + *sd as f64) * inv;
    }
    Complex64::new(1.0, 0.0) - acc
}

/// Geometric tail bound `D |z|^-n / (1 - |z|^-1)` for digits bounded by `D`.
fn digit_tail_bound(max_digit: u32, z_mod: f64, n: usize) -> f64 {
    let r = 1.0 / z_mod;
    (max_digit as f64) * r.powi(n as i32) / (1.0 - r)
}

/// Both sides of the zero equivalence at a point `|z| > 1`.
#[derive(Debug, Clone, Serialize)]
pub struct ZeroEquivalenceReport {
    pub polynomial_residual: f64,
    pub series_residual: f64,
    pub tail_bound: f64,
    pub truncation: usize,
}

impl ZeroEquivalenceReport {
    /// The two sides vanish together at the given thresholds (the series side
    /// is slackened by the truncation tail).
    pub fn consistent(&self, poly_tol: f64, series_tol: f64) -> bool {
        (self.polynomial_residual < poly_tol)
            == (self.series_residual < series_tol + self.tail_bound)
    }

    /// Default tolerance for "the series side vanishes": ten tails plus 1e-8.
    pub fn series_tolerance(&self) -> f64 {
        10.0 * self.tail_bound + 1e-8
    }
}

/// Evaluates `P(z)` and the truncated series `1 - sum s(j) d(j) z^-j` at a
/// point outside the closed unit disk. The polynomial side runs in dyadic
/// arithmetic at (at least) 192 bits so the residual of a certified root
/// stays meaningful even when `|z|^deg` is large.
pub fn verify_zero_equivalence(
    parry: &ParryPolynomial,
    z: &ComplexPoint,
    truncation: usize,
) -> Result<ZeroEquivalenceReport> {
    let c = z.to_c64();
    let z_mod = c.norm();
    if z_mod <= 1.0 {
        return Err(Error::InsideDisk);
    }
    let prec = z.precision.max(192);
    let polynomial_residual = eval_poly_dyadic(&parry.poly, z, prec).modulus().to_f64();
    let series_residual = one_minus_digit_series(&parry.expansion, c, truncation).norm();
    let tail_bound = digit_tail_bound(parry.max_digit(), z_mod, truncation);
    Ok(ZeroEquivalenceReport {
        polynomial_residual,
        series_residual,
        tail_bound,
        truncation,
    })
}

/// Agreement of `1 - sum s(j) d(j) z^-j` with `(1 - beta/z) sum c_j z^-j`.
#[derive(Debug, Clone, Serialize)]
pub struct FactorIdentityReport {
    pub lhs: (f64, f64),
    pub rhs: (f64, f64),
    pub difference: f64,
    pub tail_bound: f64,
}

/// Checks the factorization identity at `|z| > 1` with truncation `n`, using
/// the exact orbit for the signed coefficients `c_j = s(j+1) f^j(1)`.
pub fn verify_factor_identity(
    map: &GBetaMap,
    z: Complex64,
    truncation: usize,
) -> Result<FactorIdentityReport> {
    OrbitSeries::compute(map, truncation)?.factor_identity_at(z)
}

/// Precomputed series data for one map: the first `n` dynamical pairs
/// `(s(j), d(j))` and the signed orbit `c_0..c_n` as floats. The exact orbit
/// is iterated only until it hits zero or repeats a state; the tail is
/// unrolled by periodicity. Reuse this when evaluating many points.
#[derive(Debug, Clone)]
pub struct OrbitSeries {
    pairs: Vec<ExpansionStep>,
    c: Vec<f64>,
    max_digit: u32,
    beta: f64,
}

impl OrbitSeries {
    pub fn compute(map: &GBetaMap, n: usize) -> Result<Self> {
        let mut pairs: Vec<ExpansionStep> = Vec::with_capacity(n);
        let mut c = Vec::with_capacity(n + 1);
        c.push(1.0);
        let mut x = map.one();
        let mut s = 1i8;
        // key hashing ignores the refinable interval cache (see map.rs)
        #[allow(clippy::mutable_key_type)]
        let mut seen: std::collections::HashMap<(QBetaElement, i8), usize> =
            std::collections::HashMap::new();
        seen.insert((x.clone(), s), 0);
        while pairs.len() < n {
            let (x1, e, d) = map.step(&x)?;
            pairs.push(ExpansionStep { s, d });
            let s1 = e * s;
            if x1.is_zero() && map.signs().get(0) == 1 {
                while pairs.len() < n {
                    pairs.push(ExpansionStep { s: s1, d: 0 });
                }
                while c.len() < n + 1 {
                    c.push(0.0);
                }
                break;
            }
            c.push(s1 as f64 * x1.to_f64());
            let t = pairs.len();
            if let Some(&r) = seen.get(&(x1.clone(), s1)) {
                // states repeat with period t - r: unroll both sequences
                let period = t - r;
                while pairs.len() < n {
                    let j = pairs.len();
                    pairs.push(pairs[j - period]);
                }
                while c.len() < n + 1 {
                    let j = c.len();
                    let v = c[j - period];
                    c.push(v);
                }
                break;
            }
            seen.insert((x1.clone(), s1), t);
            x = x1;
            s = s1;
        }
        let max_digit = pairs.iter().map(|p| p.d).max().unwrap_or(0);
        Ok(OrbitSeries {
            pairs,
            c,
            max_digit,
            beta: map.context().beta_f64(),
        })
    }

    pub fn factor_identity_at(&self, z: Complex64) -> Result<FactorIdentityReport> {
        let z_mod = z.norm();
        if z_mod <= 1.0 {
            return Err(Error::InsideDisk);
        }
        let n = self.pairs.len();
        let inv = 1.0 / z;
        let mut digit_sum = Complex64::new(0.0, 0.0);
        for st in self.pairs.iter().rev() {
            digit_sum = (digit_sum + (st.s as f64) * (st.d as f64)) * inv;
        }
        let lhs = Complex64::new(1.0, 0.0) - digit_sum;
        let mut c_sum = Complex64::new(0.0, 0.0);
        for cj in self.c.iter().rev() {
            c_sum = c_sum * inv + cj;
        }
        let rhs = (Complex64::new(1.0, 0.0) - self.beta * inv) * c_sum;
        // |c_j| <= 1 and digits are bounded, so both tails are geometric
        let tail = digit_tail_bound(self.max_digit, z_mod, n)
            + (1.0 + self.beta / z_mod) * digit_tail_bound(1, z_mod, n);
        Ok(FactorIdentityReport {
            lhs: (lhs.re, lhs.im),
            rhs: (rhs.re, rhs.im),
            difference: (lhs - rhs).norm(),
            tail_bound: tail,
        })
    }

    /// Signed orbit coefficients `c_0..c_n`.
    pub fn coefficients(&self) -> &[f64] {
        &self.c
    }
}

/// A validated criterion sequence: the integers `M(j)`, the derived
/// magnitudes, signs, itinerary prefix, and sign configuration.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionSequence {
    pub m_values: Vec<i64>,
    pub magnitudes: Vec<u32>,
    pub step_signs: Vec<i8>,
    pub itinerary: Vec<u32>,
    pub signs: SignConfiguration,
}

impl CriterionSequence {
    pub fn len(&self) -> usize {
        self.m_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m_values.is_empty()
    }

    /// Alphabet bound `m = It(1)`.
    pub fn alphabet_m(&self) -> u32 {
        self.itinerary[0]
    }

    /// The monic criterion polynomial `x^n - M(1) x^(n-1) - ... - M(n)`.
    pub fn polynomial(&self) -> IntPolynomial {
        let n = self.m_values.len();
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        for (j, &m) in self.m_values.iter().enumerate() {
            // M(j+1) multiplies x^(n-j-1)
            coeffs[n - j - 1] = BigInt::from(-m);
        }
        IntPolynomial::new(coeffs)
    }

    /// Canonical id used by scan outputs.
    pub fn id(&self) -> String {
        let parts: Vec<String> = self.m_values.iter().map(|m| m.to_string()).collect();
        format!("M:{}", parts.join("_"))
    }
}

/// Validates the hypotheses on `M(1..n)` and derives the itinerary and sign
/// configuration. Entries of `E` not pinned by the construction are filled
/// with `free_fill`.
pub fn make_criterion(m_values: &[i64], free_fill: i8) -> Result<CriterionSequence> {
    let fail = |msg: String| Err(Error::HypothesisViolation(msg));
    let n = m_values.len();
    if n < 2 {
        return fail(format!("need at least two integers, got {n}"));
    }
    if free_fill != 1 && free_fill != -1 {
        return Err(Error::InvalidInput("free fill sign must be +1 or -1".into()));
    }
    if m_values.contains(&0) {
        return fail("all M(j) must be nonzero".into());
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if m_values[i] == m_values[j] {
                return fail(format!("M values must be distinct: M({}) = M({})", i + 1, j + 1));
            }
        }
    }
    let m1 = m_values[0];
    if m1 < 2 {
        return fail(format!("M(1) = {m1} but M(1) >= 2 is required"));
    }
    for (idx, &m) in m_values.iter().enumerate().skip(1) {
        if m.unsigned_abs() as i64 + 1 >= m1 {
            return fail(format!(
                "|M({})| + 1 = {} is not below M(1) = {m1}",
                idx + 1,
                m.unsigned_abs() + 1
            ));
        }
    }
    for (i, &mi) in m_values.iter().enumerate() {
        for (j, &mj) in m_values.iter().enumerate() {
            if mi.unsigned_abs() as i64 == mj.unsigned_abs() as i64 - 1 {
                return fail(format!(
                    "|M({})| = |M({})| - 1 = {} is forbidden",
                    i + 1,
                    j + 1,
                    mi.unsigned_abs()
                ));
            }
        }
    }

    let magnitudes: Vec<u32> = m_values.iter().map(|&m| m.unsigned_abs() as u32).collect();
    let step_signs: Vec<i8> = m_values.iter().map(|&m| if m > 0 { 1 } else { -1 }).collect();
    debug_assert_eq!(step_signs[0], 1);

    let mut itinerary = Vec::with_capacity(n);
    for j in 0..n - 1 {
        let it = if step_signs[j + 1] == step_signs[j] {
            magnitudes[j]
        } else {
            magnitudes[j] - 1
        };
        itinerary.push(it);
    }
    itinerary.push(magnitudes[n - 1]);

    let m_top = itinerary[0];
    for (idx, &a) in magnitudes.iter().enumerate().skip(1) {
        if m_top <= a {
            return fail(format!(
                "It(1) = {m_top} must exceed a({}) = {a}",
                idx + 1
            ));
        }
    }

    // E(It(j)) = s(j+1)/s(j) for j < n; remaining entries take the fill sign
    let mut entries: Vec<Option<i8>> = vec![None; m_top as usize + 1];
    for j in 0..n - 1 {
        let wanted = step_signs[j + 1] * step_signs[j];
        let slot = &mut entries[itinerary[j] as usize];
        match slot {
            None => *slot = Some(wanted),
            Some(existing) if *existing == wanted => {}
            Some(_) => {
                return fail(format!(
                    "conflicting sign constraints at E({})",
                    itinerary[j]
                ));
            }
        }
    }
    let signs = SignConfiguration::new(
        entries
            .into_iter()
            .map(|e| e.unwrap_or(free_fill))
            .collect(),
    )?;
    Ok(CriterionSequence {
        m_values: m_values.to_vec(),
        magnitudes,
        step_signs,
        itinerary,
        signs,
    })
}

/// Solution of the criterion equation, with the number of candidate roots the
/// isolator had to consider inside the target interval.
#[derive(Debug, Clone)]
pub struct CriterionSolution {
    pub beta: AlgebraicReal,
    pub roots_in_interval: usize,
}

/// Solves `x = M(1) + M(2)/x + ... + M(n)/x^(n-1)` for the root in
/// `(It(1), It(1)+1)`. When the criterion polynomial has several roots there,
/// each is checked by exact orbit verification and the certified one wins.
pub fn solve_criterion_beta(c: &CriterionSequence) -> Result<CriterionSolution> {
    let q = c.polynomial();
    let lo = BigRational::from_integer(BigInt::from(c.alphabet_m()));
    let hi = &lo + BigRational::one();
    if q.eval_rational(&lo).is_zero() || q.eval_rational(&hi).is_zero() {
        return Err(Error::IsolationFailure(
            "criterion polynomial vanishes at an interval endpoint, contradicting the \
             fixed-point argument"
                .into(),
        ));
    }
    let intervals = q.isolate_roots_between(&lo, &hi);
    match intervals.len() {
        0 => Err(Error::IsolationFailure(format!(
            "no root of {q} in ({lo}, {})",
            hi
        ))),
        1 => {
            let (a, b) = intervals.into_iter().next().unwrap();
            Ok(CriterionSolution {
                beta: AlgebraicReal::new(q, a, b)?,
                roots_in_interval: 1,
            })
        }
        count => {
            for (a, b) in intervals {
                let beta = AlgebraicReal::new(q.clone(), a, b)?;
                if verify_criterion_orbit(c, &beta).is_ok() {
                    return Ok(CriterionSolution {
                        beta,
                        roots_in_interval: count,
                    });
                }
            }
            Err(Error::IsolationFailure(format!(
                "{count} roots in the criterion interval but none verified"
            )))
        }
    }
}

/// Exact certificate that the criterion data produce a PCF map.
#[derive(Debug, Clone)]
pub struct OrbitVerification {
    pub map: GBetaMap,
    pub pcf: PcfData,
}

/// Simulates the exact orbit of 1 under the criterion map and checks each
/// claim: branch membership `f^(k-1)(1)` in `I_It(k)` for `k < n`, the exact
/// landing `beta f^(n-1)(1) = a(n)` as a zero coordinate vector, and post-
/// critical finiteness after the landing.
pub fn verify_criterion_orbit(
    c: &CriterionSequence,
    beta: &AlgebraicReal,
) -> Result<OrbitVerification> {
    let n = c.len();
    let map = GBetaMap::new(beta.clone(), c.signs.clone())?;
    let mut x = map.one();
    for k in 1..n {
        let branch = map.classify(&x).map_err(|e| Error::VerificationFailure {
            index: k,
            detail: e.to_string(),
        })?;
        if branch != c.itinerary[k - 1] {
            return Err(Error::VerificationFailure {
                index: k,
                detail: format!(
                    "f^{}(1) lies in I_{branch}, expected I_{}",
                    k - 1,
                    c.itinerary[k - 1]
                ),
            });
        }
        let (x1, _, _) = map.step(&x).map_err(|e| Error::VerificationFailure {
            index: k,
            detail: e.to_string(),
        })?;
        x = x1;
    }
    // f^(n-1)(1) = a(n)/beta exactly
    let landing = x.mul_beta().add_integer(-(c.magnitudes[n - 1] as i64));
    if !landing.is_zero() {
        return Err(Error::VerificationFailure {
            index: n,
            detail: "beta f^(n-1)(1) - a(n) has nonzero coordinates".into(),
        });
    }
    match map.detect_pcf(4 * n + 16)? {
        PcfOutcome::Pcf(pcf) => Ok(OrbitVerification { map, pcf }),
        PcfOutcome::Undetermined => Err(Error::VerificationFailure {
            index: n,
            detail: "orbit did not close up after the exact landing".into(),
        }),
    }
}

/// Exact remainder-bound check: `R_j(x) = sum_{i=j}^{n-1} s(i+1) a(i+1) x^-i`
/// must satisfy `|R_j(x)| < x^-(j-1)` with `sign(R_j(x)) = s(j+1)`.
#[derive(Debug, Clone, Serialize)]
pub struct RemainderReport {
    pub magnitude_ok: bool,
    pub sign_ok: bool,
    /// `R_j(x)` as an exact rational, reported as a string.
    pub value: String,
}

pub fn check_remainder_bounds(
    c: &CriterionSequence,
    x: &BigRational,
    j: usize,
) -> Result<RemainderReport> {
    let n = c.len();
    if j < 1 || j > n - 1 {
        return Err(Error::InvalidInput(format!(
            "remainder index {j} outside 1..={}",
            n - 1
        )));
    }
    let lo = BigRational::from_integer(BigInt::from(c.alphabet_m()));
    let hi = &lo + BigRational::one();
    if x < &lo || x > &hi {
        return Err(Error::InvalidInput(format!(
            "x = {x} outside [{lo}, {hi}]"
        )));
    }
    // scale by x^(n-1): value * x^(n-1) = sum s(i+1) a(i+1) x^(n-1-i)
    let mut scaled = BigRational::zero();
    for i in j..n {
        let coeff = BigRational::from_integer(BigInt::from(
            c.step_signs[i] as i64 * c.magnitudes[i] as i64,
        ));
        scaled += coeff * x.pow((n - 1 - i) as i32);
    }
    // |R_j| < x^-(j-1)  <=>  |scaled| < x^(n-j)
    let magnitude_ok = scaled.abs() < x.pow((n - j) as i32);
    let sign = if scaled.is_zero() {
        0
    } else if scaled.is_positive() {
        1i8
    } else {
        -1
    };
    let sign_ok = sign == c.step_signs[j];
    let value = scaled / x.pow((n - 1) as i32);
    Ok(RemainderReport {
        magnitude_ok,
        sign_ok,
        value: crate::poly::format_rational(&value),
    })
}

/// Itinerary of 1 for a criterion-certified map, for admissibility checks.
pub fn criterion_itinerary(v: &OrbitVerification) -> Result<Itinerary> {
    to_itinerary(&v.pcf.expansion)
}

/// The infinite expansion of 1 for a map already known to be PCF.
pub fn infinite_expansion(map: &GBetaMap, max_steps: usize) -> Result<Expansion> {
    let exp = map.expand(&map.one(), max_steps)?;
    match exp.shape() {
        Shape::Finite => finite_to_infinite(&exp),
        Shape::Truncated(_) => Err(Error::NotInfinite),
        _ => Ok(exp),
    }
}

/// Builds `beta` as an algebraic real from a Parry polynomial, reusing the
/// interval of a trusted witness (refined until it isolates).
pub fn beta_from_parry(parry: &ParryPolynomial, witness: &AlgebraicReal) -> Result<AlgebraicReal> {
    let mut probe = witness.clone();
    let mut width = witness.width();
    let two = BigRational::from_integer(BigInt::from(2));
    for _ in 0..256 {
        let lo = probe.lo().clone();
        let hi = probe.hi().clone();
        if lo == hi {
            return AlgebraicReal::new(parry.poly.clone(), lo, hi);
        }
        if !parry.poly.eval_rational(&lo).is_zero()
            && !parry.poly.eval_rational(&hi).is_zero()
            && parry.poly.count_roots_between(&lo, &hi) == 1
        {
            return AlgebraicReal::new(parry.poly.clone(), lo, hi);
        }
        width /= &two;
        probe = probe.refine(&width);
    }
    Err(Error::IsolationFailure(
        "could not isolate beta inside the witness interval".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::PcfOutcome;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn golden_map() -> GBetaMap {
        GBetaMap::new(AlgebraicReal::golden(), SignConfiguration::classical(1)).unwrap()
    }

    fn pcf_expansion(map: &GBetaMap) -> Expansion {
        match map.detect_pcf(500).unwrap() {
            PcfOutcome::Pcf(d) => d.expansion,
            PcfOutcome::Undetermined => panic!("expected PCF"),
        }
    }

    #[test]
    fn golden_parry_polynomial() {
        let exp = pcf_expansion(&golden_map());
        let parry = build_parry_polynomial(&exp).unwrap();
        assert_eq!(parry.poly, IntPolynomial::from_i64(&[-1, -1, 1]));
        assert_eq!((parry.k, parry.p), (0, 2));
    }

    #[test]
    fn flipped_two_parry_polynomial() {
        let map = GBetaMap::new(
            AlgebraicReal::from_integer(2),
            SignConfiguration::new(vec![1, -1]).unwrap(),
        )
        .unwrap();
        let parry = build_parry_polynomial(&pcf_expansion(&map)).unwrap();
        assert_eq!(parry.poly, IntPolynomial::from_i64(&[-2, 1]));
    }

    #[test]
    fn classical_three_parry_polynomial() {
        let map = GBetaMap::new(
            AlgebraicReal::from_integer(3),
            SignConfiguration::classical(2),
        )
        .unwrap();
        let parry = build_parry_polynomial(&pcf_expansion(&map)).unwrap();
        assert_eq!(parry.poly, IntPolynomial::from_i64(&[-3, 1]));
    }

    #[test]
    fn parry_vanishes_at_beta() {
        let map = golden_map();
        let parry = parry_from_map(&map, 500).unwrap();
        let beta = map.context().beta_f64();
        assert!(parry.poly.eval_f64(beta).abs() < 1e-12);
    }

    #[test]
    fn zero_equivalence_rejects_inside_disk() {
        let parry = parry_from_map(&golden_map(), 500).unwrap();
        let z = ComplexPoint::from_f64(-0.618034, 0.0, 128);
        assert!(matches!(
            verify_zero_equivalence(&parry, &z, 100),
            Err(Error::InsideDisk)
        ));
    }

    #[test]
    fn zero_equivalence_at_beta() {
        let parry = parry_from_map(&golden_map(), 500).unwrap();
        let z = ComplexPoint::from_f64(1.6180339887498949, 0.0, 128);
        let report = verify_zero_equivalence(&parry, &z, 200).unwrap();
        assert!(report.polynomial_residual < 1e-8);
        assert!(report.series_residual < report.series_tolerance());
        assert!(report.consistent(1e-8, 1e-6));
    }

    #[test]
    fn zero_equivalence_away_from_zeros() {
        // P = z - 2 at z = 3: both sides bounded away from zero
        let map = GBetaMap::new(
            AlgebraicReal::from_integer(2),
            SignConfiguration::new(vec![1, -1]).unwrap(),
        )
        .unwrap();
        let parry = parry_from_map(&map, 100).unwrap();
        let report =
            verify_zero_equivalence(&parry, &ComplexPoint::from_f64(3.0, 0.0, 128), 200).unwrap();
        assert!(report.polynomial_residual > 0.5);
        assert!(report.series_residual > 0.1);
        assert!(report.consistent(1e-8, 1e-6));
    }

    #[test]
    fn factor_identity_golden_at_two() {
        let report =
            verify_factor_identity(&golden_map(), Complex64::new(2.0, 0.0), 100).unwrap();
        assert!(report.difference < 1e-10, "difference {}", report.difference);
    }

    #[test]
    fn factor_identity_at_beta_both_vanish() {
        let map = golden_map();
        let beta = map.context().beta_f64();
        let report = verify_factor_identity(&map, Complex64::new(beta, 0.0), 200).unwrap();
        assert!(report.lhs.0.abs() < 1e-9 && report.lhs.1.abs() < 1e-9);
        assert!(report.rhs.0.abs() < 1e-9 && report.rhs.1.abs() < 1e-9);
    }

    #[test]
    fn factor_identity_flipped_two() {
        let map = GBetaMap::new(
            AlgebraicReal::from_integer(2),
            SignConfiguration::new(vec![1, -1]).unwrap(),
        )
        .unwrap();
        let report = verify_factor_identity(&map, Complex64::new(1.5, 0.0), 100).unwrap();
        assert!(report.difference < 1e-10);
    }

    #[test]
    fn criterion_worked_instance() {
        let c = make_criterion(&[3, 1, -1], 1).unwrap();
        assert_eq!(c.itinerary, vec![3, 0, 1]);
        assert_eq!(c.signs.get(3), 1);
        assert_eq!(c.signs.get(0), -1);
        // free entries default to +1
        assert_eq!(c.signs.get(1), 1);
        assert_eq!(c.signs.get(2), 1);
    }

    #[test]
    fn criterion_rejects_boundary_case() {
        match make_criterion(&[2, 1], 1) {
            Err(Error::HypothesisViolation(msg)) => assert!(msg.contains("M(1)")),
            other => panic!("expected hypothesis violation, got {other:?}"),
        }
    }

    #[test]
    fn criterion_rejects_consecutive_magnitudes() {
        // (3, 2, 1) trips the size hypothesis first; either clause rejects it
        assert!(matches!(
            make_criterion(&[3, 2, 1], 1),
            Err(Error::HypothesisViolation(_))
        ));
        // (5, 3, 2) satisfies the size hypothesis but has |M(3)| = |M(2)| - 1
        match make_criterion(&[5, 3, 2], 1) {
            Err(Error::HypothesisViolation(msg)) => assert!(msg.contains("- 1")),
            other => panic!("expected hypothesis violation, got {other:?}"),
        }
    }

    #[test]
    fn criterion_rejects_endpoint_trap() {
        // (3, -2): |M(2)| + 1 = 3 is not strictly below M(1) = 3; the
        // associated polynomial x^2 - 3x + 2 would put beta on the interval
        // boundary, which the hypotheses exclude
        assert!(matches!(
            make_criterion(&[3, -2], 1),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn solve_worked_instance() {
        let c = make_criterion(&[3, 1, -1], 1).unwrap();
        assert_eq!(c.polynomial(), IntPolynomial::from_i64(&[1, -1, -3, 1]));
        let sol = solve_criterion_beta(&c).unwrap();
        assert_eq!(sol.roots_in_interval, 1);
        let b = sol.beta.to_f64();
        assert!((3.2 ..3.23).contains(&b), "beta = {b}");
    }

    #[test]
    fn verify_worked_instance() {
        let c = make_criterion(&[3, 1, -1], 1).unwrap();
        let sol = solve_criterion_beta(&c).unwrap();
        let v = verify_criterion_orbit(&c, &sol.beta).unwrap();
        assert!(v.pcf.period >= 1);
        // branch membership is guaranteed for the first n-1 steps only; the
        // n-th point a(n)/beta sits exactly on a right-closed boundary
        let it = criterion_itinerary(&v).unwrap();
        let n = c.len();
        assert_eq!(&it.unroll(n - 1), &c.itinerary[..n - 1]);
        // for this instance the landing point 1/beta classifies into I_0
        assert_eq!(it.unroll(n)[n - 1], c.itinerary[n - 1] - 1);
    }

    #[test]
    fn worked_instance_expansion_has_sign_flipped_double_period() {
        // the orbit of 1 has four points but the cumulative sign flips over
        // one orbit cycle, so the pair sequence (and the Parry polynomial)
        // has period eight
        let c = make_criterion(&[3, 1, -1], 1).unwrap();
        let sol = solve_criterion_beta(&c).unwrap();
        let v = verify_criterion_orbit(&c, &sol.beta).unwrap();
        assert_eq!(v.pcf.orbit.len(), 4);
        assert_eq!((v.pcf.preperiod, v.pcf.period), (0, 8));
        let parry = build_parry_polynomial(&v.pcf.expansion).unwrap();
        assert_eq!(parry.degree(), 8);
        let beta = sol.beta.to_f64();
        assert!(parry.poly.eval_f64(beta).abs() < 1e-9);
        // the criterion polynomial divides the Parry polynomial here
        let q = c.polynomial();
        assert!(q.eval_f64(beta).abs() < 1e-10);
    }

    #[test]
    fn remainder_bound_worked_instance() {
        // R_1(3) = 1/3 - 1/9 = 2/9, positive and below 1
        let c = make_criterion(&[3, 1, -1], 1).unwrap();
        let report = check_remainder_bounds(&c, &rat(3, 1), 1).unwrap();
        assert!(report.magnitude_ok && report.sign_ok);
        assert_eq!(report.value, "2/9");
    }

    #[test]
    fn remainder_bound_last_index() {
        let c = make_criterion(&[3, 1, -1], 1).unwrap();
        let report = check_remainder_bounds(&c, &rat(7, 2), 2).unwrap();
        assert!(report.magnitude_ok);
        // single term: sign is s(3) = -1
        assert!(report.sign_ok);
        assert!(report.value.starts_with('-'));
    }

    #[test]
    fn remainder_bound_at_endpoint() {
        let c = make_criterion(&[3, 1, -1], 1).unwrap();
        let report = check_remainder_bounds(&c, &rat(4, 1), 1).unwrap();
        assert!(report.magnitude_ok && report.sign_ok);
    }

    #[test]
    fn round_trip_expansion_polynomial_root() {
        // expansion -> polynomial -> root in the witness interval -> expansion
        for (m_seq, _) in [([3i64, 1, -1], ()), ([4, 2, -2], ())] {
            let c = make_criterion(&m_seq, 1).unwrap();
            let sol = solve_criterion_beta(&c).unwrap();
            let v = verify_criterion_orbit(&c, &sol.beta).unwrap();
            let parry = build_parry_polynomial(&v.pcf.expansion).unwrap();
            let beta2 = beta_from_parry(&parry, &sol.beta).unwrap();
            let map2 = GBetaMap::new(beta2, c.signs.clone()).unwrap();
            let exp2 = infinite_expansion(&map2, 500).unwrap();
            assert_eq!(exp2, v.pcf.expansion);
        }
    }

    #[test]
    fn parry_json_round_trip() {
        let parry = parry_from_map(&golden_map(), 100).unwrap();
        let json = serde_json::to_string(&parry).unwrap();
        let back: ParryPolynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(parry, back);
    }
}
