//! Power series with coefficients in `[-1, 1]` and the boundary curve of
//! their zero set.
//!
//! The class of interest is `T(w) = 1 + sum_{j>=1} a_j w^j` with every
//! `a_j` in `[-1, 1]`. Every zero of every member has modulus at least 1/2,
//! and for each argument `phi` in `(0, pi)` the minimal zero modulus
//! `lambda_phi` is attained by a function whose coefficients are `+-1`
//! following the rotation sequence `a_n = sign(sin(n phi - alpha))` for some
//! phase `alpha`. The solver scans an `alpha` grid, Newton-polishes the zero
//! of each candidate polynomial near the ray, and bisects in `alpha` on the
//! angular offset of that zero until it lands on the ray.

use num_complex::Complex64;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::Result;

/// A truncated member of the restricted-coefficient class: coefficients
/// `a_1..a_N`, each in `[-1, 1]`, with `a_0 = 1` implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct FPowerSeries {
    coeffs: Vec<f64>,
}

impl FPowerSeries {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        for (j, a) in coeffs.iter().enumerate() {
            if !a.is_finite() || a.abs() > 1.0 + 1e-9 {
                return Err(Error::InvalidInput(format!(
                    "coefficient a_{} = {a} outside [-1, 1]",
                    j + 1
                )));
            }
        }
        let coeffs = coeffs.iter().map(|a| a.clamp(-1.0, 1.0)).collect();
        Ok(FPowerSeries { coeffs })
    }

    /// The series with every coefficient equal to -1 (zero at w = 1/2).
    pub fn all_minus_one(n: usize) -> Self {
        FPowerSeries {
            coeffs: vec![-1.0; n],
        }
    }

    /// Alternating `a_j = (-1)^(j+1)` (zero at w = -1/2).
    pub fn alternating(n: usize) -> Self {
        FPowerSeries {
            coeffs: (0..n).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect(),
        }
    }

    pub fn from_signs(signs: &[i8]) -> Self {
        FPowerSeries {
            coeffs: signs.iter().map(|&s| s as f64).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Polynomial coefficients `1, a_1, ..., a_N` ascending.
    pub fn poly_coeffs(&self) -> Vec<f64> {
        let mut cs = Vec::with_capacity(self.coeffs.len() + 1);
        cs.push(1.0);
        cs.extend_from_slice(&self.coeffs);
        cs
    }

    /// Horner evaluation of the truncation (no domain restriction).
    pub fn eval(&self, w: Complex64) -> Complex64 {
        let mut acc = Complex64::zero();
        for a in self.coeffs.iter().rev() {
            acc = (acc + a) * w;
        }
        acc + 1.0
    }

    fn eval_with_derivative(&self, w: Complex64) -> (Complex64, Complex64) {
        let cs = self.poly_coeffs();
        let n = cs.len() - 1;
        let mut b = Complex64::new(cs[n], 0.0);
        let mut d = Complex64::zero();
        for k in (0..n).rev() {
            d = d * w + b;
            b = b * w + cs[k];
        }
        (b, d)
    }

    /// New member `T(w/a)` with coefficients `a_j / a^j`, for `a > 1`.
    pub fn rescale(&self, a: f64) -> Result<Self> {
        if a <= 1.0 {
            return Err(Error::InvalidInput("rescale factor must exceed 1".into()));
        }
        let mut scale = 1.0;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                scale /= a;
                c * scale
            })
            .collect();
        FPowerSeries::new(coeffs)
    }

    /// All zeros of the truncation, at hardware precision.
    pub fn zeros(&self) -> Result<Vec<Complex64>> {
        crate::roots::all_roots_f64(&self.poly_coeffs(), 600)
    }
}

/// Evaluation inside the open unit disk with a certified tail radius.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DiskEvaluation {
    pub value: (f64, f64),
    /// `|w|^(N+1) / (1 - |w|)`, bounding the dropped tail.
    pub tail_bound: f64,
}

/// Evaluates a truncated member at `|w| < 1`, reporting the tail bound.
pub fn evaluate(series: &FPowerSeries, w: Complex64) -> Result<DiskEvaluation> {
    let r = w.norm();
    if r >= 1.0 {
        return Err(Error::OutsideDisk);
    }
    let v = series.eval(w);
    let tail_bound = r.powi(series.order() as i32 + 1) / (1.0 - r);
    Ok(DiskEvaluation {
        value: (v.re, v.im),
        tail_bound,
    })
}

/// Exact partial sum of the two endpoint series at their zero:
/// `1 + sum_{j<=n} a_j lambda^j` as a rational, which equals `2^-n` for both
/// the all-(-1) series at 1/2 and the alternating series at -1/2.
pub fn endpoint_partial_sum(alternating: bool, n: usize) -> BigRational {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let neg_half = -&half;
    let mut sum = BigRational::one();
    let mut pow = BigRational::one();
    for j in 1..=n {
        let a = if alternating {
            if j % 2 == 1 {
                BigRational::one()
            } else {
                -BigRational::one()
            }
        } else {
            -BigRational::one()
        };
        pow *= if alternating { &neg_half } else { &half };
        sum += a * &pow;
    }
    sum
}

/// Report from the zero lower-bound check.
#[derive(Debug, Clone, Serialize)]
pub struct ZeroBoundReport {
    pub modulus: f64,
    pub eval_residual: f64,
    /// `|lambda| >= 1/2 - tol`.
    pub bound_ok: bool,
    /// Some coefficient satisfies `|a_j| < 1`, so the bound must be strict.
    pub strict_applicable: bool,
    pub strict_ok: bool,
}

/// Checks the zero lower bound at a claimed zero `lambda` of the series.
pub fn zero_lower_bound_check(
    series: &FPowerSeries,
    lambda: Complex64,
    tol: f64,
) -> Result<ZeroBoundReport> {
    let eval_residual = series.eval(lambda).norm();
    if eval_residual >= tol {
        return Err(Error::InvalidInput(format!(
            "|T(lambda)| = {eval_residual} is not below {tol}; not a zero"
        )));
    }
    let modulus = lambda.norm();
    let strict_applicable = series.coeffs().iter().any(|a| a.abs() < 1.0);
    Ok(ZeroBoundReport {
        modulus,
        eval_residual,
        bound_ok: modulus >= 0.5 - tol,
        strict_applicable,
        strict_ok: !strict_applicable || modulus > 0.5,
    })
}

/// Parameters of a rotation-sequence candidate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OptimalSeriesParams {
    pub phi: f64,
    pub alpha: f64,
    pub truncation: usize,
}

/// Rotation-sequence coefficients: `a_n = +1` when `n phi - alpha` lies in
/// `(0, pi)` mod 2pi and `-1` when it lies in `(-pi, 0)`. Exact landings on
/// the boundary take `+1` and are reported (they occur only at rational
/// angle ratios, where optimal functions are expected not to be unique).
pub fn rotation_coefficients(phi: f64, alpha: f64, n: usize) -> (Vec<i8>, Vec<usize>) {
    let two_pi = 2.0 * std::f64::consts::PI;
    let pi = std::f64::consts::PI;
    let mut signs = Vec::with_capacity(n);
    let mut boundary_hits = Vec::new();
    for k in 1..=n {
        let angle = (k as f64 * phi - alpha).rem_euclid(two_pi);
        if angle == 0.0 || angle == pi {
            boundary_hits.push(k);
            signs.push(1);
        } else if angle < pi {
            signs.push(1);
        } else {
            signs.push(-1);
        }
    }
    (signs, boundary_hits)
}

/// A solved point of the boundary curve.
#[derive(Debug, Clone, Serialize)]
pub struct LambdaSolution {
    pub phi: f64,
    pub lambda: f64,
    pub alpha: f64,
    /// `|T(lambda e^(i phi))|` for the final coefficient sequence.
    pub residual: f64,
    pub truncation: usize,
    /// The on-ray segment `(1/2, lambda)` was scanned for a smaller zero.
    pub minimality_scanned: bool,
    /// The coefficient allowed off the rotation sequence, when one was needed
    /// to land the zero exactly on the ray.
    pub anomalous: Option<AnomalousCoefficient>,
    /// Best pure rotation-sequence zero near the ray, reported alongside:
    /// `(radius, angular offset, alpha)`.
    pub rotation_candidate: Option<(f64, f64, f64)>,
}

/// The single coefficient relaxed into the interior of `[-1, 1]`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AnomalousCoefficient {
    pub index: usize,
    pub value: f64,
}

const ALPHA_GRID: usize = 64;
const THETA_TOL: f64 = 1e-9;

/// Newton iteration toward a zero of `series` from `start`, with damping.
fn newton_zero(series: &FPowerSeries, start: Complex64) -> Option<Complex64> {
    let mut w = start;
    for _ in 0..80 {
        let (f, d) = series.eval_with_derivative(w);
        if f.norm() < 1e-14 {
            return Some(w);
        }
        if d.norm() == 0.0 {
            return None;
        }
        let mut step = f / d;
        // damp until the residual decreases
        let mut next = w - step;
        let mut tries = 0;
        while series.eval(next).norm() > f.norm() && tries < 24 {
            step *= 0.5;
            next = w - step;
            tries += 1;
        }
        if (next - w).norm() < 1e-16 {
            w = next;
            break;
        }
        w = next;
    }
    let f = series.eval(w);
    if f.norm() < 1e-12 {
        Some(w)
    } else {
        None
    }
}

fn wrap_angle(mut theta: f64) -> f64 {
    while theta > std::f64::consts::PI {
        theta -= 2.0 * std::f64::consts::PI;
    }
    while theta < -std::f64::consts::PI {
        theta += 2.0 * std::f64::consts::PI;
    }
    theta
}

/// Locates the zero of the rotation-sequence polynomial for phase `alpha`
/// nearest the ray, returning `(radius, angular offset)`.
///
/// `|T|` is scanned along the ray for dips; each dip is Newton-polished and
/// only strictly upper-half-plane roots count, which excludes the real-axis
/// zeros (the endpoint series have those) and conjugate partners.
fn ray_probe(phi: f64, alpha: f64, n: usize) -> Option<(f64, f64)> {
    let (signs, _) = rotation_coefficients(phi, alpha, n);
    let series = FPowerSeries::from_signs(&signs);
    let step = 2e-3;
    let mut dips: Vec<(f64, f64)> = Vec::new(); // (t, |T|)
    let mut prev2 = f64::INFINITY;
    let mut prev = f64::INFINITY;
    let mut t_prev = 0.0;
    let mut t = 0.45;
    while t < 0.985 {
        let v = series.eval(Complex64::from_polar(t, phi)).norm();
        if prev < prev2 && prev <= v && prev < 1.2 {
            dips.push((t_prev, prev));
        }
        prev2 = prev;
        prev = v;
        t_prev = t;
        t += step;
    }
    dips.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    dips.truncate(8);

    let mut best: Option<(f64, f64)> = None;
    for &(t0, _) in &dips {
        let Some(w) = newton_zero(&series, Complex64::from_polar(t0, phi)) else {
            continue;
        };
        if w.im <= 1e-12 {
            continue;
        }
        let r = w.norm();
        if !(0.45..0.99).contains(&r) {
            continue;
        }
        let theta = wrap_angle(w.arg() - phi);
        if theta.abs() > 0.45 {
            continue;
        }
        if best.is_none_or(|(_, bt)| theta.abs() < bt.abs()) {
            best = Some((r, theta));
        }
    }
    best
}

/// Solves for `lambda_phi`: the smallest on-ray zero modulus over rotation
/// sequences, by an `alpha` multi-start grid with angular bisection.
///
/// `warm` optionally injects extra starting phases (used when tracing a
/// curve, where the neighbor's solution is a good guess).
pub fn solve_lambda_phi(phi: f64, truncation: usize, tol: f64) -> Result<LambdaSolution> {
    solve_lambda_phi_warm(phi, truncation, tol, &[])
}

/// Horner evaluation of `1 + sum c_j w^j` together with the derivative.
fn eval_raw(coeffs: &[f64], w: Complex64) -> (Complex64, Complex64) {
    let n = coeffs.len();
    let mut b = Complex64::new(coeffs[n - 1], 0.0);
    let mut d = Complex64::zero();
    for k in (0..n - 1).rev() {
        d = d * w + b;
        b = b * w + coeffs[k];
    }
    // account for the implicit constant term 1
    d = d * w + b;
    b = b * w + 1.0;
    (b, d)
}

/// Two-unknown Newton for an on-ray zero: solve `T(r e^(i phi)) = 0` in the
/// radius `r` and the single free coefficient `a_j`, all others frozen.
fn anomalous_newton(
    phi: f64,
    base: &[i8],
    j: usize,
    r0: f64,
    a0: f64,
) -> Option<(f64, f64)> {
    let mut coeffs: Vec<f64> = base.iter().map(|&s| s as f64).collect();
    let mut r = r0;
    let mut a = a0;
    for _ in 0..120 {
        coeffs[j - 1] = a;
        let w = Complex64::from_polar(r, phi);
        let (f, d) = eval_raw(&coeffs, w);
        if f.norm() < 1e-13 {
            break;
        }
        let dfdr = d * Complex64::from_polar(1.0, phi);
        let dfda = w.powu(j as u32);
        let det = dfdr.re * dfda.im - dfdr.im * dfda.re;
        if det.abs() < 1e-18 {
            return None;
        }
        let dr = (f.re * dfda.im - f.im * dfda.re) / det;
        let da = (dfdr.re * f.im - dfdr.im * f.re) / det;
        r -= dr;
        a -= da;
        if !(0.4..1.0).contains(&r) || !a.is_finite() || a.abs() > 1.6 {
            return None;
        }
    }
    if a.abs() > 1.0 + 1e-9 {
        return None;
    }
    let a = a.clamp(-1.0, 1.0);
    coeffs[j - 1] = a;
    let (f, _) = eval_raw(&coeffs, Complex64::from_polar(r, phi));
    if f.norm() < 1e-12 && (0.5..0.99).contains(&r) {
        Some((r, a))
    } else {
        None
    }
}

pub fn solve_lambda_phi_warm(
    phi: f64,
    truncation: usize,
    tol: f64,
    warm: &[(f64, f64)],
) -> Result<LambdaSolution> {
    let pi = std::f64::consts::PI;
    if !(0.0..pi).contains(&phi) || phi == 0.0 {
        return Err(Error::InvalidInput(format!(
            "phi = {phi} must lie strictly inside (0, pi)"
        )));
    }
    let n = truncation;

    #[derive(Clone, Copy)]
    struct Probe {
        alpha: f64,
        r: f64,
        theta: f64,
    }

    struct Candidate {
        r: f64,
        alpha: f64,
        coeffs: Vec<f64>,
        anomalous: Option<AnomalousCoefficient>,
    }

    let probe_at = |alpha: f64| -> Option<Probe> {
        ray_probe(phi, alpha, n).map(|(r, theta)| Probe { alpha, r, theta })
    };
    // ray side of the tracked branch: +1 / -1 by angular offset, 0 if absent
    let side_of = |p: &Option<Probe>| -> i8 {
        match p {
            None => 0,
            Some(q) => {
                if q.theta >= 0.0 {
                    1
                } else {
                    -1
                }
            }
        }
    };
    let flip_indices = |alo: f64, ahi: f64| -> Vec<usize> {
        let (slo, _) = rotation_coefficients(phi, alo, n);
        let (shi, _) = rotation_coefficients(phi, ahi, n);
        (0..n).filter(|&i| slo[i] != shi[i]).map(|i| i + 1).collect()
    };

    let mut candidates: Vec<Candidate> = Vec::new();
    let mut rotation_candidate: Option<(f64, f64, f64)> = None;

    let sweep = |grid_len: usize, candidates: &mut Vec<Candidate>,
                     rotation_candidate: &mut Option<(f64, f64, f64)>| {
        let mut alphas: Vec<f64> = (0..grid_len)
            .map(|i| pi * (i as f64 + 0.5) / grid_len as f64)
            .collect();
        for &(alpha, _) in warm {
            if alpha > 0.0 && alpha < pi {
                alphas.push(alpha);
            }
        }
        alphas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let probes: Vec<Option<Probe>> = alphas.iter().map(|&a| probe_at(a)).collect();

        for p in probes.iter().flatten() {
            if rotation_candidate.is_none_or(|(_, t, _)| p.theta.abs() < t.abs()) {
                *rotation_candidate = Some((p.r, p.theta, p.alpha));
            }
            if p.theta.abs() < THETA_TOL {
                let (signs, _) = rotation_coefficients(phi, p.alpha, n);
                candidates.push(Candidate {
                    r: p.r,
                    alpha: p.alpha,
                    coeffs: signs.iter().map(|&s| s as f64).collect(),
                    anomalous: None,
                });
            }
        }

        for i in 0..probes.len().saturating_sub(1) {
            let (plo, phi_probe) = (&probes[i], &probes[i + 1]);
            let lo_tag = side_of(plo);
            let hi_tag = side_of(phi_probe);
            if lo_tag == hi_tag {
                continue;
            }
            // require a branch reasonably near the ray on at least one side
            let near = |p: &Option<Probe>| p.is_some_and(|q| q.theta.abs() < 0.3);
            if !near(plo) && !near(phi_probe) {
                continue;
            }
            let mut alo = alphas[i];
            let mut ahi = alphas[i + 1];
            let mut last_probe = if near(plo) { *plo } else { *phi_probe };
            // bisect until the cell contains a single coefficient flip
            for _ in 0..80 {
                let flips = flip_indices(alo, ahi);
                if flips.len() <= 1 {
                    break;
                }
                let mid = 0.5 * (alo + ahi);
                let pm = probe_at(mid);
                if pm.is_some() && pm.unwrap().theta.abs() < 0.3 {
                    last_probe = pm;
                }
                if side_of(&pm) == lo_tag {
                    alo = mid;
                } else {
                    ahi = mid;
                }
                if (ahi - alo).abs() < 1e-14 {
                    break;
                }
            }
            let flips = flip_indices(alo, ahi);
            let Some(&j) = flips.first() else {
                continue;
            };
            let (base, _) = rotation_coefficients(phi, alo, n);
            let start = last_probe.or(*plo).or(*phi_probe);
            let (r0, _) = start.map_or((0.66, 0.0), |p| (p.r, p.theta));
            let a0 = base[j - 1] as f64;
            if let Some((r, a)) = anomalous_newton(phi, &base, j, r0, a0) {
                let mut coeffs: Vec<f64> = base.iter().map(|&s| s as f64).collect();
                coeffs[j - 1] = a;
                candidates.push(Candidate {
                    r,
                    alpha: 0.5 * (alo + ahi),
                    coeffs,
                    anomalous: Some(AnomalousCoefficient { index: j, value: a }),
                });
            }
        }
    };

    sweep(ALPHA_GRID, &mut candidates, &mut rotation_candidate);
    if candidates.is_empty() {
        sweep(4 * ALPHA_GRID, &mut candidates, &mut rotation_candidate);
    }
    if candidates.is_empty() {
        return Err(Error::NoRoot(format!(
            "phi = {phi}: no on-ray zero from {ALPHA_GRID} alpha starts at truncation {n}"
        )));
    }
    candidates.sort_by(|a, b| a.r.partial_cmp(&b.r).unwrap());
    let mut best = candidates.remove(0);

    // minimality scan along the ray segment (1/2, lambda) with the final
    // coefficients: the definition takes a minimum, Newton only finds a zero
    let series = FPowerSeries::new(best.coeffs.clone())?;
    let mut t = 0.501;
    while t < best.r - 1e-3 {
        let v = series.eval(Complex64::from_polar(t, phi)).norm();
        if v < 0.05 {
            if let Some(w) = newton_zero(&series, Complex64::from_polar(t, phi)) {
                let r = w.norm();
                let theta = wrap_angle(w.arg() - phi);
                if theta.abs() < THETA_TOL && r > 0.5 && r < best.r - 1e-9 {
                    best.r = r;
                }
            }
        }
        t += 1e-3;
    }

    let residual = series
        .eval(Complex64::from_polar(best.r, phi))
        .norm();
    if residual > tol {
        return Err(Error::NoRoot(format!(
            "phi = {phi}: best candidate residual {residual} exceeds {tol}"
        )));
    }
    if !(0.5..1.0).contains(&best.r) {
        return Err(Error::NoRoot(format!(
            "phi = {phi}: lambda = {} escaped (1/2, 1)",
            best.r
        )));
    }
    Ok(LambdaSolution {
        phi,
        lambda: best.r,
        alpha: best.alpha,
        residual,
        truncation: n,
        minimality_scanned: true,
        anomalous: best.anomalous,
        rotation_candidate,
    })
}


/// One-coefficient relaxation pass: allows a single `a_k` to move inside
/// `[-1, 1]` and re-solves for an on-ray zero by a 2-unknown Newton in
/// `(r, a_k)`. Returns the improved solution when one exists.
#[derive(Debug, Clone, Serialize)]
pub struct RelaxedSolution {
    pub index: usize,
    pub coefficient: f64,
    pub lambda: f64,
    pub residual: f64,
}

pub fn relax_one_coefficient(
    base: &LambdaSolution,
    max_index: usize,
) -> Option<RelaxedSolution> {
    let (signs, _) = rotation_coefficients(base.phi, base.alpha, base.truncation);
    let mut best: Option<RelaxedSolution> = None;
    for k in 1..=max_index.min(base.truncation) {
        let mut coeffs: Vec<f64> = signs.iter().map(|&s| s as f64).collect();
        let mut r = base.lambda;
        let mut a = coeffs[k - 1];
        let mut ok = false;
        for _ in 0..60 {
            coeffs[k - 1] = a;
            let series = match FPowerSeries::new(coeffs.clone()) {
                Ok(s) => s,
                Err(_) => break,
            };
            let w = Complex64::from_polar(r, base.phi);
            let (f, d) = series.eval_with_derivative(w);
            if f.norm() < 1e-13 {
                ok = true;
                break;
            }
            // columns of the real 2x2 Jacobian: dF/dr and dF/da_k
            let dfdr = d * Complex64::from_polar(1.0, base.phi);
            let dfda = w.powu(k as u32);
            let det = dfdr.re * dfda.im - dfdr.im * dfda.re;
            if det.abs() < 1e-18 {
                break;
            }
            let dr = (f.re * dfda.im - f.im * dfda.re) / det;
            let da = (dfdr.re * f.im - dfdr.im * f.re) / det;
            r -= dr;
            a -= da;
            if !(0.4..1.0).contains(&r) || !a.is_finite() || a.abs() > 1.0 {
                break;
            }
        }
        if ok && r < base.lambda - 1e-12 && a.abs() <= 1.0 && r > 0.5 {
            let better = match &best {
                Some(b) => r < b.lambda,
                None => true,
            };
            if better {
                best = Some(RelaxedSolution {
                    index: k,
                    coefficient: a,
                    lambda: r,
                    residual: {
                        coeffs[k - 1] = a;
                        FPowerSeries::new(coeffs.clone())
                            .map(|s| s.eval(Complex64::from_polar(r, base.phi)).norm())
                            .unwrap_or(f64::INFINITY)
                    },
                });
            }
        }
    }
    best
}

/// The sampled boundary curve.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryCurve {
    pub samples: Vec<LambdaSolution>,
    pub failures: Vec<(f64, String)>,
    /// Largest `|delta lambda| / delta phi` between adjacent samples (logged,
    /// not asserted: continuity has no stated modulus).
    pub max_slope: f64,
}

impl BoundaryCurve {
    pub fn min_lambda(&self) -> f64 {
        self.samples.iter().map(|s| s.lambda).fold(f64::INFINITY, f64::min)
    }

    pub fn max_lambda(&self) -> f64 {
        self.samples.iter().map(|s| s.lambda).fold(0.0, f64::max)
    }

    pub fn sup_inverse_lambda(&self) -> f64 {
        1.0 / self.min_lambda()
    }

    /// Linear interpolation of `lambda` at an argument, clamped to the grid.
    pub fn lambda_at(&self, phi: f64) -> Option<f64> {
        if self.samples.is_empty() {
            return None;
        }
        let first = self.samples.first().unwrap();
        let last = self.samples.last().unwrap();
        if phi <= first.phi {
            return Some(first.lambda);
        }
        if phi >= last.phi {
            return Some(last.lambda);
        }
        let idx = self.samples.partition_point(|s| s.phi < phi);
        let a = &self.samples[idx - 1];
        let b = &self.samples[idx];
        let t = (phi - a.phi) / (b.phi - a.phi);
        Some(a.lambda * (1.0 - t) + b.lambda * t)
    }

    /// CSV rows `phi,lambda,alpha,residual,n_trunc`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("phi,lambda,alpha,residual,n_trunc\n");
        for s in &self.samples {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt_f64(s.phi),
                fmt_f64(s.lambda),
                fmt_f64(s.alpha),
                fmt_f64(s.residual),
                s.truncation
            ));
        }
        out
    }

    /// Polar SVG of `1/lambda_phi` against the radius-2 and radius-1.59
    /// reference circles.
    pub fn to_svg(&self) -> String {
        let scale = 120.0;
        let cx = 300.0;
        let cy = 300.0;
        let mut svg = String::new();
        svg.push_str(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" \
             viewBox=\"0 0 600 600\">\n",
        );
        svg.push_str("<rect width=\"600\" height=\"600\" fill=\"white\"/>\n");
        for (radius, color) in [(2.0, "#d62728"), (1.59, "#ff9896"), (1.0, "#cccccc")] {
            svg.push_str(&format!(
                "<circle cx=\"{cx}\" cy=\"{cy}\" r=\"{}\" fill=\"none\" stroke=\"{color}\" \
                 stroke-width=\"1\"/>\n",
                fmt_f64(radius * scale)
            ));
        }
        let mut path = String::new();
        for (i, s) in self.samples.iter().enumerate() {
            let r = scale / s.lambda;
            let x = cx + r * s.phi.cos();
            let y = cy - r * s.phi.sin();
            path.push_str(if i == 0 { "M" } else { " L" });
            path.push_str(&format!("{} {}", fmt_f64(x), fmt_f64(y)));
        }
        // mirror into the lower half-plane by conjugation symmetry
        for s in self.samples.iter().rev() {
            let r = scale / s.lambda;
            let x = cx + r * s.phi.cos();
            let y = cy + r * s.phi.sin();
            path.push_str(&format!(" L{} {}", fmt_f64(x), fmt_f64(y)));
        }
        svg.push_str(&format!(
            "<path d=\"{path}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n"
        ));
        svg.push_str("</svg>\n");
        svg
    }
}

/// Deterministic float formatting: 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Traces the boundary curve over a sorted interior grid. Work is chunked;
/// within a chunk each solve warm-starts from its neighbor, chunks run in
/// parallel, and the chunk partition is fixed, so output is deterministic.
pub fn boundary_curve(grid: &[f64], truncation: usize, tol: f64) -> BoundaryCurve {
    let chunk_size = 8;
    let chunks: Vec<&[f64]> = grid.chunks(chunk_size).collect();
    let solved: Vec<Vec<(f64, std::result::Result<LambdaSolution, String>)>> = chunks
        .par_iter()
        .map(|chunk| {
            let mut out = Vec::with_capacity(chunk.len());
            let mut warm: Vec<(f64, f64)> = Vec::new();
            for &phi in *chunk {
                let attempt = solve_lambda_phi_warm(phi, truncation, tol, &warm)
                    .map_err(|e| e.to_string());
                if let Ok(sol) = &attempt {
                    warm = vec![(sol.alpha, sol.lambda)];
                }
                out.push((phi, attempt));
            }
            out
        })
        .collect();

    let mut samples = Vec::with_capacity(grid.len());
    let mut failures = Vec::new();
    for chunk in solved {
        for (phi, res) in chunk {
            match res {
                Ok(sol) => samples.push(sol),
                Err(msg) => failures.push((phi, msg)),
            }
        }
    }
    let mut max_slope = 0.0f64;
    for pair in samples.windows(2) {
        let dphi = pair[1].phi - pair[0].phi;
        if dphi > 0.0 {
            max_slope = max_slope.max((pair[1].lambda - pair[0].lambda).abs() / dphi);
        }
    }
    BoundaryCurve {
        samples,
        failures,
        max_slope,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_coefficients_quarter_turn() {
        // angles pi/4, 3pi/4, 5pi/4, 7pi/4
        let (signs, hits) =
            rotation_coefficients(std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_4, 4);
        assert_eq!(signs, vec![1, 1, -1, -1]);
        assert!(hits.is_empty());
    }

    #[test]
    fn rotation_first_coefficient_negative_for_large_alpha() {
        let (signs, _) = rotation_coefficients(0.1, std::f64::consts::PI - 1e-3, 1);
        assert_eq!(signs[0], -1);
    }

    #[test]
    fn rotation_boundary_landing_logged() {
        // phi = pi/2, alpha = pi/2: n = 1 lands exactly on 0
        let (signs, hits) =
            rotation_coefficients(std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2, 2);
        assert_eq!(hits, vec![1]);
        assert_eq!(signs[0], 1);
    }

    #[test]
    fn evaluate_all_minus_one_at_half() {
        let t = FPowerSeries::all_minus_one(200);
        let e = evaluate(&t, Complex64::new(0.5, 0.0)).unwrap();
        let v = Complex64::new(e.value.0, e.value.1);
        assert!(v.norm() <= e.tail_bound + 1e-15);
    }

    #[test]
    fn evaluate_at_zero_is_one() {
        let t = FPowerSeries::all_minus_one(10);
        let e = evaluate(&t, Complex64::zero()).unwrap();
        assert_eq!(e.value, (1.0, 0.0));
    }

    #[test]
    fn evaluate_alternating_at_minus_half() {
        let t = FPowerSeries::alternating(200);
        let e = evaluate(&t, Complex64::new(-0.5, 0.0)).unwrap();
        let v = Complex64::new(e.value.0, e.value.1);
        assert!(v.norm() <= e.tail_bound + 1e-15);
    }

    #[test]
    fn evaluate_rejects_outside_disk() {
        let t = FPowerSeries::all_minus_one(10);
        assert!(matches!(
            evaluate(&t, Complex64::new(1.0, 0.0)),
            Err(Error::OutsideDisk)
        ));
    }

    #[test]
    fn endpoint_partial_sums_are_exact_powers_of_two() {
        for n in [1usize, 5, 30, 100] {
            let expect = BigRational::new(BigInt::one(), BigInt::from(2).pow(n as u32));
            assert_eq!(endpoint_partial_sum(false, n), expect);
            assert_eq!(endpoint_partial_sum(true, n), expect);
        }
    }

    #[test]
    fn zero_bound_sharp_case() {
        let t = FPowerSeries::all_minus_one(400);
        let report = zero_lower_bound_check(&t, Complex64::new(0.5, 0.0), 1e-6).unwrap();
        assert!(report.bound_ok);
        assert!(!report.strict_applicable);
        assert!((report.modulus - 0.5).abs() < 1e-15);
    }

    #[test]
    fn lambda_near_pi_matches_reported_limit() {
        // the limit of lambda as phi -> pi is approximately 0.6491
        let sol = solve_lambda_phi(std::f64::consts::PI - 0.05, 400, 1e-8).unwrap();
        assert!(
            (sol.lambda - 0.6491).abs() < 0.015,
            "lambda = {}",
            sol.lambda
        );
        assert!(sol.residual < 1e-8);
    }

    #[test]
    fn lambda_near_zero_stays_above_limit_band() {
        let sol = solve_lambda_phi(0.05, 400, 1e-8).unwrap();
        assert!(sol.lambda > 0.62, "lambda = {}", sol.lambda);
    }

    #[test]
    fn lambda_interior_band() {
        for phi in [0.5, 1.2, 2.0, 2.8] {
            let sol = solve_lambda_phi(phi, 300, 1e-8).unwrap();
            assert!(
                sol.lambda > 0.60 && sol.lambda < 0.75,
                "phi={phi}: lambda={}",
                sol.lambda
            );
        }
    }

    #[test]
    fn curve_traces_and_interpolates() {
        let grid: Vec<f64> = (1..=9).map(|i| 0.3 + 0.3 * i as f64).collect();
        let curve = boundary_curve(&grid, 200, 1e-7);
        assert!(curve.failures.is_empty(), "failures: {:?}", curve.failures);
        assert_eq!(curve.samples.len(), 9);
        assert!(curve.sup_inverse_lambda() < 2.0);
        let mid = curve.lambda_at(1.0).unwrap();
        assert!(mid > 0.6 && mid < 0.75);
        let csv = curve.to_csv();
        assert!(csv.starts_with("phi,lambda,alpha,residual,n_trunc\n"));
        assert_eq!(csv.lines().count(), 10);
    }

    #[test]
    fn truncation_robustness() {
        let a = solve_lambda_phi(2.0, 200, 1e-8).unwrap();
        let b = solve_lambda_phi(2.0, 400, 1e-8).unwrap();
        assert!((a.lambda - b.lambda).abs() < 1e-10);
    }

    #[test]
    fn rescale_keeps_class_membership() {
        let t = FPowerSeries::all_minus_one(50);
        let r = t.rescale(1.2).unwrap();
        assert!(r.coeffs().iter().all(|a| a.abs() <= 1.0));
        // zero moves from 1/2 to 0.6
        let v = r.eval(Complex64::new(0.6, 0.0));
        assert!(v.norm() < 1e-10 + 0.6f64.powi(51) * 10.0);
    }
}
