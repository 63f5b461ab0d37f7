//! Simultaneous complex root finding for integer polynomials.
//!
//! Aberth-Ehrlich iteration from a perturbed-circle initialization (radius
//! from the Cauchy bound, deterministic angle offset). The default working
//! precision is 128 bits of dyadic arithmetic; on failure to certify, the
//! finder retries at doubled precision up to two times. Precisions at or
//! below 53 bits run on hardware floats, which is what large property-test
//! sweeps use.
//!
//! Every returned root carries an a-posteriori certificate
//! `|p(z)| <= eps * sum_j |a_j| |z|^j` with `eps = 2^-(precision/2)`.

use num_complex::Complex64;
use num_traits::Zero;

use crate::dyadic::{ComplexPoint, Dyadic, DEFAULT_PRECISION};
use crate::error::Error;
use crate::poly::{bigint_to_f64, IntPolynomial};
use crate::Result;

/// Configuration for [`RootFinder::all_roots`].
#[derive(Debug, Clone)]
pub struct RootFinder {
    /// Working precision in bits of mantissa.
    pub precision_bits: u32,
    /// Iteration cap per attempt.
    pub max_iterations: u32,
    /// Number of doubled-precision retries after a failed certificate.
    pub retries: u32,
}

impl Default for RootFinder {
    fn default() -> Self {
        RootFinder {
            precision_bits: DEFAULT_PRECISION,
            max_iterations: 400,
            retries: 2,
        }
    }
}

impl RootFinder {
    pub fn with_precision(bits: u32) -> Self {
        RootFinder {
            precision_bits: bits,
            ..Self::default()
        }
    }

    /// All `deg(p)` complex roots, with multiplicity, sorted by
    /// (real, imaginary) part. See the module docs for the residual contract.
    pub fn all_roots(&self, p: &IntPolynomial) -> Result<Vec<ComplexPoint>> {
        if p.is_zero() || p.degree() < 1 {
            return Err(Error::InvalidInput("root finding needs degree >= 1".into()));
        }
        // factor out exact zero roots
        let mut coeffs = p.coeffs().to_vec();
        let mut zero_roots = 0usize;
        while coeffs[0].is_zero() {
            coeffs.remove(0);
            zero_roots += 1;
        }
        let reduced = IntPolynomial::new(coeffs);

        let mut bits = self.precision_bits;
        let mut last_err = None;
        for _ in 0..=self.retries {
            let attempt = if reduced.degree() == 0 {
                Ok(Vec::new())
            } else if bits <= 53 {
                aberth_f64(&reduced, self.max_iterations, bits)
            } else {
                aberth_dyadic(&reduced, self.max_iterations, bits)
            };
            match attempt {
                Ok(mut roots) => {
                    for _ in 0..zero_roots {
                        roots.push(ComplexPoint::zero(bits));
                    }
                    roots.sort_by(|a, b| a.re.cmp_value(&b.re).then(a.im.cmp_value(&b.im)));
                    return Ok(roots);
                }
                Err(e) => {
                    last_err = Some(e);
                    bits *= 2;
                }
            }
        }
        Err(last_err.unwrap())
    }
}

/// All roots of a polynomial given by f64 coefficients (ascending degree),
/// at hardware precision. Used by power-series zero sweeps where the
/// coefficients are not integers.
pub fn all_roots_f64(coeffs: &[f64], max_iterations: u32) -> Result<Vec<Complex64>> {
    let mut cs = coeffs.to_vec();
    while cs.last().is_some_and(|c| *c == 0.0) {
        cs.pop();
    }
    if cs.len() < 2 {
        return Err(Error::InvalidInput("root finding needs degree >= 1".into()));
    }
    let mut zero_roots = 0usize;
    while cs[0] == 0.0 {
        cs.remove(0);
        zero_roots += 1;
    }
    let mut roots = if cs.len() < 2 {
        Vec::new()
    } else {
        aberth_f64_kernel(&cs, max_iterations, 53)?
    };
    for _ in 0..zero_roots {
        roots.push(Complex64::zero());
    }
    roots.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    Ok(roots)
}

/// Perturbed-circle initial guesses from the Cauchy bound.
fn initial_guesses_f64(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].abs();
    let mut max_ratio: f64 = 0.0;
    for c in &coeffs[..n] {
        max_ratio = max_ratio.max(c.abs() / lead);
    }
    let radius = 1.0 + max_ratio;
    let offset = 0.4 / n as f64;
    (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + offset;
            Complex64::new(radius * theta.cos(), radius * theta.sin())
        })
        .collect()
}

fn initial_guesses(p: &IntPolynomial) -> Vec<Complex64> {
    let coeffs: Vec<f64> = p.coeffs().iter().map(bigint_to_f64).collect();
    initial_guesses_f64(&coeffs)
}

fn aberth_f64(p: &IntPolynomial, max_iterations: u32, bits: u32) -> Result<Vec<ComplexPoint>> {
    let coeffs: Vec<f64> = p.coeffs().iter().map(bigint_to_f64).collect();
    let roots = aberth_f64_kernel(&coeffs, max_iterations, bits)?;
    Ok(roots
        .into_iter()
        .map(|c| ComplexPoint::from_f64(c.re, c.im, bits))
        .collect())
}

fn aberth_f64_kernel(coeffs: &[f64], max_iterations: u32, bits: u32) -> Result<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    let mut z = initial_guesses_f64(coeffs);
    let eps = 2f64.powi(-((bits as i32) - 6).max(20));

    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut b = Complex64::new(coeffs[n], 0.0);
        let mut d = Complex64::zero();
        for k in (0..n).rev() {
            d = d * x + b;
            b = b * x + coeffs[k];
        }
        (b, d)
    };

    let mut converged = false;
    for _ in 0..max_iterations {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let (pv, dv) = eval(z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let dv = if dv.norm() == 0.0 {
                Complex64::new(f64::MIN_POSITIVE.sqrt(), 0.0)
            } else {
                dv
            };
            let newton = pv / dv;
            let mut sum = Complex64::zero();
            for j in 0..n {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 0.0 {
                        sum += 1.0 / diff;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * sum;
            let w = if denom.norm() == 0.0 {
                newton
            } else {
                newton / denom
            };
            if !w.re.is_finite() || !w.im.is_finite() {
                return Err(Error::NonConvergence {
                    iterations: max_iterations,
                    bits,
                });
            }
            z[i] -= w;
            max_step = max_step.max(w.norm() / z[i].norm().max(1.0));
        }
        if max_step < eps {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            iterations: max_iterations,
            bits,
        });
    }

    // residual certificate
    let cert = 2f64.powi(-(bits as i32) / 2);
    for &zi in &z {
        let (pv, _) = eval(zi);
        let mut scale = 0.0f64;
        let mut pow = 1.0;
        let r = zi.norm();
        for c in coeffs {
            scale += c.abs() * pow;
            pow *= r;
        }
        if pv.norm() > cert * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::NonConvergence {
                iterations: max_iterations,
                bits,
            });
        }
    }
    Ok(z)
}

fn aberth_dyadic(p: &IntPolynomial, max_iterations: u32, bits: u32) -> Result<Vec<ComplexPoint>> {
    let n = p.degree();
    let prec = bits;
    let coeffs: Vec<Dyadic> = p.coeffs().iter().map(Dyadic::from_bigint).collect();
    let mut z: Vec<ComplexPoint> = initial_guesses(p)
        .into_iter()
        .map(|c| ComplexPoint::from_f64(c.re, c.im, prec))
        .collect();
    let eps = Dyadic::exp2(-((prec as i64) - 8));
    let one = ComplexPoint::new(Dyadic::one(), Dyadic::zero(), prec);

    let eval = |x: &ComplexPoint| -> (ComplexPoint, ComplexPoint) {
        let mut b = ComplexPoint::new(coeffs[n].clone(), Dyadic::zero(), prec);
        let mut d = ComplexPoint::zero(prec);
        for k in (0..n).rev() {
            d = d.mul(x).add(&b);
            b = b
                .mul(x)
                .add(&ComplexPoint::new(coeffs[k].clone(), Dyadic::zero(), prec));
        }
        (b, d)
    };

    let mut converged = false;
    for _ in 0..max_iterations {
        let mut max_step = Dyadic::zero();
        for i in 0..n {
            let (pv, dv) = eval(&z[i]);
            if pv.is_zero() {
                continue;
            }
            let dv = if dv.is_zero() {
                ComplexPoint::new(Dyadic::exp2(-(prec as i64)), Dyadic::zero(), prec)
            } else {
                dv
            };
            let newton = pv.div(&dv);
            let mut sum = ComplexPoint::zero(prec);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    let diff = z[i].sub(zj);
                    if !diff.is_zero() {
                        sum = sum.add(&one.div(&diff));
                    }
                }
            }
            let denom = one.sub(&newton.mul(&sum));
            let w = if denom.is_zero() {
                newton
            } else {
                newton.div(&denom)
            };
            z[i] = z[i].sub(&w);
            let rel = {
                let zmag = z[i].modulus();
                let base = if zmag.cmp_value(&Dyadic::one()) == std::cmp::Ordering::Less {
                    Dyadic::one()
                } else {
                    zmag
                };
                w.modulus().div(&base, prec)
            };
            if rel.cmp_value(&max_step) == std::cmp::Ordering::Greater {
                max_step = rel;
            }
        }
        if max_step.cmp_value(&eps) == std::cmp::Ordering::Less {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            iterations: max_iterations,
            bits,
        });
    }

    let cert = Dyadic::exp2(-((prec / 2) as i64));
    for zi in &z {
        let (pv, _) = eval(zi);
        let r = zi.modulus();
        let mut scale = Dyadic::zero();
        let mut pow = Dyadic::one();
        for c in &coeffs {
            scale = scale.add(&c.abs().mul(&pow, prec), prec);
            pow = pow.mul(&r, prec);
        }
        if pv.modulus().cmp_value(&cert.mul(&scale, prec)) == std::cmp::Ordering::Greater {
            return Err(Error::NonConvergence {
                iterations: max_iterations,
                bits,
            });
        }
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn roots_f64(p: &IntPolynomial, finder: &RootFinder) -> Vec<Complex64> {
        finder
            .all_roots(p)
            .unwrap()
            .iter()
            .map(|z| z.to_c64())
            .collect()
    }

    #[test]
    fn quadratic_formula_oracle() {
        // z^2 - z - 1: roots (1 +- sqrt 5) / 2
        let p = IntPolynomial::from_i64(&[-1, -1, 1]);
        let roots = roots_f64(&p, &RootFinder::default());
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((roots[0].re - (1.0 - phi)).abs() < 1e-12 && roots[0].im.abs() < 1e-12);
        assert!((roots[1].re - phi).abs() < 1e-12 && roots[1].im.abs() < 1e-12);
    }

    #[test]
    fn linear_root() {
        let p = IntPolynomial::from_i64(&[-2, 1]);
        let roots = roots_f64(&p, &RootFinder::default());
        assert_eq!(roots.len(), 1);
        assert!((roots[0].re - 2.0).abs() < 1e-14 && roots[0].im.abs() < 1e-14);
    }

    #[test]
    fn quartic_roots_of_unity() {
        let p = IntPolynomial::from_i64(&[-1, 0, 0, 0, 1]);
        let roots = roots_f64(&p, &RootFinder::default());
        // sorted by (re, im): -1, -i, i, 1
        let expected = [(-1.0, 0.0), (0.0, -1.0), (0.0, 1.0), (1.0, 0.0)];
        for (r, (ere, eim)) in roots.iter().zip(expected) {
            assert!((r.re - ere).abs() < 1e-12 && (r.im - eim).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_roots_are_exact() {
        // z^3 - z^2 = z^2 (z - 1)
        let p = IntPolynomial::from_i64(&[0, 0, -1, 1]);
        let roots = RootFinder::default().all_roots(&p).unwrap();
        let zeros = roots.iter().filter(|z| z.is_zero()).count();
        assert_eq!(zeros, 2);
    }

    #[test]
    fn double_root_certified() {
        // (z - 1)^2 (z + 2)
        let sq = IntPolynomial::from_i64(&[-1, 1]);
        let p = sq.mul(&sq).mul(&IntPolynomial::from_i64(&[2, 1]));
        let roots = roots_f64(&p, &RootFinder::default());
        let near_one = roots
            .iter()
            .filter(|r| (*r - Complex64::new(1.0, 0.0)).norm() < 1e-6)
            .count();
        assert_eq!(near_one, 2);
    }

    #[test]
    fn f64_fast_path_matches_dyadic() {
        let p = IntPolynomial::from_i64(&[3, -2, 0, 1, 5]);
        let hi = roots_f64(&p, &RootFinder::default());
        let lo = roots_f64(&p, &RootFinder::with_precision(53));
        for (a, b) in hi.iter().zip(&lo) {
            assert!((a - b).norm() < 1e-9);
        }
    }

    /// Expands `lead * prod (z - r_i)` and compares against the input coefficients.
    fn reconstruct_and_compare(p: &IntPolynomial, roots: &[Complex64], tol: f64) {
        let mut prod = vec![Complex64::new(1.0, 0.0)];
        for r in roots {
            let mut next = vec![Complex64::zero(); prod.len() + 1];
            for (i, c) in prod.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            prod = next;
        }
        let lead = bigint_to_f64(p.leading());
        let scale: f64 = p
            .coeffs()
            .iter()
            .map(|c| bigint_to_f64(c).abs())
            .fold(1.0, f64::max);
        for (i, c) in p.coeffs().iter().enumerate() {
            let rec = prod[i] * lead;
            assert!(
                (rec.re - bigint_to_f64(c)).abs() < tol * scale && rec.im.abs() < tol * scale,
                "coefficient {i}: {} vs {}",
                rec.re,
                c
            );
        }
    }

    #[test]
    fn reconstruction_golden() {
        let p = IntPolynomial::from_i64(&[-1, -1, 1]);
        let roots = roots_f64(&p, &RootFinder::default());
        reconstruct_and_compare(&p, &roots, 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn reconstruction_random_polys(
            coeffs in proptest::collection::vec(-9i64..=9, 2..=8),
            lead in prop_oneof![1i64..=9, -9i64..=-1],
        ) {
            let mut cs = coeffs;
            cs.push(lead);
            let p = IntPolynomial::from_i64(&cs);
            let roots = RootFinder::default().all_roots(&p).unwrap();
            let c64: Vec<Complex64> = roots.iter().map(|z| z.to_c64()).collect();
            reconstruct_and_compare(&p, &c64, 1e-10);
        }
    }
}
