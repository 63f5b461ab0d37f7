//! Named verification suites: desk-scale runs of the identity, bound, and
//! criterion checks, with deterministic plain-text reports.
//!
//! Every suite is a pure function of its fixed seeds and corpus sizes, and
//! all numbers are printed with fixed formatting, so repeated runs render
//! byte-identical reports.

use num_complex::Complex64;

use crate::boundary::{
    boundary_curve, endpoint_partial_sum, fmt_f64, FPowerSeries,
};
use crate::map::{is_admissible, to_itinerary, GBetaMap, PcfOutcome, SignConfiguration};
use crate::parry::{
    build_parry_polynomial, check_remainder_bounds, make_criterion, solve_criterion_beta,
    verify_criterion_orbit, verify_zero_equivalence, OrbitSeries,
};
use crate::rng::SplitMix64;
use crate::roots::{all_roots_f64, RootFinder};
use crate::spectra::{
    check_bounds, envelope_check, generate_sources, random_criterion_values, realize_source,
    scan_omega, star_convexity_witness, ScanConfig, ScanMode, ScanSource,
};
use crate::{AlgebraicReal, QBetaElement, Result};

/// Which suite to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteKind {
    Identities,
    Bounds,
    Criterion,
    All,
}

impl SuiteKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "identities" => Some(SuiteKind::Identities),
            "bounds" => Some(SuiteKind::Bounds),
            "criterion" => Some(SuiteKind::Criterion),
            "all" => Some(SuiteKind::All),
            _ => None,
        }
    }
}

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// A rendered suite: checks in a fixed order.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: String,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = format!("suite {}\n", self.name);
        for c in &self.checks {
            out.push_str(&format!(
                "  {} {}: {}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            ));
        }
        let ok = self.checks.iter().filter(|c| c.passed).count();
        out.push_str(&format!(
            "result {}: {} ({ok}/{} checks)\n",
            self.name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks.len()
        ));
        out
    }
}

fn check<F: FnOnce() -> Result<String>>(name: &str, f: F) -> CheckResult {
    match f() {
        Ok(detail) => CheckResult {
            name: name.to_string(),
            passed: true,
            detail,
        },
        Err(e) => CheckResult {
            name: name.to_string(),
            passed: false,
            detail: e.to_string(),
        },
    }
}

fn fail(msg: String) -> crate::Error {
    crate::Error::VerificationFailure {
        index: 0,
        detail: msg,
    }
}

/// Desk-scale corpus: seeded criterion sources plus classical words.
fn corpus(seed: u64, criterion: usize, classical: usize) -> Vec<ScanSource> {
    let config = ScanConfig {
        n_range: [2, 6],
        coefficient_bound: 12,
        sample_count: criterion.max(5 * classical),
        seed,
        mode: ScanMode::Random,
    };
    let mut sources = generate_sources(&config);
    sources.truncate(criterion + classical);
    sources
}

fn map_for_source(source: &ScanSource) -> Result<GBetaMap> {
    match source {
        ScanSource::Criterion(values) => {
            let c = make_criterion(values, 1)?;
            let sol = solve_criterion_beta(&c)?;
            Ok(verify_criterion_orbit(&c, &sol.beta)?.map)
        }
        ScanSource::ClassicalWord { m, digits } => {
            let p = digits.len();
            let mut coeffs = vec![num_bigint::BigInt::from(0); p + 1];
            coeffs[p] = 1.into();
            for (j, &d) in digits.iter().enumerate() {
                coeffs[p - 1 - j] -= num_bigint::BigInt::from(d);
            }
            coeffs[0] -= num_bigint::BigInt::from(1);
            let poly = crate::IntPolynomial::new(coeffs);
            let beta = AlgebraicReal::new(
                poly,
                num_rational::BigRational::from_integer((*m).into()),
                num_rational::BigRational::from_integer((m + 1).into()),
            )?;
            GBetaMap::new(beta, SignConfiguration::classical(*m))
        }
    }
}

/// Exact recursion relation along the orbit of 1 for a corpus of maps.
fn check_recursion(sources: &[ScanSource]) -> Result<String> {
    let mut steps_total = 0usize;
    let mut maps = 0usize;
    for source in sources {
        let map = map_for_source(source)?;
        let mut x = map.one();
        let mut s = 1i8;
        let mut c_prev: Option<QBetaElement> = None;
        for _ in 0..24 {
            let (x1, e, d) = map.step(&x)?;
            let s_next = e * s;
            let c_j = if s_next >= 0 { x1.clone() } else { x1.neg() };
            if let Some(c) = &c_prev {
                let lhs = c.mul_beta().add_integer(-(s as i64) * (d as i64));
                if lhs != c_j {
                    return Err(fail(format!(
                        "recursion identity failed for {}",
                        source.id()
                    )));
                }
                steps_total += 1;
            }
            c_prev = Some(c_j);
            x = x1;
            s = s_next;
        }
        maps += 1;
    }
    Ok(format!("{maps} maps, {steps_total} exact steps"))
}

/// Zero equivalence at every polynomial zero outside `|z| = 1.05`.
fn check_zero_equivalence(sources: &[ScanSource]) -> Result<String> {
    let finder = RootFinder::default();
    let mut zeros_checked = 0usize;
    for source in sources {
        let map = map_for_source(source)?;
        let PcfOutcome::Pcf(pcf) = map.detect_pcf(10_000)? else {
            return Err(fail(format!("{} not PCF", source.id())));
        };
        let parry = build_parry_polynomial(&pcf.expansion)?;
        for z in finder.all_roots(&parry.poly)? {
            let c = z.to_c64();
            if c.norm() <= 1.05 {
                continue;
            }
            let report = verify_zero_equivalence(&parry, &z, 400)?;
            if report.polynomial_residual >= 1e-8
                || report.series_residual >= report.series_tolerance()
                || !report.consistent(1e-8, 1e-6)
            {
                return Err(fail(format!(
                    "zero equivalence failed for {} at {} + {}i",
                    source.id(),
                    fmt_f64(c.re),
                    fmt_f64(c.im)
                )));
            }
            zeros_checked += 1;
        }
    }
    Ok(format!("{zeros_checked} zeros outside |z| = 1.05"))
}

/// Factorization identity at seeded random points outside the unit disk.
fn check_factor_identity(sources: &[ScanSource], seed: u64) -> Result<String> {
    let mut rng = SplitMix64::new(seed);
    let mut points = 0usize;
    for source in sources {
        let map = map_for_source(source)?;
        let series = OrbitSeries::compute(&map, 200)?;
        for _ in 0..10 {
            let r = 1.1 + 1.5 * rng.next_f64();
            let theta = 2.0 * std::f64::consts::PI * rng.next_f64();
            let z = Complex64::from_polar(r, theta);
            let report = series.factor_identity_at(z)?;
            if report.difference > 1e-10 + report.tail_bound {
                return Err(fail(format!(
                    "factor identity off by {} at {}",
                    fmt_f64(report.difference),
                    source.id()
                )));
            }
            points += 1;
        }
    }
    Ok(format!("{points} random points"))
}

/// Class membership of inverse zeros: at every polynomial zero with
/// `|z| > 1`, the signed orbit series `1 + sum c_j z^-j` vanishes, which is
/// exactly the statement that `1/z` is a zero of a series with coefficients
/// in `[-1, 1]`.
fn check_class_membership(sources: &[ScanSource]) -> Result<String> {
    let finder = RootFinder::default();
    let mut zeros = 0usize;
    for source in sources {
        let map = map_for_source(source)?;
        let PcfOutcome::Pcf(pcf) = map.detect_pcf(10_000)? else {
            return Err(fail(format!("{} not PCF", source.id())));
        };
        let parry = build_parry_polynomial(&pcf.expansion)?;
        let series = OrbitSeries::compute(&map, 400)?;
        let coeffs = series.coefficients();
        if coeffs.iter().any(|c| c.abs() > 1.0 + 1e-12) {
            return Err(fail(format!(
                "signed orbit coefficient outside [-1, 1] for {}",
                source.id()
            )));
        }
        let beta = map.context().beta_f64();
        for z in finder.all_roots(&parry.poly)? {
            let c = z.to_c64();
            if c.norm() <= 1.05 {
                continue;
            }
            // at z = beta the vanishing factor is (1 - beta/z), not the series
            if (c - Complex64::new(beta, 0.0)).norm() < 1e-6 {
                continue;
            }
            let inv = 1.0 / c;
            let mut sum = Complex64::new(0.0, 0.0);
            for cj in coeffs.iter().rev() {
                sum = sum * inv + cj;
            }
            let tail = c.norm().powi(-400) / (1.0 - 1.0 / c.norm());
            if sum.norm() > 1e-7 + tail {
                return Err(fail(format!(
                    "orbit series at zero of {} has residual {}",
                    source.id(),
                    fmt_f64(sum.norm())
                )));
            }
            zeros += 1;
        }
    }
    Ok(format!("{zeros} inverse zeros lie in the zero set of the class"))
}

/// Partial sums of the expansion converge with the geometric bound.
fn check_partial_sums(sources: &[ScanSource]) -> Result<String> {
    let mut maps = 0usize;
    for source in sources {
        let map = map_for_source(source)?;
        let beta = map.context().beta_f64();
        let exp = map.expand(&map.one(), 200)?;
        let products = exp.unroll_products(60);
        let mut sum = 0.0;
        for (j, sd) in products.iter().enumerate() {
            sum += *sd as f64 / beta.powi(j as i32 + 1);
        }
        if (1.0 - sum).abs() > beta.powi(-60) + 1e-9 {
            return Err(fail(format!("partial sums diverge for {}", source.id())));
        }
        maps += 1;
    }
    Ok(format!("{maps} maps at truncation 60"))
}

/// Every shift of the itinerary of 1 is admissible against itself.
fn check_admissibility(sources: &[ScanSource]) -> Result<String> {
    let mut maps = 0usize;
    for source in sources {
        let map = map_for_source(source)?;
        let PcfOutcome::Pcf(pcf) = map.detect_pcf(10_000)? else {
            return Err(fail(format!("{} not PCF", source.id())));
        };
        let it1 = to_itinerary(&pcf.expansion)?;
        if !is_admissible(&it1, &it1, map.signs())? {
            return Err(fail(format!(
                "itinerary of 1 fails self-admissibility for {}",
                source.id()
            )));
        }
        maps += 1;
    }
    Ok(format!("{maps} itineraries"))
}

fn identities_suite() -> SuiteReport {
    let sources = corpus(0x1DE17, 36, 8);
    SuiteReport {
        name: "identities".into(),
        checks: vec![
            check("recursion-identity", || check_recursion(&sources)),
            check("zero-equivalence", || check_zero_equivalence(&sources)),
            check("factor-identity", || check_factor_identity(&sources, 0xFAC7)),
            check("class-membership", || check_class_membership(&sources)),
            check("partial-sums", || check_partial_sums(&sources)),
            check("admissibility-of-truth", || check_admissibility(&sources)),
        ],
    }
}

fn bounds_suite() -> SuiteReport {
    let mut checks = Vec::new();

    let config = ScanConfig {
        n_range: [2, 5],
        coefficient_bound: 15,
        sample_count: 100,
        seed: 0xB0B,
        mode: ScanMode::Random,
    };
    let outcome = scan_omega(&config);
    checks.push(check("scan-bound", || {
        if !outcome.failures.is_empty() {
            return Err(fail(format!("{} scan failures", outcome.failures.len())));
        }
        let report = check_bounds(&outcome.records)?;
        Ok(format!(
            "{} records, max modulus {}",
            report.count,
            fmt_f64(report.max_modulus)
        ))
    }));

    checks.push(check("classical-golden-bound", || {
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        let mut classical = 0usize;
        for r in &outcome.records {
            if r.source_id.starts_with('W') {
                classical += 1;
                if r.modulus() > golden + 1e-6 {
                    return Err(fail(format!(
                        "classical conjugate of modulus {} from {}",
                        fmt_f64(r.modulus()),
                        r.source_id
                    )));
                }
            }
        }
        Ok(format!("{classical} classical records"))
    }));

    checks.push(check("zero-lower-bound", || {
        let mut rng = SplitMix64::new(0x10EB);
        let mut zeros = 0usize;
        for _ in 0..300 {
            let n = 8 + rng.below(16) as usize;
            let coeffs: Vec<f64> = (0..n).map(|_| 2.0 * rng.next_f64() - 1.0).collect();
            let series = FPowerSeries::new(coeffs)?;
            for z in all_roots_f64(&series.poly_coeffs(), 400)? {
                if z.norm() < 0.5 - 1e-9 {
                    return Err(fail(format!("zero of modulus {}", fmt_f64(z.norm()))));
                }
                zeros += 1;
            }
        }
        Ok(format!("{zeros} zeros of 300 random members"))
    }));

    checks.push(check("sharp-endpoint-sums", || {
        for n in [16usize, 64, 256] {
            let expect = num_rational::BigRational::new(
                num_bigint::BigInt::from(1),
                num_bigint::BigInt::from(2).pow(n as u32),
            );
            if endpoint_partial_sum(false, n) != expect || endpoint_partial_sum(true, n) != expect {
                return Err(fail(format!("endpoint sum at truncation {n}")));
            }
        }
        Ok("exact geometric sums at 1/2 and -1/2".into())
    }));

    let grid: Vec<f64> = (1..=9).map(|i| 0.25 + 0.3 * i as f64).collect();
    let curve = boundary_curve(&grid, 300, 1e-7);
    checks.push(check("boundary-band", || {
        if !curve.failures.is_empty() {
            return Err(fail(format!("{} grid failures", curve.failures.len())));
        }
        let (lo, hi) = (curve.min_lambda(), curve.max_lambda());
        if lo <= 0.60 || hi >= 0.75 {
            return Err(fail(format!(
                "lambda band [{}, {}] outside (0.60, 0.75)",
                fmt_f64(lo),
                fmt_f64(hi)
            )));
        }
        if curve.sup_inverse_lambda() >= 2.0 {
            return Err(fail("sup 1/lambda reached 2".into()));
        }
        Ok(format!(
            "lambda in [{}, {}], sup 1/lambda = {}",
            fmt_f64(lo),
            fmt_f64(hi),
            fmt_f64(curve.sup_inverse_lambda())
        ))
    }));

    checks.push(check("omega-envelope", || {
        let report = envelope_check(&outcome.records, &curve, 1e-3);
        if !report.violations.is_empty() {
            return Err(fail(report.violations.join("; ")));
        }
        Ok(format!(
            "{} non-real conjugates outside the unit circle, worst |z| lambda = {}",
            report.checked,
            fmt_f64(report.worst_ratio)
        ))
    }));

    checks.push(check("star-convexity", || {
        let mut rng = SplitMix64::new(0x57A2);
        let mut triples = 0usize;
        for _ in 0..100 {
            let n = 12 + rng.below(12) as usize;
            let coeffs: Vec<f64> = (0..n).map(|_| 2.0 * rng.next_f64() - 1.0).collect();
            let series = FPowerSeries::new(coeffs)?;
            let zeros = all_roots_f64(&series.poly_coeffs(), 400)?;
            let Some(z) = zeros
                .iter()
                .filter(|z| z.norm() < 0.95)
                .min_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
            else {
                continue;
            };
            let a = 1.0 + rng.next_f64() * (0.98 / z.norm() - 1.0).clamp(0.0, 1.0);
            if a <= 1.0 {
                continue;
            }
            let report = star_convexity_witness(&series, *z, a, 1e-6)?;
            if !report.coefficients_in_range || report.rescaled_residual > 1e-6 {
                return Err(fail(format!(
                    "rescaled zero residual {}",
                    fmt_f64(report.rescaled_residual)
                )));
            }
            triples += 1;
        }
        Ok(format!("{triples} rescaled members"))
    }));

    SuiteReport {
        name: "bounds".into(),
        checks,
    }
}

fn criterion_suite() -> SuiteReport {
    let mut checks = Vec::new();

    checks.push(check("worked-instance", || {
        let c = make_criterion(&[3, 1, -1], 1)?;
        let sol = solve_criterion_beta(&c)?;
        let b = sol.beta.to_f64();
        if !(3.0..4.0).contains(&b) {
            return Err(fail(format!("beta = {} outside (3, 4)", fmt_f64(b))));
        }
        let v = verify_criterion_orbit(&c, &sol.beta)?;
        Ok(format!(
            "beta = {} certified PCF with period {}",
            fmt_f64(b),
            v.pcf.period
        ))
    }));

    checks.push(check("hypothesis-rejections", || {
        for bad in [&[2i64, 1][..], &[3, 2, 1], &[3, -2], &[5, 3, 2]] {
            if make_criterion(bad, 1).is_ok() {
                return Err(fail(format!("{bad:?} should violate the hypotheses")));
            }
        }
        Ok("4 boundary cases rejected".into())
    }));

    checks.push(check("random-batch", || {
        let mut rng = SplitMix64::new(0xC217);
        let mut verified = 0usize;
        for _ in 0..150 {
            let Some(values) = random_criterion_values(&mut rng, [2, 6], 50) else {
                return Err(fail("sampler starved".into()));
            };
            let c = make_criterion(&values, 1)?;
            let sol = solve_criterion_beta(&c)?;
            verify_criterion_orbit(&c, &sol.beta)?;
            verified += 1;
        }
        Ok(format!("{verified}/150 sequences certified"))
    }));

    checks.push(check("remainder-bounds", || {
        let mut rng = SplitMix64::new(0x2E4);
        let mut cases = 0usize;
        for _ in 0..60 {
            let Some(values) = random_criterion_values(&mut rng, [2, 6], 20) else {
                continue;
            };
            let c = make_criterion(&values, 1)?;
            let n = c.len();
            let m = c.alphabet_m() as i64;
            // x in [It(1), It(1)+1] including both endpoints
            let x = num_rational::BigRational::new(
                num_bigint::BigInt::from(m * 8 + rng.range_inclusive(0, 8)),
                num_bigint::BigInt::from(8),
            );
            let j = 1 + rng.below((n - 1) as u64) as usize;
            let report = check_remainder_bounds(&c, &x, j)?;
            if !report.magnitude_ok || !report.sign_ok {
                return Err(fail(format!("remainder bound failed for {}", c.id())));
            }
            cases += 1;
        }
        Ok(format!("{cases} exact rational checks"))
    }));

    checks.push(check("scan-worked-instance", || {
        let records = realize_source(
            &ScanSource::Criterion(vec![3, 1, -1]),
            &RootFinder::default(),
        )?;
        if records.len() != 7 {
            return Err(fail(format!("{} records, expected 7", records.len())));
        }
        Ok("degree-8 polynomial yields 7 non-beta zeros".into())
    }));

    SuiteReport {
        name: "criterion".into(),
        checks,
    }
}

/// Runs the requested suite (or all of them) and returns the reports.
pub fn run_suites(kind: SuiteKind) -> Vec<SuiteReport> {
    match kind {
        SuiteKind::Identities => vec![identities_suite()],
        SuiteKind::Bounds => vec![bounds_suite()],
        SuiteKind::Criterion => vec![criterion_suite()],
        SuiteKind::All => vec![identities_suite(), bounds_suite(), criterion_suite()],
    }
}

/// Renders suite reports into one document.
pub fn render_reports(reports: &[SuiteReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&r.render());
    }
    let all_ok = reports.iter().all(|r| r.passed());
    out.push_str(if all_ok {
        "overall: PASS\n"
    } else {
        "overall: FAIL\n"
    });
    out
}
