//! Mass generation of conjugate sets at desk scale.
//!
//! A scan enumerates or samples integer criterion sequences plus classical
//! digit words (all-positive sign configuration), solves each for its `beta`,
//! certifies post-critical finiteness by exact orbit simulation, builds the
//! Parry polynomial from the infinite expansion of 1, and collects every zero
//! except `beta` itself. Scans are deterministic: sources are generated
//! sequentially from a seeded stream, processed in parallel, and the merged
//! records are canonically sorted, so a fixed `(config, seed)` produces
//! byte-identical CSV.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::{fmt_f64, BoundaryCurve, FPowerSeries};
use crate::error::Error;
use crate::map::{is_admissible, GBetaMap, Itinerary, PcfOutcome, Shape, SignConfiguration};
use crate::parry::{
    build_parry_polynomial, make_criterion, solve_criterion_beta, verify_criterion_orbit,
};
use crate::poly::IntPolynomial;
use crate::rng::SplitMix64;
use crate::roots::RootFinder;
use crate::{AlgebraicReal, Result};

/// One zero of a generated Parry polynomial, excluding `beta` itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugateRecord {
    pub re: f64,
    pub im: f64,
    pub beta: f64,
    pub source_id: String,
    pub degree: usize,
    pub is_real: bool,
}

impl ConjugateRecord {
    pub fn modulus(&self) -> f64 {
        (self.re * self.re + self.im * self.im).sqrt()
    }

    pub fn argument(&self) -> f64 {
        self.im.atan2(self.re)
    }
}

/// Scan mode: exhaustive enumeration of criterion sequences or seeded sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanMode {
    Exhaustive,
    Random,
}

/// Scan configuration; a fixed `(config, seed)` yields byte-identical output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanConfig {
    /// Criterion sequence lengths `[lo, hi]`, inclusive.
    pub n_range: [usize; 2],
    /// Bound on `|M(j)|` (and on the classical digit alphabet).
    pub coefficient_bound: i64,
    /// Number of criterion sources (cap for exhaustive mode when nonzero).
    /// One classical word source is added per five criterion sources.
    pub sample_count: usize,
    pub seed: u64,
    pub mode: ScanMode,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            n_range: [2, 6],
            coefficient_bound: 50,
            sample_count: 500,
            seed: 1,
            mode: ScanMode::Random,
        }
    }
}

/// A source the scan will realize: either a criterion sequence or a classical
/// periodic digit word over `{0, ..., m}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScanSource {
    Criterion(Vec<i64>),
    ClassicalWord { m: u32, digits: Vec<u32> },
}

impl ScanSource {
    pub fn id(&self) -> String {
        match self {
            ScanSource::Criterion(m) => {
                let parts: Vec<String> = m.iter().map(|x| x.to_string()).collect();
                format!("M:{}", parts.join("_"))
            }
            ScanSource::ClassicalWord { m, digits } => {
                let parts: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
                format!("W{}:{}", m, parts.join("_"))
            }
        }
    }
}

/// Scan result: records plus per-source failures (failures never abort).
#[derive(Debug, Clone)]
pub struct ScanOutcome {
    pub records: Vec<ConjugateRecord>,
    pub sources: usize,
    pub accepted: usize,
    pub failures: Vec<(String, String)>,
}

/// Draws a valid criterion sequence; None after too many rejected samples.
pub fn random_criterion_values(
    rng: &mut SplitMix64,
    n_range: [usize; 2],
    bound: i64,
) -> Option<Vec<i64>> {
    let bound = bound.max(3);
    for _ in 0..400 {
        let n = rng.range_inclusive(n_range[0] as i64, n_range[1] as i64) as usize;
        let m1 = rng.range_inclusive(3, bound);
        let mut values = vec![m1];
        for _ in 1..n {
            let mag = rng.range_inclusive(1, (m1 - 2).max(1));
            values.push(mag * rng.sign());
        }
        if make_criterion(&values, 1).is_ok() {
            return Some(values);
        }
    }
    None
}

/// Draws an admissible periodic digit word with minimal period, first digit m.
pub fn random_classical_word(rng: &mut SplitMix64, max_m: u32) -> Option<(u32, Vec<u32>)> {
    for _ in 0..400 {
        let m = rng.range_inclusive(1, max_m.max(1) as i64) as u32;
        let p = rng.range_inclusive(1, 6) as usize;
        let mut digits = vec![m];
        for _ in 1..p {
            digits.push(rng.range_inclusive(0, m as i64) as u32);
        }
        // minimal cyclic period
        let p_min = (1..=p)
            .filter(|d| p.is_multiple_of(*d))
            .find(|&d| (0..p).all(|i| digits[i] == digits[i % d]))
            .unwrap_or(p);
        digits.truncate(p_min);
        let word = Itinerary::new(digits.clone(), Shape::Periodic(p_min));
        let signs = SignConfiguration::classical(m);
        if is_admissible(&word, &word, &signs).unwrap_or(false) {
            return Some((m, digits));
        }
    }
    None
}

/// Generates the deterministic source list for a scan.
pub fn generate_sources(config: &ScanConfig) -> Vec<ScanSource> {
    let mut sources = Vec::new();
    match config.mode {
        ScanMode::Random => {
            let mut rng = SplitMix64::new(config.seed);
            let mut seen = std::collections::HashSet::new();
            let mut drawn = 0usize;
            // distinct sources up to the requested count; duplicates redraw
            while drawn < config.sample_count && seen.len() < 40 * config.sample_count {
                if let Some(v) =
                    random_criterion_values(&mut rng, config.n_range, config.coefficient_bound)
                {
                    if seen.insert(ScanSource::Criterion(v.clone()).id()) {
                        sources.push(ScanSource::Criterion(v));
                        drawn += 1;
                    }
                } else {
                    break;
                }
            }
            let classical = config.sample_count / 5;
            let max_m = config.coefficient_bound.clamp(1, 9) as u32;
            drawn = 0;
            let mut attempts = 0usize;
            while drawn < classical && attempts < 400 * classical.max(1) {
                attempts += 1;
                if let Some((m, digits)) = random_classical_word(&mut rng, max_m) {
                    let s = ScanSource::ClassicalWord { m, digits };
                    if seen.insert(s.id()) {
                        sources.push(s);
                        drawn += 1;
                    }
                }
            }
        }
        ScanMode::Exhaustive => {
            let bound = config.coefficient_bound.max(3);
            'outer: for n in config.n_range[0]..=config.n_range[1] {
                if n < 2 {
                    continue;
                }
                let mut stack: Vec<Vec<i64>> = (3..=bound).map(|m1| vec![m1]).collect();
                stack.reverse();
                while let Some(prefix) = stack.pop() {
                    if prefix.len() == n {
                        if make_criterion(&prefix, 1).is_ok() {
                            sources.push(ScanSource::Criterion(prefix));
                            if config.sample_count > 0 && sources.len() >= config.sample_count {
                                break 'outer;
                            }
                        }
                        continue;
                    }
                    let m1 = prefix[0];
                    for mag in (1..=(m1 - 2).max(0)).rev() {
                        for sign in [-1i64, 1] {
                            let mut next = prefix.clone();
                            next.push(mag * sign);
                            stack.push(next);
                        }
                    }
                }
            }
            // classical sources are sampled even in exhaustive mode
            let mut rng = SplitMix64::new(config.seed);
            let classical = sources.len() / 5;
            let max_m = config.coefficient_bound.clamp(1, 9) as u32;
            for _ in 0..classical {
                if let Some((m, digits)) = random_classical_word(&mut rng, max_m) {
                    sources.push(ScanSource::ClassicalWord { m, digits });
                }
            }
        }
    }
    sources.dedup(); // exhaustive mode can repeat across n values
    sources
}

/// Realizes one source: beta, exact PCF certificate, Parry polynomial, zeros.
pub fn realize_source(source: &ScanSource, finder: &RootFinder) -> Result<Vec<ConjugateRecord>> {
    let source_id = source.id();
    let (beta, map) = match source {
        ScanSource::Criterion(values) => {
            let c = make_criterion(values, 1)?;
            let sol = solve_criterion_beta(&c)?;
            let v = verify_criterion_orbit(&c, &sol.beta)?;
            (sol.beta, v.map)
        }
        ScanSource::ClassicalWord { m, digits } => {
            let p = digits.len();
            // z^p - d(1) z^(p-1) - ... - d(p) - 1
            let mut coeffs = vec![num_bigint::BigInt::from(0); p + 1];
            coeffs[p] = 1.into();
            for (j, &d) in digits.iter().enumerate() {
                coeffs[p - 1 - j] -= num_bigint::BigInt::from(d);
            }
            coeffs[0] -= num_bigint::BigInt::from(1);
            let poly = IntPolynomial::new(coeffs);
            let lo = num_rational::BigRational::from_integer((*m).into());
            let hi = num_rational::BigRational::from_integer((m + 1).into());
            let beta = AlgebraicReal::new(poly, lo, hi)?;
            let map = GBetaMap::new(beta.clone(), SignConfiguration::classical(*m))?;
            (beta, map)
        }
    };

    let pcf = match map.detect_pcf(10_000)? {
        PcfOutcome::Pcf(data) => data,
        PcfOutcome::Undetermined => {
            return Err(Error::VerificationFailure {
                index: 0,
                detail: "orbit of 1 did not close within the step budget".into(),
            });
        }
    };
    if let ScanSource::ClassicalWord { digits, .. } = source {
        // the word must really be the infinite expansion of 1
        let got = pcf.expansion.digits();
        if pcf.expansion.shape() != Shape::Periodic(digits.len()) || &got != digits {
            return Err(Error::VerificationFailure {
                index: 0,
                detail: format!("expansion digits {got:?} differ from the word {digits:?}"),
            });
        }
    }
    let parry = build_parry_polynomial(&pcf.expansion)?;
    let zeros = finder.all_roots(&parry.poly)?;

    // drop the zero matching beta itself
    let beta_f64 = beta.to_f64();
    let mut best = None;
    let mut best_dist = f64::INFINITY;
    for (i, z) in zeros.iter().enumerate() {
        let c = z.to_c64();
        let dist = (c - Complex64::new(beta_f64, 0.0)).norm();
        if dist < best_dist {
            best_dist = dist;
            best = Some(i);
        }
    }
    if best_dist > 1e-6 {
        return Err(Error::VerificationFailure {
            index: 0,
            detail: format!("no polynomial zero within 1e-6 of beta = {beta_f64}"),
        });
    }

    let mut records = Vec::with_capacity(zeros.len().saturating_sub(1));
    for (i, z) in zeros.iter().enumerate() {
        if Some(i) == best {
            continue;
        }
        let c = z.to_c64();
        records.push(ConjugateRecord {
            re: c.re,
            im: c.im,
            beta: beta_f64,
            source_id: source_id.clone(),
            degree: parry.degree(),
            is_real: c.im.abs() < 1e-9,
        });
    }
    Ok(records)
}

/// Runs a scan: generate sources, realize them in parallel, sort canonically.
pub fn scan_omega(config: &ScanConfig) -> ScanOutcome {
    let sources = generate_sources(config);
    let finder = RootFinder::default();
    let results: Vec<(String, Result<Vec<ConjugateRecord>>)> = sources
        .par_iter()
        .map(|s| (s.id(), realize_source(s, &finder)))
        .collect();

    let mut records = Vec::new();
    let mut failures = Vec::new();
    let mut accepted = 0;
    for (id, res) in results {
        match res {
            Ok(mut rs) => {
                accepted += 1;
                records.append(&mut rs);
            }
            Err(e) => failures.push((id, e.to_string())),
        }
    }
    records.sort_by(|a, b| {
        a.source_id
            .cmp(&b.source_id)
            .then(a.argument().partial_cmp(&b.argument()).unwrap())
            .then(a.re.partial_cmp(&b.re).unwrap())
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    ScanOutcome {
        records,
        sources: sources.len(),
        accepted,
        failures,
    }
}

/// Aggregate bound report over a record set.
#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub count: usize,
    pub max_modulus: f64,
    pub max_nonreal_modulus: f64,
    pub violations: Vec<String>,
}

/// Checks `|z| < 2` on every record; violations indicate an implementation
/// bug, surfaced as an error listing the offenders.
pub fn check_bounds(records: &[ConjugateRecord]) -> Result<BoundsReport> {
    let mut max_modulus = 0.0f64;
    let mut max_nonreal_modulus = 0.0f64;
    let mut violations = Vec::new();
    for r in records {
        let m = r.modulus();
        max_modulus = max_modulus.max(m);
        if !r.is_real {
            max_nonreal_modulus = max_nonreal_modulus.max(m);
        }
        if m >= 2.0 {
            violations.push(format!("{} at |z| = {m}", r.source_id));
        }
    }
    let report = BoundsReport {
        count: records.len(),
        max_modulus,
        max_nonreal_modulus,
        violations: violations.clone(),
    };
    if violations.is_empty() {
        Ok(report)
    } else {
        Err(Error::BoundViolation(violations.join("; ")))
    }
}

/// Envelope comparison of non-real conjugates against the boundary curve:
/// `|z| <= 1/lambda(arg z) + tol` for every non-real record outside the unit
/// circle.
#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeReport {
    pub checked: usize,
    pub max_nonreal_modulus: f64,
    /// Largest `|z| * lambda(arg z)` seen (at most 1 + tol when consistent).
    pub worst_ratio: f64,
    pub violations: Vec<String>,
}

pub fn envelope_check(
    records: &[ConjugateRecord],
    curve: &BoundaryCurve,
    tol: f64,
) -> EnvelopeReport {
    let mut checked = 0;
    let mut worst_ratio = 0.0f64;
    let mut max_nonreal_modulus = 0.0f64;
    let mut violations = Vec::new();
    for r in records {
        if r.is_real {
            continue;
        }
        let m = r.modulus();
        max_nonreal_modulus = max_nonreal_modulus.max(m);
        if m <= 1.0 {
            continue;
        }
        let phi = r.argument().abs();
        let Some(lambda) = curve.lambda_at(phi) else {
            continue;
        };
        checked += 1;
        worst_ratio = worst_ratio.max(m * lambda);
        if m > 1.0 / lambda + tol {
            violations.push(format!(
                "{}: |z| = {m} exceeds 1/lambda({phi}) = {}",
                r.source_id,
                1.0 / lambda
            ));
        }
    }
    EnvelopeReport {
        checked,
        max_nonreal_modulus,
        worst_ratio,
        violations,
    }
}

/// Star-convexity witness: rescaling a member by `T(w/a)` keeps it in the
/// class and moves the zero from `lambda` to `a lambda`.
#[derive(Debug, Clone, Serialize)]
pub struct StarConvexityReport {
    pub base_residual: f64,
    pub rescaled_residual: f64,
    pub coefficients_in_range: bool,
}

pub fn star_convexity_witness(
    series: &FPowerSeries,
    lambda: Complex64,
    a: f64,
    tol: f64,
) -> Result<StarConvexityReport> {
    let base_residual = series.eval(lambda).norm();
    if base_residual >= tol {
        return Err(Error::InvalidInput(format!(
            "|T(lambda)| = {base_residual} is not below {tol}"
        )));
    }
    if a < 1.0 {
        return Err(Error::InvalidInput("rescale factor must be >= 1".into()));
    }
    let rescaled = if a == 1.0 {
        series.clone()
    } else {
        series.rescale(a)?
    };
    let coefficients_in_range = rescaled.coeffs().iter().all(|c| c.abs() <= 1.0);
    let rescaled_residual = rescaled.eval(lambda * a).norm();
    Ok(StarConvexityReport {
        base_residual,
        rescaled_residual,
        coefficients_in_range,
    })
}

/// CSV with columns `re,im,beta,source_id,degree,is_real`.
pub fn records_to_csv(records: &[ConjugateRecord]) -> String {
    let mut out = String::from("re,im,beta,source_id,degree,is_real\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_f64(r.re),
            fmt_f64(r.im),
            fmt_f64(r.beta),
            r.source_id,
            r.degree,
            r.is_real
        ));
    }
    out
}

/// Parses the CSV produced by [`records_to_csv`].
pub fn records_from_csv(text: &str) -> Result<Vec<ConjugateRecord>> {
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 || line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 6 {
            return Err(Error::InvalidInput(format!(
                "line {}: expected 6 columns, got {}",
                i + 1,
                parts.len()
            )));
        }
        let bad = |what: &str| Error::InvalidInput(format!("line {}: bad {what}", i + 1));
        records.push(ConjugateRecord {
            re: parts[0].parse().map_err(|_| bad("re"))?,
            im: parts[1].parse().map_err(|_| bad("im"))?,
            beta: parts[2].parse().map_err(|_| bad("beta"))?,
            source_id: parts[3].to_string(),
            degree: parts[4].parse().map_err(|_| bad("degree"))?,
            is_real: parts[5].parse().map_err(|_| bad("is_real"))?,
        });
    }
    Ok(records)
}

/// Scatter SVG with the unit circle and radius-2 circle overlays.
pub fn records_to_svg(records: &[ConjugateRecord]) -> String {
    let scale = 130.0;
    let cx = 300.0;
    let cy = 300.0;
    let mut svg = String::new();
    svg.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" \
         viewBox=\"0 0 600 600\">\n",
    );
    svg.push_str("<rect width=\"600\" height=\"600\" fill=\"white\"/>\n");
    for (radius, color) in [(1.0, "#bbbbbb"), (2.0, "#d62728")] {
        svg.push_str(&format!(
            "<circle cx=\"{cx}\" cy=\"{cy}\" r=\"{}\" fill=\"none\" stroke=\"{color}\" \
             stroke-width=\"1\"/>\n",
            fmt_f64(radius * scale)
        ));
    }
    for r in records {
        svg.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"1.2\" fill=\"#1f77b4\" fill-opacity=\"0.55\"/>\n",
            fmt_f64(cx + scale * r.re),
            fmt_f64(cy - scale * r.im),
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_source_single_record() {
        let source = ScanSource::ClassicalWord {
            m: 1,
            digits: vec![1, 0],
        };
        let records = realize_source(&source, &RootFinder::default()).unwrap();
        assert_eq!(records.len(), 1);
        assert!((records[0].re + 0.6180339887).abs() < 1e-9);
        assert!(records[0].is_real);
    }

    #[test]
    fn criterion_source_emits_parry_zeros() {
        // the worked criterion instance has a degree-8 Parry polynomial,
        // so seven zeros besides beta
        let source = ScanSource::Criterion(vec![3, 1, -1]);
        let records = realize_source(&source, &RootFinder::default()).unwrap();
        assert_eq!(records.len(), 7);
        assert!(records.iter().all(|r| r.modulus() < 2.0));
    }

    #[test]
    fn empty_scan() {
        let config = ScanConfig {
            sample_count: 0,
            mode: ScanMode::Random,
            ..Default::default()
        };
        let outcome = scan_omega(&config);
        assert!(outcome.records.is_empty());
    }

    #[test]
    fn small_scan_deterministic_and_bounded() {
        let config = ScanConfig {
            n_range: [2, 4],
            coefficient_bound: 9,
            sample_count: 40,
            seed: 7,
            mode: ScanMode::Random,
        };
        let a = scan_omega(&config);
        let b = scan_omega(&config);
        assert_eq!(records_to_csv(&a.records), records_to_csv(&b.records));
        assert!(a.failures.is_empty(), "failures: {:?}", a.failures);
        let report = check_bounds(&a.records).unwrap();
        assert!(report.max_modulus < 2.0);
        assert!(report.count > 0);
    }

    #[test]
    fn classical_records_respect_golden_bound() {
        let mut rng = SplitMix64::new(3);
        let mut all = Vec::new();
        for _ in 0..30 {
            if let Some((m, digits)) = random_classical_word(&mut rng, 6) {
                let source = ScanSource::ClassicalWord { m, digits };
                if let Ok(mut rs) = realize_source(&source, &RootFinder::default()) {
                    all.append(&mut rs);
                }
            }
        }
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        for r in &all {
            assert!(
                r.modulus() <= golden + 1e-6,
                "classical conjugate at {} exceeds the golden bound",
                r.modulus()
            );
        }
    }

    #[test]
    fn exhaustive_mode_is_deterministic() {
        let config = ScanConfig {
            n_range: [2, 2],
            coefficient_bound: 5,
            sample_count: 0,
            seed: 1,
            mode: ScanMode::Exhaustive,
        };
        let a = generate_sources(&config);
        let b = generate_sources(&config);
        assert_eq!(a, b);
        assert!(!a.is_empty());
        // n = 2, M(1) in {3,4,5}, |M(2)| <= M(1)-2 minus the forbidden cases
        for s in &a {
            if let ScanSource::Criterion(v) = s {
                assert!(make_criterion(v, 1).is_ok());
            }
        }
    }

    #[test]
    fn star_convexity_geometric_example() {
        // all coefficients -1: zero at 1/2; rescaling by 1.2 moves it to 0.6
        let t = FPowerSeries::all_minus_one(300);
        let report =
            star_convexity_witness(&t, Complex64::new(0.5, 0.0), 1.2, 1e-8).unwrap();
        assert!(report.coefficients_in_range);
        assert!(report.rescaled_residual < 1e-8);
    }

    #[test]
    fn star_convexity_identity_case() {
        let t = FPowerSeries::all_minus_one(300);
        let report =
            star_convexity_witness(&t, Complex64::new(0.5, 0.0), 1.0, 1e-8).unwrap();
        assert_eq!(report.base_residual, report.rescaled_residual);
    }

    #[test]
    fn csv_round_trip_and_svg() {
        let source = ScanSource::Criterion(vec![3, 1, -1]);
        let records = realize_source(&source, &RootFinder::default()).unwrap();
        let csv = records_to_csv(&records);
        let back = records_from_csv(&csv).unwrap();
        assert_eq!(records.len(), back.len());
        assert_eq!(csv, records_to_csv(&back));
        let svg = records_to_svg(&records);
        assert!(svg.contains("<circle"));
        // header-only case
        assert!(records_to_csv(&[]).ends_with("is_real\n"));
    }
}
