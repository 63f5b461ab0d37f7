//! Command-line front end: expansions, orbits, Parry polynomials, criterion
//! sequences, conjugate-set scans, boundary curves, unimodal normalization,
//! and the verification suites.
//!
//! Exit codes: 0 success, 1 verification/computation failure, 2 usage error.
//! File outputs are written to a temporary sibling and renamed, so a failed
//! run never leaves a partial file. All floating-point output uses 17
//! significant digits, and scans take explicit seeds, so identical
//! invocations produce byte-identical outputs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gbeta_core::boundary::{boundary_curve, fmt_f64, relax_one_coefficient};
use gbeta_core::map::{to_itinerary, PcfOutcome};
use gbeta_core::parry::{
    build_parry_polynomial, check_remainder_bounds, make_criterion, solve_criterion_beta,
    verify_criterion_orbit,
};
use gbeta_core::poly::parse_rational;
use gbeta_core::spectra::{
    check_bounds, records_from_csv, records_to_csv, records_to_svg, scan_omega, ScanConfig,
    ScanMode,
};
use gbeta_core::unimodal::{
    entropy_cross_check, lap_entropy, normalize, PiecewiseLinearMap, PiecewiseLinearMapJson,
};
use gbeta_core::verify::{render_reports, run_suites, SuiteKind};
use gbeta_core::{
    AlgebraicReal, Error, GBetaMap, IntPolynomial, QBetaElement, RootFinder, SignConfiguration,
};

#[derive(Parser)]
#[command(name = "gbeta", about = "computations with generalized beta-transformations")]
struct Cli {
    /// Worker threads for scans and curve tracing (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Signed digit expansion of a point.
    Expand(ExpandArgs),
    /// Exact orbit of 1 with the PCF verdict.
    Orbit(MapArgs),
    /// Parry polynomial of a PCF map, with its zeros.
    Parry(ParryArgs),
    /// Validate an integer criterion sequence and certify its Parry number.
    Criterion(CriterionArgs),
    /// Scan criterion sequences and classical words into a conjugate CSV.
    Scan(ScanArgs),
    /// Trace the boundary curve of minimal zero moduli.
    Boundary(BoundaryArgs),
    /// Normalize a piecewise-linear unimodal expander and cross-check entropy.
    Unimodal(UnimodalArgs),
    /// Run a named verification suite.
    Verify(VerifyArgs),
    /// Render a conjugate CSV as an SVG scatter plot.
    Render(RenderArgs),
}

#[derive(Args)]
struct MapArgs {
    /// Rational beta, e.g. "2" or "3/2".
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Defining polynomial coefficients, ascending degree, e.g. "-1,-1,1".
    #[arg(long, allow_hyphen_values = true)]
    beta_poly: Option<String>,
    /// Isolating interval endpoints for --beta-poly.
    #[arg(long, allow_hyphen_values = true)]
    beta_lo: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta_hi: Option<String>,
    /// Sign configuration, e.g. "1,-1".
    #[arg(long, allow_hyphen_values = true)]
    signs: String,
    /// Step budget for orbit iteration.
    #[arg(long, default_value_t = 10_000)]
    max: usize,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExpandArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Point to expand: "one" or a rational in [0, 1].
    #[arg(long, default_value = "one")]
    x: String,
}

#[derive(Args)]
struct ParryArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Root-finder working precision in bits.
    #[arg(long, default_value_t = 128)]
    precision: u32,
}

#[derive(Args)]
struct CriterionArgs {
    /// Comma-separated integers, e.g. "3,1,-1".
    #[arg(long, allow_hyphen_values = true)]
    m: String,
    /// Fill sign for unconstrained branches (+1 or -1).
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    free_sign: i8,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ScanArgs {
    /// JSON config file; flags below override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    bound: Option<i64>,
    #[arg(long)]
    n_lo: Option<usize>,
    #[arg(long)]
    n_hi: Option<usize>,
    /// "random" or "exhaustive".
    #[arg(long)]
    mode: Option<String>,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Optional scatter SVG path.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct BoundaryArgs {
    /// Grid "lo:hi:step" over (0, pi).
    #[arg(long)]
    grid: String,
    /// Series truncation order.
    #[arg(long, default_value_t = 400)]
    trunc: usize,
    /// Residual tolerance for on-ray zeros.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Optional polar SVG path.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Report the one-coefficient relaxation at each sample (diagnostic).
    #[arg(long)]
    relax: bool,
}

#[derive(Args)]
struct UnimodalArgs {
    /// Piecewise-linear map JSON: {"breakpoints": [...], "values": [...]}.
    #[arg(long)]
    map: PathBuf,
    /// Lap-count depth for the entropy cross-check.
    #[arg(long, default_value_t = 16)]
    n_max: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// identities | bounds | criterion | all
    #[arg(long)]
    suite: String,
}

#[derive(Args)]
struct RenderArgs {
    /// Input conjugate CSV (as produced by `scan`).
    #[arg(long)]
    input: PathBuf,
    /// Output SVG path.
    #[arg(long)]
    out: PathBuf,
}

/// Usage-level failures exit 2; computation/verification failures exit 1.
fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(
            Error::HypothesisViolation(_)
            | Error::InvalidInput(_)
            | Error::InvalidSymbol { .. }
            | Error::OutOfRange
            | Error::NotFinite
            | Error::NotInfinite,
        ) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let result = match cli.command {
        Command::Expand(args) => cmd_expand(args),
        Command::Orbit(args) => cmd_orbit(args),
        Command::Parry(args) => cmd_parry(args),
        Command::Criterion(args) => cmd_criterion(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Boundary(args) => cmd_boundary(args),
        Command::Unimodal(args) => cmd_unimodal(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Render(args) => cmd_render(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

/// Writes via a temporary sibling plus rename, so failures leave no partial file.
fn write_atomic(path: &Path, contents: &str) -> anyhow::Result<()> {
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("out")
    ));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn build_map(args: &MapArgs) -> anyhow::Result<GBetaMap> {
    let beta = match (&args.beta, &args.beta_poly) {
        (Some(r), None) => AlgebraicReal::from_rational(parse_rational(r)?),
        (None, Some(coeffs)) => {
            let coeffs: Result<Vec<num_bigint::BigInt>, _> =
                coeffs.split(',').map(|c| c.trim().parse()).collect();
            let poly = IntPolynomial::new(
                coeffs.map_err(|_| Error::InvalidInput("bad --beta-poly coefficients".into()))?,
            );
            let lo = parse_rational(
                args.beta_lo
                    .as_deref()
                    .ok_or_else(|| Error::InvalidInput("--beta-poly needs --beta-lo".into()))?,
            )?;
            let hi = parse_rational(
                args.beta_hi
                    .as_deref()
                    .ok_or_else(|| Error::InvalidInput("--beta-poly needs --beta-hi".into()))?,
            )?;
            AlgebraicReal::new(poly, lo, hi)?
        }
        _ => {
            return Err(Error::InvalidInput(
                "give exactly one of --beta or --beta-poly".into(),
            )
            .into());
        }
    };
    let signs: Result<Vec<i8>, _> = args
        .signs
        .split(',')
        .map(|s| s.trim().parse::<i8>())
        .collect();
    let signs = SignConfiguration::new(
        signs.map_err(|_| Error::InvalidInput("bad --signs list".into()))?,
    )?;
    Ok(GBetaMap::new(beta, signs)?)
}

fn point_for(map: &GBetaMap, spec: &str) -> anyhow::Result<QBetaElement> {
    if spec == "one" {
        return Ok(map.one());
    }
    Ok(map.point_from_rational(&parse_rational(spec)?))
}

fn cmd_expand(args: ExpandArgs) -> anyhow::Result<ExitCode> {
    let map = build_map(&args.map)?;
    let x = point_for(&map, &args.x)?;
    let exp = map.expand(&x, args.map.max)?;
    if args.map.json {
        println!("{}", serde_json::to_string_pretty(&exp)?);
    } else {
        println!("beta = {}", map.beta());
        println!("shape: {:?}", exp.shape());
        let pairs: Vec<String> = exp
            .steps()
            .iter()
            .map(|s| format!("({:+}, {})", s.s, s.d))
            .collect();
        println!("steps: {}", pairs.join(" "));
        if exp.is_infinite() {
            let it = to_itinerary(&exp)?;
            println!("itinerary: {:?}", it.symbols());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_orbit(args: MapArgs) -> anyhow::Result<ExitCode> {
    let map = build_map(&args)?;
    let mut x = map.one();
    println!("beta = {}", map.beta());
    println!("orbit of 1 (exact coordinates over the power basis):");
    let mut seen = vec![x.clone()];
    for j in 0..args.max.min(64) {
        println!("  f^{j}(1) = {x}");
        let (x1, _, _) = map.step(&x)?;
        if seen.contains(&x1) {
            println!("  f^{}(1) = {x1}  (repeat)", j + 1);
            break;
        }
        seen.push(x1.clone());
        x = x1;
    }
    match map.detect_pcf(args.max)? {
        PcfOutcome::Pcf(data) => {
            println!(
                "PCF: yes (preperiod {}, period {}, orbit size {})",
                data.preperiod,
                data.period,
                data.orbit.len()
            );
        }
        PcfOutcome::Undetermined => {
            println!("PCF: undetermined within {} steps", args.max);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_parry(args: ParryArgs) -> anyhow::Result<ExitCode> {
    let map = build_map(&args.map)?;
    let pcf = match map.detect_pcf(args.map.max)? {
        PcfOutcome::Pcf(data) => data,
        PcfOutcome::Undetermined => {
            return Err(Error::NotInfinite.into());
        }
    };
    let parry = build_parry_polynomial(&pcf.expansion)?;
    let finder = RootFinder::with_precision(args.precision);
    let zeros = finder.all_roots(&parry.poly)?;
    if args.map.json {
        let zs: Vec<[f64; 2]> = zeros
            .iter()
            .map(|z| {
                let c = z.to_c64();
                [c.re, c.im]
            })
            .collect();
        println!(
            "{}",
            serde_json::json!({ "parry": parry, "zeros": zs })
        );
    } else {
        println!("parry polynomial: {}", parry.poly);
        println!("preperiod {} period {}", parry.k, parry.p);
        println!("zeros:");
        for z in &zeros {
            let c = z.to_c64();
            println!(
                "  {} + {}i   |z| = {}",
                fmt_f64(c.re),
                fmt_f64(c.im),
                fmt_f64(c.norm())
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_criterion(args: CriterionArgs) -> anyhow::Result<ExitCode> {
    let values: Result<Vec<i64>, _> = args.m.split(',').map(|s| s.trim().parse::<i64>()).collect();
    let values = values.map_err(|_| Error::InvalidInput("bad --m list".into()))?;
    let c = make_criterion(&values, args.free_sign)?;
    let sol = solve_criterion_beta(&c)?;
    let v = verify_criterion_orbit(&c, &sol.beta)?;
    let lo = num_rational::BigRational::from_integer(c.alphabet_m().into());
    let hi = &lo + num_rational::BigRational::from_integer(1.into());
    let r1 = check_remainder_bounds(&c, &lo, 1)?;
    let r2 = check_remainder_bounds(&c, &hi, 1)?;
    if args.json {
        println!(
            "{}",
            serde_json::json!({
                "criterion": c,
                "beta": sol.beta,
                "beta_f64": sol.beta.to_f64(),
                "roots_in_interval": sol.roots_in_interval,
                "preperiod": v.pcf.preperiod,
                "period": v.pcf.period,
                "expansion": v.pcf.expansion,
                "remainder_at_lo": r1,
                "remainder_at_hi": r2,
            })
        );
    } else {
        println!("criterion sequence: {}", c.id());
        println!("itinerary prefix: {:?}", c.itinerary);
        println!("sign configuration: {:?}", c.signs.entries());
        println!("criterion polynomial: {}", c.polynomial());
        println!(
            "beta isolated in ({}, {}): {}  ~ {}",
            c.alphabet_m(),
            c.alphabet_m() + 1,
            sol.beta,
            fmt_f64(sol.beta.to_f64())
        );
        println!(
            "orbit verification: exact landing confirmed, PCF with preperiod {} period {}",
            v.pcf.preperiod, v.pcf.period
        );
        println!(
            "remainder bounds at interval ends: |R_1| ok = {}/{}, signs ok = {}/{}",
            r1.magnitude_ok, r2.magnitude_ok, r1.sign_ok, r2.sign_ok
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_scan(args: ScanArgs) -> anyhow::Result<ExitCode> {
    let mut config = match &args.config {
        Some(path) => serde_json::from_str::<ScanConfig>(&fs::read_to_string(path)?)?,
        None => ScanConfig::default(),
    };
    if let Some(s) = args.samples {
        config.sample_count = s;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    if let Some(b) = args.bound {
        config.coefficient_bound = b;
    }
    if let Some(n) = args.n_lo {
        config.n_range[0] = n;
    }
    if let Some(n) = args.n_hi {
        config.n_range[1] = n;
    }
    if let Some(mode) = &args.mode {
        config.mode = match mode.as_str() {
            "random" => ScanMode::Random,
            "exhaustive" => ScanMode::Exhaustive,
            other => {
                return Err(Error::InvalidInput(format!("unknown mode '{other}'")).into());
            }
        };
    }
    let outcome = scan_omega(&config);
    write_atomic(&args.out, &records_to_csv(&outcome.records))?;
    if let Some(svg) = &args.svg {
        write_atomic(svg, &records_to_svg(&outcome.records))?;
    }
    let report = check_bounds(&outcome.records)?;
    println!(
        "sources {} accepted {} failures {}",
        outcome.sources,
        outcome.accepted,
        outcome.failures.len()
    );
    for (id, reason) in outcome.failures.iter().take(10) {
        println!("  failed {id}: {reason}");
    }
    println!(
        "records {} max |z| = {} max non-real |z| = {}",
        report.count,
        fmt_f64(report.max_modulus),
        fmt_f64(report.max_nonreal_modulus)
    );
    Ok(ExitCode::SUCCESS)
}

fn parse_grid(spec: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidInput("grid must be lo:hi:step".into()).into());
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| Error::InvalidInput("bad grid lo".into()))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| Error::InvalidInput("bad grid hi".into()))?;
    let step: f64 = parts[2]
        .parse()
        .map_err(|_| Error::InvalidInput("bad grid step".into()))?;
    if !(lo > 0.0 && hi < std::f64::consts::PI && lo < hi && step > 0.0) {
        return Err(Error::InvalidInput(
            "grid must satisfy 0 < lo < hi < pi with positive step".into(),
        )
        .into());
    }
    let mut grid = Vec::new();
    let mut phi = lo;
    while phi <= hi + 1e-12 {
        grid.push(phi);
        phi += step;
    }
    Ok(grid)
}

fn cmd_boundary(args: BoundaryArgs) -> anyhow::Result<ExitCode> {
    let grid = parse_grid(&args.grid)?;
    let curve = boundary_curve(&grid, args.trunc, args.tol);
    write_atomic(&args.out, &curve.to_csv())?;
    if let Some(svg) = &args.svg {
        write_atomic(svg, &curve.to_svg())?;
    }
    println!(
        "samples {} failures {} lambda in [{}, {}] sup 1/lambda = {}",
        curve.samples.len(),
        curve.failures.len(),
        fmt_f64(curve.min_lambda()),
        fmt_f64(curve.max_lambda()),
        fmt_f64(curve.sup_inverse_lambda())
    );
    for (phi, reason) in curve.failures.iter().take(10) {
        println!("  failed phi = {}: {reason}", fmt_f64(*phi));
    }
    println!("max adjacent slope {}", fmt_f64(curve.max_slope));
    if args.relax {
        for s in curve.samples.iter().take(5) {
            match relax_one_coefficient(s, 40) {
                Some(r) => println!(
                    "  phi = {}: relaxing a_{} to {} lowers lambda to {}",
                    fmt_f64(s.phi),
                    r.index,
                    fmt_f64(r.coefficient),
                    fmt_f64(r.lambda)
                ),
                None => println!("  phi = {}: no improving relaxation", fmt_f64(s.phi)),
            }
        }
    }
    if curve.failures.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(Error::NoRoot(format!("{} grid failures", curve.failures.len())).into())
    }
}

fn cmd_unimodal(args: UnimodalArgs) -> anyhow::Result<ExitCode> {
    let json: PiecewiseLinearMapJson = serde_json::from_str(&fs::read_to_string(&args.map)?)?;
    let pl = PiecewiseLinearMap::from_json(&json)?;
    let laps_input = lap_entropy(&pl, args.n_max.min(14), 4_000_000)?;
    let nf = normalize(&pl)?;
    let report = entropy_cross_check(&nf, args.n_max)?;
    if args.json {
        println!(
            "{}",
            serde_json::json!({
                "case": nf.case,
                "flipped": nf.conjugacy.flipped,
                "trap_lo": nf.conjugacy.a.to_f64(),
                "trap_hi": nf.conjugacy.b.to_f64(),
                "beta": nf.map.beta(),
                "signs": nf.map.signs().entries(),
                "input_laps": laps_input.laps,
                "entropy": report,
            })
        );
    } else {
        println!(
            "normal form: case {} (flipped: {}), signs {:?}",
            nf.case,
            nf.conjugacy.flipped,
            nf.map.signs().entries()
        );
        println!(
            "trapping interval [{}, {}]",
            nf.conjugacy.a, nf.conjugacy.b
        );
        println!("beta = {}  ~ {}", nf.map.beta(), fmt_f64(nf.map.context().beta_f64()));
        println!("lap counts (normal form): {:?}", report.laps);
        println!(
            "entropy: lap estimate {} vs log beta {} (gap {})",
            fmt_f64(report.lap_estimate),
            fmt_f64(report.log_beta),
            fmt_f64(report.gap)
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    let kind = SuiteKind::parse(&args.suite)
        .ok_or_else(|| Error::InvalidInput(format!("unknown suite '{}'", args.suite)))?;
    let reports = run_suites(kind);
    print!("{}", render_reports(&reports));
    if reports.iter().all(|r| r.passed()) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::FAILURE)
    }
}

fn cmd_render(args: RenderArgs) -> anyhow::Result<ExitCode> {
    let records = records_from_csv(&fs::read_to_string(&args.input)?)?;
    write_atomic(&args.out, &records_to_svg(&records))?;
    println!("rendered {} records", records.len());
    Ok(ExitCode::SUCCESS)
}
