//! `hkahler` — batch verification of Kähler potentials and their
//! H-projective partner metrics over point grids, with JSON reports.
//!
//! Exit codes: 0 pass, 1 check failure, 2 parse error, 3 every point
//! degenerate/skipped, 4 potential not in the generalized-equidistant
//! family, 5 invalid family spec.

mod checks;
mod config;
mod pool;
mod report;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hkahler_core::dsl::{parse_potential_file, print as print_expr, ParameterTable, PotentialExpr};
use hkahler_core::families::{
    admissibility, hsc_spread, instantiate, resolve_potential_file, verify_w_equation, FamilyKind,
    FamilySpec,
};
use hkahler_core::hproj::{
    energy_drift, family_shape_residual, hplanarity_residual, integrate_geodesic,
};
use hkahler_core::ChartPoint64;

use checks::{analyze_point, hproject_point, ricci_flat_point_extras, shape_point, PointOutcome};
use config::{parse_point, parse_real_list, GridSpec, RunConfig, DEFAULT_GRID};
use report::{aggregate, print_summary, ConfigEcho, PointRecord, VerificationReport};

const EXIT_CHECK_FAILURE: u8 = 1;
const EXIT_PARSE_ERROR: u8 = 2;
const EXIT_ALL_DEGENERATE: u8 = 3;
const EXIT_NOT_IN_FAMILY: u8 = 4;
const EXIT_BAD_FAMILY: u8 = 5;

#[derive(Parser)]
#[command(
    name = "hkahler",
    version,
    about = "Numerical verification of H-projectively-equivalent Kähler metrics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Pass/fail tolerance on normalized residuals
    #[arg(long = "tol", default_value_t = 1e-8)]
    tolerance: f64,
    /// Minimum jet order (operations raise it automatically as needed)
    #[arg(long = "order", default_value_t = 4)]
    order: usize,
    /// Grid spec: re1lo:hi:n,im1lo:hi:n,re2lo:hi:n,im2lo:hi:n
    #[arg(long = "grid", allow_hyphen_values = true)]
    grid: Option<String>,
    /// Explicit chart point re1,im1,re2,im2 (repeatable; overrides --grid)
    #[arg(long = "point", allow_hyphen_values = true)]
    points: Vec<String>,
    /// Seed for all randomized sampling
    #[arg(long = "seed", default_value_t = 7)]
    seed: u64,
    /// Comma list of ρ values for the Sinyukov tensor
    #[arg(long = "rho", default_value = "1.0", allow_hyphen_values = true)]
    rho: String,
    /// Worker threads for per-point verification
    #[arg(long = "jobs")]
    jobs: Option<usize>,
    /// Write the JSON report here instead of standard output
    #[arg(long = "out")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Metric/curvature identity checks over a grid
    Analyze {
        potential_file: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Full H-projective suite (Sinyukov tensor, partner metric, b-tensor)
    Hproject {
        potential_file: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Geodesic integration and H-planarity of the image curve
    Curve {
        potential_file: PathBuf,
        /// Initial position re1,im1,re2,im2
        #[arg(long = "z0", default_value = "0,0,0,0", allow_hyphen_values = true)]
        z0: String,
        /// Initial velocity re1,im1,re2,im2
        #[arg(long = "v0", default_value = "1,0,0.5,0", allow_hyphen_values = true)]
        v0: String,
        #[arg(long = "t-end", default_value_t = 1.0)]
        t_end: f64,
        #[arg(long = "steps", default_value_t = 1000)]
        steps: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Verify a built-in family (flat, equidistant, generalized-equidistant,
    /// ricci-flat, constant-hsc)
    Family {
        kind: String,
        #[arg(long = "A", allow_negative_numbers = true)]
        a: Option<f64>,
        #[arg(long = "B", allow_negative_numbers = true)]
        b: Option<f64>,
        #[arg(long = "C", allow_negative_numbers = true)]
        c: Option<f64>,
        #[arg(long = "gamma", allow_negative_numbers = true)]
        gamma: Option<f64>,
        #[arg(long = "tau", allow_negative_numbers = true)]
        tau: Option<f64>,
        #[arg(long = "rho-shift", allow_negative_numbers = true)]
        rho_shift: Option<f64>,
        #[arg(long = "eps", allow_negative_numbers = true)]
        eps: Option<f64>,
        /// 𝒲(x) for the generalized family
        #[arg(long = "W")]
        w: Option<String>,
        /// F(z2, zb2) for the generalized/equidistant families
        #[arg(long = "F")]
        f: Option<String>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Emit the resolved grid (with per-family domain skips), no checks
    Grid {
        potential_file: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("hkahler: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn build_config(common: &CommonOpts) -> Result<RunConfig, Failure> {
    let (grid, grid_text) = if !common.points.is_empty() {
        let mut pts = Vec::new();
        for text in &common.points {
            pts.push(
                parse_point(text)
                    .map_err(|e| Failure::new(EXIT_PARSE_ERROR, format!("{e:#}")))?,
            );
        }
        (GridSpec::from_points(pts), format!("points:{}", common.points.join(";")))
    } else {
        let text = common.grid.clone().unwrap_or_else(|| DEFAULT_GRID.to_string());
        (
            GridSpec::parse(&text).map_err(|e| Failure::new(EXIT_PARSE_ERROR, format!("{e:#}")))?,
            text,
        )
    };
    let rho = parse_real_list(&common.rho)
        .map_err(|e| Failure::new(EXIT_PARSE_ERROR, format!("{e:#}")))?;
    let cfg = RunConfig {
        tolerance: common.tolerance,
        jet_order: common.order,
        seed: common.seed,
        rho,
        jobs: common
            .jobs
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
        grid,
        grid_text,
    };
    cfg.validate()
        .map_err(|e| Failure::new(EXIT_PARSE_ERROR, format!("{e:#}")))?;
    Ok(cfg)
}

struct LoadedPotential {
    phi: PotentialExpr,
    params: ParameterTable,
    kind: Option<FamilyKind>,
    source: String,
}

fn load_potential(path: &PathBuf) -> Result<LoadedPotential, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_PARSE_ERROR, format!("{}: {e}", path.display())))?;
    let file = parse_potential_file(&text)
        .map_err(|e| Failure::new(EXIT_PARSE_ERROR, format!("{}: {e}", path.display())))?;
    let (phi, params, kind) = resolve_potential_file(&file)
        .map_err(|e| Failure::new(EXIT_BAD_FAMILY, format!("{}: {e}", path.display())))?;
    Ok(LoadedPotential {
        phi,
        params,
        kind,
        source: text,
    })
}

fn config_echo(cfg: &RunConfig) -> ConfigEcho {
    ConfigEcho {
        tolerance: cfg.tolerance,
        jet_order: cfg.jet_order,
        seed: cfg.seed,
        rho: cfg.rho.clone(),
        jobs: cfg.jobs,
        grid: cfg.grid_text.clone(),
    }
}

fn emit(report: &VerificationReport, out: &Option<PathBuf>) -> Result<(), Failure> {
    print_summary(report);
    let json = serde_json::to_string_pretty(report)
        .map_err(|e| Failure::new(EXIT_CHECK_FAILURE, format!("report serialization: {e}")))?;
    match out {
        Some(path) => std::fs::write(path, json.as_bytes())
            .map_err(|e| Failure::new(EXIT_CHECK_FAILURE, format!("{}: {e}", path.display())))?,
        None => println!("{json}"),
    }
    Ok(())
}

fn exit_code_for(report: &VerificationReport) -> u8 {
    let evaluated = report.points.iter().any(|r| r.skipped.is_none());
    if !report.points.is_empty() && !evaluated {
        return EXIT_ALL_DEGENERATE;
    }
    if report.aggregate.verdict == "pass" {
        0
    } else {
        EXIT_CHECK_FAILURE
    }
}

/// Grid points with family-domain skips applied up front.
fn domain_filtered(
    cfg: &RunConfig,
    kind: Option<FamilyKind>,
    params: &ParameterTable,
) -> Vec<(ChartPoint64, Option<String>)> {
    cfg.grid
        .points()
        .into_iter()
        .map(|p| {
            let skip = kind.and_then(|k| admissibility(k, params, &p));
            (p, skip)
        })
        .collect()
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Analyze {
            potential_file,
            common,
        } => {
            let cfg = build_config(&common)?;
            let loaded = load_potential(&potential_file)?;
            let report = run_analyze(&loaded, &cfg, "analyze");
            emit(&report, &common.out)?;
            Ok(exit_code_for(&report))
        }
        Command::Hproject {
            potential_file,
            common,
        } => {
            let cfg = build_config(&common)?;
            let loaded = load_potential(&potential_file)?;
            let report = run_hproject(&loaded, &cfg, "hproject")?;
            emit(&report, &common.out)?;
            Ok(exit_code_for(&report))
        }
        Command::Curve {
            potential_file,
            z0,
            v0,
            t_end,
            steps,
            common,
        } => {
            let cfg = build_config(&common)?;
            let loaded = load_potential(&potential_file)?;
            let z0 = parse_point(&z0)
                .map_err(|e| Failure::new(EXIT_PARSE_ERROR, format!("{e:#}")))?;
            let v0 = parse_point(&v0)
                .map_err(|e| Failure::new(EXIT_PARSE_ERROR, format!("{e:#}")))?;
            if steps < 2 {
                return Err(Failure::new(EXIT_PARSE_ERROR, "steps must be at least 2"));
            }
            let (report, truncated) = run_curve(&loaded, &cfg, z0, v0, t_end, steps)?;
            emit(&report, &common.out)?;
            if truncated {
                return Ok(EXIT_CHECK_FAILURE);
            }
            Ok(exit_code_for(&report))
        }
        Command::Family {
            kind,
            a,
            b,
            c,
            gamma,
            tau,
            rho_shift,
            eps,
            w,
            f,
            common,
        } => {
            let cfg = build_config(&common)?;
            let Some(kind) = FamilyKind::parse(&kind) else {
                return Err(Failure::new(
                    EXIT_BAD_FAMILY,
                    format!("unknown family kind `{kind}`"),
                ));
            };
            let mut spec = FamilySpec::new(kind);
            for (name, value) in [
                ("A", a),
                ("B", b),
                ("C", c),
                ("gamma", gamma),
                ("tau", tau),
                ("rho_shift", rho_shift),
                ("eps", eps),
            ] {
                if let Some(v) = value {
                    spec.params.set(name, v);
                }
            }
            spec.w_source = w;
            spec.f_source = f;
            let report = run_family(&spec, &cfg)?;
            emit(&report, &common.out)?;
            Ok(exit_code_for(&report))
        }
        Command::Grid {
            potential_file,
            common,
        } => {
            let cfg = build_config(&common)?;
            let (kind, params, source) = match potential_file {
                Some(path) => {
                    let loaded = load_potential(&path)?;
                    (loaded.kind, loaded.params, loaded.source)
                }
                None => (None, ParameterTable::new(), String::new()),
            };
            let points = domain_filtered(&cfg, kind, &params);
            let records: Vec<PointRecord> = points
                .iter()
                .enumerate()
                .map(|(i, (p, skip))| match skip {
                    Some(reason) => PointRecord::skipped(i, p, reason.clone()),
                    None => PointRecord::new(i, p),
                })
                .collect();
            let agg = aggregate(
                &records,
                &BTreeMap::new(),
                BTreeMap::new(),
                BTreeMap::new(),
                cfg.tolerance,
            );
            let report = VerificationReport {
                schema: report::SCHEMA_VERSION,
                tool_version: env!("CARGO_PKG_VERSION"),
                command: "grid".into(),
                potential_source: source,
                config: config_echo(&cfg),
                points: records,
                aggregate: agg,
            };
            emit(&report, &common.out)?;
            Ok(0)
        }
    }
}

fn outcome_into_record(
    outcome: PointOutcome,
    mut rec: PointRecord,
) -> (PointRecord, Option<f64>) {
    match outcome {
        PointOutcome::Checked {
            residuals,
            skipped_checks,
            kappa,
        } => {
            rec.residuals = residuals;
            rec.skipped_checks = skipped_checks;
            (rec, kappa)
        }
        PointOutcome::Skipped(reason) => {
            rec.skipped = Some(reason);
            (rec, None)
        }
    }
}

fn run_analyze(loaded: &LoadedPotential, cfg: &RunConfig, command: &str) -> VerificationReport {
    let points = domain_filtered(cfg, loaded.kind, &loaded.params);
    let records = pool::run_indexed(points.len(), cfg.jobs, |i| {
        let (p, skip) = &points[i];
        if let Some(reason) = skip {
            return (PointRecord::skipped(i, p, reason.clone()), None);
        }
        let outcome = analyze_point(&loaded.phi, &loaded.params, p, cfg.tolerance);
        outcome_into_record(outcome, PointRecord::new(i, p))
    });
    let mut notes = BTreeMap::new();
    if let Some((_, Some(kappa))) = records.iter().find(|(r, _)| r.skipped.is_none()) {
        notes.insert("kappa_at_first_point".to_string(), *kappa);
    }
    let records: Vec<PointRecord> = records.into_iter().map(|(r, _)| r).collect();

    // the Einstein checks are verdict-relevant only when the declared
    // family carries that expectation
    let mut informational = BTreeMap::new();
    let einstein_expected = matches!(
        loaded.kind,
        Some(FamilyKind::Flat | FamilyKind::RicciFlat | FamilyKind::ConstantHsc)
    );
    let ricci_flat_expected = matches!(loaded.kind, Some(FamilyKind::Flat | FamilyKind::RicciFlat));
    if !einstein_expected {
        informational.insert(
            "einstein_defect".to_string(),
            "no declared Einstein expectation for this potential".to_string(),
        );
    }
    if !ricci_flat_expected {
        informational.insert(
            "ricci_flat".to_string(),
            "no declared Ricci-flat expectation for this potential".to_string(),
        );
    }
    let agg = aggregate(&records, &BTreeMap::new(), informational, notes, cfg.tolerance);
    VerificationReport {
        schema: report::SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        command: command.to_string(),
        potential_source: loaded.source.clone(),
        config: config_echo(cfg),
        points: records,
        aggregate: agg,
    }
}

/// Gate: the potential must be of generalized-equidistant shape over the
/// admissible grid, else exit 4.
fn family_gate(loaded: &LoadedPotential, cfg: &RunConfig) -> Result<(), Failure> {
    let points = domain_filtered(cfg, loaded.kind, &loaded.params);
    let mut max_residual: f64 = 0.0;
    let mut evaluated = 0usize;
    for (p, skip) in &points {
        if skip.is_some() {
            continue;
        }
        match family_shape_residual(&loaded.phi, &loaded.params, p) {
            Ok(r) => {
                evaluated += 1;
                max_residual = max_residual.max(r);
            }
            Err(_) => continue,
        }
    }
    if evaluated == 0 {
        return Err(Failure::new(
            EXIT_ALL_DEGENERATE,
            "no admissible grid point could be evaluated",
        ));
    }
    if max_residual > cfg.tolerance {
        return Err(Failure::new(
            EXIT_NOT_IN_FAMILY,
            format!(
                "potential is not of generalized-equidistant shape (Killing residual = {max_residual:.3e})"
            ),
        ));
    }
    Ok(())
}

fn run_hproject(
    loaded: &LoadedPotential,
    cfg: &RunConfig,
    command: &str,
) -> Result<VerificationReport, Failure> {
    family_gate(loaded, cfg)?;
    let points = domain_filtered(cfg, loaded.kind, &loaded.params);
    // one record per (ρ, point), ρ-major so records stay grouped
    let tasks: Vec<(f64, usize)> = cfg
        .rho
        .iter()
        .flat_map(|rho| (0..points.len()).map(move |i| (*rho, i)))
        .collect();
    let records = pool::run_indexed(tasks.len(), cfg.jobs, |t| {
        let (rho, i) = tasks[t];
        let (p, skip) = &points[i];
        let mut rec = PointRecord::new(t, p);
        rec.rho = Some(rho);
        if let Some(reason) = skip {
            rec.skipped = Some(reason.clone());
            return rec;
        }
        let outcome = hproject_point(&loaded.phi, &loaded.params, rho, p, cfg.tolerance);
        outcome_into_record(outcome, rec).0
    });
    let agg = aggregate(
        &records,
        &BTreeMap::new(),
        BTreeMap::new(),
        BTreeMap::new(),
        cfg.tolerance,
    );
    Ok(VerificationReport {
        schema: report::SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        command: command.to_string(),
        potential_source: loaded.source.clone(),
        config: config_echo(cfg),
        points: records,
        aggregate: agg,
    })
}

fn run_curve(
    loaded: &LoadedPotential,
    cfg: &RunConfig,
    z0: ChartPoint64,
    v0: ChartPoint64,
    t_end: f64,
    steps: usize,
) -> Result<(VerificationReport, bool), Failure> {
    family_gate(loaded, cfg)?;
    let rho = cfg.rho[0];
    let start = [z0.z1, z0.z2];
    let velocity = [v0.z1, v0.z2];
    let curve = integrate_geodesic(&loaded.phi, &loaded.params, start, velocity, t_end, steps)
        .map_err(|e| Failure::new(EXIT_CHECK_FAILURE, e.to_string()))?;
    let truncated = curve.truncated.clone();

    let mut rec = PointRecord::new(0, &z0);
    rec.rho = Some(rho);
    match energy_drift(&curve, &loaded.phi, &loaded.params) {
        Ok(drift) => {
            rec.residuals.insert("energy_drift".into(), drift);
        }
        Err(e) => {
            rec.skipped_checks.insert("energy_drift".into(), e.to_string());
        }
    }
    match hplanarity_residual(&curve, &loaded.phi, &loaded.params, rho) {
        Ok(defect) => {
            rec.residuals.insert("hplanarity".into(), defect);
        }
        Err(e) => {
            rec.skipped_checks.insert("hplanarity".into(), e.to_string());
        }
    }
    if let Some(reason) = &truncated {
        rec.skipped_checks
            .insert("trajectory".into(), format!("truncated: {reason}"));
    }
    let mut notes = BTreeMap::new();
    notes.insert("samples".to_string(), curve.samples.len() as f64);
    let records = vec![rec];
    let agg = aggregate(&records, &BTreeMap::new(), BTreeMap::new(), notes, cfg.tolerance);
    Ok((
        VerificationReport {
            schema: report::SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION"),
            command: "curve".to_string(),
            potential_source: loaded.source.clone(),
            config: config_echo(cfg),
            points: records,
            aggregate: agg,
        },
        truncated.is_some(),
    ))
}

fn run_family(spec: &FamilySpec, cfg: &RunConfig) -> Result<VerificationReport, Failure> {
    let (phi, params) = instantiate(spec)
        .map_err(|e| Failure::new(EXIT_BAD_FAMILY, format!("invalid family spec: {e}")))?;
    let mut source = format!("family = {}\n", spec.kind.name());
    for (name, value) in params.iter() {
        source.push_str(&format!("param {name} = {value}\n"));
    }
    source.push_str(&format!("phi = {}\n", print_expr(&phi)));
    let loaded = LoadedPotential {
        phi,
        params,
        kind: Some(spec.kind),
        source,
    };

    match spec.kind {
        FamilyKind::Flat => Ok(run_analyze(&loaded, cfg, "family")),
        FamilyKind::Equidistant | FamilyKind::GeneralizedEquidistant => {
            let mut report = run_hproject(&loaded, cfg, "family")?;
            report.command = "family".to_string();
            Ok(report)
        }
        FamilyKind::RicciFlat => {
            let points = domain_filtered(cfg, loaded.kind, &loaded.params);
            let records = pool::run_indexed(points.len(), cfg.jobs, |i| {
                let (p, skip) = &points[i];
                if let Some(reason) = skip {
                    return PointRecord::skipped(i, p, reason.clone());
                }
                let mut rec = PointRecord::new(i, p);
                match analyze_point(&loaded.phi, &loaded.params, p, cfg.tolerance) {
                    PointOutcome::Checked {
                        residuals,
                        skipped_checks,
                        ..
                    } => {
                        rec.residuals = residuals;
                        rec.skipped_checks = skipped_checks;
                    }
                    PointOutcome::Skipped(reason) => {
                        rec.skipped = Some(reason);
                        return rec;
                    }
                }
                let mut residuals = std::mem::take(&mut rec.residuals);
                let mut skipped = std::mem::take(&mut rec.skipped_checks);
                ricci_flat_point_extras(
                    &loaded.phi,
                    &loaded.params,
                    p,
                    cfg.tolerance,
                    &mut residuals,
                    &mut skipped,
                );
                if let Err(reason) =
                    shape_point(&loaded.phi, &loaded.params, p, cfg.tolerance, &mut residuals)
                {
                    skipped.insert("killing".into(), reason);
                }
                rec.residuals = residuals;
                rec.skipped_checks = skipped;
                rec
            });
            // run-level: the 𝒲 ordinary differential equation
            let a = loaded.params.get_or("A", 1.0);
            let b = loaded.params.get_or("B", 0.0);
            let mut run_level = BTreeMap::new();
            let xs = [0.5f64, 1.0, 2.0];
            match verify_w_equation::<f64>(a, b, &xs) {
                Ok(r) => {
                    run_level.insert("w_equation".to_string(), r / (9.0 * a * a / 8.0));
                }
                Err(e) => {
                    return Err(Failure::new(EXIT_BAD_FAMILY, e.to_string()));
                }
            }
            let agg = aggregate(
                &records,
                &run_level,
                BTreeMap::new(),
                BTreeMap::new(),
                cfg.tolerance,
            );
            Ok(VerificationReport {
                schema: report::SCHEMA_VERSION,
                tool_version: env!("CARGO_PKG_VERSION"),
                command: "family".to_string(),
                potential_source: loaded.source.clone(),
                config: config_echo(cfg),
                points: records,
                aggregate: agg,
            })
        }
        FamilyKind::ConstantHsc => {
            let points = domain_filtered(cfg, loaded.kind, &loaded.params);
            let records = pool::run_indexed(points.len(), cfg.jobs, |i| {
                let (p, skip) = &points[i];
                if let Some(reason) = skip {
                    return PointRecord::skipped(i, p, reason.clone());
                }
                let mut rec = PointRecord::new(i, p);
                let mut residuals = BTreeMap::new();
                match shape_point(&loaded.phi, &loaded.params, p, cfg.tolerance, &mut residuals) {
                    Ok(()) => {
                        rec.residuals = residuals;
                    }
                    Err(reason) => {
                        rec.skipped = Some(reason);
                    }
                }
                rec
            });
            let eps = loaded.params.get_or("eps", 1.0);
            let (mean, spread) = hsc_spread::<f64>(&loaded.phi, &loaded.params, Some(eps), 100, cfg.seed)
                .map_err(|e| Failure::new(EXIT_BAD_FAMILY, e.to_string()))?;
            let mut run_level = BTreeMap::new();
            run_level.insert("hsc_spread".to_string(), spread);
            let mut notes = BTreeMap::new();
            notes.insert("hsc_constant".to_string(), mean);
            let agg = aggregate(&records, &run_level, BTreeMap::new(), notes, cfg.tolerance);
            Ok(VerificationReport {
                schema: report::SCHEMA_VERSION,
                tool_version: env!("CARGO_PKG_VERSION"),
                command: "family".to_string(),
                potential_source: loaded.source.clone(),
                config: config_echo(cfg),
                points: records,
                aggregate: agg,
            })
        }
    }
}
