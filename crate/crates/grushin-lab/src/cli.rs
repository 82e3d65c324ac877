//! Command-line front end.
//!
//! Subcommands wire configuration to the library: `geom` (structure and
//! volume checks), `barrier` (subsolution, well and ring barriers), `solve`
//! (one Dirichlet problem with CSV output), `abp` (envelope/mass pipeline)
//! and `lab` (experiment sweeps from a JSON plan).
//!
//! Every run writes one directory under the output root (flag `--out`, else
//! `$GRUSHIN_LAB_OUT`, else `./runs`), named by the hash of the resolved
//! configuration: `manifest.json`, `report.json`, `summary.csv`, a
//! `timing.json` sidecar with wall times, and per-solve CSV artifacts.
//! Re-running an identical configuration reproduces `report.json` byte for
//! byte; only the sidecar changes.
//!
//! Exit status: 0 when every verdict passes, 2 on verdict failure, 1 on
//! usage or configuration errors.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::barriers::{
    extremal_exponent, log_radial_samples, ring_barrier_check, verify_subsolution,
    well_barrier_check, BarrierSpec,
};
use crate::fields::{make_field, CoefficientField, FieldDescriptor, FieldKind};
use crate::geometry::structure::{structure_check, StructureKind};
use crate::geometry::volume::{measured_doubling_constant, ring_deficit, ring_deficit_rate_bound};
use crate::geometry::{rho, Point};
use crate::grid::{Grid, GridFunction};
use crate::lab::{standard_plan, sweep, ExperimentKind, SweepItem, SweepPlan};
use crate::report::{write_summary_csv, ExperimentReport};
use crate::solver::{discretize, solve_dirichlet};
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "grushin-lab", version, about = "Numerical laboratory for a degenerate elliptic operator on Grushin vector fields", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Geometry checks: structure-theorem inclusions, doubling, ring bound
    Geom {
        #[command(subcommand)]
        action: GeomAction,
    },
    /// Barrier checks: subsolution property, well and ring barriers
    Barrier {
        #[command(subcommand)]
        action: BarrierAction,
    },
    /// Solve one Dirichlet problem and export CSV artifacts
    Solve(SolveArgs),
    /// Convex envelope, Monge–Ampère mass and weighted estimate pipeline
    Abp(AbpArgs),
    /// Experiment families over sweeps of fields, centers, scales and seeds
    Lab(LabArgs),
}

#[derive(Subcommand, Debug)]
enum GeomAction {
    /// Run the inclusion and comparability checks at one center/radius
    Verify(GeomArgs),
}

#[derive(Subcommand, Debug)]
enum BarrierAction {
    /// Verify the differential inequalities at one center/radius
    Verify(BarrierArgs),
}

fn parse_center(s: &str) -> std::result::Result<Point, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected x1,x2 but got `{s}`"));
    }
    let x1: f64 = parts[0].trim().parse().map_err(|e| format!("{e}"))?;
    let x2: f64 = parts[1].trim().parse().map_err(|e| format!("{e}"))?;
    Ok(Point::new(x1, x2))
}

#[derive(Args, Debug, Clone, Serialize)]
struct CommonArgs {
    /// Output root; defaults to $GRUSHIN_LAB_OUT, then ./runs
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for sampling and boundary data
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
struct GeomArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Center as x1,x2
    #[arg(long, value_parser = parse_center, default_value = "0,0")]
    center: Point,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Sample count per inclusion check
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
struct BarrierArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long = "big-lambda", default_value_t = 1.0)]
    big_lambda: f64,
    #[arg(long, value_parser = parse_center, default_value = "1,0")]
    center: Point,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Coefficient field kind: identity|constant|rotating|checkerboard|random-smooth
    #[arg(long, default_value = "rotating")]
    field: String,
}

#[derive(Args, Debug, Clone, Serialize)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long = "big-lambda", default_value_t = 1.0)]
    big_lambda: f64,
    #[arg(long = "grid-n", default_value_t = 97)]
    grid_n: usize,
    #[arg(long, default_value = "identity")]
    field: String,
    /// Boundary data family: fundamental|affine|constant
    #[arg(long, default_value = "fundamental")]
    boundary: String,
}

#[derive(Args, Debug, Clone, Serialize)]
struct AbpArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long = "big-lambda", default_value_t = 1.0)]
    big_lambda: f64,
    #[arg(long = "grid-n", default_value_t = 65)]
    grid_n: usize,
    #[arg(long, default_value = "identity")]
    field: String,
}

#[derive(Args, Debug, Clone, Serialize)]
struct LabArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Experiment family
    #[arg(value_enum)]
    experiment: LabExperiment,
    /// Sweep plan JSON; flags override its scalar fields
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long = "big-lambda")]
    big_lambda: Option<f64>,
    /// Single center x1,x2 replacing the plan's offset list
    #[arg(long, value_parser = parse_center)]
    center: Option<Point>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long = "grid-n")]
    grid_n: Option<usize>,
    /// Single field kind replacing the plan's field list
    #[arg(long)]
    field: Option<String>,
    /// Unused by lab sweeps; accepted for flag uniformity
    #[arg(long)]
    samples: Option<usize>,
    /// Concurrent sweep workers
    #[arg(long, default_value_t = 2)]
    jobs: usize,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum LabExperiment {
    CriticalDensity,
    DoubleBall,
    PowerDecay,
    Harnack,
}

impl From<LabExperiment> for ExperimentKind {
    fn from(e: LabExperiment) -> ExperimentKind {
        match e {
            LabExperiment::CriticalDensity => ExperimentKind::CriticalDensity,
            LabExperiment::DoubleBall => ExperimentKind::DoubleBall,
            LabExperiment::PowerDecay => ExperimentKind::PowerDecay,
            LabExperiment::Harnack => ExperimentKind::Harnack,
        }
    }
}

fn field_from_name(name: &str, lambda: f64, big_lambda: f64, seed: u64) -> Result<FieldDescriptor> {
    let kind = match name {
        "identity" => FieldKind::Identity,
        "constant" => FieldKind::Constant { a11: big_lambda, a12: 0.0, a22: lambda },
        "rotating" => FieldKind::Rotating { theta_max: 0.05, frequency: 1.3 },
        "checkerboard" => FieldKind::Checkerboard { cell: 0.5 },
        "random-smooth" | "random_smooth" => FieldKind::RandomSmooth { modes: 3 },
        other => {
            return Err(Error::InvalidParameter(format!("unknown field kind `{other}`")));
        }
    };
    Ok(FieldDescriptor::new(kind, lambda, big_lambda, seed))
}

/// Everything that identifies a run; the hash covers the full resolved
/// configuration.
#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config_path: Option<String>,
    pub config_hash: String,
    pub seed: u64,
    pub out_dir: String,
    pub tool_version: String,
}

#[derive(Serialize)]
struct RunReport<'a> {
    command: &'a str,
    aggregate: Option<&'a ExperimentReport>,
    runs: &'a [ExperimentReport],
    failures: &'a [String],
}

fn out_root(cli_out: &Option<PathBuf>) -> PathBuf {
    cli_out
        .clone()
        .or_else(|| std::env::var_os("GRUSHIN_LAB_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("runs"))
}

fn config_hash<T: Serialize>(command: &str, cfg: &T) -> Result<String> {
    let body = serde_json::to_string(cfg)?;
    let mut hasher = Sha256::new();
    hasher.update(command.as_bytes());
    hasher.update(b"\n");
    hasher.update(body.as_bytes());
    let digest = hasher.finalize();
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

struct RunWriter {
    dir: PathBuf,
    manifest: RunManifest,
}

impl RunWriter {
    fn create<T: Serialize>(
        command: &str,
        root: &Path,
        config_path: Option<&Path>,
        seed: u64,
        resolved: &T,
    ) -> Result<RunWriter> {
        let hash = config_hash(command, resolved)?;
        let dir = root.join(format!("{}-{}", command.replace(' ', "-"), &hash[..12]));
        fs::create_dir_all(&dir)?;
        let manifest = RunManifest {
            command: command.to_string(),
            config_path: config_path.map(|p| p.display().to_string()),
            config_hash: hash,
            seed,
            out_dir: dir.display().to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        };
        fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)? + "\n")?;
        Ok(RunWriter { dir, manifest })
    }

    fn finish(
        &self,
        command: &str,
        aggregate: Option<&ExperimentReport>,
        runs: &[ExperimentReport],
        failures: &[String],
    ) -> Result<()> {
        let report = RunReport { command, aggregate, runs, failures };
        fs::write(self.dir.join("report.json"), serde_json::to_string_pretty(&report)? + "\n")?;
        let mut csv = Vec::new();
        write_summary_csv(runs, &mut csv)?;
        fs::write(self.dir.join("summary.csv"), csv)?;
        // timestamps and wall times live outside the deterministic report
        let mut timing: BTreeMap<String, f64> = BTreeMap::new();
        for (i, r) in runs.iter().enumerate() {
            if let Some(t) = r.wall_time {
                timing.insert(format!("{i:04}_{}", r.name), t.as_secs_f64());
            }
        }
        let sidecar = serde_json::json!({
            "generated_unix_ms": std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_millis() as u64)
                .unwrap_or(0),
            "wall_times_s": timing,
        });
        fs::write(self.dir.join("timing.json"), serde_json::to_string_pretty(&sidecar)? + "\n")?;
        Ok(())
    }
}

fn run_geom(args: &GeomArgs) -> Result<(RunWriter, Vec<ExperimentReport>)> {
    let root = out_root(&args.common.out);
    let writer = RunWriter::create("geom-verify", &root, None, args.common.seed, args)?;
    let mut reports = Vec::new();
    for kind in [StructureKind::Charact, StructureKind::Equiv, StructureKind::Frla] {
        let samples = if kind == StructureKind::Frla {
            args.samples.min(2000)
        } else {
            args.samples
        };
        reports.push(structure_check(kind, args.center, args.radius, samples, args.common.seed)?);
    }
    // doubling constant and ring bound over an offset sweep
    let offsets: Vec<f64> = (-6..=6).map(|k| 10f64.powf(k as f64 / 2.0)).collect();
    let mut vol = ExperimentReport::new("volume_checks", args.common.seed);
    vol.record("doubling_constant", measured_doubling_constant(&offsets)?);
    let mut worst_rate = 0.0f64;
    for &s in &offsets {
        let y = Point::new(s, 0.0);
        for eps in [0.1, 0.01, 0.001] {
            let rate = ring_deficit(y, 1.0, eps)? / eps;
            worst_rate = worst_rate.max(rate / ring_deficit_rate_bound(y, 1.0)?);
        }
    }
    vol.record("ring_rate_vs_bound", worst_rate);
    vol.judge("doubling_finite", vol.measurement("doubling_constant").unwrap().is_finite(),
        vol.measurement("doubling_constant").unwrap(), f64::MAX, "doubling constant measured");
    vol.judge("ring_rate_bounded", worst_rate <= 1.0 + 1e-9, worst_rate, 1.0,
        "deficit rate stays below the explicit bound");
    reports.push(vol);
    Ok((writer, reports))
}

fn run_barrier(args: &BarrierArgs) -> Result<(RunWriter, Vec<ExperimentReport>)> {
    let root = out_root(&args.common.out);
    let writer = RunWriter::create("barrier-verify", &root, None, args.common.seed, args)?;
    let descriptor = field_from_name(&args.field, args.lambda, args.big_lambda, args.common.seed)?;
    let field = make_field(&descriptor)?;
    let alpha = extremal_exponent(field.declared());
    let spec = BarrierSpec { exponent: alpha, center: args.center, radius: args.radius };
    let points = log_radial_samples(
        args.center,
        1e-3 * args.radius,
        3.0 * args.radius,
        args.samples,
        args.common.seed,
    );
    let reports = vec![
        verify_subsolution(&field, &spec, &points),
        well_barrier_check(&field, args.center, args.radius, args.samples, args.common.seed),
        ring_barrier_check(&field, args.center, args.radius, args.samples, args.common.seed),
    ];
    Ok((writer, reports))
}

fn write_field_csv(dir: &Path, grid: &std::sync::Arc<Grid>, field: &CoefficientField) -> Result<()> {
    let mut out = String::from("x1,x2,a11,a12,a22\n");
    for j in 0..grid.n2 {
        for i in 0..grid.n1 {
            let p = grid.node(i, j);
            let a = field.evaluate(p);
            out.push_str(&format!("{},{},{},{},{}\n", p.x1, p.x2, a.a11, a.a12, a.a22));
        }
    }
    fs::write(dir.join("field.csv"), out)?;
    Ok(())
}

fn run_solve(args: &SolveArgs) -> Result<(RunWriter, Vec<ExperimentReport>)> {
    let root = out_root(&args.common.out);
    let writer = RunWriter::create("solve", &root, None, args.common.seed, args)?;
    let descriptor = field_from_name(&args.field, args.lambda, args.big_lambda, args.common.seed)?;
    let field = make_field(&descriptor)?;
    let mut report = ExperimentReport::new("solve", args.common.seed).with_config(args);
    let origin = Point::new(0.0, 0.0);
    let (grid, boundary, exact): (std::sync::Arc<Grid>, GridFunction, Option<Box<dyn Fn(Point) -> f64>>) =
        match args.boundary.as_str() {
            "fundamental" => {
                // annular box around the pole of the fundamental solution
                let hole = 0.5;
                let g = std::sync::Arc::new(Grid::masked(
                    (-1.5, 1.5),
                    (-1.5, 1.5),
                    args.grid_n,
                    args.grid_n,
                    move |p| p.x1.abs() > hole || p.x2.abs() > hole,
                )?);
                let gamma = move |p: Point| 1.0 / rho(p, origin);
                let b = GridFunction::from_fn(g.clone(), gamma);
                (g, b, Some(Box::new(gamma)))
            }
            "affine" => {
                let g = std::sync::Arc::new(Grid::rectangle((-1.0, 1.0), (-1.0, 1.0), args.grid_n, args.grid_n)?);
                let f = |p: Point| 0.25 + 2.0 * p.x1 - 3.0 * p.x2;
                let b = GridFunction::from_fn(g.clone(), f);
                (g, b, Some(Box::new(f)))
            }
            "constant" => {
                let g = std::sync::Arc::new(Grid::rectangle((-1.0, 1.0), (-1.0, 1.0), args.grid_n, args.grid_n)?);
                let b = GridFunction::from_fn(g.clone(), |_| 1.0);
                (g, b, Some(Box::new(|_| 1.0)))
            }
            other => {
                return Err(Error::InvalidParameter(format!("unknown boundary family `{other}`")))
            }
        };
    let rhs = GridFunction::zeros(grid.clone());
    let system = discretize(&grid, &field);
    let diags = system.diagnostics();
    let u = system.solve(&boundary, &rhs)?;
    report.record("unknowns", system.n_unknowns() as f64);
    report.record("flagged_rows", (diags.rows - diags.positive_type_rows) as f64);
    if let Some(exact) = exact {
        let mut err = 0.0f64;
        for (k, &v) in u.values().iter().enumerate() {
            let (i, j) = grid.coords(k);
            if grid.is_interior(i, j) {
                err = err.max((v - exact(grid.node(i, j))).abs());
            }
        }
        report.record("interior_max_error", err);
        let h = grid.h_max();
        let tolerance = match args.boundary.as_str() {
            "fundamental" => 5.0 * h * h * boundary.max_abs(),
            _ => 1e-9,
        };
        report.judge("matches_closed_form", err <= tolerance, err, tolerance,
            "interior nodes match the closed-form data");
    }
    u.write_csv(fs::File::create(writer.dir.join("solution.csv"))?)?;
    write_field_csv(&writer.dir, &grid, &field)?;
    Ok((writer, vec![report]))
}

fn run_abp(args: &AbpArgs) -> Result<(RunWriter, Vec<ExperimentReport>)> {
    let root = out_root(&args.common.out);
    let writer = RunWriter::create("abp", &root, None, args.common.seed, args)?;
    let descriptor = field_from_name(&args.field, args.lambda, args.big_lambda, args.common.seed)?;
    let field = make_field(&descriptor)?;
    let grid = std::sync::Arc::new(Grid::rectangle((-1.0, 1.0), (-1.0, 1.0), args.grid_n, args.grid_n)?);
    let boundary = GridFunction::zeros(grid.clone());
    let rhs = GridFunction::from_fn(grid.clone(), |p| p.x1 * p.x1);
    let f_rhs = GridFunction::from_fn(grid.clone(), |_| 1.0);
    let u = solve_dirichlet(&grid, &field, &boundary, &rhs)?;
    let omega: Vec<bool> = (0..grid.n_nodes()).map(|k| grid.is_interior_idx(k)).collect();
    let weighted = crate::abp::weighted_abp_check(&u, &f_rhs, &field, &omega)?;
    let classical = crate::abp::classical_abp_check(&u, &omega)?;
    let env = crate::envelope::convex_envelope(&u)?;
    env.write_csv(&u, fs::File::create(writer.dir.join("envelope.csv"))?)?;
    Ok((writer, vec![weighted, classical]))
}

fn apply_lab_overrides(plan: &mut SweepPlan, args: &LabArgs) -> Result<()> {
    if let Some(radius) = args.radius {
        plan.radius = radius;
    }
    if let Some(eta) = args.eta {
        plan.eta = eta;
    }
    if let Some(theta) = args.theta {
        plan.theta = theta;
    }
    if let Some(grid_n) = args.grid_n {
        plan.grid_n = grid_n;
    }
    if let Some(center) = args.center {
        plan.offsets = vec![center.x1 / plan.radius];
        plan.center_x2 = center.x2;
    }
    if args.field.is_some() || args.lambda.is_some() || args.big_lambda.is_some() {
        let lambda = args.lambda.unwrap_or(1.0);
        let big_lambda = args.big_lambda.unwrap_or(lambda.max(1.0));
        let name = args.field.as_deref().unwrap_or("identity");
        plan.fields = vec![field_from_name(name, lambda, big_lambda, args.common.seed)?];
    }
    Ok(())
}

fn run_lab(args: &LabArgs) -> Result<(RunWriter, Option<ExperimentReport>, Vec<ExperimentReport>, Vec<String>)> {
    let kind: ExperimentKind = args.experiment.into();
    let mut plan = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
            let mut plan: SweepPlan = serde_json::from_str(&text)
                .map_err(|e| Error::InvalidParameter(format!("malformed sweep config: {e}")))?;
            plan.experiment = kind;
            plan
        }
        None => {
            let mut plan = standard_plan(kind, 61);
            plan.seeds = vec![args.common.seed];
            plan
        }
    };
    apply_lab_overrides(&mut plan, args)?;
    let configs = plan.expand();
    for cfg in &configs {
        cfg.validate()?;
    }
    let root = out_root(&args.common.out);
    let command = format!("lab-{}", kind.name().replace('_', "-"));
    let writer = RunWriter::create(&command, &root, args.config.as_deref(), args.common.seed, &plan)?;
    let (items, aggregate) = sweep(&configs, args.jobs);
    let mut runs = Vec::new();
    let mut failures = Vec::new();
    for item in items {
        match item {
            SweepItem::Done(r) => runs.push(r),
            SweepItem::Failed(e) => failures.push(e.to_string()),
        }
    }
    Ok((writer, Some(aggregate), runs, failures))
}

/// Parses `args` and runs the requested command. Returns the process exit
/// code: 0 all verdicts pass, 1 usage/config error, 2 verdict failure.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let outcome: Result<(RunWriter, Option<ExperimentReport>, Vec<ExperimentReport>, Vec<String>)> =
        match &cli.command {
            Command::Geom { action: GeomAction::Verify(args) } => {
                run_geom(args).map(|(w, r)| (w, None, r, Vec::new()))
            }
            Command::Barrier { action: BarrierAction::Verify(args) } => {
                run_barrier(args).map(|(w, r)| (w, None, r, Vec::new()))
            }
            Command::Solve(args) => run_solve(args).map(|(w, r)| (w, None, r, Vec::new())),
            Command::Abp(args) => run_abp(args).map(|(w, r)| (w, None, r, Vec::new())),
            Command::Lab(args) => run_lab(args),
        };
    match outcome {
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
        Ok((writer, aggregate, runs, failures)) => {
            let command = writer.manifest.command.clone();
            if let Err(e) = writer.finish(&command, aggregate.as_ref(), &runs, &failures) {
                eprintln!("error writing artifacts: {e}");
                return 1;
            }
            let mut all_pass = runs.iter().all(|r| r.passed());
            if let Some(agg) = &aggregate {
                all_pass = all_pass && agg.passed();
            }
            for r in &runs {
                for (key, v) in &r.verdicts {
                    println!(
                        "{} {}::{} value {:.6e} vs {:.6e} ({})",
                        if v.pass { "pass" } else { "FAIL" },
                        r.name,
                        key,
                        v.value,
                        v.tolerance,
                        v.note
                    );
                }
            }
            println!(
                "{}: {} runs, {} failures, artifacts in {}",
                command,
                runs.len(),
                failures.len(),
                writer.manifest.out_dir
            );
            if all_pass {
                0
            } else {
                2
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp_out() -> tempfile::TempDir {
        tempfile::tempdir().unwrap()
    }

    #[test]
    fn unknown_command_is_usage_error() {
        assert_eq!(run(["grushin-lab", "frobnicate"]), 1);
        assert_eq!(run(["grushin-lab", "lab", "harnack", "--no-such-flag"]), 1);
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(run(["grushin-lab", "--help"]), 0);
    }

    #[test]
    fn geom_verify_passes_and_writes_artifacts() {
        let dir = tmp_out();
        let code = run([
            "grushin-lab",
            "geom",
            "verify",
            "--center",
            "0,0",
            "--radius",
            "1",
            "--samples",
            "2000",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
        assert_eq!(entries.len(), 1);
        let run_dir = entries[0].as_ref().unwrap().path();
        for file in ["manifest.json", "report.json", "summary.csv", "timing.json"] {
            assert!(run_dir.join(file).exists(), "missing {file}");
        }
    }

    #[test]
    fn solve_affine_is_exact() {
        let dir = tmp_out();
        let code = run([
            "grushin-lab",
            "solve",
            "--grid-n",
            "33",
            "--boundary",
            "affine",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
        let run_dir = entries[0].as_ref().unwrap().path();
        assert!(run_dir.join("solution.csv").exists());
        assert!(run_dir.join("field.csv").exists());
    }

    #[test]
    fn bad_field_name_is_config_error() {
        let dir = tmp_out();
        let code = run([
            "grushin-lab",
            "solve",
            "--field",
            "nonsense",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert_eq!(code, 1);
    }

    #[test]
    fn lab_single_config_round_trip() {
        let dir = tmp_out();
        let code = run([
            "grushin-lab",
            "lab",
            "harnack",
            "--center",
            "0,0",
            "--radius",
            "1",
            "--grid-n",
            "41",
            "--field",
            "identity",
            "--jobs",
            "1",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
        let run_dir = entries[0].as_ref().unwrap().path();
        let report: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(run_dir.join("report.json")).unwrap())
                .unwrap();
        assert_eq!(report["runs"].as_array().unwrap().len(), 1);
        assert!(report["aggregate"]["measurements"]["c_hat_min"].as_f64().unwrap() >= 1.0);
    }
}
