//! Command-line front end.
//!
//! JSON summaries go to standard output; bulk payloads go to `--out`.
//! Exit codes: 0 success, 1 verification failure, 2 usage, 3 I/O.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use crate::dump;
use crate::error::Error;
use crate::eval::{self, eval_all, eval_generators, EvalOptions, Subset};
use crate::group::{full_mask, SignVector};
use crate::ifs::{self, littlewood_ifs};
use crate::parallel::{render_zero_set, sweep_roots};
use crate::point::ComplexPoint;
use crate::pointset::multiset_eq_exact;
use crate::raster::{to_image, write_pgm, ColorMap, Viewport};
use crate::solver::SolverConfig;
use crate::zeros::{approx_cost_report, epsilon_membership, zero_set_size, MembershipMode};

/// Degree cap for commands that enumerate whole groups.
pub const EVAL_DEGREE_CAP: u32 = 30;
/// Degree cap for root sweeps, which solve `d 2^d` roots per degree.
pub const ROOT_DEGREE_CAP: u32 = 20;
/// Largest degree `verify` will sweep.
pub const VERIFY_DEGREE_CAP: u32 = 16;
/// Tolerance factor for `verify`: deviations must stay below
/// `VERIFY_TOL * (1 + |e(z)|)`.
pub const VERIFY_TOL: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(name = "littlewood", version, about = "Zero sets of Littlewood polynomials")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub workers: Option<u32>,
    /// Payload output path.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Payload format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Lift the degree safety caps and memory budgets.
    #[arg(long, global = true)]
    pub force: bool,
    /// Suppress warnings on standard error.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Bin,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve every polynomial of degree 1..=D (leading coefficient +1).
    Roots {
        #[arg(long)]
        degree_max: u32,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Generalized dragon set: the Littlewood IFS iterated DEGREE+1 times from 0.
    Dragon {
        #[arg(long)]
        degree: u32,
        #[arg(long, allow_hyphen_values = true)]
        z: ComplexPoint,
    },
    /// Evaluate one class N_d(nu) at z.
    Partition {
        #[arg(long)]
        degree: u32,
        #[arg(long, allow_hyphen_values = true)]
        z: ComplexPoint,
        #[arg(long)]
        nu: u32,
        /// Append the generator images and the identity image, with a kind column.
        #[arg(long)]
        with_generators: bool,
    },
    /// Epsilon-ball membership of z in the zero set, plus evaluation cost counts.
    Approx {
        #[arg(long)]
        degree: u32,
        #[arg(long, allow_hyphen_values = true)]
        z: ComplexPoint,
        #[arg(long, default_value_t = 1e-6)]
        epsilon: f64,
        /// `exact` or `nu:K`.
        #[arg(long, default_value = "exact", value_parser = parse_mode)]
        mode: MembershipMode,
    },
    /// Render the root density of degrees 1..=D as a PGM image.
    Render {
        #[arg(long)]
        degree_max: u32,
        #[arg(long, default_value_t = 800)]
        width: usize,
        #[arg(long, default_value_t = 600)]
        height: usize,
        /// XMIN,XMAX,YMIN,YMAX
        #[arg(long, default_value = "-2,2,-1.5,1.5", allow_hyphen_values = true, value_parser = parse_viewport)]
        viewport: Viewport,
        #[arg(long, value_enum, default_value_t = ColorMap::Log)]
        colormap: ColorMap,
        /// Also dump nonzero bins as `col,row,count`.
        #[arg(long)]
        grid_csv: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Check the generator-sum and factorization identities at z over a whole degree.
    Verify {
        #[arg(long)]
        degree: u32,
        #[arg(long, allow_hyphen_values = true)]
        z: ComplexPoint,
    },
    /// Evaluate a subset of L_d at z.
    Evaluate {
        #[arg(long)]
        degree: u32,
        #[arg(long, allow_hyphen_values = true)]
        z: ComplexPoint,
        /// `full`, `half`, `nu:K` or `generators`.
        #[arg(long, default_value = "full", value_parser = parse_subset)]
        subset: Subset,
        /// Mask range `LO..HI`.
        #[arg(long, value_parser = parse_range)]
        range: Option<(u64, u64)>,
    },
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = SolverConfig::default().tol)]
    pub tol: f64,
    #[arg(long, default_value_t = SolverConfig::default().max_iter)]
    pub max_iter: u32,
    #[arg(long)]
    pub no_fallback: bool,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            tol: self.tol,
            max_iter: self.max_iter,
            fallback_enabled: !self.no_fallback,
        }
    }
}

fn parse_mode(s: &str) -> Result<MembershipMode, String> {
    match s {
        "exact" => Ok(MembershipMode::Exact),
        _ => s
            .strip_prefix("nu:")
            .and_then(|k| k.parse().ok())
            .map(MembershipMode::NuClass)
            .ok_or_else(|| format!("expected `exact` or `nu:K`, got {s:?}")),
    }
}

fn parse_subset(s: &str) -> Result<Subset, String> {
    match s {
        "full" => Ok(Subset::Full),
        "half" => Ok(Subset::Half),
        "generators" => Ok(Subset::Generators),
        _ => s
            .strip_prefix("nu:")
            .and_then(|k| k.parse().ok())
            .map(Subset::NuClass)
            .ok_or_else(|| format!("expected full, half, generators or nu:K, got {s:?}")),
    }
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s.split_once("..").ok_or("expected LO..HI")?;
    let lo = lo.parse().map_err(|e| format!("{e}"))?;
    let hi = hi.parse().map_err(|e| format!("{e}"))?;
    Ok((lo, hi))
}

fn parse_viewport(s: &str) -> Result<Viewport, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [xmin, xmax, ymin, ymax] => Viewport::new(xmin, xmax, ymin, ymax).map_err(|e| e.to_string()),
        _ => Err("expected XMIN,XMAX,YMIN,YMAX".into()),
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(io::Error),
    Verify,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(io) => CliError::Io(io),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult = Result<(), CliError>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.common.workers {
        pool = pool.num_threads(n as usize);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Verify) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(e)) => {
            eprintln!("I/O error: {e}");
            ExitCode::from(3)
        }
    }
}

fn env_cap() -> Option<u32> {
    std::env::var("LW_MAX_DEGREE").ok()?.parse().ok()
}

fn check_cap(common: &Common, degree: u32, default_cap: u32) -> CliResult {
    let cap = env_cap().unwrap_or(default_cap);
    if degree > cap && !common.force {
        return Err(CliError::Usage(format!(
            "degree {degree} exceeds the safety cap {cap}; pass --force or set LW_MAX_DEGREE"
        )));
    }
    Ok(())
}

fn eval_options(common: &Common) -> EvalOptions {
    let mut opts = EvalOptions::default();
    if common.force {
        opts.max_points = u64::MAX;
    }
    opts
}

fn print_json(value: &serde_json::Value) -> CliResult {
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    Ok(BufWriter::new(File::create(path)?))
}

fn write_points(common: &Common, points: &[Complex64]) -> CliResult {
    let Some(path) = &common.out else {
        return Ok(());
    };
    let mut w = create(path)?;
    match common.format {
        Format::Csv => dump::write_points_csv(&mut w, points)?,
        Format::Bin => dump::write_point_dump(&mut w, points)?,
    }
    w.flush()?;
    Ok(())
}

fn execute(cli: &Cli) -> CliResult {
    let common = &cli.common;
    match &cli.command {
        Command::Roots { degree_max, solver } => cmd_roots(common, *degree_max, solver.config()),
        Command::Dragon { degree, z } => cmd_dragon(common, *degree, *z),
        Command::Partition {
            degree,
            z,
            nu,
            with_generators,
        } => cmd_partition(common, *degree, *z, *nu, *with_generators),
        Command::Approx {
            degree,
            z,
            epsilon,
            mode,
        } => cmd_approx(common, *degree, *z, *epsilon, *mode),
        Command::Render {
            degree_max,
            width,
            height,
            viewport,
            colormap,
            grid_csv,
            solver,
        } => cmd_render(
            common,
            *degree_max,
            (*width, *height),
            *viewport,
            *colormap,
            grid_csv.as_deref(),
            solver.config(),
        ),
        Command::Verify { degree, z } => cmd_verify(*degree, *z),
        Command::Evaluate {
            degree,
            z,
            subset,
            range,
        } => cmd_evaluate(common, *degree, *z, *subset, *range),
    }
}

fn cmd_roots(common: &Common, d_max: u32, cfg: SolverConfig) -> CliResult {
    check_cap(common, d_max, ROOT_DEGREE_CAP)?;
    cfg.validate()?;
    let mut out = match &common.out {
        Some(path) => Some(create(path)?),
        None => None,
    };
    if let Some(w) = out.as_mut() {
        match common.format {
            Format::Csv => writeln!(w, "{}", dump::ROOT_CSV_HEADER)?,
            Format::Bin => dump::write_dump_header(w, zero_set_size(d_max) as u64)?,
        }
    }
    let format = common.format;
    let summary = sweep_roots(d_max, &cfg, |records| -> io::Result<()> {
        let Some(w) = out.as_mut() else {
            return Ok(());
        };
        for r in records {
            match format {
                Format::Csv => dump::write_root_csv_row(w, r)?,
                Format::Bin => dump::write_point(w, r.root)?,
            }
        }
        Ok(())
    })??;
    if let Some(mut w) = out {
        w.flush()?;
    }
    print_json(&serde_json::to_value(summary).expect("summary serializes"))
}

fn cmd_dragon(common: &Common, degree: u32, z: ComplexPoint) -> CliResult {
    check_cap(common, degree, EVAL_DEGREE_CAP)?;
    let maps = littlewood_ifs(z);
    if !common.quiet && !maps.iter().all(ifs::AffineMap::is_contraction) {
        eprintln!("warning: |z| >= 1, the maps are not contractions");
    }
    let budget = if common.force {
        u64::MAX
    } else {
        ifs::DEFAULT_ORBIT_BUDGET
    };
    // Both maps send the seed 0 to 1, so starting one layer later from 1
    // yields exactly the branch-deduplicated orbit.
    let orbit = ifs::iterate(&maps, &[Complex64::new(1.0, 0.0)], degree, budget)?;
    write_points(common, &orbit.points)?;
    print_json(&json!({
        "degree": degree,
        "depth": degree + 1,
        "z": z,
        "points": orbit.points.len(),
        "contractive": maps.iter().all(ifs::AffineMap::is_contraction),
    }))
}

fn cmd_partition(common: &Common, degree: u32, z: ComplexPoint, nu: u32, with_generators: bool) -> CliResult {
    check_cap(common, degree, EVAL_DEGREE_CAP)?;
    let opts = eval_options(common);
    let class = eval_all(degree, z, Subset::NuClass(nu), None, &opts)?;

    // The negations of N_d(k) form N_d(d+1-k). The index d-k is reported
    // alongside for comparison.
    let negated: Vec<Complex64> = class.points.iter().map(|w| -w).collect();
    let reflect = |k: i64| -> Result<serde_json::Value, CliError> {
        if !(0..=degree as i64 + 1).contains(&k) {
            return Ok(json!({ "nu": k, "points": 0, "matches": false }));
        }
        let other = eval_all(degree, z, Subset::NuClass(k as u32), None, &opts)?;
        Ok(json!({
            "nu": k,
            "points": other.len(),
            "matches": multiset_eq_exact(&negated, &other.points),
        }))
    };
    let complement = reflect(degree as i64 + 1 - nu as i64)?;
    let shifted = reflect(degree as i64 - nu as i64)?;

    let (gens, identity) = if with_generators {
        let g = eval_generators(degree, z)?;
        let e = eval::horner_eval(SignVector::identity(degree)?, z);
        (g.points, Some(e))
    } else {
        (Vec::new(), None)
    };

    if let Some(path) = &common.out {
        let mut w = create(path)?;
        match (common.format, with_generators) {
            (Format::Csv, false) => dump::write_points_csv(&mut w, &class.points)?,
            (Format::Csv, true) => {
                writeln!(w, "re,im,kind")?;
                let rows = class
                    .points
                    .iter()
                    .map(|p| (p, "class"))
                    .chain(gens.iter().map(|p| (p, "generator")))
                    .chain(identity.iter().map(|p| (p, "identity")));
                for (p, kind) in rows {
                    writeln!(w, "{},{},{kind}", p.re, p.im)?;
                }
            }
            (Format::Bin, _) => {
                let all: Vec<Complex64> = class
                    .points
                    .iter()
                    .chain(&gens)
                    .chain(identity.iter())
                    .copied()
                    .collect();
                dump::write_point_dump(&mut w, &all)?;
            }
        }
        w.flush()?;
    }
    print_json(&json!({
        "degree": degree,
        "z": z,
        "nu": nu,
        "points": class.len(),
        "generators": gens.len(),
        "identity": identity.map(|e| json!({"re": e.re, "im": e.im})),
        "reflection": { "complement": complement, "shifted": shifted },
    }))
}

fn cmd_approx(common: &Common, degree: u32, z: ComplexPoint, eps: f64, mode: MembershipMode) -> CliResult {
    check_cap(common, degree, EVAL_DEGREE_CAP)?;
    let report = epsilon_membership(z, degree, eps, mode, &eval_options(common))?;
    let cost = approx_cost_report(degree)?;
    print_json(&json!({
        "membership": report,
        "cost": {
            "degree": cost.degree,
            "full": cost.full as u64,
            "paper_formula": cost.paper_formula as u64,
            "corrected": cost.corrected as u64,
        },
    }))
}

fn cmd_render(
    common: &Common,
    d_max: u32,
    (width, height): (usize, usize),
    viewport: Viewport,
    colormap: ColorMap,
    grid_csv: Option<&Path>,
    cfg: SolverConfig,
) -> CliResult {
    check_cap(common, d_max, ROOT_DEGREE_CAP)?;
    let path = common
        .out
        .as_ref()
        .ok_or_else(|| CliError::Usage("render needs --out".into()))?;
    let (grid, summary) = render_zero_set(d_max, &cfg, width, height, viewport)?;
    let img = to_image(&grid, colormap);
    let mut w = create(path)?;
    let bytes = write_pgm(&img, &mut w)?;
    w.flush()?;
    if let Some(p) = grid_csv {
        let mut g = create(p)?;
        grid.write_csv(&mut g)?;
        g.flush()?;
    }
    print_json(&json!({
        "width": width,
        "height": height,
        "bytes": bytes,
        "binned": grid.total(),
        "dropped": grid.dropped(),
        "polynomials": summary.polynomials,
        "roots": summary.roots,
        "converged": summary.converged,
        "max_residual": summary.max_residual,
    }))
}

fn cmd_verify(degree: u32, z: ComplexPoint) -> CliResult {
    if degree > VERIFY_DEGREE_CAP {
        return Err(CliError::Usage(format!(
            "verify sweeps every polynomial; degree must be at most {VERIFY_DEGREE_CAP}"
        )));
    }
    let e = eval::horner_eval(SignVector::identity(degree)?, z);
    let generator_sum = if degree >= 2 {
        Some((eval::eval_identity_via_generators(degree, z)? - e).norm())
    } else {
        None
    };
    let factorization = (0..=full_mask(degree))
        .map(|m| {
            let p = SignVector::from_parts(degree, m);
            (eval::eval_via_factorization(p, z) - eval::horner_eval(p, z)).norm()
        })
        .fold(0.0f64, f64::max);
    let bound = VERIFY_TOL * (1.0 + e.norm());
    let passed = factorization <= bound && generator_sum.is_none_or(|l| l <= bound);
    print_json(&json!({
        "degree": degree,
        "z": z,
        "identity": {"re": e.re, "im": e.im},
        "generator_sum_max_deviation": generator_sum,
        "factorization_max_deviation": factorization,
        "polynomials": 1u64 << (degree + 1),
        "tolerance": bound,
        "passed": passed,
    }))?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Verify)
    }
}

fn cmd_evaluate(common: &Common, degree: u32, z: ComplexPoint, subset: Subset, range: Option<(u64, u64)>) -> CliResult {
    check_cap(common, degree, EVAL_DEGREE_CAP)?;
    let set = eval_all(degree, z, subset, range, &eval_options(common))?;
    write_points(common, &set.points)?;
    print_json(&json!({
        "degree": degree,
        "z": z,
        "subset": subset,
        "points": set.len(),
    }))
}
