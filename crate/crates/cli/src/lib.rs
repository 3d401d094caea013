//! `loewner` command-line tool: subcommands over the core library that write CSV,
//! JSON or text tables together with the configuration that produced them.

pub mod commands;
pub mod config;
pub mod table;
pub mod verify;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use commands::{CommandError, Outcome};
use config::{Format, RunConfig};
use table::emit_table;

pub const EXIT_OK: i32 = 0;
/// Bad arguments, unreadable configuration or an output that could not be written.
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
/// Numerical failure inside the core library.
pub const EXIT_NUMERICAL: i32 = 3;
/// The run finished but an invariant check or acceptance criterion failed.
pub const EXIT_VIOLATION: i32 = 4;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "LOEWNER_OUT_DIR";

const SCHEMAS: &str = "\
Output tables (CSV columns; JSON carries the same columns plus the configuration):
  coeffs      n, power, t0_power, numerator, denominator, exact, value
  borel       tau, value, error, quad_error, continuation_error, pade_m, pade_k, x_max
  flow        t, re, im, step_count, residual
  trace       t, re, im, step_count, residual, flagged, error
  harmonic    t, f1, f2, alpha1, alpha2, m1, m2, ratio, deviation, error
  monotonic   t1, t0, t, lower, upper, lower_value, upper_value, margin, required, noise, status
  radius      method, eps, value, error_bar, n_used, t_radius, value_over_eps
  smoothness  segments, t, angle
  verify_all  id, criterion, status, detail, modules

Every CSV file <name>.csv comes with <name>.csv.cfg holding the configuration hash and
the full configuration; the .cfg file can be passed back with --config.

Exit codes: 0 ok, 1 usage/configuration/IO error, 2 precondition violated,
3 numerical failure, 4 invariant or acceptance check failed.";

#[derive(Parser, Debug)]
#[command(name = "loewner", version, about = "Cube-root Loewner flow: series, Borel sums, flows, traces and analysis", after_help = SCHEMAS)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// TOML configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file (only for commands that write a single table).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output directory; defaults to $LOEWNER_OUT_DIR, then the current directory.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    rtol: Option<f64>,
    #[arg(long, global = true)]
    atol: Option<f64>,
    #[arg(long, global = true)]
    min_gap: Option<f64>,
    #[arg(long, global = true)]
    tau_switch: Option<f64>,
    /// Largest time accepted by the cube-root trace and branch solvers.
    #[arg(long, global = true)]
    solver_t_max: Option<f64>,
    #[arg(long, global = true)]
    n_seed: Option<usize>,
    #[arg(long, global = true)]
    seed_tol: Option<f64>,
    #[arg(long, global = true)]
    branch_delta: Option<f64>,
    #[arg(long, global = true)]
    trace_rtol: Option<f64>,
    #[arg(long, global = true)]
    trace_atol: Option<f64>,
    #[arg(long, global = true)]
    trace_residual_tol: Option<f64>,
    /// Largest time accepted by the analysis routines.
    #[arg(long, global = true)]
    t_max: Option<f64>,
    /// Ordering margins must exceed this multiple of the solver tolerance.
    #[arg(long, global = true)]
    margin_factor: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact series coefficients of a family.
    Coeffs {
        /// plus, minus, cuberoot, branch-plus, branch-minus or holomorphic
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        /// Anchor time of the cuberoot and branch families, as a rational.
        #[arg(long)]
        t0: Option<String>,
        /// Start point of the holomorphic family, as a rational.
        #[arg(long)]
        eps: Option<String>,
    },
    /// Borel-Pade sums of the singular series.
    Borel {
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        terms: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        tau: Option<Vec<f64>>,
    },
    /// Forward flow from a point, singular or branch seed.
    Flow {
        /// point, plus, minus, branch-plus or branch-minus
        #[arg(long)]
        seed: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        z_re: Option<f64>,
        #[arg(long)]
        z_im: Option<f64>,
        /// Start time of a point seed, or seed time of a singular seed.
        #[arg(long)]
        t_start: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        /// cube_root, zero or shifted_cube_root
        #[arg(long)]
        driving: Option<String>,
        #[arg(long)]
        t0: Option<String>,
    },
    /// Slit trace on a grid.
    Trace {
        #[arg(long)]
        driving: Option<String>,
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
        #[arg(long)]
        grid_lo: Option<f64>,
        #[arg(long)]
        grid_hi: Option<f64>,
        /// Number of geometric segments when no grid is given.
        #[arg(long)]
        segments: Option<usize>,
    },
    /// Harmonic measures of the two sides of the slit and their ratio.
    Harmonic {
        /// Strictly decreasing times.
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
    },
    /// Ordering chain of the solutions at (t1, t0, t); the default lattice without --t1.
    Monotonic {
        #[arg(long)]
        t1: Option<f64>,
        #[arg(long)]
        t0: Option<String>,
        #[arg(long)]
        t: Option<f64>,
    },
    /// Radius of convergence of the holomorphic family.
    Radius {
        #[arg(long, allow_hyphen_values = true)]
        eps: Option<String>,
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Turning angles of the trace under grid refinement.
    Smoothness {
        #[arg(long)]
        driving: Option<String>,
        #[arg(long)]
        grid_lo: Option<f64>,
        #[arg(long)]
        grid_hi: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        levels: Option<Vec<usize>>,
    },
    /// Run every acceptance check and write the supporting tables.
    VerifyAll,
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

impl Common {
    fn apply(&self, cfg: &mut RunConfig) {
        set(&mut cfg.format, self.format);
        set(&mut cfg.rtol, self.rtol);
        set(&mut cfg.atol, self.atol);
        set(&mut cfg.min_gap, self.min_gap);
        set(&mut cfg.tau_switch, self.tau_switch);
        set(&mut cfg.solver_t_max, self.solver_t_max);
        set(&mut cfg.n_seed, self.n_seed);
        set(&mut cfg.seed_tol, self.seed_tol);
        if self.branch_delta.is_some() {
            cfg.branch_delta = self.branch_delta;
        }
        set(&mut cfg.trace_rtol, self.trace_rtol);
        set(&mut cfg.trace_atol, self.trace_atol);
        set(&mut cfg.trace_residual_tol, self.trace_residual_tol);
        set(&mut cfg.t_max, self.t_max);
        set(&mut cfg.margin_factor, self.margin_factor);
    }
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Coeffs { .. } => "coeffs",
            Command::Borel { .. } => "borel",
            Command::Flow { .. } => "flow",
            Command::Trace { .. } => "trace",
            Command::Harmonic { .. } => "harmonic",
            Command::Monotonic { .. } => "monotonic",
            Command::Radius { .. } => "radius",
            Command::Smoothness { .. } => "smoothness",
            Command::VerifyAll => "verify-all",
        }
    }

    fn apply(self, cfg: &mut RunConfig) {
        cfg.command = self.name().to_string();
        match self {
            Command::Coeffs { family, n, t0, eps } => {
                set(&mut cfg.family, family);
                set(&mut cfg.n, n);
                set(&mut cfg.t0, t0);
                set(&mut cfg.eps, eps);
            }
            Command::Borel { family, terms, tau } => {
                set(&mut cfg.family, family);
                set(&mut cfg.borel_terms, terms);
                set(&mut cfg.tau, tau);
            }
            Command::Flow { seed, z_re, z_im, t_start, t_end, driving, t0 } => {
                set(&mut cfg.seed, seed);
                set(&mut cfg.z_re, z_re);
                set(&mut cfg.z_im, z_im);
                set(&mut cfg.t_start, t_start);
                set(&mut cfg.t_end, t_end);
                set(&mut cfg.driving, driving);
                set(&mut cfg.t0, t0);
            }
            Command::Trace { driving, grid, grid_lo, grid_hi, segments } => {
                set(&mut cfg.driving, driving);
                set(&mut cfg.grid, grid);
                set(&mut cfg.grid_lo, grid_lo);
                set(&mut cfg.grid_hi, grid_hi);
                set(&mut cfg.levels, segments.map(|n| vec![n]));
            }
            Command::Harmonic { grid } => set(&mut cfg.grid, grid),
            Command::Monotonic { t1, t0, t } => {
                if t1.is_some() {
                    cfg.t1 = t1;
                }
                set(&mut cfg.t0, t0);
                set(&mut cfg.t_end, t);
            }
            Command::Radius { eps, n_max } => {
                set(&mut cfg.eps, eps);
                set(&mut cfg.n_max, n_max);
            }
            Command::Smoothness { driving, grid_lo, grid_hi, levels } => {
                set(&mut cfg.driving, driving);
                set(&mut cfg.grid_lo, grid_lo);
                set(&mut cfg.grid_hi, grid_hi);
                set(&mut cfg.levels, levels);
            }
            Command::VerifyAll => {}
        }
    }
}

fn dispatch(cfg: &RunConfig) -> Result<Outcome, CommandError> {
    match cfg.command.as_str() {
        "coeffs" => commands::coeffs(cfg),
        "borel" => commands::borel(cfg),
        "flow" => commands::flow(cfg),
        "trace" => commands::trace(cfg),
        "harmonic" => commands::harmonic(cfg),
        "monotonic" => commands::monotonic(cfg),
        "radius" => commands::radius(cfg),
        "smoothness" => commands::smoothness(cfg),
        "verify-all" => Ok(verify_all(cfg)),
        other => Err(CommandError::Usage(format!("unknown command {other:?}"))),
    }
}

fn verify_all(cfg: &RunConfig) -> Outcome {
    let criteria = verify::run_criteria(cfg);
    let mut out = Outcome { tables: vec![verify::summary_table(&criteria)], violations: Vec::new() };
    for c in &criteria {
        println!("{} criterion {}: {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.name, c.detail);
        eprintln!("criterion {} took {:.2} s", c.id, c.elapsed.as_secs_f64());
        if !c.passed {
            out.violations.push(format!("criterion {} ({}) failed", c.id, c.name));
        }
        for t in &c.tables {
            let mut t = t.clone();
            t.name = format!("c{}_{}", c.id, t.name);
            out.tables.push(t);
        }
    }
    let covered = verify::coverage(&criteria);
    let missing: Vec<_> = verify::CORE_MODULES.iter().filter(|m| !covered.contains(m)).collect();
    println!("modules exercised: {}", covered.join(", "));
    if !missing.is_empty() {
        out.violations.push(format!("modules not exercised: {missing:?}"));
    }
    out
}

fn out_dir(flag: Option<&Path>) -> PathBuf {
    flag.map(Path::to_path_buf)
        .or_else(|| std::env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn core_exit(e: &loewner::Error) -> i32 {
    if e.is_precondition() {
        EXIT_PRECONDITION
    } else {
        EXIT_NUMERICAL
    }
}

/// Runs the tool on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let mut cfg = match &cli.common.config {
        Some(path) => match RunConfig::load(path) {
            Ok(cfg) => cfg,
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                return EXIT_USAGE;
            }
        },
        None => RunConfig::default(),
    };
    cli.common.apply(&mut cfg);
    cli.command.apply(&mut cfg);

    let outcome = match dispatch(&cfg) {
        Ok(o) => o,
        Err(CommandError::Usage(m)) => {
            eprintln!("error: {m}");
            return EXIT_USAGE;
        }
        Err(CommandError::Core(e)) => {
            let kind = if e.is_precondition() { "precondition violated" } else { "numerical failure" };
            eprintln!("error: {kind}: {e}");
            return core_exit(&e);
        }
    };

    if cli.common.out.is_some() && outcome.tables.len() != 1 {
        eprintln!("error: --out needs a single-table command; {} writes {} tables", cfg.command, outcome.tables.len());
        return EXIT_USAGE;
    }
    let dir = out_dir(cli.common.out_dir.as_deref());
    for t in &outcome.tables {
        let path = match &cli.common.out {
            Some(p) => p.clone(),
            None => dir.join(format!("{}.{}", t.name, cfg.format.extension())),
        };
        match emit_table(t, cfg.format, &path, &cfg) {
            Ok(paths) => {
                for p in paths {
                    eprintln!("wrote {}", p.display());
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
        }
    }
    for v in &outcome.violations {
        eprintln!("violation: {v}");
    }
    if outcome.violations.is_empty() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    }
}
