//! One function per subcommand: run the core operation, build the tables, and collect
//! the invariants that failed.

use num_complex::Complex64;
use num_traits::Zero;

use loewner::analysis::{
    geometric_grid, monotonicity_lattice, monotonicity_report, radius_ratio_test, radius_root_test, ratio_scan,
    smoothness_refinement, majorant_lower_bound, default_lattice, MonotonicityReport,
};
use loewner::borel::{borel_sum, borel_transform, BorelConfig};
use loewner::dynamics::{solve_branch, solve_forward, solve_singular, trace_curve, Driving, FlowTrajectory};
use loewner::exact::{parse_rational, to_f64, Rational};
use loewner::series::{
    branch_half_coeffs, cube_root_taylor, holomorphic_coeffs, singular_minus_coeffs, singular_plus_coeffs, BranchSign,
    ExactSeries,
};
use loewner::Error;

use crate::config::RunConfig;
use crate::table::{Cell, Table};

#[derive(Debug)]
pub enum CommandError {
    /// A parameter value the command does not understand.
    Usage(String),
    Core(Error),
}

impl From<Error> for CommandError {
    fn from(e: Error) -> Self {
        CommandError::Core(e)
    }
}

impl std::fmt::Display for CommandError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CommandError::Usage(m) => write!(f, "{m}"),
            CommandError::Core(e) => write!(f, "{e}"),
        }
    }
}

pub type CmdResult<T> = std::result::Result<T, CommandError>;

#[derive(Debug, Default)]
pub struct Outcome {
    pub tables: Vec<Table>,
    /// Invariant checks that failed, one message each.
    pub violations: Vec<String>,
}

impl Outcome {
    fn single(table: Table) -> Outcome {
        Outcome { tables: vec![table], violations: Vec::new() }
    }

    fn check(&mut self, ok: bool, message: impl FnOnce() -> String) {
        if !ok {
            self.violations.push(message());
        }
    }
}

pub fn rational(text: &str) -> CmdResult<Rational> {
    Ok(parse_rational(text)?)
}

pub fn driving(cfg: &RunConfig) -> CmdResult<Driving> {
    match cfg.driving.as_str() {
        "cube_root" => Ok(Driving::CubeRoot),
        "zero" => Ok(Driving::Zero),
        "shifted_cube_root" => Ok(Driving::shifted(to_f64(&rational(&cfg.t0)?))?),
        other => Err(CommandError::Usage(format!(
            "unknown driving {other:?} (expected cube_root, zero or shifted_cube_root)"
        ))),
    }
}

fn sign(text: &str) -> CmdResult<BranchSign> {
    match text {
        "plus" => Ok(BranchSign::Plus),
        "minus" => Ok(BranchSign::Minus),
        other => Err(CommandError::Usage(format!("unknown sign {other:?} (expected plus or minus)"))),
    }
}

pub fn series(cfg: &RunConfig) -> CmdResult<ExactSeries> {
    let n = cfg.n;
    Ok(match cfg.family.as_str() {
        "plus" => singular_plus_coeffs(n),
        "minus" => singular_minus_coeffs(n),
        "cuberoot" => cube_root_taylor(&rational(&cfg.t0)?, n.div_ceil(2))?,
        "branch-plus" => branch_half_coeffs(&rational(&cfg.t0)?, n, BranchSign::Plus)?,
        "branch-minus" => branch_half_coeffs(&rational(&cfg.t0)?, n, BranchSign::Minus)?,
        "holomorphic" => holomorphic_coeffs(&rational(&cfg.eps)?, n)?,
        other => {
            return Err(CommandError::Usage(format!(
                "unknown family {other:?} (expected plus, minus, cuberoot, branch-plus, branch-minus or holomorphic)"
            )))
        }
    })
}

/// Columns `n, power, t0_power, numerator, denominator, exact, value`: one row per
/// nonzero component `r·t0^{j/3}` of each coefficient (a single zero row otherwise).
pub fn coeffs_table(series: &ExactSeries) -> Table {
    let mut table = Table::new("coeffs", &["n", "power", "t0_power", "numerator", "denominator", "exact", "value"]);
    let step = series.step().as_rational();
    let t0 = series.anchor().map_or(1.0, to_f64);
    let powers = ["0", "1/3", "2/3"];
    for (i, c) in series.coeffs().iter().enumerate() {
        let n = i + 1;
        let power = &step * Rational::from_integer((n as i64).into());
        let mut parts: Vec<usize> = (0..3).filter(|&j| !c.parts[j].is_zero()).collect();
        if parts.is_empty() {
            parts.push(0);
        }
        for j in parts {
            let r = &c.parts[j];
            let value = to_f64(r) * t0.powf(j as f64 / 3.0);
            table.push(vec![
                n.into(),
                Cell::rational(&power),
                powers[j].into(),
                r.numer().to_string().into(),
                r.denom().to_string().into(),
                Cell::rational(r),
                value.into(),
            ]);
        }
    }
    table
}

pub fn coeffs(cfg: &RunConfig) -> CmdResult<Outcome> {
    if cfg.n == 0 {
        return Err(Error::precondition("n must be positive").into());
    }
    let s = series(cfg)?;
    let mut table = coeffs_table(&s);
    table.meta("family", s.family().name());
    if let Some(t0) = s.anchor() {
        table.meta("anchor", Cell::rational(t0));
    }
    Ok(Outcome::single(table))
}

pub fn borel(cfg: &RunConfig) -> CmdResult<Outcome> {
    let family = match cfg.family.as_str() {
        "plus" => singular_plus_coeffs(cfg.borel_terms),
        "minus" => singular_minus_coeffs(cfg.borel_terms),
        other => return Err(CommandError::Usage(format!("borel sums the plus or minus family, not {other:?}"))),
    };
    let transform = borel_transform(&family)?;
    let mut table = Table::new(
        "borel",
        &["tau", "value", "error", "quad_error", "continuation_error", "pade_m", "pade_k", "x_max"],
    );
    for &tau in &cfg.tau {
        let v = borel_sum(tau, &transform, &BorelConfig::default())?;
        table.push(vec![
            tau.into(),
            v.value.into(),
            v.error.into(),
            v.quad_error.into(),
            v.continuation_error.into(),
            v.order.0.into(),
            v.order.1.into(),
            v.x_max.into(),
        ]);
    }
    let radius = transform.radius_estimate();
    let (lo, hi) = (1.0 / (12.0 * std::f64::consts::E), 1.0 / 6.0);
    table.meta("transform_radius", radius);
    table.meta("radius_window_lo", lo);
    table.meta("radius_window_hi", hi);
    let mut out = Outcome::single(table);
    out.check(radius >= lo && radius <= hi, || format!("Borel-transform radius {radius:e} outside [{lo:e}, {hi:e}]"));
    Ok(out)
}

pub fn trajectory_table(traj: &FlowTrajectory) -> Table {
    let mut table = Table::new("flow", &["t", "re", "im", "step_count", "residual"]);
    for (i, s) in traj.samples.iter().enumerate() {
        table.push(vec![s.t.into(), s.f.re.into(), s.f.im.into(), i.into(), Cell::Empty]);
    }
    table.meta("driving", traj.driving.name());
    table.meta("steps", traj.stats.steps);
    table.meta("rejected", traj.stats.rejected);
    table.meta("min_step", traj.stats.min_step);
    table
}

pub fn flow(cfg: &RunConfig) -> CmdResult<Outcome> {
    let solver = cfg.solver();
    let traj = match cfg.seed.as_str() {
        "point" => solve_forward(Complex64::new(cfg.z_re, cfg.z_im), cfg.t_start, cfg.t_end, driving(cfg)?, &solver)?,
        "plus" | "minus" => {
            let t_seed = (cfg.t_start > 0.0).then_some(cfg.t_start);
            solve_singular(sign(&cfg.seed)?, t_seed, cfg.t_end, &solver)?
        }
        "branch-plus" | "branch-minus" => {
            let t0 = to_f64(&rational(&cfg.t0)?);
            solve_branch(t0, sign(&cfg.seed["branch-".len()..])?, cfg.t_end, &solver)?
        }
        other => {
            return Err(CommandError::Usage(format!(
                "unknown seed {other:?} (expected point, plus, minus, branch-plus or branch-minus)"
            )))
        }
    };
    let mut out = Outcome::single(trajectory_table(&traj));
    out.check(traj.samples.iter().all(|s| s.f.im >= 0.0), || "trajectory left the upper half-plane".into());
    Ok(out)
}

fn trace_grid(cfg: &RunConfig) -> Vec<f64> {
    if cfg.grid.is_empty() {
        geometric_grid(cfg.grid_lo, cfg.grid_hi, cfg.levels.last().copied().unwrap_or(32))
    } else {
        cfg.grid.clone()
    }
}

pub fn trace(cfg: &RunConfig) -> CmdResult<Outcome> {
    let grid = trace_grid(cfg);
    let trace = trace_curve(&grid, driving(cfg)?, &cfg.solver())?;
    let mut table = Table::new("trace", &["t", "re", "im", "step_count", "residual", "flagged", "error"]);
    for p in &trace.points {
        let g = p.gamma;
        table.push(vec![
            p.t.into(),
            Cell::opt(g.map(|g| g.re)),
            Cell::opt(g.map(|g| g.im)),
            p.steps.into(),
            Cell::opt(p.residual),
            p.flagged.into(),
            p.error.clone().map_or(Cell::Empty, Cell::Text),
        ]);
    }
    let mut out = Outcome::single(table);
    for p in &trace.points {
        out.check(!p.flagged, || format!("trace point t = {:e} flagged (residual {:?})", p.t, p.residual));
        if let Some(g) = p.gamma {
            out.check(g.im >= 0.0, || format!("trace point t = {:e} below the real axis", p.t));
        }
    }
    Ok(out)
}

pub fn harmonic(cfg: &RunConfig) -> CmdResult<Outcome> {
    let grid = if cfg.grid.is_empty() { vec![1e-3, 1e-4, 1e-5, 1e-6] } else { cfg.grid.clone() };
    let scan = ratio_scan(&grid, &cfg.analysis())?;
    let mut table = Table::new(
        "harmonic",
        &["t", "f1", "f2", "alpha1", "alpha2", "m1", "m2", "ratio", "deviation", "error"],
    );
    let mut out = Outcome::default();
    for r in &scan.rows {
        match r.measures {
            Some(m) => {
                table.push(vec![
                    r.t.into(),
                    m.f1.into(),
                    m.f2.into(),
                    m.alpha1.into(),
                    m.alpha2.into(),
                    m.m1.into(),
                    m.m2.into(),
                    m.ratio.into(),
                    m.deviation().into(),
                    Cell::Empty,
                ]);
                let sum = (m.f1.atan() - m.f2.atan()) / std::f64::consts::PI;
                out.check(m.alpha1 >= 0.0 && m.alpha2 >= 0.0, || format!("negative angle at t = {:e}", r.t));
                out.check(m.m1 + m.m2 < 1.0, || format!("m1 + m2 >= 1 at t = {:e}", r.t));
                out.check((m.m1 + m.m2 - sum).abs() <= 1e-14, || format!("angle additivity broken at t = {:e}", r.t));
            }
            None => {
                let mut row = vec![r.t.into()];
                row.extend(std::iter::repeat_n(Cell::Empty, 8));
                row.push(r.error.clone().unwrap_or_default().into());
                table.push(row);
                out.violations.push(format!("harmonic measures failed at t = {:e}", r.t));
            }
        }
    }
    table.meta("c_fit", Cell::opt(scan.c_fit));
    table.meta("slope", Cell::opt(scan.slope));
    out.tables.push(table);
    Ok(out)
}

pub fn chain_table(reports: &[(f64, f64, f64, Result<MonotonicityReport, Error>)]) -> Table {
    let mut table = Table::new(
        "monotonic",
        &["t1", "t0", "t", "lower", "upper", "lower_value", "upper_value", "margin", "required", "noise", "status"],
    );
    for (t1, t0, t, r) in reports {
        match r {
            Ok(r) => {
                for l in &r.links {
                    table.push(vec![
                        (*t1).into(),
                        (*t0).into(),
                        (*t).into(),
                        l.lower.into(),
                        l.upper.into(),
                        l.lower_value.into(),
                        l.upper_value.into(),
                        l.margin.into(),
                        l.required.into(),
                        l.noise.into(),
                        format!("{:?}", l.status).to_lowercase().into(),
                    ]);
                }
            }
            Err(e) => {
                let mut row = vec![(*t1).into(), (*t0).into(), (*t).into()];
                row.extend(std::iter::repeat_n(Cell::Empty, 7));
                row.push(format!("error: {e}").into());
                table.push(row);
            }
        }
    }
    table
}

pub fn monotonic(cfg: &RunConfig) -> CmdResult<Outcome> {
    let analysis = cfg.analysis();
    let triples = match cfg.t1 {
        Some(t1) => {
            let t0 = to_f64(&rational(&cfg.t0)?);
            // contract violations of a single explicit triple are reported as such
            monotonicity_report(t1, t0, cfg.t_end, &analysis)?;
            vec![(t1, t0, cfg.t_end)]
        }
        None => default_lattice(),
    };
    let results = monotonicity_lattice(&triples, &analysis);
    let rows: Vec<_> = triples.iter().zip(results).map(|(&(a, b, c), r)| (a, b, c, r)).collect();
    let mut out = Outcome::single(chain_table(&rows));
    for (t1, t0, t, r) in &rows {
        let ok = matches!(r, Ok(rep) if rep.holds());
        out.check(ok, || format!("ordering chain fails at (t1, t0, t) = ({t1:e}, {t0:e}, {t:e})"));
    }
    Ok(out)
}

pub fn radius(cfg: &RunConfig) -> CmdResult<Outcome> {
    let eps = rational(&cfg.eps)?;
    let root = radius_root_test(&eps, cfg.n_max)?;
    let mut estimates = vec![root, radius_ratio_test(&eps, cfg.n_max)?];
    let eps_f = to_f64(&eps);
    let majorant = if eps_f > 0.0 { Some(majorant_lower_bound(eps_f)?) } else { None };
    estimates.extend(majorant.map(|m| m.estimate));
    let mut table = Table::new("radius", &["method", "eps", "value", "error_bar", "n_used", "t_radius", "value_over_eps"]);
    for e in &estimates {
        table.push(vec![
            e.method.name().into(),
            Cell::rational(&eps),
            e.value.into(),
            e.error_bar.into(),
            e.n_used.into(),
            e.t_radius().into(),
            (e.value / eps_f.abs()).into(),
        ]);
    }
    let mut out = Outcome::default();
    if let Some(m) = majorant {
        table.meta("majorant_c", m.c);
        table.meta("majorant_r1", m.r1);
        table.meta("majorant_m", m.m);
        out.check(m.estimate.value <= root.value + root.error_bar + m.estimate.error_bar, || {
            format!("majorant bound {:e} exceeds the root-test radius {:e}", m.estimate.value, root.value)
        });
    }
    out.tables.push(table);
    Ok(out)
}

pub fn smoothness(cfg: &RunConfig) -> CmdResult<Outcome> {
    let drive = driving(cfg)?;
    let refinement = smoothness_refinement(cfg.grid_lo, cfg.grid_hi, &cfg.levels, drive, &cfg.solver())?;
    let mut table = Table::new("smoothness", &["segments", "t", "angle"]);
    for (n, r) in &refinement.levels {
        for a in &r.angles {
            table.push(vec![(*n).into(), a.t.into(), a.angle.into()]);
        }
        table.meta(&format!("max_angle_{n}"), r.max_angle);
    }
    let ratios = refinement.ratios();
    for (w, q) in refinement.levels.windows(2).zip(&ratios) {
        table.meta(&format!("ratio_{}_{}", w[0].0, w[1].0), *q);
    }
    let finest = &refinement.levels.last().expect("at least one level").1;
    table.meta("max_residual", Cell::opt(finest.max_residual));
    let mut out = Outcome::single(table);
    let straight = refinement.levels.iter().all(|(_, r)| r.max_angle < 1e-12);
    out.check(straight || ratios.iter().all(|&q| q >= 1.5), || format!("turning angles do not halve: ratios {ratios:?}"));
    out.check(finest.max_residual.is_some_and(|r| r <= cfg.trace_residual_tol), || {
        format!("trace residual {:?} above {:e}", finest.max_residual, cfg.trace_residual_tol)
    });
    Ok(out)
}
