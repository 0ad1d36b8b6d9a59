//! Command-line front end.
//!
//! Exit codes: 0 success, 1 file-system failure, 2 usage error, 3 domain
//! error, 4 numerical failure. Failures print a JSON [`ErrorReport`] on
//! stderr.

use std::ffi::OsString;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polar_core::dynamics::{self, IcConvention, IntegratorConfig};
use polar_core::equilibrium::{trace_boundary, BoundaryKind, EquilibriumOrbit};
use polar_core::roots::geometric_grid;
use polar_core::survey::{classify, default_grid, summarize, SurveyConfig, SurveyRow, Verdict};
use polar_core::system::inertial_to_rotating;
use polar_core::torque::{
    analytic_solution, ansatz_m, ansatz_state, ansatz_torques, axial_angular_momentum, balance_residual, balance_scan,
    centrifugal_torque, coriolis_torque, ripple_ratio, solution_m, AnsatzParams,
};
use polar_core::{kepler_frequency, Error, Frame, Star, SystemConfig};

use crate::grid_file::GridFile;
use crate::report::{
    AnsatzReport, EquilibriumReport, ErrorReport, IntegrateReport, RandomChecks, SurveyReport, SurveySettings,
    TorqueCheckReport,
};
use crate::tables::{self, AnsatzRow, TableError};
use crate::{parallel, svg};

pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "polar-orbits", version, about = "Polar planetary orbits around the axis of a circular binary")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Directory for output files (created if missing).
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,
    /// Relative integration tolerance; the absolute tolerance is 1% of it.
    #[arg(long, global = true, default_value_t = 1e-12, value_parser = parse_unit)]
    pub tol: f64,
    /// Uniform output samples per integration.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub dense_samples: usize,
    /// Whether the motionless-star velocity is used as a rotating-frame or an
    /// inertial velocity.
    #[arg(long, global = true, value_enum, default_value_t = Convention::Rotating)]
    pub ic_convention: Convention,
    /// Seed for the randomised checks.
    #[arg(long, global = true, default_value_t = 17)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    Rotating,
    Inertial,
}

impl From<Convention> for IcConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Rotating => IcConvention::Rotating,
            Convention::Inertial => IcConvention::Inertial,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StarArg {
    Lighter,
    Heavier,
    Both,
}

impl StarArg {
    fn stars(self) -> &'static [Star] {
        match self {
            StarArg::Lighter => &[Star::Lighter],
            StarArg::Heavier => &[Star::Heavier],
            StarArg::Both => &[Star::Lighter, Star::Heavier],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Stability,
    Frequency,
    Perturbation,
    All,
}

impl KindArg {
    fn kinds(self) -> &'static [BoundaryKind] {
        match self {
            KindArg::Stability => &[BoundaryKind::Stability],
            KindArg::Frequency => &[BoundaryKind::FrequencyRatio],
            KindArg::Perturbation => &[BoundaryKind::Perturbation],
            KindArg::All => &BoundaryKind::ALL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FrameArg {
    Rotating,
    Inertial,
}

impl From<FrameArg> for Frame {
    fn from(f: FrameArg) -> Self {
        match f {
            FrameArg::Rotating => Frame::Rotating,
            FrameArg::Inertial => Frame::Inertial,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Circular orbit around the axis at (w, b) and its prerequisite flags,
    /// as JSON on stdout.
    Equilibrium {
        #[arg(long, allow_negative_numbers = true)]
        w: f64,
        #[arg(long)]
        b: f64,
    },
    /// Region boundaries as polylines in b, one CSV per kind and star.
    Curves {
        #[arg(long, value_enum, default_value_t = KindArg::All)]
        kind: KindArg,
        #[arg(long, value_enum, default_value_t = StarArg::Both)]
        star: StarArg,
        #[arg(long, default_value_t = 1.0)]
        b_min: f64,
        #[arg(long, default_value_t = 100.0)]
        b_max: f64,
        /// Number of geometrically spaced mass ratios.
        #[arg(long, default_value_t = 18, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
    },
    /// Integrate one orbit and classify it.
    Integrate {
        #[arg(long)]
        w: f64,
        #[arg(long)]
        b: f64,
        /// Integration span in stellar periods.
        #[arg(long, default_value_t = 1.0, value_parser = parse_positive)]
        periods: f64,
        /// Starting angle of the planet around the axis, radians.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phase: f64,
        /// Frame of the positions and velocities in trajectory.csv.
        #[arg(long, value_enum, default_value_t = FrameArg::Rotating)]
        frame: FrameArg,
        /// Also write trajectory.svg and m.svg.
        #[arg(long)]
        svg: bool,
    },
    /// Integrate and classify every point of a grid.
    Survey {
        /// JSON grid file; the built-in 540-point grid when absent.
        #[arg(long)]
        grid: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phase: f64,
        /// Suppress the per-point log lines.
        #[arg(long)]
        quiet: bool,
    },
    /// Tabulate the co-rotating tilted-circle solution and check the torque
    /// balance along it.
    Ansatz {
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[arg(long, default_value_t = 100.0)]
        f: f64,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        alpha0: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        x0: f64,
        #[arg(long, default_value_t = 2001, value_parser = clap::value_parser!(u32).range(2..))]
        samples: u32,
        /// Random parameter draws for the closed-form identity checks.
        #[arg(long, default_value_t = 10_000)]
        draws: usize,
    },
    /// Torque-balance residual along a trajectory table, with dM/dt from a
    /// five-point stencil.
    TorqueCheck {
        #[arg(long)]
        input: PathBuf,
        /// Mass ratio of the binary that produced the trajectory.
        #[arg(long, required_unless_present = "omega")]
        b: Option<f64>,
        /// Angular velocity of the frame, instead of `--b`.
        #[arg(long, conflicts_with = "b")]
        omega: Option<f64>,
    },
}

fn parse_positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        Ok(_) => Err("must be a positive finite number".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_unit(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x < 1.0 => Ok(x),
        Ok(_) => Err("must lie in (0, 1)".into()),
        Err(e) => Err(e.to_string()),
    }
}

/// Failure of a command, with its exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
    Io(PathBuf, io::Error),
    /// Unreadable or malformed input table or grid file.
    Input(PathBuf, String),
    /// Nothing could be computed.
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input(..) => EXIT_USAGE,
            CliError::Core(e) if e.is_numerical() => EXIT_NUMERICAL,
            CliError::Core(_) => EXIT_DOMAIN,
            CliError::Io(..) => EXIT_IO,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }

    pub fn report(&self) -> ErrorReport {
        let code = self.exit_code();
        let (error, message) = match self {
            CliError::Core(e) => return ErrorReport::from_core(e, code),
            CliError::Usage(m) => ("Usage", m.clone()),
            CliError::Io(p, e) => ("Io", format!("{}: {e}", p.display())),
            CliError::Input(p, m) => ("Input", format!("{}: {m}", p.display())),
            CliError::Numerical(m) => ("Numerical", m.clone()),
        };
        ErrorReport { error: error.into(), message, exit_code: code }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = Result<T, CliError>;

impl GlobalArgs {
    fn integrator(&self) -> CliResult<IntegratorConfig> {
        let cfg = IntegratorConfig {
            rel_tol: self.tol,
            abs_tol: self.tol * 1e-2,
            dense_samples: self.dense_samples,
            ..IntegratorConfig::default()
        };
        cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(cfg)
    }

    fn out_path(&self, name: &str) -> CliResult<PathBuf> {
        fs::create_dir_all(&self.out_dir).map_err(|e| CliError::Io(self.out_dir.clone(), e))?;
        Ok(self.out_dir.join(name))
    }

    /// Create `name` in the output directory and hand a buffered writer to
    /// `body`.
    fn write_file<F>(&self, name: &str, body: F) -> CliResult<PathBuf>
    where
        F: FnOnce(&mut BufWriter<fs::File>) -> Result<(), TableError>,
    {
        let path = self.out_path(name)?;
        let file = fs::File::create(&path).map_err(|e| CliError::Io(path.clone(), e))?;
        let mut w = BufWriter::new(file);
        body(&mut w).map_err(|e| CliError::Io(path.clone(), io::Error::other(e.to_string())))?;
        w.flush().map_err(|e| CliError::Io(path.clone(), e))?;
        Ok(path)
    }

    fn write_json<T: serde::Serialize>(&self, name: &str, value: &T) -> CliResult<PathBuf> {
        self.write_file(name, |w| {
            serde_json::to_writer_pretty(&mut *w, value).map_err(|e| TableError::Format(e.to_string()))?;
            w.write_all(b"\n").map_err(|e| TableError::Format(e.to_string()))
        })
    }

    fn write_text(&self, name: &str, text: &str) -> CliResult<PathBuf> {
        self.write_file(name, |w| w.write_all(text.as_bytes()).map_err(|e| TableError::Format(e.to_string())))
    }
}

fn print_json<T: serde::Serialize>(out: &mut dyn Write, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("reports serialize");
    writeln!(out, "{text}").map_err(|e| CliError::Io(PathBuf::from("<stdout>"), e))
}

/// Parse `args` and run the command, returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{}", e.render());
                return 0;
            }
            let _ = write!(stderr, "{}", e.render());
            return emit_error(&CliError::Usage(e.kind().to_string()), stderr);
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => emit_error(&e, stderr),
    }
}

fn emit_error(e: &CliError, stderr: &mut dyn Write) -> i32 {
    let report = e.report();
    let _ = writeln!(stderr, "{}", serde_json::to_string(&report).expect("error report serializes"));
    report.exit_code
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let g = &cli.global;
    match &cli.command {
        Command::Equilibrium { w, b } => cmd_equilibrium(*w, *b, stdout),
        Command::Curves { kind, star, b_min, b_max, n } => cmd_curves(g, *kind, *star, (*b_min, *b_max), *n, stderr),
        Command::Integrate { w, b, periods, phase, frame, svg } => {
            cmd_integrate(g, *w, *b, *periods, *phase, (*frame).into(), *svg, stdout)
        }
        Command::Survey { grid, phase, quiet } => cmd_survey(g, grid.as_deref(), *phase, *quiet, stdout),
        Command::Ansatz { rho, f, omega, alpha0, x0, samples, draws } => {
            let p = AnsatzParams { rho: *rho, f: *f, omega: *omega, alpha0: *alpha0, x0: *x0 };
            cmd_ansatz(g, p, *samples as usize, *draws, stdout)
        }
        Command::TorqueCheck { input, b, omega } => cmd_torque_check(g, input, *b, *omega, stdout),
    }
}

fn cmd_equilibrium(w: f64, b: f64, stdout: &mut dyn Write) -> CliResult<()> {
    let orbit = EquilibriumOrbit::analyze(w, b)?;
    print_json(stdout, &EquilibriumReport { orbit, all_prerequisites: orbit.prereq.all() })
}

fn cmd_curves(
    g: &GlobalArgs,
    kind: KindArg,
    star: StarArg,
    (b_min, b_max): (f64, f64),
    n: u32,
    stderr: &mut dyn Write,
) -> CliResult<()> {
    if !(b_min >= 1.0 && b_max >= b_min && b_max.is_finite()) {
        return Err(CliError::Usage("need 1 <= b-min <= b-max".into()));
    }
    let b_values: Vec<f64> = geometric_grid(b_min, b_max, n as usize).collect();
    for &k in kind.kinds() {
        for &s in star.stars() {
            let points = trace_boundary(k, s, &b_values)?;
            let name = format!("curves_{}_{}.csv", k.name(), s.name());
            let path = g.write_file(&name, |w| tables::write_curve(w, k, s, &points))?;
            let _ = writeln!(stderr, "wrote {}", path.display());
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_integrate(
    g: &GlobalArgs,
    w: f64,
    b: f64,
    periods: f64,
    phase: f64,
    frame: Frame,
    with_svg: bool,
    stdout: &mut dyn Write,
) -> CliResult<()> {
    let icfg = g.integrator()?;
    if !phase.is_finite() {
        return Err(CliError::Usage("phase must be finite".into()));
    }
    let orbit = EquilibriumOrbit::analyze(w, b)?;
    let sys = SystemConfig::new(b)?;
    let convention = g.ic_convention.into();
    let s0 = dynamics::initial_conditions(&orbit, &sys, phase, convention)?;
    let traj = dynamics::integrate(&s0, &sys, &icfg, periods * sys.stellar_period())?;
    let classification = classify(&traj).ok();
    let report = IntegrateReport::new(orbit, &traj, classification, phase, convention, periods, frame);

    g.write_file("trajectory.csv", |w| tables::write_trajectory(w, &traj, frame))?;
    g.write_file("m_series.csv", |w| tables::write_m_series(w, &traj))?;
    g.write_json("classification.json", &report)?;
    if with_svg {
        g.write_text("trajectory.svg", &svg::trajectory_svg(&traj))?;
        g.write_text("m.svg", &svg::m_svg(&traj))?;
    }
    print_json(stdout, &report)
}

fn log_row(row: &SurveyRow) -> String {
    let verdict = match (row.verdict(), &row.error) {
        (Some(v), _) => v.name().to_string(),
        (None, Some(e)) => format!("error: {e}"),
        (None, None) => "unclassified".into(),
    };
    format!("{} b={} w={} {}", row.point.star.name(), row.point.b, row.point.w, verdict)
}

fn cmd_survey(g: &GlobalArgs, grid: Option<&Path>, phase: f64, quiet: bool, stdout: &mut dyn Write) -> CliResult<()> {
    let integrator = g.integrator()?;
    if !phase.is_finite() {
        return Err(CliError::Usage("phase must be finite".into()));
    }
    let points = match grid {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
            let file = GridFile::parse(&text).map_err(|e| CliError::Input(path.to_path_buf(), e.to_string()))?;
            file.points()?
        }
        None => parallel::expand(&default_grid())?,
    };
    let cfg = SurveyConfig { integrator, phase, convention: g.ic_convention.into() };

    // log lines come from worker threads, so they go straight to the process
    // stderr rather than through the borrowed writer
    let rows = parallel::survey_points(&points, &cfg, |row| {
        if !quiet {
            eprintln!("{}", log_row(row));
        }
    })?;

    let summary = summarize(&rows);
    let bound = |r: &&SurveyRow| r.verdict().is_some_and(|v| v != Verdict::Unbound);
    let max_of = |f: fn(&SurveyRow) -> Option<f64>| rows.iter().filter(bound).filter_map(f).reduce(f64::max);
    let report = SurveyReport {
        settings: SurveySettings {
            grid: grid.map_or_else(|| "default".to_string(), |p| p.display().to_string()),
            phase,
            ic_convention: cfg.convention,
            integrator,
        },
        max_jacobi_drift_bound: max_of(|r| r.jacobi_drift),
        max_torque_residual_bound: max_of(|r| r.torque_residual),
        summary,
    };
    g.write_file("results.csv", |w| tables::write_results(w, &rows))?;
    g.write_file("fig_lighter.csv", |w| tables::write_figure(w, &report.summary.lighter))?;
    g.write_file("fig_heavier.csv", |w| tables::write_figure(w, &report.summary.heavier))?;
    g.write_json("summary.json", &report)?;

    let s = &report.summary;
    let _ = writeln!(
        stdout,
        "{} points: {} planar, {} nonplanar, {} unbound, {} unclassified",
        s.total, s.verdicts.planar, s.verdicts.nonplanar, s.verdicts.unbound, s.verdicts.unclassified
    );
    if s.verdicts.unclassified == s.total {
        return Err(CliError::Numerical("no survey point could be classified".into()));
    }
    Ok(())
}

/// Largest closed-form versus direct discrepancies over random parameters.
pub fn random_ansatz_checks(seed: u64, draws: usize) -> RandomChecks {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = RandomChecks {
        seed,
        draws,
        max_m_error: 0.0,
        max_torque_error: 0.0,
        max_solution_residual: 0.0,
        max_solution_m_error: 0.0,
    };
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
    for _ in 0..draws {
        let p = AnsatzParams {
            rho: rng.random_range(0.01..1.0),
            f: rng.random_range(0.5..100.0),
            omega: rng.random_range(0.0..10.0),
            alpha0: rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
            x0: rng.random_range(-1.0..1.0),
        };
        let t = rng.random_range(0.0..10.0);
        let law = analytic_solution(p.alpha0, p.omega, p.x0);
        let s = ansatz_state(&p, &law, t);
        let (t1, t2) = ansatz_torques(&p, &law, t);
        let m = ansatz_m(&p, &law, t);
        out.max_m_error = out.max_m_error.max(rel(m, axial_angular_momentum(&s)));
        out.max_torque_error = out
            .max_torque_error
            .max(rel(t1, coriolis_torque(&s, p.omega)))
            .max(rel(t2, centrifugal_torque(&s, p.omega)));
        out.max_solution_residual = out.max_solution_residual.max(balance_residual(&p, &law, t).abs());
        out.max_solution_m_error = out.max_solution_m_error.max(rel(m, solution_m(&p, t)));
    }
    out
}

fn cmd_ansatz(g: &GlobalArgs, p: AnsatzParams, samples: usize, draws: usize, stdout: &mut dyn Write) -> CliResult<()> {
    p.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    // one stellar period, or one planetary period when the stars are still
    let span = if p.omega > 0.0 { 2.0 * std::f64::consts::PI / p.omega } else { 2.0 * std::f64::consts::PI / p.f };
    let law = analytic_solution(p.alpha0, p.omega, p.x0);
    let rows: Vec<AnsatzRow> = (0..samples)
        .map(|i| {
            let t = span * i as f64 / (samples - 1) as f64;
            let (t1, t2) = ansatz_torques(&p, &law, t);
            AnsatzRow {
                t,
                m_ansatz: ansatz_m(&p, &law, t),
                m_solution: solution_m(&p, t),
                t1,
                t2,
                residual: balance_residual(&p, &law, t),
            }
        })
        .collect();
    g.write_file("ansatz.csv", |w| tables::write_ansatz(w, &rows))?;
    let m0 = rows[0].m_ansatz;
    let report = AnsatzReport {
        params: p,
        samples,
        span,
        max_abs_residual: rows.iter().map(|r| r.residual.abs()).fold(0.0, f64::max),
        max_abs_m_difference: rows.iter().map(|r| (r.m_ansatz - r.m_solution).abs()).fold(0.0, f64::max),
        ripple_ratio: ripple_ratio(&p),
        m_sign_changed: rows.iter().any(|r| r.m_ansatz.signum() != m0.signum()),
        random: random_ansatz_checks(g.seed, draws),
    };
    g.write_json("ansatz_summary.json", &report)?;
    print_json(stdout, &report)
}

fn cmd_torque_check(
    g: &GlobalArgs,
    input: &Path,
    b: Option<f64>,
    omega: Option<f64>,
    stdout: &mut dyn Write,
) -> CliResult<()> {
    let (b, omega) = match (b, omega) {
        (Some(b), _) => (Some(b), kepler_frequency(b)?),
        (None, Some(w)) if w >= 0.0 && w.is_finite() => (None, w),
        _ => return Err(CliError::Usage("give --b or a non-negative --omega".into())),
    };
    let file = fs::File::open(input).map_err(|e| CliError::Io(input.to_path_buf(), e))?;
    let states = tables::read_trajectory(io::BufReader::new(file))
        .map_err(|e| CliError::Input(input.to_path_buf(), e.to_string()))?;
    let rotating = states
        .iter()
        .map(|s| match s.frame {
            Frame::Rotating => Ok(*s),
            Frame::Inertial => inertial_to_rotating(s, omega),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let scan = balance_scan(&rotating, omega)?;
    let torque_scale =
        rotating.iter().map(|s| (coriolis_torque(s, omega) + centrifugal_torque(s, omega)).abs()).fold(0.0, f64::max);
    let report = TorqueCheckReport {
        input: input.display().to_string(),
        b,
        omega,
        samples: rotating.len(),
        evaluated: scan.residuals.len(),
        max_abs_residual: scan.max_abs,
        t_of_max: scan.t_of_max,
        max_abs_torque: torque_scale,
    };
    g.write_json("torque_check.json", &report)?;
    print_json(stdout, &report)
}
