//! `darkcharge` command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input, 2 integration failure, 3 I/O
//! failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use darkcharge::config::ConfigMap;
use darkcharge::dynamics::initial_dark_state;
use darkcharge::emit::{emit_table, trajectory_table, Cell, Table};
use darkcharge::hamiltonian::{adiabatic_bounds, eigensystem, gap_min, m_coupling};
use darkcharge::sweep::{self, SeriesKey, SweepConfig, TfGrid};
use darkcharge::{bath, observables, BatterySpec, Error, MasterEquation, OutputFormat, PulseOrdering, Variant};

const EXIT_VALIDATION: u8 = 1;
const EXIT_INTEGRATION: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "darkcharge", version, about = "Adiabatic dark-state charging of an open three-level quantum battery")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Instantaneous eigenvalues, eigenvectors and M(s) along the schedule.
    Eigen {
        #[command(flatten)]
        common: Common,
        /// Single scaled time instead of a grid.
        #[arg(long)]
        s: Option<f64>,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Ohmic rate γ(ω) on a symmetric grid of ω/ω_c.
    SpectralDensity {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2.0)]
        x_max: f64,
        #[arg(long, default_value_t = 401)]
        points: usize,
    },
    /// Rate coefficients x1..x10, y1..y4 along the schedule.
    Rates {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// One trajectory from the dark state, sampled at 1001 values of s.
    Evolve {
        #[command(flatten)]
        common: Common,
    },
    /// Final observables over a t_f grid and the optimal charging time.
    SweepTf {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Optimal charging time for each coupling in --eta-g2.
    SweepCoupling {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Final observables at fixed t_f for each inverse temperature in --beta.
    SweepTemp {
        #[command(flatten)]
        common: Common,
    },
    /// Trace distance to the instantaneous Gibbs state along a trajectory
    /// (at the optimal t_f unless --tf is given).
    Distance {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: GridArgs,
    },
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// Drive amplitude(s) on the |λ1⟩-|λ2⟩ transition; comma-separated for grids.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    omega_a: Vec<f64>,
    /// Drive amplitude(s) on the |λ2⟩-|λ3⟩ transition.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    omega_b: Vec<f64>,
    /// System-bath coupling ηg².
    #[arg(long = "eta-g2", value_delimiter = ',', allow_negative_numbers = true)]
    eta_g2: Vec<f64>,
    /// Inverse temperature(s).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    beta: Vec<f64>,
    /// Bath cutoff frequency.
    #[arg(long, allow_negative_numbers = true)]
    omega_c: Option<f64>,
    /// Total evolution time(s).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    tf: Vec<f64>,
    /// RK4 steps per trajectory, rounded up to a multiple of 1000
    /// (default max(20000, 200 tf)).
    #[arg(long)]
    steps: Option<usize>,
    /// full | adiabatic
    #[arg(long)]
    variant: Option<Variant>,
    /// charge | paper
    #[arg(long)]
    ordering: Option<PulseOrdering>,
    /// Battery levels λ1,λ2,λ3.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    lambda: Vec<f64>,
    /// csv | json
    #[arg(long)]
    format: Option<OutputFormat>,
    /// Output file (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// key = value file; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long)]
    workers: Option<usize>,
    /// Drop the X-Z cross-correlation rates.
    #[arg(long)]
    no_cross_correlations: bool,
}

#[derive(Args, Debug, Clone, Default)]
struct GridArgs {
    /// Log-spaced t_f grid start (used when --tf is absent).
    #[arg(long)]
    tf_min: Option<f64>,
    #[arg(long)]
    tf_max: Option<f64>,
    #[arg(long)]
    tf_points: Option<usize>,
    /// Skip the golden-section refinement around the optimum.
    #[arg(long)]
    no_refine: bool,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Integration { .. } | Error::SweepFailed(_) => EXIT_INTEGRATION,
        Error::Io { .. } => EXIT_IO,
        _ => EXIT_VALIDATION,
    }
}

/// Defaults, then the config file, then flags.
fn resolve(common: &Common, grid: Option<&GridArgs>) -> Result<SweepConfig, Error> {
    let mut cfg = SweepConfig::default();
    if let Some(path) = &common.config {
        cfg.apply_config(&ConfigMap::read(path)?)?;
    }
    if !common.omega_a.is_empty() || !common.omega_b.is_empty() {
        let wa: Vec<f64> = if common.omega_a.is_empty() { cfg.drives.iter().map(|d| d.0).collect() } else { common.omega_a.clone() };
        let wb: Vec<f64> = if common.omega_b.is_empty() { cfg.drives.iter().map(|d| d.1).collect() } else { common.omega_b.clone() };
        let mut drives = Vec::new();
        for a in dedup(wa) {
            for b in dedup(wb.clone()) {
                drives.push((a, b));
            }
        }
        cfg.drives = drives;
    }
    if !common.eta_g2.is_empty() {
        cfg.eta_g2 = common.eta_g2.clone();
    }
    if !common.beta.is_empty() {
        cfg.beta = common.beta.clone();
    }
    if let Some(v) = common.omega_c {
        cfg.omega_c = v;
    }
    if common.no_cross_correlations {
        cfg.cross_correlations = false;
    }
    if !common.tf.is_empty() {
        cfg.tf = TfGrid::List(common.tf.clone());
    }
    if let Some(g) = grid {
        if common.tf.is_empty() && (g.tf_min.is_some() || g.tf_max.is_some() || g.tf_points.is_some()) {
            let (min, max, points) = match cfg.tf {
                TfGrid::Log { min, max, points } => (min, max, points),
                TfGrid::List(_) => (0.1, 5000.0, 60),
            };
            cfg.tf = TfGrid::Log {
                min: g.tf_min.unwrap_or(min),
                max: g.tf_max.unwrap_or(max),
                points: g.tf_points.unwrap_or(points),
            };
        }
        if g.no_refine {
            cfg.refine = false;
        }
    }
    if let Some(v) = common.steps {
        cfg.steps = Some(v);
    }
    if let Some(v) = common.variant {
        cfg.variant = v;
    }
    if let Some(v) = common.ordering {
        cfg.ordering = v;
    }
    if !common.lambda.is_empty() {
        let levels: [f64; 3] = common
            .lambda
            .clone()
            .try_into()
            .map_err(|v: Vec<f64>| Error::InvalidParameter(format!("--lambda needs 3 levels, got {}", v.len())))?;
        cfg.battery = BatterySpec::new(levels)?;
    }
    if let Some(v) = common.format {
        cfg.format = v;
    }
    if let Some(v) = &common.out {
        cfg.out = Some(v.clone());
    }
    if let Some(v) = common.workers {
        cfg.workers = v;
    }
    Ok(cfg)
}

fn dedup(mut v: Vec<f64>) -> Vec<f64> {
    let mut seen = Vec::new();
    v.retain(|x| {
        let fresh = !seen.contains(x);
        seen.push(*x);
        fresh
    });
    v
}

/// The one parameter set of a single-run command.
fn single(cfg: &SweepConfig) -> Result<SeriesKey, Error> {
    match cfg.series().as_slice() {
        [key] => Ok(*key),
        many => Err(Error::InvalidParameter(format!(
            "this command takes one value per parameter, got {} combinations",
            many.len()
        ))),
    }
}

fn single_tf(cfg: &SweepConfig, default: f64) -> Result<f64, Error> {
    match &cfg.tf {
        TfGrid::List(v) if v.len() == 1 => Ok(v[0]),
        TfGrid::List(v) => Err(Error::InvalidParameter(format!("expected one --tf value, got {}", v.len()))),
        TfGrid::Log { .. } => Ok(default),
    }
}

fn warn_regime(cfg: &SweepConfig) -> Result<(), Error> {
    for key in cfg.series() {
        let sched = key.schedule(cfg.ordering)?;
        for w in key.bath(cfg)?.regime_warnings(gap_min(&sched).0) {
            log::warn!("{w}");
        }
    }
    Ok(())
}

fn s_grid(points: usize) -> Vec<f64> {
    let n = points.max(2);
    (0..n).map(|i| if i == n - 1 { 1.0 } else { i as f64 / (n - 1) as f64 }).collect()
}

fn eigen_table(cfg: &SweepConfig, s: Option<f64>, points: usize) -> Result<Table, Error> {
    let sched = single(cfg)?.schedule(cfg.ordering)?;
    let mut cols: Vec<String> = ["s", "A", "B", "gap", "E1", "E2", "E3"].map(String::from).to_vec();
    for k in 1..=3 {
        for i in 1..=3 {
            cols.push(format!("eps{k}_{i}"));
        }
    }
    cols.push("M".into());
    let mut table = Table::new(cols);
    let grid = s.map_or_else(|| s_grid(points), |s| vec![s]);
    for s in grid {
        let es = eigensystem(&sched, s)?;
        let mut row: Vec<Cell> = vec![s.into(), es.a_val.into(), es.b_val.into(), es.gap.into()];
        row.extend(es.eigvals.iter().map(|&e| Cell::from(e)));
        for k in 0..3 {
            row.extend(es.eigvec(k).iter().map(|&v| Cell::from(v)));
        }
        row.push(m_coupling(&sched, s)?.into());
        table.push(row);
    }
    Ok(table)
}

fn rates_table(cfg: &SweepConfig, points: usize) -> Result<Table, Error> {
    let key = single(cfg)?;
    let sched = key.schedule(cfg.ordering)?;
    let b = key.bath(cfg)?;
    let mut cols = vec!["s".to_string()];
    cols.extend((1..=10).map(|i| format!("x{i}")));
    cols.extend((1..=4).map(|i| format!("y{i}")));
    let mut table = Table::new(cols);
    for s in s_grid(points) {
        let r = bath::rate_set(&b, &sched, s)?;
        let mut row = vec![Cell::from(s)];
        row.extend(r.x.iter().chain(r.y.iter()).map(|&v| Cell::from(v)));
        table.push(row);
    }
    Ok(table)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Eigen { common, s, points } => {
            let cfg = resolve(&common, None)?;
            cfg.validate()?;
            emit_table(&eigen_table(&cfg, s, points)?, cfg.format, cfg.out.as_deref())
        }
        Command::SpectralDensity { common, x_max, points } => {
            let cfg = resolve(&common, None)?;
            cfg.validate()?;
            if !(x_max > 0.0 && x_max.is_finite()) {
                return Err(Error::InvalidParameter(format!("--x-max must be positive, got {x_max}")));
            }
            let b = single(&cfg)?.bath(&cfg)?;
            emit_table(&sweep::spectral_table(&b, x_max, points), cfg.format, cfg.out.as_deref())
        }
        Command::Rates { common, points } => {
            let cfg = resolve(&common, None)?;
            cfg.validate()?;
            emit_table(&rates_table(&cfg, points)?, cfg.format, cfg.out.as_deref())
        }
        Command::Evolve { common } => {
            let cfg = resolve(&common, None)?;
            cfg.validate()?;
            warn_regime(&cfg)?;
            let key = single(&cfg)?;
            let tf = single_tf(&cfg, 9.93)?;
            let sched = key.schedule(cfg.ordering)?;
            let b = key.bath(&cfg)?;
            let bounds = adiabatic_bounds(&sched, &b);
            log::info!("tf = {tf}; gap bound {:.4}, bath bound {:.4e}", bounds.tf_gap_bound, bounds.tf_bath_bound);
            let steps = cfg.steps.unwrap_or_else(|| darkcharge::dynamics::default_steps(tf));
            let traj = MasterEquation::new(sched, b).evolve(tf, cfg.variant, &initial_dark_state(), steps)?;
            let records = observables::record(&traj, &sched, &b, &cfg.battery)?;
            emit_table(&trajectory_table(&traj, &records), cfg.format, cfg.out.as_deref())
        }
        Command::SweepTf { common, grid } | Command::SweepCoupling { common, grid } => {
            let cfg = resolve(&common, Some(&grid))?;
            let result = sweep::sweep_tf(&cfg)?;
            for o in &result.optima {
                log::info!(
                    "omega_a={} omega_b={} eta_g2={} beta={}: tf_opt={:.6} (dimensionless {:.6}), peak {:.6}",
                    o.series.omega_a,
                    o.series.omega_b,
                    o.series.eta_g2,
                    o.series.beta,
                    o.tf_opt,
                    o.tf_opt_dimensionless,
                    o.peak_dark_population
                );
            }
            sweep::emit(&result, cfg.format, cfg.out.as_deref())
        }
        Command::SweepTemp { common } => {
            let mut cfg = resolve(&common, None)?;
            if common.tf.is_empty() && !config_sets(&common, "tf") {
                cfg.tf = TfGrid::List(vec![9.93]);
            }
            if common.beta.is_empty() && !config_sets(&common, "beta") {
                cfg.beta = vec![5.0 / 2.6, 1.0 / 2.6, 1.0 / (5.0 * 2.6)];
            }
            let result = sweep::sweep_temperature(&cfg)?;
            sweep::emit(&result, cfg.format, cfg.out.as_deref())
        }
        Command::Distance { common, grid } => {
            let cfg = resolve(&common, Some(&grid))?;
            let tf = match &cfg.tf {
                TfGrid::List(v) if v.len() == 1 => Some(v[0]),
                TfGrid::List(v) => {
                    return Err(Error::InvalidParameter(format!("expected one --tf value, got {}", v.len())));
                }
                TfGrid::Log { .. } => None,
            };
            let traces = sweep::distance_trace(&cfg, tf)?;
            emit_table(&sweep::distance_table(&traces), cfg.format, cfg.out.as_deref())
        }
    }
}

fn config_sets(common: &Common, key: &str) -> bool {
    common
        .config
        .as_deref()
        .and_then(|p| ConfigMap::read(p).ok())
        .is_some_and(|c| c.contains(key) || (key == "tf" && (c.contains("tf_min") || c.contains("tf_max"))))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
