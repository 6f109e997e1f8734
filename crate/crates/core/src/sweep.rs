//! Parameter sweeps over the charging time, bath coupling, temperature and
//! drive strengths.
//!
//! Every sweep cell is an independent evolve-and-measure run. Cells are
//! executed on a bounded rayon pool and the rows are sorted by their
//! parameter tuple afterwards, so output does not depend on the worker
//! count.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bath::BathSpec;
use crate::config::ConfigMap;
use crate::dynamics::{default_steps, initial_dark_state};
use crate::emit::{self, Cell, OutputFormat, Table};
use crate::error::{Error, Result};
use crate::hamiltonian::{adiabatic_bounds, DriveSchedule, PulseOrdering};
use crate::lindblad::{MasterEquation, Variant};
use crate::observables::{self, BatterySpec, ObservableRecord};

/// Relative `t_f` resolution of the local refinement around the optimum.
pub const REFINE_TOLERANCE: f64 = 1e-2;

/// Keys understood by [`SweepConfig::apply_config`].
pub const CONFIG_KEYS: &[&str] = &[
    "drive",
    "omega_a",
    "omega_b",
    "eta_g2",
    "beta",
    "omega_c",
    "cross_correlations",
    "tf",
    "tf_min",
    "tf_max",
    "tf_points",
    "refine",
    "lambda",
    "variant",
    "ordering",
    "steps",
    "workers",
    "format",
    "out",
];

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TfGrid {
    List(Vec<f64>),
    /// `points` log-spaced values in `[min, max]`.
    Log { min: f64, max: f64, points: usize },
}

impl Default for TfGrid {
    fn default() -> Self {
        TfGrid::Log { min: 0.1, max: 5000.0, points: 60 }
    }
}

impl TfGrid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            TfGrid::List(v) => v.clone(),
            TfGrid::Log { min, max, points } => match points {
                0 => Vec::new(),
                1 => vec![*min],
                n => {
                    let (lo, hi) = (min.ln(), max.ln());
                    (0..*n)
                        .map(|i| {
                            if i == n - 1 {
                                *max
                            } else {
                                (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp()
                            }
                        })
                        .collect()
                }
            },
        }
    }
}

/// Sweep description. Grids are combined as a Cartesian product of drive
/// pairs, couplings and inverse temperatures; each combination is one
/// series scanned over the `t_f` grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub drives: Vec<(f64, f64)>,
    pub eta_g2: Vec<f64>,
    pub beta: Vec<f64>,
    pub omega_c: f64,
    pub cross_correlations: bool,
    pub tf: TfGrid,
    /// Golden-section refinement around each series' coarse optimum.
    pub refine: bool,
    pub battery: BatterySpec,
    pub variant: Variant,
    pub ordering: PulseOrdering,
    /// RK4 steps per run; `None` uses [`default_steps`].
    pub steps: Option<usize>,
    pub workers: usize,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let bath = BathSpec::default();
        Self {
            drives: vec![(1.0, 1.0)],
            eta_g2: vec![bath.eta_g2],
            beta: vec![bath.beta],
            omega_c: bath.omega_c,
            cross_correlations: true,
            tf: TfGrid::default(),
            refine: true,
            battery: BatterySpec::default(),
            variant: Variant::Full,
            ordering: PulseOrdering::Charge,
            steps: None,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            format: OutputFormat::Csv,
            out: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.drives.is_empty() || self.eta_g2.is_empty() || self.beta.is_empty() {
            return Err(Error::param("drive, eta_g2 and beta grids must be nonempty"));
        }
        let tfs = self.tf.values();
        if tfs.is_empty() {
            return Err(Error::param("tf grid is empty"));
        }
        if let Some(bad) = tfs.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
            return Err(Error::param(format!("tf values must be positive, got {bad}")));
        }
        if let TfGrid::Log { min, max, .. } = self.tf {
            if !(min > 0.0 && max >= min) {
                return Err(Error::param(format!("invalid tf range [{min}, {max}]")));
            }
        }
        if self.workers == 0 {
            return Err(Error::param("workers must be >= 1"));
        }
        if let Some(steps) = self.steps {
            if steps < crate::dynamics::MIN_STEPS {
                return Err(Error::param(format!("steps must be >= {}", crate::dynamics::MIN_STEPS)));
            }
        }
        for series in self.series() {
            series.schedule(self.ordering)?;
            series.bath(self)?;
        }
        Ok(())
    }

    /// Parameter combinations in grid order.
    pub fn series(&self) -> Vec<SeriesKey> {
        let mut out = Vec::new();
        for &(omega_a, omega_b) in &self.drives {
            for &eta_g2 in &self.eta_g2 {
                for &beta in &self.beta {
                    out.push(SeriesKey { omega_a, omega_b, eta_g2, beta });
                }
            }
        }
        out
    }

    /// Applies keys from a config file on top of `self`. Unknown keys are
    /// rejected so that typos do not silently fall back to defaults.
    pub fn apply_config(&mut self, cfg: &ConfigMap) -> Result<()> {
        if let Some(key) = cfg.keys().find(|k| !CONFIG_KEYS.contains(k)) {
            let line = cfg.raw(key).first().map_or(0, |(l, _)| *l);
            return Err(Error::Config { line, message: format!("unknown key `{key}`") });
        }
        let mut drives = cfg.pairs_f64("drive")?;
        let wa = cfg.list_f64("omega_a")?;
        let wb = cfg.list_f64("omega_b")?;
        if !wa.is_empty() || !wb.is_empty() {
            let wa = if wa.is_empty() { vec![1.0] } else { wa };
            let wb = if wb.is_empty() { vec![1.0] } else { wb };
            for a in &wa {
                for b in &wb {
                    drives.push((*a, *b));
                }
            }
        }
        if !drives.is_empty() {
            self.drives = drives;
        }
        let eta = cfg.list_f64("eta_g2")?;
        if !eta.is_empty() {
            self.eta_g2 = eta;
        }
        let beta = cfg.list_f64("beta")?;
        if !beta.is_empty() {
            self.beta = beta;
        }
        if let Some(v) = cfg.scalar("omega_c")? {
            self.omega_c = v;
        }
        if let Some(v) = cfg.scalar("cross_correlations")? {
            self.cross_correlations = v;
        }
        let tf = cfg.list_f64("tf")?;
        if !tf.is_empty() {
            self.tf = TfGrid::List(tf);
        } else if cfg.contains("tf_min") || cfg.contains("tf_max") || cfg.contains("tf_points") {
            let (min, max, points) = match self.tf {
                TfGrid::Log { min, max, points } => (min, max, points),
                TfGrid::List(_) => (0.1, 5000.0, 60),
            };
            self.tf = TfGrid::Log {
                min: cfg.scalar("tf_min")?.unwrap_or(min),
                max: cfg.scalar("tf_max")?.unwrap_or(max),
                points: cfg.scalar("tf_points")?.unwrap_or(points),
            };
        }
        if let Some(v) = cfg.scalar("refine")? {
            self.refine = v;
        }
        let lambda = cfg.list_f64("lambda")?;
        if !lambda.is_empty() {
            let levels: [f64; 3] = lambda
                .try_into()
                .map_err(|v: Vec<f64>| Error::param(format!("lambda needs 3 levels, got {}", v.len())))?;
            self.battery = BatterySpec::new(levels)?;
        }
        if let Some(v) = cfg.scalar("variant")? {
            self.variant = v;
        }
        if let Some(v) = cfg.scalar("ordering")? {
            self.ordering = v;
        }
        if let Some(v) = cfg.scalar("steps")? {
            self.steps = Some(v);
        }
        if let Some(v) = cfg.scalar("workers")? {
            self.workers = v;
        }
        if let Some(v) = cfg.scalar("format")? {
            self.format = v;
        }
        if let Some((_, v)) = cfg.last("out") {
            self.out = Some(PathBuf::from(v));
        }
        Ok(())
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::param(format!("cannot start worker pool: {e}")))
    }
}

/// One parameter combination of a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesKey {
    pub omega_a: f64,
    pub omega_b: f64,
    pub eta_g2: f64,
    pub beta: f64,
}

impl SeriesKey {
    pub fn schedule(&self, ordering: PulseOrdering) -> Result<DriveSchedule> {
        DriveSchedule::new(self.omega_a, self.omega_b, ordering)
    }

    pub fn bath(&self, cfg: &SweepConfig) -> Result<BathSpec> {
        Ok(BathSpec::new(self.eta_g2, self.beta, cfg.omega_c)?.with_cross_correlations(cfg.cross_correlations))
    }

    fn sort_key(&self) -> [f64; 4] {
        [self.omega_a, self.omega_b, self.eta_g2, self.beta]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Coarse,
    Refine,
}

/// Final-time observables for one `(series, t_f)` cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub series: SeriesKey,
    pub tf: f64,
    pub tf_dimensionless: f64,
    pub steps: usize,
    pub stage: Stage,
    /// `None` when the cell failed; see `error`.
    pub record: Option<ObservableRecord>,
    pub error: Option<String>,
}

impl SweepRow {
    pub fn dark_population(&self) -> Option<f64> {
        self.record.map(|r| r.dark_population)
    }
}

/// Best `t_f` found for one series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub series: SeriesKey,
    /// Argmax of the final dark-state population.
    pub tf_opt: f64,
    pub tf_opt_dimensionless: f64,
    pub peak_dark_population: f64,
    /// Argmax of the final stored energy.
    pub tf_energy_opt: f64,
    pub peak_stored_energy: f64,
    pub tf_gap_bound: f64,
    pub tf_bath_bound: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub ordering: Option<PulseOrdering>,
    pub variant: Option<Variant>,
    pub omega_c: f64,
    pub rows: Vec<SweepRow>,
    pub optima: Vec<Optimum>,
}

impl SweepResult {
    pub fn optimum_for(&self, key: &SeriesKey) -> Option<&Optimum> {
        self.optima.iter().find(|o| o.series == *key)
    }

    /// Rows as a table with the full parameter tuple echoed on every row.
    pub fn to_table(&self) -> Table {
        let mut table = Table::new([
            "ordering",
            "variant",
            "omega_a",
            "omega_b",
            "eta_g2",
            "beta",
            "omega_c",
            "tf",
            "tf_dimensionless",
            "steps",
            "stage",
            "status",
            "dark_population",
            "stored_energy",
            "ergotropy",
            "efficiency",
            "trace_distance_to_gibbs",
            "is_optimal",
            "is_energy_optimal",
        ]);
        let ordering = self.ordering.map_or("", PulseOrdering::as_str);
        let variant = self.variant.map_or("", Variant::as_str);
        for row in &self.rows {
            let opt = self.optimum_for(&row.series);
            let flag = |tf: Option<f64>| -> Cell {
                Cell::Int(i64::from(row.record.is_some() && tf == Some(row.tf)))
            };
            let rec = row.record;
            let mut cells: Vec<Cell> = vec![
                ordering.into(),
                variant.into(),
                row.series.omega_a.into(),
                row.series.omega_b.into(),
                row.series.eta_g2.into(),
                row.series.beta.into(),
                self.omega_c.into(),
                row.tf.into(),
                row.tf_dimensionless.into(),
                row.steps.into(),
                match row.stage {
                    Stage::Coarse => "coarse",
                    Stage::Refine => "refine",
                }
                .into(),
                row.error.as_ref().map_or_else(|| "ok".to_string(), |e| format!("error: {e}")).into(),
            ];
            cells.push(rec.map(|r| r.dark_population).into());
            cells.push(rec.map(|r| r.stored_energy).into());
            cells.push(rec.map(|r| r.ergotropy).into());
            cells.push(rec.and_then(|r| r.efficiency).into());
            cells.push(rec.map(|r| r.trace_distance_to_gibbs).into());
            cells.push(flag(opt.map(|o| o.tf_opt)));
            cells.push(flag(opt.map(|o| o.tf_energy_opt)));
            table.push(cells);
        }
        table
    }

    /// Optima as a table.
    pub fn optima_table(&self) -> Table {
        let mut table = Table::new([
            "omega_a",
            "omega_b",
            "eta_g2",
            "beta",
            "tf_opt",
            "tf_opt_dimensionless",
            "peak_dark_population",
            "tf_energy_opt",
            "peak_stored_energy",
            "tf_gap_bound",
            "tf_bath_bound",
        ]);
        for o in &self.optima {
            table.push(vec![
                o.series.omega_a.into(),
                o.series.omega_b.into(),
                o.series.eta_g2.into(),
                o.series.beta.into(),
                o.tf_opt.into(),
                o.tf_opt_dimensionless.into(),
                o.peak_dark_population.into(),
                o.tf_energy_opt.into(),
                o.peak_stored_energy.into(),
                o.tf_gap_bound.into(),
                o.tf_bath_bound.into(),
            ]);
        }
        table
    }
}

/// Writes `result` as CSV (rows table) or JSON (full structure).
pub fn emit(result: &SweepResult, format: OutputFormat, path: Option<&Path>) -> Result<()> {
    emit::write_to(path, |w| match format {
        OutputFormat::Csv => result.to_table().write_csv(w),
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut *w, result).map_err(std::io::Error::other)?;
            writeln!(w)
        }
    })
}

/// Evolves from the dark state for one cell and measures the final state.
pub fn run_cell(cfg: &SweepConfig, key: &SeriesKey, tf: f64, stage: Stage) -> SweepRow {
    let steps = cfg.steps.unwrap_or_else(|| default_steps(tf));
    let outcome = (|| -> Result<(ObservableRecord, f64)> {
        let sched = key.schedule(cfg.ordering)?;
        let bath = key.bath(cfg)?;
        let eq = MasterEquation::new(sched, bath);
        let traj = eq.evolve(tf, cfg.variant, &initial_dark_state(), steps)?;
        let rec = observables::record_final(&traj, &sched, &bath, &cfg.battery)?;
        Ok((rec, sched.dimensionless_time(tf)))
    })();
    let tf_dimensionless = key.schedule(cfg.ordering).map_or(f64::NAN, |s| s.dimensionless_time(tf));
    match outcome {
        Ok((rec, _)) => SweepRow { series: *key, tf, tf_dimensionless, steps, stage, record: Some(rec), error: None },
        Err(e) => SweepRow { series: *key, tf, tf_dimensionless, steps, stage, record: None, error: Some(e.to_string()) },
    }
}

fn score(row: &SweepRow) -> f64 {
    row.dark_population().unwrap_or(f64::NEG_INFINITY)
}

/// Golden-section maximization of the final dark population on the
/// bracket around the best coarse point.
fn refine_series(cfg: &SweepConfig, key: &SeriesKey, coarse: &[SweepRow]) -> Vec<SweepRow> {
    let Some(best) = coarse
        .iter()
        .enumerate()
        .filter(|(_, r)| r.record.is_some())
        .max_by(|(_, a), (_, b)| score(a).total_cmp(&score(b)))
        .map(|(i, _)| i)
    else {
        return Vec::new();
    };
    let mut lo = coarse[best.saturating_sub(1)].tf;
    let mut hi = coarse[(best + 1).min(coarse.len() - 1)].tf;
    if !(hi > lo) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let eval = |tf: f64, out: &mut Vec<SweepRow>| -> f64 {
        let row = run_cell(cfg, key, tf, Stage::Refine);
        let v = score(&row);
        out.push(row);
        v
    };
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = eval(c, &mut out);
    let mut fd = eval(d, &mut out);
    while hi - lo > REFINE_TOLERANCE * 0.5 * (hi + lo) {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = eval(c, &mut out);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = eval(d, &mut out);
        }
    }
    out
}

fn optimum(cfg: &SweepConfig, key: &SeriesKey, rows: &[&SweepRow]) -> Option<Optimum> {
    let ok: Vec<(&SweepRow, ObservableRecord)> = rows.iter().filter_map(|r| r.record.map(|rec| (*r, rec))).collect();
    // rows are sorted by tf, so ties resolve to the shortest time
    let best = ok.iter().fold(None::<&(&SweepRow, ObservableRecord)>, |acc, cur| match acc {
        Some(a) if a.1.dark_population >= cur.1.dark_population => Some(a),
        _ => Some(cur),
    })?;
    let best_e = ok.iter().fold(None::<&(&SweepRow, ObservableRecord)>, |acc, cur| match acc {
        Some(a) if a.1.stored_energy >= cur.1.stored_energy => Some(a),
        _ => Some(cur),
    })?;
    let sched = key.schedule(cfg.ordering).ok()?;
    let bounds = adiabatic_bounds(&sched, &key.bath(cfg).ok()?);
    Some(Optimum {
        series: *key,
        tf_opt: best.0.tf,
        tf_opt_dimensionless: sched.dimensionless_time(best.0.tf),
        peak_dark_population: best.1.dark_population,
        tf_energy_opt: best_e.0.tf,
        peak_stored_energy: best_e.1.stored_energy,
        tf_gap_bound: bounds.tf_gap_bound,
        tf_bath_bound: bounds.tf_bath_bound,
    })
}

fn assemble(cfg: &SweepConfig, mut rows: Vec<SweepRow>) -> Result<SweepResult> {
    let n = rows.len();
    if n > 0 && rows.iter().all(|r| r.record.is_none()) {
        return Err(Error::SweepFailed(n));
    }
    rows.sort_by(|a, b| {
        let ka = a.series.sort_key();
        let kb = b.series.sort_key();
        ka.iter()
            .zip(kb.iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.tf.total_cmp(&b.tf))
    });
    rows.dedup_by(|a, b| a.series == b.series && a.tf == b.tf);
    let mut optima = Vec::new();
    let mut keys: Vec<SeriesKey> = Vec::new();
    for r in &rows {
        if keys.last() != Some(&r.series) {
            keys.push(r.series);
        }
    }
    for key in &keys {
        let series_rows: Vec<&SweepRow> = rows.iter().filter(|r| r.series == *key).collect();
        if let Some(o) = optimum(cfg, key, &series_rows) {
            optima.push(o);
        }
    }
    Ok(SweepResult {
        ordering: Some(cfg.ordering),
        variant: Some(cfg.variant),
        omega_c: cfg.omega_c,
        rows,
        optima,
    })
}

fn run_grid(cfg: &SweepConfig, tfs: &[f64], refine: bool) -> Result<SweepResult> {
    cfg.validate()?;
    for key in cfg.series() {
        let bath = key.bath(cfg)?;
        let (delta_min, _) = crate::hamiltonian::gap_min(&key.schedule(cfg.ordering)?);
        for w in bath.regime_warnings(delta_min) {
            log::warn!("{w}");
        }
    }
    let pool = cfg.pool()?;
    let series = cfg.series();
    let rows = pool.install(|| {
        let cells: Vec<(SeriesKey, f64)> =
            series.iter().flat_map(|k| tfs.iter().map(move |tf| (*k, *tf))).collect();
        let coarse: Vec<SweepRow> = cells.par_iter().map(|(k, tf)| run_cell(cfg, k, *tf, Stage::Coarse)).collect();
        if !refine {
            return coarse;
        }
        let refined: Vec<Vec<SweepRow>> = series
            .par_iter()
            .map(|k| {
                let mut mine: Vec<SweepRow> = coarse.iter().filter(|r| r.series == *k).cloned().collect();
                mine.sort_by(|a, b| a.tf.total_cmp(&b.tf));
                refine_series(cfg, k, &mine)
            })
            .collect();
        coarse.into_iter().chain(refined.into_iter().flatten()).collect()
    });
    assemble(cfg, rows)
}

/// Scans the `t_f` grid for every series and locates the `t_f` that
/// maximizes the final dark-state population.
pub fn sweep_tf(cfg: &SweepConfig) -> Result<SweepResult> {
    run_grid(cfg, &cfg.tf.values(), cfg.refine)
}

/// [`sweep_tf`] over the coupling grid; read `tf_opt(ηg²)` off the optima.
pub fn sweep_coupling(cfg: &SweepConfig) -> Result<SweepResult> {
    sweep_tf(cfg)
}

/// Final observables at fixed `t_f` values for every temperature in the
/// `beta` grid. No refinement.
pub fn sweep_temperature(cfg: &SweepConfig) -> Result<SweepResult> {
    run_grid(cfg, &cfg.tf.values(), false)
}

/// `(s, ‖ρ(s) − ρ_Gibbs(s)‖₁)` along one trajectory per series.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceTrace {
    pub series: SeriesKey,
    pub tf: f64,
    /// `(s, distance, dark population)`.
    pub points: Vec<(f64, f64, f64)>,
}

impl DistanceTrace {
    pub fn final_distance(&self) -> f64 {
        self.points.last().map_or(f64::NAN, |p| p.1)
    }
}

/// Trace distance to the instantaneous Gibbs state along the trajectory at
/// `tf` for each series. With `tf = None` each series first runs
/// [`sweep_tf`] and uses its `tf_opt`.
pub fn distance_trace(cfg: &SweepConfig, tf: Option<f64>) -> Result<Vec<DistanceTrace>> {
    cfg.validate()?;
    let tfs: Vec<(SeriesKey, f64)> = match tf {
        Some(t) => {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::param(format!("tf must be positive, got {t}")));
            }
            cfg.series().into_iter().map(|k| (k, t)).collect()
        }
        None => {
            let sweep = sweep_tf(cfg)?;
            cfg.series()
                .into_iter()
                .map(|k| {
                    sweep
                        .optimum_for(&k)
                        .map(|o| (k, o.tf_opt))
                        .ok_or_else(|| Error::param("no optimum found for series"))
                })
                .collect::<Result<_>>()?
        }
    };
    let pool = cfg.pool()?;
    pool.install(|| {
        tfs.par_iter()
            .map(|(key, tf)| {
                let sched = key.schedule(cfg.ordering)?;
                let bath = key.bath(cfg)?;
                let steps = cfg.steps.unwrap_or_else(|| default_steps(*tf));
                let traj = MasterEquation::new(sched, bath).evolve(*tf, cfg.variant, &initial_dark_state(), steps)?;
                let points = traj
                    .samples
                    .iter()
                    .map(|(s, rho)| {
                        let g = observables::gibbs_state(&sched, *s, bath.beta)?;
                        Ok((*s, observables::trace_distance(rho, &g)?, rho.population(1)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(DistanceTrace { series: *key, tf: *tf, points })
            })
            .collect()
    })
}

pub fn distance_table(traces: &[DistanceTrace]) -> Table {
    let mut table = Table::new(["omega_a", "omega_b", "eta_g2", "beta", "tf", "s", "trace_distance", "dark_population"]);
    for t in traces {
        for (s, d, p) in &t.points {
            table.push(vec![
                t.series.omega_a.into(),
                t.series.omega_b.into(),
                t.series.eta_g2.into(),
                t.series.beta.into(),
                t.tf.into(),
                (*s).into(),
                (*d).into(),
                (*p).into(),
            ]);
        }
    }
    table
}

/// `(ω, γ(ω))` on `points` equally spaced values of `ω/ω_c` in
/// `[-x_max, x_max]`.
pub fn spectral_table(bath: &BathSpec, x_max: f64, points: usize) -> Table {
    let mut table = Table::new(["omega_over_omega_c", "omega", "gamma"]);
    let n = points.max(2);
    for i in 0..n {
        let x = -x_max + 2.0 * x_max * i as f64 / (n - 1) as f64;
        let w = x * bath.omega_c;
        table.push(vec![x.into(), w.into(), bath.gamma(w).into()]);
    }
    table
}
