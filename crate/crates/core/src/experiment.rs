//! Experiment configuration, per-trial records and the runners behind the
//! `lrp` subcommands.
//!
//! Each trial draws from seeds derived as
//! `derive_seed(master, experiment_id, trial, purpose)` and trials are
//! collected in index order, so output is independent of the worker count.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ballgrowth::{init_ball, run_chain, run_chain_observed, Driver, Mode, StopRule};
use crate::error::{domain, Result};
use crate::estimators::{
    bfs_distances, calibrated_radius, chernoff_tail_check, diameter_exact, diameter_sampled,
    scaling_statistic, trend_verdict, two_ball_tau, ChernoffCheck, EdgeSource, TrendVerdict,
    TwoBallConfig,
};
use crate::graph::{
    edge_count_moments, sample_graph_eager, sample_graph_naive, Graph, ModelParams,
};
use crate::lattice::BoxSpec;
use crate::rng::{derive_seed, rng_from_seed};
use crate::stats;
use crate::weights::{
    calibrate_weight_constants, elementary_bounds, expected_boundary_growth,
    iterative_bound_report, weight_bound_check, IterativeBoundReport, WeightBoundReport,
    WeightConstants,
};

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    Eager,
    Naive,
}

/// Parameters shared by all subcommands; each reads the fields it needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub d: usize,
    pub n: u64,
    pub n_grid: Vec<u64>,
    pub beta: f64,
    /// Distance exponent; `None` means the critical value `d`.
    pub exponent: Option<f64>,
    pub seed: u64,
    pub trials: u64,
    pub mode: Mode,
    pub generator: Generator,
    /// Ball growth starts from the ℓ1 ball of this radius around the centre.
    pub start_radius: u64,
    pub max_steps: Option<usize>,
    /// Stop ball growth once `|B_m| > N^{αd}`.
    pub stop_at_alpha: bool,
    pub alpha: f64,
    pub eps: f64,
    /// Two-ball radius; `None` calibrates it from `c2`.
    pub radius: Option<u64>,
    pub c2: f64,
    /// Use a sampled diameter with this many sources instead of the exact one.
    pub sources: Option<u64>,
    pub deltas: Vec<f64>,
    pub chernoff_depths: Vec<usize>,
    pub chernoff_trials: u64,
    pub chains: u64,
    pub calibration_n: u64,
    pub check_ns: Vec<u64>,
    pub check_sites: usize,
    pub margin: f64,
    /// Frozen weight constants; calibrated at `calibration_n` when absent.
    pub constants: Option<WeightConstants>,
    pub pair_budget: u64,
    pub source_budget: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            d: 1,
            n: 256,
            n_grid: vec![128, 256, 512, 1024],
            beta: 1.0,
            exponent: None,
            seed: 0,
            trials: 100,
            mode: Mode::Annealed,
            generator: Generator::Eager,
            start_radius: 0,
            max_steps: None,
            stop_at_alpha: false,
            alpha: 0.6,
            eps: 0.4,
            radius: None,
            c2: 0.25,
            sources: None,
            deltas: vec![0.1, 0.3, 0.5],
            chernoff_depths: vec![0, 1, 2],
            chernoff_trials: 10_000,
            chains: 1000,
            calibration_n: 64,
            check_ns: vec![128, 256],
            check_sites: 20,
            margin: 0.1,
            constants: None,
            pair_budget: 10_000_000,
            source_budget: 50_000,
        }
    }
}

impl ExperimentConfig {
    pub fn box_spec(&self) -> Result<BoxSpec> {
        BoxSpec::new(self.d, self.n)
    }

    pub fn box_for(&self, n: u64) -> Result<BoxSpec> {
        BoxSpec::new(self.d, n)
    }

    pub fn params(&self) -> Result<ModelParams> {
        match self.exponent {
            Some(s) => ModelParams::with_exponent(self.beta, s, self.d),
            None => ModelParams::critical(self.beta, self.d),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.box_spec()?;
        self.params()?;
        if self.trials == 0 {
            return domain("trials must be at least 1");
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return domain(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if !(self.eps > 0.0 && self.eps < 0.5) {
            return domain(format!("eps must lie in (0, 1/2), got {}", self.eps));
        }
        if self.c2.is_nan() || self.c2 <= 0.0 {
            return domain("c2 must be positive");
        }
        if !(0.0..1.0).contains(&self.margin) {
            return domain("margin must lie in [0, 1)");
        }
        if let Some(&bad) = self.deltas.iter().find(|&&d| !(d > 0.0 && d < 1.0)) {
            return domain(format!("delta {bad} outside (0, 1)"));
        }
        for &n in self.n_grid.iter().chain(&self.check_ns) {
            self.box_for(n)?;
        }
        Ok(())
    }

    /// First 16 hex digits of the SHA-256 of the config's JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serialises");
        hex::encode(&Sha256::digest(&json)[..8])
    }
}

/// Code version and config hash stamped on every record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub code_version: String,
    pub config_hash: String,
}

impl Provenance {
    pub fn of(config: &ExperimentConfig) -> Self {
        Self {
            code_version: CODE_VERSION.to_string(),
            config_hash: config.hash(),
        }
    }
}

fn join_sizes(sizes: &[u64]) -> String {
    sizes
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(";")
}

fn sample_graph(
    config: &ExperimentConfig,
    spec: &BoxSpec,
    params: &ModelParams,
    seed: u64,
) -> Result<Graph> {
    match config.generator {
        Generator::Eager => Ok(sample_graph_eager(spec, params, seed)),
        Generator::Naive => sample_graph_naive(spec, params, seed, config.pair_budget),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerateSummary {
    pub seed: u64,
    pub edges: u64,
    pub mean_degree: f64,
    pub expected_edges: f64,
    pub edge_sd: f64,
}

pub fn run_generate(config: &ExperimentConfig) -> Result<(Graph, GenerateSummary)> {
    let spec = config.box_spec()?;
    let params = config.params()?;
    let seed = derive_seed(config.seed, "generate", 0, "graph");
    let graph = sample_graph(config, &spec, &params, seed)?;
    let (mean, var) = edge_count_moments(&spec, &params);
    let summary = GenerateSummary {
        seed,
        edges: graph.edge_count() as u64,
        mean_degree: graph.mean_degree(),
        expected_edges: mean,
        edge_sd: var.sqrt(),
    };
    Ok((graph, summary))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallGrowthRecord {
    pub experiment: String,
    pub trial: u64,
    pub seed: u64,
    pub d: usize,
    pub n: u64,
    pub beta: f64,
    pub exponent: f64,
    pub mode: Mode,
    pub start_size: u64,
    pub steps: usize,
    pub boundary_sizes: String,
    pub covered_step: Option<usize>,
    pub stop_reason: String,
    pub code_version: String,
    pub config_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallGrowthSummary {
    pub trials: u64,
    pub mean_first_boundary: Option<f64>,
    pub stderr_first_boundary: Option<f64>,
    /// Exact `E[|∂B_1|]` from the starting state.
    pub exact_first_boundary: f64,
}

pub fn run_ball_growth(
    config: &ExperimentConfig,
) -> Result<(Vec<BallGrowthRecord>, BallGrowthSummary)> {
    config.validate()?;
    let spec = config.box_spec()?;
    let params = config.params()?;
    let prov = Provenance::of(config);
    let start = spec.l1_ball(&spec.center(), config.start_radius)?;
    let stop = StopRule {
        max_steps: config.max_steps,
        size_threshold: config
            .stop_at_alpha
            .then(|| StopRule::size_power(&spec, config.alpha)),
    };
    let experiment = "ball-growth";
    let records = (0..config.trials)
        .into_par_iter()
        .map(|trial| -> Result<BallGrowthRecord> {
            let state = init_ball(&spec, &start)?;
            let (seed, traj) = match config.mode {
                Mode::Annealed => {
                    let seed = derive_seed(config.seed, experiment, trial, "chain");
                    let mut driver = Driver::annealed(&spec, &params, seed);
                    (seed, run_chain(state, &mut driver, stop)?)
                }
                Mode::Quenched => {
                    let seed = derive_seed(config.seed, experiment, trial, "graph");
                    let graph = sample_graph(config, &spec, &params, seed)?;
                    (seed, run_chain(state, &mut Driver::quenched(&graph), stop)?)
                }
            };
            Ok(BallGrowthRecord {
                experiment: experiment.into(),
                trial,
                seed,
                d: config.d,
                n: config.n,
                beta: params.beta(),
                exponent: params.exponent(),
                mode: traj.mode,
                start_size: start.len() as u64,
                steps: traj.boundary_sizes.len() - 1,
                boundary_sizes: join_sizes(&traj.boundary_sizes),
                covered_step: traj.covered_step,
                stop_reason: traj.stop_reason.to_string(),
                code_version: prov.code_version.clone(),
                config_hash: prov.config_hash.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let first: Vec<f64> = records
        .iter()
        .filter_map(|r| r.boundary_sizes.split(';').nth(1))
        .map(|s| s.parse::<f64>().expect("sizes are integers"))
        .collect();
    let summary = BallGrowthSummary {
        trials: config.trials,
        mean_first_boundary: (!first.is_empty()).then(|| stats::mean(&first)),
        stderr_first_boundary: (first.len() > 1).then(|| stats::std_error(&first)),
        exact_first_boundary: expected_boundary_growth(&params, &spec, &init_ball(&spec, &start)?),
    };
    Ok((records, summary))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiameterRecord {
    pub experiment: String,
    pub trial: u64,
    pub seed: u64,
    pub d: usize,
    pub n: u64,
    pub beta: f64,
    pub exponent: f64,
    pub edges: u64,
    pub diameter: u32,
    /// `exact`, or `sampled_lower_bound`.
    pub kind: String,
    pub sources: u64,
    pub scaling_statistic: Option<f64>,
    pub code_version: String,
    pub config_hash: String,
}

fn diameter_trials(
    config: &ExperimentConfig,
    n: u64,
    experiment: &str,
    prov: &Provenance,
) -> Result<Vec<DiameterRecord>> {
    let spec = config.box_for(n)?;
    let params = config.params()?;
    (0..config.trials)
        .into_par_iter()
        .map(|trial| -> Result<DiameterRecord> {
            let seed = derive_seed(config.seed, experiment, trial, "graph");
            let graph = sample_graph(config, &spec, &params, seed)?;
            let (diameter, kind, sources) = match config.sources {
                Some(k) => {
                    let s = derive_seed(config.seed, experiment, trial, "sources");
                    let d = diameter_sampled(&graph, k, s)?;
                    (d, "sampled_lower_bound", k.min(spec.site_count()))
                }
                None => (
                    diameter_exact(&graph, config.source_budget)?,
                    "exact",
                    spec.site_count(),
                ),
            };
            Ok(DiameterRecord {
                experiment: experiment.to_string(),
                trial,
                seed,
                d: config.d,
                n,
                beta: params.beta(),
                exponent: params.exponent(),
                edges: graph.edge_count() as u64,
                diameter,
                kind: kind.into(),
                sources,
                scaling_statistic: scaling_statistic(diameter as u64, n).ok(),
                code_version: prov.code_version.clone(),
                config_hash: prov.config_hash.clone(),
            })
        })
        .collect()
}

pub fn run_diameter(config: &ExperimentConfig) -> Result<Vec<DiameterRecord>> {
    config.validate()?;
    diameter_trials(config, config.n, "diameter", &Provenance::of(config))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoBallRecord {
    pub experiment: String,
    pub trial: u64,
    pub seed: u64,
    pub d: usize,
    pub n: u64,
    pub beta: f64,
    pub exponent: f64,
    pub mode: Mode,
    pub x: u64,
    pub y: u64,
    pub l1_distance: u64,
    pub radius: u64,
    pub tau: Option<usize>,
    pub distance_bound: Option<u64>,
    pub m_star: usize,
    pub event_x: Option<bool>,
    pub event_y: Option<bool>,
    pub within_window: bool,
    pub timed_out: bool,
    /// Graph distance `D(x, y)`, quenched mode only.
    pub graph_distance: Option<u32>,
    pub code_version: String,
    pub config_hash: String,
}

pub fn two_ball_radius(config: &ExperimentConfig) -> u64 {
    config
        .radius
        .unwrap_or_else(|| calibrated_radius(config.n, config.d, config.c2, 1e-3))
}

pub fn run_two_ball(config: &ExperimentConfig) -> Result<Vec<TwoBallRecord>> {
    config.validate()?;
    let spec = config.box_spec()?;
    let params = config.params()?;
    let prov = Provenance::of(config);
    let tb = TwoBallConfig {
        radius: two_ball_radius(config),
        eps: config.eps,
        max_steps: config.max_steps.unwrap_or(2 * spec.max_l1() as usize + 4),
    };
    let experiment = "two-ball";
    (0..config.trials)
        .into_par_iter()
        .map(|trial| -> Result<TwoBallRecord> {
            let mut pick = rng_from_seed(derive_seed(config.seed, experiment, trial, "sites"));
            let x = spec.site_from_index(pick.random_range(0..spec.site_count()))?;
            let y = spec.site_from_index(pick.random_range(0..spec.site_count()))?;
            let (seed, out, graph_distance) = match config.mode {
                Mode::Annealed => {
                    let seed = derive_seed(config.seed, experiment, trial, "chains");
                    let out =
                        two_ball_tau(&spec, &params, &x, &y, &tb, EdgeSource::Annealed { seed })?;
                    (seed, out, None)
                }
                Mode::Quenched => {
                    let seed = derive_seed(config.seed, experiment, trial, "graph");
                    let graph = sample_graph(config, &spec, &params, seed)?;
                    let out =
                        two_ball_tau(&spec, &params, &x, &y, &tb, EdgeSource::Quenched(&graph))?;
                    let dist = bfs_distances(&graph, &x)?.dist()[y.index() as usize];
                    (seed, out, Some(dist))
                }
            };
            Ok(TwoBallRecord {
                experiment: experiment.into(),
                trial,
                seed,
                d: config.d,
                n: config.n,
                beta: params.beta(),
                exponent: params.exponent(),
                mode: out.mode,
                x: x.index(),
                y: y.index(),
                l1_distance: spec.l1_between(x.index(), y.index()),
                radius: out.radius,
                tau: out.tau,
                distance_bound: out.distance_bound,
                m_star: out.m_star,
                event_x: out.event_x,
                event_y: out.event_y,
                within_window: out.within_window(),
                timed_out: out.timed_out,
                graph_distance,
                code_version: prov.code_version.clone(),
                config_hash: prov.config_hash.clone(),
            })
        })
        .collect()
}

/// Per-N summary of the scaling statistic `D_N log log N / log N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: u64,
    pub trials: u64,
    pub median: f64,
    pub q10: f64,
    pub q25: f64,
    pub q75: f64,
    pub q90: f64,
    pub min: f64,
    pub max: f64,
    pub median_diameter: f64,
    /// Fraction of trials with `D_N ≤ 3 log N / log log N`.
    pub share_within_3: f64,
    pub kind: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub d: usize,
    pub beta: f64,
    pub rows: Vec<ScalingRow>,
    pub trend: TrendVerdict,
    pub provenance: Provenance,
}

pub fn run_scaling(config: &ExperimentConfig) -> Result<(ScalingReport, Vec<DiameterRecord>)> {
    config.validate()?;
    if let Some(&small) = config.n_grid.iter().find(|&&n| n < 16) {
        return domain(format!("scaling grid needs N >= 16, got {small}"));
    }
    let prov = Provenance::of(config);
    let mut rows = Vec::new();
    let mut all = Vec::new();
    for &n in &config.n_grid {
        let records = diameter_trials(config, n, &format!("scaling/n={n}"), &prov)?;
        let mut stat: Vec<f64> = records
            .iter()
            .map(|r| r.scaling_statistic.expect("N >= 16"))
            .collect();
        stat.sort_by(f64::total_cmp);
        let diam: Vec<f64> = records.iter().map(|r| r.diameter as f64).collect();
        let ln = (n as f64).ln();
        let cap = 3.0 * ln / ln.ln();
        let within = diam.iter().filter(|&&d| d <= cap).count();
        rows.push(ScalingRow {
            n,
            trials: config.trials,
            median: stats::quantile_sorted(&stat, 0.5),
            q10: stats::quantile_sorted(&stat, 0.1),
            q25: stats::quantile_sorted(&stat, 0.25),
            q75: stats::quantile_sorted(&stat, 0.75),
            q90: stats::quantile_sorted(&stat, 0.9),
            min: stat[0],
            max: stat[stat.len() - 1],
            median_diameter: stats::median(&diam),
            share_within_3: within as f64 / diam.len() as f64,
            kind: records[0].kind.clone(),
        });
        all.extend(records);
    }
    let medians: Vec<f64> = rows.iter().map(|r| r.median).collect();
    Ok((
        ScalingReport {
            d: config.d,
            beta: config.beta,
            trend: trend_verdict(&medians),
            rows,
            provenance: prov,
        },
        all,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElementaryCheck {
    pub points: usize,
    pub violations: Vec<f64>,
}

/// Checks `ρ(1 − ρ) ≤ 1 − e^{−ρ} ≤ ρ` on `points` log-spaced values in
/// `[lo, hi]`, with no tolerance.
pub fn elementary_grid_check(points: usize, lo: f64, hi: f64) -> Result<ElementaryCheck> {
    let (a, b) = (lo.log10(), hi.log10());
    let mut violations = Vec::new();
    for i in 0..points {
        let rho = 10f64.powf(a + (b - a) * i as f64 / (points - 1).max(1) as f64);
        let (lower, upper) = elementary_bounds(rho)?;
        let value = -(-rho).exp_m1();
        if !(lower <= value && value <= upper) {
            violations.push(rho);
        }
    }
    Ok(ElementaryCheck { points, violations })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterativeCheck {
    pub n: u64,
    pub alpha: f64,
    pub chains: u64,
    pub states: u64,
    /// Checked states with `|B_m| > N^{αd}` (the final state of each chain).
    pub states_outside_side_condition: u64,
    pub sandwich_violations: u64,
    pub pigeonhole_violations: u64,
    pub witness: Option<IterativeBoundReport>,
}

/// Runs `chains` annealed chains from the centre, stopping once
/// `|B_m| > N^{αd}`, and checks the growth sandwich and the pigeonhole bound
/// on every visited state, the stopping state included.
pub fn iterative_chain_check(
    params: &ModelParams,
    spec: &BoxSpec,
    alpha: f64,
    chains: u64,
    seed: u64,
) -> Result<IterativeCheck> {
    let stop = StopRule {
        max_steps: None,
        size_threshold: Some(StopRule::size_power(spec, alpha)),
    };
    let start = [spec.center().index()];
    let per_chain: Vec<Vec<IterativeBoundReport>> = (0..chains)
        .into_par_iter()
        .map(|c| -> Result<Vec<IterativeBoundReport>> {
            let mut reports = Vec::new();
            let mut failure = None;
            let mut driver =
                Driver::annealed(spec, params, derive_seed(seed, "iterative", c, "chain"));
            run_chain_observed(init_ball(spec, &start)?, &mut driver, stop, |s| {
                if failure.is_none() && !s.boundary().is_empty() && !s.is_covered() {
                    match iterative_bound_report(params, spec, s, alpha) {
                        Ok(r) => reports.push(r),
                        Err(e) => failure = Some(e),
                    }
                }
            })?;
            match failure {
                Some(e) => Err(e),
                None => Ok(reports),
            }
        })
        .collect::<Result<_>>()?;
    let mut check = IterativeCheck {
        n: spec.side(),
        alpha,
        chains,
        states: 0,
        states_outside_side_condition: 0,
        sandwich_violations: 0,
        pigeonhole_violations: 0,
        witness: None,
    };
    for r in per_chain.into_iter().flatten() {
        check.states += 1;
        check.states_outside_side_condition += u64::from(!r.side_condition);
        let sandwich = r.sandwich_holds(1e-9);
        let pigeon = r.pigeonhole_holds();
        check.sandwich_violations += u64::from(!sandwich);
        check.pigeonhole_violations += u64::from(!pigeon);
        if (!sandwich || !pigeon) && check.witness.is_none() {
            check.witness = Some(r);
        }
    }
    Ok(check)
}

/// Tail checks from the states reached after each of `depths` annealed
/// steps from the centre, for every `delta`.
pub fn chernoff_grid(
    params: &ModelParams,
    spec: &BoxSpec,
    depths: &[usize],
    deltas: &[f64],
    trials: u64,
    seed: u64,
) -> Result<Vec<ChernoffCheck>> {
    let mut out = Vec::new();
    for &depth in depths {
        let mut driver = Driver::annealed(
            spec,
            params,
            derive_seed(seed, "chernoff", depth as u64, "state"),
        );
        let mut state = init_ball(spec, &[spec.center().index()])?;
        for _ in 0..depth {
            state = driver.advance(state)?;
        }
        for (i, &delta) in deltas.iter().enumerate() {
            let s = derive_seed(seed, "chernoff", depth as u64, &format!("trials/{i}"));
            out.push(chernoff_tail_check(params, spec, &state, delta, trials, s)?);
        }
    }
    Ok(out)
}

/// `count` distinct sites drawn uniformly from the box.
pub fn sample_sites(spec: &BoxSpec, count: usize, seed: u64) -> Vec<u64> {
    let n = spec.site_count() as usize;
    rand::seq::index::sample(&mut rng_from_seed(seed), n, count.min(n))
        .into_iter()
        .map(|i| i as u64)
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub elementary: ElementaryCheck,
    pub constants: WeightConstants,
    pub weight_checks: Vec<WeightBoundReport>,
    pub iterative: IterativeCheck,
    pub chernoff: Vec<ChernoffCheck>,
    pub passed: bool,
    pub provenance: Provenance,
}

pub fn verify_lemmas(config: &ExperimentConfig) -> Result<LemmaReport> {
    config.validate()?;
    let params = config.params()?;
    let elementary = elementary_grid_check(1000, 1e-8, 1e2)?;
    let constants = match config.constants {
        Some(c) => c,
        None => calibrate_weight_constants(
            &params,
            &config.box_for(config.calibration_n)?,
            config.margin,
        )?,
    };
    let weight_checks = config
        .check_ns
        .iter()
        .map(|&n| {
            let spec = config.box_for(n)?;
            let sites = sample_sites(
                &spec,
                config.check_sites,
                derive_seed(config.seed, "weights", n, "sites"),
            );
            weight_bound_check(&params, &spec, constants, &sites)
        })
        .collect::<Result<Vec<_>>>()?;
    let spec = config.box_spec()?;
    let iterative =
        iterative_chain_check(&params, &spec, config.alpha, config.chains, config.seed)?;
    let chernoff = chernoff_grid(
        &params,
        &spec,
        &config.chernoff_depths,
        &config.deltas,
        config.chernoff_trials,
        config.seed,
    )?;
    let passed = elementary.violations.is_empty()
        && weight_checks.iter().all(WeightBoundReport::passed)
        && iterative.sandwich_violations == 0
        && iterative.pigeonhole_violations == 0
        && chernoff.iter().all(ChernoffCheck::passed);
    Ok(LemmaReport {
        elementary,
        constants,
        weight_checks,
        iterative,
        chernoff,
        passed,
        provenance: Provenance::of(config),
    })
}
