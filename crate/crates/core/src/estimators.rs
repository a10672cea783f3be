//! Graph distances and the statistics estimated from them.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ballgrowth::{init_ball, BallState, Driver, Mode};
use crate::error::{domain, Error, Result};
use crate::graph::{Graph, ModelParams};
use crate::lattice::{BoxSpec, Site};
use crate::rng::{derive_seed, rng_from_seed};
use crate::weights::CandidateLaw;

pub const UNREACHED: u32 = u32::MAX;

/// Graph distances `D(source, ·)`, indexed by site.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceField {
    source: u64,
    dist: Vec<u32>,
}

impl DistanceField {
    pub fn source(&self) -> u64 {
        self.source
    }

    pub fn dist(&self) -> &[u32] {
        &self.dist
    }

    pub fn eccentricity(&self) -> u32 {
        self.dist.iter().copied().max().unwrap_or(0)
    }
}

/// BFS from `source` into `dist`, returning the eccentricity.
fn bfs_into(graph: &Graph, source: u64, dist: &mut [u32], queue: &mut Vec<u64>) -> u32 {
    dist.fill(UNREACHED);
    queue.clear();
    dist[source as usize] = 0;
    queue.push(source);
    let mut head = 0;
    let mut ecc = 0;
    while head < queue.len() {
        let z = queue[head];
        head += 1;
        let dz = dist[z as usize];
        for &y in graph.neighbors(z) {
            if dist[y as usize] == UNREACHED {
                dist[y as usize] = dz + 1;
                ecc = dz + 1;
                queue.push(y);
            }
        }
    }
    debug_assert!(queue.len() == dist.len(), "graph is disconnected");
    ecc
}

pub fn bfs_distances(graph: &Graph, source: &Site) -> Result<DistanceField> {
    graph.box_spec().check_site(source)?;
    let mut dist = vec![UNREACHED; graph.box_spec().site_count() as usize];
    bfs_into(graph, source.index(), &mut dist, &mut Vec::new());
    Ok(DistanceField {
        source: source.index(),
        dist,
    })
}

fn max_eccentricity(graph: &Graph, sources: &[u64]) -> u32 {
    let n = graph.box_spec().site_count() as usize;
    sources
        .par_iter()
        .map_init(
            || (vec![UNREACHED; n], Vec::with_capacity(n)),
            |(dist, queue), &s| bfs_into(graph, s, dist, queue),
        )
        .max()
        .unwrap_or(0)
}

/// Exact diameter by BFS from every site. Refused above `source_budget`
/// sites.
pub fn diameter_exact(graph: &Graph, source_budget: u64) -> Result<u32> {
    let n = graph.box_spec().site_count();
    if n > source_budget {
        return Err(Error::Budget {
            what: "exact diameter",
            required: n,
            limit: source_budget,
            advice: "use the sampled diameter, which reports a lower bound",
        });
    }
    let sources: Vec<u64> = (0..n).collect();
    Ok(max_eccentricity(graph, &sources))
}

/// Largest eccentricity among `k` distinct uniformly chosen sources; a lower
/// bound on the diameter. Sources are a prefix of one seeded permutation,
/// so samples for increasing `k` are nested.
pub fn diameter_sampled(graph: &Graph, k: u64, seed: u64) -> Result<u32> {
    if k == 0 {
        return domain("sampled diameter needs at least one source");
    }
    let n = graph.box_spec().site_count();
    let mut order: Vec<u64> = (0..n).collect();
    order.shuffle(&mut rng_from_seed(seed));
    order.truncate(k.min(n) as usize);
    Ok(max_eccentricity(graph, &order))
}

/// `D · log log N / log N` with natural logarithms.
pub fn scaling_statistic(diameter: u64, n: u64) -> Result<f64> {
    if n < 16 {
        return domain(format!("scaling statistic needs N >= 16, got {n}"));
    }
    let ln = (n as f64).ln();
    Ok(diameter as f64 * ln.ln() / ln)
}

/// `⌊(1/2 + ε/2) d log N / log log N⌋`.
pub fn proof_step(n: u64, dim: usize, eps: f64) -> usize {
    let ln = (n as f64).ln();
    ((0.5 + eps / 2.0) * dim as f64 * ln / ln.ln()).floor() as usize
}

/// Boundary-size threshold `N^{(1/2 + ε/4) d}` of the events `E_x`, `E_y`.
pub fn event_threshold(n: u64, dim: usize, eps: f64) -> f64 {
    (n as f64).powf((0.5 + eps / 4.0) * dim as f64)
}

/// Smallest radius `R` with `4 N^{−c₂ R^d} < target`.
pub fn calibrated_radius(n: u64, dim: usize, c2: f64, target: f64) -> u64 {
    let need = (4.0 / target).ln() / (c2 * (n as f64).ln());
    let mut r = need.powf(1.0 / dim as f64).floor().max(1.0) as u64;
    while 4.0 * (n as f64).powf(-c2 * (r as f64).powi(dim as i32)) >= target {
        r += 1;
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoBallConfig {
    pub radius: u64,
    pub eps: f64,
    /// Cap on alternation steps `t`.
    pub max_steps: usize,
}

/// Where the two chains get their edges.
#[derive(Clone, Copy)]
pub enum EdgeSource<'a> {
    Quenched(&'a Graph),
    Annealed { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoBallOutcome {
    pub mode: Mode,
    pub x: u64,
    pub y: u64,
    pub radius: u64,
    /// First `t` at which the alternately grown balls meet.
    pub tau: Option<usize>,
    /// `2R + τ`.
    pub distance_bound: Option<u64>,
    pub m_star: usize,
    pub event_threshold: f64,
    pub boundary_x_at_m_star: Option<u64>,
    pub boundary_y_at_m_star: Option<u64>,
    pub event_x: Option<bool>,
    pub event_y: Option<bool>,
    pub timed_out: bool,
}

impl TwoBallOutcome {
    /// Whether `τ ≤ 2m* + 1`.
    pub fn within_window(&self) -> bool {
        self.tau.is_some_and(|t| t <= 2 * self.m_star + 1)
    }
}

struct Side<'a> {
    state: BallState,
    driver: Driver<'a>,
    at_m_star: Option<u64>,
    exhausted: bool,
}

impl Side<'_> {
    fn note(&mut self, m_star: usize) {
        if self.state.step() == m_star {
            self.at_m_star = Some(self.state.boundary().len() as u64);
        }
    }

    /// Advances one step; returns the new boundary, or `None` once the
    /// chain has nothing left to explore.
    fn step(&mut self, m_star: usize) -> Result<Option<&[u64]>> {
        if self.exhausted {
            return Ok(None);
        }
        if self.state.boundary().is_empty() {
            self.exhausted = true;
            if self.at_m_star.is_none() && self.state.step() < m_star {
                self.at_m_star = Some(0);
            }
            return Ok(None);
        }
        let state = std::mem::replace(&mut self.state, BallState::vacant());
        self.state = self.driver.advance(state)?;
        self.note(m_star);
        Ok(Some(self.state.boundary().as_slice()))
    }

    fn done(&self, m_star: usize) -> bool {
        self.exhausted || self.state.step() >= m_star
    }
}

/// Runs `Z_t = (𝐁_{⌊(t+1)/2⌋}(U_x), 𝐁_{⌊t/2⌋}(U_y))` from the ℓ1 balls of
/// radius `R` around `x` and `y`: the x-chain moves on even `t`, the y-chain
/// on odd `t`. Stops once the balls have met and both chains have reached
/// step `m*` (so the events `E_x`, `E_y` are observed), or at the step cap.
pub fn two_ball_tau(
    spec: &BoxSpec,
    params: &ModelParams,
    x: &Site,
    y: &Site,
    config: &TwoBallConfig,
    source: EdgeSource<'_>,
) -> Result<TwoBallOutcome> {
    spec.check_site(x)?;
    spec.check_site(y)?;
    if config.radius < 1 {
        return domain("two-ball radius R must be at least 1");
    }
    if !(config.eps > 0.0 && config.eps < 0.5) {
        return domain(format!("eps must lie in (0, 1/2), got {}", config.eps));
    }
    if spec.side() < 3 {
        return domain("two-ball procedure needs N >= 3 so that log log N > 0");
    }
    let (dx, dy, mode) = match source {
        EdgeSource::Quenched(g) => {
            if g.box_spec() != spec {
                return domain("graph and box differ");
            }
            (Driver::quenched(g), Driver::quenched(g), Mode::Quenched)
        }
        EdgeSource::Annealed { seed } => (
            Driver::annealed(spec, params, derive_seed(seed, "two-ball", 0, "x")),
            Driver::annealed(spec, params, derive_seed(seed, "two-ball", 0, "y")),
            Mode::Annealed,
        ),
    };
    let m_star = proof_step(spec.side(), spec.dim(), config.eps);
    let threshold = event_threshold(spec.side(), spec.dim(), config.eps);
    let mut sx = Side {
        state: init_ball(spec, &spec.l1_ball(x, config.radius)?)?,
        driver: dx,
        at_m_star: None,
        exhausted: false,
    };
    let mut sy = Side {
        state: init_ball(spec, &spec.l1_ball(y, config.radius)?)?,
        driver: dy,
        at_m_star: None,
        exhausted: false,
    };
    sx.note(m_star);
    sy.note(m_star);

    let mut tau = sx
        .state
        .boundary()
        .iter()
        .any(|z| sy.state.in_ball(z))
        .then_some(0);
    let mut t = 0;
    while (tau.is_none() || !sx.done(m_star) || !sy.done(m_star)) && t < config.max_steps {
        let (mover, other) = if t % 2 == 0 {
            (&mut sx, &sy)
        } else {
            (&mut sy, &sx)
        };
        if let Some(fresh) = mover.step(m_star)? {
            if tau.is_none() && fresh.iter().any(|&z| other.state.in_ball(z)) {
                tau = Some(t + 1);
            }
        }
        t += 1;
    }
    let event = |b: Option<u64>| b.map(|v| v as f64 >= threshold);
    Ok(TwoBallOutcome {
        mode,
        x: x.index(),
        y: y.index(),
        radius: config.radius,
        tau,
        distance_bound: tau.map(|t| 2 * config.radius + t as u64),
        m_star,
        event_threshold: threshold,
        boundary_x_at_m_star: sx.at_m_star,
        boundary_y_at_m_star: sy.at_m_star,
        event_x: event(sx.at_m_star),
        event_y: event(sy.at_m_star),
        timed_out: tau.is_none(),
    })
}

/// Empirical tail of `|∂B_{m+1}| / E[|∂B_{m+1}| | 𝐁_m]` against the bound
/// `2 exp(−δ² E / 3)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChernoffCheck {
    pub step: usize,
    pub delta: f64,
    pub conditional_mean: f64,
    pub trials: u64,
    pub outside: u64,
    pub empirical_tail: f64,
    pub bound: f64,
    /// Binomial standard error of the tail frequency at `min(bound, 1)`.
    pub standard_error: f64,
    /// Set when the conditional mean is zero and no check is possible.
    pub skipped: bool,
}

impl ChernoffCheck {
    pub fn passed(&self) -> bool {
        self.skipped || self.empirical_tail <= self.bound + 3.0 * self.standard_error
    }
}

pub fn chernoff_tail_check(
    params: &ModelParams,
    spec: &BoxSpec,
    state: &BallState,
    delta: f64,
    trials: u64,
    seed: u64,
) -> Result<ChernoffCheck> {
    if !(delta > 0.0 && delta < 1.0) {
        return domain(format!("delta must lie in (0, 1), got {delta}"));
    }
    if trials < 1000 {
        return domain(format!(
            "tail check needs at least 1000 trials, got {trials}"
        ));
    }
    let law = CandidateLaw::new(params, spec, state.boundary(), state.interior());
    let mean = law.mean();
    let bound = 2.0 * (-delta * delta * mean / 3.0).exp();
    if mean <= 0.0 {
        return Ok(ChernoffCheck {
            step: state.step(),
            delta,
            conditional_mean: 0.0,
            trials,
            outside: 0,
            empirical_tail: 0.0,
            bound,
            standard_error: 0.0,
            skipped: true,
        });
    }
    let outside = (0..trials)
        .into_par_iter()
        .filter(|&t| {
            let mut rng = rng_from_seed(derive_seed(seed, "chernoff", t, "round"));
            let ratio = law.sample_count(&mut rng) as f64 / mean;
            !(1.0 - delta..=1.0 + delta).contains(&ratio)
        })
        .count() as u64;
    let p0 = bound.min(1.0);
    Ok(ChernoffCheck {
        step: state.step(),
        delta,
        conditional_mean: mean,
        trials,
        outside,
        empirical_tail: outside as f64 / trials as f64,
        bound,
        standard_error: (p0 * (1.0 - p0) / trials as f64).sqrt(),
        skipped: false,
    })
}

/// Consecutive-N trend of the median scaling statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendVerdict {
    pub steps: usize,
    pub strict_decreases: usize,
    pub final_median: f64,
    pub passed: bool,
}

/// Passes when the medians strictly decrease across all but at most one of
/// the consecutive steps.
pub fn trend_verdict(medians: &[f64]) -> TrendVerdict {
    let steps = medians.len().saturating_sub(1);
    let strict_decreases = medians.windows(2).filter(|w| w[1] < w[0]).count();
    TrendVerdict {
        steps,
        strict_decreases,
        final_median: medians.last().copied().unwrap_or(f64::NAN),
        passed: steps > 0 && strict_decreases + 1 >= steps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::sample_graph_eager;

    fn line(n: u64) -> BoxSpec {
        BoxSpec::new(1, n).unwrap()
    }

    /// All-pairs distances by Floyd–Warshall over the edge list.
    fn floyd_warshall(g: &Graph) -> Vec<Vec<u32>> {
        let n = g.box_spec().site_count() as usize;
        let inf = u32::MAX / 2;
        let mut d = vec![vec![inf; n]; n];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = 0;
        }
        for &(a, b) in g.edges() {
            d[a as usize][b as usize] = 1;
            d[b as usize][a as usize] = 1;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = d[i][k] + d[k][j];
                    if via < d[i][j] {
                        d[i][j] = via;
                    }
                }
            }
        }
        d
    }

    #[test]
    fn path_and_complete_graphs() {
        let b = line(8);
        let path = sample_graph_eager(&b, &ModelParams::critical(1e-15, 1).unwrap(), 0);
        let f = bfs_distances(&path, &b.site(&[3]).unwrap()).unwrap();
        for y in 0..=8u64 {
            assert_eq!(f.dist()[y as usize] as u64, y.abs_diff(3));
        }
        assert_eq!(diameter_exact(&path, 100).unwrap(), 8);
        let full = sample_graph_eager(&b, &ModelParams::critical(1e6, 1).unwrap(), 0);
        assert_eq!(diameter_exact(&full, 100).unwrap(), 1);
        let unit = sample_graph_eager(&line(1), &ModelParams::critical(1.0, 1).unwrap(), 0);
        assert_eq!(diameter_exact(&unit, 100).unwrap(), 1);
        assert!(matches!(
            diameter_exact(&path, 5),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn bfs_matches_all_pairs_oracle() {
        use rand::Rng;
        let mut rng = rng_from_seed(9);
        for trial in 0..20u64 {
            let (spec, beta) = match trial % 3 {
                0 => (line(8), rng.random_range(0.1..3.0)),
                1 => (BoxSpec::new(2, 13).unwrap(), rng.random_range(0.1..3.0)),
                _ => (BoxSpec::new(3, 4).unwrap(), rng.random_range(0.1..3.0)),
            };
            let params = ModelParams::critical(beta, spec.dim()).unwrap();
            let g = sample_graph_eager(&spec, &params, trial);
            let oracle = floyd_warshall(&g);
            let mut diam = 0;
            for s in 0..spec.site_count() {
                let f = bfs_distances(&g, &spec.site_from_index(s).unwrap()).unwrap();
                let row: Vec<u32> = oracle[s as usize].clone();
                assert_eq!(f.dist(), &row[..]);
                diam = diam.max(f.eccentricity());
            }
            assert_eq!(diameter_exact(&g, 1000).unwrap(), diam);
            assert!(diam as u64 <= spec.max_l1() && diam >= 1);
        }
    }

    #[test]
    fn sampled_diameter_is_nested_lower_bound() {
        let b = BoxSpec::new(2, 15).unwrap();
        let g = sample_graph_eager(&b, &ModelParams::critical(1.0, 2).unwrap(), 3);
        let exact = diameter_exact(&g, 10_000).unwrap();
        assert_eq!(diameter_sampled(&g, b.site_count(), 5).unwrap(), exact);
        let mut last = 0;
        for k in [1, 2, 4, 8, 16, 64, 256] {
            let v = diameter_sampled(&g, k, 5).unwrap();
            assert!(v >= last && v <= exact);
            last = v;
        }
        assert!(diameter_sampled(&g, 0, 5).is_err());
        let path = sample_graph_eager(&line(10), &ModelParams::critical(1e-15, 1).unwrap(), 0);
        assert!(diameter_sampled(&path, 1, 0).unwrap() <= 10);
    }

    #[test]
    fn scaling_statistic_arithmetic() {
        assert_eq!(scaling_statistic(0, 16).unwrap(), 0.0);
        let v = scaling_statistic(4, 16).unwrap();
        let ln16 = 16f64.ln();
        assert!((v - 4.0 * ln16.ln() / ln16).abs() < 1e-15);
        assert!(scaling_statistic(4, 15).is_err());
    }

    #[test]
    fn proof_constants() {
        // N = 512, eps = 0.4: floor(0.7 * ln 512 / ln ln 512) = 2.
        assert_eq!(proof_step(512, 1, 0.4), 2);
        assert!((event_threshold(512, 1, 0.4) - 512f64.powf(0.6)).abs() < 1e-9);
        let r = calibrated_radius(512, 1, 0.25, 1e-3);
        assert!(4.0 * 512f64.powf(-0.25 * r as f64) < 1e-3);
        assert!(4.0 * 512f64.powf(-0.25 * (r - 1) as f64) >= 1e-3);
    }

    #[test]
    fn overlapping_balls_meet_at_zero() {
        let b = line(64);
        let p = ModelParams::critical(1.0, 1).unwrap();
        let cfg = TwoBallConfig {
            radius: 3,
            eps: 0.3,
            max_steps: 200,
        };
        let out = two_ball_tau(
            &b,
            &p,
            &b.site(&[10]).unwrap(),
            &b.site(&[16]).unwrap(),
            &cfg,
            EdgeSource::Annealed { seed: 1 },
        )
        .unwrap();
        assert_eq!(out.tau, Some(0));
        assert_eq!(out.distance_bound, Some(6));
        assert!(two_ball_tau(
            &b,
            &p,
            &b.site(&[0]).unwrap(),
            &b.site(&[1]).unwrap(),
            &TwoBallConfig { eps: 0.5, ..cfg },
            EdgeSource::Annealed { seed: 1 }
        )
        .is_err());
    }

    #[test]
    fn quenched_two_ball_bound_is_sound() {
        use rand::Rng;
        let b = line(200);
        let p = ModelParams::critical(1.0, 1).unwrap();
        let cfg = TwoBallConfig {
            radius: 2,
            eps: 0.4,
            max_steps: 1000,
        };
        let mut rng = rng_from_seed(77);
        for trial in 0..200 {
            let g = sample_graph_eager(&b, &p, trial);
            let x = b.site(&[rng.random_range(0..=200)]).unwrap();
            let y = b.site(&[rng.random_range(0..=200)]).unwrap();
            let out = two_ball_tau(&b, &p, &x, &y, &cfg, EdgeSource::Quenched(&g)).unwrap();
            let d = bfs_distances(&g, &x).unwrap().dist()[y.index() as usize] as u64;
            assert!(d <= out.distance_bound.unwrap());
        }
    }

    #[test]
    fn annealed_two_ball_meets_within_window() {
        use rand::Rng;
        let b = line(512);
        let p = ModelParams::critical(1.0, 1).unwrap();
        let radius = calibrated_radius(512, 1, 0.25, 1e-3);
        let cfg = TwoBallConfig {
            radius,
            eps: 0.4,
            max_steps: 4 * 512,
        };
        let mut rng = rng_from_seed(3);
        let trials = 1000;
        let hits = (0..trials)
            .filter(|&t| {
                let x = b.site(&[rng.random_range(0..=512)]).unwrap();
                let y = b.site(&[rng.random_range(0..=512)]).unwrap();
                let out =
                    two_ball_tau(&b, &p, &x, &y, &cfg, EdgeSource::Annealed { seed: t }).unwrap();
                assert!(out.event_x.is_some() && out.event_y.is_some());
                out.within_window()
            })
            .count();
        assert!(hits as f64 >= 0.99 * trials as f64, "{hits}");
    }

    #[test]
    fn chernoff_check_cases() {
        let b = line(256);
        let p = ModelParams::critical(1.0, 1).unwrap();
        let st = init_ball(&b, &[128]).unwrap();
        let c = chernoff_tail_check(&p, &b, &st, 0.3, 2000, 1).unwrap();
        assert!(!c.skipped && c.passed(), "{c:?}");
        assert!(chernoff_tail_check(&p, &b, &st, 1.0, 2000, 1).is_err());
        assert!(chernoff_tail_check(&p, &b, &st, 0.3, 999, 1).is_err());

        // Wide interval around a large mean: bound and tail both near 0.
        let all: Vec<u64> = (0..=256).step_by(2).collect();
        let wide =
            chernoff_tail_check(&p, &b, &init_ball(&b, &all).unwrap(), 0.95, 1000, 2).unwrap();
        assert!(wide.bound < 1e-10 && wide.empirical_tail == 0.0);

        let full: Vec<u64> = (0..=256).collect();
        let cov =
            chernoff_tail_check(&p, &b, &init_ball(&b, &full).unwrap(), 0.3, 1000, 1).unwrap();
        assert!(cov.skipped && cov.passed());
    }

    #[test]
    fn trend_verdicts() {
        assert!(trend_verdict(&[3.0, 2.5, 2.6, 2.0, 1.9, 1.8]).passed);
        assert!(!trend_verdict(&[3.0, 3.1, 2.6, 2.7, 1.9, 1.8]).passed);
        assert!(!trend_verdict(&[1.0]).passed);
    }
}
