//! The ball-growth chain `𝐁_m(U) = (B_{m−1}(U), ∂B_m(U))`.
//!
//! Quenched mode walks BFS layers of one stored graph. Annealed mode draws
//! fresh edges from the current boundary at every step. Both have the same
//! law: edges from `∂B_m` to the outside of `B_m` are never examined before
//! step `m + 1`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::graph::{Graph, ModelParams};
use crate::lattice::BoxSpec;
use crate::rng::{rng_from_seed, SimRng};
use crate::siteset::SiteSet;
use crate::weights::{CandidateLaw, WeightKernel};

/// Chain state at step `m`: the interior `B_{m−1}` and boundary `∂B_m`,
/// which are disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallState {
    step: usize,
    interior: SiteSet,
    boundary: SiteSet,
}

impl BallState {
    pub fn step(&self) -> usize {
        self.step
    }

    /// `B_{m−1}`.
    pub fn interior(&self) -> &SiteSet {
        &self.interior
    }

    /// `∂B_m`.
    pub fn boundary(&self) -> &SiteSet {
        &self.boundary
    }

    /// `|B_m| = |B_{m−1}| + |∂B_m|`.
    pub fn ball_size(&self) -> u64 {
        (self.interior.len() + self.boundary.len()) as u64
    }

    /// Whether `y ∈ B_m`.
    #[inline]
    pub fn in_ball(&self, y: u64) -> bool {
        self.interior.contains(y) || self.boundary.contains(y)
    }

    pub fn is_covered(&self) -> bool {
        self.ball_size() == self.interior.capacity()
    }

    /// `B_m`, ascending.
    pub fn ball_sites(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.interior.iter().chain(self.boundary.iter()).collect();
        v.sort_unstable();
        v
    }

    /// Zero-capacity stand-in used while a state is moved through a driver.
    pub(crate) fn vacant() -> Self {
        Self {
            step: 0,
            interior: SiteSet::new(0),
            boundary: SiteSet::new(0),
        }
    }

    fn advance(mut self, new_boundary: SiteSet) -> Self {
        self.interior.extend_from(&self.boundary);
        self.boundary = new_boundary;
        self.step += 1;
        assert!(
            !self.boundary.is_empty() || self.is_covered(),
            "growth died before covering the box"
        );
        self
    }
}

/// The state `(∅, U)` at step 0.
pub fn init_ball(spec: &BoxSpec, start: &[u64]) -> Result<BallState> {
    if start.is_empty() {
        return domain("starting set U must be nonempty");
    }
    let n = spec.site_count();
    if let Some(&bad) = start.iter().find(|&&i| i >= n) {
        return domain(format!("starting site {bad} outside the box"));
    }
    Ok(BallState {
        step: 0,
        interior: SiteSet::new(n),
        boundary: SiteSet::from_indices(n, start.iter().copied()),
    })
}

fn ensure_live(state: &BallState) -> Result<()> {
    if state.boundary.is_empty() {
        return Err(Error::ChainHalted { step: state.step });
    }
    Ok(())
}

/// One annealed step: the new boundary is every site outside `B_m` hit by a
/// fresh edge from `∂B_m`.
pub fn expand_annealed(
    state: &BallState,
    spec: &BoxSpec,
    params: &ModelParams,
    rng: &mut SimRng,
) -> Result<BallState> {
    ensure_live(state)?;
    check_capacity(state, spec)?;
    let kernel = WeightKernel::new(params, spec);
    Ok(annealed_step(state.clone(), &kernel, rng))
}

fn annealed_step(state: BallState, kernel: &WeightKernel, rng: &mut SimRng) -> BallState {
    let law = CandidateLaw::with_kernel(kernel, &state.boundary, &state.interior);
    let hits = law.sample(rng);
    let next = SiteSet::from_indices(state.interior.capacity(), hits);
    state.advance(next)
}

/// One quenched step: the next BFS layer of `graph`.
pub fn expand_quenched(graph: &Graph, state: &BallState) -> Result<BallState> {
    ensure_live(state)?;
    check_capacity(state, graph.box_spec())?;
    Ok(quenched_step(state.clone(), graph))
}

fn quenched_step(state: BallState, graph: &Graph) -> BallState {
    let mut next = SiteSet::new(state.interior.capacity());
    for z in state.boundary.iter() {
        for &y in graph.neighbors(z) {
            if !state.in_ball(y) {
                next.insert(y);
            }
        }
    }
    state.advance(next)
}

fn check_capacity(state: &BallState, spec: &BoxSpec) -> Result<()> {
    if state.interior.capacity() != spec.site_count() {
        return domain("state and box have different site counts");
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Quenched,
    Annealed,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Quenched => "quenched",
            Mode::Annealed => "annealed",
        })
    }
}

/// Source of the edges a chain explores.
#[allow(clippy::large_enum_variant)]
pub enum Driver<'a> {
    Quenched(&'a Graph),
    Annealed { kernel: WeightKernel, rng: SimRng },
}

impl<'a> Driver<'a> {
    pub fn quenched(graph: &'a Graph) -> Self {
        Driver::Quenched(graph)
    }

    pub fn annealed(spec: &BoxSpec, params: &ModelParams, seed: u64) -> Self {
        Driver::Annealed {
            kernel: WeightKernel::new(params, spec),
            rng: rng_from_seed(seed),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Driver::Quenched(_) => Mode::Quenched,
            Driver::Annealed { .. } => Mode::Annealed,
        }
    }

    pub fn box_spec(&self) -> &BoxSpec {
        match self {
            Driver::Quenched(g) => g.box_spec(),
            Driver::Annealed { kernel, .. } => kernel.box_spec(),
        }
    }

    /// Advances `state` by one step.
    pub fn advance(&mut self, state: BallState) -> Result<BallState> {
        ensure_live(&state)?;
        check_capacity(&state, self.box_spec())?;
        Ok(match self {
            Driver::Quenched(g) => quenched_step(state, g),
            Driver::Annealed { kernel, rng } => annealed_step(state, kernel, rng),
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct StopRule {
    pub max_steps: Option<usize>,
    /// Stop once `|B_m|` exceeds this size. The step that crosses it is
    /// completed and recorded.
    pub size_threshold: Option<f64>,
}

impl StopRule {
    /// Threshold `N^{αd}`.
    pub fn size_power(spec: &BoxSpec, alpha: f64) -> f64 {
        (spec.side() as f64).powf(alpha * spec.dim() as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Covered,
    MaxSteps,
    ThresholdExceeded,
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StopReason::Covered => "covered",
            StopReason::MaxSteps => "max_steps",
            StopReason::ThresholdExceeded => "threshold_exceeded",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthTrajectory {
    pub mode: Mode,
    /// `|∂B_m|` for `m = 0, 1, ...`; the first entry is `|U|`.
    pub boundary_sizes: Vec<u64>,
    /// First `m` with `B_m` equal to the whole box.
    pub covered_step: Option<usize>,
    pub stop_reason: StopReason,
}

pub fn run_chain(
    start: BallState,
    driver: &mut Driver<'_>,
    stop: StopRule,
) -> Result<GrowthTrajectory> {
    run_chain_observed(start, driver, stop, |_| {})
}

/// [`run_chain`], calling `observe` on every visited state (including the
/// start).
pub fn run_chain_observed(
    start: BallState,
    driver: &mut Driver<'_>,
    stop: StopRule,
    mut observe: impl FnMut(&BallState),
) -> Result<GrowthTrajectory> {
    let mut state = start;
    let mut boundary_sizes = Vec::new();
    loop {
        observe(&state);
        boundary_sizes.push(state.boundary.len() as u64);
        let reason = if state.is_covered() {
            Some(StopReason::Covered)
        } else if stop
            .size_threshold
            .is_some_and(|t| state.ball_size() as f64 > t)
        {
            Some(StopReason::ThresholdExceeded)
        } else if stop.max_steps.is_some_and(|m| state.step >= m) {
            Some(StopReason::MaxSteps)
        } else {
            None
        };
        if let Some(stop_reason) = reason {
            return Ok(GrowthTrajectory {
                mode: driver.mode(),
                covered_step: state.is_covered().then_some(state.step),
                boundary_sizes,
                stop_reason,
            });
        }
        state = driver.advance(state)?;
    }
}
