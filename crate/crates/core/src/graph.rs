//! Sampling the long-range percolation graph.
//!
//! Every pair of sites `x ≠ y` is connected independently, with probability
//! 1 at ℓ1 distance 1 and `1 − exp(−β / ‖x − y‖^s)` otherwise.

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::lattice::{BoxSpec, Site};
use crate::rng::rng_from_seed;
use crate::siteset::SiteSet;
use crate::weights::CandidateLaw;

pub const EAGER_GENERATOR: &str = "eager-binomial/1";
pub const NAIVE_GENERATOR: &str = "naive-pairs/1";

/// Connection law parameters: intensity `β` and distance exponent `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    beta: f64,
    exponent: f64,
    critical: bool,
}

impl ModelParams {
    /// The critical model `s = d`.
    pub fn critical(beta: f64, dim: usize) -> Result<Self> {
        Self::with_exponent(beta, dim as f64, dim)
    }

    pub fn with_exponent(beta: f64, exponent: f64, dim: usize) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return domain(format!("beta must be positive and finite, got {beta}"));
        }
        if !(exponent > 0.0 && exponent.is_finite()) {
            return domain(format!(
                "exponent must be positive and finite, got {exponent}"
            ));
        }
        Ok(Self {
            beta,
            exponent,
            critical: exponent == dim as f64,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    /// Whether `s = d`.
    pub fn is_critical(&self) -> bool {
        self.critical
    }

    /// Connection rate `β / r^s` at ℓ1 distance `r ≥ 1`.
    #[inline]
    pub fn rate(&self, r: u64) -> f64 {
        self.beta / (r as f64).powf(self.exponent)
    }

    /// Connection probability at ℓ1 distance `r ≥ 1`.
    #[inline]
    pub fn probability_at(&self, r: u64) -> f64 {
        if r == 1 {
            1.0
        } else {
            -(-self.rate(r)).exp_m1()
        }
    }
}

/// Probability that `a` and `b` are joined by an edge.
pub fn pair_probability(params: &ModelParams, spec: &BoxSpec, a: &Site, b: &Site) -> Result<f64> {
    spec.check_site(a)?;
    spec.check_site(b)?;
    if a.index() == b.index() {
        return domain("pair probability is undefined for a site with itself");
    }
    Ok(params.probability_at(spec.l1_between(a.index(), b.index())))
}

/// Exact mean and variance of the total edge count, summed per
/// displacement class.
pub fn edge_count_moments(spec: &BoxSpec, params: &ModelParams) -> (f64, f64) {
    let mut mean = crate::stats::NeumaierSum::new();
    let mut var = crate::stats::NeumaierSum::new();
    for class in spec.displacement_classes() {
        let p = params.probability_at(class.l1);
        let m = class.pair_count as f64;
        mean.add(m * p);
        var.add(m * p * (1.0 - p));
    }
    (mean.value(), var.value())
}

/// An immutable sampled edge set with adjacency lists.
#[derive(Debug, Clone)]
pub struct Graph {
    spec: BoxSpec,
    params: ModelParams,
    seed: u64,
    generator_id: String,
    edges: Vec<(u64, u64)>,
    offsets: Vec<usize>,
    targets: Vec<u64>,
}

impl Graph {
    /// Builds a graph from an edge list, validating it.
    ///
    /// Edges are normalised to `(min, max)` and sorted. Rejects self-loops,
    /// duplicates, out-of-range endpoints and missing nearest-neighbour edges.
    pub fn from_edges(
        spec: BoxSpec,
        params: ModelParams,
        seed: u64,
        generator_id: impl Into<String>,
        mut edges: Vec<(u64, u64)>,
    ) -> Result<Self> {
        let n = spec.site_count();
        for e in edges.iter_mut() {
            if e.0 == e.1 {
                return domain(format!("self-loop at site {}", e.0));
            }
            if e.0 >= n || e.1 >= n {
                return domain(format!("edge {e:?} leaves the box of {n} sites"));
            }
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return domain(format!("duplicate edge {:?}", w[0]));
        }
        let graph = Self::assemble(spec, params, seed, generator_id.into(), edges);
        for x in 0..n {
            for y in graph.spec.neighbors(x) {
                if !graph.has_edge(x, y) {
                    return domain(format!("nearest-neighbour edge ({x}, {y}) missing"));
                }
            }
        }
        Ok(graph)
    }

    /// Trusted constructor: `edges` are normalised, sorted and unique.
    fn assemble(
        spec: BoxSpec,
        params: ModelParams,
        seed: u64,
        generator_id: String,
        edges: Vec<(u64, u64)>,
    ) -> Self {
        let n = spec.site_count() as usize;
        let mut offsets = vec![0usize; n + 1];
        for &(a, b) in &edges {
            offsets[a as usize + 1] += 1;
            offsets[b as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0u64; 2 * edges.len()];
        for &(a, b) in &edges {
            targets[fill[a as usize]] = b;
            fill[a as usize] += 1;
            targets[fill[b as usize]] = a;
            fill[b as usize] += 1;
        }
        for i in 0..n {
            targets[offsets[i]..offsets[i + 1]].sort_unstable();
        }
        Self {
            spec,
            params,
            seed,
            generator_id,
            edges,
            offsets,
            targets,
        }
    }

    pub fn box_spec(&self) -> &BoxSpec {
        &self.spec
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn generator_id(&self) -> &str {
        &self.generator_id
    }

    /// Edges as `(smaller, larger)` index pairs, sorted lexicographically.
    pub fn edges(&self) -> &[(u64, u64)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sorted neighbour list of site index `x`.
    #[inline]
    pub fn neighbors(&self, x: u64) -> &[u64] {
        let x = x as usize;
        &self.targets[self.offsets[x]..self.offsets[x + 1]]
    }

    pub fn has_edge(&self, a: u64, b: u64) -> bool {
        a < self.spec.site_count() && self.neighbors(a).binary_search(&b).is_ok()
    }

    pub fn degree(&self, x: &Site) -> Result<usize> {
        self.spec.check_site(x)?;
        Ok(self.neighbors(x.index()).len())
    }

    pub fn mean_degree(&self) -> f64 {
        2.0 * self.edges.len() as f64 / self.spec.site_count() as f64
    }
}

/// Per-pair reference sampler: one Bernoulli draw per unordered pair, in
/// ascending `(x, y)` order. Refuses boxes with more than `pair_budget` pairs.
pub fn sample_graph_naive(
    spec: &BoxSpec,
    params: &ModelParams,
    seed: u64,
    pair_budget: u64,
) -> Result<Graph> {
    let n = spec.site_count();
    let pairs = n.saturating_mul(n - 1) / 2;
    if pairs > pair_budget {
        return Err(Error::Budget {
            what: "naive sampling",
            required: pairs,
            limit: pair_budget,
            advice: "use the eager sampler for boxes of this size",
        });
    }
    let probs: Vec<f64> = (0..=spec.max_l1())
        .map(|r| params.probability_at(r.max(1)))
        .collect();
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            let p = probs[spec.l1_between(x, y) as usize];
            if rng.random::<f64>() < p {
                edges.push((x, y));
            }
        }
    }
    Ok(Graph::assemble(
        spec.clone(),
        *params,
        seed,
        NAIVE_GENERATOR.to_string(),
        edges,
    ))
}

/// Displacement-class sampler.
///
/// For each class `v` with `M_v` pairs and probability `p_v`, draws the number
/// of present edges `K_v ~ Binomial(M_v, p_v)` and then a uniform `K_v`-subset
/// of the class's pair slots. Unit-distance classes are emitted whole.
pub fn sample_graph_eager(spec: &BoxSpec, params: &ModelParams, seed: u64) -> Graph {
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for class in spec.displacement_classes() {
        let delta = class.index_delta(spec);
        let mut push = |slot: u64| {
            let x = class.base_site(spec, slot);
            let y = (x as i64 + delta) as u64;
            edges.push((x.min(y), x.max(y)));
        };
        if class.l1 == 1 {
            (0..class.pair_count).for_each(&mut push);
            continue;
        }
        let p = params.probability_at(class.l1);
        let k = Binomial::new(class.pair_count, p)
            .expect("class probability lies in [0, 1]")
            .sample(&mut rng);
        if k == 0 {
            continue;
        }
        rand::seq::index::sample(&mut rng, class.pair_count as usize, k as usize)
            .into_iter()
            .for_each(|slot| push(slot as u64));
    }
    edges.sort_unstable();
    Graph::assemble(
        spec.clone(),
        *params,
        seed,
        EAGER_GENERATOR.to_string(),
        edges,
    )
}

/// One round of fresh edges between `boundary` and the sites outside
/// `boundary ∪ forbidden`: returns the candidates hit by at least one edge,
/// ascending.
pub fn sample_bipartite_round(
    spec: &BoxSpec,
    params: &ModelParams,
    boundary: &SiteSet,
    forbidden: &SiteSet,
    seed: u64,
) -> Result<Vec<u64>> {
    if !boundary.is_disjoint(forbidden) {
        return domain("boundary and forbidden sets overlap");
    }
    if boundary.is_empty() {
        return domain("boundary must be nonempty");
    }
    let law = CandidateLaw::new(params, spec, boundary, forbidden);
    Ok(law.sample(&mut rng_from_seed(seed)))
}
