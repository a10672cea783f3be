//! The weight statistic `ρ(y, S) = Σ_{x ∈ S, x ≠ y} β / ‖x − y‖^s` and the
//! bounds built on it.
//!
//! Every ρ is accumulated in decreasing-distance order (smallest terms
//! first) with Neumaier compensation. Terms at equal distance are combined
//! as `count × term`, so the result does not depend on the order in which
//! the set is stored.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ballgrowth::BallState;
use crate::error::{domain, Result};
use crate::graph::ModelParams;
use crate::lattice::{BoxSpec, Site};
use crate::siteset::SiteSet;
use crate::stats::NeumaierSum;

/// Sets at least this large are scanned in parallel.
const PAR_THRESHOLD: usize = 2048;

/// Precomputed per-distance rates `β / r^s` for one box.
#[derive(Debug, Clone)]
pub struct WeightKernel {
    spec: BoxSpec,
    table: Vec<f64>,
}

impl WeightKernel {
    pub fn new(params: &ModelParams, spec: &BoxSpec) -> Self {
        let mut table = vec![0.0; spec.max_l1() as usize + 1];
        for (r, t) in table.iter_mut().enumerate().skip(1) {
            *t = params.rate(r as u64);
        }
        Self {
            spec: spec.clone(),
            table,
        }
    }

    pub fn box_spec(&self) -> &BoxSpec {
        &self.spec
    }

    #[inline]
    pub fn rate(&self, r: u64) -> f64 {
        self.table[r as usize]
    }

    /// ρ of site index `y` relative to the sites in `set`, reusing `scratch`.
    pub fn rho_with(&self, y: u64, set: &[u64], scratch: &mut Vec<u64>) -> f64 {
        scratch.clear();
        scratch.extend(
            set.iter()
                .map(|&x| self.spec.l1_between(x, y))
                .filter(|&r| r > 0),
        );
        scratch.sort_unstable_by(|a, b| b.cmp(a));
        let mut sum = NeumaierSum::new();
        let mut i = 0;
        while i < scratch.len() {
            let r = scratch[i];
            let mut j = i + 1;
            while j < scratch.len() && scratch[j] == r {
                j += 1;
            }
            sum.add((j - i) as f64 * self.table[r as usize]);
            i = j;
        }
        sum.value()
    }

    pub fn rho(&self, y: u64, set: &[u64]) -> f64 {
        self.rho_with(y, set, &mut Vec::new())
    }

    /// ρ of every site in `targets` relative to `set`, in `targets` order.
    pub fn rho_many(&self, targets: &[u64], set: &[u64]) -> Vec<f64> {
        if targets.len() * set.len().max(1) >= PAR_THRESHOLD * 16 {
            targets
                .par_iter()
                .map_init(Vec::new, |scratch, &y| self.rho_with(y, set, scratch))
                .collect()
        } else {
            let mut scratch = Vec::new();
            targets
                .iter()
                .map(|&y| self.rho_with(y, set, &mut scratch))
                .collect()
        }
    }
}

/// `ρ(y, S)`; the self-term is excluded when `y ∈ S`.
pub fn rho(params: &ModelParams, spec: &BoxSpec, y: &Site, set: &[u64]) -> Result<f64> {
    spec.check_site(y)?;
    if let Some(&bad) = set.iter().find(|&&x| x >= spec.site_count()) {
        return domain(format!("site index {bad} outside the box"));
    }
    Ok(WeightKernel::new(params, spec).rho(y.index(), set))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightReport {
    pub rho: f64,
    pub site: u64,
    pub set_size: usize,
    pub complement_size: u64,
}

pub fn weight_report(
    params: &ModelParams,
    spec: &BoxSpec,
    y: &Site,
    set: &SiteSet,
) -> Result<WeightReport> {
    let rho = rho(params, spec, y, set.as_slice())?;
    Ok(WeightReport {
        rho,
        site: y.index(),
        set_size: set.len(),
        complement_size: spec.site_count() - set.len() as u64,
    })
}

/// Probability that `y ∉ S` is joined to `S` by at least one edge: 1 when a
/// nearest neighbour of `y` lies in `S`, otherwise `1 − e^{−ρ(y, S)}`.
#[inline]
fn hit_probability(spec: &BoxSpec, y: u64, rho: f64, set: &SiteSet) -> f64 {
    if spec.neighbors(y).any(|z| set.contains(z)) {
        1.0
    } else {
        -(-rho).exp_m1()
    }
}

/// Per-candidate hit probabilities for one round of fresh edges from a
/// boundary to every site outside `boundary ∪ forbidden`. Draws for distinct
/// candidates are independent.
#[derive(Debug, Clone)]
pub struct CandidateLaw {
    candidates: Vec<u64>,
    probabilities: Vec<f64>,
}

impl CandidateLaw {
    pub fn new(
        params: &ModelParams,
        spec: &BoxSpec,
        boundary: &SiteSet,
        forbidden: &SiteSet,
    ) -> Self {
        let kernel = WeightKernel::new(params, spec);
        Self::with_kernel(&kernel, boundary, forbidden)
    }

    pub fn with_kernel(kernel: &WeightKernel, boundary: &SiteSet, forbidden: &SiteSet) -> Self {
        let spec = kernel.box_spec();
        let candidates: Vec<u64> = (0..spec.site_count())
            .filter(|&y| !boundary.contains(y) && !forbidden.contains(y))
            .collect();
        let rhos = kernel.rho_many(&candidates, boundary.as_slice());
        let probabilities = candidates
            .iter()
            .zip(&rhos)
            .map(|(&y, &r)| hit_probability(spec, y, r, boundary))
            .collect();
        Self {
            candidates,
            probabilities,
        }
    }

    pub fn candidates(&self) -> &[u64] {
        &self.candidates
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Expected number of hit candidates.
    pub fn mean(&self) -> f64 {
        self.probabilities
            .iter()
            .copied()
            .collect::<NeumaierSum>()
            .value()
    }

    /// Hit candidates, ascending.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u64> {
        self.candidates
            .iter()
            .zip(&self.probabilities)
            .filter_map(|(&y, &p)| (rng.random::<f64>() < p).then_some(y))
            .collect()
    }

    pub fn sample_count<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.probabilities
            .iter()
            .filter(|&&p| rng.random::<f64>() < p)
            .count()
    }
}

/// `E[|∂B_{m+1}| | 𝐁_m] = Σ_{y ∉ B_m} P(y ↔ ∂B_m)`, exactly.
pub fn expected_boundary_growth(params: &ModelParams, spec: &BoxSpec, state: &BallState) -> f64 {
    if state.boundary().is_empty() {
        return 0.0;
    }
    CandidateLaw::new(params, spec, state.boundary(), state.interior()).mean()
}

/// `(ρ(1 − ρ), ρ)`, which bracket `1 − e^{−ρ}` for every `ρ ≥ 0`.
pub fn elementary_bounds(rho: f64) -> Result<(f64, f64)> {
    if rho.is_nan() || rho < 0.0 {
        return domain(format!("rho must be nonnegative, got {rho}"));
    }
    Ok((rho * (1.0 - rho), rho))
}

/// Extremal weights of one site over all sets of each size.
///
/// `max(k)` is attained by the `k` closest sites and `min(k)` by the `k`
/// farthest, since every term is positive and decreasing in distance.
#[derive(Debug, Clone)]
pub struct ExtremalProfile {
    site: u64,
    max_by_size: Vec<f64>,
    min_by_size: Vec<f64>,
}

impl ExtremalProfile {
    pub fn new(kernel: &WeightKernel, x: &Site) -> Result<Self> {
        let spec = kernel.box_spec();
        spec.check_site(x)?;
        let shells: Vec<u64> = (1..=spec.max_l1())
            .map(|r| spec.shell_size(x, r))
            .collect::<Result<_>>()?;
        let others = (spec.site_count() - 1) as usize;
        let mut max_by_size = Vec::with_capacity(others + 1);
        let mut acc = NeumaierSum::new();
        max_by_size.push(0.0);
        for (i, &count) in shells.iter().enumerate() {
            let t = kernel.rate(i as u64 + 1);
            for _ in 0..count {
                acc.add(t);
                max_by_size.push(acc.value());
            }
        }
        let mut min_by_size = Vec::with_capacity(others + 1);
        let mut acc = NeumaierSum::new();
        min_by_size.push(0.0);
        for (i, &count) in shells.iter().enumerate().rev() {
            let t = kernel.rate(i as u64 + 1);
            for _ in 0..count {
                acc.add(t);
                min_by_size.push(acc.value());
            }
        }
        Ok(Self {
            site: x.index(),
            max_by_size,
            min_by_size,
        })
    }

    pub fn site(&self) -> u64 {
        self.site
    }

    /// Largest admissible set size, `site_count − 1`.
    pub fn max_size(&self) -> usize {
        self.max_by_size.len() - 1
    }

    /// `(min, max)` of `ρ(x, V)` over `|V| = k`, `x ∉ V`.
    pub fn bounds(&self, k: usize) -> Result<(f64, f64)> {
        if k == 0 || k > self.max_size() {
            return domain(format!("set size {k} outside [1, {}]", self.max_size()));
        }
        Ok((self.min_by_size[k], self.max_by_size[k]))
    }
}

pub fn extremal_rho(params: &ModelParams, spec: &BoxSpec, x: &Site, k: u64) -> Result<(f64, f64)> {
    let kernel = WeightKernel::new(params, spec);
    ExtremalProfile::new(&kernel, x)?.bounds(k as usize)
}

/// Constants `(c, C)` in `c·log(N^d / |V^c|) ≤ ρ(x, V) ≤ C·log|V|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct WeightConstants {
    pub lower: f64,
    pub upper: f64,
}

fn lower_log(spec: &BoxSpec, k: usize) -> f64 {
    let complement = spec.site_count() - k as u64;
    (spec.side() as f64).powi(spec.dim() as i32).ln() - (complement as f64).ln()
}

/// Fits `(c, C)` over every site and every set size `k ≥ 2` of `spec`, then
/// shrinks `c` and inflates `C` by the relative `margin`. Set sizes whose
/// lower form is not positive carry no constraint on `c`.
pub fn calibrate_weight_constants(
    params: &ModelParams,
    spec: &BoxSpec,
    margin: f64,
) -> Result<WeightConstants> {
    let kernel = WeightKernel::new(params, spec);
    let ratios: Vec<(f64, f64)> = (0..spec.site_count())
        .into_par_iter()
        .map(|i| -> Result<(f64, f64)> {
            let x = spec.site_from_index(i)?;
            let profile = ExtremalProfile::new(&kernel, &x)?;
            let mut lo = f64::INFINITY;
            let mut hi: f64 = 0.0;
            for k in 2..=profile.max_size() {
                let (min_rho, max_rho) = profile.bounds(k)?;
                let l = lower_log(spec, k);
                if l > 0.0 {
                    lo = lo.min(min_rho / l);
                }
                hi = hi.max(max_rho / (k as f64).ln());
            }
            Ok((lo, hi))
        })
        .collect::<Result<_>>()?;
    let lo = ratios.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().map(|r| r.1).fold(0.0, f64::max);
    if !lo.is_finite() || hi == 0.0 {
        return domain("box too small to calibrate weight constants");
    }
    Ok(WeightConstants {
        lower: lo * (1.0 - margin),
        upper: hi * (1.0 + margin),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightViolation {
    pub site: u64,
    pub set_size: u64,
    pub side: &'static str,
    pub rho: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightBoundReport {
    pub side_length: u64,
    pub constants: WeightConstants,
    pub sites_checked: usize,
    pub cases_checked: u64,
    pub violations: Vec<WeightViolation>,
}

impl WeightBoundReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks both weight bounds against the extremal sets of each site in
/// `sites`, for all set sizes `2 ≤ k ≤ site_count − 1`.
pub fn weight_bound_check(
    params: &ModelParams,
    spec: &BoxSpec,
    constants: WeightConstants,
    sites: &[u64],
) -> Result<WeightBoundReport> {
    let kernel = WeightKernel::new(params, spec);
    let per_site: Vec<(u64, Vec<WeightViolation>)> = sites
        .par_iter()
        .map(|&i| -> Result<(u64, Vec<WeightViolation>)> {
            let x = spec.site_from_index(i)?;
            let profile = ExtremalProfile::new(&kernel, &x)?;
            let mut found = Vec::new();
            let mut cases = 0;
            for k in 2..=profile.max_size() {
                let (min_rho, max_rho) = profile.bounds(k)?;
                let low = constants.lower * lower_log(spec, k);
                let high = constants.upper * (k as f64).ln();
                cases += 1;
                if min_rho < low {
                    found.push(WeightViolation {
                        site: i,
                        set_size: k as u64,
                        side: "lower",
                        rho: min_rho,
                        bound: low,
                    });
                }
                if max_rho > high {
                    found.push(WeightViolation {
                        site: i,
                        set_size: k as u64,
                        side: "upper",
                        rho: max_rho,
                        bound: high,
                    });
                }
            }
            Ok((cases, found))
        })
        .collect::<Result<_>>()?;
    Ok(WeightBoundReport {
        side_length: spec.side(),
        constants,
        sites_checked: sites.len(),
        cases_checked: per_site.iter().map(|p| p.0).sum(),
        violations: per_site.into_iter().flat_map(|p| p.1).collect(),
    })
}

/// Quantities in the two-sided bound on the expected boundary growth, for
/// one chain state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterativeBoundReport {
    pub step: usize,
    pub boundary_size: usize,
    pub ball_size: u64,
    /// `E[|∂B_{m+1}| | 𝐁_m]`.
    pub expected_growth: f64,
    /// `Σ_{z ∈ ∂B_m} ρ(z, B_m^c)`.
    pub upper: f64,
    /// `(1 − ω_m) Σ_{z ∈ ∂B_m} ρ(z, V_m)`.
    pub lower: f64,
    /// `ω_m = 1 / log N`.
    pub omega: f64,
    /// `|{y ∉ B_m : ρ(y, ∂B_m) ≥ ω_m}|`.
    pub heavy_count: u64,
    /// `Σ_{y ∉ B_m} ρ(y, ∂B_m) / ω_m`, which bounds `heavy_count`.
    pub pigeonhole_bound: f64,
    /// `|V_m^c| = |B_m| + heavy_count`.
    pub v_complement_size: u64,
    /// `log(N^d / |V_m^c|)`.
    pub log_ratio: f64,
    /// `|B_m| ≤ N^{αd}`.
    pub side_condition: bool,
}

impl IterativeBoundReport {
    /// `lower ≤ expected_growth ≤ upper` up to relative rounding `rel_tol`.
    pub fn sandwich_holds(&self, rel_tol: f64) -> bool {
        let slack = rel_tol * self.expected_growth.abs().max(1.0);
        self.lower <= self.expected_growth + slack && self.expected_growth <= self.upper + slack
    }

    pub fn pigeonhole_holds(&self) -> bool {
        self.heavy_count as f64 <= self.pigeonhole_bound
    }
}

pub fn iterative_bound_report(
    params: &ModelParams,
    spec: &BoxSpec,
    state: &BallState,
    alpha: f64,
) -> Result<IterativeBoundReport> {
    if state.boundary().is_empty() {
        return domain("iterative bounds need a nonempty boundary");
    }
    if spec.side() < 2 {
        return domain("log N must be positive: need N >= 2");
    }
    let kernel = WeightKernel::new(params, spec);
    let n = spec.side() as f64;
    let d = spec.dim() as f64;
    let omega = 1.0 / n.ln();
    let boundary = state.boundary();
    let outside: Vec<u64> = (0..spec.site_count())
        .filter(|&y| !state.in_ball(y))
        .collect();

    let rho_out = kernel.rho_many(&outside, boundary.as_slice());
    let expected_growth: NeumaierSum = outside
        .iter()
        .zip(&rho_out)
        .map(|(&y, &r)| hit_probability(spec, y, r, boundary))
        .collect();

    let light: Vec<u64> = outside
        .iter()
        .zip(&rho_out)
        .filter(|(_, &r)| r < omega)
        .map(|(&y, _)| y)
        .collect();
    let heavy_count = (outside.len() - light.len()) as u64;
    let total_rho: NeumaierSum = rho_out.iter().copied().collect();

    let upper: NeumaierSum = kernel
        .rho_many(boundary.as_slice(), &outside)
        .into_iter()
        .collect();
    let light_sum: NeumaierSum = kernel
        .rho_many(boundary.as_slice(), &light)
        .into_iter()
        .collect();

    let ball_size = state.ball_size();
    let v_complement_size = ball_size + heavy_count;
    Ok(IterativeBoundReport {
        step: state.step(),
        boundary_size: boundary.len(),
        ball_size,
        expected_growth: expected_growth.value(),
        upper: upper.value(),
        lower: (1.0 - omega) * light_sum.value(),
        omega,
        heavy_count,
        pigeonhole_bound: total_rho.value() / omega,
        v_complement_size,
        log_ratio: d * n.ln() - (v_complement_size as f64).ln(),
        side_condition: ball_size as f64 <= n.powf(alpha * d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballgrowth::init_ball;

    fn line(n: u64) -> BoxSpec {
        BoxSpec::new(1, n).unwrap()
    }

    fn unit(dim: usize) -> ModelParams {
        ModelParams::critical(1.0, dim).unwrap()
    }

    #[test]
    fn rho_examples() {
        let b = line(8);
        let y = b.site(&[0]).unwrap();
        assert_eq!(rho(&unit(1), &b, &y, &[]).unwrap(), 0.0);
        assert_eq!(rho(&unit(1), &b, &y, &[1, 2, 4]).unwrap(), 1.75);
        // Self term is skipped.
        assert_eq!(rho(&unit(1), &b, &y, &[0, 1]).unwrap(), 1.0);
        assert!(rho(&unit(1), &b, &y, &[99]).is_err());
    }

    #[test]
    fn rho_is_order_independent() {
        let b = BoxSpec::new(2, 12).unwrap();
        let k = WeightKernel::new(&unit(2), &b);
        let set: Vec<u64> = (0..b.site_count()).step_by(7).collect();
        let mut rev = set.clone();
        rev.reverse();
        assert_eq!(k.rho(40, &set).to_bits(), k.rho(40, &rev).to_bits());
    }

    #[test]
    fn expected_growth_two_site_example() {
        let b = line(2);
        let st = init_ball(&b, &[0]).unwrap();
        let e = expected_boundary_growth(&unit(1), &b, &st);
        assert!((e - 1.393_469_3).abs() < 5e-8, "{e}");
        let full = init_ball(&b, &[0, 1, 2]).unwrap();
        assert_eq!(expected_boundary_growth(&unit(1), &b, &full), 0.0);
    }

    #[test]
    fn elementary_bound_examples() {
        assert_eq!(elementary_bounds(0.0).unwrap(), (0.0, 0.0));
        let (lo, hi) = elementary_bounds(0.5).unwrap();
        assert_eq!((lo, hi), (0.25, 0.5));
        let v = 1.0 - (-0.5f64).exp();
        assert!(lo <= v && v <= hi);
        let (lo, hi) = elementary_bounds(2.0).unwrap();
        assert_eq!(lo, -2.0);
        assert!(hi >= 1.0 - (-2.0f64).exp());
        assert!(elementary_bounds(-1e-300).is_err());
        assert!(elementary_bounds(f64::NAN).is_err());
    }

    #[test]
    fn extremal_examples() {
        let b = line(4);
        let x = b.site(&[0]).unwrap();
        let (min, max) = extremal_rho(&unit(1), &b, &x, 2).unwrap();
        assert!((max - 1.5).abs() < 1e-15);
        assert!((min - (1.0 / 3.0 + 0.25)).abs() < 1e-15);
        let (min, max) = extremal_rho(&unit(1), &b, &x, 4).unwrap();
        let all = rho(&unit(1), &b, &x, &[1, 2, 3, 4]).unwrap();
        assert!((min - all).abs() < 1e-15 && (max - all).abs() < 1e-15);
        assert!(extremal_rho(&unit(1), &b, &x, 0).is_err());
        assert!(extremal_rho(&unit(1), &b, &x, 5).is_err());
    }

    /// Brute force over every subset of the other sites.
    fn exhaustive_extremes(spec: &BoxSpec, params: &ModelParams, x: u64) -> Vec<(f64, f64)> {
        let others: Vec<u64> = (0..spec.site_count()).filter(|&i| i != x).collect();
        let mut out = vec![(f64::INFINITY, f64::NEG_INFINITY); others.len() + 1];
        for mask in 1u32..(1 << others.len()) {
            let mut total = 0.0;
            for (bit, &y) in others.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    total += params.beta() / (spec.l1_between(x, y) as f64).powf(params.exponent());
                }
            }
            let k = mask.count_ones() as usize;
            out[k].0 = out[k].0.min(total);
            out[k].1 = out[k].1.max(total);
        }
        out
    }

    #[test]
    fn extremal_profile_matches_subset_enumeration() {
        for (spec, params) in [
            (line(11), ModelParams::critical(0.7, 1).unwrap()),
            (
                BoxSpec::new(2, 2).unwrap(),
                ModelParams::critical(1.3, 2).unwrap(),
            ),
            (
                BoxSpec::new(3, 1).unwrap(),
                ModelParams::critical(2.0, 3).unwrap(),
            ),
        ] {
            let kernel = WeightKernel::new(&params, &spec);
            for x in 0..spec.site_count() {
                let brute = exhaustive_extremes(&spec, &params, x);
                let prof =
                    ExtremalProfile::new(&kernel, &spec.site_from_index(x).unwrap()).unwrap();
                for (k, &(bmin, bmax)) in brute.iter().enumerate().skip(1) {
                    let (min, max) = prof.bounds(k).unwrap();
                    assert!((min - bmin).abs() < 1e-12 && (max - bmax).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn extremal_monotone_in_size() {
        let b = BoxSpec::new(2, 7).unwrap();
        let kernel = WeightKernel::new(&unit(2), &b);
        let prof = ExtremalProfile::new(&kernel, &b.site(&[2, 5]).unwrap()).unwrap();
        for k in 1..prof.max_size() {
            let (a0, b0) = prof.bounds(k).unwrap();
            let (a1, b1) = prof.bounds(k + 1).unwrap();
            assert!(a1 >= a0 && b1 >= b0);
        }
    }

    #[test]
    fn weight_constants_transfer_across_sizes() {
        let p = unit(1);
        let consts = calibrate_weight_constants(&p, &line(64), 0.1).unwrap();
        // Max ratio at k = 2 for an interior site is 2β / ln 2.
        assert!((consts.upper - 1.1 * 2.0 / 2f64.ln()).abs() < 1e-9);
        assert!(consts.lower > 0.0);
        for n in [128, 256] {
            let b = line(n);
            let sites: Vec<u64> = (0..=n).collect();
            let report = weight_bound_check(&p, &b, consts, &sites).unwrap();
            assert!(report.passed(), "{:?}", report.violations.first());
        }
        // A constant pair that is too tight reports witnesses.
        let tight = WeightConstants {
            lower: consts.lower * 3.0,
            upper: consts.upper / 3.0,
        };
        let report = weight_bound_check(&p, &line(64), tight, &[0, 32]).unwrap();
        assert!(!report.passed());
        assert!(report.violations.iter().any(|v| v.side == "lower"));
        assert!(report.violations.iter().any(|v| v.side == "upper"));
    }

    #[test]
    fn iterative_report_singleton_by_hand() {
        let b = line(8);
        let p = unit(1);
        let st = init_ball(&b, &[4]).unwrap();
        let rep = iterative_bound_report(&p, &b, &st, 0.5).unwrap();
        let omega = 1.0 / 8f64.ln();
        let mut upper = 0.0;
        let mut expected = 0.0;
        let mut light = 0.0;
        let mut heavy = 0;
        for y in 0..=8u64 {
            if y == 4 {
                continue;
            }
            let r = y.abs_diff(4) as f64;
            upper += 1.0 / r;
            expected += if r == 1.0 {
                1.0
            } else {
                1.0 - (-1.0 / r).exp()
            };
            if 1.0 / r < omega {
                light += 1.0 / r;
            } else {
                heavy += 1;
            }
        }
        assert!((rep.upper - upper).abs() < 1e-12);
        assert!((rep.expected_growth - expected).abs() < 1e-12);
        assert!((rep.lower - (1.0 - omega) * light).abs() < 1e-12);
        assert_eq!(rep.heavy_count, heavy);
        assert_eq!(rep.v_complement_size, heavy + 1);
        assert!(rep.side_condition);
        assert!(rep.sandwich_holds(1e-9) && rep.pigeonhole_holds());
    }

    #[test]
    fn exchange_symmetry_and_additivity() {
        use rand::seq::SliceRandom;
        let b = BoxSpec::new(2, 10).unwrap();
        let k = WeightKernel::new(&ModelParams::critical(0.8, 2).unwrap(), &b);
        let mut rng = crate::rng::rng_from_seed(5);
        for _ in 0..20 {
            let mut ids: Vec<u64> = (0..b.site_count()).collect();
            ids.shuffle(&mut rng);
            let a = &ids[..15];
            let c = &ids[15..40];
            let d = &ids[40..70];
            let ab: f64 = k.rho_many(a, c).iter().sum();
            let ba: f64 = k.rho_many(c, a).iter().sum();
            assert!((ab - ba).abs() <= 1e-9 * ab);
            let mut cd = c.to_vec();
            cd.extend_from_slice(d);
            for &y in a {
                let joint = k.rho(y, &cd);
                let split = k.rho(y, c) + k.rho(y, d);
                assert!((joint - split).abs() <= 1e-9 * joint);
            }
        }
    }
}
