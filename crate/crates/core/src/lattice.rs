//! Geometry of the box `{0, ..., N}^d`.
//!
//! Sites are addressed by a row-major linear index with coordinate 0 least
//! significant: `index = sum_i coords[i] * (N + 1)^i`. All distances are ℓ1.

use crate::error::{domain, Result};

/// Largest admissible site count; indices must fit in 63 bits.
const MAX_SITES: u64 = 1 << 63;

/// The lattice box `[N]^d = {0, 1, ..., N}^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxSpec {
    dim: usize,
    side: u64,
    site_count: u64,
    strides: Vec<u64>,
}

impl BoxSpec {
    /// Builds the box of dimension `dim` and side length `side` (the `N` of
    /// `[N]^d`, so each axis has `side + 1` sites).
    pub fn new(dim: usize, side: u64) -> Result<Self> {
        if dim == 0 {
            return domain("dimension must be at least 1");
        }
        if side == 0 {
            return domain("side length N must be at least 1");
        }
        let extent = side
            .checked_add(1)
            .ok_or_else(|| crate::Error::Domain("side length overflows".into()))?;
        let mut strides = Vec::with_capacity(dim);
        let mut count: u64 = 1;
        for _ in 0..dim {
            strides.push(count);
            count = match count.checked_mul(extent) {
                Some(c) if c <= MAX_SITES => c,
                _ => {
                    return domain(format!(
                        "box (N+1)^d = {extent}^{dim} overflows the 63-bit site index"
                    ))
                }
            };
        }
        Ok(Self {
            dim,
            side,
            site_count: count,
            strides,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The side length `N`.
    pub fn side(&self) -> u64 {
        self.side
    }

    /// Sites per axis, `N + 1`.
    pub fn extent(&self) -> u64 {
        self.side + 1
    }

    pub fn site_count(&self) -> u64 {
        self.site_count
    }

    /// Largest ℓ1 distance inside the box, `d * N`.
    pub fn max_l1(&self) -> u64 {
        self.dim as u64 * self.side
    }

    pub fn strides(&self) -> &[u64] {
        &self.strides
    }

    /// Canonical linear index of `coords`.
    pub fn site_index(&self, coords: &[u64]) -> Result<u64> {
        if coords.len() != self.dim {
            return domain(format!(
                "expected {} coordinates, got {}",
                self.dim,
                coords.len()
            ));
        }
        let mut index = 0;
        for (i, (&c, &stride)) in coords.iter().zip(&self.strides).enumerate() {
            if c > self.side {
                return domain(format!(
                    "coordinate {i} = {c} lies outside [0, {}]",
                    self.side
                ));
            }
            index += c * stride;
        }
        Ok(index)
    }

    pub fn site(&self, coords: &[u64]) -> Result<Site> {
        let index = self.site_index(coords)?;
        Ok(Site {
            coords: coords.to_vec(),
            index,
        })
    }

    pub fn site_from_index(&self, index: u64) -> Result<Site> {
        if index >= self.site_count {
            return domain(format!(
                "site index {index} outside [0, {})",
                self.site_count
            ));
        }
        let mut coords = vec![0; self.dim];
        self.write_coords(index, &mut coords);
        Ok(Site { coords, index })
    }

    /// Decodes `index` into `out` without range checks.
    #[inline]
    pub fn write_coords(&self, mut index: u64, out: &mut [u64]) {
        let extent = self.extent();
        for c in out.iter_mut() {
            *c = index % extent;
            index /= extent;
        }
    }

    /// ℓ1 distance between two in-range site indices.
    #[inline]
    pub fn l1_between(&self, a: u64, b: u64) -> u64 {
        let extent = self.extent();
        let (mut a, mut b) = (a, b);
        let mut total = 0;
        for _ in 0..self.dim {
            total += (a % extent).abs_diff(b % extent);
            a /= extent;
            b /= extent;
        }
        total
    }

    /// The site at the middle of the box (coordinates rounded down).
    pub fn center(&self) -> Site {
        let coords = vec![self.side / 2; self.dim];
        let index = self.site_index(&coords).expect("center lies in the box");
        Site { coords, index }
    }

    /// Nearest-neighbour indices of `index` (ℓ1 distance exactly 1).
    pub fn neighbors(&self, index: u64) -> impl Iterator<Item = u64> + '_ {
        let extent = self.extent();
        self.strides.iter().flat_map(move |&stride| {
            let c = (index / stride) % extent;
            let down = (c > 0).then(|| index - stride);
            let up = (c < self.side).then(|| index + stride);
            down.into_iter().chain(up)
        })
    }

    /// Number of sites `y` in the box with `‖x − y‖ = r`.
    pub fn shell_size(&self, x: &Site, r: u64) -> Result<u64> {
        if r == 0 {
            return domain("shell radius must be at least 1");
        }
        self.check_site(x)?;
        // Convolve the per-axis offset-count profiles, truncated at r.
        let r = r as usize;
        let mut ways = vec![0u64; r + 1];
        ways[0] = 1;
        for &c in &x.coords {
            let mut next = vec![0u64; r + 1];
            for (acc, &w) in ways.iter().enumerate() {
                if w == 0 {
                    continue;
                }
                for t in 0..=(r - acc) {
                    let options = if t == 0 {
                        1
                    } else {
                        u64::from(c >= t as u64) + u64::from(c + t as u64 <= self.side)
                    };
                    next[acc + t] += w * options;
                }
            }
            ways = next;
        }
        Ok(ways[r])
    }

    /// Indices of all sites within ℓ1 distance `radius` of `x`, ascending.
    pub fn l1_ball(&self, x: &Site, radius: u64) -> Result<Vec<u64>> {
        self.check_site(x)?;
        let lo: Vec<u64> = x.coords.iter().map(|&c| c.saturating_sub(radius)).collect();
        let hi: Vec<u64> = x
            .coords
            .iter()
            .map(|&c| (c + radius).min(self.side))
            .collect();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            let dist: u64 = cur
                .iter()
                .zip(&x.coords)
                .map(|(&a, &b)| a.abs_diff(b))
                .sum();
            if dist <= radius {
                out.push(self.site_index(&cur)?);
            }
            // Odometer increment, coordinate 0 fastest.
            let mut axis = 0;
            loop {
                if axis == self.dim {
                    out.sort_unstable();
                    return Ok(out);
                }
                if cur[axis] < hi[axis] {
                    cur[axis] += 1;
                    break;
                }
                cur[axis] = lo[axis];
                axis += 1;
            }
        }
    }

    /// Lazily enumerates every unordered-pair displacement class.
    pub fn displacement_classes(&self) -> DisplacementClasses<'_> {
        DisplacementClasses {
            spec: self,
            cur: vec![-(self.side as i64); self.dim],
            done: false,
        }
    }

    pub(crate) fn check_site(&self, x: &Site) -> Result<()> {
        if x.coords.len() != self.dim || x.index >= self.site_count {
            return domain(format!(
                "site {:?} does not belong to a {}-dimensional box of side {}",
                x.coords, self.dim, self.side
            ));
        }
        Ok(())
    }
}

/// A lattice site: coordinates plus the canonical linear index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Site {
    coords: Vec<u64>,
    index: u64,
}

impl Site {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn index(&self) -> u64 {
        self.index
    }
}

/// `Σ_i |a_i − b_i|`.
pub fn l1_distance(a: &Site, b: &Site) -> Result<u64> {
    if a.coords.len() != b.coords.len() {
        return domain(format!(
            "dimension mismatch: {} vs {}",
            a.coords.len(),
            b.coords.len()
        ));
    }
    Ok(a.coords
        .iter()
        .zip(&b.coords)
        .map(|(&x, &y)| x.abs_diff(y))
        .sum())
}

/// A displacement `v` together with the number of site pairs `(x, x + v)`
/// having both endpoints in the box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisplacementClass {
    pub offset: Vec<i64>,
    pub pair_count: u64,
    pub l1: u64,
}

impl DisplacementClass {
    /// Change in linear index when moving by `offset`.
    pub fn index_delta(&self, spec: &BoxSpec) -> i64 {
        self.offset
            .iter()
            .zip(spec.strides())
            .map(|(&v, &s)| v * s as i64)
            .sum()
    }

    /// Lower endpoint of the `slot`-th pair of this class, for
    /// `slot < pair_count`. Slots are ordered with coordinate 0 fastest.
    pub fn base_site(&self, spec: &BoxSpec, mut slot: u64) -> u64 {
        let mut index = 0;
        for (&v, &stride) in self.offset.iter().zip(spec.strides()) {
            let span = spec.extent() - v.unsigned_abs();
            let lo = if v < 0 { v.unsigned_abs() } else { 0 };
            index += (slot % span + lo) * stride;
            slot /= span;
        }
        index
    }
}

/// Iterator over displacement classes, see [`BoxSpec::displacement_classes`].
///
/// Each unordered pair class appears once: the first nonzero component of
/// the offset (scanning from coordinate 0) is positive.
pub struct DisplacementClasses<'a> {
    spec: &'a BoxSpec,
    cur: Vec<i64>,
    done: bool,
}

impl DisplacementClasses<'_> {
    fn advance(&mut self) {
        let n = self.spec.side as i64;
        for c in self.cur.iter_mut() {
            if *c < n {
                *c += 1;
                return;
            }
            *c = -n;
        }
        self.done = true;
    }
}

impl Iterator for DisplacementClasses<'_> {
    type Item = DisplacementClass;

    fn next(&mut self) -> Option<DisplacementClass> {
        while !self.done {
            let v = self.cur.clone();
            self.advance();
            match v.iter().find(|&&c| c != 0) {
                Some(&first) if first > 0 => {
                    let extent = self.spec.extent();
                    let pair_count = v.iter().map(|c| extent - c.unsigned_abs()).product();
                    let l1 = v.iter().map(|c| c.unsigned_abs()).sum();
                    return Some(DisplacementClass {
                        offset: v,
                        pair_count,
                        l1,
                    });
                }
                _ => continue,
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn all_sites(b: &BoxSpec) -> Vec<Site> {
        (0..b.site_count())
            .map(|i| b.site_from_index(i).unwrap())
            .collect()
    }

    #[test]
    fn index_examples() {
        let b1 = BoxSpec::new(1, 4).unwrap();
        assert_eq!(b1.site_index(&[0]).unwrap(), 0);
        let b2 = BoxSpec::new(2, 2).unwrap();
        assert_eq!(b2.site_index(&[1, 2]).unwrap(), 7);
        let err = b2.site_index(&[3, 0]).unwrap_err().to_string();
        assert!(err.contains("coordinate 0"), "{err}");
    }

    #[test]
    fn rejects_degenerate_and_overflowing_boxes() {
        assert!(BoxSpec::new(0, 4).is_err());
        assert!(BoxSpec::new(1, 0).is_err());
        assert!(BoxSpec::new(64, 1).is_err());
        assert!(BoxSpec::new(63, 1).is_ok());
        assert_eq!(BoxSpec::new(3, 9).unwrap().site_count(), 1000);
    }

    #[test]
    fn index_round_trip_on_small_boxes() {
        for d in 1..=3 {
            for n in 1..=8 {
                let b = BoxSpec::new(d, n).unwrap();
                for i in 0..b.site_count() {
                    let s = b.site_from_index(i).unwrap();
                    assert_eq!(b.site_index(s.coords()).unwrap(), i);
                }
            }
        }
    }

    #[test]
    fn l1_examples() {
        let b = BoxSpec::new(2, 5).unwrap();
        let o = b.site(&[0, 0]).unwrap();
        assert_eq!(l1_distance(&o, &o).unwrap(), 0);
        assert_eq!(l1_distance(&o, &b.site(&[1, 2]).unwrap()).unwrap(), 3);
        let line = BoxSpec::new(1, 9).unwrap();
        let l = line.site(&[0]).unwrap();
        let r = line.site(&[9]).unwrap();
        assert_eq!(l1_distance(&l, &r).unwrap(), 9);
        assert!(l1_distance(&o, &l).is_err());
    }

    #[test]
    fn shell_size_examples() {
        let line = BoxSpec::new(1, 10).unwrap();
        let x = line.site(&[4]).unwrap();
        for r in 1..=4 {
            assert_eq!(line.shell_size(&x, r).unwrap(), 2);
        }
        let plane = BoxSpec::new(2, 20).unwrap();
        assert_eq!(plane.shell_size(&plane.center(), 1).unwrap(), 4);
        assert!(plane.shell_size(&plane.center(), 0).is_err());
    }

    #[test]
    fn shell_size_matches_enumeration() {
        // Corner of the 6x6 grid at r = 2: (2,0), (1,1), (0,2).
        let b = BoxSpec::new(2, 5).unwrap();
        let x = b.site(&[0, 0]).unwrap();
        assert_eq!(b.shell_size(&x, 2).unwrap(), 3);
        for d in 1..=3 {
            for n in 1..=5 {
                let b = BoxSpec::new(d, n).unwrap();
                let sites = all_sites(&b);
                for x in &sites {
                    let mut total = 0;
                    for r in 1..=b.max_l1() {
                        let brute = sites
                            .iter()
                            .filter(|y| l1_distance(x, y).unwrap() == r)
                            .count() as u64;
                        assert_eq!(b.shell_size(x, r).unwrap(), brute);
                        total += brute;
                    }
                    assert_eq!(total, b.site_count() - 1);
                }
            }
        }
    }

    #[test]
    fn neighbors_are_unit_distance() {
        let b = BoxSpec::new(3, 3).unwrap();
        for i in 0..b.site_count() {
            let nbrs: Vec<u64> = b.neighbors(i).collect();
            let brute: Vec<u64> = (0..b.site_count())
                .filter(|&j| b.l1_between(i, j) == 1)
                .collect();
            let mut sorted = nbrs.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, brute);
        }
    }

    #[test]
    fn l1_ball_matches_filter() {
        let b = BoxSpec::new(2, 6).unwrap();
        let x = b.site(&[1, 5]).unwrap();
        let ball = b.l1_ball(&x, 2).unwrap();
        let brute: Vec<u64> = (0..b.site_count())
            .filter(|&j| b.l1_between(x.index(), j) <= 2)
            .collect();
        assert_eq!(ball, brute);
    }

    #[test]
    fn displacement_class_examples() {
        let b = BoxSpec::new(1, 2).unwrap();
        let classes: Vec<_> = b.displacement_classes().collect();
        assert_eq!(classes.len(), 2);
        assert_eq!(
            (classes[0].offset.clone(), classes[0].pair_count),
            (vec![1], 2)
        );
        assert_eq!(
            (classes[1].offset.clone(), classes[1].pair_count),
            (vec![2], 1)
        );

        let b = BoxSpec::new(1, 1).unwrap();
        let classes: Vec<_> = b.displacement_classes().collect();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].pair_count, 1);

        let b = BoxSpec::new(2, 1).unwrap();
        let total: u64 = b.displacement_classes().map(|c| c.pair_count).sum();
        assert_eq!(total, 6);
    }

    #[test]
    fn displacement_classes_cover_every_pair_once() {
        for d in 1..=3 {
            for n in 1..=4 {
                let b = BoxSpec::new(d, n).unwrap();
                let mut seen = std::collections::BTreeSet::new();
                for class in b.displacement_classes() {
                    let delta = class.index_delta(&b);
                    for slot in 0..class.pair_count {
                        let x = class.base_site(&b, slot);
                        let y = (x as i64 + delta) as u64;
                        assert!(y < b.site_count());
                        assert_eq!(b.l1_between(x, y), class.l1);
                        let key = (x.min(y), x.max(y));
                        assert!(seen.insert(key), "pair {key:?} seen twice");
                    }
                }
                let sc = b.site_count();
                assert_eq!(seen.len() as u64, sc * (sc - 1) / 2);
            }
        }
    }

    proptest! {
        #[test]
        fn triangle_inequality(
            d in 1usize..4,
            a in proptest::collection::vec(0u64..=12, 3),
            b in proptest::collection::vec(0u64..=12, 3),
            c in proptest::collection::vec(0u64..=12, 3),
        ) {
            let spec = BoxSpec::new(d, 12).unwrap();
            let a = spec.site(&a[..d]).unwrap();
            let b = spec.site(&b[..d]).unwrap();
            let c = spec.site(&c[..d]).unwrap();
            let ab = l1_distance(&a, &b).unwrap();
            let bc = l1_distance(&b, &c).unwrap();
            let ac = l1_distance(&a, &c).unwrap();
            prop_assert!(ac <= ab + bc);
            prop_assert_eq!(ab, l1_distance(&b, &a).unwrap());
            prop_assert_eq!(ab, spec.l1_between(a.index(), b.index()));
        }
    }
}
