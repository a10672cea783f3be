//! Membership set over box sites: a bit vector for O(1) lookup plus the
//! member list in insertion order.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiteSet {
    words: Vec<u64>,
    members: Vec<u64>,
    capacity: u64,
}

impl SiteSet {
    /// Empty set able to hold indices in `[0, capacity)`.
    pub fn new(capacity: u64) -> Self {
        Self {
            words: vec![0; capacity.div_ceil(64) as usize],
            members: Vec::new(),
            capacity,
        }
    }

    pub fn from_indices(capacity: u64, indices: impl IntoIterator<Item = u64>) -> Self {
        let mut set = Self::new(capacity);
        for i in indices {
            set.insert(i);
        }
        set
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    #[inline]
    pub fn contains(&self, index: u64) -> bool {
        index < self.capacity && self.words[(index / 64) as usize] >> (index % 64) & 1 == 1
    }

    /// Inserts `index`; returns false if it was already present.
    ///
    /// Panics if `index` is outside the set's capacity.
    #[inline]
    pub fn insert(&mut self, index: u64) -> bool {
        assert!(
            index < self.capacity,
            "site {index} outside set capacity {}",
            self.capacity
        );
        let word = &mut self.words[(index / 64) as usize];
        let bit = 1u64 << (index % 64);
        if *word & bit != 0 {
            return false;
        }
        *word |= bit;
        self.members.push(index);
        true
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in insertion order.
    pub fn as_slice(&self) -> &[u64] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.iter().copied()
    }

    pub fn is_disjoint(&self, other: &SiteSet) -> bool {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.iter().all(|i| !large.contains(i))
    }

    /// Adds every member of `other`.
    pub fn extend_from(&mut self, other: &SiteSet) {
        for i in other.iter() {
            self.insert(i);
        }
    }

    /// Members sorted ascending.
    pub fn sorted(&self) -> Vec<u64> {
        let mut v = self.members.clone();
        v.sort_unstable();
        v
    }
}
