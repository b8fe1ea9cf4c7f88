//! Exact L1 sampler: the full frequency vector plus a Fenwick tree over
//! coordinate magnitudes, so streaming updates and weighted draws both cost
//! O(log n).

use rand::Rng;

use crate::error::{Error, Result};
use crate::stream::{ItemId, QueryResult};

/// Fenwick (binary indexed) tree over nonnegative magnitudes.
#[derive(Clone, Debug)]
struct Fenwick {
    tree: Vec<i64>,
}

impl Fenwick {
    fn new(size: usize) -> Self {
        Fenwick {
            tree: vec![0; size + 1],
        }
    }

    /// Bulk build from per-index values.
    fn from_values(values: &[i64]) -> Self {
        let mut tree = vec![0i64; values.len() + 1];
        for (idx, &v) in values.iter().enumerate() {
            let mut i = idx + 1;
            while i < tree.len() {
                tree[i] += v;
                i += i & i.wrapping_neg();
            }
        }
        Fenwick { tree }
    }

    fn add(&mut self, index: usize, delta: i64) {
        let mut i = index + 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    fn total(&self) -> i64 {
        let mut sum = 0;
        let mut i = self.tree.len() - 1;
        while i > 0 {
            sum += self.tree[i];
            i &= i - 1;
        }
        sum
    }

    /// Smallest index whose prefix sum exceeds `target`; requires
    /// `0 <= target < total()`.
    fn find(&self, mut target: i64) -> usize {
        let n = self.tree.len() - 1;
        let mut pos = 0usize;
        let mut step = n.next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= target {
                target -= self.tree[next];
                pos = next;
            }
            step >>= 1;
        }
        pos // 0-based index of the located coordinate
    }
}

/// The oracle sampler: zero distortion, never fails on a nonzero vector,
/// returns the true frequency as its estimate.
#[derive(Clone, Debug)]
pub struct ExactL1Sampler {
    counts: Vec<i64>,
    magnitudes: Fenwick,
}

impl ExactL1Sampler {
    /// Sampler over the zero vector on `[1, n]`.
    pub fn new(n: u64) -> Self {
        ExactL1Sampler {
            counts: vec![0; n as usize],
            magnitudes: Fenwick::new(n as usize),
        }
    }

    /// Sampler whose every coordinate starts at -1 (the MIF initialization).
    pub fn with_unit_deficit(n: u64) -> Self {
        let counts = vec![-1i64; n as usize];
        let magnitudes = Fenwick::from_values(&vec![1i64; n as usize]);
        ExactL1Sampler { counts, magnitudes }
    }

    pub fn n(&self) -> u64 {
        self.counts.len() as u64
    }

    pub fn frequency(&self, item: ItemId) -> Result<i64> {
        if !item.in_universe(self.n()) {
            return Err(Error::ItemOutOfRange {
                item: item.get(),
                n: self.n(),
            });
        }
        Ok(self.counts[item.index()])
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    pub fn ingest(&mut self, item: ItemId, delta: i64) -> Result<()> {
        if !item.in_universe(self.n()) {
            return Err(Error::ItemOutOfRange {
                item: item.get(),
                n: self.n(),
            });
        }
        let idx = item.index();
        let old = self.counts[idx];
        let new = old + delta;
        self.counts[idx] = new;
        self.magnitudes.add(idx, new.abs() - old.abs());
        Ok(())
    }

    /// Draws item `i` with probability exactly `|f_i| / ‖f‖₁` using integer
    /// arithmetic; `Fail` iff the vector is zero.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> QueryResult {
        let total = self.magnitudes.total();
        if total == 0 {
            return QueryResult::Fail;
        }
        let target = rng.random_range(0..total as u64) as i64;
        let idx = self.magnitudes.find(target);
        QueryResult::item(idx as u64 + 1, self.counts[idx])
    }

    /// Measured size of the stored state.
    pub fn state_bits(&self) -> u64 {
        64 * (self.counts.len() as u64 + self.magnitudes.tree.len() as u64)
    }
}
