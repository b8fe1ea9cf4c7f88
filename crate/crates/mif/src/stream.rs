//! Turnstile stream model and frequency-vector bookkeeping.
//!
//! The dense [`FrequencyVector`] exists as ground truth: it backs the exact
//! sampler and the brute-force [`missing_items_oracle`] used by every test.
//! Space-efficient algorithms keep their own sublinear state.
//!
//! Item ids are 1-based throughout the public API, matching the universe
//! `[1, n]`.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

/// A 1-based item identifier from the universe `[1, n]`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ItemId(u64);

impl ItemId {
    pub fn new(value: u64) -> Self {
        ItemId(value)
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// 0-based index for dense storage.
    #[inline]
    pub(crate) fn index(self) -> usize {
        debug_assert!(self.0 >= 1);
        (self.0 - 1) as usize
    }

    #[inline]
    pub fn in_universe(self, n: u64) -> bool {
        self.0 >= 1 && self.0 <= n
    }
}

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for ItemId {
    fn from(value: u64) -> Self {
        ItemId(value)
    }
}

/// One turnstile update: a signed increment to a single item.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Update {
    pub item: ItemId,
    pub delta: i64,
}

impl Update {
    pub fn new(item: impl Into<ItemId>, delta: i64) -> Self {
        Update {
            item: item.into(),
            delta,
        }
    }
}

/// Dense signed frequency vector over the universe `[1, n]`.
///
/// `f_i` is the running sum of deltas applied to item `i`. The universe size
/// is fixed at construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FrequencyVector {
    counts: Vec<i64>,
}

impl FrequencyVector {
    /// The all-zero vector over `[1, n]`.
    pub fn zeros(n: u64) -> Self {
        FrequencyVector {
            counts: vec![0; n as usize],
        }
    }

    /// The all-(-1) vector: the state after feeding `(i, -1)` for every
    /// `i` in `[1, n]`, which is how the sampler-based MIF algorithms start.
    pub fn all_minus_one(n: u64) -> Self {
        FrequencyVector {
            counts: vec![-1; n as usize],
        }
    }

    pub fn from_counts(counts: Vec<i64>) -> Self {
        FrequencyVector { counts }
    }

    pub fn n(&self) -> u64 {
        self.counts.len() as u64
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    pub fn get(&self, item: ItemId) -> Result<i64> {
        if !item.in_universe(self.n()) {
            return Err(Error::ItemOutOfRange {
                item: item.get(),
                n: self.n(),
            });
        }
        Ok(self.counts[item.index()])
    }

    /// Applies one update in place.
    pub fn apply(&mut self, update: Update) -> Result<()> {
        if !update.item.in_universe(self.n()) {
            return Err(Error::ItemOutOfRange {
                item: update.item.get(),
                n: self.n(),
            });
        }
        self.counts[update.item.index()] += update.delta;
        Ok(())
    }

    /// `‖f‖₁ = Σ_i |f_i|`.
    pub fn l1_norm(&self) -> u64 {
        self.counts.iter().map(|c| c.unsigned_abs()).sum()
    }

    /// `Σ_i f_i` (signed).
    pub fn net_sum(&self) -> i64 {
        self.counts.iter().sum()
    }
}

/// Output of a sampler or MIF query: an item with a signed frequency
/// estimate, or `Fail`.
///
/// For the exact sampler the estimate equals the true `f_i`. Algorithms that
/// do not estimate frequencies report `-1`, the frequency a missing item has
/// after the all-minus-one initialization.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum QueryResult {
    Item { item: ItemId, estimate: i64 },
    Fail,
}

impl QueryResult {
    pub fn item(item: impl Into<ItemId>, estimate: i64) -> Self {
        QueryResult::Item {
            item: item.into(),
            estimate,
        }
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, QueryResult::Fail)
    }

    pub fn item_id(&self) -> Option<ItemId> {
        match self {
            QueryResult::Item { item, .. } => Some(*item),
            QueryResult::Fail => None,
        }
    }
}

/// Brute-force reference: the set of items in `[1, n]` that never appear in
/// `stream`.
///
/// Panics if a stream element lies outside the universe; the oracle is test
/// scaffolding and refuses to guess what an invalid stream means.
pub fn missing_items_oracle(n: u64, stream: &[ItemId]) -> BTreeSet<ItemId> {
    let mut seen = vec![false; n as usize];
    for &item in stream {
        assert!(
            item.in_universe(n),
            "oracle stream element {item} outside [1, {n}]"
        );
        seen[item.index()] = true;
    }
    (1..=n)
        .filter(|&v| !seen[(v - 1) as usize])
        .map(ItemId::new)
        .collect()
}

/// A replay stream loaded from disk: optional universe header plus items.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StreamFile {
    pub universe: Option<u64>,
    pub items: Vec<ItemId>,
}

/// Parses the replay stream format: newline-separated decimal 1-based item
/// ids, blank lines ignored, optional first line `n=<int>`.
pub fn parse_stream(text: &str) -> Result<StreamFile> {
    let mut universe = None;
    let mut items = Vec::new();
    let mut saw_content = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if !saw_content {
            saw_content = true;
            if let Some(rest) = line.strip_prefix("n=") {
                universe = Some(rest.trim().parse::<u64>().map_err(|e| {
                    Error::StreamParse {
                        line: idx + 1,
                        reason: format!("bad universe size `{rest}`: {e}"),
                    }
                })?);
                continue;
            }
        }
        let value = line.parse::<u64>().map_err(|e| Error::StreamParse {
            line: idx + 1,
            reason: format!("bad item id `{line}`: {e}"),
        })?;
        if value == 0 {
            return Err(Error::StreamParse {
                line: idx + 1,
                reason: "item ids are 1-based; 0 is invalid".into(),
            });
        }
        items.push(ItemId::new(value));
    }
    Ok(StreamFile { universe, items })
}

pub fn read_stream_file(path: impl AsRef<Path>) -> Result<StreamFile> {
    let text = std::fs::read_to_string(path)?;
    parse_stream(&text)
}

/// Renders a stream in the replay file format.
pub fn format_stream(universe: Option<u64>, items: &[ItemId]) -> String {
    let mut out = String::new();
    if let Some(n) = universe {
        out.push_str(&format!("n={n}\n"));
    }
    for item in items {
        out.push_str(&format!("{item}\n"));
    }
    out
}
