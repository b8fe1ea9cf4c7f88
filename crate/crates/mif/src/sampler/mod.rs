//! Perfect L1 (and Lp, p ∈ [0,1]) samplers over turnstile streams.
//!
//! Two implementations sit behind one interface:
//!
//! - [`ExactL1Sampler`] stores the full frequency vector and samples item `i`
//!   with probability exactly `|f_i| / ‖f‖₁`, never failing on a nonzero
//!   vector. It is the oracle that gives every downstream test a sharp
//!   meaning.
//! - [`SketchL1Sampler`] is the sublinear-space sampler: it samples `i` with
//!   probability `(1 ± v)·|f_i|/‖f‖₁` plus an `O(n^-c)` additive term, fails
//!   with probability at most `δ₁`, and returns an estimate `f̃ = (1 ± ε)f_i`
//!   with probability at least `1 − δ₂`.
//!
//! The free functions [`exact_sample`] and [`exact_sample_lp`] sample
//! directly from a dense [`FrequencyVector`]; [`lp_distribution`] exposes the
//! analytic target distribution so tests can check claims without sampling
//! noise.

mod exact;
mod sketch;

use std::fmt;
use std::str::FromStr;

use rand::Rng;

pub use exact::ExactL1Sampler;
pub use sketch::SketchL1Sampler;

use crate::error::{Error, Result};
use crate::stream::{FrequencyVector, ItemId, QueryResult};

/// Parameters of the Theorem-9-style sampler contract.
///
/// `distortion` is the relative sampling distortion `v`, `epsilon` the
/// relative estimation error, `fail_prob` the FAIL probability bound `δ₁`,
/// `estimate_fail_prob` the estimation failure probability `δ₂`, and
/// `additive_exponent` the constant `c` of the `O(n^-c)` additive term.
///
/// The space-bound term `β = min{ε⁻², max{ε⁻¹, log(1/δ₂)}}` is a paper
/// constant, not a runtime value; the sketch reports its measured size
/// instead.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplerParams {
    pub distortion: f64,
    pub epsilon: f64,
    pub fail_prob: f64,
    pub estimate_fail_prob: f64,
    pub additive_exponent: f64,
}

impl SamplerParams {
    pub fn new(
        distortion: f64,
        epsilon: f64,
        fail_prob: f64,
        estimate_fail_prob: f64,
        additive_exponent: f64,
    ) -> Result<Self> {
        if !(0.0..1.0).contains(&distortion) {
            return Err(Error::param("distortion", "must lie in [0, 1)"));
        }
        if !(0.0 < epsilon && epsilon < 1.0) {
            return Err(Error::param("epsilon", "must lie in (0, 1)"));
        }
        if !(0.0 < fail_prob && fail_prob < 1.0) {
            return Err(Error::param("fail_prob", "must lie in (0, 1)"));
        }
        if !(0.0 < estimate_fail_prob && estimate_fail_prob < 1.0) {
            return Err(Error::param("estimate_fail_prob", "must lie in (0, 1)"));
        }
        if additive_exponent < 1.0 {
            return Err(Error::param("additive_exponent", "must be at least 1"));
        }
        Ok(SamplerParams {
            distortion,
            epsilon,
            fail_prob,
            estimate_fail_prob,
            additive_exponent,
        })
    }

    /// The parameter point the sampler-based MIF algorithms fix:
    /// `v = ε = δ₁ = 1/4`, with `δ₂` chosen by the amplification schedule
    /// and `c = 2`.
    pub fn mif_default(estimate_fail_prob: f64) -> Result<Self> {
        SamplerParams::new(0.25, 0.25, 0.25, estimate_fail_prob, 2.0)
    }
}

/// Which sampler implementation to instantiate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SamplerKind {
    Exact,
    Sketch,
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SamplerKind::Exact => write!(f, "exact"),
            SamplerKind::Sketch => write!(f, "sketch"),
        }
    }
}

impl FromStr for SamplerKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "exact" => Ok(SamplerKind::Exact),
            "sketch" => Ok(SamplerKind::Sketch),
            other => Err(format!("unknown sampler `{other}` (expected exact|sketch)")),
        }
    }
}

/// An L1 sampler of either kind behind a uniform interface.
#[derive(Clone, Debug)]
pub enum Sampler {
    Exact(ExactL1Sampler),
    Sketch(SketchL1Sampler),
}

impl Sampler {
    /// A sampler over the zero vector.
    pub fn build(kind: SamplerKind, n: u64, params: SamplerParams, seed: u64) -> Result<Self> {
        Ok(match kind {
            SamplerKind::Exact => Sampler::Exact(ExactL1Sampler::new(n)),
            SamplerKind::Sketch => Sampler::Sketch(SketchL1Sampler::new(n, params, seed)?),
        })
    }

    /// A sampler that already carries the `(i, -1)`-for-all-`i` offset the
    /// MIF algorithms start from.
    pub fn build_with_unit_deficit(
        kind: SamplerKind,
        n: u64,
        params: SamplerParams,
        seed: u64,
    ) -> Result<Self> {
        Ok(match kind {
            SamplerKind::Exact => Sampler::Exact(ExactL1Sampler::with_unit_deficit(n)),
            SamplerKind::Sketch => {
                Sampler::Sketch(SketchL1Sampler::with_unit_deficit(n, params, seed)?)
            }
        })
    }

    pub fn ingest(&mut self, item: ItemId, delta: i64) -> Result<()> {
        match self {
            Sampler::Exact(s) => s.ingest(item, delta),
            Sampler::Sketch(s) => s.ingest(item, delta),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> QueryResult {
        match self {
            Sampler::Exact(s) => s.sample(rng),
            Sampler::Sketch(s) => s.sample(),
        }
    }

    pub fn state_bits(&self) -> u64 {
        match self {
            Sampler::Exact(s) => s.state_bits(),
            Sampler::Sketch(s) => s.state_bits(),
        }
    }

    pub fn seed_bits(&self) -> u64 {
        match self {
            Sampler::Exact(_) => 0,
            Sampler::Sketch(_) => 64,
        }
    }
}

/// Samples item `i` with probability exactly `|f_i| / ‖f‖₁`; `Fail` iff the
/// vector is zero. The returned estimate is the true `f_i`.
pub fn exact_sample<R: Rng + ?Sized>(fv: &FrequencyVector, rng: &mut R) -> QueryResult {
    let total = fv.l1_norm();
    if total == 0 {
        return QueryResult::Fail;
    }
    let mut target = rng.random_range(0..total);
    for (idx, &count) in fv.counts().iter().enumerate() {
        let magnitude = count.unsigned_abs();
        if target < magnitude {
            return QueryResult::item(idx as u64 + 1, count);
        }
        target -= magnitude;
    }
    unreachable!("target below ‖f‖₁ must land on a coordinate");
}

/// The analytic Lp sampling distribution `|f_i|^p / Σ_j |f_j|^p`, with the
/// convention `0^0 = 0` so zero-frequency items never carry mass.
///
/// Returns the all-zero vector when every coordinate is zero.
pub fn lp_distribution(fv: &FrequencyVector, p: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param("p", "must lie in [0, 1]"));
    }
    let weights: Vec<f64> = fv
        .counts()
        .iter()
        .map(|&c| {
            if c == 0 {
                0.0
            } else {
                (c.unsigned_abs() as f64).powf(p)
            }
        })
        .collect();
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Ok(weights);
    }
    Ok(weights.into_iter().map(|w| w / total).collect())
}

/// Samples item `i` with probability `|f_i|^p / Σ_j |f_j|^p`; `Fail` iff all
/// coordinates are zero. `p = 1` reduces to [`exact_sample`].
pub fn exact_sample_lp<R: Rng + ?Sized>(
    fv: &FrequencyVector,
    p: f64,
    rng: &mut R,
) -> Result<QueryResult> {
    let weights = lp_distribution(fv, p)?;
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Ok(QueryResult::Fail);
    }
    let mut target = rng.random::<f64>() * total;
    let mut last_nonzero = None;
    for (idx, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        last_nonzero = Some(idx);
        if target < w {
            return Ok(QueryResult::item(
                idx as u64 + 1,
                fv.counts()[idx],
            ));
        }
        target -= w;
    }
    // Floating-point slack at the very top of the range.
    let idx = last_nonzero.expect("total > 0 implies a nonzero weight");
    Ok(QueryResult::item(idx as u64 + 1, fv.counts()[idx]))
}
