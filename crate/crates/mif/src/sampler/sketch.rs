//! Sublinear-space L1 sampler via precision sampling.
//!
//! Each item `i` owns an exponential variate `t_i` derived by hashing the
//! item id with the sampler seed. The scaled vector `z_i = f_i / t_i` has the
//! property that `argmax |z_i|` is distributed exactly `|f_i| / ‖f‖₁`, and
//! `max |z_i| = ‖f‖₁ / E` for a fresh `E ~ Exp(1)` that is independent of the
//! argmax identity. The sketch therefore:
//!
//! - maintains a count-sketch of `z` (O(log n) rows) from which the maximum
//!   scaled coordinate is recovered at query time,
//! - maintains a Cauchy-projection estimate of `‖f‖₁`,
//! - fails exactly when the recovered maximum falls below
//!   `‖f‖₁ / (1.15·ln(1/δ₁))`, which happens with probability
//!   `δ₁^1.15 < δ₁` and, being a test on the max value only, leaves the
//!   conditional sampling distribution undistorted up to estimation noise.
//!
//! State is a linear function of the applied updates, so ingest order cannot
//! change the represented sketch beyond floating-point rounding.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::rng::{mix64, unit_open_closed, unit_open_open};
use crate::sampler::SamplerParams;
use crate::stream::{ItemId, QueryResult};

const GOLD: u64 = 0x9e37_79b9_7f4a_7c15;
const GOLD2: u64 = 0xc2b2_ae3d_27d4_eb4f;

const TAG_SCALE: u64 = 0x5343_414c_4500_0001;
const TAG_ROW: u64 = 0x524f_5753_0000_0002;
const TAG_NORM: u64 = 0x4e4f_524d_0000_0003;

/// Inflation of the FAIL threshold exponent: keeps the realized FAIL rate
/// strictly below δ₁ in the presence of norm-estimation noise.
const THRESHOLD_MARGIN: f64 = 1.15;

/// Number of Cauchy counters in the ‖f‖₁ estimator (odd, for a crisp median).
const NORM_COUNTERS: usize = 63;

#[derive(Clone, Debug)]
pub struct SketchL1Sampler {
    params: SamplerParams,
    n: u64,
    seed: u64,
    rows: usize,
    width: usize,
    table: Vec<f64>,
    norm_counters: Vec<f64>,
}

impl SketchL1Sampler {
    /// Sketch of the zero vector over `[1, n]`.
    pub fn new(n: u64, params: SamplerParams, seed: u64) -> Result<Self> {
        // Rows give the per-candidate median recovery its union bound over
        // the n candidates and the δ₂ estimation guarantee; width controls
        // the count-sketch noise relative to the v/ε error budget.
        let log_n = (n.max(2) as f64).log2().ceil();
        let log_d2 = (1.0 / params.estimate_fail_prob).log2().ceil().max(1.0);
        let rows = ((2.0 * log_n + 2.0 * log_d2) as usize).max(9) | 1;
        let min_err = params.distortion.max(1e-3).min(params.epsilon);
        let width = (((32.0 / min_err).ceil() as usize).max(64)).next_power_of_two();
        Ok(SketchL1Sampler {
            params,
            n,
            seed,
            rows,
            width,
            table: vec![0.0; rows * width],
            norm_counters: vec![0.0; NORM_COUNTERS],
        })
    }

    /// Sketch carrying the `(i, -1)`-for-all-`i` MIF offset.
    ///
    /// Bit-identical to feeding the n initialization updates through
    /// `ingest`, batched at construction so the per-item stream path stays
    /// O(sketch ops).
    pub fn with_unit_deficit(n: u64, params: SamplerParams, seed: u64) -> Result<Self> {
        let mut sketch = SketchL1Sampler::new(n, params, seed)?;
        for value in 1..=n {
            sketch.ingest(ItemId::new(value), -1)?;
        }
        Ok(sketch)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn params(&self) -> SamplerParams {
        self.params
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    fn derive(&self, tag: u64, a: u64, b: u64) -> u64 {
        mix64(
            mix64(mix64(self.seed ^ tag) ^ GOLD.wrapping_mul(a.wrapping_add(1)))
                ^ GOLD2.wrapping_mul(b.wrapping_add(1)),
        )
    }

    /// Per-item Exp(1) scale `t_i`, recomputed on demand from the seed.
    #[inline]
    fn scale(&self, index: u64) -> f64 {
        let u = unit_open_closed(self.derive(TAG_SCALE, 0, index));
        (-u.ln()).max(1e-18)
    }

    /// Count-sketch bucket and sign of `index` in `row`.
    #[inline]
    fn bucket_sign(&self, row: usize, index: u64) -> (usize, f64) {
        let h = self.derive(TAG_ROW, row as u64, index);
        let bucket = (h as usize) & (self.width - 1);
        let sign = if h >> 63 == 0 { 1.0 } else { -1.0 };
        (bucket, sign)
    }

    /// Standard Cauchy coefficient of `index` in norm counter `j`.
    #[inline]
    fn cauchy(&self, counter: usize, index: u64) -> f64 {
        let u = unit_open_open(self.derive(TAG_NORM, counter as u64, index));
        (PI * (u - 0.5)).tan()
    }

    pub fn ingest(&mut self, item: ItemId, delta: i64) -> Result<()> {
        if !item.in_universe(self.n) {
            return Err(Error::ItemOutOfRange {
                item: item.get(),
                n: self.n,
            });
        }
        let index = item.index() as u64;
        let scaled = delta as f64 / self.scale(index);
        for row in 0..self.rows {
            let (bucket, sign) = self.bucket_sign(row, index);
            self.table[row * self.width + bucket] += sign * scaled;
        }
        for j in 0..NORM_COUNTERS {
            self.norm_counters[j] += self.cauchy(j, index) * delta as f64;
        }
        Ok(())
    }

    /// Median-of-|Cauchy| estimate of `‖f‖₁` (exactly zero on the zero
    /// vector, since the counters cancel exactly).
    pub fn norm_estimate(&self) -> f64 {
        let mut magnitudes: Vec<f64> = self.norm_counters.iter().map(|c| c.abs()).collect();
        let mid = magnitudes.len() / 2;
        let (_, median, _) = magnitudes.select_nth_unstable_by(mid, f64::total_cmp);
        *median
    }

    /// Count-sketch estimate of the scaled coordinate `z_i`.
    fn estimate_scaled(&self, index: u64, scratch: &mut Vec<f64>) -> f64 {
        scratch.clear();
        for row in 0..self.rows {
            let (bucket, sign) = self.bucket_sign(row, index);
            scratch.push(sign * self.table[row * self.width + bucket]);
        }
        let mid = scratch.len() / 2;
        let (_, median, _) = scratch.select_nth_unstable_by(mid, f64::total_cmp);
        *median
    }

    /// Recovers the maximum scaled coordinate and applies the FAIL test.
    ///
    /// Deterministic given the sketch state: the sampling randomness lives in
    /// the seed-derived scales, so reseeding is what refreshes the draw.
    pub fn sample(&self) -> QueryResult {
        let norm = self.norm_estimate();
        // Integer streams have ‖f‖₁ >= 1 whenever the vector is nonzero, so
        // anything below half a unit is cancellation residue: the zero vector.
        if norm < 0.5 {
            return QueryResult::Fail;
        }
        let threshold = norm / (THRESHOLD_MARGIN * (1.0 / self.params.fail_prob).ln());
        let mut scratch = Vec::with_capacity(self.rows);
        let mut best_index = 0u64;
        let mut best_value = f64::NEG_INFINITY;
        for index in 0..self.n {
            let z = self.estimate_scaled(index, &mut scratch);
            // Strict comparison: the smallest item id wins exact ties.
            if z.abs() > best_value {
                best_value = z.abs();
                best_index = index;
            }
        }
        if !best_value.is_finite() || best_value < threshold {
            return QueryResult::Fail;
        }
        let z = self.estimate_scaled(best_index, &mut scratch);
        let estimate = (z * self.scale(best_index)).round() as i64;
        QueryResult::item(best_index + 1, estimate)
    }

    /// Measured size of the stored sketch state in bits.
    pub fn state_bits(&self) -> u64 {
        64 * (self.table.len() as u64 + self.norm_counters.len() as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_seed;
    use crate::sampler::lp_distribution;
    use crate::stream::FrequencyVector;

    fn params() -> SamplerParams {
        SamplerParams::mif_default(0.25).unwrap()
    }

    #[test]
    fn zero_vector_fails() {
        let mut s = SketchL1Sampler::new(8, params(), 42).unwrap();
        for i in 1..=8u64 {
            s.ingest(ItemId::new(i), -1).unwrap();
        }
        for i in 1..=8u64 {
            s.ingest(ItemId::new(i), 1).unwrap();
        }
        // Only floating-point cancellation residue remains.
        assert!(s.norm_estimate() < 1e-9);
        assert!(s.sample().is_fail());
    }

    #[test]
    fn equal_frequency_vectors_give_bit_identical_state() {
        // [(1,+1)] and [(1,+2),(1,-1)] represent the same vector.
        let mut a = SketchL1Sampler::new(4, params(), 7).unwrap();
        a.ingest(ItemId::new(1), 1).unwrap();
        let mut b = SketchL1Sampler::new(4, params(), 7).unwrap();
        b.ingest(ItemId::new(1), 2).unwrap();
        b.ingest(ItemId::new(1), -1).unwrap();
        assert_eq!(a.table, b.table);
        assert_eq!(a.norm_counters, b.norm_counters);
    }

    #[test]
    fn unit_deficit_equals_literal_feeding() {
        let mut fed = SketchL1Sampler::new(16, params(), 99).unwrap();
        for i in 1..=16u64 {
            fed.ingest(ItemId::new(i), -1).unwrap();
        }
        let built = SketchL1Sampler::with_unit_deficit(16, params(), 99).unwrap();
        assert_eq!(fed.table, built.table);
        assert_eq!(fed.norm_counters, built.norm_counters);
    }

    #[test]
    fn permuted_ingest_is_distribution_identical() {
        let updates = [(1u64, 1i64), (3, 2), (2, -1), (3, 1), (4, 5), (1, -2)];
        let mut forward = SketchL1Sampler::new(4, params(), 123).unwrap();
        for &(item, delta) in &updates {
            forward.ingest(ItemId::new(item), delta).unwrap();
        }
        let mut backward = SketchL1Sampler::new(4, params(), 123).unwrap();
        for &(item, delta) in updates.iter().rev() {
            backward.ingest(ItemId::new(item), delta).unwrap();
        }
        for (x, y) in forward.table.iter().zip(backward.table.iter()) {
            assert!((x - y).abs() <= 1e-9 * (1.0 + x.abs()));
        }
        assert_eq!(forward.sample(), backward.sample());
    }

    #[test]
    fn norm_estimate_tracks_l1_norm() {
        let mut hits = 0;
        let trials = 200;
        for t in 0..trials {
            let mut s = SketchL1Sampler::new(16, params(), derive_seed(5, t)).unwrap();
            for (i, delta) in [(1u64, 4i64), (5, -3), (9, 2), (16, 1)] {
                s.ingest(ItemId::new(i), delta).unwrap();
            }
            let est = s.norm_estimate();
            if (est - 10.0).abs() <= 4.0 {
                hits += 1;
            }
        }
        // Median-of-63 Cauchy magnitudes concentrates well within 40%.
        assert!(hits >= trials * 9 / 10, "hits={hits}/{trials}");
    }

    /// The MIF setting of the sampler examples: deficit plus the stream
    /// [1, 2, 2] over n = 4 gives f = (0, 1, -1, -1). The conditional
    /// sampling distribution must sit within the v = 1/4 distortion of
    /// (0, 1/3, 1/3, 1/3), FAIL frequency at most δ₁ = 1/4, negative
    /// picks at least 1/3 of non-fails.
    #[test]
    fn mif_example_distribution_within_distortion() {
        let trials = 20_000u64;
        let mut hits = [0u64; 4];
        let mut fails = 0u64;
        let mut negatives = 0u64;
        for t in 0..trials {
            let mut s =
                SketchL1Sampler::with_unit_deficit(4, params(), derive_seed(1234, t)).unwrap();
            for item in [1u64, 2, 2] {
                s.ingest(ItemId::new(item), 1).unwrap();
            }
            match s.sample() {
                QueryResult::Item { item, estimate } => {
                    hits[item.index()] += 1;
                    if estimate < 0 {
                        negatives += 1;
                    }
                }
                QueryResult::Fail => fails += 1,
            }
        }
        let fail_rate = fails as f64 / trials as f64;
        assert!(fail_rate <= 0.25 + 0.01, "fail_rate={fail_rate}");
        let non_fail = (trials - fails) as f64;
        let target = [0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0];
        for idx in 0..4 {
            let p = hits[idx] as f64 / non_fail;
            assert!(
                (p - target[idx]).abs() <= 0.25 * target[idx] + 0.02,
                "idx={idx} p={p}"
            );
        }
        let neg_rate = negatives as f64 / non_fail;
        assert!(neg_rate >= 1.0 / 3.0, "neg_rate={neg_rate}");
    }

    #[test]
    fn single_nonzero_coordinate_is_recovered() {
        let trials = 4_000u64;
        let mut right = 0u64;
        let mut fails = 0u64;
        for t in 0..trials {
            let mut s = SketchL1Sampler::new(16, params(), derive_seed(777, t)).unwrap();
            s.ingest(ItemId::new(11), 6).unwrap();
            match s.sample() {
                QueryResult::Item { item, estimate } => {
                    if item == ItemId::new(11) {
                        right += 1;
                        assert!(
                            (estimate - 6).abs() <= 2,
                            "estimate {estimate} too far from 6"
                        );
                    }
                }
                QueryResult::Fail => fails += 1,
            }
        }
        let non_fail = (trials - fails) as f64;
        let rate = right as f64 / non_fail;
        assert!(rate >= 1.0 - 0.25 - 0.02, "rate={rate}");
        assert!((fails as f64 / trials as f64) <= 0.25 + 0.02);
    }

    #[test]
    fn conditional_tv_distance_within_budget() {
        // Sketch vs exact on a fixed n = 16 vector; TV of the conditional
        // distribution must stay within v plus statistical slack.
        let counts: Vec<i64> = vec![0, 3, -1, -1, 0, 2, -1, 0, -4, 1, -1, -1, 0, 5, -1, -1];
        let target =
            lp_distribution(&FrequencyVector::from_counts(counts.clone()), 1.0).unwrap();
        let trials = 6_000u64;
        let mut hits = vec![0u64; 16];
        let mut fails = 0u64;
        for t in 0..trials {
            let mut s = SketchL1Sampler::new(16, params(), derive_seed(31, t)).unwrap();
            for (idx, &c) in counts.iter().enumerate() {
                if c != 0 {
                    s.ingest(ItemId::new(idx as u64 + 1), c).unwrap();
                }
            }
            match s.sample() {
                QueryResult::Item { item, .. } => hits[item.index()] += 1,
                QueryResult::Fail => fails += 1,
            }
        }
        let non_fail = (trials - fails) as f64;
        let tv: f64 = hits
            .iter()
            .zip(target.iter())
            .map(|(&h, &p)| (h as f64 / non_fail - p).abs())
            .sum::<f64>()
            / 2.0;
        assert!(tv <= 0.25 + 0.05, "tv={tv}");
    }

    #[test]
    fn rejects_out_of_range_items() {
        let mut s = SketchL1Sampler::new(4, params(), 1).unwrap();
        assert!(s.ingest(ItemId::new(0), 1).is_err());
        assert!(s.ingest(ItemId::new(5), 1).is_err());
    }

    #[test]
    fn sizing_follows_params() {
        let s = SketchL1Sampler::new(1 << 20, params(), 0).unwrap();
        assert!(s.rows() >= 9 && s.rows() % 2 == 1);
        assert!(s.width().is_power_of_two());
        assert_eq!(s.state_bits(), 64 * (s.rows() as u64 * s.width() as u64 + 63));
    }
}
