//! Seeded, deterministic fixture generators.
//!
//! The generators quantize every coefficient to a dyadic rational with
//! few mantissa bits. On axes whose spacing is itself dyadic, all node
//! values and the downstream transform arithmetic stay exact in f64,
//! which lets equality- and convexity-based checks run at zero
//! tolerance instead of an arbitrary epsilon.

use alloc::vec::Vec;

use crate::field::{Axis, ScalarField};

/// SplitMix64 generator; tiny, stable across platforms, and good
/// enough for fixture data.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform integer in the inclusive range `[lo, hi]`.
    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        let span = (hi - lo) as u64 + 1;
        lo + (self.next_u64() % span) as i64
    }
}

/// Random walk with increments `m * 2^-12`, `|m| <= 512`, so every
/// increment is at most `1/8` in magnitude. On a dyadic axis the
/// partial sums are exact, keeping sign comparisons in the transforms
/// free of rounding.
pub fn lipschitz_field(seed: u64, axis: Axis) -> ScalarField {
    let mut rng = SplitMix64::new(seed);
    let mut values = Vec::with_capacity(axis.len());
    let mut v = 0.0f64;
    values.push(v);
    for _ in 1..axis.len() {
        v += rng.int_in(-512, 512) as f64 / 4096.0;
        values.push(v);
    }
    ScalarField::new(alloc::vec![axis], values).expect("walk values are finite")
}

/// Discretely convex field built from sorted dyadic slopes in
/// `[-4, 4]` (multiples of `2^-9`): second differences are
/// `(slope_{i+1} - slope_i) * h >= 0` by construction.
pub fn convex_field(seed: u64, axis: Axis) -> ScalarField {
    let mut rng = SplitMix64::new(seed);
    let n = axis.len();
    let mut slopes: Vec<i64> = (0..n - 1).map(|_| rng.int_in(-2048, 2048)).collect();
    slopes.sort_unstable();
    let h = axis.h();
    let mut values = Vec::with_capacity(n);
    let mut v = 0.0f64;
    values.push(v);
    for m in slopes {
        v += m as f64 / 512.0 * h;
        values.push(v);
    }
    ScalarField::new(alloc::vec![axis], values).expect("slope sums are finite")
}

/// Canonical grids for [`jointly_convex_field`]: `s` on `[0, 1]` with
/// 65 nodes and `x` on `[-1, 1]` with 129 nodes, both with spacing
/// `2^-6` so the two grids are aligned.
pub fn joint_grid() -> (Axis, Axis) {
    let s = Axis::new(0.0, 1.0, 65).expect("static axis");
    let x = Axis::new(-1.0, 1.0, 129).expect("static axis");
    (s, x)
}

/// Jointly convex field on the [`joint_grid`] axes:
///
/// `psi(s, x) = alpha (x - eps s - delta)^2 + c s + max_t (p_t x + q_t)`
///
/// with `alpha > 0`, `eps = +-1`, and `delta`, `c` chosen so the
/// `s`-minimizer lands on an `s`-node whenever `x` is an `x`-node. The
/// columnwise minimum over `s` is then an exact sample of the convex
/// continuum partial minimum, and all arithmetic is dyadic, so the
/// discrete convexity of the partial minimum holds with zero
/// tolerance.
pub fn jointly_convex_field(seed: u64) -> ScalarField {
    let mut rng = SplitMix64::new(seed);
    let (s_axis, x_axis) = joint_grid();
    let alpha = rng.int_in(1, 32) as f64 / 16.0;
    let eps = if rng.next_u64() & 1 == 0 { 1.0 } else { -1.0 };
    let delta = rng.int_in(-32, 32) as f64 / 64.0;
    // c = 2 alpha eps m h_s shifts the minimizer by exactly m s-cells.
    let c = 2.0 * alpha * eps * rng.int_in(-16, 16) as f64 / 64.0;
    let pieces: Vec<(f64, f64)> = (0..3)
        .map(|_| {
            (
                rng.int_in(-32, 32) as f64 / 16.0,
                rng.int_in(-32, 32) as f64 / 16.0,
            )
        })
        .collect();
    ScalarField::from_fn_2d(s_axis, x_axis, |s, x| {
        let u = x - eps * s - delta;
        let b = pieces
            .iter()
            .fold(f64::NEG_INFINITY, |m, &(p, q)| m.max(p * x + q));
        alpha * u * u + c * s + b
    })
    .expect("dyadic samples are finite")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_is_reproducible() {
        let mut a = SplitMix64::new(7);
        let mut b = SplitMix64::new(7);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn lipschitz_field_has_bounded_slopes() {
        let axis = Axis::new(-1.0, 1.0, 1025).unwrap();
        let f = lipschitz_field(3, axis);
        // increments at most 1/8, h = 2^-9, so the seminorm is at most 64
        assert!(f.lipschitz_seminorm() <= 64.0);
    }

    #[test]
    fn convex_field_is_discretely_convex_exactly() {
        let axis = Axis::new(-4.0, 4.0, 1025).unwrap();
        for seed in 0..10 {
            let f = convex_field(seed, axis);
            let (worst, _) = f.convexity_violation();
            assert!(worst <= 0.0, "seed {seed}: violation {worst}");
        }
    }

    #[test]
    fn jointly_convex_field_passes_the_2d_test_exactly() {
        for seed in 0..10 {
            let f = jointly_convex_field(seed);
            let (worst, loc) = f.convexity_violation();
            assert!(worst <= 0.0, "seed {seed}: violation {worst} at {loc:?}");
        }
    }
}
