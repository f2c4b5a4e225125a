//! Uniform axes and sampled scalar fields.
//!
//! A field is a flat `Vec<f64>` over one or two [`Axis`] values, stored
//! row-major with the first axis slowest. All downstream operations
//! (transforms, envelopes, solvers) consume and produce these fields.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;

/// A closed interval `[min, max]` sampled at `n >= 2` equispaced nodes.
///
/// Node `i` sits at `min + i * h` with `h = (max - min) / (n - 1)`, so
/// node `0` is `min` exactly and node `n - 1` is `max` up to one
/// rounding. Construction rejects axes whose rounded nodes are not
/// strictly increasing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    min: f64,
    max: f64,
    n: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Axis, Error> {
        if !min.is_finite() || !max.is_finite() {
            return Err(Error::InvalidAxis(format!("endpoints must be finite, got [{min}, {max}]")));
        }
        if min >= max {
            return Err(Error::InvalidAxis(format!("min {min} must be below max {max}")));
        }
        if n < 2 {
            return Err(Error::InvalidAxis(format!("need at least 2 nodes, got {n}")));
        }
        let axis = Axis { min, max, n };
        for i in 0..n - 1 {
            if axis.node(i) >= axis.node(i + 1) {
                return Err(Error::InvalidAxis(format!(
                    "spacing underflows at node {i}: {n} nodes on [{min}, {max}]"
                )));
            }
        }
        Ok(axis)
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.n
    }

    /// Node spacing `(max - min) / (n - 1)`, strictly positive.
    pub fn h(&self) -> f64 {
        (self.max - self.min) / (self.n - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        debug_assert!(i < self.n);
        self.min + i as f64 * self.h()
    }

    /// Same interval with `2n - 1` nodes; original nodes keep their
    /// positions.
    pub fn refine(&self) -> Axis {
        Axis { min: self.min, max: self.max, n: 2 * self.n - 1 }
    }

    /// Index of the node nearest to `x` (clamped to the axis).
    pub fn nearest(&self, x: f64) -> usize {
        let t = (x - self.min) / self.h();
        if t <= 0.0 {
            return 0;
        }
        let i = libm::round(t) as usize;
        i.min(self.n - 1)
    }
}

/// A scalar field sampled on a 1- or 2-dimensional uniform grid.
///
/// Values are stored row-major: in 2D the flat index of node `(i, j)`
/// is `i * axes[1].len() + j`. Construction rejects length mismatches
/// and non-finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    axes: Vec<Axis>,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(axes: Vec<Axis>, values: Vec<f64>) -> Result<ScalarField, Error> {
        if axes.is_empty() || axes.len() > 2 {
            return Err(Error::DimensionMismatch { expected: 1, got: axes.len() });
        }
        let expected: usize = axes.iter().map(Axis::len).product();
        if values.len() != expected {
            return Err(Error::LengthMismatch { expected, got: values.len() });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(ScalarField { axes, values })
    }

    /// Samples `f` at the nodes of `axis`.
    pub fn from_fn_1d(axis: Axis, f: impl Fn(f64) -> f64) -> Result<ScalarField, Error> {
        let values: Vec<f64> = (0..axis.len()).map(|i| f(axis.node(i))).collect();
        ScalarField::new(vec![axis], values)
    }

    /// Samples `f` at the nodes of the product grid, first axis slowest.
    pub fn from_fn_2d(
        a0: Axis,
        a1: Axis,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<ScalarField, Error> {
        let mut values = Vec::with_capacity(a0.len() * a1.len());
        for i in 0..a0.len() {
            for j in 0..a1.len() {
                values.push(f(a0.node(i), a1.node(j)));
            }
        }
        ScalarField::new(vec![a0, a1], values)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis(&self, k: usize) -> Axis {
        self.axes[k]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at flat index (1D: the node index).
    pub fn at(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// Value at node `(i, j)` of a 2D field.
    pub fn at2(&self, i: usize, j: usize) -> f64 {
        debug_assert_eq!(self.dim(), 2);
        self.values[i * self.axes[1].len() + j]
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Pointwise image under `f`; fails if any output is non-finite.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<ScalarField, Error> {
        let values: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        ScalarField::new(self.axes.clone(), values)
    }

    pub fn same_grid(&self, other: &ScalarField) -> bool {
        self.axes == other.axes
    }

    pub fn pointwise_min(&self, other: &ScalarField) -> Result<ScalarField, Error> {
        self.zip(other, f64::min)
    }

    pub fn pointwise_max(&self, other: &ScalarField) -> Result<ScalarField, Error> {
        self.zip(other, f64::max)
    }

    /// Nodewise difference `self - other`.
    pub fn sub(&self, other: &ScalarField) -> Result<ScalarField, Error> {
        self.zip(other, |a, b| a - b)
    }

    /// Flips the sign of every value in place.
    pub fn negate(&mut self) {
        for v in &mut self.values {
            *v = -*v;
        }
    }

    /// Row `i` of a 2D field: the 1D restriction to the second axis.
    pub fn row(&self, i: usize) -> Result<ScalarField, Error> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: self.dim() });
        }
        let n1 = self.axes[1].len();
        let values = self.values[i * n1..(i + 1) * n1].to_vec();
        ScalarField::new(vec![self.axes[1]], values)
    }

    fn zip(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64) -> Result<ScalarField, Error> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        let values: Vec<f64> = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(&a, &b)| f(a, b))
            .collect();
        ScalarField::new(self.axes.clone(), values)
    }

    /// One finite-difference gradient component per axis: central
    /// differences at interior nodes, one-sided at the boundary. Exact
    /// for affine data. Requires every axis to have at least 3 nodes.
    pub fn gradient_fd(&self) -> Result<Vec<ScalarField>, Error> {
        for axis in &self.axes {
            if axis.len() < 3 {
                return Err(Error::GridTooCoarse { needed: 3, got: axis.len() });
            }
        }
        let mut out = Vec::with_capacity(self.dim());
        for k in 0..self.dim() {
            let h = self.axes[k].h();
            let stride = if self.dim() == 2 && k == 0 { self.axes[1].len() } else { 1 };
            let nk = self.axes[k].len();
            let mut g = vec![0.0; self.values.len()];
            self.for_each_line(k, |base| {
                for i in 0..nk {
                    let p = base + i * stride;
                    g[p] = if i == 0 {
                        (self.values[p + stride] - self.values[p]) / h
                    } else if i == nk - 1 {
                        (self.values[p] - self.values[p - stride]) / h
                    } else {
                        (self.values[p + stride] - self.values[p - stride]) / (2.0 * h)
                    };
                }
            });
            out.push(ScalarField::new(self.axes.clone(), g)?);
        }
        Ok(out)
    }

    /// Largest slope between adjacent nodes, per axis, then the max:
    /// `max |f(p+1) - f(p)| / h`.
    pub fn lipschitz_seminorm(&self) -> f64 {
        let mut worst = 0.0f64;
        for k in 0..self.dim() {
            let h = self.axes[k].h();
            let stride = if self.dim() == 2 && k == 0 { self.axes[1].len() } else { 1 };
            let nk = self.axes[k].len();
            self.for_each_line(k, |base| {
                for i in 0..nk - 1 {
                    let d = (self.values[base + (i + 1) * stride] - self.values[base + i * stride])
                        .abs()
                        / h;
                    if d > worst {
                        worst = d;
                    }
                }
            });
        }
        worst
    }

    /// Largest second difference `|f(p+1) - 2 f(p) + f(p-1)| / h^2` over
    /// interior nodes and axes, plus the mixed difference
    /// `|f(++) - f(+-) - f(-+) + f(--)| / (4 hx hy)` in 2D. Exact value
    /// 2M for a quadratic with Hessian entries of size M.
    pub fn c11_seminorm(&self) -> Result<f64, Error> {
        for axis in &self.axes {
            if axis.len() < 3 {
                return Err(Error::GridTooCoarse { needed: 3, got: axis.len() });
            }
        }
        let mut worst = 0.0f64;
        for k in 0..self.dim() {
            let h2 = self.axes[k].h() * self.axes[k].h();
            let stride = if self.dim() == 2 && k == 0 { self.axes[1].len() } else { 1 };
            let nk = self.axes[k].len();
            self.for_each_line(k, |base| {
                for i in 1..nk - 1 {
                    let p = base + i * stride;
                    let d = (self.values[p + stride] - 2.0 * self.values[p]
                        + self.values[p - stride])
                        .abs()
                        / h2;
                    if d > worst {
                        worst = d;
                    }
                }
            });
        }
        if self.dim() == 2 {
            let (n0, n1) = (self.axes[0].len(), self.axes[1].len());
            let denom = 4.0 * self.axes[0].h() * self.axes[1].h();
            for i in 1..n0 - 1 {
                for j in 1..n1 - 1 {
                    let d = (self.at2(i + 1, j + 1) - self.at2(i + 1, j - 1)
                        - self.at2(i - 1, j + 1)
                        + self.at2(i - 1, j - 1))
                        .abs()
                        / denom;
                    if d > worst {
                        worst = d;
                    }
                }
            }
        }
        Ok(worst)
    }

    /// Doubles the resolution of every axis (`n -> 2n - 1`). Original
    /// nodes keep their values bit-for-bit; new nodes take the mean of
    /// their neighbors (bilinear in 2D).
    pub fn refine(&self) -> ScalarField {
        match self.dim() {
            1 => {
                let n = self.axes[0].len();
                let mut values = Vec::with_capacity(2 * n - 1);
                for i in 0..n - 1 {
                    values.push(self.values[i]);
                    values.push(0.5 * (self.values[i] + self.values[i + 1]));
                }
                values.push(self.values[n - 1]);
                ScalarField { axes: vec![self.axes[0].refine()], values }
            }
            2 => {
                let (n0, n1) = (self.axes[0].len(), self.axes[1].len());
                let (m0, m1) = (2 * n0 - 1, 2 * n1 - 1);
                let mut values = vec![0.0; m0 * m1];
                for i in 0..m0 {
                    for j in 0..m1 {
                        let v = match (i % 2, j % 2) {
                            (0, 0) => self.at2(i / 2, j / 2),
                            (1, 0) => 0.5 * (self.at2(i / 2, j / 2) + self.at2(i / 2 + 1, j / 2)),
                            (0, 1) => 0.5 * (self.at2(i / 2, j / 2) + self.at2(i / 2, j / 2 + 1)),
                            _ => {
                                0.25 * (self.at2(i / 2, j / 2)
                                    + self.at2(i / 2 + 1, j / 2)
                                    + self.at2(i / 2, j / 2 + 1)
                                    + self.at2(i / 2 + 1, j / 2 + 1))
                            }
                        };
                        values[i * m1 + j] = v;
                    }
                }
                ScalarField {
                    axes: vec![self.axes[0].refine(), self.axes[1].refine()],
                    values,
                }
            }
            _ => unreachable!("fields are 1- or 2-dimensional"),
        }
    }

    /// Inverse of [`refine`](Self::refine): keeps every other node per
    /// axis. Requires odd node counts of at least 3.
    pub fn coarsen(&self) -> Result<ScalarField, Error> {
        for axis in &self.axes {
            if axis.len() < 3 || axis.len() % 2 == 0 {
                return Err(Error::InvalidParameter(format!(
                    "coarsening needs an odd node count of at least 3, got {}",
                    axis.len()
                )));
            }
        }
        let axes: Vec<Axis> = self
            .axes
            .iter()
            .map(|a| Axis { min: a.min, max: a.max, n: (a.len() + 1) / 2 })
            .collect();
        let values = match self.dim() {
            1 => self.values.iter().copied().step_by(2).collect(),
            _ => {
                let n1 = self.axes[1].len();
                let mut out = Vec::with_capacity(axes[0].len() * axes[1].len());
                for i in (0..self.axes[0].len()).step_by(2) {
                    out.extend(self.values[i * n1..(i + 1) * n1].iter().copied().step_by(2));
                }
                out
            }
        };
        Ok(ScalarField { axes, values })
    }

    /// Restriction to the inclusive index box `[lo, hi]` per axis. The
    /// restricted axes keep the original node positions.
    pub fn restrict(&self, lo: &[usize], hi: &[usize]) -> ScalarField {
        assert_eq!(lo.len(), self.dim());
        assert_eq!(hi.len(), self.dim());
        for k in 0..self.dim() {
            assert!(lo[k] < hi[k] && hi[k] < self.axes[k].len());
        }
        let axes: Vec<Axis> = (0..self.dim())
            .map(|k| Axis {
                min: self.axes[k].node(lo[k]),
                max: self.axes[k].node(hi[k]),
                n: hi[k] - lo[k] + 1,
            })
            .collect();
        let values = match self.dim() {
            1 => self.values[lo[0]..=hi[0]].to_vec(),
            _ => {
                let mut v = Vec::with_capacity((hi[0] - lo[0] + 1) * (hi[1] - lo[1] + 1));
                for i in lo[0]..=hi[0] {
                    for j in lo[1]..=hi[1] {
                        v.push(self.at2(i, j));
                    }
                }
                v
            }
        };
        ScalarField { axes, values }
    }

    /// Index bounds of the centered box spanning half of each axis,
    /// used by the verifiers to stay away from the boundary.
    pub fn interior_half_box(&self) -> (Vec<usize>, Vec<usize>) {
        let mut lo = Vec::with_capacity(self.dim());
        let mut hi = Vec::with_capacity(self.dim());
        for axis in &self.axes {
            let n = axis.len();
            lo.push(n / 4);
            hi.push(n - 1 - n / 4);
        }
        (lo, hi)
    }

    /// Worst violation of discrete midpoint convexity, together with
    /// the offending node. Tested directions are each axis and, in 2D,
    /// both diagonals; the violation at a node is
    /// `2 f(p) - f(p - d) - f(p + d)`, so any positive return value
    /// witnesses non-convexity. Fields too small to test return 0.
    pub fn convexity_violation(&self) -> (f64, Vec<usize>) {
        let mut worst = f64::NEG_INFINITY;
        let mut loc = Vec::new();
        match self.dim() {
            1 => {
                let n = self.axes[0].len();
                for i in 1..n.saturating_sub(1) {
                    let v = 2.0 * self.values[i] - self.values[i - 1] - self.values[i + 1];
                    if v > worst {
                        worst = v;
                        loc = vec![i];
                    }
                }
            }
            _ => {
                let (n0, n1) = (self.axes[0].len(), self.axes[1].len());
                let check = |v: f64, i: usize, j: usize, worst: &mut f64, loc: &mut Vec<usize>| {
                    if v > *worst {
                        *worst = v;
                        *loc = vec![i, j];
                    }
                };
                for i in 0..n0 {
                    for j in 1..n1.saturating_sub(1) {
                        let v = 2.0 * self.at2(i, j) - self.at2(i, j - 1) - self.at2(i, j + 1);
                        check(v, i, j, &mut worst, &mut loc);
                    }
                }
                for j in 0..n1 {
                    for i in 1..n0.saturating_sub(1) {
                        let v = 2.0 * self.at2(i, j) - self.at2(i - 1, j) - self.at2(i + 1, j);
                        check(v, i, j, &mut worst, &mut loc);
                    }
                }
                for i in 1..n0.saturating_sub(1) {
                    for j in 1..n1.saturating_sub(1) {
                        let v = 2.0 * self.at2(i, j) - self.at2(i - 1, j - 1) - self.at2(i + 1, j + 1);
                        check(v, i, j, &mut worst, &mut loc);
                        let v = 2.0 * self.at2(i, j) - self.at2(i - 1, j + 1) - self.at2(i + 1, j - 1);
                        check(v, i, j, &mut worst, &mut loc);
                    }
                }
            }
        }
        if worst == f64::NEG_INFINITY {
            (0.0, Vec::new())
        } else {
            (worst, loc)
        }
    }

    /// Calls `body` with the flat base index of every grid line along
    /// axis `k` (the single line in 1D).
    fn for_each_line(&self, k: usize, mut body: impl FnMut(usize)) {
        if self.dim() == 1 {
            body(0);
        } else if k == 0 {
            for j in 0..self.axes[1].len() {
                body(j);
            }
        } else {
            let n1 = self.axes[1].len();
            for i in 0..self.axes[0].len() {
                body(i * n1);
            }
        }
    }
}

/// Sup distance between two fields on the same grid.
pub fn sup_distance(a: &ScalarField, b: &ScalarField) -> Result<f64, Error> {
    if !a.same_grid(b) {
        return Err(Error::GridMismatch);
    }
    Ok(a.values
        .iter()
        .zip(b.values.iter())
        .fold(0.0, |m, (&x, &y)| m.max((x - y).abs())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn axis(min: f64, max: f64, n: usize) -> Axis {
        Axis::new(min, max, n).unwrap()
    }

    #[test]
    fn axis_rejects_degenerate_windows() {
        assert!(Axis::new(1.0, 1.0, 4).is_err());
        assert!(Axis::new(2.0, 1.0, 4).is_err());
        assert!(Axis::new(0.0, 1.0, 1).is_err());
        assert!(Axis::new(f64::NAN, 1.0, 4).is_err());
    }

    #[test]
    fn axis_endpoints_are_nodes() {
        let a = axis(-1.0, 2.0, 301);
        assert_eq!(a.node(0), -1.0);
        assert!((a.node(300) - 2.0).abs() < 1e-12);
        assert_eq!(a.len(), 301);
    }

    #[test]
    fn field_rejects_bad_buffers() {
        let a = axis(0.0, 1.0, 5);
        assert_eq!(
            ScalarField::new(vec![a], vec![0.0; 4]),
            Err(Error::LengthMismatch { expected: 5, got: 4 })
        );
        assert_eq!(
            ScalarField::new(vec![a], vec![0.0, 1.0, f64::NAN, 0.0, 0.0]),
            Err(Error::NonFinite { index: 2 })
        );
    }

    #[test]
    fn gradient_of_abs_matches_hand_values() {
        // |x| on [-1, 1] with 5 nodes: central difference at the kink is 0,
        // +-1 elsewhere, one-sided at the ends.
        let f = ScalarField::from_fn_1d(axis(-1.0, 1.0, 5), f64::abs).unwrap();
        let g = &f.gradient_fd().unwrap()[0];
        assert_eq!(g.values(), &[-1.0, -1.0, 0.0, 1.0, 1.0]);
    }

    #[test]
    fn gradient_exact_for_affine_2d() {
        let f = ScalarField::from_fn_2d(axis(0.0, 1.0, 9), axis(-1.0, 1.0, 17), |s, x| {
            2.0 * s - 0.5 * x + 0.25
        })
        .unwrap();
        let g = f.gradient_fd().unwrap();
        for &v in g[0].values() {
            assert_eq!(v, 2.0);
        }
        for &v in g[1].values() {
            assert_eq!(v, -0.5);
        }
    }

    #[test]
    fn gradient_needs_three_nodes() {
        let f = ScalarField::from_fn_1d(axis(0.0, 1.0, 2), |x| x).unwrap();
        assert_eq!(f.gradient_fd(), Err(Error::GridTooCoarse { needed: 3, got: 2 }));
    }

    #[test]
    fn lipschitz_of_square_misses_endpoint_slope_by_h() {
        // x^2 on [-1, 1], h = 0.02: steepest adjacent slope is 2 - h.
        let f = ScalarField::from_fn_1d(axis(-1.0, 1.0, 101), |x| x * x).unwrap();
        assert!((f.lipschitz_seminorm() - 1.98).abs() < 1e-12);
    }

    #[test]
    fn c11_of_kink_scales_like_inverse_h() {
        // |x| with h = 0.01: second difference at the kink is 2h / h^2.
        let f = ScalarField::from_fn_1d(axis(-1.0, 1.0, 201), f64::abs).unwrap();
        assert!((f.c11_seminorm().unwrap() - 200.0).abs() < 1e-9);
    }

    #[test]
    fn c11_exact_for_quadratic_2d() {
        let f = ScalarField::from_fn_2d(axis(0.0, 1.0, 9), axis(-1.0, 1.0, 9), |s, x| {
            s * s + 3.0 * s * x + x * x
        })
        .unwrap();
        // Hessian entries 2, 3, 2; the mixed stencil recovers the 3.
        assert!((f.c11_seminorm().unwrap() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn refine_keeps_originals_bit_exact_and_halves_cells() {
        let f = ScalarField::from_fn_1d(axis(-1.0, 1.0, 3), |x| x * x).unwrap();
        let r = f.refine();
        assert_eq!(r.axis(0).len(), 5);
        assert_eq!(r.values(), &[1.0, 0.5, 0.0, 0.5, 1.0]);
        let rr = r.refine();
        for i in 0..r.len() {
            assert_eq!(rr.at(2 * i), r.at(i));
        }
    }

    #[test]
    fn refine_2d_is_bilinear() {
        let f = ScalarField::from_fn_2d(axis(0.0, 1.0, 3), axis(0.0, 1.0, 3), |s, x| s * x)
            .unwrap();
        let r = f.refine();
        assert_eq!(r.at2(1, 1), 0.0625); // (0.25 * 0.25)
        assert_eq!(r.at2(2, 2), f.at2(1, 1));
    }

    #[test]
    fn convexity_violation_flags_the_kink() {
        let f = ScalarField::from_fn_1d(axis(-1.0, 1.0, 5), |x| -x.abs()).unwrap();
        let (worst, loc) = f.convexity_violation();
        assert_eq!(worst, 1.0);
        assert_eq!(loc, vec![2]);
    }

    #[test]
    fn half_box_of_rooftop_window_reaches_curvature() {
        let f = ScalarField::from_fn_1d(axis(-1.0, 2.0, 301), |x| x).unwrap();
        let (lo, hi) = f.interior_half_box();
        assert_eq!((lo[0], hi[0]), (75, 225));
        let r = f.restrict(&lo, &hi);
        assert!((r.axis(0).min() + 0.25).abs() < 1e-12);
        assert!((r.axis(0).max() - 1.25).abs() < 1e-12);
    }
}
