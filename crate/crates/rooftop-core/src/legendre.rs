//! Discrete Legendre transforms, convexification, and infimal
//! convolution on uniform grids.
//!
//! Two sign conventions coexist. `legendre_classical` is the usual
//! conjugate `L[f](y) = max_i (x_i y - f(x_i))`. `neg_legendre` and
//! `neg_legendre_back` implement the pair
//!
//! ```text
//! f*(sigma) = inf_s [f(s) - sigma*s] = -L[f](sigma)
//! g*(s)     = sup_sigma [g(sigma) + sigma*s]
//! ```
//!
//! so that `neg_legendre_back(neg_legendre(f)) = f**`, the
//! convexification of `f` relative to its grid window.
//!
//! All suprema and infima are over grid nodes and break ties toward the
//! lowest index. Conjugates are reported on a caller-chosen dual
//! window; nothing is ever extrapolated past it, so the results are
//! window-relative (pad the axes when the unbounded-domain object is
//! wanted).

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::field::{Axis, ScalarField};

/// Sweep tolerance for the 2D convexification fixed point: a sweep
/// that changes no node by more than this counts as converged.
pub const CONVEXIFY_SWEEP_TOL: f64 = 1e-12;

/// Sweep budget for the 2D convexification fixed point.
pub const CONVEXIFY_MAX_SWEEPS: usize = 200_000;

/// An [`Axis`] living in the slope (dual) variable.
///
/// A plain wrapper, kept distinct so signatures make clear which axis
/// carries primal coordinates and which carries slopes. Transforms are
/// exact only when the window covers the slope range of the primal
/// field; [`DualAxis::covering`] builds such a window.
#[derive(Debug, Clone, PartialEq)]
pub struct DualAxis {
    axis: Axis,
}

impl DualAxis {
    pub fn new(axis: Axis) -> DualAxis {
        DualAxis { axis }
    }

    pub fn axis(&self) -> &Axis {
        &self.axis
    }

    /// The default window `[-Lip(f)-1, Lip(f)+1]` with as many nodes as
    /// the primal axis: all conjugate mass lies within the slope range
    /// of `f`, and the unit margin absorbs discretization.
    pub fn covering(f: &ScalarField) -> Result<DualAxis, Error> {
        if f.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: f.dim() });
        }
        let lip = f.lipschitz_seminorm();
        let axis = Axis::new(-lip - 1.0, lip + 1.0, f.axes()[0].len())?;
        Ok(DualAxis { axis })
    }

    /// A window covering the slopes of both fields (used when one dual
    /// grid must serve a pair of conjugates).
    pub fn covering_pair(f: &ScalarField, g: &ScalarField) -> Result<DualAxis, Error> {
        if f.dim() != 1 || g.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: 2 });
        }
        let lip = f.lipschitz_seminorm().max(g.lipschitz_seminorm());
        let axis = Axis::new(-lip - 1.0, lip + 1.0, f.axes()[0].len())?;
        Ok(DualAxis { axis })
    }
}

fn require_1d(f: &ScalarField) -> Result<(), Error> {
    if f.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: f.dim() });
    }
    Ok(())
}

/// Indices of the lower convex hull of the points `(i, values[i])`,
/// in increasing order. Collinear points are kept, so a discretely
/// convex sequence is returned in full.
pub(crate) fn lower_hull_indices(values: &[f64]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::with_capacity(values.len());
    for i in 0..values.len() {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // Pop b when it lies strictly above the chord from a to i.
            let lhs = (values[b] - values[a]) * ((i - a) as f64);
            let rhs = (values[i] - values[a]) * ((b - a) as f64);
            if lhs > rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    hull
}

/// O(n^2) reference conjugate: for every dual node the sup is scanned
/// over all primal nodes, lowest index winning ties. Kept as the
/// oracle the fast transform is tested against.
pub fn legendre_brute(f: &ScalarField, dual: &DualAxis) -> Result<ScalarField, Error> {
    require_1d(f)?;
    let axis = &f.axes()[0];
    let vals = f.values();
    let mut out = Vec::with_capacity(dual.axis.len());
    for j in 0..dual.axis.len() {
        let y = dual.axis.node(j);
        let mut best = axis.node(0) * y - vals[0];
        for i in 1..vals.len() {
            let cand = axis.node(i) * y - vals[i];
            if cand > best {
                best = cand;
            }
        }
        out.push(best);
    }
    ScalarField::new(vec![dual.axis.clone()], out)
}

/// Classical conjugate `L[f](y) = max_i (x_i y - f(x_i))` in linear
/// time: only lower-hull points can attain the max, and the argmax
/// index is nondecreasing in `y`, so one merge pass over ascending
/// dual nodes suffices. Agrees with [`legendre_brute`] exactly
/// whenever the candidate arithmetic is exact (dyadic data); otherwise
/// to rounding.
pub fn legendre_classical(f: &ScalarField, dual: &DualAxis) -> Result<ScalarField, Error> {
    require_1d(f)?;
    let axis = &f.axes()[0];
    let vals = f.values();
    let hull = lower_hull_indices(vals);
    let mut out = Vec::with_capacity(dual.axis.len());
    let mut t = 0usize;
    for j in 0..dual.axis.len() {
        let y = dual.axis.node(j);
        let mut best = axis.node(hull[t]) * y - vals[hull[t]];
        while t + 1 < hull.len() {
            let cand = axis.node(hull[t + 1]) * y - vals[hull[t + 1]];
            if cand > best {
                best = cand;
                t += 1;
            } else {
                break;
            }
        }
        out.push(best);
    }
    ScalarField::new(vec![dual.axis.clone()], out)
}

/// `f*(sigma) = inf_s [f(s) - sigma*s]`, the sign convention in which
/// conjugates of convex functions come out concave. Identical to
/// `-legendre_classical(f)(sigma)` and implemented as that identity.
pub fn neg_legendre(f: &ScalarField, dual: &DualAxis) -> Result<ScalarField, Error> {
    let mut out = legendre_classical(f, dual)?;
    out.negate();
    Ok(out)
}

/// `g*(s) = sup_sigma [g(sigma) + sigma*s]`, the transform back from
/// the slope variable. `neg_legendre_back(neg_legendre(f), axis)`
/// is the convexification of `f` when the dual window covers its
/// slopes.
pub fn neg_legendre_back(g: &ScalarField, primal: &Axis) -> Result<ScalarField, Error> {
    require_1d(g)?;
    let mut neg = g.clone();
    neg.negate();
    legendre_classical(&neg, &DualAxis::new(primal.clone()))
}

/// The largest discretely convex field below `f`, relative to the grid
/// window.
///
/// In 1D this is the lower convex hull of the samples, computed by the
/// monotone stack in O(n); discretely convex input is returned
/// unchanged. In 2D "discretely convex" means nonnegative second
/// differences along both axes and both diagonals, and the envelope is
/// the greatest fixed point of clipping each node to the smallest
/// neighbor-pair average; it is computed by Gauss-Seidel sweeps
/// (alternating orientation) until no node moves by more than
/// [`CONVEXIFY_SWEEP_TOL`].
pub fn convexify(f: &ScalarField) -> Result<ScalarField, Error> {
    match f.dim() {
        1 => Ok(convexify_1d(f)),
        _ => convexify_2d(f),
    }
}

fn convexify_1d(f: &ScalarField) -> ScalarField {
    let vals = f.values();
    let hull = lower_hull_indices(vals);
    let mut out = vals.to_vec();
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        for k in a + 1..b {
            let interp =
                vals[a] + (vals[b] - vals[a]) * ((k - a) as f64) / ((b - a) as f64);
            // The chord never exceeds the samples it replaces, but
            // rounding could; clip to preserve the minorant property.
            out[k] = interp.min(vals[k]);
        }
    }
    ScalarField::new(f.axes().to_vec(), out).expect("hull of a valid field is valid")
}

const DIRECTIONS_2D: [(isize, isize); 4] = [(1, 0), (0, 1), (1, 1), (1, -1)];

fn convexify_2d(f: &ScalarField) -> Result<ScalarField, Error> {
    let (n0, n1) = (f.axes()[0].len(), f.axes()[1].len());
    let vals = f.values();
    let mut u = vals.to_vec();
    let idx = |i: usize, j: usize| i * n1 + j;
    for sweep in 0..CONVEXIFY_MAX_SWEEPS {
        let mut change: f64 = 0.0;
        let forward = sweep % 2 == 0;
        for step in 0..n0 * n1 {
            let flat = if forward { step } else { n0 * n1 - 1 - step };
            let (i, j) = (flat / n1, flat % n1);
            let mut cap = vals[idx(i, j)];
            for (di, dj) in DIRECTIONS_2D {
                let (pi, pj) = (i as isize - di, j as isize - dj);
                let (qi, qj) = (i as isize + di, j as isize + dj);
                if pi < 0 || pj < 0 || qi < 0 || qj < 0 {
                    continue;
                }
                let (pi, pj, qi, qj) = (pi as usize, pj as usize, qi as usize, qj as usize);
                if pi >= n0 || pj >= n1 || qi >= n0 || qj >= n1 {
                    continue;
                }
                let avg = 0.5 * (u[idx(pi, pj)] + u[idx(qi, qj)]);
                if avg < cap {
                    cap = avg;
                }
            }
            let old = u[idx(i, j)];
            if cap < old {
                u[idx(i, j)] = cap;
                let d = old - cap;
                if d > change {
                    change = d;
                }
            }
        }
        if change <= CONVEXIFY_SWEEP_TOL {
            return ScalarField::new(f.axes().to_vec(), u);
        }
    }
    let residual = residual_2d(&u, vals, n0, n1);
    Err(Error::NoConvergence { residual, sweeps: CONVEXIFY_MAX_SWEEPS })
}

fn residual_2d(u: &[f64], cap: &[f64], n0: usize, n1: usize) -> f64 {
    let idx = |i: usize, j: usize| i * n1 + j;
    let mut worst: f64 = 0.0;
    for i in 0..n0 {
        for j in 0..n1 {
            let mut target = cap[idx(i, j)];
            for (di, dj) in DIRECTIONS_2D {
                let (pi, pj) = (i as isize - di, j as isize - dj);
                let (qi, qj) = (i as isize + di, j as isize + dj);
                if pi < 0 || pj < 0 || qi < 0 || qj < 0 {
                    continue;
                }
                let (pi, pj, qi, qj) = (pi as usize, pj as usize, qi as usize, qj as usize);
                if pi >= n0 || pj >= n1 || qi >= n0 || qj >= n1 {
                    continue;
                }
                let avg = 0.5 * (u[idx(pi, pj)] + u[idx(qi, qj)]);
                if avg < target {
                    target = avg;
                }
            }
            let gap = u[idx(i, j)] - target;
            if gap > worst {
                worst = gap;
            }
        }
    }
    worst
}

/// Discrete infimal convolution at blend parameter `s`:
///
/// ```text
/// (inf-conv)(x) = min over splittings of (1-s) psi0(x0) + s psi1(x1),
///                 (1-s) x0 + s x1 = x
/// ```
///
/// The scan runs twice: once with `x0` on grid nodes and `x1` solved
/// from the constraint (evaluated by linear interpolation), once the
/// other way around. A single-sided scan quantizes the minimizer in
/// the variable with the larger curvature weight and misses splittings
/// pinned to the window edge between nodes; the second family restores
/// them. Splittings leaving the axis are inadmissible. At `s = 0` and
/// `s = 1` the endpoints are returned exactly.
pub fn inf_convolution(
    psi0: &ScalarField,
    psi1: &ScalarField,
    s: f64,
) -> Result<ScalarField, Error> {
    require_1d(psi0)?;
    if !psi0.same_grid(psi1) {
        return Err(Error::GridMismatch);
    }
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidParameter(alloc::format!(
            "inf-convolution parameter s = {s} is outside [0, 1]"
        )));
    }
    if s == 0.0 {
        return Ok(psi0.clone());
    }
    if s == 1.0 {
        return Ok(psi1.clone());
    }
    let axis = &psi0.axes()[0];
    let (v0, v1) = (psi0.values(), psi1.values());
    let n = axis.len();
    let h = axis.h();
    let interp = |vals: &[f64], x: f64| -> Option<f64> {
        if x < axis.min() || x > axis.max() {
            return None;
        }
        let t = (x - axis.min()) / h;
        let k = (libm::floor(t) as usize).min(n - 2);
        let lam = (t - k as f64).clamp(0.0, 1.0);
        Some(vals[k] + lam * (vals[k + 1] - vals[k]))
    };
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let x = axis.node(j);
        // Seed with the trivial splitting x0 = x1 = x. Evaluating it
        // nodally keeps it admissible even when rounding pushes the
        // recovered partner a hair past the window edge.
        let mut best = (1.0 - s) * v0[j] + s * v1[j];
        for i in 0..n {
            let x0 = axis.node(i);
            let x1 = (x - (1.0 - s) * x0) / s;
            if let Some(w1) = interp(v1, x1) {
                let cand = (1.0 - s) * v0[i] + s * w1;
                if cand < best {
                    best = cand;
                }
            }
            let x1 = x0;
            let x0 = (x - s * x1) / (1.0 - s);
            if let Some(w0) = interp(v0, x0) {
                let cand = (1.0 - s) * w0 + s * v1[i];
                if cand < best {
                    best = cand;
                }
            }
        }
        out.push(best);
    }
    ScalarField::new(vec![axis.clone()], out)
}
