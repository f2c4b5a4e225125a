//! The Laplacian obstacle problem for rooftop obstacles, plus the
//! verifiers for the regularity statements that hold for its solution.
//!
//! The envelope `u` is the largest grid function that is discretely
//! subharmonic at interior nodes, lies below `g = min(b0, b1)`, and
//! matches `g` on the boundary. Two solvers are provided: projected
//! SOR on the complementarity system, and a penalty formulation
//! `-lap(u) + beta*max(u - g, 0) = 0` used as a cross-check. A third
//! scheme, [`berman_convexify_1d`], solves `u'' = exp(beta*(u - v))`
//! and approximates the convex envelope in 1D.
//!
//! Convergence is declared on the complementarity residual
//! `max |min(lap(u), g - u)|` over interior nodes, not merely on the
//! iterate change, so the returned residuals are honest measures of
//! distance to the discrete envelope.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::field::ScalarField;
use crate::legendre::convexify;
use crate::report::{CheckReport, CheckStatus};

/// Contact threshold: a node joins the contact set when
/// `g - u <= CONTACT_EPS_FACTOR * tol * (1 + sup|g|)`.
pub const CONTACT_EPS_FACTOR: f64 = 100.0;

/// Rounding slack for the family-Laplacian verifier.
pub const FAMILY_TOL: f64 = 1e-9;

/// Cap on the empirical constant in the family-Laplacian bound
/// `|lap(v_min)| <= B + C*h`.
pub const FAMILY_C_CAP: f64 = 10.0;

/// Relative margin in the interior C^{1,1} bound.
pub const C11_MARGIN_FACTOR: f64 = 0.25;

/// Absolute margin in the interior C^{1,1} bound.
pub const C11_MARGIN_ABS: f64 = 0.1;

const NEWTON_MAX_ITER: usize = 100;

/// A two-sheet obstacle `min(b0, b1)` with the difference `b1 - b0`
/// cached, since ridge geometry is read off the difference.
#[derive(Debug, Clone)]
pub struct RooftopObstacle {
    b0: ScalarField,
    b1: ScalarField,
    b10: ScalarField,
}

impl RooftopObstacle {
    pub fn new(b0: ScalarField, b1: ScalarField) -> Result<RooftopObstacle, Error> {
        let b10 = b1.sub(&b0)?;
        Ok(RooftopObstacle { b0, b1, b10 })
    }

    pub fn b0(&self) -> &ScalarField {
        &self.b0
    }

    pub fn b1(&self) -> &ScalarField {
        &self.b1
    }

    /// The cached difference `b1 - b0`.
    pub fn b10(&self) -> &ScalarField {
        &self.b10
    }

    /// The obstacle itself, `g = min(b0, b1)`.
    pub fn min(&self) -> ScalarField {
        self.b0.pointwise_min(&self.b1).expect("sheets share a grid")
    }

    /// Both sheets at doubled resolution; the difference is recomputed
    /// nodewise so its sign pattern stays exact.
    pub fn refine(&self) -> RooftopObstacle {
        RooftopObstacle::new(self.b0.refine(), self.b1.refine())
            .expect("refined sheets share a grid")
    }

    fn b10_at(&self, loc: &[usize]) -> f64 {
        match loc.len() {
            1 => self.b10.at(loc[0]),
            _ => self.b10.at2(loc[0], loc[1]),
        }
    }
}

/// Solver tag, carrying the parameter that identifies the run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Psor { relaxation: f64 },
    Penalty { beta: f64 },
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Psor { .. } => "psor",
            Method::Penalty { .. } => "penalty",
        }
    }
}

/// A converged (or best-effort) envelope together with its residuals.
#[derive(Debug, Clone)]
pub struct ObstacleSolution {
    pub u: ScalarField,
    /// Contact mask per flat node index; boundary nodes are always in.
    pub contact: Vec<bool>,
    pub iterations: usize,
    /// `max |min(lap(u), g - u)|` over interior nodes.
    pub residual_complementarity: f64,
    /// Worst violation of `lap(u) >= 0` over interior nodes.
    pub residual_subharmonic: f64,
    pub method: Method,
    pub tol: f64,
}

impl ObstacleSolution {
    /// Fraction of nodes in the contact set.
    pub fn contact_fraction(&self) -> f64 {
        let hits = self.contact.iter().filter(|&&c| c).count();
        hits as f64 / self.contact.len() as f64
    }
}

#[derive(Debug)]
pub enum SolveError {
    Invalid(Error),
    /// Iteration budget exhausted with residual above 10x the target;
    /// the best iterate is kept so callers can inspect it.
    Stalled {
        residual: f64,
        iterations: usize,
        best: Box<ObstacleSolution>,
    },
    /// Residual became non-finite; the recent residual history is kept.
    Diverged { history: Vec<f64> },
}

impl From<Error> for SolveError {
    fn from(e: Error) -> SolveError {
        SolveError::Invalid(e)
    }
}

impl core::fmt::Display for SolveError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SolveError::Invalid(e) => write!(f, "{e}"),
            SolveError::Stalled { residual, iterations, .. } => {
                write!(f, "solver stalled after {iterations} sweeps (residual {residual:e})")
            }
            SolveError::Diverged { history } => write!(
                f,
                "solver diverged after {} sweeps (last residual {:e})",
                history.len(),
                history.last().copied().unwrap_or(f64::NAN)
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SolveError {}

/// Uniform-grid stencil bookkeeping shared by the sweeps. A 1D field
/// is laid out as a single row with the row weight zeroed.
#[derive(Debug, Clone, Copy)]
struct Lattice {
    n0: usize,
    n1: usize,
    w0: f64,
    w1: f64,
}

impl Lattice {
    fn of(f: &ScalarField) -> Result<Lattice, Error> {
        for axis in f.axes() {
            if axis.len() < 3 {
                return Err(Error::GridTooCoarse { needed: 3, got: axis.len() });
            }
        }
        Ok(match f.dim() {
            1 => {
                let h = f.axes()[0].h();
                Lattice { n0: 1, n1: f.axes()[0].len(), w0: 0.0, w1: 1.0 / (h * h) }
            }
            _ => {
                let (h0, h1) = (f.axes()[0].h(), f.axes()[1].h());
                Lattice {
                    n0: f.axes()[0].len(),
                    n1: f.axes()[1].len(),
                    w0: 1.0 / (h0 * h0),
                    w1: 1.0 / (h1 * h1),
                }
            }
        })
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.n1 + j
    }

    fn diag(&self) -> f64 {
        2.0 * (self.w0 + self.w1)
    }

    fn neighbor_sum(&self, u: &[f64], i: usize, j: usize) -> f64 {
        let mut s = self.w1 * (u[self.idx(i, j - 1)] + u[self.idx(i, j + 1)]);
        if self.n0 > 1 {
            s += self.w0 * (u[self.idx(i - 1, j)] + u[self.idx(i + 1, j)]);
        }
        s
    }

    fn i_range(&self) -> core::ops::Range<usize> {
        if self.n0 == 1 { 0..1 } else { 1..self.n0 - 1 }
    }

    fn j_range(&self) -> core::ops::Range<usize> {
        1..self.n1 - 1
    }

    fn laplacian(&self, u: &[f64], i: usize, j: usize) -> f64 {
        self.neighbor_sum(u, i, j) - self.diag() * u[self.idx(i, j)]
    }
}

fn complementarity_residual(lat: &Lattice, u: &[f64], g: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for i in lat.i_range() {
        for j in lat.j_range() {
            let p = lat.idx(i, j);
            let r = lat.laplacian(u, i, j).min(g[p] - u[p]).abs();
            if r > worst {
                worst = r;
            }
        }
    }
    worst
}

fn subharmonic_residual(lat: &Lattice, u: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for i in lat.i_range() {
        for j in lat.j_range() {
            let r = -lat.laplacian(u, i, j);
            if r > worst {
                worst = r;
            }
        }
    }
    worst
}

/// Interior discrete Laplacian of `f` (3-point in 1D, 5-point in 2D),
/// with zeros on the boundary nodes where the stencil does not fit.
pub fn discrete_laplacian(f: &ScalarField) -> Result<ScalarField, Error> {
    let lat = Lattice::of(f)?;
    let vals = f.values();
    let mut out = vec![0.0; vals.len()];
    for i in lat.i_range() {
        for j in lat.j_range() {
            out[lat.idx(i, j)] = lat.laplacian(vals, i, j);
        }
    }
    ScalarField::new(f.axes().to_vec(), out)
}

fn assemble_solution(
    obs: &RooftopObstacle,
    g: &ScalarField,
    lat: &Lattice,
    u: Vec<f64>,
    iterations: usize,
    method: Method,
    tol: f64,
) -> ObstacleSolution {
    let residual_complementarity = complementarity_residual(lat, &u, g.values());
    let residual_subharmonic = subharmonic_residual(lat, &u);
    let u = ScalarField::new(obs.b0.axes().to_vec(), u).expect("solver iterates stay finite");
    let eps = CONTACT_EPS_FACTOR * tol * (1.0 + g.sup_norm());
    let contact = contact_mask(&u, g, lat, eps);
    ObstacleSolution {
        u,
        contact,
        iterations,
        residual_complementarity,
        residual_subharmonic,
        method,
        tol,
    }
}

fn contact_mask(u: &ScalarField, g: &ScalarField, lat: &Lattice, eps: f64) -> Vec<bool> {
    let mut mask = vec![true; u.len()];
    for i in lat.i_range() {
        for j in lat.j_range() {
            let p = lat.idx(i, j);
            mask[p] = g.at(p) - u.at(p) <= eps;
        }
    }
    mask
}

fn check_tol(tol: f64) -> Result<(), Error> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParameter(alloc::format!(
            "tolerance must be positive and finite, got {tol}"
        )));
    }
    Ok(())
}

/// Projected SOR for the obstacle problem: sweep lexicographically,
/// relax toward the Gauss-Seidel value, clip from above at `g`.
/// Starting from `u = g` the iterates decrease monotonically to the
/// envelope. Iteration stops once the sweep change is below `tol`
/// and the complementarity residual is too; if the budget runs out
/// the result is still returned as long as the residual is within
/// `10 * tol`.
pub fn solve_psor(
    obs: &RooftopObstacle,
    tol: f64,
    max_iter: usize,
    relaxation: f64,
) -> Result<ObstacleSolution, SolveError> {
    check_tol(tol)?;
    if !(relaxation > 0.0 && relaxation < 2.0) {
        return Err(SolveError::Invalid(Error::InvalidParameter(alloc::format!(
            "relaxation must lie in (0, 2), got {relaxation}"
        ))));
    }
    let g = obs.min();
    let lat = Lattice::of(&g)?;
    let gv = g.values();
    let mut u = gv.to_vec();
    let mut iterations = 0;
    let mut residual = f64::INFINITY;
    while iterations < max_iter {
        let mut change = 0.0f64;
        for i in lat.i_range() {
            for j in lat.j_range() {
                let p = lat.idx(i, j);
                let gs = lat.neighbor_sum(&u, i, j) / lat.diag();
                let relaxed = u[p] + relaxation * (gs - u[p]);
                let new = relaxed.min(gv[p]);
                let d = (new - u[p]).abs();
                if d > change {
                    change = d;
                }
                u[p] = new;
            }
        }
        iterations += 1;
        if change <= tol {
            residual = complementarity_residual(&lat, &u, gv);
            if residual <= tol || change == 0.0 {
                break;
            }
        }
    }
    if residual.is_infinite() {
        residual = complementarity_residual(&lat, &u, gv);
    }
    let method = Method::Psor { relaxation };
    let sol = assemble_solution(obs, &g, &lat, u, iterations, method, tol);
    if residual <= 10.0 * tol {
        Ok(sol)
    } else {
        Err(SolveError::Stalled { residual, iterations, best: Box::new(sol) })
    }
}

/// Penalty formulation `-lap(u) + beta*max(u - g, 0) = 0` with `u = g`
/// on the boundary, swept by Gauss-Seidel with the nodewise piecewise
/// linear equation solved exactly (the update lands on whichever
/// branch is consistent). Stops when the penalty-equation residual
/// drops below `tol`.
pub fn solve_penalty(
    obs: &RooftopObstacle,
    beta: f64,
    tol: f64,
    max_iter: usize,
) -> Result<ObstacleSolution, SolveError> {
    check_tol(tol)?;
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(SolveError::Invalid(Error::InvalidParameter(alloc::format!(
            "penalty weight must be positive and finite, got {beta}"
        ))));
    }
    let g = obs.min();
    let lat = Lattice::of(&g)?;
    let gv = g.values();
    let diag = lat.diag();
    let mut u = gv.to_vec();
    let mut history: Vec<f64> = Vec::new();
    let mut iterations = 0;
    let mut residual = f64::INFINITY;
    while iterations < max_iter {
        for i in lat.i_range() {
            for j in lat.j_range() {
                let p = lat.idx(i, j);
                let s = lat.neighbor_sum(&u, i, j);
                let free = s / diag;
                u[p] = if free <= gv[p] { free } else { (s + beta * gv[p]) / (diag + beta) };
            }
        }
        iterations += 1;
        residual = 0.0;
        for i in lat.i_range() {
            for j in lat.j_range() {
                let p = lat.idx(i, j);
                let r = (lat.laplacian(&u, i, j) - beta * (u[p] - gv[p]).max(0.0)).abs();
                if r > residual {
                    residual = r;
                }
            }
        }
        if history.len() == 100 {
            history.remove(0);
        }
        history.push(residual);
        if !residual.is_finite() {
            return Err(SolveError::Diverged { history });
        }
        if residual <= tol {
            break;
        }
    }
    let method = Method::Penalty { beta };
    let sol = assemble_solution(obs, &g, &lat, u, iterations, method, tol);
    if residual <= 10.0 * tol {
        Ok(sol)
    } else {
        Err(SolveError::Stalled { residual, iterations, best: Box::new(sol) })
    }
}

/// Damped Newton solve of the 1D approximation scheme
///
/// ```text
/// (u[i+1] - 2 u[i] + u[i-1]) / h^2 = exp(beta * (u[i] - v[i]))
/// ```
///
/// with `u = v` at the endpoints, started from `convexify(v)`. The
/// Jacobian is tridiagonal and strictly diagonally dominant, so the
/// linear solve is a plain Thomas elimination. Steps are halved until
/// the sup residual decreases. As `beta` grows the solution tracks
/// the convex envelope of `v` from above, overshooting by `O(1/beta)`.
pub fn berman_convexify_1d(
    v: &ScalarField,
    beta: f64,
    tol: f64,
) -> Result<ScalarField, Error> {
    if v.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: v.dim() });
    }
    check_tol(tol)?;
    if !(beta >= 1.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(alloc::format!(
            "scheme weight must be at least 1, got {beta}"
        )));
    }
    let axis = v.axes()[0];
    let n = axis.len();
    if n < 3 {
        return Err(Error::GridTooCoarse { needed: 3, got: n });
    }
    let w = 1.0 / (axis.h() * axis.h());
    let vv = v.values();
    let mut u = convexify(v)?.values().to_vec();
    let m = n - 2;
    let mut f = vec![0.0; m];
    let mut trial = vec![0.0; m];
    let mut delta = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let residual_of = |u: &[f64], f: &mut [f64]| -> f64 {
        let mut worst = 0.0f64;
        for k in 0..m {
            let i = k + 1;
            let lap = w * (u[i + 1] - 2.0 * u[i] + u[i - 1]);
            f[k] = lap - libm::exp(beta * (u[i] - vv[i]));
            let a = f[k].abs();
            if a > worst {
                worst = a;
            }
        }
        worst
    };
    let mut res = residual_of(&u, &mut f);
    for _ in 0..NEWTON_MAX_ITER {
        if res <= tol {
            return ScalarField::new(vec![axis], u);
        }
        for k in 0..m {
            let i = k + 1;
            diag[k] = -2.0 * w - beta * libm::exp(beta * (u[i] - vv[i]));
        }
        // Thomas elimination on J*delta = -f; off-diagonals are all w
        // and the diagonal dominates, so no pivoting is needed.
        let mut pivot = vec![0.0; m];
        pivot[0] = diag[0];
        delta[0] = -f[0];
        for k in 1..m {
            let l = w / pivot[k - 1];
            pivot[k] = diag[k] - l * w;
            delta[k] = -f[k] - l * delta[k - 1];
        }
        delta[m - 1] /= pivot[m - 1];
        for k in (0..m - 1).rev() {
            delta[k] = (delta[k] - w * delta[k + 1]) / pivot[k];
        }
        let mut step = 1.0;
        loop {
            let mut cand = u.clone();
            for k in 0..m {
                cand[k + 1] += step * delta[k];
            }
            let cand_res = residual_of(&cand, &mut trial);
            if cand_res < res {
                u = cand;
                core::mem::swap(&mut f, &mut trial);
                res = cand_res;
                break;
            }
            step *= 0.5;
            if step < 1e-12 {
                return Err(Error::NoConvergence { residual: res, sweeps: NEWTON_MAX_ITER });
            }
        }
    }
    if res <= tol {
        return ScalarField::new(vec![axis], u);
    }
    Err(Error::NoConvergence { residual: res, sweeps: NEWTON_MAX_ITER })
}

/// Contact mask at threshold `eps`: a node is in the set when
/// `min(b0, b1) - u <= eps`; boundary nodes always are.
pub fn contact_set(
    sol: &ObstacleSolution,
    obs: &RooftopObstacle,
    eps: f64,
) -> Result<Vec<bool>, Error> {
    if sol.u.axes() != obs.b0.axes() {
        return Err(Error::GridMismatch);
    }
    if eps.is_nan() {
        return Err(Error::InvalidParameter(String::from(
            "contact threshold must not be NaN",
        )));
    }
    let g = obs.min();
    let lat = Lattice::of(&g)?;
    Ok(contact_mask(&sol.u, &g, &lat, eps))
}

fn require_matching(sol: &ObstacleSolution, obs: &RooftopObstacle) -> Result<(), Error> {
    if sol.u.axes() != obs.b0.axes() {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

/// Re-solves the refined obstacle with the same method and tolerance,
/// with an iteration budget scaled from the coarse run.
fn solve_refined(
    sol: &ObstacleSolution,
    obs: &RooftopObstacle,
) -> Result<(RooftopObstacle, ObstacleSolution), Error> {
    let fine = obs.refine();
    let budget = sol.iterations * 8 + 20_000;
    let solved = match sol.method {
        Method::Psor { relaxation } => solve_psor(&fine, sol.tol, budget, relaxation),
        Method::Penalty { beta } => solve_penalty(&fine, beta, sol.tol, budget),
    };
    match solved {
        Ok(s) => Ok((fine, s)),
        Err(SolveError::Invalid(e)) => Err(e),
        Err(SolveError::Stalled { residual, iterations, .. }) => {
            Err(Error::NoConvergence { residual, sweeps: iterations })
        }
        Err(SolveError::Diverged { history }) => Err(Error::NoConvergence {
            residual: history.last().copied().unwrap_or(f64::NAN),
            sweeps: history.len(),
        }),
    }
}

struct RidgeNode {
    loc: Vec<usize>,
    coords: (f64, f64),
    grad_norm: f64,
}

/// Ridge nodes: exact zeros of `b10` plus the lower-index node of
/// every grid edge where `b10` changes sign, restricted to the
/// interior half-box and to `|grad(b10)| >= delta`.
fn ridge_nodes(obs: &RooftopObstacle, delta: f64) -> Result<Vec<RidgeNode>, Error> {
    let b10 = &obs.b10;
    let grads = b10.gradient_fd()?;
    let (lo, hi) = b10.interior_half_box();
    let mut out = Vec::new();
    let mut push = |loc: Vec<usize>, coords: (f64, f64)| {
        let grad_norm = match loc.len() {
            1 => grads[0].at(loc[0]).abs(),
            _ => {
                let gx = grads[0].at2(loc[0], loc[1]);
                let gy = grads[1].at2(loc[0], loc[1]);
                libm::sqrt(gx * gx + gy * gy)
            }
        };
        if grad_norm >= delta {
            out.push(RidgeNode { loc, coords, grad_norm });
        }
    };
    match b10.dim() {
        1 => {
            let axis = b10.axes()[0];
            for i in lo[0]..=hi[0] {
                let here = b10.at(i);
                let crossing = here == 0.0
                    || (i + 1 < axis.len() && here * b10.at(i + 1) < 0.0);
                if crossing {
                    push(vec![i], (axis.node(i), 0.0));
                }
            }
        }
        _ => {
            let (a0, a1) = (b10.axes()[0], b10.axes()[1]);
            for i in lo[0]..=hi[0] {
                for j in lo[1]..=hi[1] {
                    let here = b10.at2(i, j);
                    let crossing = here == 0.0
                        || (i + 1 < a0.len() && here * b10.at2(i + 1, j) < 0.0)
                        || (j + 1 < a1.len() && here * b10.at2(i, j + 1) < 0.0);
                    if crossing {
                        push(vec![i, j], (a0.node(i), a1.node(j)));
                    }
                }
            }
        }
    }
    Ok(out)
}

fn node_coords(f: &ScalarField, flat: usize) -> (f64, f64) {
    match f.dim() {
        1 => (f.axes()[0].node(flat), 0.0),
        _ => {
            let n1 = f.axes()[1].len();
            (f.axes()[0].node(flat / n1), f.axes()[1].node(flat % n1))
        }
    }
}

/// Smallest ratio dist(ridge node, contact set) / |grad(b10)| over the
/// detected ridge, with the location of the minimizer. `None` when no
/// ridge node qualifies.
fn cushion_constant(
    obs: &RooftopObstacle,
    sol: &ObstacleSolution,
    delta: f64,
) -> Result<Option<(f64, Vec<usize>)>, Error> {
    let ridge = ridge_nodes(obs, delta)?;
    if ridge.is_empty() {
        return Ok(None);
    }
    let contacts: Vec<(f64, f64)> = sol
        .contact
        .iter()
        .enumerate()
        .filter(|(_, &c)| c)
        .map(|(p, _)| node_coords(&sol.u, p))
        .collect();
    let mut best: Option<(f64, Vec<usize>)> = None;
    for node in ridge {
        let mut d2 = f64::INFINITY;
        for &(cx, cy) in &contacts {
            let (dx, dy) = (node.coords.0 - cx, node.coords.1 - cy);
            let q = dx * dx + dy * dy;
            if q < d2 {
                d2 = q;
            }
        }
        let c = libm::sqrt(d2) / node.grad_norm;
        if best.as_ref().map_or(true, |(b, _)| c < *b) {
            best = Some((c, node.loc));
        }
    }
    Ok(best)
}

/// Verifies the cushion-ball estimate: ridge nodes with a nondegenerate
/// difference gradient keep a distance to the contact set proportional
/// to `|grad(b10)|`. Reports the empirical proportionality constant on
/// the given grid and after one refinement; passes when the constant is
/// positive and moves by at most a factor of 2. `worst_violation`
/// carries that factor. Vacuous when no ridge node qualifies.
pub fn verify_cushion(
    sol: &ObstacleSolution,
    obs: &RooftopObstacle,
    delta: f64,
) -> Result<CheckReport, Error> {
    require_matching(sol, obs)?;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter(alloc::format!(
            "gradient floor must be positive and finite, got {delta}"
        )));
    }
    let Some((coarse, loc)) = cushion_constant(obs, sol, delta)? else {
        return Ok(CheckReport::vacuous("cushion"));
    };
    let (fine_obs, fine_sol) = solve_refined(sol, obs)?;
    let fine = cushion_constant(&fine_obs, &fine_sol, delta)?
        .map(|(c, _)| c)
        .unwrap_or(0.0);
    let factor = if coarse > 0.0 && fine > 0.0 {
        (coarse / fine).max(fine / coarse)
    } else {
        f64::INFINITY
    };
    Ok(CheckReport {
        check: "cushion",
        status: CheckStatus::Checked,
        pass: coarse > 0.0 && factor <= 2.0,
        worst_violation: factor,
        location: loc,
        metrics: vec![
            (String::from("c_emp"), coarse),
            (String::from("c_emp_refined"), fine),
        ],
    })
}

fn branch_gradient_terms(obs: &RooftopObstacle) -> Result<[Vec<ScalarField>; 2], Error> {
    Ok([obs.b0.gradient_fd()?, obs.b1.gradient_fd()?])
}

/// Largest quadratic-growth quotient over free-boundary nodes: the
/// deviation of `u` from the active sheet's tangent at the node,
/// divided by squared distance, over the surrounding quarter-box.
/// Returns the max, its location, and how many nodes had both sheets
/// active (those are scored on both).
fn growth_constant(
    obs: &RooftopObstacle,
    sol: &ObstacleSolution,
) -> Result<Option<(f64, Vec<usize>, usize)>, Error> {
    let u = &sol.u;
    let g = obs.min();
    let lat = Lattice::of(&g)?;
    let grads = branch_gradient_terms(obs)?;
    let (lo, hi) = u.interior_half_box();
    let mut q_max: Option<(f64, Vec<usize>)> = None;
    let mut ties = 0usize;
    let free_boundary: Vec<Vec<usize>> = match u.dim() {
        1 => {
            let n = u.axes()[0].len();
            (lo[0]..=hi[0])
                .filter(|&i| {
                    sol.contact[i]
                        && ((i > 0 && !sol.contact[i - 1])
                            || (i + 1 < n && !sol.contact[i + 1]))
                })
                .map(|i| vec![i])
                .collect()
        }
        _ => {
            let mut out = Vec::new();
            for i in lo[0]..=hi[0] {
                for j in lo[1]..=hi[1] {
                    let p = lat.idx(i, j);
                    if !sol.contact[p] {
                        continue;
                    }
                    let detached = (i > 0 && !sol.contact[lat.idx(i - 1, j)])
                        || (i + 1 < lat.n0 && !sol.contact[lat.idx(i + 1, j)])
                        || (j > 0 && !sol.contact[lat.idx(i, j - 1)])
                        || (j + 1 < lat.n1 && !sol.contact[lat.idx(i, j + 1)]);
                    if detached {
                        out.push(vec![i, j]);
                    }
                }
            }
            out
        }
    };
    if free_boundary.is_empty() {
        return Ok(None);
    }
    for loc in &free_boundary {
        let branches: Vec<usize> = if obs.b10_at(loc) == 0.0 {
            ties += 1;
            vec![0, 1]
        } else if obs.b10_at(loc) < 0.0 {
            vec![1]
        } else {
            vec![0]
        };
        for &b in &branches {
            let q = growth_at(obs, u, &grads[b], b, loc);
            if q_max.as_ref().map_or(true, |(m, _)| q > *m) {
                q_max = Some((q, loc.clone()));
            }
        }
    }
    Ok(q_max.map(|(q, loc)| (q, loc, ties)))
}

fn growth_at(
    obs: &RooftopObstacle,
    u: &ScalarField,
    grad: &[ScalarField],
    branch: usize,
    loc: &[usize],
) -> f64 {
    let sheet = if branch == 0 { &obs.b0 } else { &obs.b1 };
    let mut q = 0.0f64;
    match u.dim() {
        1 => {
            let axis = u.axes()[0];
            let n = axis.len();
            let half = (n - 1) / 8;
            let i0 = loc[0];
            let (x0, b_at, g_at) = (axis.node(i0), sheet.at(i0), grad[0].at(i0));
            let lo = i0.saturating_sub(half);
            let hi = (i0 + half).min(n - 1);
            for i in lo..=hi {
                if i == i0 {
                    continue;
                }
                let dx = axis.node(i) - x0;
                let dev = (u.at(i) - b_at - g_at * dx).abs();
                let ratio = dev / (dx * dx);
                if ratio > q {
                    q = ratio;
                }
            }
        }
        _ => {
            let (a0, a1) = (u.axes()[0], u.axes()[1]);
            let (n0, n1) = (a0.len(), a1.len());
            let (half0, half1) = ((n0 - 1) / 8, (n1 - 1) / 8);
            let (i0, j0) = (loc[0], loc[1]);
            let (x0, y0) = (a0.node(i0), a1.node(j0));
            let b_at = sheet.at2(i0, j0);
            let (gx, gy) = (grad[0].at2(i0, j0), grad[1].at2(i0, j0));
            for i in i0.saturating_sub(half0)..=(i0 + half0).min(n0 - 1) {
                for j in j0.saturating_sub(half1)..=(j0 + half1).min(n1 - 1) {
                    if i == i0 && j == j0 {
                        continue;
                    }
                    let (dx, dy) = (a0.node(i) - x0, a1.node(j) - y0);
                    let dev = (u.at2(i, j) - b_at - gx * dx - gy * dy).abs();
                    let ratio = dev / (dx * dx + dy * dy);
                    if ratio > q {
                        q = ratio;
                    }
                }
            }
        }
    }
    q
}

/// Verifies quadratic growth at the free boundary: `u` stays within
/// `Q * |x - x0|^2` of the active sheet's tangent plane over the
/// surrounding quarter-box. Reports max `Q` (in `worst_violation`) and
/// passes when it is finite and at most doubles under one refinement.
/// Nodes where both sheets attain the obstacle are scored on both and
/// counted in the `ties` metric. Vacuous without free-boundary nodes.
pub fn verify_quadratic_growth(
    sol: &ObstacleSolution,
    obs: &RooftopObstacle,
) -> Result<CheckReport, Error> {
    require_matching(sol, obs)?;
    let Some((coarse, loc, ties)) = growth_constant(obs, sol)? else {
        return Ok(CheckReport::vacuous("quadratic-growth"));
    };
    let (fine_obs, fine_sol) = solve_refined(sol, obs)?;
    let fine = growth_constant(&fine_obs, &fine_sol)?
        .map(|(q, _, _)| q)
        .unwrap_or(0.0);
    Ok(CheckReport {
        check: "quadratic-growth",
        status: CheckStatus::Checked,
        pass: coarse.is_finite() && fine <= 2.0 * coarse + 1e-12,
        worst_violation: coarse,
        location: loc,
        metrics: vec![
            (String::from("q_max"), coarse),
            (String::from("q_refined"), fine),
            (String::from("ties"), ties as f64),
        ],
    })
}

/// Verifies interior second-difference control: the seminorm of `u`
/// over the centered half-box must stay within the margin-inflated
/// obstacle seminorm and drift at most 25% under one refinement.
/// `worst_violation` is the excess over the bound (0 when inside it).
pub fn verify_c11(sol: &ObstacleSolution, obs: &RooftopObstacle) -> Result<CheckReport, Error> {
    require_matching(sol, obs)?;
    let (lo, hi) = sol.u.interior_half_box();
    let coarse = sol.u.restrict(&lo, &hi).c11_seminorm()?;
    let bound = (1.0 + C11_MARGIN_FACTOR)
        * obs.b0.c11_seminorm()?.max(obs.b1.c11_seminorm()?)
        + C11_MARGIN_ABS;
    let (_, fine_sol) = solve_refined(sol, obs)?;
    // The refinement interpolates the obstacle linearly, which doubles
    // second differences measured at the half step wherever the fine
    // solve rides the interpolant. Coarsening back to the original
    // nodes compares both seminorms at the same scale.
    let fine = fine_sol.u.coarsen()?.restrict(&lo, &hi).c11_seminorm()?;
    let drift = (fine - coarse).abs() / coarse.max(C11_MARGIN_ABS);
    Ok(CheckReport {
        check: "c11-interior",
        status: CheckStatus::Checked,
        pass: coarse <= bound && drift <= 0.25,
        worst_violation: (coarse - bound).max(0.0),
        location: Vec::new(),
        metrics: vec![
            (String::from("seminorm"), coarse),
            (String::from("seminorm_refined"), fine),
            (String::from("bound"), bound),
            (String::from("drift"), drift),
        ],
    })
}

/// Verifies the family-Laplacian bound: if every member satisfies
/// `|lap(v)| <= B` and the pointwise minimum is subharmonic, then the
/// minimum satisfies `|lap(v_min)| <= B + C*h`. A member breaking the
/// premise yields a failing precondition report; a non-subharmonic
/// minimum yields a passing "hypothesis not met" report, since the
/// statement asserts nothing there.
pub fn verify_family_laplacian(
    members: &[ScalarField],
    bound: f64,
) -> Result<CheckReport, Error> {
    let Some(first) = members.first() else {
        return Err(Error::InvalidParameter(String::from(
            "the family needs at least one member",
        )));
    };
    if members.iter().any(|m| !first.same_grid(m)) {
        return Err(Error::GridMismatch);
    }
    if !(bound >= 0.0 && bound.is_finite()) {
        return Err(Error::InvalidParameter(alloc::format!(
            "Laplacian bound must be nonnegative and finite, got {bound}"
        )));
    }
    let lat = Lattice::of(first)?;
    for (k, member) in members.iter().enumerate() {
        let mut worst = 0.0f64;
        let mut at = Vec::new();
        for i in lat.i_range() {
            for j in lat.j_range() {
                let a = lat.laplacian(member.values(), i, j).abs();
                if a > worst {
                    worst = a;
                    at = if lat.n0 == 1 { vec![j] } else { vec![i, j] };
                }
            }
        }
        if worst > bound + FAMILY_TOL {
            return Ok(CheckReport {
                check: "family-laplacian",
                status: CheckStatus::PreconditionFailed,
                pass: false,
                worst_violation: worst - bound,
                location: at,
                metrics: vec![(String::from("member"), k as f64)],
            });
        }
    }
    let mut v_min = first.clone();
    for m in &members[1..] {
        v_min = v_min.pointwise_min(m)?;
    }
    let mut lap_min = f64::INFINITY;
    let mut lap_sup = 0.0f64;
    let mut at = Vec::new();
    for i in lat.i_range() {
        for j in lat.j_range() {
            let lap = lat.laplacian(v_min.values(), i, j);
            if lap < lap_min {
                lap_min = lap;
            }
            let a = lap.abs();
            if a > lap_sup {
                lap_sup = a;
                at = if lat.n0 == 1 { vec![j] } else { vec![i, j] };
            }
        }
    }
    if lap_min < -FAMILY_TOL {
        return Ok(CheckReport {
            check: "family-laplacian",
            status: CheckStatus::HypothesisNotMet,
            pass: true,
            worst_violation: -lap_min,
            location: Vec::new(),
            metrics: vec![(String::from("laplacian_min"), lap_min)],
        });
    }
    let h = first.axes().iter().fold(0.0f64, |m, a| m.max(a.h()));
    let cap = bound + FAMILY_C_CAP * h;
    let c_emp = ((lap_sup - bound) / h).max(0.0);
    Ok(CheckReport {
        check: "family-laplacian",
        status: CheckStatus::Checked,
        pass: lap_sup <= cap,
        worst_violation: (lap_sup - cap).max(0.0),
        location: at,
        metrics: vec![
            (String::from("laplacian_sup"), lap_sup),
            (String::from("c_emp"), c_emp),
            (String::from("grid_h"), h),
        ],
    })
}
