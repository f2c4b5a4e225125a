//! Weak geodesics on the strip `[0,1] x [x_min, x_max]` between convex
//! endpoints, built by three independent routes:
//!
//! * `semmes`: conjugate both endpoints, blend affinely in the slope
//!   variable, conjugate back;
//! * `infconv`: infimal convolution of the endpoints at each strip
//!   node;
//! * `rooftop`: supremum over tilts of the two-sheet envelope,
//!   `sup_sigma [P(psi0, psi1 - sigma)(x) + s*sigma]`.
//!
//! All three agree up to grid resolution on convex data, and the
//! checks in this module (dual identity, sandwich bounds, fiberwise
//! Lipschitz control, joint convexity, Monge-Ampere residual) quantify
//! that agreement. Everything is window-relative: near the lateral
//! edges the discrete geodesic follows the chord of the windowed hull
//! rather than the unbounded-domain formula, so comparisons against
//! closed forms should either pad the axis or restrict the probe
//! region.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::field::{sup_distance, Axis, ScalarField};
use crate::legendre::{legendre_classical, DualAxis};
use crate::report::{CheckReport, CheckStatus};
use crate::rooftop::tilted_envelope;

/// Rounding slack for the sandwich bounds, which hold exactly on
/// samples relative to the grid window.
pub const SANDWICH_TOL: f64 = 1e-9;

/// Rounding slack for the fiberwise Lipschitz comparison.
pub const FIBERWISE_LIP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeodesicMethod {
    Semmes,
    InfConv,
    Rooftop,
}

impl GeodesicMethod {
    pub fn name(&self) -> &'static str {
        match self {
            GeodesicMethod::Semmes => "semmes",
            GeodesicMethod::InfConv => "infconv",
            GeodesicMethod::Rooftop => "rooftop",
        }
    }
}

/// A geodesic candidate: a 2D field over `(s, x)` tagged with the
/// route that produced it.
#[derive(Debug, Clone)]
pub struct GeodesicSolution {
    pub field: ScalarField,
    pub method: GeodesicMethod,
    /// The tilt window used by the rooftop route, absent otherwise.
    pub sigma_window: Option<(f64, f64)>,
    /// Node spacing of the tilt grid, absent on the other routes. The
    /// verifiers use it to grant the one-cell quantization of the sup
    /// over tilts.
    pub sigma_h: Option<f64>,
    pub warnings: Vec<String>,
}

impl GeodesicSolution {
    pub fn s_axis(&self) -> Axis {
        self.field.axis(0)
    }

    pub fn x_axis(&self) -> Axis {
        self.field.axis(1)
    }
}

fn require_endpoints(psi0: &ScalarField, psi1: &ScalarField) -> Result<(), Error> {
    if psi0.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: psi0.dim() });
    }
    if !psi0.same_grid(psi1) {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

fn require_strip(s_axis: Axis) -> Result<(), Error> {
    if s_axis.min() != 0.0 || s_axis.max() != 1.0 {
        return Err(Error::InvalidParameter(format!(
            "the strip axis must span [0, 1] exactly, got [{}, {}]",
            s_axis.min(),
            s_axis.max()
        )));
    }
    Ok(())
}

fn assemble(
    rows: Vec<ScalarField>,
    s_axis: Axis,
    x_axis: Axis,
    method: GeodesicMethod,
    sigma_axis: Option<Axis>,
    warnings: Vec<String>,
) -> Result<GeodesicSolution, Error> {
    let mut values = Vec::with_capacity(s_axis.len() * x_axis.len());
    for row in &rows {
        values.extend_from_slice(row.values());
    }
    let field = ScalarField::new(vec![s_axis, x_axis], values)?;
    Ok(GeodesicSolution {
        field,
        method,
        sigma_window: sigma_axis.map(|a| (a.min(), a.max())),
        sigma_h: sigma_axis.map(|a| a.h()),
        warnings,
    })
}

/// Double-Legendre route: `psi(s, .) = ((1-s) psi0* + s psi1*)*` with
/// the classical conjugate on a slope window covering both endpoints.
/// Non-convex endpoints are accepted with a warning; the result is
/// then the geodesic between their convexifications, since the double
/// conjugate convexifies.
pub fn geodesic_semmes(
    psi0: &ScalarField,
    psi1: &ScalarField,
    s_axis: Axis,
) -> Result<GeodesicSolution, Error> {
    require_endpoints(psi0, psi1)?;
    require_strip(s_axis)?;
    let mut warnings = Vec::new();
    for (name, f) in [("left", psi0), ("right", psi1)] {
        let (v, _) = f.convexity_violation();
        if v > 0.0 {
            warnings.push(format!(
                "{name} endpoint is not discretely convex (violation {v:e}); \
                 the result joins its convexification"
            ));
        }
    }
    let x_axis = psi0.axes()[0];
    let dual = DualAxis::covering_pair(psi0, psi1)?;
    let l0 = legendre_classical(psi0, &dual)?;
    let l1 = legendre_classical(psi1, &dual)?;
    let back = DualAxis::new(x_axis);
    let mut rows = Vec::with_capacity(s_axis.len());
    for k in 0..s_axis.len() {
        let s = s_axis.node(k);
        let blended = ScalarField::new(
            vec![*dual.axis()],
            l0.values()
                .iter()
                .zip(l1.values().iter())
                .map(|(&a, &b)| (1.0 - s) * a + s * b)
                .collect(),
        )?;
        rows.push(legendre_classical(&blended, &back)?);
    }
    assemble(rows, s_axis, x_axis, GeodesicMethod::Semmes, None, warnings)
}

/// Hopf-Lax route: one infimal convolution per strip node. Exact at
/// `s = 0` and `s = 1` by construction.
pub fn geodesic_infconv(
    psi0: &ScalarField,
    psi1: &ScalarField,
    s_axis: Axis,
) -> Result<GeodesicSolution, Error> {
    require_endpoints(psi0, psi1)?;
    require_strip(s_axis)?;
    let x_axis = psi0.axes()[0];
    let mut rows = Vec::with_capacity(s_axis.len());
    for k in 0..s_axis.len() {
        rows.push(crate::legendre::inf_convolution(psi0, psi1, s_axis.node(k))?);
    }
    assemble(rows, s_axis, x_axis, GeodesicMethod::InfConv, None, Vec::new())
}

/// The tilt window the rooftop route needs:
/// `[min(psi1 - psi0) - 1, max(psi1 - psi0) + 1]` over the grid.
/// Outside it one sheet dominates and the supremum cannot move.
pub fn required_sigma_window(psi0: &ScalarField, psi1: &ScalarField) -> Result<(f64, f64), Error> {
    require_endpoints(psi0, psi1)?;
    let diff = psi1.sub(psi0)?;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &d in diff.values() {
        lo = lo.min(d);
        hi = hi.max(d);
    }
    Ok((lo - 1.0, hi + 1.0))
}

/// Envelope route: `psi(s, x) = sup_sigma [P(psi0, psi1 - sigma)(x) + s*sigma]`
/// over the tilt nodes, lowest index winning ties. The window must
/// cover [`required_sigma_window`].
pub fn geodesic_rooftop(
    psi0: &ScalarField,
    psi1: &ScalarField,
    s_axis: Axis,
    sigma_axis: Axis,
) -> Result<GeodesicSolution, Error> {
    require_endpoints(psi0, psi1)?;
    require_strip(s_axis)?;
    let (required_min, required_max) = required_sigma_window(psi0, psi1)?;
    if sigma_axis.min() > required_min || sigma_axis.max() < required_max {
        return Err(Error::SigmaWindowTooSmall { required_min, required_max });
    }
    let x_axis = psi0.axes()[0];
    let envelopes: Vec<ScalarField> = (0..sigma_axis.len())
        .map(|j| tilted_envelope(psi0, psi1, sigma_axis.node(j)))
        .collect::<Result<_, _>>()?;
    let nx = x_axis.len();
    let mut rows = Vec::with_capacity(s_axis.len());
    for k in 0..s_axis.len() {
        let s = s_axis.node(k);
        let mut row = Vec::with_capacity(nx);
        for i in 0..nx {
            let mut best = envelopes[0].at(i) + s * sigma_axis.node(0);
            for j in 1..sigma_axis.len() {
                let cand = envelopes[j].at(i) + s * sigma_axis.node(j);
                if cand > best {
                    best = cand;
                }
            }
            row.push(best);
        }
        rows.push(ScalarField::new(vec![x_axis], row)?);
    }
    assemble(rows, s_axis, x_axis, GeodesicMethod::Rooftop, Some(sigma_axis), Vec::new())
}

/// Legendre transform of the geodesic in the strip variable:
/// `dual(sigma, x) = min_s [psi(s, x) - s*sigma]`, lowest s-index
/// winning ties. For a true geodesic this reproduces the tilted
/// envelope at every tilt node.
pub fn bremermann_dual(g: &GeodesicSolution, sigma_axis: Axis) -> Result<ScalarField, Error> {
    let s_axis = g.s_axis();
    let nx = g.x_axis().len();
    let mut values = Vec::with_capacity(sigma_axis.len() * nx);
    for j in 0..sigma_axis.len() {
        let sigma = sigma_axis.node(j);
        for i in 0..nx {
            let mut best = g.field.at2(0, i);
            for k in 1..s_axis.len() {
                let cand = g.field.at2(k, i) - s_axis.node(k) * sigma;
                if cand < best {
                    best = cand;
                }
            }
            values.push(best);
        }
    }
    ScalarField::new(vec![sigma_axis, g.x_axis()], values)
}

/// Checks the two-sided bound
///
/// ```text
/// max(psi0 - A*s, psi1 - A*(1-s)) <= psi <= (1-s) psi0 + s psi1
/// ```
///
/// nodewise, with `A = sup |psi1 - psi0|` over the grid. The upper
/// bound holds exactly for every route. The lower bound holds up to
/// two discretization allowances. First, the endpoint attainment
/// defect: the conjugate route reproduces the endpoints only within
/// its involution budget, and the whole field inherits exactly that
/// shortfall. The defect is measured from the endpoint slices and
/// added to the allowance. Second, one tilt cell on the envelope
/// route: the lower bound is realized by the tilts `-A` and `+A`,
/// which need not be nodes of the tilt grid. The nearest node is
/// within one spacing, it exists because the required window covers
/// `[min(psi1-psi0), max(psi1-psi0)]` with a unit margin, and moving
/// the anchor tilt by `h` costs at most `s*h <= h`. Routes without a
/// tilt grid get no such slack. Raw extremes of both bounds are
/// reported as metrics.
pub fn sandwich_bounds(
    psi0: &ScalarField,
    psi1: &ScalarField,
    g: &GeodesicSolution,
) -> Result<CheckReport, Error> {
    require_endpoints(psi0, psi1)?;
    if psi0.axes()[0] != g.x_axis() {
        return Err(Error::GridMismatch);
    }
    let diff = psi1.sub(psi0)?;
    let a = diff.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let s_axis = g.s_axis();
    let defect = sup_distance(&g.field.row(0)?, psi0)?
        .max(sup_distance(&g.field.row(s_axis.len() - 1)?, psi1)?);
    let mut lower_worst = f64::NEG_INFINITY;
    let mut upper_worst = f64::NEG_INFINITY;
    let mut location = vec![0usize, 0usize];
    for k in 0..s_axis.len() {
        let s = s_axis.node(k);
        for i in 0..psi0.len() {
            let psi = g.field.at2(k, i);
            let w = (psi0.at(i) - a * s).max(psi1.at(i) - a * (1.0 - s));
            let chord = (1.0 - s) * psi0.at(i) + s * psi1.at(i);
            let lower = w - psi;
            let upper = psi - chord;
            if lower.max(upper) > lower_worst.max(upper_worst) {
                location = vec![k, i];
            }
            lower_worst = lower_worst.max(lower);
            upper_worst = upper_worst.max(upper);
        }
    }
    let allowance = defect + g.sigma_h.unwrap_or(0.0);
    let excess = (lower_worst - allowance).max(upper_worst).max(0.0);
    Ok(CheckReport {
        check: "sandwich",
        status: CheckStatus::Checked,
        pass: excess <= SANDWICH_TOL,
        worst_violation: excess,
        location,
        metrics: vec![
            (String::from("lower_worst"), lower_worst),
            (String::from("upper_worst"), upper_worst),
            (String::from("amplitude"), a),
            (String::from("endpoint_defect"), defect),
            (String::from("sigma_allowance"), g.sigma_h.unwrap_or(0.0)),
        ],
    })
}

/// Determinant of the central-difference Hessian in `(s, x)` at every
/// interior node, zero on the boundary ring. Meaningful where the
/// geodesic is twice differentiable; on kinked data it is a diagnostic
/// only.
pub fn ma_residual(g: &GeodesicSolution) -> Result<ScalarField, Error> {
    let f = &g.field;
    let (n0, n1) = (f.axes()[0].len(), f.axes()[1].len());
    if n0 < 3 || n1 < 3 {
        return Err(Error::GridTooCoarse { needed: 3, got: n0.min(n1) });
    }
    let (hs, hx) = (f.axes()[0].h(), f.axes()[1].h());
    let (hs2, hx2, hmix) = (hs * hs, hx * hx, 4.0 * hs * hx);
    let mut out = vec![0.0; n0 * n1];
    for k in 1..n0 - 1 {
        for i in 1..n1 - 1 {
            let dss = (f.at2(k + 1, i) - 2.0 * f.at2(k, i) + f.at2(k - 1, i)) / hs2;
            let dxx = (f.at2(k, i + 1) - 2.0 * f.at2(k, i) + f.at2(k, i - 1)) / hx2;
            let dsx = (f.at2(k + 1, i + 1) - f.at2(k + 1, i - 1) - f.at2(k - 1, i + 1)
                + f.at2(k - 1, i - 1))
                / hmix;
            out[k * n1 + i] = dss * dxx - dsx * dsx;
        }
    }
    ScalarField::new(f.axes().to_vec(), out)
}

/// Checks that no strip slice is steeper in `x` than the endpoint
/// slices: `max_s Lip(psi(s, .)) <= max(Lip at s=0, Lip at s=1)` plus
/// an allowance of one cell of endpoint curvature. The secant
/// estimator averages the slope over a cell, and near the window edges
/// the active slope of the interpolated envelope drifts by up to the
/// endpoint second-difference scale across a single cell, so the
/// strict bound only holds after that discretization bias is granted.
pub fn fiberwise_lipschitz_check(g: &GeodesicSolution) -> Result<CheckReport, Error> {
    let ns = g.s_axis().len();
    let mut worst = 0.0f64;
    let mut at = 0usize;
    let mut endpoint = 0.0f64;
    let mut curvature = 0.0f64;
    for k in 0..ns {
        let row = g.field.row(k)?;
        let lip = row.lipschitz_seminorm();
        if k == 0 || k == ns - 1 {
            endpoint = endpoint.max(lip);
            curvature = curvature.max(row.c11_seminorm().unwrap_or(0.0));
        }
        if lip > worst {
            worst = lip;
            at = k;
        }
    }
    let tolerance = FIBERWISE_LIP_TOL + g.x_axis().h() * curvature;
    let bound = endpoint + tolerance;
    Ok(CheckReport {
        check: "fiberwise-lipschitz",
        status: CheckStatus::Checked,
        pass: worst <= bound,
        worst_violation: (worst - bound).max(0.0),
        location: vec![at],
        metrics: vec![
            (String::from("max_slice_lipschitz"), worst),
            (String::from("endpoint_lipschitz"), endpoint),
            (String::from("tolerance"), tolerance),
        ],
    })
}

/// Checks discrete midpoint convexity of the geodesic jointly in
/// `(s, x)`, with a quantization allowance of `10 * (h_s^2 + h_x^2)`
/// (the infimal-convolution route moves values by up to the squared
/// grid steps when the optimal splitting falls between nodes).
pub fn joint_convexity_check(g: &GeodesicSolution) -> Result<CheckReport, Error> {
    let (hs, hx) = (g.s_axis().h(), g.x_axis().h());
    let tol = 10.0 * (hs * hs + hx * hx);
    let (worst, location) = g.field.convexity_violation();
    Ok(CheckReport {
        check: "joint-convexity",
        status: CheckStatus::Checked,
        pass: worst <= tol,
        worst_violation: worst.max(0.0),
        location,
        metrics: vec![(String::from("tolerance"), tol)],
    })
}
