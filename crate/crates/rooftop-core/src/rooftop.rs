//! Rooftop envelopes of finite families, tilted two-sheet envelopes,
//! and partial minimization in the strip variable.
//!
//! The envelope of a family is always the convexification of the
//! pointwise minimum, computed on the grid window. `partial_min`
//! collapses a 2D field over its first axis; for jointly discretely
//! convex input the result is discretely convex with no tolerance.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::field::{Axis, ScalarField};
use crate::legendre::convexify;
use crate::report::{CheckReport, CheckStatus};

/// Budget for the composition identity: both sides are the same lower
/// hull, so only rounding separates them.
pub const COMPOSE_TOL: f64 = 1e-9;

/// Budget for the midpoint concavity test of the tilted envelope in
/// the tilt variable; the inequality is exact on samples, so again
/// only rounding is admitted.
pub const SIGMA_CONCAVITY_TOL: f64 = 1e-9;

/// A nonempty list of fields on one common grid.
#[derive(Debug, Clone)]
pub struct RooftopFamily {
    members: Vec<ScalarField>,
}

impl RooftopFamily {
    pub fn new(members: Vec<ScalarField>) -> Result<RooftopFamily, Error> {
        let Some(first) = members.first() else {
            return Err(Error::InvalidParameter(String::from(
                "a rooftop family needs at least one member",
            )));
        };
        if members.iter().any(|m| !first.same_grid(m)) {
            return Err(Error::GridMismatch);
        }
        Ok(RooftopFamily { members })
    }

    pub fn members(&self) -> &[ScalarField] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Pointwise minimum over the family.
pub fn rooftop_min(fam: &RooftopFamily) -> ScalarField {
    let mut out = fam.members[0].clone();
    for m in &fam.members[1..] {
        out = out.pointwise_min(m).expect("family members share a grid");
    }
    out
}

/// The largest discretely convex field below every member:
/// `convexify(rooftop_min(fam))`.
pub fn convex_rooftop_envelope(fam: &RooftopFamily) -> Result<ScalarField, Error> {
    convexify(&rooftop_min(fam))
}

/// Envelope of the two-sheet family `{psi0, psi1 - sigma}`.
pub fn tilted_envelope(
    psi0: &ScalarField,
    psi1: &ScalarField,
    sigma: f64,
) -> Result<ScalarField, Error> {
    if !psi0.same_grid(psi1) {
        return Err(Error::GridMismatch);
    }
    if !sigma.is_finite() {
        return Err(Error::InvalidParameter(alloc::format!(
            "tilt sigma = {sigma} must be finite"
        )));
    }
    let tilted = psi1.map(|v| v - sigma)?;
    convexify(&psi0.pointwise_min(&tilted)?)
}

/// Checks the composition identity
///
/// ```text
/// P(v0, ..., vk) = P(v0, P(v1, ..., vk))
/// ```
///
/// by computing the flat envelope and the right fold of two-member
/// envelopes and reporting their sup deviation. Needs at least two
/// members.
pub fn compose_check(fam: &RooftopFamily) -> Result<CheckReport, Error> {
    let members = fam.members();
    if members.len() < 2 {
        return Err(Error::InvalidParameter(String::from(
            "composition needs at least two members",
        )));
    }
    let flat = convex_rooftop_envelope(fam)?;
    let mut folded = members[members.len() - 1].clone();
    for m in members[..members.len() - 1].iter().rev() {
        folded = convexify(&m.pointwise_min(&folded)?)?;
    }
    let mut worst = 0.0f64;
    let mut location = Vec::new();
    for (i, (&a, &b)) in flat.values().iter().zip(folded.values().iter()).enumerate() {
        let d = (a - b).abs();
        if d > worst {
            worst = d;
            location = vec![i];
        }
    }
    Ok(CheckReport {
        check: "compose",
        status: CheckStatus::Checked,
        pass: worst <= COMPOSE_TOL,
        worst_violation: worst,
        location,
        metrics: vec![
            (String::from("tolerance"), COMPOSE_TOL),
            (String::from("members"), members.len() as f64),
        ],
    })
}

/// Minimum over the first axis of a 2D field: `(min_s psi)(x)`.
/// Ties go to the lowest s-index.
pub fn partial_min(psi: &ScalarField) -> Result<ScalarField, Error> {
    if psi.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: psi.dim() });
    }
    let (n0, n1) = (psi.axes()[0].len(), psi.axes()[1].len());
    let mut out = Vec::with_capacity(n1);
    for j in 0..n1 {
        let mut best = psi.at2(0, j);
        for i in 1..n0 {
            let cand = psi.at2(i, j);
            if cand < best {
                best = cand;
            }
        }
        out.push(best);
    }
    ScalarField::new(vec![psi.axes()[1]], out)
}

/// Samples `g(sigma) = tilted_envelope(psi0, psi1, sigma)` at one probe
/// node and tests midpoint concavity in sigma:
///
/// ```text
/// g(sigma[j-1]) + g(sigma[j+1]) <= 2 g(sigma[j]) + tol
/// ```
///
/// The worst violation, its sigma-index, and the pass verdict against
/// [`SIGMA_CONCAVITY_TOL`] are reported.
pub fn sigma_concavity_check(
    psi0: &ScalarField,
    psi1: &ScalarField,
    sigma_axis: Axis,
    x_probe: usize,
) -> Result<CheckReport, Error> {
    if !psi0.same_grid(psi1) {
        return Err(Error::GridMismatch);
    }
    if x_probe >= psi0.len() {
        return Err(Error::InvalidParameter(alloc::format!(
            "probe index {x_probe} is outside the grid of {} nodes",
            psi0.len()
        )));
    }
    let mut g = Vec::with_capacity(sigma_axis.len());
    for j in 0..sigma_axis.len() {
        let env = tilted_envelope(psi0, psi1, sigma_axis.node(j))?;
        g.push(env.at(x_probe));
    }
    let mut worst = 0.0f64;
    let mut location = Vec::new();
    for j in 1..g.len() - 1 {
        let v = g[j - 1] + g[j + 1] - 2.0 * g[j];
        if v > worst {
            worst = v;
            location = vec![j];
        }
    }
    Ok(CheckReport {
        check: "sigma-concavity",
        status: CheckStatus::Checked,
        pass: worst <= SIGMA_CONCAVITY_TOL,
        worst_violation: worst,
        location,
        metrics: vec![
            (String::from("tolerance"), SIGMA_CONCAVITY_TOL),
            (String::from("sigma_nodes"), sigma_axis.len() as f64),
        ],
    })
}
