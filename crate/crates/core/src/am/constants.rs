//! Initializer-only constants behind the two certificates.

use serde::Serialize;

use super::restrict_initializer;
use crate::error::{Error, Result};
use crate::operator::{HermitianOperator, Subsystem, SupportCutoff};
use crate::petz::PetzObjective;
use crate::state::BipartiteState;

/// Constants for `α ∈ (1, 2]`.
///
/// `c0` bounds `d_H(σ̃_0, σ̂)` for any minimizer `σ̂`. `c_a` and `c_b` are
/// floors on the smallest nonzero eigenvalue of every later iterate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearConstants {
    pub gamma: f64,
    pub c0: f64,
    pub lambda_a: f64,
    pub lambda_b: f64,
    pub q0: f64,
    pub c_a: f64,
    pub c_b: f64,
    #[serde(skip)]
    pub sigma0_restricted: HermitianOperator,
}

/// Constants for `α ∈ (1/2, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SublinearConstants {
    pub lambda_a: f64,
    pub lambda_b: f64,
    pub lambda_a0: f64,
    pub c0: f64,
    pub c_a: f64,
    pub c_b: f64,
}

fn marginal_floors(rho_ab: &BipartiteState, alpha: f64, cut: SupportCutoff) -> Result<(f64, f64)> {
    let (d_a, d_b) = (rho_ab.d_a(), rho_ab.d_b());
    let ra = rho_ab.op().power_on_support(alpha, cut)?;
    let lambda_a = ra.partial_trace(d_a, d_b, Subsystem::B)?.min_nonzero_eig(cut)?;
    let lambda_b = ra.partial_trace(d_a, d_b, Subsystem::A)?.min_nonzero_eig(cut)?;
    Ok((lambda_a, lambda_b))
}

pub fn linear_constants(
    rho_ab: &BipartiteState,
    sigma0: &HermitianOperator,
    alpha: f64,
    cut: SupportCutoff,
) -> Result<LinearConstants> {
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(Error::UnsupportedOrder(alpha));
    }
    let tilde = restrict_initializer(sigma0, &rho_ab.rho_a(), cut)?;
    let (lambda_a, lambda_b) = marginal_floors(rho_ab, alpha, cut)?;
    let objective = PetzObjective::new(rho_ab, alpha, cut)?;
    let q0 = objective.minimize_over_b(&tilde)?.q;
    let c_a = (lambda_a / q0).powf(1.0 / alpha);
    let c_b = (lambda_b / q0).powf(1.0 / alpha);
    let c0 = -2.0 * tilde.min_nonzero_eig(cut)?.min(c_a).ln();
    Ok(LinearConstants {
        gamma: 1.0 - 1.0 / alpha,
        c0,
        lambda_a,
        lambda_b,
        q0,
        c_a,
        c_b,
        sigma0_restricted: tilde,
    })
}

pub fn sublinear_constants(
    rho_ab: &BipartiteState,
    sigma0: &HermitianOperator,
    alpha: f64,
    cut: SupportCutoff,
) -> Result<SublinearConstants> {
    if !(alpha > 0.5 && alpha < 1.0) {
        return Err(Error::UnsupportedOrder(alpha));
    }
    let tilde = restrict_initializer(sigma0, &rho_ab.rho_a(), cut)?;
    let (lambda_a, lambda_b) = marginal_floors(rho_ab, alpha, cut)?;
    let lambda_a0 = tilde.min_nonzero_eig(cut)?;
    Ok(sublinear_from_spectra(alpha, lambda_a, lambda_b, lambda_a0))
}

/// The sublinear constants as a function of the three spectral minima;
/// shared with the classical engine.
pub(crate) fn sublinear_from_spectra(alpha: f64, lambda_a: f64, lambda_b: f64, lambda_a0: f64) -> SublinearConstants {
    let k = 1.0 - 2.0 * alpha;
    let second = lambda_a.powf(alpha * (1.0 - alpha) / k) * lambda_b.powf(alpha * alpha / k);
    let c0 = 2.0 * 5f64.sqrt() * lambda_b.recip().max(second) * lambda_a0.powf(alpha - 1.0);

    let m = 2.0 * alpha - 1.0;
    let c_a = 1f64.min(lambda_a.powf(alpha / m) * lambda_b.powf((1.0 - alpha) / m)) * lambda_a0;
    let c_b = 1f64.min(lambda_a.powf((1.0 - alpha) / m) * lambda_b.powf((1.0 - alpha).powi(2) / (m * alpha)))
        * lambda_b.powf(1.0 / alpha)
        * lambda_a0.powf((1.0 - alpha) / alpha);
    SublinearConstants { lambda_a, lambda_b, lambda_a0, c0, c_a, c_b }
}
