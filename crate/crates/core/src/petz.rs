//! Petz Rényi divergence and its exact partial minimizers.
//!
//! `D_α(ρ‖σ) = log tr[ρ^α σ^{1-α}] / (α - 1)` on the domain
//! `(α < 1 ∧ ρ ⊥̸ σ) ∨ ρ ≪ σ`, and `+inf` elsewhere.

use crate::error::{Error, Result};
use crate::extended::{DivergenceValue, ExtReal};
use crate::operator::{
    contract_a, contract_b, is_dominated, is_orthogonal, HermitianOperator, SupportCutoff,
};
use crate::state::BipartiteState;

/// Below this `Q_α` the divergence for `α > 1` is reported as infinite.
pub const Q_UNDERFLOW: f64 = 1e-300;

fn check_order(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::UnsupportedOrder(alpha));
    }
    Ok(())
}

fn check_order_not_one(alpha: f64) -> Result<()> {
    check_order(alpha)?;
    if alpha == 1.0 {
        return Err(Error::UnsupportedOrder(alpha));
    }
    Ok(())
}

/// `Q_α(ρ‖σ) = tr[ρ^α σ^{1-α}]` with both powers on the supports.
pub fn q_alpha(rho: &HermitianOperator, sigma: &HermitianOperator, alpha: f64, cut: SupportCutoff) -> Result<f64> {
    check_order(alpha)?;
    if rho.dim() != sigma.dim() {
        return Err(Error::DimMismatch { expected: rho.dim(), got: sigma.dim() });
    }
    let ra = rho.power_on_support(alpha, cut)?;
    let sb = match sigma.power_on_support(1.0 - alpha, cut) {
        Ok(s) => s,
        Err(Error::ZeroOperator) => return Ok(0.0),
        Err(e) => return Err(e),
    };
    Ok(ra.trace_product(&sb).max(0.0))
}

/// Whether `D_α(ρ‖σ)` is finite by the support condition.
pub fn in_domain(rho: &HermitianOperator, sigma: &HermitianOperator, alpha: f64, cut: SupportCutoff) -> Result<bool> {
    if is_dominated(rho, sigma, cut)? {
        return Ok(true);
    }
    Ok(alpha < 1.0 && !is_orthogonal(rho, sigma, cut)?)
}

fn divergence_from_q(q: f64, alpha: f64) -> DivergenceValue {
    if q <= Q_UNDERFLOW {
        return ExtReal::Infinite;
    }
    ExtReal::Finite(q.ln() / (alpha - 1.0))
}

/// Petz divergence `D_α(ρ‖σ)` for `α ∈ (0,1) ∪ (1,∞)`.
pub fn d_alpha(rho: &HermitianOperator, sigma: &HermitianOperator, alpha: f64, cut: SupportCutoff) -> Result<DivergenceValue> {
    check_order_not_one(alpha)?;
    if !in_domain(rho, sigma, alpha, cut)? {
        return Ok(ExtReal::Infinite);
    }
    Ok(divergence_from_q(q_alpha(rho, sigma, alpha, cut)?, alpha))
}

/// Outcome of an exact minimization over one tensor factor.
#[derive(Debug, Clone)]
pub struct PartialMinimum {
    /// The optimal normalized state.
    pub state: HermitianOperator,
    /// `Q_α` at the optimum, `‖tr_·[ρ^α ·^{1-α}]‖_{1/α}`.
    pub q: f64,
    /// `D_α` at the optimum, `log q / (α - 1)`.
    pub x: f64,
}

/// `D_α(ρ_AB ‖ σ_A ⊗ τ_B)` as a function of the two product factors, with
/// `ρ^α` and the marginals precomputed.
#[derive(Debug, Clone)]
pub struct PetzObjective {
    alpha: f64,
    cut: SupportCutoff,
    d_a: usize,
    d_b: usize,
    rho: HermitianOperator,
    rho_alpha: HermitianOperator,
    rho_a: HermitianOperator,
    rho_b: HermitianOperator,
}

impl PetzObjective {
    pub fn new(rho_ab: &BipartiteState, alpha: f64, cut: SupportCutoff) -> Result<Self> {
        check_order_not_one(alpha)?;
        Ok(Self {
            alpha,
            cut,
            d_a: rho_ab.d_a(),
            d_b: rho_ab.d_b(),
            rho: rho_ab.op().clone(),
            rho_alpha: rho_ab.op().power_on_support(alpha, cut)?,
            rho_a: rho_ab.rho_a(),
            rho_b: rho_ab.rho_b(),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn cut(&self) -> SupportCutoff {
        self.cut
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d_a, self.d_b)
    }

    pub fn rho_alpha(&self) -> &HermitianOperator {
        &self.rho_alpha
    }

    pub fn rho_a(&self) -> &HermitianOperator {
        &self.rho_a
    }

    pub fn rho_b(&self) -> &HermitianOperator {
        &self.rho_b
    }

    fn marginal_domain_ok(&self, marginal: &HermitianOperator, other: &HermitianOperator) -> Result<bool> {
        in_domain(marginal, other, self.alpha, self.cut)
    }

    fn finish(&self, t: HermitianOperator) -> Result<PartialMinimum> {
        let e = t.eig()?;
        let inv = 1.0 / self.alpha;
        let mask = e.support_mask(self.cut);
        let sum: f64 = e
            .values
            .iter()
            .zip(&mask)
            .filter(|(_, &s)| s)
            .map(|(&l, _)| l.powf(inv))
            .sum();
        if !(sum > 0.0) {
            return Err(Error::DomainViolation("partial trace vanished"));
        }
        let state = e.map_on_support(self.cut, |l| l.powf(inv) / sum);
        let q = sum.powf(self.alpha);
        Ok(PartialMinimum {
            state,
            q,
            x: q.ln() / (self.alpha - 1.0),
        })
    }

    /// `tr_A[ρ^α (σ_A^{1-α} ⊗ 1)]`.
    pub fn weighted_marginal_b(&self, sigma_a: &HermitianOperator) -> Result<HermitianOperator> {
        let s = sigma_a.power_on_support(1.0 - self.alpha, self.cut)?;
        contract_a(&self.rho_alpha, &s, self.d_a, self.d_b)
    }

    /// `tr_B[ρ^α (1 ⊗ τ_B^{1-α})]`.
    pub fn weighted_marginal_a(&self, tau_b: &HermitianOperator) -> Result<HermitianOperator> {
        let t = tau_b.power_on_support(1.0 - self.alpha, self.cut)?;
        contract_b(&self.rho_alpha, &t, self.d_a, self.d_b)
    }

    /// Unique minimizer over `τ_B` for fixed `σ_A`, with the optimal value.
    pub fn minimize_over_b(&self, sigma_a: &HermitianOperator) -> Result<PartialMinimum> {
        if sigma_a.dim() != self.d_a {
            return Err(Error::DimMismatch { expected: self.d_a, got: sigma_a.dim() });
        }
        if !self.marginal_domain_ok(&self.rho_a, sigma_a)? {
            return Err(Error::DomainViolation("rho_A versus sigma_A"));
        }
        self.finish(self.weighted_marginal_b(sigma_a)?)
    }

    /// Unique minimizer over `σ_A` for fixed `τ_B`, with the optimal value.
    pub fn minimize_over_a(&self, tau_b: &HermitianOperator) -> Result<PartialMinimum> {
        if tau_b.dim() != self.d_b {
            return Err(Error::DimMismatch { expected: self.d_b, got: tau_b.dim() });
        }
        if !self.marginal_domain_ok(&self.rho_b, tau_b)? {
            return Err(Error::DomainViolation("rho_B versus tau_B"));
        }
        self.finish(self.weighted_marginal_a(tau_b)?)
    }

    /// `Q_α(ρ‖σ_A⊗τ_B)` and `D_α(ρ‖σ_A⊗τ_B)` without forming `(σ⊗τ)^{1-α}`
    /// by eigendecomposition of the full product.
    pub fn value(&self, sigma_a: &HermitianOperator, tau_b: &HermitianOperator) -> Result<(f64, DivergenceValue)> {
        let (da, db) = (self.d_a, self.d_b);
        if sigma_a.dim() != da || tau_b.dim() != db {
            return Err(Error::DimMismatch { expected: da * db, got: sigma_a.dim() * tau_b.dim() });
        }
        let ps = sigma_a.support_projector(self.cut)?;
        let pt = tau_b.support_projector(self.cut)?;
        // tr[ρ (P_σ ⊗ P_τ)] decides both dominance and orthogonality for PSD ρ.
        let inside = contract_a(&self.rho, &ps, da, db)?.trace_product(&pt);
        let total = self.rho.trace();
        let tol = self.cut.relation_tol() * (da * db) as f64 * total;
        let dominated = total - inside <= tol;
        let orthogonal = inside <= tol;
        if !(dominated || (self.alpha < 1.0 && !orthogonal)) {
            return Ok((if self.alpha < 1.0 { 0.0 } else { f64::INFINITY }, ExtReal::Infinite));
        }
        let s = sigma_a.power_on_support(1.0 - self.alpha, self.cut)?;
        let t = tau_b.power_on_support(1.0 - self.alpha, self.cut)?;
        let q = contract_a(&self.rho_alpha, &s, da, db)?.trace_product(&t).max(0.0);
        Ok((q, divergence_from_q(q, self.alpha)))
    }
}

/// The optimal `τ̂_B` for fixed `σ_A`.
pub fn partial_min_tau(
    rho_ab: &BipartiteState,
    sigma_a: &HermitianOperator,
    alpha: f64,
    cut: SupportCutoff,
) -> Result<HermitianOperator> {
    Ok(PetzObjective::new(rho_ab, alpha, cut)?.minimize_over_b(sigma_a)?.state)
}

/// `|D(ρ‖σ⊗τ) - D(ρ‖σ⊗τ̂) - D(τ̂‖τ)|`, every term by direct evaluation.
pub fn sibson_residual(
    rho_ab: &BipartiteState,
    sigma_a: &HermitianOperator,
    tau_b: &HermitianOperator,
    alpha: f64,
    cut: SupportCutoff,
) -> Result<f64> {
    check_order_not_one(alpha)?;
    if is_orthogonal(&rho_ab.rho_a(), sigma_a, cut)? {
        return Err(Error::DomainViolation("rho_A orthogonal to sigma_A"));
    }
    let tau_hat = partial_min_tau(rho_ab, sigma_a, alpha, cut)?;
    let lhs = d_alpha(rho_ab.op(), &sigma_a.kron(tau_b), alpha, cut)?;
    let first = d_alpha(rho_ab.op(), &sigma_a.kron(&tau_hat), alpha, cut)?;
    let second = d_alpha(&tau_hat, tau_b, alpha, cut)?;
    Ok(match (lhs, first, second) {
        (ExtReal::Finite(l), ExtReal::Finite(f), ExtReal::Finite(s)) => (l - f - s).abs(),
        (ExtReal::Infinite, _, ExtReal::Infinite) | (ExtReal::Infinite, ExtReal::Infinite, _) => 0.0,
        _ => f64::INFINITY,
    })
}
