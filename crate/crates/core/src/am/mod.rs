//! Alternating minimization of `D_α(ρ_AB ‖ σ_A ⊗ τ_B)` with certified stopping.
//!
//! Each full iteration applies `N_{B→A}` then `N_{A→B}`:
//!
//! ```text
//! N_{A→B}(σ) = (tr_A[ρ^α σ^{1-α}])^{1/α} / tr[(tr_A[ρ^α σ^{1-α}])^{1/α}]
//! ```
//!
//! and symmetrically for `N_{B→A}`. For `α ∈ (1, 2]` both maps contract
//! Hilbert's projective metric by `γ = 1 - 1/α`, which yields the linear
//! certificate of [`algorithm1`]. For `α ∈ (1/2, 1)` the gap is bounded by
//! `c0 · sqrt(x_{n-1} - x_n)`, the certificate of [`algorithm2`].

pub(crate) mod constants;
pub mod driver;
mod probe;

pub use constants::{linear_constants, sublinear_constants, LinearConstants, SublinearConstants};
pub use driver::{
    linear_epsilon, ConvergenceTrace, IterationRecord, Snapshot, StoppingRule, Termination,
};
pub use probe::{contraction_probe, delta_estimate, kappa_estimate, ContractionReport, CONTRACTION_SLACK};
pub(crate) use probe::compare;

use crate::error::{Error, Result};
use crate::operator::{HermitianOperator, SupportCutoff};
use crate::petz::PetzObjective;
use crate::state::BipartiteState;

use driver::{Alternation, Step};

/// Trace of a quantum run: iterates are operators on `A` and `B`.
pub type QuantumTrace = ConvergenceTrace<HermitianOperator, HermitianOperator>;

/// Starting point `σ_A^{(0)}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Initializer {
    /// `σ_A^{(0)} = ρ_A`.
    #[default]
    MarginalRhoA,
    /// `σ_A^{(0)} = 1_A / d_A`.
    Uniform,
    Explicit(HermitianOperator),
}

impl Initializer {
    pub fn resolve(&self, rho_ab: &BipartiteState) -> Result<HermitianOperator> {
        match self {
            Initializer::MarginalRhoA => Ok(rho_ab.rho_a()),
            Initializer::Uniform => Ok(HermitianOperator::maximally_mixed(rho_ab.d_a())),
            Initializer::Explicit(s) => {
                if s.dim() != rho_ab.d_a() {
                    return Err(Error::DimMismatch { expected: rho_ab.d_a(), got: s.dim() });
                }
                Ok(s.clone())
            }
        }
    }
}

/// Run configuration shared by both certified algorithms.
#[derive(Debug, Clone, PartialEq)]
pub struct AmConfig {
    pub alpha: f64,
    pub eps0: f64,
    pub init: Initializer,
    /// Cap on full iterations; reaching it yields an uncertified trace.
    pub max_iter: usize,
    pub cut: SupportCutoff,
    /// Keep a snapshot of every iterate rather than only the first and last.
    pub record_states: bool,
}

impl AmConfig {
    pub const DEFAULT_MAX_ITER: usize = 100_000;

    pub fn new(alpha: f64, eps0: f64) -> Self {
        Self {
            alpha,
            eps0,
            init: Initializer::default(),
            max_iter: Self::DEFAULT_MAX_ITER,
            cut: SupportCutoff::default(),
            record_states: false,
        }
    }

    pub fn with_init(mut self, init: Initializer) -> Self {
        self.init = init;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_cut(mut self, cut: SupportCutoff) -> Self {
        self.cut = cut;
        self
    }

    pub fn recording_states(mut self, yes: bool) -> Self {
        self.record_states = yes;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.eps0 > 0.0 && self.eps0.is_finite()) {
            return Err(Error::InvalidConfig(format!("eps0 must be positive, got {}", self.eps0)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be positive".into()));
        }
        Ok(())
    }
}

/// The quantum pair of partial minimizers.
pub struct QuantumAlternation {
    objective: PetzObjective,
}

impl QuantumAlternation {
    pub fn new(rho_ab: &BipartiteState, alpha: f64, cut: SupportCutoff) -> Result<Self> {
        Ok(Self { objective: PetzObjective::new(rho_ab, alpha, cut)? })
    }

    pub fn objective(&self) -> &PetzObjective {
        &self.objective
    }
}

impl Alternation for QuantumAlternation {
    type A = HermitianOperator;
    type B = HermitianOperator;

    fn alpha(&self) -> f64 {
        self.objective.alpha()
    }

    fn forward(&self, sigma_a: &HermitianOperator) -> Result<Step<HermitianOperator>> {
        let pm = self.objective.minimize_over_b(sigma_a)?;
        Ok(Step { state: pm.state, x: pm.x, q: pm.q })
    }

    fn backward(&self, tau_b: &HermitianOperator) -> Result<HermitianOperator> {
        Ok(self.objective.minimize_over_a(tau_b)?.state)
    }
}

/// `N_{A→B}(σ_A)`.
pub fn n_a_to_b(rho_ab: &BipartiteState, sigma_a: &HermitianOperator, alpha: f64, cut: SupportCutoff) -> Result<HermitianOperator> {
    Ok(PetzObjective::new(rho_ab, alpha, cut)?.minimize_over_b(sigma_a)?.state)
}

/// `N_{B→A}(τ_B)`.
pub fn n_b_to_a(rho_ab: &BipartiteState, tau_b: &HermitianOperator, alpha: f64, cut: SupportCutoff) -> Result<HermitianOperator> {
    Ok(PetzObjective::new(rho_ab, alpha, cut)?.minimize_over_a(tau_b)?.state)
}

/// `ρ_A^0 σ_0 ρ_A^0 / tr[ρ_A^0 σ_0]`, the initializer compressed onto `supp(ρ_A)`.
pub fn restrict_initializer(sigma0: &HermitianOperator, rho_a: &HermitianOperator, cut: SupportCutoff) -> Result<HermitianOperator> {
    if sigma0.dim() != rho_a.dim() {
        return Err(Error::DimMismatch { expected: rho_a.dim(), got: sigma0.dim() });
    }
    let p = rho_a.support_projector(cut)?;
    let overlap = p.trace_product(sigma0);
    if overlap <= cut.relation_tol() * sigma0.trace().abs() {
        return Err(Error::OrthogonalInitializer);
    }
    Ok(sigma0.sandwich(&p).scale(1.0 / overlap))
}

fn check_linear_order(alpha: f64) -> Result<()> {
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(Error::UnsupportedOrder(alpha));
    }
    Ok(())
}

fn check_sublinear_order(alpha: f64) -> Result<()> {
    if !(alpha > 0.5 && alpha < 1.0) {
        return Err(Error::UnsupportedOrder(alpha));
    }
    Ok(())
}

/// Certified alternating minimization for `α ∈ (1, 2]`; the returned
/// `final_x` is within `eps0` of the infimum when the run is certified.
pub fn algorithm1(rho_ab: &BipartiteState, config: &AmConfig) -> Result<QuantumTrace> {
    check_linear_order(config.alpha)?;
    config.validate()?;
    let sigma0 = config.init.resolve(rho_ab)?;
    let consts = linear_constants(rho_ab, &sigma0, config.alpha, config.cut)?;
    let problem = QuantumAlternation::new(rho_ab, config.alpha, config.cut)?;
    driver::run(
        &problem,
        consts.sigma0_restricted,
        StoppingRule::Linear { c0: consts.c0 },
        config.eps0,
        config.max_iter,
        config.record_states,
    )
}

/// Certified alternating minimization for `α ∈ (1/2, 1)`.
pub fn algorithm2(rho_ab: &BipartiteState, config: &AmConfig) -> Result<QuantumTrace> {
    check_sublinear_order(config.alpha)?;
    config.validate()?;
    let sigma0 = config.init.resolve(rho_ab)?;
    let consts = sublinear_constants(rho_ab, &sigma0, config.alpha, config.cut)?;
    let problem = QuantumAlternation::new(rho_ab, config.alpha, config.cut)?;
    let start = restrict_initializer(&sigma0, &rho_ab.rho_a(), config.cut)?;
    driver::run(
        &problem,
        start,
        StoppingRule::Sublinear { c0: consts.c0 },
        config.eps0,
        config.max_iter,
        config.record_states,
    )
}

/// Dispatches to [`algorithm1`] or [`algorithm2`] by the range of `α`.
pub fn certified(rho_ab: &BipartiteState, config: &AmConfig) -> Result<QuantumTrace> {
    if config.alpha > 1.0 {
        algorithm1(rho_ab, config)
    } else {
        algorithm2(rho_ab, config)
    }
}

/// Plain iteration without a certificate for any `α ∈ (0,1) ∪ (1,∞)`.
/// Stops when consecutive objective values differ by less than `eps0` or at
/// `max_iter`.
pub fn run_uncertified(rho_ab: &BipartiteState, config: &AmConfig) -> Result<QuantumTrace> {
    config.validate()?;
    let sigma0 = config.init.resolve(rho_ab)?;
    let problem = QuantumAlternation::new(rho_ab, config.alpha, config.cut)?;
    let start = restrict_initializer(&sigma0, &rho_ab.rho_a(), config.cut)?;
    driver::run(
        &problem,
        start,
        StoppingRule::Uncertified { stall_tol: config.eps0 },
        config.eps0,
        config.max_iter,
        config.record_states,
    )
}

/// Exactly `iterations` full iterations from the configured initializer,
/// used as a long-run proxy for the limit.
pub fn run_fixed(rho_ab: &BipartiteState, config: &AmConfig, iterations: usize) -> Result<QuantumTrace> {
    let sigma0 = config.init.resolve(rho_ab)?;
    let problem = QuantumAlternation::new(rho_ab, config.alpha, config.cut)?;
    let start = restrict_initializer(&sigma0, &rho_ab.rho_a(), config.cut)?;
    driver::run(&problem, start, StoppingRule::Fixed, f64::INFINITY, iterations, config.record_states)
}
