//! Doubly minimized Petz Rényi mutual information
//!
//! ```text
//! I_α(A:B) = inf_{σ_A, τ_B} D_α(ρ_AB ‖ σ_A ⊗ τ_B)
//! ```
//!
//! computed by alternating minimization with certified stopping rules for
//! `α ∈ (1/2, 1) ∪ (1, 2]`, together with the classical (PMF) special case
//! and brute-force oracles for small instances.
//!
//! ```
//! use prmi::{am, BipartiteState};
//!
//! let rho = BipartiteState::maximally_correlated(2);
//! let trace = am::algorithm1(&rho, &am::AmConfig::new(2.0, 1e-6)).unwrap();
//! assert!(trace.certified());
//! assert!((trace.final_x - 2f64.ln()).abs() < 1e-6);
//! ```

pub mod am;
pub mod classical;
mod error;
pub mod exec;
mod extended;
pub mod hilbert;
pub mod operator;
pub mod oracle;
pub mod petz;
pub mod random;
mod state;

pub use error::{Error, Result};
pub use exec::Execution;
pub use extended::{DivergenceValue, ExtReal, ProjectiveDistance};
pub use operator::{HermitianOperator, SupportCutoff, SupportRelation};
pub use state::BipartiteState;
