//! Sampled checks of the Hilbert-metric contraction of the iteration maps,
//! and the Birkhoff ratio diagnostic.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::restrict_initializer;
use crate::error::{Error, Result};
use crate::exec::{map_range, Execution};
use crate::extended::ExtReal;
use crate::hilbert::d_h;
use crate::operator::{contract_a, HermitianOperator, SupportCutoff};
use crate::petz::PetzObjective;
use crate::random;
use crate::state::BipartiteState;

/// Additive slack on `d_out ≤ γ d_in`.
pub const CONTRACTION_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractionReport {
    /// Pairs drawn per direction.
    pub trials: usize,
    /// Contraction coefficient under test.
    pub coefficient: f64,
    /// Largest `d_H(N(x), N(x')) / d_H(x, x')` over both directions.
    pub max_ratio: f64,
    /// Pairs with `d_H(N(x), N(x')) > coefficient · d_H(x, x') + 1e-9`.
    pub violations: usize,
}

pub(crate) struct Sample {
    pub(crate) ratio: f64,
    pub(crate) violated: bool,
}

pub(crate) fn compare(before: ExtReal, after: ExtReal, gamma: f64) -> Sample {
    match (before, after) {
        (ExtReal::Finite(b), ExtReal::Finite(a)) => Sample {
            ratio: if b > 0.0 { a / b } else { 0.0 },
            violated: a > gamma * b + CONTRACTION_SLACK,
        },
        (ExtReal::Infinite, _) => Sample { ratio: 0.0, violated: false },
        (ExtReal::Finite(_), ExtReal::Infinite) => Sample { ratio: f64::INFINITY, violated: true },
    }
}

fn random_on_support(support_of: &HermitianOperator, rng: &mut ChaCha8Rng, cut: SupportCutoff) -> Result<HermitianOperator> {
    let s = random::full_rank_state(support_of.dim(), rng);
    restrict_initializer(&s, support_of, cut)
}

/// Draws `trials` pairs `σ, σ'` with the support of `ρ_A` and `trials` pairs
/// `τ, τ'` with the support of `ρ_B`, and checks both maps contract by
/// `γ = 1 - 1/α`. Trial `i` uses its own stream of `seed`, so the report is
/// the same under every [`Execution`].
pub fn contraction_probe(
    rho_ab: &BipartiteState,
    alpha: f64,
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<ContractionReport> {
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(Error::UnsupportedOrder(alpha));
    }
    let cut = SupportCutoff::default();
    let objective = PetzObjective::new(rho_ab, alpha, cut)?;
    let gamma = 1.0 - 1.0 / alpha;
    let rho_a = rho_ab.rho_a();
    let rho_b = rho_ab.rho_b();

    let samples = map_range(exec, trials, |i| -> Result<[Sample; 2]> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let s1 = random_on_support(&rho_a, &mut rng, cut)?;
        let s2 = random_on_support(&rho_a, &mut rng, cut)?;
        let t1 = random_on_support(&rho_b, &mut rng, cut)?;
        let t2 = random_on_support(&rho_b, &mut rng, cut)?;
        let fwd = compare(
            d_h(&s1, &s2, cut)?,
            d_h(&objective.minimize_over_b(&s1)?.state, &objective.minimize_over_b(&s2)?.state, cut)?,
            gamma,
        );
        let bwd = compare(
            d_h(&t1, &t2, cut)?,
            d_h(&objective.minimize_over_a(&t1)?.state, &objective.minimize_over_a(&t2)?.state, cut)?,
            gamma,
        );
        Ok([fwd, bwd])
    });

    let mut report = ContractionReport { trials, coefficient: gamma, max_ratio: 0.0, violations: 0 };
    for pair in samples {
        for s in pair? {
            report.max_ratio = report.max_ratio.max(s.ratio);
            report.violations += s.violated as usize;
        }
    }
    Ok(report)
}

fn basis_vector(d: usize, i: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); d];
    v[i] = Complex64::new(1.0, 0.0);
    v
}

/// Lower estimate of the projective diameter `δ` of `X ↦ tr_A[ρ^α (X ⊗ 1)]`
/// over pure inputs: coordinate basis vectors of `A` followed by `samples`
/// Haar-random unit vectors from a fixed seed. The estimate is a running
/// maximum, so it never decreases as `samples` grows.
pub fn delta_estimate(rho_ab: &BipartiteState, alpha: f64, samples: usize) -> Result<f64> {
    if samples < 2 {
        return Err(Error::InvalidConfig(format!("need at least 2 samples, got {samples}")));
    }
    let cut = SupportCutoff::default();
    let eig = rho_ab.op().eig()?;
    let lmin = eig.values.last().copied().unwrap_or(0.0);
    if lmin <= cut.rel_tol() * eig.lambda_max() {
        return Err(Error::NotStrictlyPositive);
    }
    let (d_a, d_b) = (rho_ab.d_a(), rho_ab.d_b());
    let rho_alpha = rho_ab.op().power_on_support(alpha, cut)?;
    let image = |v: &[Complex64]| -> Result<HermitianOperator> {
        contract_a(&rho_alpha, &HermitianOperator::pure(v)?, d_a, d_b)
    };

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let vectors = (0..d_a)
        .map(|i| basis_vector(d_a, i))
        .chain((0..samples).map(|_| random::unit_vector(d_a, &mut rng)));
    let mut seen: Vec<HermitianOperator> = Vec::new();
    let mut delta = 0.0f64;
    for v in vectors {
        let img = image(&v)?;
        for prev in &seen {
            delta = delta.max(d_h(&img, prev, cut)?.to_f64());
        }
        seen.push(img);
    }
    Ok(delta)
}

/// `tanh(δ/4)` for the sampled [`delta_estimate`]. Diagnostic only: being a
/// lower estimate, it must not be used to stop a certified run.
pub fn kappa_estimate(rho_ab: &BipartiteState, alpha: f64, samples: usize) -> Result<f64> {
    Ok((delta_estimate(rho_ab, alpha, samples)? / 4.0).tanh())
}
