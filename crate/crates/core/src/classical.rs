//! Classical specialization: joint PMFs, the Rényi divergence, and the
//! iteration maps
//!
//! ```text
//! N_{X→Y}(Q)(y) ∝ (Σ_x P(x,y)^α Q(x)^{1-α})^{1/α}
//! ```
//!
//! computed with vector arithmetic. On the diagonal embedding
//! [`cc_embed`] every quantity coincides with its quantum counterpart.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::am::constants::sublinear_from_spectra;
use crate::am::driver::{self, Alternation, ConvergenceTrace, Step, StoppingRule};
use crate::am::{compare, ContractionReport, SublinearConstants};
use crate::error::{Error, Result};
use crate::exec::{map_range, Execution};
use crate::extended::{DivergenceValue, ExtReal};
use crate::hilbert::d_h_vec;
use crate::operator::{HermitianOperator, SupportCutoff};
use crate::petz::Q_UNDERFLOW;
use crate::random;
use crate::state::BipartiteState;

/// Tolerance on the total mass of a PMF.
pub const SUM_TOL: f64 = 1e-12;

fn validate_weights(w: &[f64]) -> Result<()> {
    if w.is_empty() {
        return Err(Error::InvalidPmf("empty"));
    }
    if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::InvalidPmf("negative or non-finite entry"));
    }
    if (w.iter().sum::<f64>() - 1.0).abs() > SUM_TOL {
        return Err(Error::InvalidPmf("sum"));
    }
    Ok(())
}

/// A probability mass function on `{0, ..., n-1}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pmf {
    weights: Vec<f64>,
}

impl Pmf {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        validate_weights(&weights)?;
        Ok(Self { weights })
    }

    pub fn uniform(n: usize) -> Self {
        Self { weights: vec![1.0 / n as f64; n] }
    }

    /// Normalizes a nonnegative vector with positive mass.
    pub fn from_unnormalized(w: Vec<f64>) -> Result<Self> {
        let s: f64 = w.iter().sum();
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::ZeroOperator);
        }
        Self::new(w.into_iter().map(|x| x / s).collect())
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn min_nonzero(&self) -> f64 {
        min_positive(&self.weights)
    }

    /// Diagonal density matrix with these weights.
    pub fn to_operator(&self) -> HermitianOperator {
        HermitianOperator::from_real_diagonal(&self.weights)
    }
}

fn min_positive(v: &[f64]) -> f64 {
    v.iter().copied().filter(|&x| x > 0.0).fold(f64::INFINITY, f64::min)
}

/// A joint PMF `P_XY`, stored row-major with `y` fastest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointPmf {
    nx: usize,
    ny: usize,
    weights: Vec<f64>,
}

impl JointPmf {
    pub fn new(nx: usize, ny: usize, weights: Vec<f64>) -> Result<Self> {
        if nx == 0 || ny == 0 || weights.len() != nx * ny {
            return Err(Error::DimMismatch { expected: nx * ny, got: weights.len() });
        }
        validate_weights(&weights)?;
        Ok(Self { nx, ny, weights })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let nx = rows.len();
        let ny = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != ny) {
            return Err(Error::DimMismatch { expected: ny, got: bad.len() });
        }
        Self::new(nx, ny, rows.concat())
    }

    pub fn product(p_x: &Pmf, p_y: &Pmf) -> Self {
        let weights = p_x
            .weights
            .iter()
            .flat_map(|&a| p_y.weights.iter().map(move |&b| a * b))
            .collect();
        Self { nx: p_x.len(), ny: p_y.len(), weights }
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.weights[x * self.ny + y]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn marginal_x(&self) -> Pmf {
        Pmf { weights: self.weights.chunks(self.ny).map(|r| r.iter().sum()).collect() }
    }

    pub fn marginal_y(&self) -> Pmf {
        let mut w = vec![0.0; self.ny];
        for row in self.weights.chunks(self.ny) {
            for (acc, v) in w.iter_mut().zip(row) {
                *acc += v;
            }
        }
        Pmf { weights: w }
    }

    /// `P(y, x)`.
    pub fn transposed(&self) -> Self {
        let mut w = Vec::with_capacity(self.weights.len());
        for y in 0..self.ny {
            for x in 0..self.nx {
                w.push(self.get(x, y));
            }
        }
        Self { nx: self.ny, ny: self.nx, weights: w }
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.weights.iter().all(|&w| w > 0.0)
    }
}

/// `D_α(P‖Q) = log Σ_{supp P} P^α Q^{1-α} / (α - 1)`, with `+inf` when
/// `α > 1` and `P ≪̸ Q`, or `α < 1` and `P ⊥ Q`.
pub fn d_alpha_classical(p: &[f64], q: &[f64], alpha: f64) -> Result<DivergenceValue> {
    if !(alpha.is_finite() && alpha > 0.0) || alpha == 1.0 {
        return Err(Error::UnsupportedOrder(alpha));
    }
    if p.len() != q.len() {
        return Err(Error::DimMismatch { expected: p.len(), got: q.len() });
    }
    let mut s = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        if a <= 0.0 {
            continue;
        }
        if b <= 0.0 {
            if alpha > 1.0 {
                return Ok(ExtReal::Infinite);
            }
            continue;
        }
        s += a.powf(alpha) * b.powf(1.0 - alpha);
    }
    if s <= Q_UNDERFLOW {
        return Ok(ExtReal::Infinite);
    }
    Ok(ExtReal::Finite(s.ln() / (alpha - 1.0)))
}

/// `D_α(P_XY ‖ Q_X R_Y)`.
pub fn d_alpha_joint(p: &JointPmf, q_x: &Pmf, r_y: &Pmf, alpha: f64) -> Result<DivergenceValue> {
    if q_x.len() != p.nx || r_y.len() != p.ny {
        return Err(Error::DimMismatch { expected: p.nx * p.ny, got: q_x.len() * r_y.len() });
    }
    d_alpha_classical(&p.weights, JointPmf::product(q_x, r_y).weights(), alpha)
}

/// Exact partial minimizers for a fixed `P_XY` and `α`.
#[derive(Debug, Clone)]
pub struct ClassicalObjective {
    alpha: f64,
    p: JointPmf,
    /// `P^α`, row-major like `p`.
    p_alpha: Vec<f64>,
    p_alpha_t: Vec<f64>,
    p_x: Pmf,
    p_y: Pmf,
}

/// Optimal factor with the objective value, as in the quantum engine.
#[derive(Debug, Clone)]
pub struct ClassicalPartialMinimum {
    pub state: Pmf,
    pub q: f64,
    pub x: f64,
}

impl ClassicalObjective {
    pub fn new(p: &JointPmf, alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) || alpha == 1.0 {
            return Err(Error::UnsupportedOrder(alpha));
        }
        let pa = |w: &[f64]| w.iter().map(|&v| if v > 0.0 { v.powf(alpha) } else { 0.0 }).collect();
        let t = p.transposed();
        Ok(Self {
            alpha,
            p_alpha: pa(&p.weights),
            p_alpha_t: pa(&t.weights),
            p_x: p.marginal_x(),
            p_y: p.marginal_y(),
            p: p.clone(),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn pmf(&self) -> &JointPmf {
        &self.p
    }

    /// `Σ_y P(x,y)^α` and `Σ_x P(x,y)^α`.
    pub fn alpha_marginals(&self) -> (Vec<f64>, Vec<f64>) {
        (
            self.p_alpha.chunks(self.p.ny).map(|r| r.iter().sum()).collect(),
            self.p_alpha_t.chunks(self.p.nx).map(|r| r.iter().sum()).collect(),
        )
    }

    fn minimize(&self, p_alpha_t: &[f64], inner: usize, marginal: &Pmf, given: &Pmf) -> Result<ClassicalPartialMinimum> {
        if given.len() != inner {
            return Err(Error::DimMismatch { expected: inner, got: given.len() });
        }
        let alpha = self.alpha;
        let dominated = marginal.weights.iter().zip(&given.weights).all(|(&m, &g)| m <= 0.0 || g > 0.0);
        let overlap = marginal.weights.iter().zip(&given.weights).any(|(&m, &g)| m > 0.0 && g > 0.0);
        if !(dominated || (alpha < 1.0 && overlap)) {
            return Err(Error::DomainViolation("initial factor does not cover the marginal"));
        }
        let g: Vec<f64> = given.weights.iter().map(|&v| if v > 0.0 { v.powf(1.0 - alpha) } else { 0.0 }).collect();
        let t: Vec<f64> = p_alpha_t
            .chunks(inner)
            .map(|row| row.iter().zip(&g).map(|(a, b)| a * b).sum())
            .collect();
        let powered: Vec<f64> = t.iter().map(|&v| if v > 0.0 { v.powf(1.0 / alpha) } else { 0.0 }).collect();
        let norm: f64 = powered.iter().sum();
        if !(norm > 0.0) {
            return Err(Error::DomainViolation("weighted marginal vanishes"));
        }
        let q = norm.powf(alpha);
        Ok(ClassicalPartialMinimum {
            state: Pmf { weights: powered.into_iter().map(|v| v / norm).collect() },
            q,
            x: q.ln() / (alpha - 1.0),
        })
    }

    /// `N_{X→Y}(Q)` with the objective at `(Q, N_{X→Y}(Q))`.
    pub fn minimize_over_y(&self, q_x: &Pmf) -> Result<ClassicalPartialMinimum> {
        self.minimize(&self.p_alpha_t, self.p.nx, &self.p_x, q_x)
    }

    /// `N_{Y→X}(R)`.
    pub fn minimize_over_x(&self, r_y: &Pmf) -> Result<ClassicalPartialMinimum> {
        self.minimize(&self.p_alpha, self.p.ny, &self.p_y, r_y)
    }
}

pub fn n_x_to_y(p: &JointPmf, q_x: &Pmf, alpha: f64) -> Result<Pmf> {
    Ok(ClassicalObjective::new(p, alpha)?.minimize_over_y(q_x)?.state)
}

pub fn n_y_to_x(p: &JointPmf, r_y: &Pmf, alpha: f64) -> Result<Pmf> {
    Ok(ClassicalObjective::new(p, alpha)?.minimize_over_x(r_y)?.state)
}

/// Diagonal state with `⟨xy|ρ|xy⟩ = P(x, y)`.
pub fn cc_embed(p: &JointPmf) -> BipartiteState {
    let op = HermitianOperator::from_real_diagonal(&p.weights);
    BipartiteState::new(op, p.nx, p.ny).expect("a PMF is a valid diagonal state")
}

impl Alternation for ClassicalObjective {
    type A = Pmf;
    type B = Pmf;

    fn alpha(&self) -> f64 {
        self.alpha
    }

    fn forward(&self, q_x: &Pmf) -> Result<Step<Pmf>> {
        let m = self.minimize_over_y(q_x)?;
        Ok(Step { state: m.state, x: m.x, q: m.q })
    }

    fn backward(&self, r_y: &Pmf) -> Result<Pmf> {
        Ok(self.minimize_over_x(r_y)?.state)
    }
}

pub type ClassicalTrace = ConvergenceTrace<Pmf, Pmf>;

/// Starting point `Q_X^{(0)}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum ClassicalInit {
    #[default]
    MarginalPx,
    Uniform,
    Explicit(Pmf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalConfig {
    pub alpha: f64,
    pub eps0: f64,
    pub init: ClassicalInit,
    pub max_iter: usize,
    pub record_states: bool,
}

impl ClassicalConfig {
    pub fn new(alpha: f64, eps0: f64) -> Self {
        Self {
            alpha,
            eps0,
            init: ClassicalInit::default(),
            max_iter: crate::am::AmConfig::DEFAULT_MAX_ITER,
            record_states: false,
        }
    }

    pub fn with_init(mut self, init: ClassicalInit) -> Self {
        self.init = init;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn recording_states(mut self, yes: bool) -> Self {
        self.record_states = yes;
        self
    }
}

/// `Q_0` compressed onto `supp(P_X)` and renormalized.
pub fn restrict_pmf(q0: &Pmf, p_x: &Pmf) -> Result<Pmf> {
    if q0.len() != p_x.len() {
        return Err(Error::DimMismatch { expected: p_x.len(), got: q0.len() });
    }
    let w: Vec<f64> = q0.weights.iter().zip(&p_x.weights).map(|(&q, &p)| if p > 0.0 { q } else { 0.0 }).collect();
    let s: f64 = w.iter().sum();
    if !(s > 0.0) {
        return Err(Error::OrthogonalInitializer);
    }
    Ok(Pmf { weights: w.into_iter().map(|v| v / s).collect() })
}

fn resolve_init(p: &JointPmf, init: &ClassicalInit) -> Result<Pmf> {
    let q0 = match init {
        ClassicalInit::MarginalPx => p.marginal_x(),
        ClassicalInit::Uniform => Pmf::uniform(p.nx),
        ClassicalInit::Explicit(q) => q.clone(),
    };
    restrict_pmf(&q0, &p.marginal_x())
}

/// Classical counterpart of the linear constants for `α > 1`:
/// `c0 = -2 log min{min Q̃_0, (λ_X / q_0)^{1/α}}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalLinearConstants {
    pub gamma: f64,
    pub c0: f64,
    pub lambda_x: f64,
    pub q0: f64,
    pub c_x: f64,
}

pub fn classical_linear_constants(p: &JointPmf, q0: &Pmf, alpha: f64) -> Result<ClassicalLinearConstants> {
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::UnsupportedOrder(alpha));
    }
    let obj = ClassicalObjective::new(p, alpha)?;
    let tilde = restrict_pmf(q0, &p.marginal_x())?;
    let lambda_x = min_positive(&obj.alpha_marginals().0);
    let q = obj.minimize_over_y(&tilde)?.q;
    let c_x = (lambda_x / q).powf(1.0 / alpha);
    Ok(ClassicalLinearConstants {
        gamma: 1.0 - 1.0 / alpha,
        c0: -2.0 * tilde.min_nonzero().min(c_x).ln(),
        lambda_x,
        q0: q,
        c_x,
    })
}

/// The sublinear constants computed from the PMF; equal to the quantum
/// constants of the embedded state.
pub fn classical_sublinear_constants(p: &JointPmf, q0: &Pmf, alpha: f64) -> Result<SublinearConstants> {
    if !(alpha > 0.5 && alpha < 1.0) {
        return Err(Error::UnsupportedOrder(alpha));
    }
    let obj = ClassicalObjective::new(p, alpha)?;
    let tilde = restrict_pmf(q0, &p.marginal_x())?;
    let (mx, my) = obj.alpha_marginals();
    Ok(sublinear_from_spectra(alpha, min_positive(&mx), min_positive(&my), tilde.min_nonzero()))
}

/// Certified classical alternating minimization for `α ∈ (1/2, 1) ∪ (1, ∞)`.
pub fn algorithm_classical(p: &JointPmf, config: &ClassicalConfig) -> Result<ClassicalTrace> {
    let alpha = config.alpha;
    if !(config.eps0 > 0.0 && config.eps0.is_finite()) {
        return Err(Error::InvalidConfig(format!("eps0 must be positive, got {}", config.eps0)));
    }
    let start = resolve_init(p, &config.init)?;
    let rule = if alpha > 1.0 && alpha.is_finite() {
        StoppingRule::Linear { c0: classical_linear_constants(p, &start, alpha)?.c0 }
    } else if alpha > 0.5 && alpha < 1.0 {
        StoppingRule::Sublinear { c0: classical_sublinear_constants(p, &start, alpha)?.c0 }
    } else {
        return Err(Error::UnsupportedOrder(alpha));
    };
    let obj = ClassicalObjective::new(p, alpha)?;
    driver::run(&obj, start, rule, config.eps0, config.max_iter, config.record_states)
}

/// Iteration without a certificate, for any order but 1.
pub fn run_uncertified_classical(p: &JointPmf, config: &ClassicalConfig) -> Result<ClassicalTrace> {
    let obj = ClassicalObjective::new(p, config.alpha)?;
    let start = resolve_init(p, &config.init)?;
    driver::run(
        &obj,
        start,
        StoppingRule::Uncertified { stall_tol: config.eps0 },
        config.eps0,
        config.max_iter,
        config.record_states,
    )
}

pub fn run_fixed_classical(p: &JointPmf, config: &ClassicalConfig, iterations: usize) -> Result<ClassicalTrace> {
    let obj = ClassicalObjective::new(p, config.alpha)?;
    let start = resolve_init(p, &config.init)?;
    driver::run(&obj, start, StoppingRule::Fixed, f64::INFINITY, iterations, config.record_states)
}

/// `δ = log max P(x,y)^α P(x',y')^α / (P(x',y)^α P(x,y')^α)` for a strictly
/// positive `P_XY`.
pub fn exact_delta(p: &JointPmf, alpha: f64) -> Result<f64> {
    if !p.is_strictly_positive() {
        return Err(Error::NotStrictlyPositive);
    }
    let l: Vec<f64> = p.weights.iter().map(|w| w.ln()).collect();
    let at = |x: usize, y: usize| l[x * p.ny + y];
    let mut best = 0.0f64;
    for x in 0..p.nx {
        for xp in 0..p.nx {
            for y in 0..p.ny {
                for yp in 0..p.ny {
                    best = best.max(at(x, y) + at(xp, yp) - at(xp, y) - at(x, yp));
                }
            }
        }
    }
    Ok(alpha * best)
}

pub fn exact_kappa(p: &JointPmf, alpha: f64) -> Result<f64> {
    Ok((exact_delta(p, alpha)? / 4.0).tanh())
}

/// Which contraction coefficient a classical probe checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficient {
    /// `γ = |1 - 1/α|`.
    Gamma,
    /// `γ · tanh(δ/4)`, requiring a strictly positive `P_XY`.
    Refined,
}

/// Sampled contraction check of both classical maps on strictly positive
/// PMF pairs. Valid for `α > 1/2`, `α ≠ 1`.
pub fn classical_contraction_probe(
    p: &JointPmf,
    alpha: f64,
    coefficient: Coefficient,
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<ContractionReport> {
    if !(alpha > 0.5 && alpha.is_finite()) || alpha == 1.0 {
        return Err(Error::UnsupportedOrder(alpha));
    }
    let gamma = (1.0 - 1.0 / alpha).abs();
    let coef = match coefficient {
        Coefficient::Gamma => gamma,
        Coefficient::Refined => gamma * exact_kappa(p, alpha)?,
    };
    let obj = ClassicalObjective::new(p, alpha)?;
    let cut = SupportCutoff::default();
    let samples = map_range(exec, trials, |i| -> Result<_> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let q1 = random::pmf(p.nx, &mut rng);
        let q2 = random::pmf(p.nx, &mut rng);
        let r1 = random::pmf(p.ny, &mut rng);
        let r2 = random::pmf(p.ny, &mut rng);
        let fwd = compare(
            d_h_vec(q1.weights(), q2.weights(), cut)?,
            d_h_vec(obj.minimize_over_y(&q1)?.state.weights(), obj.minimize_over_y(&q2)?.state.weights(), cut)?,
            coef,
        );
        let bwd = compare(
            d_h_vec(r1.weights(), r2.weights(), cut)?,
            d_h_vec(obj.minimize_over_x(&r1)?.state.weights(), obj.minimize_over_x(&r2)?.state.weights(), cut)?,
            coef,
        );
        Ok([fwd, bwd])
    });
    let mut report = ContractionReport { trials, coefficient: coef, max_ratio: 0.0, violations: 0 };
    for pair in samples {
        for s in pair? {
            report.max_ratio = report.max_ratio.max(s.ratio);
            report.violations += s.violated as usize;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::am::{self, AmConfig, Initializer};
    use crate::hilbert::m_ratio_vec;
    use crate::petz::d_alpha;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn pmf(v: &[f64]) -> Pmf {
        Pmf::new(v.to_vec()).unwrap()
    }

    #[test]
    fn validation() {
        assert_eq!(Pmf::new(vec![0.5, 0.6]), Err(Error::InvalidPmf("sum")));
        assert!(Pmf::new(vec![-0.1, 1.1]).is_err());
        assert!(Pmf::new(vec![]).is_err());
        assert!(JointPmf::new(2, 2, vec![1.0, 0.0, 0.0]).is_err());
        let p = JointPmf::from_rows(&[vec![0.4, 0.1], vec![0.1, 0.4]]).unwrap();
        assert_eq!(p.get(0, 1), 0.1);
        assert!(JointPmf::from_rows(&[vec![0.5, 0.1], vec![0.4]]).is_err());
    }

    #[test]
    fn divergence_examples() {
        let p = [0.3, 0.7];
        assert!(d_alpha_classical(&p, &p, 0.75).unwrap().unwrap().abs() < 1e-15);
        assert_relative_eq!(d_alpha_classical(&[1.0, 0.0], &[0.5, 0.5], 2.0).unwrap().unwrap(), 2f64.ln(), epsilon = 1e-15);
        assert_eq!(d_alpha_classical(&[0.5, 0.5], &[1.0, 0.0], 2.0).unwrap(), ExtReal::Infinite);
        assert!(d_alpha_classical(&[0.5, 0.5], &[1.0, 0.0], 0.5).unwrap().is_finite());
        assert_eq!(d_alpha_classical(&[1.0, 0.0], &[0.0, 1.0], 0.5).unwrap(), ExtReal::Infinite);
        assert_eq!(d_alpha_classical(&p, &p, 1.0), Err(Error::UnsupportedOrder(1.0)));
    }

    #[test]
    fn maps_examples() {
        let px = pmf(&[0.3, 0.7]);
        let py = pmf(&[0.2, 0.5, 0.3]);
        let prod = JointPmf::product(&px, &py);
        for alpha in [0.75, 1.5, 4.0] {
            let r = n_x_to_y(&prod, &px, alpha).unwrap();
            for (a, b) in r.weights().iter().zip(py.weights()) {
                assert!((a - b).abs() < 1e-14);
            }
            let q = n_y_to_x(&prod, &py, alpha).unwrap();
            for (a, b) in q.weights().iter().zip(px.weights()) {
                assert!((a - b).abs() < 1e-14);
            }
        }
        let diag = JointPmf::new(2, 2, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        let u = Pmf::uniform(2);
        assert_eq!(n_x_to_y(&diag, &u, 1.5).unwrap(), u);
        assert!(matches!(n_x_to_y(&diag, &pmf(&[1.0, 0.0]), 1.5), Err(Error::DomainViolation(_))));
    }

    #[test]
    fn cc_embed_examples() {
        let u = JointPmf::new(2, 2, vec![0.25; 4]).unwrap();
        assert!(cc_embed(&u).op().max_abs_diff(&HermitianOperator::maximally_mixed(4)) == 0.0);
        let point = JointPmf::new(2, 2, vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(cc_embed(&point).op().entry(0, 0).re, 1.0);
    }

    #[test]
    fn embedding_preserves_divergence_and_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let cut = SupportCutoff::default();
        for _ in 0..10 {
            let p = random::joint_pmf(2, 3, &mut rng);
            let q = random::pmf(2, &mut rng);
            let r = random::pmf(3, &mut rng);
            let rho = cc_embed(&p);
            for alpha in [0.6, 0.75, 1.5, 2.0] {
                let c = d_alpha_joint(&p, &q, &r, alpha).unwrap().unwrap();
                let qu = d_alpha(rho.op(), &q.to_operator().kron(&r.to_operator()), alpha, cut).unwrap().unwrap();
                assert!((c - qu).abs() < 1e-10);
                let cy = n_x_to_y(&p, &q, alpha).unwrap().to_operator();
                let qy = am::n_a_to_b(&rho, &q.to_operator(), alpha, cut).unwrap();
                assert!(cy.max_abs_diff(&qy) < 1e-12);
            }
        }
    }

    #[test]
    fn classical_constants_match_quantum() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let cut = SupportCutoff::default();
        for _ in 0..5 {
            let p = random::joint_pmf(3, 2, &mut rng);
            let q0 = random::pmf(3, &mut rng);
            let rho = cc_embed(&p);
            let c = classical_sublinear_constants(&p, &q0, 0.75).unwrap();
            let qc = am::sublinear_constants(&rho, &q0.to_operator(), 0.75, cut).unwrap();
            assert_relative_eq!(c.c0, qc.c0, max_relative = 1e-10);
            assert_relative_eq!(c.c_a, qc.c_a, max_relative = 1e-10);
            let l = classical_linear_constants(&p, &q0, 1.5).unwrap();
            let lq = am::linear_constants(&rho, &q0.to_operator(), 1.5, cut).unwrap();
            assert_relative_eq!(l.c0, lq.c0, max_relative = 1e-10);
        }
    }

    #[test]
    fn traces_agree_with_quantum_engine() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for alpha in [0.75, 1.5] {
            let p = random::joint_pmf(2, 2, &mut rng);
            let eps = if alpha > 1.0 { 1e-6 } else { 1e-4 };
            let c = algorithm_classical(&p, &ClassicalConfig::new(alpha, eps)).unwrap();
            let q = am::certified(&cc_embed(&p), &AmConfig::new(alpha, eps).with_init(Initializer::MarginalRhoA)).unwrap();
            assert_eq!(c.records.len(), q.records.len());
            for (a, b) in c.records.iter().zip(&q.records) {
                assert!((a.x - b.x).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn product_pmf_minimum_is_zero() {
        let prod = JointPmf::product(&pmf(&[0.2, 0.8]), &pmf(&[0.6, 0.4]));
        for alpha in [0.75, 2.0, 4.0] {
            let t = algorithm_classical(&prod, &ClassicalConfig::new(alpha, 1e-6)).unwrap();
            assert!(t.final_x.abs() < 1e-12);
        }
    }

    #[test]
    fn classical_orders_checked() {
        let p = JointPmf::new(2, 2, vec![0.25; 4]).unwrap();
        for alpha in [0.3, 0.5, 1.0] {
            assert_eq!(algorithm_classical(&p, &ClassicalConfig::new(alpha, 1e-6)).unwrap_err(), Error::UnsupportedOrder(alpha));
        }
    }

    #[test]
    fn exact_delta_examples() {
        let u = JointPmf::new(2, 2, vec![0.25; 4]).unwrap();
        assert_eq!(exact_delta(&u, 2.0).unwrap(), 0.0);
        let p = JointPmf::new(2, 2, vec![0.4, 0.1, 0.1, 0.4]).unwrap();
        assert_relative_eq!(exact_delta(&p, 1.5).unwrap(), 1.5 * 16f64.ln(), epsilon = 1e-12);
        let z = JointPmf::new(2, 2, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert_eq!(exact_delta(&z, 1.5), Err(Error::NotStrictlyPositive));
    }

    #[test]
    fn classical_probes() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let p = random::joint_pmf(3, 3, &mut rng);
        for alpha in [0.6, 0.75, 1.5, 2.0, 4.0] {
            for coef in [Coefficient::Gamma, Coefficient::Refined] {
                let r = classical_contraction_probe(&p, alpha, coef, 50, 5, Execution::default()).unwrap();
                assert_eq!(r.violations, 0, "alpha {alpha} {coef:?}");
            }
        }
    }

    proptest! {
        #[test]
        fn cc_m1_lower_bound(seed in any::<u64>(), alpha in prop_oneof![Just(0.6), Just(2.0)]) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let q = random::pmf(4, &mut rng);
            let r = random::pmf(4, &mut rng);
            let qa: Vec<f64> = q.weights().iter().map(|v| v.powf(1.0 - alpha)).collect();
            let ra: Vec<f64> = r.weights().iter().map(|v| v.powf(1.0 - alpha)).collect();
            let m = m_ratio_vec(&qa, &ra, SupportCutoff::default()).unwrap().unwrap();
            prop_assert!(m >= 1.0 - 1e-12);
        }

        #[test]
        fn maps_output_is_normalized(seed in any::<u64>(), alpha in 0.55f64..4.0) {
            prop_assume!((alpha - 1.0).abs() > 1e-3);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = random::joint_pmf(3, 2, &mut rng);
            let q = random::pmf(3, &mut rng);
            let r = n_x_to_y(&p, &q, alpha).unwrap();
            prop_assert!((r.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
