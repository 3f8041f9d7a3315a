//! Iteration schedules shared by the quantum and classical engines.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extended::ExtReal;

/// Slack allowed for a numerically increasing objective before the
/// sublinear certificate is declared broken.
pub const MONOTONICITY_SLACK: f64 = 1e-10;

/// Result of one exact partial minimization `a ↦ N_{A→B}(a)`.
#[derive(Debug, Clone)]
pub struct Step<B> {
    pub state: B,
    /// Objective `D_α(ρ‖a⊗b)` at the new pair.
    pub x: f64,
    /// `Q_α` at the new pair.
    pub q: f64,
}

/// A pair of exact partial minimizers.
pub trait Alternation {
    type A: Clone;
    type B: Clone;

    fn alpha(&self) -> f64;

    /// `N_{A→B}(a)` with the objective at `(a, N_{A→B}(a))`.
    fn forward(&self, a: &Self::A) -> Result<Step<Self::B>>;

    /// `N_{B→A}(b)`.
    fn backward(&self, b: &Self::B) -> Result<Self::A>;
}

/// How a run decides it is done.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StoppingRule {
    /// `ε_n = (exp(|α-1|(1+γ)γ^{2n} c0) - 1)/|α-1|` with `γ = |1 - 1/α|`.
    Linear { c0: f64 },
    /// `ε = c0 · sqrt(x' - x)` after each full iteration.
    Sublinear { c0: f64 },
    /// No certificate: stop once `|x' - x| < stall_tol`.
    Uncertified { stall_tol: f64 },
    /// Run exactly `max_iter` full iterations.
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Certificate,
    MaxIter,
    Stall,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationRecord {
    pub n: usize,
    pub x: f64,
    /// Certified bound on `|x_n - I_α|`; infinite when none is available.
    pub eps: ExtReal,
    pub q: f64,
    /// Seconds since the start of the run.
    pub wall_time: f64,
}

#[derive(Debug, Clone)]
pub struct Snapshot<A, B> {
    pub n: usize,
    pub sigma_a: A,
    pub tau_b: B,
}

#[derive(Debug, Clone)]
pub struct ConvergenceTrace<A, B> {
    pub alpha: f64,
    pub records: Vec<IterationRecord>,
    pub final_x: f64,
    pub final_eps: ExtReal,
    pub final_sigma_a: A,
    pub final_tau_b: B,
    /// First and last iterates, or every iterate when requested.
    pub snapshots: Vec<Snapshot<A, B>>,
    pub terminated_by: Termination,
}

impl<A, B> ConvergenceTrace<A, B> {
    pub fn iterations(&self) -> usize {
        self.records.last().map_or(0, |r| r.n)
    }

    pub fn xs(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.x).collect()
    }

    pub fn certified(&self) -> bool {
        self.terminated_by == Termination::Certificate
    }
}

/// `(exp(|α-1|(1+γ)γ^{2n} c0) - 1)/|α-1|`.
pub fn linear_epsilon(alpha: f64, c0: f64, n: usize) -> f64 {
    let a = (alpha - 1.0).abs();
    let gamma = (1.0 - 1.0 / alpha).abs();
    let decay = gamma.powf(2.0 * n as f64);
    (a * (1.0 + gamma) * decay * c0).exp_m1() / a
}

struct Recorder<A, B> {
    start: Instant,
    records: Vec<IterationRecord>,
    snapshots: Vec<Snapshot<A, B>>,
    record_all: bool,
}

impl<A: Clone, B: Clone> Recorder<A, B> {
    fn push(&mut self, n: usize, step: &Step<B>, eps: ExtReal, a: &A) {
        self.records.push(IterationRecord {
            n,
            x: step.x,
            eps,
            q: step.q,
            wall_time: self.start.elapsed().as_secs_f64(),
        });
        if self.record_all || n == 0 {
            self.snapshots.push(Snapshot { n, sigma_a: a.clone(), tau_b: step.state.clone() });
        }
    }
}

/// Runs alternating minimization from `a0` under `rule`.
///
/// `max_iter` bounds the number of full iterations (`B→A` then `A→B`).
pub fn run<P: Alternation>(
    problem: &P,
    a0: P::A,
    rule: StoppingRule,
    eps0: f64,
    max_iter: usize,
    record_all: bool,
) -> Result<ConvergenceTrace<P::A, P::B>> {
    let alpha = problem.alpha();
    let mut rec = Recorder { start: Instant::now(), records: Vec::new(), snapshots: Vec::new(), record_all };

    let mut a = a0;
    let mut step = problem.forward(&a)?;
    let mut n = 0usize;
    let mut eps = match rule {
        StoppingRule::Linear { c0 } => ExtReal::Finite(linear_epsilon(alpha, c0, 0)),
        _ => ExtReal::Infinite,
    };
    rec.push(0, &step, eps, &a);

    let done = |eps: ExtReal, prev: f64, x: f64, n: usize| -> Option<Termination> {
        match rule {
            StoppingRule::Linear { .. } | StoppingRule::Sublinear { .. } => match eps {
                ExtReal::Finite(e) if e < eps0 => Some(Termination::Certificate),
                _ => None,
            },
            StoppingRule::Uncertified { stall_tol } if n > 0 && (prev - x).abs() < stall_tol => {
                Some(Termination::Stall)
            }
            _ => None,
        }
    };

    let mut terminated = done(eps, f64::NAN, step.x, 0);
    while terminated.is_none() {
        if n >= max_iter {
            terminated = Some(Termination::MaxIter);
            break;
        }
        let prev = step.x;
        a = problem.backward(&step.state)?;
        step = problem.forward(&a)?;
        n += 1;
        eps = match rule {
            StoppingRule::Linear { c0 } => ExtReal::Finite(linear_epsilon(alpha, c0, n)),
            StoppingRule::Sublinear { c0 } => {
                let drop = prev - step.x;
                if drop < -MONOTONICITY_SLACK {
                    return Err(Error::MonotonicityViolation { n, increase: -drop });
                }
                ExtReal::Finite(c0 * drop.max(0.0).sqrt())
            }
            _ => ExtReal::Infinite,
        };
        rec.push(n, &step, eps, &a);
        terminated = done(eps, prev, step.x, n);
    }

    if rec.snapshots.last().map_or(true, |s| s.n != n) {
        rec.snapshots.push(Snapshot { n, sigma_a: a.clone(), tau_b: step.state.clone() });
    }
    Ok(ConvergenceTrace {
        alpha,
        records: rec.records,
        final_x: step.x,
        final_eps: eps,
        final_sigma_a: a,
        final_tau_b: step.state,
        snapshots: rec.snapshots,
        terminated_by: terminated.expect("loop exits with a termination"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Scalar toy problem: x halves every step.
    struct Halving;

    impl Alternation for Halving {
        type A = f64;
        type B = f64;
        fn alpha(&self) -> f64 {
            2.0
        }
        fn forward(&self, a: &f64) -> Result<Step<f64>> {
            Ok(Step { state: *a, x: *a, q: 1.0 })
        }
        fn backward(&self, b: &f64) -> Result<f64> {
            Ok(b / 2.0)
        }
    }

    struct Rising;

    impl Alternation for Rising {
        type A = f64;
        type B = f64;
        fn alpha(&self) -> f64 {
            0.75
        }
        fn forward(&self, a: &f64) -> Result<Step<f64>> {
            Ok(Step { state: *a, x: *a, q: 1.0 })
        }
        fn backward(&self, b: &f64) -> Result<f64> {
            Ok(b + 1.0)
        }
    }

    #[test]
    fn linear_epsilon_values() {
        // α = 2: γ = 1/2, ε_0 = exp(1.5 c0) - 1
        assert!((linear_epsilon(2.0, 1.0, 0) - (1.5f64.exp() - 1.0)).abs() < 1e-14);
        assert!(linear_epsilon(2.0, 1.0, 3) < linear_epsilon(2.0, 1.0, 2));
        assert_eq!(linear_epsilon(1.5, 2.0, 100_000), 0.0);
    }

    #[test]
    fn fixed_rule_runs_exactly_max_iter() {
        let t = run(&Halving, 1.0, StoppingRule::Fixed, 1e-6, 7, true).unwrap();
        assert_eq!(t.iterations(), 7);
        assert_eq!(t.records.len(), 8);
        assert_eq!(t.snapshots.len(), 8);
        assert_eq!(t.terminated_by, Termination::MaxIter);
        assert!((t.final_x - 1.0 / 128.0).abs() < 1e-15);
    }

    #[test]
    fn snapshots_are_first_and_last_by_default() {
        let t = run(&Halving, 1.0, StoppingRule::Fixed, 1e-6, 5, false).unwrap();
        let ns: Vec<usize> = t.snapshots.iter().map(|s| s.n).collect();
        assert_eq!(ns, vec![0, 5]);
    }

    #[test]
    fn sublinear_rule_stops_on_certificate() {
        let t = run(&Halving, 1.0, StoppingRule::Sublinear { c0: 1.0 }, 1e-3, 1000, false).unwrap();
        assert!(t.certified());
        let last = t.records.last().unwrap();
        assert!(last.eps.unwrap() < 1e-3);
        assert_eq!(t.records[0].eps, ExtReal::Infinite);
    }

    #[test]
    fn sublinear_rule_flags_increase() {
        let err = run(&Rising, 0.0, StoppingRule::Sublinear { c0: 1.0 }, 1e-3, 10, false).unwrap_err();
        assert!(matches!(err, Error::MonotonicityViolation { n: 1, .. }));
    }

    #[test]
    fn uncertified_rule_stalls() {
        let t = run(&Halving, 1.0, StoppingRule::Uncertified { stall_tol: 1e-3 }, 1e-6, 1000, false).unwrap();
        assert_eq!(t.terminated_by, Termination::Stall);
        assert!(t.final_x < 1e-3);
    }
}
