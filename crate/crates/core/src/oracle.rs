//! Brute-force reference minimizers for small instances.
//!
//! The search runs on an integer lattice of resolution `N = round(1/step)`.
//! A coarse sublattice of spacing `S` (a power of two) is scanned
//! exhaustively; the spacing is then halved down to 1, and at each spacing
//! `s` a box of `±2s` per coordinate around the incumbent is scanned until the
//! incumbent stops moving. Every level contains the previous incumbent, so the
//! reported minimum never increases during refinement, and halving `step`
//! reproduces the coarser run before refining further. The search uses no
//! randomness and never calls the iteration maps.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::classical::{d_alpha_joint, JointPmf, Pmf};
use crate::error::{Error, Result};
use crate::exec::{map_range, Execution};
use crate::operator::{contract_a, CMatrix, HermitianOperator, Subsystem, SupportCutoff};
use crate::petz::Q_UNDERFLOW;
use crate::state::BipartiteState;

/// Largest coarse sublattice scanned exhaustively.
const COARSE_LIMIT: usize = 250_000;
const MAX_CLASSICAL_DIM: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub min_value: f64,
    /// Classical: `Q_X` then `R_Y`. Quantum: `(r, θ, φ)` for `σ_A`, then for `τ_B`.
    pub argmin_params: Vec<f64>,
    pub grid_step: f64,
    pub evaluations: u64,
}

#[derive(Debug, Clone, Copy)]
enum Axis {
    /// Values `0..=max`.
    Bounded { max: i64 },
    /// Values `0..n`, wrapping.
    Periodic { n: i64 },
}

impl Axis {
    fn coarse_values(self, s: i64) -> Vec<i64> {
        match self {
            Axis::Bounded { max } => {
                let mut v: Vec<i64> = (0..=max).step_by(s as usize).collect();
                if *v.last().unwrap() != max {
                    v.push(max);
                }
                v
            }
            Axis::Periodic { n } => (0..n).step_by(s as usize).collect(),
        }
    }

    fn shift(self, c: i64, d: i64) -> Option<i64> {
        match self {
            Axis::Bounded { max } => Some(c + d).filter(|v| (0..=max).contains(v)),
            Axis::Periodic { n } => Some((c + d).rem_euclid(n)),
        }
    }
}

struct Lattice<'a> {
    axes: Vec<Axis>,
    feasible: &'a (dyn Fn(&[i64]) -> bool + Sync),
    eval: &'a (dyn Fn(&[i64]) -> f64 + Sync),
    exec: Execution,
}

#[derive(Clone)]
struct Best {
    value: f64,
    point: Vec<i64>,
}

impl Lattice<'_> {
    fn product(lists: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for l in lists {
            out = out
                .into_iter()
                .flat_map(|p| {
                    l.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        out
    }

    /// First point of minimal value in enumeration order; `NaN` counts as `+inf`.
    fn scan(&self, points: Vec<Vec<i64>>, evaluations: &mut u64) -> Option<Best> {
        let pts: Vec<Vec<i64>> = points.into_iter().filter(|p| (self.feasible)(p)).collect();
        *evaluations += pts.len() as u64;
        let values = map_range(self.exec, pts.len(), |i| (self.eval)(&pts[i]));
        let mut best: Option<Best> = None;
        for (p, v) in pts.into_iter().zip(values) {
            let v = if v.is_nan() { f64::INFINITY } else { v };
            if best.as_ref().map_or(true, |b| v < b.value) {
                best = Some(Best { value: v, point: p });
            }
        }
        best
    }

    fn coarse_spacing(&self, top: i64) -> i64 {
        let mut s = 1i64;
        while s < top {
            let count: usize = self.axes.iter().map(|a| a.coarse_values(s).len()).product();
            if count <= COARSE_LIMIT {
                break;
            }
            s *= 2;
        }
        s
    }

    fn minimize(&self, top: i64) -> Result<(Best, u64)> {
        let mut evaluations = 0u64;
        let s0 = self.coarse_spacing(top);
        let lists: Vec<Vec<i64>> = self.axes.iter().map(|a| a.coarse_values(s0)).collect();
        let mut best = self
            .scan(Self::product(&lists), &mut evaluations)
            .ok_or_else(|| Error::InvalidConfig("empty search lattice".into()))?;
        let mut s = s0 / 2;
        while s >= 1 {
            loop {
                let lists: Vec<Vec<i64>> = self
                    .axes
                    .iter()
                    .zip(&best.point)
                    .map(|(a, &c)| (-2..=2).filter_map(|k| a.shift(c, k * s)).collect())
                    .collect();
                let cand = self.scan(Self::product(&lists), &mut evaluations).expect("incumbent is feasible");
                if cand.value < best.value {
                    best = cand;
                } else {
                    break;
                }
            }
            s /= 2;
        }
        Ok((best, evaluations))
    }
}

fn resolution(step: f64) -> Result<i64> {
    if !(step > 0.0 && step <= 0.1) {
        return Err(Error::InvalidConfig(format!("grid step must lie in (0, 0.1], got {step}")));
    }
    Ok((1.0 / step).round() as i64)
}

fn simplex_point(free: &[i64], n: i64) -> Vec<f64> {
    let last = n - free.iter().sum::<i64>();
    free.iter().chain(std::iter::once(&last)).map(|&k| k as f64 / n as f64).collect()
}

pub fn grid_min_classical(p: &JointPmf, alpha: f64, step: f64) -> Result<OracleResult> {
    grid_min_classical_with(p, alpha, step, Execution::default())
}

/// Minimum of `D_α(P_XY ‖ Q_X R_Y)` over the barycentric lattice of both
/// simplices.
pub fn grid_min_classical_with(p: &JointPmf, alpha: f64, step: f64, exec: Execution) -> Result<OracleResult> {
    if p.nx() > MAX_CLASSICAL_DIM || p.ny() > MAX_CLASSICAL_DIM {
        return Err(Error::TooLarge(format!("{}x{} PMF exceeds 3x3", p.nx(), p.ny())));
    }
    if !(alpha > 0.0 && alpha.is_finite()) || alpha == 1.0 {
        return Err(Error::UnsupportedOrder(alpha));
    }
    let n = resolution(step)?;
    let (fx, fy) = (p.nx() - 1, p.ny() - 1);
    let axes = vec![Axis::Bounded { max: n }; fx + fy];
    let feasible = |pt: &[i64]| pt[..fx].iter().sum::<i64>() <= n && pt[fx..].iter().sum::<i64>() <= n;
    let params = |pt: &[i64]| (simplex_point(&pt[..fx], n), simplex_point(&pt[fx..], n));
    let eval = |pt: &[i64]| {
        let (q, r) = params(pt);
        let q = Pmf::from_unnormalized(q).expect("lattice point is a PMF");
        let r = Pmf::from_unnormalized(r).expect("lattice point is a PMF");
        d_alpha_joint(p, &q, &r, alpha).map_or(f64::INFINITY, |v| v.to_f64())
    };
    let lattice = Lattice { axes, feasible: &feasible, eval: &eval, exec };
    let (best, evaluations) = lattice.minimize(n)?;
    let (q, r) = params(&best.point);
    Ok(OracleResult {
        min_value: best.value,
        argmin_params: q.into_iter().chain(r).collect(),
        grid_step: 1.0 / n as f64,
        evaluations,
    })
}

/// Spectral data of the qubit state with Bloch vector `r·(sinθ cosφ, sinθ sinφ, cosθ)`.
fn bloch_power(r: f64, theta: f64, phi: f64, p: f64) -> HermitianOperator {
    let (nx, ny, nz) = (theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos());
    let lp = (1.0 + r) / 2.0;
    let lm = (1.0 - r) / 2.0;
    let wp = lp.powf(p);
    let wm = if lm > 0.0 { lm.powf(p) } else { 0.0 };
    // f(σ) = (wp + wm)/2 · 1 + (wp - wm)/2 · n·σ⃗
    let a = (wp + wm) / 2.0;
    let b = (wp - wm) / 2.0;
    let m = CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(a + b * nz, 0.0),
            Complex64::new(b * nx, -b * ny),
            Complex64::new(b * nx, b * ny),
            Complex64::new(a - b * nz, 0.0),
        ],
    );
    HermitianOperator::from_hermitian_unchecked(m)
}

pub fn grid_min_quantum_qubit(rho_ab: &BipartiteState, alpha: f64, step: f64) -> Result<OracleResult> {
    grid_min_quantum_qubit_with(rho_ab, alpha, step, Execution::default())
}

/// Minimum of `D_α(ρ_AB ‖ σ_A ⊗ τ_B)` over Bloch-ball lattices for two
/// qubits. Radii stop one step short of 1 for `α > 1`, keeping both factors
/// full rank; for `α < 1` pure factors are included.
pub fn grid_min_quantum_qubit_with(rho_ab: &BipartiteState, alpha: f64, step: f64, exec: Execution) -> Result<OracleResult> {
    if rho_ab.d_a() != 2 || rho_ab.d_b() != 2 {
        return Err(Error::TooLarge(format!("{}x{} state is not two qubits", rho_ab.d_a(), rho_ab.d_b())));
    }
    if !(alpha > 0.0 && alpha.is_finite()) || alpha == 1.0 {
        return Err(Error::UnsupportedOrder(alpha));
    }
    let n = resolution(step)?;
    let r_max = if alpha > 1.0 { n - 1 } else { n };
    let qubit = [Axis::Bounded { max: r_max }, Axis::Bounded { max: n }, Axis::Periodic { n }];
    let axes: Vec<Axis> = qubit.iter().chain(qubit.iter()).copied().collect();
    let rho_alpha = rho_ab.op().power_on_support(alpha, SupportCutoff::default())?;
    let angles = |k: &[i64]| (k[0] as f64 / n as f64, PI * k[1] as f64 / n as f64, 2.0 * PI * k[2] as f64 / n as f64);
    let eval = |pt: &[i64]| {
        let (ra, ta, pa) = angles(&pt[..3]);
        let (rb, tb, pb) = angles(&pt[3..]);
        let s = bloch_power(ra, ta, pa, 1.0 - alpha);
        let t = bloch_power(rb, tb, pb, 1.0 - alpha);
        let q = contract_a(&rho_alpha, &s, 2, 2).map_or(0.0, |m| m.trace_product(&t));
        if q <= Q_UNDERFLOW {
            f64::INFINITY
        } else {
            q.ln() / (alpha - 1.0)
        }
    };
    let feasible = |_: &[i64]| true;
    let lattice = Lattice { axes, feasible: &feasible, eval: &eval, exec };
    let (best, evaluations) = lattice.minimize(n)?;
    let (ra, ta, pa) = angles(&best.point[..3]);
    let (rb, tb, pb) = angles(&best.point[3..]);
    Ok(OracleResult {
        min_value: best.value,
        argmin_params: vec![ra, ta, pa, rb, tb, pb],
        grid_step: 1.0 / n as f64,
        evaluations,
    })
}

fn entropy(x: &HermitianOperator) -> Result<f64> {
    Ok(x.eigenvalues()?.into_iter().filter(|&l| l > 0.0).map(|l| -l * l.ln()).sum())
}

/// Mutual information `S(ρ_A) + S(ρ_B) - S(ρ_AB)`, the `α → 1` limit.
pub fn kl_reference(rho_ab: &BipartiteState) -> Result<f64> {
    let (da, db) = (rho_ab.d_a(), rho_ab.d_b());
    let sa = entropy(&rho_ab.op().partial_trace(da, db, Subsystem::B)?)?;
    let sb = entropy(&rho_ab.op().partial_trace(da, db, Subsystem::A)?)?;
    Ok(sa + sb - entropy(rho_ab.op())?)
}
