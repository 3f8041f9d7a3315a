//! Seeded random operators and distributions for probes, tests and benches.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::classical::{JointPmf, Pmf};
use crate::operator::{CMatrix, HermitianOperator};
use crate::state::BipartiteState;

fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// GUE-like Hermitian matrix.
pub fn hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> HermitianOperator {
    HermitianOperator::from_hermitian_unchecked(gaussian_matrix(d, d, rng))
}

/// Unnormalized PSD operator `G G†` with `G` of shape `d × rank`.
pub fn psd_with_rank<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> HermitianOperator {
    let g = gaussian_matrix(d, rank, rng);
    HermitianOperator::from_hermitian_unchecked(&g * g.adjoint())
}

/// Ginibre (Hilbert–Schmidt) random density matrix.
pub fn state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> HermitianOperator {
    let x = psd_with_rank(d, d, rng);
    let t = x.trace();
    x.scale(1.0 / t)
}

/// Random density matrix mixed with `I/d` so its spectrum stays away from zero.
pub fn full_rank_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> HermitianOperator {
    let g = state(d, rng);
    &g.scale(0.9) + &HermitianOperator::maximally_mixed(d).scale(0.1)
}

/// Density matrix of rank `rank`.
pub fn state_with_rank<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> HermitianOperator {
    let x = psd_with_rank(d, rank, rng);
    let t = x.trace();
    x.scale(1.0 / t)
}

/// Haar-random unit vector.
pub fn unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..d)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

pub fn bipartite_state<R: Rng + ?Sized>(d_a: usize, d_b: usize, rng: &mut R) -> BipartiteState {
    BipartiteState::new(full_rank_state(d_a * d_b, rng), d_a, d_b).expect("valid by construction")
}

pub fn product_state<R: Rng + ?Sized>(d_a: usize, d_b: usize, rng: &mut R) -> BipartiteState {
    BipartiteState::product(&full_rank_state(d_a, rng), &full_rank_state(d_b, rng))
        .expect("valid by construction")
}

/// Strictly positive PMF (flat Dirichlet draw).
pub fn pmf<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Pmf {
    let w: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1) + 1e-3).collect();
    let s: f64 = w.iter().sum();
    Pmf::new(w.into_iter().map(|x| x / s).collect()).expect("valid by construction")
}

/// Strictly positive joint PMF on `nx × ny`.
pub fn joint_pmf<R: Rng + ?Sized>(nx: usize, ny: usize, rng: &mut R) -> JointPmf {
    let flat = pmf(nx * ny, rng);
    JointPmf::new(nx, ny, flat.weights().to_vec()).expect("valid by construction")
}
