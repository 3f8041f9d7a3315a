//! The sequential and parallel paths must agree bit for bit.

use prmi::am;
use prmi::classical::{classical_contraction_probe, Coefficient};
use prmi::oracle::{grid_min_classical_with, grid_min_quantum_qubit_with};
use prmi::{random, Execution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn oracles_match_across_modes() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let p = random::joint_pmf(3, 3, &mut rng);
    let s = grid_min_classical_with(&p, 1.5, 1e-2, Execution::Sequential).unwrap();
    let q = grid_min_classical_with(&p, 1.5, 1e-2, Execution::Parallel).unwrap();
    assert_eq!(s.min_value, q.min_value);
    assert_eq!(s.argmin_params, q.argmin_params);

    let rho = random::bipartite_state(2, 2, &mut rng);
    let s = grid_min_quantum_qubit_with(&rho, 0.75, 5e-2, Execution::Sequential).unwrap();
    let q = grid_min_quantum_qubit_with(&rho, 0.75, 5e-2, Execution::Parallel).unwrap();
    assert_eq!(s.min_value, q.min_value);
    assert_eq!(s.evaluations, q.evaluations);
}

#[test]
fn probes_match_across_modes() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let rho = random::bipartite_state(2, 2, &mut rng);
    let s = am::contraction_probe(&rho, 2.0, 40, 3, Execution::Sequential).unwrap();
    let q = am::contraction_probe(&rho, 2.0, 40, 3, Execution::Parallel).unwrap();
    assert_eq!(s.max_ratio, q.max_ratio);

    let p = random::joint_pmf(2, 3, &mut rng);
    let s = classical_contraction_probe(&p, 0.75, Coefficient::Refined, 40, 3, Execution::Sequential).unwrap();
    let q = classical_contraction_probe(&p, 0.75, Coefficient::Refined, 40, 3, Execution::Parallel).unwrap();
    assert_eq!(s.max_ratio, q.max_ratio);
    assert_eq!(s.violations, 0);
}
