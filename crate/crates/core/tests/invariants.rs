use prmi::am::{self, AmConfig};
use prmi::classical::{self, ClassicalConfig};
use prmi::hilbert::d_h;
use prmi::petz::{d_alpha, PetzObjective};
use prmi::{random, SupportCutoff};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cut() -> SupportCutoff {
    SupportCutoff::default()
}

fn certified_alpha() -> impl Strategy<Value = f64> {
    prop_oneof![0.55f64..0.95, 1.05f64..2.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partial_minimizer_beats_any_tau(seed in any::<u64>(), alpha in certified_alpha()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random::bipartite_state(2, 3, &mut rng);
        let obj = PetzObjective::new(&rho, alpha, cut()).unwrap();
        let sigma = random::full_rank_state(2, &mut rng);
        let best = obj.minimize_over_b(&sigma).unwrap();
        let tau = random::full_rank_state(3, &mut rng);
        let other = obj.value(&sigma, &tau).unwrap().1.to_f64();
        prop_assert!(best.x <= other + 1e-10);
    }

    #[test]
    fn certified_run_is_monotone_and_bounded(seed in any::<u64>(), alpha in certified_alpha()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random::bipartite_state(2, 2, &mut rng);
        let eps = if alpha > 1.0 { 1e-6 } else { 1e-4 };
        let t = am::certified(&rho, &AmConfig::new(alpha, eps)).unwrap();
        prop_assert!(t.certified());
        for w in t.records.windows(2) {
            prop_assert!(w[1].x <= w[0].x + 1e-10);
        }
        let upper = d_alpha(rho.op(), &rho.rho_a().kron(&rho.rho_b()), alpha, cut()).unwrap().to_f64();
        prop_assert!(t.final_x <= upper + 1e-10);
        prop_assert!(t.final_x >= -1e-12);
    }

    #[test]
    fn classical_value_is_symmetric_under_transpose(seed in any::<u64>(), alpha in certified_alpha()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random::joint_pmf(2, 3, &mut rng);
        let eps = if alpha > 1.0 { 1e-8 } else { 1e-5 };
        let a = classical::algorithm_classical(&p, &ClassicalConfig::new(alpha, eps)).unwrap();
        let b = classical::algorithm_classical(&p.transposed(), &ClassicalConfig::new(alpha, eps)).unwrap();
        prop_assert!((a.final_x - b.final_x).abs() <= 2.0 * eps);
    }

    #[test]
    fn hilbert_triangle_inequality(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random::full_rank_state(3, &mut rng);
        let y = random::full_rank_state(3, &mut rng);
        let z = random::full_rank_state(3, &mut rng);
        let d = |a, b| d_h(a, b, cut()).unwrap().to_f64();
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z) + 1e-9);
    }
}
