//! Hilbert's projective metric on the PSD cone and on nonnegative vectors.
//!
//! `M(X/Y) = ‖Y^{-1/2} X Y^{-1/2}‖_∞` when `X ≪ Y`, and
//! `d_H(X, Y) = log(M(X/Y) M(Y/X))` for equivalent nonzero `X, Y`.

use crate::error::{Error, Result};
use crate::extended::{ExtReal, ProjectiveDistance};
use crate::operator::{is_dominated, HermitianOperator, SupportCutoff};

fn is_zero(x: &HermitianOperator, cut: SupportCutoff) -> Result<bool> {
    Ok(x.eig()?.rank(cut) == 0)
}

/// `M(X/Y)`, `+inf` unless `X ≪ Y`.
pub fn m_ratio(x: &HermitianOperator, y: &HermitianOperator, cut: SupportCutoff) -> Result<ExtReal> {
    if x.dim() != y.dim() {
        return Err(Error::DimMismatch { expected: y.dim(), got: x.dim() });
    }
    if is_zero(y, cut)? {
        return Err(Error::ZeroOperator);
    }
    if !is_dominated(x, y, cut)? {
        return Ok(ExtReal::Infinite);
    }
    // Y^{-1/2} vanishes on ker(Y), which compresses X onto supp(Y).
    let y_inv_half = y.power_on_support(-0.5, cut)?;
    Ok(ExtReal::Finite(x.sandwich(&y_inv_half).op_norm()?))
}

/// Hilbert's projective metric between PSD operators.
pub fn d_h(x: &HermitianOperator, y: &HermitianOperator, cut: SupportCutoff) -> Result<ProjectiveDistance> {
    if x.dim() != y.dim() {
        return Err(Error::DimMismatch { expected: y.dim(), got: x.dim() });
    }
    match (is_zero(x, cut)?, is_zero(y, cut)?) {
        (true, true) => return Ok(ExtReal::Finite(0.0)),
        (true, false) | (false, true) => return Ok(ExtReal::Infinite),
        _ => {}
    }
    match (m_ratio(x, y, cut)?, m_ratio(y, x, cut)?) {
        (ExtReal::Finite(a), ExtReal::Finite(b)) => Ok(ExtReal::Finite((a * b).ln().max(0.0))),
        _ => Ok(ExtReal::Infinite),
    }
}

/// `-2 log min{λ_min⁺(σ), λ_min⁺(τ)}`, an upper bound on `d_H(σ, τ)` for
/// states of equal support.
pub fn d_h_bound_from_spectra(sigma: &HermitianOperator, tau: &HermitianOperator, cut: SupportCutoff) -> Result<f64> {
    if !(is_dominated(sigma, tau, cut)? && is_dominated(tau, sigma, cut)?) {
        return Err(Error::SupportMismatch);
    }
    let m = sigma.min_nonzero_eig(cut)?.min(tau.min_nonzero_eig(cut)?);
    Ok(-2.0 * m.ln())
}

/// `|d_H(X_a⊗X_b, Y_a⊗Y_b) - d_H(X_a, Y_a) - d_H(X_b, Y_b)|`.
pub fn tensor_additivity_residual(
    x_a: &HermitianOperator,
    y_a: &HermitianOperator,
    x_b: &HermitianOperator,
    y_b: &HermitianOperator,
    cut: SupportCutoff,
) -> Result<f64> {
    let joint = d_h(&x_a.kron(x_b), &y_a.kron(y_b), cut)?;
    let a = d_h(x_a, y_a, cut)?;
    let b = d_h(x_b, y_b, cut)?;
    match (joint, a, b) {
        (ExtReal::Finite(j), ExtReal::Finite(a), ExtReal::Finite(b)) => Ok((j - a - b).abs()),
        _ => Err(Error::SupportMismatch),
    }
}

fn vec_support(v: &[f64], cut: SupportCutoff) -> Vec<bool> {
    let vmax = v.iter().copied().fold(0.0, f64::max);
    v.iter().map(|&x| vmax > 0.0 && x > cut.rel_tol() * vmax).collect()
}

/// Classical `M(p/q) = max_{x ∈ supp q} p(x)/q(x)`, `+inf` unless `p ≪ q`.
pub fn m_ratio_vec(p: &[f64], q: &[f64], cut: SupportCutoff) -> Result<ExtReal> {
    if p.len() != q.len() {
        return Err(Error::DimMismatch { expected: q.len(), got: p.len() });
    }
    let sq = vec_support(q, cut);
    if !sq.iter().any(|&s| s) {
        return Err(Error::ZeroOperator);
    }
    let sp = vec_support(p, cut);
    if sp.iter().zip(&sq).any(|(&a, &b)| a && !b) {
        return Ok(ExtReal::Infinite);
    }
    let m = p
        .iter()
        .zip(q)
        .zip(&sq)
        .filter(|(_, &s)| s)
        .map(|((&a, &b), _)| a / b)
        .fold(0.0, f64::max);
    Ok(ExtReal::Finite(m))
}

/// Hilbert's projective metric between nonnegative vectors.
pub fn d_h_vec(p: &[f64], q: &[f64], cut: SupportCutoff) -> Result<ProjectiveDistance> {
    let zp = !vec_support(p, cut).iter().any(|&s| s);
    let zq = !vec_support(q, cut).iter().any(|&s| s);
    match (zp, zq) {
        (true, true) => return Ok(ExtReal::Finite(0.0)),
        (true, false) | (false, true) => return Ok(ExtReal::Infinite),
        _ => {}
    }
    match (m_ratio_vec(p, q, cut)?, m_ratio_vec(q, p, cut)?) {
        (ExtReal::Finite(a), ExtReal::Finite(b)) => Ok(ExtReal::Finite((a * b).ln().max(0.0))),
        _ => Ok(ExtReal::Infinite),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::contract_a;
    use crate::random;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cut() -> SupportCutoff {
        SupportCutoff::default()
    }

    fn diag(v: &[f64]) -> HermitianOperator {
        HermitianOperator::from_real_diagonal(v)
    }

    #[test]
    fn m_ratio_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = random::full_rank_state(3, &mut rng);
        assert_relative_eq!(m_ratio(&x, &x, cut()).unwrap().unwrap(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(m_ratio(&x.scale(2.0), &x, cut()).unwrap().unwrap(), 2.0, epsilon = 1e-12);
        let p = [0.2, 0.0, 0.8];
        let q = [0.5, 0.3, 0.2];
        assert_relative_eq!(m_ratio(&diag(&p), &diag(&q), cut()).unwrap().unwrap(), 4.0, epsilon = 1e-12);
        assert_relative_eq!(m_ratio_vec(&p, &q, cut()).unwrap().unwrap(), 4.0);
        assert_eq!(m_ratio(&diag(&q), &diag(&p), cut()).unwrap(), ExtReal::Infinite);
        assert_eq!(m_ratio(&x, &HermitianOperator::zeros(3), cut()), Err(Error::ZeroOperator));
    }

    #[test]
    fn d_h_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = random::full_rank_state(2, &mut rng);
        let y = random::full_rank_state(2, &mut rng);
        assert!(d_h(&x, &x, cut()).unwrap().unwrap() < 1e-12);
        let base = d_h(&x, &y, cut()).unwrap().unwrap();
        let scaled = d_h(&x.scale(3.7), &y.scale(0.2), cut()).unwrap().unwrap();
        assert_relative_eq!(base, scaled, epsilon = 1e-12);

        let (p, q) = (0.3f64, 0.8f64);
        let expected = ((p * (1.0 - q)).ln() - (q * (1.0 - p)).ln()).abs();
        let got = d_h(&diag(&[p, 1.0 - p]), &diag(&[q, 1.0 - q]), cut()).unwrap().unwrap();
        assert_relative_eq!(got, expected, epsilon = 1e-12);
        assert_relative_eq!(d_h_vec(&[p, 1.0 - p], &[q, 1.0 - q], cut()).unwrap().unwrap(), expected, epsilon = 1e-14);
    }

    #[test]
    fn d_h_degenerate_cases() {
        let z = HermitianOperator::zeros(2);
        assert_eq!(d_h(&z, &z, cut()).unwrap(), ExtReal::Finite(0.0));
        assert_eq!(d_h(&z, &diag(&[1.0, 0.0]), cut()).unwrap(), ExtReal::Infinite);
        assert_eq!(d_h(&diag(&[1.0, 1.0]), &diag(&[1.0, 0.0]), cut()).unwrap(), ExtReal::Infinite);
        let r1 = d_h(&diag(&[0.3, 0.0]), &diag(&[0.9, 0.0]), cut()).unwrap();
        assert!(r1.unwrap().abs() < 1e-14);
    }

    #[test]
    fn symmetric_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x = random::full_rank_state(3, &mut rng);
            let y = random::full_rank_state(3, &mut rng);
            assert_eq!(d_h(&x, &y, cut()).unwrap(), d_h(&y, &x, cut()).unwrap());
        }
    }

    #[test]
    fn spectral_bound_examples() {
        let half = HermitianOperator::maximally_mixed(2);
        assert_relative_eq!(d_h_bound_from_spectra(&half, &half, cut()).unwrap(), 2.0 * 2f64.ln(), epsilon = 1e-14);
        let s = diag(&[0.9, 0.1]);
        let bound = d_h_bound_from_spectra(&s, &half, cut()).unwrap();
        assert_relative_eq!(bound, -2.0 * 0.1f64.ln(), epsilon = 1e-12);
        let dist = d_h(&s, &half, cut()).unwrap().unwrap();
        assert_relative_eq!(dist, (1.8f64 / 0.2).ln(), epsilon = 1e-12);
        assert!(dist <= bound);
        assert_eq!(
            d_h_bound_from_spectra(&diag(&[1.0, 0.0]), &half, cut()),
            Err(Error::SupportMismatch)
        );

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let x = random::full_rank_state(3, &mut rng);
            let y = random::full_rank_state(3, &mut rng);
            let b = d_h_bound_from_spectra(&x, &y, cut()).unwrap();
            assert!(b >= d_h(&x, &y, cut()).unwrap().unwrap() - 1e-10);
        }
    }

    #[test]
    fn tensor_additivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let xa = random::full_rank_state(2, &mut rng);
        let ya = random::full_rank_state(2, &mut rng);
        let xb = random::full_rank_state(2, &mut rng);
        let yb = random::full_rank_state(2, &mut rng);
        let r = tensor_additivity_residual(&xa, &ya, &xb, &yb, cut()).unwrap();
        assert!(r <= 1e-9);
        let same = tensor_additivity_residual(&xa, &ya, &xb, &xb, cut()).unwrap();
        assert!(same <= 1e-9);
        let scaled = tensor_additivity_residual(&xa.scale(3.0), &ya, &xb, &yb, cut()).unwrap();
        assert!((scaled - r).abs() <= 1e-9);
    }

    #[test]
    fn linear_map_contracts() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..30 {
            let z = random::psd_with_rank(6, 6, &mut rng);
            let x = random::full_rank_state(2, &mut rng);
            let y = random::full_rank_state(2, &mut rng);
            let lx = contract_a(&z, &x, 2, 3).unwrap();
            let ly = contract_a(&z, &y, 2, 3).unwrap();
            let before = d_h(&x, &y, cut()).unwrap().unwrap();
            let after = d_h(&lx, &ly, cut()).unwrap().unwrap();
            assert!(after <= before + 1e-9);
        }
    }
}
