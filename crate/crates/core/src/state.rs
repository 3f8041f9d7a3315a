use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{CMatrix, HermitianOperator, Subsystem};

/// A density operator on `A ⊗ B`, basis `|a⟩⊗|b⟩` with `b` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    d_a: usize,
    d_b: usize,
    op: HermitianOperator,
}

impl BipartiteState {
    pub const PSD_TOL: f64 = 1e-10;
    pub const TRACE_TOL: f64 = 1e-10;

    pub fn new(op: HermitianOperator, d_a: usize, d_b: usize) -> Result<Self> {
        if d_a == 0 || d_b == 0 || d_a * d_b != op.dim() {
            return Err(Error::InvalidState("dimension"));
        }
        if !op.is_psd(Self::PSD_TOL)? {
            return Err(Error::InvalidState("psd"));
        }
        if (op.trace() - 1.0).abs() > Self::TRACE_TOL {
            return Err(Error::InvalidState("trace"));
        }
        Ok(Self { d_a, d_b, op })
    }

    pub fn product(rho_a: &HermitianOperator, rho_b: &HermitianOperator) -> Result<Self> {
        Self::new(rho_a.kron(rho_b), rho_a.dim(), rho_b.dim())
    }

    /// `(1/d) Σ_x |x, x⟩⟨x, x|`.
    pub fn maximally_correlated(d: usize) -> Self {
        let mut diag = vec![0.0; d * d];
        for x in 0..d {
            diag[x * d + x] = 1.0 / d as f64;
        }
        Self {
            d_a: d,
            d_b: d,
            op: HermitianOperator::from_real_diagonal(&diag),
        }
    }

    pub fn maximally_mixed(d_a: usize, d_b: usize) -> Self {
        Self {
            d_a,
            d_b,
            op: HermitianOperator::maximally_mixed(d_a * d_b),
        }
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn rho_a(&self) -> HermitianOperator {
        self.op
            .partial_trace(self.d_a, self.d_b, Subsystem::B)
            .expect("dimensions validated at construction")
    }

    pub fn rho_b(&self) -> HermitianOperator {
        self.op
            .partial_trace(self.d_a, self.d_b, Subsystem::A)
            .expect("dimensions validated at construction")
    }

    /// The same state with the roles of `A` and `B` exchanged.
    pub fn swapped(&self) -> Self {
        let (da, db) = (self.d_a, self.d_b);
        let n = da * db;
        let mut perm = CMatrix::zeros(n, n);
        for a in 0..da {
            for b in 0..db {
                perm[(b * da + a, a * db + b)] = Complex64::new(1.0, 0.0);
            }
        }
        Self {
            d_a: db,
            d_b: da,
            op: self.op.conjugate_by(&perm),
        }
    }
}
