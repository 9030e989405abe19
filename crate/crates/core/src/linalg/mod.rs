//! Numeric engine: COO and CSR sparse formats, a row-major dense matrix, the
//! products used by the fixpoint iteration, and thresholding.
//!
//! Every product sums a row left to right in ascending column order, starting
//! from `0.0`. Sparse and dense backends therefore produce bit-identical
//! results on the same operands: the dense backend only adds extra `+0.0`
//! terms, which never change a partial sum.

mod coo;
mod csr;
mod dense;

pub use coo::CooMatrix;
pub use csr::CsrMatrix;
pub use dense::{BinaryVector, DenseMatrix};

/// Default tolerance for [`theta`]: entries at or above `1 - DEFAULT_EPS`
/// count as one.
pub const DEFAULT_EPS: f64 = 1e-8;

/// Elementwise threshold: `1` where `x >= 1 - eps`, else `0`.
pub fn theta(x: &DenseMatrix, eps: f64) -> DenseMatrix {
    let mut out = x.clone();
    theta_in_place(out.as_mut_slice(), eps);
    out
}

#[inline]
pub fn theta_scalar(x: f64, eps: f64) -> f64 {
    if x >= 1.0 - eps {
        1.0
    } else {
        0.0
    }
}

pub fn theta_in_place(values: &mut [f64], eps: f64) {
    for v in values {
        *v = theta_scalar(*v, eps);
    }
}

/// Whether CSR storage beats COO for an `rows x cols` matrix holding `nnz`
/// nonzeros: `nnz < (rows * (cols - 1) - 1) / 2`.
pub fn csr_memory_advantage(rows: usize, cols: usize, nnz: usize) -> bool {
    (nnz as f64) < (rows as f64 * (cols as f64 - 1.0) - 1.0) / 2.0
}

/// A square-or-rectangular operator usable by the fixpoint solver.
///
/// Implementations must sum each output entry left to right over ascending
/// column indices, starting from `0.0`.
pub trait MatrixOperator {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;

    /// `y = A x`. Slices must have lengths `cols` and `rows`.
    fn mul_vec_into(&self, x: &[f64], y: &mut [f64]);

    /// `out = A B` for a row-major `b` of shape `cols x k`; `out` is
    /// row-major `rows x k`.
    fn mul_mat_into(&self, b: &[f64], k: usize, out: &mut [f64]);
}
