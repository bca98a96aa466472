//! Dense Hermitian eigendecomposition with ascending eigenvalue order.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

const MAX_SWEEPS: usize = 10_000;

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: CMatrix,
}

/// Eigendecomposition of a Hermitian matrix. Only the lower triangle is read.
pub fn eigh(matrix: &CMatrix) -> Result<HermitianEigen> {
    let dim = matrix.nrows();
    if dim != matrix.ncols() {
        return Err(Error::InvalidArgument(format!(
            "matrix is {}x{}, expected square",
            dim,
            matrix.ncols()
        )));
    }
    if dim == 0 {
        return Ok(HermitianEigen {
            values: Vec::new(),
            vectors: CMatrix::zeros(0, 0),
        });
    }
    let decomp = nalgebra::SymmetricEigen::try_new(matrix.clone(), f64::EPSILON, MAX_SWEEPS)
        .ok_or(Error::NoConvergence { dim })?;

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| decomp.eigenvalues[a].total_cmp(&decomp.eigenvalues[b]));

    let values = order.iter().map(|&k| decomp.eigenvalues[k]).collect();
    let mut vectors = CMatrix::zeros(dim, dim);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &decomp.eigenvectors.column(src));
    }
    Ok(HermitianEigen { values, vectors })
}

/// Largest |H - H^†| element relative to the largest |H| element.
pub fn hermiticity_defect(matrix: &CMatrix) -> f64 {
    let scale = matrix.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let adjoint = matrix.adjoint();
    (matrix - adjoint).iter().map(|z| z.norm()).fold(0.0, f64::max) / scale
}
