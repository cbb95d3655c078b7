use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// `C = U diag(values) U^T` with orthonormal columns `U` for the non-zero values.
#[derive(Debug, Clone, PartialEq)]
pub struct Takagi {
    /// Non-negative, descending.
    pub values: Vec<f64>,
    pub vectors: DMatrix<Complex64>,
}

impl Takagi {
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.values.len(),
            self.values.iter().map(|&x| Complex64::new(x, 0.0)),
        ));
        &self.vectors * d * self.vectors.transpose()
    }
}

/// Takagi factorization of a complex symmetric matrix.
///
/// With `C = A + iB`, the real symmetric matrix `[[A, B], [B, -A]]` has
/// eigenvalues `+-lambda_k`; an eigenvector `(x; y)` for `+lambda` yields
/// `u = x + iy` with `C conj(u) = lambda u`. Degenerate values need no special
/// treatment since any orthonormal basis of the `+lambda` eigenspace maps to
/// orthonormal `u`.
pub fn takagi(c: &DMatrix<Complex64>) -> Result<Takagi> {
    let n = c.nrows();
    if c.ncols() != n {
        return Err(Error::InvalidTwoParticleState(format!("matrix is {}x{}", n, c.ncols())));
    }
    let a = c.map(|z| z.re);
    let b = c.map(|z| z.im);
    let mut m = DMatrix::<f64>::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(&a);
    m.view_mut((0, n), (n, n)).copy_from(&b);
    m.view_mut((n, 0), (n, n)).copy_from(&b);
    m.view_mut((n, n), (n, n)).copy_from(&(-&a));
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let top = &order[..n];
    let values = top.iter().map(|&k| eig.eigenvalues[k].max(0.0)).collect();
    let vectors = DMatrix::from_fn(n, n, |i, col| {
        let k = top[col];
        Complex64::new(eig.eigenvectors[(i, k)], eig.eigenvectors[(n + i, k)])
    });
    Ok(Takagi { values, vectors })
}
