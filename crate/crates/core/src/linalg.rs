//! Dense complex factorizations backed by faer.

use faer::Mat;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Thin SVD `M = U diag(s) V^dagger` with `s` non-increasing.
pub(crate) struct Svd {
    pub u: DMatrix<Complex64>,
    pub singular_values: Vec<f64>,
    pub v: DMatrix<Complex64>,
}

pub(crate) fn svd(m: &DMatrix<Complex64>) -> Result<Svd> {
    let a = Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
    let f = a.thin_svd().map_err(|_| Error::NoConvergence)?;
    let (u, s, v) = (f.U(), f.S().column_vector(), f.V());
    Ok(Svd {
        u: DMatrix::from_fn(u.nrows(), u.ncols(), |i, j| u[(i, j)]),
        singular_values: (0..s.nrows()).map(|k| s[k].re).collect(),
        v: DMatrix::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_two_complex_symmetric_recomposes() {
        let phi = [
            Complex64::new(0.3, -0.4),
            Complex64::new(0.5, 0.1),
            Complex64::new(-0.2, 0.6),
        ];
        let theta = [
            Complex64::new(0.7, 0.2),
            Complex64::new(-0.1, 0.3),
            Complex64::new(0.0, -0.5),
        ];
        let c = DMatrix::from_fn(3, 3, |i, j| phi[i] * theta[j] + theta[i] * phi[j]);
        let f = svd(&c).unwrap();
        let s = DMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                Complex64::new(f.singular_values[i], 0.0)
            } else {
                Complex64::default()
            }
        });
        assert!((&f.u * s * f.v.adjoint() - &c).norm() < 1e-14);
        assert!(f.singular_values[2] < 1e-15);
        assert!(f.singular_values.windows(2).all(|w| w[0] >= w[1]));
    }
}
