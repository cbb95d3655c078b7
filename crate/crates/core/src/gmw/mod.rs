//! First-quantized two-particle states and property attribution.
//!
//! A state is a coefficient matrix `C` with `|Psi> = sum C[i,j] |i> (x) |j>`.
//! A single-particle vector `phi0` is a complete set of properties for the
//! state when the symmetric extension `E_P = I - (I - P) (x) (I - P)` of
//! `P = |phi0><phi0|` has expectation one.

mod classify;
mod properties;
mod takagi;

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use classify::{
    classify, Attributes, Classification, ClassifierRegistry, PropertyClassifier, TakagiClassifier,
    TwoParticleClassifier, Verdict,
};
pub use properties::{find_properties, PropertySolutions};
pub use takagi::{takagi, Takagi};

/// Coordinates of a single-particle vector in the mode basis.
pub type SingleParticleVector = DVector<Complex64>;

/// Decision tolerance for the first-quantized criteria.
pub const GMW_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Symmetry {
    #[serde(rename = "sym")]
    Symmetric,
    #[serde(rename = "antisym")]
    Antisymmetric,
    #[serde(rename = "none")]
    None,
}

impl Symmetry {
    pub fn as_str(self) -> &'static str {
        match self {
            Symmetry::Symmetric => "sym",
            Symmetry::Antisymmetric => "antisym",
            Symmetry::None => "none",
        }
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Symmetry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sym" | "symmetric" => Ok(Symmetry::Symmetric),
            "antisym" | "antisymmetric" => Ok(Symmetry::Antisymmetric),
            "none" => Ok(Symmetry::None),
            other => Err(Error::InvalidTwoParticleState(format!("unknown symmetry `{other}`"))),
        }
    }
}

/// Normalized two-particle coefficient matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoParticleState {
    coefficients: DMatrix<Complex64>,
    symmetry: Symmetry,
}

impl TwoParticleState {
    /// Validates the shape and the declared exchange symmetry (to `1e-9`
    /// relative to the norm), then normalizes.
    pub fn new(coefficients: DMatrix<Complex64>, symmetry: Symmetry) -> Result<Self> {
        let (r, c) = coefficients.shape();
        if r != c || r == 0 {
            return Err(Error::InvalidTwoParticleState(format!("coefficient matrix is {r}x{c}")));
        }
        let norm = coefficients.norm();
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        if !norm.is_finite() {
            return Err(Error::InvalidTwoParticleState("non-finite coefficient".into()));
        }
        let defect = match symmetry {
            Symmetry::Symmetric => (&coefficients - coefficients.transpose()).norm(),
            Symmetry::Antisymmetric => (&coefficients + coefficients.transpose()).norm(),
            Symmetry::None => 0.0,
        };
        if defect > GMW_TOL * norm {
            return Err(Error::InvalidTwoParticleState(format!(
                "coefficients are not {} (defect {defect:e})",
                match symmetry {
                    Symmetry::Symmetric => "symmetric",
                    _ => "antisymmetric",
                }
            )));
        }
        Ok(TwoParticleState {
            coefficients: coefficients / Complex64::new(norm, 0.0),
            symmetry,
        })
    }

    /// `(phi (x) chi +/- chi (x) phi)` for the given symmetry, or `phi (x) chi`.
    pub fn from_product(phi: &SingleParticleVector, chi: &SingleParticleVector, symmetry: Symmetry) -> Result<Self> {
        if phi.len() != chi.len() {
            return Err(Error::DimensionMismatch(phi.len(), chi.len()));
        }
        let outer = phi * chi.transpose();
        let c = match symmetry {
            Symmetry::Symmetric => &outer + outer.transpose(),
            Symmetry::Antisymmetric => &outer - outer.transpose(),
            Symmetry::None => outer,
        };
        Self::new(c, symmetry)
    }

    pub fn dim(&self) -> usize {
        self.coefficients.nrows()
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn coefficients(&self) -> &DMatrix<Complex64> {
        &self.coefficients
    }

    /// `<self|other>` on the two-particle space.
    pub fn inner(&self, other: &TwoParticleState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(self.coefficients.dotc(&other.coefficients))
    }

    /// Coefficients flattened as `|i> (x) |j>` at index `i * M + j`.
    pub fn to_vector(&self) -> DVector<Complex64> {
        let m = self.dim();
        DVector::from_fn(m * m, |k, _| self.coefficients[(k / m, k % m)])
    }

    pub(crate) fn require_identical(&self) -> Result<()> {
        if self.symmetry == Symmetry::None {
            return Err(Error::DistinguishableParticles);
        }
        Ok(())
    }
}

/// Makes the largest-magnitude component real positive. Ties resolve to the
/// lowest index.
pub fn canonical_phase(v: &SingleParticleVector) -> SingleParticleVector {
    let mut pivot = 0;
    let mut best = -1.0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > best + 1e-12 {
            best = z.norm();
            pivot = i;
        }
    }
    if best <= 0.0 {
        return v.clone();
    }
    let phase = v[pivot].conj() / v[pivot].norm();
    v * phase
}

pub(crate) fn check_unit(phi: &SingleParticleVector) -> Result<()> {
    let n = phi.norm();
    if (n - 1.0).abs() > GMW_TOL {
        return Err(Error::NotNormalized(n));
    }
    Ok(())
}

/// Whether `|phi0><phi0|` is a complete set of properties of `t`, i.e.
/// `(Q (x) Q) Psi = 0` with `Q = I - |phi0><phi0|`.
pub fn property_holds(t: &TwoParticleState, phi0: &SingleParticleVector) -> Result<bool> {
    Ok(property_defect(t, phi0)? <= GMW_TOL)
}

/// Frobenius norm of `Q C Q^T`.
pub fn property_defect(t: &TwoParticleState, phi0: &SingleParticleVector) -> Result<f64> {
    if phi0.len() != t.dim() {
        return Err(Error::DimensionMismatch(t.dim(), phi0.len()));
    }
    check_unit(phi0)?;
    let q = complement_projector(phi0);
    Ok((&q * t.coefficients() * q.transpose()).norm())
}

pub(crate) fn complement_projector(phi: &SingleParticleVector) -> DMatrix<Complex64> {
    DMatrix::identity(phi.len(), phi.len()) - phi * phi.adjoint()
}

/// `|phi><phi|`.
pub fn projector(phi: &SingleParticleVector) -> DMatrix<Complex64> {
    phi * phi.adjoint()
}

pub fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

/// Symmetric property projector `E_P = P(x)(I-P) + (I-P)(x)P + P(x)P` on the
/// two-particle space.
pub fn property_projector(phi: &SingleParticleVector) -> DMatrix<Complex64> {
    let m = phi.len();
    let p = projector(phi);
    let q = DMatrix::identity(m, m) - &p;
    DMatrix::identity(m * m, m * m) - kron(&q, &q)
}

/// `P1 (x) P2 + P2 (x) P1` and whether it is a projection.
#[derive(Debug, Clone, PartialEq)]
pub struct PairProjector {
    pub matrix: DMatrix<Complex64>,
    pub is_projection: bool,
}

pub fn pair_property_projector(p1: &SingleParticleVector, p2: &SingleParticleVector) -> Result<PairProjector> {
    if p1.len() != p2.len() {
        return Err(Error::DimensionMismatch(p1.len(), p2.len()));
    }
    check_unit(p1)?;
    check_unit(p2)?;
    let a = projector(p1);
    let b = projector(p2);
    Ok(PairProjector {
        matrix: kron(&a, &b) + kron(&b, &a),
        is_projection: p1.dotc(p2).norm() <= GMW_TOL,
    })
}

/// `<Psi|op|Psi>` for an operator on the `M^2`-dimensional two-particle space.
pub fn two_body_expectation(op: &DMatrix<Complex64>, t: &TwoParticleState) -> Result<Complex64> {
    let psi = t.to_vector();
    if op.shape() != (psi.len(), psi.len()) {
        return Err(Error::DimensionMismatch(psi.len(), op.nrows()));
    }
    Ok(psi.dotc(&(op * &psi)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn e(m: usize, i: usize) -> SingleParticleVector {
        let mut v = DVector::zeros(m);
        v[i] = c(1.0);
        v
    }

    #[test]
    fn construction_validates_symmetry() {
        let c = DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]);
        assert!(TwoParticleState::new(c.clone(), Symmetry::Symmetric).is_err());
        assert!(TwoParticleState::new(c.clone(), Symmetry::Antisymmetric).is_err());
        let t = TwoParticleState::new(c, Symmetry::None).unwrap();
        assert!((t.coefficients().norm() - 1.0).abs() < 1e-15);
        assert!(matches!(
            TwoParticleState::new(DMatrix::zeros(2, 2), Symmetry::None),
            Err(Error::ZeroNorm)
        ));
    }

    #[test]
    fn symmetric_pair_has_both_properties() {
        let h = e(2, 0);
        let v = e(2, 1);
        let t = TwoParticleState::from_product(&h, &v, Symmetry::Symmetric).unwrap();
        assert!(property_holds(&t, &h).unwrap());
        assert!(property_holds(&t, &v).unwrap());
        let diag = (&h + &v) / c(2f64.sqrt());
        assert!(!property_holds(&t, &diag).unwrap());
        assert!(property_holds(&t, &(&h * c(2.0))).is_err());
    }

    #[test]
    fn expectations_of_the_symmetric_pair() {
        let h = e(2, 0);
        let v = e(2, 1);
        let t = TwoParticleState::from_product(&h, &v, Symmetry::Symmetric).unwrap();
        let e1 = two_body_expectation(&property_projector(&h), &t).unwrap();
        let e2 = two_body_expectation(&property_projector(&v), &t).unwrap();
        let pair = pair_property_projector(&h, &v).unwrap();
        assert!(pair.is_projection);
        let e12 = two_body_expectation(&pair.matrix, &t).unwrap();
        for z in [e1, e2, e12] {
            assert!((z - c(1.0)).norm() < 1e-12);
        }
        assert!(!pair_property_projector(&h, &h).unwrap().is_projection);
    }

    #[test]
    fn pair_projector_is_product_of_property_projectors_when_orthogonal() {
        let s = 0.5f64.sqrt();
        let p1 = DVector::from_vec(vec![c(s), c(s), c(0.0)]);
        let p2 = DVector::from_vec(vec![c(s), c(-s), c(0.0)]);
        let pair = pair_property_projector(&p1, &p2).unwrap();
        let product = property_projector(&p1) * property_projector(&p2);
        assert!((&pair.matrix - &product).norm() < 1e-12);
        assert!((&pair.matrix * &pair.matrix - &pair.matrix).norm() < 1e-12);
    }

    #[test]
    fn canonical_phase_makes_pivot_real_positive() {
        let v = DVector::from_vec(vec![Complex64::new(0.0, 0.3), Complex64::new(0.0, -0.9)]);
        let w = canonical_phase(&v);
        assert!((w[1] - c(0.9)).norm() < 1e-15);
        assert!((w[0] - c(-0.3)).norm() < 1e-15);
    }
}
