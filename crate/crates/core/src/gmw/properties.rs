use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{canonical_phase, property_holds, SingleParticleVector, Symmetry, TwoParticleState, GMW_TOL};
use crate::error::Result;
use crate::linalg::svd;

/// Unit vectors `phi0` (up to phase) carrying a complete set of properties.
#[derive(Debug, Clone, PartialEq)]
pub enum PropertySolutions {
    None,
    Finite(Vec<SingleParticleVector>),
    /// Every unit vector in the span of the two orthonormal basis vectors.
    Family([SingleParticleVector; 2]),
}

impl PropertySolutions {
    pub fn is_empty(&self) -> bool {
        match self {
            PropertySolutions::None => true,
            PropertySolutions::Finite(v) => v.is_empty(),
            PropertySolutions::Family(_) => false,
        }
    }

    /// The finite solutions, or the basis of the family.
    pub fn representatives(&self) -> Vec<SingleParticleVector> {
        match self {
            PropertySolutions::None => Vec::new(),
            PropertySolutions::Finite(v) => v.clone(),
            PropertySolutions::Family(basis) => basis.to_vec(),
        }
    }
}

pub(crate) struct ColumnSpace {
    pub rank: usize,
    /// Orthonormal basis of the column space, leading singular vectors first.
    pub basis: DMatrix<Complex64>,
}

pub(crate) fn column_space(c: &DMatrix<Complex64>) -> Result<ColumnSpace> {
    let f = svd(c)?;
    let top = f.singular_values[0];
    let rank = f.singular_values.iter().filter(|&&s| s > GMW_TOL * top).count();
    Ok(ColumnSpace {
        rank,
        basis: f.u.columns(0, rank).into_owned(),
    })
}

/// Solves `Q C Q^T = 0` for `phi0`.
///
/// Any solution lies in the column space of `C` and forces rank at most two.
/// On a rank-two column space `U`, write `C = U K U^T` and `phi0 = U v`; the
/// condition reduces to `w^T K w = 0` with `w = (v_2, -v_1)`. Antisymmetric `K`
/// satisfies this identically; symmetric `K` yields a quadratic with two
/// distinct projective roots.
pub fn find_properties(t: &TwoParticleState) -> Result<PropertySolutions> {
    t.require_identical()?;
    let c = t.coefficients();
    let space = column_space(c)?;
    let candidates = match space.rank {
        1 => vec![space.basis.column(0).into_owned()],
        2 => {
            let u = &space.basis;
            if t.symmetry() == Symmetry::Antisymmetric {
                let basis = [
                    canonical_phase(&u.column(0).into_owned()),
                    canonical_phase(&u.column(1).into_owned()),
                ];
                return Ok(PropertySolutions::Family(basis));
            }
            let k = u.adjoint() * c * u.map(|z| z.conj());
            quadratic_roots(k[(0, 0)], k[(0, 1)], k[(1, 1)])
                .into_iter()
                .map(|(w1, w2)| {
                    // v = (-w2, w1)
                    let v = DVector::from_vec(vec![-w2, w1]);
                    let phi = u * v;
                    let n = phi.norm();
                    phi / Complex64::new(n, 0.0)
                })
                .collect()
        }
        _ => return Ok(PropertySolutions::None),
    };
    let mut verified = Vec::new();
    for phi in candidates {
        let phi = canonical_phase(&phi);
        if property_holds(t, &phi)? {
            verified.push(phi);
        }
    }
    Ok(if verified.is_empty() {
        PropertySolutions::None
    } else {
        PropertySolutions::Finite(verified)
    })
}

/// Projective roots `(w1, w2)` of `a w1^2 + 2 b w1 w2 + d w2^2 = 0`.
fn quadratic_roots(a: Complex64, b: Complex64, d: Complex64) -> Vec<(Complex64, Complex64)> {
    let one = Complex64::new(1.0, 0.0);
    let scale = a.norm().max(b.norm()).max(d.norm());
    if scale == 0.0 {
        return Vec::new();
    }
    let disc = (b * b - a * d).sqrt();
    // Solve in whichever ratio has the larger leading coefficient.
    let (lead, tail, swap) = if a.norm() >= d.norm() {
        (a, d, false)
    } else {
        (d, a, true)
    };
    if lead.norm() <= 1e-14 * scale {
        // a = d = 0: w1 w2 = 0.
        return vec![(one, Complex64::default()), (Complex64::default(), one)];
    }
    let s = if (b.conj() * disc).re >= 0.0 { disc } else { -disc };
    let q = -(b + s);
    let mut roots = vec![q / lead];
    if q.norm() > 0.0 {
        roots.push(tail / q);
    }
    roots
        .into_iter()
        .map(|r| if swap { (one, r) } else { (r, one) })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmw::property_defect;

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn e(m: usize, i: usize) -> SingleParticleVector {
        let mut v = DVector::zeros(m);
        v[i] = z(1.0, 0.0);
        v
    }

    #[test]
    fn quadratic_root_cases() {
        for (a, b, d) in [
            (z(1.0, 0.0), z(0.3, 0.2), z(-0.5, 0.1)),
            (z(0.0, 0.0), z(1.0, 0.0), z(0.4, -0.2)),
            (z(0.2, 0.0), z(1.0, 0.0), z(0.0, 0.0)),
            (z(0.0, 0.0), z(1.0, 0.0), z(0.0, 0.0)),
        ] {
            let roots = quadratic_roots(a, b, d);
            assert_eq!(roots.len(), 2);
            for (w1, w2) in roots {
                let r = a * w1 * w1 + 2.0 * b * w1 * w2 + d * w2 * w2;
                assert!(r.norm() < 1e-12, "{a} {b} {d}");
            }
        }
    }

    #[test]
    fn same_state_has_unique_property() {
        let phi = DVector::from_vec(vec![z(0.6, 0.0), z(0.0, 0.8), z(0.0, 0.0)]);
        let t = TwoParticleState::new(&phi * phi.transpose(), Symmetry::Symmetric).unwrap();
        match find_properties(&t).unwrap() {
            PropertySolutions::Finite(v) => {
                assert_eq!(v.len(), 1);
                assert!((v[0].dotc(&phi).norm() - 1.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn orthogonal_pair_has_two_properties() {
        let t = TwoParticleState::from_product(&e(3, 0), &e(3, 2), Symmetry::Symmetric).unwrap();
        let sols = find_properties(&t).unwrap().representatives();
        assert_eq!(sols.len(), 2);
        assert!(sols.iter().any(|p| (p - e(3, 0)).norm() < 1e-12));
        assert!(sols.iter().any(|p| (p - e(3, 2)).norm() < 1e-12));
    }

    #[test]
    fn non_orthogonal_pair_has_two_non_orthogonal_properties() {
        let s = 0.5f64.sqrt();
        let theta = DVector::from_vec(vec![z(s, 0.0), z(s, 0.0)]);
        let t = TwoParticleState::from_product(&e(2, 0), &theta, Symmetry::Symmetric).unwrap();
        let sols = find_properties(&t).unwrap().representatives();
        assert_eq!(sols.len(), 2);
        assert!(sols.iter().any(|p| (p - e(2, 0)).norm() < 1e-12));
        assert!(sols.iter().any(|p| (p - &theta).norm() < 1e-12));
    }

    #[test]
    fn slater_determinant_has_a_family() {
        let s = 0.5f64.sqrt();
        let phi = DVector::from_vec(vec![z(s, 0.0), z(0.0, s), z(0.0, 0.0), z(0.0, 0.0)]);
        let chi = e(4, 3);
        let t = TwoParticleState::from_product(&phi, &chi, Symmetry::Antisymmetric).unwrap();
        let PropertySolutions::Family(basis) = find_properties(&t).unwrap() else {
            panic!("expected a family");
        };
        // Grid over the span: every unit combination is a property.
        for k in 0..24 {
            let angle = k as f64 * std::f64::consts::PI / 12.0;
            let v = &basis[0] * z(angle.cos(), 0.0) + &basis[1] * z(0.0, angle.sin());
            assert!(property_defect(&t, &v).unwrap() < 1e-12);
        }
        assert!(property_defect(&t, &e(4, 2)).unwrap() > 0.5);
    }

    #[test]
    fn rank_three_has_none() {
        let c = DMatrix::from_diagonal(&DVector::from_vec(vec![z(0.6, 0.0), z(0.6, 0.0), z(0.5, 0.0)]));
        let t = TwoParticleState::new(c, Symmetry::Symmetric).unwrap();
        assert_eq!(find_properties(&t).unwrap(), PropertySolutions::None);
    }
}
