use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{
    check_tol, coefficient_matrix, transfer_operator, Certificate, CoefficientMatrix, ModeBipartition,
    SeparabilityVerdict, Side, Witness,
};
use crate::error::Result;
use crate::fock::{FockVector, Statistics};
use crate::linalg::svd;
use crate::opexpr::{expectation, Expr, NormalForm, Term};

/// Singular values in descending order with the leading singular vectors.
pub(crate) struct LeadingSvd {
    pub sigmas: Vec<f64>,
    pub left: DVector<Complex64>,
    /// Row of `V^dagger`: `C ~ sigma_1 * left * right^T`.
    pub right: DVector<Complex64>,
}

pub(crate) fn leading_svd(m: &DMatrix<Complex64>) -> Result<LeadingSvd> {
    let f = svd(m)?;
    Ok(LeadingSvd {
        left: f.u.column(0).into_owned(),
        right: f.v.column(0).map(|z| z.conj()),
        sigmas: f.singular_values,
    })
}

fn factorial_sqrt(occ: &[u32]) -> f64 {
    occ.iter()
        .map(|&n| (1..=n).map(f64::from).product::<f64>())
        .product::<f64>()
        .sqrt()
}

fn creators(modes: &[usize], occ: &[u32]) -> Vec<usize> {
    modes
        .iter()
        .zip(occ)
        .flat_map(|(&m, &n)| std::iter::repeat_n(m, n as usize))
        .collect()
}

/// `P`, `Q` from the dominant rank-one term of the coefficient matrix, with
/// the largest coefficient of `P` made real positive.
pub(crate) fn rank_one_certificate(
    cm: &CoefficientMatrix,
    b: &ModeBipartition,
    statistics: Statistics,
) -> Result<Certificate> {
    let svd = leading_svd(&cm.matrix)?;
    let sigma = svd.sigmas[0];
    let pivot = svd
        .left
        .iter()
        .enumerate()
        .fold(
            (0, 0.0),
            |best, (i, z)| if z.norm() > best.1 + 1e-12 { (i, z.norm()) } else { best },
        )
        .0;
    let phase = if svd.left[pivot].norm() > 0.0 {
        svd.left[pivot].conj() / svd.left[pivot].norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let p_terms = cm.rows.iter().enumerate().map(|(r, k)| Term {
        coeff: svd.left[r] * phase * sigma / factorial_sqrt(k),
        creators: creators(b.block1(), k),
        annihilators: Vec::new(),
    });
    let q_terms = cm.cols.iter().enumerate().map(|(c, alpha)| Term {
        coeff: svd.right[c] * phase.conj() / factorial_sqrt(alpha),
        creators: creators(b.block2(), alpha),
        annihilators: Vec::new(),
    });
    Ok(Certificate {
        p: NormalForm::from_terms(p_terms, statistics),
        q: NormalForm::from_terms(q_terms, statistics),
    })
}

/// Decides separability by the numerical rank of the coefficient matrix: the
/// state factorizes as `P(block-1 creators) Q(block-2 creators)|0>` exactly
/// when `sigma_2 <= tol * sigma_1`.
///
/// Entangled verdicts carry a witness built from block transfer operators
/// `|p'><p|` and `|beta'><beta|`, chosen where
/// `conj(C[p',beta']) C[p,beta] - rho1[p,p'] rho2[beta,beta']` is largest.
pub fn mode_separability_rank(v: &FockVector, b: &ModeBipartition, tol: f64) -> Result<SeparabilityVerdict> {
    check_tol(tol)?;
    b.check_state(v)?;
    let v = v.normalized()?;
    let cm = coefficient_matrix(&v, b)?;
    let svd = leading_svd(&cm.matrix)?;
    let sigma2 = svd.sigmas.get(1).copied().unwrap_or(0.0);
    if sigma2 <= tol * svd.sigmas[0] {
        return Ok(SeparabilityVerdict {
            separable: true,
            certificate: Some(rank_one_certificate(&cm, b, v.statistics())?),
            witness: None,
        });
    }
    Ok(SeparabilityVerdict {
        separable: false,
        certificate: None,
        witness: Some(transfer_witness(&v, b, &cm)?),
    })
}

fn transfer_witness(v: &FockVector, b: &ModeBipartition, cm: &CoefficientMatrix) -> Result<Witness> {
    let c = &cm.matrix;
    let rho1 = c * c.adjoint();
    let rho2 = c.transpose() * c.map(|z| z.conj());
    let (nr, nc) = c.shape();
    let mut best = (0.0, 0, 0, 0, 0);
    for p in 0..nr {
        for pp in 0..nr {
            for beta in 0..nc {
                for bp in 0..nc {
                    let lhs = c[(pp, bp)].conj() * c[(p, beta)];
                    let rhs = rho1[(p, pp)] * rho2[(beta, bp)];
                    let d = (lhs - rhs).norm();
                    if d > best.0 {
                        best = (d, p, pp, beta, bp);
                    }
                }
            }
        }
    }
    let (_, p, pp, beta, bp) = best;
    let k1 = cm.rows.iter().map(|k| k.iter().sum::<u32>()).max().unwrap_or(0) as usize;
    let k2 = cm.cols.iter().map(|a| a.iter().sum::<u32>()).max().unwrap_or(0) as usize;
    let a1 = transfer_operator(b, Side::One, &cm.rows[pp], &cm.rows[p], k1)?;
    let a2 = transfer_operator(b, Side::Two, &cm.cols[bp], &cm.cols[beta], k2)?;
    let joint = Expr::Product(vec![a1.clone(), a2.clone()]);
    let lhs = expectation(&joint, v)?;
    let rhs = expectation(&a1, v)? * expectation(&a2, v)?;
    Ok(Witness { a1, a2, lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Occupation;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn bose_pair_is_separable_with_local_certificate() {
        let vac = FockVector::vacuum(2, Statistics::Bose).unwrap();
        let psi = vac.create(2).unwrap().create(1).unwrap();
        let b = ModeBipartition::parse("1|2", 2).unwrap();
        let verdict = mode_separability_rank(&psi, &b, 1e-9).unwrap();
        assert!(verdict.separable);
        let cert = verdict.certificate.unwrap();
        assert_eq!(cert.p.terms().len(), 1);
        assert_eq!(cert.p.terms()[0].creators, vec![1]);
        assert_eq!(cert.q.terms()[0].creators, vec![2]);
        let rebuilt = cert.state(2, Statistics::Bose).unwrap();
        assert!(rebuilt.fidelity(&psi).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn vacuum_entanglement_has_witness() {
        let s = 0.5f64.sqrt();
        let v = FockVector::from_amplitudes(
            Statistics::Bose,
            2,
            [(Occupation::new(vec![0, 1]), c(s)), (Occupation::new(vec![1, 0]), c(s))],
        )
        .unwrap();
        let b = ModeBipartition::parse("1|2", 2).unwrap();
        let verdict = mode_separability_rank(&v, &b, 1e-9).unwrap();
        assert!(!verdict.separable);
        let w = verdict.witness.unwrap();
        assert!(w.violation() > 1e-9);
        let lhs = expectation(&Expr::Product(vec![w.a1.clone(), w.a2.clone()]), &v).unwrap();
        assert!((lhs - w.lhs).norm() < 1e-12);
    }

    #[test]
    fn two_mode_superposition_across_blocks_is_entangled() {
        // ((a+_1)^2 + (a+_3)^2)|0>/2 with I1 = {1,2}.
        let vac = FockVector::vacuum(4, Statistics::Bose).unwrap();
        let v = vac
            .create(1)
            .unwrap()
            .create(1)
            .unwrap()
            .add(&vac.create(3).unwrap().create(3).unwrap())
            .unwrap()
            .scale(c(0.5));
        let b = ModeBipartition::parse("1,2|3,4", 4).unwrap();
        assert!(!mode_separability_rank(&v, &b, 1e-9).unwrap().separable);
    }

    #[test]
    fn vacuum_is_separable() {
        let vac = FockVector::vacuum(3, Statistics::Fermi).unwrap();
        let b = ModeBipartition::parse("1|2,3", 3).unwrap();
        let verdict = mode_separability_rank(&vac, &b, 1e-9).unwrap();
        assert!(verdict.separable);
    }

    #[test]
    fn rejects_bad_tolerance() {
        let vac = FockVector::vacuum(2, Statistics::Bose).unwrap();
        let b = ModeBipartition::parse("1|2", 2).unwrap();
        assert!(mode_separability_rank(&vac, &b, 0.0).is_err());
        assert!(mode_separability_rank(&vac, &b, -1.0).is_err());
    }
}
