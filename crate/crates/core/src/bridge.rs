//! Conversions between coefficient matrices and Fock vectors, passive mode
//! rotations, and the comparison of the two separability notions.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{FockVector, Occupation, Statistics};
use crate::gmw::{
    find_properties, Classification, SingleParticleVector, Symmetry, TakagiClassifier, TwoParticleClassifier,
    TwoParticleState, Verdict,
};
use crate::linalg::svd;
use crate::modesep::{mode_separability_rank, ModeBipartition, SeparabilityVerdict, Witness, DEFAULT_TOL};
use crate::opexpr::{expectation, Expr};

const UNITARY_TOL: f64 = 1e-12;

pub fn statistics_of(symmetry: Symmetry) -> Result<Statistics> {
    match symmetry {
        Symmetry::Symmetric => Ok(Statistics::Bose),
        Symmetry::Antisymmetric => Ok(Statistics::Fermi),
        Symmetry::None => Err(Error::DistinguishableParticles),
    }
}

/// `|1_i 1_j>` (i < j) receives `sqrt(2) C[i,j]`; `|2_i>` receives `C[i,i]`.
pub fn first_to_second(t: &TwoParticleState) -> Result<FockVector> {
    let stats = statistics_of(t.symmetry())?;
    let m = t.dim();
    let c = t.coefficients();
    let sqrt2 = 2f64.sqrt();
    let mut amps = Vec::new();
    for i in 0..m {
        if stats == Statistics::Bose {
            let mut occ = vec![0; m];
            occ[i] = 2;
            amps.push((Occupation::new(occ), c[(i, i)]));
        } else if c[(i, i)].norm() > 1e-9 {
            return Err(Error::InvalidTwoParticleState(
                "antisymmetric state with nonzero diagonal".into(),
            ));
        }
        for j in i + 1..m {
            let mut occ = vec![0; m];
            occ[i] = 1;
            occ[j] = 1;
            amps.push((Occupation::new(occ), c[(i, j)] * sqrt2));
        }
    }
    FockVector::from_amplitudes(stats, m, amps)
}

/// Inverse of [`first_to_second`] on the two-particle sector.
pub fn second_to_first(v: &FockVector) -> Result<TwoParticleState> {
    if v.is_zero() {
        return Err(Error::ZeroNorm);
    }
    if v.particle_numbers().into_iter().any(|n| n != 2) {
        return Err(Error::WrongSector { expected: 2 });
    }
    let m = v.num_modes();
    let sign = match v.statistics() {
        Statistics::Bose => 1.0,
        Statistics::Fermi => -1.0,
    };
    let mut c = DMatrix::zeros(m, m);
    for (occ, amp) in v.iter() {
        let modes: Vec<usize> = (0..m)
            .flat_map(|i| std::iter::repeat_n(i, occ.as_slice()[i] as usize))
            .collect();
        let (i, j) = (modes[0], modes[1]);
        if i == j {
            c[(i, i)] = *amp;
        } else {
            c[(i, j)] = amp / 2f64.sqrt();
            c[(j, i)] = amp * sign / 2f64.sqrt();
        }
    }
    let symmetry = match v.statistics() {
        Statistics::Bose => Symmetry::Symmetric,
        Statistics::Fermi => Symmetry::Antisymmetric,
    };
    TwoParticleState::new(c, symmetry)
}

/// Unitary single-particle basis change.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeRotation {
    matrix: DMatrix<Complex64>,
}

impl ModeRotation {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let (r, c) = matrix.shape();
        if r != c {
            return Err(Error::DimensionMismatch(r, c));
        }
        let deviation = (matrix.adjoint() * &matrix - DMatrix::identity(r, r))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary(deviation));
        }
        Ok(ModeRotation { matrix })
    }

    pub fn identity(num_modes: usize) -> Self {
        ModeRotation {
            matrix: DMatrix::identity(num_modes, num_modes),
        }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn num_modes(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn inverse(&self) -> Self {
        ModeRotation {
            matrix: self.matrix.adjoint(),
        }
    }

    /// `C -> U C U^T`.
    pub fn apply_first(&self, t: &TwoParticleState) -> Result<TwoParticleState> {
        if t.dim() != self.num_modes() {
            return Err(Error::DimensionMismatch(self.num_modes(), t.dim()));
        }
        TwoParticleState::new(&self.matrix * t.coefficients() * self.matrix.transpose(), t.symmetry())
    }
}

/// Substitutes `a+_i -> sum_j U[j,i] a+_j` in every basis monomial.
pub fn rotate_modes(v: &FockVector, u: &ModeRotation) -> Result<FockVector> {
    let m = v.num_modes();
    if u.num_modes() != m {
        return Err(Error::DimensionMismatch(m, u.num_modes()));
    }
    let vac = FockVector::vacuum(m, v.statistics())?;
    let mut out = FockVector::zero(m, v.statistics())?;
    for (occ, amp) in v.iter() {
        let mut w = vac.clone();
        let mut norm = 1.0;
        for i in (1..=m).rev() {
            for k in 1..=occ.get(i) {
                norm *= f64::from(k);
                let mut next = FockVector::zero(m, v.statistics())?;
                for j in 1..=m {
                    let coeff = u.matrix[(j - 1, i - 1)];
                    if coeff != Complex64::default() {
                        next.add_assign_unchecked(&w.create(j)?, coeff);
                    }
                }
                next.prune();
                w = next;
            }
        }
        out.add_assign_unchecked(&w, amp / norm.sqrt());
    }
    out.prune();
    Ok(out)
}

/// A rotation whose first column is `phi0`, completed by Gram-Schmidt over the
/// standard basis vectors other than the largest component of `phi0`, and the
/// bipartition `{1} | {2..M}`.
pub fn distinguished_bipartition(phi0: &SingleParticleVector) -> Result<(ModeRotation, ModeBipartition)> {
    let m = phi0.len();
    if m < 2 {
        return Err(Error::InvalidBipartition("at least two modes are required".into()));
    }
    let n = phi0.norm();
    if n == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let first = phi0 / Complex64::new(n, 0.0);
    let pivot = (0..m).fold(0, |best, k| if first[k].norm() > first[best].norm() { k } else { best });
    let mut columns = vec![first];
    for k in (0..m).filter(|&k| k != pivot) {
        let mut v = DVector::zeros(m);
        v[k] = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            for q in &columns {
                let overlap = q.dotc(&v);
                v -= q * overlap;
            }
        }
        let nv = v.norm();
        columns.push(v / Complex64::new(nv, 0.0));
    }
    let rotation = ModeRotation::new(DMatrix::from_columns(&columns))?;
    Ok((rotation, ModeBipartition::from_block1(m, [1])?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseTag {
    Fermi,
    Bose1,
    Bose2,
    Bose3,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::Fermi => "fermi",
            CaseTag::Bose1 => "bose1",
            CaseTag::Bose2 => "bose2",
            CaseTag::Bose3 => "bose3",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossCheckReport {
    pub gmw: Classification,
    pub mode: SeparabilityVerdict,
    pub agree: bool,
    pub case: CaseTag,
    /// The single-particle vector placed in mode 1 for `mode`.
    pub phi0: SingleParticleVector,
    /// Rotation used for `mode`; its first column is `phi0`.
    pub rotation: ModeRotation,
}

/// Compares the property-attribution verdict with mode separability under
/// the bipartition that isolates each admissible `phi0` in its own mode.
pub fn cross_check(t: &TwoParticleState) -> Result<CrossCheckReport> {
    cross_check_with(t, &TakagiClassifier, DEFAULT_TOL)
}

pub fn cross_check_with(
    t: &TwoParticleState,
    classifier: &dyn TwoParticleClassifier,
    tol: f64,
) -> Result<CrossCheckReport> {
    let gmw = classifier.classify(t)?;
    let fock = first_to_second(t)?;

    let mut candidates: Vec<SingleParticleVector> = gmw.attributes.iter().map(|a| a.phi0.clone()).collect();
    candidates.extend(find_properties(t)?.representatives());
    if candidates.is_empty() {
        candidates.push(svd(t.coefficients())?.u.column(0).into_owned());
    }

    let mut first = None;
    for phi0 in candidates {
        let (rotation, b) = distinguished_bipartition(&phi0)?;
        let rotated = rotate_modes(&fock, &rotation.inverse())?;
        let verdict = match mode_separability_rank(&rotated, &b, tol) {
            Err(Error::FermiParityIndefinite { .. }) => number_witness(&rotated, &b, tol)?,
            other => other?,
        };
        if verdict.separable {
            first = Some((verdict, phi0, rotation));
            break;
        }
        first.get_or_insert((verdict, phi0, rotation));
    }
    let (mode, phi0, rotation) = first.expect("at least one candidate");

    let case = match gmw.verdict {
        Verdict::FermiSeparable | Verdict::FermiNotApplicable => CaseTag::Fermi,
        Verdict::BoseSameState => CaseTag::Bose1,
        Verdict::BoseOrthogonal => CaseTag::Bose2,
        Verdict::BoseEntangled => CaseTag::Bose3,
    };
    Ok(CrossCheckReport {
        agree: gmw.verdict.is_separable() == mode.separable,
        gmw,
        mode,
        case,
        phi0,
        rotation,
    })
}

/// Block particle numbers are even, hence always a local pair. With a fixed
/// total particle number their covariance is `-Var(N_1)`, which is nonzero
/// exactly when the block-1 parity is indefinite.
fn number_witness(v: &FockVector, b: &ModeBipartition, tol: f64) -> Result<SeparabilityVerdict> {
    let a1 = Expr::number(b.block1().iter().copied());
    let a2 = Expr::number(b.block2().iter().copied());
    let psi = v.normalized()?;
    let lhs = expectation(&Expr::Product(vec![a1.clone(), a2.clone()]), &psi)?;
    let rhs = expectation(&a1, &psi)? * expectation(&a2, &psi)?;
    let witness = Witness { a1, a2, lhs, rhs };
    if witness.violation() <= tol {
        return Err(Error::FermiParityIndefinite { block: 1 });
    }
    Ok(SeparabilityVerdict {
        separable: false,
        certificate: None,
        witness: Some(witness),
    })
}
