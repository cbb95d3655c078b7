use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::ModeBipartition;
use crate::error::{Error, Result};
use crate::fock::{FockVector, Occupation, Statistics};

/// Amplitudes arranged as `C[{k}, {alpha}]` with rows labelled by block-1
/// occupations and columns by block-2 occupations, relative to the
/// block-ordered basis `(block-1 creators)(block-2 creators)|0> / sqrt(n!)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix {
    /// Block-1 occupations, one entry per block-1 mode in ascending mode order.
    pub rows: Vec<Vec<u32>>,
    pub cols: Vec<Vec<u32>>,
    pub matrix: DMatrix<Complex64>,
}

impl CoefficientMatrix {
    /// Inverse of [`coefficient_matrix`].
    pub fn to_fock(&self, b: &ModeBipartition, statistics: Statistics) -> Result<FockVector> {
        let mut amps = Vec::new();
        for (r, k) in self.rows.iter().enumerate() {
            for (c, alpha) in self.cols.iter().enumerate() {
                let z = self.matrix[(r, c)];
                if z == Complex64::default() {
                    continue;
                }
                let occ = merge(b, k, alpha);
                let sign = block_order_sign(&occ, b, statistics);
                amps.push((occ, z * sign));
            }
        }
        FockVector::from_amplitudes(statistics, b.num_modes(), amps)
    }
}

fn merge(b: &ModeBipartition, k: &[u32], alpha: &[u32]) -> Occupation {
    let mut occ = vec![0; b.num_modes()];
    for (&m, &n) in b.block1().iter().zip(k) {
        occ[m - 1] = n;
    }
    for (&m, &n) in b.block2().iter().zip(alpha) {
        occ[m - 1] = n;
    }
    Occupation::new(occ)
}

fn restrict(occ: &Occupation, modes: &[usize]) -> Vec<u32> {
    modes.iter().map(|&m| occ.get(m)).collect()
}

/// Sign relating the mode-ordered basis vector to the block-ordered one:
/// `|n> = sign * |{k};{alpha}>`. One transposition per occupied block-2 mode
/// sitting below an occupied block-1 mode.
pub(crate) fn block_order_sign(occ: &Occupation, b: &ModeBipartition, statistics: Statistics) -> f64 {
    if statistics == Statistics::Bose {
        return 1.0;
    }
    let mut swaps = 0usize;
    for &j in b.block1() {
        if occ.get(j) == 0 {
            continue;
        }
        swaps += b.block2().iter().filter(|&&i| i < j && occ.get(i) == 1).count();
    }
    if swaps.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// For fermions, requires a definite particle-number parity in each block.
pub fn check_fermi_parity(v: &FockVector, b: &ModeBipartition) -> Result<()> {
    if v.statistics() != Statistics::Fermi {
        return Ok(());
    }
    for (block, modes) in [(1u8, b.block1()), (2u8, b.block2())] {
        let parities: BTreeSet<u32> = v
            .iter()
            .map(|(occ, _)| restrict(occ, modes).iter().sum::<u32>() % 2)
            .collect();
        if parities.len() > 1 {
            return Err(Error::FermiParityIndefinite { block });
        }
    }
    Ok(())
}

/// Coefficient matrix of `v` with respect to `b`. Rows and columns range over
/// every block occupation present in `v`, across all particle-number sectors.
pub fn coefficient_matrix(v: &FockVector, b: &ModeBipartition) -> Result<CoefficientMatrix> {
    b.check_state(v)?;
    check_fermi_parity(v, b)?;
    let mut rows: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    let mut cols: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    for (occ, _) in v.iter() {
        rows.insert(restrict(occ, b.block1()), 0);
        cols.insert(restrict(occ, b.block2()), 0);
    }
    for (i, idx) in rows.values_mut().enumerate() {
        *idx = i;
    }
    for (i, idx) in cols.values_mut().enumerate() {
        *idx = i;
    }
    let mut matrix = DMatrix::zeros(rows.len(), cols.len());
    for (occ, amp) in v.iter() {
        let r = rows[&restrict(occ, b.block1())];
        let c = cols[&restrict(occ, b.block2())];
        matrix[(r, c)] = amp * block_order_sign(occ, b, v.statistics());
    }
    Ok(CoefficientMatrix {
        rows: rows.into_keys().collect(),
        cols: cols.into_keys().collect(),
        matrix,
    })
}
