use num_complex::Complex64;
use rayon::prelude::*;

use super::{
    check_fermi_parity, check_tol, coefficient_matrix, rank::rank_one_certificate, ModeBipartition,
    SeparabilityVerdict, Witness,
};
use crate::error::{Error, Result};
use crate::fock::{FockVector, Statistics};
use crate::opexpr::{FockOperator, Word};

pub const DEFAULT_PAIR_BUDGET: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    pub max_degree: usize,
    pub tol: f64,
    /// Upper bound on the number of monomial pairs examined.
    pub pair_budget: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            max_degree: 4,
            tol: super::DEFAULT_TOL,
            pair_budget: DEFAULT_PAIR_BUDGET,
        }
    }
}

/// Tests `<A1 A2> = <A1><A2>` over every pair of normal-ordered monomials
/// `A1` on block 1 and `A2` on block 2 with `1 <= degree <= max_degree`
/// (fermionic odd-odd pairs excluded). Pairs are visited by ascending total
/// degree, then lexicographically; the first violation above `tol` is the witness.
///
/// A violation proves entanglement. For two-particle states a degree cap of 4
/// already contains every block transfer operator, so the test is complete there.
pub fn correlation_oracle(
    v: &FockVector,
    b: &ModeBipartition,
    max_degree: usize,
    tol: f64,
) -> Result<SeparabilityVerdict> {
    correlation_oracle_with(
        v,
        b,
        &OracleOptions {
            max_degree,
            tol,
            ..OracleOptions::default()
        },
    )
}

pub fn correlation_oracle_with(
    v: &FockVector,
    b: &ModeBipartition,
    opts: &OracleOptions,
) -> Result<SeparabilityVerdict> {
    check_tol(opts.tol)?;
    if opts.max_degree < 2 {
        return Err(Error::InvalidMaxDegree(opts.max_degree));
    }
    b.check_state(v)?;
    check_fermi_parity(v, b)?;
    let psi = v.normalized()?;
    let stats = psi.statistics();

    let left = block_monomials(b.block1(), opts.max_degree, stats);
    let right = block_monomials(b.block2(), opts.max_degree, stats);

    let admissible = |i: usize, j: usize| {
        stats == Statistics::Bose || left[i].degree().is_multiple_of(2) || right[j].degree().is_multiple_of(2)
    };
    let odd_left = left.iter().filter(|w| w.degree() % 2 == 1).count();
    let odd_right = right.iter().filter(|w| w.degree() % 2 == 1).count();
    let needed = match stats {
        Statistics::Bose => left.len() * right.len(),
        Statistics::Fermi => left.len() * right.len() - odd_left * odd_right,
    };
    if needed > opts.pair_budget {
        return Err(Error::BudgetExceeded {
            needed,
            cap: opts.pair_budget,
        });
    }

    // <psi| A1 A2 |psi> = <A1^dagger psi | A2 psi>
    let bras: Vec<(FockVector, Complex64)> = left
        .par_iter()
        .map(|w| {
            let bra = w.adjoint().apply(&psi)?;
            let mean = bra.inner_unchecked(&psi);
            Ok((bra, mean))
        })
        .collect::<Result<_>>()?;
    let kets: Vec<(FockVector, Complex64)> = right
        .par_iter()
        .map(|w| {
            let ket = w.apply(&psi)?;
            let mean = psi.inner_unchecked(&ket);
            Ok((ket, mean))
        })
        .collect::<Result<_>>()?;

    let mut pairs: Vec<(usize, usize)> = (0..left.len())
        .flat_map(|i| (0..right.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| admissible(i, j))
        .collect();
    pairs.sort_by_key(|&(i, j)| (left[i].degree() + right[j].degree(), i, j));

    let evaluate = |&(i, j): &(usize, usize)| {
        let lhs = bras[i].0.inner_unchecked(&kets[j].0);
        let rhs = bras[i].1 * kets[j].1;
        (lhs, rhs)
    };
    let hit = pairs.par_iter().position_first(|pair| {
        let (lhs, rhs) = evaluate(pair);
        (lhs - rhs).norm() > opts.tol
    });

    match hit {
        Some(idx) => {
            let (i, j) = pairs[idx];
            let (lhs, rhs) = evaluate(&pairs[idx]);
            Ok(SeparabilityVerdict {
                separable: false,
                certificate: None,
                witness: Some(Witness {
                    a1: left[i].to_expr(),
                    a2: right[j].to_expr(),
                    lhs,
                    rhs,
                }),
            })
        }
        None => {
            let cm = coefficient_matrix(&psi, b)?;
            Ok(SeparabilityVerdict {
                separable: true,
                certificate: Some(rank_one_certificate(&cm, b, stats)?),
                witness: None,
            })
        }
    }
}

/// Normal-ordered monomials on `modes` with degree in `1..=max_degree`,
/// sorted by `(degree, creators, annihilators)`.
fn block_monomials(modes: &[usize], max_degree: usize, stats: Statistics) -> Vec<Word> {
    let mut by_size: Vec<Vec<Vec<usize>>> = Vec::new();
    for size in 0..=max_degree {
        let mut out = Vec::new();
        combinations(modes, size, stats == Statistics::Bose, 0, &mut Vec::new(), &mut out);
        by_size.push(out);
    }
    let mut keyed = Vec::new();
    for nc in 0..=max_degree {
        for na in 0..=(max_degree - nc) {
            if nc + na == 0 {
                continue;
            }
            for cr in &by_size[nc] {
                for an in &by_size[na] {
                    keyed.push((nc + na, cr.clone(), an.clone()));
                }
            }
        }
    }
    keyed.sort();
    keyed.into_iter().map(|(_, cr, an)| Word::normal(&cr, &an)).collect()
}

fn combinations(
    modes: &[usize],
    size: usize,
    repeat: bool,
    start: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if current.len() == size {
        out.push(current.clone());
        return;
    }
    for k in start..modes.len() {
        current.push(modes[k]);
        combinations(modes, size, repeat, if repeat { k } else { k + 1 }, current, out);
        current.pop();
    }
}
