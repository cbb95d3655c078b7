use num_complex::Complex64;

use super::{ModeBipartition, Side};
use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::opexpr::{Expr, FockOperator};

/// Projector onto states with no particles in a block of modes, i.e. the
/// residue at `z = 0` of `(z - N_block)^-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VacuumBlockProjector {
    modes: Vec<usize>,
}

impl VacuumBlockProjector {
    pub fn new(modes: Vec<usize>) -> Self {
        VacuumBlockProjector { modes }
    }

    pub fn modes(&self) -> &[usize] {
        &self.modes
    }

    /// `prod_{n=1..K} (1 - N_block / n)`, which coincides with the projector on
    /// every state holding at most `K` particles in the block.
    pub fn to_expr(&self, max_block_particles: usize) -> Expr {
        if max_block_particles == 0 {
            return Expr::real(1.0);
        }
        let factors = (1..=max_block_particles)
            .map(|n| {
                Expr::Sum(vec![
                    Expr::real(1.0),
                    Expr::Product(vec![
                        Expr::real(-1.0 / n as f64),
                        Expr::number(self.modes.iter().copied()),
                    ]),
                ])
            })
            .collect();
        Expr::Product(factors)
    }
}

impl FockOperator for VacuumBlockProjector {
    fn apply(&self, v: &FockVector) -> Result<FockVector> {
        for &m in &self.modes {
            v.check_mode(m)?;
        }
        let kept = v
            .iter()
            .filter(|(occ, _)| self.modes.iter().all(|&m| occ.get(m) == 0))
            .map(|(occ, amp)| (occ.clone(), *amp));
        FockVector::from_amplitudes(v.statistics(), v.num_modes(), kept)
    }

    fn expectation(&self, v: &FockVector) -> Result<Complex64> {
        let w = self.apply(v)?;
        v.inner(&w)
    }
}

pub fn vacuum_block_projector(b: &ModeBipartition, side: Side) -> VacuumBlockProjector {
    VacuumBlockProjector::new(b.block(side).to_vec())
}

/// Block-local transfer operator `X_to * Pi_0 * X_from^dagger` where
/// `X_n = prod_{i in block} (a+_i)^{n_i}` in ascending mode order.
///
/// On a state `sum C[k, alpha] |{k};{alpha}>` its expectation is
/// `sqrt(to! from!) * sum_alpha conj(C[to, alpha]) C[from, alpha]` (block 1),
/// and analogously for block 2.
pub fn transfer_operator(
    b: &ModeBipartition,
    side: Side,
    to: &[u32],
    from: &[u32],
    max_block_particles: usize,
) -> Result<Expr> {
    let modes = b.block(side);
    if to.len() != modes.len() || from.len() != modes.len() {
        return Err(Error::InvalidOccupation(format!(
            "block occupation must have {} entries",
            modes.len()
        )));
    }
    let mut factors = Vec::new();
    for (&m, &n) in modes.iter().zip(to) {
        push_power(&mut factors, Expr::Create(m), n);
    }
    let projector = VacuumBlockProjector::new(modes.to_vec()).to_expr(max_block_particles);
    if let Expr::Product(ps) = projector {
        factors.extend(ps);
    }
    for (&m, &n) in modes.iter().zip(from).rev() {
        push_power(&mut factors, Expr::Annihilate(m), n);
    }
    Ok(match factors.len() {
        0 => Expr::real(1.0),
        1 => factors.pop().unwrap(),
        _ => Expr::Product(factors),
    })
}

fn push_power(factors: &mut Vec<Expr>, op: Expr, n: u32) {
    match n {
        0 => {}
        1 => factors.push(op),
        _ => factors.push(Expr::Power(Box::new(op), n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{Occupation, Statistics};

    #[test]
    fn projector_kills_occupied_block() {
        let b = ModeBipartition::parse("1|2", 2).unwrap();
        let proj = vacuum_block_projector(&b, Side::One);
        let v11 = FockVector::basis(Statistics::Bose, Occupation::new(vec![1, 1])).unwrap();
        assert!(proj.apply(&v11).unwrap().is_zero());
        let v02 = FockVector::basis(Statistics::Bose, Occupation::new(vec![0, 2])).unwrap();
        assert_eq!(proj.apply(&v02).unwrap(), v02);
    }

    #[test]
    fn polynomial_form_matches_on_bounded_sectors() {
        let b = ModeBipartition::parse("1,3|2", 3).unwrap();
        let proj = vacuum_block_projector(&b, Side::One);
        let poly = proj.to_expr(3);
        for n in 0..=3 {
            for occ in crate::fock::enumerate_sector(3, n, Statistics::Bose).unwrap() {
                let v = FockVector::basis(Statistics::Bose, occ).unwrap();
                let exact = proj.apply(&v).unwrap();
                let approx = poly.apply(&v).unwrap();
                assert!(exact.max_abs_diff(&approx).unwrap() < 1e-12);
            }
        }
    }
}
