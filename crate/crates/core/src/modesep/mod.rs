//! Mode bipartitions and the mode-based separability deciders.
//!
//! A bipartition splits the mode set into two blocks; the operators built
//! from each block's ladder operators form the two local subalgebras. A pure
//! state is separable with respect to the split when every local product
//! `A1 A2` has factorized expectation, which holds exactly when the state is
//! `P(block-1 creators) Q(block-2 creators) |0>`.

mod coefficients;
mod oracle;
mod projector;
mod rank;
mod registry;

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockVector, Statistics};
use crate::opexpr::{Expr, FockOperator, NormalForm, Term};

pub use coefficients::{check_fermi_parity, coefficient_matrix, CoefficientMatrix};
pub use oracle::{correlation_oracle, correlation_oracle_with, OracleOptions, DEFAULT_PAIR_BUDGET};
pub use projector::{transfer_operator, vacuum_block_projector, VacuumBlockProjector};
pub use rank::mode_separability_rank;
pub use registry::{CorrelationDecider, DeciderOptions, DeciderRegistry, RankDecider, SeparabilityDecider};

/// Default relative/absolute decision tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    One,
    Two,
}

/// Disjoint cover `(I1, I2)` of the modes `1..=M`, both blocks non-empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModeBipartition {
    num_modes: usize,
    block1: Vec<usize>,
    block2: Vec<usize>,
}

impl ModeBipartition {
    pub fn new(
        num_modes: usize,
        block1: impl IntoIterator<Item = usize>,
        block2: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let b1: BTreeSet<usize> = block1.into_iter().collect();
        let b2: BTreeSet<usize> = block2.into_iter().collect();
        if b1.is_empty() || b2.is_empty() {
            return Err(Error::InvalidBipartition("both blocks must be non-empty".into()));
        }
        if let Some(m) = b1.intersection(&b2).next() {
            return Err(Error::InvalidBipartition(format!("mode {m} appears in both blocks")));
        }
        for &m in b1.iter().chain(b2.iter()) {
            if m == 0 || m > num_modes {
                return Err(Error::InvalidBipartition(format!("mode {m} outside 1..={num_modes}")));
            }
        }
        if b1.len() + b2.len() != num_modes {
            return Err(Error::InvalidBipartition(format!(
                "blocks cover {} of {num_modes} modes",
                b1.len() + b2.len()
            )));
        }
        Ok(ModeBipartition {
            num_modes,
            block1: b1.into_iter().collect(),
            block2: b2.into_iter().collect(),
        })
    }

    /// `block1 | complement`.
    pub fn from_block1(num_modes: usize, block1: impl IntoIterator<Item = usize>) -> Result<Self> {
        let b1: BTreeSet<usize> = block1.into_iter().collect();
        let b2: Vec<usize> = (1..=num_modes).filter(|m| !b1.contains(m)).collect();
        Self::new(num_modes, b1, b2)
    }

    /// Parses `"1,2|3,4"`.
    pub fn parse(text: &str, num_modes: usize) -> Result<Self> {
        let (left, right) = text
            .split_once('|')
            .ok_or_else(|| Error::InvalidBipartition(format!("`{text}` has no `|` separator")))?;
        let modes = |s: &str| -> Result<Vec<usize>> {
            s.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::InvalidBipartition(format!("`{t}` is not a mode index")))
                })
                .collect()
        };
        Self::new(num_modes, modes(left)?, modes(right)?)
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn block1(&self) -> &[usize] {
        &self.block1
    }

    pub fn block2(&self) -> &[usize] {
        &self.block2
    }

    pub fn block(&self, side: Side) -> &[usize] {
        match side {
            Side::One => &self.block1,
            Side::Two => &self.block2,
        }
    }

    pub fn side_of(&self, mode: usize) -> Option<Side> {
        if self.block1.binary_search(&mode).is_ok() {
            Some(Side::One)
        } else if self.block2.binary_search(&mode).is_ok() {
            Some(Side::Two)
        } else {
            None
        }
    }

    pub fn swapped(&self) -> Self {
        ModeBipartition {
            num_modes: self.num_modes,
            block1: self.block2.clone(),
            block2: self.block1.clone(),
        }
    }

    pub(crate) fn check_state(&self, v: &FockVector) -> Result<()> {
        if v.num_modes() != self.num_modes {
            return Err(Error::DimensionMismatch(self.num_modes, v.num_modes()));
        }
        Ok(())
    }
}

impl fmt::Display for ModeBipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |b: &[usize]| b.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{}|{}", join(&self.block1), join(&self.block2))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockClass {
    One,
    Two,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalityClass {
    pub block: BlockClass,
    pub parity: Parity,
}

impl LocalityClass {
    /// Whether `(self, other)` with `self` on block 1 and `other` on block 2
    /// forms a local product. Fermionic odd-odd pairs anticommute and are excluded.
    pub fn admissible_with(&self, other: &LocalityClass, statistics: Statistics) -> bool {
        if self.block != BlockClass::One || other.block != BlockClass::Two {
            return false;
        }
        !(statistics == Statistics::Fermi && self.parity == Parity::Odd && other.parity == Parity::Odd)
    }
}

/// Block membership and degree parity of a normal-ordered term. Scalar terms
/// lie in both subalgebras and are reported as block `One`.
pub fn classify_monomial(term: &Term, b: &ModeBipartition, _statistics: Statistics) -> LocalityClass {
    let sides: BTreeSet<Option<Side>> = term.modes().map(|m| b.side_of(m)).collect();
    let block = match (sides.len(), sides.iter().next()) {
        (0, _) => BlockClass::One,
        (1, Some(Some(Side::One))) => BlockClass::One,
        (1, Some(Some(Side::Two))) => BlockClass::Two,
        _ => BlockClass::Mixed,
    };
    let parity = if term.degree().is_multiple_of(2) {
        Parity::Even
    } else {
        Parity::Odd
    };
    LocalityClass { block, parity }
}

/// Local creator polynomials with `P * Q |0>` equal to the analysed state.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub p: NormalForm,
    pub q: NormalForm,
}

impl Certificate {
    /// `P Q |0>`.
    pub fn state(&self, num_modes: usize, statistics: Statistics) -> Result<FockVector> {
        let vac = FockVector::vacuum(num_modes, statistics)?;
        self.p.apply(&self.q.apply(&vac)?)
    }
}

/// Local pair whose correlation does not factorize.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub a1: Expr,
    pub a2: Expr,
    /// `<A1 A2>`
    pub lhs: Complex64,
    /// `<A1><A2>`
    pub rhs: Complex64,
}

impl Witness {
    pub fn violation(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparabilityVerdict {
    pub separable: bool,
    pub certificate: Option<Certificate>,
    pub witness: Option<Witness>,
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol.is_nan() || tol <= 0.0 || !tol.is_finite() {
        return Err(Error::InvalidTolerance(tol));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opexpr::{normal_order, parse};

    fn first_term(src: &str, s: Statistics) -> Term {
        normal_order(&parse(src).unwrap(), s).terms()[0].clone()
    }

    #[test]
    fn parse_bipartition() {
        let b = ModeBipartition::parse("1,2|3,4", 4).unwrap();
        assert_eq!(b.block1(), &[1, 2]);
        assert_eq!(b.block2(), &[3, 4]);
        assert_eq!(b.to_string(), "1,2|3,4");
        assert!(ModeBipartition::parse("1,2|2,3", 3).is_err());
        assert!(ModeBipartition::parse("1|", 1).is_err());
        assert!(ModeBipartition::parse("1|3", 3).is_err());
        assert!(ModeBipartition::parse("1,2,3", 3).is_err());
        assert!(ModeBipartition::parse("1|x", 2).is_err());
    }

    #[test]
    fn classify_terms() {
        let b = ModeBipartition::parse("1|2", 2).unwrap();
        let t = first_term("ad(1)*a(1)", Statistics::Bose);
        assert_eq!(
            classify_monomial(&t, &b, Statistics::Bose),
            LocalityClass {
                block: BlockClass::One,
                parity: Parity::Even
            }
        );
        let b3 = ModeBipartition::parse("1,2|3", 3).unwrap();
        let mixed = first_term("ad(1)*ad(3)", Statistics::Bose);
        assert_eq!(
            classify_monomial(&mixed, &b3, Statistics::Bose).block,
            BlockClass::Mixed
        );
    }

    #[test]
    fn fermionic_odd_odd_pair_is_not_local() {
        let b = ModeBipartition::parse("1|2", 2).unwrap();
        let c1 = classify_monomial(&first_term("ad(1)", Statistics::Fermi), &b, Statistics::Fermi);
        let c2 = classify_monomial(&first_term("ad(2)", Statistics::Fermi), &b, Statistics::Fermi);
        assert_eq!(c1.parity, Parity::Odd);
        assert!(!c1.admissible_with(&c2, Statistics::Fermi));
        assert!(c1.admissible_with(&c2, Statistics::Bose));
        let even = classify_monomial(&first_term("ad(2)*a(2)", Statistics::Fermi), &b, Statistics::Fermi);
        assert!(c1.admissible_with(&even, Statistics::Fermi));
    }
}
