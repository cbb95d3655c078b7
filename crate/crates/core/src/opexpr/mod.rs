//! Polynomials in creation and annihilation operators.
//!
//! Expressions are written in a small ASCII grammar (`ad(i)`, `a(i)`,
//! `N(i..j)`, `*`, `+`, `-`, `^k`, complex literals `(re,im)`), parsed into an
//! [`Expr`] tree, evaluated directly on [`FockVector`]s, or rewritten into a
//! [`NormalForm`] with all creators to the left.

mod normal;
mod parse;

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockVector, Statistics};

pub use normal::{normal_order, NormalForm, Term};
pub use parse::parse;

/// Default cap on particle number reached while evaluating an expression.
pub const DEFAULT_MAX_PARTICLES: usize = 64;

/// A linear map on Fock vectors.
pub trait FockOperator {
    fn apply(&self, v: &FockVector) -> Result<FockVector>;

    /// `<v|A v>`.
    fn expectation(&self, v: &FockVector) -> Result<Complex64> {
        let w = self.apply(v)?;
        v.inner(&w)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Scalar(Complex64),
    Create(usize),
    Annihilate(usize),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Power(Box<Expr>, u32),
}

impl Expr {
    pub fn real(x: f64) -> Self {
        Expr::Scalar(Complex64::new(x, 0.0))
    }

    /// `sum_{j in modes} a+_j a_j`.
    pub fn number(modes: impl IntoIterator<Item = usize>) -> Self {
        let terms: Vec<Expr> = modes
            .into_iter()
            .map(|m| Expr::Product(vec![Expr::Create(m), Expr::Annihilate(m)]))
            .collect();
        match terms.len() {
            0 => Expr::real(0.0),
            1 => terms.into_iter().next().unwrap(),
            _ => Expr::Sum(terms),
        }
    }

    /// Largest mode index referenced anywhere in the tree.
    pub fn max_mode(&self) -> usize {
        match self {
            Expr::Scalar(_) => 0,
            Expr::Create(m) | Expr::Annihilate(m) => *m,
            Expr::Sum(xs) | Expr::Product(xs) => xs.iter().map(Expr::max_mode).max().unwrap_or(0),
            Expr::Power(b, _) => b.max_mode(),
        }
    }

    pub fn apply_with(&self, v: &FockVector, max_particles: usize) -> Result<FockVector> {
        match self {
            Expr::Scalar(c) => Ok(v.scale(*c)),
            Expr::Create(m) => {
                let w = v.create(*m)?;
                check_sector(&w, max_particles)?;
                Ok(w)
            }
            Expr::Annihilate(m) => v.annihilate(*m),
            Expr::Sum(terms) => {
                let mut acc = FockVector::zero(v.num_modes(), v.statistics())?;
                for t in terms {
                    let w = t.apply_with(v, max_particles)?;
                    acc.add_assign_unchecked(&w, Complex64::new(1.0, 0.0));
                }
                acc.prune();
                Ok(acc)
            }
            Expr::Product(factors) => {
                let mut w = v.clone();
                for f in factors.iter().rev() {
                    if w.is_zero() {
                        break;
                    }
                    w = f.apply_with(&w, max_particles)?;
                }
                Ok(w)
            }
            Expr::Power(base, k) => {
                let mut w = v.clone();
                for _ in 0..*k {
                    w = base.apply_with(&w, max_particles)?;
                }
                Ok(w)
            }
        }
    }

    pub fn normal_order(&self, statistics: Statistics) -> NormalForm {
        normal_order(self, statistics)
    }

    fn is_atomic(&self) -> bool {
        matches!(self, Expr::Scalar(_) | Expr::Create(_) | Expr::Annihilate(_))
    }
}

impl FockOperator for Expr {
    fn apply(&self, v: &FockVector) -> Result<FockVector> {
        self.apply_with(v, DEFAULT_MAX_PARTICLES)
    }
}

fn check_sector(v: &FockVector, max_particles: usize) -> Result<()> {
    if let Some(&n) = v.particle_numbers().iter().next_back() {
        if n > max_particles {
            return Err(Error::SectorOverflow {
                found: n,
                max: max_particles,
            });
        }
    }
    Ok(())
}

/// Evaluates `e` on `v` by composing ladder operators along the tree.
pub fn apply(e: &Expr, v: &FockVector) -> Result<FockVector> {
    e.apply(v)
}

/// `<v|e v>`.
pub fn expectation(e: &Expr, v: &FockVector) -> Result<Complex64> {
    e.expectation(v)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Scalar(c) => write!(f, "({},{})", c.re, c.im),
            Expr::Create(m) => write!(f, "ad({m})"),
            Expr::Annihilate(m) => write!(f, "a({m})"),
            Expr::Sum(terms) => {
                if terms.is_empty() {
                    return write!(f, "(0,0)");
                }
                for (k, t) in terms.iter().enumerate() {
                    if k > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            Expr::Product(factors) => {
                if factors.is_empty() {
                    return write!(f, "(1,0)");
                }
                for (k, x) in factors.iter().enumerate() {
                    if k > 0 {
                        write!(f, "*")?;
                    }
                    if matches!(x, Expr::Sum(_)) {
                        write!(f, "({x})")?;
                    } else {
                        write!(f, "{x}")?;
                    }
                }
                Ok(())
            }
            Expr::Power(base, k) => {
                if base.is_atomic() {
                    write!(f, "{base}^{k}")
                } else {
                    write!(f, "({base})^{k}")
                }
            }
        }
    }
}

/// A single creation or annihilation operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ladder {
    Create(usize),
    Annihilate(usize),
}

impl Ladder {
    pub fn mode(self) -> usize {
        match self {
            Ladder::Create(m) | Ladder::Annihilate(m) => m,
        }
    }

    pub fn adjoint(self) -> Self {
        match self {
            Ladder::Create(m) => Ladder::Annihilate(m),
            Ladder::Annihilate(m) => Ladder::Create(m),
        }
    }

    fn apply(self, v: &FockVector) -> Result<FockVector> {
        match self {
            Ladder::Create(m) => v.create(m),
            Ladder::Annihilate(m) => v.annihilate(m),
        }
    }
}

/// An ordered product of ladder operators; the leftmost factor acts last.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<Ladder>);

impl Word {
    pub fn normal(creators: &[usize], annihilators: &[usize]) -> Self {
        Word(
            creators
                .iter()
                .map(|&m| Ladder::Create(m))
                .chain(annihilators.iter().map(|&m| Ladder::Annihilate(m)))
                .collect(),
        )
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn adjoint(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.adjoint()).collect())
    }

    pub fn to_expr(&self) -> Expr {
        match self.0.len() {
            0 => Expr::real(1.0),
            1 => ladder_expr(self.0[0]),
            _ => Expr::Product(self.0.iter().copied().map(ladder_expr).collect()),
        }
    }
}

fn ladder_expr(l: Ladder) -> Expr {
    match l {
        Ladder::Create(m) => Expr::Create(m),
        Ladder::Annihilate(m) => Expr::Annihilate(m),
    }
}

impl FockOperator for Word {
    fn apply(&self, v: &FockVector) -> Result<FockVector> {
        let mut w = v.clone();
        for l in self.0.iter().rev() {
            if w.is_zero() {
                break;
            }
            w = l.apply(&w)?;
        }
        Ok(w)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}
