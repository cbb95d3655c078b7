use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::{Expr, FockOperator, Ladder, Word};
use crate::error::Result;
use crate::fock::{FockVector, Statistics, PRUNE_THRESHOLD};

/// `coeff * a+_{c1} ... a+_{ck} a_{d1} ... a_{dl}` with both lists ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: Complex64,
    pub creators: Vec<usize>,
    pub annihilators: Vec<usize>,
}

impl Term {
    pub fn degree(&self) -> usize {
        self.creators.len() + self.annihilators.len()
    }

    pub fn word(&self) -> Word {
        Word::normal(&self.creators, &self.annihilators)
    }

    pub fn modes(&self) -> impl Iterator<Item = usize> + '_ {
        self.creators.iter().chain(self.annihilators.iter()).copied()
    }
}

/// Sum of normal-ordered terms, sorted by `(creators, annihilators)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NormalForm {
    terms: Vec<Term>,
}

type Key = (Vec<usize>, Vec<usize>);

impl NormalForm {
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = Term>, statistics: Statistics) -> Self {
        let mut acc: BTreeMap<Key, Complex64> = BTreeMap::new();
        for t in terms {
            reorder(t.coeff, t.word().0, statistics, &mut acc);
        }
        Self::from_map(acc)
    }

    fn from_map(acc: BTreeMap<Key, Complex64>) -> Self {
        let terms = acc
            .into_iter()
            .filter(|(_, c)| c.norm() >= PRUNE_THRESHOLD)
            .map(|((creators, annihilators), coeff)| Term {
                coeff,
                creators,
                annihilators,
            })
            .collect();
        NormalForm { terms }
    }

    pub fn to_expr(&self) -> Expr {
        let terms: Vec<Expr> = self
            .terms
            .iter()
            .map(|t| {
                let mut factors = vec![Expr::Scalar(t.coeff)];
                factors.extend(t.creators.iter().map(|&m| Expr::Create(m)));
                factors.extend(t.annihilators.iter().map(|&m| Expr::Annihilate(m)));
                Expr::Product(factors)
            })
            .collect();
        Expr::Sum(terms)
    }

    /// Termwise comparison with absolute coefficient tolerance `tol`.
    pub fn approx_eq(&self, other: &NormalForm, tol: f64) -> bool {
        let mut map: BTreeMap<Key, Complex64> = BTreeMap::new();
        for t in &self.terms {
            *map.entry((t.creators.clone(), t.annihilators.clone())).or_default() += t.coeff;
        }
        for t in &other.terms {
            *map.entry((t.creators.clone(), t.annihilators.clone())).or_default() -= t.coeff;
        }
        map.values().all(|c| c.norm() <= tol)
    }
}

impl FockOperator for NormalForm {
    fn apply(&self, v: &FockVector) -> Result<FockVector> {
        let mut acc = FockVector::zero(v.num_modes(), v.statistics())?;
        for t in &self.terms {
            let w = t.word().apply(v)?;
            acc.add_assign_unchecked(&w, t.coeff);
        }
        acc.prune();
        Ok(acc)
    }
}

/// Rewrites `e` into normal order using the commutation (Bose) or
/// anticommutation (Fermi) relations `a_i a+_j = +/- a+_j a_i + delta_ij`.
pub fn normal_order(e: &Expr, statistics: Statistics) -> NormalForm {
    let mut acc = BTreeMap::new();
    for (coeff, word) in expand(e) {
        reorder(coeff, word, statistics, &mut acc);
    }
    NormalForm::from_map(acc)
}

/// Distributes products over sums; returns `(coefficient, word)` pairs.
fn expand(e: &Expr) -> Vec<(Complex64, Vec<Ladder>)> {
    let one = Complex64::new(1.0, 0.0);
    match e {
        Expr::Scalar(z) => vec![(*z, Vec::new())],
        Expr::Create(m) => vec![(one, vec![Ladder::Create(*m)])],
        Expr::Annihilate(m) => vec![(one, vec![Ladder::Annihilate(*m)])],
        Expr::Sum(ts) => ts.iter().flat_map(expand).collect(),
        Expr::Product(fs) => fs
            .iter()
            .fold(vec![(one, Vec::new())], |acc, f| multiply(&acc, &expand(f))),
        Expr::Power(b, k) => {
            let base = expand(b);
            (0..*k).fold(vec![(one, Vec::new())], |acc, _| multiply(&acc, &base))
        }
    }
}

fn multiply(left: &[(Complex64, Vec<Ladder>)], right: &[(Complex64, Vec<Ladder>)]) -> Vec<(Complex64, Vec<Ladder>)> {
    let mut out = Vec::with_capacity(left.len() * right.len());
    for (a, wa) in left {
        for (b, wb) in right {
            let mut w = wa.clone();
            w.extend_from_slice(wb);
            out.push((a * b, w));
        }
    }
    out
}

/// Adjacent-transposition rewriting to normal order. Each step either lowers
/// the inversion count at fixed degree or drops the degree by two, so the
/// worklist drains.
fn reorder(coeff: Complex64, word: Vec<Ladder>, statistics: Statistics, acc: &mut BTreeMap<Key, Complex64>) {
    let exchange = match statistics {
        Statistics::Bose => 1.0,
        Statistics::Fermi => -1.0,
    };
    let mut stack = vec![(coeff, word)];
    'work: while let Some((c, mut w)) = stack.pop() {
        if c == Complex64::default() {
            continue;
        }
        let mut k = 0;
        while k + 1 < w.len() {
            match (w[k], w[k + 1]) {
                (Ladder::Annihilate(i), Ladder::Create(j)) => {
                    if i == j {
                        let mut contracted = w.clone();
                        contracted.drain(k..k + 2);
                        stack.push((c, contracted));
                    }
                    w.swap(k, k + 1);
                    stack.push((c * exchange, w));
                    continue 'work;
                }
                (Ladder::Create(i), Ladder::Create(j)) | (Ladder::Annihilate(i), Ladder::Annihilate(j)) => {
                    if i == j && statistics == Statistics::Fermi {
                        continue 'work;
                    }
                    if i > j {
                        w.swap(k, k + 1);
                        stack.push((c * exchange, w));
                        continue 'work;
                    }
                }
                (Ladder::Create(_), Ladder::Annihilate(_)) => {}
            }
            k += 1;
        }
        let split = w
            .iter()
            .position(|l| matches!(l, Ladder::Annihilate(_)))
            .unwrap_or(w.len());
        let creators = w[..split].iter().map(|l| l.mode()).collect();
        let annihilators = w[split..].iter().map(|l| l.mode()).collect();
        *acc.entry((creators, annihilators)).or_default() += c;
    }
}

fn write_coeff(f: &mut fmt::Formatter<'_>, z: Complex64) -> fmt::Result {
    write!(f, "({:.16e},{:.16e})", z.re, z.im)
}

impl fmt::Display for NormalForm {
    /// Terms in `(creators, annihilators)` order; coefficients carry 17
    /// significant digits and the output parses back with [`super::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write_coeff(f, Complex64::default());
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write_coeff(f, t.coeff)?;
            for m in &t.creators {
                write!(f, "*ad({m})")?;
            }
            for m in &t.annihilators {
                write!(f, "*a({m})")?;
            }
        }
        Ok(())
    }
}
