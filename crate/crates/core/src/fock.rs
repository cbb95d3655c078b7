//! Occupation-number representation of bosonic and fermionic Fock space.
//!
//! Modes are labelled `1..=M` everywhere in the public API. A basis state
//! `|n_1, ..., n_M>` is `(a+_1)^n_1 ... (a+_M)^n_M |0> / sqrt(prod n_j!)`,
//! i.e. creators are applied in ascending mode order from the left. For
//! fermions this fixes the sign convention: `a+_i` and `a_i` pick up
//! `(-1)^(number of occupied modes j < i)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Amplitudes below this magnitude are dropped after every operator application.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Bose,
    Fermi,
}

impl Statistics {
    pub fn as_str(self) -> &'static str {
        match self {
            Statistics::Bose => "bose",
            Statistics::Fermi => "fermi",
        }
    }
}

impl std::str::FromStr for Statistics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bose" | "boson" | "bosons" => Ok(Statistics::Bose),
            "fermi" | "fermion" | "fermions" => Ok(Statistics::Fermi),
            other => Err(Error::Parse {
                offset: 0,
                message: format!("unknown statistics `{other}`"),
            }),
        }
    }
}

/// Occupation numbers `(n_1, ..., n_M)`; the label of a Fock basis vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occupation(Vec<u32>);

impl Occupation {
    pub fn new(occupations: Vec<u32>) -> Self {
        Occupation(occupations)
    }

    pub fn zeros(num_modes: usize) -> Self {
        Occupation(vec![0; num_modes])
    }

    pub fn num_modes(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// Occupation of `mode` (1-based).
    pub fn get(&self, mode: usize) -> u32 {
        self.0[mode - 1]
    }

    pub fn particle_number(&self) -> usize {
        self.0.iter().map(|&n| n as usize).sum()
    }

    /// Particles in modes strictly below `mode` (1-based).
    pub fn count_below(&self, mode: usize) -> u32 {
        self.0[..mode - 1].iter().sum()
    }

    pub fn is_valid_for(&self, statistics: Statistics) -> bool {
        statistics == Statistics::Bose || self.0.iter().all(|&n| n <= 1)
    }

    fn with(&self, mode: usize, value: u32) -> Self {
        let mut next = self.0.clone();
        next[mode - 1] = value;
        Occupation(next)
    }
}

impl fmt::Display for Occupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (k, n) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ">")
    }
}

/// Sparse superposition of occupation basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    statistics: Statistics,
    num_modes: usize,
    amplitudes: BTreeMap<Occupation, Complex64>,
}

impl FockVector {
    pub fn zero(num_modes: usize, statistics: Statistics) -> Result<Self> {
        if num_modes < 1 {
            return Err(Error::InvalidModeCount(num_modes));
        }
        Ok(FockVector {
            statistics,
            num_modes,
            amplitudes: BTreeMap::new(),
        })
    }

    pub fn vacuum(num_modes: usize, statistics: Statistics) -> Result<Self> {
        let mut v = Self::zero(num_modes, statistics)?;
        v.amplitudes
            .insert(Occupation::zeros(num_modes), Complex64::new(1.0, 0.0));
        Ok(v)
    }

    /// The normalized basis vector labelled by `occupation`.
    pub fn basis(statistics: Statistics, occupation: Occupation) -> Result<Self> {
        Self::from_amplitudes(
            statistics,
            occupation.num_modes(),
            [(occupation, Complex64::new(1.0, 0.0))],
        )
    }

    /// Builds a vector from explicit amplitudes. Duplicate labels are summed.
    pub fn from_amplitudes<I>(statistics: Statistics, num_modes: usize, amplitudes: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Occupation, Complex64)>,
    {
        let mut v = Self::zero(num_modes, statistics)?;
        for (occ, amp) in amplitudes {
            if occ.num_modes() != num_modes {
                return Err(Error::InvalidOccupation(format!(
                    "{occ} has {} entries, expected {num_modes}",
                    occ.num_modes()
                )));
            }
            if !occ.is_valid_for(statistics) {
                return Err(Error::InvalidOccupation(format!(
                    "fermionic occupation {occ} has a mode with more than one particle"
                )));
            }
            *v.amplitudes.entry(occ).or_default() += amp;
        }
        v.prune();
        Ok(v)
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_zero(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Amplitudes in ascending lexicographic occupation order.
    pub fn iter(&self) -> impl Iterator<Item = (&Occupation, &Complex64)> {
        self.amplitudes.iter()
    }

    pub fn amplitude(&self, occupation: &Occupation) -> Complex64 {
        self.amplitudes.get(occupation).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    /// Particle numbers of all sectors with nonzero weight.
    pub fn particle_numbers(&self) -> BTreeSet<usize> {
        self.amplitudes.keys().map(Occupation::particle_number).collect()
    }

    pub fn max_occupation(&self, mode: usize) -> u32 {
        self.amplitudes.keys().map(|o| o.get(mode)).max().unwrap_or(0)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        for a in out.amplitudes.values_mut() {
            *a *= factor;
        }
        out.prune();
        out
    }

    pub fn add(&self, other: &FockVector) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other, Complex64::new(1.0, 0.0));
        out.prune();
        Ok(out)
    }

    pub fn sub(&self, other: &FockVector) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other, Complex64::new(-1.0, 0.0));
        out.prune();
        Ok(out)
    }

    /// `self += factor * other` without pruning; callers prune once at the end.
    pub(crate) fn add_assign_unchecked(&mut self, other: &FockVector, factor: Complex64) {
        for (occ, amp) in &other.amplitudes {
            *self.amplitudes.entry(occ.clone()).or_default() += factor * amp;
        }
    }

    pub(crate) fn prune(&mut self) {
        self.amplitudes.retain(|_, a| a.norm() >= PRUNE_THRESHOLD);
    }

    pub fn check_compatible(&self, other: &FockVector) -> Result<()> {
        if self.statistics != other.statistics {
            return Err(Error::StatisticsMismatch {
                expected: self.statistics,
                found: other.statistics,
            });
        }
        if self.num_modes != other.num_modes {
            return Err(Error::DimensionMismatch(self.num_modes, other.num_modes));
        }
        Ok(())
    }

    pub fn check_mode(&self, mode: usize) -> Result<()> {
        if mode == 0 || mode > self.num_modes {
            return Err(Error::ModeOutOfRange {
                mode,
                num_modes: self.num_modes,
            });
        }
        Ok(())
    }

    /// Applies the creation operator of `mode`.
    pub fn create(&self, mode: usize) -> Result<Self> {
        self.check_mode(mode)?;
        let mut out = FockVector {
            statistics: self.statistics,
            num_modes: self.num_modes,
            amplitudes: BTreeMap::new(),
        };
        for (occ, amp) in &self.amplitudes {
            let n = occ.get(mode);
            let (factor, next) = match self.statistics {
                Statistics::Bose => (((n + 1) as f64).sqrt(), occ.with(mode, n + 1)),
                Statistics::Fermi => {
                    if n == 1 {
                        continue;
                    }
                    (fermi_sign(occ, mode), occ.with(mode, 1))
                }
            };
            *out.amplitudes.entry(next).or_default() += amp * factor;
        }
        out.prune();
        Ok(out)
    }

    /// Applies the annihilation operator of `mode`.
    pub fn annihilate(&self, mode: usize) -> Result<Self> {
        self.check_mode(mode)?;
        let mut out = FockVector {
            statistics: self.statistics,
            num_modes: self.num_modes,
            amplitudes: BTreeMap::new(),
        };
        for (occ, amp) in &self.amplitudes {
            let n = occ.get(mode);
            if n == 0 {
                continue;
            }
            let factor = match self.statistics {
                Statistics::Bose => (n as f64).sqrt(),
                Statistics::Fermi => fermi_sign(occ, mode),
            };
            *out.amplitudes.entry(occ.with(mode, n - 1)).or_default() += amp * factor;
        }
        out.prune();
        Ok(out)
    }

    /// Applies `sum_{j in modes} a+_j a_j`.
    pub fn number_operator(&self, modes: &[usize]) -> Result<Self> {
        for &m in modes {
            self.check_mode(m)?;
        }
        let mut out = self.clone();
        for (occ, amp) in out.amplitudes.iter_mut() {
            let count: u32 = modes.iter().map(|&m| occ.get(m)).sum();
            *amp *= count as f64;
        }
        out.prune();
        Ok(out)
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &FockVector) -> Result<Complex64> {
        self.check_compatible(other)?;
        Ok(self.inner_unchecked(other))
    }

    /// Merge-join over the two sorted amplitude maps.
    pub(crate) fn inner_unchecked(&self, other: &FockVector) -> Complex64 {
        let mut acc = Complex64::default();
        let mut left = self.amplitudes.iter().peekable();
        let mut right = other.amplitudes.iter().peekable();
        while let (Some((lo, la)), Some((ro, ra))) = (left.peek(), right.peek()) {
            match lo.cmp(ro) {
                std::cmp::Ordering::Less => {
                    left.next();
                }
                std::cmp::Ordering::Greater => {
                    right.next();
                }
                std::cmp::Ordering::Equal => {
                    acc += la.conj() * *ra;
                    left.next();
                    right.next();
                }
            }
        }
        acc
    }

    /// `|<self|other>|` after normalizing both vectors.
    pub fn fidelity(&self, other: &FockVector) -> Result<f64> {
        let a = self.normalized()?;
        let b = other.normalized()?;
        Ok(a.inner(&b)?.norm())
    }

    /// Largest amplitude difference over the union of supports.
    pub fn max_abs_diff(&self, other: &FockVector) -> Result<f64> {
        let d = self.sub(other)?;
        Ok(d.amplitudes.values().map(|a| a.norm()).fold(0.0, f64::max))
    }
}

fn fermi_sign(occ: &Occupation, mode: usize) -> f64 {
    if occ.count_below(mode).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// All occupation vectors of `num_particles` particles in `num_modes` modes.
///
/// Ordered with mode 1 most significant and larger occupations first, so
/// `(M=2, N=2, Bose)` yields `(2,0), (1,1), (0,2)`.
pub fn enumerate_sector(num_modes: usize, num_particles: usize, statistics: Statistics) -> Result<Vec<Occupation>> {
    if num_modes < 1 {
        return Err(Error::InvalidModeCount(num_modes));
    }
    if statistics == Statistics::Fermi && num_particles > num_modes {
        return Err(Error::FermiSectorTooLarge {
            particles: num_particles,
            modes: num_modes,
        });
    }
    let cap = match statistics {
        Statistics::Bose => num_particles as u32,
        Statistics::Fermi => 1,
    };
    let mut out = Vec::new();
    let mut current = vec![0u32; num_modes];
    fill(&mut current, 0, num_particles as u32, cap, &mut out);
    Ok(out)
}

fn fill(current: &mut Vec<u32>, pos: usize, remaining: u32, cap: u32, out: &mut Vec<Occupation>) {
    if pos + 1 == current.len() {
        if remaining <= cap {
            current[pos] = remaining;
            out.push(Occupation(current.clone()));
        }
        return;
    }
    for n in (0..=remaining.min(cap)).rev() {
        current[pos] = n;
        fill(current, pos + 1, remaining - n, cap, out);
    }
    current[pos] = 0;
}

/// Binomial coefficient as `usize`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn occ(v: &[u32]) -> Occupation {
        Occupation::new(v.to_vec())
    }

    #[test]
    fn vacuum_has_unit_amplitude_on_empty_occupation() {
        let v = FockVector::vacuum(2, Statistics::Bose).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v.amplitude(&occ(&[0, 0])), c(1.0));
        let f = FockVector::vacuum(4, Statistics::Fermi).unwrap();
        assert_eq!(f.norm(), 1.0);
        assert!(v.annihilate(1).unwrap().is_zero());
        assert!(FockVector::vacuum(0, Statistics::Bose).is_err());
    }

    #[test]
    fn bose_double_creation_carries_sqrt_two() {
        let v = FockVector::vacuum(2, Statistics::Bose).unwrap();
        let w = v.create(1).unwrap().create(1).unwrap();
        assert_eq!(w.len(), 1);
        assert!((w.amplitude(&occ(&[2, 0])) - c(2f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn fermi_pauli_exclusion_and_anticommutation() {
        let v = FockVector::vacuum(2, Statistics::Fermi).unwrap();
        assert!(v.create(1).unwrap().create(1).unwrap().is_zero());
        let a = v.create(1).unwrap().create(2).unwrap();
        let b = v.create(2).unwrap().create(1).unwrap();
        assert_eq!(a.amplitude(&occ(&[1, 1])), c(-1.0));
        assert_eq!(b.amplitude(&occ(&[1, 1])), c(1.0));
        assert!(a.add(&b).unwrap().is_zero());
    }

    #[test]
    fn annihilate_single_occupied_mode() {
        for s in [Statistics::Bose, Statistics::Fermi] {
            let v = FockVector::basis(s, occ(&[1, 1])).unwrap();
            let w = v.annihilate(1).unwrap();
            assert_eq!(w.amplitude(&occ(&[0, 1])), c(1.0));
            assert_eq!(w.len(), 1);
        }
        let vac = FockVector::vacuum(2, Statistics::Fermi).unwrap();
        assert!(vac.annihilate(2).unwrap().is_zero());
    }

    #[test]
    fn mode_range_is_checked() {
        let v = FockVector::vacuum(2, Statistics::Bose).unwrap();
        assert!(matches!(v.create(0), Err(Error::ModeOutOfRange { .. })));
        assert!(matches!(v.annihilate(3), Err(Error::ModeOutOfRange { .. })));
    }

    #[test]
    fn number_operator_eigenvalues() {
        let v = FockVector::basis(Statistics::Bose, occ(&[1, 1])).unwrap();
        let w = v.number_operator(&[1, 2]).unwrap();
        assert_eq!(w.amplitude(&occ(&[1, 1])), c(2.0));
        let vac = FockVector::vacuum(2, Statistics::Bose).unwrap();
        assert!(vac.number_operator(&[1, 2]).unwrap().is_zero());
        let two = vac.create(1).unwrap().create(1).unwrap().scale(c(0.5f64.sqrt()));
        let n1 = two.number_operator(&[1]).unwrap();
        assert!(n1.max_abs_diff(&two.scale(c(2.0))).unwrap() < 1e-15);
    }

    #[test]
    fn inner_product_orthonormal_basis() {
        let a = FockVector::basis(Statistics::Bose, occ(&[1, 0])).unwrap();
        let b = FockVector::basis(Statistics::Bose, occ(&[0, 1])).unwrap();
        assert_eq!(a.inner(&b).unwrap(), c(0.0));
        let vac = FockVector::vacuum(2, Statistics::Bose).unwrap();
        let psi = vac.create(2).unwrap().create(1).unwrap();
        assert_eq!(psi.inner(&psi).unwrap(), c(1.0));
        let f = FockVector::vacuum(2, Statistics::Fermi).unwrap();
        assert!(a.inner(&f).is_err());
    }

    #[test]
    fn sector_enumeration_order_and_counts() {
        let b = enumerate_sector(2, 2, Statistics::Bose).unwrap();
        assert_eq!(b, vec![occ(&[2, 0]), occ(&[1, 1]), occ(&[0, 2])]);
        let f = enumerate_sector(2, 2, Statistics::Fermi).unwrap();
        assert_eq!(f, vec![occ(&[1, 1])]);
        for s in [Statistics::Bose, Statistics::Fermi] {
            assert_eq!(enumerate_sector(3, 0, s).unwrap(), vec![occ(&[0, 0, 0])]);
        }
        assert!(enumerate_sector(2, 3, Statistics::Fermi).is_err());
        for m in 1..6 {
            for n in 0..5 {
                assert_eq!(
                    enumerate_sector(m, n, Statistics::Bose).unwrap().len(),
                    binomial(m + n - 1, n)
                );
                if n <= m {
                    assert_eq!(enumerate_sector(m, n, Statistics::Fermi).unwrap().len(), binomial(m, n));
                }
            }
        }
    }

    #[test]
    fn fermi_occupation_above_one_is_rejected() {
        let err = FockVector::basis(Statistics::Fermi, occ(&[2, 0])).unwrap_err();
        assert!(matches!(err, Error::InvalidOccupation(_)));
    }

    #[test]
    fn tiny_amplitudes_are_pruned() {
        let v = FockVector::from_amplitudes(Statistics::Bose, 2, [(occ(&[1, 0]), c(1.0)), (occ(&[0, 1]), c(1e-16))])
            .unwrap();
        assert_eq!(v.len(), 1);
    }
}
