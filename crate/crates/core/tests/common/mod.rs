#![allow(dead_code)]

use fock_sep::bridge::first_to_second;
use fock_sep::gmw::{SingleParticleVector, Symmetry, TwoParticleState};
use fock_sep::modesep::ModeBipartition;
use fock_sep::opexpr::{Expr, FockOperator};
use fock_sep::random::{complex_normal, random_two_particle};
use fock_sep::{enumerate_sector, FockVector, Occupation, Statistics};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn z(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn e(m: usize, i: usize) -> SingleParticleVector {
    let mut v = DVector::zeros(m);
    v[i] = z(1.0, 0.0);
    v
}

pub fn random_unit<R: Rng>(rng: &mut R, m: usize) -> SingleParticleVector {
    let v = DVector::from_fn(m, |_, _| complex_normal(rng));
    let n = v.norm();
    v / z(n, 0.0)
}

/// A unit vector orthogonal to `phi`.
pub fn random_orthogonal<R: Rng>(rng: &mut R, phi: &SingleParticleVector) -> SingleParticleVector {
    let v = random_unit(rng, phi.len());
    let w = &v - phi * phi.dotc(&v);
    let n = w.norm();
    w / z(n, 0.0)
}

/// All basis states with at most `max_particles` particles.
pub fn basis_states(m: usize, max_particles: usize, s: Statistics) -> Vec<FockVector> {
    (0..=max_particles)
        .filter(|&n| s == Statistics::Bose || n <= m)
        .flat_map(|n| enumerate_sector(m, n, s).unwrap())
        .map(|occ| FockVector::basis(s, occ).unwrap())
        .collect()
}

/// Random linear combination of creator monomials of `degree` on `modes`.
pub fn random_creator_polynomial<R: Rng>(rng: &mut R, modes: &[usize], degree: usize, s: Statistics) -> Expr {
    if degree == 0 {
        return Expr::Scalar(complex_normal(rng));
    }
    let local: Vec<Occupation> = enumerate_sector(modes.len(), degree, s).unwrap();
    let terms = local
        .into_iter()
        .map(|occ| {
            let mut factors = vec![Expr::Scalar(complex_normal(rng))];
            for (k, &n) in occ.as_slice().iter().enumerate() {
                for _ in 0..n {
                    factors.push(Expr::Create(modes[k]));
                }
            }
            Expr::Product(factors)
        })
        .collect();
    Expr::Sum(terms)
}

/// `P Q |0>` for random local creator polynomials with `degree1 + degree2 = 2`.
pub fn separable_pair<R: Rng>(rng: &mut R, b: &ModeBipartition, s: Statistics, degree1: usize) -> Option<FockVector> {
    let (d1, d2) = (degree1, 2 - degree1);
    if s == Statistics::Fermi && (d1 > b.block1().len() || d2 > b.block2().len()) {
        return None;
    }
    let p = random_creator_polynomial(rng, b.block1(), d1, s);
    let q = random_creator_polynomial(rng, b.block2(), d2, s);
    let vac = FockVector::vacuum(b.num_modes(), s).unwrap();
    let v = Expr::Product(vec![p, q]).apply(&vac).unwrap();
    v.normalized().ok()
}

/// Generic 2-particle state. Fermionic draws keep only components whose
/// block-1 particle count has the parity `odd`.
pub fn generic_pair<R: Rng>(rng: &mut R, b: &ModeBipartition, s: Statistics, odd: bool) -> Option<FockVector> {
    let amps: Vec<(Occupation, Complex64)> = enumerate_sector(b.num_modes(), 2, s)
        .unwrap()
        .into_iter()
        .filter(|occ| {
            s == Statistics::Bose || {
                let n1: u32 = b.block1().iter().map(|&k| occ.get(k)).sum();
                (n1 % 2 == 1) == odd
            }
        })
        .map(|occ| (occ, complex_normal(rng)))
        .collect();
    FockVector::from_amplitudes(s, b.num_modes(), amps)
        .ok()?
        .normalized()
        .ok()
}

pub fn random_bipartition<R: Rng>(rng: &mut R, m: usize) -> ModeBipartition {
    let mut modes: Vec<usize> = (1..=m).collect();
    modes.shuffle(rng);
    let k = rng.random_range(1..m);
    ModeBipartition::from_block1(m, modes[..k].to_vec()).unwrap()
}

/// Mixture of separable and generic 2-particle states with random
/// bipartitions; fermionic states have definite block parity.
pub fn decider_corpus<R: Rng>(rng: &mut R, s: Statistics, count: usize) -> Vec<(FockVector, ModeBipartition)> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let m = rng.random_range(2..=6);
        let b = random_bipartition(rng, m);
        let odd = rng.random_bool(0.5);
        let degree1 = rng.random_range(0..=2);
        let v = match out.len() % 3 {
            0 => generic_pair(rng, &b, s, odd),
            _ => separable_pair(rng, &b, s, degree1),
        };
        if let Some(v) = v {
            out.push((v, b));
        }
    }
    out
}

/// Constructive two-particle families with a known answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    FermiSlater,
    FermiGeneric,
    BoseSame,
    BoseOrthogonal,
    BoseOverlap,
    BoseGeneric,
}

pub fn family_state<R: Rng>(rng: &mut R, m: usize, family: Family) -> TwoParticleState {
    let phi = random_unit(rng, m);
    match family {
        Family::FermiSlater => {
            let chi = random_unit(rng, m);
            TwoParticleState::from_product(&phi, &chi, Symmetry::Antisymmetric).unwrap()
        }
        Family::FermiGeneric => random_two_particle(rng, m, Symmetry::Antisymmetric).unwrap(),
        Family::BoseSame => TwoParticleState::new(&phi * phi.transpose(), Symmetry::Symmetric).unwrap(),
        Family::BoseOrthogonal => {
            let chi = random_orthogonal(rng, &phi);
            TwoParticleState::from_product(&phi, &chi, Symmetry::Symmetric).unwrap()
        }
        Family::BoseOverlap => {
            let theta = random_unit(rng, m);
            TwoParticleState::from_product(&phi, &theta, Symmetry::Symmetric).unwrap()
        }
        Family::BoseGeneric => random_two_particle(rng, m, Symmetry::Symmetric).unwrap(),
    }
}

/// `sym(phi0 (x) theta)` with `<theta|phi0> = overlap`.
pub fn bose_with_overlap(phi0: &SingleParticleVector, perp: &SingleParticleVector, overlap: f64) -> TwoParticleState {
    let theta = phi0 * z(overlap, 0.0) + perp * z((1.0 - overlap * overlap).sqrt(), 0.0);
    TwoParticleState::from_product(phi0, &theta, Symmetry::Symmetric).unwrap()
}

pub fn fock(t: &TwoParticleState) -> FockVector {
    first_to_second(t).unwrap()
}

/// Complex singular values, non-increasing, through the real embedding
/// `[[Re C, -Im C], [Im C, Re C]]` whose singular values repeat each one twice.
pub fn singular_values(c: &DMatrix<Complex64>) -> Vec<f64> {
    let (m, n) = c.shape();
    let real = DMatrix::from_fn(2 * m, 2 * n, |i, j| {
        let x = c[(i % m, j % n)];
        match (i < m, j < n) {
            (true, true) | (false, false) => x.re,
            (true, false) => -x.im,
            (false, true) => x.im,
        }
    });
    let mut s: Vec<f64> = real.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s.into_iter().step_by(2).collect()
}

pub fn matrix_rank(c: &DMatrix<Complex64>, tol: f64) -> usize {
    let s = singular_values(c);
    match s.first() {
        Some(&top) if top > 0.0 => s.iter().filter(|&&x| x > tol * top).count(),
        _ => 0,
    }
}
