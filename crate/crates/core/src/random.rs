//! Seeded random states. The generator is ChaCha8 seeded through
//! `SeedableRng::seed_from_u64`, so a seed reproduces the same state on every
//! platform.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bridge::{statistics_of, ModeRotation};
use crate::error::{Error, Result};
use crate::fock::{enumerate_sector, FockVector, Statistics};
use crate::gmw::{Symmetry, TwoParticleState};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex normal: real and imaginary parts each `N(0, 1/2)`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Normalized state with i.i.d. complex normal amplitudes on the sector.
pub fn random_fock<R: Rng + ?Sized>(
    rng: &mut R,
    num_modes: usize,
    num_particles: usize,
    statistics: Statistics,
) -> Result<FockVector> {
    let basis = enumerate_sector(num_modes, num_particles, statistics)?;
    let amps: Vec<_> = basis.into_iter().map(|occ| (occ, complex_normal(rng))).collect();
    FockVector::from_amplitudes(statistics, num_modes, amps)?.normalized()
}

/// `(G +/- G^T) / 2` for a complex normal `G`, or `G` itself, normalized.
pub fn random_two_particle<R: Rng + ?Sized>(rng: &mut R, dim: usize, symmetry: Symmetry) -> Result<TwoParticleState> {
    if dim == 0 {
        return Err(Error::InvalidModeCount(0));
    }
    if dim == 1 && symmetry == Symmetry::Antisymmetric {
        return Err(Error::FermiSectorTooLarge { particles: 2, modes: 1 });
    }
    let g = DMatrix::from_fn(dim, dim, |_, _| complex_normal(rng));
    let half = Complex64::new(0.5, 0.0);
    let c = match symmetry {
        Symmetry::Symmetric => (&g + g.transpose()) * half,
        Symmetry::Antisymmetric => (&g - g.transpose()) * half,
        Symmetry::None => g,
    };
    TwoParticleState::new(c, symmetry)
}

/// Haar-distributed unitary from the QR decomposition of a complex normal
/// matrix, with the phases of `R`'s diagonal moved into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<ModeRotation> {
    let g = DMatrix::from_fn(dim, dim, |_, _| complex_normal(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..dim {
        let d = r[(k, k)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            let col = q.column(k) * phase;
            q.set_column(k, &col);
        }
    }
    ModeRotation::new(q)
}

#[derive(Debug, Clone, PartialEq)]
pub enum RandomState {
    Fock(FockVector),
    TwoParticle(TwoParticleState),
}

/// Draws a Fock-space state, or a first-quantized two-particle state when a
/// symmetry is given (which requires `num_particles = 2` and, for identical
/// particles, the matching statistics).
pub fn generate_random(
    seed: u64,
    num_modes: usize,
    num_particles: usize,
    statistics: Statistics,
    symmetry: Option<Symmetry>,
) -> Result<RandomState> {
    let mut rng = rng(seed);
    match symmetry {
        None => Ok(RandomState::Fock(random_fock(
            &mut rng,
            num_modes,
            num_particles,
            statistics,
        )?)),
        Some(sym) => {
            if num_particles != 2 {
                return Err(Error::WrongSector { expected: 2 });
            }
            if sym != Symmetry::None {
                let expected = statistics_of(sym)?;
                if expected != statistics {
                    return Err(Error::StatisticsMismatch {
                        expected,
                        found: statistics,
                    });
                }
            }
            Ok(RandomState::TwoParticle(random_two_particle(&mut rng, num_modes, sym)?))
        }
    }
}
