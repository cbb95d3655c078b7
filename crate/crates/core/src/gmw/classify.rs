use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::properties::column_space;
use super::{canonical_phase, find_properties, takagi, SingleParticleVector, Symmetry, TwoParticleState, GMW_TOL};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    FermiSeparable,
    BoseSameState,
    BoseOrthogonal,
    BoseEntangled,
    /// Antisymmetric state without a complete set of properties.
    FermiNotApplicable,
}

impl Verdict {
    pub fn is_separable(self) -> bool {
        matches!(
            self,
            Verdict::FermiSeparable | Verdict::BoseSameState | Verdict::BoseOrthogonal
        )
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// `phi0` and its partner: `Upsilon` for fermions, `Theta` for bosons.
#[derive(Debug, Clone, PartialEq)]
pub struct Attributes {
    pub phi0: SingleParticleVector,
    pub partner: SingleParticleVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub verdict: Verdict,
    pub attributes: Option<Attributes>,
}

impl Classification {
    /// `(phi0 (x) partner +/- partner (x) phi0)` normalized, when attributes exist.
    pub fn reconstruct(&self, symmetry: Symmetry) -> Option<Result<TwoParticleState>> {
        self.attributes
            .as_ref()
            .map(|a| TwoParticleState::from_product(&a.phi0, &a.partner, symmetry))
    }
}

pub trait TwoParticleClassifier: Send + Sync {
    fn name(&self) -> &'static str;
    fn classify(&self, t: &TwoParticleState) -> Result<Classification>;
}

/// Fermions by Slater rank, bosons by the number and equality of Takagi values.
#[derive(Debug, Clone, Copy, Default)]
pub struct TakagiClassifier;

/// Searches complete sets of properties directly and tests the coincidence
/// (`Theta = phi0`) and orthogonality (`<Theta|phi0> = 0`) conditions on each.
#[derive(Debug, Clone, Copy, Default)]
pub struct PropertyClassifier;

pub fn classify(t: &TwoParticleState) -> Result<Classification> {
    TakagiClassifier.classify(t)
}

impl TwoParticleClassifier for TakagiClassifier {
    fn name(&self) -> &'static str {
        "takagi"
    }

    fn classify(&self, t: &TwoParticleState) -> Result<Classification> {
        t.require_identical()?;
        let c = t.coefficients();
        if t.symmetry() == Symmetry::Antisymmetric {
            let space = column_space(c)?;
            if space.rank != 2 {
                return Ok(Classification {
                    verdict: Verdict::FermiNotApplicable,
                    attributes: None,
                });
            }
            let phi0 = canonical_phase(&space.basis.column(0).into_owned());
            return Ok(fermi_separable(c, phi0));
        }

        let tk = takagi(c)?;
        let l1 = tk.values[0];
        let nonzero = tk.values.iter().filter(|&&x| x > GMW_TOL * l1).count();
        let u1 = tk.vectors.column(0).into_owned();
        let i = Complex64::new(0.0, 1.0);
        match nonzero {
            1 => {
                let phi0 = canonical_phase(&u1);
                Ok(Classification {
                    verdict: Verdict::BoseSameState,
                    attributes: Some(Attributes {
                        partner: phi0.clone(),
                        phi0,
                    }),
                })
            }
            2 => {
                let l2 = tk.values[1];
                let u2 = tk.vectors.column(1).into_owned();
                let (verdict, r) = if (l1 - l2).abs() <= GMW_TOL * l1 {
                    (Verdict::BoseOrthogonal, 1.0)
                } else {
                    (Verdict::BoseEntangled, (l2 / l1).sqrt())
                };
                // Properties (u1 -/+ i r u2) / sqrt(1 + r^2).
                let scale = Complex64::new((1.0 + r * r).sqrt().recip(), 0.0);
                let a = canonical_phase(&((&u1 - &u2 * (i * r)) * scale));
                let b = canonical_phase(&((&u1 + &u2 * (i * r)) * scale));
                let phi0 = if order_vectors(&a, &b) == Ordering::Greater {
                    b
                } else {
                    a
                };
                Ok(Classification {
                    verdict,
                    attributes: Some(Attributes {
                        partner: theta(c, &phi0),
                        phi0,
                    }),
                })
            }
            _ => Ok(Classification {
                verdict: Verdict::BoseEntangled,
                attributes: None,
            }),
        }
    }
}

impl TwoParticleClassifier for PropertyClassifier {
    fn name(&self) -> &'static str {
        "properties"
    }

    fn classify(&self, t: &TwoParticleState) -> Result<Classification> {
        t.require_identical()?;
        let c = t.coefficients();
        let mut candidates = find_properties(t)?.representatives();
        candidates.sort_by(order_vectors);
        if t.symmetry() == Symmetry::Antisymmetric {
            return Ok(match candidates.into_iter().next() {
                Some(phi0) => fermi_separable(c, phi0),
                None => Classification {
                    verdict: Verdict::FermiNotApplicable,
                    attributes: None,
                },
            });
        }
        let mut entangled = None;
        for phi0 in candidates {
            let th = theta(c, &phi0);
            let overlap = th.dotc(&phi0).norm();
            let verdict = if overlap >= 1.0 - GMW_TOL {
                Verdict::BoseSameState
            } else if overlap <= GMW_TOL {
                Verdict::BoseOrthogonal
            } else {
                entangled.get_or_insert(Attributes { phi0, partner: th });
                continue;
            };
            let partner = if verdict == Verdict::BoseSameState {
                phi0.clone()
            } else {
                th
            };
            return Ok(Classification {
                verdict,
                attributes: Some(Attributes { phi0, partner }),
            });
        }
        Ok(Classification {
            verdict: Verdict::BoseEntangled,
            attributes: entangled,
        })
    }
}

fn fermi_separable(c: &DMatrix<Complex64>, phi0: SingleParticleVector) -> Classification {
    let upsilon = c.transpose() * phi0.map(|z| z.conj()) * Complex64::new(2f64.sqrt(), 0.0);
    Classification {
        verdict: Verdict::FermiSeparable,
        attributes: Some(Attributes { phi0, partner: upsilon }),
    }
}

/// Normalized `C conj(phi0) - (c00 / 2) phi0` with `c00 = phi0^dagger C conj(phi0)`.
fn theta(c: &DMatrix<Complex64>, phi0: &SingleParticleVector) -> SingleParticleVector {
    let w = c * phi0.map(|z| z.conj());
    let c00 = phi0.dotc(&w);
    let v = w - phi0 * (c00 / 2.0);
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}

/// Deterministic order on canonical-phase vectors: larger leading magnitudes
/// first, then larger imaginary parts.
fn order_vectors(a: &SingleParticleVector, b: &SingleParticleVector) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        if (x.norm() - y.norm()).abs() > GMW_TOL {
            return y.norm().total_cmp(&x.norm());
        }
    }
    for (x, y) in a.iter().zip(b.iter()) {
        if (x.im - y.im).abs() > GMW_TOL {
            return y.im.total_cmp(&x.im);
        }
    }
    Ordering::Equal
}

/// Classifiers addressable by name.
#[derive(Clone, Default)]
pub struct ClassifierRegistry {
    entries: BTreeMap<String, Arc<dyn TwoParticleClassifier>>,
}

impl ClassifierRegistry {
    /// `takagi` and `properties`.
    pub fn with_defaults() -> Self {
        let mut r = Self::default();
        r.register(Arc::new(TakagiClassifier));
        r.register(Arc::new(PropertyClassifier));
        r
    }

    pub fn register(&mut self, classifier: Arc<dyn TwoParticleClassifier>) {
        self.entries.insert(classifier.name().to_string(), classifier);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn TwoParticleClassifier>> {
        self.entries
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownStrategy(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}
