//! JSON representations of states, verdicts and reports.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bridge::{CaseTag, CrossCheckReport};
use crate::error::{Error, Result};
use crate::fock::{FockVector, Occupation, Statistics};
use crate::gmw::{Classification, Symmetry, TwoParticleState, Verdict};
use crate::modesep::SeparabilityVerdict;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        ComplexJson { re: z.re, im: z.im }
    }
}

impl From<ComplexJson> for Complex64 {
    fn from(z: ComplexJson) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeJson {
    pub occ: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FockVectorJson {
    pub statistics: Statistics,
    pub num_modes: usize,
    pub amplitudes: Vec<AmplitudeJson>,
}

impl From<&FockVector> for FockVectorJson {
    fn from(v: &FockVector) -> Self {
        FockVectorJson {
            statistics: v.statistics(),
            num_modes: v.num_modes(),
            amplitudes: v
                .iter()
                .map(|(occ, a)| AmplitudeJson {
                    occ: occ.as_slice().to_vec(),
                    re: a.re,
                    im: a.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<FockVectorJson> for FockVector {
    type Error = Error;

    fn try_from(j: FockVectorJson) -> Result<Self> {
        FockVector::from_amplitudes(
            j.statistics,
            j.num_modes,
            j.amplitudes
                .into_iter()
                .map(|a| (Occupation::new(a.occ), Complex64::new(a.re, a.im))),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoParticleJson {
    pub symmetry: Symmetry,
    pub dim: usize,
    pub coefficients: Vec<Vec<ComplexJson>>,
}

impl From<&TwoParticleState> for TwoParticleJson {
    fn from(t: &TwoParticleState) -> Self {
        let c = t.coefficients();
        TwoParticleJson {
            symmetry: t.symmetry(),
            dim: t.dim(),
            coefficients: (0..t.dim())
                .map(|i| (0..t.dim()).map(|j| c[(i, j)].into()).collect())
                .collect(),
        }
    }
}

impl TryFrom<TwoParticleJson> for TwoParticleState {
    type Error = Error;

    fn try_from(j: TwoParticleJson) -> Result<Self> {
        if j.coefficients.len() != j.dim || j.coefficients.iter().any(|row| row.len() != j.dim) {
            return Err(Error::InvalidTwoParticleState(format!(
                "coefficients must be a {0}x{0} array",
                j.dim
            )));
        }
        let c = DMatrix::from_fn(j.dim, j.dim, |i, k| j.coefficients[i][k].into());
        TwoParticleState::new(c, j.symmetry)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    #[serde(rename = "P")]
    pub p: String,
    #[serde(rename = "Q")]
    pub q: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub a1: String,
    pub a2: String,
    pub lhs: ComplexJson,
    pub rhs: ComplexJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub separable: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<CertificateJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<WitnessJson>,
}

impl From<&SeparabilityVerdict> for VerdictJson {
    fn from(v: &SeparabilityVerdict) -> Self {
        VerdictJson {
            separable: v.separable,
            certificate: v.certificate.as_ref().map(|c| CertificateJson {
                p: c.p.to_string(),
                q: c.q.to_string(),
            }),
            witness: v.witness.as_ref().map(|w| WitnessJson {
                a1: w.a1.to_string(),
                a2: w.a2.to_string(),
                lhs: w.lhs.into(),
                rhs: w.rhs.into(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributesJson {
    pub phi0: Vec<ComplexJson>,
    pub partner: Vec<ComplexJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationJson {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub attributes: Option<AttributesJson>,
}

fn vector_json(v: &DVector<Complex64>) -> Vec<ComplexJson> {
    v.iter().map(|&z| z.into()).collect()
}

impl From<&Classification> for ClassificationJson {
    fn from(c: &Classification) -> Self {
        ClassificationJson {
            verdict: c.verdict,
            attributes: c.attributes.as_ref().map(|a| AttributesJson {
                phi0: vector_json(&a.phi0),
                partner: vector_json(&a.partner),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheckJson {
    pub gmw: ClassificationJson,
    pub mode: VerdictJson,
    pub agree: bool,
    pub case: CaseTag,
}

impl From<&CrossCheckReport> for CrossCheckJson {
    fn from(r: &CrossCheckReport) -> Self {
        CrossCheckJson {
            gmw: (&r.gmw).into(),
            mode: (&r.mode).into(),
            agree: r.agree,
            case: r.case,
        }
    }
}

/// A state file in either representation.
#[derive(Debug, Clone, PartialEq)]
pub enum StateInput {
    Fock(FockVector),
    TwoParticle(TwoParticleState),
}

/// Parses a state file; objects with a `coefficients` key are two-particle states.
pub fn parse_state(text: &str) -> Result<StateInput> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("coefficients").is_some() {
        let j: TwoParticleJson = serde_json::from_value(value)?;
        Ok(StateInput::TwoParticle(j.try_into()?))
    } else {
        let j: FockVectorJson = serde_json::from_value(value)?;
        Ok(StateInput::Fock(j.try_into()?))
    }
}

pub fn fock_to_string(v: &FockVector) -> String {
    to_pretty(&FockVectorJson::from(v))
}

pub fn two_particle_to_string(t: &TwoParticleState) -> String {
    to_pretty(&TwoParticleJson::from(t))
}

pub fn to_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("wire types serialize infallibly")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fock_round_trip() {
        let vac = FockVector::vacuum(3, Statistics::Bose).unwrap();
        let v = vac
            .create(1)
            .unwrap()
            .create(1)
            .unwrap()
            .add(&vac.create(3).unwrap().create(2).unwrap())
            .unwrap();
        let text = fock_to_string(&v);
        assert_eq!(parse_state(&text).unwrap(), StateInput::Fock(v));
    }

    #[test]
    fn amplitudes_are_listed_in_ascending_order() {
        let vac = FockVector::vacuum(2, Statistics::Bose).unwrap();
        let v = vac.create(1).unwrap().add(&vac.create(2).unwrap()).unwrap();
        let j = FockVectorJson::from(&v);
        assert_eq!(j.amplitudes[0].occ, vec![0, 1]);
        assert_eq!(j.amplitudes[1].occ, vec![1, 0]);
    }

    #[test]
    fn rejects_double_fermi_occupation() {
        let text = r#"{"statistics":"fermi","num_modes":2,"amplitudes":[{"occ":[2,0],"re":1.0,"im":0.0}]}"#;
        assert!(matches!(parse_state(text), Err(Error::InvalidOccupation(_))));
        assert!(matches!(parse_state("{"), Err(Error::Json(_))));
    }

    #[test]
    fn two_particle_round_trip() {
        let text = r#"{"symmetry":"antisym","dim":2,"coefficients":[[{"re":0,"im":0},{"re":1,"im":0}],[{"re":-1,"im":0},{"re":0,"im":0}]]}"#;
        let StateInput::TwoParticle(t) = parse_state(text).unwrap() else {
            panic!("expected a two-particle state");
        };
        assert_eq!(t.symmetry(), Symmetry::Antisymmetric);
        let again = parse_state(&two_particle_to_string(&t)).unwrap();
        assert_eq!(again, StateInput::TwoParticle(t));
    }
}
