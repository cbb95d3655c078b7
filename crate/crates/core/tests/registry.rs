use std::sync::Arc;

use fock_sep::gmw::{Classification, ClassifierRegistry, Symmetry, TwoParticleClassifier, TwoParticleState, Verdict};
use fock_sep::modesep::{DeciderOptions, DeciderRegistry, ModeBipartition, SeparabilityDecider, SeparabilityVerdict};
use fock_sep::{Error, FockVector, Result, Statistics};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Calls everything entangled.
struct Pessimist;

impl SeparabilityDecider for Pessimist {
    fn name(&self) -> &'static str {
        "pessimist"
    }

    fn decide(&self, _: &FockVector, _: &ModeBipartition, _: &DeciderOptions) -> Result<SeparabilityVerdict> {
        Ok(SeparabilityVerdict {
            separable: false,
            certificate: None,
            witness: None,
        })
    }
}

struct AlwaysEntangled;

impl TwoParticleClassifier for AlwaysEntangled {
    fn name(&self) -> &'static str {
        "always-entangled"
    }

    fn classify(&self, _: &TwoParticleState) -> Result<Classification> {
        Ok(Classification {
            verdict: Verdict::BoseEntangled,
            attributes: None,
        })
    }
}

#[test]
fn default_deciders_are_listed_by_name() {
    let r = DeciderRegistry::with_defaults();
    assert_eq!(r.names().collect::<Vec<_>>(), ["correlation", "rank"]);
    assert!(matches!(r.get("svd"), Err(Error::UnknownStrategy(name)) if name == "svd"));
}

#[test]
fn registered_decider_is_dispatched() {
    let mut r = DeciderRegistry::with_defaults();
    r.register(Arc::new(Pessimist));
    let vac = FockVector::vacuum(2, Statistics::Bose).unwrap();
    let v = vac.create(1).unwrap().create(2).unwrap();
    let b = ModeBipartition::from_block1(2, [1]).unwrap();
    let opts = DeciderOptions::default();
    assert!(r.get("rank").unwrap().decide(&v, &b, &opts).unwrap().separable);
    assert!(!r.get("pessimist").unwrap().decide(&v, &b, &opts).unwrap().separable);
    assert_eq!(r.names().count(), 3);
}

#[test]
fn classifiers_are_replaceable() {
    let mut r = ClassifierRegistry::with_defaults();
    assert_eq!(r.names().collect::<Vec<_>>(), ["properties", "takagi"]);
    r.register(Arc::new(AlwaysEntangled));
    let c = DMatrix::from_fn(2, 2, |i, j| Complex64::new(if i == j { 0.0 } else { 1.0 }, 0.0));
    let t = TwoParticleState::new(c, Symmetry::Symmetric).unwrap();
    assert_eq!(
        r.get("takagi").unwrap().classify(&t).unwrap().verdict,
        Verdict::BoseOrthogonal
    );
    assert_eq!(
        r.get("always-entangled").unwrap().classify(&t).unwrap().verdict,
        Verdict::BoseEntangled
    );
}
