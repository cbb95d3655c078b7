use std::collections::BTreeMap;
use std::sync::Arc;

use super::{
    mode_separability_rank, oracle::correlation_oracle_with, ModeBipartition, OracleOptions, SeparabilityVerdict,
    DEFAULT_PAIR_BUDGET, DEFAULT_TOL,
};
use crate::error::{Error, Result};
use crate::fock::FockVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeciderOptions {
    pub tol: f64,
    pub max_degree: usize,
    pub pair_budget: usize,
}

impl Default for DeciderOptions {
    fn default() -> Self {
        DeciderOptions {
            tol: DEFAULT_TOL,
            max_degree: 4,
            pair_budget: DEFAULT_PAIR_BUDGET,
        }
    }
}

/// A procedure deciding mode separability of a pure state.
pub trait SeparabilityDecider: Send + Sync {
    fn name(&self) -> &'static str;
    fn decide(&self, v: &FockVector, b: &ModeBipartition, opts: &DeciderOptions) -> Result<SeparabilityVerdict>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RankDecider;

impl SeparabilityDecider for RankDecider {
    fn name(&self) -> &'static str {
        "rank"
    }

    fn decide(&self, v: &FockVector, b: &ModeBipartition, opts: &DeciderOptions) -> Result<SeparabilityVerdict> {
        mode_separability_rank(v, b, opts.tol)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CorrelationDecider;

impl SeparabilityDecider for CorrelationDecider {
    fn name(&self) -> &'static str {
        "correlation"
    }

    fn decide(&self, v: &FockVector, b: &ModeBipartition, opts: &DeciderOptions) -> Result<SeparabilityVerdict> {
        correlation_oracle_with(
            v,
            b,
            &OracleOptions {
                max_degree: opts.max_degree,
                tol: opts.tol,
                pair_budget: opts.pair_budget,
            },
        )
    }
}

/// Deciders addressable by name.
#[derive(Clone, Default)]
pub struct DeciderRegistry {
    entries: BTreeMap<String, Arc<dyn SeparabilityDecider>>,
}

impl DeciderRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `rank` and `correlation`.
    pub fn with_defaults() -> Self {
        let mut r = Self::empty();
        r.register(Arc::new(RankDecider));
        r.register(Arc::new(CorrelationDecider));
        r
    }

    /// Replaces any decider already registered under the same name.
    pub fn register(&mut self, decider: Arc<dyn SeparabilityDecider>) {
        self.entries.insert(decider.name().to_string(), decider);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn SeparabilityDecider>> {
        self.entries
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownStrategy(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Statistics;

    #[test]
    fn defaults_are_registered() {
        let r = DeciderRegistry::with_defaults();
        assert_eq!(r.names().collect::<Vec<_>>(), vec!["correlation", "rank"]);
        assert!(matches!(r.get("nope"), Err(Error::UnknownStrategy(_))));
    }

    #[test]
    fn both_deciders_agree_on_a_pair() {
        let vac = FockVector::vacuum(3, Statistics::Fermi).unwrap();
        let psi = vac.create(3).unwrap().create(1).unwrap();
        let b = ModeBipartition::parse("1|2,3", 3).unwrap();
        let r = DeciderRegistry::with_defaults();
        for name in ["rank", "correlation"] {
            let verdict = r
                .get(name)
                .unwrap()
                .decide(&psi, &b, &DeciderOptions::default())
                .unwrap();
            assert!(verdict.separable, "{name}");
        }
    }
}
