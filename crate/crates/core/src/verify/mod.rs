//! Executable checks for every property of the construction: the tail-supremum
//! lemma, the trichotomy on `[0, t]`, the semigroup axioms, isometry, invariance
//! of `C`, the fixed-point set, the closed-form zero orbit and the vanishing
//! time-average residual.
//!
//! All comparisons are exact. A single failing instance is recorded as the
//! report's witness.

mod mutants;
mod sampler;
mod suites;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pl_function::OmegaFn;
use crate::rational::{self, int, Rational};
use crate::semigroup::{Evolution, ShiftClamp};

pub use mutants::{faithful, Audited, Mutant};
pub use sampler::Sampler;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckId {
    LemmaAlphaI,
    LemmaAlphaII,
    Lemma3Trichotomy,
    ThreeCaseDefinition,
    EqNonex,
    EqIsometric,
    EqSPlusT,
    Sg1,
    Sg2,
    Sg3,
    Sg4,
    CInvariance,
    EqF,
    EqTt0,
    EqInt,
    QuadratureBound,
}

impl CheckId {
    pub const ALL: [CheckId; 16] = [
        CheckId::LemmaAlphaI,
        CheckId::LemmaAlphaII,
        CheckId::Lemma3Trichotomy,
        CheckId::ThreeCaseDefinition,
        CheckId::EqNonex,
        CheckId::EqIsometric,
        CheckId::EqSPlusT,
        CheckId::Sg1,
        CheckId::Sg2,
        CheckId::Sg3,
        CheckId::Sg4,
        CheckId::CInvariance,
        CheckId::EqF,
        CheckId::EqTt0,
        CheckId::EqInt,
        CheckId::QuadratureBound,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::LemmaAlphaI => "lemma_alpha_i",
            CheckId::LemmaAlphaII => "lemma_alpha_ii",
            CheckId::Lemma3Trichotomy => "lemma_3_trichotomy",
            CheckId::ThreeCaseDefinition => "three_case_definition",
            CheckId::EqNonex => "eq_nonex",
            CheckId::EqIsometric => "eq_isometric",
            CheckId::EqSPlusT => "eq_s_plus_t",
            CheckId::Sg1 => "sg1",
            CheckId::Sg2 => "sg2",
            CheckId::Sg3 => "sg3",
            CheckId::Sg4 => "sg4",
            CheckId::CInvariance => "C_invariance",
            CheckId::EqF => "eq_F",
            CheckId::EqTt0 => "eq_T_t_0",
            CheckId::EqInt => "eq_int",
            CheckId::QuadratureBound => "quadrature_bound",
        }
    }

    fn salt(self) -> u64 {
        CheckId::ALL.iter().position(|&c| c == self).expect("listed") as u64
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Argument(format!("unknown check id {s:?}")))
    }
}

/// Parameters of the random instance stream.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceGen {
    pub seed: u64,
    pub count: usize,
    /// Closed interval of times for checks that range over all `t ≥ 0`.
    #[serde(with = "rational_pair")]
    pub t_range: (Rational, Rational),
    pub breakpoint_budget: usize,
}

impl Default for InstanceGen {
    fn default() -> Self {
        InstanceGen { seed: 1, count: 200, t_range: (int(0), int(5)), breakpoint_budget: 6 }
    }
}

impl InstanceGen {
    pub fn with_count(count: usize) -> Self {
        InstanceGen { count, ..Self::default() }
    }

    fn sampler_for(&self, id: CheckId) -> Sampler {
        let seed = self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ id.salt();
        Sampler::new(seed, self.breakpoint_budget)
    }
}

mod rational_pair {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &(Rational, Rational), s: S) -> std::result::Result<S::Ok, S::Error> {
        (rational::format(&p.0), rational::format(&p.1)).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<(Rational, Rational), D::Error> {
        let (a, b) = <(String, String)>::deserialize(d)?;
        let parse = |s: &str| rational::parse(s).map_err(serde::de::Error::custom);
        Ok((parse(&a)?, parse(&b)?))
    }
}

/// Random members of `C`; deterministic per seed.
pub fn gen_random_c(gen: &InstanceGen) -> Vec<OmegaFn> {
    let mut s = Sampler::new(gen.seed, gen.breakpoint_budget);
    (0..gen.count).map(|_| s.function()).collect()
}

/// First failing instance of a check: its inputs and both sides of the violated relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub inputs: Vec<(String, String)>,
    pub relation: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    pub instances: usize,
    pub passed: usize,
    pub witness: Option<Witness>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.passed == self.instances && self.witness.is_none()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }
}

pub fn run_suite(id: CheckId, gen: &InstanceGen) -> CheckReport {
    run_suite_with(&ShiftClamp, id, gen)
}

/// Runs one check against any [`Evolution`], e.g. a mutant or an audited wrapper.
pub fn run_suite_with(evo: &dyn Evolution, id: CheckId, gen: &InstanceGen) -> CheckReport {
    let mut sampler = gen.sampler_for(id);
    let outcomes = suites::run(id, evo, gen, &mut sampler);
    let mut report = CheckReport { check_id: id.as_str().to_string(), instances: 0, passed: 0, witness: None };
    for o in outcomes {
        report.instances += 1;
        match o.verdict {
            Ok(()) => report.passed += 1,
            Err(f) => {
                report.witness.get_or_insert(Witness { inputs: o.inputs, relation: f.relation, lhs: f.lhs, rhs: f.rhs });
            }
        }
    }
    report
}

pub fn run_all(gen: &InstanceGen) -> Vec<CheckReport> {
    run_all_with(&ShiftClamp, gen)
}

/// All checks in [`CheckId::ALL`] order; suites run concurrently.
pub fn run_all_with(evo: &dyn Evolution, gen: &InstanceGen) -> Vec<CheckReport> {
    CheckId::ALL.par_iter().map(|&id| run_suite_with(evo, id, gen)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> InstanceGen {
        InstanceGen { count: 25, ..InstanceGen::default() }
    }

    #[test]
    fn ids_round_trip() {
        for id in CheckId::ALL {
            assert_eq!(id.as_str().parse::<CheckId>().unwrap(), id);
        }
        assert!("eq_nope".parse::<CheckId>().is_err());
    }

    #[test]
    fn generator_is_deterministic() {
        let g = InstanceGen { seed: 42, count: 30, ..InstanceGen::default() };
        let a = gen_random_c(&g);
        assert_eq!(a, gen_random_c(&g));
        assert!(a.iter().all(|x| x.in_c().in_c));
        let one = InstanceGen { breakpoint_budget: 1, ..g };
        assert!(gen_random_c(&one).iter().all(|x| x.breakpoints().len() == 1));
    }

    #[test]
    fn every_suite_passes_small() {
        for r in run_all(&small()) {
            assert!(r.ok(), "{}", r.to_json());
        }
    }

    #[test]
    fn reports_are_deterministic_and_serialize() {
        let a = run_suite(CheckId::EqSPlusT, &small());
        let b = run_suite(CheckId::EqSPlusT, &small());
        assert_eq!(a, b);
        let back: CheckReport = serde_json::from_str(&a.to_json()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn empty_count() {
        let g = InstanceGen { count: 0, ..InstanceGen::default() };
        let r = run_suite(CheckId::EqIsometric, &g);
        assert_eq!((r.instances, r.passed, r.witness), (0, 0, None));
    }

    #[test]
    fn skipped_clamp_breaks_semigroup_law() {
        let r = run_suite_with(&Mutant::SkipClamp, CheckId::EqSPlusT, &small());
        assert!(r.witness.is_some());
        assert!(r.passed < r.instances);
    }
}
