//! Randomized verification suites. Each trial draws its own seed from the
//! master seed, so results do not depend on thread count or scheduling.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::additive::{additive_energy, additive_energy_quadruples, sumset};
use crate::error::{Error, Result};
use crate::gen;
use crate::lemmas::{binom_ratio_check, lemma31_verify, lemma53_find_index};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Lemma31,
    Lemma53,
    Binom,
    Algebra,
    Energy,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Lemma31, Suite::Lemma53, Suite::Binom, Suite::Algebra, Suite::Energy];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma31 => "lemma31",
            Suite::Lemma53 => "lemma53",
            Suite::Binom => "binom",
            Suite::Algebra => "algebra",
            Suite::Energy => "energy",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialFailure {
    pub trial: usize,
    pub seed: u64,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub trials: usize,
    pub seed: u64,
    pub passed: usize,
    /// Trials whose instance missed the hypothesis; counted as passes.
    pub vacuous: usize,
    pub failures: Vec<TrialFailure>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Per-trial seeds, a pure function of the master seed.
pub fn trial_seeds(master: u64, trials: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    (0..trials).map(|_| rng.gen()).collect()
}

enum Outcome {
    Pass,
    Vacuous,
}

pub fn run_suite(suite: Suite, trials: usize, seed: u64) -> VerifyReport {
    let seeds = trial_seeds(seed, trials);
    let outcomes: Vec<std::result::Result<Outcome, String>> = seeds
        .par_iter()
        .map(|&s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            run_trial(suite, &mut rng).map_err(|e| e.to_string())
        })
        .collect();
    let mut report = VerifyReport {
        suite,
        trials,
        seed,
        passed: 0,
        vacuous: 0,
        failures: Vec::new(),
    };
    for (trial, (outcome, &s)) in outcomes.into_iter().zip(&seeds).enumerate() {
        match outcome {
            Ok(Outcome::Pass) => report.passed += 1,
            Ok(Outcome::Vacuous) => {
                report.passed += 1;
                report.vacuous += 1;
            }
            Err(message) => report.failures.push(TrialFailure { trial, seed: s, message }),
        }
    }
    report
}

fn check(cond: bool, message: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Assertion(message()))
    }
}

fn run_trial(suite: Suite, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    match suite {
        Suite::Lemma31 => {
            let (sys, delta) = gen::random_set_system(rng, 200, 0.3, 30);
            let rep = lemma31_verify(&sys, delta)?;
            Ok(if rep.hypothesis_met { Outcome::Pass } else { Outcome::Vacuous })
        }
        Suite::Lemma53 => {
            let d = gen::random_degree_matrix(rng, 30);
            let rep = lemma53_find_index(&d)?;
            // Recheck the returned index from scratch with rational dot products.
            let row = &d.rows()[rep.index];
            let recount = d
                .rows()
                .iter()
                .filter(|other| {
                    let dot: Rational = row.iter().zip(other.iter()).map(|(a, b)| a * b).sum();
                    dot > rep.threshold
                })
                .count();
            check(recount == rep.qualifying_indices.len(), || {
                format!("index {} recounts to {recount}", rep.index)
            })?;
            check(Rational::from(recount) >= rep.bound, || {
                format!("{recount} qualifying rows below {}", rep.bound)
            })?;
            Ok(Outcome::Pass)
        }
        Suite::Binom => {
            let k = rng.gen_range(0..=3);
            let rep = binom_ratio_check(k, 0.5, 1_000_000)?;
            check(rep.deviation < 0.01, || format!("k={k}: deviation {}", rep.deviation))?;
            Ok(Outcome::Pass)
        }
        Suite::Algebra => {
            let f = gen::random_line(rng, 50, 12);
            let g = gen::random_line(rng, 50, 12);
            check(f.invert().invert() == f, || format!("double inverse of {f:?}"))?;
            check(f.star(&f).is_identity(), || format!("{f:?} * itself"))?;
            check(f.star(&g).slope() == &(g.slope() / f.slope()), || format!("slope of {f:?} * {g:?}"))?;
            check(
                f.star(&g).slope() == g.invert().star(&f.invert()).slope(),
                || format!("commutator slopes for {f:?}, {g:?}"),
            )?;
            Ok(Outcome::Pass)
        }
        Suite::Energy => {
            let a = gen::random_number_set(rng, 20, 15, 3);
            let e = additive_energy(&a, &a);
            let brute = additive_energy_quadruples(&a, &a);
            check(e == brute, || format!("histogram {e} vs quadruples {brute}"))?;
            let n = a.len() as u128;
            check(e as u128 * sumset(&a, &a).len() as u128 >= n.pow(4), || {
                format!("E(A,A) = {e} below |A|^4/|A+A|")
            })?;
            Ok(Outcome::Pass)
        }
    }
}
