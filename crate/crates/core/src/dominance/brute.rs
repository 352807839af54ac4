use super::problem::Problem;
use super::verdict::{Counterexample, DominanceVerdict};
use super::DominanceError;
use crate::ltl::{Lasso, Valuation, VarSet};
use crate::strategies::{comp, Transducer};

/// Hard cap on the number of (environment, output) lasso pairs the
/// brute-force check will enumerate.
const MAX_PAIRS: u128 = 50_000_000;

/// Every lasso over `letters` with the given stem and loop bounds, in a
/// fixed deterministic order: stems by length then letter index, loops
/// likewise.
pub(crate) fn all_lassos(
    vars: VarSet,
    letters: &[Valuation],
    max_stem: usize,
    max_cycle: usize,
) -> Vec<Lasso> {
    let mut words: Vec<Vec<Valuation>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<Valuation>> = vec![Vec::new()];
    for _ in 1..=max_stem.max(max_cycle) {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in letters {
                let mut w2 = w.clone();
                w2.push(l);
                next.push(w2);
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let mut out = Vec::new();
    for stem in words.iter().filter(|w| w.len() <= max_stem) {
        for cycle in words.iter().filter(|w| !w.is_empty() && w.len() <= max_cycle) {
            out.push(Lasso::new(vars, stem.clone(), cycle.clone()).expect("bounded lasso"));
        }
    }
    out
}

impl Problem {
    /// Independent falsification oracle: enumerates every environment lasso
    /// and every alternative output lasso within the bounds and compares
    /// achieved priorities by direct semantic evaluation. A "dominant"
    /// verdict here certifies only the absence of a counterexample within
    /// the bounds; it is used to validate [`Problem::check_dominant`]
    /// counterexamples and to falsify wrong dominance claims.
    pub fn brute_force_dominance(
        &self,
        s: &Transducer,
        stem_bound: usize,
        loop_bound: usize,
    ) -> Result<DominanceVerdict, DominanceError> {
        let env_letters = self.env_space().enumerate().map_err(DominanceError::Ltl)?;
        let out_letters = self.output_space().enumerate().map_err(DominanceError::Ltl)?;
        let lasso_count = |d: u128| -> u128 {
            let geom = |base: u128, up_to: usize| -> u128 {
                (0..=up_to).map(|e| base.saturating_pow(e as u32)).sum()
            };
            let stems = geom(d, stem_bound);
            let cycles = geom(d, loop_bound) - 1;
            stems.saturating_mul(cycles)
        };
        let pairs = lasso_count(env_letters.len() as u128)
            .saturating_mul(lasso_count(out_letters.len() as u128));
        if pairs > MAX_PAIRS {
            return Err(DominanceError::BoundExceeded { candidates: pairs });
        }

        let sys = self.controlled(s)?;
        let gammas = all_lassos(self.env_vars(), &env_letters, stem_bound, loop_bound);
        let responses = all_lassos(self.outputs(), &out_letters, stem_bound, loop_bound);
        for gamma in &gammas {
            let run = comp(&sys, gamma)?;
            let achieved = self.spec().achieved_on(&run)?;
            if achieved == self.spec().len() {
                continue;
            }
            for outs in &responses {
                let full = self.complete(gamma, outs)?;
                let achievable = self.spec().achieved_on(&full)?;
                if achievable > achieved {
                    return Ok(DominanceVerdict::beaten(Counterexample {
                        gamma: gamma.clone(),
                        better_outputs: outs.clone(),
                        achieved,
                        achievable,
                    }));
                }
            }
        }
        Ok(DominanceVerdict::dominant())
    }
}
