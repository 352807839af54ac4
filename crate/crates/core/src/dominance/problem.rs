use super::verdict::{Counterexample, DominanceVerdict, WinningVerdict};
use super::DominanceError;
use crate::automata::{ltl_to_buchi, BuchiAutomaton};
use crate::ltl::{Formula, Lasso, LetterSpace, PrioritizedSpec, VarSet};
use crate::strategies::{comp, compose, Architecture, Transducer};

/// One process-or-group analysis setting: which outputs are controlled,
/// which prioritized objectives apply, and an optional plant transducer
/// computing world-state predicates from the joint actions.
///
/// All verdicts quantify environments as fixed valuation sequences over the
/// free variables: the environment does not react to outputs. Alternatives
/// to a strategy may therefore be taken as output words, since on a fixed
/// environment word a strategy is free to ignore its inputs; the
/// brute-force oracle cross-validates this reformulation.
#[derive(Debug, Clone)]
pub struct Problem {
    arch: Architecture,
    spec: PrioritizedSpec,
    outputs: VarSet,
    plant: Option<Transducer>,
}

impl Problem {
    pub fn new(
        arch: Architecture,
        spec: PrioritizedSpec,
        outputs: VarSet,
        plant: Option<Transducer>,
    ) -> Result<Self, DominanceError> {
        let full = arch.universe().full_set();
        if !outputs.is_subset_of(full) {
            return Err(DominanceError::InterfaceMismatch(
                "controlled outputs outside the universe".to_owned(),
            ));
        }
        if !spec.vars().is_subset_of(full) {
            return Err(DominanceError::InterfaceMismatch(
                "objectives mention undeclared variables".to_owned(),
            ));
        }
        if let Some(p) = &plant {
            if !p.outputs().is_disjoint_from(outputs) {
                return Err(DominanceError::InterfaceMismatch(
                    "plant predicates overlap the controlled outputs".to_owned(),
                ));
            }
            if !p.outputs().union(p.inputs()).is_subset_of(full) {
                return Err(DominanceError::InterfaceMismatch(
                    "plant interface outside the universe".to_owned(),
                ));
            }
        }
        Ok(Problem { arch, spec, outputs, plant })
    }

    pub fn arch(&self) -> &Architecture {
        &self.arch
    }

    pub fn spec(&self) -> &PrioritizedSpec {
        &self.spec
    }

    pub fn outputs(&self) -> VarSet {
        self.outputs
    }

    pub fn plant(&self) -> Option<&Transducer> {
        self.plant.as_ref()
    }

    /// Free environment variables: everything neither controlled nor
    /// computed by the plant.
    pub fn env_vars(&self) -> VarSet {
        let mut v = self.arch.universe().full_set().difference(self.outputs);
        if let Some(p) = &self.plant {
            v = v.difference(p.outputs());
        }
        v
    }

    pub fn env_space(&self) -> LetterSpace {
        self.arch.letter_space(self.env_vars())
    }

    pub fn output_space(&self) -> LetterSpace {
        self.arch.letter_space(self.outputs)
    }

    pub fn full_space(&self) -> LetterSpace {
        self.arch.letter_space(self.arch.universe().full_set())
    }

    /// The strategy together with the plant, as one transducer over the
    /// free environment variables.
    pub fn controlled(&self, s: &Transducer) -> Result<Transducer, DominanceError> {
        if s.outputs() != self.outputs {
            return Err(DominanceError::InterfaceMismatch(
                "strategy outputs differ from the problem's controlled outputs".to_owned(),
            ));
        }
        if !s.inputs().is_subset_of(self.arch.universe().full_set().difference(self.outputs)) {
            return Err(DominanceError::InterfaceMismatch(
                "strategy reads variables outside its view".to_owned(),
            ));
        }
        match &self.plant {
            None => Ok(s.clone()),
            Some(plant) => Ok(compose(s, plant)?),
        }
    }

    /// Fills an environment word and an output word into a full computation,
    /// running the plant for the predicate variables.
    pub fn complete(&self, gamma: &Lasso, outs: &Lasso) -> Result<Lasso, DominanceError> {
        let joint = gamma.superpose(outs)?;
        match &self.plant {
            None => Ok(joint),
            Some(plant) => Ok(comp(plant, &joint)?),
        }
    }

    /// Achieved priority of the strategy's computation against `gamma`.
    pub fn achieved(&self, s: &Transducer, gamma: &Lasso) -> Result<usize, DominanceError> {
        let sys = self.controlled(s)?;
        let run = comp(&sys, gamma)?;
        Ok(self.spec.achieved_on(&run)?)
    }

    /// Büchi automaton for an objective over the full variable set.
    fn objective_automaton(&self, f: &Formula) -> BuchiAutomaton {
        ltl_to_buchi(f, self.arch.universe().full_set())
    }

    /// The plant's computation language, or accept-all when there is none.
    pub(crate) fn plant_automaton(&self) -> BuchiAutomaton {
        match &self.plant {
            Some(p) => p.to_buchi().pad_alphabet(self.arch.universe().full_set()),
            None => BuchiAutomaton::accept_all(self.arch.universe().full_set()),
        }
    }

    /// Language of environment words on which some output word reaches
    /// priority `k`: the objective automaton, constrained by the plant,
    /// with the controlled outputs and predicates projected away.
    pub fn achievability_automaton(&self, k: usize) -> Result<BuchiAutomaton, DominanceError> {
        let phi = self.spec.partial_conjunction(k).map_err(DominanceError::Ltl)?;
        let product = self.objective_automaton(&phi.to_nnf()).product(&self.plant_automaton());
        Ok(product.project(self.env_vars())?)
    }

    /// A strategy wins `f` iff no computation of it satisfies `¬f`; decided
    /// by emptiness of the product with the negated objective.
    pub fn check_winning(
        &self,
        f: &Formula,
        s: &Transducer,
    ) -> Result<WinningVerdict, DominanceError> {
        let sys = self.controlled(s)?;
        let bad = self.objective_automaton(&f.negate_nnf());
        let product = sys
            .to_buchi()
            .pad_alphabet(self.arch.universe().full_set())
            .product(&bad);
        match product.accepting_lasso_in(&self.full_space()) {
            None => Ok(WinningVerdict { winning: true, counter_gamma: None }),
            Some(w) => Ok(WinningVerdict {
                winning: false,
                counter_gamma: Some(w.lasso.restrict(self.env_vars())),
            }),
        }
    }

    /// A strategy is dominant iff no alternative beats it on any environment
    /// word: for every priority `k`, the environment words achievable at `k`
    /// must avoid the words where the strategy's own computation violates
    /// `φᵏ`. The union over `k` of those intersections is checked for
    /// emptiness; a nonempty level yields a self-validating counterexample
    /// with a better output word recovered from the projection witness.
    pub fn check_dominant(&self, s: &Transducer) -> Result<DominanceVerdict, DominanceError> {
        let sys = self.controlled(s)?;
        let sys_lang = sys.to_buchi().pad_alphabet(self.arch.universe().full_set());
        let env = self.env_vars();
        let env_space = self.env_space();
        for k in 1..=self.spec.len() {
            let phi = self.spec.partial_conjunction(k).map_err(DominanceError::Ltl)?;
            let achievable = self.achievability_automaton(k)?;
            let violates = sys_lang
                .product(&self.objective_automaton(&phi.negate_nnf()))
                .project(env)?;
            if let Some(w) = achievable.product(&violates).accepting_lasso_in(&env_space) {
                return Ok(DominanceVerdict::beaten(self.counterexample_from(s, w.lasso)?));
            }
        }
        Ok(DominanceVerdict::dominant())
    }

    /// Builds the full counterexample record for an environment word on
    /// which `s` is beaten: recompute the achieved priority semantically and
    /// search the best achievable response from the top priority down.
    fn counterexample_from(
        &self,
        s: &Transducer,
        gamma: Lasso,
    ) -> Result<Counterexample, DominanceError> {
        let achieved = self.achieved(s, &gamma)?;
        let (achievable, better) = self
            .best_response(&gamma, achieved)?
            .expect("a dominance counterexample admits a better response");
        Ok(Counterexample { gamma, better_outputs: better, achieved, achievable })
    }

    /// Highest priority achievable on `gamma` by any output word, together
    /// with a witness output word, provided it exceeds `floor`.
    pub fn best_response(
        &self,
        gamma: &Lasso,
        floor: usize,
    ) -> Result<Option<(usize, Lasso)>, DominanceError> {
        let full = self.arch.universe().full_set();
        let gamma_lang = BuchiAutomaton::from_lasso(gamma, full)?;
        let plant_lang = self.plant_automaton();
        for m in (floor + 1..=self.spec.len()).rev() {
            let phi = self.spec.partial_conjunction(m).map_err(DominanceError::Ltl)?;
            let lang = self
                .objective_automaton(&phi.to_nnf())
                .product(&plant_lang)
                .product(&gamma_lang);
            if let Some(w) = lang.accepting_lasso_in(&self.full_space()) {
                return Ok(Some((m, w.lasso.restrict(self.outputs))));
            }
        }
        Ok(None)
    }
}
