use std::collections::HashMap;

use super::generator::AnnotatedGenerator;
use super::AssumptionError;
use crate::automata::{ltl_to_buchi, BuchiAutomaton, Cube, Guard};
use crate::dominance::{Counterexample, DominanceVerdict, Problem};
use crate::ltl::{LetterSpace, Universe, VarId, VarSet};

/// Decides whether strategy annotations of assumption generators are
/// dominant, for one fixed problem and support.
///
/// The check runs over a doubled alphabet: the base variables carry the
/// annotation's computation, and primed copies of the controlled outputs
/// (and plant predicates) carry an alternative response to the same
/// environment letters. For each priority `k`, the product of
///
/// * the annotated generator's path language (base outputs pinned to the
///   annotation, environment letters restricted to the tree),
/// * the negated partial conjunction over the base variables,
/// * the partial conjunction over the primed variables, and
/// * one plant copy per side
///
/// is tested for emptiness: a witness is an in-tree path where some output
/// word strictly beats the annotation. Alternatives range over output
/// words because, along a single path of a tree, an annotation can realize
/// any output word. The per-priority fixed parts are built once and reused
/// across candidate generators.
pub struct AnnotationChecker {
    problem: Problem,
    support: VarSet,
    ext_universe: Universe,
    prime: HashMap<VarId, VarId>,
    unprime: HashMap<VarId, VarId>,
    ext_space: LetterSpace,
    ext_alphabet: VarSet,
    fixed: Vec<BuchiAutomaton>,
}

impl AnnotationChecker {
    pub fn new(problem: &Problem, support: VarSet) -> Result<Self, AssumptionError> {
        if !support.is_subset_of(problem.env_vars()) {
            return Err(AssumptionError::InterfaceMismatch(
                "support must lie within the free environment variables".to_owned(),
            ));
        }
        let base = problem.arch().universe();
        let mut ext_universe = base.clone();
        let mut prime = HashMap::new();
        let mut unprime = HashMap::new();
        let mut primed_set = problem.outputs();
        if let Some(p) = problem.plant() {
            primed_set = primed_set.union(p.outputs());
        }
        for v in primed_set.iter() {
            let alt = ext_universe
                .declare(&format!("{}__alt", base.name(v)), crate::ltl::VarKind::ExternalInput)
                .map_err(AssumptionError::Ltl)?;
            prime.insert(v, alt);
            unprime.insert(alt, v);
        }
        let ext_alphabet = ext_universe.full_set();

        // Joint letters: base letters times primed copies of the valid
        // output letters times free predicate copies.
        let base_space = problem.full_space();
        let alt_out_letters: Vec<_> = problem
            .output_space()
            .enumerate()
            .map_err(AssumptionError::Ltl)?
            .into_iter()
            .map(|l| l.rename(&prime))
            .collect();
        let alt_outputs =
            VarSet::from_iter(problem.outputs().iter().map(|v| prime[&v]));
        let alt_out_space = LetterSpace::from_letters(alt_outputs, alt_out_letters)
            .map_err(AssumptionError::Ltl)?;
        let mut ext_space = base_space
            .product(&alt_out_space)
            .map_err(AssumptionError::Ltl)?;
        if let Some(p) = problem.plant() {
            let alt_preds = VarSet::from_iter(p.outputs().iter().map(|v| prime[&v]));
            ext_space = ext_space
                .product(&LetterSpace::free(alt_preds))
                .map_err(AssumptionError::Ltl)?;
        }

        // Per-priority fixed product: base side must violate phi_k while the
        // primed side satisfies it, both plant-consistent.
        let plant_base = problem.plant_automaton().pad_alphabet(ext_alphabet);
        let plant_alt = match problem.plant() {
            Some(p) => p.to_buchi().rename_vars(&prime).pad_alphabet(ext_alphabet),
            None => BuchiAutomaton::accept_all(ext_alphabet),
        };
        let mut fixed = Vec::new();
        for k in 1..=problem.spec().len() {
            let phi = problem
                .spec()
                .partial_conjunction(k)
                .map_err(AssumptionError::Ltl)?;
            let base_bad = ltl_to_buchi(&phi.negate_nnf(), ext_alphabet);
            let alt_good = ltl_to_buchi(&phi.to_nnf().rename(&prime), ext_alphabet);
            fixed.push(base_bad.product(&alt_good).product(&plant_base).product(&plant_alt));
        }
        Ok(AnnotationChecker {
            problem: problem.clone(),
            support,
            ext_universe,
            prime,
            unprime,
            ext_space,
            ext_alphabet,
            fixed,
        })
    }

    pub fn ext_universe(&self) -> &Universe {
        &self.ext_universe
    }

    /// Path language of the annotated generator: all computations the
    /// annotation produces along in-tree paths. Primed variables and
    /// environment variables outside the support stay unconstrained.
    fn saat_language(&self, ag: &AnnotatedGenerator) -> BuchiAutomaton {
        let gen = ag.generator();
        let mut aut = BuchiAutomaton::new(self.ext_alphabet);
        for b in 0..gen.branches().len() {
            aut.add_state(b == 0, true);
        }
        for (b, node) in gen.branches().iter().enumerate() {
            for (j, &input) in node.promises.iter().enumerate() {
                let out_cube = Cube::exactly(ag.annotation(b, j), ag.outputs());
                for (letter, target) in &gen.inputs()[input].edges {
                    let guard = Cube::exactly(*letter, self.support)
                        .and(&out_cube)
                        .expect("support and outputs are disjoint");
                    aut.add_edge(b, Guard::from_cube(guard), *target)
                        .expect("generator edge");
                }
            }
        }
        aut
    }

    /// Dominance of the annotation: no in-tree path may admit an output
    /// word achieving a strictly higher priority than the annotation.
    pub fn check(&self, ag: &AnnotatedGenerator) -> Result<DominanceVerdict, AssumptionError> {
        if ag.generator().support() != self.support {
            return Err(AssumptionError::InterfaceMismatch(
                "generator support differs from the checker's support".to_owned(),
            ));
        }
        if ag.outputs() != self.problem.outputs() {
            return Err(AssumptionError::InterfaceMismatch(
                "annotation outputs differ from the problem's controlled outputs".to_owned(),
            ));
        }
        let lang = self.saat_language(ag);
        let base_vars = self.problem.arch().universe().full_set();
        for fixed in &self.fixed {
            if let Some(w) = lang.product(fixed).accepting_lasso_in(&self.ext_space) {
                let base = w.lasso.restrict(base_vars);
                let alt = {
                    let primed: VarSet =
                        VarSet::from_iter(self.prime.values().copied());
                    let env_part = base_vars.difference(
                        self.problem.outputs().union(
                            self.problem
                                .plant()
                                .map(|p| p.outputs())
                                .unwrap_or_default(),
                        ),
                    );
                    w.lasso.restrict(env_part.union(primed)).rename(&self.unprime)
                };
                let achieved = self.problem.spec().achieved_on(&base)?;
                let achievable = self.problem.spec().achieved_on(&alt)?;
                debug_assert!(achievable > achieved);
                return Ok(DominanceVerdict::beaten(Counterexample {
                    gamma: w.lasso.restrict(self.problem.env_vars()),
                    better_outputs: alt.restrict(self.problem.outputs()),
                    achieved,
                    achievable,
                }));
            }
        }
        Ok(DominanceVerdict::dominant())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assumptions::generator::{AssumptionGenerator, BranchNode, InputNode};
    use crate::fixtures::SideBySide;
    use crate::ltl::Valuation;

    struct Setup {
        s: SideBySide,
        problem: Problem,
        checker: AnnotationChecker,
        support: VarSet,
    }

    fn setup() -> Setup {
        let s = SideBySide::build();
        let problem = Problem::new(
            s.arch.clone(),
            s.spec.clone(),
            s.ego_outputs,
            Some(s.plant.clone()),
        )
        .unwrap();
        let support = s.other_outputs;
        let checker = AnnotationChecker::new(&problem, support).unwrap();
        Setup { s, problem, checker, support }
    }

    fn letter(s: &SideBySide, name: &str) -> Valuation {
        s.letter(&[name])
    }

    /// The unconstrained one-promise tree over the other car's actions.
    fn universal(set: &Setup) -> AssumptionGenerator {
        let space = set.problem.arch().letter_space(set.support);
        AssumptionGenerator::universal(set.support, &space).unwrap()
    }

    /// "other always keeps" unrolled to two steps so the annotation can
    /// alternate.
    fn always_keep_two_phase(set: &Setup) -> AssumptionGenerator {
        let keep = letter(&set.s, "keep_o");
        AssumptionGenerator::new(
            set.support,
            vec![
                BranchNode { promises: vec![0] },
                BranchNode { promises: vec![1] },
            ],
            vec![
                InputNode { edges: vec![(keep, 1)] },
                InputNode { edges: vec![(keep, 0)] },
            ],
        )
        .unwrap()
    }

    /// "other deviates within K steps, then anything": one promise per
    /// deviation step.
    pub(crate) fn deviate_within(set: &Setup, k: usize) -> AssumptionGenerator {
        let accel = letter(&set.s, "accel_o");
        let decel = letter(&set.s, "decel_o");
        let keep = letter(&set.s, "keep_o");
        // Branch nodes: free (absorbing) is last; chain nodes 0..k.
        // Branch i promises "first deviation in i more steps".
        let mut branches = Vec::new();
        let mut inputs = Vec::new();
        let free_branch = k;
        // Chain: at branch i < k promises lead to deviate-now or wait.
        for i in 0..k {
            let mut promises = vec![inputs.len()];
            inputs.push(InputNode { edges: vec![(accel, free_branch), (decel, free_branch)] });
            if i + 1 < k {
                promises.push(inputs.len());
                inputs.push(InputNode { edges: vec![(keep, i + 1)] });
            }
            branches.push(BranchNode { promises });
        }
        // Absorbing free subtree.
        branches.push(BranchNode { promises: vec![inputs.len()] });
        inputs.push(InputNode {
            edges: vec![(accel, free_branch), (keep, free_branch), (decel, free_branch)],
        });
        AssumptionGenerator::new(set.support, branches, inputs).unwrap()
    }

    fn constant_ann(
        set: &Setup,
        gen: &AssumptionGenerator,
        out: Valuation,
    ) -> AnnotatedGenerator {
        let ann = gen
            .branches()
            .iter()
            .map(|b| vec![out; b.promises.len()])
            .collect();
        AnnotatedGenerator::new(gen.clone(), set.s.ego_outputs, ann).unwrap()
    }

    #[test]
    fn keeping_is_dominant_when_other_must_deviate() {
        let set = setup();
        let gen = deviate_within(&set, 2);
        let keep_e = letter(&set.s, "keep_e");
        let ag = constant_ann(&set, &gen, keep_e);
        let verdict = set.checker.check(&ag).unwrap();
        assert!(verdict.dominant);
    }

    #[test]
    fn keeping_is_not_dominant_on_the_universal_tree() {
        let set = setup();
        let gen = universal(&set);
        let keep_e = letter(&set.s, "keep_e");
        let ag = constant_ann(&set, &gen, keep_e);
        let verdict = set.checker.check(&ag).unwrap();
        assert!(!verdict.dominant);
        let cex = verdict.counterexample.unwrap();
        assert!(cex.achievable > cex.achieved);
        // Validate both sides semantically.
        let full = set
            .problem
            .complete(&cex.gamma, &cex.better_outputs)
            .unwrap();
        assert_eq!(set.s.spec.achieved_on(&full).unwrap(), cex.achievable);
    }

    #[test]
    fn alternating_annotation_is_dominant_on_always_keep() {
        let set = setup();
        let gen = always_keep_two_phase(&set);
        let accel_e = letter(&set.s, "accel_e");
        let decel_e = letter(&set.s, "decel_e");
        let ag = AnnotatedGenerator::new(
            gen,
            set.s.ego_outputs,
            vec![vec![accel_e], vec![decel_e]],
        )
        .unwrap();
        let verdict = set.checker.check(&ag).unwrap();
        assert!(verdict.dominant);
    }

    #[test]
    fn constant_accel_is_dominant_on_always_keep_but_keep_is_not() {
        let set = setup();
        let gen = always_keep_two_phase(&set);
        // Any strategy that moves at least once achieves priority 1; keeping
        // forever achieves nothing while a move would.
        let accel_e = letter(&set.s, "accel_e");
        let keep_e = letter(&set.s, "keep_e");
        assert!(set.checker.check(&constant_ann(&set, &gen, accel_e)).unwrap().dominant);
        assert!(!set.checker.check(&constant_ann(&set, &gen, keep_e)).unwrap().dominant);
    }
}
