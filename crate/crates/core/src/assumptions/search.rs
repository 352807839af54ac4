use std::collections::VecDeque;
use std::ops::ControlFlow;

use super::annotate::AnnotationChecker;
use super::generator::{AnnotatedGenerator, AssumptionGenerator, BranchNode, InputNode};
use super::AssumptionError;
use crate::dominance::{for_each_canonical_transducer, Problem};
use crate::ltl::{LetterSpace, Valuation, VarSet};
use crate::strategies::Transducer;

#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Budget on branch plus input nodes per generator.
    pub max_nodes: usize,
    /// Longest promise list allowed at a branch node.
    pub max_promises: usize,
    /// Stop after this many dominant candidates.
    pub max_candidates: usize,
    /// Skip generators whose annotation space exceeds this size.
    pub max_annotations_per_generator: usize,
}

impl SearchOptions {
    pub fn with_nodes(max_nodes: usize) -> Self {
        SearchOptions {
            max_nodes,
            max_promises: 3,
            max_candidates: usize::MAX,
            max_annotations_per_generator: 4096,
        }
    }
}

/// Enumerates every assumption generator within the node budget exactly
/// once up to renumbering: nodes are numbered in discovery order, promise
/// lists are nondecreasing, and letter maps follow the space order. Fresh
/// references come last in every choice, so structurally small generators
/// tend to appear early.
pub fn for_each_generator<F>(
    support_space: &LetterSpace,
    max_nodes: usize,
    max_promises: usize,
    visit: &mut F,
) -> Result<ControlFlow<()>, AssumptionError>
where
    F: FnMut(&AssumptionGenerator) -> ControlFlow<()>,
{
    let letters = support_space.enumerate().map_err(AssumptionError::Ltl)?;
    if max_nodes < 2 {
        return Ok(ControlFlow::Continue(()));
    }
    let mut e = GenEnum {
        support: support_space.vars(),
        letters,
        max_nodes,
        max_promises,
        branches: vec![None],
        inputs: Vec::new(),
        order: VecDeque::from([NodeRef::Branch(0)]),
        visit,
    };
    e.define()
}

#[derive(Clone, Copy)]
enum NodeRef {
    Branch(usize),
    Input(usize),
}

struct GenEnum<'a, F> {
    support: VarSet,
    letters: Vec<Valuation>,
    max_nodes: usize,
    max_promises: usize,
    branches: Vec<Option<BranchNode>>,
    inputs: Vec<Option<InputNode>>,
    order: VecDeque<NodeRef>,
    visit: &'a mut F,
}

impl<F: FnMut(&AssumptionGenerator) -> ControlFlow<()>> GenEnum<'_, F> {
    fn node_count(&self) -> usize {
        self.branches.len() + self.inputs.len()
    }

    fn define(&mut self) -> Result<ControlFlow<()>, AssumptionError> {
        let Some(next) = self.order.pop_front() else {
            let gen = AssumptionGenerator::new(
                self.support,
                self.branches.iter().map(|b| b.clone().expect("defined")).collect(),
                self.inputs.iter().map(|i| i.clone().expect("defined")).collect(),
            )?;
            return Ok((self.visit)(&gen));
        };
        let flow = match next {
            NodeRef::Branch(b) => self.define_branch(b, Vec::new(), 0)?,
            NodeRef::Input(i) => self.define_input(i, Vec::new(), 0)?,
        };
        self.order.push_front(next);
        Ok(flow)
    }

    fn define_branch(
        &mut self,
        b: usize,
        list: Vec<usize>,
        min_id: usize,
    ) -> Result<ControlFlow<()>, AssumptionError> {
        if !list.is_empty() {
            self.branches[b] = Some(BranchNode { promises: list.clone() });
            if self.define()?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
            self.branches[b] = None;
        }
        if list.len() >= self.max_promises {
            return Ok(ControlFlow::Continue(()));
        }
        // Existing input nodes first, then one fresh.
        for id in min_id..self.inputs.len() {
            let mut next = list.clone();
            next.push(id);
            if self.define_branch(b, next, id)?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        if self.node_count() < self.max_nodes {
            let id = self.inputs.len();
            self.inputs.push(None);
            self.order.push_back(NodeRef::Input(id));
            let mut next = list;
            next.push(id);
            let flow = self.define_branch(b, next, id)?;
            self.order.pop_back();
            self.inputs.pop();
            if flow.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    fn define_input(
        &mut self,
        i: usize,
        edges: Vec<(Valuation, usize)>,
        letter_idx: usize,
    ) -> Result<ControlFlow<()>, AssumptionError> {
        if letter_idx == self.letters.len() {
            if edges.is_empty() {
                return Ok(ControlFlow::Continue(()));
            }
            self.inputs[i] = Some(InputNode { edges: edges.clone() });
            let flow = self.define()?;
            self.inputs[i] = None;
            return Ok(flow);
        }
        let letter = self.letters[letter_idx];
        // Letter absent.
        if self.define_input(i, edges.clone(), letter_idx + 1)?.is_break() {
            return Ok(ControlFlow::Break(()));
        }
        // Letter present, existing targets then one fresh.
        for target in 0..self.branches.len() {
            let mut next = edges.clone();
            next.push((letter, target));
            if self.define_input(i, next, letter_idx + 1)?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        if self.node_count() < self.max_nodes {
            let target = self.branches.len();
            self.branches.push(None);
            self.order.push_back(NodeRef::Branch(target));
            let mut next = edges;
            next.push((letter, target));
            let flow = self.define_input(i, next, letter_idx + 1)?;
            self.order.pop_back();
            self.branches.pop();
            if flow.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// An unconstrained tree shaped like the transducer: one branch per state
/// with a single promise, the annotation carrying the state output.
pub(crate) fn transducer_to_saat(
    t: &Transducer,
    support_space: &LetterSpace,
    outputs: VarSet,
) -> Result<AnnotatedGenerator, AssumptionError> {
    let letters = support_space.enumerate().map_err(AssumptionError::Ltl)?;
    let n = t.num_states();
    let renumber = |q: usize| -> usize {
        let init = t.initial_state();
        if q == init {
            0
        } else if q < init {
            q + 1
        } else {
            q
        }
    };
    let mut branches = vec![BranchNode { promises: vec![] }; n];
    let mut inputs = vec![InputNode { edges: vec![] }; n];
    let mut ann = vec![Vec::new(); n];
    for q in 0..n {
        let b = renumber(q);
        branches[b] = BranchNode { promises: vec![b] };
        inputs[b] = InputNode {
            edges: letters.iter().map(|&l| (l, renumber(t.step(q, l)))).collect(),
        };
        ann[b] = vec![t.output(q)];
    }
    let gen = AssumptionGenerator::new(support_space.vars(), branches, inputs)?;
    AnnotatedGenerator::new(gen, outputs, ann)
}

/// True when the generator is a plain unconstrained machine: one promise
/// everywhere and every letter admitted — exactly the shapes the
/// transducer phase already covers.
fn transducer_shaped(gen: &AssumptionGenerator, space: &LetterSpace) -> bool {
    gen.branches().iter().all(|b| b.promises.len() == 1)
        && gen.is_universal(space).unwrap_or(false)
}

/// Enumerates assumption generators up to the node bound, pairs each with
/// every annotation over the output letters, and returns the dominant ones,
/// most permissive first.
///
/// Unconstrained candidates are searched first through the canonical
/// transducer enumeration (state bound `max_nodes / 2`, matching the node
/// cost of their tree encodings); constrained generators follow in
/// canonical order. The permissiveness order is the path-language inclusion
/// preorder, decided by product simulation.
pub fn search_assumption_bounded(
    problem: &Problem,
    support: VarSet,
    opts: &SearchOptions,
) -> Result<Vec<AnnotatedGenerator>, AssumptionError> {
    let mut results = Vec::new();
    let mut stop = false;
    visit_dominant_candidates(problem, support, opts, &mut |ag| {
        results.push(ag);
        if results.len() >= opts.max_candidates {
            stop = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    let _ = stop;
    // Most permissive first: a candidate that simulates more of the others
    // sorts earlier; ties keep discovery order.
    let dominated: Vec<usize> = results
        .iter()
        .map(|g| {
            results
                .iter()
                .filter(|o| o.generator().path_subset(g.generator()))
                .count()
        })
        .collect();
    let mut idx: Vec<usize> = (0..results.len()).collect();
    idx.sort_by_key(|&i| std::cmp::Reverse(dominated[i]));
    Ok(idx.into_iter().map(|i| results[i].clone()).collect())
}

/// Streams dominant annotated generators in search order to `visit`.
pub(crate) fn visit_dominant_candidates(
    problem: &Problem,
    support: VarSet,
    opts: &SearchOptions,
    visit: &mut impl FnMut(AnnotatedGenerator) -> ControlFlow<()>,
) -> Result<(), AssumptionError> {
    let support_space = problem.arch().letter_space(support);
    let out_space = problem.output_space();
    let out_letters = out_space.enumerate().map_err(AssumptionError::Ltl)?;

    // Phase 1: unconstrained candidates as canonical transducers.
    let state_bound = opts.max_nodes / 2;
    let mut err: Option<AssumptionError> = None;
    for n in 1..=state_bound {
        let flow = for_each_canonical_transducer(&support_space, &out_space, n, &mut |t| {
            match problem.check_dominant(t) {
                Ok(v) if v.dominant => {
                    match transducer_to_saat(t, &support_space, problem.outputs()) {
                        Ok(ag) => visit(ag),
                        Err(e) => {
                            err = Some(e);
                            ControlFlow::Break(())
                        }
                    }
                }
                Ok(_) => ControlFlow::Continue(()),
                Err(e) => {
                    err = Some(e.into());
                    ControlFlow::Break(())
                }
            }
        })
        .map_err(AssumptionError::Dominance)?;
        if let Some(e) = err {
            return Err(e);
        }
        if flow.is_break() {
            return Ok(());
        }
    }

    // Phase 2: constrained generators with per-edge annotations.
    let checker = AnnotationChecker::new(problem, support)?;
    let mut err: Option<AssumptionError> = None;
    let _ = for_each_generator(&support_space, opts.max_nodes, opts.max_promises, &mut |gen| {
        if transducer_shaped(gen, &support_space) {
            return ControlFlow::Continue(());
        }
        let edges: Vec<(usize, usize)> = gen
            .branches()
            .iter()
            .enumerate()
            .flat_map(|(b, node)| (0..node.promises.len()).map(move |j| (b, j)))
            .collect();
        let combos = (out_letters.len() as u128).saturating_pow(edges.len() as u32);
        if combos > opts.max_annotations_per_generator as u128 {
            return ControlFlow::Continue(());
        }
        let mut assignment = vec![0usize; edges.len()];
        loop {
            let mut ann: Vec<Vec<Valuation>> = gen
                .branches()
                .iter()
                .map(|b| vec![Valuation::empty(); b.promises.len()])
                .collect();
            for (slot, &(b, j)) in edges.iter().enumerate() {
                ann[b][j] = out_letters[assignment[slot]];
            }
            match AnnotatedGenerator::new(gen.clone(), problem.outputs(), ann) {
                Ok(ag) => match checker.check(&ag) {
                    Ok(v) if v.dominant => {
                        if visit(ag).is_break() {
                            return ControlFlow::Break(());
                        }
                    }
                    Ok(_) => {}
                    Err(e) => {
                        err = Some(e);
                        return ControlFlow::Break(());
                    }
                },
                Err(e) => {
                    err = Some(e);
                    return ControlFlow::Break(());
                }
            }
            // Odometer over annotation letters.
            let mut slot = 0;
            loop {
                if slot == assignment.len() {
                    return ControlFlow::Continue(());
                }
                assignment[slot] += 1;
                if assignment[slot] < out_letters.len() {
                    break;
                }
                assignment[slot] = 0;
                slot += 1;
            }
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::{parse_ltl, PrioritizedSpec, Universe, VarId, VarKind};

    fn count_generators(letters: usize, max_nodes: usize, max_promises: usize) -> usize {
        let vars = VarSet::from_iter((0..letters as u16).map(VarId));
        let space = LetterSpace::from_letters(
            vars,
            (0..letters)
                .map(|i| Valuation::empty().with(VarId(i as u16)))
                .collect(),
        )
        .unwrap();
        let mut n = 0usize;
        for_each_generator(&space, max_nodes, max_promises, &mut |g| {
            assert!(g.node_count() <= max_nodes);
            n += 1;
            ControlFlow::Continue(())
        })
        .unwrap()
        .is_continue()
        .then_some(())
        .unwrap();
        n
    }

    #[test]
    fn two_node_generators_over_one_letter() {
        // One branch and one input node over a single letter: the only
        // letter map is {letter -> root}, promise lists of length 1..=3 over
        // the single input node.
        assert_eq!(count_generators(1, 2, 3), 3);
        assert_eq!(count_generators(1, 2, 1), 1);
    }

    #[test]
    fn enumeration_grows_with_the_budget() {
        let small = count_generators(2, 2, 2);
        let bigger = count_generators(2, 4, 2);
        assert!(small > 0);
        assert!(bigger > small);
    }

    #[test]
    fn xab_search_finds_the_next_value_promise_trees() {
        let mut u = Universe::new();
        u.declare("a", VarKind::OutputOf("q".to_owned())).unwrap();
        u.declare("b", VarKind::OutputOf("p".to_owned())).unwrap();
        let arch = crate::strategies::Architecture::new(
            u.clone(),
            vec![
                ("p".to_owned(), VarSet::singleton(VarId(1))),
                ("q".to_owned(), VarSet::singleton(VarId(0))),
            ],
            vec![],
        )
        .unwrap();
        let spec = PrioritizedSpec::single(parse_ltl("(X a) <-> b", &u).unwrap());
        let problem =
            Problem::new(arch, spec, VarSet::singleton(VarId(1)), None).unwrap();
        let results = search_assumption_bounded(
            &problem,
            VarSet::singleton(VarId(0)),
            &SearchOptions { max_nodes: 6, ..SearchOptions::with_nodes(6) },
        )
        .unwrap();
        assert!(!results.is_empty());
        // No unconstrained candidate exists: every result restricts a's
        // future, i.e. is not universal.
        let space = problem.arch().letter_space(VarSet::singleton(VarId(0)));
        for r in &results {
            assert!(!r.generator().is_universal(&space).unwrap());
        }
    }
}
