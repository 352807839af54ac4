use std::collections::HashMap;

use super::StrategyError;
use crate::automata::{BuchiAutomaton, Cube, Guard};
use crate::ltl::{Lasso, PrioritizedSpec, Valuation, VarSet};

/// Input tables are dense over `2^|inputs|`, so cap the input arity.
const MAX_INPUT_VARS: usize = 16;

/// A finite-state strategy: a Moore transducer with a total, deterministic
/// transition function over input valuations and one output letter per
/// state. The output at step `i` therefore depends only on the inputs at
/// steps before `i`. World models are encoded the same way, as plants whose
/// outputs are state predicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transducer {
    inputs: VarSet,
    outputs: VarSet,
    initial: usize,
    outs: Vec<Valuation>,
    next: Vec<Vec<usize>>,
}

impl Transducer {
    pub fn new(
        inputs: VarSet,
        outputs: VarSet,
        initial: usize,
        outs: Vec<Valuation>,
        next: Vec<Vec<usize>>,
    ) -> Result<Self, StrategyError> {
        if !inputs.is_disjoint_from(outputs) {
            return Err(StrategyError::BadTransducer(
                "inputs and outputs overlap".to_owned(),
            ));
        }
        if inputs.count() > MAX_INPUT_VARS {
            return Err(StrategyError::TooManyInputs { limit: MAX_INPUT_VARS });
        }
        let n = outs.len();
        if n == 0 || next.len() != n || initial >= n {
            return Err(StrategyError::BadTransducer(
                "state tables are empty or inconsistent".to_owned(),
            ));
        }
        let width = 1usize << inputs.count();
        for (q, row) in next.iter().enumerate() {
            if row.len() != width {
                return Err(StrategyError::BadTransducer(format!(
                    "state {q} transition row has {} entries, expected {width}",
                    row.len()
                )));
            }
            if row.iter().any(|&t| t >= n) {
                return Err(StrategyError::BadTransducer(format!(
                    "state {q} transitions to an undeclared state"
                )));
            }
        }
        if outs.iter().any(|o| !o.is_within(outputs)) {
            return Err(StrategyError::BadTransducer(
                "state output outside the declared output variables".to_owned(),
            ));
        }
        Ok(Transducer { inputs, outputs, initial, outs, next })
    }

    /// One state that ignores inputs and always emits `letter`.
    pub fn constant(
        inputs: VarSet,
        outputs: VarSet,
        letter: Valuation,
    ) -> Result<Self, StrategyError> {
        let width = 1usize << inputs.count();
        Transducer::new(inputs, outputs, 0, vec![letter], vec![vec![0; width]])
    }

    pub fn inputs(&self) -> VarSet {
        self.inputs
    }

    pub fn outputs(&self) -> VarSet {
        self.outputs
    }

    pub fn num_states(&self) -> usize {
        self.outs.len()
    }

    pub fn initial_state(&self) -> usize {
        self.initial
    }

    pub fn output(&self, q: usize) -> Valuation {
        self.outs[q]
    }

    pub fn step(&self, q: usize, letter: Valuation) -> usize {
        self.next[q][self.inputs.compress(letter.restrict(self.inputs))]
    }

    /// Output after consuming a finite input history, i.e. the strategy as a
    /// function of histories.
    pub fn eval_history(&self, history: &[Valuation]) -> Valuation {
        let mut q = self.initial;
        for &letter in history {
            q = self.step(q, letter);
        }
        self.outs[q]
    }

    /// The language of computations of this transducer, as a Büchi automaton
    /// over `inputs ∪ outputs`: every state accepting, one edge per input
    /// letter pinning the current output exactly.
    pub fn to_buchi(&self) -> BuchiAutomaton {
        let alphabet = self.inputs.union(self.outputs);
        let mut aut = BuchiAutomaton::new(alphabet);
        for q in 0..self.num_states() {
            aut.add_state(q == self.initial, true);
        }
        let width = 1usize << self.inputs.count();
        for q in 0..self.num_states() {
            let out_cube = Cube::exactly(self.outs[q], self.outputs);
            let mut by_target: HashMap<usize, Guard> = HashMap::new();
            for idx in 0..width {
                let letter = self.inputs.expand(idx);
                let cube = Cube::exactly(letter, self.inputs)
                    .and(&out_cube)
                    .expect("disjoint variable sets");
                let t = self.next[q][idx];
                by_target
                    .entry(t)
                    .and_modify(|g| *g = g.or(&Guard::from_cube(cube)))
                    .or_insert_with(|| Guard::from_cube(cube));
            }
            let mut targets: Vec<_> = by_target.into_iter().collect();
            targets.sort_by_key(|(t, _)| *t);
            for (t, g) in targets {
                aut.add_edge(q, g, t).expect("transducer edge");
            }
        }
        aut
    }
}

/// The computation of strategy `s` against an environment word `gamma` over
/// the variables outside `s`'s control: position `i` carries the output
/// computed from inputs before `i`, unioned with `gamma`'s letter at `i`.
/// The result is again ultimately periodic; its finite representation is
/// cut at the first repetition of (state, gamma position).
pub fn comp(s: &Transducer, gamma: &Lasso) -> Result<Lasso, StrategyError> {
    if !s.inputs().is_subset_of(gamma.vars()) {
        return Err(StrategyError::VariableMismatch(
            "environment word does not cover the strategy inputs".to_owned(),
        ));
    }
    if !gamma.vars().is_disjoint_from(s.outputs()) {
        return Err(StrategyError::VariableMismatch(
            "environment word overlaps the strategy outputs".to_owned(),
        ));
    }
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    let mut letters: Vec<Valuation> = Vec::new();
    let mut q = s.initial_state();
    let mut pos = 0usize;
    let (stem_len, total) = loop {
        if let Some(&first) = seen.get(&(q, pos)) {
            break (first, letters.len());
        }
        seen.insert((q, pos), letters.len());
        let env = gamma.at(pos);
        letters.push(s.output(q).union(env));
        q = s.step(q, env);
        pos = gamma.succ(pos);
    };
    let cycle = letters.split_off(stem_len);
    debug_assert_eq!(cycle.len(), total - stem_len);
    Ok(Lasso::new(gamma.vars().union(s.outputs()), letters, cycle)
        .expect("cycle is nonempty"))
}

/// Parallel composition of two strategies with disjoint outputs: a product
/// transducer over the remaining inputs. At every step each side reads the
/// joint environment letter filled in with the other side's current output,
/// so the composite maps histories of the remaining inputs to the union of
/// the outputs.
pub fn compose(sp: &Transducer, sq: &Transducer) -> Result<Transducer, StrategyError> {
    if !sp.outputs().is_disjoint_from(sq.outputs()) {
        return Err(StrategyError::OutputClash(
            "composed strategies share an output variable".to_owned(),
        ));
    }
    let outputs = sp.outputs().union(sq.outputs());
    let inputs = sp.inputs().union(sq.inputs()).difference(outputs);
    if inputs.count() > MAX_INPUT_VARS {
        return Err(StrategyError::TooManyInputs { limit: MAX_INPUT_VARS });
    }
    let width = 1usize << inputs.count();

    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut outs: Vec<Valuation> = Vec::new();
    let mut next: Vec<Vec<usize>> = Vec::new();
    let mut queue: Vec<(usize, usize)> = Vec::new();

    let root = (sp.initial_state(), sq.initial_state());
    ids.insert(root, 0);
    outs.push(sp.output(root.0).union(sq.output(root.1)));
    next.push(vec![0; width]);
    queue.push(root);

    let mut head = 0;
    while head < queue.len() {
        let (qp, qq) = queue[head];
        let src = ids[&(qp, qq)];
        for idx in 0..width {
            let env = inputs.expand(idx);
            let p_letter = env.union(sq.output(qq)).restrict(sp.inputs());
            let q_letter = env.union(sp.output(qp)).restrict(sq.inputs());
            let target = (sp.step(qp, p_letter), sq.step(qq, q_letter));
            let dst = *ids.entry(target).or_insert_with(|| {
                let id = outs.len();
                outs.push(sp.output(target.0).union(sq.output(target.1)));
                next.push(vec![0; width]);
                queue.push(target);
                id
            });
            next[src][idx] = dst;
        }
        head += 1;
    }
    Transducer::new(inputs, outputs, 0, outs, next)
}

/// Largest priority `k` such that the computation of `s` against `gamma`
/// satisfies the spec up to `k`; 0 if even the most important objective
/// fails.
pub fn achieved_priority(
    spec: &PrioritizedSpec,
    s: &Transducer,
    gamma: &Lasso,
) -> Result<usize, StrategyError> {
    let run = comp(s, gamma)?;
    Ok(spec.achieved_on(&run)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::{parse_ltl, Universe, VarId};

    /// ego outputs over {accel_e, keep_e, decel_e}; inputs over
    /// {accel_o, keep_o, decel_o}.
    fn vars() -> (Universe, VarSet, VarSet) {
        let u = Universe::of(["accel_e", "keep_e", "decel_e", "accel_o", "keep_o", "decel_o"]);
        let ego = VarSet::from_iter([VarId(0), VarId(1), VarId(2)]);
        let other = VarSet::from_iter([VarId(3), VarId(4), VarId(5)]);
        (u, ego, other)
    }

    fn keep_forever(u: &Universe, ego: VarSet, other: VarSet) -> Transducer {
        let keep_e = Valuation::empty().with(u.lookup("keep_e").unwrap());
        Transducer::constant(other, ego, keep_e).unwrap()
    }

    /// Accelerate at the first step, then keep speed.
    fn acc(u: &Universe, ego: VarSet, other: VarSet) -> Transducer {
        let accel_e = Valuation::empty().with(u.lookup("accel_e").unwrap());
        let keep_e = Valuation::empty().with(u.lookup("keep_e").unwrap());
        let width = 1usize << other.count();
        Transducer::new(
            other,
            ego,
            0,
            vec![accel_e, keep_e],
            vec![vec![1; width], vec![1; width]],
        )
        .unwrap()
    }

    #[test]
    fn constant_strategy_outputs_everywhere() {
        let (u, ego, other) = vars();
        let s = keep_forever(&u, ego, other);
        let keep_o = Valuation::empty().with(u.lookup("keep_o").unwrap());
        let gamma = Lasso::constant(other, keep_o).unwrap();
        let run = comp(&s, &gamma).unwrap();
        let f = parse_ltl("G keep_e", &u).unwrap();
        assert!(crate::ltl::evaluate_on_lasso(&f, &run).unwrap());
    }

    #[test]
    fn first_letter_joins_initial_output_with_first_env_letter() {
        let (u, ego, other) = vars();
        let s = acc(&u, ego, other);
        let keep_o = Valuation::empty().with(u.lookup("keep_o").unwrap());
        let gamma = Lasso::constant(other, keep_o).unwrap();
        let run = comp(&s, &gamma).unwrap();
        let first = run.at(0);
        assert!(first.contains(u.lookup("accel_e").unwrap()));
        assert!(first.contains(u.lookup("keep_o").unwrap()));
        // Then keep forever.
        let second = run.at(1);
        assert!(second.contains(u.lookup("keep_e").unwrap()));
        assert!(!second.contains(u.lookup("accel_e").unwrap()));
    }

    #[test]
    fn comp_loop_length_follows_gamma_and_state_cycle() {
        let (u, ego, other) = vars();
        let s = acc(&u, ego, other);
        let keep_o = Valuation::empty().with(u.lookup("keep_o").unwrap());
        let accel_o = Valuation::empty().with(u.lookup("accel_o").unwrap());
        let gamma = Lasso::new(other, vec![], vec![keep_o, accel_o]).unwrap();
        let run = comp(&s, &gamma).unwrap();
        for i in 0..8 {
            assert_eq!(
                run.at(i).restrict(other),
                gamma.at(i),
                "environment letters preserved at {i}"
            );
        }
    }

    #[test]
    fn compose_with_idle_process_is_identity_on_computations() {
        let (u, ego, other) = vars();
        let s = acc(&u, ego, other);
        let idle = Transducer::constant(VarSet::empty(), VarSet::empty(), Valuation::empty())
            .unwrap();
        let joint = compose(&s, &idle).unwrap();
        let keep_o = Valuation::empty().with(u.lookup("keep_o").unwrap());
        let gamma = Lasso::constant(other, keep_o).unwrap();
        let a = comp(&s, &gamma).unwrap();
        let b = comp(&joint, &gamma).unwrap();
        for i in 0..10 {
            assert_eq!(a.at(i), b.at(i));
        }
    }

    #[test]
    fn output_clash_rejected() {
        let (u, ego, other) = vars();
        let s1 = keep_forever(&u, ego, other);
        let s2 = keep_forever(&u, ego, other);
        assert!(matches!(
            compose(&s1, &s2).unwrap_err(),
            StrategyError::OutputClash(_)
        ));
    }

    #[test]
    fn last_output_feeds_companion() {
        // p copies q's previous output bit to b; q constantly emits a=false.
        let u = Universe::of(["a", "b"]);
        let a = u.lookup("a").unwrap();
        let b = u.lookup("b").unwrap();
        let sp = Transducer::new(
            VarSet::singleton(a),
            VarSet::singleton(b),
            0,
            vec![Valuation::empty(), Valuation::empty().with(b)],
            vec![vec![0, 1], vec![0, 1]],
        )
        .unwrap();
        let sq =
            Transducer::constant(VarSet::singleton(b), VarSet::singleton(a), Valuation::empty())
                .unwrap();
        let joint = compose(&sp, &sq).unwrap();
        assert!(joint.inputs().is_empty());
        let gamma = Lasso::constant(VarSet::empty(), Valuation::empty()).unwrap();
        let run = comp(&joint, &gamma).unwrap();
        // a and b are false from step 0 on: q holds a low, and p mirrors.
        let f = parse_ltl("G (!a & !b)", &u).unwrap();
        assert!(crate::ltl::evaluate_on_lasso(&f, &run).unwrap());
        // The joint implementation wins (X a) <-> b.
        let g = parse_ltl("(X a) <-> b", &u).unwrap();
        assert!(crate::ltl::evaluate_on_lasso(&g, &run).unwrap());
    }

    #[test]
    fn achieved_priority_examples() {
        let (u, ego, other) = vars();
        // Abstract 2-car spec without the plant: priority 1 asks ego to
        // eventually deviate, priority 2 to always keep - irreconcilable,
        // which mirrors how achieved priorities order strategies.
        let spec = PrioritizedSpec::new(vec![
            parse_ltl("F (accel_e | decel_e)", &u).unwrap(),
            parse_ltl("G keep_e", &u).unwrap(),
        ])
        .unwrap();
        let keep_o = Valuation::empty().with(u.lookup("keep_o").unwrap());
        let gamma = Lasso::constant(other, keep_o).unwrap();
        let keeper = keep_forever(&u, ego, other);
        let accer = acc(&u, ego, other);
        assert_eq!(achieved_priority(&spec, &keeper, &gamma).unwrap(), 0);
        assert_eq!(achieved_priority(&spec, &accer, &gamma).unwrap(), 1);
    }
}
