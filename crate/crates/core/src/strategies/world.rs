use std::collections::HashMap;

use super::transducer::Transducer;
use super::StrategyError;
use crate::ltl::{LetterSpace, Universe, Valuation, VarSet};

/// An input-deterministic transition system over system states, with edges
/// labeled by joint action letters and each state exposing the predicate
/// variables that hold in it. This models the plant: how the uncontrolled
/// world state evolves under the processes' joint actions.
#[derive(Debug, Clone)]
pub struct WorldModel {
    state_names: Vec<String>,
    initial: usize,
    predicates: Vec<Valuation>,
    pred_vars: VarSet,
    action_vars: VarSet,
    edges: HashMap<(usize, Valuation), usize>,
}

impl WorldModel {
    pub fn new(
        state_names: Vec<String>,
        initial: usize,
        predicates: Vec<Valuation>,
        pred_vars: VarSet,
        action_vars: VarSet,
    ) -> Result<Self, StrategyError> {
        if state_names.is_empty() || initial >= state_names.len() {
            return Err(StrategyError::BadTransducer(
                "world model needs states and a valid initial state".to_owned(),
            ));
        }
        if predicates.len() != state_names.len()
            || predicates.iter().any(|p| !p.is_within(pred_vars))
        {
            return Err(StrategyError::VariableMismatch(
                "state predicates outside the declared predicate variables".to_owned(),
            ));
        }
        if !pred_vars.is_disjoint_from(action_vars) {
            return Err(StrategyError::VariableMismatch(
                "predicate variables overlap action variables".to_owned(),
            ));
        }
        Ok(WorldModel {
            state_names,
            initial,
            predicates,
            pred_vars,
            action_vars,
            edges: HashMap::new(),
        })
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.state_names.iter().position(|s| s == name)
    }

    pub fn action_vars(&self) -> VarSet {
        self.action_vars
    }

    pub fn pred_vars(&self) -> VarSet {
        self.pred_vars
    }

    /// Adds a labeled edge. Equal labels from a state must lead to equal
    /// successors; violating that input-determinism is an error.
    pub fn add_edge(
        &mut self,
        from: usize,
        label: Valuation,
        to: usize,
        universe: &Universe,
    ) -> Result<(), StrategyError> {
        if from >= self.state_names.len() || to >= self.state_names.len() {
            return Err(StrategyError::BadTransducer(
                "edge references an undeclared world state".to_owned(),
            ));
        }
        if !label.is_within(self.action_vars) {
            return Err(StrategyError::VariableMismatch(
                "edge label outside the action variables".to_owned(),
            ));
        }
        match self.edges.insert((from, label), to) {
            Some(prev) if prev != to => Err(StrategyError::InputNondeterminism {
                state: self.state_names[from].clone(),
                letter: universe.letter_string(label),
            }),
            _ => Ok(()),
        }
    }

    /// Reads the world model as a plant transducer: inputs are all
    /// processes' action variables, outputs are the state predicates. At
    /// each step the plant emits the predicates of the current state, then
    /// transitions by the joint action letter, so predicate atoms are
    /// well-defined from step 0 on.
    ///
    /// Every state must have a transition for every letter of
    /// `action_space`; a missing one is reported with state and letter.
    /// Letters outside the space (e.g. violating a one-hot constraint) fall
    /// back to a self-loop — they never occur under well-formed strategies.
    pub fn to_transducer(
        &self,
        action_space: &LetterSpace,
        universe: &Universe,
    ) -> Result<Transducer, StrategyError> {
        if action_space.vars() != self.action_vars {
            return Err(StrategyError::VariableMismatch(
                "action space does not match the world model's action variables".to_owned(),
            ));
        }
        let n = self.state_names.len();
        let width = 1usize << self.action_vars.count();
        let mut next: Vec<Vec<usize>> = (0..n).map(|q| vec![q; width]).collect();
        for q in 0..n {
            for letter in action_space.enumerate()? {
                match self.edges.get(&(q, letter)) {
                    Some(&t) => next[q][self.action_vars.compress(letter)] = t,
                    None => {
                        return Err(StrategyError::ModelIncomplete {
                            state: self.state_names[q].clone(),
                            letter: universe.letter_string(letter),
                        })
                    }
                }
            }
        }
        Transducer::new(self.action_vars, self.pred_vars, self.initial, self.predicates.clone(), next)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::{Universe, VarId};
    use crate::strategies::comp;

    /// The side-by-side world: both cars act; equal actions keep the state,
    /// different actions leave it for good.
    pub(crate) fn sbs_world(u: &Universe) -> (WorldModel, LetterSpace) {
        let ego = VarSet::from_iter([VarId(0), VarId(1), VarId(2)]);
        let other = VarSet::from_iter([VarId(3), VarId(4), VarId(5)]);
        let sbs_var = VarSet::singleton(VarId(6));
        let actions = ego.union(other);
        let mut world = WorldModel::new(
            vec!["sbs".to_owned(), "nsbs".to_owned()],
            0,
            vec![Valuation::empty().with(VarId(6)), Valuation::empty()],
            sbs_var,
            actions,
        )
        .unwrap();
        let mut letters = Vec::new();
        for e in ego.iter() {
            for o in other.iter() {
                letters.push(Valuation::empty().with(e).with(o));
            }
        }
        for &l in &letters {
            let mirrored = (l.contains(VarId(0)) && l.contains(VarId(3)))
                || (l.contains(VarId(1)) && l.contains(VarId(4)))
                || (l.contains(VarId(2)) && l.contains(VarId(5)));
            world
                .add_edge(0, l, if mirrored { 0 } else { 1 }, u)
                .unwrap();
            world.add_edge(1, l, 1, u).unwrap();
        }
        let space = LetterSpace::from_letters(actions, letters).unwrap();
        (world, space)
    }

    fn universe() -> Universe {
        Universe::of(["accel_e", "keep_e", "decel_e", "accel_o", "keep_o", "decel_o", "sbs"])
    }

    #[test]
    fn keeping_together_stays_side_by_side() {
        let u = universe();
        let (world, space) = sbs_world(&u);
        let plant = world.to_transducer(&space, &u).unwrap();
        let keep_both = Valuation::empty()
            .with(u.lookup("keep_e").unwrap())
            .with(u.lookup("keep_o").unwrap());
        let gamma = crate::ltl::Lasso::constant(plant.inputs(), keep_both).unwrap();
        let run = comp(&plant, &gamma).unwrap();
        let f = crate::ltl::parse_ltl("G sbs", &u).unwrap();
        assert!(crate::ltl::evaluate_on_lasso(&f, &run).unwrap());
    }

    #[test]
    fn diverging_actions_leave_sbs() {
        let u = universe();
        let (world, space) = sbs_world(&u);
        let plant = world.to_transducer(&space, &u).unwrap();
        let accel_vs_keep = Valuation::empty()
            .with(u.lookup("accel_e").unwrap())
            .with(u.lookup("keep_o").unwrap());
        let gamma = crate::ltl::Lasso::constant(plant.inputs(), accel_vs_keep).unwrap();
        let run = comp(&plant, &gamma).unwrap();
        // Predicates lag the action by one step: sbs holds initially.
        assert!(run.at(0).contains(u.lookup("sbs").unwrap()));
        assert!(!run.at(1).contains(u.lookup("sbs").unwrap()));
        let f = crate::ltl::parse_ltl("F !sbs", &u).unwrap();
        assert!(crate::ltl::evaluate_on_lasso(&f, &run).unwrap());
    }

    #[test]
    fn incomplete_model_reports_state_and_letter() {
        let u = Universe::of(["go", "p"]);
        let mut world = WorldModel::new(
            vec!["s".to_owned()],
            0,
            vec![Valuation::empty()],
            VarSet::singleton(VarId(1)),
            VarSet::singleton(VarId(0)),
        )
        .unwrap();
        world.add_edge(0, Valuation::empty(), 0, &u).unwrap();
        let space = LetterSpace::free(VarSet::singleton(VarId(0)));
        match world.to_transducer(&space, &u).unwrap_err() {
            StrategyError::ModelIncomplete { state, letter } => {
                assert_eq!(state, "s");
                assert_eq!(letter, "{go}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn nondeterminism_rejected() {
        let u = Universe::of(["go", "p"]);
        let mut world = WorldModel::new(
            vec!["s".to_owned(), "t".to_owned()],
            0,
            vec![Valuation::empty(), Valuation::empty()],
            VarSet::singleton(VarId(1)),
            VarSet::singleton(VarId(0)),
        )
        .unwrap();
        world.add_edge(0, Valuation::empty(), 0, &u).unwrap();
        assert!(matches!(
            world.add_edge(0, Valuation::empty(), 1, &u).unwrap_err(),
            StrategyError::InputNondeterminism { .. }
        ));
    }
}
