//! Shared test fixtures: the two-car side-by-side setting and the
//! next-input equivalence setting. Compiled only for unit tests.

use crate::ltl::{
    parse_ltl, Lasso, PrioritizedSpec, Universe, Valuation, VarKind, VarSet,
};
use crate::strategies::{Architecture, Transducer, WorldModel};

pub struct SideBySide {
    pub arch: Architecture,
    pub plant: Transducer,
    pub spec: PrioritizedSpec,
    pub ego_outputs: VarSet,
    pub other_outputs: VarSet,
}

impl SideBySide {
    pub fn universe() -> Universe {
        let mut u = Universe::new();
        for (name, owner) in [
            ("accel_e", Some("ego")),
            ("keep_e", Some("ego")),
            ("decel_e", Some("ego")),
            ("accel_o", Some("other")),
            ("keep_o", Some("other")),
            ("decel_o", Some("other")),
            ("sbs", None),
        ] {
            u.declare(
                name,
                owner
                    .map(|p| VarKind::OutputOf(p.to_owned()))
                    .unwrap_or(VarKind::ExternalInput),
            )
            .unwrap();
        }
        u
    }

    /// The standard two-car setting: one-hot actions for each car, the
    /// side-by-side plant (equal actions keep the state, different actions
    /// leave it for good), and ego's three prioritized objectives.
    pub fn build() -> Self {
        let u = Self::universe();
        let var = |n: &str| u.lookup(n).unwrap();
        let ego = VarSet::from_iter([var("accel_e"), var("keep_e"), var("decel_e")]);
        let other = VarSet::from_iter([var("accel_o"), var("keep_o"), var("decel_o")]);
        let arch = Architecture::new(
            u.clone(),
            vec![("ego".to_owned(), ego), ("other".to_owned(), other)],
            vec![ego, other],
        )
        .unwrap();
        let plant = sbs_plant(&arch, "sbs");
        let spec = PrioritizedSpec::new(vec![
            parse_ltl("F !sbs", &u).unwrap(),
            parse_ltl("G keep_e", &u).unwrap(),
            parse_ltl("G keep_o | G F accel_o & G F decel_o", &u).unwrap(),
        ])
        .unwrap();
        SideBySide { arch, plant, spec, ego_outputs: ego, other_outputs: other }
    }

    pub fn u(&self) -> &Universe {
        self.arch.universe()
    }

    pub fn letter(&self, names: &[&str]) -> Valuation {
        names
            .iter()
            .fold(Valuation::empty(), |v, n| v.with(self.u().lookup(n).unwrap()))
    }

    /// ego always keeps speed.
    pub fn keep_forever(&self) -> Transducer {
        Transducer::constant(
            self.arch.inputs_of(0),
            self.ego_outputs,
            self.letter(&["keep_e"]),
        )
        .unwrap()
    }

    /// ego accelerates at the first step, then keeps speed.
    pub fn acc(&self) -> Transducer {
        let inputs = self.arch.inputs_of(0);
        let width = 1usize << inputs.count();
        Transducer::new(
            inputs,
            self.ego_outputs,
            0,
            vec![self.letter(&["accel_e"]), self.letter(&["keep_e"])],
            vec![vec![1; width], vec![1; width]],
        )
        .unwrap()
    }

    /// Environment word: other keeps speed forever.
    pub fn other_keeps(&self) -> Lasso {
        Lasso::constant(self.other_outputs, self.letter(&["keep_o"])).unwrap()
    }

    /// Environment word: other accelerates once, then keeps.
    pub fn other_accel_once(&self) -> Lasso {
        Lasso::new(
            self.other_outputs,
            vec![self.letter(&["accel_o"])],
            vec![self.letter(&["keep_o"])],
        )
        .unwrap()
    }
}

/// Builds the side-by-side plant for any architecture declaring the six
/// one-hot car actions: mirrored actions stay side by side, anything else
/// transitions to the absorbing not-side-by-side state.
pub fn sbs_plant(arch: &Architecture, pred_name: &str) -> Transducer {
    let u = arch.universe();
    let var = |n: &str| u.lookup(n).unwrap();
    let ego = VarSet::from_iter([var("accel_e"), var("keep_e"), var("decel_e")]);
    let other = VarSet::from_iter([var("accel_o"), var("keep_o"), var("decel_o")]);
    let actions = ego.union(other);
    let pred = VarSet::singleton(var(pred_name));
    let mut world = WorldModel::new(
        vec!["sbs".to_owned(), "nsbs".to_owned()],
        0,
        vec![Valuation::empty().with(var(pred_name)), Valuation::empty()],
        pred,
        actions,
    )
    .unwrap();
    let ego_actions = ["accel_e", "keep_e", "decel_e"];
    let other_actions = ["accel_o", "keep_o", "decel_o"];
    for (i, e) in ego_actions.iter().enumerate() {
        for (j, o) in other_actions.iter().enumerate() {
            let l = Valuation::empty().with(var(e)).with(var(o));
            world.add_edge(0, l, if i == j { 0 } else { 1 }, u).unwrap();
            world.add_edge(1, l, 1, u).unwrap();
        }
    }
    let space = arch.letter_space(actions);
    world.to_transducer(&space, u).unwrap()
}
