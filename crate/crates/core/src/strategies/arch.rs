use super::StrategyError;
use crate::ltl::{LetterSpace, Universe, Valuation, VarKind, VarSet};

/// A set of processes over a shared variable universe, each owning a
/// disjoint set of output variables. Processes are fully informed: the
/// inputs of a process are all variables it does not own, so external
/// inputs are visible to everyone.
#[derive(Debug, Clone)]
pub struct Architecture {
    universe: Universe,
    processes: Vec<String>,
    outputs: Vec<VarSet>,
    onehot: Vec<VarSet>,
}

impl Architecture {
    /// Builds and validates an architecture. `universe` must declare each
    /// output variable as owned by the corresponding process and everything
    /// else as external input. `onehot` lists disjoint groups of variables
    /// of which exactly one is true in any valid letter.
    pub fn new(
        universe: Universe,
        processes: Vec<(String, VarSet)>,
        onehot: Vec<VarSet>,
    ) -> Result<Self, StrategyError> {
        let mut names = Vec::with_capacity(processes.len());
        let mut outputs = Vec::with_capacity(processes.len());
        let mut claimed = VarSet::empty();
        for (name, outs) in &processes {
            if names.contains(name) {
                return Err(StrategyError::DuplicateProcess(name.clone()));
            }
            if !claimed.is_disjoint_from(*outs) {
                return Err(StrategyError::OutputClash(format!(
                    "process `{name}` re-declares an output owned elsewhere"
                )));
            }
            if !outs.is_subset_of(universe.full_set()) {
                return Err(StrategyError::VariableMismatch(format!(
                    "process `{name}` outputs undeclared variables"
                )));
            }
            claimed = claimed.union(*outs);
            names.push(name.clone());
            outputs.push(*outs);
        }
        for v in universe.vars() {
            let owner = processes
                .iter()
                .find(|(_, outs)| outs.contains(v))
                .map(|(n, _)| n.as_str());
            match (universe.kind(v), owner) {
                (VarKind::OutputOf(declared), Some(actual)) if declared == actual => {}
                (VarKind::ExternalInput, None) => {}
                (kind, owner) => {
                    return Err(StrategyError::KindMismatch {
                        var: universe.name(v).to_owned(),
                        declared: match kind {
                            VarKind::OutputOf(p) => format!("output of `{p}`"),
                            VarKind::ExternalInput => "external input".to_owned(),
                        },
                        used: match owner {
                            Some(p) => format!("output of `{p}`"),
                            None => "external input".to_owned(),
                        },
                    });
                }
            }
        }
        for (i, a) in onehot.iter().enumerate() {
            if !a.is_subset_of(universe.full_set()) {
                return Err(StrategyError::VariableMismatch(
                    "one-hot group mentions undeclared variables".to_owned(),
                ));
            }
            for b in &onehot[i + 1..] {
                if !a.is_disjoint_from(*b) {
                    return Err(StrategyError::VariableMismatch(
                        "one-hot groups must be disjoint".to_owned(),
                    ));
                }
            }
        }
        Ok(Architecture { universe, processes: names, outputs, onehot })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn processes(&self) -> &[String] {
        &self.processes
    }

    pub fn process_index(&self, name: &str) -> Result<usize, StrategyError> {
        self.processes
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| StrategyError::UnknownProcess(name.to_owned()))
    }

    pub fn outputs_of(&self, idx: usize) -> VarSet {
        self.outputs[idx]
    }

    /// Joint outputs of a set of processes.
    pub fn outputs_of_set(&self, names: &[String]) -> Result<VarSet, StrategyError> {
        let mut s = VarSet::empty();
        for n in names {
            s = s.union(self.outputs_of(self.process_index(n)?));
        }
        Ok(s)
    }

    /// Inputs of a process: everything it does not own.
    pub fn inputs_of(&self, idx: usize) -> VarSet {
        self.universe.full_set().difference(self.outputs[idx])
    }

    pub fn external_inputs(&self) -> VarSet {
        let owned = self
            .outputs
            .iter()
            .fold(VarSet::empty(), |s, o| s.union(*o));
        self.universe.full_set().difference(owned)
    }

    pub fn onehot_groups(&self) -> &[VarSet] {
        &self.onehot
    }

    /// Enumerates the valid letters over `vars`, respecting one-hot groups.
    /// A group that only partially intersects `vars` may also be all-false
    /// on the visible part (the hot variable can be hidden). The order is
    /// deterministic: groups in declaration order, free variables ascending.
    pub fn letter_space(&self, vars: VarSet) -> LetterSpace {
        let mut letters = vec![Valuation::empty()];
        let mut grouped = VarSet::empty();
        for g in &self.onehot {
            let visible = g.intersection(vars);
            grouped = grouped.union(visible);
            if visible.is_empty() {
                continue;
            }
            let mut choices: Vec<Valuation> =
                visible.iter().map(|v| Valuation::empty().with(v)).collect();
            if !g.is_subset_of(vars) {
                choices.push(Valuation::empty());
            }
            letters = letters
                .iter()
                .flat_map(|base| choices.iter().map(move |c| base.union(*c)))
                .collect();
        }
        for v in vars.difference(grouped).iter() {
            letters = letters
                .iter()
                .flat_map(|base| [*base, base.with(v)])
                .collect();
        }
        LetterSpace::from_letters(vars, letters).expect("letters within vars")
    }

    /// Parallel composition: the union of the two process sets over the same
    /// universe.
    pub fn compose(&self, other: &Architecture) -> Result<Architecture, StrategyError> {
        if self.universe.len() != other.universe.len()
            || self
                .universe
                .vars()
                .any(|v| self.universe.name(v) != other.universe.name(v))
        {
            return Err(StrategyError::UniverseMismatch);
        }
        for p in &other.processes {
            if self.processes.contains(p) {
                return Err(StrategyError::DuplicateProcess(p.clone()));
            }
        }
        let mut processes: Vec<(String, VarSet)> = self
            .processes
            .iter()
            .cloned()
            .zip(self.outputs.iter().copied())
            .collect();
        processes.extend(other.processes.iter().cloned().zip(other.outputs.iter().copied()));
        let mut universe = Universe::new();
        for v in self.universe.vars() {
            let name = self.universe.name(v);
            let owner = processes
                .iter()
                .find(|(_, outs)| outs.contains(v))
                .map(|(n, _)| n.clone());
            universe
                .declare(
                    name,
                    owner.map(VarKind::OutputOf).unwrap_or(VarKind::ExternalInput),
                )
                .map_err(StrategyError::Ltl)?;
        }
        let mut onehot = self.onehot.clone();
        for g in &other.onehot {
            if !onehot.contains(g) {
                onehot.push(*g);
            }
        }
        Architecture::new(universe, processes, onehot)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::VarId;

    fn side_by_side() -> Architecture {
        let mut u = Universe::new();
        for (name, proc_) in [
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
                proc_
                    .map(|p| VarKind::OutputOf(p.to_owned()))
                    .unwrap_or(VarKind::ExternalInput),
            )
            .unwrap();
        }
        let ego = VarSet::from_iter([VarId(0), VarId(1), VarId(2)]);
        let other = VarSet::from_iter([VarId(3), VarId(4), VarId(5)]);
        Architecture::new(
            u,
            vec![("ego".to_owned(), ego), ("other".to_owned(), other)],
            vec![ego, other],
        )
        .unwrap()
    }

    #[test]
    fn onehot_letter_space() {
        let arch = side_by_side();
        let other = VarSet::from_iter([VarId(3), VarId(4), VarId(5)]);
        let space = arch.letter_space(other);
        assert_eq!(space.len(), 3);
        // Partial view of a group allows the all-false letter.
        let partial = arch.letter_space(VarSet::from_iter([VarId(3), VarId(6)]));
        let letters = partial.enumerate().unwrap();
        assert_eq!(letters.len(), 4);
    }

    #[test]
    fn overlapping_outputs_rejected() {
        let mut u = Universe::new();
        u.declare("x", VarKind::OutputOf("p".to_owned())).unwrap();
        let err = Architecture::new(
            u,
            vec![
                ("p".to_owned(), VarSet::singleton(VarId(0))),
                ("q".to_owned(), VarSet::singleton(VarId(0))),
            ],
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, StrategyError::OutputClash(_)));
    }

    #[test]
    fn composition_unions_processes() {
        let mut u1 = Universe::new();
        u1.declare("x", VarKind::OutputOf("p".to_owned())).unwrap();
        u1.declare("y", VarKind::ExternalInput).unwrap();
        let a1 = Architecture::new(
            u1,
            vec![("p".to_owned(), VarSet::singleton(VarId(0)))],
            vec![],
        )
        .unwrap();
        let mut u2 = Universe::new();
        u2.declare("x", VarKind::ExternalInput).unwrap();
        u2.declare("y", VarKind::OutputOf("q".to_owned())).unwrap();
        let a2 = Architecture::new(
            u2,
            vec![("q".to_owned(), VarSet::singleton(VarId(1)))],
            vec![],
        )
        .unwrap();
        let joint = a1.compose(&a2).unwrap();
        assert_eq!(joint.processes(), ["p".to_owned(), "q".to_owned()]);
        assert!(joint.external_inputs().is_empty());
        // Same process on both sides is an error.
        assert!(matches!(
            joint.compose(&a1).unwrap_err(),
            StrategyError::DuplicateProcess(_)
        ));
    }
}
