use std::collections::HashMap;

use crate::ltl::{LetterSpace, Universe, Valuation, VarId, VarSet};

/// A conjunction of literals: variables in `pos` must be true, variables in
/// `neg` must be false, everything else is unconstrained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cube {
    pub pos: VarSet,
    pub neg: VarSet,
}

impl Cube {
    pub fn top() -> Self {
        Cube { pos: VarSet::empty(), neg: VarSet::empty() }
    }

    /// Pins every variable of `vars` to its value in `letter`.
    pub fn exactly(letter: Valuation, vars: VarSet) -> Self {
        Cube {
            pos: letter.vars().intersection(vars),
            neg: vars.difference(letter.vars()),
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.pos.is_disjoint_from(self.neg)
    }

    pub fn matches(&self, letter: Valuation) -> bool {
        self.pos.is_subset_of(letter.vars()) && self.neg.is_disjoint_from(letter.vars())
    }

    pub fn and(&self, other: &Cube) -> Option<Cube> {
        let c = Cube {
            pos: self.pos.union(other.pos),
            neg: self.neg.union(other.neg),
        };
        c.is_consistent().then_some(c)
    }

    /// Existentially quantifies the given variables away.
    pub fn erase(&self, vars: VarSet) -> Cube {
        Cube {
            pos: self.pos.difference(vars),
            neg: self.neg.difference(vars),
        }
    }

    pub fn support(&self) -> VarSet {
        self.pos.union(self.neg)
    }

    /// True when every letter matched by `self` is matched by `other`.
    pub fn implies(&self, other: &Cube) -> bool {
        other.pos.is_subset_of(self.pos) && other.neg.is_subset_of(self.neg)
    }

    fn rename(&self, map: &HashMap<VarId, VarId>) -> Cube {
        let move_set = |s: VarSet| {
            VarSet::from_iter(s.iter().map(|v| *map.get(&v).unwrap_or(&v)))
        };
        Cube { pos: move_set(self.pos), neg: move_set(self.neg) }
    }
}

/// An edge guard: a disjunction of cubes, i.e. a Boolean predicate on
/// letters in disjunctive normal form. The cube representation keeps
/// conjunction, disjunction and existential projection cheap, which is all
/// the automata constructions need.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Guard {
    cubes: Vec<Cube>,
}

impl Guard {
    pub fn tt() -> Self {
        Guard { cubes: vec![Cube::top()] }
    }

    pub fn ff() -> Self {
        Guard { cubes: Vec::new() }
    }

    pub fn literal(v: VarId, positive: bool) -> Self {
        let cube = if positive {
            Cube { pos: VarSet::singleton(v), neg: VarSet::empty() }
        } else {
            Cube { pos: VarSet::empty(), neg: VarSet::singleton(v) }
        };
        Guard { cubes: vec![cube] }
    }

    pub fn from_cube(cube: Cube) -> Self {
        Guard { cubes: vec![cube] }.normalized()
    }

    /// Guard matched exactly by `letter` on the variables `vars`.
    pub fn exactly(letter: Valuation, vars: VarSet) -> Self {
        Guard::from_cube(Cube::exactly(letter, vars))
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn is_false(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn matches(&self, letter: Valuation) -> bool {
        self.cubes.iter().any(|c| c.matches(letter))
    }

    pub fn and(&self, other: &Guard) -> Guard {
        let mut cubes = Vec::new();
        for a in &self.cubes {
            for b in &other.cubes {
                if let Some(c) = a.and(b) {
                    cubes.push(c);
                }
            }
        }
        Guard { cubes }.normalized()
    }

    pub fn or(&self, other: &Guard) -> Guard {
        let mut cubes = self.cubes.clone();
        cubes.extend_from_slice(&other.cubes);
        Guard { cubes }.normalized()
    }

    /// Existential quantification of `vars`: the guard that matches a letter
    /// iff some assignment of `vars` makes the original match.
    pub fn exists(&self, vars: VarSet) -> Guard {
        let cubes = self.cubes.iter().map(|c| c.erase(vars)).collect();
        Guard { cubes }.normalized()
    }

    pub fn support(&self) -> VarSet {
        self.cubes
            .iter()
            .fold(VarSet::empty(), |s, c| s.union(c.support()))
    }

    /// First letter of the space matched by this guard, if any. Used both as
    /// a satisfiability check and for deterministic witness extraction.
    pub fn first_match(&self, space: &LetterSpace) -> Option<Valuation> {
        match space {
            LetterSpace::Free(vars) => self
                .cubes
                .iter()
                .find(|c| c.is_consistent() && c.pos.is_subset_of(*vars))
                .map(|c| Valuation(c.pos.0)),
            LetterSpace::List { letters, .. } => {
                letters.iter().copied().find(|l| self.matches(*l))
            }
        }
    }

    pub fn rename(&self, map: &HashMap<VarId, VarId>) -> Guard {
        Guard { cubes: self.cubes.iter().map(|c| c.rename(map)).collect() }.normalized()
    }

    /// Drops inconsistent and subsumed cubes.
    fn normalized(mut self) -> Guard {
        self.cubes.retain(Cube::is_consistent);
        self.cubes.sort_unstable_by_key(|c| (c.pos.0, c.neg.0));
        self.cubes.dedup();
        let mut kept: Vec<Cube> = Vec::with_capacity(self.cubes.len());
        for c in self.cubes {
            if kept.iter().any(|k| c.implies(k)) {
                continue;
            }
            kept.retain(|k| !k.implies(&c));
            kept.push(c);
        }
        Guard { cubes: kept }
    }

    /// Renders the guard with variable names, e.g. `a & !b | c`.
    pub fn display(&self, u: &Universe) -> String {
        if self.cubes.is_empty() {
            return "false".to_owned();
        }
        let cube_str = |c: &Cube| {
            let mut lits: Vec<String> = c
                .pos
                .iter()
                .map(|v| u.name(v).to_owned())
                .chain(c.neg.iter().map(|v| format!("!{}", u.name(v))))
                .collect();
            if lits.is_empty() {
                return "true".to_owned();
            }
            lits.sort();
            lits.join(" & ")
        };
        self.cubes.iter().map(cube_str).collect::<Vec<_>>().join(" | ")
    }
}
