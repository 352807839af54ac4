use std::collections::{HashMap, VecDeque};

use super::guard::Guard;
use super::AutomataError;
use crate::ltl::{Lasso, LetterSpace, Universe, Valuation, VarSet};

pub type StateId = usize;

/// A nondeterministic Büchi word automaton over letters from `2^alphabet`,
/// with symbolic guards on edges. The Büchi condition holds when some
/// accepting state occurs infinitely often along a run.
#[derive(Debug, Clone)]
pub struct BuchiAutomaton {
    alphabet: VarSet,
    initial: Vec<StateId>,
    accepting: Vec<bool>,
    edges: Vec<Vec<(Guard, StateId)>>,
}

/// A lasso together with a run of the automaton on it; proof that the
/// automaton's language is nonempty.
#[derive(Debug, Clone)]
pub struct LassoWitness {
    pub lasso: Lasso,
    /// State before each stem letter.
    pub state_stem: Vec<StateId>,
    /// State before each loop letter; the run returns to `state_cycle[0]`.
    pub state_cycle: Vec<StateId>,
}

impl LassoWitness {
    /// Replays the run and checks it is accepting. Used to self-validate
    /// emptiness witnesses.
    pub fn validate(&self, aut: &BuchiAutomaton) -> bool {
        let states: Vec<StateId> = self
            .state_stem
            .iter()
            .chain(self.state_cycle.iter())
            .copied()
            .collect();
        if states.is_empty() || !aut.initial.contains(&states[0]) {
            return false;
        }
        let n = self.lasso.len();
        if states.len() != n {
            return false;
        }
        for i in 0..n {
            let next = states[if i + 1 < n { i + 1 } else { self.state_stem.len() }];
            let letter = self.lasso.at(i);
            let ok = aut.edges[states[i]]
                .iter()
                .any(|(g, t)| *t == next && g.matches(letter));
            if !ok {
                return false;
            }
        }
        self.state_cycle.iter().any(|&q| aut.accepting[q])
    }
}

impl BuchiAutomaton {
    pub fn new(alphabet: VarSet) -> Self {
        BuchiAutomaton { alphabet, initial: Vec::new(), accepting: Vec::new(), edges: Vec::new() }
    }

    /// The words over `alphabet` whose restriction to the lasso's variables
    /// equals the lasso: one state per position, all accepting.
    pub fn from_lasso(w: &Lasso, alphabet: VarSet) -> Result<Self, AutomataError> {
        if !w.vars().is_subset_of(alphabet) {
            return Err(AutomataError::WordOutsideAlphabet);
        }
        let mut aut = BuchiAutomaton::new(alphabet);
        let n = w.len();
        for i in 0..n {
            aut.add_state(i == 0, true);
        }
        for i in 0..n {
            let guard = Guard::exactly(w.at(i), w.vars());
            aut.add_edge(i, guard, w.succ(i))?;
        }
        Ok(aut)
    }

    /// Single accepting state with a self-loop on every letter.
    pub fn accept_all(alphabet: VarSet) -> Self {
        let mut a = Self::new(alphabet);
        let q = a.add_state(true, true);
        a.add_edge(q, Guard::tt(), q).expect("valid edge");
        a
    }

    /// Accepts nothing: one initial state, no accepting states.
    pub fn empty_language(alphabet: VarSet) -> Self {
        let mut a = Self::new(alphabet);
        let q = a.add_state(true, false);
        a.add_edge(q, Guard::tt(), q).expect("valid edge");
        a
    }

    pub fn add_state(&mut self, initial: bool, accepting: bool) -> StateId {
        let id = self.accepting.len();
        self.accepting.push(accepting);
        self.edges.push(Vec::new());
        if initial {
            self.initial.push(id);
        }
        id
    }

    pub fn add_edge(&mut self, src: StateId, guard: Guard, dst: StateId) -> Result<(), AutomataError> {
        if src >= self.edges.len() || dst >= self.edges.len() {
            return Err(AutomataError::UnknownState);
        }
        if !guard.support().is_subset_of(self.alphabet) {
            return Err(AutomataError::GuardOutsideAlphabet);
        }
        if guard.is_false() {
            return Ok(());
        }
        self.edges[src].push((guard, dst));
        Ok(())
    }

    pub fn alphabet(&self) -> VarSet {
        self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial_states(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_accepting_state(&self, q: StateId) -> bool {
        self.accepting[q]
    }

    pub fn edges_from(&self, q: StateId) -> &[(Guard, StateId)] {
        &self.edges[q]
    }

    /// Same automaton over a laxer alphabet. Guards are untouched: the new
    /// variables are unconstrained.
    pub fn pad_alphabet(&self, vars: VarSet) -> BuchiAutomaton {
        let mut a = self.clone();
        a.alphabet = self.alphabet.union(vars);
        a
    }

    /// Language intersection. Alphabets are united; the standard two-phase
    /// counter tracks visits to each operand's accepting states.
    pub fn product(&self, other: &BuchiAutomaton) -> BuchiAutomaton {
        let alphabet = self.alphabet.union(other.alphabet);
        let mut out = BuchiAutomaton::new(alphabet);
        let mut ids: HashMap<(StateId, StateId, u8), StateId> = HashMap::new();
        let mut queue: VecDeque<(StateId, StateId, u8)> = VecDeque::new();

        let advance = |phase: u8, a_acc: bool, b_acc: bool| -> u8 {
            let mut p = if phase == 2 { 0 } else { phase };
            if p == 0 && a_acc {
                p = 1;
            }
            if p == 1 && b_acc {
                p = 2;
            }
            p
        };

        for &qa in &self.initial {
            for &qb in &other.initial {
                let key = (qa, qb, 0u8);
                if !ids.contains_key(&key) {
                    let id = out.add_state(true, false);
                    ids.insert(key, id);
                    queue.push_back(key);
                }
            }
        }
        while let Some(key @ (qa, qb, phase)) = queue.pop_front() {
            let src = ids[&key];
            for (ga, ta) in &self.edges[qa] {
                for (gb, tb) in &other.edges[qb] {
                    let g = ga.and(gb);
                    if g.is_false() {
                        continue;
                    }
                    let next_phase =
                        advance(phase, self.accepting[*ta], other.accepting[*tb]);
                    let next_key = (*ta, *tb, next_phase);
                    let dst = *ids.entry(next_key).or_insert_with(|| {
                        queue.push_back(next_key);
                        out.add_state(false, next_phase == 2)
                    });
                    out.add_edge(src, g, dst).expect("product edge");
                }
            }
        }
        out
    }

    /// Language union by disjoint sum.
    pub fn union(&self, other: &BuchiAutomaton) -> BuchiAutomaton {
        let mut out = BuchiAutomaton::new(self.alphabet.union(other.alphabet));
        for (aut, offset) in [(self, 0), (other, self.num_states())] {
            for q in 0..aut.num_states() {
                let id = out.add_state(aut.initial.contains(&q), aut.accepting[q]);
                debug_assert_eq!(id, q + offset);
            }
        }
        for (aut, offset) in [(self, 0), (other, self.num_states())] {
            for q in 0..aut.num_states() {
                for (g, t) in &aut.edges[q] {
                    out.add_edge(q + offset, g.clone(), t + offset).expect("union edge");
                }
            }
        }
        out
    }

    /// Existential projection onto `keep`: accepts a word over `keep` iff
    /// some completion of the erased variables is accepted. Quantification
    /// happens per edge; states are untouched.
    pub fn project(&self, keep: VarSet) -> Result<BuchiAutomaton, AutomataError> {
        if !keep.is_subset_of(self.alphabet) {
            return Err(AutomataError::ProjectionOutsideAlphabet);
        }
        let erase = self.alphabet.difference(keep);
        let mut out = BuchiAutomaton::new(keep);
        for q in 0..self.num_states() {
            out.add_state(self.initial.contains(&q), self.accepting[q]);
        }
        for q in 0..self.num_states() {
            for (g, t) in &self.edges[q] {
                out.add_edge(q, g.exists(erase), *t)?;
            }
        }
        Ok(out)
    }

    /// Renames alphabet variables according to `map`; unmapped variables are
    /// kept as-is.
    pub fn rename_vars(&self, map: &HashMap<crate::ltl::VarId, crate::ltl::VarId>) -> BuchiAutomaton {
        let alphabet = VarSet::from_iter(
            self.alphabet.iter().map(|v| *map.get(&v).unwrap_or(&v)),
        );
        let mut out = BuchiAutomaton::new(alphabet);
        for q in 0..self.num_states() {
            out.add_state(self.initial.contains(&q), self.accepting[q]);
        }
        for q in 0..self.num_states() {
            for (g, t) in &self.edges[q] {
                out.add_edge(q, g.rename(map), *t).expect("renamed edge");
            }
        }
        out
    }

    /// Membership of an ultimately periodic word, decided on the finite
    /// product graph of automaton states and lasso positions.
    pub fn accepts(&self, w: &Lasso) -> Result<bool, AutomataError> {
        if !w.vars().is_subset_of(self.alphabet) {
            return Err(AutomataError::WordOutsideAlphabet);
        }
        let n = w.len();
        let node = |q: StateId, i: usize| q * n + i;
        let mut reachable = vec![false; self.num_states() * n];
        let mut queue = VecDeque::new();
        for &q in &self.initial {
            if !reachable[node(q, 0)] {
                reachable[node(q, 0)] = true;
                queue.push_back((q, 0));
            }
        }
        let mut interesting = Vec::new();
        while let Some((q, i)) = queue.pop_front() {
            if self.accepting[q] {
                interesting.push((q, i));
            }
            let letter = w.at(i);
            let j = w.succ(i);
            for (g, t) in &self.edges[q] {
                if g.matches(letter) && !reachable[node(*t, j)] {
                    reachable[node(*t, j)] = true;
                    queue.push_back((*t, j));
                }
            }
        }
        // Accepting iff some reachable accepting node lies on a cycle.
        for (q0, i0) in interesting {
            let mut seen = vec![false; self.num_states() * n];
            let mut queue = VecDeque::new();
            queue.push_back((q0, i0));
            while let Some((q, i)) = queue.pop_front() {
                let letter = w.at(i);
                let j = w.succ(i);
                for (g, t) in &self.edges[q] {
                    if !g.matches(letter) {
                        continue;
                    }
                    if (*t, j) == (q0, i0) {
                        return Ok(true);
                    }
                    if !seen[node(*t, j)] {
                        seen[node(*t, j)] = true;
                        queue.push_back((*t, j));
                    }
                }
            }
        }
        Ok(false)
    }

    /// Emptiness check over the free letter space.
    pub fn accepting_lasso(&self) -> Option<LassoWitness> {
        self.accepting_lasso_in(&LetterSpace::free(self.alphabet))
    }

    /// Returns a witness iff the language restricted to `space` is nonempty:
    /// finds a reachable accepting state on a cycle, taking only edges with
    /// a satisfying letter in `space`, then extracts concrete letters.
    /// Breadth-first search keeps witnesses short and deterministic.
    pub fn accepting_lasso_in(&self, space: &LetterSpace) -> Option<LassoWitness> {
        let sat = |g: &Guard| g.first_match(space);
        // Forward reachability with parent edges.
        let mut parent: Vec<Option<(StateId, Valuation)>> = vec![None; self.num_states()];
        let mut reached = vec![false; self.num_states()];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        for &q in &self.initial {
            if !reached[q] {
                reached[q] = true;
                queue.push_back(q);
                order.push(q);
            }
        }
        while let Some(q) = queue.pop_front() {
            for (g, t) in &self.edges[q] {
                if reached[*t] {
                    continue;
                }
                if let Some(letter) = sat(g) {
                    reached[*t] = true;
                    parent[*t] = Some((q, letter));
                    queue.push_back(*t);
                    order.push(*t);
                }
            }
        }
        // Try accepting states in discovery order; find a cycle back to them.
        for &anchor in order.iter().filter(|&&q| self.accepting[q]) {
            if let Some((cycle_states, cycle_letters)) = self.cycle_through(anchor, &sat) {
                // Stem: initial -> anchor.
                let mut stem_states = vec![anchor];
                let mut stem_letters: Vec<Valuation> = Vec::new();
                let mut cur = anchor;
                while let Some((p, letter)) = parent[cur] {
                    stem_states.push(p);
                    stem_letters.push(letter);
                    cur = p;
                }
                stem_states.reverse();
                stem_letters.reverse();
                stem_states.pop(); // anchor starts the cycle part
                let lasso = Lasso::new(self.alphabet, stem_letters, cycle_letters)
                    .expect("cycle is nonempty");
                let witness = LassoWitness {
                    lasso,
                    state_stem: stem_states,
                    state_cycle: cycle_states,
                };
                debug_assert!(witness.validate(self));
                return Some(witness);
            }
        }
        None
    }

    /// Shortest cycle from `anchor` back to itself using satisfiable edges.
    fn cycle_through(
        &self,
        anchor: StateId,
        sat: &impl Fn(&Guard) -> Option<Valuation>,
    ) -> Option<(Vec<StateId>, Vec<Valuation>)> {
        let mut parent: Vec<Option<(StateId, Valuation)>> = vec![None; self.num_states()];
        let mut reached = vec![false; self.num_states()];
        let mut queue = VecDeque::new();
        queue.push_back(anchor);
        while let Some(q) = queue.pop_front() {
            for (g, t) in &self.edges[q] {
                let Some(letter) = sat(g) else { continue };
                if *t == anchor {
                    // Close the cycle.
                    let mut states = vec![q];
                    let mut letters = vec![letter];
                    let mut cur = q;
                    while let Some((p, l)) = parent[cur] {
                        states.push(p);
                        letters.push(l);
                        cur = p;
                    }
                    states.reverse();
                    letters.reverse();
                    debug_assert_eq!(states[0], anchor);
                    return Some((states, letters));
                }
                if !reached[*t] {
                    reached[*t] = true;
                    parent[*t] = Some((q, letter));
                    queue.push_back(*t);
                }
            }
        }
        None
    }

    /// Debug dump: one transition per line `src -- guard --> dst`, accepting
    /// states flagged with `*`.
    pub fn dump(&self, u: &Universe) -> String {
        let mut out = String::new();
        let flag = |q: StateId| if self.accepting[q] { "*" } else { "" };
        for &q in &self.initial {
            out.push_str(&format!("initial {}{}\n", q, flag(q)));
        }
        for q in 0..self.num_states() {
            for (g, t) in &self.edges[q] {
                out.push_str(&format!(
                    "{}{} -- {} --> {}{}\n",
                    q,
                    flag(q),
                    g.display(u),
                    t,
                    flag(*t)
                ));
            }
        }
        out
    }
}
