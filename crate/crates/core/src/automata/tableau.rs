use std::collections::{BTreeSet, HashMap, VecDeque};

use super::buchi::BuchiAutomaton;
use super::guard::{Cube, Guard};
use crate::ltl::{Formula, VarSet};

/// Translates an LTL formula into a nondeterministic Büchi automaton with
/// `L(A) = { w : w ⊨ f }`, by the standard tableau expansion: states are
/// obligation sets, disjunctions and until/eventually fulfilment choices
/// branch, and next-obligations become successors. The intermediate
/// acceptance condition is generalized (one set per eventuality, satisfied
/// by transitions that do not defer it) and is degeneralized on the fly
/// with a counter.
///
/// The input is normalized to negation normal form first, so any formula is
/// accepted. The alphabet may declare more variables than the formula uses.
pub fn ltl_to_buchi(f: &Formula, alphabet: VarSet) -> BuchiAutomaton {
    let nnf = f.to_nnf();
    debug_assert!(nnf.vars().is_subset_of(alphabet));

    let eventualities = collect_eventualities(&nnf);
    let k = eventualities.len();

    let mut aut = BuchiAutomaton::new(alphabet);
    let mut ids: HashMap<(BTreeSet<Formula>, usize), usize> = HashMap::new();
    let mut queue: VecDeque<(BTreeSet<Formula>, usize)> = VecDeque::new();

    let mut initial_set = BTreeSet::new();
    initial_set.insert(nnf);
    let init_key = (initial_set, 0usize);
    let id = aut.add_state(true, k == 0);
    ids.insert(init_key.clone(), id);
    queue.push_back(init_key);

    while let Some(key) = queue.pop_front() {
        let src = ids[&key];
        let (ref set, counter) = key;
        for branch in expand(set) {
            let base = if counter == k { 0 } else { counter };
            let mut next_counter = base;
            while next_counter < k && !branch.deferred.contains(&eventualities[next_counter]) {
                next_counter += 1;
            }
            let next_key = (branch.nexts, next_counter);
            let dst = *ids.entry(next_key.clone()).or_insert_with(|| {
                queue.push_back(next_key.clone());
                aut.add_state(false, next_counter == k)
            });
            let guard = Guard::from_cube(Cube { pos: branch.pos, neg: branch.neg });
            aut.add_edge(src, guard, dst).expect("tableau edge");
        }
    }
    aut
}

/// Until and Eventually subformulas, each of which carries one generalized
/// acceptance set.
fn collect_eventualities(f: &Formula) -> Vec<Formula> {
    let mut set = BTreeSet::new();
    fn walk(f: &Formula, out: &mut BTreeSet<Formula>) {
        match f {
            Formula::True | Formula::False | Formula::Atom(_) => {}
            Formula::Not(g) | Formula::Next(g) | Formula::Globally(g) => walk(g, out),
            Formula::Eventually(g) => {
                out.insert(f.clone());
                walk(g, out);
            }
            Formula::Until(a, b) => {
                out.insert(f.clone());
                walk(a, out);
                walk(b, out);
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b)
            | Formula::Release(a, b) => {
                walk(a, out);
                walk(b, out);
            }
        }
    }
    walk(f, &mut set);
    set.into_iter().collect()
}

/// One fully decomposed alternative for satisfying an obligation set "now":
/// literal constraints on the current letter, obligations shipped to the
/// next step, and the eventualities whose fulfilment was postponed.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Branch {
    pos: VarSet,
    neg: VarSet,
    nexts: BTreeSet<Formula>,
    deferred: BTreeSet<Formula>,
}

fn expand(set: &BTreeSet<Formula>) -> Vec<Branch> {
    let empty = Branch {
        pos: VarSet::empty(),
        neg: VarSet::empty(),
        nexts: BTreeSet::new(),
        deferred: BTreeSet::new(),
    };
    let todo: Vec<Formula> = set.iter().cloned().collect();
    let mut out = Vec::new();
    step(todo, empty, &mut out);
    out.sort_by(|a, b| {
        (a.pos.0, a.neg.0, &a.nexts, &a.deferred).cmp(&(b.pos.0, b.neg.0, &b.nexts, &b.deferred))
    });
    out.dedup();
    out
}

fn step(mut todo: Vec<Formula>, mut branch: Branch, out: &mut Vec<Branch>) {
    let Some(f) = todo.pop() else {
        out.push(branch);
        return;
    };
    match f {
        Formula::True => step(todo, branch, out),
        Formula::False => {}
        Formula::Atom(v) => {
            if branch.neg.contains(v) {
                return;
            }
            branch.pos = branch.pos.with(v);
            step(todo, branch, out);
        }
        Formula::Not(ref g) => match **g {
            Formula::Atom(v) => {
                if branch.pos.contains(v) {
                    return;
                }
                branch.neg = branch.neg.with(v);
                step(todo, branch, out);
            }
            // Input is in negation normal form.
            _ => unreachable!("negation below atom level after NNF"),
        },
        Formula::And(a, b) => {
            todo.push(*a);
            todo.push(*b);
            step(todo, branch, out);
        }
        Formula::Or(a, b) => {
            let mut left = todo.clone();
            left.push(*a);
            step(left, branch.clone(), out);
            todo.push(*b);
            step(todo, branch, out);
        }
        Formula::Next(g) => {
            branch.nexts.insert(*g);
            step(todo, branch, out);
        }
        Formula::Eventually(ref g) => {
            // F g  ≡  g ∨ X F g; postponing defers the eventuality.
            let mut now = todo.clone();
            now.push((**g).clone());
            step(now, branch.clone(), out);
            branch.deferred.insert(f.clone());
            branch.nexts.insert(f);
            step(todo, branch, out);
        }
        Formula::Globally(ref g) => {
            // G g  ≡  g ∧ X G g.
            todo.push((**g).clone());
            branch.nexts.insert(f);
            step(todo, branch, out);
        }
        Formula::Until(ref a, ref b) => {
            // a U b  ≡  b ∨ (a ∧ X(a U b)).
            let mut now = todo.clone();
            now.push((**b).clone());
            step(now, branch.clone(), out);
            todo.push((**a).clone());
            branch.deferred.insert(f.clone());
            branch.nexts.insert(f);
            step(todo, branch, out);
        }
        Formula::Release(ref a, ref b) => {
            // a R b  ≡  b ∧ (a ∨ X(a R b)); no acceptance obligation.
            todo.push((**b).clone());
            let mut release_now = todo.clone();
            release_now.push((**a).clone());
            step(release_now, branch.clone(), out);
            branch.nexts.insert(f);
            step(todo, branch, out);
        }
        Formula::Implies(_, _) | Formula::Iff(_, _) => {
            unreachable!("implication below NNF")
        }
    }
}
