use super::formula::Formula;
use super::vars::{Valuation, VarSet};
use super::LtlError;

/// An ultimately periodic word `stem · loop^ω` of valuations: the universal
/// finite witness format. The loop is never empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lasso {
    vars: VarSet,
    stem: Vec<Valuation>,
    cycle: Vec<Valuation>,
}

impl Lasso {
    pub fn new(
        vars: VarSet,
        stem: Vec<Valuation>,
        cycle: Vec<Valuation>,
    ) -> Result<Self, LtlError> {
        if cycle.is_empty() {
            return Err(LtlError::EmptyLoop);
        }
        if stem.iter().chain(cycle.iter()).any(|v| !v.is_within(vars)) {
            return Err(LtlError::ValuationOutsideVars);
        }
        Ok(Lasso { vars, stem, cycle })
    }

    /// The constant word `letter^ω`.
    pub fn constant(vars: VarSet, letter: Valuation) -> Result<Self, LtlError> {
        Lasso::new(vars, Vec::new(), vec![letter])
    }

    pub fn vars(&self) -> VarSet {
        self.vars
    }

    pub fn stem(&self) -> &[Valuation] {
        &self.stem
    }

    pub fn cycle(&self) -> &[Valuation] {
        &self.cycle
    }

    /// Number of distinct positions in the finite representation.
    pub fn len(&self) -> usize {
        self.stem.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Letter at unrolled position `i` of the infinite word.
    pub fn at(&self, i: usize) -> Valuation {
        if i < self.stem.len() {
            self.stem[i]
        } else {
            self.cycle[(i - self.stem.len()) % self.cycle.len()]
        }
    }

    /// Successor position within the finite representation.
    pub fn succ(&self, i: usize) -> usize {
        if i + 1 < self.len() {
            i + 1
        } else {
            self.stem.len()
        }
    }

    /// Drops all variables outside `keep`.
    pub fn restrict(&self, keep: VarSet) -> Lasso {
        Lasso {
            vars: self.vars.intersection(keep),
            stem: self.stem.iter().map(|v| v.restrict(keep)).collect(),
            cycle: self.cycle.iter().map(|v| v.restrict(keep)).collect(),
        }
    }

    /// Pointwise union with a lasso over disjoint variables. The result has
    /// the longer stem and the lcm of the two loop lengths, so both operands
    /// unroll consistently.
    pub fn superpose(&self, other: &Lasso) -> Result<Lasso, LtlError> {
        if !self.vars.is_disjoint_from(other.vars) {
            return Err(LtlError::VariableMismatch(
                "superposed lassos must range over disjoint variables".to_owned(),
            ));
        }
        let stem_len = self.stem.len().max(other.stem.len());
        let cycle_len = lcm(self.cycle.len(), other.cycle.len());
        let stem = (0..stem_len)
            .map(|i| self.at(i).union(other.at(i)))
            .collect();
        let cycle = (0..cycle_len)
            .map(|i| self.at(stem_len + i).union(other.at(stem_len + i)))
            .collect();
        Lasso::new(self.vars.union(other.vars), stem, cycle)
    }

    /// Unrolls the first `n` letters.
    pub fn prefix(&self, n: usize) -> Vec<Valuation> {
        (0..n).map(|i| self.at(i)).collect()
    }

    /// Moves all variables through `map`; unmapped variables are kept.
    pub fn rename(&self, map: &std::collections::HashMap<super::VarId, super::VarId>) -> Lasso {
        Lasso {
            vars: super::VarSet::from_iter(
                self.vars.iter().map(|v| *map.get(&v).unwrap_or(&v)),
            ),
            stem: self.stem.iter().map(|v| v.rename(map)).collect(),
            cycle: self.cycle.iter().map(|v| v.rename(map)).collect(),
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Standard LTL semantics over `stem · loop^ω`, computed by fixpoint over
/// the lasso's finitely many positions. This is the semantic ground truth
/// every other decision procedure in the crate is tested against.
pub fn evaluate_on_lasso(f: &Formula, w: &Lasso) -> Result<bool, LtlError> {
    if !f.vars().is_subset_of(w.vars()) {
        return Err(LtlError::VariableMismatch(
            "formula mentions atoms outside the lasso's variables".to_owned(),
        ));
    }
    Ok(eval(f, w)[0])
}

/// Truth value of `f` at every position of the finite representation.
fn eval(f: &Formula, w: &Lasso) -> Vec<bool> {
    let n = w.len();
    match f {
        Formula::True => vec![true; n],
        Formula::False => vec![false; n],
        Formula::Atom(v) => (0..n).map(|i| w.at(i).contains(*v)).collect(),
        Formula::Not(g) => eval(g, w).into_iter().map(|b| !b).collect(),
        Formula::And(a, b) => zip(eval(a, w), eval(b, w), |x, y| x && y),
        Formula::Or(a, b) => zip(eval(a, w), eval(b, w), |x, y| x || y),
        Formula::Implies(a, b) => zip(eval(a, w), eval(b, w), |x, y| !x || y),
        Formula::Iff(a, b) => zip(eval(a, w), eval(b, w), |x, y| x == y),
        Formula::Next(g) => {
            let gv = eval(g, w);
            (0..n).map(|i| gv[w.succ(i)]).collect()
        }
        Formula::Eventually(g) => {
            let gv = eval(g, w);
            least_fixpoint(w, |val, i| gv[i] || val[w.succ(i)])
        }
        Formula::Globally(g) => {
            let gv = eval(g, w);
            greatest_fixpoint(w, |val, i| gv[i] && val[w.succ(i)])
        }
        Formula::Until(a, b) => {
            let av = eval(a, w);
            let bv = eval(b, w);
            least_fixpoint(w, |val, i| bv[i] || (av[i] && val[w.succ(i)]))
        }
        Formula::Release(a, b) => {
            let av = eval(a, w);
            let bv = eval(b, w);
            greatest_fixpoint(w, |val, i| bv[i] && (av[i] || val[w.succ(i)]))
        }
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, f: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

fn least_fixpoint(w: &Lasso, step: impl Fn(&[bool], usize) -> bool) -> Vec<bool> {
    fixpoint(w, vec![false; w.len()], step)
}

fn greatest_fixpoint(w: &Lasso, step: impl Fn(&[bool], usize) -> bool) -> Vec<bool> {
    fixpoint(w, vec![true; w.len()], step)
}

fn fixpoint(
    w: &Lasso,
    mut val: Vec<bool>,
    step: impl Fn(&[bool], usize) -> bool,
) -> Vec<bool> {
    loop {
        let mut changed = false;
        // Backward sweeps propagate along the successor chain; iterate to a
        // fixpoint so information also flows around the loop.
        for i in (0..w.len()).rev() {
            let v = step(&val, i);
            if v != val[i] {
                val[i] = v;
                changed = true;
            }
        }
        if !changed {
            return val;
        }
    }
}
