use std::collections::HashMap;
use std::fmt;

use super::vars::{Universe, VarId, VarSet};

/// An LTL syntax tree over atoms drawn from a declared universe.
///
/// Until and Release are included beyond eventually/globally so that the
/// fragment is closed under negation without automaton complementation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom(VarId),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Eventually(Box<Formula>),
    Globally(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(v: VarId) -> Self {
        Formula::Atom(v)
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn next(f: Formula) -> Self {
        Formula::Next(Box::new(f))
    }

    pub fn eventually(f: Formula) -> Self {
        Formula::Eventually(Box::new(f))
    }

    pub fn globally(f: Formula) -> Self {
        Formula::Globally(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Self {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn release(a: Formula, b: Formula) -> Self {
        Formula::Release(Box::new(a), Box::new(b))
    }

    /// Conjunction of a list; the empty conjunction is `true`.
    pub fn conjunction(fs: impl IntoIterator<Item = Formula>) -> Self {
        let mut it = fs.into_iter();
        match it.next() {
            None => Formula::True,
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// All atoms occurring in the formula.
    pub fn vars(&self) -> VarSet {
        match self {
            Formula::True | Formula::False => VarSet::empty(),
            Formula::Atom(v) => VarSet::singleton(*v),
            Formula::Not(f)
            | Formula::Next(f)
            | Formula::Eventually(f)
            | Formula::Globally(f) => f.vars(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b)
            | Formula::Until(a, b)
            | Formula::Release(a, b) => a.vars().union(b.vars()),
        }
    }

    /// Height of the syntax tree; atoms and literals have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 0,
            Formula::Not(f)
            | Formula::Next(f)
            | Formula::Eventually(f)
            | Formula::Globally(f) => 1 + f.depth(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b)
            | Formula::Until(a, b)
            | Formula::Release(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Negation normal form of the formula itself: negations pushed onto
    /// atoms, implications and equivalences expanded.
    pub fn to_nnf(&self) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(v) => Formula::Atom(*v),
            Formula::Not(f) => f.negate_nnf(),
            Formula::And(a, b) => Formula::and(a.to_nnf(), b.to_nnf()),
            Formula::Or(a, b) => Formula::or(a.to_nnf(), b.to_nnf()),
            Formula::Implies(a, b) => Formula::or(a.negate_nnf(), b.to_nnf()),
            Formula::Iff(a, b) => Formula::or(
                Formula::and(a.to_nnf(), b.to_nnf()),
                Formula::and(a.negate_nnf(), b.negate_nnf()),
            ),
            Formula::Next(f) => Formula::next(f.to_nnf()),
            Formula::Eventually(f) => Formula::eventually(f.to_nnf()),
            Formula::Globally(f) => Formula::globally(f.to_nnf()),
            Formula::Until(a, b) => Formula::until(a.to_nnf(), b.to_nnf()),
            Formula::Release(a, b) => Formula::release(a.to_nnf(), b.to_nnf()),
        }
    }

    /// Negation normal form of the *negation*: equivalent to `¬self` with
    /// negations pushed to atoms using the temporal dualities.
    pub fn negate_nnf(&self) -> Formula {
        match self {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Atom(v) => Formula::not(Formula::Atom(*v)),
            Formula::Not(f) => f.to_nnf(),
            Formula::And(a, b) => Formula::or(a.negate_nnf(), b.negate_nnf()),
            Formula::Or(a, b) => Formula::and(a.negate_nnf(), b.negate_nnf()),
            Formula::Implies(a, b) => Formula::and(a.to_nnf(), b.negate_nnf()),
            Formula::Iff(a, b) => Formula::or(
                Formula::and(a.to_nnf(), b.negate_nnf()),
                Formula::and(a.negate_nnf(), b.to_nnf()),
            ),
            Formula::Next(f) => Formula::next(f.negate_nnf()),
            Formula::Eventually(f) => Formula::globally(f.negate_nnf()),
            Formula::Globally(f) => Formula::eventually(f.negate_nnf()),
            Formula::Until(a, b) => Formula::release(a.negate_nnf(), b.negate_nnf()),
            Formula::Release(a, b) => Formula::until(a.negate_nnf(), b.negate_nnf()),
        }
    }

    /// True when negations appear only directly on atoms and there are no
    /// implications or equivalences.
    pub fn is_nnf(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => true,
            Formula::Not(f) => matches!(**f, Formula::Atom(_)),
            Formula::Implies(_, _) | Formula::Iff(_, _) => false,
            Formula::Next(f) | Formula::Eventually(f) | Formula::Globally(f) => f.is_nnf(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Until(a, b)
            | Formula::Release(a, b) => a.is_nnf() && b.is_nnf(),
        }
    }

    /// Replaces atoms according to `map`; atoms not in the map are kept.
    pub fn rename(&self, map: &HashMap<VarId, VarId>) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(v) => Formula::Atom(*map.get(v).unwrap_or(v)),
            Formula::Not(f) => Formula::not(f.rename(map)),
            Formula::And(a, b) => Formula::and(a.rename(map), b.rename(map)),
            Formula::Or(a, b) => Formula::or(a.rename(map), b.rename(map)),
            Formula::Implies(a, b) => Formula::implies(a.rename(map), b.rename(map)),
            Formula::Iff(a, b) => Formula::iff(a.rename(map), b.rename(map)),
            Formula::Next(f) => Formula::next(f.rename(map)),
            Formula::Eventually(f) => Formula::eventually(f.rename(map)),
            Formula::Globally(f) => Formula::globally(f.rename(map)),
            Formula::Until(a, b) => Formula::until(a.rename(map), b.rename(map)),
            Formula::Release(a, b) => Formula::release(a.rename(map), b.rename(map)),
        }
    }

    /// Pretty printer; the output parses back to the same syntax tree.
    pub fn display<'a>(&'a self, universe: &'a Universe) -> FormulaDisplay<'a> {
        FormulaDisplay { formula: self, universe }
    }

    /// Binding strength used by the printer. Higher binds tighter.
    fn prec(&self) -> u8 {
        match self {
            Formula::Iff(_, _) => 1,
            Formula::Implies(_, _) => 2,
            Formula::Or(_, _) => 3,
            Formula::And(_, _) => 4,
            Formula::Until(_, _) | Formula::Release(_, _) => 5,
            Formula::Not(_)
            | Formula::Next(_)
            | Formula::Eventually(_)
            | Formula::Globally(_) => 6,
            Formula::True | Formula::False | Formula::Atom(_) => 7,
        }
    }

    fn fmt_prec(
        &self,
        f: &mut fmt::Formatter<'_>,
        universe: &Universe,
        min_prec: u8,
    ) -> fmt::Result {
        let prec = self.prec();
        let parens = prec < min_prec;
        if parens {
            write!(f, "(")?;
        }
        match self {
            Formula::True => write!(f, "true")?,
            Formula::False => write!(f, "false")?,
            Formula::Atom(v) => write!(f, "{}", universe.name(*v))?,
            Formula::Not(g) => {
                write!(f, "!")?;
                g.fmt_prec(f, universe, 6)?;
            }
            Formula::Next(g) => {
                write!(f, "X ")?;
                g.fmt_prec(f, universe, 6)?;
            }
            Formula::Eventually(g) => {
                write!(f, "F ")?;
                g.fmt_prec(f, universe, 6)?;
            }
            Formula::Globally(g) => {
                write!(f, "G ")?;
                g.fmt_prec(f, universe, 6)?;
            }
            Formula::Until(a, b) => {
                // right-associative
                a.fmt_prec(f, universe, 6)?;
                write!(f, " U ")?;
                b.fmt_prec(f, universe, 5)?;
            }
            Formula::Release(a, b) => {
                a.fmt_prec(f, universe, 6)?;
                write!(f, " R ")?;
                b.fmt_prec(f, universe, 5)?;
            }
            Formula::And(a, b) => {
                // left-associative
                a.fmt_prec(f, universe, 4)?;
                write!(f, " & ")?;
                b.fmt_prec(f, universe, 5)?;
            }
            Formula::Or(a, b) => {
                a.fmt_prec(f, universe, 3)?;
                write!(f, " | ")?;
                b.fmt_prec(f, universe, 4)?;
            }
            Formula::Implies(a, b) => {
                // right-associative
                a.fmt_prec(f, universe, 3)?;
                write!(f, " -> ")?;
                b.fmt_prec(f, universe, 2)?;
            }
            Formula::Iff(a, b) => {
                a.fmt_prec(f, universe, 2)?;
                write!(f, " <-> ")?;
                b.fmt_prec(f, universe, 1)?;
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

pub struct FormulaDisplay<'a> {
    formula: &'a Formula,
    universe: &'a Universe,
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.formula.fmt_prec(f, self.universe, 0)
    }
}
