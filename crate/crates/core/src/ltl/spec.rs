use super::formula::Formula;
use super::lasso::{evaluate_on_lasso, Lasso};
use super::LtlError;

/// An ordered list of objectives `φ₁ … φₙ`, priority 1 the most important.
///
/// Priority 0 is vacuously satisfied, so the achieved priority of a
/// computation — the largest `k` whose partial conjunction holds — is always
/// defined. Partial conjunctions are monotone by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrioritizedSpec {
    objectives: Vec<Formula>,
}

impl PrioritizedSpec {
    pub fn new(objectives: Vec<Formula>) -> Result<Self, LtlError> {
        if objectives.is_empty() {
            return Err(LtlError::EmptySpec);
        }
        Ok(PrioritizedSpec { objectives })
    }

    pub fn single(objective: Formula) -> Self {
        PrioritizedSpec { objectives: vec![objective] }
    }

    pub fn len(&self) -> usize {
        self.objectives.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn objectives(&self) -> &[Formula] {
        &self.objectives
    }

    /// `∧_{i ≤ k} φᵢ`; the empty conjunction (`k = 0`) is `true`.
    pub fn partial_conjunction(&self, k: usize) -> Result<Formula, LtlError> {
        if k > self.objectives.len() {
            return Err(LtlError::PriorityOutOfRange { k, n: self.objectives.len() });
        }
        Ok(Formula::conjunction(self.objectives[..k].iter().cloned()))
    }

    /// Largest `k` with `w ⊨ φᵏ`; 0 if even the most important objective
    /// fails. Well-defined because partial conjunctions are monotone.
    pub fn achieved_on(&self, w: &Lasso) -> Result<usize, LtlError> {
        let mut achieved = 0;
        for (i, obj) in self.objectives.iter().enumerate() {
            if evaluate_on_lasso(obj, w)? {
                achieved = i + 1;
            } else {
                break;
            }
        }
        Ok(achieved)
    }

    pub fn vars(&self) -> super::VarSet {
        self.objectives
            .iter()
            .fold(super::VarSet::empty(), |s, f| s.union(f.vars()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::{parse_ltl, Universe};

    #[test]
    fn partial_conjunction_boundaries() {
        let u = Universe::of(["p", "q", "r"]);
        let spec = PrioritizedSpec::new(vec![
            parse_ltl("p", &u).unwrap(),
            parse_ltl("q", &u).unwrap(),
            parse_ltl("r", &u).unwrap(),
        ])
        .unwrap();
        assert_eq!(spec.partial_conjunction(0).unwrap(), Formula::True);
        assert_eq!(
            spec.partial_conjunction(2).unwrap(),
            parse_ltl("p & q", &u).unwrap()
        );
        assert_eq!(
            spec.partial_conjunction(3).unwrap(),
            parse_ltl("p & q & r", &u).unwrap()
        );
        assert!(matches!(
            spec.partial_conjunction(4),
            Err(LtlError::PriorityOutOfRange { k: 4, n: 3 })
        ));
    }

    #[test]
    fn empty_spec_rejected() {
        assert_eq!(PrioritizedSpec::new(vec![]).unwrap_err(), LtlError::EmptySpec);
    }
}
