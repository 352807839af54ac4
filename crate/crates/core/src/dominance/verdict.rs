use serde::{Deserialize, Serialize};

use crate::ltl::{Lasso, Universe, Valuation, VarSet};

/// Outcome of a dominance check. When the strategy is not dominant the
/// counterexample is self-validating: on `gamma` the strategy achieves only
/// priority `achieved`, while `better_outputs` achieves the strictly higher
/// `achievable`.
#[derive(Debug, Clone)]
pub struct DominanceVerdict {
    pub dominant: bool,
    pub counterexample: Option<Counterexample>,
}

impl DominanceVerdict {
    pub fn dominant() -> Self {
        DominanceVerdict { dominant: true, counterexample: None }
    }

    pub fn beaten(cex: Counterexample) -> Self {
        DominanceVerdict { dominant: false, counterexample: Some(cex) }
    }
}

#[derive(Debug, Clone)]
pub struct Counterexample {
    /// Environment word on which the strategy is beaten.
    pub gamma: Lasso,
    /// Alternative output word achieving `achievable` on `gamma`.
    pub better_outputs: Lasso,
    /// Priority achieved by the checked strategy on `gamma`.
    pub achieved: usize,
    /// Priority achievable on `gamma`; strictly greater than `achieved`.
    pub achievable: usize,
}

/// Outcome of a winning check; `counter_gamma` is an environment word whose
/// computation violates the objective.
#[derive(Debug, Clone)]
pub struct WinningVerdict {
    pub winning: bool,
    pub counter_gamma: Option<Lasso>,
}

// --- JSON mirrors -------------------------------------------------------
//
// Lassos serialize as {stem: [letters], loop: [letters]} with letters as
// sorted lists of the variables that are true. All verdict objects carry a
// `format` version field.

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LassoJson {
    pub stem: Vec<Vec<String>>,
    #[serde(rename = "loop")]
    pub cycle: Vec<Vec<String>>,
}

impl LassoJson {
    pub fn from_lasso(w: &Lasso, u: &Universe) -> Self {
        let render = |v: &Valuation| {
            let mut names: Vec<String> =
                v.vars().iter().map(|x| u.name(x).to_owned()).collect();
            names.sort();
            names
        };
        LassoJson {
            stem: w.stem().iter().map(|v| render(v)).collect(),
            cycle: w.cycle().iter().map(|v| render(v)).collect(),
        }
    }

    pub fn to_lasso(&self, u: &Universe, vars: VarSet) -> Result<Lasso, String> {
        let parse = |names: &Vec<String>| -> Result<Valuation, String> {
            let mut v = Valuation::empty();
            for n in names {
                let id = u.lookup(n).ok_or_else(|| format!("unknown variable `{n}`"))?;
                v = v.with(id);
            }
            Ok(v)
        };
        let stem = self.stem.iter().map(parse).collect::<Result<Vec<_>, _>>()?;
        let cycle = self.cycle.iter().map(parse).collect::<Result<Vec<_>, _>>()?;
        Lasso::new(vars, stem, cycle).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CounterexampleJson {
    pub gamma: LassoJson,
    pub better: LassoJson,
    pub k: usize,
    pub m: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DominanceVerdictJson {
    pub format: u32,
    pub dominant: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleJson>,
}

impl DominanceVerdict {
    pub fn to_json(&self, u: &Universe) -> DominanceVerdictJson {
        DominanceVerdictJson {
            format: 1,
            dominant: self.dominant,
            counterexample: self.counterexample.as_ref().map(|c| CounterexampleJson {
                gamma: LassoJson::from_lasso(&c.gamma, u),
                better: LassoJson::from_lasso(&c.better_outputs, u),
                k: c.achieved,
                m: c.achievable,
            }),
        }
    }
}
