use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::unary::encode_unary;
use super::AssumptionError;
use crate::ltl::{LetterSpace, Universe, Valuation, VarSet};

/// A finite generator of an assumption tree: a bipartite graph whose
/// unfolding alternates promise edges (numbered 1..b at each branch node)
/// and environment letters over the support variables. Each promise is an
/// announcement restricting the environment's future behavior; the letters
/// allowed at the reached input node are the execution of that promise.
///
/// Environment variables outside `support` are unconstrained: the tree is a
/// cylinder over them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssumptionGenerator {
    support: VarSet,
    branches: Vec<BranchNode>,
    inputs: Vec<InputNode>,
}

/// Ordered promise edges of a branch node; each leads to an input node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchNode {
    pub promises: Vec<usize>,
}

/// Allowed environment letters of an input node, each leading onward to a
/// branch node. Letters are distinct: the unfolding is a tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputNode {
    pub edges: Vec<(Valuation, usize)>,
}

/// One step of a tree path: a 1-based promise number or an environment
/// letter. Paths alternate, starting with a promise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathStep {
    Promise(usize),
    Letter(Valuation),
}

impl AssumptionGenerator {
    /// The root is branch node 0.
    pub fn new(
        support: VarSet,
        branches: Vec<BranchNode>,
        inputs: Vec<InputNode>,
    ) -> Result<Self, AssumptionError> {
        if branches.is_empty() {
            return Err(AssumptionError::Malformed("no branch nodes".to_owned()));
        }
        for (i, b) in branches.iter().enumerate() {
            if b.promises.is_empty() {
                return Err(AssumptionError::Malformed(format!(
                    "branch node {i} has no promises"
                )));
            }
            if b.promises.iter().any(|&t| t >= inputs.len()) {
                return Err(AssumptionError::Malformed(format!(
                    "branch node {i} references an undeclared input node"
                )));
            }
        }
        for (i, node) in inputs.iter().enumerate() {
            if node.edges.is_empty() {
                return Err(AssumptionError::Malformed(format!(
                    "input node {i} allows no letters"
                )));
            }
            let mut seen = BTreeSet::new();
            for (letter, target) in &node.edges {
                if !letter.is_within(support) {
                    return Err(AssumptionError::Malformed(format!(
                        "input node {i} letter outside the support variables"
                    )));
                }
                if !seen.insert(*letter) {
                    return Err(AssumptionError::Malformed(format!(
                        "input node {i} repeats a letter"
                    )));
                }
                if *target >= branches.len() {
                    return Err(AssumptionError::Malformed(format!(
                        "input node {i} references an undeclared branch node"
                    )));
                }
            }
        }
        Ok(AssumptionGenerator { support, branches, inputs })
    }

    /// One branch node with one promise whose input node allows every
    /// letter of the space, looping: no restriction at all.
    pub fn universal(support: VarSet, space: &LetterSpace) -> Result<Self, AssumptionError> {
        let letters = space.enumerate().map_err(AssumptionError::Ltl)?;
        AssumptionGenerator::new(
            support,
            vec![BranchNode { promises: vec![0] }],
            vec![InputNode { edges: letters.into_iter().map(|l| (l, 0)).collect() }],
        )
    }

    pub fn support(&self) -> VarSet {
        self.support
    }

    pub fn branches(&self) -> &[BranchNode] {
        &self.branches
    }

    pub fn inputs(&self) -> &[InputNode] {
        &self.inputs
    }

    pub fn node_count(&self) -> usize {
        self.branches.len() + self.inputs.len()
    }

    pub fn input_edge(&self, input: usize, letter: Valuation) -> Option<usize> {
        self.inputs[input]
            .edges
            .iter()
            .find(|(l, _)| *l == letter)
            .map(|(_, t)| *t)
    }

    /// True iff the unfolded tree contains the node addressed by the
    /// alternating path. Promise numbers are 1-based.
    pub fn contains_path(&self, path: &[PathStep]) -> Result<bool, AssumptionError> {
        let mut at_branch = true;
        let mut branch = 0usize;
        let mut input = 0usize;
        for step in path {
            match (at_branch, step) {
                (true, PathStep::Promise(j)) => {
                    if *j == 0 {
                        return Err(AssumptionError::AlternationViolated);
                    }
                    match self.branches[branch].promises.get(j - 1) {
                        Some(&i) => input = i,
                        None => return Ok(false),
                    }
                    at_branch = false;
                }
                (false, PathStep::Letter(l)) => {
                    match self.input_edge(input, *l) {
                        Some(b) => branch = b,
                        None => return Ok(false),
                    }
                    at_branch = true;
                }
                _ => return Err(AssumptionError::AlternationViolated),
            }
        }
        Ok(true)
    }

    /// True iff, with promise branching collapsed, the unfolded tree admits
    /// every infinite environment-letter sequence over the space. Decided on
    /// the subset construction of the letter-projection.
    pub fn is_universal(&self, env_space: &LetterSpace) -> Result<bool, AssumptionError> {
        let env_vars = env_space.vars();
        let shared = self.support.intersection(env_vars);
        let letters = env_space.enumerate().map_err(AssumptionError::Ltl)?;
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
        let start = vec![0usize];
        seen.insert(start.clone());
        queue.push_back(start);
        while let Some(set) = queue.pop_front() {
            for &e in &letters {
                let mut next: BTreeSet<usize> = BTreeSet::new();
                for &b in &set {
                    for &i in &self.branches[b].promises {
                        for (m, t) in &self.inputs[i].edges {
                            if m.agrees_with(e, shared) {
                                next.insert(*t);
                            }
                        }
                    }
                }
                if next.is_empty() {
                    return Ok(false);
                }
                let next: Vec<usize> = next.into_iter().collect();
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        Ok(true)
    }

    /// Path-language inclusion: every alternating path of `self` is a path
    /// of `other`. Promise numbers must match position for position, so this
    /// is a plain simulation on the product, computed as a greatest
    /// fixpoint. Generators over different supports are incomparable.
    pub fn path_subset(&self, other: &AssumptionGenerator) -> bool {
        if self.support != other.support {
            return false;
        }
        let mut rel = vec![vec![true; other.branches.len()]; self.branches.len()];
        loop {
            let mut changed = false;
            for b1 in 0..self.branches.len() {
                for b2 in 0..other.branches.len() {
                    if !rel[b1][b2] {
                        continue;
                    }
                    let ok = self.branches[b1].promises.iter().enumerate().all(|(j, &i1)| {
                        match other.branches[b2].promises.get(j) {
                            None => false,
                            Some(&i2) => self.inputs[i1].edges.iter().all(|(m, t1)| {
                                other
                                    .input_edge(i2, *m)
                                    .is_some_and(|t2| rel[*t1][t2])
                            }),
                        }
                    });
                    if !ok {
                        rel[b1][b2] = false;
                        changed = true;
                    }
                }
            }
            if !changed {
                return rel[0][0];
            }
        }
    }

    /// Unary-encoded promise-path addresses of every node, from the first
    /// occurrence in a breadth-first unfolding. Letters do not contribute
    /// to an address; only the announcement numbers do.
    fn addresses(&self) -> (Vec<String>, Vec<String>) {
        let mut branch_addr = vec![None::<Vec<u32>>; self.branches.len()];
        let mut input_addr = vec![None::<Vec<u32>>; self.inputs.len()];
        branch_addr[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0usize]);
        while let Some(b) = queue.pop_front() {
            let base = branch_addr[b].clone().expect("visited branch has address");
            for (j, &i) in self.branches[b].promises.iter().enumerate() {
                let mut seq = base.clone();
                seq.push(j as u32 + 1);
                if input_addr[i].is_none() {
                    input_addr[i] = Some(seq.clone());
                }
                for (_, t) in &self.inputs[i].edges {
                    if branch_addr[*t].is_none() {
                        branch_addr[*t] = Some(seq.clone());
                        queue.push_back(*t);
                    }
                }
            }
        }
        let render = |a: &Option<Vec<u32>>| match a {
            Some(seq) => encode_unary(seq),
            None => "unreachable".to_owned(),
        };
        (
            branch_addr.iter().map(render).collect(),
            input_addr.iter().map(render).collect(),
        )
    }

    pub fn to_json(&self, u: &Universe) -> GeneratorJson {
        render_json(self, None, u)
    }

    pub fn from_json(json: &GeneratorJson, u: &Universe) -> Result<Self, AssumptionError> {
        let (gen, _) = parse_json(json, u)?;
        Ok(gen)
    }
}

/// An assumption generator together with a strategy annotation: one output
/// letter per promise edge, i.e. per node of the unfolding that is reached
/// by an announcement number. The output at a step is committed after the
/// current announcement but before the environment letter, matching the
/// computation timing of transducers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedGenerator {
    gen: AssumptionGenerator,
    outputs: VarSet,
    ann: Vec<Vec<Valuation>>,
}

impl AnnotatedGenerator {
    pub fn new(
        gen: AssumptionGenerator,
        outputs: VarSet,
        ann: Vec<Vec<Valuation>>,
    ) -> Result<Self, AssumptionError> {
        if ann.len() != gen.branches.len() {
            return Err(AssumptionError::Malformed(
                "annotation must cover every branch node".to_owned(),
            ));
        }
        for (b, list) in ann.iter().enumerate() {
            if list.len() != gen.branches[b].promises.len() {
                return Err(AssumptionError::Malformed(format!(
                    "annotation of branch {b} must cover each promise edge"
                )));
            }
            if list.iter().any(|o| !o.is_within(outputs)) {
                return Err(AssumptionError::Malformed(
                    "annotation letter outside the output variables".to_owned(),
                ));
            }
        }
        if !gen.support.is_disjoint_from(outputs) {
            return Err(AssumptionError::InterfaceMismatch(
                "support and outputs overlap".to_owned(),
            ));
        }
        Ok(AnnotatedGenerator { gen, outputs, ann })
    }

    pub fn generator(&self) -> &AssumptionGenerator {
        &self.gen
    }

    pub fn outputs(&self) -> VarSet {
        self.outputs
    }

    /// Output letter attached to promise edge `j` (0-based) of branch `b`.
    pub fn annotation(&self, b: usize, j: usize) -> Valuation {
        self.ann[b][j]
    }

    pub fn to_json(&self, u: &Universe) -> GeneratorJson {
        render_json(&self.gen, Some((&self.ann, self.outputs)), u)
    }

    pub fn from_json(json: &GeneratorJson, u: &Universe) -> Result<Self, AssumptionError> {
        let (gen, ann) = parse_json(json, u)?;
        let ann = ann.ok_or_else(|| {
            AssumptionError::Malformed("annotation outputs missing".to_owned())
        })?;
        let outputs = ann
            .iter()
            .flatten()
            .fold(VarSet::empty(), |s, v| s.union(v.vars()));
        AnnotatedGenerator::new(gen, outputs, ann)
    }

    /// Rebuilds with explicit output variables (needed when the annotation
    /// letters do not mention every output variable).
    pub fn with_outputs(self, outputs: VarSet) -> Result<Self, AssumptionError> {
        AnnotatedGenerator::new(self.gen, outputs, self.ann)
    }
}

// --- JSON mirror ---------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub format: u32,
    pub support: Vec<String>,
    pub root: usize,
    pub branches: Vec<BranchJson>,
    pub inputs: Vec<InputJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BranchJson {
    pub address: String,
    pub promises: Vec<PromiseJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PromiseJson {
    pub input: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InputJson {
    pub address: String,
    pub edges: Vec<EdgeJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeJson {
    pub letter: Vec<String>,
    pub branch: usize,
}

fn render_letter(v: Valuation, u: &Universe) -> Vec<String> {
    let mut names: Vec<String> = v.vars().iter().map(|x| u.name(x).to_owned()).collect();
    names.sort();
    names
}

fn parse_letter(names: &[String], u: &Universe) -> Result<Valuation, AssumptionError> {
    let mut v = Valuation::empty();
    for n in names {
        match u.lookup(n) {
            Some(id) => v = v.with(id),
            None => {
                return Err(AssumptionError::Malformed(format!("unknown variable `{n}`")))
            }
        }
    }
    Ok(v)
}

fn render_json(
    gen: &AssumptionGenerator,
    ann: Option<(&Vec<Vec<Valuation>>, VarSet)>,
    u: &Universe,
) -> GeneratorJson {
    let (branch_addr, input_addr) = gen.addresses();
    GeneratorJson {
        format: 1,
        support: {
            let mut s: Vec<String> =
                gen.support.iter().map(|v| u.name(v).to_owned()).collect();
            s.sort();
            s
        },
        root: 0,
        branches: gen
            .branches
            .iter()
            .enumerate()
            .map(|(b, node)| BranchJson {
                address: branch_addr[b].clone(),
                promises: node
                    .promises
                    .iter()
                    .enumerate()
                    .map(|(j, &i)| PromiseJson {
                        input: i,
                        output: ann.map(|(a, _)| render_letter(a[b][j], u)),
                    })
                    .collect(),
            })
            .collect(),
        inputs: gen
            .inputs
            .iter()
            .enumerate()
            .map(|(i, node)| InputJson {
                address: input_addr[i].clone(),
                edges: node
                    .edges
                    .iter()
                    .map(|(l, t)| EdgeJson { letter: render_letter(*l, u), branch: *t })
                    .collect(),
            })
            .collect(),
    }
}

type ParsedJson = (AssumptionGenerator, Option<Vec<Vec<Valuation>>>);

fn parse_json(json: &GeneratorJson, u: &Universe) -> Result<ParsedJson, AssumptionError> {
    if json.format != 1 {
        return Err(AssumptionError::Malformed(format!(
            "unsupported format {}",
            json.format
        )));
    }
    if json.root != 0 {
        return Err(AssumptionError::Malformed("root must be branch 0".to_owned()));
    }
    let support = parse_letter(&json.support, u)?.vars();
    let mut branches = Vec::new();
    let mut ann: Vec<Vec<Valuation>> = Vec::new();
    let mut has_ann = false;
    for b in &json.branches {
        let mut promises = Vec::new();
        let mut outs = Vec::new();
        for p in &b.promises {
            promises.push(p.input);
            match &p.output {
                Some(names) => {
                    has_ann = true;
                    outs.push(parse_letter(names, u)?);
                }
                None => outs.push(Valuation::empty()),
            }
        }
        branches.push(BranchNode { promises });
        ann.push(outs);
    }
    let mut inputs = Vec::new();
    for i in &json.inputs {
        let mut edges = Vec::new();
        for e in &i.edges {
            edges.push((parse_letter(&e.letter, u)?, e.branch));
        }
        inputs.push(InputNode { edges });
    }
    let gen = AssumptionGenerator::new(support, branches, inputs)?;
    Ok((gen, has_ann.then_some(ann)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::{Universe, VarId};

    fn v(names: &[&str], u: &Universe) -> Valuation {
        names
            .iter()
            .fold(Valuation::empty(), |acc, n| acc.with(u.lookup(n).unwrap()))
    }

    /// Fig-2a shape: a single chain insisting the environment always plays
    /// keep.
    fn always_keep(u: &Universe) -> AssumptionGenerator {
        let support = VarSet::from_iter([
            u.lookup("accel_o").unwrap(),
            u.lookup("keep_o").unwrap(),
            u.lookup("decel_o").unwrap(),
        ]);
        AssumptionGenerator::new(
            support,
            vec![BranchNode { promises: vec![0] }],
            vec![InputNode { edges: vec![(v(&["keep_o"], u), 0)] }],
        )
        .unwrap()
    }

    fn u3() -> Universe {
        Universe::of(["accel_o", "keep_o", "decel_o"])
    }

    #[test]
    fn contains_path_on_the_linear_tree() {
        let u = u3();
        let g = always_keep(&u);
        let keep = v(&["keep_o"], &u);
        let accel = v(&["accel_o"], &u);
        assert!(g
            .contains_path(&[
                PathStep::Promise(1),
                PathStep::Letter(keep),
                PathStep::Promise(1),
                PathStep::Letter(keep)
            ])
            .unwrap());
        assert!(!g
            .contains_path(&[PathStep::Promise(1), PathStep::Letter(accel)])
            .unwrap());
        assert!(g.contains_path(&[]).unwrap());
        assert!(!g.contains_path(&[PathStep::Promise(2)]).unwrap());
        assert!(matches!(
            g.contains_path(&[PathStep::Letter(keep)]),
            Err(AssumptionError::AlternationViolated)
        ));
    }

    #[test]
    fn universality() {
        let u = u3();
        let support = VarSet::from_iter([VarId(0), VarId(1), VarId(2)]);
        let letters = vec![v(&["accel_o"], &u), v(&["keep_o"], &u), v(&["decel_o"], &u)];
        let space = LetterSpace::from_letters(support, letters).unwrap();
        let univ = AssumptionGenerator::universal(support, &space).unwrap();
        assert!(univ.is_universal(&space).unwrap());
        assert!(!always_keep(&u).is_universal(&space).unwrap());
    }

    #[test]
    fn path_subset_orders_by_permissiveness() {
        let u = u3();
        let support = VarSet::from_iter([VarId(0), VarId(1), VarId(2)]);
        let letters = vec![v(&["accel_o"], &u), v(&["keep_o"], &u), v(&["decel_o"], &u)];
        let space = LetterSpace::from_letters(support, letters).unwrap();
        let univ = AssumptionGenerator::universal(support, &space).unwrap();
        let keep = always_keep(&u);
        assert!(keep.path_subset(&univ));
        assert!(!univ.path_subset(&keep));
        assert!(keep.path_subset(&keep));
        assert!(univ.path_subset(&univ));
    }

    #[test]
    fn json_roundtrip_with_annotation() {
        let u = Universe::of(["accel_o", "keep_o", "decel_o", "keep_e"]);
        let g = always_keep(&u);
        let keep_e = VarSet::singleton(u.lookup("keep_e").unwrap());
        let ag = AnnotatedGenerator::new(
            g.clone(),
            keep_e,
            vec![vec![Valuation::empty().with(u.lookup("keep_e").unwrap())]],
        )
        .unwrap();
        let json = ag.to_json(&u);
        assert_eq!(json.format, 1);
        assert_eq!(json.branches[0].address, "");
        assert_eq!(json.inputs[0].address, "01");
        let back = AnnotatedGenerator::from_json(&json, &u).unwrap();
        assert_eq!(back.generator(), &g);
        assert_eq!(back.annotation(0, 0), ag.annotation(0, 0));
        let plain = AssumptionGenerator::from_json(&json, &u).unwrap();
        assert_eq!(&plain, &g);
    }

    #[test]
    fn malformed_generators_rejected() {
        let support = VarSet::singleton(VarId(0));
        assert!(AssumptionGenerator::new(support, vec![], vec![]).is_err());
        assert!(AssumptionGenerator::new(
            support,
            vec![BranchNode { promises: vec![] }],
            vec![]
        )
        .is_err());
        assert!(AssumptionGenerator::new(
            support,
            vec![BranchNode { promises: vec![0] }],
            vec![InputNode { edges: vec![] }]
        )
        .is_err());
    }
}
