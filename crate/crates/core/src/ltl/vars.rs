use std::collections::HashMap;
use std::fmt;

use super::LtlError;

/// Words that the formula grammar claims for itself.
pub(crate) const RESERVED: &[&str] = &["true", "false", "X", "F", "G", "U", "R"];

/// Index of a variable within its [`Universe`]. At most 64 variables are
/// supported so that valuations and variable sets fit in a machine word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u16);

/// Who owns a variable: exactly one process writes it, or it is an
/// external input written by nobody.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum VarKind {
    OutputOf(String),
    ExternalInput,
}

/// The declared variable universe. Names are unique and immutable once
/// declared; every other type in this crate references variables by
/// [`VarId`] into a universe.
#[derive(Debug, Clone, Default)]
pub struct Universe {
    names: Vec<String>,
    kinds: Vec<VarKind>,
    index: HashMap<String, VarId>,
}

impl Universe {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a set of external-input variables in order. Convenience for
    /// tests and small examples.
    pub fn of<'a>(names: impl IntoIterator<Item = &'a str>) -> Self {
        let mut u = Self::new();
        for n in names {
            u.declare(n, VarKind::ExternalInput).expect("valid test universe");
        }
        u
    }

    pub fn declare(&mut self, name: &str, kind: VarKind) -> Result<VarId, LtlError> {
        if RESERVED.contains(&name) {
            return Err(LtlError::ReservedName { name: name.to_owned() });
        }
        if self.index.contains_key(name) {
            return Err(LtlError::DuplicateVariable { name: name.to_owned() });
        }
        if self.names.len() >= 64 {
            return Err(LtlError::UniverseFull);
        }
        let id = VarId(self.names.len() as u16);
        self.names.push(name.to_owned());
        self.kinds.push(kind);
        self.index.insert(name.to_owned(), id);
        Ok(id)
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.names[v.0 as usize]
    }

    pub fn kind(&self, v: VarId) -> &VarKind {
        &self.kinds[v.0 as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        (0..self.names.len()).map(|i| VarId(i as u16))
    }

    /// The set of all declared variables.
    pub fn full_set(&self) -> VarSet {
        if self.names.is_empty() {
            VarSet::empty()
        } else {
            VarSet((1u64 << self.names.len()) - 1)
        }
    }

    /// Variables not written by any process.
    pub fn external_inputs(&self) -> VarSet {
        let mut s = VarSet::empty();
        for v in self.vars() {
            if matches!(self.kind(v), VarKind::ExternalInput) {
                s = s.with(v);
            }
        }
        s
    }

    /// Renders a valuation as a sorted `{a,b}` group.
    pub fn letter_string(&self, letter: Valuation) -> String {
        let mut names: Vec<&str> = letter.vars().iter().map(|v| self.name(v)).collect();
        names.sort_unstable();
        format!("{{{}}}", names.join(","))
    }
}

/// A set of declared variables, stored as a bitmask over [`VarId`]s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VarSet(pub u64);

impl VarSet {
    pub fn empty() -> Self {
        VarSet(0)
    }

    pub fn singleton(v: VarId) -> Self {
        VarSet(1u64 << v.0)
    }

    pub fn from_iter(vars: impl IntoIterator<Item = VarId>) -> Self {
        let mut s = Self::empty();
        for v in vars {
            s = s.with(v);
        }
        s
    }

    pub fn with(self, v: VarId) -> Self {
        VarSet(self.0 | (1u64 << v.0))
    }

    pub fn contains(self, v: VarId) -> bool {
        self.0 & (1u64 << v.0) != 0
    }

    pub fn union(self, other: VarSet) -> Self {
        VarSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VarSet) -> Self {
        VarSet(self.0 & other.0)
    }

    pub fn difference(self, other: VarSet) -> Self {
        VarSet(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: VarSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint_from(self, other: VarSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn count(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = VarId> {
        (0..64u16).filter(move |i| self.0 & (1u64 << i) != 0).map(VarId)
    }

    /// Compresses a valuation restricted to this set into a dense index in
    /// `0..2^count()`, using ascending variable order.
    pub fn compress(self, letter: Valuation) -> usize {
        let mut idx = 0usize;
        for (bit, v) in self.iter().enumerate() {
            if letter.contains(v) {
                idx |= 1 << bit;
            }
        }
        idx
    }

    /// Inverse of [`VarSet::compress`].
    pub fn expand(self, idx: usize) -> Valuation {
        let mut letter = Valuation::empty();
        for (bit, v) in self.iter().enumerate() {
            if idx & (1 << bit) != 0 {
                letter = letter.with(v);
            }
        }
        letter
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

/// A single letter: the set of variables that are true, all others false,
/// relative to an ambient variable set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Valuation(pub u64);

impl Valuation {
    pub fn empty() -> Self {
        Valuation(0)
    }

    pub fn with(self, v: VarId) -> Self {
        Valuation(self.0 | (1u64 << v.0))
    }

    pub fn contains(self, v: VarId) -> bool {
        self.0 & (1u64 << v.0) != 0
    }

    pub fn union(self, other: Valuation) -> Self {
        Valuation(self.0 | other.0)
    }

    /// Keeps only the variables in `keep`.
    pub fn restrict(self, keep: VarSet) -> Self {
        Valuation(self.0 & keep.0)
    }

    /// The set of variables assigned true.
    pub fn vars(self) -> VarSet {
        VarSet(self.0)
    }

    pub fn is_within(self, vars: VarSet) -> bool {
        self.0 & !vars.0 == 0
    }

    /// True when both letters assign the same values to every variable in
    /// `on`.
    pub fn agrees_with(self, other: Valuation, on: VarSet) -> bool {
        (self.0 ^ other.0) & on.0 == 0
    }

    /// Moves true variables through `map`; unmapped variables are kept.
    pub fn rename(self, map: &std::collections::HashMap<VarId, VarId>) -> Valuation {
        let mut out = Valuation::empty();
        for v in self.vars().iter() {
            out = out.with(*map.get(&v).unwrap_or(&v));
        }
        out
    }
}

/// The letters a word may range over: either the full Boolean space of a
/// variable set, or an explicit list (used when one-hot groups restrict the
/// valid letters).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LetterSpace {
    Free(VarSet),
    List { vars: VarSet, letters: Vec<Valuation> },
}

impl LetterSpace {
    pub fn free(vars: VarSet) -> Self {
        LetterSpace::Free(vars)
    }

    pub fn from_letters(vars: VarSet, letters: Vec<Valuation>) -> Result<Self, LtlError> {
        if letters.iter().any(|l| !l.is_within(vars)) {
            return Err(LtlError::ValuationOutsideVars);
        }
        Ok(LetterSpace::List { vars, letters })
    }

    pub fn vars(&self) -> VarSet {
        match self {
            LetterSpace::Free(v) => *v,
            LetterSpace::List { vars, .. } => *vars,
        }
    }

    /// Materializes the letter list. Errors if a free space is too large to
    /// enumerate.
    pub fn enumerate(&self) -> Result<Vec<Valuation>, LtlError> {
        match self {
            LetterSpace::Free(vars) => {
                if vars.count() > 20 {
                    return Err(LtlError::LetterSpaceTooLarge { limit: 20 });
                }
                Ok((0..1usize << vars.count()).map(|i| vars.expand(i)).collect())
            }
            LetterSpace::List { letters, .. } => Ok(letters.clone()),
        }
    }

    pub fn contains(&self, letter: Valuation) -> bool {
        match self {
            LetterSpace::Free(vars) => letter.is_within(*vars),
            LetterSpace::List { letters, .. } => letters.contains(&letter),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            LetterSpace::Free(vars) => 1usize << vars.count(),
            LetterSpace::List { letters, .. } => letters.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Restricts this space to the projection of its letters onto `keep`.
    pub fn project(&self, keep: VarSet) -> LetterSpace {
        match self {
            LetterSpace::Free(vars) => LetterSpace::Free(vars.intersection(keep)),
            LetterSpace::List { vars, letters } => {
                let mut seen = Vec::new();
                for l in letters {
                    let p = l.restrict(keep);
                    if !seen.contains(&p) {
                        seen.push(p);
                    }
                }
                LetterSpace::List { vars: vars.intersection(keep), letters: seen }
            }
        }
    }

    /// Joint space over disjoint variable sets: every combination of a letter
    /// from each side.
    pub fn product(&self, other: &LetterSpace) -> Result<LetterSpace, LtlError> {
        if !self.vars().is_disjoint_from(other.vars()) {
            return Err(LtlError::VariableMismatch(
                "letter spaces overlap".to_owned(),
            ));
        }
        let a = self.enumerate()?;
        let b = other.enumerate()?;
        let mut letters = Vec::with_capacity(a.len() * b.len());
        for x in &a {
            for y in &b {
                letters.push(x.union(*y));
            }
        }
        Ok(LetterSpace::List { vars: self.vars().union(other.vars()), letters })
    }
}
