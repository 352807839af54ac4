use super::generator::{AnnotatedGenerator, AssumptionGenerator};
use super::AssumptionError;
use crate::ltl::{LetterSpace, Valuation};

/// Result of a compatibility check; on failure, a concrete spoiling play.
#[derive(Debug, Clone)]
pub struct CompatVerdict {
    pub compatible: bool,
    pub trace: Option<Vec<CompatStep>>,
}

/// One step of a spoiling play: what the lower process announced, output
/// and observed, the higher-tree promise that was tried in response, and
/// the environment letter the higher tree then had to admit. `rejected` is
/// set on the final step, where that letter is not in the tree.
#[derive(Debug, Clone)]
pub struct CompatStep {
    pub lower_promise: usize,
    pub lower_output: Valuation,
    pub lower_letter: Valuation,
    pub free_letter: Valuation,
    pub higher_promise: usize,
    pub higher_letter: Valuation,
    pub rejected: bool,
}

/// Safety game deciding whether every behavior of an annotated generator
/// (the lower-priority process) stays inside another process's assumption
/// tree, for some way of selecting the higher tree's promises.
///
/// Per step: the lower side reveals its promise (and thereby its annotated
/// output), the selector answers with a promise of the higher tree, then
/// the lower side plays any letter its tree allows while the remaining
/// variables of the higher support range freely. The induced letter must be
/// admitted by the higher tree. The selector wins iff play continues
/// forever; the winning set is the greatest fixpoint of the controllable
/// predecessor, computed by round-based iteration.
pub struct CompatGame {
    lower: AnnotatedGenerator,
    higher: AssumptionGenerator,
    free_letters: Vec<Valuation>,
    /// rank[lb][hb]: round at which the pair was removed; None = winning.
    rank: Vec<Vec<Option<usize>>>,
}

impl CompatGame {
    /// `free_space` must cover exactly the higher-support variables that
    /// are neither output nor support of the lower process.
    pub fn solve(
        lower: &AnnotatedGenerator,
        higher: &AssumptionGenerator,
        free_space: &LetterSpace,
    ) -> Result<Self, AssumptionError> {
        let expected_free = higher
            .support()
            .difference(lower.outputs().union(lower.generator().support()));
        if free_space.vars() != expected_free {
            return Err(AssumptionError::InterfaceMismatch(format!(
                "free letter space must range over {expected_free}",
            )));
        }
        let free_letters = free_space.enumerate().map_err(AssumptionError::Ltl)?;
        let nl = lower.generator().branches().len();
        let nh = higher.branches().len();
        let mut rank: Vec<Vec<Option<usize>>> = vec![vec![None; nh]; nl];
        let mut round = 0usize;
        loop {
            let mut removed_any = false;
            let snapshot: Vec<Vec<bool>> = rank
                .iter()
                .map(|row| row.iter().map(|r| r.is_none()).collect())
                .collect();
            for lb in 0..nl {
                for hb in 0..nh {
                    if rank[lb][hb].is_some() {
                        continue;
                    }
                    let survives =
                        Self::controllable(lower, higher, &free_letters, &snapshot, lb, hb)
                            .iter()
                            .all(Option::is_some);
                    if !survives {
                        rank[lb][hb] = Some(round);
                        removed_any = true;
                    }
                }
            }
            if !removed_any {
                break;
            }
            round += 1;
        }
        Ok(CompatGame {
            lower: lower.clone(),
            higher: higher.clone(),
            free_letters,
            rank,
        })
    }

    /// Evaluates the one-step condition at (lb, hb) against a winning-set
    /// snapshot: for every lower promise there must be a higher promise
    /// under which every (letter, free) continuation is admitted and stays
    /// winning. Returns which higher promise works per lower promise.
    fn controllable(
        lower: &AnnotatedGenerator,
        higher: &AssumptionGenerator,
        free_letters: &[Valuation],
        winning: &[Vec<bool>],
        lb: usize,
        hb: usize,
    ) -> Vec<Option<usize>> {
        let lgen = lower.generator();
        let mut selections = Vec::new();
        for (jl, &li) in lgen.branches()[lb].promises.iter().enumerate() {
            let out = lower.annotation(lb, jl);
            let mut chosen = None;
            'higher: for (jh, &hi) in higher.branches()[hb].promises.iter().enumerate() {
                for (m, lb_next) in &lgen.inputs()[li].edges {
                    for &f in free_letters {
                        let h_letter =
                            out.union(*m).union(f).restrict(higher.support());
                        match higher.input_edge(hi, h_letter) {
                            Some(hb_next) if winning[*lb_next][hb_next] => {}
                            _ => continue 'higher,
                        }
                    }
                }
                chosen = Some(jh);
                break;
            }
            selections.push(chosen);
        }
        selections
    }

    pub fn compatible(&self) -> bool {
        self.rank[0][0].is_none()
    }

    pub fn winning(&self, lb: usize, hb: usize) -> bool {
        self.rank[lb][hb].is_none()
    }

    /// Winning promise selection: the higher-tree promise to commit to at
    /// (lb, hb) once the lower side announces its promise `jl` (0-based).
    pub fn select(&self, lb: usize, hb: usize, jl: usize) -> Option<usize> {
        if !self.winning(lb, hb) {
            return None;
        }
        let winning: Vec<Vec<bool>> = self
            .rank
            .iter()
            .map(|row| row.iter().map(|r| r.is_none()).collect())
            .collect();
        let sels =
            Self::controllable(&self.lower, &self.higher, &self.free_letters, &winning, lb, hb);
        sels.get(jl).copied().flatten()
    }

    /// A concrete spoiling play from the roots when incompatible: at each
    /// position the lower side picks a promise defeating every selector
    /// response; the selector's best attempt is recorded, with the step that
    /// falls out of the higher tree at the end.
    pub fn verdict(&self) -> CompatVerdict {
        if self.compatible() {
            return CompatVerdict { compatible: true, trace: None };
        }
        let mut steps = Vec::new();
        let (mut lb, mut hb) = (0usize, 0usize);
        // Bounded by the strictly decreasing removal rank.
        loop {
            let my_rank = self.rank[lb][hb].expect("position is losing");
            let lgen = self.lower.generator();
            // Find the defeating lower promise: every higher response either
            // exits the tree or reaches a position removed at a lower round.
            let mut chosen: Option<(usize, usize, Valuation, Valuation, Valuation, bool, usize, usize)> =
                None;
            'lower: for (jl, &li) in lgen.branches()[lb].promises.iter().enumerate() {
                let out = self.lower.annotation(lb, jl);
                // Check this promise defeats all responses; record the best
                // (first) response's defeat.
                let mut defeat = None;
                for (jh, &hi) in self.higher.branches()[hb].promises.iter().enumerate() {
                    let mut this_defeat = None;
                    'moves: for (m, lb_next) in &lgen.inputs()[li].edges {
                        for &f in &self.free_letters {
                            let h_letter =
                                out.union(*m).union(f).restrict(self.higher.support());
                            match self.higher.input_edge(hi, h_letter) {
                                None => {
                                    this_defeat =
                                        Some((jh, *m, f, h_letter, true, *lb_next, 0));
                                    break 'moves;
                                }
                                Some(hb_next) => {
                                    let worse = match self.rank[*lb_next][hb_next] {
                                        Some(r) if r < my_rank => true,
                                        _ => false,
                                    };
                                    if worse && this_defeat.is_none() {
                                        this_defeat = Some((
                                            jh, *m, f, h_letter, false, *lb_next, hb_next,
                                        ));
                                    }
                                }
                            }
                        }
                    }
                    match this_defeat {
                        Some(d) => {
                            if defeat.is_none() {
                                defeat = Some(d);
                            }
                        }
                        None => continue 'lower, // this response survives
                    }
                }
                if let Some((jh, m, f, h, rejected, lb_next, hb_next)) = defeat {
                    chosen = Some((jl, jh, out, m, f, rejected, lb_next, hb_next));
                    let _ = h;
                    break;
                }
            }
            let (jl, jh, out, m, f, rejected, lb_next, hb_next) =
                chosen.expect("losing position has a defeating promise");
            let h_letter = out.union(m).union(f).restrict(self.higher.support());
            steps.push(CompatStep {
                lower_promise: jl + 1,
                lower_output: out,
                lower_letter: m,
                free_letter: f,
                higher_promise: jh + 1,
                higher_letter: h_letter,
                rejected,
            });
            if rejected {
                return CompatVerdict { compatible: false, trace: Some(steps) };
            }
            lb = lb_next;
            hb = hb_next;
        }
    }
}

/// Decides whether the lower process's annotated behavior always stays
/// inside the higher process's assumption tree; on failure the verdict
/// carries a spoiling trace.
pub fn check_compatible(
    lower: &AnnotatedGenerator,
    higher: &AssumptionGenerator,
    free_space: &LetterSpace,
) -> Result<CompatVerdict, AssumptionError> {
    Ok(CompatGame::solve(lower, higher, free_space)?.verdict())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assumptions::generator::{BranchNode, InputNode};
    use crate::fixtures::SideBySide;
    use crate::ltl::VarSet;

    struct Fix {
        s: SideBySide,
        ego_support: VarSet,
    }

    fn fix() -> Fix {
        let s = SideBySide::build();
        let ego_support = s.other_outputs;
        Fix { s, ego_support }
    }

    /// Ego's tree: other deviates within two steps, then anything.
    fn deviate_within_two(f: &Fix) -> AssumptionGenerator {
        let accel = f.s.letter(&["accel_o"]);
        let decel = f.s.letter(&["decel_o"]);
        let keep = f.s.letter(&["keep_o"]);
        AssumptionGenerator::new(
            f.ego_support,
            vec![
                BranchNode { promises: vec![0, 1] },
                BranchNode { promises: vec![2] },
                BranchNode { promises: vec![3] },
            ],
            vec![
                InputNode { edges: vec![(accel, 2), (decel, 2)] },
                InputNode { edges: vec![(keep, 1)] },
                InputNode { edges: vec![(accel, 2), (decel, 2)] },
                InputNode { edges: vec![(accel, 2), (keep, 2), (decel, 2)] },
            ],
        )
        .unwrap()
    }

    /// Other's strategy (decel_o accel_o)^ω as a two-node annotated chain
    /// over an empty support: it promises nothing about its own inputs.
    fn alternating_other(f: &Fix) -> AnnotatedGenerator {
        let gen = AssumptionGenerator::new(
            VarSet::empty(),
            vec![BranchNode { promises: vec![0] }, BranchNode { promises: vec![1] }],
            vec![
                InputNode { edges: vec![(crate::ltl::Valuation::empty(), 1)] },
                InputNode { edges: vec![(crate::ltl::Valuation::empty(), 0)] },
            ],
        )
        .unwrap();
        AnnotatedGenerator::new(
            gen,
            f.s.other_outputs,
            vec![vec![f.s.letter(&["decel_o"])], vec![f.s.letter(&["accel_o"])]],
        )
        .unwrap()
    }

    fn constant_other(f: &Fix, name: &str) -> AnnotatedGenerator {
        let gen = AssumptionGenerator::new(
            VarSet::empty(),
            vec![BranchNode { promises: vec![0] }],
            vec![InputNode { edges: vec![(crate::ltl::Valuation::empty(), 0)] }],
        )
        .unwrap();
        AnnotatedGenerator::new(gen, f.s.other_outputs, vec![vec![f.s.letter(&[name])]])
            .unwrap()
    }

    fn free_space(f: &Fix, higher: &AssumptionGenerator, lower: &AnnotatedGenerator) -> LetterSpace {
        let free = higher
            .support()
            .difference(lower.outputs().union(lower.generator().support()));
        f.s.arch.letter_space(free)
    }

    #[test]
    fn alternating_strategy_satisfies_deviate_within_two() {
        let f = fix();
        let higher = deviate_within_two(&f);
        let lower = alternating_other(&f);
        let space = free_space(&f, &higher, &lower);
        let verdict = check_compatible(&lower, &higher, &space).unwrap();
        assert!(verdict.compatible);
    }

    #[test]
    fn always_keeping_violates_deviate_within_two_with_trace() {
        let f = fix();
        let higher = deviate_within_two(&f);
        let lower = constant_other(&f, "keep_o");
        let space = free_space(&f, &higher, &lower);
        let verdict = check_compatible(&lower, &higher, &space).unwrap();
        assert!(!verdict.compatible);
        let trace = verdict.trace.unwrap();
        // The violation surfaces within the unrolled depth of the tree.
        assert!(trace.len() <= 3);
        assert!(trace.last().unwrap().rejected);
    }

    #[test]
    fn anything_is_compatible_with_the_universal_tree() {
        let f = fix();
        let space = f.s.arch.letter_space(f.ego_support);
        let higher = AssumptionGenerator::universal(f.ego_support, &space).unwrap();
        for lower in [
            alternating_other(&f),
            constant_other(&f, "keep_o"),
            constant_other(&f, "accel_o"),
        ] {
            let fs = free_space(&f, &higher, &lower);
            assert!(check_compatible(&lower, &higher, &fs).unwrap().compatible);
        }
    }

    #[test]
    fn promise_selection_tracks_the_deviation_step() {
        let f = fix();
        let higher = deviate_within_two(&f);
        let lower = alternating_other(&f);
        let space = free_space(&f, &higher, &lower);
        let game = CompatGame::solve(&lower, &higher, &space).unwrap();
        assert!(game.compatible());
        // At the roots, with other announcing its single promise (it will
        // decel first), the selector must pick the deviate-now promise.
        assert_eq!(game.select(0, 0, 0), Some(0));
    }
}
