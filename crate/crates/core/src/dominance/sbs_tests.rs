//! The two-car running example, checked end to end against the plant.

use super::problem::Problem;
use crate::fixtures::SideBySide;
use crate::ltl::evaluate_on_lasso;
use crate::strategies::{achieved_priority, comp, compose};

fn ego_problem() -> (SideBySide, Problem) {
    let s = SideBySide::build();
    let problem = Problem::new(
        s.arch.clone(),
        s.spec.clone(),
        s.ego_outputs,
        Some(s.plant.clone()),
    )
    .unwrap();
    (s, problem)
}

#[test]
fn achieved_priorities_match_the_narrative() {
    let (s, _) = ego_problem();
    let keep = compose(&s.keep_forever(), &s.plant).unwrap();
    let acc = compose(&s.acc(), &s.plant).unwrap();
    // Keeping forever against a keeping opponent never leaves side-by-side.
    assert_eq!(achieved_priority(&s.spec, &keep, &s.other_keeps()).unwrap(), 0);
    // Against an opponent that accelerates once, keeping achieves 1 and 2.
    assert_eq!(
        achieved_priority(&s.spec, &keep, &s.other_accel_once()).unwrap(),
        2
    );
    // Accelerating once achieves the most important objective regardless.
    assert_eq!(achieved_priority(&s.spec, &acc, &s.other_keeps()).unwrap(), 1);
}

#[test]
fn keep_forever_is_not_dominant_with_keeping_counterexample() {
    let (s, problem) = ego_problem();
    let verdict = problem.check_dominant(&s.keep_forever()).unwrap();
    assert!(!verdict.dominant);
    let cex = verdict.counterexample.unwrap();
    // The beaten environment is exactly: other keeps forever.
    let keep_o = s.u().lookup("keep_o").unwrap();
    for i in 0..cex.gamma.len() + 2 {
        assert_eq!(
            cex.gamma.at(i),
            s.letter(&["keep_o"]),
            "expected keep_o at step {i}"
        );
    }
    assert_eq!(cex.achieved, 0);
    assert_eq!(cex.achievable, 1);
    // Self-validation of the better response.
    let full = problem.complete(&cex.gamma, &cex.better_outputs).unwrap();
    assert_eq!(s.spec.achieved_on(&full).unwrap(), 1);
    let _ = keep_o;
}

#[test]
fn acc_is_not_dominant_and_counterexample_validates() {
    let (s, problem) = ego_problem();
    let verdict = problem.check_dominant(&s.acc()).unwrap();
    assert!(!verdict.dominant);
    let cex = verdict.counterexample.unwrap();
    assert!(cex.achievable > cex.achieved);
    assert_eq!(problem.achieved(&s.acc(), &cex.gamma).unwrap(), cex.achieved);
    let full = problem.complete(&cex.gamma, &cex.better_outputs).unwrap();
    assert_eq!(s.spec.achieved_on(&full).unwrap(), cex.achievable);
}

#[test]
fn achievability_level_one_is_universal_and_level_two_needs_movement() {
    let (s, problem) = ego_problem();
    // Level 1: on any environment word ego can deviate and leave sbs.
    let ach1 = problem.achievability_automaton(1).unwrap();
    assert!(ach1.accepts(&s.other_keeps()).unwrap());
    assert!(ach1.accepts(&s.other_accel_once()).unwrap());
    // Level 2 additionally demands ego keeps speed: achievable exactly when
    // the other car eventually changes speed.
    let ach2 = problem.achievability_automaton(2).unwrap();
    assert!(!ach2.accepts(&s.other_keeps()).unwrap());
    assert!(ach2.accepts(&s.other_accel_once()).unwrap());
}

#[test]
fn brute_force_reproduces_the_keeping_counterexample() {
    let (s, problem) = ego_problem();
    let verdict = problem.brute_force_dominance(&s.keep_forever(), 2, 1).unwrap();
    assert!(!verdict.dominant);
    let cex = verdict.counterexample.unwrap();
    assert_eq!(cex.achieved, 0);
    assert!(cex.achievable >= 1);
    // Cross-validate semantically.
    let sys = compose(&s.keep_forever(), &s.plant).unwrap();
    let run = comp(&sys, &cex.gamma).unwrap();
    assert_eq!(s.spec.achieved_on(&run).unwrap(), 0);
}

#[test]
fn plant_composition_keeps_predicates_consistent() {
    let (s, _) = ego_problem();
    let sys = compose(&s.acc(), &s.plant).unwrap();
    let run = comp(&sys, &s.other_keeps()).unwrap();
    let u = s.u();
    // sbs holds at step 0 and is gone from step 1 on.
    let f = crate::ltl::parse_ltl("sbs & X G !sbs", u).unwrap();
    assert!(evaluate_on_lasso(&f, &run).unwrap());
}
