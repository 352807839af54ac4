use std::collections::HashMap;
use std::ops::ControlFlow;

use super::compat::CompatGame;
use super::generator::AnnotatedGenerator;
use super::search::{visit_dominant_candidates, SearchOptions};
use super::AssumptionError;
use crate::dominance::Problem;
use crate::ltl::{PrioritizedSpec, VarSet};
use crate::strategies::{Architecture, Transducer};

#[derive(Debug, Clone)]
pub struct PropagateOptions {
    /// Per-process generator node budgets, aligned with the order.
    pub node_bounds: Vec<usize>,
    pub max_promises: usize,
    /// Dominant candidates examined per process before giving up.
    pub stage_cap: usize,
    pub max_annotations_per_generator: usize,
}

impl PropagateOptions {
    pub fn uniform(processes: usize, node_bound: usize) -> Self {
        PropagateOptions {
            node_bounds: vec![node_bound; processes],
            max_promises: 3,
            stage_cap: 256,
            max_annotations_per_generator: 4096,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PropagateOutcome {
    pub order: Vec<String>,
    /// Chosen strategy-annotated assumption generator per process.
    pub chosen: Vec<AnnotatedGenerator>,
    /// Strategies extracted from the annotations, with promise selection
    /// resolved against the next process's committed behavior.
    pub strategies: Vec<Transducer>,
}

/// Incremental synthesis along a priority order: for each process, search
/// its dominant strategy-annotated assumption generators and keep one whose
/// behavior stays inside every higher-priority process's tree. Trees may
/// only assume about lower-priority outputs and external inputs; whatever a
/// tree assumes about external inputs must be universal, since nothing can
/// constrain the environment. Finally, strategies are extracted bottom-up
/// by resolving each tree's promises against the committed machine of the
/// process that drives it.
pub fn propagate(
    arch: &Architecture,
    specs: &[PrioritizedSpec],
    order: &[String],
    plant: Option<&Transducer>,
    supports: &[VarSet],
    opts: &PropagateOptions,
) -> Result<PropagateOutcome, AssumptionError> {
    let n = order.len();
    if n == 0 || specs.len() != n || supports.len() != n || opts.node_bounds.len() != n {
        return Err(AssumptionError::InterfaceMismatch(
            "order, specs, supports and bounds must align".to_owned(),
        ));
    }
    let mut indices = Vec::with_capacity(n);
    for name in order {
        let idx = arch.process_index(name)?;
        if indices.contains(&idx) {
            return Err(AssumptionError::InterfaceMismatch(format!(
                "process `{name}` appears twice in the order"
            )));
        }
        indices.push(idx);
    }
    let external = arch.external_inputs();
    for (i, &support) in supports.iter().enumerate() {
        let mut allowed = external;
        for &j in &indices[i + 1..] {
            allowed = allowed.union(arch.outputs_of(j));
        }
        if !support.is_subset_of(allowed) {
            return Err(AssumptionError::Unsupported(format!(
                "assumption support of `{}` may only mention lower-priority outputs and external inputs",
                order[i]
            )));
        }
    }

    let problems: Vec<Problem> = (0..n)
        .map(|i| {
            Problem::new(
                arch.clone(),
                specs[i].clone(),
                arch.outputs_of(indices[i]),
                plant.cloned(),
            )
            .map_err(AssumptionError::Dominance)
        })
        .collect::<Result<_, _>>()?;

    // Stage candidate lists: dominant, external-universal, capped.
    let mut candidates: Vec<Vec<AnnotatedGenerator>> = Vec::with_capacity(n);
    let mut examined: Vec<usize> = vec![0; n];
    for i in 0..n {
        let sopts = SearchOptions {
            max_nodes: opts.node_bounds[i],
            max_promises: opts.max_promises,
            max_candidates: usize::MAX,
            max_annotations_per_generator: opts.max_annotations_per_generator,
        };
        let ext_part = supports[i].intersection(external);
        let ext_space = arch.letter_space(ext_part);
        let mut list = Vec::new();
        let mut seen = 0usize;
        let mut inner_err: Option<AssumptionError> = None;
        visit_dominant_candidates(&problems[i], supports[i], &sopts, &mut |ag| {
            seen += 1;
            let keep = if ext_part.is_empty() {
                true
            } else {
                match ag.generator().is_universal(&ext_space) {
                    Ok(u) => u,
                    Err(e) => {
                        inner_err = Some(e);
                        return ControlFlow::Break(());
                    }
                }
            };
            if keep {
                list.push(ag);
            }
            if seen >= opts.stage_cap {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        if let Some(e) = inner_err {
            return Err(e);
        }
        if list.is_empty() {
            return Err(AssumptionError::NoCandidate {
                process: order[i].clone(),
                bound: opts.node_bounds[i],
                examined: seen,
            });
        }
        examined[i] = seen;
        candidates.push(list);
    }

    // Depth-first choice with backtracking: a candidate for stage i must
    // stay inside the tree of every earlier stage whose support its outputs
    // feed.
    let mut chosen_idx: Vec<usize> = Vec::new();
    if !choose(
        arch,
        order,
        &indices,
        supports,
        &candidates,
        &mut chosen_idx,
        0,
    )? {
        return Err(AssumptionError::NoCandidate {
            process: order[chosen_idx.len().min(n - 1)].clone(),
            bound: opts.node_bounds[chosen_idx.len().min(n - 1)],
            examined: examined[chosen_idx.len().min(n - 1)],
        });
    }
    let chosen: Vec<AnnotatedGenerator> = chosen_idx
        .iter()
        .enumerate()
        .map(|(i, &c)| candidates[i][c].clone())
        .collect();

    // Extract strategies bottom-up: the machine of the process driving a
    // tree must exist before the tree's promises can be resolved.
    let mut machines: Vec<Option<ExtractedMachine>> = (0..n).map(|_| None).collect();
    for i in (0..n).rev() {
        let drivers: Vec<usize> = (i + 1..n)
            .filter(|&j| !arch.outputs_of(indices[j]).is_disjoint_from(supports[i]))
            .collect();
        let machine = match drivers.as_slice() {
            [] => extract_free(arch, order, &chosen[i], supports[i], indices[i])?,
            [j] => {
                let dm = machines[*j].as_ref().expect("lower machine built first");
                extract_driven(
                    arch,
                    order,
                    &chosen[i],
                    supports[i],
                    indices[i],
                    &chosen[*j],
                    supports[*j],
                    dm,
                )?
            }
            _ => {
                return Err(AssumptionError::Unsupported(format!(
                    "assumption support of `{}` spans several lower processes",
                    order[i]
                )))
            }
        };
        machines[i] = Some(machine);
    }
    let strategies = machines
        .into_iter()
        .map(|m| m.expect("all machines built").transducer)
        .collect();
    Ok(PropagateOutcome { order: order.to_vec(), chosen, strategies })
}

fn choose(
    arch: &Architecture,
    order: &[String],
    indices: &[usize],
    supports: &[VarSet],
    candidates: &[Vec<AnnotatedGenerator>],
    chosen: &mut Vec<usize>,
    stage: usize,
) -> Result<bool, AssumptionError> {
    if stage == candidates.len() {
        return Ok(true);
    }
    'cands: for (c, cand) in candidates[stage].iter().enumerate() {
        for j in 0..stage {
            if arch
                .outputs_of(indices[stage])
                .is_disjoint_from(supports[j])
            {
                continue;
            }
            let higher = candidates[j][chosen[j]].generator();
            let free = supports[j]
                .difference(cand.outputs().union(cand.generator().support()));
            let game = CompatGame::solve(cand, higher, &arch.letter_space(free))?;
            if !game.compatible() {
                continue 'cands;
            }
        }
        chosen.push(c);
        if choose(arch, order, indices, supports, candidates, chosen, stage + 1)? {
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}

struct ExtractedMachine {
    transducer: Transducer,
    branch_of_state: Vec<usize>,
    promise_of_state: Vec<usize>,
}

/// Promise selection against a free environment: a winning selection must
/// keep every environment letter inside the tree forever. Greatest
/// fixpoint over branch nodes; the machine then walks the tree under the
/// selection.
fn extract_free(
    arch: &Architecture,
    order: &[String],
    saat: &AnnotatedGenerator,
    support: VarSet,
    process: usize,
) -> Result<ExtractedMachine, AssumptionError> {
    let gen = saat.generator();
    let letters = arch
        .letter_space(support)
        .enumerate()
        .map_err(AssumptionError::Ltl)?;
    let nb = gen.branches().len();
    let mut winning = vec![true; nb];
    loop {
        let mut changed = false;
        for b in 0..nb {
            if !winning[b] {
                continue;
            }
            let ok = gen.branches()[b].promises.iter().any(|&i| {
                letters
                    .iter()
                    .all(|&l| gen.input_edge(i, l).is_some_and(|t| winning[t]))
            });
            if !ok {
                winning[b] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if !winning[0] {
        return Err(AssumptionError::SelectionUnavailable {
            process: order_name(order, arch, process),
        });
    }
    let select = |b: usize| -> usize {
        gen.branches()[b]
            .promises
            .iter()
            .position(|&i| {
                letters
                    .iter()
                    .all(|&l| gen.input_edge(i, l).is_some_and(|t| winning[t]))
            })
            .expect("winning branch has a winning promise")
    };
    let inputs = arch.universe().full_set().difference(arch.outputs_of(process));
    let width = 1usize << inputs.count();
    let mut outs = Vec::new();
    let mut next: Vec<Vec<usize>> = Vec::new();
    let mut branch_of_state = Vec::new();
    let mut promise_of_state = Vec::new();
    let mut ids: HashMap<usize, usize> = HashMap::new();
    let mut queue = vec![0usize];
    ids.insert(0, 0);
    let mut head = 0;
    while head < queue.len() {
        let b = queue[head];
        head += 1;
        let j = select(b);
        let input_node = gen.branches()[b].promises[j];
        outs.push(saat.annotation(b, j));
        branch_of_state.push(b);
        promise_of_state.push(j);
        let mut row = vec![0usize; width];
        for idx in 0..width {
            let letter = inputs.expand(idx);
            let target = match gen.input_edge(input_node, letter.restrict(support)) {
                Some(t) => t,
                None => b, // outside the assumption: unconstrained
            };
            let dst = *ids.entry(target).or_insert_with(|| {
                queue.push(target);
                queue.len() - 1
            });
            row[idx] = dst;
        }
        next.push(row);
    }
    // Remap targets: queue order == state id order by construction.
    let transducer = Transducer::new(inputs, arch.outputs_of(process), 0, outs, next)?;
    Ok(ExtractedMachine { transducer, branch_of_state, promise_of_state })
}

/// Promise selection against a committed lower machine: walk the
/// compatibility game's winning strategy while simulating the driver.
#[allow(clippy::too_many_arguments)]
fn extract_driven(
    arch: &Architecture,
    order: &[String],
    saat: &AnnotatedGenerator,
    support: VarSet,
    process: usize,
    driver_saat: &AnnotatedGenerator,
    driver_support: VarSet,
    driver: &ExtractedMachine,
) -> Result<ExtractedMachine, AssumptionError> {
    let gen = saat.generator();
    let free = support.difference(driver_saat.outputs().union(driver_support));
    let game = CompatGame::solve(driver_saat, gen, &arch.letter_space(free))?;
    if !game.compatible() {
        return Err(AssumptionError::InterfaceMismatch(
            "chosen generators are incompatible at extraction".to_owned(),
        ));
    }
    let inputs = arch.universe().full_set().difference(arch.outputs_of(process));
    let width = 1usize << inputs.count();
    let dt = &driver.transducer;

    let mut outs = Vec::new();
    let mut next: Vec<Vec<usize>> = Vec::new();
    let mut branch_of_state = Vec::new();
    let mut promise_of_state = Vec::new();
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut queue = vec![(0usize, dt.initial_state())];
    ids.insert(queue[0], 0);
    let mut head = 0;
    while head < queue.len() {
        let (b, ds) = queue[head];
        head += 1;
        let lb = driver.branch_of_state[ds];
        let jl = driver.promise_of_state[ds];
        let jh = match game.select(lb, b, jl) {
            Some(j) => j,
            // Off the assumption: any promise keeps the machine total.
            None => 0,
        };
        let input_node = gen.branches()[b].promises[jh];
        let out = saat.annotation(b, jh);
        outs.push(out);
        branch_of_state.push(b);
        promise_of_state.push(jh);
        let mut row = vec![0usize; width];
        for idx in 0..width {
            let letter = inputs.expand(idx);
            let ds_next = dt.step(ds, letter.union(out).restrict(dt.inputs()));
            let b_next = match gen.input_edge(input_node, letter.restrict(support)) {
                Some(t) => t,
                None => b,
            };
            let key = (b_next, ds_next);
            let dst = *ids.entry(key).or_insert_with(|| {
                queue.push(key);
                queue.len() - 1
            });
            row[idx] = dst;
        }
        next.push(row);
    }
    let transducer = Transducer::new(inputs, arch.outputs_of(process), 0, outs, next)?;
    let _ = order;
    Ok(ExtractedMachine { transducer, branch_of_state, promise_of_state })
}

fn order_name(order: &[String], arch: &Architecture, process: usize) -> String {
    order
        .iter()
        .find(|n| arch.process_index(n).map(|i| i == process).unwrap_or(false))
        .cloned()
        .unwrap_or_else(|| format!("#{process}"))
}
