//! Greedy MMKP heuristics.

use std::cmp::Ordering;

use super::{Item, Problem, Usage};
use crate::model::{Decision, Target};

const TARGETS: [Target; 2] = [Target::Fec, Target::Nec];

/// `demand / remaining`, with an empty demand costing nothing and a demand on
/// an exhausted resource costing infinity.
fn ratio(demand: f64, remaining: f64) -> f64 {
    if demand == 0.0 {
        0.0
    } else if remaining <= 0.0 {
        f64::INFINITY
    } else {
        demand / remaining
    }
}

/// Sum over the target's resource dimensions of grant over remaining capacity.
fn footprint(problem: &Problem, usage: &Usage, item: &Item, target: Target) -> f64 {
    match target {
        Target::Fec => {
            ratio(item.fec_grant, problem.fec_capacity - usage.fec)
                + ratio(
                    item.fronthaul_rate,
                    problem.fronthaul_capacity[item.cell] - usage.fronthaul[item.cell],
                )
        }
        Target::Nec => ratio(
            item.nec_grant,
            problem.nec_capacity[item.cell] - usage.nec[item.cell],
        ),
    }
}

type Ranked = Vec<(f64, Target)>;

/// Admissible targets ranked by footprint, FEC first on ties.
fn ranked_targets(problem: &Problem, usage: &Usage, item: &Item) -> Ranked {
    let mut ranked: Ranked = TARGETS
        .iter()
        .filter(|t| item.admissible(**t))
        .map(|t| (footprint(problem, usage, item, *t), *t))
        .collect();
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    ranked
}

/// Ascending best-footprint order with first-fit placement.
///
/// Footprints for ordering are measured against full capacities. Each task,
/// in that order, goes to its lower-footprint admissible target if the
/// remaining capacity covers it, else to the other admissible target, else
/// it is rejected. A closing pass retries every rejected task in key order,
/// ranking its targets against the capacities left at that point.
pub(super) fn min_footprint(problem: &Problem) -> Vec<Decision> {
    let empty = Usage::empty(problem);
    let mut order: Vec<(f64, usize, Ranked)> = problem
        .items
        .iter()
        .enumerate()
        .filter_map(|(i, item)| {
            let ranked = ranked_targets(problem, &empty, item);
            ranked.first().map(|best| (best.0, i, ranked.clone()))
        })
        .collect();
    // Stable on the key index for equal footprints.
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut usage = empty;
    let mut decisions = vec![Decision::Reject; problem.len()];
    for (_, i, ranked) in &order {
        let item = &problem.items[*i];
        if let Some((_, target)) = ranked.iter().find(|(_, t)| usage.fits(problem, item, *t)) {
            usage.add(item, *target);
            decisions[*i] = (*target).into();
        }
    }

    for (decision, item) in decisions.iter_mut().zip(&problem.items) {
        if *decision != Decision::Reject {
            continue;
        }
        let ranked = ranked_targets(problem, &usage, item);
        if let Some((_, target)) = ranked.iter().find(|(_, t)| usage.fits(problem, item, *t)) {
            usage.add(item, *target);
            *decision = (*target).into();
        }
    }
    decisions
}

/// Resource dimensions: the FEC pool, then every cell's NEC, then every
/// cell's fronthaul.
struct Dimensions {
    capacity: Vec<f64>,
    cells: usize,
}

impl Dimensions {
    fn new(problem: &Problem) -> Self {
        let mut capacity = vec![problem.fec_capacity];
        capacity.extend(&problem.nec_capacity);
        capacity.extend(&problem.fronthaul_capacity);
        Self {
            capacity,
            cells: problem.nec_capacity.len(),
        }
    }

    fn used(&self, usage: &Usage) -> Vec<f64> {
        let mut used = vec![usage.fec];
        used.extend(&usage.nec);
        used.extend(&usage.fronthaul);
        used
    }

    /// `(dimension, demand)` pairs consumed by placing `item` on `target`.
    fn demands(&self, item: &Item, target: Target) -> [(usize, f64); 2] {
        match target {
            Target::Fec => [
                (0, item.fec_grant),
                (1 + self.cells + item.cell, item.fronthaul_rate),
            ],
            Target::Nec => [(1 + item.cell, item.nec_grant), (0, 0.0)],
        }
    }
}

/// Toyoda-style aggregate-penalty greedy.
///
/// Each step scores every fitting (task, target) option as
/// `sum_d w_d * demand_d / remaining_d`, where `w` is the current
/// capacity-relative usage vector normalised to unit length (all ones before
/// anything is placed), and places the lowest-scoring option. Ties go to the
/// smaller task key, then FEC before NEC. Stops when no option fits.
pub(super) fn penalty(problem: &Problem) -> Vec<Decision> {
    let dims = Dimensions::new(problem);
    let mut usage = Usage::empty(problem);
    let mut decisions = vec![Decision::Reject; problem.len()];
    let mut open: Vec<usize> = (0..problem.len())
        .filter(|&i| TARGETS.iter().any(|t| problem.items[i].admissible(*t)))
        .collect();

    while !open.is_empty() {
        let used = dims.used(&usage);
        let relative: Vec<f64> = used
            .iter()
            .zip(&dims.capacity)
            .map(|(u, c)| if *c > 0.0 { u / c } else { 0.0 })
            .collect();
        let norm = relative.iter().map(|r| r * r).sum::<f64>().sqrt();
        let weight = |d: usize| if norm > 0.0 { relative[d] / norm } else { 1.0 };

        let mut best: Option<(f64, usize, Target)> = None;
        for (slot, &i) in open.iter().enumerate() {
            let item = &problem.items[i];
            for target in TARGETS {
                if !item.admissible(target) || !usage.fits(problem, item, target) {
                    continue;
                }
                let score: f64 = dims
                    .demands(item, target)
                    .iter()
                    .map(|&(d, demand)| {
                        let w = weight(d);
                        // 0 * inf would poison the score with NaN.
                        if w == 0.0 {
                            0.0
                        } else {
                            w * ratio(demand, dims.capacity[d] - used[d])
                        }
                    })
                    .sum();
                let better = match &best {
                    None => true,
                    Some((s, _, _)) => score.total_cmp(s) == Ordering::Less,
                };
                if better {
                    best = Some((score, slot, target));
                }
            }
        }

        let Some((_, slot, target)) = best else { break };
        let i = open.remove(slot);
        usage.add(&problem.items[i], target);
        decisions[i] = target.into();
    }
    decisions
}
