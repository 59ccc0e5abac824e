//! Shared test helpers: an exhaustive enumeration oracle and instance builders.
//!
//! The oracle reads raw scenario fields and re-derives every constraint on
//! its own. It does not call into `nfcran::constraints` or `nfcran::solvers`.

#![allow(dead_code)]

use nfcran::model::{CellSpec, Decision, Metadata, Scenario, TaskSpec, Ue, UeLink};
use nfcran::scenario::{self, GenParams, Range};

const TOL: f64 = 1e-9;

struct Flat {
    cell: usize,
    task: TaskSpec,
    link: UeLink,
}

/// Maximum number of accepted tasks over all 3^n decision vectors (2^n when
/// `allow_nec` is false), and the lexicographically first vector attaining it
/// under FEC < NEC < REJECT.
pub fn brute_force(scenario: &Scenario, allow_nec: bool) -> (usize, Vec<Decision>) {
    let (cells, flat) = flatten(scenario);
    let n = flat.len();
    let choices: &[Decision] = if allow_nec {
        &[Decision::Fec, Decision::Nec, Decision::Reject]
    } else {
        &[Decision::Fec, Decision::Reject]
    };
    let base = choices.len();
    let total = base.pow(n as u32);

    let mut best: Option<(usize, Vec<Decision>)> = None;
    let mut digits = vec![0usize; n];
    for _ in 0..total {
        let vector: Vec<Decision> = digits.iter().map(|d| choices[*d]).collect();
        if feasible(scenario, &cells, &flat, &vector) {
            let value = vector.iter().filter(|d| **d != Decision::Reject).count();
            if best.as_ref().is_none_or(|(b, _)| value > *b) {
                best = Some((value, vector));
            }
        }
        // Increment, most significant digit first so vectors come out in
        // lexicographic order.
        for pos in (0..n).rev() {
            digits[pos] += 1;
            if digits[pos] < base {
                break;
            }
            digits[pos] = 0;
        }
    }
    best.expect("all-reject is always feasible")
}

/// Independent check of one decision vector, given in (cell_id, ue_index)
/// order.
pub fn vector_is_feasible(scenario: &Scenario, vector: &[Decision]) -> bool {
    let (cells, flat) = flatten(scenario);
    vector.len() == flat.len() && feasible(scenario, &cells, &flat, vector)
}

fn flatten(scenario: &Scenario) -> (Vec<&CellSpec>, Vec<Flat>) {
    let mut cells: Vec<&CellSpec> = scenario.cells.iter().collect();
    cells.sort_by_key(|c| c.cell_id);
    let mut flat = Vec::new();
    for (ci, cell) in cells.iter().enumerate() {
        let mut ues: Vec<&Ue> = cell.ues.iter().collect();
        ues.sort_by_key(|u| u.ue_index);
        for ue in ues {
            flat.push(Flat {
                cell: ci,
                task: ue.task,
                link: ue.link,
            });
        }
    }
    (cells, flat)
}

fn feasible(scenario: &Scenario, cells: &[&CellSpec], flat: &[Flat], vector: &[Decision]) -> bool {
    let mut fec = 0.0;
    let mut nec = vec![0.0; cells.len()];
    let mut fh = vec![0.0; cells.len()];
    for (item, d) in flat.iter().zip(vector) {
        let t = &item.task;
        let l = &item.link;
        match d {
            Decision::Fec => {
                let latency = t.data_size / l.wireless_rate
                    + t.data_size / l.fronthaul_rate
                    + t.compute_demand / l.fec_cpu_grant;
                if latency > t.deadline + TOL {
                    return false;
                }
                fec += l.fec_cpu_grant;
                fh[item.cell] += l.fronthaul_rate;
            }
            Decision::Nec => {
                let latency = t.data_size / l.wireless_rate + t.compute_demand / l.nec_cpu_grant;
                if latency > t.deadline + TOL {
                    return false;
                }
                nec[item.cell] += l.nec_cpu_grant;
            }
            Decision::Reject => {}
        }
    }
    if fec > scenario.fec_capacity + TOL {
        return false;
    }
    cells
        .iter()
        .enumerate()
        .all(|(i, c)| nec[i] <= c.nec_capacity + TOL && fh[i] <= c.fronthaul_capacity + TOL)
}

/// The `paper` preset restricted to one cell with `ues` tasks.
pub fn paper_one_cell(ues: usize, seed: u64) -> GenParams {
    let mut p = scenario::paper_preset()
        .with_ues_per_cell(ues)
        .with_seed(seed);
    p.cell_count = 1;
    p
}

/// Small instances where capacities and deadlines actually bind.
pub fn contention(cells: usize, ues: usize, seed: u64) -> GenParams {
    let mut p = scenario::paper_preset()
        .with_ues_per_cell(ues)
        .with_seed(seed);
    p.preset = "contention".into();
    p.cell_count = cells;
    p.deadline = 1.6;
    p.fec_capacity = 1.5e12;
    p.ranges.nec_capacity = Range::new(3e9, 2e10);
    p.ranges.fronthaul_capacity = Range::new(3e9, 2.5e10);
    p
}

/// Full-size instance with capacities scaled down so that some tasks are
/// rejected at large N.
pub fn stressed(cells: usize, ues: usize, seed: u64) -> GenParams {
    let mut p = scenario::paper_preset()
        .with_ues_per_cell(ues)
        .with_seed(seed);
    p.preset = "stressed".into();
    p.cell_count = cells;
    p.fec_capacity = 2e13;
    p.ranges.nec_capacity = Range::new(2e10, 1e11);
    p.ranges.fronthaul_capacity = Range::new(3e10, 2e11);
    p.deadline = 2.0;
    p
}

/// A one-cell scenario from explicit `(task, link)` pairs.
pub fn one_cell(
    fec_capacity: f64,
    nec_capacity: f64,
    fronthaul_capacity: f64,
    ues: Vec<(TaskSpec, UeLink)>,
) -> Scenario {
    Scenario {
        cells: vec![CellSpec {
            cell_id: 0,
            nec_capacity,
            fronthaul_capacity,
            ues: ues
                .into_iter()
                .enumerate()
                .map(|(ue_index, (task, link))| Ue {
                    ue_index,
                    task,
                    link,
                })
                .collect(),
        }],
        fec_capacity,
        metadata: Metadata::default(),
    }
}
