//! Evaluation of the allocation constraints, independent of any solver.
//!
//! | tag | meaning                                                           | scope    |
//! |-----|-------------------------------------------------------------------|----------|
//! | C1  | FEC completion time `D/r_w + D/r_f + F/f_fec` within the deadline  | task     |
//! | C2  | NEC completion time `D/r_w + F/f_nec` within the deadline          | task     |
//! | C3  | sum of FEC grants over FEC tasks within the FEC capacity          | global   |
//! | C4  | sum of NEC grants over a cell's NEC tasks within its NEC capacity | per cell |
//! | C5  | sum of fronthaul rates over a cell's FEC tasks within its fronthaul capacity | per cell |
//! | C6  | at most one execution site per task                               | task     |
//! | C7  | binary indicators                                                 | task     |
//!
//! C6 and C7 cannot be violated by an [`Assignment`] and are reported as
//! structurally satisfied.
//!
//! Every `<=` comparison allows an absolute slack of [`SLACK`] in the
//! constraint's own unit. Resource sums are accumulated in `(cell_id,
//! ue_index)` order so results do not depend on storage order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::ConstraintError;
use crate::model::{
    Assignment, CellUsage, Decision, ResourceUsage, Scenario, Target, TaskSpec, UeLink,
};

/// Absolute tolerance on every constraint comparison.
pub const SLACK: f64 = 1e-9;

/// `measured <= bound` under the crate-wide tolerance. NaN never fits.
#[inline]
pub fn within(measured: f64, bound: f64) -> bool {
    measured <= bound + SLACK
}

fn require_positive(field: &'static str, value: f64) -> Result<(), ConstraintError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(ConstraintError::InvalidInput { field, value })
    }
}

#[inline]
fn fec_latency_raw(task: &TaskSpec, link: &UeLink) -> f64 {
    task.data_size / link.wireless_rate
        + task.data_size / link.fronthaul_rate
        + task.compute_demand / link.fec_cpu_grant
}

#[inline]
fn nec_latency_raw(task: &TaskSpec, link: &UeLink) -> f64 {
    task.data_size / link.wireless_rate + task.compute_demand / link.nec_cpu_grant
}

/// Completion time when the task runs on the FEC: uplink, fronthaul, then
/// execution with the FEC's CPU grant.
pub fn fec_latency(task: &TaskSpec, link: &UeLink) -> Result<f64, ConstraintError> {
    require_positive("wireless_rate", link.wireless_rate)?;
    require_positive("fronthaul_rate", link.fronthaul_rate)?;
    require_positive("fec_cpu_grant", link.fec_cpu_grant)?;
    Ok(fec_latency_raw(task, link))
}

/// Completion time when the task runs on the cell's NEC: uplink, then
/// execution with the NEC's CPU grant. No fronthaul leg.
pub fn nec_latency(task: &TaskSpec, link: &UeLink) -> Result<f64, ConstraintError> {
    require_positive("wireless_rate", link.wireless_rate)?;
    require_positive("nec_cpu_grant", link.nec_cpu_grant)?;
    Ok(nec_latency_raw(task, link))
}

pub fn latency(target: Target, task: &TaskSpec, link: &UeLink) -> Result<f64, ConstraintError> {
    match target {
        Target::Fec => fec_latency(task, link),
        Target::Nec => nec_latency(task, link),
    }
}

/// Whether the task meets its deadline on `target`. Invalid link
/// parameters make a task infeasible rather than an error.
pub fn is_task_feasible_on(target: Target, task: &TaskSpec, link: &UeLink) -> bool {
    latency(target, task, link).is_ok_and(|t| within(t, task.deadline))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConstraintTag {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
}

/// What a violation applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scope {
    Task { cell_id: usize, ue_index: usize },
    Cell { cell_id: usize },
    Global,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintViolation {
    pub constraint: ConstraintTag,
    pub scope: Scope,
    /// Left-hand side of the violated inequality.
    pub measured: f64,
    /// Right-hand side of the violated inequality.
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub feasible: bool,
    pub violations: Vec<ConstraintViolation>,
    /// Constraints that hold by construction of [`Assignment`].
    pub structurally_satisfied: Vec<ConstraintTag>,
}

impl ConstraintReport {
    pub fn count(&self, tag: ConstraintTag) -> usize {
        self.violations
            .iter()
            .filter(|v| v.constraint == tag)
            .count()
    }
}

/// Resource sums for an assignment. Assumes the keys already match.
fn usage_unchecked(scenario: &Scenario, assignment: &Assignment) -> ResourceUsage {
    let mut fec_used = 0.0;
    let mut per_cell: BTreeMap<usize, (f64, f64)> = scenario
        .cells
        .iter()
        .map(|c| (c.cell_id, (0.0, 0.0)))
        .collect();

    for task in scenario.tasks() {
        let link = task.link();
        let sums = per_cell.get_mut(&task.key.cell_id).expect("cell present");
        match assignment.get(task.key) {
            Some(Decision::Fec) => {
                fec_used += link.fec_cpu_grant;
                sums.1 += link.fronthaul_rate;
            }
            Some(Decision::Nec) => sums.0 += link.nec_cpu_grant,
            Some(Decision::Reject) | None => {}
        }
    }

    let cells = scenario
        .sorted_cells()
        .into_iter()
        .map(|cell| {
            let (nec_used, fronthaul_used) = per_cell[&cell.cell_id];
            CellUsage {
                cell_id: cell.cell_id,
                nec_used,
                nec_capacity: cell.nec_capacity,
                fronthaul_used,
                fronthaul_capacity: cell.fronthaul_capacity,
            }
        })
        .collect();

    ResourceUsage {
        fec_used,
        fec_capacity: scenario.fec_capacity,
        cells,
    }
}

/// Per-resource consumption of `assignment`.
pub fn resource_usage(
    scenario: &Scenario,
    assignment: &Assignment,
) -> Result<ResourceUsage, ConstraintError> {
    assignment.check_matches(scenario)?;
    Ok(usage_unchecked(scenario, assignment))
}

/// Checks C1 through C5 and reports every violation.
///
/// Errors only when the assignment's task set differs from the scenario's.
pub fn audit(
    scenario: &Scenario,
    assignment: &Assignment,
) -> Result<ConstraintReport, ConstraintError> {
    assignment.check_matches(scenario)?;
    let mut violations = Vec::new();

    for task in scenario.tasks() {
        let (tag, measured) = match assignment.get(task.key) {
            Some(Decision::Fec) => (ConstraintTag::C1, fec_latency_raw(task.task(), task.link())),
            Some(Decision::Nec) => (ConstraintTag::C2, nec_latency_raw(task.task(), task.link())),
            _ => continue,
        };
        if !within(measured, task.task().deadline) {
            violations.push(ConstraintViolation {
                constraint: tag,
                scope: Scope::Task {
                    cell_id: task.key.cell_id,
                    ue_index: task.key.ue_index,
                },
                measured,
                bound: task.task().deadline,
            });
        }
    }

    let usage = usage_unchecked(scenario, assignment);
    if !within(usage.fec_used, usage.fec_capacity) {
        violations.push(ConstraintViolation {
            constraint: ConstraintTag::C3,
            scope: Scope::Global,
            measured: usage.fec_used,
            bound: usage.fec_capacity,
        });
    }
    for cell in &usage.cells {
        if !within(cell.nec_used, cell.nec_capacity) {
            violations.push(ConstraintViolation {
                constraint: ConstraintTag::C4,
                scope: Scope::Cell {
                    cell_id: cell.cell_id,
                },
                measured: cell.nec_used,
                bound: cell.nec_capacity,
            });
        }
    }
    for cell in &usage.cells {
        if !within(cell.fronthaul_used, cell.fronthaul_capacity) {
            violations.push(ConstraintViolation {
                constraint: ConstraintTag::C5,
                scope: Scope::Cell {
                    cell_id: cell.cell_id,
                },
                measured: cell.fronthaul_used,
                bound: cell.fronthaul_capacity,
            });
        }
    }

    Ok(ConstraintReport {
        feasible: violations.is_empty(),
        violations,
        structurally_satisfied: vec![ConstraintTag::C6, ConstraintTag::C7],
    })
}

/// Accepted tasks over all tasks. Infeasible assignments have no rate.
pub fn success_rate(scenario: &Scenario, assignment: &Assignment) -> Result<f64, ConstraintError> {
    let report = audit(scenario, assignment)?;
    if !report.feasible {
        return Err(ConstraintError::Infeasible {
            violations: report.violations.len(),
        });
    }
    let total = scenario.total_task_count();
    if total == 0 {
        return Err(ConstraintError::EmptyScenario);
    }
    Ok(assignment.accepted_count() as f64 / total as f64)
}
