//! Domain types for the two-tier edge computing system model.
//!
//! Every UE in cell `j` owns exactly one task. The task is either executed by
//! the far-edge cloud next to the BBU pool (FEC), by the near-edge cloud
//! inside the cell's RRH (NEC), or rejected for this time slot.
//!
//! All quantities are stored as `f64` in base SI units: cycles, bits,
//! seconds, cycles/s and bits/s. Magnitudes in practice span roughly 1e4 to
//! 1e16, well inside double precision.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

fn positive(field: &'static str, value: f64) -> Result<f64, ModelError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(ModelError::NonPositive { field, value })
    }
}

/// One offloadable task: what it needs and by when.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaskSpec {
    /// CPU cycles required to complete the task.
    pub compute_demand: f64,
    /// Bits that must be shipped to whichever cloud executes the task.
    pub data_size: f64,
    /// Latest acceptable completion time, in seconds.
    pub deadline: f64,
}

impl TaskSpec {
    pub fn new(compute_demand: f64, data_size: f64, deadline: f64) -> Result<Self, ModelError> {
        Ok(Self {
            compute_demand: positive("compute_demand", compute_demand)?,
            data_size: positive("data_size", data_size)?,
            deadline: positive("deadline", deadline)?,
        })
    }

    /// A task with nothing to compute and nothing to send. Only useful as a
    /// degenerate test instance; `Scenario::validate` flags it.
    pub fn zero_size(deadline: f64) -> Self {
        Self {
            compute_demand: 0.0,
            data_size: 0.0,
            deadline,
        }
    }
}

/// Per-UE transport rates and the CPU share each cloud would grant the UE.
///
/// These are inputs, not decision variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UeLink {
    /// UE to RRH, bits/s.
    pub wireless_rate: f64,
    /// RRH to BBU pool share for this UE, bits/s.
    pub fronthaul_rate: f64,
    /// Cycles/s the cell's NEC grants this UE if it accepts the task.
    pub nec_cpu_grant: f64,
    /// Cycles/s the FEC grants this UE if it accepts the task.
    pub fec_cpu_grant: f64,
}

impl UeLink {
    pub fn new(
        wireless_rate: f64,
        fronthaul_rate: f64,
        nec_cpu_grant: f64,
        fec_cpu_grant: f64,
    ) -> Result<Self, ModelError> {
        Ok(Self {
            wireless_rate: positive("wireless_rate", wireless_rate)?,
            fronthaul_rate: positive("fronthaul_rate", fronthaul_rate)?,
            nec_cpu_grant: positive("nec_cpu_grant", nec_cpu_grant)?,
            fec_cpu_grant: positive("fec_cpu_grant", fec_cpu_grant)?,
        })
    }
}

/// A UE attached to a cell, with its task and link parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ue {
    pub ue_index: usize,
    pub task: TaskSpec,
    pub link: UeLink,
}

/// One RRH and the UEs it serves.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSpec {
    pub cell_id: usize,
    /// NEC compute capacity, cycles/s.
    pub nec_capacity: f64,
    /// Fronthaul capacity between this RRH and the BBU pool, bits/s.
    pub fronthaul_capacity: f64,
    pub ues: Vec<Ue>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Metadata {
    /// Seed the scenario was generated from, if it was generated.
    pub seed: Option<u64>,
    /// Name of the parameter preset or range descriptor.
    pub preset: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// A complete problem instance.
///
/// A UE belongs to exactly one cell, so the serving-RRH relation is encoded
/// by structure rather than by an explicit mapping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "wire::ScenarioDoc", into = "wire::ScenarioDoc")]
pub struct Scenario {
    pub cells: Vec<CellSpec>,
    /// FEC compute capacity shared by all cells, cycles/s.
    pub fec_capacity: f64,
    pub metadata: Metadata,
}

/// Identifies a task by its cell and the UE's index within that cell.
///
/// Ordering is lexicographic on `(cell_id, ue_index)`; every deterministic
/// traversal in this crate follows it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TaskKey {
    pub cell_id: usize,
    pub ue_index: usize,
}

impl TaskKey {
    pub fn new(cell_id: usize, ue_index: usize) -> Self {
        Self { cell_id, ue_index }
    }
}

impl fmt::Display for TaskKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(cell {}, ue {})", self.cell_id, self.ue_index)
    }
}

/// A borrowed view of one task together with the cell that serves it.
#[derive(Debug, Clone, Copy)]
pub struct TaskRef<'a> {
    pub key: TaskKey,
    pub cell: &'a CellSpec,
    pub ue: &'a Ue,
}

impl TaskRef<'_> {
    pub fn task(&self) -> &TaskSpec {
        &self.ue.task
    }

    pub fn link(&self) -> &UeLink {
        &self.ue.link
    }
}

/// One problem found by [`Scenario::validate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    /// Where the problem is, e.g. `scenario`, `cell 2` or `(cell 2, ue 7)`.
    pub location: String,
    pub field: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, location: impl Into<String>, field: &str, message: impl Into<String>) {
        self.violations.push(Violation {
            location: location.into(),
            field: field.to_string(),
            message: message.into(),
        });
    }
}

impl Scenario {
    /// Number of tasks across all cells.
    pub fn total_task_count(&self) -> usize {
        self.cells.iter().map(|c| c.ues.len()).sum()
    }

    /// All tasks in `(cell_id, ue_index)` order.
    pub fn tasks(&self) -> Vec<TaskRef<'_>> {
        let mut tasks: Vec<TaskRef<'_>> = self
            .cells
            .iter()
            .flat_map(|cell| {
                cell.ues.iter().map(move |ue| TaskRef {
                    key: TaskKey::new(cell.cell_id, ue.ue_index),
                    cell,
                    ue,
                })
            })
            .collect();
        tasks.sort_by_key(|t| t.key);
        tasks
    }

    pub fn task_keys(&self) -> Vec<TaskKey> {
        self.tasks().into_iter().map(|t| t.key).collect()
    }

    pub fn cell(&self, cell_id: usize) -> Option<&CellSpec> {
        self.cells.iter().find(|c| c.cell_id == cell_id)
    }

    /// Cells in ascending `cell_id` order.
    pub fn sorted_cells(&self) -> Vec<&CellSpec> {
        let mut cells: Vec<&CellSpec> = self.cells.iter().collect();
        cells.sort_by_key(|c| c.cell_id);
        cells
    }

    /// Checks every type invariant and returns all violations found.
    ///
    /// Violations are data: an empty report means the scenario is well formed.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();

        if self.cells.is_empty() {
            report.push("scenario", "cells", "scenario has no cells");
        }
        if !(self.fec_capacity.is_finite() && self.fec_capacity >= 0.0) {
            report.push(
                "scenario",
                "fec_capacity",
                format!("must be finite and >= 0, got {}", self.fec_capacity),
            );
        }

        let mut seen_cells = BTreeMap::new();
        for cell in &self.cells {
            let loc = format!("cell {}", cell.cell_id);
            if seen_cells.insert(cell.cell_id, ()).is_some() {
                report.push(loc.clone(), "cell_id", "duplicate cell_id");
            }
            for (field, value) in [
                ("nec_capacity", cell.nec_capacity),
                ("fronthaul_capacity", cell.fronthaul_capacity),
            ] {
                if !(value.is_finite() && value >= 0.0) {
                    report.push(
                        loc.clone(),
                        field,
                        format!("must be finite and >= 0, got {value}"),
                    );
                }
            }
            if cell.ues.is_empty() {
                report.push(loc.clone(), "ues", "cell has no UEs");
            }

            let mut seen_ues = BTreeMap::new();
            for ue in &cell.ues {
                let key = TaskKey::new(cell.cell_id, ue.ue_index);
                if seen_ues.insert(ue.ue_index, ()).is_some() {
                    report.push(
                        key.to_string(),
                        "ue_index",
                        "duplicate ue_index within cell",
                    );
                }
                let fields = [
                    ("compute_demand", ue.task.compute_demand),
                    ("data_size", ue.task.data_size),
                    ("deadline", ue.task.deadline),
                    ("wireless_rate", ue.link.wireless_rate),
                    ("fronthaul_rate", ue.link.fronthaul_rate),
                    ("nec_cpu_grant", ue.link.nec_cpu_grant),
                    ("fec_cpu_grant", ue.link.fec_cpu_grant),
                ];
                for (field, value) in fields {
                    if !(value.is_finite() && value > 0.0) {
                        report.push(
                            key.to_string(),
                            field,
                            format!("must be positive and finite, got {value}"),
                        );
                    }
                }
            }
        }
        report
    }
}

/// Where a task ends up.
///
/// The three-way choice encodes the pair of binary indicators (FEC, NEC):
/// `Fec` is (1, 0), `Nec` is (0, 1), `Reject` is (0, 0). Both indicators set
/// at once cannot be expressed.
///
/// The derived ordering `Fec < Nec < Reject` is the tie-break order used by
/// the exact solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Decision {
    #[serde(rename = "FEC")]
    Fec,
    #[serde(rename = "NEC")]
    Nec,
    #[serde(rename = "REJECT")]
    Reject,
}

impl Decision {
    /// The `(fec, nec)` indicator pair.
    pub fn indicators(self) -> (u8, u8) {
        match self {
            Decision::Fec => (1, 0),
            Decision::Nec => (0, 1),
            Decision::Reject => (0, 0),
        }
    }

    pub fn is_accepted(self) -> bool {
        self != Decision::Reject
    }

    pub fn label(self) -> &'static str {
        match self {
            Decision::Fec => "FEC",
            Decision::Nec => "NEC",
            Decision::Reject => "REJECT",
        }
    }
}

impl From<Target> for Decision {
    fn from(target: Target) -> Self {
        match target {
            Target::Fec => Decision::Fec,
            Target::Nec => Decision::Nec,
        }
    }
}

/// An execution site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Target {
    #[serde(rename = "FEC")]
    Fec,
    #[serde(rename = "NEC")]
    Nec,
}

/// One decision per task.
///
/// An `Assignment` never holds two decisions for the same key. Whether it
/// covers exactly the tasks of a given scenario is checked by
/// [`Assignment::for_scenario`] or [`Assignment::check_matches`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "wire::AssignmentDoc", into = "wire::AssignmentDoc")]
pub struct Assignment {
    decisions: BTreeMap<TaskKey, Decision>,
}

impl Assignment {
    /// Builds an assignment, rejecting duplicated keys.
    pub fn from_entries(
        entries: impl IntoIterator<Item = (TaskKey, Decision)>,
    ) -> Result<Self, ModelError> {
        let mut decisions = BTreeMap::new();
        for (key, decision) in entries {
            if decisions.insert(key, decision).is_some() {
                return Err(ModelError::DuplicateTask(key));
            }
        }
        Ok(Self { decisions })
    }

    /// Builds an assignment that must cover exactly the scenario's tasks.
    pub fn for_scenario(
        scenario: &Scenario,
        entries: impl IntoIterator<Item = (TaskKey, Decision)>,
    ) -> Result<Self, ModelError> {
        let assignment = Self::from_entries(entries)?;
        assignment.check_matches(scenario)?;
        Ok(assignment)
    }

    /// Pairs `decisions` with the scenario's tasks in `(cell_id, ue_index)` order.
    pub fn from_decisions(scenario: &Scenario, decisions: &[Decision]) -> Result<Self, ModelError> {
        let keys = scenario.task_keys();
        if keys.len() != decisions.len() {
            return Err(ModelError::LengthMismatch {
                expected: keys.len(),
                found: decisions.len(),
            });
        }
        Self::for_scenario(scenario, keys.into_iter().zip(decisions.iter().copied()))
    }

    /// Every task gets the same decision.
    pub fn uniform(scenario: &Scenario, decision: Decision) -> Self {
        Self {
            decisions: scenario
                .task_keys()
                .into_iter()
                .map(|k| (k, decision))
                .collect(),
        }
    }

    /// Errors if the key sets of the assignment and the scenario differ.
    pub fn check_matches(&self, scenario: &Scenario) -> Result<(), ModelError> {
        let keys = scenario.task_keys();
        // Duplicate keys in the scenario itself also count as a mismatch.
        for pair in keys.windows(2) {
            if pair[0] == pair[1] {
                return Err(ModelError::DuplicateTask(pair[0]));
            }
        }
        for key in &keys {
            if !self.decisions.contains_key(key) {
                return Err(ModelError::MissingTask(*key));
            }
        }
        if self.decisions.len() != keys.len() {
            let unknown = self
                .decisions
                .keys()
                .find(|k| keys.binary_search(k).is_err())
                .copied()
                .expect("extra decision exists when lengths differ");
            return Err(ModelError::UnknownTask(unknown));
        }
        Ok(())
    }

    pub fn get(&self, key: TaskKey) -> Option<Decision> {
        self.decisions.get(&key).copied()
    }

    /// Replaces the decision for an existing key. Returns the old decision.
    pub fn set(&mut self, key: TaskKey, decision: Decision) -> Option<Decision> {
        self.decisions
            .get_mut(&key)
            .map(|slot| std::mem::replace(slot, decision))
    }

    /// Decisions in key order.
    pub fn iter(&self) -> impl Iterator<Item = (TaskKey, Decision)> + '_ {
        self.decisions.iter().map(|(k, d)| (*k, *d))
    }

    pub fn len(&self) -> usize {
        self.decisions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decisions.is_empty()
    }

    /// Number of non-REJECT decisions.
    pub fn accepted_count(&self) -> usize {
        self.decisions.values().filter(|d| d.is_accepted()).count()
    }

    pub fn count(&self, decision: Decision) -> usize {
        self.decisions.values().filter(|d| **d == decision).count()
    }
}

/// Resource consumption of an assignment, next to the capacities it draws on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceUsage {
    /// Sum of FEC grants over FEC-assigned tasks, cycles/s.
    pub fec_used: f64,
    pub fec_capacity: f64,
    pub cells: Vec<CellUsage>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellUsage {
    pub cell_id: usize,
    pub nec_used: f64,
    pub nec_capacity: f64,
    pub fronthaul_used: f64,
    pub fronthaul_capacity: f64,
}

/// The output of a solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllocationResult {
    pub solver_name: String,
    /// Number of accepted tasks.
    pub objective: usize,
    /// `objective / total_task_count`.
    pub success_rate: f64,
    pub usage: ResourceUsage,
    pub assignment: Assignment,
    /// Wall-clock solve time. Informational; not serialized, so result files
    /// stay byte-identical across runs.
    #[serde(skip)]
    pub solve_time: Duration,
}

mod wire {
    //! Serialized layouts. Field names are part of the interchange format.

    use serde::{Deserialize, Serialize};

    use super::*;

    #[derive(Serialize, Deserialize)]
    pub struct ScenarioDoc {
        pub fec_capacity: f64,
        pub cells: Vec<CellDoc>,
        #[serde(default)]
        pub metadata: Metadata,
    }

    #[derive(Serialize, Deserialize)]
    pub struct CellDoc {
        pub cell_id: usize,
        pub nec_capacity: f64,
        pub fronthaul_capacity: f64,
        pub ues: Vec<UeDoc>,
    }

    #[derive(Serialize, Deserialize)]
    pub struct UeDoc {
        /// Defaults to the UE's position in `ues[]` when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pub ue_index: Option<usize>,
        pub compute_demand: f64,
        pub data_size: f64,
        pub deadline: f64,
        pub wireless_rate: f64,
        pub fronthaul_rate: f64,
        pub nec_cpu_grant: f64,
        pub fec_cpu_grant: f64,
    }

    impl From<ScenarioDoc> for Scenario {
        fn from(doc: ScenarioDoc) -> Self {
            let cells = doc
                .cells
                .into_iter()
                .map(|c| CellSpec {
                    cell_id: c.cell_id,
                    nec_capacity: c.nec_capacity,
                    fronthaul_capacity: c.fronthaul_capacity,
                    ues: c
                        .ues
                        .into_iter()
                        .enumerate()
                        .map(|(pos, u)| Ue {
                            ue_index: u.ue_index.unwrap_or(pos),
                            task: TaskSpec {
                                compute_demand: u.compute_demand,
                                data_size: u.data_size,
                                deadline: u.deadline,
                            },
                            link: UeLink {
                                wireless_rate: u.wireless_rate,
                                fronthaul_rate: u.fronthaul_rate,
                                nec_cpu_grant: u.nec_cpu_grant,
                                fec_cpu_grant: u.fec_cpu_grant,
                            },
                        })
                        .collect(),
                })
                .collect();
            Scenario {
                cells,
                fec_capacity: doc.fec_capacity,
                metadata: doc.metadata,
            }
        }
    }

    impl From<Scenario> for ScenarioDoc {
        fn from(s: Scenario) -> Self {
            ScenarioDoc {
                fec_capacity: s.fec_capacity,
                cells: s
                    .cells
                    .into_iter()
                    .map(|c| CellDoc {
                        cell_id: c.cell_id,
                        nec_capacity: c.nec_capacity,
                        fronthaul_capacity: c.fronthaul_capacity,
                        ues: c
                            .ues
                            .into_iter()
                            .map(|u| UeDoc {
                                ue_index: Some(u.ue_index),
                                compute_demand: u.task.compute_demand,
                                data_size: u.task.data_size,
                                deadline: u.task.deadline,
                                wireless_rate: u.link.wireless_rate,
                                fronthaul_rate: u.link.fronthaul_rate,
                                nec_cpu_grant: u.link.nec_cpu_grant,
                                fec_cpu_grant: u.link.fec_cpu_grant,
                            })
                            .collect(),
                    })
                    .collect(),
                metadata: s.metadata,
            }
        }
    }

    #[derive(Serialize, Deserialize)]
    pub struct AssignmentDoc {
        pub decisions: Vec<DecisionDoc>,
    }

    #[derive(Serialize, Deserialize)]
    pub struct DecisionDoc {
        pub cell_id: usize,
        pub ue_index: usize,
        pub decision: Decision,
    }

    impl TryFrom<AssignmentDoc> for Assignment {
        type Error = ModelError;

        fn try_from(doc: AssignmentDoc) -> Result<Self, Self::Error> {
            Assignment::from_entries(
                doc.decisions
                    .into_iter()
                    .map(|d| (TaskKey::new(d.cell_id, d.ue_index), d.decision)),
            )
        }
    }

    impl From<Assignment> for AssignmentDoc {
        fn from(a: Assignment) -> Self {
            AssignmentDoc {
                decisions: a
                    .decisions
                    .into_iter()
                    .map(|(k, decision)| DecisionDoc {
                        cell_id: k.cell_id,
                        ue_index: k.ue_index,
                        decision,
                    })
                    .collect(),
            }
        }
    }
}
