//! Optimizers for the allocation problem.
//!
//! The problem is a multi-dimensional multiple-choice 0-1 knapsack: each task
//! picks exactly one option from {FEC, NEC, REJECT}, options consume vectors
//! of resources (the global FEC pool, the cell's NEC, the cell's fronthaul),
//! and the value of every non-REJECT option is 1.
//!
//! * [`solve_exact`]: depth-first branch and bound, for small instances.
//! * [`solve_greedy`]: one of two greedy MMKP heuristics, for full-size
//!   instances.
//! * [`solve_fec_only`]: either of the above with NEC removed from every
//!   choice set, modelling a C-RAN without near-edge compute.
//!
//! Every solver audits its own output before returning it.

mod exact;
mod greedy;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::constraints::{self, within};
use crate::error::SolveError;
use crate::model::{AllocationResult, Assignment, Decision, Scenario, Target, TaskKey};

/// Default guard on the number of tasks the exact solver accepts.
pub const DEFAULT_EXACT_TASK_LIMIT: usize = 20;
/// The guard is clamped to this value whatever the configuration says.
pub const EXACT_TASK_HARD_CAP: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverMode {
    Exact,
    Greedy,
    FecOnlyExact,
    FecOnlyGreedy,
}

impl SolverMode {
    pub fn is_exact(self) -> bool {
        matches!(self, SolverMode::Exact | SolverMode::FecOnlyExact)
    }

    pub fn is_fec_only(self) -> bool {
        matches!(self, SolverMode::FecOnlyExact | SolverMode::FecOnlyGreedy)
    }
}

/// Ordering rule of the greedy heuristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GreedyScoring {
    /// Sort tasks by their smallest normalized resource footprint, then place
    /// each on its cheapest admissible site that still fits.
    #[default]
    MinFootprint,
    /// Toyoda-style aggregate penalty: repeatedly place the option whose
    /// capacity-relative demand, weighted by current resource usage, is
    /// smallest.
    Penalty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub mode: SolverMode,
    pub exact_task_limit: usize,
    pub greedy_scoring: GreedyScoring,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            mode: SolverMode::Greedy,
            exact_task_limit: DEFAULT_EXACT_TASK_LIMIT,
            greedy_scoring: GreedyScoring::MinFootprint,
        }
    }
}

impl SolverConfig {
    pub fn new(mode: SolverMode) -> Self {
        Self {
            mode,
            ..Self::default()
        }
    }

    pub fn with_scoring(mut self, scoring: GreedyScoring) -> Self {
        self.greedy_scoring = scoring;
        self
    }

    pub fn with_exact_task_limit(mut self, limit: usize) -> Self {
        self.exact_task_limit = limit;
        self
    }

    /// The guard actually enforced, after clamping to the hard cap.
    pub fn effective_task_limit(&self) -> usize {
        if self.exact_task_limit > EXACT_TASK_HARD_CAP {
            log::warn!(
                "exact_task_limit {} exceeds hard cap, using {}",
                self.exact_task_limit,
                EXACT_TASK_HARD_CAP
            );
        }
        self.exact_task_limit.min(EXACT_TASK_HARD_CAP)
    }

    /// Stable label written into results, e.g. `fec-only-greedy-penalty`.
    pub fn label(&self) -> String {
        let prefix = if self.mode.is_fec_only() {
            "fec-only-"
        } else {
            ""
        };
        let algorithm = if self.mode.is_exact() {
            "exact"
        } else {
            match self.greedy_scoring {
                GreedyScoring::MinFootprint => "greedy-min-footprint",
                GreedyScoring::Penalty => "greedy-penalty",
            }
        };
        format!("{prefix}{algorithm}")
    }
}

/// Runs the solver selected by `config.mode`.
pub fn solve(scenario: &Scenario, config: &SolverConfig) -> Result<AllocationResult, SolveError> {
    let start = Instant::now();
    let nec_allowed = !config.mode.is_fec_only();
    let problem = Problem::new(scenario, nec_allowed);
    let decisions = if config.mode.is_exact() {
        let limit = config.effective_task_limit();
        if problem.len() > limit {
            return Err(SolveError::InstanceTooLarge {
                tasks: problem.len(),
                limit,
            });
        }
        exact::search(&problem)
    } else {
        match config.greedy_scoring {
            GreedyScoring::MinFootprint => greedy::min_footprint(&problem),
            GreedyScoring::Penalty => greedy::penalty(&problem),
        }
    };
    finish(
        scenario,
        &problem,
        decisions,
        config.label(),
        start.elapsed(),
    )
}

/// Exact optimum over the full choice set {FEC, NEC, REJECT}.
///
/// Among optimal assignments the lexicographically first decision vector
/// (per task in key order, FEC < NEC < REJECT) is returned.
pub fn solve_exact(
    scenario: &Scenario,
    config: &SolverConfig,
) -> Result<AllocationResult, SolveError> {
    solve(
        scenario,
        &SolverConfig {
            mode: SolverMode::Exact,
            ..*config
        },
    )
}

/// Greedy heuristic over the full choice set, using `config.greedy_scoring`.
pub fn solve_greedy(
    scenario: &Scenario,
    config: &SolverConfig,
) -> Result<AllocationResult, SolveError> {
    solve(
        scenario,
        &SolverConfig {
            mode: SolverMode::Greedy,
            ..*config
        },
    )
}

/// The FEC-only baseline. Uses exact search when `config.mode` is an exact
/// mode and the greedy heuristic otherwise. Capacities are taken from the
/// scenario unchanged.
pub fn solve_fec_only(
    scenario: &Scenario,
    config: &SolverConfig,
) -> Result<AllocationResult, SolveError> {
    let mode = if config.mode.is_exact() {
        SolverMode::FecOnlyExact
    } else {
        SolverMode::FecOnlyGreedy
    };
    solve(scenario, &SolverConfig { mode, ..*config })
}

fn finish(
    scenario: &Scenario,
    problem: &Problem,
    decisions: Vec<Decision>,
    solver_name: String,
    solve_time: Duration,
) -> Result<AllocationResult, SolveError> {
    let total = problem.len();
    if total == 0 {
        return Err(SolveError::EmptyScenario);
    }
    let assignment = Assignment::from_entries(problem.keys.iter().copied().zip(decisions))
        .map_err(|e| SolveError::InvalidScenario(e.to_string()))?;
    let report =
        constraints::audit(scenario, &assignment).map_err(|_| SolveError::InternalAudit {
            solver: solver_name.clone(),
            violations: 0,
        })?;
    if !report.feasible {
        return Err(SolveError::InternalAudit {
            solver: solver_name,
            violations: report.violations.len(),
        });
    }
    let usage = constraints::resource_usage(scenario, &assignment).expect("keys checked by audit");
    let objective = assignment.accepted_count();
    Ok(AllocationResult {
        solver_name,
        objective,
        success_rate: objective as f64 / total as f64,
        usage,
        assignment,
        solve_time,
    })
}

/// One task flattened for the solvers.
#[derive(Debug, Clone, Copy)]
struct Item {
    /// Dense index of the serving cell.
    cell: usize,
    fec_grant: f64,
    nec_grant: f64,
    fronthaul_rate: f64,
    /// Meets its deadline on the FEC (C1).
    fec_ok: bool,
    /// Meets its deadline on the NEC (C2) and NEC is in the choice set.
    nec_ok: bool,
}

impl Item {
    fn admissible(&self, target: Target) -> bool {
        match target {
            Target::Fec => self.fec_ok,
            Target::Nec => self.nec_ok,
        }
    }
}

/// Solver view of a scenario: tasks in key order, cells densely indexed.
#[derive(Debug, Clone)]
struct Problem {
    keys: Vec<TaskKey>,
    items: Vec<Item>,
    fec_capacity: f64,
    nec_capacity: Vec<f64>,
    fronthaul_capacity: Vec<f64>,
}

impl Problem {
    fn new(scenario: &Scenario, nec_allowed: bool) -> Self {
        let cells = scenario.sorted_cells();
        let dense = |cell_id: usize| {
            cells
                .binary_search_by_key(&cell_id, |c| c.cell_id)
                .expect("task cell is in scenario")
        };
        let tasks = scenario.tasks();
        let keys = tasks.iter().map(|t| t.key).collect();
        let items = tasks
            .iter()
            .map(|t| Item {
                cell: dense(t.key.cell_id),
                fec_grant: t.link().fec_cpu_grant,
                nec_grant: t.link().nec_cpu_grant,
                fronthaul_rate: t.link().fronthaul_rate,
                fec_ok: constraints::is_task_feasible_on(Target::Fec, t.task(), t.link()),
                nec_ok: nec_allowed
                    && constraints::is_task_feasible_on(Target::Nec, t.task(), t.link()),
            })
            .collect();
        Self {
            keys,
            items,
            fec_capacity: scenario.fec_capacity,
            nec_capacity: cells.iter().map(|c| c.nec_capacity).collect(),
            fronthaul_capacity: cells.iter().map(|c| c.fronthaul_capacity).collect(),
        }
    }

    fn len(&self) -> usize {
        self.items.len()
    }
}

/// Running resource sums.
#[derive(Debug, Clone)]
struct Usage {
    fec: f64,
    nec: Vec<f64>,
    fronthaul: Vec<f64>,
}

impl Usage {
    fn empty(problem: &Problem) -> Self {
        Self {
            fec: 0.0,
            nec: vec![0.0; problem.nec_capacity.len()],
            fronthaul: vec![0.0; problem.fronthaul_capacity.len()],
        }
    }

    fn fits(&self, problem: &Problem, item: &Item, target: Target) -> bool {
        match target {
            Target::Fec => {
                within(self.fec + item.fec_grant, problem.fec_capacity)
                    && within(
                        self.fronthaul[item.cell] + item.fronthaul_rate,
                        problem.fronthaul_capacity[item.cell],
                    )
            }
            Target::Nec => within(
                self.nec[item.cell] + item.nec_grant,
                problem.nec_capacity[item.cell],
            ),
        }
    }

    fn add(&mut self, item: &Item, target: Target) {
        match target {
            Target::Fec => {
                self.fec += item.fec_grant;
                self.fronthaul[item.cell] += item.fronthaul_rate;
            }
            Target::Nec => self.nec[item.cell] += item.nec_grant,
        }
    }
}
