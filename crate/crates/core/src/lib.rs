//! Task allocation for a C-RAN extended with two tiers of edge compute: a
//! small near-edge cloud (NEC) in every remote radio head and a large
//! far-edge cloud (FEC) next to the BBU pool.
//!
//! Each UE offloads one task. A task may run on the FEC (uplink, then
//! fronthaul, then execution), on its own cell's NEC (uplink, then
//! execution) or be rejected. The goal is to accept as many tasks as
//! possible while meeting every deadline and every compute and fronthaul
//! capacity.
//!
//! * [`model`]: tasks, links, cells, scenarios, assignments.
//! * [`constraints`]: latency formulas and the feasibility audit.
//! * [`solvers`]: exact branch and bound, greedy heuristics, FEC-only baseline.
//! * [`scenario`]: seeded generation from parameter presets.
//! * [`experiment`]: success-rate sweeps against load.
//!
//! ```
//! use nfcran::scenario::{generate, paper_preset};
//! use nfcran::solvers::{solve, SolverConfig};
//! use nfcran::constraints::audit;
//!
//! let scenario = generate(&paper_preset().with_ues_per_cell(10).with_seed(42)).unwrap();
//! let result = solve(&scenario, &SolverConfig::default()).unwrap();
//! assert!(audit(&scenario, &result.assignment).unwrap().feasible);
//! assert!((0.0..=1.0).contains(&result.success_rate));
//! ```

pub mod constraints;
pub mod error;
pub mod experiment;
pub mod io;
pub mod model;
pub mod scenario;
pub mod solvers;

pub use error::{ConstraintError, FormatError, GenError, ModelError, SolveError, SweepError};
pub use model::{
    AllocationResult, Assignment, CellSpec, Decision, Scenario, Target, TaskKey, TaskSpec, Ue,
    UeLink,
};
