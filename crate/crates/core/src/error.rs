use std::path::PathBuf;

use thiserror::Error;

use crate::model::TaskKey;

/// Structural problems with model values and assignments.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("{field} must be positive and finite, got {value}")]
    NonPositive { field: &'static str, value: f64 },
    #[error("task {0} appears more than once")]
    DuplicateTask(TaskKey),
    #[error("task {0} has no decision")]
    MissingTask(TaskKey),
    #[error("decision for {0} refers to a task that is not in the scenario")]
    UnknownTask(TaskKey),
    #[error("expected {expected} decisions, found {found}")]
    LengthMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstraintError {
    #[error("invalid input: {field} must be positive and finite, got {value}")]
    InvalidInput { field: &'static str, value: f64 },
    #[error("assignment does not match scenario: {0}")]
    Mismatch(#[from] ModelError),
    #[error("assignment is infeasible ({violations} violations)")]
    Infeasible { violations: usize },
    #[error("scenario has no tasks")]
    EmptyScenario,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("instance too large for exact search: {tasks} tasks, limit {limit}")]
    InstanceTooLarge { tasks: usize, limit: usize },
    #[error("scenario has no tasks")]
    EmptyScenario,
    #[error("scenario is malformed: {0}")]
    InvalidScenario(String),
    /// The solver produced an assignment that fails its own audit. Always a bug.
    #[error("solver {solver} produced an infeasible assignment ({violations} violations)")]
    InternalAudit { solver: String, violations: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("invalid generation parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid sweep spec: {0}")]
    InvalidSpec(String),
    #[error("generation failed at N={ues_per_cell}, seed={seed}: {source}")]
    Generate {
        ues_per_cell: usize,
        seed: u64,
        source: GenError,
    },
    #[error("solve failed at N={ues_per_cell}, seed={seed}: {source}")]
    Solve {
        ues_per_cell: usize,
        seed: u64,
        source: SolveError,
    },
    #[error("cannot emit an empty result table")]
    EmptyResult,
    #[error("writing {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("writing csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Reading or writing one of the structured-text interchange documents.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
}
