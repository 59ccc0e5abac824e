//! Success rate versus offered load, for the two-tier architecture and for a
//! C-RAN that only has the far-edge cloud.
//!
//! For every `(N, seed)` pair one scenario is drawn. It is solved as is (the
//! `NFC_RAN` rows), then with NEC removed and the FEC capacity replaced by
//! the baseline capacity (`CRAN_FEC_ONLY`). Optionally the same FEC-only
//! solve is repeated with the scenario's own FEC capacity
//! (`CRAN_FEC_ONLY_MATCHED`), which isolates the effect of the NEC tier.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::SweepError;
use crate::scenario::{self, GenParams};
use crate::solvers::{self, GreedyScoring, SolverConfig, SolverMode, DEFAULT_EXACT_TASK_LIMIT};

/// Baseline FEC capacity for the FEC-only C-RAN: 10^7 GHz.
pub const PAPER_BASELINE_FEC_CAPACITY: f64 = 1e16;
pub const PAPER_UES_PER_CELL: [usize; 5] = [10, 20, 30, 40, 50];
pub const DEFAULT_SEED_COUNT: u64 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Architecture {
    #[serde(rename = "NFC_RAN")]
    NfcRan,
    /// FEC only, with the baseline FEC capacity.
    #[serde(rename = "CRAN_FEC_ONLY")]
    CranFecOnly,
    /// FEC only, with the scenario's own FEC capacity.
    #[serde(rename = "CRAN_FEC_ONLY_MATCHED")]
    CranFecOnlyMatched,
}

impl Architecture {
    pub fn label(self) -> &'static str {
        match self {
            Architecture::NfcRan => "NFC_RAN",
            Architecture::CranFecOnly => "CRAN_FEC_ONLY",
            Architecture::CranFecOnlyMatched => "CRAN_FEC_ONLY_MATCHED",
        }
    }
}

/// Solver family run in a sweep; the architecture decides whether NEC is
/// available to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Exact,
    GreedyMinFootprint,
    GreedyPenalty,
}

impl Algorithm {
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Exact => "exact",
            Algorithm::GreedyMinFootprint => "greedy-min-footprint",
            Algorithm::GreedyPenalty => "greedy-penalty",
        }
    }

    pub fn config(self, fec_only: bool, exact_task_limit: usize) -> SolverConfig {
        let (mode, scoring) = match (self, fec_only) {
            (Algorithm::Exact, false) => (SolverMode::Exact, GreedyScoring::default()),
            (Algorithm::Exact, true) => (SolverMode::FecOnlyExact, GreedyScoring::default()),
            (Algorithm::GreedyMinFootprint, false) => {
                (SolverMode::Greedy, GreedyScoring::MinFootprint)
            }
            (Algorithm::GreedyMinFootprint, true) => {
                (SolverMode::FecOnlyGreedy, GreedyScoring::MinFootprint)
            }
            (Algorithm::GreedyPenalty, false) => (SolverMode::Greedy, GreedyScoring::Penalty),
            (Algorithm::GreedyPenalty, true) => (SolverMode::FecOnlyGreedy, GreedyScoring::Penalty),
        };
        SolverConfig::new(mode)
            .with_scoring(scoring)
            .with_exact_task_limit(exact_task_limit)
    }
}

fn default_architectures() -> Vec<Architecture> {
    vec![Architecture::NfcRan, Architecture::CranFecOnly]
}

fn default_exact_limit() -> usize {
    DEFAULT_EXACT_TASK_LIMIT
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub ues_per_cell_values: Vec<usize>,
    pub seeds: Vec<u64>,
    /// Generation parameters; `ues_per_cell` and `seed` are overridden per cell.
    pub base_params: GenParams,
    /// FEC capacity of the `CRAN_FEC_ONLY` baseline, cycles/s.
    pub baseline_fec_capacity: f64,
    pub solvers_to_run: Vec<Algorithm>,
    #[serde(default = "default_architectures")]
    pub architectures: Vec<Architecture>,
    #[serde(default = "default_exact_limit")]
    pub exact_task_limit: usize,
}

impl SweepSpec {
    /// N = 10..50 step 10, seeds 0..20, the `paper` preset, greedy
    /// min-footprint, both architectures.
    pub fn paper() -> Self {
        Self {
            ues_per_cell_values: PAPER_UES_PER_CELL.to_vec(),
            seeds: (0..DEFAULT_SEED_COUNT).collect(),
            base_params: scenario::paper_preset(),
            baseline_fec_capacity: PAPER_BASELINE_FEC_CAPACITY,
            solvers_to_run: vec![Algorithm::GreedyMinFootprint],
            architectures: default_architectures(),
            exact_task_limit: DEFAULT_EXACT_TASK_LIMIT,
        }
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        let bad = |msg: &str| Err(SweepError::InvalidSpec(msg.to_string()));
        if self.ues_per_cell_values.is_empty() {
            return bad("ues_per_cell_values is empty");
        }
        if self.ues_per_cell_values.contains(&0) {
            return bad("ues_per_cell_values must be >= 1");
        }
        if self.seeds.is_empty() {
            return bad("seeds is empty");
        }
        if self.solvers_to_run.is_empty() {
            return bad("solvers_to_run is empty");
        }
        if self.architectures.is_empty() {
            return bad("architectures is empty");
        }
        if !(self.baseline_fec_capacity.is_finite() && self.baseline_fec_capacity > 0.0) {
            return bad("baseline_fec_capacity must be positive");
        }
        self.base_params
            .validate()
            .map_err(|e| SweepError::InvalidSpec(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedRate {
    pub seed: u64,
    pub objective: usize,
    pub success_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub ues_per_cell: usize,
    pub architecture: Architecture,
    pub solver: String,
    pub mean_success_rate: f64,
    /// Sample standard deviation (n - 1 denominator); 0 for a single seed.
    pub std_success_rate: f64,
    /// In the order of `SweepSpec::seeds`.
    pub per_seed: Vec<SeedRate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    /// Sorted by `(ues_per_cell, architecture label, solver)`.
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// `(N, mean)` points for one architecture and solver, ascending in N.
    pub fn curve(&self, architecture: Architecture, solver: &str) -> Vec<(usize, f64)> {
        self.rows
            .iter()
            .filter(|r| r.architecture == architecture && r.solver == solver)
            .map(|r| (r.ues_per_cell, r.mean_success_rate))
            .collect()
    }

    pub fn row(
        &self,
        ues_per_cell: usize,
        architecture: Architecture,
        solver: &str,
    ) -> Option<&SweepRow> {
        self.rows.iter().find(|r| {
            r.ues_per_cell == ues_per_cell && r.architecture == architecture && r.solver == solver
        })
    }
}

/// One solved `(N, seed, architecture, solver)` combination.
#[derive(Debug, Clone, PartialEq)]
pub struct CellOutcome {
    pub ues_per_cell: usize,
    pub seed: u64,
    pub architecture: Architecture,
    pub solver: String,
    pub objective: usize,
    pub success_rate: f64,
}

/// Solves every architecture and solver for a single `(N, seed)` pair.
pub fn run_cell(
    spec: &SweepSpec,
    ues_per_cell: usize,
    seed: u64,
) -> Result<Vec<CellOutcome>, SweepError> {
    let params = spec
        .base_params
        .clone()
        .with_ues_per_cell(ues_per_cell)
        .with_seed(seed);
    let scenario = scenario::generate(&params).map_err(|source| SweepError::Generate {
        ues_per_cell,
        seed,
        source,
    })?;

    let mut outcomes = Vec::new();
    for &architecture in &spec.architectures {
        let (instance, fec_only) = match architecture {
            Architecture::NfcRan => (scenario.clone(), false),
            Architecture::CranFecOnly => {
                let mut baseline = scenario.clone();
                baseline.fec_capacity = spec.baseline_fec_capacity;
                (baseline, true)
            }
            Architecture::CranFecOnlyMatched => (scenario.clone(), true),
        };
        for &algorithm in &spec.solvers_to_run {
            let config = algorithm.config(fec_only, spec.exact_task_limit);
            let result =
                solvers::solve(&instance, &config).map_err(|source| SweepError::Solve {
                    ues_per_cell,
                    seed,
                    source,
                })?;
            outcomes.push(CellOutcome {
                ues_per_cell,
                seed,
                architecture,
                solver: algorithm.label().to_string(),
                objective: result.objective,
                success_rate: result.success_rate,
            });
        }
    }
    Ok(outcomes)
}

/// Mean and sample standard deviation; the deviation of one sample is 0.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

/// Runs the whole sweep. `(N, seed)` cells are solved in parallel; the
/// result does not depend on scheduling.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult, SweepError> {
    spec.validate()?;
    let cells: Vec<(usize, u64)> = spec
        .ues_per_cell_values
        .iter()
        .flat_map(|&n| spec.seeds.iter().map(move |&s| (n, s)))
        .collect();
    let outcomes: Vec<Vec<CellOutcome>> = cells
        .par_iter()
        .map(|&(n, seed)| run_cell(spec, n, seed))
        .collect::<Result<_, _>>()?;

    let seed_position: BTreeMap<u64, usize> = spec
        .seeds
        .iter()
        .enumerate()
        .map(|(i, s)| (*s, i))
        .collect();
    type RowKey = (usize, &'static str, String);
    let mut groups: BTreeMap<RowKey, (Architecture, Vec<(usize, SeedRate)>)> = BTreeMap::new();
    for outcome in outcomes.into_iter().flatten() {
        let key = (
            outcome.ues_per_cell,
            outcome.architecture.label(),
            outcome.solver.clone(),
        );
        groups
            .entry(key)
            .or_insert_with(|| (outcome.architecture, Vec::new()))
            .1
            .push((
                seed_position[&outcome.seed],
                SeedRate {
                    seed: outcome.seed,
                    objective: outcome.objective,
                    success_rate: outcome.success_rate,
                },
            ));
    }

    let rows = groups
        .into_iter()
        .map(|((ues_per_cell, _, solver), (architecture, mut rates))| {
            rates.sort_by_key(|(pos, _)| *pos);
            let per_seed: Vec<SeedRate> = rates.into_iter().map(|(_, r)| r).collect();
            let values: Vec<f64> = per_seed.iter().map(|r| r.success_rate).collect();
            let (mean, std) = mean_std(&values);
            SweepRow {
                ues_per_cell,
                architecture,
                solver,
                mean_success_rate: mean,
                std_success_rate: std,
                per_seed,
            }
        })
        .collect();
    Ok(SweepResult { rows })
}

pub const TABLE_HEADER: [&str; 6] = [
    "ues_per_cell",
    "architecture",
    "solver",
    "mean_success_rate",
    "std_success_rate",
    "n_seeds",
];

/// Writes the result table, optionally preceded by one `# ` comment line.
pub fn write_table<W: Write>(
    result: &SweepResult,
    mut out: W,
    comment: Option<&str>,
) -> Result<(), SweepError> {
    if result.rows.is_empty() {
        return Err(SweepError::EmptyResult);
    }
    if let Some(comment) = comment {
        writeln!(out, "# {}", comment.replace('\n', " ")).map_err(|source| SweepError::Io {
            path: Default::default(),
            source,
        })?;
    }
    let mut rows: Vec<&SweepRow> = result.rows.iter().collect();
    rows.sort_by(|a, b| {
        (a.ues_per_cell, a.architecture.label(), &a.solver).cmp(&(
            b.ues_per_cell,
            b.architecture.label(),
            &b.solver,
        ))
    });

    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(TABLE_HEADER)?;
    for row in rows {
        writer.write_record([
            row.ues_per_cell.to_string(),
            row.architecture.label().to_string(),
            row.solver.clone(),
            format!("{:.6}", row.mean_success_rate),
            format!("{:.6}", row.std_success_rate),
            row.per_seed.len().to_string(),
        ])?;
    }
    writer.flush().map_err(|source| SweepError::Io {
        path: Default::default(),
        source,
    })?;
    Ok(())
}

/// Writes the result table to `path`. An empty result is an error and leaves
/// no file behind.
pub fn emit_table(result: &SweepResult, path: &Path) -> Result<(), SweepError> {
    emit_table_with_comment(result, path, None)
}

pub fn emit_table_with_comment(
    result: &SweepResult,
    path: &Path,
    comment: Option<&str>,
) -> Result<(), SweepError> {
    if result.rows.is_empty() {
        return Err(SweepError::EmptyResult);
    }
    let io_err = |source| SweepError::Io {
        path: path.to_path_buf(),
        source,
    };
    // Render fully before touching the filesystem.
    let mut buffer = Vec::new();
    write_table(result, &mut buffer, comment)?;
    let mut file = BufWriter::new(File::create(path).map_err(io_err)?);
    file.write_all(&buffer).map_err(io_err)?;
    file.flush().map_err(io_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_spec() -> SweepSpec {
        SweepSpec {
            ues_per_cell_values: vec![2],
            seeds: vec![5],
            base_params: scenario::paper_preset(),
            baseline_fec_capacity: PAPER_BASELINE_FEC_CAPACITY,
            solvers_to_run: vec![Algorithm::GreedyMinFootprint, Algorithm::Exact],
            architectures: default_architectures(),
            exact_task_limit: DEFAULT_EXACT_TASK_LIMIT,
        }
    }

    #[test]
    fn one_point_two_architectures() {
        let spec = tiny_spec();
        let result = run_sweep(&spec).unwrap();
        assert_eq!(result.rows.len(), 2 * spec.solvers_to_run.len());
        for row in &result.rows {
            assert_eq!(row.std_success_rate, 0.0);
            assert_eq!(row.per_seed.len(), 1);
        }
    }

    #[test]
    fn mean_std_definitions() {
        assert_eq!(mean_std(&[0.5]), (0.5, 0.0));
        let (m, s) = mean_std(&[1.0, 0.0]);
        assert_eq!(m, 0.5);
        assert!((s - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn spec_validation() {
        let mut spec = tiny_spec();
        spec.seeds.clear();
        assert!(matches!(run_sweep(&spec), Err(SweepError::InvalidSpec(_))));
        let mut spec = tiny_spec();
        spec.baseline_fec_capacity = 0.0;
        assert!(spec.validate().is_err());
        let mut spec = tiny_spec();
        spec.ues_per_cell_values = vec![0];
        assert!(spec.validate().is_err());
    }

    #[test]
    fn solve_errors_are_tagged() {
        let mut spec = tiny_spec();
        spec.ues_per_cell_values = vec![5];
        spec.solvers_to_run = vec![Algorithm::Exact];
        let err = run_sweep(&spec).unwrap_err();
        assert!(matches!(
            err,
            SweepError::Solve {
                ues_per_cell: 5,
                seed: 5,
                ..
            }
        ));
    }

    #[test]
    fn table_layout() {
        let spec = SweepSpec {
            solvers_to_run: vec![Algorithm::GreedyMinFootprint],
            ..tiny_spec()
        };
        let result = run_sweep(&spec).unwrap();
        let mut out = Vec::new();
        write_table(&result, &mut out, None).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], TABLE_HEADER.join(","));
        assert!(lines[1].starts_with("2,CRAN_FEC_ONLY,greedy-min-footprint,"));
        assert!(lines[2].starts_with("2,NFC_RAN,greedy-min-footprint,"));

        let mut out = Vec::new();
        write_table(&result, &mut out, Some("baseline")).unwrap();
        assert!(String::from_utf8(out).unwrap().starts_with("# baseline\n"));
    }

    #[test]
    fn empty_result_writes_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let err = emit_table(&SweepResult { rows: vec![] }, &path).unwrap_err();
        assert!(matches!(err, SweepError::EmptyResult));
        assert!(!path.exists());
    }
}
