use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nfcran::experiment::Algorithm;
use nfcran::scenario::{GenParams, Range};
use nfcran::solvers::{GreedyScoring, SolverMode, DEFAULT_EXACT_TASK_LIMIT};

/// Task allocation between near-edge and far-edge clouds.
///
/// Exit codes: 0 success, 1 usage, 2 I/O or parse error (including an
/// assignment that does not match its scenario), 3 infeasible assignment or
/// solver guard.
#[derive(Debug, Parser)]
#[command(name = "nfcran", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a scenario file from a preset.
    Gen(GenCmd),
    /// Solve a scenario and write the allocation result.
    Solve(SolveCmd),
    /// Audit an assignment (or allocation result) against a scenario.
    Check(CheckCmd),
    /// Run a success-rate sweep and write a CSV table.
    Sweep(SweepCmd),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PresetName {
    Paper,
    Positioning,
}

impl PresetName {
    pub fn as_str(self) -> &'static str {
        match self {
            PresetName::Paper => "paper",
            PresetName::Positioning => "positioning",
        }
    }
}

/// Parses `LOW:HIGH` or a single value.
fn parse_range(s: &str) -> Result<Range, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    match s.split_once(':') {
        Some((lo, hi)) => Ok(Range::new(num(lo)?, num(hi)?)),
        None => Ok(Range::point(num(s)?)),
    }
}

/// Preset selection plus overrides for every generation parameter except
/// `ues_per_cell` and `seed`.
#[derive(Debug, Clone, Args)]
pub struct PresetArgs {
    #[arg(long, value_enum, default_value = "paper")]
    pub preset: PresetName,
    /// Number of cells (RRHs).
    #[arg(long)]
    pub cells: Option<usize>,
    /// Deadline of every task, seconds.
    #[arg(long)]
    pub deadline: Option<f64>,
    /// FEC capacity, cycles/s.
    #[arg(long)]
    pub fec_capacity: Option<f64>,
    /// Draw fields on a log scale.
    #[arg(long)]
    pub log_uniform: bool,
    /// Task data size range, bits (LOW:HIGH).
    #[arg(long, value_parser = parse_range, value_name = "LOW:HIGH")]
    pub data_size: Option<Range>,
    /// Task compute demand range, cycles.
    #[arg(long, value_parser = parse_range, value_name = "LOW:HIGH")]
    pub compute_demand: Option<Range>,
    /// Wireless rate range, bits/s.
    #[arg(long, value_parser = parse_range, value_name = "LOW:HIGH")]
    pub wireless_rate: Option<Range>,
    /// Per-UE fronthaul rate range, bits/s.
    #[arg(long, value_parser = parse_range, value_name = "LOW:HIGH")]
    pub fronthaul_rate: Option<Range>,
    /// NEC CPU grant range, cycles/s.
    #[arg(long, value_parser = parse_range, value_name = "LOW:HIGH")]
    pub nec_cpu_grant: Option<Range>,
    /// FEC CPU grant range, cycles/s.
    #[arg(long, value_parser = parse_range, value_name = "LOW:HIGH")]
    pub fec_cpu_grant: Option<Range>,
    /// Per-cell NEC capacity range, cycles/s.
    #[arg(long, value_parser = parse_range, value_name = "LOW:HIGH")]
    pub nec_capacity: Option<Range>,
    /// Per-cell fronthaul capacity range, bits/s.
    #[arg(long, value_parser = parse_range, value_name = "LOW:HIGH")]
    pub fronthaul_capacity: Option<Range>,
}

impl PresetArgs {
    pub fn params(&self) -> GenParams {
        let mut p = nfcran::scenario::preset(self.preset.as_str()).expect("known preset");
        if let Some(v) = self.cells {
            p.cell_count = v;
        }
        if let Some(v) = self.deadline {
            p.deadline = v;
        }
        if let Some(v) = self.fec_capacity {
            p.fec_capacity = v;
        }
        p.log_uniform |= self.log_uniform;
        let r = &mut p.ranges;
        let overrides = [
            (&mut r.data_size, self.data_size),
            (&mut r.compute_demand, self.compute_demand),
            (&mut r.wireless_rate, self.wireless_rate),
            (&mut r.fronthaul_rate, self.fronthaul_rate),
            (&mut r.nec_cpu_grant, self.nec_cpu_grant),
            (&mut r.fec_cpu_grant, self.fec_cpu_grant),
            (&mut r.nec_capacity, self.nec_capacity),
            (&mut r.fronthaul_capacity, self.fronthaul_capacity),
        ];
        for (slot, value) in overrides {
            if let Some(v) = value {
                *slot = v;
            }
        }
        p
    }
}

#[derive(Debug, Args)]
pub struct GenCmd {
    #[command(flatten)]
    pub preset: PresetArgs,
    /// UEs (tasks) per cell.
    #[arg(long)]
    pub ues_per_cell: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SolverArg {
    Exact,
    Greedy,
    FecOnlyExact,
    FecOnlyGreedy,
}

impl From<SolverArg> for SolverMode {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Exact => SolverMode::Exact,
            SolverArg::Greedy => SolverMode::Greedy,
            SolverArg::FecOnlyExact => SolverMode::FecOnlyExact,
            SolverArg::FecOnlyGreedy => SolverMode::FecOnlyGreedy,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ScoringArg {
    MinFootprint,
    Penalty,
}

impl From<ScoringArg> for GreedyScoring {
    fn from(s: ScoringArg) -> Self {
        match s {
            ScoringArg::MinFootprint => GreedyScoring::MinFootprint,
            ScoringArg::Penalty => GreedyScoring::Penalty,
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveCmd {
    /// Scenario file.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "greedy")]
    pub solver: SolverArg,
    /// Greedy ordering rule.
    #[arg(long, value_enum, default_value = "min-footprint")]
    pub scoring: ScoringArg,
    /// Largest instance the exact solver accepts (clamped to 25).
    #[arg(long, default_value_t = DEFAULT_EXACT_TASK_LIMIT)]
    pub exact_limit: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CheckCmd {
    #[arg(long)]
    pub scenario: PathBuf,
    /// Assignment document, or an allocation result written by `solve`.
    #[arg(long)]
    pub assignment: PathBuf,
    /// Also write the constraint report as JSON.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AlgorithmArg {
    Exact,
    GreedyMinFootprint,
    GreedyPenalty,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Exact => Algorithm::Exact,
            AlgorithmArg::GreedyMinFootprint => Algorithm::GreedyMinFootprint,
            AlgorithmArg::GreedyPenalty => Algorithm::GreedyPenalty,
        }
    }
}

#[derive(Debug, Args)]
pub struct SweepCmd {
    /// Sweep spec as JSON. When given, all other sweep flags except --out,
    /// --detail and --threads are ignored.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[command(flatten)]
    pub preset: PresetArgs,
    /// UEs per cell, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = nfcran::experiment::PAPER_UES_PER_CELL)]
    pub ues_per_cell: Vec<usize>,
    /// Number of seeds per point.
    #[arg(long, default_value_t = nfcran::experiment::DEFAULT_SEED_COUNT)]
    pub seeds: u64,
    /// First seed; seeds are consecutive from here.
    #[arg(long, default_value_t = 0)]
    pub seed_base: u64,
    /// Solvers to run, comma separated.
    #[arg(long = "solver", value_enum, value_delimiter = ',', default_values = ["greedy-min-footprint"])]
    pub solvers: Vec<AlgorithmArg>,
    /// FEC capacity of the FEC-only baseline, cycles/s.
    #[arg(long, default_value_t = nfcran::experiment::PAPER_BASELINE_FEC_CAPACITY)]
    pub baseline_fec_capacity: f64,
    /// Also run the FEC-only baseline with the scenario's own FEC capacity.
    #[arg(long)]
    pub matched_baseline: bool,
    #[arg(long, default_value_t = DEFAULT_EXACT_TASK_LIMIT)]
    pub exact_limit: usize,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write full per-seed results as JSON.
    #[arg(long)]
    pub detail: Option<PathBuf>,
}
