use std::fmt::Write as _;
use std::path::Path;

use serde_json::Value;
use thiserror::Error;

use nfcran::constraints::{self, ConstraintReport, Scope};
use nfcran::experiment::{self, Architecture, SweepResult, SweepSpec};
use nfcran::io;
use nfcran::model::{AllocationResult, Assignment, Scenario};
use nfcran::scenario;
use nfcran::solvers::{self, SolverConfig};
use nfcran::{ConstraintError, FormatError, SolveError, SweepError};

use crate::args::{CheckCmd, Cli, Command, GenCmd, SolveCmd, SweepCmd};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_INFEASIBLE: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Infeasible(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Input(_) => EXIT_INPUT,
            CliError::Infeasible(_) => EXIT_INFEASIBLE,
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::InternalAudit { .. } => CliError::Infeasible(format!("BUG: {e}")),
            SolveError::InstanceTooLarge { .. } => CliError::Infeasible(e.to_string()),
            SolveError::EmptyScenario | SolveError::InvalidScenario(_) => {
                CliError::Input(e.to_string())
            }
        }
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::InvalidSpec(_) => CliError::Usage(e.to_string()),
            SweepError::Solve {
                source: SolveError::InstanceTooLarge { .. } | SolveError::InternalAudit { .. },
                ..
            } => CliError::Infeasible(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen(cmd) => gen(cmd),
        Command::Solve(cmd) => solve(cmd),
        Command::Check(cmd) => check(cmd),
        Command::Sweep(cmd) => sweep(cmd),
    }
}

fn gen(cmd: GenCmd) -> Result<(), CliError> {
    let params = cmd
        .preset
        .params()
        .with_ues_per_cell(cmd.ues_per_cell)
        .with_seed(cmd.seed);
    let scenario = scenario::generate(&params).map_err(|e| CliError::Usage(e.to_string()))?;
    io::write_scenario(&cmd.out, &scenario)?;

    let nec: f64 = scenario.cells.iter().map(|c| c.nec_capacity).sum();
    let fronthaul: f64 = scenario.cells.iter().map(|c| c.fronthaul_capacity).sum();
    println!(
        "wrote {}: preset {}, seed {}, {} cells, {} tasks",
        cmd.out.display(),
        params.preset,
        params.seed,
        scenario.cells.len(),
        scenario.total_task_count()
    );
    println!(
        "  FEC capacity        {:.4e} cycles/s",
        scenario.fec_capacity
    );
    println!("  NEC capacity total  {nec:.4e} cycles/s");
    println!("  fronthaul total     {fronthaul:.4e} bits/s");
    println!("  task deadline       {} s", params.deadline);
    Ok(())
}

fn load_valid_scenario(path: &Path) -> Result<Scenario, CliError> {
    let scenario = io::read_scenario(path)?;
    let report = scenario.validate();
    if !report.is_empty() {
        let mut msg = format!("{}: scenario is malformed", path.display());
        for v in &report.violations {
            let _ = write!(msg, "\n  {} {}: {}", v.location, v.field, v.message);
        }
        return Err(CliError::Input(msg));
    }
    Ok(scenario)
}

fn percent(used: f64, capacity: f64) -> String {
    if capacity > 0.0 {
        format!("{:6.2}%", 100.0 * used / capacity)
    } else {
        "   n/a".to_string()
    }
}

fn print_result(result: &AllocationResult, total: usize) {
    println!("solver        {}", result.solver_name);
    println!("objective     {} / {}", result.objective, total);
    println!("success rate  {:.6}", result.success_rate);
    println!(
        "decisions     FEC {}  NEC {}  REJECT {}",
        result.assignment.count(nfcran::Decision::Fec),
        result.assignment.count(nfcran::Decision::Nec),
        result.assignment.count(nfcran::Decision::Reject)
    );
    println!(
        "solve time    {:.3} ms",
        result.solve_time.as_secs_f64() * 1e3
    );
    let usage = &result.usage;
    println!(
        "FEC           {:.4e} / {:.4e} cycles/s  {}",
        usage.fec_used,
        usage.fec_capacity,
        percent(usage.fec_used, usage.fec_capacity)
    );
    println!("cell    NEC used  NEC util  fronthaul used  fronthaul util");
    for c in &usage.cells {
        println!(
            "{:>4}  {:>10}  {:>8}  {:>14}  {:>14}",
            c.cell_id,
            format!("{:.4e}", c.nec_used),
            percent(c.nec_used, c.nec_capacity),
            format!("{:.4e}", c.fronthaul_used),
            percent(c.fronthaul_used, c.fronthaul_capacity)
        );
    }
}

fn solve(cmd: SolveCmd) -> Result<(), CliError> {
    let scenario = load_valid_scenario(&cmd.input)?;
    let config = SolverConfig::new(cmd.solver.into())
        .with_scoring(cmd.scoring.into())
        .with_exact_task_limit(cmd.exact_limit);
    let result = solvers::solve(&scenario, &config)?;

    // Independent re-audit of exactly what is about to be written.
    let report = constraints::audit(&scenario, &result.assignment)
        .map_err(|e| CliError::Infeasible(format!("BUG: self-audit failed: {e}")))?;
    if !report.feasible {
        return Err(CliError::Infeasible(format!(
            "BUG: solver {} produced {} constraint violations; refusing to write",
            result.solver_name,
            report.violations.len()
        )));
    }

    io::write_json(&cmd.out, &result)?;
    print_result(&result, scenario.total_task_count());
    Ok(())
}

/// Accepts either a bare assignment document or an allocation result.
fn read_assignment(path: &Path) -> Result<Assignment, CliError> {
    let value: Value = io::read_json(path)?;
    let inner = match value {
        Value::Object(mut map) if map.contains_key("assignment") => {
            map.remove("assignment").unwrap()
        }
        other => other,
    };
    serde_json::from_value(inner).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn print_report(report: &ConstraintReport) {
    if report.feasible {
        println!("feasible: all constraints satisfied");
    } else {
        println!("infeasible: {} violations", report.violations.len());
    }
    for v in &report.violations {
        let scope = match v.scope {
            Scope::Task { cell_id, ue_index } => format!("cell {cell_id} ue {ue_index}"),
            Scope::Cell { cell_id } => format!("cell {cell_id}"),
            Scope::Global => "global".to_string(),
        };
        println!(
            "  {:?}  {:<16} measured {:.6e} > bound {:.6e}",
            v.constraint, scope, v.measured, v.bound
        );
    }
    let structural: Vec<String> = report
        .structurally_satisfied
        .iter()
        .map(|t| format!("{t:?}"))
        .collect();
    println!("structurally satisfied: {}", structural.join(", "));
}

fn check(cmd: CheckCmd) -> Result<(), CliError> {
    let scenario = io::read_scenario(&cmd.scenario)?;
    let assignment = read_assignment(&cmd.assignment)?;
    let report = constraints::audit(&scenario, &assignment).map_err(|e| match e {
        ConstraintError::Mismatch(inner) => CliError::Input(format!(
            "{} does not match {}: {inner}",
            cmd.assignment.display(),
            cmd.scenario.display()
        )),
        other => CliError::Input(other.to_string()),
    })?;
    print_report(&report);
    if let Some(path) = &cmd.report {
        io::write_json(path, &report)?;
    }
    if report.feasible {
        Ok(())
    } else {
        Err(CliError::Infeasible(format!(
            "assignment violates {} constraints",
            report.violations.len()
        )))
    }
}

fn sweep_spec(cmd: &SweepCmd) -> Result<SweepSpec, CliError> {
    if let Some(path) = &cmd.spec {
        return Ok(io::read_json(path)?);
    }
    let mut architectures = vec![Architecture::NfcRan, Architecture::CranFecOnly];
    if cmd.matched_baseline {
        architectures.push(Architecture::CranFecOnlyMatched);
    }
    Ok(SweepSpec {
        ues_per_cell_values: cmd.ues_per_cell.clone(),
        seeds: (0..cmd.seeds).map(|i| cmd.seed_base + i).collect(),
        base_params: cmd.preset.params(),
        baseline_fec_capacity: cmd.baseline_fec_capacity,
        solvers_to_run: cmd.solvers.iter().map(|s| (*s).into()).collect(),
        architectures,
        exact_task_limit: cmd.exact_limit,
    })
}

fn print_curves(spec: &SweepSpec, result: &SweepResult) {
    let mut columns = Vec::new();
    for arch in &spec.architectures {
        for solver in &spec.solvers_to_run {
            columns.push((*arch, solver.label()));
        }
    }
    let mut header = format!("{:>6}", "N");
    for (arch, solver) in &columns {
        let _ = write!(header, "  {:>34}", format!("{}/{}", arch.label(), solver));
    }
    println!("{header}");
    for &n in &spec.ues_per_cell_values {
        let mut line = format!("{n:>6}");
        for (arch, solver) in &columns {
            let cell = result
                .row(n, *arch, solver)
                .map(|r| format!("{:.4} ± {:.4}", r.mean_success_rate, r.std_success_rate))
                .unwrap_or_default();
            let _ = write!(line, "  {cell:>34}");
        }
        println!("{line}");
    }
}

fn sweep(cmd: SweepCmd) -> Result<(), CliError> {
    let spec = sweep_spec(&cmd)?;
    spec.validate()?;

    let result = match cmd.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .install(|| experiment::run_sweep(&spec))?,
        None => experiment::run_sweep(&spec)?,
    };

    let echo = serde_json::to_string(&spec).expect("spec serializes");
    let comment = format!(
        "sweep spec (CRAN_FEC_ONLY solves with fec_capacity replaced by baseline_fec_capacity): {echo}"
    );
    experiment::emit_table_with_comment(&result, &cmd.out, Some(&comment))?;
    if let Some(path) = &cmd.detail {
        io::write_json(path, &result)?;
    }
    println!(
        "wrote {} ({} rows, {} seeds per point)",
        cmd.out.display(),
        result.rows.len(),
        spec.seeds.len()
    );
    print_curves(&spec, &result);
    Ok(())
}
