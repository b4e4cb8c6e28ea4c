use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use radcomp_cli::commands::{self, CompareSummary, FlowSummary, SolveSummary};
use radcomp_cli::output::{sig6, Document, Meta, Record};
use radcomp_cli::verify::{self, CriterionRow};
use radcomp_cli::{CliError, Format, RunConfig};

#[derive(Parser)]
#[command(name = "radcomp", version, about = "Radial bound states and spectral comparison checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Run configuration (dotted `key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Output format; overrides `output.format`.
    #[arg(long)]
    format: Option<Format>,
    /// Output file; overrides `output.path`. Standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Levels per l; overrides `problemN.levels`.
    #[arg(long)]
    levels: Option<usize>,
    /// Interpolation grid points; overrides `flow.grid`.
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Lowest levels of problem 1.
    Solve(Common),
    /// Endpoint levels of two problems in a shared basis, with ordering verdicts.
    Compare(Common),
    /// Levels, Hellmann-Feynman expectations and finite differences along the linear path.
    Flow(Common),
    /// Run the built-in acceptance suite.
    Verify {
        /// Print criterion names without running them.
        #[arg(long)]
        list: bool,
        #[arg(long)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(c: &Common) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(&c.config)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", c.config.display())))?;
    Ok(RunConfig::parse(&text)?.with_overrides(c.levels, c.grid, c.format, c.out.clone())?)
}

fn emit<R: Record, S: Serialize>(doc: &Document<R, S>, format: Format, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let mut file = fs::File::create(path)
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
            doc.write(format, &mut file)?;
        }
        None => doc.write(format, &mut io::stdout().lock())?,
    }
    Ok(())
}

fn solve(c: &Common) -> Result<(), CliError> {
    let cfg = load(c)?;
    let doc = commands::solve(&cfg)?;
    emit(&doc, cfg.format, cfg.out.as_ref())?;
    let SolveSummary { lowest } = doc.summary;
    eprintln!("{} levels, lowest E = {}", doc.rows.len(), sig6(lowest));
    Ok(())
}

fn compare(c: &Common) -> Result<(), CliError> {
    let cfg = load(c)?;
    let doc = commands::compare(&cfg)?;
    emit(&doc, cfg.format, cfg.out.as_ref())?;
    let CompareSummary { psd_gap, hypothesis_holds, all_ordered, potential, kinetic } = &doc.summary;
    eprintln!(
        "psd gap {} (H2 - H1 {}), levels ordered: {all_ordered}",
        sig6(*psd_gap),
        if *hypothesis_holds { "positive semidefinite" } else { "indefinite" }
    );
    eprintln!(
        "V2 - V1 min {} at r = {} ({}); T2 - T1 min {} at p = {} ({})",
        sig6(potential.min_difference),
        sig6(potential.at),
        if potential.ordered { "ordered" } else { "not ordered" },
        sig6(kinetic.min_difference),
        sig6(kinetic.at),
        if kinetic.ordered { "ordered" } else { "not ordered" },
    );
    Ok(())
}

fn flow(c: &Common) -> Result<(), CliError> {
    let cfg = load(c)?;
    let doc = commands::flow(&cfg)?;
    emit(&doc, cfg.format, cfg.out.as_ref())?;
    let FlowSummary { psd_gap, max_residual, min_hf, monotone } = doc.summary;
    eprintln!(
        "max |fd - hf| {}, min hf {}, psd gap {}, monotone: {monotone}",
        sig6(max_residual),
        sig6(min_hf),
        sig6(psd_gap)
    );
    Ok(())
}

fn run_verify(list: bool, format: Option<Format>, out: Option<PathBuf>) -> Result<(), CliError> {
    let criteria = verify::criteria();
    if list {
        let mut stdout = io::stdout().lock();
        for c in &criteria {
            writeln!(stdout, "{} {} (limit {} s)", c.id, c.name, c.time_limit)?;
        }
        return Ok(());
    }
    // The report goes to stdout unless stdout carries a table.
    let table_on_stdout = format.is_some() && out.is_none();
    let mut rows: Vec<CriterionRow> = Vec::new();
    for c in &criteria {
        let row = c.run();
        if table_on_stdout {
            eprintln!("{}", row.line());
        } else {
            println!("{}", row.line());
        }
        rows.push(row);
    }
    let failed = rows.iter().filter(|r| !r.passed).count();
    if format.is_some() || out.is_some() {
        let doc = Document::new(Meta::new("verify", Default::default()), rows, failed);
        emit(&doc, format.unwrap_or(Format::Csv), out.as_ref())?;
    }
    if failed > 0 {
        return Err(CliError::Verification {
            failed,
            total: criteria.len(),
        });
    }
    eprintln!("all {} criteria passed", criteria.len());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Solve(c) => solve(c),
        Command::Compare(c) => compare(c),
        Command::Flow(c) => flow(c),
        Command::Verify { list, format, out } => run_verify(*list, *format, out.clone()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("radcomp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
