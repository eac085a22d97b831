use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use beurling_lab::config::{Experiment, ExperimentConfig, OutputPaths};
use beurling_lab::criteria::{self, Criterion, CRITERIA};
use beurling_lab::experiments::Outcome;
use beurling_lab::report::{fmt_g17, sort_rows, ReportRow, Verdict};
use beurling_lab::{init_threads, write_outputs};
use clap::{Parser, Subcommand};

/// Numerical experiments on Beurling-type uncertainty functionals.
#[derive(Parser)]
#[command(name = "beurling-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// CSV report path.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// JSON report path.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Directory for `(x, y)` plot files.
    #[arg(long = "xy", global = true)]
    xy_dir: Option<PathBuf>,
    /// Write the equivalent experiment config (TOML) here.
    #[arg(long, global = true)]
    save_config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    #[command(flatten)]
    Experiment(Experiment),
    /// Run an experiment config file.
    Run { config: PathBuf },
    /// Run acceptance criteria and write `run-all.csv` and `run-all.json`.
    RunAll {
        /// Criterion numbers or ids, comma separated; all by default.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        #[arg(long, default_value = "reports")]
        out: PathBuf,
    },
    /// Run one acceptance criterion.
    Check { criterion: String },
}

fn print_outcome(o: &Outcome) {
    for note in &o.notes {
        println!("# {note}");
    }
    let mut rows = o.rows.clone();
    sort_rows(&mut rows);
    for r in &rows {
        print_row(r);
    }
}

fn print_row(r: &ReportRow) {
    println!(
        "{}\t{}\tmeasured={}\treference={}\trel_err={}\t{}",
        r.experiment_id,
        r.params,
        fmt_g17(r.measured),
        fmt_g17(r.reference),
        fmt_g17(r.rel_err),
        r.verdict.as_str()
    );
}

fn selected(only: &[String]) -> Result<Vec<&'static Criterion>> {
    if only.is_empty() {
        return Ok(CRITERIA.iter().collect());
    }
    only.iter().map(|k| criteria::find(k)).collect()
}

fn run(cli: Cli) -> Result<Verdict> {
    let outputs = OutputPaths { csv: cli.csv.clone(), json: cli.json.clone(), xy_dir: cli.xy_dir.clone() };
    match cli.command {
        Command::Experiment(e) => {
            e.validate()?;
            let name = e.name();
            if let Some(p) = &cli.save_config {
                let c = ExperimentConfig { id: name.clone(), output: outputs.clone(), experiment: e.clone() };
                beurling_lab::report::write_file(p, &c.to_toml()?)?;
            }
            let o = e.run()?;
            print_outcome(&o);
            write_outputs(&o, cli.csv.as_deref(), cli.json.as_deref(), cli.xy_dir.as_deref())?;
            Ok(o.verdict())
        }
        Command::Run { config } => {
            let c = ExperimentConfig::load(&config)?;
            let o = c.run()?;
            print_outcome(&o);
            let pick = |cli: &Option<PathBuf>, cfg: &Option<PathBuf>| cli.clone().or_else(|| cfg.clone());
            write_outputs(
                &o,
                pick(&cli.csv, &c.output.csv).as_deref(),
                pick(&cli.json, &c.output.json).as_deref(),
                pick(&cli.xy_dir, &c.output.xy_dir).as_deref(),
            )?;
            Ok(o.verdict())
        }
        Command::RunAll { only, out } => {
            let chosen = selected(&only)?;
            let mut all = Outcome::default();
            for c in &chosen {
                let t = criteria::run_timed(c)?;
                let v = t.outcome.verdict();
                eprintln!("criterion {}: {} {} ({:.1} s)", c.number, v.as_str(), c.title, t.elapsed.as_secs_f64());
                all.merge(t.outcome);
            }
            let csv = cli.csv.unwrap_or_else(|| out.join("run-all.csv"));
            let json = cli.json.unwrap_or_else(|| out.join("run-all.json"));
            write_outputs(&all, Some(&csv), Some(&json), cli.xy_dir.as_deref())?;
            print_outcome(&all);
            Ok(all.verdict())
        }
        Command::Check { criterion } => {
            let c = criteria::find(&criterion)?;
            let t = criteria::run_timed(c)?;
            print_outcome(&t.outcome);
            let v = t.outcome.verdict();
            println!("criterion {}: {} {} ({:.1} s)", c.number, v.as_str(), c.title, t.elapsed.as_secs_f64());
            write_outputs(&t.outcome, cli.csv.as_deref(), cli.json.as_deref(), cli.xy_dir.as_deref())?;
            Ok(v)
        }
    }
}

fn main() -> ExitCode {
    init_threads();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli).context("beurling-lab") {
        Ok(v) => ExitCode::from(v.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
