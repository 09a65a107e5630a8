use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dyndrf::dynamic::{self, Algorithm};
use dyndrf::generate::{self, AdversarialParams, Family};
use dyndrf::io::{self, RatioReportFile, RunReportFile};
use dyndrf::ratio::{self, ObjectiveSet};
use dyndrf::rational::{parse_rational, Rational};
use dyndrf::Error;

#[derive(Parser)]
#[command(name = "dyndrf", version, about = "Dynamic DRF allocation and competitive-ratio experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file.
    Gen {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        m: usize,
        /// Agent count (ignored for t2, where n = m^2 + 1).
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, value_parser = parse_eps, default_value = "1/100")]
        eps: Rational,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest weight drawn per coordinate (random family).
        #[arg(long, default_value_t = 8)]
        denom_bound: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every step and write the allocation report.
    Allocate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "bisect", value_parser = parse_algo)]
        algo: Algorithm,
        /// Also compute both competitive ratios.
        #[arg(long)]
        ratios: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute per-step competitive ratios.
    Ratio {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "both", value_parser = parse_objective)]
        objective: ObjectiveSet,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every property on one or more instance files.
    Verify {
        #[arg(long = "in", required = true, num_args = 1..)]
        inputs: Vec<PathBuf>,
        /// Audit this run report (from `allocate`) instead of a fresh run;
        /// requires a single `--in`.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse()
}

fn parse_algo(s: &str) -> Result<Algorithm, String> {
    s.parse()
}

fn parse_objective(s: &str) -> Result<ObjectiveSet, String> {
    s.parse()
}

fn parse_eps(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::Internal(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<dyndrf::model::Instance, Error> {
    let parsed = io::parse_instance(&read(path)?)?;
    if parsed.was_normalized() {
        let rows: Vec<String> = parsed.normalized_rows.iter().map(|r| (r + 1).to_string()).collect();
        eprintln!("warning: {}: normalized rows {}", path.display(), rows.join(", "));
    }
    Ok(parsed.instance)
}

fn execute(command: Command) -> Result<(), Error> {
    match command {
        Command::Gen {
            family,
            m,
            n,
            eps,
            seed,
            denom_bound,
            out,
        } => {
            let params = AdversarialParams { m, n, eps, seed, denom_bound };
            let instance = params.generate(family)?;
            let mut note = match family {
                Family::Theorem1 => format!("family t1, m = {m}, n = {n}, eps = {}", params.eps),
                Family::Theorem2 => format!("family t2, m = {m}, eps = {}", params.eps),
                Family::Random => format!("family random, seed = {seed}, denom_bound = {denom_bound}"),
            };
            if family == Family::Theorem2 && !generate::theorem2_hypothesis_holds(m) {
                note.push_str(" (outside the m > 2 hypothesis of the tight bound)");
            }
            emit(out.as_deref(), &io::write_instance(&instance, Some(&note)))
        }
        Command::Allocate {
            input,
            algo,
            ratios,
            out,
        } => {
            let instance = load(&input)?;
            let steps = dynamic::run_with(&instance, algo)?;
            let mut report = RunReportFile::new(&instance, algo, &steps);
            if ratios {
                let r = ratio::ratios_for_run(&instance, &steps, ObjectiveSet::Both)?;
                report = report.with_ratios(RatioReportFile::new(&instance, ObjectiveSet::Both, &r));
            }
            emit(out.as_deref(), &report.to_json())
        }
        Command::Ratio { input, objective, out } => {
            let instance = load(&input)?;
            let report = ratio::ratio_report(&instance, objective)?;
            emit(out.as_deref(), &RatioReportFile::new(&instance, objective, &report).to_json())
        }
        Command::Verify { inputs, report: Some(report) } => {
            let [input] = inputs.as_slice() else {
                return Err(Error::Parse("--report needs exactly one --in file".into()));
            };
            let instance = load(input)?;
            let steps = io::parse_run_report(&read(&report)?)?.to_steps()?;
            let checked = ratio::verify_steps(&instance, steps)?;
            println!("{}: ok ({} steps)", report.display(), checked.steps.len());
            Ok(())
        }
        Command::Verify { inputs, report: None } => {
            let results: Vec<(PathBuf, Result<usize, Error>)> = std::thread::scope(|scope| {
                let handles: Vec<_> = inputs
                    .iter()
                    .map(|path| {
                        scope.spawn(move || {
                            let outcome = load(path).and_then(|instance| {
                                ratio::verify_run(&instance).map(|r| r.steps.len()).map_err(Error::from)
                            });
                            (path.clone(), outcome)
                        })
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("verify thread")).collect()
            });
            let mut worst: Option<Error> = None;
            for (path, outcome) in results {
                match outcome {
                    Ok(steps) => println!("{}: ok ({steps} steps)", path.display()),
                    Err(e) => {
                        println!("{}: {e}", path.display());
                        if worst.as_ref().is_none_or(|w| e.exit_code() > w.exit_code()) {
                            worst = Some(e);
                        }
                    }
                }
            }
            worst.map_or(Ok(()), Err)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
