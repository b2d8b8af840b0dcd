//! The `desdiag` command line.
//!
//! Exit codes: 0 when diagnosable (or the command succeeded), 1 when not
//! diagnosable, rejected or synthesis failed, 2 on usage or input errors.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::automata::{
    compose_all, fault_split, project, Automaton, ModularSystem, Module,
};
use crate::diagnosability::{
    build_verifier, check_local, check_modular, check_virtual, indeterminate_cycles, Progress,
};
use crate::io::{automaton_dot, serialize_fsm, verifier_dot, FsmDocument, Report, VerifierSummary};
use crate::structural::{analyze_pair_with, AnalysisMode};
use crate::synthesis::{synthesize_exhaustive, synthesize_greedy, Partition, DEFAULT_MAX_MODULES};

#[derive(Debug, Parser)]
#[command(name = "desdiag", version, about = "Diagnosability of modular discrete-event systems")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for the analyses (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Synchronous composition of several automata.
    Compose {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Natural projection onto a set of events.
    Project {
        file: PathBuf,
        /// Comma-separated events to keep.
        #[arg(long, value_delimiter = ',')]
        obs: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Twin-plant verifier of an automaton with fault events.
    Verifier {
        file: PathBuf,
        /// Comma-separated observed events (default: the observable ones).
        #[arg(long, value_delimiter = ',')]
        obs: Option<Vec<String>>,
        /// Write the verifier as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Diagnosability checks.
    Check(CheckArgs),
    /// Structural filter for a faulty module and a candidate partner.
    Analyze {
        faulty: PathBuf,
        candidate: PathBuf,
        /// Require the non-faulty side to be supported as well.
        #[arg(long)]
        strict_lemma3: bool,
    },
    /// Search for virtual modules that make every fault diagnosable.
    Synthesize {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Try every partition instead of growing blocks greedily.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_MODULES)]
        max_modules: usize,
    },
    /// Write an automaton as DOT.
    Dot {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(value_enum)]
    kind: CheckKind,
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Blocks separated by `|`, module names by `,`, e.g. "g1,g2|g3".
    #[arg(long)]
    partition: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    Local,
    Modular,
    Virtual,
}

/// Failure with exit code 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Outcome = Result<(Report, Vec<u8>), InputError>;

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                2
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    let format = cli.format;
    let outcome = match cli.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(|| execute(cli.command)),
            Err(e) => Err(InputError(e.to_string())),
        },
        None => execute(cli.command),
    };
    match outcome {
        Ok((report, payload)) => {
            let rendered = match format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            // a document on stdout pushes the report to stderr
            let written = if payload.is_empty() {
                stdout.write_all(rendered.as_bytes())
            } else {
                stdout
                    .write_all(&payload)
                    .and_then(|_| stderr.write_all(rendered.as_bytes()))
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return 2;
            }
            if report.success {
                0
            } else {
                1
            }
        }
        Err(InputError(message)) => {
            let _ = writeln!(stderr, "error: {message}");
            2
        }
    }
}

fn load(path: &Path) -> Result<Automaton, InputError> {
    let text = fs::read_to_string(path)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let doc = FsmDocument::parse(&text)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "fsm".into());
    Ok(doc.to_automaton(&stem))
}

fn load_system(paths: &[PathBuf]) -> Result<ModularSystem, InputError> {
    let modules = paths
        .iter()
        .map(|p| load(p).map(Module::from_automaton))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ModularSystem::new(modules)?)
}

/// Writes `text` to `output`, or hands it back for stdout.
fn emit(text: String, output: Option<&Path>) -> Result<Vec<u8>, InputError> {
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            Ok(Vec::new())
        }
        None => Ok(text.into_bytes()),
    }
}

fn summary(a: &Automaton) -> String {
    format!(
        "{}: {} states, {} transitions",
        a.name(),
        a.state_count(),
        a.transition_count()
    )
}

fn execute(command: Command) -> Outcome {
    match command {
        Command::Compose { files, output } => {
            let automata = files.iter().map(|p| load(p)).collect::<Result<Vec<_>, _>>()?;
            let composed = compose_all(&automata)?;
            let mut report = Report::new("compose");
            report.notes.push(summary(&composed));
            Ok((report, emit(serialize_fsm(&composed), output.as_deref())?))
        }
        Command::Project { file, obs, output } => {
            let a = load(&file)?;
            let mask: BTreeSet<String> = obs.into_iter().collect();
            let projected = project(&a, &mask)?;
            let mut report = Report::new("project");
            report.notes.push(summary(&projected));
            Ok((report, emit(serialize_fsm(&projected), output.as_deref())?))
        }
        Command::Verifier { file, obs, dot } => {
            let a = load(&file)?;
            let fla = fault_split(&a)?;
            let mask: BTreeSet<String> = match obs {
                Some(events) => events.into_iter().collect(),
                None => a.alphabet().observable_names(),
            };
            let v = build_verifier(&fla, &mask)?;
            let cycles = indeterminate_cycles(&v, &Progress::Any);
            if let Some(path) = &dot {
                emit(verifier_dot(&v, &cycles), Some(path))?;
            }
            let mut report = Report::new("verifier");
            report.success = cycles.is_empty();
            report.witness = cycles.first().cloned();
            report.verifier = Some(VerifierSummary {
                automaton: a.name().to_string(),
                mask: mask.into_iter().collect(),
                states: v.state_names(),
                edges: v.edge_count(),
                cycles,
            });
            Ok((report, Vec::new()))
        }
        Command::Check(args) => {
            let sys = load_system(&args.files)?;
            let verdicts = match args.kind {
                CheckKind::Local => sys.modules().iter().map(check_local).collect(),
                CheckKind::Modular => check_modular(&sys)?,
                CheckKind::Virtual => {
                    let text = args
                        .partition
                        .ok_or_else(|| InputError("check virtual needs --partition".into()))?;
                    check_virtual(&sys, &Partition::parse(&text))?
                }
            };
            let mut report = Report::new("check").with_verdicts(verdicts);
            if report.verdicts.is_empty() {
                report.notes.push("no module declares fault events".into());
            }
            Ok((report, Vec::new()))
        }
        Command::Analyze {
            faulty,
            candidate,
            strict_lemma3,
        } => {
            let sys = load_system(&[faulty, candidate])?;
            let mode = if strict_lemma3 {
                AnalysisMode::Strict
            } else {
                AnalysisMode::FaultySide
            };
            let (f, c) = (&sys.modules()[0], &sys.modules()[1]);
            if !f.has_faults() {
                return Err(InputError(format!("module {} declares no fault events", f.name)));
            }
            let structural = analyze_pair_with(f, c, mode)?;
            let mut report = Report::new("analyze");
            report.success = structural.recommends();
            report.reports.push(structural);
            Ok((report, Vec::new()))
        }
        Command::Synthesize {
            files,
            exhaustive,
            max_modules,
        } => {
            let sys = load_system(&files)?;
            let result = if exhaustive {
                synthesize_exhaustive(&sys, max_modules)?
            } else {
                synthesize_greedy(&sys)?
            };
            let mut report = Report::new("synthesize").with_verdicts(result.verdicts);
            report.success = result.success;
            report.partition = Some(result.partition);
            report.reports = result.reports;
            report.notes = result.notes;
            report.notes.push(format!(
                "{:?} search examined {} candidates",
                result.strategy, result.candidates_examined
            ).to_lowercase());
            Ok((report, Vec::new()))
        }
        Command::Dot { file, output } => {
            let a = load(&file)?;
            let mut report = Report::new("dot");
            report.notes.push(summary(&a));
            Ok((report, emit(automaton_dot(&a), output.as_deref())?))
        }
    }
}
