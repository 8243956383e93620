//! The `lut` command line.
//!
//! Exit codes: 0 true / valid / accepted / all entries pass, 1 false /
//! countermodel / rejected / some entry fails, 2 unreadable or malformed
//! input, 64 bad usage.

use crate::bisim::partition;
use crate::formula::{parse, Formula};
use crate::kripke::{load_model, EnumerationBounds, FrameClass, Model};
use crate::proofcheck::{check_proof, load_proof};
use crate::rewrite;
use crate::semantics::{bounded_validity, eval_with_witness, Validity};
use crate::suite::{run_suite, SuiteConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "lut", version, about = "Model checker and proof checker for the logic of unknowable truths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a formula at a state of a model.
    Check {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        state: String,
        #[arg(long)]
        formula: String,
        #[command(flatten)]
        out: Output,
    },
    /// Search all small models for a countermodel.
    Valid {
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = 3)]
        max_states: usize,
        /// Comma-separated; defaults to the agents of the formula.
        #[arg(long, value_delimiter = ',')]
        agents: Vec<String>,
        /// Comma-separated; defaults to the atoms of the formula.
        #[arg(long, value_delimiter = ',')]
        atoms: Vec<String>,
        #[arg(long, default_value_t = FrameClass::Reflexive)]
        frame_class: FrameClass,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Print the bisimulation classes of a model.
    Bisim {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Eliminate announcements step by step.
    Rewrite {
        #[arg(long)]
        formula: String,
        #[command(flatten)]
        out: Output,
    },
    /// Print U-depth and size.
    Complexity {
        #[arg(long)]
        formula: String,
        #[command(flatten)]
        out: Output,
    },
    /// Check a Hilbert-style proof.
    Prove {
        #[arg(long)]
        proof: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Run the catalog of validities, invalidities and measure properties.
    Props {
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=4))]
        bound: u8,
        #[arg(long)]
        entry: Option<String>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Random formulas per measure inequality.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = SuiteConfig::default().seed)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// What a command printed and how it exited.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn input_error(message: impl std::fmt::Display) -> Self {
        Outcome {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

fn verdict(positive: bool) -> i32 {
    if positive {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

fn parse_formula(text: &str) -> Result<Formula, Outcome> {
    parse(text).map_err(|e| {
        let caret = " ".repeat(text[..e.offset.min(text.len())].chars().count());
        Outcome::input_error(format!("{e}\n  {text}\n  {caret}^"))
    })
}

fn read(path: &Path) -> Result<String, Outcome> {
    std::fs::read_to_string(path)
        .map_err(|e| Outcome::input_error(format!("cannot read {}: {e}", path.display())))
}

fn read_model(path: &Path) -> Result<Model, Outcome> {
    load_model(&read(path)?).map_err(|e| Outcome::input_error(format!("{}: {e}", path.display())))
}

fn pretty(value: serde_json::Value) -> String {
    serde_json::to_string_pretty(&value).expect("json value") + "\n"
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                Outcome::ok(EXIT_OK, rendered)
            };
        }
    };
    dispatch(cli.command).unwrap_or_else(|failure| failure)
}

fn dispatch(command: Command) -> Result<Outcome, Outcome> {
    match command {
        Command::Check {
            model,
            state,
            formula,
            out,
        } => check(&model, &state, &formula, out.format),
        Command::Valid {
            formula,
            max_states,
            agents,
            atoms,
            frame_class,
            jobs,
            out,
        } => valid(&formula, max_states, agents, atoms, frame_class, jobs, out.format),
        Command::Bisim { model, out } => bisim(&model, out.format),
        Command::Rewrite { formula, out } => rewrite_cmd(&formula, out.format),
        Command::Complexity { formula, out } => {
            let c = parse_formula(&formula)?.complexity();
            Ok(Outcome::ok(
                EXIT_OK,
                match out.format {
                    Format::Text => format!("udepth={} size={}\n", c.udepth, c.size),
                    Format::Json => pretty(json!(c)),
                },
            ))
        }
        Command::Prove { proof, out } => prove(&proof, out.format),
        Command::Props {
            bound,
            entry,
            jobs,
            samples,
            seed,
            out,
        } => props(
            SuiteConfig {
                bound: bound.into(),
                jobs,
                samples,
                seed,
            },
            entry.as_deref(),
            out.format,
        ),
    }
}

fn check(model: &Path, state: &str, formula: &str, format: Format) -> Result<Outcome, Outcome> {
    let m = read_model(model)?;
    let f = parse_formula(formula)?;
    let s = m
        .state_index(state)
        .ok_or_else(|| Outcome::input_error(format!("unknown state `{state}`")))?;
    let v = eval_with_witness(&m, s, &f).map_err(Outcome::input_error)?;
    let stdout = match format {
        Format::Text => {
            let mut text = format!("{}\n", v.value);
            if let Some(w) = &v.witness {
                let _ = writeln!(text, "witness: announcing");
                let _ = writeln!(text, "  {}", w.announcement);
                let _ = writeln!(
                    text,
                    "leaves {{{}}}, where K holds at {state}",
                    m.set_names(w.states).join(", ")
                );
            }
            text
        }
        Format::Json => pretty(json!({
            "value": v.value,
            "witness": v.witness.as_ref().map(|w| json!({
                "states": m.set_names(w.states),
                "announcement": w.announcement.to_string(),
            })),
        })),
    };
    Ok(Outcome::ok(verdict(v.value), stdout))
}

fn valid(
    formula: &str,
    max_states: usize,
    agents: Vec<String>,
    atoms: Vec<String>,
    frame_class: FrameClass,
    jobs: usize,
    format: Format,
) -> Result<Outcome, Outcome> {
    let f = parse_formula(formula)?;
    let agents: Vec<String> = if agents.is_empty() {
        let found: Vec<String> = f.agents().iter().map(|a| a.to_string()).collect();
        if found.is_empty() {
            vec!["a".into()]
        } else {
            found
        }
    } else {
        agents
    };
    let atoms: Vec<String> = if atoms.is_empty() {
        f.atoms().iter().map(|a| a.to_string()).collect()
    } else {
        atoms
    };
    let agent_refs: Vec<&str> = agents.iter().map(String::as_str).collect();
    let atom_refs: Vec<&str> = atoms.iter().map(String::as_str).collect();
    let bounds =
        EnumerationBounds::new(max_states, &agent_refs, &atom_refs).with_frame_class(frame_class);
    let result = bounded_validity(&f, &bounds, jobs.max(1)).map_err(Outcome::input_error)?;
    let stdout = match (&result, format) {
        (Validity::ValidUpToBound { models_checked }, Format::Text) => {
            format!("valid up to bound ({models_checked} models checked)\n")
        }
        (
            Validity::Countermodel {
                model,
                state,
                models_checked,
            },
            Format::Text,
        ) => format!(
            "countermodel at state {} ({models_checked} models checked)\n{}\n",
            model.state_name(*state),
            model.to_json()
        ),
        (Validity::ValidUpToBound { models_checked }, Format::Json) => pretty(json!({
            "valid": true,
            "models_checked": models_checked,
        })),
        (
            Validity::Countermodel {
                model,
                state,
                models_checked,
            },
            Format::Json,
        ) => pretty(json!({
            "valid": false,
            "models_checked": models_checked,
            "state": model.state_name(*state),
            "model": model.to_file(),
        })),
    };
    Ok(Outcome::ok(verdict(result.is_valid()), stdout))
}

fn sorted_blocks(m: &Model) -> Vec<Vec<String>> {
    let mut blocks: Vec<Vec<String>> = partition(m)
        .blocks()
        .iter()
        .map(|b| {
            let mut names: Vec<String> = m.set_names(*b).into_iter().map(String::from).collect();
            names.sort();
            names
        })
        .collect();
    blocks.sort();
    blocks
}

fn bisim(model: &Path, format: Format) -> Result<Outcome, Outcome> {
    let blocks = sorted_blocks(&read_model(model)?);
    let stdout = match format {
        Format::Text => blocks.iter().map(|b| b.join(" ") + "\n").collect(),
        Format::Json => pretty(json!({ "blocks": blocks })),
    };
    Ok(Outcome::ok(EXIT_OK, stdout))
}

fn rewrite_cmd(formula: &str, format: Format) -> Result<Outcome, Outcome> {
    let f = parse_formula(formula)?;
    let steps = rewrite::trace(&f).map_err(Outcome::input_error)?;
    let stdout = match format {
        Format::Text => steps
            .iter()
            .map(|s| {
                format!(
                    "{:<5} {}  ({}, {})\n",
                    s.axiom.map_or("start".to_string(), |a| a.to_string()),
                    s.formula,
                    s.complexity.udepth,
                    s.complexity.size
                )
            })
            .collect(),
        Format::Json => pretty(json!(steps
            .iter()
            .map(|s| json!({
                "axiom": s.axiom,
                "formula": s.formula.to_string(),
                "udepth": s.complexity.udepth,
                "size": s.complexity.size,
            }))
            .collect::<Vec<_>>())),
    };
    Ok(Outcome::ok(EXIT_OK, stdout))
}

fn prove(path: &Path, format: Format) -> Result<Outcome, Outcome> {
    let proof = load_proof(&read(path)?)
        .map_err(|e| Outcome::input_error(format!("{}: {e}", path.display())))?;
    let report = check_proof(&proof);
    let stdout = match format {
        Format::Text => {
            let mut text = String::new();
            for s in &report.steps {
                let status = match &s.error {
                    None => "ok".to_string(),
                    Some(e) => format!("REJECTED: {e}"),
                };
                let _ = writeln!(text, "{:>3}  {:<14} {}  {status}", s.index, s.by, s.formula);
            }
            text + if report.accepted { "accepted\n" } else { "rejected\n" }
        }
        Format::Json => pretty(json!({
            "accepted": report.accepted,
            "steps": report.steps.iter().map(|s| json!({
                "index": s.index,
                "formula": s.formula,
                "by": s.by,
                "error": s.error.as_ref().map(|e| e.to_string()),
            })).collect::<Vec<_>>(),
        })),
    };
    Ok(Outcome::ok(verdict(report.accepted), stdout))
}

fn props(cfg: SuiteConfig, entry: Option<&str>, format: Format) -> Result<Outcome, Outcome> {
    let report = run_suite(&cfg, entry).map_err(Outcome::input_error)?;
    let all = report.iter().all(|r| r.passed);
    let stdout = match format {
        Format::Text => report.iter().map(|r| r.line() + "\n").collect(),
        Format::Json => pretty(json!(report)),
    };
    Ok(Outcome::ok(verdict(all), stdout))
}
