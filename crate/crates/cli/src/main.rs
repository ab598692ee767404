//! `tempobridge` command-line front end.
//!
//! Exit status: 0 success or true, 1 property false (or `bot`), 2 usage,
//! parse or pairing error, 3 xcheck found failures.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use tempobridge::checker2::{check, CheckConfig, StarEngine, DEFAULT_CEILING};
use tempobridge::checker3::eval_upml;
use tempobridge::parser::{format_lasso, load_structure, parse_formula, render_formula, save_structure, to_dot};
use tempobridge::structures::mu_paths;
use tempobridge::testkit::{as_model, xcheck, xcheck_mutant, GenParams};
use tempobridge::{Formula, LogicId, MappingId, Structure};

#[derive(Parser)]
#[command(name = "tempobridge", version, about = "Check and translate state/event temporal logic formulas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula at a state; prints true, false or bot.
    Check {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        logic: LogicId,
        #[arg(long)]
        state: String,
        #[arg(long)]
        formula: String,
        /// Check star formulas by enumerating lassos up to this length.
        #[arg(long)]
        bound: Option<usize>,
        /// Check star formulas by lasso enumeration with the automatic bound.
        #[arg(long)]
        enumerate: bool,
    },
    /// Apply a mapping to a structure and optionally a formula.
    Map {
        #[arg(long)]
        mapping: MappingId,
        #[arg(long)]
        structure: PathBuf,
        /// Source-logic formula; its translation is printed after the structure.
        #[arg(long)]
        formula: Option<String>,
        /// Write the mapped structure here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the lassos from a state up to a length bound.
    Paths {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        state: String,
        #[arg(long)]
        bound: usize,
    },
    /// Render a structure as a Graphviz graph.
    Dot {
        #[arg(long)]
        structure: PathBuf,
    },
    /// Random differential test of a mapping; prints a JSON report.
    Xcheck {
        #[arg(long)]
        mapping: MappingId,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        max_states: usize,
        #[arg(long, default_value_t = 3)]
        max_actions: usize,
        #[arg(long, default_value_t = 3)]
        max_props: usize,
        #[arg(long, default_value_t = 3)]
        max_depth: usize,
        /// Run against the deliberately broken translation table.
        #[arg(long)]
        mutant: bool,
    },
    /// Print a formula in canonical syntax.
    Fmt {
        #[arg(long)]
        logic: LogicId,
        #[arg(long)]
        formula: String,
    },
}

fn read_structure(path: &Path) -> Result<Structure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    load_structure(&text).with_context(|| format!("loading {}", path.display()))
}

fn ceiling() -> Result<usize> {
    match std::env::var("TEMPOBRIDGE_CEILING") {
        Ok(v) => v.trim().parse().map_err(|_| anyhow!("TEMPOBRIDGE_CEILING must be a positive integer, got `{v}`")),
        Err(_) => Ok(DEFAULT_CEILING),
    }
}

fn cmd_check(structure: &Path, logic: LogicId, state: &str, text: &str, bound: Option<usize>, enumerate: bool) -> Result<u8> {
    let st = read_structure(structure)?;
    if st.kind() != logic.carrier() {
        bail!("{logic} is interpreted over a {}, but the structure is a {}", logic.carrier(), st.kind());
    }
    let s = st.as_transition_system().state_id(state).ok_or_else(|| anyhow!("unknown state `{state}`"))?;
    match parse_formula(text, logic)? {
        Formula::Upml(phi) => {
            let Structure::Kmts(k) = &st else { unreachable!("pairing checked above") };
            let v = eval_upml(k, s, &phi)?;
            println!("{}", v.as_str());
            Ok(if v == tempobridge::Truth3::True { 0 } else { 1 })
        }
        Formula::State(phi) => {
            let enumerated = bound.is_some() || enumerate;
            let cfg = CheckConfig {
                lasso_bound_override: bound,
                ceiling: ceiling()?,
                star_engine: if enumerated { StarEngine::Enumerate } else { StarEngine::Product },
                ..CheckConfig::default()
            };
            let model = as_model(&st).expect("two-valued carrier");
            let v = check(model, s, &phi, logic, &cfg)?;
            println!("{}{}", v.holds, if v.bounded { " (bounded)" } else { "" });
            Ok(if v.holds { 0 } else { 1 })
        }
    }
}

fn cmd_map(mapping: MappingId, structure: &Path, formula: Option<&str>, out: Option<&Path>) -> Result<u8> {
    let st = read_structure(structure)?;
    let bundle = tempobridge::map_structure(mapping, &st)?;
    let translated = match formula {
        Some(text) => {
            let phi = match parse_formula(text, mapping.source_logic())? {
                Formula::State(phi) => phi,
                Formula::Upml(_) => unreachable!("mappings have two-valued sources"),
            };
            let mapped = bundle.map_formula(&phi)?;
            Some(render_formula(&Formula::State(mapped), mapping.target_logic())?)
        }
        None => None,
    };
    let json = save_structure(&bundle.target);
    match out {
        Some(path) => fs::write(path, json).with_context(|| format!("writing {}", path.display()))?,
        None => println!("{json}"),
    }
    if let Some(t) = translated {
        println!("{t}");
    }
    Ok(0)
}

fn cmd_paths(structure: &Path, state: &str, bound: usize) -> Result<u8> {
    let st = read_structure(structure)?;
    let ts = st.as_transition_system();
    let s = ts.state_id(state).ok_or_else(|| anyhow!("unknown state `{state}`"))?;
    for lasso in mu_paths(ts, s, bound)? {
        println!("{}", format_lasso(ts, &lasso));
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Check { structure, logic, state, formula, bound, enumerate } => {
            cmd_check(&structure, logic, &state, &formula, bound, enumerate)
        }
        Command::Map { mapping, structure, formula, out } => cmd_map(mapping, &structure, formula.as_deref(), out.as_deref()),
        Command::Paths { structure, state, bound } => cmd_paths(&structure, &state, bound),
        Command::Dot { structure } => {
            print!("{}", to_dot(&read_structure(&structure)?));
            Ok(0)
        }
        Command::Xcheck { mapping, trials, seed, max_states, max_actions, max_props, max_depth, mutant } => {
            let params = GenParams { seed, max_states, max_actions, max_props, max_formula_depth: max_depth, trials };
            if [max_states, max_actions, max_props, max_depth].contains(&0) {
                bail!("size bounds must be at least 1");
            }
            let report = if mutant { xcheck_mutant(mapping, &params) } else { xcheck(mapping, &params) };
            println!("{}", report.to_json());
            if report.passed() {
                Ok(0)
            } else {
                eprintln!("{} failure(s) in {} trials", report.failures.len(), report.trials);
                Ok(3)
            }
        }
        Command::Fmt { logic, formula } => {
            println!("{}", render_formula(&parse_formula(&formula, logic)?, logic)?);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
