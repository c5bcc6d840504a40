//! The `commont` command line.
//!
//! Exit codes: 0 success (clean report, some relation holds, subsumption
//! holds), 1 negative answer (violations, no relation, no subsumption),
//! 2 usage, parse, semantic or IO error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::catalog;
use crate::ontology::Ontology;
use crate::protocol::{validate, Protocol, Run};
use crate::relations::compare;
use crate::semantics::{FluentStore, SemanticsRegistry};
use crate::traces::trace_set;
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "commont",
    version,
    about = "Communication-act ontologies and protocol relations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Ontology file; repeat to merge several. Defaults to the bundled catalog.
    #[arg(long = "ontology", value_name = "FILE", global = true)]
    pub ontologies: Vec<String>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check determinism, reachability, acyclicity and final-state commitments.
    Validate { protocol: String },
    /// Print the fluent store after every act.
    Simulate {
        protocol: String,
        /// Comma-separated act classes to follow from the initial state.
        #[arg(long, value_name = "ACT[,ACT]...")]
        run: Option<String>,
        /// Only consider runs of at most N acts (allows cyclic protocols).
        #[arg(long, value_name = "N")]
        max_steps: Option<usize>,
    },
    /// List the protocol's trace set, one trace per line.
    Traces { protocol: String },
    /// Decide every relation between two protocols.
    Compare { a: String, b: String },
    /// Is SPECIFIC a subclass of GENERAL?
    Subsumes { general: String, specific: String },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        // output closed early, e.g. piped into `head`
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let ont = load_ontologies(&cli.common.ontologies)?;
    let reg = SemanticsRegistry::standard();
    let json = cli.common.json;
    match &cli.command {
        Command::Validate { protocol } => {
            let (file, src) = read_protocol(protocol)?;
            let p = Protocol::load_unchecked(&file, &src, &ont)?;
            let report = validate(&p, &ont, &reg);
            if json {
                emit_json(
                    out,
                    &serde_json::to_value(&report).expect("report serializes"),
                )?;
            } else {
                writeln!(out, "{report}")?;
            }
            Ok(if report.is_clean() {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            })
        }
        Command::Simulate {
            protocol,
            run,
            max_steps,
        } => {
            let p = load(protocol, &ont)?;
            let runs = match run {
                Some(list) => {
                    let acts = split_acts(list);
                    if let Some(max) = max_steps {
                        if acts.len() > *max {
                            return Err(Error::Usage(format!(
                                "--run has {} acts, more than --max-steps {max}",
                                acts.len()
                            )));
                        }
                    }
                    vec![p.follow(&acts)?]
                }
                None => match max_steps {
                    Some(max) => p.runs_up_to(*max),
                    None => p.enumerate_runs().map_err(|e| match e {
                        Error::CyclicProtocol { protocol, state } => Error::CyclicProtocol {
                            protocol: format!(
                                "{protocol} (use --max-steps N to simulate bounded runs)"
                            ),
                            state,
                        },
                        other => other,
                    })?,
                },
            };
            let single = run.is_some();
            let mut rendered = Vec::new();
            for r in &runs {
                rendered.push((r, r.simulate(&ont, &reg)?));
            }
            if json {
                let runs: Vec<Value> = rendered.iter().map(|(r, s)| run_json(r, s)).collect();
                emit_json(out, &json!({"protocol": p.name(), "runs": runs}))?;
            } else {
                for (i, (r, stores)) in rendered.iter().enumerate() {
                    if !single {
                        if i > 0 {
                            writeln!(out)?;
                        }
                        writeln!(out, "run {}: {r}", i + 1)?;
                    }
                    for (k, (state, store)) in r.states.iter().zip(stores).enumerate() {
                        writeln!(out, "{state} F{k} = {store}")?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Traces { protocol } => {
            let p = load(protocol, &ont)?;
            let traces = trace_set(&p, &ont, &reg)?;
            if json {
                emit_json(
                    out,
                    &Value::Array(traces.iter().map(|t| t.to_json()).collect()),
                )?;
            } else {
                for t in traces.iter() {
                    writeln!(out, "{t}")?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Compare { a, b } => {
            let pa = load(a, &ont)?;
            let pb = load(b, &ont)?;
            let verdict = compare(&pa, &pb, &ont, &reg)?;
            if json {
                emit_json(out, &verdict.to_json())?;
            } else {
                write!(out, "{}", verdict.render_table())?;
            }
            Ok(if verdict.any_holds() {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            })
        }
        Command::Subsumes { general, specific } => {
            let holds = ont.subsumes(general, specific)?;
            if json {
                emit_json(
                    out,
                    &json!({"general": general, "specific": specific, "subsumes": holds}),
                )?;
            } else {
                writeln!(out, "{holds}")?;
            }
            Ok(if holds { EXIT_OK } else { EXIT_NEGATIVE })
        }
    }
}

fn emit_json(out: &mut dyn Write, v: &Value) -> Result<()> {
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(v).expect("json value serializes")
    )?;
    Ok(())
}

fn load_ontologies(paths: &[String]) -> Result<Ontology> {
    if paths.is_empty() {
        return Ok(catalog::default_ontology());
    }
    let mut sources = Vec::with_capacity(paths.len());
    for p in paths {
        let text = fs::read_to_string(p).map_err(|e| io_context(p, e))?;
        sources.push((p.as_str(), text));
    }
    let refs: Vec<(&str, &str)> = sources.iter().map(|(p, t)| (*p, t.as_str())).collect();
    Ontology::load(&refs)
}

/// Reads a protocol file, falling back to a bundled fixture name.
fn read_protocol(arg: &str) -> Result<(String, String)> {
    if !Path::new(arg).exists() {
        if let Some((file, src)) = catalog::fixture(arg) {
            return Ok((file.to_string(), src.to_string()));
        }
    }
    let text = fs::read_to_string(arg).map_err(|e| io_context(arg, e))?;
    Ok((arg.to_string(), text))
}

fn load(arg: &str, ont: &Ontology) -> Result<Protocol> {
    let (file, src) = read_protocol(arg)?;
    Protocol::load(&file, &src, ont)
}

fn io_context(path: &str, e: std::io::Error) -> Error {
    Error::Io(std::io::Error::new(e.kind(), format!("{path}: {e}")))
}

fn split_acts(list: &str) -> Vec<&str> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect()
}

fn run_json(run: &Run, stores: &[FluentStore]) -> Value {
    let steps: Vec<Value> = run
        .states
        .iter()
        .zip(stores)
        .enumerate()
        .map(|(k, (state, store))| {
            let fluents: Vec<Value> = store
                .stamped()
                .iter()
                .map(|s| {
                    json!({
                        "fluent": s.fluent.to_string(),
                        "kind": s.fluent.kind(),
                        "tick": s.at,
                    })
                })
                .collect();
            json!({
                "index": k,
                "state": state,
                "act": if k == 0 { Value::Null } else { json!(run.events[k - 1].to_string()) },
                "fluents": fluents,
            })
        })
        .collect();
    json!({"acts": run.acts(), "steps": steps})
}
