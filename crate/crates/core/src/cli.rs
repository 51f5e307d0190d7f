//! The `bjkit` command line.
//!
//! Exit status follows the SAT competition convention: 10 when a model or
//! colouring was found, 20 when there is none, 0 for commands that do not
//! solve, 1 for usage and I/O errors.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cnf::{emit_dimacs, gen_random_3sat, parse_dimacs};
use crate::coloring::{ColoringInstance, ColoringSearch};
use crate::sat::{export_dot, SatSearch, SolverOptions, Strategy};
use crate::stats::SearchStats;
use crate::trace::{JsonlTrace, TraceSink};

pub const EXIT_FOUND: i32 = 10;
pub const EXIT_NONE: i32 = 20;
pub const EXIT_ERROR: i32 = 1;

#[derive(Debug, Parser)]
#[command(name = "bjkit", version, about = "Backjumping SAT and graph colouring")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve DIMACS CNF formulas.
    #[command(subcommand)]
    Sat(SatCommand),
    /// Colour graphs given as JSON.
    #[command(subcommand)]
    Color(ColorCommand),
    /// Generate instances.
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Debug, Subcommand)]
enum SatCommand {
    /// Find one model.
    Solve(SatArgs),
    /// Print every model.
    Enumerate(SatArgs),
}

#[derive(Debug, Subcommand)]
enum ColorCommand {
    /// Find one colouring.
    Solve(ColorArgs),
    /// Print every colouring.
    Enumerate(ColorArgs),
}

#[derive(Debug, Subcommand)]
enum GenCommand {
    /// Uniform random 3-SAT.
    #[command(name = "3sat")]
    ThreeSat {
        #[arg(short = 'n', long = "vars")]
        vars: u32,
        #[arg(short = 'm', long = "clauses")]
        clauses: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file (stdout if omitted).
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatsFormat {
    Json,
    Text,
}

#[derive(Debug, Args)]
struct SatArgs {
    file: PathBuf,
    #[arg(long, default_value = "first-uip", value_parser = parse_strategy)]
    strategy: Strategy,
    /// Learnt clauses shorter than this are kept across backjumps.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    /// Write search events as JSON lines.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the implication graph of the first conflict as Graphviz.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Print counters to stderr.
    #[arg(long)]
    stats: Option<StatsFormat>,
    /// Forced first decisions, e.g. "v7=false,v8=false,v1=true".
    #[arg(long, value_parser = parse_script)]
    assume: Option<Script>,
}

/// One `--assume` value; a newtype so clap keeps it a single argument.
#[derive(Debug, Clone)]
struct Script(Vec<(u32, bool)>);

fn parse_script(s: &str) -> Result<Script, String> {
    parse_assume(s).map(Script)
}

#[derive(Debug, Args)]
struct ColorArgs {
    file: PathBuf,
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    stats: Option<StatsFormat>,
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse()
}

/// Parses `v7=false,8=true,x1=1` into (variable, value) pairs.
pub fn parse_assume(s: &str) -> Result<Vec<(u32, bool)>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let (var, val) = p.split_once('=').ok_or_else(|| format!("{p:?}: expected VAR=VALUE"))?;
            let digits = var.trim().trim_start_matches(['v', 'x']);
            let var: u32 = digits
                .parse()
                .ok()
                .filter(|&v| v >= 1)
                .ok_or_else(|| format!("{p:?}: bad variable"))?;
            let val = match val.trim() {
                "true" | "1" | "t" => true,
                "false" | "0" | "f" => false,
                other => return Err(format!("{p:?}: bad value {other:?}")),
            };
            Ok((var, val))
        })
        .collect()
}

#[derive(Serialize)]
struct StatsLine {
    #[serde(flatten)]
    stats: SearchStats,
    wall_time_ms: u64,
}

/// Renders counters as one JSON object or as aligned `name value` lines.
pub fn emit_stats(stats: &SearchStats, wall: Duration, format: StatsFormat) -> String {
    let line = StatsLine {
        stats: *stats,
        wall_time_ms: wall.as_millis() as u64,
    };
    match format {
        StatsFormat::Json => {
            let mut s = serde_json::to_string(&line).expect("stats serialize");
            s.push('\n');
            s
        }
        StatsFormat::Text => {
            let value = serde_json::to_value(&line).expect("stats serialize");
            let fields = [
                "decisions",
                "propagations",
                "throws",
                "jumps",
                "learnt_count",
                "max_learnt_size",
                "wall_time_ms",
            ];
            fields
                .iter()
                .map(|f| format!("{f:<16} {}\n", value[f]))
                .collect()
        }
    }
}

/// Runs the command line and returns the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { 0 };
        }
    };
    let mut stdout = std::io::stdout().lock();
    match dispatch(cli.command, &mut stdout) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn trace_file(path: &Option<PathBuf>) -> Result<Option<JsonlTrace<BufWriter<File>>>> {
    path.as_ref()
        .map(|p| {
            let f = File::create(p).with_context(|| format!("cannot create {}", p.display()))?;
            Ok(JsonlTrace::new(BufWriter::new(f)))
        })
        .transpose()
}

fn close_trace(trace: Option<JsonlTrace<BufWriter<File>>>) -> Result<()> {
    if let Some(t) = trace {
        t.finish().context("writing trace")?.flush()?;
    }
    Ok(())
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Sat(SatCommand::Solve(args)) => sat(args, false, out),
        Command::Sat(SatCommand::Enumerate(args)) => sat(args, true, out),
        Command::Color(ColorCommand::Solve(args)) => color(args, false, out),
        Command::Color(ColorCommand::Enumerate(args)) => color(args, true, out),
        Command::Gen(GenCommand::ThreeSat {
            vars,
            clauses,
            seed,
            out: path,
        }) => {
            if vars < 3 {
                bail!("random 3-SAT needs at least 3 variables");
            }
            let text = emit_dimacs(&gen_random_3sat(vars, clauses, seed));
            match path {
                Some(p) => fs::write(&p, text).with_context(|| format!("cannot write {}", p.display()))?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(0)
        }
    }
}

fn sat(args: SatArgs, all: bool, out: &mut dyn Write) -> Result<i32> {
    let inst = parse_dimacs(&read(&args.file)?).with_context(|| format!("{}", args.file.display()))?;
    if let Some(Script(script)) = &args.assume {
        if let Some((v, _)) = script.iter().find(|(v, _)| *v > inst.var_count) {
            bail!("--assume mentions x{v} but the formula has {} variables", inst.var_count);
        }
    }
    let options = SolverOptions {
        strategy: args.strategy,
        k: args.k as usize,
        decision_script: args.assume.clone().map(|s| s.0).unwrap_or_default(),
        audit: false,
    };
    let mut trace = trace_file(&args.trace)?;
    let start = Instant::now();
    let mut search = SatSearch::new(&inst, options).context("invalid formula")?;
    if let Some(t) = trace.as_mut() {
        search = search.with_trace(t as &mut dyn TraceSink);
    }
    let mut found = 0usize;
    while let Some(model) = search.next_model() {
        found += 1;
        if found == 1 && !all {
            writeln!(out, "s SATISFIABLE")?;
        }
        let lits: Vec<String> = model.to_dimacs().iter().map(i64::to_string).collect();
        writeln!(out, "v {} 0", lits.join(" ").trim())?;
        if !all {
            break;
        }
    }
    let wall = start.elapsed();
    if all {
        writeln!(out, "c models {found}")?;
    } else if found == 0 {
        writeln!(out, "s UNSATISFIABLE")?;
    }
    let stats = search.stats();
    let graph = search.conflict_graph().cloned();
    drop(search);
    close_trace(trace)?;
    if let Some(p) = &args.dot {
        match graph {
            Some(g) => fs::write(p, export_dot(&g)).with_context(|| format!("cannot write {}", p.display()))?,
            None => eprintln!("warning: no conflict occurred, {} not written", p.display()),
        }
    }
    if let Some(format) = args.stats {
        eprint!("{}", emit_stats(&stats, wall, format));
    }
    Ok(if found > 0 { EXIT_FOUND } else { EXIT_NONE })
}

fn color(args: ColorArgs, all: bool, out: &mut dyn Write) -> Result<i32> {
    let inst = ColoringInstance::from_json(&read(&args.file)?).with_context(|| format!("{}", args.file.display()))?;
    let mut trace = trace_file(&args.trace)?;
    let start = Instant::now();
    let mut search = ColoringSearch::new(&inst);
    if let Some(t) = trace.as_mut() {
        search = search.with_trace(t as &mut dyn TraceSink);
    }
    let mut found = 0usize;
    while let Some(sol) = search.next_solution() {
        found += 1;
        if found == 1 && !all {
            writeln!(out, "s COLOURABLE")?;
        }
        let pairs: Vec<String> = sol
            .assignment
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{}={c}", i + 1))
            .collect();
        writeln!(out, "v {}", pairs.join(" "))?;
        if !all {
            break;
        }
    }
    let wall = start.elapsed();
    if all {
        writeln!(out, "c colourings {found}")?;
    } else if found == 0 {
        writeln!(out, "s UNCOLOURABLE")?;
    }
    let stats = search.stats();
    drop(search);
    close_trace(trace)?;
    if let Some(format) = args.stats {
        eprint!("{}", emit_stats(&stats, wall, format));
    }
    Ok(if found > 0 { EXIT_FOUND } else { EXIT_NONE })
}
