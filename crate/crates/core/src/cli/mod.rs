//! The `fdsolve` command line: model files, the queens harness, and run
//! statistics.
//!
//! ```text
//! fdsolve <model-file> [--range closed|open|bits] [--label step|ff] [--all|--first] [--stats]
//! fdsolve queens N [--level clpfd|fd|idx|kernel] [--range ...] [--label ...] [--all] [--bench]
//! ```
//!
//! Solutions go to standard output as `[v1,v2,...]`, one per line;
//! statistics go to standard error as `key=value` lines. Exit status is 0
//! when a solution was found, 1 when the model is unsatisfiable, 2 on usage
//! or parse errors and 3 on internal errors. `FD_DEFAULT_UNIVERSE=lo..hi`
//! overrides the default universe.

pub mod model_file;
pub mod queens;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use model_file::{parse_model, parse_model_str, Decl, ModelError, ModelFile, Objective};
pub use queens::{build_queens, Level, Queens};

use crate::error::{ContractError, Fail};
use crate::fdvar::{FdTerm, Stats};
use crate::model::Model;
use crate::propagation::ChainType;
use crate::ranges::{RangeConfig, RangeKind, DEFAULT_BITS_UNIVERSE};
use crate::search::{labeling, maximize_labeling, minimize_labeling, LabelOptions, SearchStats};

pub const EXIT_SOLVED: i32 = 0;
pub const EXIT_UNSAT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// Environment variable overriding the default universe.
pub const UNIVERSE_ENV: &str = "FD_DEFAULT_UNIVERSE";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    pub range: RangeConfig,
    pub label: LabelOptions,
    pub level: Level,
    pub first_only: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            range: RangeConfig::default(),
            label: LabelOptions::step(),
            level: Level::Clpfd,
            first_only: true,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunStats {
    pub tells: u64,
    pub prunes: u64,
    pub executions: [u64; 4],
    pub failures: u64,
    pub nodes: u64,
    pub backtracks: u64,
    pub solutions: u64,
    pub restarts: u64,
    pub wall: Duration,
}

impl RunStats {
    fn collect(store: &Stats, search: SearchStats, restarts: u64, wall: Duration) -> Self {
        RunStats {
            tells: store.tells,
            prunes: store.prunes,
            executions: store.executions,
            failures: store.failures,
            nodes: search.nodes,
            backtracks: search.backtracks,
            solutions: search.solutions,
            restarts,
            wall,
        }
    }

    /// `key=value` lines.
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("tells={}", self.tells),
            format!("prunes={}", self.prunes),
        ];
        for c in ChainType::ALL {
            out.push(format!("executions_{}={}", c.name(), self.executions[c.index()]));
        }
        out.extend([
            format!("failures={}", self.failures),
            format!("nodes={}", self.nodes),
            format!("backtracks={}", self.backtracks),
            format!("solutions={}", self.solutions),
            format!("restarts={}", self.restarts),
            format!("wall_seconds={:.6}", self.wall.as_secs_f64()),
        ]);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Solved,
    Unsatisfiable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub status: Status,
    pub solutions: Vec<Vec<i64>>,
    /// Optimum, for minimize and maximize models.
    pub objective: Option<i64>,
    pub stats: RunStats,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Contract(#[from] ContractError),
}

/// Splits a kernel result into "keep going", "unsatisfiable" and errors.
fn consistent(r: Result<(), Fail>) -> Result<bool, ContractError> {
    match r {
        Ok(()) => Ok(true),
        Err(Fail::Inconsistent) => Ok(false),
        Err(Fail::Contract(e)) => Err(e),
    }
}

/// Solves a parsed model.
pub fn run(file: &ModelFile, config: &RunConfig) -> Result<RunOutcome, RunError> {
    if config.level != Level::Clpfd {
        return Err(RunError::Usage(format!(
            "level {} applies to the queens harness only; model files use clpfd",
            config.level
        )));
    }
    let start = Instant::now();
    let (ulo, uhi) = config.range.universe();
    for d in &file.decls {
        if d.lo < ulo || d.hi > uhi {
            return Err(RunError::Usage(format!(
                "domain {}..{} of {} does not fit the universe {ulo}..{uhi}",
                d.lo, d.hi, d.name
            )));
        }
    }
    let mut model = Model::new(config.range);
    let unsat = |model: &Model| RunOutcome {
        status: Status::Unsatisfiable,
        solutions: Vec::new(),
        objective: None,
        stats: RunStats::collect(model.store().stats(), SearchStats::default(), 0, start.elapsed()),
    };
    let mut vars = Vec::with_capacity(file.decls.len());
    for d in &file.decls {
        match model.new_var_in(d.name.clone(), d.lo, d.hi) {
            Ok(v) => vars.push(v),
            Err(Fail::Inconsistent) => return Ok(unsat(&model)),
            Err(Fail::Contract(e)) => return Err(e.into()),
        }
    }
    for r in &file.rels {
        if !consistent(model.post_rel(r))? {
            return Ok(unsat(&model));
        }
    }
    let terms = model.terms(&vars);
    let objective = match &file.objective {
        Objective::Satisfy => None,
        Objective::Minimize(e) | Objective::Maximize(e) => match model.objective_term(e) {
            Ok(t) => Some(t),
            Err(Fail::Inconsistent) => return Ok(unsat(&model)),
            Err(Fail::Contract(e)) => return Err(e.into()),
        },
    };
    let (solutions, best, search, restarts) = match (objective, &file.objective) {
        (Some((obj, offset)), goal) => {
            let optimum = if matches!(goal, Objective::Minimize(_)) {
                minimize_labeling(model.store_mut(), config.label, &terms, obj)?
            } else {
                maximize_labeling(model.store_mut(), config.label, &terms, obj)?
            };
            match optimum {
                Some(o) => (vec![o.solution.values()], Some(o.objective - offset), o.stats, o.restarts),
                None => (Vec::new(), None, SearchStats::default(), 0),
            }
        }
        (None, _) => {
            let mut l = labeling(model.store_mut(), config.label, &terms);
            let mut sols = Vec::new();
            for s in l.by_ref() {
                sols.push(s?.values());
                if config.first_only {
                    break;
                }
            }
            let stats = l.stats();
            (sols, None, stats, 0)
        }
    };
    Ok(RunOutcome {
        status: if solutions.is_empty() {
            Status::Unsatisfiable
        } else {
            Status::Solved
        },
        solutions,
        objective: best,
        stats: RunStats::collect(model.store().stats(), search, restarts, start.elapsed()),
    })
}

/// Result of one queens run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueensRun {
    /// The first solution, or all of them when requested.
    pub solutions: Vec<Vec<i64>>,
    pub stats: RunStats,
}

/// Solves n-queens with the given configuration; timing covers model
/// construction and search.
pub fn queens_run(n: usize, label: LabelOptions, level: Level, range: RangeConfig, all: bool) -> Result<QueensRun, ContractError> {
    let start = Instant::now();
    let mut q = match build_queens(n, level, range) {
        Ok(q) => q,
        Err(Fail::Inconsistent) => {
            return Ok(QueensRun {
                solutions: Vec::new(),
                stats: RunStats::default(),
            })
        }
        Err(Fail::Contract(e)) => return Err(e),
    };
    let terms: Vec<FdTerm> = q.terms.clone();
    let mut l = labeling(q.model.store_mut(), label, &terms);
    let mut solutions = Vec::new();
    for s in l.by_ref() {
        solutions.push(s?.values());
        if !all {
            break;
        }
    }
    let search = l.stats();
    let wall = start.elapsed();
    Ok(QueensRun {
        solutions,
        stats: RunStats::collect(q.model.store().stats(), search, 0, wall),
    })
}

/// First-solution queens run, as benchmarked.
pub fn queens_bench(n: usize, label: LabelOptions, level: Level, range: RangeConfig) -> Result<RunStats, ContractError> {
    Ok(queens_run(n, label, level, range, false)?.stats)
}

/// Median wall time of `reps` first-solution runs.
pub fn queens_median(n: usize, label: LabelOptions, level: Level, range: RangeConfig, reps: usize) -> Result<Duration, ContractError> {
    let mut times = (0..reps.max(1))
        .map(|_| queens_bench(n, label, level, range).map(|s| s.wall))
        .collect::<Result<Vec<_>, _>>()?;
    times.sort();
    Ok(times[times.len() / 2])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RangeArg {
    Closed,
    Open,
    Bits,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LabelArg {
    Step,
    Ff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LevelArg {
    Clpfd,
    Fd,
    Idx,
    Kernel,
}

impl From<LevelArg> for Level {
    fn from(l: LevelArg) -> Level {
        match l {
            LevelArg::Clpfd => Level::Clpfd,
            LevelArg::Fd => Level::Fd,
            LevelArg::Idx => Level::Idx,
            LevelArg::Kernel => Level::Kernel,
        }
    }
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// Range representation.
    #[arg(long, value_enum)]
    range: Option<RangeArg>,
    /// Labeling strategy.
    #[arg(long, value_enum, default_value = "step")]
    label: LabelArg,
    /// Print every solution.
    #[arg(long, conflicts_with = "first")]
    all: bool,
    /// Stop at the first solution (default).
    #[arg(long)]
    first: bool,
    /// Print statistics to standard error.
    #[arg(long)]
    stats: bool,
}

#[derive(Debug, Parser)]
#[command(name = "fdsolve", about = "Finite domain constraint solver", args_conflicts_with_subcommands = true)]
struct Cli {
    /// Model file to solve.
    model: Option<PathBuf>,
    #[command(flatten)]
    search: SearchArgs,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The n-queens benchmark.
    Queens {
        n: usize,
        /// Which implementation of the queens constraint to use.
        #[arg(long, value_enum)]
        level: Option<LevelArg>,
        #[command(flatten)]
        search: SearchArgs,
        /// Time first-solution runs and print a table of median times.
        #[arg(long)]
        bench: bool,
        /// Runs per configuration for --bench.
        #[arg(long, default_value_t = 5)]
        reps: usize,
    },
}

fn parse_universe(text: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| format!("{UNIVERSE_ENV} must look like lo..hi, got {text:?}"))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<i64>()
            .map_err(|_| format!("{UNIVERSE_ENV}: {s:?} is not an integer"))
    };
    Ok((parse(lo)?, parse(hi)?))
}

/// Range configuration for `kind`, honoring `FD_DEFAULT_UNIVERSE`.
pub fn range_config(kind: RangeKind, universe: Option<&str>) -> Result<RangeConfig, String> {
    let base = RangeConfig::for_kind(kind);
    match universe {
        None => Ok(base),
        Some(text) => {
            let (lo, hi) = parse_universe(text)?;
            base.with_universe(lo, hi)
        }
    }
}

fn kind_of(arg: RangeArg) -> RangeKind {
    match arg {
        RangeArg::Closed => RangeKind::Closed,
        RangeArg::Open => RangeKind::Open,
        RangeArg::Bits => RangeKind::Bits(DEFAULT_BITS_UNIVERSE),
    }
}

fn label_of(arg: LabelArg) -> LabelOptions {
    match arg {
        LabelArg::Step => LabelOptions::step(),
        LabelArg::Ff => LabelOptions::first_fail(),
    }
}

fn print_solution(out: &mut dyn Write, values: &[i64]) -> std::io::Result<()> {
    let items: Vec<String> = values.iter().map(i64::to_string).collect();
    writeln!(out, "[{}]", items.join(","))
}

fn print_stats(err: &mut dyn Write, stats: &RunStats) -> std::io::Result<()> {
    for line in stats.lines() {
        writeln!(err, "{line}")?;
    }
    Ok(())
}

/// Runs the command line `args` (program name first) and returns the exit
/// status.
pub fn main_with<I, T>(args: I, universe: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_SOLVED,
                _ => EXIT_USAGE,
            };
        }
    };
    match dispatch(cli, universe, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INTERNAL
        }
    }
}

fn dispatch(cli: Cli, universe: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    let config_for = |arg: Option<RangeArg>| range_config(kind_of(arg.unwrap_or(RangeArg::Closed)), universe);
    match cli.command {
        Some(Command::Queens {
            n,
            level,
            search,
            bench,
            reps,
        }) => {
            let label = label_of(search.label);
            if bench {
                let kinds = match search.range {
                    Some(r) => vec![r],
                    None => vec![RangeArg::Bits, RangeArg::Closed, RangeArg::Open],
                };
                let levels = match level {
                    Some(l) => vec![Level::from(l)],
                    None => Level::ALL.to_vec(),
                };
                let mut configs = Vec::new();
                for &k in &kinds {
                    match config_for(Some(k)) {
                        Ok(c) => configs.push(c),
                        Err(e) => {
                            writeln!(err, "error: {e}")?;
                            return Ok(EXIT_USAGE);
                        }
                    }
                }
                write!(out, "{:<24}", "queens")?;
                for c in &configs {
                    write!(out, "{:>10}", c.kind().name())?;
                }
                writeln!(out)?;
                for l in levels {
                    write!(out, "{:<24}", format!("n={n}, {}, {l}", label.mode_name()))?;
                    for &c in &configs {
                        match queens_median(n, label, l, c, reps) {
                            Ok(t) => write!(out, "{:>10.4}", t.as_secs_f64())?,
                            Err(e) => {
                                writeln!(err, "error: {e}")?;
                                return Ok(EXIT_INTERNAL);
                            }
                        }
                    }
                    writeln!(out)?;
                }
                return Ok(EXIT_SOLVED);
            }
            let range = match config_for(search.range) {
                Ok(c) => c,
                Err(e) => {
                    writeln!(err, "error: {e}")?;
                    return Ok(EXIT_USAGE);
                }
            };
            let level = level.map_or(Level::Clpfd, Level::from);
            match queens_run(n, label, level, range, search.all) {
                Ok(r) => {
                    for s in &r.solutions {
                        print_solution(out, s)?;
                    }
                    if search.stats {
                        print_stats(err, &r.stats)?;
                    }
                    if r.solutions.is_empty() {
                        writeln!(err, "unsatisfiable")?;
                        Ok(EXIT_UNSAT)
                    } else {
                        Ok(EXIT_SOLVED)
                    }
                }
                Err(e) => {
                    writeln!(err, "error: {e}")?;
                    Ok(EXIT_INTERNAL)
                }
            }
        }
        None => {
            let Some(path) = cli.model else {
                writeln!(err, "error: a model file or the queens command is required")?;
                return Ok(EXIT_USAGE);
            };
            let file = match parse_model(&path) {
                Ok(f) => f,
                Err(e) => {
                    writeln!(err, "error: {e}")?;
                    return Ok(EXIT_USAGE);
                }
            };
            let range = match config_for(cli.search.range) {
                Ok(c) => c,
                Err(e) => {
                    writeln!(err, "error: {e}")?;
                    return Ok(EXIT_USAGE);
                }
            };
            let config = RunConfig {
                range,
                label: label_of(cli.search.label),
                level: Level::Clpfd,
                first_only: !cli.search.all,
            };
            match run(&file, &config) {
                Ok(outcome) => {
                    for s in &outcome.solutions {
                        print_solution(out, s)?;
                    }
                    if let Some(v) = outcome.objective {
                        writeln!(err, "objective={v}")?;
                    }
                    if cli.search.stats {
                        print_stats(err, &outcome.stats)?;
                    }
                    Ok(match outcome.status {
                        Status::Solved => EXIT_SOLVED,
                        Status::Unsatisfiable => {
                            writeln!(err, "unsatisfiable")?;
                            EXIT_UNSAT
                        }
                    })
                }
                Err(RunError::Usage(m)) => {
                    writeln!(err, "error: {m}")?;
                    Ok(EXIT_USAGE)
                }
                Err(RunError::Contract(e)) => {
                    writeln!(err, "error: {e}")?;
                    Ok(EXIT_INTERNAL)
                }
            }
        }
    }
}

/// Entry point of the `fdsolve` binary.
pub fn main() -> i32 {
    let universe = std::env::var(UNIVERSE_ENV).ok();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    main_with(
        std::env::args_os(),
        universe.as_deref(),
        &mut stdout.lock(),
        &mut stderr.lock(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(src: &str, first_only: bool) -> RunOutcome {
        let file = parse_model_str(src).unwrap();
        run(
            &file,
            &RunConfig {
                first_only,
                ..Default::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn satisfy_all_and_first() {
        let src = "var x in 1..3; var y in 1..3; x #\\= y; solve satisfy;";
        assert_eq!(solve(src, false).solutions.len(), 6);
        let first = solve(src, true);
        assert_eq!(first.solutions, vec![vec![1, 2]]);
        assert_eq!(first.status, Status::Solved);
    }

    #[test]
    fn unsatisfiable_model() {
        let out = solve("var x in 1..3; x #> 5;", true);
        assert_eq!(out.status, Status::Unsatisfiable);
        assert!(out.solutions.is_empty());
    }

    #[test]
    fn minimize_model() {
        let out = solve("var x in 1..5; var y in 1..5; x + y #= 6; solve minimize x;", true);
        assert_eq!(out.solutions, vec![vec![1, 5]]);
        assert_eq!(out.objective, Some(1));
        let out = solve("var x in 1..5; var y in 1..5; x + y #= 6; solve maximize x - y;", true);
        assert_eq!(out.objective, Some(4));
    }

    #[test]
    fn domains_must_fit_the_universe() {
        let file = parse_model_str("var x in -1..3;").unwrap();
        assert!(matches!(run(&file, &RunConfig::default()), Err(RunError::Usage(_))));
        let open = RunConfig {
            range: RangeConfig::open(),
            ..Default::default()
        };
        assert_eq!(run(&file, &open).unwrap().solutions, vec![vec![-1]]);
    }

    #[test]
    fn universe_override() {
        let c = range_config(RangeKind::Closed, Some("-10..10")).unwrap();
        assert_eq!(c.universe(), (-10, 10));
        assert!(range_config(RangeKind::Bits(8), Some("1..10")).is_err());
        assert!(range_config(RangeKind::Closed, Some("1-10")).is_err());
    }

    fn cli(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["fdsolve"];
        full.extend_from_slice(args);
        let code = main_with(full, None, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn queens_command() {
        let (code, out, _) = cli(&["queens", "4"]);
        assert_eq!(code, EXIT_SOLVED);
        assert_eq!(out, "[2,4,1,3]\n");
        let (code, out, err) = cli(&["queens", "6", "--level", "kernel", "--all", "--range", "bits", "--stats"]);
        assert_eq!(code, EXIT_SOLVED);
        assert_eq!(out.lines().count(), 4);
        assert!(err.contains("solutions=4"));
        let (code, _, _) = cli(&["queens", "3"]);
        assert_eq!(code, EXIT_UNSAT);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(cli(&[]).0, EXIT_USAGE);
        assert_eq!(cli(&["queens", "4", "--level", "nope"]).0, EXIT_USAGE);
        assert_eq!(cli(&["/nonexistent/model.fd"]).0, EXIT_USAGE);
    }
}
