use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};

use fifteen_core::bench::{
    builtin_dataset, emit_report, load_instance_file, run_benchmark_with_cache, Algorithm,
    ReportFormat, RunConfig,
};
use fifteen_core::heuristics::{breakdown, Heuristic, HeuristicContext, WdCache, WdPattern, WdTable};
use fifteen_core::puzzle::{format_moves, parse_moves, parse_state, replay, GoalConvention, PuzzleState};
use fifteen_core::search::{ba_star, ida_star, ua_star, Budget, Schedule, SearchError};

#[derive(Parser)]
#[command(name = "fifteen", version, about = "Fifteen Puzzle solver and benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance.
    Solve(SolveArgs),
    /// Run a dataset and write a report.
    Bench(BenchArgs),
    /// Build the walking-distance table for a goal convention.
    Wdtable(WdArgs),
    /// Check a move string against an instance.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SearchOpts {
    #[arg(long, default_value = "bastar", value_parser = parse_with::<Algorithm>)]
    algorithm: Algorithm,
    #[arg(long, default_value = "hh", value_parser = parse_with::<Heuristic>)]
    heuristic: Heuristic,
    /// Expansions in each direction's first leg.
    #[arg(long, default_value_t = Schedule::default().first_leg)]
    first_leg: u64,
    /// Expansions in every later leg.
    #[arg(long, default_value_t = Schedule::default().leg)]
    leg: u64,
    /// Generated-state cap; 0 disables it.
    #[arg(long, default_value_t = fifteen_core::search::DEFAULT_MAX_GENERATED)]
    max_generated: u64,
    #[arg(long)]
    max_seconds: Option<f64>,
    /// Directory for cached walking-distance tables.
    #[arg(long)]
    wd_cache: Option<PathBuf>,
}

impl SearchOpts {
    fn schedule(&self) -> anyhow::Result<Schedule> {
        Schedule::new(self.first_leg, self.leg).map_err(|e| anyhow!(e))
    }

    fn budget(&self) -> Budget {
        Budget {
            max_generated: (self.max_generated > 0).then_some(self.max_generated),
            max_seconds: self.max_seconds,
        }
    }

    fn cache(&self) -> WdCache {
        match &self.wd_cache {
            Some(dir) => WdCache::with_dir(dir),
            None => WdCache::new(),
        }
    }
}

#[derive(Args)]
struct InstanceOpts {
    /// Sixteen tiles, row-major, 0 for the blank.
    #[arg(long, conflicts_with = "file")]
    state: Option<String>,
    /// Instance file; pick a board with --line.
    #[arg(long)]
    file: Option<PathBuf>,
    /// 1-based board number within --file.
    #[arg(long, default_value_t = 1, requires = "file")]
    line: usize,
    #[arg(long, default_value = "top-left", value_parser = parse_with::<GoalConvention>)]
    goal: GoalConvention,
}

impl InstanceOpts {
    fn start(&self) -> anyhow::Result<PuzzleState> {
        if let Some(text) = &self.state {
            return Ok(parse_state(text)?);
        }
        let Some(path) = &self.file else {
            bail!("give --state or --file");
        };
        let ds = load_instance_file(path, self.goal)?;
        ds.instances
            .get(self.line.wrapping_sub(1))
            .map(|i| i.start)
            .ok_or_else(|| anyhow!("{} has {} boards, asked for {}", path.display(), ds.len(), self.line))
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    instance: InstanceOpts,
    #[command(flatten)]
    search: SearchOpts,
}

#[derive(Args)]
struct BenchArgs {
    /// korf100, hard28, abc25, or an instance file.
    dataset: String,
    /// Goal for instance files; built-ins carry their own.
    #[arg(long, default_value = "top-left", value_parser = parse_with::<GoalConvention>)]
    goal: GoalConvention,
    /// Comma-separated instance ids to keep.
    #[arg(long, value_delimiter = ',')]
    ids: Vec<u32>,
    #[command(flatten)]
    search: SearchOpts,
    #[arg(long, default_value = "csv", value_parser = parse_with::<ReportFormat>)]
    format: ReportFormat,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct WdArgs {
    #[arg(long, default_value = "bottom-right", value_parser = parse_with::<GoalConvention>)]
    goal: GoalConvention,
    /// Save the table to this file.
    #[arg(long)]
    write: Option<PathBuf>,
    /// Load the table from this file instead of building it.
    #[arg(long, conflicts_with = "write")]
    read: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    instance: InstanceOpts,
    /// Blank moves as U/D/L/R.
    #[arg(long)]
    moves: String,
}

fn parse_with<T: std::str::FromStr<Err = String>>(s: &str) -> Result<T, String> {
    s.parse()
}

/// Failures that map to exit code 1; everything else is a usage error.
#[derive(Debug)]
struct SolveFailure(String);

impl std::fmt::Display for SolveFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for SolveFailure {}

fn solve(args: SolveArgs) -> anyhow::Result<()> {
    let start = args.instance.start()?;
    let goal = args.instance.goal.goal_state();
    let opts = &args.search;
    let schedule = opts.schedule()?;
    if opts.algorithm == Algorithm::IdaStar && !opts.heuristic.is_admissible() {
        bail!("idastar needs --heuristic md or mdlc");
    }
    let cache = opts.cache();
    let ctx = HeuristicContext::with_cache(goal, &cache)?;
    let b = breakdown(&start, &ctx)?;
    let budget = opts.budget();
    let result = match opts.algorithm {
        Algorithm::BaStar => {
            let back = HeuristicContext::with_cache(start, &cache)?;
            ba_star(&start, &goal, &ctx, &back, opts.heuristic, schedule, &budget)
        }
        Algorithm::UaStar => ua_star(&start, &goal, &ctx, opts.heuristic, &budget),
        Algorithm::IdaStar => ida_star(&start, &goal, &ctx, opts.heuristic, &budget),
    };
    println!("start: {start}");
    println!("goal: {}", args.instance.goal);
    println!(
        "md: {}  wd: {} (rows {}, cols {})  lc: {}  hh: {} ({})",
        b.md,
        b.wd.total(),
        b.wd.rows,
        b.wd.cols,
        b.lc,
        b.hh_x3,
        b.hh()
    );
    match result {
        Ok(r) => {
            println!("length: {}", r.length);
            println!("generated: {}", r.generated);
            println!("expanded: {}", r.expanded);
            println!("moves: {}", format_moves(&r.moves));
            Ok(())
        }
        Err(e @ (SearchError::BudgetExceeded { .. } | SearchError::Unsolvable)) => {
            Err(SolveFailure(e.to_string()).into())
        }
        Err(e) => Err(e.into()),
    }
}

fn bench(args: BenchArgs) -> anyhow::Result<()> {
    let mut ds = match builtin_dataset(&args.dataset) {
        Some(ds) => ds?,
        None => load_instance_file(&args.dataset, args.goal)?,
    };
    if !args.ids.is_empty() {
        ds.instances.retain(|i| args.ids.contains(&i.id));
    }
    let cfg = RunConfig {
        algorithm: args.search.algorithm,
        heuristic: args.search.heuristic,
        schedule: args.search.schedule()?,
        budget: args.search.budget(),
        parallel_instances: args.jobs,
    };
    let rows = run_benchmark_with_cache(&ds, &cfg, &args.search.cache())?;
    match &args.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            emit_report(&rows, args.format, &mut w)?;
            w.flush()?;
        }
        None => emit_report(&rows, args.format, io::stdout().lock())?,
    }
    Ok(())
}

fn wdtable(args: WdArgs) -> anyhow::Result<()> {
    let blank = args.goal.goal_state().blank_pos();
    // both goals put the blank in an edge row, and the row table serves columns too
    let root = WdPattern::root(blank / 4);
    let table = match &args.read {
        Some(path) => WdTable::load(path)?,
        None => WdTable::build(root)?,
    };
    if table.root() != root {
        bail!("table in file is rooted for a different goal");
    }
    let mut out = io::stdout().lock();
    writeln!(out, "{} entries, max {}", table.len(), table.max_distance())?;
    for (d, n) in table.histogram().iter().enumerate() {
        writeln!(out, "{d:>2} {n}")?;
    }
    if let Some(path) = &args.write {
        if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        table.save(path)?;
        writeln!(out, "wrote {}", path.display())?;
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> anyhow::Result<()> {
    let start = args.instance.start()?;
    let goal = args.instance.goal.goal_state();
    let moves = parse_moves(&args.moves)?;
    match replay(&start, &moves) {
        Ok(end) if end == goal => {
            println!("ok: {} moves reach the goal", moves.len());
            Ok(())
        }
        Ok(end) => Err(SolveFailure(format!("fail: moves end at {end}, not the goal")).into()),
        Err(e) => Err(SolveFailure(format!("fail: {e}")).into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Bench(a) => bench(a),
        Command::Wdtable(a) => wdtable(a),
        Command::Verify(a) => verify(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<SolveFailure>() => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
