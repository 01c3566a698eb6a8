use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use super::dataset::{Dataset, Instance};
use crate::heuristics::{breakdown, Heuristic, HeuristicContext, WdCache};
use crate::puzzle::Move;
use crate::search::{
    ba_star, ida_star, ua_star, verify_solution, Budget, Schedule, SearchError, SolveResult,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    BaStar,
    UaStar,
    IdaStar,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::BaStar => "bastar",
            Algorithm::UaStar => "uastar",
            Algorithm::IdaStar => "idastar",
        }
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bastar" => Ok(Algorithm::BaStar),
            "uastar" => Ok(Algorithm::UaStar),
            "idastar" => Ok(Algorithm::IdaStar),
            other => Err(format!("unknown algorithm `{other}` (bastar, uastar, idastar)")),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("idastar needs an admissible heuristic (md or mdlc), got `{0}`")]
    InadmissibleForIda(Heuristic),
    #[error("parallel_instances must be at least 1")]
    NoWorkers,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub heuristic: Heuristic,
    pub schedule: Schedule,
    pub budget: Budget,
    pub parallel_instances: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            algorithm: Algorithm::BaStar,
            heuristic: Heuristic::Hybrid,
            schedule: Schedule::default(),
            budget: Budget::default(),
            parallel_instances: 1,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.algorithm == Algorithm::IdaStar && !self.heuristic.is_admissible() {
            return Err(ConfigError::InadmissibleForIda(self.heuristic));
        }
        if self.parallel_instances == 0 {
            return Err(ConfigError::NoWorkers);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Solved,
    BudgetExceeded,
    Unsolvable,
}

impl RowStatus {
    pub fn name(self) -> &'static str {
        match self {
            RowStatus::Solved => "solved",
            RowStatus::BudgetExceeded => "budget_exceeded",
            RowStatus::Unsolvable => "unsolvable",
        }
    }
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One instance's outcome. Heuristic columns describe the start state against the
/// forward goal and are filled in whatever the status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRow {
    pub id: u32,
    pub length: Option<u32>,
    pub generated: u64,
    pub expanded: u64,
    pub md: u32,
    pub wd: u32,
    pub lc: u32,
    pub hh: u32,
    pub hh_x3: u32,
    pub optimal: Option<u32>,
    pub delta: Option<i64>,
    pub time_ms: u64,
    pub status: RowStatus,
    pub solution: Vec<Move>,
}

fn solve(
    inst: &Instance,
    ctx: &HeuristicContext,
    cache: &WdCache,
    cfg: &RunConfig,
) -> Result<SolveResult, SearchError> {
    let goal = inst.goal();
    match cfg.algorithm {
        Algorithm::BaStar => {
            let back = HeuristicContext::with_cache(inst.start, cache)?;
            ba_star(&inst.start, &goal, ctx, &back, cfg.heuristic, cfg.schedule, &cfg.budget)
        }
        Algorithm::UaStar => ua_star(&inst.start, &goal, ctx, cfg.heuristic, &cfg.budget),
        Algorithm::IdaStar => ida_star(&inst.start, &goal, ctx, cfg.heuristic, &cfg.budget),
    }
}

fn run_instance(inst: &Instance, cfg: &RunConfig, cache: &WdCache) -> ReportRow {
    let goal = inst.goal();
    let ctx = HeuristicContext::with_cache(goal, cache).expect("walking-distance tables build");
    let b = breakdown(&inst.start, &ctx).expect("start pattern is in the table");
    let clock = Instant::now();
    let outcome = solve(inst, &ctx, cache, cfg);
    let time_ms = clock.elapsed().as_millis() as u64;
    let mut row = ReportRow {
        id: inst.id,
        length: None,
        generated: 0,
        expanded: 0,
        md: b.md,
        wd: b.wd.total(),
        lc: b.lc,
        hh: b.hh(),
        hh_x3: b.hh_x3.value_x3(),
        optimal: inst.optimal_len,
        delta: None,
        time_ms,
        status: RowStatus::Solved,
        solution: Vec::new(),
    };
    match outcome {
        Ok(result) => {
            assert!(
                verify_solution(&inst.start, &result, &goal),
                "instance {}: solver returned a path that does not reach the goal",
                inst.id
            );
            row.length = Some(result.length as u32);
            row.generated = result.generated;
            row.expanded = result.expanded;
            row.delta = inst.optimal_len.map(|o| result.length as i64 - o as i64);
            row.solution = result.moves;
        }
        Err(SearchError::BudgetExceeded {
            generated,
            expanded,
            ..
        }) => {
            row.status = RowStatus::BudgetExceeded;
            row.generated = generated;
            row.expanded = expanded;
        }
        Err(SearchError::Unsolvable | SearchError::FrontierExhausted) => {
            row.status = RowStatus::Unsolvable;
        }
        Err(e) => panic!("instance {}: {e}", inst.id),
    }
    row
}

/// Solves every instance; rows come back in dataset order.
pub fn run_benchmark(ds: &Dataset, cfg: &RunConfig) -> Result<Vec<ReportRow>, ConfigError> {
    run_benchmark_with_cache(ds, cfg, &WdCache::new())
}

/// As [`run_benchmark`], sharing walking-distance tables through `cache`.
pub fn run_benchmark_with_cache(
    ds: &Dataset,
    cfg: &RunConfig,
    cache: &WdCache,
) -> Result<Vec<ReportRow>, ConfigError> {
    cfg.validate()?;
    if cfg.parallel_instances == 1 {
        return Ok(ds.instances.iter().map(|i| run_instance(i, cfg, cache)).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallel_instances)
        .build()
        .expect("thread pool");
    Ok(pool.install(|| {
        ds.instances
            .par_iter()
            .map(|i| run_instance(i, cfg, cache))
            .collect()
    }))
}
