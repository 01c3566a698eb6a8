//! Manhattan distance, linear conflict, walking distance, and their hybrid.
//!
//! Every heuristic is evaluated against a [`HeuristicContext`], which fixes the
//! target board. The forward search targets the goal; the backward search targets
//! the start state, so its walking-distance tables are rooted there.
//!
//! The hybrid value `md/3 + wd + lc` is carried exactly as an integer count of
//! thirds ([`ThirdsValue`]).

pub mod wd;

use std::fmt;
use std::io;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::puzzle::{PuzzleState, CELLS, SIDE};
pub use wd::{WdPattern, WdTable};

#[derive(Debug, Error)]
pub enum HeuristicError {
    #[error("invalid walking-distance pattern {0:#x}")]
    InvalidPattern(u64),
    #[error("pattern {0:#x} missing from walking-distance table")]
    PatternNotInTable(u64),
    #[error("walking-distance cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// A heuristic value scaled by three, so that `md/3` stays integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ThirdsValue(pub u32);

impl ThirdsValue {
    pub fn value_x3(self) -> u32 {
        self.0
    }

    /// Nearest integer. Fractions are only 0, 1/3 or 2/3, so there are no ties.
    pub fn rounded(self) -> u32 {
        (self.0 + 1) / 3
    }
}

impl fmt::Display for ThirdsValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 % 3 {
            0 => write!(f, "{}", self.0 / 3),
            1 => write!(f, "{} 1/3", self.0 / 3),
            _ => write!(f, "{} 2/3", self.0 / 3),
        }
    }
}

/// Shares walking-distance tables between contexts with the same root.
#[derive(Debug, Default)]
pub struct WdCache {
    tables: Mutex<FxHashMap<u64, Arc<WdTable>>>,
    dir: Option<PathBuf>,
}

impl WdCache {
    pub fn new() -> WdCache {
        WdCache::default()
    }

    /// Also persists tables under `dir` (see [`WdTable::load_or_build`]).
    pub fn with_dir(dir: impl Into<PathBuf>) -> WdCache {
        WdCache {
            tables: Mutex::default(),
            dir: Some(dir.into()),
        }
    }

    pub fn get(&self, root: WdPattern) -> Result<Arc<WdTable>, HeuristicError> {
        let key = root.pack();
        if let Some(t) = self.tables.lock().unwrap().get(&key) {
            return Ok(Arc::clone(t));
        }
        // built outside the lock; a racing duplicate build is harmless
        let table = Arc::new(match &self.dir {
            Some(dir) => WdTable::load_or_build(dir, root)?,
            None => WdTable::build(root)?,
        });
        let mut tables = self.tables.lock().unwrap();
        Ok(Arc::clone(tables.entry(key).or_insert(table)))
    }
}

/// Target board plus everything precomputed from it.
#[derive(Clone)]
pub struct HeuristicContext {
    target: PuzzleState,
    target_row: [u8; CELLS],
    target_col: [u8; CELLS],
    /// `md[tile][cell]`, zero for the blank.
    md: [[u8; CELLS]; CELLS],
    wd_rows: Arc<WdTable>,
    wd_cols: Arc<WdTable>,
}

impl fmt::Debug for HeuristicContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HeuristicContext")
            .field("target", &self.target)
            .finish_non_exhaustive()
    }
}

impl HeuristicContext {
    /// Builds both walking-distance tables from scratch.
    pub fn new(target: PuzzleState) -> Result<HeuristicContext, HeuristicError> {
        HeuristicContext::with_cache(target, &WdCache::new())
    }

    pub fn with_cache(
        target: PuzzleState,
        cache: &WdCache,
    ) -> Result<HeuristicContext, HeuristicError> {
        let mut target_row = [0u8; CELLS];
        let mut target_col = [0u8; CELLS];
        for (cell, &t) in target.tiles().iter().enumerate() {
            target_row[t as usize] = (cell / SIDE) as u8;
            target_col[t as usize] = (cell % SIDE) as u8;
        }
        let mut md = [[0u8; CELLS]; CELLS];
        for tile in 1..CELLS {
            for cell in 0..CELLS {
                md[tile][cell] = ((cell / SIDE).abs_diff(target_row[tile] as usize)
                    + (cell % SIDE).abs_diff(target_col[tile] as usize))
                    as u8;
            }
        }
        let blank = target.blank_pos();
        let wd_rows = cache.get(WdPattern::root(blank / SIDE))?;
        let wd_cols = cache.get(WdPattern::root(blank % SIDE))?;
        Ok(HeuristicContext {
            target,
            target_row,
            target_col,
            md,
            wd_rows,
            wd_cols,
        })
    }

    pub fn target(&self) -> &PuzzleState {
        &self.target
    }

    /// `(row, col)` of `tile` on the target board.
    pub fn target_pos(&self, tile: u8) -> (usize, usize) {
        (
            self.target_row[tile as usize] as usize,
            self.target_col[tile as usize] as usize,
        )
    }

    pub fn wd_rows(&self) -> &WdTable {
        &self.wd_rows
    }

    pub fn wd_cols(&self) -> &WdTable {
        &self.wd_cols
    }

    #[inline]
    pub(crate) fn tile_md(&self, tile: u8, cell: usize) -> u32 {
        self.md[tile as usize][cell] as u32
    }
}

#[inline]
pub fn manhattan(state: &PuzzleState, ctx: &HeuristicContext) -> u32 {
    state
        .tiles()
        .iter()
        .enumerate()
        .map(|(cell, &t)| ctx.tile_md(t, cell))
        .sum()
}

/// Fewest tiles to drop from `seq` so the rest is increasing. Greedy: repeatedly
/// remove the tile involved in the most inversions.
fn greedy_removals(seq: &[u8]) -> u8 {
    let mut alive: Vec<u8> = seq.to_vec();
    let mut removed = 0;
    loop {
        let mut best = (0usize, 0usize);
        for i in 0..alive.len() {
            let conflicts = (0..alive.len())
                .filter(|&j| (j < i && alive[j] > alive[i]) || (j > i && alive[j] < alive[i]))
                .count();
            if conflicts > best.1 {
                best = (i, conflicts);
            }
        }
        if best.1 == 0 {
            return removed;
        }
        alive.remove(best.0);
        removed += 1;
    }
}

/// Lookup of `greedy_removals` for every sequence of at most four distinct values
/// in `0..4`, indexed by base-5 digits (`value + 1`, `0` = end).
fn removal_table() -> &'static [u8; 625] {
    static TABLE: OnceLock<[u8; 625]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [0u8; 625];
        for (code, slot) in table.iter_mut().enumerate() {
            let mut seq = Vec::new();
            let mut c = code;
            for _ in 0..4 {
                let d = c % 5;
                c /= 5;
                if d == 0 {
                    break;
                }
                seq.push(d as u8 - 1);
            }
            *slot = greedy_removals(&seq);
        }
        table
    })
}

/// Extra moves contributed by one board line.
#[inline]
pub(crate) fn line_conflict(tiles: &[u8; CELLS], ctx: &HeuristicContext, line: usize, rows: bool) -> u32 {
    let table = removal_table();
    let mut code = 0usize;
    let mut scale = 1usize;
    for k in 0..SIDE {
        let cell = if rows { line * SIDE + k } else { k * SIDE + line };
        let t = tiles[cell] as usize;
        if t == 0 {
            continue;
        }
        let (own, along) = if rows {
            (ctx.target_row[t], ctx.target_col[t])
        } else {
            (ctx.target_col[t], ctx.target_row[t])
        };
        if own as usize == line {
            code += (along as usize + 1) * scale;
            scale *= 5;
        }
    }
    2 * table[code] as u32
}

/// Two moves per tile that has to leave its target line so the remaining tiles of
/// that line are in order; rows and columns summed.
pub fn linear_conflict(state: &PuzzleState, ctx: &HeuristicContext) -> u32 {
    (0..SIDE)
        .map(|line| {
            line_conflict(state.tiles(), ctx, line, true)
                + line_conflict(state.tiles(), ctx, line, false)
        })
        .sum()
}

/// Row-membership pattern of `state` against the target's rows.
#[inline]
pub fn row_pattern(state: &PuzzleState, ctx: &HeuristicContext) -> WdPattern {
    let mut counts = [[0u8; SIDE]; SIDE];
    for (cell, &t) in state.tiles().iter().enumerate() {
        if t != 0 {
            counts[cell / SIDE][ctx.target_row[t as usize] as usize] += 1;
        }
    }
    WdPattern {
        counts,
        blank_line: (state.blank_pos() / SIDE) as u8,
    }
}

/// Column-membership pattern of `state` against the target's columns.
#[inline]
pub fn col_pattern(state: &PuzzleState, ctx: &HeuristicContext) -> WdPattern {
    let mut counts = [[0u8; SIDE]; SIDE];
    for (cell, &t) in state.tiles().iter().enumerate() {
        if t != 0 {
            counts[cell % SIDE][ctx.target_col[t as usize] as usize] += 1;
        }
    }
    WdPattern {
        counts,
        blank_line: (state.blank_pos() % SIDE) as u8,
    }
}

/// Walking distance split into its row part (tiles to target rows, blank moving
/// up/down) and column part.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkingDistance {
    pub rows: u32,
    pub cols: u32,
}

impl WalkingDistance {
    pub fn total(&self) -> u32 {
        self.rows + self.cols
    }
}

pub fn walking_distance_parts(
    state: &PuzzleState,
    ctx: &HeuristicContext,
) -> Result<WalkingDistance, HeuristicError> {
    let rk = row_pattern(state, ctx).pack();
    let ck = col_pattern(state, ctx).pack();
    let rows = ctx
        .wd_rows
        .distance_of_key(rk)
        .ok_or(HeuristicError::PatternNotInTable(rk))?;
    let cols = ctx
        .wd_cols
        .distance_of_key(ck)
        .ok_or(HeuristicError::PatternNotInTable(ck))?;
    Ok(WalkingDistance {
        rows: rows as u32,
        cols: cols as u32,
    })
}

#[inline]
pub fn walking_distance(state: &PuzzleState, ctx: &HeuristicContext) -> Result<u32, HeuristicError> {
    walking_distance_parts(state, ctx).map(|w| w.total())
}

/// `md + 3 * wd + 3 * lc`, i.e. three times `md/3 + wd + lc`.
#[inline]
pub fn hybrid_h3(state: &PuzzleState, ctx: &HeuristicContext) -> Result<ThirdsValue, HeuristicError> {
    let md = manhattan(state, ctx);
    let wd = walking_distance(state, ctx)?;
    let lc = linear_conflict(state, ctx);
    Ok(ThirdsValue(md + 3 * wd + 3 * lc))
}

/// The hybrid value rounded to the nearest whole move.
pub fn hh_report(state: &PuzzleState, ctx: &HeuristicContext) -> Result<u32, HeuristicError> {
    hybrid_h3(state, ctx).map(ThirdsValue::rounded)
}

/// Heuristic choice for the solvers. All variants evaluate in thirds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Heuristic {
    Md,
    MdLc,
    Hybrid,
}

impl Heuristic {
    pub fn is_admissible(self) -> bool {
        !matches!(self, Heuristic::Hybrid)
    }

    #[inline]
    pub fn eval_x3(self, state: &PuzzleState, ctx: &HeuristicContext) -> Result<u32, HeuristicError> {
        Ok(match self {
            Heuristic::Md => 3 * manhattan(state, ctx),
            Heuristic::MdLc => 3 * (manhattan(state, ctx) + linear_conflict(state, ctx)),
            Heuristic::Hybrid => hybrid_h3(state, ctx)?.0,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Heuristic::Md => "md",
            Heuristic::MdLc => "mdlc",
            Heuristic::Hybrid => "hh",
        }
    }
}

impl FromStr for Heuristic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "md" => Ok(Heuristic::Md),
            "mdlc" | "md+lc" => Ok(Heuristic::MdLc),
            "hh" | "hybrid" => Ok(Heuristic::Hybrid),
            other => Err(format!("unknown heuristic `{other}`")),
        }
    }
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// All heuristic components of one state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Breakdown {
    pub md: u32,
    pub wd: WalkingDistance,
    pub lc: u32,
    pub hh_x3: ThirdsValue,
}

impl Breakdown {
    pub fn hh(&self) -> u32 {
        self.hh_x3.rounded()
    }
}

pub fn breakdown(state: &PuzzleState, ctx: &HeuristicContext) -> Result<Breakdown, HeuristicError> {
    let md = manhattan(state, ctx);
    let wd = walking_distance_parts(state, ctx)?;
    let lc = linear_conflict(state, ctx);
    Ok(Breakdown {
        md,
        wd,
        lc,
        hh_x3: ThirdsValue(md + 3 * wd.total() + 3 * lc),
    })
}
