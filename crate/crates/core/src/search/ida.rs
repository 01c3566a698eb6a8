use super::{Budget, BudgetLimit, BudgetTracker, DirectionStats, SearchError, SolveResult};
use crate::heuristics::{line_conflict, Heuristic, HeuristicContext};
use crate::puzzle::{is_solvable_to, Move, PuzzleState, CELLS, SIDE};

enum Flow {
    Found,
    Over(u32),
    Abort(BudgetLimit),
}

struct Ida<'a> {
    ctx: &'a HeuristicContext,
    use_lc: bool,
    tiles: [u8; CELLS],
    blank: usize,
    row_lc: [u32; SIDE],
    col_lc: [u32; SIDE],
    path: Vec<Move>,
    tracker: BudgetTracker,
    expanded: u64,
    generated: u64,
}

impl Ida<'_> {
    fn lc_total(&self) -> u32 {
        self.row_lc.iter().sum::<u32>() + self.col_lc.iter().sum::<u32>()
    }

    fn dfs(&mut self, g: u32, md: u32, bound: u32, prev: Option<Move>) -> Flow {
        let h = md + if self.use_lc { self.lc_total() } else { 0 };
        if g + h > bound {
            return Flow::Over(g + h);
        }
        if md == 0 {
            return Flow::Found;
        }
        self.expanded += 1;
        let mut next = u32::MAX;
        for m in Move::ALL {
            if prev == Some(m.inverse()) {
                continue;
            }
            let Some(to) = m.target_cell(self.blank) else { continue };
            let from = self.blank;
            let tile = self.tiles[to];
            let child_md = md + self.ctx.tile_md(tile, from) - self.ctx.tile_md(tile, to);
            self.tiles.swap(from, to);
            self.blank = to;
            let saved = self.touch_lines(m, from, to);
            self.generated += 1;
            if self.tracker.generated_exhausted(self.generated) {
                return Flow::Abort(BudgetLimit::Generated);
            }
            if self.generated & 0xFFFF == 0 && self.tracker.time_exhausted() {
                return Flow::Abort(BudgetLimit::Time);
            }
            self.path.push(m);
            let flow = self.dfs(g + 1, child_md, bound, Some(m));
            match flow {
                Flow::Found | Flow::Abort(_) => return flow,
                Flow::Over(f) => next = next.min(f),
            }
            self.path.pop();
            self.restore_lines(m, from, to, saved);
            self.tiles.swap(from, to);
            self.blank = from;
        }
        Flow::Over(next)
    }

    /// Recomputes the two lines whose membership changed. A vertical blank move
    /// carries a tile between rows; a horizontal one between columns.
    fn touch_lines(&mut self, m: Move, from: usize, to: usize) -> (u32, u32) {
        if !self.use_lc {
            return (0, 0);
        }
        let rows = m.is_vertical();
        let (a, b) = if rows {
            (from / SIDE, to / SIDE)
        } else {
            (from % SIDE, to % SIDE)
        };
        let lines = if rows { &mut self.row_lc } else { &mut self.col_lc };
        let saved = (lines[a], lines[b]);
        lines[a] = line_conflict(&self.tiles, self.ctx, a, rows);
        lines[b] = line_conflict(&self.tiles, self.ctx, b, rows);
        saved
    }

    fn restore_lines(&mut self, m: Move, from: usize, to: usize, saved: (u32, u32)) {
        if !self.use_lc {
            return;
        }
        let rows = m.is_vertical();
        let (a, b) = if rows {
            (from / SIDE, to / SIDE)
        } else {
            (from % SIDE, to % SIDE)
        };
        let lines = if rows { &mut self.row_lc } else { &mut self.col_lc };
        lines[a] = saved.0;
        lines[b] = saved.1;
    }
}

/// Iterative-deepening A*; optimal with an admissible heuristic.
pub fn ida_star(
    start: &PuzzleState,
    goal: &PuzzleState,
    ctx: &HeuristicContext,
    heuristic: Heuristic,
    budget: &Budget,
) -> Result<SolveResult, SearchError> {
    ida_star_traced(start, goal, ctx, heuristic, budget).map(|(r, _)| r)
}

/// As [`ida_star`], also returning the f-bound of every iteration.
pub fn ida_star_traced(
    start: &PuzzleState,
    goal: &PuzzleState,
    ctx: &HeuristicContext,
    heuristic: Heuristic,
    budget: &Budget,
) -> Result<(SolveResult, Vec<u32>), SearchError> {
    if !heuristic.is_admissible() {
        return Err(SearchError::InadmissibleHeuristic(heuristic));
    }
    if ctx.target() != goal {
        return Err(SearchError::ContextMismatch);
    }
    if !is_solvable_to(start, goal) {
        return Err(SearchError::Unsolvable);
    }
    let use_lc = heuristic == Heuristic::MdLc;
    let tiles = *start.tiles();
    let mut ida = Ida {
        ctx,
        use_lc,
        tiles,
        blank: start.blank_pos(),
        row_lc: [0; SIDE],
        col_lc: [0; SIDE],
        path: Vec::new(),
        tracker: BudgetTracker::new(budget),
        expanded: 0,
        generated: 0,
    };
    if use_lc {
        for line in 0..SIDE {
            ida.row_lc[line] = line_conflict(&tiles, ctx, line, true);
            ida.col_lc[line] = line_conflict(&tiles, ctx, line, false);
        }
    }
    let md: u32 = tiles
        .iter()
        .enumerate()
        .map(|(cell, &t)| ctx.tile_md(t, cell))
        .sum();
    let mut bound = md + ida.lc_total();
    let mut thresholds = Vec::new();
    loop {
        thresholds.push(bound);
        match ida.dfs(0, md, bound, None) {
            Flow::Found => {
                let stats = DirectionStats {
                    generated: ida.generated,
                    expanded: ida.expanded,
                };
                return Ok((SolveResult::new(ida.path, vec![stats]), thresholds));
            }
            Flow::Abort(limit) => {
                return Err(SearchError::BudgetExceeded {
                    limit,
                    generated: ida.generated,
                    expanded: ida.expanded,
                })
            }
            Flow::Over(u32::MAX) => return Err(SearchError::FrontierExhausted),
            Flow::Over(next) => bound = next,
        }
    }
}
