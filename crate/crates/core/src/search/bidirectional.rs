//! Bidirectional A* with alternating expansion legs.
//!
//! The forward direction searches from the start toward the goal, the backward
//! direction from the goal toward the start using a heuristic context rooted at the
//! start. Directions alternate: each runs `first_leg` expansions on its first turn
//! and `leg` expansions afterwards. The search stops at the first state found in
//! both seen maps, either when it is generated or when it is popped.

use super::frontier::{DirectionState, OnGenerate, SeenMap};
use super::{
    Budget, BudgetLimit, BudgetTracker, DirectionStats, Schedule, SearchError, SolveResult,
};
use crate::heuristics::{Heuristic, HeuristicContext};
use crate::puzzle::{is_solvable_to, Move, PuzzleState, StateKey};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    fn index(self) -> usize {
        match self {
            Direction::Forward => 0,
            Direction::Backward => 1,
        }
    }

    fn other(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

#[derive(Debug)]
pub enum LegOutcome {
    /// The leg used its whole quota; `expanded` is that direction's running total.
    Yielded { direction: Direction, expanded: u64 },
    Solved(SolveResult),
}

/// Joins a forward chain ending at `meet` with a backward chain ending there. The
/// backward chain is walked from `meet` toward the goal, inverting each move.
pub fn stitch_paths(
    forward: &SeenMap,
    backward: &SeenMap,
    meet: StateKey,
) -> Result<Vec<Move>, SearchError> {
    let mut moves = forward.path_to(meet)?;
    let back = backward.path_to(meet)?;
    moves.extend(back.iter().rev().map(|m| m.inverse()));
    Ok(moves)
}

/// Resumable bidirectional search. [`ba_star`] drives it to completion; tests step
/// it leg by leg.
pub struct BidirectionalSearch<'a> {
    dirs: [DirectionState<'a>; 2],
    schedule: Schedule,
    tracker: BudgetTracker,
    active: Direction,
    legs: [u64; 2],
    yields: Vec<(Direction, u64)>,
    finished: bool,
}

impl<'a> BidirectionalSearch<'a> {
    pub fn new(
        start: &PuzzleState,
        goal: &PuzzleState,
        ctx_forward: &'a HeuristicContext,
        ctx_backward: &'a HeuristicContext,
        heuristic: Heuristic,
        schedule: Schedule,
        budget: &Budget,
    ) -> Result<Self, SearchError> {
        if ctx_forward.target() != goal || ctx_backward.target() != start {
            return Err(SearchError::ContextMismatch);
        }
        if !is_solvable_to(start, goal) {
            return Err(SearchError::Unsolvable);
        }
        Ok(BidirectionalSearch {
            dirs: [
                DirectionState::new(*start, ctx_forward, heuristic)?,
                DirectionState::new(*goal, ctx_backward, heuristic)?,
            ],
            schedule,
            tracker: BudgetTracker::new(budget),
            active: Direction::Forward,
            legs: [0, 0],
            yields: Vec::new(),
            finished: false,
        })
    }

    /// `(direction, expansions so far in that direction)` at every completed leg.
    pub fn yields(&self) -> &[(Direction, u64)] {
        &self.yields
    }

    pub fn stats(&self, d: Direction) -> DirectionStats {
        let dir = &self.dirs[d.index()];
        DirectionStats {
            generated: dir.generated,
            expanded: dir.expanded,
        }
    }

    pub fn seen(&self, d: Direction) -> &SeenMap {
        &self.dirs[d.index()].seen
    }

    fn totals(&self) -> (u64, u64) {
        (
            self.dirs[0].generated + self.dirs[1].generated,
            self.dirs[0].expanded + self.dirs[1].expanded,
        )
    }

    fn finish(&mut self, meet: StateKey) -> Result<LegOutcome, SearchError> {
        self.finished = true;
        let (fwd, bwd) = (&self.dirs[0].seen, &self.dirs[1].seen);
        let moves = stitch_paths(fwd, bwd, meet)?;
        let g_f = fwd.record(meet).map_or(0, |r| r.g);
        let g_b = bwd.record(meet).map_or(0, |r| r.g);
        let mut result = SolveResult::new(
            moves,
            vec![self.stats(Direction::Forward), self.stats(Direction::Backward)],
        );
        result.meet_key = Some(meet);
        result.met_in_middle = g_f > 0 && g_b > 0;
        Ok(LegOutcome::Solved(result))
    }

    fn budget_error(&self, limit: BudgetLimit) -> SearchError {
        let (generated, expanded) = self.totals();
        SearchError::BudgetExceeded {
            limit,
            generated,
            expanded,
        }
    }

    /// Runs the active direction for one leg.
    pub fn run_leg(&mut self) -> Result<LegOutcome, SearchError> {
        assert!(!self.finished, "search already finished");
        let d = self.active;
        let quota = if self.legs[d.index()] == 0 {
            self.schedule.first_leg
        } else {
            self.schedule.leg
        };
        let (a, b) = self.dirs.split_at_mut(1);
        let (this, other) = match d {
            Direction::Forward => (&mut a[0], &b[0]),
            Direction::Backward => (&mut b[0], &a[0]),
        };
        let base_generated = other.generated;
        let tracker = &self.tracker;
        let mut over_budget = false;
        for _ in 0..quota {
            let (key, rec) = this.pop().ok_or(SearchError::FrontierExhausted)?;
            if other.seen.contains(key) {
                return self.finish(key);
            }
            if tracker.time_exhausted() {
                return Err(self.budget_error(BudgetLimit::Time));
            }
            let hit = this.expand(key, rec, |child, generated| {
                if other.seen.contains(child) {
                    OnGenerate::Stop
                } else if tracker.generated_exhausted(base_generated + generated) {
                    over_budget = true;
                    OnGenerate::Stop
                } else {
                    OnGenerate::Continue
                }
            })?;
            if over_budget {
                return Err(self.budget_error(BudgetLimit::Generated));
            }
            if let Some(meet) = hit {
                return self.finish(meet);
            }
        }
        self.legs[d.index()] += 1;
        let expanded = self.dirs[d.index()].expanded;
        self.yields.push((d, expanded));
        self.active = d.other();
        Ok(LegOutcome::Yielded {
            direction: d,
            expanded,
        })
    }

    pub fn run(mut self) -> Result<SolveResult, SearchError> {
        loop {
            if let LegOutcome::Solved(r) = self.run_leg()? {
                return Ok(r);
            }
        }
    }
}

/// Bidirectional A*. `ctx_forward` must target `goal`, `ctx_backward` must target
/// `start`.
pub fn ba_star(
    start: &PuzzleState,
    goal: &PuzzleState,
    ctx_forward: &HeuristicContext,
    ctx_backward: &HeuristicContext,
    heuristic: Heuristic,
    schedule: Schedule,
    budget: &Budget,
) -> Result<SolveResult, SearchError> {
    BidirectionalSearch::new(
        start,
        goal,
        ctx_forward,
        ctx_backward,
        heuristic,
        schedule,
        budget,
    )?
    .run()
}
