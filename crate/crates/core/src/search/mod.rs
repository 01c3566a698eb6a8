//! Solvers: bidirectional A*, unidirectional A*, and IDA*.
//!
//! The A* variants keep every generated state and never reopen one, so with the
//! inadmissible hybrid heuristic they trade optimality for small frontiers. IDA*
//! with an admissible heuristic is the optimal reference.

mod astar;
mod bidirectional;
mod frontier;
mod ida;

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::heuristics::{Heuristic, HeuristicError};
use crate::puzzle::{replay, Move, PuzzleState, StateKey};

pub use astar::ua_star;
pub use bidirectional::{ba_star, stitch_paths, BidirectionalSearch, Direction, LegOutcome};
pub use frontier::SeenMap;
pub use ida::{ida_star, ida_star_traced};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetLimit {
    Generated,
    Time,
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("start state cannot reach the goal")]
    Unsolvable,
    #[error("budget exceeded ({limit:?}) after {generated} generated / {expanded} expanded states")]
    BudgetExceeded {
        limit: BudgetLimit,
        generated: u64,
        expanded: u64,
    },
    #[error("open list exhausted without reaching the target")]
    FrontierExhausted,
    #[error("heuristic `{0}` is not admissible; IDA* accepts md or mdlc")]
    InadmissibleHeuristic(Heuristic),
    #[error("parent chain broken at {0}")]
    BrokenChain(StateKey),
    #[error("heuristic context does not target the expected state")]
    ContextMismatch,
    #[error("search depth overflow")]
    DepthOverflow,
    #[error(transparent)]
    Heuristic(#[from] HeuristicError),
}

/// A generated node as seen from outside the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchNode {
    pub key: StateKey,
    pub g: u32,
    pub f_x3: u32,
    /// Parent key and the move that led from it to this node.
    pub parent: Option<(StateKey, Move)>,
}

/// Expansion quotas for alternating bidirectional legs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Schedule {
    pub first_leg: u64,
    pub leg: u64,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule {
            first_leg: 75_000,
            leg: 15_000,
        }
    }
}

impl Schedule {
    pub fn new(first_leg: u64, leg: u64) -> Result<Schedule, String> {
        if leg == 0 || first_leg < leg {
            return Err(format!(
                "schedule needs first_leg >= leg >= 1 (got {first_leg}, {leg})"
            ));
        }
        Ok(Schedule { first_leg, leg })
    }
}

pub const DEFAULT_MAX_GENERATED: u64 = 4_000_000;

/// Resource caps; `None` means unbounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budget {
    pub max_generated: Option<u64>,
    pub max_seconds: Option<f64>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_generated: Some(DEFAULT_MAX_GENERATED),
            max_seconds: None,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Budget {
        Budget {
            max_generated: None,
            max_seconds: None,
        }
    }

    pub fn generated(max: u64) -> Budget {
        Budget {
            max_generated: Some(max),
            max_seconds: None,
        }
    }
}

pub(crate) struct BudgetTracker {
    max_generated: u64,
    deadline: Option<Instant>,
}

impl BudgetTracker {
    pub fn new(budget: &Budget) -> Self {
        BudgetTracker {
            max_generated: budget.max_generated.unwrap_or(u64::MAX),
            deadline: budget
                .max_seconds
                .map(|s| Instant::now() + Duration::from_secs_f64(s.max(0.0))),
        }
    }

    #[inline]
    pub fn generated_exhausted(&self, generated: u64) -> bool {
        generated >= self.max_generated
    }

    #[inline]
    pub fn time_exhausted(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DirectionStats {
    pub generated: u64,
    pub expanded: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub moves: Vec<Move>,
    pub length: usize,
    pub generated: u64,
    pub expanded: u64,
    /// True when the path was stitched at a state strictly inside both searches.
    pub met_in_middle: bool,
    pub meet_key: Option<StateKey>,
    /// Forward first; bidirectional runs add the backward direction.
    pub per_direction: Vec<DirectionStats>,
}

impl SolveResult {
    pub(crate) fn new(moves: Vec<Move>, per_direction: Vec<DirectionStats>) -> SolveResult {
        SolveResult {
            length: moves.len(),
            generated: per_direction.iter().map(|d| d.generated).sum(),
            expanded: per_direction.iter().map(|d| d.expanded).sum(),
            moves,
            met_in_middle: false,
            meet_key: None,
            per_direction,
        }
    }
}

/// True iff the moves replay from `start` to `goal` and the length field agrees.
pub fn verify_solution(start: &PuzzleState, result: &SolveResult, goal: &PuzzleState) -> bool {
    result.moves.len() == result.length
        && matches!(replay(start, &result.moves), Ok(end) if end == *goal)
}
