//! Fifteen Puzzle search toolkit.
//!
//! * [`puzzle`]: board, moves, solvability, packing.
//! * [`heuristics`]: Manhattan distance, linear conflict, walking distance and the
//!   hybrid `md/3 + wd + lc`.
//! * [`search`]: bidirectional A*, unidirectional A*, IDA*.
//! * [`bench`]: built-in instance sets, batch runner, CSV/markdown reports.

pub mod bench;
pub mod heuristics;
pub mod puzzle;
pub mod search;

pub use heuristics::{
    breakdown, hh_report, hybrid_h3, linear_conflict, manhattan, walking_distance, Breakdown,
    Heuristic, HeuristicContext, HeuristicError, ThirdsValue, WdCache, WdPattern, WdTable,
};
pub use puzzle::{
    goal_state, is_solvable, parse_state, replay, GoalConvention, Move, PuzzleError, PuzzleState,
    StateKey,
};

pub use search::{
    ba_star, ida_star, stitch_paths, ua_star, verify_solution, Budget, Schedule, SearchError,
    SolveResult,
};
