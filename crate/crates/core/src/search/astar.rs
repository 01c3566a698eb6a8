use super::frontier::{DirectionState, OnGenerate};
use super::{Budget, BudgetLimit, BudgetTracker, DirectionStats, SearchError, SolveResult};
use crate::heuristics::{Heuristic, HeuristicContext};
use crate::puzzle::{is_solvable_to, PuzzleState};

/// Forward-only best-first search; stops when the goal is popped.
pub fn ua_star(
    start: &PuzzleState,
    goal: &PuzzleState,
    ctx: &HeuristicContext,
    heuristic: Heuristic,
    budget: &Budget,
) -> Result<SolveResult, SearchError> {
    if ctx.target() != goal {
        return Err(SearchError::ContextMismatch);
    }
    if !is_solvable_to(start, goal) {
        return Err(SearchError::Unsolvable);
    }
    let tracker = BudgetTracker::new(budget);
    let goal_key = goal.key();
    let mut dir = DirectionState::new(*start, ctx, heuristic)?;
    let mut over_budget = false;
    loop {
        let (key, rec) = dir.pop().ok_or(SearchError::FrontierExhausted)?;
        if key == goal_key {
            let moves = dir.seen.path_to(key)?;
            return Ok(SolveResult::new(
                moves,
                vec![DirectionStats {
                    generated: dir.generated,
                    expanded: dir.expanded,
                }],
            ));
        }
        let limit = if over_budget {
            Some(BudgetLimit::Generated)
        } else if tracker.time_exhausted() {
            Some(BudgetLimit::Time)
        } else {
            None
        };
        if let Some(limit) = limit {
            return Err(SearchError::BudgetExceeded {
                limit,
                generated: dir.generated,
                expanded: dir.expanded,
            });
        }
        dir.expand(key, rec, |_, generated| {
            if tracker.generated_exhausted(generated) {
                over_budget = true;
                OnGenerate::Stop
            } else {
                OnGenerate::Continue
            }
        })?;
    }
}
