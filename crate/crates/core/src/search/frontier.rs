//! Per-direction best-first bookkeeping shared by the A* variants.
//!
//! States enter the seen map when generated and are never reopened. The open list
//! orders by ascending `f_x3`, then larger `g`, then insertion order.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rustc_hash::FxHashMap;

use super::{SearchError, SearchNode};
use crate::heuristics::{Heuristic, HeuristicContext};
use crate::puzzle::{Move, PuzzleState, StateKey};

const ROOT: u8 = u8::MAX;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Record {
    pub f_x3: u32,
    pub g: u16,
    /// Move that generated this node from its parent, or `ROOT`.
    pub via: u8,
}

/// Every state generated by one search direction.
#[derive(Debug, Default)]
pub struct SeenMap {
    map: FxHashMap<u64, Record>,
}

impl SeenMap {
    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    #[inline]
    pub fn contains(&self, key: StateKey) -> bool {
        self.map.contains_key(&key.0)
    }

    pub fn get(&self, key: StateKey) -> Option<SearchNode> {
        let rec = self.record(key)?;
        let parent = Move::from_index(rec.via).map(|m| {
            let state = key.decode_unchecked();
            let parent = state.step(m.inverse()).expect("parent move is reversible");
            (parent.key(), m)
        });
        Some(SearchNode {
            key,
            g: rec.g as u32,
            f_x3: rec.f_x3,
            parent,
        })
    }

    pub fn keys(&self) -> impl Iterator<Item = StateKey> + '_ {
        self.map.keys().map(|&k| StateKey(k))
    }

    #[inline]
    pub(crate) fn record(&self, key: StateKey) -> Option<Record> {
        self.map.get(&key.0).copied()
    }

    #[inline]
    pub(crate) fn insert(&mut self, key: StateKey, rec: Record) -> bool {
        use std::collections::hash_map::Entry;
        match self.map.entry(key.0) {
            Entry::Occupied(_) => false,
            Entry::Vacant(v) => {
                v.insert(rec);
                true
            }
        }
    }

    /// Records `(key, g, via)` for tests that assemble maps by hand.
    #[doc(hidden)]
    pub fn insert_node(&mut self, key: StateKey, g: u32, via: Option<Move>) -> bool {
        self.insert(
            key,
            Record {
                f_x3: 3 * g,
                g: g as u16,
                via: via.map_or(ROOT, Move::index),
            },
        )
    }

    /// Moves from this direction's origin to `key`.
    pub fn path_to(&self, key: StateKey) -> Result<Vec<Move>, SearchError> {
        let mut moves = Vec::new();
        let mut cur = key;
        let mut rec = self.record(cur).ok_or(SearchError::BrokenChain(cur))?;
        while let Some(m) = Move::from_index(rec.via) {
            moves.push(m);
            let parent = cur
                .decode_unchecked()
                .step(m.inverse())
                .ok_or(SearchError::BrokenChain(cur))?
                .key();
            let prec = self.record(parent).ok_or(SearchError::BrokenChain(parent))?;
            if prec.g + 1 != rec.g {
                return Err(SearchError::BrokenChain(parent));
            }
            cur = parent;
            rec = prec;
        }
        if rec.g != 0 {
            return Err(SearchError::BrokenChain(cur));
        }
        moves.reverse();
        Ok(moves)
    }
}

/// What the caller wants after a node is generated.
pub(crate) enum OnGenerate {
    Continue,
    Stop,
}

pub(crate) struct DirectionState<'a> {
    ctx: &'a HeuristicContext,
    heuristic: Heuristic,
    open: BinaryHeap<Reverse<(u64, u64)>>,
    pub seen: SeenMap,
    seq: u64,
    pub expanded: u64,
    pub generated: u64,
}

#[inline]
fn priority(f_x3: u32, g: u16, seq: u64) -> u64 {
    let g_rank = 0xFFF - (g as u64).min(0xFFF);
    ((f_x3 as u64) << 44) | (g_rank << 32) | (seq & 0xFFFF_FFFF)
}

impl<'a> DirectionState<'a> {
    pub fn new(
        origin: PuzzleState,
        ctx: &'a HeuristicContext,
        heuristic: Heuristic,
    ) -> Result<Self, SearchError> {
        let mut dir = DirectionState {
            ctx,
            heuristic,
            open: BinaryHeap::new(),
            seen: SeenMap::default(),
            seq: 0,
            expanded: 0,
            generated: 0,
        };
        let h = heuristic.eval_x3(&origin, ctx)?;
        dir.push(origin.key(), Record { f_x3: h, g: 0, via: ROOT });
        Ok(dir)
    }

    fn push(&mut self, key: StateKey, rec: Record) {
        self.seen.insert(key, rec);
        self.open.push(Reverse((priority(rec.f_x3, rec.g, self.seq), key.0)));
        self.seq += 1;
    }

    /// Removes the best open node.
    #[inline]
    pub fn pop(&mut self) -> Option<(StateKey, Record)> {
        let Reverse((_, k)) = self.open.pop()?;
        let key = StateKey(k);
        let rec = self.seen.record(key).expect("open nodes are seen");
        Some((key, rec))
    }

    /// Generates the unseen neighbours of `key`. Returns the key that made
    /// `on_generate` stop, if any.
    pub fn expand<F>(
        &mut self,
        key: StateKey,
        rec: Record,
        mut on_generate: F,
    ) -> Result<Option<StateKey>, SearchError>
    where
        F: FnMut(StateKey, u64) -> OnGenerate,
    {
        self.expanded += 1;
        let state = key.decode_unchecked();
        let g = rec.g.checked_add(1).ok_or(SearchError::DepthOverflow)?;
        for m in Move::ALL {
            let Some(child) = state.step(m) else { continue };
            let ck = child.key();
            if self.seen.contains(ck) {
                continue;
            }
            let h = self.heuristic.eval_x3(&child, self.ctx)?;
            self.push(
                ck,
                Record {
                    f_x3: h + 3 * g as u32,
                    g,
                    via: m.index(),
                },
            );
            self.generated += 1;
            if let OnGenerate::Stop = on_generate(ck, self.generated) {
                return Ok(Some(ck));
            }
        }
        Ok(None)
    }
}
