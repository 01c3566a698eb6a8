//! Board representation, move mechanics, solvability and state packing.
//!
//! Cells are indexed row-major, `index = 4 * row + col`. The blank is tile 0.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub const SIDE: usize = 4;
pub const CELLS: usize = SIDE * SIDE;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PuzzleError {
    #[error("expected 16 tiles, found {found}")]
    TokenCount { found: usize },
    #[error("tile token `{token}` is not an integer in 0..=15")]
    OutOfRange { token: String },
    #[error("tile {tile} appears more than once")]
    Duplicate { tile: u8 },
    #[error("illegal move {mv} at index {index}")]
    IllegalMove { index: usize, mv: Move },
    #[error("invalid move character `{0}`")]
    InvalidMoveChar(char),
    #[error("state key {0:#018x} does not encode a permutation")]
    InvalidKey(u64),
}

/// Direction the blank travels. The blank swaps with the tile it moves onto.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    Up,
    Down,
    Left,
    Right,
}

impl Move {
    pub const ALL: [Move; 4] = [Move::Up, Move::Down, Move::Left, Move::Right];

    pub fn inverse(self) -> Move {
        match self {
            Move::Up => Move::Down,
            Move::Down => Move::Up,
            Move::Left => Move::Right,
            Move::Right => Move::Left,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Move::Up => 'U',
            Move::Down => 'D',
            Move::Left => 'L',
            Move::Right => 'R',
        }
    }

    pub fn from_char(c: char) -> Result<Move, PuzzleError> {
        match c.to_ascii_uppercase() {
            'U' => Ok(Move::Up),
            'D' => Ok(Move::Down),
            'L' => Ok(Move::Left),
            'R' => Ok(Move::Right),
            _ => Err(PuzzleError::InvalidMoveChar(c)),
        }
    }

    /// True when the blank moves between rows.
    pub fn is_vertical(self) -> bool {
        matches!(self, Move::Up | Move::Down)
    }

    #[inline]
    pub(crate) fn index(self) -> u8 {
        self as u8
    }

    #[inline]
    pub(crate) fn from_index(i: u8) -> Option<Move> {
        Move::ALL.get(i as usize).copied()
    }

    /// Destination of the blank when moving from `blank`, if it stays on the board.
    #[inline]
    pub fn target_cell(self, blank: usize) -> Option<usize> {
        let (row, col) = (blank / SIDE, blank % SIDE);
        match self {
            Move::Up if row > 0 => Some(blank - SIDE),
            Move::Down if row + 1 < SIDE => Some(blank + SIDE),
            Move::Left if col > 0 => Some(blank - 1),
            Move::Right if col + 1 < SIDE => Some(blank + 1),
            _ => None,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Renders a move list as a compact `UDLR` string.
pub fn format_moves(moves: &[Move]) -> String {
    moves.iter().map(|m| m.as_char()).collect()
}

/// Parses a move string. Whitespace and commas are ignored.
pub fn parse_moves(text: &str) -> Result<Vec<Move>, PuzzleError> {
    text.chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(Move::from_char)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GoalConvention {
    /// Korf's goal: `0 1 2 ... 15`.
    BlankTopLeft,
    /// `1 2 ... 15 0`.
    BlankBottomRight,
}

impl GoalConvention {
    pub fn goal_state(self) -> PuzzleState {
        let mut tiles = [0u8; CELLS];
        for (i, t) in tiles.iter_mut().enumerate() {
            *t = match self {
                GoalConvention::BlankTopLeft => i as u8,
                GoalConvention::BlankBottomRight => ((i + 1) % CELLS) as u8,
            };
        }
        PuzzleState::from_tiles(tiles).expect("goal is a permutation")
    }

    pub fn name(self) -> &'static str {
        match self {
            GoalConvention::BlankTopLeft => "top-left",
            GoalConvention::BlankBottomRight => "bottom-right",
        }
    }
}

impl FromStr for GoalConvention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "top-left" | "topleft" | "tl" => Ok(GoalConvention::BlankTopLeft),
            "bottom-right" | "bottomright" | "br" => Ok(GoalConvention::BlankBottomRight),
            other => Err(format!("unknown goal convention `{other}`")),
        }
    }
}

impl fmt::Display for GoalConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Convenience wrapper for [`GoalConvention::goal_state`].
pub fn goal_state(convention: GoalConvention) -> PuzzleState {
    convention.goal_state()
}

/// Packed 4-bit-per-cell encoding of a state; nibble `i` holds the tile at cell `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateKey(pub u64);

impl StateKey {
    pub fn decode(self) -> Result<PuzzleState, PuzzleError> {
        let mut tiles = [0u8; CELLS];
        for (i, t) in tiles.iter_mut().enumerate() {
            *t = ((self.0 >> (4 * i)) & 0xF) as u8;
        }
        PuzzleState::from_tiles(tiles).map_err(|_| PuzzleError::InvalidKey(self.0))
    }

    /// Decodes a key produced by [`PuzzleState::key`] without validation.
    #[inline]
    pub(crate) fn decode_unchecked(self) -> PuzzleState {
        let mut tiles = [0u8; CELLS];
        let mut blank = 0u8;
        for (i, t) in tiles.iter_mut().enumerate() {
            *t = ((self.0 >> (4 * i)) & 0xF) as u8;
            if *t == 0 {
                blank = i as u8;
            }
        }
        PuzzleState { tiles, blank }
    }
}

impl fmt::Display for StateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

/// A Fifteen Puzzle configuration. Immutable value type.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PuzzleState {
    tiles: [u8; CELLS],
    blank: u8,
}

impl PuzzleState {
    pub fn from_tiles(tiles: [u8; CELLS]) -> Result<Self, PuzzleError> {
        let mut seen = [false; CELLS];
        for &t in &tiles {
            if t as usize >= CELLS {
                return Err(PuzzleError::OutOfRange {
                    token: t.to_string(),
                });
            }
            if seen[t as usize] {
                return Err(PuzzleError::Duplicate { tile: t });
            }
            seen[t as usize] = true;
        }
        let blank = tiles.iter().position(|&t| t == 0).expect("permutation holds 0") as u8;
        Ok(PuzzleState { tiles, blank })
    }

    pub fn tiles(&self) -> &[u8; CELLS] {
        &self.tiles
    }

    #[inline]
    pub fn tile_at(&self, cell: usize) -> u8 {
        self.tiles[cell]
    }

    #[inline]
    pub fn blank_pos(&self) -> usize {
        self.blank as usize
    }

    /// Directions the blank can move, in `Up, Down, Left, Right` order.
    pub fn legal_moves(&self) -> Vec<Move> {
        Move::ALL
            .into_iter()
            .filter(|m| m.target_cell(self.blank_pos()).is_some())
            .collect()
    }

    pub fn can_move(&self, m: Move) -> bool {
        m.target_cell(self.blank_pos()).is_some()
    }

    /// The neighbouring state, or `None` if the blank would leave the board.
    #[inline]
    pub fn step(&self, m: Move) -> Option<PuzzleState> {
        let to = m.target_cell(self.blank_pos())?;
        let mut next = *self;
        next.tiles.swap(self.blank_pos(), to);
        next.blank = to as u8;
        Some(next)
    }

    pub fn apply_move(&self, m: Move) -> Result<PuzzleState, PuzzleError> {
        self.step(m)
            .ok_or(PuzzleError::IllegalMove { index: 0, mv: m })
    }

    #[inline]
    pub fn key(&self) -> StateKey {
        let mut packed = 0u64;
        for (i, &t) in self.tiles.iter().enumerate() {
            packed |= (t as u64) << (4 * i);
        }
        StateKey(packed)
    }

    /// Mirror across the main diagonal (cell `(r, c)` moves to `(c, r)`).
    pub fn transpose(&self) -> PuzzleState {
        let mut tiles = [0u8; CELLS];
        for (i, t) in tiles.iter_mut().enumerate() {
            let (r, c) = (i / SIDE, i % SIDE);
            *t = self.tiles[c * SIDE + r];
        }
        PuzzleState::from_tiles(tiles).expect("transpose keeps permutation")
    }

    /// Same board with tile labels remapped through `relabel` (blank must map to itself).
    pub fn relabel(&self, relabel: &[u8; CELLS]) -> PuzzleState {
        let mut tiles = [0u8; CELLS];
        for (dst, &t) in tiles.iter_mut().zip(&self.tiles) {
            *dst = relabel[t as usize];
        }
        PuzzleState::from_tiles(tiles).expect("relabel is a permutation")
    }
}

impl fmt::Debug for PuzzleState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PuzzleState({self})")
    }
}

impl fmt::Display for PuzzleState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.tiles.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for PuzzleState {
    type Err = PuzzleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_state(s)
    }
}

/// Parses 16 whitespace-separated tile numbers in row-major order.
pub fn parse_state(text: &str) -> Result<PuzzleState, PuzzleError> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.len() != CELLS {
        return Err(PuzzleError::TokenCount {
            found: tokens.len(),
        });
    }
    let mut tiles = [0u8; CELLS];
    for (slot, tok) in tiles.iter_mut().zip(&tokens) {
        *slot = match tok.parse::<u8>() {
            Ok(v) if (v as usize) < CELLS => v,
            _ => {
                return Err(PuzzleError::OutOfRange {
                    token: tok.to_string(),
                })
            }
        };
    }
    PuzzleState::from_tiles(tiles)
}

pub fn apply_move(state: &PuzzleState, m: Move) -> Result<PuzzleState, PuzzleError> {
    state.apply_move(m)
}

/// Applies `moves` in order. Fails with the index of the first illegal move.
pub fn replay(start: &PuzzleState, moves: &[Move]) -> Result<PuzzleState, PuzzleError> {
    moves.iter().enumerate().try_fold(*start, |s, (index, &mv)| {
        s.step(mv).ok_or(PuzzleError::IllegalMove { index, mv })
    })
}

/// True iff `goal` is reachable from `state`.
pub fn is_solvable(state: &PuzzleState, convention: GoalConvention) -> bool {
    is_solvable_to(state, &convention.goal_state())
}

pub fn is_solvable_to(state: &PuzzleState, goal: &PuzzleState) -> bool {
    parity_rule(state.tiles(), goal.tiles(), SIDE)
}

/// Solvability rule for a `width x width` board: the parity of the permutation taking
/// `goal` to `tiles` (blank included) must equal the parity of the taxicab distance
/// between the two blank cells. `tiles` and `goal` are row-major permutations of
/// `0..width*width`.
pub fn parity_rule(tiles: &[u8], goal: &[u8], width: usize) -> bool {
    let n = tiles.len();
    debug_assert_eq!(n, goal.len());
    let mut goal_pos = vec![0usize; n];
    for (i, &t) in goal.iter().enumerate() {
        goal_pos[t as usize] = i;
    }
    // perm[i] = where the tile sitting at i belongs
    let perm: Vec<usize> = tiles.iter().map(|&t| goal_pos[t as usize]).collect();
    let mut visited = vec![false; n];
    let mut cycles = 0;
    for i in 0..n {
        if visited[i] {
            continue;
        }
        cycles += 1;
        let mut j = i;
        while !visited[j] {
            visited[j] = true;
            j = perm[j];
        }
    }
    let perm_odd = (n - cycles) % 2 == 1;
    let blank = tiles.iter().position(|&t| t == 0).expect("blank present");
    let goal_blank = goal_pos[0];
    let taxicab = (blank / width).abs_diff(goal_blank / width) + (blank % width).abs_diff(goal_blank % width);
    perm_odd == (taxicab % 2 == 1)
}
