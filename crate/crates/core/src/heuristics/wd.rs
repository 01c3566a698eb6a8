//! Walking-distance pattern tables.
//!
//! A pattern abstracts a board to "how many tiles of target line `j` sit in board
//! line `i`" plus the line holding the blank. The table stores, for every pattern
//! reachable from a root, the minimum number of blank moves across lines needed to
//! reach the root. Rows and columns use the same machinery; for columns the board is
//! read transposed.

use std::collections::VecDeque;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use rustc_hash::FxHashMap;

use super::HeuristicError;

pub const LINES: usize = 4;
/// Number of patterns reachable from any root.
pub const EXPECTED_ENTRIES: usize = 24_964;
/// Deepest entry of a table rooted with the blank in an edge line.
pub const EXPECTED_EDGE_MAX: u8 = 35;

const CACHE_MAGIC: &[u8; 4] = b"WD15";
const CACHE_VERSION: u8 = 1;

/// Line-membership counts of the 15 tiles plus the blank's line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WdPattern {
    pub counts: [[u8; LINES]; LINES],
    pub blank_line: u8,
}

impl WdPattern {
    /// Target pattern of a board whose blank is in `blank_line`: every tile sits in
    /// its own line.
    pub fn root(blank_line: usize) -> WdPattern {
        let mut counts = [[0u8; LINES]; LINES];
        for (i, row) in counts.iter_mut().enumerate() {
            row[i] = if i == blank_line { 3 } else { 4 };
        }
        WdPattern {
            counts,
            blank_line: blank_line as u8,
        }
    }

    /// 3 bits per cell, `(i, j)` at bit `3 * (4i + j)`, blank line at bits 48..50.
    #[inline]
    pub fn pack(&self) -> u64 {
        let mut key = 0u64;
        for i in 0..LINES {
            for j in 0..LINES {
                key |= (self.counts[i][j] as u64) << (3 * (LINES * i + j));
            }
        }
        key | ((self.blank_line as u64) << 48)
    }

    pub fn unpack(key: u64) -> WdPattern {
        let mut counts = [[0u8; LINES]; LINES];
        for (i, row) in counts.iter_mut().enumerate() {
            for (j, c) in row.iter_mut().enumerate() {
                *c = ((key >> (3 * (LINES * i + j))) & 0b111) as u8;
            }
        }
        WdPattern {
            counts,
            blank_line: ((key >> 48) & 0b11) as u8,
        }
    }

    pub fn row_sum(&self, i: usize) -> u8 {
        self.counts[i].iter().sum()
    }

    pub fn class_size(&self, j: usize) -> u8 {
        self.counts.iter().map(|row| row[j]).sum()
    }

    /// Checks the line-sum invariants. Class sizes are whatever the pattern carries;
    /// they must be three 4s and one 3.
    pub fn validate(&self) -> Result<(), HeuristicError> {
        let bad = || HeuristicError::InvalidPattern(self.pack());
        if self.blank_line as usize >= LINES {
            return Err(bad());
        }
        for i in 0..LINES {
            let want = if i == self.blank_line as usize { 3 } else { 4 };
            if self.row_sum(i) != want {
                return Err(bad());
            }
        }
        let mut sizes: Vec<u8> = (0..LINES).map(|j| self.class_size(j)).collect();
        sizes.sort_unstable();
        if sizes != [3, 4, 4, 4] {
            return Err(bad());
        }
        Ok(())
    }

    /// Patterns one blank move away: a tile of any class crosses from an adjacent
    /// line into the blank's line.
    pub fn successors(&self) -> impl Iterator<Item = WdPattern> + '_ {
        let b = self.blank_line as usize;
        let adjacent = [b.checked_sub(1), (b + 1 < LINES).then_some(b + 1)];
        adjacent
            .into_iter()
            .flatten()
            .flat_map(move |adj| (0..LINES).map(move |j| (adj, j)))
            .filter(|&(adj, j)| self.counts[adj][j] > 0)
            .map(move |(adj, j)| {
                let mut next = *self;
                next.counts[adj][j] -= 1;
                next.counts[b][j] += 1;
                next.blank_line = adj as u8;
                next
            })
    }

    #[cfg(test)]
    pub(crate) fn is_root(&self) -> bool {
        (0..LINES).all(|i| (0..LINES).all(|j| i == j || self.counts[i][j] == 0))
    }
}

/// Distances from every reachable pattern to the root pattern.
#[derive(Debug, Clone)]
pub struct WdTable {
    entries: FxHashMap<u64, u8>,
    root: WdPattern,
    max_distance: u8,
}

impl WdTable {
    /// Backward breadth-first search from `root`. Pattern moves are reversible, so
    /// distances from the root equal distances to it.
    pub fn build(root: WdPattern) -> Result<WdTable, HeuristicError> {
        root.validate()?;
        let mut entries = FxHashMap::default();
        entries.reserve(EXPECTED_ENTRIES);
        let mut queue = VecDeque::new();
        entries.insert(root.pack(), 0u8);
        queue.push_back((root, 0u8));
        let mut max_distance = 0;
        while let Some((pattern, d)) = queue.pop_front() {
            max_distance = max_distance.max(d);
            for next in pattern.successors() {
                let key = next.pack();
                if let std::collections::hash_map::Entry::Vacant(slot) = entries.entry(key) {
                    slot.insert(d + 1);
                    queue.push_back((next, d + 1));
                }
            }
        }
        Ok(WdTable {
            entries,
            root,
            max_distance,
        })
    }

    pub fn root(&self) -> WdPattern {
        self.root
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_distance(&self) -> u8 {
        self.max_distance
    }

    #[inline]
    pub fn distance_of_key(&self, key: u64) -> Option<u8> {
        self.entries.get(&key).copied()
    }

    #[inline]
    pub fn distance(&self, pattern: &WdPattern) -> Option<u8> {
        self.distance_of_key(pattern.pack())
    }

    /// Number of entries at each distance `0..=max_distance`.
    pub fn histogram(&self) -> Vec<usize> {
        let mut hist = vec![0usize; self.max_distance as usize + 1];
        for &d in self.entries.values() {
            hist[d as usize] += 1;
        }
        hist
    }

    /// Entries sorted by packed key.
    pub fn sorted_entries(&self) -> Vec<(u64, u8)> {
        let mut v: Vec<(u64, u8)> = self.entries.iter().map(|(&k, &d)| (k, d)).collect();
        v.sort_unstable();
        v
    }

    /// Serializes in the `WD15` cache format: magic, version byte, u32 LE count, then
    /// `(u64 LE key, u8 distance)` per entry in ascending key order.
    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(CACHE_MAGIC)?;
        w.write_all(&[CACHE_VERSION])?;
        w.write_all(&(self.entries.len() as u32).to_le_bytes())?;
        for (key, d) in self.sorted_entries() {
            w.write_all(&key.to_le_bytes())?;
            w.write_all(&[d])?;
        }
        w.flush()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::with_capacity(9 + 9 * self.len());
        self.write_to(&mut buf).expect("writing to a Vec cannot fail");
        buf
    }

    /// Reads a `WD15` cache. The root is recovered as the unique zero-distance entry.
    pub fn read_from<R: Read>(mut r: R) -> Result<WdTable, HeuristicError> {
        let mut header = [0u8; 9];
        r.read_exact(&mut header)?;
        if &header[..4] != CACHE_MAGIC {
            return Err(HeuristicError::Cache("bad magic".into()));
        }
        if header[4] != CACHE_VERSION {
            return Err(HeuristicError::Cache(format!(
                "unsupported version {}",
                header[4]
            )));
        }
        let count = u32::from_le_bytes(header[5..9].try_into().unwrap()) as usize;
        if count != EXPECTED_ENTRIES {
            return Err(HeuristicError::Cache(format!(
                "expected {EXPECTED_ENTRIES} entries, header says {count}"
            )));
        }
        let mut body = vec![0u8; 9 * count];
        r.read_exact(&mut body)?;
        let mut entries = FxHashMap::default();
        entries.reserve(count);
        let mut root = None;
        let mut max_distance = 0u8;
        for chunk in body.chunks_exact(9) {
            let key = u64::from_le_bytes(chunk[..8].try_into().unwrap());
            let d = chunk[8];
            let pattern = WdPattern::unpack(key);
            if pattern.pack() != key {
                return Err(HeuristicError::InvalidPattern(key));
            }
            pattern.validate()?;
            if d == 0 {
                if root.is_some() {
                    return Err(HeuristicError::Cache("more than one root entry".into()));
                }
                root = Some(pattern);
            }
            max_distance = max_distance.max(d);
            if entries.insert(key, d).is_some() {
                return Err(HeuristicError::Cache(format!("duplicate key {key:#x}")));
            }
        }
        let root = root.ok_or_else(|| HeuristicError::Cache("no root entry".into()))?;
        let edge_root = root.blank_line == 0 || root.blank_line as usize == LINES - 1;
        if edge_root && max_distance != EXPECTED_EDGE_MAX {
            return Err(HeuristicError::Cache(format!(
                "max distance {max_distance}, expected {EXPECTED_EDGE_MAX}"
            )));
        }
        Ok(WdTable {
            entries,
            root,
            max_distance,
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), HeuristicError> {
        let file = fs::File::create(path)?;
        self.write_to(io::BufWriter::new(file))?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<WdTable, HeuristicError> {
        let file = fs::File::open(path)?;
        WdTable::read_from(io::BufReader::new(file))
    }

    /// File name used by [`WdTable::load_or_build`] for a given root.
    pub fn cache_path(dir: &Path, root: &WdPattern) -> PathBuf {
        dir.join(format!("wd-{:013x}.bin", root.pack()))
    }

    /// Loads the table for `root` from `dir`, rebuilding (and rewriting) it when the
    /// file is missing, unreadable, or rooted elsewhere.
    pub fn load_or_build(dir: &Path, root: WdPattern) -> Result<WdTable, HeuristicError> {
        let path = WdTable::cache_path(dir, &root);
        if let Ok(table) = WdTable::load(&path) {
            if table.root == root {
                return Ok(table);
            }
        }
        let table = WdTable::build(root)?;
        // a failed write only costs a rebuild next time
        let _ = fs::create_dir_all(dir).and_then(|_| {
            let file = fs::File::create(&path)?;
            table.write_to(io::BufWriter::new(file))
        });
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_roundtrip_and_root() {
        let root = WdPattern::root(3);
        assert!(root.is_root());
        assert_eq!(WdPattern::unpack(root.pack()), root);
        root.validate().unwrap();
    }

    #[test]
    fn invalid_root_rejected() {
        let mut p = WdPattern::root(3);
        p.counts[0][0] = 2;
        assert!(matches!(
            WdTable::build(p),
            Err(HeuristicError::InvalidPattern(_))
        ));
    }

    #[test]
    fn edge_roots_have_full_size() {
        for b in [0, 3] {
            let t = WdTable::build(WdPattern::root(b)).unwrap();
            assert_eq!(t.len(), EXPECTED_ENTRIES);
            assert_eq!(t.max_distance(), EXPECTED_EDGE_MAX);
            assert_eq!(t.distance(&WdPattern::root(b)), Some(0));
            assert_eq!(t.histogram()[0], 1);
        }
    }

    #[test]
    fn inner_roots_cover_same_space() {
        for b in [1, 2] {
            let t = WdTable::build(WdPattern::root(b)).unwrap();
            assert_eq!(t.len(), EXPECTED_ENTRIES);
        }
    }

    #[test]
    fn neighbouring_entries_differ_by_at_most_one() {
        let t = WdTable::build(WdPattern::root(3)).unwrap();
        for (key, d) in t.sorted_entries() {
            for next in WdPattern::unpack(key).successors() {
                let dn = t.distance(&next).expect("closed under moves");
                assert!(dn.abs_diff(d) <= 1);
            }
        }
    }

    #[test]
    fn cache_roundtrip_is_byte_identical() {
        let a = WdTable::build(WdPattern::root(0)).unwrap();
        let b = WdTable::build(WdPattern::root(0)).unwrap();
        let bytes = a.to_bytes();
        assert_eq!(bytes, b.to_bytes());
        assert_eq!(&bytes[..4], b"WD15");
        assert_eq!(bytes[4], 1);
        assert_eq!(u32::from_le_bytes(bytes[5..9].try_into().unwrap()), 24_964);
        assert_eq!(bytes.len(), 9 + 9 * 24_964);
        let back = WdTable::read_from(&bytes[..]).unwrap();
        assert_eq!(back.root(), a.root());
        assert_eq!(back.max_distance(), 35);
        assert_eq!(back.sorted_entries(), a.sorted_entries());
    }

    #[test]
    fn cache_rejects_corruption() {
        let t = WdTable::build(WdPattern::root(3)).unwrap();
        let mut bytes = t.to_bytes();
        bytes[0] = b'X';
        assert!(WdTable::read_from(&bytes[..]).is_err());
        let mut bytes = t.to_bytes();
        bytes[5] = 0;
        assert!(WdTable::read_from(&bytes[..]).is_err());
        let bytes = t.to_bytes();
        assert!(WdTable::read_from(&bytes[..bytes.len() - 3]).is_err());
    }

    #[test]
    fn load_or_build_writes_then_reads() {
        let dir = std::env::temp_dir().join(format!("wd15-test-{}", std::process::id()));
        let root = WdPattern::root(0);
        let built = WdTable::load_or_build(&dir, root).unwrap();
        assert!(WdTable::cache_path(&dir, &root).exists());
        let loaded = WdTable::load_or_build(&dir, root).unwrap();
        assert_eq!(built.sorted_entries(), loaded.sorted_entries());
        // garbage file falls back to a rebuild
        fs::write(WdTable::cache_path(&dir, &root), b"junk").unwrap();
        let rebuilt = WdTable::load_or_build(&dir, root).unwrap();
        assert_eq!(rebuilt.len(), EXPECTED_ENTRIES);
        let _ = fs::remove_dir_all(&dir);
    }
}
