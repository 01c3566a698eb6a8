use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::puzzle::{is_solvable, parse_state, GoalConvention, PuzzleError, PuzzleState};

const KORF100: &str = include_str!("../../data/korf100.tsv");
const HARD28: &str = include_str!("../../data/hard28.tsv");
const ABC25: &str = include_str!("../../data/abc25.tsv");

pub const BUILTIN_DATASETS: [&str; 3] = ["korf100", "hard28", "abc25"];

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },
    #[error("instance {0} cannot reach its goal")]
    UnsolvableInstance(u32),
    #[error("instance ids must be unique and increasing (saw {0} after {1})")]
    IdOrder(u32, u32),
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub id: u32,
    pub start: PuzzleState,
    pub convention: GoalConvention,
    pub optimal_len: Option<u32>,
}

impl Instance {
    pub fn goal(&self) -> PuzzleState {
        self.convention.goal_state()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub name: String,
    pub instances: Vec<Instance>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn optimal_sum(&self) -> Option<u32> {
        self.instances.iter().map(|i| i.optimal_len).sum()
    }

    fn validate(self) -> Result<Dataset, DatasetError> {
        for pair in self.instances.windows(2) {
            if pair[1].id <= pair[0].id {
                return Err(DatasetError::IdOrder(pair[1].id, pair[0].id));
            }
        }
        if let Some(bad) = self
            .instances
            .iter()
            .find(|i| !is_solvable(&i.start, i.convention))
        {
            return Err(DatasetError::UnsolvableInstance(bad.id));
        }
        Ok(self)
    }
}

fn parse_error(source_name: &str, line: usize, message: impl ToString) -> DatasetError {
    DatasetError::Parse {
        source_name: source_name.to_string(),
        line,
        message: message.to_string(),
    }
}

/// Embedded table: `id  goal  optimal  tiles`, tab separated.
fn parse_builtin(name: &str, text: &str) -> Result<Dataset, DatasetError> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .comment(Some(b'#'))
        .has_headers(false)
        .from_reader(text.as_bytes());
    let mut instances = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| parse_error(name, 0, e))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != 4 {
            return Err(parse_error(name, line, "expected 4 tab-separated fields"));
        }
        let id = record[0].parse().map_err(|e| parse_error(name, line, e))?;
        let convention = record[1].parse().map_err(|e: String| parse_error(name, line, e))?;
        let optimal = record[2].parse().map_err(|e| parse_error(name, line, e))?;
        let start = parse_state(&record[3]).map_err(|e| parse_error(name, line, e))?;
        instances.push(Instance {
            id,
            start,
            convention,
            optimal_len: Some(optimal),
        });
    }
    Dataset {
        name: name.to_string(),
        instances,
    }
    .validate()
}

/// Parses the instance text format: one board of 16 integers per line, `#` lines
/// and blank lines skipped. Ids count boards from 1.
pub fn parse_instances(
    name: &str,
    text: &str,
    convention: GoalConvention,
) -> Result<Dataset, DatasetError> {
    let mut instances = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let start = parse_state(line).map_err(|e: PuzzleError| parse_error(name, n + 1, e))?;
        instances.push(Instance {
            id: instances.len() as u32 + 1,
            start,
            convention,
            optimal_len: None,
        });
    }
    Dataset {
        name: name.to_string(),
        instances,
    }
    .validate()
}

/// Reads an instance file, all boards sharing one goal convention.
pub fn load_instance_file(
    path: impl AsRef<Path>,
    convention: GoalConvention,
) -> Result<Dataset, DatasetError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let name = path
        .file_stem()
        .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
    parse_instances(&name, &text, convention)
}

pub fn builtin_dataset(name: &str) -> Option<Result<Dataset, DatasetError>> {
    let text = match name {
        "korf100" => KORF100,
        "hard28" => HARD28,
        "abc25" => ABC25,
        _ => return None,
    };
    Some(parse_builtin(name, text))
}

/// A built-in name, or a path to an instance file solved toward the top-left goal.
pub fn load_dataset(source: &str) -> Result<Dataset, DatasetError> {
    builtin_dataset(source)
        .unwrap_or_else(|| load_instance_file(source, GoalConvention::BlankTopLeft))
}
