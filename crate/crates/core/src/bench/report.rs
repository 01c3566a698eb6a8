use std::io::{self, Write};
use std::str::FromStr;

use super::runner::{ReportRow, RowStatus};
use crate::heuristics::ThirdsValue;

pub const CSV_HEADER: [&str; 12] = [
    "id", "length", "generated", "expanded", "md", "wd", "lc", "hh", "optimal", "delta",
    "time_ms", "status",
];

/// Upper edges of the delta histogram; the last bucket collects everything above.
pub const DELTA_BUCKETS: [i64; 6] = [0, 2, 4, 6, 8, 10];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(format!("unknown report format `{other}` (csv, markdown)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub rows: usize,
    pub solved: usize,
    pub budget_exceeded: usize,
    pub sum_length: u64,
    pub sum_generated: u64,
    pub sum_expanded: u64,
    pub sum_md: u64,
    pub sum_wd: u64,
    pub sum_lc: u64,
    /// Sum of the per-row rounded values.
    pub sum_hh: u64,
    /// Sum of the exact thirds values.
    pub sum_hh_x3: u64,
    pub sum_optimal: Option<u64>,
    /// Over solved rows only.
    pub mean_length_solved: Option<f64>,
    /// Over every row, unsolved rows counting zero.
    pub mean_length_all: Option<f64>,
    pub mean_generated: Option<f64>,
    pub mean_hh: Option<f64>,
    /// Counts for deltas 0, 2, 4, 6, 8, 10, then above 10.
    pub delta_histogram: [usize; 7],
}

impl Summary {
    pub fn exact_hh_sum(&self) -> ThirdsValue {
        ThirdsValue(self.sum_hh_x3 as u32)
    }
}

fn mean(sum: f64, n: usize) -> Option<f64> {
    (n > 0).then(|| sum / n as f64)
}

pub fn summarize(rows: &[ReportRow]) -> Summary {
    let solved: Vec<&ReportRow> = rows
        .iter()
        .filter(|r| r.status == RowStatus::Solved)
        .collect();
    let sum_length: u64 = solved.iter().filter_map(|r| r.length).map(u64::from).sum();
    let sum_generated = rows.iter().map(|r| r.generated).sum();
    let sum_hh: u64 = rows.iter().map(|r| r.hh as u64).sum();
    let mut delta_histogram = [0usize; 7];
    for d in solved.iter().filter_map(|r| r.delta) {
        let slot = DELTA_BUCKETS
            .iter()
            .position(|&b| d <= b)
            .unwrap_or(DELTA_BUCKETS.len());
        delta_histogram[slot] += 1;
    }
    Summary {
        rows: rows.len(),
        solved: solved.len(),
        budget_exceeded: rows
            .iter()
            .filter(|r| r.status == RowStatus::BudgetExceeded)
            .count(),
        sum_length,
        sum_generated,
        sum_expanded: rows.iter().map(|r| r.expanded).sum(),
        sum_md: rows.iter().map(|r| r.md as u64).sum(),
        sum_wd: rows.iter().map(|r| r.wd as u64).sum(),
        sum_lc: rows.iter().map(|r| r.lc as u64).sum(),
        sum_hh,
        sum_hh_x3: rows.iter().map(|r| r.hh_x3 as u64).sum(),
        sum_optimal: rows.iter().map(|r| r.optimal.map(u64::from)).sum(),
        mean_length_solved: mean(sum_length as f64, solved.len()),
        mean_length_all: mean(sum_length as f64, rows.len()),
        mean_generated: mean(sum_generated as f64, rows.len()),
        mean_hh: mean(sum_hh as f64, rows.len()),
        delta_histogram,
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn fields(r: &ReportRow) -> [String; 12] {
    [
        r.id.to_string(),
        opt(r.length),
        r.generated.to_string(),
        r.expanded.to_string(),
        r.md.to_string(),
        r.wd.to_string(),
        r.lc.to_string(),
        r.hh.to_string(),
        opt(r.optimal),
        opt(r.delta),
        r.time_ms.to_string(),
        r.status.name().to_string(),
    ]
}

pub fn write_csv<W: Write>(rows: &[ReportRow], out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record(fields(r))?;
    }
    w.flush()
}

fn fmt_mean(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |m| format!("{m:.2}"))
}

pub fn write_markdown<W: Write>(rows: &[ReportRow], mut out: W) -> io::Result<()> {
    writeln!(out, "| {} |", CSV_HEADER.join(" | "))?;
    writeln!(out, "|{}", "---|".repeat(CSV_HEADER.len()))?;
    for r in rows {
        writeln!(out, "| {} |", fields(r).join(" | "))?;
    }
    let s = summarize(rows);
    writeln!(out)?;
    writeln!(out, "## Summary")?;
    writeln!(out)?;
    writeln!(
        out,
        "- rows: {} (solved {}, budget exceeded {})",
        s.rows, s.solved, s.budget_exceeded
    )?;
    writeln!(
        out,
        "- sums: length {}, generated {}, expanded {}, md {}, wd {}, lc {}, hh {} (exact {} = {}), optimal {}",
        s.sum_length,
        s.sum_generated,
        s.sum_expanded,
        s.sum_md,
        s.sum_wd,
        s.sum_lc,
        s.sum_hh,
        s.exact_hh_sum(),
        s.exact_hh_sum().rounded(),
        s.sum_optimal.map_or_else(|| "-".to_string(), |o| o.to_string()),
    )?;
    writeln!(
        out,
        "- means: length {} over solved rows, {} over all rows; generated {}; hh {}",
        fmt_mean(s.mean_length_solved),
        fmt_mean(s.mean_length_all),
        fmt_mean(s.mean_generated),
        fmt_mean(s.mean_hh),
    )?;
    writeln!(out)?;
    writeln!(out, "| delta | 0 | 2 | 4 | 6 | 8 | 10 | >10 |")?;
    writeln!(out, "|---|---|---|---|---|---|---|---|")?;
    let counts: Vec<String> = s.delta_histogram.iter().map(|c| c.to_string()).collect();
    writeln!(out, "| rows | {} |", counts.join(" | "))?;
    Ok(())
}

pub fn emit_report<W: Write>(rows: &[ReportRow], format: ReportFormat, out: W) -> io::Result<()> {
    match format {
        ReportFormat::Csv => write_csv(rows, out),
        ReportFormat::Markdown => write_markdown(rows, out),
    }
}
