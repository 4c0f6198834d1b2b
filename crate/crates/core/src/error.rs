use std::io;

use chrono::NaiveDate;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WindowError {
    #[error("window start {start} is after end {end}")]
    Inverted { start: NaiveDate, end: NaiveDate },
    #[error("expected window as YYYY-MM-DD:YYYY-MM-DD, got {0:?}")]
    Syntax(String),
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("invalid tag {raw:?}{}", line.map(|l| format!(" on line {l}")).unwrap_or_default())]
    InvalidTag { raw: String, line: Option<usize> },
    #[error("duplicate tag {tag:?} on lines {first_line} and {second_line}")]
    DuplicateTag {
        tag: String,
        first_line: usize,
        second_line: usize,
    },
    #[error("lexicon contains no tags")]
    EmptyLexicon,
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Error)]
pub enum CountsError {
    #[error("count tables are governed by different lexicons")]
    LexiconMismatch,
    #[error("count tables cover different date ranges ({0} vs {1})")]
    RangeMismatch(String, String),
    #[error("counts file: {0}")]
    Format(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Error)]
pub enum MobilityError {
    #[error("missing required column {0:?}")]
    MissingColumn(String),
    #[error("duplicate date {0} in selected region")]
    DuplicateDate(NaiveDate),
    #[error("unparseable date on row {0}")]
    BadDate(usize),
    #[error("unparseable number on row {row}, column {column:?}")]
    BadNumber { row: usize, column: String },
    #[error("no rows matched the region filter")]
    NoRowsMatched,
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("tag {0:?} is not in the lexicon")]
    UnknownTag(String),
}

/// Which side of an aligned pair had no variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("too few paired points (n = {n}, need at least 3)")]
    TooFewPoints { n: usize },
    #[error("zero variance in {}", match .0 { Axis::X => "x", Axis::Y => "y" })]
    ZeroVariance(Axis),
    #[error("incomplete beta continued fraction did not converge")]
    NoConvergence,
}

impl StatsError {
    /// Stable machine-readable code used in report files.
    pub fn code(&self) -> &'static str {
        match self {
            StatsError::TooFewPoints { .. } => "too_few_points",
            StatsError::ZeroVariance(Axis::X) => "zero_variance_x",
            StatsError::ZeroVariance(Axis::Y) => "zero_variance_y",
            StatsError::NoConvergence => "no_convergence",
        }
    }

    pub fn from_code(code: &str, n: usize) -> Option<Self> {
        Some(match code {
            "too_few_points" => StatsError::TooFewPoints { n },
            "zero_variance_x" => StatsError::ZeroVariance(Axis::X),
            "zero_variance_y" => StatsError::ZeroVariance(Axis::Y),
            "no_convergence" => StatsError::NoConvergence,
            _ => return None,
        })
    }
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("matrix file: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}
