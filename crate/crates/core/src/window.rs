//! Inclusive calendar-date ranges.

use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;

use crate::error::WindowError;

/// First day of the default collection window.
pub const COLLECTION_START: (i32, u32, u32) = (2020, 1, 1);
/// Last day of the default collection window.
pub const COLLECTION_END: (i32, u32, u32) = (2020, 5, 26);
/// First date covered by the community mobility report.
pub const MOBILITY_REPORT_START: (i32, u32, u32) = (2020, 2, 15);

pub(crate) fn ymd((y, m, d): (i32, u32, u32)) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).expect("valid constant date")
}

/// Inclusive `[start, end]` date range. A range with `start > end` is empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DateRange {
    start: NaiveDate,
    end: NaiveDate,
}

impl DateRange {
    pub fn new(start: NaiveDate, end: NaiveDate) -> Result<Self, WindowError> {
        if start > end {
            return Err(WindowError::Inverted { start, end });
        }
        Ok(Self { start, end })
    }

    pub fn single(day: NaiveDate) -> Self {
        Self { start: day, end: day }
    }

    /// A range containing no dates.
    pub fn empty() -> Self {
        Self {
            start: NaiveDate::MAX,
            end: NaiveDate::MIN,
        }
    }

    /// 2020-01-01 through 2020-05-26.
    pub fn collection_window() -> Self {
        Self {
            start: ymd(COLLECTION_START),
            end: ymd(COLLECTION_END),
        }
    }

    pub fn start(&self) -> NaiveDate {
        self.start
    }

    pub fn end(&self) -> NaiveDate {
        self.end
    }

    pub fn is_empty(&self) -> bool {
        self.start > self.end
    }

    pub fn contains(&self, day: NaiveDate) -> bool {
        self.start <= day && day <= self.end
    }

    pub fn num_days(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            (self.end - self.start).num_days() as usize + 1
        }
    }

    pub fn intersect(&self, other: &DateRange) -> DateRange {
        let start = self.start.max(other.start);
        let end = self.end.min(other.end);
        if start > end {
            DateRange::empty()
        } else {
            DateRange { start, end }
        }
    }

    /// Dates in ascending order.
    pub fn days(&self) -> impl Iterator<Item = NaiveDate> {
        let (start, n) = (self.start, self.num_days());
        start.iter_days().take(n)
    }
}

impl fmt::Display for DateRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("(empty)")
        } else {
            write!(f, "{}:{}", self.start, self.end)
        }
    }
}

/// Parses `YYYY-MM-DD:YYYY-MM-DD`.
impl FromStr for DateRange {
    type Err = WindowError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| WindowError::Syntax(s.to_string()))?;
        let parse = |t: &str| {
            NaiveDate::parse_from_str(t.trim(), "%Y-%m-%d")
                .map_err(|_| WindowError::Syntax(s.to_string()))
        };
        DateRange::new(parse(a)?, parse(b)?)
    }
}
