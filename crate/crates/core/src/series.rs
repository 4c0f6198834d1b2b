//! Daily series and pairwise-deletion alignment.

use std::collections::BTreeMap;
use std::io::Write;

use chrono::NaiveDate;

use crate::counts::DailyCountTable;
use crate::error::SeriesError;
use crate::window::DateRange;

/// Labelled date → value series. Stores only finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct DailySeries {
    label: String,
    points: BTreeMap<NaiveDate, f64>,
}

impl DailySeries {
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            points: BTreeMap::new(),
        }
    }

    pub fn from_points<I: IntoIterator<Item = (NaiveDate, f64)>>(label: impl Into<String>, points: I) -> Self {
        let mut s = Self::new(label);
        for (d, v) in points {
            s.insert(d, v);
        }
        s
    }

    /// Panics on NaN or infinity.
    pub fn insert(&mut self, day: NaiveDate, value: f64) {
        assert!(value.is_finite(), "series {:?}: non-finite value on {day}", self.label);
        self.points.insert(day, value);
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn get(&self, day: NaiveDate) -> Option<f64> {
        self.points.get(&day).copied()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Ascending by date.
    pub fn iter(&self) -> impl Iterator<Item = (NaiveDate, f64)> + '_ {
        self.points.iter().map(|(d, v)| (*d, *v))
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.values().copied()
    }
}

/// Paired observations on the dates both series share.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedPair {
    pub dates: Vec<NaiveDate>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl AlignedPair {
    /// Panics if the vectors differ in length.
    pub fn from_vecs(x: Vec<f64>, y: Vec<f64>) -> Self {
        assert_eq!(x.len(), y.len(), "aligned vectors must have equal length");
        let base = NaiveDate::from_ymd_opt(2000, 1, 1).expect("valid date");
        let dates = base.iter_days().take(x.len()).collect();
        Self { dates, x, y }
    }

    pub fn n(&self) -> usize {
        self.dates.len()
    }
}

/// Sum over all tags per day, zero-filled across the table's range.
pub fn total_series(table: &DailyCountTable) -> DailySeries {
    DailySeries::from_points("total", table.range().days().map(|d| (d, table.day_total(d) as f64)))
}

/// One tag per day, zero-filled across the table's range.
pub fn per_tag_series(table: &DailyCountTable, tag: &str) -> Result<DailySeries, SeriesError> {
    if !table.lexicon().contains(tag) {
        return Err(SeriesError::UnknownTag(tag.to_string()));
    }
    Ok(DailySeries::from_points(
        tag,
        table.range().days().map(|d| (d, table.get(d, tag) as f64)),
    ))
}

/// Keeps the dates inside `window` that both series have.
pub fn align(a: &DailySeries, b: &DailySeries, window: DateRange) -> AlignedPair {
    let mut pair = AlignedPair {
        dates: Vec::new(),
        x: Vec::new(),
        y: Vec::new(),
    };
    for (day, x) in a.iter().filter(|(d, _)| window.contains(*d)) {
        if let Some(y) = b.get(day) {
            pair.dates.push(day);
            pair.x.push(x);
            pair.y.push(y);
        }
    }
    pair
}

/// Long-format export with columns `date,label,value`.
pub fn write_series_csv<W: Write>(series: &[DailySeries], writer: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["date", "label", "value"])?;
    for s in series {
        for (d, v) in s.iter() {
            w.write_record([d.to_string(), s.label.clone(), v.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}
