//! Daily hashtag count table and its `date,tag,count` CSV form.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::sync::Arc;

use chrono::NaiveDate;

use crate::error::CountsError;
use crate::lexicon::HashtagLexicon;
use crate::window::DateRange;

/// date → (canonical tag → occurrence count) over an inclusive date range.
///
/// Zero counts are never stored; an absent `(date, tag)` means 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DailyCountTable {
    lexicon: Arc<HashtagLexicon>,
    range: DateRange,
    counts: BTreeMap<NaiveDate, BTreeMap<String, u64>>,
}

impl DailyCountTable {
    pub fn new(lexicon: Arc<HashtagLexicon>, range: DateRange) -> Self {
        Self {
            lexicon,
            range,
            counts: BTreeMap::new(),
        }
    }

    pub fn lexicon(&self) -> &Arc<HashtagLexicon> {
        &self.lexicon
    }

    pub fn range(&self) -> DateRange {
        self.range
    }

    /// Adds `by` to `(day, tag)`.
    ///
    /// Panics if `tag` is outside the lexicon or `day` outside the range;
    /// both are caller bugs.
    pub fn increment(&mut self, day: NaiveDate, tag: &str, by: u64) {
        assert!(self.lexicon.contains(tag), "tag {tag:?} not in lexicon");
        assert!(self.range.contains(day), "{day} outside {}", self.range);
        if by == 0 {
            return;
        }
        *self
            .counts
            .entry(day)
            .or_default()
            .entry(tag.to_string())
            .or_insert(0) += by;
    }

    pub fn get(&self, day: NaiveDate, tag: &str) -> u64 {
        self.counts
            .get(&day)
            .and_then(|m| m.get(tag))
            .copied()
            .unwrap_or(0)
    }

    pub fn day_total(&self, day: NaiveDate) -> u64 {
        self.counts.get(&day).map_or(0, |m| m.values().sum())
    }

    pub fn tag_total(&self, tag: &str) -> u64 {
        self.counts.values().filter_map(|m| m.get(tag)).sum()
    }

    pub fn total_occurrences(&self) -> u64 {
        self.counts.values().flat_map(|m| m.values()).sum()
    }

    /// Non-zero cells in (date, tag) order.
    pub fn iter(&self) -> impl Iterator<Item = (NaiveDate, &str, u64)> {
        self.counts
            .iter()
            .flat_map(|(d, m)| m.iter().map(move |(t, c)| (*d, t.as_str(), *c)))
    }

    /// Pointwise sum. Both tables must share lexicon and range.
    pub fn merge(&self, other: &DailyCountTable) -> Result<DailyCountTable, CountsError> {
        if self.lexicon != other.lexicon {
            return Err(CountsError::LexiconMismatch);
        }
        if self.range != other.range {
            return Err(CountsError::RangeMismatch(
                self.range.to_string(),
                other.range.to_string(),
            ));
        }
        let mut out = self.clone();
        for (day, tag, c) in other.iter() {
            out.increment(day, tag, c);
        }
        Ok(out)
    }
}

pub fn merge_counts(a: &DailyCountTable, b: &DailyCountTable) -> Result<DailyCountTable, CountsError> {
    a.merge(b)
}

/// Writes every `(date, tag)` cell of the range, zeros included, so the
/// range and lexicon can be recovered on read.
pub fn write_counts_csv<W: Write>(table: &DailyCountTable, writer: W) -> Result<(), CountsError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["date", "tag", "count"])?;
    for day in table.range.days() {
        let date = day.to_string();
        for tag in table.lexicon.tags() {
            w.write_record([date.as_str(), tag, &table.get(day, tag).to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a counts file. The lexicon is the tags in first-appearance order
/// and the range spans the earliest to latest date.
pub fn read_counts_csv<R: Read>(reader: R) -> Result<DailyCountTable, CountsError> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.iter().map(str::trim).ne(["date", "tag", "count"]) {
        return Err(CountsError::Format(format!(
            "expected header date,tag,count, got {}",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut tags: Vec<String> = Vec::new();
    let mut cells: BTreeMap<(NaiveDate, String), u64> = BTreeMap::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = i + 2;
        let bad = |what: &str| CountsError::Format(format!("row {row}: bad {what}"));
        let day = NaiveDate::parse_from_str(rec.get(0).unwrap_or("").trim(), "%Y-%m-%d").map_err(|_| bad("date"))?;
        let tag = rec.get(1).unwrap_or("").trim().to_string();
        let count: u64 = rec.get(2).unwrap_or("").trim().parse().map_err(|_| bad("count"))?;
        if !tags.contains(&tag) {
            tags.push(tag.clone());
        }
        if cells.insert((day, tag.clone()), count).is_some() {
            return Err(CountsError::Format(format!("row {row}: duplicate cell {day},{tag}")));
        }
    }
    let (Some(first), Some(last)) = (
        cells.keys().map(|(d, _)| *d).min(),
        cells.keys().map(|(d, _)| *d).max(),
    ) else {
        return Err(CountsError::Format("no data rows".into()));
    };
    let lexicon = HashtagLexicon::from_tags(&tags).map_err(|e| CountsError::Format(e.to_string()))?;
    let range = DateRange::new(first, last).expect("min <= max");
    let mut table = DailyCountTable::new(Arc::new(lexicon), range);
    for ((day, tag), c) in cells {
        table.increment(day, &tag, c);
    }
    Ok(table)
}
