//! Community mobility report CSV parsing.
//!
//! Columns are located by header name, so column order and extra columns do
//! not matter. Empty cells are unmeasured days and are never filled in.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::MobilityError;
use crate::series::DailySeries;
use crate::window::DateRange;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MobilityCategory {
    RetailAndRecreation,
    GroceryAndPharmacy,
    Parks,
    TransitStations,
    Workplaces,
    Residential,
}

impl MobilityCategory {
    /// All six categories in declaration order.
    pub const ALL: [MobilityCategory; 6] = [
        MobilityCategory::RetailAndRecreation,
        MobilityCategory::GroceryAndPharmacy,
        MobilityCategory::Parks,
        MobilityCategory::TransitStations,
        MobilityCategory::Workplaces,
        MobilityCategory::Residential,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MobilityCategory::RetailAndRecreation => "retail_and_recreation",
            MobilityCategory::GroceryAndPharmacy => "grocery_and_pharmacy",
            MobilityCategory::Parks => "parks",
            MobilityCategory::TransitStations => "transit_stations",
            MobilityCategory::Workplaces => "workplaces",
            MobilityCategory::Residential => "residential",
        }
    }

    pub fn column(self) -> String {
        format!("{}_percent_change_from_baseline", self.name())
    }

    pub fn is_residential(self) -> bool {
        self == MobilityCategory::Residential
    }
}

impl fmt::Display for MobilityCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MobilityCategory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MobilityCategory::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown mobility category {s:?}"))
    }
}

/// Which rows of the report to keep. `None` sub-regions must be empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionSelector {
    pub country_code: String,
    pub sub_region_1: Option<String>,
    pub sub_region_2: Option<String>,
}

impl RegionSelector {
    pub fn national(country_code: &str) -> Self {
        Self {
            country_code: country_code.to_string(),
            sub_region_1: None,
            sub_region_2: None,
        }
    }

    fn matches(&self, code: &str, sub1: &str, sub2: &str) -> bool {
        code == self.country_code
            && sub1 == self.sub_region_1.as_deref().unwrap_or("")
            && sub2 == self.sub_region_2.as_deref().unwrap_or("")
    }
}

impl Default for RegionSelector {
    fn default() -> Self {
        Self::national("US")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MobilitySeries {
    pub region: RegionSelector,
    values: BTreeMap<MobilityCategory, BTreeMap<NaiveDate, f64>>,
}

impl MobilitySeries {
    pub fn new(region: RegionSelector) -> Self {
        Self {
            region,
            values: MobilityCategory::ALL.into_iter().map(|c| (c, BTreeMap::new())).collect(),
        }
    }

    /// Panics on a non-finite value.
    pub fn insert(&mut self, category: MobilityCategory, day: NaiveDate, value: f64) {
        assert!(value.is_finite(), "mobility values must be finite");
        self.values.get_mut(&category).expect("all categories present").insert(day, value);
    }

    pub fn get(&self, category: MobilityCategory, day: NaiveDate) -> Option<f64> {
        self.values[&category].get(&day).copied()
    }

    /// Measured points of one category, ascending by date.
    pub fn points(&self, category: MobilityCategory) -> impl Iterator<Item = (NaiveDate, f64)> + '_ {
        self.values[&category].iter().map(|(d, v)| (*d, *v))
    }

    /// Every date with at least one measured category.
    pub fn dates(&self) -> Vec<NaiveDate> {
        let mut all: Vec<NaiveDate> = self.values.values().flat_map(|m| m.keys().copied()).collect();
        all.sort();
        all.dedup();
        all
    }

    pub fn date_span(&self) -> DateRange {
        let dates = self.dates();
        match (dates.first(), dates.last()) {
            (Some(a), Some(b)) => DateRange::new(*a, *b).expect("sorted"),
            _ => DateRange::empty(),
        }
    }
}

const REGION_COLUMNS: [&str; 4] = ["country_region_code", "sub_region_1", "sub_region_2", "date"];

pub fn parse_mobility_csv<R: Read>(reader: R, filter: &RegionSelector) -> Result<MobilitySeries, MobilityError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(false).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let index: HashMap<&str, usize> = headers
        .iter()
        .enumerate()
        .map(|(i, h)| (h.trim_start_matches('\u{feff}').trim(), i))
        .collect();
    let find = |name: &str| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| MobilityError::MissingColumn(name.to_string()))
    };
    let [code_ix, sub1_ix, sub2_ix, date_ix] = REGION_COLUMNS.map(find);
    let (code_ix, sub1_ix, sub2_ix, date_ix) = (code_ix?, sub1_ix?, sub2_ix?, date_ix?);
    let mut category_ix = Vec::with_capacity(6);
    for c in MobilityCategory::ALL {
        category_ix.push((c, find(&c.column())?));
    }

    let mut out = MobilitySeries::new(filter.clone());
    let mut seen_dates = std::collections::BTreeSet::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = i + 2;
        let cell = |ix: usize| rec.get(ix).unwrap_or("").trim();
        if !filter.matches(cell(code_ix), cell(sub1_ix), cell(sub2_ix)) {
            continue;
        }
        let day = NaiveDate::parse_from_str(cell(date_ix), "%Y-%m-%d").map_err(|_| MobilityError::BadDate(row))?;
        if !seen_dates.insert(day) {
            return Err(MobilityError::DuplicateDate(day));
        }
        for &(c, ix) in &category_ix {
            let raw = cell(ix);
            if raw.is_empty() {
                continue;
            }
            let value: f64 = raw
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| MobilityError::BadNumber {
                    row,
                    column: c.column(),
                })?;
            out.insert(c, day, value);
        }
    }
    if seen_dates.is_empty() {
        return Err(MobilityError::NoRowsMatched);
    }
    Ok(out)
}

/// Writes the series back in report schema, one row per measured date.
pub fn write_mobility_csv<W: Write>(series: &MobilitySeries, writer: W) -> Result<(), MobilityError> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<String> = REGION_COLUMNS.iter().map(|s| s.to_string()).collect();
    header.extend(MobilityCategory::ALL.iter().map(|c| c.column()));
    w.write_record(&header)?;
    for day in series.dates() {
        let mut row = vec![
            series.region.country_code.clone(),
            series.region.sub_region_1.clone().unwrap_or_default(),
            series.region.sub_region_2.clone().unwrap_or_default(),
            day.to_string(),
        ];
        row.extend(
            MobilityCategory::ALL
                .iter()
                .map(|c| series.get(*c, day).map(|v| v.to_string()).unwrap_or_default()),
        );
        w.write_record(&row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// One category restricted to `window`. Missing days stay missing.
pub fn category_series(series: &MobilitySeries, category: MobilityCategory, window: DateRange) -> DailySeries {
    let mut out = DailySeries::new(category.name());
    for (day, v) in series.points(category).filter(|(d, _)| window.contains(*d)) {
        out.insert(day, v);
    }
    out
}
