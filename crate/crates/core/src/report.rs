//! Report emission: trend tables, the correlation matrix, and
//! self-contained SVG figures. Output bytes depend only on the inputs.

use std::fmt::Write as _;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::Datelike;
use serde::{Deserialize, Serialize};

use crate::counts::DailyCountTable;
use crate::error::{ReportError, StatsError};
use crate::mobility::MobilityCategory;
use crate::series::{per_tag_series, total_series, DailySeries};
use crate::stats::{Coefficient, CorrelationResult};

pub const SIGNIFICANCE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportFormats {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl Default for ReportFormats {
    fn default() -> Self {
        Self {
            csv: true,
            json: true,
            svg: true,
        }
    }
}

impl FromStr for ReportFormats {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut f = ReportFormats {
            csv: false,
            json: false,
            svg: false,
        };
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "csv" => f.csv = true,
                "json" => f.json = true,
                "svg" => f.svg = true,
                other => return Err(format!("unknown output format {other:?}")),
            }
        }
        if !(f.csv || f.json || f.svg) {
            return Err("select at least one of csv,json,svg".into());
        }
        Ok(f)
    }
}

pub fn format_r(r: f64) -> String {
    format!("{r:.6}")
}

/// Fixed notation, switching to scientific below 1e-4.
pub fn format_p(p: f64) -> String {
    if p < 1e-4 {
        format!("{p:.6e}")
    } else {
        format!("{p:.6}")
    }
}

/// Every series in the trend chart: one per tag in lexicon order, then total.
fn trend_series(table: &DailyCountTable) -> Vec<DailySeries> {
    let mut out: Vec<DailySeries> = table
        .lexicon()
        .tags()
        .map(|t| per_tag_series(table, t).expect("lexicon tag"))
        .collect();
    out.push(total_series(table));
    out
}

/// `(tag, whole-window count)`, descending; ties keep lexicon order.
pub fn tag_totals(table: &DailyCountTable) -> Vec<(String, u64)> {
    let mut totals: Vec<(String, u64)> = table
        .lexicon()
        .tags()
        .map(|t| (t.to_string(), table.tag_total(t)))
        .collect();
    totals.sort_by_key(|t| std::cmp::Reverse(t.1));
    totals
}

pub fn write_trend_csv<W: Write>(table: &DailyCountTable, writer: W) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["date".to_string()];
    header.extend(table.lexicon().tags().map(String::from));
    header.push("total".into());
    w.write_record(&header)?;
    for day in table.range().days() {
        let mut row = vec![day.to_string()];
        row.extend(table.lexicon().tags().map(|t| table.get(day, t).to_string()));
        row.push(table.day_total(day).to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_totals_csv<W: Write>(table: &DailyCountTable, writer: W) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["tag", "count"])?;
    for (tag, count) in tag_totals(table) {
        w.write_record([tag, count.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `trend.csv` and `totals.csv` (csv) and `trend.svg` (svg).
pub fn emit_trend_report(table: &DailyCountTable, dir: &Path, formats: ReportFormats) -> Result<Vec<PathBuf>, ReportError> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    if formats.csv {
        let path = dir.join("trend.csv");
        write_trend_csv(table, fs::File::create(&path)?)?;
        written.push(path);
        let path = dir.join("totals.csv");
        write_totals_csv(table, fs::File::create(&path)?)?;
        written.push(path);
    }
    if formats.svg {
        let path = dir.join("trend.svg");
        fs::write(&path, trend_svg(&trend_series(table)))?;
        written.push(path);
    }
    Ok(written)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct MatrixRow {
    series: String,
    category: MobilityCategory,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

impl From<&CorrelationResult> for MatrixRow {
    fn from(c: &CorrelationResult) -> Self {
        MatrixRow {
            series: c.series.clone(),
            category: c.category,
            n: c.n,
            r: c.r(),
            p: c.p(),
            error: c.outcome.as_ref().err().map(|e| e.code().to_string()),
        }
    }
}

impl TryFrom<MatrixRow> for CorrelationResult {
    type Error = ReportError;

    fn try_from(row: MatrixRow) -> Result<Self, Self::Error> {
        let outcome = match (row.r, row.p, row.error.as_deref()) {
            (Some(r), Some(p), None) => Ok(Coefficient { r, p }),
            (None, None, Some(code)) => Err(StatsError::from_code(code, row.n)
                .ok_or_else(|| ReportError::Format(format!("unknown error code {code:?}")))?),
            _ => {
                return Err(ReportError::Format(format!(
                    "{}/{}: need r and p, or an error",
                    row.series, row.category
                )))
            }
        };
        Ok(CorrelationResult {
            series: row.series,
            category: row.category,
            n: row.n,
            outcome,
        })
    }
}

pub fn write_matrix_json<W: Write>(results: &[CorrelationResult], mut writer: W) -> Result<(), ReportError> {
    let rows: Vec<MatrixRow> = results.iter().map(MatrixRow::from).collect();
    serde_json::to_writer_pretty(&mut writer, &rows)?;
    writer.write_all(b"\n")?;
    Ok(())
}

pub fn read_matrix_json<R: Read>(reader: R) -> Result<Vec<CorrelationResult>, ReportError> {
    let rows: Vec<MatrixRow> = serde_json::from_reader(reader)?;
    rows.into_iter().map(CorrelationResult::try_from).collect()
}

pub fn write_matrix_csv<W: Write>(results: &[CorrelationResult], writer: W) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["series", "category", "n", "r", "p", "error"])?;
    for c in results {
        let (r, p, err) = match &c.outcome {
            Ok(v) => (format_r(v.r), format_p(v.p), String::new()),
            Err(e) => (String::new(), String::new(), e.code().to_string()),
        };
        w.write_record([c.series.clone(), c.category.to_string(), c.n.to_string(), r, p, err])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `matrix.csv` (csv), `matrix.json` (json) and `matrix.svg` (svg).
pub fn emit_matrix_report(results: &[CorrelationResult], dir: &Path, formats: ReportFormats) -> Result<Vec<PathBuf>, ReportError> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    if formats.csv {
        let path = dir.join("matrix.csv");
        write_matrix_csv(results, fs::File::create(&path)?)?;
        written.push(path);
    }
    if formats.json {
        let path = dir.join("matrix.json");
        write_matrix_json(results, fs::File::create(&path)?)?;
        written.push(path);
    }
    if formats.svg {
        let path = dir.join("matrix.svg");
        fs::write(&path, matrix_svg(results))?;
        written.push(path);
    }
    Ok(written)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

const PALETTE: [&str; 18] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
    "#17becf", "#aec7e8", "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5", "#c49c94", "#f7b6d2", "#dbdb8d",
];

/// Rounds `max` up to 1, 2 or 5 times a power of ten.
fn nice_ceiling(max: f64) -> f64 {
    if max <= 0.0 {
        return 1.0;
    }
    let mag = 10f64.powf(max.log10().floor());
    [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|v| *v >= max)
        .unwrap_or(10.0 * mag)
}

/// Line chart of every series over a shared date axis. The series labelled
/// `total` is drawn heavier. Axes auto-scale.
pub fn trend_svg(series: &[DailySeries]) -> String {
    const W: f64 = 960.0;
    const H: f64 = 480.0;
    const LEFT: f64 = 64.0;
    const RIGHT: f64 = 200.0;
    const TOP: f64 = 32.0;
    const BOTTOM: f64 = 48.0;
    let plot_w = W - LEFT - RIGHT;
    let plot_h = H - TOP - BOTTOM;

    let mut dates: Vec<_> = series.iter().flat_map(|s| s.iter().map(|(d, _)| d)).collect();
    dates.sort();
    dates.dedup();
    let y_max = nice_ceiling(series.iter().flat_map(|s| s.values()).fold(0.0, f64::max));
    let span = dates.len().saturating_sub(1).max(1) as f64;
    let x_of = |d| {
        let i = dates.binary_search(&d).expect("known date") as f64;
        LEFT + plot_w * i / span
    };
    let y_of = |v: f64| TOP + plot_h * (1.0 - v / y_max);

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#);
    let _ = writeln!(svg, r##"<rect width="{W}" height="{H}" fill="#ffffff"/>"##);
    let _ = writeln!(svg, r#"<text x="{LEFT}" y="20" font-size="14">Daily hashtag frequency</text>"#);
    for k in 0..=5 {
        let v = y_max * k as f64 / 5.0;
        let y = y_of(v);
        let _ = writeln!(svg, r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#e0e0e0"/>"##, LEFT + plot_w);
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v}</text>"#, LEFT - 6.0, y + 4.0);
    }
    for d in dates.iter().filter(|d| d.day() == 1 || dates.first() == Some(*d)) {
        let x = x_of(*d);
        let _ = writeln!(svg, r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="#f0f0f0"/>"##, TOP + plot_h);
        let _ = writeln!(svg, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, TOP + plot_h + 16.0, d.format("%Y-%m-%d"));
    }
    let _ = writeln!(svg, r##"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#333333"/>"##);

    let mut colour = PALETTE.iter().cycle();
    for (k, s) in series.iter().enumerate() {
        let (stroke, width) = if s.label() == "total" {
            ("#000000", 2.5)
        } else {
            (*colour.next().expect("cycle"), 1.0)
        };
        let pts: Vec<String> = s.iter().map(|(d, v)| format!("{:.2},{:.2}", x_of(d), y_of(v))).collect();
        if !pts.is_empty() {
            let _ = writeln!(svg, r#"<polyline fill="none" stroke="{stroke}" stroke-width="{width}" points="{}"/>"#, pts.join(" "));
        }
        let ly = TOP + 12.0 * k as f64 + 6.0;
        let lx = LEFT + plot_w + 12.0;
        let _ = writeln!(svg, r#"<line x1="{lx}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{stroke}" stroke-width="{width}"/>"#, lx + 18.0);
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lx + 24.0, ly + 4.0, xml_escape(s.label()));
    }
    svg.push_str("</svg>\n");
    svg
}

/// Series × category heat grid. Blue for r > 0, red for r < 0, grey for
/// error cells; `*` marks p < 0.05.
pub fn matrix_svg(results: &[CorrelationResult]) -> String {
    const CELL_W: f64 = 120.0;
    const CELL_H: f64 = 28.0;
    const LEFT: f64 = 170.0;
    const TOP: f64 = 60.0;
    let mut rows: Vec<&str> = Vec::new();
    for c in results {
        if !rows.contains(&c.series.as_str()) {
            rows.push(&c.series);
        }
    }
    let w = LEFT + CELL_W * 6.0 + 20.0;
    let h = TOP + CELL_H * rows.len() as f64 + 40.0;

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="11">"#);
    let _ = writeln!(svg, r##"<rect width="{w}" height="{h}" fill="#ffffff"/>"##);
    let _ = writeln!(svg, r#"<text x="10" y="20" font-size="14">Pearson r: hashtag frequency vs mobility (* p &lt; {SIGNIFICANCE})</text>"#);
    for (j, c) in MobilityCategory::ALL.iter().enumerate() {
        let x = LEFT + CELL_W * (j as f64 + 0.5);
        let _ = writeln!(svg, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, TOP - 8.0, c.name());
    }
    for (i, label) in rows.iter().enumerate() {
        let y = TOP + CELL_H * i as f64;
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, LEFT - 8.0, y + CELL_H / 2.0 + 4.0, xml_escape(label));
    }
    for c in results {
        let i = rows.iter().position(|r| *r == c.series).expect("row");
        let j = MobilityCategory::ALL.iter().position(|k| *k == c.category).expect("category");
        let (x, y) = (LEFT + CELL_W * j as f64, TOP + CELL_H * i as f64);
        let (fill, text) = match &c.outcome {
            Ok(v) => {
                let a = v.r.abs();
                let shade = |full: f64| (255.0 - (255.0 - full) * a).round() as u8;
                let fill = if v.r >= 0.0 {
                    format!("#{:02x}{:02x}{:02x}", shade(33.0), shade(102.0), shade(172.0))
                } else {
                    format!("#{:02x}{:02x}{:02x}", shade(178.0), shade(24.0), shade(43.0))
                };
                let star = if v.p < SIGNIFICANCE { "*" } else { "" };
                (fill, format!("{:.2}{star}", v.r))
            }
            Err(e) => ("#cccccc".to_string(), e.code().to_string()),
        };
        let _ = writeln!(svg, r##"<rect x="{x:.2}" y="{y:.2}" width="{CELL_W}" height="{CELL_H}" fill="{fill}" stroke="#ffffff"/>"##);
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{text}</text>"#, x + CELL_W / 2.0, y + CELL_H / 2.0 + 4.0);
    }
    svg.push_str("</svg>\n");
    svg
}
