//! Deterministic synthetic corpus and mobility report.
//!
//! Everything is driven by [`SplitMix64`], so the same [`SynthSpec`]
//! produces byte-identical files on every platform:
//!
//! ```text
//! state  <- state + 0x9E3779B97F4A7C15          (wrapping)
//! z      <- (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9
//! z      <- (z ^ (z >> 27)) * 0x94D049BB133111EB
//! output <- z ^ (z >> 31)
//! ```
//!
//! Uniform doubles take the top 53 bits of an output times 2^-53. Gaussian
//! noise uses the Box-Muller cosine branch on two successive uniforms.
//!
//! Daily tweet volume follows a rise-peak-decline envelope: a floor plus an
//! asymmetric Gaussian bump centered on `peak_day`. Tags are drawn from fixed
//! weights with `stayhome` heaviest and `quaranthriving` lightest. Mobility
//! values are affine in the standardized daily total: positive slope for
//! residential, negative for the five other categories, plus noise.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use chrono::{Days, FixedOffset, NaiveDate, TimeZone, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexicon::DEFAULT_TAGS;
use crate::mobility::MobilityCategory;
use crate::window::{ymd, COLLECTION_START, MOBILITY_REPORT_START};

pub const CORPUS_FILE: &str = "tweets.ndjson";
pub const MOBILITY_FILE: &str = "mobility.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid synth spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [0, n). Slightly biased for huge n; irrelevant here.
    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    pub fn gaussian(&mut self) -> f64 {
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    fn pick_weighted(&mut self, weights: &[u32]) -> usize {
        let total: u32 = weights.iter().sum();
        let mut x = self.below(total as u64) as u32;
        for (i, w) in weights.iter().enumerate() {
            if x < *w {
                return i;
            }
            x -= w;
        }
        unreachable!("x < total")
    }
}

/// Relative tag weights, aligned with [`DEFAULT_TAGS`].
pub const TAG_WEIGHTS: [u32; 18] = [
    55,  // staysafestayhome
    120, // socialdistancing
    20,  // socialdistancingworks
    70,  // flattenthecurve
    200, // stayhome
    110, // stayathome
    15,  // stayhomesweethome
    45,  // stayhomesavelives
    18,  // healthyathome
    80,  // lockdown
    12,  // letsstayhome
    35,  // togetherathome
    30,  // lockdown2020
    90,  // quarantine
    25,  // quarantined
    28,  // quarantine2020
    3,   // quaranthriving
    14,  // quarantining
];

/// Mixed-case renderings, as users would type them.
const DISPLAY_TAGS: [&str; 18] = [
    "StaySafeStayHome",
    "SocialDistancing",
    "SocialDistancingWorks",
    "FlattenTheCurve",
    "StayHome",
    "StayAtHome",
    "StayHomeSweetHome",
    "StayHomeSaveLives",
    "HealthyAtHome",
    "Lockdown",
    "LetsStayHome",
    "TogetherAtHome",
    "Lockdown2020",
    "Quarantine",
    "Quarantined",
    "Quarantine2020",
    "Quaranthriving",
    "Quarantining",
];

/// (base level, slope per standard deviation of the daily total).
fn category_profile(c: MobilityCategory) -> (f64, f64) {
    match c {
        MobilityCategory::RetailAndRecreation => (-20.0, -25.0),
        MobilityCategory::GroceryAndPharmacy => (-5.0, -12.0),
        MobilityCategory::Parks => (0.0, -15.0),
        MobilityCategory::TransitStations => (-25.0, -30.0),
        MobilityCategory::Workplaces => (-20.0, -25.0),
        MobilityCategory::Residential => (5.0, 8.0),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub seed: u64,
    pub start: NaiveDate,
    pub days: usize,
    /// Day index of the volume peak.
    pub peak_day: usize,
    /// Total corpus lines.
    pub tweets: usize,
    /// Envelope floor as a fraction of the peak.
    pub floor: f64,
    pub rise_width: f64,
    pub decay_width: f64,
    /// Signed coupling of mobility to the hashtag total. Positive makes
    /// residential move with the total and the other categories against it.
    pub coupling: f64,
    /// Standard deviation of the additive mobility noise.
    pub noise: f64,
    pub mobility_start: NaiveDate,
}

impl SynthSpec {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn end(&self) -> NaiveDate {
        self.start + Days::new(self.days as u64 - 1)
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: &str| Err(SynthError::InvalidSpec(m.to_string()));
        if self.days < 10 {
            return bad("days must be at least 10");
        }
        if self.peak_day >= self.days {
            return bad("peak_day must fall inside the generated days");
        }
        if !(0.0..1.0).contains(&self.floor) {
            return bad("floor must lie in [0, 1)");
        }
        if !(self.rise_width > 0.0 && self.decay_width > 0.0) {
            return bad("envelope widths must be positive");
        }
        if !self.coupling.is_finite() || !(self.noise.is_finite() && self.noise >= 0.0) {
            return bad("coupling must be finite and noise non-negative");
        }
        Ok(())
    }

    fn envelope(&self, day: usize) -> f64 {
        let offset = day as f64 - self.peak_day as f64;
        let width = if offset < 0.0 { self.rise_width } else { self.decay_width };
        self.floor + (1.0 - self.floor) * (-0.5 * (offset / width).powi(2)).exp()
    }

    /// Tweets per day, summing exactly to `tweets` (largest remainder).
    pub fn daily_volume(&self) -> Vec<usize> {
        let env: Vec<f64> = (0..self.days).map(|d| self.envelope(d)).collect();
        let total_env: f64 = env.iter().sum();
        let exact: Vec<f64> = env.iter().map(|e| e / total_env * self.tweets as f64).collect();
        let mut out: Vec<usize> = exact.iter().map(|x| x.floor() as usize).collect();
        let short = self.tweets - out.iter().sum::<usize>();
        let mut order: Vec<usize> = (0..self.days).collect();
        order.sort_by(|&a, &b| {
            let (fa, fb) = (exact[a] - exact[a].floor(), exact[b] - exact[b].floor());
            fb.total_cmp(&fa).then(a.cmp(&b))
        });
        for &d in order.iter().take(short) {
            out[d] += 1;
        }
        out
    }
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            seed: 42,
            start: ymd(COLLECTION_START),
            days: 147,
            // 2020-03-15
            peak_day: 74,
            tweets: 10_000,
            floor: 0.06,
            rise_width: 12.0,
            decay_width: 30.0,
            coupling: 1.0,
            noise: 3.0,
            mobility_start: ymd(MOBILITY_REPORT_START),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestDay {
    pub date: NaiveDate,
    pub tweets: usize,
    /// Lexicon hashtag occurrences that ingestion should count.
    pub total: u64,
    /// Same, counting each tag at most once per tweet.
    pub total_dedup: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestTag {
    pub tag: String,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthManifest {
    pub spec: SynthSpec,
    pub daily: Vec<ManifestDay>,
    pub tag_totals: Vec<ManifestTag>,
}

#[derive(Debug, Clone)]
pub struct SynthOutput {
    pub corpus: String,
    pub mobility_csv: String,
    pub manifest: SynthManifest,
}

fn render_tag(rng: &mut SplitMix64, k: usize) -> String {
    match rng.below(4) {
        0 => DEFAULT_TAGS[k].to_string(),
        1 => DEFAULT_TAGS[k].to_ascii_uppercase(),
        _ => DISPLAY_TAGS[k].to_string(),
    }
}

const OPENERS: [&str; 6] = ["Please", "Day 12 and counting.", "Remember:", "We can do this", "Friendly reminder", "Love this"];
const CLOSERS: [&str; 5] = ["❤️", "today!", "for everyone", "stay strong", "🙏 https://example.org/#top"];

/// Builds the corpus, mobility CSV and manifest in memory.
pub fn generate_synthetic(spec: &SynthSpec) -> Result<SynthOutput, SynthError> {
    spec.validate()?;
    let mut rng = SplitMix64::new(spec.seed);
    let volume = spec.daily_volume();
    let mut corpus = String::new();
    let mut daily = Vec::with_capacity(spec.days);
    let mut tag_totals = [0u64; 18];
    let mut id = 0u64;

    for (d, &n_tweets) in volume.iter().enumerate() {
        let date = spec.start + Days::new(d as u64);
        let midnight = Utc.from_utc_datetime(&date.and_hms_opt(0, 0, 0).expect("midnight"));
        let (mut total, mut total_dedup) = (0u64, 0u64);
        for _ in 0..n_tweets {
            id += 1;
            let mut parts: Vec<String> = vec![OPENERS[rng.below(OPENERS.len() as u64) as usize].to_string()];
            let mut planted: Vec<usize> = Vec::new();
            if rng.below(100) < 8 {
                // off-topic: nothing here should be counted
                parts.push(["#covid19", "news#StayHome", "#StaySafe", "##StayHome", "no tags"][rng.below(5) as usize].to_string());
            } else {
                let k_tags = 1 + rng.below(3) as usize;
                for _ in 0..k_tags {
                    let k = rng.pick_weighted(&TAG_WEIGHTS);
                    parts.push(format!("#{}", render_tag(&mut rng, k)));
                    planted.push(k);
                    if rng.below(10) == 0 {
                        parts.push(format!("#{}", render_tag(&mut rng, k)));
                        planted.push(k);
                    }
                }
                if rng.below(5) == 0 {
                    parts.push("#WFH".to_string());
                }
            }
            parts.push(CLOSERS[rng.below(CLOSERS.len() as u64) as usize].to_string());
            let text = parts.join(" ");

            let country = match rng.below(100) {
                0..=1 => Some("CA"),
                2..=31 => Some("US"),
                _ => None,
            };
            let at = midnight + chrono::Duration::seconds(rng.below(86_400) as i64);
            let created_at = match rng.below(10) {
                0..=1 => at.with_timezone(&FixedOffset::west_opt(5 * 3600).expect("offset")).to_rfc3339(),
                2 => at.with_timezone(&FixedOffset::west_opt(7 * 3600).expect("offset")).to_rfc3339(),
                _ => at.format("%Y-%m-%dT%H:%M:%SZ").to_string(),
            };

            let mut obj = serde_json::Map::new();
            obj.insert("id".into(), id.to_string().into());
            obj.insert("created_at".into(), created_at.into());
            obj.insert("text".into(), text.into());
            obj.insert("lang".into(), "en".into());
            if let Some(cc) = country {
                obj.insert("country_code".into(), cc.into());
            }
            corpus.push_str(&serde_json::Value::Object(obj).to_string());
            corpus.push('\n');

            if country != Some("CA") {
                total += planted.len() as u64;
                let mut distinct = planted.clone();
                distinct.sort_unstable();
                distinct.dedup();
                total_dedup += distinct.len() as u64;
                for k in planted {
                    tag_totals[k] += 1;
                }
            }
        }
        daily.push(ManifestDay {
            date,
            tweets: n_tweets,
            total,
            total_dedup,
        });
    }

    let mobility_csv = mobility_report(spec, &daily, &mut rng);
    let manifest = SynthManifest {
        spec: spec.clone(),
        daily,
        tag_totals: DEFAULT_TAGS
            .iter()
            .zip(tag_totals)
            .map(|(t, c)| ManifestTag {
                tag: t.to_string(),
                count: c,
            })
            .collect(),
    };
    Ok(SynthOutput {
        corpus,
        mobility_csv,
        manifest,
    })
}

fn mobility_report(spec: &SynthSpec, daily: &[ManifestDay], rng: &mut SplitMix64) -> String {
    let totals: Vec<f64> = daily.iter().map(|d| d.total as f64).collect();
    let mean = totals.iter().sum::<f64>() / totals.len() as f64;
    let sd = (totals.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / totals.len() as f64).sqrt();
    let sd = if sd > 0.0 { sd } else { 1.0 };

    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![
        "country_region_code".to_string(),
        "country_region".into(),
        "sub_region_1".into(),
        "sub_region_2".into(),
        "metro_area".into(),
        "iso_3166_2_code".into(),
        "census_fips_code".into(),
        "place_id".into(),
        "date".into(),
    ];
    header.extend(MobilityCategory::ALL.iter().map(|c| c.column()));
    w.write_record(&header).expect("in-memory write");

    let first = spec.mobility_start.max(spec.start);
    let first = if first > spec.end() { spec.start } else { first };
    for day in daily.iter().filter(|d| d.date >= first) {
        let z = (day.total as f64 - mean) / sd;
        let mut national = vec![
            "US".to_string(),
            "United States".into(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            "ChIJCzYy5IS16lQRQrfeQ5K5Oxw".into(),
            day.date.to_string(),
        ];
        let mut state = vec![
            "US".to_string(),
            "United States".into(),
            "South Carolina".into(),
            String::new(),
            String::new(),
            "US-SC".into(),
            String::new(),
            "ChIJ49ExeWml-IgRnhcF9TKh_7k".into(),
            day.date.to_string(),
        ];
        for c in MobilityCategory::ALL {
            let (base, slope) = category_profile(c);
            let value = base + spec.coupling * slope * z + spec.noise * rng.gaussian();
            national.push(value.to_string());
            state.push(((value + 3.0 * rng.gaussian()).round() as i64).to_string());
        }
        w.write_record(&national).expect("in-memory write");
        w.write_record(&state).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

#[derive(Debug, Clone)]
pub struct SynthPaths {
    pub corpus: PathBuf,
    pub mobility: PathBuf,
    pub manifest: PathBuf,
}

/// Writes `tweets.ndjson`, `mobility.csv` and `manifest.json` into `dir`.
pub fn write_synthetic(spec: &SynthSpec, dir: &Path) -> Result<(SynthOutput, SynthPaths), SynthError> {
    let out = generate_synthetic(spec)?;
    fs::create_dir_all(dir)?;
    let paths = SynthPaths {
        corpus: dir.join(CORPUS_FILE),
        mobility: dir.join(MOBILITY_FILE),
        manifest: dir.join(MANIFEST_FILE),
    };
    fs::write(&paths.corpus, &out.corpus)?;
    fs::write(&paths.mobility, &out.mobility_csv)?;
    let mut json = serde_json::to_string_pretty(&out.manifest)?;
    json.push('\n');
    fs::write(&paths.manifest, json)?;
    Ok((out, paths))
}
