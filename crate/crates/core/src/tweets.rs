//! Tweet corpus ingestion: NDJSON record parsing, hashtag extraction, and
//! per-day counting.
//!
//! Malformed lines never abort ingestion; they are tallied in
//! [`IngestStats`] together with a bounded sample of skip reasons.

use std::fmt;
use std::io::{self, BufRead};
use std::sync::Arc;
use std::thread;

use chrono::{DateTime, SubsecRound, Utc};
use serde_json::{Map, Value};

use crate::counts::DailyCountTable;
use crate::lexicon::{normalize_tag, HashtagLexicon};
use crate::window::DateRange;

/// Number of skip reasons retained in [`IngestStats::first_skip_reasons`].
pub const MAX_SKIP_SAMPLES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TweetRecord {
    pub id: String,
    pub created_at: DateTime<Utc>,
    pub text: String,
    pub country_code: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SkipReason {
    MalformedRecord,
    MissingField(&'static str),
    BadTimestamp,
    OutOfWindow,
    NonUs,
}

impl fmt::Display for SkipReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SkipReason::MalformedRecord => f.write_str("malformed record"),
            SkipReason::MissingField(name) => write!(f, "missing field {name}"),
            SkipReason::BadTimestamp => f.write_str("bad timestamp"),
            SkipReason::OutOfWindow => f.write_str("outside window"),
            SkipReason::NonUs => f.write_str("non-US record"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestStats {
    pub lines_read: u64,
    pub records_ok: u64,
    pub records_skipped: u64,
    /// Earliest skips by line number, at most [`MAX_SKIP_SAMPLES`].
    pub first_skip_reasons: Vec<(usize, SkipReason)>,
}

impl IngestStats {
    fn ok(&mut self) {
        self.lines_read += 1;
        self.records_ok += 1;
    }

    fn skip(&mut self, line_no: usize, reason: SkipReason) {
        self.lines_read += 1;
        self.records_skipped += 1;
        if self.first_skip_reasons.len() < MAX_SKIP_SAMPLES {
            self.first_skip_reasons.push((line_no, reason));
        }
    }

    /// Combines stats from disjoint shards. Independent of merge order.
    pub fn merge(&self, other: &IngestStats) -> IngestStats {
        let mut samples: Vec<_> = self
            .first_skip_reasons
            .iter()
            .chain(&other.first_skip_reasons)
            .cloned()
            .collect();
        samples.sort_by_key(|(line, _)| *line);
        samples.truncate(MAX_SKIP_SAMPLES);
        IngestStats {
            lines_read: self.lines_read + other.lines_read,
            records_ok: self.records_ok + other.records_ok,
            records_skipped: self.records_skipped + other.records_skipped,
            first_skip_reasons: samples,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CountOptions {
    /// Count each tag at most once per tweet.
    pub dedupe_per_tweet: bool,
}

fn string_field(obj: &Map<String, Value>, name: &'static str) -> Result<String, SkipReason> {
    match obj.get(name) {
        None | Some(Value::Null) => Err(SkipReason::MissingField(name)),
        Some(Value::String(s)) => Ok(s.clone()),
        Some(_) => Err(SkipReason::MalformedRecord),
    }
}

/// Parses one corpus line. Unknown fields are ignored.
pub fn parse_tweet_line(line: &str) -> Result<TweetRecord, SkipReason> {
    let value: Value = serde_json::from_str(line).map_err(|_| SkipReason::MalformedRecord)?;
    let Value::Object(obj) = value else {
        return Err(SkipReason::MalformedRecord);
    };
    let id = string_field(&obj, "id")?;
    if id.is_empty() {
        return Err(SkipReason::MalformedRecord);
    }
    let created_at = string_field(&obj, "created_at")?;
    let text = string_field(&obj, "text")?;
    let country_code = match obj.get("country_code") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(SkipReason::MalformedRecord),
    };
    let created_at = DateTime::parse_from_rfc3339(&created_at)
        .map_err(|_| SkipReason::BadTimestamp)?
        .with_timezone(&Utc)
        .trunc_subsecs(0);
    Ok(TweetRecord {
        id,
        created_at,
        text,
        country_code,
    })
}

fn is_word(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Extracts canonical hashtags in text order, duplicates preserved.
///
/// A token is `#` followed by a maximal run of `[A-Za-z0-9_]`, where the `#`
/// starts the text or follows a character outside `[A-Za-z0-9_#]`.
pub fn extract_hashtags(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut prev: Option<char> = None;
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if c == '#' && !prev.is_some_and(|p| is_word(p) || p == '#') {
            let start = i + 1;
            let mut end = start;
            while let Some(&(j, d)) = chars.peek() {
                if !is_word(d) {
                    break;
                }
                end = j + d.len_utf8();
                prev = Some(d);
                chars.next();
            }
            if end > start {
                if let Ok(tag) = normalize_tag(&text[start..end]) {
                    out.push(tag);
                }
                continue;
            }
        }
        prev = Some(c);
    }
    out
}

/// Single-writer accumulator behind every counting entry point.
#[derive(Debug)]
pub struct CorpusCounter {
    table: DailyCountTable,
    stats: IngestStats,
    options: CountOptions,
}

impl CorpusCounter {
    pub fn new(lexicon: Arc<HashtagLexicon>, window: DateRange, options: CountOptions) -> Self {
        Self {
            table: DailyCountTable::new(lexicon, window),
            stats: IngestStats::default(),
            options,
        }
    }

    pub fn push_line(&mut self, line_no: usize, line: &str) {
        match parse_tweet_line(line) {
            Ok(rec) => self.push_record(line_no, &rec),
            Err(reason) => self.stats.skip(line_no, reason),
        }
    }

    pub fn push_record(&mut self, line_no: usize, rec: &TweetRecord) {
        if rec.country_code.as_deref().is_some_and(|cc| cc != "US") {
            self.stats.skip(line_no, SkipReason::NonUs);
            return;
        }
        let day = rec.created_at.date_naive();
        if !self.table.range().contains(day) {
            self.stats.skip(line_no, SkipReason::OutOfWindow);
            return;
        }
        let mut tags = extract_hashtags(&rec.text);
        tags.retain(|t| self.table.lexicon().contains(t));
        if self.options.dedupe_per_tweet {
            let mut seen = Vec::with_capacity(tags.len());
            tags.retain(|t| {
                let fresh = !seen.contains(t);
                if fresh {
                    seen.push(t.clone());
                }
                fresh
            });
        }
        for tag in &tags {
            self.table.increment(day, tag, 1);
        }
        self.stats.ok();
    }

    pub fn finish(self) -> (DailyCountTable, IngestStats) {
        (self.table, self.stats)
    }
}

/// Counts already-parsed records; line numbers are the 1-based positions in
/// the sequence.
pub fn count_stream<I>(records: I, lexicon: Arc<HashtagLexicon>, window: DateRange) -> (DailyCountTable, IngestStats)
where
    I: IntoIterator<Item = TweetRecord>,
{
    count_stream_with(records, lexicon, window, CountOptions::default())
}

pub fn count_stream_with<I>(
    records: I,
    lexicon: Arc<HashtagLexicon>,
    window: DateRange,
    options: CountOptions,
) -> (DailyCountTable, IngestStats)
where
    I: IntoIterator<Item = TweetRecord>,
{
    let mut counter = CorpusCounter::new(lexicon, window, options);
    for (i, rec) in records.into_iter().enumerate() {
        counter.push_record(i + 1, &rec);
    }
    counter.finish()
}

/// Streams an NDJSON corpus. Only read failures are fatal.
pub fn count_reader<R: BufRead>(
    reader: R,
    lexicon: Arc<HashtagLexicon>,
    window: DateRange,
    options: CountOptions,
) -> io::Result<(DailyCountTable, IngestStats)> {
    let mut counter = CorpusCounter::new(lexicon, window, options);
    for (i, line) in reader.lines().enumerate() {
        counter.push_line(i + 1, &line?);
    }
    Ok(counter.finish())
}

/// Counts `lines` split into `shards` contiguous ranges on scoped threads,
/// then merges. Line numbers stay global.
pub fn count_lines_sharded<S: AsRef<str> + Sync>(
    lines: &[S],
    shards: usize,
    lexicon: Arc<HashtagLexicon>,
    window: DateRange,
    options: CountOptions,
) -> (DailyCountTable, IngestStats) {
    let shards = shards.max(1);
    let chunk = lines.len().div_ceil(shards).max(1);
    let parts: Vec<(DailyCountTable, IngestStats)> = thread::scope(|scope| {
        let handles: Vec<_> = lines
            .chunks(chunk)
            .enumerate()
            .map(|(k, part)| {
                let lexicon = Arc::clone(&lexicon);
                scope.spawn(move || {
                    let mut counter = CorpusCounter::new(lexicon, window, options);
                    for (i, line) in part.iter().enumerate() {
                        counter.push_line(k * chunk + i + 1, line.as_ref());
                    }
                    counter.finish()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("shard panicked")).collect()
    });
    let empty = (DailyCountTable::new(Arc::clone(&lexicon), window), IngestStats::default());
    parts.into_iter().fold(empty, |(table, stats), (t, s)| {
        let table = table.merge(&t).expect("shards share lexicon and window");
        (table, stats.merge(&s))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::default_lexicon;
    use chrono::NaiveDate;

    fn d(s: &str) -> NaiveDate {
        s.parse().unwrap()
    }

    fn tweet(id: &str, at: &str, text: &str) -> TweetRecord {
        parse_tweet_line(&serde_json::json!({"id": id, "created_at": at, "text": text}).to_string()).unwrap()
    }

    #[test]
    fn parse_examples() {
        let rec = parse_tweet_line(r##"{"id":"1","created_at":"2020-03-15T12:00:00Z","text":"#StayHome"}"##).unwrap();
        assert_eq!(rec.created_at.date_naive(), d("2020-03-15"));
        assert_eq!(rec.text, "#StayHome");
        assert_eq!(
            parse_tweet_line(r#"{"id":"2","text":"hi"}"#),
            Err(SkipReason::MissingField("created_at"))
        );
        assert_eq!(
            parse_tweet_line(r#"{"id":"3","created_at":"not-a-date","text":"x"}"#),
            Err(SkipReason::BadTimestamp)
        );
    }

    #[test]
    fn parse_edge_cases() {
        assert_eq!(parse_tweet_line("{not json"), Err(SkipReason::MalformedRecord));
        assert_eq!(parse_tweet_line("[1,2]"), Err(SkipReason::MalformedRecord));
        assert_eq!(parse_tweet_line(""), Err(SkipReason::MalformedRecord));
        assert_eq!(
            parse_tweet_line(r#"{"id":1,"created_at":"2020-03-15T00:00:00Z","text":"x"}"#),
            Err(SkipReason::MalformedRecord)
        );
        assert_eq!(
            parse_tweet_line(r#"{"id":"","created_at":"2020-03-15T00:00:00Z","text":"x"}"#),
            Err(SkipReason::MalformedRecord)
        );
        assert_eq!(
            parse_tweet_line(r#"{"created_at":"2020-03-15T00:00:00Z","text":"x"}"#),
            Err(SkipReason::MissingField("id"))
        );
        let rec = parse_tweet_line(
            r#"{"id":"9","created_at":"2020-03-15T21:30:00.750-05:00","text":"x","lang":"en","country_code":"US"}"#,
        )
        .unwrap();
        // offset timestamps land on their UTC day
        assert_eq!(rec.created_at.to_rfc3339(), "2020-03-16T02:30:00+00:00");
        assert_eq!(rec.country_code.as_deref(), Some("US"));
    }

    #[test]
    fn extract_examples() {
        assert_eq!(extract_hashtags("Please #StayHome today ❤️"), ["stayhome"]);
        assert_eq!(extract_hashtags("#StayHome #stayHOME!"), ["stayhome", "stayhome"]);
        assert_eq!(extract_hashtags("#StayHomeSaveLives"), ["stayhomesavelives"]);
    }

    #[test]
    fn extract_boundaries() {
        assert!(extract_hashtags("abc#tag").is_empty());
        assert!(extract_hashtags("##tag").is_empty());
        assert!(extract_hashtags("#").is_empty());
        assert!(extract_hashtags("#стейхоум").is_empty());
        assert_eq!(extract_hashtags("#a#b"), ["a"]);
        assert_eq!(extract_hashtags("(#Lockdown2020),#quarantine."), ["lockdown2020", "quarantine"]);
        assert_eq!(extract_hashtags("héllo #stay_home"), ["stay_home"]);
        // the body stops at the first non-ASCII character
        assert_eq!(extract_hashtags("#stayé"), ["stay"]);
        assert_eq!(extract_hashtags("é#stayhome"), ["stayhome"]);
    }

    #[test]
    fn count_examples() {
        let lex = Arc::new(default_lexicon());
        let window = DateRange::collection_window();
        let recs = vec![
            tweet("1", "2020-03-15T01:00:00Z", "#StayHome"),
            tweet("2", "2020-03-15T23:59:59Z", "go #stayhome"),
            tweet("3", "2020-06-01T10:00:00Z", "#StayHome"),
            tweet("4", "2020-03-16T10:00:00Z", "#StayHome #FlattenTheCurve #covid19"),
        ];
        let (table, stats) = count_stream(recs, lex, window);
        assert_eq!(table.get(d("2020-03-15"), "stayhome"), 2);
        assert_eq!(table.get(d("2020-03-16"), "stayhome"), 1);
        assert_eq!(table.get(d("2020-03-16"), "flattenthecurve"), 1);
        assert_eq!(table.total_occurrences(), 4);
        assert_eq!(stats.lines_read, 4);
        assert_eq!(stats.records_ok, 3);
        assert_eq!(stats.records_skipped, 1);
        assert_eq!(stats.first_skip_reasons, vec![(3, SkipReason::OutOfWindow)]);
    }

    #[test]
    fn dedupe_and_geography() {
        let lex = Arc::new(default_lexicon());
        let window = DateRange::collection_window();
        let mut rec = tweet("1", "2020-03-15T01:00:00Z", "#StayHome #stayhome #Lockdown");
        let (occ, _) = count_stream(vec![rec.clone()], Arc::clone(&lex), window);
        assert_eq!(occ.get(d("2020-03-15"), "stayhome"), 2);
        let (dd, _) = count_stream_with(
            vec![rec.clone()],
            Arc::clone(&lex),
            window,
            CountOptions { dedupe_per_tweet: true },
        );
        assert_eq!(dd.get(d("2020-03-15"), "stayhome"), 1);
        assert_eq!(dd.get(d("2020-03-15"), "lockdown"), 1);

        rec.country_code = Some("CA".into());
        let (t, stats) = count_stream(vec![rec], lex, window);
        assert_eq!(t.total_occurrences(), 0);
        assert_eq!(stats.first_skip_reasons, vec![(1, SkipReason::NonUs)]);
    }

    #[test]
    fn skip_samples_are_bounded() {
        let corpus = "garbage\n".repeat(40);
        let (_, stats) = count_reader(
            corpus.as_bytes(),
            Arc::new(default_lexicon()),
            DateRange::collection_window(),
            CountOptions::default(),
        )
        .unwrap();
        assert_eq!(stats.lines_read, 40);
        assert_eq!(stats.records_skipped, 40);
        assert_eq!(stats.first_skip_reasons.len(), MAX_SKIP_SAMPLES);
        assert_eq!(stats.first_skip_reasons[0].0, 1);
    }

    #[test]
    fn sharded_matches_single_pass() {
        let lines: Vec<String> = (0..50)
            .map(|i| {
                if i % 9 == 0 {
                    "oops".to_string()
                } else {
                    serde_json::json!({
                        "id": i.to_string(),
                        "created_at": format!("2020-03-{:02}T10:00:00Z", 1 + i % 20),
                        "text": "#StayHome and #Quarantine #stayhome",
                    })
                    .to_string()
                }
            })
            .collect();
        let lex = Arc::new(default_lexicon());
        let w = DateRange::collection_window();
        let single = count_reader(lines.join("\n").as_bytes(), Arc::clone(&lex), w, CountOptions::default()).unwrap();
        for shards in [1, 2, 3, 7, 64] {
            let sharded = count_lines_sharded(&lines, shards, Arc::clone(&lex), w, CountOptions::default());
            assert_eq!(sharded, single, "shards = {shards}");
        }
    }
}
