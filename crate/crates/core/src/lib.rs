//! Hashtag-frequency proxy for social distancing.
//!
//! Daily counts of a fixed lexicon of supportive hashtags are correlated
//! (Pearson, two-tailed t-test) against the national series of a community
//! mobility report. The [`cli`] module drives the `count`, `correlate`,
//! `report` and `synth` stages.

pub mod cli;
pub mod counts;
pub mod error;
pub mod lexicon;
pub mod mobility;
pub mod report;
pub mod series;
pub mod stats;
pub mod synth;
pub mod tweets;
pub mod window;

pub use counts::{merge_counts, read_counts_csv, write_counts_csv, DailyCountTable};
pub use lexicon::{default_lexicon, load_lexicon, normalize_tag, HashtagLexicon, LexiconSource};
pub use mobility::{category_series, parse_mobility_csv, MobilityCategory, MobilitySeries, RegionSelector};
pub use series::{align, per_tag_series, total_series, AlignedPair, DailySeries};
pub use stats::{correlation_matrix, p_two_tailed, pearson_r, CorrelationResult};
pub use tweets::{count_stream, extract_hashtags, parse_tweet_line, IngestStats, TweetRecord};
pub use window::DateRange;
