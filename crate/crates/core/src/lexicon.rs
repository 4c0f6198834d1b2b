//! The tracked hashtag lexicon.
//!
//! Tags are stored in canonical form: no leading `#`, NFC-normalized, ASCII
//! lowercase, and restricted to `[a-z0-9_]`. Matching is case-insensitive.

use std::fmt;
use std::io::BufRead;
use std::path::PathBuf;

use indexmap::IndexSet;
use unicode_normalization::UnicodeNormalization;

use crate::error::LexiconError;

/// The 18 supportive/encouraging social-distancing hashtags, canonical form.
pub const DEFAULT_TAGS: [&str; 18] = [
    "staysafestayhome",
    "socialdistancing",
    "socialdistancingworks",
    "flattenthecurve",
    "stayhome",
    "stayathome",
    "stayhomesweethome",
    "stayhomesavelives",
    "healthyathome",
    "lockdown",
    "letsstayhome",
    "togetherathome",
    "lockdown2020",
    "quarantine",
    "quarantined",
    "quarantine2020",
    "quaranthriving",
    "quarantining",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LexiconSource {
    Builtin,
    File(PathBuf),
    /// Built in memory, e.g. recovered from a counts file.
    Inline,
}

/// Ordered set of canonical tags. Immutable once built.
#[derive(Debug, Clone)]
pub struct HashtagLexicon {
    tags: IndexSet<String>,
    source: LexiconSource,
}

/// Lexicons compare by their tag sequence only.
impl PartialEq for HashtagLexicon {
    fn eq(&self, other: &Self) -> bool {
        self.tags.len() == other.tags.len() && self.tags.iter().eq(other.tags.iter())
    }
}

impl Eq for HashtagLexicon {}

fn is_tag_char(c: char) -> bool {
    matches!(c, 'a'..='z' | '0'..='9' | '_')
}

/// Canonicalizes a hashtag: strips one leading `#`, applies NFC, lowercases
/// ASCII letters, then enforces the `[a-z0-9_]+` charset.
pub fn normalize_tag(raw: &str) -> Result<String, LexiconError> {
    let body = raw.strip_prefix('#').unwrap_or(raw);
    let mut tag: String = body.nfc().collect();
    tag.make_ascii_lowercase();
    if tag.is_empty() || !tag.chars().all(is_tag_char) {
        return Err(LexiconError::InvalidTag {
            raw: raw.to_string(),
            line: None,
        });
    }
    Ok(tag)
}

pub fn default_lexicon() -> HashtagLexicon {
    HashtagLexicon {
        tags: DEFAULT_TAGS.iter().map(|t| t.to_string()).collect(),
        source: LexiconSource::Builtin,
    }
}

/// Reads a lexicon file: one tag per line, optional `#`, blank lines and
/// lines starting with `;` ignored. LF and CRLF both accepted.
pub fn load_lexicon<R: BufRead>(reader: R, source: LexiconSource) -> Result<HashtagLexicon, LexiconError> {
    let mut tags = IndexSet::new();
    let mut first_seen: Vec<usize> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with(';') {
            continue;
        }
        let tag = normalize_tag(trimmed).map_err(|_| LexiconError::InvalidTag {
            raw: trimmed.to_string(),
            line: Some(line_no),
        })?;
        if let Some(idx) = tags.get_index_of(&tag) {
            return Err(LexiconError::DuplicateTag {
                tag,
                first_line: first_seen[idx],
                second_line: line_no,
            });
        }
        tags.insert(tag);
        first_seen.push(line_no);
    }
    if tags.is_empty() {
        return Err(LexiconError::EmptyLexicon);
    }
    Ok(HashtagLexicon { tags, source })
}

impl HashtagLexicon {
    /// Builds a lexicon from raw tags, normalizing each.
    pub fn from_tags<I, S>(raw: I) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut tags = IndexSet::new();
        for (i, r) in raw.into_iter().enumerate() {
            let tag = normalize_tag(r.as_ref())?;
            if let Some(first) = tags.get_index_of(&tag) {
                return Err(LexiconError::DuplicateTag {
                    tag,
                    first_line: first + 1,
                    second_line: i + 1,
                });
            }
            tags.insert(tag);
        }
        if tags.is_empty() {
            return Err(LexiconError::EmptyLexicon);
        }
        let source = if tags.iter().eq(DEFAULT_TAGS.iter().copied()) {
            LexiconSource::Builtin
        } else {
            LexiconSource::Inline
        };
        Ok(Self { tags, source })
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn contains(&self, tag: &str) -> bool {
        self.tags.contains(tag)
    }

    /// Position of `tag` in declaration order.
    pub fn index_of(&self, tag: &str) -> Option<usize> {
        self.tags.get_index_of(tag)
    }

    pub fn tags(&self) -> impl ExactSizeIterator<Item = &str> {
        self.tags.iter().map(String::as_str)
    }

    pub fn source(&self) -> &LexiconSource {
        &self.source
    }
}

/// Serializes in the lexicon file format with `#` prefixes.
impl fmt::Display for HashtagLexicon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for tag in &self.tags {
            writeln!(f, "#{tag}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn load(s: &str) -> Result<HashtagLexicon, LexiconError> {
        load_lexicon(s.as_bytes(), LexiconSource::Inline)
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_tag("#StayHome").unwrap(), "stayhome");
        assert_eq!(normalize_tag("Quaranthriving").unwrap(), "quaranthriving");
        assert!(matches!(normalize_tag("#стейхоум"), Err(LexiconError::InvalidTag { .. })));
        assert!(normalize_tag("#").is_err());
        assert!(normalize_tag("").is_err());
        assert!(normalize_tag("stay home").is_err());
        // only one '#' is stripped
        assert!(normalize_tag("##stayhome").is_err());
    }

    #[test]
    fn default_lexicon_contents() {
        let lex = default_lexicon();
        assert_eq!(lex.len(), 18);
        assert!(lex.contains("stayhome"));
        assert!(!lex.contains("covid19"));
        assert_eq!(lex.source(), &LexiconSource::Builtin);
        assert_eq!(lex, default_lexicon());
    }

    #[test]
    fn load_examples() {
        let lex = load("#StayHome\n#Lockdown\n").unwrap();
        assert_eq!(lex.tags().collect::<Vec<_>>(), ["stayhome", "lockdown"]);

        match load("#StayHome\nstayhome\n") {
            Err(LexiconError::DuplicateTag { tag, first_line, second_line }) => {
                assert_eq!((tag.as_str(), first_line, second_line), ("stayhome", 1, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(load("\n; comment\n"), Err(LexiconError::EmptyLexicon)));
        assert!(matches!(
            load("stayhome\n\n#bad tag\n"),
            Err(LexiconError::InvalidTag { line: Some(3), .. })
        ));
    }

    #[test]
    fn crlf_accepted() {
        let lex = load("; header\r\n#StayHome\r\n#Lockdown2020\r\n").unwrap();
        assert_eq!(lex.tags().collect::<Vec<_>>(), ["stayhome", "lockdown2020"]);
    }

    #[test]
    fn default_round_trips_through_file_format() {
        let text = default_lexicon().to_string();
        assert_eq!(load(&text).unwrap(), default_lexicon());
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(raw in "#?[A-Za-z0-9_]{1,24}") {
            let once = normalize_tag(&raw).unwrap();
            prop_assert_eq!(normalize_tag(&once).unwrap(), once);
        }

        #[test]
        fn normalize_never_panics(raw in "\\PC{0,12}") {
            if let Ok(tag) = normalize_tag(&raw) {
                prop_assert!(tag.chars().all(is_tag_char));
                prop_assert_eq!(normalize_tag(&tag).unwrap(), tag);
            }
        }
    }
}
