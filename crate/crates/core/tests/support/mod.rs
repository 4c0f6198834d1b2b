//! Test-only oracles, independent of the code paths they check.
#![allow(dead_code)]

pub mod p_oracle;

use std::collections::BTreeMap;
use std::path::Path;

use chrono::{DateTime, NaiveDate, Utc};
use num::bigint::BigInt;
use num::traits::{Float, ToPrimitive, Zero};

/// Pearson r by exact integer arithmetic: every f64 is scaled to an integer
/// at a common power of two, so the moment sums carry no rounding at all.
/// Only the final ratio is rounded.
pub fn exact_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let min_exp = x
        .iter()
        .chain(y)
        .filter(|v| **v != 0.0)
        .map(|v| v.integer_decode().1)
        .min()
        .unwrap_or(0);
    let to_int = |v: f64| -> BigInt {
        if v == 0.0 {
            return BigInt::zero();
        }
        let (mant, exp, sign) = v.integer_decode();
        let b = BigInt::from(mant) << ((exp - min_exp) as usize);
        if sign < 0 {
            -b
        } else {
            b
        }
    };
    let xs: Vec<BigInt> = x.iter().map(|v| to_int(*v)).collect();
    let ys: Vec<BigInt> = y.iter().map(|v| to_int(*v)).collect();
    let nb = BigInt::from(n);
    let sum = |v: &[BigInt]| v.iter().fold(BigInt::zero(), |a, b| a + b);
    let dot = |a: &[BigInt], b: &[BigInt]| a.iter().zip(b).fold(BigInt::zero(), |acc, (p, q)| acc + p * q);
    let (sx, sy) = (sum(&xs), sum(&ys));
    let num = &nb * dot(&xs, &ys) - &sx * &sy;
    let dx = &nb * dot(&xs, &xs) - &sx * &sx;
    let dy = &nb * dot(&ys, &ys) - &sy * &sy;
    let q = dx * dy;
    let (m_num, s_num) = top_bits(&num, 0);
    let (m_q, s_q) = top_bits(&q, 1);
    m_num / m_q.sqrt() * 2f64.powi((s_num - s_q / 2) as i32)
}

/// `b ≈ m · 2^s` with `m` holding about 62 significant bits; `s` is rounded
/// down to a multiple of `align + 1`.
fn top_bits(b: &BigInt, align: u64) -> (f64, i64) {
    let bits = b.bits();
    let mut shift = bits.saturating_sub(62);
    if align == 1 && shift % 2 == 1 {
        shift -= 1;
    }
    ((b >> shift as usize).to_f64().unwrap(), shift as i64)
}

/// Day → lexicon-hashtag occurrences, by a plain scan of the raw corpus.
/// Shares no parsing or tokenizing code with the library.
pub fn naive_recount(corpus: &str, lexicon: &[&str], start: NaiveDate, end: NaiveDate) -> BTreeMap<NaiveDate, u64> {
    let mut out = BTreeMap::new();
    for line in corpus.lines() {
        let Ok(serde_json::Value::Object(obj)) = serde_json::from_str::<serde_json::Value>(line) else {
            continue;
        };
        let (Some(id), Some(at), Some(text)) = (
            obj.get("id").and_then(|v| v.as_str()),
            obj.get("created_at").and_then(|v| v.as_str()),
            obj.get("text").and_then(|v| v.as_str()),
        ) else {
            continue;
        };
        if id.is_empty() {
            continue;
        }
        if let Some(cc) = obj.get("country_code").and_then(|v| v.as_str()) {
            if cc != "US" {
                continue;
            }
        }
        let Ok(ts) = DateTime::parse_from_rfc3339(at) else { continue };
        let day = ts.with_timezone(&Utc).date_naive();
        if day < start || day > end {
            continue;
        }
        let bytes = text.as_bytes();
        let word = |b: u8| b.is_ascii_alphanumeric() || b == b'_';
        let mut hits = 0u64;
        for (pos, _) in text.match_indices('#') {
            if pos > 0 && (word(bytes[pos - 1]) || bytes[pos - 1] == b'#') {
                continue;
            }
            let body: String = bytes[pos + 1..]
                .iter()
                .take_while(|b| word(**b))
                .map(|b| b.to_ascii_lowercase() as char)
                .collect();
            if lexicon.contains(&body.as_str()) {
                hits += 1;
            }
        }
        *out.entry(day).or_insert(0) += hits;
    }
    out.retain(|_, v| *v > 0);
    out
}

/// Sorted (relative path, bytes) of every file under `dir`.
pub fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    out.sort();
    out
}

/// Runs the CLI in-process, panicking on a non-zero exit.
pub fn cli(args: &[&str]) {
    let mut argv = vec!["distancing"];
    argv.extend_from_slice(args);
    let code = distancing_core::cli::run(argv.clone());
    assert_eq!(code, 0, "command failed: {argv:?}");
}
