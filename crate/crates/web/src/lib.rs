//! Browser bindings for three operations: find or check a splitting, list
//! k-radius primes, and run the limited-magnitude codec on a word with an
//! injected error. Every export returns a JSON string; failures come back as
//! `{"error": "..."}` so the page needs a single code path.
//!
//! The `*_json` functions are plain Rust and are what the tests exercise.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use splitter_core::characters::{is_k_radius_prime, radius_prime_splitting};
use splitter_core::codec::{decode, encode, CodeSpec, Word};
use splitter_core::splitting::{find_splitter, MultiplierSet, SearchConfig, SplittingCertificate};
use splitter_core::zmod::is_prime;
use splitter_core::SearchOutcome;

/// Keeps a search from freezing the tab.
const BROWSER_BUDGET: u64 = 5_000_000;
const MAX_RADIUS_RANGE: u64 = 2_000_000;

#[derive(Serialize)]
struct Failure {
    error: String,
}

fn respond<T: Serialize>(result: Result<T, String>) -> String {
    let text = match result {
        Ok(value) => serde_json::to_string(&value),
        Err(error) => serde_json::to_string(&Failure { error }),
    };
    text.expect("plain data")
}

fn multipliers(text: &str) -> Result<MultiplierSet, String> {
    text.trim().parse().map_err(|e: splitter_core::Error| e.to_string())
}

fn residues(text: &str) -> Result<Vec<u64>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u64>().map_err(|e| format!("{s:?}: {e}")))
        .collect()
}

#[derive(Serialize)]
struct SplitResult {
    outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<SplittingCertificate>,
}

/// Checks `splitters` if given, otherwise searches for a splitter set.
pub fn split_json(modulus: u64, m: &str, splitters: &str) -> String {
    respond((|| {
        let m = multipliers(m)?;
        if !splitters.trim().is_empty() {
            let s = residues(splitters)?;
            return Ok(match SplittingCertificate::new(m, s, modulus) {
                Ok(c) => SplitResult { outcome: "verified", certificate: Some(c) },
                Err(_) => SplitResult { outcome: "rejected", certificate: None },
            });
        }
        if modulus < 2 {
            return Err("modulus must be at least 2".into());
        }
        Ok(match find_splitter(&m, modulus, &SearchConfig::with_budget(BROWSER_BUDGET)) {
            SearchOutcome::Found(c) => SplitResult { outcome: "found", certificate: Some(c) },
            SearchOutcome::Exhausted => SplitResult { outcome: "none", certificate: None },
            SearchOutcome::Inconclusive { .. } => SplitResult { outcome: "inconclusive", certificate: None },
        })
    })())
}

#[derive(Serialize)]
struct RadiusPrime {
    p: u64,
    interval: Vec<u64>,
    symmetric: Vec<u64>,
}

/// k-radius primes in `[lo, hi]` with the splitter sets they give.
pub fn radius_json(k: u64, lo: u64, hi: u64) -> String {
    respond((|| {
        if k == 0 {
            return Err("k must be positive".to_string());
        }
        if hi.saturating_sub(lo) > MAX_RADIUS_RANGE {
            return Err(format!("range wider than {MAX_RADIUS_RANGE}"));
        }
        let mut out = Vec::new();
        for p in (lo.max(2)..=hi).filter(|&p| is_prime(p)) {
            let report = is_k_radius_prime(p, k).map_err(|e| e.to_string())?;
            if report.is_radius_prime() {
                let (a, b) = radius_prime_splitting(p, k).map_err(|e| e.to_string())?;
                out.push(RadiusPrime {
                    p,
                    interval: a.splitters().to_vec(),
                    symmetric: b.splitters().to_vec(),
                });
            }
        }
        Ok(out)
    })())
}

#[derive(Serialize)]
struct CodecRun {
    codeword: Vec<u64>,
    received: Vec<u64>,
    decoded: Vec<u64>,
    position: Option<usize>,
    magnitude: Option<i64>,
    recovered: bool,
}

/// Encodes `message`, adds `magnitude` at `position`, and decodes.
pub fn codec_json(modulus: u64, m: &str, splitters: &str, message: &str, position: usize, magnitude: i64) -> String {
    respond((|| {
        let spec = CodeSpec::new(modulus, multipliers(m)?, residues(splitters)?).map_err(|e| e.to_string())?;
        let codeword = encode(&spec, &residues(message)?).map_err(|e| e.to_string())?;
        let mut received = codeword.symbols.clone();
        let slot = received
            .get_mut(position)
            .ok_or_else(|| format!("position {position} is past the word length {}", codeword.len()))?;
        *slot = (*slot + magnitude.rem_euclid(modulus as i64) as u64) % modulus;
        let d = decode(&spec, &Word::new(received.clone())).map_err(|e| e.to_string())?;
        Ok(CodecRun {
            recovered: d.word == codeword,
            codeword: codeword.symbols,
            received,
            decoded: d.word.symbols,
            position: d.correction.map(|c| c.position),
            magnitude: d.correction.map(|c| c.magnitude),
        })
    })())
}

#[wasm_bindgen]
pub fn split(modulus: u64, multipliers: &str, splitters: &str) -> String {
    split_json(modulus, multipliers, splitters)
}

#[wasm_bindgen]
pub fn radius(k: u64, lo: u64, hi: u64) -> String {
    radius_json(k, lo, hi)
}

#[wasm_bindgen]
pub fn codec(modulus: u64, multipliers: &str, splitters: &str, message: &str, position: usize, magnitude: i64) -> String {
    codec_json(modulus, multipliers, splitters, message, position, magnitude)
}
