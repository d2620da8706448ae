//! Optional fingerprint cache: canonical term text mapped to its image
//! degree, coefficient sum, and value at a shared faithful base.
//!
//! The cache is a pure optimization. Every consumer recomputes on miss, and
//! entries are dropped wholesale whenever the shared base must grow, so
//! results never depend on the cache being present or current.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::Error;
use crate::eval::{coeff_sum_fast, dege, value_at_base, Fingerprint};
use crate::eval::orde;
use crate::term::Term;

const HEADER_TAG: &str = "MIL1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheEntry {
    pub dege: u64,
    pub coeff_sum: BigUint,
    pub value: BigUint,
}

#[derive(Clone, Debug, Default)]
pub struct FingerprintCache {
    /// Shared faithful base; zero until the first entry fixes it.
    base: BigUint,
    entries: BTreeMap<String, CacheEntry>,
    hits: u64,
    misses: u64,
    dirty: bool,
}

impl FingerprintCache {
    pub fn new() -> FingerprintCache {
        FingerprintCache::default()
    }

    /// Load from `path`, or start empty when the file does not exist.
    pub fn open(path: &Path) -> Result<FingerprintCache, Error> {
        if !path.exists() {
            return Ok(FingerprintCache::new());
        }
        let text = fs::read_to_string(path)?;
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Invalid("empty cache file".into()))?;
        let base = parse_header(header)?;
        let mut entries = BTreeMap::new();
        for (lineno, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let mut cols = line.split('\t');
            let bad = || Error::Invalid(format!("malformed cache line {}", lineno + 2));
            let term_text = cols.next().ok_or_else(bad)?;
            let d: u64 = cols.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let cs = BigUint::parse_bytes(cols.next().ok_or_else(bad)?.as_bytes(), 10)
                .ok_or_else(bad)?;
            let value = BigUint::parse_bytes(cols.next().ok_or_else(bad)?.as_bytes(), 16)
                .ok_or_else(bad)?;
            if cols.next().is_some() {
                return Err(bad());
            }
            entries.insert(term_text.to_string(), CacheEntry { dege: d, coeff_sum: cs, value });
        }
        Ok(FingerprintCache {
            base,
            entries,
            hits: 0,
            misses: 0,
            dirty: false,
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), Error> {
        let mut out = Vec::new();
        writeln!(out, "{} base={}", HEADER_TAG, self.base)?;
        for (text, e) in &self.entries {
            writeln!(out, "{}\t{}\t{}\t{:x}", text, e.dege, e.coeff_sum, e.value)?;
        }
        fs::write(path, out)?;
        Ok(())
    }

    pub fn save_if_dirty(&self, path: &Path) -> Result<(), Error> {
        if self.dirty {
            self.save(path)?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn base(&self) -> &BigUint {
        &self.base
    }

    pub fn hits(&self) -> u64 {
        self.hits
    }

    pub fn misses(&self) -> u64 {
        self.misses
    }

    /// Fingerprint `t` at the cache's shared base, reusing a stored entry
    /// when possible. Growing the base to stay faithful clears the cache.
    pub fn fingerprint_for(&mut self, t: &Term) -> Fingerprint {
        let key = t.render();
        if let Some(e) = self.entries.get(&key) {
            if e.coeff_sum < self.base {
                self.hits += 1;
                return Fingerprint {
                    base: self.base.clone(),
                    value: e.value.clone(),
                    dege: e.dege,
                    orde: orde(t),
                    coeff_sum: e.coeff_sum.clone(),
                };
            }
        }
        self.misses += 1;
        let coeff_sum = coeff_sum_fast(t);
        if self.base <= coeff_sum {
            self.base = &coeff_sum + BigUint::one();
            self.entries.clear();
        }
        let value = value_at_base(t, &self.base);
        let d = dege(t);
        self.entries.insert(
            key,
            CacheEntry {
                dege: d,
                coeff_sum: coeff_sum.clone(),
                value: value.clone(),
            },
        );
        self.dirty = true;
        Fingerprint {
            base: self.base.clone(),
            value,
            dege: d,
            orde: orde(t),
            coeff_sum,
        }
    }
}

fn parse_header(line: &str) -> Result<BigUint, Error> {
    let rest = line
        .strip_prefix(HEADER_TAG)
        .and_then(|r| r.strip_prefix(" base="))
        .ok_or_else(|| Error::Invalid(format!("bad cache header {:?}", line)))?;
    BigUint::parse_bytes(rest.as_bytes(), 10)
        .ok_or_else(|| Error::Invalid(format!("bad cache base {:?}", rest)))
}
