use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::arith::{checked_pow, is_prime};
use crate::error::{Error, Result};
use crate::ff_core::MAX_FIELD_ORDER;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Filter {
    #[default]
    All,
    ThreeValued,
    Nondegenerate,
}

impl FromStr for Filter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Self::All),
            "three_valued" => Ok(Self::ThreeValued),
            "nondegenerate" => Ok(Self::Nondegenerate),
            other => Err(Error::Config(format!(
                "unknown filter '{other}' (expected all, three_valued, nondegenerate)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanConfig {
    pub p_list: Vec<u32>,
    /// Degrees per prime.
    pub n_ranges: BTreeMap<u32, Vec<u32>>,
    /// Degrees for primes without their own entry; if unset, every `n` with `p^n ≤ q_max`.
    pub n_default: Option<Vec<u32>>,
    pub q_max: u64,
    pub filter: Filter,
    /// `naive`, `fast` or `auto`.
    pub method: String,
    pub workers: usize,
    pub output_path: Option<PathBuf>,
    /// Random `u` values per record recomputed by direct summation.
    pub audit: usize,
    pub seed: u64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            p_list: vec![2, 3],
            n_ranges: BTreeMap::new(),
            n_default: None,
            q_max: 256,
            filter: Filter::All,
            method: "auto".into(),
            workers: 1,
            output_path: None,
            audit: 0,
            seed: 0,
        }
    }
}

/// Parses `2,3,5` and ranges like `1-8` (mixable: `1-3,5`).
pub fn parse_list(s: &str) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let bad = || Error::Config(format!("bad list entry '{part}'"));
        match part.split_once('-') {
            Some((lo, hi)) => {
                let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
                let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
                if lo > hi {
                    return Err(bad());
                }
                out.extend(lo..=hi);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("bad value for {key}: '{value}'")))
}

impl ScanConfig {
    /// Applies one `key = value` setting. Keys: `p`, `n` (all primes),
    /// `n.<p>` (one prime), `qmax`, `filter`, `method`, `workers`, `out`,
    /// `audit`, `seed`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "p" => self.p_list = parse_list(value)?,
            "n" => self.n_default = Some(parse_list(value)?),
            "qmax" => self.q_max = parse_num(key, value)?,
            "filter" => self.filter = value.parse()?,
            "method" => self.method = value.to_string(),
            "workers" => self.workers = parse_num(key, value)?,
            "out" => self.output_path = Some(PathBuf::from(value)),
            "audit" => self.audit = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            other => match other.strip_prefix("n.") {
                Some(p) => {
                    let p: u32 = parse_num(key, p)?;
                    self.n_ranges.insert(p, parse_list(value)?);
                }
                None => return Err(Error::Config(format!("unknown config key '{other}'"))),
            },
        }
        Ok(())
    }

    /// Reads a plain `key = value` file; `#` starts a comment.
    pub fn from_kv(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_kv(text)?;
        Ok(cfg)
    }

    pub fn apply_kv(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    /// Degrees for `p`: the `n.<p>` entry, else the global `n`, else every `n` up to `q_max`.
    fn degrees(&self, p: u32) -> Vec<u32> {
        if let Some(ns) = self.n_ranges.get(&p).or(self.n_default.as_ref()) {
            return ns.clone();
        }
        (1..64)
            .take_while(|&n| checked_pow(p as u64, n).is_some_and(|q| q <= self.q_max))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.p_list.is_empty() {
            return Err(Error::Config("no primes given".into()));
        }
        if let Some(&p) = self.p_list.iter().find(|&&p| !is_prime(p as u64)) {
            return Err(Error::NotPrime(p as u64));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        if !matches!(self.method.as_str(), "auto" | "naive" | "fast") {
            return Err(Error::Config(format!("unknown method '{}'", self.method)));
        }
        if self.q_max > MAX_FIELD_ORDER {
            return Err(Error::Config(format!("qmax above {MAX_FIELD_ORDER}")));
        }
        Ok(())
    }

    /// `(p, n)` pairs in scan order with `p^n ≤ q_max`.
    pub fn fields(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = self
            .p_list
            .iter()
            .flat_map(|&p| self.degrees(p).into_iter().map(move |n| (p, n)))
            .filter(|&(p, n)| n >= 1 && checked_pow(p as u64, n).is_some_and(|q| q <= self.q_max))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}
