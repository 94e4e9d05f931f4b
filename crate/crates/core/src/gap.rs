//! The k vs 40k² gap test with each back-end wired into [`greedy_match`].

use serde::{Deserialize, Serialize};

use crate::counters::Counters;
use crate::error::{invalid, Error, Result};
use crate::greedy::{greedy_match, GapVerdict, MaxAlign, Step};
use crate::hash::HashConfig;
use crate::no_prep::NoPrepAlign;
use crate::one_sided::{OneSidedAlign, OneSidedIndex};
use crate::strings::ByteString;
use crate::two_sided::{TwoSidedAlign, TwoSidedIndex, DEFAULT_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapMode {
    Noprep,
    OneSided,
    TwoSided,
}

impl std::str::FromStr for GapMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "noprep" => Ok(GapMode::Noprep),
            "one-sided" | "one_sided" => Ok(GapMode::OneSided),
            "two-sided" | "two_sided" => Ok(GapMode::TwoSided),
            _ => Err(invalid(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapRun {
    pub verdict: GapVerdict,
    pub queries: usize,
    /// Work done before `B` is seen (index builds).
    pub preprocessing: Counters,
    /// Work done once `B` is available: hashing `B` plus all oracle calls.
    pub query: Counters,
    pub trace: Option<Vec<Step>>,
}

fn drive(a: &ByteString, b: &ByteString, k: usize, oracle: &mut dyn MaxAlign, prep: Counters, trace: bool) -> Result<GapRun> {
    let out = greedy_match(a, b, k, oracle, trace)?;
    Ok(GapRun { verdict: out.verdict, queries: out.queries, preprocessing: prep, query: oracle.counters(), trace: out.trace })
}

/// No preprocessing: sample and hash both strings, then run the driver.
pub fn gap_noprep(a: &ByteString, b: &ByteString, k: usize, seed: u64, trace: bool) -> Result<GapRun> {
    let mut o = NoPrepAlign::new(a, b, k, seed)?;
    drive(a, b, k, &mut o, Counters::default(), trace)
}

/// Queries a prebuilt index of `A`.
pub fn gap_one_sided(index: &OneSidedIndex, a: &ByteString, b: &ByteString, trace: bool) -> Result<GapRun> {
    if a.len() != index.n() {
        return Err(invalid("index was built for a different |A|"));
    }
    let mut o = OneSidedAlign::new(index, b)?;
    drive(a, b, index.k(), &mut o, index.build_counters(), trace)
}

pub fn gap_two_sided(index: &TwoSidedIndex, a: &ByteString, b: &ByteString, trace: bool) -> Result<GapRun> {
    if a.len() != index.n() {
        return Err(invalid("index was built for a different |A|"));
    }
    let mut o = TwoSidedAlign::new(index, b)?;
    drive(a, b, index.k(), &mut o, index.build_counters(), trace)
}

/// Builds whatever the mode needs from `seed` and runs it.
pub fn gap_match(
    a: &ByteString,
    b: &ByteString,
    k: usize,
    mode: GapMode,
    seed: u64,
    two_sided_limit: Option<usize>,
) -> Result<GapRun> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { a: a.len(), b: b.len() });
    }
    if k < 1 {
        return Err(invalid("k must be at least 1"));
    }
    match mode {
        GapMode::Noprep => gap_noprep(a, b, k, seed, false),
        GapMode::OneSided => gap_one_sided(&OneSidedIndex::build(a, k, seed)?, a, b, false),
        GapMode::TwoSided => {
            let cfg = HashConfig::from_seed(seed, a.len());
            let idx = TwoSidedIndex::build_with_limit(a, k, &cfg, two_sided_limit.unwrap_or(DEFAULT_LIMIT))?;
            gap_two_sided(&idx, a, b, false)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{gen_disjoint, gen_planted};

    #[test]
    fn identical_pair_small_in_every_mode() {
        let inst = gen_planted(300, 0, 4, 1).unwrap();
        for mode in [GapMode::Noprep, GapMode::OneSided, GapMode::TwoSided] {
            let run = gap_match(&inst.a, &inst.b, 4, mode, 3, None).unwrap();
            assert_eq!(run.verdict, GapVerdict::Small, "{mode:?}");
            if mode != GapMode::OneSided {
                assert_eq!(run.queries, 1);
            }
        }
    }

    #[test]
    fn disjoint_pair_large_in_every_mode() {
        let inst = gen_disjoint(300, 2);
        for mode in [GapMode::Noprep, GapMode::OneSided, GapMode::TwoSided] {
            let run = gap_match(&inst.a, &inst.b, 2, mode, 3, None).unwrap();
            assert_eq!(run.verdict, GapVerdict::Large, "{mode:?}");
        }
    }

    #[test]
    fn mode_names_parse() {
        assert_eq!("one-sided".parse::<GapMode>().unwrap(), GapMode::OneSided);
        assert!("sideways".parse::<GapMode>().is_err());
    }
}
