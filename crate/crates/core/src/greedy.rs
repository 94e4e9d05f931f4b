//! The greedy matching driver and the `MaxAlign` oracle contract.

use serde::{Deserialize, Serialize};

use crate::brute::{max_k_alignment_bruteforce, window_ed_within};
use crate::counters::Counters;
use crate::error::{invalid, Error, Result};
use crate::strings::ByteString;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GapVerdict {
    Small,
    Large,
}

impl std::fmt::Display for GapVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GapVerdict::Small => "SMALL",
            GapVerdict::Large => "LARGE",
        })
    }
}

/// Guarantee an oracle gives relative to the maximal k-alignment length `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grade {
    /// Returns exactly `d`.
    Correct,
    /// Never below `d`; the returned prefix has an approximate k-alignment w.h.p.
    ApproximatelyCorrect,
    /// Strictly above `d / 2` unless `d = 0`; same approximate clause.
    HalfApproximatelyCorrect,
}

/// Longest k-aligned prefix of `B[i_b..]`, possibly approximate.
pub trait MaxAlign {
    fn grade(&self) -> Grade;

    /// Length `d` for the 1-based position `i_b`.
    fn max_align(&mut self, i_b: usize) -> usize;

    fn counters(&self) -> Counters;
}

/// Exact oracle by exhaustive scan; the correct-grade reference.
pub struct BruteForceAlign<'a> {
    a: &'a ByteString,
    b: &'a ByteString,
    k: usize,
    counters: Counters,
}

impl<'a> BruteForceAlign<'a> {
    pub fn new(a: &'a ByteString, b: &'a ByteString, k: usize) -> Self {
        BruteForceAlign { a, b, k, counters: Counters::default() }
    }
}

impl MaxAlign for BruteForceAlign<'_> {
    fn grade(&self) -> Grade {
        Grade::Correct
    }

    fn max_align(&mut self, i_b: usize) -> usize {
        self.counters.oracle_queries += 1;
        max_k_alignment_bruteforce(self.a, self.b, i_b as i64, self.k as i64)
    }

    fn counters(&self) -> Counters {
        self.counters
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub i_b: usize,
    pub d: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchOutcome {
    pub verdict: GapVerdict,
    pub queries: usize,
    /// `(i_b, d)` per iteration, when tracing was requested.
    pub trace: Option<Vec<Step>>,
}

/// Advances a pointer through `B` by `max(MaxAlign(i_b), 1)` at most `2k+1`
/// times; SMALL iff it passes the end of `B`.
pub fn greedy_match(
    a: &ByteString,
    b: &ByteString,
    k: usize,
    oracle: &mut dyn MaxAlign,
    trace: bool,
) -> Result<MatchOutcome> {
    if k < 1 {
        return Err(invalid("k must be at least 1"));
    }
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { a: a.len(), b: b.len() });
    }
    let n = b.len();
    let mut steps = trace.then(Vec::new);
    let mut i_b = 1usize;
    for e in 1..=2 * k + 1 {
        let d = oracle.max_align(i_b);
        if let Some(s) = steps.as_mut() {
            s.push(Step { i_b, d });
        }
        i_b += d.max(1);
        if i_b > n {
            return Ok(MatchOutcome { verdict: GapVerdict::Small, queries: e, trace: steps });
        }
    }
    Ok(MatchOutcome { verdict: GapVerdict::Large, queries: 2 * k + 1, trace: steps })
}

/// Upper bounds on `ED(A, B)` rebuilt from a SMALL trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SmallCertificate {
    /// `2k+1 + 3k(2k+1) + 6k(2k+2)`, the budget for `2k+1` approximately aligned pieces.
    pub budget: usize,
    /// Cost of the explicit alignment assembled from the trace.
    pub constructive: usize,
}

/// `2k+1 + 3k(2k+1) + 6k(2k+2)`.
pub fn small_budget(k: usize) -> usize {
    2 * k + 1 + 3 * k * (2 * k + 1) + 6 * k * (2 * k + 2)
}

/// Replays a SMALL trace into an explicit alignment of `B` against `A`.
///
/// Every step with `d >= 1` must have an approximate k-alignment (shift and
/// edit cost both at most `3k`); the pieces are then stitched left to right,
/// paying for skipped or overlapping `A` characters. Returns `None` if some
/// step has no approximate alignment.
pub fn certify_small(a: &ByteString, b: &ByteString, k: usize, trace: &[Step]) -> Option<SmallCertificate> {
    let n = a.len() as i64;
    let bound = 3 * k;
    let mut cost = 0usize;
    let mut next_a: i64 = 1;
    for step in trace {
        let i_b = step.i_b as i64;
        let d = step.d.min(b.len() + 1 - step.i_b) as i64;
        if d == 0 {
            cost += 1;
            continue;
        }
        let (c, ed) = (0..=bound as i64)
            .flat_map(|c| if c == 0 { vec![0] } else { vec![c, -c] })
            .find_map(|c| window_ed_within(a, b, i_b + c, i_b, d as usize, bound).map(|ed| (c, ed)))?;
        let (start, end) = (i_b + c, i_b + c + d - 1);
        // sentinel reads on either side of A are paid as extra edits
        cost += ed + (1 - start).max(0) as usize + (end - n).max(0) as usize;
        let (start, end) = (start.max(1), end.min(n));
        if start >= next_a {
            cost += (start - next_a) as usize;
        } else {
            cost += (next_a - start).min(end - start + 1) as usize;
        }
        next_a = next_a.max(end + 1);
    }
    cost += (n + 1 - next_a).max(0) as usize;
    Some(SmallCertificate { budget: small_budget(k), constructive: cost })
}
