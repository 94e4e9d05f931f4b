//! Two-sided preprocessing: every shifted substring hash of `A`, and an exact
//! binary-search `MaxAlign`.
//!
//! The cell for `(i, j)` is the set of hashes of `A[i+a, j+a]` for
//! `a in [-k, k]`. All cells of one length `L = j - i + 1` are windows of the
//! same row `level[L][p] = hash(A[p, p+L-1])`, so the index stores those rows
//! (`n(n+1)/2` values, independent of `k`) and answers a cell lookup by
//! scanning the `2k+1` window entries.

use std::path::Path;

use crate::codec::{Reader, Writer};
use crate::counters::Counters;
use crate::error::{invalid, Error, Result};
use crate::greedy::{Grade, MaxAlign};
use crate::hash::{HashConfig, RollingHashState, SampleSet, MODULUS};
use crate::strings::ByteString;

const MAGIC: &[u8; 6] = b"GEDT2S";

/// Default cap on `n`; the index holds `n(n+1)/2` hashes.
pub const DEFAULT_LIMIT: usize = 2048;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoSidedIndex {
    n: usize,
    k: usize,
    x: u64,
    seed: u64,
    /// `levels[L - 1][p - 1]` is the hash of `A[p, p+L-1]`.
    levels: Vec<Vec<u64>>,
    build: Counters,
}

impl TwoSidedIndex {
    /// Preprocesses `A` with the default size cap.
    pub fn build(a: &ByteString, k: usize, cfg: &HashConfig) -> Result<Self> {
        Self::build_with_limit(a, k, cfg, DEFAULT_LIMIT)
    }

    pub fn build_with_limit(a: &ByteString, k: usize, cfg: &HashConfig, limit: usize) -> Result<Self> {
        let n = a.len();
        if n > limit {
            return Err(Error::TooLarge { n, limit });
        }
        let full = SampleSet::full(n);
        let state = RollingHashState::init(a, &full, 0, cfg);
        let mut build = Counters { hashed_symbols: n as u64, ..Counters::default() };
        let levels: Vec<Vec<u64>> = (1..=n)
            .map(|len| (0..=n - len).map(|p| state.between(cfg, p, p + len)).collect())
            .collect();
        build.hash_retrievals = (n * (n + 1) / 2) as u64;
        build.table_inserts = build.hash_retrievals;
        Ok(TwoSidedIndex { n, k, x: cfg.x(), seed: cfg.seed(), levels, build })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Work spent building the index.
    pub fn build_counters(&self) -> Counters {
        self.build
    }

    /// The hash configuration the index was built with.
    pub fn config(&self) -> HashConfig {
        HashConfig::with_point(self.x, self.seed, self.n)
    }

    /// Hashes stored in cell `(i, j)`, one per in-range shift.
    pub fn cell(&self, i: usize, j: usize) -> Vec<u64> {
        let (len, lo, hi) = self.window(i, j);
        if lo > hi {
            return Vec::new();
        }
        let mut v = self.levels[len - 1][lo - 1..hi].to_vec();
        v.sort_unstable();
        v
    }

    /// Whether `h` is in cell `(i, j)`. An empty range always matches.
    pub fn contains(&self, i: usize, j: usize, h: u64) -> bool {
        if j < i {
            return true;
        }
        let (len, lo, hi) = self.window(i, j);
        lo <= hi && self.levels[len - 1][lo - 1..hi].contains(&h)
    }

    /// Length and the range of starts `p` with `|p - i| <= k` and `[p, p+len-1]` inside `A`.
    fn window(&self, i: usize, j: usize) -> (usize, usize, usize) {
        let len = j + 1 - i;
        if len > self.n {
            return (len, 1, 0);
        }
        let lo = i.saturating_sub(self.k).max(1);
        let hi = (i + self.k).min(self.n + 1 - len);
        (len, lo, hi)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new(MAGIC);
        w.u64(MODULUS);
        w.u64(self.x);
        w.u64(self.seed);
        w.u64(self.k as u64);
        w.u64(self.n as u64);
        for level in &self.levels {
            w.u64s(level);
        }
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::open(bytes, MAGIC)?;
        if r.u64()? != MODULUS {
            return Err(Error::Format("unsupported modulus".into()));
        }
        let x = r.u64()?;
        let seed = r.u64()?;
        let k = r.u64()? as usize;
        let n = r.u64()? as usize;
        let mut levels = Vec::with_capacity(n.min(1 << 16));
        for len in 1..=n {
            let level = r.u64s()?;
            if level.len() != n + 1 - len {
                return Err(Error::Format(format!("level {len} has {} entries", level.len())));
            }
            levels.push(level);
        }
        r.finish()?;
        Ok(TwoSidedIndex { n, k, x, seed, levels, build: Counters::default() })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_bytes(&std::fs::read(path)?)
    }
}

/// `B`'s side of the two-sided model: full prefix hashes.
pub fn two_sided_process_b(b: &ByteString, cfg: &HashConfig) -> RollingHashState {
    RollingHashState::init(b, &SampleSet::full(b.len()), 0, cfg)
}

/// Exact `MaxAlign` by binary search over table membership.
pub struct TwoSidedAlign<'a> {
    index: &'a TwoSidedIndex,
    cfg: HashConfig,
    sample: SampleSet,
    h_b: RollingHashState,
    counters: Counters,
}

impl<'a> TwoSidedAlign<'a> {
    pub fn new(index: &'a TwoSidedIndex, b: &ByteString) -> Result<Self> {
        if b.len() != index.n {
            return Err(Error::LengthMismatch { a: index.n, b: b.len() });
        }
        if index.k == 0 {
            return Err(invalid("index built with k = 0"));
        }
        let cfg = index.config();
        let h_b = two_sided_process_b(b, &cfg);
        let counters = Counters { hashed_symbols: b.len() as u64, ..Counters::default() };
        Ok(TwoSidedAlign { index, cfg, sample: SampleSet::full(b.len()), h_b, counters })
    }

    fn member(&mut self, i_b: usize, d: usize) -> bool {
        let j = i_b + d - 1;
        let h = self.h_b.retrieve(&self.sample, &self.cfg, i_b as i64, j as i64);
        self.counters.hash_retrievals += 1;
        self.counters.table_lookups += 1;
        self.index.contains(i_b, j, h)
    }
}

impl MaxAlign for TwoSidedAlign<'_> {
    fn grade(&self) -> Grade {
        Grade::Correct
    }

    fn max_align(&mut self, i_b: usize) -> usize {
        self.counters.oracle_queries += 1;
        let (mut lo, mut hi) = (0, self.index.n + 1 - i_b);
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if self.member(i_b, mid) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        lo
    }

    fn counters(&self) -> Counters {
        self.counters
    }
}
