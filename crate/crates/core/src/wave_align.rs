//! Shifted-alignment oracles for the sparsified wave, one per
//! preprocessing model, and the [`gap_wave`] entry point.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::brute::max_shift_alignment_bruteforce;
use crate::codec::{Reader, Writer};
use crate::counters::Counters;
use crate::error::{invalid, Error, Result};
use crate::hash::{HashConfig, RollingHashState, SampleSet};
use crate::no_prep::{probe, sqrt_step, ShiftedHashFamily, Side};
use crate::one_sided::{floor_log2, read_header, write_header, PowerTables};
use crate::strings::ByteString;
use crate::wave::{check_wave_params, greedy_wave, MaxShiftAlign, WaveOutcome};

const MAGIC: &[u8; 6] = b"GEDTWV";

/// Exhaustive oracle: exact longest match within `l` of `i_a`.
pub struct ExactShiftAlign<'a> {
    a: &'a ByteString,
    b: &'a ByteString,
    l: usize,
    counters: Counters,
}

impl<'a> ExactShiftAlign<'a> {
    pub fn new(a: &'a ByteString, b: &'a ByteString, l: usize) -> Self {
        ExactShiftAlign { a, b, l, counters: Counters::default() }
    }
}

impl MaxShiftAlign for ExactShiftAlign<'_> {
    fn max_shift_align(&mut self, i_a: usize, i_b: usize) -> usize {
        self.counters.oracle_queries += 1;
        max_shift_alignment_bruteforce(self.a, self.b, i_a as i64, i_b as i64, self.l as i64)
    }

    fn counters(&self) -> Counters {
        self.counters
    }
}

/// `A` hashed over `S + a*s` for `a in [-2s, 2s]`.
pub fn process_a_wave(a: &ByteString, k: usize, sample: &SampleSet, cfg: &HashConfig) -> ShiftedHashFamily {
    let s = sqrt_step(k) as i64;
    ShiftedHashFamily::build(a, sample, cfg, Side::A, (-2 * s..=2 * s).map(|t| t * s).collect())
}

/// `B` hashed over `S - b` for `b in [-s, s]`.
pub fn process_b_wave(b: &ByteString, k: usize, sample: &SampleSet, cfg: &HashConfig) -> ShiftedHashFamily {
    crate::no_prep::process_b(b, k, sample, cfg)
}

/// Binary search with floor `min(2l, n-i_b+1)` over the `l`-shaved window,
/// using only the `A` shifts that can reach `i_a - i_b` within `l`.
#[allow(clippy::too_many_arguments)]
pub fn max_shift_align_noprep(
    fam_a: &ShiftedHashFamily,
    fam_b: &ShiftedHashFamily,
    sample: &SampleSet,
    cfg: &HashConfig,
    i_a: usize,
    i_b: usize,
    k: usize,
    l: usize,
    n: usize,
    counters: &mut Counters,
) -> usize {
    counters.oracle_queries += 1;
    let s = sqrt_step(k) as i64;
    let delta = i_a as i64 - i_b as i64;
    let (l_i, i_b_i) = (l as i64, i_b as i64);
    let lo_a = (delta - l_i).div_euclid(s);
    let hi_a = -(-(delta + l_i)).div_euclid(s);
    let a_shifts: Vec<i64> = (lo_a..=hi_a).map(|t| t * s).collect();
    let room = n + 1 - i_b;
    let (mut lo, mut hi) = ((2 * l).min(room), room);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if probe(fam_a, &a_shifts, fam_b, sample, cfg, i_b_i + l_i, i_b_i + mid as i64 - l_i - 1, counters) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

pub struct NoPrepShiftAlign {
    k: usize,
    l: usize,
    n: usize,
    cfg: HashConfig,
    sample: SampleSet,
    fam_a: ShiftedHashFamily,
    fam_b: ShiftedHashFamily,
    counters: Counters,
}

impl NoPrepShiftAlign {
    /// Samples with granularity `l`; requires `l >= ceil(sqrt k)`.
    pub fn new(a: &ByteString, b: &ByteString, k: usize, l: usize, seed: u64) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch { a: a.len(), b: b.len() });
        }
        check_wave_params(a.len(), k, l)?;
        if l < sqrt_step(k) {
            return Err(invalid(format!("no-preprocessing wave needs l >= ceil(sqrt k) = {}", sqrt_step(k))));
        }
        let cfg = HashConfig::from_seed(seed, a.len());
        let sample = SampleSet::draw(a.len(), l, false, &cfg)?;
        let fam_a = process_a_wave(a, k, &sample, &cfg);
        let fam_b = process_b_wave(b, k, &sample, &cfg);
        let counters =
            Counters { hashed_symbols: fam_a.hashed_symbols() + fam_b.hashed_symbols(), ..Counters::default() };
        Ok(NoPrepShiftAlign { k, l, n: a.len(), cfg, sample, fam_a, fam_b, counters })
    }

    pub fn family_sizes(&self) -> (usize, usize) {
        (self.fam_a.len(), self.fam_b.len())
    }
}

impl MaxShiftAlign for NoPrepShiftAlign {
    fn max_shift_align(&mut self, i_a: usize, i_b: usize) -> usize {
        max_shift_align_noprep(
            &self.fam_a,
            &self.fam_b,
            &self.sample,
            &self.cfg,
            i_a,
            i_b,
            self.k,
            self.l,
            self.n,
            &mut self.counters,
        )
    }

    fn counters(&self) -> Counters {
        self.counters
    }
}

/// `A` preprocessed for shifted queries: power-of-two tables bucketed by
/// position and by shift, both in units of `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveIndex {
    k: usize,
    l: usize,
    cfg: HashConfig,
    sample: SampleSet,
    tables: PowerTables,
    build: Counters,
}

impl WaveIndex {
    pub fn build(a: &ByteString, k: usize, l: usize, seed: u64) -> Result<Self> {
        check_wave_params(a.len(), k, l)?;
        let cfg = HashConfig::from_seed(seed, a.len());
        let sample = SampleSet::draw(a.len(), l, true, &cfg)?;
        Self::preprocess(a, k, l, cfg, sample)
    }

    /// A query asks about `i_a - i_b` in `[-k, k]` plus a slack of `l`, so
    /// shifts up to `k + l` are tabulated.
    pub fn preprocess(a: &ByteString, k: usize, l: usize, cfg: HashConfig, sample: SampleSet) -> Result<Self> {
        check_wave_params(a.len(), k, l)?;
        let mut build = Counters::default();
        let reach = (k + l) as i64;
        let tables = PowerTables::build(a, &sample, &cfg, l, -reach..=reach, true, &mut build);
        Ok(WaveIndex { k, l, cfg, sample, tables, build })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn step(&self) -> usize {
        self.l
    }

    pub fn n(&self) -> usize {
        self.tables.n
    }

    pub fn sample(&self) -> &SampleSet {
        &self.sample
    }

    pub fn config(&self) -> &HashConfig {
        &self.cfg
    }

    pub fn build_counters(&self) -> Counters {
        self.build
    }

    pub fn stored(&self) -> usize {
        self.tables.stored()
    }

    /// Span of shift buckets, `(lowest, count)`.
    pub fn shift_buckets(&self) -> (i64, usize) {
        (self.tables.shift_lo.div_euclid(self.l as i64), self.tables.scols)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new(MAGIC);
        write_header(&mut w, &self.cfg, self.k, self.tables.n, &self.sample);
        w.u64(self.l as u64);
        self.tables.write(&mut w);
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::open(bytes, MAGIC)?;
        let (cfg, k, n, sample) = read_header(&mut r)?;
        let l = r.u64()? as usize;
        let tables = PowerTables::read(&mut r, n)?;
        r.finish()?;
        if l == 0 || l > k || tables.width != l {
            return Err(Error::Format("table shape does not match (k, l)".into()));
        }
        Ok(WaveIndex { k, l, cfg, sample, tables, build: Counters::default() })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_bytes(&std::fs::read(path)?)
    }
}

/// Descending power-of-two scan against the bucket `(i_b, i_a - i_b)`.
pub fn one_sided_max_shift_align(
    index: &WaveIndex,
    h_b: &RollingHashState,
    i_a: usize,
    i_b: usize,
    counters: &mut Counters,
) -> usize {
    counters.oracle_queries += 1;
    let room = index.n() + 1 - i_b;
    let shift = i_a as i64 - i_b as i64;
    for level in (0..=floor_log2(room)).rev() {
        let d = 1usize << level;
        let h = h_b.retrieve(&index.sample, &index.cfg, i_b as i64, (i_b + d - 1) as i64);
        counters.hash_retrievals += 1;
        counters.table_lookups += 1;
        if index.tables.contains(level, i_b, Some(shift), h) {
            return d;
        }
    }
    0
}

pub struct OneSidedShiftAlign<'a> {
    index: &'a WaveIndex,
    h_b: RollingHashState,
    counters: Counters,
}

impl<'a> OneSidedShiftAlign<'a> {
    pub fn new(index: &'a WaveIndex, b: &ByteString) -> Result<Self> {
        Ok(Self::with_state(index, Self::process_b(index, b)?))
    }

    /// `B` hashed over the index's sample.
    pub fn process_b(index: &WaveIndex, b: &ByteString) -> Result<RollingHashState> {
        if b.len() != index.n() {
            return Err(Error::LengthMismatch { a: index.n(), b: b.len() });
        }
        Ok(RollingHashState::init(b, &index.sample, 0, &index.cfg))
    }

    /// Queries against a `B` state hashed ahead of time.
    pub fn with_state(index: &'a WaveIndex, h_b: RollingHashState) -> Self {
        OneSidedShiftAlign { index, h_b, counters: Counters::default() }
    }
}

impl MaxShiftAlign for OneSidedShiftAlign<'_> {
    fn max_shift_align(&mut self, i_a: usize, i_b: usize) -> usize {
        one_sided_max_shift_align(self.index, &self.h_b, i_a, i_b, &mut self.counters)
    }

    fn counters(&self) -> Counters {
        self.counters
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveMode {
    Noprep,
    OneSided,
    TwoSided,
}

impl std::str::FromStr for WaveMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "noprep" => Ok(WaveMode::Noprep),
            "one-sided" | "one_sided" => Ok(WaveMode::OneSided),
            "two-sided" | "two_sided" => Ok(WaveMode::TwoSided),
            _ => Err(invalid(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaveRun {
    pub outcome: WaveOutcome,
    /// Work done before the first query (index build, `B` hashing in two-sided mode).
    pub preprocessing: Counters,
    /// Work done at query time, including hashing `B` where the model requires it.
    pub query: Counters,
}

/// Runs the wave with the oracle the mode calls for. `index` reuses a
/// prebuilt `A` index in the one- and two-sided modes.
pub fn gap_wave(
    a: &ByteString,
    b: &ByteString,
    k: usize,
    l: usize,
    mode: WaveMode,
    seed: u64,
    index: Option<&WaveIndex>,
) -> Result<WaveRun> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { a: a.len(), b: b.len() });
    }
    check_wave_params(a.len(), k, l)?;
    match mode {
        WaveMode::Noprep => {
            let mut o = NoPrepShiftAlign::new(a, b, k, l, seed)?;
            let outcome = greedy_wave(a, b, k, l, &mut o)?;
            Ok(WaveRun { outcome, preprocessing: Counters::default(), query: o.counters() })
        }
        WaveMode::OneSided | WaveMode::TwoSided => {
            let built;
            let index = match index {
                Some(ix) => {
                    if ix.k != k || ix.l != l || ix.n() != a.len() {
                        return Err(invalid("index was built for different (n, k, l)"));
                    }
                    ix
                }
                None => {
                    built = WaveIndex::build(a, k, l, seed)?;
                    &built
                }
            };
            let mut prep = index.build_counters();
            let h_b = OneSidedShiftAlign::process_b(index, b)?;
            let hashed_b = Counters { hashed_symbols: index.sample.len() as u64, ..Counters::default() };
            let mut o = OneSidedShiftAlign::with_state(index, h_b);
            let outcome = greedy_wave(a, b, k, l, &mut o)?;
            let mut query = o.counters();
            if mode == WaveMode::TwoSided {
                prep += hashed_b;
            } else {
                query += hashed_b;
            }
            Ok(WaveRun { outcome, preprocessing: prep, query })
        }
    }
}
