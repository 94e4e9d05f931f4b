//! One-sided preprocessing: power-of-two length hash tables over `A`, and a
//! half-approximately-correct `MaxAlign` that only hashes `B` once.
//!
//! For a length `L = 2^e` the set of sampled positions inside
//! `[i, i+L-1]` only changes when `i` crosses a point of `S+1` or
//! `S-L+1`. Hashing `A` at each such change point (plus position 1) and
//! every shift covers all windows: a query at `i_B` uses the greatest change
//! point `<= i_B`, which reads exactly the same sample positions. Because `S`
//! contains every multiple of the bucket width, that change point is at most
//! one bucket to the left of `i_B`.

use std::path::Path;

use crate::codec::{Reader, Writer};
use crate::counters::Counters;
use crate::error::{invalid, Error, Result};
use crate::greedy::{Grade, MaxAlign};
use crate::hash::{HashConfig, RollingHashState, SampleSet, MODULUS};
use crate::strings::ByteString;

const MAGIC: &[u8; 6] = b"GEDT1S";

/// `floor(log2 n)`, with `0` for `n <= 1`.
pub fn floor_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - 1 - n.leading_zeros()) as usize
    }
}

/// Positions of `[1, n-len+1]` where the sampled content of `[i, i+len-1]`
/// can change: `{1} ∪ (S+1) ∪ (S-len+1)`, sorted.
pub fn change_points(sample: &SampleSet, len: usize, n: usize) -> Vec<usize> {
    if len > n {
        return Vec::new();
    }
    let last = n + 1 - len;
    let mut out = Vec::with_capacity(2 * sample.len() + 1);
    out.push(1);
    for &s in sample.indices() {
        let s = s as usize;
        if s < last {
            out.push(s + 1);
        }
        if s + 1 >= len && s + 1 - len >= 1 && s + 1 - len <= last {
            out.push(s + 1 - len);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Hash tables indexed by length exponent, position bucket and (optionally)
/// shift bucket. Each hash is stored once, in its own bucket; lookups take
/// the union of the neighbouring buckets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct PowerTables {
    pub n: usize,
    pub width: usize,
    pub levels: usize,
    pub cols: usize,
    pub shift_lo: i64,
    pub scols: usize,
    pub cells: Vec<Vec<u64>>,
}

impl PowerTables {
    fn shift_bucket(&self, a: i64) -> i64 {
        a.div_euclid(self.width as i64) - self.shift_lo.div_euclid(self.width as i64)
    }

    fn slot(&self, level: usize, col: usize, scol: usize) -> usize {
        (level * self.cols + col) * self.scols + scol
    }

    /// Hashes `A` over `S + a` for every `a` in `shifts`. With
    /// `bucket_shifts == false` all shifts share one bucket.
    pub fn build(
        a: &ByteString,
        sample: &SampleSet,
        cfg: &HashConfig,
        width: usize,
        shifts: std::ops::RangeInclusive<i64>,
        bucket_shifts: bool,
        counters: &mut Counters,
    ) -> Self {
        let n = a.len();
        let levels = floor_log2(n) + 1;
        let cols = n / width + 1;
        let shift_lo = *shifts.start();
        let scols = if bucket_shifts {
            (shifts.end().div_euclid(width as i64) - shift_lo.div_euclid(width as i64) + 1) as usize
        } else {
            1
        };
        let mut t = PowerTables { n, width, levels, cols, shift_lo, scols, cells: vec![Vec::new(); levels * cols * scols] };
        if n == 0 {
            return t;
        }
        let states: Vec<(i64, RollingHashState)> =
            shifts.map(|o| (o, RollingHashState::init(a, sample, o, cfg))).collect();
        counters.hashed_symbols += (states.len() * sample.len()) as u64;
        let idx = sample.indices();
        for level in 0..levels {
            let len = 1usize << level;
            for i in change_points(sample, len, n) {
                let (lo, hi) = sample.span(i as i64, (i + len - 1) as i64);
                let col = i / width;
                for (o, st) in &states {
                    // every sampled read must land inside A
                    if lo < hi && (idx[lo] as i64 + o < 1 || idx[hi - 1] as i64 + o > n as i64) {
                        continue;
                    }
                    let h = st.between(cfg, lo, hi);
                    let scol = if bucket_shifts { t.shift_bucket(*o) as usize } else { 0 };
                    let slot = t.slot(level, col, scol);
                    t.cells[slot].push(h);
                }
                counters.hash_retrievals += states.len() as u64;
            }
        }
        for cell in &mut t.cells {
            cell.sort_unstable();
            cell.dedup();
            counters.table_inserts += cell.len() as u64;
            cell.shrink_to_fit();
        }
        t
    }

    /// Membership of `h` in the buckets around `(level, col)` and, when
    /// shifts are bucketed, around the shift `shift`.
    pub fn contains(&self, level: usize, pos: usize, shift: Option<i64>, h: u64) -> bool {
        let col = (pos / self.width) as i64;
        let scol = shift.map(|a| self.shift_bucket(a));
        for c in col - 1..=col + 1 {
            if c < 0 || c >= self.cols as i64 {
                continue;
            }
            let scols = match scol {
                Some(sc) => sc - 1..=sc + 1,
                None => 0..=0,
            };
            for sc in scols {
                if sc < 0 || sc >= self.scols as i64 {
                    continue;
                }
                if self.cells[self.slot(level, c as usize, sc as usize)].binary_search(&h).is_ok() {
                    return true;
                }
            }
        }
        false
    }

    pub fn stored(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn write(&self, w: &mut Writer) {
        w.u64(self.width as u64);
        w.i64(self.shift_lo);
        w.u64(self.scols as u64);
        for cell in &self.cells {
            w.u64s(cell);
        }
    }

    pub fn read(r: &mut Reader, n: usize) -> Result<Self> {
        let width = r.u64()? as usize;
        if width == 0 {
            return Err(Error::Format("zero bucket width".into()));
        }
        let shift_lo = r.i64()?;
        let scols = r.u64()? as usize;
        let levels = floor_log2(n) + 1;
        let cols = n / width + 1;
        let count = levels.checked_mul(cols).and_then(|c| c.checked_mul(scols));
        let count = count.filter(|&c| c <= 1 << 32).ok_or_else(|| Error::Format("table shape overflows".into()))?;
        let mut cells = Vec::with_capacity(count.min(1 << 20));
        for _ in 0..count {
            let cell = r.u64s()?;
            if cell.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Format("table cell not sorted".into()));
            }
            cells.push(cell);
        }
        Ok(PowerTables { n, width, levels, cols, shift_lo, scols, cells })
    }
}

pub(crate) fn write_header(w: &mut Writer, cfg: &HashConfig, k: usize, n: usize, sample: &SampleSet) {
    w.u64(MODULUS);
    w.u64(cfg.x());
    w.u64(cfg.seed());
    w.u64(k as u64);
    w.u64(n as u64);
    w.u64(sample.granularity() as u64);
    w.u64(sample.is_anchored() as u64);
    w.u32s(sample.indices());
}

pub(crate) fn read_header(r: &mut Reader) -> Result<(HashConfig, usize, usize, SampleSet)> {
    if r.u64()? != MODULUS {
        return Err(Error::Format("unsupported modulus".into()));
    }
    let x = r.u64()?;
    let seed = r.u64()?;
    let k = r.u64()? as usize;
    let n = r.u64()? as usize;
    let granularity = r.u64()? as usize;
    let anchored = r.u64()? != 0;
    let sample = SampleSet::reassemble(n, granularity, anchored, r.u32s()?).map_err(|e| Error::Format(e.to_string()))?;
    Ok((HashConfig::with_point(x, seed, n), k, n, sample))
}

/// Preprocessed `A` for the one-sided model.
#[derive(Debug, Clone, PartialEq)]
pub struct OneSidedIndex {
    k: usize,
    cfg: HashConfig,
    sample: SampleSet,
    tables: PowerTables,
    build: Counters,
}

impl OneSidedIndex {
    /// Draws an anchored sample of granularity `k` from `seed` and preprocesses `A`.
    pub fn build(a: &ByteString, k: usize, seed: u64) -> Result<Self> {
        let cfg = HashConfig::from_seed(seed, a.len());
        let sample = SampleSet::draw(a.len(), k.max(1), true, &cfg)?;
        Self::preprocess(a, k, cfg, sample)
    }

    pub fn preprocess(a: &ByteString, k: usize, cfg: HashConfig, sample: SampleSet) -> Result<Self> {
        if k < 1 {
            return Err(invalid("k must be at least 1"));
        }
        if sample.universe() != a.len() {
            return Err(invalid("sample universe differs from |A|"));
        }
        let mut build = Counters::default();
        let k_i = k as i64;
        let tables = PowerTables::build(a, &sample, &cfg, k, -k_i..=k_i, false, &mut build);
        Ok(OneSidedIndex { k, cfg, sample, tables, build })
    }

    pub fn k(&self) -> usize {
        self.k
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

    /// Work spent preprocessing; zero for a loaded index.
    pub fn build_counters(&self) -> Counters {
        self.build
    }

    /// Number of stored hashes.
    pub fn stored(&self) -> usize {
        self.tables.stored()
    }

    /// Whether `h` is stored for length `2^level` near position `pos`.
    pub fn contains(&self, level: usize, pos: usize, h: u64) -> bool {
        self.tables.contains(level, pos, None, h)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new(MAGIC);
        write_header(&mut w, &self.cfg, self.k, self.tables.n, &self.sample);
        self.tables.write(&mut w);
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::open(bytes, MAGIC)?;
        let (cfg, k, n, sample) = read_header(&mut r)?;
        let tables = PowerTables::read(&mut r, n)?;
        r.finish()?;
        if k == 0 || tables.width != k || tables.scols != 1 {
            return Err(Error::Format("table shape does not match k".into()));
        }
        Ok(OneSidedIndex { k, cfg, sample, tables, build: Counters::default() })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_bytes(&std::fs::read(path)?)
    }
}

/// `B` hashed once over the index's sample.
pub fn one_sided_process_b(b: &ByteString, sample: &SampleSet, cfg: &HashConfig) -> RollingHashState {
    RollingHashState::init(b, sample, 0, cfg)
}

/// Descending power-of-two scan: the first length whose `B` hash is in the table.
pub fn one_sided_max_align(
    index: &OneSidedIndex,
    h_b: &RollingHashState,
    i_b: usize,
    counters: &mut Counters,
) -> usize {
    counters.oracle_queries += 1;
    let room = index.n() + 1 - i_b;
    for level in (0..=floor_log2(room)).rev() {
        let d = 1usize << level;
        let h = h_b.retrieve(&index.sample, &index.cfg, i_b as i64, (i_b + d - 1) as i64);
        counters.hash_retrievals += 1;
        counters.table_lookups += 1;
        if index.contains(level, i_b, h) {
            return d;
        }
    }
    0
}

pub struct OneSidedAlign<'a> {
    index: &'a OneSidedIndex,
    h_b: RollingHashState,
    counters: Counters,
}

impl<'a> OneSidedAlign<'a> {
    pub fn new(index: &'a OneSidedIndex, b: &ByteString) -> Result<Self> {
        if b.len() != index.n() {
            return Err(Error::LengthMismatch { a: index.n(), b: b.len() });
        }
        let h_b = one_sided_process_b(b, &index.sample, &index.cfg);
        let counters = Counters { hashed_symbols: index.sample.len() as u64, ..Counters::default() };
        Ok(OneSidedAlign { index, h_b, counters })
    }

    pub fn hash_state(&self) -> &RollingHashState {
        &self.h_b
    }
}

impl MaxAlign for OneSidedAlign<'_> {
    fn grade(&self) -> Grade {
        Grade::HalfApproximatelyCorrect
    }

    fn max_align(&mut self, i_b: usize) -> usize {
        one_sided_max_align(self.index, &self.h_b, i_b, &mut self.counters)
    }

    fn counters(&self) -> Counters {
        self.counters
    }
}
