//! Subsampled Rabin-Karp rolling hashes.
//!
//! A [`RollingHashState`] holds prefix hashes of a string read at the
//! positions of a [`SampleSet`] translated by an integer offset. Offsets are
//! views: the sample set itself is stored once and shared by every shifted
//! state built from it.
//!
//! Arithmetic is modulo the Mersenne prime `2^61 - 1`. For `n <= 2^32` and
//! a 257-symbol alphabet (256 bytes plus the sentinel) this leaves the
//! collision probability of two distinct sequences below `n / p < 2^-28`
//! per comparison.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::strings::ByteString;

/// The hash modulus `p = 2^61 - 1`.
pub const MODULUS: u64 = (1 << 61) - 1;

/// Independent random streams derived from one experiment seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    HashPoint = 1,
    Sample = 2,
    Instance = 3,
    Trial = 4,
}

/// A ChaCha generator for the named sub-stream of `seed`.
pub fn substream(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

#[inline]
fn reduce(v: u64) -> u64 {
    let v = (v & MODULUS) + (v >> 61);
    if v >= MODULUS {
        v - MODULUS
    } else {
        v
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64) -> u64 {
    let p = a as u128 * b as u128;
    reduce((p as u64 & MODULUS) + (p >> 61) as u64)
}

#[inline]
pub fn add_mod(a: u64, b: u64) -> u64 {
    reduce(a + b)
}

#[inline]
pub fn sub_mod(a: u64, b: u64) -> u64 {
    reduce(a + MODULUS - b)
}

/// `x^m mod p` by square-and-multiply.
pub fn pow_mod(mut x: u64, mut m: u64) -> u64 {
    let mut acc = 1;
    x = reduce(x);
    while m > 0 {
        if m & 1 == 1 {
            acc = mul_mod(acc, x);
        }
        x = mul_mod(x, x);
        m >>= 1;
    }
    acc
}

/// The random evaluation point `x` together with its power table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashConfig {
    x: u64,
    seed: u64,
    powers: Vec<u64>,
}

impl HashConfig {
    /// Draws `x` uniformly from `[0, p-1]` on the hash-point stream of `seed`;
    /// powers are cached up to `max_len + 1`.
    pub fn from_seed(seed: u64, max_len: usize) -> Self {
        let x = substream(seed, Stream::HashPoint).random_range(0..MODULUS);
        Self::with_point(x, seed, max_len)
    }

    /// A config with a caller-chosen `x` (reloading an index, fault injection).
    pub fn with_point(x: u64, seed: u64, max_len: usize) -> Self {
        let x = reduce(x);
        let mut powers = Vec::with_capacity(max_len + 2);
        let mut acc = 1;
        for _ in 0..=max_len + 1 {
            powers.push(acc);
            acc = mul_mod(acc, x);
        }
        HashConfig { x, seed, powers }
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn modulus(&self) -> u64 {
        MODULUS
    }

    #[inline]
    pub fn pow(&self, m: usize) -> u64 {
        match self.powers.get(m) {
            Some(&v) => v,
            None => pow_mod(self.x, m as u64),
        }
    }
}

/// Inclusion probability `min(4 ln n / granularity, 1)`.
pub fn sample_rate(n: usize, granularity: usize) -> f64 {
    if n <= 1 {
        return 1.0;
    }
    (4.0 * (n as f64).ln() / granularity as f64).min(1.0)
}

/// Sorted, duplicate-free sample of positions in `[1, n]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    indices: Vec<u32>,
    n: usize,
    granularity: usize,
    rate: f64,
    anchored: bool,
}

impl SampleSet {
    /// Includes each position of `[1, n]` independently with probability
    /// `min(4 ln n / granularity, 1)`. With `force_anchors`, every multiple of
    /// `granularity` and the position `n - 1` are added.
    pub fn draw(n: usize, granularity: usize, force_anchors: bool, cfg: &HashConfig) -> Result<Self> {
        if granularity == 0 {
            return Err(Error::InvalidParameter("sample granularity must be at least 1".into()));
        }
        if n > u32::MAX as usize {
            return Err(Error::InvalidParameter(format!("n = {n} exceeds 2^32 - 1")));
        }
        let rate = sample_rate(n, granularity);
        let mut indices: Vec<u32> = if rate >= 1.0 {
            (1..=n as u32).collect()
        } else {
            let mut rng = substream(cfg.seed(), Stream::Sample);
            let mut picked = Vec::with_capacity((n as f64 * rate * 1.2) as usize + 8);
            if rate > 0.0 {
                let skip = Geometric::new(rate).expect("rate lies in (0, 1)");
                let mut pos: u64 = 0;
                loop {
                    pos += skip.sample(&mut rng) + 1;
                    if pos > n as u64 {
                        break;
                    }
                    picked.push(pos as u32);
                }
            }
            picked
        };
        if force_anchors {
            indices.extend((granularity..=n).step_by(granularity).map(|i| i as u32));
            if n >= 2 {
                indices.push((n - 1) as u32);
            }
            indices.sort_unstable();
            indices.dedup();
        }
        Ok(SampleSet { indices, n, granularity, rate, anchored: force_anchors })
    }

    /// Every position `1..=n`.
    pub fn full(n: usize) -> Self {
        SampleSet { indices: (1..=n as u32).collect(), n, granularity: 1, rate: 1.0, anchored: false }
    }

    /// A sample with explicitly chosen positions (tests, reloading).
    pub fn from_indices(n: usize, mut indices: Vec<u32>) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if indices.first().is_some_and(|&i| i == 0) || indices.last().is_some_and(|&i| i as usize > n) {
            return Err(Error::InvalidParameter(format!("sample positions must lie in [1, {n}]")));
        }
        let rate = if n == 0 { 1.0 } else { indices.len() as f64 / n as f64 };
        Ok(SampleSet { indices, n, granularity: 1, rate, anchored: false })
    }

    /// Rebuilds a drawn sample from stored positions and draw parameters.
    pub(crate) fn reassemble(n: usize, granularity: usize, anchored: bool, indices: Vec<u32>) -> Result<Self> {
        let mut s = Self::from_indices(n, indices)?;
        s.granularity = granularity.max(1);
        s.rate = sample_rate(n, s.granularity);
        s.anchored = anchored;
        Ok(s)
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn granularity(&self) -> usize {
        self.granularity
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn is_anchored(&self) -> bool {
        self.anchored
    }

    /// Index range `[lo, hi)` into the sample of positions inside `[i, j]`.
    #[inline]
    pub fn span(&self, i: i64, j: i64) -> (usize, usize) {
        let lo = self.indices.partition_point(|&s| (s as i64) < i);
        let hi = self.indices.partition_point(|&s| (s as i64) <= j);
        (lo, hi.max(lo))
    }

    /// Number of sampled positions inside `[i, j]`.
    pub fn count_in(&self, i: i64, j: i64) -> usize {
        let (lo, hi) = self.span(i, j);
        hi - lo
    }
}

/// Prefix hashes of a string read at `S + offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RollingHashState {
    offset: i64,
    prefixes: Vec<u64>,
}

impl RollingHashState {
    /// Folds `c <- c*x + A[s + offset] mod p` over the sample; out-of-range
    /// reads contribute the sentinel.
    pub fn init(text: &ByteString, sample: &SampleSet, offset: i64, cfg: &HashConfig) -> Self {
        let mut prefixes = Vec::with_capacity(sample.len() + 1);
        prefixes.push(0);
        let mut c = 0;
        for &s in sample.indices() {
            c = add_mod(mul_mod(c, cfg.x()), text.at(s as i64 + offset) as u64);
            prefixes.push(c);
        }
        RollingHashState { offset, prefixes }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn prefixes(&self) -> &[u64] {
        &self.prefixes
    }

    /// Hash of the sampled characters at positions of `S + offset` inside
    /// `[i, j]`; zero when none fall inside.
    #[inline]
    pub fn retrieve(&self, sample: &SampleSet, cfg: &HashConfig, i: i64, j: i64) -> u64 {
        let (lo, hi) = sample.span(i - self.offset, j - self.offset);
        self.between(cfg, lo, hi)
    }

    /// Hash of sample entries `lo..hi` (0-based, half open).
    #[inline]
    pub fn between(&self, cfg: &HashConfig, lo: usize, hi: usize) -> u64 {
        sub_mod(self.prefixes[hi], mul_mod(self.prefixes[lo], cfg.pow(hi - lo)))
    }
}

/// JSON sidecar carrying everything needed to rebuild hashes bit-exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HashSidecar {
    pub p: u64,
    pub x: u64,
    pub rng_seed: u64,
    pub sample: SampleSet,
}

impl HashSidecar {
    pub fn new(cfg: &HashConfig, sample: &SampleSet) -> Self {
        HashSidecar { p: MODULUS, x: cfg.x(), rng_seed: cfg.seed(), sample: sample.clone() }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let side: HashSidecar = serde_json::from_str(s)?;
        if side.p != MODULUS {
            return Err(Error::Format(format!("unsupported modulus {}", side.p)));
        }
        Ok(side)
    }

    /// The config and sample this sidecar describes.
    pub fn restore(&self) -> (HashConfig, SampleSet) {
        let cfg = HashConfig::with_point(self.x, self.rng_seed, self.sample.universe());
        (cfg, self.sample.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Direct polynomial evaluation over an explicit position list.
    fn naive_hash(text: &ByteString, positions: &[i64], x: u64) -> u64 {
        positions.iter().fold(0u64, |c, &p| {
            ((c as u128 * x as u128 + text.at(p) as u128) % MODULUS as u128) as u64
        })
    }

    #[test]
    fn mul_mod_matches_u128_remainder() {
        let vals = [0, 1, 2, MODULUS - 1, MODULUS - 2, 1 << 60, 123456789123456789 % MODULUS];
        for &a in &vals {
            for &b in &vals {
                let want = ((a as u128 * b as u128) % MODULUS as u128) as u64;
                assert_eq!(mul_mod(a, b), want, "{a} * {b}");
            }
        }
    }

    #[test]
    fn power_cache_matches_square_and_multiply() {
        let cfg = HashConfig::from_seed(9, 1000);
        for m in 0..=1000 {
            assert_eq!(cfg.pow(m), pow_mod(cfg.x(), m as u64));
        }
        assert_eq!(cfg.pow(5000), pow_mod(cfg.x(), 5000));
    }

    #[test]
    fn granularity_one_takes_everything() {
        let cfg = HashConfig::from_seed(1, 100);
        let s = SampleSet::draw(100, 1, false, &cfg).unwrap();
        assert_eq!(s.indices(), (1..=100).collect::<Vec<u32>>().as_slice());
    }

    #[test]
    fn anchors_are_forced() {
        let cfg = HashConfig::from_seed(2, 1000);
        let s = SampleSet::draw(1000, 64, true, &cfg).unwrap();
        for m in (64..=1000).step_by(64) {
            assert!(s.indices().binary_search(&(m as u32)).is_ok());
        }
        assert!(s.indices().binary_search(&999).is_ok());
        assert!(s.indices().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn sample_size_follows_binomial() {
        let (n, k) = (10_000usize, 100usize);
        let q = sample_rate(n, k);
        let mean = n as f64 * q;
        let sd = (n as f64 * q * (1.0 - q)).sqrt();
        for seed in 0..100 {
            let cfg = HashConfig::from_seed(seed, 0);
            let s = SampleSet::draw(n, k, false, &cfg).unwrap();
            assert!((s.len() as f64 - mean).abs() <= 3.0 * sd + 1.0, "seed {seed}: {} vs {mean}", s.len());
        }
    }

    #[test]
    fn empty_sample_hashes_to_zero() {
        let cfg = HashConfig::from_seed(3, 10);
        let s = SampleSet::from_indices(10, vec![]).unwrap();
        let h = RollingHashState::init(&ByteString::from("abcdefghij"), &s, 0, &cfg);
        assert_eq!(h.prefixes(), &[0]);
        assert_eq!(h.retrieve(&s, &cfg, 1, 10), 0);
    }

    #[test]
    fn sidecar_round_trip() {
        let cfg = HashConfig::from_seed(17, 500);
        let s = SampleSet::draw(500, 20, true, &cfg).unwrap();
        let json = HashSidecar::new(&cfg, &s).to_json().unwrap();
        let (cfg2, s2) = HashSidecar::from_json(&json).unwrap().restore();
        assert_eq!(cfg2.x(), cfg.x());
        assert_eq!(s2, s);
        let text = ByteString::from("the quick brown fox ".repeat(25).as_str());
        assert_eq!(RollingHashState::init(&text, &s, 3, &cfg), RollingHashState::init(&text, &s2, 3, &cfg2));
    }

    proptest! {
        #[test]
        fn retrieval_matches_direct_evaluation(
            text in prop::collection::vec(any::<u8>(), 1..60),
            picks in prop::collection::vec(any::<bool>(), 60),
            offset in -5i64..5,
            i in -8i64..70,
            len in 0i64..70,
            seed in any::<u64>(),
        ) {
            let n = text.len();
            let text = ByteString::new(text);
            let idx: Vec<u32> = (1..=n as u32).filter(|&p| picks[p as usize - 1]).collect();
            let s = SampleSet::from_indices(n, idx.clone()).unwrap();
            let cfg = HashConfig::from_seed(seed, n);
            let h = RollingHashState::init(&text, &s, offset, &cfg);
            prop_assert_eq!(h.prefixes().len(), s.len() + 1);
            let j = i + len;
            let positions: Vec<i64> = idx.iter().map(|&p| p as i64 + offset).filter(|&p| p >= i && p <= j).collect();
            let got = h.retrieve(&s, &cfg, i, j);
            prop_assert!(got < MODULUS);
            prop_assert_eq!(got, naive_hash(&text, &positions, cfg.x()));
        }
    }
}
