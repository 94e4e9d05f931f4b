//! The no-preprocessing back-end: `O(sqrt k)` shifted hash families per side
//! and a birthday-style binary-search `MaxAlign`.
//!
//! With `s = ceil(sqrt k)`, `A` is hashed at shifts `a*s` and `B` at shifts
//! `-b` for `a, b in [-s, s]`. Any `c in [-k, k]` is some `a*s + b`, so two
//! lists of `2s+1` hashes share a value whenever `B`'s window matches `A`
//! at a shift of at most `k`.

use crate::counters::Counters;
use crate::error::{invalid, Error, Result};
use crate::greedy::{Grade, MaxAlign};
use crate::hash::{HashConfig, RollingHashState, SampleSet};
use crate::strings::ByteString;

/// `ceil(sqrt k)`.
pub fn sqrt_step(k: usize) -> usize {
    let mut s = (k as f64).sqrt() as usize;
    while s * s < k {
        s += 1;
    }
    while s > 0 && (s - 1) * (s - 1) >= k {
        s -= 1;
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// Rolling-hash states of one string over translated copies of a shared sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftedHashFamily {
    side: Side,
    /// Shift of each state, ascending.
    shifts: Vec<i64>,
    states: Vec<RollingHashState>,
}

impl ShiftedHashFamily {
    pub fn build(text: &ByteString, sample: &SampleSet, cfg: &HashConfig, side: Side, mut shifts: Vec<i64>) -> Self {
        shifts.sort_unstable();
        shifts.dedup();
        let states = shifts.iter().map(|&o| RollingHashState::init(text, sample, o, cfg)).collect();
        ShiftedHashFamily { side, shifts, states }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn shifts(&self) -> &[i64] {
        &self.shifts
    }

    pub fn states(&self) -> &[RollingHashState] {
        &self.states
    }

    /// The state hashed at `shift`, if the family has one.
    pub fn get(&self, shift: i64) -> Option<&RollingHashState> {
        self.shifts.binary_search(&shift).ok().map(|t| &self.states[t])
    }

    /// Symbols folded while building the family.
    pub fn hashed_symbols(&self) -> u64 {
        self.states.iter().map(|s| (s.prefixes().len() - 1) as u64).sum()
    }
}

/// `A` hashed over `S + a*s` for `a in [-s, s]`.
pub fn process_a(a: &ByteString, k: usize, sample: &SampleSet, cfg: &HashConfig) -> ShiftedHashFamily {
    let s = sqrt_step(k) as i64;
    ShiftedHashFamily::build(a, sample, cfg, Side::A, (-s..=s).map(|t| t * s).collect())
}

/// `B` hashed over `S - b` for `b in [-s, s]`.
pub fn process_b(b: &ByteString, k: usize, sample: &SampleSet, cfg: &HashConfig) -> ShiftedHashFamily {
    let s = sqrt_step(k) as i64;
    ShiftedHashFamily::build(b, sample, cfg, Side::B, (-s..=s).map(|t| -t).collect())
}

/// Whether two unsorted hash lists share a value (sort, then merge).
pub(crate) fn lists_intersect(la: &mut [u64], lb: &mut [u64]) -> bool {
    la.sort_unstable();
    lb.sort_unstable();
    let (mut p, mut q) = (0, 0);
    while p < la.len() && q < lb.len() {
        match la[p].cmp(&lb[q]) {
            std::cmp::Ordering::Less => p += 1,
            std::cmp::Ordering::Greater => q += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Compares `A` and `B` over `S ∩ [lo, hi]`, each family read at its own
/// shifts; `a_shifts` restricts the `A` side.
#[allow(clippy::too_many_arguments)]
pub(crate) fn probe(
    fam_a: &ShiftedHashFamily,
    a_shifts: &[i64],
    fam_b: &ShiftedHashFamily,
    sample: &SampleSet,
    cfg: &HashConfig,
    lo: i64,
    hi: i64,
    counters: &mut Counters,
) -> bool {
    let mut la: Vec<u64> = a_shifts
        .iter()
        .filter_map(|&o| fam_a.get(o))
        .map(|st| st.retrieve(sample, cfg, lo + st.offset(), hi + st.offset()))
        .collect();
    let mut lb: Vec<u64> =
        fam_b.states.iter().map(|st| st.retrieve(sample, cfg, lo + st.offset(), hi + st.offset())).collect();
    counters.hash_retrievals += (la.len() + lb.len()) as u64;
    lists_intersect(&mut la, &mut lb)
}

/// Binary search over `d in [min(2k, n-i_b+1), n-i_b+1]`, probing the
/// `k`-shaved window `[i_b+k, i_b+d-k-1]`.
#[allow(clippy::too_many_arguments)]
pub fn max_align(
    fam_a: &ShiftedHashFamily,
    fam_b: &ShiftedHashFamily,
    sample: &SampleSet,
    cfg: &HashConfig,
    i_b: usize,
    k: usize,
    n: usize,
    counters: &mut Counters,
) -> usize {
    counters.oracle_queries += 1;
    let room = n + 1 - i_b;
    let (mut lo, mut hi) = ((2 * k).min(room), room);
    let (i_b, k) = (i_b as i64, k as i64);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if probe(fam_a, fam_a.shifts(), fam_b, sample, cfg, i_b + k, i_b + mid as i64 - k - 1, counters) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// `MaxAlign` over freshly built families; nothing is reused between pairs.
pub struct NoPrepAlign {
    k: usize,
    n: usize,
    cfg: HashConfig,
    sample: SampleSet,
    fam_a: ShiftedHashFamily,
    fam_b: ShiftedHashFamily,
    counters: Counters,
}

impl NoPrepAlign {
    /// Draws `S` with granularity `k` from the sample stream of `seed`.
    pub fn new(a: &ByteString, b: &ByteString, k: usize, seed: u64) -> Result<Self> {
        let cfg = HashConfig::from_seed(seed, a.len());
        let sample = SampleSet::draw(a.len(), k.max(1), false, &cfg)?;
        Self::with_sample(a, b, k, cfg, sample)
    }

    pub fn with_sample(a: &ByteString, b: &ByteString, k: usize, cfg: HashConfig, sample: SampleSet) -> Result<Self> {
        if k < 1 {
            return Err(invalid("k must be at least 1"));
        }
        if a.len() != b.len() {
            return Err(Error::LengthMismatch { a: a.len(), b: b.len() });
        }
        let fam_a = process_a(a, k, &sample, &cfg);
        let fam_b = process_b(b, k, &sample, &cfg);
        let counters =
            Counters { hashed_symbols: fam_a.hashed_symbols() + fam_b.hashed_symbols(), ..Counters::default() };
        Ok(NoPrepAlign { k, n: a.len(), cfg, sample, fam_a, fam_b, counters })
    }

    pub fn sample(&self) -> &SampleSet {
        &self.sample
    }
}

impl MaxAlign for NoPrepAlign {
    fn grade(&self) -> Grade {
        Grade::ApproximatelyCorrect
    }

    fn max_align(&mut self, i_b: usize) -> usize {
        max_align(&self.fam_a, &self.fam_b, &self.sample, &self.cfg, i_b, self.k, self.n, &mut self.counters)
    }

    fn counters(&self) -> Counters {
        self.counters
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute::{has_approx_alignment, max_k_alignment_bruteforce};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sqrt_step_is_ceiling() {
        for k in 1..5000usize {
            let s = sqrt_step(k);
            assert!(s * s >= k && (s - 1) * (s - 1) < k, "k = {k}");
        }
    }

    #[test]
    fn family_sizes() {
        let a = ByteString::from("abcdefgh");
        let cfg = HashConfig::from_seed(0, 8);
        let s = SampleSet::full(8);
        assert_eq!(process_a(&a, 1, &s, &cfg).shifts(), &[-1, 0, 1]);
        assert_eq!(process_b(&a, 1, &s, &cfg).shifts(), &[-1, 0, 1]);
        for (k, size) in [(4, 5), (9, 7), (10, 9)] {
            assert_eq!(process_a(&a, k, &s, &cfg).len(), size);
            assert_eq!(process_b(&a, k, &s, &cfg).len(), size);
        }
    }

    #[test]
    fn every_shift_is_covered() {
        for k in 1..=1024i64 {
            let s = sqrt_step(k as usize) as i64;
            for c in -k..=k {
                assert!((-s..=s).any(|a| (c - a * s).abs() <= s), "k={k} c={c}");
            }
        }
    }

    #[test]
    fn replay_is_bit_identical() {
        let a = ByteString::from("replay me deterministically, please");
        let x = NoPrepAlign::new(&a, &a, 4, 42).unwrap();
        let y = NoPrepAlign::new(&a, &a, 4, 42).unwrap();
        assert_eq!(x.fam_a, y.fam_a);
        assert_eq!(x.fam_b, y.fam_b);
    }

    #[test]
    fn never_below_brute_force_and_mostly_approximate() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let (n, k) = (256usize, 9usize);
        let mut misses = 0;
        for t in 0..10 {
            let a: Vec<u8> = (0..n).map(|_| rng.random_range(0..4)).collect();
            let mut b = a.clone();
            for _ in 0..5 {
                let p = rng.random_range(0..n);
                b.remove(p);
                b.insert(rng.random_range(0..n), rng.random_range(0..4));
            }
            let (a, b) = (ByteString::new(a), ByteString::new(b));
            let mut o = NoPrepAlign::new(&a, &b, k, t).unwrap();
            for i_b in 1..=n {
                let before = o.counters().hash_retrievals;
                let d = o.max_align(i_b);
                assert!(d >= max_k_alignment_bruteforce(&a, &b, i_b as i64, k as i64));
                assert!(d >= (2 * k).min(n + 1 - i_b));
                let probes = (o.counters().hash_retrievals - before) / (2 * (2 * 3 + 1));
                assert!(probes <= 9);
                if !has_approx_alignment(&a, &b, i_b as i64, d, 3 * k as i64, 3 * k) {
                    misses += 1;
                }
            }
        }
        assert!(misses <= 3, "{misses} approximate-clause misses");
    }

    #[test]
    fn planted_exact_match_is_found() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a: Vec<u8> = (0..300).map(|_| rng.random_range(0..2)).collect();
        let (k, c, i_b, d) = (16usize, -7i64, 100usize, 120usize);
        let mut b: Vec<u8> = (0..300).map(|_| rng.random_range(2..4)).collect();
        let src = (i_b as i64 + c - 1) as usize;
        b[i_b - 1..i_b - 1 + d].copy_from_slice(&a[src..src + d]);
        let (a, b) = (ByteString::new(a), ByteString::new(b));
        let cfg = HashConfig::from_seed(1, 300);
        let sample = SampleSet::draw(300, k, false, &cfg).unwrap();
        let fa = process_a(&a, k, &sample, &cfg);
        let fb = process_b(&b, k, &sample, &cfg);
        let mut ctr = Counters::default();
        let (lo, hi) = ((i_b + k) as i64, (i_b + d - k - 1) as i64);
        assert!(probe(&fa, fa.shifts(), &fb, &sample, &cfg, lo, hi, &mut ctr));
        assert_eq!(ctr.hash_retrievals, 2 * 9);
    }
}
