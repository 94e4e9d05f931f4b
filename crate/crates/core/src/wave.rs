//! Sparsified h-wave: a `k x (2k/l + 1)` table over diagonals that are
//! multiples of `l`, advanced by `l` per edit or by a shifted-alignment
//! oracle.
//!
//! `h[i][j]` is a length of `A` such that `A[1, h]` and `B[1, h+j]` are
//! roughly `i*l` edits apart; the driver answers SMALL iff `h[k][0] >= n`.

use crate::counters::Counters;
use crate::error::{invalid, Error, Result};
use crate::exact::edit_distance_symbols;
use crate::greedy::GapVerdict;
use crate::strings::ByteString;

/// Longest exact match of `B[i_b..]` against `A` near `i_a`, possibly approximate.
pub trait MaxShiftAlign {
    /// Length `d` for 1-based `i_a`, `i_b` with `|i_a - i_b| <= k`.
    fn max_shift_align(&mut self, i_a: usize, i_b: usize) -> usize;

    fn counters(&self) -> Counters;
}

/// Nearest multiple of `l`, ties rounded down.
pub fn round_to_step(x: i64, l: i64) -> i64 {
    let q = x.div_euclid(l);
    let rem = x - q * l;
    if 2 * rem > l {
        (q + 1) * l
    } else {
        q * l
    }
}

/// Which transition produced a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Start,
    Unreached,
    /// `h[i-1][j] + l`.
    Stay,
    /// `h[i-1][j-l] + l`.
    FromBelow,
    /// `h[i-1][j+l] + l`.
    FromAbove,
    /// `h[i-1][j] + d` with the oracle's `d`.
    Oracle(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaveTable {
    k: usize,
    l: usize,
    /// Number of positive diagonals, `floor(k / l)`.
    half: usize,
    h: Vec<Option<i64>>,
    source: Vec<Source>,
}

impl WaveTable {
    fn new(k: usize, l: usize) -> Self {
        let half = k / l;
        let size = (k + 1) * (2 * half + 1);
        WaveTable { k, l, half, h: vec![None; size], source: vec![Source::Unreached; size] }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn step(&self) -> usize {
        self.l
    }

    /// Diagonal offsets, ascending.
    pub fn diagonals(&self) -> impl Iterator<Item = i64> + '_ {
        let (half, l) = (self.half as i64, self.l as i64);
        (-half..=half).map(move |t| t * l)
    }

    fn slot(&self, i: usize, j: i64) -> usize {
        let col = (j / self.l as i64 + self.half as i64) as usize;
        i * (2 * self.half + 1) + col
    }

    /// `h[i][j]`, `None` standing for minus infinity.
    pub fn get(&self, i: usize, j: i64) -> Option<i64> {
        self.h[self.slot(i, j)]
    }

    pub fn source(&self, i: usize, j: i64) -> Source {
        self.source[self.slot(i, j)]
    }

    /// Every violation of `h[i'][j'] >= h[i][j] + l(i'-i)` over pairs with
    /// `i' >= i` and `|j'-j| <= l(i'-i)`, as `((i, j), (i', j'))`.
    pub fn jump_violations(&self) -> Vec<((usize, i64), (usize, i64))> {
        let l = self.l as i64;
        let diags: Vec<i64> = self.diagonals().collect();
        let mut bad = Vec::new();
        for i in 0..=self.k {
            for &j in &diags {
                let Some(base) = self.get(i, j) else { continue };
                for i2 in i..=self.k {
                    let reach = l * (i2 - i) as i64;
                    for &j2 in &diags {
                        if (j2 - j).abs() > reach {
                            continue;
                        }
                        if self.get(i2, j2).is_none_or(|v| v < base + reach) {
                            bad.push(((i, j), (i2, j2)));
                        }
                    }
                }
            }
        }
        bad
    }

    /// Replays the recorded transitions into edit-distance upper bounds for
    /// `A[1, h]` vs `B[1, h+j]` (sentinel-padded past the end), paying each
    /// oracle jump its exact edit cost. Returns the bound table, or the first
    /// cell whose bound exceeds `10*i*l + |j|`.
    pub fn replay_bounds(&self, a: &ByteString, b: &ByteString) -> Result<Vec<Option<usize>>, String> {
        let l = self.l as i64;
        let mut bound: Vec<Option<usize>> = vec![None; self.h.len()];
        bound[self.slot(0, 0)] = Some(0);
        for i in 1..=self.k {
            for j in self.diagonals() {
                let Some(h) = self.get(i, j) else { continue };
                let prev = |jj: i64| bound[self.slot(i - 1, jj)].expect("finite source has a bound");
                let cost = match self.source(i, j) {
                    Source::Stay => prev(j) + self.l,
                    Source::FromBelow => prev(j - l) + 2 * self.l,
                    Source::FromAbove => prev(j + l) + self.l,
                    Source::Oracle(d) => {
                        let p = self.get(i - 1, j).expect("oracle jump from a finite cell");
                        let x = a.range(p + 1, p + d as i64);
                        let y = b.range(p + j + 1, p + j + d as i64);
                        prev(j) + edit_distance_symbols(&x, &y)
                    }
                    s => return Err(format!("cell ({i}, {j}) = {h} has source {s:?}")),
                };
                if cost > 10 * i * self.l + j.unsigned_abs() as usize {
                    return Err(format!("cell ({i}, {j}): bound {cost} exceeds 10il + |j|"));
                }
                let slot = self.slot(i, j);
                bound[slot] = Some(cost);
            }
        }
        Ok(bound)
    }

    /// The replayed bound for `(i, j)`, see [`WaveTable::replay_bounds`].
    pub fn bound_at(&self, bounds: &[Option<usize>], i: usize, j: i64) -> Option<usize> {
        bounds[self.slot(i, j)]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaveOutcome {
    pub verdict: GapVerdict,
    pub oracle_calls: usize,
    pub table: WaveTable,
}

/// Checks `1 <= l <= k <= n`.
pub fn check_wave_params(n: usize, k: usize, l: usize) -> Result<()> {
    if l < 1 || l > k {
        return Err(invalid(format!("step l = {l} must satisfy 1 <= l <= k = {k}")));
    }
    if k > n {
        return Err(invalid(format!("k = {k} exceeds n = {n}")));
    }
    Ok(())
}

/// Fills the sparsified wave row by row; SMALL iff `h[k][0] >= n`.
pub fn greedy_wave(
    a: &ByteString,
    b: &ByteString,
    k: usize,
    l: usize,
    oracle: &mut dyn MaxShiftAlign,
) -> Result<WaveOutcome> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { a: a.len(), b: b.len() });
    }
    let n = a.len();
    check_wave_params(n, k, l)?;
    let mut t = WaveTable::new(k, l);
    let s = t.slot(0, 0);
    t.h[s] = Some(0);
    t.source[s] = Source::Start;
    let (li, half) = (l as i64, t.half as i64);
    let mut calls = 0;
    for i in 1..=k {
        for j in (-half..=half).map(|c| c * li) {
            let here = t.get(i - 1, j);
            let mut best = here.map(|p| (p + li, Source::Stay));
            let offer = |cand: Option<i64>, src: Source, best: &mut Option<(i64, Source)>| {
                if let Some(v) = cand {
                    if best.is_none_or(|(w, _)| v > w) {
                        *best = Some((v, src));
                    }
                }
            };
            if j - li >= -(k as i64) {
                offer(t.get(i - 1, j - li).map(|p| p + li), Source::FromBelow, &mut best);
            }
            if j + li <= k as i64 {
                offer(t.get(i - 1, j + li).map(|p| p + li), Source::FromAbove, &mut best);
            }
            if let Some(p) = here {
                let (i_a, i_b) = (p + 1, p + j + 1);
                if i_a <= n as i64 && (1..=n as i64).contains(&i_b) {
                    calls += 1;
                    let d = oracle.max_shift_align(i_a as usize, i_b as usize);
                    offer(Some(p + d as i64), Source::Oracle(d), &mut best);
                }
            }
            let slot = t.slot(i, j);
            if let Some((v, src)) = best {
                t.h[slot] = Some(v);
                t.source[slot] = src;
            }
        }
    }
    let verdict = if t.get(k, 0).is_some_and(|v| v >= n as i64) { GapVerdict::Small } else { GapVerdict::Large };
    Ok(WaveOutcome { verdict, oracle_calls: calls, table: t })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute::max_shift_alignment_bruteforce;
    use crate::exact::edit_distance_exact;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    struct Exact<'a> {
        a: &'a ByteString,
        b: &'a ByteString,
        l: usize,
        counters: Counters,
    }

    impl MaxShiftAlign for Exact<'_> {
        fn max_shift_align(&mut self, i_a: usize, i_b: usize) -> usize {
            self.counters.oracle_queries += 1;
            max_shift_alignment_bruteforce(self.a, self.b, i_a as i64, i_b as i64, self.l as i64)
        }
        fn counters(&self) -> Counters {
            self.counters
        }
    }

    #[test]
    fn rounding_ties_go_down() {
        assert_eq!(round_to_step(4, 8), 0);
        assert_eq!(round_to_step(5, 8), 8);
        assert_eq!(round_to_step(-4, 8), -8);
        assert_eq!(round_to_step(-3, 8), 0);
        assert_eq!(round_to_step(12, 8), 8);
        assert_eq!(round_to_step(7, 1), 7);
    }

    #[test]
    fn identical_strings_are_small() {
        let a = ByteString::from("identical strings are small under any step");
        for (k, l) in [(4, 1), (4, 2), (4, 4), (8, 3)] {
            let mut o = Exact { a: &a, b: &a, l, counters: Counters::default() };
            let out = greedy_wave(&a, &a, k, l, &mut o).unwrap();
            assert_eq!(out.verdict, GapVerdict::Small);
            assert!(out.table.jump_violations().is_empty());
        }
    }

    #[test]
    fn coarsest_step_has_three_diagonals() {
        let a = ByteString::from("abcdefgh");
        let mut o = Exact { a: &a, b: &a, l: 4, counters: Counters::default() };
        let out = greedy_wave(&a, &a, 4, 4, &mut o).unwrap();
        assert_eq!(out.table.diagonals().collect::<Vec<_>>(), vec![-4, 0, 4]);
    }

    #[test]
    fn rejects_bad_steps() {
        let a = ByteString::from("abcdefgh");
        let mut o = Exact { a: &a, b: &a, l: 1, counters: Counters::default() };
        assert!(greedy_wave(&a, &a, 4, 0, &mut o).is_err());
        assert!(greedy_wave(&a, &a, 4, 5, &mut o).is_err());
        assert!(greedy_wave(&a, &a, 9, 1, &mut o).is_err());
    }

    #[test]
    fn initial_row_is_minus_infinity_off_the_main_diagonal() {
        let a = ByteString::from("abcdefghijkl");
        let mut o = Exact { a: &a, b: &a, l: 2, counters: Counters::default() };
        let t = greedy_wave(&a, &a, 6, 2, &mut o).unwrap().table;
        for j in t.diagonals() {
            assert_eq!(t.get(0, j), (j == 0).then_some(0));
        }
    }

    #[test]
    fn jump_property_and_replay_on_random_runs() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let n = rng.random_range(32..=128);
            let k = rng.random_range(2..=12);
            let l = rng.random_range(1..=k.min(4));
            let a: Vec<u8> = (0..n).map(|_| rng.random_range(0..3)).collect();
            let mut b = a.clone();
            for _ in 0..rng.random_range(0..20) {
                let p = rng.random_range(0..n);
                b[p] = rng.random_range(0..3);
            }
            let (a, b) = (ByteString::new(a), ByteString::new(b));
            let mut o = Exact { a: &a, b: &b, l, counters: Counters::default() };
            let out = greedy_wave(&a, &b, k, l, &mut o).unwrap();
            assert!(out.table.jump_violations().is_empty());
            assert!(out.oracle_calls <= (k + 1) * (2 * k / l + 1));
            let bounds = out.table.replay_bounds(&a, &b).unwrap();
            if out.verdict == GapVerdict::Small {
                let ed = edit_distance_exact(&a, &b);
                assert!(ed <= out.table.bound_at(&bounds, k, 0).unwrap());
                assert!(ed <= 10 * k * l);
            }
        }
    }

    #[test]
    fn unit_step_with_exact_oracle_is_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..60 {
            let n = rng.random_range(16..=96);
            let k = rng.random_range(1..=10);
            let a: Vec<u8> = (0..n).map(|_| rng.random_range(0..4)).collect();
            let mut b = a.clone();
            for _ in 0..rng.random_range(0..=12) {
                let p = rng.random_range(0..n);
                b.remove(p);
                b.insert(rng.random_range(0..n), rng.random_range(0..4));
            }
            let (a, b) = (ByteString::new(a), ByteString::new(b));
            let mut o = Exact { a: &a, b: &b, l: 1, counters: Counters::default() };
            let out = greedy_wave(&a, &b, k, 1, &mut o).unwrap();
            let ed = edit_distance_exact(&a, &b);
            if out.verdict == GapVerdict::Small {
                assert!(ed <= 10 * k);
            }
            // each exact wave step costs at most two rows here
            if ed <= k / 2 {
                assert_eq!(out.verdict, GapVerdict::Small, "ed {ed} k {k}");
            }
        }
    }
}
