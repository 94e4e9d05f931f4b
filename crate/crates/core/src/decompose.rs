//! Interval decomposition of two close strings.
//!
//! If `ED(A, B) <= k`, both strings split into `2k+1` intervals with a
//! monotone partial matching: matched pairs are equal substrings whose
//! starts differ by at most `k`, unmatched intervals have length at most 1.
//! The constructor replays an optimal edit script one edit at a time,
//! splitting the interval each edit lands in.

use crate::error::{Error, Result};
use crate::exact::{optimal_edit_script, EditKind, EditOp};
use crate::strings::ByteString;

/// Half-open 1-based range `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
}

impl Interval {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    fn shifted(self, by: isize) -> Self {
        Interval { start: (self.start as isize + by) as usize, end: (self.end as isize + by) as usize }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub intervals_a: Vec<Interval>,
    pub intervals_b: Vec<Interval>,
    /// `matching[t] = Some(u)` pairs `intervals_a[t]` with `intervals_b[u]`.
    pub matching: Vec<Option<usize>>,
}

/// Builds a decomposition of `(A, B)` with parameter `k`.
pub fn decompose(a: &ByteString, b: &ByteString, k: usize) -> Result<Decomposition> {
    let script = optimal_edit_script(a, b);
    if script.len() > k {
        return Err(Error::DistanceExceedsBound { bound: k });
    }
    let whole = Interval { start: 1, end: a.len() + 1 };
    let mut ia = vec![whole];
    let mut ib = vec![whole];
    let mut matched = vec![true];
    for op in &script.ops {
        split_at_edit(&mut ia, &mut ib, &mut matched, op);
    }
    // pad with empty unmatched intervals so both sides have exactly 2k+1 parts
    while ia.len() < 2 * k + 1 {
        ia.push(Interval { start: a.len() + 1, end: a.len() + 1 });
        ib.push(Interval { start: b.len() + 1, end: b.len() + 1 });
        matched.push(false);
    }
    let matching = matched.iter().enumerate().map(|(t, &m)| m.then_some(t)).collect();
    Ok(Decomposition { intervals_a: ia, intervals_b: ib, matching })
}

/// Index of the B-side interval an edit at `op.position` falls into.
fn locate(ib: &[Interval], op: &EditOp) -> usize {
    let p = op.position;
    match op.kind {
        EditKind::Substitute | EditKind::Delete => {
            ib.iter().position(|iv| iv.start <= p && p < iv.end).expect("edit position inside the string")
        }
        // an insertion on a boundary goes to the interval on its left
        EditKind::Insert => ib.iter().position(|iv| iv.start < p && p <= iv.end).unwrap_or(0),
    }
}

fn split_at_edit(ia: &mut Vec<Interval>, ib: &mut Vec<Interval>, matched: &mut Vec<bool>, op: &EditOp) {
    let t = locate(ib, op);
    let p = op.position;
    let Interval { start: s, end: e } = ib[t];
    let (b_parts, tail_shift) = match op.kind {
        EditKind::Substitute => ([(s, p), (p, p + 1), (p + 1, e)], 0),
        EditKind::Delete => ([(s, p), (p, p), (p, e - 1)], -1),
        EditKind::Insert => ([(s, p), (p, p + 1), (p + 1, e + 1)], 1),
    };
    let a_iv = ia[t];
    let a_parts = if matched[t] {
        let cut = a_iv.start + (p - s);
        match op.kind {
            EditKind::Substitute | EditKind::Delete => [(a_iv.start, cut), (cut, cut + 1), (cut + 1, a_iv.end)],
            EditKind::Insert => [(a_iv.start, cut), (cut, cut), (cut, a_iv.end)],
        }
    } else {
        [(a_iv.start, a_iv.end), (a_iv.end, a_iv.end), (a_iv.end, a_iv.end)]
    };
    let was_matched = matched[t];
    let to_iv = |(start, end): (usize, usize)| Interval { start, end };
    ia.splice(t..=t, a_parts.map(to_iv));
    ib.splice(t..=t, b_parts.map(to_iv));
    matched.splice(t..=t, [was_matched, false, was_matched]);
    for iv in ib.iter_mut().skip(t + 3) {
        *iv = iv.shifted(tail_shift);
    }
}

impl Decomposition {
    /// Checks every structural invariant against the strings; `Err` names the first violation.
    pub fn check(&self, a: &ByteString, b: &ByteString, k: usize) -> Result<(), String> {
        check_partition(&self.intervals_a, a.len(), "A")?;
        check_partition(&self.intervals_b, b.len(), "B")?;
        if self.intervals_a.len() > 2 * k + 1 || self.intervals_b.len() > 2 * k + 1 {
            return Err(format!(
                "{} / {} intervals exceed 2k+1 = {}",
                self.intervals_a.len(),
                self.intervals_b.len(),
                2 * k + 1
            ));
        }
        if self.matching.len() != self.intervals_a.len() {
            return Err("matching length differs from A's interval count".into());
        }
        let mut b_used = vec![false; self.intervals_b.len()];
        let mut last: Option<(usize, usize)> = None;
        for (t, m) in self.matching.iter().enumerate() {
            let ia = self.intervals_a[t];
            match *m {
                None => {
                    if ia.len() > 1 {
                        return Err(format!("unmatched A interval {t} has length {}", ia.len()));
                    }
                }
                Some(u) => {
                    let ib = *self.intervals_b.get(u).ok_or(format!("match {t} -> {u} out of range"))?;
                    if std::mem::replace(&mut b_used[u], true) {
                        return Err(format!("B interval {u} matched twice"));
                    }
                    if let Some((pt, pu)) = last {
                        if !(pt < t && pu < u) {
                            return Err(format!("matching not monotone at {t} -> {u}"));
                        }
                    }
                    last = Some((t, u));
                    if ia.start.abs_diff(ib.start) > k {
                        return Err(format!("pair {t} -> {u} shifted by more than k"));
                    }
                    let xa = &a.as_bytes()[ia.start - 1..ia.end - 1];
                    let xb = &b.as_bytes()[ib.start - 1..ib.end - 1];
                    if xa != xb {
                        return Err(format!("pair {t} -> {u} is not an exact match"));
                    }
                }
            }
        }
        for (u, used) in b_used.iter().enumerate() {
            if !used && self.intervals_b[u].len() > 1 {
                return Err(format!("unmatched B interval {u} has length {}", self.intervals_b[u].len()));
            }
        }
        Ok(())
    }
}

fn check_partition(ivs: &[Interval], n: usize, side: &str) -> Result<(), String> {
    let mut at = 1;
    for (t, iv) in ivs.iter().enumerate() {
        if iv.start != at || iv.end < iv.start {
            return Err(format!("{side} interval {t} = {iv:?} breaks contiguity at {at}"));
        }
        at = iv.end;
    }
    if at != n + 1 {
        return Err(format!("{side} intervals cover [1, {at}) instead of [1, {})", n + 1));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::apply_op;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identical_strings_give_one_matched_pair() {
        let a = ByteString::from("hello world");
        let d = decompose(&a, &a, 0).unwrap();
        assert_eq!(d.intervals_a, vec![Interval { start: 1, end: 12 }]);
        assert_eq!(d.matching, vec![Some(0)]);
        d.check(&a, &a, 0).unwrap();
    }

    #[test]
    fn one_substitution_makes_three_intervals() {
        let a = ByteString::from("abcdef");
        let b = ByteString::from("abXdef");
        let d = decompose(&a, &b, 1).unwrap();
        assert_eq!(d.intervals_b.len(), 3);
        assert_eq!(d.intervals_b[1], Interval { start: 3, end: 4 });
        assert_eq!(d.matching, vec![Some(0), None, Some(2)]);
        d.check(&a, &b, 1).unwrap();
    }

    #[test]
    fn rejects_too_small_bound() {
        let a = ByteString::from("abcd");
        let b = ByteString::from("dcba");
        assert!(matches!(decompose(&a, &b, 2), Err(Error::DistanceExceedsBound { bound: 2 })));
    }

    #[test]
    fn checker_catches_broken_decompositions() {
        let a = ByteString::from("abcdef");
        let b = ByteString::from("abXdef");
        let mut d = decompose(&a, &b, 1).unwrap();
        d.matching[1] = Some(1);
        assert!(d.check(&a, &b, 1).is_err());
        let mut d = decompose(&a, &b, 1).unwrap();
        d.intervals_b[0].end += 1;
        assert!(d.check(&a, &b, 1).is_err());
    }

    #[test]
    fn random_scripts_satisfy_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..100 {
            let n = rng.random_range(0..60);
            let a: Vec<u8> = (0..n).map(|_| rng.random_range(b'a'..b'e')).collect();
            let mut b = a.clone();
            let e = rng.random_range(0..=10);
            for _ in 0..e {
                let kind = match rng.random_range(0..3) {
                    0 if !b.is_empty() => EditKind::Substitute,
                    1 if !b.is_empty() => EditKind::Delete,
                    _ => EditKind::Insert,
                };
                let hi = if kind == EditKind::Insert { b.len() + 1 } else { b.len() };
                let op = EditOp { kind, position: rng.random_range(1..=hi), symbol: Some(rng.random_range(b'a'..b'e')) };
                apply_op(&mut b, &op);
            }
            let (a, b) = (ByteString::new(a), ByteString::new(b));
            let d = decompose(&a, &b, e).unwrap();
            d.check(&a, &b, e).unwrap();
        }
    }
}
