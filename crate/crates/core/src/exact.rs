//! Exact edit-distance oracles.
//!
//! Everything here is ground truth for the randomized back-ends: a plain
//! quadratic DP, Ukkonen-style banded DP with band doubling, the exact
//! h-wave, Hamming distance and an optimal edit script by traceback.

use crate::error::{invalid, Result};
use crate::strings::ByteString;

const INF: usize = usize::MAX / 4;

/// Classic `O(|a| |b|)` two-row edit distance.
pub fn edit_distance_quadratic<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, x) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(x != y);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Edit distance restricted to the diagonal band `|i - j| <= band`.
///
/// Returns `Some(d)` exactly when `ED(a, b) = d <= band`; any alignment
/// with at most `band` edits stays inside the band, so the value is exact
/// in that case. Runs in `O(min(|a|, |b|) * band)`.
pub fn banded_edit_distance<T: PartialEq>(a: &[T], b: &[T], band: usize) -> Option<usize> {
    let (n, m) = (a.len(), b.len());
    if n.abs_diff(m) > band {
        return None;
    }
    let width = 2 * band + 1;
    // slot t of row i holds column j = i + t - band
    let mut prev = vec![INF; width + 1];
    let mut cur = vec![INF; width + 1];
    for t in 0..width {
        let j = t as i64 - band as i64;
        if (0..=m as i64).contains(&j) {
            prev[t] = j as usize;
        }
    }
    for i in 1..=n {
        let mut row_min = INF;
        for t in 0..width {
            let j = i as i64 + t as i64 - band as i64;
            if j < 0 || j > m as i64 {
                cur[t] = INF;
                continue;
            }
            let j = j as usize;
            let v = if j == 0 {
                i
            } else {
                let diag = prev[t] + usize::from(a[i - 1] != b[j - 1]);
                let up = prev[t + 1] + 1;
                let left = if t > 0 { cur[t - 1] + 1 } else { INF };
                diag.min(up).min(left)
            };
            cur[t] = v;
            row_min = row_min.min(v);
        }
        if row_min > band {
            return None;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    let t = (m as i64 - n as i64 + band as i64) as usize;
    Some(prev[t]).filter(|&d| d <= band)
}

/// `ED(a, b)` over arbitrary symbol slices, by band doubling.
pub fn edit_distance_symbols<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut band = a.len().abs_diff(b.len()).max(1);
    loop {
        if let Some(d) = banded_edit_distance(a, b, band) {
            return d;
        }
        if band >= a.len().max(b.len()) {
            return edit_distance_quadratic(a, b);
        }
        band *= 2;
    }
}

/// `ED(A, B)` in `O(n * min(n, ED))` time.
pub fn edit_distance_exact(a: &ByteString, b: &ByteString) -> usize {
    edit_distance_symbols(a.as_bytes(), b.as_bytes())
}

/// `Some(ED(A, B))` if it is at most `bound`, otherwise `None`.
pub fn edit_distance_within(a: &ByteString, b: &ByteString, bound: usize) -> Option<usize> {
    banded_edit_distance(a.as_bytes(), b.as_bytes(), bound)
}

/// Number of mismatching positions in `[i, j]`, reading the sentinel out of range.
pub fn hamming(a: &ByteString, b: &ByteString, i: i64, j: i64) -> usize {
    (i..=j).filter(|&p| a.at(p) != b.at(p)).count()
}

/// Longest `d` with `A[ia .. ia+d-1] = B[ib .. ib+d-1]`, stopping at either string's end.
pub fn longest_common_extension(a: &ByteString, b: &ByteString, ia: i64, ib: i64) -> usize {
    if ia < 1 || ib < 1 {
        return 0;
    }
    let (x, y) = (a.as_bytes(), b.as_bytes());
    let (ia, ib) = ((ia - 1) as usize, (ib - 1) as usize);
    if ia >= x.len() || ib >= y.len() {
        return 0;
    }
    x[ia..].iter().zip(&y[ib..]).take_while(|(p, q)| p == q).count()
}

/// Exact h-wave: decides `ED(A, B) <= k` with an `O(k^2)`-cell table.
///
/// `h[i][j]` is the furthest prefix length of `A` that aligns against the
/// prefix of `B` of length `h - j` with at most `i` edits, after sliding
/// along the diagonal as far as the strings agree.
pub fn exact_hwave(a: &ByteString, b: &ByteString, k: i64) -> Result<bool> {
    if k < 0 {
        return Err(invalid(format!("k must be nonnegative, got {k}")));
    }
    let (n, m) = (a.len() as i64, b.len() as i64);
    let target = n - m;
    if target.abs() > k {
        return Ok(false);
    }
    let width = (2 * k + 1) as usize;
    let slot = |j: i64| (j + k) as usize;
    let slide = |h: i64, j: i64| -> i64 {
        let h = h.min(n).min(m + j);
        h + longest_common_extension(a, b, h + 1, h - j + 1) as i64
    };
    let mut prev: Vec<Option<i64>> = vec![None; width];
    prev[slot(0)] = Some(slide(0, 0));
    if prev[slot(target)] == Some(n) {
        return Ok(true);
    }
    let mut cur = vec![None; width];
    for _ in 1..=k {
        for j in -k..=k {
            let from_left = if j > -k { prev[slot(j - 1)].map(|h| h + 1) } else { None };
            let from_same = prev[slot(j)].map(|h| h + 1);
            let from_right = if j < k { prev[slot(j + 1)] } else { None };
            cur[slot(j)] = from_left
                .max(from_same)
                .max(from_right)
                .filter(|&h| h >= j)
                .map(|h| slide(h, j));
        }
        std::mem::swap(&mut prev, &mut cur);
        if prev[slot(target)] == Some(n) {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum EditKind {
    Insert,
    Delete,
    Substitute,
}

/// One edit, positioned in the coordinates of the string it is applied to.
///
/// `Insert` places `symbol` so that it becomes position `position`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct EditOp {
    pub kind: EditKind,
    pub position: usize,
    pub symbol: Option<u8>,
}

/// Edits applied in order; each position refers to the string as it is
/// after the previous edits.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EditScript {
    pub ops: Vec<EditOp>,
}

impl EditScript {
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn apply(&self, source: &ByteString) -> ByteString {
        let mut s = source.as_bytes().to_vec();
        for op in &self.ops {
            apply_op(&mut s, op);
        }
        ByteString::new(s)
    }
}

pub(crate) fn apply_op(s: &mut Vec<u8>, op: &EditOp) {
    let p = op.position - 1;
    match op.kind {
        EditKind::Insert => s.insert(p, op.symbol.expect("insert carries a symbol")),
        EditKind::Delete => {
            s.remove(p);
        }
        EditKind::Substitute => s[p] = op.symbol.expect("substitute carries a symbol"),
    }
}

/// An optimal script transforming `A` into `B`, from a full-table traceback.
///
/// Ops come out right to left, so every position is valid when the ops are
/// applied in order.
pub fn optimal_edit_script(a: &ByteString, b: &ByteString) -> EditScript {
    let (x, y) = (a.as_bytes(), b.as_bytes());
    let (n, m) = (x.len(), y.len());
    let w = m + 1;
    let mut dp = vec![0usize; (n + 1) * w];
    for j in 0..=m {
        dp[j] = j;
    }
    for i in 1..=n {
        dp[i * w] = i;
        for j in 1..=m {
            let sub = dp[(i - 1) * w + j - 1] + usize::from(x[i - 1] != y[j - 1]);
            let del = dp[(i - 1) * w + j] + 1;
            let ins = dp[i * w + j - 1] + 1;
            dp[i * w + j] = sub.min(del).min(ins);
        }
    }
    let mut ops = Vec::with_capacity(dp[n * w + m]);
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = dp[i * w + j];
        if i > 0 && j > 0 && here == dp[(i - 1) * w + j - 1] + usize::from(x[i - 1] != y[j - 1]) {
            if x[i - 1] != y[j - 1] {
                ops.push(EditOp { kind: EditKind::Substitute, position: i, symbol: Some(y[j - 1]) });
            }
            i -= 1;
            j -= 1;
        } else if i > 0 && here == dp[(i - 1) * w + j] + 1 {
            ops.push(EditOp { kind: EditKind::Delete, position: i, symbol: None });
            i -= 1;
        } else {
            ops.push(EditOp { kind: EditKind::Insert, position: i + 1, symbol: Some(y[j - 1]) });
            j -= 1;
        }
    }
    EditScript { ops }
}
