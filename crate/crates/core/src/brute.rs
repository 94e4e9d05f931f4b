//! Brute-force alignment oracles and approximate-alignment checkers.

use crate::exact::{banded_edit_distance, longest_common_extension};
use crate::strings::ByteString;

/// Largest `d` such that `B[i_b, i_b+d-1]` equals `A[i_a, i_a+d-1]` for some
/// `|i_a - i_b| <= k`, with both windows inside their strings. Zero if none.
pub fn max_k_alignment_bruteforce(a: &ByteString, b: &ByteString, i_b: i64, k: i64) -> usize {
    max_window_alignment(a, b, i_b - k, i_b + k, i_b)
}

/// Largest `d` such that `B[i_b, i_b+d-1]` equals `A[i, i+d-1]` for some `|i - i_a| <= l`.
pub fn max_shift_alignment_bruteforce(a: &ByteString, b: &ByteString, i_a: i64, i_b: i64, l: i64) -> usize {
    max_window_alignment(a, b, i_a - l, i_a + l, i_b)
}

fn max_window_alignment(a: &ByteString, b: &ByteString, lo: i64, hi: i64, i_b: i64) -> usize {
    (lo..=hi).map(|i_a| longest_common_extension(a, b, i_a, i_b)).max().unwrap_or(0)
}

/// Window-vs-window edit distance if it is at most `bound`, reading the
/// sentinel outside either string.
pub fn window_ed_within(a: &ByteString, b: &ByteString, i_a: i64, i_b: i64, d: usize, bound: usize) -> Option<usize> {
    let d = d as i64;
    let x = a.range(i_a, i_a + d - 1);
    let y = b.range(i_b, i_b + d - 1);
    banded_edit_distance(&x, &y, bound)
}

/// Whether `B[i_b, i_b+d-1]` is within `ed_bound` edits of some
/// `A[i_b+c, i_b+c+d-1]` with `|c| <= shift_bound`.
///
/// Shifts are tried in order of increasing `|c|`.
pub fn has_approx_alignment(
    a: &ByteString,
    b: &ByteString,
    i_b: i64,
    d: usize,
    shift_bound: i64,
    ed_bound: usize,
) -> bool {
    if d == 0 {
        return true;
    }
    let y = b.range(i_b, i_b + d as i64 - 1);
    (0..=shift_bound)
        .flat_map(|c| if c == 0 { vec![0] } else { vec![c, -c] })
        .any(|c| {
            let x = a.range(i_b + c, i_b + c + d as i64 - 1);
            banded_edit_distance(&x, &y, ed_bound).is_some()
        })
}
