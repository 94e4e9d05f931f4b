//! Small helpers shared by the acceptance suite.

use std::io::Write;

/// Prints one verdict line straight to stderr, past the test harness's
/// output capture, then fails the test if `pass` is false.
pub fn report(id: u32, title: &str, pass: bool, detail: String) {
    note(id, &format!("{} {title}: {detail}", if pass { "PASS" } else { "FAIL" }));
    assert!(pass, "criterion {id} failed: {detail}");
}

/// Uncaptured informational line tagged with the criterion number.
pub fn note(id: u32, text: &str) {
    let _ = std::io::stderr().write_all(format!("[acceptance {id:>2}] {text}\n").as_bytes());
}

pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        return 0;
    }
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

/// Least-squares fit of `y` on the columns of `xs` plus an intercept.
/// Returns the slopes followed by the intercept.
pub fn least_squares(xs: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let p = xs[0].len() + 1;
    let mut m = vec![vec![0.0; p + 1]; p];
    for (row, &yy) in xs.iter().zip(y) {
        let mut r = row.clone();
        r.push(1.0);
        for i in 0..p {
            for j in 0..p {
                m[i][j] += r[i] * r[j];
            }
            m[i][p] += r[i] * yy;
        }
    }
    for c in 0..p {
        let piv = (c..p).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs())).unwrap();
        m.swap(c, piv);
        for r in 0..p {
            if r != c {
                let f = m[r][c] / m[c][c];
                for j in c..=p {
                    m[r][j] -= f * m[c][j];
                }
            }
        }
    }
    (0..p).map(|i| m[i][p] / m[i][i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_plane() {
        let xs: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64, (i * i % 5) as f64]).collect();
        let y: Vec<f64> = xs.iter().map(|r| 2.0 * r[0] - 0.5 * r[1] + 3.0).collect();
        let fit = least_squares(&xs, &y);
        for (got, want) in fit.iter().zip([2.0, -0.5, 3.0]) {
            assert!((got - want).abs() < 1e-9);
        }
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!([1, 2, 3, 4, 5, 4096, 4097].map(ceil_log2), [0, 1, 2, 2, 3, 12, 13]);
    }
}
