//! Grid runs aggregated into CSV tables.

use std::io::Write;

use anyhow::Result;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::record::RunRecord;

/// Mean and two-sided 95% Student-t interval of one column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub lo: f64,
    pub hi: f64,
}

pub fn summarize(xs: &[f64]) -> Summary {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return Summary { mean, lo: mean, hi: mean };
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let t = StudentsT::new(0.0, 1.0, n - 1.0).unwrap().inverse_cdf(0.975);
    let half = t * (var / n).sqrt();
    Summary { mean, lo: mean - half, hi: mean + half }
}

#[derive(Debug, Serialize)]
struct Row<'a> {
    algorithm: &'a str,
    mode: &'a str,
    n: usize,
    k: usize,
    l: String,
    trials: usize,
    small_fraction: f64,
    oracle_queries_mean: f64,
    oracle_queries_lo: f64,
    oracle_queries_hi: f64,
    hash_retrievals_mean: f64,
    hash_retrievals_lo: f64,
    hash_retrievals_hi: f64,
    hash_work_mean: f64,
    hash_work_lo: f64,
    hash_work_hi: f64,
    table_lookups_mean: f64,
    table_lookups_lo: f64,
    table_lookups_hi: f64,
    preprocessing_hash_work_mean: f64,
    wall_time_s_mean: f64,
    wall_time_s_lo: f64,
    wall_time_s_hi: f64,
}

/// One grid cell: every record shares (algorithm, mode, n, k, l).
pub fn write_table(cells: &[Vec<RunRecord>], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for recs in cells {
        let Some(first) = recs.first() else { continue };
        let col = |f: &dyn Fn(&RunRecord) -> f64| summarize(&recs.iter().map(f).collect::<Vec<_>>());
        let oq = col(&|r| r.counters.oracle_queries as f64);
        let hr = col(&|r| r.counters.hash_retrievals as f64);
        let hw = col(&|r| r.counters.hash_work() as f64);
        let tl = col(&|r| r.counters.table_lookups as f64);
        let pw = col(&|r| r.preprocessing.hash_work() as f64);
        let wt = col(&|r| r.wall_time_s);
        let small = recs.iter().filter(|r| r.verdict == Some(gapedit::GapVerdict::Small)).count();
        w.serialize(Row {
            algorithm: &first.algorithm,
            mode: &first.mode,
            n: first.n,
            k: first.k,
            l: first.l.map(|l| l.to_string()).unwrap_or_default(),
            trials: recs.len(),
            small_fraction: small as f64 / recs.len() as f64,
            oracle_queries_mean: oq.mean,
            oracle_queries_lo: oq.lo,
            oracle_queries_hi: oq.hi,
            hash_retrievals_mean: hr.mean,
            hash_retrievals_lo: hr.lo,
            hash_retrievals_hi: hr.hi,
            hash_work_mean: hw.mean,
            hash_work_lo: hw.lo,
            hash_work_hi: hw.hi,
            table_lookups_mean: tl.mean,
            table_lookups_lo: tl.lo,
            table_lookups_hi: tl.hi,
            preprocessing_hash_work_mean: pw.mean,
            wall_time_s_mean: wt.mean,
            wall_time_s_lo: wt.lo,
            wall_time_s_hi: wt.hi,
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Runs `trial(t)` for every trial index on the current pool, in order.
pub fn run_cell<F>(trials: usize, trial: F) -> Result<Vec<RunRecord>>
where
    F: Fn(usize) -> Result<RunRecord> + Sync + Send,
{
    (0..trials).into_par_iter().map(trial).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_brackets_mean() {
        let s = summarize(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        // t(0.975, 3) = 3.182..., sd/sqrt(n) = 0.6455
        assert!((s.hi - s.mean - 2.054).abs() < 1e-3, "{s:?}");
        assert!((s.mean - s.lo - 2.054).abs() < 1e-3);
    }

    #[test]
    fn single_sample_has_zero_width() {
        let s = summarize(&[7.0]);
        assert_eq!((s.lo, s.mean, s.hi), (7.0, 7.0, 7.0));
    }
}
