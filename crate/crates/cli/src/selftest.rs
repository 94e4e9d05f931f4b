//! Reduced-size run of the invariant and oracle-equivalence checks.

use std::path::{Path, PathBuf};

use anyhow::Result;
use gapedit::brute::max_k_alignment_bruteforce;
use gapedit::decompose::decompose;
use gapedit::exact::{banded_edit_distance, edit_distance_exact, edit_distance_quadratic, exact_hwave};
use gapedit::gap::{gap_match, GapMode};
use gapedit::hash::{substream, Stream};
use gapedit::instance::{gen_disjoint, gen_planted, Instance};
use gapedit::no_prep::NoPrepAlign;
use gapedit::one_sided::{OneSidedAlign, OneSidedIndex};
use gapedit::two_sided::{TwoSidedAlign, TwoSidedIndex};
use gapedit::wave_align::{ExactShiftAlign, OneSidedShiftAlign, WaveIndex};
use gapedit::wave::greedy_wave;
use gapedit::{ByteString, GapVerdict, HashConfig, MaxAlign};
use rand::Rng;

use crate::run::Index;

pub struct Options {
    pub seed: u64,
    /// Evaluation point forced into the oracle-comparison check.
    pub force_x: Option<u64>,
    /// Extra index files whose load validation is checked.
    pub indices: Vec<PathBuf>,
}

struct Check {
    name: &'static str,
    outcome: Result<String, String>,
}

fn check(name: &'static str, f: impl FnOnce() -> Result<String, String>) -> Check {
    Check { name, outcome: f() }
}

/// Mismatches between the two-sided oracle and brute force over a few
/// planted pairs, hashing with `x` when given.
fn two_sided_mismatches(seed: u64, x: Option<u64>) -> Result<(usize, usize), String> {
    let (n, k) = (128, 6);
    let (mut bad, mut total) = (0, 0);
    for t in 0..6 {
        let inst = gen_planted(n, 3 * t as usize, 2, seed + t).map_err(|e| e.to_string())?;
        let cfg = match x {
            Some(x) => HashConfig::with_point(x, seed + t, n),
            None => HashConfig::from_seed(seed + t, n),
        };
        let idx = TwoSidedIndex::build(&inst.a, k, &cfg).map_err(|e| e.to_string())?;
        let mut o = TwoSidedAlign::new(&idx, &inst.b).map_err(|e| e.to_string())?;
        for i_b in 1..=n {
            total += 1;
            bad += (o.max_align(i_b) != max_k_alignment_bruteforce(&inst.a, &inst.b, i_b as i64, k as i64)) as usize;
        }
    }
    Ok((bad, total))
}

fn exact_oracles(seed: u64) -> Result<String, String> {
    let mut rng = substream(seed, Stream::Trial);
    for _ in 0..300 {
        let a = ByteString::new((0..rng.random_range(0..24)).map(|_| rng.random_range(0..3u8)).collect::<Vec<_>>());
        let b = ByteString::new((0..rng.random_range(0..24)).map(|_| rng.random_range(0..3u8)).collect::<Vec<_>>());
        let ed = edit_distance_exact(&a, &b);
        if ed != edit_distance_quadratic(a.as_bytes(), b.as_bytes()) {
            return Err(format!("doubling and quadratic DP disagree on {a:?} / {b:?}"));
        }
        for k in 0..=24 {
            if exact_hwave(&a, &b, k).map_err(|e| e.to_string())? != (ed as i64 <= k) {
                return Err(format!("h-wave disagrees at k = {k} on {a:?} / {b:?}"));
            }
            if banded_edit_distance(a.as_bytes(), b.as_bytes(), k as usize) != (ed <= k as usize).then_some(ed) {
                return Err(format!("banded DP disagrees at band {k}"));
            }
        }
    }
    Ok("300 pairs, every k".into())
}

fn sampled_oracles(seed: u64) -> Result<String, String> {
    let (n, k) = (192, 8);
    let mut queries = 0;
    for t in 0..4 {
        let inst = gen_planted(n, 2 + 3 * t as usize, 4, seed + t).map_err(|e| e.to_string())?;
        let (a, b) = (&inst.a, &inst.b);
        let mut np = NoPrepAlign::new(a, b, k, seed + t).map_err(|e| e.to_string())?;
        let idx = OneSidedIndex::build(a, k, seed + t).map_err(|e| e.to_string())?;
        let mut os = OneSidedAlign::new(&idx, b).map_err(|e| e.to_string())?;
        for i_b in 1..=n {
            let best = max_k_alignment_bruteforce(a, b, i_b as i64, k as i64);
            if np.max_align(i_b) < best {
                return Err(format!("no-prep oracle undershoots at i_b = {i_b}"));
            }
            let d = os.max_align(i_b);
            if best > 0 && 2 * d <= best {
                return Err(format!("one-sided oracle returns {d} <= {best}/2 at i_b = {i_b}"));
            }
            queries += 1;
        }
    }
    Ok(format!("{queries} queries never undershoot"))
}

fn gap_verdicts(seed: u64) -> Result<String, String> {
    let k = 4;
    let close = gen_planted(400, 0, 4, seed).map_err(|e| e.to_string())?;
    let far = gen_disjoint(400, seed);
    for mode in [GapMode::Noprep, GapMode::OneSided, GapMode::TwoSided] {
        for (inst, want) in [(&close, GapVerdict::Small), (&far, GapVerdict::Large)] {
            let got = gap_match(&inst.a, &inst.b, k, mode, seed, None).map_err(|e| e.to_string())?.verdict;
            if got != want {
                return Err(format!("{mode:?} answered {got} on a pair with ED = {:?}", inst.exact_ed));
            }
        }
    }
    Ok("identical pair SMALL and disjoint pair LARGE in every mode".into())
}

fn wave_invariants(seed: u64) -> Result<String, String> {
    let (n, k, l) = (160, 12, 4);
    for t in 0..4 {
        let inst = gen_planted(n, 4 * t as usize, 3, seed + t).map_err(|e| e.to_string())?;
        let (a, b) = (&inst.a, &inst.b);
        let exact = greedy_wave(a, b, k, l, &mut ExactShiftAlign::new(a, b, l)).map_err(|e| e.to_string())?;
        let idx = WaveIndex::build(a, k, l, seed + t).map_err(|e| e.to_string())?;
        let hashed = greedy_wave(a, b, k, l, &mut OneSidedShiftAlign::new(&idx, b).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        for out in [&exact, &hashed] {
            if !out.table.jump_violations().is_empty() {
                return Err(format!("jump property violated on trial {t}"));
            }
            if out.oracle_calls > (k + 1) * (2 * k / l + 1) {
                return Err(format!("{} oracle calls exceed (k+1)(2k/l+1)", out.oracle_calls));
            }
        }
        exact.table.replay_bounds(a, b)?;
    }
    Ok("jump property, call bound and replayed edit bounds hold".into())
}

fn decompositions(seed: u64) -> Result<String, String> {
    let mut rng = substream(seed, Stream::Trial);
    for t in 0..100 {
        let n = rng.random_range(1..=96);
        let k = rng.random_range(0..=10);
        let inst = gen_planted(n, rng.random_range(0..=k.min(n)), 3, seed + t).map_err(|e| e.to_string())?;
        let d = decompose(&inst.a, &inst.b, k).map_err(|e| e.to_string())?;
        d.check(&inst.a, &inst.b, k)?;
    }
    Ok("100 decompositions valid".into())
}

fn instance_replay(seed: u64, dir: &Path) -> Result<String, String> {
    let inst = gen_planted(300, 9, 4, seed).map_err(|e| e.to_string())?;
    let prefix = dir.join("replay");
    inst.write(&prefix).map_err(|e| e.to_string())?;
    let back = Instance::read(&prefix).map_err(|e| e.to_string())?;
    if back != inst || gen_planted(300, 9, 4, seed).map_err(|e| e.to_string())? != inst {
        return Err("instance did not replay".into());
    }
    Ok("instance files and regeneration identical".into())
}

/// Every index format round-trips, and a flipped byte is caught on load.
fn index_files(seed: u64, dir: &Path) -> Result<String, String> {
    let inst = gen_planted(96, 4, 4, seed).map_err(|e| e.to_string())?;
    let cfg = HashConfig::from_seed(seed, 96);
    let all = [
        ("one-sided", Index::OneSided(OneSidedIndex::build(&inst.a, 4, seed).map_err(|e| e.to_string())?)),
        ("two-sided", Index::TwoSided(TwoSidedIndex::build(&inst.a, 4, &cfg).map_err(|e| e.to_string())?)),
        ("wave", Index::Wave(WaveIndex::build(&inst.a, 4, 2, seed).map_err(|e| e.to_string())?)),
    ];
    for (name, ix) in &all {
        let path = dir.join(format!("{name}.idx"));
        ix.save(&path).map_err(|e| e.to_string())?;
        Index::load(&path).map_err(|e| format!("{name}: clean file rejected: {e:#}"))?;
        let mut bytes = std::fs::read(&path).map_err(|e| e.to_string())?;
        let mid = bytes.len() / 2;
        bytes[mid] ^= 0x40;
        std::fs::write(&path, &bytes).map_err(|e| e.to_string())?;
        if Index::load(&path).is_ok() {
            return Err(format!("{name}: corrupted file loaded without error"));
        }
    }
    Ok("three formats round-trip; corrupted copies rejected".into())
}

/// Runs every check, printing one line each. Returns whether all passed.
pub fn run(opts: &Options) -> Result<bool> {
    let dir = tempfile::tempdir()?;
    let seed = opts.seed;
    let mut checks = vec![
        check("exact oracles agree", || exact_oracles(seed)),
        check("two-sided oracle matches brute force", || {
            let (bad, total) = two_sided_mismatches(seed, opts.force_x)?;
            let forced = opts.force_x.map(|x| format!(" with forced x = {x}")).unwrap_or_default();
            if bad == 0 {
                Ok(format!("{total} queries{forced}"))
            } else {
                Err(format!("{bad} of {total} queries disagree{forced}"))
            }
        }),
        check("collision fault is detectable", || {
            // x = 1 hashes a substring to its symbol sum, so anagrams collide
            let (bad, total) = two_sided_mismatches(seed, Some(1))?;
            if bad > 0 {
                Ok(format!("forced x = 1 caught on {bad} of {total} queries"))
            } else {
                Err("forced x = 1 went unnoticed".into())
            }
        }),
        check("sampled oracles never undershoot", || sampled_oracles(seed)),
        check("gap verdicts on extreme pairs", || gap_verdicts(seed)),
        check("wave table invariants", || wave_invariants(seed)),
        check("decomposition invariants", || decompositions(seed)),
        check("instance replay", || instance_replay(seed, dir.path())),
        check("index load validation", || index_files(seed, dir.path())),
    ];
    for path in &opts.indices {
        checks.push(Check {
            name: "index file loads",
            outcome: Index::load(path).map(|_| path.display().to_string()).map_err(|e| format!("{e:#}")),
        });
    }
    let mut ok = true;
    for c in &checks {
        match &c.outcome {
            Ok(detail) => println!("PASS {}: {detail}", c.name),
            Err(why) => {
                ok = false;
                println!("FAIL {}: {why}", c.name);
            }
        }
    }
    Ok(ok)
}
