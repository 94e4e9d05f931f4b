//! Single trials of the gap and wave tests, plus index handling.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use gapedit::gap::{gap_noprep, gap_one_sided, gap_two_sided, GapMode};
use gapedit::instance::Instance;
use gapedit::one_sided::OneSidedIndex;
use gapedit::two_sided::TwoSidedIndex;
use gapedit::wave_align::{gap_wave, WaveIndex, WaveMode};
use gapedit::{Counters, HashConfig};

use crate::record::{RunRecord, SCHEMA};

/// A prebuilt index of `A`, whichever kind the mode needs.
pub enum Index {
    OneSided(OneSidedIndex),
    TwoSided(TwoSidedIndex),
    Wave(WaveIndex),
}

impl Index {
    fn describe(&self) -> &'static str {
        match self {
            Index::OneSided(_) => "one-sided",
            Index::TwoSided(_) => "two-sided",
            Index::Wave(_) => "wave",
        }
    }

    /// Reads any index file, dispatching on its magic bytes.
    pub fn load(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).with_context(|| format!("reading index {}", path.display()))?;
        let loaded = match bytes.get(..6) {
            Some(b"GEDT1S") => OneSidedIndex::from_bytes(&bytes).map(Index::OneSided),
            Some(b"GEDT2S") => TwoSidedIndex::from_bytes(&bytes).map(Index::TwoSided),
            Some(b"GEDTWV") => WaveIndex::from_bytes(&bytes).map(Index::Wave),
            _ => bail!("{} is not a gapedit index (unknown magic)", path.display()),
        };
        loaded.with_context(|| format!("loading index {}", path.display()))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        match self {
            Index::OneSided(ix) => ix.save(path),
            Index::TwoSided(ix) => ix.save(path),
            Index::Wave(ix) => ix.save(path),
        }
        .with_context(|| format!("writing index {}", path.display()))
    }

    fn n_k(&self) -> (usize, usize) {
        match self {
            Index::OneSided(ix) => (ix.n(), ix.k()),
            Index::TwoSided(ix) => (ix.n(), ix.k()),
            Index::Wave(ix) => (ix.n(), ix.k()),
        }
    }

    fn build_counters(&self) -> Counters {
        match self {
            Index::OneSided(ix) => ix.build_counters(),
            Index::TwoSided(ix) => ix.build_counters(),
            Index::Wave(ix) => ix.build_counters(),
        }
    }
}

/// What a gap or wave trial needs besides the strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    Gap(GapMode),
    Wave(WaveMode, usize),
}

impl Algo {
    pub fn name(&self) -> &'static str {
        match self {
            Algo::Gap(_) => "gap",
            Algo::Wave(..) => "wave",
        }
    }

    pub fn mode(&self) -> &'static str {
        let noprep = matches!(self, Algo::Gap(GapMode::Noprep) | Algo::Wave(WaveMode::Noprep, _));
        let one = matches!(self, Algo::Gap(GapMode::OneSided) | Algo::Wave(WaveMode::OneSided, _));
        if noprep {
            "noprep"
        } else if one {
            "one-sided"
        } else {
            "two-sided"
        }
    }

    pub fn step(&self) -> Option<usize> {
        match self {
            Algo::Gap(_) => None,
            Algo::Wave(_, l) => Some(*l),
        }
    }

    fn needs_index(&self) -> bool {
        self.mode() != "noprep"
    }
}

/// Builds the index `algo` needs for `a` from `seed`.
pub fn build_index(inst: &Instance, k: usize, algo: Algo, seed: u64, two_sided_limit: usize) -> Result<Option<Index>> {
    let a = &inst.a;
    Ok(match algo {
        Algo::Gap(GapMode::Noprep) | Algo::Wave(WaveMode::Noprep, _) => None,
        Algo::Gap(GapMode::OneSided) => Some(Index::OneSided(OneSidedIndex::build(a, k, seed)?)),
        Algo::Gap(GapMode::TwoSided) => {
            let cfg = HashConfig::from_seed(seed, a.len());
            Some(Index::TwoSided(TwoSidedIndex::build_with_limit(a, k, &cfg, two_sided_limit)?))
        }
        Algo::Wave(_, l) => Some(Index::Wave(WaveIndex::build(a, k, l, seed)?)),
    })
}

/// Loads `path` if it exists, otherwise builds the index and writes it there.
/// The flag says whether the index was freshly built.
pub fn obtain_index(
    path: &Path,
    inst: &Instance,
    k: usize,
    algo: Algo,
    seed: u64,
    two_sided_limit: usize,
) -> Result<(Index, bool)> {
    if path.exists() {
        let ix = Index::load(path)?;
        let kind_ok = matches!(
            (&ix, algo),
            (Index::OneSided(_), Algo::Gap(GapMode::OneSided))
                | (Index::TwoSided(_), Algo::Gap(GapMode::TwoSided))
                | (Index::Wave(_), Algo::Wave(..))
        );
        if !kind_ok {
            bail!("{} holds a {} index, which {} {} cannot use", path.display(), ix.describe(), algo.name(), algo.mode());
        }
        if ix.n_k() != (inst.n(), k) {
            let (n, ik) = ix.n_k();
            bail!("{} was built for n = {n}, k = {ik}; this run has n = {}, k = {k}", path.display(), inst.n());
        }
        if let (Index::Wave(w), Algo::Wave(_, l)) = (&ix, algo) {
            if w.step() != l {
                bail!("{} was built for l = {}; this run has l = {l}", path.display(), w.step());
            }
        }
        return Ok((ix, false));
    }
    let ix = build_index(inst, k, algo, seed, two_sided_limit)?.context("mode takes no index")?;
    ix.save(path)?;
    Ok((ix, true))
}

pub struct Trial<'a> {
    pub inst: &'a Instance,
    pub input: Option<String>,
    pub k: usize,
    pub algo: Algo,
    pub seed: u64,
    pub trial: usize,
    pub two_sided_limit: usize,
}

/// Runs one trial. `shared` is a prebuilt index; `fresh` says whether its
/// build cost belongs to this record.
pub fn run_trial(t: &Trial, shared: Option<(&Index, bool)>, index_path: Option<PathBuf>) -> Result<RunRecord> {
    let (a, b) = (&t.inst.a, &t.inst.b);
    let start = Instant::now();
    let built;
    let (index, fresh) = match shared {
        Some((ix, fresh)) => (Some(ix), fresh),
        None if t.algo.needs_index() => {
            built = build_index(t.inst, t.k, t.algo, t.seed, t.two_sided_limit)?;
            (built.as_ref(), true)
        }
        None => (None, false),
    };
    let (verdict, mut prep, query) = match (t.algo, index) {
        (Algo::Gap(GapMode::Noprep), _) => {
            let r = gap_noprep(a, b, t.k, t.seed, false)?;
            (r.verdict, r.preprocessing, r.query)
        }
        (Algo::Gap(GapMode::OneSided), Some(Index::OneSided(ix))) => {
            let r = gap_one_sided(ix, a, b, false)?;
            (r.verdict, r.preprocessing, r.query)
        }
        (Algo::Gap(GapMode::TwoSided), Some(Index::TwoSided(ix))) => {
            let r = gap_two_sided(ix, a, b, false)?;
            (r.verdict, r.preprocessing, r.query)
        }
        (Algo::Wave(mode, l), ix) => {
            let ix = match ix {
                Some(Index::Wave(w)) => Some(w),
                None => None,
                Some(other) => bail!("wave mode cannot use a {} index", other.describe()),
            };
            let r = gap_wave(a, b, t.k, l, mode, t.seed, ix)?;
            (r.outcome.verdict, r.preprocessing, r.query)
        }
        (algo, _) => bail!("{} {} needs a matching index", algo.name(), algo.mode()),
    };
    if let (Some(ix), false) = (index, fresh) {
        // a loaded index cost nothing to build in this run; keep only the
        // B-side work some modes fold into preprocessing
        let mut without = prep;
        let build = ix.build_counters();
        without.hashed_symbols -= build.hashed_symbols;
        without.hash_retrievals -= build.hash_retrievals;
        without.table_inserts -= build.table_inserts;
        without.table_lookups -= build.table_lookups;
        without.oracle_queries -= build.oracle_queries;
        prep = without;
    }
    Ok(RunRecord {
        schema: SCHEMA,
        algorithm: t.algo.name().into(),
        mode: t.algo.mode().into(),
        input: t.input.clone(),
        n: t.inst.n(),
        k: t.k,
        l: t.algo.step(),
        seed: t.seed,
        trial: t.trial,
        verdict: Some(verdict),
        exact_ed: t.inst.exact_ed,
        wall_time_s: start.elapsed().as_secs_f64(),
        counters: query,
        preprocessing: prep,
        index: index_path,
    })
}

/// The analysis assumes `k < sqrt(n)`; larger `k` still runs.
pub fn warn_large_k(n: usize, k: usize) {
    if k * k > n {
        eprintln!("warning: k = {k} exceeds sqrt(n) = {:.1}; guarantees assume k < sqrt(n)", (n as f64).sqrt());
    }
}
