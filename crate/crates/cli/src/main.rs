//! `gapedit`: instance generation, gap and wave runs, benchmarks and a self-test.

mod bench;
mod record;
mod run;
mod selftest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gapedit::exact::{edit_distance_exact, exact_hwave};
use gapedit::gap::GapMode;
use gapedit::instance::{gen_disjoint, gen_large_side, gen_periodic, gen_planted_with, gen_random_pair, Instance, PlantMode};
use gapedit::two_sided::DEFAULT_LIMIT;
use gapedit::wave_align::WaveMode;
use gapedit::{Counters, GapVerdict};
use rayon::prelude::*;

use record::{RecordSink, RunRecord, SCHEMA};
use run::{obtain_index, run_trial, warn_large_k, Algo, Trial};

#[derive(Parser)]
#[command(name = "gapedit", version, about = "Sublinear gap edit distance experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write labeled instance files `<out>.a`, `<out>.b`, `<out>.json`.
    Gen(GenArgs),
    /// Exact edit distance of instance pairs.
    Exact(ExactArgs),
    /// k vs 40k^2 gap test.
    Gap(GapArgs),
    /// Sparsified-wave gap test, k vs roughly 10kl.
    Wave(WaveArgs),
    /// Grid of gap or wave runs aggregated into a CSV table.
    Bench(BenchArgs),
    /// Reduced-size invariant and oracle checks.
    Selftest(SelftestArgs),
}

#[derive(Args, Clone, Copy)]
struct SeedArg {
    /// Experiment seed; all randomness derives from it.
    #[arg(long, env = "GAPEDIT_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct PoolArgs {
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

impl PoolArgs {
    fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(j) = self.jobs {
            b = b.num_threads(j.max(1));
        }
        Ok(b.build()?.install(f))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Planted,
    LargeSide,
    Periodic,
    Random,
    Disjoint,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 4096)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Kind::Planted)]
    kind: Kind,
    /// Shorthand for `--kind large-side`.
    #[arg(long)]
    large_side: bool,
    /// Planted edit budget.
    #[arg(long, default_value_t = 0)]
    edits: usize,
    /// Plant independent edits and pad instead of keeping the length balanced.
    #[arg(long)]
    raw: bool,
    #[arg(long, default_value_t = 4)]
    sigma: usize,
    /// Gap parameter for large-side pairs.
    #[arg(long, default_value_t = 8)]
    k: usize,
    /// Certified lower bound for large-side pairs (default 40k^2).
    #[arg(long)]
    threshold: Option<usize>,
    /// Certify `ED <= T` and label the pair small-side.
    #[arg(long, value_name = "T")]
    label_small: Option<usize>,
    #[arg(long, default_value_t = 16)]
    period: usize,
    /// Number of instances; with more than one, `-<i>` is appended to the
    /// prefix and instance `i` uses seed `seed + i`.
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value = "instance")]
    out: PathBuf,
    #[command(flatten)]
    seed: SeedArg,
}

#[derive(Args)]
struct ExactArgs {
    /// Instance prefixes.
    #[arg(long, required = true, num_args = 1..)]
    input: Vec<PathBuf>,
    /// Also decide `ED <= k` with the h-wave.
    #[arg(long)]
    k: Option<usize>,
    /// Append records to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, required = true, num_args = 1..)]
    input: Vec<PathBuf>,
    #[arg(long)]
    k: usize,
    /// Trials per instance; trial `t` runs with seed `seed + t`.
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Index file: loaded if present, otherwise built and written.
    #[arg(long)]
    index: Option<PathBuf>,
    /// Largest n the two-sided back-end will materialize.
    #[arg(long, default_value_t = DEFAULT_LIMIT)]
    two_sided_limit: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    seed: SeedArg,
    #[command(flatten)]
    pool: PoolArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Noprep,
    OneSided,
    TwoSided,
}

impl ModeArg {
    fn gap(self) -> GapMode {
        match self {
            ModeArg::Noprep => GapMode::Noprep,
            ModeArg::OneSided => GapMode::OneSided,
            ModeArg::TwoSided => GapMode::TwoSided,
        }
    }

    fn wave(self) -> WaveMode {
        match self {
            ModeArg::Noprep => WaveMode::Noprep,
            ModeArg::OneSided => WaveMode::OneSided,
            ModeArg::TwoSided => WaveMode::TwoSided,
        }
    }
}

#[derive(Args)]
struct GapArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Noprep)]
    mode: ModeArg,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct WaveArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Noprep)]
    mode: ModeArg,
    /// Wave step (default k).
    #[arg(long)]
    l: Option<usize>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchAlgo {
    Gap,
    Wave,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum, default_value_t = BenchAlgo::Gap)]
    algorithm: BenchAlgo,
    #[arg(long, value_enum, default_value_t = ModeArg::Noprep)]
    mode: ModeArg,
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<usize>,
    /// Wave steps (default: l = k).
    #[arg(long, value_delimiter = ',')]
    l: Vec<usize>,
    /// Planted edits per instance (default k/2).
    #[arg(long)]
    edits: Option<usize>,
    #[arg(long, default_value_t = 4)]
    sigma: usize,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_LIMIT)]
    two_sided_limit: usize,
    /// CSV destination (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also append the raw run records here.
    #[arg(long)]
    records: Option<PathBuf>,
    #[command(flatten)]
    seed: SeedArg,
    #[command(flatten)]
    pool: PoolArgs,
}

#[derive(Args)]
struct SelftestArgs {
    /// Force this hash evaluation point into the oracle comparison (fault injection).
    #[arg(long)]
    force_x: Option<u64>,
    /// Also check that these index files load.
    #[arg(long)]
    index: Vec<PathBuf>,
    #[command(flatten)]
    seed: SeedArg,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(&a).map(|_| true),
        Command::Exact(a) => cmd_exact(&a).map(|_| true),
        Command::Gap(a) => {
            let algo = Algo::Gap(a.mode.gap());
            cmd_run(&a.run, algo).map(|_| true)
        }
        Command::Wave(a) => {
            let algo = Algo::Wave(a.mode.wave(), a.l.unwrap_or(a.run.k));
            cmd_run(&a.run, algo).map(|_| true)
        }
        Command::Bench(a) => cmd_bench(&a).map(|_| true),
        Command::Selftest(a) => selftest::run(&selftest::Options { seed: a.seed.seed, force_x: a.force_x, indices: a.index }),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn with_suffix(prefix: &Path, i: usize, count: usize) -> PathBuf {
    if count == 1 {
        return prefix.to_path_buf();
    }
    let mut s = prefix.as_os_str().to_owned();
    s.push(format!("-{i}"));
    PathBuf::from(s)
}

fn generate(a: &GenArgs, seed: u64) -> Result<Instance> {
    let kind = if a.large_side { Kind::LargeSide } else { a.kind };
    let inst = match kind {
        Kind::Planted => {
            let mode = if a.raw { PlantMode::Raw } else { PlantMode::Balanced };
            gen_planted_with(a.n, a.edits, a.sigma, seed, mode)?
        }
        Kind::LargeSide => gen_large_side(a.n, a.k, a.threshold.unwrap_or(40 * a.k * a.k), a.sigma, seed)?,
        Kind::Periodic => gen_periodic(a.n, a.period, a.sigma, seed)?,
        Kind::Random => gen_random_pair(a.n, a.sigma, seed)?,
        Kind::Disjoint => gen_disjoint(a.n, seed),
    };
    Ok(match a.label_small {
        Some(t) => inst.label_small(t)?,
        None => inst,
    })
}

fn cmd_gen(a: &GenArgs) -> Result<()> {
    for i in 0..a.count {
        let seed = a.seed.seed.wrapping_add(i as u64);
        let inst = generate(a, seed)?;
        let prefix = with_suffix(&a.out, i, a.count);
        inst.write(&prefix).with_context(|| format!("writing {}", prefix.display()))?;
        println!("{}", serde_json::to_string(&inst.manifest())?);
    }
    Ok(())
}

fn read_instance(prefix: &Path) -> Result<Instance> {
    Instance::read(prefix).with_context(|| format!("reading instance {}", prefix.display()))
}

fn cmd_exact(a: &ExactArgs) -> Result<()> {
    let sink = RecordSink::open(a.out.as_ref())?;
    for prefix in &a.input {
        let inst = read_instance(prefix)?;
        let start = std::time::Instant::now();
        let ed = edit_distance_exact(&inst.a, &inst.b);
        let verdict = match a.k {
            Some(k) => Some(if exact_hwave(&inst.a, &inst.b, k as i64)? { GapVerdict::Small } else { GapVerdict::Large }),
            None => None,
        };
        sink.emit(&RunRecord {
            schema: SCHEMA,
            algorithm: "exact".into(),
            mode: "dp".into(),
            input: Some(prefix.display().to_string()),
            n: inst.n(),
            k: a.k.unwrap_or(0),
            l: None,
            seed: inst.seed,
            trial: 0,
            verdict,
            exact_ed: Some(ed),
            wall_time_s: start.elapsed().as_secs_f64(),
            counters: Counters::default(),
            preprocessing: Counters::default(),
            index: None,
        })?;
    }
    Ok(())
}

fn cmd_run(r: &RunArgs, algo: Algo) -> Result<()> {
    if r.k == 0 {
        bail!("k must be at least 1");
    }
    if r.index.is_some() && r.input.len() > 1 {
        bail!("--index describes one string A; pass a single --input with it");
    }
    if r.index.is_some() && algo.mode() == "noprep" {
        bail!("noprep mode takes no index");
    }
    let sink = RecordSink::open(r.out.as_ref())?;
    for prefix in &r.input {
        let inst = read_instance(prefix)?;
        if inst.a.len() != inst.b.len() {
            bail!("{}: |A| = {} but |B| = {}", prefix.display(), inst.a.len(), inst.b.len());
        }
        warn_large_k(inst.n(), r.k);
        let shared = match &r.index {
            Some(p) => Some(obtain_index(p, &inst, r.k, algo, r.seed.seed, r.two_sided_limit)?),
            None => None,
        };
        let records: Vec<Result<RunRecord>> = r.pool.install(|| {
            (0..r.trials)
                .into_par_iter()
                .map(|t| {
                    let trial = Trial {
                        inst: &inst,
                        input: Some(prefix.display().to_string()),
                        k: r.k,
                        algo,
                        seed: r.seed.seed.wrapping_add(t as u64),
                        trial: t,
                        two_sided_limit: r.two_sided_limit,
                    };
                    // only the first trial pays for a freshly built shared index
                    let ix = shared.as_ref().map(|(ix, fresh)| (ix, *fresh && t == 0));
                    run_trial(&trial, ix, r.index.clone())
                })
                .collect()
        })?;
        for rec in records {
            sink.emit(&rec?)?;
        }
    }
    Ok(())
}

fn cmd_bench(a: &BenchArgs) -> Result<()> {
    let steps = |k: usize| -> Vec<Option<usize>> {
        match a.algorithm {
            BenchAlgo::Gap => vec![None],
            BenchAlgo::Wave if a.l.is_empty() => vec![Some(k)],
            BenchAlgo::Wave => a.l.iter().map(|&l| Some(l)).collect(),
        }
    };
    let mut cells = Vec::new();
    for &n in &a.n {
        for &k in &a.k {
            warn_large_k(n, k);
            for l in steps(k) {
                let algo = match l {
                    None => Algo::Gap(a.mode.gap()),
                    Some(l) => Algo::Wave(a.mode.wave(), l),
                };
                let edits = a.edits.unwrap_or(k / 2).min(n);
                let recs = a.pool.install(|| {
                    bench::run_cell(a.trials, |t| {
                        let seed = a.seed.seed.wrapping_add(t as u64);
                        let inst = gen_planted_with(n, edits, a.sigma, seed, PlantMode::Balanced)?;
                        let trial = Trial { inst: &inst, input: None, k, algo, seed, trial: t, two_sided_limit: a.two_sided_limit };
                        run_trial(&trial, None, None)
                    })
                })??;
                cells.push(recs);
            }
        }
    }
    if let Some(p) = &a.records {
        let sink = RecordSink::open(Some(p))?;
        for rec in cells.iter().flatten() {
            sink.emit(rec)?;
        }
    }
    match &a.out {
        Some(p) => bench::write_table(&cells, std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => bench::write_table(&cells, std::io::stdout()),
    }
}
