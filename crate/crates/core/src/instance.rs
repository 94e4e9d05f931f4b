//! Reproducible labeled string pairs.
//!
//! Every generator is a pure function of its seed (drawn from the instance
//! stream). Large-side labels are only ever issued after a dynamic program
//! certifies the edit distance exceeds the threshold.

use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exact::{banded_edit_distance, edit_distance_within};
use crate::hash::{substream, Stream};
use crate::strings::ByteString;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    SmallSide,
    LargeSide,
    Unlabeled,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub a: ByteString,
    pub b: ByteString,
    pub sigma: usize,
    pub seed: u64,
    pub planted_edits: usize,
    pub exact_ed: Option<usize>,
    pub label: Label,
    /// The threshold a label refers to.
    pub threshold: Option<usize>,
    pub generator: String,
}

/// Byte for symbol `s`: letters when the alphabet fits, raw bytes otherwise.
fn symbol(s: usize, sigma: usize) -> u8 {
    if sigma <= 26 {
        b'a' + s as u8
    } else {
        s as u8
    }
}

fn check_sigma(sigma: usize) -> Result<()> {
    if !(2..=256).contains(&sigma) {
        return Err(invalid(format!("sigma = {sigma} must lie in [2, 256]")));
    }
    Ok(())
}

fn uniform(rng: &mut impl Rng, n: usize, sigma: usize) -> Vec<u8> {
    (0..n).map(|_| symbol(rng.random_range(0..sigma), sigma)).collect()
}

/// How planted edits keep `|B| = n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlantMode {
    /// Substitutions and insert/delete pairs; length never changes.
    Balanced,
    /// Independent edits of any kind, then pad with an out-of-alphabet
    /// symbol or trim at the end. Padding and trimming count as edits.
    Raw,
}

/// `A` uniform over `sigma` symbols, `B` = `A` with `e` random edits.
pub fn gen_planted(n: usize, e: usize, sigma: usize, seed: u64) -> Result<Instance> {
    gen_planted_with(n, e, sigma, seed, PlantMode::Balanced)
}

pub fn gen_planted_with(n: usize, e: usize, sigma: usize, seed: u64, mode: PlantMode) -> Result<Instance> {
    check_sigma(sigma)?;
    if e > n {
        return Err(invalid(format!("edit budget {e} exceeds n = {n}")));
    }
    let mut rng = substream(seed, Stream::Instance);
    let a = uniform(&mut rng, n, sigma);
    let mut b = a.clone();
    // always changes the symbol: the new index is a nonzero offset from the old
    let substitute = |b: &mut Vec<u8>, rng: &mut rand_chacha::ChaCha8Rng| {
        if b.is_empty() {
            return;
        }
        let p = rng.random_range(0..b.len());
        let old = (b[p] - symbol(0, sigma)) as usize;
        b[p] = symbol((old + rng.random_range(1..sigma)) % sigma, sigma);
    };
    let mut planted = 0;
    match mode {
        PlantMode::Balanced => {
            let mut left = e;
            while left > 0 {
                if left >= 2 && n > 0 && rng.random_range(0..3) > 0 {
                    let p = rng.random_range(0..b.len());
                    b.remove(p);
                    let q = rng.random_range(0..=b.len());
                    b.insert(q, symbol(rng.random_range(0..sigma), sigma));
                    left -= 2;
                    planted += 2;
                } else {
                    substitute(&mut b, &mut rng);
                    left -= 1;
                    planted += 1;
                }
            }
        }
        PlantMode::Raw => {
            for _ in 0..e {
                match rng.random_range(0..3) {
                    0 if !b.is_empty() => {
                        b.remove(rng.random_range(0..b.len()));
                    }
                    1 => {
                        let q = rng.random_range(0..=b.len());
                        b.insert(q, symbol(rng.random_range(0..sigma), sigma));
                    }
                    _ => substitute(&mut b, &mut rng),
                }
                planted += 1;
            }
            planted += b.len().abs_diff(n);
            let pad = if sigma <= 26 { b'a' + sigma as u8 } else { (sigma % 256) as u8 };
            b.resize(n, pad);
        }
    }
    let (a, b) = (ByteString::new(a), ByteString::new(b));
    let exact_ed = edit_distance_within(&a, &b, planted);
    Ok(Instance {
        a,
        b,
        sigma,
        seed,
        planted_edits: planted,
        exact_ed,
        label: Label::Unlabeled,
        threshold: None,
        generator: "planted".into(),
    })
}

/// Most attempts `gen_large_side` makes before giving up.
pub const MAX_ATTEMPTS: usize = 64;

/// Rejection-samples pairs until a banded DP certifies `ED > threshold`.
///
/// Attempt `t` draws `A` biased toward the lower half of the alphabet and
/// `B` toward the upper half with strength `t / 16`, so small alphabets
/// still reach thresholds above the random-pair distance.
pub fn gen_large_side(n: usize, k: usize, threshold: usize, sigma: usize, seed: u64) -> Result<Instance> {
    check_sigma(sigma)?;
    if threshold >= n {
        return Err(invalid(format!("threshold {threshold} must be below n = {n}")));
    }
    let mut rng = substream(seed, Stream::Instance);
    let half = sigma / 2;
    for attempt in 0..MAX_ATTEMPTS {
        let bias = (attempt as f64 / 16.0).min(1.0);
        let mut draw = |low: bool| -> Vec<u8> {
            (0..n)
                .map(|_| {
                    let s = if rng.random_bool(bias) {
                        if low {
                            rng.random_range(0..half)
                        } else {
                            rng.random_range(half..sigma)
                        }
                    } else {
                        rng.random_range(0..sigma)
                    };
                    symbol(s, sigma)
                })
                .collect()
        };
        let a = draw(true);
        let b = draw(false);
        let (xa, xb) = (ByteString::new(a), ByteString::new(b));
        if banded_edit_distance(xa.as_bytes(), xb.as_bytes(), threshold).is_none() {
            let exact = crate::exact::edit_distance_exact(&xa, &xb);
            return Ok(Instance {
                a: xa,
                b: xb,
                sigma,
                seed,
                planted_edits: 0,
                exact_ed: Some(exact),
                label: Label::LargeSide,
                threshold: Some(threshold),
                generator: format!("large_side(k={k})"),
            });
        }
    }
    Err(Error::Certification { attempts: MAX_ATTEMPTS, reason: format!("no pair with ED > {threshold} at n = {n}") })
}

/// `A` repeats a random word of length `period`; `B` is `A` rotated by
/// `r in [1, period]`, so `ED <= 2r`.
pub fn gen_periodic(n: usize, period: usize, sigma: usize, seed: u64) -> Result<Instance> {
    check_sigma(sigma)?;
    if period == 0 || period > n {
        return Err(invalid(format!("period {period} must lie in [1, n = {n}]")));
    }
    let mut rng = substream(seed, Stream::Instance);
    let word = uniform(&mut rng, period, sigma);
    let a: Vec<u8> = (0..n).map(|i| word[i % period]).collect();
    let r = rng.random_range(1..=period);
    let mut b = a.clone();
    b.rotate_left(r % n.max(1));
    let planted = 2 * r;
    let (a, b) = (ByteString::new(a), ByteString::new(b));
    let exact_ed = edit_distance_within(&a, &b, planted);
    Ok(Instance {
        a,
        b,
        sigma,
        seed,
        planted_edits: planted,
        exact_ed,
        label: Label::Unlabeled,
        threshold: None,
        generator: "periodic".into(),
    })
}

/// A pair of unrelated uniform strings (the baseline for collision counts).
pub fn gen_random_pair(n: usize, sigma: usize, seed: u64) -> Result<Instance> {
    check_sigma(sigma)?;
    let mut rng = substream(seed, Stream::Instance);
    let a = uniform(&mut rng, n, sigma);
    let b = uniform(&mut rng, n, sigma);
    Ok(Instance {
        a: ByteString::new(a),
        b: ByteString::new(b),
        sigma,
        seed,
        planted_edits: 0,
        exact_ed: None,
        label: Label::Unlabeled,
        threshold: None,
        generator: "random_pair".into(),
    })
}

/// Shuffles positions of `A` into `B` with no shared symbols: `ED = n`.
pub fn gen_disjoint(n: usize, seed: u64) -> Instance {
    let mut rng = substream(seed, Stream::Instance);
    let mut a: Vec<u8> = (0..n).map(|i| b'a' + (i % 13) as u8).collect();
    a.shuffle(&mut rng);
    let b: Vec<u8> = a.iter().map(|&c| c + 13).collect();
    Instance {
        a: ByteString::new(a),
        b: ByteString::new(b),
        sigma: 26,
        seed,
        planted_edits: n,
        exact_ed: Some(n),
        label: Label::Unlabeled,
        threshold: None,
        generator: "disjoint".into(),
    }
}

impl Instance {
    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// Labels the pair small-side after checking `ED <= threshold`.
    pub fn label_small(mut self, threshold: usize) -> Result<Self> {
        let ed = match self.exact_ed {
            Some(ed) => ed,
            None => edit_distance_within(&self.a, &self.b, threshold)
                .ok_or_else(|| Error::Certification { attempts: 1, reason: format!("ED exceeds {threshold}") })?,
        };
        if ed > threshold {
            return Err(Error::Certification { attempts: 1, reason: format!("ED {ed} exceeds {threshold}") });
        }
        self.exact_ed = Some(ed);
        self.label = Label::SmallSide;
        self.threshold = Some(threshold);
        Ok(self)
    }

    pub fn manifest(&self) -> Manifest {
        Manifest {
            schema: 1,
            n: self.n(),
            sigma: self.sigma,
            seed: self.seed,
            planted_edits: self.planted_edits,
            exact_ed: self.exact_ed,
            label: self.label,
            threshold: self.threshold,
            generator: self.generator.clone(),
        }
    }

    /// Writes `<prefix>.a`, `<prefix>.b` and `<prefix>.json`.
    pub fn write(&self, prefix: &Path) -> Result<()> {
        let (pa, pb, pj) = instance_paths(prefix);
        std::fs::write(pa, self.a.as_bytes())?;
        std::fs::write(pb, self.b.as_bytes())?;
        std::fs::write(pj, serde_json::to_string_pretty(&self.manifest())? + "\n")?;
        Ok(())
    }

    pub fn read(prefix: &Path) -> Result<Self> {
        let (pa, pb, pj) = instance_paths(prefix);
        let a = ByteString::new(std::fs::read(pa)?);
        let b = ByteString::new(std::fs::read(pb)?);
        let m: Manifest = serde_json::from_str(&std::fs::read_to_string(pj)?)?;
        if a.len() != m.n || b.len() != m.n {
            return Err(Error::Format(format!("manifest says n = {}, files hold {} and {}", m.n, a.len(), b.len())));
        }
        Ok(Instance {
            a,
            b,
            sigma: m.sigma,
            seed: m.seed,
            planted_edits: m.planted_edits,
            exact_ed: m.exact_ed,
            label: m.label,
            threshold: m.threshold,
            generator: m.generator,
        })
    }
}

pub fn instance_paths(prefix: &Path) -> (PathBuf, PathBuf, PathBuf) {
    let with = |ext: &str| {
        let mut s = prefix.as_os_str().to_owned();
        s.push(ext);
        PathBuf::from(s)
    };
    (with(".a"), with(".b"), with(".json"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema: u32,
    pub n: usize,
    pub sigma: usize,
    pub seed: u64,
    pub planted_edits: usize,
    pub exact_ed: Option<usize>,
    pub label: Label,
    pub threshold: Option<usize>,
    pub generator: String,
}
