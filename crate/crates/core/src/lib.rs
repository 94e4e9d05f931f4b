//! Sublinear-time gap edit distance.
//!
//! The crate distinguishes `ED(A, B) <= k` from `ED(A, B) > 40k^2` (and the
//! finer `k` vs `k*l` gap) while reading only a sampled fraction of the
//! inputs. Three query back-ends are provided, one per preprocessing model:
//!
//! * [`no_prep`]: nothing is precomputed; both strings are hashed over
//!   `O(sqrt k)` shifted copies of a random sample set.
//! * [`one_sided`]: only `A` is preprocessed into power-of-two length
//!   hash tables; `B` is hashed once at query time.
//! * [`two_sided`]: both strings are fully hashed ahead of time.
//!
//! All back-ends plug into the same greedy driver ([`greedy::greedy_match`])
//! and the sparsified h-wave driver ([`wave::greedy_wave`]). Exact dynamic
//! programs and brute-force alignment oracles in [`exact`] and [`brute`]
//! serve as ground truth for tests and the experiment harness.

pub mod brute;
mod codec;
pub mod counters;
pub mod decompose;
pub mod error;
pub mod exact;
pub mod gap;
pub mod greedy;
pub mod hash;
pub mod instance;
pub mod no_prep;
pub mod one_sided;
pub mod strings;
pub mod two_sided;
pub mod wave;
pub mod wave_align;

pub use counters::Counters;
pub use error::{Error, Result};
pub use greedy::{greedy_match, Grade, GapVerdict, MaxAlign};
pub use hash::{HashConfig, RollingHashState, SampleSet};
pub use strings::ByteString;
