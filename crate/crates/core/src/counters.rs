use std::ops::AddAssign;

use serde::{Deserialize, Serialize};

/// Exact operation counts; the evidence for the running-time claims.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    /// Calls into a `MaxAlign` / `MaxShiftAlign` oracle.
    pub oracle_queries: u64,
    /// `RetrieveRollingHash` evaluations.
    pub hash_retrievals: u64,
    /// Membership tests against precomputed hash tables.
    pub table_lookups: u64,
    /// Symbols folded into prefix hashes while building rolling-hash states.
    pub hashed_symbols: u64,
    /// Hash insertions performed while building a preprocessing index.
    pub table_inserts: u64,
}

impl Counters {
    /// Total hashing work: symbols folded at build time plus retrievals.
    pub fn hash_work(&self) -> u64 {
        self.hashed_symbols + self.hash_retrievals
    }
}

impl AddAssign for Counters {
    fn add_assign(&mut self, o: Self) {
        self.oracle_queries += o.oracle_queries;
        self.hash_retrievals += o.hash_retrievals;
        self.table_lookups += o.table_lookups;
        self.hashed_symbols += o.hashed_symbols;
        self.table_inserts += o.table_inserts;
    }
}
