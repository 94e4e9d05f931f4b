//! Byte strings with 1-based indexing and a virtual sentinel.
//!
//! Symbols are the byte values shifted up by one, so the alphabet is
//! `1..=256` and every read outside `[1, n]` yields [`SENTINEL`]. No read
//! ever fails; callers can index with any `i64`.

use std::fmt;

/// Size of the byte alphabet.
pub const ALPHABET: u16 = 256;

/// Symbol returned for every out-of-range position.
pub const SENTINEL: u16 = ALPHABET + 1;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ByteString(Vec<u8>);

impl ByteString {
    pub fn new(bytes: impl Into<Vec<u8>>) -> Self {
        ByteString(bytes.into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }

    /// Symbol at 1-based position `i`, or [`SENTINEL`] when out of range.
    #[inline]
    pub fn at(&self, i: i64) -> u16 {
        if i >= 1 && (i as u64) <= self.0.len() as u64 {
            self.0[(i - 1) as usize] as u16 + 1
        } else {
            SENTINEL
        }
    }

    /// Symbols of the closed range `[lo, hi]`, sentinel-extended. Empty when `hi < lo`.
    pub fn range(&self, lo: i64, hi: i64) -> Vec<u16> {
        if hi < lo {
            return Vec::new();
        }
        (lo..=hi).map(|i| self.at(i)).collect()
    }

    /// Symbols of the whole string.
    pub fn symbols(&self) -> Vec<u16> {
        self.0.iter().map(|&c| c as u16 + 1).collect()
    }
}

impl From<&str> for ByteString {
    fn from(s: &str) -> Self {
        ByteString(s.as_bytes().to_vec())
    }
}

impl From<&[u8]> for ByteString {
    fn from(s: &[u8]) -> Self {
        ByteString(s.to_vec())
    }
}

impl From<Vec<u8>> for ByteString {
    fn from(s: Vec<u8>) -> Self {
        ByteString(s)
    }
}

impl fmt::Debug for ByteString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ByteString({:?})", String::from_utf8_lossy(&self.0))
    }
}
