//! Little-endian binary framing shared by the index files.
//!
//! Layout: 6-byte magic, version byte, payload, then a SHA-256 of
//! everything before it.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub(crate) const VERSION: u8 = 1;

pub(crate) struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    pub fn new(magic: &[u8; 6]) -> Self {
        let mut buf = magic.to_vec();
        buf.push(VERSION);
        Writer { buf }
    }

    pub fn u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn i64(&mut self, v: i64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn u64s(&mut self, vs: &[u64]) {
        self.u64(vs.len() as u64);
        for &v in vs {
            self.u64(v);
        }
    }

    pub fn u32s(&mut self, vs: &[u32]) {
        self.u64(vs.len() as u64);
        for &v in vs {
            self.buf.extend_from_slice(&v.to_le_bytes());
        }
    }

    pub fn finish(mut self) -> Vec<u8> {
        let digest = Sha256::digest(&self.buf);
        self.buf.extend_from_slice(&digest);
        self.buf
    }
}

pub(crate) struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn open(bytes: &'a [u8], magic: &[u8; 6]) -> Result<Self> {
        if bytes.len() < 7 + 32 {
            return Err(Error::Format("file too short".into()));
        }
        if &bytes[..6] != magic {
            return Err(Error::Format(format!(
                "bad magic {:?}, expected {:?}",
                String::from_utf8_lossy(&bytes[..6]),
                String::from_utf8_lossy(magic)
            )));
        }
        if bytes[6] != VERSION {
            return Err(Error::Format(format!("unsupported version {}", bytes[6])));
        }
        let (body, digest) = bytes.split_at(bytes.len() - 32);
        if Sha256::digest(body).as_slice() != digest {
            return Err(Error::Format("checksum mismatch".into()));
        }
        Ok(Reader { buf: body, pos: 7 })
    }

    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(len).filter(|&e| e <= self.buf.len());
        let end = end.ok_or_else(|| Error::Format("truncated payload".into()))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    pub fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub fn i64(&mut self) -> Result<i64> {
        Ok(i64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn len(&mut self, width: usize) -> Result<usize> {
        let len = self.u64()? as usize;
        if len.saturating_mul(width) > self.buf.len() - self.pos {
            return Err(Error::Format("length field exceeds file size".into()));
        }
        Ok(len)
    }

    pub fn u64s(&mut self) -> Result<Vec<u64>> {
        let len = self.len(8)?;
        (0..len).map(|_| self.u64()).collect()
    }

    pub fn u32s(&mut self) -> Result<Vec<u32>> {
        let len = self.len(4)?;
        (0..len).map(|_| Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))).collect()
    }

    pub fn finish(self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(Error::Format("trailing bytes after payload".into()));
        }
        Ok(())
    }
}
