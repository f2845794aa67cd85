//! Shard file format.
//!
//! ```text
//! offset  size  field
//!      0     4  magic "MDSA"
//!      4     1  version (1)
//!      5     4  q
//!      9     2  n
//!     11     2  k
//!     13     2  delta
//!     15     2  tau
//!     17     2  node_id
//!     19     4  stripe_count
//!     23     8  original_length
//!     31     .  stripe_count * N symbols, 4 bytes each
//! ```
//!
//! All integers are little-endian.

use std::fs::{self, File};
use std::io::{Read, Write};
use std::os::unix::fs::FileExt;
use std::path::Path;

use crate::error::{Error, Result};

pub const MAGIC: [u8; 4] = *b"MDSA";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 31;
pub const SYMBOL_BYTES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShardHeader {
    pub q: u32,
    pub n: u16,
    pub k: u16,
    pub delta: u16,
    pub tau: u16,
    pub node_id: u16,
    pub stripe_count: u32,
    pub original_length: u64,
}

impl ShardHeader {
    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let mut out = [0u8; HEADER_LEN];
        out[0..4].copy_from_slice(&MAGIC);
        out[4] = VERSION;
        out[5..9].copy_from_slice(&self.q.to_le_bytes());
        out[9..11].copy_from_slice(&self.n.to_le_bytes());
        out[11..13].copy_from_slice(&self.k.to_le_bytes());
        out[13..15].copy_from_slice(&self.delta.to_le_bytes());
        out[15..17].copy_from_slice(&self.tau.to_le_bytes());
        out[17..19].copy_from_slice(&self.node_id.to_le_bytes());
        out[19..23].copy_from_slice(&self.stripe_count.to_le_bytes());
        out[23..31].copy_from_slice(&self.original_length.to_le_bytes());
        out
    }

    pub fn from_bytes(b: &[u8]) -> Result<Self> {
        if b.len() < HEADER_LEN {
            return Err(Error::ShardFormat(format!("header needs {HEADER_LEN} bytes, got {}", b.len())));
        }
        if b[0..4] != MAGIC {
            return Err(Error::ShardFormat("bad magic".into()));
        }
        if b[4] != VERSION {
            return Err(Error::ShardFormat(format!("unsupported version {}", b[4])));
        }
        let u16_at = |o: usize| u16::from_le_bytes([b[o], b[o + 1]]);
        let u32_at = |o: usize| u32::from_le_bytes(b[o..o + 4].try_into().unwrap());
        Ok(ShardHeader {
            q: u32_at(5),
            n: u16_at(9),
            k: u16_at(11),
            delta: u16_at(13),
            tau: u16_at(15),
            node_id: u16_at(17),
            stripe_count: u32_at(19),
            original_length: u64::from_le_bytes(b[23..31].try_into().unwrap()),
        })
    }
}

/// Writes `bytes` to `path` through a temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().and_then(|s| s.to_str()).unwrap_or("shard");
    let tmp = dir.join(format!(".{name}.tmp"));
    {
        let mut f = File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn encode_shard(header: &ShardHeader, body: &[u32]) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + body.len() * SYMBOL_BYTES);
    out.extend_from_slice(&header.to_bytes());
    for s in body {
        out.extend_from_slice(&s.to_le_bytes());
    }
    out
}

pub fn write_shard(path: &Path, header: &ShardHeader, body: &[u32]) -> Result<()> {
    write_atomic(path, &encode_shard(header, body))
}

/// Reads a whole shard, checking the body length against `sub` (`N`) and
/// every symbol against `q`.
pub fn read_shard(path: &Path, sub: usize) -> Result<(ShardHeader, Vec<u32>)> {
    let mut bytes = Vec::new();
    File::open(path)?.read_to_end(&mut bytes)?;
    let header = ShardHeader::from_bytes(&bytes)?;
    let body = &bytes[HEADER_LEN..];
    let expected = header.stripe_count as usize * sub * SYMBOL_BYTES;
    if body.len() != expected {
        return Err(Error::ShardFormat(format!("body is {} bytes, expected {expected}", body.len())));
    }
    let symbols: Vec<u32> = body
        .chunks_exact(SYMBOL_BYTES)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    if let Some(s) = symbols.iter().find(|&&s| s >= header.q) {
        return Err(Error::ShardFormat(format!("symbol {s} not below q = {}", header.q)));
    }
    Ok((header, symbols))
}

/// Positioned reader over a shard body that reads only requested symbols
/// and counts the bytes it pulls from disk.
#[derive(Debug)]
pub struct ShardReader {
    file: File,
    header: ShardHeader,
    sub: usize,
    bytes_read: u64,
}

impl ShardReader {
    pub fn open(path: &Path, sub: usize) -> Result<Self> {
        let file = File::open(path)?;
        let mut head = [0u8; HEADER_LEN];
        file.read_exact_at(&mut head, 0)?;
        let header = ShardHeader::from_bytes(&head)?;
        let expected = HEADER_LEN as u64 + header.stripe_count as u64 * sub as u64 * SYMBOL_BYTES as u64;
        let len = file.metadata()?.len();
        if len != expected {
            return Err(Error::ShardFormat(format!("file is {len} bytes, expected {expected}")));
        }
        Ok(ShardReader { file, header, sub, bytes_read: 0 })
    }

    pub fn header(&self) -> &ShardHeader {
        &self.header
    }

    /// Body bytes read so far (the header is not counted).
    pub fn bytes_read(&self) -> u64 {
        self.bytes_read
    }

    /// Appends the symbols of `stripe` at the given runs of contiguous
    /// indices, `(start, len)`, to `out`.
    pub fn read_runs(&mut self, stripe: usize, runs: &[(usize, usize)], out: &mut Vec<u32>) -> Result<()> {
        let base = HEADER_LEN as u64 + (stripe * self.sub * SYMBOL_BYTES) as u64;
        let mut buf = Vec::new();
        for &(start, len) in runs {
            buf.resize(len * SYMBOL_BYTES, 0);
            self.file.read_exact_at(&mut buf, base + (start * SYMBOL_BYTES) as u64)?;
            self.bytes_read += buf.len() as u64;
            for c in buf.chunks_exact(SYMBOL_BYTES) {
                let s = u32::from_le_bytes(c.try_into().unwrap());
                if s >= self.header.q {
                    return Err(Error::ShardFormat(format!("symbol {s} not below q = {}", self.header.q)));
                }
                out.push(s);
            }
        }
        Ok(())
    }
}

/// Groups sorted indices into `(start, len)` runs.
pub fn runs(indices: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &i in indices {
        match out.last_mut() {
            Some((s, l)) if *s + *l == i => *l += 1,
            _ => out.push((i, 1)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header() -> ShardHeader {
        ShardHeader { q: 17, n: 8, k: 5, delta: 2, tau: 4, node_id: 3, stripe_count: 2, original_length: 70 }
    }

    #[test]
    fn header_layout() {
        let b = header().to_bytes();
        assert_eq!(&b[0..5], b"MDSA\x01");
        assert_eq!(&b[5..9], &[17, 0, 0, 0]);
        assert_eq!(&b[17..19], &[3, 0]);
        assert_eq!(&b[23..31], &[70, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(ShardHeader::from_bytes(&b).unwrap(), header());
    }

    #[test]
    fn header_rejects_garbage() {
        let mut b = header().to_bytes();
        b[0] = b'X';
        assert!(ShardHeader::from_bytes(&b).is_err());
        let mut b = header().to_bytes();
        b[4] = 2;
        assert!(ShardHeader::from_bytes(&b).is_err());
        assert!(ShardHeader::from_bytes(&b[..10]).is_err());
    }

    #[test]
    fn write_read_and_partial_reads() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("node/shard.bin");
        let body: Vec<u32> = (0..8).map(|i| i % 17).collect();
        let mut h = header();
        h.stripe_count = 2;
        write_shard(&path, &h, &body).unwrap();
        let (got_h, got) = read_shard(&path, 4).unwrap();
        assert_eq!(got_h, h);
        assert_eq!(got, body);
        assert!(read_shard(&path, 3).is_err());

        let mut r = ShardReader::open(&path, 4).unwrap();
        let mut out = Vec::new();
        r.read_runs(1, &runs(&[0, 2, 3]), &mut out).unwrap();
        assert_eq!(out, vec![4, 6, 7]);
        assert_eq!(r.bytes_read(), 12);
    }

    #[test]
    fn rejects_out_of_field_symbols() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.bin");
        let mut h = header();
        h.stripe_count = 1;
        write_shard(&path, &h, &[1, 2, 17, 3]).unwrap();
        assert!(matches!(read_shard(&path, 4), Err(Error::ShardFormat(_))));
    }

    #[test]
    fn run_grouping() {
        assert_eq!(runs(&[0, 1, 2, 3, 8, 9, 10, 11]), vec![(0, 4), (8, 4)]);
        assert_eq!(runs(&[0, 2, 4]), vec![(0, 1), (2, 1), (4, 1)]);
        assert!(runs(&[]).is_empty());
    }
}
