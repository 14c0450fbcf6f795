//! Binary Cayley-table cache.
//!
//! Layout, little-endian throughout:
//!
//! ```text
//! "QGL1"                      4 bytes
//! family tag                  u8
//! order n                     u64
//! mul                         n*n x u32, row-major
//! inv                         n x u32
//! class count                 u32
//!   per class: size u32, then size x u32 members
//! label block length          u64 (bytes that follow, up to the checksum)
//!   per label: length u32, then UTF-8 bytes
//! CRC-32C of all preceding    u32
//! ```

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crc::{Crc, CRC_32_ISCSI};
use qrg_core::{Family, GroupSpec, GroupTable};
use sha2::{Digest, Sha256};

pub const MAGIC: &[u8; 4] = b"QGL1";
const CASTAGNOLI: Crc<u32> = Crc::<u32>::new(&CRC_32_ISCSI);

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("bad magic")]
    BadMagic,
    #[error("truncated cache file")]
    Truncated,
    #[error("checksum mismatch")]
    ChecksumMismatch,
    #[error("malformed cache file: {0}")]
    Malformed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CacheError {
    /// Stable numeric code per failure kind.
    pub fn code(&self) -> u8 {
        match self {
            CacheError::BadMagic => 1,
            CacheError::Truncated => 2,
            CacheError::ChecksumMismatch => 3,
            CacheError::Malformed(_) => 4,
            CacheError::Io(_) => 5,
        }
    }
}

pub fn encode(g: &GroupTable) -> Vec<u8> {
    let n = g.order();
    let mut out = Vec::with_capacity(32 + 4 * n * (n + 3));
    out.extend_from_slice(MAGIC);
    out.push(g.family().tag());
    out.extend_from_slice(&(n as u64).to_le_bytes());
    for &v in g.table() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for &v in g.inverses() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out.extend_from_slice(&(g.classes().len() as u32).to_le_bytes());
    for cell in g.classes() {
        out.extend_from_slice(&(cell.len() as u32).to_le_bytes());
        for &x in cell {
            out.extend_from_slice(&x.to_le_bytes());
        }
    }
    let mut block = Vec::new();
    for label in g.labels() {
        block.extend_from_slice(&(label.len() as u32).to_le_bytes());
        block.extend_from_slice(label.as_bytes());
    }
    out.extend_from_slice(&(block.len() as u64).to_le_bytes());
    out.extend_from_slice(&block);
    let crc = CASTAGNOLI.checksum(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8], CacheError> {
        let end = self.pos.checked_add(len).ok_or(CacheError::Truncated)?;
        let s = self.buf.get(self.pos..end).ok_or(CacheError::Truncated)?;
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32, CacheError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, CacheError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn u32s(&mut self, count: usize) -> Result<Vec<u32>, CacheError> {
        let bytes = self.take(count.checked_mul(4).ok_or(CacheError::Truncated)?)?;
        Ok(bytes.chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().unwrap())).collect())
    }
}

pub fn decode(bytes: &[u8]) -> Result<GroupTable, CacheError> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(CacheError::BadMagic);
    }
    // Structure is parsed before the checksum is compared so that a short
    // file reports truncation rather than a checksum failure.
    let mut r = Reader { buf: bytes, pos: 4 };
    let tag = r.take(1)?[0];
    let n = r.u64()?;
    if n == 0 || n > u32::MAX as u64 {
        return Err(CacheError::Malformed(format!("order {n}")));
    }
    let n = n as usize;
    let mul = r.u32s(n.checked_mul(n).ok_or(CacheError::Truncated)?)?;
    let inv = r.u32s(n)?;
    let class_count = r.u32()? as usize;
    if class_count > n {
        return Err(CacheError::Malformed(format!("{class_count} classes for order {n}")));
    }
    let mut classes = Vec::with_capacity(class_count);
    for _ in 0..class_count {
        let size = r.u32()? as usize;
        classes.push(r.u32s(size)?);
    }
    let block_len = r.u64()? as usize;
    let block_start = r.pos;
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let len = r.u32()? as usize;
        let raw = r.take(len)?;
        let s = std::str::from_utf8(raw).map_err(|_| CacheError::Malformed("label is not UTF-8".into()))?;
        labels.push(s.to_owned());
    }
    if r.pos - block_start != block_len {
        return Err(CacheError::Malformed("label block length disagrees with contents".into()));
    }
    let body_end = r.pos;
    let stored = r.u32()?;
    if r.pos != bytes.len() {
        return Err(CacheError::Malformed("trailing bytes after checksum".into()));
    }
    if CASTAGNOLI.checksum(&bytes[..body_end]) != stored {
        return Err(CacheError::ChecksumMismatch);
    }
    let family = Family::from_tag(tag).ok_or_else(|| CacheError::Malformed(format!("family tag {tag}")))?;
    GroupTable::from_parts(family, n, mul, inv, classes, labels).map_err(|e| CacheError::Malformed(e.to_string()))
}

pub fn write(g: &GroupTable, path: &Path) -> Result<(), CacheError> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&encode(g))?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read(path: &Path) -> Result<GroupTable, CacheError> {
    decode(&fs::read(path)?)
}

/// Cache file name for a group spec: hex SHA-256 of the canonical spec string.
pub fn key(spec: &GroupSpec) -> String {
    let digest = Sha256::digest(spec.to_string().as_bytes());
    digest.iter().take(16).map(|b| format!("{b:02x}")).collect()
}

/// A directory of Cayley caches keyed by spec hash.
#[derive(Debug, Clone)]
pub struct CacheDir {
    root: PathBuf,
}

impl CacheDir {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        CacheDir { root: root.into() }
    }

    pub fn path_for(&self, spec: &GroupSpec) -> PathBuf {
        self.root.join(format!("{}.qgl", key(spec)))
    }

    /// Reads the cached table for `spec`, building and storing it on a miss.
    /// A damaged cache file is rebuilt rather than trusted.
    pub fn load(&self, spec: &GroupSpec) -> anyhow::Result<GroupTable> {
        let path = self.path_for(spec);
        match read(&path) {
            Ok(g) => return Ok(g),
            Err(CacheError::Io(e)) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => eprintln!("warning: ignoring cache {}: {e}", path.display()),
        }
        let g = spec.build()?;
        fs::create_dir_all(&self.root)?;
        write(&g, &path)?;
        Ok(g)
    }
}
