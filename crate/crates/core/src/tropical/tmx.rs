//! `.tmx` matrix files.
//!
//! Little-endian layout:
//!
//! | offset | size | field                          |
//! |--------|------|--------------------------------|
//! | 0      | 4    | magic `TMX1`                   |
//! | 4      | 4    | format version (1)             |
//! | 8      | 4    | dim                            |
//! | 12     | 4    | entry width in bytes (4)       |
//! | 16     | 4    | flags (0)                      |
//! | 20     | 4    | word length r, 0 if absent     |
//! | 24     | 8    | power k, 0 if absent           |
//! | 32     | 4·d² | entries, row-major, ∞ = 0xFFFFFFFF |
//! | end    | 4    | CRC32 of the payload bytes     |

use std::fs::File;
use std::io::{BufReader, BufWriter, ErrorKind, Read, Write};
use std::path::Path;

use super::{MatrixMeta, TropicalMatrix};
use crate::error::{Error, Result};

pub const TMX_MAGIC: [u8; 4] = *b"TMX1";
pub const TMX_VERSION: u32 = 1;
const ENTRY_WIDTH: u32 = 4;
const CHUNK_ENTRIES: usize = 1 << 16;

pub fn write_matrix(a: &TropicalMatrix, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::with_capacity(1 << 20, File::create(path)?);
    write_matrix_to(a, &mut w)?;
    w.into_inner().map_err(|e| e.into_error())?.sync_all()?;
    Ok(())
}

pub fn write_matrix_to<W: Write>(a: &TropicalMatrix, w: &mut W) -> Result<()> {
    let dim = u32::try_from(a.dim()).map_err(|_| Error::Format(format!("dim {} exceeds u32", a.dim())))?;
    w.write_all(&TMX_MAGIC)?;
    w.write_all(&TMX_VERSION.to_le_bytes())?;
    w.write_all(&dim.to_le_bytes())?;
    w.write_all(&ENTRY_WIDTH.to_le_bytes())?;
    w.write_all(&0u32.to_le_bytes())?;
    w.write_all(&a.meta.rows.unwrap_or(0).to_le_bytes())?;
    w.write_all(&a.meta.power.unwrap_or(0).to_le_bytes())?;

    let mut crc = crc32fast::Hasher::new();
    let mut buf = Vec::with_capacity(CHUNK_ENTRIES * 4);
    for chunk in a.as_raw().chunks(CHUNK_ENTRIES) {
        buf.clear();
        for v in chunk {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        crc.update(&buf);
        w.write_all(&buf)?;
    }
    w.write_all(&crc.finalize().to_le_bytes())?;
    w.flush()?;
    Ok(())
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<TropicalMatrix> {
    let mut r = BufReader::with_capacity(1 << 20, File::open(path)?);
    read_matrix_from(&mut r)
}

fn read_exact_or<R: Read>(r: &mut R, buf: &mut [u8], what: &str) -> Result<()> {
    r.read_exact(buf).map_err(|e| match e.kind() {
        ErrorKind::UnexpectedEof => Error::Format(format!("truncated {what}")),
        _ => Error::Io(e),
    })
}

fn read_u32<R: Read>(r: &mut R, what: &str) -> Result<u32> {
    let mut b = [0u8; 4];
    read_exact_or(r, &mut b, what)?;
    Ok(u32::from_le_bytes(b))
}

pub fn read_matrix_from<R: Read>(r: &mut R) -> Result<TropicalMatrix> {
    let mut magic = [0u8; 4];
    read_exact_or(r, &mut magic, "header")?;
    if magic != TMX_MAGIC {
        return Err(Error::Format(format!("bad magic {magic:02x?}")));
    }
    let version = read_u32(r, "header")?;
    if version != TMX_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let dim = read_u32(r, "header")? as usize;
    let width = read_u32(r, "header")?;
    if width != ENTRY_WIDTH {
        return Err(Error::Format(format!("unsupported entry width {width}")));
    }
    let flags = read_u32(r, "header")?;
    if flags != 0 {
        return Err(Error::Format(format!("unknown flags {flags:#x}")));
    }
    let rows = read_u32(r, "header")?;
    let mut power = [0u8; 8];
    read_exact_or(r, &mut power, "header")?;
    let power = u64::from_le_bytes(power);

    let total = dim.checked_mul(dim).ok_or_else(|| Error::Format(format!("dim {dim} too large")))?;
    let mut data = Vec::with_capacity(total);
    let mut crc = crc32fast::Hasher::new();
    let mut buf = vec![0u8; CHUNK_ENTRIES * 4];
    let mut remaining = total;
    while remaining > 0 {
        let n = remaining.min(CHUNK_ENTRIES);
        let bytes = &mut buf[..n * 4];
        read_exact_or(r, bytes, "payload")?;
        crc.update(bytes);
        data.extend(bytes.chunks_exact(4).map(|b| u32::from_le_bytes([b[0], b[1], b[2], b[3]])));
        remaining -= n;
    }
    let stored = read_u32(r, "checksum")?;
    let actual = crc.finalize();
    if stored != actual {
        return Err(Error::Format(format!("checksum mismatch (stored {stored:#010x}, computed {actual:#010x})")));
    }
    let meta = MatrixMeta { rows: (rows != 0).then_some(rows), power: (power != 0).then_some(power) };
    Ok(TropicalMatrix::from_raw(dim, data)?.with_meta(meta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tropical::INF;

    fn sample() -> TropicalMatrix {
        let data = (0..9).map(|x| if x == 4 { INF } else { x * 3 }).collect();
        TropicalMatrix::from_raw(3, data).unwrap().with_meta(MatrixMeta { rows: Some(2), power: Some(5) })
    }

    fn encode(a: &TropicalMatrix) -> Vec<u8> {
        let mut v = Vec::new();
        write_matrix_to(a, &mut v).unwrap();
        v
    }

    #[test]
    fn layout() {
        let bytes = encode(&sample());
        assert_eq!(bytes.len(), 32 + 9 * 4 + 4);
        assert_eq!(&bytes[..4], b"TMX1");
        assert_eq!(&bytes[8..12], &3u32.to_le_bytes());
        assert_eq!(&bytes[20..24], &2u32.to_le_bytes());
        assert_eq!(&bytes[24..32], &5u64.to_le_bytes());
        assert_eq!(&bytes[32 + 16..32 + 20], &[0xff; 4]);
    }

    #[test]
    fn round_trip() {
        let a = sample();
        let back = read_matrix_from(&mut encode(&a).as_slice()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn wrong_magic() {
        let mut bytes = encode(&sample());
        bytes[0] = b'X';
        assert!(matches!(read_matrix_from(&mut bytes.as_slice()), Err(Error::Format(_))));
    }

    #[test]
    fn truncated() {
        let bytes = encode(&sample());
        let err = read_matrix_from(&mut &bytes[..bytes.len() - 10]).unwrap_err();
        assert!(err.to_string().contains("truncated"), "{err}");
    }

    #[test]
    fn corrupted_payload() {
        let mut bytes = encode(&sample());
        bytes[40] ^= 1;
        let err = read_matrix_from(&mut bytes.as_slice()).unwrap_err();
        assert!(err.to_string().contains("checksum"), "{err}");
    }
}
