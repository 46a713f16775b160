//! Binary checkpoint format, little-endian:
//! `"NLS1"`, version `u32`, `n u64`, `L f64`, `t f64`, then `n` pairs `(re f64, im f64)`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::spectral::{Field, Grid1D};
use crate::{Error, Result};

pub const MAGIC: &[u8; 4] = b"NLS1";
pub const VERSION: u32 = 1;

pub fn encode_checkpoint(field: &Field) -> Vec<u8> {
    let grid = field.grid();
    let mut out = Vec::with_capacity(32 + 16 * grid.n());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(grid.n() as u64).to_le_bytes());
    out.extend_from_slice(&grid.half_length().to_le_bytes());
    out.extend_from_slice(&field.time().to_le_bytes());
    for z in field.samples() {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
    out
}

pub fn write_checkpoint(path: &Path, field: &Field) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&encode_checkpoint(field))?;
    w.flush()?;
    Ok(())
}

fn take<const N: usize>(bytes: &[u8], at: &mut usize) -> Option<[u8; N]> {
    let chunk = bytes.get(*at..*at + N)?;
    *at += N;
    chunk.try_into().ok()
}

/// Decodes a checkpoint. If `grid` is given and matches the header it is
/// reused; otherwise a grid is built from the header.
pub fn decode_checkpoint(bytes: &[u8], grid: Option<&Grid1D>, path: &Path) -> Result<Field> {
    let bad = |message: &str| Error::Checkpoint {
        path: path.to_path_buf(),
        message: message.to_string(),
    };
    let mut at = 0;
    let magic: [u8; 4] = take(bytes, &mut at).ok_or_else(|| bad("truncated header"))?;
    if &magic != MAGIC {
        return Err(bad("bad magic"));
    }
    let version = u32::from_le_bytes(take(bytes, &mut at).ok_or_else(|| bad("truncated header"))?);
    if version != VERSION {
        return Err(bad(&format!("unsupported version {version}")));
    }
    let n =
        u64::from_le_bytes(take(bytes, &mut at).ok_or_else(|| bad("truncated header"))?) as usize;
    let l = f64::from_le_bytes(take(bytes, &mut at).ok_or_else(|| bad("truncated header"))?);
    let t = f64::from_le_bytes(take(bytes, &mut at).ok_or_else(|| bad("truncated header"))?);
    if bytes.len() != at + 16 * n {
        return Err(bad(&format!(
            "expected {} sample bytes, found {}",
            16 * n,
            bytes.len() - at
        )));
    }
    let grid = match grid {
        Some(g) if g.n() == n && g.half_length() == l => g.clone(),
        _ => Grid1D::new(n, l)?,
    };
    let mut samples = Vec::with_capacity(n);
    for _ in 0..n {
        let re = f64::from_le_bytes(take(bytes, &mut at).expect("length checked"));
        let im = f64::from_le_bytes(take(bytes, &mut at).expect("length checked"));
        samples.push(Complex64::new(re, im));
    }
    Field::new(&grid, samples, t)
}

pub fn read_checkpoint(path: &Path, grid: Option<&Grid1D>) -> Result<Field> {
    let mut bytes = Vec::new();
    BufReader::new(File::open(path)?).read_to_end(&mut bytes)?;
    decode_checkpoint(&bytes, grid, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout() {
        let g = Grid1D::new(16, 3.5).unwrap();
        let f = Field::from_fn(&g, |x| Complex64::new(x, -x * x))
            .unwrap()
            .with_time(2.25);
        let bytes = encode_checkpoint(&f);
        assert_eq!(&bytes[0..4], b"NLS1");
        assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), 1);
        assert_eq!(u64::from_le_bytes(bytes[8..16].try_into().unwrap()), 16);
        assert_eq!(f64::from_le_bytes(bytes[16..24].try_into().unwrap()), 3.5);
        assert_eq!(f64::from_le_bytes(bytes[24..32].try_into().unwrap()), 2.25);
        assert_eq!(bytes.len(), 32 + 16 * 16);
    }

    #[test]
    fn file_round_trip_is_bit_exact() {
        let g = Grid1D::new(64, 7.0).unwrap();
        let f = Field::from_fn(&g, |x| {
            Complex64::new((x * 1.3).sin() / 3.0, (-x * x).exp())
        })
        .unwrap()
        .with_time(0.1 + 0.2);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.nls");
        write_checkpoint(&path, &f).unwrap();
        let back = read_checkpoint(&path, None).unwrap();
        assert_eq!(back.time().to_bits(), f.time().to_bits());
        for (a, b) in f.samples().iter().zip(back.samples()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
        assert_eq!(std::fs::read(&path).unwrap(), encode_checkpoint(&back));
    }

    #[test]
    fn corrupt_inputs() {
        let g = Grid1D::new(16, 1.0).unwrap();
        let good = encode_checkpoint(&Field::zeros(&g));
        let p = Path::new("x");
        let mut bad_magic = good.clone();
        bad_magic[0] = b'X';
        assert!(decode_checkpoint(&bad_magic, None, p).is_err());
        assert!(decode_checkpoint(&good[..good.len() - 1], None, p).is_err());
        assert!(decode_checkpoint(&good[..10], None, p).is_err());
        let mut bad_version = good.clone();
        bad_version[4] = 9;
        assert!(decode_checkpoint(&bad_version, None, p).is_err());
    }
}
