//! `WGR1` grid files: a small fixed header followed by raw samples.
//!
//! ```text
//! "WGR1"                      4 bytes
//! n_q, n_p                    u32 LE
//! q_min, q_max, p_min, p_max  f64 LE
//! kind                        u8, 0 = real, 1 = complex (re, im interleaved)
//! samples                     f64 LE, row-major, p outer descending
//! ```

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phase_space::{ComplexField, Grid2D, RealField};

pub const MAGIC: &[u8; 4] = b"WGR1";
const HEADER_LEN: usize = 4 + 4 + 4 + 4 * 8 + 1;

/// Contents of a grid file.
#[derive(Debug, Clone, PartialEq)]
pub enum GridData {
    Real(RealField),
    Complex(ComplexField),
}

impl GridData {
    pub fn grid(&self) -> &Grid2D {
        match self {
            GridData::Real(f) => f.grid(),
            GridData::Complex(f) => f.grid(),
        }
    }

    /// Real samples, or the real parts of complex ones.
    pub fn real_part(&self) -> Result<RealField> {
        match self {
            GridData::Real(f) => Ok(f.clone()),
            GridData::Complex(f) => f.map(|c| c.re),
        }
    }
}

fn header(grid: &Grid2D, kind: u8) -> Result<Vec<u8>> {
    let dim = |n: usize, axis: &str| {
        u32::try_from(n).map_err(|_| Error::Format(format!("{axis} node count {n} does not fit in u32")))
    };
    let mut out = Vec::with_capacity(HEADER_LEN);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&dim(grid.n_q, "q")?.to_le_bytes());
    out.extend_from_slice(&dim(grid.n_p, "p")?.to_le_bytes());
    for v in [grid.q_min, grid.q_max, grid.p_min, grid.p_max] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out.push(kind);
    Ok(out)
}

pub fn encode_real(field: &RealField) -> Result<Vec<u8>> {
    let mut out = header(field.grid(), 0)?;
    out.reserve(8 * field.values().len());
    for v in field.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(out)
}

pub fn encode_complex(field: &ComplexField) -> Result<Vec<u8>> {
    let mut out = header(field.grid(), 1)?;
    out.reserve(16 * field.values().len());
    for c in field.values() {
        out.extend_from_slice(&c.re.to_le_bytes());
        out.extend_from_slice(&c.im.to_le_bytes());
    }
    Ok(out)
}

pub fn decode(bytes: &[u8]) -> Result<GridData> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format(format!("{} bytes is shorter than the header", bytes.len())));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::Format("missing WGR1 magic".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().expect("slice of 4")) as usize;
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().expect("slice of 8"));
    let (n_q, n_p) = (u32_at(4), u32_at(8));
    let grid = Grid2D { q_min: f64_at(12), q_max: f64_at(20), p_min: f64_at(28), p_max: f64_at(36), n_q, n_p };
    grid.validate().map_err(|e| Error::Format(e.to_string()))?;
    let kind = bytes[44];
    let width = match kind {
        0 => 1,
        1 => 2,
        k => return Err(Error::Format(format!("unknown value kind {k}"))),
    };
    let expected = grid.len().checked_mul(8 * width).and_then(|n| n.checked_add(HEADER_LEN));
    if expected != Some(bytes.len()) {
        return Err(Error::Format(format!(
            "payload length {} does not match a {n_q}x{n_p} grid of kind {kind}",
            bytes.len() - HEADER_LEN
        )));
    }
    let samples: Vec<f64> = bytes[HEADER_LEN..].chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8"))).collect();
    let bad = |e: Error| Error::Format(e.to_string());
    Ok(if kind == 0 {
        GridData::Real(RealField::from_values(grid, samples).map_err(bad)?)
    } else {
        let values = samples.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect();
        GridData::Complex(ComplexField::from_values(grid, values).map_err(bad)?)
    })
}

pub fn write_real(path: &Path, field: &RealField) -> Result<()> {
    fs::File::create(path)?.write_all(&encode_real(field)?)?;
    Ok(())
}

pub fn write_complex(path: &Path, field: &ComplexField) -> Result<()> {
    fs::File::create(path)?.write_all(&encode_complex(field)?)?;
    Ok(())
}

pub fn read(path: &Path) -> Result<GridData> {
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    decode(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout() {
        let g = Grid2D::new(-1.0, 2.0, -3.0, 4.0, 3, 2).unwrap();
        let f = RealField::from_values(g, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let b = encode_real(&f).unwrap();
        assert_eq!(&b[..4], b"WGR1");
        assert_eq!(&b[4..8], &3u32.to_le_bytes());
        assert_eq!(&b[8..12], &2u32.to_le_bytes());
        assert_eq!(&b[12..20], &(-1.0f64).to_le_bytes());
        assert_eq!(&b[36..44], &4.0f64.to_le_bytes());
        assert_eq!(b[44], 0);
        assert_eq!(b.len(), 45 + 6 * 8);
        assert_eq!(&b[45..53], &1.0f64.to_le_bytes());
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let g = Grid2D::new(-1.5, 2.25, -3.0, 4.0, 7, 5).unwrap();
        let f = RealField::from_fn(g, |z| (z.q * 1.1).sin() * z.p.exp() / 3.0).unwrap();
        match decode(&encode_real(&f).unwrap()).unwrap() {
            GridData::Real(r) => {
                assert_eq!(r.grid(), f.grid());
                assert!(r.values().iter().zip(f.values()).all(|(a, b)| a.to_bits() == b.to_bits()));
            }
            _ => panic!("kind changed"),
        }
        let c = ComplexField::from_fn(g, |z| Complex64::new(z.q, -z.p * 0.1)).unwrap();
        assert_eq!(decode(&encode_complex(&c).unwrap()).unwrap(), GridData::Complex(c));
    }

    #[test]
    fn rejects_malformed() {
        let g = Grid2D::square(1.0, 2).unwrap();
        let good = encode_real(&RealField::from_values(g, vec![0.0; 4]).unwrap()).unwrap();
        assert!(decode(&good[..20]).is_err());
        assert!(decode(&good[..good.len() - 1]).is_err());
        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(decode(&bad).is_err());
        let mut bad = good.clone();
        bad[44] = 7;
        assert!(decode(&bad).is_err());
        let mut bad = good;
        bad[12..20].copy_from_slice(&5.0f64.to_le_bytes());
        assert!(decode(&bad).is_err());
    }
}
