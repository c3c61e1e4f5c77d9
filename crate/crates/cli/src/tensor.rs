//! `TFC1` tensor files.
//!
//! Layout, all little-endian:
//!
//! | offset | type     | field                         |
//! |--------|----------|-------------------------------|
//! | 0      | `[u8;4]` | magic `TFC1`                  |
//! | 4      | `u16`    | version (1)                   |
//! | 6      | `u16`    | dtype: 0 complex64, 1 complex128 |
//! | 8      | `u32`×3  | n_chirp, n_freq, n_time       |
//! | 20     | `f64`    | alpha_sq                      |
//! | 28     | `f64`    | sample rate (Hz)              |
//! | 36     | `f64`    | t0 (s)                        |
//! | 44     | payload  | interleaved (re, im)          |
//!
//! The payload is time-major: frame `n`, then chirp row, then frequency bin.

use std::path::Path;

use sct_core::transform::TfcTensor;
use sct_core::{Complex64, TfcGrid};

use crate::error::{CliError, Result};

pub const MAGIC: &[u8; 4] = b"TFC1";
pub const VERSION: u16 = 1;
pub const HEADER_LEN: usize = 44;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dtype {
    Complex64,
    Complex128,
}

impl Dtype {
    pub fn code(self) -> u16 {
        match self {
            Dtype::Complex64 => 0,
            Dtype::Complex128 => 1,
        }
    }

    pub fn from_code(c: u16) -> Option<Self> {
        match c {
            0 => Some(Dtype::Complex64),
            1 => Some(Dtype::Complex128),
            _ => None,
        }
    }

    /// Bytes per complex value.
    pub fn size(self) -> usize {
        match self {
            Dtype::Complex64 => 8,
            Dtype::Complex128 => 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensorFileHeader {
    pub version: u16,
    pub dtype: Dtype,
    pub n_chirp: u32,
    pub n_freq: u32,
    pub n_time: u32,
    pub alpha_sq: f64,
    pub sample_rate_hz: f64,
    pub t0_s: f64,
}

impl TensorFileHeader {
    pub fn of(t: &TfcTensor, dtype: Dtype) -> Self {
        let (nc, nf, nt) = t.shape();
        Self {
            version: VERSION,
            dtype,
            n_chirp: nc as u32,
            n_freq: nf as u32,
            n_time: nt as u32,
            alpha_sq: t.grid.alpha_sq,
            sample_rate_hz: t.grid.sample_rate_hz,
            t0_s: t.t0_s,
        }
    }

    pub fn payload_len(&self) -> usize {
        self.n_chirp as usize * self.n_freq as usize * self.n_time as usize * self.dtype.size()
    }

    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let mut b = [0u8; HEADER_LEN];
        b[0..4].copy_from_slice(MAGIC);
        b[4..6].copy_from_slice(&self.version.to_le_bytes());
        b[6..8].copy_from_slice(&self.dtype.code().to_le_bytes());
        b[8..12].copy_from_slice(&self.n_chirp.to_le_bytes());
        b[12..16].copy_from_slice(&self.n_freq.to_le_bytes());
        b[16..20].copy_from_slice(&self.n_time.to_le_bytes());
        b[20..28].copy_from_slice(&self.alpha_sq.to_le_bytes());
        b[28..36].copy_from_slice(&self.sample_rate_hz.to_le_bytes());
        b[36..44].copy_from_slice(&self.t0_s.to_le_bytes());
        b
    }

    pub fn parse(bytes: &[u8], path: &Path) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(CliError::format(path, format!("file is {} bytes, shorter than the header", bytes.len())));
        }
        if &bytes[0..4] != MAGIC {
            return Err(CliError::format(path, "not a TFC1 tensor file (bad magic)"));
        }
        let u16_at = |o: usize| u16::from_le_bytes([bytes[o], bytes[o + 1]]);
        let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
        let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
        let version = u16_at(4);
        if version != VERSION {
            return Err(CliError::format(path, format!("unsupported TFC1 version {version}")));
        }
        let dtype = Dtype::from_code(u16_at(6))
            .ok_or_else(|| CliError::format(path, format!("unknown dtype code {}", u16_at(6))))?;
        Ok(Self {
            version,
            dtype,
            n_chirp: u32_at(8),
            n_freq: u32_at(12),
            n_time: u32_at(16),
            alpha_sq: f64_at(20),
            sample_rate_hz: f64_at(28),
            t0_s: f64_at(36),
        })
    }
}

pub fn encode(t: &TfcTensor, dtype: Dtype) -> Vec<u8> {
    let h = TensorFileHeader::of(t, dtype);
    let mut out = Vec::with_capacity(HEADER_LEN + h.payload_len());
    out.extend_from_slice(&h.to_bytes());
    for z in t.as_slice() {
        match dtype {
            Dtype::Complex64 => {
                out.extend_from_slice(&(z.re as f32).to_le_bytes());
                out.extend_from_slice(&(z.im as f32).to_le_bytes());
            }
            Dtype::Complex128 => {
                out.extend_from_slice(&z.re.to_le_bytes());
                out.extend_from_slice(&z.im.to_le_bytes());
            }
        }
    }
    out
}

pub fn decode(bytes: &[u8], path: &Path) -> Result<TfcTensor> {
    let h = TensorFileHeader::parse(bytes, path)?;
    let payload = &bytes[HEADER_LEN..];
    if payload.len() != h.payload_len() {
        return Err(CliError::format(
            path,
            format!("payload is {} bytes, header implies {}", payload.len(), h.payload_len()),
        ));
    }
    let grid = TfcGrid::from_resolution(h.alpha_sq, h.n_time as usize, h.sample_rate_hz)
        .map_err(|e| CliError::format(path, format!("invalid grid in header: {e}")))?;
    if grid.n_chirp() != h.n_chirp as usize || grid.n_freq() != h.n_freq as usize {
        return Err(CliError::format(
            path,
            format!("dims {}x{} do not match alpha_sq {}", h.n_chirp, h.n_freq, h.alpha_sq),
        ));
    }
    let data: Vec<Complex64> = match h.dtype {
        Dtype::Complex64 => payload
            .chunks_exact(8)
            .map(|c| {
                let re = f32::from_le_bytes(c[0..4].try_into().unwrap());
                let im = f32::from_le_bytes(c[4..8].try_into().unwrap());
                Complex64::new(re as f64, im as f64)
            })
            .collect(),
        Dtype::Complex128 => payload
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[0..8].try_into().unwrap());
                let im = f64::from_le_bytes(c[8..16].try_into().unwrap());
                Complex64::new(re, im)
            })
            .collect(),
    };
    TfcTensor::from_vec(grid, h.t0_s, data).map_err(|e| CliError::format(path, e.to_string()))
}

pub fn read(path: &Path) -> Result<TfcTensor> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    decode(&bytes, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> TfcTensor {
        let g = TfcGrid::from_resolution(0.1, 3, 10.0).unwrap();
        let n = g.frame_len() * g.n_time;
        let data = (0..n).map(|i| Complex64::new(i as f64 * 0.37, -(i as f64).sqrt())).collect();
        TfcTensor::from_vec(g, 0.25, data).unwrap()
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let t = sample();
        let bytes = encode(&t, Dtype::Complex128);
        assert_eq!(bytes.len(), HEADER_LEN + t.as_slice().len() * 16);
        let back = decode(&bytes, Path::new("x")).unwrap();
        assert_eq!(back, t);
        assert_eq!(encode(&back, Dtype::Complex128), bytes);
    }

    #[test]
    fn single_precision_rounds_once() {
        let t = sample();
        let back = decode(&encode(&t, Dtype::Complex64), Path::new("x")).unwrap();
        for (a, b) in back.as_slice().iter().zip(t.as_slice()) {
            assert_eq!(a.re, b.re as f32 as f64);
            assert_eq!(a.im, b.im as f32 as f64);
        }
    }

    #[test]
    fn rejects_corruption() {
        let t = sample();
        let good = encode(&t, Dtype::Complex128);
        let p = Path::new("x");
        assert!(decode(&good[..HEADER_LEN - 1], p).is_err());
        assert!(decode(&good[..good.len() - 1], p).is_err());
        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(decode(&bad, p).is_err());
        let mut bad = good.clone();
        bad[4] = 9;
        assert!(decode(&bad, p).is_err());
        let mut bad = good;
        bad[6] = 7;
        assert!(decode(&bad, p).is_err());
    }
}
