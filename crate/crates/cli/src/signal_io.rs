//! Signal ingestion: CSV, raw little-endian complex128, mono PCM16 WAV.

use std::f64::consts::PI;
use std::path::Path;

use sct_core::{Complex64, Signal};

use crate::error::{usage, CliError, Result};

#[derive(Debug, Clone, Copy, Default)]
pub struct InputOptions {
    /// Required for raw input; overrides the rate found in a CSV time column.
    pub sample_rate_hz: Option<f64>,
    pub downsample: Option<usize>,
    /// Low-pass before decimating.
    pub lowpass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Csv,
    Wav,
    Raw,
}

fn kind_of(path: &Path) -> Kind {
    match path.extension().and_then(|e| e.to_str()).map(|e| e.to_ascii_lowercase()).as_deref() {
        Some("csv") => Kind::Csv,
        Some("wav") => Kind::Wav,
        _ => Kind::Raw,
    }
}

pub fn read_signal(path: &Path, opts: &InputOptions) -> Result<Signal> {
    if !path.exists() {
        return Err(CliError::io(path, std::io::Error::new(std::io::ErrorKind::NotFound, "no such file")));
    }
    let sig = match kind_of(path) {
        Kind::Csv => read_csv(path, opts.sample_rate_hz)?,
        Kind::Wav => read_wav(path)?,
        Kind::Raw => {
            let Some(fs) = opts.sample_rate_hz else {
                return usage("raw input needs --fs");
            };
            read_raw(path, fs)?
        }
    };
    match opts.downsample {
        None | Some(1) => Ok(sig),
        Some(0) => usage("--downsample must be at least 1"),
        Some(k) => {
            let sig = if opts.lowpass { lowpass(&sig, k)? } else { sig };
            Ok(sig.decimate(k)?)
        }
    }
}

/// Mono 16-bit PCM, scaled to [-1, 1).
pub fn read_wav(path: &Path) -> Result<Signal> {
    let reader = hound::WavReader::open(path).map_err(|e| match e {
        hound::Error::IoError(io) if io.kind() != std::io::ErrorKind::UnexpectedEof => CliError::io(path, io),
        other => CliError::format(path, other.to_string()),
    })?;
    let spec = reader.spec();
    if spec.channels != 1 || spec.bits_per_sample != 16 || spec.sample_format != hound::SampleFormat::Int {
        return Err(CliError::format(
            path,
            format!(
                "need mono 16-bit PCM, got {} channel(s), {} bit {:?}",
                spec.channels, spec.bits_per_sample, spec.sample_format
            ),
        ));
    }
    let samples: Vec<f64> = reader
        .into_samples::<i16>()
        .map(|s| s.map(|v| v as f64 / 32768.0))
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| CliError::format(path, e.to_string()))?;
    if samples.is_empty() {
        return Err(CliError::format(path, "WAV file has no samples"));
    }
    Signal::from_real(&samples, spec.sample_rate as f64, 0.0).map_err(|e| CliError::format(path, e.to_string()))
}

/// Interleaved little-endian `f64` pairs `(re, im)`.
pub fn read_raw(path: &Path, fs: f64) -> Result<Signal> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    if bytes.is_empty() || bytes.len() % 16 != 0 {
        return Err(CliError::format(path, format!("raw input is {} bytes, not a multiple of 16", bytes.len())));
    }
    let z = bytes
        .chunks_exact(16)
        .map(|c| Complex64::new(f64::from_le_bytes(c[..8].try_into().unwrap()), f64::from_le_bytes(c[8..].try_into().unwrap())))
        .collect();
    Signal::new(z, fs, 0.0).map_err(|e| CliError::format(path, e.to_string()))
}

/// Columns `re` (required), `im` and `t_s` (optional), found by header name.
pub fn read_csv(path: &Path, fs: Option<f64>) -> Result<Signal> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| CliError::format(path, e.to_string()))?;
    let headers = rdr.headers().map_err(|e| CliError::format(path, e.to_string()))?.clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name);
    let re_col = col("re").ok_or_else(|| CliError::format(path, "CSV needs an `re` column"))?;
    let (im_col, t_col) = (col("im"), col("t_s"));
    let (mut z, mut t) = (Vec::new(), Vec::new());
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::format(path, e.to_string()))?;
        let num = |c: usize| -> Result<f64> {
            let v = rec.get(c).unwrap_or("").trim();
            v.parse().map_err(|_| CliError::format(path, format!("row {}: `{v}` is not a number", i + 2)))
        };
        z.push(Complex64::new(num(re_col)?, im_col.map(num).transpose()?.unwrap_or(0.0)));
        if let Some(c) = t_col {
            t.push(num(c)?);
        }
    }
    if z.is_empty() {
        return Err(CliError::format(path, "CSV has no data rows"));
    }
    let t0 = t.first().copied().unwrap_or(0.0);
    let rate = match (fs, t.len()) {
        (Some(fs), _) => fs,
        (None, n) if n >= 2 => (n - 1) as f64 / (t[n - 1] - t[0]),
        _ => return usage(format!("{}: no time column with two or more rows; pass --fs", path.display())),
    };
    Signal::new(z, rate, t0).map_err(|e| CliError::format(path, e.to_string()))
}

/// Zero-phase Hamming-windowed sinc with cutoff at the post-decimation
/// Nyquist frequency; the record is zero-extended at both ends.
pub fn lowpass(sig: &Signal, factor: usize) -> Result<Signal> {
    let half = 8 * factor;
    let fc = 0.5 / factor as f64;
    let taps: Vec<f64> = (0..=2 * half)
        .map(|i| {
            let k = i as f64 - half as f64;
            let sinc = if k == 0.0 { 2.0 * fc } else { (2.0 * PI * fc * k).sin() / (PI * k) };
            sinc * (0.54 + 0.46 * (PI * k / half as f64).cos())
        })
        .collect();
    let dc: f64 = taps.iter().sum();
    let x = sig.samples();
    let n = x.len() as isize;
    let y = (0..n)
        .map(|i| {
            taps.iter()
                .enumerate()
                .filter_map(|(k, &h)| {
                    let src = i + k as isize - half as isize;
                    (0..n).contains(&src).then(|| x[src as usize] * (h / dc))
                })
                .sum()
        })
        .collect();
    Ok(Signal::new(y, sig.sample_rate_hz(), sig.t0_s())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowpass_keeps_slow_and_kills_fast() {
        let fs = 800.0;
        let slow = Signal::from_fn(4000, fs, 0.0, |x| Complex64::cis(2.0 * PI * 5.0 * x)).unwrap();
        let fast = Signal::from_fn(4000, fs, 0.0, |x| Complex64::cis(2.0 * PI * 300.0 * x)).unwrap();
        let (ys, yf) = (lowpass(&slow, 8).unwrap(), lowpass(&fast, 8).unwrap());
        // Interior samples only; the ends see zero padding.
        for i in 200..3800 {
            assert!((ys.samples()[i] - slow.samples()[i]).norm() < 1e-2, "{i}");
            assert!(yf.samples()[i].norm() < 1e-2, "{i}");
        }
    }

    #[test]
    fn extension_dispatch() {
        assert_eq!(kind_of(Path::new("a.CSV")), Kind::Csv);
        assert_eq!(kind_of(Path::new("a.wav")), Kind::Wav);
        assert_eq!(kind_of(Path::new("a.bin")), Kind::Raw);
        assert_eq!(kind_of(Path::new("a")), Kind::Raw);
    }
}
