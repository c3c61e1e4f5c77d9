//! The discrete time-frequency-chirp-rate grid.
//!
//! Frequency bins are indexed `j = 0..=M` (normalized frequency `j / 2M`
//! cycles/sample). Chirp-rate rows are indexed `c = 0..2M` and carry the
//! signed index `l = c - (M - 1)` (normalized chirp rate `l / 4M^2`
//! cycles/sample^2).

use crate::error::{param, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TfcGrid {
    pub alpha_sq: f64,
    pub m: usize,
    pub sample_rate_hz: f64,
    pub n_time: usize,
}

impl TfcGrid {
    pub fn from_resolution(alpha_sq: f64, n_time: usize, sample_rate_hz: f64) -> Result<Self> {
        if !(alpha_sq > 0.0 && alpha_sq <= 0.5) {
            return param(format!("alpha_sq must lie in (0, 0.5], got {alpha_sq}"));
        }
        if !(sample_rate_hz > 0.0) || !sample_rate_hz.is_finite() {
            return param(format!("sample rate must be positive, got {sample_rate_hz}"));
        }
        let m = (0.5 / alpha_sq).floor() as usize;
        if m > 4096 {
            return param(format!("alpha_sq {alpha_sq} gives an impractically fine grid (M = {m})"));
        }
        Ok(Self { alpha_sq, m, sample_rate_hz, n_time })
    }

    pub fn n_freq(&self) -> usize {
        self.m + 1
    }

    pub fn n_chirp(&self) -> usize {
        2 * self.m
    }

    /// Entries per time frame.
    pub fn frame_len(&self) -> usize {
        self.n_chirp() * self.n_freq()
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.n_chirp(), self.n_freq(), self.n_time)
    }

    /// Signed chirp index of row `c`.
    pub fn chirp_index(&self, c: usize) -> i64 {
        c as i64 - (self.m as i64 - 1)
    }

    /// Row of signed chirp index `l`, if on the grid.
    pub fn chirp_row(&self, l: i64) -> Option<usize> {
        let c = l + self.m as i64 - 1;
        (c >= 0 && (c as usize) < self.n_chirp()).then_some(c as usize)
    }

    /// Row holding `l = 0`.
    pub fn zero_chirp_row(&self) -> usize {
        self.m - 1
    }

    /// Frequency step in Hz.
    pub fn freq_step_hz(&self) -> f64 {
        self.sample_rate_hz / (2 * self.m) as f64
    }

    /// Chirp-rate step in Hz/s.
    pub fn chirp_step_hzps(&self) -> f64 {
        self.sample_rate_hz * self.sample_rate_hz / (4 * self.m * self.m) as f64
    }

    pub fn freq_hz(&self, j: usize) -> f64 {
        j as f64 * self.freq_step_hz()
    }

    pub fn chirp_hzps(&self, c: usize) -> f64 {
        self.chirp_index(c) as f64 * self.chirp_step_hzps()
    }

    /// Normalized frequency of bin `j` in cycles/sample.
    pub fn freq_norm(&self, j: usize) -> f64 {
        j as f64 / (2 * self.m) as f64
    }

    /// Normalized chirp rate of signed index `l` in cycles/sample^2.
    pub fn chirp_norm(&self, l: i64) -> f64 {
        l as f64 / (4 * self.m * self.m) as f64
    }

    /// Nearest `(frequency bin, chirp row)` for physical values.
    pub fn physical_to_bin(&self, freq_hz: f64, chirp_hzps: f64) -> Result<(usize, usize)> {
        let j = (freq_hz / self.freq_step_hz()).round();
        let l = (chirp_hzps / self.chirp_step_hzps()).round();
        if !j.is_finite() || j < 0.0 || j > self.m as f64 {
            return Err(Error::Range(format!("frequency {freq_hz} Hz outside [0, {}] Hz", self.freq_hz(self.m))));
        }
        let c = self
            .chirp_row(l as i64)
            .filter(|_| l.is_finite())
            .ok_or_else(|| Error::Range(format!("chirp rate {chirp_hzps} Hz/s outside the grid")))?;
        Ok((j as usize, c))
    }

    pub fn bin_to_physical(&self, j: usize, c: usize) -> Result<(f64, f64)> {
        if j > self.m || c >= self.n_chirp() {
            return Err(Error::Range(format!("bin ({j}, {c}) outside the grid")));
        }
        Ok((self.freq_hz(j), self.chirp_hzps(c)))
    }

    pub fn time_s(&self, n: usize, t0_s: f64) -> f64 {
        t0_s + n as f64 / self.sample_rate_hz
    }
}
