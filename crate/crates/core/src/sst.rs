//! First- and second-order STFT-based synchrosqueezing (frequency axis only).
//!
//! Both always use centered phases, so that summing a frequency band of the
//! squeezed matrix recovers the signal (see [`sst_band_reconstruct`]).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::TfcGrid;
use crate::reassign::{chirp_estimate, Companions, Threshold};
use crate::ridge::RidgeSet;
use crate::signal::Signal;
use crate::transform::{stft_multi, CtEngine, CtOptions, PhaseConvention, TfMatrix};
use crate::window::{Companion, WindowBank, WindowFamily};

const TWO_PI_I: Complex64 = Complex64::new(0.0, 2.0 * PI);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SstOrder {
    First,
    Second,
}

#[derive(Debug, Clone)]
pub struct SstOutput {
    /// STFT with window `h`.
    pub w: TfMatrix<Complex64>,
    /// Squeezed matrix.
    pub s: TfMatrix<Complex64>,
    /// Per frame, the sum of `W` over all contributions that landed on the grid.
    pub contributed: Vec<Complex64>,
    /// `|W|`-weighted mean chirp-rate estimate (Hz/s) of the entries squeezed
    /// into each bin. Zero for first order.
    pub chirp_hzps: TfMatrix<f64>,
    pub nu: f64,
}

fn sst(signal: &Signal, bank: &WindowBank, grid: &TfcGrid, engine: CtEngine, threshold: Threshold, order: SstOrder) -> Result<SstOutput> {
    let ws: Vec<Vec<f64>> = Companion::ALL.iter().map(|&c| bank.sample_units(c)).collect();
    let refs: Vec<&[f64]> = match order {
        SstOrder::First => vec![&ws[0], &ws[1], &ws[3]],
        SstOrder::Second => ws.iter().map(|w| w.as_slice()).collect(),
    };
    let opts = CtOptions { convention: PhaseConvention::Centered, engine };
    let mats = stft_multi(signal, &refs, grid, opts)?;
    let w = &mats[0];
    let max = w.as_slice().iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let nu = threshold.resolve(max)?;
    let fs = grid.sample_rate_hz;
    let mut s = TfMatrix::<Complex64>::zeros(*grid, signal.t0_s());
    let mut contributed = vec![Complex64::new(0.0, 0.0); grid.n_time];
    let mut chirp = TfMatrix::<f64>::zeros(*grid, signal.t0_s());
    let mut mass = TfMatrix::<f64>::zeros(*grid, signal.t0_s());
    for n in 0..grid.n_time {
        for j in 0..grid.n_freq() {
            let v = w.get(j, n);
            if v.norm() <= nu {
                continue;
            }
            let wp = mats[1].get(j, n);
            let omega1 = grid.freq_norm(j) + (-wp / (TWO_PI_I * v)).re;
            let (omega, q) = match order {
                SstOrder::First => (omega1, 0.0),
                SstOrder::Second => {
                    let t: Companions = std::array::from_fn(|k| mats[k].get(j, n));
                    let q = chirp_estimate(&t, 0.0).unwrap_or(0.0);
                    (omega1 - q * (t[3] / v).re, q)
                }
            };
            if !omega.is_finite() {
                continue;
            }
            let jt = (omega * fs / grid.freq_step_hz()).round();
            if jt >= 0.0 && jt <= grid.m as f64 {
                let jt = jt as usize;
                s.set(jt, n, s.get(jt, n) + v);
                contributed[n] += v;
                chirp.set(jt, n, chirp.get(jt, n) + v.norm() * q * fs * fs);
                mass.set(jt, n, mass.get(jt, n) + v.norm());
            }
        }
    }
    for j in 0..grid.n_freq() {
        for n in 0..grid.n_time {
            let m = mass.get(j, n);
            if m > 0.0 {
                chirp.set(j, n, chirp.get(j, n) / m);
            }
        }
    }
    Ok(SstOutput { w: mats.into_iter().next().unwrap(), s, contributed, chirp_hzps: chirp, nu })
}

/// First-order SST: `omega = xi + Re(-W' / (2 pi i W))`.
pub fn sst1(signal: &Signal, bank: &WindowBank, grid: &TfcGrid, threshold: Threshold) -> Result<SstOutput> {
    sst(signal, bank, grid, CtEngine::Folded, threshold, SstOrder::First)
}

/// Second-order SST: the first-order estimate corrected by
/// `-q Re(W_x / W)`, with `q` the chirp-rate estimate at `lambda = 0`.
pub fn sst2(signal: &Signal, bank: &WindowBank, grid: &TfcGrid, threshold: Threshold) -> Result<SstOutput> {
    sst(signal, bank, grid, CtEngine::Folded, threshold, SstOrder::Second)
}

/// Band integral of a centered SST matrix around `ridge_hz`, divided by `g(0)`:
/// `f(n) = sum_{|xi_j - ridge(n)| <= delta} S(j, n) / (2M g(0))`.
///
/// The frequency grid must be fine enough that `g` is negligible at `+-2M`
/// samples, otherwise the band sum aliases distant samples into `f(n)`.
pub fn sst_band_reconstruct(
    s: &TfMatrix<Complex64>,
    ridge_hz: &[f64],
    delta_hz: f64,
    family: &WindowFamily,
) -> Result<Vec<Complex64>> {
    let g0 = family.eval(0.0);
    if g0 == 0.0 {
        return Err(Error::UnsupportedWindow(format!("g(0) = 0 for n = {}", family.n)));
    }
    let grid = s.grid;
    if ridge_hz.len() != grid.n_time {
        return Err(Error::Shape(format!("ridge has {} frames, matrix has {}", ridge_hz.len(), grid.n_time)));
    }
    let norm = 1.0 / ((2 * grid.m) as f64 * g0);
    Ok((0..grid.n_time)
        .map(|n| {
            let r = ridge_hz[n];
            let acc: Complex64 = (0..grid.n_freq())
                .filter(|&j| (grid.freq_hz(j) - r).abs() <= delta_hz)
                .map(|j| s.get(j, n))
                .sum();
            acc * norm
        })
        .collect())
}

/// Snaps each ridge to the strongest bin of `|S|` within `halfwidth_hz` of
/// its current value, frame by frame, and carries it through frames without
/// cluster support from the neighbouring frame.
pub fn track_tf_ridges(s: &TfMatrix<Complex64>, ridges: &RidgeSet, halfwidth_hz: f64) -> Result<RidgeSet> {
    let g = s.grid;
    if ridges.n_time() != g.n_time {
        return Err(Error::Shape(format!("ridges span {} frames, matrix has {}", ridges.n_time(), g.n_time)));
    }
    let step = g.freq_step_hz();
    let argmax = |n: usize, center: f64| -> f64 {
        let lo = ((center - halfwidth_hz) / step).ceil().max(0.0) as usize;
        let hi = (((center + halfwidth_hz) / step).floor().max(0.0) as usize).min(g.m);
        (lo..=hi)
            .filter(|_| lo <= hi)
            .max_by(|&a, &b| s.get(a, n).norm().total_cmp(&s.get(b, n).norm()))
            .filter(|&j| s.get(j, n).norm() > 0.0)
            .map_or(center, |j| g.freq_hz(j))
    };
    let mut out = ridges.clone();
    for c in &mut out.curves {
        let nt = c.omega_hz.len();
        let Some(first) = c.valid.iter().position(|&v| v) else { continue };
        for n in 0..nt {
            if c.valid[n] {
                c.omega_hz[n] = argmax(n, c.omega_hz[n]);
            }
        }
        for n in first + 1..nt {
            if !c.valid[n] {
                c.omega_hz[n] = argmax(n, c.omega_hz[n - 1]);
            }
        }
        for n in (0..first).rev() {
            c.omega_hz[n] = argmax(n, c.omega_hz[n + 1]);
        }
    }
    Ok(out)
}

/// Fraction of `|S|` per frame lying within `delta_hz` of `ridge_hz`.
pub fn band_energy_fraction(s: &TfMatrix<Complex64>, n: usize, ridge_hz: &[f64], delta_hz: f64) -> f64 {
    let g = s.grid;
    let total: f64 = (0..g.n_freq()).map(|j| s.get(j, n).norm()).sum();
    if total == 0.0 {
        return 0.0;
    }
    let inside: f64 = (0..g.n_freq())
        .filter(|&j| ridge_hz.iter().any(|r| (g.freq_hz(j) - r).abs() <= delta_hz))
        .map(|j| s.get(j, n).norm())
        .sum();
    inside / total
}
