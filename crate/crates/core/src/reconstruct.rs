//! Mode reconstruction from ridge estimates through the per-frame mixing
//! system `X_hat(t) = A(t) X(t)`, with `a_ij = g_check(w_i - w_j, m_i - m_j)`.

use std::f64::consts::PI;

use faer::prelude::*;
use faer::Mat;
use num_complex::Complex64;

use crate::analytic::g_check;
use crate::error::{Error, Result};
use crate::par;
use crate::ridge::RidgeSet;
use crate::signal::Signal;
use crate::transform::evaluate_ct_at;
use crate::window::WindowBank;

/// Frames whose mixing matrix is worse conditioned than this use a
/// truncated pseudo-inverse.
pub const CONDITION_LIMIT: f64 = 1e6;

#[derive(Debug, Clone, PartialEq)]
pub struct MixingSystem {
    pub k: usize,
    /// Row-major `K x K`.
    pub a: Vec<Complex64>,
    pub x_hat: Vec<Complex64>,
    pub condition: f64,
}

impl MixingSystem {
    fn matrix(&self) -> Mat<Complex64> {
        Mat::from_fn(self.k, self.k, |i, j| self.a[i * self.k + j])
    }

    /// Solve for the component values. Returns `(values, degraded)`.
    pub fn solve(&self) -> (Vec<Complex64>, bool) {
        let a = self.matrix();
        let rhs = Mat::from_fn(self.k, 1, |i, _| self.x_hat[i]);
        if self.condition <= CONDITION_LIMIT {
            let x = a.partial_piv_lu().solve(&rhs);
            return ((0..self.k).map(|i| x.read(i, 0)).collect(), false);
        }
        let svd = a.svd();
        let (u, s, v) = (svd.u(), svd.s_diagonal(), svd.v());
        let smax = (0..self.k).map(|i| s.read(i).re).fold(0.0, f64::max);
        let mut x = vec![Complex64::new(0.0, 0.0); self.k];
        for r in 0..self.k {
            let sr = s.read(r).re;
            if !(sr > smax / CONDITION_LIMIT) {
                continue;
            }
            let proj: Complex64 = (0..self.k).map(|i| u.read(i, r).conj() * self.x_hat[i]).sum();
            for (i, xi) in x.iter_mut().enumerate() {
                *xi += v.read(i, r) * proj / sr;
            }
        }
        (x, true)
    }
}

/// Ratio of extreme singular values (infinite when singular).
pub fn condition_number(a: &[Complex64], k: usize) -> f64 {
    let m = Mat::from_fn(k, k, |i, j| a[i * k + j]);
    let s = m.singular_values();
    let hi = s.iter().copied().fold(0.0, f64::max);
    let lo = s.iter().copied().fold(f64::INFINITY, f64::min);
    if lo > 0.0 {
        hi / lo
    } else {
        f64::INFINITY
    }
}

/// How the mixing matrix entries are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MixingModel {
    /// Closed-form `g_check` of the continuous window.
    #[default]
    Analytic,
    /// The same windowed sum that produces `X_hat`, clipped at the record
    /// ends, so frames near the boundaries stay consistent.
    Truncated,
}

/// `dt * sum_k h(x_k) exp(-2 pi i xi x_k - pi i lambda x_k^2)` over the
/// window taps that fall inside a record of `len` samples at sample `n`.
fn truncated_g_check(bank: &WindowBank, len: usize, n: usize, xi: f64, lambda: f64) -> Complex64 {
    let k0 = bank.half_len;
    let lo = k0.saturating_sub(n);
    let hi = (len + k0 - n).min(bank.len());
    let mut acc = Complex64::new(0.0, 0.0);
    for k in lo..hi.max(lo) {
        let x = (k as f64 - k0 as f64) * bank.dt_s;
        acc += bank.h[k] * Complex64::cis(-2.0 * PI * xi * x - PI * lambda * x * x);
    }
    acc * bank.dt_s
}

/// Mixing system at sample `n` for ridge values `omegas` (Hz) and `mus` (Hz/s).
pub fn build_mixing_system(signal: &Signal, bank: &WindowBank, n: usize, omegas: &[f64], mus: &[f64]) -> Result<MixingSystem> {
    build_mixing_system_with(signal, bank, n, omegas, mus, MixingModel::Analytic)
}

pub fn build_mixing_system_with(
    signal: &Signal,
    bank: &WindowBank,
    n: usize,
    omegas: &[f64],
    mus: &[f64],
    model: MixingModel,
) -> Result<MixingSystem> {
    let k = omegas.len();
    if k == 0 || mus.len() != k {
        return Err(Error::Shape("ridge value lists must be nonempty and equal length".into()));
    }
    if n >= signal.len() {
        return Err(Error::Range(format!("sample {n} outside the record")));
    }
    let mut a = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            let (xi, la) = (omegas[i] - omegas[j], mus[i] - mus[j]);
            a.push(match model {
                MixingModel::Analytic => g_check(&bank.family, xi, la)?,
                MixingModel::Truncated => truncated_g_check(bank, signal.len(), n, xi, la),
            });
        }
    }
    let x_hat = (0..k).map(|i| evaluate_ct_at(signal, bank, n, omegas[i], mus[i])).collect();
    let condition = condition_number(&a, k);
    Ok(MixingSystem { k, a, x_hat, condition })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructedModes {
    pub modes: Vec<Vec<Complex64>>,
    /// True where the pseudo-inverse was used.
    pub degraded: Vec<bool>,
    /// True where every ridge was observed (not interpolated).
    pub valid: Vec<bool>,
}

/// Solve the mixing system at every sample.
pub fn reconstruct_modes(signal: &Signal, ridges: &RidgeSet, bank: &WindowBank) -> Result<ReconstructedModes> {
    reconstruct_modes_with(signal, ridges, bank, MixingModel::Analytic)
}

pub fn reconstruct_modes_with(signal: &Signal, ridges: &RidgeSet, bank: &WindowBank, model: MixingModel) -> Result<ReconstructedModes> {
    let k = ridges.k();
    if k == 0 {
        return Err(Error::Reconstruction("no ridges given".into()));
    }
    if ridges.n_time() != signal.len() {
        return Err(Error::Shape(format!("ridges cover {} frames, signal has {}", ridges.n_time(), signal.len())));
    }
    g_check(&bank.family, 0.0, 0.0)?;
    let frames = par::map_range(signal.len(), |n| {
        let om: Vec<f64> = ridges.curves.iter().map(|c| c.omega_hz[n]).collect();
        let mu: Vec<f64> = ridges.curves.iter().map(|c| c.mu_hzps[n]).collect();
        let sys = build_mixing_system_with(signal, bank, n, &om, &mu, model).expect("validated inputs");
        sys.solve()
    });
    let degraded: Vec<bool> = frames.iter().map(|f| f.1).collect();
    if degraded.iter().all(|&d| d) {
        return Err(Error::Reconstruction("every frame is ill-conditioned".into()));
    }
    let modes = (0..k).map(|i| frames.iter().map(|f| f.0[i]).collect()).collect();
    let valid = (0..signal.len()).map(|n| ridges.curves.iter().all(|c| c.valid[n])).collect();
    Ok(ReconstructedModes { modes, degraded, valid })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::window::WindowFamily;
    use std::f64::consts::PI;

    #[test]
    fn single_mode_matrix() {
        let fam = WindowFamily::gaussian_power(0, 2.0).unwrap();
        let bank = WindowBank::with_default_len(fam, 0.01).unwrap();
        let s = Signal::from_real(&[0.0; 10], 100.0, 0.0).unwrap();
        let sys = build_mixing_system(&s, &bank, 5, &[3.0], &[1.0]).unwrap();
        assert!((sys.a[0] - Complex64::new(2f64.powf(-0.5), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn identical_ridges_are_singular() {
        let bank = WindowBank::with_default_len(WindowFamily::g(0), 0.01).unwrap();
        let s = Signal::from_real(&[1.0; 10], 100.0, 0.0).unwrap();
        let sys = build_mixing_system(&s, &bank, 5, &[3.0, 3.0], &[1.0, 1.0]).unwrap();
        assert!(sys.condition > CONDITION_LIMIT);
        assert!(sys.solve().1);
    }

    #[test]
    fn exact_chirp_recovered() {
        let fs = 100.0;
        let s = Signal::from_fn(801, fs, 0.0, |x| Complex64::cis(2.0 * PI * (5.0 * x + 2.0 * x * x))).unwrap();
        let bank = WindowBank::with_default_len(WindowFamily::g(0), 0.01).unwrap();
        let om = (0..801).map(|n| 5.0 + 4.0 * n as f64 / fs).collect();
        let ridges = RidgeSet::from_truth(vec![om], vec![vec![4.0; 801]], 0.0, fs);
        let rec = reconstruct_modes(&s, &ridges, &bank).unwrap();
        let (num, den) = (250..550).fold((0.0, 0.0), |(a, b), n| {
            (a + (rec.modes[0][n] - s.samples()[n]).norm_sqr(), b + s.samples()[n].norm_sqr())
        });
        assert!((num / den).sqrt() < 1e-2, "{}", (num / den).sqrt());
    }

    #[test]
    fn zero_signal_gives_zero_modes() {
        let bank = WindowBank::with_default_len(WindowFamily::g(0), 0.01).unwrap();
        let s = Signal::from_real(&[0.0; 50], 100.0, 0.0).unwrap();
        let ridges = RidgeSet::from_truth(vec![vec![10.0; 50], vec![20.0; 50]], vec![vec![1.0; 50], vec![-3.0; 50]], 0.0, 100.0);
        let rec = reconstruct_modes(&s, &ridges, &bank).unwrap();
        assert!(rec.modes.iter().flatten().all(|z| z.norm() == 0.0));
    }
}
