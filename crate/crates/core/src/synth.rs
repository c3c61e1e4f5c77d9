//! Test-signal synthesis: crossing linear chirps, smoothed-Brownian random
//! processes and Student-t observation noise.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StudentT};

use crate::error::{param, Result};
use crate::metrics::snr_db;
use crate::signal::Signal;

/// Generator for substream `stream` of the master seed `seed`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Brownian path `W(i dx)`, `i = 0..n`, started at zero.
pub fn brownian_path(n: usize, dx: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let step = Normal::new(0.0, dx.sqrt()).expect("positive step");
    let mut w = 0.0;
    (0..n)
        .map(|i| {
            if i > 0 {
                w += step.sample(rng);
            }
            w
        })
        .collect()
}

/// Brownian path smoothed by a Gaussian of standard deviation `bandwidth`
/// samples. The path is simulated `6 * bandwidth` samples beyond both ends
/// and cropped after smoothing, so the output has no edge bias.
pub fn smoothed_brownian(bandwidth: f64, n: usize, dx: f64, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    if !(bandwidth > 0.0) || !(dx > 0.0) || n == 0 {
        return param("smoothed Brownian motion needs positive bandwidth, spacing and length");
    }
    let half = (6.0 * bandwidth).ceil() as usize;
    let path = brownian_path(n + 2 * half, dx, rng);
    let kernel: Vec<f64> = (0..=2 * half)
        .map(|k| {
            let u = (k as f64 - half as f64) / bandwidth;
            (-0.5 * u * u).exp()
        })
        .collect();
    let norm: f64 = kernel.iter().sum();
    Ok((0..n)
        .map(|i| kernel.iter().zip(&path[i..i + 2 * half + 1]).map(|(k, w)| k * w).sum::<f64>() / norm)
        .collect())
}

/// Cumulative trapezoid integral starting at zero.
pub fn cumtrapz(y: &[f64], dx: f64) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(y.len());
    for i in 0..y.len() {
        if i > 0 {
            acc += 0.5 * dx * (y[i - 1] + y[i]);
        }
        out.push(acc);
    }
    out
}

/// `Psi = z1 + z2 x + z3 x^2 + z4 Phi_z5 + z6 int int Phi_z7`, bandwidths in samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomProcessSpec {
    pub zeta: [f64; 7],
    pub n: usize,
    pub dx: f64,
    pub seed: u64,
    /// Substreams `stream` and `stream + 1` are used for the two Brownian terms.
    pub stream: u64,
}

/// A realization with its first two derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessRealization {
    pub value: Vec<f64>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
}

fn nonconstant_brownian(bw: f64, n: usize, dx: f64, seed: u64, stream: u64) -> Result<Vec<f64>> {
    // Regenerate on the next substream in the (measure-zero) flat case.
    for s in 0..16u64 {
        let phi = smoothed_brownian(bw, n, dx, &mut substream(seed, stream + 1000 * s))?;
        if phi.iter().any(|&v| v != phi[0]) {
            return Ok(phi);
        }
    }
    param("could not draw a nonconstant Brownian path")
}

pub fn random_process(spec: &RandomProcessSpec) -> Result<ProcessRealization> {
    let [z1, z2, z3, z4, z5, z6, z7] = spec.zeta;
    if (z4 != 0.0 && !(z5 > 0.0)) || (z6 != 0.0 && !(z7 > 0.0)) {
        return param("active Brownian terms need a positive bandwidth");
    }
    let (n, dx) = (spec.n, spec.dx);
    let xs: Vec<f64> = (0..n).map(|i| i as f64 * dx).collect();
    let mut value: Vec<f64> = xs.iter().map(|x| z1 + z2 * x + z3 * x * x).collect();
    let mut d1: Vec<f64> = xs.iter().map(|x| z2 + 2.0 * z3 * x).collect();
    let mut d2 = vec![2.0 * z3; n];
    if z4 != 0.0 {
        // Min-max scaling keeps the term between 0 and z4.
        let phi = nonconstant_brownian(z5, n, dx, spec.seed, spec.stream)?;
        let (lo, hi) = phi.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        let scaled: Vec<f64> = phi.iter().map(|v| (v - lo) / (hi - lo)).collect();
        let ds = cumderiv(&scaled, dx);
        let dds = cumderiv(&ds, dx);
        for i in 0..n {
            value[i] += z4 * scaled[i];
            d1[i] += z4 * ds[i];
            d2[i] += z4 * dds[i];
        }
    }
    if z6 != 0.0 {
        let phi = nonconstant_brownian(z7, n, dx, spec.seed, spec.stream + 1)?;
        let sup = phi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let scaled: Vec<f64> = phi.iter().map(|v| v / sup).collect();
        let once = cumtrapz(&scaled, dx);
        let twice = cumtrapz(&once, dx);
        for i in 0..n {
            value[i] += z6 * twice[i];
            d1[i] += z6 * once[i];
            d2[i] += z6 * scaled[i];
        }
    }
    Ok(ProcessRealization { value, d1, d2 })
}

/// Central-difference derivative (one-sided at the ends).
fn cumderiv(y: &[f64], dx: f64) -> Vec<f64> {
    let n = y.len();
    if n < 2 {
        return vec![0.0; n];
    }
    (0..n)
        .map(|i| match i {
            0 => (y[1] - y[0]) / dx,
            i if i == n - 1 => (y[n - 1] - y[n - 2]) / dx,
            i => (y[i + 1] - y[i - 1]) / (2.0 * dx),
        })
        .collect()
}

/// Components, ground truth and the observed signal.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticScene {
    pub sample_rate_hz: f64,
    pub t0_s: f64,
    pub components: Vec<Vec<Complex64>>,
    pub amplitude: Vec<Vec<f64>>,
    /// Phase in cycles.
    pub phase: Vec<Vec<f64>>,
    pub if_hz: Vec<Vec<f64>>,
    pub chirp_hzps: Vec<Vec<f64>>,
    /// Real noise added to the real channel.
    pub noise: Vec<f64>,
    pub mixed: Signal,
    pub snr_db: f64,
}

impl SyntheticScene {
    pub fn len(&self) -> usize {
        self.mixed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mixed.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|n| self.mixed.time_of(n)).collect()
    }

    pub fn clean(&self) -> Vec<Complex64> {
        (0..self.len()).map(|n| self.components.iter().map(|c| c[n]).sum()).collect()
    }
}

/// `f1 = exp(2 pi i 4 x^2)` and `f2 = exp(2 pi i (-pi x^2 + (24 + 6 pi) x))`,
/// whose frequencies `8x` and `-2 pi x + 24 + 6 pi` cross at `(3 s, 24 Hz)`.
pub fn crossing_chirp_pair(sample_rate_hz: f64, start_s: f64, end_s: f64) -> Result<SyntheticScene> {
    if !(end_s > start_s) {
        return param("span must be increasing");
    }
    let n = ((end_s - start_s) * sample_rate_hz).round() as usize + 1;
    let xs: Vec<f64> = (0..n).map(|i| start_s + i as f64 / sample_rate_hz).collect();
    let b = 24.0 + 6.0 * PI;
    let phase = vec![
        xs.iter().map(|x| 4.0 * x * x).collect::<Vec<_>>(),
        xs.iter().map(|x| -PI * x * x + b * x).collect::<Vec<_>>(),
    ];
    let components: Vec<Vec<Complex64>> =
        phase.iter().map(|p| p.iter().map(|v| Complex64::cis(2.0 * PI * v)).collect()).collect();
    let mixed: Vec<Complex64> = (0..n).map(|i| components[0][i] + components[1][i]).collect();
    Ok(SyntheticScene {
        sample_rate_hz,
        t0_s: start_s,
        amplitude: vec![vec![1.0; n]; 2],
        if_hz: vec![xs.iter().map(|x| 8.0 * x).collect(), xs.iter().map(|x| -2.0 * PI * x + b).collect()],
        chirp_hzps: vec![vec![8.0; n], vec![-2.0 * PI; n]],
        components,
        phase,
        noise: vec![0.0; n],
        mixed: Signal::new(mixed, sample_rate_hz, start_s)?,
        snr_db: f64::INFINITY,
    })
}

/// I.i.d. Student-t noise of `dof` degrees of freedom times `scale`.
pub fn student_t_noise(n: usize, dof: f64, scale: f64, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    if !(dof > 2.0) {
        return param(format!("Student-t noise needs dof > 2, got {dof}"));
    }
    let t = StudentT::new(dof).map_err(|e| crate::error::Error::Parameter(e.to_string()))?;
    Ok((0..n).map(|_| scale * t.sample(rng)).collect())
}

/// Add real Student-t noise to the real channel; returns the noisy signal,
/// the noise and the realized SNR of the real channel in dB.
pub fn add_student_t_noise(signal: &Signal, dof: f64, scale: f64, seed: u64) -> Result<(Signal, Vec<f64>, f64)> {
    let noise = student_t_noise(signal.len(), dof, scale, &mut substream(seed, 0))?;
    let noisy: Vec<Complex64> = signal.samples().iter().zip(&noise).map(|(z, e)| z + e).collect();
    let re: Vec<f64> = signal.samples().iter().map(|z| z.re).collect();
    let snr = snr_db(&re, &noise);
    Ok((Signal::new(noisy, signal.sample_rate_hz(), signal.t0_s())?, noise, snr))
}

/// Settings for the random two-component scene.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SceneSpec {
    pub sample_rate_hz: f64,
    pub duration_s: f64,
    pub amplitude_zeta: [f64; 7],
    pub phase_zeta: [[f64; 7]; 2],
    /// Phase scale: `phi_k(x) = kappa T Psi_k(x / T)`, so the frequency is
    /// `kappa Psi_k'(x / T)` Hz.
    pub kappa: f64,
    pub noise_dof: f64,
    pub noise_scale: f64,
}

impl Default for SceneSpec {
    fn default() -> Self {
        Self {
            sample_rate_hz: 100.0,
            duration_s: 10.0,
            amplitude_zeta: [2.0, 0.0, 0.0, 1.0, 200.0, 0.0, 0.0],
            phase_zeta: [[0.0, 1.0, 4.5, 0.0, 0.0, 0.2, 400.0], [0.0, 12.0, -4.0, 0.0, 0.0, 0.25, 300.0]],
            kappa: 3.5,
            noise_dof: 4.0,
            noise_scale: 1.0,
        }
    }
}

/// Two components with smoothed-Brownian amplitudes and phases plus t noise.
/// The processes are drawn on normalized time `u = x / T`.
pub fn random_scene(spec: &SceneSpec, seed: u64) -> Result<SyntheticScene> {
    let fs = spec.sample_rate_hz;
    let n = (spec.duration_s * fs).round() as usize + 1;
    let span = spec.duration_s;
    let du = 1.0 / (n - 1) as f64;
    let mut components = Vec::new();
    let (mut amplitude, mut phase, mut ifs, mut chirps) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for k in 0..2u64 {
        let a = random_process(&RandomProcessSpec { zeta: spec.amplitude_zeta, n, dx: du, seed, stream: 10 * k + 1 })?;
        let p = random_process(&RandomProcessSpec { zeta: spec.phase_zeta[k as usize], n, dx: du, seed, stream: 10 * k + 3 })?;
        let ph: Vec<f64> = p.value.iter().map(|v| spec.kappa * span * v).collect();
        components.push((0..n).map(|i| a.value[i] * Complex64::cis(2.0 * PI * ph[i])).collect::<Vec<_>>());
        ifs.push(p.d1.iter().map(|v| spec.kappa * v).collect());
        chirps.push(p.d2.iter().map(|v| spec.kappa * v / span).collect());
        amplitude.push(a.value);
        phase.push(ph);
    }
    let clean: Vec<Complex64> = (0..n).map(|i| components[0][i] + components[1][i]).collect();
    let clean = Signal::new(clean, fs, 0.0)?;
    let (mixed, noise, snr) = add_student_t_noise(&clean, spec.noise_dof, spec.noise_scale, seed ^ 0x5eed)?;
    Ok(SyntheticScene {
        sample_rate_hz: fs,
        t0_s: 0.0,
        components,
        amplitude,
        phase,
        if_hz: ifs,
        chirp_hzps: chirps,
        noise,
        mixed,
        snr_db: snr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_truth() {
        let s = crossing_chirp_pair(100.0, 1.0, 5.0).unwrap();
        assert_eq!(s.len(), 401);
        let i3 = s.mixed.index_of(3.0).unwrap();
        assert!((s.if_hz[0][i3] - 24.0).abs() < 1e-12);
        assert!((s.if_hz[1][i3] - 24.0).abs() < 1e-12);
        assert!(s.components.iter().flatten().all(|z| (z.norm() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn brownian_is_deterministic() {
        let a = smoothed_brownian(20.0, 300, 0.01, &mut substream(4, 1)).unwrap();
        let b = smoothed_brownian(20.0, 300, 0.01, &mut substream(4, 1)).unwrap();
        assert_eq!(a, b);
        let c = smoothed_brownian(20.0, 300, 0.01, &mut substream(4, 2)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn brownian_increment_variance() {
        let dx = 0.01;
        let w = brownian_path(10_001, dx, &mut substream(9, 0));
        let inc: Vec<f64> = w.windows(2).map(|p| p[1] - p[0]).collect();
        let m = inc.iter().sum::<f64>() / inc.len() as f64;
        let v = inc.iter().map(|d| (d - m).powi(2)).sum::<f64>() / (inc.len() - 1) as f64;
        assert!((v / dx - 1.0).abs() < 0.2);
    }

    #[test]
    fn wide_smoothing_is_flat() {
        // Compare against the unsmoothed path the smoother actually consumed.
        let mut rng = substream(3, 0);
        let raw = brownian_path(200 + 2 * 30_000, 0.01, &mut rng.clone());
        let (_, sd) = crate::metrics::mean_sd(&raw);
        let s = smoothed_brownian(5000.0, 200, 0.01, &mut rng).unwrap();
        let (lo, hi) = s.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        assert!(hi - lo < 0.05 * sd, "{} vs {}", hi - lo, sd);
    }

    #[test]
    fn amplitude_process_range() {
        let r = random_process(&RandomProcessSpec { zeta: [2.0, 0.0, 0.0, 1.0, 200.0, 0.0, 0.0], n: 1001, dx: 0.01, seed: 5, stream: 0 })
            .unwrap();
        let (lo, hi) = r.value.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        assert!(lo >= 2.0 - 1e-9 && hi <= 3.0 + 1e-9);
        assert!((lo - 2.0).abs() < 1e-9 && (hi - 3.0).abs() < 1e-9);
    }

    #[test]
    fn polynomial_only() {
        let r = random_process(&RandomProcessSpec { zeta: [1.0, 2.0, 3.0, 0.0, 0.0, 0.0, 0.0], n: 11, dx: 0.1, seed: 0, stream: 0 })
            .unwrap();
        for (i, v) in r.value.iter().enumerate() {
            let x = i as f64 * 0.1;
            assert!((v - (1.0 + 2.0 * x + 3.0 * x * x)).abs() < 1e-12);
        }
    }

    #[test]
    fn phase_process_is_increasing() {
        for seed in 0..20 {
            let r = random_process(&RandomProcessSpec { zeta: [0.0, 1.0, 4.5, 0.0, 0.0, 0.2, 400.0], n: 1001, dx: 0.001, seed, stream: 0 })
                .unwrap();
            assert!(r.d1.iter().all(|&v| v > 0.0));
        }
    }

    #[test]
    fn t4_is_heavy_tailed() {
        let x = student_t_noise(100_000, 4.0, 1.0, &mut substream(1, 0)).unwrap();
        let m = x.iter().sum::<f64>() / x.len() as f64;
        let m2 = x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / x.len() as f64;
        let m4 = x.iter().map(|v| (v - m).powi(4)).sum::<f64>() / x.len() as f64;
        assert!(m4 / (m2 * m2) > 3.0);
        assert!(student_t_noise(10, 2.0, 1.0, &mut substream(1, 0)).is_err());
    }

    #[test]
    fn zero_noise_has_infinite_snr() {
        let s = Signal::from_real(&[1.0, -1.0, 0.5], 1.0, 0.0).unwrap();
        let (_, _, snr) = add_student_t_noise(&s, 4.0, 0.0, 1).unwrap();
        assert_eq!(snr, f64::INFINITY);
    }
}
