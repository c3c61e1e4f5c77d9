//! The discrete chirplet transform, the STFT and the TF projection.
//!
//! For a signal `f` of length `N`, a window `h` of length `2K+1` and a grid
//! with `M` frequency steps,
//!
//! ```text
//! T(l, j, n) = sum_k f(n + k - K) h(k) exp(-2 pi i o_k j / 2M) exp(-pi i l o_k^2 / 4M^2)
//! ```
//!
//! with `f` zero outside the record. The phase offset `o_k` is `k - K`
//! (centered on the current sample, the default) or `k` (referenced to the
//! left edge of the window). The two agree up to a unimodular factor and a
//! frequency shear of `l K / 4M^2`, see [`PhaseConvention`].

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::TfcGrid;
use crate::par;
use crate::signal::Signal;
use crate::window::{Companion, WindowBank};

/// Where the phase of each atom is referenced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PhaseConvention {
    /// Offsets measured from the current sample, `o_k = k - K`. Matches the
    /// continuous transform, so magnitudes follow the closed forms.
    Centered,
    /// Offsets measured from the first window sample, `o_k = k`. Here
    /// `T_left(j, l) = c * T_centered(j + l K / (2M), l)` with `|c| = 1`:
    /// the chirp term shears the plane along frequency.
    #[default]
    LeftEdge,
}

/// How the transform sums are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CtEngine {
    /// Plain triple sum over `(l, j, k)` with tabulated phases.
    Direct,
    /// Per chirp row, fold the chirped windowed segment modulo `2M` and take
    /// one FFT of length `2M`. Same values as `Direct` up to rounding.
    #[default]
    Folded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CtOptions {
    pub convention: PhaseConvention,
    pub engine: CtEngine,
}

/// Complex TFC volume, stored frame-major: time is the slowest axis, then
/// chirp row, then frequency bin.
#[derive(Debug, Clone, PartialEq)]
pub struct TfcTensor {
    pub grid: TfcGrid,
    pub t0_s: f64,
    data: Vec<Complex64>,
}

impl TfcTensor {
    pub fn zeros(grid: TfcGrid, t0_s: f64) -> Self {
        Self { grid, t0_s, data: vec![Complex64::new(0.0, 0.0); grid.frame_len() * grid.n_time] }
    }

    pub fn from_vec(grid: TfcGrid, t0_s: f64, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != grid.frame_len() * grid.n_time {
            return Err(Error::Shape(format!(
                "tensor payload has {} entries, grid needs {}",
                data.len(),
                grid.frame_len() * grid.n_time
            )));
        }
        Ok(Self { grid, t0_s, data })
    }

    /// `(n_chirp, n_freq, n_time)`.
    pub fn shape(&self) -> (usize, usize, usize) {
        self.grid.shape()
    }

    #[inline]
    pub fn index(&self, c: usize, j: usize, n: usize) -> usize {
        (n * self.grid.n_chirp() + c) * self.grid.n_freq() + j
    }

    #[inline]
    pub fn get(&self, c: usize, j: usize, n: usize) -> Complex64 {
        self.data[self.index(c, j, n)]
    }

    pub fn set(&mut self, c: usize, j: usize, n: usize, v: Complex64) {
        let i = self.index(c, j, n);
        self.data[i] = v;
    }

    pub fn frame(&self, n: usize) -> &[Complex64] {
        let fl = self.grid.frame_len();
        &self.data[n * fl..(n + 1) * fl]
    }

    pub fn frame_mut(&mut self, n: usize) -> &mut [Complex64] {
        let fl = self.grid.frame_len();
        &mut self.data[n * fl..(n + 1) * fl]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, z| m.max(z.norm()))
    }

    /// `|T(., j, n)|` over chirp rows.
    pub fn chirp_slice(&self, j: usize, n: usize) -> Vec<Complex64> {
        (0..self.grid.n_chirp()).map(|c| self.get(c, j, n)).collect()
    }

    pub fn time_s(&self, n: usize) -> f64 {
        self.grid.time_s(n, self.t0_s)
    }
}

/// A frequency-by-time matrix, stored frame-major (`[n][j]`).
#[derive(Debug, Clone, PartialEq)]
pub struct TfMatrix<T> {
    pub grid: TfcGrid,
    pub t0_s: f64,
    data: Vec<T>,
}

impl<T: Copy + Default> TfMatrix<T> {
    pub fn zeros(grid: TfcGrid, t0_s: f64) -> Self {
        Self { grid, t0_s, data: vec![T::default(); grid.n_freq() * grid.n_time] }
    }

    pub fn from_vec(grid: TfcGrid, t0_s: f64, data: Vec<T>) -> Result<Self> {
        if data.len() != grid.n_freq() * grid.n_time {
            return Err(Error::Shape(format!("matrix payload has {} entries", data.len())));
        }
        Ok(Self { grid, t0_s, data })
    }

    /// `(n_freq, n_time)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.grid.n_freq(), self.grid.n_time)
    }

    #[inline]
    pub fn get(&self, j: usize, n: usize) -> T {
        self.data[n * self.grid.n_freq() + j]
    }

    pub fn set(&mut self, j: usize, n: usize, v: T) {
        let nf = self.grid.n_freq();
        self.data[n * nf + j] = v;
    }

    pub fn frame(&self, n: usize) -> &[T] {
        let nf = self.grid.n_freq();
        &self.data[n * nf..(n + 1) * nf]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }
}

/// Precomputed phase tables and FFT plan for one grid and window length.
pub struct CtPlan {
    grid: TfcGrid,
    half_len: usize,
    opts: CtOptions,
    /// `chirp[c * L + k]`.
    chirp: Vec<Complex64>,
    /// `freq[k * bins + j]`, direct engine only.
    freq: Vec<Complex64>,
    fft: Arc<dyn Fft<f64>>,
    /// Frequency bins per row: `M + 1`, or `2M` for the full DFT circle.
    bins: usize,
}

impl std::fmt::Debug for CtPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CtPlan")
            .field("grid", &self.grid)
            .field("half_len", &self.half_len)
            .field("opts", &self.opts)
            .finish()
    }
}

impl CtPlan {
    pub fn new(grid: TfcGrid, half_len: usize, opts: CtOptions) -> Self {
        Self::with_bins(grid, half_len, opts, grid.n_freq())
    }

    /// Plan producing all `2M` bins per row; bin `j > M` is frequency
    /// `j - 2M`.
    pub fn full_circle(grid: TfcGrid, half_len: usize, opts: CtOptions) -> Self {
        Self::with_bins(grid, half_len, opts, 2 * grid.m)
    }

    fn with_bins(grid: TfcGrid, half_len: usize, opts: CtOptions, bins: usize) -> Self {
        let m = grid.m as i64;
        let wl = 2 * half_len + 1;
        let mut chirp = Vec::with_capacity(grid.n_chirp() * wl);
        for c in 0..grid.n_chirp() {
            let l = grid.chirp_index(c);
            for k in 0..wl {
                let o = offset(opts.convention, half_len, k);
                chirp.push(Complex64::cis(-PI * ((l * o * o) as f64) / ((4 * m * m) as f64)));
            }
        }
        let mut freq = Vec::new();
        if opts.engine == CtEngine::Direct {
            freq.reserve(wl * bins);
            for k in 0..wl {
                let o = offset(opts.convention, half_len, k);
                for j in 0..bins as i64 {
                    freq.push(Complex64::cis(-2.0 * PI * ((o * j) as f64) / ((2 * m) as f64)));
                }
            }
        }
        let fft = FftPlanner::new().plan_fft_forward(2 * grid.m);
        Self { grid, half_len, opts, chirp, freq, fft, bins }
    }

    pub fn grid(&self) -> &TfcGrid {
        &self.grid
    }

    pub fn half_len(&self) -> usize {
        self.half_len
    }

    pub fn options(&self) -> CtOptions {
        self.opts
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    fn check_window(&self, w: &[f64]) -> Result<()> {
        if w.len() != 2 * self.half_len + 1 {
            return Err(Error::Shape(format!(
                "window has {} samples, plan expects {}",
                w.len(),
                2 * self.half_len + 1
            )));
        }
        Ok(())
    }

    /// One chirp row `c` of frame `n` for each window, written to
    /// `outs[w][..bins]`.
    pub fn row(&self, f: &[Complex64], n: usize, c: usize, windows: &[&[f64]], outs: &mut [&mut [Complex64]]) {
        let nf = self.bins;
        let wl = 2 * self.half_len + 1;
        let chirp = &self.chirp[c * wl..(c + 1) * wl];
        let (k_lo, k_hi) = self.support(f.len(), n);
        match self.opts.engine {
            CtEngine::Direct => {
                for (w, out) in windows.iter().zip(outs.iter_mut()) {
                    for (j, o) in out[..nf].iter_mut().enumerate() {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for k in k_lo..k_hi {
                            let x = f[n + k - self.half_len];
                            acc += x * w[k] * self.freq[k * nf + j] * chirp[k];
                        }
                        *o = acc;
                    }
                }
            }
            CtEngine::Folded => {
                let two_m = 2 * self.grid.m;
                let mut buf = vec![Complex64::new(0.0, 0.0); two_m * windows.len()];
                for k in k_lo..k_hi {
                    let z = f[n + k - self.half_len] * chirp[k];
                    let slot = offset(self.opts.convention, self.half_len, k).rem_euclid(two_m as i64) as usize;
                    for (wi, w) in windows.iter().enumerate() {
                        buf[wi * two_m + slot] += z * w[k];
                    }
                }
                let mut scratch = vec![Complex64::new(0.0, 0.0); self.fft.get_inplace_scratch_len()];
                for (wi, out) in outs.iter_mut().enumerate() {
                    let b = &mut buf[wi * two_m..(wi + 1) * two_m];
                    self.fft.process_with_scratch(b, &mut scratch);
                    out[..nf].copy_from_slice(&b[..nf]);
                }
            }
        }
    }

    /// Full frame `n` (all chirp rows) for each window.
    pub fn frame(&self, f: &[Complex64], n: usize, windows: &[&[f64]], outs: &mut [&mut [Complex64]]) {
        let nf = self.bins;
        for c in 0..self.grid.n_chirp() {
            let mut rows: Vec<&mut [Complex64]> = outs.iter_mut().map(|o| &mut o[c * nf..(c + 1) * nf]).collect();
            self.row(f, n, c, windows, &mut rows);
        }
    }

    /// Range of window taps `k` whose signal sample lies inside the record.
    fn support(&self, len: usize, n: usize) -> (usize, usize) {
        let lo = self.half_len.saturating_sub(n);
        let hi = (len + self.half_len - n).min(2 * self.half_len + 1);
        (lo, hi.max(lo))
    }
}

#[inline]
fn offset(conv: PhaseConvention, half_len: usize, k: usize) -> i64 {
    match conv {
        PhaseConvention::Centered => k as i64 - half_len as i64,
        PhaseConvention::LeftEdge => k as i64,
    }
}

fn window_half_len(window: &[f64]) -> Result<usize> {
    if window.len() % 2 == 0 || window.is_empty() {
        return Err(Error::Shape(format!("window length {} is not odd", window.len())));
    }
    Ok(window.len() / 2)
}

fn check_grid(signal: &Signal, grid: &TfcGrid) -> Result<()> {
    if grid.n_time != signal.len() {
        return Err(Error::Shape(format!(
            "grid has {} frames but the signal has {} samples",
            grid.n_time,
            signal.len()
        )));
    }
    if (grid.sample_rate_hz - signal.sample_rate_hz()).abs() > 1e-9 * signal.sample_rate_hz() {
        return Err(Error::Shape("grid and signal sample rates differ".into()));
    }
    Ok(())
}

/// Chirplet transforms of `signal` with several windows sharing one length.
pub fn chirplet_transform_multi(
    signal: &Signal,
    windows: &[&[f64]],
    grid: &TfcGrid,
    opts: CtOptions,
) -> Result<Vec<TfcTensor>> {
    check_grid(signal, grid)?;
    let first = windows.first().ok_or_else(|| Error::Parameter("no windows given".into()))?;
    let half_len = window_half_len(first)?;
    let plan = CtPlan::new(*grid, half_len, opts);
    for w in windows {
        plan.check_window(w)?;
    }
    let f = signal.samples();
    let fl = grid.frame_len();
    let nw = windows.len();
    // One buffer holding all windows for a frame keeps the parallel map simple.
    let mut joint = vec![Complex64::new(0.0, 0.0); fl * nw * grid.n_time];
    par::for_each_chunk(&mut joint, fl * nw, |n, chunk| {
        let mut outs: Vec<&mut [Complex64]> = chunk.chunks_mut(fl).collect();
        plan.frame(f, n, windows, &mut outs);
    });
    let mut tensors: Vec<Vec<Complex64>> = (0..nw).map(|_| Vec::with_capacity(fl * grid.n_time)).collect();
    for frame in joint.chunks(fl * nw) {
        for (w, part) in frame.chunks(fl).enumerate() {
            tensors[w].extend_from_slice(part);
        }
    }
    tensors
        .into_iter()
        .map(|d| TfcTensor::from_vec(*grid, signal.t0_s(), d))
        .collect()
}

/// Chirplet transform of `signal` with the sampled window `window`.
pub fn chirplet_transform(signal: &Signal, window: &[f64], grid: &TfcGrid, opts: CtOptions) -> Result<TfcTensor> {
    Ok(chirplet_transform_multi(signal, &[window], grid, opts)?.remove(0))
}

/// Chirplet transforms with all six companions of `bank` (sample units), in
/// the order of [`Companion::ALL`].
pub fn chirplet_transform_bank(
    signal: &Signal,
    bank: &WindowBank,
    grid: &TfcGrid,
    opts: CtOptions,
) -> Result<Vec<TfcTensor>> {
    let ws: Vec<Vec<f64>> = Companion::ALL.iter().map(|&c| bank.sample_units(c)).collect();
    let refs: Vec<&[f64]> = ws.iter().map(|w| w.as_slice()).collect();
    chirplet_transform_multi(signal, &refs, grid, opts)
}

/// STFTs with several windows: the `l = 0` row of the chirplet transform.
pub fn stft_multi(
    signal: &Signal,
    windows: &[&[f64]],
    grid: &TfcGrid,
    opts: CtOptions,
) -> Result<Vec<TfMatrix<Complex64>>> {
    check_grid(signal, grid)?;
    let first = windows.first().ok_or_else(|| Error::Parameter("no windows given".into()))?;
    let half_len = window_half_len(first)?;
    let plan = CtPlan::new(*grid, half_len, opts);
    for w in windows {
        plan.check_window(w)?;
    }
    let f = signal.samples();
    let nf = grid.n_freq();
    let nw = windows.len();
    let c0 = grid.zero_chirp_row();
    let mut joint = vec![Complex64::new(0.0, 0.0); nf * nw * grid.n_time];
    par::for_each_chunk(&mut joint, nf * nw, |n, chunk| {
        let mut outs: Vec<&mut [Complex64]> = chunk.chunks_mut(nf).collect();
        plan.row(f, n, c0, windows, &mut outs);
    });
    let mut mats: Vec<Vec<Complex64>> = (0..nw).map(|_| Vec::with_capacity(nf * grid.n_time)).collect();
    for frame in joint.chunks(nf * nw) {
        for (w, part) in frame.chunks(nf).enumerate() {
            mats[w].extend_from_slice(part);
        }
    }
    mats.into_iter().map(|d| TfMatrix::from_vec(*grid, signal.t0_s(), d)).collect()
}

pub fn stft(signal: &Signal, window: &[f64], grid: &TfcGrid, opts: CtOptions) -> Result<TfMatrix<Complex64>> {
    Ok(stft_multi(signal, &[window], grid, opts)?.remove(0))
}

/// `sum_l |T(l, j, n)| * dlambda` with `dlambda` in Hz/s.
pub fn project_tfc_to_tf(t: &TfcTensor) -> TfMatrix<f64> {
    let g = t.grid;
    let dl = g.chirp_step_hzps();
    let nf = g.n_freq();
    let mut out = TfMatrix::<f64>::zeros(g, t.t0_s);
    for n in 0..g.n_time {
        let frame = t.frame(n);
        for c in 0..g.n_chirp() {
            for j in 0..nf {
                let i = n * nf + j;
                out.data[i] += frame[c * nf + j].norm();
            }
        }
        for v in &mut out.data[n * nf..(n + 1) * nf] {
            *v *= dl;
        }
    }
    out
}

/// Continuum-normalized CT at sample `n` and an arbitrary `(xi, lambda)` in
/// Hz and Hz/s: `dt * sum_k f(n + k - K) g(x_k) exp(-2 pi i xi x_k - pi i lambda x_k^2)`
/// with `x_k = (k - K) dt`.
pub fn evaluate_ct_at(signal: &Signal, bank: &WindowBank, n: usize, xi_hz: f64, lambda_hzps: f64) -> Complex64 {
    let f = signal.samples();
    let k0 = bank.half_len;
    let dt = signal.dt_s();
    let lo = k0.saturating_sub(n);
    let hi = (f.len() + k0 - n).min(bank.len());
    let mut acc = Complex64::new(0.0, 0.0);
    for k in lo..hi.max(lo) {
        let x = (k as f64 - k0 as f64) * dt;
        let ph = -2.0 * PI * xi_hz * x - PI * lambda_hzps * x * x;
        acc += f[n + k - k0] * bank.h[k] * Complex64::cis(ph);
    }
    acc * dt
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::window::WindowFamily;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_signal(len: usize, seed: u64) -> Signal {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = (0..len).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        Signal::new(v, 1.0, 0.0).unwrap()
    }

    /// Literal triple loop over (l, m, n) with 1-based indices.
    fn naive(f: &[Complex64], h: &[f64], m: usize, conv: PhaseConvention) -> Vec<Complex64> {
        let n_len = f.len() as i64;
        let kk = (h.len() / 2) as i64;
        let mi = m as i64;
        let mut out = Vec::new();
        for n in 1..=n_len {
            for l in -(mi - 1)..=mi {
                for mm in 1..=mi + 1 {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in 1..=2 * kk + 1 {
                        let idx = n + k - kk - 1;
                        if idx < 1 || idx > n_len {
                            continue;
                        }
                        let o = match conv {
                            PhaseConvention::Centered => k - kk - 1,
                            PhaseConvention::LeftEdge => k - 1,
                        };
                        let ef = Complex64::cis(-2.0 * PI * ((o * (mm - 1)) as f64) / ((2 * mi) as f64));
                        let ec = Complex64::cis(-PI * ((l * o * o) as f64) / ((4 * mi * mi) as f64));
                        acc += f[(idx - 1) as usize] * h[(k - 1) as usize] * ef * ec;
                    }
                    out.push(acc);
                }
            }
        }
        out
    }

    #[test]
    fn direct_engine_is_bit_exact() {
        let s = random_signal(16, 3);
        let bank = WindowBank::new(WindowFamily::gaussian_power(0, 0.7).unwrap(), 3, 0.5).unwrap();
        let grid = TfcGrid::from_resolution(0.125, 16, 1.0).unwrap();
        assert_eq!(grid.m, 4);
        for conv in [PhaseConvention::Centered, PhaseConvention::LeftEdge] {
            let opts = CtOptions { convention: conv, engine: CtEngine::Direct };
            let t = chirplet_transform(&s, &bank.h, &grid, opts).unwrap();
            let oracle = naive(s.samples(), &bank.h, 4, conv);
            assert_eq!(t.as_slice(), oracle.as_slice());
        }
    }

    #[test]
    fn folded_matches_direct() {
        let s = random_signal(40, 5);
        let bank = WindowBank::new(WindowFamily::g(1), 9, 0.2).unwrap();
        for &a in &[0.125, 0.05, 0.5] {
            let grid = TfcGrid::from_resolution(a, 40, 1.0).unwrap();
            for conv in [PhaseConvention::Centered, PhaseConvention::LeftEdge] {
                let d = chirplet_transform(&s, &bank.h, &grid, CtOptions { convention: conv, engine: CtEngine::Direct })
                    .unwrap();
                let f = chirplet_transform(&s, &bank.h, &grid, CtOptions { convention: conv, engine: CtEngine::Folded })
                    .unwrap();
                let scale = d.max_abs();
                for (a, b) in d.as_slice().iter().zip(f.as_slice()) {
                    assert!((a - b).norm() <= 1e-12 * scale);
                }
            }
        }
    }

    #[test]
    fn zero_chirp_row_is_stft() {
        let s = random_signal(30, 9);
        let bank = WindowBank::new(WindowFamily::g(0), 6, 0.1).unwrap();
        let grid = TfcGrid::from_resolution(0.1, 30, 1.0).unwrap();
        for engine in [CtEngine::Direct, CtEngine::Folded] {
            let opts = CtOptions { engine, ..Default::default() };
            let t = chirplet_transform(&s, &bank.h, &grid, opts).unwrap();
            let w = stft(&s, &bank.h, &grid, opts).unwrap();
            for n in 0..30 {
                for j in 0..grid.n_freq() {
                    assert_eq!(t.get(grid.zero_chirp_row(), j, n), w.get(j, n));
                }
            }
        }
    }

    #[test]
    fn left_edge_is_sheared_centered() {
        let s = random_signal(50, 1);
        let hl = 5usize;
        let bank = WindowBank::new(WindowFamily::g(0), hl, 0.15).unwrap();
        let grid = TfcGrid::from_resolution(0.05, 50, 1.0).unwrap();
        let m = grid.m;
        let direct = |c| CtOptions { convention: c, engine: CtEngine::Direct };
        let tc = chirplet_transform(&s, &bank.h, &grid, direct(PhaseConvention::Centered)).unwrap();
        let tl = chirplet_transform(&s, &bank.h, &grid, direct(PhaseConvention::LeftEdge)).unwrap();
        // l K / 4M^2 = (l K / 2M) frequency bins; pick rows with an integer shift.
        for c in 0..grid.n_chirp() {
            let l = grid.chirp_index(c);
            if (l * hl as i64) % (2 * m as i64) != 0 {
                continue;
            }
            let shift = l * hl as i64 / (2 * m as i64);
            for j in 0..grid.n_freq() as i64 {
                let jc = j + shift;
                if jc < 0 || jc > m as i64 {
                    continue;
                }
                for n in 0..50 {
                    let a = tl.get(c, j as usize, n).norm();
                    let b = tc.get(c, jc as usize, n).norm();
                    assert!((a - b).abs() < 1e-12 * (1.0 + b));
                }
            }
        }
    }

    #[test]
    fn wrong_grid_is_shape_error() {
        let s = random_signal(10, 1);
        let grid = TfcGrid::from_resolution(0.1, 11, 1.0).unwrap();
        assert!(matches!(chirplet_transform(&s, &[1.0], &grid, CtOptions::default()), Err(Error::Shape(_))));
        let grid = TfcGrid::from_resolution(0.1, 10, 1.0).unwrap();
        assert!(chirplet_transform(&s, &[1.0, 1.0], &grid, CtOptions::default()).is_err());
    }

    #[test]
    fn projection_single_entry() {
        let grid = TfcGrid::from_resolution(0.1, 3, 10.0).unwrap();
        let mut t = TfcTensor::zeros(grid, 0.0);
        t.set(2, 1, 1, Complex64::new(0.0, -3.0));
        let p = project_tfc_to_tf(&t);
        for n in 0..3 {
            for j in 0..grid.n_freq() {
                let want = if (j, n) == (1, 1) { 3.0 * grid.chirp_step_hzps() } else { 0.0 };
                assert!((p.get(j, n) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn one_sample_signal() {
        let s = Signal::new(vec![Complex64::new(1.0, 0.0)], 1.0, 0.0).unwrap();
        let grid = TfcGrid::from_resolution(0.25, 1, 1.0).unwrap();
        let opts = CtOptions { convention: PhaseConvention::Centered, ..Default::default() };
        let t = chirplet_transform(&s, &[0.5, 1.0, 0.5], &grid, opts).unwrap();
        for z in t.as_slice() {
            assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }
}
