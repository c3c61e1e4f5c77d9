//! Reassignment operators and the synchrosqueezing step.
//!
//! With `T, T', T'', Tx, Tx', Tx2` the transforms with the six window
//! companions (sample units) and `a = 2 pi i lambda`,
//!
//! ```text
//! M1 = T T'' - 2a T Tx' - a T^2 + a^2 T Tx2 - T'^2 - a^2 Tx^2 + 2a T' Tx
//! M2 = 2 pi i (-T Tx' + a T Tx2 + Tx T' - a Tx^2)
//! mu    = Re(M1 / M2)
//! omega = xi + Re((-T' + 2 pi i (lambda - mu) Tx) / (2 pi i T))
//! ```
//!
//! in cycles/sample and cycles/sample^2. Both are exact for a linear chirp.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{param, Error, Result};
use crate::grid::TfcGrid;
use crate::ridge::RidgeSet;
use crate::par;
use crate::signal::Signal;
use crate::transform::{chirplet_transform, CtOptions, CtPlan, PhaseConvention, TfcTensor};
use crate::window::{Companion, WindowBank};

/// Default threshold relative to `max |T^h|`.
pub const DEFAULT_NU_REL: f64 = 1e-4;
/// Entries with `|M2| < M2_GUARD * |M1|` are left undefined.
pub const M2_GUARD: f64 = 1e-12;
/// Marker for undefined reassignment values.
pub const UNDEFINED: f64 = f64::NEG_INFINITY;

const TWO_PI_I: Complex64 = Complex64::new(0.0, 2.0 * PI);

/// Companion values at one point, ordered as [`Companion::ALL`].
pub type Companions = [Complex64; 6];

/// Chirp-rate estimate `Re(M1/M2)` in cycles/sample^2, or `None` when `M2`
/// is negligible.
pub fn chirp_estimate(t: &Companions, lambda_n: f64) -> Option<f64> {
    let [t0, tp, tpp, tx, txp, tx2] = *t;
    let a = TWO_PI_I * lambda_n;
    let m1 = t0 * tpp - 2.0 * a * t0 * txp - a * t0 * t0 + a * a * t0 * tx2 - tp * tp - a * a * tx * tx
        + 2.0 * a * tp * tx;
    let m2 = TWO_PI_I * (-t0 * txp + a * t0 * tx2 + tx * tp - a * tx * tx);
    let n2 = m2.norm();
    if n2 == 0.0 || !n2.is_finite() || n2 < M2_GUARD * m1.norm() {
        return None;
    }
    let mu = (m1 / m2).re;
    mu.is_finite().then_some(mu)
}

/// Normalized `(omega, mu)` at effective frequency `xi_n` and chirp rate
/// `lambda_n`. The caller applies the magnitude threshold.
pub fn reassign_entry(t: &Companions, xi_n: f64, lambda_n: f64) -> Option<(f64, f64)> {
    let mu = chirp_estimate(t, lambda_n)?;
    let (t0, tp, tx) = (t[0], t[1], t[3]);
    let omega = xi_n + ((-tp + TWO_PI_I * (lambda_n - mu) * tx) / (TWO_PI_I * t0)).re;
    omega.is_finite().then_some((omega, mu))
}

/// Normalized frequency of bin `j` at row `c`, including the shear of the
/// left-edge convention.
fn effective_freq(grid: &TfcGrid, conv: PhaseConvention, half_len: usize, j: usize, c: usize) -> f64 {
    let xi = grid.freq_norm(j);
    match conv {
        PhaseConvention::Centered => xi,
        PhaseConvention::LeftEdge => xi + grid.chirp_norm(grid.chirp_index(c)) * half_len as f64,
    }
}

/// Nearest `(row, bin)` for reassigned values in Hz and Hz/s; `None` when
/// the target is off the grid.
pub fn target_bin(grid: &TfcGrid, omega_hz: f64, mu_hzps: f64) -> Option<(usize, usize)> {
    let j = (omega_hz / grid.freq_step_hz()).round();
    let l = (mu_hzps / grid.chirp_step_hzps()).round();
    if !(j >= 0.0 && j <= grid.m as f64) || !l.is_finite() || l.abs() > 4.0 * grid.m as f64 {
        return None;
    }
    grid.chirp_row(l as i64).map(|c| (c, j as usize))
}

/// Reassigned frequency (Hz) and chirp rate (Hz/s) over the whole volume.
#[derive(Debug, Clone, PartialEq)]
pub struct ReassignmentField {
    pub grid: TfcGrid,
    pub t0_s: f64,
    pub nu: f64,
    /// `UNDEFINED` where the mask is false.
    pub omega_hz: Vec<f64>,
    pub mu_hzps: Vec<f64>,
    pub defined: Vec<bool>,
    /// `|T^h|` at each entry.
    pub magnitude: Vec<f64>,
}

impl ReassignmentField {
    #[inline]
    pub fn index(&self, c: usize, j: usize, n: usize) -> usize {
        (n * self.grid.n_chirp() + c) * self.grid.n_freq() + j
    }

    pub fn omega(&self, c: usize, j: usize, n: usize) -> Option<f64> {
        let i = self.index(c, j, n);
        self.defined[i].then_some(self.omega_hz[i])
    }

    pub fn mu(&self, c: usize, j: usize, n: usize) -> Option<f64> {
        let i = self.index(c, j, n);
        self.defined[i].then_some(self.mu_hzps[i])
    }
}

fn check_same_grid(ts: &[&TfcTensor]) -> Result<()> {
    let g = ts[0].grid;
    if ts.iter().any(|t| t.grid != g) {
        return Err(Error::Shape("companion tensors use different grids".into()));
    }
    Ok(())
}

/// Reassignment field from the six companion tensors (sample-unit windows,
/// ordered as [`Companion::ALL`]).
pub fn reassignment_field(
    tensors: &[TfcTensor],
    convention: PhaseConvention,
    half_len: usize,
    nu: f64,
) -> Result<ReassignmentField> {
    if tensors.len() != 6 {
        return Err(Error::Shape(format!("expected 6 companion tensors, got {}", tensors.len())));
    }
    if !(nu > 0.0) {
        return param(format!("threshold must be positive, got {nu}"));
    }
    let refs: Vec<&TfcTensor> = tensors.iter().collect();
    check_same_grid(&refs)?;
    let grid = tensors[0].grid;
    let fs = grid.sample_rate_hz;
    let total = grid.frame_len() * grid.n_time;
    let mut omega_hz = vec![UNDEFINED; total];
    let mut mu_hzps = vec![UNDEFINED; total];
    let mut defined = vec![false; total];
    let magnitude: Vec<f64> = tensors[0].as_slice().iter().map(|z| z.norm()).collect();
    for n in 0..grid.n_time {
        for c in 0..grid.n_chirp() {
            let lambda_n = grid.chirp_norm(grid.chirp_index(c));
            for j in 0..grid.n_freq() {
                let i = tensors[0].index(c, j, n);
                if magnitude[i] <= nu {
                    continue;
                }
                let t: Companions = std::array::from_fn(|w| tensors[w].as_slice()[i]);
                let xi_n = effective_freq(&grid, convention, half_len, j, c);
                if let Some((om, mu)) = reassign_entry(&t, xi_n, lambda_n) {
                    omega_hz[i] = om * fs;
                    mu_hzps[i] = mu * fs * fs;
                    defined[i] = true;
                }
            }
        }
    }
    Ok(ReassignmentField { grid, t0_s: tensors[0].t0_s, nu, omega_hz, mu_hzps, defined, magnitude })
}

/// Squeezed volume plus per-bin refined coordinates.
#[derive(Debug, Clone)]
pub struct Squeezed {
    pub s: TfcTensor,
    /// `sum |T| * omega` over the contributions landing in each bin.
    pub freq_moment: Vec<f64>,
    /// `sum |T| * mu` over the contributions landing in each bin.
    pub chirp_moment: Vec<f64>,
    /// `sum |T|` over the contributions landing in each bin.
    pub weight: Vec<f64>,
    /// Per frame, the sum of `T` over all contributions that landed on the grid.
    pub contributed: Vec<Complex64>,
}

impl Squeezed {
    fn empty(grid: TfcGrid, t0_s: f64) -> Self {
        let total = grid.frame_len() * grid.n_time;
        Self {
            s: TfcTensor::zeros(grid, t0_s),
            freq_moment: vec![0.0; total],
            chirp_moment: vec![0.0; total],
            weight: vec![0.0; total],
            contributed: vec![Complex64::new(0.0, 0.0); grid.n_time],
        }
    }

    /// `|T|`-weighted mean reassigned `(frequency Hz, chirp Hz/s)` of a bin.
    pub fn refined(&self, c: usize, j: usize, n: usize) -> Option<(f64, f64)> {
        let i = self.s.index(c, j, n);
        let w = self.weight[i];
        (w > 0.0).then(|| (self.freq_moment[i] / w, self.chirp_moment[i] / w))
    }

    /// Per-frame `|sum S - sum contributing T| / max(|sum T|, tiny)`.
    pub fn conservation_residuals(&self) -> Vec<f64> {
        (0..self.s.grid.n_time)
            .map(|n| {
                let total: Complex64 = self.s.frame(n).iter().sum();
                let want = self.contributed[n];
                let scale = want.norm().max(self.s.frame(n).iter().map(|z| z.norm()).sum::<f64>()).max(1e-300);
                (total - want).norm() / scale
            })
            .collect()
    }
}

/// Histogram squeeze of `t` along `field`.
pub fn synchrosqueeze(t: &TfcTensor, field: &ReassignmentField) -> Result<Squeezed> {
    if t.grid != field.grid {
        return Err(Error::Shape("tensor and field use different grids".into()));
    }
    let grid = t.grid;
    let mut out = Squeezed::empty(grid, t.t0_s);
    for n in 0..grid.n_time {
        let mut contributed = Complex64::new(0.0, 0.0);
        for c in 0..grid.n_chirp() {
            for j in 0..grid.n_freq() {
                let i = t.index(c, j, n);
                if !field.defined[i] {
                    continue;
                }
                let (om, mu) = (field.omega_hz[i], field.mu_hzps[i]);
                if let Some((ct, jt)) = target_bin(&grid, om, mu) {
                    let v = t.as_slice()[i];
                    let k = t.index(ct, jt, n);
                    out.s.as_mut_slice()[k] += v;
                    let w = v.norm();
                    out.freq_moment[k] += w * om;
                    out.chirp_moment[k] += w * mu;
                    out.weight[k] += w;
                    contributed += v;
                }
            }
        }
        out.contributed[n] = contributed;
    }
    Ok(out)
}

/// Threshold policy for the squeeze.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    /// `nu = factor * max |T^h|`.
    Relative(f64),
    Absolute(f64),
}

impl Default for Threshold {
    fn default() -> Self {
        Threshold::Relative(DEFAULT_NU_REL)
    }
}

impl Threshold {
    pub fn resolve(&self, max_abs: f64) -> Result<f64> {
        let nu = match *self {
            Threshold::Relative(r) if r > 0.0 => r * max_abs,
            Threshold::Absolute(a) if a > 0.0 => a,
            _ => return param("threshold must be positive"),
        };
        // An all-zero transform has nothing above any threshold.
        Ok(if nu > 0.0 { nu } else { f64::MIN_POSITIVE })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SctConfig {
    pub ct: CtOptions,
    pub threshold: Threshold,
    /// Also squeeze from the source bins `M < j < 2M` (negative
    /// frequencies), folding reassigned frequencies modulo the sample rate.
    /// Under the left-edge convention a chirp with rate `mu` sits at
    /// `IF - mu K_w dt` on the grid, which can fall below zero.
    pub full_circle: bool,
}

impl Default for SctConfig {
    fn default() -> Self {
        Self { ct: CtOptions::default(), threshold: Threshold::default(), full_circle: true }
    }
}

/// CT with window `h` and its synchrosqueezed version.
#[derive(Debug, Clone)]
pub struct SctOutput {
    pub t: TfcTensor,
    pub squeezed: Squeezed,
    pub nu: f64,
}

/// Synchrosqueezed chirplet transform. Computes the CT first to fix the
/// threshold, then the companions frame by frame so the five companion
/// volumes are never held in memory at once.
pub fn sct(signal: &Signal, bank: &WindowBank, grid: &TfcGrid, cfg: &SctConfig) -> Result<SctOutput> {
    let h = bank.sample_units(Companion::H);
    let t = chirplet_transform(signal, &h, grid, cfg.ct)?;
    let nu = cfg.threshold.resolve(t.max_abs())?;
    let others: Vec<Vec<f64>> = Companion::ALL[1..].iter().map(|&c| bank.sample_units(c)).collect();
    let refs: Vec<&[f64]> = others.iter().map(|w| w.as_slice()).collect();
    let (plan, windows) = if cfg.full_circle {
        let mut all = vec![h.as_slice()];
        all.extend(refs.iter().copied());
        (CtPlan::full_circle(*grid, bank.half_len, cfg.ct), all)
    } else {
        (CtPlan::new(*grid, bank.half_len, cfg.ct), refs.clone())
    };
    let bins = plan.bins();
    let fs = grid.sample_rate_hz;
    let fl = grid.frame_len();
    let nf = grid.n_freq();
    let two_m = 2 * grid.m;
    let f = signal.samples();
    let frames = par::map_range(grid.n_time, |n| {
        let tf = t.frame(n);
        let mut bufs = vec![vec![Complex64::new(0.0, 0.0); grid.n_chirp() * bins]; windows.len()];
        {
            let mut outs: Vec<&mut [Complex64]> = bufs.iter_mut().map(|b| b.as_mut_slice()).collect();
            plan.frame(f, n, &windows, &mut outs);
        }
        // Companion w (1..6) of source entry i lives at `bufs[w - skip][i]`.
        let skip = usize::from(!cfg.full_circle);
        let mut s = vec![Complex64::new(0.0, 0.0); fl];
        let mut fm = vec![0.0; fl];
        let mut cm = vec![0.0; fl];
        let mut wt = vec![0.0; fl];
        let mut contributed = Complex64::new(0.0, 0.0);
        for c in 0..grid.n_chirp() {
            let lambda_n = grid.chirp_norm(grid.chirp_index(c));
            for j in 0..bins {
                let i = c * bins + j;
                let v = if j < nf { tf[c * nf + j] } else { bufs[0][i] };
                let w = v.norm();
                if w <= nu {
                    continue;
                }
                let comp: Companions = [
                    v,
                    bufs[1 - skip][i],
                    bufs[2 - skip][i],
                    bufs[3 - skip][i],
                    bufs[4 - skip][i],
                    bufs[5 - skip][i],
                ];
                let mut xi_n = effective_freq(grid, cfg.ct.convention, bank.half_len, j, c);
                if j >= nf {
                    xi_n -= 1.0;
                }
                let Some((mut om, mu)) = reassign_entry(&comp, xi_n, lambda_n) else { continue };
                if cfg.full_circle {
                    om = om.rem_euclid(1.0);
                    // Values just below zero still round to bin 0.
                    if om > 1.0 - 0.5 / two_m as f64 {
                        om -= 1.0;
                    }
                }
                let (om, mu) = (om * fs, mu * fs * fs);
                if let Some((ct, jt)) = target_bin(grid, om, mu) {
                    let k = ct * nf + jt;
                    s[k] += v;
                    fm[k] += w * om;
                    cm[k] += w * mu;
                    wt[k] += w;
                    contributed += v;
                }
            }
        }
        (s, fm, cm, wt, contributed)
    });
    let mut squeezed = Squeezed::empty(*grid, signal.t0_s());
    for (n, (s, fm, cm, wt, contributed)) in frames.into_iter().enumerate() {
        squeezed.s.frame_mut(n).copy_from_slice(&s);
        squeezed.freq_moment[n * fl..(n + 1) * fl].copy_from_slice(&fm);
        squeezed.chirp_moment[n * fl..(n + 1) * fl].copy_from_slice(&cm);
        squeezed.weight[n * fl..(n + 1) * fl].copy_from_slice(&wt);
        squeezed.contributed[n] = contributed;
    }
    Ok(SctOutput { t, squeezed, nu })
}

/// The six companion sums at sample `n` and an off-grid `(xi, lambda)` in
/// Hz and Hz/s, centered phase, sample units.
pub fn companions_at(signal: &Signal, bank: &WindowBank, n: usize, xi_hz: f64, lambda_hzps: f64) -> Companions {
    let f = signal.samples();
    let fs = signal.sample_rate_hz();
    let (xi, lam) = (xi_hz / fs, lambda_hzps / (fs * fs));
    let k0 = bank.half_len;
    let ws: Vec<Vec<f64>> = Companion::ALL.iter().map(|&c| bank.sample_units(c)).collect();
    let lo = k0.saturating_sub(n);
    let hi = (f.len() + k0 - n).min(bank.len());
    let mut acc = [Complex64::new(0.0, 0.0); 6];
    for k in lo..hi.max(lo) {
        let o = k as f64 - k0 as f64;
        let z = f[n + k - k0] * Complex64::cis(-2.0 * PI * xi * o - PI * lam * o * o);
        for (a, w) in acc.iter_mut().zip(&ws) {
            *a += z * w[k];
        }
    }
    acc
}

/// Reassigned `(frequency Hz, chirp Hz/s)` at an arbitrary point.
pub fn reassign_at(signal: &Signal, bank: &WindowBank, n: usize, xi_hz: f64, lambda_hzps: f64) -> Option<(f64, f64)> {
    let fs = signal.sample_rate_hz();
    let t = companions_at(signal, bank, n, xi_hz, lambda_hzps);
    if t[0].norm() == 0.0 {
        return None;
    }
    reassign_entry(&t, xi_hz / fs, lambda_hzps / (fs * fs)).map(|(o, m)| (o * fs, m * fs * fs))
}

/// Settings for [`refine_ridges`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefineParams {
    pub iterations: usize,
    /// A refined point further than this from its start is rejected.
    pub max_shift_hz: f64,
    pub max_shift_hzps: f64,
    /// Follow each ridge through frames without cluster support, starting
    /// from the neighbouring frame's estimate advanced by its chirp rate.
    pub track_gaps: bool,
    /// Within this many frames of either end the window is cut by the record
    /// boundary and the reassignment is biased; gaps there are extrapolated
    /// at constant chirp rate instead.
    pub edge_frames: usize,
}

impl Default for RefineParams {
    fn default() -> Self {
        Self { iterations: 5, max_shift_hz: 2.0, max_shift_hzps: 4.0, track_gaps: true, edge_frames: 0 }
    }
}

fn fixed_point(signal: &Signal, bank: &WindowBank, n: usize, start: (f64, f64), p: &RefineParams) -> Option<(f64, f64)> {
    let mut cur = start;
    for _ in 0..p.iterations {
        cur = reassign_at(signal, bank, n, cur.0, cur.1)?;
    }
    ((cur.0 - start.0).abs() <= p.max_shift_hz && (cur.1 - start.1).abs() <= p.max_shift_hzps).then_some(cur)
}

/// Moves ridge points to fixed points of the off-grid reassignment map. For
/// a linear chirp the map is exact, so this removes the grid and clustering
/// bias left in per-frame ridge values. Frames where the iteration fails or
/// wanders too far keep their input values.
pub fn refine_ridges(signal: &Signal, bank: &WindowBank, ridges: &RidgeSet, p: &RefineParams) -> Result<RidgeSet> {
    if ridges.n_time() != signal.len() {
        return Err(Error::Shape(format!("ridges span {} frames, signal has {}", ridges.n_time(), signal.len())));
    }
    let dt = signal.dt_s();
    let mut out = ridges.clone();
    for c in &mut out.curves {
        let nt = c.omega_hz.len();
        let refined: Vec<Option<(f64, f64)>> = par::map_range(nt, |n| {
            c.valid[n].then(|| fixed_point(signal, bank, n, (c.omega_hz[n], c.mu_hzps[n]), p)).flatten()
        });
        let mut done = vec![false; nt];
        for (n, r) in refined.into_iter().enumerate() {
            if let Some((w, m)) = r {
                (c.omega_hz[n], c.mu_hzps[n]) = (w, m);
            }
            done[n] = c.valid[n];
        }
        if !p.track_gaps {
            continue;
        }
        let step = |c: &mut crate::ridge::RidgeCurve, n: usize, from: usize| {
            let sign = if n > from { 1.0 } else { -1.0 };
            let start = (c.omega_hz[from] + sign * c.mu_hzps[from] * dt, c.mu_hzps[from]);
            let inside = n >= p.edge_frames && n + p.edge_frames < nt;
            let (w, m) = inside.then(|| fixed_point(signal, bank, n, start, p)).flatten().unwrap_or(start);
            (c.omega_hz[n], c.mu_hzps[n]) = (w, m);
        };
        let Some(first) = done.iter().position(|&d| d) else { continue };
        for n in first + 1..nt {
            if !done[n] {
                step(c, n, n - 1);
            }
        }
        for n in (0..first).rev() {
            step(c, n, n + 1);
        }
    }
    Ok(out)
}

/// One member of an inverse-SCT neighborhood.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborhoodEntry {
    pub freq_bin: usize,
    pub chirp_row: usize,
    pub weight: f64,
}

/// Entries at frame `n` whose reassigned values fall within `eps1` Hz of
/// `xi_hz` and `eps2` Hz/s of `lambda_hzps`.
pub fn inverse_sct_neighborhood(
    field: &ReassignmentField,
    n: usize,
    xi_hz: f64,
    lambda_hzps: f64,
    eps1: f64,
    eps2: f64,
) -> Result<Vec<NeighborhoodEntry>> {
    if !(eps1 > 0.0 && eps2 > 0.0) {
        return param("neighborhood radii must be positive");
    }
    if n >= field.grid.n_time {
        return Err(Error::Range(format!("frame {n} outside the record")));
    }
    let g = field.grid;
    let mut out = Vec::new();
    for c in 0..g.n_chirp() {
        for j in 0..g.n_freq() {
            let i = field.index(c, j, n);
            if field.defined[i]
                && (field.omega_hz[i] - xi_hz).abs() < eps1
                && (field.mu_hzps[i] - lambda_hzps).abs() < eps2
            {
                out.push(NeighborhoodEntry { freq_bin: j, chirp_row: c, weight: field.magnitude[i] });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::chirplet_transform_bank;
    use crate::window::WindowFamily;

    fn chirp(len: usize, fs: f64, xi0: f64, lam0: f64) -> Signal {
        Signal::from_fn(len, fs, 0.0, |x| Complex64::cis(2.0 * PI * (xi0 * x + 0.5 * lam0 * x * x))).unwrap()
    }

    #[test]
    fn linear_chirp_is_exact_off_grid() {
        let s = chirp(801, 100.0, 5.0, 6.0);
        let bank = WindowBank::with_default_len(WindowFamily::g(0), 0.01).unwrap();
        for &(xi, lam) in &[(29.0, 6.0), (31.5, 2.0), (27.0, 11.0)] {
            let (om, mu) = reassign_at(&s, &bank, 400, xi, lam).unwrap();
            assert!((mu - 6.0).abs() < 1e-6, "mu = {mu}");
            assert!((om - 29.0).abs() < 1e-6, "omega = {om}");
        }
    }

    #[test]
    fn fused_matches_explicit_squeeze() {
        let s = chirp(120, 40.0, 3.0, 4.0);
        let bank = WindowBank::new(WindowFamily::g(0), 40, 1.0 / 40.0).unwrap();
        let grid = TfcGrid::from_resolution(0.05, 120, 40.0).unwrap();
        for conv in [PhaseConvention::Centered, PhaseConvention::LeftEdge] {
            let cfg = SctConfig { ct: CtOptions { convention: conv, ..Default::default() }, full_circle: false, ..Default::default() };
            let out = sct(&s, &bank, &grid, &cfg).unwrap();
            let ts = chirplet_transform_bank(&s, &bank, &grid, cfg.ct).unwrap();
            let field = reassignment_field(&ts, conv, bank.half_len, out.nu).unwrap();
            let sq = synchrosqueeze(&ts[0], &field).unwrap();
            let scale = sq.s.max_abs();
            for (a, b) in sq.s.as_slice().iter().zip(out.squeezed.s.as_slice()) {
                assert!((a - b).norm() <= 1e-9 * scale);
            }
        }
    }

    #[test]
    fn zero_signal_gives_zero_sct() {
        let s = Signal::from_real(&[0.0; 50], 10.0, 0.0).unwrap();
        let bank = WindowBank::new(WindowFamily::g(0), 10, 0.1).unwrap();
        let grid = TfcGrid::from_resolution(0.1, 50, 10.0).unwrap();
        let out = sct(&s, &bank, &grid, &SctConfig::default()).unwrap();
        assert!(out.squeezed.s.as_slice().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn neighborhood_limits() {
        let s = chirp(200, 50.0, 4.0, 3.0);
        let bank = WindowBank::with_default_len(WindowFamily::g(0), 0.02).unwrap();
        let grid = TfcGrid::from_resolution(0.02, 200, 50.0).unwrap();
        let opts = CtOptions { convention: PhaseConvention::Centered, ..Default::default() };
        let ts = chirplet_transform_bank(&s, &bank, &grid, opts).unwrap();
        let nu = 1e-4 * ts[0].max_abs();
        let field = reassignment_field(&ts, PhaseConvention::Centered, bank.half_len, nu).unwrap();
        let n = 100;
        let all = inverse_sct_neighborhood(&field, n, 0.0, 0.0, f64::INFINITY, f64::INFINITY).unwrap();
        let defined = (0..grid.n_chirp())
            .flat_map(|c| (0..grid.n_freq()).map(move |j| (c, j)))
            .filter(|&(c, j)| field.defined[field.index(c, j, n)])
            .count();
        assert_eq!(all.len(), defined);
        let t = 2.0;
        let near = inverse_sct_neighborhood(&field, n, 4.0 + 3.0 * t, 3.0, 1.0, 0.5).unwrap();
        assert!(!near.is_empty());
        let frame = ts[0].frame(n);
        let imax = (0..frame.len()).max_by(|&a, &b| frame[a].norm().total_cmp(&frame[b].norm())).unwrap();
        let (cmax, jmax) = (imax / grid.n_freq(), imax % grid.n_freq());
        assert!(near.iter().any(|e| e.chirp_row == cmax && e.freq_bin == jmax));
        let far = inverse_sct_neighborhood(&field, n, 24.0, 3.0, 1.0, 0.5).unwrap();
        assert!(far.is_empty());
    }
}
