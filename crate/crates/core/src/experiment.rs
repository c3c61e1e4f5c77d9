//! End-to-end drivers: the crossing-chirp comparison and the random-scene
//! Monte-Carlo study of SCT, CT and second-order SST.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::TfcGrid;
use crate::metrics::{interval_mask, ot_if_metric, rel_error};
use crate::par;
use crate::reassign::{refine_ridges, sct, RefineParams, SctConfig, SctOutput, Threshold};
use crate::reconstruct::{reconstruct_modes_with, MixingModel, ReconstructedModes};
use crate::ridge::{extract_ridges, extract_tf_ridges_with_chirp, Aggregate, RidgeCurve, RidgeParams, RidgeSet};
use crate::signal::Signal;
use crate::sst::{sst2, sst_band_reconstruct, track_tf_ridges};
use crate::synth::{crossing_chirp_pair, random_scene, SceneSpec, SyntheticScene};
use crate::transform::{chirplet_transform, CtOptions, PhaseConvention, TfcTensor};
use crate::window::{WindowBank, WindowFamily};

/// Local maxima of `|S(t, xi, .)|` along the chirp axis as
/// `(chirp Hz/s, magnitude)`, strongest first.
pub fn chirp_slice_peaks(s: &TfcTensor, t_s: f64, xi_hz: f64) -> Result<Vec<(f64, f64)>> {
    let g = s.grid;
    let n = ((t_s - s.t0_s) * g.sample_rate_hz).round();
    if n < 0.0 || n >= g.n_time as f64 {
        return Err(Error::Range(format!("time {t_s} s is outside the tensor")));
    }
    let j = (xi_hz / g.freq_step_hz()).round();
    if j < 0.0 || j > g.m as f64 {
        return Err(Error::Range(format!("frequency {xi_hz} Hz is outside the grid")));
    }
    let mags: Vec<f64> = s.chirp_slice(j as usize, n as usize).iter().map(|z| z.norm()).collect();
    let mut peaks: Vec<(f64, f64)> = (0..mags.len())
        .filter(|&c| {
            let left = c == 0 || mags[c] > mags[c - 1];
            let right = c + 1 == mags.len() || mags[c] >= mags[c + 1];
            mags[c] > 0.0 && left && right
        })
        .map(|c| (g.chirp_hzps(c), mags[c]))
        .collect();
    peaks.sort_by(|a, b| b.1.total_cmp(&a.1));
    Ok(peaks)
}

/// For each ridge, the index of the truth curve it is matched to. Exhaustive
/// over permutations, cost = mean absolute frequency gap.
pub fn match_to_truth(curves: &[RidgeCurve], truth_if: &[Vec<f64>]) -> Vec<usize> {
    let k = curves.len().min(truth_if.len());
    let cost = |r: usize, t: usize| -> f64 {
        let (a, b) = (&curves[r].omega_hz, &truth_if[t]);
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>() / a.len().max(1) as f64
    };
    let mut best = (f64::INFINITY, (0..k).collect::<Vec<_>>());
    let mut perm: Vec<usize> = (0..k).collect();
    permute(&mut perm, 0, &mut |p| {
        let c: f64 = p.iter().enumerate().map(|(r, &t)| cost(r, t)).sum();
        if c < best.0 {
            best = (c, p.to_vec());
        }
    });
    best.1
}

fn permute(p: &mut Vec<usize>, i: usize, f: &mut impl FnMut(&[usize])) {
    if i == p.len() {
        f(p);
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        permute(p, i + 1, f);
        p.swap(i, j);
    }
}

fn real_part(z: &[Complex64]) -> Vec<f64> {
    z.iter().map(|v| v.re).collect()
}

/// Per-frame estimate distribution: the cluster's support, or a point mass
/// at the curve value where the cluster was empty.
fn support_of(c: &RidgeCurve) -> Vec<Vec<(f64, f64)>> {
    c.support
        .iter()
        .zip(&c.omega_hz)
        .map(|(s, &w)| if s.is_empty() { vec![(w, 1.0)] } else { s.clone() })
        .collect()
}

#[derive(Debug, Clone)]
pub struct CrossingConfig {
    pub sample_rate_hz: f64,
    pub span_s: (f64, f64),
    pub crossing_s: (f64, f64),
    pub alpha_sq: f64,
    pub sct_window: WindowFamily,
    pub recon_window: WindowFamily,
    /// SST uses its own, finer grid so the band sum does not alias.
    pub sst_alpha_sq: f64,
    pub sst_window: WindowFamily,
    pub sst_delta_hz: f64,
    /// Search half-width for the per-frame SST ridge tracking.
    pub sst_track_hz: f64,
    pub threshold: Threshold,
    pub ridge: RidgeParams,
    /// The SST matrix has far fewer entries than the TFC volume, so it needs
    /// a lower selection quantile for a comparable cloud size.
    pub sst_ridge: RidgeParams,
    /// Frames whose analysis window loses more than this fraction of its L1
    /// mass past the record ends are left out of ridge selection.
    pub edge_loss: f64,
    pub mixing: MixingModel,
    /// Fixed-point refinement of the SCT ridges; `None` uses them as
    /// clustered.
    pub refine: Option<RefineParams>,
}

impl Default for CrossingConfig {
    fn default() -> Self {
        Self {
            sample_rate_hz: 100.0,
            span_s: (1.0, 5.0),
            crossing_s: (2.5, 3.5),
            alpha_sq: 0.01,
            sct_window: WindowFamily::g(2),
            recon_window: WindowFamily::g(0),
            sst_alpha_sq: 0.0025,
            sst_window: WindowFamily::g(0),
            sst_delta_hz: 2.0,
            sst_track_hz: 1.0,
            threshold: Threshold::default(),
            ridge: RidgeParams::default(),
            sst_ridge: RidgeParams { quantile: 0.98, aggregate: Aggregate::Peak, ..RidgeParams::default() },
            edge_loss: 0.01,
            mixing: MixingModel::Truncated,
            refine: Some(RefineParams::default()),
        }
    }
}

/// Relative errors of `Re f_k` on the crossing interval and its complement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalErrors {
    pub crossing: f64,
    pub rest: f64,
}

#[derive(Debug, Clone)]
pub struct CrossingReport {
    pub scene: SyntheticScene,
    pub sct: SctOutput,
    pub ridges: RidgeSet,
    /// `truth_of[r]` is the component matched to ridge `r`.
    pub truth_of: Vec<usize>,
    pub sct_modes: ReconstructedModes,
    pub sst_ridges: RidgeSet,
    pub sst_modes: Vec<Vec<Complex64>>,
    /// Indexed by truth component.
    pub sct_errors: Vec<IntervalErrors>,
    pub sst_errors: Vec<IntervalErrors>,
}

fn interval_errors(est: &[Complex64], truth: &[Complex64], times: &[f64], iv: (f64, f64), span: (f64, f64)) -> Result<IntervalErrors> {
    let m1 = interval_mask(times, iv.0, iv.1);
    let all = interval_mask(times, span.0, span.1);
    let m2: Vec<bool> = m1.iter().zip(&all).map(|(a, b)| !a && *b).collect();
    let (e, t) = (real_part(est), real_part(truth));
    Ok(IntervalErrors { crossing: rel_error(&e, &t, &m1)?, rest: rel_error(&e, &t, &m2)? })
}

/// SCT ridges, mixing-matrix reconstruction and the SST2 band baseline on
/// the crossing chirp pair.
pub fn run_crossing(cfg: &CrossingConfig) -> Result<CrossingReport> {
    let scene = crossing_chirp_pair(cfg.sample_rate_hz, cfg.span_s.0, cfg.span_s.1)?;
    let sig = &scene.mixed;
    let dt = sig.dt_s();
    let grid = TfcGrid::from_resolution(cfg.alpha_sq, sig.len(), cfg.sample_rate_hz)?;
    let bank = WindowBank::with_default_len(cfg.sct_window, dt)?;
    let out = sct(sig, &bank, &grid, &SctConfig { threshold: cfg.threshold, ct: CtOptions { convention: PhaseConvention::LeftEdge, ..Default::default() }, full_circle: true })?;
    let rp = RidgeParams { edge_frames: bank.edge_frames(cfg.edge_loss), ..cfg.ridge };
    let mut ridges = extract_ridges(&out.squeezed.s, Some(&out.squeezed), 2, &rp)?;
    if let Some(p) = &cfg.refine {
        ridges = refine_ridges(sig, &bank, &ridges, &RefineParams { edge_frames: rp.edge_frames, ..*p })?;
    }
    let truth_of = match_to_truth(&ridges.curves, &scene.if_hz);
    let rbank = WindowBank::with_default_len(cfg.recon_window, dt)?;
    let sct_modes = reconstruct_modes_with(sig, &ridges, &rbank, cfg.mixing)?;

    let sgrid = TfcGrid::from_resolution(cfg.sst_alpha_sq, sig.len(), cfg.sample_rate_hz)?;
    let sbank = WindowBank::with_default_len(cfg.sst_window, dt)?;
    let s2 = sst2(sig, &sbank, &sgrid, cfg.threshold)?;
    let sp = RidgeParams { edge_frames: sbank.edge_frames(cfg.edge_loss), ..cfg.sst_ridge };
    let sst_ridges = track_tf_ridges(&s2.s, &extract_tf_ridges_with_chirp(&s2.s, Some(&s2.chirp_hzps), 2, &sp)?, cfg.sst_track_hz)?;
    let sst_truth = match_to_truth(&sst_ridges.curves, &scene.if_hz);
    let sst_modes: Vec<Vec<Complex64>> = sst_ridges
        .curves
        .iter()
        .map(|c| sst_band_reconstruct(&s2.s, &c.omega_hz, cfg.sst_delta_hz, &cfg.sst_window))
        .collect::<Result<_>>()?;

    let times = scene.times();
    let mut sct_errors = Vec::new();
    let mut sst_errors = Vec::new();
    for k in 0..2 {
        let r = truth_of.iter().position(|&t| t == k).unwrap_or(k);
        sct_errors.push(interval_errors(&sct_modes.modes[r], &scene.components[k], &times, cfg.crossing_s, cfg.span_s)?);
        let r = sst_truth.iter().position(|&t| t == k).unwrap_or(k);
        sst_errors.push(interval_errors(&sst_modes[r], &scene.components[k], &times, cfg.crossing_s, cfg.span_s)?);
    }
    Ok(CrossingReport { scene, sct: out, ridges, truth_of, sct_modes, sst_ridges, sst_modes, sct_errors, sst_errors })
}

#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub scene: SceneSpec,
    pub alpha_sq: f64,
    pub analysis_window: WindowFamily,
    pub recon_window: WindowFamily,
    pub sst_alpha_sq: f64,
    pub sst_window: WindowFamily,
    pub sst_delta_hz: f64,
    /// Search half-width for the per-frame SST ridge tracking.
    pub sst_track_hz: f64,
    pub threshold: Threshold,
    pub ridge: RidgeParams,
    pub sst_ridge: RidgeParams,
    /// Errors are reported on this interval only.
    pub eval_s: (f64, f64),
    pub edge_loss: f64,
    pub mixing: MixingModel,
    /// Fixed-point refinement of the SCT ridges; `None` uses them as
    /// clustered.
    pub refine: Option<RefineParams>,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            scene: SceneSpec::default(),
            alpha_sq: 0.01,
            analysis_window: WindowFamily::g(2),
            recon_window: WindowFamily::g(0),
            sst_alpha_sq: 0.0025,
            sst_window: WindowFamily::g(0),
            sst_delta_hz: 2.0,
            sst_track_hz: 1.0,
            threshold: Threshold::default(),
            ridge: RidgeParams::default(),
            sst_ridge: RidgeParams { quantile: 0.98, aggregate: Aggregate::Peak, ..RidgeParams::default() },
            eval_s: (1.0, 9.0),
            edge_loss: 0.01,
            mixing: MixingModel::Truncated,
            refine: Some(RefineParams::default()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Sct,
    Ct,
    Sst2,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Sst2, Method::Ct, Method::Sct];

    pub fn name(self) -> &'static str {
        match self {
            Method::Sct => "SCT",
            Method::Ct => "CT",
            Method::Sst2 => "SST2",
        }
    }
}

/// Per-mode scores of one method on one realization (indexed by truth component).
#[derive(Debug, Clone, PartialEq)]
pub struct MethodScores {
    pub method: Method,
    pub rel_error: Vec<f64>,
    pub ot: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealizationReport {
    pub seed: u64,
    pub snr_db: f64,
    pub scores: Vec<MethodScores>,
}

impl RealizationReport {
    pub fn get(&self, m: Method) -> Option<&MethodScores> {
        self.scores.iter().find(|s| s.method == m)
    }
}

fn score(scene: &SyntheticScene, ridges: &RidgeSet, modes: &[Vec<Complex64>], mask: &[bool], frames: &[usize], method: Method) -> Result<MethodScores> {
    let truth_of = match_to_truth(&ridges.curves, &scene.if_hz);
    let k = scene.components.len();
    let mut rel = vec![f64::NAN; k];
    let mut ot = vec![f64::NAN; k];
    for (r, &t) in truth_of.iter().enumerate() {
        rel[t] = rel_error(&real_part(&modes[r]), &real_part(&scene.components[t]), mask)?;
        ot[t] = ot_if_metric(&support_of(&ridges.curves[r]), &scene.if_hz[t], frames)?;
    }
    Ok(MethodScores { method, rel_error: rel, ot })
}

/// One realization of the random two-component scene, scored for each
/// requested method.
pub fn run_realization(cfg: &StudyConfig, seed: u64, methods: &[Method]) -> Result<RealizationReport> {
    let scene = random_scene(&cfg.scene, seed)?;
    let sig: &Signal = &scene.mixed;
    let dt = sig.dt_s();
    let times = scene.times();
    let mask = interval_mask(&times, cfg.eval_s.0, cfg.eval_s.1);
    let frames: Vec<usize> = (0..mask.len()).filter(|&i| mask[i]).collect();
    let k = scene.components.len();
    let rbank = WindowBank::with_default_len(cfg.recon_window, dt)?;
    let mut scores = Vec::new();

    if methods.iter().any(|m| matches!(m, Method::Sct | Method::Ct)) {
        let grid = TfcGrid::from_resolution(cfg.alpha_sq, sig.len(), cfg.scene.sample_rate_hz)?;
        let bank = WindowBank::with_default_len(cfg.analysis_window, dt)?;
        let out = sct(sig, &bank, &grid, &SctConfig { threshold: cfg.threshold, ct: CtOptions { convention: PhaseConvention::LeftEdge, ..Default::default() }, full_circle: true })?;
        let rp = RidgeParams { edge_frames: bank.edge_frames(cfg.edge_loss), ..cfg.ridge };
        for &m in methods {
            let ridges = match m {
                Method::Sct => {
                    let r = extract_ridges(&out.squeezed.s, Some(&out.squeezed), k, &rp)?;
                    match &cfg.refine {
                        Some(p) => refine_ridges(sig, &bank, &r, &RefineParams { edge_frames: rp.edge_frames, ..*p })?,
                        None => r,
                    }
                }
                Method::Ct => {
                    // The left-edge phase shears |T| along frequency, so the
                    // CT-only estimate reads a centered transform.
                    let t = chirplet_transform(sig, &bank.h, &grid, CtOptions { convention: PhaseConvention::Centered, ..Default::default() })?;
                    extract_ridges(&t, None, k, &rp)?
                }
                Method::Sst2 => continue,
            };
            let modes = reconstruct_modes_with(sig, &ridges, &rbank, cfg.mixing)?;
            scores.push(score(&scene, &ridges, &modes.modes, &mask, &frames, m)?);
        }
    }
    if methods.contains(&Method::Sst2) {
        let sgrid = TfcGrid::from_resolution(cfg.sst_alpha_sq, sig.len(), cfg.scene.sample_rate_hz)?;
        let sbank = WindowBank::with_default_len(cfg.sst_window, dt)?;
        let s2 = sst2(sig, &sbank, &sgrid, cfg.threshold)?;
        let sp = RidgeParams { edge_frames: sbank.edge_frames(cfg.edge_loss), ..cfg.sst_ridge };
        let ridges = track_tf_ridges(&s2.s, &extract_tf_ridges_with_chirp(&s2.s, Some(&s2.chirp_hzps), k, &sp)?, cfg.sst_track_hz)?;
        let modes: Vec<Vec<Complex64>> = ridges
            .curves
            .iter()
            .map(|c| sst_band_reconstruct(&s2.s, &c.omega_hz, cfg.sst_delta_hz, &cfg.sst_window))
            .collect::<Result<_>>()?;
        scores.push(score(&scene, &ridges, &modes, &mask, &frames, Method::Sst2)?);
    }
    scores.sort_by_key(|s| Method::ALL.iter().position(|&m| m == s.method));
    Ok(RealizationReport { seed, snr_db: scene.snr_db, scores })
}

/// Realizations run in parallel; each holds a few hundred MB at the default
/// scene size.
pub fn run_study(cfg: &StudyConfig, seeds: &[u64], methods: &[Method]) -> Result<Vec<RealizationReport>> {
    par::map_range(seeds.len(), |i| run_realization(cfg, seeds[i], methods)).into_iter().collect()
}
