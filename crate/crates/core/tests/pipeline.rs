//! End-to-end runs of the library on synthetic chirps.

use std::f64::consts::PI;

use sct_core::reassign::{refine_ridges, sct, RefineParams, SctConfig};
use sct_core::reconstruct::{reconstruct_modes_with, MixingModel};
use sct_core::ridge::{extract_ridges, extract_tf_ridges_with_chirp, RidgeParams, RidgeSet};
use sct_core::sst::{sst2, track_tf_ridges};
use sct_core::transform::TfMatrix;
use sct_core::{Complex64, Error, Signal, TfcGrid, WindowBank, WindowFamily};

const FS: f64 = 100.0;

fn chirp(len: usize, f0: f64, rate: f64) -> Signal {
    Signal::from_fn(len, FS, 0.0, |x| Complex64::cis(2.0 * PI * (f0 * x + 0.5 * rate * x * x))).unwrap()
}

fn rel_err(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (num / den).sqrt()
}

#[test]
fn single_chirp_round_trip() {
    let len = 601;
    let s = chirp(len, 6.0, 4.0);
    let bank = WindowBank::with_default_len(WindowFamily::g(0), 1.0 / FS).unwrap();
    let grid = TfcGrid::from_resolution(0.01, len, FS).unwrap();
    let out = sct(&s, &bank, &grid, &SctConfig::default()).unwrap();
    let edge = bank.edge_frames(0.01);
    let params = RidgeParams { edge_frames: edge, ..Default::default() };
    let ridges = extract_ridges(&out.squeezed.s, Some(&out.squeezed), 1, &params).unwrap();
    assert_eq!(ridges.k(), 1);
    let c = &ridges.curves[0];
    for n in edge..len - edge {
        let t = n as f64 / FS;
        assert!((c.omega_hz[n] - (6.0 + 4.0 * t)).abs() <= 1.0, "n={n} omega={}", c.omega_hz[n]);
    }

    let refined = refine_ridges(&s, &bank, &ridges, &RefineParams { edge_frames: edge, ..Default::default() }).unwrap();
    let r = &refined.curves[0];
    for n in edge..len - edge {
        let t = n as f64 / FS;
        assert!((r.omega_hz[n] - (6.0 + 4.0 * t)).abs() < 0.05, "n={n}");
        assert!((r.mu_hzps[n] - 4.0).abs() < 0.05, "n={n}");
    }

    let modes = reconstruct_modes_with(&s, &refined, &bank, MixingModel::Truncated).unwrap();
    let inner = edge..len - edge;
    let e = rel_err(&modes.modes[0][inner.clone()], &s.samples()[inner]);
    assert!(e < 1e-2, "relative error {e}");
}

#[test]
fn refinement_pulls_perturbed_ridge_to_truth() {
    let len = 501;
    let s = chirp(len, 10.0, -3.0);
    let bank = WindowBank::with_default_len(WindowFamily::g(0), 1.0 / FS).unwrap();
    let truth_w: Vec<f64> = (0..len).map(|n| 10.0 - 3.0 * n as f64 / FS).collect();
    let start = RidgeSet::from_truth(
        vec![truth_w.iter().map(|w| w + 0.6).collect()],
        vec![vec![-3.0 + 1.5; len]],
        0.0,
        FS,
    );
    let edge = bank.edge_frames(0.01);
    let out = refine_ridges(&s, &bank, &start, &RefineParams { edge_frames: edge, ..Default::default() }).unwrap();
    let c = &out.curves[0];
    for n in edge..len - edge {
        assert!((c.omega_hz[n] - truth_w[n]).abs() < 0.02, "n={n} {}", c.omega_hz[n]);
        assert!((c.mu_hzps[n] + 3.0).abs() < 0.05, "n={n} {}", c.mu_hzps[n]);
    }
}

#[test]
fn refine_rejects_mismatched_lengths() {
    let s = chirp(50, 5.0, 0.0);
    let bank = WindowBank::new(WindowFamily::g(0), 10, 1.0 / FS).unwrap();
    let r = RidgeSet::from_truth(vec![vec![5.0; 49]], vec![vec![0.0; 49]], 0.0, FS);
    assert!(matches!(refine_ridges(&s, &bank, &r, &RefineParams::default()), Err(Error::Shape(_))));
}

#[test]
fn tf_ridges_carry_chirp_estimate() {
    let len = 601;
    let a = chirp(len, 8.0, 3.0);
    let b = chirp(len, 40.0, -2.0);
    let s = Signal::new(a.samples().iter().zip(b.samples()).map(|(x, y)| x + y).collect(), FS, 0.0).unwrap();
    let bank = WindowBank::with_default_len(WindowFamily::g(0), 1.0 / FS).unwrap();
    let grid = TfcGrid::from_resolution(0.0025, len, FS).unwrap();
    let out = sst2(&s, &bank, &grid, Default::default()).unwrap();
    let edge = bank.edge_frames(0.01);
    let params = RidgeParams { edge_frames: edge, quantile: 0.98, ..Default::default() };
    let ridges = extract_tf_ridges_with_chirp(&out.s, Some(&out.chirp_hzps), 2, &params).unwrap();
    // Curves are ordered by mean chirp rate.
    assert!((ridges.curves[0].mean_chirp() + 2.0).abs() < 0.5, "{}", ridges.curves[0].mean_chirp());
    assert!((ridges.curves[1].mean_chirp() - 3.0).abs() < 0.5, "{}", ridges.curves[1].mean_chirp());

    let tracked = track_tf_ridges(&out.s, &ridges, 1.0).unwrap();
    for n in edge..len - edge {
        let t = n as f64 / FS;
        assert!((tracked.curves[0].omega_hz[n] - (40.0 - 2.0 * t)).abs() <= 0.5, "n={n}");
        assert!((tracked.curves[1].omega_hz[n] - (8.0 + 3.0 * t)).abs() <= 0.5, "n={n}");
    }

    let wrong = TfMatrix::<f64>::zeros(TfcGrid::from_resolution(0.01, len, FS).unwrap(), 0.0);
    assert!(matches!(extract_tf_ridges_with_chirp(&out.s, Some(&wrong), 2, &params), Err(Error::Shape(_))));
}

#[test]
fn zero_k_is_a_parameter_error() {
    let s = chirp(64, 5.0, 0.0);
    let bank = WindowBank::new(WindowFamily::g(0), 16, 1.0 / FS).unwrap();
    let grid = TfcGrid::from_resolution(0.1, s.len(), FS).unwrap();
    let out = sct(&s, &bank, &grid, &SctConfig::default()).unwrap();
    assert!(matches!(extract_ridges(&out.squeezed.s, None, 0, &RidgeParams::default()), Err(Error::Parameter(_))));
}
