use proptest::prelude::*;
use sct_core::metrics::wasserstein1_1d;
use sct_core::reassign::{sct, SctConfig};
use sct_core::ridge::{knn_distance, normalize_rows, quantile};
use sct_core::transform::{chirplet_transform, CtEngine, CtOptions, PhaseConvention};
use sct_core::{Complex64, Signal, TfcGrid, WindowBank, WindowFamily};

fn signal_strategy(min: usize, max: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b)), min..max)
}

fn conv_strategy() -> impl Strategy<Value = PhaseConvention> {
    prop_oneof![Just(PhaseConvention::Centered), Just(PhaseConvention::LeftEdge)]
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn max_abs(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ct_is_linear(
        f in signal_strategy(20, 21),
        g in signal_strategy(20, 21),
        a in (-2.0f64..2.0, -2.0f64..2.0),
        conv in conv_strategy(),
    ) {
        let a = Complex64::new(a.0, a.1);
        let fs = 10.0;
        let grid = TfcGrid::from_resolution(0.1, 20, fs).unwrap();
        let bank = WindowBank::new(WindowFamily::g(0), 6, 1.0 / fs).unwrap();
        let opts = CtOptions { convention: conv, ..Default::default() };
        let mix: Vec<Complex64> = f.iter().zip(&g).map(|(x, y)| a * x + y).collect();
        let t = |v: Vec<Complex64>| chirplet_transform(&Signal::new(v, fs, 0.0).unwrap(), &bank.h, &grid, opts).unwrap();
        let (tf, tg, tm) = (t(f), t(g), t(mix));
        let want: Vec<Complex64> = tf.as_slice().iter().zip(tg.as_slice()).map(|(x, y)| a * x + y).collect();
        prop_assert!(max_diff(tm.as_slice(), &want) <= 1e-12 * max_abs(&want).max(1.0));
    }

    #[test]
    fn folded_equals_direct(
        f in signal_strategy(1, 40),
        half in 1usize..30,
        wn in 0u32..3,
        alpha_sq in prop_oneof![Just(0.5), Just(0.1), Just(0.04), Just(0.02)],
        conv in conv_strategy(),
    ) {
        let fs = 25.0;
        let s = Signal::new(f, fs, 0.0).unwrap();
        let grid = TfcGrid::from_resolution(alpha_sq, s.len(), fs).unwrap();
        let bank = WindowBank::new(WindowFamily::g(wn), half, 1.0 / fs).unwrap();
        let run = |engine| chirplet_transform(&s, &bank.h, &grid, CtOptions { convention: conv, engine }).unwrap();
        let (d, fo) = (run(CtEngine::Direct), run(CtEngine::Folded));
        prop_assert!(max_diff(d.as_slice(), fo.as_slice()) <= 1e-11 * max_abs(d.as_slice()).max(1e-300));
    }

    /// Away from the record ends, delaying the signal delays the transform.
    #[test]
    fn time_shift_covariance(f in signal_strategy(40, 41), shift in 1usize..8) {
        let fs = 10.0;
        let half = 5;
        let mut delayed = vec![Complex64::new(0.0, 0.0); shift];
        delayed.extend_from_slice(&f);
        let grid_a = TfcGrid::from_resolution(0.1, f.len(), fs).unwrap();
        let grid_b = TfcGrid::from_resolution(0.1, delayed.len(), fs).unwrap();
        let bank = WindowBank::new(WindowFamily::g(1), half, 1.0 / fs).unwrap();
        let opts = CtOptions::default();
        let ta = chirplet_transform(&Signal::new(f.clone(), fs, 0.0).unwrap(), &bank.h, &grid_a, opts).unwrap();
        let tb = chirplet_transform(&Signal::new(delayed, fs, 0.0).unwrap(), &bank.h, &grid_b, opts).unwrap();
        for n in half..f.len() {
            prop_assert!(max_diff(ta.frame(n), tb.frame(n + shift)) <= 1e-12 * max_abs(ta.frame(n)).max(1.0));
        }
    }

    #[test]
    fn squeeze_conserves_mass(f in signal_strategy(10, 40), wn in 0u32..3, full_circle in any::<bool>()) {
        let fs = 20.0;
        let s = Signal::new(f, fs, 0.0).unwrap();
        let grid = TfcGrid::from_resolution(0.05, s.len(), fs).unwrap();
        let bank = WindowBank::new(WindowFamily::g(wn), 12, 1.0 / fs).unwrap();
        let out = sct(&s, &bank, &grid, &SctConfig { full_circle, ..Default::default() }).unwrap();
        let worst = out.squeezed.conservation_residuals().into_iter().fold(0.0, f64::max);
        prop_assert!(worst <= 1e-10, "{worst:e}");
    }

    /// Reassignment depends on ratios of transforms, so scaling the signal
    /// scales the squeezed volume.
    #[test]
    fn sct_is_homogeneous(f in signal_strategy(16, 24), c in (0.1f64..3.0, -3.0f64..3.0)) {
        let c = Complex64::new(c.0, c.1);
        let fs = 20.0;
        let s = Signal::new(f, fs, 0.0).unwrap();
        let grid = TfcGrid::from_resolution(0.1, s.len(), fs).unwrap();
        let bank = WindowBank::new(WindowFamily::g(0), 8, 1.0 / fs).unwrap();
        let a = sct(&s, &bank, &grid, &SctConfig::default()).unwrap();
        let b = sct(&s.scaled(c), &bank, &grid, &SctConfig::default()).unwrap();
        let want: Vec<Complex64> = a.squeezed.s.as_slice().iter().map(|z| z * c).collect();
        prop_assert!(max_diff(b.squeezed.s.as_slice(), &want) <= 1e-9 * max_abs(&want).max(1e-300));
    }

    #[test]
    fn w1_is_a_metric(
        a in prop::collection::vec((-5.0f64..5.0, 0.1f64..1.0), 1..8),
        b in prop::collection::vec((-5.0f64..5.0, 0.1f64..1.0), 1..8),
        c in prop::collection::vec((-5.0f64..5.0, 0.1f64..1.0), 1..8),
        shift in -3.0f64..3.0,
    ) {
        let split = |v: &[(f64, f64)]| (v.iter().map(|p| p.0).collect::<Vec<_>>(), v.iter().map(|p| p.1).collect::<Vec<_>>());
        let ((pa, wa), (pb, wb), (pc, wc)) = (split(&a), split(&b), split(&c));
        let w = |p: &[f64], wp: &[f64], q: &[f64], wq: &[f64]| wasserstein1_1d(p, wp, q, wq).unwrap();
        let ab = w(&pa, &wa, &pb, &wb);
        prop_assert!(ab >= 0.0);
        prop_assert!((ab - w(&pb, &wb, &pa, &wa)).abs() <= 1e-12);
        prop_assert!(w(&pa, &wa, &pa, &wa) <= 1e-12);
        prop_assert!(ab <= w(&pa, &wa, &pc, &wc) + w(&pc, &wc, &pb, &wb) + 1e-12);
        let moved: Vec<f64> = pa.iter().map(|x| x + shift).collect();
        prop_assert!((w(&pa, &wa, &moved, &wa) - shift.abs()).abs() <= 1e-12);
        let (mb, mc): (Vec<f64>, Vec<f64>) = (pb.iter().map(|x| x + shift).collect(), pa.iter().map(|x| x + shift).collect());
        prop_assert!((w(&mc, &wa, &mb, &wb) - ab).abs() <= 1e-12);
        // Scaling the weights of one side leaves the normalized measure alone.
        let wa2: Vec<f64> = wa.iter().map(|x| 3.0 * x).collect();
        prop_assert!((w(&pa, &wa2, &pb, &wb) - ab).abs() <= 1e-12);
    }

    #[test]
    fn quantile_brackets(mut v in prop::collection::vec(-100.0f64..100.0, 1..50), q in 0.0f64..1.0) {
        let mut sorted = v.clone();
        sorted.sort_by(f64::total_cmp);
        let x = quantile(&mut v, q);
        prop_assert!(x >= sorted[0] && x <= sorted[sorted.len() - 1]);
        let below = sorted.iter().filter(|&&s| s < x).count() as f64;
        prop_assert!(below <= q * (sorted.len() - 1) as f64 + 1.0);
    }

    #[test]
    fn knn_matches_brute_force(pts in prop::collection::vec(prop::array::uniform3(-1.0f64..1.0), 2..30), k in 1usize..6) {
        let got = knn_distance(&pts, k);
        for (i, p) in pts.iter().enumerate() {
            let mut d: Vec<f64> = pts
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt())
                .collect();
            d.sort_by(f64::total_cmp);
            prop_assert!((got[i] - d[k.min(d.len()) - 1]).abs() <= 1e-12);
        }
    }

    #[test]
    fn normalized_rows_are_unit(mut rows in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 4), 1..20)) {
        rows.push(vec![0.0; 4]);
        let before = rows.clone();
        normalize_rows(&mut rows);
        for (r, b) in rows.iter().zip(&before) {
            let n: f64 = r.iter().map(|v| v * v).sum::<f64>().sqrt();
            let nb: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
            if nb == 0.0 {
                prop_assert!(n == 0.0);
            } else {
                prop_assert!((n - 1.0).abs() <= 1e-12);
                // Same direction.
                let dot: f64 = r.iter().zip(b).map(|(x, y)| x * y).sum();
                prop_assert!((dot - nb).abs() <= 1e-9 * nb);
            }
        }
    }

    #[test]
    fn grid_bins_round_trip(alpha_sq in 0.001f64..0.5, fs in 1.0f64..1000.0) {
        let g = TfcGrid::from_resolution(alpha_sq, 3, fs).unwrap();
        for j in (0..g.n_freq()).step_by(7) {
            for c in (0..g.n_chirp()).step_by(5) {
                let (f, l) = g.bin_to_physical(j, c).unwrap();
                prop_assert_eq!(g.physical_to_bin(f, l).unwrap(), (j, c));
            }
        }
    }

    #[test]
    fn edge_frames_grow_as_tolerance_shrinks(wn in 0u32..4, alpha_w in 0.3f64..3.0) {
        let bank = WindowBank::with_default_len(WindowFamily::gaussian_power(wn, alpha_w).unwrap(), 0.01).unwrap();
        let counts: Vec<usize> = [0.1, 0.01, 1e-3, 1e-4, 1e-6].iter().map(|&l| bank.edge_frames(l)).collect();
        prop_assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{counts:?}");
        prop_assert!(counts[4] <= bank.half_len);
        prop_assert_eq!(bank.edge_frames(1.0), 0);
    }
}
