//! Crossing-chirp comparison of SCT and second-order SST reconstruction.

use std::time::Instant;

use sct_core::experiment::{chirp_slice_peaks, run_crossing, CrossingConfig};

fn main() -> sct_core::Result<()> {
    let start = Instant::now();
    let cfg = CrossingConfig::default();
    let r = run_crossing(&cfg)?;
    let peaks = chirp_slice_peaks(&r.sct.squeezed.s, 3.0, 24.0)?;
    println!("SCT(g2) slice peaks at (3 s, 24 Hz): {:?}", &peaks[..peaks.len().min(4)]);
    for (k, (a, b)) in r.sct_errors.iter().zip(&r.sst_errors).enumerate() {
        println!(
            "f{}: SCT I1 {:.3} I2 {:.3} | SST2 I1 {:.3} I2 {:.3}",
            k + 1,
            a.crossing,
            a.rest,
            b.crossing,
            b.rest
        );
    }
    let sc = &r.scene;
    for (name, set) in [("SCT", &r.ridges), ("SST2", &r.sst_ridges)] {
        let tm = sct_core::experiment::match_to_truth(&set.curves, &sc.if_hz);
        for (i, c) in set.curves.iter().enumerate() {
            let t = tm[i];
            let n = c.omega_hz.len();
            let err: f64 = (0..n).map(|j| (c.omega_hz[j] - sc.if_hz[t][j]).abs()).sum::<f64>() / n as f64;
            let valid = c.valid.iter().filter(|&&v| v).count();
            println!("{name} ridge {i} -> f{}: mean |IF error| {err:.2} Hz, {valid} valid frames", t + 1);
        }
    }
    let degraded = r.sct_modes.degraded.iter().filter(|&&d| d).count();
    println!("degraded frames: {degraded}, elapsed {:.1?}", start.elapsed());
    Ok(())
}
