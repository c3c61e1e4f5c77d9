//! Reduced Monte-Carlo study on the random two-component scene.

use std::time::Instant;

use sct_core::experiment::{run_study, Method, StudyConfig};

fn main() -> sct_core::Result<()> {
    let n: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let start = Instant::now();
    let seeds: Vec<u64> = (0..n).collect();
    let reports = run_study(&StudyConfig::default(), &seeds, &Method::ALL)?;
    for r in &reports {
        print!("seed {:2} snr {:5.2} dB", r.seed, r.snr_db);
        for s in &r.scores {
            print!(" | {:4} rel {:.3}/{:.3} ot {:.3}/{:.3}", s.method.name(), s.rel_error[0], s.rel_error[1], s.ot[0], s.ot[1]);
        }
        println!();
    }
    for m in Method::ALL {
        let rel: Vec<f64> = reports.iter().flat_map(|r| r.get(m).unwrap().rel_error.clone()).collect();
        let ot: Vec<f64> = reports.iter().flat_map(|r| r.get(m).unwrap().ot.clone()).collect();
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        println!("{}: mean rel {:.3}, mean OT {:.3}", m.name(), mean(&rel), mean(&ot));
    }
    println!("elapsed {:.1?}", start.elapsed());
    Ok(())
}
