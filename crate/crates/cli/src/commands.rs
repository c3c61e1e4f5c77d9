use std::path::{Path, PathBuf};

use sct_core::experiment::{match_to_truth, run_study, Method, StudyConfig};
use sct_core::metrics::{interval_mask, mean_sd, rel_error};
use sct_core::reassign::{refine_ridges, sct};
use sct_core::reconstruct::{reconstruct_modes_with, ReconstructedModes};
use sct_core::ridge::{extract_ridges, RidgeSet};
use sct_core::synth::{crossing_chirp_pair, random_scene, SceneSpec, SyntheticScene};
use sct_core::transform::{chirplet_transform, project_tfc_to_tf, TfcTensor};
use sct_core::{Complex64, Signal};

use crate::args::*;
use crate::config::RunConfig;
use crate::error::{usage, CliError, Result};
use crate::output::{num, write_atomic, Table};
use crate::signal_io::{read_csv, read_signal, InputOptions};
use crate::tensor::{self, Dtype};

pub fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Transform(a) => transform(a),
        Command::Sct(a) => sct_cmd(a),
        Command::Ridge(a) => ridge(a),
        Command::Reconstruct(a) => reconstruct(a),
        Command::Synth(a) => synth(a),
        Command::Compare(a) => compare(a),
        Command::Info(a) => info(a),
    }
}

/// Outputs are collected first and written only once every step succeeded.
#[derive(Default)]
struct Outputs(Vec<(PathBuf, Vec<u8>)>);

impl Outputs {
    fn add(&mut self, path: &Path, bytes: Vec<u8>) {
        self.0.push((path.to_path_buf(), bytes));
    }

    fn commit(self) -> Result<()> {
        for (p, b) in self.0 {
            write_atomic(&p, &b)?;
        }
        Ok(())
    }
}

fn input(a: &InputArgs) -> Result<Signal> {
    read_signal(&a.input, &InputOptions { sample_rate_hz: a.fs, downsample: a.downsample, lowpass: a.lowpass })
}

fn dtype(d: DtypeArg) -> Dtype {
    match d {
        DtypeArg::C64 => Dtype::Complex64,
        DtypeArg::C128 => Dtype::Complex128,
    }
}

fn frame_at(t: &TfcTensor, time_s: f64) -> Result<usize> {
    let n = ((time_s - t.t0_s) * t.grid.sample_rate_hz).round();
    if !(n >= 0.0 && n < t.grid.n_time as f64) {
        return usage(format!("--slice {time_s} s is outside the record"));
    }
    Ok(n as usize)
}

fn slice_csv(t: &TfcTensor, time_s: f64) -> Result<Vec<u8>> {
    let n = frame_at(t, time_s)?;
    let g = t.grid;
    let mut tab = Table::new(&["freq_hz", "chirp_hzps", "magnitude"]);
    for j in 0..g.n_freq() {
        for c in 0..g.n_chirp() {
            tab.row([num(g.freq_hz(j)), num(g.chirp_hzps(c)), num(t.get(c, j, n).norm())]);
        }
    }
    Ok(tab.into_bytes())
}

fn add_slice(out: &mut Outputs, t: &TfcTensor, s: &SliceArgs) -> Result<()> {
    if let (Some(time), Some(path)) = (s.slice, &s.slice_out) {
        out.add(path, slice_csv(t, time)?);
    }
    Ok(())
}

fn transform(a: TransformArgs) -> Result<()> {
    let cfg = RunConfig::load(a.config.as_deref())?;
    let sig = input(&a.input)?;
    let grid = cfg.grid(sig.len(), sig.sample_rate_hz())?;
    let bank = cfg.window.bank(sig.dt_s())?;
    let t = chirplet_transform(&sig, &bank.h, &grid, cfg.ct_options())?;
    let mut out = Outputs::default();
    out.add(&a.out, tensor::encode(&t, dtype(a.dtype)));
    if let Some(p) = &a.tf_out {
        let tf = project_tfc_to_tf(&t);
        let mut tab = Table::new(&["t_s", "freq_hz", "magnitude"]);
        for n in 0..grid.n_time {
            for (j, v) in tf.frame(n).iter().enumerate() {
                tab.row([num(t.time_s(n)), num(grid.freq_hz(j)), num(*v)]);
            }
        }
        out.add(p, tab.into_bytes());
    }
    add_slice(&mut out, &t, &a.slice)?;
    out.commit()
}

fn sct_cmd(a: SctArgs) -> Result<()> {
    let cfg = RunConfig::load(a.config.as_deref())?;
    let sig = input(&a.input)?;
    let grid = cfg.grid(sig.len(), sig.sample_rate_hz())?;
    let bank = cfg.window.bank(sig.dt_s())?;
    let res = sct(&sig, &bank, &grid, &cfg.sct_config()?)?;
    let sq = &res.squeezed;
    let mut out = Outputs::default();
    out.add(&a.out, tensor::encode(&sq.s, dtype(a.dtype)));
    if let Some(p) = &a.ct_out {
        out.add(p, tensor::encode(&res.t, dtype(a.dtype)));
    }
    if let Some(p) = &a.summary {
        let resid = sq.conservation_residuals();
        let mut tab = Table::new(&["t_s", "sum_s_re", "sum_s_im", "sum_t_re", "sum_t_im", "rel_residual"]);
        for n in 0..grid.n_time {
            let s: Complex64 = sq.s.frame(n).iter().sum();
            let t = sq.contributed[n];
            tab.row([num(sq.s.time_s(n)), num(s.re), num(s.im), num(t.re), num(t.im), num(resid[n])]);
        }
        out.add(p, tab.into_bytes());
    }
    add_slice(&mut out, &sq.s, &a.slice)?;
    out.commit()?;
    println!("threshold nu = {}", res.nu);
    Ok(())
}

fn ridges_csv(r: &RidgeSet) -> Vec<u8> {
    let mut header = vec!["t_s".to_string()];
    for k in 1..=r.k() {
        header.extend([format!("omega{k}_hz"), format!("mu{k}_hzps"), format!("valid{k}")]);
    }
    let mut tab = Table::new(&header.iter().map(String::as_str).collect::<Vec<_>>());
    for n in 0..r.n_time() {
        let mut row = vec![num(r.t0_s + n as f64 / r.sample_rate_hz)];
        for c in &r.curves {
            row.extend([num(c.omega_hz[n]), num(c.mu_hzps[n]), (c.valid[n] as u8).to_string()]);
        }
        tab.row(row);
    }
    tab.into_bytes()
}

/// Ridges from the squeezed tensor, refined against `sig` when configured.
fn ridges_for(cfg: &RunConfig, s: &TfcTensor, sig: Option<&Signal>) -> Result<RidgeSet> {
    let dt = 1.0 / s.grid.sample_rate_hz;
    let bank = cfg.window.bank(dt)?;
    let edge = bank.edge_frames(cfg.ridge.edge_loss);
    let r = extract_ridges(s, None, cfg.ridge.k, &cfg.ridge_params(edge))?;
    match (sig, cfg.refine_params(edge)) {
        (Some(sig), Some(p)) => Ok(refine_ridges(sig, &bank, &r, &p)?),
        _ => Ok(r),
    }
}

fn check_alignment(s: &TfcTensor, sig: &Signal) -> Result<()> {
    let g = s.grid;
    if g.n_time != sig.len() || g.sample_rate_hz != sig.sample_rate_hz() {
        return usage(format!(
            "tensor has {} frames at {} Hz but the signal has {} samples at {} Hz",
            g.n_time,
            g.sample_rate_hz,
            sig.len(),
            sig.sample_rate_hz()
        ));
    }
    Ok(())
}

fn apply_overrides(cfg: &mut RunConfig, k: Option<usize>, seed: Option<u64>) -> Result<()> {
    if let Some(k) = k {
        cfg.ridge.k = k;
    }
    if let Some(s) = seed {
        cfg.ridge.seed = s;
    }
    cfg.validate()
}

fn ridge(a: RidgeArgs) -> Result<()> {
    let mut cfg = RunConfig::load(a.config.as_deref())?;
    apply_overrides(&mut cfg, a.k, a.seed)?;
    let s = tensor::read(&a.tensor)?;
    let sig = match &a.input.input {
        Some(p) => Some(read_signal(
            p,
            &InputOptions { sample_rate_hz: a.input.fs, downsample: a.input.downsample, lowpass: a.input.lowpass },
        )?),
        None => None,
    };
    if let Some(sig) = &sig {
        check_alignment(&s, sig)?;
    }
    let r = ridges_for(&cfg, &s, sig.as_ref())?;
    let mut out = Outputs::default();
    out.add(&a.out, ridges_csv(&r));
    out.commit()
}

/// True components stored in a scene CSV by `synth`.
fn read_truth(path: &Path) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| CliError::format(path, e.to_string()))?;
    let headers = rdr.headers().map_err(|e| CliError::format(path, e.to_string()))?.clone();
    let col = |name: String| headers.iter().position(|h| h == name);
    let mut cols = Vec::new();
    for k in 1.. {
        match (col(format!("c{k}_re")), col(format!("c{k}_if_hz"))) {
            (Some(re), Some(f)) => cols.push((re, f)),
            _ => break,
        }
    }
    if cols.is_empty() {
        return Err(CliError::format(path, "no c1_re / c1_if_hz columns; expected a scene written by `synth`"));
    }
    let (mut re, mut freq) = (vec![Vec::new(); cols.len()], vec![Vec::new(); cols.len()]);
    for rec in rdr.records() {
        let rec = rec.map_err(|e| CliError::format(path, e.to_string()))?;
        for (k, &(rc, fc)) in cols.iter().enumerate() {
            let get = |c: usize| -> Result<f64> {
                rec.get(c).and_then(|v| v.trim().parse().ok()).ok_or_else(|| CliError::format(path, "bad number in truth column"))
            };
            re[k].push(get(rc)?);
            freq[k].push(get(fc)?);
        }
    }
    Ok((re, freq))
}

fn modes_csv(sig: &Signal, m: &ReconstructedModes) -> Vec<u8> {
    let mut header = vec!["t_s".to_string()];
    for k in 1..=m.modes.len() {
        header.extend([format!("mode{k}_re"), format!("mode{k}_im")]);
    }
    header.push("degraded".into());
    let mut tab = Table::new(&header.iter().map(String::as_str).collect::<Vec<_>>());
    for n in 0..sig.len() {
        let mut row = vec![num(sig.time_of(n))];
        for mode in &m.modes {
            row.extend([num(mode[n].re), num(mode[n].im)]);
        }
        row.push((m.degraded[n] as u8).to_string());
        tab.row(row);
    }
    tab.into_bytes()
}

fn reconstruct(a: ReconstructArgs) -> Result<()> {
    let mut cfg = RunConfig::load(a.config.as_deref())?;
    apply_overrides(&mut cfg, a.k, a.seed)?;
    let s = tensor::read(&a.tensor)?;
    let sig = input(&a.input)?;
    check_alignment(&s, &sig)?;
    let truth = a.truth.as_deref().map(read_truth).transpose()?;
    if let Some((re, _)) = &truth {
        if re[0].len() != sig.len() {
            return usage(format!("truth has {} rows, the signal {} samples", re[0].len(), sig.len()));
        }
    }
    let interval = match a.interval.as_deref() {
        Some([lo, hi]) if lo < hi => Some((*lo, *hi)),
        Some(_) => return usage("--interval needs two values LO,HI with LO < HI"),
        None => None,
    };

    let ridges = ridges_for(&cfg, &s, Some(&sig))?;
    let rbank = cfg.reconstruct.window.bank(sig.dt_s())?;
    let modes = reconstruct_modes_with(&sig, &ridges, &rbank, cfg.mixing())?;

    let mut out = Outputs::default();
    out.add(&a.out, modes_csv(&sig, &modes));
    if let Some(p) = &a.ridges_out {
        out.add(p, ridges_csv(&ridges));
    }
    if let (Some((re, freq)), Some(p)) = (&truth, &a.report) {
        let times: Vec<f64> = (0..sig.len()).map(|n| sig.time_of(n)).collect();
        let (t_lo, t_hi) = (times[0], times[times.len() - 1]);
        let mut regions = vec![("all", t_lo, t_hi, vec![true; times.len()])];
        if let Some((lo, hi)) = interval {
            let inside = interval_mask(&times, lo, hi);
            let outside = inside.iter().map(|&b| !b).collect();
            regions.push(("inside", lo, hi, inside));
            regions.push(("outside", t_lo, t_hi, outside));
        }
        let truth_of = match_to_truth(&ridges.curves, freq);
        let mut tab = Table::new(&["mode", "truth", "region", "lo_s", "hi_s", "rel_error"]);
        for (r, &t) in truth_of.iter().enumerate() {
            let est: Vec<f64> = modes.modes[r].iter().map(|z| z.re).collect();
            for (name, lo, hi, mask) in &regions {
                let e = rel_error(&est, &re[t], mask)?;
                tab.row([(r + 1).to_string(), (t + 1).to_string(), name.to_string(), num(*lo), num(*hi), num(e)]);
            }
        }
        out.add(p, tab.into_bytes());
    }
    out.commit()
}

fn scene_csv(sc: &SyntheticScene) -> Vec<u8> {
    let mut header = vec!["t_s".to_string(), "re".into(), "im".into()];
    for k in 1..=sc.components.len() {
        header.extend([format!("c{k}_re"), format!("c{k}_im"), format!("c{k}_if_hz"), format!("c{k}_chirp_hzps")]);
    }
    let mut tab = Table::new(&header.iter().map(String::as_str).collect::<Vec<_>>());
    for n in 0..sc.len() {
        let z = sc.mixed.samples()[n];
        let mut row = vec![num(sc.mixed.time_of(n)), num(z.re), num(z.im)];
        for k in 0..sc.components.len() {
            let c = sc.components[k][n];
            row.extend([num(c.re), num(c.im), num(sc.if_hz[k][n]), num(sc.chirp_hzps[k][n])]);
        }
        tab.row(row);
    }
    tab.into_bytes()
}

fn synth(a: SynthArgs) -> Result<()> {
    let sc = match a.scene {
        SceneName::Crossing => crossing_chirp_pair(a.fs, a.start, a.end)?,
        SceneName::Random => random_scene(&SceneSpec::default(), a.seed)?,
    };
    let mut out = Outputs::default();
    out.add(&a.out, scene_csv(&sc));
    out.commit()?;
    println!("{} samples at {} Hz, SNR {:.2} dB", sc.len(), sc.sample_rate_hz, sc.snr_db);
    Ok(())
}

fn compare(a: CompareArgs) -> Result<()> {
    if a.count == 0 {
        return usage("--count must be at least 1");
    }
    let mut methods: Vec<Method> = Vec::new();
    for m in &a.methods {
        let m = match m {
            MethodArg::Sct => Method::Sct,
            MethodArg::Ct => Method::Ct,
            MethodArg::Sst2 => Method::Sst2,
        };
        if !methods.contains(&m) {
            methods.push(m);
        }
    }
    let seeds: Vec<u64> = (a.seed..a.seed + a.count).collect();
    let reports = run_study(&StudyConfig::default(), &seeds, &methods)?;
    let k = reports[0].scores[0].rel_error.len();

    let mut header = vec!["method".to_string()];
    for i in 1..=k {
        header.extend([format!("rel_err_f{i}_mean"), format!("rel_err_f{i}_sd")]);
    }
    for i in 1..=k {
        header.extend([format!("ot_f{i}_hz_mean"), format!("ot_f{i}_hz_sd")]);
    }
    header.push("n_seeds".into());
    let mut tab = Table::new(&header.iter().map(String::as_str).collect::<Vec<_>>());
    let mut printed = Vec::new();
    for m in Method::ALL.into_iter().filter(|m| methods.contains(m)) {
        let scores: Vec<_> = reports.iter().filter_map(|r| r.get(m)).collect();
        let mut row = vec![m.name().to_string()];
        let mut line = format!("{:5}", m.name());
        for i in 0..k {
            let (mu, sd) = mean_sd(&scores.iter().map(|s| s.rel_error[i]).collect::<Vec<_>>());
            row.extend([num(mu), num(sd)]);
            line += &format!("  rel f{} {mu:.3} ± {sd:.3}", i + 1);
        }
        for i in 0..k {
            let (mu, sd) = mean_sd(&scores.iter().map(|s| s.ot[i]).collect::<Vec<_>>());
            row.extend([num(mu), num(sd)]);
            line += &format!("  OT f{} {mu:.3} ± {sd:.3} Hz", i + 1);
        }
        row.push(seeds.len().to_string());
        tab.row(row);
        printed.push(line);
    }
    let mut out = Outputs::default();
    out.add(&a.out, tab.into_bytes());
    if let Some(p) = &a.per_seed {
        let mut header = vec!["seed".to_string(), "snr_db".into(), "method".into()];
        for i in 1..=k {
            header.push(format!("rel_err_f{i}"));
        }
        for i in 1..=k {
            header.push(format!("ot_f{i}_hz"));
        }
        let mut per = Table::new(&header.iter().map(String::as_str).collect::<Vec<_>>());
        for r in &reports {
            for s in &r.scores {
                let mut row = vec![r.seed.to_string(), num(r.snr_db), s.method.name().to_string()];
                row.extend(s.rel_error.iter().chain(&s.ot).map(|&v| num(v)));
                per.row(row);
            }
        }
        out.add(p, per.into_bytes());
    }
    out.commit()?;
    for l in printed {
        println!("{l}");
    }
    Ok(())
}

fn info(a: InfoArgs) -> Result<()> {
    let bytes = std::fs::read(&a.path).map_err(|e| CliError::io(&a.path, e))?;
    if bytes.starts_with(tensor::MAGIC) {
        let h = tensor::TensorFileHeader::parse(&bytes, &a.path)?;
        let t = tensor::decode(&bytes, &a.path)?;
        let g = t.grid;
        println!("format: TFC1 v{} {:?}", h.version, h.dtype);
        println!("dims (chirp, freq, time): {} x {} x {}", h.n_chirp, h.n_freq, h.n_time);
        println!("alpha_sq: {} (M = {})", g.alpha_sq, g.m);
        println!("sample rate: {} Hz, t0: {} s", g.sample_rate_hz, t.t0_s);
        println!("frequency step: {} Hz, chirp step: {} Hz/s", g.freq_step_hz(), g.chirp_step_hzps());
        println!("chirp range: {} .. {} Hz/s", g.chirp_hzps(0), g.chirp_hzps(g.n_chirp() - 1));
        println!("max |value|: {}", t.max_abs());
        return Ok(());
    }
    let sig = if a.path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        read_csv(&a.path, a.fs)?
    } else {
        read_signal(&a.path, &InputOptions { sample_rate_hz: a.fs, ..Default::default() })?
    };
    let rms = (sig.samples().iter().map(|z| z.norm_sqr()).sum::<f64>() / sig.len() as f64).sqrt();
    println!("format: signal");
    println!("samples: {}", sig.len());
    println!("sample rate: {} Hz, t0: {} s, duration: {} s", sig.sample_rate_hz(), sig.t0_s(), (sig.len() - 1) as f64 * sig.dt_s());
    println!("rms: {rms}");
    Ok(())
}
