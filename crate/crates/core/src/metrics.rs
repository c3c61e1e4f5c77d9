//! Evaluation metrics: SNR, masked relative error and 1-D Wasserstein-1.

use crate::error::{Error, Result};

/// Population standard deviation.
pub fn std_dev(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    let m = x.iter().sum::<f64>() / x.len() as f64;
    (x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / x.len() as f64).sqrt()
}

/// `20 log10(std(signal) / std(noise))`; `+inf` for zero noise.
pub fn snr_db(signal: &[f64], noise: &[f64]) -> f64 {
    let sn = std_dev(noise);
    if sn == 0.0 {
        return f64::INFINITY;
    }
    20.0 * (std_dev(signal) / sn).log10()
}

/// `||(estimate - truth) 1_mask|| / ||truth 1_mask||`.
pub fn rel_error(estimate: &[f64], truth: &[f64], mask: &[bool]) -> Result<f64> {
    if estimate.len() != truth.len() || mask.len() != truth.len() {
        return Err(Error::Shape("estimate, truth and mask lengths differ".into()));
    }
    let (mut num, mut den) = (0.0, 0.0);
    for i in (0..truth.len()).filter(|&i| mask[i]) {
        num += (estimate[i] - truth[i]).powi(2);
        den += truth[i].powi(2);
    }
    if den == 0.0 {
        return Err(Error::UndefinedMetric("truth vanishes on the mask".into()));
    }
    Ok((num / den).sqrt())
}

/// Mask of samples whose time lies in `[lo, hi]` (or its complement within
/// `[outer_lo, outer_hi]` when `complement` is set).
pub fn interval_mask(times: &[f64], lo: f64, hi: f64) -> Vec<bool> {
    times.iter().map(|&t| t >= lo - 1e-9 && t <= hi + 1e-9).collect()
}

/// Wasserstein-1 distance between two weighted point sets on the line,
/// `int |F_a - F_b|`. Weights are normalized internally.
pub fn wasserstein1_1d(pa: &[f64], wa: &[f64], pb: &[f64], wb: &[f64]) -> Result<f64> {
    if pa.len() != wa.len() || pb.len() != wb.len() {
        return Err(Error::Shape("positions and weights differ in length".into()));
    }
    let sa: f64 = wa.iter().sum();
    let sb: f64 = wb.iter().sum();
    if pa.is_empty() || pb.is_empty() || !(sa > 0.0) || !(sb > 0.0) {
        return Err(Error::UndefinedMetric("empty distribution".into()));
    }
    if wa.iter().chain(wb).any(|&w| w < 0.0 || !w.is_finite()) {
        return Err(Error::UndefinedMetric("weights must be finite and nonnegative".into()));
    }
    // Signed mass events: +a, -b. Integrate |cumulative| between positions.
    let mut events: Vec<(f64, f64)> = pa
        .iter()
        .zip(wa)
        .map(|(&p, &w)| (p, w / sa))
        .chain(pb.iter().zip(wb).map(|(&p, &w)| (p, -w / sb)))
        .collect();
    events.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut cdf = 0.0;
    let mut total = 0.0;
    for w in events.windows(2) {
        cdf += w[0].1;
        total += cdf.abs() * (w[1].0 - w[0].0);
    }
    Ok(total)
}

/// Mean over `frames` of the W1 distance between each frame's estimated
/// frequency distribution and a point mass at the true frequency.
pub fn ot_if_metric(estimate: &[Vec<(f64, f64)>], truth_hz: &[f64], frames: &[usize]) -> Result<f64> {
    if estimate.len() != truth_hz.len() {
        return Err(Error::Shape("estimate and truth cover different frames".into()));
    }
    if frames.is_empty() {
        return Err(Error::UndefinedMetric("no frames to average over".into()));
    }
    let mut acc = 0.0;
    for &n in frames {
        let (p, w): (Vec<f64>, Vec<f64>) = estimate[n].iter().copied().unzip();
        acc += wasserstein1_1d(&p, &w, &[truth_hz[n]], &[1.0])?;
    }
    Ok(acc / frames.len() as f64)
}

/// Point-mass distributions from a single-valued curve.
pub fn point_masses(curve: &[f64]) -> Vec<Vec<(f64, f64)>> {
    curve.iter().map(|&v| vec![(v, 1.0)]).collect()
}

/// Mean and sample standard deviation (zero for one value).
pub fn mean_sd(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let sd = if x.len() > 1 { (x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt() } else { 0.0 };
    (m, sd)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rel_error_basics() {
        let t = [1.0, -2.0, 3.0, 0.5];
        let m = [true, true, false, true];
        assert_eq!(rel_error(&t, &t, &m).unwrap(), 0.0);
        assert_eq!(rel_error(&[0.0; 4], &t, &m).unwrap(), 1.0);
        let e: Vec<f64> = t.iter().map(|v| v * 1.1).collect();
        assert!((rel_error(&e, &t, &m).unwrap() - 0.1).abs() < 1e-12);
        assert!(rel_error(&t, &[0.0; 4], &m).is_err());
    }

    #[test]
    fn w1_basics() {
        assert_eq!(wasserstein1_1d(&[1.0, 2.0], &[0.5, 0.5], &[1.0, 2.0], &[2.0, 2.0]).unwrap(), 0.0);
        assert!((wasserstein1_1d(&[0.0], &[1.0], &[3.5], &[1.0]).unwrap() - 3.5).abs() < 1e-15);
        assert!(wasserstein1_1d(&[], &[], &[1.0], &[1.0]).is_err());
    }

    #[test]
    fn ot_metric_offset() {
        let truth: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let est: Vec<f64> = truth.iter().map(|v| v + 0.7).collect();
        let frames: Vec<usize> = (0..10).collect();
        assert_eq!(ot_if_metric(&point_masses(&truth), &truth, &frames).unwrap(), 0.0);
        assert!((ot_if_metric(&point_masses(&est), &truth, &frames).unwrap() - 0.7).abs() < 1e-12);
    }

    #[test]
    fn snr_scaling() {
        let s = [1.0, -1.0, 2.0, 0.0];
        let n = [0.1, 0.2, -0.3, 0.0];
        let a = snr_db(&s, &n);
        let s3: Vec<f64> = s.iter().map(|v| v * 3.0).collect();
        assert!((snr_db(&s3, &n) - a - 20.0 * 3f64.log10()).abs() < 1e-12);
    }
}
