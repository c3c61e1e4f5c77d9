use num_complex::Complex64;

use crate::error::{param, Result};

/// A uniformly sampled complex signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<Complex64>,
    sample_rate_hz: f64,
    t0_s: f64,
}

impl Signal {
    pub fn new(samples: Vec<Complex64>, sample_rate_hz: f64, t0_s: f64) -> Result<Self> {
        if !(sample_rate_hz > 0.0) || !sample_rate_hz.is_finite() {
            return param(format!("sample rate must be positive, got {sample_rate_hz}"));
        }
        if !t0_s.is_finite() {
            return param("start time must be finite");
        }
        if samples.is_empty() {
            return param("signal must contain at least one sample");
        }
        if let Some(i) = samples.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return param(format!("sample {i} is not finite"));
        }
        Ok(Self { samples, sample_rate_hz, t0_s })
    }

    pub fn from_real(samples: &[f64], sample_rate_hz: f64, t0_s: f64) -> Result<Self> {
        Self::new(samples.iter().map(|&x| Complex64::new(x, 0.0)).collect(), sample_rate_hz, t0_s)
    }

    /// Sample `f` at `t0 + n / fs` for `n = 0..len`.
    pub fn from_fn(len: usize, sample_rate_hz: f64, t0_s: f64, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let dt = 1.0 / sample_rate_hz;
        Self::new((0..len).map(|n| f(t0_s + n as f64 * dt)).collect(), sample_rate_hz, t0_s)
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn dt_s(&self) -> f64 {
        1.0 / self.sample_rate_hz
    }

    pub fn t0_s(&self) -> f64 {
        self.t0_s
    }

    pub fn time_of(&self, n: usize) -> f64 {
        self.t0_s + n as f64 / self.sample_rate_hz
    }

    /// Nearest sample index for time `t`, if inside the record.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let idx = ((t - self.t0_s) * self.sample_rate_hz).round();
        (idx >= 0.0 && (idx as usize) < self.len()).then_some(idx as usize)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self { samples: self.samples.iter().map(|&z| z * c).collect(), ..self.clone() }
    }

    /// Keep every `factor`-th sample.
    pub fn decimate(&self, factor: usize) -> Result<Self> {
        if factor == 0 {
            return param("decimation factor must be at least 1");
        }
        Self::new(
            self.samples.iter().step_by(factor).copied().collect(),
            self.sample_rate_hz / factor as f64,
            self.t0_s,
        )
    }
}

impl std::ops::Add for &Signal {
    type Output = Signal;

    fn add(self, rhs: &Signal) -> Signal {
        assert_eq!(self.len(), rhs.len(), "signal lengths differ");
        Signal {
            samples: self.samples.iter().zip(&rhs.samples).map(|(a, b)| a + b).collect(),
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_inputs() {
        assert!(Signal::new(vec![], 1.0, 0.0).is_err());
        assert!(Signal::new(vec![Complex64::new(1.0, 0.0)], 0.0, 0.0).is_err());
        assert!(Signal::new(vec![Complex64::new(f64::NAN, 0.0)], 1.0, 0.0).is_err());
    }

    #[test]
    fn decimation_length() {
        let s = Signal::from_real(&vec![0.0; 1000], 8000.0, 0.0).unwrap();
        let d = s.decimate(8).unwrap();
        assert_eq!(d.len(), 125);
        assert_eq!(d.sample_rate_hz(), 1000.0);
    }

    #[test]
    fn time_index_round_trip() {
        let s = Signal::from_real(&vec![0.0; 401], 100.0, 1.0).unwrap();
        assert_eq!(s.index_of(3.0), Some(200));
        assert!((s.time_of(200) - 3.0).abs() < 1e-12);
        assert_eq!(s.index_of(0.5), None);
    }
}
