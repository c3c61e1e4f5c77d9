//! The x^n-Gaussian window family and its sampled companion bank.

use std::f64::consts::PI;

use crate::error::{param, Result};

/// Tail level (relative to the peak) used to pick the default half length.
pub const TAIL_LEVEL: f64 = 1e-8;

/// Supported analytic window shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WindowKind {
    /// `x^n exp(-pi alpha_w x^2)`.
    GaussianPower,
}

/// Analytic descriptor `g(x) = x^n exp(-pi alpha_w x^2)` (x in seconds).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowFamily {
    pub kind: WindowKind,
    pub n: u32,
    pub alpha_w: f64,
}

impl WindowFamily {
    pub fn gaussian_power(n: u32, alpha_w: f64) -> Result<Self> {
        let w = Self { kind: WindowKind::GaussianPower, n, alpha_w };
        w.validate()?;
        Ok(w)
    }

    /// `g_k(x) = x^k exp(-pi x^2)`.
    pub fn g(k: u32) -> Self {
        Self { kind: WindowKind::GaussianPower, n: k, alpha_w: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha_w > 0.0) || !self.alpha_w.is_finite() {
            return param(format!("alpha_w must be positive, got {}", self.alpha_w));
        }
        if self.n > 32 {
            return param(format!("window power {} is too large", self.n));
        }
        Ok(())
    }

    fn envelope(&self, x: f64) -> f64 {
        (-PI * self.alpha_w * x * x).exp()
    }

    /// `x^p`, with the convention `x^0 = 1` and zero for negative powers.
    fn pow(x: f64, p: i64) -> f64 {
        if p < 0 {
            0.0
        } else {
            x.powi(p as i32)
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        Self::pow(x, self.n as i64) * self.envelope(x)
    }

    pub fn deriv1(&self, x: f64) -> f64 {
        let n = self.n as i64;
        let a = self.alpha_w;
        let mut v = -2.0 * PI * a * Self::pow(x, n + 1);
        if n >= 1 {
            v += n as f64 * Self::pow(x, n - 1);
        }
        v * self.envelope(x)
    }

    pub fn deriv2(&self, x: f64) -> f64 {
        let n = self.n as i64;
        let a = self.alpha_w;
        let mut v = -2.0 * PI * a * (2 * n + 1) as f64 * Self::pow(x, n)
            + 4.0 * PI * PI * a * a * Self::pow(x, n + 2);
        if n >= 2 {
            v += (n * (n - 1)) as f64 * Self::pow(x, n - 2);
        }
        v * self.envelope(x)
    }

    /// Location of `max |g|`.
    pub fn peak_location(&self) -> f64 {
        (self.n as f64 / (2.0 * PI * self.alpha_w)).sqrt()
    }

    pub fn peak_value(&self) -> f64 {
        self.eval(self.peak_location()).abs()
    }

    /// Smallest half length `K` such that `|g(x)| < TAIL_LEVEL * max|g|` for
    /// every `|x| >= K * dt`.
    pub fn default_half_len(&self, dt_s: f64) -> usize {
        let peak = self.peak_value();
        let xp = self.peak_location();
        let mut k = (xp / dt_s).ceil().max(1.0) as usize;
        while self.eval(k as f64 * dt_s).abs() >= TAIL_LEVEL * peak {
            k += 1;
        }
        k
    }
}

/// Selects one of the six sampled companions of a window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Companion {
    H,
    HPrime,
    HSecond,
    TH,
    THPrime,
    T2H,
}

impl Companion {
    pub const ALL: [Companion; 6] = [
        Companion::H,
        Companion::HPrime,
        Companion::HSecond,
        Companion::TH,
        Companion::THPrime,
        Companion::T2H,
    ];
}

/// A window and its companions sampled at `x_k = (k - K_w) dt`,
/// `k = 0..2K_w`. All values are in physical (seconds) units.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowBank {
    pub family: WindowFamily,
    pub half_len: usize,
    pub dt_s: f64,
    pub h: Vec<f64>,
    pub h_prime: Vec<f64>,
    pub h_second: Vec<f64>,
    pub th: Vec<f64>,
    pub th_prime: Vec<f64>,
    pub t2h: Vec<f64>,
}

impl WindowBank {
    pub fn new(family: WindowFamily, half_len: usize, dt_s: f64) -> Result<Self> {
        family.validate()?;
        if half_len == 0 {
            return param("window half length must be at least 1");
        }
        if !(dt_s > 0.0) || !dt_s.is_finite() {
            return param(format!("sample spacing must be positive, got {dt_s}"));
        }
        let xs: Vec<f64> = (0..=2 * half_len).map(|k| (k as f64 - half_len as f64) * dt_s).collect();
        let h: Vec<f64> = xs.iter().map(|&x| family.eval(x)).collect();
        let h_prime: Vec<f64> = xs.iter().map(|&x| family.deriv1(x)).collect();
        Ok(Self {
            family,
            half_len,
            dt_s,
            th: xs.iter().zip(&h).map(|(x, v)| x * v).collect(),
            th_prime: xs.iter().zip(&h_prime).map(|(x, v)| x * v).collect(),
            t2h: xs.iter().zip(&h).map(|(x, v)| x * x * v).collect(),
            h_second: xs.iter().map(|&x| family.deriv2(x)).collect(),
            h,
            h_prime,
        })
    }

    /// Bank with the default tail-based half length.
    pub fn with_default_len(family: WindowFamily, dt_s: f64) -> Result<Self> {
        family.validate()?;
        if !(dt_s > 0.0) {
            return param(format!("sample spacing must be positive, got {dt_s}"));
        }
        Self::new(family, family.default_half_len(dt_s), dt_s)
    }

    pub fn len(&self) -> usize {
        2 * self.half_len + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn physical(&self, c: Companion) -> &[f64] {
        match c {
            Companion::H => &self.h,
            Companion::HPrime => &self.h_prime,
            Companion::HSecond => &self.h_second,
            Companion::TH => &self.th,
            Companion::THPrime => &self.th_prime,
            Companion::T2H => &self.t2h,
        }
    }

    /// Number of frames at each end of a record whose window loses more than
    /// `loss` of its L1 mass past the record boundary.
    pub fn edge_frames(&self, loss: f64) -> usize {
        let total: f64 = self.h.iter().map(|v| v.abs()).sum();
        let mut outside = 0.0;
        // Frame n clips taps 0..K-n, so the running sum up to tap k is the
        // loss of frame K-k-1.
        for k in 0..self.half_len {
            outside += self.h[k].abs();
            if outside > loss * total {
                return self.half_len - k;
            }
        }
        0
    }

    /// Companion rescaled to sample units: time is measured in samples, so
    /// derivatives pick up powers of `dt` and time weights lose them.
    pub fn sample_units(&self, c: Companion) -> Vec<f64> {
        let dt = self.dt_s;
        let scale = match c {
            Companion::H | Companion::THPrime => 1.0,
            Companion::HPrime => dt,
            Companion::HSecond => dt * dt,
            Companion::TH => 1.0 / dt,
            Companion::T2H => 1.0 / (dt * dt),
        };
        self.physical(c).iter().map(|v| v * scale).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_three_point() {
        let b = WindowBank::new(WindowFamily::g(0), 1, 1.0).unwrap();
        let e = (-PI).exp();
        assert!((b.h[0] - e).abs() < 1e-15 && (b.h[1] - 1.0).abs() < 1e-15 && (b.h[2] - e).abs() < 1e-15);
    }

    #[test]
    fn x_squared_vanishes_at_center() {
        for k in 1..6 {
            let b = WindowBank::new(WindowFamily::g(2), k, 0.1).unwrap();
            assert_eq!(b.h[k], 0.0);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let step = 1e-6;
        for n in 0..5 {
            let fam = WindowFamily::gaussian_power(n, 1.3).unwrap();
            let b = WindowBank::new(fam, 4, 0.5).unwrap();
            for k in 0..b.len() {
                let x = (k as f64 - 4.0) * 0.5;
                let d1 = (fam.eval(x + step) - fam.eval(x - step)) / (2.0 * step);
                let d2 = (fam.deriv1(x + step) - fam.deriv1(x - step)) / (2.0 * step);
                let s1 = b.h_prime[k].abs().max(1e-3);
                let s2 = b.h_second[k].abs().max(1e-3);
                assert!((d1 - b.h_prime[k]).abs() / s1 < 1e-6, "n={n} k={k}");
                assert!((d2 - b.h_second[k]).abs() / s2 < 1e-6, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn parity() {
        for n in 0..5u32 {
            let b = WindowBank::new(WindowFamily::g(n), 7, 0.13).unwrap();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            for k in 0..b.len() {
                let r = b.len() - 1 - k;
                assert_eq!(b.h[k], sign * b.h[r]);
                assert_eq!(b.th[k], -sign * b.th[r]);
            }
        }
    }

    #[test]
    fn default_half_len_tail() {
        let fam = WindowFamily::g(0);
        let k = fam.default_half_len(0.01);
        assert!(fam.eval(k as f64 * 0.01) < TAIL_LEVEL);
        assert!(fam.eval((k - 1) as f64 * 0.01) >= TAIL_LEVEL);
        assert_eq!(k, 243);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(WindowFamily::gaussian_power(0, 0.0).is_err());
        assert!(WindowBank::new(WindowFamily::g(0), 0, 1.0).is_err());
        assert!(WindowBank::new(WindowFamily::g(0), 3, -1.0).is_err());
    }
}
