//! Closed forms and quadrature for the chirp and chirplet transforms.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::window::WindowFamily;

/// `2 sqrt(6) / sqrt(pi)`: uniform bound on `|int_a^b exp(-pi i lambda x^2) dx| * sqrt(lambda)`.
pub const FRESNEL_BOUND: f64 = 2.763_953_195_770_064_6;

/// CT of `exp(2 pi i xi0 x + pi i lambda0 x^2)` with window
/// `exp(-pi alpha x^2)` at `(t, xi, lambda)`.
pub fn analytic_ct_linear_chirp(xi0: f64, lambda0: f64, alpha_w: f64, t: f64, xi: f64, lambda: f64) -> Complex64 {
    let z = Complex64::new(alpha_w, lambda - lambda0);
    let d = xi - xi0 - lambda0 * t;
    let carrier = Complex64::cis(2.0 * PI * xi0 * t + PI * lambda0 * t * t);
    carrier / z.sqrt() * (-PI * d * d / z).exp()
}

/// Joint frequency/chirp transform of the window,
/// `int g(x) exp(-2 pi i xi x - pi i lambda x^2) dx`, for `n <= 2`.
pub fn g_check(family: &WindowFamily, xi: f64, lambda: f64) -> Result<Complex64> {
    let z = Complex64::new(family.alpha_w, lambda);
    let g0 = (-PI * xi * xi / z).exp() / z.sqrt();
    match family.n {
        0 => Ok(g0),
        1 => Ok(Complex64::new(0.0, -xi) / z * g0),
        2 => Ok(g0 * (1.0 / (2.0 * PI * z) - xi * xi / (z * z))),
        n => Err(Error::UnsupportedWindow(format!("closed form available for n <= 2, got n = {n}"))),
    }
}

/// Fresnel integrals `(C(x), S(x))` with the `pi t^2 / 2` normalization.
pub fn fresnel(x: f64) -> (f64, f64) {
    const EPS: f64 = 1e-16;
    const XMIN: f64 = 1.5;
    let ax = x.abs();
    let (c, s) = if ax < 1e-150 {
        (ax, 0.0)
    } else if ax < XMIN {
        // Power series; C and S terms alternate.
        let fact = PI / 2.0 * ax * ax;
        let (mut sumc, mut sums, mut sum) = (ax, 0.0, 0.0);
        let mut sign = 1.0;
        let mut term = ax;
        let mut odd = true;
        let mut n = 3.0;
        for k in 1..=100 {
            term *= fact / k as f64;
            sum += sign * term / n;
            let test = sum.abs() * EPS;
            if odd {
                sign = -sign;
                sums = sum;
                sum = sumc;
            } else {
                sumc = sum;
                sum = sums;
            }
            if term < test {
                break;
            }
            odd = !odd;
            n += 2.0;
        }
        (sumc, sums)
    } else {
        // Lentz continued fraction for erfc of a complex argument.
        let pix2 = PI * ax * ax;
        let mut b = Complex64::new(1.0, -pix2);
        let mut cc = Complex64::new(1.0 / 1e-300, 0.0);
        let mut d = Complex64::new(1.0, 0.0) / b;
        let mut h = d;
        let mut n = -1.0;
        for _ in 2..=100 {
            n += 2.0;
            let a = -n * (n + 1.0);
            b += Complex64::new(4.0, 0.0);
            d = Complex64::new(1.0, 0.0) / (a * d + b);
            cc = b + a / cc;
            let del = cc * d;
            h *= del;
            if (del.re - 1.0).abs() + del.im.abs() < EPS {
                break;
            }
        }
        h *= Complex64::new(ax, -ax);
        let cs = Complex64::new(0.5, 0.5) * (Complex64::new(1.0, 0.0) - Complex64::cis(0.5 * pix2) * h);
        (cs.re, cs.im)
    };
    if x < 0.0 {
        (-c, -s)
    } else {
        (c, s)
    }
}

fn fresnel_ext(x: f64) -> (f64, f64) {
    if x == f64::INFINITY {
        (0.5, 0.5)
    } else if x == f64::NEG_INFINITY {
        (-0.5, -0.5)
    } else {
        fresnel(x)
    }
}

/// `int_a^b exp(-pi i lambda x^2) dx` for `lambda != 0`; infinite limits allowed.
pub fn fresnel_integral(a: f64, b: f64, lambda: f64) -> Complex64 {
    if lambda == 0.0 {
        return Complex64::new(b - a, 0.0);
    }
    let s = (2.0 * lambda.abs()).sqrt();
    let (ca, sa) = fresnel_ext(a * s);
    let (cb, sb) = fresnel_ext(b * s);
    let v = Complex64::new(cb - ca, -(sb - sa)) / s;
    if lambda < 0.0 {
        v.conj()
    } else {
        v
    }
}

/// Adaptive Simpson quadrature of a complex integrand on `[a, b]`.
pub fn adaptive_simpson<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64) -> Complex64 {
    // Start from a uniform partition so narrow oscillations are not missed.
    let pieces = 64;
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            let (x0, x1) = (a + i as f64 * h, a + (i + 1) as f64 * h);
            let m = 0.5 * (x0 + x1);
            let (f0, fm, f1) = (f(x0), f(m), f(x1));
            let whole = (f0 + 4.0 * fm + f1) * ((x1 - x0) / 6.0);
            simpson_rec(f, x0, x1, f0, fm, f1, whole, tol / pieces as f64, 50)
        })
        .sum()
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
) -> Complex64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (fa + 4.0 * flm + fm) * ((m - a) / 6.0);
    let right = (fm + 4.0 * frm + fb) * ((b - m) / 6.0);
    let delta = left + right - whole;
    if depth == 0 || delta.norm() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}

/// Half width `L` beyond which `|x|^n exp(-pi alpha x^2)` stays below `tail`.
pub fn gaussian_support(n: u32, alpha_w: f64, tail: f64) -> f64 {
    let fam = WindowFamily { kind: crate::window::WindowKind::GaussianPower, n, alpha_w };
    let mut l = fam.peak_location().max(1.0 / alpha_w.sqrt());
    while fam.eval(l).abs() >= tail {
        l *= 1.1;
    }
    l
}

/// Chirp transform `int_a^b f(x) exp(-pi i lambda x^2) dx` by composite
/// Simpson on a grid fine enough to resolve the chirp over `[a, b]`.
pub fn chirp_transform_1d<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, lambda: f64) -> Complex64 {
    let reach = a.abs().max(b.abs());
    // Local frequency of the chirp is |lambda| |x|; keep several nodes per cycle.
    let h_osc = 1.0 / (8.0 * lambda.abs() * reach).max(1e-300);
    let n_osc = ((b - a) / h_osc).ceil() as usize;
    let mut n = n_osc.max(4000);
    if n % 2 == 1 {
        n += 1;
    }
    let h = (b - a) / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..=n {
        let x = a + i as f64 * h;
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += f(x) * Complex64::cis(-PI * lambda * x * x) * w;
    }
    acc * (h / 3.0)
}

/// `|T f_alpha(lambda)|` for `f_alpha(x) = alpha^{1/p} exp(-pi alpha^2 x^2 / p)`.
pub fn gaussian_family_chirp_magnitude(alpha: f64, p: f64, lambda: f64) -> f64 {
    alpha.powf(1.0 / p) / (alpha.powi(4) / (p * p) + lambda * lambda).powf(0.25)
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Running maximum from the right: `env[i] = max(y[i..])`.
pub fn upper_envelope(ys: &[f64]) -> Vec<f64> {
    let mut env = ys.to_vec();
    for i in (0..env.len().saturating_sub(1)).rev() {
        env[i] = env[i].max(env[i + 1]);
    }
    env
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresnel_reference_values() {
        // Abramowitz & Stegun table 7.7.
        let cases = [
            (0.5, 0.492_344_225_871_446_5, 0.064_732_432_859_999_3),
            (1.0, 0.779_893_400_376_822_8, 0.438_259_147_390_354_8),
            (2.0, 0.488_253_406_075_340_8, 0.343_415_678_363_698_2),
            (5.0, 0.563_631_188_704_012_4, 0.499_191_381_917_116_3),
        ];
        for (x, c, s) in cases {
            let (fc, fs) = fresnel(x);
            assert!((fc - c).abs() < 1e-12, "C({x}) = {fc}");
            assert!((fs - s).abs() < 1e-12, "S({x}) = {fs}");
            let (nc, ns) = fresnel(-x);
            assert_eq!((nc, ns), (-fc, -fs));
        }
    }

    #[test]
    fn fresnel_whole_line() {
        for &l in &[0.5, 3.0, 1e3] {
            let v = fresnel_integral(f64::NEG_INFINITY, f64::INFINITY, l);
            assert!((v.norm() - 1.0 / l.sqrt()).abs() < 1e-14);
            assert!((v.arg() + PI / 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fresnel_matches_quadrature() {
        let f = |x: f64| Complex64::cis(-PI * 2.5 * x * x);
        let q = adaptive_simpson(&f, -0.7, 1.9, 1e-12);
        let v = fresnel_integral(-0.7, 1.9, 2.5);
        assert!((q - v).norm() < 1e-10);
    }

    #[test]
    fn g_check_at_origin() {
        assert!((g_check(&WindowFamily::g(0), 0.0, 0.0).unwrap() - 1.0).norm() < 1e-15);
        let fam = WindowFamily::gaussian_power(0, 4.0).unwrap();
        assert!((g_check(&fam, 0.0, 0.0).unwrap() - 0.5).norm() < 1e-15);
        assert!(matches!(g_check(&WindowFamily::g(3), 0.0, 0.0), Err(Error::UnsupportedWindow(_))));
    }

    #[test]
    fn linear_chirp_peak() {
        let v = analytic_ct_linear_chirp(2.0, 3.0, 1.0, 1.5, 2.0 + 4.5, 3.0);
        assert!((v.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn slope_of_power_law() {
        let xs: Vec<f64> = (1..20).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(-0.7)).collect();
        assert!((loglog_slope(&xs, &ys) + 0.7).abs() < 1e-12);
    }
}
