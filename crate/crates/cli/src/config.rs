//! TOML run configuration. Every key is optional; see `RunConfig::default`.

use std::path::Path;

use serde::Deserialize;

use sct_core::reassign::{RefineParams, SctConfig, Threshold};
use sct_core::reconstruct::MixingModel;
use sct_core::ridge::RidgeParams;
use sct_core::transform::{CtEngine, CtOptions, PhaseConvention};
use sct_core::{Result as CoreResult, TfcGrid, WindowBank, WindowFamily};

use crate::error::{usage, CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// Phase referenced to the first window sample.
    #[default]
    LeftEdge,
    Centered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    #[default]
    Folded,
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mixing {
    #[default]
    Truncated,
    Analytic,
}

/// `"auto"` (tail below 1e-8 of the peak) or a fixed number of samples.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum HalfLen {
    Fixed(usize),
    Policy(String),
}

impl Default for HalfLen {
    fn default() -> Self {
        HalfLen::Policy("auto".into())
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WindowConfig {
    pub n: u32,
    pub alpha_w: f64,
    pub half_len: HalfLen,
}

impl Default for WindowConfig {
    fn default() -> Self {
        Self { n: 0, alpha_w: 1.0, half_len: HalfLen::default() }
    }
}

impl WindowConfig {
    pub fn family(&self) -> CoreResult<WindowFamily> {
        WindowFamily::gaussian_power(self.n, self.alpha_w)
    }

    pub fn bank(&self, dt_s: f64) -> Result<WindowBank> {
        let fam = self.family()?;
        Ok(match &self.half_len {
            HalfLen::Fixed(k) => WindowBank::new(fam, *k, dt_s)?,
            HalfLen::Policy(_) => WindowBank::with_default_len(fam, dt_s)?,
        })
    }
}

/// Exactly one of the two keys; the default is `relative = 1e-4`.
#[derive(Debug, Clone, PartialEq, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct ThresholdConfig {
    /// Fraction of `max |T|`.
    pub relative: Option<f64>,
    pub absolute: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RidgeConfig {
    pub k: usize,
    pub quantile: f64,
    pub sigma_pct: f64,
    pub restarts: usize,
    pub seed: u64,
    pub max_points: usize,
    /// Frames losing more than this fraction of the window mass past the
    /// record ends are left out of ridge selection.
    pub edge_loss: f64,
    /// Fixed-point refinement against the signal.
    pub refine: bool,
}

impl Default for RidgeConfig {
    fn default() -> Self {
        let p = RidgeParams::default();
        Self {
            k: 2,
            quantile: p.quantile,
            sigma_pct: p.sigma_pct,
            restarts: p.restarts,
            seed: p.seed,
            max_points: p.max_points,
            edge_loss: 0.01,
            refine: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct ReconstructConfig {
    pub window: WindowConfig,
    pub mixing: Mixing,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub convention: Convention,
    pub engine: Engine,
    pub alpha_sq: f64,
    /// Squeeze from negative-frequency source bins as well.
    pub full_circle: bool,
    pub window: WindowConfig,
    pub threshold: ThresholdConfig,
    pub ridge: RidgeConfig,
    pub reconstruct: ReconstructConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            convention: Convention::default(),
            engine: Engine::default(),
            alpha_sq: 0.01,
            full_circle: true,
            window: WindowConfig::default(),
            threshold: ThresholdConfig::default(),
            ridge: RidgeConfig::default(),
            reconstruct: ReconstructConfig::default(),
        }
    }
}

fn check(ok: bool, msg: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        usage(format!("config: {msg}"))
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let cfg = match path {
            None => Self::default(),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
                toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {}", p.display(), e.message())))?
            }
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check(self.alpha_sq > 0.0 && self.alpha_sq <= 0.5, "alpha_sq must be in (0, 0.5]")?;
        for (name, w) in [("window", &self.window), ("reconstruct.window", &self.reconstruct.window)] {
            if let Err(e) = w.family() {
                return usage(format!("config: {name}: {e}"));
            }
            match &w.half_len {
                HalfLen::Fixed(k) => check(*k >= 1, "half_len must be at least 1")?,
                HalfLen::Policy(p) => check(p == "auto", "half_len must be \"auto\" or a positive integer")?,
            }
        }
        self.threshold()?;
        let r = &self.ridge;
        check(r.k >= 1, "ridge.k must be at least 1")?;
        check(r.quantile > 0.0 && r.quantile < 1.0, "ridge.quantile must be in (0, 1)")?;
        check(r.sigma_pct > 0.0 && r.sigma_pct <= 100.0, "ridge.sigma_pct must be in (0, 100]")?;
        check(r.restarts >= 1, "ridge.restarts must be at least 1")?;
        check(r.max_points >= r.k, "ridge.max_points must be at least k")?;
        check((0.0..1.0).contains(&r.edge_loss), "ridge.edge_loss must be in [0, 1)")?;
        Ok(())
    }

    pub fn threshold(&self) -> Result<Threshold> {
        let t = match (self.threshold.relative, self.threshold.absolute) {
            (None, None) => Threshold::default(),
            (Some(r), None) => Threshold::Relative(r),
            (None, Some(a)) => Threshold::Absolute(a),
            (Some(_), Some(_)) => return usage("config: give threshold.relative or threshold.absolute, not both"),
        };
        let v = match t {
            Threshold::Relative(v) | Threshold::Absolute(v) => v,
        };
        check(v > 0.0 && v.is_finite(), "threshold must be positive")?;
        Ok(t)
    }

    pub fn ct_options(&self) -> CtOptions {
        CtOptions {
            convention: match self.convention {
                Convention::LeftEdge => PhaseConvention::LeftEdge,
                Convention::Centered => PhaseConvention::Centered,
            },
            engine: match self.engine {
                Engine::Folded => CtEngine::Folded,
                Engine::Direct => CtEngine::Direct,
            },
        }
    }

    pub fn sct_config(&self) -> Result<SctConfig> {
        Ok(SctConfig { ct: self.ct_options(), threshold: self.threshold()?, full_circle: self.full_circle })
    }

    pub fn grid(&self, n_time: usize, fs: f64) -> Result<TfcGrid> {
        Ok(TfcGrid::from_resolution(self.alpha_sq, n_time, fs)?)
    }

    pub fn ridge_params(&self, edge_frames: usize) -> RidgeParams {
        let r = &self.ridge;
        RidgeParams {
            quantile: r.quantile,
            sigma_pct: r.sigma_pct,
            restarts: r.restarts,
            seed: r.seed,
            max_points: r.max_points,
            edge_frames,
            ..RidgeParams::default()
        }
    }

    pub fn refine_params(&self, edge_frames: usize) -> Option<RefineParams> {
        self.ridge.refine.then(|| RefineParams { edge_frames, ..RefineParams::default() })
    }

    pub fn mixing(&self) -> MixingModel {
        match self.reconstruct.mixing {
            Mixing::Truncated => MixingModel::Truncated,
            Mixing::Analytic => MixingModel::Analytic,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let c: RunConfig = toml::from_str("").unwrap();
        assert_eq!(c, RunConfig::default());
        c.validate().unwrap();
        assert_eq!(c.ct_options().convention, PhaseConvention::LeftEdge);
    }

    #[test]
    fn full_example_parses() {
        let c: RunConfig = toml::from_str(
            r#"
            convention = "centered"
            engine = "direct"
            alpha_sq = 0.02
            full_circle = false
            [window]
            n = 2
            alpha_w = 0.5
            half_len = 120
            [threshold]
            absolute = 1e-3
            [ridge]
            k = 3
            seed = 9
            refine = false
            [reconstruct]
            mixing = "analytic"
            [reconstruct.window]
            n = 0
            "#,
        )
        .unwrap();
        c.validate().unwrap();
        assert_eq!(c.ct_options(), CtOptions { convention: PhaseConvention::Centered, engine: CtEngine::Direct });
        assert_eq!(c.window.half_len, HalfLen::Fixed(120));
        assert_eq!(c.threshold().unwrap(), Threshold::Absolute(1e-3));
        assert!(c.refine_params(0).is_none());
        assert_eq!(c.mixing(), MixingModel::Analytic);
    }

    #[test]
    fn rejects_bad_values() {
        for text in [
            "alpha_sq = 0.0",
            "alpha_sq = 0.7",
            "convention = \"sideways\"",
            "bogus = 1",
            "[window]\nalpha_w = -1.0",
            "[window]\nhalf_len = \"long\"",
            "[threshold]\nrelative = 1e-4\nabsolute = 1.0",
            "[threshold]\nrelative = 0.0",
            "[ridge]\nquantile = 1.0",
            "[ridge]\nk = 0",
            "[ridge]\nedge_loss = 1.5",
        ] {
            let parsed: std::result::Result<RunConfig, _> = toml::from_str(text);
            let bad = match parsed {
                Err(_) => true,
                Ok(c) => c.validate().is_err(),
            };
            assert!(bad, "accepted: {text}");
        }
    }
}
