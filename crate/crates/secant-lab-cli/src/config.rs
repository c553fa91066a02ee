//! JSON experiment configuration: strictly validated (unknown keys are
//! rejected), merged with command-line flags, and echoed fully resolved
//! into every output header.

use secant_lab::sequences::PointSet1D;
use secant_lab::windows::{GaussianWindow, SecantWindow, Window};
use secant_lab::Complex64;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Window selection. The inline flag form is `secant:A,B` or
/// `gaussian:ALPHA,SIGMA` with real parameters; complex secant exponents
/// need the JSON form with `a_im`/`b_im`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case", tag = "kind")]
pub enum WindowSpec {
    /// g(x) = 1/(e^{ax} + e^{−bx}), a = a_re + i·a_im, b likewise.
    Secant {
        a_re: f64,
        #[serde(default)]
        a_im: f64,
        b_re: f64,
        #[serde(default)]
        b_im: f64,
    },
    /// g(x) = e^{−(α + iσ)x²}.
    Gaussian {
        alpha: f64,
        #[serde(default)]
        sigma: f64,
    },
}

impl Default for WindowSpec {
    fn default() -> Self {
        WindowSpec::Secant { a_re: 1.0, a_im: 0.0, b_re: 1.0, b_im: 0.0 }
    }
}

impl WindowSpec {
    /// Materializes the window, mapping invalid parameters to config
    /// errors.
    pub fn to_window(&self) -> Result<Window, CliError> {
        match *self {
            WindowSpec::Secant { a_re, a_im, b_re, b_im } => {
                let w = SecantWindow::new(
                    Complex64::new(a_re, a_im),
                    Complex64::new(b_re, b_im),
                )
                .map_err(|e| CliError::Config(format!("window: {e}")))?;
                Ok(Window::Secant(w))
            }
            WindowSpec::Gaussian { alpha, sigma } => {
                let w = GaussianWindow::new(alpha, sigma)
                    .map_err(|e| CliError::Config(format!("window: {e}")))?;
                Ok(Window::Gaussian(w))
            }
        }
    }

    /// Parses the inline `--window` flag form.
    pub fn parse_flag(s: &str) -> Result<WindowSpec, CliError> {
        let err = || {
            CliError::Config(format!(
                "window spec `{s}` is not `secant:A,B` or `gaussian:ALPHA,SIGMA`"
            ))
        };
        let (kind, rest) = s.split_once(':').ok_or_else(err)?;
        let nums: Vec<f64> =
            rest.split(',').map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| err())?;
        match (kind, nums.as_slice()) {
            ("secant", [a, b]) => {
                Ok(WindowSpec::Secant { a_re: *a, a_im: 0.0, b_re: *b, b_im: 0.0 })
            }
            ("gaussian", [alpha, sigma]) => {
                Ok(WindowSpec::Gaussian { alpha: *alpha, sigma: *sigma })
            }
            _ => Err(err()),
        }
    }
}

/// Point-set selection. Lattice-family sets are materialized at whatever
/// window radius the subcommand needs; explicit sets carry their own
/// extent.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case", tag = "kind")]
pub enum PointSetSpec {
    /// ρZ + shift.
    Lattice {
        rho: f64,
        #[serde(default)]
        shift: f64,
    },
    /// ρZ with seeded per-point jitter.
    Jittered { rho: f64, jitter: f64 },
    /// Period-p repetition of the offset list.
    Periodic { period: f64, offsets: Vec<f64> },
    /// A finite list of points.
    Explicit { points: Vec<f64> },
}

impl Default for PointSetSpec {
    fn default() -> Self {
        PointSetSpec::Lattice { rho: 1.0, shift: 0.0 }
    }
}

impl PointSetSpec {
    /// Materializes the set over (at least) the given window radius,
    /// mapping invalid parameters to config errors.
    pub fn materialize(&self, radius: f64, seed: u64) -> Result<PointSet1D, CliError> {
        let built = match self {
            PointSetSpec::Lattice { rho, shift } => {
                PointSet1D::shifted_lattice(*rho, *shift, radius)
            }
            PointSetSpec::Jittered { rho, jitter } => {
                PointSet1D::jittered(*rho, *jitter, seed, radius)
            }
            PointSetSpec::Periodic { period, offsets } => {
                PointSet1D::periodic(*period, offsets.clone(), radius)
            }
            PointSetSpec::Explicit { points } => {
                let extent = points.iter().fold(1.0_f64, |m, p| m.max(p.abs()));
                PointSet1D::explicit(points.clone(), extent)
            }
        };
        built.map_err(|e| CliError::Config(format!("pointset: {e}")))
    }
}

/// The verdict/assertion thresholds, loaded from the versioned defaults
/// file and optionally overridden per run.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    /// Defaults-file schema version.
    pub version: u32,
    /// Ladder non-decay ratio above which the sampling route says frame.
    pub ladder_ratio: f64,
    /// Lower-bound decay factor above which the direct route says no frame.
    pub decay_factor: f64,
    /// Two-sided comparability band for asymptotic ratio sweeps.
    pub ratio_band_lo: f64,
    pub ratio_band_hi: f64,
    /// Relative tolerance for closed-form-versus-quadrature checks.
    pub monomial_rel_tol: f64,
}

impl Thresholds {
    /// The built-in versioned defaults.
    pub fn defaults() -> Thresholds {
        serde_json::from_str(include_str!("../defaults.json"))
            .expect("defaults.json matches the Thresholds schema")
    }

    /// Applies the per-run overrides.
    pub fn apply(mut self, o: &ThresholdOverrides) -> Thresholds {
        if let Some(v) = o.ladder_ratio {
            self.ladder_ratio = v;
        }
        if let Some(v) = o.decay_factor {
            self.decay_factor = v;
        }
        if let Some(v) = o.ratio_band_lo {
            self.ratio_band_lo = v;
        }
        if let Some(v) = o.ratio_band_hi {
            self.ratio_band_hi = v;
        }
        if let Some(v) = o.monomial_rel_tol {
            self.monomial_rel_tol = v;
        }
        self
    }
}

/// Per-run threshold overrides; presence is logged into output headers.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct ThresholdOverrides {
    pub ladder_ratio: Option<f64>,
    pub decay_factor: Option<f64>,
    pub ratio_band_lo: Option<f64>,
    pub ratio_band_hi: Option<f64>,
    pub monomial_rel_tol: Option<f64>,
}

/// The experiment config file. Every field is optional; command-line
/// flags take precedence over it.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub window: Option<WindowSpec>,
    pub pointset: Option<PointSetSpec>,
    pub seed: Option<u64>,
    pub output: Option<String>,
    pub thresholds: Option<ThresholdOverrides>,
}

/// The fully resolved run parameters echoed into every output header.
/// The artifact destination is deliberately not part of it: where an
/// artifact lands does not define the experiment, and echoing it would
/// break byte-identity between runs writing to different paths.
#[derive(Debug, Clone, Serialize)]
pub struct Resolved {
    pub subcommand: &'static str,
    pub window: WindowSpec,
    pub pointset: PointSetSpec,
    /// The subcommand's own parameters after flag/default resolution.
    pub params: serde_json::Value,
    pub seed: u64,
    pub thresholds: Thresholds,
    /// Present only when the run overrode defaults (logged per policy).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold_overrides: Option<ThresholdOverrides>,
}

impl Resolved {
    /// The `#`-prefixed header lines for CSV artifacts: tool line, then
    /// the resolved config as one JSON line, then an explicit note when
    /// thresholds were overridden.
    pub fn csv_header(&self) -> String {
        let mut s = format!(
            "# secant-lab {} v{}\n# config: {}\n",
            self.subcommand,
            env!("CARGO_PKG_VERSION"),
            serde_json::to_string(self).expect("resolved config serializes"),
        );
        if let Some(o) = &self.threshold_overrides {
            s.push_str(&format!(
                "# thresholds-overridden: {}\n",
                serde_json::to_string(o).expect("overrides serialize")
            ));
        }
        s
    }
}
