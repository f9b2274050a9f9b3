//! Flat `key = value` experiment configuration.
//!
//! Lines are `key = value`; `#` starts a comment. Per-kernel overrides use
//! dotted keys (`expected.eta_1_1_1d = 1.99`). Unknown keys are rejected before
//! anything is computed.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{GaussianVariant, Startup};
use crate::weakstar::{parse_h_schedule, parse_scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StudyKind {
    Moments,
    Table1,
    Weakstar,
    Helmholtz1d,
    Helmholtz2d,
    Helmholtz2dSobolev,
    Advect,
    Kdv,
    Bessel,
}

impl StudyKind {
    pub const ALL: [StudyKind; 9] = [
        StudyKind::Moments,
        StudyKind::Table1,
        StudyKind::Weakstar,
        StudyKind::Helmholtz1d,
        StudyKind::Helmholtz2d,
        StudyKind::Helmholtz2dSobolev,
        StudyKind::Advect,
        StudyKind::Kdv,
        StudyKind::Bessel,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StudyKind::Moments => "moments",
            StudyKind::Table1 => "table1",
            StudyKind::Weakstar => "weakstar",
            StudyKind::Helmholtz1d => "helmholtz1d",
            StudyKind::Helmholtz2d => "helmholtz2d",
            StudyKind::Helmholtz2dSobolev => "helmholtz2d-sobolev",
            StudyKind::Advect => "advect",
            StudyKind::Kdv => "kdv",
            StudyKind::Bessel => "bessel",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let norm = s.trim().replace('_', "-");
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == norm)
            .ok_or_else(|| Error::Config(format!("unknown study `{s}`")))
    }

    fn is_rate_study(self) -> bool {
        matches!(
            self,
            StudyKind::Weakstar | StudyKind::Helmholtz1d | StudyKind::Helmholtz2d | StudyKind::Helmholtz2dSobolev
        )
    }
}

/// Which number of a rate study is compared with the expected rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// Least-squares log-log slope over the whole schedule.
    Slope,
    /// `R(H)` at the smallest `H` that still has a successor.
    LastRatio,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// `|value − expected| ≤ tol`.
    TwoSided,
    /// `value ≥ expected − tol`.
    AtLeast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("unknown format `{other}` (csv or json)"))),
        }
    }
}

/// Per-kernel acceptance target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Target {
    pub expected: Option<f64>,
    pub tolerance: f64,
    pub bound: Bound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub id: String,
    pub study: StudyKind,
    pub kernels: Vec<String>,
    pub h: Vec<f64>,
    pub k0: f64,
    pub hbar: f64,
    /// Solution samples (1D/2D pointwise) or evaluation points (bessel).
    pub samples: usize,
    pub alpha: Vec<f64>,
    pub n: usize,
    pub length: f64,
    pub dt: Option<f64>,
    pub t_final: f64,
    pub startup: Startup,
    pub snapshots: Vec<f64>,
    pub sigma: f64,
    pub gaussian: GaussianVariant,
    pub dealias: bool,
    /// Extended horizon over which KdV peak displacement is measured.
    pub peak_horizon: Option<f64>,
    pub check: Check,
    pub tolerance: f64,
    pub bound: Bound,
    pub expected: BTreeMap<String, f64>,
    pub kernel_tolerance: BTreeMap<String, f64>,
    pub kernel_bound: BTreeMap<String, Bound>,
    /// Printed ascending monomial coefficients (table1 study).
    pub coeffs: BTreeMap<String, Vec<f64>>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

const KEYS: &[&str] = &[
    "id", "study", "kernels", "h", "k0", "hbar", "samples", "alpha", "n", "length", "dt", "t", "startup", "snapshots",
    "sigma", "gaussian", "dealias", "peak_horizon", "check", "tolerance", "bound", "format", "out",
];
const FAMILIES: &[&str] = &["expected", "tolerance", "bound", "coeffs"];

/// Splits a config text into an ordered key/value map.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
        let k = k.trim().to_string();
        if map.insert(k.clone(), v.trim().to_string()).is_some() {
            return Err(Error::Config(format!("line {}: duplicate key `{k}`", lineno + 1)));
        }
    }
    Ok(map)
}

fn check_key(key: &str) -> Result<()> {
    if KEYS.contains(&key) {
        return Ok(());
    }
    if let Some((family, kernel)) = key.split_once('.') {
        if FAMILIES.contains(&family) && !kernel.is_empty() {
            return Ok(());
        }
    }
    Err(Error::Config(format!("unknown key `{key}`")))
}

fn list(v: &str) -> Vec<String> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
}

fn scalars(v: &str) -> Result<Vec<f64>> {
    list(v).iter().map(|s| parse_scalar(s)).collect()
}

fn parse_bool(v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::Config(format!("`{v}` is not a boolean"))),
    }
}

fn parse_bound(v: &str) -> Result<Bound> {
    match v {
        "two_sided" => Ok(Bound::TwoSided),
        "at_least" => Ok(Bound::AtLeast),
        _ => Err(Error::Config(format!("bound `{v}` is not two_sided or at_least"))),
    }
}

impl ExperimentConfig {
    /// Defaults for a study kind.
    pub fn defaults(study: StudyKind) -> Self {
        use std::f64::consts::PI;
        let h = match study {
            StudyKind::Helmholtz2dSobolev => parse_h_schedule("2^-2..2^-8"),
            StudyKind::Advect => parse_h_schedule("0.25"),
            StudyKind::Kdv => parse_h_schedule("pi,pi/2,pi/4"),
            _ => parse_h_schedule("2^-2..2^-6"),
        }
        .expect("built-in schedule");
        let (n, length, t_final) = match study {
            StudyKind::Kdv => (512, 16.0 * PI, 0.05),
            _ => (1024, 2.0 * PI, 36.0 * PI),
        };
        let (check, tolerance) = match study {
            StudyKind::Weakstar => (Check::Slope, 0.1),
            s if s.is_rate_study() => (Check::LastRatio, 0.05),
            StudyKind::Bessel => (Check::None, 1e-7),
            StudyKind::Advect => (Check::None, 1e-9),
            _ => (Check::None, 1e-10),
        };
        Self {
            id: study.as_str().to_string(),
            study,
            kernels: Vec::new(),
            h,
            k0: crate::elliptic::DEFAULT_K0,
            hbar: crate::elliptic::DEFAULT_HBAR,
            samples: match study {
                StudyKind::Helmholtz2d => 2400,
                StudyKind::Bessel => 1000,
                _ => 4000,
            },
            alpha: vec![0.25, 0.5, 0.9],
            n,
            length,
            dt: None,
            t_final,
            startup: Startup::DiscreteMode,
            snapshots: Vec::new(),
            sigma: PI / 64.0,
            gaussian: GaussianVariant::AsPrinted,
            dealias: true,
            peak_horizon: None,
            check,
            tolerance,
            bound: Bound::TwoSided,
            expected: BTreeMap::new(),
            kernel_tolerance: BTreeMap::new(),
            kernel_bound: BTreeMap::new(),
            coeffs: BTreeMap::new(),
            format: Format::Csv,
            out: None,
        }
    }

    /// Parses config text, applying `overrides` (`key=value` strings) on top.
    pub fn parse(text: &str, overrides: &[String]) -> Result<Self> {
        let mut map = parse_pairs(text)?;
        for o in overrides {
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("override `{o}` is not key=value")))?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Self::from_pairs(&map)
    }

    pub fn from_file(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text, overrides)
    }

    pub fn from_pairs(map: &BTreeMap<String, String>) -> Result<Self> {
        for k in map.keys() {
            check_key(k)?;
        }
        let study = StudyKind::parse(map.get("study").ok_or_else(|| Error::Config("missing key `study`".into()))?)?;
        let mut c = Self::defaults(study);
        let bad = |k: &str, e: Error| Error::Config(format!("`{k}`: {e}"));
        for (k, v) in map {
            let k = k.as_str();
            match k {
                "study" => {}
                "id" => c.id = v.clone(),
                "kernels" if v == "all" => {
                    c.kernels = crate::catalog::catalog_names().into_iter().map(String::from).collect()
                }
                "kernels" => c.kernels = list(v),
                "h" => c.h = parse_h_schedule(v).map_err(|e| bad(k, e))?,
                "k0" => c.k0 = parse_scalar(v).map_err(|e| bad(k, e))?,
                "hbar" => c.hbar = parse_scalar(v).map_err(|e| bad(k, e))?,
                "samples" => c.samples = v.parse().map_err(|_| Error::Config(format!("`samples`: bad count `{v}`")))?,
                "alpha" => c.alpha = scalars(v).map_err(|e| bad(k, e))?,
                "n" => c.n = v.parse().map_err(|_| Error::Config(format!("`n`: bad count `{v}`")))?,
                "length" => c.length = parse_scalar(v).map_err(|e| bad(k, e))?,
                "dt" => c.dt = Some(parse_scalar(v).map_err(|e| bad(k, e))?),
                "t" => c.t_final = parse_scalar(v).map_err(|e| bad(k, e))?,
                "startup" => {
                    c.startup = match v.as_str() {
                        "discrete_mode" => Startup::DiscreteMode,
                        "exact_translation" => Startup::ExactTranslation,
                        _ => return Err(Error::Config(format!("unknown startup `{v}`"))),
                    }
                }
                "snapshots" => c.snapshots = scalars(v).map_err(|e| bad(k, e))?,
                "sigma" => c.sigma = parse_scalar(v).map_err(|e| bad(k, e))?,
                "gaussian" => {
                    c.gaussian = match v.as_str() {
                        "as_printed" => GaussianVariant::AsPrinted,
                        "normalized" => GaussianVariant::Normalized,
                        _ => return Err(Error::Config(format!("unknown gaussian variant `{v}`"))),
                    }
                }
                "dealias" => c.dealias = parse_bool(v)?,
                "peak_horizon" => c.peak_horizon = Some(parse_scalar(v).map_err(|e| bad(k, e))?),
                "check" => {
                    c.check = match v.as_str() {
                        "slope" => Check::Slope,
                        "last_ratio" => Check::LastRatio,
                        "none" => Check::None,
                        _ => return Err(Error::Config(format!("unknown check `{v}`"))),
                    }
                }
                "tolerance" => c.tolerance = parse_scalar(v).map_err(|e| bad(k, e))?,
                "bound" => c.bound = parse_bound(v)?,
                "format" => c.format = Format::parse(v)?,
                "out" => c.out = Some(PathBuf::from(v)),
                _ => {
                    let (family, kernel) = k.split_once('.').expect("checked above");
                    let kernel = kernel.to_string();
                    match family {
                        "expected" => {
                            c.expected.insert(kernel, parse_scalar(v).map_err(|e| bad(k, e))?);
                        }
                        "tolerance" => {
                            c.kernel_tolerance.insert(kernel, parse_scalar(v).map_err(|e| bad(k, e))?);
                        }
                        "bound" => {
                            c.kernel_bound.insert(kernel, parse_bound(v)?);
                        }
                        _ => {
                            c.coeffs.insert(kernel, scalars(v).map_err(|e| bad(k, e))?);
                        }
                    }
                }
            }
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let needs_kernels = !matches!(self.study, StudyKind::Bessel | StudyKind::Kdv);
        if needs_kernels && self.kernels.is_empty() {
            return Err(Error::Config(format!("study `{}` needs `kernels`", self.study.as_str())));
        }
        if self.study == StudyKind::Kdv && self.kernels.is_empty() {
            return Err(Error::Config("kdv needs `kernels` (catalog names or `gaussian`)".into()));
        }
        if !(self.tolerance >= 0.0) {
            return Err(Error::Config(format!("tolerance {} is negative", self.tolerance)));
        }
        if self.study.is_rate_study() && self.h.len() < 2 {
            return Err(Error::Config("a rate study needs at least two H values".into()));
        }
        if self.study == StudyKind::Helmholtz2dSobolev && self.alpha.is_empty() {
            return Err(Error::Config("`alpha` is empty".into()));
        }
        if !(self.sigma > 0.0) {
            return Err(Error::Config(format!("sigma {} is not positive", self.sigma)));
        }
        for k in self.expected.keys().chain(self.kernel_tolerance.keys()).chain(self.kernel_bound.keys()) {
            if !self.kernels.contains(k) {
                return Err(Error::Config(format!("override for `{k}`, which is not in `kernels`")));
            }
        }
        Ok(())
    }

    /// Acceptance target for `kernel`, falling back to the study-wide values.
    pub fn target(&self, kernel: &str, default_expected: Option<f64>) -> Target {
        Target {
            expected: self.expected.get(kernel).copied().or(default_expected),
            tolerance: self.kernel_tolerance.get(kernel).copied().unwrap_or(self.tolerance),
            bound: self.kernel_bound.get(kernel).copied().unwrap_or(self.bound),
        }
    }
}

impl Target {
    pub fn accepts(&self, value: f64) -> bool {
        match (self.expected, self.bound) {
            (None, _) => value.is_finite(),
            (Some(e), Bound::TwoSided) => (value - e).abs() <= self.tolerance,
            (Some(e), Bound::AtLeast) => value >= e - self.tolerance,
        }
    }
}
