//! JSON run configuration.
//!
//! Complex numbers are `[re, im]` pairs. Coordinates named in `sweep.axes`
//! are 1-based, matching the region labels printed by `eval`.

use std::fmt;
use std::path::{Path, PathBuf};

use ellipsoid_green::{Ellipsoid, Point};
use num_complex::Complex64;
use serde::Deserialize;

#[derive(Debug)]
pub struct ConfigError {
    pub location: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

fn field(location: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError { location: format!("field `{}`", location.into()), message: message.into() }
}

pub type RawPoint = Vec<[f64; 2]>;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub ellipsoid: EllipsoidSpec,
    #[serde(default)]
    pub points: Vec<RawPoint>,
    /// JSON file holding an array of points, resolved against the config's directory.
    pub points_file: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    pub tol: Option<f64>,
    pub sweep: Option<SweepSpec>,
    pub verify: Option<VerifySpec>,
    pub certify: Option<CertifySpec>,
    pub gap: Option<GapSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllipsoidSpec {
    pub p: Vec<f64>,
    pub k: usize,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        match self.steps {
            0 => Vec::new(),
            1 => vec![self.start],
            n => (0..n).map(|i| self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64).collect(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// The two coordinates that vary, 1-based.
    pub axes: [usize; 2],
    pub x: Axis,
    pub y: Axis,
    /// Values of the remaining coordinates; zero when absent.
    pub base: Option<RawPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Ball,
    PolydiscLimit,
    GreenCertificates,
    MobiusCertificates,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Ball => "ball",
            Suite::PolydiscLimit => "polydisc-limit",
            Suite::GreenCertificates => "green-certificates",
            Suite::MobiusCertificates => "mobius-certificates",
        }
    }
}

fn default_samples() -> usize {
    1000
}

fn default_slack_floor() -> f64 {
    0.01
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySpec {
    pub suite: Suite,
    /// Sampled points when the config lists none.
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_slack_floor")]
    pub slack_floor: f64,
    /// Exponent ladder for `polydisc-limit`.
    pub ladder: Option<Vec<f64>>,
    pub fd_step: Option<f64>,
    pub sup_samples: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertifyKind {
    Green,
    Mobius,
    #[default]
    Both,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifySpec {
    #[serde(default)]
    pub kind: CertifyKind,
    pub prop_d: Option<PropDSpec>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropDSpec {
    pub p1: f64,
    pub p2: f64,
    pub z0: f64,
    pub z1: Option<f64>,
}

fn default_trials() -> usize {
    200
}

fn default_budget() -> usize {
    100_000
}

fn default_profile_samples() -> usize {
    200
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapSpec {
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[serde(default = "default_profile_samples")]
    pub profile_samples: usize,
    pub family_csv: Option<PathBuf>,
    pub profile_csv: Option<PathBuf>,
}

impl Default for GapSpec {
    fn default() -> Self {
        Self {
            trials: default_trials(),
            budget: default_budget(),
            profile_samples: default_profile_samples(),
            family_csv: None,
            profile_csv: None,
        }
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, origin: &Path) -> Result<T, ConfigError> {
    serde_json::from_str(text).map_err(|e| ConfigError {
        location: format!("{} line {} column {}", origin.display(), e.line(), e.column()),
        message: e.to_string(),
    })
}

fn read(path: &Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path)
        .map_err(|e| ConfigError { location: path.display().to_string(), message: e.to_string() })
}

/// A parsed and validated configuration.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub raw: RunConfig,
    pub ellipsoid: Ellipsoid,
    pub points: Vec<Point>,
    pub dir: PathBuf,
}

impl Loaded {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = read(path)?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_str(&text, path, dir)
    }

    pub fn from_str(text: &str, origin: &Path, dir: PathBuf) -> Result<Self, ConfigError> {
        let mut raw: RunConfig = parse_json(text, origin)?;
        if let Some(file) = &raw.points_file {
            let file = dir.join(file);
            let extra: Vec<RawPoint> = parse_json(&read(&file)?, &file)?;
            raw.points.extend(extra);
        }
        let ellipsoid = validate_ellipsoid(&raw.ellipsoid)?;
        let n = ellipsoid.dim();
        let points = raw
            .points
            .iter()
            .enumerate()
            .map(|(i, z)| to_point(z, n, &format!("points[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(tol) = raw.tol {
            check_nonneg(tol, "tol")?;
        }
        if let Some(s) = &raw.sweep {
            for (i, &a) in s.axes.iter().enumerate() {
                if !(1..=n).contains(&a) {
                    return Err(field(format!("sweep.axes[{i}]"), format!("coordinate {a} is not in 1..={n}")));
                }
            }
            if s.axes[0] == s.axes[1] {
                return Err(field("sweep.axes", "the two axes must differ"));
            }
            for (name, ax) in [("x", s.x), ("y", s.y)] {
                if !(ax.start.is_finite() && ax.stop.is_finite()) {
                    return Err(field(format!("sweep.{name}"), "bounds must be finite"));
                }
            }
            if let Some(b) = &s.base {
                to_point(b, n, "sweep.base")?;
            }
        }
        if let Some(v) = &raw.verify {
            if !(0.0..1.0).contains(&v.slack_floor) {
                return Err(field("verify.slack_floor", "must lie in [0, 1)"));
            }
            if let Some(l) = &v.ladder {
                if let Some(i) = l.iter().position(|&x| !(x > 0.0 && x.is_finite())) {
                    return Err(field(format!("verify.ladder[{i}]"), "exponents must be positive"));
                }
            }
            if let Some(h) = v.fd_step {
                if !(h > 0.0 && h.is_finite()) {
                    return Err(field("verify.fd_step", "must be positive"));
                }
            }
        }
        if let Some(c) = &raw.certify {
            if let Some(pd) = c.prop_d {
                for (name, v) in [("p1", pd.p1), ("p2", pd.p2), ("z0", pd.z0)] {
                    if !(v > 0.0 && v.is_finite()) {
                        return Err(field(format!("certify.prop_d.{name}"), "must be positive"));
                    }
                }
            }
        }
        Ok(Self { raw, ellipsoid, points, dir })
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        self.dir.join(path)
    }
}

fn check_nonneg(x: f64, name: &str) -> Result<(), ConfigError> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(field(name, format!("{x} must be finite and non-negative")))
    }
}

fn validate_ellipsoid(spec: &EllipsoidSpec) -> Result<Ellipsoid, ConfigError> {
    if spec.p.is_empty() {
        return Err(field("ellipsoid.p", "needs at least one exponent"));
    }
    if let Some(i) = spec.p.iter().position(|&p| !(p > 0.0 && p.is_finite())) {
        return Err(field(format!("ellipsoid.p[{i}]"), format!("{} must be positive and finite", spec.p[i])));
    }
    if !(1..=spec.p.len()).contains(&spec.k) {
        return Err(field("ellipsoid.k", format!("{} is not in 1..={}", spec.k, spec.p.len())));
    }
    Ellipsoid::new(spec.p.clone(), spec.k).map_err(|e| field("ellipsoid", e.to_string()))
}

pub fn to_point(raw: &[[f64; 2]], n: usize, location: &str) -> Result<Point, ConfigError> {
    if raw.len() != n {
        return Err(field(location, format!("expected {n} coordinates, got {}", raw.len())));
    }
    if let Some(j) = raw.iter().position(|c| !(c[0].is_finite() && c[1].is_finite())) {
        return Err(field(format!("{location}[{j}]"), "coordinates must be finite"));
    }
    Ok(Point::new(raw.iter().map(|c| Complex64::new(c[0], c[1])).collect()))
}

pub fn from_point(z: &Point) -> RawPoint {
    z.coords().iter().map(|c| [c.re, c.im]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> Result<Loaded, ConfigError> {
        Loaded::from_str(text, Path::new("test.json"), PathBuf::new())
    }

    #[test]
    fn minimal_config() {
        let c = load(r#"{"ellipsoid": {"p": [1, 1], "k": 2}, "points": [[[0.5, 0], [0.5, 0]]]}"#).unwrap();
        assert_eq!(c.points.len(), 1);
        assert_eq!(c.ellipsoid.k(), 2);
    }

    #[test]
    fn syntax_errors_carry_line_and_column() {
        let e = load("{\n  \"ellipsoid\": {\"p\": [1,], \"k\": 1}\n}").unwrap_err();
        assert!(e.location.contains("line 2"), "{e}");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let e = load(r#"{"ellipsoid": {"p": [1], "k": 1}, "pionts": []}"#).unwrap_err();
        assert!(e.message.contains("pionts"), "{e}");
    }

    #[test]
    fn semantic_errors_name_the_field() {
        let e = load(r#"{"ellipsoid": {"p": [1, -2], "k": 1}}"#).unwrap_err();
        assert_eq!(e.location, "field `ellipsoid.p[1]`");
        let e = load(r#"{"ellipsoid": {"p": [1, 2], "k": 3}}"#).unwrap_err();
        assert_eq!(e.location, "field `ellipsoid.k`");
        let e = load(r#"{"ellipsoid": {"p": [1, 2], "k": 1}, "points": [[[0.1, 0]]]}"#).unwrap_err();
        assert_eq!(e.location, "field `points[0]`");
        let e = load(r#"{"ellipsoid": {"p": [1, 2], "k": 1},
            "sweep": {"axes": [1, 3], "x": {"start": 0, "stop": 1, "steps": 2}, "y": {"start": 0, "stop": 1, "steps": 2}}}"#)
        .unwrap_err();
        assert_eq!(e.location, "field `sweep.axes[1]`");
    }

    #[test]
    fn axis_values() {
        assert!(Axis { start: 0.0, stop: 1.0, steps: 0 }.values().is_empty());
        assert_eq!(Axis { start: 0.3, stop: 1.0, steps: 1 }.values(), vec![0.3]);
        assert_eq!(Axis { start: 0.1, stop: 0.3, steps: 3 }.values().len(), 3);
    }
}
