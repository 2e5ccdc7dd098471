use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;
use std::path::Path;
use thiserror::Error;

use crate::curve::MarkedCurve;
use crate::numerics::Numerics;
use crate::polynomial::{ComplexPoly, C};

/// A run configuration. Only `dimension` and `polynomial` are required.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub dimension: usize,
    pub polynomial: PolySpec,
    #[serde(default)]
    pub initial_curve: CurveSpec,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub slag: SlagSpec,
    #[serde(default)]
    pub crosscheck: CrosscheckSpec,
    #[serde(default)]
    pub localmodel: LocalModelSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum PolySpec {
    Coeffs { coeffs: Vec<C> },
    Roots { roots: Vec<C>, #[serde(default = "one")] leading: C },
}

fn one() -> C {
    C::new(1.0, 0.0)
}

fn second() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum CurveSpec {
    Segment {
        #[serde(default)]
        from: usize,
        #[serde(default = "second")]
        to: usize,
    },
    Arc {
        #[serde(default)]
        from: usize,
        #[serde(default = "second")]
        to: usize,
        bulge: f64,
    },
    Sine {
        #[serde(default)]
        from: usize,
        #[serde(default = "second")]
        to: usize,
        amplitude: f64,
    },
    Points {
        data: Vec<C>,
        #[serde(default)]
        from: Option<usize>,
        #[serde(default)]
        to: Option<usize>,
    },
}

impl Default for CurveSpec {
    fn default() -> Self {
        CurveSpec::Segment { from: 0, to: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    /// Write a snapshot every this many accepted steps; 0 disables them.
    pub snapshot_every: usize,
    /// Draw constant-phase connectors between roots in snapshots.
    pub reference_connectors: bool,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec { snapshot_every: 0, reference_connectors: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SlagSpec {
    pub root: usize,
    pub target: usize,
    pub phi: f64,
    pub branch: i64,
    pub window: [f64; 2],
    /// Defaults to four times the domain diameter.
    pub max_length: Option<f64>,
    /// Number of phase cells in the atlas.
    pub atlas_grid: usize,
}

impl Default for SlagSpec {
    fn default() -> Self {
        SlagSpec {
            root: 0,
            target: 1,
            phi: 0.0,
            branch: 0,
            window: [-FRAC_PI_2, FRAC_PI_2],
            max_length: None,
            atlas_grid: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CrosscheckSpec {
    pub samples: usize,
    pub dimensions: Vec<usize>,
    pub points: usize,
    /// Samples closer than this to a root are redrawn.
    pub clearance: f64,
}

impl Default for CrosscheckSpec {
    fn default() -> Self {
        CrosscheckSpec { samples: 100, dimensions: vec![2, 3, 4, 6], points: 200, clearance: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LocalModelSpec {
    pub c: Vec<f64>,
    pub samples: usize,
}

impl Default for LocalModelSpec {
    fn default() -> Self {
        LocalModelSpec { c: vec![0.1, 1.0, 10.0], samples: 400 }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: cannot read: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}:{line}:{column}: {message}")]
    Syntax { path: String, line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

impl Config {
    pub fn from_file(path: &Path) -> Result<Config, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Read { path: path.display().to_string(), source })?;
        Config::from_str_named(&text, &path.display().to_string())
    }

    pub fn from_str_named(text: &str, name: &str) -> Result<Config, ConfigError> {
        let cfg: Config = serde_json::from_str(text).map_err(|e| ConfigError::Syntax {
            path: name.to_string(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        cfg.validate().map_err(|message| ConfigError::Invalid { path: name.to_string(), message })?;
        Ok(cfg)
    }

    pub fn from_value(value: serde_json::Value, name: &str) -> Result<Config, ConfigError> {
        Config::from_str_named(&value.to_string(), name)
    }

    fn validate(&self) -> Result<(), String> {
        if self.dimension < 2 {
            return Err(format!("dimension must be at least 2, got {}", self.dimension));
        }
        let p = self.poly().map_err(|e| format!("polynomial: {e}"))?;
        let check = |r: usize, what: &str| {
            if r >= p.degree() {
                Err(format!("{what}: root index {r} out of range (degree {})", p.degree()))
            } else {
                Ok(())
            }
        };
        match &self.initial_curve {
            CurveSpec::Segment { from, to } | CurveSpec::Arc { from, to, .. } | CurveSpec::Sine { from, to, .. } => {
                check(*from, "initial_curve.from")?;
                check(*to, "initial_curve.to")?;
                if from == to {
                    return Err("initial_curve: from and to must differ".into());
                }
            }
            CurveSpec::Points { data, from, to } => {
                if data.len() < 2 {
                    return Err("initial_curve.data needs at least two points".into());
                }
                for r in from.iter().chain(to.iter()) {
                    check(*r, "initial_curve")?;
                }
            }
        }
        check(self.slag.root, "slag.root")?;
        check(self.slag.target, "slag.target")?;
        Ok(())
    }

    pub fn poly(&self) -> Result<ComplexPoly, crate::error::PolyError> {
        match &self.polynomial {
            PolySpec::Coeffs { coeffs } => ComplexPoly::from_coeffs(coeffs.clone(), &self.numerics),
            PolySpec::Roots { roots, leading } => ComplexPoly::from_roots(roots, *leading, &self.numerics),
        }
    }

    pub fn curve(&self, p: &ComplexPoly) -> Result<MarkedCurve, crate::error::CurveError> {
        let count = self.numerics.n_points;
        match &self.initial_curve {
            CurveSpec::Segment { from, to } => MarkedCurve::segment(p, *from, *to, count),
            CurveSpec::Arc { from, to, bulge } => MarkedCurve::arc(p, *from, *to, *bulge, count),
            CurveSpec::Sine { from, to, amplitude } => MarkedCurve::sine_bump(p, *from, *to, *amplitude, count),
            CurveSpec::Points { data, from, to } => MarkedCurve::pinned(data.clone(), p, *from, *to),
        }
    }
}
