//! Run configuration files.
//!
//! A configuration is a TOML document (or JSON with the same shape, including
//! a `meta.json` written by a previous run, whose `config` key is used). A
//! `builtin = "example1"` key loads a named setup first; any other keys in the
//! file then override it field by field.
//!
//! ```toml
//! mode = "nsfd-optimized"          # standard | nsfd-fixed | nsfd-optimized
//! checkpoints = [0.5, 1.0]
//! sign_convention = "corrected"    # or "default" / "printed"
//!
//! [problem]
//! f1 = "0"                          # coefficient expressions in t, x, u
//! f2 = "1"
//! h = "0"
//! g = "0"                          # with beta, the Caputo term g * D^beta u
//! beta = 0.9                       # optional, in (0, 2)
//! slot = 1                         # stencil slot for D^beta: 1 or 2
//! initial = "sin(3.141592653589793*x)"
//! left = "0"
//! right = "0"
//! exact = "exp(-9.869604401089358*t)*sin(3.141592653589793*x)"
//! dt = 0.001
//! t_final = 0.1
//!
//! [mesh]
//! uniform = { count = 21, lo = 0.0, hi = 1.0 }   # or nodes = [...]
//! star_size = 4
//! weights = { kind = "inverse-distance-power", power = 2.0 }
//!
//! [denominator]
//! first = { family = "exp", params = [1.0, 2.0] }
//! second = { family = "sin", params = { start = 1.0, end = 10.0, step = 1.0 } }
//! alpha = { start = 0.0, end = 1.0, step = 0.1 }
//! score = "exact"                   # or "residual"
//! fixed = { alpha = 0.5, p1 = 1.0, p2 = 1.0 }   # used by nsfd-fixed
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::denoms::{linear_grid, DenominatorSpec, FamilyGrid, PhiFamily};
use crate::expr::{Expr, ParseError};
use crate::fracweights::SignConvention;
use crate::mesh::{MeshError, NodeSet, WeightScheme};
use crate::solver::{Equation, FractionalSlot, FractionalTerm, ProblemSpec, ScoreMode, SolveError, TimeMode};

pub const DEFAULT_STAR_SIZE: usize = 4;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Syntax { path: PathBuf, message: String },
    #[error("unknown builtin {0:?} (expected \"example1\" or \"example2\")")]
    UnknownBuiltin(String),
    #[error("{0} is required")]
    Missing(&'static str),
    #[error("{field}: {message}")]
    Invalid { field: &'static str, message: String },
    #[error("{field}: {source}")]
    Expr {
        field: &'static str,
        source: ParseError,
    },
    #[error(transparent)]
    Solve(#[from] SolveError),
}

fn invalid(field: &'static str, message: impl fmt::Display) -> ConfigError {
    ConfigError::Invalid {
        field,
        message: message.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeName {
    Standard,
    NsfdFixed,
    NsfdOptimized,
}

impl ModeName {
    pub fn as_str(self) -> &'static str {
        match self {
            ModeName::Standard => "standard",
            ModeName::NsfdFixed => "nsfd-fixed",
            ModeName::NsfdOptimized => "nsfd-optimized",
        }
    }
}

impl std::str::FromStr for ModeName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "standard" => Ok(ModeName::Standard),
            "nsfd-fixed" => Ok(ModeName::NsfdFixed),
            "nsfd-optimized" => Ok(ModeName::NsfdOptimized),
            other => Err(format!(
                "unknown mode {other:?} (expected standard, nsfd-fixed or nsfd-optimized)"
            )),
        }
    }
}

/// Either an explicit list or an inclusive `start..=end` range with `step`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridDoc {
    List(Vec<f64>),
    Range { start: f64, end: f64, step: f64 },
}

impl GridDoc {
    fn values(&self, field: &'static str) -> Result<Vec<f64>, ConfigError> {
        match *self {
            GridDoc::List(ref v) => Ok(v.clone()),
            GridDoc::Range { start, end, step } => {
                if !(step.is_finite() && step > 0.0 && start.is_finite() && end.is_finite() && end >= start) {
                    return Err(invalid(field, "range needs finite start <= end and a positive step"));
                }
                Ok(linear_grid(start, end, step))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDoc {
    pub family: PhiFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<GridDoc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedChoice {
    pub alpha: f64,
    pub p1: f64,
    pub p2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniformMesh {
    pub count: usize,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slot: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<String>,
    /// An empty string clears an inherited exact solution.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_final: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniform: Option<UniformMesh>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightScheme>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DenominatorDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first: Option<FamilyDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second: Option<FamilyDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<GridDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub score: Option<ScoreMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed: Option<FixedChoice>,
}

/// The file as written, before defaults and validation.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoints: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign_convention: Option<SignConvention>,
    #[serde(default)]
    pub problem: ProblemDoc,
    #[serde(default)]
    pub mesh: MeshDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub denominator: Option<DenominatorDoc>,
}

macro_rules! overlay {
    ($base:expr, $top:expr; $($f:ident),+) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f.clone(); } )+
    };
}

impl ConfigDoc {
    /// `self` with every key present in `top` replaced by `top`'s value.
    pub fn overlaid(mut self, top: &ConfigDoc) -> ConfigDoc {
        overlay!(self, top; builtin, mode, checkpoints, output_dir, threads, sign_convention);
        overlay!(self.problem, top.problem; f1, f2, g, h, beta, slot, initial, left, right, exact, dt, t_final);
        if top.mesh.nodes.is_some() || top.mesh.uniform.is_some() {
            self.mesh.nodes = top.mesh.nodes.clone();
            self.mesh.uniform = top.mesh.uniform;
        }
        overlay!(self.mesh, top.mesh; star_size, weights);
        match (&mut self.denominator, &top.denominator) {
            (Some(base), Some(t)) => {
                overlay!(base, t; first, second, alpha, score, fixed);
            }
            (None, Some(t)) => self.denominator = Some(t.clone()),
            _ => {}
        }
        self
    }

    /// Applies `builtin` if present.
    pub fn with_builtin(self) -> Result<ConfigDoc, ConfigError> {
        match &self.builtin {
            Some(name) => Ok(builtin_doc(name)?.overlaid(&self)),
            None => Ok(self),
        }
    }

    pub fn parse_toml(text: &str, path: &Path) -> Result<ConfigDoc, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Syntax {
            path: path.to_owned(),
            message: e.to_string().trim_end().to_owned(),
        })
    }

    pub fn parse_json(text: &str, path: &Path) -> Result<ConfigDoc, ConfigError> {
        let syntax = |e: serde_json::Error| ConfigError::Syntax {
            path: path.to_owned(),
            message: e.to_string(),
        };
        let mut value: serde_json::Value = serde_json::from_str(text).map_err(syntax)?;
        if let Some(inner) = value.get_mut("config") {
            value = inner.take();
        }
        serde_json::from_value(value).map_err(syntax)
    }

    /// Fills defaults, parses every expression and validates the problem.
    pub fn resolve(&self) -> Result<RunConfig, ConfigError> {
        let doc = self.clone().with_builtin()?;
        let p = &doc.problem;
        let expr = |field: &'static str, src: &Option<String>, default: Option<&str>| -> Result<Expr, ConfigError> {
            let src = src.as_deref().or(default).ok_or(ConfigError::Missing(field))?;
            Expr::parse(src).map_err(|source| ConfigError::Expr { field, source })
        };
        let f1 = expr("problem.f1", &p.f1, Some("0"))?;
        let f2 = expr("problem.f2", &p.f2, Some("0"))?;
        let g = expr("problem.g", &p.g, Some("0"))?;
        let h = expr("problem.h", &p.h, Some("0"))?;
        let initial = expr("problem.initial", &p.initial, None)?;
        let left = expr("problem.left", &p.left, None)?;
        let right = expr("problem.right", &p.right, None)?;
        let exact = match p.exact.as_deref() {
            None | Some("") => None,
            Some(_) => Some(expr("problem.exact", &p.exact, None)?),
        };
        let dt = p.dt.ok_or(ConfigError::Missing("problem.dt"))?;
        let t_final = p.t_final.ok_or(ConfigError::Missing("problem.t_final"))?;
        if !(dt.is_finite() && dt > 0.0) {
            return Err(invalid("problem.dt", format!("must be positive, got {dt}")));
        }
        if !(t_final.is_finite() && t_final >= 0.0) {
            return Err(invalid("problem.t_final", format!("must be non-negative, got {t_final}")));
        }
        let fractional = match p.beta {
            None => None,
            Some(beta) if !(beta > 0.0 && beta < 2.0) => {
                return Err(invalid("problem.beta", format!("must lie in (0, 2), got {beta}")))
            }
            Some(beta) => Some(match p.slot {
                None => FractionalTerm::auto(beta),
                Some(1) if beta > 1.0 => {
                    return Err(invalid("problem.slot", "orders above 1 need slot 2"))
                }
                Some(1) => FractionalTerm {
                    order: beta,
                    slot: FractionalSlot::First,
                },
                Some(2) => FractionalTerm {
                    order: beta,
                    slot: FractionalSlot::Second,
                },
                Some(other) => return Err(invalid("problem.slot", format!("must be 1 or 2, got {other}"))),
            }),
        };
        if fractional.is_none() && !g.is_zero() {
            return Err(ConfigError::Missing("problem.beta"));
        }

        let nodes = match (&doc.mesh.nodes, doc.mesh.uniform) {
            (Some(_), Some(_)) => return Err(invalid("mesh", "give either nodes or uniform, not both")),
            (Some(list), None) => NodeSet::new(list.clone()).map_err(|e| invalid("mesh.nodes", e))?,
            (None, Some(u)) => NodeSet::uniform(u.count, u.lo, u.hi).map_err(|e| invalid("mesh.uniform", e))?,
            (None, None) => return Err(ConfigError::Missing("mesh.nodes")),
        };
        let star_size = doc.mesh.star_size.unwrap_or(DEFAULT_STAR_SIZE);
        if star_size < 2 {
            return Err(invalid(
                "mesh.star_size",
                MeshError::StarTooSmall { min: 2, got: star_size },
            ));
        }
        let weights = doc.mesh.weights.unwrap_or_default();
        weights.validate().map_err(|e| invalid("mesh.weights", e))?;

        let mode_name = doc.mode.unwrap_or(if doc.denominator.is_some() {
            ModeName::NsfdOptimized
        } else {
            ModeName::Standard
        });
        let mode = match mode_name {
            ModeName::Standard => TimeMode::Standard,
            ModeName::NsfdFixed | ModeName::NsfdOptimized => {
                let d = doc.denominator.as_ref().ok_or(ConfigError::Missing("denominator"))?;
                let family = |field: &'static str, f: &Option<FamilyDoc>| -> Result<FamilyGrid, ConfigError> {
                    let f = f.as_ref().ok_or(ConfigError::Missing(field))?;
                    let params = match &f.params {
                        Some(g) => g.values(field)?,
                        None => vec![0.0],
                    };
                    Ok(FamilyGrid {
                        family: f.family,
                        params,
                    })
                };
                let first = family("denominator.first", &d.first)?;
                let second = family("denominator.second", &d.second)?;
                let alpha = match &d.alpha {
                    Some(g) => g.values("denominator.alpha")?,
                    None => vec![0.0, 1.0],
                };
                let spec = DenominatorSpec { first, second, alpha };
                spec.validate().map_err(|e| invalid("denominator", e))?;
                if mode_name == ModeName::NsfdFixed {
                    let c = d.fixed.ok_or(ConfigError::Missing("denominator.fixed"))?;
                    TimeMode::Fixed {
                        spec,
                        alpha: c.alpha,
                        p1: c.p1,
                        p2: c.p2,
                    }
                } else {
                    let score = d.score.unwrap_or_default();
                    if score == ScoreMode::Exact && exact.is_none() {
                        return Err(invalid(
                            "denominator.score",
                            "exact scoring needs problem.exact (or use score = \"residual\")",
                        ));
                    }
                    TimeMode::Optimized { spec, score }
                }
            }
        };

        let checkpoints = doc.checkpoints.clone().unwrap_or_default();
        let problem = ProblemSpec {
            equation: Equation {
                f1,
                f2,
                g,
                h,
                fractional,
            },
            initial,
            left,
            right,
            exact,
            nodes,
            star_size,
            weights,
            sign: doc.sign_convention.unwrap_or_default(),
            dt,
            t_final,
            mode,
        };
        // surfaces bad stencils and checkpoints before any stepping
        let solver = crate::solver::Solver::new(problem.clone())?;
        solver.checkpoint_steps(&checkpoints)?;

        let mut canonical = doc.clone();
        canonical.builtin = None;
        canonical.output_dir = None;
        canonical.threads = None;
        canonical.mode = Some(mode_name);
        canonical.sign_convention = Some(problem.sign);
        canonical.checkpoints = Some(checkpoints.clone());
        canonical.mesh.star_size = Some(star_size);
        canonical.mesh.weights = Some(weights);
        if mode_name == ModeName::Standard {
            canonical.denominator = None;
        }
        Ok(RunConfig {
            builtin: doc.builtin.clone(),
            problem,
            checkpoints,
            output_dir: doc.output_dir.clone(),
            threads: doc.threads,
            canonical,
        })
    }
}

/// A validated configuration ready to run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub builtin: Option<String>,
    pub problem: ProblemSpec,
    pub checkpoints: Vec<f64>,
    pub output_dir: Option<PathBuf>,
    pub threads: Option<usize>,
    /// Self-contained document that reproduces this run; excludes the
    /// output directory and thread count.
    pub canonical: ConfigDoc,
}

impl RunConfig {
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(&self.canonical).expect("config documents always serialize")
    }

    /// SHA-256 of [`RunConfig::canonical_json`], in hex.
    pub fn config_hash(&self) -> String {
        Sha256::digest(self.canonical_json().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

const EXAMPLE1: &str = include_str!("example1.toml");
const EXAMPLE2: &str = include_str!("example2.toml");

pub fn builtin_doc(name: &str) -> Result<ConfigDoc, ConfigError> {
    let text = match name {
        "example1" => EXAMPLE1,
        "example2" => EXAMPLE2,
        other => return Err(ConfigError::UnknownBuiltin(other.to_owned())),
    };
    let mut doc = ConfigDoc::parse_toml(text, Path::new(name)).expect("builtin configs parse");
    doc.builtin = Some(name.to_owned());
    Ok(doc)
}

pub fn builtin(name: &str) -> Result<RunConfig, ConfigError> {
    builtin_doc(name)?.resolve()
}

/// Reads a TOML or JSON file without resolving it.
pub fn load_doc(path: &Path) -> Result<ConfigDoc, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_owned(),
        source,
    })?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        ConfigDoc::parse_json(&text, path)
    } else {
        ConfigDoc::parse_toml(&text, path)
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    load_doc(path)?.resolve()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
        let path = dir.path().join(name);
        std::fs::File::create(&path).unwrap().write_all(text.as_bytes()).unwrap();
        path
    }

    #[test]
    fn example1_builtin() {
        let cfg = builtin("example1").unwrap();
        let p = &cfg.problem;
        assert!(p.equation.f1.is_zero() && p.equation.f2.is_zero());
        assert_eq!(p.equation.g, Expr::parse("gamma(1.2)*x^1.8").unwrap());
        assert_eq!(p.equation.h, Expr::parse("(6*x^3-3*x^2)*exp(-t)").unwrap());
        assert_eq!(
            p.equation.fractional,
            Some(FractionalTerm {
                order: 1.8,
                slot: FractionalSlot::Second
            })
        );
        assert_eq!(p.initial, Expr::parse("x^2-x^3").unwrap());
        assert!(p.left.is_zero() && p.right.is_zero());
        assert_eq!(p.exact, Some(Expr::parse("(x^2-x^3)*exp(-t)").unwrap()));
        assert_eq!(p.nodes.coords(), &super::super::EXAMPLE_MESH);
        assert_eq!(p.dt, 0.1);
        assert_eq!(cfg.checkpoints, vec![0.5, 1.0, 1.5, 2.0]);
        let TimeMode::Optimized { spec, score } = &p.mode else {
            panic!("example1 is an optimized run")
        };
        assert_eq!(*score, ScoreMode::Exact);
        assert_eq!(spec.first.family, PhiFamily::Exp);
        assert_eq!(spec.second.family, PhiFamily::Sin);
        assert_eq!(spec.first.params, (1..=10).map(f64::from).collect::<Vec<_>>());
        assert_eq!(spec.second.params, spec.first.params);
        assert_eq!(spec.alpha, (0..=10).map(|k| f64::from(k) / 10.0).collect::<Vec<_>>());
    }

    #[test]
    fn example2_builtin() {
        let cfg = builtin("example2").unwrap();
        let p = &cfg.problem;
        assert_eq!(p.equation.f1, Expr::parse("-u").unwrap());
        assert_eq!(p.equation.f2, Expr::parse("u").unwrap());
        assert!(p.equation.g.is_zero() && p.equation.h.is_zero());
        assert_eq!(p.equation.fractional, None);
        let exact = p.exact.as_ref().unwrap();
        let e = std::f64::consts::E;
        for (t, x) in [(0.0, 0.3), (1.0, 0.7), (2.0, 0.45)] {
            let w = (1.0 - f64::exp(x) + x * (e - 1.0)) / (1.0 + t * (e - 1.0));
            assert!((exact.eval(t, x, 0.0).unwrap() - w).abs() < 1e-15);
        }
        let TimeMode::Optimized { spec, .. } = &p.mode else {
            panic!("example2 is an optimized run")
        };
        assert_eq!((spec.first.family, spec.second.family), (PhiFamily::Sin, PhiFamily::TanSin));
        assert_eq!(spec.first.params.len(), 20);
        assert_eq!(spec.first.params[0], 0.5);
        assert_eq!(spec.second.params.len(), 21);
        assert_eq!(spec.second.params[0], 0.0);
        assert_eq!(*spec.second.params.last().unwrap(), 10.0);
    }

    #[test]
    fn unknown_builtin() {
        assert!(matches!(builtin("example3"), Err(ConfigError::UnknownBuiltin(_))));
    }

    #[test]
    fn missing_file_names_the_path() {
        let err = load_config(Path::new("/nonexistent/run.toml")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/run.toml"), "{err}");
    }

    #[test]
    fn builtin_overrides() {
        let dir = tempfile::tempdir().unwrap();
        let path = write(
            &dir,
            "run.toml",
            "builtin = \"example2\"\nmode = \"standard\"\ncheckpoints = [0.5]\n[problem]\nt_final = 0.5\ndt = 0.01\n",
        );
        let cfg = load_config(&path).unwrap();
        assert_eq!(cfg.problem.mode, TimeMode::Standard);
        assert_eq!(cfg.problem.t_final, 0.5);
        assert_eq!(cfg.problem.equation.f1, Expr::parse("-u").unwrap());
        assert!(cfg.canonical.denominator.is_none());
    }

    #[test]
    fn expression_errors_carry_field_path() {
        let dir = tempfile::tempdir().unwrap();
        let path = write(&dir, "bad.toml", "builtin = \"example1\"\n[problem]\nh = \"x +* 2\"\n");
        let err = load_config(&path).unwrap_err();
        assert!(matches!(err, ConfigError::Expr { field: "problem.h", .. }), "{err}");
        let path = write(&dir, "bad2.toml", "builtin = \"example1\"\n[problem]\ndt = \"fast\"\n");
        let err = load_config(&path).unwrap_err().to_string();
        assert!(err.contains("dt"), "{err}");
        let path = write(&dir, "bad3.toml", "[problem]\ninitial = \"x\"\n");
        let err = load_config(&path).unwrap_err();
        assert!(matches!(err, ConfigError::Missing("problem.left")), "{err}");
        let path = write(&dir, "bad4.toml", "builtin = \"example1\"\ncheckpoints = [0.25]\n");
        let err = load_config(&path).unwrap_err();
        assert!(matches!(err, ConfigError::Solve(SolveError::BadCheckpoint(_))), "{err}");
        let path = write(&dir, "bad5.toml", "builtin = \"example1\"\n[problem]\nbeta = 1.8\nslot = 1\n");
        assert!(matches!(
            load_config(&path).unwrap_err(),
            ConfigError::Invalid { field: "problem.slot", .. }
        ));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = write(&dir, "typo.toml", "builtin = \"example1\"\n[mesh]\nstar_sise = 3\n");
        let err = load_config(&path).unwrap_err().to_string();
        assert!(err.contains("star_sise"), "{err}");
    }

    #[test]
    fn inline_problem_and_json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let text = r#"
            [problem]
            f2 = "1"
            initial = "sin(3.141592653589793*x)"
            left = "0"
            right = "0"
            dt = 0.001
            t_final = 0.01
            [mesh]
            uniform = { count = 11, lo = 0.0, hi = 1.0 }
        "#;
        let cfg = load_config(&write(&dir, "heat.toml", text)).unwrap();
        assert_eq!(cfg.problem.mode, TimeMode::Standard);
        assert_eq!(cfg.problem.nodes.len(), 11);
        let meta = format!("{{\"config\": {}}}", cfg.canonical_json());
        let again = load_config(&write(&dir, "meta.json", &meta)).unwrap();
        assert_eq!(again.problem, cfg.problem);
        assert_eq!(again.config_hash(), cfg.config_hash());
    }

    #[test]
    fn canonical_form_is_stable_under_reload() {
        let cfg = builtin("example1").unwrap();
        let doc = ConfigDoc::parse_json(&cfg.canonical_json(), Path::new("x.json")).unwrap();
        let again = doc.resolve().unwrap();
        assert_eq!(again.canonical_json(), cfg.canonical_json());
        assert_eq!(again.problem, cfg.problem);
    }

    #[test]
    fn example1_hash_is_pinned() {
        let cfg = builtin("example1").unwrap();
        assert_eq!(
            cfg.config_hash(),
            "4db8a24a0111a89d8c6e2463a23268634ea7d97e62254bb50707d7ca6c1fd11f"
        );
        // output location and worker count do not change the hash
        let mut doc = builtin_doc("example1").unwrap();
        doc.threads = Some(8);
        doc.output_dir = Some("elsewhere".into());
        assert_eq!(doc.resolve().unwrap().config_hash(), cfg.config_hash());
    }
}
