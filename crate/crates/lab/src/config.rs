//! Run configuration: defaults, an optional TOML file and command-line
//! overrides, merged in that order.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;
use shishkin_core::mesh::admissible_eps;
use shishkin_core::polyquad::MAX_LOBATTO_DEGREE;
use shishkin_core::problem::ProblemId;

use crate::error::{config_error, LabResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    GalerkinSuperclose,
    InterpRates,
    Hier1dChecks,
    IdentityChecks,
    MeshDump,
}

impl Mode {
    pub fn default_problem(self) -> ProblemId {
        match self {
            Mode::Hier1dChecks => ProblemId::Layer1d,
            _ => ProblemId::Layer2d,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Interpolant {
    Gl,
    Vec,
    Both,
}

impl Interpolant {
    pub fn gauss_lobatto(self) -> bool {
        matches!(self, Interpolant::Gl | Interpolant::Both)
    }

    pub fn vertex_edge_cell(self) -> bool {
        matches!(self, Interpolant::Vec | Interpolant::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Markdown,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Markdown => "markdown",
        })
    }
}

/// Values that may come from a file or the command line; `None` means unset.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub p: Option<usize>,
    #[serde(rename = "N")]
    pub n: Option<Vec<usize>>,
    pub eps: Option<Vec<f64>>,
    pub sigma: Option<f64>,
    pub problem: Option<String>,
    pub interpolant: Option<Interpolant>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub force: Option<bool>,
    #[serde(rename = "quad-order")]
    pub quad_order: Option<usize>,
}

impl Overrides {
    pub fn from_toml(text: &str) -> LabResult<Self> {
        toml::from_str(text).map_err(|e| config_error(format!("config file: {e}")))
    }

    pub fn from_file(path: &Path) -> LabResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Fields set in `other` replace ours.
    pub fn merged_with(self, other: Overrides) -> Overrides {
        Overrides {
            p: other.p.or(self.p),
            n: other.n.or(self.n),
            eps: other.eps.or(self.eps),
            sigma: other.sigma.or(self.sigma),
            problem: other.problem.or(self.problem),
            interpolant: other.interpolant.or(self.interpolant),
            format: other.format.or(self.format),
            out: other.out.or(self.out),
            force: other.force.or(self.force),
            quad_order: other.quad_order.or(self.quad_order),
        }
    }
}

/// A validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub mode: Mode,
    pub p: usize,
    pub ns: Vec<usize>,
    pub eps_list: Vec<f64>,
    pub sigma: f64,
    pub problem: ProblemId,
    pub interpolant: Interpolant,
    pub format: Format,
    pub out: Option<PathBuf>,
    /// Accept `σ < p + 3/2` and clamp the transition point for large ε.
    pub force: bool,
    pub quad_order: Option<usize>,
}

pub const DEFAULT_P: usize = 3;
pub const DEFAULT_NS: [usize; 3] = [8, 16, 32];
pub const DEFAULT_EPS: f64 = 1e-6;

impl StudyConfig {
    pub fn resolve(mode: Mode, o: Overrides) -> LabResult<Self> {
        let p = o.p.unwrap_or(DEFAULT_P);
        let problem = match o.problem {
            Some(name) => ProblemId::from_str(&name)
                .map_err(|_| config_error(format!("unknown problem '{name}'")))?,
            None => mode.default_problem(),
        };
        let cfg = StudyConfig {
            mode,
            p,
            ns: o.n.unwrap_or_else(|| DEFAULT_NS.to_vec()),
            eps_list: o.eps.unwrap_or_else(|| vec![DEFAULT_EPS]),
            sigma: o.sigma.unwrap_or(p as f64 + 1.5),
            problem,
            interpolant: o.interpolant.unwrap_or(Interpolant::Both),
            format: o.format.unwrap_or(Format::Csv),
            out: o.out,
            force: o.force.unwrap_or(false),
            quad_order: o.quad_order,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// `min(β_1, β_2)` of the configured problem.
    pub fn beta_min(&self) -> f64 {
        2.0
    }

    pub fn validate(&self) -> LabResult<()> {
        let p = self.p;
        if p % 2 == 0 || p + 1 > MAX_LOBATTO_DEGREE {
            return Err(config_error(format!(
                "p = {p} must be odd and at most {}",
                MAX_LOBATTO_DEGREE - 1
            )));
        }
        if self.mode == Mode::Hier1dChecks && p < 3 {
            return Err(config_error("hier1d checks need p >= 3"));
        }
        let expected = self.mode.default_problem();
        if self.problem != expected {
            return Err(config_error(format!(
                "problem '{}' does not fit this subcommand; use '{}'",
                self.problem.as_str(),
                expected.as_str()
            )));
        }
        if self.ns.is_empty() {
            return Err(config_error("empty N list"));
        }
        if let Some(&n) = self.ns.iter().find(|&&n| n < 4 || n % 2 != 0) {
            return Err(config_error(format!("N = {n} must be even and at least 4")));
        }
        if self.eps_list.is_empty() {
            return Err(config_error("empty eps list"));
        }
        if let Some(&eps) = self.eps_list.iter().find(|&&e| !(e > 0.0 && e.is_finite())) {
            return Err(config_error(format!("eps = {eps} must be positive")));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(config_error(format!(
                "sigma = {} must be positive",
                self.sigma
            )));
        }
        if self.sigma < p as f64 + 1.5 && !self.force {
            return Err(config_error(format!(
                "sigma = {} is below p + 3/2 = {}; pass --force to run anyway",
                self.sigma,
                p as f64 + 1.5
            )));
        }
        if let Some(q) = self.quad_order {
            if q < p + 2 {
                return Err(config_error(format!(
                    "quad-order {q} must be at least p + 2 = {}",
                    p + 2
                )));
            }
        }
        if !self.force {
            for &n in &self.ns {
                for &eps in &self.eps_list {
                    let limit = admissible_eps(n, self.sigma, self.beta_min());
                    if eps > limit {
                        return Err(config_error(format!(
                            "eps = {eps:e} exceeds the admissible {limit:e} for N = {n}, sigma = {}; pass --force to clamp the transition point",
                            self.sigma
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `(ε, N)` pairs in table order: ε outer, N inner.
    pub fn cases(&self) -> Vec<(f64, usize)> {
        self.eps_list
            .iter()
            .flat_map(|&eps| self.ns.iter().map(move |&n| (eps, n)))
            .collect()
    }
}
