//! Run configuration: JSON file and command-line flags share one schema.
//! Flags override the file field by field.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, ensure, Context};
use clap::{Args, Subcommand, ValueEnum};
use oscsym_core::phasescan::{Axis, DEFAULT_K_MAX};
use oscsym_core::{MultiIndex, OscillatorChain};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Subcommand)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Exact level lattice from the normal modes
    Spectrum,
    /// Truncated Fock-basis spectrum matched against the exact lattice
    Fock,
    /// Canonical operators, their classes and the groups they generate
    Symmetry,
    /// Perturbation series and reality prediction for one level
    Perturb,
    /// Real / complex phase diagram over two parameters
    Scan,
    /// Seeded run of the invariant checks
    Verify,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Spectrum => "spectrum",
            Self::Fock => "fock",
            Self::Symmetry => "symmetry",
            Self::Perturb => "perturb",
            Self::Scan => "scan",
            Self::Verify => "verify",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Evenly spaced grid along one scan parameter. On the command line:
/// `name:lo:hi:points`, e.g. `g:0:1:21`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl AxisSpec {
    pub fn to_axis(&self) -> anyhow::Result<Axis> {
        ensure!(self.points >= 1, "axis {}: needs at least one point", self.name);
        ensure!(
            self.lo.is_finite() && self.hi.is_finite(),
            "axis {}: bounds must be finite",
            self.name
        );
        Ok(Axis::linspace(&self.name, self.lo, self.hi, self.points)?)
    }
}

impl FromStr for AxisSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(format!("expected name:lo:hi:points, got '{s}'"));
        }
        let num = |t: &str| t.parse::<f64>().map_err(|e| format!("'{t}': {e}"));
        Ok(Self {
            name: parts[0].to_string(),
            lo: num(parts[1])?,
            hi: num(parts[2])?,
            points: parts[3].parse().map_err(|e| format!("'{}': {e}", parts[3]))?,
        })
    }
}

/// Every field is optional; [`RunConfig::resolve`] fills in defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[arg(skip)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,

    /// Number of oscillators
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,

    /// Comma-separated frequencies ω_1,…,ω_N (decimal literals)
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<f64>>,

    /// Coupling g in λ = i·g
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,

    /// Largest total quantum number Σn of listed / classified levels
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kmax: Option<usize>,

    /// Largest quantum number per oscillator in the Fock basis
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<u32>,

    /// Number of exact levels matched against the Fock spectrum
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,

    /// Tolerance for the Fock match
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,

    /// Comma-separated occupation numbers of the level to expand
    #[arg(long, global = true, value_delimiter = ',')]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<Vec<u32>>,

    /// Highest order of the perturbation series
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,

    /// First scan axis, name:lo:hi:points
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis1: Option<AxisSpec>,

    /// Second scan axis, name:lo:hi:points
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis2: Option<AxisSpec>,

    /// Bisection steps applied to every boundary found by a scan
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refine: Option<usize>,

    /// Output format
    #[arg(long, global = true, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,

    /// Seed for the randomized checks of `verify`
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

pub const DEFAULT_N: usize = 2;
pub const DEFAULT_CUTOFF: u32 = 12;
pub const DEFAULT_LEVELS: usize = 6;
pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_ORDER: usize = 4;

impl RunConfig {
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        serde_json::from_str(text).context("invalid config JSON")
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in {}", path.display()))
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overlay(self, over: RunConfig) -> RunConfig {
        RunConfig {
            command: over.command.or(self.command),
            n: over.n.or(self.n),
            omega: over.omega.or(self.omega),
            g: over.g.or(self.g),
            kmax: over.kmax.or(self.kmax),
            cutoff: over.cutoff.or(self.cutoff),
            levels: over.levels.or(self.levels),
            tol: over.tol.or(self.tol),
            level: over.level.or(self.level),
            order: over.order.or(self.order),
            axis1: over.axis1.or(self.axis1),
            axis2: over.axis2.or(self.axis2),
            refine: over.refine.or(self.refine),
            format: over.format.or(self.format),
            output: over.output.or(self.output),
            seed: over.seed.or(self.seed),
        }
    }

    pub fn resolve(&self) -> anyhow::Result<Resolved> {
        let Some(command) = self.command else {
            bail!("no command given (use a subcommand or set \"command\" in the config)");
        };
        let omegas = match (&self.omega, self.n) {
            (Some(w), Some(n)) if w.len() != n => {
                bail!("--omega has {} values but --n is {n}", w.len())
            }
            (Some(w), _) => w.clone(),
            (None, n) => vec![1.0; n.unwrap_or(DEFAULT_N)],
        };
        let n = omegas.len();
        ensure!(n >= 1, "need at least one oscillator");
        let chain = OscillatorChain::new(n, omegas, self.g.unwrap_or(0.0))?;

        let level = MultiIndex(self.level.clone().unwrap_or_else(|| vec![0; n]));
        ensure!(
            level.len() == n,
            "--level has {} entries but the chain has {n} oscillators",
            level.len()
        );
        let tol = self.tol.unwrap_or(DEFAULT_TOL);
        ensure!(tol.is_finite() && tol > 0.0, "--tol must be positive");

        let axis1 = self.axis1.clone().unwrap_or(AxisSpec {
            name: "g".into(),
            lo: 0.0,
            hi: 1.0,
            points: 21,
        });
        let axis2 = self.axis2.clone().unwrap_or(AxisSpec {
            name: "omega_2".into(),
            lo: 1.0,
            hi: 2.0,
            points: 21,
        });
        if command == Command::Scan {
            for a in [&axis1, &axis2] {
                let axis = a.to_axis()?;
                axis.name.apply(&chain, a.lo).with_context(|| format!("axis {}", a.name))?;
            }
        }

        let default_format = match command {
            Command::Symmetry | Command::Verify => Format::Json,
            _ => Format::Csv,
        };
        Ok(Resolved {
            command,
            chain,
            kmax: self.kmax.unwrap_or(DEFAULT_K_MAX),
            cutoff: self.cutoff.unwrap_or(DEFAULT_CUTOFF),
            levels: self.levels.unwrap_or(DEFAULT_LEVELS),
            tol,
            level,
            order: self.order.unwrap_or(DEFAULT_ORDER),
            axis1,
            axis2,
            refine: self.refine.unwrap_or(0),
            format: self.format.unwrap_or(default_format),
            output: self.output.clone(),
            seed: self.seed.unwrap_or(0),
        })
    }
}

/// Fully specified run.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub command: Command,
    pub chain: OscillatorChain,
    pub kmax: usize,
    pub cutoff: u32,
    pub levels: usize,
    pub tol: f64,
    pub level: MultiIndex,
    pub order: usize,
    pub axis1: AxisSpec,
    pub axis2: AxisSpec,
    pub refine: usize,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub seed: u64,
}

impl Resolved {
    /// Config that reproduces this run. The output path is left out so that
    /// reports do not depend on where they are written.
    pub fn to_config(&self) -> RunConfig {
        RunConfig {
            command: Some(self.command),
            n: Some(self.chain.n_osc()),
            omega: Some(self.chain.omegas().to_vec()),
            g: Some(self.chain.g()),
            kmax: Some(self.kmax),
            cutoff: Some(self.cutoff),
            levels: Some(self.levels),
            tol: Some(self.tol),
            level: Some(self.level.quanta().to_vec()),
            order: Some(self.order),
            axis1: Some(self.axis1.clone()),
            axis2: Some(self.axis2.clone()),
            refine: Some(self.refine),
            format: Some(self.format),
            output: None,
            seed: Some(self.seed),
        }
    }
}
