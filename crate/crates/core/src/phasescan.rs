//! Real / complex regions of the spectrum over a two-parameter grid.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::hamiltonian::{multi_indices_up_to, OscillatorChain};
use crate::normalmodes::{classify_level, mode_frequencies, Reality};
use crate::{Error, Result};

/// Lattice depth used when none is given.
pub const DEFAULT_K_MAX: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhaseLabel {
    AllReal,
    SomeComplex,
    Unstable,
}

impl fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A scan parameter: the coupling `g` or one frequency `omega_j` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Parameter {
    G,
    Omega(usize),
}

impl Parameter {
    /// Copy of `chain` with this parameter set to `value`.
    pub fn apply(self, chain: &OscillatorChain, value: f64) -> Result<OscillatorChain> {
        match self {
            Self::G => chain.with_g(value),
            Self::Omega(j) => {
                if j == 0 || j > chain.n_osc() {
                    return Err(Error::InvalidAxis(self.to_string()));
                }
                chain.with_omega(j - 1, value)
            }
        }
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::G => write!(f, "g"),
            Self::Omega(j) => write!(f, "omega_{j}"),
        }
    }
}

impl FromStr for Parameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "g" {
            return Ok(Self::G);
        }
        s.strip_prefix("omega_")
            .and_then(|j| j.parse::<usize>().ok())
            .filter(|&j| j >= 1)
            .map(Self::Omega)
            .ok_or_else(|| Error::InvalidAxis(s.to_string()))
    }
}

impl TryFrom<String> for Parameter {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Parameter> for String {
    fn from(p: Parameter) -> Self {
        p.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: Parameter,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(name: &str, values: Vec<f64>) -> Result<Self> {
        let name = name.parse()?;
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidAxis(format!("{name}: values must be finite and nonempty")));
        }
        Ok(Self { name, values })
    }

    /// `n` evenly spaced points from `lo` to `hi` inclusive.
    pub fn linspace(name: &str, lo: f64, hi: f64, n: usize) -> Result<Self> {
        let values = match n {
            0 => Vec::new(),
            1 => vec![lo],
            _ => (0..n)
                .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
                .collect(),
        };
        Self::new(name, values)
    }
}

/// Bisection result: the labels differ at `lo` and `hi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub lo_label: PhaseLabel,
    pub hi_label: PhaseLabel,
    pub iterations: usize,
}

impl Bracket {
    pub fn width(&self) -> f64 {
        (self.hi - self.lo).abs()
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo.min(self.hi) <= x && x <= self.lo.max(self.hi)
    }
}

/// A label change along axis 1 at a fixed axis-2 value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub axis2_value: f64,
    pub bracket: Bracket,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseDiagram {
    pub axis1: Axis,
    pub axis2: Axis,
    /// `cells[i][j]` is the label at `(axis1.values[i], axis2.values[j])`.
    pub cells: Vec<Vec<PhaseLabel>>,
    pub k_max: usize,
    pub boundary_points: Vec<BoundaryPoint>,
}

impl PhaseDiagram {
    pub fn cell_count(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    /// `(axis1 value, axis2 value, label)` in row-major grid order.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, PhaseLabel)> + '_ {
        self.axis1.values.iter().enumerate().flat_map(move |(i, &a)| {
            self.axis2
                .values
                .iter()
                .enumerate()
                .map(move |(j, &b)| (a, b, self.cells[i][j]))
        })
    }
}

/// Unstable if some real mode has `μ ≤ 0`; AllReal if every level with
/// `Σn ≤ k_max` is real; SomeComplex otherwise.
///
/// When every `μ_k` is real the whole lattice is real and the level loop is
/// skipped.
pub fn classify_point(chain: &OscillatorChain, k_max: usize) -> Result<PhaseLabel> {
    let spec = mode_frequencies(chain)?;
    if spec.unstable {
        return Ok(PhaseLabel::Unstable);
    }
    if spec.all_self_paired() {
        return Ok(PhaseLabel::AllReal);
    }
    for idx in multi_indices_up_to(spec.n_modes(), k_max) {
        if classify_level(&spec, &idx)?.reality == Reality::ComplexPaired {
            return Ok(PhaseLabel::SomeComplex);
        }
    }
    Ok(PhaseLabel::AllReal)
}

/// Evaluates the grid in parallel; the cell order is fixed by the axes.
pub fn scan(base: &OscillatorChain, axis1: &Axis, axis2: &Axis, k_max: usize) -> Result<PhaseDiagram> {
    scan_refined(base, axis1, axis2, k_max, 0)
}

/// [`scan`], then bisects every label change along axis 1 for
/// `iterations` steps. With zero iterations the brackets are the grid cells.
pub fn scan_refined(
    base: &OscillatorChain,
    axis1: &Axis,
    axis2: &Axis,
    k_max: usize,
    iterations: usize,
) -> Result<PhaseDiagram> {
    let (n1, n2) = (axis1.values.len(), axis2.values.len());
    let flat: Vec<PhaseLabel> = (0..n1 * n2)
        .into_par_iter()
        .map(|c| {
            let (i, j) = (c / n2, c % n2);
            let chain = axis1.name.apply(base, axis1.values[i])?;
            let chain = axis2.name.apply(&chain, axis2.values[j])?;
            classify_point(&chain, k_max)
        })
        .collect::<Result<_>>()?;
    let cells: Vec<Vec<PhaseLabel>> = flat.chunks(n2.max(1)).map(<[_]>::to_vec).collect();

    let mut jobs = Vec::new();
    for j in 0..n2 {
        for i in 1..n1 {
            let (a, b) = (cells[i - 1][j], cells[i][j]);
            if a != b && a != PhaseLabel::Unstable && b != PhaseLabel::Unstable {
                jobs.push((j, i));
            }
        }
    }
    let boundary_points = jobs
        .into_par_iter()
        .map(|(j, i)| {
            let fixed = axis2.name.apply(base, axis2.values[j])?;
            let bracket = if iterations == 0 {
                Bracket {
                    lo: axis1.values[i - 1],
                    hi: axis1.values[i],
                    lo_label: cells[i - 1][j],
                    hi_label: cells[i][j],
                    iterations: 0,
                }
            } else {
                refine_boundary(
                    &fixed,
                    axis1.name,
                    axis1.values[i - 1],
                    axis1.values[i],
                    k_max,
                    iterations,
                )?
            };
            Ok(BoundaryPoint {
                axis2_value: axis2.values[j],
                bracket,
            })
        })
        .collect::<Result<_>>()?;

    Ok(PhaseDiagram {
        axis1: axis1.clone(),
        axis2: axis2.clone(),
        cells,
        k_max,
        boundary_points,
    })
}

/// Bisects `[lo, hi]` along `axis` for `iterations` steps, keeping the
/// labels at the two ends different.
pub fn refine_boundary(
    base: &OscillatorChain,
    axis: Parameter,
    lo: f64,
    hi: f64,
    k_max: usize,
    iterations: usize,
) -> Result<Bracket> {
    let label_at = |v: f64| classify_point(&axis.apply(base, v)?, k_max);
    let (mut lo, mut hi) = (lo, hi);
    let lo_label = label_at(lo)?;
    let hi_label = label_at(hi)?;
    if lo_label == hi_label {
        return Err(Error::NoSignChange(lo_label.to_string()));
    }
    if lo_label == PhaseLabel::Unstable || hi_label == PhaseLabel::Unstable {
        return Err(Error::Unsupported("bisection with an unstable endpoint".into()));
    }
    for _ in 0..iterations {
        let mid = 0.5 * (lo + hi);
        if label_at(mid)? == lo_label {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Bracket {
        lo,
        hi,
        lo_label,
        hi_label,
        iterations,
    })
}

/// Coupling at which the two normal modes of a two-oscillator chain
/// coalesce: `|ω_x² − ω_y²| / 2`.
pub fn two_by_two_boundary(omega_x: f64, omega_y: f64) -> f64 {
    (omega_x * omega_x - omega_y * omega_y).abs() / 2.0
}
