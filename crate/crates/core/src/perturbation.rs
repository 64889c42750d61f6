//! Perturbation theory in the coupling.
//!
//! The Rayleigh–Schrödinger series is computed for the real family
//! `H₀ + λH′` with `H′ = Σ x_j x_{j+1}`; the imaginary coupling is recovered
//! by substituting `λ = ig`. For equal frequencies the unperturbed levels
//! are degenerate and only a first-order analysis is offered.

use serde::{Deserialize, Serialize};

use crate::focksolver::{x_element, FockBasis};
use crate::hamiltonian::{enumerate_multi_indices, h0_energy, MultiIndex, OscillatorChain};
use crate::linalg::{eig_dense, ComplexMatrix};
use crate::{Error, Result, C64};

/// Highest series order supported by [`rs_coefficients`].
pub const MAX_ORDER: usize = 8;

/// Relative tolerance for treating two unperturbed energies as equal.
pub const DEGENERACY_RTOL: f64 = 1e-12;

/// First-order shifts below this are treated as zero.
pub const SPLITTING_TOL: f64 = 1e-10;

/// Cap on the RS working basis; only sparse vectors are stored.
const RS_MAX_DIM: usize = 1 << 22;

/// Coefficients of `λ⁰ … λ^order` for one level of `H₀ + λH′`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesCoefficients {
    pub level: MultiIndex,
    pub coeffs: Vec<f64>,
}

impl SeriesCoefficients {
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// `Σ_j c_j λ^j`.
    pub fn evaluate(&self, lambda: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &c| acc * lambda + c)
    }

    /// Partial sum truncated at `max_order`, at `λ = ig`.
    pub fn partial_sum_imaginary(&self, g: f64, max_order: usize) -> C64 {
        let keep = (max_order + 1).min(self.coeffs.len());
        let lambda = C64::new(0.0, g);
        self.coeffs[..keep]
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &c| acc * lambda + c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    PredictReal,
    PredictComplex,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealityPrediction {
    pub level: MultiIndex,
    pub degenerate: bool,
    /// Eigenvalues of `H′` restricted to the unperturbed eigenspace.
    pub first_order_splitting: Vec<f64>,
    /// The eigenvalue of that restriction followed by this level, so that
    /// `E ≈ E⁽⁰⁾ + ig·shift`.
    pub first_order_shift: f64,
    pub verdict: Verdict,
}

/// First-order analysis of the equal-frequency level `E⁽⁰⁾ = ω(k + N/2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegenerateCluster {
    pub k: usize,
    pub e0: f64,
    /// Ascending eigenvalues of the `g_k × g_k` block of `H′`.
    pub splitting: Vec<f64>,
    /// One entry per level, labeled by normal-mode occupation.
    pub levels: Vec<RealityPrediction>,
}

fn check_order(order: usize) -> Result<()> {
    if order == 0 || order > MAX_ORDER {
        return Err(Error::Unsupported(format!(
            "series order {order} (supported: 1..={MAX_ORDER})"
        )));
    }
    Ok(())
}

/// Rayleigh–Schrödinger coefficients of `level` (oscillator labeling) up to
/// `λ^order`, using intermediate normalization.
///
/// Every state reachable in `order` applications of `H′` must lie inside the
/// basis, so each `n_j + order ≤ cutoff` is required; the coefficients are
/// then free of truncation error.
pub fn rs_coefficients(
    chain: &OscillatorChain,
    level: &MultiIndex,
    order: usize,
    cutoff: u32,
) -> Result<SeriesCoefficients> {
    check_order(order)?;
    let n = chain.n_osc();
    if level.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: level.len(),
        });
    }
    if level
        .quanta()
        .iter()
        .any(|&q| q as usize + order > cutoff as usize)
    {
        return Err(Error::LevelNearCutoff {
            level: level.to_string(),
            order,
            cutoff: cutoff as usize,
        });
    }

    let basis = FockBasis::new(n, cutoff, RS_MAX_DIM)?;
    let dim = basis.dim();
    let e0: Vec<f64> = basis
        .states()
        .iter()
        .map(|s| h0_energy(chain, s))
        .collect::<Result<_>>()?;
    let r = basis
        .index_of(level)
        .expect("level lies inside the cutoff");
    let e_ref = e0[r];
    let tol = DEGENERACY_RTOL * e_ref.abs().max(1.0);
    if e0
        .iter()
        .enumerate()
        .any(|(i, &e)| i != r && (e - e_ref).abs() <= tol)
    {
        return Err(Error::DegenerateLevel {
            level: level.to_string(),
        });
    }

    let omegas = chain.omegas();
    let mut coeffs = vec![e_ref];
    let mut psi: Vec<Vec<f64>> = Vec::with_capacity(order);
    let mut first = vec![0.0; dim];
    first[r] = 1.0;
    psi.push(first);
    let mut w = vec![0.0; dim];
    for m in 1..=order {
        basis.apply_coupling(omegas, &psi[m - 1], &mut w);
        let e_m = w[r];
        coeffs.push(e_m);
        if m == order {
            break;
        }
        // (E⁽⁰⁾ − H₀) ψ_m = H′ψ_{m−1} − Σ_{j=1..m} E_j ψ_{m−j}
        for j in 1..=m {
            let e_j = coeffs[j];
            if e_j != 0.0 {
                for (wi, &pi) in w.iter_mut().zip(&psi[m - j]) {
                    *wi -= e_j * pi;
                }
            }
        }
        let next: Vec<f64> = (0..dim)
            .map(|i| if i == r { 0.0 } else { w[i] / (e_ref - e0[i]) })
            .collect();
        psi.push(next);
    }
    Ok(SeriesCoefficients {
        level: level.clone(),
        coeffs,
    })
}

/// True iff every odd-order coefficient satisfies
/// `|c| ≤ tol · max(1, |E⁽⁰⁾|)`.
pub fn odd_order_check(coeffs: &SeriesCoefficients, tol: f64) -> bool {
    let scale = coeffs.coeffs.first().map_or(1.0, |e| e.abs().max(1.0));
    coeffs
        .coeffs
        .iter()
        .skip(1)
        .step_by(2)
        .all(|c| c.abs() <= tol * scale)
}

/// `⟨a| Σ x_j x_{j+1} |b⟩`.
fn coupling_element(a: &MultiIndex, b: &MultiIndex, omegas: &[f64]) -> f64 {
    let (qa, qb) = (a.quanta(), b.quanta());
    let n = qa.len();
    let mut total = 0.0;
    for j in 0..n.saturating_sub(1) {
        let others_equal = (0..n).all(|i| i == j || i == j + 1 || qa[i] == qb[i]);
        if others_equal {
            total += x_element(qa[j], qb[j], omegas[j]) * x_element(qa[j + 1], qb[j + 1], omegas[j + 1]);
        }
    }
    total
}

fn symmetric_eigenvalues(block: Vec<Vec<f64>>) -> Result<Vec<f64>> {
    if block.is_empty() {
        return Ok(Vec::new());
    }
    let m = ComplexMatrix::from_real_rows(&block)?;
    let mut vals: Vec<f64> = eig_dense(&m)?.values.iter().map(|z| z.re).collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

fn verdict_for(shift: f64) -> Verdict {
    if shift.abs() > SPLITTING_TOL {
        Verdict::PredictComplex
    } else {
        Verdict::Inconclusive
    }
}

/// Projects `H′` onto the degenerate level `Σn = k` of an equal-frequency
/// chain.
///
/// Each level (labeled by normal-mode occupation, in the mode order used by
/// the exact solver for the sign of `g`) is assigned the first-order shift
/// `Σ_k n_k s_k`, where `s_k` are the single-quantum shifts. A nonzero shift
/// predicts a complex level; a zero shift is first-order protected and left
/// Inconclusive.
pub fn degenerate_first_order(chain: &OscillatorChain, k: usize) -> Result<DegenerateCluster> {
    if !chain.is_equal_frequency() {
        return Err(Error::Unsupported(
            "degenerate analysis for unequal frequencies".into(),
        ));
    }
    let n = chain.n_osc();
    let omegas = chain.omegas();
    let e0 = h0_energy(chain, &MultiIndex(vec![0; n]))? + omegas[0] * k as f64;

    let states = enumerate_multi_indices(n, k);
    let block: Vec<Vec<f64>> = states
        .iter()
        .map(|a| states.iter().map(|b| coupling_element(a, b, omegas)).collect())
        .collect();
    let splitting = symmetric_eigenvalues(block)?;

    let singles = enumerate_multi_indices(n, 1);
    let single_block: Vec<Vec<f64>> = singles
        .iter()
        .map(|a| singles.iter().map(|b| coupling_element(a, b, omegas)).collect())
        .collect();
    let mut mode_shifts = symmetric_eigenvalues(single_block)?;
    // μ_k ≈ ω² + 2iωg·s_k, so for g < 0 the exact solver lists modes with
    // descending s_k.
    if chain.g() < 0.0 {
        mode_shifts.reverse();
    }

    let degenerate = states.len() > 1;
    let levels = states
        .iter()
        .map(|idx| {
            let shift: f64 = idx
                .quanta()
                .iter()
                .zip(&mode_shifts)
                .map(|(&q, s)| f64::from(q) * s)
                .sum();
            RealityPrediction {
                level: idx.clone(),
                degenerate,
                first_order_splitting: splitting.clone(),
                first_order_shift: shift,
                verdict: if degenerate {
                    verdict_for(shift)
                } else {
                    Verdict::PredictReal
                },
            }
        })
        .collect();
    Ok(DegenerateCluster {
        k,
        e0,
        splitting,
        levels,
    })
}

/// Number of multi-indices whose unperturbed energy equals that of `level`
/// within [`DEGENERACY_RTOL`] (the level itself included), stopping at 2.
fn degeneracy_at_most_two(chain: &OscillatorChain, level: &MultiIndex) -> Result<usize> {
    let omegas = chain.omegas();
    let e_ref = h0_energy(chain, level)?;
    let tol = DEGENERACY_RTOL * e_ref.abs().max(1.0);
    let budget = e_ref - omegas.iter().sum::<f64>() / 2.0;

    fn walk(omegas: &[f64], j: usize, left: f64, tol: f64, count: &mut usize) {
        if *count >= 2 {
            return;
        }
        if j == omegas.len() {
            if left.abs() <= tol {
                *count += 1;
            }
            return;
        }
        let mut q = 0.0;
        while q * omegas[j] <= left + tol {
            walk(omegas, j + 1, left - q * omegas[j], tol, count);
            q += 1.0;
        }
    }

    let mut count = 0;
    walk(omegas, 0, budget, tol, &mut count);
    Ok(count)
}

/// First-order reality prediction for one level at small `|g|`.
///
/// Nondegenerate levels are predicted real. Degenerate levels of
/// equal-frequency chains go through [`degenerate_first_order`] and are then
/// read in normal-mode labeling; other degenerate configurations are
/// unsupported.
pub fn reality_predictor(chain: &OscillatorChain, level: &MultiIndex) -> Result<RealityPrediction> {
    if level.len() != chain.n_osc() {
        return Err(Error::DimensionMismatch {
            expected: chain.n_osc(),
            got: level.len(),
        });
    }
    if degeneracy_at_most_two(chain, level)? < 2 {
        return Ok(RealityPrediction {
            level: level.clone(),
            degenerate: false,
            first_order_splitting: vec![0.0],
            first_order_shift: 0.0,
            verdict: Verdict::PredictReal,
        });
    }
    if !chain.is_equal_frequency() {
        return Err(Error::Unsupported(format!(
            "level {level} is degenerate for unequal frequencies"
        )));
    }
    let cluster = degenerate_first_order(chain, level.total() as usize)?;
    Ok(cluster
        .levels
        .into_iter()
        .find(|p| &p.level == level)
        .expect("cluster enumerates every level of its total"))
}
