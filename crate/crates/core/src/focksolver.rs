//! Truncated Fock-basis representation of `H(ig)`.
//!
//! Each oscillator keeps the states `0..=cutoff` (hypercube truncation). With
//! `x = (a + a†) / √(2ω)` the coupling `Σ x_j x_{j+1}` only connects states
//! that differ by one quantum in each of two neighbouring modes, so the total
//! quantum number changes by `0` or `±2`. The matrix therefore splits into
//! even and odd sectors, which [`fock_spectrum`] diagonalizes separately.

use serde::{Deserialize, Serialize};

use crate::hamiltonian::{h0_energy, MultiIndex, OscillatorChain};
use crate::linalg::{
    eig_dense_with, greedy_match, multisets_match, spectrum_order, ComplexMatrix, EigOptions,
    EigenResult, DEFAULT_MAX_DIM,
};
use crate::normalmodes::EigenLevel;
use crate::{Error, Result, C64};

/// `⟨n_row| x |n_col⟩` for an oscillator of frequency `omega`.
pub fn x_element(n_row: u32, n_col: u32, omega: f64) -> f64 {
    if n_row + 1 == n_col {
        (f64::from(n_col) / (2.0 * omega)).sqrt()
    } else if n_row == n_col + 1 {
        ((f64::from(n_col) + 1.0) / (2.0 * omega)).sqrt()
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockBasis {
    n_osc: usize,
    cutoff: u32,
    states: Vec<MultiIndex>,
}

impl FockBasis {
    /// All states with every `n_j ≤ cutoff`, lexicographic.
    pub fn new(n_osc: usize, cutoff: u32, limit: usize) -> Result<Self> {
        let side = cutoff as usize + 1;
        let dim = u32::try_from(n_osc)
            .ok()
            .and_then(|n| side.checked_pow(n))
            .filter(|&d| d <= limit)
            .ok_or(Error::DimensionLimit {
                dim: side.saturating_pow(n_osc.min(u32::MAX as usize) as u32),
                limit,
            })?;
        let states = (0..dim).map(|i| Self::decode(i, n_osc, side)).collect();
        Ok(Self {
            n_osc,
            cutoff,
            states,
        })
    }

    fn decode(mut i: usize, n_osc: usize, side: usize) -> MultiIndex {
        let mut q = vec![0u32; n_osc];
        for slot in q.iter_mut().rev() {
            *slot = (i % side) as u32;
            i /= side;
        }
        MultiIndex(q)
    }

    pub fn n_osc(&self) -> usize {
        self.n_osc
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[MultiIndex] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &MultiIndex {
        &self.states[i]
    }

    /// Position of a state in the basis, if retained by the truncation.
    pub fn index_of(&self, idx: &MultiIndex) -> Option<usize> {
        if idx.len() != self.n_osc || idx.quanta().iter().any(|&n| n > self.cutoff) {
            return None;
        }
        let side = self.cutoff as usize + 1;
        Some(idx.quanta().iter().fold(0, |acc, &n| acc * side + n as usize))
    }

    fn stride(&self, j: usize) -> usize {
        (self.cutoff as usize + 1).pow((self.n_osc - 1 - j) as u32)
    }

    /// Visits every nonzero `⟨row| Σ x_j x_{j+1} |col⟩` for a fixed column.
    pub(crate) fn for_each_coupling<F>(&self, omegas: &[f64], col: usize, mut f: F)
    where
        F: FnMut(usize, f64),
    {
        let q = self.states[col].quanta();
        for j in 0..self.n_osc.saturating_sub(1) {
            let (sa, sb) = (self.stride(j), self.stride(j + 1));
            for da in [-1i64, 1] {
                let na = i64::from(q[j]) + da;
                if na < 0 || na > i64::from(self.cutoff) {
                    continue;
                }
                let xa = x_element(na as u32, q[j], omegas[j]);
                for db in [-1i64, 1] {
                    let nb = i64::from(q[j + 1]) + db;
                    if nb < 0 || nb > i64::from(self.cutoff) {
                        continue;
                    }
                    let xb = x_element(nb as u32, q[j + 1], omegas[j + 1]);
                    let row = col as i64 + da * sa as i64 + db * sb as i64;
                    f(row as usize, xa * xb);
                }
            }
        }
    }

    /// `y = H′ v` with `H′ = Σ x_j x_{j+1}`.
    pub(crate) fn apply_coupling(&self, omegas: &[f64], v: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|x| *x = 0.0);
        for (col, &vc) in v.iter().enumerate() {
            if vc == 0.0 {
                continue;
            }
            self.for_each_coupling(omegas, col, |row, x| y[row] += x * vc);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockHamiltonian {
    pub basis: FockBasis,
    pub matrix: ComplexMatrix,
}

/// Dense matrix of `H(ig)` in the truncated basis. Dimension is capped at
/// [`DEFAULT_MAX_DIM`].
pub fn build_fock_hamiltonian(chain: &OscillatorChain, cutoff: u32) -> Result<FockHamiltonian> {
    build_fock_hamiltonian_with_limit(chain, cutoff, DEFAULT_MAX_DIM)
}

pub fn build_fock_hamiltonian_with_limit(
    chain: &OscillatorChain,
    cutoff: u32,
    limit: usize,
) -> Result<FockHamiltonian> {
    let basis = FockBasis::new(chain.n_osc(), cutoff, limit)?;
    let n = basis.dim();
    let mut matrix = ComplexMatrix::zeros(n, n);
    let lambda = chain.lambda();
    for col in 0..n {
        matrix[(col, col)] = C64::new(h0_energy(chain, basis.state(col))?, 0.0);
        basis.for_each_coupling(chain.omegas(), col, |row, x| {
            matrix[(row, col)] += lambda * x;
        });
    }
    Ok(FockHamiltonian { basis, matrix })
}

fn sector_spectrum(h: &FockHamiltonian, parity: u32) -> Result<Vec<C64>> {
    let members: Vec<usize> = (0..h.basis.dim())
        .filter(|&i| h.basis.state(i).total() % 2 == parity)
        .collect();
    let m = members.len();
    let mut block = ComplexMatrix::zeros(m, m);
    for (bi, &i) in members.iter().enumerate() {
        for (bj, &j) in members.iter().enumerate() {
            block[(bi, bj)] = h.matrix[(i, j)];
        }
    }
    let opts = EigOptions {
        max_dim: usize::MAX,
        ..EigOptions::default()
    };
    Ok(eig_dense_with(&block, &opts)?.values)
}

/// Eigenvalues of the truncated `H(ig)`, sorted `(Re, Im)`.
pub fn fock_spectrum(chain: &OscillatorChain, cutoff: u32) -> Result<EigenResult> {
    let h = build_fock_hamiltonian(chain, cutoff)?;
    fock_spectrum_of(&h)
}

/// Spectrum of an already-built Fock matrix, one parity sector at a time.
pub fn fock_spectrum_of(h: &FockHamiltonian) -> Result<EigenResult> {
    let (even, odd) = rayon::join(|| sector_spectrum(h, 0), || sector_spectrum(h, 1));
    let mut values = even?;
    values.extend(odd?);
    let order = spectrum_order(&values);
    let values: Vec<C64> = order.into_iter().map(|i| values[i]).collect();
    Ok(EigenResult {
        residual_bound: values.len() as f64 * f64::EPSILON,
        values,
        vectors: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchedLevel {
    pub idx: MultiIndex,
    pub exact: C64,
    pub fock: C64,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub pairs: Vec<MatchedLevel>,
    /// Exact levels that found no Fock eigenvalue.
    pub unmatched: Vec<MultiIndex>,
    pub max_distance: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Matches the `n_levels` exact levels of smallest `|Re E|` to Fock
/// eigenvalues by greedy minimal distance.
pub fn match_spectra(
    fock: &EigenResult,
    exact: &[EigenLevel],
    n_levels: usize,
    tol: f64,
) -> MatchReport {
    let mut chosen: Vec<&EigenLevel> = exact.iter().collect();
    chosen.sort_by(|a, b| {
        a.energy
            .re
            .abs()
            .total_cmp(&b.energy.re.abs())
            .then(a.energy.im.total_cmp(&b.energy.im))
    });
    chosen.truncate(n_levels);

    let targets: Vec<C64> = chosen.iter().map(|l| l.energy).collect();
    let mut pairs: Vec<MatchedLevel> = greedy_match(&targets, &fock.values)
        .into_iter()
        .map(|p| MatchedLevel {
            idx: chosen[p.left].idx.clone(),
            exact: targets[p.left],
            fock: fock.values[p.right],
            distance: p.distance,
        })
        .collect();
    pairs.sort_by(|a, b| {
        a.exact
            .re
            .total_cmp(&b.exact.re)
            .then(a.exact.im.total_cmp(&b.exact.im))
    });
    let unmatched: Vec<MultiIndex> = chosen
        .iter()
        .filter(|l| !pairs.iter().any(|p| p.idx == l.idx))
        .map(|l| l.idx.clone())
        .collect();
    let max_distance = pairs.iter().map(|p| p.distance).fold(0.0, f64::max);
    let pass = unmatched.is_empty() && chosen.len() == n_levels && max_distance <= tol;
    MatchReport {
        pairs,
        unmatched,
        max_distance,
        tol,
        pass,
    }
}

/// True iff the truncated spectra of `H(ig)` and `H(−ig)` coincide as
/// multisets within `tol`.
pub fn spectrum_negation_check(chain: &OscillatorChain, cutoff: u32, tol: f64) -> Result<bool> {
    let plus = fock_spectrum(chain, cutoff)?;
    let minus = fock_spectrum(&chain.with_g(-chain.g())?, cutoff)?;
    Ok(multisets_match(&plus.values, &minus.values, tol))
}
