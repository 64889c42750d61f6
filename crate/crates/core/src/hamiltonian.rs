//! The oscillator-chain model.
//!
//! A chain of `N` oscillators with frequencies `ω_j` and coupling `λ = i·g`
//! between neighbours:
//!
//! ```text
//! H = ½ Σ_j (p_j² + ω_j² x_j²) + λ Σ_{j<N} x_j x_{j+1} = ½ p·p + ½ x·M(λ)·x
//! ```
//!
//! `M(λ)` is the [`QuadraticForm`]: `ω_j²` on the diagonal and `λ` on the
//! first off-diagonals.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Relative tolerance used when clustering unperturbed energies.
pub const DEGENERACY_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillatorChain {
    n_osc: usize,
    omegas: Vec<f64>,
    g: f64,
}

impl OscillatorChain {
    pub fn new(n_osc: usize, omegas: Vec<f64>, g: f64) -> Result<Self> {
        if n_osc == 0 {
            return Err(Error::InvalidChain("a chain needs at least one oscillator".into()));
        }
        if omegas.len() != n_osc {
            return Err(Error::InvalidChain(format!(
                "{} frequencies given for {} oscillators",
                omegas.len(),
                n_osc
            )));
        }
        if let Some((j, w)) = omegas
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w > 0.0))
        {
            return Err(Error::InvalidChain(format!(
                "frequency ω_{} = {} must be positive and finite",
                j + 1,
                w
            )));
        }
        if !g.is_finite() {
            return Err(Error::InvalidChain(format!("coupling g = {g} is not finite")));
        }
        Ok(Self { n_osc, omegas, g })
    }

    /// Chain with every frequency equal to one.
    pub fn equal_frequency(n_osc: usize, g: f64) -> Result<Self> {
        Self::new(n_osc, vec![1.0; n_osc], g)
    }

    pub fn n_osc(&self) -> usize {
        self.n_osc
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    /// Real coupling magnitude; the Hamiltonian coupling is `λ = i·g`.
    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn lambda(&self) -> C64 {
        C64::new(0.0, self.g)
    }

    /// Same frequencies, different coupling.
    pub fn with_g(&self, g: f64) -> Result<Self> {
        Self::new(self.n_osc, self.omegas.clone(), g)
    }

    pub fn with_omega(&self, j: usize, omega: f64) -> Result<Self> {
        if j >= self.n_osc {
            return Err(Error::InvalidChain(format!(
                "oscillator index {} out of range for N = {}",
                j + 1,
                self.n_osc
            )));
        }
        let mut omegas = self.omegas.clone();
        omegas[j] = omega;
        Self::new(self.n_osc, omegas, self.g)
    }

    /// True when all frequencies coincide (to [`DEGENERACY_RTOL`]).
    pub fn is_equal_frequency(&self) -> bool {
        let w0 = self.omegas[0];
        self.omegas
            .iter()
            .all(|w| (w - w0).abs() <= DEGENERACY_RTOL * w0.max(*w))
    }

    /// Oscillator indices sorted by increasing frequency (stable).
    ///
    /// At `g → 0` the k-th normal mode (modes sorted by their squared
    /// frequency) continues the oscillator `mode_order()[k]`.
    pub fn mode_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n_osc).collect();
        order.sort_by(|&a, &b| self.omegas[a].total_cmp(&self.omegas[b]));
        order
    }
}

/// Symmetric (not Hermitian) complex matrix of the potential.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    dim: usize,
    entries: Vec<C64>,
}

impl QuadraticForm {
    /// Builds `M` from a full row-major entry list, checking symmetry.
    pub fn from_entries(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        for i in 0..dim {
            for j in 0..i {
                if entries[i * dim + j] != entries[j * dim + i] {
                    return Err(Error::InvalidChain(format!(
                        "quadratic form is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self { dim, entries })
    }

    /// `M(λ)` for an arbitrary complex coupling. Real `λ` gives the
    /// Hermitian family used to cross-check perturbation series.
    pub fn for_coupling(chain: &OscillatorChain, lambda: C64) -> Self {
        let n = chain.n_osc();
        let mut entries = vec![C64::new(0.0, 0.0); n * n];
        for (j, w) in chain.omegas().iter().enumerate() {
            entries[j * n + j] = C64::new(w * w, 0.0);
        }
        for j in 0..n.saturating_sub(1) {
            entries[j * n + j + 1] = lambda;
            entries[(j + 1) * n + j] = lambda;
        }
        Self { dim: n, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn superdiagonal(&self) -> Vec<C64> {
        (0..self.dim.saturating_sub(1))
            .map(|i| self.get(i, i + 1))
            .collect()
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "quadratic forms differ in dimension");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// `M(i·g)` for the chain.
pub fn quadratic_form(chain: &OscillatorChain) -> QuadraticForm {
    QuadraticForm::for_coupling(chain, chain.lambda())
}

/// Occupation numbers `(n_1, …, n_N)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn ground(n_osc: usize) -> Self {
        Self(vec![0; n_osc])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total number of quanta `k = Σ n_j`.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn quanta(&self) -> &[u32] {
        &self.0
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

/// Unperturbed energy `Σ_j ω_j (n_j + ½)`.
pub fn h0_energy(chain: &OscillatorChain, idx: &MultiIndex) -> Result<f64> {
    if idx.len() != chain.n_osc() {
        return Err(Error::DimensionMismatch {
            expected: chain.n_osc(),
            got: idx.len(),
        });
    }
    Ok(chain
        .omegas()
        .iter()
        .zip(idx.quanta())
        .map(|(w, &n)| w * (f64::from(n) + 0.5))
        .sum())
}

/// Degeneracy `(k+N−1)! / (k! (N−1)!)` of the level `E = k + N/2` of `N`
/// equal oscillators.
///
/// # Panics
///
/// If the result does not fit in a `u128`.
pub fn level_degeneracy(n_osc: usize, k: usize) -> u128 {
    assert!(n_osc >= 1, "level_degeneracy needs at least one oscillator");
    // C(k + N - 1, r) with r = min(k, N - 1); every partial product is itself
    // a binomial coefficient, so the division is exact.
    let n = (k + n_osc - 1) as u128;
    let r = k.min(n_osc - 1) as u128;
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc
            .checked_mul(n - i)
            .expect("level degeneracy overflows u128")
            / (i + 1);
    }
    acc
}

/// All compositions of `k` into `n_osc` non-negative parts, in lexicographic
/// order.
pub fn enumerate_multi_indices(n_osc: usize, k: usize) -> Vec<MultiIndex> {
    fn fill(pos: usize, remaining: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        let n = cur.len();
        if pos == n - 1 {
            cur[pos] = remaining;
            out.push(MultiIndex(cur.clone()));
            return;
        }
        for v in 0..=remaining {
            cur[pos] = v;
            fill(pos + 1, remaining - v, cur, out);
        }
    }

    assert!(n_osc >= 1, "enumerate_multi_indices needs at least one oscillator");
    let mut out = Vec::new();
    let mut cur = vec![0u32; n_osc];
    fill(0, k as u32, &mut cur, &mut out);
    out
}

/// Every multi-index with `Σ n_j ≤ k_max`, grouped by total and
/// lexicographic within each total.
pub fn multi_indices_up_to(n_osc: usize, k_max: usize) -> Vec<MultiIndex> {
    (0..=k_max)
        .flat_map(|k| enumerate_multi_indices(n_osc, k))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn build_chain_accepts_equal_frequencies() {
        let chain = OscillatorChain::new(2, vec![1.0, 1.0], 0.5).unwrap();
        assert_eq!(chain.n_osc(), 2);
        assert!(chain.is_equal_frequency());
        assert_eq!(chain.lambda(), c(0.0, 0.5));
    }

    #[test]
    fn single_oscillator_has_no_coupling() {
        let chain = OscillatorChain::new(1, vec![1.0], 0.3).unwrap();
        let m = quadratic_form(&chain);
        assert_eq!(m.dim(), 1);
        assert_eq!(m.entries(), &[c(1.0, 0.0)]);
        assert!(m.superdiagonal().is_empty());
    }

    #[test]
    fn build_chain_rejects_bad_input() {
        assert!(matches!(
            OscillatorChain::new(2, vec![1.0, 0.0], 0.1),
            Err(Error::InvalidChain(_))
        ));
        assert!(OscillatorChain::new(2, vec![1.0, -1.0], 0.1).is_err());
        assert!(OscillatorChain::new(3, vec![1.0, 1.0], 0.1).is_err());
        assert!(OscillatorChain::new(0, vec![], 0.1).is_err());
        assert!(OscillatorChain::new(1, vec![1.0], f64::NAN).is_err());
        assert!(OscillatorChain::new(1, vec![f64::INFINITY], 0.0).is_err());
    }

    #[test]
    fn quadratic_form_examples() {
        let m = quadratic_form(&OscillatorChain::new(2, vec![1.0, 1.0], 0.5).unwrap());
        assert_eq!(
            m.entries(),
            &[c(1.0, 0.0), c(0.0, 0.5), c(0.0, 0.5), c(1.0, 0.0)]
        );

        let m = quadratic_form(&OscillatorChain::new(3, vec![1.0, 2.0, 3.0], 0.0).unwrap());
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { [1.0, 4.0, 9.0][i] } else { 0.0 };
                assert_eq!(m.get(i, j), c(expect, 0.0));
            }
        }

        let m = quadratic_form(&OscillatorChain::equal_frequency(3, 1.0).unwrap());
        let i = c(0.0, 1.0);
        let o = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        assert_eq!(m.entries(), &[one, i, o, i, one, i, o, i, one]);
    }

    #[test]
    fn conjugate_form_flips_coupling_sign() {
        let chain = OscillatorChain::new(4, vec![1.0, 1.3, 0.7, 2.0], 0.8).unwrap();
        let m = quadratic_form(&chain);
        let m_neg = quadratic_form(&chain.with_g(-0.8).unwrap());
        assert_eq!(m.conj(), m_neg);
    }

    #[test]
    fn from_entries_checks_symmetry() {
        let bad = vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)];
        assert!(QuadraticForm::from_entries(2, bad).is_err());
        assert!(QuadraticForm::from_entries(2, vec![c(1.0, 0.0); 3]).is_err());
    }

    #[test]
    fn h0_energy_examples() {
        let eq2 = OscillatorChain::new(2, vec![1.0, 1.0], 0.0).unwrap();
        assert_eq!(h0_energy(&eq2, &MultiIndex(vec![2, 1])).unwrap(), 4.0);

        let s2 = 2f64.sqrt();
        let mixed = OscillatorChain::new(2, vec![1.0, s2], 0.0).unwrap();
        let e = h0_energy(&mixed, &MultiIndex::ground(2)).unwrap();
        assert!((e - (1.0 + s2) / 2.0).abs() < 1e-15);

        let eq3 = OscillatorChain::equal_frequency(3, 0.0).unwrap();
        assert_eq!(h0_energy(&eq3, &MultiIndex::ground(3)).unwrap(), 1.5);

        assert!(h0_energy(&eq3, &MultiIndex::ground(2)).is_err());
    }

    #[test]
    fn degeneracy_examples() {
        assert_eq!(level_degeneracy(2, 3), 4);
        assert_eq!(level_degeneracy(3, 2), 6);
        for k in 0..20 {
            assert_eq!(level_degeneracy(1, k), 1);
        }
        assert_eq!(level_degeneracy(5, 0), 1);
        // C(70, 30), well beyond u64 intermediate products.
        assert_eq!(level_degeneracy(31, 40), 55347740058143507128);
    }

    #[test]
    fn multi_index_listing() {
        let got: Vec<Vec<u32>> = enumerate_multi_indices(2, 2)
            .into_iter()
            .map(|m| m.0)
            .collect();
        assert_eq!(got, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);

        let got: Vec<Vec<u32>> = enumerate_multi_indices(3, 1)
            .into_iter()
            .map(|m| m.0)
            .collect();
        assert_eq!(got, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);

        assert_eq!(enumerate_multi_indices(2, 3).len(), 4);
        assert_eq!(multi_indices_up_to(2, 3).len(), 10);
    }

    #[test]
    fn degeneracy_matches_brute_force_count() {
        // Independent count: walk the full box [0, k]^N.
        fn brute(n: usize, k: usize) -> u128 {
            let mut count = 0;
            let total = (k + 1).pow(n as u32);
            for code in 0..total {
                let mut c = code;
                let mut s = 0;
                for _ in 0..n {
                    s += c % (k + 1);
                    c /= k + 1;
                }
                if s == k {
                    count += 1;
                }
            }
            count
        }
        for n in 1..=4 {
            for k in 0..=8 {
                assert_eq!(level_degeneracy(n, k), brute(n, k), "N={n} k={k}");
                assert_eq!(enumerate_multi_indices(n, k).len() as u128, brute(n, k));
            }
        }
    }

    #[test]
    fn equal_frequency_shells_are_flat() {
        for n in 1..=4 {
            let chain = OscillatorChain::equal_frequency(n, 0.0).unwrap();
            for k in 0..6 {
                for idx in enumerate_multi_indices(n, k) {
                    let e = h0_energy(&chain, &idx).unwrap();
                    assert_eq!(e, k as f64 + n as f64 / 2.0);
                }
            }
        }
    }

    #[test]
    fn mode_order_sorts_frequencies() {
        let chain = OscillatorChain::new(3, vec![2.0, 0.5, 1.0], 0.0).unwrap();
        assert_eq!(chain.mode_order(), vec![1, 2, 0]);
        assert!(!chain.is_equal_frequency());
    }

    #[test]
    fn multi_index_display() {
        assert_eq!(MultiIndex(vec![0, 12, 3]).to_string(), "(0,12,3)");
    }
}
