//! Exact spectrum of `H(ig)` from complex normal modes.
//!
//! With `H = ½ p·p + ½ x·M x` and `M` complex symmetric, a complex orthogonal
//! change of coordinates decouples the chain into oscillators of squared
//! frequency `μ_k` (eigenvalues of `M`). The spectrum is the lattice
//! `E = Σ_k (n_k + ½) Ω_k` with `Ω_k = √μ_k` on the principal branch.
//!
//! Because `M(ig)` is similar to its complex conjugate via a signed diagonal
//! matrix, the `μ_k` are real or come in conjugate pairs. A lattice level is
//! real exactly when its occupation numbers are symmetric under the pairing.

use serde::{Deserialize, Serialize};

use crate::hamiltonian::{multi_indices_up_to, quadratic_form, MultiIndex, OscillatorChain};
use crate::linalg::{eig_tridiag_complex_symmetric, spectrum_order};
use crate::{Error, Result, C64};

/// Relative tolerance (on `max |μ|`) for conjugate pairing of modes.
pub const PAIRING_RTOL: f64 = 1e-9;

/// A level is real when `|Im E| ≤ REALITY_RTOL · (1 + |Re E|)`.
pub const REALITY_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalModeSpectrum {
    /// Eigenvalues of `M(ig)` in `(Re, Im)` order.
    pub mu: Vec<C64>,
    /// Principal square roots of `mu`.
    pub omega_modes: Vec<C64>,
    /// Involution `k ↦ k'` with `μ_{k'} ≈ conj(μ_k)`.
    pub pairing: Vec<usize>,
    /// Set when some mode has real `μ ≤ 0`.
    pub unstable: bool,
}

impl NormalModeSpectrum {
    pub fn n_modes(&self) -> usize {
        self.mu.len()
    }

    pub fn is_self_paired(&self, k: usize) -> bool {
        self.pairing[k] == k
    }

    /// True when every mode is its own partner, i.e. all `μ_k` are real.
    pub fn all_self_paired(&self) -> bool {
        (0..self.n_modes()).all(|k| self.is_self_paired(k))
    }

    fn check_stable(&self) -> Result<()> {
        if self.unstable {
            let mode = self
                .mu
                .iter()
                .position(|m| m.re <= 0.0)
                .unwrap_or_default();
            return Err(Error::Unstable {
                mode,
                mu: self.mu[mode].re,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Reality {
    Real,
    ComplexPaired,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenLevel {
    /// Occupation numbers of the normal modes, in the order of
    /// [`NormalModeSpectrum::mu`].
    pub idx: MultiIndex,
    pub energy: C64,
    pub reality: Reality,
    /// Level carrying the conjugate energy, for complex levels.
    pub partner: Option<MultiIndex>,
}

/// Principal square root with the `Re = 0` branch cut resolved towards
/// `Im ≥ 0`.
pub fn principal_sqrt(z: C64) -> C64 {
    let r = z.sqrt();
    if r.re == 0.0 && r.im < 0.0 {
        -r
    } else {
        r
    }
}

/// Greedy nearest-conjugate pairing. Returns the involution and the largest
/// pairing distance used.
fn conjugate_pairing(mu: &[C64]) -> (Vec<usize>, f64) {
    let n = mu.len();
    let mut cand = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            cand.push(((mu[i] - mu[j].conj()).norm(), i, j));
        }
    }
    cand.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut pairing = vec![usize::MAX; n];
    let mut worst: f64 = 0.0;
    for (d, i, j) in cand {
        if pairing[i] == usize::MAX && pairing[j] == usize::MAX {
            pairing[i] = j;
            pairing[j] = i;
            worst = worst.max(d);
        }
    }
    (pairing, worst)
}

/// Normal-mode frequencies of `M(ig)` with their conjugate pairing.
pub fn mode_frequencies(chain: &OscillatorChain) -> Result<NormalModeSpectrum> {
    let m = quadratic_form(chain);
    let eig = eig_tridiag_complex_symmetric(&m.diagonal(), &m.superdiagonal())?;
    let mu = eig.values;
    let scale = mu.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tol = PAIRING_RTOL * scale;

    let (pairing, _) = conjugate_pairing(&mu);
    for (k, &p) in pairing.iter().enumerate() {
        let d = (mu[k] - mu[p].conj()).norm();
        if d > tol {
            return Err(Error::PairingFailed {
                mode: k,
                mu: mu[k],
                tol,
            });
        }
    }
    let unstable = mu
        .iter()
        .zip(&pairing)
        .enumerate()
        .any(|(k, (m, &p))| p == k && m.re <= 0.0);
    let omega_modes = mu.iter().map(|&m| principal_sqrt(m)).collect();
    Ok(NormalModeSpectrum {
        mu,
        omega_modes,
        pairing,
        unstable,
    })
}

/// Lattice energy `Σ_k (n_k + ½) Ω_k`.
pub fn level_energy(spec: &NormalModeSpectrum, idx: &MultiIndex) -> Result<C64> {
    spec.check_stable()?;
    if idx.len() != spec.n_modes() {
        return Err(Error::DimensionMismatch {
            expected: spec.n_modes(),
            got: idx.len(),
        });
    }
    Ok(spec
        .omega_modes
        .iter()
        .zip(idx.quanta())
        .map(|(w, &n)| w * (f64::from(n) + 0.5))
        .sum())
}

fn reality_tol(e: C64) -> f64 {
    REALITY_RTOL * (1.0 + e.re.abs())
}

/// Classifies a level as real or as one member of a conjugate pair, and
/// checks the verdict against the computed energy.
pub fn classify_level(spec: &NormalModeSpectrum, idx: &MultiIndex) -> Result<EigenLevel> {
    let energy = level_energy(spec, idx)?;
    let q = idx.quanta();
    let symmetric = (0..q.len()).all(|k| q[k] == q[spec.pairing[k]]);

    if symmetric {
        if energy.im.abs() > reality_tol(energy) {
            return Err(Error::ClassificationMismatch {
                level: idx.to_string(),
                detail: format!("pairing-symmetric level has Im E = {:e}", energy.im),
            });
        }
        return Ok(EigenLevel {
            idx: idx.clone(),
            energy,
            reality: Reality::Real,
            partner: None,
        });
    }

    let partner = MultiIndex((0..q.len()).map(|k| q[spec.pairing[k]]).collect());
    let partner_energy = level_energy(spec, &partner)?;
    if (partner_energy - energy.conj()).norm() > reality_tol(energy) * (1.0 + f64::from(idx.total())) {
        return Err(Error::ClassificationMismatch {
            level: idx.to_string(),
            detail: format!(
                "partner {partner} has E = {partner_energy}, expected conj({energy})"
            ),
        });
    }
    Ok(EigenLevel {
        idx: idx.clone(),
        energy,
        reality: Reality::ComplexPaired,
        partner: Some(partner),
    })
}

/// Every level with `Σ n_k ≤ k_max`, sorted by `(Re E, Im E)`.
pub fn spectrum_lattice(spec: &NormalModeSpectrum, k_max: usize) -> Result<Vec<EigenLevel>> {
    spec.check_stable()?;
    let levels = multi_indices_up_to(spec.n_modes(), k_max)
        .iter()
        .map(|idx| classify_level(spec, idx))
        .collect::<Result<Vec<_>>>()?;
    let energies: Vec<C64> = levels.iter().map(|l| l.energy).collect();
    let order = spectrum_order(&energies);
    let mut slots: Vec<Option<EigenLevel>> = levels.into_iter().map(Some).collect();
    Ok(order
        .into_iter()
        .map(|i| slots[i].take().expect("permutation visits each level once"))
        .collect())
}
