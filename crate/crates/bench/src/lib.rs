//! Fixtures shared by the benchmarks.

use oscsym_core::focksolver::build_fock_hamiltonian;
use oscsym_core::phasescan::Axis;
use oscsym_core::{ComplexMatrix, OscillatorChain};

/// Equal-frequency chain in the broken phase.
pub fn equal_chain(n: usize) -> OscillatorChain {
    OscillatorChain::equal_frequency(n, 0.3).expect("valid chain")
}

/// Dense Fock matrix of [`equal_chain`] truncated at `cutoff`.
pub fn fock_matrix(n: usize, cutoff: u32) -> ComplexMatrix {
    build_fock_hamiltonian(&equal_chain(n), cutoff)
        .expect("within the dimension limit")
        .matrix
}

/// The `(g, ω₂)` grid of the two-oscillator phase diagram.
pub fn phase_grid(points: usize) -> (OscillatorChain, Axis, Axis) {
    let base = OscillatorChain::equal_frequency(2, 0.0).expect("valid chain");
    let g = Axis::linspace("g", 0.0, 1.0, points).expect("valid axis");
    let w2 = Axis::linspace("omega_2", 1.0, 2.0, points).expect("valid axis");
    (base, g, w2)
}
