use oscsym_core::focksolver::{fock_spectrum, match_spectra, spectrum_negation_check};
use oscsym_core::hamiltonian::enumerate_multi_indices;
use oscsym_core::linalg::is_conjugate_closed;
use oscsym_core::normalmodes::{classify_level, mode_frequencies, spectrum_lattice};
use oscsym_core::perturbation::{reality_predictor, rs_coefficients, Verdict};
use oscsym_core::phasescan::{classify_point, scan, two_by_two_boundary, Axis, PhaseLabel};
use oscsym_core::symmetry::{antiunitary_group, canonical_generators, conjugate_form, g8, GroupLabel};
use oscsym_core::{MultiIndex, OscillatorChain, QuadraticForm, Reality};
use proptest::prelude::*;

#[test]
fn fock_and_normal_modes_agree_for_unequal_frequencies() {
    let chain = OscillatorChain::new(2, vec![1.0, 1.6], 0.5).unwrap();
    let spec = mode_frequencies(&chain).unwrap();
    let exact = spectrum_lattice(&spec, 5).unwrap();
    let fock = fock_spectrum(&chain, 18).unwrap();
    let report = match_spectra(&fock, &exact, 8, 1e-6);
    assert!(report.pass, "{report:?}");
}

#[test]
fn complex_phase_fock_spectrum_has_conjugate_pairs() {
    let chain = OscillatorChain::new(2, vec![1.0, 1.2], 0.9).unwrap();
    assert_eq!(classify_point(&chain, 4).unwrap(), PhaseLabel::SomeComplex);
    let spec = mode_frequencies(&chain).unwrap();
    let exact = spectrum_lattice(&spec, 4).unwrap();
    let fock = fock_spectrum(&chain, 18).unwrap();
    assert!(match_spectra(&fock, &exact, 6, 1e-5).pass);
    let low: Vec<_> = fock.values.iter().copied().filter(|z| z.re < 4.0).collect();
    assert!(is_conjugate_closed(&low, 1e-6));
}

#[test]
fn series_and_exact_energy_agree_at_small_coupling() {
    let chain = OscillatorChain::new(3, vec![1.0, 2f64.sqrt(), 3f64.sqrt()], 0.05).unwrap();
    let spec = mode_frequencies(&chain).unwrap();
    for level in [MultiIndex(vec![0, 0, 0]), MultiIndex(vec![1, 0, 0]), MultiIndex(vec![0, 0, 1])] {
        let s = rs_coefficients(&chain, &level, 6, 8).unwrap();
        let exact = classify_level(&spec, &level).unwrap();
        assert_eq!(exact.reality, Reality::Real);
        assert!((exact.energy - s.partial_sum_imaginary(0.05, 6)).norm() < 1e-9, "{level}");
    }
}

#[test]
fn predictor_matches_exact_levels_n2() {
    let chain = OscillatorChain::equal_frequency(2, 0.25).unwrap();
    let spec = mode_frequencies(&chain).unwrap();
    let mut inconclusive = 0;
    for k in 0..=4 {
        for idx in enumerate_multi_indices(2, k) {
            let p = reality_predictor(&chain, &idx).unwrap();
            let reality = classify_level(&spec, &idx).unwrap().reality;
            match p.verdict {
                Verdict::PredictReal => assert_eq!(reality, Reality::Real),
                Verdict::PredictComplex => assert_eq!(reality, Reality::ComplexPaired),
                Verdict::Inconclusive => {
                    inconclusive += 1;
                    assert_eq!(idx.quanta()[0], idx.quanta()[1]);
                }
            }
        }
    }
    assert_eq!(inconclusive, 2);
}

#[test]
fn antiunitary_group_has_g8_structure() {
    for n in 2..=6 {
        let ga = antiunitary_group(n).unwrap();
        assert_eq!(ga.label, g8(n).unwrap().label);
        let want = if n % 2 == 0 { GroupLabel::C4v } else { GroupLabel::D2h };
        assert_eq!(ga.label, want);
    }
}

#[test]
fn scan_matches_closed_form_boundary() {
    let base = OscillatorChain::new(2, vec![1.0, 1.0], 0.0).unwrap();
    let a1 = Axis::linspace("g", 0.0, 1.6, 17).unwrap();
    let a2 = Axis::linspace("omega_2", 1.05, 1.95, 10).unwrap();
    let d = scan(&base, &a1, &a2, 4).unwrap();
    for (g, w2, label) in d.rows() {
        let want = if g < two_by_two_boundary(1.0, w2) {
            PhaseLabel::AllReal
        } else {
            PhaseLabel::SomeComplex
        };
        assert_eq!(label, want, "g={g} ω₂={w2}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn negated_coupling_gives_same_truncated_spectrum(
        w1 in 0.8f64..1.6,
        w2 in 0.8f64..1.6,
        g in 0.05f64..1.0,
    ) {
        let chain = OscillatorChain::new(2, vec![w1, w2], g).unwrap();
        prop_assert!(spectrum_negation_check(&chain, 8, 1e-8).unwrap());
    }

    #[test]
    fn time_reversed_flips_are_symmetries(
        n in 2usize..=8,
        w in 0.5f64..2.0,
        g in -2.0f64..2.0,
    ) {
        let chain = OscillatorChain::new(n, vec![w; n], g).unwrap();
        let m = QuadraticForm::for_coupling(&chain, chain.lambda());
        for (name, s) in canonical_generators(n) {
            let moved = conjugate_form(&m, &s, name.is_w()).unwrap();
            prop_assert!(moved.max_abs_diff(&m) == 0.0, "{name}");
        }
    }

    #[test]
    fn lattice_is_conjugate_closed(
        n in 2usize..=5,
        g in 0.05f64..1.5,
    ) {
        let chain = OscillatorChain::equal_frequency(n, g).unwrap();
        let spec = mode_frequencies(&chain).unwrap();
        let levels = spectrum_lattice(&spec, 3).unwrap();
        let energies: Vec<_> = levels.iter().map(|l| l.energy).collect();
        prop_assert!(is_conjugate_closed(&energies, 1e-9));
        let ground = classify_level(&spec, &MultiIndex::ground(n)).unwrap();
        prop_assert_eq!(ground.reality, Reality::Real);
    }
}
