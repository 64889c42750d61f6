//! Seeded invariant checks run by `oscsym verify`.

use anyhow::Result;
use oscsym_core::focksolver::{fock_spectrum, match_spectra, spectrum_negation_check};
use oscsym_core::hamiltonian::{enumerate_multi_indices, level_degeneracy};
use oscsym_core::linalg::is_conjugate_closed;
use oscsym_core::normalmodes::{classify_level, mode_frequencies, spectrum_lattice};
use oscsym_core::perturbation::{odd_order_check, rs_coefficients};
use oscsym_core::phasescan::{refine_boundary, two_by_two_boundary, Parameter};
use oscsym_core::symmetry::{
    antiunitary_invariance_check, canonical_generators, compose, g8, AntiunitaryOp, GroupLabel,
    SignedPermutation,
};
use oscsym_core::{MultiIndex, OscillatorChain, Reality};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::commands::{INVARIANCE_TOL, ODD_ORDER_TOL};
use crate::config::Resolved;
use crate::report::{num, Report, Table};

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    /// Largest deviation seen, for checks that measure one.
    pub max_error: Option<f64>,
    pub pass: bool,
    pub detail: String,
}

struct Check {
    name: &'static str,
    cases: usize,
    max_error: Option<f64>,
    failure: Option<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            max_error: None,
            failure: None,
        }
    }

    fn case(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn error(&mut self, e: f64) {
        self.max_error = Some(self.max_error.map_or(e, |m: f64| m.max(e)));
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            name: self.name,
            cases: self.cases,
            max_error: self.max_error,
            pass: self.failure.is_none(),
            detail: self.failure.unwrap_or_else(|| "ok".into()),
        }
    }
}

fn lattice_closure(rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let mut c = Check::new("lattice_conjugate_closed");
    for _ in 0..20 {
        let n = rng.random_range(2..=5);
        let g = rng.random_range(0.05..1.5);
        let chain = OscillatorChain::equal_frequency(n, g)?;
        let spec = mode_frequencies(&chain)?;
        let energies: Vec<_> = spectrum_lattice(&spec, 3)?.iter().map(|l| l.energy).collect();
        c.case(is_conjugate_closed(&energies, 1e-9), || format!("N={n} g={g}"));
    }
    Ok(c.finish())
}

fn ground_reality(rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let mut c = Check::new("ground_level_real");
    for _ in 0..30 {
        let n = rng.random_range(2..=6);
        let g = rng.random_range(0.0..1.0);
        let chain = OscillatorChain::equal_frequency(n, g)?;
        let spec = mode_frequencies(&chain)?;
        let lvl = classify_level(&spec, &MultiIndex::ground(n))?;
        c.error(lvl.energy.im.abs());
        c.case(lvl.reality == Reality::Real, || format!("N={n} g={g}"));
    }
    Ok(c.finish())
}

fn degeneracy_counts() -> CheckResult {
    let mut c = Check::new("level_degeneracy_count");
    for n in 1..=5 {
        for k in 0..=8 {
            let listed = enumerate_multi_indices(n, k).len() as u128;
            c.case(listed == level_degeneracy(n, k), || format!("N={n} k={k}"));
        }
    }
    c.finish()
}

fn random_signed_perm(rng: &mut ChaCha8Rng, n: usize) -> Result<SignedPermutation> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let signs = (0..n).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect();
    Ok(SignedPermutation::new(perm, signs)?)
}

fn composition_matrices(rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let mut c = Check::new("composition_is_matrix_product");
    for _ in 0..200 {
        let n = rng.random_range(1..=8);
        let a = random_signed_perm(rng, n)?;
        let b = random_signed_perm(rng, n)?;
        let (ma, mb) = (a.matrix(), b.matrix());
        let prod: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| ma[i][k] * mb[k][j]).sum()).collect())
            .collect();
        c.case(compose(&a, &b)?.matrix() == prod, || format!("{a} · {b}"));
    }
    Ok(c.finish())
}

fn antiunitary_symmetry(rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let mut c = Check::new("time_reversed_w_invariance");
    for _ in 0..20 {
        let n = rng.random_range(2..=8);
        let g = rng.random_range(-2.0..2.0);
        let chain = OscillatorChain::equal_frequency(n, g)?;
        for (name, s) in canonical_generators(n) {
            if name.is_w() {
                let a = AntiunitaryOp::with_time_reversal(s);
                let ok = antiunitary_invariance_check(&a, &chain, INVARIANCE_TOL)?;
                c.case(ok, || format!("N={n} g={g} {name}T"));
            }
        }
    }
    Ok(c.finish())
}

fn group_labels() -> Result<CheckResult> {
    let mut c = Check::new("g8_label");
    for n in 2..=7 {
        let t = g8(n)?;
        let want = if n % 2 == 0 { GroupLabel::C4v } else { GroupLabel::D2h };
        c.case(t.order() == 8 && t.label == want, || format!("N={n}: {}", t.label));
    }
    Ok(c.finish())
}

fn odd_orders(rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let mut c = Check::new("odd_order_coefficients_vanish");
    for _ in 0..10 {
        let w2 = rng.random_range(1.1..1.9);
        let chain = OscillatorChain::new(2, vec![1.0, w2], 0.0)?;
        let level = MultiIndex(vec![rng.random_range(0..3), rng.random_range(0..3)]);
        let s = rs_coefficients(&chain, &level, 5, 8)?;
        for odd in s.coeffs.iter().skip(1).step_by(2) {
            c.error(odd.abs());
        }
        c.case(odd_order_check(&s, ODD_ORDER_TOL), || format!("ω₂={w2} {level}"));
    }
    Ok(c.finish())
}

fn phase_boundary(rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let mut c = Check::new("two_mode_phase_boundary");
    for _ in 0..20 {
        let wx = rng.random_range(1.0..2.0);
        let wy = rng.random_range(1.0..2.0);
        let base = OscillatorChain::new(2, vec![wx, wy], 0.0)?;
        let gstar = two_by_two_boundary(wx, wy);
        let b = refine_boundary(&base, Parameter::G, 0.0, 2.0, 4, 30)?;
        c.error((b.midpoint() - gstar).abs());
        c.case(b.contains(gstar), || format!("ω=({wx},{wy}) bracket [{}, {}]", b.lo, b.hi));
    }
    Ok(c.finish())
}

fn negation(rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let mut c = Check::new("spectrum_negation_symmetry");
    for _ in 0..4 {
        let chain = OscillatorChain::new(
            2,
            vec![rng.random_range(0.8..1.6), rng.random_range(0.8..1.6)],
            rng.random_range(0.05..1.0),
        )?;
        let ok = spectrum_negation_check(&chain, 8, 1e-8)?;
        c.case(ok, || format!("{chain:?}"));
    }
    Ok(c.finish())
}

fn fock_agreement(rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let mut c = Check::new("fock_matches_normal_modes");
    for _ in 0..3 {
        let g = rng.random_range(0.05..0.4);
        let chain = OscillatorChain::equal_frequency(2, g)?;
        let spec = mode_frequencies(&chain)?;
        let exact = spectrum_lattice(&spec, 5)?;
        let m = match_spectra(&fock_spectrum(&chain, 16)?, &exact, 6, 1e-6);
        c.error(m.max_distance);
        c.case(m.pass, || format!("g={g}: {:e}", m.max_distance));
    }
    Ok(c.finish())
}

pub fn run(cfg: &Resolved) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let checks = vec![
        lattice_closure(&mut rng)?,
        ground_reality(&mut rng)?,
        degeneracy_counts(),
        composition_matrices(&mut rng)?,
        antiunitary_symmetry(&mut rng)?,
        group_labels()?,
        odd_orders(&mut rng)?,
        phase_boundary(&mut rng)?,
        negation(&mut rng)?,
        fock_agreement(&mut rng)?,
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();

    let mut table = Table::new(&["check", "cases", "max_error", "pass", "detail"]);
    table.comment("seed", cfg.seed);
    for c in &checks {
        table.row(vec![
            c.name.to_string(),
            c.cases.to_string(),
            c.max_error.map(num).unwrap_or_default(),
            c.pass.to_string(),
            c.detail.clone(),
        ]);
    }
    let report = Report::new(
        &serde_json::json!({ "seed": cfg.seed, "checks": checks }),
        table,
    )?;
    Ok(if failed.is_empty() {
        report
    } else {
        report.fail(format!("failed checks: {}", failed.join(", ")))
    })
}
