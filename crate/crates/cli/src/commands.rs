use anyhow::{bail, Result};
use oscsym_core::focksolver::{build_fock_hamiltonian, fock_spectrum_of, match_spectra};
use oscsym_core::normalmodes::{mode_frequencies, spectrum_lattice};
use oscsym_core::perturbation::{odd_order_check, reality_predictor, rs_coefficients};
use oscsym_core::phasescan::scan_refined;
use oscsym_core::symmetry::{
    antiunitary_group, antiunitary_invariance_check, canonical_generators, commutant_class, g4, g8,
    AntiunitaryOp, GroupTable,
};
use oscsym_core::Error as CoreError;
use serde_json::{json, Value};

use crate::config::Resolved;
use crate::report::{num, Report, Table};

/// Odd-order coefficients must vanish to this relative tolerance.
pub const ODD_ORDER_TOL: f64 = 1e-10;

/// Entrywise tolerance for time-reversal invariance of the quadratic form.
pub const INVARIANCE_TOL: f64 = 1e-14;

pub fn spectrum(cfg: &Resolved) -> Result<Report> {
    let spec = mode_frequencies(&cfg.chain)?;
    let levels = spectrum_lattice(&spec, cfg.kmax)?;
    let mut table = Table::new(&["index", "re_E", "im_E", "reality", "partner"]);
    table.comment("k_max", cfg.kmax);
    for l in &levels {
        table.row(vec![
            l.idx.to_string(),
            num(l.energy.re),
            num(l.energy.im),
            format!("{:?}", l.reality),
            l.partner.as_ref().map(ToString::to_string).unwrap_or_default(),
        ]);
    }
    Report::new(&json!({ "modes": spec, "levels": levels }), table)
}

pub fn fock(cfg: &Resolved) -> Result<Report> {
    let h = build_fock_hamiltonian(&cfg.chain, cfg.cutoff)?;
    let fock = fock_spectrum_of(&h)?;
    let spec = mode_frequencies(&cfg.chain)?;
    // The n lowest levels all have Σn ≤ n − 1.
    let exact = spectrum_lattice(&spec, cfg.levels.saturating_sub(1))?;
    let m = match_spectra(&fock, &exact, cfg.levels, cfg.tol);

    let mut table = Table::new(&["index", "exact_re", "exact_im", "fock_re", "fock_im", "distance"]);
    table.comment("cutoff", cfg.cutoff);
    table.comment("dim", h.basis.dim());
    table.comment("tol", num(cfg.tol));
    table.comment("max_distance", num(m.max_distance));
    table.comment("pass", m.pass);
    for p in &m.pairs {
        table.row(vec![
            p.idx.to_string(),
            num(p.exact.re),
            num(p.exact.im),
            num(p.fock.re),
            num(p.fock.im),
            num(p.distance),
        ]);
    }
    let pass = m.pass;
    let why = format!(
        "max distance {:e} (tolerance {:e}), {} unmatched",
        m.max_distance,
        m.tol,
        m.unmatched.len()
    );
    let report = Report::new(
        &json!({ "cutoff": cfg.cutoff, "dim": h.basis.dim(), "match": m }),
        table,
    )?;
    Ok(if pass { report } else { report.fail(why) })
}

fn group_json(t: &GroupTable) -> Value {
    json!({
        "order": t.order(),
        "label": t.label.to_string(),
        "abelian": t.is_abelian(),
        "elements": t.elements.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "cayley": t.cayley,
    })
}

pub fn symmetry(cfg: &Resolved) -> Result<Report> {
    let n = cfg.chain.n_osc();
    let mut table = Table::new(&["generator", "perm", "signs", "commutant", "time_reversed_invariant"]);
    let mut generators = Vec::new();
    for (name, s) in canonical_generators(n) {
        let class = commutant_class(&s, &cfg.chain)?;
        let with_t = AntiunitaryOp::with_time_reversal(s.clone());
        let invariant = antiunitary_invariance_check(&with_t, &cfg.chain, INVARIANCE_TOL)?;
        let perm: Vec<usize> = s.perm().iter().map(|p| p + 1).collect();
        let join = |v: Vec<String>| v.join(" ");
        table.row(vec![
            name.to_string(),
            join(perm.iter().map(ToString::to_string).collect()),
            join(s.signs().iter().map(ToString::to_string).collect()),
            format!("{class:?}"),
            invariant.to_string(),
        ]);
        generators.push(json!({
            "name": name.to_string(),
            "action": s.to_string(),
            "perm": perm,
            "signs": s.signs(),
            "commutant": format!("{class:?}"),
            "time_reversed_invariant": invariant,
        }));
    }
    let (t4, t8, ta) = (g4(n)?, g8(n)?, antiunitary_group(n)?);
    table.comment("g4", format!("order {} label {}", t4.order(), t4.label));
    table.comment("g8", format!("order {} label {}", t8.order(), t8.label));
    table.comment("antiunitary_group", format!("order {} label {}", ta.order(), ta.label));
    let result = json!({
        "generators": generators,
        "g4": group_json(&t4),
        "g8": group_json(&t8),
        "antiunitary_group": group_json(&ta),
        "invariance_tol": INVARIANCE_TOL,
    });
    Report::new(&result, table)
}

pub fn perturb(cfg: &Resolved) -> Result<Report> {
    let prediction = match reality_predictor(&cfg.chain, &cfg.level) {
        Ok(p) => Some(p),
        Err(CoreError::Unsupported(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let series = match rs_coefficients(&cfg.chain, &cfg.level, cfg.order, cfg.cutoff) {
        Ok(s) => Some(s),
        Err(CoreError::DegenerateLevel { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    if prediction.is_none() && series.is_none() {
        bail!(
            "level {} is degenerate and the frequencies are unequal; no analysis is available",
            cfg.level
        );
    }
    let odd_ok = series.as_ref().map(|s| odd_order_check(s, ODD_ORDER_TOL));

    let mut table = Table::new(&["order", "coefficient"]);
    table.comment("level", &cfg.level);
    if let Some(p) = &prediction {
        table.comment("degenerate", p.degenerate);
        table.comment("first_order_shift", num(p.first_order_shift));
        table.comment("verdict", format!("{:?}", p.verdict));
    }
    if let Some(ok) = odd_ok {
        table.comment("odd_order_check", ok);
    }
    if let Some(s) = &series {
        for (j, c) in s.coeffs.iter().enumerate() {
            table.row(vec![j.to_string(), num(*c)]);
        }
    }
    let result = json!({
        "level": cfg.level,
        "series": series,
        "odd_order_check": odd_ok,
        "odd_order_tol": ODD_ORDER_TOL,
        "prediction": prediction,
    });
    let report = Report::new(&result, table)?;
    Ok(if odd_ok == Some(false) {
        report.fail("odd-order coefficients do not vanish")
    } else {
        report
    })
}

pub fn scan(cfg: &Resolved) -> Result<Report> {
    let a1 = cfg.axis1.to_axis()?;
    let a2 = cfg.axis2.to_axis()?;
    let d = scan_refined(&cfg.chain, &a1, &a2, cfg.kmax, cfg.refine)?;
    let mut table = Table::new(&["axis1", "axis2", "label"]);
    table.comment("axis1", a1.name);
    table.comment("axis2", a2.name);
    table.comment("k_max", cfg.kmax);
    for (x, y, label) in d.rows() {
        table.row(vec![num(x), num(y), label.to_string()]);
    }
    Report::new(&d, table)
}
