use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn oscsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oscsym"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// Data rows of a CSV report (comment lines and header skipped).
fn csv_rows(bytes: &[u8]) -> Vec<csv::StringRecord> {
    let text = String::from_utf8(bytes.to_vec()).unwrap();
    assert!(text.starts_with("# schema_version: 1\n"), "{text}");
    let body: String = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    csv::Reader::from_reader(body.as_bytes())
        .records()
        .map(Result::unwrap)
        .collect()
}

fn comment(bytes: &[u8], key: &str) -> String {
    let text = String::from_utf8(bytes.to_vec()).unwrap();
    let prefix = format!("# {key}: ");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no comment {key}"))
        .to_string()
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap()
}

#[test]
fn spectrum_examples() {
    let out = oscsym(&["spectrum", "--n", "2", "--omega", "1,1", "--g", "0.6", "--kmax", "1"]);
    assert_eq!(code(&out), 0);
    let rows = csv_rows(&out.stdout);
    assert_eq!(rows.len(), 3);
    assert_eq!(rows.iter().filter(|r| &r[3] == "Real").count(), 1);
    assert_eq!(rows.iter().filter(|r| &r[3] == "ComplexPaired").count(), 2);
    assert_eq!(&rows[0][0], "(0,0)");

    let out = oscsym(&["spectrum", "--omega", "1,1.5", "--g", "0", "--kmax", "2"]);
    for r in csv_rows(&out.stdout) {
        assert_eq!(&r[3], "Real");
        let q: Vec<f64> = r[0]
            .trim_matches(|c| c == '(' || c == ')')
            .split(',')
            .map(|s| s.parse().unwrap())
            .collect();
        let h0 = (q[0] + 0.5) + (q[1] + 0.5) * 1.5;
        assert!((r[1].parse::<f64>().unwrap() - h0).abs() < 1e-14);
        assert_eq!(r[2].parse::<f64>().unwrap(), 0.0);
    }

    let out = oscsym(&["spectrum", "--kmax", "0", "--g", "0.4"]);
    assert_eq!(csv_rows(&out.stdout).len(), 1);
}

#[test]
fn fock_exit_codes() {
    let pass = oscsym(&["fock", "--omega", "1,1", "--g", "0.3", "--cutoff", "16", "--levels", "6", "--tol", "1e-6"]);
    assert_eq!(code(&pass), 0);
    assert_eq!(comment(&pass.stdout, "pass"), "true");
    assert_eq!(csv_rows(&pass.stdout).len(), 6);

    let fail = oscsym(&["fock", "--omega", "1,1", "--g", "0.3", "--cutoff", "2", "--levels", "10"]);
    assert_eq!(code(&fail), 3);

    let free = oscsym(&["fock", "--omega", "1,1.3", "--g", "0", "--cutoff", "6", "--format", "json"]);
    assert_eq!(code(&free), 0);
    let doc = json(&free.stdout);
    assert!(doc["result"]["match"]["max_distance"].as_f64().unwrap() <= 1e-12);

    let too_big = oscsym(&["fock", "--n", "3", "--cutoff", "20"]);
    assert_eq!(code(&too_big), 2);
}

#[test]
fn symmetry_labels() {
    for (n, key, label) in [("2", "g8", "C4v"), ("3", "g8", "D2h"), ("5", "g4", "D2")] {
        let out = oscsym(&["symmetry", "--n", n, "--g", "0.4"]);
        assert_eq!(code(&out), 0);
        let doc = json(&out.stdout);
        assert_eq!(doc["result"][key]["label"], label, "N={n}");
        let gens = doc["result"]["generators"].as_array().unwrap();
        assert_eq!(gens.len(), 8);
        for g in gens {
            let is_w = g["name"].as_str().unwrap().starts_with('W');
            assert_eq!(g["time_reversed_invariant"], is_w);
            assert_eq!(g["commutant"], if is_w { "InSW" } else { "InG" });
        }
    }
    let csv = oscsym(&["symmetry", "--n", "4", "--format", "csv"]);
    assert_eq!(csv_rows(&csv.stdout).len(), 8);
    assert!(comment(&csv.stdout, "g8").ends_with("C4v"));
}

#[test]
fn perturb_second_order() {
    let out = oscsym(&["perturb", "--n", "2", "--omega", "1,1.41421356", "--level", "0,0", "--order", "4"]);
    assert_eq!(code(&out), 0);
    assert_eq!(comment(&out.stdout, "odd_order_check"), "true");
    let rows = csv_rows(&out.stdout);
    assert_eq!(rows.len(), 5);
    let e2: f64 = rows[2][1].parse().unwrap();
    assert!((e2 + 0.0732233).abs() < 5e-8, "{e2}");

    let degenerate = oscsym(&["perturb", "--omega", "1,1", "--level", "2,0", "--format", "json"]);
    assert_eq!(code(&degenerate), 0);
    let doc = json(&degenerate.stdout);
    assert!(doc["result"]["series"].is_null());
    assert_eq!(doc["result"]["prediction"]["verdict"], "PredictComplex");

    let unsupported = oscsym(&["perturb", "--omega", "1,2", "--level", "2,0"]);
    assert_eq!(code(&unsupported), 2);
    let near_cutoff = oscsym(&["perturb", "--omega", "1,1.5", "--level", "3,0", "--order", "4", "--cutoff", "5"]);
    assert_eq!(code(&near_cutoff), 2);
}

#[test]
fn scan_frontier() {
    let out = oscsym(&[
        "scan", "--n", "2", "--omega", "1,1", "--axis1", "g:0:1:21", "--axis2", "omega_2:1:2:21",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(comment(&out.stdout, "axis1"), "g");
    let rows = csv_rows(&out.stdout);
    assert_eq!(rows.len(), 441);
    for r in rows {
        let g: f64 = r[0].parse().unwrap();
        let w2: f64 = r[1].parse().unwrap();
        let gstar = (w2 * w2 - 1.0) / 2.0;
        if (g - gstar).abs() < 1e-9 {
            continue;
        }
        let want = if g < gstar || g == 0.0 { "AllReal" } else { "SomeComplex" };
        assert_eq!(&r[2], want, "g={g} ω₂={w2}");
    }

    let refined = oscsym(&[
        "scan", "--axis1", "g:0:1:5", "--axis2", "omega_2:1.2:1.8:4", "--refine", "30", "--format", "json",
    ]);
    let doc = json(&refined.stdout);
    let points = doc["result"]["boundary_points"].as_array().unwrap();
    assert_eq!(points.len(), 3);
    for p in points {
        let w2 = p["axis2_value"].as_f64().unwrap();
        let lo = p["bracket"]["lo"].as_f64().unwrap();
        let hi = p["bracket"]["hi"].as_f64().unwrap();
        let gstar = (w2 * w2 - 1.0) / 2.0;
        assert!(lo <= gstar && gstar <= hi && hi - lo < 1e-8);
    }
}

#[test]
fn verify_is_deterministic() {
    let a = oscsym(&["verify", "--seed", "7"]);
    let b = oscsym(&["verify", "--seed", "7"]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    let doc = json(&a.stdout);
    assert_eq!(doc["result"]["checks"].as_array().unwrap().len(), 10);
    assert_ne!(oscsym(&["verify", "--seed", "8"]).stdout, a.stdout);
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn config_file_round_trip_and_override() {
    let dir = tempfile::tempdir().unwrap();
    let first = oscsym(&["spectrum", "--omega", "1,1.2", "--g", "0.7", "--kmax", "2", "--format", "json"]);
    let doc = json(&first.stdout);
    let cfg_path = dir.path().join("run.json");
    write(&cfg_path, &doc["config"].to_string());

    let again = oscsym(&["--config", cfg_path.to_str().unwrap()]);
    assert_eq!(code(&again), 0);
    assert_eq!(again.stdout, first.stdout);

    let overridden = oscsym(&["--config", cfg_path.to_str().unwrap(), "--g", "0.1"]);
    assert_eq!(json(&overridden.stdout)["config"]["g"], 0.1);

    let out_path = dir.path().join("levels.csv");
    let to_file = oscsym(&[
        "spectrum", "--config", cfg_path.to_str().unwrap(), "--format", "csv", "--output",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&to_file), 0);
    assert!(to_file.stdout.is_empty());
    assert_eq!(csv_rows(&std::fs::read(&out_path).unwrap()).len(), 6);
}

#[test]
fn usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = dir.path().join("unknown.json");
    write(&unknown, r#"{"command":"spectrum","colour":"red"}"#);
    let no_command = dir.path().join("none.json");
    write(&no_command, r#"{"n":2}"#);

    let cases: Vec<Vec<&str>> = vec![
        vec!["scan", "--axis1", "h:0:1:3"],
        vec!["scan", "--axis1", "g:0:1"],
        vec!["perturb", "--n", "2", "--level", "0,0,0"],
        vec!["spectrum", "--n", "3", "--omega", "1,1"],
        vec!["spectrum", "--format", "xml"],
        vec!["--config", unknown.to_str().unwrap()],
        vec!["--config", no_command.to_str().unwrap()],
        vec!["--config", "/nonexistent/config.json"],
        vec![],
    ];
    for args in cases {
        assert_eq!(code(&oscsym(&args)), 1, "{args:?}");
    }
    assert_eq!(code(&oscsym(&["--help"])), 0);
}
