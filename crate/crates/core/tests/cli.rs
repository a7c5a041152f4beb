use std::path::Path;
use std::process::{Command, Output};

use esd_core::analytic::MainParams;
use esd_core::channels::{evolve_scenario, Scenario};
use esd_core::cli::fmt_sig6;
use esd_core::measures::negativity;
use esd_core::state::DecayProbability;

fn esd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_esd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = esd(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(esd(&["--help"]).status.code(), Some(0));
    assert_eq!(esd(&["surface", "--bogus"]).status.code(), Some(1));
    assert_eq!(esd(&["surface", "--alpha2", "1.5"]).status.code(), Some(1));
    assert_eq!(
        esd(&[
            "boundaries",
            "--alpha2",
            "0.2",
            "--out",
            "/nonexistent/dir/b.json"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(esd(&["validate"]).status.code(), Some(0));
}

#[test]
fn surface_has_full_grid_and_stable_bytes() {
    let args = ["surface", "--alpha2", "0.2", "--scenario", "single"];
    let a = stdout(&args);
    assert_eq!(a.lines().count(), 1 + 101 * 101);
    assert_eq!(a, stdout(&args));

    // every field survives a parse and reformat unchanged
    for line in a.lines().skip(1) {
        for field in line.split(',') {
            assert_eq!(fmt_sig6(field.parse().unwrap()), field);
        }
    }
}

#[test]
fn pinned_slice_matches_direct_evolution() {
    let csv = stdout(&[
        "surface",
        "--alpha2",
        "0.2",
        "--scenario",
        "double",
        "--pn",
        "0.25",
        "--res",
        "3",
    ]);
    let first: Vec<f64> = csv
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|f| f.parse().unwrap())
        .collect();
    let pn = DecayProbability::new(0.25).unwrap();
    let rho = evolve_scenario(
        &MainParams::pure(0.2).unwrap().density(),
        &Scenario::double_not(pn),
        pn,
        DecayProbability::ZERO,
    )
    .unwrap();
    assert_eq!(first[0], 0.25);
    assert_eq!(first[1], 0.0);
    assert!((first[2] - negativity(&rho)).abs() < 1e-6);
    assert!((first[2] - 0.15).abs() < 1e-12);
}

#[test]
fn boundaries_json() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["boundaries", "--alpha2", "0.2"])).unwrap();
    let get = |k: &str| v[k].as_f64().unwrap();
    assert_eq!(get("p0"), 0.5);
    assert_eq!(get("pA_double"), 0.375);
    assert_eq!(get("pA_single"), 0.4);
    assert_eq!(get("pB_double"), 0.166667);
    assert_eq!(get("pB_single"), 0.166667);

    let v: serde_json::Value = serde_json::from_str(&stdout(&[
        "boundaries",
        "--family",
        "appendix-b",
        "--a",
        "0.5",
        "--b",
        "0.2",
        "--c",
        "0.1",
        "--d",
        "0.2",
        "--z",
        "0.3",
    ]))
    .unwrap();
    assert!(v["pB_double"].is_null());
    assert_eq!(v["pB_double_in_domain"], false);
    assert!(v["pB_double_raw"].as_f64().unwrap() < 0.0);
}

#[test]
fn atomic_write_leaves_only_the_target() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let path = out.to_str().unwrap();
    stdout(&["surface", "--alpha2", "0.2", "--res", "11", "--out", path]);
    stdout(&["surface", "--alpha2", "0.3", "--res", "11", "--out", path]);
    let names: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(names, [Path::new("s.csv").as_os_str()]);
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 122);
}
