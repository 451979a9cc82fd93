//! End-to-end tests of the `hkahler` binary: exit codes, report schema,
//! skip bookkeeping and byte determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hkahler"))
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hkahler-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

const SMALL_GRID: &str = "0.1:0.9:2,-0.4:0.4:2,-0.5:0.5:2,-0.5:0.5:2";

#[test]
fn analyze_flat_passes_with_zero_kappa() {
    let pot = write_temp("flat.pot", "phi = z1*zb1 + z2*zb2\n");
    let out = run(&["analyze", pot.to_str().unwrap(), "--grid", SMALL_GRID]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["aggregate"]["verdict"], "pass");
    assert!(report["aggregate"]["notes"]["kappa_at_first_point"].as_f64().unwrap().abs() < 1e-12);
    // every check in the stderr summary is a key in the JSON
    for key in ["reality", "hermitian", "closedness", "ricci_crosscheck"] {
        assert!(
            report["aggregate"]["max_residuals"].get(key).is_some(),
            "missing {key}"
        );
    }
}

#[test]
fn analyze_reports_parse_error_with_position() {
    let pot = write_temp("bad.pot", "phi = z1*(\n");
    let out = run(&["analyze", pot.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 1"), "{stderr}");
    assert!(stderr.contains("column"), "{stderr}");
}

#[test]
fn analyze_degenerate_everywhere_exits_three() {
    let pot = write_temp("deg.pot", "phi = z1*zb1\n");
    let out = run(&["analyze", pot.to_str().unwrap(), "--grid", SMALL_GRID]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn hproject_rejects_flat_with_exit_four() {
    let pot = write_temp("flat2.pot", "phi = z1*zb1 + z2*zb2\n");
    let out = run(&["hproject", pot.to_str().unwrap(), "--grid", SMALL_GRID]);
    assert_eq!(out.status.code(), Some(4));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("not of generalized-equidistant shape"),
        "{stderr}"
    );
    assert!(stderr.contains("Killing residual"), "{stderr}");
}

#[test]
fn hproject_equidistant_passes_and_rho_zero_skips_at_origin() {
    let pot = write_temp("equi.pot", "family = equidistant\n");
    let out = run(&[
        "hproject",
        pot.to_str().unwrap(),
        "--rho",
        "0",
        "--point",
        "0,0,0,0",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rec = &report["points"][0];
    assert!(rec["skipped"].is_null());
    let reason = rec["skipped_checks"]["pair"].as_str().unwrap();
    assert!(reason.contains("degenerate"), "{reason}");
    // the non-degenerate checks were still verified
    assert!(rec["residuals"]["hpa"].as_f64().unwrap() < 1e-8);
}

#[test]
fn rho_zero_degenerates_the_a_tensor_on_the_whole_grid() {
    // with ρ = 0 the a-tensor is the rank-1 product ∂_αΦ·g_{1β̄}, so the
    // Sinyukov inversion is skipped everywhere while the remaining checks
    // still verify and the run passes
    let pot = write_temp("equi_rank1.pot", "family = equidistant\n");
    let out = run(&[
        "hproject",
        pot.to_str().unwrap(),
        "--rho",
        "0",
        "--grid",
        SMALL_GRID,
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for rec in report["points"].as_array().unwrap() {
        assert!(rec["skipped"].is_null());
        assert!(rec["skipped_checks"]["pair"].as_str().unwrap().contains("degenerate"));
        assert!(rec["residuals"]["hpa"].as_f64().unwrap() < 1e-8);
        assert!(rec["residuals"]["killing"].as_f64().unwrap() < 1e-12);
    }
    assert!(report["aggregate"]["pass"].get("pair").is_none());
}

#[test]
fn analyze_non_einstein_family_reports_defect_informationally() {
    let pot = write_temp("equi_analyze.pot", "family = equidistant\n");
    let out = run(&["analyze", pot.to_str().unwrap(), "--grid", SMALL_GRID]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // the defect is genuinely large and reported, but outside the verdict
    assert!(report["aggregate"]["max_residuals"]["einstein_defect"].as_f64().unwrap() > 0.1);
    assert!(report["aggregate"]["informational"]["einstein_defect"].is_string());
    assert!(report["aggregate"]["pass"].get("einstein_defect").is_none());
    assert_eq!(report["aggregate"]["verdict"], "pass");
}

#[test]
fn family_with_degenerate_w_exits_five() {
    let out = run(&["family", "generalized-equidistant", "--W", "x", "--F", "z2*zb2"]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn family_ricci_flat_passes() {
    let out = run(&[
        "family",
        "ricci-flat",
        "--A",
        "1",
        "--gamma",
        "1",
        "--grid",
        "0.2:1:3,-0.3:0.3:2,-0.4:0.4:2,-0.4:0.4:2",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["aggregate"]["max_residuals"]["det_constancy"].as_f64().unwrap() < 1e-10);
    assert!(report["aggregate"]["max_residuals"]["w_equation"].as_f64().unwrap() < 1e-12);
}

#[test]
fn family_ricci_flat_with_negative_gamma_is_pseudo_kahler() {
    // det g = 9A²γ/8 < 0: indefinite metric, log-det Ricci, filtered branch
    let out = run(&[
        "family",
        "ricci-flat",
        "--A",
        "1",
        "--gamma",
        "-1",
        "--grid",
        "0.6:1.4:3,-0.2:0.2:2,-0.5:0.5:3,-0.5:0.5:3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["aggregate"]["max_residuals"]["ricci_flat"].as_f64().unwrap() < 1e-8);
    assert!(report["aggregate"]["max_residuals"]["det_constancy"].as_f64().unwrap() < 1e-10);
}

#[test]
fn family_constant_hsc_reports_the_constant() {
    let out = run(&[
        "family",
        "constant-hsc",
        "--eps",
        "1",
        "--grid",
        "0.1:0.5:2,0:0:1,0:0.4:2,0:0:1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["aggregate"]["max_residuals"]["hsc_spread"].as_f64().unwrap() < 1e-8);
    assert!(report["aggregate"]["notes"]["hsc_constant"].as_f64().is_some());
}

#[test]
fn curve_on_equidistant_is_hplanar() {
    let pot = write_temp("equi2.pot", "family = equidistant\n");
    let out = run(&[
        "curve",
        pot.to_str().unwrap(),
        "--z0",
        "0,0,0,0",
        "--v0",
        "1,0,0.5,0",
        "--steps",
        "500",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["points"][0]["residuals"]["hplanarity"].as_f64().unwrap() < 1e-6);
    assert!(report["points"][0]["residuals"]["energy_drift"].as_f64().unwrap() < 1e-8);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let pot = write_temp("equi3.pot", "family = equidistant\n");
    let out1 = write_temp("d1.json", "");
    let out2 = write_temp("d2.json", "");
    for out_path in [&out1, &out2] {
        let out = run(&[
            "hproject",
            pot.to_str().unwrap(),
            "--rho",
            "0.5,1",
            "--jobs",
            "3",
            "--seed",
            "11",
            "--grid",
            SMALL_GRID,
            "--out",
            out_path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let a = std::fs::read(&out1).unwrap();
    let b = std::fs::read(&out2).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b, "reports differ between identical runs");
}

#[test]
fn stdout_report_equals_file_report() {
    let pot = write_temp("flat3.pot", "phi = z1*zb1 + z2*zb2\n");
    let out_file = write_temp("stdout_cmp.json", "");
    let to_stdout = run(&["analyze", pot.to_str().unwrap(), "--grid", SMALL_GRID]);
    let to_file = run(&[
        "analyze",
        pot.to_str().unwrap(),
        "--grid",
        SMALL_GRID,
        "--out",
        out_file.to_str().unwrap(),
    ]);
    assert_eq!(to_stdout.status.code(), Some(0));
    assert_eq!(to_file.status.code(), Some(0));
    let stdout_text = String::from_utf8(to_stdout.stdout).unwrap();
    let file_text = std::fs::read_to_string(&out_file).unwrap();
    assert_eq!(stdout_text.trim_end(), file_text.trim_end());
}

#[test]
fn grid_command_lists_domain_skips() {
    let pot = write_temp("rfneg.pot", "family = ricci-flat\nparam gamma = -1.0\n");
    let out = run(&[
        "grid",
        pot.to_str().unwrap(),
        "--grid",
        "0.1:0.3:2,0:0:1,0:0.9:3,0:0:1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let skips: Vec<bool> = report["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| !p["skipped"].is_null())
        .collect();
    assert!(skips.iter().any(|s| *s), "expected some branch-domain skips");
    assert!(skips.iter().any(|s| !*s), "expected some admissible points");
}
