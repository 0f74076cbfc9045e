use std::path::Path;
use std::process::Command;

fn confined_ks() -> Command {
    Command::new(env!("CARGO_BIN_EXE_confined-ks"))
}

#[test]
fn minimal_spec_writes_outputs_and_passes_strict() {
    let out = tempfile::tempdir().unwrap();
    let spec = Path::new(env!("CARGO_MANIFEST_DIR")).join("specs/minimal.toml");
    let status = confined_ks().args(["--strict", "--threads", "1", "--spec"]).arg(&spec).arg("--out").arg(out.path()).status().unwrap();
    assert!(status.success());
    let rows = confined_ks_cli::read_scan(&out.path().join("scans/He_1s2_1S_x-only.csv")).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].r_c, 1.0);
    assert!(rows[0].bbm_margin > 0.0);
    let failures = std::fs::read_to_string(out.path().join("failures.csv")).unwrap();
    assert_eq!(failures.lines().count(), 1);
    assert!(out.path().join("plots/He_1s2_1S_x-only.dat").exists());
}

#[test]
fn uncovered_reference_rows_fail_strict_mode() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.toml");
    std::fs::write(
        &spec,
        "[regress]\nreference = \"builtin\"\nsources = [\"Table I\"]\n\n[[scan]]\nspecies = [\"Be2+\"]\nstates = [\"ground\"]\nvariants = [\"X-only\"]\nradii = [0.5]\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let run = |strict: bool| {
        let mut cmd = confined_ks();
        cmd.arg("--spec").arg(&spec).arg("--out").arg(&out);
        if strict {
            cmd.arg("--strict");
        }
        cmd.output().unwrap()
    };
    let relaxed = run(false);
    assert!(relaxed.status.success());
    let text = String::from_utf8_lossy(&relaxed.stdout);
    assert!(text.contains("1 pass") && text.contains("not run"), "{text}");
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("regression.json")).unwrap()).unwrap();
    let row = report["rows"].as_array().unwrap().iter().find(|r| r["status"] == "pass").unwrap();
    assert_eq!(row["s_r"]["reference"], -1.725);
    assert_eq!(run(true).status.code(), Some(1));
}

#[test]
fn invalid_spec_is_reported_with_its_line() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("bad.toml");
    std::fs::write(&spec, "[[scan]]\nspecies = [\"He\"]\nstates = [\"ground\"]\nvariants = [\"X-only\"]\nradii = [-1.0]\n").unwrap();
    let output = confined_ks().arg("--spec").arg(&spec).arg("--out").arg(dir.path().join("out")).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    let err = String::from_utf8_lossy(&output.stderr);
    assert!(err.contains("scan.radii") && err.contains("line 5"), "{err}");
}
