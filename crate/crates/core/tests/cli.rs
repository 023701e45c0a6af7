use std::path::Path;
use std::process::{Command, Output};

fn hyprobin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyprobin"))
        .args(args)
        .env("HYPROBIN_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const COARSE: [&str; 8] = ["--n-r", "16", "--n-theta", "64", "--refinements", "1", "--radial-elements", "128"];

#[test]
fn ball_eig_prints_both_solvers() {
    let o = hyprobin(&["ball-eig", "--n", "2", "--R", "1", "--beta", "-1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("-2.7915355"), "{text}");
    assert!(text.contains("shooting"));
}

#[test]
fn verify_thm1_writes_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let mut args = vec!["verify-thm1", "--r0", "1", "--mode", "2:0.05:0", "--beta", "-1", "--out", out.to_str().unwrap()];
    args.extend(COARSE);
    let o = hyprobin(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = hyprobin::verify::read_csv(std::fs::File::open(&out).unwrap()).unwrap();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].margin >= 0.0);
    assert_eq!(rows[0].theorem, "thm1");
}

#[test]
fn hypothesis_and_config_errors_exit_2() {
    let o = hyprobin(&["verify-thm4", "--mode", "3:0.05:0", "--beta", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("horospherically convex"));
    let o = hyprobin(&["verify-thm1", "--beta", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("theorems require beta != 0"));
    let o = hyprobin(&["domain-eig", "--n", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn lemma_violation_exits_3() {
    let o = hyprobin(&["verify-lemmas", "--mode", "2:0.05:0", "--t-samples", "5"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("VIOLATED"));
    let o = hyprobin(&["verify-lemmas", "--t-samples", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn help_lists_defaults() {
    let text = stdout(&hyprobin(&["sweep", "--help"]));
    for needle in ["[default: 512]", "[default: 48]", "[default: 192]", "[default: 2]", "[default: 2026]"] {
        assert!(text.contains(needle), "missing {needle} in\n{text}");
    }
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("family.json");
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn sweep_from_config_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"betas": [-1.0, 1.0], "seed": 5, "family": {"count": 3},
            "resolution": {"n_r": 16, "n_theta": 64, "refinements": 1, "radial_elements": 128}}"#,
    );
    let mut bytes = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("s{i}.csv"));
        let o = hyprobin(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()]);
        assert!(matches!(o.status.code(), Some(0 | 3)), "{}", stdout(&o));
        bytes.push(std::fs::read(out).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
    assert_eq!(String::from_utf8_lossy(&bytes[0]).lines().count(), 7);
}

#[test]
fn unknown_config_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"betas": [-1.0], "colour": 3}"#);
    let o = hyprobin(&["geometry", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`colour`"));
}

#[test]
fn json_output_and_mesh_dump() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.json");
    let mesh = dir.path().join("mesh.txt");
    let mut args = vec!["domain-eig", "--beta", "-1,1", "--format", "json", "--out", out.to_str().unwrap(), "--dump-mesh", mesh.to_str().unwrap()];
    args.extend(COARSE);
    let o = hyprobin(&args);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(out).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    let dump = std::fs::read_to_string(mesh).unwrap();
    let (verts, tris) = dump.split_once("\n\n").unwrap();
    assert_eq!(verts.lines().count(), 1 + 16 * 64);
    assert_eq!(tris.lines().count(), 64 * 31);
}

#[test]
fn tables_for_plotting() {
    let o = hyprobin(&["parallel", "--t-samples", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 5);
    let o = hyprobin(&["steiner", "--n", "3", "--offset", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ball"));
    let o = hyprobin(&["geometry", "--mode", "2:0.05:0"]);
    assert!(stdout(&o).contains("7.40198"));
}
