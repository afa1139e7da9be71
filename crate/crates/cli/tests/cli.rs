use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn flagcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flagcert")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn certificate(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/certificates").join(name)
}

const PAW: &str = "{ab, ac, bc, cd}_{4, 0}";

#[test]
fn verify_exit_codes() {
    let ok = flagcert(&["verify", certificate("paw.cert").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("verdict: accepted"));
    assert!(stdout(&ok).contains("classes: 34, negative slacks: 0"));

    let bad = flagcert(&["verify", certificate("paw_printed.cert").to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("{}_{5, 0}: -1/96"));

    assert_eq!(flagcert(&["verify", "/nonexistent/cert"]).status.code(), Some(3));
    assert_eq!(flagcert(&["verify"]).status.code(), Some(2));
}

#[test]
fn all_slacks_are_listed_on_request() {
    let o = flagcert(&["verify", "--all-slacks", certificate("paw.cert").to_str().unwrap()]);
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("slack ")).count(), 34);
}

#[test]
fn enumerate_counts() {
    for (n, count) in [(1, 1), (2, 2), (3, 4), (4, 11), (5, 34)] {
        let o = flagcert(&["enumerate", "--n", &n.to_string()]);
        assert_eq!(stdout(&o).lines().count(), count);
    }
    let flags = flagcert(&["enumerate", "--sigma", "{}_{1, 1}", "--m", "3"]);
    assert_eq!(stdout(&flags).lines().count(), 6);
    assert_eq!(flagcert(&["enumerate", "--n", "8"]).status.code(), Some(2));
    assert_eq!(flagcert(&["enumerate", "--sigma", "{}_{2, 1}", "--m", "3"]).status.code(), Some(2));
    assert_eq!(flagcert(&["enumerate"]).status.code(), Some(2));
}

#[test]
fn densities_of_constructions() {
    let paw = flagcert(&["density", PAW, "complement(k2uk2)"]);
    assert_eq!(stdout(&paw).trim(), "1/32 (0.03125)");
    let k112 = flagcert(&["density", "{ab, ac, ad, bc, bd}_{4, 0}", "k5"]);
    assert_eq!(stdout(&k112).trim(), "12/125 (0.096)");
    let hom = flagcert(&["density", "{ab, bc, ac}_{3, 0}", "const 1/2", "--kind", "hom"]);
    assert!(stdout(&hom).starts_with("1/8 "));
    assert_eq!(flagcert(&["density", "{1a}_{2, 1}", "k2"]).status.code(), Some(2));
    assert_eq!(flagcert(&["density", PAW, "nonsense"]).status.code(), Some(3));
}

#[test]
fn graphon_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("half.graphon");
    std::fs::write(&path, "parts: 1/2 1/2\n0 1\n1 0\n").unwrap();
    let o = flagcert(&["density", "{ab}_{2, 0}", path.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "1/2 (0.5)");
}

#[test]
fn paley_and_oracle() {
    let o = flagcert(&["paley", "13"]);
    assert!(stdout(&o).contains("QR(13): 13 vertices, 39 edges"));
    assert!(stdout(&o).contains("t_ind(P4; w_QR(13)) = 30/2197"));
    assert!(stdout(&o).contains("not reproduced"));
    assert_eq!(flagcert(&["paley", "7"]).status.code(), Some(2));
    assert_eq!(flagcert(&["paley", "29"]).status.code(), Some(2));
    let o = flagcert(&["oracle", "{ab}_{2, 0}", "{ab, bc}_{3, 0}"]);
    assert!(stdout(&o).contains("induced copies: 2"));
    assert!(stdout(&o).contains("2/3"));
    let o = flagcert(&["oracle", "{ab, bc}_{3, 0}", "paley5"]);
    assert!(stdout(&o).contains("induced copies: 5"));
}

#[test]
fn build_ingest_round() {
    let dir = tempfile::tempdir().unwrap();
    let sdpa = dir.path().join("paw.sdpa");
    let o = flagcert(&["build-sdp", PAW, "--n", "5", "--l", "1", "--out", sdpa.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&sdpa).unwrap();
    assert!(text.starts_with("34\n3\n6 -34 -2\n"));
    let manifest = dir.path().join("paw.sdpa.manifest.json");
    assert!(manifest.exists());

    // a dual point with zero flag blocks (the trivial bound 1), paired with an
    // x whose objective matches it
    let c: Vec<f64> = text.lines().nth(3).unwrap().split_whitespace().map(|t| t.parse().unwrap()).collect();
    let j = c.iter().position(|&v| v != 0.0).unwrap();
    let x: Vec<String> = (0..34).map(|i| if i == j { (-1.0 / c[j]).to_string() } else { "0".into() }).collect();
    let mut sol = vec![x.join(" ")];
    sol.push("2 3 2 2 1".into());
    for i in 1..=34 {
        sol.push(format!("2 2 {i} {i} 0.5"));
    }
    let sol_path = dir.path().join("paw.sol");
    std::fs::write(&sol_path, sol.join("\n")).unwrap();
    let cert = dir.path().join("paw.cert");
    let o = flagcert(&["ingest", sol_path.to_str().unwrap(), "--manifest", manifest.to_str().unwrap(), "--out", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("bound: 1.0"));

    let pins = dir.path().join("pins");
    std::fs::write(&pins, "# trivial\nbound 1\n").unwrap();
    let rounded = dir.path().join("rounded.cert");
    let o = flagcert(&["round", cert.to_str().unwrap(), "--den-cap", "100", "--pin", pins.to_str().unwrap(), "--out", rounded.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = flagcert(&["verify", rounded.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    assert_eq!(flagcert(&["round", cert.to_str().unwrap(), "--den-cap", "0", "--out", rounded.to_str().unwrap()]).status.code(), Some(2));
    let truncated = dir.path().join("bad.sol");
    std::fs::write(&truncated, "0 0\n").unwrap();
    let o = flagcert(&["ingest", truncated.to_str().unwrap(), "--manifest", manifest.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}

#[test]
fn build_rejects_bad_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.sdpa");
    let out = out.to_str().unwrap();
    assert_eq!(flagcert(&["build-sdp", PAW, "--n", "8", "--l", "1", "--out", out]).status.code(), Some(2));
    assert_eq!(flagcert(&["build-sdp", PAW, "--n", "5", "--l", "6", "--out", out]).status.code(), Some(2));
    assert_eq!(flagcert(&["build-sdp", PAW, "--n", "5", "--l", "0", "--out", out]).status.code(), Some(2));
    assert_eq!(flagcert(&["build-sdp", PAW, "--n", "3", "--l", "1", "--out", out]).status.code(), Some(3));
}

#[test]
fn emission_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.sdpa");
    let b = dir.path().join("b.sdpa");
    for p in [&a, &b] {
        assert!(flagcert(&["build-sdp", "goodman", "--n", "4", "--l", "2", "--out", p.to_str().unwrap()]).status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn solver_command_failure_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.sdpa");
    let o = flagcert(&["build-sdp", PAW, "--n", "5", "--l", "1", "--out", out.to_str().unwrap(), "--solver-cmd", "false {in} {out}"]);
    assert_eq!(o.status.code(), Some(3));
}
