use std::path::Path;
use std::process::Command;

use npc2_cli::{run, EXIT_NO, EXIT_OK, EXIT_UNKNOWN, EXIT_USAGE};

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn npc2(args: &[&str], stdin: &str) -> Out {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("npc2").chain(args.iter().copied());
    let code = run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    Out { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn generated(args: &[&str]) -> String {
    let mut a = vec!["generate"];
    a.extend_from_slice(args);
    let o = npc2(&a, "");
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    o.stdout
}

const TRIANGLE: &str = r#"{"vertices":[0,1,2],"triangles":[[0,1,2]]}"#;
const CYCLE4: &str = r#"{"vertices":[0,1,2,3],"edges":[[0,1],[1,2],[2,3],[0,3]]}"#;

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

/// The closed disk of the four octahedron triangles around `pole`.
fn hemisphere(pole: u32) -> String {
    let ring = [(1, 2), (2, 3), (3, 4), (1, 4)];
    let mut edges: Vec<String> = ring.iter().map(|(a, b)| format!("[{a},{b}]")).collect();
    edges.extend((1..=4).map(|i| format!("[{},{}]", pole.min(i), pole.max(i))));
    let tris: Vec<String> = ring.iter().map(|(a, b)| format!("[{pole},{a},{b}]")).collect();
    format!(
        r#"{{"parent":"oct.json","vertices":[{pole},1,2,3,4],"edges":[{}],"triangles":[{}]}}"#,
        edges.join(","),
        tris.join(",")
    )
}

#[test]
fn validate_exit_codes() {
    assert_eq!(npc2(&["validate"], TRIANGLE).code, EXIT_OK);
    let bad = npc2(&["validate"], r#"{"vertices":[0,1,2],"triangles":[[0,1,9]]}"#);
    assert_eq!(bad.code, EXIT_NO);
    assert!(bad.stdout.contains("invalid"));
    let garbled = npc2(&["validate"], "{\"vertices\": [0,\n 1,,]}");
    assert_eq!(garbled.code, EXIT_USAGE);
    assert!(garbled.stderr.contains("line 2"), "{}", garbled.stderr);
    let unknown_field = npc2(&["validate"], r#"{"vertices":[0],"faces":[]}"#);
    assert_eq!(unknown_field.code, EXIT_USAGE);
    assert!(unknown_field.stderr.contains("faces"));
}

#[test]
fn curvature_exit_codes() {
    assert_eq!(npc2(&["curvature"], &generated(&["octahedron"])).code, EXIT_NO);
    assert_eq!(npc2(&["curvature"], TRIANGLE).code, EXIT_OK);
    let torus = generated(&["torus_grid", "--n", "3"]);
    assert_eq!(npc2(&["curvature"], &torus).code, EXIT_UNKNOWN);
    assert_eq!(npc2(&["curvature", "--assume-flat-ok"], &torus).code, EXIT_OK);
    assert_eq!(npc2(&["curvature", "--tol", "-1"], TRIANGLE).code, EXIT_USAGE);
}

#[test]
fn curvature_machine_output() {
    let o = npc2(&["--format", "machine", "curvature"], &generated(&["octahedron"]));
    assert!(o.stdout.contains("\"schema_version\": 1"));
    assert!(o.stdout.contains("4.18879020478639"));
    assert!(o.stdout.contains("\"FAIL\""));
    assert!(o.stdout.contains("\"tolerance\": 1e-9"));
    let forest = npc2(&["--format", "machine", "curvature"], r#"{"vertices":[0,1],"edges":[[0,1]]}"#);
    assert!(forest.stdout.contains("\"infinity\""));
}

#[test]
fn cat0_exit_codes() {
    assert_eq!(npc2(&["cat0"], TRIANGLE).code, EXIT_OK);
    assert_eq!(npc2(&["cat0"], &generated(&["octahedron"])).code, EXIT_NO);
    assert_eq!(npc2(&["cat0"], CYCLE4).code, EXIT_NO);
    let disk = generated(&["disk_grid", "--n", "3"]);
    assert_eq!(npc2(&["cat0"], &disk).code, EXIT_UNKNOWN);
    assert_eq!(npc2(&["cat0", "--assume-flat-ok"], &disk).code, EXIT_OK);
}

#[test]
fn homology_and_pi1() {
    let o = npc2(&["--format", "machine", "homology"], &generated(&["octahedron"]));
    assert_eq!(o.code, EXIT_OK);
    let v: serde_like::Doc = serde_like::parse(&o.stdout);
    assert_eq!(v.betti(), [1, 0, 1]);
    let p = npc2(&["pi1"], &generated(&["torus_grid", "--n", "3"]));
    assert_eq!(p.code, EXIT_OK);
    assert!(p.stdout.contains("Z^2"));
    assert_eq!(npc2(&["pi1"], "not json").code, EXIT_USAGE);
}

/// Minimal extraction without pulling a JSON crate into the test.
mod serde_like {
    pub struct Doc(String);
    pub fn parse(s: &str) -> Doc {
        Doc(s.split_whitespace().collect())
    }
    impl Doc {
        pub fn betti(&self) -> [usize; 3] {
            let start = self.0.find("\"betti\":[").unwrap() + 9;
            let end = start + self.0[start..].find(']').unwrap();
            let v: Vec<usize> = self.0[start..end].split(',').map(|x| x.parse().unwrap()).collect();
            [v[0], v[1], v[2]]
        }
    }
}

#[test]
fn collapse_exit_codes() {
    let o = npc2(&["collapse"], &generated(&["disk_grid", "--n", "3"]));
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("certificate verified: true"));
    assert_eq!(npc2(&["collapse"], &generated(&["octahedron"])).code, EXIT_NO);
    // a one-state search budget cannot finish
    let disk = generated(&["disk_grid", "--n", "2"]);
    assert_eq!(npc2(&["collapse", "--budget-collapse-nodes", "1"], &disk).code, EXIT_UNKNOWN);
}

#[test]
fn generate_errors() {
    assert_eq!(npc2(&["generate", "klein"], "").code, EXIT_USAGE);
    assert_eq!(npc2(&["generate", "disk_grid"], "").code, EXIT_USAGE);
    assert_eq!(npc2(&["generate", "torus_grid", "--n", "2"], "").code, EXIT_USAGE);
    assert_eq!(npc2(&["frobnicate"], "").code, EXIT_USAGE);
    assert_eq!(npc2(&["--help"], "").code, EXIT_OK);
}

#[test]
fn generated_files_round_trip() {
    for args in [&["octahedron"][..], &["disk_grid", "--n", "2"], &["cone", "--k", "5"], &["path", "--k", "3"]] {
        let text = generated(args);
        let v = npc2(&["validate"], &text);
        assert_eq!(v.code, EXIT_OK, "{args:?}");
        let again = npc2(&["--format", "machine", "validate"], &text);
        assert_eq!(again.stdout, npc2(&["--format", "machine", "validate"], &text).stdout);
    }
}

#[test]
fn scan_with_listed_hemispheres() {
    let dir = tempfile::tempdir().unwrap();
    let oct = write(dir.path(), "oct.json", &generated(&["octahedron"]));
    let y = write(dir.path(), "upper.json", &hemisphere(0));
    let z = write(dir.path(), "lower.json", &hemisphere(5));
    let o = npc2(&["scan", &oct, "--y", &y, "--z", &z], "");
    assert_eq!(o.code, EXIT_NO, "{}", o.stderr);
    assert!(o.stdout.contains("violation"));
    // the parent is found through the subcomplex files
    let implicit = npc2(&["--format", "machine", "scan", "--y", &y, "--z", &z], "");
    assert_eq!(implicit.code, EXIT_NO, "{}", implicit.stderr);
    assert!(implicit.stdout.contains("\"verdict\": \"VIOLATION\""));
    // an open subcomplex is rejected
    let open = write(dir.path(), "open.json", r#"{"vertices":[1],"edges":[[1,2]]}"#);
    assert_eq!(npc2(&["scan", &oct, "--y", &open, "--z", &z], "").code, EXIT_USAGE);
    assert_eq!(npc2(&["scan", &oct, "--y", &y, "--z", &z, "--threads", "0"], "").code, EXIT_USAGE);
}

#[test]
fn scan_exit_codes() {
    assert_eq!(npc2(&["scan"], TRIANGLE).code, EXIT_OK);
    assert_eq!(npc2(&["scan", "--max-y", "6", "--max-z", "6"], &generated(&["disk_grid", "--n", "1"])).code, EXIT_OK);
    // unsimplified presentations and no witness words leave the equator open
    let dir = tempfile::tempdir().unwrap();
    let octp = write(dir.path(), "oct.json", &generated(&["octahedron"]));
    let y = write(dir.path(), "upper.json", &hemisphere(0));
    let z = write(dir.path(), "lower.json", &hemisphere(5));
    let args = ["scan", &octp, "--y", &y, "--z", &z, "--budget-tietze-moves", "0", "--budget-witness-length", "0"];
    let starved = npc2(&args, "");
    assert_eq!(starved.code, EXIT_UNKNOWN, "{}{}", starved.stdout, starved.stderr);
}

#[test]
fn scan_output_independent_of_threads() {
    let disk = generated(&["disk_grid", "--n", "1"]);
    let one = npc2(&["--format", "machine", "scan", "--threads", "1"], &disk);
    let four = npc2(&["--format", "machine", "scan", "--threads", "4"], &disk);
    assert_eq!(one.code, EXIT_OK);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn binary_pipes_and_budget_env() {
    let bin = env!("CARGO_BIN_EXE_npc2");
    let gen = Command::new(bin).args(["generate", "disk_grid", "--n", "2"]).output().unwrap();
    assert!(gen.status.success());
    let collapse = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(bin);
        cmd.arg("collapse").env_remove("NPC2_BUDGET_COLLAPSE_NODES");
        if let Some(n) = flag {
            cmd.args(["--budget-collapse-nodes", n]);
        }
        if let Some(n) = env {
            cmd.env("NPC2_BUDGET_COLLAPSE_NODES", n);
        }
        let mut child = cmd.stdin(std::process::Stdio::piped()).stdout(std::process::Stdio::piped()).spawn().unwrap();
        use std::io::Write;
        child.stdin.take().unwrap().write_all(&gen.stdout).unwrap();
        child.wait_with_output().unwrap().status.code().unwrap()
    };
    assert_eq!(collapse(None, None), EXIT_OK);
    assert_eq!(collapse(Some("1"), None), EXIT_UNKNOWN);
    // flags win over the environment
    assert_eq!(collapse(Some("1"), Some("1000000")), EXIT_OK);
}
