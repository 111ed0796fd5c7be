//! End-to-end checks of the binary: flag parsing, output shapes, and the
//! documented exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_indsub"))
}

struct Fixtures {
    dir: PathBuf,
}

impl Fixtures {
    fn new(tag: &str) -> Fixtures {
        let dir = std::env::temp_dir().join(format!("indsub-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Fixtures { dir }
    }

    fn write(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.dir.join(name);
        std::fs::write(&path, contents).unwrap();
        path
    }
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn ae_reports_both_engines() {
    let fx = Fixtures::new("ae");
    let prop = fx.write("bipartite.prop", "bipartite");
    let graph = fx.write("k3.txt", "3 3\n0 1\n0 2\n1 2\n");
    let out = bin()
        .args(["ae", "--property"])
        .arg(&prop)
        .arg("--graph")
        .arg(&graph)
        .args(["--p", "3"])
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert_eq!(v["naive"], "1");
    assert_eq!(v["mod_p"], 1);
    assert_eq!(v["p"], 3);
    assert_eq!(v["level"], 1);
}

#[test]
fn ae_rejects_non_fixed_points() {
    let fx = Fixtures::new("ae-bad");
    let prop = fx.write("bipartite.prop", "bipartite");
    let graph = fx.write("path.txt", "3 2\n0 1\n1 2\n");
    let out = bin()
        .args(["ae", "--property"])
        .arg(&prop)
        .arg("--graph")
        .arg(&graph)
        .args(["--p", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn lattice_csv_shape() {
    let out = bin()
        .args(["lattice", "--p", "11", "--m", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("level,orbit_set,edge_count,phi,residue"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 32);
    let mut counts = [0usize; 6];
    for row in rows {
        let level: usize = row.split(',').next().unwrap().parse().unwrap();
        counts[level] += 1;
    }
    assert_eq!(counts, [1, 5, 10, 10, 5, 1]);
}

#[test]
fn lattice_with_property_residues() {
    let fx = Fixtures::new("lattice");
    let prop = fx.write("independent.prop", "independent");
    let out = bin()
        .args(["lattice", "--p", "3", "--m", "1", "--property"])
        .arg(&prop)
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    // Two points: IS_3 (phi true) and K_3 (phi false, residue 1).
    assert!(text.contains("0,,0,true,1"));
    assert!(text.contains("1,0,3,false,1"));
}

#[test]
fn witness_prime_power_json() {
    let fx = Fixtures::new("witness");
    let prop = fx.write("independent.prop", "independent");
    let out = bin()
        .args(["witness", "--kind", "prime-power", "--property"])
        .arg(&prop)
        .args(["--p", "5", "--verify"])
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert_eq!(v["kind"], "duality");
    assert!(v["residue"].as_u64().unwrap() > 0);
    assert!(v["verified_treewidth"].as_u64().is_some());
}

#[test]
fn witness_refuses_non_monotone_property() {
    let fx = Fixtures::new("witness-bad");
    let prop = fx.write("clique.prop", "clique");
    let out = bin()
        .args(["witness", "--kind", "prime-power", "--property"])
        .arg(&prop)
        .args(["--p", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("edge-monotone"));
}

#[test]
fn reduce_matches_direct_count() {
    let fx = Fixtures::new("reduce");
    let prop = fx.write("bipartite.prop", "bipartite");
    let shift = fx.write("k2.txt", "2 1\n0 1\n");
    let graph = fx.write("c4.txt", "4 4\n0 1\n0 3\n1 2\n2 3\n");
    let out = bin()
        .args(["reduce", "--property"])
        .arg(&prop)
        .arg("--shift")
        .arg(&shift)
        .args(["--k", "2"])
        .arg("--graph")
        .arg(&graph)
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert_eq!(v["count"], "6");
    assert_eq!(v["method"], "reduction");
    assert_eq!(v["oracle_parameter"], 4);
    assert_eq!(v["oracle_calls"], 4);
}

#[test]
fn gadget_counts_two_cliques() {
    let fx = Fixtures::new("gadget");
    let f = fx.write("k22.txt", "4 4\n0 2\n0 3\n1 2\n1 3\n");
    let g = fx.write("k3.txt", "3 3\n0 1\n0 2\n1 2\n");
    let out = bin()
        .args(["gadget", "--f"])
        .arg(&f)
        .args(["--ell", "2"])
        .arg("--g")
        .arg(&g)
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert_eq!(v["count"], "3");
    // 2·2·3 + 4 - 4 = 12 vertices.
    assert_eq!(v["gadget_vertices"], 12);
}

#[test]
fn gadget_capacity_exit_code() {
    let fx = Fixtures::new("gadget-cap");
    let f = fx.write("k22.txt", "4 4\n0 2\n0 3\n1 2\n1 3\n");
    let g = fx.write("big.txt", "9 0\n");
    let out = bin()
        .args(["gadget", "--f"])
        .arg(&f)
        .args(["--ell", "2"])
        .arg("--g")
        .arg(&g)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_single_criterion() {
    let out = bin().args(["verify", "--criterion", "3"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("criterion  3 [PASS]"));
    let out = bin()
        .args(["verify", "--criterion", "99"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
