//! CLI contract: exit codes (0 success, 1 verification failure, 2 input
//! error) and byte-stable output for identical flags.

use std::process::Command;

fn cycat() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cycat"))
}

#[test]
fn enumerate_counts_clusters_of_z6() {
    let out = cycat()
        .args(["cluster", "enumerate", "--zn", "6"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["count"], 14);
}

#[test]
fn mcluster_count_is_fuss_catalan() {
    let out = cycat()
        .args(["mcluster", "count", "--m", "3", "--s", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "4");
}

#[test]
fn bad_poset_file_exits_two_with_violation() {
    let dir = std::env::temp_dir().join("cycat-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(
        &path,
        r#"{"kind":"table","elements":[1,2],"cocycle":[[1,1,2,1]]}"#,
    )
    .unwrap();
    let out = cycat()
        .args(["poset", "verify", "--file", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("NotReduced"), "diagnostic missing: {err}");
}

#[test]
fn missing_file_exits_two() {
    let out = cycat()
        .args(["poset", "verify", "--file", "/nonexistent/x.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn quiver_dot_output_is_deterministic() {
    let run = || {
        cycat()
            .args([
                "cluster",
                "quiver",
                "--zn",
                "6",
                "--cluster",
                "[[1,3],[1,4],[1,5]]",
                "--format",
                "dot",
            ])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let dot = String::from_utf8_lossy(&a.stdout);
    assert_eq!(dot.matches("->").count(), 2, "A3 path quiver: {dot}");
}

#[test]
fn mutate_fan_cluster() {
    let out = cycat()
        .args([
            "cluster",
            "mutate",
            "--zn",
            "6",
            "--cluster",
            "[[1,3],[1,4],[1,5]]",
            "--arc",
            "1,4",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["t_star"], serde_json::json!([3, 5]));
}

#[test]
fn verify_subset_passes_and_fault_injection_fails() {
    let ok = cycat()
        .args(["verify", "stable_cluster", "--max-n", "5"])
        .output()
        .unwrap();
    assert!(
        ok.status.success(),
        "{}",
        String::from_utf8_lossy(&ok.stdout)
    );
    let stdout = String::from_utf8_lossy(&ok.stdout);
    assert!(stdout.contains("PASS"));
    let bad = cycat()
        .args(["verify", "5", "--max-n", "5", "--inject-fault", "crossing"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn example_m5_svg_export() {
    let dir = std::env::temp_dir().join("cycat-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("m5.svg");
    let out = cycat()
        .args([
            "mcluster",
            "example-m5",
            "--format",
            "svg",
            "--out",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn decompose_via_files() {
    let dir = std::env::temp_dir().join("cycat-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("obj.json");
    // E(1,3) + E(2,5) over Z_6 assembled directly
    std::fs::write(
        &path,
        r#"{
          "poset": {"kind":"builder","name":"Zn","params":{"n":6}},
          "object": {
            "summands": [1,3,2,5],
            "d": [[0,1,[1]],[1,0,[1]],[2,3,[1]],[3,2,[1]]]
          }
        }"#,
    )
    .unwrap();
    let out = cycat()
        .args(["mf", "decompose", "--file", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let summands = v["summands_e"].as_array().unwrap();
    assert_eq!(summands.len(), 2);
}
