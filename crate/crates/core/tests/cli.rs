//! End-to-end runs of the `packrigid` binary.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_packrigid"))
        .args(args)
        .current_dir(dir)
        .env_remove("PACKRIGID_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

const OCTAHEDRON: &str =
    "6 12\nouter 0 1 2\n0 1\n1 2\n0 2\n0 3\n0 4\n1 4\n1 5\n2 5\n2 3\n3 4\n4 5\n3 5\n";

#[test]
fn counterexample_carries_a_stress() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "counterexample",
            "--t",
            "2",
            "--out",
            "sq.json",
            "--svg",
            "sq.svg",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stdout(&out));
    let out = run(
        &["stress", "--packing", "sq.json", "--expect-stress"],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(stdout(&out).contains("equilibrium stress: [1.0, 1.0, -0.9999999999999998, -1.0]"));
    let svg = std::fs::read_to_string(dir.path().join("sq.svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
}

#[test]
fn pack_open_analyze_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("oct.txt"), OCTAHEDRON).unwrap();
    std::fs::write(
        dir.path().join("body.json"),
        r#"{"kind": "pnorm", "p": 3.0}"#,
    )
    .unwrap();
    // The octahedron minus three edges of a perfect matching of non-pinned contacts.
    std::fs::write(
        dir.path().join("keep.txt"),
        "6 9\n0 1\n1 2\n0 2\n0 3\n1 4\n2 5\n3 4\n4 5\n3 5\n",
    )
    .unwrap();
    let out = run(
        &[
            "pack",
            "--graph",
            "oct.txt",
            "--body",
            "body.json",
            "--out",
            "p.json",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stdout(&out));
    let out = run(
        &["analyze", "--packing", "p.json", "--json", "a.json"],
        dir.path(),
    );
    assert!(out.status.success());
    let analysis: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("a.json")).unwrap()).unwrap();
    assert_eq!(analysis["edges"], 12);
    assert_eq!(analysis["sparse_22"], false);

    let out = run(
        &[
            "open",
            "--packing",
            "p.json",
            "--keep-edges",
            "keep.txt",
            "--pin-vertices",
            "0 1 2",
            "--out",
            "o.json",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stdout(&out));
    let out = run(
        &[
            "analyze",
            "--packing",
            "o.json",
            "--expect-sparse",
            "--expect-independent",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stdout(&out));
    let out = run(
        &["render", "--packing", "o.json", "--out", "o.svg"],
        dir.path(),
    );
    assert!(out.status.success());
}

#[test]
fn failed_expectations_exit_non_zero() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("body.json"), r#"{"kind": "disc"}"#).unwrap();
    std::fs::write(
        dir.path().join("k4.txt"),
        "4 6\nouter 0 1 2\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n",
    )
    .unwrap();
    let out = run(
        &[
            "pack",
            "--graph",
            "k4.txt",
            "--body",
            "body.json",
            "--out",
            "k4.json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let out = run(
        &["analyze", "--packing", "k4.json", "--expect-independent"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("check independent: FAILED"));
}

#[test]
fn malformed_input_names_the_edge() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.txt"), "3 2\n0 1\n1 7\n").unwrap();
    std::fs::write(dir.path().join("body.json"), r#"{"kind": "disc"}"#).unwrap();
    let out = run(
        &[
            "pack",
            "--graph",
            "bad.txt",
            "--body",
            "body.json",
            "--out",
            "x.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("edge 1"), "{err}");
}

#[test]
fn trials_read_a_config_and_honour_the_seed_variable() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("cfg.toml"), "trials = 4\nn_max = 7\n").unwrap();
    let go = |seed: &str, out: &str| {
        Command::new(env!("CARGO_BIN_EXE_packrigid"))
            .args([
                "trials",
                "--config",
                "cfg.toml",
                "--out",
                out,
                "--control",
                "1",
            ])
            .current_dir(dir.path())
            .env("PACKRIGID_SEED", seed)
            .output()
            .unwrap()
    };
    let a = go("5", "a.json");
    let b = go("5", "b.json");
    let c = go("6", "c.json");
    assert!(a.status.success(), "{}", stdout(&a));
    assert!(b.status.success() && c.status.success());
    let read = |name: &str| std::fs::read_to_string(dir.path().join(name)).unwrap();
    assert_eq!(read("a.json"), read("b.json"));
    assert_ne!(read("a.json"), read("c.json"));
    assert!(read("a.json").contains("\"seed\": 5"));
}
