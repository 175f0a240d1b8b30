use std::fs;
use std::process::{Command, Output};

fn tsl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsl")).args(args).output().expect("run tsl")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn inertia_reproduces_table_one() {
    for symbol in ["bidiagonal", "grcar", "fourth_diff"] {
        let out = stdout(&tsl(&["inertia", "--symbol", symbol, "--sizes", "100,200"]));
        assert_eq!(out, "n,plus,minus,zero,diff\n100,50,50,0,0\n200,100,100,0,0\n", "{symbol}");
    }
}

#[test]
fn cosine6_difference_is_two() {
    let out = stdout(&tsl(&["inertia", "--symbol", "cosine6", "--sizes", "6,100,200"]));
    let diffs: Vec<&str> = out.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(diffs, ["2", "2", "2"]);
}

#[test]
fn spectrum_gives_the_six_eigenvalues() {
    let expected = [
        -4.740938811152402,
        -2.740938811152401,
        0.335125603737887,
        2.335125603737887,
        4.405813207414513,
        6.405813207414513,
    ];
    let out = stdout(&tsl(&["spectrum", "--symbol", "cosine6", "--sizes", "6"]));
    let got: Vec<f64> = out.lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(got.len(), 6);
    for (g, e) in got.iter().zip(expected) {
        assert!((g - e).abs() < 1e-9, "{g} vs {e}");
    }
}

#[test]
fn unknown_symbol_and_command_exit_two() {
    let out = tsl(&["spectrum", "--symbol", "nosuch"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nosuch"));
    assert!(out.stdout.is_empty());

    let out = tsl(&["frobnicate", "--symbol", "grcar"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn config_errors_exit_two() {
    assert_eq!(tsl(&["inertia", "--symbol", "grcar", "--sizes", "0"]).status.code(), Some(2));
    assert_eq!(tsl(&["spectrum", "--symbol", "grcar", "--family", "nope"]).status.code(), Some(2));
    assert_eq!(tsl(&["spectrum", "--symbol", "grcar", "--family", "toeplitz", "--mode", "eigen"]).status.code(), Some(2));
    assert_eq!(tsl(&["inertia"]).status.code(), Some(2));
}

#[test]
fn singular_preconditioner_is_a_computation_error() {
    // 2 + 2cos vanishes at pi, so |C_n| is singular for even n
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("vanish.txt");
    fs::write(&path, "-1=1\n0=2\n1=1\n").unwrap();
    let out = tsl(&["precond", "--symbol-file", path.to_str().unwrap(), "--sizes", "8"]);
    assert_eq!(out.status.code(), Some(1), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn symbol_file_matches_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cos6.txt");
    fs::write(&path, "# 1 + 6 cos\n-1=3\n0=1\n1=3\n").unwrap();
    let from_file = stdout(&tsl(&["spectrum", "--symbol-file", path.to_str().unwrap(), "--sizes", "6"]));
    let builtin = stdout(&tsl(&["spectrum", "--symbol", "cosine6", "--sizes", "6"]));
    assert_eq!(from_file, builtin);
    let via_symbol = stdout(&tsl(&["spectrum", "--symbol", path.to_str().unwrap(), "--sizes", "6"]));
    assert_eq!(via_symbol, builtin);
}

#[test]
fn per_size_spectrum_files() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("grcar.csv");
    let out = tsl(&["spectrum", "--symbol", "grcar", "--sizes", "10,20", "--output", base.to_str().unwrap()]);
    assert!(out.status.success());
    for n in [10, 20] {
        let body = fs::read_to_string(dir.path().join(format!("grcar.n{n}.csv"))).unwrap();
        assert_eq!(body.lines().count(), n);
    }
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 5] = [
        &["spectrum", "--symbol", "fourth_diff", "--sizes", "40,50", "--format", "json"],
        &["solve", "--symbol", "bidiagonal", "--sizes", "32,64", "--seed", "7"],
        &["distcheck", "--symbol", "grcar", "--sizes", "16,32", "--grid", "4096", "--format", "json"],
        &["acs", "--symbol", "cosine6", "--format", "json"],
        &["precond", "--symbol", "bidiagonal", "--format", "json"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let mut bodies = Vec::new();
        for run in 0..2 {
            let path = dir.path().join(format!("case{i}.run{run}"));
            let mut full = args.to_vec();
            full.extend(["--output", path.to_str().unwrap()]);
            let out = tsl(&full);
            assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
            bodies.push(fs::read(&path).unwrap());
        }
        assert!(!bodies[0].is_empty());
        assert_eq!(bodies[0], bodies[1], "{args:?}");
    }
}

#[test]
fn seed_changes_the_right_hand_side() {
    let a = stdout(&tsl(&["solve", "--symbol", "grcar", "--sizes", "32", "--seed", "1", "--format", "json"]));
    let b = stdout(&tsl(&["solve", "--symbol", "grcar", "--sizes", "32", "--seed", "2", "--format", "json"]));
    assert_ne!(a, b);
}

#[test]
fn preconditioned_solve_converges_faster() {
    let out = stdout(&tsl(&["solve", "--symbol", "bidiagonal", "--sizes", "128"]));
    let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0][1], "none");
    assert_eq!(rows[1][1], "abs_circulant");
    let plain: usize = rows[0][2].parse().unwrap();
    let pre: usize = rows[1][2].parse().unwrap();
    assert!(pre < plain, "{pre} vs {plain}");
    assert!(rows.iter().all(|r| r[3] == "true"));
}

#[test]
fn quad_points_env_is_honoured() {
    let run = |points: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_tsl"))
            .args(["distcheck", "--symbol", "grcar", "--sizes", "16", "--format", "json"])
            .env("TSL_QUAD_POINTS", points)
            .output()
            .unwrap();
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        v["quad_points"].as_u64().unwrap()
    };
    assert_eq!(run("2048"), 2048);
    assert_eq!(run("512"), 512);
}
