use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use orderflow::json::{BayesReportJson, NetworkJson, SolveResultJson};

fn orderflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orderflow"))
        .args(args)
        .env_remove("ORDERFLOW_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn lp_export_has_one_variable_per_arc() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("io5.lp");
    let o = orderflow(&[
        "build",
        "--n",
        "5",
        "--kind",
        "io",
        "--format",
        "lp",
        "--out",
        path_str(&file),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let lp = fs::read_to_string(&file).unwrap();
    let vars: BTreeSet<&str> = lp
        .split(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
        .filter(|t| t.starts_with("f_"))
        .collect();
    assert_eq!(vars.len(), 810);
    assert_eq!(lp.matches(">= 0").count(), 810);
}

#[test]
fn json_and_dot_exports() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("wo4.json");
    let dot = dir.path().join("wo4.dot");
    assert_eq!(
        orderflow(&[
            "build",
            "--n",
            "4",
            "--kind",
            "wo",
            "--out",
            path_str(&json)
        ])
        .status
        .code(),
        Some(0)
    );
    assert_eq!(
        orderflow(&[
            "build",
            "--n",
            "4",
            "--kind",
            "wo",
            "--format",
            "dot",
            "--out",
            path_str(&dot)
        ])
        .status
        .code(),
        Some(0)
    );
    let net: NetworkJson = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!((net.nodes.len(), net.arcs.len()), (16, 65));
    assert_eq!(net.kind, "wo");
    assert_eq!(net.nodes[net.sink], "{0,1,2,3}");
    let proj = net.projection.unwrap();
    assert_eq!(proj.pairs.len(), 12);
    assert!(proj.rows.iter().flatten().all(|&a| a < 65));
    let text = fs::read_to_string(&dot).unwrap();
    assert_eq!(text.matches(" -> ").count(), 65);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    orderflow(&["build", "--n", "4", "--kind", "so", "--out", path_str(&a)]);
    orderflow(&["build", "--n", "4", "--kind", "so", "--out", path_str(&b)]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn verify_reports_published_vertex_counts() {
    let o = orderflow(&["verify", "--n", "4", "--kind", "so"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("distinct projected vertices: 183"));
    let o = orderflow(&["verify", "--n", "5", "--kind", "wo"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("distinct projected vertices: 541"));
    assert!(stdout(&o).ends_with("pass\n"));
}

#[test]
fn member_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let weak = dir.path().join("weak.json");
    // 0 and 1 tied at the bottom, then 2, then 3.
    fs::write(
        &weak,
        r#"{"n": 4, "pairs": [[0,2],[0,3],[1,2],[1,3],[2,3]]}"#,
    )
    .unwrap();
    let out = dir.path().join("member.json");
    let o = orderflow(&[
        "member",
        "--in",
        path_str(&weak),
        "--kind",
        "wo",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("inside"));
    let res: SolveResultJson = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(res.inside, Some(true));

    let cycle = dir.path().join("cycle.json");
    fs::write(
        &cycle,
        r#"{"n": 3, "pairs": [{"i":0,"j":1,"p":1},{"i":1,"j":2,"p":1},{"i":2,"j":0,"p":1}]}"#,
    )
    .unwrap();
    let o = orderflow(&["member", "--in", path_str(&cycle), "--kind", "lo"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("outside"));
    assert_eq!(
        orderflow(&[
            "member",
            "--in",
            path_str(&cycle),
            "--kind",
            "lo",
            "--n",
            "4"
        ])
        .status
        .code(),
        Some(1)
    );
}

#[test]
fn mle_commands() {
    let dir = tempfile::tempdir().unwrap();
    let zero = dir.path().join("zero.json");
    fs::write(&zero, r#"{"n": 3, "pairs": []}"#).unwrap();
    let out = dir.path().join("fit.json");
    let o = orderflow(&[
        "mle",
        "--in",
        path_str(&zero),
        "--kind",
        "io",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let fit: SolveResultJson = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(fit.objective, 0.0);
    assert_eq!(fit.log_likelihood, Some(0.0));
    let weights: f64 = fit.active.iter().map(|a| a.weight).sum();
    assert!((weights - 1.0).abs() <= 1e-12);

    let ties = dir.path().join("ties.json");
    fs::write(
        &ties,
        r#"{"n": 2, "pairs": [{"i":0,"j":1,"chose_j":3,"indifferent":1}]}"#,
    )
    .unwrap();
    let o = orderflow(&["mle", "--in", path_str(&ties), "--kind", "lo"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("indifference"));
    assert_eq!(
        orderflow(&["mle", "--in", path_str(&ties), "--kind", "wo"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn bayes_is_reproducible_and_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.json");
    fs::write(
        &data,
        r#"{"n": 3, "pairs": [{"i":0,"j":1,"chose_j":30,"chose_i":5},{"i":1,"j":2,"chose_j":25,"chose_i":10}]}"#,
    )
    .unwrap();
    let run = |name: &str, extra: &[&str]| {
        let out = dir.path().join(name);
        let mut args = vec![
            "bayes",
            "--in",
            path_str(&data),
            "--kind",
            "lo",
            "--samples",
            "2000",
        ];
        args.extend_from_slice(extra);
        args.extend_from_slice(&["--out", path_str(&out)]);
        let o = Command::new(env!("CARGO_BIN_EXE_orderflow"))
            .args(&args)
            .env_remove("ORDERFLOW_SEED")
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        (fs::read(&out).unwrap(), o)
    };
    let (first, o1) = run("a.json", &["--seed", "7"]);
    let (second, o2) = run("b.json", &["--seed", "7"]);
    assert_eq!(first, second);
    let strip = |o: &Output| {
        stdout(o)
            .lines()
            .filter(|l| !l.starts_with("wrote"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&o1), strip(&o2));
    let report: BayesReportJson = serde_json::from_slice(&first).unwrap();
    assert_eq!((report.samples, report.seed), (2000, 7));
    assert!(report.bayes_factor.unwrap() > 0.0);

    let out = dir.path().join("env.json");
    let o = Command::new(env!("CARGO_BIN_EXE_orderflow"))
        .args([
            "bayes",
            "--in",
            path_str(&data),
            "--kind",
            "lo",
            "--samples",
            "2000",
            "--out",
            path_str(&out),
        ])
        .env("ORDERFLOW_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read(&out).unwrap(), first);
    let (flag_wins, _) = {
        let out = dir.path().join("flag.json");
        let o = Command::new(env!("CARGO_BIN_EXE_orderflow"))
            .args([
                "bayes",
                "--in",
                path_str(&data),
                "--kind",
                "lo",
                "--samples",
                "2000",
                "--seed",
                "8",
                "--out",
                path_str(&out),
            ])
            .env("ORDERFLOW_SEED", "7")
            .output()
            .unwrap();
        (fs::read(&out).unwrap(), o)
    };
    let report: BayesReportJson = serde_json::from_slice(&flag_wins).unwrap();
    assert_eq!(report.seed, 8);
}

#[test]
fn prior_against_prior_without_data() {
    let o = orderflow(&["bayes", "--n", "3", "--kind", "wo", "--samples", "500"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("bayes factor: "));
}

#[test]
fn io_errors_exit_one() {
    let o = orderflow(&["mle", "--in", "/nonexistent/data.json", "--kind", "wo"]);
    assert_eq!(o.status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "not json").unwrap();
    assert_eq!(
        orderflow(&["member", "--in", path_str(&bad), "--kind", "wo"])
            .status
            .code(),
        Some(1)
    );
    let o = orderflow(&[
        "build",
        "--n",
        "3",
        "--kind",
        "lo",
        "--out",
        "/nonexistent/dir/x.json",
    ]);
    assert_eq!(o.status.code(), Some(1));
}
