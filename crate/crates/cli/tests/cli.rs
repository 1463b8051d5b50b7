use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use kpeaked::control::{brute, ControlInstance, Problem};
use kpeaked::io::ElectionFile;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kpeaked"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const FIG2: &str = "candidates: c1 c2 c3 c4 c5 c6 c7 c8 c9 c10
axis: c1 c2 c3 c4 c5 c6 c7 c8 c9 c10
r: 4
distinguished: c1
k: 2
[registered]
1: c3 > c4 > c7 > c6 > c8 > c9 > c5 > c2 > c10 > c1
[unregistered]
";

#[test]
fn check_kpeaked_reports_two_peaks() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "fig2.txt", FIG2);
    let o = run(&["check-kpeaked", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("min_peaks=2"));
    let o = run(&["check-kpeaked", f.to_str().unwrap(), "--k", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn solve_exit_codes_match_the_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let mut yes = 0;
    for seed in 0..40u64 {
        let s = seed.to_string();
        let o = run(&[
            "gen", "election", "--problem", "av", "--m", "6", "--r", "3", "--k", "2", "--registered", "3",
            "--unregistered", "6", "--budget", "3", "--seed", &s,
        ]);
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        let f = write(dir.path(), &format!("e{seed}.txt"), &text);
        let inst = ElectionFile::parse(&text).unwrap().instance(Problem::Av, None).unwrap();
        let want = brute(&inst, 20).unwrap().answer;
        yes += want as usize;
        for algo in ["dp", "fpt", "brute"] {
            let o = run(&["solve", f.to_str().unwrap(), "--problem", "av", "--algo", algo]);
            assert_eq!(o.status.code(), Some(if want { 0 } else { 1 }), "seed {seed} {algo}");
            assert!(stdout(&o).contains(if want { "answer: yes" } else { "answer: no" }));
        }
    }
    assert!(yes > 0 && yes < 40, "{yes}");
}

#[test]
fn dp_refuses_three_peaks() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["gen", "election", "--problem", "av", "--k", "2", "--seed", "1"]);
    let f = write(dir.path(), "e.txt", &stdout(&o));
    let o = run(&["solve", f.to_str().unwrap(), "--problem", "av", "--algo", "dp", "--k", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("k <= 2"), "{err}");
    let o = run(&["solve", f.to_str().unwrap(), "--problem", "dc", "--algo", "fpt"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_lines_record_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["gen", "election", "--problem", "dv", "--m", "6", "--seed", "9", "--budget", "3"]);
    let f = write(dir.path(), "e.txt", &stdout(&o));
    let o = run(&["solve", f.to_str().unwrap(), "--problem", "dv", "--algo", "fpt", "--format", "json-lines"]);
    let line = stdout(&o);
    assert_eq!(line.lines().count(), 1);
    let v: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(v.as_object().unwrap().len(), 6);
    let at: Vec<usize> = ["problem", "algorithm", "answer", "witness", "budget_used", "nodes"]
        .iter()
        .map(|k| line.find(&format!("\"{k}\":")).unwrap())
        .collect();
    assert!(at.windows(2).all(|w| w[0] < w[1]), "{line}");
    let o = run(&[
        "solve", f.to_str().unwrap(), "--problem", "dv", "--algo", "fpt", "--format", "json-lines", "--timing",
    ]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(v.get("ms").is_some());
}

#[test]
fn witness_in_record_verifies() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..30u64 {
        let s = seed.to_string();
        let o = run(&["gen", "election", "--problem", "dv", "--m", "5", "--r", "2", "--budget", "3", "--seed", &s]);
        let text = stdout(&o);
        let f = write(dir.path(), "e.txt", &text);
        let o = run(&["solve", f.to_str().unwrap(), "--problem", "dv", "--algo", "fpt", "--format", "json-lines"]);
        let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
        if v["answer"] != "yes" {
            continue;
        }
        let file = ElectionFile::parse(&text).unwrap();
        let e = &file.election;
        let mut deleted = kpeaked::VoteMultiset::new();
        for entry in v["witness"]["votes"].as_array().unwrap() {
            let order = entry["ranking"]
                .as_array()
                .unwrap()
                .iter()
                .map(|n| e.id_of(n.as_str().unwrap()).unwrap())
                .collect();
            deleted.push(kpeaked::Vote::new(order, e.num_candidates()).unwrap(), entry["count"].as_u64().unwrap() as usize);
        }
        let inst = file.instance(Problem::Dv, None).unwrap();
        let ControlInstance::Dv(dv) = inst else { unreachable!() };
        assert!(kpeaked::control::verify_dv(&dv, &deleted));
    }
}

#[test]
fn reduce_triangle_writes_label() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "tri.txt", "graph 3 3\ne 0 1\ne 1 2\ne 0 2\n");
    let out = dir.path().join("tri_dv.txt");
    let o = run(&["reduce", "vc3-to-dv2", g.to_str().unwrap(), "--k", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let label = std::fs::read_to_string(dir.path().join("tri_dv.txt.label")).unwrap();
    assert_eq!(label.lines().next(), Some("expected=yes"));
    let o = run(&["solve", out.to_str().unwrap(), "--problem", "dv", "--algo", "brute"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["reduce", "vc3-to-dv2", g.to_str().unwrap(), "--k", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["solve", out.to_str().unwrap(), "--problem", "dv", "--algo", "fpt"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn interval_rep_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k4.txt", "graph 4 6\ne 0 1\ne 0 2\ne 0 3\ne 1 2\ne 1 3\ne 2 3\n");
    let o = run(&["interval-rep", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("verified: ok\n"));
    let star = write(dir.path(), "star.txt", "graph 5 4\ne 0 1\ne 0 2\ne 0 3\ne 0 4\n");
    assert_eq!(run(&["interval-rep", star.to_str().unwrap()]).status.code(), Some(2));
    let bad = write(dir.path(), "bad.txt", "candidates: a b\nr: 1\n");
    assert_eq!(run(&["solve", bad.to_str().unwrap(), "--problem", "av"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "--bogus"]).status.code(), Some(2));
}
