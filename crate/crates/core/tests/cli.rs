use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ecc::cover::{is_cover, parse_cover};
use ecc::graph::read_edge_list;

const G6: &str = "1 5\n1 3\n2 3\n2 4\n3 4\n3 5\n3 6\n4 5\n4 6\n5 6\n";

fn ecc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecc"))
        .args(args)
        .output()
        .expect("run ecc")
}

fn write_g6(dir: &Path) -> String {
    let path = dir.join("g6.txt");
    fs::write(&path, G6).unwrap();
    path.to_string_lossy().into_owned()
}

fn cover_of(dir: &Path, algo: &str) -> (Output, String) {
    let graph = write_g6(dir);
    let out = dir.join(format!("{algo}.cover"));
    let stats = dir.join("stats.csv");
    let run = ecc(&[
        "cover",
        &graph,
        "--algo",
        algo,
        "--out",
        out.to_str().unwrap(),
        "--stats",
        stats.to_str().unwrap(),
    ]);
    (run, fs::read_to_string(out).unwrap_or_default())
}

#[test]
fn exact_cover_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (run, text) = cover_of(dir.path(), "mfpt");
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(text.starts_with("# cliques=3 weight="));
    let g = read_edge_list(dir.path().join("g6.txt")).unwrap();
    let cliques = parse_cover(&g, text.as_bytes()).unwrap();
    assert_eq!(is_cover(&g, &cliques), Ok(true));
    let verify = ecc(&[
        "verify",
        dir.path().join("g6.txt").to_str().unwrap(),
        dir.path().join("mfpt.cover").to_str().unwrap(),
    ]);
    assert!(verify.status.success());
    assert!(String::from_utf8_lossy(&verify.stdout).starts_with("ok cliques=3"));
}

#[test]
fn greedy_cover_with_stats_row() {
    let dir = tempfile::tempdir().unwrap();
    let (run, text) = cover_of(dir.path(), "ccsd");
    assert!(run.status.success());
    let header = text.lines().next().unwrap();
    let k: usize = header["# cliques=".len()..]
        .split(' ')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!(k <= 4);
    let stats = fs::read_to_string(dir.path().join("stats.csv")).unwrap();
    let mut lines = stats.lines();
    let columns: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let d = columns.iter().position(|&c| c == "d").unwrap();
    assert_eq!(row[d], "3");
    let (_, _) = cover_of(dir.path(), "cfpt");
    assert_eq!(
        fs::read_to_string(dir.path().join("stats.csv"))
            .unwrap()
            .lines()
            .count(),
        3
    );
}

#[test]
fn empty_graph_and_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.txt");
    fs::write(&empty, "# nothing\n").unwrap();
    let run = ecc(&["cover", empty.to_str().unwrap(), "--algo", "cfpt"]);
    assert!(run.status.success());
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("# cliques=0 weight=0"));

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "1 2\n3 x\n").unwrap();
    let run = ecc(&["cover", bad.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains("line 2"));

    let graph = write_g6(dir.path());
    let run = ecc(&["cover", &graph, "--algo", "gfpt"]);
    assert_eq!(run.status.code(), Some(2));
}

#[test]
fn budget_and_time_limit_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_g6(dir.path());
    assert_eq!(
        ecc(&["cover", &graph, "--algo", "cfpt", "--k", "2"])
            .status
            .code(),
        Some(1)
    );
    assert!(ecc(&["cover", &graph, "--algo", "cfpt", "--k", "3"])
        .status
        .success());
    let run = ecc(&["cover", &graph, "--algo", "mfpt", "--time-limit-ms", "0"]);
    assert_eq!(run.status.code(), Some(3));
}

#[test]
fn gen_stats_and_ensemble() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("gnp.txt");
    let run = ecc(&[
        "gen",
        "--n",
        "40",
        "--p",
        "0.2",
        "--seed",
        "5",
        "--out",
        graph.to_str().unwrap(),
    ]);
    assert!(run.status.success());
    let again = ecc(&["gen", "--n", "40", "--p", "0.2", "--seed", "5"]);
    assert_eq!(
        fs::read_to_string(&graph).unwrap().as_bytes(),
        again.stdout.as_slice()
    );

    let stats = ecc(&["stats", graph.to_str().unwrap()]);
    let text = String::from_utf8_lossy(&stats.stdout);
    assert!(text.starts_with("graph,n,m,d,delta,trivial\ngnp,"));

    let out = dir.path().join("runs.csv");
    let run = ecc(&[
        "ensemble",
        "--n",
        "10",
        "--p",
        "0.4",
        "--count",
        "6",
        "--roster",
        "cfpt,mfpt,oracle",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 1 + 18);
    let summary = fs::read_to_string(dir.path().join("runs_summary.csv")).unwrap();
    let mut lines = summary.lines();
    let columns: Vec<&str> = lines.next().unwrap().split(',').collect();
    let agreement = columns.iter().position(|&c| c == "size_agreement").unwrap();
    let pairs: Vec<Vec<&str>> = lines
        .map(|l| l.split(',').collect())
        .filter(|r: &Vec<&str>| !r[1].is_empty())
        .collect();
    assert_eq!(pairs.len(), 3);
    assert!(pairs.iter().all(|r| r[agreement] == "1.0"));
}

#[test]
fn debug_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_g6(dir.path());
    let run = ecc(&["oracle", &graph]);
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("min_size=3 min_weight=10"));
    let run = ecc(&["cliques", &graph]);
    let text = String::from_utf8_lossy(&run.stdout).into_owned();
    assert!(text.lines().any(|l| l == "3 4 5 6"));
}
