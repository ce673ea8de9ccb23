use std::path::Path;
use std::process::{Command, Output};

fn abcdo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abcdo"))
        .args(args)
        .output()
        .unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn generate_writes_all_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g");
    let o = abcdo(&[
        "generate",
        "--n",
        "2000",
        "--outliers",
        "80",
        "--max-community",
        "400",
        "--max-degree",
        "100",
        "--out",
        p(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let labels = read(&out.join("communities.tsv"));
    assert_eq!(labels.lines().count(), 2000);
    assert_eq!(labels.lines().filter(|l| l.ends_with("\t0")).count(), 80);
    assert_eq!(read(&out.join("outliers.txt")).lines().count(), 80);
    let edges = read(&out.join("edges.tsv"));
    let pairs: Vec<(u32, u32)> = edges
        .lines()
        .map(|l| {
            let (a, b) = l.split_once('\t').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert!(pairs.iter().all(|&(a, b)| 1 <= a && a < b && b <= 2000));
    assert!(pairs.windows(2).all(|w| w[0] < w[1]));
    assert!(read(&out.join("params.txt")).contains("\nseed=1\n"));
}

#[test]
fn no_outliers_means_no_zero_labels() {
    let dir = tempfile::tempdir().unwrap();
    let o = abcdo(&[
        "generate",
        "--n",
        "1000",
        "--outliers",
        "0",
        "--max-community",
        "300",
        "--max-degree",
        "80",
        "--out",
        p(dir.path()),
    ]);
    assert!(o.status.success());
    assert!(read(&dir.path().join("communities.tsv"))
        .lines()
        .all(|l| !l.ends_with("\t0")));
    assert_eq!(read(&dir.path().join("outliers.txt")), "");
}

#[test]
fn config_file_with_flag_override_and_echo_reload() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.txt");
    std::fs::write(
        &cfg,
        "n=1500\noutliers=50\nxi=0.3\nmax_community=300\nmax_degree=60\nseed=3\n",
    )
    .unwrap();
    let a = dir.path().join("a");
    assert!(abcdo(&[
        "generate",
        "--config",
        p(&cfg),
        "--xi",
        "0.6",
        "--out",
        p(&a)
    ])
    .status
    .success());
    let echo = read(&a.join("params.txt"));
    assert!(echo.contains("xi=0.6\n") && echo.contains("n=1500\n"));
    let b = dir.path().join("b");
    assert!(abcdo(&[
        "generate",
        "--config",
        p(&a.join("params.txt")),
        "--out",
        p(&b)
    ])
    .status
    .success());
    assert_eq!(read(&a.join("edges.tsv")), read(&b.join("edges.tsv")));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path());
    // minimum community size below minimum degree + 1
    let o = abcdo(&[
        "generate",
        "--min-community",
        "50",
        "--min-degree",
        "60",
        "--out",
        out,
    ]);
    assert_eq!(o.status.code(), Some(2));
    // degrees too large for any community
    let o = abcdo(&[
        "generate",
        "--n",
        "2000",
        "--max-community",
        "300",
        "--out",
        out,
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("maximum community size"));
    let o = abcdo(&["kcore", "--edges", "/no/such/file", "-k", "2", "--out", out]);
    assert_eq!(o.status.code(), Some(4));
    let o = abcdo(&["generate", "--xi", "1.5", "--out", out]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("e.tsv");
    std::fs::write(&edges, "1\t2\n2\tthree\n").unwrap();
    let o = abcdo(&["analyze", "--edges", p(&edges), "--out", p(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("e.tsv:2: invalid node id `three`"));
}

#[test]
fn analyze_without_outliers_reports_degenerate_classes() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("e.tsv");
    std::fs::write(&edges, "1\t2\n2\t3\n1\t3\n3\t4\n4\t5\n5\t6\n4\t6\n").unwrap();
    let out = dir.path().join("a");
    let o = abcdo(&[
        "analyze",
        "--edges",
        p(&edges),
        "--detect",
        "--out",
        p(&out),
    ]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("undefined (degenerate classes)"));
    let scores = read(&out.join("scores.csv"));
    assert_eq!(scores.lines().count(), 2 + 6);
    assert!(read(&out.join("ranked.tsv")).starts_with("rank\tnode\tparticipation\n"));
}

#[test]
fn analyze_generated_graph_against_ground_truth() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g");
    assert!(abcdo(&[
        "generate",
        "--n",
        "2000",
        "--outliers",
        "100",
        "--max-community",
        "400",
        "--max-degree",
        "100",
        "--out",
        p(&g)
    ])
    .status
    .success());
    let a = dir.path().join("a");
    let o = abcdo(&[
        "analyze",
        "--edges",
        p(&g.join("edges.tsv")),
        "--outliers",
        p(&g.join("outliers.txt")),
        "--out",
        p(&a),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let auc = read(&a.join("auc.csv"));
    let line = auc
        .lines()
        .find(|l| l.starts_with("participation,all,"))
        .unwrap();
    let value: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
    assert!(value > 0.95, "{line}");
    let o = abcdo(&[
        "analyze",
        "--edges",
        p(&g.join("edges.tsv")),
        "--communities",
        p(&g.join("communities.tsv")),
        "--ground-truth",
        "--out",
        p(&a),
    ]);
    assert!(o.status.success());
}

#[test]
fn kcore_of_triangle_with_pendant() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("e.tsv");
    std::fs::write(&edges, "1\t2\n2\t3\n1\t3\n3\t4\n").unwrap();
    let out = dir.path().join("core.tsv");
    let map = dir.path().join("map.tsv");
    assert!(abcdo(&[
        "kcore",
        "--edges",
        p(&edges),
        "-k",
        "2",
        "--out",
        p(&out),
        "--map",
        p(&map)
    ])
    .status
    .success());
    assert_eq!(read(&out), "1\t2\n1\t3\n2\t3\n");
    assert_eq!(read(&map), "1\t1\n2\t2\n3\t3\n");
    std::fs::write(&edges, "1\t2\n2\t3\n2\t4\n4\t5\n").unwrap();
    assert!(
        abcdo(&["kcore", "--edges", p(&edges), "-k", "2", "--out", p(&out)])
            .status
            .success()
    );
    assert_eq!(read(&out), "");
}
