use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn anytw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anytw")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const PETERSEN: &str = "c petersen\np tw 10 15\n1 2\n2 3\n3 4\n4 5\n5 1\n1 6\n2 7\n3 8\n4 9\n5 10\n6 8\n8 10\n10 7\n7 9\n9 6\n";

#[test]
fn solve_writes_checkable_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let (gr, td, cert) = (dir.path().join("g.gr"), dir.path().join("g.td"), dir.path().join("g.cert"));
    fs::write(&gr, PETERSEN).unwrap();
    let o = anytw(&["solve", p(&gr), "--serial", "--timeout", "30", "--td", p(&td), "--cert", p(&cert)]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("treewidth 4"), "{}", stdout(&o));
    let o = anytw(&["verify-td", p(&gr), p(&td)]);
    assert!(o.status.success() && stdout(&o).contains("width 4"));
    let o = anytw(&["verify-cert", p(&gr), p(&cert)]);
    assert!(o.status.success() && stdout(&o).contains(">= 4"));
}

#[test]
fn serial_output_repeats() {
    let dir = tempfile::tempdir().unwrap();
    let gr = dir.path().join("g.gr");
    fs::write(&gr, PETERSEN).unwrap();
    let strip = |o: Output| stdout(&o).lines().filter(|l| !l.starts_with("c ")).collect::<Vec<_>>().join("\n");
    let a = strip(anytw(&["solve", p(&gr), "--serial", "--seed", "7"]));
    let b = strip(anytw(&["solve", p(&gr), "--serial", "--seed", "7"]));
    assert_eq!(a, b);
}

#[test]
fn exact_and_rejections() {
    let dir = tempfile::tempdir().unwrap();
    let gr = dir.path().join("c4.gr");
    fs::write(&gr, "p tw 4 4\n1 2\n2 3\n3 4\n4 1\n").unwrap();
    let o = anytw(&["exact", p(&gr)]);
    assert!(o.status.success() && stdout(&o).starts_with("treewidth 2\ns td"));

    let bad_td = dir.path().join("bad.td");
    fs::write(&bad_td, "s td 1 2 4\nb 1 1 2\n").unwrap();
    let o = anytw(&["verify-td", p(&gr), p(&bad_td)]);
    assert_eq!(o.status.code(), Some(1));

    let cert = dir.path().join("c.cert");
    fs::write(&cert, "cert tw-lb 3 4\n1\n2\n3\n4\n").unwrap();
    let o = anytw(&["verify-cert", p(&gr), p(&cert)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("below the claimed 3"));

    let broken = dir.path().join("broken.gr");
    fs::write(&broken, "p tw 2 1\n1 1\n").unwrap();
    let o = anytw(&["solve", p(&broken)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(anytw(&["exact", p(&dir.path().join("missing.gr"))]).status.code(), Some(2));
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c4.gr"), "p tw 4 4\n1 2\n2 3\n3 4\n4 1\n").unwrap();
    let out = dir.path().join("out.csv");
    let o = anytw(&["bench", p(dir.path()), "--timeout", "10", "--out", p(&out)]);
    assert!(o.status.success());
    let csv = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "instance,n,m,best_lb,best_ub,t_lb,t_ub,solved,cert_size,cert_verify_ms,error");
    assert!(lines[1].starts_with("c4.gr,4,4,2,2,"));
    assert!(lines[1].contains(",true,"));

    let empty = tempfile::tempdir().unwrap();
    let o = anytw(&["bench", p(empty.path())]);
    assert_eq!(stdout(&o).lines().count(), 1);
}
