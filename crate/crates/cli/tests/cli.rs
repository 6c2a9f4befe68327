use std::io::Write;
use std::process::{Command, Output, Stdio};

use bpsp_core::instances::read_instances;

fn bpsp(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_bpsp"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gen_writes_valid_instances() {
    let o = bpsp(&["gen", "-n", "3", "-c", "2", "--seed", "7"], "");
    assert!(o.status.success());
    let insts = read_instances(o.stdout.as_slice()).unwrap();
    assert_eq!(insts.len(), 2);
    assert!(insts.iter().all(|x| x.word().len() == 6));

    let o = bpsp(&["gen", "-n", "1", "-c", "1", "--seed", "0"], "");
    assert_eq!(stdout(&o), "1 1\n");
    assert_eq!(bpsp(&["gen", "-n", "0"], "").status.code(), Some(2));
}

#[test]
fn gen_to_file_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.txt");
    let p = path.to_str().unwrap();
    assert!(bpsp(&["gen", "-n", "20", "-c", "4", "--seed", "3", "-o", p], "").status.success());
    let again = bpsp(&["gen", "-n", "20", "-c", "4", "--seed", "3"], "");
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&again));
}

#[test]
fn solve_reports() {
    let o = bpsp(&["solve", "-", "--algorithm", "brute"], "1 2 1 3 3 2\n");
    assert!(o.status.success());
    let out = stdout(&o);
    let fields: Vec<&str> = out.split_whitespace().collect();
    assert_eq!(&fields[..2], &["3", "2"]);
    assert!((fields[2].parse::<f64>().unwrap() - 2.0 / 3.0).abs() < 1e-15);
    assert_eq!(fields[3].len(), 6);

    let o = bpsp(&["solve", "-", "-a", "rsg"], "5 1 1 3 2 2 5 4 3 6 6 4\n");
    assert_eq!(stdout(&o).split_whitespace().nth(1), Some("4"));
    let o = bpsp(&["solve", "-", "-a", "rf"], "1 1\n");
    assert!(stdout(&o).starts_with("1 1 "));
}

#[test]
fn solve_runs_every_algorithm() {
    for alg in ["rf", "greedy", "rg", "rsg", "qaoa1", "xqaoa", "rqaoa", "brute"] {
        let o = bpsp(&["--threads", "2", "solve", "-", "-a", alg, "--restarts", "2"], "1 2 1 3 3 2\n1 1\n");
        assert!(o.status.success(), "{alg}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(stdout(&o).lines().count(), 2, "{alg}");
    }
}

#[test]
fn solve_argument_and_input_errors() {
    assert_eq!(bpsp(&["solve", "-", "-a", "sdp"], "1 1\n").status.code(), Some(2));
    assert_eq!(bpsp(&["solve", "-", "--cutoff", "0"], "1 1\n").status.code(), Some(2));
    assert_eq!(bpsp(&["solve", "-"], "1 2 1\n").status.code(), Some(1));
    assert_eq!(bpsp(&["solve", "/nonexistent/file"], "").status.code(), Some(1));
}

#[test]
fn reduce_exports() {
    let o = bpsp(&["reduce", "-"], "1 2 1 3 3 2\n");
    assert_eq!(stdout(&o), "3 2\n1 3 1\n2 3 -1\n");
    let o = bpsp(&["reduce", "-", "--format", "ising"], "1 2 1 3 3 2\n");
    assert_eq!(stdout(&o), "3 3 1\n1 3 1 2\n2 3 -1 2\n");
    let o = bpsp(&["reduce", "-"], "1 1\n");
    assert_eq!(stdout(&o), "1 0\n");
}

#[test]
fn validate_exit_codes() {
    let o = bpsp(&["validate", "--trials", "30"], "");
    assert!(o.status.success(), "{}", stdout(&o));
    let o = bpsp(&["validate", "--trials", "0"], "");
    assert!(o.status.success());
    assert!(stdout(&o).contains("0 checks"));
    assert_eq!(bpsp(&["validate", "--trials", "3", "--inject-fault"], "").status.code(), Some(1));
}

#[test]
fn bench_writes_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cfg = d.join("smoke.cfg");
    std::fs::write(
        &cfg,
        format!(
            "sizes = 8, 16\ninstances = 3\nalgorithms = rf, rsg, rqaoa\nseed = 2\nrecords = {}\nsummary = {}\n",
            d.join("r.csv").display(),
            d.join("s.csv").display()
        ),
    )
    .unwrap();
    let run = || {
        let o = bpsp(&["bench", cfg.to_str().unwrap()], "");
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read_to_string(d.join("r.csv")).unwrap()
    };
    let strip_time = |csv: &str| -> Vec<String> {
        csv.lines().map(|l| l.split(',').enumerate().filter(|&(i, _)| i != 6).map(|(_, f)| f).collect::<Vec<_>>().join(",")).collect()
    };
    let first = run();
    let lines: Vec<&str> = first.lines().collect();
    assert_eq!(lines[0], "n,instance,seed,algorithm,swaps,ratio,time_ms,restarts");
    assert_eq!(lines.len(), 1 + 2 * 3 * 3);
    let summary = std::fs::read_to_string(d.join("s.csv")).unwrap();
    assert_eq!(summary.lines().next(), Some("algorithm,n,count,mean,std,min,max"));
    assert_eq!(summary.lines().count(), 1 + 2 * 3);
    assert_eq!(strip_time(&first), strip_time(&run()));

    std::fs::write(&cfg, "sizes = 8\nrestarts = 0\n").unwrap();
    assert_eq!(bpsp(&["bench", cfg.to_str().unwrap()], "").status.code(), Some(1));
}
