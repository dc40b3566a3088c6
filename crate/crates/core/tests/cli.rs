use std::path::Path;
use std::process::{Command, Output};

use hivelab::harness::{parse_csv, parse_json};
use hivelab::hive_gt::{check_rhombus_concave, GtPattern};
use hivelab::octahedron::oct;
use hivelab::textfmt::{parse_records, to_text, Record};

fn hivelab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hivelab"))
        .args(args)
        .current_dir(dir)
        .env_remove("HIVELAB_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn pattern(rows: &[&[f64]]) -> GtPattern {
    GtPattern::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

#[test]
fn oct_writes_the_augmented_hive() {
    let dir = tempfile::tempdir().unwrap();
    let g1 = pattern(&[&[0.5], &[2.0, -1.0], &[3.0, 0.0, -2.0]]);
    let g2 = pattern(&[&[1.0], &[1.5, 0.5], &[2.0, 1.0, 0.0]]);
    std::fs::write(dir.path().join("g1.txt"), to_text(&[Record::Gt(g1.clone())])).unwrap();
    std::fs::write(dir.path().join("g2.txt"), to_text(&[Record::Gt(g2.clone())])).unwrap();
    let o = hivelab(&["oct", "g1.txt", "g2.txt", "-o", "out.txt"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let recs = parse_records(&std::fs::read_to_string(dir.path().join("out.txt")).unwrap()).unwrap();
    let want = oct(&g1, &g2, None).unwrap();
    match recs.as_slice() {
        [Record::Hive(h), Record::Gt(p)] => {
            assert_eq!(h, &want.hive);
            assert_eq!(p, &want.pattern);
            assert!(check_rhombus_concave(h, 1e-9).is_empty());
        }
        other => panic!("unexpected records {other:?}"),
    }
}

#[test]
fn oct_reports_bad_input_with_path() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.txt"), "n=2 kind=gt\n1\n1 x\n").unwrap();
    let o = hivelab(&["oct", "bad.txt", "missing.txt"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    std::fs::write(dir.path().join("ok.txt"), "n=1 kind=gt\n1\n").unwrap();
    let o = hivelab(&["oct", "ok.txt", "missing.txt"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("missing.txt"), "{}", stderr(&o));
}

#[test]
fn equivalence_exit_codes_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["equivalence", "--max-n", "4", "--trials", "5", "--seed", "7"];
    let a = hivelab(&args, dir.path());
    let b = hivelab(&args, dir.path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).ends_with("PASS\n"));
    let mut flipped = args.to_vec();
    flipped.push("--flip-border-sign");
    let f = hivelab(&flipped, dir.path());
    assert_eq!(f.status.code(), Some(1));
    assert!(stdout(&f).ends_with("FAIL\n"));
    assert_eq!(hivelab(&["equivalence", "--max-n", "9"], dir.path()).status.code(), Some(2));
}

#[test]
fn concentration_from_config_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.cfg"),
        "n = 3, 6\ntrials = 30\nbootstrap = 100\nseed = 4\noutput = table.csv\n",
    )
    .unwrap();
    let o = hivelab(&["concentration", "--config", "run.cfg"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("table.csv")).unwrap();
    let rows = parse_csv(&csv).unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.trials == 30 && r.seed == 4));

    let o = hivelab(
        &[
            "concentration",
            "--config",
            "run.cfg",
            "--set",
            "format=json",
            "--set",
            "output=table.json",
            "--set",
            "workers=2",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let json = parse_json(&std::fs::read_to_string(dir.path().join("table.json")).unwrap()).unwrap();
    assert_eq!(json, rows);

    // an unreachable decay threshold fails the run but still writes the table
    let o = hivelab(
        &["concentration", "--config", "run.cfg", "--decay-threshold", "1e-9"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("decay FAIL"), "{}", stderr(&o));

    let o = hivelab(&["concentration", "--config", "run.cfg", "--set", "trials=1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn worker_variable_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_hivelab"))
        .args(["concentration", "--set", "n=3", "--set", "trials=4", "--set", "bootstrap=10"])
        .current_dir(dir.path())
        .env("HIVELAB_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("HIVELAB_WORKERS"));
}

#[test]
fn sample_writes_interlacing_patterns() {
    let dir = tempfile::tempdir().unwrap();
    let o = hivelab(&["sample", "--n", "5", "--trials", "3", "--seed", "2"], dir.path());
    assert!(o.status.success());
    let recs = parse_records(&stdout(&o)).unwrap();
    assert_eq!(recs.len(), 3);
    for r in recs {
        let Record::Gt(g) = r else { panic!("expected gt") };
        assert_eq!(g.n(), 5);
        assert!(g.is_interlacing(g.default_tolerance()));
    }
}

#[test]
fn moments_csv() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("spec.txt"), "# staircase\n2 1 0\n").unwrap();
    let o = hivelab(&["moments", "spec.txt"], dir.path());
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "i,j,exact");
    let value = |line: &str| line.rsplit(',').next().unwrap().parse::<f64>().unwrap();
    assert!(lines[1].starts_with("1,,") && (value(lines[1]) - 5.0 / 12.0).abs() < 1e-14);
    let cov = lines.iter().find(|l| l.starts_with("1,2,")).unwrap();
    assert!((value(cov) - 1.0 / 144.0).abs() < 1e-14);

    let o = hivelab(&["moments", "spec.txt", "--mc", "2000"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("i,j,exact,mc,mc_se\n"));

    std::fs::write(dir.path().join("dup.txt"), "1 1 0\n").unwrap();
    assert_eq!(hivelab(&["moments", "dup.txt"], dir.path()).status.code(), Some(2));
}

#[test]
fn rigidity_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = hivelab(&["rigidity", "--n", "16", "--trials", "10"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("i,gamma_i,max_norm_dev,flag\n"));
    assert_eq!(out.lines().count(), 17);
    let o = hivelab(&["rigidity", "--n", "16", "--trials", "10", "--constant", "1e-6"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn tilings_of_the_unit_hexagon() {
    let dir = tempfile::tempdir().unwrap();
    let o = hivelab(&["tilings", "--n", "4", "--v", "1,3"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("n=4 v=(1,3) tilings=2\n"), "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("tiling ")).count(), 2);

    let k = hivelab::octahedron::SquareFunction::from_fn(4, |i, j| (i * 5 + j * j) as f64);
    std::fs::write(dir.path().join("k.txt"), to_text(&[Record::Square(k.clone())])).unwrap();
    let o = hivelab(&["tilings", "--n", "4", "--v", "1,3", "--input", "k.txt"], dir.path());
    let out = stdout(&o);
    let max: f64 = out.lines().last().unwrap().strip_prefix("max=").unwrap().parse().unwrap();
    let want = (k.get(2, 3) + k.get(0, 3)).max(k.get(1, 4) + k.get(1, 2)) - k.get(1, 3);
    assert!((max - want).abs() < 1e-12);

    assert_eq!(hivelab(&["tilings", "--n", "4", "--v", "0,3"], dir.path()).status.code(), Some(2));
}
