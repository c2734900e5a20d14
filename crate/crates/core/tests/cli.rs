use std::fs;
use std::path::Path;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_jackson-approx");

fn run(args: &[&str], out: &Path) -> i32 {
    Command::new(BIN)
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
        .status
        .code()
        .expect("exit code")
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn moments_default_passes_and_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(run(&["moments", "--mu-max", "16"], a.path()), 0);
    assert_eq!(run(&["moments", "--mu-max", "16"], b.path()), 0);
    let fa = read_dir_sorted(a.path());
    assert_eq!(fa, read_dir_sorted(b.path()));
    let names: Vec<_> = fa.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["moments.csv", "moments.json", "moments_plot.txt"]);

    let csv = String::from_utf8(fa[0].1.clone()).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("# config-digest: "));
    assert_eq!(lines.next().unwrap(), "mu,J,J_mu_gamma,c_constant");
    assert_eq!(lines.count(), 15);
}

#[test]
fn moments_rejects_invalid_input() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run(&["moments", "--gamma", "0"], d.path()), 2);
    assert_eq!(run(&["moments", "--l", "1", "--m", "2", "--gamma", "1"], d.path()), 2);
    assert_eq!(run(&["moments", "--family", "torus"], d.path()), 2);
    assert_eq!(run(&["moments", "--family", "cp", "--m", "3"], d.path()), 2);
    assert_eq!(run(&["moments", "--no-such-flag"], d.path()), 2);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("run.kv");
    fs::write(&cfg, "# sweep\nmu-min = 3\nmu_max = 5\ngamma = 0\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    // gamma = 0 from the file is rejected unless a flag overrides it
    assert_eq!(run(&["moments", "--config", cfg], d.path()), 2);
    assert_eq!(run(&["moments", "--config", cfg, "--gamma", "1"], d.path()), 0);
    let csv = fs::read_to_string(d.path().join("moments.csv")).unwrap();
    let mus: Vec<_> = csv.lines().skip(2).map(|l| l.split(',').next().unwrap().to_string()).collect();
    assert_eq!(mus, ["3", "4", "5"]);

    fs::write(d.path().join("bad.kv"), "colour = blue\n").unwrap();
    assert_eq!(
        run(&["moments", "--config", d.path().join("bad.kv").to_str().unwrap()], d.path()),
        2
    );
}

#[test]
fn multipliers_vanish_past_nu() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run(&["multipliers"], d.path()), 0);
    let csv = fs::read_to_string(d.path().join("multipliers.csv")).unwrap();
    for line in csv.lines().skip(2) {
        let cols: Vec<&str> = line.split(',').collect();
        let (nu, n, v): (usize, usize, f64) = (cols[1].parse().unwrap(), cols[2].parse().unwrap(), cols[3].parse().unwrap());
        assert_eq!(nu, 10);
        if n > nu {
            assert!(v.abs() < 1e-8, "n = {n}: {v}");
        }
    }
}

#[test]
fn kernel_file_round_trips_through_hoelder() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run(&["kernel", "--n-max", "120"], d.path()), 0);
    let kv = d.path().join("kernel.kv");
    assert!(kv.exists());
    let h = tempfile::tempdir().unwrap();
    assert_eq!(
        run(&["hoelder", "--kernel", kv.to_str().unwrap(), "--grid", "256"], h.path()),
        0
    );
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(h.path().join("hoelder.json")).unwrap()).unwrap();
    let beta_hat = summary["beta_hat"].as_f64().unwrap();
    assert!((0.4..=2.0).contains(&beta_hat), "{beta_hat}");
    assert!(summary["max_ratio"].as_f64().unwrap().is_finite());
    assert_eq!(summary["n_trunc"], 120);
}

#[test]
fn approx_constant_kernel_is_rank_one() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(
        run(&["approx", "--kernel", "constant", "--m", "2", "--n-max", "8"], d.path()),
        0
    );
    let csv = fs::read_to_string(d.path().join("approx.csv")).unwrap();
    let a: Vec<f64> = csv
        .lines()
        .skip(2)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(a.len(), 8);
    // sqrt of the volume 4 pi, then zeros
    assert!((a[0] - (4.0 * std::f64::consts::PI).sqrt()).abs() < 1e-12);
    assert!(a[1..].iter().all(|v| *v == 0.0));
}

#[test]
fn approx_example_kernel_reports_fit() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run(&["approx", "--n-max", "2000"], d.path()), 0);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.path().join("approx.json")).unwrap()).unwrap();
    let slope = summary["slope"].as_f64().unwrap();
    // half the eigenvalue slope, which sits between -1.5 and -1.7 here
    assert!((-0.85..=-0.75).contains(&slope), "{slope}");
}
