use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const COUNTEREXAMPLE: &str = "0.43 0.43 0.02\n0.01 0.01 0.04\n0.01 0.01 0.04\n";

struct Files {
    _dir: TempDir,
    root: PathBuf,
}

impl Files {
    fn new() -> Self {
        let dir = TempDir::new().unwrap();
        let root = dir.path().to_path_buf();
        let f = Files { _dir: dir, root };
        f.write("counter.txt", COUNTEREXAMPLE);
        f.write("product.csv", "0.12,0.18\n0.28,0.42\n");
        f.write(
            "diag4.toml",
            "x_labels = [\"a\", \"b\", \"c\", \"d\"]\ny_labels = [\"a\", \"b\", \"c\", \"d\"]\n\
             p = [[0.25, 0, 0, 0], [0, 0.25, 0, 0], [0, 0, 0.25, 0], [0, 0, 0, 0.25]]\n",
        );
        f.write("diag2.json", r#"{"x_labels": ["0", "1"], "y_labels": ["0", "1"], "p": [[0.5, 0.0], [0.0, 0.5]]}"#);
        f.write("corr.txt", "0.4 0.1\n0.1 0.4\n");
        f
    }

    fn write(&self, name: &str, text: &str) {
        std::fs::write(self.root.join(name), text).unwrap();
    }

    fn path(&self, name: &str) -> String {
        self.root.join(name).display().to_string()
    }
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_renyidep")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Value of `key` in human `key  value` output.
fn field(out: &str, key: &str) -> String {
    out.lines()
        .find_map(|l| {
            let mut it = l.split_whitespace();
            (it.next() == Some(key)).then(|| it.collect::<Vec<_>>().join(" "))
        })
        .unwrap_or_else(|| panic!("no {key} in\n{out}"))
}

fn num(out: &str, key: &str) -> f64 {
    field(out, key).parse().unwrap()
}

fn csv_column(out: &str, col: &str) -> Vec<String> {
    let mut lines = out.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == col).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

#[test]
fn measure_k_on_counterexample() {
    let f = Files::new();
    let o = run(&["measure", "--file", &f.path("counter.txt"), "--measure", "K", "--alpha", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!((num(&out, "value_bits") - 0.253).abs() < 1e-3, "{out}");
    assert_eq!(field(&out, "converged"), "true");
    assert!(field(&out, "qx_opt").starts_with("x0="));
}

#[test]
fn measure_j_product_and_diagonal() {
    let f = Files::new();
    let out = stdout(&run(&["measure", "--file", &f.path("product.csv"), "--measure", "j", "--alpha", "0.7"]));
    assert_eq!(field(&out, "value_bits"), "0.000000");
    let out = stdout(&run(&["measure", "--file", &f.path("diag4.toml"), "--measure", "J", "--alpha", "2"]));
    assert_eq!(field(&out, "value_bits"), "2.000000");
    assert!(field(&out, "qy_opt").contains("c=0.250000"));
}

#[test]
fn measure_other_kinds() {
    let f = Files::new();
    let p = f.path("counter.txt");
    let i = num(&stdout(&run(&["measure", "--file", &p, "--measure", "I"])), "value_bits");
    assert!((i - 0.221).abs() < 1e-3);
    let d = num(&stdout(&run(&["measure", "--file", &p, "--measure", "D", "--alpha", "1"])), "value_bits");
    assert!((d - i).abs() < 1e-6);
    let delta = num(&stdout(&run(&["measure", "--file", &p, "--measure", "Delta", "--alpha", "0.5"])), "value_bits");
    let k = num(&stdout(&run(&["measure", "--file", &p, "--measure", "K", "--alpha", "0.5"])), "value_bits");
    assert!(delta >= k - 1e-6);
    let out = stdout(&run(&["measure", "--file", &f.path("diag2.json"), "--measure", "H", "--alpha", "3"]));
    assert_eq!(field(&out, "value_bits"), "1.000000");
    assert_eq!(field(&out, "x_bits"), "1.000000");
}

#[test]
fn measure_with_oracle() {
    let f = Files::new();
    let out = stdout(&run(&[
        "measure", "--file", &f.path("corr.txt"), "--measure", "K", "--alpha", "0.3", "--oracle",
        "--grid-steps", "200",
    ]));
    assert!((num(&out, "value_bits") - num(&out, "oracle_bits")).abs() < 5e-4, "{out}");
}

#[test]
fn sweep_counterexample_k_is_not_monotone() {
    let f = Files::new();
    let o = run(&[
        "sweep", "--file", &f.path("counter.txt"), "--alpha-min", "0.2", "--alpha-max", "1.5",
        "--steps", "14", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(
        out.lines().next().unwrap(),
        "alpha,j_value,k_value,j_converged,k_converged,j_iters,k_iters"
    );
    let alphas: Vec<f64> = csv_column(&out, "alpha").iter().map(|s| s.parse().unwrap()).collect();
    assert_eq!(alphas.len(), 14);
    assert!(alphas.windows(2).all(|w| w[1] > w[0]));
    let k: Vec<f64> = csv_column(&out, "k_value").iter().map(|s| s.parse().unwrap()).collect();
    let at = |al: f64| k[alphas.iter().position(|a| (a - al).abs() < 1e-9).unwrap()];
    assert!((at(0.2) - 0.109).abs() < 1e-3);
    assert!((at(1.0) - 0.221).abs() < 1e-3);
    assert!((at(1.5) - 0.063).abs() < 1e-3);
    let j: Vec<f64> = csv_column(&out, "j_value").iter().map(|s| s.parse().unwrap()).collect();
    assert!(j.windows(2).all(|w| w[1] >= w[0] - 1e-7));
}

#[test]
fn sweep_independent_and_diagonal() {
    let f = Files::new();
    let out = stdout(&run(&[
        "sweep", "--file", &f.path("product.csv"), "--alpha-min", "0.1", "--alpha-max", "3",
        "--steps", "5", "--format", "csv",
    ]));
    for col in ["j_value", "k_value"] {
        assert!(csv_column(&out, col).iter().all(|v| v.parse::<f64>().unwrap().abs() < 1e-9));
    }
    let out = stdout(&run(&[
        "sweep", "--file", &f.path("diag2.json"), "--alpha-min", "0.25", "--alpha-max", "2",
        "--steps", "8", "--measure", "J", "--format", "csv",
    ]));
    let j: Vec<f64> = csv_column(&out, "j_value").iter().map(|s| s.parse().unwrap()).collect();
    for (idx, expect) in [(0, 1.0 / 3.0), (1, 1.0), (3, 1.0), (7, 1.0)] {
        assert!((j[idx] - expect).abs() < 1e-9, "{j:?}");
    }
    assert!(csv_column(&out, "k_value").iter().all(String::is_empty));
}

#[test]
fn rate_region_values() {
    let f = Files::new();
    let out = stdout(&run(&["rate-region", "--file", &f.path("diag2.json"), "--rho", "1"]));
    assert_eq!(field(&out, "rx_min"), "1.000000");
    assert_eq!(field(&out, "ry_min"), "1.000000");
    assert_eq!(field(&out, "sum_min"), "2.000000");

    let out = stdout(&run(&["rate-region", "--file", &f.path("product.csv"), "--rho", "2", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let (rx, ry, s) = (v["rx_min"].as_f64().unwrap(), v["ry_min"].as_f64().unwrap(), v["sum_min"].as_f64().unwrap());
    assert!((s - rx - ry).abs() < 1e-9);

    let out = stdout(&run(&["rate-region", "--file", &f.path("counter.txt"), "--rho", "1"]));
    assert!((num(&out, "k_value") - 0.253).abs() < 1e-3);
    assert!((num(&out, "corner_a_rx") - num(&out, "rx_min")).abs() < 1e-6);
}

#[test]
fn simulate_degenerate_rates() {
    let f = Files::new();
    let p = f.path("corr.txt");
    let out = stdout(&run(&["simulate", "--file", &p, "-n", "3", "--rx", "30", "--ry", "30", "--exact"]));
    assert_eq!(field(&out, "moment_estimate"), "1.000000");
    assert_eq!(field(&out, "in_region"), "true");
    let out = stdout(&run(&[
        "simulate", "--file", &p, "-n", "1", "--rx", "0", "--ry", "0", "--rho", "2", "--exact",
    ]));
    assert_eq!(field(&out, "moment_estimate"), "16.000000");
    assert_eq!(field(&out, "in_region"), "false");
    let out = stdout(&run(&["simulate", "--file", &p, "-n", "4", "--rx", "1", "--ry", "1", "--trials", "50"]));
    assert_eq!(field(&out, "method"), "monte_carlo");
}

#[test]
fn simulate_inside_region_trend() {
    let f = Files::new();
    let p = f.path("corr.txt");
    let region = stdout(&run(&["rate-region", "--file", &p, "--rho", "1"]));
    let rate = format!("{}", 1.25 * num(&region, "sum_min") / 2.0);
    let moments: Vec<f64> = ["2", "4", "6"]
        .iter()
        .map(|n| {
            let out = stdout(&run(&[
                "simulate", "--file", &p, "-n", n, "--rx", &rate, "--ry", &rate, "--exact",
                "--trials", "1000", "--seed", "3",
            ]));
            num(&out, "moment_estimate")
        })
        .collect();
    assert!(moments.windows(2).all(|w| w[1] <= w[0]), "{moments:?}");
}

#[test]
fn verify_passes_and_detects_injected_fault() {
    let o = run(&["verify"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(out.contains("K_1/2(X;Z) = 0.315 > K_1/2(X;Y) = 0.253"));
    assert!(!out.contains("FAIL"));

    let o = run(&["verify", "--inject-k-offset", "0.01", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(3));
    let out = stdout(&o);
    let failed: Vec<&str> = out.lines().filter(|l| l.starts_with("reference,") && l.contains(",false,")).collect();
    assert_eq!(failed.len(), 5, "{out}");
}

#[test]
fn exit_codes() {
    let f = Files::new();
    let p = f.path("counter.txt");
    // usage: missing --alpha, unknown measure, unknown subcommand
    assert_eq!(run(&["measure", "--file", &p, "--measure", "J"]).status.code(), Some(1));
    assert_eq!(run(&["measure", "--file", &p, "--measure", "Q", "--alpha", "1"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["measure", "--file", &p, "--measure", "J", "--alpha", "-1"]).status.code(), Some(1));
    assert_eq!(run(&["sweep", "--file", &p, "--alpha-min", "2", "--alpha-max", "1"]).status.code(), Some(1));
    // parse failures
    f.write("bad.txt", "0.5 0.6\n");
    assert_eq!(run(&["measure", "--file", &f.path("bad.txt"), "--measure", "I"]).status.code(), Some(1));
    assert_eq!(run(&["measure", "--file", "/nonexistent/x.toml", "--measure", "I"]).status.code(), Some(1));
    // enumeration cap
    let o = run(&["simulate", "--file", &p, "-n", "9", "--rx", "1", "--ry", "1", "--exact"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds the cap"));
    // non-convergence still prints the value
    let o = run(&["measure", "--file", &p, "--measure", "J", "--alpha", "2", "--max-iters", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(field(&stdout(&o), "converged"), "false");
    // help is not an error
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn renormalization_warning() {
    let f = Files::new();
    f.write("off.txt", "0.5 0.5000000003\n");
    let o = run(&["measure", "--file", &f.path("off.txt"), "--measure", "I"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("renormalized"));
}

#[test]
fn deterministic_output() {
    let f = Files::new();
    let args = [
        "sweep", "--file", &f.path("counter.txt"), "--alpha-min", "0.1", "--alpha-max", "4",
        "--steps", "12", "--seed", "9", "--format", "json",
    ];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
    let sim = ["simulate", "--file", &f.path("corr.txt"), "-n", "5", "--rx", "0.8", "--ry", "0.9", "--seed", "4"];
    assert_eq!(stdout(&run(&sim)), stdout(&run(&sim)));
}

#[test]
fn bare_matrix_with_comments() {
    let f = Files::new();
    f.write("c.txt", &format!("# a comment\n\n{COUNTEREXAMPLE}"));
    let o = run(&["measure", "--file", &f.path("c.txt"), "--measure", "I", "--format", "csv"]);
    assert_eq!(stdout(&o).lines().next(), Some("measure,value_bits"));
    assert!(Path::new(&f.path("c.txt")).exists());
}
