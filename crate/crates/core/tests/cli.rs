use std::path::PathBuf;
use std::process::Command;

fn stefan(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_stefan")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn field(stdout: &str, key: &str) -> f64 {
    stdout
        .lines()
        .find_map(|l| {
            let (k, v) = l.split_once('=')?;
            (k.trim() == key).then(|| v.trim().parse().unwrap())
        })
        .unwrap_or_else(|| panic!("no {key} in {stdout}"))
}

fn csv(stdout: &str) -> Vec<Vec<f64>> {
    stdout
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("stefan-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn solve_examples() {
    let (code, out, _) = stefan(&["solve", "--beta", "0", "--delta", "0", "--bc", "neumann", "--q0", "0.1"]);
    assert_eq!(code, 0);
    assert!((field(&out, "xi") - 0.0990).abs() < 5e-5);
    assert_eq!(field(&out, "alpha"), 0.0);
    assert!(field(&out, "iterations") <= 30.0);
    assert!(field(&out, "|F(xi)|") <= 1e-9);
    assert!(out.contains("method     = newton"));

    let (code, out, _) = stefan(&["solve", "--beta", "0", "--delta", "0", "--bc", "robin", "--h0", "1", "--u-inf", "0.5"]);
    assert_eq!(code, 0);
    assert!((field(&out, "xi") - 0.2926).abs() < 5e-5);
    assert_eq!(field(&out, "Bi"), 1.0);
    assert_eq!(field(&out, "Ste"), 0.5);
}

#[test]
fn solve_is_deterministic() {
    let args = ["solve", "--beta", "1", "--delta", "-0.5", "--bc", "robin", "--h0", "3", "--u-inf", "0.7"];
    let first = stefan(&args);
    assert_eq!(first.0, 0);
    for _ in 0..3 {
        assert_eq!(stefan(&args), first);
    }
}

#[test]
fn invalid_inputs_exit_2() {
    for args in [
        &["solve", "--beta", "0", "--delta", "1", "--bc", "neumann", "--q0", "1"][..],
        &["solve", "--beta", "0", "--delta", "0", "--bc", "neumann"],
        &["solve", "--beta", "0", "--delta", "0", "--bc", "robin", "--h0", "-1", "--u-inf", "1"],
        &["solve", "--beta", "0", "--delta", "0", "--bc", "sideways", "--q0", "1"],
        &["table", "3"],
        &["frobnicate"],
    ] {
        let (code, out, err) = stefan(args);
        assert_eq!(code, 2, "{args:?}: {out}{err}");
        assert!(!err.is_empty());
    }
    let (code, _, _) = stefan(&["--help"]);
    assert_eq!(code, 0);
}

#[test]
fn flux_table_rows() {
    let (code, out, _) = stefan(&["table", "1"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "delta,beta,Q=0.1,Q=0.2,Q=0.3,Q=0.4,Q=0.5,flags");
    assert_eq!(lines[1], "0,0,0.0990,0.1927,0.2777,0.3531,0.4194,suspect-paper-cell:Q=0.5");
    assert_eq!(lines.len(), 7);
    assert_eq!(lines.iter().filter(|l| l.contains("suspect-paper-cell")).count(), 2);
}

#[test]
fn biot_table_rows() {
    let (code, out, _) = stefan(&["table", "2"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "delta,beta,Bi=1,Bi=10,Bi=50,Bi=100,xi_D");
    assert_eq!(lines[1], "0,0,0.2926,0.4422,0.4601,0.4625,0.4648");
    for line in &lines[1..] {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!(cells[2..].windows(2).all(|w| w[0] < w[1]), "{line}");
    }
}

#[test]
fn front_latent_and_eval() {
    let base = ["--beta", "0", "--delta", "0", "--bc", "dirichlet", "--u0", "0.5"];
    let (code, out, _) = stefan(&[&["front", "--t", "1,4"][..], &base].concat());
    assert_eq!(code, 0);
    let rows = csv(&out);
    // s ∝ √t, ṡ ∝ 1/√t
    assert!((rows[1][1] / rows[0][1] - 2.0).abs() < 1e-10);
    assert!((rows[0][2] / rows[1][2] - 2.0).abs() < 1e-10);

    let (code, out, _) = stefan(&[&["eval", "--t", "1", "--nx", "3"][..], &base].concat());
    assert_eq!(code, 0);
    let rows = csv(&out);
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][3], 0.5);
    assert_eq!(rows[2][3], 0.0);

    let (code, _, _) = stefan(&[&["eval", "--t", "1", "--x", "5"][..], &base].concat());
    assert_eq!(code, 2);
    let (code, out, _) = stefan(&[&["eval", "--t", "1", "--x", "5", "--zero-extend"][..], &base].concat());
    assert_eq!(code, 0);
    assert_eq!(csv(&out)[0][3], 0.0);

    let (code, out, _) = stefan(&["latent", "--beta", "4", "--delta", "1", "--bc", "neumann", "--q0", "0.3", "--t", "1,2"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("# p=1.5 regime=superlinear"));
    let rows = csv(&out);
    assert!((rows[1][1] / rows[0][1] - 2f64.powf(1.5)).abs() < 1e-10);
}

#[test]
fn sweeps() {
    let (code, out, _) = stefan(&["sweep", "--beta", "0", "--delta", "0", "--bc", "robin", "--u-inf", "0.5", "--param", "Bi", "--values", "1,10,100"]);
    assert_eq!(code, 0);
    let xi: Vec<f64> = csv(&out).iter().map(|r| r[1]).collect();
    assert!((xi[0] - 0.2926).abs() < 5e-5);
    assert!(xi.windows(2).all(|w| w[0] < w[1]));

    let (code, out, _) = stefan(&["sweep", "--beta", "1", "--delta", "0", "--bc", "neumann", "--param", "Q", "--values", "0.1,0.2,0.3"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("Q,xi"));

    let (code, _, _) = stefan(&["sweep", "--beta", "0", "--delta", "0", "--bc", "neumann", "--param", "Q", "--values", "0.3,0.1"]);
    assert_eq!(code, 2);
    let (code, _, _) = stefan(&["sweep", "--beta", "0", "--delta", "0", "--bc", "neumann", "--param", "Bi", "--values", "1,2"]);
    assert_eq!(code, 2);
}

#[test]
fn verify_passes_and_detects_corruption() {
    let base = ["verify", "--beta", "1", "--delta", "0", "--bc", "robin", "--h0", "2", "--u-inf", "1"];
    let (code, out, _) = stefan(&base);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("status             = pass"));
    let (code, out, err) = stefan(&[&base[..], &["--corrupt-c1", "1.001"]].concat());
    assert_eq!(code, 4);
    assert!(out.contains("status             = fail"));
    assert!(err.contains("phase_temp_max_abs"));
}

#[test]
fn equivalence_round_trip() {
    let (code, out, _) = stefan(&["equiv", "to-dirichlet", "--beta", "1", "--delta", "0", "--bc", "robin", "--h0", "2", "--u-inf", "1"]);
    assert_eq!(code, 0);
    let u0 = field(&out, "u0");
    let xi = field(&out, "xi_source");
    assert!(field(&out, "gap") <= 1e-12);

    let u0s = format!("{u0:e}");
    let (code, out, _) = stefan(&["equiv", "from-dirichlet", "--beta", "1", "--delta", "0", "--bc", "dirichlet", "--u0", &u0s, "--lambda", "1", "--u-inf", "1"]);
    assert_eq!(code, 0, "{out}");
    assert!((field(&out, "h0") - 2.0).abs() < 1e-9);
    assert!((field(&out, "xi_target") - xi).abs() < 1e-10);

    let (code, _, err) = stefan(&["equiv", "from-dirichlet", "--beta", "1", "--delta", "0", "--bc", "dirichlet", "--u0", "2", "--lambda", "1", "--u-inf", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("u_inf"));
}

#[test]
fn config_file_with_flag_override() {
    let cfg = scratch("neumann.cfg", "# classical case\nbeta = 0\ndelta = 0\nbc = neumann\nq0 = 0.1\n");
    let path = cfg.to_str().unwrap();
    let (code, out, _) = stefan(&["solve", "--config", path]);
    assert_eq!(code, 0);
    assert!((field(&out, "xi") - 0.0990).abs() < 5e-5);
    let (code, out, _) = stefan(&["solve", "--config", path, "--q0", "0.5"]);
    assert_eq!(code, 0);
    assert!((field(&out, "xi") - 0.4194).abs() < 5e-5);

    let bad = scratch("bad.cfg", "beta = 0\nbeta = 1\n");
    let (code, _, err) = stefan(&["solve", "--config", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("duplicate"));
    let (code, _, _) = stefan(&["solve", "--config", "/nonexistent/stefan.cfg"]);
    assert_eq!(code, 2);
    let _ = std::fs::remove_file(cfg);
    let _ = std::fs::remove_file(bad);
}
