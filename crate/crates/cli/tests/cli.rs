use std::io::Write;
use std::process::{Command, Output};

fn gaussmac(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gaussmac"));
    cmd.args(args).env_remove("GAUSSMAC_SEED");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn config_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn metric(csv: &str, name: &str) -> Vec<String> {
    csv.lines()
        .find(|l| l.starts_with(&format!("{name},")))
        .unwrap_or_else(|| panic!("no {name} row in {csv}"))
        .split(',')
        .map(str::to_string)
        .collect()
}

#[test]
fn sweep_is_byte_identical_across_thread_counts() {
    let args = ["sweep", "--rho", "0.5", "--snr-min", "0.1", "--snr-max", "3", "--points", "12"];
    let one = gaussmac(&args, &[("RAYON_NUM_THREADS", "1")]);
    let four = gaussmac(&args, &[("RAYON_NUM_THREADS", "4")]);
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    let text = stdout(&one);
    assert_eq!(text.lines().count(), 13);
    assert!(text.starts_with("snr,d_lower,d_sep,d_uncoded,d_vq,d_sup,d_asym\n"));
    for line in text.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        let (lower, sep, unc, vq, sup) = (v[1], v[2], v[3], v[4], v[5]);
        assert!(sup <= sep + 1e-9 && sup <= unc + 1e-9 && sup <= vq + 1e-9 && lower <= sup + 1e-9);
    }
}

#[test]
fn sweep_column_subset_and_log_scale() {
    let o = gaussmac(
        &["sweep", "--points", "2", "--scale", "log", "--snr-min", "0.01", "--snr-max", "100", "--schemes", "lower,asymptote"],
        &[],
    );
    assert!(o.status.success());
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(2).unwrap().split(',').collect();
    assert_eq!(row[0], "1.00000000e2");
    assert!(!row[1].is_empty() && !row[6].is_empty());
    assert!(row[2..6].iter().all(|c| c.is_empty()));
}

#[test]
fn sweep_rejects_bad_range() {
    let o = gaussmac(&["sweep", "--snr-min", "0"], &[]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn simulate_from_config_with_overrides_and_seed() {
    let cfg = config_file("# uncoded at the optimality threshold\nscheme = uncoded\nrho = 0.5\np1 = 1\nnoise = 2\nn = 10000\ntrials = 20\nseed = 4\n");
    let path = cfg.path().to_str().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let trials_path = dir.path().join("trials.csv");
    let a = gaussmac(
        &["simulate", "--config", path, "--per-trial", trials_path.to_str().unwrap()],
        &[("RAYON_NUM_THREADS", "1")],
    );
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let b = gaussmac(&["simulate", "--config", path], &[("RAYON_NUM_THREADS", "3")]);
    assert_eq!(a.stdout, b.stdout);

    let summary = stdout(&a);
    let d1 = metric(&summary, "d1");
    assert_eq!(d1[3], "5.50000000e-1");
    assert!(d1[4].parse::<f64>().unwrap().abs() <= 3.0);
    assert_eq!(metric(&summary, "trials")[1], "20");
    let per_trial = std::fs::read_to_string(&trials_path).unwrap();
    assert_eq!(per_trial.lines().count(), 21);

    let env = gaussmac(&["simulate", "--config", path], &[("GAUSSMAC_SEED", "5")]);
    assert_ne!(env.stdout, a.stdout);
    let flag = gaussmac(&["simulate", "--config", path, "--seed", "4"], &[("GAUSSMAC_SEED", "5")]);
    assert_eq!(flag.stdout, a.stdout);
    let over = gaussmac(&["simulate", "--config", path, "--noise", "1"], &[]);
    assert_ne!(metric(&stdout(&over), "d1")[3], "5.50000000e-1");
}

#[test]
fn simulate_vq_genie_within_ten_percent() {
    let o = gaussmac(
        &["simulate", "--scheme", "vq", "--rho", "0.5", "--p1", "10", "--noise", "1", "--n", "1000", "--trials", "50", "--rate1", "0.5"],
        &[],
    );
    assert!(o.status.success());
    let d1 = metric(&stdout(&o), "d1");
    let (value, reference): (f64, f64) = (d1[1].parse().unwrap(), d1[3].parse().unwrap());
    assert!((value / reference - 1.0).abs() <= 0.1);
    assert_eq!(metric(&stdout(&o), "rates_feasible")[1], "true");
}

#[test]
fn config_errors_exit_one_with_field_name() {
    let cfg = config_file("rho = 0.5\nrhoo = 0.4\n");
    let o = gaussmac(&["simulate", "--config", cfg.path().to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains(":2: unknown key `rhoo`"), "{err}");

    let o = gaussmac(&["simulate", "--rho", "1.5"], &[]);
    assert_eq!(o.status.code(), Some(1));
    let o = gaussmac(&["simulate", "--bogus", "1"], &[]);
    assert_eq!(o.status.code(), Some(1));
    let o = gaussmac(&["simulate", "--trials", "3"], &[("GAUSSMAC_SEED", "abc")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn joint_decoding_budget_exits_two() {
    let o = gaussmac(&["simulate", "--scheme", "vq", "--mode", "full", "--n", "100", "--trials", "1"], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("budget"));
}

#[test]
fn rd_query() {
    let o = gaussmac(&["rd", "--rho", "0.5", "--d1", "0.3", "--d2", "0.3"], &[]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "d1,d2,region,rate_bits\n3.00000000e-1,3.00000000e-1,D2,1.52944684e0\n"
    );
    let o = gaussmac(&["rd", "--rho", "0.5", "--d1", "0", "--d2", "0.3"], &[]);
    assert!(stdout(&o).ends_with(",inf\n"));
    let o = gaussmac(&["rd", "--rho", "0.5", "--d1", "0.3"], &[]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_passes_on_clean_build() {
    let o = gaussmac(&["verify"], &[]);
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    assert_eq!(text.lines().count(), 8);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",pass")));
}
