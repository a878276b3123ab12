use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use irslink_cli::ScenarioFile;
use irslink_core::{compare_models, conventional_rx_power, RadioConfig};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_irslink"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    fs::read_to_string(path).unwrap()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .parse()
        .unwrap()
}

#[test]
fn direct_unity_case() {
    let o = run(&["direct", "--scenario", fixture("unity.toml").to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("power_w = 0.00633257397765"), "{text}");
}

#[test]
fn direct_matches_core_at_3p5_ghz() {
    let o = run(&["direct", "--distance", "10", "--alpha", "2"]);
    assert!(o.status.success());
    let printed = value(&stdout(&o), "power_w");
    let radio = RadioConfig::new(3.5e9, 1.0, 20e6, 1.0, 1.0).unwrap();
    let core = conventional_rx_power(&radio, 10.0, 1.0, 2.0).unwrap();
    assert!((printed - core).abs() <= 5e-12 * core);
}

#[test]
fn direct_monte_carlo_reports_error_bar() {
    let o = run(&["direct", "--fading", "rayleigh", "--mc-samples", "5000", "--seed", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(value(&text, "std_error_w") > 0.0);
    assert_eq!(value(&text, "monte_carlo_n"), 5000.0);
}

#[test]
fn irs_rejects_grazing_angle_before_evaluating() {
    let o = run(&["irs", "--theta-t-deg", "90"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("panel.theta_t_deg"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["direct", "--seed", "many"]).status.code(), Some(1));
    assert_eq!(run(&["direct", "--distance=-3"]).status.code(), Some(2));
    assert_eq!(
        run(&["direct", "--scenario", "/no/such/scenario.toml"]).status.code(),
        Some(3)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn invalid_scenario_names_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    let text = fs::read_to_string(fixture("small.toml"))
        .unwrap()
        .replace("transmit_power_w = 1.0", "transmit_power_w = -2.0");
    fs::write(&path, text).unwrap();
    let o = run(&["direct", "--scenario", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("radio.transmit_power_w"));
}

#[test]
fn three_point_sweep_writes_four_lines() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = fixture("unity.toml");
    let o = run(&[
        "sweep",
        "--scenario",
        scenario.to_str().unwrap(),
        "--start",
        "1",
        "--stop",
        "3",
        "--step",
        "1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("distance_sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(!csv.contains('\r'));
    assert!(dir.path().join("distance_sweep.meta.toml").exists());
}

#[test]
fn golden_tables_through_the_binary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let scenario = fixture("small.toml");
    let s = scenario.to_str().unwrap();
    for args in [
        vec!["sweep"],
        vec!["sweep", "--kind", "angle"],
        vec!["coverage"],
        vec!["compare"],
    ] {
        let mut full = args.clone();
        full.extend(["--scenario", s, "--out", out]);
        assert!(run(&full).status.success());
    }
    for name in ["distance_sweep", "angle_sweep", "coverage", "compare"] {
        let got = fs::read_to_string(dir.path().join(format!("{name}.csv"))).unwrap();
        assert_eq!(got, golden(&format!("{name}.csv")), "{name}");
    }

    let mc = dir.path().join("mc");
    let o = run(&[
        "sweep",
        "--scenario",
        s,
        "--fading",
        "rayleigh",
        "--mc-samples",
        "200",
        "--seed",
        "11",
        "--out",
        mc.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(
        fs::read_to_string(mc.join("distance_sweep.csv")).unwrap(),
        golden("distance_sweep_mc.csv")
    );
}

#[test]
fn compare_summary_matches_engine() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["compare", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);

    let file = ScenarioFile::default_scenario();
    let summary = compare_models(
        &file.scenario().unwrap(),
        &file.sweep_spec(irslink_cli::scenario::SweepKindName::Compare).unwrap(),
    )
    .unwrap();
    let line = |prefix: &str| {
        text.lines()
            .find(|l| l.starts_with(prefix))
            .unwrap()
            .split_whitespace()
            .filter_map(|w| w.parse::<f64>().ok())
            .collect::<Vec<_>>()
    };
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * b.abs();
    let conv = line("conventional:");
    let irs = line("irs:");
    assert!(close(conv[0], summary.conventional.max_dbm) && close(conv[1], summary.conventional.min_dbm));
    assert!(close(irs[0], summary.irs.max_dbm) && close(irs[1], summary.irs.min_dbm));
    assert!(close(value(&text, "edge_delta_db"), summary.edge_delta_db()));

    // The shipped defaults keep the IRS curve at least 30 dB above the
    // conventional one at both ends of the range.
    assert!(summary.irs.max_dbm - summary.conventional.max_dbm >= 30.0);
    assert!(summary.irs.min_dbm - summary.conventional.min_dbm >= 30.0);
}

#[test]
fn plots_are_written_and_non_empty() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    for args in [
        vec!["sweep", "--plot"],
        vec!["sweep", "--kind", "angle", "--plot"],
        vec!["coverage", "--plot", "--nx", "6", "--ny", "6"],
        vec!["compare", "--plot"],
    ] {
        let mut full = args.clone();
        full.extend(["--out", out]);
        assert!(run(&full).status.success());
    }
    for name in ["distance_sweep", "angle_sweep", "coverage", "compare"] {
        let svg = fs::read_to_string(dir.path().join(format!("{name}.svg"))).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("<polyline") || svg.contains("<rect x="), "{name}");
    }
}

#[test]
fn unwritable_output_leaves_no_partial_files() {
    let dir = tempfile::tempdir().unwrap();
    // A directory where the CSV should go makes the rename fail after other
    // files may have been placed.
    fs::create_dir(dir.path().join("compare.meta.toml")).unwrap();
    fs::write(dir.path().join("compare.meta.toml").join("x"), "").unwrap();
    let o = run(&["compare", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!dir.path().join("compare.csv").exists());

    let file_as_dir = dir.path().join("plain");
    fs::write(&file_as_dir, "").unwrap();
    let o = run(&["sweep", "--out", file_as_dir.join("sub").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn flags_override_scenario_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let base = fixture("small.toml");
    let s = base.to_str().unwrap();

    // Each override lands in the echoed scenario metadata.
    let cases: &[(&[&str], &str)] = &[
        (&["--seed", "99"], "seed = 99"),
        (&["--mc-samples", "17"], "monte_carlo_n = 17"),
        (&["--fading", "rayleigh"], "mode = \"rayleigh\""),
        (&["--alpha", "3.25"], "alpha = 3.25"),
        (&["--tx-power-w", "2.5"], "transmit_power_w = 2.5"),
        (&["--carrier-hz", "28000000000"], "carrier_frequency_hz = 28000000000.0"),
        (&["--theta-t-deg", "30"], "theta_t_deg = 30.0"),
        (&["--theta-r-deg", "35"], "theta_r_deg = 35.0"),
        (&["--start", "25"], "start_m = 25.0"),
        (&["--stop", "35"], "stop_m = 35.0"),
        (&["--step", "5"], "step_m = 5.0"),
    ];
    for (flags, expect) in cases {
        let mut args = vec!["sweep", "--scenario", s, "--out", out];
        args.extend_from_slice(flags);
        let o = run(&args);
        assert!(o.status.success(), "{flags:?}: {}", String::from_utf8_lossy(&o.stderr));
        let meta = fs::read_to_string(dir.path().join("distance_sweep.meta.toml")).unwrap();
        assert!(meta.contains(expect), "{flags:?}\n{meta}");
    }

    let o = run(&["coverage", "--scenario", s, "--out", out, "--nx", "4", "--ny", "5"]);
    assert!(o.status.success());
    let csv = fs::read_to_string(dir.path().join("coverage.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 4 * 5);

    let direct = stdout(&run(&["direct", "--scenario", s, "--distance", "12.5"]));
    assert_eq!(value(&direct, "distance_m"), 12.5);
    let irs = stdout(&run(&["irs", "--scenario", s, "--d1", "22", "--d2", "9"]));
    assert_eq!((value(&irs, "d1_m"), value(&irs, "d2_m")), (22.0, 9.0));
}
