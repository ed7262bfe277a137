use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use risradar::formats::{self, parse_matrix, ConfigFile, Table};
use risradar_core::analytic_peak;

fn small_scenario() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/small.toml")
}

fn risradar(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_risradar"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn run_small(subcommand: &str, out: &Path, extra: &[&str]) -> Output {
    let scenario = small_scenario();
    let mut args = vec![subcommand, "--scenario", scenario.to_str().unwrap()];
    args.extend_from_slice(extra);
    let output = risradar(&args, out);
    assert!(
        output.status.success(),
        "{subcommand} failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    output
}

#[test]
fn report_with_nothing_run_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let output = risradar(&["report"], dir.path());
    assert_eq!(output.status.code(), Some(2));
    let summary = std::fs::read_to_string(dir.path().join("summary.txt")).unwrap();
    assert!(summary.contains("studies run: 0"));
}

#[test]
fn pattern_only_report_names_the_three_files() {
    let dir = tempfile::tempdir().unwrap();
    run_small("pattern", dir.path(), &[]);
    let output = risradar(&["report"], dir.path());
    assert_ne!(output.status.code(), Some(2));
    let summary = std::fs::read_to_string(dir.path().join("summary.txt")).unwrap();
    for name in [
        "pattern_peak.csv",
        "pattern_notch.csv",
        "pattern_combined.csv",
    ] {
        let path = dir.path().join(name);
        assert!(
            summary.contains(&path.display().to_string()),
            "{name} missing"
        );
    }
    assert!(summary.contains("combined argmax"));
    assert!(summary.contains("notch nulls: 1"));
    assert!(!summary.contains("sweep table:"));
    assert!(summary.contains("studies run: 2"));
}

#[test]
fn pattern_files_span_the_grid_and_peak_at_zero_db() {
    let dir = tempfile::tempdir().unwrap();
    run_small("pattern", dir.path(), &[]);
    for name in [
        "pattern_peak.csv",
        "pattern_notch.csv",
        "pattern_combined.csv",
    ] {
        let table = Table::read(&dir.path().join(name)).unwrap();
        assert_eq!(table.columns, ["angle_deg", "power_db"]);
        let angles = table.column("angle_deg").unwrap();
        let power = table.column("power_db").unwrap();
        assert_eq!(angles.len(), 181);
        assert_eq!((angles[0], angles[180]), (0.0, 180.0));
        assert_eq!(power.iter().copied().fold(f64::NEG_INFINITY, f64::max), 0.0);
        assert!(power.iter().all(|p| *p >= -300.0));
    }
}

#[test]
fn common_flags_override_the_scenario() {
    let dir = tempfile::tempdir().unwrap();
    run_small(
        "pattern",
        dir.path(),
        &["--grid", "91", "--all-subcarriers", "--seed", "11"],
    );
    let echo = std::fs::read_to_string(dir.path().join("scenario.toml")).unwrap();
    assert!(echo.contains("grid_points = 91"));
    assert!(echo.contains("mode = \"all-subcarriers\""));
    assert!(echo.contains("seed = 11"));
    let table = Table::read(&dir.path().join("pattern_notch.csv")).unwrap();
    assert_eq!(table.rows.len(), 91);
    let stored = formats::read_config(&dir.path().join("peak_config.csv")).unwrap();
    assert_eq!(stored.seed, 11);
}

#[test]
fn conflicting_mode_flags_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let output = risradar(
        &["pattern", "--carrier-only", "--all-subcarriers"],
        dir.path(),
    );
    assert!(!output.status.success());
}

#[test]
fn invalid_scenario_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[sweep]\ntrials = 0\n").unwrap();
    let output = risradar(&["sweep", "--scenario", bad.to_str().unwrap()], dir.path());
    assert!(!output.status.success());
    assert!(String::from_utf8_lossy(&output.stderr).contains("sweep.trials"));

    std::fs::write(&bad, "[sweep]\ntrails = 3\n").unwrap();
    let output = risradar(&["sweep", "--scenario", bad.to_str().unwrap()], dir.path());
    assert!(!output.status.success());
    assert!(String::from_utf8_lossy(&output.stderr).contains("trails"));
}

#[test]
fn stored_peak_is_reused_until_the_seed_changes() {
    let dir = tempfile::tempdir().unwrap();
    run_small("train-peak", dir.path(), &[]);
    let path = dir.path().join("peak_config.csv");
    let mut stored = formats::read_config(&path).unwrap();
    stored.config = analytic_peak(stored.theta_t, 12).unwrap();
    formats::write_config(&path, &stored).unwrap();
    let planted = std::fs::read(&path).unwrap();

    run_small("pattern", dir.path(), &[]);
    assert_eq!(std::fs::read(&path).unwrap(), planted);

    run_small("pattern", dir.path(), &["--seed", "4"]);
    let retrained: ConfigFile = formats::read_config(&path).unwrap();
    assert_eq!(retrained.seed, 4);
    assert_ne!(std::fs::read(&path).unwrap(), planted);
}

#[test]
fn sweep_outputs_have_the_documented_layout() {
    let dir = tempfile::tempdir().unwrap();
    run_small("sweep", dir.path(), &[]);
    let sweep = Table::read(&dir.path().join("sweep.csv")).unwrap();
    assert_eq!(
        sweep.columns,
        [
            "power_ratio_db",
            "angle_offset_rad",
            "mean_range_error_m",
            "std_range_error_m",
            "trials"
        ]
    );
    assert_eq!(sweep.rows.len(), 4);
    assert!(sweep.rows.iter().all(|r| r[4] == 3.0));
    assert!(sweep.comments.iter().any(|c| c.contains("mean")));
    let pairs: Vec<(f64, f64)> = sweep.rows.iter().map(|r| (r[0], r[1])).collect();
    assert_eq!(pairs, [(0.0, 0.0), (0.0, 0.01), (60.0, 0.0), (60.0, 0.01)]);

    let records = Table::read(&dir.path().join("sweep_records.csv")).unwrap();
    assert_eq!(
        records.columns,
        ["seed", "power_ratio_db", "angle_rad", "range_err_m"]
    );
    assert_eq!(records.rows.len(), 12);

    let text = std::fs::read_to_string(dir.path().join("example_rvmap.txt")).unwrap();
    let map = parse_matrix(&text).unwrap();
    assert_eq!((map.rows(), map.cols()), (64, 32));
}

#[test]
fn repeated_runs_write_identical_bytes() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        run_small("sweep", dir.path(), &[]);
        run_small("multinotch", dir.path(), &[]);
    }
    for name in [
        "sweep.csv",
        "sweep_records.csv",
        "multinotch.csv",
        "peak_config.csv",
    ] {
        assert_eq!(
            std::fs::read(a.path().join(name)).unwrap(),
            std::fs::read(b.path().join(name)).unwrap(),
            "{name} differs"
        );
    }
}

#[test]
fn multinotch_table_carries_threshold_and_one_row_per_spacing() {
    let dir = tempfile::tempdir().unwrap();
    run_small("multinotch", dir.path(), &[]);
    let table = Table::read(&dir.path().join("multinotch.csv")).unwrap();
    assert_eq!(table.column("epsilon_rad").unwrap(), [0.0, 0.001, 0.01]);
    assert!(table.comments.iter().any(|c| c.contains("-30 dB")));
    let widths = table.column("suppression_bandwidth_rad").unwrap();
    assert!(widths.windows(2).all(|w| w[1] > w[0]), "{widths:?}");
    for tag in ["0e0", "1em3", "1em2"] {
        assert!(dir
            .path()
            .join(format!("multinotch_pattern_eps_{tag}.csv"))
            .exists());
        assert!(dir
            .path()
            .join(format!("multinotch_sweep_eps_{tag}.csv"))
            .exists());
    }
}
