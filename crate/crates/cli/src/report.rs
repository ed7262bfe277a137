//! Human-readable summary of whatever studies have written to an output directory.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::Result;

use crate::checks::{multinotch_checks, pattern_checks, peak_checks, sweep_checks, Check};
use crate::formats::{self, Table};
use crate::studies::{
    read_summary, MultinotchSummary, PatternSummary, PeakSummary, SweepResult, SweepSummary,
    MULTINOTCH_SUMMARY_FILE, PATTERN_SUMMARY_FILE, PEAK_SUMMARY_FILE, SCENARIO_ECHO_FILE,
    SWEEP_SUMMARY_FILE,
};

pub const REPORT_FILE: &str = "summary.txt";

#[derive(Debug, Clone, PartialEq)]
pub struct ReportOutcome {
    pub path: PathBuf,
    pub studies: usize,
    pub checks: Vec<Check>,
}

impl ReportOutcome {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Builds `summary.txt` in `out` from the study summaries found there.
pub fn run_report(out: &Path) -> Result<ReportOutcome> {
    let mut text = String::from("RIS radar study report\n======================\n\n");
    let mut studies = 0;
    let mut checks = Vec::new();

    let mut section =
        |title: &str, lines: Vec<String>, new_checks: Vec<Check>, text: &mut String| {
            let _ = writeln!(text, "[{title}]");
            for l in lines {
                let _ = writeln!(text, "  {l}");
            }
            checks.extend(new_checks);
            text.push('\n');
        };

    let path = out.join(PEAK_SUMMARY_FILE);
    if path.exists() {
        studies += 1;
        let s: PeakSummary = read_summary(&path)?;
        section(
            "train-peak",
            vec![
                format!("config: {}", s.config_file.display()),
                format!(
                    "elements: {}, theta_t: {} rad, seed: {}",
                    s.elements, s.theta_t_rad, s.init_seed
                ),
                format!(
                    "loss: {:.6e} -> {:.6e} over {} iterations",
                    s.initial_loss, s.final_loss, s.iterations
                ),
                format!("gain ratio: {:.6}", s.gain_ratio),
            ],
            peak_checks(&s),
            &mut text,
        );
    }

    let path = out.join(PATTERN_SUMMARY_FILE);
    if path.exists() {
        studies += 1;
        let s: PatternSummary = read_summary(&path)?;
        section(
            "pattern",
            vec![
                format!("peak pattern: {}", s.peak_file.display()),
                format!("notch pattern: {}", s.notch_file.display()),
                format!("combined pattern: {}", s.combined_file.display()),
                format!("mode: {}", s.mode),
                format!("combined argmax: {:.2} deg", s.combined_argmax_deg),
                format!(
                    "combined at {:.2} deg: {:.1} dB",
                    s.interferer_deg, s.combined_db_at_interferer
                ),
                format!("notch nulls: {}", s.notch_null_count),
            ],
            pattern_checks(&s),
            &mut text,
        );
    }

    let path = out.join(SWEEP_SUMMARY_FILE);
    if path.exists() {
        studies += 1;
        let s: SweepSummary = read_summary(&path)?;
        let result = SweepResult::from_table(&Table::read(&s.sweep_file)?)?;
        section(
            "sweep",
            vec![
                format!("sweep table: {}", s.sweep_file.display()),
                format!("trial records: {}", s.records_file.display()),
                format!(
                    "example received grid: {}",
                    s.example_received_file.display()
                ),
                format!("example rv-map: {}", s.example_rvmap_file.display()),
                format!(
                    "{} points x {} trials, range bin {} m",
                    s.points, s.trials, s.range_bin_m
                ),
            ],
            sweep_checks(&result, s.range_bin_m),
            &mut text,
        );
    }

    let path = out.join(MULTINOTCH_SUMMARY_FILE);
    if path.exists() {
        studies += 1;
        let s: MultinotchSummary = read_summary(&path)?;
        let mut lines = vec![
            format!("table: {}", s.table_file.display()),
            format!("{} notches, threshold {} dB", s.notches, s.threshold_db),
        ];
        for e in &s.entries {
            lines.push(format!(
                "eps {:e}: bandwidth {:.9} rad, in-band suppression {:.1} dB ({}, {})",
                e.metrics.epsilon_rad,
                e.metrics.suppression_bandwidth_rad,
                e.metrics.min_inband_suppression_db,
                e.pattern_file.display(),
                e.sweep_file.display()
            ));
        }
        section("multinotch", lines, multinotch_checks(&s), &mut text);
    }

    let _ = writeln!(text, "studies run: {studies}");
    if studies == 0 {
        text.push_str("nothing to report\n");
    }
    for c in &checks {
        let verdict = if c.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(text, "{verdict}  {}: {} ({})", c.study, c.name, c.detail);
    }

    let echo = out.join(SCENARIO_ECHO_FILE);
    if echo.exists() {
        text.push_str("\nparameters\n----------\n");
        text.push_str(&std::fs::read_to_string(&echo)?);
    }

    let path = out.join(REPORT_FILE);
    formats::write_file(&path, &text)?;
    Ok(ReportOutcome {
        path,
        studies,
        checks,
    })
}
