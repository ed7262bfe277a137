//! Pass/fail evaluation of study outputs against the acceptance thresholds.

use crate::studies::{MultinotchSummary, PatternSummary, PeakSummary, SweepResult};

/// Minimum trained gain relative to the conjugate-steering optimum.
pub const MIN_GAIN_RATIO: f64 = 0.9;
/// Allowed distance of the combined-pattern argmax from the target angle.
pub const ARGMAX_TOLERANCE_DEG: f64 = 0.25;
/// Required depth at the interferer, carrier-only patterns.
pub const CARRIER_NULL_DB: f64 = -60.0;
/// Required depth at the interferer when every subcarrier wavelength is modeled.
pub const WIDEBAND_NULL_DB: f64 = -40.0;
/// Highest power ratio at which the exact null must keep the error within a bin.
pub const NULL_HOLDS_UP_TO_DB: f64 = 30.0;
/// Angle offset whose error curve must grow with interference power.
pub const TREND_OFFSET_RAD: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub study: &'static str,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(study: &'static str, name: impl Into<String>, pass: bool, detail: String) -> Self {
        Self {
            study,
            name: name.into(),
            pass,
            detail,
        }
    }
}

pub fn peak_checks(s: &PeakSummary) -> Vec<Check> {
    vec![Check::new(
        "train-peak",
        "gain ratio",
        s.gain_ratio >= MIN_GAIN_RATIO,
        format!("{:.4} (need >= {MIN_GAIN_RATIO})", s.gain_ratio),
    )]
}

pub fn pattern_checks(s: &PatternSummary) -> Vec<Check> {
    let miss = (s.combined_argmax_deg - s.target_deg).abs();
    let depth = if s.mode == "CarrierOnly" {
        CARRIER_NULL_DB
    } else {
        WIDEBAND_NULL_DB
    };
    vec![
        Check::new(
            "pattern",
            "combined argmax at target",
            miss <= ARGMAX_TOLERANCE_DEG + 1e-9,
            format!(
                "argmax {:.2} deg, target {:.2} deg",
                s.combined_argmax_deg, s.target_deg
            ),
        ),
        Check::new(
            "pattern",
            "combined null at interferer",
            s.combined_db_at_interferer <= depth,
            format!("{:.1} dB (need <= {depth})", s.combined_db_at_interferer),
        ),
        Check::new(
            "pattern",
            "single notch has one null",
            s.notch_null_count == 1,
            format!("{} nulls", s.notch_null_count),
        ),
    ]
}

/// Whether `values` never drops by more than `tolerance` between neighbours.
pub fn non_decreasing(values: &[f64], tolerance: f64) -> bool {
    values.windows(2).all(|w| w[1] >= w[0] - tolerance)
}

fn series<'a>(rows: impl Iterator<Item = &'a crate::studies::SweepRow>) -> Vec<f64> {
    rows.map(|r| r.mean_range_error_m).collect()
}

pub fn sweep_checks(result: &SweepResult, range_bin_m: f64) -> Vec<Check> {
    let mut checks = Vec::new();

    let at_null: Vec<_> = result
        .rows
        .iter()
        .filter(|r| r.angle_offset_rad == 0.0 && r.power_ratio_db <= NULL_HOLDS_UP_TO_DB)
        .collect();
    let worst = at_null
        .iter()
        .map(|r| r.mean_range_error_m)
        .fold(0.0, f64::max);
    checks.push(Check::new(
        "sweep",
        format!("exact null, ratios <= {NULL_HOLDS_UP_TO_DB} dB"),
        !at_null.is_empty() && worst <= range_bin_m,
        format!("{} points, worst mean error {worst:.3} m", at_null.len()),
    ));

    // Rows are sorted by power ratio, then offset.
    let along_power = series(
        result
            .rows
            .iter()
            .filter(|r| (r.angle_offset_rad - TREND_OFFSET_RAD).abs() < 1e-12),
    );
    checks.push(Check::new(
        "sweep",
        format!("error grows with power at offset {TREND_OFFSET_RAD} rad"),
        along_power.len() >= 2 && non_decreasing(&along_power, range_bin_m),
        format!("{along_power:.3?}"),
    ));

    let at_power: Vec<_> = result
        .rows
        .iter()
        .filter(|r| r.power_ratio_db == NULL_HOLDS_UP_TO_DB)
        .collect();
    let positive = series(
        at_power
            .iter()
            .copied()
            .filter(|r| r.angle_offset_rad >= 0.0),
    );
    let negative: Vec<f64> = series(
        at_power
            .iter()
            .copied()
            .filter(|r| r.angle_offset_rad <= 0.0),
    )
    .into_iter()
    .rev()
    .collect();
    checks.push(Check::new(
        "sweep",
        format!("error grows with |offset| at {NULL_HOLDS_UP_TO_DB} dB"),
        positive.len() >= 2
            && negative.len() >= 2
            && non_decreasing(&positive, range_bin_m)
            && non_decreasing(&negative, range_bin_m),
        format!("offsets >= 0: {positive:.3?}; offsets <= 0: {negative:.3?}"),
    ));
    checks
}

pub fn multinotch_checks(s: &MultinotchSummary) -> Vec<Check> {
    let mut entries: Vec<_> = s.entries.iter().map(|e| e.metrics).collect();
    entries.sort_by(|a, b| a.epsilon_rad.total_cmp(&b.epsilon_rad));
    let widths: Vec<f64> = entries
        .iter()
        .map(|m| m.suppression_bandwidth_rad)
        .collect();
    let depths: Vec<f64> = entries
        .iter()
        .map(|m| m.min_inband_suppression_db)
        .collect();
    vec![
        Check::new(
            "multinotch",
            "bandwidth widens with spacing",
            widths.len() >= 2 && widths.windows(2).all(|w| w[1] > w[0]),
            format!("{widths:.9?} rad at {} dB", s.threshold_db),
        ),
        Check::new(
            "multinotch",
            "in-band depth shrinks with spacing",
            depths.len() >= 2 && depths.windows(2).all(|w| w[1] < w[0]),
            format!("{depths:.1?} dB"),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::studies::SweepRow;

    fn row(p: f64, a: f64, m: f64) -> SweepRow {
        SweepRow {
            power_ratio_db: p,
            angle_offset_rad: a,
            mean_range_error_m: m,
            std_range_error_m: 0.0,
            trials: 1,
        }
    }

    #[test]
    fn tolerance_allows_one_bin_dips() {
        assert!(non_decreasing(&[0.0, 5.0, 4.5, 6.0], 0.75));
        assert!(!non_decreasing(&[0.0, 5.0, 4.0], 0.75));
    }

    #[test]
    fn sweep_checks_flag_a_growing_null_error() {
        let mut rows = Vec::new();
        for p in [0.0, 30.0] {
            for a in [-0.01, 0.0, 0.01] {
                rows.push(row(p, a, if a == 0.0 && p == 30.0 { 3.0 } else { 0.0 }));
            }
        }
        let checks = sweep_checks(&SweepResult { rows }, 0.75);
        assert!(!checks[0].pass);
        assert!(checks[1].pass);
        // At 30 dB the error falls from 3 m at the null to 0 m off it.
        assert!(!checks[2].pass);
    }

    #[test]
    fn missing_rows_fail_rather_than_pass() {
        let checks = sweep_checks(&SweepResult::default(), 0.75);
        assert!(checks.iter().all(|c| !c.pass));
    }
}
