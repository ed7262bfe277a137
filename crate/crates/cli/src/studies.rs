//! Study runners: peak training, pattern figures, interference sweeps, and
//! the multi-notch spacing study.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use risradar_core::seed::derive_seed;
use risradar_core::sim::simulate_frame_pair;
use risradar_core::synthesis::combined_config;
use risradar_core::{
    angle_grid, estimate_target, generate_symbols, multi_notch, normalize_pattern_db, notch_config,
    power_pattern, range_error, received_power, rv_map, train_peak_network, ArrayGeometry, Grid,
    InterferenceParams, NoiseParams, NotchSpec, RisConfig, Scenario as SimScenario, TargetParams,
    SPEED_OF_LIGHT,
};

use crate::formats::{self, pattern_table, ConfigFile, Table};
use crate::scenario::Scenario;

pub const PEAK_CONFIG_FILE: &str = "peak_config.csv";
pub const PEAK_TRAINING_FILE: &str = "peak_training.csv";
pub const PEAK_SUMMARY_FILE: &str = "peak_summary.toml";
pub const PATTERN_SUMMARY_FILE: &str = "pattern_summary.toml";
pub const SWEEP_FILE: &str = "sweep.csv";
pub const SWEEP_RECORDS_FILE: &str = "sweep_records.csv";
pub const SWEEP_SUMMARY_FILE: &str = "sweep_summary.toml";
pub const MULTINOTCH_FILE: &str = "multinotch.csv";
pub const MULTINOTCH_SUMMARY_FILE: &str = "multinotch_summary.toml";
pub const SCENARIO_ECHO_FILE: &str = "scenario.toml";

/// Seed-path tags keeping the random streams of different studies apart.
const SWEEP_STREAM: u64 = 1;

const MEAN_NOTE: &str =
    "range error statistics: mean and sample standard deviation over independent trials";

pub(crate) fn write_summary<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    formats::write_file(
        path,
        &toml::to_string(value).context("serializing summary")?,
    )
}

pub(crate) fn read_summary<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Records the resolved scenario next to the outputs.
pub fn echo_scenario(scenario: &Scenario, out: &Path) -> Result<()> {
    formats::write_file(&out.join(SCENARIO_ECHO_FILE), &scenario.to_toml())
}

fn half_wavelength(config: &RisConfig) -> ArrayGeometry {
    ArrayGeometry::half_wavelength(config.num_elements())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakSummary {
    pub config_file: PathBuf,
    pub elements: usize,
    pub theta_t_rad: f64,
    pub init_seed: u64,
    pub iterations: usize,
    pub initial_loss: f64,
    pub final_loss: f64,
    pub gain_ratio: f64,
}

/// Trains the peak network and writes its configuration and loss curve.
pub fn train_peak(scenario: &Scenario, out: &Path) -> Result<(RisConfig, PeakSummary)> {
    let spec = scenario.net_spec();
    let theta_t = scenario.angles.target_rad;
    let trained = train_peak_network(theta_t, scenario.geometry.peak_elements, &spec)
        .context("training the peak network")?;
    let config_file = out.join(PEAK_CONFIG_FILE);
    formats::write_config(
        &config_file,
        &ConfigFile {
            config: trained.config.clone(),
            theta_t,
            seed: spec.init_seed,
        },
    )?;
    let mut curve = Table::new(&["iteration", "loss", "best_loss"])
        .comment("loss = 1 / |c^T b(theta_t)|^2, evaluated before each update");
    for (i, (loss, best)) in trained
        .loss_history
        .iter()
        .zip(trained.best_so_far())
        .enumerate()
    {
        curve.push(vec![i as f64, *loss, best]);
    }
    curve.write(&out.join(PEAK_TRAINING_FILE))?;
    let summary = PeakSummary {
        config_file,
        elements: scenario.geometry.peak_elements,
        theta_t_rad: theta_t,
        init_seed: spec.init_seed,
        iterations: spec.num_iterations,
        initial_loss: trained.loss_history[0],
        final_loss: *trained.loss_history.last().unwrap(),
        gain_ratio: trained.gain_ratio,
    };
    write_summary(&out.join(PEAK_SUMMARY_FILE), &summary)?;
    Ok((trained.config, summary))
}

/// Reuses a stored peak when it was trained for the same angle, size, and
/// hyperparameters; otherwise trains a new one.
pub fn obtain_peak(scenario: &Scenario, out: &Path) -> Result<RisConfig> {
    let summary_path = out.join(PEAK_SUMMARY_FILE);
    let config_path = out.join(PEAK_CONFIG_FILE);
    if summary_path.exists() && config_path.exists() {
        let summary: PeakSummary = read_summary(&summary_path)?;
        let stored = formats::read_config(&config_path)?;
        let spec = scenario.net_spec();
        if summary.elements == scenario.geometry.peak_elements
            && summary.iterations == spec.num_iterations
            && stored.seed == spec.init_seed
            && stored.theta_t == scenario.angles.target_rad
            && stored.config.num_elements() == scenario.geometry.peak_elements
        {
            return Ok(stored.config);
        }
    }
    train_peak(scenario, out).map(|(config, _)| config)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternSummary {
    pub peak_file: PathBuf,
    pub notch_file: PathBuf,
    pub combined_file: PathBuf,
    pub mode: String,
    pub target_deg: f64,
    pub interferer_deg: f64,
    pub combined_argmax_deg: f64,
    pub combined_db_at_interferer: f64,
    pub notch_null_count: usize,
}

fn normalized_pattern(scenario: &Scenario, config: &RisConfig, grid: &[f64]) -> Result<Vec<f64>> {
    let raw = power_pattern(
        &half_wavelength(config),
        config,
        &scenario.ofdm_params(),
        grid,
        scenario.pattern_mode(),
    )?;
    Ok(normalize_pattern_db(&raw)?)
}

fn argmax(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, &v)| {
            if v > best.1 {
                (i, v)
            } else {
                best
            }
        })
        .0
}

/// Interior local minima deeper than `depth_db`.
pub fn count_nulls(pattern_db: &[f64], depth_db: f64) -> usize {
    pattern_db
        .windows(3)
        .filter(|w| w[1] <= w[0] && w[1] <= w[2] && w[1] < depth_db && (w[1] < w[0] || w[1] < w[2]))
        .count()
}

/// Power at `theta` relative to the maximum over `grid`, in dB.
fn relative_db(scenario: &Scenario, config: &RisConfig, grid: &[f64], theta: f64) -> Result<f64> {
    let params = scenario.ofdm_params();
    let geometry = half_wavelength(config);
    let mode = scenario.pattern_mode();
    let raw = power_pattern(&geometry, config, &params, grid, mode)?;
    let peak = raw.iter().copied().fold(0.0, f64::max);
    let at = received_power(&geometry, config, &params, &mode.bands(&params), theta)?;
    Ok(normalize_pattern_db(&[peak, at])?[1])
}

/// Normalized patterns of the peak, the single notch, and their combination.
pub fn run_pattern_study(
    scenario: &Scenario,
    peak: &RisConfig,
    out: &Path,
) -> Result<PatternSummary> {
    let grid = angle_grid(scenario.angles.grid_points)?;
    let theta_i = scenario.angles.interferer_rad;
    let notch = notch_config(theta_i)?;
    let combined = combined_config(peak, &notch)?;

    let mut files = Vec::new();
    let mut patterns = Vec::new();
    for (name, config) in [("peak", peak), ("notch", &notch), ("combined", &combined)] {
        let db = normalized_pattern(scenario, config, &grid)?;
        let path = out.join(format!("pattern_{name}.csv"));
        pattern_table(&grid, &db)
            .comment(format!(
                "normalized power pattern of the {name} configuration"
            ))
            .write(&path)?;
        files.push(path);
        patterns.push(db);
    }
    let summary = PatternSummary {
        peak_file: files[0].clone(),
        notch_file: files[1].clone(),
        combined_file: files[2].clone(),
        mode: format!("{:?}", scenario.pattern_mode()),
        target_deg: scenario.angles.target_rad.to_degrees(),
        interferer_deg: theta_i.to_degrees(),
        combined_argmax_deg: grid[argmax(&patterns[2])].to_degrees(),
        combined_db_at_interferer: relative_db(scenario, &combined, &grid, theta_i)?,
        notch_null_count: count_nulls(&patterns[1], -20.0),
    };
    write_summary(&out.join(PATTERN_SUMMARY_FILE), &summary)?;
    Ok(summary)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub power_ratio_db: f64,
    pub angle_offset_rad: f64,
    pub mean_range_error_m: f64,
    pub std_range_error_m: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

pub const SWEEP_COLUMNS: [&str; 5] = [
    "power_ratio_db",
    "angle_offset_rad",
    "mean_range_error_m",
    "std_range_error_m",
    "trials",
];

impl SweepResult {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&SWEEP_COLUMNS).comment(MEAN_NOTE);
        for r in &self.rows {
            t.push(vec![
                r.power_ratio_db,
                r.angle_offset_rad,
                r.mean_range_error_m,
                r.std_range_error_m,
                r.trials as f64,
            ]);
        }
        t
    }

    pub fn from_table(t: &Table) -> Result<Self> {
        let col = |name: &str| {
            t.column(name)
                .with_context(|| format!("sweep table lacks {name}"))
        };
        let (p, a, m, s, n) = (
            col(SWEEP_COLUMNS[0])?,
            col(SWEEP_COLUMNS[1])?,
            col(SWEEP_COLUMNS[2])?,
            col(SWEEP_COLUMNS[3])?,
            col(SWEEP_COLUMNS[4])?,
        );
        Ok(Self {
            rows: (0..p.len())
                .map(|i| SweepRow {
                    power_ratio_db: p[i],
                    angle_offset_rad: a[i],
                    mean_range_error_m: m[i],
                    std_range_error_m: s[i],
                    trials: n[i] as usize,
                })
                .collect(),
        })
    }

    /// Row for the exact (power ratio, offset) pair, if swept.
    pub fn get(&self, power_ratio_db: f64, angle_offset_rad: f64) -> Option<&SweepRow> {
        self.rows
            .iter()
            .find(|r| r.power_ratio_db == power_ratio_db && r.angle_offset_rad == angle_offset_rad)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    pub seed: u64,
    pub power_ratio_db: f64,
    pub angle_rad: f64,
    pub range_err_m: f64,
}

pub fn records_table(records: &[TrialRecord]) -> Table {
    let mut t = Table::new(&["seed", "power_ratio_db", "angle_rad", "range_err_m"]);
    for r in records {
        t.push(vec![
            r.seed as f64,
            r.power_ratio_db,
            r.angle_rad,
            r.range_err_m,
        ]);
    }
    t
}

struct TrialOutput {
    range_err_m: f64,
    received: Option<(Grid, Grid)>,
}

fn run_trial(
    scenario: &Scenario,
    config: &RisConfig,
    power_ratio_db: f64,
    angle_offset_rad: f64,
    trial_seed: u64,
    keep_grids: bool,
) -> Result<TrialOutput> {
    let params = scenario.ofdm_params();
    let sw = &scenario.sweep;
    let geometry = half_wavelength(config);
    let symbols = generate_symbols(&params, derive_seed(trial_seed, &[0]));
    let sim = SimScenario {
        params,
        geometry: &geometry,
        config,
        symbols: &symbols,
        target: TargetParams {
            range_m: sw.target_range_m,
            velocity_mps: sw.target_velocity_mps,
            angle_rad: scenario.angles.target_rad,
            amplitude: Complex64::new(1.0, 0.0),
        },
        interference: Some(InterferenceParams {
            delay_s: 2.0 * sw.interferer_range_m / SPEED_OF_LIGHT,
            doppler_scale: 2.0 * sw.interferer_velocity_mps / SPEED_OF_LIGHT,
            angle_rad: scenario.angles.interferer_rad + angle_offset_rad,
            amplitude: Complex64::new(10f64.powf(power_ratio_db / 20.0), 0.0),
            symbol_seed: derive_seed(trial_seed, &[1]),
        }),
        noise: NoiseParams {
            variance: sw.noise_variance,
            seed: derive_seed(trial_seed, &[2]),
        },
        mode: scenario.pattern_mode(),
    };
    let direct = Grid::from_fn(params.num_subcarriers, params.num_symbols, |_, _| {
        Complex64::new(sw.direct_path_amplitude, 0.0)
    });
    let y = simulate_frame_pair(&sim, &direct, derive_seed(trial_seed, &[3]))?;
    let map = rv_map(&y, &params, sw.pad_range, sw.pad_velocity)?;
    let estimate = estimate_target(&map)?;
    Ok(TrialOutput {
        range_err_m: range_error(sw.target_range_m, estimate.range_m),
        received: keep_grids.then_some((y, map.values)),
    })
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Monte-Carlo range-error statistics over the scenario's sweep grid.
///
/// Trial `t` uses the same seeds at every grid point, so points differ only
/// in power ratio and angle. Results do not depend on the rayon pool size.
pub fn simulate_sweep(
    scenario: &Scenario,
    config: &RisConfig,
) -> Result<(SweepResult, Vec<TrialRecord>)> {
    let sw = &scenario.sweep;
    let mut points = Vec::new();
    for &p in &sw.power_ratios_db {
        for &a in &sw.angle_offsets_rad {
            points.push((p, a));
        }
    }
    let jobs: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|i| (0..sw.trials).map(move |t| (i, t)))
        .collect();
    let errors: Vec<f64> = jobs
        .par_iter()
        .map(|&(i, t)| {
            let seed = derive_seed(scenario.seed, &[SWEEP_STREAM, t as u64]);
            run_trial(scenario, config, points[i].0, points[i].1, seed, false)
                .map(|o| o.range_err_m)
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(points.len());
    let mut records = Vec::with_capacity(jobs.len());
    for (i, &(p, a)) in points.iter().enumerate() {
        let chunk = &errors[i * sw.trials..(i + 1) * sw.trials];
        let (mean, std) = mean_std(chunk);
        rows.push(SweepRow {
            power_ratio_db: p,
            angle_offset_rad: a,
            mean_range_error_m: mean,
            std_range_error_m: std,
            trials: sw.trials,
        });
        for (t, &e) in chunk.iter().enumerate() {
            records.push(TrialRecord {
                seed: derive_seed(scenario.seed, &[SWEEP_STREAM, t as u64]),
                power_ratio_db: p,
                angle_rad: scenario.angles.interferer_rad + a,
                range_err_m: e,
            });
        }
    }
    rows.sort_by(|x, y| {
        x.power_ratio_db
            .total_cmp(&y.power_ratio_db)
            .then(x.angle_offset_rad.total_cmp(&y.angle_offset_rad))
    });
    Ok((SweepResult { rows }, records))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub sweep_file: PathBuf,
    pub records_file: PathBuf,
    pub example_received_file: PathBuf,
    pub example_rvmap_file: PathBuf,
    pub range_bin_m: f64,
    pub trials: usize,
    pub points: usize,
}

/// Error sweep for the peak combined with a single notch at the interferer.
pub fn run_interference_sweep(
    scenario: &Scenario,
    peak: &RisConfig,
    out: &Path,
) -> Result<SweepSummary> {
    let config = combined_config(peak, &notch_config(scenario.angles.interferer_rad)?)?;
    let (result, records) = simulate_sweep(scenario, &config)?;
    let sweep_file = out.join(SWEEP_FILE);
    let records_file = out.join(SWEEP_RECORDS_FILE);
    result
        .to_table()
        .comment(
            "power ratio is |alpha_i/alpha|^2 before RIS gains; offsets are from the designed null",
        )
        .write(&sweep_file)?;
    records_table(&records).write(&records_file)?;

    // One exported grid/map pair: strongest interference, largest offset, trial 0.
    let sw = &scenario.sweep;
    let power = sw
        .power_ratios_db
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let offset = sw
        .angle_offsets_rad
        .iter()
        .copied()
        .fold(0.0, |a: f64, b: f64| if b.abs() > a.abs() { b } else { a });
    let seed = derive_seed(scenario.seed, &[SWEEP_STREAM, 0]);
    let example = run_trial(scenario, &config, power, offset, seed, true)?;
    let (y, map) = example.received.expect("grids requested");
    let example_received_file = out.join("example_received.txt");
    let example_rvmap_file = out.join("example_rvmap.txt");
    formats::write_file(&example_received_file, &formats::format_matrix(&y))?;
    formats::write_file(&example_rvmap_file, &formats::format_matrix(&map))?;

    let summary = SweepSummary {
        sweep_file,
        records_file,
        example_received_file,
        example_rvmap_file,
        range_bin_m: scenario.ofdm_params().range_bin_size(),
        trials: sw.trials,
        points: result.rows.len(),
    };
    write_summary(&out.join(SWEEP_SUMMARY_FILE), &summary)?;
    Ok(summary)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NotchMetrics {
    pub epsilon_rad: f64,
    /// Width of the contiguous region around θ_i below the threshold.
    pub suppression_bandwidth_rad: f64,
    /// Weakest suppression between the outermost designed nulls, dB (positive).
    pub min_inband_suppression_db: f64,
}

/// Bandwidth and in-band depth of a K-notch cluster with spacing `epsilon`.
pub fn notch_metrics(scenario: &Scenario, epsilon: f64) -> Result<NotchMetrics> {
    let theta_i = scenario.angles.interferer_rad;
    let spec = NotchSpec {
        notch_angle_rad: theta_i,
        num_notches: scenario.notch.count,
        spacing_rad: epsilon,
    };
    let config = multi_notch(&spec)?;
    let params = scenario.ofdm_params();
    let geometry = half_wavelength(&config);
    let bands = scenario.pattern_mode().bands(&params);
    let grid = angle_grid(scenario.angles.grid_points)?;
    let peak = grid
        .iter()
        .map(|&t| received_power(&geometry, &config, &params, &bands, t))
        .collect::<risradar_core::Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let threshold = scenario.notch.suppression_threshold_db;
    let level_db = |theta: f64| -> Result<f64> {
        let p = received_power(&geometry, &config, &params, &bands, theta)?;
        Ok(normalize_pattern_db(&[peak, p])?[1])
    };

    // Walk outward from θ_i until the pattern rises above the threshold, then bisect.
    let edge = |direction: f64| -> Result<f64> {
        let step = 1e-3;
        let limit = if direction > 0.0 {
            std::f64::consts::PI
        } else {
            0.0
        };
        let mut inside = theta_i;
        loop {
            let next = inside + direction * step;
            if (direction > 0.0 && next >= limit) || (direction < 0.0 && next <= limit) {
                return Ok(limit);
            }
            if level_db(next)? > threshold {
                let (mut lo, mut hi) = (inside, next);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if level_db(mid)? > threshold {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                return Ok(lo);
            }
            inside = next;
        }
    };
    let bandwidth = edge(1.0)? - edge(-1.0)?;

    let angles = spec.notch_angles()?;
    let (lo, hi) = (angles[0], angles[angles.len() - 1]);
    let samples = 2001;
    let mut worst = level_db(theta_i)?;
    for k in 0..samples {
        let t = lo + (hi - lo) * k as f64 / (samples - 1) as f64;
        worst = worst.max(level_db(t)?);
    }
    Ok(NotchMetrics {
        epsilon_rad: epsilon,
        suppression_bandwidth_rad: bandwidth,
        min_inband_suppression_db: -worst,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultinotchEntry {
    pub metrics: NotchMetrics,
    pub pattern_file: PathBuf,
    pub sweep_file: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultinotchSummary {
    pub table_file: PathBuf,
    pub notches: usize,
    pub threshold_db: f64,
    pub entries: Vec<MultinotchEntry>,
}

fn epsilon_tag(eps: f64) -> String {
    format!("{eps:e}").replace('-', "m")
}

/// K-notch patterns, suppression metrics, and error sweeps for each spacing.
pub fn run_multinotch_study(
    scenario: &Scenario,
    peak: &RisConfig,
    out: &Path,
) -> Result<MultinotchSummary> {
    let grid = angle_grid(scenario.angles.grid_points)?;
    let threshold = scenario.notch.suppression_threshold_db;
    let mut table = Table::new(&[
        "epsilon_rad",
        "suppression_bandwidth_rad",
        "min_inband_suppression_db",
    ])
    .comment(format!(
        "suppression bandwidth: contiguous span around the interferer below {threshold} dB"
    ))
    .comment("in-band suppression: weakest point between the outermost designed nulls");
    let mut entries = Vec::new();
    for &eps in &scenario.notch.epsilons_rad {
        let spec = NotchSpec {
            notch_angle_rad: scenario.angles.interferer_rad,
            num_notches: scenario.notch.count,
            spacing_rad: eps,
        };
        let notches = multi_notch(&spec)?;
        let tag = epsilon_tag(eps);
        let pattern_file = out.join(format!("multinotch_pattern_eps_{tag}.csv"));
        pattern_table(&grid, &normalized_pattern(scenario, &notches, &grid)?)
            .comment(format!(
                "{} notches, spacing {eps} rad",
                scenario.notch.count
            ))
            .write(&pattern_file)?;
        let metrics = notch_metrics(scenario, eps)?;
        table.push(vec![
            eps,
            metrics.suppression_bandwidth_rad,
            metrics.min_inband_suppression_db,
        ]);
        let (result, _) = simulate_sweep(scenario, &combined_config(peak, &notches)?)?;
        let sweep_file = out.join(format!("multinotch_sweep_eps_{tag}.csv"));
        result.to_table().write(&sweep_file)?;
        entries.push(MultinotchEntry {
            metrics,
            pattern_file,
            sweep_file,
        });
    }
    let table_file = out.join(MULTINOTCH_FILE);
    table.write(&table_file)?;
    let summary = MultinotchSummary {
        table_file,
        notches: scenario.notch.count,
        threshold_db: threshold,
        entries,
    };
    write_summary(&out.join(MULTINOTCH_SUMMARY_FILE), &summary)?;
    Ok(summary)
}

/// Every study in order: training, patterns, sweep, multi-notch.
pub fn run_pipeline(scenario: &Scenario, out: &Path) -> Result<()> {
    echo_scenario(scenario, out)?;
    let (peak, _) = train_peak(scenario, out)?;
    run_pattern_study(scenario, &peak, out)?;
    run_interference_sweep(scenario, &peak, out)?;
    run_multinotch_study(scenario, &peak, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_counting() {
        assert_eq!(count_nulls(&[0.0, -50.0, 0.0, -10.0, 0.0], -20.0), 1);
        assert_eq!(count_nulls(&[0.0, -1.0, -2.0], -20.0), 0);
        assert_eq!(count_nulls(&[0.0, -300.0, -300.0, 0.0], -20.0), 2);
    }

    #[test]
    fn sample_statistics() {
        assert_eq!(mean_std(&[2.0]), (2.0, 0.0));
        let (m, s) = mean_std(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn epsilon_tags_are_filename_safe() {
        assert_eq!(epsilon_tag(0.0), "0e0");
        assert_eq!(epsilon_tag(1e-3), "1em3");
    }
}
