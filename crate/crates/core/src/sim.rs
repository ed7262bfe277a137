//! Symbol-domain received grid `y[n, m]` after CP removal, FFT, and division
//! by the radar's own symbols.
//!
//! ```text
//! y[n,m] = g_t(n,m) e^{-j2π nΔf τ} e^{+j2π f_c ν mT}
//!        + g_i(n,m) (d_i/d_v)(n,m) e^{-j2π nΔf τ_i} e^{+j2π f_c ν_i mT}
//!        + z[n,m]
//! ```
//!
//! with `g = α · C_m^T b_n(θ)`: the RIS gain toward each source scales the
//! path amplitude, and amplitudes are specified before that gain.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
#[allow(unused_imports)] // needed only when std is absent from the build
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::array::{steering_vector, ArrayGeometry, PatternMode, RisConfig};
use crate::error::{check_angle, Error, Result};
use crate::params::{OfdmParams, SPEED_OF_LIGHT};

/// Dense complex matrix, row-major. Received grids use rows for
/// subcarriers `n` and columns for symbols `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl Grid {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape {
                what: "grid data",
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn energy(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum()
    }

    fn check_same_shape(&self, other: &Grid, what: &'static str) -> Result<()> {
        if self.rows != other.rows {
            return Err(Error::Shape {
                what,
                expected: self.rows,
                found: other.rows,
            });
        }
        if self.cols != other.cols {
            return Err(Error::Shape {
                what,
                expected: self.cols,
                found: other.cols,
            });
        }
        Ok(())
    }

    /// Elementwise `self + other`.
    pub fn add(&self, other: &Grid) -> Result<Grid> {
        self.check_same_shape(other, "grid addition")?;
        Ok(Grid {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}

/// Unit-power QPSK symbols, `N × M`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolGrid {
    pub symbols: Grid,
    pub seed: u64,
}

/// The four QPSK points `e^{jπ(2k+1)/4}`.
pub const QPSK: [Complex64; 4] = [
    Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2),
    Complex64::new(-FRAC_1_SQRT_2, FRAC_1_SQRT_2),
    Complex64::new(-FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
    Complex64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
];

pub fn generate_symbols(params: &OfdmParams, seed: u64) -> SymbolGrid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let symbols = Grid::from_fn(params.num_subcarriers, params.num_symbols, |_, _| {
        QPSK[rng.random_range(0..4usize)]
    });
    SymbolGrid { symbols, seed }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetParams {
    pub range_m: f64,
    pub velocity_mps: f64,
    pub angle_rad: f64,
    pub amplitude: Complex64,
}

impl TargetParams {
    /// Round-trip delay `2R/c`.
    pub fn delay_s(&self) -> f64 {
        2.0 * self.range_m / SPEED_OF_LIGHT
    }

    /// Doppler scale `2v/c`.
    pub fn doppler_scale(&self) -> f64 {
        2.0 * self.velocity_mps / SPEED_OF_LIGHT
    }

    fn validate(&self, params: &OfdmParams) -> Result<()> {
        if !(self.range_m.is_finite()
            && self.range_m >= 0.0
            && self.range_m < params.unambiguous_range())
        {
            return Err(Error::Domain {
                what: "target range",
                value: self.range_m,
            });
        }
        if !self.velocity_mps.is_finite() {
            return Err(Error::Domain {
                what: "target velocity",
                value: self.velocity_mps,
            });
        }
        check_angle("target angle", self.angle_rad)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceParams {
    pub delay_s: f64,
    pub doppler_scale: f64,
    pub angle_rad: f64,
    pub amplitude: Complex64,
    /// Seed for the interferer's own QPSK stream, independent of the radar's.
    pub symbol_seed: u64,
}

/// Circularly symmetric complex Gaussian noise with total variance `variance`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    pub variance: f64,
    pub seed: u64,
}

impl NoiseParams {
    pub fn silent() -> Self {
        Self {
            variance: 0.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Scenario<'a> {
    pub params: OfdmParams,
    pub geometry: &'a ArrayGeometry,
    pub config: &'a RisConfig,
    pub symbols: &'a SymbolGrid,
    pub target: TargetParams,
    pub interference: Option<InterferenceParams>,
    pub noise: NoiseParams,
    /// Whether RIS gains use the carrier wavelength or each subcarrier's own.
    pub mode: PatternMode,
}

/// `α · C_m^T b_n(θ)` for every `(n, slot)`, laid out `n * slots + slot`.
fn ris_gains(scenario: &Scenario<'_>, theta: f64, alpha: Complex64) -> Result<Vec<Complex64>> {
    let params = &scenario.params;
    let config = scenario.config;
    let slots = config.num_slots();
    let mut gains = Vec::with_capacity(params.num_subcarriers * slots);
    let mut cached: Option<Vec<Complex64>> = None;
    for n in 0..params.num_subcarriers {
        if scenario.mode == PatternMode::AllSubcarriers || cached.is_none() {
            let b = steering_vector(scenario.geometry, params, scenario.mode.band_for(n), theta)?;
            cached = Some(
                config
                    .columns()
                    .map(|col| {
                        alpha
                            * col
                                .iter()
                                .zip(&b.values)
                                .map(|(c, v)| c * v)
                                .sum::<Complex64>()
                    })
                    .collect(),
            );
        }
        gains.extend_from_slice(cached.as_ref().unwrap());
    }
    Ok(gains)
}

fn validate(scenario: &Scenario<'_>) -> Result<()> {
    let params = &scenario.params;
    params.validate()?;
    let config = scenario.config;
    if config.num_elements() != scenario.geometry.num_elements {
        return Err(Error::Shape {
            what: "configuration length vs. geometry",
            expected: scenario.geometry.num_elements,
            found: config.num_elements(),
        });
    }
    if config.num_slots() != 1 && config.num_slots() != params.num_symbols {
        return Err(Error::Shape {
            what: "configuration time slots vs. symbols",
            expected: params.num_symbols,
            found: config.num_slots(),
        });
    }
    let sym = &scenario.symbols.symbols;
    if sym.rows() != params.num_subcarriers || sym.cols() != params.num_symbols {
        return Err(Error::Shape {
            what: "radar symbol grid",
            expected: params.num_subcarriers * params.num_symbols,
            found: sym.rows() * sym.cols(),
        });
    }
    if !(scenario.noise.variance.is_finite() && scenario.noise.variance >= 0.0) {
        return Err(Error::Domain {
            what: "noise variance",
            value: scenario.noise.variance,
        });
    }
    if let Some(i) = &scenario.interference {
        check_angle("interferer angle", i.angle_rad)?;
    }
    scenario.target.validate(params)
}

/// Adds one echo `gain · e^{-j2π nΔf τ} e^{+j2π f_c ν mT}` (times `ratio(n, m)`) into `y`.
fn add_path(
    y: &mut Grid,
    params: &OfdmParams,
    gains: &[Complex64],
    slots: usize,
    delay: f64,
    doppler: f64,
    ratio: Option<&Grid>,
) {
    let df = params.subcarrier_spacing();
    let t = params.total_symbol_time();
    let symbol_phase: Vec<Complex64> = (0..params.num_symbols)
        .map(|m| {
            Complex64::from_polar(
                1.0,
                2.0 * PI * params.carrier_freq_hz * doppler * m as f64 * t,
            )
        })
        .collect();
    for n in 0..params.num_subcarriers {
        let range_phase = Complex64::from_polar(1.0, -2.0 * PI * n as f64 * df * delay);
        for (m, dop) in symbol_phase.iter().enumerate() {
            let slot = if slots == 1 { 0 } else { m };
            let mut v = gains[n * slots + slot] * range_phase * dop;
            if let Some(r) = ratio {
                v *= r.get(n, m);
            }
            let cell = &mut y.data[n * params.num_symbols + m];
            *cell += v;
        }
    }
}

/// Received grid for one frame.
pub fn simulate_received(scenario: &Scenario<'_>) -> Result<Grid> {
    validate(scenario)?;
    let params = &scenario.params;
    let slots = scenario.config.num_slots();
    let mut y = Grid::zeros(params.num_subcarriers, params.num_symbols);

    let target = &scenario.target;
    let gains = ris_gains(scenario, target.angle_rad, target.amplitude)?;
    add_path(
        &mut y,
        params,
        &gains,
        slots,
        target.delay_s(),
        target.doppler_scale(),
        None,
    );

    if let Some(interf) = &scenario.interference {
        let theirs = generate_symbols(params, interf.symbol_seed);
        let ours = &scenario.symbols.symbols;
        let ratio = Grid::from_fn(params.num_subcarriers, params.num_symbols, |n, m| {
            theirs.symbols.get(n, m) / ours.get(n, m)
        });
        let gains = ris_gains(scenario, interf.angle_rad, interf.amplitude)?;
        add_path(
            &mut y,
            params,
            &gains,
            slots,
            interf.delay_s,
            interf.doppler_scale,
            Some(&ratio),
        );
    }

    if scenario.noise.variance > 0.0 {
        let sigma = (scenario.noise.variance / 2.0).sqrt();
        let mut rng = ChaCha8Rng::seed_from_u64(scenario.noise.seed);
        for v in y.data.iter_mut() {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *v += Complex64::new(sigma * re, sigma * im);
        }
    }
    Ok(y)
}

/// `(y_a - y_b) / 2` for frames taken with configurations `C` and `-C`.
///
/// Anything that does not pass through the RIS is common to both frames and
/// cancels; the RIS path flips sign and is kept at full amplitude.
pub fn frame_difference(y_a: &Grid, y_b: &Grid) -> Result<Grid> {
    y_a.check_same_shape(y_b, "frame difference")?;
    Ok(Grid {
        rows: y_a.rows,
        cols: y_a.cols,
        data: y_a
            .data
            .iter()
            .zip(&y_b.data)
            .map(|(a, b)| (a - b) * 0.5)
            .collect(),
    })
}

/// Simulates the `C` / `-C` frame pair with `static_term` added to both,
/// drawing the second frame's noise from `second_noise_seed`, and returns
/// their difference.
pub fn simulate_frame_pair(
    scenario: &Scenario<'_>,
    static_term: &Grid,
    second_noise_seed: u64,
) -> Result<Grid> {
    let first = simulate_received(scenario)?.add(static_term)?;
    let negated = scenario.config.negated();
    let second_scenario = Scenario {
        config: &negated,
        noise: NoiseParams {
            seed: second_noise_seed,
            ..scenario.noise
        },
        ..scenario.clone()
    };
    let second = simulate_received(&second_scenario)?.add(static_term)?;
    frame_difference(&first, &second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthesis::{analytic_peak, combined_config, notch_config};

    fn single_element() -> (ArrayGeometry, RisConfig) {
        (
            ArrayGeometry::half_wavelength(1),
            RisConfig::from_column(vec![Complex64::new(1.0, 0.0)]).unwrap(),
        )
    }

    fn target(range_m: f64, velocity_mps: f64) -> TargetParams {
        TargetParams {
            range_m,
            velocity_mps,
            angle_rad: 1.0,
            amplitude: Complex64::new(1.0, 0.0),
        }
    }

    #[test]
    fn symbols_are_unit_qpsk_and_reproducible() {
        let p = OfdmParams::default();
        let a = generate_symbols(&p, 11);
        for v in a.symbols.as_slice() {
            assert!((v.norm() - 1.0).abs() < 1e-15);
            assert!(QPSK.contains(v));
        }
        assert_eq!(a, generate_symbols(&p, 11));
        assert_ne!(a, generate_symbols(&p, 12));
    }

    #[test]
    fn qpsk_points_are_equiprobable() {
        let p = OfdmParams {
            num_subcarriers: 1000,
            num_symbols: 1000,
            ..OfdmParams::default()
        };
        let grid = generate_symbols(&p, 2024);
        let mut counts = [0usize; 4];
        for v in grid.symbols.as_slice() {
            counts[QPSK.iter().position(|q| q == v).unwrap()] += 1;
        }
        let total = 1e6;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - total / 4.0).powi(2) / (total / 4.0))
            .sum();
        // 3 dof, p = 0.001 critical value.
        assert!(chi2 < 16.27, "chi2 {chi2}");
        for c in counts {
            assert!((c as f64 / total - 0.25).abs() < 0.01);
        }
    }

    #[test]
    fn stationary_target_at_zero_range_is_all_ones() {
        let p = OfdmParams::default();
        let (g, c) = single_element();
        let s = generate_symbols(&p, 1);
        let y = simulate_received(&Scenario {
            params: p,
            geometry: &g,
            config: &c,
            symbols: &s,
            target: target(0.0, 0.0),
            interference: None,
            noise: NoiseParams::silent(),
            mode: PatternMode::AllSubcarriers,
        })
        .unwrap();
        for v in y.as_slice() {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn rejects_mismatched_shapes() {
        let p = OfdmParams::default();
        let g = ArrayGeometry::half_wavelength(3);
        let (_, c) = single_element();
        let s = generate_symbols(&p, 1);
        let sc = Scenario {
            params: p,
            geometry: &g,
            config: &c,
            symbols: &s,
            target: target(1.0, 0.0),
            interference: None,
            noise: NoiseParams::silent(),
            mode: PatternMode::CarrierOnly,
        };
        assert!(matches!(simulate_received(&sc), Err(Error::Shape { .. })));
        let g1 = ArrayGeometry::half_wavelength(1);
        let bad_range = Scenario {
            geometry: &g1,
            target: target(p.unambiguous_range(), 0.0),
            ..sc.clone()
        };
        assert!(matches!(
            simulate_received(&bad_range),
            Err(Error::Domain { .. })
        ));
        let timed = RisConfig::repeated(&[Complex64::new(1.0, 0.0)], 7).unwrap();
        let bad_slots = Scenario {
            geometry: &g1,
            config: &timed,
            ..sc
        };
        assert!(simulate_received(&bad_slots).is_err());
    }

    #[test]
    fn superposition_holds() {
        let p = OfdmParams::default();
        let peak = analytic_peak(1.25, 20).unwrap();
        let g = ArrayGeometry::half_wavelength(20);
        let s = generate_symbols(&p, 5);
        let interf = InterferenceParams {
            delay_s: 1.3e-7,
            doppler_scale: 3e-7,
            angle_rad: 0.9,
            amplitude: Complex64::new(3.0, -1.0),
            symbol_seed: 77,
        };
        let base = Scenario {
            params: p,
            geometry: &g,
            config: &peak,
            symbols: &s,
            target: TargetParams {
                range_m: 12.3,
                velocity_mps: 20.0,
                angle_rad: 1.25,
                amplitude: Complex64::new(0.5, 0.2),
            },
            interference: Some(interf),
            noise: NoiseParams::silent(),
            mode: PatternMode::AllSubcarriers,
        };
        let both = simulate_received(&base).unwrap();
        let target_only = simulate_received(&Scenario {
            interference: None,
            ..base.clone()
        })
        .unwrap();
        let interf_only = simulate_received(&Scenario {
            target: TargetParams {
                amplitude: Complex64::new(0.0, 0.0),
                ..base.target
            },
            ..base.clone()
        })
        .unwrap();
        let sum = target_only.add(&interf_only).unwrap();
        for (a, b) in both.as_slice().iter().zip(sum.as_slice()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn notch_suppresses_interference_everywhere() {
        let p = OfdmParams::default();
        let (theta, theta_i) = (2.0 * PI / 5.0, PI / 4.0);
        let peak = analytic_peak(theta, 200).unwrap();
        let combined = combined_config(&peak, &notch_config(theta_i).unwrap()).unwrap();
        let s = generate_symbols(&p, 9);
        let interferer_only = |g: &ArrayGeometry, c: &RisConfig| {
            simulate_received(&Scenario {
                params: p,
                geometry: g,
                config: c,
                symbols: &s,
                target: TargetParams {
                    range_m: 0.0,
                    velocity_mps: 0.0,
                    angle_rad: theta,
                    amplitude: Complex64::new(0.0, 0.0),
                },
                interference: Some(InterferenceParams {
                    delay_s: 2e-7,
                    doppler_scale: 0.0,
                    angle_rad: theta_i,
                    amplitude: Complex64::new(1.0, 0.0),
                    symbol_seed: 4,
                }),
                noise: NoiseParams::silent(),
                mode: PatternMode::CarrierOnly,
            })
            .unwrap()
        };
        let mitigated = interferer_only(&ArrayGeometry::half_wavelength(201), &combined);
        let unmitigated = interferer_only(&ArrayGeometry::half_wavelength(200), &peak);
        for (a, b) in mitigated.as_slice().iter().zip(unmitigated.as_slice()) {
            assert!(
                a.norm_sqr() <= 1e-8 * b.norm_sqr(),
                "{} vs {}",
                a.norm_sqr(),
                b.norm_sqr()
            );
        }
    }

    #[test]
    fn frame_difference_removes_static_term() {
        let p = OfdmParams::default();
        let peak = analytic_peak(1.0, 8).unwrap();
        let g = ArrayGeometry::half_wavelength(8);
        let s = generate_symbols(&p, 3);
        let sc = Scenario {
            params: p,
            geometry: &g,
            config: &peak,
            symbols: &s,
            target: TargetParams {
                range_m: 20.0,
                velocity_mps: 5.0,
                angle_rad: 1.0,
                amplitude: Complex64::new(1.0, 0.0),
            },
            interference: None,
            noise: NoiseParams::silent(),
            mode: PatternMode::CarrierOnly,
        };
        let ris_path = simulate_received(&sc).unwrap();
        let zero = Grid::zeros(100, 50);
        let clean = simulate_frame_pair(&sc, &zero, 1).unwrap();
        assert_eq!(clean, ris_path);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let clutter = Grid::from_fn(100, 50, |_, _| {
            Complex64::new(rng.random_range(-1e3..1e3), rng.random_range(-1e3..1e3))
        });
        let cleaned = simulate_frame_pair(&sc, &clutter, 1).unwrap();
        for (a, b) in cleaned.as_slice().iter().zip(ris_path.as_slice()) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!(frame_difference(&zero, &Grid::zeros(50, 100)).is_err());
    }
}
