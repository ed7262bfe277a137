//! Element geometry, steering vectors, configurations, and beampatterns.
//!
//! The array is linear with a uniform phase progression over the element
//! index `l`. At subcarrier `n` and incidence angle `θ` element `l` responds
//! with
//!
//! ```text
//! b_n(θ)[l] = exp(-j 2π s (λ/λ_n) l cos θ) · exp(-j 2π d_l / λ_n)
//! ```
//!
//! where `s` is the element spacing in carrier wavelengths (½ by default) and
//! `d_l` the element-to-antenna offset. A configuration column `c` then has
//! pattern value `Σ_l c_l b_n(θ)[l]`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // needed only when std is absent from the build
use num_traits::Float;

use crate::error::{check_angle, Error, Result};
use crate::params::OfdmParams;

/// Floor applied to exact zeros when converting a pattern to dB.
pub const DEFAULT_FLOOR_DB: f64 = -300.0;

/// Default angle grid resolution: 0.25° over [0, π].
pub const DEFAULT_GRID_POINTS: usize = 721;

/// Which wavelength a steering vector or pattern is evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    /// λ_n ≈ λ for every subcarrier.
    Carrier,
    /// The exact wavelength of subcarrier `n`.
    Subcarrier(usize),
}

/// How a power pattern treats the subcarriers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PatternMode {
    /// Single term at the carrier wavelength.
    #[default]
    CarrierOnly,
    /// Sum over all `N` subcarriers at their own wavelengths.
    AllSubcarriers,
}

impl PatternMode {
    /// The bands a pattern in this mode is summed over.
    pub fn bands(self, params: &OfdmParams) -> Vec<Band> {
        match self {
            PatternMode::CarrierOnly => vec![Band::Carrier],
            PatternMode::AllSubcarriers => {
                (0..params.num_subcarriers).map(Band::Subcarrier).collect()
            }
        }
    }

    /// Band used for subcarrier `n` of a received grid.
    pub fn band_for(self, n: usize) -> Band {
        match self {
            PatternMode::CarrierOnly => Band::Carrier,
            PatternMode::AllSubcarriers => Band::Subcarrier(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArrayGeometry {
    pub num_elements: usize,
    pub element_spacing_wavelengths: f64,
    pub element_to_antenna_offsets_m: Vec<f64>,
}

impl ArrayGeometry {
    /// Half-wavelength spacing, all elements co-located with the antenna.
    pub fn half_wavelength(num_elements: usize) -> Self {
        Self {
            num_elements,
            element_spacing_wavelengths: 0.5,
            element_to_antenna_offsets_m: vec![0.0; num_elements],
        }
    }

    pub fn with_offsets(mut self, offsets_m: Vec<f64>) -> Result<Self> {
        if offsets_m.len() != self.num_elements {
            return Err(Error::Shape {
                what: "element offsets",
                expected: self.num_elements,
                found: offsets_m.len(),
            });
        }
        self.element_to_antenna_offsets_m = offsets_m;
        Ok(self)
    }

    fn has_offsets(&self) -> bool {
        self.element_to_antenna_offsets_m.iter().any(|&d| d != 0.0)
    }
}

/// Complex reflection coefficients, `num_elements × num_slots`.
///
/// Stored slot-major so that each time slot's element vector is contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct RisConfig {
    num_elements: usize,
    num_slots: usize,
    coefficients: Vec<Complex64>,
}

impl RisConfig {
    /// Builds a config from slot-major coefficients (`slot * num_elements + l`).
    pub fn new(
        num_elements: usize,
        num_slots: usize,
        coefficients: Vec<Complex64>,
    ) -> Result<Self> {
        if num_elements == 0 {
            return Err(Error::Domain {
                what: "element count",
                value: 0.0,
            });
        }
        if num_slots == 0 {
            return Err(Error::Domain {
                what: "time-slot count",
                value: 0.0,
            });
        }
        if coefficients.len() != num_elements * num_slots {
            return Err(Error::Shape {
                what: "configuration coefficients",
                expected: num_elements * num_slots,
                found: coefficients.len(),
            });
        }
        if let Some(bad) = coefficients.iter().find(|c| !c.is_finite()) {
            return Err(Error::Domain {
                what: "configuration coefficient",
                value: bad.norm(),
            });
        }
        Ok(Self {
            num_elements,
            num_slots,
            coefficients,
        })
    }

    /// A static (single-slot) configuration.
    pub fn from_column(column: Vec<Complex64>) -> Result<Self> {
        let len = column.len();
        Self::new(len, 1, column)
    }

    /// Repeats a single column over `num_slots` time slots.
    pub fn repeated(column: &[Complex64], num_slots: usize) -> Result<Self> {
        let mut coefficients = Vec::with_capacity(column.len() * num_slots);
        for _ in 0..num_slots {
            coefficients.extend_from_slice(column);
        }
        Self::new(column.len(), num_slots, coefficients)
    }

    pub fn num_elements(&self) -> usize {
        self.num_elements
    }

    pub fn num_slots(&self) -> usize {
        self.num_slots
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn column(&self, slot: usize) -> &[Complex64] {
        let start = slot * self.num_elements;
        &self.coefficients[start..start + self.num_elements]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[Complex64]> {
        self.coefficients.chunks_exact(self.num_elements)
    }

    /// Column applied during OFDM symbol `m`; static configs broadcast.
    pub fn column_for_symbol(&self, m: usize) -> &[Complex64] {
        if self.num_slots == 1 {
            self.column(0)
        } else {
            self.column(m)
        }
    }

    /// True when every time slot carries the same coefficients.
    pub fn is_static(&self) -> bool {
        let first = self.column(0);
        self.columns().all(|c| c == first)
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            num_elements: self.num_elements,
            num_slots: self.num_slots,
            coefficients: self.coefficients.iter().map(|c| c * factor).collect(),
        }
    }

    /// The sign-flipped configuration used for the second frame of a pair.
    pub fn negated(&self) -> Self {
        self.scaled(Complex64::new(-1.0, 0.0))
    }

    pub fn max_magnitude(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Rescales so the largest coefficient has unit magnitude. The pattern
    /// shape is unchanged.
    pub fn normalized_to_unit_disk(&self) -> Result<Self> {
        let peak = self.max_magnitude();
        if peak == 0.0 {
            return Err(Error::Degenerate("all-zero configuration"));
        }
        Ok(self.scaled(Complex64::new(1.0 / peak, 0.0)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteeringVector {
    pub values: Vec<Complex64>,
    pub band: Band,
    pub angle_rad: f64,
}

fn band_ratio(params: &OfdmParams, band: Band) -> Result<(f64, f64)> {
    match band {
        Band::Carrier => Ok((1.0, params.wavelength())),
        Band::Subcarrier(n) => {
            if n >= params.num_subcarriers {
                return Err(Error::Index {
                    what: "subcarrier",
                    index: n,
                    limit: params.num_subcarriers,
                });
            }
            Ok((params.wavelength_ratio(n), params.subcarrier_wavelength(n)))
        }
    }
}

/// Response of every element to a plane wave from `theta` in `band`.
pub fn steering_vector(
    geometry: &ArrayGeometry,
    params: &OfdmParams,
    band: Band,
    theta: f64,
) -> Result<SteeringVector> {
    check_angle("steering angle", theta)?;
    let (ratio, lambda_n) = band_ratio(params, band)?;
    let step = -2.0 * PI * geometry.element_spacing_wavelengths * ratio * theta.cos();
    let offsets = geometry.has_offsets();
    let values = (0..geometry.num_elements)
        .map(|l| {
            let mut phase = step * l as f64;
            if offsets {
                phase -= 2.0 * PI * geometry.element_to_antenna_offsets_m[l] / lambda_n;
            }
            Complex64::from_polar(1.0, phase)
        })
        .collect();
    Ok(SteeringVector {
        values,
        band,
        angle_rad: theta,
    })
}

fn dot(column: &[Complex64], steering: &[Complex64]) -> Complex64 {
    column.iter().zip(steering).map(|(c, b)| c * b).sum()
}

fn check_len(geometry: &ArrayGeometry, len: usize) -> Result<()> {
    if len != geometry.num_elements {
        return Err(Error::Shape {
            what: "configuration length vs. geometry",
            expected: geometry.num_elements,
            found: len,
        });
    }
    Ok(())
}

/// `Σ_l c_l b(θ)[l]` for one configuration column.
pub fn pattern_value(
    geometry: &ArrayGeometry,
    column: &[Complex64],
    params: &OfdmParams,
    band: Band,
    theta: f64,
) -> Result<Complex64> {
    check_len(geometry, column.len())?;
    let b = steering_vector(geometry, params, band, theta)?;
    Ok(dot(column, &b.values))
}

/// `‖C^T b(θ)‖²` summed over the bands selected by `mode`, for each angle.
pub fn power_pattern(
    geometry: &ArrayGeometry,
    config: &RisConfig,
    params: &OfdmParams,
    angles: &[f64],
    mode: PatternMode,
) -> Result<Vec<f64>> {
    if angles.is_empty() {
        return Err(Error::Degenerate("empty angle grid"));
    }
    check_len(geometry, config.num_elements())?;
    let bands = mode.bands(params);
    angles
        .iter()
        .map(|&theta| received_power(geometry, config, params, &bands, theta))
        .collect()
}

/// Power received from a single direction, summed over `bands` and slots.
pub fn received_power(
    geometry: &ArrayGeometry,
    config: &RisConfig,
    params: &OfdmParams,
    bands: &[Band],
    theta: f64,
) -> Result<f64> {
    check_len(geometry, config.num_elements())?;
    let mut total = 0.0;
    for &band in bands {
        let b = steering_vector(geometry, params, band, theta)?;
        total += config
            .columns()
            .map(|col| dot(col, &b.values).norm_sqr())
            .sum::<f64>();
    }
    Ok(total)
}

/// Evenly spaced inclusive grid over [0, π].
pub fn angle_grid(points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::Domain {
            what: "angle grid points",
            value: points as f64,
        });
    }
    let step = PI / (points - 1) as f64;
    Ok((0..points)
        .map(|i| if i == points - 1 { PI } else { i as f64 * step })
        .collect())
}

/// `10·log10(p / max p)` with [`DEFAULT_FLOOR_DB`] for zeros.
pub fn normalize_pattern_db(pattern: &[f64]) -> Result<Vec<f64>> {
    normalize_pattern_db_with_floor(pattern, DEFAULT_FLOOR_DB)
}

pub fn normalize_pattern_db_with_floor(pattern: &[f64], floor_db: f64) -> Result<Vec<f64>> {
    let peak = pattern.iter().copied().fold(0.0, f64::max);
    if !peak.is_finite() || peak <= 0.0 {
        return Err(Error::Degenerate("pattern has no positive entry"));
    }
    Ok(pattern
        .iter()
        .map(|&p| {
            if p <= 0.0 {
                floor_db
            } else {
                (10.0 * (p / peak).log10()).max(floor_db)
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use num_complex::Complex64 as C;

    fn p() -> OfdmParams {
        OfdmParams::default()
    }

    fn close(a: C, b: C, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn single_element_is_unity() {
        let g = ArrayGeometry::half_wavelength(1);
        for theta in [0.0, 0.7, PI] {
            let b = steering_vector(&g, &p(), Band::Subcarrier(37), theta).unwrap();
            assert!(close(b.values[0], C::new(1.0, 0.0), 1e-15));
        }
    }

    #[test]
    fn broadside_is_in_phase() {
        let g = ArrayGeometry::half_wavelength(2);
        let b = steering_vector(&g, &p(), Band::Subcarrier(99), PI / 2.0).unwrap();
        for v in b.values {
            assert!(close(v, C::new(1.0, 0.0), 1e-15));
        }
    }

    #[test]
    fn sixty_degrees_quarter_turns() {
        let g = ArrayGeometry::half_wavelength(4);
        let b = steering_vector(&g, &p(), Band::Carrier, PI / 3.0).unwrap();
        let expected = [
            C::new(1.0, 0.0),
            C::new(0.0, -1.0),
            C::new(-1.0, 0.0),
            C::new(0.0, 1.0),
        ];
        for (v, e) in b.values.iter().zip(expected) {
            assert!(close(*v, e, 1e-12), "{v} vs {e}");
        }
    }

    #[test]
    fn steering_rejects_bad_inputs() {
        let g = ArrayGeometry::half_wavelength(4);
        assert!(matches!(
            steering_vector(&g, &p(), Band::Subcarrier(100), 1.0),
            Err(Error::Index { .. })
        ));
        assert!(matches!(
            steering_vector(&g, &p(), Band::Carrier, f64::NAN),
            Err(Error::Domain { .. })
        ));
        assert!(steering_vector(&g, &p(), Band::Carrier, -0.1).is_err());
    }

    #[test]
    fn offsets_add_path_phase() {
        let params = p();
        let lambda = params.wavelength();
        let g = ArrayGeometry::half_wavelength(2)
            .with_offsets(vec![0.0, lambda / 4.0])
            .unwrap();
        let b = steering_vector(&g, &params, Band::Carrier, PI / 2.0).unwrap();
        assert!(close(b.values[1], C::new(0.0, -1.0), 1e-12));
        assert!(ArrayGeometry::half_wavelength(2)
            .with_offsets(vec![0.0])
            .is_err());
    }

    #[test]
    fn pattern_value_trivial_cases() {
        let g = ArrayGeometry::half_wavelength(2);
        let diff = [C::new(1.0, 0.0), C::new(-1.0, 0.0)];
        let sum = [C::new(1.0, 0.0), C::new(1.0, 0.0)];
        let v = pattern_value(&g, &diff, &p(), Band::Carrier, PI / 2.0).unwrap();
        assert!(v.norm() < 1e-15);
        let v = pattern_value(&g, &sum, &p(), Band::Carrier, PI / 2.0).unwrap();
        assert!(close(v, C::new(2.0, 0.0), 1e-15));
        assert!(matches!(
            pattern_value(&g, &sum[..1], &p(), Band::Carrier, 1.0),
            Err(Error::Shape { .. })
        ));
    }

    #[test]
    fn all_ones_broadside_power_is_l_squared_per_slot() {
        let l = 7;
        let g = ArrayGeometry::half_wavelength(l);
        let cfg = RisConfig::repeated(&vec![C::new(1.0, 0.0); l], 3).unwrap();
        let pw = power_pattern(&g, &cfg, &p(), &[PI / 2.0], PatternMode::CarrierOnly).unwrap();
        assert!((pw[0] - 3.0 * (l * l) as f64).abs() < 1e-9);
        let single = RisConfig::from_column(vec![C::new(1.0, 0.0); l]).unwrap();
        let pw = power_pattern(&g, &single, &p(), &[PI / 2.0], PatternMode::CarrierOnly).unwrap();
        assert!((pw[0] - (l * l) as f64).abs() < 1e-9);
    }

    #[test]
    fn empty_grid_rejected() {
        let g = ArrayGeometry::half_wavelength(1);
        let cfg = RisConfig::from_column(vec![C::new(1.0, 0.0)]).unwrap();
        assert!(power_pattern(&g, &cfg, &p(), &[], PatternMode::CarrierOnly).is_err());
    }

    #[test]
    fn db_normalization() {
        assert_eq!(
            normalize_pattern_db(&[1.0, 10.0]).unwrap(),
            vec![-10.0, 0.0]
        );
        assert_eq!(normalize_pattern_db(&[5.0, 5.0]).unwrap(), vec![0.0, 0.0]);
        let v = normalize_pattern_db(&[4.0, 2.0, 0.0]).unwrap();
        assert_eq!(v[0], 0.0);
        // 10·log10(1/2), evaluated to 20 digits with mpmath.
        assert!((v[1] - -3.010_299_956_639_812).abs() < 1e-12);
        assert_eq!(v[2], -300.0);
        assert!(matches!(
            normalize_pattern_db(&[0.0, 0.0]),
            Err(Error::Degenerate(_))
        ));
        let v = normalize_pattern_db_with_floor(&[1.0, 1e-40], -120.0).unwrap();
        assert_eq!(v[1], -120.0);
    }

    #[test]
    fn grid_is_inclusive() {
        let g = angle_grid(DEFAULT_GRID_POINTS).unwrap();
        assert_eq!(g.len(), 721);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[720], PI);
        assert!((g[288] - 72f64.to_radians()).abs() < 1e-12);
        assert!(angle_grid(1).is_err());
    }

    #[test]
    fn config_shape_checks() {
        assert!(RisConfig::new(2, 2, vec![C::new(1.0, 0.0); 3]).is_err());
        assert!(RisConfig::new(0, 1, vec![]).is_err());
        assert!(RisConfig::from_column(vec![C::new(f64::NAN, 0.0)]).is_err());
        let cfg = RisConfig::repeated(&[C::new(1.0, 0.0), C::new(0.0, 2.0)], 4).unwrap();
        assert!(cfg.is_static());
        let n = cfg.normalized_to_unit_disk().unwrap();
        assert!((n.max_magnitude() - 1.0).abs() < 1e-15);
        let mut coeffs = cfg.coefficients().to_vec();
        coeffs[3] = C::new(5.0, 0.0);
        assert!(!RisConfig::new(2, 4, coeffs).unwrap().is_static());
    }
}
