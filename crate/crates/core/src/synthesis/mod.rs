//! Configuration synthesis: peaks, notches, and their combination.
//!
//! Configurations here follow the carrier approximation with half-wavelength
//! spacing, so a column `c` has pattern `Σ_l c_l e^{-jπ l cos θ}`. Because
//! that is a polynomial in `e^{-jπ cos θ}`, the linear convolution of two
//! columns has the product of their patterns, which is what lets a peak and
//! any number of notches be designed separately and then merged.

pub mod network;

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // needed only when std is absent from the build
use num_traits::Float;

use crate::array::{received_power, ArrayGeometry, PatternMode, RisConfig};
use crate::error::{check_angle, Error, Result};
use crate::params::OfdmParams;

/// Conjugate-phase configuration: element `l` is `e^{+jπ l cos θ_t}`, so the
/// carrier pattern at `θ_t` is exactly `L_p`.
pub fn analytic_peak(theta_t: f64, num_elements: usize) -> Result<RisConfig> {
    check_angle("peak angle", theta_t)?;
    if num_elements == 0 {
        return Err(Error::Domain {
            what: "element count",
            value: 0.0,
        });
    }
    let step = PI * theta_t.cos();
    RisConfig::from_column(
        (0..num_elements)
            .map(|l| Complex64::from_polar(1.0, step * l as f64))
            .collect(),
    )
}

fn notch_column(theta_n: f64) -> [Complex64; 2] {
    [
        Complex64::new(1.0, 0.0),
        -Complex64::from_polar(1.0, PI * theta_n.cos()),
    ]
}

/// Two-element configuration whose carrier pattern vanishes at `theta_n`:
/// `[1, -e^{+jπ cos θ_n}]`.
pub fn notch_config(theta_n: f64) -> Result<RisConfig> {
    check_angle("notch angle", theta_n)?;
    RisConfig::from_column(notch_column(theta_n).to_vec())
}

/// A cluster of `num_notches` nulls centred on `notch_angle_rad`, `spacing_rad` apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NotchSpec {
    pub notch_angle_rad: f64,
    pub num_notches: usize,
    pub spacing_rad: f64,
}

impl NotchSpec {
    pub fn single(notch_angle_rad: f64) -> Self {
        Self {
            notch_angle_rad,
            num_notches: 1,
            spacing_rad: 0.0,
        }
    }

    /// Null angles `θ_n + (k - (K-1)/2)·ε`, `k = 0..K`.
    pub fn notch_angles(&self) -> Result<Vec<f64>> {
        if self.num_notches == 0 {
            return Err(Error::Domain {
                what: "notch count",
                value: 0.0,
            });
        }
        if !(self.spacing_rad.is_finite() && self.spacing_rad >= 0.0) {
            return Err(Error::Domain {
                what: "notch spacing",
                value: self.spacing_rad,
            });
        }
        let center = (self.num_notches - 1) as f64 / 2.0;
        (0..self.num_notches)
            .map(|k| {
                let angle = self.notch_angle_rad + (k as f64 - center) * self.spacing_rad;
                check_angle("shifted notch angle", angle).map(|_| angle)
            })
            .collect()
    }
}

/// Convolution of one two-element notch per angle in `spec`; `K + 1` elements.
pub fn multi_notch(spec: &NotchSpec) -> Result<RisConfig> {
    let mut column = vec![Complex64::new(1.0, 0.0)];
    for angle in spec.notch_angles()? {
        column = convolve(&column, &notch_column(angle));
    }
    RisConfig::from_column(column)
}

fn convolve(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Slot-by-slot linear convolution. A static (single-slot) operand is
/// broadcast against the other's slots. No rescaling is applied, so the
/// output pattern is exactly the product of the input patterns.
pub fn combine_convolve(a: &RisConfig, b: &RisConfig) -> Result<RisConfig> {
    let slots = match (a.num_slots(), b.num_slots()) {
        (x, y) if x == y => x,
        (1, y) => y,
        (x, 1) => x,
        (x, y) => {
            return Err(Error::Shape {
                what: "time slots of convolved configurations",
                expected: x,
                found: y,
            })
        }
    };
    let len = a.num_elements() + b.num_elements() - 1;
    let mut coefficients = Vec::with_capacity(len * slots);
    for m in 0..slots {
        coefficients.extend(convolve(a.column_for_symbol(m), b.column_for_symbol(m)));
    }
    RisConfig::new(len, slots, coefficients)
}

/// Peak ∗ notch, rescaled into the unit disk.
pub fn combined_config(peak: &RisConfig, notch: &RisConfig) -> Result<RisConfig> {
    combine_convolve(peak, notch)?.normalized_to_unit_disk()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinrReport {
    pub signal_power: f64,
    pub interference_power: f64,
    pub noise_power: f64,
    pub sinr_linear: f64,
    pub sinr_db: f64,
}

/// Ratio of power received from `theta` to power received from `theta_i`
/// plus `sigma2`.
pub fn sinr(
    geometry: &ArrayGeometry,
    config: &RisConfig,
    params: &OfdmParams,
    theta: f64,
    theta_i: f64,
    sigma2: f64,
    mode: PatternMode,
) -> Result<SinrReport> {
    if !(sigma2.is_finite() && sigma2 > 0.0) {
        return Err(Error::Domain {
            what: "noise power",
            value: sigma2,
        });
    }
    let bands = mode.bands(params);
    let signal_power = received_power(geometry, config, params, &bands, theta)?;
    let interference_power = received_power(geometry, config, params, &bands, theta_i)?;
    let sinr_linear = signal_power / (interference_power + sigma2);
    Ok(SinrReport {
        signal_power,
        interference_power,
        noise_power: sigma2,
        sinr_linear,
        sinr_db: 10.0 * sinr_linear.log10(),
    })
}
