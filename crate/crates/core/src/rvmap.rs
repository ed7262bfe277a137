//! Range–velocity map and maximum-likelihood peak search.
//!
//! The map correlates the received grid against `e^{+j2π nΔf τ̂}` over
//! subcarriers (an inverse DFT) and `e^{-j2π f_c ν̂ mT}` over symbols (a
//! forward DFT). For a single target in white noise the likelihood is
//! maximized at the largest cell, so estimation is an argmax.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fft::{Direction, Fft};
use crate::params::OfdmParams;
use crate::sim::Grid;

#[derive(Debug, Clone, PartialEq)]
pub struct RvMap {
    /// `pad_range·N` range bins by `pad_velocity·M` velocity bins.
    pub values: Grid,
    /// Meters per range bin after padding.
    pub range_bin_m: f64,
    /// m/s per velocity bin after padding.
    pub velocity_bin_mps: f64,
    pub pad_range: usize,
    pub pad_velocity: usize,
}

impl RvMap {
    pub fn num_range_bins(&self) -> usize {
        self.values.rows()
    }

    pub fn num_velocity_bins(&self) -> usize {
        self.values.cols()
    }

    pub fn range_of_bin(&self, bin: usize) -> f64 {
        bin as f64 * self.range_bin_m
    }

    /// Velocity bins above the midpoint wrap to negative velocities.
    pub fn velocity_of_bin(&self, bin: usize) -> f64 {
        let total = self.num_velocity_bins();
        let signed = if bin >= total.div_ceil(2) {
            bin as f64 - total as f64
        } else {
            bin as f64
        };
        signed * self.velocity_bin_mps
    }
}

/// Range–velocity map of `y` (`N × M`) with zero-padding factors on each axis.
pub fn rv_map(
    y: &Grid,
    params: &OfdmParams,
    pad_range: usize,
    pad_velocity: usize,
) -> Result<RvMap> {
    if pad_range == 0 {
        return Err(Error::Domain {
            what: "range padding",
            value: 0.0,
        });
    }
    if pad_velocity == 0 {
        return Err(Error::Domain {
            what: "velocity padding",
            value: 0.0,
        });
    }
    let (n, m) = (params.num_subcarriers, params.num_symbols);
    if y.rows() != n || y.cols() != m {
        return Err(Error::Shape {
            what: "received grid",
            expected: n * m,
            found: y.rows() * y.cols(),
        });
    }
    let range_fft = Fft::new(pad_range * n, Direction::Inverse);
    let velocity_fft = Fft::new(pad_velocity * m, Direction::Forward);
    let range_bins = range_fft.len();
    let velocity_bins = velocity_fft.len();

    // Range transform per symbol column, stored as columns[m][range_bin].
    let columns: Vec<Vec<_>> = (0..m)
        .map(|col| {
            let column: Vec<_> = (0..n).map(|row| y.get(row, col)).collect();
            range_fft.process(&column)
        })
        .collect();

    let mut values = Grid::zeros(range_bins, velocity_bins);
    let mut row_buf = Vec::with_capacity(m);
    for r in 0..range_bins {
        row_buf.clear();
        row_buf.extend(columns.iter().map(|c| c[r]));
        let spectrum = velocity_fft.process(&row_buf);
        values.as_mut_slice()[r * velocity_bins..(r + 1) * velocity_bins]
            .copy_from_slice(&spectrum);
    }

    Ok(RvMap {
        values,
        range_bin_m: params.range_bin_size() / pad_range as f64,
        velocity_bin_mps: params.velocity_bin_size() / pad_velocity as f64,
        pad_range,
        pad_velocity,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub range_m: f64,
    pub velocity_mps: f64,
    /// `|map|²` at the peak.
    pub peak_power: f64,
    pub range_bin: usize,
    pub velocity_bin: usize,
}

/// Largest cell of the map; ties go to the lowest range bin, then the lowest
/// velocity bin.
pub fn estimate_target(map: &RvMap) -> Result<Estimate> {
    let cols = map.num_velocity_bins();
    if map.values.as_slice().is_empty() {
        return Err(Error::Degenerate("empty range-velocity map"));
    }
    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, v) in map.values.as_slice().iter().enumerate() {
        let p = v.norm_sqr();
        if p > best.1 {
            best = (i, p);
        }
    }
    let (range_bin, velocity_bin) = (best.0 / cols, best.0 % cols);
    Ok(Estimate {
        range_m: map.range_of_bin(range_bin),
        velocity_mps: map.velocity_of_bin(velocity_bin),
        peak_power: best.1,
        range_bin,
        velocity_bin,
    })
}

/// `|R - R̂|`.
pub fn range_error(true_range_m: f64, estimated_range_m: f64) -> f64 {
    (true_range_m - estimated_range_m).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use num_complex::Complex64;

    #[test]
    fn constant_grid_peaks_at_origin() {
        let p = OfdmParams::default();
        let y = Grid::from_vec(100, 50, vec![Complex64::new(1.0, 0.0); 5000]).unwrap();
        let map = rv_map(&y, &p, 1, 1).unwrap();
        let est = estimate_target(&map).unwrap();
        assert_eq!((est.range_bin, est.velocity_bin), (0, 0));
        assert!((map.values.get(0, 0).norm() - 5000.0).abs() < 1e-9);
        assert!((est.peak_power.sqrt() - 5000.0).abs() < 1e-9);
    }

    #[test]
    fn ties_prefer_lowest_bins() {
        let p = OfdmParams {
            num_subcarriers: 2,
            num_symbols: 2,
            ..OfdmParams::default()
        };
        let map = RvMap {
            values: Grid::from_vec(
                2,
                2,
                vec![
                    Complex64::new(0.0, 0.0),
                    Complex64::new(2.0, 0.0),
                    Complex64::new(0.0, 2.0),
                    Complex64::new(2.0, 0.0),
                ],
            )
            .unwrap(),
            range_bin_m: p.range_bin_size(),
            velocity_bin_mps: p.velocity_bin_size(),
            pad_range: 1,
            pad_velocity: 1,
        };
        let est = estimate_target(&map).unwrap();
        assert_eq!((est.range_bin, est.velocity_bin), (0, 1));
    }

    #[test]
    fn padding_validated() {
        let p = OfdmParams::default();
        let y = Grid::zeros(100, 50);
        assert!(rv_map(&y, &p, 0, 1).is_err());
        assert!(rv_map(&y, &p, 1, 0).is_err());
        assert!(rv_map(&Grid::zeros(50, 100), &p, 1, 1).is_err());
    }

    #[test]
    fn negative_velocities_wrap() {
        let p = OfdmParams::default();
        let map = rv_map(&Grid::zeros(100, 50), &p, 1, 4).unwrap();
        assert_eq!(map.velocity_of_bin(0), 0.0);
        assert!((map.velocity_of_bin(199) + p.velocity_bin_size() / 4.0).abs() < 1e-9);
        assert!(map.velocity_of_bin(99) > 0.0);
        assert!(map.velocity_of_bin(100) < 0.0);
    }

    #[test]
    fn range_error_is_absolute() {
        assert_eq!(range_error(30.0, 30.0), 0.0);
        assert_eq!(range_error(30.0, 30.75), 0.75);
        assert_eq!(range_error(30.75, 30.0), 0.75);
    }
}
