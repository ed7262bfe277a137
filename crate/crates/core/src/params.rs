//! OFDM waveform parameters and the quantities derived from them.

use crate::error::{Error, Result};

/// Propagation speed, m/s. Rounded so that c/(2B) is exact for round bandwidths.
pub const SPEED_OF_LIGHT: f64 = 3.0e8;

/// OFDM frame description shared by the radar and the interferer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OfdmParams {
    pub carrier_freq_hz: f64,
    pub bandwidth_hz: f64,
    pub num_subcarriers: usize,
    pub num_symbols: usize,
    /// Cyclic prefix duration as a fraction of the useful symbol time.
    pub cp_ratio: f64,
}

impl Default for OfdmParams {
    fn default() -> Self {
        Self {
            carrier_freq_hz: 77e9,
            bandwidth_hz: 200e6,
            num_subcarriers: 100,
            num_symbols: 50,
            cp_ratio: 0.125,
        }
    }
}

impl OfdmParams {
    pub fn validate(&self) -> Result<()> {
        let positive = |what, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Domain { what, value: v })
            }
        };
        positive("carrier frequency", self.carrier_freq_hz)?;
        positive("bandwidth", self.bandwidth_hz)?;
        if self.num_subcarriers == 0 {
            return Err(Error::Domain {
                what: "subcarrier count",
                value: 0.0,
            });
        }
        if self.num_symbols == 0 {
            return Err(Error::Domain {
                what: "symbol count",
                value: 0.0,
            });
        }
        if !(self.cp_ratio.is_finite() && (0.0..1.0).contains(&self.cp_ratio)) {
            return Err(Error::Domain {
                what: "cyclic prefix ratio",
                value: self.cp_ratio,
            });
        }
        Ok(())
    }

    /// Δf = B / N.
    pub fn subcarrier_spacing(&self) -> f64 {
        self.bandwidth_hz / self.num_subcarriers as f64
    }

    pub fn symbol_time(&self) -> f64 {
        1.0 / self.subcarrier_spacing()
    }

    /// Useful symbol time plus cyclic prefix.
    pub fn total_symbol_time(&self) -> f64 {
        self.symbol_time() * (1.0 + self.cp_ratio)
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_freq_hz
    }

    pub fn subcarrier_freq(&self, n: usize) -> f64 {
        self.carrier_freq_hz + n as f64 * self.subcarrier_spacing()
    }

    pub fn subcarrier_wavelength(&self, n: usize) -> f64 {
        SPEED_OF_LIGHT / self.subcarrier_freq(n)
    }

    /// λ / λ_n, the factor by which subcarrier `n` stretches the carrier phase progression.
    pub fn wavelength_ratio(&self, n: usize) -> f64 {
        self.subcarrier_freq(n) / self.carrier_freq_hz
    }

    /// c / (2B).
    pub fn range_bin_size(&self) -> f64 {
        SPEED_OF_LIGHT / (2.0 * self.bandwidth_hz)
    }

    /// c / (2Δf).
    pub fn unambiguous_range(&self) -> f64 {
        SPEED_OF_LIGHT / (2.0 * self.subcarrier_spacing())
    }

    /// c / (2 f_c M T).
    pub fn velocity_bin_size(&self) -> f64 {
        SPEED_OF_LIGHT
            / (2.0 * self.carrier_freq_hz * self.num_symbols as f64 * self.total_symbol_time())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_quantities() {
        let p = OfdmParams::default();
        assert!((p.subcarrier_spacing() - 2e6).abs() < 1e-6);
        assert!((p.symbol_time() - 0.5e-6).abs() < 1e-18);
        assert!((p.total_symbol_time() - 0.5625e-6).abs() < 1e-18);
        assert_eq!(p.range_bin_size(), 0.75);
        assert!((p.unambiguous_range() - 100.0 * p.range_bin_size()).abs() < 1e-9);
        assert!((p.wavelength_ratio(0) - 1.0).abs() < 1e-15);
        assert!(p.wavelength_ratio(99) > 1.0);
    }

    #[test]
    fn rejects_bad_params() {
        let p = OfdmParams {
            cp_ratio: 1.0,
            ..OfdmParams::default()
        };
        assert!(p.validate().is_err());
        let p = OfdmParams {
            num_symbols: 0,
            ..OfdmParams::default()
        };
        assert!(p.validate().is_err());
        assert!(OfdmParams::default().validate().is_ok());
    }
}
