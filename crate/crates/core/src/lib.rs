//! Beampattern synthesis and symbol-domain OFDM radar simulation for a
//! reconfigurable intelligent surface (RIS) co-located with a radar receiver.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, experiment
//! orchestration, and the command line live in the `risradar` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod array;
pub mod error;
mod fft;
pub mod params;
pub mod rvmap;
pub mod seed;
pub mod sim;
pub mod synthesis;

pub use array::{
    angle_grid, normalize_pattern_db, normalize_pattern_db_with_floor, pattern_value,
    power_pattern, received_power, steering_vector, ArrayGeometry, Band, PatternMode, RisConfig,
    SteeringVector, DEFAULT_FLOOR_DB, DEFAULT_GRID_POINTS,
};
pub use error::{Error, Result};
pub use params::{OfdmParams, SPEED_OF_LIGHT};
pub use rvmap::{estimate_target, range_error, rv_map, Estimate, RvMap};
pub use sim::{
    frame_difference, generate_symbols, simulate_received, Grid, InterferenceParams, NoiseParams,
    Scenario, SymbolGrid, TargetParams,
};
pub use synthesis::network::{train_peak_network, PeakNetSpec, PeakNetwork, TrainedPeak};
pub use synthesis::{
    analytic_peak, combine_convolve, multi_notch, notch_config, sinr, NotchSpec, SinrReport,
};
