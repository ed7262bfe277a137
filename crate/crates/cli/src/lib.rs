//! File formats, scenario handling, and study runners behind the `risradar` binary.

pub mod checks;
pub mod formats;
pub mod report;
pub mod scenario;
pub mod studies;
