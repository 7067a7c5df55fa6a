//! Shared fixtures for the kernel benchmarks.

use uavfas_core::{FadingParams, FasConfig, RsmaScenario};

/// The reference two-user scenario at a mid-range transmit power, where no
/// probability saturates.
pub fn bench_scenario() -> RsmaScenario {
    RsmaScenario::default_two_user().with_power_dbm(20.0)
}

/// The reference user-link fading.
pub fn bench_fading() -> FadingParams {
    FadingParams::new(2.0, 1.0).expect("reference fading is valid")
}

/// The reference 2x2 port grid.
pub fn bench_fas() -> FasConfig {
    FasConfig::new(2, 2, 1.0, 1.0, 25.0).expect("reference grid is valid")
}
