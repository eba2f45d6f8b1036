//! Fixtures shared by the benchmarks under `benches/`.

use coherence_core::qcore::random::{random_mixed, rng_from_seed};
use coherence_core::{OptimizerConfig, QState};

/// Seeded Hilbert-Schmidt random state on `n` qubits.
pub fn mixed_qubits(n: usize, seed: u64) -> QState {
    random_mixed(vec![2; n], &mut rng_from_seed(seed))
}

/// The default optimizer with a smaller grid so one iteration stays short.
pub fn light_optimizer() -> OptimizerConfig {
    OptimizerConfig {
        grid_points_per_angle: 8,
        multistarts: 4,
        ..OptimizerConfig::default()
    }
}
