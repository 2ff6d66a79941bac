//! Direction finding with a time-modulated surface.
//!
//! Two sub-arrays switch between the ±1 reflection states with staggered
//! periodic sequences. The feed receives the carrier plus harmonics at
//! multiples of the modulation frequency; the ratio of the first harmonic to
//! the fundamental encodes the phase difference between the sub-array phase
//! centers, which is inverted to the incidence angle. One measurement phase
//! uses strips along x (lateral), the other strips along y (vertical).

mod estimate;
mod experiment;
mod harmonics;
mod plan;
mod signal;

pub use estimate::{estimate_direction, DfEstimate};
pub use experiment::{df_experiment, DfExperiment, DfRecord, DfResults};
pub use harmonics::{extract_harmonics, harmonic_envelope, harmonic_ratio, HarmonicSet};
pub use plan::{Axis, ModulationPlan, DEFAULT_PERIOD_S};
pub use signal::{synthesize_received, FeedCompensation, ReceivedSignal, SignalConfig, H_MAX};
