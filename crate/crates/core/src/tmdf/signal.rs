use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::plan::ModulationPlan;
use crate::error::{Error, Result};
use crate::model::{ArrayGeometry, Direction, FrequencySpec};

/// Highest harmonic order the sampling must resolve.
pub const H_MAX: usize = 8;

/// Correction applied to each element's path to the feed before summation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FeedCompensation {
    /// Raw `exp(-jkL)/L` feed path.
    None,
    /// Path phase removed, `1/L` spreading kept.
    Phase,
    /// Path phase and spreading both equalized to the central element.
    #[default]
    Full,
}

/// Sampling and noise settings for one measurement phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalConfig {
    pub samples_per_period: usize,
    pub periods: usize,
    /// Receiver SNR against the noiseless fundamental; `None` = noiseless.
    pub snr_db: Option<f64>,
    pub compensation: FeedCompensation,
}

impl Default for SignalConfig {
    fn default() -> Self {
        Self {
            samples_per_period: 128,
            periods: 8,
            snr_db: None,
            compensation: FeedCompensation::Full,
        }
    }
}

impl SignalConfig {
    fn validate(&self, plan: &ModulationPlan) -> Result<()> {
        if self.samples_per_period < 2 * H_MAX {
            return Err(Error::Signal(format!(
                "{} samples per period undersample harmonic {H_MAX}",
                self.samples_per_period
            )));
        }
        if !self.samples_per_period.is_multiple_of(plan.slots()) {
            return Err(Error::Signal(format!(
                "{} samples per period do not divide into {} slots",
                self.samples_per_period,
                plan.slots()
            )));
        }
        if self.periods == 0 {
            return Err(Error::Signal("at least one modulation period is required".into()));
        }
        if let Some(snr) = self.snr_db {
            if !snr.is_finite() {
                return Err(Error::Signal(format!("SNR {snr} dB is not finite")));
            }
        }
        Ok(())
    }
}

/// Complex baseband samples at the feed, uniformly spaced over whole periods.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedSignal {
    pub samples: Vec<Complex64>,
    pub samples_per_period: usize,
    pub period_s: f64,
}

impl ReceivedSignal {
    pub fn sample_interval(&self) -> f64 {
        self.period_s / self.samples_per_period as f64
    }
}

/// Received signal for a plane wave arriving from `incident`.
///
/// Each sample holds the sum over elements of incident phase
/// `exp(+jk p·r̂)`, switching state ±1 and the (compensated) feed path. The
/// modulation is synchronous with the sample clock; sample `i` represents
/// the interval `(iΔ, (i+1)Δ]`.
pub fn synthesize_received(
    geometry: &ArrayGeometry,
    freq: &FrequencySpec,
    plan: &ModulationPlan,
    incident: &Direction,
    config: &SignalConfig,
    seed: u64,
) -> Result<ReceivedSignal> {
    config.validate(plan)?;
    let k = freq.wavenumber();
    let r = incident.unit_vector();
    let f = geometry.focal_length();
    let mut groups = vec![Complex64::default(); plan.subarray_count()];
    for i in 0..geometry.rows() {
        for j in 0..geometry.cols() {
            let p = geometry.position_0(i, j);
            let l = geometry.feed_distance_0(i, j);
            let path = match config.compensation {
                FeedCompensation::None => Complex64::cis(-k * l) / l,
                FeedCompensation::Phase => Complex64::new(1.0 / l, 0.0),
                FeedCompensation::Full => Complex64::new(1.0 / f, 0.0),
            };
            let arrival = Complex64::cis(k * (p[0] * r[0] + p[1] * r[1] + p[2] * r[2]));
            groups[plan.subarray_of(i, j)] += arrival * path;
        }
    }

    let ns = config.samples_per_period;
    let dt = plan.period() / ns as f64;
    let one_period = (0..ns)
        .map(|i| {
            let t = (i as f64 + 0.5) * dt;
            groups
                .iter()
                .enumerate()
                .map(|(n, a)| a * plan.sequence_value(n, t).expect("index in range"))
                .sum()
        })
        .collect::<Vec<Complex64>>();
    let mut samples: Vec<Complex64> = one_period.iter().cycle().take(ns * config.periods).copied().collect();

    if let Some(snr) = config.snr_db {
        let fundamental = one_period.iter().sum::<Complex64>() / ns as f64;
        let variance = fundamental.norm_sqr() / 10f64.powf(snr / 10.0);
        let sigma = (variance / 2.0).sqrt();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for s in samples.iter_mut() {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            *s += Complex64::new(re, im) * sigma;
        }
    }
    Ok(ReceivedSignal {
        samples,
        samples_per_period: ns,
        period_s: plan.period(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tmdf::{Axis, DEFAULT_PERIOD_S};

    fn setup() -> (ArrayGeometry, FrequencySpec) {
        (ArrayGeometry::prototype(), FrequencySpec::new(3e9).unwrap())
    }

    #[test]
    fn static_plan_gives_constant_envelope() {
        let (g, f) = setup();
        let plan = ModulationPlan::staggered(DEFAULT_PERIOD_S, 1, Axis::X).unwrap();
        let s = synthesize_received(&g, &f, &plan, &Direction::broadside(), &SignalConfig::default(), 1).unwrap();
        let first = s.samples[0];
        assert!(s.samples.iter().all(|v| (v - first).norm() < 1e-12 * first.norm()));
    }

    #[test]
    fn noiseless_is_seed_independent_and_noisy_is_reproducible() {
        let (g, f) = setup();
        let plan = ModulationPlan::two_subarray(Axis::X);
        let dir = Direction::from_degrees(20.0, 30.0).unwrap();
        let cfg = SignalConfig::default();
        let a = synthesize_received(&g, &f, &plan, &dir, &cfg, 1).unwrap();
        let b = synthesize_received(&g, &f, &plan, &dir, &cfg, 2).unwrap();
        assert_eq!(a, b);
        let noisy = SignalConfig {
            snr_db: Some(20.0),
            ..cfg
        };
        let c = synthesize_received(&g, &f, &plan, &dir, &noisy, 7).unwrap();
        let d = synthesize_received(&g, &f, &plan, &dir, &noisy, 7).unwrap();
        let e = synthesize_received(&g, &f, &plan, &dir, &noisy, 8).unwrap();
        assert_eq!(c, d);
        assert_ne!(c, e);
    }

    #[test]
    fn rejects_undersampling_and_bad_snr() {
        let (g, f) = setup();
        let plan = ModulationPlan::two_subarray(Axis::X);
        let dir = Direction::broadside();
        for cfg in [
            SignalConfig {
                samples_per_period: 12,
                ..Default::default()
            },
            SignalConfig {
                samples_per_period: 18,
                ..Default::default()
            },
            SignalConfig {
                snr_db: Some(f64::NAN),
                ..Default::default()
            },
            SignalConfig {
                periods: 0,
                ..Default::default()
            },
        ] {
            assert!(matches!(
                synthesize_received(&g, &f, &plan, &dir, &cfg, 0),
                Err(Error::Signal(_))
            ));
        }
    }
}
