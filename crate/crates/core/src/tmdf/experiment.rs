use std::fmt::Write as _;

use rayon::prelude::*;

use super::estimate::estimate_direction;
use super::harmonics::{extract_harmonics, harmonic_ratio};
use super::plan::{Axis, ModulationPlan};
use super::signal::{synthesize_received, SignalConfig, H_MAX};
use crate::error::{Error, Result};
use crate::model::{ArrayGeometry, Direction, FrequencySpec};

/// Settings for a preset-angle sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct DfExperiment {
    pub plan_x: ModulationPlan,
    pub plan_y: ModulationPlan,
    pub signal: SignalConfig,
    pub trials: usize,
    pub seed: u64,
    /// Reuse one noise seed for every trial of an angle.
    pub shared_trial_seed: bool,
    /// Azimuth of the measurement cut; negative presets lie at `cut_phi + π`.
    pub cut_phi: f64,
}

impl Default for DfExperiment {
    fn default() -> Self {
        Self {
            plan_x: ModulationPlan::two_subarray(Axis::X),
            plan_y: ModulationPlan::two_subarray(Axis::Y),
            signal: SignalConfig {
                snr_db: Some(20.0),
                ..SignalConfig::default()
            },
            trials: 3,
            seed: 0,
            shared_trial_seed: false,
            cut_phi: 0.0,
        }
    }
}

/// One trial at one preset angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DfRecord {
    /// Signed preset angle within the cut plane.
    pub theta_preset: f64,
    pub phi_preset: f64,
    /// Signed estimate within the cut plane.
    pub theta_est: f64,
    pub phi_est: f64,
    pub phi_defined: bool,
    pub trial: usize,
    pub seed: u64,
}

impl DfRecord {
    pub fn error(&self) -> f64 {
        self.theta_est - self.theta_preset
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DfResults {
    pub records: Vec<DfRecord>,
    /// `(signed preset, RMSE)` per angle, radians.
    pub rmse: Vec<(f64, f64)>,
}

impl DfResults {
    pub fn max_abs_error(&self) -> f64 {
        self.records.iter().map(|r| r.error().abs()).fold(0.0, f64::max)
    }

    pub fn max_rmse(&self) -> f64 {
        self.rmse.iter().map(|r| r.1).fold(0.0, f64::max)
    }

    /// CSV `theta_preset_deg,phi_preset_deg,theta_est_deg,phi_est_deg,trial,seed`.
    pub fn estimates_csv(&self) -> String {
        let mut out = String::from("theta_preset_deg,phi_preset_deg,theta_est_deg,phi_est_deg,trial,seed\n");
        for r in &self.records {
            let phi = if r.phi_defined {
                format!("{:.6}", r.phi_est.to_degrees())
            } else {
                "nan".to_string()
            };
            let _ = writeln!(
                out,
                "{:.6},{:.6},{:.6},{},{},{}",
                r.theta_preset.to_degrees(),
                r.phi_preset.to_degrees(),
                r.theta_est.to_degrees(),
                phi,
                r.trial,
                r.seed
            );
        }
        out
    }

    /// CSV `theta_preset_deg,rmse_deg`.
    pub fn rmse_csv(&self) -> String {
        let mut out = String::from("theta_preset_deg,rmse_deg\n");
        for (t, e) in &self.rmse {
            let _ = writeln!(out, "{:.6},{:.6}", t.to_degrees(), e.to_degrees());
        }
        out
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn sub_seed(master: u64, angle: usize, trial: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ angle as u64) ^ trial as u64)
}

/// Runs the lateral then vertical modulation phase at every signed preset
/// angle in the cut plane, `trials` times each, and reports per-angle RMSE.
pub fn df_experiment(
    geometry: &ArrayGeometry,
    freq: &FrequencySpec,
    setup: &DfExperiment,
    presets: &[f64],
) -> Result<DfResults> {
    if setup.trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let limits = (
        setup.plan_x.unambiguous_limit(geometry, freq)?,
        setup.plan_y.unambiguous_limit(geometry, freq)?,
    );
    let directions = presets
        .iter()
        .map(|&t| {
            let d = Direction::in_plane(t, setup.cut_phi)?;
            let r = d.unit_vector();
            if r[0].abs() >= limits.0 || r[1].abs() >= limits.1 {
                return Err(Error::InvalidDirection(format!(
                    "preset {:.3} deg lies outside the unambiguous region",
                    t.to_degrees()
                )));
            }
            Ok(d)
        })
        .collect::<Result<Vec<_>>>()?;

    let work: Vec<(usize, usize)> = (0..presets.len())
        .flat_map(|a| (0..setup.trials).map(move |t| (a, t)))
        .collect();
    let records = work
        .par_iter()
        .map(|&(a, trial)| {
            let seed = sub_seed(setup.seed, a, if setup.shared_trial_seed { 0 } else { trial });
            let dir = &directions[a];
            let measure = |plan: &ModulationPlan, phase: u64| {
                let s = synthesize_received(geometry, freq, plan, dir, &setup.signal, splitmix64(seed ^ phase))?;
                harmonic_ratio(&extract_harmonics(&s, plan, H_MAX)?)
            };
            let r1 = measure(&setup.plan_x, 1)?;
            let r2 = measure(&setup.plan_y, 2)?;
            let est = estimate_direction(r1, r2, &setup.plan_x, &setup.plan_y, geometry, freq)?;
            Ok(DfRecord {
                theta_preset: presets[a],
                phi_preset: setup.cut_phi,
                theta_est: est.signed_theta(setup.cut_phi),
                phi_est: est.phi,
                phi_defined: est.phi_defined,
                trial,
                seed,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let rmse = presets
        .iter()
        .enumerate()
        .map(|(a, &t)| {
            let chunk = &records[a * setup.trials..(a + 1) * setup.trials];
            let ms = chunk.iter().map(|r| r.error().powi(2)).sum::<f64>() / setup.trials as f64;
            (t, ms.sqrt())
        })
        .collect();
    Ok(DfResults { records, rmse })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn presets() -> Vec<f64> {
        (-9..=9).map(|i| (5.0 * i as f64).to_radians()).collect()
    }

    fn rig() -> (ArrayGeometry, FrequencySpec) {
        (ArrayGeometry::prototype(), FrequencySpec::new(3e9).unwrap())
    }

    #[test]
    fn noiseless_sweep_is_exact() {
        let (g, f) = rig();
        let setup = DfExperiment {
            signal: SignalConfig::default(),
            trials: 1,
            ..Default::default()
        };
        let res = df_experiment(&g, &f, &setup, &presets()).unwrap();
        assert!(res.max_abs_error().to_degrees() < 1e-6);
    }

    #[test]
    fn identical_trials_give_rmse_equal_to_error() {
        let (g, f) = rig();
        let setup = DfExperiment {
            shared_trial_seed: true,
            seed: 11,
            ..Default::default()
        };
        let res = df_experiment(&g, &f, &setup, &[0.3, -0.5]).unwrap();
        for (a, (_, rmse)) in res.rmse.iter().enumerate() {
            let e = res.records[a * 3].error().abs();
            assert!((rmse - e).abs() < 1e-15);
            assert_eq!(res.records[a * 3].theta_est, res.records[a * 3 + 2].theta_est);
        }
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let (g, f) = rig();
        let setup = DfExperiment {
            seed: 42,
            ..Default::default()
        };
        let a = df_experiment(&g, &f, &setup, &presets()).unwrap();
        let b = df_experiment(&g, &f, &setup, &presets()).unwrap();
        assert_eq!(a.estimates_csv(), b.estimates_csv());
        assert_eq!(a.rmse_csv(), b.rmse_csv());
    }

    #[test]
    fn negative_presets_stay_signed() {
        let (g, f) = rig();
        let setup = DfExperiment {
            signal: SignalConfig::default(),
            trials: 1,
            ..Default::default()
        };
        let res = df_experiment(&g, &f, &setup, &[-0.5]).unwrap();
        assert!((res.records[0].theta_est + 0.5).abs() < 1e-9);
        assert!((res.records[0].phi_est - std::f64::consts::PI).abs() < 1e-9);
    }

    #[test]
    fn zero_trials_rejected() {
        let (g, f) = rig();
        let setup = DfExperiment {
            trials: 0,
            ..Default::default()
        };
        assert!(df_experiment(&g, &f, &setup, &[0.0]).is_err());
    }
}
