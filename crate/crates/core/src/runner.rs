//! Scenario pipelines behind the `metascope` command.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::config::{DfConfig, OamConfig, ScanConfig, Scenario, ScenarioConfig};
use crate::error::Result;
use crate::field::{
    directivity_gain, far_field, find_intensity_ring, oam_mode_spectrum, phase_winding, sample_near_field,
    sidelobe_level,
};
use crate::model::{Direction, FrequencySpec};
use crate::synthesis::{synthesize, BeamSpec};
use crate::tmdf::{df_experiment, Axis, DfExperiment, ModulationPlan, SignalConfig};

pub const MANIFEST_NAME: &str = "manifest.toml";

/// Writes `contents` to `dir/name` through a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp"));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, &path)?;
    Ok(path)
}

/// File-name tag for a signed number: `-30` → `m30`, `12.5` → `12p5`.
pub fn tag(value: f64) -> String {
    let mut s = format!("{}", value.abs());
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').replace('.', "p");
    }
    if value < 0.0 {
        format!("m{s}")
    } else {
        s
    }
}

/// Outcome of a run: written files (manifest last) and human-readable lines.
#[derive(Debug, Default)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    pub summary: Vec<String>,
}

/// Runs the configured scenario, writing outputs into `out_dir`.
pub fn run(config: &ScenarioConfig, out_dir: &Path) -> Result<RunReport> {
    fs::create_dir_all(out_dir)?;
    let mut report = match &config.scenario {
        Scenario::Oam(o) => run_oam(config, o, out_dir)?,
        Scenario::Scan(s) => run_scan(config, s, out_dir)?,
        Scenario::Df(d) => run_df(config, d, out_dir)?,
    };
    report
        .files
        .push(write_atomic(out_dir, MANIFEST_NAME, &config.to_manifest())?);
    Ok(report)
}

fn run_oam(config: &ScenarioConfig, oam: &OamConfig, out: &Path) -> Result<RunReport> {
    let g = config.geometry();
    let f = config.carrier();
    let feed = config.feed_model();
    let grid = config.angular_grid();
    let plane_spec = config.plane_spec();
    let items = oam
        .modes
        .par_iter()
        .map(|&mode| {
            let spec = BeamSpec::Oam { mode };
            let coding = synthesize(&g, &f, &spec)?;
            let ff = far_field(&g, &f, &coding, &config.response, &feed, &grid)?;
            let ring = find_intensity_ring(&ff);
            let spectrum = oam_mode_spectrum(&ff, ring, oam.max_mode)?;
            let plane = sample_near_field(&g, &f, &coding, &config.response, &feed, &plane_spec)?;
            let winding = phase_winding(&plane, (0.0, 0.0), oam.winding_radius_m, 720)?;
            let stem = format!("oam_l{}", tag(mode as f64));
            let files = vec![
                write_atomic(out, &format!("{stem}_coding.txt"), &coding.to_bitmap(true))?,
                write_atomic(out, &format!("{stem}_farfield.csv"), &ff.to_csv())?,
                write_atomic(out, &format!("{stem}_nearfield.csv"), &plane.to_csv())?,
                write_atomic(out, &format!("{stem}_modes.csv"), &spectrum.to_csv())?,
            ];
            let (dominant, purity) = spectrum.dominant();
            let mut line = format!(
                "oam l={mode:+}: ring {:.2} deg, dominant mode {dominant:+} ({:.3}), near-field winding {:.2}",
                ring.to_degrees(),
                purity,
                winding
            );
            if spec.sampling_warning() {
                line.push_str(" [warning: |l| beyond the cleanly sampled range]");
            }
            Ok((files, line))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = RunReport::default();
    for (files, line) in items {
        report.files.extend(files);
        report.summary.push(line);
    }
    Ok(report)
}

fn run_scan(config: &ScenarioConfig, scan: &ScanConfig, out: &Path) -> Result<RunReport> {
    let g = config.geometry();
    let f = config.carrier();
    let feed = config.feed_model();
    let grid = config.angular_grid();
    let cut = scan.phi_deg.to_radians();

    let rows = scan
        .angles_deg
        .par_iter()
        .map(|&angle| {
            let steer = Direction::in_plane(angle.to_radians(), cut)?;
            let coding = synthesize(&g, &f, &BeamSpec::Pencil { steer })?;
            let ff = far_field(&g, &f, &coding, &config.response, &feed, &grid)?;
            let gain = directivity_gain(&ff)?;
            let sll = sidelobe_level(&ff, &gain.peak);
            let stem = format!("scan_t{}", tag(angle));
            let files = vec![
                write_atomic(out, &format!("{stem}_coding.txt"), &coding.to_bitmap(true))?,
                write_atomic(out, &format!("{stem}_farfield.csv"), &ff.to_csv())?,
            ];
            Ok((angle, steer, gain, sll, files))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut report = RunReport::default();
    let mut summary =
        String::from("theta_preset_deg,phi_preset_deg,peak_theta_deg,peak_phi_deg,gain_dbi,directivity_dbi,sll_db\n");
    for (angle, steer, gain, sll, files) in rows {
        report.files.extend(files);
        let realized = gain.gain_dbi.unwrap_or(f64::NAN);
        let _ = writeln!(
            summary,
            "{:.4},{:.4},{:.4},{:.4},{:.4},{:.4},{:.4}",
            angle,
            steer.phi().to_degrees(),
            gain.peak.theta.to_degrees(),
            gain.peak.phi.to_degrees(),
            realized,
            gain.directivity_dbi,
            sll
        );
        report.summary.push(format!(
            "scan {angle:+} deg: peak at theta {:.2} deg, phi {:.1} deg, gain {realized:.2} dBi, directivity {:.2} dBi, SLL {sll:.2} dB",
            gain.peak.theta.to_degrees(),
            gain.peak.phi.to_degrees(),
            gain.directivity_dbi
        ));
    }
    report.files.push(write_atomic(out, "scan_summary.csv", &summary)?);

    // broadside coding designed at the carrier, evaluated across the sweep
    if !config.frequency.sweep_hz.is_empty() {
        let coding = synthesize(
            &g,
            &f,
            &BeamSpec::Pencil {
                steer: Direction::broadside(),
            },
        )?;
        let sweep = config
            .frequency
            .sweep_hz
            .par_iter()
            .map(|&hz| {
                let fs = FrequencySpec::new(hz)?;
                let ff = far_field(&g, &fs, &coding, &config.response, &feed, &grid)?;
                Ok((hz, directivity_gain(&ff)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut csv = String::from("freq_hz,gain_dbi,directivity_dbi\n");
        for (hz, gain) in &sweep {
            let _ = writeln!(
                csv,
                "{:.0},{:.4},{:.4}",
                hz,
                gain.gain_dbi.unwrap_or(f64::NAN),
                gain.directivity_dbi
            );
        }
        if let Some((hz, best)) = sweep
            .iter()
            .max_by(|a, b| a.1.gain_dbi.partial_cmp(&b.1.gain_dbi).expect("finite gains"))
        {
            report.summary.push(format!(
                "broadside gain peaks at {:.3} GHz ({:.2} dBi)",
                hz / 1e9,
                best.gain_dbi.unwrap_or(f64::NAN)
            ));
        }
        report.files.push(write_atomic(out, "scan_gain_vs_freq.csv", &csv)?);
    }
    Ok(report)
}

/// Direction-finding setup described by a resolved DF block.
pub fn df_setup(config: &ScenarioConfig, df: &DfConfig) -> Result<DfExperiment> {
    let plan = |axis| ModulationPlan::new(df.period_s, df.slots, axis, df.subarray_slots.clone(), df.strip_width);
    Ok(DfExperiment {
        plan_x: plan(Axis::X)?,
        plan_y: plan(Axis::Y)?,
        signal: SignalConfig {
            samples_per_period: df.samples_per_period,
            periods: df.periods,
            snr_db: if df.noiseless { None } else { Some(df.snr_db) },
            compensation: df.compensation.into(),
        },
        trials: df.trials,
        seed: config.seed,
        shared_trial_seed: df.shared_trial_seed,
        cut_phi: df.cut_phi_deg.to_radians(),
    })
}

fn run_df(config: &ScenarioConfig, df: &DfConfig, out: &Path) -> Result<RunReport> {
    let g = config.geometry();
    let f = config.carrier();
    let setup = df_setup(config, df)?;
    let presets: Vec<f64> = df.angles_deg.iter().map(|a| a.to_radians()).collect();
    let results = df_experiment(&g, &f, &setup, &presets)?;
    let mut report = RunReport::default();
    report
        .files
        .push(write_atomic(out, "df_estimates.csv", &results.estimates_csv())?);
    report
        .files
        .push(write_atomic(out, "df_rmse.csv", &results.rmse_csv())?);
    report.summary.push(format!(
        "df: {} presets x {} trials, max |error| {:.4} deg, max RMSE {:.4} deg",
        presets.len(),
        df.trials,
        results.max_abs_error().to_degrees(),
        results.max_rmse().to_degrees()
    ));
    Ok(report)
}

/// Checks that a subcommand matches the scenario block of a config.
pub fn check_command(config: &ScenarioConfig, command: &str) -> std::result::Result<(), String> {
    let name = config.scenario.name();
    if name == command {
        Ok(())
    } else {
        Err(format!(
            "subcommand `{command}` does not match the [scenario.{name}] block"
        ))
    }
}
