//! Scenario configuration: TOML parsing, defaults and validation.
//!
//! Every field has a default reproducing the 20×20 S-band prototype. Unknown
//! keys are rejected. Validation failures carry the source line and the
//! offending field.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::field::{AngularGrid, FeedModel};
use crate::model::{ArrayGeometry, FrequencySpec, MetaAtomResponse};
use crate::tmdf::{Axis, FeedCompensation, ModulationPlan, H_MAX};

/// A configuration problem, located by source line when known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}, field `{}`: {}", self.field, self.message),
            None => write!(f, "field `{}`: {}", self.field, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Compensation {
    None,
    Phase,
    Full,
}

impl From<Compensation> for FeedCompensation {
    fn from(c: Compensation) -> Self {
        match c {
            Compensation::None => FeedCompensation::None,
            Compensation::Phase => FeedCompensation::Phase,
            Compensation::Full => FeedCompensation::Full,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometryConfig {
    pub rows: usize,
    pub cols: usize,
    pub pitch_m: f64,
    pub focal_length_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyConfig {
    pub carrier_hz: f64,
    pub sweep_hz: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeedConfig {
    pub gain_dbi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FarFieldConfig {
    pub theta_step_deg: f64,
    pub phi_step_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NearFieldConfig {
    pub z_m: f64,
    pub extent_m: f64,
    pub pitch_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OamConfig {
    pub modes: Vec<i32>,
    /// Spectrum covers modes `-max_mode..=max_mode`.
    pub max_mode: i32,
    pub winding_radius_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanConfig {
    /// Signed steering angles in the cut plane; negative values steer to `phi + 180°`.
    pub angles_deg: Vec<f64>,
    pub phi_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DfConfig {
    pub angles_deg: Vec<f64>,
    pub cut_phi_deg: f64,
    pub trials: usize,
    pub snr_db: f64,
    pub noiseless: bool,
    pub shared_trial_seed: bool,
    pub period_s: f64,
    pub samples_per_period: usize,
    pub periods: usize,
    pub slots: usize,
    pub subarray_slots: Vec<usize>,
    pub strip_width: usize,
    pub compensation: Compensation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Oam(OamConfig),
    Scan(ScanConfig),
    Df(DfConfig),
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Oam(_) => "oam",
            Scenario::Scan(_) => "scan",
            Scenario::Df(_) => "df",
        }
    }
}

/// Fully resolved configuration with every default expanded.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub seed: u64,
    #[serde(skip)]
    pub output_dir: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub response_table: Option<PathBuf>,
    pub geometry: GeometryConfig,
    pub frequency: FrequencyConfig,
    pub feed: FeedConfig,
    pub far_field: FarFieldConfig,
    pub near_field: NearFieldConfig,
    pub scenario: Scenario,
    #[serde(skip)]
    pub response: MetaAtomResponse,
}

// ---- raw, span-carrying form ------------------------------------------------

type S<T> = Option<Spanned<T>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[allow(dead_code)]
    toolkit_version: Option<String>,
    seed: S<u64>,
    output_dir: S<String>,
    response_table: S<String>,
    #[serde(default)]
    geometry: RawGeometry,
    #[serde(default)]
    frequency: RawFrequency,
    #[serde(default)]
    feed: RawFeed,
    #[serde(default)]
    far_field: RawFarField,
    #[serde(default)]
    near_field: RawNearField,
    scenario: S<RawScenario>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawGeometry {
    rows: S<usize>,
    cols: S<usize>,
    pitch_m: S<f64>,
    focal_length_m: S<f64>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawFrequency {
    carrier_hz: S<f64>,
    sweep_hz: S<Vec<f64>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawFeed {
    gain_dbi: S<f64>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawFarField {
    theta_step_deg: S<f64>,
    phi_step_deg: S<f64>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawNearField {
    z_m: S<f64>,
    extent_m: S<f64>,
    pitch_m: S<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    oam: Option<RawOam>,
    scan: Option<RawScan>,
    df: Option<RawDf>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOam {
    modes: S<Vec<i32>>,
    max_mode: S<i32>,
    winding_radius_m: S<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScan {
    angles_deg: S<Vec<f64>>,
    phi_deg: S<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDf {
    angles_deg: S<Vec<f64>>,
    cut_phi_deg: S<f64>,
    trials: S<usize>,
    snr_db: S<f64>,
    noiseless: S<bool>,
    shared_trial_seed: S<bool>,
    period_s: S<f64>,
    samples_per_period: S<usize>,
    periods: S<usize>,
    slots: S<usize>,
    subarray_slots: S<Vec<usize>>,
    strip_width: S<usize>,
    compensation: S<Compensation>,
}

/// Resolves optional spanned values against defaults, remembering where each
/// value came from for diagnostics.
struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn line_of(&self, offset: usize) -> usize {
        self.text[..offset.min(self.text.len())].matches('\n').count() + 1
    }

    fn take<T>(&self, value: S<T>, default: T) -> (T, Option<usize>) {
        match value {
            Some(s) => {
                let line = self.line_of(s.span().start);
                (s.into_inner(), Some(line))
            }
            None => (default, None),
        }
    }

    fn fail<T>(&self, line: Option<usize>, field: &str, message: impl Into<String>) -> Result<T, ConfigError> {
        Err(ConfigError {
            line,
            field: field.to_string(),
            message: message.into(),
        })
    }

    fn positive(&self, value: S<f64>, default: f64, field: &str) -> Result<(f64, Option<usize>), ConfigError> {
        let (v, line) = self.take(value, default);
        if !(v.is_finite() && v > 0.0) {
            return self.fail(line, field, format!("must be a positive finite number, got {v}"));
        }
        Ok((v, line))
    }
}

pub const DEFAULT_SEED: u64 = 0;

pub fn default_sweep_hz() -> Vec<f64> {
    vec![2.8e9, 2.9e9, 3.0e9, 3.1e9, 3.2e9]
}

fn default_df_angles() -> Vec<f64> {
    (-9..=9).map(|i| 5.0 * i as f64).collect()
}

impl ScenarioConfig {
    /// Reads and validates a config file; relative paths resolve against
    /// the file's directory.
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            line: None,
            field: "config".into(),
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, &base)
    }

    pub fn parse(text: &str, base_dir: &Path) -> Result<Self, ConfigError> {
        let ctx = Ctx { text };
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let (line, field) = match e.span() {
                Some(span) => {
                    let line_start = text[..span.start].rfind('\n').map_or(0, |i| i + 1);
                    let line_text = text[line_start..].lines().next().unwrap_or("");
                    let field = match line_text.split_once('=') {
                        Some((key, _)) if !key.trim().starts_with('[') => key.trim().to_string(),
                        _ => text[span.clone()].trim().chars().take(40).collect(),
                    };
                    (Some(ctx.line_of(span.start)), field)
                }
                None => (None, "config".to_string()),
            };
            ConfigError {
                line,
                field,
                message: e.message().trim().to_string(),
            }
        })?;
        resolve(&ctx, raw, base_dir)
    }

    pub fn geometry(&self) -> ArrayGeometry {
        let g = &self.geometry;
        ArrayGeometry::new(g.rows, g.cols, g.pitch_m, g.focal_length_m).expect("validated")
    }

    pub fn carrier(&self) -> FrequencySpec {
        FrequencySpec::new(self.frequency.carrier_hz).expect("validated")
    }

    pub fn feed_model(&self) -> FeedModel {
        FeedModel::for_geometry(&self.geometry(), self.feed.gain_dbi).expect("validated")
    }

    pub fn angular_grid(&self) -> AngularGrid {
        AngularGrid::hemisphere(self.far_field.theta_step_deg, self.far_field.phi_step_deg).expect("validated")
    }

    pub fn plane_spec(&self) -> crate::field::PlaneSpec {
        crate::field::PlaneSpec {
            z_m: self.near_field.z_m,
            extent_m: self.near_field.extent_m,
            pitch_m: self.near_field.pitch_m,
        }
    }

    /// Resolved configuration as TOML; feeding it back reproduces the run.
    pub fn to_manifest(&self) -> String {
        let body = toml::to_string(self).expect("config serializes");
        format!("toolkit_version = \"{}\"\n{body}", env!("CARGO_PKG_VERSION"))
    }
}

fn resolve(ctx: &Ctx, raw: RawConfig, base_dir: &Path) -> Result<ScenarioConfig, ConfigError> {
    let (seed, _) = ctx.take(raw.seed, DEFAULT_SEED);
    let output_dir = raw.output_dir.map(|s| base_dir.join(s.into_inner()));

    // geometry
    let g = raw.geometry;
    let (rows, rows_line) = ctx.take(g.rows, 20);
    if rows == 0 {
        return ctx.fail(rows_line, "geometry.rows", "must be at least 1");
    }
    let (cols, cols_line) = ctx.take(g.cols, 20);
    if cols == 0 {
        return ctx.fail(cols_line, "geometry.cols", "must be at least 1");
    }
    let (pitch_m, _) = ctx.positive(g.pitch_m, 0.05, "geometry.pitch_m")?;
    let (focal_length_m, _) = ctx.positive(g.focal_length_m, 0.364, "geometry.focal_length_m")?;
    let geometry = ArrayGeometry::new(rows, cols, pitch_m, focal_length_m).map_err(|e| ConfigError {
        line: rows_line,
        field: "geometry".into(),
        message: e.to_string(),
    })?;

    // response table
    let (response, response_table) = match raw.response_table {
        Some(s) => {
            let line = ctx.line_of(s.span().start);
            let path = base_dir.join(s.into_inner());
            let path = std::path::absolute(&path).unwrap_or(path);
            let table = MetaAtomResponse::from_path(&path).map_err(|e| ConfigError {
                line: Some(line),
                field: "response_table".into(),
                message: format!("{}: {e}", path.display()),
            })?;
            (table, Some(path))
        }
        None => (MetaAtomResponse::s_band_default(), None),
    };
    let (f_lo, f_hi) = response.frequency_range();
    let in_table = |f: f64| f >= f_lo && f <= f_hi;

    // frequency
    let (carrier_hz, carrier_line) = ctx.positive(raw.frequency.carrier_hz, 3.0e9, "frequency.carrier_hz")?;
    if !in_table(carrier_hz) {
        return ctx.fail(
            carrier_line,
            "frequency.carrier_hz",
            format!("{carrier_hz} Hz outside the response table range [{f_lo}, {f_hi}] Hz"),
        );
    }
    let (sweep_hz, sweep_line) = ctx.take(raw.frequency.sweep_hz, default_sweep_hz());
    if let Some(bad) = sweep_hz.iter().find(|f| !(f.is_finite() && in_table(**f))) {
        return ctx.fail(
            sweep_line,
            "frequency.sweep_hz",
            format!("{bad} Hz outside the response table range [{f_lo}, {f_hi}] Hz"),
        );
    }
    let lambda = FrequencySpec::new(carrier_hz).expect("positive").wavelength();

    // feed
    let (gain_dbi, gain_line) = ctx.take(raw.feed.gain_dbi, 10.0);
    if let Err(e) = FeedModel::for_geometry(&geometry, gain_dbi) {
        return ctx.fail(gain_line, "feed.gain_dbi", e.to_string());
    }

    // far field
    let (theta_step_deg, t_line) = ctx.positive(raw.far_field.theta_step_deg, 0.25, "far_field.theta_step_deg")?;
    let (phi_step_deg, p_line) = ctx.positive(raw.far_field.phi_step_deg, 1.0, "far_field.phi_step_deg")?;
    if let Err(e) = AngularGrid::hemisphere(theta_step_deg, phi_step_deg) {
        return ctx.fail(t_line.or(p_line), "far_field", e.to_string());
    }

    // near field
    let span = rows.max(cols) as f64 * pitch_m;
    let (z_m, _) = ctx.positive(raw.near_field.z_m, 2.0 * lambda, "near_field.z_m")?;
    let (extent_m, _) = ctx.positive(raw.near_field.extent_m, 1.5 * span, "near_field.extent_m")?;
    let (nf_pitch, nf_pitch_line) = ctx.positive(raw.near_field.pitch_m, 0.45 * lambda, "near_field.pitch_m")?;
    if nf_pitch > lambda / 2.0 * (1.0 + 1e-12) {
        return ctx.fail(
            nf_pitch_line,
            "near_field.pitch_m",
            format!("{nf_pitch} m exceeds half a wavelength ({:.6} m)", lambda / 2.0),
        );
    }

    let scenario = resolve_scenario(ctx, raw.scenario, &geometry, carrier_hz)?;

    Ok(ScenarioConfig {
        seed,
        output_dir,
        response_table,
        geometry: GeometryConfig {
            rows,
            cols,
            pitch_m,
            focal_length_m,
        },
        frequency: FrequencyConfig { carrier_hz, sweep_hz },
        feed: FeedConfig { gain_dbi },
        far_field: FarFieldConfig {
            theta_step_deg,
            phi_step_deg,
        },
        near_field: NearFieldConfig {
            z_m,
            extent_m,
            pitch_m: nf_pitch,
        },
        scenario,
        response,
    })
}

fn check_angles(ctx: &Ctx, angles: &[f64], line: Option<usize>, field: &str) -> Result<(), ConfigError> {
    if angles.is_empty() {
        return ctx.fail(line, field, "angle list is empty");
    }
    if let Some(a) = angles.iter().find(|a| !(a.is_finite() && a.abs() < 90.0)) {
        return ctx.fail(line, field, format!("angle {a} deg outside (-90, 90)"));
    }
    Ok(())
}

fn resolve_scenario(
    ctx: &Ctx,
    raw: S<RawScenario>,
    geometry: &ArrayGeometry,
    carrier_hz: f64,
) -> Result<Scenario, ConfigError> {
    let Some(raw) = raw else {
        return ctx.fail(
            None,
            "scenario",
            "missing; exactly one of [scenario.oam], [scenario.scan], [scenario.df] is required",
        );
    };
    let line = Some(ctx.line_of(raw.span().start));
    let raw = raw.into_inner();
    let count = raw.oam.is_some() as usize + raw.scan.is_some() as usize + raw.df.is_some() as usize;
    if count != 1 {
        return ctx.fail(
            line,
            "scenario",
            format!("exactly one scenario block is allowed, found {count}"),
        );
    }
    if let Some(o) = raw.oam {
        let (modes, modes_line) = ctx.take(o.modes, vec![0, 1, 2, 3]);
        if modes.is_empty() {
            return ctx.fail(modes_line, "scenario.oam.modes", "mode list is empty");
        }
        let top = modes.iter().map(|m| m.abs()).max().unwrap_or(0);
        let (max_mode, mm_line) = ctx.take(o.max_mode, top.max(5));
        if max_mode < top {
            return ctx.fail(mm_line, "scenario.oam.max_mode", format!("must cover |mode| = {top}"));
        }
        let half_span = geometry.rows().min(geometry.cols()) as f64 * geometry.pitch() / 2.0;
        let (winding_radius_m, wr_line) =
            ctx.positive(o.winding_radius_m, 0.4 * half_span, "scenario.oam.winding_radius_m")?;
        if winding_radius_m >= half_span * 1.5 {
            return ctx.fail(
                wr_line,
                "scenario.oam.winding_radius_m",
                "circle leaves the near-field plane",
            );
        }
        return Ok(Scenario::Oam(OamConfig {
            modes,
            max_mode,
            winding_radius_m,
        }));
    }
    if let Some(s) = raw.scan {
        let (angles_deg, a_line) = ctx.take(s.angles_deg, vec![0.0, 15.0, 30.0, 45.0, 60.0]);
        check_angles(ctx, &angles_deg, a_line, "scenario.scan.angles_deg")?;
        let (phi_deg, phi_line) = ctx.take(s.phi_deg, 0.0);
        if !phi_deg.is_finite() {
            return ctx.fail(phi_line, "scenario.scan.phi_deg", "must be finite");
        }
        return Ok(Scenario::Scan(ScanConfig { angles_deg, phi_deg }));
    }
    let d = raw.df.expect("one block present");
    let (angles_deg, a_line) = ctx.take(d.angles_deg, default_df_angles());
    check_angles(ctx, &angles_deg, a_line, "scenario.df.angles_deg")?;
    let (cut_phi_deg, cut_line) = ctx.take(d.cut_phi_deg, 0.0);
    if !cut_phi_deg.is_finite() {
        return ctx.fail(cut_line, "scenario.df.cut_phi_deg", "must be finite");
    }
    let (trials, t_line) = ctx.take(d.trials, 3);
    if trials == 0 {
        return ctx.fail(t_line, "scenario.df.trials", "must be at least 1");
    }
    let (snr_db, snr_line) = ctx.take(d.snr_db, 20.0);
    if !snr_db.is_finite() {
        return ctx.fail(snr_line, "scenario.df.snr_db", "must be finite");
    }
    let (noiseless, _) = ctx.take(d.noiseless, false);
    let (shared_trial_seed, _) = ctx.take(d.shared_trial_seed, false);
    let (period_s, period_line) = ctx.positive(d.period_s, crate::tmdf::DEFAULT_PERIOD_S, "scenario.df.period_s")?;
    if period_s * carrier_hz < 1e4 {
        return ctx.fail(
            period_line,
            "scenario.df.period_s",
            "modulation frequency must stay below carrier / 1e4",
        );
    }
    let (samples_per_period, spp_line) = ctx.take(d.samples_per_period, 128);
    let (periods, periods_line) = ctx.take(d.periods, 8);
    if periods == 0 {
        return ctx.fail(periods_line, "scenario.df.periods", "must be at least 1");
    }
    let (slots, slots_line) = ctx.take(d.slots, 4);
    let (subarray_slots, ss_line) = ctx.take(d.subarray_slots, vec![1, 3]);
    let (strip_width, sw_line) = ctx.take(d.strip_width, 1);
    let (compensation, _) = ctx.take(d.compensation, Compensation::Full);
    if samples_per_period < 2 * H_MAX {
        return ctx.fail(
            spp_line,
            "scenario.df.samples_per_period",
            format!("must be at least {} to resolve harmonic {H_MAX}", 2 * H_MAX),
        );
    }
    if slots == 0 || samples_per_period % slots != 0 {
        return ctx.fail(
            spp_line.or(slots_line),
            "scenario.df.samples_per_period",
            format!("{samples_per_period} samples do not divide into {slots} slots"),
        );
    }
    for axis in [Axis::X, Axis::Y] {
        let plan = ModulationPlan::new(period_s, slots, axis, subarray_slots.clone(), strip_width).map_err(|e| {
            ConfigError {
                line: ss_line.or(slots_line),
                field: "scenario.df.subarray_slots".into(),
                message: e.to_string(),
            }
        })?;
        if let Err(e) = plan.ratio_constant() {
            return ctx.fail(ss_line.or(slots_line), "scenario.df.subarray_slots", e.to_string());
        }
        if let Err(e) = plan.spacing(geometry) {
            return ctx.fail(sw_line, "scenario.df.strip_width", e.to_string());
        }
    }
    Ok(Scenario::Df(DfConfig {
        angles_deg,
        cut_phi_deg,
        trials,
        snr_db,
        noiseless,
        shared_trial_seed,
        period_s,
        samples_per_period,
        periods,
        slots,
        subarray_slots,
        strip_width,
        compensation,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ScenarioConfig, ConfigError> {
        ScenarioConfig::parse(text, Path::new("."))
    }

    #[test]
    fn minimal_config_expands_to_prototype() {
        let c = parse("[scenario.scan]\n").unwrap();
        assert_eq!(c.geometry.rows, 20);
        assert_eq!(c.geometry.focal_length_m, 0.364);
        assert_eq!(c.frequency.carrier_hz, 3.0e9);
        assert_eq!(c.feed.gain_dbi, 10.0);
        assert_eq!(c.frequency.sweep_hz, default_sweep_hz());
        match &c.scenario {
            Scenario::Scan(s) => assert_eq!(s.angles_deg, vec![0.0, 15.0, 30.0, 45.0, 60.0]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_key_is_located() {
        let e = parse("seed = 1\n[geometry]\nrows = 20\ncolz = 3\n[scenario.oam]\n").unwrap_err();
        assert_eq!(e.line, Some(4));
        assert!(e.field.contains("colz"), "{e}");
    }

    #[test]
    fn invalid_value_is_located() {
        let e = parse("[geometry]\npitch_m = -0.05\n[scenario.oam]\n").unwrap_err();
        assert_eq!(e.line, Some(2));
        assert_eq!(e.field, "geometry.pitch_m");
        let e = parse("[scenario.df]\ntrials = 0\n").unwrap_err();
        assert_eq!((e.line, e.field.as_str()), (Some(2), "scenario.df.trials"));
        let e = parse("[near_field]\npitch_m = 0.06\n[scenario.oam]\n").unwrap_err();
        assert_eq!(e.field, "near_field.pitch_m");
    }

    #[test]
    fn scenario_count_is_enforced() {
        assert_eq!(parse("seed = 3\n").unwrap_err().field, "scenario");
        let e = parse("[scenario.oam]\n[scenario.df]\n").unwrap_err();
        assert_eq!(e.field, "scenario");
    }

    #[test]
    fn carrier_must_be_tabulated() {
        let e = parse("[frequency]\ncarrier_hz = 5e9\n[scenario.scan]\n").unwrap_err();
        assert_eq!((e.line, e.field.as_str()), (Some(2), "frequency.carrier_hz"));
    }

    #[test]
    fn df_plan_must_be_invertible() {
        let e = parse("[scenario.df]\nslots = 2\nsubarray_slots = [1, 2]\n").unwrap_err();
        assert_eq!(e.field, "scenario.df.subarray_slots");
    }

    #[test]
    fn manifest_round_trips() {
        for text in [
            "seed = 9\n[scenario.oam]\nmodes = [0, -2]\n",
            "[frequency]\nsweep_hz = [2.95e9]\n[scenario.scan]\nangles_deg = [-30.0, 12.5]\n",
            "[scenario.df]\nnoiseless = true\ncompensation = \"phase\"\n",
        ] {
            let c = parse(text).unwrap();
            let manifest = c.to_manifest();
            let again = parse(&manifest).unwrap();
            assert_eq!(c, again, "{manifest}");
            assert_eq!(manifest, again.to_manifest());
        }
    }
}
