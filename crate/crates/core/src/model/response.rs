use std::f64::consts::PI;
use std::io::Read;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// CSV header of a response table file.
pub const RESPONSE_CSV_HEADER: &str = "freq_hz,mag0_db,phase0_deg,mag1_db,phase1_deg";

/// One tabulated frequency. Magnitudes are linear, phases in radians and
/// unwrapped along the table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseSample {
    pub freq_hz: f64,
    pub mag0: f64,
    pub phase0: f64,
    pub mag1: f64,
    pub phase1: f64,
}

/// Frequency-dependent complex reflection of the two meta-atom states.
#[derive(Debug, Clone, PartialEq)]
pub struct MetaAtomResponse {
    samples: Vec<ResponseSample>,
}

fn unwrap_in_place(phases: &mut [f64]) {
    for k in 1..phases.len() {
        let mut d = phases[k] - phases[k - 1];
        while d > PI {
            phases[k] -= 2.0 * PI;
            d -= 2.0 * PI;
        }
        while d < -PI {
            phases[k] += 2.0 * PI;
            d += 2.0 * PI;
        }
    }
}

fn db_to_mag(db: f64) -> f64 {
    10f64.powf(db / 20.0)
}

pub fn mag_to_db(mag: f64) -> f64 {
    20.0 * mag.log10()
}

impl MetaAtomResponse {
    /// Validates ordering and passivity and unwraps both phase tracks.
    pub fn new(mut samples: Vec<ResponseSample>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::ResponseTable("table has no rows".into()));
        }
        for (k, s) in samples.iter().enumerate() {
            let vals = [s.freq_hz, s.mag0, s.phase0, s.mag1, s.phase1];
            if vals.iter().any(|v| !v.is_finite()) {
                return Err(Error::ResponseTable(format!("row {k}: non-finite value")));
            }
            if s.freq_hz <= 0.0 {
                return Err(Error::ResponseTable(format!("row {k}: frequency must be positive")));
            }
            // small slack for values that round-tripped through dB text
            let limit = 1.0 + 1e-12;
            if s.mag0 < 0.0 || s.mag1 < 0.0 || s.mag0 > limit || s.mag1 > limit {
                return Err(Error::ResponseTable(format!(
                    "row {k}: reflection magnitude must lie in [0, 1] (passive surface)"
                )));
            }
            if k > 0 && s.freq_hz <= samples[k - 1].freq_hz {
                return Err(Error::ResponseTable(format!(
                    "row {k}: frequencies must be strictly increasing"
                )));
            }
        }
        let mut p0: Vec<f64> = samples.iter().map(|s| s.phase0).collect();
        let mut p1: Vec<f64> = samples.iter().map(|s| s.phase1).collect();
        unwrap_in_place(&mut p0);
        unwrap_in_place(&mut p1);
        for (s, (a, b)) in samples.iter_mut().zip(p0.into_iter().zip(p1)) {
            s.phase0 = a;
            s.phase1 = b;
        }
        Ok(Self { samples })
    }

    /// Lossless states 0 and π, constant over `[f_min, f_max]`.
    pub fn ideal(f_min_hz: f64, f_max_hz: f64) -> Self {
        let row = |f| ResponseSample {
            freq_hz: f,
            mag0: 1.0,
            phase0: 0.0,
            mag1: 1.0,
            phase1: PI,
        };
        Self::new(vec![row(f_min_hz), row(f_max_hz)]).expect("ideal table is valid")
    }

    /// Built-in S-band table, 2.60–3.40 GHz in 10 MHz steps.
    ///
    /// Both states lose less than 0.6 dB between 2.72 and 3.25 GHz, the π
    /// state has its loss bump near 3.0 GHz, and the state phase difference
    /// drifts linearly from about 205° to 155° across that band.
    pub fn s_band_default() -> Self {
        let samples = (0..=80)
            .map(|k| {
                let f_ghz = 2.60 + 0.01 * k as f64;
                let x = (f_ghz - 2.985) / 0.265;
                let mag0_db = -0.20 - 0.15 * x * x;
                let bump = (-((f_ghz - 3.0) / 0.08).powi(2)).exp();
                let mag1_db = -0.30 - 0.22 * bump - 0.10 * x * x;
                let phase0_deg = 150.0 - 220.0 * (f_ghz - 2.60);
                let diff_deg = 180.0 - 24.9 * x;
                ResponseSample {
                    freq_hz: (f_ghz * 1e9).round(),
                    mag0: db_to_mag(mag0_db),
                    phase0: phase0_deg.to_radians(),
                    mag1: db_to_mag(mag1_db),
                    phase1: (phase0_deg - diff_deg).to_radians(),
                }
            })
            .collect();
        Self::new(samples).expect("built-in table is valid")
    }

    pub fn samples(&self) -> &[ResponseSample] {
        &self.samples
    }

    pub fn frequency_range(&self) -> (f64, f64) {
        (self.samples[0].freq_hz, self.samples[self.samples.len() - 1].freq_hz)
    }

    /// Complex reflection of state `bit` at `freq_hz`, interpolated linearly in
    /// magnitude and unwrapped phase.
    pub fn at(&self, freq_hz: f64, bit: u8) -> Result<Complex64> {
        let (lo, hi) = self.frequency_range();
        if !(freq_hz >= lo && freq_hz <= hi) {
            return Err(Error::FrequencyOutOfRange {
                freq_hz,
                min_hz: lo,
                max_hz: hi,
            });
        }
        let pick = |s: &ResponseSample| {
            if bit == 0 {
                (s.mag0, s.phase0)
            } else {
                (s.mag1, s.phase1)
            }
        };
        let k = self.samples.partition_point(|s| s.freq_hz < freq_hz);
        let (mag, phase) = if self.samples[k].freq_hz == freq_hz {
            pick(&self.samples[k])
        } else {
            let (a, b) = (&self.samples[k - 1], &self.samples[k]);
            let t = (freq_hz - a.freq_hz) / (b.freq_hz - a.freq_hz);
            let (ma, pa) = pick(a);
            let (mb, pb) = pick(b);
            (ma + t * (mb - ma), pa + t * (pb - pa))
        };
        Ok(Complex64::from_polar(mag, phase))
    }

    /// Both states at once, `[gamma0, gamma_pi]`.
    pub fn states_at(&self, freq_hz: f64) -> Result<[Complex64; 2]> {
        Ok([self.at(freq_hz, 0)?, self.at(freq_hz, 1)?])
    }

    /// Contiguous tabulated band around `center_hz` where both losses stay at or
    /// below `max_loss_db` and the phase difference stays within
    /// `180° ± tolerance_deg`. Returns the first and last qualifying frequency.
    pub fn one_bit_band(&self, center_hz: f64, max_loss_db: f64, tolerance_deg: f64) -> Option<(f64, f64)> {
        let ok = |s: &ResponseSample| {
            let loss_ok = -mag_to_db(s.mag0) <= max_loss_db && -mag_to_db(s.mag1) <= max_loss_db;
            let diff = phase_difference_deg(s);
            loss_ok && (diff - 180.0).abs() <= tolerance_deg
        };
        let start = self
            .samples
            .iter()
            .enumerate()
            .min_by(|a, b| {
                (a.1.freq_hz - center_hz)
                    .abs()
                    .total_cmp(&(b.1.freq_hz - center_hz).abs())
            })?
            .0;
        if !ok(&self.samples[start]) {
            return None;
        }
        let mut lo = start;
        while lo > 0 && ok(&self.samples[lo - 1]) {
            lo -= 1;
        }
        let mut hi = start;
        while hi + 1 < self.samples.len() && ok(&self.samples[hi + 1]) {
            hi += 1;
        }
        Some((self.samples[lo].freq_hz, self.samples[hi].freq_hz))
    }

    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .terminator(csv::Terminator::Any(b'\n'))
            .from_reader(reader);
        let header: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();
        if header.join(",") != RESPONSE_CSV_HEADER {
            return Err(Error::ResponseTable(format!(
                "header must be `{RESPONSE_CSV_HEADER}`, found `{}`",
                header.join(",")
            )));
        }
        let mut samples = Vec::new();
        for (k, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let parse = |idx: usize| -> Result<f64> {
                let field = rec.get(idx).unwrap_or("").trim();
                if field.ends_with('\r') || rec.iter().any(|f| f.contains('\r')) {
                    return Err(Error::ResponseTable(format!("row {}: CR line ending", k + 1)));
                }
                field
                    .parse::<f64>()
                    .map_err(|_| Error::ResponseTable(format!("row {}: cannot parse `{field}` as a number", k + 1)))
            };
            if rec.len() != 5 {
                return Err(Error::ResponseTable(format!("row {}: expected 5 fields", k + 1)));
            }
            samples.push(ResponseSample {
                freq_hz: parse(0)?,
                mag0: db_to_mag(parse(1)?),
                phase0: parse(2)?.to_radians(),
                mag1: db_to_mag(parse(3)?),
                phase1: parse(4)?.to_radians(),
            });
        }
        Self::new(samples)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::from_csv_reader(file)
    }

    /// Serializes with phases wrapped to (-180°, 180°].
    pub fn to_csv(&self) -> String {
        let wrap = |deg: f64| {
            let w = (deg + 180.0).rem_euclid(360.0) - 180.0;
            if w == -180.0 {
                180.0
            } else {
                w
            }
        };
        let mut out = String::from(RESPONSE_CSV_HEADER);
        out.push('\n');
        for s in &self.samples {
            out.push_str(&format!(
                "{},{:.6},{:.6},{:.6},{:.6}\n",
                s.freq_hz,
                mag_to_db(s.mag0),
                wrap(s.phase0.to_degrees()),
                mag_to_db(s.mag1),
                wrap(s.phase1.to_degrees()),
            ));
        }
        out
    }
}

/// Phase of state 0 minus phase of state π, reduced to [0°, 360°).
pub fn phase_difference_deg(s: &ResponseSample) -> f64 {
    (s.phase0 - s.phase1).to_degrees().rem_euclid(360.0)
}
