use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use super::feed::{illuminate, FeedModel};
use crate::error::{Error, Result};
use crate::model::{ArrayGeometry, CodingMatrix, FrequencySpec, MetaAtomResponse};

/// Rectangular (θ, φ) sampling of the forward hemisphere.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularGrid {
    thetas: Vec<f64>,
    phis: Vec<f64>,
}

impl AngularGrid {
    pub fn new(thetas: Vec<f64>, phis: Vec<f64>) -> Result<Self> {
        if thetas.is_empty() || phis.is_empty() {
            return Err(Error::InvalidGrid("grid must be non-empty".into()));
        }
        if thetas.iter().chain(&phis).any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("non-finite angle".into()));
        }
        if thetas.iter().any(|t| *t < 0.0 || *t > FRAC_PI_2 + 1e-12) {
            return Err(Error::InvalidGrid("theta samples must lie in [0, 90] deg".into()));
        }
        if thetas.windows(2).any(|w| w[1] <= w[0]) || phis.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("samples must be strictly increasing".into()));
        }
        Ok(Self { thetas, phis })
    }

    /// θ from 0° to 90° inclusive and φ over [0°, 360°) with the given steps.
    pub fn hemisphere(theta_step_deg: f64, phi_step_deg: f64) -> Result<Self> {
        if !(theta_step_deg > 0.0 && phi_step_deg > 0.0) {
            return Err(Error::InvalidGrid("steps must be positive".into()));
        }
        let nt = (90.0 / theta_step_deg).round() as usize;
        let np = (360.0 / phi_step_deg).round() as usize;
        if (nt as f64 * theta_step_deg - 90.0).abs() > 1e-9 || (np as f64 * phi_step_deg - 360.0).abs() > 1e-9 {
            return Err(Error::InvalidGrid(format!(
                "steps {theta_step_deg}/{phi_step_deg} deg must divide 90/360 deg"
            )));
        }
        let thetas = (0..=nt).map(|i| (i as f64 * theta_step_deg).to_radians()).collect();
        let phis = (0..np).map(|j| (j as f64 * phi_step_deg).to_radians()).collect();
        Self::new(thetas, phis)
    }

    /// 0.25° in θ, 1° in φ.
    pub fn default_hemisphere() -> Self {
        Self::hemisphere(0.25, 1.0).expect("default grid is valid")
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn phis(&self) -> &[f64] {
        &self.phis
    }

    pub fn len(&self) -> usize {
        self.thetas.len() * self.phis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Uniform θ from 0 to 90° and uniform φ closing the full circle.
    pub fn is_full_hemisphere(&self) -> bool {
        let t = &self.thetas;
        let p = &self.phis;
        if t.len() < 3 || p.len() < 3 || t[0].abs() > 1e-12 || (t[t.len() - 1] - FRAC_PI_2).abs() > 1e-9 {
            return false;
        }
        let dt = t[1] - t[0];
        let dp = TAU / p.len() as f64;
        t.windows(2).all(|w| ((w[1] - w[0]) - dt).abs() < 1e-9)
            && p.iter()
                .enumerate()
                .all(|(j, v)| (v - p[0] - j as f64 * dp).abs() < 1e-9)
    }
}

/// Complex far field sampled on an [`AngularGrid`], θ-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FarFieldPattern {
    grid: AngularGrid,
    field: Vec<Complex64>,
    frequency_hz: f64,
    feed_power: Option<f64>,
}

impl FarFieldPattern {
    pub fn new(grid: AngularGrid, field: Vec<Complex64>, frequency_hz: f64) -> Result<Self> {
        if field.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "field has {} samples, grid has {}",
                field.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid,
            field,
            frequency_hz,
            feed_power: None,
        })
    }

    /// Attaches the total feed power used to normalize realized gain.
    pub fn with_feed_power(mut self, power: f64) -> Self {
        self.feed_power = Some(power);
        self
    }

    pub fn grid(&self) -> &AngularGrid {
        &self.grid
    }

    pub fn field(&self) -> &[Complex64] {
        &self.field
    }

    pub fn frequency_hz(&self) -> f64 {
        self.frequency_hz
    }

    pub fn feed_power(&self) -> Option<f64> {
        self.feed_power
    }

    pub fn n_theta(&self) -> usize {
        self.grid.thetas.len()
    }

    pub fn n_phi(&self) -> usize {
        self.grid.phis.len()
    }

    pub fn at(&self, it: usize, jp: usize) -> Complex64 {
        self.field[it * self.n_phi() + jp]
    }

    pub fn power(&self) -> Vec<f64> {
        self.field.iter().map(|e| e.norm_sqr()).collect()
    }

    /// Scales every sample by `c`.
    pub fn scaled(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        out.field.iter_mut().for_each(|e| *e *= c);
        out
    }

    /// CSV `theta_deg,phi_deg,re,im,mag_db`, θ-major, magnitude normalized to
    /// the pattern peak.
    pub fn to_csv(&self) -> String {
        let peak = self.field.iter().map(|e| e.norm()).fold(0.0, f64::max);
        let mut out = String::with_capacity(self.field.len() * 64);
        out.push_str("theta_deg,phi_deg,re,im,mag_db\n");
        for (it, t) in self.grid.thetas.iter().enumerate() {
            for (jp, p) in self.grid.phis.iter().enumerate() {
                let e = self.at(it, jp);
                let db = if peak > 0.0 && e.norm() > 0.0 {
                    (20.0 * (e.norm() / peak).log10()).max(-300.0)
                } else {
                    -300.0
                };
                let _ = writeln!(
                    out,
                    "{:.4},{:.4},{:.9e},{:.9e},{:.4}",
                    t.to_degrees(),
                    p.to_degrees(),
                    e.re,
                    e.im,
                    db
                );
            }
        }
        out
    }
}

/// Reflected tangential field on each element: incident feed field times the
/// state reflection coefficient at the pattern frequency.
pub fn aperture_field(
    geometry: &ArrayGeometry,
    freq: &FrequencySpec,
    coding: &CodingMatrix,
    response: &MetaAtomResponse,
    feed: &FeedModel,
) -> Result<Vec<Complex64>> {
    coding.check_geometry(geometry)?;
    let states = response.states_at(freq.carrier_hz())?;
    let incident = illuminate(geometry, freq, feed);
    Ok(incident
        .iter()
        .zip(coding.bits())
        .map(|(a, &b)| a * states[b as usize])
        .collect())
}

/// Far field of an arbitrary aperture distribution (row-major, one value per element).
pub fn radiate(
    geometry: &ArrayGeometry,
    freq: &FrequencySpec,
    aperture: &[Complex64],
    grid: &AngularGrid,
) -> Result<FarFieldPattern> {
    if aperture.len() != geometry.element_count() {
        return Err(Error::DimensionMismatch {
            got_rows: aperture.len(),
            got_cols: 1,
            rows: geometry.rows(),
            cols: geometry.cols(),
        });
    }
    let k = freq.wavenumber();
    let scale = k * geometry.cell_area() / TAU;
    let xs: Vec<f64> = (0..geometry.rows()).map(|i| geometry.x_0(i)).collect();
    let ys: Vec<f64> = (0..geometry.cols()).map(|j| geometry.y_0(j)).collect();
    let cols = geometry.cols();
    let phis = grid.phis.clone();

    let rows: Vec<Vec<Complex64>> = grid
        .thetas
        .par_iter()
        .map(|&theta| {
            let (st, ct) = theta.sin_cos();
            let mut ex = vec![Complex64::default(); xs.len()];
            let mut ey = vec![Complex64::default(); ys.len()];
            phis.iter()
                .map(|&phi| {
                    let (sp, cp) = phi.sin_cos();
                    let (u, v) = (st * cp, st * sp);
                    for (e, x) in ex.iter_mut().zip(&xs) {
                        *e = Complex64::cis(k * x * u);
                    }
                    for (e, y) in ey.iter_mut().zip(&ys) {
                        *e = Complex64::cis(k * y * v);
                    }
                    let mut acc = Complex64::default();
                    for (i, exi) in ex.iter().enumerate() {
                        let row = &aperture[i * cols..(i + 1) * cols];
                        let inner: Complex64 = row.iter().zip(&ey).map(|(a, e)| a * e).sum();
                        acc += exi * inner;
                    }
                    acc * (scale * ct)
                })
                .collect()
        })
        .collect();
    FarFieldPattern::new(grid.clone(), rows.into_iter().flatten().collect(), freq.carrier_hz())
}

/// Far-field pattern of a coded array with cosθ element pattern, normalized so
/// realized gain is relative to the total feed power.
pub fn far_field(
    geometry: &ArrayGeometry,
    freq: &FrequencySpec,
    coding: &CodingMatrix,
    response: &MetaAtomResponse,
    feed: &FeedModel,
    grid: &AngularGrid,
) -> Result<FarFieldPattern> {
    let aperture = aperture_field(geometry, freq, coding, response, feed)?;
    Ok(radiate(geometry, freq, &aperture, grid)?.with_feed_power(feed.total_power()))
}
