use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use super::farfield::aperture_field;
use super::feed::FeedModel;
use crate::error::{Error, Result};
use crate::model::{ArrayGeometry, CodingMatrix, FrequencySpec, MetaAtomResponse};

/// Square sampling plane parallel to the aperture, centered on the array axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneSpec {
    /// Plane height above the aperture.
    pub z_m: f64,
    /// Full side length of the sampled square.
    pub extent_m: f64,
    pub pitch_m: f64,
}

impl PlaneSpec {
    /// z = 2λ, side 1.5× the array span, pitch 0.45λ.
    pub fn default_for(geometry: &ArrayGeometry, freq: &FrequencySpec) -> Self {
        let lambda = freq.wavelength();
        let span = geometry.rows().max(geometry.cols()) as f64 * geometry.pitch();
        Self {
            z_m: 2.0 * lambda,
            extent_m: 1.5 * span,
            pitch_m: 0.45 * lambda,
        }
    }

    fn validate(&self, freq: &FrequencySpec) -> Result<usize> {
        if !(self.z_m.is_finite() && self.z_m > 0.0) {
            return Err(Error::NearField(format!(
                "plane z = {} m must lie in front of the array",
                self.z_m
            )));
        }
        if !(self.pitch_m.is_finite() && self.pitch_m > 0.0 && self.extent_m.is_finite() && self.extent_m > 0.0) {
            return Err(Error::NearField("pitch and extent must be positive".into()));
        }
        check_pitch(self.pitch_m, freq.wavelength())?;
        Ok((self.extent_m / 2.0 / self.pitch_m + 1e-9).floor() as usize)
    }
}

pub(super) fn check_pitch(pitch: f64, lambda: f64) -> Result<()> {
    if pitch > lambda / 2.0 * (1.0 + 1e-12) {
        return Err(Error::NearField(format!(
            "pitch {pitch:.5} m exceeds lambda/2 = {:.5} m",
            lambda / 2.0
        )));
    }
    Ok(())
}

/// Complex field on a `(2n+1) × (2n+1)` grid at `x, y = k·pitch`, `|k| ≤ n`,
/// stored y-major.
#[derive(Debug, Clone, PartialEq)]
pub struct NearFieldPlane {
    z_m: f64,
    pitch_m: f64,
    half_count: usize,
    frequency_hz: f64,
    samples: Vec<Complex64>,
}

impl NearFieldPlane {
    pub fn new(z_m: f64, pitch_m: f64, half_count: usize, frequency_hz: f64, samples: Vec<Complex64>) -> Result<Self> {
        let side = 2 * half_count + 1;
        if samples.len() != side * side {
            return Err(Error::NearField(format!(
                "{} samples for a {side}x{side} plane",
                samples.len()
            )));
        }
        let freq = FrequencySpec::new(frequency_hz)?;
        if !(z_m > 0.0) || !(pitch_m > 0.0) {
            return Err(Error::NearField("plane z and pitch must be positive".into()));
        }
        check_pitch(pitch_m, freq.wavelength())?;
        Ok(Self {
            z_m,
            pitch_m,
            half_count,
            frequency_hz,
            samples,
        })
    }

    pub fn z(&self) -> f64 {
        self.z_m
    }

    pub fn pitch(&self) -> f64 {
        self.pitch_m
    }

    pub fn half_count(&self) -> usize {
        self.half_count
    }

    /// Samples per side.
    pub fn side(&self) -> usize {
        2 * self.half_count + 1
    }

    pub fn frequency_hz(&self) -> f64 {
        self.frequency_hz
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Coordinate of grid index `i` (0-based) along either axis.
    pub fn coordinate(&self, i: usize) -> f64 {
        (i as f64 - self.half_count as f64) * self.pitch_m
    }

    pub fn at(&self, ix: usize, iy: usize) -> Complex64 {
        self.samples[iy * self.side() + ix]
    }

    /// Bilinear interpolation; `None` outside the sampled square.
    pub fn interpolate(&self, x: f64, y: f64) -> Option<Complex64> {
        let fx = x / self.pitch_m + self.half_count as f64;
        let fy = y / self.pitch_m + self.half_count as f64;
        let last = (self.side() - 1) as f64;
        if !(fx >= 0.0 && fy >= 0.0 && fx <= last && fy <= last) {
            return None;
        }
        let ix = (fx.floor() as usize).min(self.side() - 2);
        let iy = (fy.floor() as usize).min(self.side() - 2);
        let (tx, ty) = (fx - ix as f64, fy - iy as f64);
        Some(
            self.at(ix, iy) * ((1.0 - tx) * (1.0 - ty))
                + self.at(ix + 1, iy) * (tx * (1.0 - ty))
                + self.at(ix, iy + 1) * ((1.0 - tx) * ty)
                + self.at(ix + 1, iy + 1) * (tx * ty),
        )
    }

    /// CSV `x_m,y_m,re,im`, y-major.
    pub fn to_csv(&self) -> String {
        let side = self.side();
        let mut out = String::with_capacity(side * side * 56);
        out.push_str("x_m,y_m,re,im\n");
        for iy in 0..side {
            for ix in 0..side {
                let e = self.at(ix, iy);
                let _ = writeln!(
                    out,
                    "{:.6},{:.6},{:.9e},{:.9e}",
                    self.coordinate(ix),
                    self.coordinate(iy),
                    e.re,
                    e.im
                );
            }
        }
        out
    }
}

/// Field radiated by an aperture distribution onto a plane, summing exact
/// spherical waves `(kA/2π) (z/R) exp(-jkR)/R` from every element.
pub fn near_field_from_aperture(
    geometry: &ArrayGeometry,
    freq: &FrequencySpec,
    aperture: &[Complex64],
    spec: &PlaneSpec,
) -> Result<NearFieldPlane> {
    let n = spec.validate(freq)?;
    if aperture.len() != geometry.element_count() {
        return Err(Error::DimensionMismatch {
            got_rows: aperture.len(),
            got_cols: 1,
            rows: geometry.rows(),
            cols: geometry.cols(),
        });
    }
    let k = freq.wavenumber();
    let weight = k * geometry.cell_area() / TAU;
    let side = 2 * n + 1;
    let coord = |i: usize| (i as f64 - n as f64) * spec.pitch_m;
    let sources: Vec<([f64; 3], Complex64)> = (0..geometry.rows())
        .flat_map(|i| (0..geometry.cols()).map(move |j| (i, j)))
        .map(|(i, j)| (geometry.position_0(i, j), aperture[geometry.offset(i, j)] * weight))
        .collect();
    let z = spec.z_m;
    let samples: Vec<Complex64> = (0..side)
        .into_par_iter()
        .flat_map_iter(|iy| {
            let y = coord(iy);
            let sources = &sources;
            (0..side).map(move |ix| {
                let x = coord(ix);
                sources
                    .iter()
                    .map(|(p, a)| {
                        let (dx, dy, dz) = (x - p[0], y - p[1], z - p[2]);
                        let r = (dx * dx + dy * dy + dz * dz).sqrt();
                        a * Complex64::cis(-k * r) * (dz / (r * r))
                    })
                    .sum()
            })
        })
        .collect();
    NearFieldPlane::new(z, spec.pitch_m, n, freq.carrier_hz(), samples)
}

/// Near field of a coded, feed-illuminated array on the given plane.
pub fn sample_near_field(
    geometry: &ArrayGeometry,
    freq: &FrequencySpec,
    coding: &CodingMatrix,
    response: &MetaAtomResponse,
    feed: &FeedModel,
    spec: &PlaneSpec,
) -> Result<NearFieldPlane> {
    let aperture = aperture_field(geometry, freq, coding, response, feed)?;
    near_field_from_aperture(geometry, freq, &aperture, spec)
}

/// Net phase winding (in turns) of the plane field around a circle of
/// `radius` centered at `(cx, cy)`, traversed counterclockwise with
/// `points` samples.
pub fn phase_winding(plane: &NearFieldPlane, center: (f64, f64), radius: f64, points: usize) -> Result<f64> {
    if !(radius > 0.0) || points < 8 {
        return Err(Error::InvalidRing(
            "winding circle needs radius > 0 and >= 8 points".into(),
        ));
    }
    let values = (0..points)
        .map(|i| {
            let a = TAU * i as f64 / points as f64;
            plane
                .interpolate(center.0 + radius * a.cos(), center.1 + radius * a.sin())
                .ok_or_else(|| Error::InvalidRing("winding circle leaves the sampled plane".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    if values.iter().any(|v| v.norm() == 0.0) {
        return Err(Error::InvalidRing("field vanishes on the winding circle".into()));
    }
    let mut total = 0.0;
    for i in 0..points {
        let d = values[(i + 1) % points].arg() - values[i].arg();
        total += (d + PI).rem_euclid(TAU) - PI;
    }
    Ok(total / TAU)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_element() -> (ArrayGeometry, FrequencySpec) {
        (
            ArrayGeometry::new(1, 1, 0.05, 0.364).unwrap(),
            FrequencySpec::new(3e9).unwrap(),
        )
    }

    fn spec(z: f64, lambda: f64) -> PlaneSpec {
        PlaneSpec {
            z_m: z,
            extent_m: 0.5,
            pitch_m: 0.45 * lambda,
        }
    }

    #[test]
    fn single_element_is_spherical_wave() {
        let (g, f) = single_element();
        let k = f.wavenumber();
        let a = [Complex64::new(1.0, 0.0)];
        for d in [0.2, 0.4, 0.8] {
            let p = near_field_from_aperture(&g, &f, &a, &spec(d, f.wavelength())).unwrap();
            let c = p.half_count();
            let e = p.at(c, c);
            let expect = k * g.cell_area() / TAU / d;
            assert!((e.norm() - expect).abs() < 1e-12 * expect);
            let dphi = (e.arg() + k * d).rem_euclid(TAU);
            assert!(dphi < 1e-9 || TAU - dphi < 1e-9);
        }
    }

    #[test]
    fn doubling_distance_halves_magnitude() {
        let (g, f) = single_element();
        let a = [Complex64::new(0.3, -0.2)];
        let near = near_field_from_aperture(&g, &f, &a, &spec(0.25, f.wavelength())).unwrap();
        let far = near_field_from_aperture(&g, &f, &a, &spec(0.5, f.wavelength())).unwrap();
        let c = near.half_count();
        assert!((near.at(c, c).norm() / far.at(c, c).norm() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_planes() {
        let (g, f) = single_element();
        let a = [Complex64::new(1.0, 0.0)];
        let lambda = f.wavelength();
        let mut s = spec(0.2, lambda);
        s.z_m = -0.1;
        assert!(matches!(
            near_field_from_aperture(&g, &f, &a, &s),
            Err(Error::NearField(_))
        ));
        let mut s = spec(0.2, lambda);
        s.pitch_m = 0.51 * lambda;
        assert!(matches!(
            near_field_from_aperture(&g, &f, &a, &s),
            Err(Error::NearField(_))
        ));
    }

    #[test]
    fn winding_of_synthetic_vortex() {
        let f = FrequencySpec::new(3e9).unwrap();
        let pitch = 0.045;
        let n = 10;
        let side = 2 * n + 1;
        for l in [-2i32, 0, 1, 3] {
            let samples = (0..side * side)
                .map(|idx| {
                    let (x, y) = (
                        (idx % side) as f64 * pitch - n as f64 * pitch,
                        (idx / side) as f64 * pitch - n as f64 * pitch,
                    );
                    Complex64::from_polar(1.0 + x * x + y * y, l as f64 * y.atan2(x))
                })
                .collect();
            let plane = NearFieldPlane::new(0.2, pitch, n, f.carrier_hz(), samples).unwrap();
            let w = phase_winding(&plane, (0.0, 0.0), 0.3, 360).unwrap();
            assert!((w - l as f64).abs() < 1e-9, "l={l} w={w}");
        }
    }

    #[test]
    fn csv_is_y_major() {
        let f = FrequencySpec::new(3e9).unwrap();
        let samples = (0..9).map(|i| Complex64::new(i as f64, 0.0)).collect();
        let plane = NearFieldPlane::new(0.2, 0.04, 1, f.carrier_hz(), samples).unwrap();
        let csv = plane.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x_m,y_m,re,im");
        assert!(lines[2].starts_with("0.000000,-0.040000,1.0"));
        assert!(lines[4].starts_with("-0.040000,0.000000,3.0"));
    }
}
