use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{ArrayGeometry, FrequencySpec};

/// Horn feed modeled as a `cos^q(α)` field pattern about its boresight, which
/// points from the feed toward the array center.
///
/// The exponent follows from the gain through `D = 2(2q + 1)`, so a 10 dBi
/// horn has `q = 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeedModel {
    gain_dbi: f64,
    exponent: f64,
    position: [f64; 3],
}

impl FeedModel {
    pub fn new(gain_dbi: f64, position: [f64; 3]) -> Result<Self> {
        let lin = 10f64.powf(gain_dbi / 10.0);
        let exponent = (lin / 2.0 - 1.0) / 2.0;
        if !(exponent.is_finite() && exponent > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "feed gain {gain_dbi} dBi is too low for a cos^q pattern (needs > 3.01 dBi)"
            )));
        }
        if position.iter().any(|c| !c.is_finite()) || position[2] <= 0.0 {
            return Err(Error::InvalidParameter("feed must sit at z > 0".into()));
        }
        Ok(Self {
            gain_dbi,
            exponent,
            position,
        })
    }

    /// Feed at the geometry's feed position.
    pub fn for_geometry(geometry: &ArrayGeometry, gain_dbi: f64) -> Result<Self> {
        Self::new(gain_dbi, geometry.feed_position())
    }

    pub fn gain_dbi(&self) -> f64 {
        self.gain_dbi
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn position(&self) -> [f64; 3] {
        self.position
    }

    /// Field pattern at off-boresight angle `alpha`; zero behind the feed.
    pub fn pattern(&self, alpha: f64) -> f64 {
        let c = alpha.cos();
        if c <= 0.0 {
            0.0
        } else {
            c.powf(self.exponent)
        }
    }

    /// Total radiated power for unit peak amplitude, `2π / (2q + 1)`.
    pub fn total_power(&self) -> f64 {
        std::f64::consts::TAU / (2.0 * self.exponent + 1.0)
    }

    fn boresight(&self) -> [f64; 3] {
        let p = self.position;
        let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        [-p[0] / n, -p[1] / n, -p[2] / n]
    }

    /// Off-boresight angle and distance from the feed to `point`.
    pub fn angle_and_distance(&self, point: [f64; 3]) -> (f64, f64) {
        let d = [
            point[0] - self.position[0],
            point[1] - self.position[1],
            point[2] - self.position[2],
        ];
        let r = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        let b = self.boresight();
        let cos_a = ((d[0] * b[0] + d[1] * b[1] + d[2] * b[2]) / r).clamp(-1.0, 1.0);
        (cos_a.acos(), r)
    }
}

/// Complex incident field at every element (row-major):
/// `pattern(α) · exp(-j k0 L) / L`.
pub fn illuminate(geometry: &ArrayGeometry, freq: &FrequencySpec, feed: &FeedModel) -> Vec<Complex64> {
    let k = freq.wavenumber();
    let mut out = Vec::with_capacity(geometry.element_count());
    for i in 0..geometry.rows() {
        for j in 0..geometry.cols() {
            let (alpha, dist) = feed.angle_and_distance(geometry.position_0(i, j));
            out.push(Complex64::from_polar(feed.pattern(alpha) / dist, -k * dist));
        }
    }
    out
}
