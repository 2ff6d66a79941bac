use std::f64::consts::{FRAC_PI_2, PI};

use super::wrap_2pi;
use crate::error::{Error, Result};

/// Propagation direction in the forward half-space.
///
/// θ is measured from +z, φ from +x in the xOy plane; the unit vector is
/// `(sinθ cosφ, sinθ sinφ, cosθ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    theta: f64,
    phi: f64,
}

impl Direction {
    /// θ must lie in `[0, π/2)`; φ is wrapped into `[0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(theta.is_finite() && phi.is_finite()) {
            return Err(Error::InvalidDirection("non-finite angle".into()));
        }
        if !(0.0..FRAC_PI_2).contains(&theta) {
            return Err(Error::InvalidDirection(format!(
                "theta {:.4} deg outside [0, 90)",
                theta.to_degrees()
            )));
        }
        Ok(Self {
            theta,
            phi: wrap_2pi(phi),
        })
    }

    pub fn from_degrees(theta_deg: f64, phi_deg: f64) -> Result<Self> {
        Self::new(theta_deg.to_radians(), phi_deg.to_radians())
    }

    /// Direction at a signed angle inside the plane `φ = cut_phi`.
    /// Negative angles land on the opposite half-plane `φ = cut_phi + π`.
    pub fn in_plane(signed_theta: f64, cut_phi: f64) -> Result<Self> {
        if signed_theta < 0.0 {
            Self::new(-signed_theta, cut_phi + PI)
        } else {
            Self::new(signed_theta, cut_phi)
        }
    }

    pub fn broadside() -> Self {
        Self { theta: 0.0, phi: 0.0 }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Signed in-plane angle relative to the cut `φ = cut_phi`.
    pub fn signed_in_plane(&self, cut_phi: f64) -> f64 {
        if (self.phi - cut_phi).cos() < 0.0 {
            -self.theta
        } else {
            self.theta
        }
    }

    /// Great-circle angle between two directions.
    pub fn angle_to(&self, other: &Direction) -> f64 {
        angle_between(self.unit_vector(), other.unit_vector())
    }
}

pub(crate) fn angle_between(a: [f64; 3], b: [f64; 3]) -> f64 {
    let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let cross = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    let cn = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
    cn.atan2(dot)
}
