use std::fmt::Write as _;

use num_complex::Complex64;

use super::farfield::FarFieldPattern;
use crate::error::{Error, Result};

/// Azimuthal Fourier power fractions over modes `-L..=L` on one θ ring.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpectrum {
    max_mode: i32,
    ring_theta: f64,
    fractions: Vec<f64>,
}

impl ModeSpectrum {
    pub fn max_mode(&self) -> i32 {
        self.max_mode
    }

    pub fn ring_theta(&self) -> f64 {
        self.ring_theta
    }

    /// Fractions ordered from mode `-L` to `+L`.
    pub fn fractions(&self) -> &[f64] {
        &self.fractions
    }

    pub fn fraction(&self, mode: i32) -> f64 {
        if mode.abs() > self.max_mode {
            return 0.0;
        }
        self.fractions[(mode + self.max_mode) as usize]
    }

    /// Mode holding the largest fraction (lowest index wins ties).
    pub fn dominant(&self) -> (i32, f64) {
        let mut best = (-self.max_mode, self.fractions[0]);
        for (i, f) in self.fractions.iter().enumerate().skip(1) {
            if *f > best.1 {
                best = (i as i32 - self.max_mode, *f);
            }
        }
        best
    }

    /// CSV `mode,fraction`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("mode,fraction\n");
        for (i, f) in self.fractions.iter().enumerate() {
            let _ = writeln!(out, "{},{:.9e}", i as i32 - self.max_mode, f);
        }
        out
    }
}

/// Field on the ring θ = `theta`, linearly interpolated between grid rows.
fn ring_samples(pattern: &FarFieldPattern, theta: f64) -> Result<Vec<Complex64>> {
    let thetas = pattern.grid().thetas();
    let (lo, hi) = (thetas[0], thetas[thetas.len() - 1]);
    if !(theta >= lo - 1e-12 && theta <= hi + 1e-12) {
        return Err(Error::InvalidRing(format!(
            "ring theta {:.4} deg outside the sampled range",
            theta.to_degrees()
        )));
    }
    let np = pattern.n_phi();
    let upper = thetas.partition_point(|t| *t < theta).min(thetas.len() - 1);
    if upper == 0 || (thetas[upper] - theta).abs() < 1e-12 {
        return Ok((0..np).map(|j| pattern.at(upper, j)).collect());
    }
    let lower = upper - 1;
    let w = (theta - thetas[lower]) / (thetas[upper] - thetas[lower]);
    Ok((0..np)
        .map(|j| pattern.at(lower, j) * (1.0 - w) + pattern.at(upper, j) * w)
        .collect())
}

/// Decomposes the field on the ring θ = `ring_theta` into azimuthal modes
/// `exp(jℓφ)`, `|ℓ| ≤ max_mode`, and returns normalized power fractions.
pub fn oam_mode_spectrum(pattern: &FarFieldPattern, ring_theta: f64, max_mode: i32) -> Result<ModeSpectrum> {
    if max_mode < 0 {
        return Err(Error::InvalidRing("max mode must be non-negative".into()));
    }
    let grid = pattern.grid();
    let phis = grid.phis();
    let np = phis.len();
    if np < (4 * max_mode + 2) as usize {
        return Err(Error::InvalidRing(format!(
            "{np} azimuthal samples cannot resolve modes up to {max_mode} (need {})",
            4 * max_mode + 2
        )));
    }
    let step = std::f64::consts::TAU / np as f64;
    if phis
        .iter()
        .enumerate()
        .any(|(j, p)| (p - phis[0] - j as f64 * step).abs() > 1e-9)
    {
        return Err(Error::InvalidRing(
            "phi samples must close a uniform full circle".into(),
        ));
    }
    let ring = ring_samples(pattern, ring_theta)?;
    let powers: Vec<f64> = (-max_mode..=max_mode)
        .map(|l| {
            let c: Complex64 = ring
                .iter()
                .zip(phis)
                .map(|(e, p)| e * Complex64::cis(-(l as f64) * p))
                .sum();
            c.norm_sqr()
        })
        .collect();
    let total: f64 = powers.iter().sum();
    if !(total > 0.0) {
        return Err(Error::InvalidRing("field vanishes on the ring".into()));
    }
    Ok(ModeSpectrum {
        max_mode,
        ring_theta,
        fractions: powers.iter().map(|p| p / total).collect(),
    })
}

/// θ of the ring with the largest azimuthally averaged power.
pub fn find_intensity_ring(pattern: &FarFieldPattern) -> f64 {
    let np = pattern.n_phi();
    let mut best = (0usize, f64::NEG_INFINITY);
    for it in 0..pattern.n_theta() {
        let mean = (0..np).map(|j| pattern.at(it, j).norm_sqr()).sum::<f64>() / np as f64;
        if mean > best.1 {
            best = (it, mean);
        }
    }
    pattern.grid().thetas()[best.0]
}
