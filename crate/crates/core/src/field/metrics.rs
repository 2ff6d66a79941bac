use std::collections::VecDeque;
use std::f64::consts::PI;

use super::farfield::FarFieldPattern;
use crate::error::{Error, Result};

/// Grid sample holding the pattern maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub theta: f64,
    pub phi: f64,
    pub theta_index: usize,
    pub phi_index: usize,
    pub power: f64,
}

impl Peak {
    pub fn find(pattern: &FarFieldPattern) -> Peak {
        let np = pattern.n_phi();
        let (idx, power) =
            pattern
                .field()
                .iter()
                .map(|e| e.norm_sqr())
                .enumerate()
                .fold(
                    (0, f64::NEG_INFINITY),
                    |best, (i, p)| if p > best.1 { (i, p) } else { best },
                );
        let (it, jp) = (idx / np, idx % np);
        Peak {
            theta: pattern.grid().thetas()[it],
            phi: pattern.grid().phis()[jp],
            theta_index: it,
            phi_index: jp,
            power,
        }
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Angle between this peak and another direction given as (θ, φ).
    pub fn angle_to(&self, theta: f64, phi: f64) -> f64 {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        crate::model::direction::angle_between(self.unit_vector(), [st * cp, st * sp, ct])
    }
}

/// Peak directivity and, when the pattern carries the feed power, realized gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainReport {
    pub peak: Peak,
    pub directivity_dbi: f64,
    /// `4π |E_peak|² / P_feed`; includes spillover, reflection loss, taper and
    /// quantization loss.
    pub gain_dbi: Option<f64>,
}

/// Power radiated into the forward hemisphere, `∫∫ |E|² sinθ dθ dφ`
/// (trapezoid in θ, periodic rectangle rule in φ).
pub fn radiated_power(pattern: &FarFieldPattern) -> Result<f64> {
    let grid = pattern.grid();
    if !grid.is_full_hemisphere() {
        return Err(Error::InvalidGrid(
            "radiated power needs theta over [0, 90] deg and a full phi circle".into(),
        ));
    }
    let thetas = grid.thetas();
    let dt = thetas[1] - thetas[0];
    let dp = 2.0 * PI / pattern.n_phi() as f64;
    let last = thetas.len() - 1;
    let mut total = 0.0;
    for (it, t) in thetas.iter().enumerate() {
        let w = if it == 0 || it == last { 0.5 } else { 1.0 };
        let ring: f64 = (0..pattern.n_phi()).map(|jp| pattern.at(it, jp).norm_sqr()).sum();
        total += w * t.sin() * ring;
    }
    Ok(total * dt * dp)
}

/// Number of θ samples inside the half-power beam through the peak.
fn half_power_samples(pattern: &FarFieldPattern, peak: &Peak) -> usize {
    let np = pattern.n_phi();
    let half = peak.power / 2.0;
    let p = |it: usize, jp: usize| pattern.at(it, jp).norm_sqr();
    let mut count = 1;
    let mut it = peak.theta_index;
    while it + 1 < pattern.n_theta() && p(it + 1, peak.phi_index) >= half {
        it += 1;
        count += 1;
    }
    // walk toward θ = 0, continuing through the pole onto the opposite half-plane
    let mut it = peak.theta_index;
    let mut jp = peak.phi_index;
    let pole = pattern.grid().thetas()[0] == 0.0;
    loop {
        if it == 0 {
            if !pole || jp != peak.phi_index {
                break;
            }
            jp = (jp + np / 2) % np;
            while it + 1 < pattern.n_theta() && p(it + 1, jp) >= half {
                it += 1;
                count += 1;
            }
            break;
        }
        if p(it - 1, jp) >= half {
            it -= 1;
            count += 1;
        } else {
            break;
        }
    }
    count
}

/// Peak directivity `4π |E_peak|² / ∫∫|E|² dΩ` in dBi.
pub fn directivity_gain(pattern: &FarFieldPattern) -> Result<GainReport> {
    let peak = Peak::find(pattern);
    if !(peak.power > 0.0) {
        return Err(Error::InvalidGrid("pattern is identically zero".into()));
    }
    let total = radiated_power(pattern)?;
    let samples = half_power_samples(pattern, &peak);
    if samples < 2 {
        return Err(Error::GridTooCoarse(format!(
            "only {samples} theta sample(s) inside the half-power beam"
        )));
    }
    let directivity_dbi = 10.0 * (4.0 * PI * peak.power / total).log10();
    let gain_dbi = pattern
        .feed_power()
        .map(|pf| 10.0 * (4.0 * PI * peak.power / pf).log10());
    Ok(GainReport {
        peak,
        directivity_dbi,
        gain_dbi,
    })
}

/// Cells reachable from the peak along non-increasing power: the main lobe
/// down to its first null.
pub fn main_lobe_mask(pattern: &FarFieldPattern, peak: &Peak) -> Vec<bool> {
    let nt = pattern.n_theta();
    let np = pattern.n_phi();
    let wrap_phi = pattern.grid().is_full_hemisphere();
    let pole = pattern.grid().thetas()[0] == 0.0;
    let power = pattern.power();
    let mut seen = vec![false; nt * np];
    let mut queue = VecDeque::new();
    let start = peak.theta_index * np + peak.phi_index;
    seen[start] = true;
    queue.push_back(start);
    let mut neighbors = Vec::with_capacity(8);
    while let Some(cell) = queue.pop_front() {
        let (it, jp) = (cell / np, cell % np);
        neighbors.clear();
        if it + 1 < nt {
            neighbors.push(cell + np);
        }
        if it > 0 {
            neighbors.push(cell - np);
        }
        if jp + 1 < np {
            neighbors.push(cell + 1);
        } else if wrap_phi {
            neighbors.push(it * np);
        }
        if jp > 0 {
            neighbors.push(cell - 1);
        } else if wrap_phi {
            neighbors.push(it * np + np - 1);
        }
        if it == 0 && pole {
            neighbors.extend(0..np);
        }
        for &nb in &neighbors {
            if !seen[nb] && power[nb] <= power[cell] {
                seen[nb] = true;
                queue.push_back(nb);
            }
        }
    }
    seen
}

/// Highest lobe outside the main-lobe region, in dB relative to the peak.
/// Returns `-inf` when no secondary lobe exists.
pub fn sidelobe_level(pattern: &FarFieldPattern, peak: &Peak) -> f64 {
    let mask = main_lobe_mask(pattern, peak);
    let outside = pattern
        .field()
        .iter()
        .zip(&mask)
        .filter(|(_, m)| !**m)
        .map(|(e, _)| e.norm_sqr())
        .fold(0.0, f64::max);
    if outside > 0.0 {
        10.0 * (outside / peak.power).log10()
    } else {
        f64::NEG_INFINITY
    }
}

/// Normalized correlation of field magnitudes over a mask:
/// `Σ|a||b| / sqrt(Σ|a|² Σ|b|²)`.
pub fn main_lobe_correlation(a: &FarFieldPattern, b: &FarFieldPattern, mask: &[bool]) -> Result<f64> {
    if a.field().len() != b.field().len() || mask.len() != a.field().len() {
        return Err(Error::InvalidGrid("patterns and mask must share a grid".into()));
    }
    let (mut ab, mut aa, mut bb) = (0.0, 0.0, 0.0);
    for ((x, y), m) in a.field().iter().zip(b.field()).zip(mask) {
        if *m {
            let (x, y) = (x.norm(), y.norm());
            ab += x * y;
            aa += x * x;
            bb += y * y;
        }
    }
    if aa == 0.0 || bb == 0.0 {
        return Ok(0.0);
    }
    Ok(ab / (aa * bb).sqrt())
}
