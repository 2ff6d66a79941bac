use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::plan::ModulationPlan;
use super::signal::ReceivedSignal;
use crate::error::{Error, Result};

/// Complex amplitudes of harmonic orders `-H..=H` around the carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSet {
    max_order: usize,
    bins: Vec<Complex64>,
}

impl HarmonicSet {
    pub fn new(bins: Vec<Complex64>) -> Result<Self> {
        if bins.len().is_multiple_of(2) {
            return Err(Error::Signal("harmonic set needs an odd bin count".into()));
        }
        Ok(Self {
            max_order: bins.len() / 2,
            bins,
        })
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// Amplitude of order `h`; zero outside the extracted range.
    pub fn get(&self, h: i32) -> Complex64 {
        if h.unsigned_abs() as usize > self.max_order {
            return Complex64::default();
        }
        self.bins[(h + self.max_order as i32) as usize]
    }

    /// Bins ordered from `-H` to `+H`.
    pub fn bins(&self) -> &[Complex64] {
        &self.bins
    }
}

/// Fourier coefficients of the received envelope at `h·F_p`, `|h| ≤ H`.
///
/// The DFT runs over whole periods, so the bins are leakage-free; the
/// sample-and-hold response is divided out, which makes the result equal to
/// the continuous-time coefficient of the piecewise-constant envelope.
pub fn extract_harmonics(signal: &ReceivedSignal, plan: &ModulationPlan, max_order: usize) -> Result<HarmonicSet> {
    let ns = signal.samples_per_period;
    if ns == 0 || signal.samples.is_empty() || !signal.samples.len().is_multiple_of(ns) {
        return Err(Error::Signal(format!(
            "{} samples are not a whole number of {ns}-sample periods",
            signal.samples.len()
        )));
    }
    if (signal.period_s - plan.period()).abs() > 1e-12 * plan.period() {
        return Err(Error::Signal("signal period does not match the plan".into()));
    }
    if 2 * max_order >= ns {
        return Err(Error::Signal(format!(
            "order {max_order} exceeds the Nyquist limit of {ns} samples"
        )));
    }
    let total = signal.samples.len() as f64;
    let bins = (-(max_order as i32)..=max_order as i32)
        .map(|h| {
            let w = -TAU * h as f64 / ns as f64;
            let dft: Complex64 = signal
                .samples
                .iter()
                .enumerate()
                .map(|(i, s)| s * Complex64::cis(w * (i % ns) as f64))
                .sum::<Complex64>()
                / total;
            let x = PI * h as f64 / ns as f64;
            let hold = if h == 0 { 1.0 } else { x.sin() / x };
            dft * Complex64::cis(-x) * hold
        })
        .collect();
    HarmonicSet::new(bins)
}

/// First-harmonic to fundamental ratio `a_{+1} / a_0`.
pub fn harmonic_ratio(harmonics: &HarmonicSet) -> Result<Complex64> {
    let a0 = harmonics.get(0);
    let scale: f64 = harmonics.bins().iter().map(|b| b.norm()).sum();
    if a0.norm() == 0.0 || a0.norm() <= 1e-12 * scale {
        return Err(Error::VanishingFundamental);
    }
    Ok(harmonics.get(1) / a0)
}

/// RMS coefficient magnitude over the sub-arrays for orders `0..=H`,
/// normalized to the largest order.
pub fn harmonic_envelope(plan: &ModulationPlan, max_order: usize) -> Result<Vec<f64>> {
    if max_order == 0 {
        return Err(Error::InvalidParameter("harmonic envelope needs H >= 1".into()));
    }
    let m = plan.subarray_count() as f64;
    let raw = (0..=max_order as i32)
        .map(|h| {
            (0..plan.subarray_count())
                .map(|n| plan.fourier_coefficient(n, h).map(|a| a.norm_sqr()))
                .sum::<Result<f64>>()
                .map(|p| (p / m).sqrt())
        })
        .collect::<Result<Vec<f64>>>()?;
    let peak = raw.iter().cloned().fold(0.0, f64::max);
    Ok(raw.iter().map(|v| v / peak).collect())
}
