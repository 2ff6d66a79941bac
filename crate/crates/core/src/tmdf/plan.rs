use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{ArrayGeometry, FrequencySpec};

/// 10 µs, i.e. a 100 kHz modulation frequency.
pub const DEFAULT_PERIOD_S: f64 = 10e-6;

/// Direction along which the sub-array strips alternate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Strips alternate along x (row index m); senses `sinθ cosφ`.
    X,
    /// Strips alternate along y (column index n); senses `sinθ sinφ`.
    Y,
}

/// Periodic ±1 switching schedule for a set of interleaved sub-arrays.
///
/// The period is split into `slots` equal slots. Sub-array `n` is in the +1
/// state during its assigned slot `((s−1)/S·T_p, s/S·T_p]` and −1 otherwise.
/// Elements are assigned to sub-arrays in strips `strip_width` elements wide,
/// cycling through the sub-arrays along the plan axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulationPlan {
    period_s: f64,
    slots: usize,
    axis: Axis,
    subarray_slots: Vec<usize>,
    strip_width: usize,
    delay_s: f64,
}

impl ModulationPlan {
    pub fn new(
        period_s: f64,
        slots: usize,
        axis: Axis,
        subarray_slots: Vec<usize>,
        strip_width: usize,
    ) -> Result<Self> {
        if !(period_s.is_finite() && period_s > 0.0) {
            return Err(Error::InvalidPlan(format!("period {period_s} s must be positive")));
        }
        if slots == 0 || subarray_slots.is_empty() || strip_width == 0 {
            return Err(Error::InvalidPlan(
                "slots, sub-arrays and strip width must be non-zero".into(),
            ));
        }
        if let Some(s) = subarray_slots.iter().find(|s| **s == 0 || **s > slots) {
            return Err(Error::InvalidPlan(format!("slot {s} outside 1..={slots}")));
        }
        Ok(Self {
            period_s,
            slots,
            axis,
            subarray_slots,
            strip_width,
            delay_s: 0.0,
        })
    }

    /// `m_sub` sub-arrays, sub-array `n` active in slot `n` of `m_sub`.
    pub fn staggered(period_s: f64, m_sub: usize, axis: Axis) -> Result<Self> {
        Self::new(period_s, m_sub, axis, (1..=m_sub).collect(), 1)
    }

    /// Two interleaved single-element strips active in slots 1 and 3 of 4.
    /// The fundamental is non-zero for every incidence and the
    /// first-harmonic ratio is `-2(1+j)/π · tan(πD/λ · sinθ cosφ)`.
    pub fn two_subarray(axis: Axis) -> Self {
        Self::new(DEFAULT_PERIOD_S, 4, axis, vec![1, 3], 1).expect("default plan is valid")
    }

    /// Same plan delayed by `delay_s`.
    pub fn delayed(&self, delay_s: f64) -> Self {
        Self {
            delay_s,
            ..self.clone()
        }
    }

    pub fn with_period(&self, period_s: f64) -> Result<Self> {
        let mut p = Self::new(
            period_s,
            self.slots,
            self.axis,
            self.subarray_slots.clone(),
            self.strip_width,
        )?;
        p.delay_s = self.delay_s;
        Ok(p)
    }

    pub fn with_strip_width(&self, strip_width: usize) -> Result<Self> {
        Self::new(
            self.period_s,
            self.slots,
            self.axis,
            self.subarray_slots.clone(),
            strip_width,
        )
    }

    pub fn period(&self) -> f64 {
        self.period_s
    }

    pub fn modulation_frequency(&self) -> f64 {
        1.0 / self.period_s
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn subarray_count(&self) -> usize {
        self.subarray_slots.len()
    }

    pub fn subarray_slots(&self) -> &[usize] {
        &self.subarray_slots
    }

    pub fn strip_width(&self) -> usize {
        self.strip_width
    }

    pub fn delay(&self) -> f64 {
        self.delay_s
    }

    fn check_subarray(&self, n: usize) -> Result<usize> {
        self.subarray_slots
            .get(n)
            .copied()
            .ok_or_else(|| Error::InvalidPlan(format!("sub-array {n} outside 0..{}", self.subarray_count())))
    }

    /// Sequence value `g_n(t)` (0-based sub-array index).
    pub fn sequence_value(&self, n: usize, t: f64) -> Result<f64> {
        let slot = self.check_subarray(n)?;
        let tau = ((t - self.delay_s) / self.period_s).rem_euclid(1.0);
        // slot s covers (s-1)/S < tau <= s/S; tau = 0 belongs to the last slot
        let position = if tau == 0.0 {
            self.slots
        } else {
            (tau * self.slots as f64).ceil() as usize
        };
        Ok(if position == slot { 1.0 } else { -1.0 })
    }

    /// Closed-form Fourier coefficient `(1/T_p)∫ g_n(t) exp(-j2πh t/T_p) dt`
    /// of sub-array `n` (0-based).
    pub fn fourier_coefficient(&self, n: usize, h: i32) -> Result<Complex64> {
        let slot = self.check_subarray(n)?;
        let s = self.slots as f64;
        let shift = Complex64::cis(-TAU * h as f64 * self.delay_s / self.period_s);
        if h == 0 {
            return Ok(Complex64::new(2.0 / s - 1.0, 0.0));
        }
        let (t1, t2) = ((slot - 1) as f64 / s, slot as f64 / s);
        let w = -TAU * h as f64;
        // -1 over the whole period integrates to zero for h != 0, leaving 2·∫ over the slot
        let segment = (Complex64::cis(w * t2) - Complex64::cis(w * t1)) / Complex64::new(0.0, w);
        Ok(segment * 2.0 * shift)
    }

    /// Sub-array (0-based) of element `(i, j)`, 0-based indices.
    pub fn subarray_of(&self, i: usize, j: usize) -> usize {
        let along = match self.axis {
            Axis::X => i,
            Axis::Y => j,
        };
        (along / self.strip_width) % self.subarray_count()
    }

    /// Mean coordinate along the plan axis of each sub-array's elements.
    pub fn phase_centers(&self, geometry: &ArrayGeometry) -> Result<Vec<f64>> {
        let mut sum = vec![0.0; self.subarray_count()];
        let mut count = vec![0usize; self.subarray_count()];
        for i in 0..geometry.rows() {
            for j in 0..geometry.cols() {
                let n = self.subarray_of(i, j);
                sum[n] += match self.axis {
                    Axis::X => geometry.x_0(i),
                    Axis::Y => geometry.y_0(j),
                };
                count[n] += 1;
            }
        }
        if count.contains(&0) {
            return Err(Error::InvalidPlan(
                "a sub-array has no elements on this geometry".into(),
            ));
        }
        Ok(sum.iter().zip(&count).map(|(s, c)| s / *c as f64).collect())
    }

    /// Signed phase-center spacing `D`: first sub-array minus second.
    pub fn spacing(&self, geometry: &ArrayGeometry) -> Result<f64> {
        self.require_pair()?;
        let c = self.phase_centers(geometry)?;
        Ok(c[0] - c[1])
    }

    /// Largest `|sinθ cosφ|` (or `|sinθ sinφ|`) that maps to `|u| < π/2`.
    pub fn unambiguous_limit(&self, geometry: &ArrayGeometry, freq: &FrequencySpec) -> Result<f64> {
        let d = self.spacing(geometry)?.abs();
        Ok((freq.wavelength() / (2.0 * d)).min(1.0))
    }

    fn require_pair(&self) -> Result<()> {
        if self.subarray_count() != 2 {
            return Err(Error::InvalidPlan(format!(
                "direction finding needs exactly 2 sub-arrays, plan has {}",
                self.subarray_count()
            )));
        }
        Ok(())
    }

    /// Constant `c` with `R = c · tan(u)` for a pair of sub-arrays whose
    /// fundamentals are equal and first harmonics opposite.
    pub fn ratio_constant(&self) -> Result<Complex64> {
        self.require_pair()?;
        let (a0, a1) = (self.fourier_coefficient(0, 0)?, self.fourier_coefficient(1, 0)?);
        let (b0, b1) = (self.fourier_coefficient(0, 1)?, self.fourier_coefficient(1, 1)?);
        let scale = a0.norm() + b0.norm();
        if a0.norm() <= 1e-12 * scale {
            return Err(Error::VanishingFundamental);
        }
        if (a0 - a1).norm() > 1e-12 * scale || (b0 + b1).norm() > 1e-12 * scale {
            return Err(Error::InvalidPlan(
                "sub-array fundamentals must match and first harmonics must be opposite".into(),
            ));
        }
        Ok(Complex64::i() * b0 / a0)
    }
}
