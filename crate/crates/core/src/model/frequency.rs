use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Carrier frequency with its derived free-space wavelength and wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencySpec {
    carrier_hz: f64,
}

impl FrequencySpec {
    pub fn new(carrier_hz: f64) -> Result<Self> {
        if !(carrier_hz.is_finite() && carrier_hz > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "carrier frequency must be positive and finite, got {carrier_hz}"
            )));
        }
        Ok(Self { carrier_hz })
    }

    pub fn carrier_hz(&self) -> f64 {
        self.carrier_hz
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz
    }

    /// Free-space wavenumber k0 = 2π/λ in rad/m.
    pub fn wavenumber(&self) -> f64 {
        TAU / self.wavelength()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavelength_and_wavenumber_are_consistent() {
        for f in [2.6e9, 3.0e9, 3.4e9, 1.0, 7.3e14] {
            let spec = FrequencySpec::new(f).unwrap();
            let lam = spec.wavelength();
            assert!((lam * f - SPEED_OF_LIGHT).abs() <= 4.0 * f64::EPSILON * SPEED_OF_LIGHT);
            assert!((spec.wavenumber() * lam - TAU).abs() <= 4.0 * f64::EPSILON * TAU);
        }
    }

    #[test]
    fn rejects_non_positive() {
        assert!(FrequencySpec::new(0.0).is_err());
        assert!(FrequencySpec::new(-3.0e9).is_err());
        assert!(FrequencySpec::new(f64::NAN).is_err());
    }
}
