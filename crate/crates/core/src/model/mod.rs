//! Shared physical data model: array geometry, meta-atom states, coding
//! matrices, directions and carrier frequency.

mod coding;
pub(crate) mod direction;
mod frequency;
mod geometry;
mod response;

pub use coding::CodingMatrix;
pub use direction::Direction;
pub use frequency::{FrequencySpec, SPEED_OF_LIGHT};
pub use geometry::ArrayGeometry;
pub use response::{mag_to_db, phase_difference_deg, MetaAtomResponse, ResponseSample, RESPONSE_CSV_HEADER};

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_2pi(angle: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let w = angle.rem_euclid(tau);
    // rem_euclid can round up to exactly tau for tiny negative inputs
    if w >= tau {
        0.0
    } else {
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn wrap_stays_half_open() {
        assert_eq!(wrap_2pi(0.0), 0.0);
        assert_eq!(wrap_2pi(TAU), 0.0);
        assert!((wrap_2pi(3.0 * PI) - PI).abs() < 1e-12);
        assert!(wrap_2pi(-1e-18) < TAU);
        assert!((wrap_2pi(-PI / 2.0) - 1.5 * PI).abs() < 1e-12);
    }
}
