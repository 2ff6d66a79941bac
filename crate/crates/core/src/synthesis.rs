//! Compensation-phase synthesis for OAM and pencil beams and 1-bit quantization.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{wrap_2pi, ArrayGeometry, CodingMatrix, Direction, FrequencySpec};

/// Largest |ℓ| the 20×20 prototype samples cleanly.
pub const OAM_MODE_LIMIT: i32 = 3;

/// Continuous phase per element, wrapped to `[0, 2π)`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMap {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl PhaseMap {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                values.push(wrap_2pi(f(i, j)));
            }
        }
        Self { rows, cols, values }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Adds a constant to every entry and re-wraps.
    pub fn offset(&self, delta: f64) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + delta)
    }
}

/// What the surface should radiate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BeamSpec {
    /// Focused vortex beam with topological charge ℓ.
    Oam { mode: i32 },
    /// Collimated beam toward a direction.
    Pencil { steer: Direction },
}

impl BeamSpec {
    /// True when |ℓ| exceeds the cleanly sampled range; synthesis still runs.
    pub fn sampling_warning(&self) -> bool {
        matches!(self, BeamSpec::Oam { mode } if mode.abs() > OAM_MODE_LIMIT)
    }
}

/// Azimuthal vortex phase ℓ·atan2(y, x), wrapped. Zero at the origin.
pub fn oam_azimuthal_phase(x: f64, y: f64, mode: i32) -> f64 {
    if x == 0.0 && y == 0.0 {
        return 0.0;
    }
    wrap_2pi(mode as f64 * y.atan2(x))
}

fn focusing_term(geometry: &ArrayGeometry, freq: &FrequencySpec, i: usize, j: usize) -> f64 {
    let p = geometry.position_0(i, j);
    let r2 = p[0] * p[0] + p[1] * p[1];
    let f = geometry.focal_length();
    freq.wavenumber() * ((r2 + f * f).sqrt() - f)
}

fn check_index(geometry: &ArrayGeometry, m: usize, n: usize) -> Result<()> {
    geometry.element_position(m, n).map(|_| ())
}

/// Vortex compensation phase of element (m, n), 1-based: spherical focusing
/// plus the azimuthal term.
pub fn oam_compensation_phase(
    geometry: &ArrayGeometry,
    freq: &FrequencySpec,
    mode: i32,
    m: usize,
    n: usize,
) -> Result<f64> {
    check_index(geometry, m, n)?;
    Ok(oam_phase_0(geometry, freq, mode, m - 1, n - 1))
}

fn oam_phase_0(geometry: &ArrayGeometry, freq: &FrequencySpec, mode: i32, i: usize, j: usize) -> f64 {
    let p = geometry.position_0(i, j);
    wrap_2pi(focusing_term(geometry, freq, i, j) + oam_azimuthal_phase(p[0], p[1], mode))
}

/// Pencil-beam compensation phase of element (m, n), 1-based:
/// `k0 (L_mn - p_mn · r̂0)` wrapped, with no global offset removed.
pub fn pencil_compensation_phase(
    geometry: &ArrayGeometry,
    freq: &FrequencySpec,
    steer: &Direction,
    m: usize,
    n: usize,
) -> Result<f64> {
    check_index(geometry, m, n)?;
    Ok(pencil_phase_0(geometry, freq, steer, m - 1, n - 1))
}

fn pencil_phase_0(geometry: &ArrayGeometry, freq: &FrequencySpec, steer: &Direction, i: usize, j: usize) -> f64 {
    let p = geometry.position_0(i, j);
    let r = steer.unit_vector();
    let dot = p[0] * r[0] + p[1] * r[1] + p[2] * r[2];
    wrap_2pi(freq.wavenumber() * (geometry.feed_distance_0(i, j) - dot))
}

/// Full continuous compensation map for a beam.
pub fn phase_map(geometry: &ArrayGeometry, freq: &FrequencySpec, spec: &BeamSpec) -> PhaseMap {
    PhaseMap::from_fn(geometry.rows(), geometry.cols(), |i, j| match spec {
        BeamSpec::Oam { mode } => oam_phase_0(geometry, freq, *mode, i, j),
        BeamSpec::Pencil { steer } => pencil_phase_0(geometry, freq, steer, i, j),
    })
}

/// Two-level quantization: `[0, π)` → 0, `[π, 2π)` → 1.
pub fn quantize_1bit(phases: &PhaseMap) -> CodingMatrix {
    CodingMatrix::from_fn(phases.rows(), phases.cols(), |i, j| {
        let phi = wrap_2pi(phases.get(i, j));
        phi >= PI
    })
}

/// Compensation map followed by 1-bit quantization.
pub fn synthesize(geometry: &ArrayGeometry, freq: &FrequencySpec, spec: &BeamSpec) -> Result<CodingMatrix> {
    if let BeamSpec::Pencil { steer } = spec {
        if steer.theta() >= PI / 2.0 {
            return Err(Error::InvalidDirection(
                "steer direction must be in front of the array".into(),
            ));
        }
    }
    Ok(quantize_1bit(&phase_map(geometry, freq, spec)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn proto() -> (ArrayGeometry, FrequencySpec) {
        (ArrayGeometry::prototype(), FrequencySpec::new(3.0e9).unwrap())
    }

    #[test]
    fn azimuthal_examples() {
        assert_eq!(oam_azimuthal_phase(1.0, 0.0, 2), 0.0);
        assert!((oam_azimuthal_phase(0.0, 1.0, 1) - FRAC_PI_2).abs() < 1e-15);
        assert!((oam_azimuthal_phase(-1.0, 0.0, 3) - PI).abs() < 1e-12);
        assert_eq!(oam_azimuthal_phase(0.0, 0.0, 3), 0.0);
        // third quadrant needs the two-argument arctangent
        assert!((oam_azimuthal_phase(-1.0, -1.0, 1) - 1.25 * PI).abs() < 1e-12);
    }

    #[test]
    fn center_of_odd_grid() {
        let g = ArrayGeometry::new(21, 21, 0.05, 0.364).unwrap();
        let f = FrequencySpec::new(3.0e9).unwrap();
        for l in -3..=3 {
            assert_eq!(oam_compensation_phase(&g, &f, l, 11, 11).unwrap(), 0.0);
        }
        let steer = Direction::from_degrees(40.0, 75.0).unwrap();
        let got = pencil_compensation_phase(&g, &f, &steer, 11, 11).unwrap();
        assert!((got - wrap_2pi(f.wavenumber() * 0.364)).abs() < 1e-12);
    }

    #[test]
    fn corner_element_matches_direct_evaluation() {
        // independent scalar evaluation of the focusing + vortex expression
        let (g, f) = proto();
        let lambda = 299_792_458.0 / 3.0e9;
        let (x, y, focal) = (-0.475f64, -0.475f64, 0.364f64);
        let raw = 2.0 * PI * (((x * x + y * y) + focal * focal).sqrt() - focal) / lambda + y.atan2(x);
        let expected = raw.rem_euclid(2.0 * PI);
        let got = oam_compensation_phase(&g, &f, 1, 1, 1).unwrap();
        assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
    }

    #[test]
    fn mode_zero_is_focusing_map() {
        let (g, f) = proto();
        for (m, n) in [(1, 1), (3, 17), (20, 9)] {
            let p = g.element_position(m, n).unwrap();
            let full = oam_compensation_phase(&g, &f, 2, m, n).unwrap();
            let focus = oam_compensation_phase(&g, &f, 0, m, n).unwrap();
            let az = oam_azimuthal_phase(p[0], p[1], 2);
            assert!((wrap_2pi(full - az) - focus).abs() < 1e-9);
        }
    }

    #[test]
    fn broadside_pencil_is_focusing_plus_constant() {
        let (g, f) = proto();
        let bs = phase_map(
            &g,
            &f,
            &BeamSpec::Pencil {
                steer: Direction::broadside(),
            },
        );
        let oam0 = phase_map(&g, &f, &BeamSpec::Oam { mode: 0 });
        let k_f = wrap_2pi(f.wavenumber() * g.focal_length());
        for (a, b) in bs.values().iter().zip(oam0.values()) {
            let d = wrap_2pi(a - b - k_f);
            assert!(d < 1e-9 || d > 2.0 * PI - 1e-9);
        }
    }

    #[test]
    fn steered_progressive_phase() {
        // after removing the feed term, adjacent elements along x differ by k0 P sin(30°)
        let (g, f) = proto();
        let steer = Direction::from_degrees(30.0, 0.0).unwrap();
        let k = f.wavenumber();
        let expected = wrap_2pi(-k * g.pitch() * 0.5);
        for m in 1..20 {
            let a = pencil_compensation_phase(&g, &f, &steer, m, 7).unwrap() - k * g.feed_distance(m, 7).unwrap();
            let b =
                pencil_compensation_phase(&g, &f, &steer, m + 1, 7).unwrap() - k * g.feed_distance(m + 1, 7).unwrap();
            let d = wrap_2pi(b - a);
            let err = (d - expected).abs().min(2.0 * PI - (d - expected).abs());
            assert!(err < 1e-9, "m={m} diff {d} expected {expected}");
        }
    }

    #[test]
    fn quantizer_boundaries() {
        let pm = PhaseMap::from_fn(1, 4, |_, j| [0.0, PI, FRAC_PI_2, 1.5 * PI][j]);
        let c = quantize_1bit(&pm);
        assert_eq!(c.bits(), &[0, 1, 0, 1]);
        let just_below = PhaseMap::from_fn(1, 1, |_, _| PI - 1e-12);
        assert_eq!(quantize_1bit(&just_below).bits(), &[0]);
    }

    fn ring_transitions(c: &CodingMatrix, g: &ArrayGeometry, half: usize) -> usize {
        // perimeter of the centered (2*half)x(2*half) block, ordered counterclockwise
        let lo = g.rows() / 2 - half;
        let hi = g.rows() / 2 + half - 1;
        let mut ring: Vec<(usize, usize)> = (lo..=hi)
            .flat_map(|i| (lo..=hi).map(move |j| (i, j)))
            .filter(|&(i, j)| i == lo || i == hi || j == lo || j == hi)
            .collect();
        ring.sort_by(|a, b| {
            let pa = g.position_0(a.0, a.1);
            let pb = g.position_0(b.0, b.1);
            pa[1].atan2(pa[0]).total_cmp(&pb[1].atan2(pb[0]))
        });
        (0..ring.len())
            .filter(|&k| {
                let prev = ring[(k + ring.len() - 1) % ring.len()];
                c.get(ring[k].0, ring[k].1) != c.get(prev.0, prev.1)
            })
            .count()
    }

    #[test]
    fn spiral_arm_count_on_inner_ring() {
        let (g, f) = proto();
        for mode in [1, 2, 3, -2] {
            let c = synthesize(&g, &f, &BeamSpec::Oam { mode }).unwrap();
            assert_eq!(
                ring_transitions(&c, &g, 2),
                2 * mode.unsigned_abs() as usize,
                "mode {mode}"
            );
        }
    }

    #[test]
    fn broadside_coding_has_fresnel_rings() {
        let (g, f) = proto();
        let c = synthesize(
            &g,
            &f,
            &BeamSpec::Pencil {
                steer: Direction::broadside(),
            },
        )
        .unwrap();
        let mut by_radius: std::collections::HashMap<u64, u8> = Default::default();
        for i in 0..20 {
            for j in 0..20 {
                let p = g.position_0(i, j);
                let key = ((p[0] * p[0] + p[1] * p[1]) * 1e8).round() as u64;
                let bit = c.get(i, j);
                assert_eq!(*by_radius.entry(key).or_insert(bit), bit);
            }
        }
    }

    #[test]
    fn synthesis_is_deterministic() {
        let (g, f) = proto();
        let spec = BeamSpec::Pencil {
            steer: Direction::from_degrees(45.0, 0.0).unwrap(),
        };
        assert_eq!(synthesize(&g, &f, &spec).unwrap(), synthesize(&g, &f, &spec).unwrap());
        assert!(BeamSpec::Oam { mode: 4 }.sampling_warning());
        assert!(!BeamSpec::Oam { mode: -3 }.sampling_warning());
    }

    proptest! {
        #[test]
        fn half_turn_offset_complements_bits(seed in proptest::collection::vec(0.0f64..(2.0 * PI), 12)) {
            let pm = PhaseMap::from_fn(3, 4, |i, j| seed[i * 4 + j]);
            let shifted = pm.offset(PI);
            // skip values that land within rounding of the boundary
            let clean = pm.values().iter().all(|v| (v - PI).abs() > 1e-9 && *v > 1e-9 && *v < 2.0 * PI - 1e-9);
            prop_assume!(clean);
            prop_assert_eq!(quantize_1bit(&shifted), quantize_1bit(&pm).complement());
        }

        #[test]
        fn rotating_frame_adds_mode_times_angle(mode in -3i32..=3, angle in 0.0f64..(2.0 * PI),
                                               x in -1.0f64..1.0, y in -1.0f64..1.0) {
            prop_assume!(x.hypot(y) > 1e-3);
            let (s, c) = (-angle).sin_cos();
            let (xr, yr) = (c * x - s * y, s * x + c * y);
            let lhs = oam_azimuthal_phase(x, y, mode);
            let rhs = wrap_2pi(oam_azimuthal_phase(xr, yr, mode) + mode as f64 * angle);
            let d = (lhs - rhs).abs();
            prop_assert!(d < 1e-9 || (2.0 * PI - d) < 1e-9);
        }
    }
}
