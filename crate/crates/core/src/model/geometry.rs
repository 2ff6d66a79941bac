use crate::error::{Error, Result};

/// Rectangular M×N reflectarray in the z = 0 plane, centered on the origin,
/// illuminated by a feed on the +z side.
///
/// Row index `m` runs along x and column index `n` along y. Public methods
/// take 1-based indices; the `*_0` variants take 0-based storage indices.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayGeometry {
    rows: usize,
    cols: usize,
    pitch_m: f64,
    focal_length_m: f64,
    feed_position: [f64; 3],
}

impl ArrayGeometry {
    /// Builds a geometry with the feed on the array axis at `[0, 0, F]`.
    pub fn new(rows: usize, cols: usize, pitch_m: f64, focal_length_m: f64) -> Result<Self> {
        Self::with_feed(rows, cols, pitch_m, focal_length_m, [0.0, 0.0, focal_length_m])
    }

    pub fn with_feed(
        rows: usize,
        cols: usize,
        pitch_m: f64,
        focal_length_m: f64,
        feed_position: [f64; 3],
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidGeometry(format!(
                "grid must have at least one element, got {rows}x{cols}"
            )));
        }
        if !(pitch_m.is_finite() && pitch_m > 0.0) {
            return Err(Error::InvalidGeometry(format!("pitch must be positive, got {pitch_m}")));
        }
        if !(focal_length_m.is_finite() && focal_length_m > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "focal length must be positive, got {focal_length_m}"
            )));
        }
        if feed_position.iter().any(|c| !c.is_finite()) || feed_position[2] <= 0.0 {
            return Err(Error::InvalidGeometry(
                "feed must sit in front of the array (z > 0)".into(),
            ));
        }
        Ok(Self {
            rows,
            cols,
            pitch_m,
            focal_length_m,
            feed_position,
        })
    }

    /// The fabricated prototype: 20×20 meta-atoms at 50 mm pitch, F = 364 mm.
    pub fn prototype() -> Self {
        Self::new(20, 20, 0.05, 0.364).expect("prototype geometry is valid")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn pitch(&self) -> f64 {
        self.pitch_m
    }

    pub fn focal_length(&self) -> f64 {
        self.focal_length_m
    }

    pub fn feed_position(&self) -> [f64; 3] {
        self.feed_position
    }

    pub fn element_count(&self) -> usize {
        self.rows * self.cols
    }

    /// Area attributed to one meta-atom.
    pub fn cell_area(&self) -> f64 {
        self.pitch_m * self.pitch_m
    }

    fn check(&self, m: usize, n: usize) -> Result<()> {
        if m == 0 || n == 0 || m > self.rows || n > self.cols {
            return Err(Error::IndexOutOfRange {
                m,
                n,
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }

    /// Center of element (m, n), 1-based.
    pub fn element_position(&self, m: usize, n: usize) -> Result<[f64; 3]> {
        self.check(m, n)?;
        Ok(self.position_0(m - 1, n - 1))
    }

    /// Distance from element (m, n) to the feed phase center, 1-based.
    ///
    /// With the feed on axis this is `sqrt((m-(M+1)/2)²P² + (n-(N+1)/2)²P² + F²)`.
    pub fn feed_distance(&self, m: usize, n: usize) -> Result<f64> {
        self.check(m, n)?;
        Ok(self.feed_distance_0(m - 1, n - 1))
    }

    pub fn x_0(&self, i: usize) -> f64 {
        (i as f64 - (self.rows as f64 - 1.0) / 2.0) * self.pitch_m
    }

    pub fn y_0(&self, j: usize) -> f64 {
        (j as f64 - (self.cols as f64 - 1.0) / 2.0) * self.pitch_m
    }

    pub fn position_0(&self, i: usize, j: usize) -> [f64; 3] {
        [self.x_0(i), self.y_0(j), 0.0]
    }

    pub fn feed_distance_0(&self, i: usize, j: usize) -> f64 {
        let p = self.position_0(i, j);
        let f = self.feed_position;
        ((p[0] - f[0]).powi(2) + (p[1] - f[1]).powi(2) + (p[2] - f[2]).powi(2)).sqrt()
    }

    /// Row-major storage offset of a 0-based element.
    pub fn offset(&self, i: usize, j: usize) -> usize {
        i * self.cols + j
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn center_of_odd_grid_is_origin() {
        let g = ArrayGeometry::new(21, 21, 0.05, 0.364).unwrap();
        assert_eq!(g.element_position(11, 11).unwrap(), [0.0, 0.0, 0.0]);
        assert_eq!(g.feed_distance(11, 11).unwrap(), 0.364);
    }

    #[test]
    fn even_grid_positions() {
        let g = ArrayGeometry::new(20, 20, 0.05, 0.364).unwrap();
        let p = g.element_position(10, 10).unwrap();
        assert!((p[0] + 0.025).abs() < 1e-15 && (p[1] + 0.025).abs() < 1e-15);
        let p = g.element_position(1, 20).unwrap();
        assert!((p[0] + 0.475).abs() < 1e-15 && (p[1] - 0.475).abs() < 1e-15);
        assert_eq!(p[2], 0.0);
    }

    #[test]
    fn feed_distance_matches_hand_arithmetic() {
        let g = ArrayGeometry::prototype();
        let expected = (0.025f64.powi(2) + 0.025f64.powi(2) + 0.364f64.powi(2)).sqrt();
        let got = g.feed_distance(10, 10).unwrap();
        assert!((got - expected).abs() < 1e-15);
        assert!((got - 0.36571).abs() < 5e-6);
    }

    #[test]
    fn index_errors() {
        let g = ArrayGeometry::prototype();
        assert!(matches!(g.element_position(0, 1), Err(Error::IndexOutOfRange { .. })));
        assert!(g.element_position(21, 1).is_err());
        assert!(g.feed_distance(1, 21).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ArrayGeometry::new(0, 4, 0.05, 0.3).is_err());
        assert!(ArrayGeometry::new(4, 4, 0.0, 0.3).is_err());
        assert!(ArrayGeometry::new(4, 4, 0.05, -1.0).is_err());
        assert!(ArrayGeometry::with_feed(4, 4, 0.05, 0.3, [0.0, 0.0, -0.3]).is_err());
    }

    proptest! {
        #[test]
        fn index_reflection_symmetry(rows in 1usize..30, cols in 1usize..30,
                                     a in 0.0f64..1.0, b in 0.0f64..1.0,
                                     pitch in 0.01f64..0.2, focal in 0.05f64..1.0) {
            let g = ArrayGeometry::new(rows, cols, pitch, focal).unwrap();
            let m = 1 + ((rows - 1) as f64 * a).round() as usize;
            let n = 1 + ((cols - 1) as f64 * b).round() as usize;
            let p = g.element_position(m, n).unwrap();
            let q = g.element_position(rows + 1 - m, cols + 1 - n).unwrap();
            prop_assert!((p[0] + q[0]).abs() < 1e-12);
            prop_assert!((p[1] + q[1]).abs() < 1e-12);
            let l1 = g.feed_distance(m, n).unwrap();
            let l2 = g.feed_distance(rows + 1 - m, cols + 1 - n).unwrap();
            prop_assert!((l1 - l2).abs() < 1e-12);
            prop_assert!(l1 >= focal);
        }
    }
}
