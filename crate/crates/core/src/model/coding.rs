use std::fmt::Write as _;

use super::ArrayGeometry;
use crate::error::{Error, Result};

/// Metadata line marking the four-quadrant bias-line partition.
pub const QUADRANT_SPLIT_META: &str = "# quadrant-split: 2x2";

/// M×N grid of 1-bit states. Bit 0 selects the 0 reflection state, bit 1 the π state.
///
/// Storage is row-major with 0-based indices; row `i` is element row `m = i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodingMatrix {
    rows: usize,
    cols: usize,
    bits: Vec<u8>,
}

impl CodingMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            bits: vec![0; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                bits.push(u8::from(f(i, j)));
            }
        }
        Self { rows, cols, bits }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.bits[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, bit: bool) {
        self.bits[i * self.cols + j] = u8::from(bit);
    }

    /// Row-major bit slice.
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum()
    }

    pub fn complement(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            bits: self.bits.iter().map(|b| 1 - b).collect(),
        }
    }

    /// Reverses the column order (y → -y).
    pub fn mirror_cols(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, self.cols - 1 - j) == 1)
    }

    /// Reverses the row order (x → -x).
    pub fn mirror_rows(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(self.rows - 1 - i, j) == 1)
    }

    pub fn check_geometry(&self, geometry: &ArrayGeometry) -> Result<()> {
        if self.rows != geometry.rows() || self.cols != geometry.cols() {
            return Err(Error::DimensionMismatch {
                got_rows: self.rows,
                got_cols: self.cols,
                rows: geometry.rows(),
                cols: geometry.cols(),
            });
        }
        Ok(())
    }

    /// One of the four bias-line quadrants, numbered 0..4 row-major
    /// (0 = low rows/low cols, 3 = high rows/high cols). Odd sizes give the
    /// extra row or column to the high half.
    pub fn quadrant(&self, q: usize) -> CodingMatrix {
        assert!(q < 4, "quadrant index must be < 4");
        let (r0, r1) = if q < 2 {
            (0, self.rows / 2)
        } else {
            (self.rows / 2, self.rows)
        };
        let (c0, c1) = if q.is_multiple_of(2) {
            (0, self.cols / 2)
        } else {
            (self.cols / 2, self.cols)
        };
        CodingMatrix::from_fn(r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j) == 1)
    }

    /// Text bitmap: one line of '0'/'1' per row, row 0 first, LF endings.
    pub fn to_bitmap(&self, quadrant_meta: bool) -> String {
        let mut out = String::with_capacity(self.rows * (self.cols + 1) + 32);
        if quadrant_meta {
            let _ = writeln!(out, "{QUADRANT_SPLIT_META}");
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.push(if self.get(i, j) == 1 { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    /// Parses the bitmap format. Lines starting with `#` are metadata and skipped.
    pub fn from_bitmap(text: &str) -> Result<Self> {
        let mut cols = None;
        let mut bits = Vec::new();
        let mut rows = 0;
        for (k, line) in text.split('\n').enumerate() {
            let lineno = k + 1;
            if line.starts_with('#') {
                continue;
            }
            if line.is_empty() {
                continue;
            }
            if line.ends_with('\r') {
                return Err(Error::Bitmap {
                    line: lineno,
                    msg: "CR line ending; bitmaps use LF".into(),
                });
            }
            let width = line.len();
            match cols {
                None => cols = Some(width),
                Some(c) if c != width => {
                    return Err(Error::Bitmap {
                        line: lineno,
                        msg: format!("expected {c} columns, found {width}"),
                    })
                }
                _ => {}
            }
            for ch in line.chars() {
                match ch {
                    '0' => bits.push(0),
                    '1' => bits.push(1),
                    other => {
                        return Err(Error::Bitmap {
                            line: lineno,
                            msg: format!("unexpected character {other:?}"),
                        })
                    }
                }
            }
            rows += 1;
        }
        let cols = cols.ok_or(Error::Bitmap {
            line: 1,
            msg: "no rows".into(),
        })?;
        Ok(Self { rows, cols, bits })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitmap_layout() {
        let c = CodingMatrix::from_fn(2, 3, |i, j| (i + j) % 2 == 1);
        assert_eq!(c.to_bitmap(false), "010\n101\n");
        assert_eq!(c.to_bitmap(true), "# quadrant-split: 2x2\n010\n101\n");
    }

    #[test]
    fn bitmap_parse_skips_metadata() {
        let c = CodingMatrix::from_bitmap("# quadrant-split: 2x2\n01\n11\n").unwrap();
        assert_eq!((c.rows(), c.cols()), (2, 2));
        assert_eq!(c.bits(), &[0, 1, 1, 1]);
    }

    #[test]
    fn bitmap_parse_errors_carry_line() {
        match CodingMatrix::from_bitmap("01\n0x\n") {
            Err(Error::Bitmap { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(CodingMatrix::from_bitmap("01\n011\n").is_err());
        assert!(CodingMatrix::from_bitmap("01\r\n").is_err());
        assert!(CodingMatrix::from_bitmap("").is_err());
    }

    #[test]
    fn quadrants_tile_the_matrix() {
        let c = CodingMatrix::from_fn(20, 20, |i, j| (i * 7 + j * 3) % 5 == 0);
        let total: usize = (0..4).map(|q| c.quadrant(q).ones()).sum();
        assert_eq!(total, c.ones());
        assert_eq!(c.quadrant(3).rows(), 10);
        assert_eq!(c.quadrant(1).get(0, 0), c.get(0, 10));
    }

    #[test]
    fn mirrors_and_complement() {
        let c = CodingMatrix::from_fn(3, 4, |i, j| i * 4 + j < 5);
        assert_eq!(c.mirror_cols().mirror_cols(), c);
        assert_eq!(c.mirror_rows().get(0, 0), c.get(2, 0));
        assert_eq!(c.complement().ones(), 12 - c.ones());
    }

    #[test]
    fn geometry_check() {
        let g = ArrayGeometry::prototype();
        assert!(CodingMatrix::zeros(20, 20).check_geometry(&g).is_ok());
        assert!(matches!(
            CodingMatrix::zeros(20, 19).check_geometry(&g),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
