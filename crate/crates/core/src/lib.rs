//! Numerical toolkit for a 1-bit reflective digital metasurface.
//!
//! The crate covers the three functions of the surface:
//!
//! * vortex (OAM) and pencil-beam coding synthesis with 1-bit quantization
//!   ([`synthesis`]),
//! * feed-illuminated far-field, near-field and plane-wave-spectrum
//!   transformations with gain, sidelobe and mode-purity metrics ([`field`]),
//! * time-modulated direction finding from harmonic ratios ([`tmdf`]).
//!
//! [`config`] and [`runner`] drive the `metascope` command-line tool.

pub mod config;
pub mod error;
pub mod field;
pub mod model;
pub mod runner;
pub mod synthesis;
pub mod tmdf;

pub use error::{Error, Result};
