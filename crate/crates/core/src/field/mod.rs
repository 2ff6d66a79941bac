//! Radiated fields of a coded, feed-illuminated array.
//!
//! Conventions: time dependence `exp(+jωt)`, so outgoing waves carry
//! `exp(-jkR)`. The far field of element `e` toward `r̂` is
//! `(k A / 2π) cosθ · a_e · exp(+jk p_e·r̂)` with `A` the cell area; the near
//! field uses the same weight with `(z/R) exp(-jkR)/R`.

mod farfield;
mod feed;
mod metrics;
mod modes;
mod nearfield;
mod nf2ff;

pub use farfield::{aperture_field, far_field, radiate, AngularGrid, FarFieldPattern};
pub use feed::{illuminate, FeedModel};
pub use metrics::{
    directivity_gain, main_lobe_correlation, main_lobe_mask, radiated_power, sidelobe_level, GainReport, Peak,
};
pub use modes::{find_intensity_ring, oam_mode_spectrum, ModeSpectrum};
pub use nearfield::{near_field_from_aperture, phase_winding, sample_near_field, NearFieldPlane, PlaneSpec};
pub use nf2ff::nf_to_ff;
