use num_complex::Complex64;
use rustfft::FftPlanner;

use super::farfield::{AngularGrid, FarFieldPattern};
use super::nearfield::{check_pitch, NearFieldPlane};
use crate::error::Result;
use crate::model::FrequencySpec;

const MIN_FFT: usize = 1024;

/// Plane-wave-spectrum transform of a sampled plane to the far field.
///
/// The plane is zero-padded to at least twice its size (and at least
/// 1024 points per side), transformed with a 2-D FFT, propagated back to
/// the aperture with `exp(+j k_z z)` and read out at
/// `(k_x, k_y) = k (sinθ cosφ, sinθ sinφ)` by bilinear interpolation. The
/// output uses the same normalization as the direct far-field sum.
pub fn nf_to_ff(plane: &NearFieldPlane, grid: &AngularGrid) -> Result<FarFieldPattern> {
    let freq = FrequencySpec::new(plane.frequency_hz())?;
    let k = freq.wavenumber();
    let d = plane.pitch();
    check_pitch(d, freq.wavelength())?;
    let side = plane.side();
    let n = (2 * side).max(MIN_FFT).next_power_of_two();
    let h = plane.half_count() as isize;

    // place sample (ix, iy) at wrapped index (ix - h, iy - h) so x = 0 sits at bin 0
    let wrap = |i: usize| (i as isize - h).rem_euclid(n as isize) as usize;
    let mut buf = vec![Complex64::default(); n * n];
    for iy in 0..side {
        for ix in 0..side {
            buf[wrap(iy) * n + wrap(ix)] = plane.at(ix, iy);
        }
    }
    // inverse transform carries exp(+j 2π p i / N), matching exp(+j k_x x)
    let fft = FftPlanner::new().plan_fft_inverse(n);
    for row in buf.chunks_exact_mut(n) {
        fft.process(row);
    }
    let mut spec = vec![Complex64::default(); n * n];
    for y in 0..n {
        for x in 0..n {
            spec[x * n + y] = buf[y * n + x];
        }
    }
    for col in spec.chunks_exact_mut(n) {
        fft.process(col);
    }
    // spec[px * n + py] = Σ E(x, y) exp(+j(k_x x + k_y y)) at k = 2π p / (N d)

    let bin = |kc: f64| (kc * n as f64 * d / std::f64::consts::TAU).rem_euclid(n as f64);
    let lookup = |px: usize, py: usize| spec[(px % n) * n + py % n];
    let z = plane.z();
    let scale = k * d * d / std::f64::consts::TAU;
    let mut field = Vec::with_capacity(grid.len());
    for &theta in grid.thetas() {
        let (st, ct) = theta.sin_cos();
        let back = Complex64::cis(k * ct * z) * Complex64::i() * (scale * ct);
        for &phi in grid.phis() {
            let (sp, cp) = phi.sin_cos();
            let (fx, fy) = (bin(k * st * cp), bin(k * st * sp));
            let (x0, y0) = (fx.floor() as usize, fy.floor() as usize);
            let (tx, ty) = (fx - x0 as f64, fy - y0 as f64);
            let s = lookup(x0, y0) * ((1.0 - tx) * (1.0 - ty))
                + lookup(x0 + 1, y0) * (tx * (1.0 - ty))
                + lookup(x0, y0 + 1) * ((1.0 - tx) * ty)
                + lookup(x0 + 1, y0 + 1) * (tx * ty);
            field.push(s * back);
        }
    }
    FarFieldPattern::new(grid.clone(), field, plane.frequency_hz())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Peak;

    #[test]
    fn plane_wave_maps_to_its_direction() {
        let freq = FrequencySpec::new(3e9).unwrap();
        let k = freq.wavenumber();
        let (t0, p0) = (25f64.to_radians(), 40f64.to_radians());
        let (kx, ky) = (k * t0.sin() * p0.cos(), k * t0.sin() * p0.sin());
        let pitch = 0.45 * freq.wavelength();
        let n = 40;
        let side = 2 * n + 1;
        let samples = (0..side * side)
            .map(|idx| {
                let x = (idx % side) as f64 * pitch - n as f64 * pitch;
                let y = (idx / side) as f64 * pitch - n as f64 * pitch;
                Complex64::cis(-(kx * x + ky * y))
            })
            .collect();
        let plane = NearFieldPlane::new(0.2, pitch, n, 3e9, samples).unwrap();
        let grid = AngularGrid::hemisphere(0.5, 1.0).unwrap();
        let ff = nf_to_ff(&plane, &grid).unwrap();
        let peak = Peak::find(&ff);
        assert!(peak.angle_to(t0, p0).to_degrees() < 1.0, "{peak:?}");
    }
}
