//! Periodized Daubechies-4 wavelet transforms.
//!
//! Analysis pairs coefficient `k` with samples `2k .. 2k+3` (mod length):
//! the approximation uses `h = (h0, h1, h2, h3)`, the detail uses
//! `g = (h3, -h2, h1, -h0)`. Each level writes `[approx | detail]` into the
//! leading part of the buffer and recurses on the approximation
//! (Mallat pyramid). Wrap-around keeps every level exactly orthonormal, down
//! to a single approximation coefficient at full depth.

use alloc::format;
use alloc::vec::Vec;

use crate::{log2_exact, Error, Result};

/// Scaling filter `((1+sqrt3), (3+sqrt3), (3-sqrt3), (1-sqrt3)) / (4 sqrt2)`.
pub const D4_SCALING: [f64; 4] = [
    0.482_962_913_144_534_16,
    0.836_516_303_737_807_9,
    0.224_143_868_042_013_4,
    -0.129_409_522_551_260_37,
];

/// Wavelet filter derived from [`D4_SCALING`].
pub const D4_WAVELET: [f64; 4] = [D4_SCALING[3], -D4_SCALING[2], D4_SCALING[1], -D4_SCALING[0]];

/// `(sum h - sqrt2, h0 - h1 + h2 - h3)`; both vanish for a valid filter pair.
pub fn filter_identities() -> (f64, f64) {
    let h = D4_SCALING;
    (
        h[0] + h[1] + h[2] + h[3] - core::f64::consts::SQRT_2,
        h[0] - h[1] + h[2] - h[3],
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Line(usize),
    Square(usize),
}

impl Shape {
    pub fn len(&self) -> usize {
        match *self {
            Shape::Line(n) => n,
            Shape::Square(n) => n * n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Wavelet coefficients plus the metadata needed to invert them.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletCoeffs {
    pub values: Vec<f64>,
    pub shape: Shape,
    /// Decomposition depth (per tile when tiled).
    pub levels: u32,
    /// `0` for an untiled transform, otherwise the tile side.
    pub tile_size: usize,
}

impl WaveletCoeffs {
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    /// Inverts whichever transform produced these coefficients.
    pub fn invert(&self) -> Result<Vec<f64>> {
        match (self.shape, self.tile_size) {
            (Shape::Line(_), _) => d4_inverse_1d(self),
            (Shape::Square(_), 0) => d4_inverse_2d(self),
            (Shape::Square(_), _) => tiled_inverse_2d(self),
        }
    }
}

/// Full decomposition depth for a power-of-two length.
pub fn full_depth(len: usize) -> Result<u32> {
    log2_exact(len)
        .filter(|&b| b >= 2)
        .ok_or_else(|| Error::InvalidDimension(format!("length {len} is not a power of two >= 4")))
}

fn check_levels(len: usize, levels: u32) -> Result<()> {
    let max = full_depth(len)?;
    if levels == 0 || levels > max {
        return Err(Error::InvalidDimension(format!(
            "levels {levels} outside 1..={max} for length {len}"
        )));
    }
    Ok(())
}

fn analysis_step(data: &mut [f64], scratch: &mut [f64]) {
    let len = data.len();
    let half = len / 2;
    for k in 0..half {
        let mut a = 0.0;
        let mut d = 0.0;
        for j in 0..4 {
            let x = data[(2 * k + j) % len];
            a += D4_SCALING[j] * x;
            d += D4_WAVELET[j] * x;
        }
        scratch[k] = a;
        scratch[half + k] = d;
    }
    data.copy_from_slice(&scratch[..len]);
}

fn synthesis_step(data: &mut [f64], scratch: &mut [f64]) {
    let len = data.len();
    let half = len / 2;
    let out = &mut scratch[..len];
    out.fill(0.0);
    for k in 0..half {
        let a = data[k];
        let d = data[half + k];
        for j in 0..4 {
            out[(2 * k + j) % len] += D4_SCALING[j] * a + D4_WAVELET[j] * d;
        }
    }
    data.copy_from_slice(out);
}

fn forward_1d_in_place(data: &mut [f64], levels: u32, scratch: &mut [f64]) {
    let mut len = data.len();
    for _ in 0..levels {
        analysis_step(&mut data[..len], scratch);
        len /= 2;
    }
}

fn inverse_1d_in_place(data: &mut [f64], levels: u32, scratch: &mut [f64]) {
    let mut len = data.len() >> (levels - 1);
    for _ in 0..levels {
        synthesis_step(&mut data[..len], scratch);
        len *= 2;
    }
}

pub fn d4_forward_1d(signal: &[f64], levels: u32) -> Result<WaveletCoeffs> {
    check_levels(signal.len(), levels)?;
    let mut values = signal.to_vec();
    let mut scratch = alloc::vec![0.0; signal.len()];
    forward_1d_in_place(&mut values, levels, &mut scratch);
    Ok(WaveletCoeffs {
        values,
        shape: Shape::Line(signal.len()),
        levels,
        tile_size: 0,
    })
}

pub fn d4_inverse_1d(coeffs: &WaveletCoeffs) -> Result<Vec<f64>> {
    let Shape::Line(len) = coeffs.shape else {
        return Err(Error::InvalidDimension("expected 1D coefficients".into()));
    };
    if coeffs.values.len() != len {
        return Err(Error::InvalidDimension("coefficient count does not match shape".into()));
    }
    check_levels(len, coeffs.levels)?;
    let mut values = coeffs.values.clone();
    let mut scratch = alloc::vec![0.0; len];
    inverse_1d_in_place(&mut values, coeffs.levels, &mut scratch);
    Ok(values)
}

fn square_side(len: usize) -> Result<usize> {
    let side = libm::sqrt(len as f64) as usize;
    let side = (side.saturating_sub(1)..=side + 1)
        .find(|s| s * s == len)
        .ok_or_else(|| Error::InvalidDimension(format!("{len} values do not form a square")))?;
    full_depth(side)?;
    Ok(side)
}

/// One 2D level on the leading `block x block` corner of a `stride`-wide array.
fn forward_2d_level(data: &mut [f64], stride: usize, block: usize, scratch: &mut [f64], line: &mut [f64]) {
    for r in 0..block {
        analysis_step(&mut data[r * stride..r * stride + block], scratch);
    }
    for c in 0..block {
        for r in 0..block {
            line[r] = data[r * stride + c];
        }
        analysis_step(&mut line[..block], scratch);
        for r in 0..block {
            data[r * stride + c] = line[r];
        }
    }
}

fn inverse_2d_level(data: &mut [f64], stride: usize, block: usize, scratch: &mut [f64], line: &mut [f64]) {
    for c in 0..block {
        for r in 0..block {
            line[r] = data[r * stride + c];
        }
        synthesis_step(&mut line[..block], scratch);
        for r in 0..block {
            data[r * stride + c] = line[r];
        }
    }
    for r in 0..block {
        synthesis_step(&mut data[r * stride..r * stride + block], scratch);
    }
}

/// Forward 2D transform of the `side x side` block starting at `offset`
/// inside an array with row length `stride`.
fn forward_2d_block(data: &mut [f64], offset: usize, stride: usize, side: usize, levels: u32) {
    let mut scratch = alloc::vec![0.0; side];
    let mut line = alloc::vec![0.0; side];
    let mut block = side;
    for _ in 0..levels {
        forward_2d_level(&mut data[offset..], stride, block, &mut scratch, &mut line);
        block /= 2;
    }
}

fn inverse_2d_block(data: &mut [f64], offset: usize, stride: usize, side: usize, levels: u32) {
    let mut scratch = alloc::vec![0.0; side];
    let mut line = alloc::vec![0.0; side];
    let mut block = side >> (levels - 1);
    for _ in 0..levels {
        inverse_2d_level(&mut data[offset..], stride, block, &mut scratch, &mut line);
        block *= 2;
    }
}

/// Separable square decomposition of a row-major `side x side` field.
pub fn d4_forward_2d(field: &[f64], levels: u32) -> Result<WaveletCoeffs> {
    let side = square_side(field.len())?;
    check_levels(side, levels)?;
    let mut values = field.to_vec();
    forward_2d_block(&mut values, 0, side, side, levels);
    Ok(WaveletCoeffs {
        values,
        shape: Shape::Square(side),
        levels,
        tile_size: 0,
    })
}

/// [`d4_forward_2d`] at full depth.
pub fn d4_forward_2d_full(field: &[f64]) -> Result<WaveletCoeffs> {
    let side = square_side(field.len())?;
    d4_forward_2d(field, full_depth(side)?)
}

pub fn d4_inverse_2d(coeffs: &WaveletCoeffs) -> Result<Vec<f64>> {
    let Shape::Square(side) = coeffs.shape else {
        return Err(Error::InvalidDimension("expected 2D coefficients".into()));
    };
    if coeffs.values.len() != side * side || coeffs.tile_size != 0 {
        return Err(Error::InvalidDimension("coefficients are not an untiled square".into()));
    }
    check_levels(side, coeffs.levels)?;
    let mut values = coeffs.values.clone();
    inverse_2d_block(&mut values, 0, side, side, coeffs.levels);
    Ok(values)
}

/// Independent full-depth transforms on each `tile_size x tile_size` tile,
/// written back in place.
pub fn tiled_forward_2d(field: &[f64], tile_size: usize) -> Result<WaveletCoeffs> {
    let side = square_side(field.len())?;
    let levels = check_tile(side, tile_size)?;
    let mut values = field.to_vec();
    for tr in (0..side).step_by(tile_size) {
        for tc in (0..side).step_by(tile_size) {
            forward_2d_block(&mut values, tr * side + tc, side, tile_size, levels);
        }
    }
    Ok(WaveletCoeffs {
        values,
        shape: Shape::Square(side),
        levels,
        tile_size,
    })
}

pub fn tiled_inverse_2d(coeffs: &WaveletCoeffs) -> Result<Vec<f64>> {
    let Shape::Square(side) = coeffs.shape else {
        return Err(Error::InvalidDimension("expected 2D coefficients".into()));
    };
    if coeffs.values.len() != side * side {
        return Err(Error::InvalidDimension("coefficient count does not match shape".into()));
    }
    let tile = if coeffs.tile_size == 0 { side } else { coeffs.tile_size };
    let levels = check_tile(side, tile)?;
    if levels != coeffs.levels {
        return Err(Error::InvalidDimension("tiled coefficients must be full depth".into()));
    }
    let mut values = coeffs.values.clone();
    for tr in (0..side).step_by(tile) {
        for tc in (0..side).step_by(tile) {
            inverse_2d_block(&mut values, tr * side + tc, side, tile, levels);
        }
    }
    Ok(values)
}

fn check_tile(side: usize, tile: usize) -> Result<u32> {
    let levels = full_depth(tile)
        .map_err(|_| Error::InvalidDimension(format!("tile size {tile} is not a power of two >= 4")))?;
    if tile > side || !side.is_multiple_of(tile) {
        return Err(Error::InvalidDimension(format!(
            "tile size {tile} does not divide side {side}"
        )));
    }
    Ok(levels)
}

/// Tile side used for the `sqrt(N) x sqrt(N)` tiling of an image with
/// side `2^q`: `2^floor(q/2)`, at least 4.
pub fn default_tile_size(side: usize) -> Result<usize> {
    let q = full_depth(side)?;
    Ok((1usize << (q / 2)).max(4))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(n: usize) -> Vec<f64> {
        (0..n).map(|i| i as f64).collect()
    }

    fn pseudo_random(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = crate::rng::stream(seed);
        (0..n).map(|_| crate::rng::uniform(&mut rng) - 0.5).collect()
    }

    #[test]
    fn filters() {
        let (sum, alt) = filter_identities();
        assert!(sum.abs() < 1e-15 && alt.abs() < 1e-15);
        let s3 = libm::sqrt(3.0);
        let d = 4.0 * core::f64::consts::SQRT_2;
        let exact = [(1.0 + s3) / d, (3.0 + s3) / d, (3.0 - s3) / d, (1.0 - s3) / d];
        for (a, b) in D4_SCALING.iter().zip(&exact) {
            assert!((a - b).abs() <= 2.0 * f64::EPSILON);
        }
    }

    #[test]
    fn constant_signal_has_no_detail() {
        let x = alloc::vec![3.5; 64];
        let c = d4_forward_1d(&x, 6).unwrap();
        assert!((c.values[0] - 3.5 * 8.0).abs() < 1e-12);
        assert!(c.values[1..].iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn ramp_detail_vanishes_away_from_wrap() {
        // Direct filter-bank oracle: detail of a ramp is zero except for
        // the last coefficient, whose window wraps around.
        let n = 32;
        let x = ramp(n);
        let c = d4_forward_1d(&x, 1).unwrap();
        for k in 0..n / 2 {
            let oracle: f64 = (0..4).map(|j| D4_WAVELET[j] * x[(2 * k + j) % n]).sum();
            assert!((c.values[n / 2 + k] - oracle).abs() < 1e-12);
            if k < n / 2 - 1 {
                assert!(c.values[n / 2 + k].abs() < 1e-12, "k = {k}");
            } else {
                assert!(c.values[n / 2 + k].abs() > 1.0);
            }
        }
    }

    #[test]
    fn round_trip_1d() {
        for seed in 0..100 {
            let x = pseudo_random(1024, seed);
            let c = d4_forward_1d(&x, full_depth(1024).unwrap()).unwrap();
            let y = d4_inverse_1d(&c).unwrap();
            let err = x.iter().zip(&y).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(err < 1e-12);
        }
    }

    #[test]
    fn inverse_basics() {
        let zero = WaveletCoeffs { values: alloc::vec![0.0; 16], shape: Shape::Line(16), levels: 4, tile_size: 0 };
        assert!(d4_inverse_1d(&zero).unwrap().iter().all(|&v| v == 0.0));
        let mut unit = zero.clone();
        unit.values[0] = 1.0;
        let basis = d4_inverse_1d(&unit).unwrap();
        let norm: f64 = basis.iter().map(|v| v * v).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        for v in &basis {
            assert!((v.abs() - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn bad_dimensions() {
        assert!(d4_forward_1d(&[1.0; 12], 1).is_err());
        assert!(d4_forward_1d(&[1.0; 2], 1).is_err());
        assert!(d4_forward_1d(&[1.0; 16], 0).is_err());
        assert!(d4_forward_1d(&[1.0; 16], 5).is_err());
        assert!(d4_forward_2d(&[1.0; 32], 1).is_err());
        assert!(tiled_forward_2d(&[1.0; 64], 3).is_err());
        assert!(tiled_forward_2d(&[1.0; 64], 16).is_err());
    }

    #[test]
    fn constant_field_single_coefficient() {
        let f = alloc::vec![2.0; 64 * 64];
        let c = d4_forward_2d_full(&f).unwrap();
        assert!((c.values[0] - 2.0 * 64.0).abs() < 1e-10);
        assert!(c.values[1..].iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn round_trip_2d_and_parseval() {
        let f = pseudo_random(64 * 64, 5);
        for levels in 1..=6 {
            let c = d4_forward_2d(&f, levels).unwrap();
            let e0: f64 = f.iter().map(|v| v * v).sum();
            assert!((c.energy() - e0).abs() < 1e-10);
            let back = d4_inverse_2d(&c).unwrap();
            for (a, b) in f.iter().zip(&back) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn single_tile_equals_untiled() {
        let f = pseudo_random(32 * 32, 8);
        let a = tiled_forward_2d(&f, 32).unwrap();
        let b = d4_forward_2d_full(&f).unwrap();
        assert_eq!(a.values, b.values);
    }

    #[test]
    fn tiles_are_independent() {
        let side = 32;
        let tile = 8;
        let f = pseudo_random(side * side, 9);
        let c = tiled_forward_2d(&f, tile).unwrap();
        for tr in (0..side).step_by(tile) {
            for tc in (0..side).step_by(tile) {
                let sub: Vec<f64> = (0..tile)
                    .flat_map(|r| f[(tr + r) * side + tc..(tr + r) * side + tc + tile].iter().copied())
                    .collect();
                let own = d4_forward_2d_full(&sub).unwrap();
                let pixel_energy: f64 = sub.iter().map(|v| v * v).sum();
                let mut coeff_energy = 0.0;
                for r in 0..tile {
                    for col in 0..tile {
                        let v = c.values[(tr + r) * side + tc + col];
                        assert_eq!(v, own.values[r * tile + col]);
                        coeff_energy += v * v;
                    }
                }
                assert!((pixel_energy - coeff_energy).abs() < 1e-10);
            }
        }
        let back = tiled_inverse_2d(&c).unwrap();
        for (a, b) in f.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn default_tiles() {
        assert_eq!(default_tile_size(32).unwrap(), 4);
        assert_eq!(default_tile_size(128).unwrap(), 8);
        assert_eq!(default_tile_size(256).unwrap(), 16);
    }
}
