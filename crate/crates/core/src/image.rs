//! Grayscale images, amplitude encoding, heatmap quantization and a
//! synthetic test corpus.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;

use crate::rng;
use crate::statevec::StateVector;
use crate::{Error, Result};

/// 8-bit grayscale image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimension("image has zero size".into()));
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidDimension(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        Ok(Self { width, height, pixels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }
}

/// Nonnegative unit-norm amplitudes, one per pixel, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageAmplitudes {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl ImageAmplitudes {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The state `sum a_xy |x>|y>`; needs a power-of-two pixel count.
    pub fn to_state(&self) -> Result<StateVector> {
        StateVector::from_real(&self.values)
    }

    /// Rescales to 8 bits with the largest amplitude at 255.
    pub fn to_gray(&self) -> GrayImage {
        let max = self.values.iter().fold(0.0f64, |m, &v| m.max(v));
        let pixels = self
            .values
            .iter()
            .map(|&v| if max > 0.0 { libm::round(255.0 * v / max) as u8 } else { 0 })
            .collect();
        GrayImage { width: self.width, height: self.height, pixels }
    }
}

/// `a_xy = pixel_xy / sqrt(sum pixel^2)`.
pub fn encode_wavefunction(image: &GrayImage) -> Result<ImageAmplitudes> {
    let energy: f64 = image.pixels.iter().map(|&p| (p as f64) * (p as f64)).sum();
    if energy == 0.0 {
        return Err(Error::DegenerateInput("all-black image has no amplitude encoding".into()));
    }
    let s = 1.0 / libm::sqrt(energy);
    Ok(ImageAmplitudes {
        width: image.width,
        height: image.height,
        values: image.pixels.iter().map(|&p| p as f64 * s).collect(),
    })
}

/// Maps real values to gray levels.
///
/// Signed: `[-m, m]` onto `[0, 255]` with zero at 128, where `m = max|v|`.
/// Unsigned: `[0, max]` onto `[0, 255]`; negative values clamp to 0.
pub fn quantize_heatmap(values: &[f64], width: usize, height: usize, signed: bool) -> Result<GrayImage> {
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidData(format!("heatmap value {v} is not finite")));
    }
    let pixels = if signed {
        let m = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        values
            .iter()
            .map(|&v| {
                if m == 0.0 {
                    128
                } else if v >= 0.0 {
                    128 + libm::round(127.0 * v / m) as u8
                } else {
                    128 - libm::round(-128.0 * v / m) as u8
                }
            })
            .collect()
    } else {
        let m = values.iter().fold(0.0f64, |m, &v| m.max(v));
        values
            .iter()
            .map(|&v| if m > 0.0 && v > 0.0 { libm::round(255.0 * v / m) as u8 } else { 0 })
            .collect()
    };
    GrayImage::new(width, height, pixels)
}

/// The four synthetic test images.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Synthetic {
    /// Smooth face-like blob on a gradient background.
    Portrait,
    /// Dense high-frequency stripes with pixel noise.
    Texture,
    /// A few bright Gaussian spots over a faint noisy glow.
    Spots,
    /// Diamond-square fractal terrain.
    Fractal,
}

impl Synthetic {
    pub const ALL: [Synthetic; 4] = [Self::Portrait, Self::Texture, Self::Spots, Self::Fractal];

    pub fn name(self) -> &'static str {
        match self {
            Self::Portrait => "portrait",
            Self::Texture => "texture",
            Self::Spots => "spots",
            Self::Fractal => "fractal",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }
}

/// Deterministic `side x side` synthetic image; features scale with `side`.
pub fn synthetic_image(kind: Synthetic, side: usize, seed: u64) -> Result<GrayImage> {
    if !crate::is_power_of_two(side) || side < 4 {
        return Err(Error::InvalidDimension(format!(
            "synthetic images need a power-of-two side >= 4, got {side}"
        )));
    }
    let field = match kind {
        Synthetic::Portrait => portrait(side, seed),
        Synthetic::Texture => texture(side, seed),
        Synthetic::Spots => spots(side, seed),
        Synthetic::Fractal => fractal(side, seed),
    };
    let pixels = field.iter().map(|&v| libm::round(v.clamp(0.0, 255.0)) as u8).collect();
    GrayImage::new(side, side, pixels)
}

fn gauss(dx: f64, dy: f64, sx: f64, sy: f64) -> f64 {
    libm::exp(-0.5 * ((dx / sx) * (dx / sx) + (dy / sy) * (dy / sy)))
}

fn portrait(side: usize, seed: u64) -> Vec<f64> {
    let mut r = rng::stream(seed);
    let (cx, cy) = (0.5 + 0.04 * (r.gen::<f64>() - 0.5), 0.45 + 0.04 * (r.gen::<f64>() - 0.5));
    let waves: Vec<(f64, f64, f64)> = (0..3)
        .map(|_| (1.0 + 2.0 * r.gen::<f64>(), 1.0 + 2.0 * r.gen::<f64>(), 2.0 * PI * r.gen::<f64>()))
        .collect();
    let mut out = Vec::with_capacity(side * side);
    for y in 0..side {
        for x in 0..side {
            let u = (x as f64 + 0.5) / side as f64;
            let v = (y as f64 + 0.5) / side as f64;
            let mut val = 50.0 + 40.0 * v;
            for &(fx, fy, ph) in &waves {
                val += 6.0 * libm::sin(2.0 * PI * (fx * u + fy * v) + ph);
            }
            val += 150.0 * gauss(u - cx, v - cy, 0.17, 0.22);
            val += 60.0 * gauss(u - cx, v - 0.95, 0.3, 0.12);
            val -= 70.0 * gauss(u - cx + 0.08, v - cy + 0.05, 0.03, 0.02);
            val -= 70.0 * gauss(u - cx - 0.08, v - cy + 0.05, 0.03, 0.02);
            val -= 50.0 * gauss(u - cx, v - cy - 0.11, 0.06, 0.015);
            out.push(val);
        }
    }
    out
}

fn texture(side: usize, seed: u64) -> Vec<f64> {
    let mut r = rng::stream(seed);
    let period_x = 2.5 + r.gen::<f64>();
    let period_y = 3.5 + r.gen::<f64>();
    let mut out = Vec::with_capacity(side * side);
    for y in 0..side {
        for x in 0..side {
            let s = libm::sin(2.0 * PI * x as f64 / period_x) * libm::sin(2.0 * PI * y as f64 / period_y);
            out.push(128.0 + 70.0 * s + 50.0 * (r.gen::<f64>() - 0.5));
        }
    }
    out
}

fn spots(side: usize, seed: u64) -> Vec<f64> {
    let mut r = rng::stream(seed);
    let width = (side as f64 / 128.0).max(0.6);
    let centers: Vec<(f64, f64, f64)> = (0..12)
        .map(|_| {
            (
                r.gen::<f64>() * side as f64,
                r.gen::<f64>() * side as f64,
                150.0 + 105.0 * r.gen::<f64>(),
            )
        })
        .collect();
    let (gx, gy) = (0.3 + 0.4 * r.gen::<f64>(), 0.3 + 0.4 * r.gen::<f64>());
    let mut out = alloc::vec![0.0; side * side];
    for y in 0..side {
        for x in 0..side {
            let (u, v) = (x as f64 / side as f64, y as f64 / side as f64);
            // faint diffuse glow plus sensor noise under the point sources
            let glow = 30.0 * gauss(u - gx, v - gy, 0.15, 0.08) + 6.0 * r.gen::<f64>();
            out[y * side + x] = glow
                + centers
                    .iter()
                    .map(|&(cx, cy, peak)| peak * gauss(x as f64 - cx, y as f64 - cy, width, width))
                    .sum::<f64>();
        }
    }
    out
}

/// Diamond-square on a periodic `side x side` lattice, rescaled to `[0, 255]`.
fn fractal(side: usize, seed: u64) -> Vec<f64> {
    let mut r = rng::stream(seed);
    let mut h = alloc::vec![0.0f64; side * side];
    let at = |x: usize, y: usize| (y % side) * side + (x % side);
    let roughness = 0.6;
    let mut step = side;
    let mut amp = 1.0;
    while step > 1 {
        let half = step / 2;
        for y in (0..side).step_by(step) {
            for x in (0..side).step_by(step) {
                let avg = (h[at(x, y)] + h[at(x + step, y)] + h[at(x, y + step)] + h[at(x + step, y + step)]) / 4.0;
                h[at(x + half, y + half)] = avg + amp * (r.gen::<f64>() - 0.5);
            }
        }
        for y in (0..side).step_by(half) {
            let x0 = if (y / half).is_multiple_of(2) { half } else { 0 };
            for x in (x0..side).step_by(step) {
                let avg = (h[at(x + half, y)]
                    + h[at(x + side - half, y)]
                    + h[at(x, y + half)]
                    + h[at(x, y + side - half)])
                    / 4.0;
                h[at(x, y)] = avg + amp * (r.gen::<f64>() - 0.5);
            }
        }
        step = half;
        amp *= libm::pow(2.0, -roughness);
    }
    let lo = h.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = h.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    h.iter().map(|v| 255.0 * (v - lo) / span).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_and_single_pixel() {
        let img = GrayImage::new(4, 4, alloc::vec![77; 16]).unwrap();
        let a = encode_wavefunction(&img).unwrap();
        assert!(a.values().iter().all(|&v| (v - 0.25).abs() < 1e-15));
        let mut p = alloc::vec![0u8; 16];
        p[5] = 255;
        let a = encode_wavefunction(&GrayImage::new(4, 4, p).unwrap()).unwrap();
        assert_eq!(a.values()[5], 1.0);
        let black = GrayImage::new(2, 2, alloc::vec![0; 4]).unwrap();
        assert!(matches!(encode_wavefunction(&black), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn corpus_encodes_normalized() {
        for kind in Synthetic::ALL {
            let img = synthetic_image(kind, 64, 7).unwrap();
            let a = encode_wavefunction(&img).unwrap();
            let n: f64 = a.values().iter().map(|v| v * v).sum();
            assert!((n - 1.0).abs() < 1e-12, "{}", kind.name());
            assert_eq!(img, synthetic_image(kind, 64, 7).unwrap());
            assert_eq!(Synthetic::from_name(kind.name()), Some(kind));
        }
    }

    #[test]
    fn encode_decode_within_one_level() {
        for kind in Synthetic::ALL {
            let img = synthetic_image(kind, 32, 3).unwrap();
            let back = encode_wavefunction(&img).unwrap().to_gray();
            let max = *img.pixels().iter().max().unwrap() as f64;
            for (&p, &q) in img.pixels().iter().zip(back.pixels()) {
                assert!((q as f64 - p as f64 * 255.0 / max).abs() <= 1.0);
            }
        }
    }

    #[test]
    fn heatmap_examples() {
        let z = quantize_heatmap(&[0.0; 4], 2, 2, true).unwrap();
        assert!(z.pixels().iter().all(|&p| p == 128));
        let two = quantize_heatmap(&[-0.3, 0.3], 2, 1, true).unwrap();
        assert_eq!(two.pixels(), &[0, 255]);
        let u = quantize_heatmap(&[0.0, 0.5, 1.0], 3, 1, false).unwrap();
        assert_eq!(u.pixels(), &[0, 128, 255]);
        assert!(matches!(quantize_heatmap(&[f64::NAN], 1, 1, true), Err(Error::InvalidData(_))));
        assert!(quantize_heatmap(&[1.0, f64::INFINITY], 2, 1, false).is_err());
    }

    #[test]
    fn bad_sizes() {
        assert!(GrayImage::new(2, 2, alloc::vec![0; 3]).is_err());
        assert!(synthetic_image(Synthetic::Spots, 48, 1).is_err());
    }
}
