//! Radix-2 unitary discrete Fourier transform.
//!
//! Sign convention: `Forward` computes `(1/sqrt(N)) sum_n exp(-2 pi i k n / N) f(n)`,
//! `Inverse` uses the opposite sign. Both carry the same `1/sqrt(N)` factor so
//! the pair is exactly unitary.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::{cis, log2_exact, Complex64, Error, Result};

/// Sign of the exponent in the transform kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Kernel `exp(-2 pi i k n / N)`; maps momentum to angle representation.
    Forward,
    /// Kernel `exp(+2 pi i k n / N)`; maps angle back to momentum.
    Inverse,
}

impl Direction {
    pub fn reversed(self) -> Self {
        match self {
            Direction::Forward => Direction::Inverse,
            Direction::Inverse => Direction::Forward,
        }
    }
}

/// Precomputed twiddles and bit-reversal table for one power-of-two length.
#[derive(Debug, Clone)]
pub struct FftPlan {
    len: usize,
    // exp(-2 pi i k / len) for k < len / 2
    twiddles: Vec<Complex64>,
    bitrev: Vec<u32>,
    scale: f64,
}

impl FftPlan {
    pub fn new(len: usize) -> Result<Self> {
        let bits = log2_exact(len).ok_or_else(|| {
            Error::InvalidDimension(alloc::format!("transform length {len} is not a power of two"))
        })?;
        let twiddles = (0..len / 2)
            .map(|k| cis(-2.0 * PI * k as f64 / len as f64))
            .collect();
        let bitrev = (0..len as u32)
            .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (32 - bits) })
            .collect();
        Ok(Self {
            len,
            twiddles,
            bitrev,
            scale: 1.0 / libm::sqrt(len as f64),
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Transforms `data` in place. Panics if the length does not match the plan.
    pub fn process(&self, data: &mut [Complex64], direction: Direction) {
        assert_eq!(data.len(), self.len, "buffer length does not match plan");
        let n = self.len;
        if n == 1 {
            return;
        }
        for i in 0..n {
            let j = self.bitrev[i] as usize;
            if i < j {
                data.swap(i, j);
            }
        }
        let conj = direction == Direction::Inverse;
        let mut half = 1;
        while half < n {
            let stride = n / (2 * half);
            for start in (0..n).step_by(2 * half) {
                for k in 0..half {
                    let mut w = self.twiddles[k * stride];
                    if conj {
                        w = w.conj();
                    }
                    let a = data[start + k];
                    let b = data[start + k + half] * w;
                    data[start + k] = a + b;
                    data[start + k + half] = a - b;
                }
            }
            half *= 2;
        }
        for v in data.iter_mut() {
            *v *= self.scale;
        }
    }
}

/// One-shot unitary transform of a power-of-two length buffer.
pub fn fft_in_place(data: &mut [Complex64], direction: Direction) -> Result<()> {
    FftPlan::new(data.len())?.process(data, direction);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn naive(input: &[Complex64], direction: Direction) -> Vec<Complex64> {
        let n = input.len();
        let sign = match direction {
            Direction::Forward => -1.0,
            Direction::Inverse => 1.0,
        };
        (0..n)
            .map(|k| {
                let s: Complex64 = input
                    .iter()
                    .enumerate()
                    .map(|(j, &x)| x * cis(sign * 2.0 * PI * (k * j) as f64 / n as f64))
                    .sum();
                s / libm::sqrt(n as f64)
            })
            .collect()
    }

    #[test]
    fn matches_naive_sum() {
        for &n in &[1usize, 2, 4, 8, 32, 64] {
            let input: Vec<Complex64> = (0..n)
                .map(|i| Complex64::new(libm::sin(i as f64 * 1.3), libm::cos(i as f64 * 0.7 + 0.2)))
                .collect();
            for dir in [Direction::Forward, Direction::Inverse] {
                let mut fast = input.clone();
                fft_in_place(&mut fast, dir).unwrap();
                let slow = naive(&input, dir);
                for (a, b) in fast.iter().zip(&slow) {
                    assert!((a - b).norm() < 1e-12, "n={n} {dir:?}");
                }
            }
        }
    }

    #[test]
    fn rejects_non_power_of_two() {
        let mut buf = vec![Complex64::new(0.0, 0.0); 6];
        assert!(matches!(
            fft_in_place(&mut buf, Direction::Forward),
            Err(Error::InvalidDimension(_))
        ));
    }
}
