//! Numerical core for quantum phase-space distributions of the kicked rotator.
//!
//! Everything here is pure computation on in-memory data and builds without
//! `std` (an allocator is required). File formats, the command-line front end
//! and parallel parameter scans live in the companion `phasespace` crate.
//!
//! Module map:
//!
//! - [`statevec`]: normalized statevectors, unitary DFT (simulated QFT),
//!   block transforms and tensor products.
//! - [`stdmap`]: classical Chirikov standard-map ensembles and histograms.
//! - [`rotator`]: quantum kicked-rotator Floquet evolution.
//! - [`wigner`]: discrete Wigner function, both by direct summation and by
//!   simulating the doubled-register construction.
//! - [`husimi`]: modified (box-window) and Gaussian Husimi distributions.
//! - [`wavelet`]: periodized Daubechies-4 transforms (1D, 2D, tiled).
//! - [`measurement`]: sampling, coarse-grained measurement, ancilla
//!   statistics, amplitude amplification and image reconstruction.
//! - [`analysis`]: participation ratios, entropy and scaling fits.
//! - [`image`]: grayscale images, amplitude encoding and the synthetic
//!   test corpus.
#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analysis;
mod error;
pub mod fft;
pub mod husimi;
pub mod image;
pub mod measurement;
pub mod rng;
pub mod rotator;
pub mod statevec;
pub mod stdmap;
pub mod wavelet;
pub mod wigner;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub(crate) fn is_power_of_two(n: usize) -> bool {
    n != 0 && n & (n - 1) == 0
}

pub(crate) fn log2_exact(n: usize) -> Option<u32> {
    is_power_of_two(n).then(|| n.trailing_zeros())
}

#[inline]
pub(crate) fn cis(phase: f64) -> Complex64 {
    let (s, c) = libm::sincos(phase);
    Complex64::new(c, s)
}
