//! Classical Chirikov standard map in rescaled variables `(theta, p = T n)`:
//!
//! ```text
//! p'     = p + K sin(theta)
//! theta' = theta + p'
//! ```
//!
//! Both coordinates are wrapped after every step (`theta` into `[0, 2pi)`,
//! `p` into `[-pi, pi)`), so one run covers exactly one phase-space cell.
//! The number of momentum cells crossed is kept in [`PhasePoint::winding`]
//! so the unwrapped momentum stays available for transport measurements.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use crate::rng;
use crate::{Error, Result};

/// Default ensemble size for density plots.
pub const DEFAULT_ENSEMBLE_SIZE: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub theta: f64,
    pub p: f64,
    /// Net number of `2 pi` momentum cells crossed.
    pub winding: i64,
}

/// Reduces an angle to `[0, 2 pi)`.
fn wrap_angle(theta: f64) -> f64 {
    let r = theta - libm::floor(theta / TAU) * TAU;
    // tiny negative inputs can round up to exactly TAU
    if r >= TAU {
        0.0
    } else {
        r
    }
}

impl PhasePoint {
    pub fn new(theta: f64, p: f64) -> Self {
        let mut pt = Self { theta, p, winding: 0 };
        pt.wrap();
        pt
    }

    pub fn unwrapped_p(&self) -> f64 {
        self.p + TAU * self.winding as f64
    }

    fn wrap(&mut self) {
        self.theta = wrap_angle(self.theta);
        let shifted = self.p + PI;
        let cells = libm::floor(shifted / TAU);
        self.p = shifted - cells * TAU - PI;
        if self.p >= PI {
            self.p -= TAU;
        }
        self.winding += cells as i64;
    }

    fn step(&mut self, k: f64) {
        self.p += k * libm::sin(self.theta);
        self.theta += self.p;
        self.wrap();
    }

    fn step_back(&mut self, k: f64) {
        self.theta -= self.p;
        self.theta = wrap_angle(self.theta);
        self.p -= k * libm::sin(self.theta);
        self.wrap();
    }
}

/// Points evolved under a common chaos parameter `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalEnsemble {
    points: Vec<PhasePoint>,
    k: f64,
}

impl ClassicalEnsemble {
    pub fn new(points: Vec<PhasePoint>, k: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter("ensemble has no points".into()));
        }
        if !k.is_finite() {
            return Err(Error::InvalidParameter(format!("chaos parameter {k} is not finite")));
        }
        if points.iter().any(|p| !p.theta.is_finite() || !p.p.is_finite()) {
            return Err(Error::InvalidParameter("ensemble has non-finite coordinates".into()));
        }
        Ok(Self { points, k })
    }

    /// Uniform random points in `theta in [0, 2pi)`, `p in [p_min, p_max)`.
    pub fn uniform_band(size: usize, p_min: f64, p_max: f64, k: f64, seed: u64) -> Result<Self> {
        if !(p_max > p_min) {
            return Err(Error::InvalidParameter(format!(
                "empty momentum band [{p_min}, {p_max})"
            )));
        }
        let mut stream = rng::stream(seed);
        let points = (0..size)
            .map(|_| {
                let theta = TAU * rng::uniform(&mut stream);
                let p = p_min + (p_max - p_min) * rng::uniform(&mut stream);
                PhasePoint::new(theta, p)
            })
            .collect();
        Self::new(points, k)
    }

    /// The initial condition of the reference density plots: `-pi <= p <= -3pi/4`.
    pub fn reference_band(size: usize, k: f64, seed: u64) -> Result<Self> {
        Self::uniform_band(size, -PI, -0.75 * PI, k, seed)
    }

    pub fn points(&self) -> &[PhasePoint] {
        &self.points
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Standard deviation of the unwrapped momentum.
    pub fn momentum_spread(&self) -> f64 {
        let n = self.points.len() as f64;
        let mean = self.points.iter().map(|p| p.unwrapped_p()).sum::<f64>() / n;
        let var = self
            .points
            .iter()
            .map(|p| {
                let d = p.unwrapped_p() - mean;
                d * d
            })
            .sum::<f64>()
            / n;
        libm::sqrt(var)
    }
}

pub fn step_ensemble(e: &ClassicalEnsemble) -> ClassicalEnsemble {
    evolve_ensemble(e, 1)
}

pub fn evolve_ensemble(e: &ClassicalEnsemble, t: usize) -> ClassicalEnsemble {
    let mut points = e.points.clone();
    for pt in points.iter_mut() {
        for _ in 0..t {
            pt.step(e.k);
        }
    }
    ClassicalEnsemble { points, k: e.k }
}

/// Exact inverse of [`step_ensemble`].
pub fn step_back_ensemble(e: &ClassicalEnsemble) -> ClassicalEnsemble {
    let mut points = e.points.clone();
    for pt in points.iter_mut() {
        pt.step_back(e.k);
    }
    ClassicalEnsemble { points, k: e.k }
}

/// Row-major `(n_theta, n_p)` grid of nonnegative weights.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub n_theta: usize,
    pub n_p: usize,
    /// Index `it * n_p + ip`.
    pub bins: Vec<f64>,
}

impl DensityGrid {
    pub fn get(&self, it: usize, ip: usize) -> f64 {
        self.bins[it * self.n_p + ip]
    }

    pub fn total(&self) -> f64 {
        self.bins.iter().sum()
    }
}

/// Normalized histogram over `[0, 2pi) x [-pi, pi)`.
pub fn histogram_density(e: &ClassicalEnsemble, n_theta: usize, n_p: usize) -> Result<DensityGrid> {
    if n_theta == 0 || n_p == 0 {
        return Err(Error::InvalidDimension("histogram needs at least one bin per axis".into()));
    }
    let mut bins = alloc::vec![0.0; n_theta * n_p];
    for pt in &e.points {
        let it = ((pt.theta / TAU * n_theta as f64) as usize).min(n_theta - 1);
        let ip = (((pt.p + PI) / TAU * n_p as f64) as usize).min(n_p - 1);
        bins[it * n_p + ip] += 1.0;
    }
    let w = 1.0 / e.points.len() as f64;
    for b in bins.iter_mut() {
        *b *= w;
    }
    Ok(DensityGrid { n_theta, n_p, bins })
}
