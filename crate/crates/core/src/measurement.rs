//! Simulated measurement protocols on statevectors.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::rng::{self, Categorical};
use crate::statevec::StateVector;
use crate::wavelet::WaveletCoeffs;
use crate::{Complex64, Error, Result};

/// Outcome counts of repeated projective measurements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementRecord {
    /// Nonzero counts keyed by outcome index.
    pub counts: BTreeMap<usize, u64>,
    pub shots: u64,
    pub seed: u64,
    /// Size of the outcome space.
    pub outcomes: usize,
}

impl MeasurementRecord {
    pub fn count(&self, outcome: usize) -> u64 {
        self.counts.get(&outcome).copied().unwrap_or(0)
    }

    /// Empirical frequencies as a dense vector.
    pub fn frequencies(&self) -> Vec<f64> {
        let mut f = alloc::vec![0.0; self.outcomes];
        for (&k, &c) in &self.counts {
            f[k] = c as f64 / self.shots as f64;
        }
        f
    }
}

fn sample_weights(weights: &[f64], shots: u64, seed: u64) -> Result<MeasurementRecord> {
    if shots == 0 {
        return Err(Error::InvalidParameter("at least one shot is required".into()));
    }
    let sampler = Categorical::new(weights)?;
    let mut stream = rng::stream(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        *counts.entry(sampler.sample(&mut stream)).or_insert(0) += 1;
    }
    Ok(MeasurementRecord { counts, shots, seed, outcomes: weights.len() })
}

/// Measures every qubit `shots` times.
pub fn sample_computational(state: &StateVector, shots: u64, seed: u64) -> Result<MeasurementRecord> {
    sample_weights(&state.probabilities(), shots, seed)
}

/// Per-axis qubit count of a state read as a square `2^m x 2^m` grid.
fn grid_axis_qubits(state: &StateVector) -> Result<u32> {
    let q = state.qubits();
    if !q.is_multiple_of(2) {
        return Err(Error::InvalidDimension(format!(
            "{q}-qubit state cannot be read as a square grid"
        )));
    }
    Ok(q / 2)
}

/// Exact probabilities of the `2^(2 n_f)` coarse cells, row-major in
/// `(row >> shift, col >> shift)`.
pub fn coarse_cell_probabilities(state: &StateVector, n_f: u32) -> Result<Vec<f64>> {
    let m = grid_axis_qubits(state)?;
    if n_f > m {
        return Err(Error::InvalidParameter(format!(
            "cannot measure {n_f} leading qubits per axis of a {m}-qubit axis"
        )));
    }
    let side = 1usize << m;
    let cells = 1usize << n_f;
    let shift = m - n_f;
    let mut probs = alloc::vec![0.0; cells * cells];
    for (idx, a) in state.amplitudes().iter().enumerate() {
        let (r, c) = (idx / side, idx % side);
        probs[(r >> shift) * cells + (c >> shift)] += a.norm_sqr();
    }
    Ok(probs)
}

/// Measures only the leading `n_f` qubits of each axis.
pub fn coarse_grained_sample(state: &StateVector, n_f: u32, shots: u64, seed: u64) -> Result<MeasurementRecord> {
    sample_weights(&coarse_cell_probabilities(state, n_f)?, shots, seed)
}

/// Ancilla tomography statistics: `shots` draws of a `+-1` observable whose
/// mean is `2 N w`. Returns `(estimate of w, standard error)`.
pub fn ancilla_tomography_sample(w: f64, dim: usize, shots: u64, seed: u64) -> Result<(f64, f64)> {
    let scale = 2.0 * dim as f64;
    let mean = scale * w;
    if !(mean.abs() <= 1.0 + 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "<sigma_z> = 2 N w = {mean} is outside [-1, 1]"
        )));
    }
    if shots == 0 {
        return Err(Error::InvalidParameter("at least one shot is required".into()));
    }
    let p_up = ((1.0 + mean) / 2.0).clamp(0.0, 1.0);
    let mut stream = rng::stream(seed);
    let mut acc = AncillaAccumulator::default();
    for _ in 0..shots {
        acc.push(rng::uniform(&mut stream) < p_up);
    }
    Ok((acc.mean() / scale, acc.stderr() / scale))
}

#[derive(Default)]
struct AncillaAccumulator {
    shots: u64,
    up: u64,
}

impl AncillaAccumulator {
    fn push(&mut self, up: bool) {
        self.shots += 1;
        self.up += up as u64;
    }

    fn mean(&self) -> f64 {
        (2.0 * self.up as f64 - self.shots as f64) / self.shots as f64
    }

    /// Standard error of the mean of the `+-1` outcomes.
    fn stderr(&self) -> f64 {
        if self.shots < 2 {
            return 0.0;
        }
        let n = self.shots as f64;
        let mean = self.mean();
        let var = (1.0 - mean * mean).max(0.0) * n / (n - 1.0);
        libm::sqrt(var / n)
    }
}

/// Number of ancilla shots until the standard error of the estimate of `w`
/// drops to `|w|` (sequential stopping, at least `min_shots`).
pub fn shots_to_resolve(w: f64, dim: usize, seed: u64, min_shots: u64, max_shots: u64) -> Result<u64> {
    let scale = 2.0 * dim as f64;
    let mean = scale * w;
    if !(mean.abs() <= 1.0) || w == 0.0 {
        return Err(Error::InvalidParameter(format!("cannot resolve w = {w} at N = {dim}")));
    }
    let p_up = (1.0 + mean) / 2.0;
    let mut stream = rng::stream(seed);
    let mut acc = AncillaAccumulator::default();
    while acc.shots < max_shots {
        acc.push(rng::uniform(&mut stream) < p_up);
        if acc.shots >= min_shots.max(2) && acc.stderr() / scale <= w.abs() {
            return Ok(acc.shots);
        }
    }
    Err(Error::Resource(format!("w = {w} not resolved within {max_shots} shots")))
}

/// Number of amplification rounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Iterations {
    /// `floor(pi / (4 asin sqrt(a)) - 1/2)`, the count that brings the
    /// target weight closest to one.
    Auto,
    Fixed(usize),
}

/// Rounds chosen by [`Iterations::Auto`] for initial weight `a`.
pub fn auto_iterations(a: f64) -> usize {
    let theta = libm::asin(libm::sqrt(a));
    let m = core::f64::consts::PI / (4.0 * theta) - 0.5;
    // Guard against m landing a few ulps below an exact integer.
    libm::floor(m + 1e-9).max(0.0) as usize
}

/// Target weight after `m` rounds, `sin^2((2m + 1) asin sqrt(a))`.
pub fn amplified_weight(a: f64, m: usize) -> f64 {
    let s = libm::sin((2 * m + 1) as f64 * libm::asin(libm::sqrt(a)));
    s * s
}

#[derive(Debug, Clone)]
pub struct AmplifyReport {
    pub iterations: usize,
    pub initial_weight: f64,
    pub final_weight: f64,
    pub state: StateVector,
    /// The region already held all the weight; nothing was done.
    pub saturated: bool,
}

/// Amplitude amplification of the subspace `{i : region(i)}`.
///
/// Each round applies `(I - 2P)` followed by the reflection
/// `V (I - 2|0><0|) V^-1 = I - 2|s><s|` about the initial state `s`, acting
/// directly on the amplitudes. Relative amplitudes inside the region are
/// preserved exactly.
pub fn amplitude_amplify(
    state: &StateVector,
    region: impl Fn(usize) -> bool,
    iterations: Iterations,
) -> Result<AmplifyReport> {
    let mask: Vec<bool> = (0..state.len()).map(&region).collect();
    let a: f64 = state
        .amplitudes()
        .iter()
        .zip(&mask)
        .filter(|(_, &m)| m)
        .map(|(v, _)| v.norm_sqr())
        .sum();
    if a <= 0.0 {
        return Err(Error::EmptyRegion);
    }
    if a >= 1.0 - 1e-15 {
        return Ok(AmplifyReport {
            iterations: 0,
            initial_weight: a,
            final_weight: a,
            state: state.clone(),
            saturated: true,
        });
    }
    let rounds = match iterations {
        Iterations::Auto => auto_iterations(a),
        Iterations::Fixed(m) => m,
    };
    let s = state.amplitudes();
    let mut psi = s.to_vec();
    for _ in 0..rounds {
        for (v, &m) in psi.iter_mut().zip(&mask) {
            if m {
                *v = -*v;
            }
        }
        let overlap: Complex64 = s.iter().zip(&psi).map(|(x, y)| x.conj() * y).sum();
        for (v, x) in psi.iter_mut().zip(s) {
            *v -= 2.0 * overlap * x;
        }
    }
    let final_weight = psi
        .iter()
        .zip(&mask)
        .filter(|(_, &m)| m)
        .map(|(v, _)| v.norm_sqr())
        .sum();
    Ok(AmplifyReport {
        iterations: rounds,
        initial_weight: a,
        final_weight,
        state: StateVector::from_unitary_output(psi, state.qubits()),
        saturated: false,
    })
}

/// A reconstructed field with its error against the original.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub field: Vec<f64>,
    /// `||field - original|| / ||original||`.
    pub l2_error: f64,
    /// Peak signal-to-noise ratio in dB with both fields mapped to 8 bits
    /// by the original's maximum; infinite for an exact reconstruction.
    pub psnr: f64,
}

fn score(original: &[f64], field: Vec<f64>) -> Reconstruction {
    let energy: f64 = original.iter().map(|v| v * v).sum();
    let diff: f64 = original.iter().zip(&field).map(|(a, b)| (a - b) * (a - b)).sum();
    let l2_error = if energy > 0.0 { libm::sqrt(diff / energy) } else { libm::sqrt(diff) };
    Reconstruction { psnr: psnr(original, &field), l2_error, field }
}

/// PSNR (dB, peak 255) after scaling both fields by `255 / max|original|`.
pub fn psnr(original: &[f64], field: &[f64]) -> f64 {
    let peak = original.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return f64::NAN;
    }
    let s = 255.0 / peak;
    let mse = original
        .iter()
        .zip(field)
        .map(|(a, b)| {
            let d = s * (a - b);
            d * d
        })
        .sum::<f64>()
        / original.len() as f64;
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * libm::log10(255.0 * 255.0 / mse)
    }
}

/// Keeps the `k` largest-magnitude coefficients (ties to the lowest index),
/// zeroes the rest and inverts the transform.
pub fn topk_reconstruct(coeffs: &WaveletCoeffs, k: usize) -> Result<Reconstruction> {
    let total = coeffs.values.len();
    if k == 0 || k > total {
        return Err(Error::InvalidParameter(format!("k = {k} outside 1..={total}")));
    }
    let original = coeffs.invert()?;
    let kept = keep_largest(&coeffs.values, k);
    let truncated = WaveletCoeffs { values: kept, ..coeffs.clone() };
    Ok(score(&original, truncated.invert()?))
}

pub(crate) fn keep_largest(values: &[f64], k: usize) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        values[b]
            .abs()
            .partial_cmp(&values[a].abs())
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut kept = alloc::vec![0.0; values.len()];
    for &i in &order[..k] {
        kept[i] = values[i];
    }
    kept
}

/// Samples pixel positions from `|a|^2` and rebuilds amplitudes as
/// `sqrt(count / samples)`, which has unit energy.
pub fn monte_carlo_reconstruct(amplitudes: &[f64], samples: u64, seed: u64) -> Result<Reconstruction> {
    let weights: Vec<f64> = amplitudes.iter().map(|a| a * a).collect();
    let record = sample_weights(&weights, samples, seed)?;
    let field = record.frequencies().into_iter().map(libm::sqrt).collect();
    Ok(score(amplitudes, field))
}
