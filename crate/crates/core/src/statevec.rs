//! Normalized statevectors and the transforms every other module builds on.

use alloc::format;
use alloc::vec::Vec;

use crate::fft::FftPlan;
use crate::{log2_exact, Complex64, Error, Result};

pub use crate::fft::Direction as TransformDirection;

/// Tolerance used when validating that a vector is normalized.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Amplitudes of an `n_q`-qubit register, `2^n_q` entries with unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    qubits: u32,
}

impl StateVector {
    /// Validates length and normalization.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let qubits = log2_exact(amplitudes.len()).ok_or_else(|| {
            Error::InvalidDimension(format!(
                "statevector length {} is not a power of two",
                amplitudes.len()
            ))
        })?;
        let norm_sqr = norm_sqr(&amplitudes);
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidState(format!(
                "squared norm {norm_sqr} differs from 1"
            )));
        }
        Ok(Self { amplitudes, qubits })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let n2 = norm_sqr(&amplitudes);
        if !(n2 > 0.0) || !n2.is_finite() {
            return Err(Error::DegenerateInput("cannot normalize a zero vector".into()));
        }
        let s = 1.0 / libm::sqrt(n2);
        for a in amplitudes.iter_mut() {
            *a *= s;
        }
        Self::new(amplitudes)
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Computational basis state `|index>`.
    pub fn basis(qubits: u32, index: usize) -> Result<Self> {
        let len = 1usize << qubits;
        if index >= len {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for {qubits} qubits"
            )));
        }
        let mut amplitudes = alloc::vec![Complex64::new(0.0, 0.0); len];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes, qubits })
    }

    pub fn uniform(qubits: u32) -> Self {
        let len = 1usize << qubits;
        let a = 1.0 / libm::sqrt(len as f64);
        Self {
            amplitudes: alloc::vec![Complex64::new(a, 0.0); len],
            qubits,
        }
    }

    /// Random state with independent Gaussian real and imaginary parts.
    pub fn random(qubits: u32, seed: u64) -> Self {
        let mut rng = crate::rng::stream(seed);
        let len = 1usize << qubits;
        let amplitudes = (0..len)
            .map(|_| Complex64::new(gaussian(&mut rng), gaussian(&mut rng)))
            .collect();
        Self::normalized(amplitudes).expect("gaussian vector is nonzero")
    }

    /// Wraps amplitudes produced by a norm-preserving operation without
    /// re-checking the norm.
    pub(crate) fn from_unitary_output(amplitudes: Vec<Complex64>, qubits: u32) -> Self {
        debug_assert_eq!(amplitudes.len(), 1usize << qubits);
        Self { amplitudes, qubits }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn qubits(&self) -> u32 {
        self.qubits
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn conj(&self) -> Self {
        Self {
            amplitudes: self.amplitudes.iter().map(|a| a.conj()).collect(),
            qubits: self.qubits,
        }
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.len() != other.len() {
            return Err(Error::InvalidDimension(format!(
                "inner product of lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

pub(crate) fn norm_sqr(values: &[Complex64]) -> f64 {
    values.iter().map(|a| a.norm_sqr()).sum()
}

// Box-Muller; one value per call keeps the stream layout simple.
fn gaussian(rng: &mut crate::rng::Stream) -> f64 {
    let u1 = 1.0 - crate::rng::uniform(rng);
    let u2 = crate::rng::uniform(rng);
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * core::f64::consts::PI * u2)
}

/// Unitary DFT of the whole register.
pub fn qft(state: &StateVector, direction: TransformDirection) -> Result<StateVector> {
    partial_qft_blocks(state, state.len(), direction)
}

/// Independent `block_size`-point unitary DFTs on each contiguous block.
pub fn partial_qft_blocks(
    state: &StateVector,
    block_size: usize,
    direction: TransformDirection,
) -> Result<StateVector> {
    if block_size == 0 || block_size > state.len() || !state.len().is_multiple_of(block_size) {
        return Err(Error::InvalidDimension(format!(
            "block size {block_size} does not divide register length {}",
            state.len()
        )));
    }
    let plan = FftPlan::new(block_size)?;
    let mut out = state.amplitudes.clone();
    for block in out.chunks_exact_mut(block_size) {
        plan.process(block, direction);
    }
    Ok(StateVector::from_unitary_output(out, state.qubits))
}

/// Kronecker product; component `i * b.len() + j` is `a_i b_j`.
pub fn tensor_product(a: &StateVector, b: &StateVector) -> StateVector {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &ai in &a.amplitudes {
        out.extend(b.amplitudes.iter().map(|&bj| ai * bj));
    }
    StateVector::from_unitary_output(out, a.qubits + b.qubits)
}
