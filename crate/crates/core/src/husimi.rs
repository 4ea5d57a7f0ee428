//! Husimi-type phase-space distributions.
//!
//! The modified Husimi function uses box-shaped coherent states of width
//! `sqrt(N)` in momentum. Writing `n = j sqrt(N) + r`, the overlap with the
//! state centred on `theta0 = 2 pi l / sqrt(N)`, `n0 = j sqrt(N)` is
//!
//! ```text
//! H(l, j) = N^(-1/4) sum_r exp(+2 pi i l r / sqrt(N)) psi(j sqrt(N) + r)
//! ```
//!
//! i.e. an inverse `sqrt(N)`-point DFT inside each block of consecutive
//! momenta (the least significant half of the index bits).

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use crate::measurement::{amplitude_amplify, Iterations};
use crate::statevec::{partial_qft_blocks, tensor_product, StateVector, TransformDirection};
use crate::{cis, Complex64, Error, Result};

/// Largest qubit count for the two-register modulus construction, which
/// holds `N^2` amplitudes.
pub const MAX_MODULUS_QUBITS: u32 = 12;

/// Gate count of the partial QFT on `n_q / 2` qubits, `(n_q/4)(n_q/2 + 1)`.
/// Documentation metadata only; no circuit is simulated.
pub fn partial_qft_gate_count(qubits: u32) -> f64 {
    let q = qubits as f64;
    q / 4.0 * (q / 2.0 + 1.0)
}

/// `H(l, j)` on a `sqrt(N) x sqrt(N)` lattice, row-major in `(l, j)`:
/// `l` indexes the angle, `j` the momentum block.
#[derive(Debug, Clone, PartialEq)]
pub struct HusimiGrid {
    side: usize,
    values: Vec<Complex64>,
}

impl HusimiGrid {
    pub fn side(&self) -> usize {
        self.side
    }

    /// Source dimension `N = side^2`.
    pub fn dim(&self) -> usize {
        self.side * self.side
    }

    pub fn get(&self, l: usize, j: usize) -> Complex64 {
        self.values[l * self.side + j]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// The modified Husimi distribution `|H|^2`, row-major in `(l, j)`.
    pub fn distribution(&self) -> Vec<f64> {
        self.values.iter().map(|h| h.norm_sqr()).collect()
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.values.iter().map(|h| h.norm()).collect()
    }

    pub fn total(&self) -> f64 {
        self.values.iter().map(|h| h.norm_sqr()).sum()
    }

    /// `H` as a statevector on `n_q` qubits, index `l * side + j`.
    pub fn to_state(&self) -> StateVector {
        let qubits = self.dim().trailing_zeros();
        StateVector::from_unitary_output(self.values.clone(), qubits)
    }
}

fn block_side(qubits: u32) -> Result<usize> {
    if !qubits.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "modified Husimi transform needs an even qubit count, got {qubits}"
        )));
    }
    Ok(1usize << (qubits / 2))
}

/// Modified Husimi transform of a momentum-representation state.
pub fn modified_husimi(state: &StateVector) -> Result<HusimiGrid> {
    let side = block_side(state.qubits())?;
    let blocks = partial_qft_blocks(state, side, TransformDirection::Inverse)?;
    Ok(reshape_blocks(blocks.amplitudes(), side))
}

/// Block-transformed amplitudes (`j * side + l`) to `(l, j)` order.
fn reshape_blocks(amps: &[Complex64], side: usize) -> HusimiGrid {
    let mut values = alloc::vec![Complex64::new(0.0, 0.0); side * side];
    for j in 0..side {
        for l in 0..side {
            values[l * side + j] = amps[j * side + l];
        }
    }
    HusimiGrid { side, values }
}

/// Gaussian coherent-state lattice: width `a` (momentum units) and the
/// centre coordinates along each axis.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentStateParams {
    pub width: f64,
    pub theta_centers: Vec<f64>,
    pub n_centers: Vec<f64>,
}

impl CoherentStateParams {
    /// Regular lattice with `n_theta x n_n` centres covering one cell of an
    /// `N`-dimensional space.
    pub fn lattice(dim: usize, n_theta: usize, n_n: usize, width: f64) -> Self {
        Self {
            width,
            theta_centers: (0..n_theta).map(|i| TAU * i as f64 / n_theta as f64).collect(),
            n_centers: (0..n_n).map(|i| (i * dim) as f64 / n_n as f64).collect(),
        }
    }

    /// Width with equal resolution in angle and momentum cell units, `sqrt(N / 4pi)`.
    pub fn default_width(dim: usize) -> f64 {
        libm::sqrt(dim as f64 / (2.0 * TAU))
    }
}

/// Normalized Gaussian coherent state in the momentum representation,
/// wrapped periodically on the `N`-point ring.
pub fn coherent_state(dim: usize, theta0: f64, n0: f64, width: f64) -> Result<StateVector> {
    if !(width > 0.0) || !width.is_finite() {
        return Err(Error::InvalidParameter(format!("coherent-state width {width} must be positive")));
    }
    let nf = dim as f64;
    // Images beyond this many cells contribute below double precision.
    let reach = (libm::ceil(9.0 * width / nf) as i64).max(1);
    let amps = (0..dim)
        .map(|n| {
            let env: f64 = (-reach..=reach)
                .map(|img| {
                    let d = n as f64 - n0 + img as f64 * nf;
                    libm::exp(-d * d / (4.0 * width * width))
                })
                .sum();
            cis(-theta0 * n as f64) * env
        })
        .collect();
    StateVector::normalized(amps)
}

/// Gaussian Husimi distribution `|<phi_(theta0, n0)|psi>|^2` on the centre
/// lattice, row-major in `(theta, n)`.
pub fn gaussian_husimi(state: &StateVector, params: &CoherentStateParams) -> Result<Vec<f64>> {
    let dim = state.len();
    let mut out = Vec::with_capacity(params.theta_centers.len() * params.n_centers.len());
    for &theta0 in &params.theta_centers {
        for &n0 in &params.n_centers {
            let phi = coherent_state(dim, theta0, n0, params.width)?;
            out.push(phi.inner(state)?.norm_sqr());
        }
    }
    Ok(out)
}

/// Output of [`husimi_modulus_state`].
#[derive(Debug, Clone)]
pub struct ModulusState {
    /// Components `|H|^2 / sqrt(sum |H|^4)`, index `l * side + j`.
    pub state: StateVector,
    /// Weight of the diagonal subspace in `H (x) H*`, equal to `sum |H|^4`.
    pub diagonal_weight: f64,
    /// Amplification rounds used to boost the diagonal.
    pub amplification_iterations: usize,
    /// Nominal cost model: amplification rounds times `t` map iterations,
    /// which scales as `t sqrt(N)` for a spread-out distribution.
    pub nominal_cost: f64,
}

/// Builds a state whose amplitudes are the modified Husimi distribution.
///
/// Simulates two registers holding `psi` and `psi*`, block transforms on
/// both (`H (x) H*`), amplitude amplification of the diagonal
/// `theta = theta', n = n'`, and projection onto that diagonal. `t` is the
/// number of map iterations that produced `state` and only enters the cost
/// estimate.
pub fn husimi_modulus_state(state: &StateVector, t: usize) -> Result<ModulusState> {
    let q = state.qubits();
    let side = block_side(q)?;
    if q > MAX_MODULUS_QUBITS {
        return Err(Error::Resource(format!(
            "two-register modulus construction at {q} qubits needs 2^{} amplitudes (limit {MAX_MODULUS_QUBITS})",
            2 * q
        )));
    }
    let dim = side * side;
    let h = modified_husimi(state)?.to_state();
    // Second register: the conjugate transform applied to psi*.
    let h_conj = {
        let blocks = partial_qft_blocks(&state.conj(), side, TransformDirection::Forward)?;
        reshape_blocks(blocks.amplitudes(), side).to_state()
    };
    let doubled = tensor_product(&h, &h_conj);
    let on_diagonal = |idx: usize| idx / dim == idx % dim;
    let diagonal_weight: f64 = (0..dim).map(|i| doubled.amplitudes()[i * dim + i].norm_sqr()).sum();

    let (amplified, iterations) = if diagonal_weight >= 1.0 - 1e-12 {
        (doubled, 0)
    } else {
        let report = amplitude_amplify(&doubled, on_diagonal, Iterations::Auto)?;
        (report.state, report.iterations)
    };

    let mut diag: Vec<Complex64> = (0..dim).map(|i| amplified.amplitudes()[i * dim + i]).collect();
    // Remove the global phase left by the reflections so components are >= 0.
    let anchor = diag
        .iter()
        .copied()
        .fold(Complex64::new(0.0, 0.0), |best, v| if v.norm() > best.norm() { v } else { best });
    let phase = anchor.conj() / anchor.norm();
    for v in diag.iter_mut() {
        *v *= phase;
    }
    let state = StateVector::normalized(diag)?;
    Ok(ModulusState {
        state,
        diagonal_weight,
        amplification_iterations: iterations,
        nominal_cost: (iterations.max(1) * t.max(1)) as f64,
    })
}
