//! Quantum kicked rotator `U = exp(-i k cos(theta)) exp(-i T n^2 / 2)`.
//!
//! States are held in the momentum representation, `n in {0, ..., N-1}`.
//! One step multiplies the free-rotation phases, moves to the angle grid
//! `theta_j = 2 pi j / N` with a forward transform, applies the kick and
//! transforms back. With `T = 2 pi / N` and even `N` the free phase is
//! `N`-periodic in `n`, so a single momentum cell is self-consistent.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use crate::fft::{Direction, FftPlan};
use crate::statevec::StateVector;
use crate::{cis, Complex64, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatorParams {
    qubits: u32,
    chaos: f64,
    period: f64,
}

impl RotatorParams {
    /// `T = 2 pi / N`, the single-cell regime.
    pub fn new(qubits: u32, chaos: f64) -> Result<Self> {
        let n = dim_for(qubits)?;
        Self::with_period(qubits, chaos, TAU / n as f64)
    }

    pub fn with_period(qubits: u32, chaos: f64, period: f64) -> Result<Self> {
        dim_for(qubits)?;
        if !(period > 0.0) || !period.is_finite() {
            return Err(Error::InvalidParameter(format!("period T = {period} must be positive")));
        }
        if !(chaos >= 0.0) || !chaos.is_finite() {
            return Err(Error::InvalidParameter(format!("chaos parameter K = {chaos} must be >= 0")));
        }
        Ok(Self { qubits, chaos, period })
    }

    pub fn qubits(&self) -> u32 {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        1usize << self.qubits
    }

    /// `K = k T`.
    pub fn chaos(&self) -> f64 {
        self.chaos
    }

    /// Effective Planck constant `T`.
    pub fn period(&self) -> f64 {
        self.period
    }

    /// Kick strength `k = K / T`.
    pub fn kick(&self) -> f64 {
        self.chaos / self.period
    }
}

fn dim_for(qubits: u32) -> Result<usize> {
    if qubits == 0 || qubits > 30 {
        return Err(Error::InvalidParameter(format!("qubit count {qubits} outside 1..=30")));
    }
    Ok(1usize << qubits)
}

/// Momentum band `0 <= n < N/8` with equal weights.
pub fn initial_band_state(params: &RotatorParams) -> Result<StateVector> {
    if params.qubits < 3 {
        return Err(Error::InvalidParameter(format!(
            "band state needs at least 3 qubits, got {}",
            params.qubits
        )));
    }
    let n = params.dim();
    let width = n / 8;
    let a = 1.0 / libm::sqrt(width as f64);
    let mut amps = alloc::vec![Complex64::new(0.0, 0.0); n];
    for v in amps.iter_mut().take(width) {
        *v = Complex64::new(a, 0.0);
    }
    Ok(StateVector::from_unitary_output(amps, params.qubits))
}

/// Precomputed phases and transform plan for repeated steps.
#[derive(Debug, Clone)]
pub struct Floquet {
    params: RotatorParams,
    free: Vec<Complex64>,
    kick: Vec<Complex64>,
    plan: FftPlan,
}

impl Floquet {
    pub fn new(params: &RotatorParams) -> Self {
        let n = params.dim();
        let t = params.period;
        let k = params.kick();
        // n^2 reduced mod 2N keeps the phase argument small for large N.
        let two_n = 2 * n as u128;
        let exact_cell = (t - TAU / n as f64).abs() < 1e-15 * t;
        let free = (0..n)
            .map(|m| {
                let sq = ((m as u128 * m as u128) % two_n) as f64;
                let phase = if exact_cell {
                    -PI * sq / n as f64
                } else {
                    -t * (m as f64) * (m as f64) / 2.0
                };
                cis(phase)
            })
            .collect();
        let kick = (0..n)
            .map(|j| cis(-k * libm::cos(TAU * j as f64 / n as f64)))
            .collect();
        Self {
            params: *params,
            free,
            kick,
            plan: FftPlan::new(n).expect("power of two by construction"),
        }
    }

    pub fn params(&self) -> &RotatorParams {
        &self.params
    }

    /// One step in place on a momentum-representation buffer.
    ///
    /// With `conjugate` the complex-conjugate operator `U*` is applied, which
    /// maps `psi*` to `(U psi)*`.
    pub fn apply(&self, buf: &mut [Complex64], conjugate: bool) {
        let (to_angle, to_momentum) = if conjugate {
            (Direction::Inverse, Direction::Forward)
        } else {
            (Direction::Forward, Direction::Inverse)
        };
        for (v, f) in buf.iter_mut().zip(&self.free) {
            *v *= if conjugate { f.conj() } else { *f };
        }
        self.plan.process(buf, to_angle);
        for (v, f) in buf.iter_mut().zip(&self.kick) {
            *v *= if conjugate { f.conj() } else { *f };
        }
        self.plan.process(buf, to_momentum);
    }

    pub fn evolve_in_place(&self, buf: &mut [Complex64], t: usize, conjugate: bool) {
        for _ in 0..t {
            self.apply(buf, conjugate);
        }
    }
}

fn check_dim(state: &StateVector, params: &RotatorParams) -> Result<()> {
    if state.len() != params.dim() {
        return Err(Error::InvalidDimension(format!(
            "state length {} does not match rotator dimension {}",
            state.len(),
            params.dim()
        )));
    }
    Ok(())
}

pub fn step(state: &StateVector, params: &RotatorParams, conjugate: bool) -> Result<StateVector> {
    evolve_with(state, params, 1, conjugate)
}

pub fn evolve(state: &StateVector, params: &RotatorParams, t: usize) -> Result<StateVector> {
    evolve_with(state, params, t, false)
}

/// `t` applications of `U` (or `U*` when `conjugate` is set).
pub fn evolve_with(
    state: &StateVector,
    params: &RotatorParams,
    t: usize,
    conjugate: bool,
) -> Result<StateVector> {
    check_dim(state, params)?;
    let floquet = Floquet::new(params);
    let mut buf = state.amplitudes().to_vec();
    floquet.evolve_in_place(&mut buf, t, conjugate);
    Ok(StateVector::from_unitary_output(buf, state.qubits()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::{qft, TransformDirection};

    #[test]
    fn band_state_shapes() {
        let s = initial_band_state(&RotatorParams::new(3, 1.0).unwrap()).unwrap();
        assert_eq!(s.amplitudes()[0], Complex64::new(1.0, 0.0));
        let s = initial_band_state(&RotatorParams::new(5, 1.0).unwrap()).unwrap();
        for (i, a) in s.amplitudes().iter().enumerate() {
            let expected = if i < 4 { 0.5 } else { 0.0 };
            assert!((a.re - expected).abs() < 1e-15 && a.im == 0.0);
        }
        for q in 3..12 {
            let s = initial_band_state(&RotatorParams::new(q, 1.0).unwrap()).unwrap();
            assert!((s.norm_sqr() - 1.0).abs() < 1e-14);
        }
        assert!(initial_band_state(&RotatorParams::new(2, 1.0).unwrap()).is_err());
    }

    #[test]
    fn free_rotation_without_kick() {
        let params = RotatorParams::with_period(5, 0.0, 0.37).unwrap();
        for n0 in [0usize, 3, 17, 31] {
            let s = StateVector::basis(5, n0).unwrap();
            let out = step(&s, &params, false).unwrap();
            let expected = cis(-0.37 * (n0 * n0) as f64 / 2.0);
            for (i, a) in out.amplitudes().iter().enumerate() {
                if i == n0 {
                    assert!((a - expected).norm() < 1e-12);
                } else {
                    assert!(a.norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn step_preserves_norm() {
        let params = RotatorParams::new(7, 0.5).unwrap();
        let s = initial_band_state(&params).unwrap();
        let out = step(&s, &params, false).unwrap();
        assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn free_phase_is_cell_periodic() {
        let params = RotatorParams::new(6, 1.0).unwrap();
        let n = params.dim() as f64;
        for m in [0.0, 1.0, 5.0, 33.0, 63.0] {
            let a = cis(-params.period() * m * m / 2.0);
            let b = cis(-params.period() * (m + n) * (m + n) / 2.0);
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn dense_matrix_oracle() {
        // U = F^dagger K F P, built as explicit 16x16 matrices.
        let params = RotatorParams::new(4, 1.3).unwrap();
        let n = 16;
        let psi = StateVector::random(4, 11);
        let f = |j: usize, m: usize| cis(-TAU * (j * m) as f64 / n as f64) / 4.0;
        let mut u = alloc::vec![Complex64::new(0.0, 0.0); n * n];
        for r in 0..n {
            for c in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    let kick = cis(-params.kick() * libm::cos(TAU * j as f64 / n as f64));
                    acc += f(j, r).conj() * kick * f(j, c);
                }
                let free = cis(-params.period() * (c * c) as f64 / 2.0);
                u[r * n + c] = acc * free;
            }
        }
        let out = step(&psi, &params, false).unwrap();
        for r in 0..n {
            let expected: Complex64 = (0..n).map(|c| u[r * n + c] * psi.amplitudes()[c]).sum();
            assert!((out.amplitudes()[r] - expected).norm() < 1e-10);
        }
    }

    #[test]
    fn conjugate_step_is_conjugate_of_step() {
        let params = RotatorParams::new(6, 2.0).unwrap();
        let psi = StateVector::random(6, 5);
        let a = step(&psi.conj(), &params, true).unwrap();
        let b = step(&psi, &params, false).unwrap().conj();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!((x - y).norm() < 1e-13);
        }
    }

    #[test]
    fn zero_steps_is_identity() {
        let params = RotatorParams::new(5, 0.9).unwrap();
        let psi = StateVector::random(5, 1);
        assert_eq!(evolve(&psi, &params, 0).unwrap(), psi);
    }

    #[test]
    fn dimension_mismatch() {
        let params = RotatorParams::new(5, 0.9).unwrap();
        let psi = StateVector::random(4, 1);
        assert!(matches!(step(&psi, &params, false), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn kick_is_diagonal_in_angle_representation() {
        // T chosen so the free phase is trivial: one step is then the kick alone.
        let params = RotatorParams::with_period(4, 0.8, TAU * 2.0).unwrap();
        let psi = StateVector::random(4, 2);
        let out = step(&psi, &params, false).unwrap();
        let before = qft(&psi, TransformDirection::Forward).unwrap();
        let after = qft(&out, TransformDirection::Forward).unwrap();
        for j in 0..16 {
            let kick = cis(-params.kick() * libm::cos(TAU * j as f64 / 16.0));
            let free_check = before.amplitudes()[j] * kick;
            // free phases with T = 4 pi: exp(-2 pi i n^2) = 1
            assert!((after.amplitudes()[j] - free_check).norm() < 1e-10);
        }
    }
}
