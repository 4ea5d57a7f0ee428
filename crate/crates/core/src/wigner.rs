//! Discrete Wigner function on the `2N x 2N` lattice.
//!
//! For a state `psi(m)` in the angle representation (`m = 0..N`),
//!
//! ```text
//! W(Th, n) = 1/(2N) sum_m exp(-2 pi i n (m - Th/2) / N) conj(psi(Th - m)) psi(m)
//! ```
//!
//! with `Th = 0..2N` indexing half-steps of the angle. `psi(Th - m)` vanishes
//! unless `0 <= Th - m < N`: the sum index comes from a non-modular adder
//! with one carry qubit, which is what makes `sum W^2 = 1/(2N)` on the full
//! lattice. Rows with `n >= N` follow from the same formula evaluated at `n`,
//! which gives `W(Th, n + N) = (-1)^Th W(Th, n)`; only the `2N x N` block is
//! stored.
//!
//! Two independent routes produce the grid: [`wigner_direct`] sums the
//! formula one column at a time, and [`wigner_register_pipeline`] simulates
//! the doubled quantum register (tensor product, independent evolution,
//! adder, partial transform, duplication qubit, phase correction) and reads
//! `W` off the final amplitudes.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::fft::{Direction, FftPlan};
use crate::rotator::{Floquet, RotatorParams};
use crate::statevec::{tensor_product, StateVector, TransformDirection, NORM_TOLERANCE};
use crate::{cis, Complex64, Error, Result};

/// Largest register size the doubled-register simulation accepts by default.
/// The final state has `4 N^2` amplitudes (64 MiB at 10 qubits).
pub const MAX_PIPELINE_QUBITS: u32 = 10;

/// Wigner function of an `N`-dimensional state, indexed `(Th, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    dim: usize,
    // W(Th, n) for n < N, row-major: index Th * N + n.
    half: Vec<f64>,
    imag_residue: f64,
}

impl WignerGrid {
    /// Builds a grid from a full `2N x 2N` row-major array (`Th * 2N + n`).
    ///
    /// Only the `n < N` half is kept; the caller is responsible for the
    /// other half obeying the sign rule.
    pub fn from_full(dim: usize, full: &[f64]) -> Result<Self> {
        if !crate::is_power_of_two(dim) || full.len() != 4 * dim * dim {
            return Err(Error::InvalidDimension(format!(
                "expected {} values for N = {dim}",
                4 * dim * dim
            )));
        }
        let half = (0..2 * dim)
            .flat_map(|th| full[th * 2 * dim..th * 2 * dim + dim].iter().copied())
            .collect();
        Ok(Self { dim, half, imag_residue: 0.0 })
    }

    /// Source dimension `N`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Side of the lattice, `2N`.
    pub fn side(&self) -> usize {
        2 * self.dim
    }

    pub fn get(&self, theta: usize, n: usize) -> f64 {
        let d = self.dim;
        if n < d {
            self.half[theta * d + n]
        } else if theta.is_multiple_of(2) {
            self.half[theta * d + n - d]
        } else {
            -self.half[theta * d + n - d]
        }
    }

    /// The whole `2N x 2N` lattice, row-major in `(Th, n)`.
    pub fn to_full(&self) -> Vec<f64> {
        let side = self.side();
        let mut out = Vec::with_capacity(side * side);
        for th in 0..side {
            out.extend((0..side).map(|n| self.get(th, n)));
        }
        out
    }

    /// Largest imaginary part discarded while building the grid.
    pub fn imag_residue(&self) -> f64 {
        self.imag_residue
    }

    pub fn total(&self) -> f64 {
        // Odd columns cancel between the two halves.
        2.0 * (0..self.side())
            .step_by(2)
            .map(|th| self.half[th * self.dim..(th + 1) * self.dim].iter().sum::<f64>())
            .sum::<f64>()
    }

    pub fn sum_sq(&self) -> f64 {
        2.0 * self.half.iter().map(|w| w * w).sum::<f64>()
    }

    pub fn sum_fourth(&self) -> f64 {
        2.0 * self.half.iter().map(|w| (w * w) * (w * w)).sum::<f64>()
    }

    pub fn max_abs(&self) -> f64 {
        self.half.iter().fold(0.0, |m, w| m.max(w.abs()))
    }
}

fn check_normalized(state: &StateVector) -> Result<()> {
    let n2 = state.norm_sqr();
    if (n2 - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::InvalidState(format!("squared norm {n2} differs from 1")));
    }
    Ok(())
}

/// `exp(-i pi r / N)` for an integer product `r = n * Th`, reduced exactly.
fn half_phase(product: usize, dim: usize, sign: f64) -> Complex64 {
    let r = (product % (2 * dim)) as f64;
    cis(sign * PI * r / dim as f64)
}

/// Direct evaluation of the Wigner sum; `state` is in the angle representation.
pub fn wigner_direct(state: &StateVector) -> Result<WignerGrid> {
    check_normalized(state)?;
    let dim = state.len();
    let psi = state.amplitudes();
    let plan = FftPlan::new(dim)?;
    let scale = 1.0 / (2.0 * libm::sqrt(dim as f64));
    let mut half = alloc::vec![0.0; 2 * dim * dim];
    let mut column = alloc::vec![Complex64::new(0.0, 0.0); dim];
    let mut imag_residue: f64 = 0.0;
    for th in 0..2 * dim {
        for (m, slot) in column.iter_mut().enumerate() {
            *slot = match th.checked_sub(m) {
                Some(j) if j < dim => psi[j].conj() * psi[m],
                _ => Complex64::new(0.0, 0.0),
            };
        }
        // sum_m exp(-2 pi i n m / N) f(m) = sqrt(N) * forward DFT
        plan.process(&mut column, Direction::Forward);
        for (n, v) in column.iter().enumerate() {
            let w = v * half_phase(n * th, dim, 1.0) * scale;
            imag_residue = imag_residue.max(w.im.abs());
            half[th * dim + n] = w.re;
        }
    }
    Ok(WignerGrid { dim, half, imag_residue })
}

/// Convenience: Wigner function of a momentum-representation state.
pub fn wigner_from_momentum(state: &StateVector) -> Result<WignerGrid> {
    wigner_direct(&crate::statevec::qft(state, TransformDirection::Forward)?)
}

/// Inverse participation ratio `xi = 1 / (N^2 sum W^4)` over the full lattice.
pub fn wigner_ipr(grid: &WignerGrid) -> Result<f64> {
    crate::analysis::wigner_xi(grid.sum_fourth(), grid.dim())
}

/// Output of the doubled-register simulation.
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub grid: WignerGrid,
    /// `sqrt(2N) sum W(Th, n) |Th>|n>`, index `Th * 2N + n`.
    pub final_state: StateVector,
}

/// Simulates the register-level Wigner construction for `U^t psi0`.
///
/// `psi0` is in the momentum representation.
pub fn wigner_register_pipeline(
    psi0: &StateVector,
    params: &RotatorParams,
    t: usize,
) -> Result<PipelineOutput> {
    wigner_register_pipeline_with_limit(psi0, params, t, MAX_PIPELINE_QUBITS)
}

pub fn wigner_register_pipeline_with_limit(
    psi0: &StateVector,
    params: &RotatorParams,
    t: usize,
    max_qubits: u32,
) -> Result<PipelineOutput> {
    check_normalized(psi0)?;
    if psi0.len() != params.dim() {
        return Err(Error::InvalidDimension(format!(
            "state length {} does not match rotator dimension {}",
            psi0.len(),
            params.dim()
        )));
    }
    let q = psi0.qubits();
    if q > max_qubits {
        return Err(Error::Resource(format!(
            "doubled-register simulation at {q} qubits needs 2^{} amplitudes (limit {max_qubits} qubits)",
            2 * q + 2
        )));
    }
    let dim = psi0.len();
    let floquet = Floquet::new(params);
    let plan = FftPlan::new(dim)?;

    // |psi0> (x) |psi0*>, index i * N + j; first register is the row.
    let mut reg = tensor_product(psi0, &psi0.conj()).into_amplitudes();

    // Evolve: U on the first register, U* on the second.
    for_each_register(&mut reg, dim, Register::Second, |row| floquet.evolve_in_place(row, t, true));
    for_each_register(&mut reg, dim, Register::First, |col| floquet.evolve_in_place(col, t, false));

    // Angle representation. The conjugate register uses the conjugate transform.
    for_each_register(&mut reg, dim, Register::First, |col| plan.process(col, Direction::Forward));
    for_each_register(&mut reg, dim, Register::Second, |row| plan.process(row, Direction::Inverse));

    // Carry qubit on the first register: |th>|th'> -> |th + th'>|th'>.
    let mut summed = alloc::vec![Complex64::new(0.0, 0.0); 2 * dim * dim];
    for th in 0..dim {
        for thp in 0..dim {
            summed[(th + thp) * dim + thp] = reg[th * dim + thp];
        }
    }
    drop(reg);

    // QFT of the second register, kernel exp(+2 pi i n th' / N). The
    // amplitudes become 2 sqrt(N) W(Th, n) exp(+i pi n Th / N).
    for row in summed.chunks_exact_mut(dim) {
        plan.process(row, Direction::Inverse);
    }

    // Duplication qubit (Hadamard on |0>) as the most significant bit of n,
    // then the phase correction exp(-i pi n Th / N) over all 2N values of n.
    let side = 2 * dim;
    let inv_sqrt2 = core::f64::consts::FRAC_1_SQRT_2;
    let mut out = alloc::vec![Complex64::new(0.0, 0.0); side * side];
    for th in 0..side {
        for n in 0..side {
            let amp = summed[th * dim + n % dim] * inv_sqrt2;
            out[th * side + n] = amp * half_phase(n * th, dim, -1.0);
        }
    }
    drop(summed);

    let read_scale = 1.0 / libm::sqrt(side as f64);
    let mut half = alloc::vec![0.0; side * dim];
    let mut imag_residue: f64 = 0.0;
    for th in 0..side {
        for n in 0..dim {
            let w = out[th * side + n] * read_scale;
            imag_residue = imag_residue.max(w.im.abs());
            half[th * dim + n] = w.re;
        }
    }
    for th in 0..side {
        for n in dim..side {
            let w = out[th * side + n] * read_scale;
            imag_residue = imag_residue.max(w.im.abs());
        }
    }
    let final_state = StateVector::from_unitary_output(out, 2 * q + 2);
    Ok(PipelineOutput {
        grid: WignerGrid { dim, half, imag_residue },
        final_state,
    })
}

#[derive(Clone, Copy)]
enum Register {
    First,
    Second,
}

/// Applies `op` to every fiber of one register of an `N x N` amplitude array.
fn for_each_register(
    buf: &mut [Complex64],
    dim: usize,
    which: Register,
    mut op: impl FnMut(&mut [Complex64]),
) {
    match which {
        Register::Second => {
            for row in buf.chunks_exact_mut(dim) {
                op(row);
            }
        }
        Register::First => {
            let mut fiber = alloc::vec![Complex64::new(0.0, 0.0); dim];
            for j in 0..dim {
                for i in 0..dim {
                    fiber[i] = buf[i * dim + j];
                }
                op(&mut fiber);
                for i in 0..dim {
                    buf[i * dim + j] = fiber[i];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rotator::{evolve, initial_band_state};
    use crate::statevec::qft;
    use crate::wavelet::d4_forward_2d_full;

    /// Straight evaluation of the defining sum at one lattice point.
    fn brute(psi: &[Complex64], th: usize, n: usize) -> Complex64 {
        let dim = psi.len();
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..dim {
            if th < m || th - m >= dim {
                continue;
            }
            let phase = -2.0 * PI * n as f64 * (m as f64 - th as f64 / 2.0) / dim as f64;
            acc += cis(phase) * psi[th - m].conj() * psi[m];
        }
        acc / (2.0 * dim as f64)
    }

    #[test]
    fn matches_brute_force_sum() {
        let s = StateVector::random(3, 5);
        let g = wigner_direct(&s).unwrap();
        for th in 0..16 {
            for n in 0..16 {
                let b = brute(s.amplitudes(), th, n);
                assert!(b.im.abs() < 1e-14);
                assert!((g.get(th, n) - b.re).abs() < 1e-14, "({th}, {n})");
            }
        }
        assert!(g.imag_residue() < 1e-14);
    }

    #[test]
    fn angle_delta() {
        let n = 8;
        for m0 in [0usize, 3, 7] {
            let g = wigner_direct(&StateVector::basis(3, m0).unwrap()).unwrap();
            for th in 0..2 * n {
                for k in 0..n {
                    let expect = if th == 2 * m0 { 1.0 / 16.0 } else { 0.0 };
                    assert!((g.get(th, k) - expect).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn sum_rules_and_bound() {
        for (q, seed) in [(3u32, 1u64), (4, 2), (5, 3), (6, 4)] {
            let s = StateVector::random(q, seed);
            let g = wigner_direct(&s).unwrap();
            let dim = s.len() as f64;
            assert!((g.total() - 1.0).abs() < 1e-10);
            assert!((g.to_full().iter().sum::<f64>() - 1.0).abs() < 1e-10);
            assert!((g.sum_sq() - 1.0 / (2.0 * dim)).abs() < 1e-12);
            assert!(g.max_abs() <= 1.0 / (2.0 * dim) + 1e-12);
        }
    }

    #[test]
    fn even_columns_give_probabilities() {
        let s = StateVector::random(4, 17);
        let g = wigner_direct(&s).unwrap();
        for q in 0..16 {
            let col: f64 = (0..16).map(|n| g.get(2 * q, n)).sum();
            assert!((col - s.amplitudes()[q].norm_sqr() / 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn duplication_sign_rule() {
        let s = StateVector::random(3, 8);
        let g = wigner_direct(&s).unwrap();
        for th in 0..16 {
            for n in 0..8 {
                let b = brute(s.amplitudes(), th, n + 8).re;
                assert!((g.get(th, n + 8) - b).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn rejects_unnormalized() {
        let s = StateVector::from_unitary_output(alloc::vec![Complex64::new(1.0, 0.0); 4], 2);
        assert!(matches!(wigner_direct(&s), Err(Error::InvalidState(_))));
    }

    #[test]
    fn pipeline_matches_direct() {
        for q in 3..=5u32 {
            for k in [0.5, 2.0] {
                let params = RotatorParams::new(q, k).unwrap();
                for t in [0usize, 3] {
                    let psi0 = StateVector::random(q, 100 + q as u64);
                    let out = wigner_register_pipeline(&psi0, &params, t).unwrap();
                    let direct = wigner_from_momentum(&evolve(&psi0, &params, t).unwrap()).unwrap();
                    let full_p = out.grid.to_full();
                    let full_d = direct.to_full();
                    let err = full_p.iter().zip(&full_d).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
                    assert!(err < 1e-12, "q={q} K={k} t={t}: {err}");
                    assert!(out.grid.imag_residue() < 1e-12);
                    assert!((out.final_state.norm_sqr() - 1.0).abs() < 1e-10);
                    let side = 2 * params.dim();
                    let scale = libm::sqrt(side as f64);
                    for (a, w) in out.final_state.amplitudes().iter().zip(&full_d) {
                        assert!((a.re - scale * w).abs() < 1e-12 && a.im.abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn pipeline_momentum_delta_is_real() {
        let params = RotatorParams::new(3, 1.0).unwrap();
        let out = wigner_register_pipeline(&StateVector::basis(3, 2).unwrap(), &params, 0).unwrap();
        assert!(out.final_state.amplitudes().iter().all(|a| a.im.abs() < 1e-14));
    }

    #[test]
    fn pipeline_resource_limit() {
        let params = RotatorParams::new(4, 1.0).unwrap();
        let s = StateVector::uniform(4);
        assert!(matches!(
            wigner_register_pipeline_with_limit(&s, &params, 0, 3),
            Err(Error::Resource(_))
        ));
        let bad = RotatorParams::new(5, 1.0).unwrap();
        assert!(matches!(wigner_register_pipeline(&s, &bad, 0), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn wavelet_parseval_on_grid() {
        let params = RotatorParams::new(5, 2.0).unwrap();
        let s = evolve(&initial_band_state(&params).unwrap(), &params, 20).unwrap();
        let g = wigner_direct(&qft(&s, TransformDirection::Forward).unwrap()).unwrap();
        let c = d4_forward_2d_full(&g.to_full()).unwrap();
        assert!((c.energy() - g.sum_sq()).abs() < 1e-10);
        let xi = wigner_ipr(&g).unwrap();
        // Cauchy-Schwarz on 4N^2 entries with sum W^2 = 1/(2N) caps xi at 16 N^2.
        assert!(xi > 1.0 && xi <= 16.0 * 32.0 * 32.0 + 1e-6);
    }
}
