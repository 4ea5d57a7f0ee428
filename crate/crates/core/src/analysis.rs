//! Participation ratios, entropies and log-log scaling fits.
//!
//! Weight conventions: statevectors and Husimi grids use squared moduli,
//! image wavelet coefficients use `c^2`, and Wigner grids (raw or
//! wavelet-transformed) use `xi = 1 / (N^2 sum W^4)`.

use alloc::format;

use crate::{Error, Result};

pub use crate::wigner::wigner_ipr;

/// Participation ratio `(sum w)^2 / sum w^2`; scale invariant in `w`.
pub fn ipr(weights: &[f64]) -> Result<f64> {
    check_weights(weights)?;
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(Error::DegenerateInput("participation ratio of all-zero weights".into()));
    }
    // Normalize first so the ratio does not depend on the overall scale.
    let sum_sq: f64 = weights
        .iter()
        .map(|w| {
            let p = w / total;
            p * p
        })
        .sum();
    Ok(1.0 / sum_sq)
}

/// Participation ratio of amplitudes, using `|a|^2` as weights.
pub fn ipr_of_amplitudes(values: &[f64]) -> Result<f64> {
    let weights: alloc::vec::Vec<f64> = values.iter().map(|v| v * v).collect();
    ipr(&weights)
}

/// `xi = 1 / (N^2 sum W^4)` given the fourth-power sum of a Wigner-type grid.
pub fn wigner_xi(sum_fourth: f64, dim: usize) -> Result<f64> {
    if !(sum_fourth > 0.0) {
        return Err(Error::DegenerateInput("Wigner IPR of an all-zero grid".into()));
    }
    let n = dim as f64;
    Ok(1.0 / (n * n * sum_fourth))
}

/// [`wigner_xi`] for a raw array of values (e.g. wavelet coefficients of a grid).
pub fn wigner_xi_of_values(values: &[f64], dim: usize) -> Result<f64> {
    wigner_xi(values.iter().map(|w| (w * w) * (w * w)).sum(), dim)
}

/// Shannon entropy in bits, `-sum w log2 w`.
///
/// Weights are renormalized internally; zero entries contribute nothing.
pub fn entropy(weights: &[f64]) -> Result<f64> {
    check_weights(weights)?;
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(Error::DegenerateInput("entropy of all-zero weights".into()));
    }
    let s: f64 = weights
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| {
            let p = w / total;
            -p * libm::log2(p)
        })
        .sum();
    Ok(s.max(0.0))
}

/// Whether `weights` sum to one within `tol`. Callers use this to decide
/// whether to warn before [`entropy`] renormalizes.
pub fn is_normalized(weights: &[f64], tol: f64) -> bool {
    (weights.iter().sum::<f64>() - 1.0).abs() <= tol
}

fn check_weights(weights: &[f64]) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::DegenerateInput("empty weight vector".into()));
    }
    if let Some(w) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
        return Err(Error::InvalidParameter(format!("weight {w} is negative or not finite")));
    }
    Ok(())
}

/// `R = raw / wavelet`.
pub fn ipr_ratio(raw_ipr: f64, wavelet_ipr: f64) -> Result<f64> {
    if !(wavelet_ipr > 0.0) || !wavelet_ipr.is_finite() {
        return Err(Error::DegenerateInput(format!(
            "wavelet IPR {wavelet_ipr} must be positive"
        )));
    }
    Ok(raw_ipr / wavelet_ipr)
}

/// Both component-count estimates: the participation ratio and `2^S`.
pub fn ipr_entropy_compare(weights: &[f64]) -> Result<(f64, f64)> {
    Ok((ipr(weights)?, libm::exp2(entropy(weights)?)))
}

/// Least-squares line through `(n_q, log2 xi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFit {
    /// `alpha` in `xi ~ N^alpha`.
    pub exponent: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub stderr: f64,
    pub range: (f64, f64),
    pub points: usize,
}

pub fn fit_scaling(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "scaling fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some((_, xi)) = points.iter().find(|(_, xi)| !(*xi > 0.0) || !xi.is_finite()) {
        return Err(Error::InvalidParameter(format!("IPR value {xi} must be positive")));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| libm::log2(p.1)).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if !(sxx > 0.0) {
        return Err(Error::InsufficientData("scaling fit needs distinct n_q values".into()));
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (libm::log2(p.1) - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = points
        .iter()
        .map(|p| {
            let r = libm::log2(p.1) - (intercept + slope * p.0);
            r * r
        })
        .sum();
    let stderr = libm::sqrt(rss / (n - 2.0) / sxx);
    let lo = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    Ok(ScalingFit {
        exponent: slope,
        intercept,
        stderr,
        range: (lo, hi),
        points: points.len(),
    })
}
