//! Parallel IPR scans over chaos parameter and system size.

use rayon::prelude::*;
use serde::Serialize;

use phasespace_core::analysis::{entropy, fit_scaling, ipr, wigner_xi_of_values, ScalingFit};
use phasespace_core::husimi::modified_husimi;
use phasespace_core::image::{encode_wavefunction, synthetic_image, Synthetic};
use phasespace_core::rotator::{evolve, initial_band_state, RotatorParams};
use phasespace_core::wavelet::{d4_forward_2d_full, default_tile_size, tiled_forward_2d};
use phasespace_core::wigner::{wigner_from_momentum, wigner_ipr};

use crate::error::{Error, Result};

/// What a scan measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Distribution {
    /// Wigner grid of the evolved band state; wavelet of the full `2N x 2N` grid.
    Wigner,
    /// Modified Husimi grid; wavelet of the moduli `|H|`.
    Husimi,
    /// Synthetic image at side `2^n_q`; `tile = 0` for the untiled transform,
    /// `None` for the default `sqrt(N)` tiling.
    Image {
        #[serde(serialize_with = "synthetic_name")]
        image: Synthetic,
        tile: Option<usize>,
        seed: u64,
    },
}

fn synthetic_name<S: serde::Serializer>(image: &Synthetic, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(image.name())
}

/// One scan measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub chaos: f64,
    pub n_q: u32,
    pub xi_raw: f64,
    pub xi_wavelet: f64,
    /// `xi_raw / xi_wavelet`.
    pub ratio: f64,
    /// Entropy (bits) of the raw weights.
    pub entropy_raw: f64,
    /// Entropy (bits) of the wavelet weights.
    pub entropy_wavelet: f64,
}

/// Evolves the band state for `steps` kicks and measures one grid point.
///
/// Weights: Wigner values use `W^2` for the entropy and
/// `xi = 1/(N^2 sum W^4)`; Husimi and image grids use squared moduli and the
/// plain participation ratio.
pub fn scan_point(dist: Distribution, chaos: f64, n_q: u32, steps: usize) -> Result<ScanRow> {
    let (xi_raw, xi_wavelet, raw_w, wav_w) = match dist {
        Distribution::Wigner => {
            let params = RotatorParams::new(n_q, chaos)?;
            let state = evolve(&initial_band_state(&params)?, &params, steps)?;
            let grid = wigner_from_momentum(&state)?;
            let full = grid.to_full();
            let coeffs = d4_forward_2d_full(&full)?;
            (
                wigner_ipr(&grid)?,
                wigner_xi_of_values(&coeffs.values, params.dim())?,
                squares(&full),
                squares(&coeffs.values),
            )
        }
        Distribution::Husimi => {
            let params = RotatorParams::new(n_q, chaos)?;
            let state = evolve(&initial_band_state(&params)?, &params, steps)?;
            let h = modified_husimi(&state)?;
            let raw = h.distribution();
            let coeffs = d4_forward_2d_full(&h.moduli())?;
            let wav = squares(&coeffs.values);
            (ipr(&raw)?, ipr(&wav)?, raw, wav)
        }
        Distribution::Image { image, tile, seed } => {
            let side = 1usize << n_q;
            let amps = encode_wavefunction(&synthetic_image(image, side, seed)?)?;
            let coeffs = match tile {
                Some(0) => d4_forward_2d_full(amps.values())?,
                Some(t) => tiled_forward_2d(amps.values(), t)?,
                None => tiled_forward_2d(amps.values(), default_tile_size(side)?)?,
            };
            let raw = squares(amps.values());
            let wav = squares(&coeffs.values);
            (ipr(&raw)?, ipr(&wav)?, raw, wav)
        }
    };
    Ok(ScanRow {
        chaos,
        n_q,
        xi_raw,
        xi_wavelet,
        ratio: xi_raw / xi_wavelet,
        entropy_raw: entropy(&raw_w)?,
        entropy_wavelet: entropy(&wav_w)?,
    })
}

fn squares(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| x * x).collect()
}

/// Runs every `(chaos, n_q)` cell on the rayon pool. Rows come back sorted
/// by `(chaos, n_q)` regardless of completion order.
pub fn run_scan(dist: Distribution, chaos: &[f64], n_q: &[u32], steps: usize) -> Result<Vec<ScanRow>> {
    if chaos.is_empty() || n_q.is_empty() {
        return Err(Error::Usage("scan needs at least one K and one n_q".into()));
    }
    let cells: Vec<(f64, u32)> = chaos.iter().flat_map(|&k| n_q.iter().map(move |&q| (k, q))).collect();
    let mut rows = cells
        .par_iter()
        .map(|&(k, q)| {
            log::debug!("scan cell K={k} n_q={q}");
            scan_point(dist, k, q, steps)
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.chaos.total_cmp(&b.chaos).then(a.n_q.cmp(&b.n_q)));
    Ok(rows)
}

/// Which column a fit uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    Raw,
    Wavelet,
    Ratio,
    EntropyRaw,
    EntropyWavelet,
}

impl Quantity {
    pub fn value(self, row: &ScanRow) -> f64 {
        match self {
            Quantity::Raw => row.xi_raw,
            Quantity::Wavelet => row.xi_wavelet,
            Quantity::Ratio => row.ratio,
            Quantity::EntropyRaw => row.entropy_raw.exp2(),
            Quantity::EntropyWavelet => row.entropy_wavelet.exp2(),
        }
    }
}

/// Log-log fit of one column for rows with the given `chaos` and
/// `n_q` within `range` (inclusive).
pub fn fit_rows(rows: &[ScanRow], chaos: f64, range: Option<(u32, u32)>, what: Quantity) -> Result<ScalingFit> {
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.chaos == chaos)
        .filter(|r| range.is_none_or(|(a, b)| (a..=b).contains(&r.n_q)))
        .map(|r| (r.n_q as f64, what.value(r)))
        .collect();
    Ok(fit_scaling(&points)?)
}

/// Writes rows as CSV with 17 significant digits.
pub fn write_scan_csv(path: impl AsRef<std::path::Path>, rows: &[ScanRow]) -> Result<()> {
    use crate::imageio::format_float as f;
    let mut w = csv::Writer::from_path(path.as_ref())?;
    w.write_record(["K", "n_q", "xi_raw", "xi_wavelet", "R", "S_raw", "S_wavelet"])?;
    for r in rows {
        w.write_record([
            f(r.chaos),
            r.n_q.to_string(),
            f(r.xi_raw),
            f(r.xi_wavelet),
            f(r.ratio),
            f(r.entropy_raw),
            f(r.entropy_wavelet),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path.as_ref(), e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_sorted_and_deterministic() {
        let a = run_scan(Distribution::Husimi, &[2.0, 0.5], &[6, 4], 3).unwrap();
        let keys: Vec<(f64, u32)> = a.iter().map(|r| (r.chaos, r.n_q)).collect();
        assert_eq!(keys, vec![(0.5, 4), (0.5, 6), (2.0, 4), (2.0, 6)]);
        assert_eq!(a, run_scan(Distribution::Husimi, &[2.0, 0.5], &[6, 4], 3).unwrap());
    }

    #[test]
    fn empty_range_is_usage_error() {
        let e = run_scan(Distribution::Wigner, &[0.5], &[], 1).unwrap_err();
        assert_eq!(e.category(), "usage");
    }

    #[test]
    fn wigner_point_is_consistent() {
        let r = scan_point(Distribution::Wigner, 0.5, 5, 10).unwrap();
        assert!((r.ratio - r.xi_raw / r.xi_wavelet).abs() < 1e-12);
        // xi is four times the participation ratio of W^2 when sum W^2 = 1/(2N)
        assert!(r.xi_raw <= 4.0 * r.entropy_raw.exp2() * (1.0 + 1e-9));
    }

    #[test]
    fn image_untiled_and_tiled() {
        let d = |tile| Distribution::Image { image: Synthetic::Portrait, tile, seed: 1 };
        let full = scan_point(d(Some(0)), 0.0, 6, 0).unwrap();
        let tiled = scan_point(d(None), 0.0, 6, 0).unwrap();
        assert_eq!(full.xi_raw, tiled.xi_raw);
        assert!(full.xi_wavelet <= tiled.xi_wavelet);
    }
}
