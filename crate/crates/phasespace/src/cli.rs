//! Command-line front end. Every command writes its data files plus a
//! `manifest.json` into `--out`; progress goes to the log (stderr).

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use phasespace_core::analysis::{ipr, wigner_xi_of_values};
use phasespace_core::husimi::modified_husimi;
use phasespace_core::image::{encode_wavefunction, quantize_heatmap, synthetic_image, GrayImage, Synthetic};
use phasespace_core::measurement::{
    amplified_weight, amplitude_amplify, auto_iterations, coarse_grained_sample, monte_carlo_reconstruct,
    topk_reconstruct, Iterations,
};
use phasespace_core::rotator::{evolve, initial_band_state, RotatorParams};
use phasespace_core::statevec::StateVector;
use phasespace_core::stdmap::{evolve_ensemble, histogram_density, ClassicalEnsemble, DEFAULT_ENSEMBLE_SIZE};
use phasespace_core::wavelet::{d4_forward_2d_full, default_tile_size, tiled_forward_2d};
use phasespace_core::wigner::{wigner_from_momentum, wigner_ipr, wigner_register_pipeline, WignerGrid};

use crate::error::{Error, Result};
use crate::imageio::{load_pgm, render_heatmap, save_pgm, write_counts_csv, write_grid_csv};
use crate::manifest::write_manifest;
use crate::scan::{fit_rows, run_scan, write_scan_csv, Distribution, Quantity};

#[derive(Debug, Parser)]
#[command(name = "phasespace", version, about = "Phase-space distributions of the quantum kicked rotator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classical standard-map density after t iterations.
    Classical(ClassicalArgs),
    /// Wigner function of the evolved band state.
    Wigner(WignerArgs),
    /// Modified Husimi function of the evolved band state.
    Husimi(HusimiArgs),
    /// IPR scaling scan over K and n_q.
    Scan(ScanArgs),
    /// Image reconstruction from a limited measurement budget.
    Reconstruct(ReconstructArgs),
    /// Amplitude amplification of a rectangular phase-space region.
    Amplify(AmplifyArgs),
}

/// Inclusive integer range written `a:b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Span {
    pub start: u32,
    pub end: u32,
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = match s.split_once(':') {
            Some(pair) => pair,
            None => (s, s),
        };
        let start: u32 = a.trim().parse().map_err(|_| format!("bad range start in {s:?}"))?;
        let end: u32 = b.trim().parse().map_err(|_| format!("bad range end in {s:?}"))?;
        Ok(Span { start, end })
    }
}

impl Span {
    pub fn values(self) -> Vec<u32> {
        (self.start..=self.end).collect()
    }
}

#[derive(Debug, Args, Serialize)]
pub struct Physics {
    /// Chaos parameter K = kT.
    #[arg(long = "K")]
    pub chaos: f64,
    /// Number of qubits; the Hilbert space has N = 2^nq states.
    #[arg(long)]
    pub nq: u32,
    /// Number of map iterations.
    #[arg(long)]
    pub t: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct ClassicalArgs {
    #[arg(long = "K")]
    pub chaos: f64,
    #[arg(long)]
    pub t: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_ENSEMBLE_SIZE)]
    pub ensemble: usize,
    /// Histogram bins per axis.
    #[arg(long, default_value_t = 256)]
    pub bins: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct WignerArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub physics: Physics,
    /// Build the grid by simulating the doubled-register construction.
    #[arg(long)]
    pub pipeline: bool,
    /// Also sample the leading nf qubits per axis of the Wigner state.
    #[arg(long, requires = "shots")]
    pub nf: Option<u32>,
    #[arg(long, requires = "nf")]
    pub shots: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct HusimiArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub physics: Physics,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanKind {
    Wigner,
    Husimi,
    Image,
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    pub distribution: ScanKind,
    /// Comma-separated K values; required except for images.
    #[arg(long = "K", value_delimiter = ',')]
    pub chaos: Vec<f64>,
    /// Qubit range `a:b`; for images the side is 2^nq.
    #[arg(long)]
    pub nq: Span,
    /// Map iterations; required except for images.
    #[arg(long)]
    pub t: Option<usize>,
    /// Synthetic image for image scans.
    #[arg(long, default_value = "portrait")]
    pub image: String,
    /// Tile side for image scans; 0 for the untiled transform. Default: sqrt(N) tiles.
    #[arg(long)]
    pub tile: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// n_q range used for the fits.
    #[arg(long = "fit-range")]
    pub fit_range: Option<Span>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Topk,
    Montecarlo,
}

#[derive(Debug, Args, Serialize)]
pub struct ReconstructArgs {
    /// A PGM file, or `synthetic:NAME` (portrait, texture, spots, fractal).
    #[arg(long)]
    pub image: String,
    /// Side of synthetic images.
    #[arg(long, default_value_t = 128)]
    pub side: usize,
    #[arg(long)]
    pub method: Method,
    /// Budget: kept coefficients (topk) or samples (montecarlo).
    #[arg(long)]
    pub k: u64,
    /// Tile side for topk; omit for the untiled transform.
    #[arg(long)]
    pub tile: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    Wigner,
    Husimi,
}

#[derive(Debug, Args, Serialize)]
pub struct AmplifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub physics: Physics,
    #[arg(long, default_value = "wigner")]
    pub distribution: Target,
    /// Region `a0:a1,m0:m1` (inclusive): angle-index range, then momentum-index range.
    #[arg(long)]
    pub region: String,
    /// Fixed number of rounds; default picks the optimal count.
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Classical(a) => classical(&a),
        Command::Wigner(a) => wigner(&a),
        Command::Husimi(a) => husimi(&a),
        Command::Scan(a) => scan(&a),
        Command::Reconstruct(a) => reconstruct(&a),
        Command::Amplify(a) => amplify(&a),
    }
}

fn out_dir(path: &Path) -> Result<&Path> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))?;
    Ok(path)
}

fn evolved_band(p: &Physics) -> Result<(RotatorParams, StateVector)> {
    let params = RotatorParams::new(p.nq, p.chaos)?;
    let psi0 = initial_band_state(&params)?;
    log::info!("evolving N = {} for t = {} at K = {}", params.dim(), p.t, p.chaos);
    let state = evolve(&psi0, &params, p.t)?;
    Ok((params, state))
}

/// Rows of an image are `n` from the top (largest first), columns are angles.
fn phase_space_picture(values: &[f64], n_theta: usize, n_p: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    for ip in (0..n_p).rev() {
        out.extend((0..n_theta).map(|it| values[it * n_p + ip]));
    }
    out
}

fn classical(a: &ClassicalArgs) -> Result<()> {
    let dir = out_dir(&a.out)?;
    let e = ClassicalEnsemble::reference_band(a.ensemble, a.chaos, a.seed)?;
    let e = evolve_ensemble(&e, a.t);
    let grid = histogram_density(&e, a.bins, a.bins)?;
    let csv = dir.join("density.csv");
    let pgm = dir.join("density.pgm");
    write_grid_csv(&csv, ["theta_bin", "p_bin", "density"], a.bins, a.bins, &grid.bins)?;
    render_heatmap(&phase_space_picture(&grid.bins, a.bins, a.bins), a.bins, a.bins, false, &pgm)?;
    let results = json!({ "momentum_spread": e.momentum_spread(), "total": grid.total() });
    println!("momentum spread {:.6}", e.momentum_spread());
    write_manifest(dir, "classical", a, &results, &[csv, pgm])?;
    Ok(())
}

fn wigner(a: &WignerArgs) -> Result<()> {
    let dir = out_dir(&a.out)?;
    let (params, grid) = if a.pipeline {
        let params = RotatorParams::new(a.physics.nq, a.physics.chaos)?;
        let psi0 = initial_band_state(&params)?;
        log::info!("simulating the doubled register at n_q = {}", params.qubits());
        (params, wigner_register_pipeline(&psi0, &params, a.physics.t)?.grid)
    } else {
        let (params, state) = evolved_band(&a.physics)?;
        (params, wigner_from_momentum(&state)?)
    };
    let side = grid.side();
    let full = grid.to_full();
    let csv = dir.join("wigner.csv");
    let pgm = dir.join("wigner.pgm");
    write_grid_csv(&csv, ["Theta", "n", "W"], side, side, &full)?;
    render_heatmap(&phase_space_picture(&full, side, side), side, side, true, &pgm)?;
    let mut outputs = vec![csv, pgm];
    let xi = wigner_ipr(&grid)?;
    let results = json!({
        "xi": xi,
        "sum": grid.total(),
        "sum_sq": grid.sum_sq(),
        "sum_sq_times_2N": grid.sum_sq() * 2.0 * params.dim() as f64,
        "max_abs": grid.max_abs(),
        "bound": 1.0 / (2.0 * params.dim() as f64),
        "imag_residue": grid.imag_residue(),
    });
    println!("xi {xi:.6}");
    println!(
        "sum W = {:.12}  sum W^2 * 2N = {:.12}  max|W| * 2N = {:.12}",
        grid.total(),
        grid.sum_sq() * 2.0 * params.dim() as f64,
        grid.max_abs() * 2.0 * params.dim() as f64
    );
    if let (Some(nf), Some(shots)) = (a.nf, a.shots) {
        let state = wigner_state(&grid)?;
        let rec = coarse_grained_sample(&state, nf, shots, a.seed)?;
        let counts = dir.join("coarse_counts.csv");
        write_counts_csv(&counts, &rec.counts)?;
        outputs.push(counts);
    }
    write_manifest(dir, "wigner", a, &results, &outputs)?;
    Ok(())
}

/// `sqrt(2N) sum W |Th>|n>` as a statevector.
fn wigner_state(grid: &WignerGrid) -> Result<StateVector> {
    let scale = (grid.side() as f64).sqrt();
    let full: Vec<f64> = grid.to_full().iter().map(|w| w * scale).collect();
    Ok(StateVector::normalized(
        full.iter().map(|&v| phasespace_core::Complex64::new(v, 0.0)).collect(),
    )?)
}

fn husimi(a: &HusimiArgs) -> Result<()> {
    let dir = out_dir(&a.out)?;
    let (_, state) = evolved_band(&a.physics)?;
    let h = modified_husimi(&state)?;
    let side = h.side();
    let dist = h.distribution();
    let csv = dir.join("husimi.csv");
    let pgm = dir.join("husimi.pgm");
    write_grid_csv(&csv, ["l", "j", "H2"], side, side, &dist)?;
    render_heatmap(&phase_space_picture(&dist, side, side), side, side, false, &pgm)?;
    let xi = ipr(&dist)?;
    let coeffs = d4_forward_2d_full(&h.moduli())?;
    let wav: Vec<f64> = coeffs.values.iter().map(|c| c * c).collect();
    let xi_w = ipr(&wav)?;
    println!("xi {xi:.6}  xi_wavelet {xi_w:.6}  total {:.12}", h.total());
    let results = json!({ "xi": xi, "xi_wavelet": xi_w, "total": h.total() });
    write_manifest(dir, "husimi", a, &results, &[csv, pgm])?;
    Ok(())
}

fn scan(a: &ScanArgs) -> Result<()> {
    let dir = out_dir(&a.out)?;
    if a.nq.start > a.nq.end {
        return Err(Error::Usage(format!("empty n_q range {}:{}", a.nq.start, a.nq.end)));
    }
    let physics = || -> Result<(Vec<f64>, usize)> {
        match (a.chaos.is_empty(), a.t) {
            (false, Some(t)) => Ok((a.chaos.clone(), t)),
            _ => Err(Error::Usage("wigner and husimi scans need --K and --t".into())),
        }
    };
    let (dist, chaos, steps) = match a.distribution {
        ScanKind::Wigner => {
            let (k, t) = physics()?;
            (Distribution::Wigner, k, t)
        }
        ScanKind::Husimi => {
            let (k, t) = physics()?;
            (Distribution::Husimi, k, t)
        }
        ScanKind::Image => {
            let image = Synthetic::from_name(&a.image)
                .ok_or_else(|| Error::Usage(format!("unknown synthetic image {:?}", a.image)))?;
            (Distribution::Image { image, tile: a.tile, seed: a.seed }, vec![0.0], 0)
        }
    };
    let qubits: Vec<u32> = match a.distribution {
        // the modified Husimi grid needs an even qubit count
        ScanKind::Husimi => a.nq.values().into_iter().filter(|q| q % 2 == 0).collect(),
        _ => a.nq.values(),
    };
    let rows = run_scan(dist, &chaos, &qubits, steps)?;
    let csv = dir.join("scan.csv");
    write_scan_csv(&csv, &rows)?;
    let range = a.fit_range.map(|s| (s.start, s.end));
    let mut fits = Vec::new();
    for &k in &chaos {
        let mut entry = json!({ "K": k });
        for (name, q) in [
            ("raw", Quantity::Raw),
            ("wavelet", Quantity::Wavelet),
            ("ratio", Quantity::Ratio),
            ("entropy_raw", Quantity::EntropyRaw),
            ("entropy_wavelet", Quantity::EntropyWavelet),
        ] {
            match fit_rows(&rows, k, range, q) {
                Ok(fit) => {
                    println!("K={k} {name}: exponent {:.4} +- {:.4}", fit.exponent, fit.stderr);
                    entry[name] = json!({ "exponent": fit.exponent, "stderr": fit.stderr, "points": fit.points });
                }
                Err(e) => log::warn!("K={k} {name}: no fit ({e})"),
            }
        }
        fits.push(entry);
    }
    write_manifest(dir, "scan", a, &json!({ "fits": fits }), &[csv])?;
    Ok(())
}

fn load_image(source: &str, side: usize) -> Result<GrayImage> {
    match source.strip_prefix("synthetic:") {
        Some(name) => {
            let kind = Synthetic::from_name(name)
                .ok_or_else(|| Error::Usage(format!("unknown synthetic image {name:?}")))?;
            Ok(synthetic_image(kind, side, 1)?)
        }
        None => Ok(load_pgm(source)?.image),
    }
}

fn reconstruct(a: &ReconstructArgs) -> Result<()> {
    let dir = out_dir(&a.out)?;
    let image = load_image(&a.image, a.side)?;
    let (w, h) = (image.width(), image.height());
    if w != h {
        return Err(phasespace_core::Error::InvalidDimension(format!("image must be square, got {w}x{h}")).into());
    }
    let amps = encode_wavefunction(&image)?;
    let rec = match a.method {
        Method::Topk => {
            let coeffs = match a.tile {
                None | Some(0) => d4_forward_2d_full(amps.values())?,
                Some(t) => tiled_forward_2d(amps.values(), t)?,
            };
            topk_reconstruct(&coeffs, a.k as usize)?
        }
        Method::Montecarlo => monte_carlo_reconstruct(amps.values(), a.k, a.seed)?,
    };
    let pgm = dir.join("reconstruction.pgm");
    save_pgm(&quantize_heatmap(&rec.field, w, h, false)?, &pgm)?;
    println!("psnr {:.4} dB  l2 {:.6}", rec.psnr, rec.l2_error);
    let results = json!({ "psnr": rec.psnr, "l2_error": rec.l2_error, "default_tile": default_tile_size(w).ok() });
    write_manifest(dir, "reconstruct", a, &results, &[pgm])?;
    Ok(())
}

fn parse_region(s: &str) -> Result<(Span, Span)> {
    let (r, c) = s
        .split_once(',')
        .ok_or_else(|| Error::Usage(format!("region {s:?} is not of the form r0:r1,c0:c1")))?;
    let r: Span = r.parse().map_err(Error::Usage)?;
    let c: Span = c.parse().map_err(Error::Usage)?;
    Ok((r, c))
}

fn amplify(a: &AmplifyArgs) -> Result<()> {
    let dir = out_dir(&a.out)?;
    let (rows, cols) = parse_region(&a.region)?;
    let (_, psi) = evolved_band(&a.physics)?;
    let (state, side, signed) = match a.distribution {
        Target::Wigner => {
            let grid = wigner_from_momentum(&psi)?;
            (wigner_state(&grid)?, grid.side(), true)
        }
        Target::Husimi => {
            let h = modified_husimi(&psi)?;
            (h.to_state(), h.side(), false)
        }
    };
    let inside = |idx: usize| {
        let (r, c) = ((idx / side) as u32, (idx % side) as u32);
        (rows.start..=rows.end).contains(&r) && (cols.start..=cols.end).contains(&c)
    };
    let iterations = a.iterations.map_or(Iterations::Auto, Iterations::Fixed);
    let report = amplitude_amplify(&state, inside, iterations)?;
    // Relative amplitudes inside the region must be unchanged.
    let anchor = (0..state.len())
        .filter(|&i| inside(i))
        .max_by(|&i, &j| state.amplitudes()[i].norm().total_cmp(&state.amplitudes()[j].norm()))
        .expect("nonempty region");
    let scale = report.state.amplitudes()[anchor] / state.amplitudes()[anchor];
    let ratio_error = (0..state.len())
        .filter(|&i| inside(i))
        .map(|i| (report.state.amplitudes()[i] - state.amplitudes()[i] * scale).norm() / scale.norm())
        .fold(0.0f64, f64::max);
    let values: Vec<f64> = report.state.amplitudes().iter().map(|v| v.re).collect();
    let pgm = dir.join("amplified.pgm");
    render_heatmap(&phase_space_picture(&values, side, side), side, side, signed, &pgm)?;
    let results = json!({
        "initial_weight": report.initial_weight,
        "final_weight": report.final_weight,
        "closed_form_weight": amplified_weight(report.initial_weight, report.iterations),
        "iterations": report.iterations,
        "auto_iterations": auto_iterations(report.initial_weight),
        "saturated": report.saturated,
        "max_relative_ratio_error": ratio_error,
    });
    println!(
        "a = {:.6e}  iterations {}  final weight {:.12}  ratio error {:.3e}",
        report.initial_weight, report.iterations, report.final_weight, ratio_error
    );
    let xi_w = wigner_xi_of_values(&values, side / 2).ok();
    log::debug!("amplified-state xi {xi_w:?}");
    write_manifest(dir, "amplify", a, &results, &[pgm])?;
    Ok(())
}
