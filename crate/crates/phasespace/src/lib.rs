//! File formats, parameter scans and the command-line front end for
//! [`phasespace_core`].
//!
//! - [`imageio`]: PGM (P2/P5) reading and writing, heatmaps, CSV grids.
//! - [`scan`]: IPR scans over `(K, n_q)` fanned out on a rayon pool.
//! - [`manifest`]: JSON run manifests with SHA-256 checksums.
//! - [`cli`]: the `phasespace` binary's commands.

pub mod cli;
mod error;
pub mod imageio;
pub mod manifest;
pub mod scan;

pub use error::{exit_code_for, Error, Result};
pub use phasespace_core;
