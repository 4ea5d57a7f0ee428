//! PGM images, heatmaps and CSV grid dumps.

use std::fs;
use std::io::Write;
use std::path::Path;

use phasespace_core::image::{quantize_heatmap, GrayImage};

use crate::error::{Error, Result};

/// A PGM parse failure at a byte offset into the file.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("byte {offset}: {message}")]
pub struct PgmError {
    pub offset: usize,
    pub message: String,
}

fn fail<T>(offset: usize, message: impl Into<String>) -> Result<T, PgmError> {
    Err(PgmError { offset, message: message.into() })
}

/// A decoded PGM file. Pixel values are kept as stored, so they never
/// exceed `maxval`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pgm {
    pub image: GrayImage,
    pub maxval: u8,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u64, PgmError> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return match self.bytes.get(start) {
                None => fail(start, format!("unexpected end of file, expected {what}")),
                Some(&b) => fail(start, format!("expected {what}, found byte 0x{b:02x}")),
            };
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .map_or_else(|| fail(start, format!("{what} is out of range")), Ok)
    }
}

/// Parses a P2 (ASCII) or P5 (binary) graymap with `maxval <= 255`.
pub fn decode_pgm(bytes: &[u8]) -> Result<Pgm, PgmError> {
    let binary = match bytes.get(..2) {
        Some(b"P5") => true,
        Some(b"P2") => false,
        _ => return fail(0, "missing P2/P5 magic number"),
    };
    let mut cur = Cursor { bytes, pos: 2 };
    let width = cur.number("width")? as usize;
    let height = cur.number("height")? as usize;
    cur.skip_space_and_comments();
    let maxval_at = cur.pos;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return fail(maxval_at, format!("zero image size {width}x{height}"));
    }
    if maxval == 0 || maxval > 255 {
        return fail(maxval_at, format!("unsupported maxval {maxval} (need 1..=255)"));
    }
    let count = width * height;
    let pixels = if binary {
        match bytes.get(cur.pos) {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            _ => return fail(cur.pos, "expected a single whitespace byte before the payload"),
        }
        let payload = &bytes[cur.pos..];
        if payload.len() < count {
            return fail(
                cur.pos,
                format!("truncated payload: expected {count} bytes, found {}", payload.len()),
            );
        }
        let pixels = payload[..count].to_vec();
        if let Some(i) = pixels.iter().position(|&p| p as u64 > maxval) {
            return fail(cur.pos + i, format!("pixel value {} exceeds maxval {maxval}", pixels[i]));
        }
        pixels
    } else {
        let mut pixels = Vec::with_capacity(count);
        for i in 0..count {
            cur.skip_space_and_comments();
            if cur.pos >= bytes.len() {
                return fail(
                    cur.pos,
                    format!("truncated payload: expected {count} values, found {i}"),
                );
            }
            let at = cur.pos;
            let v = cur.number("pixel value")?;
            if v > maxval {
                return fail(at, format!("pixel value {v} exceeds maxval {maxval}"));
            }
            pixels.push(v as u8);
        }
        pixels
    };
    let image = GrayImage::new(width, height, pixels).map_err(|e| PgmError { offset: 0, message: e.to_string() })?;
    Ok(Pgm { image, maxval: maxval as u8 })
}

/// Binary P5 encoding.
pub fn encode_pgm(image: &GrayImage, maxval: u8) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n{}\n", image.width(), image.height(), maxval).into_bytes();
    out.extend_from_slice(image.pixels());
    out
}

pub fn load_pgm(path: impl AsRef<Path>) -> Result<Pgm> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_pgm(&bytes).map_err(|source| Error::Pgm { path: path.to_path_buf(), source })
}

/// Writes a P5 file with `maxval = 255`.
pub fn save_pgm(image: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    save_pgm_with_maxval(image, 255, path)
}

pub fn save_pgm_with_maxval(image: &GrayImage, maxval: u8, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_pgm(image, maxval)).map_err(|e| Error::io(path, e))
}

/// Renders a row-major grid as a grayscale PGM (see [`quantize_heatmap`]).
pub fn render_heatmap(
    values: &[f64],
    width: usize,
    height: usize,
    signed: bool,
    path: impl AsRef<Path>,
) -> Result<GrayImage> {
    let image = quantize_heatmap(values, width, height, signed)?;
    save_pgm(&image, path)?;
    Ok(image)
}

/// Formats a float with 17 significant digits.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Dumps a row-major `rows x cols` grid as `(row, col, value)` lines.
pub fn write_grid_csv(
    path: impl AsRef<Path>,
    header: [&str; 3],
    rows: usize,
    cols: usize,
    values: &[f64],
) -> Result<()> {
    if values.len() != rows * cols {
        return Err(phasespace_core::Error::InvalidDimension(format!(
            "{} values for a {rows}x{cols} grid",
            values.len()
        ))
        .into());
    }
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(std::io::BufWriter::new(file));
    w.write_record(header)?;
    for r in 0..rows {
        for c in 0..cols {
            w.write_record([r.to_string(), c.to_string(), format_float(values[r * cols + c])])?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Reads back a file written by [`write_grid_csv`].
pub fn read_grid_csv(path: impl AsRef<Path>) -> Result<(usize, usize, Vec<f64>)> {
    let path = path.as_ref();
    let mut reader = csv::Reader::from_path(path)?;
    let mut cells = Vec::new();
    for record in reader.records() {
        let record = record?;
        let parse_err = || {
            Error::from(phasespace_core::Error::InvalidData(format!(
                "{}: malformed row {:?}",
                path.display(),
                record
            )))
        };
        let r: usize = record.get(0).and_then(|s| s.parse().ok()).ok_or_else(parse_err)?;
        let c: usize = record.get(1).and_then(|s| s.parse().ok()).ok_or_else(parse_err)?;
        let v: f64 = record.get(2).and_then(|s| s.parse().ok()).ok_or_else(parse_err)?;
        cells.push((r, c, v));
    }
    let rows = cells.iter().map(|c| c.0 + 1).max().unwrap_or(0);
    let cols = cells.iter().map(|c| c.1 + 1).max().unwrap_or(0);
    let mut values = vec![0.0; rows * cols];
    for (r, c, v) in cells {
        values[r * cols + c] = v;
    }
    Ok((rows, cols, values))
}

/// Writes `(outcome, count)` lines in increasing outcome order.
pub fn write_counts_csv(path: impl AsRef<Path>, counts: &std::collections::BTreeMap<usize, u64>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["outcome", "count"])?;
    for (k, v) in counts {
        w.write_record([k.to_string(), v.to_string()])?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Writes a text file, creating parent directories.
pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
}
