//! PGM images, label-map renderings and CSV sweep reports.
//!
//! Reads binary (P5) and plain (P2) graymaps with `maxval <= 255`; writes
//! P5 with `maxval = 255`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::eval::SweepReport;
use crate::image::{GrayImage, LabelMap};

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.into(),
        }
    }

    /// Skips whitespace and `#` comments (which run to end of line).
    fn skip_blank(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n' && c != b'\r') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u32> {
        self.skip_blank();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(match self.bytes.get(self.pos) {
                None => self.error(format!("unexpected end of data, expected {what}")),
                Some(b) => self.error(format!("expected {what}, found byte 0x{b:02x}")),
            });
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::Parse {
                offset: start,
                message: format!("{what} is too large"),
            })
    }
}

/// Parses a P2 or P5 graymap from memory.
pub fn decode_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let binary = match bytes.get(..2) {
        Some(b"P5") => true,
        Some(b"P2") => false,
        Some(magic) if magic[0] == b'P' => {
            return Err(Error::UnsupportedFormat(format!(
                "netpbm magic {} is not a graymap",
                String::from_utf8_lossy(magic)
            )))
        }
        _ => {
            return Err(Error::UnsupportedFormat(
                "missing P2/P5 magic number".into(),
            ))
        }
    };
    let mut cur = Cursor { bytes, pos: 2 };
    if !cur.bytes.get(2).is_some_and(|b| b.is_ascii_whitespace() || *b == b'#') {
        return Err(cur.error("expected whitespace after magic number"));
    }
    let width = cur.number("width")? as usize;
    let height = cur.number("height")? as usize;
    let maxval_at = cur.pos;
    let maxval = cur.number("maxval")?;
    if maxval == 0 {
        return Err(Error::Parse {
            offset: maxval_at,
            message: "maxval must be positive".into(),
        });
    }
    if maxval > 255 {
        return Err(Error::UnsupportedFormat(format!(
            "maxval {maxval} exceeds 255 (16-bit graymaps are not supported)"
        )));
    }
    if width == 0 || height == 0 {
        return Err(cur.error(format!("image dimensions {width}x{height} must be positive")));
    }
    let n = width
        .checked_mul(height)
        .ok_or_else(|| cur.error("image dimensions overflow"))?;

    let pixels = if binary {
        match cur.bytes.get(cur.pos) {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            _ => return Err(cur.error("expected a single whitespace byte before raster")),
        }
        let raster = cur
            .bytes
            .get(cur.pos..cur.pos.saturating_add(n))
            .ok_or_else(|| Error::Parse {
                offset: bytes.len(),
                message: format!("raster needs {n} bytes, found {}", bytes.len() - cur.pos),
            })?;
        if let Some(i) = raster.iter().position(|&p| u32::from(p) > maxval) {
            return Err(Error::Parse {
                offset: cur.pos + i,
                message: format!("sample {} exceeds maxval {maxval}", raster[i]),
            });
        }
        raster.to_vec()
    } else {
        let mut pixels = Vec::with_capacity(n);
        for _ in 0..n {
            cur.skip_blank();
            let at = cur.pos;
            let value = cur.number("sample")?;
            if value > maxval {
                return Err(Error::Parse {
                    offset: at,
                    message: format!("sample {value} exceeds maxval {maxval}"),
                });
            }
            pixels.push(value as u8);
        }
        pixels
    };
    GrayImage::new(width, height, pixels)
}

/// Binary P5 encoding with `maxval = 255`.
pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.pixels());
    out
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    decode_pgm(&fs::read(path).map_err(io_err(path))?)
}

pub fn write_pgm(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_pgm(img)).map_err(io_err(path))
}

/// Display intensity of label `i` out of `v`: `round(i * 255 / (v - 1))`.
pub fn label_intensity(label: usize, clusters: usize) -> u8 {
    if clusters < 2 {
        return 0;
    }
    (label as f64 * 255.0 / (clusters - 1) as f64).round() as u8
}

/// Spreads labels over the full intensity range for viewing.
pub fn render_labels(labels: &LabelMap, clusters: usize) -> Result<GrayImage> {
    labels.check_range(clusters.max(1))?;
    let pixels = labels
        .labels()
        .iter()
        .map(|&l| label_intensity(l, clusters))
        .collect();
    GrayImage::new(labels.width(), labels.height(), pixels)
}

/// Inverse of [`render_labels`].
pub fn labels_from_rendering(img: &GrayImage, clusters: usize) -> Result<LabelMap> {
    let scale = clusters.saturating_sub(1) as f64 / 255.0;
    let labels = img
        .pixels()
        .iter()
        .map(|&p| (f64::from(p) * scale).round() as usize)
        .collect();
    LabelMap::new(img.width(), img.height(), labels)
}

pub fn write_label_map(labels: &LabelMap, clusters: usize, path: impl AsRef<Path>) -> Result<()> {
    write_pgm(&render_labels(labels, clusters)?, path)
}

/// Column header of [`format_csv`].
pub const CSV_HEADER: &str = "method,noise_percent,seed,accuracy,iterations,wall_ms";

/// One LF-terminated line per row after the header. Failed rows leave the
/// accuracy, iteration and timing fields empty.
pub fn format_csv(report: &SweepReport) -> String {
    let mut out = String::with_capacity(32 * (report.rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &report.rows {
        match &row.outcome {
            Ok((accuracy, iterations)) => writeln!(
                out,
                "{},{},{},{:.4},{},{}",
                row.method, row.noise_percent, row.seed, accuracy, iterations, row.wall_ms
            ),
            Err(_) => writeln!(out, "{},{},{},,,", row.method, row.noise_percent, row.seed),
        }
        .expect("writing to a String");
    }
    out
}

pub fn write_csv(report: &SweepReport, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_csv(report)).map_err(io_err(path))
}
