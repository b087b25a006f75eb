//! Image file formats: PBM (P1/P4), PGM (P2/P5, binarized by threshold) and
//! CSV matrices.
//!
//! PBM pixel value 1 maps to phase 1. A CSV matrix is row-major, comma
//! separated, without header, one LF-terminated line per image row.

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use statdecim_core::BinaryImage;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    PbmAscii,
    PbmBinary,
    PgmAscii,
    PgmBinary,
    Csv,
}

impl Format {
    /// Format implied by a file extension; `.pbm` and `.pgm` map to the
    /// binary variants.
    pub fn from_path(path: &Path) -> Option<Format> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "pbm" => Some(Format::PbmBinary),
            "pgm" => Some(Format::PgmBinary),
            "csv" => Some(Format::Csv),
            _ => None,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Format::PbmAscii | Format::PbmBinary => "pbm",
            Format::PgmAscii | Format::PgmBinary => "pgm",
            Format::Csv => "csv",
        }
    }

    fn magic(self) -> Option<&'static [u8; 2]> {
        match self {
            Format::PbmAscii => Some(b"P1"),
            Format::PbmBinary => Some(b"P4"),
            Format::PgmAscii => Some(b"P2"),
            Format::PgmBinary => Some(b"P5"),
            Format::Csv => None,
        }
    }

    fn is_pgm(self) -> bool {
        matches!(self, Format::PgmAscii | Format::PgmBinary)
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::PbmAscii => "pbm-ascii",
            Format::PbmBinary => "pbm-binary",
            Format::PgmAscii => "pgm-ascii",
            Format::PgmBinary => "pgm-binary",
            Format::Csv => "csv",
        })
    }
}

/// Detects the format from the leading magic number; anything that is not a
/// PBM/PGM magic is treated as CSV.
pub fn detect(bytes: &[u8]) -> Format {
    match bytes.get(..2) {
        Some(b"P1") => Format::PbmAscii,
        Some(b"P4") => Format::PbmBinary,
        Some(b"P2") => Format::PgmAscii,
        Some(b"P5") => Format::PgmBinary,
        _ => Format::Csv,
    }
}

fn format_error(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

/// Cursor over a PNM header and ASCII raster.
struct Tokens<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u64> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(format_error(format!("malformed header: expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| format_error(format!("malformed header: {what} out of range")))
    }

    // Single whitespace byte separating the header from a binary raster.
    fn raster_start(&mut self) -> Result<usize> {
        match self.bytes.get(self.pos) {
            Some(b) if b.is_ascii_whitespace() => Ok(self.pos + 1),
            _ => Err(format_error("malformed header: missing whitespace before raster")),
        }
    }
}

/// Decodes an image, detecting the format. PGM input requires `threshold`;
/// gray values `>= threshold` become phase 1.
pub fn decode(bytes: &[u8], threshold: Option<f64>) -> Result<(BinaryImage, Format)> {
    let format = detect(bytes);
    Ok((decode_as(bytes, format, threshold)?, format))
}

/// Decodes an image stored in `format`.
pub fn decode_as(bytes: &[u8], format: Format, threshold: Option<f64>) -> Result<BinaryImage> {
    if format == Format::Csv {
        return decode_csv(bytes);
    }
    let magic = format.magic().expect("PNM formats carry a magic number");
    if bytes.get(..2) != Some(&magic[..]) {
        return Err(format_error(format!("expected magic {}", String::from_utf8_lossy(magic))));
    }
    let threshold = match (format.is_pgm(), threshold) {
        (true, None) => return Err(Error::MissingThreshold),
        (_, t) => t,
    };
    let mut tokens = Tokens { bytes, pos: 2 };
    let cols = tokens.number("width")? as usize;
    let rows = tokens.number("height")? as usize;
    if rows == 0 || cols == 0 {
        return Err(format_error("malformed header: zero dimension"));
    }
    let maxval = if format.is_pgm() {
        let v = tokens.number("maxval")?;
        if !(1..=65535).contains(&v) {
            return Err(format_error("malformed header: maxval must be in 1..=65535"));
        }
        v
    } else {
        1
    };
    let count = rows * cols;
    let mut pixels = Vec::with_capacity(count);
    match format {
        Format::PbmAscii => {
            while pixels.len() < count {
                tokens.skip_space_and_comments();
                match tokens.bytes.get(tokens.pos) {
                    Some(b'0') => pixels.push(0),
                    Some(b'1') => pixels.push(1),
                    Some(&b) => {
                        return Err(format_error(format!("pixel value {:?} outside {{0,1}}", char::from(b))));
                    }
                    None => return Err(format_error("raster ends early")),
                }
                tokens.pos += 1;
            }
        }
        Format::PbmBinary => {
            let start = tokens.raster_start()?;
            let stride = cols.div_ceil(8);
            let raster = bytes
                .get(start..start + stride * rows)
                .ok_or_else(|| format_error("raster ends early"))?;
            for row in raster.chunks_exact(stride) {
                pixels.extend((0..cols).map(|n| (row[n / 8] >> (7 - n % 8)) & 1));
            }
        }
        Format::PgmAscii => {
            let t = threshold.unwrap();
            for _ in 0..count {
                let v = tokens.number("gray value")?;
                if v > maxval {
                    return Err(format_error(format!("gray value {v} exceeds maxval {maxval}")));
                }
                pixels.push(u8::from(v as f64 >= t));
            }
        }
        Format::PgmBinary => {
            let t = threshold.unwrap();
            let start = tokens.raster_start()?;
            let width = if maxval > 255 { 2 } else { 1 };
            let raster = bytes
                .get(start..start + count * width)
                .ok_or_else(|| format_error("raster ends early"))?;
            for sample in raster.chunks_exact(width) {
                let v = sample.iter().fold(0u64, |acc, &b| (acc << 8) | u64::from(b));
                if v > maxval {
                    return Err(format_error(format!("gray value {v} exceeds maxval {maxval}")));
                }
                pixels.push(u8::from(v as f64 >= t));
            }
        }
        Format::Csv => unreachable!(),
    }
    Ok(BinaryImage::new(rows, cols, pixels)?)
}

fn decode_csv(bytes: &[u8]) -> Result<BinaryImage> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let mut cols = None;
    let mut pixels = Vec::new();
    let mut rows = 0;
    for record in reader.records() {
        let record = record.map_err(|e| format_error(format!("csv: {e}")))?;
        if record.len() == 1 && record.get(0) == Some("") {
            continue;
        }
        match cols {
            None => cols = Some(record.len()),
            Some(c) if c != record.len() => {
                return Err(format_error(format!("csv row {rows} has {} fields, expected {c}", record.len())));
            }
            _ => {}
        }
        for (n, field) in record.iter().enumerate() {
            pixels.push(match field {
                "0" => 0,
                "1" => 1,
                other => {
                    return Err(format_error(format!("csv value {other:?} at ({rows}, {n}) outside {{0,1}}")));
                }
            });
        }
        rows += 1;
    }
    let cols = cols.ok_or_else(|| format_error("csv holds no rows"))?;
    Ok(BinaryImage::new(rows, cols, pixels)?)
}

/// Encodes an image. PGM output uses maxval 255 with phase 1 stored as 255.
pub fn encode(img: &BinaryImage, format: Format) -> Vec<u8> {
    let (rows, cols) = (img.rows(), img.cols());
    let mut out = Vec::new();
    match format {
        Format::PbmAscii => {
            let _ = write!(out, "P1\n{cols} {rows}\n");
            for m in 0..rows {
                for (i, chunk) in img.row(m).chunks(35).enumerate() {
                    if i > 0 {
                        out.push(b'\n');
                    }
                    let line: Vec<&str> = chunk.iter().map(|&v| if v == 1 { "1" } else { "0" }).collect();
                    out.extend_from_slice(line.join(" ").as_bytes());
                }
                out.push(b'\n');
            }
        }
        Format::PbmBinary => {
            let _ = write!(out, "P4\n{cols} {rows}\n");
            let stride = cols.div_ceil(8);
            for m in 0..rows {
                let mut packed = vec![0u8; stride];
                for (n, &v) in img.row(m).iter().enumerate() {
                    packed[n / 8] |= v << (7 - n % 8);
                }
                out.extend_from_slice(&packed);
            }
        }
        Format::PgmAscii => {
            let _ = write!(out, "P2\n{cols} {rows}\n255\n");
            for m in 0..rows {
                let line: Vec<&str> = img.row(m).iter().map(|&v| if v == 1 { "255" } else { "0" }).collect();
                out.extend_from_slice(line.join(" ").as_bytes());
                out.push(b'\n');
            }
        }
        Format::PgmBinary => {
            let _ = write!(out, "P5\n{cols} {rows}\n255\n");
            out.extend(img.pixels().iter().map(|&v| v * 255));
        }
        Format::Csv => {
            for m in 0..rows {
                let line: Vec<&str> = img.row(m).iter().map(|&v| if v == 1 { "1" } else { "0" }).collect();
                out.extend_from_slice(line.join(",").as_bytes());
                out.push(b'\n');
            }
        }
    }
    out
}

/// Reads an image file; the format comes from its content.
pub fn load(path: &Path, threshold: Option<f64>) -> Result<(BinaryImage, Format)> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes, threshold)
}

/// Reads an image file that must be in `format`.
pub fn load_as(path: &Path, format: Format, threshold: Option<f64>) -> Result<BinaryImage> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_as(&bytes, format, threshold)
}

pub fn save(img: &BinaryImage, path: &Path, format: Format) -> Result<()> {
    fs::write(path, encode(img, format)).map_err(|e| Error::io(path, e))
}
