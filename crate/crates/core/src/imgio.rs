//! Binary and grayscale document images, and Netpbm (PBM/PGM) I/O.
//!
//! Foreground is ink and maps to PBM value `1`. Pixels are stored row-major
//! with the origin at the top-left corner.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use thiserror::Error;

/// Threshold used when a grayscale page is binarized without an explicit value.
pub const DEFAULT_THRESHOLD: u8 = 128;

#[derive(Debug, Error)]
pub enum ImageError {
    #[error("file not found: {0}")]
    NotFound(String),
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("truncated payload: expected {expected} samples, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("invalid dimensions {rows}x{cols}")]
    InvalidDimensions { rows: usize, cols: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// A rectangular grid of foreground (`true`) / background (`false`) pixels.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryImage {
    rows: usize,
    cols: usize,
    pixels: Vec<bool>,
}

impl std::fmt::Debug for BinaryImage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BinaryImage")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("foreground", &self.foreground_count())
            .finish()
    }
}

impl BinaryImage {
    /// All-background image.
    pub fn new(rows: usize, cols: usize) -> Result<Self, ImageError> {
        Self::from_pixels(rows, cols, vec![false; rows.saturating_mul(cols)])
    }

    pub fn from_pixels(rows: usize, cols: usize, pixels: Vec<bool>) -> Result<Self, ImageError> {
        if rows == 0 || cols == 0 || pixels.len() != rows * cols {
            return Err(ImageError::InvalidDimensions { rows, cols });
        }
        Ok(Self { rows, cols, pixels })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self, ImageError> {
        let mut pixels = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                pixels.push(f(r, c));
            }
        }
        Self::from_pixels(rows, cols, pixels)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.pixels[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.pixels[row * self.cols + col] = value;
    }

    pub fn pixels(&self) -> &[bool] {
        &self.pixels
    }

    pub(crate) fn pixels_mut(&mut self) -> &mut [bool] {
        &mut self.pixels
    }

    pub fn row(&self, row: usize) -> &[bool] {
        &self.pixels[row * self.cols..(row + 1) * self.cols]
    }

    pub fn foreground_count(&self) -> usize {
        self.pixels.iter().filter(|&&p| p).count()
    }

    /// Copy of rows `top..top + rows`, padding with background past the bottom edge.
    pub fn crop_rows(&self, top: usize, rows: usize) -> Result<Self, ImageError> {
        Self::from_fn(rows, self.cols, |r, c| {
            let src = top + r;
            src < self.rows && self.get(src, c)
        })
    }
}

/// 8-bit grayscale image; intensities are bounded to `[0, 255]` by the type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    rows: usize,
    cols: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn from_pixels(rows: usize, cols: usize, pixels: Vec<u8>) -> Result<Self, ImageError> {
        if rows == 0 || cols == 0 || pixels.len() != rows * cols {
            return Err(ImageError::InvalidDimensions { rows, cols });
        }
        Ok(Self { rows, cols, pixels })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.cols + col]
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }
}

/// Result of decoding a PNM file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Image {
    Binary(BinaryImage),
    Gray(GrayImage),
}

impl Image {
    /// Binary view of the image; grayscale input is thresholded at `t`.
    pub fn into_binary(self, t: u8) -> BinaryImage {
        match self {
            Image::Binary(b) => b,
            Image::Gray(g) => threshold(&g, t),
        }
    }
}

/// Pixels darker than `t` become foreground.
pub fn threshold(img: &GrayImage, t: u8) -> BinaryImage {
    BinaryImage {
        rows: img.rows,
        cols: img.cols,
        pixels: img.pixels.iter().map(|&v| v < t).collect(),
    }
}

pub fn load_image(path: impl AsRef<Path>) -> Result<Image, ImageError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => ImageError::NotFound(path.display().to_string()),
        _ => ImageError::Io(e),
    })?;
    decode(&bytes)
}

pub fn save_image(img: &BinaryImage, path: impl AsRef<Path>) -> Result<(), ImageError> {
    let mut file = io::BufWriter::new(fs::File::create(path)?);
    file.write_all(&encode_p4(img))?;
    file.flush()?;
    Ok(())
}

/// Raw PBM bytes: `P4 <cols> <rows>\n` followed by MSB-first packed rows.
pub fn encode_p4(img: &BinaryImage) -> Vec<u8> {
    let row_bytes = img.cols.div_ceil(8);
    let mut out = format!("P4 {} {}\n", img.cols, img.rows).into_bytes();
    out.reserve(row_bytes * img.rows);
    for r in 0..img.rows {
        let row = img.row(r);
        for chunk in row.chunks(8) {
            let mut byte = 0u8;
            for (bit, &p) in chunk.iter().enumerate() {
                if p {
                    byte |= 0x80 >> bit;
                }
            }
            out.push(byte);
        }
    }
    out
}

/// Decodes P1, P2, P4 or P5 data held in memory.
pub fn decode(bytes: &[u8]) -> Result<Image, ImageError> {
    let mut hdr = Header::new(bytes);
    let magic = hdr.magic()?;
    let cols = hdr.number("width")?;
    let rows = hdr.number("height")?;
    if rows == 0 || cols == 0 {
        return Err(ImageError::MalformedHeader(format!("zero dimension {cols}x{rows}")));
    }
    let n = rows
        .checked_mul(cols)
        .ok_or_else(|| ImageError::MalformedHeader("dimensions overflow".into()))?;
    match magic {
        b'1' => {
            let mut pixels = Vec::with_capacity(n.min(bytes.len() * 8));
            // P1 samples may be packed without whitespace between digits.
            for &b in &bytes[hdr.pos..] {
                if pixels.len() == n {
                    break;
                }
                match b {
                    b'0' => pixels.push(false),
                    b'1' => pixels.push(true),
                    b'#' => break,
                    b if b.is_ascii_whitespace() => {}
                    other => {
                        return Err(ImageError::MalformedHeader(format!(
                            "unexpected byte {other:#04x} in P1 raster"
                        )))
                    }
                }
            }
            if pixels.len() < n {
                return Err(ImageError::Truncated {
                    expected: n,
                    found: pixels.len(),
                });
            }
            Ok(Image::Binary(BinaryImage { rows, cols, pixels }))
        }
        b'4' => {
            hdr.single_whitespace()?;
            let row_bytes = cols.div_ceil(8);
            let payload = &bytes[hdr.pos..];
            if payload.len() < row_bytes * rows {
                return Err(ImageError::Truncated {
                    expected: n,
                    found: (payload.len() / row_bytes.max(1)) * cols,
                });
            }
            let mut pixels = Vec::with_capacity(n.min(bytes.len() * 8));
            for r in 0..rows {
                let line = &payload[r * row_bytes..(r + 1) * row_bytes];
                for c in 0..cols {
                    pixels.push(line[c / 8] & (0x80 >> (c % 8)) != 0);
                }
            }
            Ok(Image::Binary(BinaryImage { rows, cols, pixels }))
        }
        b'2' | b'5' => {
            let maxval = hdr.number("maxval")?;
            if maxval == 0 || maxval > 65535 {
                return Err(ImageError::MalformedHeader(format!("maxval {maxval} out of range")));
            }
            let scale = |v: usize| -> Result<u8, ImageError> {
                if v > maxval {
                    return Err(ImageError::MalformedHeader(format!(
                        "sample {v} exceeds maxval {maxval}"
                    )));
                }
                Ok(((v * 255 + maxval / 2) / maxval) as u8)
            };
            let mut pixels = Vec::with_capacity(n.min(bytes.len() * 8));
            if magic == b'2' {
                while pixels.len() < n {
                    match hdr.next_token()? {
                        Some(tok) => pixels.push(scale(parse_num(tok, "sample")?)?),
                        None => break,
                    }
                }
            } else {
                hdr.single_whitespace()?;
                let payload = &bytes[hdr.pos..];
                let width = if maxval > 255 { 2 } else { 1 };
                let avail = payload.len() / width;
                if avail < n {
                    return Err(ImageError::Truncated {
                        expected: n,
                        found: avail,
                    });
                }
                for i in 0..n {
                    let v = if width == 2 {
                        (payload[2 * i] as usize) << 8 | payload[2 * i + 1] as usize
                    } else {
                        payload[i] as usize
                    };
                    pixels.push(scale(v)?);
                }
            }
            if pixels.len() < n {
                return Err(ImageError::Truncated {
                    expected: n,
                    found: pixels.len(),
                });
            }
            Ok(Image::Gray(GrayImage { rows, cols, pixels }))
        }
        other => Err(ImageError::MalformedHeader(format!(
            "unsupported magic P{}",
            other as char
        ))),
    }
}

fn parse_num(tok: &[u8], what: &str) -> Result<usize, ImageError> {
    std::str::from_utf8(tok)
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| ImageError::MalformedHeader(format!("bad {what}: {:?}", String::from_utf8_lossy(tok))))
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Header<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    fn magic(&mut self) -> Result<u8, ImageError> {
        match self.bytes {
            [b'P', m, ..] => {
                self.pos = 2;
                Ok(*m)
            }
            _ => Err(ImageError::MalformedHeader("missing P magic".into())),
        }
    }

    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Result<Option<&'a [u8]>, ImageError> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        Ok((self.pos > start).then(|| &self.bytes[start..self.pos]))
    }

    fn number(&mut self, what: &str) -> Result<usize, ImageError> {
        match self.next_token()? {
            Some(tok) => parse_num(tok, what),
            None => Err(ImageError::MalformedHeader(format!("missing {what}"))),
        }
    }

    /// Raw formats separate the header from the raster with exactly one whitespace byte.
    fn single_whitespace(&mut self) -> Result<(), ImageError> {
        match self.bytes.get(self.pos) {
            Some(b) if b.is_ascii_whitespace() => {
                self.pos += 1;
                Ok(())
            }
            Some(_) => Err(ImageError::MalformedHeader("no whitespace before raster".into())),
            None => Err(ImageError::Truncated { expected: 1, found: 0 }),
        }
    }
}
