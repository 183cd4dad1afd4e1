//! Warp parameters and the dense per-pixel displacement field.
//!
//! Two position parameters pick the zero-distortion column on the top row
//! (`Z1`) and bottom row (`Z2`); the zero line joins them. Eight control
//! parameters give the displacement at the outer four knots of the top and
//! bottom rows, and the knot values of every other row are interpolated
//! linearly between the two. Each row is then filled by a cubic through its
//! five knots. Positive values move a pixel down (toward larger row index).

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::par::{self, Exec};
use crate::spline::{Interpolant, Knot, SplineError};

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("need at least 2 rows, got {0}")]
    TooFewRows(usize),
    #[error("need at least 5 columns, got {0}")]
    TooFewColumns(usize),
    #[error("row {row} out of range for {rows} rows")]
    RowOutOfRange { row: usize, rows: usize },
    #[error("zero column {z} leaves coincident knots {columns:?} on a {cols}-column row")]
    KnotCollision { z: usize, cols: usize, columns: [usize; 5] },
    #[error("position parameter {0} is not one of 0.1, 0.2, ..., 0.9")]
    BadPosition(f64),
    #[error("failed to fit row {row}: {source}")]
    Spline { row: usize, source: SplineError },
    #[error("field dimensions {rows}x{cols} do not match {values} values")]
    Shape { rows: usize, cols: usize, values: usize },
    #[error("bad CSV at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// The nine admissible position fractions.
pub const POSITION_GRID: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

/// Control magnitudes sampled as `k·D` for these `k`.
pub const CONTROL_GRID: [f64; 5] = [0.04, 0.045, 0.05, 0.055, 0.06];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WarpPositionParams {
    p1: f64,
    p2: f64,
}

impl WarpPositionParams {
    pub fn new(p1: f64, p2: f64) -> Result<Self, FieldError> {
        Ok(Self {
            p1: snap_position(p1)?,
            p2: snap_position(p2)?,
        })
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    /// `(Z1, Z2)` = nearest column to `P·(W − 1)` on the top and bottom rows.
    pub fn zero_columns(&self, cols: usize) -> (usize, usize) {
        let span = cols.saturating_sub(1) as f64;
        ((self.p1 * span).round() as usize, (self.p2 * span).round() as usize)
    }
}

fn snap_position(p: f64) -> Result<f64, FieldError> {
    POSITION_GRID
        .iter()
        .copied()
        .find(|g| (g - p).abs() < 1e-9)
        .ok_or(FieldError::BadPosition(p))
}

/// Signed pixel displacements at the outer knots of the first (P3–P6) and
/// last (P7–P10) rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WarpControlParams {
    pub p3: f64,
    pub p4: f64,
    pub p5: f64,
    pub p6: f64,
    pub p7: f64,
    pub p8: f64,
    pub p9: f64,
    pub p10: f64,
}

impl WarpControlParams {
    /// Outer knots given; second and fourth knots are half of their neighbours.
    pub fn from_outer(p3: f64, p6: f64, p7: f64, p10: f64) -> Self {
        Self {
            p3,
            p4: 0.5 * p3,
            p5: 0.5 * p6,
            p6,
            p7,
            p8: 0.5 * p7,
            p9: 0.5 * p10,
            p10,
        }
    }

    pub fn zero() -> Self {
        Self::from_outer(0.0, 0.0, 0.0, 0.0)
    }

    pub fn top(&self) -> [f64; 4] {
        [self.p3, self.p4, self.p5, self.p6]
    }

    pub fn bottom(&self) -> [f64; 4] {
        [self.p7, self.p8, self.p9, self.p10]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WarpType {
    /// Book page, undistorted part at left.
    I,
    /// Book page, undistorted part at right.
    II,
    /// Page pasted on a lamp-post.
    III,
    /// Page hung from the top middle on a notice board.
    IV,
}

impl WarpType {
    pub const ALL: [WarpType; 4] = [WarpType::I, WarpType::II, WarpType::III, WarpType::IV];

    /// Position fractions this type draws `P1` and `P2` from.
    pub fn position_choices(self) -> &'static [f64] {
        match self {
            WarpType::I => &[0.1, 0.2, 0.3],
            WarpType::II => &[0.7, 0.8, 0.9],
            WarpType::III | WarpType::IV => &[0.5],
        }
    }

    /// Sign of the top-row controls; the bottom row has the opposite sign.
    pub fn top_sign(self) -> f64 {
        match self {
            WarpType::IV => -1.0,
            _ => 1.0,
        }
    }
}

impl fmt::Display for WarpType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WarpType::I => "I",
            WarpType::II => "II",
            WarpType::III => "III",
            WarpType::IV => "IV",
        })
    }
}

impl FromStr for WarpType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(WarpType::I),
            "II" | "2" => Ok(WarpType::II),
            "III" | "3" => Ok(WarpType::III),
            "IV" | "4" => Ok(WarpType::IV),
            other => Err(format!("unknown warp type {other:?} (expected I, II, III or IV)")),
        }
    }
}

/// All ten parameters of one warp.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WarpParams {
    pub position: WarpPositionParams,
    pub control: WarpControlParams,
}

/// Image diagonal in pixels.
pub fn diagonal(rows: usize, cols: usize) -> f64 {
    (rows as f64).hypot(cols as f64)
}

/// Draws parameters for `warp_type` from its position choices and [`CONTROL_GRID`].
///
/// Control magnitudes are `round(k·D)` with `k` on [`CONTROL_GRID`], drawn
/// independently for P3, P6, P7 and P10. The result depends only on the
/// arguments.
pub fn sample_params(warp_type: WarpType, diagonal: f64, seed: u64) -> WarpParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let choices = warp_type.position_choices();
    let p1 = choices[rng.random_range(0..choices.len())];
    let p2 = choices[rng.random_range(0..choices.len())];
    let mut magnitude = || (CONTROL_GRID[rng.random_range(0..CONTROL_GRID.len())] * diagonal).round();
    let top = warp_type.top_sign();
    let (p3, p6, p7, p10) = (
        top * magnitude(),
        top * magnitude(),
        -top * magnitude(),
        -top * magnitude(),
    );
    WarpParams {
        position: WarpPositionParams::new(p1, p2).expect("grid values"),
        control: WarpControlParams::from_outer(p3, p6, p7, p10),
    }
}

/// Zero column of 0-based `row`: the Z1–Z2 line rounded to the nearest column.
pub fn zero_column(row: usize, z_top: usize, z_bottom: usize, rows: usize) -> Result<usize, FieldError> {
    if rows < 2 {
        return Err(FieldError::TooFewRows(rows));
    }
    if row >= rows {
        return Err(FieldError::RowOutOfRange { row, rows });
    }
    let t = row as f64 / (rows - 1) as f64;
    Ok((z_top as f64 + (z_bottom as f64 - z_top as f64) * t).round() as usize)
}

/// Knot columns `(0, z/2, z, (z + W − 1)/2, W − 1)`, halves rounded.
pub fn knot_columns(cols: usize, z: usize) -> Result<[usize; 5], FieldError> {
    if cols < 5 {
        return Err(FieldError::TooFewColumns(cols));
    }
    let last = cols - 1;
    let columns = [0, z.div_ceil(2), z, (z + last).div_ceil(2), last];
    if z > last || columns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(FieldError::KnotCollision { z, cols, columns });
    }
    Ok(columns)
}

/// Knot values of 0-based `row`: each outer knot linear from the top to bottom row, centre zero.
pub fn knot_values(row: usize, rows: usize, wcp: &WarpControlParams) -> Result<[f64; 5], FieldError> {
    if rows < 2 {
        return Err(FieldError::TooFewRows(rows));
    }
    if row >= rows {
        return Err(FieldError::RowOutOfRange { row, rows });
    }
    let step = row as f64;
    let span = (rows - 1) as f64;
    let lerp = |top: f64, bottom: f64| (bottom - top) / span * step + top;
    Ok([
        lerp(wcp.p3, wcp.p7),
        lerp(wcp.p4, wcp.p8),
        0.0,
        lerp(wcp.p5, wcp.p9),
        lerp(wcp.p6, wcp.p10),
    ])
}

/// Dense row-major matrix of vertical displacements, one per source pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpField {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

/// Rows a warped canvas must grow by so no displaced pixel falls outside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanvasExtent {
    /// Rows added above the source frame; this is the canvas offset.
    pub above: usize,
    pub below: usize,
}

impl WarpField {
    pub fn from_values(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self, FieldError> {
        if rows == 0 || cols == 0 || values.len() != rows * cols {
            return Err(FieldError::Shape {
                rows,
                cols,
                values: values.len(),
            });
        }
        Ok(Self { rows, cols, values })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self, FieldError> {
        let values = (0..rows * cols).map(|i| f(i / cols.max(1), i % cols.max(1))).collect();
        Self::from_values(rows, cols, values)
    }

    pub fn constant(rows: usize, cols: usize, value: f64) -> Result<Self, FieldError> {
        Self::from_values(rows, cols, vec![value; rows * cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.values[row * self.cols..(row + 1) * self.cols]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn canvas_extent(&self) -> CanvasExtent {
        CanvasExtent {
            above: (-self.min().floor()).max(0.0) as usize,
            below: self.max().ceil().max(0.0) as usize,
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            values: self.values.iter().map(|v| -v).collect(),
        }
    }
}

pub fn build_field(
    rows: usize,
    cols: usize,
    params: &WarpParams,
    interpolant: Interpolant,
) -> Result<WarpField, FieldError> {
    build_field_with(Exec::default(), rows, cols, params, interpolant)
}

/// Fits every row independently and samples it at each column.
pub fn build_field_with(
    exec: Exec,
    rows: usize,
    cols: usize,
    params: &WarpParams,
    interpolant: Interpolant,
) -> Result<WarpField, FieldError> {
    if rows < 2 {
        return Err(FieldError::TooFewRows(rows));
    }
    if cols < 5 {
        return Err(FieldError::TooFewColumns(cols));
    }
    let (z_top, z_bottom) = params.position.zero_columns(cols);
    // Endpoint rows bound every zero column, so checking them up front is enough.
    knot_columns(cols, z_top)?;
    knot_columns(cols, z_bottom)?;

    let mut values = vec![0.0; rows * cols];
    par::try_for_each_row(exec, &mut values, cols, |row, out| {
        let z = zero_column(row, z_top, z_bottom, rows)?;
        let columns = knot_columns(cols, z)?;
        let vals = knot_values(row, rows, &params.control)?;
        let knots: Vec<Knot> = columns.iter().zip(vals).map(|(&c, v)| Knot::new(c as f64, v)).collect();
        let curve = interpolant
            .fit(&knots)
            .map_err(|source| FieldError::Spline { row, source })?;
        curve
            .sample_columns(0, out)
            .map_err(|source| FieldError::Spline { row, source })
    })?;
    Ok(WarpField { rows, cols, values })
}

/// Zero column of every row for `params` on a `cols`-wide image.
pub fn zero_line(rows: usize, cols: usize, params: &WarpParams) -> Result<Vec<usize>, FieldError> {
    let (z_top, z_bottom) = params.position.zero_columns(cols);
    (0..rows).map(|r| zero_column(r, z_top, z_bottom, rows)).collect()
}

/// CSV text: one line per row, shortest round-trip decimal per value.
pub fn write_field_csv(field: &WarpField, mut out: impl Write) -> io::Result<()> {
    let mut line = String::new();
    for r in 0..field.rows {
        line.clear();
        for (c, &v) in field.row(r).iter().enumerate() {
            if c > 0 {
                line.push(',');
            }
            // Normalise -0 so a zero field reads "0,0,0".
            let v = if v == 0.0 { 0.0 } else { v };
            line.push_str(&v.to_string());
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

pub fn export_field(field: &WarpField, path: impl AsRef<Path>) -> Result<(), FieldError> {
    let mut file = io::BufWriter::new(fs::File::create(path)?);
    write_field_csv(field, &mut file)?;
    file.flush()?;
    Ok(())
}

pub fn parse_field_csv(text: &str) -> Result<WarpField, FieldError> {
    let mut values = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let before = values.len();
        for tok in line.split(',') {
            let v: f64 = tok.trim().parse().map_err(|e| FieldError::Parse {
                line: i + 1,
                msg: format!("{tok:?}: {e}"),
            })?;
            values.push(v);
        }
        let n = values.len() - before;
        match cols {
            None => cols = Some(n),
            Some(c) if c != n => {
                return Err(FieldError::Parse {
                    line: i + 1,
                    msg: format!("{n} values, expected {c}"),
                })
            }
            _ => {}
        }
        rows += 1;
    }
    WarpField::from_values(rows, cols.unwrap_or(0), values)
}
