//! Applying a warp field to images and headline polylines.
//!
//! The output canvas grows above and below the source frame so displaced ink
//! is never clipped; `offset` is the number of rows added above, i.e. source
//! row `r` with zero displacement lands on canvas row `r + offset`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::imgio::{BinaryImage, ImageError};
use crate::par::{self, Exec};
use crate::spline::Interpolant;
use crate::warpfield::{
    self, build_field_with, diagonal, sample_params, FieldError, WarpControlParams, WarpField, WarpParams,
    WarpPositionParams, WarpType,
};

#[derive(Debug, Error)]
pub enum WarpError {
    #[error("field is {field_rows}x{field_cols} but image is {rows}x{cols}")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        field_rows: usize,
        field_cols: usize,
    },
    #[error("polyline sample ({column}, {row}) outside the {rows}x{cols} field")]
    SampleOutOfRange {
        column: f64,
        row: f64,
        rows: usize,
        cols: usize,
    },
    #[error("polyline needs strictly increasing finite columns")]
    BadPolyline,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Image(#[from] ImageError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WarpMode {
    /// Scatter each source pixel to its rounded destination.
    Forward,
    /// Pull each destination pixel from the source row that lands on it.
    #[default]
    Backward,
}

impl fmt::Display for WarpMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WarpMode::Forward => "forward",
            WarpMode::Backward => "backward",
        })
    }
}

impl FromStr for WarpMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "forward" => Ok(WarpMode::Forward),
            "backward" => Ok(WarpMode::Backward),
            other => Err(format!("unknown mode {other:?} (expected forward or backward)")),
        }
    }
}

/// Ordered `(column, row)` samples with strictly increasing columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    points: Vec<(f64, f64)>,
}

impl Polyline {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, WarpError> {
        let finite = points.iter().all(|(c, r)| c.is_finite() && r.is_finite());
        if !finite || points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(WarpError::BadPolyline);
        }
        Ok(Self { points })
    }

    /// Horizontal line at `row` sampled at each integer column of `columns`.
    pub fn horizontal(row: f64, columns: std::ops::Range<usize>) -> Self {
        Self {
            points: columns.map(|c| (c as f64, row)).collect(),
        }
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Warped {
    pub image: BinaryImage,
    /// Canvas rows added above the source frame.
    pub offset: usize,
}

fn check_dims(img: &BinaryImage, field: &WarpField) -> Result<(), WarpError> {
    if img.rows() != field.rows() || img.cols() != field.cols() {
        return Err(WarpError::DimensionMismatch {
            rows: img.rows(),
            cols: img.cols(),
            field_rows: field.rows(),
            field_cols: field.cols(),
        });
    }
    Ok(())
}

/// Fractional source row `s` with `s + F(s, c) = y`, `F` linear between rows and
/// held constant beyond the frame.
///
/// `r + F(r, c)` increases with `r` whenever `|∂F/∂r| < 1`, so the bracketing
/// pair of rows is found by walking from `hint`. Returns the solution and the
/// lower bracketing row.
fn source_row(field: &WarpField, y: f64, c: usize, hint: usize) -> (f64, usize) {
    let last = field.rows() - 1;
    let pos = |r: usize| r as f64 + field.get(r, c);
    if y <= pos(0) {
        return (y - field.get(0, c), 0);
    }
    if y >= pos(last) {
        return (y - field.get(last, c), last);
    }
    let mut r = hint.min(last - 1);
    while r > 0 && pos(r) > y {
        r -= 1;
    }
    while r + 1 < last && pos(r + 1) <= y {
        r += 1;
    }
    let (lo, hi) = (pos(r), pos(r + 1));
    (r as f64 + (y - lo) / (hi - lo), r)
}

pub fn warp_image(img: &BinaryImage, field: &WarpField, mode: WarpMode) -> Result<Warped, WarpError> {
    warp_image_with(Exec::default(), img, field, mode)
}

/// Moves every pixel vertically by its field value with nearest-neighbour rounding.
pub fn warp_image_with(exec: Exec, img: &BinaryImage, field: &WarpField, mode: WarpMode) -> Result<Warped, WarpError> {
    check_dims(img, field)?;
    let extent = field.canvas_extent();
    let (rows, cols) = (img.rows(), img.cols());
    let offset = extent.above;
    let out_rows = rows + extent.above + extent.below;
    let mut out = BinaryImage::new(out_rows, cols)?;

    match mode {
        WarpMode::Forward => {
            for r in 0..rows {
                for c in 0..cols {
                    if img.get(r, c) {
                        let dst = (r as f64 + field.get(r, c)).round() + offset as f64;
                        if dst >= 0.0 && (dst as usize) < out_rows {
                            out.set(dst as usize, c, true);
                        }
                    }
                }
            }
        }
        WarpMode::Backward => {
            par::for_each_row(exec, out.pixels_mut(), cols, |out_row, dst| {
                let y = out_row as f64 - offset as f64;
                let mut hint = (y - field.get((y.max(0.0) as usize).min(rows - 1), 0)).max(0.0) as usize;
                for (c, px) in dst.iter_mut().enumerate() {
                    let (s, r) = source_row(field, y, c, hint);
                    hint = r;
                    let src = s.round();
                    if src >= 0.0 && (src as usize) < rows {
                        *px = img.get(src as usize, c);
                    }
                }
            });
        }
    }
    Ok(Warped { image: out, offset })
}

/// Maps a warped canvas back onto the flat source frame.
///
/// This is backward mapping with `−F` sampled on the destination grid:
/// `out(r, c) = warped(round(r + F(r, c)) + offset, c)`.
pub fn unwarp_image(warped: &BinaryImage, field: &WarpField, offset: usize) -> Result<BinaryImage, WarpError> {
    unwarp_image_with(Exec::default(), warped, field, offset)
}

pub fn unwarp_image_with(
    exec: Exec,
    warped: &BinaryImage,
    field: &WarpField,
    offset: usize,
) -> Result<BinaryImage, WarpError> {
    if warped.cols() != field.cols() {
        return Err(WarpError::DimensionMismatch {
            rows: warped.rows(),
            cols: warped.cols(),
            field_rows: field.rows(),
            field_cols: field.cols(),
        });
    }
    let (rows, cols) = (field.rows(), field.cols());
    let mut out = BinaryImage::new(rows, cols)?;
    par::for_each_row(exec, out.pixels_mut(), cols, |r, dst| {
        for (c, px) in dst.iter_mut().enumerate() {
            let src = (r as f64 + field.get(r, c)).round() + offset as f64;
            if src >= 0.0 && (src as usize) < warped.rows() {
                *px = warped.get(src as usize, c);
            }
        }
    });
    Ok(out)
}

/// Predicted canvas position of each source-frame sample after warping with `field`.
pub fn warp_polyline(line: &Polyline, field: &WarpField) -> Result<Polyline, WarpError> {
    let offset = field.canvas_extent().above as f64;
    let (rows, cols) = (field.rows(), field.cols());
    let points = line
        .points
        .iter()
        .map(|&(column, row)| {
            let (c, r) = (column.round(), row.round());
            if c < 0.0 || r < 0.0 || c as usize >= cols || r as usize >= rows {
                return Err(WarpError::SampleOutOfRange {
                    column,
                    row,
                    rows,
                    cols,
                });
            }
            Ok((column, row + field.get(r as usize, c as usize) + offset))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Polyline { points })
}

/// Caller-supplied values that replace sampled parameters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ParamOverrides {
    pub p1: Option<f64>,
    pub p2: Option<f64>,
    pub p3: Option<f64>,
    pub p4: Option<f64>,
    pub p5: Option<f64>,
    pub p6: Option<f64>,
    pub p7: Option<f64>,
    pub p8: Option<f64>,
    pub p9: Option<f64>,
    pub p10: Option<f64>,
}

impl ParamOverrides {
    /// Applies overrides; unset inner knots (P4, P5, P8, P9) are re-derived from the outer ones.
    pub fn apply(&self, sampled: WarpParams) -> Result<WarpParams, FieldError> {
        let position = WarpPositionParams::new(
            self.p1.unwrap_or(sampled.position.p1()),
            self.p2.unwrap_or(sampled.position.p2()),
        )?;
        let s = sampled.control;
        let mut control = WarpControlParams::from_outer(
            self.p3.unwrap_or(s.p3),
            self.p6.unwrap_or(s.p6),
            self.p7.unwrap_or(s.p7),
            self.p10.unwrap_or(s.p10),
        );
        control.p4 = self.p4.unwrap_or(control.p4);
        control.p5 = self.p5.unwrap_or(control.p5);
        control.p8 = self.p8.unwrap_or(control.p8);
        control.p9 = self.p9.unwrap_or(control.p9);
        Ok(WarpParams { position, control })
    }
}

/// Everything needed to reproduce one generated image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WarpManifest {
    pub source: String,
    #[serde(rename = "type")]
    pub warp_type: WarpType,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
    pub p5: f64,
    pub p6: f64,
    pub p7: f64,
    pub p8: f64,
    pub p9: f64,
    pub p10: f64,
    pub spline: String,
    pub lambda: f64,
    pub seed: u64,
    pub mode: WarpMode,
    pub offset: usize,
    pub out_rows: usize,
    pub out_cols: usize,
    pub version: String,
}

impl WarpManifest {
    pub fn params(&self) -> Result<WarpParams, FieldError> {
        Ok(WarpParams {
            position: WarpPositionParams::new(self.p1, self.p2)?,
            control: WarpControlParams {
                p3: self.p3,
                p4: self.p4,
                p5: self.p5,
                p6: self.p6,
                p7: self.p7,
                p8: self.p8,
                p9: self.p9,
                p10: self.p10,
            },
        })
    }

    pub fn interpolant(&self) -> Interpolant {
        match self.spline.as_str() {
            "natural" => Interpolant::Natural { lambda: self.lambda },
            _ => Interpolant::Monotone,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerateOptions {
    pub warp_type: WarpType,
    pub seed: u64,
    pub interpolant: Interpolant,
    pub mode: WarpMode,
    pub overrides: ParamOverrides,
}

impl Default for GenerateOptions {
    fn default() -> Self {
        Self {
            warp_type: WarpType::I,
            seed: 0,
            interpolant: Interpolant::default(),
            mode: WarpMode::default(),
            overrides: ParamOverrides::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub image: BinaryImage,
    pub manifest: WarpManifest,
    pub field: WarpField,
}

/// Samples parameters, builds the field and warps `img`.
pub fn generate(img: &BinaryImage, source: &str, opts: &GenerateOptions) -> Result<Generated, WarpError> {
    generate_with(Exec::default(), img, source, opts)
}

pub fn generate_with(
    exec: Exec,
    img: &BinaryImage,
    source: &str,
    opts: &GenerateOptions,
) -> Result<Generated, WarpError> {
    let d = diagonal(img.rows(), img.cols());
    let params = opts.overrides.apply(sample_params(opts.warp_type, d, opts.seed))?;
    let field = build_field_with(exec, img.rows(), img.cols(), &params, opts.interpolant)?;
    let warped = warp_image_with(exec, img, &field, opts.mode)?;
    let c = params.control;
    let manifest = WarpManifest {
        source: source.to_string(),
        warp_type: opts.warp_type,
        p1: params.position.p1(),
        p2: params.position.p2(),
        p3: c.p3,
        p4: c.p4,
        p5: c.p5,
        p6: c.p6,
        p7: c.p7,
        p8: c.p8,
        p9: c.p9,
        p10: c.p10,
        spline: opts.interpolant.name().to_string(),
        lambda: opts.interpolant.lambda(),
        seed: opts.seed,
        mode: opts.mode,
        offset: warped.offset,
        out_rows: warped.image.rows(),
        out_cols: warped.image.cols(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    Ok(Generated {
        image: warped.image,
        manifest,
        field,
    })
}

/// Rebuilds the warped image recorded by `manifest` from its source image.
pub fn regenerate(img: &BinaryImage, manifest: &WarpManifest) -> Result<BinaryImage, WarpError> {
    let params = manifest.params()?;
    let field = warpfield::build_field(img.rows(), img.cols(), &params, manifest.interpolant())?;
    Ok(warp_image(img, &field, manifest.mode)?.image)
}
