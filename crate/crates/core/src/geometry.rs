//! Cylindrical-surface camera model.
//!
//! A page at constant depth `D(0)` is compared with the same page bent so that
//! its depth depends only on the horizontal coordinate, `D(x)`. The vertical
//! image-plane shift of a point between the two is approximately
//! `Y · d / D(0)` with `d = D(0) − D(x)`, which is what the warp field encodes
//! as a per-pixel displacement. Units are whatever the caller uses, as long as
//! they are consistent.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImagePoint {
    pub x: f64,
    pub y: f64,
}

fn positive(what: &'static str, value: f64) -> Result<f64, GeometryError> {
    if value > 0.0 {
        Ok(value)
    } else {
        Err(GeometryError::NonPositive { what, value })
    }
}

/// Pinhole projection `(f·x/z, f·y/z)`.
pub fn project(p: ScenePoint, focal: f64) -> Result<ImagePoint, GeometryError> {
    positive("focal length", focal)?;
    positive("depth z", p.z)?;
    Ok(ImagePoint {
        x: focal * p.x / p.z,
        y: focal * p.y / p.z,
    })
}

/// Exact vertical shift `f·y1·(D0 − Dx) / (Dx·D0)` between the flat and curved page.
pub fn displacement_exact(y1: f64, focal: f64, d0: f64, dx: f64) -> Result<f64, GeometryError> {
    positive("D0", d0)?;
    positive("Dx", dx)?;
    Ok(focal * y1 * (d0 - dx) / (dx * d0))
}

/// First-order shift `Y1·d / D0`, valid when `|d| ≪ D0`.
pub fn displacement_approx(image_y: f64, d: f64, d0: f64) -> Result<f64, GeometryError> {
    positive("D0", d0)?;
    Ok(image_y * d / d0)
}

/// Relative error of [`displacement_approx`] against [`displacement_exact`]: `d / (D0 − d)`.
pub fn approx_relative_error(d: f64, d0: f64) -> f64 {
    d / (d0 - d)
}
