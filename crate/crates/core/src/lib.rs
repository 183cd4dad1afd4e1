//! Synthetic warped document images from flat pages, and the metrics used to
//! judge them.
//!
//! A page is bent by a per-pixel vertical displacement field built from five
//! knots per row. [`warper::generate`] samples parameters for one of four warp
//! types, builds the field and resamples the page; [`eval`] compares headline
//! curvature against real captures and scores binarization results.

pub mod cli;
pub mod eval;
pub mod geometry;
pub mod imgio;
pub mod pages;
pub mod par;
pub mod spline;
pub mod warper;
pub mod warpfield;

pub use imgio::{BinaryImage, GrayImage, Image};
pub use par::Exec;
pub use spline::Interpolant;
pub use warper::{generate, GenerateOptions, WarpManifest, WarpMode};
pub use warpfield::{build_field, WarpField, WarpParams, WarpType};
