//! Similarity measures between document images.
//!
//! Two families live here. Headline curvature compares the bending of text
//! lines in a real and a synthetic warp; the pixel-wise binarization metrics
//! (precision, recall, F-measure, PSNR, DRD) compare a dewarped result with
//! its flat ground truth. Foreground is ink throughout.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::imgio::BinaryImage;
use crate::warper::Polyline;

/// Row-ink fraction above which a row belongs to a text line.
pub const LINE_ROW_THRESHOLD: f64 = 0.02;
/// Median window applied to the raw headline, in samples.
pub const HEADLINE_MEDIAN_WINDOW: usize = 15;
/// Baseline half-width for headline slope estimates, in samples.
pub const SLOPE_HALF_SPAN: usize = 7;
/// Slopes within this band (px/col) count as flat.
pub const SLOPE_DEAD_BAND: f64 = 0.05;
/// Lines shorter than this fraction of the longest are ignored.
pub const MIN_LINE_FRACTION: f64 = 0.8;

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("images differ in size: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("band rows {top}..{bottom}, cols {left}..{right} contains no foreground")]
    EmptyBand {
        top: usize,
        bottom: usize,
        left: usize,
        right: usize,
    },
    #[error("band lies outside the image")]
    BandOutOfImage,
    #[error("need at least 4 qualifying text lines, found {0}")]
    TooFewLines(usize),
    #[error("curvature needs at least 3 samples, got {0}")]
    TooFewSamples(usize),
    #[error("curvature points coincide")]
    DegeneratePoints,
    #[error("curvature lists differ in length: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("curvature lists are empty")]
    Empty,
    #[error("ground truth has no non-uniform 8x8 block; DRD is undefined")]
    UndefinedDrd,
}

/// Extent of one text line: rows `top..bottom`, columns `left..right` (half-open).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineBand {
    pub top: usize,
    pub bottom: usize,
    pub left: usize,
    pub right: usize,
}

impl LineBand {
    pub fn length(&self) -> usize {
        self.right - self.left
    }

    pub fn height(&self) -> usize {
        self.bottom - self.top
    }
}

/// Projection-profile segmentation into maximal runs of inked rows.
pub fn segment_lines(img: &BinaryImage) -> Vec<LineBand> {
    let min_ink = LINE_ROW_THRESHOLD * img.cols() as f64;
    let inked: Vec<bool> = (0..img.rows())
        .map(|r| img.row(r).iter().filter(|&&p| p).count() as f64 > min_ink)
        .collect();
    let mut bands = Vec::new();
    let mut r = 0;
    while r < inked.len() {
        if !inked[r] {
            r += 1;
            continue;
        }
        let top = r;
        while r < inked.len() && inked[r] {
            r += 1;
        }
        let (mut left, mut right) = (usize::MAX, 0);
        for row in top..r {
            let px = img.row(row);
            if let Some(first) = px.iter().position(|&p| p) {
                left = left.min(first);
                right = right.max(px.iter().rposition(|&p| p).unwrap() + 1);
            }
        }
        bands.push(LineBand {
            top,
            bottom: r,
            left,
            right,
        });
    }
    bands
}

/// Median-smoothed top envelope of the ink inside `band`.
pub fn extract_headline(img: &BinaryImage, band: &LineBand) -> Result<Polyline, EvalError> {
    if band.bottom > img.rows() || band.right > img.cols() || band.top >= band.bottom {
        return Err(EvalError::BandOutOfImage);
    }
    let mut cols = Vec::new();
    let mut tops = Vec::new();
    for c in band.left..band.right {
        if let Some(r) = (band.top..band.bottom).find(|&r| img.get(r, c)) {
            cols.push(c as f64);
            tops.push(r as f64);
        }
    }
    if cols.is_empty() {
        return Err(EvalError::EmptyBand {
            top: band.top,
            bottom: band.bottom,
            left: band.left,
            right: band.right,
        });
    }
    let smoothed = median_filter(&tops, HEADLINE_MEDIAN_WINDOW);
    Ok(Polyline::new(cols.into_iter().zip(smoothed).collect()).expect("columns increase"))
}

/// Running median; near the ends the window shrinks symmetrically around each sample.
fn median_filter(values: &[f64], window: usize) -> Vec<f64> {
    let half = window / 2;
    let mut buf = Vec::with_capacity(window);
    (0..values.len())
        .map(|i| {
            let h = half.min(i).min(values.len() - 1 - i);
            let (lo, hi) = (i - h, i + h + 1);
            buf.clear();
            buf.extend_from_slice(&values[lo..hi]);
            buf.sort_by(f64::total_cmp);
            let m = buf.len();
            if m % 2 == 1 {
                buf[m / 2]
            } else {
                0.5 * (buf[m / 2 - 1] + buf[m / 2])
            }
        })
        .collect()
}

/// First two and last two bands among those longer than 80% of the longest.
pub fn select_lines(bands: &[LineBand]) -> Result<[LineBand; 4], EvalError> {
    let longest = bands.iter().map(LineBand::length).max().unwrap_or(0);
    let keep: Vec<LineBand> = bands
        .iter()
        .copied()
        .filter(|b| b.length() as f64 > MIN_LINE_FRACTION * longest as f64)
        .collect();
    if keep.len() < 4 {
        return Err(EvalError::TooFewLines(keep.len()));
    }
    let n = keep.len();
    Ok([keep[0], keep[1], keep[n - 2], keep[n - 1]])
}

/// Signed curvature of the circle through `a`, `b`, `c`: `4·area / (|ab|·|bc|·|ca|)`.
///
/// Positive when `a → b → c` turns counter-clockwise in (column, row) axes.
pub fn three_point_curvature(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> Result<f64, EvalError> {
    let dist = |p: (f64, f64), q: (f64, f64)| (p.0 - q.0).hypot(p.1 - q.1);
    let (ab, bc, ca) = (dist(a, b), dist(b, c), dist(c, a));
    if ab == 0.0 || bc == 0.0 || ca == 0.0 {
        return Err(EvalError::DegeneratePoints);
    }
    let cross = (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
    Ok(2.0 * cross / (ab * bc * ca))
}

/// The end points and the slope sign-change point used by [`curvature`].
pub fn curvature_points(line: &Polyline) -> Result<[(f64, f64); 3], EvalError> {
    let pts = line.points();
    let n = pts.len();
    if n < 3 {
        return Err(EvalError::TooFewSamples(n));
    }
    let half = SLOPE_HALF_SPAN.min((n - 1) / 2).max(1);
    let mut last: Option<(i8, usize)> = None;
    let mut turn = None;
    for j in half..n - half {
        let (p, q) = (pts[j - half], pts[j + half]);
        let slope = (q.1 - p.1) / (q.0 - p.0);
        let sign = if slope > SLOPE_DEAD_BAND {
            1
        } else if slope < -SLOPE_DEAD_BAND {
            -1
        } else {
            0
        };
        if sign == 0 {
            continue;
        }
        match last {
            Some((s, idx)) if s != sign => {
                turn = Some((idx + j) / 2);
                break;
            }
            _ => last = Some((sign, j)),
        }
    }
    let b = turn.unwrap_or_else(|| {
        let mid = 0.5 * (pts[0].0 + pts[n - 1].0);
        (1..n - 1)
            .min_by(|&i, &k| (pts[i].0 - mid).abs().total_cmp(&(pts[k].0 - mid).abs()))
            .expect("n >= 3")
    });
    Ok([pts[0], pts[b], pts[n - 1]])
}

/// Three-point curvature of a headline: both ends and the point where its slope changes sign.
pub fn curvature(line: &Polyline) -> Result<f64, EvalError> {
    let [a, b, c] = curvature_points(line)?;
    three_point_curvature(a, b, c)
}

pub fn curvature_rmse(real: &[f64], synth: &[f64]) -> Result<f64, EvalError> {
    if real.len() != synth.len() {
        return Err(EvalError::LengthMismatch(real.len(), synth.len()));
    }
    if real.is_empty() {
        return Err(EvalError::Empty);
    }
    let sse: f64 = real.iter().zip(synth).map(|(a, b)| (a - b).powi(2)).sum();
    Ok((sse / real.len() as f64).sqrt())
}

/// Signed headline curvature of the four selected lines of `img`.
pub fn image_curvatures(img: &BinaryImage) -> Result<Vec<f64>, EvalError> {
    select_lines(&segment_lines(img))?
        .iter()
        .map(|band| curvature(&extract_headline(img, band)?))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvaturePair {
    pub real: f64,
    pub synth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub lines: Vec<CurvaturePair>,
    /// RMSE of absolute curvatures.
    pub rc: f64,
    pub n: usize,
}

impl CurvatureReport {
    pub fn from_curvatures(real: &[f64], synth: &[f64]) -> Result<Self, EvalError> {
        let abs = |v: &[f64]| v.iter().map(|x| x.abs()).collect::<Vec<_>>();
        let rc = curvature_rmse(&abs(real), &abs(synth))?;
        let lines = real
            .iter()
            .zip(synth)
            .map(|(&real, &synth)| CurvaturePair { real, synth })
            .collect();
        Ok(Self {
            lines,
            rc,
            n: real.len(),
        })
    }

    /// Measures both images with [`image_curvatures`] and compares them.
    pub fn compare(real: &BinaryImage, synth: &BinaryImage) -> Result<Self, EvalError> {
        Self::from_curvatures(&image_curvatures(real)?, &image_curvatures(synth)?)
    }
}

/// `(pooled, per_image_mean)` aggregation of several reports.
///
/// Pooled is the RMSE over every line of every report; per-image mean is the
/// average of the reports' own `rc`.
pub fn aggregate_rc(reports: &[CurvatureReport]) -> Option<(f64, f64)> {
    if reports.is_empty() {
        return None;
    }
    let (sse, n) = reports.iter().flat_map(|r| &r.lines).fold((0.0, 0usize), |(s, n), p| {
        (s + (p.real.abs() - p.synth.abs()).powi(2), n + 1)
    });
    let pooled = (sse / n.max(1) as f64).sqrt();
    let mean = reports.iter().map(|r| r.rc).sum::<f64>() / reports.len() as f64;
    Some((pooled, mean))
}

/// Pixel confusion counts with foreground as the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

fn same_size(gt: &BinaryImage, res: &BinaryImage) -> Result<(), EvalError> {
    if gt.rows() != res.rows() || gt.cols() != res.cols() {
        return Err(EvalError::DimensionMismatch(
            gt.rows(),
            gt.cols(),
            res.rows(),
            res.cols(),
        ));
    }
    Ok(())
}

pub fn confusion(gt: &BinaryImage, res: &BinaryImage) -> Result<Confusion, EvalError> {
    same_size(gt, res)?;
    let mut c = Confusion::default();
    for (&g, &r) in gt.pixels().iter().zip(res.pixels()) {
        match (g, r) {
            (true, true) => c.tp += 1,
            (false, true) => c.fp += 1,
            (true, false) => c.fn_ += 1,
            (false, false) => c.tn += 1,
        }
    }
    Ok(c)
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        1.0
    } else {
        num as f64 / den as f64
    }
}

/// `(TP/(TP+FP), TP/(TP+FN))`, with `0/0` taken as 1.
pub fn precision_recall(gt: &BinaryImage, res: &BinaryImage) -> Result<(f64, f64), EvalError> {
    let c = confusion(gt, res)?;
    Ok((ratio(c.tp, c.tp + c.fp), ratio(c.tp, c.tp + c.fn_)))
}

pub fn f_measure(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// PSNR in dB; identical images have no finite value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Psnr {
    Finite(f64),
    Infinite,
}

impl Psnr {
    pub fn value(self) -> f64 {
        match self {
            Psnr::Finite(v) => v,
            Psnr::Infinite => f64::INFINITY,
        }
    }
}

impl std::fmt::Display for Psnr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Psnr::Finite(v) => write!(f, "{v:.4}"),
            Psnr::Infinite => f.write_str("inf"),
        }
    }
}

/// `10·log10(1 / MSE)` with MSE the fraction of differing pixels.
pub fn psnr(gt: &BinaryImage, res: &BinaryImage) -> Result<Psnr, EvalError> {
    same_size(gt, res)?;
    let diff = gt.pixels().iter().zip(res.pixels()).filter(|(a, b)| a != b).count();
    if diff == 0 {
        return Ok(Psnr::Infinite);
    }
    let mse = diff as f64 / gt.pixels().len() as f64;
    Ok(Psnr::Finite(10.0 * (1.0 / mse).log10()))
}

/// Normalised 5×5 reciprocal-distance weights used by DRD; centre weight 0.
pub fn drd_weights() -> [[f64; 5]; 5] {
    let mut w = [[0.0; 5]; 5];
    let mut total = 0.0;
    for (i, row) in w.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            let (di, dj) = (i as f64 - 2.0, j as f64 - 2.0);
            if di != 0.0 || dj != 0.0 {
                *v = 1.0 / di.hypot(dj);
                total += *v;
            }
        }
    }
    w.iter_mut().flatten().for_each(|v| *v /= total);
    w
}

/// Number of 8×8 ground-truth blocks (edge blocks included) holding both ink and background.
pub fn non_uniform_blocks(gt: &BinaryImage) -> usize {
    let mut count = 0;
    for br in (0..gt.rows()).step_by(8) {
        for bc in (0..gt.cols()).step_by(8) {
            let mut seen = [false; 2];
            for r in br..(br + 8).min(gt.rows()) {
                for c in bc..(bc + 8).min(gt.cols()) {
                    seen[gt.get(r, c) as usize] = true;
                }
            }
            count += (seen[0] && seen[1]) as usize;
        }
    }
    count
}

/// Distance-reciprocal distortion of `res` against `gt`.
pub fn drd(gt: &BinaryImage, res: &BinaryImage) -> Result<f64, EvalError> {
    same_size(gt, res)?;
    let w = drd_weights();
    let (rows, cols) = (gt.rows() as isize, gt.cols() as isize);
    let mut total = 0.0;
    let mut flipped = 0usize;
    for r in 0..rows {
        for c in 0..cols {
            let value = res.get(r as usize, c as usize);
            if value == gt.get(r as usize, c as usize) {
                continue;
            }
            flipped += 1;
            for (i, wrow) in w.iter().enumerate() {
                for (j, &wij) in wrow.iter().enumerate() {
                    let (rr, cc) = (r + i as isize - 2, c + j as isize - 2);
                    let neighbour = rr >= 0 && cc >= 0 && rr < rows && cc < cols && gt.get(rr as usize, cc as usize);
                    if neighbour != value {
                        total += wij;
                    }
                }
            }
        }
    }
    if flipped == 0 {
        return Ok(0.0);
    }
    match non_uniform_blocks(gt) {
        0 => Err(EvalError::UndefinedDrd),
        nubn => Ok(total / nubn as f64),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "MetricReportRepr", from = "MetricReportRepr")]
pub struct MetricReport {
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    pub psnr: Psnr,
    pub drd: f64,
}

#[derive(Serialize, Deserialize)]
struct MetricReportRepr {
    precision: f64,
    recall: f64,
    f_measure: f64,
    psnr: Option<f64>,
    psnr_infinite: bool,
    drd: f64,
}

impl From<MetricReport> for MetricReportRepr {
    fn from(m: MetricReport) -> Self {
        let (psnr, psnr_infinite) = match m.psnr {
            Psnr::Finite(v) => (Some(v), false),
            Psnr::Infinite => (None, true),
        };
        Self {
            precision: m.precision,
            recall: m.recall,
            f_measure: m.f_measure,
            psnr,
            psnr_infinite,
            drd: m.drd,
        }
    }
}

impl From<MetricReportRepr> for MetricReport {
    fn from(r: MetricReportRepr) -> Self {
        let psnr = match (r.psnr_infinite, r.psnr) {
            (false, Some(v)) => Psnr::Finite(v),
            _ => Psnr::Infinite,
        };
        Self {
            precision: r.precision,
            recall: r.recall,
            f_measure: r.f_measure,
            psnr,
            drd: r.drd,
        }
    }
}

impl MetricReport {
    /// Fixed-order, human-readable table.
    pub fn table(&self) -> String {
        format!(
            "precision  {:.6}\nrecall     {:.6}\nf_measure  {:.6}\npsnr_db    {}\ndrd        {:.6}\n",
            self.precision, self.recall, self.f_measure, self.psnr, self.drd
        )
    }
}

pub fn evaluate_pair(gt: &BinaryImage, res: &BinaryImage) -> Result<MetricReport, EvalError> {
    let (precision, recall) = precision_recall(gt, res)?;
    Ok(MetricReport {
        precision,
        recall,
        f_measure: f_measure(precision, recall),
        psnr: psnr(gt, res)?,
        drd: drd(gt, res)?,
    })
}
