//! Piecewise-cubic curves through a row's knots.
//!
//! Two fits are available:
//!
//! * [`fit`] is the natural cubic smoothing spline: it minimises
//!   `Σ (yᵢ − g(xᵢ))² + λ ∫ g''²` with zero second derivative at both ends
//!   (Reinsch's formulation). `λ = 0` interpolates the knots exactly and
//!   `λ → ∞` tends to the least-squares line.
//! * [`fit_monotone`] is a shape-preserving cubic Hermite interpolant
//!   (Fritsch–Carlson slopes, same end rules as PCHIP). It passes through the
//!   knots, is C¹, and never overshoots between knots, so a row whose knot
//!   values decay to zero stays on one side of zero.
//!
//! Both produce a [`SplineCurve`] that is evaluated only inside the knot span.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SplineError {
    #[error("need at least 2 knots, got {0}")]
    TooFewKnots(usize),
    #[error("knot columns must be strictly increasing (index {index}: {prev} then {next})")]
    NotIncreasing { index: usize, prev: f64, next: f64 },
    #[error("non-finite knot at index {0}")]
    NonFinite(usize),
    #[error("smoothing parameter must be finite and >= 0, got {0}")]
    BadLambda(f64),
    #[error("column {column} outside knot span [{first}, {last}]")]
    OutOfSpan { column: f64, first: f64, last: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Knot {
    pub column: f64,
    pub value: f64,
}

impl Knot {
    pub fn new(column: f64, value: f64) -> Self {
        Self { column, value }
    }
}

/// Which piecewise cubic a warp field uses along each row.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Interpolant {
    /// Shape-preserving cubic Hermite interpolation.
    #[default]
    Monotone,
    /// Natural cubic smoothing spline with penalty `lambda`.
    Natural { lambda: f64 },
}

impl Interpolant {
    pub fn fit(&self, knots: &[Knot]) -> Result<SplineCurve, SplineError> {
        match *self {
            Interpolant::Monotone => fit_monotone(knots),
            Interpolant::Natural { lambda } => fit(knots, lambda),
        }
    }

    /// Smoothing penalty; zero for the interpolating kinds.
    pub fn lambda(&self) -> f64 {
        match *self {
            Interpolant::Monotone => 0.0,
            Interpolant::Natural { lambda } => lambda,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Interpolant::Monotone => "monotone",
            Interpolant::Natural { .. } => "natural",
        }
    }
}

/// Piecewise cubic `a + b·t + c·t² + d·t³` with `t = x − xᵢ` on each segment.
#[derive(Debug, Clone, PartialEq)]
pub struct SplineCurve {
    columns: Vec<f64>,
    coeffs: Vec<[f64; 4]>,
    last_value: f64,
    interpolant: Interpolant,
}

fn validate(knots: &[Knot]) -> Result<(), SplineError> {
    if knots.len() < 2 {
        return Err(SplineError::TooFewKnots(knots.len()));
    }
    for (i, k) in knots.iter().enumerate() {
        if !k.column.is_finite() || !k.value.is_finite() {
            return Err(SplineError::NonFinite(i));
        }
    }
    for (i, w) in knots.windows(2).enumerate() {
        if w[1].column <= w[0].column {
            return Err(SplineError::NotIncreasing {
                index: i + 1,
                prev: w[0].column,
                next: w[1].column,
            });
        }
    }
    Ok(())
}

/// Natural cubic smoothing spline through `knots` with penalty `lambda`.
pub fn fit(knots: &[Knot], lambda: f64) -> Result<SplineCurve, SplineError> {
    validate(knots)?;
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(SplineError::BadLambda(lambda));
    }
    let n = knots.len();
    let x: Vec<f64> = knots.iter().map(|k| k.column).collect();
    let y: Vec<f64> = knots.iter().map(|k| k.value).collect();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let m = n - 2;

    // Q is n×m (column j touches rows j, j+1, j+2); R is m×m tridiagonal.
    let q = |row: usize, col: usize| -> f64 {
        match row as isize - col as isize {
            0 => 1.0 / h[col],
            1 => -1.0 / h[col] - 1.0 / h[col + 1],
            2 => 1.0 / h[col + 1],
            _ => 0.0,
        }
    };
    let mut a = vec![0.0; m * m];
    let mut rhs = vec![0.0; m];
    for i in 0..m {
        a[i * m + i] = (h[i] + h[i + 1]) / 3.0;
        if i + 1 < m {
            a[i * m + i + 1] = h[i + 1] / 6.0;
            a[(i + 1) * m + i] = h[i + 1] / 6.0;
        }
        for j in 0..m {
            if lambda > 0.0 {
                let qtq: f64 = (0..n).map(|r| q(r, i) * q(r, j)).sum();
                a[i * m + j] += lambda * qtq;
            }
        }
        rhs[i] = (i..i + 3).map(|r| q(r, i) * y[r]).sum();
    }
    let gamma = solve_spd(&mut a, &mut rhs, m);

    let fitted: Vec<f64> = (0..n)
        .map(|r| {
            if lambda == 0.0 {
                y[r]
            } else {
                let lo = r.saturating_sub(2);
                let hi = r.min(m.saturating_sub(1));
                let q_gamma: f64 = (lo..=hi).filter(|&j| j < m).map(|j| q(r, j) * gamma[j]).sum();
                y[r] - lambda * q_gamma
            }
        })
        .collect();
    let mut second = vec![0.0; n];
    second[1..n - 1].copy_from_slice(&gamma);

    let coeffs = (0..n - 1)
        .map(|i| {
            let hi = h[i];
            let (m0, m1) = (second[i], second[i + 1]);
            [
                fitted[i],
                (fitted[i + 1] - fitted[i]) / hi - hi * (2.0 * m0 + m1) / 6.0,
                m0 / 2.0,
                (m1 - m0) / (6.0 * hi),
            ]
        })
        .collect();
    Ok(SplineCurve {
        columns: x,
        coeffs,
        last_value: fitted[n - 1],
        interpolant: Interpolant::Natural { lambda },
    })
}

/// Shape-preserving cubic Hermite interpolant through `knots`.
pub fn fit_monotone(knots: &[Knot]) -> Result<SplineCurve, SplineError> {
    validate(knots)?;
    let n = knots.len();
    let x: Vec<f64> = knots.iter().map(|k| k.column).collect();
    let y: Vec<f64> = knots.iter().map(|k| k.value).collect();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let secant: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();

    let mut slope = vec![0.0; n];
    if n == 2 {
        slope = vec![secant[0]; 2];
    } else {
        for k in 1..n - 1 {
            let (s0, s1) = (secant[k - 1], secant[k]);
            if s0 * s1 > 0.0 {
                let w1 = 2.0 * h[k] + h[k - 1];
                let w2 = h[k] + 2.0 * h[k - 1];
                slope[k] = (w1 + w2) / (w1 / s0 + w2 / s1);
            }
        }
        slope[0] = end_slope(h[0], h[1], secant[0], secant[1]);
        slope[n - 1] = end_slope(h[n - 2], h[n - 3], secant[n - 2], secant[n - 3]);
    }

    let coeffs = (0..n - 1)
        .map(|i| {
            let (d0, d1, s) = (slope[i], slope[i + 1], secant[i]);
            [
                y[i],
                d0,
                (3.0 * s - 2.0 * d0 - d1) / h[i],
                (d0 + d1 - 2.0 * s) / (h[i] * h[i]),
            ]
        })
        .collect();
    Ok(SplineCurve {
        columns: x,
        coeffs,
        last_value: y[n - 1],
        interpolant: Interpolant::Monotone,
    })
}

/// One-sided three-point end slope, limited so the end segment stays monotone.
fn end_slope(h0: f64, h1: f64, s0: f64, s1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if d.signum() != s0.signum() || s0 == 0.0 {
        0.0
    } else if s0.signum() != s1.signum() && d.abs() > 3.0 * s0.abs() {
        3.0 * s0
    } else {
        d
    }
}

/// Cholesky solve of a small dense SPD system; `a` and `b` are overwritten.
fn solve_spd(a: &mut [f64], b: &mut [f64], m: usize) -> Vec<f64> {
    for j in 0..m {
        let mut diag = a[j * m + j];
        for k in 0..j {
            diag -= a[j * m + k] * a[j * m + k];
        }
        let diag = diag.sqrt();
        a[j * m + j] = diag;
        for i in j + 1..m {
            let mut v = a[i * m + j];
            for k in 0..j {
                v -= a[i * m + k] * a[j * m + k];
            }
            a[i * m + j] = v / diag;
        }
    }
    for i in 0..m {
        let mut v = b[i];
        for k in 0..i {
            v -= a[i * m + k] * b[k];
        }
        b[i] = v / a[i * m + i];
    }
    for i in (0..m).rev() {
        let mut v = b[i];
        for k in i + 1..m {
            v -= a[k * m + i] * b[k];
        }
        b[i] = v / a[i * m + i];
    }
    b.to_vec()
}

impl SplineCurve {
    pub fn first_column(&self) -> f64 {
        self.columns[0]
    }

    pub fn last_column(&self) -> f64 {
        *self.columns.last().expect("at least two knots")
    }

    pub fn interpolant(&self) -> Interpolant {
        self.interpolant
    }

    /// Per-segment `[a, b, c, d]` coefficients, one entry per knot interval.
    pub fn coefficients(&self) -> &[[f64; 4]] {
        &self.coeffs
    }

    pub fn eval(&self, column: f64) -> Result<f64, SplineError> {
        let (first, last) = (self.first_column(), self.last_column());
        if !(first..=last).contains(&column) {
            return Err(SplineError::OutOfSpan { column, first, last });
        }
        if column == last {
            return Ok(self.last_value);
        }
        let seg = self.columns.partition_point(|&x| x <= column) - 1;
        Ok(self.segment_value(seg, column))
    }

    #[inline]
    fn segment_value(&self, seg: usize, column: f64) -> f64 {
        let [a, b, c, d] = self.coeffs[seg];
        let t = column - self.columns[seg];
        a + t * (b + t * (c + t * d))
    }

    /// Writes the curve at integer columns `start, start + 1, …` into `out`.
    pub fn sample_columns(&self, start: usize, out: &mut [f64]) -> Result<(), SplineError> {
        if out.is_empty() {
            return Ok(());
        }
        let end = (start + out.len() - 1) as f64;
        for col in [start as f64, end] {
            if col < self.first_column() || col > self.last_column() {
                return Err(SplineError::OutOfSpan {
                    column: col,
                    first: self.first_column(),
                    last: self.last_column(),
                });
            }
        }
        let last = self.last_column();
        let mut seg = 0;
        for (i, slot) in out.iter_mut().enumerate() {
            let col = (start + i) as f64;
            if col == last {
                *slot = self.last_value;
                continue;
            }
            while self.columns[seg + 1] <= col {
                seg += 1;
            }
            *slot = self.segment_value(seg, col);
        }
        Ok(())
    }
}
