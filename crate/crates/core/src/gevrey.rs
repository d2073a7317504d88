//! Gevrey classification of coefficient sequences.
//!
//! The fit is `log|c_r| = log C + r log A + sigma log r!` by least squares over
//! an index window; sigma is the Gevrey index and `k = 1/sigma` the level.

use crate::error::{Result, UmbraError};
use crate::series::FormalSeries;
use crate::special::ln_factorial;
use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use std::fmt;

pub const DEFAULT_CONVERGENT_THRESHOLD: f64 = 0.1;
const MIN_POINTS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Level {
    Finite(f64),
    /// Level of a convergent-class (0-Gevrey) sequence.
    Infinite,
}

impl Level {
    pub fn from_sigma(sigma: f64) -> Level {
        if sigma > 0.0 {
            Level::Finite(1.0 / sigma)
        } else {
            Level::Infinite
        }
    }

    /// 1/k, zero for the infinite level.
    pub fn inverse(self) -> f64 {
        match self {
            Level::Finite(k) => 1.0 / k,
            Level::Infinite => 0.0,
        }
    }
}

impl Serialize for Level {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Level::Finite(k) => s.serialize_f64(*k),
            Level::Infinite => s.serialize_str("inf"),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Finite(k) => write!(f, "{k}"),
            Level::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// |sigma| below the threshold: 0-Gevrey.
    Convergent,
    Divergent,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GevreyReport {
    pub sigma: f64,
    pub k: Level,
    #[serde(rename = "C")]
    pub constant_c: f64,
    #[serde(rename = "A")]
    pub constant_a: f64,
    #[serde(rename = "residual")]
    pub fit_residual: f64,
    pub window: (usize, usize),
    /// Unclamped regression slope.
    pub sigma_raw: f64,
    pub verdict: Verdict,
}

impl GevreyReport {
    pub fn is_convergent(&self) -> bool {
        self.verdict == Verdict::Convergent
    }
}

/// Default regression window `[N/2, N]`.
pub fn default_window(truncation: usize) -> (usize, usize) {
    (truncation / 2, truncation)
}

pub fn estimate_gevrey_index(
    a: &FormalSeries,
    window: Option<(usize, usize)>,
) -> Result<GevreyReport> {
    estimate_gevrey_index_with(a, window, DEFAULT_CONVERGENT_THRESHOLD)
}

pub fn estimate_gevrey_index_with(
    a: &FormalSeries,
    window: Option<(usize, usize)>,
    threshold: f64,
) -> Result<GevreyReport> {
    let (lo, hi) = window.unwrap_or_else(|| default_window(a.truncation()));
    let hi = hi.min(a.truncation());
    let points: Vec<(usize, f64)> = (lo..=hi)
        .filter_map(|r| {
            let m = a.coeff(r).norm();
            (m > 0.0).then(|| (r, m.ln()))
        })
        .collect();
    fit_log_magnitudes(&points, (lo, hi), threshold)
}

/// Same fit on precomputed `(r, ln|c_r|)` pairs, for sequences whose
/// magnitudes overflow f64 (e.g. (2r)!/r! at r = 200).
pub fn fit_log_magnitudes(
    points: &[(usize, f64)],
    window: (usize, usize),
    threshold: f64,
) -> Result<GevreyReport> {
    let pts: Vec<(usize, f64)> = points.iter().copied().filter(|p| p.1.is_finite()).collect();
    if pts.len() < MIN_POINTS {
        return Err(UmbraError::InsufficientData {
            needed: MIN_POINTS,
            found: pts.len(),
        });
    }
    let (beta, resid) = least_squares(&pts, true);
    let sigma_raw = beta[2];
    let (sigma, beta, resid) = if sigma_raw < 0.0 {
        let (b, res) = least_squares(&pts, false);
        (0.0, [b[0], b[1], 0.0], res)
    } else {
        (sigma_raw, beta, resid)
    };
    let verdict = if sigma < threshold {
        Verdict::Convergent
    } else {
        Verdict::Divergent
    };
    Ok(GevreyReport {
        sigma,
        k: Level::from_sigma(sigma),
        constant_c: beta[0].exp(),
        constant_a: beta[1].exp(),
        fit_residual: resid,
        window,
        sigma_raw,
        verdict,
    })
}

/// Returns ([log C, log A, sigma], rms residual).
fn least_squares(pts: &[(usize, f64)], with_sigma: bool) -> ([f64; 3], f64) {
    let cols = if with_sigma { 3 } else { 2 };
    // Centre the abscissae so the design matrix is well scaled.
    let r0 = pts.iter().map(|p| p.0 as f64).sum::<f64>() / pts.len() as f64;
    let f0 = pts.iter().map(|p| ln_factorial(p.0)).sum::<f64>() / pts.len() as f64;
    let m = DMatrix::from_fn(pts.len(), cols, |i, j| match j {
        0 => 1.0,
        1 => pts[i].0 as f64 - r0,
        _ => ln_factorial(pts[i].0) - f0,
    });
    let y = DVector::from_fn(pts.len(), |i, _| pts[i].1);
    let svd = m.clone().svd(true, true);
    let x = svd
        .solve(&y, 1e-14)
        .expect("SVD with both factors computed");
    let resid = (&m * &x - &y).norm() / (pts.len() as f64).sqrt();
    let slope = x[1];
    let sigma = if with_sigma { x[2] } else { 0.0 };
    let intercept = x[0] - slope * r0 - sigma * f0;
    ([intercept, slope, sigma], resid)
}

/// True iff `|c_r| <= C A^r (r!)^{1/k}` for every retained r.
pub fn check_gevrey_bound(a: &FormalSeries, k: Level, c: f64, big_a: f64) -> bool {
    let (lc, la, inv_k) = (c.ln(), big_a.ln(), k.inverse());
    a.coeffs().iter().enumerate().all(|(r, coef)| {
        let m = coef.norm();
        if m == 0.0 {
            return true;
        }
        let bound = lc + r as f64 * la + inv_k * ln_factorial(r);
        m.ln() <= bound + 1e-12 * (1.0 + bound.abs())
    })
}
