//! Evaluation of truncated convergent-class series at a point, including the
//! boundary of the disk of convergence and just beyond it.

use crate::error::{Result, UmbraError};
use crate::pade::pade;
use crate::series::FormalSeries;
use num_complex::Complex64;
use serde::Serialize;

type C64 = Complex64;

const MAX_CONTINUATION_ORDER: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum SummationMethod {
    Direct,
    /// Repeated pairwise averaging of partial sums.
    Averaged {
        levels: usize,
    },
    /// Diagonal Pade continuation of the truncated series.
    Pade {
        order: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Summed {
    #[serde(serialize_with = "crate::series::serialize_complex")]
    pub value: C64,
    pub method: SummationMethod,
    pub error_estimate: f64,
}

/// Geometric growth rate of |a_r z^r| over the upper half of the nonzero terms.
pub fn term_ratio(terms: &[C64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = terms
        .iter()
        .enumerate()
        .skip(terms.len() / 2)
        .filter_map(|(r, t)| (t.norm() > 0.0).then(|| (r as f64, t.norm().ln())))
        .collect();
    if pts.len() < 4 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some((sxy / sxx).exp())
}

fn partial_sums(terms: &[C64]) -> Vec<C64> {
    let mut acc = C64::new(0.0, 0.0);
    terms
        .iter()
        .map(|&t| {
            acc += t;
            acc
        })
        .collect()
}

/// Repeatedly replaces the partial sums by averages of neighbours. Returns the
/// value, the change over the last level, and the number of levels used.
pub fn iterated_average(partials: &[C64]) -> (C64, f64, usize) {
    let mut s = partials.to_vec();
    let mut best = (*s.last().unwrap_or(&C64::new(0.0, 0.0)), f64::INFINITY, 0);
    let mut prev = best.0;
    let mut level = 0;
    while s.len() > 1 {
        s = s.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        level += 1;
        let v = *s.last().unwrap();
        let change = (v - prev).norm();
        if change <= best.1 {
            best = (v, change, level);
        }
        prev = v;
    }
    best
}

/// Pade [m/m] value at z for successive m; keeps the order whose value moved
/// least from the previous order.
pub fn pade_continuation(a: &FormalSeries, z: C64) -> Result<(C64, f64, usize)> {
    let max_m = (a.truncation() / 2).min(MAX_CONTINUATION_ORDER);
    if max_m < 3 {
        return Err(UmbraError::InsufficientCoefficients {
            order: 3,
            needed: 7,
            found: a.truncation() + 1,
        });
    }
    let mut prev: Option<C64> = None;
    let mut best: Option<(C64, f64, usize)> = None;
    for m in 2..=max_m {
        let p = pade(a.coeffs(), m, m)?;
        let v = p.eval(z);
        if !v.is_finite() {
            prev = None;
            continue;
        }
        if let Some(pv) = prev {
            let d = (v - pv).norm();
            if best.map_or(true, |b| d < b.1) {
                best = Some((v, d, m));
            }
        }
        prev = Some(v);
    }
    best.ok_or_else(|| UmbraError::QuadratureDivergence(format!("no finite Pade value at z = {z}")))
}

/// True when consecutive nonzero terms mostly point in opposite directions.
fn alternating(terms: &[C64]) -> bool {
    let nz: Vec<C64> = terms.iter().copied().filter(|t| t.norm() > 0.0).collect();
    let pairs = nz.windows(2).skip(nz.len() / 2);
    let (mut neg, mut total) = (0usize, 0usize);
    for w in pairs {
        total += 1;
        if (w[1] * w[0].conj()).re < 0.0 {
            neg += 1;
        }
    }
    total > 0 && 10 * neg >= 9 * total
}

/// Sums a convergent-class series at z: directly when the terms have died
/// out, by averaging partial sums of a slowly converging alternating series,
/// and by Pade continuation otherwise.
pub fn sum_series(a: &FormalSeries, z: C64) -> Result<Summed> {
    let terms = a.terms(z);
    let direct: C64 = terms.iter().sum();
    let scale = terms
        .iter()
        .map(|t| t.norm())
        .fold(direct.norm(), f64::max)
        .max(1e-300);
    let tail = terms
        .iter()
        .rev()
        .take(2)
        .map(|t| t.norm())
        .fold(0.0, f64::max);
    if tail <= 1e-16 * scale {
        return Ok(Summed {
            value: direct,
            method: SummationMethod::Direct,
            error_estimate: tail + f64::EPSILON * scale,
        });
    }
    let ratio = term_ratio(&terms).unwrap_or(0.0);
    if ratio <= 1.02 && alternating(&terms) {
        let (value, change, levels) = iterated_average(&partial_sums(&terms));
        return Ok(Summed {
            value,
            method: SummationMethod::Averaged { levels },
            error_estimate: change + f64::EPSILON * scale,
        });
    }
    let (value, change, order) = pade_continuation(a, z)?;
    Ok(Summed {
        value,
        method: SummationMethod::Pade { order },
        error_estimate: change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{exp_series, geometric_series};

    #[test]
    fn decaying_terms_are_summed_directly() {
        let s = sum_series(&exp_series(C64::new(1.0, 0.0), 40), C64::new(1.0, 0.0)).unwrap();
        assert_eq!(s.method, SummationMethod::Direct);
        assert!((s.value.re - std::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn boundary_alternating_series_is_averaged() {
        // sum (-1)^r binom(2r, r) 4^{-r} = 1/sqrt(2)
        let mut c = 1.0;
        let a = FormalSeries::from_fn(400, |r| {
            if r > 0 {
                c *= -((2 * r - 1) as f64) / (2 * r) as f64;
            }
            C64::new(c, 0.0)
        })
        .unwrap();
        let s = sum_series(&a, C64::new(1.0, 0.0)).unwrap();
        assert!(matches!(s.method, SummationMethod::Averaged { .. }));
        assert!(
            (s.value.re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12,
            "{s:?}"
        );
    }

    #[test]
    fn outside_the_disk_uses_pade() {
        let a = geometric_series(C64::new(-1.0, 0.0), 30);
        let s = sum_series(&a, C64::new(3.0, 0.0)).unwrap();
        assert!(matches!(s.method, SummationMethod::Pade { .. }));
        assert!((s.value.re - 0.25).abs() < 1e-13);
    }
}
