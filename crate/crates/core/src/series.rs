//! Truncated formal power series over the complex numbers.
//!
//! A series of truncation `N` stores `a_0..=a_N`; coefficients beyond `N` are
//! unknown, not zero. Binary operations truncate to the smaller window.

use crate::error::{Result, UmbraError};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

type C64 = Complex64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct FormalSeries {
    coeffs: Vec<C64>,
}

/// Wire form: `{"truncation": N, "coeffs": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    truncation: usize,
    coeffs: Vec<[f64; 2]>,
}

impl TryFrom<SeriesRepr> for FormalSeries {
    type Error = UmbraError;
    fn try_from(r: SeriesRepr) -> Result<Self> {
        let coeffs = r.coeffs.iter().map(|c| C64::new(c[0], c[1])).collect();
        FormalSeries::new(coeffs, r.truncation)
    }
}

impl From<FormalSeries> for SeriesRepr {
    fn from(s: FormalSeries) -> Self {
        SeriesRepr {
            truncation: s.truncation(),
            coeffs: s.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

/// Serializes a complex number as `[re, im]`.
pub fn serialize_complex<S: serde::Serializer>(
    z: &C64,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

pub fn serialize_complex_vec<S: serde::Serializer>(
    v: &[C64],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|z| [z.re, z.im]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(usize),
    /// Every retained coefficient is zero; the true valuation is at least N+1.
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<usize> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KrullDistance {
    pub value: f64,
    /// The operands agree on the whole shared window `0..=window`.
    pub indistinguishable: bool,
    pub window: usize,
}

impl FormalSeries {
    pub fn new(coeffs: Vec<C64>, truncation: usize) -> Result<Self> {
        if coeffs.len() != truncation + 1 {
            return Err(UmbraError::LengthMismatch {
                expected: truncation + 1,
                got: coeffs.len(),
                truncation,
            });
        }
        if let Some(index) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(UmbraError::NonFiniteCoefficient { index });
        }
        Ok(FormalSeries { coeffs })
    }

    /// Builds `a_r = f(r)` for `r = 0..=truncation`.
    pub fn from_fn(truncation: usize, f: impl FnMut(usize) -> C64) -> Result<Self> {
        FormalSeries::new((0..=truncation).map(f).collect(), truncation)
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(UmbraError::LengthMismatch {
                expected: 1,
                got: 0,
                truncation: 0,
            });
        }
        FormalSeries::new(
            coeffs.iter().map(|&x| C64::new(x, 0.0)).collect(),
            coeffs.len() - 1,
        )
    }

    pub fn zero(truncation: usize) -> Self {
        FormalSeries {
            coeffs: vec![C64::new(0.0, 0.0); truncation + 1],
        }
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeff(&self, r: usize) -> C64 {
        self.coeffs[r]
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    /// Keeps `a_0..=a_n` (no-op when `n` is not smaller than the truncation).
    pub fn truncate(&self, n: usize) -> Self {
        let n = n.min(self.truncation());
        FormalSeries {
            coeffs: self.coeffs[..=n].to_vec(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        FormalSeries {
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        FormalSeries {
            coeffs: (0..=n).map(|r| self.coeffs[r] + other.coeffs[r]).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn cauchy_product(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        let coeffs = (0..=n)
            .map(|m| (0..=m).map(|k| self.coeffs[k] * other.coeffs[m - k]).sum())
            .collect();
        FormalSeries { coeffs }
    }

    pub fn derive(&self) -> Result<Self> {
        if self.truncation() == 0 {
            return Err(UmbraError::DegenerateTruncation);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(r, &c)| c * (r + 1) as f64)
            .collect();
        Ok(FormalSeries { coeffs })
    }

    /// Index of the first coefficient that is exactly nonzero.
    pub fn valuation(&self) -> Valuation {
        match self.coeffs.iter().position(|c| c.re != 0.0 || c.im != 0.0) {
            Some(v) => Valuation::Finite(v),
            None => Valuation::Infinite,
        }
    }

    pub fn krull_distance(&self, other: &Self) -> KrullDistance {
        let diff = self.sub(other);
        let window = diff.truncation();
        match diff.valuation() {
            Valuation::Finite(v) => KrullDistance {
                value: 2f64.powi(-(v as i32)),
                indistinguishable: false,
                window,
            },
            Valuation::Infinite => KrullDistance {
                value: 0.0,
                indistinguishable: true,
                window,
            },
        }
    }

    /// `phi(t + chi(t)) = sum_n chi^n phi^{(n)} / n!`, exact up to the shared truncation.
    pub fn compose_shifted(&self, chi: &Self) -> Result<Self> {
        let n = self.truncation().min(chi.truncation());
        match chi.valuation() {
            Valuation::Finite(0) => return Err(UmbraError::CompositionNotFormallyConvergent),
            Valuation::Infinite => return Ok(self.truncate(n)),
            Valuation::Finite(_) => {}
        }
        let chi = chi.truncate(n);
        let mut out = vec![C64::new(0.0, 0.0); n + 1];
        // chi^j, kept on the full window: its valuation is at least j.
        let mut chi_pow = FormalSeries::zero(n);
        chi_pow.coeffs[0] = C64::new(1.0, 0.0);
        // phi^{(j)}/j!: coefficient m is binom(m+j, j) phi_{m+j}.
        for j in 0..=n {
            let dj: Vec<C64> = (0..=n - j)
                .map(|m| self.coeffs[m + j] * binomial(m + j, j))
                .collect();
            for (i, &cp) in chi_pow.coeffs.iter().enumerate().skip(j) {
                if cp == C64::new(0.0, 0.0) {
                    continue;
                }
                for (m, &d) in dj.iter().enumerate().take(n - i + 1) {
                    out[i + m] += cp * d;
                }
            }
            chi_pow = chi_pow.cauchy_product(&chi);
        }
        FormalSeries::new(out, n)
    }

    /// Horner evaluation of the retained polynomial.
    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Terms `a_r z^r`, r = 0..=N.
    pub fn terms(&self, z: C64) -> Vec<C64> {
        let mut p = C64::new(1.0, 0.0);
        self.coeffs
            .iter()
            .map(|&c| {
                let t = c * p;
                p *= z;
                t
            })
            .collect()
    }

    /// Multiplies by `t^shift`, keeping the truncation.
    pub fn shift_up(&self, shift: usize) -> Self {
        let n = self.truncation();
        let coeffs = (0..=n)
            .map(|r| {
                if r >= shift {
                    self.coeffs[r - shift]
                } else {
                    C64::new(0.0, 0.0)
                }
            })
            .collect();
        FormalSeries { coeffs }
    }

    /// Largest absolute deviation between coefficients on the shared window.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other)
            .coeffs
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn make_series(coeffs: Vec<C64>, truncation: usize) -> Result<FormalSeries> {
    FormalSeries::new(coeffs, truncation)
}

pub fn cauchy_product(a: &FormalSeries, b: &FormalSeries) -> FormalSeries {
    a.cauchy_product(b)
}

pub fn derive(a: &FormalSeries) -> Result<FormalSeries> {
    a.derive()
}

pub fn valuation(a: &FormalSeries) -> Valuation {
    a.valuation()
}

pub fn krull_distance(a: &FormalSeries, b: &FormalSeries) -> KrullDistance {
    a.krull_distance(b)
}

pub fn compose_shifted(phi: &FormalSeries, chi: &FormalSeries) -> Result<FormalSeries> {
    phi.compose_shifted(chi)
}

/// Maclaurin coefficients of `e^{c t}`.
pub fn exp_series(c: C64, truncation: usize) -> FormalSeries {
    let mut coeffs = Vec::with_capacity(truncation + 1);
    let mut a = C64::new(1.0, 0.0);
    for r in 0..=truncation {
        coeffs.push(a);
        a *= c / (r + 1) as f64;
    }
    FormalSeries { coeffs }
}

/// Maclaurin coefficients of `1/(1 - c t)`.
pub fn geometric_series(c: C64, truncation: usize) -> FormalSeries {
    let mut coeffs = Vec::with_capacity(truncation + 1);
    let mut a = C64::new(1.0, 0.0);
    for _ in 0..=truncation {
        coeffs.push(a);
        a *= c;
    }
    FormalSeries { coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(v: &[f64]) -> FormalSeries {
        FormalSeries::from_real(v).unwrap()
    }

    #[test]
    fn constructor_checks() {
        let s = make_series(
            vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.5, 0.0)],
            2,
        )
        .unwrap();
        assert_eq!(s.truncation(), 2);
        assert_eq!(FormalSeries::zero(0).valuation(), Valuation::Infinite);
        assert_eq!(
            make_series(vec![C64::new(1.0, 0.0), C64::new(f64::NAN, 0.0)], 1),
            Err(UmbraError::NonFiniteCoefficient { index: 1 })
        );
        assert!(matches!(
            make_series(vec![C64::new(1.0, 0.0)], 3),
            Err(UmbraError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn products() {
        let p = re(&[1.0, 1.0, 0.0]).cauchy_product(&re(&[1.0, -1.0, 0.0]));
        assert_eq!(p, re(&[1.0, 0.0, -1.0]));
        let e = exp_series(C64::new(1.0, 0.0), 10);
        let e2 = e.cauchy_product(&e);
        for n in 0..=10 {
            let want = 2f64.powi(n as i32) / crate::special::factorial(n);
            assert!((e2.coeff(n).re - want).abs() < 1e-14 * want);
        }
        assert_eq!(
            e.cauchy_product(&FormalSeries::zero(10)),
            FormalSeries::zero(10)
        );
        assert_eq!(
            re(&[1.0, 2.0, 3.0])
                .cauchy_product(&re(&[1.0]))
                .truncation(),
            0
        );
    }

    #[test]
    fn derivation() {
        assert_eq!(re(&[1.0, 1.0, 1.0]).derive().unwrap(), re(&[1.0, 2.0]));
        assert_eq!(re(&[4.0]).derive(), Err(UmbraError::DegenerateTruncation));
        let d = exp_series(C64::new(1.0, 0.0), 10).derive().unwrap();
        assert!(d.max_abs_diff(&exp_series(C64::new(1.0, 0.0), 9)) < 1e-15);
    }

    #[test]
    fn valuations_and_distance() {
        assert_eq!(
            re(&[0.0, 0.0, 0.0, 3.0, 0.0, 1.0]).valuation(),
            Valuation::Finite(3)
        );
        assert_eq!(re(&[7.0]).valuation(), Valuation::Finite(0));
        let a = re(&[1.0, 0.0]);
        let d = a.krull_distance(&a);
        assert_eq!(d.value, 0.0);
        assert!(d.indistinguishable);
        assert_eq!(a.krull_distance(&re(&[1.0, 1.0])).value, 0.5);
    }

    #[test]
    fn composition() {
        let e = exp_series(C64::new(1.0, 0.0), 8);
        assert_eq!(e.compose_shifted(&FormalSeries::zero(8)).unwrap(), e);
        // e^{t + t^2}: a_n = sum_{j} 1/(j! (n-2j)!)
        let chi = re(&[0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let got = e.compose_shifted(&chi).unwrap();
        let want = [
            1.0,
            1.0,
            1.5,
            7.0 / 6.0,
            25.0 / 24.0,
            27.0 / 40.0,
            331.0 / 720.0,
            1303.0 / 5040.0,
            1979.0 / 13440.0,
        ];
        for (n, w) in want.iter().enumerate() {
            assert!((got.coeff(n).re - w).abs() < 1e-14, "n={n}");
        }
        assert_eq!(
            e.compose_shifted(&re(&[0.3, 1.0])),
            Err(UmbraError::CompositionNotFormallyConvergent)
        );
    }

    #[test]
    fn wire_form_round_trip() {
        let s =
            FormalSeries::new(vec![C64::new(0.1, -2.5e-300), C64::new(1.0 / 3.0, 7.0)], 1).unwrap();
        let repr: SeriesRepr = s.clone().into();
        assert_eq!(FormalSeries::try_from(repr).unwrap(), s);
        let bad = SeriesRepr {
            truncation: 3,
            coeffs: vec![[1.0, 0.0]],
        };
        assert!(FormalSeries::try_from(bad).is_err());
    }
}
