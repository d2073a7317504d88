//! Pade approximants. The linear system is solved in double-double arithmetic
//! on a power-of-two rescaled variable, which keeps the f64 input data as the
//! only significant source of error.

use crate::dd::Cdd;
use crate::error::{Result, UmbraError};
use nalgebra::DMatrix;
use num_complex::Complex64;

type C64 = Complex64;

#[derive(Clone, Debug)]
pub struct Pade {
    /// Numerator coefficients in x = z / scale.
    num: Vec<C64>,
    /// Denominator coefficients in x = z / scale, den[0] = 1.
    den: Vec<C64>,
    scale: f64,
    requested: (usize, usize),
}

impl Pade {
    /// Degrees actually used; smaller than requested when the system was singular.
    pub fn order(&self) -> (usize, usize) {
        (self.num.len() - 1, self.den.len() - 1)
    }

    pub fn requested_order(&self) -> (usize, usize) {
        self.requested
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn eval(&self, z: C64) -> C64 {
        let x = z / self.scale;
        if x.norm() <= 1.0 {
            horner(&self.num, x) / horner(&self.den, x)
        } else {
            // Reversed Horner in 1/x avoids overflow far from the origin.
            let y = x.inv();
            let (l, m) = self.order();
            let n = rev_horner(&self.num, y);
            let d = rev_horner(&self.den, y);
            let ratio = n / d;
            if l >= m {
                ratio * x.powu((l - m) as u32)
            } else {
                ratio * y.powu((m - l) as u32)
            }
        }
    }

    /// Zeros of the denominator in the original variable.
    pub fn poles(&self) -> Vec<C64> {
        polynomial_roots(&self.den)
            .into_iter()
            .map(|r| r * self.scale)
            .collect()
    }

    /// Zeros of the numerator in the original variable.
    pub fn zeros(&self) -> Vec<C64> {
        polynomial_roots(&self.num)
            .into_iter()
            .map(|r| r * self.scale)
            .collect()
    }
}

fn horner(c: &[C64], x: C64) -> C64 {
    c.iter()
        .rev()
        .fold(C64::new(0.0, 0.0), |acc, &a| acc * x + a)
}

fn rev_horner(c: &[C64], y: C64) -> C64 {
    c.iter().fold(C64::new(0.0, 0.0), |acc, &a| acc * y + a)
}

/// Power of two close to the radius suggested by a log-linear fit of |c_r|.
fn choose_scale(c: &[Cdd]) -> f64 {
    let pts: Vec<(f64, f64)> = c
        .iter()
        .enumerate()
        .filter_map(|(r, v)| {
            let m = v.norm();
            (m > 0.0 && m.is_finite()).then(|| (r as f64, m.ln()))
        })
        .collect();
    if pts.len() < 2 {
        return 1.0;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return 1.0;
    }
    let slope = sxy / sxx;
    let e = (-slope / std::f64::consts::LN_2)
        .round()
        .clamp(-200.0, 200.0);
    2f64.powi(e as i32)
}

/// Solves A x = b by Gaussian elimination with partial pivoting; `None` when a
/// pivot vanishes.
fn solve_dd(mut a: Vec<Vec<Cdd>>, mut b: Vec<Cdd>) -> Option<Vec<Cdd>> {
    let n = b.len();
    let amax = a
        .iter()
        .flat_map(|row| row.iter().map(|v| v.norm()))
        .fold(0.0, f64::max);
    if amax == 0.0 {
        return None;
    }
    for col in 0..n {
        let (piv, pmag) = (col..n)
            .map(|r| (r, a[r][col].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if pmag <= 1e-300 * amax.max(1.0) || pmag == 0.0 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f == Cdd::ZERO {
                continue;
            }
            for k in col..n {
                let t = a[col][k];
                a[r][k] = a[r][k] - f * t;
            }
            let t = b[col];
            b[r] = b[r] - f * t;
        }
    }
    let mut x = vec![Cdd::ZERO; n];
    for r in (0..n).rev() {
        let mut s = b[r];
        for k in r + 1..n {
            s = s - a[r][k] * x[k];
        }
        x[r] = s / a[r][r];
    }
    Some(x)
}

/// [l/m] Pade approximant from double-double coefficients c_0..c_{l+m}.
pub fn pade_dd(c: &[Cdd], l: usize, m: usize) -> Result<Pade> {
    let needed = l + m + 1;
    if c.len() < needed {
        return Err(UmbraError::InsufficientCoefficients {
            order: m,
            needed,
            found: c.len(),
        });
    }
    let c = &c[..needed];
    let scale = choose_scale(c);
    let mut s = Cdd::ONE;
    let ch: Vec<Cdd> = c
        .iter()
        .map(|&v| {
            let out = v * s;
            s = s.scale(scale);
            out
        })
        .collect();
    let at = |i: isize| if i < 0 { Cdd::ZERO } else { ch[i as usize] };

    let requested = (l, m);
    let (mut l, mut m) = (l, m);
    loop {
        let q = if m == 0 {
            Some(vec![])
        } else {
            let a: Vec<Vec<Cdd>> = (0..m)
                .map(|row| {
                    let i = (l + 1 + row) as isize;
                    (1..=m).map(|j| at(i - j as isize)).collect()
                })
                .collect();
            let b: Vec<Cdd> = (0..m).map(|row| -at((l + 1 + row) as isize)).collect();
            solve_dd(a, b)
        };
        match q {
            Some(qv) => {
                let mut den = vec![Cdd::ONE];
                den.extend(qv);
                let mut num: Vec<Cdd> = (0..=l)
                    .map(|i| {
                        (0..=i.min(m)).fold(Cdd::ZERO, |acc, j| acc + den[j] * at((i - j) as isize))
                    })
                    .collect();
                while num.len() > 1 && *num.last().unwrap() == Cdd::ZERO {
                    num.pop();
                }
                return Ok(Pade {
                    num: num.into_iter().map(Cdd::to_c64).collect(),
                    den: den.into_iter().map(Cdd::to_c64).collect(),
                    scale,
                    requested,
                });
            }
            None => {
                // Degenerate block of the Pade table: step down the diagonal.
                m -= 1;
                l = l.saturating_sub(1);
            }
        }
    }
}

pub fn pade(c: &[C64], l: usize, m: usize) -> Result<Pade> {
    let cd: Vec<Cdd> = c.iter().map(|&v| Cdd::from(v)).collect();
    pade_dd(&cd, l, m)
}

/// Roots of sum_j c_j x^j via the eigenvalues of the companion matrix,
/// polished by Newton steps.
pub fn polynomial_roots(c: &[C64]) -> Vec<C64> {
    let cmax = c.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut deg = c.len() - 1;
    while deg > 0 && c[deg].norm() <= 1e-300 * cmax.max(1.0) {
        deg -= 1;
    }
    if deg == 0 {
        return vec![];
    }
    let lead = c[deg];
    let mut comp = DMatrix::<C64>::zeros(deg, deg);
    for j in 0..deg {
        comp[(0, j)] = -c[deg - 1 - j] / lead;
    }
    for i in 1..deg {
        comp[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    let roots: Vec<C64> = match comp.clone().try_schur(1e-15, 10_000) {
        Some(s) => s
            .eigenvalues()
            .map(|e| e.iter().copied().collect())
            .unwrap_or_default(),
        None => vec![],
    };
    let poly = &c[..=deg];
    roots
        .into_iter()
        .map(|mut z| {
            for _ in 0..3 {
                let (mut p, mut dp) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
                for &a in poly.iter().rev() {
                    dp = dp * z + p;
                    p = p * z + a;
                }
                if dp.norm() == 0.0 {
                    break;
                }
                let step = p / dp;
                if !step.is_finite() || step.norm() > 1e-3 * z.norm().max(1e-300) {
                    break;
                }
                z -= step;
            }
            z
        })
        .collect()
}
