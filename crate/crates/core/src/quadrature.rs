//! Gaussian rules (Golub-Welsch nodes, Christoffel weights), a double-exponential
//! rule on the half line, and adaptive Gauss-Legendre on intervals and tails.

use crate::special::gamma;
use num_complex::Complex64;
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;
use std::sync::{Arc, Mutex};

type C64 = Complex64;

#[derive(Clone, Debug)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Eigenvalues of the symmetric tridiagonal matrix (implicit QL with Wilkinson shifts).
fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter < 200, "tridiagonal QL failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| a.total_cmp(b));
    d
}

/// Christoffel weight 1 / sum_j p_j(x)^2 over the orthonormal polynomials,
/// accumulated with rescaling so that large nodes do not overflow.
fn christoffel_weight(x: f64, diag: &[f64], off: &[f64], mu0: f64) -> f64 {
    let n = diag.len();
    let mut p_prev = 0.0;
    let mut p = 1.0 / mu0.sqrt();
    let mut sum = p * p;
    let mut log_scale = 0.0; // values are multiplied by e^{log_scale}
    for j in 0..n - 1 {
        let b_prev = if j == 0 { 0.0 } else { off[j - 1] };
        let next = ((x - diag[j]) * p - b_prev * p_prev) / off[j];
        p_prev = p;
        p = next;
        sum += p * p;
        if p.abs() > 1e100 {
            p *= 1e-100;
            p_prev *= 1e-100;
            sum *= 1e-200;
            log_scale += 200.0 * std::f64::consts::LN_10;
        }
    }
    (-(sum.ln() + log_scale)).exp()
}

/// Newton correction p_n(x)/p_n'(x) from the three-term recurrence.
fn newton_step(x: f64, diag: &[f64], off: &[f64]) -> f64 {
    let n = diag.len();
    let (mut p0, mut p1) = (0.0, 1.0);
    let (mut d0, mut d1) = (0.0, 0.0);
    for j in 0..n {
        let b_prev = if j == 0 { 0.0 } else { off[j - 1] };
        // The last step uses b_n = 1; it only rescales p_n.
        let b = if j + 1 < n { off[j] } else { 1.0 };
        let p2 = ((x - diag[j]) * p1 - b_prev * p0) / b;
        let d2 = ((x - diag[j]) * d1 + p1 - b_prev * d0) / b;
        p0 = p1;
        p1 = p2;
        d0 = d1;
        d1 = d2;
        let m = p1.abs().max(d1.abs());
        if m > 1e100 {
            p0 /= m;
            p1 /= m;
            d0 /= m;
            d1 /= m;
        }
    }
    p1 / d1
}

fn golub_welsch(diag: Vec<f64>, off: Vec<f64>, mu0: f64) -> Rule {
    let mut nodes = tridiagonal_eigenvalues(&diag, &off);
    for x in nodes.iter_mut() {
        for _ in 0..2 {
            let dx = newton_step(*x, &diag, &off);
            if dx.is_finite() {
                *x -= dx;
            }
        }
    }
    let weights = nodes
        .iter()
        .map(|&x| christoffel_weight(x, &diag, &off, mu0))
        .collect();
    Rule { nodes, weights }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum RuleKey {
    Laguerre(usize, u64),
    Legendre(usize),
}

static CACHE: Lazy<Mutex<HashMap<RuleKey, Arc<Rule>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

fn cached(key: RuleKey, build: impl FnOnce() -> Rule) -> Arc<Rule> {
    if let Some(r) = CACHE.lock().unwrap().get(&key) {
        return r.clone();
    }
    let rule = Arc::new(build());
    CACHE.lock().unwrap().entry(key).or_insert(rule).clone()
}

/// Generalised Gauss-Laguerre rule for the weight `x^alpha e^{-x}` on (0, inf), alpha > -1.
pub fn gauss_laguerre(n: usize, alpha: f64) -> Arc<Rule> {
    assert!(n >= 2 && alpha > -1.0);
    cached(RuleKey::Laguerre(n, alpha.to_bits()), || {
        let diag = (0..n).map(|i| 2.0 * i as f64 + 1.0 + alpha).collect();
        let off = (1..n)
            .map(|i| (i as f64 * (i as f64 + alpha)).sqrt())
            .collect();
        golub_welsch(diag, off, gamma(C64::new(alpha + 1.0, 0.0)).unwrap().re)
    })
}

/// Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> Arc<Rule> {
    assert!(n >= 2);
    cached(RuleKey::Legendre(n), || {
        let diag = vec![0.0; n];
        let off = (1..n)
            .map(|i| {
                let i = i as f64;
                i / (4.0 * i * i - 1.0).sqrt()
            })
            .collect();
        golub_welsch(diag, off, 2.0)
    })
}

fn legendre_panel(f: &dyn Fn(f64) -> C64, a: f64, b: f64, rule: &Rule) -> C64 {
    let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&x, &w)| w * f(m + h * x))
        .sum::<C64>()
        * h
}

/// Adaptive Gauss-Legendre (20 points per panel, bisection on disagreement).
pub fn integrate_interval(f: &dyn Fn(f64) -> C64, a: f64, b: f64, tol: f64) -> C64 {
    let rule = gauss_legendre(20);
    fn recurse(
        f: &dyn Fn(f64) -> C64,
        a: f64,
        b: f64,
        whole: C64,
        tol: f64,
        depth: u32,
        rule: &Rule,
    ) -> C64 {
        let m = 0.5 * (a + b);
        let left = legendre_panel(f, a, m, rule);
        let right = legendre_panel(f, m, b, rule);
        let both = left + right;
        if depth >= 40 || (both - whole).norm() <= tol * both.norm().max(1e-300) || (b - a) < 1e-12
        {
            return both;
        }
        recurse(f, a, m, left, tol, depth + 1, rule) + recurse(f, m, b, right, tol, depth + 1, rule)
    }
    let whole = legendre_panel(f, a, b, &rule);
    recurse(f, a, b, whole, tol, 0, &rule)
}

/// Integral over [b, inf) with b > 0, mapped to (0, 1] by x = b/s.
pub fn integrate_tail(f: &dyn Fn(f64) -> C64, b: f64, tol: f64) -> C64 {
    assert!(b > 0.0);
    let g = |s: f64| {
        if s <= 0.0 {
            return C64::new(0.0, 0.0);
        }
        let x = b / s;
        let v = f(x) * (b / (s * s));
        if v.is_finite() {
            v
        } else {
            C64::new(0.0, 0.0)
        }
    };
    integrate_interval(&g, 0.0, 1.0, tol)
}

/// Integral over the whole real line, split at the given break points (sorted,
/// at least one); finite parts use unit-width panels.
pub fn integrate_real_line(f: &dyn Fn(f64) -> C64, breaks: &[f64], span: f64, tol: f64) -> C64 {
    let lo = breaks[0] - span;
    let hi = breaks[breaks.len() - 1] + span;
    let mut pts = vec![lo];
    pts.extend_from_slice(breaks);
    pts.push(hi);
    let mut total = C64::new(0.0, 0.0);
    for w in pts.windows(2) {
        let pieces = (w[1] - w[0]).ceil().max(1.0) as usize;
        let step = (w[1] - w[0]) / pieces as f64;
        for j in 0..pieces {
            let a = w[0] + j as f64 * step;
            total += integrate_interval(f, a, a + step, tol);
        }
    }
    // Tails, written as integrals over [c, inf) with c > 0.
    let right = |x: f64| f(x - 1.0 + hi);
    let left = |x: f64| f(-(x - 1.0) + lo);
    total + integrate_tail(&right, 1.0, tol) + integrate_tail(&left, 1.0, tol)
}

#[derive(Clone, Copy, Debug)]
pub struct DeResult {
    pub value: C64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Double-exponential (exp-sinh) rule for integrals over (0, inf):
/// x = exp((pi/2) sinh s), truncated to |s| <= 4.5, step halved until two
/// successive levels agree to `tol`.
pub fn de_half_line(f: &dyn Fn(f64) -> C64, tol: f64, max_level: u32) -> DeResult {
    const S_MAX: f64 = 4.5;
    let term = |s: f64| {
        let u = FRAC_PI_2 * s.sinh();
        let x = u.exp();
        let jac = x * FRAC_PI_2 * s.cosh();
        if x == 0.0 || !jac.is_finite() {
            return C64::new(0.0, 0.0);
        }
        let v = f(x) * jac;
        if v.is_finite() {
            v
        } else {
            C64::new(0.0, 0.0)
        }
    };
    let mut h = 0.5;
    let mut evaluations = 0;
    let mut sum = term(0.0);
    let n0 = (S_MAX / h) as i64;
    for j in 1..=n0 {
        let s = j as f64 * h;
        sum += term(s) + term(-s);
        evaluations += 2;
    }
    let mut value = sum * h;
    let mut err = f64::INFINITY;
    for _ in 0..max_level {
        h *= 0.5;
        let n = (S_MAX / h) as i64;
        let mut j = 1;
        while j <= n {
            let s = j as f64 * h;
            sum += term(s) + term(-s);
            evaluations += 2;
            j += 2;
        }
        let next = sum * h;
        err = (next - value).norm();
        value = next;
        if err <= tol * value.norm().max(1e-300) {
            break;
        }
    }
    DeResult {
        value,
        error_estimate: err,
        evaluations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laguerre_moments() {
        // int x^m e^{-x} = m!
        let rule = gauss_laguerre(32, 0.0);
        for m in 0..20 {
            let got: f64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(x, w)| w * x.powi(m))
                .sum();
            let want = crate::special::factorial(m as usize);
            assert!((got - want).abs() < 1e-12 * want, "m={m}");
        }
        // int x^{-1/2} e^{-x} cos(x) = Gamma(1/2) cos(pi/8) 2^{-1/4}
        let rule = gauss_laguerre(64, -0.5);
        let got: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(x, w)| w * x.cos())
            .sum();
        let want =
            std::f64::consts::PI.sqrt() * (std::f64::consts::PI / 8.0).cos() * 2f64.powf(-0.25);
        assert!((got - want).abs() < 1e-13);
    }

    #[test]
    fn large_rules_have_tiny_positive_weights() {
        let rule = gauss_laguerre(512, 0.0);
        assert!(rule.weights.iter().all(|&w| w >= 0.0 && w.is_finite()));
        let total: f64 = rule.weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-13);
        let m3: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(x, w)| w * x * x * x)
            .sum();
        assert!((m3 - 6.0).abs() < 1e-11);
    }

    #[test]
    fn legendre_and_tails() {
        let v = integrate_interval(&|x| C64::new(x.exp(), 0.0), 0.0, 1.0, 1e-14);
        assert!((v.re - (std::f64::consts::E - 1.0)).abs() < 1e-14);
        let t = integrate_tail(&|x| C64::new(1.0 / (x * x), 0.0), 2.0, 1e-14);
        assert!((t.re - 0.5).abs() < 1e-14);
        let g = integrate_real_line(&|x| C64::new((-x * x).exp(), 0.0), &[0.0], 6.0, 1e-13);
        assert!((g.re - std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn de_handles_endpoint_singularity() {
        // int_0^inf x^{-1/2} e^{-x} dx = sqrt(pi)
        let r = de_half_line(&|x| C64::new((-x).exp() / x.sqrt(), 0.0), 1e-14, 8);
        assert!(
            (r.value.re - std::f64::consts::PI.sqrt()).abs() < 1e-13,
            "{r:?}"
        );
    }
}
