//! Simultaneous root refinement (Aberth-Ehrlich) for dense complex polynomials.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_ITER: usize = 1000;

fn horner_with_derivative(c: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + a;
    }
    (p, dp)
}

/// `sum |c_k| |x|^k`, the rounding scale of `p(x)`.
fn abs_eval(c: &[Complex64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * x + a.norm())
}

/// All complex roots of `sum c_k w^k` (ascending coefficients), with
/// multiplicity. Exact zero coefficients at the bottom give exact zero roots.
pub fn univariate_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|x| *x == Complex64::new(0.0, 0.0)) {
        c.pop();
    }
    if c.len() < 2 {
        return Err(Error::Unsupported("root finding needs degree >= 1".into()));
    }
    let zeros = c.iter().take_while(|x| **x == Complex64::new(0.0, 0.0)).count();
    let c = c.split_off(zeros);
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let deg = c.len() - 1;
    if deg == 0 {
        return Ok(roots);
    }
    if deg == 1 {
        roots.push(-c[0] / c[1]);
        return Ok(roots);
    }

    // initial guesses on a circle of the geometric-mean radius, with an
    // irrational angular offset so no guess sits on a symmetry axis
    let lead = c[deg].norm();
    let radius = (c[0].norm() / lead).powf(1.0 / deg as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / deg as f64 + 0.4;
            Complex64::from_polar(radius * (1.0 + 0.07 * (k as f64 % 3.0)), theta)
        })
        .collect();

    let mut converged = vec![false; deg];
    let mut iterations = 0;
    while iterations < MAX_ITER && converged.iter().any(|d| !d) {
        iterations += 1;
        for k in 0..deg {
            if converged[k] {
                continue;
            }
            let (p, dp) = horner_with_derivative(&c, z[k]);
            let scale = abs_eval(&c, z[k].norm());
            if p.norm() <= 4.0 * f64::EPSILON * scale {
                converged[k] = true;
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..deg)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = z[k] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        1.0 / d
                    }
                })
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if !step.is_finite() {
                continue;
            }
            z[k] -= step;
            if step.norm() <= 1e-15 * z[k].norm().max(1e-300) {
                converged[k] = true;
            }
        }
    }
    if converged.iter().any(|d| !d) {
        let worst = z
            .iter()
            .map(|&x| horner_with_derivative(&c, x).0.norm() / abs_eval(&c, x.norm()))
            .fold(0.0, f64::max);
        // multiple roots stall at a rounding floor well above machine epsilon
        if worst > 1e-6 {
            return Err(Error::NonConvergence {
                iterations,
                detail: format!("relative residual {worst:.3e}"),
            });
        }
    }
    for x in z.iter_mut() {
        *x = newton_polish(&c, *x);
    }
    roots.extend(z);
    Ok(roots)
}

/// A few guarded Newton steps; a step is kept only if it lowers `|p|`.
pub fn newton_polish(c: &[Complex64], mut x: Complex64) -> Complex64 {
    let mut best = horner_with_derivative(c, x).0.norm();
    for _ in 0..8 {
        let (p, dp) = horner_with_derivative(c, x);
        if dp.norm() == 0.0 {
            break;
        }
        let y = x - p / dp;
        let py = horner_with_derivative(c, y).0.norm();
        if !(py < best) {
            break;
        }
        best = py;
        x = y;
    }
    x
}

/// Groups values closer than `tol * max(1, |x|)`; returns centroids with counts.
pub fn cluster(values: &[Complex64], tol: f64) -> Vec<(Complex64, u64)> {
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for &v in values {
        let hit = groups.iter_mut().find(|g| {
            g.iter()
                .any(|&u| (u - v).norm() <= tol * u.norm().max(v.norm()).max(1.0))
        });
        match hit {
            Some(g) => g.push(v),
            None => groups.push(vec![v]),
        }
    }
    // merge groups that became connected
    let mut merged = true;
    while merged {
        merged = false;
        'outer: for a in 0..groups.len() {
            for b in a + 1..groups.len() {
                let close = groups[a].iter().any(|&u| {
                    groups[b]
                        .iter()
                        .any(|&v| (u - v).norm() <= tol * u.norm().max(v.norm()).max(1.0))
                });
                if close {
                    let g = groups.remove(b);
                    groups[a].extend(g);
                    merged = true;
                    break 'outer;
                }
            }
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let n = g.len();
            let s: Complex64 = g.iter().sum();
            (s / n as f64, n as u64)
        })
        .collect()
}
