//! Limited-memory BFGS with a backtracking Armijo line search.

use std::collections::VecDeque;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LbfgsOptions {
    pub memory: usize,
    pub max_iterations: usize,
    /// Stop once the gradient's infinity norm drops below this.
    pub gradient_tolerance: f64,
    pub armijo: f64,
    pub max_backtracks: usize,
    /// Curvature threshold that ends step expansion (weak Wolfe constant).
    pub curvature: f64,
    pub max_expansions: usize,
}

impl Default for LbfgsOptions {
    fn default() -> Self {
        LbfgsOptions { memory: 10, max_iterations: 500, gradient_tolerance: 1e-6, armijo: 1e-4, max_backtracks: 40, curvature: 0.9, max_expansions: 20 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LbfgsResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(g: &[f64]) -> f64 {
    g.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Minimises `f`, which returns the value and writes the gradient into its
/// second argument.
pub fn minimize(mut f: impl FnMut(&[f64], &mut [f64]) -> f64, x0: Vec<f64>, opts: &LbfgsOptions) -> LbfgsResult {
    let dim = x0.len();
    let mut x = x0;
    let mut g = vec![0.0; dim];
    let mut value = f(&x, &mut g);
    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(opts.memory);
    let mut x_new = vec![0.0; dim];
    let mut g_new = vec![0.0; dim];
    let mut d = vec![0.0; dim];
    let mut x_try = vec![0.0; dim];
    let mut g_try = vec![0.0; dim];
    let mut alphas = vec![0.0; opts.memory];
    let mut iterations = 0;

    while iterations < opts.max_iterations && inf_norm(&g) >= opts.gradient_tolerance {
        iterations += 1;
        // Two-loop recursion for d = −H g.
        d.iter_mut().zip(&g).for_each(|(di, gi)| *di = -gi);
        for (i, (s, y, rho)) in history.iter().enumerate().rev() {
            let a = rho * dot(s, &d);
            alphas[i] = a;
            d.iter_mut().zip(y).for_each(|(di, yi)| *di -= a * yi);
        }
        if let Some((s, y, _)) = history.back() {
            let scale = dot(s, y) / dot(y, y);
            d.iter_mut().for_each(|di| *di *= scale);
        }
        for (i, (s, y, rho)) in history.iter().enumerate() {
            let b = rho * dot(y, &d);
            d.iter_mut().zip(s).for_each(|(di, si)| *di += (alphas[i] - b) * si);
        }
        let mut slope = dot(&g, &d);
        if !(slope < 0.0) {
            history.clear();
            d.iter_mut().zip(&g).for_each(|(di, gi)| *di = -gi);
            slope = dot(&g, &d);
        }

        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..opts.max_backtracks {
            x_new.iter_mut().zip(x.iter().zip(&d)).for_each(|(xn, (xi, di))| *xn = xi + step * di);
            let v = f(&x_new, &mut g_new);
            if v <= value + opts.armijo * step * slope {
                accepted = Some(v);
                break;
            }
            step *= 0.5;
        }
        let Some(mut v) = accepted else {
            if history.is_empty() {
                break;
            }
            // Curvature memory led us astray; retry from steepest descent.
            history.clear();
            continue;
        };
        // A full step that is still steeply descending is too short for a
        // useful curvature pair; keep doubling while Armijo holds.
        if step == 1.0 {
            for _ in 0..opts.max_expansions {
                if dot(&g_new, &d) >= opts.curvature * slope {
                    break;
                }
                let longer = 2.0 * step;
                x_try.iter_mut().zip(x.iter().zip(&d)).for_each(|(xt, (xi, di))| *xt = xi + longer * di);
                let v_try = f(&x_try, &mut g_try);
                if !(v_try <= value + opts.armijo * longer * slope && v_try < v) {
                    break;
                }
                step = longer;
                v = v_try;
                std::mem::swap(&mut x_new, &mut x_try);
                std::mem::swap(&mut g_new, &mut g_try);
            }
        }

        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * dot(&y, &y).sqrt() * dot(&s, &s).sqrt() && sy > 0.0 {
            if history.len() == opts.memory {
                history.pop_front();
            }
            history.push_back((s, y, 1.0 / sy));
        }
        std::mem::swap(&mut x, &mut x_new);
        std::mem::swap(&mut g, &mut g_new);
        value = v;
    }
    let gradient_norm = inf_norm(&g);
    LbfgsResult { x, value, gradient_norm, iterations, converged: gradient_norm < opts.gradient_tolerance }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64], g: &mut [f64]| {
            let (a, b) = (x[0], x[1]);
            g[0] = -2.0 * (1.0 - a) - 400.0 * a * (b - a * a);
            g[1] = 200.0 * (b - a * a);
            (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2)
        };
        let r = minimize(f, vec![-1.2, 1.0], &LbfgsOptions::default());
        assert!(r.converged, "{r:?}");
        assert!((r.x[0] - 1.0).abs() < 1e-5 && (r.x[1] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn quadratic_converges_and_respects_cap() {
        let f = |x: &[f64], g: &mut [f64]| {
            let mut v = 0.0;
            for (i, (xi, gi)) in x.iter().zip(g.iter_mut()).enumerate() {
                let c = (i + 1) as f64;
                v += c * xi * xi;
                *gi = 2.0 * c * xi;
            }
            v
        };
        let r = minimize(f, vec![1.0; 20], &LbfgsOptions::default());
        assert!(r.converged && r.value < 1e-10);
        let capped = minimize(f, vec![1.0; 20], &LbfgsOptions { max_iterations: 2, ..Default::default() });
        assert_eq!(capped.iterations, 2);
    }
}
