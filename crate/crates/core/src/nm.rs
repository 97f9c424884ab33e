//! Derivative-free Nelder–Mead simplex minimization.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NmConfig {
    /// Stop once the simplex diameter (max norm) falls below this.
    pub x_tolerance: f64,
    /// Stop once the spread of simplex values falls below this.
    pub f_tolerance: f64,
    pub max_iterations: usize,
}

impl Default for NmConfig {
    fn default() -> Self {
        Self {
            x_tolerance: 1e-10,
            f_tolerance: 0.0,
            max_iterations: 5000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NmResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn diameter(simplex: &[Vec<f64>]) -> f64 {
    let mut d: f64 = 0.0;
    for p in &simplex[1..] {
        for (a, b) in p.iter().zip(&simplex[0]) {
            d = d.max((a - b).abs());
        }
    }
    d
}

fn affine(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(a, b)| a + t * (b - a)).collect()
}

/// Minimizes `f` from an axis-aligned simplex of edge `step` at `x0`.
pub fn nelder_mead(f: impl Fn(&[f64]) -> f64, x0: &[f64], step: f64, cfg: &NmConfig) -> NmResult {
    let n = x0.len();
    if n == 0 {
        return NmResult {
            x: Vec::new(),
            value: f(x0),
            iterations: 0,
            converged: true,
        };
    }
    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += step;
        simplex.push(p);
    }
    let mut vals: Vec<f64> = simplex.iter().map(|p| f(p)).collect();
    let mut it = 0;
    let mut converged = false;
    while it < cfg.max_iterations {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();
        if diameter(&simplex) <= cfg.x_tolerance || vals[n] - vals[0] <= cfg.f_tolerance {
            converged = true;
            break;
        }
        it += 1;
        let mut centroid = vec![0.0; n];
        for p in &simplex[..n] {
            for (c, v) in centroid.iter_mut().zip(p) {
                *c += v / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let xr = affine(&centroid, &worst, -1.0);
        let fr = f(&xr);
        if fr < vals[0] {
            let xe = affine(&centroid, &worst, -2.0);
            let fe = f(&xe);
            if fe < fr {
                simplex[n] = xe;
                vals[n] = fe;
            } else {
                simplex[n] = xr;
                vals[n] = fr;
            }
            continue;
        }
        if fr < vals[n - 1] {
            simplex[n] = xr;
            vals[n] = fr;
            continue;
        }
        let (xc, fc) = if fr < vals[n] {
            let xc = affine(&centroid, &xr, 0.5);
            let fc = f(&xc);
            (xc, fc)
        } else {
            let xc = affine(&centroid, &worst, 0.5);
            let fc = f(&xc);
            (xc, fc)
        };
        if fc < vals[n].min(fr) {
            simplex[n] = xc;
            vals[n] = fc;
            continue;
        }
        let best = simplex[0].clone();
        for i in 1..=n {
            simplex[i] = affine(&best, &simplex[i], 0.5);
            vals[i] = f(&simplex[i]);
        }
    }
    let (bi, _) = vals
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty simplex");
    NmResult {
        x: simplex[bi].clone(),
        value: vals[bi],
        iterations: it,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = nelder_mead(f, &[-1.2, 1.0], 0.1, &NmConfig::default());
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-6 && (r.x[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn one_dimensional() {
        let r = nelder_mead(|x| (x[0] - 3.0).powi(2), &[0.0], 0.5, &NmConfig::default());
        assert!((r.x[0] - 3.0).abs() < 1e-8);
    }
}
