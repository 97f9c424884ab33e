//! Moment-preserving flow along the kernel of `DS_{k,A}`, integrated with
//! classical fourth-order Runge–Kutta.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::basis::Basis;
use crate::error::{Error, Result};
use crate::geometry::{jacobian_f64, moment_map_f64};
use crate::measure::AtomicMeasure;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlowNormalization {
    /// Unit kernel vector, sign fixed by continuity.
    Unit,
    /// Kernel vector scaled so that the first weight moves at rate `−2`.
    WeightRate,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowConfig {
    pub steps: usize,
    pub normalization: FlowNormalization,
    /// Breakdown when the second-smallest singular value is below this
    /// multiple of the smallest.
    pub gap_factor: f64,
    /// Smallest singular value relative to the largest above which the
    /// kernel counts as trivial.
    pub kernel_tolerance: f64,
    pub drift_tolerance: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            steps: 1000,
            normalization: FlowNormalization::Unit,
            gap_factor: 10.0,
            kernel_tolerance: 1e-8,
            drift_tolerance: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowState {
    pub t: f64,
    pub measure: AtomicMeasure<f64>,
    /// `‖S(μ(t)) − S(μ₀)‖∞`.
    pub drift: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    /// States in increasing `t`.
    pub states: Vec<FlowState>,
    pub max_drift: f64,
}

struct Field<'a> {
    basis: &'a Basis,
    n: usize,
    k: usize,
    cfg: &'a FlowConfig,
}

impl Field<'_> {
    fn split(&self, y: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
        let w = (0..self.k).map(|a| y[a * (self.n + 1)]).collect();
        let p = (0..self.k)
            .map(|a| y[a * (self.n + 1) + 1..(a + 1) * (self.n + 1)].to_vec())
            .collect();
        (w, p)
    }

    /// Kernel direction at `y`, oriented along `reference` when given.
    fn direction(&self, t: f64, y: &[f64], reference: Option<&[f64]>) -> Result<Vec<f64>> {
        let (w, p) = self.split(y);
        let ds = jacobian_f64(self.basis, &w, &p);
        let cols = ds.ncols();
        let rows = ds.nrows().max(cols);
        let mut sq = DMatrix::zeros(rows, cols);
        sq.view_mut((0, 0), (ds.nrows(), cols)).copy_from(&ds);
        let svd = sq.svd(false, true);
        let v_t = svd
            .v_t
            .ok_or_else(|| breakdown(t, "singular value decomposition failed"))?;
        let sv = &svd.singular_values;
        let mut order: Vec<usize> = (0..sv.len()).collect();
        order.sort_by(|&a, &b| sv[a].total_cmp(&sv[b]));
        let (s0, s1) = (
            sv[order[0]],
            sv.get(order.get(1).copied().unwrap_or(0))
                .copied()
                .unwrap_or(f64::INFINITY),
        );
        let smax = sv.iter().copied().fold(0.0, f64::max);
        if !(s0 <= self.cfg.kernel_tolerance * smax) {
            return Err(breakdown(
                t,
                &format!("kernel is trivial (smallest singular value {s0:e})"),
            ));
        }
        if order.len() > 1 && s1 <= self.cfg.gap_factor * s0 {
            return Err(breakdown(
                t,
                &format!("kernel dimension exceeds one ({s0:e}, {s1:e})"),
            ));
        }
        let mut v: Vec<f64> = v_t.row(order[0]).iter().copied().collect();
        match self.cfg.normalization {
            FlowNormalization::Unit => {
                let flip = match reference {
                    Some(r) => dot(&v, r) < 0.0,
                    None => v[0] > 0.0,
                };
                if flip {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
            }
            FlowNormalization::WeightRate => {
                if v[0].abs() < 1e-12 {
                    return Err(breakdown(t, "first weight is stationary along the kernel"));
                }
                let scale = -2.0 / v[0];
                v.iter_mut().for_each(|x| *x *= scale);
            }
        }
        Ok(v)
    }

    fn rk4(
        &self,
        t: f64,
        y: &[f64],
        h: f64,
        reference: Option<&[f64]>,
    ) -> Result<(Vec<f64>, Vec<f64>)> {
        let k1 = self.direction(t, y, reference)?;
        let shift =
            |k: &[f64], a: f64| -> Vec<f64> { y.iter().zip(k).map(|(y, k)| y + a * k).collect() };
        let k2 = self.direction(t + h / 2.0, &shift(&k1, h / 2.0), Some(&k1))?;
        let k3 = self.direction(t + h / 2.0, &shift(&k2, h / 2.0), Some(&k1))?;
        let k4 = self.direction(t + h, &shift(&k3, h), Some(&k1))?;
        let next = (0..y.len())
            .map(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect();
        Ok((next, k1))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn breakdown(t: f64, reason: &str) -> Error {
    Error::FlowBreakdown {
        t,
        reason: reason.into(),
    }
}

/// Integrates from `μ₀` at `t = 0` towards both ends of `[t0, t1]`, which must
/// contain 0. Steps are split between the two directions by length.
pub fn kernel_flow(
    basis: &Basis,
    mu0: &AtomicMeasure<f64>,
    t0: f64,
    t1: f64,
    cfg: &FlowConfig,
) -> Result<Trajectory> {
    if mu0.nvars() != basis.nvars() {
        return Err(Error::DimensionMismatch {
            expected: basis.nvars(),
            found: mu0.nvars(),
        });
    }
    if !(t0 <= 0.0 && 0.0 <= t1) || !(t0 < t1) || cfg.steps == 0 {
        return Err(Error::InvalidArgument(
            "need t0 <= 0 <= t1, t0 < t1 and at least one step".into(),
        ));
    }
    if mu0.is_empty() {
        return Err(Error::InvalidArgument(
            "initial measure has no atoms".into(),
        ));
    }
    let n = basis.nvars();
    let k = mu0.len();
    let field = Field { basis, n, k, cfg };
    let mut y0 = Vec::with_capacity(k * (n + 1));
    for (c, x) in mu0.weights().iter().zip(mu0.points()) {
        y0.push(*c);
        y0.extend_from_slice(x);
    }
    let s0 = moment_map_f64(basis, mu0.weights(), mu0.points());
    let back_steps = libm::round(cfg.steps as f64 * (-t0) / (t1 - t0)) as usize;
    let fwd_steps = cfg.steps - back_steps;
    let forward = integrate(&field, &y0, t1, fwd_steps)?;
    let backward = integrate(&field, &y0, t0, back_steps)?;
    let mut states = Vec::with_capacity(cfg.steps + 1);
    let mut max_drift: f64 = 0.0;
    let mut push = |t: f64, y: &[f64]| -> Result<()> {
        let (w, p) = field.split(y);
        let s = moment_map_f64(basis, &w, &p);
        let drift = if s.iter().chain(y).all(|v| v.is_finite()) {
            s.iter()
                .zip(&s0)
                .fold(0.0, |m: f64, (a, b)| m.max((a - b).abs()))
        } else {
            f64::INFINITY
        };
        if !(drift <= cfg.drift_tolerance) {
            return Err(breakdown(
                t,
                &format!("moment drift {drift:e} exceeds tolerance"),
            ));
        }
        max_drift = max_drift.max(drift);
        let measure = AtomicMeasure::with_separation(n, w, p, mu0.is_signed(), 0.0)
            .map_err(|e| breakdown(t, &format!("{e}")))?;
        states.push(FlowState { t, measure, drift });
        Ok(())
    };
    for (t, y) in backward.iter().rev() {
        push(*t, y)?;
    }
    push(0.0, &y0)?;
    for (t, y) in &forward {
        push(*t, y)?;
    }
    states[back_steps].measure = mu0.clone();
    Ok(Trajectory { states, max_drift })
}

/// States after each of `steps` uniform steps from 0 to `t_end`.
fn integrate(
    field: &Field<'_>,
    y0: &[f64],
    t_end: f64,
    steps: usize,
) -> Result<Vec<(f64, Vec<f64>)>> {
    let mut out = Vec::with_capacity(steps);
    if steps == 0 {
        return Ok(out);
    }
    let h = t_end / steps as f64;
    let mut y = y0.to_vec();
    let mut reference: Option<Vec<f64>> = None;
    if h < 0.0 && field.cfg.normalization == FlowNormalization::Unit {
        reference = Some(field.direction(0.0, y0, None)?);
    }
    for i in 0..steps {
        let t = h * i as f64;
        let (next, k1) = field.rk4(t, &y, h, reference.as_deref())?;
        reference = Some(k1);
        y = next;
        out.push((h * (i + 1) as f64, y.clone()));
    }
    Ok(out)
}

/// `(C, X)` packed per atom as the flow state vector.
pub fn pack(mu: &AtomicMeasure<f64>) -> Vec<f64> {
    let mut y = vec![];
    for (c, x) in mu.weights().iter().zip(mu.points()) {
        y.push(*c);
        y.extend_from_slice(x);
    }
    y
}

/// Kernel vector of `DS` at `μ` under the configured normalization.
pub fn kernel_vector(
    basis: &Basis,
    mu: &AtomicMeasure<f64>,
    cfg: &FlowConfig,
) -> Result<DVector<f64>> {
    let field = Field {
        basis,
        n: basis.nvars(),
        k: mu.len(),
        cfg,
    };
    Ok(DVector::from_vec(field.direction(0.0, &pack(mu), None)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_atoms() -> AtomicMeasure<f64> {
        AtomicMeasure::with_separation(
            2,
            vec![1.0, 1.0],
            vec![vec![0.0, 0.0], vec![1.0, 1.0]],
            false,
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn kernel_matches_printed_direction() {
        let b = Basis::full_degree(2, 2).unwrap();
        let cfg = FlowConfig {
            normalization: FlowNormalization::WeightRate,
            ..FlowConfig::default()
        };
        let v = kernel_vector(&b, &two_atoms(), &cfg).unwrap();
        let expected = [-2.0, -1.0, -1.0, 2.0, -1.0, -1.0];
        for (a, e) in v.iter().zip(expected) {
            assert!((a - e).abs() < 1e-10, "{v:?}");
        }
    }

    #[test]
    fn initial_state_is_exact() {
        let b = Basis::full_degree(2, 2).unwrap();
        let tr = kernel_flow(
            &b,
            &two_atoms(),
            -0.1,
            0.1,
            &FlowConfig {
                steps: 20,
                ..FlowConfig::default()
            },
        )
        .unwrap();
        let zero = tr.states.iter().find(|s| s.t == 0.0).unwrap();
        assert_eq!(zero.measure, two_atoms());
        assert_eq!(tr.states.len(), 21);
        assert!(tr.states.windows(2).all(|w| w[0].t < w[1].t));
    }

    #[test]
    fn trivial_kernel_breaks_down() {
        let b = Basis::full_degree(1, 3).unwrap();
        let mu = AtomicMeasure::with_separation(1, vec![1.0], vec![vec![0.5]], false, 0.0).unwrap();
        let e = kernel_flow(&b, &mu, 0.0, 0.1, &FlowConfig::default()).unwrap_err();
        assert!(matches!(e, Error::FlowBreakdown { .. }));
    }
}
