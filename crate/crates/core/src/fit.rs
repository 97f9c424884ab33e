//! Multi-start Levenberg–Marquardt fitting of k-atomic measures to moment
//! sequences, and the Carathéodory-number estimate built on it.

use alloc::vec;
use alloc::vec::Vec;

use levenberg_marquardt::{LeastSquaresProblem, LevenbergMarquardt, TerminationReason};
use nalgebra::{DMatrix, DVector, Dyn, Owned};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::basis::Basis;
use crate::error::{Error, Result};
use crate::geometry::moment_map_f64;
use crate::measure::{AtomicMeasure, MomentSeq};
use crate::nm::{nelder_mead, NmConfig};
use crate::poly::Poly;
use crate::scalar::Rational;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitConfig {
    pub restarts: usize,
    /// Convergence threshold on the max-norm residual, relative to `‖s‖∞`.
    pub tolerance: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            tolerance: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitResult {
    pub measure: AtomicMeasure<f64>,
    /// `‖S_{k,A}(C, X) − s‖∞`.
    pub residual: f64,
    pub converged: bool,
    /// Restarts consumed: the index of the accepted start plus one, or the
    /// whole budget when nothing converged.
    pub restarts: usize,
}

/// Outcome of one restart, before selection.
#[derive(Clone, Debug, PartialEq)]
pub struct Attempt {
    pub restart: usize,
    pub weights: Vec<f64>,
    pub points: Vec<Vec<f64>>,
    pub residual: f64,
}

/// Something that runs the restarts of a fit. Implementations must agree
/// with [`select`] so that results do not depend on scheduling.
pub trait Fitter {
    fn fit(
        &self,
        seq: &MomentSeq<f64>,
        k: usize,
        signed: bool,
        cfg: &FitConfig,
    ) -> Result<FitResult>;
}

/// Runs restarts in order and stops at the first converged one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SerialFitter {
    pub seed: u64,
}

impl Fitter for SerialFitter {
    fn fit(
        &self,
        seq: &MomentSeq<f64>,
        k: usize,
        signed: bool,
        cfg: &FitConfig,
    ) -> Result<FitResult> {
        check_request(seq, k)?;
        if let Some(r) = trivial_fit(seq, signed) {
            return Ok(r);
        }
        let tol = absolute_tolerance(seq, cfg);
        let mut attempts = Vec::new();
        for r in 0..cfg.restarts {
            let a = attempt(seq, k, signed, self.seed, r);
            let done = a.residual <= tol;
            attempts.push(a);
            if done {
                break;
            }
        }
        select(seq, signed, cfg, attempts)
    }
}

pub fn fit_measure(
    seq: &MomentSeq<f64>,
    k: usize,
    signed: bool,
    cfg: &FitConfig,
    seed: u64,
) -> Result<FitResult> {
    SerialFitter { seed }.fit(seq, k, signed, cfg)
}

pub fn check_request(seq: &MomentSeq<f64>, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if seq.values().iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "moment sequence has non-finite entries".into(),
        ));
    }
    Ok(())
}

/// The zero sequence is fitted by the empty measure.
pub fn trivial_fit(seq: &MomentSeq<f64>, signed: bool) -> Option<FitResult> {
    (sup_norm(seq.values()) == 0.0).then(|| FitResult {
        measure: AtomicMeasure::empty(seq.basis().nvars(), signed),
        residual: 0.0,
        converged: true,
        restarts: 0,
    })
}

pub fn absolute_tolerance(seq: &MomentSeq<f64>, cfg: &FitConfig) -> f64 {
    cfg.tolerance * sup_norm(seq.values())
}

/// Picks the lowest-index converged attempt, else the lowest residual.
pub fn select(
    seq: &MomentSeq<f64>,
    signed: bool,
    cfg: &FitConfig,
    mut attempts: Vec<Attempt>,
) -> Result<FitResult> {
    if attempts.is_empty() {
        return Err(Error::InvalidArgument("restart budget is zero".into()));
    }
    attempts.sort_by_key(|a| a.restart);
    let tol = absolute_tolerance(seq, cfg);
    let (chosen, converged) = match attempts.iter().position(|a| a.residual <= tol) {
        Some(i) => (i, true),
        None => {
            let best = attempts
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.residual.total_cmp(&b.1.residual))
                .map(|(i, _)| i)
                .expect("nonempty");
            (best, false)
        }
    };
    let a = attempts.swap_remove(chosen);
    let measure =
        AtomicMeasure::with_separation(seq.basis().nvars(), a.weights, a.points, signed, 0.0)?;
    Ok(FitResult {
        measure,
        residual: a.residual,
        converged,
        restarts: if converged {
            a.restart + 1
        } else {
            cfg.restarts
        },
    })
}

fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Fresh solver runs allowed after one stalls while still making progress.
const POLISH_ROUNDS: usize = 8;

/// Deterministic generator for restart `r` of a `k`-atom fit.
pub fn restart_rng(seed: u64, k: usize, r: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((k as u64) << 40));
    rng.set_stream(r as u64);
    rng
}

/// One damped least-squares run from a random start, followed by cleanup.
pub fn attempt(seq: &MomentSeq<f64>, k: usize, signed: bool, seed: u64, restart: usize) -> Attempt {
    let basis = seq.basis();
    let s = seq.values();
    let mut rng = restart_rng(seed, k, restart);
    let (weights, points) = initial_guess(basis, s, k, signed, &mut rng);
    let scale = sup_norm(s).max(f64::MIN_POSITIVE);
    let problem = Problem::new(basis, s, scale, &weights, &points, signed);
    let (mut problem, mut report) = LevenbergMarquardt::new().minimize(problem);
    for _ in 0..POLISH_ROUNDS {
        if !matches!(report.termination, TerminationReason::LostPatience) {
            break;
        }
        let before = report.objective_function;
        (problem, report) = LevenbergMarquardt::new().minimize(problem);
        if !(report.objective_function < 0.5 * before) {
            break;
        }
    }
    let (w, p) = problem.unpack();
    let (weights, points, residual) = cleanup(basis, s, w, p, signed);
    Attempt {
        restart,
        weights,
        points,
        residual,
    }
}

fn element_index(basis: &Basis, exps: &[u32]) -> Option<usize> {
    let target = Poly::<Rational>::monomial(exps);
    basis.elements().iter().position(|e| *e == target)
}

/// Per-coordinate mean and spread read off the `1`, `x_i`, `x_i²` moments
/// when the basis has them.
fn coordinate_scales(basis: &Basis, s: &[f64]) -> Vec<(f64, f64)> {
    let n = basis.nvars();
    let mut out = vec![(0.0, 1.0); n];
    let Some(i0) = element_index(basis, &vec![0; n]) else {
        return out;
    };
    let mass = s[i0];
    if mass <= 0.0 {
        return out;
    }
    for (l, slot) in out.iter_mut().enumerate() {
        let mut e = vec![0; n];
        e[l] = 1;
        let mean = element_index(basis, &e).map_or(0.0, |i| s[i] / mass);
        e[l] = 2;
        if let Some(i) = element_index(basis, &e) {
            let second = s[i] / mass;
            let var = second - mean * mean;
            let sd = if var > 0.0 {
                libm::sqrt(var)
            } else {
                libm::sqrt(second.abs())
            };
            if sd > 0.0 && sd.is_finite() {
                *slot = (mean, sd);
            }
        } else {
            slot.0 = mean;
        }
    }
    out
}

fn initial_guess(
    basis: &Basis,
    s: &[f64],
    k: usize,
    signed: bool,
    rng: &mut ChaCha8Rng,
) -> (Vec<f64>, Vec<Vec<f64>>) {
    let scales = coordinate_scales(basis, s);
    let w0 = sup_norm(s) / k as f64;
    let mut weights = Vec::with_capacity(k);
    let mut points = Vec::with_capacity(k);
    for _ in 0..k {
        let w = if signed && rng.random::<bool>() {
            -w0
        } else {
            w0
        };
        weights.push(w);
        points.push(
            scales
                .iter()
                .map(|&(mean, sd)| mean + sd * rng.sample::<f64, _>(StandardNormal))
                .collect(),
        );
    }
    (weights, points)
}

struct Problem<'a> {
    basis: &'a Basis,
    target: &'a [f64],
    scale: f64,
    signed: bool,
    k: usize,
    rows: usize,
    params: DVector<f64>,
}

impl<'a> Problem<'a> {
    fn new(
        basis: &'a Basis,
        target: &'a [f64],
        scale: f64,
        weights: &[f64],
        points: &[Vec<f64>],
        signed: bool,
    ) -> Self {
        let n = basis.nvars();
        let k = weights.len();
        let mut params = DVector::zeros(k * (n + 1));
        for (a, (w, x)) in weights.iter().zip(points).enumerate() {
            params[a * (n + 1)] = if signed { *w } else { libm::sqrt(w.abs()) };
            for (l, v) in x.iter().enumerate() {
                params[a * (n + 1) + 1 + l] = *v;
            }
        }
        let rows = basis.len().max(params.len());
        Self {
            basis,
            target,
            scale,
            signed,
            k,
            rows,
            params,
        }
    }

    fn unpack(&self) -> (Vec<f64>, Vec<Vec<f64>>) {
        let n = self.basis.nvars();
        let mut w = Vec::with_capacity(self.k);
        let mut p = Vec::with_capacity(self.k);
        for a in 0..self.k {
            let u = self.params[a * (n + 1)];
            w.push(if self.signed { u } else { u * u });
            p.push((0..n).map(|l| self.params[a * (n + 1) + 1 + l]).collect());
        }
        (w, p)
    }
}

impl LeastSquaresProblem<f64, Dyn, Dyn> for Problem<'_> {
    type ResidualStorage = Owned<f64, Dyn>;
    type JacobianStorage = Owned<f64, Dyn, Dyn>;
    type ParameterStorage = Owned<f64, Dyn>;

    fn set_params(&mut self, x: &DVector<f64>) {
        self.params.copy_from(x);
    }

    fn params(&self) -> DVector<f64> {
        self.params.clone()
    }

    fn residuals(&self) -> Option<DVector<f64>> {
        let (w, p) = self.unpack();
        let s = moment_map_f64(self.basis, &w, &p);
        let mut r = DVector::zeros(self.rows);
        for (j, (v, t)) in s.iter().zip(self.target).enumerate() {
            r[j] = (v - t) / self.scale;
        }
        r.iter().all(|v| v.is_finite()).then_some(r)
    }

    fn jacobian(&self) -> Option<DMatrix<f64>> {
        let (m, n) = (self.basis.len(), self.basis.nvars());
        let mut jac = DMatrix::zeros(self.rows, self.params.len());
        let mut v = vec![0.0; m];
        let mut g = vec![0.0; m * n];
        for a in 0..self.k {
            let base = a * (n + 1);
            let u = self.params[base];
            let x: Vec<f64> = (0..n).map(|l| self.params[base + 1 + l]).collect();
            self.basis.eval_grad_f64(&x, &mut v, &mut g);
            let (dw, c) = if self.signed {
                (1.0, u)
            } else {
                (2.0 * u, u * u)
            };
            for j in 0..m {
                jac[(j, base)] = dw * v[j] / self.scale;
                for l in 0..n {
                    jac[(j, base + 1 + l)] = c * g[j * n + l] / self.scale;
                }
            }
        }
        jac.iter().all(|v| v.is_finite()).then_some(jac)
    }
}

fn residual_of(basis: &Basis, s: &[f64], w: &[f64], p: &[Vec<f64>]) -> f64 {
    let fitted = moment_map_f64(basis, w, p);
    let finite = fitted.iter().all(|v| v.is_finite()) && w.iter().all(|v| v.is_finite());
    let r = fitted
        .iter()
        .zip(s)
        .fold(0.0, |m: f64, (a, b)| m.max((a - b).abs()));
    if finite && r.is_finite() {
        r
    } else {
        f64::INFINITY
    }
}

/// Rescales an atom of a degree-`d` form so its largest coordinate is `±1`,
/// preferring `+1` whenever the weight sign allows it.
pub fn normalize_homogeneous_atom(
    w: f64,
    x: &[f64],
    d: u32,
    signed: bool,
) -> Option<(f64, Vec<f64>)> {
    let (j, _) = x
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))?;
    let mut t = x[j];
    if t == 0.0 || !t.is_finite() {
        return None;
    }
    if d % 2 == 1 && !signed {
        t = t.abs();
    }
    let y: Vec<f64> = x.iter().map(|v| v / t).collect();
    Some((w * libm::pow(t, f64::from(d)), y))
}

const PRUNE_RELATIVE: f64 = 1e-13;
const MERGE_DISTANCE: f64 = 1e-9;

/// Projective normalization, merging of coincident atoms and pruning of
/// negligible ones; each change is kept only if it does not worsen the fit.
fn cleanup(
    basis: &Basis,
    s: &[f64],
    w: Vec<f64>,
    p: Vec<Vec<f64>>,
    signed: bool,
) -> (Vec<f64>, Vec<Vec<f64>>, f64) {
    let mut w = w;
    let mut p = p;
    if let Some(d) = basis.common_degree() {
        let mut nw = Vec::new();
        let mut np = Vec::new();
        for (c, x) in w.iter().zip(&p) {
            if let Some((c, x)) = normalize_homogeneous_atom(*c, x, d, signed) {
                nw.push(c);
                np.push(x);
            }
        }
        w = nw;
        p = np;
    }
    let raw = residual_of(basis, s, &w, &p);
    let scale = sup_norm(s);
    let mut mw: Vec<f64> = Vec::new();
    let mut mp: Vec<Vec<f64>> = Vec::new();
    for (c, x) in w.iter().zip(&p) {
        let near = mp.iter().position(|y| {
            let size = 1.0 + y.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
            y.iter()
                .zip(x)
                .all(|(a, b)| (a - b).abs() <= MERGE_DISTANCE * size)
        });
        match near {
            Some(i) => {
                let total = mw[i] + c;
                if total != 0.0 {
                    for (yl, xl) in mp[i].iter_mut().zip(x) {
                        *yl = (*yl * mw[i] + xl * c) / total;
                    }
                }
                mw[i] = total;
            }
            None => {
                mw.push(*c);
                mp.push(x.clone());
            }
        }
    }
    let keep: Vec<usize> = (0..mw.len())
        .filter(|&i| mw[i].abs() > PRUNE_RELATIVE * scale)
        .collect();
    let cw: Vec<f64> = keep.iter().map(|&i| mw[i]).collect();
    let cp: Vec<Vec<f64>> = keep.iter().map(|&i| mp[i].clone()).collect();
    let cleaned = residual_of(basis, s, &cw, &cp);
    let distinct = p
        .iter()
        .enumerate()
        .all(|(i, x)| p[..i].iter().all(|y| y != x));
    if cleaned <= raw.max(1e-12 * scale) || !distinct {
        (cw, cp, cleaned)
    } else {
        (w, p, raw)
    }
}

/// Per-sequence Carathéodory estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct CaraEstimate {
    pub sequence: MomentSeq<f64>,
    /// Certified lower bound: 1 for a nonzero sequence, 0 for the zero
    /// sequence, or a supplied certificate value.
    pub k_min: usize,
    /// Number of atoms of the witness.
    pub k_found: usize,
    pub witness: FitResult,
    /// `(k, best residual)` for each swept `k`.
    pub sweep: Vec<(usize, f64)>,
}

pub fn estimate_cara(
    seq: &MomentSeq<f64>,
    signed: bool,
    certified: Option<usize>,
    fitter: &impl Fitter,
    cfg: &FitConfig,
) -> Result<CaraEstimate> {
    if let Some(witness) = trivial_fit(seq, signed) {
        return Ok(CaraEstimate {
            sequence: seq.clone(),
            k_min: 0,
            k_found: 0,
            witness,
            sweep: Vec::new(),
        });
    }
    let m = seq.basis().len();
    let k_min = certified.unwrap_or(1).max(1);
    let mut sweep = Vec::new();
    let mut best = f64::INFINITY;
    for k in k_min..=m {
        let r = fitter.fit(seq, k, signed, cfg)?;
        sweep.push((k, r.residual));
        best = best.min(r.residual);
        if r.converged {
            return Ok(CaraEstimate {
                sequence: seq.clone(),
                k_min,
                k_found: r.measure.len(),
                witness: r,
                sweep,
            });
        }
    }
    Err(Error::Inconsistent {
        max_k: m,
        best_residual: best,
    })
}

/// Best two-atom fit of a one-dimensional sequence found by eliminating the
/// weights on a grid of atom pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct GridReport {
    pub grid: usize,
    pub bounds: (f64, f64),
    /// Best grid pair and its least-squares residual `‖r‖₂`.
    pub grid_point: (f64, f64),
    pub grid_residual: f64,
    /// After local refinement from the best grid pairs.
    pub refined_point: (f64, f64),
    pub refined_residual: f64,
    /// Weights at the refined pair.
    pub weights: (f64, f64),
    /// `refined_residual / √m`, a lower bound for the max-norm residual of any
    /// fit with atoms at the refined pair.
    pub max_norm_lower_bound: f64,
}

/// Nonnegative (or free, when `signed`) least squares for two columns.
fn two_column_ls(a: &[f64], b: &[f64], s: &[f64], signed: bool) -> (f64, f64, f64) {
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(x, y)| x * y).sum::<f64>();
    let res = |c1: f64, c2: f64| {
        libm::sqrt(
            a.iter()
                .zip(b)
                .zip(s)
                .map(|((x, y), t)| {
                    let r = c1 * x + c2 * y - t;
                    r * r
                })
                .sum::<f64>(),
        )
    };
    let (aa, bb, ab, as_, bs) = (dot(a, a), dot(b, b), dot(a, b), dot(a, s), dot(b, s));
    let mut cands: Vec<(f64, f64)> = Vec::new();
    let det = aa * bb - ab * ab;
    if det.abs() > 1e-300 {
        cands.push(((as_ * bb - bs * ab) / det, (bs * aa - as_ * ab) / det));
    }
    if aa > 0.0 {
        cands.push((as_ / aa, 0.0));
    }
    if bb > 0.0 {
        cands.push((0.0, bs / bb));
    }
    cands.push((0.0, 0.0));
    let mut best = (0.0, 0.0, f64::INFINITY);
    for (c1, c2) in cands {
        if !signed && (c1 < 0.0 || c2 < 0.0) {
            continue;
        }
        let r = res(c1, c2);
        if r < best.2 {
            best = (c1, c2, r);
        }
    }
    best
}

pub fn two_atom_grid(
    seq: &MomentSeq<f64>,
    lo: f64,
    hi: f64,
    grid: usize,
    signed: bool,
    refine: usize,
) -> Result<GridReport> {
    let basis = seq.basis();
    if basis.nvars() != 1 {
        return Err(Error::InvalidArgument(
            "grid oracle needs a one-dimensional basis".into(),
        ));
    }
    if grid < 2 || !(lo < hi) {
        return Err(Error::InvalidArgument(
            "grid needs at least 2 nodes on a nonempty interval".into(),
        ));
    }
    let s = seq.values();
    let m = basis.len();
    let nodes: Vec<f64> = (0..grid)
        .map(|i| lo + (hi - lo) * i as f64 / (grid - 1) as f64)
        .collect();
    let cols: Vec<Vec<f64>> = nodes
        .iter()
        .map(|&x| {
            let mut v = vec![0.0; m];
            basis.eval_f64(&[x], &mut v);
            v
        })
        .collect();
    let mut scored: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..grid {
        for j in i + 1..grid {
            let (_, _, r) = two_column_ls(&cols[i], &cols[j], s, signed);
            scored.push((r, i, j));
        }
    }
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (grid_residual, gi, gj) = scored[0];
    let objective = |x: &[f64]| {
        let (mut a, mut b) = (vec![0.0; m], vec![0.0; m]);
        basis.eval_f64(&[x[0]], &mut a);
        basis.eval_f64(&[x[1]], &mut b);
        two_column_ls(&a, &b, s, signed).2
    };
    let step = (hi - lo) / (grid - 1) as f64;
    let mut refined = ((nodes[gi], nodes[gj]), grid_residual);
    for &(_, i, j) in scored.iter().take(refine.max(1)) {
        let r = nelder_mead(objective, &[nodes[i], nodes[j]], step, &NmConfig::default());
        let (a, b) = (r.x[0].clamp(lo, hi), r.x[1].clamp(lo, hi));
        let v = objective(&[a, b]);
        if v < refined.1 {
            refined = ((a, b), v);
        }
    }
    let ((a, b), refined_residual) = refined;
    let (mut ca, mut cb) = (vec![0.0; m], vec![0.0; m]);
    basis.eval_f64(&[a], &mut ca);
    basis.eval_f64(&[b], &mut cb);
    let (w1, w2, _) = two_column_ls(&ca, &cb, s, signed);
    Ok(GridReport {
        grid,
        bounds: (lo, hi),
        grid_point: (nodes[gi], nodes[gj]),
        grid_residual,
        refined_point: (a, b),
        refined_residual,
        weights: (w1, w2),
        max_norm_lower_bound: refined_residual / libm::sqrt(m as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(basis: Basis, v: &[f64]) -> MomentSeq<f64> {
        MomentSeq::new(basis, v.to_vec()).unwrap()
    }

    #[test]
    fn symmetric_two_atoms() {
        let s = seq(Basis::full_degree(1, 2).unwrap(), &[2.0, 0.0, 2.0]);
        let r = fit_measure(&s, 2, false, &FitConfig::default(), 1).unwrap();
        assert!(r.converged && r.residual < 1e-9);
        assert!(r.measure.len() <= 2);
        let m = r.measure;
        let back = moment_map_f64(s.basis(), m.weights(), m.points());
        assert!(back
            .iter()
            .zip(s.values())
            .all(|(a, b)| (a - b).abs() < 1e-9));
    }

    #[test]
    fn sextic_four_atoms() {
        let s = seq(
            Basis::gapped_1d(&[0, 1, 2, 6]).unwrap(),
            &[1.0, 0.0, 2.5, 32.5],
        );
        let r = fit_measure(&s, 4, false, &FitConfig::default(), 7).unwrap();
        assert!(r.converged, "{r:?}");
        assert!(r.residual <= 1e-9 * 32.5);
    }

    #[test]
    fn zero_sequence_is_empty() {
        let s = seq(Basis::full_degree(2, 2).unwrap(), &[0.0; 6]);
        let e = estimate_cara(
            &s,
            false,
            None,
            &SerialFitter { seed: 0 },
            &FitConfig::default(),
        )
        .unwrap();
        assert_eq!((e.k_found, e.k_min), (0, 0));
        assert!(e.witness.measure.is_empty());
    }

    #[test]
    fn serial_is_deterministic() {
        let s = seq(
            Basis::full_degree(1, 4).unwrap(),
            &[1.0, 0.3, 0.9, 0.2, 1.1],
        );
        let a = fit_measure(&s, 3, false, &FitConfig::default(), 42).unwrap();
        let b = fit_measure(&s, 3, false, &FitConfig::default(), 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn homogeneous_normalization() {
        let (w, x) = normalize_homogeneous_atom(1.0, &[2.0, -4.0], 4, false).unwrap();
        assert_eq!(x, vec![-0.5, 1.0]);
        assert!((w - 256.0).abs() < 1e-12);
        let (w, x) = normalize_homogeneous_atom(1.0, &[-2.0, 1.0], 3, false).unwrap();
        assert_eq!(x, vec![-1.0, 0.5]);
        assert!((w - 8.0).abs() < 1e-12);
        let (w, _) = normalize_homogeneous_atom(1.0, &[-2.0, 1.0], 3, true).unwrap();
        assert!((w + 8.0).abs() < 1e-12);
    }

    #[test]
    fn grid_finds_planted_pair() {
        let b = Basis::full_degree(1, 3).unwrap();
        let s = seq(b, &[1.0, 0.5, 1.0, 0.5]);
        let g = two_atom_grid(&s, -2.0, 2.0, 41, false, 5).unwrap();
        assert!(g.refined_residual < 1e-8, "{g:?}");
        let (a, c) = g.refined_point;
        assert!((a.min(c) + 1.0).abs() < 1e-6 && (a.max(c) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn rejects_zero_atoms() {
        let s = seq(Basis::full_degree(1, 2).unwrap(), &[1.0, 0.0, 1.0]);
        assert!(fit_measure(&s, 0, false, &FitConfig::default(), 0).is_err());
    }
}
