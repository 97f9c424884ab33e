//! Maximal mass `c_s(x) = sup { c : s − c·s_A(x) is a moment sequence }` by
//! bisection on fit-based membership tests.

use alloc::vec::Vec;

use crate::basis::{coefficient_matrix, Basis};
use crate::error::{Error, Result};
use crate::fit::{FitConfig, Fitter};
use crate::matrix::{solve, Matrix};
use crate::measure::MomentSeq;
use crate::poly::Poly;
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MassConfig {
    /// Absolute width at which bisection stops.
    pub tolerance: f64,
    pub restarts: usize,
    pub fit_tolerance: f64,
}

impl Default for MassConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-6,
            restarts: 32,
            fit_tolerance: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MassProbe {
    pub c: f64,
    pub member: bool,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaxMassResult {
    pub point: Vec<f64>,
    pub c_low: f64,
    pub c_high: f64,
    pub c_star: f64,
    /// `L_s(e) / e(x)`.
    pub upper_bound: f64,
    pub probes: Vec<MassProbe>,
}

/// Coordinates of `e` in the basis, exactly.
pub fn basis_coordinates(basis: &Basis, e: &Poly<Rational>) -> Result<Vec<Rational>> {
    if e.nvars() > basis.nvars() {
        return Err(Error::DimensionMismatch {
            expected: basis.nvars(),
            found: e.nvars(),
        });
    }
    let mut all: Vec<Poly<Rational>> = basis.elements().to_vec();
    all.push(e.with_nvars(basis.nvars()));
    let c = coefficient_matrix(&all);
    let m = basis.len();
    let a = Matrix::from_fn(c.ncols(), m, |i, j| c[(j, i)].clone());
    let b: Vec<Rational> = (0..c.ncols()).map(|i| c[(m, i)].clone()).collect();
    solve(&a, &b)?.ok_or_else(|| Error::InvalidArgument("e is not in the span of the basis".into()))
}

pub fn max_mass(
    seq: &MomentSeq<f64>,
    x: &[f64],
    e: &Poly<Rational>,
    fitter: &impl Fitter,
    cfg: &MassConfig,
) -> Result<MaxMassResult> {
    let basis = seq.basis();
    basis.check_point(x)?;
    if !(cfg.tolerance > 0.0) {
        return Err(Error::InvalidArgument(
            "bisection tolerance must be positive".into(),
        ));
    }
    let coords: Vec<f64> = basis_coordinates(basis, e)?
        .iter()
        .map(Scalar::to_f64)
        .collect();
    let mut sx = alloc::vec![0.0; basis.len()];
    basis.eval_f64(x, &mut sx);
    let dot = |v: &[f64]| coords.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
    let ex = dot(&sx);
    if !(ex > 0.0) {
        return Err(Error::InvalidArgument(
            "e must be strictly positive at the point".into(),
        ));
    }
    let upper = dot(seq.values()) / ex;
    let fit_cfg = FitConfig {
        restarts: cfg.restarts,
        tolerance: cfg.fit_tolerance,
    };
    let k = basis.len();
    let test = |c: f64| -> Result<MassProbe> {
        let shifted: Vec<f64> = seq
            .values()
            .iter()
            .zip(&sx)
            .map(|(s, v)| s - c * v)
            .collect();
        let r = fitter.fit(&MomentSeq::new(basis.clone(), shifted)?, k, false, &fit_cfg)?;
        Ok(MassProbe {
            c,
            member: r.converged,
            residual: r.residual,
        })
    };
    let mut probes = Vec::new();
    let origin = test(0.0)?;
    if !origin.member {
        return Err(Error::NotAMomentSequence {
            best_residual: origin.residual,
        });
    }
    probes.push(origin);
    if !(upper > 0.0) {
        return Ok(MaxMassResult {
            point: x.to_vec(),
            c_low: 0.0,
            c_high: 0.0,
            c_star: 0.0,
            upper_bound: upper,
            probes,
        });
    }
    let (mut lo, mut hi) = (0.0, upper);
    let top = test(upper)?;
    if top.member {
        lo = upper;
    }
    probes.push(top);
    while hi - lo > cfg.tolerance {
        let mid = 0.5 * (lo + hi);
        let p = test(mid)?;
        if p.member {
            lo = mid;
        } else {
            hi = mid;
        }
        probes.push(p);
    }
    Ok(MaxMassResult {
        point: x.to_vec(),
        c_low: lo,
        c_high: hi,
        c_star: 0.5 * (lo + hi),
        upper_bound: upper,
        probes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::SerialFitter;
    use crate::scalar::int;

    #[test]
    fn coordinates_of_span_element() {
        let b = Basis::full_degree(1, 2).unwrap();
        let e = Poly::parse("1 + x^2", Some(1)).unwrap();
        assert_eq!(
            basis_coordinates(&b, &e).unwrap(),
            alloc::vec![int(1), int(0), int(1)]
        );
        let out = Poly::parse("x^3", Some(1)).unwrap();
        assert!(basis_coordinates(&b, &out).is_err());
    }

    #[test]
    fn point_mass_is_its_own_maximum() {
        let b = Basis::full_degree(1, 2).unwrap();
        let s = MomentSeq::new(b, alloc::vec![3.0, 1.5, 0.75]).unwrap();
        let e = Poly::parse("1 + x^2", Some(1)).unwrap();
        let r = max_mass(
            &s,
            &[0.5],
            &e,
            &SerialFitter { seed: 1 },
            &MassConfig::default(),
        )
        .unwrap();
        assert!((r.c_star - 3.0).abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn rejects_nonpositive_e() {
        let b = Basis::full_degree(1, 2).unwrap();
        let s = MomentSeq::new(b, alloc::vec![1.0, 0.0, 1.0]).unwrap();
        let e = Poly::parse("x", Some(1)).unwrap();
        assert!(max_mass(
            &s,
            &[0.0],
            &e,
            &SerialFitter { seed: 1 },
            &MassConfig::default()
        )
        .is_err());
    }
}
