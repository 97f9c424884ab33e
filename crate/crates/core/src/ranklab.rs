//! `N_A`: the smallest atom count at which `DS_{k,A}` reaches full rank.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rand::Rng;

use crate::basis::Basis;
use crate::bounds::binomial;
use crate::error::{Error, Result};
use crate::geometry::jacobian;
use crate::matrix::{rank, Matrix};
use crate::measure::AtomicMeasure;
use crate::scalar::{int, Rational};

/// Half-width of the integer box probe coordinates are drawn from.
pub const PROBE_RANGE: i64 = 10_000;

/// `⌈m/(n+1)⌉`, or `⌈m/n⌉` when all elements share one homogeneous degree.
pub fn na_lower_bound(basis: &Basis) -> usize {
    let (m, n) = (basis.len(), basis.nvars());
    if basis.common_degree().is_some() && n > 1 {
        m.div_ceil(n)
    } else {
        m.div_ceil(n + 1)
    }
}

/// Generic value `⌈C(n+d,n)/(n+1)⌉` with the Alexander–Hirschowitz
/// exceptions. With `homogeneous`, `n` counts the variables of `B_{n,d}`,
/// which behaves like `A_{n−1,d}`.
pub fn na_closed_form(n: u64, d: u64, homogeneous: bool) -> Result<u64> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidArgument("need n >= 1 and d >= 1".into()));
    }
    let n = if homogeneous { n - 1 } else { n };
    if n == 0 {
        return Ok(1);
    }
    let v = match (n, d) {
        (_, 2) => n + 1,
        (4, 3) => 8,
        (2, 4) => 6,
        (3, 4) => 10,
        (4, 4) => 15,
        _ => (binomial(n + d, n).div_ceil(u128::from(n + 1))) as u64,
    };
    Ok(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NaMethod {
    Probe,
    ClosedForm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeAttempt {
    pub k: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NaReport {
    pub basis_size: usize,
    pub nvars: usize,
    pub n_a: usize,
    pub method: NaMethod,
    pub witness: Option<AtomicMeasure<Rational>>,
    pub lower_bound: usize,
    /// Every probed configuration, in order.
    pub attempts: Vec<ProbeAttempt>,
}

fn random_point(rng: &mut impl Rng, n: usize, affine_chart: bool) -> Vec<Rational> {
    (0..n)
        .map(|i| {
            if affine_chart && i == n - 1 {
                int(1)
            } else {
                int(rng.random_range(-PROBE_RANGE..=PROBE_RANGE))
            }
        })
        .collect()
}

fn random_configuration(
    rng: &mut impl Rng,
    k: usize,
    n: usize,
    affine_chart: bool,
) -> Vec<Vec<Rational>> {
    let mut pts: Vec<Vec<Rational>> = Vec::with_capacity(k);
    while pts.len() < k {
        let p = random_point(rng, n, affine_chart);
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    pts
}

/// Exact rank of `DS_{k,A}` at unit weights.
pub fn jacobian_rank(basis: &Basis, points: &[Vec<Rational>]) -> Result<usize> {
    let mu = AtomicMeasure::uniform(basis.nvars(), points.to_vec())?;
    let j = jacobian(basis, &mu)?.matrix;
    Ok(rank(&integer_rows(&j)))
}

/// Clears denominators row by row; the rank is unchanged.
pub fn integer_rows(m: &Matrix<Rational>) -> Matrix<BigInt> {
    let lcms: Vec<BigInt> = (0..m.nrows())
        .map(|i| {
            m.row(i)
                .iter()
                .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
        })
        .collect();
    Matrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        let v = &m[(i, j)];
        v.numer() * (&lcms[i] / v.denom())
    })
}

/// Smallest `k ≤ max_k` with full rank at some random integer configuration.
pub fn na_probe(
    basis: &Basis,
    max_k: usize,
    trials: usize,
    rng: &mut impl Rng,
) -> Result<NaReport> {
    let lower = na_lower_bound(basis);
    if max_k < lower {
        return Err(Error::InvalidArgument(alloc::format!(
            "max_k = {max_k} is below the lower bound {lower}"
        )));
    }
    let (m, n) = (basis.len(), basis.nvars());
    let chart = basis.common_degree().is_some() && n > 1;
    let trials = trials.max(1);
    let mut attempts = Vec::new();
    let mut best = 0;
    for k in lower..=max_k {
        for _ in 0..trials {
            let pts = random_configuration(rng, k, n, chart);
            let r = jacobian_rank(basis, &pts)?;
            attempts.push(ProbeAttempt { k, rank: r });
            best = best.max(r);
            if r == m {
                return Ok(NaReport {
                    basis_size: m,
                    nvars: n,
                    n_a: k,
                    method: NaMethod::Probe,
                    witness: Some(AtomicMeasure::uniform(n, pts)?),
                    lower_bound: lower,
                    attempts,
                });
            }
        }
    }
    Err(Error::Exhausted {
        max_k,
        best_rank: best,
        target: m,
    })
}

/// Closed-form report for the standard bases `A_{n,d}` and `B_{n,d}`.
pub fn na_closed_form_report(basis: &Basis) -> Result<NaReport> {
    use crate::basis::BasisKind;
    let (n, homogeneous, d) = match basis.kind() {
        BasisKind::FullDegree(d) => (basis.nvars(), false, *d),
        BasisKind::Homogeneous(d) => (basis.nvars(), true, *d),
        BasisKind::Gapped1D(_) => {
            return Ok(NaReport {
                basis_size: basis.len(),
                nvars: 1,
                n_a: basis.len().div_ceil(2),
                method: NaMethod::ClosedForm,
                witness: None,
                lower_bound: na_lower_bound(basis),
                attempts: Vec::new(),
            })
        }
        BasisKind::Custom => {
            return Err(Error::InvalidArgument(
                "no closed form for a custom basis".into(),
            ))
        }
    };
    Ok(NaReport {
        basis_size: basis.len(),
        nvars: n,
        n_a: na_closed_form(n as u64, u64::from(d), homogeneous)? as usize,
        method: NaMethod::ClosedForm,
        witness: None,
        lower_bound: na_lower_bound(basis),
        attempts: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lower_bounds() {
        assert_eq!(na_lower_bound(&Basis::full_degree(2, 2).unwrap()), 2);
        assert_eq!(na_lower_bound(&Basis::homogeneous(3, 10).unwrap()), 22);
        assert_eq!(na_lower_bound(&Basis::full_degree(1, 3).unwrap()), 2);
    }

    #[test]
    fn closed_form_exceptions() {
        assert_eq!(na_closed_form(4, 4, false).unwrap(), 15);
        assert_eq!(na_closed_form(3, 4, false).unwrap(), 10);
        assert_eq!(na_closed_form(2, 5, false).unwrap(), 7);
        assert_eq!(na_closed_form(3, 10, true).unwrap(), 22);
        assert_eq!(na_closed_form(3, 4, true).unwrap(), 6);
        assert!(na_closed_form(0, 2, false).is_err());
    }

    #[test]
    fn probe_small_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let r = na_probe(&Basis::full_degree(2, 2).unwrap(), 6, 3, &mut rng).unwrap();
        assert_eq!(r.n_a, 3);
        let r = na_probe(&Basis::full_degree(1, 5).unwrap(), 6, 3, &mut rng).unwrap();
        assert_eq!(r.n_a, 3);
        let r = na_probe(&Basis::full_degree(2, 5).unwrap(), 9, 3, &mut rng).unwrap();
        assert_eq!(r.n_a, 7);
    }

    #[test]
    fn probe_exhausted() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let e = na_probe(&Basis::full_degree(2, 4).unwrap(), 5, 2, &mut rng).unwrap_err();
        assert!(matches!(e, Error::Exhausted { target: 15, .. }));
    }
}
