//! Moment curve, moment map `S_{k,A}`, its total derivative, and the apolar
//! scalar product on forms.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::basis::Basis;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::measure::{AtomicMeasure, MomentSeq};
use crate::poly::{Monomial, Poly};
use crate::scalar::{Rational, Scalar};

pub fn moment_curve<T: Scalar>(basis: &Basis, x: &[T]) -> Result<Vec<T>> {
    basis.eval(x)
}

/// `S_{k,A}(C, X) = Σ c_i s_A(x_i)`.
pub fn moment_map<T: Scalar>(basis: &Basis, mu: &AtomicMeasure<T>) -> Result<MomentSeq<T>> {
    check_measure(basis, mu)?;
    let mut s = vec![T::zero(); basis.len()];
    for (c, x) in mu.weights().iter().zip(mu.points()) {
        for (acc, v) in s.iter_mut().zip(basis.eval(x)?) {
            *acc += v * c;
        }
    }
    MomentSeq::new(basis.clone(), s)
}

fn check_measure<T>(basis: &Basis, mu: &AtomicMeasure<T>) -> Result<()> {
    if mu.nvars() != basis.nvars() {
        return Err(Error::DimensionMismatch {
            expected: basis.nvars(),
            found: mu.nvars(),
        });
    }
    Ok(())
}

/// `DS_{k,A}(C, X)` as an `m × k(n+1)` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobianEval<T> {
    pub matrix: Matrix<T>,
    pub atom_count: usize,
}

/// Columns per atom: `s_A(x_i)`, then `c_i ∂_1 s_A(x_i), …, c_i ∂_n s_A(x_i)`.
pub fn jacobian<T: Scalar>(basis: &Basis, mu: &AtomicMeasure<T>) -> Result<JacobianEval<T>> {
    check_measure(basis, mu)?;
    let n = basis.nvars();
    let mut cols = Vec::with_capacity(mu.len() * (n + 1));
    for (c, x) in mu.weights().iter().zip(mu.points()) {
        cols.push(basis.eval(x)?);
        for i in 0..n {
            let d = basis.eval_partial(x, i)?;
            cols.push(d.into_iter().map(|v| v * c).collect());
        }
    }
    let matrix = if cols.is_empty() {
        Matrix::from_fn(basis.len(), 0, |_, _| T::zero())
    } else {
        Matrix::from_columns(&cols)?
    };
    Ok(JacobianEval {
        matrix,
        atom_count: mu.len(),
    })
}

pub fn moment_map_f64(basis: &Basis, weights: &[f64], points: &[Vec<f64>]) -> Vec<f64> {
    let m = basis.len();
    let mut s = vec![0.0; m];
    let mut v = vec![0.0; m];
    for (c, x) in weights.iter().zip(points) {
        basis.eval_f64(x, &mut v);
        for (acc, vj) in s.iter_mut().zip(&v) {
            *acc += c * vj;
        }
    }
    s
}

/// Float Jacobian in the same column layout as [`jacobian`].
pub fn jacobian_f64(basis: &Basis, weights: &[f64], points: &[Vec<f64>]) -> DMatrix<f64> {
    let (m, n) = (basis.len(), basis.nvars());
    let mut out = DMatrix::zeros(m, weights.len() * (n + 1));
    let mut v = vec![0.0; m];
    let mut g = vec![0.0; m * n];
    for (a, (c, x)) in weights.iter().zip(points).enumerate() {
        basis.eval_grad_f64(x, &mut v, &mut g);
        let base = a * (n + 1);
        for j in 0..m {
            out[(j, base)] = v[j];
            for i in 0..n {
                out[(j, base + 1 + i)] = c * g[j * n + i];
            }
        }
    }
    out
}

/// Numerical rank with threshold `rel_tol · σ_max`.
pub fn float_rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().singular_values();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// Multinomial coefficient `|α|! / (α_1! ⋯ α_n!)`.
pub fn multinomial(alpha: &[u32]) -> BigInt {
    let mut acc = BigInt::one();
    let mut total: u64 = 0;
    for &a in alpha {
        for k in 1..=u64::from(a) {
            total += 1;
            acc = acc * BigInt::from(total) / BigInt::from(k);
        }
    }
    acc
}

/// Apolar pairing `[p, q] = Σ_α γ_α a_α b_α` where `p = Σ γ_α a_α x^α`.
pub fn apolar(p: &Poly<Rational>, q: &Poly<Rational>) -> Result<Rational> {
    let degree = |f: &Poly<Rational>| {
        f.homogeneous_degree()
            .ok_or_else(|| Error::DegreeMismatch("apolar product needs homogeneous forms".into()))
    };
    if p.is_empty() || q.is_empty() {
        return Ok(Rational::zero());
    }
    let (dp, dq) = (degree(p)?, degree(q)?);
    if dp != dq || dp % 2 != 0 {
        return Err(Error::DegreeMismatch(alloc::format!(
            "apolar product needs equal even degrees, got {dp} and {dq}"
        )));
    }
    if p.nvars() != q.nvars() {
        return Err(Error::DimensionMismatch {
            expected: p.nvars(),
            found: q.nvars(),
        });
    }
    let mut acc = Rational::zero();
    for (m, a) in p.terms() {
        let b = q.coeff(m);
        if b.is_zero() {
            continue;
        }
        acc += a.clone() * &b / Rational::from_integer(multinomial(m.exps()));
    }
    Ok(acc)
}

/// `(λ · x)^e` expanded.
pub fn linear_form_power(lambda: &[Rational], e: u32) -> Poly<Rational> {
    let n = lambda.len();
    let mut out = Poly::zero_in(n);
    for exps in crate::basis::monomials_of_degree(n, e) {
        let mut c = Rational::from_integer(multinomial(&exps));
        for (l, &k) in lambda.iter().zip(&exps) {
            c *= num_traits::pow(l.clone(), k as usize);
        }
        out += &Poly::term(Monomial::new(exps), c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::rank;
    use crate::scalar::{int, rational};

    fn one_x_x2() -> Basis {
        Basis::full_degree(1, 2).unwrap()
    }

    #[test]
    fn curve_at_zero_and_two() {
        let b = one_x_x2();
        assert_eq!(
            moment_curve(&b, &[int(0)]).unwrap(),
            vec![int(1), int(0), int(0)]
        );
        assert_eq!(
            moment_curve(&b, &[int(2)]).unwrap(),
            vec![int(1), int(2), int(4)]
        );
        let h = Basis::homogeneous(3, 2).unwrap();
        assert!(moment_curve(&h, &[int(1), int(1), int(1)])
            .unwrap()
            .iter()
            .all(|v| *v == int(1)));
        assert!(moment_curve(&h, &[int(1)]).is_err());
    }

    #[test]
    fn two_point_symmetric_measure() {
        let mu = AtomicMeasure::new(
            1,
            vec![rational(1, 2), rational(1, 2)],
            vec![vec![int(-1)], vec![int(1)]],
            false,
        )
        .unwrap();
        let s = moment_map(&one_x_x2(), &mu).unwrap();
        assert_eq!(s.values(), &[int(1), int(0), int(1)]);
    }

    #[test]
    fn four_point_sextic_measure() {
        let b = Basis::gapped_1d(&[0, 1, 2, 6]).unwrap();
        let pts = [-2, -1, 1, 2].iter().map(|&v| vec![int(v)]).collect();
        let mu = AtomicMeasure::new(1, vec![rational(1, 4); 4], pts, false).unwrap();
        let s = moment_map(&b, &mu).unwrap();
        assert_eq!(
            s.values(),
            &[int(1), int(0), rational(5, 2), rational(65, 2)]
        );
    }

    #[test]
    fn empty_measure_gives_zero() {
        let b = Basis::full_degree(2, 2).unwrap();
        let s = moment_map(&b, &AtomicMeasure::<Rational>::empty(2, false)).unwrap();
        assert!(s.values().iter().all(Zero::is_zero));
    }

    #[test]
    fn one_atom_linear_jacobian() {
        let b = Basis::full_degree(1, 1).unwrap();
        let mu = AtomicMeasure::new(1, vec![int(3)], vec![vec![int(5)]], false).unwrap();
        let j = jacobian(&b, &mu).unwrap().matrix;
        assert_eq!(
            j,
            Matrix::from_rows(vec![vec![int(1), int(0)], vec![int(5), int(3)]]).unwrap()
        );
    }

    #[test]
    fn multinomials() {
        assert_eq!(multinomial(&[2, 2]), BigInt::from(6));
        assert_eq!(multinomial(&[4, 0, 0]), BigInt::from(1));
        assert_eq!(multinomial(&[1, 1, 1]), BigInt::from(6));
    }

    #[test]
    fn apolar_reproduces_power() {
        let lambda = [rational(2, 3), int(-1)];
        let f = linear_form_power(&lambda, 4);
        let p: Poly<Rational> = Poly::parse("x1^4", Some(2)).unwrap();
        assert_eq!(apolar(&p, &f).unwrap(), num_traits::pow(rational(2, 3), 4));
        let odd: Poly<Rational> = Poly::parse("x1^3", Some(2)).unwrap();
        assert!(apolar(&odd, &odd).is_err());
    }

    #[test]
    fn weight_scaling_keeps_rank() {
        let b = Basis::full_degree(2, 2).unwrap();
        let pts = vec![vec![int(0), int(0)], vec![int(1), int(1)]];
        let mu1 = AtomicMeasure::uniform(2, pts.clone()).unwrap();
        let mu2 = AtomicMeasure::new(2, vec![rational(7, 3), int(5)], pts, false).unwrap();
        assert_eq!(
            rank(&jacobian(&b, &mu1).unwrap().matrix),
            rank(&jacobian(&b, &mu2).unwrap().matrix)
        );
    }
}
