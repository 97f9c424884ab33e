//! Generalized Vandermonde determinants of `{x^{d_1}, …, x^{d_m}}`, their
//! Schur cofactors `p_A`, the doubled-variable specializations `q_A`, and
//! exact checks of the Jacobian determinant identities they enter.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{det, Matrix};
use crate::poly::{Monomial, Poly};
use crate::scalar::{int, Rational};

pub type IntPoly = Poly<BigInt>;

/// Symbolic identity checks refuse lists longer than this by default.
pub const DEFAULT_SYMBOLIC_CAP: usize = 8;

fn check_exponents(d: &[u32]) -> Result<()> {
    if d.is_empty() {
        return Err(Error::InvalidArgument("empty exponent list".into()));
    }
    if d.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(format!(
            "exponents must be strictly increasing: {d:?}"
        )));
    }
    Ok(())
}

fn mono(n: usize, i: usize, e: u32) -> IntPoly {
    let mut ex = vec![0; n];
    ex[i] = e;
    Poly::monomial(&ex)
}

fn scaled_mono(n: usize, i: usize, e: u32, c: i64) -> IntPoly {
    mono(n, i, e).scale(&BigInt::from(c))
}

/// `x_j − x_i` in `n` variables.
fn diff_var(n: usize, j: usize, i: usize) -> IntPoly {
    Poly::var(n, j) - Poly::var(n, i)
}

/// `x_j y_i − x_i y_j` with `x_t = 2t`, `y_t = 2t + 1`.
fn cross(n: usize, j: usize, i: usize) -> IntPoly {
    let xj = Poly::var(n, 2 * j);
    let yi = Poly::var(n, 2 * i + 1);
    let xi = Poly::var(n, 2 * i);
    let yj = Poly::var(n, 2 * j + 1);
    &xj * &yi - &xi * &yj
}

fn prod_vars(n: usize, vars: impl Iterator<Item = usize>, e: u32) -> IntPoly {
    let mut ex = vec![0; n];
    for v in vars {
        ex[v] += e;
    }
    Poly::monomial(&ex)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchurDecomposition {
    pub exponents: Vec<u32>,
    /// `det(x_i^{d_j})`.
    pub f_a: IntPoly,
    /// `Π_{i<j} (x_j − x_i)`.
    pub vandermonde: IntPoly,
    /// `d_1`, the power of `x_1 ⋯ x_m` split off first.
    pub prefix_power: u32,
    pub p_a: IntPoly,
}

impl SchurDecomposition {
    /// `Σ d_i − m d_1 − m(m−1)/2`.
    pub fn expected_degree(&self) -> u32 {
        expected_degree(&self.exponents)
    }

    pub fn has_positive_integer_coefficients(&self) -> bool {
        self.p_a.terms().all(|(_, c)| c.is_positive())
    }
}

pub fn expected_degree(d: &[u32]) -> u32 {
    let m = d.len() as u32;
    d.iter().sum::<u32>() - m * d[0] - m * (m - 1) / 2
}

/// Builds `f_A` symbolically and divides out `(x_1⋯x_m)^{d_1}` and every
/// `x_j − x_i`; a failed division means the factorization is false.
pub fn schur_decompose(exponents: &[u32]) -> Result<SchurDecomposition> {
    check_exponents(exponents)?;
    let m = exponents.len();
    let mat = Matrix::from_fn(m, m, |j, i| mono(m, i, exponents[j]));
    let f_a = det(&mat)?;
    let d1 = exponents[0];
    let prefix = prod_vars(m, 0..m, d1);
    let mut p = f_a.div_exact(&prefix)?;
    let mut vandermonde = Poly::constant(m, BigInt::one());
    for j in 0..m {
        for i in 0..j {
            let lin = diff_var(m, j, i);
            p = p.div_exact(&lin)?;
            vandermonde = &vandermonde * &lin;
        }
    }
    Ok(SchurDecomposition {
        exponents: exponents.to_vec(),
        f_a,
        vandermonde,
        prefix_power: d1,
        p_a: p,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QPoly {
    pub parity: Parity,
    /// `[q_A]` for even `m`, `[q_{A,1}, …, q_{A,k}]` for odd `m`.
    pub polys: Vec<IntPoly>,
    /// `q_B` (even) or `q_{B,k}` (odd) in `(x_1, y_1, …, x_k, y_k)`.
    pub homogeneous: IntPoly,
}

impl QPoly {
    pub fn k(&self) -> usize {
        self.polys[0].nvars()
    }

    /// `q_A` for even `m`, `q_{A,k}` for odd `m`.
    pub fn primary(&self) -> &IntPoly {
        self.polys.last().expect("at least one q polynomial")
    }
}

/// Variable map doubling every slot except `single` (if any).
fn doubling_map(k: usize, single: Option<usize>) -> Vec<usize> {
    let mut map = Vec::new();
    for t in 0..k {
        map.push(t);
        if Some(t) != single {
            map.push(t);
        }
    }
    map
}

/// `y`-exponents `(e_pair, e_single)` homogenizing `q_A` or `q_{A,k}`.
pub fn homogenizing_exponents(d: &[u32]) -> (i64, i64) {
    let m = d.len() as i64;
    let (d1, dm) = (i64::from(d[0]), i64::from(*d.last().unwrap()));
    let pair = 2 * (dm - d1 - m) + 3;
    let single = dm - d1 - m + 1;
    (pair, single)
}

/// `Π y_t^{e_t} · q(x_1/y_1, …, x_k/y_k)` in `(x_1, y_1, …)`.
pub fn homogenize(q: &IntPoly, y_exps: &[i64]) -> Result<IntPoly> {
    let k = q.nvars();
    let mut out = Poly::zero_in(2 * k);
    for (m, c) in q.terms() {
        let mut ex = vec![0u32; 2 * k];
        for t in 0..k {
            let a = m.exps()[t];
            let b = y_exps[t] - i64::from(a);
            if b < 0 {
                return Err(Error::InvalidArgument(format!(
                    "homogenization exponent {} too small for degree {a} in x{}",
                    y_exps[t],
                    t + 1
                )));
            }
            ex[2 * t] = a;
            ex[2 * t + 1] = b as u32;
        }
        out += &Poly::term(Monomial::new(ex), c.clone());
    }
    Ok(out)
}

pub fn build_q(decomp: &SchurDecomposition) -> Result<QPoly> {
    let d = &decomp.exponents;
    let m = d.len();
    let k = m.div_ceil(2);
    let (pair, single) = homogenizing_exponents(d);
    if m % 2 == 0 {
        let q = decomp.p_a.substitute_vars(&doubling_map(k, None), k)?;
        let homogeneous = homogenize(&q, &vec![pair; k])?;
        Ok(QPoly {
            parity: Parity::Even,
            polys: vec![q],
            homogeneous,
        })
    } else {
        let polys = (0..k)
            .map(|i| decomp.p_a.substitute_vars(&doubling_map(k, Some(i)), k))
            .collect::<Result<Vec<_>>>()?;
        let mut ys = vec![pair; k];
        ys[k - 1] = single;
        let homogeneous = homogenize(&polys[k - 1], &ys)?;
        Ok(QPoly {
            parity: Parity::Odd,
            polys,
            homogeneous,
        })
    }
}

/// Exact symmetry under every transposition of adjacent variables.
pub fn is_symmetric(p: &IntPoly) -> bool {
    let n = p.nvars();
    (0..n.saturating_sub(1)).all(|i| {
        let mut map: Vec<usize> = (0..n).collect();
        map.swap(i, i + 1);
        p.substitute_vars(&map, n).map(|q| q == *p).unwrap_or(false)
    })
}

/// `q_{A,i}(x) = q_{A,k}(x_1, …, x_{i−1}, x_{i+1}, …, x_k, x_i)` for all `i`.
/// Vacuous for even `m`.
pub fn relabeling_holds(q: &QPoly) -> bool {
    if q.parity == Parity::Even {
        return true;
    }
    let k = q.k();
    let qk = q.primary();
    (0..k).all(|i| {
        // variable t of q_{A,k} receives x_{order[t]}
        let order: Vec<usize> = (0..k).filter(|&t| t != i).chain([i]).collect();
        qk.substitute_vars(&order, k)
            .map(|r| r == q.polys[i])
            .unwrap_or(false)
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum IdentityVerdict {
    Equal,
    /// `lhs − rhs`.
    Mismatch(IntPoly),
}

impl IdentityVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Self::Equal)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub exponents: Vec<u32>,
    pub homogeneous: bool,
    /// Determinant at unit weights; the full one carries `c_1 ⋯ c_k`.
    pub lhs: IntPoly,
    pub rhs: IntPoly,
    pub verdict: IdentityVerdict,
}

/// `det(s(x_1), s'(x_1), …)` with the final derivative column dropped for odd `m`.
pub fn affine_jacobian_det(exponents: &[u32]) -> Result<IntPoly> {
    check_exponents(exponents)?;
    let m = exponents.len();
    let k = m.div_ceil(2);
    let mut cols: Vec<Vec<IntPoly>> = Vec::with_capacity(m);
    for t in 0..k {
        cols.push(exponents.iter().map(|&d| mono(k, t, d)).collect());
        if cols.len() < m {
            cols.push(
                exponents
                    .iter()
                    .map(|&d| {
                        if d == 0 {
                            Poly::zero_in(k)
                        } else {
                            scaled_mono(k, t, d - 1, i64::from(d))
                        }
                    })
                    .collect(),
            );
        }
    }
    det(&Matrix::from_columns(&cols)?)
}

/// The same determinant for two-variable monomials `x^{a_j} y^{b_j}`, with
/// only `∂_x` columns; variables are `(x_1, y_1, …, x_k, y_k)`.
pub fn homogeneous_jacobian_det(pairs: &[(u32, u32)]) -> Result<IntPoly> {
    let m = pairs.len();
    if m == 0 {
        return Err(Error::InvalidArgument("empty basis".into()));
    }
    let k = m.div_ceil(2);
    let n = 2 * k;
    let term = |t: usize, a: u32, b: u32, c: i64| {
        let mut ex = vec![0; n];
        ex[2 * t] = a;
        ex[2 * t + 1] = b;
        Poly::monomial(&ex).scale(&BigInt::from(c))
    };
    let mut cols: Vec<Vec<IntPoly>> = Vec::with_capacity(m);
    for t in 0..k {
        cols.push(pairs.iter().map(|&(a, b)| term(t, a, b, 1)).collect());
        if cols.len() < m {
            cols.push(
                pairs
                    .iter()
                    .map(|&(a, b)| {
                        if a == 0 {
                            Poly::zero_in(n)
                        } else {
                            term(t, a - 1, b, i64::from(a))
                        }
                    })
                    .collect(),
            );
        }
    }
    det(&Matrix::from_columns(&cols)?)
}

fn affine_rhs(d: &[u32], q: &QPoly) -> IntPoly {
    let m = d.len();
    let k = m.div_ceil(2);
    let d1 = d[0];
    if m % 2 == 0 {
        let mut r = prod_vars(k, 0..k, 2 * d1);
        for j in 0..k {
            for i in 0..j {
                r = &r * &diff_var(k, j, i).pow(4);
            }
        }
        &r * q.primary()
    } else {
        let mut r = prod_vars(k, 0..k - 1, 2 * d1) * mono(k, k - 1, d1);
        for j in 0..k - 1 {
            for i in 0..j {
                r = &r * &diff_var(k, j, i).pow(4);
            }
        }
        for i in 0..k - 1 {
            r = &r * &diff_var(k, k - 1, i).pow(2);
        }
        &r * q.primary()
    }
}

fn homogeneous_rhs(d: &[u32], q: &QPoly) -> IntPoly {
    let m = d.len();
    let k = m.div_ceil(2);
    let n = 2 * k;
    let d1 = d[0];
    let xs = |upto: usize| (0..upto).map(|t| 2 * t);
    if m % 2 == 0 {
        let mut r = prod_vars(n, xs(k), 2 * d1);
        for j in 0..k {
            for i in 0..j {
                r = &r * &cross(n, j, i).pow(4);
            }
        }
        &r * &q.homogeneous
    } else {
        let mut r = prod_vars(n, xs(k - 1), 2 * d1) * mono(n, 2 * (k - 1), d1);
        for j in 0..k - 1 {
            for i in 0..j {
                r = &r * &cross(n, j, i).pow(4);
            }
        }
        for i in 0..k - 1 {
            r = &r * &cross(n, k - 1, i).pow(2);
        }
        &r * &q.homogeneous
    }
}

fn verdict(lhs: &IntPoly, rhs: &IntPoly) -> IdentityVerdict {
    let diff = lhs - rhs;
    if diff.is_zero() {
        IdentityVerdict::Equal
    } else {
        IdentityVerdict::Mismatch(diff)
    }
}

fn check_cap(m: usize, cap: usize) -> Result<()> {
    if m > cap {
        return Err(Error::FeasibilityCap { m, cap });
    }
    Ok(())
}

/// Compares the symbolic Jacobian determinant of `{x^{d_j}}` with its
/// closed form through `q_A` or `q_{A,k}`.
pub fn verify_jacobian_identity(exponents: &[u32], cap: usize) -> Result<IdentityCheck> {
    check_exponents(exponents)?;
    check_cap(exponents.len(), cap)?;
    let q = build_q(&schur_decompose(exponents)?)?;
    let lhs = affine_jacobian_det(exponents)?;
    let rhs = affine_rhs(exponents, &q);
    Ok(IdentityCheck {
        exponents: exponents.to_vec(),
        homogeneous: false,
        verdict: verdict(&lhs, &rhs),
        lhs,
        rhs,
    })
}

/// The homogeneous counterpart for `{x^{d_j} y^{d_m − d_j}}` through `q_B`.
pub fn verify_homogeneous_identity(exponents: &[u32], cap: usize) -> Result<IdentityCheck> {
    check_exponents(exponents)?;
    check_cap(exponents.len(), cap)?;
    let q = build_q(&schur_decompose(exponents)?)?;
    let top = *exponents.last().unwrap();
    let pairs: Vec<(u32, u32)> = exponents.iter().map(|&d| (d, top - d)).collect();
    let lhs = homogeneous_jacobian_det(&pairs)?;
    let rhs = homogeneous_rhs(exponents, &q);
    Ok(IdentityCheck {
        exponents: exponents.to_vec(),
        homogeneous: true,
        verdict: verdict(&lhs, &rhs),
        lhs,
        rhs,
    })
}

/// `s_λ(x)` by the Jacobi–Trudi determinant `det(h_{λ_i − i + j})`, where
/// `λ` is the partition attached to the exponent list.
pub fn schur_eval(exponents: &[u32], x: &[Rational]) -> Result<Rational> {
    check_exponents(exponents)?;
    let m = exponents.len();
    if x.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: x.len(),
        });
    }
    let d1 = exponents[0];
    let lambda: Vec<i64> = (0..m)
        .map(|i| i64::from(exponents[m - 1 - i]) - i64::from(d1) - (m - 1 - i) as i64)
        .collect();
    let top = (lambda[0] + m as i64).max(0) as usize;
    // h[r] = complete homogeneous symmetric polynomial of degree r at x
    let mut h = vec![Rational::zero(); top + 1];
    h[0] = Rational::one();
    for xi in x {
        for r in 1..=top {
            let add = h[r - 1].clone() * xi;
            h[r] += add;
        }
    }
    let hr = |r: i64| -> Rational {
        if r < 0 || r as usize > top {
            Rational::zero()
        } else {
            h[r as usize].clone()
        }
    };
    let jt = Matrix::from_fn(m, m, |i, j| hr(lambda[i] - i as i64 + j as i64));
    det(&jt)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpotCheck {
    pub exponents: Vec<u32>,
    pub points: usize,
    /// First point at which the two sides differ, if any.
    pub failure: Option<Vec<Rational>>,
}

/// Exact comparison at random rational points, evaluating `q_A` through
/// Jacobi–Trudi so no symbolic `p_A` is needed.
pub fn spot_check_jacobian_identity(
    exponents: &[u32],
    points: usize,
    rng: &mut impl Rng,
) -> Result<SpotCheck> {
    check_exponents(exponents)?;
    let m = exponents.len();
    let k = m.div_ceil(2);
    let d1 = exponents[0];
    for _ in 0..points {
        let mut x: Vec<Rational> = Vec::with_capacity(k);
        while x.len() < k {
            let v = Rational::new(
                BigInt::from(rng.random_range(-50i64..=50)),
                BigInt::from(rng.random_range(1i64..=7)),
            );
            if !v.is_zero() && !x.contains(&v) {
                x.push(v);
            }
        }
        let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(m);
        for xt in &x {
            cols.push(
                exponents
                    .iter()
                    .map(|&d| num_traits::pow(xt.clone(), d as usize))
                    .collect(),
            );
            if cols.len() < m {
                cols.push(
                    exponents
                        .iter()
                        .map(|&d| {
                            if d == 0 {
                                Rational::zero()
                            } else {
                                int(i64::from(d)) * num_traits::pow(xt.clone(), d as usize - 1)
                            }
                        })
                        .collect(),
                );
            }
        }
        let lhs = det(&Matrix::from_columns(&cols)?)?;
        let doubled: Vec<Rational> = if m % 2 == 0 {
            x.iter().flat_map(|v| [v.clone(), v.clone()]).collect()
        } else {
            let mut v: Vec<Rational> = x[..k - 1]
                .iter()
                .flat_map(|v| [v.clone(), v.clone()])
                .collect();
            v.push(x[k - 1].clone());
            v
        };
        let q = schur_eval(exponents, &doubled)?;
        let mut rhs = q;
        let pw = |v: &Rational, e: u32| num_traits::pow(v.clone(), e as usize);
        let full = if m % 2 == 0 { k } else { k - 1 };
        for xt in &x[..full] {
            rhs *= pw(xt, 2 * d1);
        }
        if m % 2 == 1 {
            rhs *= pw(&x[k - 1], d1);
        }
        for j in 0..full {
            for i in 0..j {
                rhs *= pw(&(x[j].clone() - &x[i]), 4);
            }
        }
        if m % 2 == 1 {
            for i in 0..k - 1 {
                rhs *= pw(&(x[k - 1].clone() - &x[i]), 2);
            }
        }
        if lhs != rhs {
            return Ok(SpotCheck {
                exponents: exponents.to_vec(),
                points,
                failure: Some(x),
            });
        }
    }
    Ok(SpotCheck {
        exponents: exponents.to_vec(),
        points,
        failure: None,
    })
}

/// Converts an integer polynomial to rational coefficients.
pub fn to_rational(p: &IntPoly) -> Poly<Rational> {
    p.map_coeffs(|c| Rational::from_integer(c.clone()))
}

/// Converts back when every coefficient is integral.
pub fn to_integer(p: &Poly<Rational>) -> Option<IntPoly> {
    if p.terms().any(|(_, c)| !c.is_integer()) {
        return None;
    }
    Some(p.map_coeffs(|c| c.to_integer()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ip(s: &str, n: usize) -> IntPoly {
        to_integer(&Poly::parse(s, Some(n)).unwrap()).unwrap()
    }

    fn pairs_product(n: usize, f: impl Fn(usize, usize) -> IntPoly) -> IntPoly {
        let mut r = Poly::constant(n, BigInt::one());
        for j in 0..n {
            for i in 0..j {
                r = &r * &f(i, j);
            }
        }
        r
    }

    #[test]
    fn p_a_for_1_4_7() {
        let s = schur_decompose(&[1, 4, 7]).unwrap();
        let expected = pairs_product(3, |i, j| {
            let (a, b) = (Poly::var(3, i), Poly::var(3, j));
            &(&a * &a + &a * &b) + &(&b * &b)
        });
        assert_eq!(s.p_a, expected);
        assert_eq!(s.prefix_power, 1);
        assert_eq!(s.p_a.homogeneous_degree(), Some(s.expected_degree()));
    }

    #[test]
    fn p_a_complete_homogeneous() {
        let s = schur_decompose(&[1, 2, 6]).unwrap();
        assert_eq!(s.p_a.len(), 10);
        assert!(s.p_a.terms().all(|(_, c)| c.is_one()));
        assert_eq!(s.p_a.homogeneous_degree(), Some(3));
        let s = schur_decompose(&[0, 1, 2, 6]).unwrap();
        assert_eq!(s.p_a.len(), 20);
        assert!(s.p_a.terms().all(|(_, c)| c.is_one()));
        assert_eq!(s.prefix_power, 0);
    }

    #[test]
    fn p_a_with_weight_three_orbit() {
        let s = schur_decompose(&[0, 2, 3, 5, 6]).unwrap();
        let mut ones = 0;
        let mut threes = 0;
        for (m, c) in s.p_a.terms() {
            let mut e = m.exps().to_vec();
            e.sort_unstable();
            if e == [0, 1, 1, 2, 2] {
                assert!(c.is_one());
                ones += 1;
            } else if e == [1, 1, 1, 1, 2] {
                assert_eq!(*c, BigInt::from(3));
                threes += 1;
            } else {
                panic!("unexpected monomial {m:?}");
            }
        }
        assert_eq!((ones, threes), (30, 5));
        assert!(is_symmetric(&s.p_a));
        assert!(s.has_positive_integer_coefficients());
    }

    #[test]
    fn contiguous_lists_are_plain_vandermonde() {
        let s = schur_decompose(&[3, 4, 5, 6]).unwrap();
        assert!(s.p_a.is_constant());
        assert!(s.p_a.coeff(&Monomial::one(4)).is_one());
        assert_eq!(s.expected_degree(), 0);
    }

    #[test]
    fn rejects_bad_lists() {
        assert!(schur_decompose(&[]).is_err());
        assert!(schur_decompose(&[2, 2]).is_err());
        assert!(schur_decompose(&[3, 1]).is_err());
    }

    #[test]
    fn even_jacobian_identity_printed() {
        let lhs = affine_jacobian_det(&[0, 1, 2, 6]).unwrap();
        let printed = ip("2 * (y - x)^4 * (x + y) * (2x^2 + x y + 2y^2)", 2);
        assert_eq!(lhs, printed);
        let q = build_q(&schur_decompose(&[0, 1, 2, 6]).unwrap()).unwrap();
        assert_eq!(q.parity, Parity::Even);
        assert_eq!(*q.primary(), ip("2 * (x + y) * (2x^2 + x y + 2y^2)", 2));
        assert!(verify_jacobian_identity(&[0, 1, 2, 6], 8)
            .unwrap()
            .verdict
            .is_equal());
    }

    #[test]
    fn odd_jacobian_identity_printed() {
        let lhs = affine_jacobian_det(&[0, 2, 3, 5, 6]).unwrap();
        let f = ip(
            "x y (x^3 y + 4x^2 y^2 + x y^3 + 2x^3 z + 10x^2 y z + 10 x y^2 z \
             + 2y^3 z + 4x^2 z^2 + 7 x y z^2 + 4y^2 z^2)",
            3,
        );
        let printed = &ip("(x - y)^4 (x - z)^2 (y - z)^2", 3) * &f;
        assert_eq!(lhs, printed);
        let q = build_q(&schur_decompose(&[0, 2, 3, 5, 6]).unwrap()).unwrap();
        assert_eq!(*q.primary(), f);
        assert!(relabeling_holds(&q));
    }

    #[test]
    fn identities_for_all_small_lists() {
        for m in 1..=6u32 {
            for top in (m - 1)..=10 {
                for_each_list(m as usize, top, &mut |d| {
                    let c = verify_jacobian_identity(d, 8).unwrap();
                    assert!(c.verdict.is_equal(), "{d:?}");
                });
            }
        }
    }

    fn for_each_list(m: usize, top: u32, f: &mut impl FnMut(&[u32])) {
        fn rec(start: u32, top: u32, left: usize, cur: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
            if left == 0 {
                if cur.last() == Some(&top) {
                    f(cur);
                }
                return;
            }
            for d in start..=top {
                cur.push(d);
                rec(d + 1, top, left - 1, cur, f);
                cur.pop();
            }
        }
        rec(0, top, m, &mut Vec::new(), f);
    }

    #[test]
    fn homogeneous_identities() {
        for d in [
            &[0u32, 1, 2, 6][..],
            &[0, 2, 3, 5, 6],
            &[1, 2, 6],
            &[0, 1, 3, 4, 7, 9],
            &[1, 3, 4, 8, 9],
        ] {
            let c = verify_homogeneous_identity(d, 8).unwrap();
            assert!(c.verdict.is_equal(), "{d:?}");
            let q = build_q(&schur_decompose(d).unwrap()).unwrap();
            assert!(q.homogeneous.terms().all(|(_, c)| c.is_positive()));
        }
    }

    #[test]
    fn odd_y_exponent_printed_form_only_fits_three() {
        // (y_1⋯y_{k−1})^{2d_m − 2d_1 − 3m + 6}
        let printed = |d: &[u32]| {
            let m = d.len() as i64;
            2 * i64::from(*d.last().unwrap()) - 2 * i64::from(d[0]) - 3 * m + 6
        };
        assert_eq!(printed(&[1, 2, 6]), homogenizing_exponents(&[1, 2, 6]).0);
        let d = [0u32, 2, 3, 5, 6];
        let (pair, single) = homogenizing_exponents(&d);
        assert_eq!(pair - printed(&d), 2);
        let q = build_q(&schur_decompose(&d).unwrap()).unwrap();
        assert_eq!(q.primary().degree_in(0), 4);
        assert!(homogenize(q.primary(), &[printed(&d), printed(&d), single]).is_err());
        assert!(homogenize(q.primary(), &[pair, pair, single]).is_ok());
    }

    #[test]
    fn homogeneous_examples_printed() {
        let lhs = homogeneous_jacobian_det(&[(1, 7), (4, 4), (7, 1)]).unwrap();
        let printed = ip(
            "3 x1^4 x2^5 x3 x4 (x1 x4 - x3 x2)^2 (x1^2 x4^2 + x1 x3 x2 x4 + x3^2 x2^2)^2",
            4,
        );
        assert_eq!(lhs, printed);
        let lhs = homogeneous_jacobian_det(&[(1, 5), (2, 4), (6, 0)]).unwrap();
        let printed = ip(
            "x1^2 x3 x2^4 (x1 x4 - x3 x2)^2 \
             (4 x1^3 x4^3 + 3 x1^2 x3 x2 x4^2 + 2 x1 x3^2 x2^2 x4 + x3^3 x2^3)",
            4,
        );
        assert_eq!(lhs, printed);
    }

    #[test]
    fn homogeneous_three_point_factorization() {
        // det(s_B(x_i, y_i)) for B = {x y^5, x^2 y^4, x^6}
        let n = 6;
        let cols: Vec<Vec<IntPoly>> = (0..3)
            .map(|t| {
                [(1u32, 5u32), (2, 4), (6, 0)]
                    .iter()
                    .map(|&(a, b)| {
                        let mut e = vec![0; n];
                        e[2 * t] = a;
                        e[2 * t + 1] = b;
                        Poly::monomial(&e)
                    })
                    .collect()
            })
            .collect();
        let lhs = det(&Matrix::from_columns(&cols).unwrap()).unwrap();
        let p_b = ip(
            "x1^3 x4^3 x6^3 + x1^2 x2 x3 x4^2 x6^3 + x1^2 x2 x4^3 x5 x6^2 + x1 x2^2 x3^2 x4 x6^3 \
             + x1 x2^2 x3 x4^2 x5 x6^2 + x1 x2^2 x4^3 x5^2 x6 + x2^3 x3^3 x6^3 + x2^3 x3^2 x4 x5 x6^2 \
             + x2^3 x3 x4^2 x5^2 x6 + x2^3 x4^3 x5^3",
            n,
        );
        let mut rhs = ip("x1 x3 x5", n) * p_b;
        for (j, i) in [(1, 0), (2, 0), (2, 1)] {
            rhs = &rhs * &cross(n, j, i);
        }
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn jacobi_trudi_matches_symbolic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in [
            &[1u32, 4, 7][..],
            &[0, 2, 3, 5, 6],
            &[0, 1, 2, 6],
            &[2, 3, 7, 8, 11],
        ] {
            let s = schur_decompose(d).unwrap();
            for _ in 0..5 {
                let x: Vec<Rational> = (0..d.len())
                    .map(|_| {
                        Rational::new(
                            BigInt::from(rng.random_range(-9i64..9)),
                            BigInt::from(rng.random_range(1i64..5)),
                        )
                    })
                    .collect();
                let sym = to_rational(&s.p_a).eval(&x).unwrap();
                assert_eq!(schur_eval(d, &x).unwrap(), sym, "{d:?}");
            }
        }
    }

    #[test]
    fn spot_check_beyond_cap() {
        let d = [0u32, 1, 3, 4, 6, 7, 9, 10, 12];
        assert!(matches!(
            verify_jacobian_identity(&d, DEFAULT_SYMBOLIC_CAP),
            Err(Error::FeasibilityCap { m: 9, cap: 8 })
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let r = spot_check_jacobian_identity(&d, 20, &mut rng).unwrap();
        assert!(r.failure.is_none());
        let r =
            spot_check_jacobian_identity(&[0, 2, 3, 5, 6, 8, 9, 10, 13, 14], 20, &mut rng).unwrap();
        assert!(r.failure.is_none());
    }

    #[test]
    fn odd_relabeling() {
        for d in [&[1u32, 2, 6][..], &[0, 1, 3, 4, 7], &[0, 2, 5, 6, 7, 9, 12]] {
            let q = build_q(&schur_decompose(d).unwrap()).unwrap();
            assert_eq!(q.parity, Parity::Odd);
            assert!(relabeling_holds(&q), "{d:?}");
        }
        let q = build_q(&schur_decompose(&[0, 1, 3, 4, 7, 8]).unwrap()).unwrap();
        assert!(is_symmetric(q.primary()));
    }
}
