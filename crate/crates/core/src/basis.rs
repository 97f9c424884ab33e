//! Ordered polynomial bases `A = {f_1, …, f_m}`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::{rank, Matrix};
use crate::poly::{Monomial, Poly};
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisKind {
    /// All monomials of degree at most `d` in `n` variables.
    FullDegree(u32),
    /// All monomials of degree exactly `d` in `n` variables.
    Homogeneous(u32),
    /// `x^{d_1}, …, x^{d_m}` in one variable.
    Gapped1D(Vec<u32>),
    Custom,
}

#[derive(Clone, Debug)]
pub struct Basis {
    nvars: usize,
    kind: BasisKind,
    elements: Vec<Poly<Rational>>,
    partials: Vec<Vec<Poly<Rational>>>,
    compiled: Compiled,
}

impl PartialEq for Basis {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.elements == other.elements
    }
}

/// Exponent vectors of total degree `d` in `n` variables, `x_1` powers first.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=d).rev() {
            prefix.push(a);
            rec(n - 1, d - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

impl Basis {
    /// `A_{n,d}`, ordered by degree, then `x_1`-heavy first.
    pub fn full_degree(n: usize, d: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidBasis("need at least one variable".into()));
        }
        let elements = (0..=d)
            .flat_map(|t| monomials_of_degree(n, t))
            .map(|e| Poly::monomial(&e))
            .collect();
        Ok(Self::build(n, BasisKind::FullDegree(d), elements))
    }

    /// `B_{n,d}`, `x_1`-heavy first.
    pub fn homogeneous(n: usize, d: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidBasis("need at least one variable".into()));
        }
        let elements = monomials_of_degree(n, d)
            .into_iter()
            .map(|e| Poly::monomial(&e))
            .collect();
        Ok(Self::build(n, BasisKind::Homogeneous(d), elements))
    }

    pub fn gapped_1d(exponents: &[u32]) -> Result<Self> {
        check_increasing(exponents)?;
        let elements = exponents.iter().map(|&d| Poly::monomial(&[d])).collect();
        Ok(Self::build(
            1,
            BasisKind::Gapped1D(exponents.to_vec()),
            elements,
        ))
    }

    /// The homogenized list `{x^{d_i} y^{d_m - d_i}}` in two variables.
    pub fn gapped_homogeneous(exponents: &[u32]) -> Result<Self> {
        check_increasing(exponents)?;
        let top = *exponents.last().unwrap();
        let elements = exponents
            .iter()
            .map(|&d| Poly::monomial(&[d, top - d]))
            .collect();
        Ok(Self::build(2, BasisKind::Custom, elements))
    }

    /// Arbitrary elements; linear independence is checked exactly.
    pub fn custom(nvars: usize, elements: Vec<Poly<Rational>>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidBasis("empty basis".into()));
        }
        let elements: Vec<_> = elements
            .into_iter()
            .map(|p| {
                if p.nvars() == nvars || p.nvars() == 0 {
                    Ok(p.with_nvars(nvars))
                } else {
                    Err(Error::DimensionMismatch {
                        expected: nvars,
                        found: p.nvars(),
                    })
                }
            })
            .collect::<Result<_>>()?;
        let r = rank(&coefficient_matrix(&elements));
        if r != elements.len() {
            return Err(Error::InvalidBasis(format!(
                "elements are linearly dependent (rank {r} of {})",
                elements.len()
            )));
        }
        Ok(Self::build(nvars, BasisKind::Custom, elements))
    }

    fn build(nvars: usize, kind: BasisKind, elements: Vec<Poly<Rational>>) -> Self {
        let partials = elements
            .iter()
            .map(|f| {
                (0..nvars)
                    .map(|i| f.diff(i).expect("index in range"))
                    .collect()
            })
            .collect();
        let compiled = Compiled::new(nvars, &elements);
        Self {
            nvars,
            kind,
            elements,
            partials,
            compiled,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn kind(&self) -> &BasisKind {
        &self.kind
    }

    pub fn elements(&self) -> &[Poly<Rational>] {
        &self.elements
    }

    /// `∂_i f_j` for element `j`.
    pub fn partial(&self, j: usize, i: usize) -> &Poly<Rational> {
        &self.partials[j][i]
    }

    /// `Some(d)` when every element is homogeneous of the same degree `d`.
    pub fn common_degree(&self) -> Option<u32> {
        let mut it = self.elements.iter().map(Poly::homogeneous_degree);
        let d = it.next()??;
        it.all(|e| e == Some(d)).then_some(d)
    }

    /// Exponent vectors when every element is a bare monomial.
    pub fn monomial_exponents(&self) -> Option<Vec<Monomial>> {
        self.elements
            .iter()
            .map(|p| {
                let mut t = p.terms();
                match (t.next(), t.next()) {
                    (Some((m, c)), None) if *c == Rational::from_integer(1.into()) => {
                        Some(m.clone())
                    }
                    _ => None,
                }
            })
            .collect()
    }

    pub fn max_degree(&self) -> u32 {
        self.elements
            .iter()
            .filter_map(Poly::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn check_point<T>(&self, x: &[T]) -> Result<()> {
        if x.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: x.len(),
            });
        }
        Ok(())
    }

    /// `s_A(x) = (f_1(x), …, f_m(x))` exactly in `T`.
    pub fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_point(x)?;
        self.elements
            .iter()
            .map(|f| f.eval_with(x, T::from_rational))
            .collect()
    }

    /// `∂_i s_A(x)`.
    pub fn eval_partial<T: Scalar>(&self, x: &[T], i: usize) -> Result<Vec<T>> {
        self.check_point(x)?;
        self.partials
            .iter()
            .map(|ps| ps[i].eval_with(x, T::from_rational))
            .collect()
    }

    pub fn eval_f64(&self, x: &[f64], out: &mut [f64]) {
        self.compiled.eval(x, out, None);
    }

    /// Values into `out` and gradients into `grad` (row `j` holds `∇f_j`).
    pub fn eval_grad_f64(&self, x: &[f64], out: &mut [f64], grad: &mut [f64]) {
        self.compiled.eval(x, out, Some(grad));
    }
}

fn check_increasing(exponents: &[u32]) -> Result<()> {
    if exponents.is_empty() {
        return Err(Error::InvalidBasis("empty exponent list".into()));
    }
    if exponents.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidBasis(format!(
            "exponents must be strictly increasing: {exponents:?}"
        )));
    }
    Ok(())
}

/// Rows are elements, columns the union of their monomials.
pub fn coefficient_matrix(elements: &[Poly<Rational>]) -> Matrix<Rational> {
    let mut monos: Vec<Monomial> = elements
        .iter()
        .flat_map(|p| p.terms().map(|(m, _)| m.clone()))
        .collect();
    monos.sort();
    monos.dedup();
    Matrix::from_fn(elements.len(), monos.len(), |i, j| {
        elements[i].coeff(&monos[j])
    })
}

#[derive(Clone, Debug)]
struct Compiled {
    nvars: usize,
    max_exp: Vec<usize>,
    // (element index, coefficient, exponents)
    terms: Vec<(usize, f64, Vec<u32>)>,
}

impl Compiled {
    fn new(nvars: usize, elements: &[Poly<Rational>]) -> Self {
        let mut terms = Vec::new();
        let mut max_exp = vec![0usize; nvars];
        for (j, f) in elements.iter().enumerate() {
            for (m, c) in f.terms() {
                if c.is_zero() {
                    continue;
                }
                for (i, &e) in m.exps().iter().enumerate() {
                    max_exp[i] = max_exp[i].max(e as usize);
                }
                terms.push((j, c.to_f64(), m.exps().to_vec()));
            }
        }
        Self {
            nvars,
            max_exp,
            terms,
        }
    }

    fn eval(&self, x: &[f64], out: &mut [f64], mut grad: Option<&mut [f64]>) {
        let n = self.nvars;
        debug_assert_eq!(x.len(), n);
        out.iter_mut().for_each(|v| *v = 0.0);
        if let Some(g) = grad.as_deref_mut() {
            g.iter_mut().for_each(|v| *v = 0.0);
        }
        let stride = self.max_exp.iter().copied().max().unwrap_or(0) + 1;
        let mut pw = vec![1.0f64; n * stride];
        for i in 0..n {
            for e in 1..=self.max_exp[i] {
                pw[i * stride + e] = pw[i * stride + e - 1] * x[i];
            }
        }
        for (j, c, exps) in &self.terms {
            let mut v = *c;
            for (i, &e) in exps.iter().enumerate() {
                v *= pw[i * stride + e as usize];
            }
            out[*j] += v;
            if let Some(g) = grad.as_deref_mut() {
                for i in 0..n {
                    let ei = exps[i] as usize;
                    if ei == 0 {
                        continue;
                    }
                    let mut d = *c * ei as f64 * pw[i * stride + ei - 1];
                    for (l, &e) in exps.iter().enumerate() {
                        if l != i {
                            d *= pw[l * stride + e as usize];
                        }
                    }
                    g[*j * n + i] += d;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn full_degree_order() {
        let b = Basis::full_degree(2, 2).unwrap();
        let exps: Vec<_> = b
            .monomial_exponents()
            .unwrap()
            .iter()
            .map(|m| m.exps().to_vec())
            .collect();
        assert_eq!(
            exps,
            vec![
                vec![0, 0],
                vec![1, 0],
                vec![0, 1],
                vec![2, 0],
                vec![1, 1],
                vec![0, 2]
            ]
        );
    }

    #[test]
    fn sizes() {
        assert_eq!(Basis::full_degree(2, 4).unwrap().len(), 15);
        assert_eq!(Basis::homogeneous(3, 10).unwrap().len(), 66);
        assert_eq!(Basis::homogeneous(3, 10).unwrap().common_degree(), Some(10));
        assert_eq!(Basis::full_degree(1, 3).unwrap().common_degree(), None);
    }

    #[test]
    fn gapped_requires_increasing() {
        assert!(Basis::gapped_1d(&[0, 2, 2]).is_err());
        assert!(Basis::gapped_1d(&[]).is_err());
        assert_eq!(Basis::gapped_1d(&[0, 2, 3, 5, 6]).unwrap().len(), 5);
    }

    #[test]
    fn custom_rejects_dependent() {
        let p = |s: &str| Poly::parse(s, Some(2)).unwrap();
        let ok = Basis::custom(2, vec![p("x1 + x2"), p("x1 - x2")]);
        assert!(ok.is_ok());
        let bad = Basis::custom(2, vec![p("x1 + x2"), p("2 x1 + 2 x2")]);
        assert!(matches!(bad, Err(Error::InvalidBasis(_))));
    }

    #[test]
    fn compiled_matches_exact() {
        let b = Basis::full_degree(2, 3).unwrap();
        let x = [int(2), int(-3)];
        let exact = b.eval(&x).unwrap();
        let mut v = vec![0.0; b.len()];
        let mut g = vec![0.0; b.len() * 2];
        b.eval_grad_f64(&[2.0, -3.0], &mut v, &mut g);
        for j in 0..b.len() {
            assert_eq!(v[j], exact[j].to_f64());
            for i in 0..2 {
                let d = b.eval_partial(&x, i).unwrap();
                assert_eq!(g[j * 2 + i], d[j].to_f64());
            }
        }
    }
}
