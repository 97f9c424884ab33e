//! Lower bounds for Carathéodory numbers from nonnegative polynomials with
//! finitely many zeros whose moment vectors are linearly independent.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_traits::Zero;

use crate::basis::{coefficient_matrix, Basis};
use crate::error::{Error, Result};
use crate::geometry::float_rank;
use crate::matrix::{rank, Matrix};
use crate::measure::projective_normalize;
use crate::poly::Poly;
use crate::scalar::{int, rational, QuadExt, Rational, Scalar};

/// Relative singular-value threshold of the floating-point rank cross-check.
pub const FLOAT_RANK_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct Builtin {
    pub name: &'static str,
    pub polynomial: Poly<Rational>,
    pub zeros: Vec<Vec<QuadExt>>,
}

pub const BUILTIN_NAMES: [&str; 3] = ["motzkin", "robinson", "harris"];

pub fn builtin(name: &str) -> Result<Builtin> {
    match name {
        "motzkin" => Ok(motzkin()),
        "robinson" => Ok(robinson()),
        "harris" => Ok(harris()),
        _ => Err(Error::UnknownPolynomial(name.into())),
    }
}

fn q(v: i64) -> QuadExt {
    QuadExt::from(int(v))
}

fn points(raw: &[[i64; 3]]) -> Vec<Vec<QuadExt>> {
    raw.iter()
        .map(|p| p.iter().map(|&v| q(v)).collect())
        .collect()
}

pub fn motzkin() -> Builtin {
    Builtin {
        name: "motzkin",
        polynomial: Poly::parse("z^6 + x^4 y^2 + x^2 y^4 - 3 x^2 y^2 z^2", Some(3))
            .expect("valid literal"),
        zeros: points(&[
            [1, 1, 1],
            [1, 1, -1],
            [1, -1, 1],
            [1, -1, -1],
            [1, 0, 0],
            [0, 1, 0],
        ]),
    }
}

/// `{M, x⁶, y⁶, z⁶, x⁵y, x⁵z, x⁴yz}`.
pub fn motzkin_basis() -> Basis {
    let elems = [
        "z^6 + x^4 y^2 + x^2 y^4 - 3 x^2 y^2 z^2",
        "x^6",
        "y^6",
        "z^6",
        "x^5 y",
        "x^5 z",
        "x^4 y z",
    ]
    .iter()
    .map(|s| Poly::parse(s, Some(3)).expect("valid literal"))
    .collect();
    Basis::custom(3, elems).expect("independent elements")
}

pub fn robinson() -> Builtin {
    Builtin {
        name: "robinson",
        polynomial: Poly::parse(
            "x^6 + y^6 + z^6 - x^4 y^2 - x^2 y^4 - x^4 z^2 - x^2 z^4 - y^4 z^2 - y^2 z^4 \
             + 3 x^2 y^2 z^2",
            Some(3),
        )
        .expect("valid literal"),
        zeros: points(&[
            [1, 1, 1],
            [1, 1, -1],
            [1, -1, 1],
            [1, -1, -1],
            [1, 1, 0],
            [1, -1, 0],
            [1, 0, 1],
            [1, 0, -1],
            [0, 1, 1],
            [0, 1, -1],
        ]),
    }
}

pub fn harris() -> Builtin {
    let polynomial = Poly::parse(
        "16 (x^10 + y^10 + z^10) \
         - 36 (x^8 y^2 + x^2 y^8 + x^8 z^2 + x^2 z^8 + y^8 z^2 + y^2 z^8) \
         + 20 (x^6 y^4 + x^4 y^6 + x^6 z^4 + x^4 z^6 + y^6 z^4 + y^4 z^6) \
         + 57 (x^6 y^2 z^2 + x^2 y^6 z^2 + x^2 y^2 z^6) \
         - 38 (x^4 y^4 z^2 + x^4 y^2 z^4 + x^2 y^4 z^4)",
        Some(3),
    )
    .expect("valid literal");
    let one = q(1);
    let mut zeros = Vec::new();
    for third in [q(0), QuadExt::sqrt2(), QuadExt::from(rational(1, 2))] {
        zeros.extend(orbit(&[one.clone(), one.clone(), third]));
    }
    Builtin {
        name: "harris",
        polynomial,
        zeros,
    }
}

/// All coordinate permutations with all sign changes, projectively
/// deduplicated, in first-occurrence order.
pub fn orbit(p: &[QuadExt]) -> Vec<Vec<QuadExt>> {
    let n = p.len();
    let mut out: Vec<Vec<QuadExt>> = Vec::new();
    for perm in permutations(n) {
        for signs in 0u32..(1 << n) {
            let v: Vec<QuadExt> = perm
                .iter()
                .enumerate()
                .map(|(slot, &src)| {
                    let c = p[src].clone();
                    if signs & (1 << slot) != 0 {
                        -c
                    } else {
                        c
                    }
                })
                .collect();
            if let Some(v) = projective_normalize(&v) {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return alloc::vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..n {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroCertificate {
    pub polynomial: Poly<Rational>,
    pub basis: Basis,
    pub zeros: Vec<Vec<QuadExt>>,
    /// Columns are the moment vectors `s_basis(z)`.
    pub matrix: Matrix<QuadExt>,
    pub matrix_rank: usize,
    pub float_rank: usize,
    /// The polynomial lies in the span of the basis.
    pub in_span: bool,
    pub independent: bool,
    /// `|zeros|` when the moment vectors are independent and the polynomial
    /// lies in the span; no bound otherwise.
    pub implied_lower_bound: Option<usize>,
}

fn embed(c: &Rational) -> QuadExt {
    QuadExt::from(c.clone())
}

/// Exact checks and rank computation for a claimed zero list.
pub fn certify(
    polynomial: &Poly<Rational>,
    zeros: &[Vec<QuadExt>],
    basis: &Basis,
) -> Result<ZeroCertificate> {
    let n = basis.nvars();
    if polynomial.nvars() > n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: polynomial.nvars(),
        });
    }
    let polynomial = polynomial.with_nvars(n);
    let projective = basis.common_degree().is_some();
    for (index, z) in zeros.iter().enumerate() {
        basis.check_point(z)?;
        if projective && z.iter().all(Zero::is_zero) {
            return Err(Error::InvalidArgument(format!(
                "zero {index} is the origin"
            )));
        }
        if !polynomial.eval_with(z, embed)?.is_zero() {
            return Err(Error::NotAZero { index });
        }
    }
    let normalized: Vec<Vec<QuadExt>> = if projective {
        zeros
            .iter()
            .filter_map(|z| projective_normalize(z))
            .collect()
    } else {
        zeros.to_vec()
    };
    {
        for i in 0..normalized.len() {
            for j in 0..i {
                if normalized[i] == normalized[j] {
                    return Err(Error::InvalidArgument(format!(
                        "zeros {j} and {i} are the same point"
                    )));
                }
            }
        }
    }
    let cols = zeros
        .iter()
        .map(|z| basis.eval::<QuadExt>(z))
        .collect::<Result<Vec<_>>>()?;
    let matrix = if cols.is_empty() {
        Matrix::from_fn(basis.len(), 0, |_, _| QuadExt::zero())
    } else {
        Matrix::from_columns(&cols)?
    };
    let matrix_rank = rank(&matrix);
    let float = DMatrix::from_fn(matrix.nrows(), matrix.ncols(), |i, j| {
        matrix[(i, j)].to_f64()
    });
    let float_rank = float_rank(&float, FLOAT_RANK_TOLERANCE);
    let in_span = in_span(basis, &polynomial);
    let independent = matrix_rank == zeros.len();
    Ok(ZeroCertificate {
        polynomial,
        basis: basis.clone(),
        zeros: zeros.to_vec(),
        matrix,
        matrix_rank,
        float_rank,
        in_span,
        independent,
        implied_lower_bound: (independent && in_span).then_some(zeros.len()),
    })
}

fn in_span(basis: &Basis, p: &Poly<Rational>) -> bool {
    let mut elems: Vec<Poly<Rational>> = basis.elements().to_vec();
    let before = rank(&coefficient_matrix(&elems));
    elems.push(p.clone());
    rank(&coefficient_matrix(&elems)) == before
}

pub fn certify_builtin(name: &str, basis: &Basis) -> Result<ZeroCertificate> {
    let b = builtin(name)?;
    certify(&b.polynomial, &b.zeros, basis)
}

pub fn describe(cert: &ZeroCertificate) -> String {
    match cert.implied_lower_bound {
        Some(k) => format!(
            "rank {} of {} zeros: lower bound {k}",
            cert.matrix_rank,
            cert.zeros.len()
        ),
        None => format!(
            "rank {} of {} zeros: no bound",
            cert.matrix_rank,
            cert.zeros.len()
        ),
    }
}
