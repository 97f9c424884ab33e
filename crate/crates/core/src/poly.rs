//! Sparse multivariate polynomials with exact coefficients.
//!
//! Terms are kept in a `BTreeMap` under graded lexicographic order, so the
//! last entry is always the leading term and iteration is deterministic.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Rational, Ring};

/// Exponent vector `α` of `x^α`, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Self(exps)
    }

    pub fn one(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Self)
    }

    pub fn eval<R: Ring>(&self, x: &[R]) -> R {
        let mut acc = R::one();
        for (xi, &e) in x.iter().zip(&self.0) {
            for _ in 0..e {
                acc = acc * xi;
            }
        }
        acc
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in `nvars` variables. No stored coefficient is zero.
///
/// A polynomial with `nvars == 0` is a free constant; arithmetic lifts it to
/// the variable count of the other operand.
#[derive(Clone, Debug)]
pub struct Poly<R> {
    nvars: usize,
    terms: BTreeMap<Monomial, R>,
}

impl<R: Ring> Poly<R> {
    pub fn zero_in(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: R) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Monomial::var(nvars, i), R::one())
    }

    pub fn term(m: Monomial, c: R) -> Self {
        let mut p = Self::zero_in(m.nvars());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn monomial(exps: &[u32]) -> Self {
        Self::term(Monomial::new(exps.to_vec()), R::one())
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, R)>,
    ) -> Result<Self> {
        let mut p = Self::zero_in(nvars);
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: m.nvars(),
                });
            }
            p.add_term(m, &c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &R)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> R {
        self.terms.get(m).cloned().unwrap_or_else(R::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &R)> {
        self.terms.last_key_value()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// `Some(d)` if every term has total degree `d`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// Reinterprets a free constant (`nvars == 0`) in `n` variables.
    pub fn with_nvars(&self, n: usize) -> Self {
        if self.nvars == n {
            return self.clone();
        }
        assert!(
            self.nvars == 0,
            "cannot change variable count of a non-constant"
        );
        let mut p = Self::zero_in(n);
        if let Some(c) = self.terms.values().next() {
            p.terms.insert(Monomial::one(n), c.clone());
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: &R) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn sub_term(&mut self, m: Monomial, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(-c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() -= &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn unify(&self, other: &Self) -> Result<usize> {
        match (self.nvars, other.nvars) {
            (a, b) if a == b => Ok(a),
            (0, b) if self.is_constant() => Ok(b),
            (a, 0) if other.is_constant() => Ok(a),
            (a, b) => Err(Error::DimensionMismatch {
                expected: a,
                found: b,
            }),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let n = self.unify(other)?;
        let mut out = self.with_nvars(n);
        for (m, c) in other.with_nvars(n).terms {
            out.add_term(m, &c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        let n = self.unify(other)?;
        let mut out = self.with_nvars(n);
        for (m, c) in other.with_nvars(n).terms {
            out.sub_term(m, c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let n = self.unify(other)?;
        let (a, b) = (self.with_nvars(n), other.with_nvars(n));
        let mut out = Self::zero_in(n);
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                out.add_term(ma.mul(mb), &(ca.clone() * cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &R) -> Self {
        if c.is_zero() {
            return Self::zero_in(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.clone() * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (t.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.nvars, R::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient `q` with `self = d·q`, by leading-term reduction.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        let n = self.unify(d)?;
        let (p, d) = (self.with_nvars(n), d.with_nvars(n));
        let (dm, dc) = d.leading_term().ok_or(Error::NotDivisible)?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = p;
        let mut q = Self::zero_in(n);
        while let Some((m, c)) = rem.terms.last_key_value() {
            let qm = m.div(&dm).ok_or(Error::NotDivisible)?;
            let qc = c.div_exact(&dc).ok_or(Error::NotDivisible)?;
            for (tm, tc) in &d.terms {
                rem.sub_term(tm.mul(&qm), qc.clone() * tc);
            }
            q.terms.insert(qm, qc);
        }
        Ok(q)
    }

    pub fn diff(&self, i: usize) -> Result<Self> {
        if i >= self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: i + 1,
            });
        }
        let mut out = Self::zero_in(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[i] -= 1;
            out.add_term(dm, &(c.clone() * &R::from_i64(e as i64)));
        }
        Ok(out)
    }

    pub fn eval(&self, x: &[R]) -> Result<R> {
        self.eval_with(x, |c| c.clone())
    }

    /// Evaluates in a ring `T` that the coefficients embed into via `embed`.
    pub fn eval_with<T: Ring>(&self, x: &[T], embed: impl Fn(&R) -> T) -> Result<T> {
        if self.nvars != 0 && x.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: x.len(),
            });
        }
        let maxdeg: Vec<u32> = (0..self.nvars).map(|i| self.degree_in(i)).collect();
        let powers: Vec<Vec<T>> = x
            .iter()
            .zip(&maxdeg)
            .map(|(xi, &d)| {
                let mut v = Vec::with_capacity(d as usize + 1);
                v.push(T::one());
                for k in 0..d as usize {
                    let next = v[k].clone() * xi;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = T::zero();
        for (m, c) in &self.terms {
            let mut t = embed(c);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t * &powers[i][e as usize];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        let mut out = Poly::zero_in(self.nvars);
        for (m, c) in &self.terms {
            let v = f(c);
            if !v.is_zero() {
                out.terms.insert(m.clone(), v);
            }
        }
        out
    }

    /// Renames variable `i` to `map[i]` in a ring of `new_nvars` variables;
    /// several variables may be sent to the same target.
    pub fn substitute_vars(&self, map: &[usize], new_nvars: usize) -> Result<Self> {
        if map.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: map.len(),
            });
        }
        if let Some(&bad) = map.iter().find(|&&j| j >= new_nvars) {
            return Err(Error::DimensionMismatch {
                expected: new_nvars,
                found: bad + 1,
            });
        }
        let mut out = Self::zero_in(new_nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; new_nvars];
            for (i, &a) in m.0.iter().enumerate() {
                e[map[i]] += a;
            }
            out.add_term(Monomial(e), c);
        }
        Ok(out)
    }

    /// Substitutes polynomials for every variable.
    pub fn compose(&self, images: &[Poly<R>]) -> Result<Self> {
        if images.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: images.len(),
            });
        }
        let target = images.first().map_or(0, Poly::nvars);
        let mut out = Self::zero_in(target);
        for (m, c) in &self.terms {
            let mut t = Self::constant(target, c.clone());
            for (img, &e) in images.iter().zip(&m.0) {
                if e > 0 {
                    t = t.checked_mul(&img.pow(e))?;
                }
            }
            out = out.checked_add(&t)?;
        }
        Ok(out)
    }
}

impl<R: Ring> PartialEq for Poly<R> {
    fn eq(&self, other: &Self) -> bool {
        if self.nvars == other.nvars {
            return self.terms == other.terms;
        }
        match self.unify(other) {
            Ok(n) => self.with_nvars(n).terms == other.with_nvars(n).terms,
            Err(_) => false,
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a, R: Ring> $tr<&'a Poly<R>> for &'a Poly<R> {
            type Output = Poly<R>;
            fn $method(self, rhs: &'a Poly<R>) -> Poly<R> {
                self.$checked(rhs)
                    .expect("polynomial variable-count mismatch")
            }
        }
        impl<'a, R: Ring> $tr<&'a Poly<R>> for Poly<R> {
            type Output = Poly<R>;
            fn $method(self, rhs: &'a Poly<R>) -> Poly<R> {
                (&self).$method(rhs)
            }
        }
        impl<R: Ring> $tr for Poly<R> {
            type Output = Poly<R>;
            fn $method(self, rhs: Poly<R>) -> Poly<R> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl<R: Ring> Neg for Poly<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl<R: Ring> AddAssign for Poly<R> {
    fn add_assign(&mut self, rhs: Self) {
        *self += &rhs;
    }
}

impl<'a, R: Ring> AddAssign<&'a Poly<R>> for Poly<R> {
    fn add_assign(&mut self, rhs: &'a Poly<R>) {
        if self.nvars == rhs.nvars {
            for (m, c) in &rhs.terms {
                self.add_term(m.clone(), c);
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl<R: Ring> SubAssign for Poly<R> {
    fn sub_assign(&mut self, rhs: Self) {
        *self -= &rhs;
    }
}

impl<'a, R: Ring> SubAssign<&'a Poly<R>> for Poly<R> {
    fn sub_assign(&mut self, rhs: &'a Poly<R>) {
        if self.nvars == rhs.nvars {
            for (m, c) in &rhs.terms {
                self.sub_term(m.clone(), c.clone());
            }
        } else {
            *self = &*self - rhs;
        }
    }
}

impl<R: Ring> MulAssign for Poly<R> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = &*self * &rhs;
    }
}

impl<R: Ring> Zero for Poly<R> {
    fn zero() -> Self {
        Self::zero_in(0)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<R: Ring> One for Poly<R> {
    fn one() -> Self {
        Self::constant(0, R::one())
    }
}

impl<R: Ring> Ring for Poly<R> {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        Poly::div_exact(self, rhs).ok()
    }

    fn from_i64(v: i64) -> Self {
        Self::constant(0, R::from_i64(v))
    }
}

/// Coefficient types with a sign-aware textual form.
pub trait TextCoeff: Ring {
    fn is_negative(&self) -> bool;
    fn abs_text(&self) -> String;
}

impl TextCoeff for Rational {
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn abs_text(&self) -> String {
        self.abs().to_string()
    }
}

impl TextCoeff for BigInt {
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn abs_text(&self) -> String {
        self.abs().to_string()
    }
}

impl<R: TextCoeff> fmt::Display for Poly<R> {
    /// Leading term first, e.g. `3/2 * x1^2 x2 - x3 + 5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs_text();
            let vars: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(j, &e)| {
                        if e == 1 {
                            format!("x{}", j + 1)
                        } else {
                            format!("x{}^{}", j + 1, e)
                        }
                    })
                    .collect();
            match (vars.is_empty(), mag == "1") {
                (true, _) => f.write_str(&mag)?,
                (false, true) => f.write_str(&vars.join(" "))?,
                (false, false) => write!(f, "{} * {}", mag, vars.join(" "))?,
            }
        }
        Ok(())
    }
}

impl Poly<Rational> {
    /// Parses the text format; the variable count is the largest index seen
    /// unless `nvars` is given. `x`, `y`, `z` alias `x1`, `x2`, `x3`.
    pub fn parse(s: &str, nvars: Option<usize>) -> Result<Self> {
        let toks = tokenize(s)?;
        if toks.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let seen = toks
            .iter()
            .filter_map(|t| match t {
                Tok::Var(i) => Some(i + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        let n = match nvars {
            Some(n) if n < seen => {
                return Err(Error::Parse(format!(
                    "variable x{seen} exceeds declared count {n}"
                )))
            }
            Some(n) => n,
            None => seen,
        };
        let mut parser = Parser {
            toks: &toks,
            pos: 0,
            n,
        };
        let p = parser.expr()?;
        if parser.pos != toks.len() {
            return Err(Error::Parse(format!(
                "unexpected token {:?}",
                toks[parser.pos]
            )));
        }
        Ok(p)
    }
}

impl FromStr for Poly<Rational> {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, None)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    Open,
    Close,
    Num(String),
    Var(usize),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' | ')' => {
                out.push(if c == '(' { Tok::Open } else { Tok::Close });
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < cs.len() && (cs[i].is_ascii_digit() || cs[i] == '.' || cs[i] == '/') {
                    i += 1;
                }
                out.push(Tok::Num(cs[start..i].iter().collect()));
            }
            'x' | 'y' | 'z' => {
                i += 1;
                let start = i;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                let idx = if start == i {
                    match c {
                        'x' => 0,
                        'y' => 1,
                        _ => 2,
                    }
                } else if c == 'x' {
                    let k: usize = cs[start..i]
                        .iter()
                        .collect::<String>()
                        .parse()
                        .map_err(|_| Error::Parse("bad variable index".into()))?;
                    if k == 0 {
                        return Err(Error::Parse("variables are numbered from x1".into()));
                    }
                    k - 1
                } else {
                    return Err(Error::Parse(format!("unexpected index after '{c}'")));
                };
                out.push(Tok::Var(idx));
            }
            _ => return Err(Error::Parse(format!("unexpected character '{c}'"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    n: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expr(&mut self) -> Result<Poly<Rational>> {
        let mut acc = Poly::zero_in(self.n);
        let mut first = true;
        loop {
            let mut negative = false;
            let mut had_sign = false;
            while let Some(t @ (Tok::Plus | Tok::Minus)) = self.peek() {
                negative ^= *t == Tok::Minus;
                had_sign = true;
                self.pos += 1;
            }
            if !first && !had_sign {
                return Ok(acc);
            }
            let t = self.term()?;
            if negative {
                acc -= &t;
            } else {
                acc += &t;
            }
            first = false;
            if !matches!(self.peek(), Some(Tok::Plus | Tok::Minus)) {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly<Rational>> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(Tok::Num(_) | Tok::Var(_) | Tok::Open) => acc = &acc * &self.factor()?,
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly<Rational>> {
        let base = match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.pos += 1;
                Poly::constant(self.n, parse_rational(&s)?)
            }
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Poly::var(self.n, v)
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(Error::Parse("missing ')'".into()));
                }
                self.pos += 1;
                e
            }
            _ => return Err(Error::Parse("expected a term".into())),
        };
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.peek() {
                Some(Tok::Num(s)) => {
                    let e: u32 = s
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent '{s}'")))?;
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return Err(Error::Parse("missing exponent after '^'".into())),
            }
        }
        Ok(base)
    }
}
