//! Atomic measures `μ = Σ c_i δ_{x_i}` and moment sequences.

use alloc::format;
use alloc::vec::Vec;

use crate::basis::Basis;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct AtomicMeasure<T> {
    nvars: usize,
    weights: Vec<T>,
    points: Vec<Vec<T>>,
    signed: bool,
}

impl<T> AtomicMeasure<T> {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn points(&self) -> &[Vec<T>] {
        &self.points
    }

    pub fn is_signed(&self) -> bool {
        self.signed
    }
}

impl<T: Scalar> AtomicMeasure<T> {
    /// Validates nonzero (or positive, if unsigned) weights and exactly
    /// distinct points.
    pub fn new(nvars: usize, weights: Vec<T>, points: Vec<Vec<T>>, signed: bool) -> Result<Self> {
        let mu = Self {
            nvars,
            weights,
            points,
            signed,
        };
        mu.validate_shape()?;
        for i in 0..mu.points.len() {
            for j in 0..i {
                if mu.points[i] == mu.points[j] {
                    return Err(Error::InvalidMeasure(format!("atoms {j} and {i} coincide")));
                }
            }
        }
        Ok(mu)
    }

    pub fn empty(nvars: usize, signed: bool) -> Self {
        Self {
            nvars,
            weights: Vec::new(),
            points: Vec::new(),
            signed,
        }
    }

    /// Unit weights at the given points.
    pub fn uniform(nvars: usize, points: Vec<Vec<T>>) -> Result<Self> {
        let w = (0..points.len()).map(|_| T::one()).collect();
        Self::new(nvars, w, points, false)
    }

    fn validate_shape(&self) -> Result<()> {
        if self.weights.len() != self.points.len() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.len(),
                found: self.points.len(),
            });
        }
        for p in &self.points {
            if p.len() != self.nvars {
                return Err(Error::DimensionMismatch {
                    expected: self.nvars,
                    found: p.len(),
                });
            }
        }
        for (i, c) in self.weights.iter().enumerate() {
            if c.is_zero() {
                return Err(Error::InvalidMeasure(format!("weight {i} is zero")));
            }
            if !self.signed && !c.is_positive() {
                return Err(Error::InvalidMeasure(format!(
                    "weight {i} is negative in an unsigned measure"
                )));
            }
        }
        Ok(())
    }

    /// Disjoint union of atom lists.
    pub fn union(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        let mut w = self.weights.clone();
        w.extend(other.weights.iter().cloned());
        let mut p = self.points.clone();
        p.extend(other.points.iter().cloned());
        Self::new(self.nvars, w, p, self.signed || other.signed)
    }

    pub fn to_f64(&self) -> AtomicMeasure<f64> {
        AtomicMeasure {
            nvars: self.nvars,
            weights: self.weights.iter().map(Scalar::to_f64).collect(),
            points: self
                .points
                .iter()
                .map(|p| p.iter().map(Scalar::to_f64).collect())
                .collect(),
            signed: self.signed,
        }
    }
}

impl AtomicMeasure<f64> {
    /// Numeric constructor: points must be separated by more than `sep` in max norm.
    pub fn with_separation(
        nvars: usize,
        weights: Vec<f64>,
        points: Vec<Vec<f64>>,
        signed: bool,
        sep: f64,
    ) -> Result<Self> {
        let mu = Self {
            nvars,
            weights,
            points,
            signed,
        };
        mu.validate_shape()?;
        if mu
            .weights
            .iter()
            .chain(mu.points.iter().flatten())
            .any(|v| !v.is_finite())
        {
            return Err(Error::InvalidMeasure("non-finite entry".into()));
        }
        let d = mu.min_separation();
        if mu.len() > 1 && d <= sep {
            return Err(Error::InvalidMeasure(format!(
                "atoms closer than separation tolerance {sep:e}"
            )));
        }
        Ok(mu)
    }

    /// Smallest max-norm distance between two atoms.
    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.points.len() {
            for j in 0..i {
                let d = self.points[i]
                    .iter()
                    .zip(&self.points[j])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                best = best.min(d);
            }
        }
        best
    }
}

/// Divides by the first nonzero coordinate, the canonical affine
/// representative of a projective point in exact arithmetic.
pub fn projective_normalize<T: Scalar>(x: &[T]) -> Option<Vec<T>> {
    let lead = x.iter().find(|v| !v.is_zero())?.clone();
    Some(x.iter().map(|v| v.clone() / lead.clone()).collect())
}

/// Unit-sphere representative with first non-negligible coordinate positive.
pub fn sphere_normalize(x: &[f64], eps: f64) -> Option<Vec<f64>> {
    let norm = libm::sqrt(x.iter().map(|v| v * v).sum::<f64>());
    if norm == 0.0 || !norm.is_finite() {
        return None;
    }
    let mut y: Vec<f64> = x.iter().map(|v| v / norm).collect();
    if let Some(lead) = y.iter().find(|v| v.abs() > eps) {
        if *lead < 0.0 {
            y.iter_mut().for_each(|v| *v = -*v);
        }
    }
    Some(y)
}

/// A vector of moments paired with its basis.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSeq<T> {
    basis: Basis,
    values: Vec<T>,
}

impl<T: Clone> MomentSeq<T> {
    pub fn new(basis: Basis, values: Vec<T>) -> Result<Self> {
        if values.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                found: values.len(),
            });
        }
        Ok(Self { basis, values })
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }
}

impl<T: Scalar> MomentSeq<T> {
    pub fn to_f64(&self) -> MomentSeq<f64> {
        MomentSeq {
            basis: self.basis.clone(),
            values: self.values.iter().map(Scalar::to_f64).collect(),
        }
    }
}
