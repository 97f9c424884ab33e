//! Signed Waring decompositions `f = Σ c_i (λ_i · x)^{2d}` via the moment
//! functional of `f` under the apolar pairing.

use alloc::vec::Vec;

use num_traits::ToPrimitive;

use crate::basis::{monomials_of_degree, Basis};
use crate::error::{Error, Result};
use crate::fit::{estimate_cara, CaraEstimate, FitConfig, Fitter};
use crate::geometry::multinomial;
use crate::measure::{AtomicMeasure, MomentSeq};
use crate::poly::{Monomial, Poly};
use crate::ranklab::na_closed_form;
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaringConfig {
    pub fit: FitConfig,
}

impl Default for WaringConfig {
    fn default() -> Self {
        Self {
            fit: FitConfig {
                restarts: 64,
                tolerance: 1e-12,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WaringResult {
    /// Signed atoms `(c_i, λ_i)`.
    pub measure: AtomicMeasure<f64>,
    pub moments: MomentSeq<Rational>,
    /// Present unless `f = 0`.
    pub estimate: Option<CaraEstimate>,
    /// `max_α |f_α − Σ c_i γ_α λ_i^α|`.
    pub reconstruction_error: f64,
    /// `2·N_B`.
    pub atom_bound: usize,
}

fn form_degree(f: &Poly<Rational>) -> Result<u32> {
    let d = f.homogeneous_degree().ok_or_else(|| {
        Error::DegreeMismatch("Waring decomposition needs a homogeneous form".into())
    })?;
    if d == 0 || d % 2 != 0 {
        return Err(Error::DegreeMismatch(alloc::format!(
            "Waring decomposition needs positive even degree, got {d}"
        )));
    }
    Ok(d)
}

/// `L_f(x^α) = f_α / γ_α` on `B_{n,2d}`, so that `f = Σ c_i (λ_i·x)^{2d}`
/// exactly when `Σ c_i δ_{λ_i}` represents these moments.
pub fn waring_moments(f: &Poly<Rational>, degree: u32) -> Result<MomentSeq<Rational>> {
    let n = f.nvars();
    let basis = Basis::homogeneous(n, degree)?;
    let values = monomials_of_degree(n, degree)
        .into_iter()
        .map(|a| f.coeff(&Monomial::new(a.clone())) / Rational::from_integer(multinomial(&a)))
        .collect();
    MomentSeq::new(basis, values)
}

/// Coefficient-space distance between `f` and `Σ c_i (λ_i·x)^{degree}`.
pub fn reconstruction_error(f: &Poly<Rational>, degree: u32, mu: &AtomicMeasure<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for a in monomials_of_degree(f.nvars(), degree) {
        let gamma = multinomial(&a).to_f64().unwrap_or(f64::INFINITY);
        let mut acc = 0.0;
        for (c, l) in mu.weights().iter().zip(mu.points()) {
            let mono: f64 = l
                .iter()
                .zip(&a)
                .map(|(v, &e)| libm::pow(*v, f64::from(e)))
                .product();
            acc += c * gamma * mono;
        }
        let target = Scalar::to_f64(&f.coeff(&Monomial::new(a)));
        worst = worst.max((target - acc).abs());
    }
    worst
}

pub fn waring_decompose(
    f: &Poly<Rational>,
    fitter: &impl Fitter,
    cfg: &WaringConfig,
) -> Result<WaringResult> {
    let n = f.nvars();
    if n == 0 {
        return Err(Error::InvalidArgument("form has no variables".into()));
    }
    if f.is_empty() {
        let basis = Basis::homogeneous(n, 2)?;
        let moments = MomentSeq::new(
            basis.clone(),
            alloc::vec![Rational::from_integer(0.into()); basis.len()],
        )?;
        return Ok(WaringResult {
            measure: AtomicMeasure::empty(n, true),
            moments,
            estimate: None,
            reconstruction_error: 0.0,
            atom_bound: 0,
        });
    }
    let degree = form_degree(f)?;
    let moments = waring_moments(f, degree)?;
    let atom_bound = 2 * na_closed_form(n as u64, u64::from(degree), true)? as usize;
    let estimate = estimate_cara(&moments.to_f64(), true, None, fitter, &cfg.fit)?;
    let measure = estimate.witness.measure.clone();
    let err = reconstruction_error(f, degree, &measure);
    Ok(WaringResult {
        measure,
        moments,
        estimate: Some(estimate),
        reconstruction_error: err,
        atom_bound,
    })
}

/// Exact moments of a rational signed measure, for checking decompositions.
pub fn moments_of(mu: &AtomicMeasure<Rational>, degree: u32) -> Result<Vec<Rational>> {
    let basis = Basis::homogeneous(mu.nvars(), degree)?;
    Ok(crate::geometry::moment_map(&basis, mu)?.values().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::SerialFitter;
    use crate::geometry::linear_form_power;
    use crate::scalar::{int, rational};

    fn fitter() -> SerialFitter {
        SerialFitter { seed: 17 }
    }

    #[test]
    fn power_of_linear_form() {
        let f = Poly::parse("(x1 + x2)^4", Some(2)).unwrap();
        let r = waring_decompose(&f, &fitter(), &WaringConfig::default()).unwrap();
        assert_eq!(r.measure.len(), 1);
        assert!((r.measure.weights()[0] - 1.0).abs() < 1e-9);
        assert!(r.measure.points()[0].iter().all(|v| (v - 1.0).abs() < 1e-9));
        assert!(r.reconstruction_error <= 1e-8);
    }

    #[test]
    fn product_of_squares() {
        let f = Poly::parse("x1^2 x2^2", Some(2)).unwrap();
        let r = waring_decompose(&f, &fitter(), &WaringConfig::default()).unwrap();
        assert_eq!(r.atom_bound, 6);
        assert!(r.measure.len() <= 6);
        assert!(r.reconstruction_error <= 1e-8, "{r:?}");
    }

    #[test]
    fn zero_form() {
        let r = waring_decompose(&Poly::zero_in(2), &fitter(), &WaringConfig::default()).unwrap();
        assert!(r.measure.is_empty());
    }

    #[test]
    fn moments_of_a_power_are_a_point_mass() {
        let lambda = [rational(1, 2), int(3)];
        let f = linear_form_power(&lambda, 4);
        let s = waring_moments(&f, 4).unwrap();
        let mu =
            AtomicMeasure::new(2, alloc::vec![int(1)], alloc::vec![lambda.to_vec()], true).unwrap();
        assert_eq!(s.values(), &moments_of(&mu, 4).unwrap()[..]);
    }

    #[test]
    fn odd_degree_rejected() {
        let f = Poly::parse("x1^3", Some(2)).unwrap();
        assert!(waring_decompose(&f, &fitter(), &WaringConfig::default()).is_err());
    }
}
