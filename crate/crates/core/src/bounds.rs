//! Closed-form Carathéodory bounds for ternary forms and the table that
//! collects them.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ranklab::na_closed_form;
use crate::scalar::{rational, Rational};

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

fn even_half(two_d: u64) -> Result<u64> {
    if two_d % 2 != 0 {
        return Err(Error::InvalidArgument(format!("degree {two_d} is odd")));
    }
    Ok(two_d / 2)
}

/// `α(2d) = (3/2) d (d − 1) + 1`.
pub fn alpha(two_d: u64) -> Result<u64> {
    let d = even_half(two_d)?;
    Ok(alpha_of_half(d))
}

fn alpha_of_half(d: u64) -> u64 {
    3 * d * d.saturating_sub(1) / 2 + 1
}

/// `Mö(2, 2k−1) = C(k+1, 2) + ⌊k/2⌋`.
pub fn moeller_bound(k: u64) -> u64 {
    binomial(k + 1, 2) as u64 + k / 2
}

#[derive(Clone, Debug, PartialEq)]
pub struct MoellerComparison {
    pub k: u64,
    pub moeller: u64,
    /// `⌈|A_{2,2k−1}| / 3⌉`.
    pub na: u64,
    pub gap: i64,
    /// `((k − 2)² − 4) / 6`.
    pub gap_lower_bound: Rational,
}

pub fn moeller_comparison(k: u64) -> MoellerComparison {
    let m = binomial(2 * k + 1, 2) as u64;
    let na = m.div_ceil(3);
    let moeller = moeller_bound(k);
    let t = k as i64 - 2;
    MoellerComparison {
        k,
        moeller,
        na,
        gap: na as i64 - moeller as i64,
        gap_lower_bound: rational(t * t - 4, 6),
    }
}

/// `max_{k=0..d} { C(2d+2,2) − C(2d+2−k,2) + β(2(d−k)) } + 1`.
pub fn recursive_bound(d: u64, beta: impl Fn(u64) -> Option<u64>) -> Result<u64> {
    let top = binomial(2 * d + 2, 2) as u64;
    let mut best = 0;
    for k in 0..=d {
        let two_j = 2 * (d - k);
        let b = beta(two_j).ok_or(Error::MissingBeta(two_j))?;
        best = best.max(top - binomial(2 * d + 2 - k, 2) as u64 + b);
    }
    Ok(best + 1)
}

/// Default `β(2j) := α(2j)`, with `β(0) := 1`.
pub fn beta_default(two_j: u64) -> Option<u64> {
    if two_j == 0 {
        Some(1)
    } else {
        alpha(two_j).ok()
    }
}

/// `max_{k=0..d} { α(2k) + (d+1)(d−k) } + 1`.
pub fn layered_bound(d: u64) -> u64 {
    let v = (0..=d)
        .map(|k| alpha_of_half(k) + (d + 1) * (d - k))
        .max()
        .unwrap_or(1)
        + 1;
    debug_assert!(d < 5 || v == alpha_of_half(d) + 1);
    v
}

/// `|B_{4,4}| − |B_{4,2}| + 1`.
pub fn quaternary_quartic_bound() -> u64 {
    (binomial(7, 3) - binomial(5, 3) + 1) as u64
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Known {
    pub value: u64,
    pub citation: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsRow {
    pub two_d: u64,
    pub n_lower: u64,
    /// `|B_{3,2d}| = C(2d+2, 2)`.
    pub richter: u64,
    pub m_minus_one: u64,
    /// `α(2d+2)`.
    pub alpha_next: u64,
    /// [`layered_bound`].
    pub layered: u64,
    pub known: Option<Known>,
    /// The max-formula column is evaluated outside `d ≥ 5`.
    pub proof_formula: bool,
}

fn known(two_d: u64) -> Option<Known> {
    match two_d {
        2 => Some(Known {
            value: 3,
            citation: "Reznick 1992",
        }),
        4 => Some(Known {
            value: 6,
            citation: "Reznick 1992",
        }),
        6 => Some(Known {
            value: 11,
            citation: "Kunert 2014 (PhD thesis)",
        }),
        _ => None,
    }
}

pub fn bounds_row(two_d: u64) -> Result<BoundsRow> {
    let d = even_half(two_d)?;
    if d == 0 {
        return Err(Error::InvalidArgument("degree must be positive".into()));
    }
    let richter = binomial(two_d + 2, 2) as u64;
    Ok(BoundsRow {
        two_d,
        n_lower: na_closed_form(3, two_d, true)?,
        richter,
        m_minus_one: richter - 1,
        alpha_next: 3 * d * (d + 1) / 2 + 1,
        layered: layered_bound(d),
        known: known(two_d),
        proof_formula: d < 5,
    })
}

pub fn build_table(rows: &[u64]) -> Result<Vec<BoundsRow>> {
    rows.iter().map(|&r| bounds_row(r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_values() {
        assert_eq!(alpha(6).unwrap(), 10);
        assert_eq!(alpha(10).unwrap(), 31);
        assert_eq!(alpha(2).unwrap(), 1);
        assert!(alpha(3).is_err());
    }

    #[test]
    fn moeller() {
        assert_eq!(moeller_bound(1), 1);
        let c4 = moeller_comparison(4);
        assert_eq!((c4.moeller, c4.na, c4.gap), (12, 12, 0));
        assert_eq!(c4.gap_lower_bound, rational(0, 1));
        let c6 = moeller_comparison(6);
        assert_eq!((c6.moeller, c6.na, c6.gap), (24, 26, 2));
        assert_eq!(c6.gap_lower_bound, rational(2, 1));
    }

    #[test]
    fn recursive_bound_values() {
        assert_eq!(recursive_bound(2, beta_default).unwrap(), 11);
        assert_eq!(recursive_bound(0, beta_default).unwrap(), 2);
        assert_eq!(recursive_bound(2, |_| None), Err(Error::MissingBeta(4)));
    }

    #[test]
    fn layered_bound_values() {
        assert_eq!(layered_bound(2), 8);
        assert_eq!(layered_bound(3), 14);
        assert_eq!(layered_bound(10), 137);
    }

    #[test]
    fn quartic_quaternary() {
        assert_eq!(quaternary_quartic_bound(), 26);
    }

    #[test]
    fn sample_rows() {
        let r = bounds_row(6).unwrap();
        assert_eq!(
            (r.n_lower, r.richter, r.m_minus_one, r.alpha_next, r.layered),
            (10, 28, 27, 19, 14)
        );
        assert_eq!(r.known.unwrap().value, 11);
        let r = bounds_row(2).unwrap();
        assert_eq!(
            (r.n_lower, r.richter, r.m_minus_one, r.alpha_next, r.layered),
            (3, 6, 5, 4, 4)
        );
        assert!(bounds_row(7).is_err());
    }
}
