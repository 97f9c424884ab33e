//! Search for common zeros of the `q` polynomials with pairwise distinct
//! coordinates. A numeric verdict is evidence, never a proof.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;
use core::ops::Range;

use num_traits::{Signed, ToPrimitive};

use crate::error::Result;
use crate::measure::sphere_normalize;
use crate::nm::{nelder_mead, NmConfig};
use crate::schur::{build_q, schur_decompose, IntPoly, QPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Numeric,
    Positivity,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Condition22Config {
    pub samples: u64,
    pub local_searches: usize,
    /// Simplex diameter tolerance of each local search, in angle space.
    pub tolerance: f64,
    /// Normalized objective at or below which a point counts as a zero.
    pub zero_threshold: f64,
    /// Minimum pairwise coordinate distance of a counterexample.
    pub min_separation: f64,
}

impl Default for Condition22Config {
    fn default() -> Self {
        Self {
            samples: 1_000_000,
            local_searches: 1000,
            tolerance: 1e-10,
            zero_threshold: 1e-16,
            min_separation: 1e-4,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Evidence {
    /// `q_{A,index}` is a sum of positive even pure powers plus even terms,
    /// so its only real zero is the origin.
    PositiveDefinite { index: usize },
    Numeric {
        samples: u64,
        local_searches: usize,
        /// Smallest objective among local minima that are not zeros.
        best_nonzero_objective: f64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Condition22Verdict {
    Holds(Evidence),
    Fails { witness: Vec<f64>, objective: f64 },
}

impl Condition22Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Self::Holds(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Condition22Report {
    pub exponents: Vec<u32>,
    pub mode: Mode,
    pub verdict: Condition22Verdict,
    /// Distinct numeric common zeros on the sphere, first nonzero coordinate positive.
    pub zeros: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalMin {
    pub point: Vec<f64>,
    pub value: f64,
}

fn ipow(mut b: f64, mut e: u32) -> f64 {
    let mut r = 1.0;
    while e > 0 {
        if e & 1 == 1 {
            r *= b;
        }
        b *= b;
        e >>= 1;
    }
    r
}

struct FloatPoly {
    terms: Vec<(Vec<u32>, f64)>,
}

impl FloatPoly {
    fn new(p: &IntPoly) -> Self {
        let norm: f64 = p
            .terms()
            .map(|(_, c)| c.abs().to_f64().unwrap_or(f64::INFINITY))
            .sum();
        let terms = p
            .terms()
            .map(|(m, c)| {
                (
                    m.exps().to_vec(),
                    c.to_f64().unwrap_or(f64::INFINITY) / norm,
                )
            })
            .collect();
        Self { terms }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c * e.iter().zip(x).map(|(&k, v)| ipow(*v, k)).product::<f64>())
            .sum()
    }
}

/// `q` is positive away from the origin when every monomial has even
/// exponents, every coefficient is positive and every variable has a pure power.
pub fn is_positive_definite(q: &IntPoly) -> bool {
    let n = q.nvars();
    if q.is_empty() {
        return false;
    }
    if !q
        .terms()
        .all(|(m, c)| c.is_positive() && m.exps().iter().all(|e| e % 2 == 0))
    {
        return false;
    }
    if q.is_constant() {
        return true;
    }
    (0..n).all(|t| {
        q.terms().any(|(m, _)| {
            m.exps()
                .iter()
                .enumerate()
                .all(|(i, &e)| if i == t { e > 0 } else { e == 0 })
        })
    })
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut r = 0.0;
    while i > 0 {
        r += (i % base) as f64 * inv;
        i /= base;
        inv /= base as f64;
    }
    r
}

/// Candidates kept per local search before the diversity filter.
pub const CANDIDATE_FACTOR: usize = 8;
/// Minimum sphere distance between two local-search starts.
pub const DIVERSITY_RADIUS: f64 = 0.02;

const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Hyperspherical angles to a point of `S^{k−1}`.
pub fn angles_to_point(theta: &[f64]) -> Vec<f64> {
    let k = theta.len() + 1;
    let mut x = Vec::with_capacity(k);
    let mut s = 1.0;
    for t in theta {
        x.push(s * libm::cos(*t));
        s *= libm::sin(*t);
    }
    x.push(s);
    x
}

#[derive(Clone, Copy, PartialEq)]
struct Ranked(f64, u64);

impl Eq for Ranked {}

impl PartialOrd for Ranked {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ranked {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

/// Normalized sum of squares of the `q` polynomials over the unit sphere.
pub struct Condition22Problem {
    k: usize,
    polys: Vec<FloatPoly>,
}

impl Condition22Problem {
    pub fn new(q: &QPoly) -> Self {
        Self {
            k: q.k(),
            polys: q.polys.iter().map(FloatPoly::new).collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.polys
            .iter()
            .map(|p| {
                let v = p.eval(x);
                v * v
            })
            .sum()
    }

    /// Angles of the `i`-th Halton sample.
    pub fn sample_angles(&self, i: u64) -> Vec<f64> {
        let dim = self.k - 1;
        (0..dim)
            .map(|j| {
                let u = radical_inverse(i + 1, PRIMES[j % PRIMES.len()]);
                if j + 1 == dim {
                    2.0 * PI * u
                } else {
                    libm::acos(1.0 - 2.0 * u)
                }
            })
            .collect()
    }

    /// The `keep` lowest-objective sample indices in `range`, ascending.
    pub fn best_samples(&self, range: Range<u64>, keep: usize) -> Vec<(f64, u64)> {
        let mut heap: BinaryHeap<Ranked> = BinaryHeap::with_capacity(keep + 1);
        for i in range {
            let v = self.objective(&angles_to_point(&self.sample_angles(i)));
            if heap.len() < keep {
                heap.push(Ranked(v, i));
            } else if let Some(top) = heap.peek() {
                if Ranked(v, i) < *top {
                    heap.pop();
                    heap.push(Ranked(v, i));
                }
            }
        }
        let mut v: Vec<(f64, u64)> = heap.into_iter().map(|r| (r.0, r.1)).collect();
        v.sort_by(|a, b| Ranked(a.0, a.1).cmp(&Ranked(b.0, b.1)));
        v
    }

    /// Greedy choice of up to `count` starts from `ranked`, skipping any
    /// within `radius` of an earlier start (up to sign).
    pub fn diverse_starts(&self, ranked: &[(f64, u64)], count: usize, radius: f64) -> Vec<u64> {
        let mut chosen: Vec<(u64, Vec<f64>)> = Vec::new();
        for &(_, i) in ranked {
            if chosen.len() == count {
                break;
            }
            let p = angles_to_point(&self.sample_angles(i));
            let near = chosen.iter().any(|(_, q)| {
                let d = |sgn: f64| {
                    p.iter()
                        .zip(q)
                        .map(|(a, b)| (a - sgn * b) * (a - sgn * b))
                        .sum::<f64>()
                };
                libm::sqrt(d(1.0).min(d(-1.0))) < radius
            });
            if !near {
                chosen.push((i, p));
            }
        }
        chosen.into_iter().map(|(i, _)| i).collect()
    }

    pub fn local_search(&self, sample: u64, tolerance: f64) -> LocalMin {
        let theta = self.sample_angles(sample);
        let cfg = NmConfig {
            x_tolerance: tolerance,
            f_tolerance: 0.0,
            max_iterations: 4000,
        };
        let r = nelder_mead(|t| self.objective(&angles_to_point(t)), &theta, 0.05, &cfg);
        LocalMin {
            point: angles_to_point(&r.x),
            value: r.value,
        }
    }

    /// Merges local minima into a verdict and a deduplicated zero list.
    pub fn classify(
        &self,
        mins: &[LocalMin],
        cfg: &Condition22Config,
    ) -> (Condition22Verdict, Vec<Vec<f64>>) {
        let mut zeros: Vec<Vec<f64>> = Vec::new();
        let mut best_nonzero = f64::INFINITY;
        let mut witness: Option<(Vec<f64>, f64)> = None;
        for m in mins {
            if m.value > cfg.zero_threshold {
                best_nonzero = best_nonzero.min(m.value);
                continue;
            }
            let Some(p) = sphere_normalize(&m.point, 1e-9) else {
                continue;
            };
            let p: Vec<f64> = p
                .iter()
                .map(|v| if v.abs() < 1e-9 { 0.0 } else { *v })
                .collect();
            if !zeros
                .iter()
                .any(|z| z.iter().zip(&p).all(|(a, b)| (a - b).abs() < 1e-6))
            {
                zeros.push(p.clone());
            }
            if min_pairwise_distance(&p) > cfg.min_separation {
                let better = witness.as_ref().is_none_or(|(_, v)| m.value < *v);
                if better {
                    witness = Some((p, m.value));
                }
            }
        }
        zeros.sort_by(|a, b| {
            a.iter()
                .zip(b)
                .map(|(x, y)| y.total_cmp(x))
                .find(|o| *o != Ordering::Equal)
                .unwrap_or(Ordering::Equal)
        });
        let verdict = match witness {
            Some((witness, objective)) => Condition22Verdict::Fails { witness, objective },
            None => Condition22Verdict::Holds(Evidence::Numeric {
                samples: cfg.samples,
                local_searches: mins.len(),
                best_nonzero_objective: best_nonzero,
            }),
        };
        (verdict, zeros)
    }
}

/// `min_{i<j} |x_i − x_j|`, infinite for a single coordinate.
pub fn min_pairwise_distance(x: &[f64]) -> f64 {
    let mut d = f64::INFINITY;
    for i in 0..x.len() {
        for j in 0..i {
            d = d.min((x[i] - x[j]).abs());
        }
    }
    d
}

fn positivity_certificate(q: &QPoly) -> Option<usize> {
    q.polys.iter().position(is_positive_definite)
}

/// Runs the search sequentially; callers wanting parallel sampling can
/// drive [`Condition22Problem`] directly.
pub fn check_condition22(
    exponents: &[u32],
    mode: Mode,
    cfg: &Condition22Config,
) -> Result<Condition22Report> {
    let q = build_q(&schur_decompose(exponents)?)?;
    check_condition22_q(exponents, &q, mode, cfg)
}

pub fn check_condition22_q(
    exponents: &[u32],
    q: &QPoly,
    mode: Mode,
    cfg: &Condition22Config,
) -> Result<Condition22Report> {
    if mode == Mode::Positivity {
        if let Some(index) = positivity_certificate(q) {
            return Ok(Condition22Report {
                exponents: exponents.to_vec(),
                mode,
                verdict: Condition22Verdict::Holds(Evidence::PositiveDefinite { index }),
                zeros: Vec::new(),
            });
        }
    }
    let problem = Condition22Problem::new(q);
    let ranked = problem.best_samples(0..cfg.samples, cfg.local_searches * CANDIDATE_FACTOR);
    let starts = problem.diverse_starts(&ranked, cfg.local_searches, DIVERSITY_RADIUS);
    let mins: Vec<LocalMin> = starts
        .iter()
        .map(|&i| problem.local_search(i, cfg.tolerance))
        .collect();
    let (verdict, zeros) = problem.classify(&mins, cfg);
    Ok(Condition22Report {
        exponents: exponents.to_vec(),
        mode,
        verdict,
        zeros,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;
    use num_bigint::BigInt;

    fn quick() -> Condition22Config {
        Condition22Config {
            samples: 20_000,
            local_searches: 100,
            ..Default::default()
        }
    }

    #[test]
    fn gapped_five_has_off_axis_common_zero() {
        let r = check_condition22(&[0, 2, 3, 5, 6], Mode::Numeric, &quick()).unwrap();
        let Condition22Verdict::Fails { witness, objective } = r.verdict else {
            panic!("expected a counterexample");
        };
        assert!(objective < 1e-20);
        let zero_at = witness.iter().position(|v| *v == 0.0).unwrap();
        let rest: Vec<f64> = witness.iter().copied().filter(|v| *v != 0.0).collect();
        let ratio = rest[1] / rest[0];
        let roots = [-2.0 + libm::sqrt(3.0), -2.0 - libm::sqrt(3.0)];
        assert!(
            roots
                .iter()
                .any(|t| (ratio - t).abs() < 1e-8 || (1.0 / ratio - t).abs() < 1e-8),
            "{witness:?}"
        );
        assert!(zero_at < 3);
        let axes = r
            .zeros
            .iter()
            .filter(|z| z.iter().filter(|v| **v == 0.0).count() == 2)
            .count();
        assert_eq!(axes, 3);
    }

    #[test]
    fn gapped_five_common_zero_is_exact() {
        // every q_{A,i}(1, 0, t) is divisible by t^2 + 4t + 1
        let q = build_q(&schur_decompose(&[0, 2, 3, 5, 6]).unwrap()).unwrap();
        let one = |c: i64| Poly::constant(1, BigInt::from(c));
        let t: IntPoly = Poly::var(1, 0);
        let minimal = &(&t * &t + t.scale(&BigInt::from(4))) + &one(1);
        let mut nonzero = 0;
        for qi in &q.polys {
            let u = qi
                .eval_with(&[one(1), one(0), t.clone()], |c| {
                    one(0) + Poly::constant(1, c.clone())
                })
                .unwrap();
            nonzero += usize::from(!u.is_empty());
            assert!(u.div_exact(&minimal).is_ok());
        }
        assert_eq!(nonzero, 1);
    }

    #[test]
    fn sextic_gap_fails() {
        let r = check_condition22(&[0, 1, 2, 6], Mode::Numeric, &quick()).unwrap();
        match r.verdict {
            Condition22Verdict::Fails { witness, .. } => {
                assert!((witness[0] + witness[1]).abs() < 1e-6);
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn contiguous_is_certified() {
        let r = check_condition22(&[0, 1, 2, 3, 4], Mode::Positivity, &quick()).unwrap();
        assert_eq!(
            r.verdict,
            Condition22Verdict::Holds(Evidence::PositiveDefinite { index: 0 })
        );
        let r = check_condition22(&[0, 1, 2, 3], Mode::Numeric, &quick()).unwrap();
        assert!(r.verdict.holds());
    }

    #[test]
    fn halton_in_unit_interval() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(3, 2), 0.75);
        assert!((radical_inverse(5, 3) - 7.0 / 9.0).abs() < 1e-15);
    }
}
