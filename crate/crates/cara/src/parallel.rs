//! Rayon-backed drivers whose results match the serial ones exactly.

use cara_core::condition::{
    is_positive_definite, Condition22Config, Condition22Problem, Condition22Report,
    Condition22Verdict, Evidence, LocalMin, Mode, CANDIDATE_FACTOR, DIVERSITY_RADIUS,
};
use cara_core::fit::{
    absolute_tolerance, attempt, check_request, select, trivial_fit, FitConfig, FitResult, Fitter,
};
use cara_core::measure::MomentSeq;
use cara_core::schur::{build_q, schur_decompose};
use rayon::prelude::*;

/// Runs restarts in parallel batches. Every restart is a pure function of
/// `(seed, k, index)` and selection prefers the lowest converged index, so
/// the outcome equals [`cara_core::fit::SerialFitter`] with the same seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParallelFitter {
    pub seed: u64,
    /// Restarts launched together before checking for convergence.
    pub batch: usize,
}

impl ParallelFitter {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            batch: rayon::current_num_threads().max(1),
        }
    }
}

impl Fitter for ParallelFitter {
    fn fit(
        &self,
        seq: &MomentSeq<f64>,
        k: usize,
        signed: bool,
        cfg: &FitConfig,
    ) -> cara_core::Result<FitResult> {
        check_request(seq, k)?;
        if let Some(r) = trivial_fit(seq, signed) {
            return Ok(r);
        }
        let tol = absolute_tolerance(seq, cfg);
        let mut attempts = Vec::with_capacity(cfg.restarts);
        let mut start = 0;
        while start < cfg.restarts {
            let end = (start + self.batch.max(1)).min(cfg.restarts);
            let batch: Vec<_> = (start..end)
                .into_par_iter()
                .map(|r| attempt(seq, k, signed, self.seed, r))
                .collect();
            let done = batch.iter().any(|a| a.residual <= tol);
            attempts.extend(batch);
            if done {
                break;
            }
            start = end;
        }
        select(seq, signed, cfg, attempts)
    }
}

const CHUNK: u64 = 1 << 14;

/// The condition search of [`cara_core::condition::check_condition22`] with
/// sampling and local searches spread over threads.
pub fn check_condition22_parallel(
    exponents: &[u32],
    mode: Mode,
    cfg: &Condition22Config,
) -> cara_core::Result<Condition22Report> {
    let q = build_q(&schur_decompose(exponents)?)?;
    if mode == Mode::Positivity {
        if let Some(index) = q.polys.iter().position(is_positive_definite) {
            return Ok(Condition22Report {
                exponents: exponents.to_vec(),
                mode,
                verdict: Condition22Verdict::Holds(Evidence::PositiveDefinite { index }),
                zeros: Vec::new(),
            });
        }
    }
    let problem = Condition22Problem::new(&q);
    let keep = cfg.local_searches * CANDIDATE_FACTOR;
    let chunks: Vec<u64> = (0..cfg.samples.div_ceil(CHUNK)).collect();
    let mut ranked: Vec<(f64, u64)> = chunks
        .par_iter()
        .flat_map_iter(|&c| {
            let lo = c * CHUNK;
            problem.best_samples(lo..(lo + CHUNK).min(cfg.samples), keep)
        })
        .collect();
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    ranked.truncate(keep);
    let starts = problem.diverse_starts(&ranked, cfg.local_searches, DIVERSITY_RADIUS);
    let mins: Vec<LocalMin> = starts
        .par_iter()
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
