//! One function per subcommand; each returns the JSON document to print.

use std::collections::BTreeMap;

use anyhow::{bail, Context, Result};
use cara_core::basis::Basis;
use cara_core::bounds::{build_table, BoundsRow};
use cara_core::cert::{builtin, certify, describe, motzkin_basis};
use cara_core::condition::{
    Condition22Config, Condition22Report, Condition22Verdict, Evidence, Mode,
};
use cara_core::fit::{estimate_cara, FitConfig, FitResult, Fitter};
use cara_core::flow::{kernel_flow, FlowConfig, FlowNormalization, Trajectory};
use cara_core::mass::{max_mass, MassConfig};
use cara_core::ranklab::{na_closed_form_report, na_probe, NaMethod, NaReport};
use cara_core::schur::{
    build_q, expected_degree, is_symmetric, relabeling_holds, schur_decompose,
    spot_check_jacobian_identity, verify_homogeneous_identity, verify_jacobian_identity,
    IdentityCheck, Parity,
};
use cara_core::waring::{waring_decompose, WaringConfig};
use cara_core::Error;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::io::{parse_point, BasisJson, Inputs, MeasureJson, PolyJson, SeqJson};
use crate::parallel::{check_condition22_parallel, ParallelFitter};

/// Largest exponent list handled by symbolic identity checks.
pub const SYMBOLIC_CAP: usize = 8;
/// Exact rational points used when a list exceeds [`SYMBOLIC_CAP`].
pub const SPOT_POINTS: usize = 20;
/// Coefficient-space tolerance a Waring decomposition must meet.
pub const WARING_TOLERANCE: f64 = 1e-8;

/// A finished command: its JSON and whether the numeric verdict converged.
#[derive(Debug)]
pub struct Report {
    pub json: Value,
    pub converged: bool,
    pub tolerances: BTreeMap<String, f64>,
}

impl Report {
    fn ok(json: Value) -> Self {
        Self {
            json,
            converged: true,
            tolerances: BTreeMap::new(),
        }
    }

    fn tolerance(mut self, name: &str, v: f64) -> Self {
        self.tolerances.insert(name.into(), v);
        self
    }
}

fn na_json(r: &NaReport, basis: &Basis) -> Value {
    json!({
        "basis": BasisJson::from_basis(basis),
        "m": r.basis_size,
        "n": r.nvars,
        "n_a": r.n_a,
        "method": match r.method {
            NaMethod::Probe => "probe",
            NaMethod::ClosedForm => "closed_form",
        },
        "lower_bound": r.lower_bound,
        "witness": r.witness.as_ref().map(MeasureJson::from_exact),
        "attempts": r.attempts.iter().map(|a| json!({"k": a.k, "rank": a.rank})).collect::<Vec<_>>(),
    })
}

pub fn na(
    inputs: &mut Inputs,
    basis: &str,
    max_k: Option<usize>,
    trials: usize,
    closed_form: bool,
    seed: u64,
) -> Result<Report> {
    let basis = inputs.basis(basis)?;
    let report = if closed_form {
        na_closed_form_report(&basis)?
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        na_probe(&basis, max_k.unwrap_or(basis.len()), trials, &mut rng)?
    };
    Ok(Report::ok(na_json(&report, &basis)))
}

fn identity_json(check: &IdentityCheck) -> Value {
    json!({
        "method": "symbolic",
        "verdict": if check.verdict.is_equal() { "equal" } else { "mismatch" },
    })
}

fn condition_json(r: &Condition22Report) -> Value {
    let verdict = match &r.verdict {
        Condition22Verdict::Holds(Evidence::PositiveDefinite { index }) => json!({
            "holds": true,
            "certified": true,
            "evidence": "positive definite",
            "q_index": index + 1,
        }),
        Condition22Verdict::Holds(Evidence::Numeric {
            samples,
            local_searches,
            best_nonzero_objective,
        }) => json!({
            "holds": true,
            "certified": false,
            "evidence": "no counterexample found",
            "samples": samples,
            "local_searches": local_searches,
            "best_nonzero_objective": best_nonzero_objective,
        }),
        Condition22Verdict::Fails { witness, objective } => json!({
            "holds": false,
            "certified": false,
            "witness": witness,
            "objective": objective,
        }),
    };
    json!({
        "mode": match r.mode { Mode::Numeric => "numeric", Mode::Positivity => "positivity" },
        "verdict": verdict,
        "zeros": r.zeros,
    })
}

pub struct SchurOptions {
    pub verify_identity: bool,
    pub condition: Option<Mode>,
    pub condition_cfg: Condition22Config,
    pub seed: u64,
}

pub fn schur(exponents: &[u32], opts: &SchurOptions) -> Result<Report> {
    let decomp = schur_decompose(exponents)?;
    let q = build_q(&decomp)?;
    let mut doc = json!({
        "exponents": exponents,
        "p_a": PolyJson::new(&decomp.p_a),
        "degree": decomp.p_a.degree().unwrap_or(0),
        "expected_degree": expected_degree(exponents),
        "prefix_power": decomp.prefix_power,
        "positive_integer_coefficients": decomp.has_positive_integer_coefficients(),
        "parity": match q.parity { Parity::Even => "even", Parity::Odd => "odd" },
        "q": q.polys.iter().map(PolyJson::new).collect::<Vec<_>>(),
        "q_homogeneous": PolyJson::new(&q.homogeneous),
        "symmetric": q.parity == Parity::Odd || is_symmetric(q.primary()),
        "relabeling": relabeling_holds(&q),
    });
    let mut report = Report::ok(Value::Null);
    if opts.verify_identity {
        let identity = if exponents.len() <= SYMBOLIC_CAP {
            json!({
                "affine": identity_json(&verify_jacobian_identity(exponents, SYMBOLIC_CAP)?),
                "homogeneous": identity_json(&verify_homogeneous_identity(exponents, SYMBOLIC_CAP)?),
            })
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let spot = spot_check_jacobian_identity(exponents, SPOT_POINTS, &mut rng)?;
            json!({
                "affine": {
                    "method": "spot",
                    "points": spot.points,
                    "verdict": if spot.failure.is_none() { "equal" } else { "mismatch" },
                    "failure": spot.failure.map(|p| p.iter().map(ToString::to_string).collect::<Vec<_>>()),
                },
            })
        };
        doc["identity"] = identity;
    }
    if let Some(mode) = opts.condition {
        let r = check_condition22_parallel(exponents, mode, &opts.condition_cfg)?;
        doc["condition22"] = condition_json(&r);
        report = report
            .tolerance("condition_local_tolerance", opts.condition_cfg.tolerance)
            .tolerance(
                "condition_zero_threshold",
                opts.condition_cfg.zero_threshold,
            )
            .tolerance(
                "condition_min_separation",
                opts.condition_cfg.min_separation,
            );
    }
    report.json = doc;
    Ok(report)
}

fn fit_json(r: &FitResult) -> Value {
    json!({
        "k": r.measure.len(),
        "converged": r.converged,
        "residual": r.residual,
        "restarts": r.restarts,
        "measure": MeasureJson::from_f64(&r.measure),
    })
}

pub fn fit(
    inputs: &mut Inputs,
    seq: &str,
    k: usize,
    signed: bool,
    cfg: &FitConfig,
    seed: u64,
) -> Result<Report> {
    let s = inputs.json::<SeqJson>(seq)?.to_f64()?;
    let r = ParallelFitter::new(seed).fit(&s, k, signed, cfg)?;
    let mut doc = fit_json(&r);
    doc["requested_k"] = json!(k);
    doc["signed"] = json!(signed);
    Ok(Report {
        json: doc,
        converged: r.converged,
        tolerances: BTreeMap::new(),
    }
    .tolerance("fit_tolerance", cfg.tolerance))
}

pub fn cara(
    inputs: &mut Inputs,
    seq: &str,
    signed: bool,
    certified: Option<usize>,
    cfg: &FitConfig,
    seed: u64,
) -> Result<Report> {
    let s = inputs.json::<SeqJson>(seq)?.to_f64()?;
    let est = estimate_cara(&s, signed, certified, &ParallelFitter::new(seed), cfg)?;
    let doc = json!({
        "signed": signed,
        "k_min": est.k_min,
        "k_found": est.k_found,
        "certified": certified.is_some(),
        "witness": fit_json(&est.witness),
        "sweep": est.sweep.iter().map(|(k, r)| json!({"k": k, "residual": r})).collect::<Vec<_>>(),
        "note": "k_found is an upper bound from a converged fit; smaller k failing all restarts is evidence, not proof",
    });
    Ok(Report::ok(doc).tolerance("fit_tolerance", cfg.tolerance))
}

pub fn maxmass(
    inputs: &mut Inputs,
    seq: &str,
    point: &str,
    e: &str,
    cfg: &MassConfig,
    seed: u64,
) -> Result<Report> {
    let s = inputs.json::<SeqJson>(seq)?.to_f64()?;
    let x = parse_point(point)?;
    let e = inputs.poly(e, Some(s.basis().nvars()))?;
    let r = max_mass(&s, &x, &e, &ParallelFitter::new(seed), cfg)?;
    let doc = json!({
        "point": r.point,
        "e": PolyJson::new(&e),
        "c_low": r.c_low,
        "c_high": r.c_high,
        "c_star": r.c_star,
        "upper_bound": r.upper_bound,
        "probes": r.probes.iter().map(|p| json!({"c": p.c, "member": p.member, "residual": p.residual})).collect::<Vec<_>>(),
    });
    Ok(Report::ok(doc)
        .tolerance("bisection_tolerance", cfg.tolerance)
        .tolerance("fit_tolerance", cfg.fit_tolerance))
}

fn trajectory_csv(tr: &Trajectory, path: &str) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot write '{path}'"))?;
    let first = &tr.states[0].measure;
    let mut header = vec!["t".to_string()];
    for a in 0..first.len() {
        header.push(format!("c{}", a + 1));
        for i in 0..first.nvars() {
            header.push(format!("x{}_{}", a + 1, i + 1));
        }
    }
    w.write_record(&header)?;
    for s in &tr.states {
        let mut row = vec![s.t.to_string()];
        for (c, x) in s.measure.weights().iter().zip(s.measure.points()) {
            row.push(c.to_string());
            row.extend(x.iter().map(ToString::to_string));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn flow(
    inputs: &mut Inputs,
    basis: &str,
    measure: &str,
    t0: f64,
    t1: f64,
    cfg: &FlowConfig,
    csv_path: Option<&str>,
) -> Result<Report> {
    let basis = inputs.basis(basis)?;
    let mu = inputs.json::<MeasureJson>(measure)?.to_f64()?;
    let tr = kernel_flow(&basis, &mu, t0, t1, cfg)?;
    if let Some(p) = csv_path {
        trajectory_csv(&tr, p)?;
    }
    let doc = json!({
        "t0": t0,
        "t1": t1,
        "steps": cfg.steps,
        "normalization": match cfg.normalization {
            FlowNormalization::Unit => "unit",
            FlowNormalization::WeightRate => "weight-rate",
        },
        "max_drift": tr.max_drift,
        "states": tr.states.iter().map(|s| json!({
            "t": s.t,
            "drift": s.drift,
            "measure": MeasureJson::from_f64(&s.measure),
        })).collect::<Vec<_>>(),
    });
    Ok(Report::ok(doc)
        .tolerance("drift_tolerance", cfg.drift_tolerance)
        .tolerance("kernel_tolerance", cfg.kernel_tolerance)
        .tolerance("gap_factor", cfg.gap_factor))
}

pub fn waring(inputs: &mut Inputs, poly: &str, cfg: &WaringConfig, seed: u64) -> Result<Report> {
    let f = inputs.poly(poly, None)?;
    let r = waring_decompose(&f, &ParallelFitter::new(seed), cfg)?;
    let within = r.reconstruction_error <= WARING_TOLERANCE;
    let doc = json!({
        "form": PolyJson::new(&f),
        "atoms": r.measure.weights().iter().zip(r.measure.points()).map(|(c, l)| json!({"c": c, "lambda": l})).collect::<Vec<_>>(),
        "atom_count": r.measure.len(),
        "atom_bound": r.atom_bound,
        "reconstruction_error": r.reconstruction_error,
        "within_tolerance": within,
        "moments": SeqJson::from_exact(&r.moments),
    });
    Ok(Report {
        json: doc,
        converged: within,
        tolerances: BTreeMap::new(),
    }
    .tolerance("fit_tolerance", cfg.fit.tolerance)
    .tolerance("reconstruction_tolerance", WARING_TOLERANCE))
}

fn default_cert_basis(name: &str) -> Result<Basis> {
    Ok(match name {
        "motzkin" => motzkin_basis(),
        "robinson" => Basis::homogeneous(3, 6)?,
        "harris" => Basis::homogeneous(3, 10)?,
        other => bail!(Error::UnknownPolynomial(other.into())),
    })
}

pub fn cert(
    inputs: &mut Inputs,
    name: &str,
    basis: Option<&str>,
    dump_matrix: bool,
) -> Result<Report> {
    let b = builtin(name)?;
    let basis = match basis {
        Some(spec) => inputs.basis(spec)?,
        None => default_cert_basis(name)?,
    };
    let c = certify(&b.polynomial, &b.zeros, &basis)?;
    let mut doc = json!({
        "name": name,
        "polynomial": PolyJson::new(&c.polynomial),
        "basis": BasisJson::from_basis(&basis),
        "zeros": c.zeros.iter().map(|z| z.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "matrix_rank": c.matrix_rank,
        "float_rank": c.float_rank,
        "in_span": c.in_span,
        "independent": c.independent,
        "implied_lower_bound": c.implied_lower_bound,
        "summary": describe(&c),
    });
    if dump_matrix {
        let rows: Vec<Vec<String>> = (0..c.matrix.nrows())
            .map(|i| c.matrix.row(i).iter().map(ToString::to_string).collect())
            .collect();
        doc["matrix"] = json!(rows);
    }
    Ok(Report::ok(doc).tolerance(
        "float_rank_tolerance",
        cara_core::cert::FLOAT_RANK_TOLERANCE,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundsFormat {
    Table,
    Json,
    Csv,
}

fn row_json(r: &BoundsRow) -> Value {
    json!({
        "two_d": r.two_d,
        "n_lower": r.n_lower,
        "richter": r.richter,
        "m_minus_one": r.m_minus_one,
        "alpha_next": r.alpha_next,
        "layered": r.layered,
        "known": r.known.as_ref().map(|k| json!({"value": k.value, "citation": k.citation})),
        "proof_formula": r.proof_formula,
    })
}

const BOUNDS_HEADER: [&str; 7] = [
    "2d",
    "n_lower",
    "richter",
    "m_minus_one",
    "alpha_next",
    "layered",
    "known",
];

fn row_cells(r: &BoundsRow) -> Vec<String> {
    let mut layered = r.layered.to_string();
    if r.proof_formula {
        layered.push('*');
    }
    vec![
        r.two_d.to_string(),
        r.n_lower.to_string(),
        r.richter.to_string(),
        r.m_minus_one.to_string(),
        r.alpha_next.to_string(),
        layered,
        r.known
            .as_ref()
            .map_or(String::new(), |k| k.value.to_string()),
    ]
}

/// The bounds table in the requested format. Non-JSON formats come back as
/// a JSON string so that every command shares one output path.
pub fn bounds(rows: &[u64], format: BoundsFormat) -> Result<Report> {
    let table = build_table(rows)?;
    let doc = match format {
        BoundsFormat::Json => json!({ "rows": table.iter().map(row_json).collect::<Vec<_>>() }),
        BoundsFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(BOUNDS_HEADER)?;
            for r in &table {
                w.write_record(row_cells(r))?;
            }
            Value::String(String::from_utf8(w.into_inner()?)?)
        }
        BoundsFormat::Table => {
            let cells: Vec<Vec<String>> = table.iter().map(row_cells).collect();
            let widths: Vec<usize> = (0..BOUNDS_HEADER.len())
                .map(|j| {
                    cells
                        .iter()
                        .map(|r| r[j].len())
                        .chain([BOUNDS_HEADER[j].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |r: &[String]| {
                r.iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            let header: Vec<String> = BOUNDS_HEADER.iter().map(ToString::to_string).collect();
            let mut out = line(&header);
            out.push('\n');
            for r in &cells {
                out.push_str(&line(r));
                out.push('\n');
            }
            if table.iter().any(|r| r.proof_formula) {
                out.push_str("* max-formula value outside d >= 5\n");
            }
            Value::String(out)
        }
    };
    Ok(Report::ok(doc))
}
