//! JSON schema for bases, measures and moment sequences, plus the basis
//! shorthands and polynomial inputs accepted on the command line.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use cara_core::basis::{Basis, BasisKind};
use cara_core::cert::motzkin_basis;
use cara_core::measure::{AtomicMeasure, MomentSeq};
use cara_core::poly::{Monomial, Poly};
use cara_core::scalar::{f64_to_rational, format_rational, parse_rational, Rational, Scalar};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// A number given either as an exact string (`"p/q"`, `"3"`, `"0.25"`) or
/// as a JSON float.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Text(String),
    Float(f64),
}

impl Num {
    pub fn exact(r: &Rational) -> Self {
        Self::Text(format_rational(r))
    }

    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            Self::Text(s) => Ok(parse_rational(s)?),
            Self::Float(v) => f64_to_rational(*v).ok_or_else(|| anyhow!("non-finite number {v}")),
        }
    }

    pub fn to_f64(&self) -> Result<f64> {
        match self {
            Self::Text(s) => Ok(Scalar::to_f64(&parse_rational(s)?)),
            Self::Float(v) => Ok(*v),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisJson {
    pub n: usize,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<String>>,
}

/// A basis written inline as a shorthand string or as a full object.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BasisSpec {
    Shorthand(String),
    Object(BasisJson),
}

impl BasisSpec {
    pub fn build(&self) -> Result<Basis> {
        match self {
            Self::Shorthand(s) => parse_shorthand(s),
            Self::Object(b) => b.build(),
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .with_context(|| format!("invalid exponent '{t}'"))
        })
        .collect()
}

/// `full:n:d`, `hom:n:d`, `gapped1d:d1,d2,…`, `gappedhom:d1,d2,…` or `motzkin`.
pub fn parse_shorthand(s: &str) -> Result<Basis> {
    let parts: Vec<&str> = s.split(':').collect();
    let nd = |p: &[&str]| -> Result<(usize, u32)> {
        match p {
            [n, d] => Ok((
                n.parse()
                    .with_context(|| format!("invalid variable count in '{s}'"))?,
                d.parse()
                    .with_context(|| format!("invalid degree in '{s}'"))?,
            )),
            _ => bail!("expected KIND:n:d, got '{s}'"),
        }
    };
    let basis = match parts.as_slice() {
        ["full", rest @ ..] => {
            let (n, d) = nd(rest)?;
            Basis::full_degree(n, d)?
        }
        ["hom", rest @ ..] => {
            let (n, d) = nd(rest)?;
            Basis::homogeneous(n, d)?
        }
        ["gapped1d", list] => Basis::gapped_1d(&parse_list(list)?)?,
        ["gappedhom", list] => Basis::gapped_homogeneous(&parse_list(list)?)?,
        ["motzkin"] => motzkin_basis(),
        _ => bail!("unknown basis shorthand '{s}'"),
    };
    Ok(basis)
}

impl BasisJson {
    pub fn build(&self) -> Result<Basis> {
        let need_degree = || {
            self.degree
                .ok_or_else(|| anyhow!("basis kind '{}' needs a degree", self.kind))
        };
        let basis = match self.kind.as_str() {
            "full" => Basis::full_degree(self.n, need_degree()?)?,
            "hom" => Basis::homogeneous(self.n, need_degree()?)?,
            "gapped1d" => {
                let ex = self
                    .exponents
                    .as_ref()
                    .ok_or_else(|| anyhow!("gapped1d basis needs exponents"))?;
                let flat = ex
                    .iter()
                    .map(|e| match e.as_slice() {
                        [d] => Ok(*d),
                        _ => Err(anyhow!("gapped1d exponents must be one-element lists")),
                    })
                    .collect::<Result<Vec<u32>>>()?;
                Basis::gapped_1d(&flat)?
            }
            "custom" => {
                let elems: Vec<Poly<Rational>> = match (&self.elements, &self.exponents) {
                    (Some(es), _) => es
                        .iter()
                        .map(|e| Poly::parse(e, Some(self.n)))
                        .collect::<std::result::Result<_, _>>()?,
                    (None, Some(ex)) => ex
                        .iter()
                        .map(|e| {
                            if e.len() != self.n {
                                bail!("exponent vector {e:?} does not have {} entries", self.n);
                            }
                            Ok(Poly::monomial(e))
                        })
                        .collect::<Result<_>>()?,
                    (None, None) => bail!("custom basis needs elements or exponents"),
                };
                Basis::custom(self.n, elems)?
            }
            other => bail!("unknown basis kind '{other}'"),
        };
        if basis.nvars() != self.n {
            bail!(
                "basis has {} variables, declared n = {}",
                basis.nvars(),
                self.n
            );
        }
        Ok(basis)
    }

    pub fn from_basis(b: &Basis) -> Self {
        let (kind, degree, exponents, elements) = match b.kind() {
            BasisKind::FullDegree(d) => ("full", Some(*d), None, None),
            BasisKind::Homogeneous(d) => ("hom", Some(*d), None, None),
            BasisKind::Gapped1D(list) => (
                "gapped1d",
                None,
                Some(list.iter().map(|&d| vec![d]).collect()),
                None,
            ),
            BasisKind::Custom => (
                "custom",
                None,
                None,
                Some(b.elements().iter().map(ToString::to_string).collect()),
            ),
        };
        Self {
            n: b.nvars(),
            kind: kind.into(),
            degree,
            exponents,
            elements,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomJson {
    pub w: Num,
    pub x: Vec<Num>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureJson {
    pub atoms: Vec<AtomJson>,
    #[serde(default)]
    pub signed: bool,
}

impl MeasureJson {
    pub fn from_f64(mu: &AtomicMeasure<f64>) -> Self {
        Self {
            atoms: mu
                .weights()
                .iter()
                .zip(mu.points())
                .map(|(w, x)| AtomJson {
                    w: Num::Float(*w),
                    x: x.iter().map(|v| Num::Float(*v)).collect(),
                })
                .collect(),
            signed: mu.is_signed(),
        }
    }

    pub fn from_exact(mu: &AtomicMeasure<Rational>) -> Self {
        Self {
            atoms: mu
                .weights()
                .iter()
                .zip(mu.points())
                .map(|(w, x)| AtomJson {
                    w: Num::exact(w),
                    x: x.iter().map(Num::exact).collect(),
                })
                .collect(),
            signed: mu.is_signed(),
        }
    }

    fn nvars(&self) -> Result<usize> {
        let n = self.atoms.first().map_or(0, |a| a.x.len());
        if self.atoms.iter().any(|a| a.x.len() != n) {
            bail!("atoms have different dimensions");
        }
        Ok(n)
    }

    pub fn to_f64(&self) -> Result<AtomicMeasure<f64>> {
        let n = self.nvars()?;
        let w = self
            .atoms
            .iter()
            .map(|a| a.w.to_f64())
            .collect::<Result<Vec<_>>>()?;
        let x = self
            .atoms
            .iter()
            .map(|a| a.x.iter().map(Num::to_f64).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if w.iter().chain(x.iter().flatten()).any(|v| !v.is_finite()) {
            bail!("measure has non-finite entries");
        }
        Ok(AtomicMeasure::new(n, w, x, self.signed)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeqJson {
    pub basis: BasisSpec,
    pub values: Vec<Num>,
}

impl SeqJson {
    pub fn from_f64(seq: &MomentSeq<f64>) -> Self {
        Self {
            basis: BasisSpec::Object(BasisJson::from_basis(seq.basis())),
            values: seq.values().iter().map(|v| Num::Float(*v)).collect(),
        }
    }

    pub fn from_exact(seq: &MomentSeq<Rational>) -> Self {
        Self {
            basis: BasisSpec::Object(BasisJson::from_basis(seq.basis())),
            values: seq.values().iter().map(Num::exact).collect(),
        }
    }

    pub fn to_f64(&self) -> Result<MomentSeq<f64>> {
        let values = self
            .values
            .iter()
            .map(Num::to_f64)
            .collect::<Result<Vec<_>>>()?;
        Ok(MomentSeq::new(self.basis.build()?, values)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub c: String,
    pub e: Vec<u32>,
}

/// A polynomial as canonical text plus its grlex term list, leading term first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub text: String,
    pub terms: Vec<TermJson>,
}

impl PolyJson {
    pub fn new<R>(p: &Poly<R>) -> Self
    where
        R: cara_core::poly::TextCoeff + ToString,
    {
        Self {
            text: p.to_string(),
            terms: p
                .terms()
                .rev()
                .map(|(m, c): (&Monomial, &R)| TermJson {
                    c: c.to_string(),
                    e: m.exps().to_vec(),
                })
                .collect(),
        }
    }
}

/// Reads input files and remembers their SHA-256 digests for the manifest.
#[derive(Debug, Default)]
pub struct Inputs {
    pub digests: BTreeMap<String, String>,
}

impl Inputs {
    pub fn read(&mut self, path: &str) -> Result<String> {
        let bytes = fs::read(path).with_context(|| format!("cannot read '{path}'"))?;
        self.digests.insert(path.into(), hex_digest(&bytes));
        String::from_utf8(bytes).with_context(|| format!("'{path}' is not UTF-8"))
    }

    pub fn json<T: for<'de> Deserialize<'de>>(&mut self, path: &str) -> Result<T> {
        let text = self.read(path)?;
        serde_json::from_str(&text).with_context(|| format!("malformed JSON in '{path}'"))
    }

    /// A shorthand or a path to a basis JSON file.
    pub fn basis(&mut self, spec: &str) -> Result<Basis> {
        if is_shorthand(spec) {
            return parse_shorthand(spec);
        }
        let b: BasisSpec = self.json(spec)?;
        b.build()
    }

    /// A file holding polynomial text, or the text itself when no such file exists.
    pub fn poly(&mut self, arg: &str, nvars: Option<usize>) -> Result<Poly<Rational>> {
        if Path::new(arg).is_file() {
            let text = self.read(arg)?;
            return Poly::parse(text.trim(), nvars)
                .with_context(|| format!("malformed polynomial in '{arg}'"));
        }
        Poly::parse(arg, nvars)
            .with_context(|| format!("'{arg}' is neither a readable file nor a polynomial"))
    }
}

fn is_shorthand(s: &str) -> bool {
    ["full:", "hom:", "gapped1d:", "gappedhom:"]
        .iter()
        .any(|p| s.starts_with(p))
        || s == "motzkin"
}

pub fn hex_digest(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

pub fn parse_point(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .or_else(|_| parse_rational(t).map(|r| Scalar::to_f64(&r)))
                .map_err(|_| anyhow!("invalid coordinate '{t}'"))
        })
        .collect()
}
