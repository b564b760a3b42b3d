//! Command-line front end. Spec files are TOML documents with `version = 1`
//! and a `kind` key; see `specs/` in the repository for one file per kind.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::census::{self, table1_match, table1_reference};
use crate::constellation::{self, Constellation, ConstellationError};
use crate::ellcorr::{self, EllCorrSpec, EllError};
use crate::exceptional::{
    self, compare, ChebyshevFamilySpec, ExceptionalCase, ExceptionalError, GenusVerdict, MValue, PowerFamilySpec, Sign,
};
use crate::friedgset::{self, FriedError, JointAction};
use crate::permgroup::{Perm, PermError};
use crate::polyexact::{parse_poly, parse_ratfunc, PolyError};
use crate::quadorder::{is_invertible, QuadError, QuadField, QuadLattice, QuadNum};
use crate::ramcalc::{self, BoundScenario, RamError, Signature, SignatureClass};

pub const DEFAULT_CAP: usize = 200_000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cap exceeded: {0}")]
    Cap(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Schema(_) => 3,
            CliError::Domain(_) => 4,
            CliError::Cap(_) => 5,
            CliError::Internal(_) => 10,
        }
    }
}

impl From<PermError> for CliError {
    fn from(e: PermError) -> Self {
        match e {
            PermError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<ConstellationError> for CliError {
    fn from(e: ConstellationError) -> Self {
        match e {
            ConstellationError::Perm(p) => p.into(),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<FriedError> for CliError {
    fn from(e: FriedError) -> Self {
        match e {
            FriedError::Perm(p) => p.into(),
            FriedError::Constellation(c) => c.into(),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<ExceptionalError> for CliError {
    fn from(e: ExceptionalError) -> Self {
        match e {
            ExceptionalError::OracleMismatch(_) => CliError::Internal(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

macro_rules! domain_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Domain(e.to_string())
            }
        }
    )*};
}

domain_from!(EllError, QuadError, RamError, PolyError);

#[derive(Debug, Parser)]
#[command(name = "corrorbit", version, about = "Iterated correspondences on the projective line")]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Cap on the number of group elements enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classification, stability and genus predictions with oracle checks.
    Analyze { file: PathBuf },
    /// Per-iterate table up to `--n`.
    Iterate {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        n: u32,
    },
    /// Stability verdict and iterate trace.
    Stability {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        n: u32,
    },
    /// Components of the fiber product of a constellation pair.
    FiberProduct { file: PathBuf },
    /// Fried decomposition of a joint action.
    Fried { file: PathBuf },
    /// Regenerated census tables.
    Census {
        #[command(subcommand)]
        which: CensusCommand,
    },
    /// Degree gates forcing low-genus left factors.
    Gate {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        e: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum CensusCommand {
    /// Genus-zero Galois closures from the spherical groups, checked against the reference table
    Table1 {
        #[arg(long, default_value_t = 3)]
        n_min: usize,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
    },
    /// Lattès ramification types at every admissible degree
    Table2 {
        #[arg(long, default_value_t = 48)]
        d_max: u64,
    },
    /// Euclidean signatures: orders m with Σ(1 − 1/m) = 2
    Signatures,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllipticFile {
    pub spec: EllCorrSpec,
    /// Automorphism orders of `π0, π1` for the Lattès type.
    pub aut: Option<(u64, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum SpecFile {
    PowerFamily(PowerFamilySpec),
    ChebyshevFamily(ChebyshevFamilySpec),
    Elliptic(EllipticFile),
    ConstellationPair(Constellation, Constellation),
    GsetPair(JointAction),
    BoundScenario(BoundScenario),
}

impl SpecFile {
    pub fn kind(&self) -> &'static str {
        match self {
            SpecFile::PowerFamily(_) => "power_family",
            SpecFile::ChebyshevFamily(_) => "chebyshev_family",
            SpecFile::Elliptic(_) => "elliptic",
            SpecFile::ConstellationPair(..) => "constellation_pair",
            SpecFile::GsetPair(_) => "gset_pair",
            SpecFile::BoundScenario(_) => "bound_scenario",
        }
    }
}

/// Field access on a TOML table with error messages naming the field and,
/// for value-level parse errors, its line.
struct Fields<'a> {
    table: &'a toml::Table,
    prefix: String,
    text: &'a str,
}

impl<'a> Fields<'a> {
    fn name(&self, key: &str) -> String {
        if self.prefix.is_empty() {
            key.to_string()
        } else {
            format!("{}.{key}", self.prefix)
        }
    }

    fn line_of(&self, key: &str) -> usize {
        self.text
            .lines()
            .position(|l| {
                let t = l.trim_start();
                t.strip_prefix(key).is_some_and(|r| r.trim_start().starts_with('='))
            })
            .map_or(0, |i| i + 1)
    }

    fn get(&self, key: &str) -> Result<&'a toml::Value, CliError> {
        self.table.get(key).ok_or_else(|| CliError::Schema(format!("missing field `{}`", self.name(key))))
    }

    fn opt(&self, key: &str) -> Option<&'a toml::Value> {
        self.table.get(key)
    }

    fn int(&self, key: &str) -> Result<BigInt, CliError> {
        to_int(self.get(key)?).ok_or_else(|| CliError::Schema(format!("field `{}` must be an integer", self.name(key))))
    }

    fn i64(&self, key: &str) -> Result<i64, CliError> {
        i64::try_from(self.int(key)?)
            .map_err(|_| CliError::Domain(format!("field `{}` is out of range", self.name(key))))
    }

    fn u64(&self, key: &str) -> Result<u64, CliError> {
        u64::try_from(self.int(key)?)
            .map_err(|_| CliError::Domain(format!("field `{}` must be a non-negative machine integer", self.name(key))))
    }

    fn str(&self, key: &str) -> Result<&'a str, CliError> {
        self.get(key)?.as_str().ok_or_else(|| CliError::Schema(format!("field `{}` must be a string", self.name(key))))
    }

    fn strs(&self, key: &str) -> Result<Vec<&'a str>, CliError> {
        let bad = || CliError::Schema(format!("field `{}` must be an array of strings", self.name(key)));
        self.get(key)?.as_array().ok_or_else(bad)?.iter().map(|v| v.as_str().ok_or_else(bad)).collect()
    }

    fn sub(&self, key: &str) -> Result<Fields<'a>, CliError> {
        let t = self
            .get(key)?
            .as_table()
            .ok_or_else(|| CliError::Schema(format!("field `{}` must be a table", self.name(key))))?;
        Ok(Fields { table: t, prefix: self.name(key), text: self.text })
    }

    fn value_error(&self, key: &str, msg: impl std::fmt::Display) -> CliError {
        CliError::Parse(format!("line {}, field `{}`: {msg}", self.line_of(key), self.name(key)))
    }

    fn poly_error(&self, key: &str, e: PolyError) -> CliError {
        match e {
            PolyError::Parse { col, msg } => CliError::Parse(format!(
                "line {}, column {col} of field `{}`: {msg}",
                self.line_of(key),
                self.name(key)
            )),
            other => CliError::Domain(format!("field `{}`: {other}", self.name(key))),
        }
    }
}

fn to_int(v: &toml::Value) -> Option<BigInt> {
    match v {
        toml::Value::Integer(i) => Some(BigInt::from(*i)),
        toml::Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

pub fn parse_spec(text: &str) -> Result<SpecFile, CliError> {
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| CliError::Parse(e.to_string().trim().into()))?;
    let f = Fields { table: &table, prefix: String::new(), text };
    if f.int("version")? != BigInt::from(1) {
        return Err(CliError::Schema("unsupported `version`; expected 1".into()));
    }
    match f.str("kind")? {
        "power_family" => {
            let h = parse_ratfunc(f.str("h")?).map_err(|e| f.poly_error("h", e))?;
            Ok(SpecFile::PowerFamily(PowerFamilySpec::new(f.u64("d")?, f.i64("e")?, h)?))
        }
        "chebyshev_family" => {
            let s = parse_poly(f.str("s")?).map_err(|e| f.poly_error("s", e))?;
            let sign = match f.opt("sign").map(|v| v.as_str()) {
                None | Some(Some("+")) => Sign::Plus,
                Some(Some("-")) => Sign::Minus,
                _ => return Err(CliError::Schema("field `sign` must be \"+\" or \"-\"".into())),
            };
            Ok(SpecFile::ChebyshevFamily(ChebyshevFamilySpec::new(f.u64("d")?, f.i64("e")?, s, sign)?))
        }
        "elliptic" => parse_elliptic(&f).map(SpecFile::Elliptic),
        "constellation_pair" => {
            Ok(SpecFile::ConstellationPair(parse_constellation(&f.sub("a")?)?, parse_constellation(&f.sub("b")?)?))
        }
        "gset_pair" => {
            let x1 = parse_perms(&f, "x1", f.u64("n1")? as usize)?;
            let x2 = parse_perms(&f, "x2", f.u64("n2")? as usize)?;
            Ok(SpecFile::GsetPair(JointAction::new(x1, x2)?))
        }
        "bound_scenario" => {
            let bad = || CliError::Schema("field `signature` must be an array of integers ≥ 2".into());
            let orders = f
                .get("signature")?
                .as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|v| to_int(v).and_then(|i| u64::try_from(i).ok()).ok_or_else(bad))
                .collect::<Result<Vec<_>, _>>()?;
            let signature = Signature::new(orders)?;
            Ok(SpecFile::BoundScenario(BoundScenario { d: f.u64("d")?, e: f.u64("e")?, signature }))
        }
        other => Err(CliError::Schema(format!("unknown kind `{other}`"))),
    }
}

fn parse_perms(f: &Fields, key: &str, n: usize) -> Result<Vec<Perm>, CliError> {
    f.strs(key)?.into_iter().map(|s| Perm::parse_cycles(n, s).map_err(|e| f.value_error(key, e))).collect()
}

fn parse_constellation(f: &Fields) -> Result<Constellation, CliError> {
    let degree = f.u64("degree")? as usize;
    let monodromy = parse_perms(f, "monodromy", degree)?;
    let labels: Vec<String> = match f.opt("labels") {
        Some(_) => f.strs("labels")?.into_iter().map(String::from).collect(),
        None => (0..monodromy.len()).map(|i| i.to_string()).collect(),
    };
    Ok(Constellation::new(degree, labels, monodromy)?)
}

fn parse_quad(f: &Fields, key: &str, d: i64) -> Result<QuadNum, CliError> {
    QuadNum::parse(d, f.str(key)?).map_err(|e| f.value_error(key, e))
}

fn parse_lattice(f: &Fields, key: &str, field: &QuadField) -> Result<QuadLattice, CliError> {
    match f.opt(key) {
        None => Ok(field.maximal_order().lattice),
        Some(toml::Value::Table(_)) => {
            let sub = f.sub(key)?;
            let f = sub.u64("conductor")?;
            if f == 0 {
                return Err(CliError::Domain(format!("field `{key}.conductor` must be positive")));
            }
            Ok(field.order_of_conductor(f).lattice)
        }
        Some(toml::Value::Array(_)) => {
            let gens = f
                .strs(key)?
                .into_iter()
                .map(|s| QuadNum::parse(field.d, s).map_err(|e| f.value_error(key, e)))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(QuadLattice::from_generators(*field, &gens)?)
        }
        Some(_) => {
            Err(CliError::Schema(format!("field `{key}` must be an array of generators or a table with `conductor`")))
        }
    }
}

fn parse_elliptic(f: &Fields) -> Result<EllipticFile, CliError> {
    let field = QuadField::new(f.i64("field")?)?;
    let lam0 = parse_lattice(f, "lam0", &field)?;
    let lam1 = parse_lattice(f, "lam1", &field)?;
    let alpha = parse_quad(f, "alpha", field.d)?;
    let beta = parse_quad(f, "beta", field.d)?;
    let mut spec = EllCorrSpec::new(field, lam0, lam1, alpha, beta)?;
    if f.opt("gamma").is_some() || f.opt("delta").is_some() {
        spec = spec.with_translations(parse_quad(f, "gamma", field.d)?, parse_quad(f, "delta", field.d)?);
    }
    let aut = match (f.opt("aut0"), f.opt("aut1")) {
        (None, None) => None,
        _ => Some((f.u64("aut0")?, f.u64("aut1")?)),
    };
    Ok(EllipticFile { spec, aut })
}

/// A command's output: JSON value plus an optional plain-text rendering
/// (defaults to an indented listing of the same value).
pub struct Report {
    pub value: Value,
    pub text: Option<String>,
}

impl Report {
    fn new(value: Value) -> Self {
        Report { value, text: None }
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let mut s = serde_json::to_string_pretty(&self.value).expect("JSON values serialize");
            s.push('\n');
            return s;
        }
        if let Some(t) = &self.text {
            return t.clone();
        }
        let mut out = String::new();
        render_text(&self.value, 0, &mut out);
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render_text(x, indent + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn m_value(m: MValue) -> Value {
    match m {
        MValue::Finite(m) => json!(m),
        MValue::Infinite => json!("infinite"),
    }
}

fn verdict_rows(pred: &GenusVerdict, verified: &GenusVerdict) -> Value {
    let agreement = compare(pred, verified);
    let rows: Vec<Value> = pred
        .steps
        .iter()
        .map(|(n, p)| {
            let v = verified.status(*n);
            let a = agreement.iter().find(|(k, _)| k == n).map(|(_, a)| *a);
            json!({ "n": n, "predicted": to_value(p), "verified": to_value(&v), "agreement": to_value(&a) })
        })
        .collect();
    Value::Array(rows)
}

fn default_n(m: MValue) -> u32 {
    match m {
        MValue::Finite(m) => m + 2,
        MValue::Infinite => 4,
    }
}

fn family_report(kind: &str, header: Value, m: MValue, d: u64, pred: GenusVerdict, verified: GenusVerdict) -> Value {
    let case = if kind == "power_family" { ExceptionalCase::Power } else { ExceptionalCase::Chebyshev };
    let mut v = header;
    let o = v.as_object_mut().expect("object");
    o.insert("m".into(), m_value(m));
    o.insert("case".into(), to_value(&case));
    o.insert(
        "two_step_signature".into(),
        to_value(&exceptional::two_step_signature(case, d, None).map(|s| s.to_string())),
    );
    o.insert("stable".into(), json!(true));
    o.insert("predicted".into(), json!(pred.to_string()));
    o.insert("verified".into(), json!(verified.to_string()));
    o.insert("monotone".into(), json!(verified.is_monotone()));
    o.insert("agrees".into(), json!(exceptional::agrees(&pred, &verified)));
    o.insert("steps".into(), verdict_rows(&pred, &verified));
    v
}

fn power_report(spec: &PowerFamilySpec, n: Option<u32>) -> Result<Value, CliError> {
    let m = exceptional::extract_m(spec);
    let n = n.unwrap_or(default_n(m));
    let pred = exceptional::predict_power(spec, n);
    let verified = exceptional::verify_power(spec, n)?;
    let header = json!({ "kind": "power_family", "d": spec.d, "e": spec.e, "h": spec.h.to_string(), "g1": spec.g1().to_string() });
    Ok(family_report("power_family", header, m, spec.d, pred, verified))
}

fn cheb_report(spec: &ChebyshevFamilySpec, n: Option<u32>) -> Result<Value, CliError> {
    let m = exceptional::extract_m_cheb(spec);
    let n = n.unwrap_or(default_n(m));
    let pred = exceptional::predict_cheb(spec, n);
    let verified = exceptional::verify_cheb(spec, n)?;
    let sign = if spec.sign == Sign::Plus { "+" } else { "-" };
    let header = json!({
        "kind": "chebyshev_family", "d": spec.d, "e": spec.e, "s": spec.s.to_string(), "sign": sign,
        "g1_tilde": spec.g1_tilde().to_string(),
    });
    Ok(family_report("chebyshev_family", header, m, spec.d, pred, verified))
}

fn elliptic_header(e: &EllipticFile) -> Result<Value, CliError> {
    let s = &e.spec;
    let (d0, d1) = ellcorr::degrees(s)?;
    let (o1, j) = ellcorr::multiplier_ideal(s)?;
    let invertible = is_invertible(&j, &o1)?;
    Ok(json!({
        "kind": "elliptic",
        "field": s.field.d,
        "lam0": s.lam0.to_string(),
        "lam1": s.lam1.to_string(),
        "alpha": s.alpha.to_string(),
        "beta": s.beta.to_string(),
        "degrees": [d0, d1],
        "multiplier_ring": o1.lattice.to_string(),
        "conductor": o1.conductor().to_string(),
        "multiplier_ideal": j.to_string(),
        "ideal_invertible": invertible,
    }))
}

fn trace(steps: &[ellcorr::IterateStep]) -> Value {
    Value::Array(
        steps
            .iter()
            .map(|s| json!({ "n": s.n, "lattice": s.lattice.to_string(), "irreducible": s.irreducible, "degrees": [s.degrees.0, s.degrees.1] }))
            .collect(),
    )
}

fn elliptic_analyze(e: &EllipticFile) -> Result<Value, CliError> {
    let mut v = elliptic_header(e)?;
    let verdict = ellcorr::stability_verdict(&e.spec)?;
    let steps = ellcorr::iterate_simulation(&e.spec, 8)?;
    let o = v.as_object_mut().expect("object");
    o.insert("case".into(), to_value(&ExceptionalCase::Lattes));
    o.insert("verdict".into(), to_value(&verdict));
    o.insert("first_reducible".into(), to_value(&ellcorr::first_reducible(&steps)));
    o.insert("genus_one_irreducible".into(), json!(steps[0].irreducible));
    if let Some((a0, a1)) = e.aut {
        let q = ellcorr::lattes_query_from_lattices(&e.spec.lam0, &e.spec.lam1, &e.spec.alpha, a0, a1)?;
        let row = ellcorr::lattes_row(&q)?;
        let portrait = row.instantiate(q.d)?;
        let ty: Vec<String> = portrait.branches.iter().map(|b| b.partition.to_string()).collect();
        o.insert(
            "lattes".into(),
            json!({
                "sig0": q.sig0.to_string(), "sig1": q.sig1.to_string(), "degree": q.d, "row": row.row,
                "kernel": to_value(&q.kernel), "ramification": ty,
            }),
        );
        let lattes_pred = exceptional::predict_lattes(&e.spec, 8)?;
        o.insert("predicted".into(), json!(lattes_pred.to_string()));
        o.insert(
            "two_step_signature".into(),
            to_value(&exceptional::two_step_signature(ExceptionalCase::Lattes, 0, Some(a0)).map(|s| s.to_string())),
        );
    }
    Ok(v)
}

fn fiber_report(a: &Constellation, b: &Constellation) -> Result<Value, CliError> {
    let (irreducible, reason) = constellation::is_irreducible_pair(a, b)?;
    let (a, b) = constellation::align(a, b);
    let comps = constellation::fiber_product(&a, &b)?;
    let mut components = Vec::new();
    for c in &comps {
        let p = c.constellation.portrait()?;
        components.push(json!({
            "degree": c.constellation.degree,
            "genus": c.constellation.genus()?,
            "ramification": p.branches.iter().map(|b| json!({ "label": b.label, "partition": b.partition.to_string() })).collect::<Vec<_>>(),
        }));
    }
    Ok(json!({
        "kind": "constellation_pair",
        "degrees": [a.degree, b.degree],
        "genera": [a.genus()?, b.genus()?],
        "irreducible": irreducible,
        "reason": to_value(&reason),
        "component_count": comps.len(),
        "components": components,
        "cycle_types": to_value(&constellation::fiber_cycle_types(&comps).into_iter().map(|(k, v)| (k, v.to_string())).collect::<std::collections::BTreeMap<_, _>>()),
    }))
}

/// Diagonal action on `X × Y`, the pair `(x, y)` numbered `x·|Y| + y`.
fn product_action(xs: &[Perm], ys: &[Perm], m: usize) -> Vec<Perm> {
    xs.iter()
        .zip(ys)
        .map(|(s, t)| {
            let n = s.degree();
            Perm::from_images((0..n * m).map(|x| (s.apply(x / m) * m + t.apply(x % m)) as u32).collect())
                .expect("product action")
        })
        .collect()
}

fn fried_report(ja: &JointAction, cap: usize) -> Result<Value, CliError> {
    let r = friedgset::fried_decompose(ja, cap)?;
    let check = friedgset::verify_fried(ja, &r, cap)?;
    let orbits_x = crate::permgroup::orbits(&product_action(&ja.x1, &ja.x2, ja.n2), ja.n1 * ja.n2).len();
    let orbits_y =
        crate::permgroup::orbits(&product_action(&r.y1_action, &r.y2_action, r.y2_size), r.y1_size * r.y2_size).len();
    Ok(json!({
        "kind": "gset_pair",
        "sizes": [ja.n1, ja.n2],
        "quotient_sizes": [r.y1_size, r.y2_size],
        "h1": r.h1,
        "h2": r.h2,
        "steps": r.steps,
        "orbits_x": orbits_x,
        "orbits_y": orbits_y,
        "equivariant": check.equivariant,
        "kernels_equal": check.kernels_equal,
        "orbits_bijective": check.orbits_bijective,
        "verified": check.ok(),
    }))
}

fn class_name(s: &Signature) -> String {
    match ramcalc::classify_signature(s) {
        Ok(SignatureClass::Spherical(tag)) => format!("spherical {tag}"),
        Ok(SignatureClass::Euclidean) => "euclidean".into(),
        Ok(SignatureClass::Hyperbolic) => "hyperbolic".into(),
        Err(e) => e.to_string(),
    }
}

fn bound_report(b: &BoundScenario) -> Result<Value, CliError> {
    let bdd = match ramcalc::bdd_genus_check(b.d, b.e, &b.signature) {
        Ok(x) => json!(x),
        Err(e) => json!(e.to_string()),
    };
    let mut v = json!({
        "kind": "bound_scenario",
        "d": b.d,
        "e": b.e,
        "signature": b.signature.to_string(),
        "weight": crate::util::rat_to_string(&b.signature.weight()),
        "class": class_name(&b.signature),
        "bounded_genus_check": bdd,
        "threshold": ramcalc::low_genus_threshold(b.d).to_string(),
        "low_genus_gate": ramcalc::low_genus_gate(b.d, &BigInt::from(b.e)),
    });
    if let Ok(p) = exceptional::platonic_exclusion(&b.signature, b.d) {
        v.as_object_mut().expect("object").insert("platonic_exclusion".into(), to_value(&p));
    }
    Ok(v)
}

fn wrong_kind(cmd: &str, spec: &SpecFile, allowed: &str) -> CliError {
    CliError::Schema(format!("`{cmd}` needs a spec of kind {allowed}, got `{}`", spec.kind()))
}

fn load(path: &PathBuf) -> Result<SpecFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    parse_spec(&text)
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let cap = cli.cap;
    match &cli.command {
        Command::Analyze { file } => {
            let spec = load(file)?;
            let v = match &spec {
                SpecFile::PowerFamily(s) => power_report(s, None)?,
                SpecFile::ChebyshevFamily(s) => cheb_report(s, None)?,
                SpecFile::Elliptic(e) => elliptic_analyze(e)?,
                SpecFile::ConstellationPair(a, b) => fiber_report(a, b)?,
                SpecFile::GsetPair(ja) => fried_report(ja, cap)?,
                SpecFile::BoundScenario(b) => bound_report(b)?,
            };
            Ok(Report::new(v))
        }
        Command::Iterate { file, n } => {
            let spec = load(file)?;
            let v = match &spec {
                SpecFile::PowerFamily(s) => power_report(s, Some(*n))?,
                SpecFile::ChebyshevFamily(s) => cheb_report(s, Some(*n))?,
                SpecFile::Elliptic(e) => {
                    json!({ "kind": "elliptic", "steps": trace(&ellcorr::iterate_simulation(&e.spec, *n)?) })
                }
                other => return Err(wrong_kind("iterate", other, "power_family, chebyshev_family or elliptic")),
            };
            Ok(Report::new(v))
        }
        Command::Stability { file, n } => {
            let spec = load(file)?;
            let SpecFile::Elliptic(e) = &spec else {
                return Err(wrong_kind("stability", &spec, "elliptic"));
            };
            let steps = ellcorr::iterate_simulation(&e.spec, *n)?;
            let mut v = elliptic_header(e)?;
            let o = v.as_object_mut().expect("object");
            o.insert("verdict".into(), to_value(&ellcorr::stability_verdict(&e.spec)?));
            o.insert("first_reducible".into(), to_value(&ellcorr::first_reducible(&steps)));
            o.insert("trace".into(), trace(&steps));
            Ok(Report::new(v))
        }
        Command::FiberProduct { file } => match load(file)? {
            SpecFile::ConstellationPair(a, b) => Ok(Report::new(fiber_report(&a, &b)?)),
            other => Err(wrong_kind("fiber-product", &other, "constellation_pair")),
        },
        Command::Fried { file } => match load(file)? {
            SpecFile::GsetPair(ja) => Ok(Report::new(fried_report(&ja, cap)?)),
            SpecFile::ConstellationPair(a, b) => {
                let ja = JointAction::from_constellations(&a, &b)?;
                let mut v = fried_report(&ja, cap)?;
                let (k1, k2) = friedgset::cover_fried(&a, &b, cap)?;
                v.as_object_mut().expect("object").insert("cover_fried".into(), json!([k1, k2]));
                Ok(Report::new(v))
            }
            other => Err(wrong_kind("fried", &other, "gset_pair or constellation_pair")),
        },
        Command::Census { which } => census_report(which),
        Command::Gate { d, e } => {
            let r = exceptional::twelve_step_gate(*d, *e)?;
            Ok(Report::new(to_value(&r)))
        }
    }
}

fn census_report(which: &CensusCommand) -> Result<Report, CliError> {
    match which {
        CensusCommand::Table1 { n_min, n_max } => {
            let rows = census::table1(*n_min..=*n_max).map_err(|e| CliError::Internal(e.to_string()))?;
            let diff = table1_match(&table1_reference(*n_min..=*n_max), &rows);
            let text = rows.iter().map(|r| r.tsv() + "\n").collect::<String>()
                + &format!("# {} rows, {} differences from the reference\n", rows.len(), diff.len());
            let value = json!({ "rows": to_value(&rows), "differences": to_value(&diff) });
            Ok(Report { value, text: Some(text) })
        }
        CensusCommand::Table2 { d_max } => {
            let entries = census::table2(*d_max);
            let failures = entries.iter().filter(|e| !e.passes()).count();
            let text = entries.iter().map(|e| e.tsv() + "\n").collect::<String>()
                + &format!("# {} instances, {failures} failures\n", entries.len());
            Ok(Report { value: json!({ "entries": to_value(&entries), "failures": failures }), text: Some(text) })
        }
        CensusCommand::Signatures => {
            let sigs: Vec<String> = census::euclidean_signatures().iter().map(|s| s.to_string()).collect();
            let text = sigs.iter().map(|s| format!("{s}\n")).collect();
            Ok(Report { value: json!({ "euclidean": sigs }), text: Some(text) })
        }
    }
}

/// Runs the CLI on `args`, writing the report to `out` and diagnostics to
/// `err`. Returns the process exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let _ = out.write_all(report.render(cli.json).as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(std::iter::once("corrorbit").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn with_file(text: &str, f: impl FnOnce(&str)) {
        let dir = std::env::temp_dir().join(format!("corrorbit-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join(format!("{:x}.toml", text.len() * 7919 + text.bytes().map(|b| b as usize).sum::<usize>()));
        std::fs::write(&path, text).unwrap();
        f(path.to_str().unwrap());
        let _ = std::fs::remove_file(path);
    }

    const POWER: &str = "version = 1\nkind = \"power_family\"\nd = 3\ne = 2\nh = \"x-1\"\n";

    #[test]
    fn parse_examples() {
        let s = parse_spec("version = 1\nkind = \"power_family\"\nd = \"3\"\ne = 2\nh = \"(x-1)^3\"\n").unwrap();
        let SpecFile::PowerFamily(p) = s else { panic!() };
        assert_eq!(p.h, parse_ratfunc("(x-1)^3").unwrap());
        let s = parse_spec("version = 1\nkind = \"elliptic\"\nfield = -1\nalpha = \"1+1i\"\nbeta = \"2\"\n").unwrap();
        assert!(matches!(s, SpecFile::Elliptic(_)));
        let e = parse_spec("version = 1\nkind = \"power_family\"\nd = 3\ne = 2\nh = \"x^-2\"\n").unwrap_err();
        assert!(matches!(e, CliError::Parse(ref m) if m.contains("line 5")), "{e}");
        assert!(matches!(parse_spec("version = 1\nkind = \"power_family\"\nd = 3\n"), Err(CliError::Schema(_))));
        assert!(matches!(parse_spec("version = 2\nkind = \"gset_pair\"\n"), Err(CliError::Schema(_))));
        assert!(matches!(parse_spec("version = = 1"), Err(CliError::Parse(_))));
        assert!(matches!(
            parse_spec("version = 1\nkind = \"power_family\"\nd = 3\ne = 3\nh = \"x-1\"\n"),
            Err(CliError::Domain(_))
        ));
    }

    #[test]
    fn analyze_power_json() {
        with_file(POWER, |p| {
            let (code, out, _) = run_args(&["analyze", p, "--json"]);
            assert_eq!(code, 0);
            let v: Value = serde_json::from_str(&out).unwrap();
            assert_eq!(v["m"], json!(2));
            assert_eq!(v["predicted"], json!("[0, 0, >=2, >=2]"));
            assert_eq!(v["agrees"], json!(true));
            assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", out);
            let (code, text, _) = run_args(&["analyze", p]);
            assert_eq!(code, 0);
            assert!(text.contains("m: 2"));
        });
    }

    #[test]
    fn census_and_gate() {
        let (code, out, _) = run_args(&["census", "signatures"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 4);
        let (_, out, _) = run_args(&["gate", "--d", "2", "--e", "2", "--json"]);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["gates"][0]["lhs"], json!("428"));
        assert_eq!(v["holds"], json!(true));
        let (code, out, _) = run_args(&["census", "table1"]);
        assert_eq!(code, 0);
        assert!(out.contains("0 differences"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_args(&["analyze", "/nonexistent/spec.toml"]).0, 2);
        assert_eq!(run_args(&["bogus"]).0, 2);
        assert_eq!(run_args(&["gate", "--d", "1", "--e", "3"]).0, 4);
        with_file("version = 1\nkind = \"power_family\"\nd = 3\n", |p| assert_eq!(run_args(&["analyze", p]).0, 3));
        with_file(POWER, |p| assert_eq!(run_args(&["stability", p]).0, 3));
        let big = "version = 1\nkind = \"gset_pair\"\nn1 = 8\nn2 = 8\nx1 = [\"(0 1 2 3 4 5 6 7)\", \"(0 1)\"]\nx2 = [\"(0 1 2 3 4 5 6 7)\", \"(0 1)\"]\n";
        with_file(big, |p| assert_eq!(run_args(&["fried", p, "--cap", "100"]).0, 5));
    }
}
