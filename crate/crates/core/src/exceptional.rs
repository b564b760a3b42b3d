//! Exceptional correspondences on the line: the power family
//! `(x^d, x^e h(x)^d)`, the Chebyshev family `(T_d, g)` with
//! `g∘π = π∘(±x^e s^d/(s†)^d)` for `π = (x + 1/x)/2`, genus predictions for
//! the iterates `C_{F^n}`, exact genus oracles, and the numeric gates that
//! force low-genus left factors.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ellcorr::{self, EllCorrSpec, StabilityVerdict};
use crate::permgroup::{GenSet, Perm, PermGroup};
use crate::polyexact::{chebyshev, IntPoly, Place, PolyError, RatFunc};
use crate::ramcalc::{classify_signature, low_genus_threshold, Partition, Signature, SignatureClass, SphericalFamily};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExceptionalError {
    #[error("invalid family: {0}")]
    InvalidSpec(String),
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
    #[error("sign -1 with even d = {0} needs a non-real root of unity in the iterates")]
    RequiresRootOfUnity(u64),
    #[error("{0} is not a Platonic signature")]
    NotPlatonic(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Ell(#[from] ellcorr::EllError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerFamilySpec {
    pub d: u64,
    pub e: i64,
    pub h: RatFunc,
}

impl PowerFamilySpec {
    pub fn new(d: u64, e: i64, h: RatFunc) -> Result<Self, ExceptionalError> {
        if d < 2 {
            return Err(ExceptionalError::InvalidSpec(format!("d = {d} must be at least 2")));
        }
        if e == 0 || e.unsigned_abs().gcd(&d) != 1 {
            return Err(ExceptionalError::InvalidSpec(format!("e = {e} must be coprime to d = {d}")));
        }
        if h.is_zero() {
            return Err(ExceptionalError::InvalidSpec("h = 0".into()));
        }
        if h.valuation(Place::Zero) != 0 {
            return Err(ExceptionalError::InvalidSpec(format!("h = {h} must have valuation 0 at x = 0")));
        }
        Ok(PowerFamilySpec { d, e, h })
    }

    /// `g_1 = x^e h^d`.
    pub fn g1(&self) -> RatFunc {
        x_pow(self.e).mul(&self.h.pow(self.d as i64).expect("h ≠ 0"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    fn as_int(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChebyshevFamilySpec {
    pub d: u64,
    pub e: i64,
    pub s: IntPoly,
    pub sign: Sign,
}

impl ChebyshevFamilySpec {
    pub fn new(d: u64, e: i64, s: IntPoly, sign: Sign) -> Result<Self, ExceptionalError> {
        if d < 3 {
            return Err(ExceptionalError::InvalidSpec(format!("d = {d} must be at least 3")));
        }
        if e == 0 || e.unsigned_abs().gcd(&d) != 1 {
            return Err(ExceptionalError::InvalidSpec(format!("e = {e} must be coprime to d = {d}")));
        }
        if s.is_zero() || s.coeffs()[0].is_zero() {
            return Err(ExceptionalError::InvalidSpec(format!("s = {s} must not vanish at 0")));
        }
        if !s.gcd(&s.reciprocal()).is_constant() {
            return Err(ExceptionalError::InvalidSpec(format!("s = {s} shares a factor with its reciprocal")));
        }
        Ok(ChebyshevFamilySpec { d, e, s, sign })
    }

    /// `g̃_1 = ±x^e s^d/(s†)^d`.
    pub fn g1_tilde(&self) -> RatFunc {
        let q = RatFunc::new(self.s.clone(), self.s.reciprocal()).expect("s† ≠ 0");
        x_pow(self.e)
            .mul(&q.pow(self.d as i64).expect("nonzero"))
            .mul(&RatFunc::constant(BigRational::from_integer(self.sign.as_int().into())))
    }
}

fn x_pow(e: i64) -> RatFunc {
    RatFunc::x().pow(e).expect("x ≠ 0")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MValue {
    Finite(u32),
    Infinite,
}

impl fmt::Display for MValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MValue::Finite(m) => write!(f, "{m}"),
            MValue::Infinite => write!(f, "infinite"),
        }
    }
}

fn d_adic_valuation(mut k: u64, d: u64) -> u32 {
    let mut j = 0;
    while k.is_multiple_of(d) {
        k /= d;
        j += 1;
    }
    j
}

fn m_from_multiplicities(d: u64, mults: &[i64]) -> MValue {
    match mults.iter().map(|k| d_adic_valuation(k.unsigned_abs(), d)).min() {
        None => MValue::Infinite,
        Some(v) => MValue::Finite(2 + v),
    }
}

/// Largest `m` with `g_1 = x^e h̃^{d^{m−1}}`; infinite for constant `h`.
pub fn extract_m(spec: &PowerFamilySpec) -> MValue {
    let (_, factors) = spec.h.factor_multiplicities();
    let ks: Vec<i64> = factors.iter().map(|(_, k)| *k).collect();
    m_from_multiplicities(spec.d, &ks)
}

/// Same rule applied to the multiplicities of `s`.
pub fn extract_m_cheb(spec: &ChebyshevFamilySpec) -> MValue {
    let ks: Vec<i64> = spec.s.squarefree_decomposition().factors.iter().map(|(_, k)| *k as i64).collect();
    m_from_multiplicities(spec.d, &ks)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "genus", rename_all = "snake_case")]
pub enum GenusStatus {
    IrreducibleGenus(u64),
    GenusAtLeastTwo,
    Reducible,
    Unknown,
}

impl fmt::Display for GenusStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenusStatus::IrreducibleGenus(g) => write!(f, "{g}"),
            GenusStatus::GenusAtLeastTwo => write!(f, ">=2"),
            GenusStatus::Reducible => write!(f, "reducible"),
            GenusStatus::Unknown => write!(f, "?"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusVerdict {
    /// `(n, status of C_{F^n})` for `n = 1, 2, ...`.
    pub steps: Vec<(u32, GenusStatus)>,
}

impl GenusVerdict {
    pub fn status(&self, n: u32) -> Option<GenusStatus> {
        self.steps.iter().find(|(k, _)| *k == n).map(|(_, s)| *s)
    }

    /// Once the genus is at least two it stays so.
    pub fn is_monotone(&self) -> bool {
        let mut big = false;
        for (_, s) in &self.steps {
            let now = match s {
                GenusStatus::GenusAtLeastTwo => true,
                GenusStatus::IrreducibleGenus(g) => *g >= 2,
                _ => false,
            };
            if big && !now && *s != GenusStatus::Unknown {
                return false;
            }
            big |= now;
        }
        true
    }
}

impl fmt::Display for GenusVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.steps.iter().map(|(_, s)| s.to_string()).collect();
        write!(f, "[{}]", v.join(", "))
    }
}

fn predict(m: MValue, d: u64, n_max: u32) -> GenusVerdict {
    let steps = (1..=n_max)
        .map(|n| {
            let s = match m {
                MValue::Infinite => GenusStatus::IrreducibleGenus(0),
                MValue::Finite(m) if n <= m => GenusStatus::IrreducibleGenus(0),
                MValue::Finite(2) if d == 2 && n == 3 => GenusStatus::Unknown,
                MValue::Finite(_) => GenusStatus::GenusAtLeastTwo,
            };
            (n, s)
        })
        .collect();
    GenusVerdict { steps }
}

pub fn predict_power(spec: &PowerFamilySpec, n_max: u32) -> GenusVerdict {
    predict(extract_m(spec), spec.d, n_max)
}

pub fn predict_cheb(spec: &ChebyshevFamilySpec, n_max: u32) -> GenusVerdict {
    predict(extract_m_cheb(spec), spec.d, n_max)
}

/// `c·x^e·Π pᵢ^{kᵢ}` with pairwise coprime squarefree `pᵢ`, `pᵢ(0) ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredMap {
    pub constant: i64,
    pub x_exp: i64,
    pub factors: Vec<(IntPoly, i64)>,
}

impl FactoredMap {
    pub fn to_ratfunc(&self) -> RatFunc {
        let mut r = x_pow(self.x_exp).mul(&RatFunc::constant(BigRational::from_integer(self.constant.into())));
        for (p, k) in &self.factors {
            r = r.mul(&RatFunc::from_poly(p.clone()).pow(*k).expect("p ≠ 0"));
        }
        r
    }

    pub fn degree(&self) -> u64 {
        let mut zeros = self.x_exp.max(0) as u64;
        let mut poles = (-self.x_exp).max(0) as u64;
        for (p, k) in &self.factors {
            if *k > 0 {
                zeros += p.deg0() as u64 * *k as u64;
            } else {
                poles += p.deg0() as u64 * k.unsigned_abs();
            }
        }
        zeros.max(poles)
    }

    /// Orders of the map at every point of `g^{-1}{0, ∞}` (positive for
    /// zeros, negative for poles).
    pub fn orders_over_zero_infinity(&self) -> Vec<i64> {
        let mut out = Vec::new();
        if self.x_exp != 0 {
            out.push(self.x_exp);
        }
        let mut finite = self.x_exp;
        for (p, k) in &self.factors {
            out.extend(std::iter::repeat_n(*k, p.deg0()));
            finite += p.deg0() as i64 * k;
        }
        if finite != 0 {
            out.push(-finite);
        }
        out
    }

    /// Checks the structural invariants on which the order count relies.
    pub fn check(&self) -> Result<(), ExceptionalError> {
        for (i, (p, _)) in self.factors.iter().enumerate() {
            if p.coeffs()[0].is_zero() {
                return Err(ExceptionalError::OracleMismatch(format!("{p} vanishes at 0")));
            }
            if !p.gcd(&p.derivative()).is_constant() {
                return Err(ExceptionalError::OracleMismatch(format!("{p} is not squarefree")));
            }
            for (q, _) in &self.factors[i + 1..] {
                if !p.gcd(q).is_constant() {
                    return Err(ExceptionalError::OracleMismatch(format!("{p} and {q} share a root")));
                }
            }
        }
        Ok(())
    }
}

/// Genus of the normalization of `y^d = g(x)`, i.e. of the fiber product of
/// `g` with `x^d`.
pub fn cyclic_cover_genus(d: u64, g: &FactoredMap) -> Result<u64, ExceptionalError> {
    let defect: u64 = g.orders_over_zero_infinity().iter().map(|o| d - d.gcd(&o.unsigned_abs())).sum();
    genus_from_chi(2 * d as i64 - defect as i64)
}

fn genus_from_chi(chi: i64) -> Result<u64, ExceptionalError> {
    if chi % 2 != 0 || chi > 2 {
        return Err(ExceptionalError::OracleMismatch(format!("Euler characteristic {chi}")));
    }
    Ok(((2 - chi) / 2) as u64)
}

/// Largest symbolic size for which commutation is checked by expansion;
/// larger maps are compared at sample points.
const SYMBOLIC_DEGREE_LIMIT: u64 = 64;

fn sample_points() -> Vec<BigRational> {
    [(2, 3), (-5, 7), (11, 4)].iter().map(|&(a, b)| BigRational::new(a.into(), BigInt::from(b))).collect()
}

/// `f(x^d) = g(x)^d`, symbolically or at sample points.
fn commutes_with_power(f: &FactoredMap, g: &FactoredMap, d: u64) -> bool {
    if f.degree() * d <= SYMBOLIC_DEGREE_LIMIT {
        let xd = RatFunc::from_poly(IntPoly::monomial(BigInt::one(), d as usize));
        return f.to_ratfunc().compose(&xd).ok() == g.to_ratfunc().pow(d as i64).ok();
    }
    let (fr, gr) = (f.to_ratfunc(), g.to_ratfunc());
    sample_points().iter().all(|x| {
        let xd = num_traits::pow(x.clone(), d as usize);
        match (fr.eval(&xd), gr.eval(x)) {
            (Some(a), Some(b)) => a == num_traits::pow(b, d as usize),
            _ => false,
        }
    })
}

/// Normal-form iterate `g_n = x^e Π fᵢ(x^{d^{n−1}})^{aᵢ d^{m−n}}` with
/// `aᵢ = kᵢ/d^{m−2}` (constants dropped).
fn power_iterate(d: u64, e: i64, base: &[(IntPoly, i64)], m: u32, n: u32, constant: i64) -> FactoredMap {
    let step = d.pow(n - 1) as usize;
    let factors = base
        .iter()
        .map(|(f, k)| {
            let a = k / d.pow(m - 2) as i64;
            (f.compose_power(step), a * d.pow(m - n) as i64)
        })
        .collect();
    FactoredMap { constant, x_exp: e, factors }
}

fn checked_status(genus: u64) -> GenusStatus {
    GenusStatus::IrreducibleGenus(genus)
}

/// After the last exactly computed step: genus ≥ 2 persists, genus one is
/// followed by genus ≥ 2 (the iterates stay irreducible), genus zero gives no
/// information.
fn extend_by_monotonicity(steps: &mut Vec<(u32, GenusStatus)>, last: u64, from: u32, n_max: u32) {
    for n in from..=n_max {
        let s = if last >= 1 { GenusStatus::GenusAtLeastTwo } else { GenusStatus::Unknown };
        steps.push((n, s));
    }
}

/// Exact genus oracle for the power family: explicit iterates up to `n = m`,
/// commutation `g_n(x^d) = g_{n+1}^d`, and the genus of `C_{F^{n+1}}` from
/// the orders of `g_n` over `{0, ∞}`.
pub fn verify_power(spec: &PowerFamilySpec, n_max: u32) -> Result<GenusVerdict, ExceptionalError> {
    let d = spec.d;
    let (_, base) = spec.h.factor_multiplicities();
    let m = extract_m(spec);
    // The iterates are defined in normal form for n ≤ last.
    let last = match m {
        MValue::Infinite => n_max.max(1),
        MValue::Finite(m) => m.min(n_max.max(1)),
    };
    let mm = match m {
        MValue::Finite(m) => m,
        MValue::Infinite => 2,
    };
    let iterate = |n: u32| -> FactoredMap {
        match m {
            MValue::Infinite => FactoredMap { constant: 1, x_exp: spec.e, factors: vec![] },
            MValue::Finite(_) => power_iterate(d, spec.e, &base, mm, n, 1),
        }
    };

    let g1 = iterate(1);
    let ratio = spec.g1().div(&g1.to_ratfunc())?;
    if !ratio.is_constant() {
        return Err(ExceptionalError::OracleMismatch("g_1 is not x^e h^d up to a constant".into()));
    }
    let mut steps = vec![(1, checked_status(0))];
    let mut prev = g1;
    prev.check()?;
    let mut last_genus = 0;
    for n in 2..=n_max.min(last + 1) {
        // A Kummer cover y^d = g is irreducible once ord_0 g is prime to d.
        if prev.x_exp.unsigned_abs().gcd(&d) != 1 {
            return Err(ExceptionalError::OracleMismatch(format!("ord_0 g_{} shares a factor with d", n - 1)));
        }
        let genus = cyclic_cover_genus(d, &prev)?;
        steps.push((n, checked_status(genus)));
        last_genus = genus;
        if n <= last {
            let next = iterate(n);
            next.check()?;
            if !commutes_with_power(&prev, &next, d) {
                return Err(ExceptionalError::OracleMismatch(format!("g_{}(x^d) ≠ g_{n}^d", n - 1)));
            }
            prev = next;
        }
    }
    let done = steps.len() as u32;
    extend_by_monotonicity(&mut steps, last_genus, done + 1, n_max);
    Ok(GenusVerdict { steps })
}

/// Tilde-level iterate `c·x^e Π (fᵢ(x^D)/fᵢ†(x^D))^{aᵢ d^{m−n}}`, `D = d^{n−1}`.
fn cheb_iterate(spec: &ChebyshevFamilySpec, base: &[(IntPoly, u64)], m: MValue, n: u32) -> FactoredMap {
    let d = spec.d;
    let mut factors = Vec::new();
    if let MValue::Finite(m) = m {
        let step = d.pow(n - 1) as usize;
        for (f, k) in base {
            let a = (*k / d.pow(m - 2)) as i64 * d.pow(m - n) as i64;
            factors.push((f.compose_power(step), a));
            factors.push((f.reciprocal().compose_power(step), -a));
        }
    }
    FactoredMap { constant: spec.sign.as_int(), x_exp: spec.e, factors }
}

/// Ramification of `g` on the line `u = π(x)` over `±1` and `∞`, read off
/// from `g̃` with `g∘π = π∘g̃`.
pub fn descended_portrait(gt: &RatFunc) -> Result<[Partition; 3], ExceptionalError> {
    let (num, den) = (gt.num(), gt.den());
    let k = gt.degree();
    let mut over = Vec::new();
    for v in [1i64, -1] {
        let p = num - &den.scale(&BigInt::from(v));
        if p.deg0() != k {
            return Err(ExceptionalError::OracleMismatch(format!("g̃ takes the value {v} at ∞")));
        }
        let mut parts = Vec::new();
        for (f, mu) in p.squarefree_decomposition().factors {
            let fixed = [1i64, -1].iter().filter(|&&r| f.eval(&BigRational::from_integer(r.into())).is_zero()).count();
            let free = f.deg0() - fixed;
            if free % 2 != 0 {
                return Err(ExceptionalError::OracleMismatch("roots not closed under x ↦ 1/x".into()));
            }
            parts.extend(std::iter::repeat_n(2 * mu, free / 2));
            parts.extend(std::iter::repeat_n(mu, fixed));
        }
        over.push(Partition::new(parts));
    }
    // Zeros of g̃ pair with its poles under x ↦ 1/x.
    let mut zeros = num.root_partition().parts().to_vec();
    let at_inf = k - num.deg0();
    if at_inf > 0 {
        zeros.push(at_inf as u64);
    }
    let inf = Partition::new(zeros);
    let mut it = over.into_iter();
    Ok([it.next().expect("+1"), it.next().expect("-1"), inf])
}

/// Genus of the fiber product of `g` (ramification over `1, −1, ∞` given)
/// with `T_d`.
pub fn chebyshev_fiber_genus(d: u64, g_portrait: &[Partition; 3]) -> Result<u64, ExceptionalError> {
    let t = RatFunc::from_poly(chebyshev(d as usize));
    let one = BigRational::one();
    let t_parts = [t.fiber_partition(Some(&one)), t.fiber_partition(Some(&-one.clone())), t.fiber_partition(None)];
    let mut defect = 0u64;
    for (g_part, t_part) in g_portrait.iter().zip(&t_parts) {
        for &e in g_part.parts() {
            for &p in t_part.parts() {
                defect += p - p.gcd(&e);
            }
        }
    }
    genus_from_chi(2 * d as i64 - defect as i64)
}

fn reciprocal_identity(gt: &RatFunc) -> Result<bool, ExceptionalError> {
    let inv_x = RatFunc::x().inv()?;
    Ok(gt.compose(&inv_x)?.mul(gt) == RatFunc::constant(BigRational::one()))
}

/// Exact genus oracle for the Chebyshev family at the tilde level.
pub fn verify_cheb(spec: &ChebyshevFamilySpec, n_max: u32) -> Result<GenusVerdict, ExceptionalError> {
    let d = spec.d;
    if d.is_multiple_of(2) && spec.sign == Sign::Minus {
        return Err(ExceptionalError::RequiresRootOfUnity(d));
    }
    let base = spec.s.squarefree_decomposition().factors;
    let m = extract_m_cheb(spec);
    let last = match m {
        MValue::Infinite => n_max.max(1),
        MValue::Finite(m) => m.min(n_max.max(1)),
    };
    let g1 = cheb_iterate(spec, &base, m, 1);
    if g1.to_ratfunc() != spec.g1_tilde() {
        return Err(ExceptionalError::OracleMismatch("g̃_1 does not match ±x^e s^d/(s†)^d".into()));
    }
    let mut steps = vec![(1, checked_status(0))];
    let mut prev = g1;
    let mut last_genus = 0;
    for n in 2..=n_max.min(last + 1) {
        let prev_r = prev.to_ratfunc();
        if !reciprocal_identity(&prev_r)? {
            return Err(ExceptionalError::OracleMismatch(format!("g̃_{}(1/x)·g̃_{}(x) ≠ 1", n - 1, n - 1)));
        }
        if (prev_r.degree() as u64).gcd(&d) != 1 {
            return Err(ExceptionalError::OracleMismatch(format!("degree of g_{} shares a factor with d", n - 1)));
        }
        let genus = chebyshev_fiber_genus(d, &descended_portrait(&prev_r)?)?;
        steps.push((n, checked_status(genus)));
        last_genus = genus;
        if n <= last {
            let next = cheb_iterate(spec, &base, m, n);
            if !commutes_with_power(&prev, &next, d) {
                return Err(ExceptionalError::OracleMismatch(format!("g̃_{}(x^d) ≠ g̃_{n}^d", n - 1)));
            }
            prev = next;
        }
    }
    let done = steps.len() as u32;
    extend_by_monotonicity(&mut steps, last_genus, done + 1, n_max);
    Ok(GenusVerdict { steps })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Agreement {
    Agree,
    /// The prediction leaves the step open and the oracle settles it.
    Resolved,
    Disagree,
}

/// Step-wise comparison of a prediction with an oracle verdict.
pub fn compare(pred: &GenusVerdict, verified: &GenusVerdict) -> Vec<(u32, Agreement)> {
    use GenusStatus::*;
    pred.steps
        .iter()
        .filter_map(|(n, p)| verified.status(*n).map(|v| (*n, *p, v)))
        .map(|(n, p, v)| {
            let a = match (p, v) {
                (Unknown, Unknown) => Agreement::Agree,
                (Unknown, _) => Agreement::Resolved,
                (_, Unknown) => Agreement::Agree,
                (IrreducibleGenus(a), IrreducibleGenus(b)) if a == b => Agreement::Agree,
                (GenusAtLeastTwo, IrreducibleGenus(g)) if g >= 2 => Agreement::Agree,
                (GenusAtLeastTwo, GenusAtLeastTwo) => Agreement::Agree,
                (Reducible, Reducible) => Agreement::Agree,
                _ => Agreement::Disagree,
            };
            (n, a)
        })
        .collect()
}

pub fn agrees(pred: &GenusVerdict, verified: &GenusVerdict) -> bool {
    compare(pred, verified).iter().all(|(_, a)| *a != Agreement::Disagree)
}

/// Lattès pairs: genus zero while the lifted correspondence stays
/// irreducible; afterwards the line-level iterate is not determined here.
pub fn predict_lattes(spec: &EllCorrSpec, n_max: u32) -> Result<GenusVerdict, ExceptionalError> {
    let verdict = ellcorr::stability_verdict(spec)?;
    let steps = (1..=n_max)
        .map(|n| {
            let s = match verdict {
                StabilityVerdict::StableGenusOneForever => GenusStatus::IrreducibleGenus(0),
                StabilityVerdict::ReducibleAt { n: k, .. } if n < k => GenusStatus::IrreducibleGenus(0),
                StabilityVerdict::ReducibleAt { .. } => GenusStatus::Unknown,
            };
            (n, s)
        })
        .collect();
    Ok(GenusVerdict { steps })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExceptionalCase {
    Power,
    Chebyshev,
    Lattes,
}

/// Signature of `f_{1,2}` for each normal form.
pub fn two_step_signature(case: ExceptionalCase, d: u64, lattes_aut: Option<u64>) -> Option<Signature> {
    match case {
        ExceptionalCase::Power => Signature::new(vec![d * d, d * d]).ok(),
        ExceptionalCase::Chebyshev => Signature::new(vec![2, 2, d * d]).ok(),
        ExceptionalCase::Lattes => lattes_aut.and_then(ellcorr::quotient_signature),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCheck {
    pub name: String,
    /// Iterate window whose left factor is forced to be low-genus.
    pub window: String,
    pub applicable: bool,
    #[serde(with = "crate::util::int")]
    pub lhs: BigInt,
    #[serde(with = "crate::util::int")]
    pub rhs: BigInt,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateReport {
    pub d: u64,
    pub e: u64,
    pub transposed: bool,
    pub gates: Vec<GateCheck>,
    pub holds: bool,
}

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

fn gate(name: &str, window: &str, applicable: bool, lhs: BigInt, rhs: BigInt) -> GateCheck {
    let holds = lhs > rhs;
    GateCheck { name: name.into(), window: window.into(), applicable, lhs, rhs, holds }
}

/// The three degree inequalities, after transposing so that `d ≤ e`:
/// `d^10 − 170d² + 84 > 0`, `d^8 > 170d³ − 84` (`d ≥ 3`), `d^12 > 170d⁴ − 84`
/// (`d = 2`). Each one says `deg g_{1,k} ≥ low_genus_threshold(deg f_{1,j})`.
pub fn twelve_step_gate(d: u64, e: u64) -> Result<GateReport, ExceptionalError> {
    if d < 2 || e < 2 {
        return Err(ExceptionalError::InvalidSpec(format!("degrees ({d}, {e}) must both be at least 2")));
    }
    let transposed = d > e;
    let (d, e) = if transposed { (e, d) } else { (d, e) };
    let bd = big(d);
    let pw = |k: u32| num_traits::pow(bd.clone(), k as usize);
    let mut gates = vec![gate(
        "d^10 - 170d^2 + 84 > 0",
        "C_{F^12}: f_{1,2} against g_{1,10}",
        true,
        pw(10) - big(170) * pw(2) + big(84),
        BigInt::zero(),
    )];
    gates.push(gate(
        "d^8 > 170d^3 - 84",
        "C_{F^11}: f_{1,3} against g_{1,8}",
        d >= 3,
        pw(8),
        low_genus_threshold(d.pow(3)),
    ));
    gates.push(gate(
        "d^12 > 170d^4 - 84",
        "C_{F^16}: f_{1,4} against g_{1,12}",
        d == 2,
        pw(12),
        low_genus_threshold(d.pow(4)),
    ));
    let e_ok = num_traits::pow(big(e), 10) >= pw(10);
    debug_assert!(e_ok);
    let holds = gates.iter().filter(|g| g.applicable).all(|g| g.holds);
    Ok(GateReport { d, e, transposed, gates, holds })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlatonicExclusion {
    pub group: String,
    pub order: u64,
    pub d: u64,
    /// `d²` does not divide the group order.
    pub order_not_divisible: bool,
    /// There is no chain `G > H > K` with both indices equal to `d`.
    pub no_index_chain: bool,
    pub excluded: bool,
}

fn platonic_group(family: SphericalFamily) -> Option<(&'static str, GenSet)> {
    let perm = |n: usize, s: &str| Perm::parse_cycles(n, s).expect("valid");
    let (name, n, gens) = match family {
        SphericalFamily::Tetrahedral => ("A4", 4, vec![perm(4, "(0 1 2)"), perm(4, "(0 1)(2 3)")]),
        SphericalFamily::Octahedral => ("S4", 4, vec![perm(4, "(0 1 2 3)"), perm(4, "(0 1)")]),
        SphericalFamily::Icosahedral => ("A5", 5, vec![perm(5, "(0 1 2 3 4)"), perm(5, "(0 1 2)")]),
        _ => return None,
    };
    Some((name, GenSet::new(n, gens).expect("valid")))
}

/// A composite `f_{1,2} = f_1∘f_2` with two degree-`d` factors and Platonic
/// signature would need a chain of subgroups of index `d` in the Galois
/// group; none exists.
pub fn platonic_exclusion(s: &Signature, d: u64) -> Result<PlatonicExclusion, ExceptionalError> {
    let family = match classify_signature(s) {
        Ok(SignatureClass::Spherical(tag))
            if matches!(
                tag.family,
                SphericalFamily::Tetrahedral | SphericalFamily::Octahedral | SphericalFamily::Icosahedral
            ) =>
        {
            tag.family
        }
        _ => return Err(ExceptionalError::NotPlatonic(s.to_string())),
    };
    let (name, gens) = platonic_group(family).expect("Platonic");
    let g = PermGroup::new(&gens).expect("small group");
    let order = g.order() as u64;
    let order_not_divisible = !order.is_multiple_of(d * d);
    let subs = g.all_subgroups();
    let chain = subs.iter().filter(|h| h.len() as u64 * d == order).any(|h| {
        subs.iter().any(|k| k.len() as u64 * d == h.len() as u64 && k.iter().all(|x| h.binary_search(x).is_ok()))
    });
    Ok(PlatonicExclusion {
        group: name.into(),
        order,
        d,
        order_not_divisible,
        no_index_chain: !chain,
        excluded: order_not_divisible || !chain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyexact::parse_ratfunc;
    use GenusStatus::*;

    fn power(d: u64, e: i64, h: &str) -> PowerFamilySpec {
        PowerFamilySpec::new(d, e, parse_ratfunc(h).unwrap()).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(PowerFamilySpec::new(3, 3, parse_ratfunc("x-1").unwrap()).is_err());
        assert!(PowerFamilySpec::new(3, 2, parse_ratfunc("x*(x-1)").unwrap()).is_err());
        assert!(PowerFamilySpec::new(1, 2, parse_ratfunc("x-1").unwrap()).is_err());
        let s = IntPoly::from_i64(&[1, 0, 1]);
        assert!(ChebyshevFamilySpec::new(3, 1, s, Sign::Plus).is_err());
    }

    #[test]
    fn m_examples() {
        assert_eq!(extract_m(&power(3, 2, "x-1")), MValue::Finite(2));
        assert_eq!(extract_m(&power(3, 2, "(x-1)^3")), MValue::Finite(3));
        assert_eq!(extract_m(&power(2, 1, "(x-1)^2*(x+1)")), MValue::Finite(2));
        assert_eq!(extract_m(&power(2, 1, "(x-1)^4/(x+2)^2")), MValue::Finite(3));
        assert_eq!(extract_m(&power(3, 2, "5")), MValue::Infinite);
    }

    #[test]
    fn power_predictions() {
        let v = predict_power(&power(3, 2, "x-1"), 5);
        assert_eq!(v.to_string(), "[0, 0, >=2, >=2, >=2]");
        let v = predict_power(&power(3, 2, "5"), 4);
        assert!(v.steps.iter().all(|(_, s)| *s == IrreducibleGenus(0)));
        let v = predict_power(&power(2, 3, "x-1"), 5);
        assert_eq!(v.to_string(), "[0, 0, ?, >=2, >=2]");
    }

    #[test]
    fn power_oracle() {
        let v = verify_power(&power(3, 2, "x-1"), 5).unwrap();
        assert_eq!(
            v.steps,
            vec![
                (1, IrreducibleGenus(0)),
                (2, IrreducibleGenus(0)),
                (3, IrreducibleGenus(3)),
                (4, GenusAtLeastTwo),
                (5, GenusAtLeastTwo)
            ]
        );
        assert!(agrees(&predict_power(&power(3, 2, "x-1"), 5), &v));
        let v = verify_power(&power(2, 3, "x-1"), 5).unwrap();
        assert_eq!(v.status(3), Some(IrreducibleGenus(1)));
        assert_eq!(v.status(4), Some(GenusAtLeastTwo));
        let c = compare(&predict_power(&power(2, 3, "x-1"), 5), &v);
        assert_eq!(c[2], (3, Agreement::Resolved));
        let v = verify_power(&power(3, 2, "5"), 4).unwrap();
        assert!(v.steps.iter().all(|(_, s)| *s == IrreducibleGenus(0)));
        let v = verify_power(&power(3, -2, "(x-1)^3*(x+2)"), 4).unwrap();
        assert!(agrees(&predict_power(&power(3, -2, "(x-1)^3*(x+2)"), 4), &v));
    }

    #[test]
    fn factored_orders_match_expanded_fibers() {
        let g = power(3, 2, "(x-1)^2*(x+2)").g1();
        let (_, base) = parse_ratfunc("(x-1)^2*(x+2)").unwrap().factor_multiplicities();
        let f = power_iterate(3, 2, &base, 2, 1, 1);
        let mut from_factors: Vec<u64> =
            f.orders_over_zero_infinity().iter().filter(|o| **o > 0).map(|o| *o as u64).collect();
        from_factors.sort_unstable();
        assert_eq!(Partition::new(from_factors), g.fiber_partition(Some(&BigRational::zero())));
    }

    fn cheb(d: u64, e: i64, s: &[i64], sign: Sign) -> ChebyshevFamilySpec {
        ChebyshevFamilySpec::new(d, e, IntPoly::from_i64(s), sign).unwrap()
    }

    #[test]
    fn chebyshev_family() {
        let spec = cheb(3, 1, &[-2, 1], Sign::Plus);
        assert_eq!(extract_m_cheb(&spec), MValue::Finite(2));
        assert!(reciprocal_identity(&spec.g1_tilde()).unwrap());
        let v = verify_cheb(&spec, 4).unwrap();
        assert_eq!(v.status(1), Some(IrreducibleGenus(0)));
        assert_eq!(v.status(2), Some(IrreducibleGenus(0)));
        assert!(matches!(v.status(3), Some(IrreducibleGenus(g)) if g >= 2));
        assert!(agrees(&predict_cheb(&spec, 4), &v));
        let constant = cheb(5, 2, &[3], Sign::Minus);
        let v = verify_cheb(&constant, 4).unwrap();
        assert!(v.steps.iter().all(|(_, s)| *s == IrreducibleGenus(0)));
        assert!(matches!(
            verify_cheb(&cheb(4, 1, &[-2, 1], Sign::Minus), 3),
            Err(ExceptionalError::RequiresRootOfUnity(4))
        ));
    }

    #[test]
    fn gates() {
        let r = twelve_step_gate(2, 2).unwrap();
        assert_eq!(r.gates[0].lhs, BigInt::from(428));
        assert!(
            r.holds
                && r.gates[2].applicable
                && r.gates[2].lhs == BigInt::from(4096)
                && r.gates[2].rhs == BigInt::from(2636)
        );
        let r = twelve_step_gate(3, 5).unwrap();
        assert_eq!((r.gates[1].lhs.clone(), r.gates[1].rhs.clone()), (BigInt::from(6561), BigInt::from(4506)));
        assert!(r.holds);
        assert!(twelve_step_gate(7, 3).unwrap().transposed);
        assert!(twelve_step_gate(1, 3).is_err());
    }

    #[test]
    fn platonic() {
        let s = |v: &[u64]| Signature::new(v.to_vec()).unwrap();
        let a4 = platonic_exclusion(&s(&[2, 3, 3]), 2).unwrap();
        assert!(a4.excluded && a4.no_index_chain && !a4.order_not_divisible);
        let s4 = platonic_exclusion(&s(&[2, 3, 4]), 2).unwrap();
        assert!(s4.excluded && s4.no_index_chain);
        let a5 = platonic_exclusion(&s(&[2, 3, 5]), 3).unwrap();
        assert!(a5.excluded && a5.order_not_divisible);
        assert!(matches!(platonic_exclusion(&s(&[2, 2, 5]), 2), Err(ExceptionalError::NotPlatonic(_))));
    }
}
