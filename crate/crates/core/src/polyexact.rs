//! Exact univariate polynomials over ℤ and rational functions over ℚ.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ramcalc::Partition;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("inexact polynomial division")]
    NotDivisible,
    #[error("not a {k}-th power: multiplicity {mult} is not divisible by {k}")]
    NotAPower { k: u64, mult: u64 },
    #[error("parse error at column {col}: {msg}")]
    Parse { col: usize, msg: String },
}

/// Polynomial with integer coefficients, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntPoly {
    #[serde(with = "crate::util::int_vec")]
    coeffs: Vec<BigInt>,
}

type QVec = Vec<BigRational>;

fn q_trim(mut v: QVec) -> QVec {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn q_deg(v: &QVec) -> isize {
    v.len() as isize - 1
}

fn q_sub(a: &QVec, b: &QVec) -> QVec {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    q_trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

fn q_derivative(a: &QVec) -> QVec {
    q_trim(a.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
}

fn q_monic(a: &QVec) -> QVec {
    match a.last() {
        Some(lc) => a.iter().map(|c| c / lc).collect(),
        None => vec![],
    }
}

fn q_divmod(a: &QVec, b: &QVec) -> (QVec, QVec) {
    let db = q_deg(b);
    let mut r = a.clone();
    if q_deg(a) < db {
        return (vec![], r);
    }
    let lc = b.last().expect("nonzero divisor").clone();
    let mut q = vec![BigRational::zero(); (q_deg(a) - db + 1) as usize];
    while q_deg(&r) >= db {
        let k = (q_deg(&r) - db) as usize;
        let c = r.last().unwrap() / &lc;
        for (i, bc) in b.iter().enumerate() {
            r[i + k] = &r[i + k] - &c * bc;
        }
        q[k] = c;
        r = q_trim(r);
    }
    (q_trim(q), r)
}

fn q_gcd(a: &QVec, b: &QVec) -> QVec {
    let (mut x, mut y) = (q_trim(a.clone()), q_trim(b.clone()));
    while !y.is_empty() {
        let (_, r) = q_divmod(&x, &y);
        x = y;
        y = q_monic(&r);
    }
    q_monic(&x)
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        IntPoly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn x() -> Self {
        IntPoly::from_i64(&[0, 1])
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    /// `c·x^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k];
        v.push(c);
        IntPoly::new(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as 0.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Non-negative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides by the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.lc().is_negative() {
            c = -c;
        }
        IntPoly::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, k: u64) -> IntPoly {
        let mut result = IntPoly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    /// `self(q(x))`
    pub fn compose(&self, q: &IntPoly) -> IntPoly {
        self.coeffs.iter().rev().fold(IntPoly::zero(), |acc, c| &(&acc * q) + &IntPoly::constant(c.clone()))
    }

    /// `self(x^k)`
    pub fn compose_power(&self, k: usize) -> IntPoly {
        let mut v = vec![BigInt::zero(); self.deg0() * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * k] = c.clone();
        }
        IntPoly::new(v)
    }

    /// `x^{deg} · self(1/x)`: coefficient reversal.
    pub fn reciprocal(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// Order of vanishing at 0.
    pub fn valuation_at_zero(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Order of vanishing at a rational point.
    pub fn multiplicity_at(&self, r: &BigRational) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = IntPoly::new(vec![-r.numer().clone(), r.denom().clone()]);
        let mut p = self.clone();
        let mut k = 0;
        while let Ok(q) = p.div_exact(&lin) {
            p = q;
            k += 1;
        }
        k
    }

    fn to_q(&self) -> QVec {
        self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect()
    }

    fn from_q_primitive(v: &QVec) -> IntPoly {
        let l = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        IntPoly::new(v.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect()).primitive()
    }

    /// Division over ℚ. The quotient and remainder are returned scaled to
    /// integer polynomials: `lc(d)^k · self = q·d + r` with `k` the pseudo
    /// division exponent.
    pub fn pseudo_divmod(&self, d: &IntPoly) -> Result<(IntPoly, IntPoly, u32), PolyError> {
        if d.is_zero() {
            return Err(PolyError::DivisionByZeroPoly);
        }
        let dd = d.deg0();
        let mut r = self.clone();
        let mut q = IntPoly::zero();
        let lc = d.lc();
        let mut k = 0;
        while !r.is_zero() && r.deg0() >= dd {
            let shift = r.deg0() - dd;
            let t = IntPoly::monomial(r.lc(), shift);
            q = &q.scale(&lc) + &t;
            r = &r.scale(&lc) - &(&t * d);
            k += 1;
        }
        Ok((q, r, k))
    }

    /// Rational quotient and remainder of `self / d`.
    pub fn divmod(&self, d: &IntPoly) -> Result<(Vec<BigRational>, Vec<BigRational>), PolyError> {
        if d.is_zero() {
            return Err(PolyError::DivisionByZeroPoly);
        }
        Ok(q_divmod(&self.to_q(), &d.to_q()))
    }

    /// Exact quotient in ℤ[x], or an error when `d` does not divide `self`.
    pub fn div_exact(&self, d: &IntPoly) -> Result<IntPoly, PolyError> {
        let (q, r) = self.divmod(d)?;
        if !r.is_empty() || q.iter().any(|c| !c.is_integer()) {
            return Err(PolyError::NotDivisible);
        }
        Ok(IntPoly::new(q.into_iter().map(|c| c.to_integer()).collect()))
    }

    /// Primitive gcd with positive leading coefficient; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let g = q_gcd(&self.to_q(), &other.to_q());
        IntPoly::from_q_primitive(&g)
    }

    /// Yun decomposition `self = c · Π fᵢ^i` with primitive, pairwise coprime,
    /// squarefree `fᵢ` of positive leading coefficient.
    pub fn squarefree_decomposition(&self) -> SquarefreeDecomposition {
        if self.is_constant() {
            return SquarefreeDecomposition {
                constant: BigRational::from_integer(self.coeffs.first().cloned().unwrap_or_default()),
                factors: vec![],
            };
        }
        let f = q_monic(&self.to_q());
        let fp = q_derivative(&f);
        let a0 = q_gcd(&f, &fp);
        let mut b = q_divmod(&f, &a0).0;
        let c = q_divmod(&fp, &a0).0;
        let mut d = q_sub(&c, &q_derivative(&b));
        let mut factors = Vec::new();
        let mut i = 1u64;
        while q_deg(&b) > 0 {
            let a = q_gcd(&b, &d);
            if q_deg(&a) > 0 {
                factors.push((IntPoly::from_q_primitive(&a), i));
            }
            b = q_divmod(&b, &a).0;
            let c = q_divmod(&d, &a).0;
            d = q_sub(&c, &q_derivative(&b));
            i += 1;
        }
        let denom = factors.iter().fold(BigInt::one(), |acc, (p, k)| acc * Pow::pow(&p.lc(), *k));
        SquarefreeDecomposition { constant: BigRational::new(self.lc(), denom), factors }
    }

    /// Root multiplicities as a partition of the degree (roots over ℚ̄).
    pub fn root_partition(&self) -> Partition {
        let sf = self.squarefree_decomposition();
        let mut parts = Vec::new();
        for (p, k) in &sf.factors {
            parts.extend(std::iter::repeat_n(*k, p.deg0()));
        }
        Partition::new(parts)
    }
}

trait Pow {
    fn pow(&self, k: u64) -> Self;
}

impl Pow for BigInt {
    fn pow(&self, k: u64) -> BigInt {
        num_traits::pow(self.clone(), k as usize)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquarefreeDecomposition {
    #[serde(with = "crate::util::rat")]
    pub constant: BigRational,
    /// `(factor, multiplicity)` in increasing multiplicity.
    pub factors: Vec<(IntPoly, u64)>,
}

impl SquarefreeDecomposition {
    pub fn expand(&self) -> (BigRational, IntPoly) {
        let p = self.factors.iter().fold(IntPoly::one(), |acc, (f, k)| &acc * &f.pow(*k));
        (self.constant.clone(), p)
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = BigInt::zero();
        IntPoly::new((0..n).map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, o: &IntPoly) -> IntPoly {
        self + &(-o)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntPoly::new(v)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            if i == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{a}*{mono}")?;
            }
        }
        Ok(())
    }
}

/// Quotient of integer polynomials in lowest terms: coprime, the
/// denominator has positive leading coefficient and the two contents are coprime.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RatFunc {
    num: IntPoly,
    den: IntPoly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Place {
    Zero,
    Infinity,
}

impl RatFunc {
    pub fn new(num: IntPoly, den: IntPoly) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZeroPoly);
        }
        if num.is_zero() {
            return Ok(RatFunc { num, den: IntPoly::one() });
        }
        let g = num.gcd(&den);
        let mut n = num.div_exact(&g).expect("gcd divides");
        let mut d = den.div_exact(&g).expect("gcd divides");
        let c = n.content().gcd(&d.content());
        let c = if d.lc().is_negative() { -c } else { c };
        n = IntPoly::new(n.coeffs.iter().map(|x| x / &c).collect());
        d = IntPoly::new(d.coeffs.iter().map(|x| x / &c).collect());
        Ok(RatFunc { num: n, den: d })
    }

    pub fn from_poly(p: IntPoly) -> Self {
        RatFunc { num: p, den: IntPoly::one() }
    }

    pub fn constant(c: BigRational) -> Self {
        RatFunc::new(IntPoly::constant(c.numer().clone()), IntPoly::constant(c.denom().clone())).unwrap()
    }

    pub fn x() -> Self {
        RatFunc::from_poly(IntPoly::x())
    }

    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    pub fn den(&self) -> &IntPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// Degree as a map of ℙ¹.
    pub fn degree(&self) -> usize {
        self.num.deg0().max(self.den.deg0())
    }

    pub fn valuation(&self, place: Place) -> i64 {
        match place {
            Place::Zero => self.num.valuation_at_zero() as i64 - self.den.valuation_at_zero() as i64,
            Place::Infinity => self.den.deg0() as i64 - self.num.deg0() as i64,
        }
    }

    pub fn inv(&self) -> Result<RatFunc, PolyError> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, k: i64) -> Result<RatFunc, PolyError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let k = k.unsigned_abs();
        // Powers of a reduced fraction stay reduced.
        Ok(RatFunc { num: base.num.pow(k), den: base.den.pow(k) }.renormalize())
    }

    fn renormalize(self) -> RatFunc {
        RatFunc::new(self.num, self.den).expect("nonzero denominator")
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc, PolyError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero")
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den).expect("nonzero")
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }

    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    /// `self(r(x))`
    pub fn compose(&self, r: &RatFunc) -> Result<RatFunc, PolyError> {
        let n = self.degree();
        let homog = |p: &IntPoly| {
            let mut acc = IntPoly::zero();
            for (i, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let t = &(&r.num.pow(i as u64) * &r.den.pow((n - i) as u64)) * &IntPoly::constant(c.clone());
                acc = &acc + &t;
            }
            acc
        };
        RatFunc::new(homog(&self.num), homog(&self.den))
    }

    /// Partition of preimage multiplicities over `value` (`None` is ∞).
    pub fn fiber_partition(&self, value: Option<&BigRational>) -> Partition {
        let deg = self.degree();
        let p = match value {
            None => self.den.clone(),
            Some(c) => &self.num.scale(c.denom()) - &self.den.scale(c.numer()),
        };
        let mut parts = p.root_partition().parts().to_vec();
        let at_inf = deg - p.deg0();
        if at_inf > 0 {
            parts.push(at_inf as u64);
        }
        Partition::new(parts)
    }

    /// Squarefree data of numerator and denominator: `self = c·Π fᵢ^{kᵢ}`
    /// with `kᵢ` negative for denominator factors.
    pub fn factor_multiplicities(&self) -> (BigRational, Vec<(IntPoly, i64)>) {
        let n = self.num.squarefree_decomposition();
        let d = self.den.squarefree_decomposition();
        let mut v: Vec<(IntPoly, i64)> = n.factors.into_iter().map(|(p, k)| (p, k as i64)).collect();
        v.extend(d.factors.into_iter().map(|(p, k)| (p, -(k as i64))));
        (n.constant / d.constant, v)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.lc().is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// `h = residual · root^k`; `residual` is 1 unless the constant has no
/// rational `k`-th root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerRoot {
    pub root: RatFunc,
    #[serde(with = "crate::util::rat")]
    pub residual: BigRational,
}

impl PowerRoot {
    pub fn constant_is_exact(&self) -> bool {
        self.residual.is_one()
    }
}

fn int_root(n: &BigInt, k: u64) -> Option<BigInt> {
    if n.is_negative() {
        if k.is_multiple_of(2) {
            return None;
        }
        return int_root(&-n, k).map(|r| -r);
    }
    let r = n.nth_root(k as u32);
    (num_traits::pow(r.clone(), k as usize) == *n).then_some(r)
}

/// Geometric `k`-th root: every multiplicity of `h` must be divisible by `k`.
pub fn dth_power_root(h: &RatFunc, k: u64) -> Result<PowerRoot, PolyError> {
    let (c, factors) = h.factor_multiplicities();
    let mut num = IntPoly::one();
    let mut den = IntPoly::one();
    for (p, m) in &factors {
        if m.unsigned_abs() % k != 0 {
            return Err(PolyError::NotAPower { k, mult: m.unsigned_abs() });
        }
        let e = m.unsigned_abs() / k;
        if *m > 0 {
            num = &num * &p.pow(e);
        } else {
            den = &den * &p.pow(e);
        }
    }
    let root_c = match (int_root(c.numer(), k), int_root(c.denom(), k)) {
        (Some(a), Some(b)) => Some(BigRational::new(a, b)),
        _ => None,
    };
    let (scale, residual) = match root_c {
        Some(r) => (r, BigRational::one()),
        None => (BigRational::one(), c),
    };
    let root = RatFunc::new(num.scale(scale.numer()), den.scale(scale.denom()))?;
    Ok(PowerRoot { root, residual })
}

/// Chebyshev polynomial via `T₀ = 1, T₁ = x, T_{n+1} = 2x·T_n − T_{n−1}`.
pub fn chebyshev(d: usize) -> IntPoly {
    let mut a = IntPoly::one();
    if d == 0 {
        return a;
    }
    let mut b = IntPoly::x();
    let two_x = IntPoly::from_i64(&[0, 2]);
    for _ in 1..d {
        let c = &(&two_x * &b) - &a;
        a = b;
        b = c;
    }
    b
}

/// Checks `T_d((x + 1/x)/2) = (x^d + x^{-d})/2` as a Laurent identity, after
/// clearing the denominator `(2x)^d`.
pub fn chebyshev_functional_identity(t: &IntPoly, d: usize) -> bool {
    if t.deg0() != d {
        return false;
    }
    let x2_plus_1 = IntPoly::from_i64(&[1, 0, 1]);
    let two_x = IntPoly::from_i64(&[0, 2]);
    let mut lhs = IntPoly::zero();
    for (k, c) in t.coeffs().iter().enumerate() {
        let term = &(&x2_plus_1.pow(k as u64) * &two_x.pow((d - k) as u64)) * &IntPoly::constant(c.clone());
        lhs = &lhs + &term;
    }
    let mut rhs = vec![BigInt::zero(); 2 * d + 1];
    let half = num_traits::pow(BigInt::from(2), d.saturating_sub(1));
    rhs[0] = half.clone();
    rhs[2 * d] = half;
    if d == 0 {
        return lhs == IntPoly::one();
    }
    lhs == IntPoly::new(rhs)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Parse { col: self.pos + 1, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn integer(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.s[start..self.pos]).ok()?.parse().ok()
    }

    fn expr(&mut self) -> Result<RatFunc, PolyError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == b'+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc, PolyError> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let at = self.pos;
            let t = self.unary()?;
            acc = if c == b'*' {
                acc.mul(&t)
            } else {
                if t.is_zero() {
                    return Err(PolyError::Parse { col: at + 1, msg: "division by zero".into() });
                }
                acc.div(&t)?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFunc, PolyError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            match self.integer() {
                Some(k) => {
                    let k = k.to_i64().filter(|&k| k <= 1 << 20);
                    match k {
                        Some(k) => base.pow(k),
                        None => self.err("exponent too large"),
                    }
                }
                None => self.err("exponent must be a non-negative integer literal"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<RatFunc, PolyError> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(RatFunc::x())
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer().expect("digit");
                Ok(RatFunc::from_poly(IntPoly::constant(n)))
            }
            Some(c) => self.err(format!("unexpected `{}`", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a rational function in `x`: integers, `x`, `+ - * / ^`,
/// parentheses. Exponents are non-negative integer literals.
pub fn parse_ratfunc(s: &str) -> Result<RatFunc, PolyError> {
    let mut p = Parser { s: s.as_bytes(), pos: 0 };
    let r = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(r)
}

/// Like [`parse_ratfunc`] but requires a polynomial.
pub fn parse_poly(s: &str) -> Result<IntPoly, PolyError> {
    let r = parse_ratfunc(s)?;
    if !r.den().is_constant() || !r.den().lc().is_one() {
        return Err(PolyError::Parse { col: 1, msg: "expected a polynomial with integer coefficients".into() });
    }
    Ok(r.num().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn arithmetic() {
        let a = p(&[-1, 1]);
        let b = p(&[1, 1]);
        assert_eq!(&a * &b, p(&[-1, 0, 1]));
        assert_eq!(&a + &b, p(&[0, 2]));
        assert_eq!((&a - &a).degree(), None);
        assert_eq!(p(&[1, 0, 1]).compose(&a), p(&[2, -2, 1]));
        assert_eq!(p(&[-2, 1]).reciprocal(), p(&[1, -2]));
        assert_eq!(p(&[0, 0, 3]).reciprocal(), p(&[3]));
    }

    #[test]
    fn division() {
        let (qq, r, _) = p(&[1, 0, 0, 1]).pseudo_divmod(&p(&[1, 1])).unwrap();
        assert!(r.is_zero());
        assert_eq!(qq, p(&[1, -1, 1]));
        assert_eq!(p(&[1]).divmod(&IntPoly::zero()), Err(PolyError::DivisionByZeroPoly));
        assert_eq!(RatFunc::new(p(&[1]), IntPoly::zero()), Err(PolyError::DivisionByZeroPoly));
    }

    #[test]
    fn gcd_is_primitive() {
        let a = &p(&[-2, 2]) * &p(&[3, 1]);
        let b = &p(&[-4, 4]) * &p(&[5, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
    }

    #[test]
    fn yun() {
        let f = &(&p(&[-1, 1]).pow(3) * &p(&[1, 1])).scale(&BigInt::from(-6)) * &p(&[2, 0, 1]).pow(2);
        let sf = f.squarefree_decomposition();
        let mults: Vec<u64> = sf.factors.iter().map(|(_, k)| *k).collect();
        assert_eq!(mults, vec![1, 2, 3]);
        let (c, e) = sf.expand();
        assert_eq!(c, q(-6, 1));
        assert_eq!(e.scale(&BigInt::from(-6)), f);
        assert_eq!(f.root_partition(), Partition::new(vec![3, 2, 2, 1]));
    }

    #[test]
    fn ratfunc_normal_form() {
        let r = RatFunc::new(p(&[2, 2]), p(&[-4, 0, 4])).unwrap();
        assert_eq!(r.num(), &p(&[1]));
        assert_eq!(r.den(), &p(&[-2, 2]));
        let h = RatFunc::new(p(&[0, 0, 1]), p(&[1, 1])).unwrap();
        assert_eq!(h.valuation(Place::Zero), 2);
        assert_eq!(h.valuation(Place::Infinity), -1);
        let inv_x = RatFunc::new(p(&[1]), p(&[0, 1])).unwrap();
        assert_eq!(h.compose(&inv_x).unwrap(), RatFunc::new(p(&[1]), p(&[0, 1, 1])).unwrap());
    }

    #[test]
    fn power_roots() {
        let h = RatFunc::from_poly(p(&[-1, 1]).pow(2).scale(&BigInt::from(4)));
        let r = dth_power_root(&h, 2).unwrap();
        assert_eq!(r.root, RatFunc::from_poly(p(&[-2, 2])));
        assert!(r.constant_is_exact());
        let h = RatFunc::from_poly(p(&[-1, 1]).pow(2).scale(&BigInt::from(3)));
        let r = dth_power_root(&h, 2).unwrap();
        assert_eq!(r.residual, q(3, 1));
        assert!(dth_power_root(&RatFunc::from_poly(p(&[-1, 1])), 2).is_err());
    }

    #[test]
    fn chebyshev_small() {
        assert_eq!(chebyshev(2), p(&[-1, 0, 2]));
        assert_eq!(chebyshev(3), p(&[0, -3, 0, 4]));
        for d in 0..=16 {
            assert!(chebyshev_functional_identity(&chebyshev(d), d), "d = {d}");
        }
        assert!(!chebyshev_functional_identity(&p(&[0, -3, 0, 5]), 3));
    }

    #[test]
    fn chebyshev_fibers() {
        let t5 = RatFunc::from_poly(chebyshev(5));
        assert_eq!(t5.fiber_partition(Some(&q(1, 1))), Partition::new(vec![1, 2, 2]));
        assert_eq!(t5.fiber_partition(Some(&q(-1, 1))), Partition::new(vec![1, 2, 2]));
        assert_eq!(t5.fiber_partition(None), Partition::new(vec![5]));
        let t6 = RatFunc::from_poly(chebyshev(6));
        assert_eq!(t6.fiber_partition(Some(&q(1, 1))), Partition::new(vec![1, 1, 2, 2]));
        assert_eq!(t6.fiber_partition(Some(&q(-1, 1))), Partition::new(vec![2, 2, 2]));
    }

    #[test]
    fn parse() {
        assert_eq!(parse_poly("x - 1").unwrap(), p(&[-1, 1]));
        assert_eq!(parse_poly("(x-1)^3").unwrap(), p(&[-1, 3, -3, 1]));
        assert_eq!(parse_poly("2*x^2 - -3").unwrap(), p(&[3, 0, 2]));
        assert_eq!(parse_poly("-x^2").unwrap(), p(&[0, 0, -1]));
        let r = parse_ratfunc("(x - 2) / (1 - 2*x)").unwrap();
        assert_eq!(r.degree(), 1);
        assert!(matches!(parse_ratfunc("x^-2"), Err(PolyError::Parse { col: 3, .. })));
        assert!(parse_ratfunc("x +").is_err());
        assert!(parse_ratfunc("x / 0").is_err());
        assert!(parse_ratfunc("2x").is_err());
    }
}
