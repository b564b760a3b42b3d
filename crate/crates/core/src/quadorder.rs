//! Lattices, orders and fractional ideals in imaginary quadratic fields
//! `ℚ(√D)`, with all arithmetic exact.
//!
//! A lattice is stored as `(1/den)·⟨a + b√D, c√D⟩` with `a, c > 0`,
//! `0 ≤ b < c` and `gcd(den, a, b, c) = 1`; equal lattices have identical
//! representations.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::util;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadError {
    #[error("D = {0} must be a negative squarefree integer")]
    BadField(i64),
    #[error("field mismatch: D = {0} vs D = {1}")]
    FieldMismatch(i64, i64),
    #[error("scalar must be nonzero")]
    ZeroScalar,
    #[error("generators do not span a rank-2 lattice")]
    Degenerate,
    #[error("lattice is not a ring: {0}")]
    NotAnOrder(String),
    #[error("cannot parse `{0}` as an element of the field")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadField {
    pub d: i64,
}

fn is_squarefree(n: i64) -> bool {
    let n = n.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

impl QuadField {
    pub fn new(d: i64) -> Result<Self, QuadError> {
        if d >= 0 || !is_squarefree(d) {
            return Err(QuadError::BadField(d));
        }
        Ok(QuadField { d })
    }

    pub fn gaussian() -> Self {
        QuadField { d: -1 }
    }

    pub fn eisenstein() -> Self {
        QuadField { d: -3 }
    }

    /// Generator `ω` of the ring of integers: `√D` or `(1 + √D)/2`.
    pub fn omega(&self) -> QuadNum {
        if self.d.rem_euclid(4) == 1 {
            QuadNum::new(self.d, rat(1, 2), rat(1, 2))
        } else {
            QuadNum::new(self.d, rat(0, 1), rat(1, 1))
        }
    }

    /// Order `ℤ + f·𝒪_K` of conductor `f`.
    pub fn order_of_conductor(&self, f: u64) -> OrderDesc {
        let w = self.omega().scale(&BigRational::from_integer(BigInt::from(f)));
        let lat = QuadLattice::from_generators(*self, &[QuadNum::one(self.d), w]).expect("rank 2");
        OrderDesc { lattice: lat }
    }

    pub fn maximal_order(&self) -> OrderDesc {
        self.order_of_conductor(1)
    }

    /// Primitive cube root of unity `(−1 + √−3)/2`; only in `D = −3`.
    pub fn zeta3(&self) -> Option<QuadNum> {
        (self.d == -3).then(|| QuadNum::new(-3, rat(-1, 2), rat(1, 2)))
    }

    /// `√−1`; only in `D = −1`.
    pub fn i(&self) -> Option<QuadNum> {
        (self.d == -1).then(|| QuadNum::new(-1, rat(0, 1), rat(1, 1)))
    }
}

pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `u + v·√D`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadNum {
    pub d: i64,
    #[serde(with = "util::rat")]
    pub u: BigRational,
    #[serde(with = "util::rat")]
    pub v: BigRational,
}

impl QuadNum {
    pub fn new(d: i64, u: BigRational, v: BigRational) -> Self {
        QuadNum { d, u, v }
    }

    pub fn from_ints(d: i64, u: i64, v: i64) -> Self {
        QuadNum::new(d, rat(u, 1), rat(v, 1))
    }

    pub fn integer(d: i64, n: i64) -> Self {
        QuadNum::from_ints(d, n, 0)
    }

    pub fn one(d: i64) -> Self {
        QuadNum::integer(d, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }

    fn dq(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.d))
    }

    pub fn add(&self, o: &QuadNum) -> QuadNum {
        QuadNum::new(self.d, &self.u + &o.u, &self.v + &o.v)
    }

    pub fn sub(&self, o: &QuadNum) -> QuadNum {
        QuadNum::new(self.d, &self.u - &o.u, &self.v - &o.v)
    }

    pub fn neg(&self) -> QuadNum {
        QuadNum::new(self.d, -&self.u, -&self.v)
    }

    pub fn mul(&self, o: &QuadNum) -> QuadNum {
        QuadNum::new(self.d, &self.u * &o.u + self.dq() * &self.v * &o.v, &self.u * &o.v + &self.v * &o.u)
    }

    pub fn scale(&self, r: &BigRational) -> QuadNum {
        QuadNum::new(self.d, &self.u * r, &self.v * r)
    }

    pub fn conj(&self) -> QuadNum {
        QuadNum::new(self.d, self.u.clone(), -&self.v)
    }

    pub fn norm(&self) -> BigRational {
        &self.u * &self.u - self.dq() * &self.v * &self.v
    }

    pub fn trace(&self) -> BigRational {
        &self.u * BigInt::from(2)
    }

    pub fn inv(&self) -> Result<QuadNum, QuadError> {
        if self.is_zero() {
            return Err(QuadError::ZeroScalar);
        }
        let n = self.norm();
        Ok(self.conj().scale(&n.recip()))
    }

    pub fn div(&self, o: &QuadNum) -> Result<QuadNum, QuadError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, k: u32) -> QuadNum {
        (0..k).fold(QuadNum::one(self.d), |acc, _| acc.mul(self))
    }

    /// Parses `u`, `v i`, `u+v i`, `u-v i` with rational `u, v` (e.g.
    /// `-1/2+1/2i`). The symbol `i` stands for `√D`.
    pub fn parse(d: i64, s: &str) -> Result<QuadNum, QuadError> {
        let err = || QuadError::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (k, ch) in t.char_indices() {
            if (ch == '+' || ch == '-') && k > 0 && !t[..k].ends_with('/') {
                terms.push(&t[start..k]);
                start = k;
            }
        }
        terms.push(&t[start..]);
        let mut u = BigRational::zero();
        let mut v = BigRational::zero();
        for term in terms {
            let (body, is_sqrt) = match term.strip_suffix('i') {
                Some(b) => (b.strip_suffix('*').unwrap_or(b), true),
                None => (term, false),
            };
            let body = body.strip_prefix('+').unwrap_or(body);
            let val = match body {
                "" => BigRational::one(),
                "-" => -BigRational::one(),
                _ => util::parse_rat(body).ok_or_else(err)?,
            };
            if is_sqrt {
                v += val;
            } else {
                u += val;
            }
        }
        Ok(QuadNum::new(d, u, v))
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = util::rat_to_string(&self.u);
        let v = util::rat_to_string(&self.v.abs());
        match (self.u.is_zero(), self.v.is_zero()) {
            (_, true) => write!(f, "{u}"),
            (true, false) => write!(f, "{}{v}i", if self.v.is_negative() { "-" } else { "" }),
            (false, false) => write!(f, "{u}{}{v}i", if self.v.is_negative() { "-" } else { "+" }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadLattice {
    pub d: i64,
    #[serde(with = "util::int")]
    pub den: BigInt,
    #[serde(with = "util::int")]
    pub a: BigInt,
    #[serde(with = "util::int")]
    pub b: BigInt,
    #[serde(with = "util::int")]
    pub c: BigInt,
}

/// Unimodular row reduction of the first `ncols` columns; trailing columns
/// are carried along. Returns the rank; rows past the rank are zero in the
/// leading block.
fn echelon(m: &mut [Vec<BigInt>], ncols: usize) -> usize {
    let mut r = 0;
    for col in 0..ncols {
        if r == m.len() {
            break;
        }
        for i in r + 1..m.len() {
            if m[i][col].is_zero() {
                continue;
            }
            let (x, y) = (m[r][col].clone(), m[i][col].clone());
            let e = x.extended_gcd(&y);
            let (g, s, t) = (e.gcd, e.x, e.y);
            let (xg, yg) = (&x / &g, &y / &g);
            let ri = m[r].clone();
            let rj = m[i].clone();
            for k in 0..ri.len() {
                m[r][k] = &s * &ri[k] + &t * &rj[k];
                m[i][k] = &xg * &rj[k] - &yg * &ri[k];
            }
        }
        if !m[r][col].is_zero() {
            if m[r][col].is_negative() {
                for v in m[r].iter_mut() {
                    *v = -v.clone();
                }
            }
            r += 1;
        }
    }
    r
}

impl QuadLattice {
    fn from_int_rows(d: i64, den: BigInt, rows: Vec<(BigInt, BigInt)>) -> Result<Self, QuadError> {
        let mut m: Vec<Vec<BigInt>> = rows.into_iter().map(|(x, y)| vec![x, y]).collect();
        if echelon(&mut m, 2) < 2 || m[0][0].is_zero() {
            return Err(QuadError::Degenerate);
        }
        let a = m[0][0].clone();
        let c = m[1][1].abs();
        let b = m[0][1].mod_floor(&c);
        let g = den.gcd(&a).gcd(&b).gcd(&c);
        Ok(QuadLattice { d, den: &den / &g, a: a / &g, b: b / &g, c: c / &g })
    }

    /// Lattice spanned by the given elements.
    pub fn from_generators(field: QuadField, gens: &[QuadNum]) -> Result<Self, QuadError> {
        for g in gens {
            if g.d != field.d {
                return Err(QuadError::FieldMismatch(field.d, g.d));
            }
        }
        let den = gens.iter().fold(BigInt::one(), |l, g| l.lcm(g.u.denom()).lcm(g.v.denom()));
        let dq = BigRational::from_integer(den.clone());
        let rows = gens.iter().map(|g| ((&g.u * &dq).to_integer(), (&g.v * &dq).to_integer())).collect();
        QuadLattice::from_int_rows(field.d, den, rows)
    }

    pub fn field(&self) -> QuadField {
        QuadField { d: self.d }
    }

    /// Hermite basis `g1 = (a + b√D)/den`, `g2 = c√D/den`.
    pub fn basis(&self) -> [QuadNum; 2] {
        let q = |x: &BigInt| BigRational::new(x.clone(), self.den.clone());
        [QuadNum::new(self.d, q(&self.a), q(&self.b)), QuadNum::new(self.d, BigRational::zero(), q(&self.c))]
    }

    fn check(&self, o: &QuadLattice) -> Result<(), QuadError> {
        if self.d != o.d {
            return Err(QuadError::FieldMismatch(self.d, o.d));
        }
        Ok(())
    }

    pub fn sum(&self, o: &QuadLattice) -> Result<QuadLattice, QuadError> {
        self.check(o)?;
        let [a1, a2] = self.basis();
        let [b1, b2] = o.basis();
        QuadLattice::from_generators(self.field(), &[a1, a2, b1, b2])
    }

    pub fn mul(&self, o: &QuadLattice) -> Result<QuadLattice, QuadError> {
        self.check(o)?;
        let a = self.basis();
        let b = o.basis();
        let prods: Vec<QuadNum> = a.iter().flat_map(|x| b.iter().map(move |y| x.mul(y))).collect();
        QuadLattice::from_generators(self.field(), &prods)
    }

    pub fn scale(&self, x: &QuadNum) -> Result<QuadLattice, QuadError> {
        if x.d != self.d {
            return Err(QuadError::FieldMismatch(self.d, x.d));
        }
        if x.is_zero() {
            return Err(QuadError::ZeroScalar);
        }
        let [g1, g2] = self.basis();
        QuadLattice::from_generators(self.field(), &[x.mul(&g1), x.mul(&g2)])
    }

    /// Meet of two lattices, from the integer kernel of `[A; −B]`.
    pub fn intersect(&self, o: &QuadLattice) -> Result<QuadLattice, QuadError> {
        self.check(o)?;
        let den = self.den.lcm(&o.den);
        let s1 = &den / &self.den;
        let s2 = &den / &o.den;
        let z = BigInt::zero;
        let one = BigInt::one;
        let r1 = [&self.a * &s1, &self.b * &s1];
        let r2 = [z(), &self.c * &s1];
        let r3 = [-(&o.a * &s2), -(&o.b * &s2)];
        let r4 = [z(), -(&o.c * &s2)];
        let mut m = vec![
            vec![r1[0].clone(), r1[1].clone(), one(), z(), z(), z()],
            vec![r2[0].clone(), r2[1].clone(), z(), one(), z(), z()],
            vec![r3[0].clone(), r3[1].clone(), z(), z(), one(), z()],
            vec![r4[0].clone(), r4[1].clone(), z(), z(), z(), one()],
        ];
        let rank = echelon(&mut m, 2);
        let rows = m[rank..]
            .iter()
            .map(|row| {
                let (x1, x2) = (&row[2], &row[3]);
                (x1 * &r1[0] + x2 * &r2[0], x1 * &r1[1] + x2 * &r2[1])
            })
            .collect();
        QuadLattice::from_int_rows(self.d, den, rows)
    }

    /// `covol(self)` in units of `covol(ℤ[√D])`.
    pub fn covolume(&self) -> BigRational {
        BigRational::new(&self.a * &self.c, &self.den * &self.den)
    }

    pub fn contains(&self, x: &QuadNum) -> bool {
        if x.d != self.d {
            return false;
        }
        let dq = BigRational::from_integer(self.den.clone());
        let (p, q) = (&x.u * &dq, &x.v * &dq);
        if !p.is_integer() || !q.is_integer() {
            return false;
        }
        let (p, q) = (p.to_integer(), q.to_integer());
        if !p.is_multiple_of(&self.a) {
            return false;
        }
        let k = &p / &self.a;
        (q - k * &self.b).is_multiple_of(&self.c)
    }

    pub fn is_sublattice_of(&self, o: &QuadLattice) -> bool {
        self.d == o.d && self.basis().iter().all(|g| o.contains(g))
    }

    /// Integer coordinates of `x` in the Hermite basis, if `x` lies in the lattice.
    pub fn coordinates(&self, x: &QuadNum) -> (BigRational, BigRational) {
        let dq = BigRational::from_integer(self.den.clone());
        let (p, q) = (&x.u * &dq, &x.v * &dq);
        let k = p / BigRational::from_integer(self.a.clone());
        let l = (q - &k * BigRational::from_integer(self.b.clone())) / BigRational::from_integer(self.c.clone());
        (k, l)
    }
}

impl fmt::Display for QuadLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [g1, g2] = self.basis();
        write!(f, "⟨{g1}, {g2}⟩")
    }
}

pub fn lat_sum(a: &QuadLattice, b: &QuadLattice) -> Result<QuadLattice, QuadError> {
    a.sum(b)
}

pub fn lat_mul(a: &QuadLattice, b: &QuadLattice) -> Result<QuadLattice, QuadError> {
    a.mul(b)
}

pub fn lat_intersect(a: &QuadLattice, b: &QuadLattice) -> Result<QuadLattice, QuadError> {
    a.intersect(b)
}

pub fn lat_scale(x: &QuadNum, a: &QuadLattice) -> Result<QuadLattice, QuadError> {
    a.scale(x)
}

/// Ratio of covolumes `covol(sub)/covol(super)`; equals `[super : sub]` when
/// `sub ⊆ super`.
pub fn lat_index(sub: &QuadLattice, sup: &QuadLattice) -> Result<BigRational, QuadError> {
    sub.check(sup)?;
    Ok(sub.covolume() / sup.covolume())
}

/// A lattice that contains 1 and is closed under multiplication.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrderDesc {
    pub lattice: QuadLattice,
}

impl OrderDesc {
    pub fn new(lattice: QuadLattice) -> Result<Self, QuadError> {
        if !lattice.contains(&QuadNum::one(lattice.d)) {
            return Err(QuadError::NotAnOrder("1 is not in the lattice".into()));
        }
        if lattice.mul(&lattice)? != lattice {
            return Err(QuadError::NotAnOrder("not closed under multiplication".into()));
        }
        Ok(OrderDesc { lattice })
    }

    /// Conductor `f` with `self = ℤ + f·𝒪_K`.
    pub fn conductor(&self) -> u64 {
        let max = self.lattice.field().maximal_order();
        lat_index(&self.lattice, &max.lattice).expect("same field").to_integer().to_u64().expect("small")
    }
}

/// `{α : αL ⊆ L} = g1⁻¹L ∩ g2⁻¹L`.
pub fn multiplier_ring(l: &QuadLattice) -> OrderDesc {
    let [g1, g2] = l.basis();
    let a = l.scale(&g1.inv().expect("nonzero")).expect("same field");
    let b = l.scale(&g2.inv().expect("nonzero")).expect("same field");
    OrderDesc { lattice: a.intersect(&b).expect("same field") }
}

/// `(O : J) = {α : αJ ⊆ O}`.
pub fn ideal_inverse(j: &QuadLattice, o: &OrderDesc) -> Result<QuadLattice, QuadError> {
    j.check(&o.lattice)?;
    let [g1, g2] = j.basis();
    let a = o.lattice.scale(&g1.inv()?)?;
    let b = o.lattice.scale(&g2.inv()?)?;
    a.intersect(&b)
}

pub fn is_invertible(j: &QuadLattice, o: &OrderDesc) -> Result<bool, QuadError> {
    let inv = ideal_inverse(j, o)?;
    Ok(j.mul(&inv)? == o.lattice)
}

/// Ideal `αO + βO`.
pub fn ideal(o: &OrderDesc, gens: &[QuadNum]) -> Result<QuadLattice, QuadError> {
    let [w1, w2] = o.lattice.basis();
    let all: Vec<QuadNum> = gens.iter().flat_map(|g| [g.mul(&w1), g.mul(&w2)]).collect();
    QuadLattice::from_generators(o.lattice.field(), &all)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumProductCheck {
    pub identity_holds: bool,
    pub sum_invertible: bool,
}

/// Compares `(I + J)(I ∩ J)` with `IJ`, and reports whether `I + J` is invertible.
pub fn check_sum_product_identity(
    i: &QuadLattice,
    j: &QuadLattice,
    o: &OrderDesc,
) -> Result<SumProductCheck, QuadError> {
    let s = i.sum(j)?;
    let lhs = s.mul(&i.intersect(j)?)?;
    let rhs = i.mul(j)?;
    Ok(SumProductCheck { identity_holds: lhs == rhs, sum_invertible: is_invertible(&s, o)? })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributeCheck {
    pub holds: bool,
}

/// Compares `(I1 ∩ I2)J` with `I1J ∩ I2J`.
pub fn check_flat_distribute(
    i1: &QuadLattice,
    i2: &QuadLattice,
    j: &QuadLattice,
) -> Result<DistributeCheck, QuadError> {
    let lhs = i1.intersect(i2)?.mul(j)?;
    let rhs = i1.mul(j)?.intersect(&i2.mul(j)?)?;
    Ok(DistributeCheck { holds: lhs == rhs })
}

/// Primitive `(a, b, c)` with `aτ² + bτ + c = 0` for irrational `τ`.
pub fn primitive_min_poly(tau: &QuadNum) -> Option<(BigInt, BigInt, BigInt)> {
    if tau.is_rational() {
        return None;
    }
    // τ² − tr(τ)τ + N(τ) = 0, cleared of denominators.
    let tr = tau.trace();
    let n = tau.norm();
    let l = tr.denom().lcm(n.denom());
    let lq = BigRational::from_integer(l.clone());
    let (a, b, c) = (l.clone(), (-&tr * &lq).to_integer(), (&n * &lq).to_integer());
    let g = a.gcd(&b).gcd(&c);
    Some((a / &g, b / &g, c / &g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss() -> QuadField {
        QuadField::new(-1).unwrap()
    }

    fn lat(d: i64, gens: &[(i64, i64, i64)]) -> QuadLattice {
        // (u, v, den) ↦ (u + v√D)/den
        let g: Vec<QuadNum> = gens.iter().map(|&(u, v, q)| QuadNum::new(d, rat(u, q), rat(v, q))).collect();
        QuadLattice::from_generators(QuadField { d }, &g).unwrap()
    }

    #[test]
    fn field_validation() {
        assert!(QuadField::new(-4).is_err());
        assert!(QuadField::new(3).is_err());
        assert!(QuadField::new(-15).is_ok());
    }

    #[test]
    fn parse_numbers() {
        assert_eq!(QuadNum::parse(-1, "1+1i").unwrap(), QuadNum::from_ints(-1, 1, 1));
        assert_eq!(QuadNum::parse(-3, "-1/2+1/2i").unwrap(), QuadNum::new(-3, rat(-1, 2), rat(1, 2)));
        assert_eq!(QuadNum::parse(-1, "-i").unwrap(), QuadNum::from_ints(-1, 0, -1));
        assert_eq!(QuadNum::parse(-1, "3").unwrap(), QuadNum::from_ints(-1, 3, 0));
        assert!(QuadNum::parse(-1, "1+x").is_err());
        let z = QuadNum::new(-3, rat(-1, 2), rat(1, 2));
        assert_eq!(QuadNum::parse(-3, &z.to_string()).unwrap(), z);
    }

    #[test]
    fn canonical_form_is_unique() {
        let a = lat(-1, &[(1, 0, 1), (0, 1, 1)]);
        let b = lat(-1, &[(1, 1, 1), (1, -1, 1), (3, 2, 1)]);
        assert_eq!(a, b);
        let c = lat(-1, &[(2, 0, 4), (0, 3, 6)]);
        assert_eq!(c.den, BigInt::from(2));
    }

    #[test]
    fn sum_product_intersection() {
        let z = gauss().maximal_order().lattice;
        let one_i = QuadNum::from_ints(-1, 1, 1);
        assert_eq!(z.sum(&z.scale(&one_i).unwrap()).unwrap(), z);
        let two = z.scale(&QuadNum::integer(-1, 2)).unwrap();
        let three = z.scale(&QuadNum::integer(-1, 3)).unwrap();
        assert_eq!(two.intersect(&three).unwrap(), z.scale(&QuadNum::integer(-1, 6)).unwrap());
        let p = lat(-3, &[(2, 0, 1), (1, 1, 1)]);
        let p2 = p.mul(&p).unwrap();
        assert_eq!(p2, p.scale(&QuadNum::integer(-3, 2)).unwrap());
        assert!(matches!(z.sum(&p), Err(QuadError::FieldMismatch(-1, -3))));
        assert_eq!(z.scale(&QuadNum::integer(-1, 0)), Err(QuadError::ZeroScalar));
    }

    #[test]
    fn indices() {
        let z = gauss().maximal_order().lattice;
        let two = z.scale(&QuadNum::integer(-1, 2)).unwrap();
        assert_eq!(lat_index(&two, &z).unwrap(), rat(4, 1));
        let p = z.scale(&QuadNum::from_ints(-1, 1, 1)).unwrap();
        assert_eq!(lat_index(&p, &z).unwrap(), rat(2, 1));
        assert_eq!(lat_index(&z, &z).unwrap(), rat(1, 1));
    }

    #[test]
    fn multiplier_rings() {
        let l = lat(-3, &[(1, 0, 1), (0, 1, 1)]);
        assert_eq!(multiplier_ring(&l).lattice, l);
        let l = lat(-3, &[(1, 0, 1), (0, 1, 2)]);
        assert_eq!(multiplier_ring(&l).lattice, lat(-3, &[(1, 0, 1), (0, 2, 1)]));
        let l = lat(-3, &[(2, 0, 1), (1, 1, 1)]);
        assert_eq!(multiplier_ring(&l), QuadField::eisenstein().maximal_order());
        assert_eq!(multiplier_ring(&l).conductor(), 1);
        assert_eq!(QuadField::eisenstein().order_of_conductor(2).lattice, lat(-3, &[(1, 0, 1), (0, 1, 1)]));
    }

    /// Oracle: the multiplier ring of ⟨1, τ⟩ is ℤ[aτ] with aτ² + bτ + c primitive.
    #[test]
    fn multiplier_ring_matches_min_poly_oracle() {
        for d in [-1i64, -2, -3, -5, -7] {
            for (u, v, q) in [(0, 1, 1), (0, 1, 2), (1, 1, 2), (1, 3, 5), (2, 1, 3), (-3, 2, 7)] {
                let tau = QuadNum::new(d, rat(u, q), rat(v, q));
                let l = QuadLattice::from_generators(QuadField { d }, &[QuadNum::one(d), tau.clone()]).unwrap();
                let (a, _, _) = primitive_min_poly(&tau).unwrap();
                let at = tau.scale(&BigRational::from_integer(a));
                let oracle = QuadLattice::from_generators(QuadField { d }, &[QuadNum::one(d), at]).unwrap();
                assert_eq!(multiplier_ring(&l).lattice, oracle, "D = {d}, τ = {tau}");
            }
        }
    }

    #[test]
    fn inverses_and_invertibility() {
        let o = QuadField::eisenstein().order_of_conductor(2);
        let p = lat(-3, &[(2, 0, 1), (1, 1, 1)]);
        assert!(!is_invertible(&p, &o).unwrap());
        let pp = p.mul(&ideal_inverse(&p, &o).unwrap()).unwrap();
        assert!(pp.is_sublattice_of(&o.lattice) && pp != o.lattice);
        assert_eq!(ideal_inverse(&o.lattice, &o).unwrap(), o.lattice);
        let x = QuadNum::from_ints(-3, 1, 1);
        let xo = o.lattice.scale(&x).unwrap();
        assert_eq!(ideal_inverse(&xo, &o).unwrap(), o.lattice.scale(&x.inv().unwrap()).unwrap());
        assert!(is_invertible(&xo, &o).unwrap());
        let m = QuadField::eisenstein().maximal_order();
        assert!(is_invertible(&p, &m).unwrap());
    }

    #[test]
    fn identity_examples() {
        let o = gauss().maximal_order();
        let i = ideal(&o, &[QuadNum::from_ints(-1, 1, 1)]).unwrap();
        let j = ideal(&o, &[QuadNum::integer(-1, 3)]).unwrap();
        assert_eq!(
            check_sum_product_identity(&i, &j, &o).unwrap(),
            SumProductCheck { identity_holds: true, sum_invertible: true }
        );
    }

    #[test]
    fn order_validation() {
        assert!(OrderDesc::new(lat(-1, &[(2, 0, 1), (0, 1, 1)])).is_err());
        assert!(OrderDesc::new(lat(-1, &[(1, 0, 1), (0, 1, 2)])).is_err());
        assert!(OrderDesc::new(lat(-1, &[(1, 0, 1), (0, 3, 1)])).is_ok());
    }

    #[test]
    fn non_invertible_fixtures_in_conductor_two_order() {
        let o = QuadField::eisenstein().order_of_conductor(2);
        let p = lat(-3, &[(2, 0, 1), (1, 1, 1)]);
        let i = lat(-3, &[(3, 3, 1), (0, 12, 1)]);
        let j = lat(-3, &[(3, 1, 1), (0, 4, 1)]);
        assert_eq!(
            check_sum_product_identity(&i, &j, &o).unwrap(),
            SumProductCheck { identity_holds: false, sum_invertible: false }
        );
        // The identity can hold although I + J is not invertible.
        assert_eq!(
            check_sum_product_identity(&p, &p, &o).unwrap(),
            SumProductCheck { identity_holds: true, sum_invertible: false }
        );
        assert!(!check_flat_distribute(&j, &i, &p).unwrap().holds);
        let q = ideal(&o, &[QuadNum::from_ints(-3, 1, 1), QuadNum::integer(-3, 4)]).unwrap();
        assert!(is_invertible(&q, &o).unwrap());
        assert!(check_flat_distribute(&j, &i, &q).unwrap().holds);
    }
}
