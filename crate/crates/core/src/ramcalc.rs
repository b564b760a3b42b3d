//! Ramification bookkeeping: partitions, portraits, signatures and the
//! Riemann–Hurwitz calculus that turns them into genera.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RamError {
    #[error("Euler characteristic {chi} is odd")]
    ParityViolation { chi: i64 },
    #[error("not realizable: {0}")]
    NotRealizable(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("branch `{label}` has parts summing to {sum}, expected degree {degree}")]
    DegreeMismatch { label: String, sum: u64, degree: u64 },
}

/// Multiset of positive integers stored in non-increasing order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition(Vec<u64>);

impl Partition {
    /// Sorts the parts; zero parts are dropped.
    pub fn new(mut parts: Vec<u64>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    /// `count` copies of `part`.
    pub fn uniform(part: u64, count: u64) -> Self {
        Partition(vec![part; count as usize])
    }

    pub fn parts(&self) -> &[u64] {
        &self.0
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_all_ones(&self) -> bool {
        self.0.iter().all(|&p| p == 1)
    }

    /// Σ (part − 1), the contribution to the Riemann–Hurwitz defect.
    pub fn defect(&self) -> u64 {
        self.0.iter().map(|p| p - 1).sum()
    }

    pub fn lcm(&self) -> u64 {
        self.0.iter().fold(1u64, |acc, &p| acc.lcm(&p))
    }

    /// Exponent notation with ascending parts, e.g. `1^2 2^5`.
    pub fn exponent_notation(&self) -> String {
        let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
        for &p in &self.0 {
            *counts.entry(p).or_default() += 1;
        }
        counts
            .iter()
            .map(|(p, c)| if *c == 1 { p.to_string() } else { format!("{p}^{c}") })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses `1^2 2^5` style notation (also accepts comma separated parts).
    pub fn parse_exponent_notation(s: &str) -> Option<Partition> {
        let mut parts = Vec::new();
        for tok in s.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => (b.parse::<u64>().ok()?, e.parse::<u64>().ok()?),
                None => (tok.parse::<u64>().ok()?, 1),
            };
            if base == 0 {
                return None;
            }
            parts.extend(std::iter::repeat_n(base, exp as usize));
        }
        Some(Partition::new(parts))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.exponent_notation())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Branch {
    pub label: String,
    pub partition: Partition,
}

/// Degree plus one partition per branch point. Branches whose partition is
/// all ones carry no information and are removed by [`RamificationPortrait::canonicalize`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RamificationPortrait {
    pub degree: u64,
    pub branches: Vec<Branch>,
}

impl RamificationPortrait {
    pub fn new(degree: u64, branches: Vec<(String, Partition)>) -> Result<Self, RamError> {
        for (label, p) in &branches {
            if p.sum() != degree {
                return Err(RamError::DegreeMismatch { label: label.clone(), sum: p.sum(), degree });
            }
        }
        let mut portrait = RamificationPortrait {
            degree,
            branches: branches.into_iter().map(|(label, partition)| Branch { label, partition }).collect(),
        };
        portrait.canonicalize();
        Ok(portrait)
    }

    /// Branches labelled `0`, `1`, ... in the given order.
    pub fn from_partitions(degree: u64, parts: Vec<Partition>) -> Result<Self, RamError> {
        Self::new(degree, parts.into_iter().enumerate().map(|(i, p)| (i.to_string(), p)).collect())
    }

    /// Drops unramified branches. Branch order is preserved.
    pub fn canonicalize(&mut self) {
        self.branches.retain(|b| !b.partition.is_all_ones());
    }

    pub fn partitions(&self) -> Vec<&Partition> {
        self.branches.iter().map(|b| &b.partition).collect()
    }

    /// Partitions sorted, forgetting labels; used to compare types.
    pub fn sorted_type(&self) -> Vec<Partition> {
        let mut v: Vec<Partition> = self.branches.iter().map(|b| b.partition.clone()).collect();
        v.sort();
        v
    }

    pub fn type_string(&self) -> String {
        self.branches.iter().map(|b| b.partition.to_string()).collect::<Vec<_>>().join(" ")
    }

    pub fn partition_of(&self, label: &str) -> Option<&Partition> {
        self.branches.iter().find(|b| b.label == label).map(|b| &b.partition)
    }
}

/// Multiset of integers ≥ 2 in non-decreasing order, e.g. `(2,3,5)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Signature(Vec<u64>);

impl Signature {
    pub fn new(mut orders: Vec<u64>) -> Result<Self, RamError> {
        if orders.iter().any(|&m| m < 2) {
            return Err(RamError::DomainError("signature entries must be at least 2".into()));
        }
        orders.sort_unstable();
        Ok(Signature(orders))
    }

    pub fn orders(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Σ (1 − 1/m).
    pub fn weight(&self) -> BigRational {
        self.0
            .iter()
            .map(|&m| BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(m)))
            .fold(BigRational::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|m| m.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Scenario for the bounded-degree genus estimate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundScenario {
    pub d: u64,
    pub e: u64,
    pub signature: Signature,
}

/// Genus of the source curve of a connected cover with the given portrait.
pub fn genus_from_portrait(p: &RamificationPortrait) -> Result<i64, RamError> {
    let defect: i128 = p.branches.iter().map(|b| b.partition.defect() as i128).sum();
    let chi = 2 * p.degree as i128 - defect;
    genus_from_euler(chi)
}

pub(crate) fn genus_from_euler(chi: i128) -> Result<i64, RamError> {
    if chi.rem_euclid(2) != 0 {
        return Err(RamError::ParityViolation { chi: chi as i64 });
    }
    let g = (2 - chi) / 2;
    if g < 0 {
        return Err(RamError::NotRealizable(format!("Euler characteristic {chi} gives negative genus")));
    }
    Ok(g as i64)
}

/// Ramification index of the Galois closure over a branch point.
pub fn m_of_branch(partition: &Partition) -> u64 {
    partition.lcm()
}

pub fn is_evenly_ramified(p: &RamificationPortrait) -> bool {
    p.branches.iter().all(|b| b.partition.parts().windows(2).all(|w| w[0] == w[1]))
}

pub fn signature_of(p: &RamificationPortrait) -> Signature {
    let mut v: Vec<u64> = p.branches.iter().map(|b| m_of_branch(&b.partition)).filter(|&m| m > 1).collect();
    v.sort_unstable();
    Signature(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SphericalFamily {
    Cyclic,
    Dihedral,
    Tetrahedral,
    Octahedral,
    Icosahedral,
}

/// Finite group attached to a spherical signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupTag {
    pub family: SphericalFamily,
    /// `n` for `C_n` and `D_n`; unused otherwise.
    pub n: u64,
    pub order: u64,
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            SphericalFamily::Cyclic => write!(f, "C{}", self.n),
            SphericalFamily::Dihedral => write!(f, "D{}", self.n),
            SphericalFamily::Tetrahedral => write!(f, "A4"),
            SphericalFamily::Octahedral => write!(f, "S4"),
            SphericalFamily::Icosahedral => write!(f, "A5"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignatureClass {
    Spherical(GroupTag),
    Euclidean,
    Hyperbolic,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("{0} has Σ(1−1/m) < 2 but is not the signature of a Galois cover of the sphere")]
    NotAGaloisSignature(Signature),
}

pub fn classify_signature(s: &Signature) -> Result<SignatureClass, ClassifyError> {
    let two = BigRational::from_integer(BigInt::from(2));
    let w = s.weight();
    if w > two {
        return Ok(SignatureClass::Hyperbolic);
    }
    if w == two {
        return Ok(SignatureClass::Euclidean);
    }
    let o = s.orders();
    let tag = |family, n, order| SignatureClass::Spherical(GroupTag { family, n, order });
    let class = match o {
        [] => tag(SphericalFamily::Cyclic, 1, 1),
        [a, b] if a == b => tag(SphericalFamily::Cyclic, *a, *a),
        [2, 2, n] => tag(SphericalFamily::Dihedral, *n, 2 * n),
        [2, 3, 3] => tag(SphericalFamily::Tetrahedral, 0, 12),
        [2, 3, 4] => tag(SphericalFamily::Octahedral, 0, 24),
        [2, 3, 5] => tag(SphericalFamily::Icosahedral, 0, 60),
        _ => return Err(ClassifyError::NotAGaloisSignature(s.clone())),
    };
    Ok(class)
}

/// Genus of a Galois cover with group of the given order and signature `s`.
pub fn galois_closure_genus(s: &Signature, order: u64) -> Result<i64, RamError> {
    if order == 0 {
        return Err(RamError::DomainError("group order must be positive".into()));
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let chi = BigRational::from_integer(BigInt::from(order)) * (two - s.weight());
    if !chi.is_integer() {
        return Err(RamError::NotRealizable(format!(
            "Euler characteristic {chi} of a Galois cover of order {order} with signature {s} is not an integer"
        )));
    }
    let chi = chi.to_integer().to_i128().ok_or_else(|| RamError::DomainError("overflow".into()))?;
    if chi.rem_euclid(2) != 0 {
        return Err(RamError::NotRealizable(format!("Euler characteristic {chi} is odd")));
    }
    genus_from_euler(chi)
}

/// Sufficient condition that the left factor of degree `d` has a Galois
/// closure of low genus when composed with a factor of degree `e`:
/// Σ(1 − 1/m) ≤ (2e − 2)/(e − 2d).
pub fn bdd_genus_check(d: u64, e: u64, s: &Signature) -> Result<bool, RamError> {
    if d < 2 {
        return Err(RamError::DomainError(format!("d = {d} must be at least 2")));
    }
    if e <= 2 * d {
        return Err(RamError::DomainError(format!("e = {e} must exceed 2d = {}", 2 * d)));
    }
    let bound = BigRational::new(BigInt::from(2 * e - 2), BigInt::from(e - 2 * d));
    Ok(s.weight() <= bound)
}

/// Threshold 170d − 84 on the degree of the right factor.
pub fn low_genus_threshold(d: u64) -> BigInt {
    BigInt::from(170) * BigInt::from(d) - BigInt::from(84)
}

/// True when `e` strictly exceeds [`low_genus_threshold`].
pub fn low_genus_gate(d: u64, e: &BigInt) -> bool {
    *e > low_genus_threshold(d)
}

/// All signatures of length ≤ `max_len` with Σ(1 − 1/m) equal to `target`,
/// sorted by length and then lexicographically.
pub fn enumerate_signatures(target: &BigRational, max_len: usize) -> Vec<Signature> {
    let mut out = Vec::new();
    if target.is_negative() {
        return out;
    }
    for k in 0..=max_len {
        let mut cur = Vec::with_capacity(k);
        fill_signatures(target.clone(), k, 2, &mut cur, &mut out);
    }
    out
}

fn fill_signatures(rest: BigRational, slots: usize, min_m: u64, cur: &mut Vec<u64>, out: &mut Vec<Signature>) {
    let one = BigRational::one();
    if slots == 0 {
        if rest.is_zero() {
            out.push(Signature(cur.clone()));
        }
        return;
    }
    let r = BigRational::from_integer(BigInt::from(slots as u64));
    // Each remaining term lies in [1/2, 1).
    if rest >= r || &rest * BigInt::from(2) < r {
        return;
    }
    if slots == 1 {
        let gap = &one - &rest;
        if gap.numer().is_one() {
            if let Some(m) = gap.denom().to_u64() {
                if m >= min_m {
                    cur.push(m);
                    out.push(Signature(cur.clone()));
                    cur.pop();
                }
            }
        }
        return;
    }
    // Terms are non-decreasing, so the current one is at most rest/slots.
    let cap = &rest / &r;
    let gap = &one - &cap;
    let max_m = (gap.recip()).floor().to_integer().to_u64().unwrap_or(u64::MAX);
    let mut m = min_m;
    while m <= max_m {
        let term = &one - BigRational::new(BigInt::one(), BigInt::from(m));
        cur.push(m);
        fill_signatures(&rest - term, slots - 1, m, cur, out);
        cur.pop();
        m += 1;
    }
}

/// Cycle type of the product action of two cycles of lengths `s` and `t`:
/// gcd(s,t) cycles of length lcm(s,t).
pub fn abhyankar_pair(s: u64, t: u64) -> (u64, u64) {
    (s.gcd(&t), s.lcm(&t))
}

/// Cycle type of σ × τ on pairs, given the cycle types of σ and τ.
pub fn abhyankar_product(a: &Partition, b: &Partition) -> Partition {
    let mut parts = Vec::new();
    for &s in a.parts() {
        for &t in b.parts() {
            let (g, l) = abhyankar_pair(s, t);
            parts.extend(std::iter::repeat_n(l, g as usize));
        }
    }
    Partition::new(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(v: &[u64]) -> Partition {
        Partition::new(v.to_vec())
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn sig(v: &[u64]) -> Signature {
        Signature::new(v.to_vec()).unwrap()
    }

    #[test]
    fn genus_examples() {
        let p = RamificationPortrait::from_partitions(5, vec![part(&[5]), part(&[5])]).unwrap();
        assert_eq!(genus_from_portrait(&p).unwrap(), 0);
        let p = RamificationPortrait::from_partitions(5, vec![part(&[1, 2, 2]), part(&[1, 2, 2]), part(&[5])]).unwrap();
        assert_eq!(genus_from_portrait(&p).unwrap(), 0);
        let p = RamificationPortrait::from_partitions(1, vec![]).unwrap();
        assert_eq!(genus_from_portrait(&p).unwrap(), 0);
        let p = RamificationPortrait::from_partitions(2, vec![part(&[2]); 4]).unwrap();
        assert_eq!(genus_from_portrait(&p).unwrap(), 1);
    }

    #[test]
    fn genus_errors() {
        let p = RamificationPortrait::from_partitions(2, vec![part(&[2])]).unwrap();
        assert!(matches!(genus_from_portrait(&p), Err(RamError::ParityViolation { .. })));
        let p = RamificationPortrait::from_partitions(3, vec![part(&[3]); 1]).unwrap();
        assert!(matches!(genus_from_portrait(&p), Err(RamError::NotRealizable(_))));
        assert!(RamificationPortrait::from_partitions(3, vec![part(&[2])]).is_err());
    }

    #[test]
    fn canonicalize_drops_trivial() {
        let p = RamificationPortrait::from_partitions(3, vec![part(&[1, 1, 1]), part(&[3])]).unwrap();
        assert_eq!(p.branches.len(), 1);
        assert_eq!(p.branches[0].label, "1");
    }

    #[test]
    fn exponent_notation_roundtrip() {
        let p = part(&[2, 2, 2, 2, 2, 1, 1]);
        assert_eq!(p.exponent_notation(), "1^2 2^5");
        assert_eq!(Partition::parse_exponent_notation("1^2 2^5").unwrap(), p);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_signature(&sig(&[2, 3, 5])).unwrap(),
            SignatureClass::Spherical(GroupTag { family: SphericalFamily::Icosahedral, n: 0, order: 60 })
        );
        assert_eq!(
            classify_signature(&sig(&[2, 2, 7])).unwrap(),
            SignatureClass::Spherical(GroupTag { family: SphericalFamily::Dihedral, n: 7, order: 14 })
        );
        assert_eq!(
            classify_signature(&sig(&[4, 4])).unwrap(),
            SignatureClass::Spherical(GroupTag { family: SphericalFamily::Cyclic, n: 4, order: 4 })
        );
        for s in [&[2u64, 2, 2, 2][..], &[3, 3, 3], &[2, 4, 4], &[2, 3, 6]] {
            assert_eq!(classify_signature(&sig(s)).unwrap(), SignatureClass::Euclidean);
        }
        assert_eq!(classify_signature(&sig(&[2, 3, 7])).unwrap(), SignatureClass::Hyperbolic);
        assert!(classify_signature(&sig(&[2, 3])).is_err());
        assert!(classify_signature(&sig(&[2])).is_err());
        assert_eq!(classify_signature(&sig(&[2, 4, 5])).unwrap(), SignatureClass::Hyperbolic);
    }

    #[test]
    fn galois_closure_genus_examples() {
        assert_eq!(galois_closure_genus(&sig(&[2, 3, 5]), 60).unwrap(), 0);
        assert_eq!(galois_closure_genus(&sig(&[2, 2, 2, 2]), 4).unwrap(), 1);
        assert_eq!(galois_closure_genus(&sig(&[2, 3, 7]), 168).unwrap(), 3);
        assert!(galois_closure_genus(&sig(&[2, 3, 5]), 7).is_err());
    }

    #[test]
    fn bdd_genus_examples() {
        assert!(bdd_genus_check(2, 1000, &sig(&[2, 2, 2, 2])).unwrap());
        assert!(!bdd_genus_check(2, 1000, &sig(&[2, 2, 2, 2, 2])).unwrap());
        assert!(matches!(bdd_genus_check(2, 4, &sig(&[2, 2])), Err(RamError::DomainError(_))));
    }

    #[test]
    fn threshold_values() {
        assert_eq!(low_genus_threshold(2), BigInt::from(256));
        assert_eq!(low_genus_threshold(3), BigInt::from(426));
        assert!(!low_genus_gate(2, &BigInt::from(256)));
        assert!(low_genus_gate(2, &BigInt::from(257)));
    }

    #[test]
    fn enumerate_examples() {
        let found = enumerate_signatures(&rat(2, 1), 4);
        let expect = vec![sig(&[3, 3, 3]), sig(&[2, 4, 4]), sig(&[2, 3, 6]), sig(&[2, 2, 2, 2])];
        let mut a = found.clone();
        a.sort();
        let mut b = expect;
        b.sort();
        assert_eq!(a, b);
        assert_eq!(enumerate_signatures(&rat(1, 1), 2), vec![sig(&[2, 2])]);
        assert!(enumerate_signatures(&rat(59, 30), 3).contains(&sig(&[2, 3, 5])));
    }

    #[test]
    fn abhyankar_examples() {
        assert_eq!(abhyankar_product(&part(&[2]), &part(&[3])), part(&[6]));
        assert_eq!(abhyankar_product(&part(&[2]), &part(&[2])), part(&[2, 2]));
        assert_eq!(abhyankar_product(&part(&[4, 1]), &part(&[6])), part(&[12, 12, 6]));
    }
}
