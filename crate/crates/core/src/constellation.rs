//! Covers of the sphere given by monodromy: a tuple of permutations, one per
//! branch point, whose left-to-right product is the identity.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::permgroup::{self, GenSet, Perm, PermError};
use crate::ramcalc::{self, Partition, RamError, RamificationPortrait};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstellationError {
    #[error("product of the monodromy permutations is not the identity")]
    ProductNotIdentity,
    #[error("label sets differ: {0:?} vs {1:?}")]
    LabelMismatch(Vec<String>, Vec<String>),
    #[error("monodromy is intransitive ({0} orbits)")]
    Intransitive(usize),
    #[error("malformed constellation: {0}")]
    Malformed(String),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Ram(#[from] RamError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constellation {
    pub degree: usize,
    pub labels: Vec<String>,
    pub monodromy: Vec<Perm>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validation {
    pub transitive: bool,
    pub orbit_count: usize,
}

impl Constellation {
    /// Checks degrees, label uniqueness and the product relation.
    pub fn new(degree: usize, labels: Vec<String>, monodromy: Vec<Perm>) -> Result<Self, ConstellationError> {
        if labels.len() != monodromy.len() {
            return Err(ConstellationError::Malformed(format!(
                "{} labels for {} permutations",
                labels.len(),
                monodromy.len()
            )));
        }
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != labels.len() {
            return Err(ConstellationError::Malformed("repeated label".into()));
        }
        for m in &monodromy {
            if m.degree() != degree {
                return Err(PermError::DegreeMismatch(m.degree(), degree).into());
            }
        }
        let c = Constellation { degree, labels, monodromy };
        c.validate()?;
        Ok(c)
    }

    /// From `(label, cycle notation)` pairs.
    pub fn from_cycles(degree: usize, data: &[(&str, &str)]) -> Result<Self, ConstellationError> {
        let labels = data.iter().map(|(l, _)| l.to_string()).collect();
        let perms = data.iter().map(|(_, c)| Perm::parse_cycles(degree, c)).collect::<Result<Vec<_>, _>>()?;
        Constellation::new(degree, labels, perms)
    }

    /// Monodromy of `x ↦ x^d` over the labels `0` and `inf`.
    pub fn power_map(d: usize) -> Self {
        let cyc: Vec<u32> = (0..d as u32).collect();
        let s = Perm::from_cycles(d, &[&cyc]).expect("cycle");
        let t = s.inverse();
        Constellation { degree: d, labels: vec!["0".into(), "inf".into()], monodromy: vec![s, t] }
    }

    pub fn product(&self) -> Perm {
        self.monodromy.iter().fold(Perm::identity(self.degree), |acc, p| acc.then(p))
    }

    pub fn validate(&self) -> Result<Validation, ConstellationError> {
        if !self.product().is_identity() {
            return Err(ConstellationError::ProductNotIdentity);
        }
        let orbit_count = permgroup::orbits(&self.monodromy, self.degree).len();
        Ok(Validation { transitive: orbit_count <= 1, orbit_count })
    }

    pub fn is_transitive(&self) -> bool {
        permgroup::is_transitive(&self.monodromy, self.degree)
    }

    pub fn monodromy_of(&self, label: &str) -> Option<&Perm> {
        self.labels.iter().position(|l| l == label).map(|i| &self.monodromy[i])
    }

    pub fn portrait(&self) -> Result<RamificationPortrait, ConstellationError> {
        let k = permgroup::orbits(&self.monodromy, self.degree).len();
        if k > 1 {
            return Err(ConstellationError::Intransitive(k));
        }
        let branches = self.labels.iter().cloned().zip(self.monodromy.iter().map(Perm::cycle_type)).collect();
        Ok(RamificationPortrait::new(self.degree as u64, branches)?)
    }

    pub fn genus(&self) -> Result<i64, ConstellationError> {
        Ok(ramcalc::genus_from_portrait(&self.portrait()?)?)
    }

    pub fn gen_set(&self) -> GenSet {
        GenSet { degree: self.degree, generators: self.monodromy.clone(), cap: permgroup::DEFAULT_CAP }
    }

    /// Same cover with monodromy listed in the order of `labels`; labels
    /// missing here get the identity.
    pub fn relabel(&self, labels: &[String]) -> Result<Self, ConstellationError> {
        for l in &self.labels {
            if !labels.contains(l) {
                return Err(ConstellationError::LabelMismatch(self.labels.clone(), labels.to_vec()));
            }
        }
        let monodromy = labels
            .iter()
            .map(|l| self.monodromy_of(l).cloned().unwrap_or_else(|| Perm::identity(self.degree)))
            .collect();
        Ok(Constellation { degree: self.degree, labels: labels.to_vec(), monodromy })
    }
}

pub fn portrait_of(c: &Constellation) -> Result<RamificationPortrait, ConstellationError> {
    c.portrait()
}

/// Pads both constellations with identity permutations so they share the
/// label list: labels of `a` first, then new labels of `b`.
pub fn align(a: &Constellation, b: &Constellation) -> (Constellation, Constellation) {
    let mut labels = a.labels.clone();
    for l in &b.labels {
        if !labels.contains(l) {
            labels.push(l.clone());
        }
    }
    (a.relabel(&labels).expect("superset"), b.relabel(&labels).expect("superset"))
}

/// One connected component of a fiber product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberComponent {
    pub constellation: Constellation,
    /// Point `k` of the component is the pair `points[k]`.
    pub points: Vec<(u32, u32)>,
}

/// Components of the fiber product, ordered by least point pair. Both inputs
/// must carry the same label set.
pub fn fiber_product(a: &Constellation, b: &Constellation) -> Result<Vec<FiberComponent>, ConstellationError> {
    let mut la = a.labels.clone();
    let mut lb = b.labels.clone();
    la.sort();
    lb.sort();
    if la != lb {
        return Err(ConstellationError::LabelMismatch(a.labels.clone(), b.labels.clone()));
    }
    let b = b.relabel(&a.labels)?;
    let (n, m) = (a.degree, b.degree);
    let pair_gens: Vec<Perm> = a
        .monodromy
        .iter()
        .zip(&b.monodromy)
        .map(|(s, t)| {
            let mut img = Vec::with_capacity(n * m);
            for i in 0..n {
                for j in 0..m {
                    img.push((s.apply(i) * m + t.apply(j)) as u32);
                }
            }
            Perm::from_images(img).expect("product permutation")
        })
        .collect();
    let mut out = Vec::new();
    for orbit in permgroup::orbits(&pair_gens, n * m) {
        let mut local = vec![u32::MAX; n * m];
        for (k, &x) in orbit.iter().enumerate() {
            local[x as usize] = k as u32;
        }
        let monodromy = pair_gens
            .iter()
            .map(|g| Perm::from_images(orbit.iter().map(|&x| local[g.apply(x as usize)]).collect()))
            .collect::<Result<Vec<_>, _>>()?;
        let points = orbit.iter().map(|&x| (x / m as u32, x % m as u32)).collect();
        out.push(FiberComponent {
            constellation: Constellation { degree: orbit.len(), labels: a.labels.clone(), monodromy },
            points,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IrreducibilityReason {
    /// Degrees are coprime, so the fiber product is connected.
    CoprimeDegrees,
    /// Counted orbits of the pair action.
    OrbitCount(usize),
}

/// Whether the fiber product of two transitive covers is irreducible.
pub fn is_irreducible_pair(
    a: &Constellation,
    b: &Constellation,
) -> Result<(bool, IrreducibilityReason), ConstellationError> {
    if a.is_transitive() && b.is_transitive() && a.degree.gcd(&b.degree) == 1 {
        return Ok((true, IrreducibilityReason::CoprimeDegrees));
    }
    let (a, b) = align(a, b);
    let k = fiber_product(&a, &b)?.len();
    Ok((k == 1, IrreducibilityReason::OrbitCount(k)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureData {
    pub closure_degree: usize,
    pub closure_genus: i64,
}

pub fn galois_closure_data(c: &Constellation, cap: usize) -> Result<ClosureData, ConstellationError> {
    let portrait = c.portrait()?;
    let order = permgroup::enumerate(&c.gen_set().with_cap(cap))?.len();
    let sig = ramcalc::signature_of(&portrait);
    let closure_genus = ramcalc::galois_closure_genus(&sig, order as u64)?;
    Ok(ClosureData { closure_degree: order, closure_genus })
}

/// A transitive cover is Galois when its monodromy group acts regularly.
pub fn is_galois(c: &Constellation, cap: usize) -> Result<bool, ConstellationError> {
    if !c.is_transitive() {
        return Err(ConstellationError::Intransitive(permgroup::orbits(&c.monodromy, c.degree).len()));
    }
    Ok(permgroup::enumerate(&c.gen_set().with_cap(cap))?.len() == c.degree)
}

/// Largest divisor `e` of `d` dividing every part over the two labels. A
/// label absent from the portrait is unramified and forces `e = 1`.
pub fn power_factor_test(portrait: &RamificationPortrait, l1: &str, l2: &str, d: u64) -> u64 {
    let ones = Partition::new(vec![1]);
    let g = [l1, l2]
        .iter()
        .flat_map(|l| portrait.partition_of(l).unwrap_or(&ones).parts().to_vec())
        .fold(0u64, |acc, p| acc.gcd(&p));
    g.gcd(&d)
}

/// Cycle type of the product action over each label, summed over all components.
pub fn fiber_cycle_types(components: &[FiberComponent]) -> BTreeMap<String, Partition> {
    let mut acc: BTreeMap<String, Vec<u64>> = BTreeMap::new();
    for comp in components {
        for (l, p) in comp.constellation.labels.iter().zip(&comp.constellation.monodromy) {
            acc.entry(l.clone()).or_default().extend_from_slice(p.cycle_type().parts());
        }
    }
    acc.into_iter().map(|(l, v)| (l, Partition::new(v))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(v: &[u64]) -> Partition {
        Partition::new(v.to_vec())
    }

    #[test]
    fn product_check() {
        assert!(Constellation::from_cycles(3, &[("0", "(0 1 2)"), ("inf", "(0 1 2)")]).is_err());
        let c = Constellation::from_cycles(3, &[("0", "(0 1 2)"), ("inf", "(0 2 1)")]).unwrap();
        assert!(c.validate().unwrap().transitive);
        let c = Constellation::from_cycles(3, &[("0", "(0 1)"), ("inf", "(0 1)")]).unwrap();
        assert_eq!(c.validate().unwrap().orbit_count, 2);
        assert!(matches!(c.portrait(), Err(ConstellationError::Intransitive(2))));
    }

    #[test]
    fn square_and_cube() {
        let comps = fiber_product(&Constellation::power_map(2), &Constellation::power_map(3)).unwrap();
        assert_eq!(comps.len(), 1);
        let p = comps[0].constellation.portrait().unwrap();
        assert_eq!(p.degree, 6);
        assert_eq!(p.sorted_type(), vec![part(&[6]), part(&[6])]);
        assert_eq!(comps[0].constellation.genus().unwrap(), 0);
    }

    #[test]
    fn square_and_square() {
        let comps = fiber_product(&Constellation::power_map(2), &Constellation::power_map(2)).unwrap();
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.constellation.degree == 2));
        assert_eq!(comps[0].points[0], (0, 0));
    }

    #[test]
    fn label_mismatch() {
        let a = Constellation::power_map(2);
        let b = Constellation::from_cycles(2, &[("1", "(0 1)"), ("inf", "(0 1)")]).unwrap();
        assert!(matches!(fiber_product(&a, &b), Err(ConstellationError::LabelMismatch(..))));
        let (a2, b2) = align(&a, &b);
        assert_eq!(a2.labels, vec!["0", "inf", "1"]);
        assert_eq!(fiber_product(&a2, &b2).unwrap().len(), 1);
    }

    #[test]
    fn closure_examples() {
        let a = Perm::parse_cycles(5, "(1 4)(2 3)").unwrap();
        let b = Perm::parse_cycles(5, "(0 1)(2 4)").unwrap();
        let c = a.then(&b).inverse();
        let c = Constellation::new(5, vec!["a".into(), "b".into(), "c".into()], vec![a, b, c]).unwrap();
        assert_eq!(c.portrait().unwrap().sorted_type(), vec![part(&[2, 2, 1]), part(&[2, 2, 1]), part(&[5])]);
        assert_eq!(galois_closure_data(&c, 1000).unwrap(), ClosureData { closure_degree: 10, closure_genus: 0 });
        assert!(!is_galois(&c, 1000).unwrap());

        let x5 = Constellation::power_map(5);
        assert_eq!(galois_closure_data(&x5, 1000).unwrap(), ClosureData { closure_degree: 5, closure_genus: 0 });
        assert!(is_galois(&x5, 1000).unwrap());

        let t =
            Constellation::from_cycles(3, &[("a", "(0 1)"), ("b", "(0 1)"), ("c", "(1 2)"), ("d", "(1 2)")]).unwrap();
        assert_eq!(t.genus().unwrap(), 0);
        assert_eq!(galois_closure_data(&t, 1000).unwrap(), ClosureData { closure_degree: 6, closure_genus: 1 });
    }

    #[test]
    fn power_factor_examples() {
        let p = RamificationPortrait::new(6, vec![("0".into(), part(&[2, 4])), ("inf".into(), part(&[3, 3]))]).unwrap();
        assert_eq!(power_factor_test(&p, "0", "inf", 6), 1);
        let p = RamificationPortrait::new(4, vec![("0".into(), part(&[2, 2])), ("inf".into(), part(&[4]))]).unwrap();
        assert_eq!(power_factor_test(&p, "0", "inf", 4), 2);
        assert_eq!(power_factor_test(&p, "0", "zzz", 4), 1);
    }

    #[test]
    fn coprime_shortcut() {
        let (ok, why) = is_irreducible_pair(&Constellation::power_map(4), &Constellation::power_map(9)).unwrap();
        assert!(ok);
        assert_eq!(why, IrreducibilityReason::CoprimeDegrees);
        let (ok, why) = is_irreducible_pair(&Constellation::power_map(4), &Constellation::power_map(6)).unwrap();
        assert!(!ok);
        assert_eq!(why, IrreducibilityReason::OrbitCount(2));
    }
}
