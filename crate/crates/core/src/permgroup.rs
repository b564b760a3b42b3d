//! Finite permutation groups by explicit enumeration: closure, orbits,
//! subgroup classes with their cores, and coset actions.
//!
//! Products compose left to right: `a.then(&b)` applies `a` first. Groups act
//! on the right, so coset actions are on right cosets `Hx`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ramcalc::Partition;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("group enumeration exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("permutation degrees differ: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("not a permutation: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(PermError::Invalid(format!("{images:?}")));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    /// Builds a permutation of `{0..n}` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Result<Self, PermError> {
        let mut img: Vec<u32> = (0..n as u32).collect();
        let mut touched = vec![false; n];
        for c in cycles {
            for (k, &a) in c.iter().enumerate() {
                let a = a as usize;
                if a >= n || touched[a] {
                    return Err(PermError::Invalid(format!("bad cycle {c:?}")));
                }
                touched[a] = true;
                img[a] = c[(k + 1) % c.len()];
            }
        }
        Ok(Perm(img))
    }

    /// Parses cycle notation such as `(0 1 2)(3 4)`; `()` is the identity.
    pub fn parse_cycles(n: usize, s: &str) -> Result<Self, PermError> {
        let mut cycles: Vec<Vec<u32>> = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(|| PermError::Invalid(format!("expected `(` in `{s}`")))?;
            let close = body.find(')').ok_or_else(|| PermError::Invalid(format!("unclosed cycle in `{s}`")))?;
            let pts = body[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<u32>().map_err(|_| PermError::Invalid(format!("bad point `{t}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            if !pts.is_empty() {
                cycles.push(pts);
            }
            rest = body[close + 1..].trim_start();
        }
        let refs: Vec<&[u32]> = cycles.iter().map(|c| c.as_slice()).collect();
        Perm::from_cycles(n, &refs)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn pow(&self, k: u64) -> Perm {
        let mut r = Perm::identity(self.degree());
        for _ in 0..k {
            r = r.then(self);
        }
        r
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// Cycles including fixed points, each starting at its least point,
    /// ordered by least point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut c = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                c.push(x as u32);
                x = self.0[x] as usize;
            }
            out.push(c);
        }
        out
    }

    pub fn cycle_type(&self) -> Partition {
        Partition::new(self.cycles().iter().map(|c| c.len() as u64).collect())
    }

    pub fn order(&self) -> u64 {
        self.cycle_type().lcm()
    }

    /// Pads with fixed points up to degree `n`.
    pub fn extend(&self, n: usize) -> Perm {
        let mut v = self.0.clone();
        v.extend(self.0.len() as u32..n as u32);
        Perm(v)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cyc: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cyc.is_empty() {
            return write!(f, "()");
        }
        for c in cyc {
            let s: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", s.join(" "))?;
        }
        Ok(())
    }
}

/// Generating set with an enumeration cap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSet {
    pub degree: usize,
    pub generators: Vec<Perm>,
    pub cap: usize,
}

pub const DEFAULT_CAP: usize = 200_000;

impl GenSet {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self, PermError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch(g.degree(), degree));
            }
        }
        Ok(GenSet { degree, generators, cap: DEFAULT_CAP })
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }
}

/// All elements of the generated group, sorted lexicographically by images.
pub fn enumerate(g: &GenSet) -> Result<Vec<Perm>, PermError> {
    let id = Perm::identity(g.degree);
    let mut seen: HashSet<Perm> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(id.clone());
    queue.push_back(id);
    while let Some(x) = queue.pop_front() {
        for s in &g.generators {
            let y = x.then(s);
            if !seen.contains(&y) {
                if seen.len() >= g.cap {
                    return Err(PermError::CapExceeded { cap: g.cap });
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    let mut v: Vec<Perm> = seen.into_iter().collect();
    v.sort();
    Ok(v)
}

/// Orbits of the generated group on `{0..n}`, each sorted, ordered by least element.
pub fn orbits(gens: &[Perm], n: usize) -> Vec<Vec<u32>> {
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut orbit = vec![s as u32];
        comp[s] = id;
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k] as usize;
            for g in gens {
                let y = g.apply(x);
                if comp[y] == usize::MAX {
                    comp[y] = id;
                    orbit.push(y as u32);
                }
            }
            k += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

pub fn is_transitive(gens: &[Perm], n: usize) -> bool {
    n == 0 || orbits(gens, n).len() == 1
}

/// Enumerated group with a multiplication table on element indices.
#[derive(Debug, Clone)]
pub struct PermGroup {
    pub degree: usize,
    pub elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

/// A subgroup as a sorted list of element indices into its [`PermGroup`].
pub type Subgroup = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupClass {
    /// Least member of the class in index order.
    pub representative: Subgroup,
    pub order: usize,
    pub class_size: usize,
    pub core: Subgroup,
}

impl SubgroupClass {
    pub fn is_core_free(&self) -> bool {
        self.core.len() == 1
    }
}

impl PermGroup {
    pub fn new(g: &GenSet) -> Result<Self, PermError> {
        let elements = enumerate(g)?;
        let n = elements.len();
        let index: HashMap<Perm, usize> = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mut mul = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                mul[i * n + j] = index[&elements[i].then(&elements[j])] as u32;
            }
        }
        let inv = elements.iter().map(|p| index[&p.inverse()] as u32).collect();
        Ok(PermGroup { degree: g.degree, elements, index, mul, inv })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.elements.len() + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Subgroup generated by the given element indices.
    pub fn closure(&self, gens: &[usize]) -> Subgroup {
        let n = self.order();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut list = vec![0usize];
        let mut k = 0;
        while k < list.len() {
            let x = list[k];
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    list.push(y);
                }
            }
            k += 1;
        }
        list.sort_unstable();
        list
    }

    pub fn conjugate(&self, h: &[usize], g: usize) -> Subgroup {
        let gi = self.inv(g);
        let mut v: Vec<usize> = h.iter().map(|&x| self.mul(self.mul(gi, x), g)).collect();
        v.sort_unstable();
        v
    }

    pub fn core(&self, h: &[usize]) -> Subgroup {
        let mut keep: Vec<bool> = vec![false; self.order()];
        for &x in h {
            keep[x] = true;
        }
        for g in 0..self.order() {
            let c = self.conjugate(h, g);
            let mut mark = vec![false; self.order()];
            for x in c {
                mark[x] = true;
            }
            for (k, m) in keep.iter_mut().zip(mark) {
                *k &= m;
            }
        }
        keep.iter().enumerate().filter(|(_, &k)| k).map(|(i, _)| i).collect()
    }

    pub fn is_normal(&self, h: &[usize]) -> bool {
        self.core(h).len() == h.len()
    }

    /// Every subgroup, sorted by order then by element indices.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let n = self.order();
        let mut cyclic: Vec<(Subgroup, usize)> = Vec::new();
        let mut seen: HashSet<Subgroup> = HashSet::new();
        for g in 0..n {
            let c = self.closure(&[g]);
            if seen.insert(c.clone()) {
                cyclic.push((c, g));
            }
        }
        let mut all: Vec<(Subgroup, Vec<usize>)> = cyclic.iter().map(|(c, g)| (c.clone(), vec![*g])).collect();
        let mut k = 0;
        while k < all.len() {
            let (h, gens) = all[k].clone();
            let mut member = vec![false; n];
            for &x in &h {
                member[x] = true;
            }
            for (_, g) in &cyclic {
                if member[*g] {
                    continue;
                }
                let mut ng = gens.clone();
                ng.push(*g);
                let j = self.closure(&ng);
                if seen.insert(j.clone()) {
                    all.push((j, ng));
                }
            }
            k += 1;
        }
        let mut subs: Vec<Subgroup> = all.into_iter().map(|(s, _)| s).collect();
        subs.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        subs
    }

    /// Subgroups up to conjugacy with class sizes and cores.
    pub fn subgroups_up_to_conjugacy(&self) -> Vec<SubgroupClass> {
        let subs = self.all_subgroups();
        let mut assigned: HashSet<Subgroup> = HashSet::new();
        let mut classes = Vec::new();
        for h in subs {
            if assigned.contains(&h) {
                continue;
            }
            let mut conj: Vec<Subgroup> = (0..self.order()).map(|g| self.conjugate(&h, g)).collect();
            conj.sort();
            conj.dedup();
            let rep = conj[0].clone();
            let class_size = conj.len();
            for c in conj {
                assigned.insert(c);
            }
            let core = self.core(&rep);
            classes.push(SubgroupClass { order: rep.len(), representative: rep, class_size, core });
        }
        classes.sort_by(|a, b| a.order.cmp(&b.order).then_with(|| a.representative.cmp(&b.representative)));
        classes
    }

    /// Action on right cosets `Hx`, cosets numbered by their least element
    /// index. Returns the image permutation of each listed element.
    pub fn coset_action(&self, h: &[usize], elements: &[usize]) -> Vec<Perm> {
        let n = self.order();
        let mut coset = vec![u32::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if coset[x] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(x);
            for &y in h {
                coset[self.mul(y, x)] = id;
            }
        }
        elements.iter().map(|&s| Perm(reps.iter().map(|&x| coset[self.mul(x, s)]).collect())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, s: &str) -> Perm {
        Perm::parse_cycles(n, s).unwrap()
    }

    fn a5() -> GenSet {
        GenSet::new(5, vec![p(5, "(0 1 2 3 4)"), p(5, "(0 1 2)")]).unwrap()
    }

    #[test]
    fn cycle_types() {
        assert_eq!(p(5, "(0 1)(2 3 4)").cycle_type(), Partition::new(vec![3, 2]));
        assert_eq!(p(4, "()").cycle_type(), Partition::new(vec![1, 1, 1, 1]));
        assert_eq!(p(6, "(0 1)(2 3 4)").order(), 6);
    }

    #[test]
    fn composition_is_left_to_right() {
        let a = p(3, "(0 1)");
        let b = p(3, "(1 2)");
        // 0 -a-> 1 -b-> 2
        assert_eq!(a.then(&b).apply(0), 2);
        assert!(a.then(&a.inverse()).is_identity());
    }

    #[test]
    fn enumerate_s4_and_cap() {
        let s4 = GenSet::new(4, vec![p(4, "(0 1)"), p(4, "(0 1 2 3)")]).unwrap();
        assert_eq!(enumerate(&s4).unwrap().len(), 24);
        assert_eq!(enumerate(&a5()).unwrap().len(), 60);
        assert_eq!(enumerate(&a5().with_cap(10)), Err(PermError::CapExceeded { cap: 10 }));
    }

    #[test]
    fn orbit_order() {
        let o = orbits(&[p(6, "(3 5)"), p(6, "(0 4)")], 6);
        assert_eq!(o, vec![vec![0, 4], vec![1], vec![2], vec![3, 5]]);
    }

    #[test]
    fn a4_subgroup_classes() {
        let g = PermGroup::new(&GenSet::new(4, vec![p(4, "(0 1 2)"), p(4, "(0 1)(2 3)")]).unwrap()).unwrap();
        let cl = g.subgroups_up_to_conjugacy();
        let orders: Vec<usize> = cl.iter().map(|c| c.order).collect();
        assert_eq!(orders, vec![1, 2, 3, 4, 12]);
        let v4 = cl.iter().find(|c| c.order == 4).unwrap();
        assert_eq!(v4.class_size, 1);
        assert_eq!(v4.core.len(), 4);
    }

    #[test]
    fn cyclic_six_one_class_per_divisor() {
        let g = PermGroup::new(&GenSet::new(6, vec![p(6, "(0 1 2 3 4 5)")]).unwrap()).unwrap();
        let orders: Vec<usize> = g.subgroups_up_to_conjugacy().iter().map(|c| c.order).collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
    }

    #[test]
    fn a5_subgroup_classes() {
        let g = PermGroup::new(&a5()).unwrap();
        let cl = g.subgroups_up_to_conjugacy();
        assert_eq!(cl.len(), 9);
        assert_eq!(g.all_subgroups().len(), 59);
        for c in &cl {
            if c.order != 1 && c.order != 60 {
                assert!(c.is_core_free());
            }
        }
    }

    #[test]
    fn s4_on_cosets_of_s3() {
        let s4 = PermGroup::new(&GenSet::new(4, vec![p(4, "(0 1)"), p(4, "(0 1 2 3)")]).unwrap()).unwrap();
        let x = s4.index_of(&p(4, "(0 1)")).unwrap();
        let y = s4.index_of(&p(4, "(1 2 3)")).unwrap();
        // z = (xy)^-1 has order 4
        let z = s4.inv(s4.mul(x, y));
        assert_eq!(s4.elements[z].order(), 4);
        let h = s4.closure(&[s4.index_of(&p(4, "(0 1 2)")).unwrap(), s4.index_of(&p(4, "(0 1)")).unwrap()]);
        assert_eq!(h.len(), 6);
        let acts = s4.coset_action(&h, &[x, y, z]);
        let types: Vec<String> = acts.iter().map(|a| a.cycle_type().exponent_notation()).collect();
        assert_eq!(types, vec!["1^2 2", "1 3", "4"]);
        assert!(acts[0].then(&acts[1]).then(&acts[2]).is_identity());
    }
}
