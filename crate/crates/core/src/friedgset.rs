//! Reduction of a pair of G-sets to quotients with equal Galois groups
//! while preserving the orbit structure of the product.
//!
//! The group is the subgroup of pairs generated by `(x1[k], x2[k])`, realised
//! as permutations of the disjoint union `X1 ⊔ X2` (points of `X2` are offset
//! by `|X1|`).

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constellation::{self, Constellation};
use crate::permgroup::{self, GenSet, Perm, PermError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FriedError {
    #[error("malformed joint action: {0}")]
    Malformed(String),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Constellation(#[from] constellation::ConstellationError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JointAction {
    pub n1: usize,
    pub n2: usize,
    pub x1: Vec<Perm>,
    pub x2: Vec<Perm>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    One,
    Two,
}

impl JointAction {
    pub fn new(x1: Vec<Perm>, x2: Vec<Perm>) -> Result<Self, FriedError> {
        if x1.len() != x2.len() {
            return Err(FriedError::Malformed(format!("{} vs {} generators", x1.len(), x2.len())));
        }
        let n1 = x1.first().map_or(0, Perm::degree);
        let n2 = x2.first().map_or(0, Perm::degree);
        if x1.iter().any(|p| p.degree() != n1) || x2.iter().any(|p| p.degree() != n2) {
            return Err(FriedError::Malformed("generators on one side have different degrees".into()));
        }
        if n1 == 0 || n2 == 0 {
            return Err(FriedError::Malformed("empty G-set".into()));
        }
        Ok(JointAction { n1, n2, x1, x2 })
    }

    /// Joint action of two constellations on the same label set.
    pub fn from_constellations(a: &Constellation, b: &Constellation) -> Result<Self, FriedError> {
        let (a, b) = constellation::align(a, b);
        JointAction::new(a.monodromy, b.monodromy)
    }

    /// Generators of the pair group acting on `X1 ⊔ X2`.
    pub fn pair_generators(&self) -> Vec<Perm> {
        self.x1
            .iter()
            .zip(&self.x2)
            .map(|(s, t)| {
                let mut img: Vec<u32> = s.images().to_vec();
                img.extend(t.images().iter().map(|&j| j + self.n1 as u32));
                Perm::from_images(img).expect("disjoint union")
            })
            .collect()
    }

    pub fn group(&self, cap: usize) -> Result<Vec<Perm>, PermError> {
        permgroup::enumerate(&GenSet { degree: self.n1 + self.n2, generators: self.pair_generators(), cap })
    }
}

/// Elements of the pair group acting trivially on the given side.
pub fn galois_group_of(ja: &JointAction, side: Side, cap: usize) -> Result<Vec<Perm>, FriedError> {
    let g = ja.group(cap)?;
    let (lo, hi) = match side {
        Side::One => (0, ja.n1),
        Side::Two => (ja.n1, ja.n1 + ja.n2),
    };
    Ok(g.into_iter().filter(|p| (lo..hi).all(|i| p.apply(i) == i)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FriedResult {
    /// `h1[x]` is the class of `x ∈ X1` in `Y1`.
    pub h1: Vec<u32>,
    pub h2: Vec<u32>,
    pub y1_size: usize,
    pub y2_size: usize,
    pub y1_action: Vec<Perm>,
    pub y2_action: Vec<Perm>,
    /// Number of quotient steps taken.
    pub steps: usize,
}

fn kernel_of(elems: &[Perm], h: &[u32], offset: usize) -> Vec<bool> {
    elems.iter().map(|g| (0..h.len()).all(|x| h[g.apply(x + offset) - offset] == h[x])).collect()
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Merges classes of `h` along orbits of the elements flagged in `members`,
/// then renumbers classes by their least preimage.
fn quotient(elems: &[Perm], members: &[bool], h: &[u32], offset: usize) -> Vec<u32> {
    let ny = h.iter().map(|&y| y as usize + 1).max().unwrap_or(0);
    let mut parent: Vec<usize> = (0..ny).collect();
    for (g, _) in elems.iter().zip(members).filter(|(_, &m)| m) {
        for x in 0..h.len() {
            let a = find(&mut parent, h[x] as usize);
            let b = find(&mut parent, h[g.apply(x + offset) - offset] as usize);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    renumber(&h.iter().map(|&y| find(&mut parent, y as usize) as u32).collect::<Vec<_>>())
}

fn renumber(h: &[u32]) -> Vec<u32> {
    let mut map = std::collections::HashMap::new();
    h.iter()
        .map(|&y| {
            let next = map.len() as u32;
            *map.entry(y).or_insert(next)
        })
        .collect()
}

fn induced(gens: &[Perm], h: &[u32]) -> Option<Vec<Perm>> {
    let ny = h.iter().map(|&y| y as usize + 1).max().unwrap_or(0);
    let mut out = Vec::new();
    for g in gens {
        let mut img = vec![u32::MAX; ny];
        for x in 0..h.len() {
            let y = h[x] as usize;
            let t = h[g.apply(x)];
            if img[y] == u32::MAX {
                img[y] = t;
            } else if img[y] != t {
                return None;
            }
        }
        out.push(Perm::from_images(img).ok()?);
    }
    Some(out)
}

/// Quotients `X1 → Y1`, `X2 → Y2` with equal kernels. When the kernel of
/// side one is not inside that of side two, side two is divided by it;
/// otherwise side one is divided by the kernel of side two.
pub fn fried_decompose(ja: &JointAction, cap: usize) -> Result<FriedResult, FriedError> {
    let elems = ja.group(cap)?;
    let mut h1: Vec<u32> = (0..ja.n1 as u32).collect();
    let mut h2: Vec<u32> = (0..ja.n2 as u32).collect();
    let mut steps = 0;
    loop {
        let k1 = kernel_of(&elems, &h1, 0);
        let k2 = kernel_of(&elems, &h2, ja.n1);
        if k1 == k2 {
            break;
        }
        let one_in_two = k1.iter().zip(&k2).all(|(&a, &b)| !a || b);
        if !one_in_two {
            h2 = quotient(&elems, &k1, &h2, ja.n1);
        } else {
            h1 = quotient(&elems, &k2, &h1, 0);
        }
        steps += 1;
    }
    let y1_action = induced(&ja.x1, &h1).expect("kernel orbits give a G-map");
    let y2_action = induced(&ja.x2, &h2).expect("kernel orbits give a G-map");
    Ok(FriedResult {
        y1_size: h1.iter().max().map_or(0, |&m| m as usize + 1),
        y2_size: h2.iter().max().map_or(0, |&m| m as usize + 1),
        h1,
        h2,
        y1_action,
        y2_action,
        steps,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FriedCheck {
    pub equivariant: bool,
    pub kernels_equal: bool,
    pub orbits_bijective: bool,
}

impl FriedCheck {
    pub fn ok(&self) -> bool {
        self.equivariant && self.kernels_equal && self.orbits_bijective
    }
}

fn product_orbits(a: &[Perm], b: &[Perm], n: usize, m: usize) -> Vec<usize> {
    let gens: Vec<Perm> = a
        .iter()
        .zip(b)
        .map(|(s, t)| {
            let mut img = Vec::with_capacity(n * m);
            for i in 0..n {
                for j in 0..m {
                    img.push((s.apply(i) * m + t.apply(j)) as u32);
                }
            }
            Perm::from_images(img).expect("product")
        })
        .collect();
    let mut label = vec![0usize; n * m];
    for (k, orbit) in permgroup::orbits(&gens, n * m).into_iter().enumerate() {
        for x in orbit {
            label[x as usize] = k;
        }
    }
    label
}

/// Independent check of a decomposition: the maps are G-maps, the pair
/// group acting on `Y1 ⊔ Y2` has equal kernels on both sides, and orbits of
/// `X1 × X2` correspond bijectively to orbits of `Y1 × Y2`.
pub fn verify_fried(ja: &JointAction, r: &FriedResult, cap: usize) -> Result<FriedCheck, FriedError> {
    let mut check = FriedCheck { equivariant: false, kernels_equal: false, orbits_bijective: false };
    if r.h1.len() != ja.n1 || r.h2.len() != ja.n2 {
        return Ok(check);
    }
    let (Some(a1), Some(a2)) = (induced(&ja.x1, &r.h1), induced(&ja.x2, &r.h2)) else {
        return Ok(check);
    };
    check.equivariant = a1 == r.y1_action && a2 == r.y2_action;
    let m1 = r.h1.iter().max().map_or(0, |&m| m as usize + 1);
    let m2 = r.h2.iter().max().map_or(0, |&m| m as usize + 1);

    let yja = JointAction { n1: m1, n2: m2, x1: a1.clone(), x2: a2.clone() };
    let g = yja.group(cap)?;
    let triv1: HashSet<&Perm> = g.iter().filter(|p| (0..m1).all(|i| p.apply(i) == i)).collect();
    let triv2: HashSet<&Perm> = g.iter().filter(|p| (m1..m1 + m2).all(|i| p.apply(i) == i)).collect();
    check.kernels_equal = triv1 == triv2;

    let xo = product_orbits(&ja.x1, &ja.x2, ja.n1, ja.n2);
    let yo = product_orbits(&a1, &a2, m1, m2);
    let nx = xo.iter().max().map_or(0, |m| m + 1);
    let ny = yo.iter().max().map_or(0, |m| m + 1);
    let mut image = vec![usize::MAX; nx];
    let mut consistent = true;
    for i in 0..ja.n1 {
        for j in 0..ja.n2 {
            let o = xo[i * ja.n2 + j];
            let t = yo[r.h1[i] as usize * m2 + r.h2[j] as usize];
            if image[o] == usize::MAX {
                image[o] = t;
            } else if image[o] != t {
                consistent = false;
            }
        }
    }
    let mut hit: Vec<usize> = image.clone();
    hit.sort_unstable();
    hit.dedup();
    check.orbits_bijective = consistent && nx == ny && hit.len() == ny;
    Ok(check)
}

/// Degrees `(|Y1|, |Y2|)` of left factors with a common Galois closure and
/// the same number of product orbits. A transitive product gets the trivial
/// factors `(1, 1)`; the induction alone can stop earlier, e.g. at `(12, 5)`
/// for A5 acting on cosets of C5 and of A4.
pub fn fried_degrees(ja: &JointAction, cap: usize) -> Result<(usize, usize), FriedError> {
    if product_orbits(&ja.x1, &ja.x2, ja.n1, ja.n2).iter().all(|&o| o == 0) {
        return Ok((1, 1));
    }
    let r = fried_decompose(ja, cap)?;
    Ok((r.y1_size, r.y2_size))
}

/// [`fried_degrees`] for the joint monodromy of two covers: `(1, 1)` exactly
/// when the fiber product is irreducible.
pub fn cover_fried(a: &Constellation, b: &Constellation, cap: usize) -> Result<(usize, usize), FriedError> {
    fried_degrees(&JointAction::from_constellations(a, b)?, cap)
}
