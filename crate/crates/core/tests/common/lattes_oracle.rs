//! Ramification of `L` with `L∘π1 = π0∘ψ` computed from points of the curves:
//! branch points of `π0` are `⟨ζ0⟩`-orbits of points with nontrivial
//! stabilizer, the fiber of `L` over one is the set of `⟨ζ1⟩`-orbits on its
//! `ψ`-preimage, and a point `p` there has index `m / |Stab1(p)|`.

use std::collections::BTreeSet;

use corrorbit::quadorder::{QuadLattice, QuadNum};
use corrorbit::ramcalc::Partition;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

type Key = (BigRational, BigRational);

fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

fn key(lam: &QuadLattice, x: &QuadNum) -> Key {
    let (k, l) = lam.coordinates(x);
    (frac(&k), frac(&l))
}

fn point(lam: &QuadLattice, k: &Key) -> QuadNum {
    let [g1, g2] = lam.basis();
    g1.scale(&k.0).add(&g2.scale(&k.1))
}

fn stabilizer(lam: &QuadLattice, zeta: &QuadNum, aut: u64, x: &QuadNum) -> u64 {
    let k = key(lam, x);
    let mut y = x.clone();
    let mut count = 0;
    for _ in 0..aut {
        if key(lam, &y) == k {
            count += 1;
        }
        y = zeta.mul(&y);
    }
    count
}

fn orbit(lam: &QuadLattice, zeta: &QuadNum, aut: u64, x: &QuadNum) -> BTreeSet<Key> {
    let mut out = BTreeSet::new();
    let mut y = x.clone();
    for _ in 0..aut {
        out.insert(key(lam, &y));
        y = zeta.mul(&y);
    }
    out
}

/// `(m, partition)` for each branch point of `π0`, sorted.
pub fn lattes_type_oracle(
    lam0: &QuadLattice,
    lam1: &QuadLattice,
    alpha: &QuadNum,
    zeta0: &QuadNum,
    aut0: u64,
    zeta1: &QuadNum,
    aut1: u64,
) -> Vec<(u64, Partition)> {
    let q12 = |n: i64| BigRational::new(BigInt::from(n), BigInt::from(12));
    let mut seen: BTreeSet<Key> = BTreeSet::new();
    let mut branch_orbits = Vec::new();
    for a in 0..12 {
        for b in 0..12 {
            let k = (q12(a), q12(b));
            if seen.contains(&k) {
                continue;
            }
            let x = point(lam0, &k);
            let m = stabilizer(lam0, zeta0, aut0, &x);
            if m > 1 {
                let orb = orbit(lam0, zeta0, aut0, &x);
                seen.extend(orb.iter().cloned());
                branch_orbits.push((m, orb));
            }
        }
    }

    let ker = lam0.scale(&alpha.inv().unwrap()).unwrap();
    let n_ker = (lam1.covolume() / ker.covolume()).to_integer().to_u64().unwrap();
    let [k1, k2] = ker.basis();
    let mut kernel: BTreeSet<Key> = BTreeSet::new();
    'outer: for i in 0..n_ker as i64 {
        for j in 0..n_ker as i64 {
            let v = k1.scale(&BigRational::from_integer(i.into())).add(&k2.scale(&BigRational::from_integer(j.into())));
            kernel.insert(key(lam1, &v));
            if kernel.len() as u64 == n_ker {
                break 'outer;
            }
        }
    }
    assert_eq!(kernel.len() as u64, n_ker);
    let kernel: Vec<QuadNum> = kernel.iter().map(|k| point(lam1, k)).collect();

    let mut out = Vec::new();
    for (m, orb) in branch_orbits {
        let mut pre: BTreeSet<Key> = BTreeSet::new();
        for q in &orb {
            let x0 = point(lam0, q).div(alpha).unwrap();
            for k in &kernel {
                pre.insert(key(lam1, &x0.add(k)));
            }
        }
        let mut parts = Vec::new();
        let mut done: BTreeSet<Key> = BTreeSet::new();
        for p in &pre {
            if done.contains(p) {
                continue;
            }
            let x = point(lam1, p);
            done.extend(orbit(lam1, zeta1, aut1, &x));
            parts.push(m / stabilizer(lam1, zeta1, aut1, &x));
        }
        out.push((m, Partition::new(parts)));
    }
    out.sort();
    out
}
