mod common;

use common::lattes_oracle::lattes_type_oracle;
use corrorbit::ellcorr::{automorphism_generator, lattes_query_from_lattices, lattes_row, quotient_signature};
use corrorbit::quadorder::{QuadField, QuadLattice, QuadNum};
use corrorbit::ramcalc::Partition;
use std::collections::BTreeSet;

fn table_side(
    lam0: &QuadLattice,
    lam1: &QuadLattice,
    alpha: &QuadNum,
    a0: u64,
    a1: u64,
) -> Option<(usize, Vec<(u64, Partition)>)> {
    let q = lattes_query_from_lattices(lam0, lam1, alpha, a0, a1).ok()?;
    let row = lattes_row(&q).unwrap_or_else(|e| panic!("{e} for α = {alpha}, auts ({a0},{a1})"));
    let p = row.instantiate(q.d).ok()?;
    let sig0 = quotient_signature(a0).unwrap();
    let mut v: Vec<(u64, Partition)> =
        sig0.orders().iter().copied().zip(p.branches.into_iter().map(|b| b.partition)).collect();
    v.sort();
    Some((row.row, v))
}

fn check(
    d: i64,
    lam0: &QuadLattice,
    lam1: &QuadLattice,
    alpha: &QuadNum,
    a0: u64,
    a1: u64,
    rows: &mut BTreeSet<usize>,
) {
    let Some((row, expected)) = table_side(lam0, lam1, alpha, a0, a1) else { return };
    let z0 = automorphism_generator(lam0, a0).unwrap();
    let z1 = automorphism_generator(lam1, a1).unwrap();
    let got = lattes_type_oracle(lam0, lam1, alpha, &z0, a0, &z1, a1);
    assert_eq!(got, expected, "D = {d}, α = {alpha}, auts ({a0},{a1}), row {row}");
    rows.insert(row);
}

#[test]
fn table_matches_point_count_oracle() {
    let mut rows = BTreeSet::new();
    for (d, pairs) in
        [(-1i64, vec![(2, 2), (4, 4), (4, 2)]), (-3, vec![(2, 2), (3, 3), (6, 6), (6, 3), (6, 2)]), (-7, vec![(2, 2)])]
    {
        let o = QuadField::new(d).unwrap().maximal_order().lattice;
        let q = if d == -3 { 2 } else { 1 };
        for u in -6i64..=6 {
            for v in 0i64..=3 {
                let alpha = QuadNum::new(
                    d,
                    corrorbit::util::parse_rat(&format!("{u}/{q}")).unwrap(),
                    corrorbit::util::parse_rat(&format!("{v}/{q}")).unwrap(),
                );
                if alpha.is_zero() || !o.scale(&alpha).unwrap().is_sublattice_of(&o) {
                    continue;
                }
                for &(a0, a1) in &pairs {
                    check(d, &o, &o, &alpha, a0, a1, &mut rows);
                }
            }
        }
    }
    // Λ1 of conductor 2 inside the maximal order Λ0.
    for (d, pairs) in [(-1i64, vec![(2, 2), (4, 2)]), (-3, vec![(2, 2), (6, 2)])] {
        let field = QuadField::new(d).unwrap();
        let o = field.maximal_order().lattice;
        let o2 = field.order_of_conductor(2).lattice;
        for u in -2i64..=2 {
            for v in 0i64..=2 {
                let alpha = QuadNum::from_ints(d, u, v);
                if alpha.is_zero() {
                    continue;
                }
                for &(a0, a1) in &pairs {
                    check(d, &o, &o2, &alpha, a0, a1, &mut rows);
                }
            }
        }
    }
    eprintln!("rows reached: {rows:?}");
    for r in 1..=21 {
        assert!(rows.contains(&r), "row {r} not reached; reached {rows:?}");
    }
}
