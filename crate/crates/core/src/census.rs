//! Census of ramification types: rational functions with genus-zero Galois
//! closure (regenerated from polyhedral group actions) and the Lattès types.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constellation::{galois_closure_data, Constellation};
use crate::ellcorr::{lattes_rows, LattesRow, LATTES_TABLE};
use crate::permgroup::{GenSet, Perm, PermError, PermGroup};
use crate::ramcalc::{genus_from_portrait, m_of_branch, Partition, RamificationPortrait, Signature};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CensusError {
    #[error("no generating tuple of orders {0:?} with product identity in {1}")]
    GeneratorSearchFailed(Vec<u64>, String),
    #[error(transparent)]
    Perm(#[from] PermError),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CensusRow {
    pub signature: Signature,
    pub group: String,
    pub order: u64,
    pub degree: u64,
    /// One partition per entry of the signature, in signature order.
    pub ramification: Vec<Partition>,
}

impl CensusRow {
    pub fn sorted_type(&self) -> Vec<Partition> {
        let mut v = self.ramification.clone();
        v.sort();
        v
    }

    fn key(&self) -> (String, u64, Vec<Partition>) {
        (self.group.clone(), self.degree, self.sorted_type())
    }

    pub fn portrait(&self) -> RamificationPortrait {
        RamificationPortrait::from_partitions(self.degree, self.ramification.clone()).expect("row sums to degree")
    }

    /// `signature<TAB>group<TAB>degree<TAB>1^2 2^5,...`
    pub fn tsv(&self) -> String {
        let ty: Vec<String> = self.ramification.iter().map(|p| p.exponent_notation()).collect();
        format!("{}\t{}\t{}\t{}", self.signature, self.group, self.degree, ty.join(", "))
    }
}

impl fmt::Display for CensusRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ty: Vec<String> = self.ramification.iter().map(|p| p.to_string()).collect();
        write!(f, "{} {} degree {}: ({})", self.signature, self.group, self.degree, ty.join(", "))
    }
}

/// A finite rotation group of the sphere as a permutation group.
#[derive(Debug, Clone)]
pub struct PolyhedralGroup {
    pub name: String,
    pub signature: Signature,
    pub gens: GenSet,
}

fn perm(n: usize, s: &str) -> Perm {
    Perm::parse_cycles(n, s).expect("fixed generator")
}

fn rotation(n: usize) -> Perm {
    Perm::from_images((0..n as u32).map(|i| (i + 1) % n as u32).collect()).expect("valid")
}

pub fn cyclic(n: usize) -> PolyhedralGroup {
    PolyhedralGroup {
        name: format!("C{n}"),
        signature: Signature::new(vec![n as u64, n as u64]).expect("n ≥ 2"),
        gens: GenSet::new(n, vec![rotation(n)]).expect("valid"),
    }
}

pub fn dihedral(n: usize) -> PolyhedralGroup {
    let reflection = Perm::from_images((0..n as u32).map(|i| (n as u32 - i) % n as u32).collect()).expect("valid");
    PolyhedralGroup {
        name: format!("D{n}"),
        signature: Signature::new(vec![2, 2, n as u64]).expect("n ≥ 2"),
        gens: GenSet::new(n, vec![rotation(n), reflection]).expect("valid"),
    }
}

pub fn tetrahedral() -> PolyhedralGroup {
    PolyhedralGroup {
        name: "A4".into(),
        signature: Signature::new(vec![2, 3, 3]).expect("valid"),
        gens: GenSet::new(4, vec![perm(4, "(0 1 2)"), perm(4, "(0 1)(2 3)")]).expect("valid"),
    }
}

pub fn octahedral() -> PolyhedralGroup {
    PolyhedralGroup {
        name: "S4".into(),
        signature: Signature::new(vec![2, 3, 4]).expect("valid"),
        gens: GenSet::new(4, vec![perm(4, "(0 1 2 3)"), perm(4, "(0 1)")]).expect("valid"),
    }
}

pub fn icosahedral() -> PolyhedralGroup {
    PolyhedralGroup {
        name: "A5".into(),
        signature: Signature::new(vec![2, 3, 5]).expect("valid"),
        gens: GenSet::new(5, vec![perm(5, "(0 1 2 3 4)"), perm(5, "(0 1 2)")]).expect("valid"),
    }
}

/// Tuples `(g_1, ..., g_k)` of element indices with orders given by the
/// signature, `g_1⋯g_k = 1`, generating the group. At most `limit` tuples, in
/// index order.
pub fn generating_tuples(g: &PermGroup, signature: &Signature, limit: usize) -> Vec<Vec<usize>> {
    let orders = signature.orders();
    let n = g.order();
    let order_of = |x: usize| g.elements[x].order();
    let mut out = Vec::new();
    match orders.len() {
        2 => {
            for a in 0..n {
                if order_of(a) == orders[0] && g.closure(&[a]).len() == n {
                    out.push(vec![a, g.inv(a)]);
                    if out.len() == limit {
                        break;
                    }
                }
            }
        }
        3 => {
            'outer: for a in (0..n).filter(|&a| order_of(a) == orders[0]) {
                for b in (0..n).filter(|&b| order_of(b) == orders[1]) {
                    let c = g.inv(g.mul(a, b));
                    if order_of(c) == orders[2] && g.closure(&[a, b]).len() == n {
                        out.push(vec![a, b, c]);
                        if out.len() == limit {
                            break 'outer;
                        }
                    }
                }
            }
        }
        _ => {}
    }
    out
}

/// Rows of one group block from a given generating tuple: one per conjugacy
/// class of core-free subgroups, via the action on its cosets.
pub fn rows_from_tuple(grp: &PolyhedralGroup, g: &PermGroup, tuple: &[usize]) -> Vec<CensusRow> {
    let mut rows = Vec::new();
    for class in g.subgroups_up_to_conjugacy() {
        if !class.is_core_free() {
            continue;
        }
        let images = g.coset_action(&class.representative, tuple);
        rows.push(CensusRow {
            signature: grp.signature.clone(),
            group: grp.name.clone(),
            order: g.order() as u64,
            degree: (g.order() / class.order) as u64,
            ramification: images.iter().map(|p| p.cycle_type()).collect(),
        });
    }
    dedup(rows)
}

fn dedup(rows: Vec<CensusRow>) -> Vec<CensusRow> {
    let mut seen = BTreeSet::new();
    let mut out: Vec<CensusRow> = rows.into_iter().filter(|r| seen.insert(r.key())).collect();
    out.sort_by(|a, b| b.degree.cmp(&a.degree).then_with(|| a.sorted_type().cmp(&b.sorted_type())));
    out
}

/// Constellation realizing a row: the coset action of the tuple.
pub fn realizing_constellation(g: &PermGroup, tuple: &[usize], subgroup: &[usize]) -> Constellation {
    let images = g.coset_action(subgroup, tuple);
    let degree = images[0].degree();
    let labels = (0..images.len()).map(|i| i.to_string()).collect();
    Constellation::new(degree, labels, images).expect("coset action of a product-one tuple")
}

pub fn group_block(grp: &PolyhedralGroup) -> Result<Vec<CensusRow>, CensusError> {
    let g = PermGroup::new(&grp.gens)?;
    let tuple = generating_tuples(&g, &grp.signature, 1)
        .pop()
        .ok_or_else(|| CensusError::GeneratorSearchFailed(grp.signature.orders().to_vec(), grp.name.clone()))?;
    Ok(rows_from_tuple(grp, &g, &tuple))
}

pub fn polyhedral_groups(n_range: std::ops::RangeInclusive<usize>) -> Vec<PolyhedralGroup> {
    let mut v: Vec<PolyhedralGroup> = n_range.clone().filter(|&n| n >= 2).map(cyclic).collect();
    v.extend(n_range.filter(|&n| n >= 3).map(dihedral));
    v.extend([tetrahedral(), octahedral(), icosahedral()]);
    v
}

/// Genus-zero-closure census for `C_n`, `D_n` with `n` in range, and the
/// three exceptional groups.
pub fn table1(n_range: std::ops::RangeInclusive<usize>) -> Result<Vec<CensusRow>, CensusError> {
    let mut rows = Vec::new();
    for grp in polyhedral_groups(n_range) {
        rows.extend(group_block(&grp)?);
    }
    Ok(rows)
}

fn parts(v: &[(u64, u64)]) -> Partition {
    Partition::new(v.iter().flat_map(|&(p, k)| std::iter::repeat_n(p, k as usize)).collect())
}

fn ref_row(sig: &[u64], group: &str, order: u64, degree: u64, ty: [&[(u64, u64)]; 3]) -> CensusRow {
    CensusRow {
        signature: Signature::new(sig.to_vec()).expect("valid"),
        group: group.into(),
        order,
        degree,
        ramification: ty.iter().map(|c| parts(c)).collect(),
    }
}

/// Transcribed census: cyclic and dihedral templates instantiated on the
/// range, then the A4, S4 and A5 blocks.
pub fn table1_reference(n_range: std::ops::RangeInclusive<usize>) -> Vec<CensusRow> {
    let mut rows = Vec::new();
    for n in n_range.clone().filter(|&n| n >= 2) {
        let d = n as u64;
        rows.push(CensusRow {
            signature: Signature::new(vec![d, d]).expect("valid"),
            group: format!("C{n}"),
            order: d,
            degree: d,
            ramification: vec![parts(&[(d, 1)]), parts(&[(d, 1)])],
        });
    }
    for n in n_range.filter(|&n| n >= 3) {
        let d = n as u64;
        let g = format!("D{n}");
        let sig = [2, 2, d];
        rows.push(ref_row(&sig, &g, 2 * d, 2 * d, [&[(2, d)], &[(2, d)], &[(d, 2)]]));
        let k = d / 2;
        if d % 2 == 1 {
            rows.push(ref_row(&sig, &g, 2 * d, d, [&[(1, 1), (2, k)], &[(1, 1), (2, k)], &[(d, 1)]]));
        } else {
            rows.push(ref_row(&sig, &g, 2 * d, d, [&[(1, 2), (2, k - 1)], &[(2, k)], &[(d, 1)]]));
        }
    }
    let a4 = [2, 3, 3];
    rows.push(ref_row(&a4, "A4", 12, 12, [&[(2, 6)], &[(3, 4)], &[(3, 4)]]));
    rows.push(ref_row(&a4, "A4", 12, 6, [&[(1, 2), (2, 2)], &[(3, 2)], &[(3, 2)]]));
    rows.push(ref_row(&a4, "A4", 12, 4, [&[(1, 1), (3, 1)], &[(2, 2)], &[(1, 1), (3, 1)]]));
    let s4 = [2, 3, 4];
    rows.push(ref_row(&s4, "S4", 24, 24, [&[(2, 12)], &[(3, 8)], &[(4, 6)]]));
    rows.push(ref_row(&s4, "S4", 24, 12, [&[(1, 2), (2, 5)], &[(3, 4)], &[(4, 3)]]));
    rows.push(ref_row(&s4, "S4", 24, 12, [&[(2, 6)], &[(3, 4)], &[(2, 2), (4, 2)]]));
    rows.push(ref_row(&s4, "S4", 24, 8, [&[(2, 4)], &[(1, 2), (3, 2)], &[(4, 2)]]));
    rows.push(ref_row(&s4, "S4", 24, 6, [&[(2, 3)], &[(3, 2)], &[(1, 2), (4, 1)]]));
    rows.push(ref_row(&s4, "S4", 24, 6, [&[(1, 2), (2, 2)], &[(3, 2)], &[(2, 1), (4, 1)]]));
    rows.push(ref_row(&s4, "S4", 24, 4, [&[(1, 2), (2, 1)], &[(1, 1), (3, 1)], &[(4, 1)]]));
    let a5 = [2, 3, 5];
    rows.push(ref_row(&a5, "A5", 60, 60, [&[(2, 30)], &[(3, 20)], &[(5, 12)]]));
    rows.push(ref_row(&a5, "A5", 60, 30, [&[(1, 2), (2, 14)], &[(3, 10)], &[(5, 6)]]));
    rows.push(ref_row(&a5, "A5", 60, 20, [&[(2, 10)], &[(1, 2), (3, 6)], &[(5, 4)]]));
    rows.push(ref_row(&a5, "A5", 60, 15, [&[(1, 3), (2, 6)], &[(3, 5)], &[(5, 3)]]));
    rows.push(ref_row(&a5, "A5", 60, 12, [&[(2, 6)], &[(3, 4)], &[(1, 2), (5, 2)]]));
    rows.push(ref_row(&a5, "A5", 60, 10, [&[(1, 2), (2, 4)], &[(1, 1), (3, 3)], &[(5, 2)]]));
    rows.push(ref_row(&a5, "A5", 60, 6, [&[(1, 2), (2, 2)], &[(3, 2)], &[(1, 1), (5, 1)]]));
    rows.push(ref_row(&a5, "A5", 60, 5, [&[(1, 1), (2, 2)], &[(1, 2), (3, 1)], &[(5, 1)]]));
    rows
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DiffEntry {
    Missing { reference: CensusRow },
    Extra { generated: CensusRow },
    Changed { reference: CensusRow, generated: CensusRow },
}

/// Rows are compared by group, degree and the multiset of partitions.
/// Unmatched rows with the same group and degree are reported as changed.
pub fn table1_match(reference: &[CensusRow], generated: &[CensusRow]) -> Vec<DiffEntry> {
    let gen_keys: BTreeSet<_> = generated.iter().map(CensusRow::key).collect();
    let ref_keys: BTreeSet<_> = reference.iter().map(CensusRow::key).collect();
    let missing: Vec<&CensusRow> = reference.iter().filter(|r| !gen_keys.contains(&r.key())).collect();
    let mut extra: Vec<Option<&CensusRow>> =
        generated.iter().filter(|r| !ref_keys.contains(&r.key())).map(Some).collect();
    let mut out = Vec::new();
    for r in missing {
        let partner = extra.iter_mut().find(|e| e.is_some_and(|g| g.group == r.group && g.degree == r.degree));
        match partner.and_then(Option::take) {
            Some(g) => out.push(DiffEntry::Changed { reference: r.clone(), generated: g.clone() }),
            None => out.push(DiffEntry::Missing { reference: r.clone() }),
        }
    }
    out.extend(extra.into_iter().flatten().map(|g| DiffEntry::Extra { generated: g.clone() }));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table2Entry {
    pub row: usize,
    /// Types found outside the published table.
    pub supplement: bool,
    pub d: u64,
    pub sig0: Signature,
    pub sig1: Signature,
    pub ramification: Vec<Partition>,
    pub sums_ok: bool,
    pub genus: i64,
    pub signature_ok: bool,
}

impl Table2Entry {
    pub fn passes(&self) -> bool {
        self.sums_ok && self.genus == 0 && self.signature_ok
    }

    pub fn tsv(&self) -> String {
        let ty: Vec<String> = self.ramification.iter().map(|p| p.exponent_notation()).collect();
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}",
            self.row,
            self.sig0,
            self.sig1,
            self.d,
            ty.join(", "),
            if self.passes() { "ok" } else { "FAIL" }
        )
    }
}

fn table2_entry(r: &LattesRow, d: u64) -> Option<Table2Entry> {
    let portrait = r.instantiate(d).ok()?;
    let ramification: Vec<Partition> = portrait.branches.iter().map(|b| b.partition.clone()).collect();
    let sums_ok = ramification.iter().all(|p| p.sum() == d);
    let genus = genus_from_portrait(&portrait).unwrap_or(i64::MIN);
    // Column-wise: each column's lcm divides the order of its branch point.
    let sig0 = r.sig0();
    let signature_ok = ramification.len() == sig0.len()
        && ramification.iter().zip(sig0.orders()).all(|(p, &m)| m % m_of_branch(p) == 0);
    Some(Table2Entry {
        row: r.row,
        supplement: !LATTES_TABLE.iter().any(|t| t.row == r.row),
        d,
        sig0,
        sig1: r.sig1(),
        ramification,
        sums_ok,
        genus,
        signature_ok,
    })
}

/// Every Lattès row instantiated at each admissible `d ≤ d_max`. Instances
/// where a count formula would go negative are skipped.
pub fn table2(d_max: u64) -> Vec<Table2Entry> {
    let mut out = Vec::new();
    for r in lattes_rows() {
        for d in 1..=d_max {
            if r.admits_degree(d) {
                out.extend(table2_entry(r, d));
            }
        }
    }
    out
}

/// Euclidean signatures `Σ(1 − 1/m) = 2`.
pub fn euclidean_signatures() -> Vec<Signature> {
    crate::ramcalc::enumerate_signatures(&num_rational::BigRational::from_integer(2.into()), 4)
}

/// Galois closure of every regenerated row is the group itself, of genus 0.
pub fn check_closure(grp: &PolyhedralGroup, cap: usize) -> Result<bool, CensusError> {
    let g = PermGroup::new(&grp.gens)?;
    let Some(tuple) = generating_tuples(&g, &grp.signature, 1).pop() else {
        return Err(CensusError::GeneratorSearchFailed(grp.signature.orders().to_vec(), grp.name.clone()));
    };
    for class in g.subgroups_up_to_conjugacy().iter().filter(|c| c.is_core_free()) {
        let c = realizing_constellation(&g, &tuple, &class.representative);
        match galois_closure_data(&c, cap) {
            Ok(data) if data.closure_degree == g.order() && data.closure_genus == 0 => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// `lcm` of the orders of the tuple entries divides the group order.
pub fn tuple_is_consistent(g: &PermGroup, tuple: &[usize]) -> bool {
    let l = tuple.iter().fold(1u64, |acc, &x| acc.lcm(&g.elements[x].order()));
    (g.order() as u64).is_multiple_of(l)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(s: &[&str]) -> Vec<Partition> {
        let mut v: Vec<Partition> = s.iter().map(|x| Partition::parse_exponent_notation(x).unwrap()).collect();
        v.sort();
        v
    }

    #[test]
    fn a4_block() {
        let rows = group_block(&tetrahedral()).unwrap();
        let got: Vec<(u64, Vec<Partition>)> = rows.iter().map(|r| (r.degree, r.sorted_type())).collect();
        assert_eq!(
            got,
            vec![
                (12, ty(&["2^6", "3^4", "3^4"])),
                (6, ty(&["1^2 2^2", "3^2", "3^2"])),
                (4, ty(&["1 3", "2^2", "1 3"]))
            ]
        );
    }

    #[test]
    fn a5_and_d5_blocks() {
        let degrees: Vec<u64> = group_block(&icosahedral()).unwrap().iter().map(|r| r.degree).collect();
        assert_eq!(degrees, vec![60, 30, 20, 15, 12, 10, 6, 5]);
        let d5 = group_block(&dihedral(5)).unwrap();
        assert_eq!(d5.len(), 2);
        assert_eq!(d5[0].sorted_type(), ty(&["2^5", "2^5", "5^2"]));
        assert_eq!(d5[1].sorted_type(), ty(&["1 2^2", "1 2^2", "5"]));
    }

    #[test]
    fn reference_matches_and_detects_corruption() {
        let generated = table1(3..=12).unwrap();
        let reference = table1_reference(3..=12);
        assert_eq!(table1_match(&reference, &generated), vec![]);
        let mut bad = reference.clone();
        let i = bad.iter().position(|r| r.group == "S4" && r.degree == 8).unwrap();
        bad[i].ramification[1] = Partition::parse_exponent_notation("2^4").unwrap();
        let diff = table1_match(&bad, &generated);
        assert_eq!(diff.len(), 1);
        assert!(matches!(diff[0], DiffEntry::Changed { .. }));
        let empty = std::ops::RangeInclusive::new(5, 4);
        assert_eq!(table1_match(&table1_reference(empty.clone()), &table1(empty).unwrap()), vec![]);
    }

    #[test]
    fn tuple_independence() {
        for grp in [tetrahedral(), octahedral(), icosahedral()] {
            let g = PermGroup::new(&grp.gens).unwrap();
            let tuples = generating_tuples(&g, &grp.signature, usize::MAX);
            assert!(tuples.len() >= 2);
            let first = rows_from_tuple(&grp, &g, &tuples[0]);
            for t in [&tuples[1], tuples.last().unwrap()] {
                assert!(tuple_is_consistent(&g, t));
                let rows = rows_from_tuple(&grp, &g, t);
                assert_eq!(
                    rows.iter().map(CensusRow::key).collect::<Vec<_>>(),
                    first.iter().map(CensusRow::key).collect::<Vec<_>>()
                );
            }
        }
    }

    #[test]
    fn closures_are_the_groups() {
        for grp in [cyclic(6), dihedral(6), tetrahedral(), octahedral(), icosahedral()] {
            assert!(check_closure(&grp, 200_000).unwrap(), "{}", grp.name);
        }
    }

    #[test]
    fn table2_examples() {
        let t = table2(48);
        assert!(t.iter().all(Table2Entry::passes));
        let find = |row: usize, d: u64| t.iter().find(|e| e.row == row && e.d == d).unwrap().ramification.clone();
        let p = |s: &str| Partition::parse_exponent_notation(s).unwrap();
        assert_eq!(find(1, 3), vec![p("1 2"), p("1 2"), p("1 2"), p("1 2")]);
        assert_eq!(find(9, 6), vec![p("2^3"), p("3^2"), p("1 2 3")]);
        assert_eq!(find(20, 8), vec![p("2^4"), p("4^2"), p("2^4")]);
    }

    #[test]
    fn four_euclidean_signatures() {
        let names: Vec<String> = euclidean_signatures().iter().map(|s| s.to_string()).collect();
        assert_eq!(names.len(), 4);
        for s in ["(2,2,2,2)", "(3,3,3)", "(2,4,4)", "(2,3,6)"] {
            assert!(names.contains(&s.to_string()), "{s} missing from {names:?}");
        }
    }
}
