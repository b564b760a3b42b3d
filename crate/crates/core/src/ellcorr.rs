//! Correspondences between CM elliptic curves `ℂ/Λ1 → ℂ/Λ0` given by
//! `x ↦ αx + γ` and `x ↦ βx + δ`, and the ramification of generalized Lattès
//! maps built from cyclic quotients of such curves.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadorder::{
    ideal, is_invertible, lat_index, multiplier_ring, OrderDesc, QuadError, QuadField, QuadLattice, QuadNum,
};
use crate::ramcalc::{Branch, Partition, RamificationPortrait, Signature};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EllError {
    #[error("containment violated: {0}")]
    ContainmentViolated(String),
    #[error("no Lattès row matches: {0}")]
    NoMatchingRow(String),
    #[error("row {row} has a negative exponent at d = {d}")]
    DegenerateRow { row: usize, d: u64 },
    #[error("incompatible automorphism: {0}")]
    IncompatibleAutomorphism(String),
    #[error(transparent)]
    Quad(#[from] QuadError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllCorrSpec {
    pub field: QuadField,
    pub lam0: QuadLattice,
    pub lam1: QuadLattice,
    pub alpha: QuadNum,
    pub beta: QuadNum,
    /// Translations; they do not affect irreducibility or genus.
    pub gamma: Option<QuadNum>,
    pub delta: Option<QuadNum>,
}

fn check_containment(lam0: &QuadLattice, lam1: &QuadLattice, x: &QuadNum, name: &str) -> Result<(), EllError> {
    if x.is_zero() {
        return Err(EllError::ContainmentViolated(format!("{name} = 0")));
    }
    if !lam1.scale(x)?.is_sublattice_of(lam0) {
        return Err(EllError::ContainmentViolated(format!("{name}·Λ1 ⊄ Λ0 for {name} = {x}")));
    }
    Ok(())
}

impl EllCorrSpec {
    pub fn new(
        field: QuadField,
        lam0: QuadLattice,
        lam1: QuadLattice,
        alpha: QuadNum,
        beta: QuadNum,
    ) -> Result<Self, EllError> {
        for l in [&lam0, &lam1] {
            if l.d != field.d {
                return Err(QuadError::FieldMismatch(field.d, l.d).into());
            }
        }
        check_containment(&lam0, &lam1, &alpha, "α")?;
        check_containment(&lam0, &lam1, &beta, "β")?;
        Ok(EllCorrSpec { field, lam0, lam1, alpha, beta, gamma: None, delta: None })
    }

    pub fn with_translations(mut self, gamma: QuadNum, delta: QuadNum) -> Self {
        self.gamma = Some(gamma);
        self.delta = Some(delta);
        self
    }

    pub fn validate(&self) -> Result<(), EllError> {
        check_containment(&self.lam0, &self.lam1, &self.alpha, "α")?;
        check_containment(&self.lam0, &self.lam1, &self.beta, "β")
    }
}

/// The fiber product of the two maps is irreducible (of genus one) iff
/// `αΛ1 + βΛ1 = Λ0`.
pub fn irreducible_genus_one(
    lam0: &QuadLattice,
    lam1: &QuadLattice,
    alpha: &QuadNum,
    beta: &QuadNum,
) -> Result<bool, EllError> {
    check_containment(lam0, lam1, alpha, "α")?;
    check_containment(lam0, lam1, beta, "β")?;
    Ok(lam1.scale(alpha)?.sum(&lam1.scale(beta)?)? == *lam0)
}

fn index_u64(sub: &QuadLattice, sup: &QuadLattice) -> u64 {
    let r = lat_index(sub, sup).expect("same field");
    debug_assert!(r.is_integer());
    r.to_integer().to_u64().expect("index fits in u64")
}

/// `([Λ0 : αΛ1], [Λ0 : βΛ1])`.
pub fn degrees(spec: &EllCorrSpec) -> Result<(u64, u64), EllError> {
    spec.validate()?;
    let a = spec.lam1.scale(&spec.alpha)?;
    let b = spec.lam1.scale(&spec.beta)?;
    Ok((index_u64(&a, &spec.lam0), index_u64(&b, &spec.lam0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityWitness {
    /// Both multipliers are rational integers with a common factor.
    GcdNotOne,
    /// `αΛ1 + βΛ1 ≠ Λ0`.
    SumCondition,
    /// `αO1 + βO1` is not an invertible `O1`-ideal.
    NotInvertible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum StabilityVerdict {
    StableGenusOneForever,
    ReducibleAt { n: u32, witness: StabilityWitness },
}

fn rational_integer(x: &QuadNum) -> Option<BigInt> {
    (x.is_rational() && x.u.is_integer()).then(|| x.u.to_integer())
}

pub fn stability_verdict(spec: &EllCorrSpec) -> Result<StabilityVerdict, EllError> {
    spec.validate()?;
    if spec.lam0 == spec.lam1 {
        if let (Some(a), Some(b)) = (rational_integer(&spec.alpha), rational_integer(&spec.beta)) {
            return Ok(if a.gcd(&b) == BigInt::from(1) {
                StabilityVerdict::StableGenusOneForever
            } else {
                StabilityVerdict::ReducibleAt { n: 2, witness: StabilityWitness::GcdNotOne }
            });
        }
    }
    if !irreducible_genus_one(&spec.lam0, &spec.lam1, &spec.alpha, &spec.beta)? {
        return Ok(StabilityVerdict::ReducibleAt { n: 2, witness: StabilityWitness::SumCondition });
    }
    let o1 = multiplier_ring(&spec.lam1);
    let j = ideal(&o1, &[spec.alpha.clone(), spec.beta.clone()])?;
    if !is_invertible(&j, &o1)? {
        return Ok(StabilityVerdict::ReducibleAt { n: 3, witness: StabilityWitness::NotInvertible });
    }
    Ok(StabilityVerdict::StableGenusOneForever)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterateStep {
    pub n: u32,
    /// `Λ_n`; for a reducible step this is the identity component.
    pub lattice: QuadLattice,
    pub irreducible: bool,
    /// Unordered degree pair of the two projections `E_n → E_{n−1}`.
    pub degrees: (u64, u64),
}

fn sorted_pair(a: u64, b: u64) -> (u64, u64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Iterated fiber products: `Λ_{n+1} = α_nΛ_n ∩ β_nΛ_n` with
/// `α_{n+1} = α_n⁻¹`, `β_{n+1} = β_n⁻¹`. Stops after the first reducible step.
pub fn iterate_simulation(spec: &EllCorrSpec, n_max: u32) -> Result<Vec<IterateStep>, EllError> {
    spec.validate()?;
    let (d0, e0) = degrees(spec)?;
    let mut steps =
        vec![IterateStep { n: 1, lattice: spec.lam1.clone(), irreducible: true, degrees: sorted_pair(d0, e0) }];
    let mut prev = spec.lam0.clone();
    let mut cur = spec.lam1.clone();
    let (mut a, mut b) = (spec.alpha.clone(), spec.beta.clone());
    for n in 2..=n_max {
        let al = cur.scale(&a)?;
        let bl = cur.scale(&b)?;
        let irreducible = al.sum(&bl)? == prev;
        let next = al.intersect(&bl)?;
        a = a.inv()?;
        b = b.inv()?;
        let da = index_u64(&next.scale(&a)?, &cur);
        let db = index_u64(&next.scale(&b)?, &cur);
        steps.push(IterateStep { n, lattice: next.clone(), irreducible, degrees: sorted_pair(da, db) });
        if !irreducible {
            break;
        }
        prev = cur;
        cur = next;
    }
    Ok(steps)
}

/// First `n` at which the simulated iterate is reducible, if any.
pub fn first_reducible(steps: &[IterateStep]) -> Option<u32> {
    steps.iter().find(|s| !s.irreducible).map(|s| s.n)
}

/// `|ker ψ ∩ E1[μ]| = [α⁻¹Λ0 ∩ μ⁻¹Λ1 : Λ1]` for `ψ : ℂ/Λ1 → ℂ/Λ0`, `x ↦ αx`.
pub fn kernel_torsion_order(
    lam1: &QuadLattice,
    lam0: &QuadLattice,
    alpha: &QuadNum,
    mu: &QuadNum,
) -> Result<u64, EllError> {
    check_containment(lam0, lam1, alpha, "α")?;
    if mu.is_zero() {
        return Err(QuadError::ZeroScalar.into());
    }
    let ker = lam0.scale(&alpha.inv()?)?;
    let tors = lam1.scale(&mu.inv()?)?;
    Ok(index_u64(lam1, &ker.intersect(&tors)?))
}

/// Order of the automorphism group generating a cyclic quotient, and its
/// signature: `2 ↔ (2,2,2,2)`, `3 ↔ (3,3,3)`, `4 ↔ (2,4,4)`, `6 ↔ (2,3,6)`.
pub fn quotient_signature(aut: u64) -> Option<Signature> {
    let v = match aut {
        2 => vec![2, 2, 2, 2],
        3 => vec![3, 3, 3],
        4 => vec![2, 4, 4],
        6 => vec![2, 3, 6],
        _ => return None,
    };
    Some(Signature::new(v).expect("valid"))
}

pub fn quotient_aut_order(sig: &Signature) -> Option<u64> {
    [2, 3, 4, 6].into_iter().find(|&a| quotient_signature(a).as_ref() == Some(sig))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelOrders {
    /// `|ker ψ ∩ E1[2]|`.
    pub two: Option<u64>,
    /// `|ker ψ ∩ E1[ω − 1]|`.
    pub omega_minus_one: Option<u64>,
    /// For `π0` of signature (2,4,4) and `π1` of signature (2,2,2,2): whether
    /// `ψ(E1[2])` is stable under the order-4 automorphism of `E0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image_stable: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LattesTypeQuery {
    pub sig0: Signature,
    pub sig1: Signature,
    pub d: u64,
    pub kernel: KernelOrders,
}

#[derive(Debug, Clone, Copy)]
enum Ex {
    C(u64),
    /// `(d − sub)/div`
    F(u64, u64),
}

use Ex::{C, F};

type Column = &'static [(u64, Ex)];

#[derive(Debug, Clone, Copy)]
pub struct LattesRow {
    pub row: usize,
    pub aut0: u64,
    pub aut1: u64,
    pub modulus: u64,
    pub residue: u64,
    pub k2: Option<u64>,
    pub k3: Option<u64>,
    pub image_stable: Option<bool>,
    columns: &'static [Column],
}

const fn row(
    row: usize,
    aut: (u64, u64),
    congr: (u64, u64),
    k: (Option<u64>, Option<u64>),
    columns: &'static [Column],
) -> LattesRow {
    LattesRow {
        row,
        aut0: aut.0,
        aut1: aut.1,
        modulus: congr.0,
        residue: congr.1,
        k2: k.0,
        k3: k.1,
        image_stable: None,
        columns,
    }
}

const fn with_image(mut r: LattesRow, stable: bool) -> LattesRow {
    r.image_stable = Some(stable);
    r
}

const ALL2: Column = &[(2, F(0, 2))];
const ALL3: Column = &[(3, F(0, 3))];
const ALL4: Column = &[(4, F(0, 4))];
const ODD2: Column = &[(1, C(1)), (2, F(1, 2))];
const ONE3: Column = &[(1, C(1)), (3, F(1, 3))];

/// Ramification types of generalized Lattès maps `L` with `L∘π1 = π0∘ψ`,
/// indexed by the automorphism orders of `π0, π1`, a congruence on `d` and
/// the kernel orders of `ψ` on the critical torsion of `π1`.
pub static LATTES_TABLE: [LattesRow; 20] = [
    row(1, (2, 2), (2, 1), (Some(1), None), &[ODD2, ODD2, ODD2, ODD2]),
    row(2, (2, 2), (2, 0), (Some(2), None), &[&[(1, C(2)), (2, F(2, 2))], &[(1, C(2)), (2, F(2, 2))], ALL2, ALL2]),
    row(3, (2, 2), (4, 0), (Some(4), None), &[&[(1, C(4)), (2, F(4, 2))], ALL2, ALL2, ALL2]),
    row(4, (3, 3), (3, 1), (None, Some(1)), &[ONE3, ONE3, ONE3]),
    row(5, (3, 3), (3, 0), (None, Some(3)), &[&[(1, C(3)), (3, F(3, 3))], ALL3, ALL3]),
    row(
        6,
        (6, 6),
        (6, 1),
        (Some(1), Some(1)),
        &[&[(1, C(1)), (2, F(1, 2))], &[(1, C(1)), (3, F(1, 3))], &[(1, C(1)), (6, F(1, 6))]],
    ),
    row(
        7,
        (6, 6),
        (6, 4),
        (Some(4), Some(1)),
        &[ALL2, &[(1, C(1)), (3, F(1, 3))], &[(1, C(1)), (3, C(1)), (6, F(4, 6))]],
    ),
    row(
        8,
        (6, 6),
        (6, 3),
        (Some(1), Some(3)),
        &[&[(1, C(1)), (2, F(1, 2))], ALL3, &[(1, C(1)), (2, C(1)), (6, F(3, 6))]],
    ),
    row(9, (6, 6), (6, 0), (Some(4), Some(3)), &[ALL2, ALL3, &[(1, C(1)), (2, C(1)), (3, C(1)), (6, F(6, 6))]]),
    row(10, (6, 3), (6, 2), (None, Some(1)), &[ALL2, &[(1, C(2)), (3, F(2, 3))], &[(2, C(1)), (6, F(2, 6))]]),
    row(11, (6, 3), (6, 0), (None, Some(3)), &[ALL2, ALL3, &[(2, C(3)), (6, F(6, 6))]]),
    row(12, (6, 2), (6, 3), (Some(1), None), &[&[(1, C(3)), (2, F(3, 2))], ALL3, &[(3, C(1)), (6, F(3, 6))]]),
    row(13, (6, 2), (6, 0), (Some(2), None), &[&[(1, C(2)), (2, F(2, 2))], ALL3, &[(3, C(2)), (6, F(6, 6))]]),
    row(14, (6, 2), (12, 0), (Some(4), None), &[ALL2, ALL3, &[(3, C(4)), (6, F(12, 6))]]),
    row(
        15,
        (4, 4),
        (4, 1),
        (Some(1), None),
        &[&[(1, C(1)), (2, F(1, 2))], &[(1, C(1)), (4, F(1, 4))], &[(1, C(1)), (4, F(1, 4))]],
    ),
    row(16, (4, 4), (4, 2), (Some(2), None), &[ALL2, &[(1, C(2)), (4, F(2, 4))], &[(2, C(1)), (4, F(2, 4))]]),
    row(17, (4, 4), (4, 0), (Some(4), None), &[ALL2, ALL4, &[(1, C(2)), (2, C(1)), (4, F(4, 4))]]),
    row(
        18,
        (4, 2),
        (4, 2),
        (Some(1), None),
        &[&[(1, C(2)), (2, F(2, 2))], &[(2, C(1)), (4, F(2, 4))], &[(2, C(1)), (4, F(2, 4))]],
    ),
    with_image(
        row(19, (4, 2), (4, 0), (Some(2), None), &[ALL2, &[(2, C(2)), (4, F(4, 4))], &[(2, C(2)), (4, F(4, 4))]]),
        true,
    ),
    row(20, (4, 2), (4, 0), (Some(4), None), &[ALL2, ALL4, &[(2, C(4)), (4, F(8, 4))]]),
];

/// Types missing from the table above. When `ψ` kills a cyclic subgroup of
/// `E1[2]` and sends `E1[2]` onto a point of order 2 that is not fixed by the
/// order-4 automorphism, two critical points of `π1` lie over the order-2
/// branch point of `π0`.
pub static LATTES_SUPPLEMENT: [LattesRow; 1] = [with_image(
    row(21, (4, 2), (4, 0), (Some(2), None), &[&[(1, C(2)), (2, F(2, 2))], &[(2, C(2)), (4, F(4, 4))], ALL4]),
    false,
)];

/// Table rows followed by the supplement.
pub fn lattes_rows() -> impl Iterator<Item = &'static LattesRow> {
    LATTES_TABLE.iter().chain(LATTES_SUPPLEMENT.iter())
}

impl LattesRow {
    pub fn sig0(&self) -> Signature {
        quotient_signature(self.aut0).expect("table entry")
    }

    pub fn sig1(&self) -> Signature {
        quotient_signature(self.aut1).expect("table entry")
    }

    pub fn admits_degree(&self, d: u64) -> bool {
        d % self.modulus == self.residue
    }

    fn kernel_matches(&self, k: &KernelOrders) -> bool {
        (self.k2.is_none() || self.k2 == k.two)
            && (self.k3.is_none() || self.k3 == k.omega_minus_one)
            && (self.image_stable.is_none() || k.image_stable.is_none() || self.image_stable == k.image_stable)
    }

    /// The row's type at degree `d`, one branch per entry of `sig0` in order.
    pub fn instantiate(&self, d: u64) -> Result<RamificationPortrait, EllError> {
        if d == 0 || !self.admits_degree(d) {
            return Err(EllError::NoMatchingRow(format!(
                "row {} needs d ≡ {} mod {}",
                self.row, self.residue, self.modulus
            )));
        }
        let mut branches = Vec::new();
        for (i, col) in self.columns.iter().enumerate() {
            let mut parts = Vec::new();
            for &(p, ex) in col.iter() {
                let count = match ex {
                    C(c) => c,
                    F(sub, div) => {
                        if d < sub {
                            return Err(EllError::DegenerateRow { row: self.row, d });
                        }
                        (d - sub) / div
                    }
                };
                parts.extend(std::iter::repeat_n(p, count as usize));
            }
            let partition = Partition::new(parts);
            debug_assert_eq!(partition.sum(), d, "row {} column {i}", self.row);
            branches.push(Branch { label: i.to_string(), partition });
        }
        Ok(RamificationPortrait { degree: d, branches })
    }
}

/// The unique table row matching the query.
pub fn lattes_row(q: &LattesTypeQuery) -> Result<&'static LattesRow, EllError> {
    let (a0, a1) = match (quotient_aut_order(&q.sig0), quotient_aut_order(&q.sig1)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(EllError::NoMatchingRow(format!("{} / {} are not quotient signatures", q.sig0, q.sig1))),
    };
    let mut hits =
        lattes_rows().filter(|r| r.aut0 == a0 && r.aut1 == a1 && r.admits_degree(q.d) && r.kernel_matches(&q.kernel));
    match (hits.next(), hits.next()) {
        (Some(r), None) => Ok(r),
        (None, _) => Err(EllError::NoMatchingRow(format!(
            "{} over {} at d = {} with kernel orders {:?}",
            q.sig0, q.sig1, q.d, q.kernel
        ))),
        (Some(r), Some(s)) => Err(EllError::NoMatchingRow(format!("ambiguous between rows {} and {}", r.row, s.row))),
    }
}

pub fn lattes_type(q: &LattesTypeQuery) -> Result<RamificationPortrait, EllError> {
    lattes_row(q)?.instantiate(q.d)
}

/// `ζ` generating the automorphism group of order `aut` of `ℂ/Λ`, if `Λ` is
/// stable under it.
pub fn automorphism_generator(lam: &QuadLattice, aut: u64) -> Result<QuadNum, EllError> {
    let field = lam.field();
    let zeta = match aut {
        2 => QuadNum::integer(field.d, -1),
        3 => field.zeta3().ok_or_else(|| EllError::IncompatibleAutomorphism("order 3 needs D = -3".into()))?,
        6 => field
            .zeta3()
            .map(|z| z.neg())
            .ok_or_else(|| EllError::IncompatibleAutomorphism("order 6 needs D = -3".into()))?,
        4 => field.i().ok_or_else(|| EllError::IncompatibleAutomorphism("order 4 needs D = -1".into()))?,
        _ => return Err(EllError::IncompatibleAutomorphism(format!("no automorphism of order {aut}"))),
    };
    if lam.scale(&zeta)? != *lam {
        return Err(EllError::IncompatibleAutomorphism(format!("{lam} is not stable under {zeta}")));
    }
    Ok(zeta)
}

/// Lattès type of `L` with `L∘π1 = π0∘ψ`, `ψ(x) = αx`, where `π_i` is the
/// quotient by the automorphism group of order `aut_i`.
pub fn lattes_type_from_lattices(
    lam0: &QuadLattice,
    lam1: &QuadLattice,
    alpha: &QuadNum,
    aut0: u64,
    aut1: u64,
) -> Result<RamificationPortrait, EllError> {
    lattes_query_from_lattices(lam0, lam1, alpha, aut0, aut1).and_then(|q| lattes_type(&q))
}

pub fn lattes_query_from_lattices(
    lam0: &QuadLattice,
    lam1: &QuadLattice,
    alpha: &QuadNum,
    aut0: u64,
    aut1: u64,
) -> Result<LattesTypeQuery, EllError> {
    const PAIRS: [(u64, u64); 7] = [(2, 2), (3, 3), (6, 6), (6, 3), (6, 2), (4, 4), (4, 2)];
    if !PAIRS.contains(&(aut0, aut1)) {
        return Err(EllError::IncompatibleAutomorphism(format!("no Lattès maps for orders ({aut0}, {aut1})")));
    }
    check_containment(lam0, lam1, alpha, "α")?;
    automorphism_generator(lam0, aut0)?;
    automorphism_generator(lam1, aut1)?;
    let deg_psi = index_u64(&lam1.scale(alpha)?, lam0);
    let d = deg_psi * aut0 / aut1;
    let d_field = lam0.d;
    let two = kernel_torsion_order(lam1, lam0, alpha, &QuadNum::integer(d_field, 2))?;
    let omega_minus_one = match lam1.field().zeta3() {
        Some(w) if aut1 == 3 || aut1 == 6 => {
            Some(kernel_torsion_order(lam1, lam0, alpha, &w.sub(&QuadNum::one(d_field)))?)
        }
        _ => None,
    };
    let image_stable = if (aut0, aut1) == (4, 2) {
        let half = QuadNum::new(d_field, crate::quadorder::rat(1, 2), crate::quadorder::rat(0, 1));
        let image = lam1.scale(&alpha.mul(&half))?.sum(lam0)?;
        let i = lam0.field().i().expect("order 4 needs D = -1");
        Some(image.scale(&i)? == image)
    } else {
        None
    };
    Ok(LattesTypeQuery {
        sig0: quotient_signature(aut0).expect("listed"),
        sig1: quotient_signature(aut1).expect("listed"),
        d,
        kernel: KernelOrders { two: Some(two), omega_minus_one, image_stable },
    })
}

/// Checks the structural consistency of a Lattès type: each partition sums to
/// `d`, every part divides its column's index `m`, and the indices `m/e` of
/// non-maximal parts form the signature of `π1`.
pub fn lattes_type_consistent(row: &LattesRow, portrait: &RamificationPortrait) -> bool {
    let sig0 = row.sig0();
    if portrait.branches.len() != sig0.len() {
        return false;
    }
    let mut induced = Vec::new();
    for (b, &m) in portrait.branches.iter().zip(sig0.orders()) {
        if b.partition.sum() != portrait.degree {
            return false;
        }
        for &e in b.partition.parts() {
            if m % e != 0 {
                return false;
            }
            if e < m {
                induced.push(m / e);
            }
        }
    }
    induced.sort_unstable();
    induced == row.sig1().orders()
}

/// Convenience: ideal of the multiplier ring of `Λ1` generated by `α, β`.
pub fn multiplier_ideal(spec: &EllCorrSpec) -> Result<(OrderDesc, QuadLattice), EllError> {
    let o1 = multiplier_ring(&spec.lam1);
    let j = ideal(&o1, &[spec.alpha.clone(), spec.beta.clone()])?;
    Ok((o1, j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadorder::rat;
    use crate::ramcalc::{genus_from_portrait, signature_of};

    fn num(d: i64, u: i64, v: i64) -> QuadNum {
        QuadNum::from_ints(d, u, v)
    }

    fn spec(d: i64, lam0: QuadLattice, lam1: QuadLattice, a: QuadNum, b: QuadNum) -> EllCorrSpec {
        EllCorrSpec::new(QuadField::new(d).unwrap(), lam0, lam1, a, b).unwrap()
    }

    #[test]
    fn irreducibility_examples() {
        let z = QuadField::gaussian().maximal_order().lattice;
        assert!(irreducible_genus_one(&z, &z, &num(-1, 2, 0), &num(-1, 3, 0)).unwrap());
        assert!(!irreducible_genus_one(&z, &z, &num(-1, 1, 1), &num(-1, 2, 0)).unwrap());
        assert!(irreducible_genus_one(&z, &z, &num(-1, 1, 1), &num(-1, 1, 2)).unwrap());
        let half = QuadNum::new(-1, rat(1, 2), rat(0, 1));
        assert!(matches!(irreducible_genus_one(&z, &z, &half, &num(-1, 1, 0)), Err(EllError::ContainmentViolated(_))));
    }

    #[test]
    fn degree_examples() {
        let z = QuadField::gaussian().maximal_order().lattice;
        assert_eq!(degrees(&spec(-1, z.clone(), z.clone(), num(-1, 2, 0), num(-1, 3, 0))).unwrap(), (4, 9));
        assert_eq!(degrees(&spec(-1, z.clone(), z.clone(), num(-1, 1, 1), num(-1, 1, 2))).unwrap(), (2, 5));
        assert_eq!(degrees(&spec(-1, z.clone(), z.clone(), num(-1, 0, 1), num(-1, -1, 0))).unwrap(), (1, 1));
    }

    #[test]
    fn verdict_examples() {
        let z7 = QuadField::new(-7).unwrap().order_of_conductor(2).lattice;
        let s = spec(-7, z7.clone(), z7, num(-7, 2, 0), num(-7, 3, 0));
        assert_eq!(stability_verdict(&s).unwrap(), StabilityVerdict::StableGenusOneForever);
        let z = QuadField::gaussian().maximal_order().lattice;
        let s = spec(-1, z.clone(), z, num(-1, 1, 1), num(-1, 2, 0));
        assert!(matches!(stability_verdict(&s).unwrap(), StabilityVerdict::ReducibleAt { n: 2, .. }));
        assert_eq!(first_reducible(&iterate_simulation(&s, 8).unwrap()), Some(2));
    }

    #[test]
    fn non_invertible_multiplier_ideal_fails_at_three() {
        let o = QuadField::eisenstein().order_of_conductor(2);
        let p = ideal(&o, &[num(-3, 2, 0), num(-3, 1, 1)]).unwrap();
        let s = spec(-3, p, o.lattice.clone(), num(-3, 2, 0), num(-3, 1, 1));
        assert_eq!(
            stability_verdict(&s).unwrap(),
            StabilityVerdict::ReducibleAt { n: 3, witness: StabilityWitness::NotInvertible }
        );
        let steps = iterate_simulation(&s, 8).unwrap();
        assert_eq!(first_reducible(&steps), Some(3));
    }

    #[test]
    fn coprime_integers_stay_irreducible() {
        let z = QuadField::gaussian().maximal_order().lattice;
        let s = spec(-1, z.clone(), z.clone(), num(-1, 2, 0), num(-1, 3, 0));
        let steps = iterate_simulation(&s, 8).unwrap();
        assert_eq!(steps.len(), 8);
        assert!(steps.iter().all(|st| st.irreducible && st.degrees == (4, 9)));
        for st in &steps {
            assert_eq!(multiplier_ring(&st.lattice).lattice, z);
        }
    }

    #[test]
    fn kernel_orders() {
        let z = QuadField::gaussian().maximal_order().lattice;
        assert_eq!(kernel_torsion_order(&z, &z, &num(-1, 2, 0), &num(-1, 2, 0)).unwrap(), 4);
        assert_eq!(kernel_torsion_order(&z, &z, &num(-1, 1, 1), &num(-1, 2, 0)).unwrap(), 2);
        let e = QuadField::eisenstein().maximal_order().lattice;
        let w1 = QuadField::eisenstein().zeta3().unwrap().sub(&QuadNum::one(-3));
        assert_eq!(kernel_torsion_order(&e, &e, &num(-3, 2, 0), &w1).unwrap(), 1);
        assert_eq!(kernel_torsion_order(&e, &e, &w1, &w1).unwrap(), 3);
    }

    fn parts(p: &RamificationPortrait) -> Vec<String> {
        p.branches.iter().map(|b| b.partition.to_string()).collect()
    }

    #[test]
    fn table_examples() {
        let s = |v: &[u64]| Signature::new(v.to_vec()).unwrap();
        let q = LattesTypeQuery {
            sig0: s(&[2, 2, 2, 2]),
            sig1: s(&[2, 2, 2, 2]),
            d: 4,
            kernel: KernelOrders { two: Some(4), omega_minus_one: None, image_stable: None },
        };
        assert_eq!(parts(&lattes_type(&q).unwrap()), ["(1^4)", "(2^2)", "(2^2)", "(2^2)"]);
        let q = LattesTypeQuery {
            sig0: s(&[3, 3, 3]),
            sig1: s(&[3, 3, 3]),
            d: 4,
            kernel: KernelOrders { two: None, omega_minus_one: Some(1), image_stable: None },
        };
        assert_eq!(parts(&lattes_type(&q).unwrap()), ["(1 3)", "(1 3)", "(1 3)"]);
        let q = LattesTypeQuery {
            sig0: s(&[2, 4, 4]),
            sig1: s(&[2, 4, 4]),
            d: 2,
            kernel: KernelOrders { two: Some(2), omega_minus_one: None, image_stable: None },
        };
        assert_eq!(parts(&lattes_type(&q).unwrap()), ["(2)", "(1^2)", "(2)"]);
        let bad = LattesTypeQuery { d: 3, ..q };
        assert!(matches!(lattes_type(&bad), Err(EllError::NoMatchingRow(_))));
    }

    #[test]
    fn table_from_lattices() {
        let z = QuadField::gaussian().maximal_order().lattice;
        let e = QuadField::eisenstein().maximal_order().lattice;
        let p = lattes_type_from_lattices(&z, &z, &num(-1, 2, 0), 2, 2).unwrap();
        assert_eq!(parts(&p), ["(1^4)", "(2^2)", "(2^2)", "(2^2)"]);
        let w1 = QuadField::eisenstein().zeta3().unwrap().sub(&QuadNum::one(-3));
        let p = lattes_type_from_lattices(&e, &e, &w1, 3, 3).unwrap();
        assert_eq!(parts(&p), ["(1^3)", "(3)", "(3)"]);
        let p = lattes_type_from_lattices(&z, &z, &num(-1, 1, 1), 4, 4).unwrap();
        assert_eq!(parts(&p), ["(2)", "(1^2)", "(2)"]);
        let z2 = QuadField::gaussian().order_of_conductor(2).lattice;
        assert!(matches!(
            lattes_type_from_lattices(&z2, &z2, &num(-1, 2, 0), 4, 4),
            Err(EllError::IncompatibleAutomorphism(_))
        ));
    }

    #[test]
    fn every_row_is_consistent_and_genus_zero() {
        for r in lattes_rows() {
            let mut checked = 0;
            for d in 1..=48u64 {
                if !r.admits_degree(d) {
                    continue;
                }
                let p = match r.instantiate(d) {
                    Ok(p) => p,
                    Err(EllError::DegenerateRow { .. }) => continue,
                    Err(e) => panic!("{e}"),
                };
                assert_eq!(genus_from_portrait(&p).unwrap(), 0, "row {} d {d}", r.row);
                assert!(lattes_type_consistent(r, &p), "row {} d {d}", r.row);
                let full = p.branches.iter().zip(r.sig0().orders()).all(|(b, &m)| b.partition.lcm() == m);
                if full {
                    assert_eq!(signature_of(&p), r.sig0(), "row {} d {d}", r.row);
                }
                checked += 1;
            }
            assert!(checked > 0, "row {}", r.row);
        }
    }
}
