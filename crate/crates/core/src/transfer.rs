//! Transfer (Verlagerung) maps of finite groups given by multiplication
//! tables, the group ring and its augmentation lattices, and exhaustive
//! surveys of when the restricted transfer vanishes.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::abelian::{self, CayleyTable};
use crate::arith;
use crate::error::{Error, Result};

pub const DEFAULT_ORDER_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: CayleyTable,
    /// Invariant factors when the group is abelian.
    invariants: Option<Vec<u64>>,
}

impl FiniteGroup {
    /// Validates a multiplication table (closure, identity, inverses,
    /// associativity) against the order cap.
    pub fn from_table(rows: Vec<Vec<usize>>, cap: usize) -> Result<Self> {
        if rows.len() > cap {
            return Err(Error::GroupTooLarge(rows.len(), cap));
        }
        let table = CayleyTable::new(rows).map_err(Error::InvalidTable)?;
        Ok(Self::wrap(table))
    }

    fn wrap(table: CayleyTable) -> Self {
        let invariants = table.is_abelian().then(|| table.abelian_structure().0);
        FiniteGroup { table, invariants }
    }

    /// One row per element, entries separated by whitespace; blank lines
    /// and lines starting with `#` are skipped.
    pub fn parse(text: &str, cap: usize) -> Result<Self> {
        let rows = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                l.split_whitespace()
                    .map(|t| {
                        t.parse::<usize>()
                            .map_err(|_| Error::InvalidTable(format!("bad entry {t:?}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_table(rows, cap)
    }

    pub fn to_text(&self) -> String {
        self.table
            .rows()
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// `Z/m1 × Z/m2 × ...` in mixed-radix element order.
    pub fn abelian(moduli: &[u64]) -> Self {
        Self::wrap(abelian::abelian_product(moduli))
    }

    /// The group generated by permutations of `0..k`, elements sorted.
    pub fn from_permutations(gens: &[Vec<usize>]) -> Self {
        let k = gens.first().map_or(0, |g| g.len());
        let id: Vec<usize> = (0..k).collect();
        let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { (0..k).map(|i| a[b[i]]).collect() };
        let mut elems: BTreeSet<Vec<usize>> = BTreeSet::from([id.clone()]);
        let mut frontier = vec![id];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = compose(&x, g);
                if elems.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        let elems: Vec<Vec<usize>> = elems.into_iter().collect();
        let index = |p: &Vec<usize>| elems.binary_search(p).unwrap();
        let rows = elems
            .iter()
            .map(|a| elems.iter().map(|b| index(&compose(a, b))).collect())
            .collect();
        Self::wrap(CayleyTable::new(rows).expect("permutations form a group"))
    }

    pub fn symmetric3() -> Self {
        Self::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]])
    }

    pub fn dihedral(n: usize) -> Self {
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        Self::from_permutations(&[rot, refl])
    }

    /// The quaternion group `{±1, ±i, ±j, ±k}` acting on itself.
    pub fn quaternion() -> Self {
        // element = (sign, unit) with unit 0..4 = 1, i, j, k
        let mul = |(s1, u1): (usize, usize), (s2, u2): (usize, usize)| -> (usize, usize) {
            const TABLE: [[(usize, usize); 4]; 4] = [
                [(0, 0), (0, 1), (0, 2), (0, 3)],
                [(0, 1), (1, 0), (0, 3), (1, 2)],
                [(0, 2), (1, 3), (1, 0), (0, 1)],
                [(0, 3), (0, 2), (1, 1), (1, 0)],
            ];
            let (s, u) = TABLE[u1][u2];
            ((s1 + s2 + s) % 2, u)
        };
        let enc = |(s, u): (usize, usize)| 4 * s + u;
        let dec = |x: usize| (x / 4, x % 4);
        let rows = (0..8)
            .map(|a| (0..8).map(|b| enc(mul(dec(a), dec(b)))).collect())
            .collect();
        Self::wrap(CayleyTable::new(rows).expect("quaternion table is a group"))
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &CayleyTable {
        &self.table
    }

    pub fn invariants(&self) -> Option<&[u64]> {
        self.invariants.as_deref()
    }

    pub fn identity(&self) -> usize {
        self.table.identity()
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table.mul(x, y)
    }

    pub fn inv(&self, x: usize) -> usize {
        self.table.inv(x)
    }

    pub fn is_abelian(&self) -> bool {
        self.invariants.is_some()
    }

    pub fn is_subgroup(&self, h: &[usize]) -> bool {
        h.iter().all(|&x| x < self.order()) && self.table.is_subgroup(h)
    }

    pub fn is_normal(&self, h: &[usize]) -> bool {
        let set: BTreeSet<usize> = h.iter().copied().collect();
        (0..self.order()).all(|g| {
            h.iter()
                .all(|&x| set.contains(&self.mul(self.mul(g, x), self.inv(g))))
        })
    }

    /// Subgroup generated by the commutators of elements of `h`.
    pub fn commutator_subgroup(&self, h: &[usize]) -> Vec<usize> {
        let mut gens = BTreeSet::new();
        for &x in h {
            for &y in h {
                let c = self.mul(self.mul(x, y), self.mul(self.inv(x), self.inv(y)));
                gens.insert(c);
            }
        }
        self.table.generated(&gens.into_iter().collect::<Vec<_>>())
    }

    /// Left coset representatives of `h` (the least element of each coset)
    /// and the coset index of every element.
    pub fn left_cosets(&self, h: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut coset_of = vec![usize::MAX; self.order()];
        let mut reps = Vec::new();
        for g in 0..self.order() {
            if coset_of[g] != usize::MAX {
                continue;
            }
            for &x in h {
                coset_of[self.mul(g, x)] = reps.len();
            }
            reps.push(g);
        }
        (reps, coset_of)
    }

    /// Every subgroup as a sorted element list, ordered by (size, elements).
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mask = |elems: &[usize]| -> u64 { elems.iter().fold(0u64, |m, &x| m | (1 << x)) };
        let trivial = vec![self.identity()];
        let mut seen: BTreeSet<u64> = BTreeSet::from([mask(&trivial)]);
        let mut all = vec![trivial.clone()];
        let mut frontier = vec![trivial];
        while let Some(h) = frontier.pop() {
            let hm = mask(&h);
            for g in 0..n {
                if hm >> g & 1 == 1 {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(g);
                let k = self.table.generated(&gens);
                if seen.insert(mask(&k)) {
                    all.push(k.clone());
                    frontier.push(k);
                }
            }
        }
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        all
    }

    /// Least element of the coset `x·K`.
    fn canonical_mod(&self, x: usize, k: &[usize]) -> usize {
        k.iter().map(|&y| self.mul(x, y)).min().unwrap_or(x)
    }
}

/// `Ver(g) = ∏ φ(g g_i)^{-1} g g_i ∈ H` over the given left coset
/// representatives, as an element of `G` (not reduced modulo `H'`).
pub fn transfer_raw(group: &FiniteGroup, h: &[usize], reps: &[usize], g: usize) -> usize {
    let mut phi = vec![usize::MAX; group.order()];
    for &r in reps {
        for &x in h {
            phi[group.mul(r, x)] = r;
        }
    }
    reps.iter().fold(group.identity(), |acc, &r| {
        let gr = group.mul(g, r);
        let factor = group.mul(group.inv(phi[gr]), gr);
        group.mul(acc, factor)
    })
}

/// `Ver(g)` in `H/H'`, represented by the least element of its coset.
pub fn transfer(group: &FiniteGroup, h: &[usize], g: usize) -> Result<usize> {
    if !group.is_subgroup(h) {
        return Err(Error::NotSubgroup);
    }
    let (reps, _) = group.left_cosets(h);
    let h_prime = group.commutator_subgroup(h);
    Ok(group.canonical_mod(transfer_raw(group, h, &reps, g), &h_prime))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferResult {
    /// `(g, Ver(g) in H/H')` for every element of `G`.
    pub images: Vec<(usize, usize)>,
    /// `Ver(h) ∈ H'` for every `h ∈ H`.
    pub well_defined_on_quotient: bool,
    /// Every image is trivial.
    pub vanishes: bool,
    /// `|H|` divides `[G:H]`.
    pub hypothesis: bool,
}

fn check_normal_containing_commutator(group: &FiniteGroup, h: &[usize]) -> Result<()> {
    if !group.is_subgroup(h) {
        return Err(Error::NotSubgroup);
    }
    if !group.is_normal(h) {
        return Err(Error::NotNormal);
    }
    let all: Vec<usize> = (0..group.order()).collect();
    let set: BTreeSet<usize> = h.iter().copied().collect();
    if !group.commutator_subgroup(&all).iter().all(|x| set.contains(x)) {
        return Err(Error::CommutatorNotContained);
    }
    Ok(())
}

/// Tabulates the transfer on `G/H` for normal `H ⊇ G'`.
pub fn restricted_transfer(group: &FiniteGroup, h: &[usize]) -> Result<TransferResult> {
    check_normal_containing_commutator(group, h)?;
    let (reps, _) = group.left_cosets(h);
    let h_prime = group.commutator_subgroup(h);
    let ver = |g: usize| group.canonical_mod(transfer_raw(group, h, &reps, g), &h_prime);
    let trivial = group.canonical_mod(group.identity(), &h_prime);
    let well_defined_on_quotient = h.iter().all(|&x| ver(x) == trivial);
    let images: Vec<(usize, usize)> = (0..group.order()).map(|g| (g, ver(g))).collect();
    let vanishes = images.iter().all(|&(_, v)| v == trivial);
    let index = group.order() / h.len();
    Ok(TransferResult {
        images,
        well_defined_on_quotient,
        vanishes,
        hypothesis: index % h.len() == 0,
    })
}

/// Element of `Z[G]`: one coefficient per group element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupRingElement {
    pub coeffs: Vec<i64>,
}

impl GroupRingElement {
    pub fn zero(order: usize) -> Self {
        GroupRingElement {
            coeffs: vec![0; order],
        }
    }

    pub fn basis(order: usize, g: usize) -> Self {
        let mut x = Self::zero(order);
        x.coeffs[g] = 1;
        x
    }

    /// `g − 1`.
    pub fn delta(group: &FiniteGroup, g: usize) -> Self {
        let mut x = Self::basis(group.order(), g);
        x.coeffs[group.identity()] -= 1;
        x
    }

    pub fn augmentation(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        GroupRingElement {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        GroupRingElement {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul(&self, other: &Self, group: &FiniteGroup) -> Self {
        let mut out = Self::zero(group.order());
        for (x, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (y, &b) in other.coeffs.iter().enumerate() {
                if b != 0 {
                    out.coeffs[group.mul(x, y)] += a * b;
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LatticeKind {
    /// `I_G²`.
    AugmentationSquare,
    /// `I_G I_H`.
    Product,
    /// `I_H + I_G I_H`.
    SumWithProduct,
}

/// A sublattice of `Z^n` in row echelon form with positive pivots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    /// `(pivot column, row)`, sorted by pivot.
    rows: Vec<(usize, Vec<i128>)>,
}

impl Lattice {
    pub fn new(dim: usize) -> Self {
        Lattice {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn insert(&mut self, v: &[i64]) {
        debug_assert_eq!(v.len(), self.dim);
        let mut v: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        loop {
            let Some(c) = v.iter().position(|&x| x != 0) else {
                return;
            };
            match self.rows.binary_search_by_key(&c, |(p, _)| *p) {
                Ok(i) => {
                    let row = &mut self.rows[i].1;
                    let (g, s, t) = ext_gcd(row[c], v[c]);
                    let (a, b) = (row[c] / g, v[c] / g);
                    // [[s, t], [−b, a]] is unimodular
                    for k in c..self.dim {
                        let (r, x) = (row[k], v[k]);
                        row[k] = checked(s.checked_mul(r).and_then(|p| t.checked_mul(x).and_then(|q| p.checked_add(q))));
                        v[k] = checked(a.checked_mul(x).and_then(|p| b.checked_mul(r).and_then(|q| p.checked_sub(q))));
                    }
                }
                Err(i) => {
                    if v[c] < 0 {
                        v.iter_mut().for_each(|x| *x = -*x);
                    }
                    self.rows.insert(i, (c, v));
                    self.reduce();
                    return;
                }
            }
        }
    }

    /// Brings entries above each pivot into `[0, pivot)`.
    fn reduce(&mut self) {
        for i in (0..self.rows.len()).rev() {
            let (c, pivot_row) = self.rows[i].clone();
            let pv = pivot_row[c];
            for j in 0..i {
                let q = self.rows[j].1[c].div_euclid(pv);
                if q != 0 {
                    let row = &mut self.rows[j].1;
                    for k in c..self.dim {
                        row[k] = checked(q.checked_mul(pivot_row[k]).and_then(|p| row[k].checked_sub(p)));
                    }
                }
            }
        }
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        let mut x: Vec<i128> = x.iter().map(|&v| v as i128).collect();
        for (c, row) in &self.rows {
            if x[..*c].iter().any(|&v| v != 0) {
                return false;
            }
            if x[*c] % row[*c] != 0 {
                return false;
            }
            let q = x[*c] / row[*c];
            if q != 0 {
                for k in *c..self.dim {
                    x[k] -= q * row[k];
                }
            }
        }
        x.iter().all(|&v| v == 0)
    }
}

fn checked(x: Option<i128>) -> i128 {
    x.expect("lattice entries overflowed i128")
}

/// `(g, s, t)` with `g = s·a + t·b > 0`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// The lattice spanned by the defining products of the chosen ideal.
pub fn augmentation_lattice(group: &FiniteGroup, h: &[usize], kind: LatticeKind) -> Lattice {
    let n = group.order();
    let mut lattice = Lattice::new(n);
    let deltas: Vec<GroupRingElement> = (0..n).map(|g| GroupRingElement::delta(group, g)).collect();
    let right: Vec<usize> = match kind {
        LatticeKind::AugmentationSquare => (0..n).collect(),
        LatticeKind::Product | LatticeKind::SumWithProduct => h.to_vec(),
    };
    for g in 0..n {
        for &x in &right {
            lattice.insert(&deltas[g].mul(&deltas[x], group).coeffs);
        }
    }
    if kind == LatticeKind::SumWithProduct {
        for &x in h {
            lattice.insert(&deltas[x].coeffs);
        }
    }
    lattice
}

pub fn augmentation_membership(
    group: &FiniteGroup,
    h: &[usize],
    x: &GroupRingElement,
    kind: LatticeKind,
) -> bool {
    augmentation_lattice(group, h, kind).contains(&x.coeffs)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramReport {
    /// `|H|` divides `[G:H]`.
    pub hypothesis: bool,
    /// Elements `g` with `S(δg) ≢ δ(Ver(g))` modulo `I_G I_H`.
    pub violations: Vec<usize>,
    pub commutes: bool,
}

/// Checks `(g − 1)·Σ g_i ≡ Ver(g) − 1 (mod I_G I_H)` for every `g`.
pub fn diagram_check(group: &FiniteGroup, h: &[usize]) -> Result<DiagramReport> {
    check_normal_containing_commutator(group, h)?;
    let n = group.order();
    let (reps, _) = group.left_cosets(h);
    let lattice = augmentation_lattice(group, h, LatticeKind::Product);
    let norm_element = reps
        .iter()
        .fold(GroupRingElement::zero(n), |acc, &r| acc.add(&GroupRingElement::basis(n, r)));
    let violations: Vec<usize> = (0..n)
        .filter(|&g| {
            let s = GroupRingElement::delta(group, g).mul(&norm_element, group);
            let v = GroupRingElement::delta(group, transfer_raw(group, h, &reps, g));
            !lattice.contains(&s.sub(&v).coeffs)
        })
        .collect();
    Ok(DiagramReport {
        hypothesis: (n / h.len()) % h.len() == 0,
        commutes: violations.is_empty(),
        violations,
    })
}

/// Invariant-factor-free descriptions (prime-power moduli) of every abelian
/// group of order `n`, up to isomorphism.
pub fn abelian_groups_of_order(n: u64) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = vec![Vec::new()];
    for (p, k) in arith::factorize(n) {
        let parts = partitions(k);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                parts.iter().map(move |part| {
                    let mut v = prefix.clone();
                    v.extend(part.iter().map(|&e| arith::ipow(p, e)));
                    v
                })
            })
            .collect();
    }
    if n == 1 {
        return vec![vec![1]];
    }
    out
}

fn partitions(k: u32) -> Vec<Vec<u32>> {
    fn go(k: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=k.min(max)).rev() {
            prefix.push(part);
            go(k - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, &mut Vec::new(), &mut out);
    out
}

/// One `(G, H)` pair of a survey.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurveyRecord {
    pub moduli: Vec<u64>,
    pub invariants: Vec<u64>,
    pub subgroup: Vec<usize>,
    pub subgroup_order: usize,
    pub index: usize,
    pub hypothesis: bool,
    pub well_defined: bool,
    pub vanishes: bool,
    pub diagram_commutes: bool,
    /// Transfer values agree with `g ↦ g^{[G:H]}` and with a second choice
    /// of coset representatives.
    pub oracle_agrees: bool,
}

impl SurveyRecord {
    /// The hypothesis holds but the restricted transfer does not vanish.
    pub fn is_discrepancy(&self) -> bool {
        self.hypothesis && !self.vanishes
    }
}

/// Every abelian group of order at most `max_order` with every subgroup.
pub fn survey_abelian(max_order: u64) -> Vec<SurveyRecord> {
    let groups: Vec<Vec<u64>> = (1..=max_order).flat_map(abelian_groups_of_order).collect();
    groups
        .par_iter()
        .flat_map_iter(|moduli| {
            let group = FiniteGroup::abelian(moduli);
            group
                .subgroups()
                .into_iter()
                .map(|h| survey_instance(moduli, &group, h))
                .collect::<Vec<_>>()
        })
        .collect()
}

fn survey_instance(moduli: &[u64], group: &FiniteGroup, h: Vec<usize>) -> SurveyRecord {
    let tr = restricted_transfer(group, &h).expect("abelian subgroups are admissible");
    let diagram = diagram_check(group, &h).expect("abelian subgroups are admissible");
    let index = group.order() / h.len();
    let (reps, _) = group.left_cosets(&h);
    // the largest element of each coset as the alternative section
    let mut alt = vec![0usize; reps.len()];
    let (_, coset_of) = group.left_cosets(&h);
    for g in 0..group.order() {
        alt[coset_of[g]] = alt[coset_of[g]].max(g);
    }
    let oracle_agrees = (0..group.order()).all(|g| {
        let direct = transfer_raw(group, &h, &reps, g);
        let power = group.table().pow(g, index as u64);
        let other = transfer_raw(group, &h, &alt, g);
        direct == power && other == power
    });
    SurveyRecord {
        moduli: moduli.to_vec(),
        invariants: group.invariants().unwrap_or(&[]).to_vec(),
        subgroup_order: h.len(),
        subgroup: h,
        index,
        hypothesis: tr.hypothesis,
        well_defined: tr.well_defined_on_quotient,
        vanishes: tr.vanishes,
        diagram_commutes: diagram.commutes,
        oracle_agrees,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::{rngs::StdRng, SeedableRng};

    fn klein() -> FiniteGroup {
        FiniteGroup::abelian(&[2, 2])
    }

    #[test]
    fn transfer_examples() {
        // (Z/2)², H = first factor = {(0,0), (1,0)} = {0, 2}
        let g = klein();
        assert_eq!(transfer(&g, &[0, 2], 1).unwrap(), 0);
        let c4 = FiniteGroup::abelian(&[4]);
        assert_eq!(transfer(&c4, &[0, 2], 1).unwrap(), 2);
        let s3 = FiniteGroup::symmetric3();
        let a3: Vec<usize> = (0..6).filter(|&x| s3.table().order(x) != 2).collect();
        assert_eq!(a3.len(), 3);
        for &c in a3.iter().filter(|&&x| x != s3.identity()) {
            assert_eq!(transfer(&s3, &a3, c).unwrap(), s3.identity());
        }
        assert_eq!(transfer(&c4, &[0, 1], 1), Err(Error::NotSubgroup));
    }

    #[test]
    fn restricted_transfer_examples() {
        let r = restricted_transfer(&klein(), &[0, 2]).unwrap();
        assert!(r.well_defined_on_quotient && r.hypothesis && r.vanishes);
        let r = restricted_transfer(&FiniteGroup::abelian(&[4]), &[0, 2]).unwrap();
        assert!(r.well_defined_on_quotient && r.hypothesis);
        assert!(!r.vanishes);
        assert_eq!(r.images, vec![(0, 0), (1, 2), (2, 0), (3, 2)]);
        // Z/2 × Z/4 with H = <(0, 2)> = {0, 2}
        let g = FiniteGroup::abelian(&[2, 4]);
        let r = restricted_transfer(&g, &[0, 2]).unwrap();
        assert!(r.well_defined_on_quotient && r.hypothesis && r.vanishes);
    }

    #[test]
    fn restricted_transfer_errors() {
        let s3 = FiniteGroup::symmetric3();
        let two = s3.table().generated(&[(0..6).find(|&x| s3.table().order(x) == 2).unwrap()]);
        assert_eq!(restricted_transfer(&s3, &two), Err(Error::NotNormal));
        let d4 = FiniteGroup::dihedral(4);
        assert_eq!(restricted_transfer(&d4, &[d4.identity()]), Err(Error::CommutatorNotContained));
    }

    #[test]
    fn membership_examples() {
        let c4 = FiniteGroup::abelian(&[4]);
        let h = [0, 2];
        let sigma2_minus_1 = GroupRingElement::delta(&c4, 2);
        assert!(!augmentation_membership(&c4, &h, &sigma2_minus_1, LatticeKind::Product));
        assert!(augmentation_membership(&c4, &h, &sigma2_minus_1, LatticeKind::SumWithProduct));
        let zero = GroupRingElement::zero(4);
        for kind in [LatticeKind::AugmentationSquare, LatticeKind::Product, LatticeKind::SumWithProduct] {
            assert!(augmentation_membership(&c4, &h, &zero, kind));
        }
        let gen = GroupRingElement::delta(&c4, 1).mul(&sigma2_minus_1, &c4);
        assert!(augmentation_membership(&c4, &h, &gen, LatticeKind::Product));
        // hand reduction: I_G I_H for Z/4, H = {0, 2} has index 2 in I_H + I_G I_H
        let l = augmentation_lattice(&c4, &h, LatticeKind::Product);
        assert_eq!(l.rank(), 2);
    }

    #[test]
    fn diagram_examples() {
        let s3 = FiniteGroup::symmetric3();
        let a3: Vec<usize> = (0..6).filter(|&x| s3.table().order(x) != 2).collect();
        assert!(diagram_check(&s3, &a3).unwrap().commutes);
        let r = diagram_check(&FiniteGroup::abelian(&[4]), &[0, 2]).unwrap();
        assert!(r.commutes && r.hypothesis);
        let g = FiniteGroup::abelian(&[2, 3]);
        let all: Vec<usize> = (0..6).collect();
        assert!(diagram_check(&g, &all).unwrap().commutes);
    }

    fn test_groups() -> Vec<FiniteGroup> {
        let mut v: Vec<FiniteGroup> = [vec![12], vec![2, 6], vec![2, 2, 4], vec![3, 9], vec![4, 4, 3]]
            .iter()
            .map(|m| FiniteGroup::abelian(m))
            .collect();
        v.push(FiniteGroup::symmetric3());
        v.push(FiniteGroup::dihedral(4));
        v.push(FiniteGroup::dihedral(6));
        v.push(FiniteGroup::quaternion());
        // A4 and S4
        v.push(FiniteGroup::from_permutations(&[vec![1, 2, 0, 3], vec![1, 0, 3, 2]]));
        v.push(FiniteGroup::from_permutations(&[vec![1, 2, 3, 0], vec![1, 0, 2, 3]]));
        v
    }

    #[test]
    fn transfer_is_a_homomorphism() {
        for g in test_groups() {
            assert!(g.order() <= 48);
            for h in g.subgroups() {
                let (reps, _) = g.left_cosets(&h);
                let hp = g.commutator_subgroup(&h);
                let ver = |x: usize| g.canonical_mod(transfer_raw(&g, &h, &reps, x), &hp);
                for x in 0..g.order() {
                    for y in 0..g.order() {
                        let lhs = ver(g.mul(x, y));
                        let rhs = g.canonical_mod(g.mul(ver(x), ver(y)), &hp);
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn transfer_independent_of_representatives() {
        let mut rng = StdRng::seed_from_u64(7);
        for g in test_groups() {
            for h in g.subgroups() {
                let (reps, coset_of) = g.left_cosets(&h);
                let hp = g.commutator_subgroup(&h);
                for _ in 0..5 {
                    let mut alt = reps.clone();
                    for (i, r) in alt.iter_mut().enumerate() {
                        let members: Vec<usize> = (0..g.order()).filter(|&x| coset_of[x] == i).collect();
                        *r = *members.choose(&mut rng).unwrap();
                    }
                    for x in 0..g.order() {
                        let a = g.canonical_mod(transfer_raw(&g, &h, &reps, x), &hp);
                        let b = g.canonical_mod(transfer_raw(&g, &h, &alt, x), &hp);
                        assert_eq!(a, b);
                    }
                }
            }
        }
    }

    #[test]
    fn abelian_transfer_is_a_power() {
        for n in 1..=24 {
            for moduli in abelian_groups_of_order(n) {
                let g = FiniteGroup::abelian(&moduli);
                for h in g.subgroups() {
                    let index = (g.order() / h.len()) as u64;
                    for x in 0..g.order() {
                        assert_eq!(transfer(&g, &h, x).unwrap(), g.table().pow(x, index));
                    }
                }
            }
        }
    }

    #[test]
    fn delta_is_additive_modulo_square() {
        for g in test_groups().into_iter().take(7) {
            let lattice = augmentation_lattice(&g, &[], LatticeKind::AugmentationSquare);
            for x in 0..g.order() {
                for y in 0..g.order() {
                    let dxy = GroupRingElement::delta(&g, g.mul(x, y));
                    let dx = GroupRingElement::delta(&g, x);
                    let dy = GroupRingElement::delta(&g, y);
                    // exact identity δ(xy) = δx + δy + δx·δy
                    assert_eq!(dxy, dx.add(&dy).add(&dx.mul(&dy, &g)));
                    assert!(lattice.contains(&dxy.sub(&dx.add(&dy)).coeffs));
                }
            }
        }
    }

    #[test]
    fn counts_of_groups_and_subgroups() {
        let counts: Vec<usize> = (1..=16).map(|n| abelian_groups_of_order(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 1, 1, 1, 3, 2, 1, 1, 2, 1, 1, 1, 5]);
        assert_eq!(FiniteGroup::abelian(&[2, 2]).subgroups().len(), 5);
        assert_eq!(FiniteGroup::abelian(&[2, 2, 2]).subgroups().len(), 16);
        assert_eq!(FiniteGroup::dihedral(4).subgroups().len(), 10);
        assert_eq!(FiniteGroup::from_permutations(&[vec![1, 2, 3, 0], vec![1, 0, 2, 3]]).subgroups().len(), 30);
    }

    #[test]
    fn text_format_roundtrip_and_errors() {
        let g = FiniteGroup::dihedral(4);
        let parsed = FiniteGroup::parse(&format!("# D4\n{}\n", g.to_text()), 64).unwrap();
        assert_eq!(parsed, g);
        assert!(matches!(FiniteGroup::parse("0 1\n1 1\n", 64), Err(Error::InvalidTable(_))));
        assert!(matches!(FiniteGroup::parse("0 x\n1 0\n", 64), Err(Error::InvalidTable(_))));
        assert_eq!(FiniteGroup::parse(&g.to_text(), 4), Err(Error::GroupTooLarge(8, 4)));
    }

    proptest! {
        #[test]
        fn lattice_membership_matches_construction(coeffs in proptest::collection::vec(-3i64..=3, 6)) {
            // random combination of generators is a member; adding a unit
            // vector with nonzero augmentation never is
            let g = FiniteGroup::abelian(&[2, 4]);
            let h = [0usize, 2];
            let l = augmentation_lattice(&g, &h, LatticeKind::Product);
            let gens: Vec<GroupRingElement> = (0..8)
                .flat_map(|x| h.iter().map(move |&y| (x, y)))
                .map(|(x, y)| GroupRingElement::delta(&g, x).mul(&GroupRingElement::delta(&g, y), &g))
                .collect();
            let mut x = GroupRingElement::zero(8);
            for (c, gen) in coeffs.iter().zip(gens.iter().step_by(2)) {
                for _ in 0..c.abs() {
                    x = if *c > 0 { x.add(gen) } else { x.sub(gen) };
                }
            }
            prop_assert!(l.contains(&x.coeffs));
            prop_assert!(!l.contains(&x.add(&GroupRingElement::basis(8, 3)).coeffs));
        }
    }
}
