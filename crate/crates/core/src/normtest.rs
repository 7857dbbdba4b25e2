//! Local norm tests for units of `N` in the tame cyclic extension `M = NK`,
//! the resulting norm index, and its comparison with class orders.

use num_integer::Integer;
use rayon::prelude::*;

use crate::arith;
use crate::cyclicext::{self, CyclicExtensionDescriptor, PropernessReport};
use crate::error::{Error, Result};
use crate::formclass::{self, ClassGroup, Flavor};
use crate::quadfield::{PrimeAbove, QuadInteger, QuadraticField, ResidueFieldElement, SplittingType};

/// Outcome of the `p^n`-th power residue test at one prime above `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalNormVerdict {
    pub prime_above_q: PrimeAbove,
    pub residue_degree: u32,
    /// `(q^f − 1) / p^n`.
    pub exponent_used: u64,
    pub power_value: ResidueFieldElement,
    pub is_norm: bool,
    /// Order of the unit's image modulo `p^n`-th powers.
    pub local_order: u64,
}

/// `u` is a local norm at a tamely ramified prime of residue field `F_{q^f}`
/// exactly when `ū^{(q^f − 1)/p^n} = 1`.
pub fn local_norm_test(
    field: &QuadraticField,
    u: &QuadInteger,
    desc: &CyclicExtensionDescriptor,
    prime: PrimeAbove,
) -> Result<LocalNormVerdict> {
    let q = desc.q();
    if q % desc.p() == 0 {
        return Err(Error::WildPrime(q));
    }
    if field.disc() % q as i64 == 0 {
        return Err(Error::RamifiedInN(q));
    }
    if prime.q() != q {
        return Err(Error::ConductorInvalid {
            q: prime.q(),
            degree: desc.degree(),
        });
    }
    if !field.primes_above(q)?.contains(&prime) {
        let root = match prime {
            PrimeAbove::Split { root, .. } => root,
            PrimeAbove::Inert { .. } => 0,
        };
        return Err(Error::InvalidRoot(root, q));
    }
    if !u.is_unit() {
        return Err(Error::NotUnit);
    }
    let f = prime.residue_degree();
    let e = desc.degree();
    let exponent_used = (q.pow(f) - 1) / e;
    let power_value = field.reduce_at(u, prime).pow(exponent_used);
    let local_order = order_dividing(&power_value, e);
    Ok(LocalNormVerdict {
        prime_above_q: prime,
        residue_degree: f,
        exponent_used,
        is_norm: power_value.is_one(),
        power_value,
        local_order,
    })
}

/// Order of `x`, known to divide `m`.
fn order_dividing(x: &ResidueFieldElement, m: u64) -> u64 {
    let mut order = m;
    for (p, _) in arith::factorize(m) {
        while order % p == 0 && x.pow(order / p).is_one() {
            order /= p;
        }
    }
    order
}

/// `[Z^× : Norm_{M/Q}(O_M^×)]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormConstant {
    One,
    /// One of 1 or 2; settling it needs the unit group of `M`.
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormIndexReport {
    pub q: u64,
    pub p: u64,
    pub n: u32,
    pub verdicts: Vec<LocalNormVerdict>,
    /// Least `k` with `ε^k` a norm of an element of `M`.
    pub index: u64,
    pub ratio_p_part: u64,
    /// Real places of `N` ramified in `M` (none for odd degree).
    pub t: u32,
    pub c: NormConstant,
    /// Set when `index` counts norms of field elements rather than units.
    pub field_norm_caveat: bool,
}

/// Norm index of the fundamental unit for `M = NK`, by the Hasse norm
/// theorem for the cyclic `M/N`: only the primes above `q` impose
/// conditions.
pub fn norm_index(field: &QuadraticField, desc: &CyclicExtensionDescriptor) -> Result<NormIndexReport> {
    norm_index_of(field, &field.fundamental_unit().value, desc)
}

pub fn norm_index_of(
    field: &QuadraticField,
    u: &QuadInteger,
    desc: &CyclicExtensionDescriptor,
) -> Result<NormIndexReport> {
    let q = desc.q();
    if field.disc() % q as i64 == 0 {
        return Err(Error::RamifiedInN(q));
    }
    let verdicts = field
        .primes_above(q)?
        .into_iter()
        .map(|prime| local_norm_test(field, u, desc, prime))
        .collect::<Result<Vec<_>>>()?;
    let index = verdicts.iter().fold(1u64, |acc, v| acc.lcm(&v.local_order));
    let c = if u.norm() == (-1).into() {
        NormConstant::One
    } else {
        NormConstant::Undetermined
    };
    Ok(NormIndexReport {
        q,
        p: desc.p(),
        n: desc.n(),
        verdicts,
        index,
        ratio_p_part: arith::p_part(index, desc.p()),
        t: 0,
        c,
        field_norm_caveat: true,
    })
}

/// `p`-part of `|H¹(Gal(M/N), O_M^×)| / |H¹(Gal(M/Q), O_M^×)|`.
pub fn cohomological_ratio(report: &NormIndexReport) -> u64 {
    arith::p_part(report.index, report.p)
}

/// The full ratio `2^t/p^n · index` over `2^t/(2p^n) · c`, i.e.
/// `(2/c) · index`, for a given `c ∈ {1, 2}`.
pub fn herbrand_ratio(index: u64, c: u64) -> u64 {
    debug_assert!(c == 1 || c == 2);
    2 * index / c
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConductorRecord {
    pub q: u64,
    pub properness: PropernessReport,
    /// Present for proper conductors.
    pub index: Option<NormIndexReport>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassOrderComparison {
    pub d: i64,
    pub l: u64,
    pub p: u64,
    pub n: u32,
    pub qmax: u64,
    /// Order of the class above `ℓ` in the wide class group.
    pub class_order: u64,
    pub class_order_p_part: u64,
    pub records: Vec<ConductorRecord>,
    pub proper_conductors: Vec<u64>,
    /// Proper conductors whose index differs from the `p`-part of the order.
    pub discrepancies: Vec<u64>,
    pub agreement: bool,
}

/// Compares the order of the class above `ℓ` with the norm index at every
/// proper conductor `q ≤ qmax`.
pub fn verify_class_order(
    field: &QuadraticField,
    l: u64,
    p: u64,
    n: u32,
    qmax: u64,
) -> Result<ClassOrderComparison> {
    let group = ClassGroup::new(field);
    verify_class_order_with(field, &group, l, p, n, qmax)
}

pub fn verify_class_order_with(
    field: &QuadraticField,
    group: &ClassGroup,
    l: u64,
    p: u64,
    n: u32,
    qmax: u64,
) -> Result<ClassOrderComparison> {
    match field.splitting_type(l)? {
        SplittingType::Split => {}
        SplittingType::Inert => return Err(Error::InertPrime(l)),
        SplittingType::Ramified => return Err(Error::RamifiedPrime(l)),
    }
    let pf = formclass::prime_form(field, l)?;
    let class_order = group.order_of(&pf.form, Flavor::Wide);
    let class_order_p_part = arith::p_part(class_order, p);
    let records = cyclicext::conductors(p, n, qmax)
        .into_par_iter()
        .filter(|&q| q != l)
        .map(|q| -> Result<ConductorRecord> {
            let desc = cyclicext::period_polynomial(q, p, n)?;
            let properness = cyclicext::properness_report(field, &desc, l)?;
            let index = if properness.overall {
                Some(norm_index(field, &desc)?)
            } else {
                None
            };
            Ok(ConductorRecord { q, properness, index })
        })
        .collect::<Result<Vec<_>>>()?;
    let proper_conductors: Vec<u64> = records
        .iter()
        .filter(|r| r.properness.overall)
        .map(|r| r.q)
        .collect();
    if proper_conductors.is_empty() {
        return Err(Error::NoAdmissibleConductor(qmax));
    }
    let discrepancies: Vec<u64> = records
        .iter()
        .filter_map(|r| r.index.as_ref().map(|ix| (r.q, ix.index)))
        .filter(|&(_, index)| index != class_order_p_part)
        .map(|(q, _)| q)
        .collect();
    Ok(ClassOrderComparison {
        d: field.d(),
        l,
        p,
        n,
        qmax,
        class_order,
        class_order_p_part,
        agreement: discrepancies.is_empty(),
        records,
        proper_conductors,
        discrepancies,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectionVerdict {
    pub p: u64,
    pub qmax: u64,
    /// Conductors satisfying the inertness and tower conditions.
    pub conductors_tested: Vec<u64>,
    pub witness: Option<u64>,
    pub witness_index: Option<u64>,
}

impl DetectionVerdict {
    pub fn divisible(&self) -> bool {
        self.witness.is_some()
    }
}

/// First conductor `q ≤ qmax` (degree `p`, `p² | q − 1`, `q` inert in `N`)
/// at which the fundamental unit has norm index above 1.
pub fn detect_p_divisibility(field: &QuadraticField, p: u64, qmax: u64) -> DetectionVerdict {
    let unit = field.fundamental_unit().value;
    let candidates: Vec<u64> = cyclicext::conductors(p, 2, qmax)
        .into_iter()
        .filter(|&q| {
            q != 2
                && field.disc() % q as i64 != 0
                && field.splitting_type(q) == Ok(SplittingType::Inert)
        })
        .collect();
    let mut witness = None;
    let mut witness_index = None;
    for &q in &candidates {
        let desc = cyclicext::period_polynomial(q, p, 1).expect("conductor is admissible");
        let report = norm_index_of(field, &unit, &desc).expect("q is tame and unramified in N");
        if report.index > 1 {
            witness = Some(q);
            witness_index = Some(report.index);
            break;
        }
    }
    DetectionVerdict {
        p,
        qmax,
        conductors_tested: candidates,
        witness,
        witness_index,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclicext::period_polynomial;
    use crate::quadfield::make_field;
    use proptest::prelude::*;

    /// Membership in the set of `m`-th powers of the residue field, by
    /// listing every element.
    fn is_mth_power_oracle(x: &ResidueFieldElement, m: u64) -> bool {
        let q = x.q;
        let elems: Vec<ResidueFieldElement> = match x.root {
            Some(_) => (1..q)
                .map(|c0| ResidueFieldElement { c0, c1: 0, ..x.clone() })
                .collect(),
            None => (0..q)
                .flat_map(|c0| (0..q).map(move |c1| (c0, c1)))
                .filter(|&(c0, c1)| (c0, c1) != (0, 0))
                .map(|(c0, c1)| ResidueFieldElement { c0, c1, ..x.clone() })
                .collect(),
        };
        elems.iter().any(|y| &y.pow(m) == x)
    }

    #[test]
    fn unit_of_79_at_37_is_a_cube() {
        let f = make_field(79).unwrap();
        let desc = period_polynomial(37, 3, 1).unwrap();
        let eps = f.fundamental_unit().value;
        let v = local_norm_test(&f, &eps, &desc, PrimeAbove::Inert { q: 37 }).unwrap();
        assert_eq!(v.residue_degree, 2);
        assert_eq!(v.exponent_used, 456);
        let image = f.reduce_at(&eps, PrimeAbove::Inert { q: 37 });
        assert_eq!((image.c0, image.c1), (6, 9));
        assert!(is_mth_power_oracle(&image, 3));
        assert!(v.is_norm);
        assert_eq!(v.local_order, 1);
    }

    #[test]
    fn trivial_unit_and_split_primes() {
        let f = make_field(79).unwrap();
        let desc = period_polynomial(7, 3, 1).unwrap();
        let v = local_norm_test(&f, &f.one(), &desc, PrimeAbove::Split { q: 7, root: 3 }).unwrap();
        assert!(v.is_norm);
        assert_eq!(v.local_order, 1);
        let eps = f.fundamental_unit().value;
        for (root, image) in [(3, 2), (4, 4)] {
            let prime = PrimeAbove::Split { q: 7, root };
            assert_eq!(f.reduce_at(&eps, prime).c0, image);
            let v = local_norm_test(&f, &eps, &desc, prime).unwrap();
            assert!(!v.is_norm);
            assert_eq!(v.local_order, 3);
            assert!(!is_mth_power_oracle(&f.reduce_at(&eps, prime), 3));
        }
    }

    #[test]
    fn local_test_errors() {
        let f = make_field(79).unwrap();
        let desc = period_polynomial(79, 3, 1).unwrap();
        let eps = f.fundamental_unit().value;
        assert_eq!(
            local_norm_test(&f, &eps, &desc, PrimeAbove::Inert { q: 79 }),
            Err(Error::RamifiedInN(79))
        );
        let desc = period_polynomial(7, 3, 1).unwrap();
        assert_eq!(
            local_norm_test(&f, &f.int(2), &desc, PrimeAbove::Split { q: 7, root: 3 }),
            Err(Error::NotUnit)
        );
        assert_eq!(
            local_norm_test(&f, &eps, &desc, PrimeAbove::Split { q: 7, root: 2 }),
            Err(Error::InvalidRoot(2, 7))
        );
    }

    #[test]
    fn index_examples() {
        let f79 = make_field(79).unwrap();
        let r = norm_index(&f79, &period_polynomial(37, 3, 1).unwrap()).unwrap();
        assert_eq!(r.index, 1);
        assert_eq!(r.c, NormConstant::Undetermined);
        assert!(r.field_norm_caveat);
        let r = norm_index(&f79, &period_polynomial(7, 3, 1).unwrap()).unwrap();
        assert_eq!(r.index, 3);
        assert_eq!(r.verdicts.len(), 2);
        assert_eq!(cohomological_ratio(&r), 3);
        let f10 = make_field(10).unwrap();
        let r = norm_index(&f10, &period_polynomial(7, 3, 1).unwrap()).unwrap();
        assert_eq!(r.index, 1);
        assert_eq!(r.verdicts[0].exponent_used, 16);
        assert_eq!(r.c, NormConstant::One);
        assert_eq!(cohomological_ratio(&r), 1);
    }

    #[test]
    fn ratio_agrees_with_herbrand_evaluation() {
        for index in [1u64, 3, 9, 5, 25] {
            let p = if index % 5 == 0 { 5 } else { 3 };
            for c in [1, 2] {
                assert_eq!(arith::p_part(herbrand_ratio(index, c), p), arith::p_part(index, p));
            }
        }
    }

    #[test]
    fn inert_conductors_never_obstruct() {
        // ε̄ has order dividing 2(q + 1), which is prime to p^n
        for d in (2..300).filter(|&d| arith::is_squarefree(d as u64)) {
            let f = make_field(d).unwrap();
            let eps = f.fundamental_unit().value;
            for q in cyclicext::conductors(3, 1, 200) {
                if f.disc() % q as i64 == 0 || f.splitting_type(q) != Ok(SplittingType::Inert) {
                    continue;
                }
                let desc = period_polynomial(q, 3, 1).unwrap();
                assert_eq!(norm_index_of(&f, &eps, &desc).unwrap().index, 1, "d={d} q={q}");
            }
        }
    }

    #[test]
    fn verdicts_match_power_oracle() {
        for d in [2i64, 3, 5, 10, 79, 94, 229] {
            let f = make_field(d).unwrap();
            let eps = f.fundamental_unit().value;
            for (p, n) in [(3u64, 1u32), (5, 1), (3, 2)] {
                for q in cyclicext::conductors(p, n, 120) {
                    if f.disc() % q as i64 == 0 {
                        continue;
                    }
                    let desc = period_polynomial(q, p, n).unwrap();
                    for prime in f.primes_above(q).unwrap() {
                        let v = local_norm_test(&f, &eps, &desc, prime).unwrap();
                        let image = f.reduce_at(&eps, prime);
                        assert_eq!(v.is_norm, is_mth_power_oracle(&image, desc.degree()));
                        assert_eq!(desc.degree() % v.local_order, 0);
                        assert_eq!(v.local_order == 1, v.is_norm);
                    }
                }
            }
        }
    }

    #[test]
    fn index_invariant_under_prime_to_p_powers() {
        let f = make_field(79).unwrap();
        let eps = f.fundamental_unit().value;
        for q in [7u64, 13, 19, 31, 37, 43] {
            let desc = period_polynomial(q, 3, 1).unwrap();
            let base = norm_index_of(&f, &eps, &desc).unwrap().index;
            for j in [1u64, 2, 4, 5, 7] {
                assert_eq!(norm_index_of(&f, &eps.pow(j), &desc).unwrap().index, base);
            }
            assert_eq!(norm_index_of(&f, &eps.pow(3), &desc).unwrap().index, 1);
        }
    }

    #[test]
    fn class_order_comparisons() {
        let f79 = make_field(79).unwrap();
        let r = verify_class_order(&f79, 3, 3, 1, 50).unwrap();
        assert_eq!(r.class_order, 3);
        assert_eq!(r.proper_conductors, vec![19, 37]);
        let idx: Vec<u64> = r.records.iter().filter_map(|x| x.index.as_ref()).map(|x| x.index).collect();
        assert_eq!(idx, vec![1, 1]);
        assert!(!r.agreement);
        assert_eq!(r.discrepancies, vec![19, 37]);

        let f10 = make_field(10).unwrap();
        let r = verify_class_order(&f10, 3, 3, 1, 200).unwrap();
        assert_eq!(r.class_order_p_part, 1);
        assert!(!r.proper_conductors.is_empty());
        assert!(r.agreement);

        assert_eq!(
            verify_class_order(&f79, 3, 3, 1, 10),
            Err(Error::NoAdmissibleConductor(10))
        );
    }

    #[test]
    fn detection_examples() {
        let v = detect_p_divisibility(&make_field(79).unwrap(), 3, 50);
        assert_eq!(v.conductors_tested, vec![19, 37]);
        assert_eq!(v.witness, None);
        let v = detect_p_divisibility(&make_field(10).unwrap(), 3, 200);
        assert!(!v.divisible());
        let f229 = make_field(229).unwrap();
        assert_eq!(ClassGroup::new(&f229).h(Flavor::Wide), 3);
        assert!(!detect_p_divisibility(&f229, 3, 500).divisible());
    }

    proptest! {
        #[test]
        fn verdict_independent_of_lift(k0 in -50i64..50, k1 in -50i64..50, qi in 0usize..6) {
            let f = make_field(79).unwrap();
            let eps = f.fundamental_unit().value;
            let q = [7u64, 13, 19, 31, 37, 43][qi];
            for prime in f.primes_above(q).unwrap() {
                let lifted = &eps + &f.from_omega(k0 * q as i64, k1 * q as i64);
                let a = f.reduce_at(&eps, prime).pow((q.pow(prime.residue_degree()) - 1) / 3);
                let b = f.reduce_at(&lifted, prime).pow((q.pow(prime.residue_degree()) - 1) / 3);
                prop_assert_eq!(a, b);
            }
        }

        #[test]
        fn swapping_primes_matches_conjugation(d in 2i64..400, qi in 0usize..8) {
            prop_assume!(arith::is_squarefree(d as u64));
            let f = make_field(d).unwrap();
            let q = [7u64, 13, 19, 31, 37, 43, 61, 67][qi];
            prop_assume!(f.splitting_type(q) == Ok(SplittingType::Split));
            let desc = period_polynomial(q, 3, 1).unwrap();
            let eps = f.fundamental_unit().value;
            let primes = f.primes_above(q).unwrap();
            let v0 = local_norm_test(&f, &eps, &desc, primes[0]).unwrap();
            let v1 = local_norm_test(&f, &eps.conj(), &desc, primes[1]).unwrap();
            prop_assert_eq!(v0.power_value.c0, v1.power_value.c0);
            prop_assert_eq!(v0.local_order, v1.local_order);
        }
    }
}
