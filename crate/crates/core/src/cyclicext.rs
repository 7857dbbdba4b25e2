//! Cyclic fields `K` of degree `p^n` and prime conductor `q`, built from
//! Gaussian periods, and the admissibility conditions for `M = NK` over a
//! real quadratic field `N`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::poly::{self, IntPoly};
use crate::quadfield::{PrimeAbove, QuadraticField, SplittingType};

/// The degree-`p^n` subfield of `Q(ζ_q)` with its period basis
/// `η_0, ..., η_{e−1}`, where `η_i = Σ_{h ∈ H} ζ^{g^i h}` for the index-`e`
/// subgroup `H` of `(Z/q)^×` and the primitive root `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicExtensionDescriptor {
    q: u64,
    p: u64,
    n: u32,
    degree: u64,
    generator: u64,
    /// Coset label of each nonzero residue (index 0 unused).
    coset_of: Vec<u32>,
    /// `η_0 η_m = Σ_k table[m][k] η_k`.
    table: Vec<Vec<i64>>,
    period_poly: IntPoly,
    poly_disc: BigInt,
}

impl CyclicExtensionDescriptor {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `[K : Q] = p^n`.
    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn period_poly(&self) -> &IntPoly {
        &self.period_poly
    }

    /// Discriminant of the period polynomial, `q^{e−1}` times the square
    /// of the index of `Z[η_0]` in `O_K`.
    pub fn poly_discriminant(&self) -> &BigInt {
        &self.poly_disc
    }

    /// `disc(K) = q^{e−1}`.
    pub fn field_discriminant(&self) -> BigInt {
        BigInt::from(self.q).pow((self.degree - 1) as u32)
    }

    /// `[O_K : Z[η_0]]`.
    pub fn power_basis_index(&self) -> BigInt {
        (&self.poly_disc / self.field_discriminant()).sqrt()
    }

    /// `det(Tr(η_i η_j))`, the discriminant of the period basis.
    pub fn basis_discriminant(&self) -> BigInt {
        let e = self.degree as usize;
        let gram = (0..e)
            .map(|i| {
                (0..e)
                    .map(|j| -BigInt::from((0..e).map(|k| self.structure_constant(i, j, k)).sum::<i64>()))
                    .collect()
            })
            .collect();
        poly::determinant(gram)
    }

    /// Which period `η_i` contains `ζ^r`, for `r` prime to `q`.
    pub fn coset_of(&self, r: u64) -> usize {
        self.coset_of[(r % self.q) as usize] as usize
    }

    /// Elements of the index-`p^n` subgroup `H` (the `p^n`-th powers).
    pub fn subgroup(&self) -> Vec<u64> {
        (1..self.q).filter(|&r| self.coset_of(r) == 0).collect()
    }

    /// Coefficient of `η_k` in `η_i η_j`.
    #[inline]
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> i64 {
        let e = self.degree as usize;
        self.table[(j + e - i) % e][(k + e - i) % e]
    }

    /// Product of two elements written in the period basis.
    pub fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let e = self.degree as usize;
        let mut out = vec![BigInt::zero(); e];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let prod = ai * bj;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.structure_constant(i, j, k);
                    if c != 0 {
                        *o += &prod * c;
                    }
                }
            }
        }
        out
    }

    /// Coordinates of the rational integer `m` (`1 = −Σ η_i`).
    pub fn scalar(&self, m: impl Into<BigInt>) -> Vec<BigInt> {
        let m: BigInt = m.into();
        vec![-m; self.degree as usize]
    }

    /// Trace to `Q` of an element in the period basis.
    pub fn trace(&self, a: &[BigInt]) -> BigInt {
        -a.iter().sum::<BigInt>()
    }
}

impl fmt::Display for CyclicExtensionDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "K(q={}, p={}, n={}): {}",
            self.q, self.p, self.n, self.period_poly
        )
    }
}

/// Builds the period field of degree `p^n` and conductor `q`.
pub fn period_polynomial(q: u64, p: u64, n: u32) -> Result<CyclicExtensionDescriptor> {
    if !arith::is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    let degree = p
        .checked_pow(n)
        .filter(|_| n >= 1)
        .ok_or(Error::ConductorInvalid { q, degree: 0 })?;
    if (q - 1) % degree != 0 {
        return Err(Error::ConductorInvalid { q, degree });
    }
    let e = degree as usize;
    let g = arith::primitive_root(q);
    let mut coset_of = vec![u32::MAX; q as usize];
    let mut x = 1u64;
    for t in 0..q - 1 {
        coset_of[x as usize] = (t % degree) as u32;
        x = arith::mul_mod(x, g, q);
    }
    let members = |c: usize| -> Vec<u64> {
        (1..q).filter(|&r| coset_of[r as usize] as usize == c).collect()
    };
    let h = members(0);
    let table: Vec<Vec<i64>> = (0..e)
        .map(|m| {
            let mut counts = vec![0i64; e];
            let mut zeros = 0i64;
            for &y in &members(m) {
                for &x in &h {
                    let s = (x + y) % q;
                    if s == 0 {
                        zeros += 1;
                    } else {
                        counts[coset_of[s as usize] as usize] += 1;
                    }
                }
            }
            // H permutes each coset, so every ζ^s of a coset occurs equally often
            let f = h.len() as i64;
            counts.into_iter().map(|c| c / f - zeros).collect()
        })
        .collect();
    let mut desc = CyclicExtensionDescriptor {
        q,
        p,
        n,
        degree,
        generator: g,
        coset_of,
        table,
        period_poly: IntPoly::new(Vec::new()),
        poly_disc: BigInt::zero(),
    };
    let mut eta = vec![BigInt::zero(); e];
    eta[0] = BigInt::one();
    let mut power = eta.clone();
    let mut sums = Vec::with_capacity(e);
    for k in 1..=e {
        if k > 1 {
            power = desc.mul(&power, &eta);
        }
        sums.push(desc.trace(&power));
    }
    desc.period_poly = IntPoly::from_elementary(&poly::elementary_from_power_sums(&sums));
    desc.poly_disc = desc.period_poly.discriminant();
    // the periods form an integral basis of O_K
    assert_eq!(
        desc.basis_discriminant(),
        desc.field_discriminant(),
        "period basis discriminant for q = {q}, degree {degree}"
    );
    let index_sq = &desc.poly_disc / desc.field_discriminant();
    assert_eq!(&index_sq * desc.field_discriminant(), desc.poly_disc);
    assert_eq!(index_sq.sqrt().pow(2), index_sq);
    Ok(desc)
}

/// Primes `q ≤ qmax` with `q ≡ 1 (mod p^n)`, ascending.
pub fn conductors(p: u64, n: u32, qmax: u64) -> Vec<u64> {
    let m = arith::ipow(p, n);
    arith::primes_up_to(qmax)
        .into_iter()
        .filter(|&q| q % m == 1)
        .collect()
}

/// Decomposition of a rational prime in `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrimeInK {
    Ramified,
    Unramified { residue_degree: u64 },
}

impl PrimeInK {
    pub fn is_inert(&self, degree: u64) -> bool {
        matches!(self, PrimeInK::Unramified { residue_degree } if *residue_degree == degree)
    }
}

/// Residue degree of `ℓ` in `K`: the order of `ℓ` in `(Z/q)^× / H`.
pub fn splitting_in_k(desc: &CyclicExtensionDescriptor, l: u64) -> PrimeInK {
    if l % desc.q == 0 {
        return PrimeInK::Ramified;
    }
    let image = arith::pow_mod(l, (desc.q - 1) / desc.degree, desc.q);
    PrimeInK::Unramified {
        residue_degree: arith::mult_order(image, desc.q),
    }
}

/// Whether two polynomials of equal degree have the same number of roots
/// modulo every prime below `bound` not dividing either discriminant.
/// For abelian fields this identifies the field.
pub fn same_split_pattern(f: &IntPoly, g: &IntPoly, bound: u64) -> bool {
    let df = f.discriminant();
    let dg = g.discriminant();
    arith::primes_up_to(bound)
        .into_iter()
        .filter(|&l| {
            let lb = BigInt::from(l);
            !(&df % &lb).is_zero() && !(&dg % &lb).is_zero()
        })
        .all(|l| f.roots_mod(l) == g.roots_mod(l))
}

/// The cyclic degree-`p^{2n}` subfield of `Q(ζ_q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TowerField {
    pub conductor: u64,
    pub degree: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TowerCertificate {
    pub exists: bool,
    /// `[L : Q] = p^k` with `k = 2n`.
    pub k: u32,
    pub witness: Option<TowerField>,
}

pub fn tower_certificate(q: u64, p: u64, n: u32) -> TowerCertificate {
    let k = 2 * n;
    let degree = p.checked_pow(k);
    let exists = degree.is_some_and(|m| (q - 1) % m == 0);
    TowerCertificate {
        exists,
        k,
        witness: exists.then(|| TowerField {
            conductor: q,
            degree: degree.unwrap(),
        }),
    }
}

/// `δ(M/N)` as a list of prime powers of `N`, with its absolute norm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelativeDiscriminant {
    pub factors: Vec<(PrimeAbove, u64)>,
    pub norm: BigInt,
}

/// `δ(M/N) = (q O_N)^{p^n − 1}` for a tame conductor unramified in `N`.
pub fn relative_discriminant(
    desc: &CyclicExtensionDescriptor,
    field: &QuadraticField,
) -> Result<RelativeDiscriminant> {
    let q = desc.q;
    if q == desc.p || field.disc() % q as i64 == 0 {
        return Err(Error::WildOrRamifiedConductor(q));
    }
    let exp = desc.degree - 1;
    let factors: Vec<(PrimeAbove, u64)> = field
        .primes_above(q)?
        .into_iter()
        .map(|prime| (prime, exp))
        .collect();
    let norm = factors
        .iter()
        .map(|(prime, e)| BigInt::from(q).pow(prime.residue_degree() * *e as u32))
        .product();
    Ok(RelativeDiscriminant { factors, norm })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropernessReport {
    /// `M = NK` is abelian over `Q`.
    pub galois_over_q: bool,
    /// The prime of `N` above `ℓ` stays inert in `M/N`.
    pub inert_class_prime: bool,
    pub tower: TowerCertificate,
    /// Every rational prime dividing `Norm(δ(M/N))` is inert in `N`.
    pub disc_primes_inert_in_n: bool,
    pub overall: bool,
}

impl PropernessReport {
    pub fn condition_a(&self) -> bool {
        self.galois_over_q
    }

    pub fn condition_b(&self) -> bool {
        self.inert_class_prime && self.tower.exists
    }

    pub fn condition_c(&self) -> bool {
        self.disc_primes_inert_in_n
    }
}

/// Admissibility of `M = NK` for the class of a prime of `N` above `ℓ`.
pub fn properness_report(
    field: &QuadraticField,
    desc: &CyclicExtensionDescriptor,
    l: u64,
) -> Result<PropernessReport> {
    if field.splitting_type(l)? == SplittingType::Inert {
        return Err(Error::InertPrime(l));
    }
    // the prime above ℓ has residue field F_ℓ, so its Frobenius in
    // Gal(M/N) ≅ Gal(K/Q) is that of ℓ in K
    let inert_class_prime = splitting_in_k(desc, l).is_inert(desc.degree);
    let tower = tower_certificate(desc.q, desc.p, desc.n);
    // the only prime dividing the norm of δ(M/N) is q
    let disc_primes_inert_in_n = desc.q != 2
        && field.disc() % desc.q as i64 != 0
        && field.splitting_type(desc.q)? == SplittingType::Inert;
    let galois_over_q = true;
    Ok(PropernessReport {
        galois_over_q,
        inert_class_prime,
        tower,
        disc_primes_inert_in_n,
        overall: galois_over_q && inert_class_prime && tower.exists && disc_primes_inert_in_n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::make_field;

    #[test]
    fn small_period_polynomials() {
        let d7 = period_polynomial(7, 3, 1).unwrap();
        assert_eq!(d7.period_poly(), &IntPoly::from_i64(&[-1, -2, 1, 1]));
        let d13 = period_polynomial(13, 3, 1).unwrap();
        assert_eq!(d13.period_poly(), &IntPoly::from_i64(&[1, -4, 1, 1]));
        let d37 = period_polynomial(37, 3, 1).unwrap();
        assert_eq!(d37.period_poly().discriminant(), BigInt::from(37 * 37));
        let ex = IntPoly::from_i64(&[-11, 21, -10, 1]);
        assert!(same_split_pattern(d37.period_poly(), &ex, 1000));
        // a different cyclic cubic field is told apart
        assert!(!same_split_pattern(d13.period_poly(), &ex, 1000));
    }

    #[test]
    fn discriminants_and_power_basis_index() {
        for q in [7, 13, 19, 37] {
            let desc = period_polynomial(q, 3, 1).unwrap();
            assert_eq!(desc.poly_discriminant(), &BigInt::from(q * q));
            assert_eq!(desc.power_basis_index(), BigInt::one());
        }
        // 4·31 = 4² + 27·2²: the conductor-31 cubic has Z[η] of index 2
        let d31 = period_polynomial(31, 3, 1).unwrap();
        assert_eq!(d31.power_basis_index(), BigInt::from(2));
        assert_eq!(d31.basis_discriminant(), BigInt::from(31 * 31));
        let d31 = period_polynomial(31, 5, 1).unwrap();
        assert_eq!(d31.period_poly(), &IntPoly::from_i64(&[5, 1, -21, -12, 1, 1]));
        assert_eq!(d31.poly_discriminant(), &BigInt::from(31u64.pow(4) * 25));
    }

    #[test]
    fn descriptor_errors() {
        assert_eq!(
            period_polynomial(11, 3, 1),
            Err(Error::ConductorInvalid { q: 11, degree: 3 })
        );
        assert_eq!(period_polynomial(15, 3, 1), Err(Error::NotPrime(15)));
        assert_eq!(period_polynomial(7, 2, 1), Err(Error::EvenPrime));
        assert_eq!(period_polynomial(7, 9, 1), Err(Error::NotPrime(9)));
    }

    /// Periods as floating-point sums of roots of unity.
    fn numeric_periods(desc: &CyclicExtensionDescriptor) -> Vec<f64> {
        let q = desc.q();
        let mut out = vec![0.0; desc.degree() as usize];
        for r in 1..q {
            let angle = 2.0 * std::f64::consts::PI * r as f64 / q as f64;
            out[desc.coset_of(r)] += angle.cos();
        }
        out
    }

    #[test]
    fn periods_are_roots_and_products_match() {
        for (q, p, n) in [(7, 3, 1), (31, 5, 1), (37, 3, 1), (19, 3, 2), (101, 5, 1)] {
            let desc = period_polynomial(q, p, n).unwrap();
            let etas = numeric_periods(&desc);
            let e = desc.degree() as usize;
            for &x in &etas {
                let v: f64 = desc
                    .period_poly()
                    .coeffs()
                    .iter()
                    .rev()
                    .fold(0.0, |acc, c| acc * x + c.to_string().parse::<f64>().unwrap());
                assert!(v.abs() < 1e-6, "q={q}: residual {v}");
            }
            // structure constants against floating-point products
            for i in 0..e {
                for j in 0..e {
                    let lhs = etas[i] * etas[j];
                    let rhs: f64 = (0..e)
                        .map(|k| desc.structure_constant(i, j, k) as f64 * etas[k])
                        .sum();
                    assert!((lhs - rhs).abs() < 1e-6);
                }
            }
            // Vieta: sum −1, product (−1)^e · constant
            let coeffs = desc.period_poly().coeffs();
            assert_eq!(coeffs[e - 1], BigInt::one());
            let mut prod = desc.scalar(1);
            for i in 0..e {
                let mut eta = vec![BigInt::zero(); e];
                eta[i] = BigInt::one();
                prod = desc.mul(&prod, &eta);
            }
            assert!(prod.iter().all(|c| c == &prod[0]));
            let norm = -prod[0].clone();
            let sign = if e % 2 == 0 { 1 } else { -1 };
            assert_eq!(norm * sign, coeffs[0]);
        }
    }

    #[test]
    fn structure_constants_match_cyclotomic_expansion() {
        // expand η_i η_j in Z[ζ] with ζ^0 kept apart, then compare
        for (q, p, n) in [(13, 3, 1), (41, 5, 1), (73, 3, 2)] {
            let desc = period_polynomial(q, p, n).unwrap();
            let e = desc.degree() as usize;
            for i in 0..e {
                for j in 0..e {
                    let mut zeta = vec![0i64; q as usize];
                    for x in (1..q).filter(|&x| desc.coset_of(x) == i) {
                        for y in (1..q).filter(|&y| desc.coset_of(y) == j) {
                            zeta[((x + y) % q) as usize] += 1;
                        }
                    }
                    // Σ_k c_k η_k in the same expansion, with 1 = −Σ ζ^r
                    let mut from_table = vec![0i64; q as usize];
                    for k in 0..e {
                        let c = desc.structure_constant(i, j, k);
                        for r in (1..q).filter(|&r| desc.coset_of(r) == k) {
                            from_table[r as usize] += c;
                        }
                    }
                    let z = zeta[0];
                    for r in 1..q as usize {
                        assert_eq!(zeta[r] - z, from_table[r], "q={q} i={i} j={j} r={r}");
                    }
                }
            }
        }
    }

    #[test]
    fn splitting_examples() {
        let d37 = period_polynomial(37, 3, 1).unwrap();
        assert_eq!(splitting_in_k(&d37, 3), PrimeInK::Unramified { residue_degree: 3 });
        assert_eq!(arith::pow_mod(3, 12, 37), 10);
        assert_eq!(splitting_in_k(&d37, 37), PrimeInK::Ramified);
        let d7 = period_polynomial(7, 3, 1).unwrap();
        assert!(splitting_in_k(&d7, 2).is_inert(3));
        // 13 ≡ −1 mod 7 lies in H
        assert_eq!(splitting_in_k(&d7, 13), PrimeInK::Unramified { residue_degree: 1 });
        // residue degree agrees with root counts of the period polynomial
        for l in arith::primes_up_to(500).into_iter().filter(|&l| l != 37) {
            let roots = d37.period_poly().roots_mod(l);
            let expect = if splitting_in_k(&d37, l).is_inert(3) { 0 } else { 3 };
            assert_eq!(roots, expect, "l = {l}");
        }
    }

    #[test]
    fn inert_density() {
        for p in [3u64, 5] {
            let desc = period_polynomial(conductors(p, 1, 200)[0], p, 1).unwrap();
            let primes: Vec<u64> = arith::primes_up_to(10_000)
                .into_iter()
                .filter(|&l| l != desc.q())
                .collect();
            let inert = primes
                .iter()
                .filter(|&&l| splitting_in_k(&desc, l).is_inert(p))
                .count();
            let frac = inert as f64 / primes.len() as f64;
            assert!((frac - (1.0 - 1.0 / p as f64)).abs() < 0.05, "p={p}: {frac}");
            // n = 1: inert iff ℓ^((q−1)/p) ≢ 1
            for &l in primes.iter().take(300) {
                let nontrivial = arith::pow_mod(l, (desc.q() - 1) / p, desc.q()) != 1;
                assert_eq!(splitting_in_k(&desc, l).is_inert(p), nontrivial);
            }
        }
    }

    #[test]
    fn towers() {
        assert!(tower_certificate(37, 3, 1).exists);
        assert!(!tower_certificate(7, 3, 1).exists);
        let t = tower_certificate(101, 5, 1);
        assert!(t.exists);
        assert_eq!(t.witness, Some(TowerField { conductor: 101, degree: 25 }));
    }

    #[test]
    fn relative_discriminants() {
        let f79 = make_field(79).unwrap();
        let d37 = period_polynomial(37, 3, 1).unwrap();
        let rd = relative_discriminant(&d37, &f79).unwrap();
        assert_eq!(rd.factors, vec![(PrimeAbove::Inert { q: 37 }, 2)]);
        assert_eq!(rd.norm, BigInt::from(37u64.pow(4)));
        let d7 = period_polynomial(7, 3, 1).unwrap();
        let rd = relative_discriminant(&d7, &f79).unwrap();
        assert_eq!(rd.factors.len(), 2);
        assert!(rd.factors.iter().all(|(_, e)| *e == 2));
        assert_eq!(rd.norm, BigInt::from(7u64.pow(4)));
        let d11 = period_polynomial(11, 5, 1).unwrap();
        let rd = relative_discriminant(&d11, &make_field(2).unwrap()).unwrap();
        assert_eq!(rd.factors[0].1, 4);
        assert_eq!(
            relative_discriminant(&d7, &make_field(7).unwrap()),
            Err(Error::WildOrRamifiedConductor(7))
        );
    }

    #[test]
    fn properness_examples() {
        let f79 = make_field(79).unwrap();
        let r = properness_report(&f79, &period_polynomial(37, 3, 1).unwrap(), 3).unwrap();
        assert!(r.overall);
        let r = properness_report(&f79, &period_polynomial(7, 3, 1).unwrap(), 3).unwrap();
        assert!(!r.condition_c());
        assert!(!r.overall);
        let f10 = make_field(10).unwrap();
        let r = properness_report(&f10, &period_polynomial(7, 3, 1).unwrap(), 3).unwrap();
        assert!(r.condition_c());
        assert!(!r.tower.exists);
        assert!(!r.overall);
        assert_eq!(
            properness_report(&f79, &period_polynomial(37, 3, 1).unwrap(), 37),
            Err(Error::InertPrime(37))
        );
    }
}
