//! Exact arithmetic in real quadratic fields `Q(√d)`.
//!
//! Elements of the ring of integers are stored in half-coordinates
//! `(x + y√d) / 2`, which covers both `Z[√d]` and `Z[(1 + √d)/2]` without
//! case splits in the arithmetic. No floating point is used anywhere.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::error::{Error, Result};

/// Whether `(1 + √d)/2` is integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// `d ≡ 1 (mod 4)`, integral basis `{1, (1 + √d)/2}`.
    HalfIntegral,
    /// `d ≡ 2, 3 (mod 4)`, integral basis `{1, √d}`.
    Integral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadraticField {
    d: i64,
    disc: i64,
    basis_kind: BasisKind,
}

/// `d` must be squarefree and greater than one.
pub fn make_field(d: i64) -> Result<QuadraticField> {
    if d <= 1 {
        return Err(Error::OutOfRange(d, "d must exceed 1"));
    }
    if !arith::is_squarefree(d as u64) {
        return Err(Error::NonSquarefree(d));
    }
    let basis_kind = if d % 4 == 1 {
        BasisKind::HalfIntegral
    } else {
        BasisKind::Integral
    };
    let disc = match basis_kind {
        BasisKind::HalfIntegral => d,
        BasisKind::Integral => 4 * d,
    };
    Ok(QuadraticField {
        d,
        disc,
        basis_kind,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplittingType {
    Split,
    Inert,
    Ramified,
}

/// A prime of `N` above an unramified rational prime `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimeAbove {
    /// `q O_N` itself, residue field `F_{q^2}`.
    Inert { q: u64 },
    /// The prime `(q, √d − root)`, residue field `F_q`.
    Split { q: u64, root: u64 },
}

impl PrimeAbove {
    pub fn q(&self) -> u64 {
        match *self {
            PrimeAbove::Inert { q } | PrimeAbove::Split { q, .. } => q,
        }
    }

    pub fn residue_degree(&self) -> u32 {
        match self {
            PrimeAbove::Inert { .. } => 2,
            PrimeAbove::Split { .. } => 1,
        }
    }
}

impl fmt::Display for PrimeAbove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeAbove::Inert { q } => write!(f, "({q})"),
            PrimeAbove::Split { q, root } => write!(f, "({q}, √d-{root})"),
        }
    }
}

impl QuadraticField {
    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn basis_kind(&self) -> BasisKind {
        self.basis_kind
    }

    pub fn splitting_type(&self, l: u64) -> Result<SplittingType> {
        if !arith::is_prime(l) {
            return Err(Error::NotPrime(l));
        }
        Ok(match arith::kronecker(self.disc, l) {
            1 => SplittingType::Split,
            -1 => SplittingType::Inert,
            _ => SplittingType::Ramified,
        })
    }

    /// Rational primes dividing the discriminant.
    pub fn ramified_primes(&self) -> Vec<u64> {
        arith::factorize(self.disc as u64)
            .into_iter()
            .map(|(p, _)| p)
            .collect()
    }

    /// Primes of `N` above the odd unramified prime `q`, split primes
    /// ordered by increasing root.
    pub fn primes_above(&self, q: u64) -> Result<Vec<PrimeAbove>> {
        if q == 2 {
            return Err(Error::EvenPrime);
        }
        match self.splitting_type(q)? {
            SplittingType::Ramified => Err(Error::RamifiedPrime(q)),
            SplittingType::Inert => Ok(vec![PrimeAbove::Inert { q }]),
            SplittingType::Split => {
                let dq = self.d.rem_euclid(q as i64) as u64;
                let r = arith::sqrt_mod_prime(dq, q).expect("split prime has a root");
                Ok(vec![
                    PrimeAbove::Split { q, root: r },
                    PrimeAbove::Split { q, root: q - r },
                ])
            }
        }
    }

    pub fn one(&self) -> QuadInteger {
        QuadInteger::from_int(self.d, 1)
    }

    pub fn zero(&self) -> QuadInteger {
        QuadInteger::from_int(self.d, 0)
    }

    pub fn int(&self, n: impl Into<BigInt>) -> QuadInteger {
        QuadInteger::from_int(self.d, n)
    }

    /// `(a + b√d) / den`; fails unless the value lies in `O_N`.
    pub fn element(
        &self,
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        den: u8,
    ) -> Result<QuadInteger> {
        let (a, b) = (a.into(), b.into());
        let (x, y) = match den {
            1 => (a * 2, b * 2),
            2 => (a, b),
            _ => return Err(Error::NotIntegral),
        };
        QuadInteger::from_half(self.d, x, y).ok_or(Error::NotIntegral)
    }

    /// `u + v·ω` where `ω` is the second integral basis element.
    pub fn from_omega(&self, u: impl Into<BigInt>, v: impl Into<BigInt>) -> QuadInteger {
        let (u, v) = (u.into(), v.into());
        match self.basis_kind {
            BasisKind::HalfIntegral => QuadInteger {
                d: self.d,
                x: u * 2 + &v,
                y: v,
            },
            BasisKind::Integral => QuadInteger {
                d: self.d,
                x: u * 2,
                y: v * 2,
            },
        }
    }

    /// Coordinates `(u, v)` of `x = u + v·ω` in the integral basis.
    pub fn omega_coords(&self, x: &QuadInteger) -> (BigInt, BigInt) {
        match self.basis_kind {
            BasisKind::HalfIntegral => {
                let v = x.y.clone();
                let u = (&x.x - &v) / 2;
                (u, v)
            }
            BasisKind::Integral => (&x.x / 2, &x.y / 2),
        }
    }

    /// Smallest unit greater than one, from the periodic continued fraction
    /// of `√d` or `(1 + √d)/2` (integer PQa recurrence, period detected by
    /// state repetition).
    pub fn fundamental_unit(&self) -> FundamentalUnit {
        let d = self.d;
        let s = arith::isqrt(d as u64) as i64;
        let (p0, q0) = match self.basis_kind {
            BasisKind::HalfIntegral => (1i64, 2i64),
            BasisKind::Integral => (0, 1),
        };
        let mut p = p0;
        let mut q = q0;
        // convergents A_{i-1}, A_{i-2} and B_{i-1}, B_{i-2}
        let (mut a1, mut a2) = (BigInt::one(), BigInt::zero());
        let (mut b1, mut b2) = (BigInt::zero(), BigInt::one());
        let mut first_state = None;
        let mut i = 0usize;
        loop {
            debug_assert!(q > 0);
            let a = (p + s) / q;
            let a_big = BigInt::from(a);
            let next_a = &a_big * &a1 + &a2;
            let next_b = &a_big * &b1 + &b2;
            a2 = std::mem::replace(&mut a1, next_a);
            b2 = std::mem::replace(&mut b1, next_b);
            let np = a * q - p;
            let nq = (d - np * np) / q;
            p = np;
            q = nq;
            i += 1;
            match first_state {
                None => first_state = Some((p, q)),
                Some(state) if state == (p, q) => break,
                Some(_) => {}
            }
        }
        // the state after step 1 reappeared after step i: period i - 1, and
        // the convergent of index i - 2 (0-based) is held in (a2, b2)
        let _period = i - 1;
        let (conv_p, conv_q) = (a2, b2);
        let value = match self.basis_kind {
            BasisKind::Integral => QuadInteger {
                d,
                x: conv_p * 2,
                y: conv_q * 2,
            },
            BasisKind::HalfIntegral => QuadInteger {
                d,
                x: conv_p * 2 - &conv_q,
                y: conv_q,
            },
        };
        let norm = value.norm();
        let unit_norm = if norm.is_one() {
            1
        } else {
            assert_eq!(norm, BigInt::from(-1), "continued fraction did not give a unit");
            -1
        };
        FundamentalUnit { value, unit_norm }
    }

    /// Image of `x` in the residue field of a prime above the odd
    /// unramified prime `q`. For split `q`, `which_root` chooses the prime
    /// `(q, √d − r)`; it defaults to the smaller root.
    pub fn reduce_mod_prime(
        &self,
        x: &QuadInteger,
        q: u64,
        which_root: Option<u64>,
    ) -> Result<ResidueFieldElement> {
        if q == 2 {
            return Err(Error::EvenPrime);
        }
        let st = self.splitting_type(q)?;
        let prime = match st {
            SplittingType::Ramified => return Err(Error::RamifiedPrime(q)),
            SplittingType::Inert => PrimeAbove::Inert { q },
            SplittingType::Split => {
                let dq = self.d.rem_euclid(q as i64) as u64;
                let root = match which_root {
                    Some(r) => {
                        let r = r % q;
                        if arith::mul_mod(r, r, q) != dq {
                            return Err(Error::InvalidRoot(r, q));
                        }
                        r
                    }
                    None => arith::sqrt_mod_prime(dq, q).expect("split prime has a root"),
                };
                PrimeAbove::Split { q, root }
            }
        };
        Ok(self.reduce_at(x, prime))
    }

    /// Same as [`reduce_mod_prime`](Self::reduce_mod_prime) with the prime
    /// already resolved.
    pub fn reduce_at(&self, x: &QuadInteger, prime: PrimeAbove) -> ResidueFieldElement {
        let q = prime.q();
        let inv2 = (q + 1) / 2;
        let xq = big_mod(&x.x, q);
        let yq = big_mod(&x.y, q);
        let omega_sq = self.d.rem_euclid(q as i64) as u64;
        match prime {
            PrimeAbove::Inert { .. } => ResidueFieldElement {
                q,
                c0: arith::mul_mod(xq, inv2, q),
                c1: arith::mul_mod(yq, inv2, q),
                omega_sq,
                root: None,
            },
            PrimeAbove::Split { root, .. } => {
                let v = (xq + arith::mul_mod(yq, root, q)) % q;
                ResidueFieldElement {
                    q,
                    c0: arith::mul_mod(v, inv2, q),
                    c1: 0,
                    omega_sq,
                    root: Some(root),
                }
            }
        }
    }
}

fn big_mod(x: &BigInt, q: u64) -> u64 {
    x.mod_floor(&BigInt::from(q))
        .to_u64()
        .expect("residue fits in u64")
}

/// An element `(a + b√d)/den` of the ring of integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadInteger {
    d: i64,
    // value = (x + y√d) / 2
    x: BigInt,
    y: BigInt,
}

impl QuadInteger {
    fn from_int(d: i64, n: impl Into<BigInt>) -> Self {
        QuadInteger {
            d,
            x: n.into() * 2,
            y: BigInt::zero(),
        }
    }

    fn from_half(d: i64, x: BigInt, y: BigInt) -> Option<Self> {
        let x_even = x.is_even();
        let y_even = y.is_even();
        let ok = if d % 4 == 1 {
            x_even == y_even
        } else {
            x_even && y_even
        };
        ok.then_some(QuadInteger { d, x, y })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn den(&self) -> u8 {
        if self.x.is_even() && self.y.is_even() {
            1
        } else {
            2
        }
    }

    pub fn a(&self) -> BigInt {
        if self.den() == 1 {
            &self.x / 2
        } else {
            self.x.clone()
        }
    }

    pub fn b(&self) -> BigInt {
        if self.den() == 1 {
            &self.y / 2
        } else {
            self.y.clone()
        }
    }

    /// Half-coordinates `(x, y)` with value `(x + y√d)/2`.
    pub fn half_coords(&self) -> (&BigInt, &BigInt) {
        (&self.x, &self.y)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.y.is_zero() && self.x == BigInt::from(2)
    }

    /// Rational integer value, if the `√d` part vanishes.
    pub fn as_integer(&self) -> Option<BigInt> {
        (self.y.is_zero()).then(|| &self.x / 2)
    }

    pub fn conj(&self) -> Self {
        QuadInteger {
            d: self.d,
            x: self.x.clone(),
            y: -&self.y,
        }
    }

    /// `Norm_{N/Q}`, exact.
    pub fn norm(&self) -> BigInt {
        (&self.x * &self.x - &self.y * &self.y * self.d) / 4
    }

    pub fn is_unit(&self) -> bool {
        self.norm().abs().is_one()
    }

    /// Sign of the real embedding sending `√d` to the positive root.
    pub fn signum(&self) -> i32 {
        let sx = sign(&self.x);
        let sy = sign(&self.y);
        if sx == 0 {
            return sy;
        }
        if sy == 0 || sx == sy {
            return sx;
        }
        // opposite signs: compare x^2 with d y^2
        let lhs = &self.x * &self.x;
        let rhs = &self.y * &self.y * self.d;
        if lhs > rhs {
            sx
        } else {
            sy
        }
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = QuadInteger::from_int(self.d, 1);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Exact quotient by a rational integer, if it stays integral.
    pub fn div_exact_int(&self, k: &BigInt) -> Option<Self> {
        let (qx, rx) = self.x.div_rem(k);
        let (qy, ry) = self.y.div_rem(k);
        if !rx.is_zero() || !ry.is_zero() {
            return None;
        }
        QuadInteger::from_half(self.d, qx, qy)
    }

    /// Largest absolute value among `(a, b)` of `(a + b√d)/den`.
    pub fn ab_height(&self) -> BigInt {
        self.a().abs().max(self.b().abs())
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(self.d, other.d, "elements of different quadratic fields");
    }
}

fn sign(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl<'a> Add<&'a QuadInteger> for &'a QuadInteger {
    type Output = QuadInteger;
    fn add(self, rhs: &QuadInteger) -> QuadInteger {
        self.check_same(rhs);
        QuadInteger {
            d: self.d,
            x: &self.x + &rhs.x,
            y: &self.y + &rhs.y,
        }
    }
}

impl<'a> Sub<&'a QuadInteger> for &'a QuadInteger {
    type Output = QuadInteger;
    fn sub(self, rhs: &QuadInteger) -> QuadInteger {
        self.check_same(rhs);
        QuadInteger {
            d: self.d,
            x: &self.x - &rhs.x,
            y: &self.y - &rhs.y,
        }
    }
}

impl<'a> Mul<&'a QuadInteger> for &'a QuadInteger {
    type Output = QuadInteger;
    fn mul(self, rhs: &QuadInteger) -> QuadInteger {
        self.check_same(rhs);
        let x = &self.x * &rhs.x + &self.y * &rhs.y * self.d;
        let y = &self.x * &rhs.y + &self.y * &rhs.x;
        QuadInteger {
            d: self.d,
            x: x / 2,
            y: y / 2,
        }
    }
}

impl Neg for &QuadInteger {
    type Output = QuadInteger;
    fn neg(self) -> QuadInteger {
        QuadInteger {
            d: self.d,
            x: -&self.x,
            y: -&self.y,
        }
    }
}

impl Add for QuadInteger {
    type Output = QuadInteger;
    fn add(self, rhs: QuadInteger) -> QuadInteger {
        &self + &rhs
    }
}

impl Sub for QuadInteger {
    type Output = QuadInteger;
    fn sub(self, rhs: QuadInteger) -> QuadInteger {
        &self - &rhs
    }
}

impl Mul for QuadInteger {
    type Output = QuadInteger;
    fn mul(self, rhs: QuadInteger) -> QuadInteger {
        &self * &rhs
    }
}

impl Neg for QuadInteger {
    type Output = QuadInteger;
    fn neg(self) -> QuadInteger {
        -&self
    }
}

impl fmt::Display for QuadInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b, den) = (self.a(), self.b(), self.den());
        let body = if b.is_zero() {
            format!("{a}")
        } else {
            let bpart = if b.abs().is_one() {
                format!("√{}", self.d)
            } else {
                format!("{}√{}", b.abs(), self.d)
            };
            let sgn = if b.is_negative() { "-" } else { "+" };
            if a.is_zero() {
                if b.is_negative() {
                    format!("-{bpart}")
                } else {
                    bpart
                }
            } else {
                format!("{a} {sgn} {bpart}")
            }
        };
        if den == 2 {
            write!(f, "({body})/2")
        } else {
            write!(f, "{body}")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalUnit {
    pub value: QuadInteger,
    pub unit_norm: i8,
}

/// Element of the residue field at a prime above `q`: `c0 + c1·ω` with
/// `ω² = d` when `q` is inert, or `c0` in `F_q` when `q` splits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueFieldElement {
    pub q: u64,
    pub c0: u64,
    pub c1: u64,
    pub omega_sq: u64,
    pub root: Option<u64>,
}

impl ResidueFieldElement {
    pub fn one_like(&self) -> Self {
        ResidueFieldElement {
            c0: 1 % self.q,
            c1: 0,
            ..self.clone()
        }
    }

    pub fn is_one(&self) -> bool {
        self.c0 == 1 && self.c1 == 0
    }

    pub fn is_zero(&self) -> bool {
        self.c0 == 0 && self.c1 == 0
    }

    /// Size of the residue field.
    pub fn field_size(&self) -> u64 {
        match self.root {
            Some(_) => self.q,
            None => self.q * self.q,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.q, other.q);
        let q = self.q;
        let m = |a, b| arith::mul_mod(a, b, q);
        let c0 = (m(self.c0, other.c0) + m(m(self.c1, other.c1), self.omega_sq)) % q;
        let c1 = (m(self.c0, other.c1) + m(self.c1, other.c0)) % q;
        ResidueFieldElement {
            c0,
            c1,
            ..self.clone()
        }
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }
}

impl fmt::Display for ResidueFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.root.is_some() || self.c1 == 0 {
            write!(f, "{} mod {}", self.c0, self.q)
        } else {
            write!(f, "{} + {}ω mod {} (ω²={})", self.c0, self.c1, self.q, self.omega_sq)
        }
    }
}
