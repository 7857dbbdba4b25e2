//! Arithmetic in the compositum `M = NK` as a free `O_N`-module on the
//! period basis, relative norms and characteristic polynomials over `N`,
//! bounded searches for elements of given relative norm, and the
//! composition checks for polynomials attached to ideal classes.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::cyclicext::CyclicExtensionDescriptor;
use crate::error::{Error, Result};
use crate::formclass::{self, ClassGroup, Flavor, FormClass};
use crate::quadfield::{BasisKind, QuadInteger, QuadraticField};

/// `Σ coords[i] · η_i` with coordinates in `O_N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelativeElement {
    coords: Vec<QuadInteger>,
}

impl RelativeElement {
    pub fn new(coords: Vec<QuadInteger>) -> Self {
        RelativeElement { coords }
    }

    pub fn coords(&self) -> &[QuadInteger] {
        &self.coords
    }

    /// Largest `ω`-basis coordinate in absolute value.
    pub fn height(&self, field: &QuadraticField) -> BigInt {
        self.coords
            .iter()
            .map(|c| {
                let (u, v) = field.omega_coords(c);
                u.magnitude().max(v.magnitude()).clone().into()
            })
            .max()
            .unwrap_or_default()
    }
}

impl fmt::Display for RelativeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c})·η{i}"))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Monic polynomial over `O_N`, coefficients ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelativeCharPoly {
    pub coeffs: Vec<QuadInteger>,
}

impl RelativeCharPoly {
    pub fn constant(&self) -> &QuadInteger {
        &self.coeffs[0]
    }
}

impl fmt::Display for RelativeCharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.coeffs.len() - 1;
        write!(f, "x^{n}")?;
        for (i, c) in self.coeffs.iter().enumerate().take(n).rev() {
            if c.is_zero() {
                continue;
            }
            match i {
                0 => write!(f, " + ({c})")?,
                1 => write!(f, " + ({c})x")?,
                _ => write!(f, " + ({c})x^{i}")?,
            }
        }
        Ok(())
    }
}

/// `M = NK` with the product basis `O_N ⊗ Z[η]`, valid when `q ∤ disc N`.
#[derive(Debug, Clone)]
pub struct Compositum<'a> {
    field: &'a QuadraticField,
    desc: &'a CyclicExtensionDescriptor,
}

impl<'a> Compositum<'a> {
    pub fn new(field: &'a QuadraticField, desc: &'a CyclicExtensionDescriptor) -> Result<Self> {
        if field.disc() % desc.q() as i64 == 0 {
            return Err(Error::ProductBasisInvalid(desc.q()));
        }
        Ok(Compositum { field, desc })
    }

    pub fn field(&self) -> &QuadraticField {
        self.field
    }

    pub fn desc(&self) -> &CyclicExtensionDescriptor {
        self.desc
    }

    fn degree(&self) -> usize {
        self.desc.degree() as usize
    }

    /// The element `u ∈ O_N`, using `1 = −Σ η_i`.
    pub fn scalar(&self, u: &QuadInteger) -> RelativeElement {
        RelativeElement::new(vec![-u; self.degree()])
    }

    pub fn one(&self) -> RelativeElement {
        self.scalar(&self.field.one())
    }

    /// `η_i`.
    pub fn eta(&self, i: usize) -> RelativeElement {
        let mut coords = vec![self.field.zero(); self.degree()];
        coords[i] = self.field.one();
        RelativeElement::new(coords)
    }

    pub fn add(&self, a: &RelativeElement, b: &RelativeElement) -> RelativeElement {
        RelativeElement::new(a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect())
    }

    pub fn mul(&self, a: &RelativeElement, b: &RelativeElement) -> RelativeElement {
        let e = self.degree();
        let mut out = vec![self.field.zero(); e];
        for (i, ai) in a.coords.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.coords.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let prod = ai * bj;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.desc.structure_constant(i, j, k);
                    if c != 0 {
                        *o = &*o + &(&prod * &self.field.int(c));
                    }
                }
            }
        }
        RelativeElement::new(out)
    }

    /// `σ^i(α)` where `σ(η_k) = η_{k+1}` generates `Gal(M/N)`.
    pub fn galois_apply(&self, i: usize, alpha: &RelativeElement) -> RelativeElement {
        let e = self.degree();
        let mut coords = vec![self.field.zero(); e];
        for (k, c) in alpha.coords.iter().enumerate() {
            coords[(k + i) % e] = c.clone();
        }
        RelativeElement::new(coords)
    }

    /// Value in `O_N` of an element fixed by `σ` (all coordinates equal).
    pub fn as_base(&self, alpha: &RelativeElement) -> Option<QuadInteger> {
        let first = alpha.coords.first()?;
        alpha.coords.iter().all(|c| c == first).then(|| -first)
    }

    /// `∏_i σ^i(α)`.
    pub fn relative_norm(&self, alpha: &RelativeElement) -> QuadInteger {
        let mut acc = alpha.clone();
        for i in 1..self.degree() {
            acc = self.mul(&acc, &self.galois_apply(i, alpha));
        }
        self.as_base(&acc).expect("the norm is fixed by the Galois group")
    }

    /// Characteristic polynomial over `N` of multiplication by `α`
    /// (Faddeev-LeVerrier with exact integer divisions).
    pub fn charpoly_over_n(&self, alpha: &RelativeElement) -> RelativeCharPoly {
        let e = self.degree();
        // column j holds α·η_j
        let cols: Vec<RelativeElement> = (0..e).map(|j| self.mul(alpha, &self.eta(j))).collect();
        let a: Vec<Vec<QuadInteger>> = (0..e)
            .map(|i| (0..e).map(|j| cols[j].coords[i].clone()).collect())
            .collect();
        let zero = self.field.zero();
        let matmul = |x: &[Vec<QuadInteger>], y: &[Vec<QuadInteger>]| -> Vec<Vec<QuadInteger>> {
            (0..e)
                .map(|i| {
                    (0..e)
                        .map(|j| (0..e).fold(zero.clone(), |acc, k| &acc + &(&x[i][k] * &y[k][j])))
                        .collect()
                })
                .collect()
        };
        let mut coeffs = vec![self.field.zero(); e + 1];
        coeffs[e] = self.field.one();
        let mut m: Vec<Vec<QuadInteger>> = (0..e)
            .map(|i| (0..e).map(|j| if i == j { self.field.one() } else { self.field.zero() }).collect())
            .collect();
        for k in 1..=e {
            let am = matmul(&a, &m);
            let trace = (0..e).fold(self.field.zero(), |acc, i| &acc + &am[i][i]);
            let c = (-trace)
                .div_exact_int(&BigInt::from(k))
                .expect("characteristic polynomial coefficients are integral");
            coeffs[e - k] = c.clone();
            m = am;
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = &row[i] + &c;
            }
        }
        RelativeCharPoly { coeffs }
    }

    /// Elements with every `ω`-coordinate in `[−bound, bound]` are scanned in
    /// lexicographic order of `(coordinate index, u, v)`; the first one of
    /// relative norm `target` is returned.
    pub fn search_norm_element(&self, target: &QuadInteger, bound: u64) -> SearchOutcome {
        let e = self.degree();
        let b = bound as i64;
        let dims = 2 * e;
        let ctx = SmallArith::new(self);
        let (tu, tv) = self.field.omega_coords(target);
        let target_half = ctx.half_from_omega(tu.to_i128(), tv.to_i128());
        let hit = (-b..=b).into_par_iter().find_map_first(|lead| {
            let mut v = vec![-b; dims];
            v[0] = lead;
            loop {
                if ctx.norm_matches(&v, &target_half) {
                    let alpha = self.from_omega_coords(&v);
                    if self.relative_norm(&alpha) == *target {
                        return Some(alpha);
                    }
                }
                // odometer over v[1..]
                let mut pos = dims - 1;
                loop {
                    if pos == 0 {
                        return None;
                    }
                    if v[pos] < b {
                        v[pos] += 1;
                        break;
                    }
                    v[pos] = -b;
                    pos -= 1;
                }
            }
        });
        match hit {
            Some(element) => {
                let charpoly = self.charpoly_over_n(&element);
                let sign = if e % 2 == 0 { self.field.one() } else { -self.field.one() };
                assert_eq!(charpoly.constant(), &(&sign * target), "search hit failed re-verification");
                SearchOutcome::Found(element)
            }
            None => SearchOutcome::NotFound { bound },
        }
    }

    /// Element from interleaved `ω`-coordinates `(u0, v0, u1, v1, ...)`.
    pub fn from_omega_coords(&self, v: &[i64]) -> RelativeElement {
        RelativeElement::new(
            v.chunks(2)
                .map(|uv| self.field.from_omega(uv[0], uv[1]))
                .collect(),
        )
    }

    /// Strips the constant term `ε^{p^n}` from the characteristic polynomial
    /// of an `α` with `Norm(α) = −ε^{p^n}`.
    pub fn family_polynomial(&self, alpha: &RelativeElement, class: FormClass) -> Result<FamilyFPolynomial> {
        let eps = self.field.fundamental_unit().value;
        let e = self.desc.degree();
        let target = -eps.pow(e);
        let norm = self.relative_norm(alpha);
        if norm != target {
            return Err(Error::WrongNorm);
        }
        let charpoly = self.charpoly_over_n(alpha);
        let certified_constant = charpoly.constant().clone();
        debug_assert_eq!(certified_constant, eps.pow(e));
        let mut p_coeffs = charpoly.coeffs.clone();
        p_coeffs[0] = self.field.zero();
        Ok(FamilyFPolynomial {
            p_coeffs,
            class,
            q: self.desc.q(),
            p: self.desc.p(),
            n: self.desc.n(),
            certified_constant,
            witness: alpha.clone(),
            witness_kind: if norm.is_unit() {
                WitnessKind::Unit
            } else {
                WitnessKind::NonUnit
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(RelativeElement),
    NotFound { bound: u64 },
}

impl SearchOutcome {
    pub fn found(&self) -> Option<&RelativeElement> {
        match self {
            SearchOutcome::Found(a) => Some(a),
            SearchOutcome::NotFound { .. } => None,
        }
    }
}

/// An integral `α` has unit relative norm exactly when it is a unit of `O_M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessKind {
    Unit,
    NonUnit,
}

/// `P(x) = charpoly(α)(x) − ε^{p^n}` with the class and extension it is
/// attached to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyFPolynomial {
    /// Ascending coefficients; the constant term is zero.
    pub p_coeffs: Vec<QuadInteger>,
    pub class: FormClass,
    pub q: u64,
    pub p: u64,
    pub n: u32,
    pub certified_constant: QuadInteger,
    pub witness: RelativeElement,
    pub witness_kind: WitnessKind,
}

impl FamilyFPolynomial {
    /// The characteristic polynomial, constant term restored.
    pub fn charpoly(&self) -> RelativeCharPoly {
        let mut coeffs = self.p_coeffs.clone();
        coeffs[0] = self.certified_constant.clone();
        RelativeCharPoly { coeffs }
    }

    /// `Norm_{M/N}(α) = −ε^{p^n}`.
    pub fn norm(&self) -> QuadInteger {
        -&self.certified_constant
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionReport {
    pub product_class: FormClass,
    pub product_order: u64,
    /// `Norm(α_P)·Norm(α_Q) = (constant of W)²`.
    pub constant_identity: bool,
    /// The product of the attached classes is the class attached to `W`.
    pub class_correspondence: bool,
    pub passes: bool,
}

/// Checks `P ∘ Q ~ W` for polynomials attached to classes of order `p^n`.
pub fn composition_check(
    group: &ClassGroup,
    p: &FamilyFPolynomial,
    q: &FamilyFPolynomial,
    w: &FamilyFPolynomial,
) -> Result<CompositionReport> {
    let required = crate::arith::ipow(p.p, p.n);
    for f in [p, q] {
        let found = group.order_of(&f.class.canonical, Flavor::Wide);
        if found != required {
            return Err(Error::OrderViolation { required, found });
        }
    }
    let product_class = formclass::compose(&p.class, &q.class)?;
    let product_order = group.order_of(&product_class.canonical, Flavor::Wide);
    if product_order != required {
        return Err(Error::OrderViolation {
            required,
            found: product_order,
        });
    }
    let constant_identity = &p.norm() * &q.norm() == &w.certified_constant * &w.certified_constant;
    let class_correspondence = group.element_of(&product_class.canonical, Flavor::Wide)
        == group.element_of(&w.class.canonical, Flavor::Wide);
    Ok(CompositionReport {
        product_class,
        product_order,
        constant_identity,
        class_correspondence,
        passes: constant_identity && class_correspondence,
    })
}

/// Integer arithmetic on half-coordinates for the search inner loop. Returns
/// `None` on overflow, in which case the exact path decides.
struct SmallArith {
    d: i128,
    half_integral: bool,
    e: usize,
    /// `(i, j, k, c)` for each nonzero structure constant.
    constants: Vec<(usize, usize, usize, i128)>,
}

type Half = (i128, i128);

impl SmallArith {
    fn new(m: &Compositum<'_>) -> Self {
        let e = m.degree();
        let mut constants = Vec::new();
        for i in 0..e {
            for j in 0..e {
                for k in 0..e {
                    let c = m.desc.structure_constant(i, j, k);
                    if c != 0 {
                        constants.push((i, j, k, c as i128));
                    }
                }
            }
        }
        SmallArith {
            d: m.field.d() as i128,
            half_integral: m.field.basis_kind() == BasisKind::HalfIntegral,
            e,
            constants,
        }
    }

    fn half_from_omega(&self, u: Option<i128>, v: Option<i128>) -> Option<Half> {
        let (u, v) = (u?, v?);
        Some(if self.half_integral {
            (2 * u + v, v)
        } else {
            (2 * u, 2 * v)
        })
    }

    fn mul_half(&self, a: Half, b: Half) -> Option<Half> {
        let x = a.0.checked_mul(b.0)?.checked_add(self.d.checked_mul(a.1)?.checked_mul(b.1)?)?;
        let y = a.0.checked_mul(b.1)?.checked_add(a.1.checked_mul(b.0)?)?;
        Some((x / 2, y / 2))
    }

    fn mul(&self, a: &[Half], b: &[Half]) -> Option<Vec<Half>> {
        let mut out = vec![(0i128, 0i128); self.e];
        for &(i, j, k, c) in &self.constants {
            if a[i] == (0, 0) || b[j] == (0, 0) {
                continue;
            }
            let prod = self.mul_half(a[i], b[j])?;
            out[k].0 = out[k].0.checked_add(prod.0.checked_mul(c)?)?;
            out[k].1 = out[k].1.checked_add(prod.1.checked_mul(c)?)?;
        }
        Some(out)
    }

    /// Whether the relative norm of `v` (interleaved `ω`-coordinates) is the
    /// target; `true` on overflow so that the caller checks exactly.
    fn norm_matches(&self, v: &[i64], target: &Option<Half>) -> bool {
        let Some(target) = target else {
            return true;
        };
        let alpha: Vec<Half> = v
            .chunks(2)
            .map(|uv| {
                self.half_from_omega(Some(uv[0] as i128), Some(uv[1] as i128))
                    .unwrap()
            })
            .collect();
        let result = (|| {
            let mut acc = alpha.clone();
            for i in 1..self.e {
                let mut conj = vec![(0, 0); self.e];
                for (k, c) in alpha.iter().enumerate() {
                    conj[(k + i) % self.e] = *c;
                }
                acc = self.mul(&acc, &conj)?;
            }
            Some((-acc[0].0, -acc[0].1))
        })();
        match result {
            Some(n) => n == *target,
            None => true,
        }
    }
}
