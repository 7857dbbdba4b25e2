//! Indefinite binary quadratic forms, their reduction cycles, Dirichlet
//! composition, and the narrow and wide class groups they produce.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;

use crate::abelian::CayleyTable;
use crate::arith;
use crate::error::{Error, Result};
use crate::quadfield::{QuadraticField, SplittingType};

pub mod minkowski;

/// `a x² + b xy + c y²` with positive non-square discriminant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryQuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl BinaryQuadraticForm {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let f = BinaryQuadraticForm { a, b, c };
        let disc = f.disc();
        if disc <= 0 || arith::is_square(disc as u64) {
            return Err(Error::SquareDiscriminant(disc));
        }
        if a.gcd(&b).gcd(&c) != 1 {
            return Err(Error::Imprimitive(a, b, c));
        }
        Ok(f)
    }

    fn from_ab(a: i64, b: i64, disc: i64) -> Self {
        let num = b as i128 * b as i128 - disc as i128;
        let den = 4 * a as i128;
        debug_assert_eq!(num % den, 0, "b^2 - disc not divisible by 4a");
        BinaryQuadraticForm {
            a,
            b,
            c: (num / den) as i64,
        }
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// `|√Δ − 2|a|| < b < √Δ`, decided with integer square roots.
    pub fn is_reduced(&self) -> bool {
        let s = arith::isqrt(self.disc() as u64) as i64;
        let two_a = 2 * self.a.abs();
        self.b > 0 && self.b <= s && self.b >= s + 1 - two_a && two_a - self.b <= s
    }

    /// Choose `b` modulo `2a` in the normalizing range.
    fn normalize(&self) -> Self {
        let disc = self.disc();
        let s = arith::isqrt(disc as u64) as i64;
        let abs_a = self.a.abs();
        let m = 2 * abs_a;
        let b = if abs_a > s {
            // -|a| < b <= |a|
            let r = self.b.mod_floor(&m);
            if r > abs_a {
                r - m
            } else {
                r
            }
        } else {
            // s + 1 - 2|a| <= b <= s
            let lo = s + 1 - m;
            lo + (self.b - lo).mod_floor(&m)
        };
        BinaryQuadraticForm::from_ab(self.a, b, disc)
    }

    /// The reduction operator `(a, b, c) -> (c, r(-b, c), *)`, a proper
    /// equivalence.
    pub fn rho(&self) -> Self {
        let disc = self.disc();
        BinaryQuadraticForm {
            a: self.c,
            b: -self.b,
            c: self.a,
        }
        .normalize()
        .with_disc(disc)
    }

    fn with_disc(self, disc: i64) -> Self {
        debug_assert_eq!(self.disc(), disc);
        self
    }

    /// A reduced form properly equivalent to `self`.
    pub fn reduce(&self) -> Self {
        let mut g = self.normalize();
        while !g.is_reduced() {
            g = g.rho();
        }
        g
    }

    /// `(a, -b, c)`, the inverse class.
    pub fn opposite(&self) -> Self {
        BinaryQuadraticForm {
            a: self.a,
            b: -self.b,
            c: self.c,
        }
    }

    pub fn evaluate(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }
}

impl fmt::Display for BinaryQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Dirichlet composition of two forms of equal discriminant (unreduced
/// result).
pub fn compose_forms(
    f1: &BinaryQuadraticForm,
    f2: &BinaryQuadraticForm,
) -> Result<BinaryQuadraticForm> {
    let disc = f1.disc();
    if f2.disc() != disc {
        return Err(Error::DiscriminantMismatch(disc, f2.disc()));
    }
    let (a1, b1) = (f1.a as i128, f1.b as i128);
    let (a2, b2) = (f2.a as i128, f2.b as i128);
    let beta = (b1 + b2) / 2;
    let g1 = a1.extended_gcd(&a2);
    let (mut x1, mut y1, mut e1) = (g1.x, g1.y, g1.gcd);
    if e1 < 0 {
        (x1, y1, e1) = (-x1, -y1, -e1);
    }
    let g2 = e1.extended_gcd(&beta);
    let (mut x2, mut w, mut e) = (g2.x, g2.y, g2.gcd);
    if e < 0 {
        (x2, w, e) = (-x2, -w, -e);
    }
    // u a1 + v a2 + w beta = e
    let u = x2 * x1;
    let v = x2 * y1;
    let a3 = a1 * a2 / (e * e);
    let num = u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + disc as i128) / 2;
    debug_assert_eq!(num % e, 0);
    let b3 = (num / e).mod_floor(&(2 * a3.abs()));
    let c_num = b3 * b3 - disc as i128;
    debug_assert_eq!(c_num % (4 * a3), 0, "composition produced a non-integral form");
    Ok(BinaryQuadraticForm {
        a: a3 as i64,
        b: b3 as i64,
        c: (c_num / (4 * a3)) as i64,
    })
}

/// A proper equivalence class, represented by the lexicographically
/// smallest form of its reduction cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormClass {
    pub canonical: BinaryQuadraticForm,
    pub cycle_length: usize,
}

impl FormClass {
    pub fn disc(&self) -> i64 {
        self.canonical.disc()
    }
}

impl fmt::Display for FormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.canonical)
    }
}

/// The reduction cycle through `f` (starting at a reduced form equivalent
/// to it).
pub fn cycle_of(f: &BinaryQuadraticForm) -> Vec<BinaryQuadraticForm> {
    let start = f.reduce();
    let mut cycle = vec![start];
    let mut g = start.rho();
    while g != start {
        cycle.push(g);
        g = g.rho();
    }
    cycle
}

pub fn reduction_cycle(f: &BinaryQuadraticForm) -> Result<FormClass> {
    let f = BinaryQuadraticForm::new(f.a, f.b, f.c)?;
    let cycle = cycle_of(&f);
    Ok(FormClass {
        canonical: *cycle.iter().min().expect("cycle is nonempty"),
        cycle_length: cycle.len(),
    })
}

pub fn compose(c1: &FormClass, c2: &FormClass) -> Result<FormClass> {
    let f = compose_forms(&c1.canonical, &c2.canonical)?;
    reduction_cycle(&f)
}

/// `(1, b, (b² − Δ)/4)` with the largest admissible `b < √Δ`.
pub fn principal_form(disc: i64) -> BinaryQuadraticForm {
    let s = arith::isqrt(disc as u64) as i64;
    let b = if (s - disc).is_even() { s } else { s - 1 };
    BinaryQuadraticForm::from_ab(1, b, disc)
}

/// A form `(ℓ, b, c)` representing a prime ideal above `ℓ`, with its class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeForm {
    pub form: BinaryQuadraticForm,
    pub class: FormClass,
}

/// `(ℓ, b, c)` with `0 ≤ b < 2ℓ` minimal and `b² ≡ Δ (mod 4ℓ)`.
pub fn prime_form(field: &QuadraticField, l: u64) -> Result<PrimeForm> {
    if field.splitting_type(l)? == SplittingType::Inert {
        return Err(Error::InertPrime(l));
    }
    let disc = field.disc();
    let l = l as i64;
    let m = 4 * l;
    let b = (0..2 * l)
        .find(|b| (b * b - disc).rem_euclid(m) == 0)
        .expect("split or ramified prime has a square root of the discriminant");
    let form = BinaryQuadraticForm::from_ab(l, b, disc);
    Ok(PrimeForm {
        form,
        class: reduction_cycle(&form)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    Narrow,
    Wide,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassGroupStructure {
    pub flavor: Flavor,
    pub h: u64,
    pub elementary_divisors: Vec<u64>,
    pub generators: Vec<FormClass>,
}

/// All classes of a discriminant with the narrow group table and the
/// projection to the wide group.
#[derive(Debug, Clone)]
pub struct ClassGroup {
    disc: i64,
    classes: Vec<FormClass>,
    index: HashMap<BinaryQuadraticForm, usize>,
    narrow: CayleyTable,
    /// Class of the forms representing −1 (principal iff the fundamental
    /// unit has norm −1).
    minus_one: usize,
    wide: CayleyTable,
    wide_of: Vec<usize>,
    wide_reps: Vec<usize>,
}

impl ClassGroup {
    pub fn new(field: &QuadraticField) -> Self {
        Self::for_discriminant(field.disc())
    }

    pub fn for_discriminant(disc: i64) -> Self {
        let reduced = reduced_forms(disc);
        let mut index = HashMap::with_capacity(reduced.len());
        let mut classes = Vec::new();
        let mut cycles: Vec<Vec<BinaryQuadraticForm>> = Vec::new();
        for f in &reduced {
            if index.contains_key(f) {
                continue;
            }
            let cycle = cycle_of(f);
            let id = cycles.len();
            for g in &cycle {
                index.insert(*g, id);
            }
            classes.push(FormClass {
                canonical: *cycle.iter().min().unwrap(),
                cycle_length: cycle.len(),
            });
            cycles.push(cycle);
        }
        // order classes by canonical form, principal first
        let principal = index[&principal_form(disc).reduce()];
        let mut order: Vec<usize> = (0..classes.len()).collect();
        order.sort_by_key(|&i| (i != principal, classes[i].canonical));
        let mut remap = vec![0; classes.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let classes: Vec<FormClass> = order.iter().map(|&i| classes[i]).collect();
        for v in index.values_mut() {
            *v = remap[*v];
        }
        let n = classes.len();
        let lookup = |f: &BinaryQuadraticForm| index[&f.reduce()];
        let table: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let f = compose_forms(&classes[i].canonical, &classes[j].canonical)
                            .expect("same discriminant");
                        lookup(&f)
                    })
                    .collect()
            })
            .collect();
        let narrow = CayleyTable::new_unchecked(table, 0);
        let p = principal_form(disc);
        let minus_one = lookup(&BinaryQuadraticForm {
            a: -p.a,
            b: p.b,
            c: -p.c,
        });
        let sub = narrow.generated(&[minus_one]);
        let (wide, wide_of, wide_reps) = narrow.quotient(&sub);
        ClassGroup {
            disc,
            classes,
            index,
            narrow,
            minus_one,
            wide,
            wide_of,
            wide_reps,
        }
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn classes(&self) -> &[FormClass] {
        &self.classes
    }

    pub fn narrow_table(&self) -> &CayleyTable {
        &self.narrow
    }

    pub fn wide_table(&self) -> &CayleyTable {
        &self.wide
    }

    /// Whether the narrow and wide groups coincide.
    pub fn minus_one_is_principal(&self) -> bool {
        self.minus_one == self.narrow.identity()
    }

    pub fn h(&self, flavor: Flavor) -> u64 {
        match flavor {
            Flavor::Narrow => self.narrow.len() as u64,
            Flavor::Wide => self.wide.len() as u64,
        }
    }

    /// Narrow class index of any form of this discriminant.
    pub fn index_of(&self, f: &BinaryQuadraticForm) -> usize {
        self.index[&f.reduce()]
    }

    pub fn class_of(&self, f: &BinaryQuadraticForm) -> FormClass {
        self.classes[self.index_of(f)]
    }

    /// Order of the class of `f` in the chosen group.
    pub fn order_of(&self, f: &BinaryQuadraticForm, flavor: Flavor) -> u64 {
        let i = self.index_of(f);
        match flavor {
            Flavor::Narrow => self.narrow.order(i),
            Flavor::Wide => self.wide.order(self.wide_of[i]),
        }
    }

    /// Element index of `f` in the chosen group's table.
    pub fn element_of(&self, f: &BinaryQuadraticForm, flavor: Flavor) -> usize {
        let i = self.index_of(f);
        match flavor {
            Flavor::Narrow => i,
            Flavor::Wide => self.wide_of[i],
        }
    }

    /// Order of the subgroup generated by the given forms.
    pub fn subgroup_order(&self, forms: &[BinaryQuadraticForm], flavor: Flavor) -> u64 {
        let gens: Vec<usize> = forms.iter().map(|f| self.element_of(f, flavor)).collect();
        match flavor {
            Flavor::Narrow => self.narrow.generated(&gens).len() as u64,
            Flavor::Wide => self.wide.generated(&gens).len() as u64,
        }
    }

    pub fn structure(&self, flavor: Flavor) -> ClassGroupStructure {
        let (table, to_class): (&CayleyTable, Box<dyn Fn(usize) -> FormClass>) = match flavor {
            Flavor::Narrow => (&self.narrow, Box::new(|i| self.classes[i])),
            Flavor::Wide => (&self.wide, Box::new(|i| self.classes[self.wide_reps[i]])),
        };
        let (elementary_divisors, gens) = table.abelian_structure();
        ClassGroupStructure {
            flavor,
            h: table.len() as u64,
            elementary_divisors,
            generators: gens.into_iter().map(to_class).collect(),
        }
    }
}

/// Every reduced form of discriminant `disc`, sorted.
pub fn reduced_forms(disc: i64) -> Vec<BinaryQuadraticForm> {
    let s = arith::isqrt(disc as u64) as i64;
    let mut out = Vec::new();
    let mut b = if (s - disc).is_even() { s } else { s - 1 };
    while b > 0 {
        let m = (disc - b * b) / 4; // m = -ac > 0
        for a in 1..=m {
            if a * a > m {
                break;
            }
            if m % a != 0 {
                continue;
            }
            for aa in [a, m / a] {
                for sa in [aa, -aa] {
                    let f = BinaryQuadraticForm {
                        a: sa,
                        b,
                        c: -m / sa,
                    };
                    if f.is_reduced() && f.a.gcd(&f.b).gcd(&f.c) == 1 {
                        out.push(f);
                    }
                }
            }
        }
        b -= 2;
    }
    out.sort();
    out.dedup();
    out
}

pub fn class_group(field: &QuadraticField, flavor: Flavor) -> ClassGroupStructure {
    ClassGroup::new(field).structure(flavor)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyaReport {
    pub ramified_primes: Vec<u64>,
    pub ramification_indices: Vec<u32>,
    pub polya_order: u64,
    pub h1_order: u64,
}

/// `|Po(N)|` as the order of the subgroup of the wide class group generated
/// by the ramified primes, and `|H¹| = 2^s / |Po(N)|`.
pub fn polya_report(field: &QuadraticField) -> PolyaReport {
    polya_report_with(field, &ClassGroup::new(field))
}

pub fn polya_report_with(field: &QuadraticField, group: &ClassGroup) -> PolyaReport {
    let ramified_primes = field.ramified_primes();
    let forms: Vec<BinaryQuadraticForm> = ramified_primes
        .iter()
        .map(|&l| prime_form(field, l).expect("ramified prime has a form").form)
        .collect();
    let polya_order = group.subgroup_order(&forms, Flavor::Wide);
    let s = ramified_primes.len() as u32;
    PolyaReport {
        ramification_indices: vec![2; ramified_primes.len()],
        ramified_primes,
        polya_order,
        h1_order: (1u64 << s) / polya_order,
    }
}
