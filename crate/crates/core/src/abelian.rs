//! Finite groups given by a Cayley table on indices `0..n`, with the
//! brute-force structure computations (orders, generated subgroups,
//! invariant factors, quotients) used by the class group and transfer code.

use std::collections::BTreeSet;

use crate::arith;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyTable {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl CayleyTable {
    /// Builds a table, checking closure, identity, inverses and
    /// associativity.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self, String> {
        let n = table.len();
        if n == 0 {
            return Err("empty table".into());
        }
        if table.iter().any(|row| row.len() != n) {
            return Err("table is not square".into());
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return Err("entry out of range".into());
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or("no identity element")?;
        let mut inverse = vec![usize::MAX; n];
        for x in 0..n {
            inverse[x] = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| format!("element {x} has no inverse"))?;
        }
        for x in 0..n {
            for y in 0..n {
                let xy = table[x][y];
                for z in 0..n {
                    if table[xy][z] != table[x][table[y][z]] {
                        return Err(format!("not associative at ({x}, {y}, {z})"));
                    }
                }
            }
        }
        Ok(CayleyTable {
            table,
            identity,
            inverse,
        })
    }

    /// Builds a table known to be a group (no associativity check).
    pub(crate) fn new_unchecked(table: Vec<Vec<usize>>, identity: usize) -> Self {
        let n = table.len();
        let inverse = (0..n)
            .map(|x| {
                (0..n)
                    .find(|&y| table[x][y] == identity)
                    .expect("group element has an inverse")
            })
            .collect();
        CayleyTable {
            table,
            identity,
            inverse,
        }
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn pow(&self, x: usize, k: u64) -> usize {
        let mut acc = self.identity;
        for _ in 0..k {
            acc = self.mul(acc, x);
        }
        acc
    }

    pub fn order(&self, x: usize) -> u64 {
        let mut k = 1;
        let mut y = x;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| (0..n).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        seen[self.identity] = true;
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..self.len()).filter(|&x| seen[x]).collect()
    }

    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        let set: BTreeSet<usize> = elems.iter().copied().collect();
        !set.is_empty()
            && set.contains(&self.identity)
            && set.iter().all(|&x| {
                set.contains(&self.inv(x)) && set.iter().all(|&y| set.contains(&self.mul(x, y)))
            })
    }

    /// Invariant factors `d1 | d2 | ... | dk` (ascending, all > 1) and
    /// generators of matching orders, for an abelian table.
    pub fn abelian_structure(&self) -> (Vec<u64>, Vec<usize>) {
        debug_assert!(self.is_abelian());
        let n = self.len() as u64;
        if n == 1 {
            return (Vec::new(), Vec::new());
        }
        // per prime: exponents (descending) and basis elements
        let mut sylow_parts: Vec<(u64, Vec<u32>, Vec<usize>)> = Vec::new();
        for (p, _) in arith::factorize(n) {
            let elems: Vec<usize> = (0..self.len())
                .filter(|&x| is_power_of(self.order(x), p))
                .collect();
            let exps = self.p_exponents(&elems, p);
            let basis = self
                .p_basis(&elems, p, &exps)
                .expect("p-group basis exists");
            sylow_parts.push((p, exps, basis));
        }
        let rank = sylow_parts.iter().map(|(_, e, _)| e.len()).max().unwrap_or(0);
        let mut factors = Vec::with_capacity(rank);
        for j in 0..rank {
            let mut d = 1u64;
            let mut g = self.identity;
            for (p, exps, basis) in &sylow_parts {
                if j < exps.len() {
                    d *= arith::ipow(*p, exps[j]);
                    g = self.mul(g, basis[j]);
                }
            }
            factors.push((d, g));
        }
        // descending by construction; report ascending
        factors.reverse();
        factors.into_iter().unzip()
    }

    /// Exponents `λ1 ≥ λ2 ≥ ...` of the p-group on `elems`, from the
    /// counts of elements killed by `p^k`.
    fn p_exponents(&self, elems: &[usize], p: u64) -> Vec<u32> {
        let max_order = elems.iter().map(|&x| self.order(x)).max().unwrap_or(1);
        let max_k = log_p(max_order, p);
        // ranks[k-1] = log_p |G[p^k]| - log_p |G[p^(k-1)]| = #{i : λi >= k}
        let mut prev = 0u32;
        let mut at_least = Vec::new();
        for k in 1..=max_k {
            let pk = arith::ipow(p, k);
            let count = elems.iter().filter(|&&x| pk % self.order(x) == 0).count() as u64;
            let l = log_p(count, p);
            at_least.push(l - prev);
            prev = l;
        }
        let parts = at_least.first().copied().unwrap_or(0) as usize;
        (0..parts)
            .map(|i| at_least.iter().filter(|&&r| r as usize > i).count() as u32)
            .collect()
    }

    fn p_basis(&self, elems: &[usize], p: u64, exps: &[u32]) -> Option<Vec<usize>> {
        fn search(
            g: &CayleyTable,
            elems: &[usize],
            p: u64,
            exps: &[u32],
            chosen: &mut Vec<usize>,
            span: usize,
        ) -> bool {
            let i = chosen.len();
            if i == exps.len() {
                return true;
            }
            let target = arith::ipow(p, exps[i]);
            for &y in elems {
                if g.order(y) != target {
                    continue;
                }
                chosen.push(y);
                let size = g.generated(chosen).len();
                if size == span * target as usize && search(g, elems, p, exps, chosen, size) {
                    return true;
                }
                chosen.pop();
            }
            false
        }
        let mut chosen = Vec::new();
        search(self, elems, p, exps, &mut chosen, 1).then_some(chosen)
    }

    /// Quotient by the normal subgroup `sub`: the quotient table, the coset
    /// index of every element, and the smallest element of each coset.
    pub fn quotient(&self, sub: &[usize]) -> (CayleyTable, Vec<usize>, Vec<usize>) {
        let n = self.len();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            reps.push(x);
            for &h in sub {
                coset_of[self.mul(x, h)] = idx;
            }
        }
        let m = reps.len();
        let table: Vec<Vec<usize>> = (0..m)
            .map(|i| (0..m).map(|j| coset_of[self.mul(reps[i], reps[j])]).collect())
            .collect();
        let identity = coset_of[self.identity];
        (CayleyTable::new_unchecked(table, identity), coset_of, reps)
    }
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

fn log_p(mut n: u64, p: u64) -> u32 {
    let mut k = 0;
    while n > 1 {
        debug_assert_eq!(n % p, 0);
        n /= p;
        k += 1;
    }
    k
}

/// Cayley table of `Z/n1 × Z/n2 × ...` with elements in mixed-radix order.
pub fn abelian_product(moduli: &[u64]) -> CayleyTable {
    let n: usize = moduli.iter().product::<u64>() as usize;
    let decode = |mut x: usize| -> Vec<u64> {
        let mut v = Vec::with_capacity(moduli.len());
        for &m in moduli.iter().rev() {
            v.push((x % m as usize) as u64);
            x /= m as usize;
        }
        v.reverse();
        v
    };
    let encode = |v: &[u64]| -> usize {
        v.iter()
            .zip(moduli)
            .fold(0usize, |acc, (&c, &m)| acc * m as usize + c as usize)
    };
    let table = (0..n)
        .map(|x| {
            let vx = decode(x);
            (0..n)
                .map(|y| {
                    let vy = decode(y);
                    let s: Vec<u64> = vx
                        .iter()
                        .zip(&vy)
                        .zip(moduli)
                        .map(|((a, b), m)| (a + b) % m)
                        .collect();
                    encode(&s)
                })
                .collect()
        })
        .collect();
    CayleyTable::new_unchecked(table, 0)
}
