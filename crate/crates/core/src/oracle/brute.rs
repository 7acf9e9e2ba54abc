//! Brute-force reference implementations. None of them calls into the
//! collection, linear algebra or subgroup code they are compared against.

use std::collections::{BTreeSet, HashMap};

use crate::pcp::{Element, PcPresentation};

/// Multiplication of a pc presentation computed by plain word reduction:
/// `x_m x_k -> x_k x_m [x_m,x_k]` for `m > k` and `x_k^p -> tail`, with
/// every product "normal word times generator" memoized.
pub struct BruteGroup {
    p: usize,
    n: usize,
    power: Vec<Vec<usize>>,
    comm: Vec<Vec<Vec<usize>>>,
    memo: HashMap<(usize, usize), usize>,
    steps: usize,
}

/// Reductions allowed before giving up on a presentation.
const STEP_LIMIT: usize = 50_000_000;

fn letters(p: usize, e: &Element) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, &x) in e.exponents().iter().enumerate() {
        for _ in 0..x {
            out.push(i);
        }
        debug_assert!((x as usize) < p);
    }
    out
}

impl BruteGroup {
    pub fn new(g: &PcPresentation) -> Self {
        let p = g.prime() as usize;
        let n = g.len();
        let power = (0..n).map(|i| letters(p, g.power_rhs(i))).collect();
        let comm = (0..n).map(|j| (0..j).map(|i| letters(p, g.comm_rhs(j, i))).collect()).collect();
        BruteGroup { p, n, power, comm, memo: HashMap::new(), steps: 0 }
    }

    pub fn order(&self) -> usize {
        self.p.pow(self.n as u32)
    }

    /// Mixed-radix index, first generator least significant.
    pub fn index(&self, e: &Element) -> usize {
        e.exponents().iter().rev().fold(0, |acc, &x| acc * self.p + x as usize)
    }

    pub fn element(&self, mut idx: usize) -> Element {
        let mut v = vec![0u8; self.n];
        for x in v.iter_mut() {
            *x = (idx % self.p) as u8;
            idx /= self.p;
        }
        Element::from_exponents(v)
    }

    fn digit(&self, idx: usize, k: usize) -> usize {
        idx / self.p.pow(k as u32) % self.p
    }

    fn last(&self, idx: usize) -> Option<usize> {
        (0..self.n).rev().find(|&k| self.digit(idx, k) != 0)
    }

    /// `a * x_k` in normal form, or `None` if the step budget ran out.
    pub fn mul_gen(&mut self, a: usize, k: usize) -> Option<usize> {
        if let Some(&r) = self.memo.get(&(a, k)) {
            return Some(r);
        }
        self.steps += 1;
        if self.steps > STEP_LIMIT {
            return None;
        }
        let unit = self.p.pow(k as u32);
        let r = match self.last(a) {
            Some(m) if m > k => {
                // b x_m x_k = b x_k x_m [x_m,x_k]
                let b = a - self.p.pow(m as u32);
                let t = self.mul_gen(b, k)?;
                let t = self.mul_gen(t, m)?;
                let tail = self.comm[m][k].clone();
                self.mul_word(t, &tail)?
            }
            _ => {
                if self.digit(a, k) + 1 < self.p {
                    a + unit
                } else {
                    let b = a - (self.p - 1) * unit;
                    let tail = self.power[k].clone();
                    self.mul_word(b, &tail)?
                }
            }
        };
        self.memo.insert((a, k), r);
        Some(r)
    }

    pub fn mul_word(&mut self, mut a: usize, w: &[usize]) -> Option<usize> {
        for &k in w {
            a = self.mul_gen(a, k)?;
        }
        Some(a)
    }

    pub fn mul(&mut self, a: usize, b: usize) -> Option<usize> {
        let w = letters(self.p, &self.element(b));
        self.mul_word(a, &w)
    }

    /// Full Cayley table, indices as in [`index`](Self::index).
    pub fn table(&mut self) -> Option<Vec<Vec<usize>>> {
        let n = self.order();
        (0..n).map(|a| (0..n).map(|b| self.mul(a, b)).collect()).collect()
    }
}

pub fn is_associative(t: &[Vec<usize>]) -> bool {
    let n = t.len();
    (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| t[t[a][b]][c] == t[a][t[b][c]])))
}

/// Element set of the subgroup generated by `gens` in a Cayley table.
pub fn closure(t: &[Vec<usize>], gens: &[usize]) -> BTreeSet<usize> {
    let mut set = BTreeSet::from([0usize]);
    let mut queue = vec![0usize];
    while let Some(a) = queue.pop() {
        for &g in gens {
            let b = t[a][g];
            if set.insert(b) {
                queue.push(b);
            }
        }
    }
    set
}

/// Every subgroup of the group with Cayley table `t`, as element sets.
pub fn all_subgroups(t: &[Vec<usize>]) -> BTreeSet<BTreeSet<usize>> {
    let trivial = BTreeSet::from([0usize]);
    let mut found = BTreeSet::from([trivial.clone()]);
    let mut frontier = vec![trivial];
    while let Some(s) = frontier.pop() {
        for x in 0..t.len() {
            if s.contains(&x) {
                continue;
            }
            let gens: Vec<usize> = s.iter().copied().chain([x]).collect();
            let c = closure(t, &gens);
            if found.insert(c.clone()) {
                frontier.push(c);
            }
        }
    }
    found
}

fn gcd_ext(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = gcd_ext(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Upper triangular Hermite basis of the row lattice of a nonsingular
/// square matrix, positive diagonal, entries above reduced.
pub fn hermite(rows: &[Vec<i64>]) -> Option<Vec<Vec<i128>>> {
    let n = rows.len();
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    for c in 0..n {
        for r in c + 1..n {
            if m[r][c] == 0 {
                continue;
            }
            let (g, x, y) = gcd_ext(m[c][c], m[r][c]);
            let (a, b) = (m[c][c] / g, m[r][c] / g);
            for k in 0..n {
                let (u, v) = (m[c][k], m[r][k]);
                m[c][k] = x * u + y * v;
                m[r][k] = -b * u + a * v;
            }
        }
        if m[c][c] == 0 {
            return None;
        }
        if m[c][c] < 0 {
            m[c].iter_mut().for_each(|x| *x = -*x);
        }
    }
    for c in (0..n).rev() {
        for r in 0..c {
            let q = m[r][c].div_euclid(m[c][c]);
            for k in 0..n {
                m[r][k] -= q * m[c][k];
            }
        }
    }
    Some(m)
}

/// Abelian invariants of `Z^n / rowspan` found by listing its elements
/// and counting those of each order.
pub fn cokernel_invariants(rows: &[Vec<i64>]) -> Option<Vec<u64>> {
    let h = hermite(rows)?;
    let n = h.len();
    let diag: Vec<i128> = (0..n).map(|i| h[i][i]).collect();
    let order: i128 = diag.iter().product();
    let reduce = |v: &mut Vec<i128>| {
        for c in 0..n {
            let q = v[c].div_euclid(diag[c]);
            for k in 0..n {
                v[k] -= q * h[c][k];
            }
        }
    };
    // count elements killed by each power of the primes involved
    let mut elements = Vec::with_capacity(order as usize);
    let mut v = vec![0i128; n];
    loop {
        elements.push(v.clone());
        let mut i = 0;
        while i < n {
            v[i] += 1;
            if v[i] < diag[i] {
                break;
            }
            v[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    let elt_order = |e: &Vec<i128>| -> u64 {
        let mut acc = e.clone();
        let mut k = 1;
        loop {
            if acc.iter().all(|&x| x == 0) {
                return k;
            }
            for i in 0..n {
                acc[i] += e[i];
            }
            reduce(&mut acc);
            k += 1;
        }
    };
    let orders: Vec<u64> = elements.iter().map(elt_order).collect();
    Some(invariants_from_orders(&orders))
}

/// Invariants of a finite abelian group with the given multiset of element
/// orders, assuming it is a p-group for a single prime.
pub fn invariants_from_orders(orders: &[u64]) -> Vec<u64> {
    let max = orders.iter().copied().max().unwrap_or(1);
    if max == 1 {
        return Vec::new();
    }
    let p = (2..=max).find(|d| max % d == 0).unwrap();
    // |G[p^k]| = p^(sum over factors of min(k, e_i))
    let mut ranks = Vec::new();
    let mut prev = 1u64;
    let mut q = p;
    loop {
        let killed = orders.iter().filter(|&&o| q % o == 0).count() as u64;
        let r = (killed / prev).ilog(p);
        if r == 0 {
            break;
        }
        ranks.push(r);
        prev = killed;
        q *= p;
    }
    // ranks[k] = number of factors of order >= p^(k+1)
    let mut out = Vec::new();
    for k in 0..ranks.len() {
        let next = ranks.get(k + 1).copied().unwrap_or(0);
        for _ in 0..ranks[k] - next {
            out.push(p.pow(k as u32 + 1));
        }
    }
    out.sort();
    out
}

/// Explicit finite abelian group `Z/o_1 x ... x Z/o_r` with its addition
/// table.
pub struct AbelianGroup {
    size: usize,
    add: Vec<Vec<usize>>,
}

impl AbelianGroup {
    pub fn new(orders: &[u64]) -> Self {
        let size = orders.iter().product::<u64>() as usize;
        let digits = |mut a: usize| -> Vec<u64> {
            orders
                .iter()
                .map(|&o| {
                    let d = a as u64 % o;
                    a /= o as usize;
                    d
                })
                .collect()
        };
        let add = (0..size)
            .map(|a| {
                (0..size)
                    .map(|b| {
                        let (x, y) = (digits(a), digits(b));
                        (0..orders.len()).rev().fold(0usize, |idx, i| {
                            idx * orders[i] as usize + ((x[i] + y[i]) % orders[i]) as usize
                        })
                    })
                    .collect()
            })
            .collect();
        AbelianGroup { size, add }
    }

    fn scale(&self, a: usize, k: u64) -> usize {
        (0..k).fold(0, |acc, _| self.add[acc][a])
    }

    /// The subgroup generated by the subgroup `mask` and `x`: the union of
    /// the cosets `mask + kx`.
    fn span(&self, mask: u128, x: usize) -> u128 {
        let members: Vec<usize> = (0..self.size).filter(|&i| mask >> i & 1 == 1).collect();
        let mut out = mask;
        let mut y = x;
        while mask >> y & 1 == 0 {
            for &h in &members {
                out |= 1 << self.add[h][y];
            }
            y = self.add[y][x];
        }
        out
    }
}

/// Whether some homomorphism from `b` onto `a` exists, by search over the
/// images of the standard generators of `b`.
pub fn surjection_exists(a: &[u64], b: &[u64]) -> bool {
    let ga = AbelianGroup::new(a);
    assert!(ga.size <= 128, "group too large for the mask representation");
    let full: u128 = if ga.size == 128 { u128::MAX } else { (1u128 << ga.size) - 1 };
    // allowed images of each generator of b: elements killed by its order
    let allowed: Vec<Vec<usize>> =
        b.iter().map(|&o| (0..ga.size).filter(|&x| ga.scale(x, o) == 0).collect()).collect();
    let mut dead: std::collections::HashSet<(usize, u128)> = std::collections::HashSet::new();
    fn go(
        i: usize,
        mask: u128,
        ga: &AbelianGroup,
        allowed: &[Vec<usize>],
        full: u128,
        dead: &mut std::collections::HashSet<(usize, u128)>,
    ) -> bool {
        if mask == full {
            return true;
        }
        if i == allowed.len() || dead.contains(&(i, mask)) {
            return false;
        }
        for &x in &allowed[i] {
            if go(i + 1, ga.span(mask, x), ga, allowed, full, dead) {
                return true;
            }
        }
        dead.insert((i, mask));
        false
    }
    go(0, 1, &ga, &allowed, full, &mut dead)
}

/// Partitions of `k` as abelian p-group invariants of order `p^k`.
pub fn abelian_groups(p: u64, k: u32) -> Vec<Vec<u64>> {
    fn parts(k: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        for e in (1..=k.min(max)).rev() {
            cur.push(e);
            parts(k - e, e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    parts(k, k, &mut Vec::new(), &mut out);
    out.into_iter()
        .map(|v| {
            let mut g: Vec<u64> = v.into_iter().map(|e| p.pow(e)).collect();
            g.sort();
            g
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_from_order_counts() {
        // Z/2 x Z/4: orders 1,2,2,2,4,4,4,4
        assert_eq!(invariants_from_orders(&[1, 2, 2, 2, 4, 4, 4, 4]), vec![2, 4]);
        assert_eq!(invariants_from_orders(&[1]), Vec::<u64>::new());
    }

    #[test]
    fn cokernel_of_diagonal() {
        let m = vec![vec![2, 0], vec![0, 4]];
        assert_eq!(cokernel_invariants(&m), Some(vec![2, 4]));
        let m = vec![vec![2, 1], vec![0, 2]];
        assert_eq!(cokernel_invariants(&m), Some(vec![4]));
        assert_eq!(cokernel_invariants(&[vec![1, 1], vec![2, 2]]), None);
    }

    #[test]
    fn small_surjections() {
        assert!(surjection_exists(&[2, 4], &[4, 4]));
        assert!(!surjection_exists(&[2, 2, 8], &[4, 8]));
        assert!(surjection_exists(&[], &[2]));
        assert!(!surjection_exists(&[4], &[2, 2]));
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=6).map(|k| abelian_groups(2, k).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11]);
    }
}
