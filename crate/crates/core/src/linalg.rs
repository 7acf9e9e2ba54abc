//! Dense linear algebra over the prime field GF(p).
//!
//! Entries are stored one byte each, row-major. The matrices that show up in
//! the search (multiplicator actions, subspaces, consistency systems) have at
//! most a few hundred columns, so there is no sparse path.

use std::fmt;

/// Multiplicative inverse of `a` modulo the prime `p` (`a != 0`).
pub fn inv_mod(a: u8, p: u8) -> u8 {
    debug_assert!(a % p != 0);
    let (p32, mut base, mut e, mut acc) = (p as u32, a as u32 % p as u32, p as u32 - 2, 1u32);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p32;
        }
        base = base * base % p32;
        e >>= 1;
    }
    acc as u8
}

#[inline]
fn add_scaled(dst: &mut [u8], src: &[u8], c: u8, p: u8) {
    if c == 0 {
        return;
    }
    if p == 2 {
        for (d, s) in dst.iter_mut().zip(src) {
            *d ^= *s;
        }
    } else {
        let (c, p) = (c as u16, p as u16);
        for (d, s) in dst.iter_mut().zip(src) {
            *d = ((*d as u16 + c * *s as u16) % p) as u8;
        }
    }
}

/// A matrix over GF(p).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatGFp {
    p: u8,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

/// Result of row reduction.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: MatGFp,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl MatGFp {
    pub fn zeros(p: u8, rows: usize, cols: usize) -> Self {
        MatGFp { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u8, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows; entries are reduced modulo `p`.
    pub fn from_rows(p: u8, cols: usize, rows: &[Vec<u8>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend(r.iter().map(|&x| x % p));
        }
        MatGFp { p, rows: rows.len(), cols, data }
    }

    pub fn prime(&self) -> u8 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn push_row(&mut self, row: &[u8]) {
        assert_eq!(row.len(), self.cols);
        self.data.extend(row.iter().map(|&x| x % self.p));
        self.rows += 1;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &MatGFp) -> MatGFp {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = MatGFp::zeros(self.p, self.rows, other.cols);
        for r in 0..self.rows {
            let (lo, hi) = (r * other.cols, (r + 1) * other.cols);
            for k in 0..self.cols {
                let c = self.get(r, k);
                if c != 0 {
                    add_scaled(&mut out.data[lo..hi], other.row(k), c, self.p);
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![0u8; self.cols];
        for (k, &c) in v.iter().enumerate() {
            add_scaled(&mut out, self.row(k), c, self.p);
        }
        out
    }

    /// Reduced row-echelon form with zero rows removed.
    pub fn rref(&self) -> Rref {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if piv != r {
                for k in 0..m.cols {
                    m.data.swap(piv * m.cols + k, r * m.cols + k);
                }
            }
            let inv = inv_mod(m.get(r, c), p);
            if inv != 1 {
                for k in 0..m.cols {
                    let v = (m.get(r, k) as u16 * inv as u16 % p as u16) as u8;
                    m.set(r, k, v);
                }
            }
            let pivot_row = m.row(r).to_vec();
            for i in 0..m.rows {
                if i != r {
                    let f = m.get(i, c);
                    if f != 0 {
                        let cols = m.cols;
                        add_scaled(&mut m.data[i * cols..(i + 1) * cols], &pivot_row, p - f, p);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        m.data.truncate(r * m.cols);
        m.rows = r;
        Rref { rank: r, matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis (as rows) of the right kernel `{v : M v^T = 0}`.
    pub fn nullspace(&self) -> MatGFp {
        let Rref { matrix, pivots, .. } = self.rref();
        let p = self.p;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = MatGFp::zeros(p, 0, self.cols);
        for &f in &free {
            let mut v = vec![0u8; self.cols];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                let a = matrix.get(r, f);
                v[pc] = (p - a) % p;
            }
            basis.push_row(&v);
        }
        basis
    }

    /// Canonical form of the row space: the RREF with zero rows dropped.
    pub fn row_space(&self) -> MatGFp {
        self.rref().matrix
    }

    /// Whether `v` lies in the row space of this matrix (assumed in RREF).
    pub fn rref_contains(&self, v: &[u8]) -> bool {
        self.reduce_by_rref(v).iter().all(|&x| x == 0)
    }

    /// Reduces `v` modulo the row space of `self`, which must be in RREF.
    pub fn reduce_by_rref(&self, v: &[u8]) -> Vec<u8> {
        let mut w = v.to_vec();
        for r in 0..self.rows {
            let row = self.row(r);
            let Some(pc) = row.iter().position(|&x| x != 0) else { continue };
            let f = w[pc];
            if f != 0 {
                add_scaled(&mut w, row, self.p - f, self.p);
            }
        }
        w
    }

    /// Inverse of a square invertible matrix.
    pub fn inverse(&self) -> Option<MatGFp> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = MatGFp::zeros(self.p, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let red = aug.rref();
        if red.rank < n || red.pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = MatGFp::zeros(self.p, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.matrix.get(r, n + c));
            }
        }
        Some(inv)
    }
}

impl fmt::Debug for MatGFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatGFp(p={}, {}x{})[", self.p, self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

/// Number of subspaces of dimension `k` in GF(p)^n.
pub fn gaussian_binomial(n: usize, k: usize, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= (p as u128).pow((n - i) as u32) - 1;
        den *= (p as u128).pow((i + 1) as u32) - 1;
    }
    (num / den) as u64
}

/// All subspaces of codimension `codim` in GF(p)^n, each as a matrix in RREF.
///
/// Output is ordered by pivot set (lexicographic) and then by the free
/// entries read as a base-p counter, so it is deterministic.
pub fn enumerate_subspaces(p: u8, n: usize, codim: usize) -> Vec<MatGFp> {
    assert!(codim <= n);
    let dim = n - codim;
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..dim).collect();
    loop {
        // free positions: (row, col) with col > pivot[row], col not a pivot
        let free: Vec<(usize, usize)> = (0..dim)
            .flat_map(|r| {
                let pv = &pivots;
                ((pv[r] + 1)..n).filter(move |c| !pv.contains(c)).map(move |c| (r, c))
            })
            .collect();
        let mut counter = vec![0u8; free.len()];
        loop {
            let mut m = MatGFp::zeros(p, dim, n);
            for (r, &pc) in pivots.iter().enumerate() {
                m.set(r, pc, 1);
            }
            for (&(r, c), &v) in free.iter().zip(&counter) {
                m.set(r, c, v);
            }
            out.push(m);
            // increment base-p counter
            let mut i = 0;
            while i < counter.len() {
                counter[i] += 1;
                if counter[i] < p {
                    break;
                }
                counter[i] = 0;
                i += 1;
            }
            if i == counter.len() {
                break;
            }
        }
        if !next_combination(&mut pivots, n) {
            break;
        }
    }
    out
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn span_brute(m: &MatGFp) -> std::collections::BTreeSet<Vec<u8>> {
        let mut set = std::collections::BTreeSet::new();
        for mask in 0u32..(1 << m.rows()) {
            let mut v = vec![0u8; m.cols()];
            for r in 0..m.rows() {
                if mask >> r & 1 == 1 {
                    add_scaled(&mut v, m.row(r), 1, 2);
                }
            }
            set.insert(v);
        }
        set
    }

    fn lcg(seed: &mut u64) -> u64 {
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        *seed >> 33
    }

    #[test]
    fn rref_identity_and_zero() {
        let id = MatGFp::identity(2, 2);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.rank, 2);
        let z = MatGFp::zeros(2, 3, 3);
        let r = z.rref();
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn rref_preserves_row_space_random() {
        let mut seed = 7;
        for _ in 0..50 {
            let rows: Vec<Vec<u8>> =
                (0..6).map(|_| (0..6).map(|_| (lcg(&mut seed) & 1) as u8).collect()).collect();
            let m = MatGFp::from_rows(2, 6, &rows);
            let r = m.rref();
            assert_eq!(span_brute(&m), span_brute(&r.matrix));
            assert_eq!(r.matrix.rref().matrix, r.matrix, "idempotent");
        }
    }

    #[test]
    fn nullspace_cases() {
        assert_eq!(MatGFp::identity(2, 4).nullspace().rows(), 0);
        assert_eq!(MatGFp::zeros(2, 2, 3).nullspace().rows(), 3);
        let mut seed = 99;
        for p in [2u8, 3, 5] {
            for _ in 0..30 {
                let (r, c) = (1 + (lcg(&mut seed) % 5) as usize, 1 + (lcg(&mut seed) % 6) as usize);
                let rows: Vec<Vec<u8>> = (0..r)
                    .map(|_| (0..c).map(|_| (lcg(&mut seed) % p as u64) as u8).collect())
                    .collect();
                let m = MatGFp::from_rows(p, c, &rows);
                let ns = m.nullspace();
                assert_eq!(m.rank() + ns.rows(), c);
                for v in ns.row_vecs() {
                    let prod = m.mul(&MatGFp::from_rows(p, 1, &v.iter().map(|&x| vec![x]).collect::<Vec<_>>()));
                    assert!(prod.is_zero());
                }
            }
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let m = MatGFp::from_rows(3, 2, &[vec![1, 2], vec![0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), MatGFp::identity(3, 2));
        assert!(MatGFp::from_rows(2, 2, &[vec![1, 1], vec![1, 1]]).inverse().is_none());
    }

    #[test]
    fn subspace_counts_small() {
        assert_eq!(enumerate_subspaces(2, 2, 1).len(), 3);
        assert_eq!(enumerate_subspaces(2, 3, 1).len(), 7);
        assert_eq!(enumerate_subspaces(2, 4, 2).len(), 35);
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        for n in 0..=7 {
            for k in 0..=n {
                let subs = enumerate_subspaces(2, n, k);
                assert_eq!(subs.len() as u64, gaussian_binomial(n, n - k, 2), "n={n} k={k}");
                let set: std::collections::HashSet<_> = subs.iter().collect();
                assert_eq!(set.len(), subs.len());
                for s in &subs {
                    assert_eq!(&s.rref().matrix, s);
                }
            }
        }
        assert_eq!(enumerate_subspaces(3, 3, 1).len() as u64, gaussian_binomial(3, 2, 3));
    }
}
