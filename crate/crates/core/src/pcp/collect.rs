//! Collection from the left, plus the derived element arithmetic.
//!
//! The collector optionally carries *tails*: central elementary abelian
//! unknowns attached to relations. Every application of a power or
//! conjugate relation adds that relation's tail vector to an accumulator,
//! which is how the covering group is built without materializing the tails
//! as generators.

use super::{Element, PcPresentation, Word};

/// Collection aborts once this many generator moves happen for one call,
/// which only a malformed presentation could reach.
const STEP_LIMIT: u64 = 1 << 40;

/// Tail vectors (over GF(p)) attached to every relation.
#[derive(Clone, Debug)]
pub(crate) struct Tails {
    pub dim: usize,
    pub power: Vec<Vec<u8>>,
    pub comm: Vec<Vec<Vec<u8>>>,
}

pub(crate) struct Collector<'a> {
    pc: &'a PcPresentation,
    tails: Option<&'a Tails>,
    steps: u64,
}

impl<'a> Collector<'a> {
    pub(crate) fn new(pc: &'a PcPresentation, tails: Option<&'a Tails>) -> Self {
        Collector { pc, tails, steps: 0 }
    }

    #[inline]
    fn add_tail(&self, acc: &mut [u8], t: &[u8]) {
        let p = self.pc.p;
        for (a, &b) in acc.iter_mut().zip(t) {
            *a = (*a + b) % p;
        }
    }

    /// `e := e * x_k`.
    pub(crate) fn mul_gen(&mut self, e: &mut [u8], k: usize, acc: &mut [u8]) {
        self.steps += 1;
        assert!(self.steps < STEP_LIMIT, "collection exceeded step bound");
        let pc = self.pc;
        let p = pc.p;
        if e[k + 1..].iter().all(|&x| x == 0) {
            e[k] += 1;
            if e[k] == p {
                e[k] = 0;
                e[k + 1..].copy_from_slice(&pc.power[k].0[k + 1..]);
                if let Some(t) = self.tails {
                    self.add_tail(acc, &t.power[k]);
                }
            }
            return;
        }
        // e = prefix * suffix; prefix * suffix * x_k = prefix * x_k * suffix^{x_k}
        let suffix: Vec<u8> = e[k + 1..].to_vec();
        e[k + 1..].iter_mut().for_each(|x| *x = 0);
        let mut c = vec![0u8; pc.n];
        for (off, &s) in suffix.iter().enumerate() {
            let j = k + 1 + off;
            for _ in 0..s {
                self.mul_exps(&mut c, &pc.conj[j][k].0, acc);
                if let Some(t) = self.tails {
                    self.add_tail(acc, &t.comm[j][k]);
                }
            }
        }
        e[k] += 1;
        if e[k] == p {
            e[k] = 0;
            let mut w = pc.power[k].0.clone();
            if let Some(t) = self.tails {
                self.add_tail(acc, &t.power[k]);
            }
            self.mul_exps(&mut w, &c, acc);
            c = w;
        }
        e[k + 1..].copy_from_slice(&c[k + 1..]);
    }

    /// `e := e * b` for a normal-form exponent vector `b`.
    pub(crate) fn mul_exps(&mut self, e: &mut [u8], b: &[u8], acc: &mut [u8]) {
        for (j, &bj) in b.iter().enumerate() {
            for _ in 0..bj {
                self.mul_gen(e, j, acc);
            }
        }
    }
}

impl PcPresentation {
    /// Collects an arbitrary word to normal form.
    pub fn collect(&self, w: &Word) -> Element {
        let mut e = self.identity();
        for &(g, x) in w {
            assert!(g < self.n, "generator index out of range");
            let xg = if x >= 0 {
                self.power_of(&self.generator(g), x as u64)
            } else {
                let inv = self.inverse(&self.generator(g));
                self.power_of(&inv, x.unsigned_abs())
            };
            e = self.multiply(&e, &xg);
        }
        e
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        let mut e = a.0.clone();
        Collector::new(self, None).mul_exps(&mut e, &b.0, &mut []);
        Element(e)
    }

    /// Multiplies `a` by `x_k`.
    pub fn mul_generator(&self, a: &Element, k: usize) -> Element {
        let mut e = a.0.clone();
        Collector::new(self, None).mul_gen(&mut e, k, &mut []);
        Element(e)
    }

    pub fn inverse(&self, a: &Element) -> Element {
        let p = self.p;
        let mut r = a.0.clone();
        let mut b = vec![0u8; self.n];
        let mut col = Collector::new(self, None);
        for k in 0..self.n {
            if r[k] != 0 {
                let m = p - r[k];
                for _ in 0..m {
                    col.mul_gen(&mut r, k, &mut []);
                }
                debug_assert_eq!(r[k], 0);
                b[k] = m;
            }
        }
        Element(b)
    }

    pub fn power_of(&self, a: &Element, mut k: u64) -> Element {
        let mut acc = self.identity();
        let mut base = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.multiply(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.multiply(&base, &base);
            }
        }
        acc
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(&self, a: &Element, b: &Element) -> Element {
        let ab = self.multiply(a, b);
        let ba = self.multiply(b, a);
        // [a,b] = (ba)^-1 (ab)
        self.multiply(&self.inverse(&ba), &ab)
    }

    /// `b^-1 a b`.
    pub fn conjugate(&self, a: &Element, b: &Element) -> Element {
        let ab = self.multiply(a, b);
        self.multiply(&self.inverse(b), &ab)
    }

    pub fn element_order(&self, a: &Element) -> u128 {
        let mut x = a.clone();
        let mut ord = 1u128;
        while !x.is_identity() {
            x = self.power_of(&x, self.p as u64);
            ord *= self.p as u128;
        }
        ord
    }

    /// Overlap checks; `true` iff the presentation defines a group of order
    /// exactly `p^n`.
    pub fn is_consistent(&self) -> bool {
        let mut ok = true;
        self.overlaps(None, &mut |l, r, _, _| {
            if l != r {
                ok = false;
            }
        });
        ok
    }

    /// Runs every overlap test, handing both collected sides (and their tail
    /// accumulators when tails are present) to `f`.
    pub(crate) fn overlaps(&self, tails: Option<&Tails>, f: &mut dyn FnMut(&[u8], &[u8], &[u8], &[u8])) {
        let n = self.n;
        let p = self.p;
        let dim = tails.map_or(0, |t| t.dim);
        let mut col = Collector::new(self, tails);
        let unit = |k: usize| {
            let mut v = vec![0u8; n];
            v[k] = 1;
            v
        };
        let pow = |k: usize, e: u8| {
            let mut v = vec![0u8; n];
            v[k] = e;
            v
        };
        // (x_k x_j) x_i = x_k (x_j x_i), k > j > i
        for k in 0..n {
            for j in 0..k {
                for i in 0..j {
                    let (mut al, mut ar) = (vec![0u8; dim], vec![0u8; dim]);
                    let mut l = unit(k);
                    col.mul_gen(&mut l, j, &mut al);
                    col.mul_gen(&mut l, i, &mut al);
                    let mut u = unit(j);
                    col.mul_gen(&mut u, i, &mut ar);
                    let mut r = unit(k);
                    col.mul_exps(&mut r, &u, &mut ar);
                    f(&l, &r, &al, &ar);
                }
            }
        }
        for j in 0..n {
            for i in 0..j {
                // (x_j^(p-1) x_j) x_i = x_j^(p-1) (x_j x_i)
                let (mut al, mut ar) = (vec![0u8; dim], vec![0u8; dim]);
                let mut l = pow(j, p - 1);
                col.mul_gen(&mut l, j, &mut al);
                col.mul_gen(&mut l, i, &mut al);
                let mut u = unit(j);
                col.mul_gen(&mut u, i, &mut ar);
                let mut r = pow(j, p - 1);
                col.mul_exps(&mut r, &u, &mut ar);
                f(&l, &r, &al, &ar);

                // x_j (x_i^(p-1) x_i) = (x_j x_i) x_i^(p-1)
                let (mut al, mut ar) = (vec![0u8; dim], vec![0u8; dim]);
                let mut u = pow(i, p - 1);
                col.mul_gen(&mut u, i, &mut al);
                let mut l = unit(j);
                col.mul_exps(&mut l, &u, &mut al);
                let mut r = unit(j);
                for _ in 0..p {
                    col.mul_gen(&mut r, i, &mut ar);
                }
                f(&l, &r, &al, &ar);
            }
        }
        // (x_i^(p-1) x_i) x_i = x_i (x_i^(p-1) x_i)
        for i in 0..n {
            let (mut al, mut ar) = (vec![0u8; dim], vec![0u8; dim]);
            let mut l = pow(i, p - 1);
            col.mul_gen(&mut l, i, &mut al);
            col.mul_gen(&mut l, i, &mut al);
            let mut u = pow(i, p - 1);
            col.mul_gen(&mut u, i, &mut ar);
            let mut r = unit(i);
            col.mul_exps(&mut r, &u, &mut ar);
            f(&l, &r, &al, &ar);
        }
    }

    /// All `p^n` elements in lexicographic order of exponent vectors.
    pub fn elements(&self) -> Vec<Element> {
        let p = self.p;
        let total = self.group_order();
        assert!(total <= 1 << 24, "refusing to enumerate more than 2^24 elements");
        let mut out = Vec::with_capacity(total as usize);
        let mut v = vec![0u8; self.n];
        loop {
            out.push(Element(v.clone()));
            let mut i = self.n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                v[i] += 1;
                if v[i] < p {
                    break;
                }
                v[i] = 0;
            }
        }
    }
}
