//! Automorphisms of a pc group with definitions, and groups of them.
//!
//! An automorphism is fixed by the images of the `d` weight-one generators;
//! the images of the remaining generators follow from the definitions.
//! [`AutGroup`] stores a generated group as its image in `GL(d, p)` (by
//! explicit enumeration) together with a sifting table for the part acting
//! trivially on the Frattini quotient.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{inv_mod, MatGFp};
use crate::pcp::{Definition, Element, PcPresentation};
use crate::structure::{eval, frattini_subgroup, subgroup_closure, Subgroup};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Automorphism {
    images: Vec<Element>,
    full: Vec<Element>,
}

impl std::fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.images.iter()).finish()
    }
}

fn extend(g: &PcPresentation, images: &[Element]) -> Vec<Element> {
    let p = g.prime() as u64;
    let mut full = images.to_vec();
    for k in images.len()..g.len() {
        let img = match g.definitions()[k].expect("presentation with definitions") {
            Definition::Power(i) => g.power_of(&full[i], p),
            Definition::Commutator(j, i) => g.commutator(&full[j], &full[i]),
        };
        full.push(img);
    }
    full
}

impl Automorphism {
    pub fn identity(g: &PcPresentation) -> Self {
        let full = g.generators();
        Automorphism { images: full[..g.minimal_generators()].to_vec(), full }
    }

    /// Validates that the images define a bijective endomorphism.
    pub fn from_images(g: &PcPresentation, images: Vec<Element>) -> Result<Self> {
        if !g.has_definitions() {
            return Err(Error::MissingDefinition(g.minimal_generators() + 1));
        }
        let d = g.minimal_generators();
        if images.len() != d || images.iter().any(|e| e.len() != g.len()) {
            return Err(Error::NotHomomorphism(format!("expected {d} images of length {}", g.len())));
        }
        let a = Self::from_images_unchecked(g, images);
        if crate::structure::Homomorphism::new(g.clone(), g.clone(), a.full.clone()).is_err() {
            return Err(Error::NotHomomorphism("relations not preserved".into()));
        }
        if a.matrix(g).inverse().is_none() {
            return Err(Error::NotHomomorphism("not surjective".into()));
        }
        Ok(a)
    }

    pub(crate) fn from_images_unchecked(g: &PcPresentation, images: Vec<Element>) -> Self {
        let full = extend(g, &images);
        Automorphism { images, full }
    }

    /// Images of the weight-one generators.
    pub fn images(&self) -> &[Element] {
        &self.images
    }

    /// Images of all generators.
    pub fn full_images(&self) -> &[Element] {
        &self.full
    }

    pub fn apply(&self, g: &PcPresentation, a: &Element) -> Element {
        eval(g, &self.full, a)
    }

    pub fn apply_subgroup(&self, g: &PcPresentation, s: &Subgroup) -> Subgroup {
        let gens: Vec<Element> = s.gens().iter().map(|x| self.apply(g, x)).collect();
        subgroup_closure(g, &gens)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, g: &PcPresentation, other: &Automorphism) -> Automorphism {
        let images: Vec<Element> = other.images.iter().map(|e| self.apply(g, e)).collect();
        Self::from_images_unchecked(g, images)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, e)| e.leading() == Some(i) && e.exponents()[i] == 1 && e.exponents()[i + 1..].iter().all(|&x| x == 0))
    }

    pub fn power(&self, g: &PcPresentation, mut k: u64) -> Automorphism {
        let mut acc = Automorphism::identity(g);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(g, &base);
            }
            k >>= 1;
            if k > 0 {
                base = base.compose(g, &base);
            }
        }
        acc
    }

    /// Action on the Frattini quotient: row `i` holds the image of `x_i`.
    /// With this convention the matrix of `a ∘ b` is `M_b M_a`.
    pub fn matrix(&self, g: &PcPresentation) -> MatGFp {
        let d = self.images.len();
        let rows: Vec<Vec<u8>> = self.images.iter().map(|e| e.exponents()[..d].to_vec()).collect();
        MatGFp::from_rows(g.prime(), d, &rows)
    }

    pub fn order(&self, g: &PcPresentation) -> u64 {
        let m = self.matrix(g);
        let id = MatGFp::identity(g.prime(), m.rows());
        let mut o1 = 1u64;
        let mut x = m.clone();
        while x != id {
            x = x.mul(&m);
            o1 += 1;
        }
        let mut b = self.power(g, o1);
        let mut o = o1;
        while !b.is_identity() {
            b = b.power(g, g.prime() as u64);
            o *= g.prime() as u64;
        }
        o
    }

    pub fn inverse(&self, g: &PcPresentation) -> Automorphism {
        let o = self.order(g);
        self.power(g, o - 1)
    }
}

/// `log_p` order plus the size of the `GL(d,p)` image.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AutOrder {
    pub top: u64,
    pub kernel_log: u32,
}

impl AutOrder {
    pub fn value(&self, p: u8) -> u128 {
        self.top as u128 * (p as u128).pow(self.kernel_log)
    }
}

/// A group of automorphisms with membership testing and order.
#[derive(Clone, Debug)]
pub struct AutGroup {
    group: PcPresentation,
    gens: Vec<Automorphism>,
    inverses: Vec<Automorphism>,
    /// Frattini-quotient image: matrix, transversal element, and its inverse.
    top: Vec<(MatGFp, Automorphism, Automorphism)>,
    top_index: HashMap<MatGFp, usize>,
    /// Entry `l` has leading kernel coordinate `l`, with coefficient 1.
    table: Vec<Option<Automorphism>>,
    /// `(layer start, layer end)` generator ranges by weight, from weight 2.
    layers: Vec<(usize, usize)>,
}

impl AutGroup {
    /// The trivial group of automorphisms of `g`.
    pub fn new(g: &PcPresentation) -> Self {
        let d = g.minimal_generators();
        let mut layers = Vec::new();
        let w = g.weights();
        let mut k = d;
        while k < g.len() {
            let start = k;
            while k < g.len() && w[k] == w[start] {
                k += 1;
            }
            layers.push((start, k));
        }
        let id = Automorphism::identity(g);
        let m = id.matrix(g);
        let mut top_index = HashMap::new();
        top_index.insert(m.clone(), 0);
        AutGroup {
            group: g.clone(),
            gens: Vec::new(),
            inverses: Vec::new(),
            top: vec![(m, id.clone(), id)],
            top_index,
            table: vec![None; d * (g.len() - d)],
            layers,
        }
    }

    pub fn from_generators(g: &PcPresentation, gens: &[Automorphism]) -> Self {
        let mut a = Self::new(g);
        for x in gens {
            a.add(x);
        }
        a
    }

    pub fn group(&self) -> &PcPresentation {
        &self.group
    }

    /// The generators that were needed; redundant ones are dropped on `add`.
    pub fn generators(&self) -> &[Automorphism] {
        &self.gens
    }

    pub fn order(&self) -> AutOrder {
        AutOrder { top: self.top.len() as u64, kernel_log: self.table.iter().flatten().count() as u32 }
    }

    /// Images in `GL(d,p)`, in discovery order.
    pub fn matrices(&self) -> Vec<MatGFp> {
        self.top.iter().map(|t| t.0.clone()).collect()
    }

    /// Leading kernel coordinate and its value, for an automorphism acting
    /// trivially on the Frattini quotient.
    fn lead(&self, a: &Automorphism) -> Option<(usize, u8)> {
        let g = &self.group;
        let d = a.images.len();
        let mut offset = 0;
        let z: Vec<Element> =
            (0..d).map(|i| g.multiply(&g.inverse(&g.generator(i)), &a.images[i])).collect();
        for &(s, e) in &self.layers {
            let width = e - s;
            for (i, zi) in z.iter().enumerate() {
                for k in s..e {
                    let c = zi.exponents()[k];
                    if c != 0 {
                        return Some((offset + i * width + (k - s), c));
                    }
                }
            }
            offset += d * width;
        }
        None
    }

    fn sift_kernel(&self, a: &Automorphism) -> (Automorphism, Option<(usize, u8)>) {
        let g = &self.group;
        let p = g.prime() as u64;
        let mut x = a.clone();
        loop {
            let Some((l, c)) = self.lead(&x) else { return (x, None) };
            match &self.table[l] {
                Some(t) => x = x.compose(g, &t.power(g, p - c as u64)),
                None => return (x, Some((l, c))),
            }
        }
    }

    /// Moves `a` into the kernel by the transversal; `None` if its matrix is
    /// not in the image.
    fn to_kernel(&self, a: &Automorphism) -> Option<Automorphism> {
        let k = *self.top_index.get(&a.matrix(&self.group))?;
        Some(self.top[k].2.compose(&self.group, a))
    }

    pub fn contains(&self, a: &Automorphism) -> bool {
        match self.to_kernel(a) {
            Some(k) => self.sift_kernel(&k).1.is_none(),
            None => false,
        }
    }

    /// Adds a generator; returns whether the group grew.
    pub fn add(&mut self, a: &Automorphism) -> bool {
        if self.contains(a) {
            return false;
        }
        let g = self.group.clone();
        self.gens.push(a.clone());
        self.inverses.push(a.inverse(&g));
        if self.top_index.contains_key(&a.matrix(&g)) {
            let k = self.to_kernel(a).unwrap();
            let inv = self.inverses.last().unwrap().clone();
            let mut queue = vec![k];
            for t in self.table.iter().flatten() {
                queue.push(inv.compose(&g, &t.compose(&g, a)));
            }
            self.close_kernel(queue);
        } else {
            self.rebuild();
        }
        true
    }

    fn rebuild(&mut self) {
        let g = self.group.clone();
        let id = Automorphism::identity(&g);
        let m = id.matrix(&g);
        self.top = vec![(m.clone(), id.clone(), id)];
        self.top_index = HashMap::from([(m, 0)]);
        self.table.iter_mut().for_each(|t| *t = None);
        let mut schreier = Vec::new();
        let mut i = 0;
        while i < self.top.len() {
            for (gi, x) in self.gens.iter().enumerate() {
                let (mt, ut, vt) = self.top[i].clone();
                let next = mt.mul(&x.matrix(&g));
                match self.top_index.get(&next) {
                    Some(&j) => {
                        // u_j^-1 x u_t
                        let s = self.top[j].2.compose(&g, &x.compose(&g, &ut));
                        if !s.is_identity() {
                            schreier.push(s);
                        }
                    }
                    None => {
                        let u = x.compose(&g, &ut);
                        let v = vt.compose(&g, &self.inverses[gi]);
                        self.top_index.insert(next.clone(), self.top.len());
                        self.top.push((next, u, v));
                    }
                }
            }
            i += 1;
        }
        self.close_kernel(schreier);
    }

    fn close_kernel(&mut self, mut queue: Vec<Automorphism>) {
        let g = self.group.clone();
        let p = g.prime();
        while let Some(x) = queue.pop() {
            let (r, lead) = self.sift_kernel(&x);
            let Some((l, c)) = lead else { continue };
            let r = r.power(&g, inv_mod(c, p) as u64);
            queue.push(r.power(&g, p as u64));
            let rinv = r.power(&g, p as u64 - 1);
            for t in self.table.iter().flatten() {
                // [r, t] = r^-1 t^-1 r t
                let tinv = t.power(&g, p as u64 - 1);
                queue.push(rinv.compose(&g, &tinv.compose(&g, &r.compose(&g, t))));
            }
            for (gi, y) in self.gens.iter().enumerate() {
                queue.push(self.inverses[gi].compose(&g, &r.compose(&g, y)));
            }
            self.table[l] = Some(r);
        }
    }

    /// Every element, for small groups in tests.
    pub fn elements(&self) -> Vec<Automorphism> {
        let g = &self.group;
        let mut kernel = vec![Automorphism::identity(g)];
        for t in self.table.iter().flatten().rev() {
            let mut next = Vec::new();
            let mut pw = Automorphism::identity(g);
            for _ in 0..g.prime() {
                for k in &kernel {
                    next.push(pw.compose(g, k));
                }
                pw = pw.compose(g, t);
            }
            kernel = next;
        }
        let mut out = Vec::new();
        for (_, u, _) in &self.top {
            for k in &kernel {
                out.push(u.compose(g, k));
            }
        }
        out
    }
}

/// Generators of `GL(d,p)` acting on an elementary abelian group of rank `d`.
pub fn general_linear_generators(g: &PcPresentation) -> Result<Vec<Automorphism>> {
    let d = g.len();
    let p = g.prime();
    let phi = frattini_subgroup(g, &Subgroup::whole(g));
    if !phi.is_trivial() || g.minimal_generators() != d {
        return Err(Error::NotElementaryAbelian);
    }
    let mut out = Vec::new();
    if d == 0 {
        return Ok(out);
    }
    // a primitive root scaling the first coordinate
    let prim = (1..p).find(|&a| (1..p - 1).all(|k| pow_mod(a, k, p) != 1)).unwrap_or(1);
    if prim != 1 {
        let mut images = g.generators();
        images[0] = g.power_of(&g.generator(0), prim as u64);
        out.push(Automorphism::from_images_unchecked(g, images));
    }
    if d >= 2 {
        // transvection x1 -> x1 x2
        let mut images = g.generators();
        images[0] = g.multiply(&g.generator(0), &g.generator(1));
        out.push(Automorphism::from_images_unchecked(g, images));
        // cycle x_i -> x_{i+1}
        let images: Vec<Element> = (0..d).map(|i| g.generator((i + 1) % d)).collect();
        out.push(Automorphism::from_images_unchecked(g, images));
    }
    Ok(out)
}

fn pow_mod(a: u8, k: u8, p: u8) -> u8 {
    let mut r = 1u32;
    for _ in 0..k {
        r = r * a as u32 % p as u32;
    }
    r as u8
}
