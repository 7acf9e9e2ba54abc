//! Immediate descendants up to isomorphism.
//!
//! Allowable subgroups of the multiplicator are handled through their
//! annihilators in the dual space: a subgroup `U` of codimension `s` with
//! `U + N = M` corresponds to an `s`-dimensional subspace `W` of `M*` with
//! `W ∩ N⊥ = 0`. Orbits are computed on those small matrices; the orbit
//! representative is the least annihilator in packed row order.

use std::collections::HashMap;

use crate::autgroup::{general_linear_generators, AutGroup, Automorphism};
use crate::error::{Error, Result};
use crate::linalg::{enumerate_subspaces, gaussian_binomial, MatGFp};
use crate::pcover::{p_covering_group, CoverData};
use crate::pcp::{Definition, Element, PcPresentation, Relation};
use crate::structure::eval;

/// Largest number of allowable subgroups enumerated for one step size.
pub const MAX_ALLOWABLE: u64 = 1 << 24;

/// A generating set for a group of automorphisms, with its order.
#[derive(Clone, Debug)]
pub struct AutSet {
    pub gens: Vec<Automorphism>,
    pub order: u128,
}

impl AutSet {
    /// Rebuilds the group structure; used to cross-check `order`.
    pub fn to_group(&self, g: &PcPresentation) -> AutGroup {
        AutGroup::from_generators(g, &self.gens)
    }
}

#[derive(Clone, Debug)]
pub struct Descendant {
    pub presentation: PcPresentation,
    /// Allowable subgroup in multiplicator coordinates, in RREF.
    pub subspace: MatGFp,
    pub step: usize,
    /// Position among the descendants of the same step size.
    pub orbit: usize,
    pub orbit_size: usize,
    /// Present when the descendant was kept by the caller's filter.
    pub auts: Option<AutSet>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Limits {
    pub max_order_log: Option<usize>,
    pub max_class: Option<u32>,
}

#[derive(Clone, Debug, Default)]
pub struct DescendOutcome {
    pub multiplicator_rank: usize,
    pub nucleus_rank: usize,
    pub descendants: Vec<Descendant>,
    /// Number of orbit representatives seen, including ones filtered out.
    pub total: usize,
    /// Some step size was skipped because of the limits.
    pub capped: bool,
}

fn gl_order(d: usize, p: u8) -> u128 {
    let q = p as u128;
    (0..d).map(|i| q.pow(d as u32) - q.pow(i as u32)).product()
}

pub fn root_automorphisms(g: &PcPresentation) -> Result<AutSet> {
    let gens = general_linear_generators(g)?;
    Ok(AutSet { gens, order: gl_order(g.len(), g.prime()) })
}

/// Images in the cover of all generators of `G` under the standard lift.
fn lift_images(cover: &CoverData, aut: &Automorphism) -> Vec<Element> {
    let g = cover.group();
    let c = cover.cover();
    let p = g.prime() as u64;
    let mut imgs: Vec<Element> = aut.images().iter().map(|e| e.padded(c.len())).collect();
    for k in imgs.len()..g.len() {
        let img = match g.definitions()[k].expect("definitions") {
            Definition::Power(i) => c.power_of(&imgs[i], p),
            Definition::Commutator(j, i) => c.commutator(&imgs[j], &imgs[i]),
        };
        imgs.push(img);
    }
    imgs
}

/// Action of `aut` on the multiplicator: row `k` is the image of the `k`-th
/// basis vector. Subspaces transform as `U -> U A`, and the matrix of
/// `a ∘ b` is `A_b A_a`.
pub fn extend_to_multiplicator(aut: &Automorphism, cover: &CoverData) -> MatGFp {
    let g = cover.group();
    let c = cover.cover();
    let p = g.prime();
    let imgs = lift_images(cover, aut);
    let rank = cover.multiplicator_rank();
    let mut rows = Vec::with_capacity(rank);
    for &r in cover.attached_relations() {
        let lhs = match r {
            Relation::Power(i) => c.power_of(&imgs[i], p as u64),
            Relation::Commutator(j, i) => c.commutator(&imgs[j], &imgs[i]),
        };
        let rhs = eval(c, &imgs, &g.relation_rhs(r).padded(g.len()));
        let t = c.multiply(&c.inverse(&rhs), &lhs);
        debug_assert!(t.exponents()[..g.len()].iter().all(|&x| x == 0));
        rows.push(cover.multiplicator_coords(&t));
    }
    MatGFp::from_rows(p, rank, &rows)
}

/// Packs subspace bases into sortable words.
#[derive(Clone, Copy)]
struct Packer {
    p: u8,
    bits: u32,
    per_word: usize,
    words_per_row: usize,
    cols: usize,
}

impl Packer {
    fn new(p: u8, cols: usize) -> Self {
        let bits = 8 - (p - 1).leading_zeros();
        let per_word = (64 / bits) as usize;
        let words_per_row = cols.div_ceil(per_word).max(1);
        Packer { p, bits, per_word, words_per_row, cols }
    }

    fn pack(&self, m: &MatGFp, out: &mut Vec<u64>) {
        for r in 0..m.rows() {
            for w in 0..self.words_per_row {
                let mut word = 0u64;
                for k in 0..self.per_word {
                    let c = w * self.per_word + k;
                    let v = if c < self.cols { m.get(r, c) as u64 } else { 0 };
                    word = (word << self.bits) | v;
                }
                out.push(word);
            }
        }
    }

    fn unpack(&self, key: &[u64]) -> MatGFp {
        let rows = key.len() / self.words_per_row;
        let mut m = MatGFp::zeros(self.p, rows, self.cols);
        let mask = (1u64 << self.bits) - 1;
        for r in 0..rows {
            for w in 0..self.words_per_row {
                let word = key[r * self.words_per_row + w];
                for k in 0..self.per_word {
                    let c = w * self.per_word + k;
                    if c < self.cols {
                        let shift = self.bits as usize * (self.per_word - 1 - k);
                        m.set(r, c, ((word >> shift) & mask) as u8);
                    }
                }
            }
        }
        m
    }
}

/// Sorted, deduplicated keys of fixed stride.
struct KeySet {
    stride: usize,
    data: Vec<u64>,
}

impl KeySet {
    fn len(&self) -> usize {
        self.data.len() / self.stride
    }

    fn get(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    fn find(&self, key: &[u64]) -> Option<usize> {
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(key) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }
}

/// The allowable annihilators of dimension `s`.
fn annihilators(cover: &CoverData, s: usize, packer: &Packer) -> KeySet {
    let p = cover.group().prime();
    let m = cover.multiplicator_rank();
    let nu = cover.nucleus_rank();
    let kperp = cover.nucleus().nullspace().row_space();
    let kpivots: Vec<usize> = (0..kperp.rows()).map(|r| kperp.row(r).iter().position(|&x| x != 0).unwrap()).collect();
    let comp: Vec<usize> = (0..m).filter(|c| !kpivots.contains(c)).collect();
    let q = m - nu;
    let mut keys: Vec<Vec<u64>> = Vec::new();
    for sbar in enumerate_subspaces(p, nu, nu - s) {
        let mut x = vec![0u8; s * q];
        loop {
            let mut w = MatGFp::zeros(p, s, m);
            for r in 0..s {
                for (a, &c) in comp.iter().enumerate() {
                    w.set(r, c, sbar.get(r, a));
                }
                let row: Vec<u8> = x[r * q..(r + 1) * q].to_vec();
                let add = if q > 0 { kperp.vec_mul(&row) } else { vec![0; m] };
                for (c, &v) in add.iter().enumerate() {
                    w.set(r, c, (w.get(r, c) + v) % p);
                }
            }
            let mut key = Vec::new();
            packer.pack(&w.row_space(), &mut key);
            keys.push(key);
            let mut i = 0;
            while i < x.len() {
                x[i] += 1;
                if x[i] < p {
                    break;
                }
                x[i] = 0;
                i += 1;
            }
            if i == x.len() {
                break;
            }
        }
    }
    keys.sort_unstable();
    keys.dedup();
    let stride = s * packer.words_per_row;
    KeySet { stride, data: keys.concat() }
}

/// Every allowable subgroup, all step sizes, as RREF bases.
pub fn allowable_subgroups(cover: &CoverData) -> Vec<MatGFp> {
    let packer = Packer::new(cover.group().prime(), cover.multiplicator_rank());
    let mut out = Vec::new();
    for s in 1..=cover.nucleus_rank() {
        let set = annihilators(cover, s, &packer);
        for i in 0..set.len() {
            out.push(packer.unpack(set.get(i)).nullspace().row_space());
        }
    }
    out
}

fn act(packer: &Packer, key: &[u64], b: &MatGFp, out: &mut Vec<u64>) {
    out.clear();
    let w = packer.unpack(key).mul(b).row_space();
    packer.pack(&w, out);
}

/// The descendant `G*/U`.
fn build_quotient(cover: &CoverData, u: &MatGFp) -> PcPresentation {
    let g = cover.group();
    let p = g.prime();
    let n = g.len();
    let m = cover.multiplicator_rank();
    let s = m - u.rows();
    let mut basis = u.clone();
    let mut chosen: Vec<Relation> = Vec::new();
    for (r, t) in cover.tails() {
        if chosen.len() == s {
            break;
        }
        if !g.relation_rhs(*r).is_identity() {
            continue;
        }
        let mut trial = basis.clone();
        trial.push_row(t);
        if trial.rank() > basis.rows() {
            basis = trial;
            chosen.push(*r);
        }
    }
    assert_eq!(chosen.len(), s, "tails with trivial image span the quotient");
    let inv = basis.inverse().expect("basis of the multiplicator");
    let coords = |t: &[u8]| -> Vec<u8> { inv.vec_mul(t)[m - s..].to_vec() };
    let total = n + s;
    let with_tail = |rhs: &Element, t: &[u8]| -> Element {
        let mut v = rhs.exponents().to_vec();
        v.extend(coords(t));
        Element::from_exponents(v)
    };
    let mut power: Vec<Element> = (0..n).map(|i| with_tail(g.power_rhs(i), cover.tail(Relation::Power(i)))).collect();
    power.extend((0..s).map(|_| Element::identity(total)));
    let comm: Vec<Vec<Element>> = (0..total)
        .map(|j| {
            (0..j)
                .map(|i| {
                    if j < n {
                        with_tail(g.comm_rhs(j, i), cover.tail(Relation::Commutator(j, i)))
                    } else {
                        Element::identity(total)
                    }
                })
                .collect()
        })
        .collect();
    let mut weights = g.weights().to_vec();
    weights.extend(std::iter::repeat(g.max_weight() + 1).take(s));
    let mut defs = g.definitions().to_vec();
    for r in chosen {
        defs.push(Some(match r {
            Relation::Power(i) => Definition::Power(i),
            Relation::Commutator(j, i) => Definition::Commutator(j, i),
        }));
    }
    let h = PcPresentation::from_parts(p, total, power, comm, weights, defs).expect("quotient of the cover");
    debug_assert!(h.is_consistent());
    h
}

struct OrbitWork<'a> {
    g: &'a PcPresentation,
    gens: &'a [Automorphism],
    inverses: Vec<Automorphism>,
    duals: Vec<MatGFp>,
    packer: Packer,
}

impl OrbitWork<'_> {
    /// Stabilizer of the orbit's first point, grown from Schreier generators
    /// until it reaches `target` elements.
    fn stabilizer(&self, set: &KeySet, points: &[usize], tree: &HashMap<usize, (usize, usize)>, target: u128) -> AutGroup {
        let g = self.g;
        let p = g.prime();
        let mut stab = AutGroup::new(g);
        let mut cache: HashMap<usize, (Automorphism, Automorphism)> = HashMap::new();
        cache.insert(points[0], (Automorphism::identity(g), Automorphism::identity(g)));
        let mut key = Vec::new();
        for &k in points {
            if stab.order().value(p) >= target {
                break;
            }
            for (j, b) in self.duals.iter().enumerate() {
                act(&self.packer, set.get(k), b, &mut key);
                let k2 = set.find(&key).expect("orbit closed under the action");
                if tree.get(&k2) == Some(&(k, j)) {
                    continue;
                }
                let (uk, _) = self.transversal(k, tree, &mut cache);
                let (_, vk2) = self.transversal(k2, tree, &mut cache);
                let s = vk2.compose(g, &self.gens[j].compose(g, &uk));
                stab.add(&s);
                if stab.order().value(p) >= target {
                    break;
                }
            }
        }
        assert_eq!(stab.order().value(p), target, "stabilizer order");
        stab
    }

    fn transversal(
        &self,
        k: usize,
        tree: &HashMap<usize, (usize, usize)>,
        cache: &mut HashMap<usize, (Automorphism, Automorphism)>,
    ) -> (Automorphism, Automorphism) {
        if let Some(x) = cache.get(&k) {
            return x.clone();
        }
        let (parent, j) = tree[&k];
        let (u, v) = self.transversal(parent, tree, cache);
        let out = (self.gens[j].compose(self.g, &u), v.compose(self.g, &self.inverses[j]));
        cache.insert(k, out.clone());
        out
    }
}

/// Central automorphisms `x_i -> x_i z` for the new generators `z`.
fn central_automorphisms(h: &PcPresentation, first_new: usize) -> Vec<Automorphism> {
    let d = h.minimal_generators();
    let mut out = Vec::new();
    for i in 0..d {
        for z in first_new..h.len() {
            let mut images: Vec<Element> = (0..d).map(|k| h.generator(k)).collect();
            images[i] = h.multiply(&images[i], &h.generator(z));
            out.push(Automorphism::from_images_unchecked(h, images));
        }
    }
    out
}

/// Immediate descendants of `g` up to isomorphism, given generators of its
/// full automorphism group.
pub fn immediate_descendants(g: &PcPresentation, auts: &AutSet) -> Result<Vec<Descendant>> {
    Ok(descendants_filtered(g, auts, Limits::default(), &mut |_| true)?.descendants)
}

/// As [`immediate_descendants`], but only descendants accepted by `keep`
/// get automorphism data and are returned.
pub fn descendants_filtered(
    g: &PcPresentation,
    auts: &AutSet,
    limits: Limits,
    keep: &mut dyn FnMut(&Descendant) -> bool,
) -> Result<DescendOutcome> {
    let cover = p_covering_group(g)?;
    let mut out = DescendOutcome {
        multiplicator_rank: cover.multiplicator_rank(),
        nucleus_rank: cover.nucleus_rank(),
        ..Default::default()
    };
    let nu = cover.nucleus_rank();
    if nu == 0 {
        return Ok(out);
    }
    if limits.max_class.is_some_and(|c| g.max_weight() + 1 > c) {
        out.capped = true;
        return Ok(out);
    }
    let p = g.prime();
    let m = cover.multiplicator_rank();
    let packer = Packer::new(p, m);
    let inverses: Vec<Automorphism> = auts.gens.iter().map(|a| a.inverse(g)).collect();
    let duals: Vec<MatGFp> = auts
        .gens
        .iter()
        .map(|a| extend_to_multiplicator(a, &cover).inverse().expect("automorphism acts invertibly").transpose())
        .collect();
    let work = OrbitWork { g, gens: &auts.gens, inverses, duals, packer };
    for s in 1..=nu {
        if limits.max_order_log.is_some_and(|mx| g.len() + s > mx) {
            out.capped = true;
            break;
        }
        let count = gaussian_binomial(nu, s, p as u64).saturating_mul((p as u64).saturating_pow((s * (m - nu)) as u32));
        if count > MAX_ALLOWABLE {
            return Err(Error::TooManySubspaces { count, limit: MAX_ALLOWABLE });
        }
        let set = annihilators(&cover, s, &packer);
        let mut seen = vec![false; set.len()];
        let mut key = Vec::new();
        let mut orbit_no = 0;
        for start in 0..set.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut points = vec![start];
            let mut tree: HashMap<usize, (usize, usize)> = HashMap::new();
            let mut i = 0;
            while i < points.len() {
                let k = points[i];
                for (j, b) in work.duals.iter().enumerate() {
                    act(&packer, set.get(k), b, &mut key);
                    let k2 = set.find(&key).expect("allowable subgroups are permuted");
                    if !seen[k2] {
                        seen[k2] = true;
                        tree.insert(k2, (k, j));
                        points.push(k2);
                    }
                }
                i += 1;
            }
            out.total += 1;
            let u = packer.unpack(set.get(start)).nullspace().row_space();
            let h = build_quotient(&cover, &u);
            let mut desc =
                Descendant { presentation: h, subspace: u, step: s, orbit: orbit_no, orbit_size: points.len(), auts: None };
            orbit_no += 1;
            if !keep(&desc) {
                continue;
            }
            assert_eq!(auts.order % points.len() as u128, 0, "orbit length divides the group order");
            let target = auts.order / points.len() as u128;
            let stab = work.stabilizer(&set, &points, &tree, target);
            let h = &desc.presentation;
            let mut gens: Vec<Automorphism> = stab
                .generators()
                .iter()
                .map(|a| Automorphism::from_images_unchecked(h, a.images().iter().map(|e| e.padded(h.len())).collect()))
                .collect();
            gens.extend(central_automorphisms(h, g.len()));
            let order = target * (p as u128).pow((g.minimal_generators() * s) as u32);
            desc.auts = Some(AutSet { gens, order });
            out.descendants.push(desc);
        }
    }
    Ok(out)
}

/// Finds the immediate descendant of `g` isomorphic to `q`.
///
/// `images` are elements of `q` whose classes modulo the last
/// `q.len() - g.len()` generators are the images of the defining
/// generators of `g` under an isomorphism `g -> q/P_c(q)`; those last
/// generators must span `P_c(q)`. Returns the descendant together with
/// the images in `q` of its defining generators under an isomorphism.
pub fn locate_descendant(
    g: &PcPresentation,
    auts: &AutSet,
    q: &PcPresentation,
    images: &[Element],
) -> Result<Option<(Descendant, Vec<Element>)>> {
    let cover = p_covering_group(g)?;
    let n = g.len();
    if q.len() <= n || images.len() != g.minimal_generators() {
        return Ok(None);
    }
    // the map from the cover onto q, on all generators of the cover
    let p = g.prime() as u64;
    let mut theta: Vec<Element> = images.to_vec();
    for k in theta.len()..n {
        let img = match g.definitions()[k].ok_or(Error::MissingDefinition(k + 1))? {
            Definition::Power(i) => q.power_of(&theta[i], p),
            Definition::Commutator(j, i) => q.commutator(&theta[j], &theta[i]),
        };
        theta.push(img);
    }
    for &r in cover.attached_relations() {
        let lhs = match r {
            Relation::Power(i) => q.power_of(&theta[i], p),
            Relation::Commutator(j, i) => q.commutator(&theta[j], &theta[i]),
        };
        let rhs = eval(q, &theta[..n], g.relation_rhs(r));
        theta.push(q.multiply(&q.inverse(&rhs), &lhs));
    }
    let rows: Vec<Vec<u8>> = theta[n..].iter().map(|e| e.exponents()[n..].to_vec()).collect();
    let t = MatGFp::from_rows(g.prime(), q.len() - n, &rows);
    if t.rank() != q.len() - n {
        return Ok(None);
    }
    let u = t.transpose().nullspace().row_space();
    let mats: Vec<MatGFp> = auts.gens.iter().map(|a| extend_to_multiplicator(a, &cover)).collect();
    // orbit of U, each point with an automorphism carrying U to it
    let mut orbit: HashMap<MatGFp, Automorphism> = HashMap::from([(u.clone(), Automorphism::identity(g))]);
    let mut queue = vec![u];
    while let Some(x) = queue.pop() {
        let w = orbit[&x].clone();
        for (a, mat) in auts.gens.iter().zip(&mats) {
            let y = x.mul(mat).row_space();
            if !orbit.contains_key(&y) {
                orbit.insert(y.clone(), a.compose(g, &w));
                queue.push(y);
            }
        }
    }
    let step = q.len() - n;
    let limits = Limits { max_order_log: Some(q.len()), max_class: None };
    let out = descendants_filtered(g, auts, limits, &mut |d| d.step == step && orbit.contains_key(&d.subspace))?;
    let Some(d) = out.descendants.into_iter().next() else { return Ok(None) };
    let beta = orbit[&d.subspace].inverse(g);
    let new_images = beta.images().iter().map(|e| eval(q, &theta[..n], e)).collect();
    Ok(Some((d, new_images)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cases::presentations;
    use crate::pcp::parse_presentation;
    use crate::structure::{class_quotient, has_quotient, is_isomorphic, p_class};

    fn pc(text: &str) -> PcPresentation {
        parse_presentation(text).unwrap()
    }

    fn descendants(g: &PcPresentation) -> Vec<Descendant> {
        immediate_descendants(g, &root_automorphisms(g).unwrap()).unwrap()
    }

    #[test]
    fn general_linear_group_orders() {
        for (d, want) in [(1, 1), (2, 6), (3, 168)] {
            let g = PcPresentation::elementary_abelian(2, d);
            let a = root_automorphisms(&g).unwrap();
            assert_eq!(a.order, want);
            assert_eq!(a.to_group(&g).elements().len() as u128, want);
        }
        let h4 = pc(presentations::H4);
        assert!(matches!(root_automorphisms(&h4), Err(Error::NotElementaryAbelian)));
    }

    #[test]
    fn multiplicator_action() {
        let g = PcPresentation::elementary_abelian(2, 2);
        let cover = p_covering_group(&g).unwrap();
        assert_eq!(extend_to_multiplicator(&Automorphism::identity(&g), &cover), MatGFp::identity(2, 3));
        let swap = Automorphism::from_images(&g, vec![g.generator(1), g.generator(0)]).unwrap();
        let want = MatGFp::from_rows(2, 3, &[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]);
        assert_eq!(extend_to_multiplicator(&swap, &cover), want);
    }

    #[test]
    fn multiplicator_action_is_functorial() {
        for g in [PcPresentation::elementary_abelian(2, 2), PcPresentation::elementary_abelian(2, 3)] {
            let cover = p_covering_group(&g).unwrap();
            let all = root_automorphisms(&g).unwrap().to_group(&g).elements();
            for a in all.iter().step_by(5) {
                for b in all.iter().step_by(7) {
                    let ab = extend_to_multiplicator(&a.compose(&g, b), &cover);
                    let prod = extend_to_multiplicator(b, &cover).mul(&extend_to_multiplicator(a, &cover));
                    assert_eq!(ab, prod);
                }
            }
        }
    }

    #[test]
    fn allowable_subgroups_of_klein_four() {
        let cover = p_covering_group(&PcPresentation::elementary_abelian(2, 2)).unwrap();
        let all = allowable_subgroups(&cover);
        assert_eq!(all.len(), 1 + 7 + 7);
        let m = cover.multiplicator_rank();
        for u in &all {
            assert!(u.rank() < m);
            // U + nucleus = multiplicator
            let mut rows = u.row_vecs();
            rows.extend(cover.nucleus().row_vecs());
            assert_eq!(MatGFp::from_rows(2, m, &rows).rank(), m);
        }
        let q8 = p_covering_group(&pc(presentations::Q8)).unwrap();
        assert!(allowable_subgroups(&q8).is_empty());
    }

    #[test]
    fn descendants_of_cyclic_group() {
        let kids = descendants(&PcPresentation::elementary_abelian(2, 1));
        assert_eq!(kids.len(), 1);
        assert!(is_isomorphic(&kids[0].presentation, &pc("p=2 n=2\nx1^2 = x2")).unwrap());
    }

    #[test]
    fn order_eight_descendants_of_klein_four() {
        let kids = descendants(&PcPresentation::elementary_abelian(2, 2));
        let eight: Vec<&PcPresentation> = kids.iter().filter(|d| d.step == 1).map(|d| &d.presentation).collect();
        assert_eq!(eight.len(), 3);
        for text in [presentations::C2XC4, presentations::D4, presentations::Q8] {
            let want = pc(text);
            assert_eq!(eight.iter().filter(|h| is_isomorphic(h, &want).unwrap()).count(), 1);
        }
    }

    #[test]
    fn descendants_are_quotients_of_the_cover() {
        let g = pc(presentations::H4);
        let auts = crate::tower::automorphisms_by_search(&g).unwrap();
        let cover = p_covering_group(&g).unwrap();
        let kids = immediate_descendants(&g, &auts).unwrap();
        assert!(!kids.is_empty());
        for d in &kids {
            let h = &d.presentation;
            assert!(h.is_consistent());
            assert_eq!(p_class(h), 3);
            assert_eq!(h.len(), g.len() + d.step);
            assert!(is_isomorphic(&class_quotient(h, 2).0, &g).unwrap());
            assert!(has_quotient(cover.cover(), h));
            let a = d.auts.as_ref().unwrap();
            assert_eq!(a.to_group(h).order().value(2), a.order);
        }
        for a in 0..kids.len() {
            for b in a + 1..kids.len() {
                assert!(!is_isomorphic(&kids[a].presentation, &kids[b].presentation).unwrap());
            }
        }
    }

    #[test]
    fn terminal_iff_trivial_nucleus() {
        for d in descendants(&PcPresentation::elementary_abelian(2, 2)) {
            let h = &d.presentation;
            let nucleus = p_covering_group(h).unwrap().nucleus_rank();
            let kids = immediate_descendants(h, d.auts.as_ref().unwrap()).unwrap();
            assert_eq!(nucleus == 0, kids.is_empty());
        }
    }

    #[test]
    fn limits_cap_the_step() {
        let g = PcPresentation::elementary_abelian(2, 2);
        let limits = Limits { max_order_log: Some(3), max_class: None };
        let out = descendants_filtered(&g, &root_automorphisms(&g).unwrap(), limits, &mut |_| true).unwrap();
        assert!(out.capped);
        assert!(out.descendants.iter().all(|d| d.step == 1));
        let limits = Limits { max_order_log: None, max_class: Some(1) };
        let out = descendants_filtered(&g, &root_automorphisms(&g).unwrap(), limits, &mut |_| true).unwrap();
        assert!(out.capped && out.descendants.is_empty());
    }

    #[test]
    fn locate_finds_each_descendant() {
        let g = PcPresentation::elementary_abelian(2, 2);
        let auts = root_automorphisms(&g).unwrap();
        for d in immediate_descendants(&g, &auts).unwrap() {
            let h = &d.presentation;
            // hand the descendant over with its generators swapped
            let images = vec![h.generator(1), h.generator(0)];
            let (found, imgs) = locate_descendant(&g, &auts, h, &images).unwrap().expect("located");
            assert_eq!(found.presentation, *h);
            let iso = crate::structure::Homomorphism::from_generator_images(h.clone(), h.clone(), &imgs).unwrap();
            assert!(iso.is_surjective());
        }
    }
}
