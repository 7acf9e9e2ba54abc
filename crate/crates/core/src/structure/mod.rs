//! Subgroups of a pc group and the series built from them.
//!
//! A subgroup is stored as its canonical induced generating sequence: one
//! element per leading position, leading exponent 1, and zero exponent at
//! the leading positions of the other members. Two equal subgroups therefore
//! have identical sequences.

mod hom;
mod standard;

pub use hom::{all_surjections, has_quotient, is_isomorphic, Homomorphism, ISO_ORDER_LIMIT};
pub(crate) use hom::eval;
pub use standard::{standardize, Standardized};

use crate::abelian::{local_invariants, AbelianInvariants};
use crate::error::{Error, Result};
use crate::linalg::inv_mod;
use crate::pcp::{Element, PcPresentation};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    n: usize,
    gens: Vec<Element>,
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.gens.iter()).finish()
    }
}

impl Subgroup {
    /// Wraps a sequence already in canonical form.
    pub(crate) fn from_canonical(n: usize, gens: Vec<Element>) -> Self {
        Subgroup { n, gens }
    }

    pub fn trivial(pc: &PcPresentation) -> Self {
        Subgroup { n: pc.len(), gens: Vec::new() }
    }

    pub fn whole(pc: &PcPresentation) -> Self {
        Subgroup { n: pc.len(), gens: pc.generators() }
    }

    /// The induced generating sequence, sorted by leading position.
    pub fn gens(&self) -> &[Element] {
        &self.gens
    }

    pub fn order_log(&self) -> usize {
        self.gens.len()
    }

    pub fn order(&self, p: u8) -> u128 {
        (p as u128).pow(self.gens.len() as u32)
    }

    /// `log_p` of the index in the ambient group.
    pub fn index_log(&self) -> usize {
        self.n - self.gens.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn leads(&self) -> Vec<usize> {
        self.gens.iter().map(|g| g.leading().unwrap()).collect()
    }

    pub fn contains(&self, pc: &PcPresentation, a: &Element) -> bool {
        self.exponents_of(pc, a).is_some()
    }

    /// Exponents `c` with `a = g_1^c_1 ... g_m^c_m` over the sequence, or
    /// `None` if `a` is not in the subgroup.
    pub fn exponents_of(&self, pc: &PcPresentation, a: &Element) -> Option<Vec<u8>> {
        let p = pc.prime();
        let mut e = a.clone();
        let mut out = vec![0u8; self.gens.len()];
        for (k, g) in self.gens.iter().enumerate() {
            let l = g.leading().unwrap();
            if e.0[..l].iter().any(|&x| x != 0) {
                return None;
            }
            let c = e.0[l];
            if c != 0 {
                out[k] = c;
                let ginv = pc.power_of(g, (p - c) as u64);
                e = pc.multiply(&ginv, &e);
            }
        }
        e.is_identity().then_some(out)
    }

    pub fn is_subgroup_of(&self, pc: &PcPresentation, other: &Subgroup) -> bool {
        self.gens.iter().all(|g| other.contains(pc, g))
    }

    pub fn is_normal(&self, pc: &PcPresentation) -> bool {
        self.is_normalized_by(pc, &pc.generators())
    }

    pub fn is_normalized_by(&self, pc: &PcPresentation, by: &[Element]) -> bool {
        self.gens.iter().all(|s| by.iter().all(|x| self.contains(pc, &pc.conjugate(s, x))))
    }

    /// Canonical representative of the coset `a N` for this (normal)
    /// subgroup `N`: the exponents at its leading positions are cleared.
    pub fn reduce(&self, pc: &PcPresentation, a: &Element) -> Element {
        let p = pc.prime();
        let mut e = a.clone();
        for g in &self.gens {
            let l = g.leading().unwrap();
            let c = e.0[l];
            if c != 0 {
                e = pc.multiply(&e, &pc.power_of(g, (p - c) as u64));
            }
        }
        e
    }
}

/// `a ∩ b`, by listing the elements of the smaller one.
pub fn intersection(pc: &PcPresentation, a: &Subgroup, b: &Subgroup) -> Subgroup {
    let (small, big) = if a.order_log() <= b.order_log() { (a, b) } else { (b, a) };
    let p = pc.prime();
    let mut elements = vec![pc.identity()];
    // every element is a product g_1^e_1 ... g_m^e_m of the sequence
    for g in small.gens.iter().rev() {
        let mut next = Vec::with_capacity(elements.len() * p as usize);
        let mut pw = pc.identity();
        for _ in 0..p {
            next.extend(elements.iter().map(|e| pc.multiply(&pw, e)));
            pw = pc.multiply(&pw, g);
        }
        elements = next;
    }
    let inside: Vec<Element> = elements.into_iter().filter(|e| big.contains(pc, e)).collect();
    subgroup_closure(pc, &inside)
}

/// Incremental closure: a sifting table indexed by leading position.
pub(crate) struct Closure<'a> {
    pc: &'a PcPresentation,
    table: Vec<Option<Element>>,
}

impl<'a> Closure<'a> {
    pub(crate) fn new(pc: &'a PcPresentation) -> Self {
        Closure { pc, table: vec![None; pc.len()] }
    }

    fn sift(&self, a: &Element) -> Element {
        let p = self.pc.prime();
        let mut e = a.clone();
        while let Some(l) = e.leading() {
            match &self.table[l] {
                Some(g) => {
                    let c = e.0[l];
                    e = self.pc.multiply(&e, &self.pc.power_of(g, (p - c) as u64));
                }
                None => break,
            }
        }
        e
    }

    pub(crate) fn contains(&self, a: &Element) -> bool {
        self.sift(a).is_identity()
    }

    /// Adds `a` and closes; returns whether the subgroup grew.
    pub(crate) fn add(&mut self, a: &Element) -> bool {
        let pc = self.pc;
        let p = pc.prime();
        let mut grew = false;
        let mut queue = vec![a.clone()];
        while let Some(x) = queue.pop() {
            let r = self.sift(&x);
            let Some(l) = r.leading() else { continue };
            let r = pc.power_of(&r, inv_mod(r.0[l], p) as u64);
            queue.push(pc.power_of(&r, p as u64));
            for t in self.table.iter().flatten() {
                queue.push(pc.commutator(&r, t));
            }
            self.table[l] = Some(r);
            grew = true;
        }
        grew
    }

    pub(crate) fn finish(self) -> Subgroup {
        let pc = self.pc;
        let p = pc.prime();
        let mut gens: Vec<Element> = self.table.into_iter().flatten().collect();
        let leads: Vec<usize> = gens.iter().map(|g| g.leading().unwrap()).collect();
        for a in 0..gens.len() {
            for b in a + 1..gens.len() {
                let c = gens[a].0[leads[b]];
                if c != 0 {
                    gens[a] = pc.multiply(&gens[a], &pc.power_of(&gens[b], (p - c) as u64));
                }
            }
        }
        Subgroup { n: pc.len(), gens }
    }
}

/// Smallest subgroup containing `gens`.
pub fn subgroup_closure(pc: &PcPresentation, gens: &[Element]) -> Subgroup {
    let mut c = Closure::new(pc);
    for g in gens {
        c.add(g);
    }
    c.finish()
}

/// Smallest subgroup containing `gens` and normalized by `by`.
pub fn normal_closure_under(pc: &PcPresentation, gens: &[Element], by: &[Element]) -> Subgroup {
    let mut c = Closure::new(pc);
    let mut work: Vec<Element> = gens.to_vec();
    while let Some(g) = work.pop() {
        if c.add(&g) {
            // conjugates of every current member; cheap at these sizes
            let members: Vec<Element> = c.table.iter().flatten().cloned().collect();
            for s in &members {
                for x in by {
                    let y = pc.conjugate(s, x);
                    if !c.contains(&y) {
                        work.push(y);
                    }
                }
            }
        }
    }
    c.finish()
}

/// Smallest normal subgroup of the whole group containing `gens`.
pub fn normal_closure(pc: &PcPresentation, gens: &[Element]) -> Subgroup {
    normal_closure_under(pc, gens, &pc.generators())
}

/// Commutator subgroup `[A, B]` of two subgroups, assuming both are normal
/// in the group generated by their union.
fn commutator_subgroup(pc: &PcPresentation, a: &Subgroup, b: &Subgroup, by: &[Element]) -> Subgroup {
    let mut gens = Vec::new();
    for x in &a.gens {
        for y in &b.gens {
            gens.push(pc.commutator(x, y));
        }
    }
    normal_closure_under(pc, &gens, by)
}

/// Derived subgroup of `s`.
pub fn derived_subgroup(pc: &PcPresentation, s: &Subgroup) -> Subgroup {
    commutator_subgroup(pc, s, s, &s.gens)
}

/// Frattini subgroup `S^p [S,S]` of `s`.
pub fn frattini_subgroup(pc: &PcPresentation, s: &Subgroup) -> Subgroup {
    let p = pc.prime() as u64;
    let mut gens: Vec<Element> = s.gens.iter().map(|g| pc.power_of(g, p)).collect();
    for (a, x) in s.gens.iter().enumerate() {
        for y in &s.gens[..a] {
            gens.push(pc.commutator(x, y));
        }
    }
    normal_closure_under(pc, &gens, &s.gens)
}

/// `P_0 = G, P_i = P_{i-1}^p [G, P_{i-1}]`, ending with the trivial group.
pub fn lower_p_central_series(pc: &PcPresentation) -> Vec<Subgroup> {
    let p = pc.prime() as u64;
    let all = pc.generators();
    let mut series = vec![Subgroup::whole(pc)];
    while !series.last().unwrap().is_trivial() {
        let prev = series.last().unwrap();
        let mut gens: Vec<Element> = prev.gens.iter().map(|a| pc.power_of(a, p)).collect();
        for a in &prev.gens {
            for x in &all {
                gens.push(pc.commutator(a, x));
            }
        }
        let next = normal_closure(pc, &gens);
        assert!(next.order_log() < prev.order_log(), "lower exponent-p central series stalled");
        series.push(next);
    }
    series
}

pub fn p_class(pc: &PcPresentation) -> usize {
    lower_p_central_series(pc).len() - 1
}

/// Weight of each generator: one more than the last series term containing it.
pub fn infer_weights(pc: &PcPresentation) -> Vec<u32> {
    let series = lower_p_central_series(pc);
    (0..pc.len())
        .map(|k| {
            let x = pc.generator(k);
            let last = series.iter().rposition(|s| s.contains(pc, &x)).unwrap();
            last as u32 + 1
        })
        .collect()
}

/// Abelian invariants of `S/S'`, from the relation matrix of the induced
/// sequence.
pub fn abelian_quotient_invariants(pc: &PcPresentation, s: &Subgroup) -> AbelianInvariants {
    let p = pc.prime();
    let m = s.gens.len();
    if m == 0 {
        return AbelianInvariants::trivial();
    }
    let coeffs = |e: &Element| -> Vec<i64> {
        s.exponents_of(pc, e).expect("closed subgroup").iter().map(|&c| c as i64).collect()
    };
    let mut rows = Vec::with_capacity(m + m * (m - 1) / 2);
    for (i, g) in s.gens.iter().enumerate() {
        let mut row: Vec<i64> = coeffs(&pc.power_of(g, p as u64)).iter().map(|c| -c).collect();
        row[i] += p as i64;
        rows.push(row);
    }
    for j in 0..m {
        for i in 0..j {
            rows.push(coeffs(&pc.commutator(&s.gens[j], &s.gens[i])));
        }
    }
    local_invariants(&rows, m, p as u64, m as u32).expect("finite p-group has finite abelianization")
}

/// Abelian invariants of `G/G'`, `G'/G''`, ... until the derived subgroup
/// is trivial.
pub fn derived_series_factors(pc: &PcPresentation) -> Vec<AbelianInvariants> {
    let mut out = Vec::new();
    let mut s = Subgroup::whole(pc);
    while !s.is_trivial() {
        out.push(abelian_quotient_invariants(pc, &s));
        s = derived_subgroup(pc, &s);
    }
    out
}

/// Maximal subgroups of `s`: preimages of the hyperplanes of `S/Φ(S)`.
pub fn maximal_subgroups(pc: &PcPresentation, s: &Subgroup) -> Vec<Subgroup> {
    let p = pc.prime();
    let phi = frattini_subgroup(pc, s);
    let phi_leads = phi.leads();
    let basis: Vec<&Element> = s.gens.iter().filter(|g| !phi_leads.contains(&g.leading().unwrap())).collect();
    let r = basis.len();
    let mut out = Vec::new();
    // one hyperplane per nonzero functional up to scalars: normalize the
    // first nonzero coordinate to 1
    for f in crate::linalg::enumerate_subspaces(p, r, r.saturating_sub(1)) {
        if r == 0 {
            break;
        }
        let kernel = f.nullspace();
        let mut gens: Vec<Element> = phi.gens.clone();
        for v in kernel.row_vecs() {
            let mut e = pc.identity();
            for (k, &c) in v.iter().enumerate() {
                if c != 0 {
                    e = pc.multiply(&e, &pc.power_of(basis[k], c as u64));
                }
            }
            gens.push(e);
        }
        out.push(subgroup_closure(pc, &gens));
    }
    out.sort();
    out
}

/// All subgroups of index at most `p^max_index_log`, sorted, without
/// repetitions.
pub fn low_index_subgroups(pc: &PcPresentation, max_index_log: usize) -> Vec<Subgroup> {
    let mut levels = vec![vec![Subgroup::whole(pc)]];
    for _ in 0..max_index_log {
        let mut next: Vec<Subgroup> =
            levels.last().unwrap().iter().flat_map(|s| maximal_subgroups(pc, s)).collect();
        next.sort();
        next.dedup();
        if next.is_empty() {
            break;
        }
        levels.push(next);
    }
    let mut out: Vec<Subgroup> = levels.into_iter().flatten().collect();
    out.sort();
    out
}

/// `P / N` as a pc presentation on the generators of `P` outside the
/// leading positions of `N`, with the natural map.
pub fn quotient_presentation(pc: &PcPresentation, n: &Subgroup) -> Result<(PcPresentation, Homomorphism)> {
    if !n.is_normal(pc) {
        return Err(Error::NotNormal);
    }
    let leads = n.leads();
    let kept: Vec<usize> = (0..pc.len()).filter(|k| !leads.contains(k)).collect();
    let project = |e: &Element| -> Element {
        let r = n.reduce(pc, e);
        Element(kept.iter().map(|&k| r.0[k]).collect())
    };
    let q = kept.len();
    let p = pc.prime();
    let power: Vec<Element> = kept.iter().map(|&k| project(&pc.power_of(&pc.generator(k), p as u64))).collect();
    let comm: Vec<Vec<Element>> = (0..q)
        .map(|b| (0..b).map(|a| project(&pc.commutator(&pc.generator(kept[b]), &pc.generator(kept[a])))).collect())
        .collect();
    let mut quo = PcPresentation::from_relations(p, q, power, comm)?;
    let weights = infer_weights(&quo);
    let defs = quo.infer_definitions();
    quo.set_weights_and_defs(weights, defs);
    let images = (0..pc.len()).map(|k| project(&pc.generator(k))).collect();
    let map = Homomorphism::new_unchecked(pc.clone(), quo.clone(), images);
    Ok((quo, map))
}

/// `G / P_m(G)`.
pub fn class_quotient(pc: &PcPresentation, m: usize) -> (PcPresentation, Homomorphism) {
    let series = lower_p_central_series(pc);
    let n = &series[m.min(series.len() - 1)];
    quotient_presentation(pc, n).expect("series terms are normal")
}

#[cfg(test)]
mod tests;
