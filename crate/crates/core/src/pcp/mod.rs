//! Power-commutator presentations of finite p-groups.
//!
//! Generators are numbered `x1..xn` in text and `0..n` internally. Every
//! element is kept in collected normal form `x1^e1 ... xn^en`, `0 <= ei < p`.

mod collect;
mod parse;

use std::fmt;

pub use parse::{parse_element, parse_presentation, parse_presentation_with, substitute_params};

use crate::error::{Error, Result};
pub(crate) use collect::Tails;

/// A group element as its exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(pub(crate) Vec<u8>);

impl Element {
    pub fn identity(n: usize) -> Self {
        Element(vec![0; n])
    }

    pub fn generator(n: usize, k: usize) -> Self {
        let mut v = vec![0; n];
        v[k] = 1;
        Element(v)
    }

    pub fn from_exponents(exps: Vec<u8>) -> Self {
        Element(exps)
    }

    pub fn exponents(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Index of the first nonzero exponent.
    pub fn leading(&self) -> Option<usize> {
        self.0.iter().position(|&e| e != 0)
    }

    /// Pads with zero exponents up to length `n`.
    pub fn padded(&self, n: usize) -> Element {
        let mut v = self.0.clone();
        v.resize(n, 0);
        Element(v)
    }

    pub fn truncated(&self, n: usize) -> Element {
        Element(self.0[..n].to_vec())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", k + 1)?;
            } else {
                write!(f, "x{}^{}", k + 1, e)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// An uncollected word: `(generator, exponent)` letters, exponents any integer.
pub type Word = Vec<(usize, i64)>;

/// How a non-minimal generator is defined in terms of earlier ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Definition {
    /// `x_k = x_i^p`
    Power(usize),
    /// `x_k = [x_j, x_i]`, `j > i`
    Commutator(usize, usize),
}

/// A power or commutator relation slot, in canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Power(usize),
    Commutator(usize, usize),
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Relation::Power(i) => write!(f, "x{}^p", i + 1),
            Relation::Commutator(j, i) => write!(f, "[x{},x{}]", j + 1, i + 1),
        }
    }
}

/// Canonical relation order: powers by ascending generator, then
/// commutators `[xj,xi]` ordered by `(j, i)`.
pub fn relation_order(n: usize) -> Vec<Relation> {
    let mut out: Vec<Relation> = (0..n).map(Relation::Power).collect();
    for j in 1..n {
        for i in 0..j {
            out.push(Relation::Commutator(j, i));
        }
    }
    out
}

/// A consistent power-commutator presentation of a finite p-group.
#[derive(Clone)]
pub struct PcPresentation {
    p: u8,
    n: usize,
    weights: Vec<u32>,
    defs: Vec<Option<Definition>>,
    power: Vec<Element>,
    comm: Vec<Vec<Element>>,
    conj: Vec<Vec<Element>>,
}

impl PartialEq for PcPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.n == other.n
            && self.weights == other.weights
            && self.defs == other.defs
            && self.power == other.power
            && self.comm == other.comm
    }
}

impl Eq for PcPresentation {}

impl fmt::Debug for PcPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PcPresentation({})", self.to_text().replace('\n', "; "))
    }
}

impl PcPresentation {
    /// Builds a presentation from relation right-hand sides without running
    /// any consistency or weight inference. `power[i]` is `x_i^p`,
    /// `comm[j][i]` (`i < j`) is `[x_j, x_i]`.
    ///
    /// Fails if some tail is not supported on strictly later generators,
    /// which would make collection ill-founded.
    pub fn from_relations(p: u8, n: usize, power: Vec<Element>, comm: Vec<Vec<Element>>) -> Result<Self> {
        if p < 2 {
            return Err(Error::Malformed(format!("p = {p} is not a prime")));
        }
        if power.len() != n || comm.len() != n {
            return Err(Error::Malformed("relation table size mismatch".into()));
        }
        for (i, w) in power.iter().enumerate() {
            check_tail(w, n, i, p, &format!("x{}^{}", i + 1, p))?;
        }
        for j in 0..n {
            if comm[j].len() != j {
                return Err(Error::Malformed("commutator table size mismatch".into()));
            }
            for i in 0..j {
                check_tail(&comm[j][i], n, j, p, &format!("[x{},x{}]", j + 1, i + 1))?;
            }
        }
        let conj = build_conj(n, &comm);
        Ok(PcPresentation {
            p,
            n,
            weights: vec![1; n],
            defs: vec![None; n],
            power,
            comm,
            conj,
        })
    }

    /// As [`from_relations`](Self::from_relations) but with known weights
    /// and definitions (used when constructing covers and descendants).
    pub(crate) fn from_parts(
        p: u8,
        n: usize,
        power: Vec<Element>,
        comm: Vec<Vec<Element>>,
        weights: Vec<u32>,
        defs: Vec<Option<Definition>>,
    ) -> Result<Self> {
        let mut pc = Self::from_relations(p, n, power, comm)?;
        pc.weights = weights;
        pc.defs = defs;
        Ok(pc)
    }

    /// Elementary abelian group of rank `d`.
    pub fn elementary_abelian(p: u8, d: usize) -> Self {
        let power = vec![Element::identity(d); d];
        let comm = (0..d).map(|j| vec![Element::identity(d); j]).collect();
        Self::from_parts(p, d, power, comm, vec![1; d], vec![None; d]).expect("valid")
    }

    pub fn prime(&self) -> u8 {
        self.p
    }

    /// Number of pc generators.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn definitions(&self) -> &[Option<Definition>] {
        &self.defs
    }

    /// Number of weight-one generators.
    pub fn minimal_generators(&self) -> usize {
        self.weights.iter().filter(|&&w| w == 1).count()
    }

    /// `log_p` of the group order.
    pub fn order_log(&self) -> usize {
        self.n
    }

    pub fn group_order(&self) -> u128 {
        (self.p as u128).pow(self.n as u32)
    }

    /// Largest generator weight (equals the p-class for weighted presentations).
    pub fn max_weight(&self) -> u32 {
        self.weights.iter().copied().max().unwrap_or(0)
    }

    pub fn power_rhs(&self, i: usize) -> &Element {
        &self.power[i]
    }

    pub fn comm_rhs(&self, j: usize, i: usize) -> &Element {
        &self.comm[j][i]
    }

    pub fn relation_rhs(&self, r: Relation) -> &Element {
        match r {
            Relation::Power(i) => &self.power[i],
            Relation::Commutator(j, i) => &self.comm[j][i],
        }
    }

    pub fn identity(&self) -> Element {
        Element::identity(self.n)
    }

    pub fn generator(&self, k: usize) -> Element {
        Element::generator(self.n, k)
    }

    pub fn generators(&self) -> Vec<Element> {
        (0..self.n).map(|k| self.generator(k)).collect()
    }

    /// Whether every generator of weight > 1 has a definition, weight-one
    /// generators come first, and weights are nondecreasing.
    pub fn has_definitions(&self) -> bool {
        let d = self.minimal_generators();
        self.weights.windows(2).all(|w| w[0] <= w[1])
            && (0..self.n).all(|k| (k < d) == self.defs[k].is_none())
    }

    pub(crate) fn set_weights_and_defs(&mut self, weights: Vec<u32>, defs: Vec<Option<Definition>>) {
        self.weights = weights;
        self.defs = defs;
    }

    /// Generators `k` whose relation right-hand side is exactly `x_k` and
    /// whose left-hand side only involves earlier generators; the first such
    /// relation in canonical order wins.
    pub(crate) fn infer_definitions(&self) -> Vec<Option<Definition>> {
        let mut defs = vec![None; self.n];
        for r in relation_order(self.n) {
            let rhs = self.relation_rhs(r);
            let Some(k) = rhs.leading() else { continue };
            if rhs.0[k] != 1 || rhs.0[k + 1..].iter().any(|&e| e != 0) || defs[k].is_some() {
                continue;
            }
            defs[k] = Some(match r {
                Relation::Power(i) => Definition::Power(i),
                Relation::Commutator(j, i) => Definition::Commutator(j, i),
            });
        }
        defs
    }

    /// Serializes in the presentation grammar; only nontrivial relations
    /// are listed.
    pub fn to_text(&self) -> String {
        let mut s = format!("p={} n={} d={}\n", self.p, self.n, self.minimal_generators());
        for r in relation_order(self.n) {
            let rhs = self.relation_rhs(r);
            if rhs.is_identity() {
                continue;
            }
            match r {
                Relation::Power(i) => s.push_str(&format!("x{}^{} = {}\n", i + 1, self.p, rhs)),
                Relation::Commutator(j, i) => s.push_str(&format!("[x{},x{}] = {}\n", j + 1, i + 1, rhs)),
            }
        }
        s
    }
}

fn check_tail(w: &Element, n: usize, after: usize, p: u8, what: &str) -> Result<()> {
    if w.len() != n {
        return Err(Error::Malformed(format!("{what}: right-hand side has wrong length")));
    }
    if w.0.iter().any(|&e| e >= p) {
        return Err(Error::Malformed(format!("{what}: exponent out of range")));
    }
    if w.0[..=after].iter().any(|&e| e != 0) {
        return Err(Error::Malformed(format!("{what}: right-hand side must involve only later generators")));
    }
    Ok(())
}

fn build_conj(n: usize, comm: &[Vec<Element>]) -> Vec<Vec<Element>> {
    (0..n)
        .map(|j| {
            (0..j)
                .map(|i| {
                    let mut v = comm[j][i].0.clone();
                    v[j] = 1;
                    Element(v)
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests;
