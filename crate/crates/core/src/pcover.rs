//! The p-covering group of a weighted presentation with definitions.
//!
//! Every relation that is not a definition gets a central tail of order p.
//! Collecting all overlaps with those tails as unknowns yields linear
//! relations among them; the free tails after elimination span the
//! p-multiplicator.

use crate::error::{Error, Result};
use crate::linalg::MatGFp;
use crate::pcp::{relation_order, Definition, Element, PcPresentation, Relation, Tails};
use crate::structure::lower_p_central_series;

#[derive(Clone, Debug)]
pub struct CoverData {
    group: PcPresentation,
    cover: PcPresentation,
    rank: usize,
    /// Tail vector (multiplicator coordinates) of every relation, in
    /// canonical relation order.
    tails: Vec<(Relation, Vec<u8>)>,
    /// The relation each multiplicator coordinate was attached to.
    attached: Vec<Relation>,
    nucleus: MatGFp,
}

impl CoverData {
    pub fn group(&self) -> &PcPresentation {
        &self.group
    }

    pub fn cover(&self) -> &PcPresentation {
        &self.cover
    }

    /// Rank of the p-multiplicator.
    pub fn multiplicator_rank(&self) -> usize {
        self.rank
    }

    pub fn nucleus_rank(&self) -> usize {
        self.nucleus.rows()
    }

    /// Basis of the nucleus in multiplicator coordinates, in RREF.
    pub fn nucleus(&self) -> &MatGFp {
        &self.nucleus
    }

    pub fn tail(&self, r: Relation) -> &[u8] {
        &self.tails.iter().find(|(s, _)| *s == r).expect("relation exists").1
    }

    pub fn tails(&self) -> &[(Relation, Vec<u8>)] {
        &self.tails
    }

    pub fn attached_relations(&self) -> &[Relation] {
        &self.attached
    }

    /// The cover element whose tail part is `v` and group part trivial.
    pub fn multiplicator_element(&self, v: &[u8]) -> Element {
        let mut e = vec![0u8; self.group.len()];
        e.extend_from_slice(v);
        Element::from_exponents(e)
    }

    /// Tail part of a cover element lying in the multiplicator.
    pub fn multiplicator_coords(&self, e: &Element) -> Vec<u8> {
        e.exponents()[self.group.len()..].to_vec()
    }
}

fn definition_relation(d: Definition) -> Relation {
    match d {
        Definition::Power(i) => Relation::Power(i),
        Definition::Commutator(j, i) => Relation::Commutator(j, i),
    }
}

pub fn p_covering_group(g: &PcPresentation) -> Result<CoverData> {
    if !g.has_definitions() {
        let d = g.minimal_generators();
        let k = (d..g.len()).find(|&k| g.definitions()[k].is_none()).unwrap_or(d);
        return Err(Error::MissingDefinition(k + 1));
    }
    let n = g.len();
    let p = g.prime();
    let defining: Vec<Relation> = g.definitions().iter().flatten().map(|&d| definition_relation(d)).collect();
    let order = relation_order(n);
    let unknowns: Vec<Relation> = order.iter().copied().filter(|r| !defining.contains(r)).collect();
    let dim = unknowns.len();
    let unit = |r: Relation| -> Vec<u8> {
        let mut v = vec![0u8; dim];
        if let Some(k) = unknowns.iter().position(|&u| u == r) {
            v[k] = 1;
        }
        v
    };
    let tails = Tails {
        dim,
        power: (0..n).map(|i| unit(Relation::Power(i))).collect(),
        comm: (0..n).map(|j| (0..j).map(|i| unit(Relation::Commutator(j, i))).collect()).collect(),
    };
    let mut rows: Vec<Vec<u8>> = Vec::new();
    let mut consistent = true;
    g.overlaps(Some(&tails), &mut |l, r, al, ar| {
        if l != r {
            consistent = false;
        }
        let diff: Vec<u8> = al.iter().zip(ar).map(|(&a, &b)| (a + p - b) % p).collect();
        if diff.iter().any(|&x| x != 0) {
            rows.push(diff);
        }
    });
    if !consistent {
        return Err(Error::Inconsistent);
    }
    let rref = MatGFp::from_rows(p, dim, &rows).rref();
    let free: Vec<usize> = (0..dim).filter(|c| !rref.pivots.contains(c)).collect();
    let rank = free.len();
    // tail of unknown c in terms of the free unknowns
    let solved = |c: usize| -> Vec<u8> {
        let mut v = vec![0u8; rank];
        if let Some(f) = free.iter().position(|&x| x == c) {
            v[f] = 1;
        } else {
            let row = rref.pivots.iter().position(|&x| x == c).unwrap();
            for (f, &fc) in free.iter().enumerate() {
                let a = rref.matrix.get(row, fc);
                v[f] = (p - a) % p;
            }
        }
        v
    };
    let tail_vectors: Vec<(Relation, Vec<u8>)> = order
        .iter()
        .map(|&r| match unknowns.iter().position(|&u| u == r) {
            Some(c) => (r, solved(c)),
            None => (r, vec![0u8; rank]),
        })
        .collect();
    let attached: Vec<Relation> = free.iter().map(|&c| unknowns[c]).collect();

    let total = n + rank;
    let with_tail = |rhs: &Element, t: &[u8]| -> Element {
        let mut v = rhs.exponents().to_vec();
        v.extend_from_slice(t);
        Element::from_exponents(v)
    };
    let lookup = |r: Relation| -> &Vec<u8> { &tail_vectors.iter().find(|(s, _)| *s == r).unwrap().1 };
    let mut power: Vec<Element> = (0..n).map(|i| with_tail(g.power_rhs(i), lookup(Relation::Power(i)))).collect();
    power.extend((0..rank).map(|_| Element::identity(total)));
    let comm: Vec<Vec<Element>> = (0..total)
        .map(|j| {
            (0..j)
                .map(|i| {
                    if j < n {
                        with_tail(g.comm_rhs(j, i), lookup(Relation::Commutator(j, i)))
                    } else {
                        Element::identity(total)
                    }
                })
                .collect()
        })
        .collect();
    let c = g.max_weight();
    let mut weights = g.weights().to_vec();
    weights.extend(std::iter::repeat(c + 1).take(rank));
    let mut defs = g.definitions().to_vec();
    for &r in &attached {
        let exact = g.relation_rhs(r).is_identity();
        defs.push(exact.then(|| match r {
            Relation::Power(i) => Definition::Power(i),
            Relation::Commutator(j, i) => Definition::Commutator(j, i),
        }));
    }
    let cover = PcPresentation::from_parts(p, total, power, comm, weights, defs)?;

    let series = lower_p_central_series(&cover);
    let pc_term = &series[(c as usize).min(series.len() - 1)];
    let basis: Vec<Vec<u8>> = pc_term.gens().iter().map(|e| e.exponents()[n..].to_vec()).collect();
    debug_assert!(pc_term.gens().iter().all(|e| e.exponents()[..n].iter().all(|&x| x == 0)));
    let nucleus = MatGFp::from_rows(p, rank, &basis).row_space();

    Ok(CoverData { group: g.clone(), cover, rank, tails: tail_vectors, attached, nucleus })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cases::presentations;
    use crate::pcp::parse_presentation;
    use crate::structure::{is_isomorphic, quotient_presentation, subgroup_closure};

    fn multiplicator(c: &CoverData) -> crate::structure::Subgroup {
        let cov = c.cover();
        let gens: Vec<Element> = (c.group().len()..cov.len()).map(|k| cov.generator(k)).collect();
        subgroup_closure(cov, &gens)
    }

    #[test]
    fn cover_of_cyclic_group() {
        let c = p_covering_group(&PcPresentation::elementary_abelian(2, 1)).unwrap();
        assert_eq!(c.cover().len(), 2);
        assert!(is_isomorphic(c.cover(), &parse_presentation("p=2 n=2\nx1^2 = x2").unwrap()).unwrap());
        assert_eq!((c.multiplicator_rank(), c.nucleus_rank()), (1, 1));
    }

    #[test]
    fn cover_of_klein_four() {
        let c = p_covering_group(&PcPresentation::elementary_abelian(2, 2)).unwrap();
        assert_eq!(c.cover().len(), 5);
        assert_eq!((c.multiplicator_rank(), c.nucleus_rank()), (3, 3));
        assert!(c.cover().is_consistent());
        assert_eq!(
            c.attached_relations(),
            &[Relation::Power(0), Relation::Power(1), Relation::Commutator(1, 0)]
        );
    }

    #[test]
    fn cover_structure() {
        for text in [presentations::H4, presentations::H6, presentations::D4, presentations::Q8, presentations::C2XC4] {
            let g = parse_presentation(text).unwrap();
            let c = p_covering_group(&g).unwrap();
            let cov = c.cover();
            assert!(cov.is_consistent());
            assert_eq!(cov.len(), g.len() + c.multiplicator_rank());
            let m = multiplicator(&c);
            // central, elementary abelian
            for x in m.gens() {
                assert!(cov.power_of(x, 2).is_identity());
                for y in cov.generators() {
                    assert!(cov.commutator(x, &y).is_identity());
                }
            }
            let (q, _) = quotient_presentation(cov, &m).unwrap();
            assert!(is_isomorphic(&q, &g).unwrap());
            // the nucleus is P_c of the cover
            let c_class = g.max_weight() as usize;
            let pc = &lower_p_central_series(cov)[c_class];
            assert_eq!(pc.order_log(), c.nucleus_rank());
            for v in c.nucleus().row_vecs() {
                assert!(pc.contains(cov, &c.multiplicator_element(&v)));
            }
        }
    }

    #[test]
    fn terminal_groups_have_trivial_nucleus() {
        let q8 = parse_presentation(presentations::Q8).unwrap();
        assert_eq!(p_covering_group(&q8).unwrap().nucleus_rank(), 0);
        let d4 = parse_presentation(presentations::D4).unwrap();
        assert!(p_covering_group(&d4).unwrap().nucleus_rank() > 0);
    }
}
