//! Rewriting a presentation so that its pc sequence refines the lower
//! exponent-p central series and every generator beyond the first layer
//! is defined by a single power or commutator relation.

use super::{lower_p_central_series, Subgroup};
use crate::linalg::MatGFp;
use crate::pcp::{relation_order, Definition, Element, PcPresentation, Relation};

pub struct Standardized {
    pub presentation: PcPresentation,
    /// Images of the old generators, as elements of the new presentation.
    pub to_new: Vec<Element>,
    /// The new generators, as elements of the old presentation.
    pub to_old: Vec<Element>,
}

/// Coordinates on the elementary abelian layer `A/B`.
struct Layer {
    table: Vec<(Element, Option<usize>)>,
    dim: usize,
}

impl Layer {
    fn new(a: &Subgroup, b: &Subgroup) -> Self {
        let bl = b.leads();
        let mut table: Vec<(Element, Option<usize>)> = b.gens().iter().map(|g| (g.clone(), None)).collect();
        let mut dim = 0;
        for g in a.gens() {
            if !bl.contains(&g.leading().unwrap()) {
                table.push((g.clone(), Some(dim)));
                dim += 1;
            }
        }
        table.sort_by_key(|(g, _)| g.leading());
        // re-number coordinates in leading order
        let mut c = 0;
        for (_, slot) in table.iter_mut() {
            if slot.is_some() {
                *slot = Some(c);
                c += 1;
            }
        }
        Layer { table, dim }
    }

    fn coords(&self, pc: &PcPresentation, a: &Element) -> Vec<u8> {
        let p = pc.prime();
        let mut e = a.clone();
        let mut out = vec![0u8; self.dim];
        for (g, slot) in &self.table {
            let l = g.leading().unwrap();
            let c = e.exponents()[l];
            if c != 0 {
                if let Some(s) = slot {
                    out[*s] = c;
                }
                e = pc.multiply(&pc.power_of(g, (p - c) as u64), &e);
            }
        }
        out
    }
}

pub fn standardize(pc: &PcPresentation) -> Standardized {
    let p = pc.prime();
    let series = lower_p_central_series(pc);
    let c = series.len() - 1;
    let layers: Vec<Layer> = (1..=c).map(|w| Layer::new(&series[w - 1], &series[w])).collect();

    let mut ys: Vec<Element> = Vec::new();
    let mut weights: Vec<u32> = Vec::new();
    let mut defs: Vec<Option<Definition>> = Vec::new();
    let mut inverses: Vec<MatGFp> = Vec::new();

    for (wi, layer) in layers.iter().enumerate() {
        let w = wi as u32 + 1;
        let candidates: Vec<(Element, Option<Definition>)> = if w == 1 {
            layer.table.iter().filter(|(_, s)| s.is_some()).map(|(g, _)| (g.clone(), None)).collect()
        } else {
            relation_order(ys.len())
                .into_iter()
                .filter_map(|r| match r {
                    Relation::Power(i) if weights[i] == w - 1 => {
                        Some((pc.power_of(&ys[i], p as u64), Some(Definition::Power(i))))
                    }
                    Relation::Commutator(j, i) if weights[j] == w - 1 && weights[i] == 1 => {
                        Some((pc.commutator(&ys[j], &ys[i]), Some(Definition::Commutator(j, i))))
                    }
                    _ => None,
                })
                .collect()
        };
        let mut chosen = MatGFp::zeros(p, 0, layer.dim);
        for (e, def) in candidates {
            if chosen.rows() == layer.dim {
                break;
            }
            let mut trial = chosen.clone();
            trial.push_row(&layer.coords(pc, &e));
            if trial.rank() > chosen.rows() {
                chosen = trial;
                ys.push(e);
                weights.push(w);
                defs.push(def);
            }
        }
        assert_eq!(chosen.rows(), layer.dim, "layer {w} not spanned by definitions");
        inverses.push(chosen.inverse().expect("independent rows"));
    }

    let n = ys.len();
    let express = |a: &Element| -> Element {
        let mut e = a.clone();
        let mut out = vec![0u8; n];
        let mut start = 0;
        for (wi, layer) in layers.iter().enumerate() {
            let v = layer.coords(pc, &e);
            let coeff = inverses[wi].vec_mul(&v);
            let mut t = pc.identity();
            for (k, &a) in coeff.iter().enumerate() {
                out[start + k] = a;
                if a != 0 {
                    t = pc.multiply(&t, &pc.power_of(&ys[start + k], a as u64));
                }
            }
            e = pc.multiply(&pc.inverse(&t), &e);
            start += layer.dim;
        }
        debug_assert!(e.is_identity());
        Element::from_exponents(out)
    };

    let power: Vec<Element> = ys.iter().map(|y| express(&pc.power_of(y, p as u64))).collect();
    let comm: Vec<Vec<Element>> =
        (0..n).map(|j| (0..j).map(|i| express(&pc.commutator(&ys[j], &ys[i]))).collect()).collect();
    let presentation = PcPresentation::from_parts(p, n, power, comm, weights, defs).expect("weighted relations");
    let to_new = pc.generators().iter().map(&express).collect();
    Standardized { presentation, to_new, to_old: ys }
}
