use serde::Serialize;

use crate::abelian::AbelianInvariants;
use crate::descend::{locate_descendant, root_automorphisms};
use crate::error::{Error, Result};
use crate::pcp::{Element, PcPresentation};
use crate::structure::{
    abelian_quotient_invariants, class_quotient, derived_series_factors, low_index_subgroups, p_class,
    standardize, Subgroup,
};

/// Largest `log_p |G|` for which center and exponent are computed.
pub const ELEMENT_LIMIT: usize = 14;

/// Isomorphism invariants used to tell groups apart.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Fingerprint {
    pub order_log: usize,
    pub class: usize,
    pub derived: Vec<AbelianInvariants>,
    /// Invariants of the subgroups of index `p` and `p^2`, sorted.
    pub index_p: Vec<AbelianInvariants>,
    pub index_p2: Vec<AbelianInvariants>,
    pub center_log: Option<usize>,
    pub exponent: Option<u128>,
}

pub fn fingerprint(g: &PcPresentation) -> Fingerprint {
    let mut index_p = Vec::new();
    let mut index_p2 = Vec::new();
    for s in low_index_subgroups(g, 2) {
        match s.index_log() {
            1 => index_p.push(abelian_quotient_invariants(g, &s)),
            2 => index_p2.push(abelian_quotient_invariants(g, &s)),
            _ => {}
        }
    }
    index_p.sort();
    index_p2.sort();
    let (center_log, exponent) = if g.len() <= ELEMENT_LIMIT {
        let gens = g.generators();
        let elements = g.elements();
        let center = elements
            .iter()
            .filter(|a| gens.iter().all(|x| g.commutator(a, x).is_identity()))
            .count();
        let exp = elements.iter().map(|a| g.element_order(a)).max().unwrap_or(1);
        let mut log = 0;
        let mut c = center;
        while c > 1 {
            c /= g.prime() as usize;
            log += 1;
        }
        (Some(log), Some(exp))
    } else {
        (None, None)
    };
    Fingerprint {
        order_log: g.len(),
        class: p_class(g),
        derived: derived_series_factors(g),
        index_p,
        index_p2,
        center_log,
        exponent,
    }
}

/// The presentations, as produced by the descendant algorithm from the
/// elementary abelian root, of the quotients `G/P_k(G)` for `k = 1..c`,
/// each with the images of its defining generators under an isomorphism
/// onto the quotient.
pub fn descent_chain(g: &PcPresentation) -> Result<Vec<(PcPresentation, Vec<Element>)>> {
    let g = if g.has_definitions() { g.clone() } else { standardize(g).presentation };
    let d = g.minimal_generators();
    let mut cur = PcPresentation::elementary_abelian(g.prime(), d);
    let mut auts = root_automorphisms(&cur)?;
    let (q1, _) = class_quotient(&g, 1);
    let mut images: Vec<Element> = (0..d).map(|i| q1.generator(i)).collect();
    let mut chain = vec![(cur.clone(), images.clone())];
    for k in 2..=p_class(&g) {
        let (q, _) = class_quotient(&g, k);
        let lifted: Vec<Element> = images.iter().map(|e| e.padded(q.len())).collect();
        let Some((next, imgs)) = locate_descendant(&cur, &auts, &q, &lifted)? else {
            return Err(Error::NotLocated(format!("class-{k} quotient of order p^{}", q.len())));
        };
        cur = next.presentation;
        auts = next.auts.expect("kept descendants carry automorphisms");
        images = imgs;
        chain.push((cur.clone(), images.clone()));
    }
    Ok(chain)
}

/// A named check with its outcome.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), ok, detail: detail.into() }
    }
}

pub(crate) fn has_subgroup_aqi(g: &PcPresentation, index_log: usize, aqi: &AbelianInvariants) -> bool {
    low_index_subgroups(g, index_log)
        .iter()
        .any(|s| s.index_log() == index_log && abelian_quotient_invariants(g, s) == *aqi)
}

pub(crate) fn frattini_aqi(g: &PcPresentation) -> AbelianInvariants {
    let phi = crate::structure::frattini_subgroup(g, &Subgroup::whole(g));
    abelian_quotient_invariants(g, &phi)
}
