use std::sync::Arc;

use super::{frattini_subgroup, intersection, standardize, subgroup_closure, Subgroup};
use crate::error::{Error, Result};
use crate::pcp::{Definition, Element, PcPresentation};

/// Largest `log_p |G|` accepted by [`is_isomorphic`].
pub const ISO_ORDER_LIMIT: usize = 8;

/// A homomorphism given by the images of all pc generators of the source.
#[derive(Clone, Debug)]
pub struct Homomorphism {
    source: Arc<PcPresentation>,
    target: Arc<PcPresentation>,
    images: Vec<Element>,
}

impl Homomorphism {
    /// Checks that every relation of the source is preserved.
    pub fn new(source: PcPresentation, target: PcPresentation, images: Vec<Element>) -> Result<Self> {
        if images.len() != source.len() || images.iter().any(|e| e.len() != target.len()) {
            return Err(Error::NotHomomorphism("image list has the wrong shape".into()));
        }
        if let Some(bad) = broken_relation(&source, &target, &images) {
            return Err(Error::NotHomomorphism(bad));
        }
        Ok(Self::new_unchecked(source, target, images))
    }

    pub(crate) fn new_unchecked(source: PcPresentation, target: PcPresentation, images: Vec<Element>) -> Self {
        Homomorphism { source: Arc::new(source), target: Arc::new(target), images }
    }

    /// Builds the map from images of the weight-one generators, extending
    /// along the definitions of the source.
    pub fn from_generator_images(source: PcPresentation, target: PcPresentation, gens: &[Element]) -> Result<Self> {
        let images = extend_images(&source, &target, gens)?;
        Self::new(source, target, images)
    }

    pub fn source(&self) -> &PcPresentation {
        &self.source
    }

    pub fn target(&self) -> &PcPresentation {
        &self.target
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    pub fn apply(&self, a: &Element) -> Element {
        eval(&self.target, &self.images, a)
    }

    pub fn image(&self, s: &Subgroup) -> Subgroup {
        let gens: Vec<Element> = s.gens().iter().map(|g| self.apply(g)).collect();
        subgroup_closure(&self.target, &gens)
    }

    pub fn image_of_whole(&self) -> Subgroup {
        subgroup_closure(&self.target, &self.images)
    }

    pub fn is_surjective(&self) -> bool {
        self.image_of_whole().order_log() == self.target.len()
    }

    pub fn kernel(&self) -> Subgroup {
        self.preimage(&Subgroup::trivial(&self.target))
    }

    /// `{q : f(q) in t}`: the kernel together with lifts of the generators
    /// of `t` intersected with the image.
    ///
    /// Lifts come from sifting `(x, 1)` through the graph `{(f(q), q)}`,
    /// a subgroup of `target x source` with the target coordinates first.
    pub fn preimage(&self, t: &Subgroup) -> Subgroup {
        let nt = self.target.len();
        let ns = self.source.len();
        let d = direct_product(&self.target, &self.source);
        let graph: Vec<Element> = (0..ns)
            .map(|k| {
                let mut v = self.images[k].0.clone();
                v.extend(self.source.generator(k).0);
                Element(v)
            })
            .collect();
        let graph = subgroup_closure(&d, &graph);
        let mut gens: Vec<Element> = graph
            .gens()
            .iter()
            .filter(|g| g.leading().unwrap() >= nt)
            .map(|g| Element(g.0[nt..].to_vec()))
            .collect();
        let image = self.image_of_whole();
        let wanted = if t.gens().iter().all(|x| image.contains(&self.target, x)) {
            t.clone()
        } else {
            intersection(&self.target, t, &image)
        };
        for x in wanted.gens() {
            let r = graph.reduce(&d, &x.padded(nt + ns));
            debug_assert!(r.0[..nt].iter().all(|&e| e == 0), "image elements sift to the source part");
            gens.push(self.source.inverse(&Element(r.0[nt..].to_vec())));
        }
        subgroup_closure(&self.source, &gens)
    }

    /// `self` followed by `g`.
    pub fn then(&self, g: &Homomorphism) -> Homomorphism {
        let images = self.images.iter().map(|e| g.apply(e)).collect();
        Homomorphism { source: self.source.clone(), target: g.target.clone(), images }
    }
}

/// `a^e` evaluated with generator images: `prod img_k^{e_k}`.
pub(crate) fn eval(target: &PcPresentation, images: &[Element], a: &Element) -> Element {
    let mut out = target.identity();
    for (k, &e) in a.exponents().iter().enumerate() {
        if e != 0 {
            out = target.multiply(&out, &target.power_of(&images[k], e as u64));
        }
    }
    out
}

fn broken_relation(source: &PcPresentation, target: &PcPresentation, images: &[Element]) -> Option<String> {
    let p = source.prime() as u64;
    for i in 0..source.len() {
        if target.power_of(&images[i], p) != eval(target, images, source.power_rhs(i)) {
            return Some(format!("x{}^{}", i + 1, p));
        }
    }
    for j in 0..source.len() {
        for i in 0..j {
            if target.commutator(&images[j], &images[i]) != eval(target, images, source.comm_rhs(j, i)) {
                return Some(format!("[x{},x{}]", j + 1, i + 1));
            }
        }
    }
    None
}

fn extend_images(source: &PcPresentation, target: &PcPresentation, gens: &[Element]) -> Result<Vec<Element>> {
    let d = source.minimal_generators();
    if !source.has_definitions() {
        let k = (0..source.len()).find(|&k| k >= d && source.definitions()[k].is_none()).unwrap_or(d);
        return Err(Error::MissingDefinition(k + 1));
    }
    if gens.len() != d {
        return Err(Error::NotHomomorphism(format!("expected {d} generator images, got {}", gens.len())));
    }
    let p = source.prime() as u64;
    let mut images: Vec<Element> = gens.to_vec();
    for k in d..source.len() {
        let img = match source.definitions()[k].unwrap() {
            Definition::Power(i) => target.power_of(&images[i], p),
            Definition::Commutator(j, i) => target.commutator(&images[j], &images[i]),
        };
        images.push(img);
    }
    Ok(images)
}

/// `a x b` with the generators of `a` first.
pub(crate) fn direct_product(a: &PcPresentation, b: &PcPresentation) -> PcPresentation {
    let (na, nb) = (a.len(), b.len());
    let n = na + nb;
    let shift = |e: &Element| {
        let mut v = vec![0u8; na];
        v.extend_from_slice(e.exponents());
        Element(v)
    };
    let mut power: Vec<Element> = (0..na).map(|i| a.power_rhs(i).padded(n)).collect();
    power.extend((0..nb).map(|i| shift(b.power_rhs(i))));
    let comm: Vec<Vec<Element>> = (0..n)
        .map(|j| {
            (0..j)
                .map(|i| {
                    if j < na {
                        a.comm_rhs(j, i).padded(n)
                    } else if i < na {
                        Element::identity(n)
                    } else {
                        shift(b.comm_rhs(j - na, i - na))
                    }
                })
                .collect()
        })
        .collect();
    PcPresentation::from_relations(a.prime(), n, power, comm).expect("product of valid presentations")
}

/// Visits surjections `q -> p` in lexicographic order of the weight-one
/// generator images; the visitor returns `false` to stop.
///
/// A generator image must have order dividing that of the generator, or
/// equal to it when `bijective` (the caller then knows `|q| = |p|`).
fn for_each_surjection(
    q: &PcPresentation,
    p: &PcPresentation,
    bijective: bool,
    visit: &mut dyn FnMut(Vec<Element>) -> bool,
) {
    if q.prime() != p.prime() {
        return;
    }
    let std_q;
    let (src, back): (&PcPresentation, Option<&[Element]>) = if q.has_definitions() {
        (q, None)
    } else {
        std_q = standardize(q);
        (&std_q.presentation, Some(&std_q.to_new[..]))
    };
    let d = src.minimal_generators();
    let phi = frattini_subgroup(p, &Subgroup::whole(p));
    let rank = p.len() - phi.order_log();
    if rank > d {
        return;
    }
    let elements = p.elements();
    let phi_leads = phi.leads();
    let top: Vec<usize> = (0..p.len()).filter(|k| !phi_leads.contains(k)).collect();
    let frattini_rows: Vec<Vec<u8>> =
        elements.iter().map(|g| top.iter().map(|&k| phi.reduce(p, g).0[k]).collect()).collect();
    let orders: Vec<u128> = elements.iter().map(|g| p.element_order(g)).collect();
    let choices: Vec<Vec<usize>> = (0..d)
        .map(|i| {
            let o = src.element_order(&src.generator(i));
            (0..elements.len()).filter(|&e| if bijective { orders[e] == o } else { o % orders[e] == 0 }).collect()
        })
        .collect();
    if choices.iter().any(|c| c.is_empty()) {
        return;
    }
    let mut idx = vec![0usize; d];
    loop {
        let picked: Vec<usize> = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
        let gens: Vec<Element> = picked.iter().map(|&i| elements[i].clone()).collect();
        // Frattini precheck: images must span P/Phi(P)
        let rows: Vec<Vec<u8>> = picked.iter().map(|&i| frattini_rows[i].clone()).collect();
        let spans = crate::linalg::MatGFp::from_rows(p.prime(), top.len(), &rows).rank() == rank;
        if spans {
            let images = extend_images(src, p, &gens).expect("standardized source has definitions");
            if broken_relation(src, p, &images).is_none() {
                let full = match back {
                    None => images,
                    Some(to_new) => to_new.iter().map(|e| eval(p, &images, e)).collect(),
                };
                if !visit(full) {
                    return;
                }
            }
        }
        let mut k = d;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Every surjective homomorphism `q -> p`.
pub fn all_surjections(q: &PcPresentation, p: &PcPresentation) -> Vec<Homomorphism> {
    let mut out = Vec::new();
    let (qa, pa) = (Arc::new(q.clone()), Arc::new(p.clone()));
    for_each_surjection(q, p, false, &mut |images| {
        out.push(Homomorphism { source: qa.clone(), target: pa.clone(), images });
        true
    });
    out
}

pub fn has_quotient(q: &PcPresentation, p: &PcPresentation) -> bool {
    p.len() <= q.len() && any_surjection(q, p, false)
}

fn any_surjection(q: &PcPresentation, p: &PcPresentation, bijective: bool) -> bool {
    let mut found = false;
    for_each_surjection(q, p, bijective, &mut |_| {
        found = true;
        false
    });
    found
}

/// Brute-force isomorphism test, limited to order `p^ISO_ORDER_LIMIT`.
pub fn is_isomorphic(q: &PcPresentation, p: &PcPresentation) -> Result<bool> {
    let n = q.len().max(p.len());
    if n > ISO_ORDER_LIMIT {
        return Err(Error::SizeLimit { limit: ISO_ORDER_LIMIT, n });
    }
    if q.len() != p.len() || q.prime() != p.prime() {
        return Ok(false);
    }
    if super::abelian_quotient_invariants(q, &Subgroup::whole(q))
        != super::abelian_quotient_invariants(p, &Subgroup::whole(p))
    {
        return Ok(false);
    }
    Ok(any_surjection(q, p, true))
}
