//! Descendant search constrained by abelian quotient invariants.
//!
//! A pair is a group together with, for each constraint lattice, a family
//! of subgroups that are preimages of the lattice's subgroups under some
//! surjection. Each level replaces every group by its immediate
//! descendants, pulls the families back along all surjections, and keeps a
//! pair when every constrained subgroup has invariants that are a quotient
//! of the target. A group is a candidate when one of its pairs meets every
//! known target exactly.

mod config;
mod export;

pub use config::{
    run_config, Assignment, LatticeConfig, NamedPresentation, RootsConfig, SearchConfig, StageConfig, StageRun,
    SubgroupAqiConfig, SubgroupConfig,
};
pub use export::{export_candidates, export_tree, report, tree_vertices, TreeMode};

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::abelian::AbelianInvariants;
use crate::autgroup::{AutGroup, Automorphism};
use crate::descend::{descendants_filtered, root_automorphisms, AutSet, Limits};
use crate::error::{Error, Result};
use crate::pcp::{Element, PcPresentation};
use crate::structure::{
    abelian_quotient_invariants, all_surjections, has_quotient, low_index_subgroups, standardize, Subgroup,
};

/// Target invariants of a constrained subgroup; `Unknown` slots only take
/// part in bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    Known(AbelianInvariants),
    Unknown,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Known(a) => write!(f, "{a}"),
            Target::Unknown => write!(f, "unknown"),
        }
    }
}

impl FromStr for Target {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "unknown" {
            Ok(Target::Unknown)
        } else {
            s.parse().map(Target::Known).map_err(|_| Error::Config(format!("bad target {s:?}")))
        }
    }
}

impl serde::Serialize for Target {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Target {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug)]
pub struct LatticeEntry {
    pub label: String,
    pub subgroup: Subgroup,
    pub target: Target,
}

/// Subgroups of a reference quotient with their target invariants.
#[derive(Clone, Debug)]
pub struct ConstraintLattice {
    pub label: String,
    pub reference: PcPresentation,
    pub entries: Vec<LatticeEntry>,
}

impl ConstraintLattice {
    pub fn unconstrained(label: &str, reference: PcPresentation) -> Self {
        ConstraintLattice { label: label.into(), reference, entries: Vec::new() }
    }
}

/// How the first families are attached to a root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Attach {
    /// The root is the reference quotient; the lattice subgroups are used
    /// as they are.
    Direct,
    /// One family per surjection from the root onto the reference.
    Surjective,
}

/// Subgroup families of one pair, indexed by lattice, then entry.
pub type Family = Vec<Vec<Subgroup>>;

/// Pulls every family of the lattices back to `root`.
pub fn init_pairs(root: &PcPresentation, lattices: &[ConstraintLattice], attach: Attach) -> Result<Vec<Family>> {
    let mut choices: Vec<Vec<Vec<Subgroup>>> = Vec::new();
    for lat in lattices {
        let fams: BTreeSet<Vec<Subgroup>> = match attach {
            Attach::Direct => {
                if *root != lat.reference {
                    return Err(Error::Config(format!(
                        "lattice {} must use the root as its reference for direct attachment",
                        lat.label
                    )));
                }
                BTreeSet::from([lat.entries.iter().map(|e| e.subgroup.clone()).collect()])
            }
            Attach::Surjective => all_surjections(root, &lat.reference)
                .iter()
                .map(|f| lat.entries.iter().map(|e| f.preimage(&e.subgroup)).collect())
                .collect(),
        };
        if fams.is_empty() {
            return Err(Error::NoSurjection(lat.label.clone()));
        }
        choices.push(fams.into_iter().collect());
    }
    let mut out: Vec<Family> = vec![Vec::new()];
    for c in choices {
        out = out.into_iter().flat_map(|f| c.iter().map(move |x| [f.clone(), vec![x.clone()]].concat())).collect();
    }
    Ok(out)
}

/// `None` if some subgroup fails the quotient test, otherwise whether all
/// known targets are met exactly.
fn assess(
    g: &PcPresentation,
    family: &Family,
    lattices: &[ConstraintLattice],
    cache: &mut HashMap<Subgroup, AbelianInvariants>,
) -> Option<bool> {
    let mut exact = true;
    for (lat, subs) in lattices.iter().zip(family) {
        for (e, s) in lat.entries.iter().zip(subs) {
            let Target::Known(t) = &e.target else { continue };
            let a = cache.entry(s.clone()).or_insert_with(|| abelian_quotient_invariants(g, s));
            if !a.is_quotient_of(t) {
                return None;
            }
            exact &= a == t;
        }
    }
    Some(exact)
}

/// Full automorphism group of a small group by exhaustive search.
pub fn automorphisms_by_search(g: &PcPresentation) -> Result<AutSet> {
    if !g.has_definitions() {
        return Err(Error::MissingDefinition(g.minimal_generators() + 1));
    }
    let d = g.minimal_generators();
    if d == g.len() {
        return root_automorphisms(g);
    }
    let all = all_surjections(g, g);
    let mut grp = AutGroup::new(g);
    for f in &all {
        if grp.order().value(g.prime()) == all.len() as u128 {
            break;
        }
        grp.add(&Automorphism::from_images_unchecked(g, f.images()[..d].to_vec()));
    }
    Ok(AutSet { gens: grp.generators().to_vec(), order: all.len() as u128 })
}

/// A root with a presentation carrying definitions.
pub fn prepare_root(g: &PcPresentation) -> PcPresentation {
    if g.has_definitions() {
        g.clone()
    } else {
        standardize(g).presentation
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub limits: Limits,
    pub jobs: usize,
    /// Enumerate surjections onto the parent explicitly instead of through
    /// automorphism orbits; slower, used to cross-check.
    pub exhaustive_surjections: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            limits: Limits { max_order_log: Some(14), max_class: Some(8) },
            jobs: 1,
            exhaustive_surjections: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Node {
    pub id: usize,
    pub parent: Option<usize>,
    pub label: String,
    pub presentation: PcPresentation,
    pub class: u32,
    pub step: usize,
    pub pairs: usize,
    pub candidate: bool,
    /// Known once the node has been expanded.
    pub nucleus_rank: Option<usize>,
    pub multiplicator_rank: Option<usize>,
    /// Descendants beyond the limits were skipped.
    pub capped: bool,
    pub children: Vec<usize>,
    pub(crate) families: Vec<Family>,
    pub(crate) auts: Option<AutSet>,
}

impl Node {
    pub fn families(&self) -> &[Family] {
        &self.families
    }

    pub fn automorphisms(&self) -> Option<&AutSet> {
        self.auts.as_ref()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelStats {
    pub class: u32,
    pub groups: usize,
    pub pairs: usize,
    pub candidates: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Terminated,
    CapHit,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Terminated => "terminated",
            Status::CapHit => "cap-hit",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub nodes: Vec<Node>,
    pub roots: Vec<usize>,
    pub levels: Vec<LevelStats>,
    pub status: Status,
    pub lattices: Vec<ConstraintLattice>,
}

pub struct Root {
    pub name: String,
    pub presentation: PcPresentation,
    pub auts: Option<AutSet>,
}

struct Expansion {
    nucleus_rank: usize,
    multiplicator_rank: usize,
    capped: bool,
    children: Vec<(crate::descend::Descendant, Vec<Family>, bool)>,
}

fn family_orbit(g: &PcPresentation, auts: &AutSet, fams: &[Family]) -> Vec<Family> {
    let mut images: HashMap<(usize, Subgroup), Subgroup> = HashMap::new();
    let mut seen: BTreeSet<Family> = fams.iter().cloned().collect();
    let mut queue: Vec<Family> = seen.iter().cloned().collect();
    while let Some(f) = queue.pop() {
        for (k, a) in auts.gens.iter().enumerate() {
            let img: Family = f
                .iter()
                .map(|l| {
                    l.iter()
                        .map(|s| images.entry((k, s.clone())).or_insert_with(|| a.apply_subgroup(g, s)).clone())
                        .collect()
                })
                .collect();
            if seen.insert(img.clone()) {
                queue.push(img);
            }
        }
    }
    seen.into_iter().collect()
}

/// Preimage of `t` under the projection onto the first `t.n` generators.
fn pull_back(h: &PcPresentation, parent_len: usize, t: &Subgroup) -> Subgroup {
    let mut gens: Vec<Element> = t.gens().iter().map(|g| g.padded(h.len())).collect();
    gens.extend((parent_len..h.len()).map(|k| h.generator(k)));
    Subgroup::from_canonical(h.len(), gens)
}

fn expand(node: &Node, lattices: &[ConstraintLattice], opts: &SearchOptions) -> Result<Expansion> {
    let g = &node.presentation;
    let auts = node.auts.as_ref().expect("automorphisms of an expanded node");
    let tuples = if opts.exhaustive_surjections { Vec::new() } else { family_orbit(g, auts, &node.families) };
    let mut found: Vec<(Vec<Family>, bool)> = Vec::new();
    let mut keep = |d: &crate::descend::Descendant| -> bool {
        let h = &d.presentation;
        let mut cache = HashMap::new();
        let mut kept: BTreeSet<Family> = BTreeSet::new();
        let mut exact = false;
        let mut consider = |f: Family, kept: &mut BTreeSet<Family>| {
            if kept.contains(&f) {
                return;
            }
            if let Some(e) = assess(h, &f, lattices, &mut cache) {
                exact |= e;
                kept.insert(f);
            }
        };
        if opts.exhaustive_surjections {
            for f in all_surjections(h, g) {
                for fam in &node.families {
                    let pulled: Family =
                        fam.iter().map(|l| l.iter().map(|s| f.preimage(s)).collect()).collect();
                    consider(pulled, &mut kept);
                }
            }
        } else {
            for t in &tuples {
                let pulled: Family =
                    t.iter().map(|l| l.iter().map(|s| pull_back(h, g.len(), s)).collect()).collect();
                consider(pulled, &mut kept);
            }
        }
        if kept.is_empty() {
            return false;
        }
        found.push((kept.into_iter().collect(), exact));
        true
    };
    let out = descendants_filtered(g, auts, opts.limits, &mut keep)?;
    let children = out.descendants.into_iter().zip(found).map(|(d, (f, e))| (d, f, e)).collect();
    Ok(Expansion {
        nucleus_rank: out.nucleus_rank,
        multiplicator_rank: out.multiplicator_rank,
        capped: out.capped,
        children,
    })
}

/// Runs the level-by-level search until no pairs remain.
pub fn search(roots: Vec<Root>, lattices: &[ConstraintLattice], attach: Attach, opts: &SearchOptions) -> Result<SearchResult> {
    // no pool for a single job, so the search also runs without threads
    let pool = if opts.jobs > 1 {
        let p = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        Some(p)
    } else {
        None
    };
    let mut nodes: Vec<Node> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    let mut root_ids = Vec::new();
    for r in roots {
        let g = prepare_root(&r.presentation);
        let auts = match r.auts {
            Some(a) if g == r.presentation => a,
            _ => automorphisms_by_search(&g)?,
        };
        let mut cache = HashMap::new();
        let mut families = Vec::new();
        let mut exact = false;
        for f in init_pairs(&g, lattices, attach)? {
            if let Some(e) = assess(&g, &f, lattices, &mut cache) {
                exact |= e;
                families.push(f);
            }
        }
        let id = nodes.len();
        root_ids.push(id);
        let class = g.max_weight();
        if !families.is_empty() {
            current.push(id);
        }
        nodes.push(Node {
            id,
            parent: None,
            label: r.name,
            presentation: g,
            class,
            step: 0,
            pairs: families.len(),
            candidate: exact,
            nucleus_rank: None,
            multiplicator_rank: None,
            capped: false,
            children: Vec::new(),
            families,
            auts: Some(auts),
        });
    }
    let mut status = Status::Terminated;
    while !current.is_empty() {
        let results: Vec<Result<Expansion>> = match &pool {
            Some(pool) => pool.install(|| current.par_iter().map(|&id| expand(&nodes[id], lattices, opts)).collect()),
            None => current.iter().map(|&id| expand(&nodes[id], lattices, opts)).collect(),
        };
        let mut next = Vec::new();
        for (&pid, res) in current.iter().zip(results) {
            let ex = res?;
            let parent = &mut nodes[pid];
            parent.nucleus_rank = Some(ex.nucleus_rank);
            parent.multiplicator_rank = Some(ex.multiplicator_rank);
            parent.capped = ex.capped;
            parent.auts = None;
            parent.families.shrink_to_fit();
            if ex.capped {
                status = Status::CapHit;
            }
            let plabel = parent.label.clone();
            let class = parent.class + 1;
            for (d, families, exact) in ex.children {
                let id = nodes.len();
                nodes[pid].children.push(id);
                next.push(id);
                nodes.push(Node {
                    id,
                    parent: Some(pid),
                    label: format!("{plabel}/{}-{}", d.step, d.orbit + 1),
                    presentation: d.presentation,
                    class,
                    step: d.step,
                    pairs: families.len(),
                    candidate: exact,
                    nucleus_rank: None,
                    multiplicator_rank: None,
                    capped: false,
                    children: Vec::new(),
                    families,
                    auts: d.auts,
                });
            }
        }
        current = next;
    }
    let mut levels: Vec<LevelStats> = Vec::new();
    for n in &nodes {
        let pos = match levels.iter().position(|l| l.class == n.class) {
            Some(i) => i,
            None => {
                levels.push(LevelStats { class: n.class, groups: 0, pairs: 0, candidates: 0 });
                levels.len() - 1
            }
        };
        levels[pos].groups += 1;
        levels[pos].pairs += n.pairs;
        levels[pos].candidates += n.candidate as usize;
    }
    levels.sort_by_key(|l| l.class);
    Ok(SearchResult { nodes, roots: root_ids, levels, status, lattices: lattices.to_vec() })
}

impl SearchResult {
    pub fn candidates(&self) -> Vec<usize> {
        self.nodes.iter().filter(|n| n.candidate).map(|n| n.id).collect()
    }

    pub fn at_class(&self, class: u32) -> Vec<usize> {
        self.nodes.iter().filter(|n| n.class == class).map(|n| n.id).collect()
    }

    /// Whether `pred` holds somewhere in the subtree below and including `id`.
    pub fn subtree_any(&self, id: usize, pred: &dyn Fn(&Node) -> bool) -> bool {
        let mut stack = vec![id];
        while let Some(k) = stack.pop() {
            if pred(&self.nodes[k]) {
                return true;
            }
            stack.extend(&self.nodes[k].children);
        }
        false
    }

    pub fn ancestors(&self, id: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut k = self.nodes[id].parent;
        while let Some(p) = k {
            out.push(p);
            k = self.nodes[p].parent;
        }
        out
    }

    /// Groups of the given class that may still be the quotient sought:
    /// their subtree contains a candidate or was cut off by the limits.
    pub fn survivors(&self, class: u32) -> Vec<usize> {
        self.at_class(class)
            .into_iter()
            .filter(|&id| self.subtree_any(id, &|n| n.candidate || n.capped))
            .collect()
    }

    /// Groups of the given class with at least one immediate descendant.
    pub fn capable(&self, class: u32) -> Vec<usize> {
        self.at_class(class).into_iter().filter(|&id| self.nodes[id].nucleus_rank.is_some_and(|r| r > 0)).collect()
    }

    /// Groups of the given class that have descendants in the lists.
    pub fn with_children(&self, class: u32) -> Vec<usize> {
        self.at_class(class).into_iter().filter(|&id| !self.nodes[id].children.is_empty()).collect()
    }
}

/// Indices of the groups having every listed group as a quotient.
pub fn filter_required_quotients(groups: &[PcPresentation], required: &[PcPresentation]) -> Vec<usize> {
    (0..groups.len()).filter(|&i| required.iter().all(|k| has_quotient(&groups[i], k))).collect()
}

/// Indices of the groups with a subgroup of index `p^index_log` whose
/// invariants equal `aqi`.
pub fn filter_subgroup_aqi(groups: &[PcPresentation], index_log: usize, aqi: &AbelianInvariants) -> Vec<usize> {
    (0..groups.len())
        .filter(|&i| {
            let g = &groups[i];
            low_index_subgroups(g, index_log)
                .iter()
                .any(|s| s.index_log() == index_log && abelian_quotient_invariants(g, s) == *aqi)
        })
        .collect()
}

#[cfg(test)]
mod tests;
