use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{
    filter_required_quotients, filter_subgroup_aqi, search, Attach, ConstraintLattice, LatticeEntry, Root,
    SearchOptions, SearchResult, Target,
};
use crate::abelian::AbelianInvariants;
use crate::error::{Error, Result};
use crate::pcp::{parse_element, parse_presentation, PcPresentation};
use crate::structure::subgroup_closure;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NamedPresentation {
    pub name: String,
    pub presentation: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RootsConfig {
    /// Only `"previous-survivors"` is accepted.
    Keyword(String),
    Explicit(Vec<NamedPresentation>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubgroupConfig {
    pub label: String,
    /// Generator words in the reference presentation.
    pub gens: Vec<String>,
    pub target: Target,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeConfig {
    pub label: String,
    pub reference: String,
    pub subgroups: Vec<SubgroupConfig>,
    /// Groups of subgroup labels whose targets may be permuted among
    /// themselves.
    #[serde(default)]
    pub assign: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubgroupAqiConfig {
    pub index_log: usize,
    pub aqi: AbelianInvariants,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StageConfig {
    pub name: String,
    pub roots: RootsConfig,
    pub attach: Attach,
    #[serde(default)]
    pub lattices: Vec<LatticeConfig>,
    #[serde(default)]
    pub required_quotients: Vec<NamedPresentation>,
    #[serde(default)]
    pub required_subgroup_aqi: Vec<SubgroupAqiConfig>,
    /// Class at which surviving groups are collected for the next stage.
    #[serde(default)]
    pub survivor_class: Option<u32>,
    /// Limits for this stage, tighter than the global ones.
    #[serde(default)]
    pub max_order: Option<usize>,
    #[serde(default)]
    pub max_class: Option<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchConfig {
    #[serde(default)]
    pub name: String,
    pub prime: u8,
    /// Largest `log_p` of the order explored.
    #[serde(default)]
    pub max_order: Option<usize>,
    #[serde(default)]
    pub max_class: Option<u32>,
    pub stages: Vec<StageConfig>,
}

/// One choice of targets: `targets[stage][lattice][entry]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub index: usize,
    pub targets: Vec<Vec<Vec<Target>>>,
}

impl Assignment {
    pub fn describe(&self, config: &SearchConfig) -> String {
        let mut parts = Vec::new();
        for (st, stage) in config.stages.iter().zip(&self.targets) {
            for (lat, ts) in st.lattices.iter().zip(stage) {
                let slots: BTreeSet<&str> = lat.assign.iter().flatten().map(String::as_str).collect();
                for (sub, t) in lat.subgroups.iter().zip(ts) {
                    if slots.contains(sub.label.as_str()) {
                        parts.push(format!("{}.{}.{}={}", st.name, lat.label, sub.label, t));
                    }
                }
            }
        }
        if parts.is_empty() {
            "as given".into()
        } else {
            parts.join(" ")
        }
    }
}

/// Distinct orderings of `v`, the given order first, then the others in
/// lexicographic order.
fn distinct_permutations(v: &[Target]) -> Vec<Vec<Target>> {
    let mut cur = v.to_vec();
    cur.sort();
    let mut out = vec![v.to_vec()];
    loop {
        if cur != v {
            out.push(cur.clone());
        }
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..cur.len()).rev().find(|&j| cur[i - 1] < cur[j]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

impl SearchConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: SearchConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    fn validate(&self) -> Result<()> {
        if self.stages.is_empty() {
            return Err(Error::Config("no stages".into()));
        }
        for (k, st) in self.stages.iter().enumerate() {
            if let RootsConfig::Keyword(w) = &st.roots {
                if w != "previous-survivors" {
                    return Err(Error::Config(format!("stage {}: unknown roots keyword {w:?}", st.name)));
                }
                if k == 0 {
                    return Err(Error::Config("the first stage needs explicit roots".into()));
                }
            }
            for lat in &st.lattices {
                let labels: Vec<&str> = lat.subgroups.iter().map(|s| s.label.as_str()).collect();
                for l in lat.assign.iter().flatten() {
                    if !labels.contains(&l.as_str()) {
                        return Err(Error::Config(format!("lattice {}: unknown subgroup {l:?}", lat.label)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Every assignment of targets allowed by the `assign` groups.
    pub fn assignments(&self) -> Vec<Assignment> {
        let base: Vec<Vec<Vec<Target>>> = self
            .stages
            .iter()
            .map(|st| st.lattices.iter().map(|l| l.subgroups.iter().map(|s| s.target.clone()).collect()).collect())
            .collect();
        let mut out = vec![base];
        for (si, st) in self.stages.iter().enumerate() {
            for (li, lat) in st.lattices.iter().enumerate() {
                for group in &lat.assign {
                    let pos: Vec<usize> =
                        group.iter().map(|l| lat.subgroups.iter().position(|s| &s.label == l).unwrap()).collect();
                    let given: Vec<Target> = pos.iter().map(|&p| lat.subgroups[p].target.clone()).collect();
                    let perms = distinct_permutations(&given);
                    out = out
                        .into_iter()
                        .flat_map(|a| {
                            let pos = &pos;
                            perms.iter().map(move |perm| {
                                let mut a = a.clone();
                                for (&p, t) in pos.iter().zip(perm) {
                                    a[si][li][p] = t.clone();
                                }
                                a
                            })
                        })
                        .collect();
                }
            }
        }
        out.into_iter().enumerate().map(|(i, targets)| Assignment { index: i + 1, targets }).collect()
    }

    pub fn lattices(&self, stage: usize, assignment: &Assignment) -> Result<Vec<ConstraintLattice>> {
        let mut out = Vec::new();
        for (lat, targets) in self.stages[stage].lattices.iter().zip(&assignment.targets[stage]) {
            let reference = parse_presentation(&lat.reference)?;
            check_prime(&reference, self.prime)?;
            let mut entries = Vec::new();
            for (sub, t) in lat.subgroups.iter().zip(targets) {
                let gens = sub.gens.iter().map(|w| parse_element(&reference, w)).collect::<Result<Vec<_>>>()?;
                entries.push(LatticeEntry {
                    label: sub.label.clone(),
                    subgroup: subgroup_closure(&reference, &gens),
                    target: t.clone(),
                });
            }
            out.push(ConstraintLattice { label: lat.label.clone(), reference, entries });
        }
        Ok(out)
    }
}

fn check_prime(g: &PcPresentation, p: u8) -> Result<()> {
    if g.prime() != p {
        return Err(Error::Config(format!("presentation over p={} in a p={p} search", g.prime())));
    }
    Ok(())
}

/// Outcome of one stage.
#[derive(Clone, Debug)]
pub struct StageRun {
    pub stage: usize,
    pub name: String,
    pub result: SearchResult,
    /// Groups of the survivor class in the lists.
    pub level_groups: Vec<usize>,
    /// Those with at least one immediate descendant.
    pub capable: Vec<usize>,
    /// Those whose subtree holds a candidate or was cut off by the limits.
    pub survivors: Vec<usize>,
    /// Survivors having every required quotient.
    pub filtered_survivors: Vec<usize>,
    /// Candidates meeting every subgroup requirement.
    pub filtered_candidates: Vec<usize>,
    /// The filtered survivors if a survivor class is set, otherwise the
    /// filtered candidates.
    pub passed: Vec<usize>,
}

impl StageRun {
    /// Presentations passed on to a following stage.
    fn outputs(&self) -> Vec<Root> {
        self.passed
            .iter()
            .map(|&id| {
                let n = &self.result.nodes[id];
                Root { name: n.label.clone(), presentation: n.presentation.clone(), auts: None }
            })
            .collect()
    }
}

/// Runs the stages needed for stage `upto` (0-based; all stages if `None`)
/// under one assignment.
pub fn run_config(
    config: &SearchConfig,
    assignment: &Assignment,
    upto: Option<usize>,
    opts: &SearchOptions,
) -> Result<Vec<StageRun>> {
    let last = upto.unwrap_or(config.stages.len() - 1);
    if last >= config.stages.len() {
        return Err(Error::Config(format!("no stage {}", last + 1)));
    }
    let mut first = last;
    while first > 0 && matches!(config.stages[first].roots, RootsConfig::Keyword(_)) {
        first -= 1;
    }
    let mut runs: Vec<StageRun> = Vec::new();
    for k in first..=last {
        let st = &config.stages[k];
        let roots = match &st.roots {
            RootsConfig::Explicit(list) => list
                .iter()
                .map(|r| {
                    let g = parse_presentation(&r.presentation)?;
                    check_prime(&g, config.prime)?;
                    Ok(Root { name: r.name.clone(), presentation: g, auts: None })
                })
                .collect::<Result<Vec<_>>>()?,
            RootsConfig::Keyword(_) => runs.last().map(StageRun::outputs).unwrap_or_default(),
        };
        let mut opts = opts.clone();
        for o in [config.max_order, st.max_order].into_iter().flatten() {
            opts.limits.max_order_log = Some(opts.limits.max_order_log.map_or(o, |m| m.min(o)));
        }
        for c in [config.max_class, st.max_class].into_iter().flatten() {
            opts.limits.max_class = Some(opts.limits.max_class.map_or(c, |m| m.min(c)));
        }
        let lattices = config.lattices(k, assignment)?;
        let result = search(roots, &lattices, st.attach, &opts)?;
        let required = st
            .required_quotients
            .iter()
            .map(|r| parse_presentation(&r.presentation))
            .collect::<Result<Vec<_>>>()?;
        let class = st.survivor_class;
        let level_groups = class.map(|c| result.at_class(c)).unwrap_or_default();
        let capable = class.map(|c| result.capable(c)).unwrap_or_default();
        let survivors = class.map(|c| result.survivors(c)).unwrap_or_default();
        let pres: Vec<PcPresentation> = survivors.iter().map(|&i| result.nodes[i].presentation.clone()).collect();
        let filtered_survivors: Vec<usize> = filter_required_quotients(&pres, &required).into_iter().map(|i| survivors[i]).collect();
        let mut filtered_candidates = result.candidates();
        for req in &st.required_subgroup_aqi {
            let pres: Vec<PcPresentation> =
                filtered_candidates.iter().map(|&i| result.nodes[i].presentation.clone()).collect();
            filtered_candidates = filter_subgroup_aqi(&pres, req.index_log, &req.aqi)
                .into_iter()
                .map(|i| filtered_candidates[i])
                .collect();
        }
        let passed = if st.survivor_class.is_some() { filtered_survivors.clone() } else { filtered_candidates.clone() };
        runs.push(StageRun {
            stage: k,
            name: st.name.clone(),
            result,
            level_groups,
            capable,
            survivors,
            filtered_survivors,
            filtered_candidates,
            passed,
        });
    }
    Ok(runs)
}
