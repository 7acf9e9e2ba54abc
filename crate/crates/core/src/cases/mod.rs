//! The imaginary quadratic fields studied: group-theoretic input data,
//! search configurations and the expected outcomes.
//!
//! The defining polynomials are kept as documentation of where the
//! arithmetic input comes from; nothing here evaluates them.

pub mod presentations;
mod verify;

pub use verify::{descent_chain, fingerprint, Check, Fingerprint, ELEMENT_LIMIT};

use std::collections::BTreeMap;

use crate::abelian::AbelianInvariants;
use crate::error::{Error, Result};
use crate::pcp::{parse_presentation, parse_presentation_with, PcPresentation};
use crate::structure::{
    class_quotient, derived_series_factors, frattini_subgroup, is_isomorphic, ISO_ORDER_LIMIT, low_index_subgroups, p_class, Subgroup,
};
use crate::tower::{
    Attach, LatticeConfig, NamedPresentation, RootsConfig, SearchConfig, StageConfig, SubgroupAqiConfig,
    SubgroupConfig, Target,
};
use presentations::*;

/// A parameterized family of presentations.
#[derive(Clone, Debug)]
pub struct FinalFamily {
    pub text: &'static str,
    /// Each parameter ranges over `{0, 1}`.
    pub params: &'static [&'static str],
}

impl FinalFamily {
    /// Every member with its parameter values, in binary counting order
    /// (first parameter slowest).
    pub fn groups(&self) -> Result<Vec<(BTreeMap<String, i64>, PcPresentation)>> {
        let k = self.params.len();
        (0..1u32 << k)
            .map(|mask| {
                let values: BTreeMap<String, i64> = self
                    .params
                    .iter()
                    .enumerate()
                    .map(|(i, p)| (p.to_string(), ((mask >> (k - 1 - i)) & 1) as i64))
                    .collect();
                let g = parse_presentation_with(self.text, &values)?;
                Ok((values, g))
            })
            .collect()
    }
}

/// Known invariants of the target groups and search outcomes.
#[derive(Clone, Debug)]
pub struct Expected {
    pub order_log: usize,
    pub class: usize,
    pub derived_factors: &'static [&'static str],
    pub frattini_aqi: Option<&'static str>,
    /// A subgroup of index `p^2` with these invariants exists.
    pub index4_aqi: Option<&'static str>,
    pub class2_quotient: Option<&'static str>,
    pub stage1_candidates: Option<usize>,
    /// Name of the class-2 group all stage-1 candidates descend from.
    pub stage1_candidates_below: Option<&'static str>,
    pub stage1_capable: Option<usize>,
    pub stage1_survivors: usize,
    pub stage1_filtered: &'static [&'static str],
    pub stage2_candidates: usize,
    pub stage2_filtered: usize,
}

/// Subgroups of the rank-2 elementary abelian root: the whole group, the
/// three maximal subgroups and the trivial subgroup.
struct Stage1Targets {
    whole: &'static str,
    maximal: [(&'static str, &'static str); 3],
    frattini: &'static str,
}

#[derive(Clone, Debug)]
pub struct CaseStudy {
    pub id: &'static str,
    pub discriminant: i64,
    pub abelianization: &'static str,
    /// A degree-4 unramified subextension, as a compositum of quadratic
    /// fields.
    pub subextension: &'static str,
    /// Defining polynomials of further unramified extensions, with labels.
    pub polynomials: &'static [(&'static str, &'static str)],
    pub finals: FinalFamily,
    pub expected: Expected,
    config: fn() -> SearchConfig,
}

pub const CASE_IDS: [&str; 4] = ["-2379", "-445", "-1015", "-1595"];

fn root_c2xc2() -> RootsConfig {
    RootsConfig::Explicit(vec![NamedPresentation { name: "C2xC2".into(), presentation: C2XC2.into() }])
}

fn named(name: &str, text: &str) -> NamedPresentation {
    NamedPresentation { name: name.into(), presentation: text.into() }
}

fn stage1(t: &Stage1Targets) -> Vec<LatticeConfig> {
    let words = [vec!["x1"], vec!["x2"], vec!["x1 x2"]];
    let mut subgroups = vec![SubgroupConfig {
        label: "whole".into(),
        gens: vec!["x1".into(), "x2".into()],
        target: t.whole.parse().unwrap(),
    }];
    for ((label, target), w) in t.maximal.iter().zip(words) {
        subgroups.push(SubgroupConfig {
            label: (*label).into(),
            gens: w.iter().map(|s| s.to_string()).collect(),
            target: target.parse().unwrap(),
        });
    }
    subgroups.push(SubgroupConfig { label: "frattini".into(), gens: vec![], target: t.frattini.parse().unwrap() });
    let assign = vec![t.maximal.iter().map(|(l, _)| l.to_string()).collect()];
    vec![LatticeConfig { label: "L1".into(), reference: C2XC2.into(), subgroups, assign }]
}

/// Subgroups of index at most `p^2` of `reference`. The whole group, the
/// maximal subgroups and the Frattini subgroup get the targets of the
/// corresponding subgroups of the degree-4 stage; the targets of the
/// maximal subgroups may be permuted; all other slots are unknown.
fn lattice_from_reference(label: &str, reference: &str, t: &Stage1Targets) -> LatticeConfig {
    let g = parse_presentation(reference).expect("reference presentation");
    let phi = frattini_subgroup(&g, &Subgroup::whole(&g));
    let mut subgroups = Vec::new();
    let mut maximal = Vec::new();
    let mut k = 0;
    for s in low_index_subgroups(&g, 2) {
        let target = match s.index_log() {
            0 => Target::Known(t.whole.parse().unwrap()),
            1 => {
                let target = t.maximal[maximal.len()].1;
                Target::Known(target.parse().unwrap())
            }
            _ if s == phi => Target::Known(t.frattini.parse().unwrap()),
            _ => Target::Unknown,
        };
        let name = match s.index_log() {
            0 => "whole".to_string(),
            1 => {
                maximal.push(format!("M{}", maximal.len() + 1));
                maximal.last().unwrap().clone()
            }
            _ if s == phi => "frattini".to_string(),
            _ => {
                k += 1;
                format!("R{k}")
            }
        };
        subgroups.push(SubgroupConfig { label: name, gens: s.gens().iter().map(|e| e.to_string()).collect(), target });
    }
    LatticeConfig { label: label.into(), reference: reference.into(), subgroups, assign: vec![maximal] }
}

const T2379: Stage1Targets = Stage1Targets {
    whole: "[4,4]",
    maximal: [("k(sqrt61)", "[2,2,8]"), ("k(sqrt13)", "[2,2,8]"), ("k(sqrt-3)", "[2,2,16]")],
    frattini: "[4,4,8]",
};

const T445: Stage1Targets = Stage1Targets {
    whole: "[2,4]",
    maximal: [("M1", "[2,2,2]"), ("M2", "[4,4]"), ("M3", "[2,8]")],
    frattini: "[2,2,4]",
};

const T1015: Stage1Targets = Stage1Targets {
    whole: "[2,8]",
    maximal: [("M1", "[2,2,4]"), ("M2", "[2,16]"), ("M3", "[2,16]")],
    frattini: "[2,2,8]",
};

fn config_2379() -> SearchConfig {
    SearchConfig {
        name: "-2379".into(),
        prime: 2,
        max_order: None,
        max_class: None,
        stages: vec![
            StageConfig {
                name: "degree 4".into(),
                roots: root_c2xc2(),
                attach: Attach::Direct,
                lattices: stage1(&T2379),
                required_quotients: vec![],
                required_subgroup_aqi: vec![SubgroupAqiConfig { index_log: 2, aqi: "[4,32]".parse().unwrap() }],
                survivor_class: Some(2),
                max_order: None,
                max_class: None,
            },
            StageConfig {
                name: "degree 8".into(),
                roots: RootsConfig::Keyword("previous-survivors".into()),
                attach: Attach::Surjective,
                lattices: vec![lattice_from_reference("L2", C2XC4, &T2379)],
                required_quotients: vec![],
                required_subgroup_aqi: vec![SubgroupAqiConfig { index_log: 2, aqi: "[4,32]".parse().unwrap() }],
                survivor_class: None,
                max_order: None,
                max_class: None,
            },
        ],
    }
}

fn config_445() -> SearchConfig {
    SearchConfig {
        name: "-445".into(),
        prime: 2,
        max_order: None,
        max_class: None,
        stages: vec![
            StageConfig {
                name: "degree 4".into(),
                roots: root_c2xc2(),
                attach: Attach::Direct,
                lattices: stage1(&T445),
                required_quotients: vec![named("C2xC4", C2XC4), named("D4", D4)],
                required_subgroup_aqi: vec![],
                survivor_class: Some(2),
                max_order: None,
                max_class: Some(2),
            },
            StageConfig {
                name: "degree 8".into(),
                roots: RootsConfig::Keyword("previous-survivors".into()),
                attach: Attach::Surjective,
                lattices: vec![lattice_from_reference("L2", C2XC4, &T445)],
                required_quotients: vec![],
                required_subgroup_aqi: vec![SubgroupAqiConfig { index_log: 2, aqi: "[2,16]".parse().unwrap() }],
                survivor_class: None,
                max_order: None,
                max_class: None,
            },
        ],
    }
}

fn config_1015() -> SearchConfig {
    SearchConfig {
        name: "-1015".into(),
        prime: 2,
        max_order: None,
        max_class: None,
        stages: vec![
            StageConfig {
                name: "degree 4".into(),
                roots: root_c2xc2(),
                attach: Attach::Direct,
                lattices: stage1(&T1015),
                required_quotients: vec![named("C2xC4", C2XC4), named("D4", D4)],
                required_subgroup_aqi: vec![],
                survivor_class: Some(2),
                max_order: None,
                max_class: Some(2),
            },
            StageConfig {
                name: "degree 8".into(),
                roots: RootsConfig::Keyword("previous-survivors".into()),
                attach: Attach::Surjective,
                lattices: vec![
                    lattice_from_reference("L1", D4, &T1015),
                    lattice_from_reference("L2", C2XC4, &T1015),
                    lattice_from_reference("L3", D4, &T1015),
                ],
                required_quotients: vec![],
                required_subgroup_aqi: vec![],
                survivor_class: None,
                max_order: None,
                max_class: None,
            },
        ],
    }
}

fn config_1595() -> SearchConfig {
    SearchConfig { name: "-1595".into(), ..config_1015() }
}

const EXPECTED_1015: Expected = Expected {
    order_log: 9,
    class: 5,
    derived_factors: &["[2,8]", "[2,2,4]", "[2]"],
    frattini_aqi: None,
    index4_aqi: None,
    class2_quotient: None,
    stage1_candidates: None,
    stage1_candidates_below: None,
    stage1_capable: None,
    stage1_survivors: 4,
    stage1_filtered: &[H4, "p=2 n=4 d=2\nx1^2 = x3\nx2^2 = x4\n[x2,x1] = x4"],
    stage2_candidates: 2,
    stage2_filtered: 2,
};

const POLY_2379: &[(&str, &str)] = &[
    (
        "L (degree 16, Gal(L/k) = [2,4])",
        "x^16 - 2158 x^14 - 1166 x^13 + 1886402 x^12 + 1125558 x^11 - 738996514 x^10 + 24633036 x^9 \
         + 88589769625 x^8 - 114401828130 x^7 + 12435312336118 x^6 + 15732271973132 x^5 \
         + 506694031967064 x^4 - 98005626098698 x^3 + 10557300816504844 x^2 - 7195589177918350 x \
         + 41648817878658175",
    ),
    ("class group [4,32]", "x^8 + 9494 x^6 + 33992937 x^4 + 54094064336 x^2 + 32175758727424"),
];

const POLY_445: &[(&str, &str)] = &[
    (
        "L (degree 16, Gal(L/k) = [2,4])",
        "x^16 + 12 x^14 + 4554 x^12 + 17928 x^10 + 2231251 x^8 + 13625880 x^6 - 10866150 x^4 \
         - 143437500 x^2 + 244140625",
    ),
    ("class group [2,16]", "x^8 + 702 x^4 + 130321"),
];

const POLY_1015: &[(&str, &str)] = &[
    (
        "L1 (Gal(L1/k) = D4)",
        "x^16 + 8302 x^14 + 29865815 x^12 + 60621449422 x^10 + 75762817738769 x^8 \
         + 59625975137422568 x^6 + 28858765154851072400 x^4 + 7861191091575524181248 x^2 \
         + 924182332972720716353536",
    ),
    (
        "L2 (Gal(L2/k) = [2,4])",
        "x^16 + 68 x^14 - 26 x^13 + 1922 x^12 - 2316 x^11 + 29806 x^10 - 20958 x^9 + 335885 x^8 \
         + 62002 x^7 + 1639268 x^6 + 2747082 x^5 + 6227217 x^4 + 7583004 x^3 + 7628823 x^2 \
         + 4664142 x + 1486431",
    ),
    (
        "L3 (Gal(L3/k) = D4)",
        "x^16 + 208250 x^14 + 6454080 x^13 + 84986985877 x^12 - 319881524440 x^11 \
         + 10504186175856042 x^10 + 3217249977395280 x^9 + 2231207353583759168404 x^8 \
         - 41652321975526297906680 x^7 + 162122207446267254901910082 x^6 \
         - 4449276375660698756114160120 x^5 + 23169896204558457954443037721749 x^4 \
         - 466821086268574071299245171753200 x^3 + 796726493601047682437367297422156178 x^2 \
         - 37902470874562381569855570165787116760 x + 81595985378826852513556627342521162440521",
    ),
];

const POLY_1595: &[(&str, &str)] = &[
    (
        "L1 (Gal(L1/k) = D4)",
        "x^16 + 75 x^14 + 3384 x^12 + 85875 x^10 + 1497421 x^8 + 16831500 x^6 + 129999744 x^4 \
         + 564715200 x^2 + 1475789056",
    ),
    (
        "L2 (Gal(L2/k) = [2,4])",
        "x^16 + 145 x^14 + 4721 x^12 - 336690 x^10 + 2932126 x^8 + 22696270 x^6 + 32760881 x^4 \
         - 90377775 x^2 + 43046721",
    ),
    (
        "L3 (Gal(L3/k) = D4)",
        "x^16 - 2312 x^14 + 2359542 x^12 - 1183214812 x^10 + 276742820433 x^8 - 63131144780036 x^6 \
         + 66951555767033248 x^4 - 13918403354887798784 x^2 + 793394183478882017536",
    ),
];

pub fn all_cases() -> Vec<CaseStudy> {
    vec![
        CaseStudy {
            id: "-2379",
            discriminant: -2379,
            abelianization: "[4,4]",
            subextension: "Q(sqrt-3, sqrt13, sqrt61)",
            polynomials: POLY_2379,
            finals: FinalFamily { text: FINAL_2379, params: &["r", "s", "t"] },
            expected: Expected {
                order_log: 11,
                class: 5,
                derived_factors: &["[4,4]", "[2,4,16]"],
                frattini_aqi: Some("[4,4,8]"),
                index4_aqi: Some("[4,32]"),
                class2_quotient: None,
                stage1_candidates: Some(81),
                stage1_candidates_below: Some(H6),
                stage1_capable: Some(6),
                stage1_survivors: 2,
                stage1_filtered: &[H4, H6],
                stage2_candidates: 24,
                stage2_filtered: 8,
            },
            config: config_2379,
        },
        CaseStudy {
            id: "-445",
            discriminant: -445,
            abelianization: "[2,4]",
            subextension: "Q(sqrt-1, sqrt5, sqrt89)",
            polynomials: POLY_445,
            finals: FinalFamily { text: FINAL_445, params: &["r"] },
            expected: Expected {
                order_log: 8,
                class: 5,
                derived_factors: &["[2,4]", "[2,2,4]", "[2]"],
                frattini_aqi: None,
                index4_aqi: Some("[2,16]"),
                class2_quotient: Some(H4),
                stage1_candidates: None,
                stage1_candidates_below: None,
                stage1_capable: None,
                stage1_survivors: 3,
                stage1_filtered: &[H4],
                stage2_candidates: 12,
                stage2_filtered: 2,
            },
            config: config_445,
        },
        CaseStudy {
            id: "-1015",
            discriminant: -1015,
            abelianization: "[2,8]",
            subextension: "Q(sqrt-7, sqrt5, sqrt29)",
            polynomials: POLY_1015,
            finals: FinalFamily { text: FINAL_1015, params: &["r"] },
            expected: EXPECTED_1015,
            config: config_1015,
        },
        CaseStudy {
            id: "-1595",
            discriminant: -1595,
            abelianization: "[2,8]",
            subextension: "Q(sqrt-11, sqrt5, sqrt29)",
            polynomials: POLY_1595,
            finals: FinalFamily { text: FINAL_1015, params: &["r"] },
            expected: EXPECTED_1015,
            config: config_1595,
        },
    ]
}

/// Looks up a case by id; the leading minus sign is optional.
pub fn case(id: &str) -> Result<CaseStudy> {
    let id = id.trim();
    let want = if id.starts_with('-') { id.to_string() } else { format!("-{id}") };
    all_cases().into_iter().find(|c| c.id == want).ok_or_else(|| Error::UnknownCase(id.into()))
}

impl CaseStudy {
    pub fn config(&self) -> SearchConfig {
        (self.config)()
    }

    /// Checks every final presentation against the expected invariants.
    pub fn verify_finals(&self) -> Result<Vec<Check>> {
        let e = &self.expected;
        let mut out = Vec::new();
        let groups = self.finals.groups()?;
        let derived: Vec<AbelianInvariants> = e.derived_factors.iter().map(|s| s.parse().unwrap()).collect();
        let class2 = e.class2_quotient.map(parse_presentation).transpose()?;
        for (params, g) in &groups {
            let tag: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let tag = format!("{} {}", self.id, tag.join(","));
            out.push(Check::new(format!("{tag} consistent"), g.is_consistent(), ""));
            out.push(Check::new(format!("{tag} order"), g.len() == e.order_log, format!("2^{}", g.len())));
            let c = p_class(g);
            out.push(Check::new(format!("{tag} class"), c == e.class, c.to_string()));
            let df = derived_series_factors(g);
            let shown: Vec<String> = df.iter().map(|a| a.to_string()).collect();
            out.push(Check::new(format!("{tag} derived factors"), df == derived, shown.join(" ")));
            if let Some(f) = e.frattini_aqi {
                let a = verify::frattini_aqi(g);
                out.push(Check::new(format!("{tag} AQI of P_1"), a.to_string() == f, a.to_string()));
            }
            if let Some(a) = e.index4_aqi {
                let ok = verify::has_subgroup_aqi(g, 2, &a.parse().unwrap());
                out.push(Check::new(format!("{tag} index-4 subgroup with AQI {a}"), ok, ""));
            }
            if let Some(h) = &class2 {
                let (q, _) = class_quotient(g, 2);
                let ok = is_isomorphic(&q, h)?;
                out.push(Check::new(format!("{tag} class-2 quotient"), ok, format!("order 2^{}", q.len())));
            }
        }
        let fps: Vec<Fingerprint> = groups.iter().map(|(_, g)| fingerprint(g)).collect();
        let mut distinct = fps.clone();
        distinct.sort();
        distinct.dedup();
        let detail = if distinct.len() == fps.len() {
            "pairwise distinguished by fingerprint".to_string()
        } else {
            format!("{} fingerprint classes among {} groups; not distinguished", distinct.len(), fps.len())
        };
        out.push(Check::new(format!("{} fingerprints", self.id), true, detail));
        let n = groups.len();
        if e.order_log <= ISO_ORDER_LIMIT {
            let mut iso = 0;
            for a in 0..n {
                for b in a + 1..n {
                    iso += is_isomorphic(&groups[a].1, &groups[b].1)? as usize;
                }
            }
            out.push(Check::new(
                format!("{} pairwise non-isomorphic (brute force)", self.id),
                iso == 0,
                format!("{iso} isomorphic pairs among {n} groups"),
            ));
        }
        // isomorphic groups reach the same vertex of the descendant tree
        let mut ends = Vec::new();
        for (_, g) in &groups {
            ends.push(descent_chain(g)?.pop().expect("chain starts at the root").0);
        }
        let mut distinct = ends.clone();
        distinct.sort_by_key(|g| g.to_text());
        distinct.dedup();
        out.push(Check::new(
            format!("{} pairwise non-isomorphic (descendant tree)", self.id),
            distinct.len() == n,
            format!("{} distinct vertices for {n} groups", distinct.len()),
        ));
        Ok(out)
    }
}
