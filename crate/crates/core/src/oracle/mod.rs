//! Comparisons of the engine against brute-force reference computations.

pub mod brute;

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abelian::{is_quotient, local_invariants, smith_invariants, AbelianInvariants, IntMat};
use crate::cases::{self, presentations};
use crate::descend::{descendants_filtered, root_automorphisms, AutSet, Limits};
use crate::error::{Error, Result};
use crate::pcp::{parse_presentation, Element, PcPresentation};
use crate::structure::{abelian_quotient_invariants, class_quotient, derived_subgroup, is_isomorphic, low_index_subgroups, p_class, Subgroup};
use crate::tower::{report, run_config, SearchOptions};
use brute::BruteGroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Pcp,
    Linalg,
    Abelian,
    Structure,
    Descend,
    Determinism,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Pcp, Suite::Linalg, Suite::Abelian, Suite::Structure, Suite::Descend, Suite::Determinism];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Pcp => "pcp",
            Suite::Linalg => "linalg",
            Suite::Abelian => "abelian",
            Suite::Structure => "structure",
            Suite::Descend => "descend",
            Suite::Determinism => "determinism",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown oracle suite {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct OracleOptions {
    pub seed: u64,
    pub random_presentations: usize,
    pub random_matrices: usize,
    /// Largest `log_p` order of the descendant trees compared.
    pub descendant_order: usize,
    /// Thread counts whose reports must agree.
    pub jobs: Vec<usize>,
    pub cases: Vec<String>,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            seed: 1,
            random_presentations: 200,
            random_matrices: 500,
            descendant_order: 8,
            jobs: vec![1, 4],
            cases: cases::CASE_IDS.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// Outcome of one suite: what was compared and every disagreement found.
#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub suite: String,
    pub counts: Vec<(String, usize)>,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport { suite: suite.name().into(), ..Default::default() }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn count(&mut self, what: &str, k: usize) {
        match self.counts.iter_mut().find(|(w, _)| w == what) {
            Some(e) => e.1 += k,
            None => self.counts.push((what.into(), k)),
        }
    }

    fn fail(&mut self, msg: String) {
        // the first (smallest, as instances are generated small first) ones
        // are the interesting ones
        if self.failures.len() < 20 {
            self.failures.push(msg);
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {}: {}", self.suite, if self.ok() { "pass" } else { "FAIL" })?;
        for (w, k) in &self.counts {
            writeln!(f, "  {w}: {k}")?;
        }
        for m in &self.failures {
            writeln!(f, "  mismatch: {m}")?;
        }
        Ok(())
    }
}

pub fn run_suite(suite: Suite, opts: &OracleOptions) -> Result<SuiteReport> {
    match suite {
        Suite::Pcp => pcp_suite(opts),
        Suite::Linalg => Ok(linalg_suite(opts)),
        Suite::Abelian => Ok(abelian_suite()),
        Suite::Structure => structure_suite(opts),
        Suite::Descend => descend_suite(opts),
        Suite::Determinism => determinism_suite(opts),
    }
}

fn one_line(g: &PcPresentation) -> String {
    g.to_text().trim().replace('\n', "; ")
}

/// Named groups of the case studies with at most `p^max_log` elements:
/// the fixed small groups and the class quotients of the final groups.
pub fn case_groups(max_log: usize) -> Result<Vec<(String, PcPresentation)>> {
    let mut out = Vec::new();
    for (name, text) in [
        ("C2xC2", presentations::C2XC2),
        ("C2xC4", presentations::C2XC4),
        ("D4", presentations::D4),
        ("Q8", presentations::Q8),
        ("H4", presentations::H4),
        ("H6", presentations::H6),
    ] {
        let g = parse_presentation(text)?;
        if g.len() <= max_log {
            out.push((name.to_string(), g));
        }
    }
    for c in cases::all_cases() {
        for (params, g) in c.finals.groups()? {
            let tag: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            for k in 1..=p_class(&g) {
                let (q, _) = class_quotient(&g, k);
                if q.len() <= max_log {
                    out.push((format!("{} {} class-{k} quotient", c.id, tag.join(",")), q));
                }
            }
        }
    }
    Ok(out)
}

/// A random presentation on `n` generators for the prime 2: each tail
/// contains each later generator with probability `density`. Consistency
/// is not guaranteed.
pub fn random_presentation(rng: &mut ChaCha8Rng, n: usize, density: f64) -> PcPresentation {
    let mut tail = |after: usize| {
        let v: Vec<u8> = (0..n).map(|k| (k > after && rng.gen_bool(density)) as u8).collect();
        Element::from_exponents(v)
    };
    let power: Vec<Element> = (0..n).map(&mut tail).collect();
    let comm: Vec<Vec<Element>> = (0..n).map(|j| (0..j).map(|_| tail(j)).collect()).collect();
    PcPresentation::from_relations(2, n, power, comm).expect("tails lie in later generators")
}

fn compare_tables(rep: &mut SuiteReport, name: &str, g: &PcPresentation) {
    let mut b = BruteGroup::new(g);
    let Some(table) = b.table() else {
        rep.fail(format!("{name}: reduction did not finish ({})", one_line(g)));
        return;
    };
    let n = b.order();
    let els: Vec<Element> = (0..n).map(|i| b.element(i)).collect();
    for x in 0..n {
        for y in 0..n {
            let z = g.multiply(&els[x], &els[y]);
            if b.index(&z) != table[x][y] {
                rep.fail(format!(
                    "{name}: {:?} * {:?} collected to {:?}, reduction gives {:?} ({})",
                    els[x].exponents(),
                    els[y].exponents(),
                    z.exponents(),
                    els[table[x][y]].exponents(),
                    one_line(g)
                ));
                return;
            }
        }
    }
    rep.count("products compared", n * n);
}

fn pcp_suite(opts: &OracleOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Suite::Pcp);
    for (name, g) in case_groups(7)? {
        compare_tables(&mut rep, &name, &g);
        rep.count("case-study groups", 1);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut consistent = 0;
    let mut tries = 0;
    while consistent < opts.random_presentations && tries < 1000 * opts.random_presentations.max(1) {
        tries += 1;
        let n = 1 + tries % 6;
        let g = random_presentation(&mut rng, n, 0.3);
        let mut b = BruteGroup::new(&g);
        let Some(table) = b.table() else {
            rep.fail(format!("reduction did not finish ({})", one_line(&g)));
            continue;
        };
        let assoc = brute::is_associative(&table);
        if assoc != g.is_consistent() {
            rep.fail(format!("is_consistent = {} but associativity = {assoc} ({})", !assoc, one_line(&g)));
            continue;
        }
        rep.count("random presentations checked for consistency", 1);
        if assoc {
            consistent += 1;
            compare_tables(&mut rep, "random", &g);
        }
    }
    rep.count("random consistent presentations", consistent);
    if consistent < opts.random_presentations {
        rep.fail(format!("only {consistent} consistent random presentations in {tries} tries"));
    }
    Ok(rep)
}

fn determinant(m: &[Vec<i64>]) -> i128 {
    if m.len() == 1 {
        return m[0][0] as i128;
    }
    (0..m.len())
        .map(|c| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, &x)| x).collect())
                .collect();
            let s = if c % 2 == 0 { 1 } else { -1 };
            s * m[0][c] as i128 * determinant(&minor)
        })
        .sum()
}

fn linalg_suite(opts: &OracleOptions) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Linalg);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut done = 0;
    while done < opts.random_matrices {
        let n = 4;
        let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-6..=6)).collect()).collect();
        let det = determinant(&rows).unsigned_abs();
        if det == 0 || det > 256 || !det.is_power_of_two() {
            continue;
        }
        done += 1;
        let want = brute::cokernel_invariants(&rows).expect("nonsingular");
        let m = IntMat::from_rows(n, &rows);
        match smith_invariants(&m, 2) {
            Ok(a) if a.orders() == want.as_slice() => {}
            other => rep.fail(format!("smith_invariants {rows:?}: {other:?}, enumeration gives {want:?}")),
        }
        match local_invariants(&rows, n, 2, det.trailing_zeros()) {
            Ok(a) if a.orders() == want.as_slice() => {}
            other => rep.fail(format!("local_invariants {rows:?}: {other:?}, enumeration gives {want:?}")),
        }
        rep.count(&format!("matrices with |det| = {det}"), 1);
    }
    rep.counts.sort_by_key(|(w, _)| (w.len(), w.clone()));
    rep.count("random 4x4 matrices", done);
    rep
}

fn abelian_suite() -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Abelian);
    let groups: Vec<Vec<u64>> = (0..=6).flat_map(|k| brute::abelian_groups(2, k)).collect();
    for a in &groups {
        for b in &groups {
            let want = brute::surjection_exists(a, b);
            let got = is_quotient(&AbelianInvariants::new(a.clone()), &AbelianInvariants::new(b.clone()));
            if got != want {
                rep.fail(format!("is_quotient({a:?}, {b:?}) = {got}, search says {want}"));
            }
            rep.count("pairs", 1);
            if want {
                rep.count("pairs with a surjection", 1);
            }
        }
    }
    rep.count("abelian 2-groups of order at most 2^6", groups.len());
    rep
}

/// The descendant trees below `[2]`, `[2,2]` and `[2,2,2]`, to order
/// `p^max_log` (rank 3 only to `p^6`), as `(presentation, parent)` lists.
pub fn small_tree(max_log: usize) -> Result<Vec<(PcPresentation, Option<usize>)>> {
    let mut nodes: Vec<(PcPresentation, Option<usize>, AutSet)> = Vec::new();
    for d in 1..=3 {
        let g = PcPresentation::elementary_abelian(2, d);
        let auts = root_automorphisms(&g)?;
        let cap = if d == 3 { max_log.min(6) } else { max_log };
        let start = nodes.len();
        nodes.push((g, None, auts));
        let mut i = start;
        while i < nodes.len() {
            let (g, _, auts) = &nodes[i];
            let limits = Limits { max_order_log: Some(cap), max_class: None };
            let out = descendants_filtered(g, auts, limits, &mut |_| true)?;
            let kids: Vec<_> = out
                .descendants
                .into_iter()
                .map(|d| (d.presentation, Some(i), d.auts.expect("kept")))
                .collect();
            nodes.extend(kids);
            i += 1;
        }
    }
    Ok(nodes.into_iter().map(|(g, p, _)| (g, p)).collect())
}

fn element_set(b: &BruteGroup, table: &[Vec<usize>], s: &Subgroup) -> BTreeSet<usize> {
    let gens: Vec<usize> = s.gens().iter().map(|e| b.index(e)).collect();
    brute::closure(table, &gens)
}

fn compare_subgroups(rep: &mut SuiteReport, name: &str, g: &PcPresentation) {
    let mut b = BruteGroup::new(g);
    let Some(table) = b.table() else {
        rep.fail(format!("{name}: reduction did not finish"));
        return;
    };
    let order = table.len();
    let all = brute::all_subgroups(&table);
    let want: BTreeSet<BTreeSet<usize>> = all.iter().filter(|s| s.len() * 4 >= order).cloned().collect();
    let found = low_index_subgroups(g, 2);
    let got: BTreeSet<BTreeSet<usize>> = found.iter().map(|s| element_set(&b, &table, s)).collect();
    if got.len() != found.len() {
        rep.fail(format!("{name}: low_index_subgroups lists a subgroup twice ({})", one_line(g)));
    }
    if got != want {
        rep.fail(format!(
            "{name}: {} subgroups of index at most 4, enumeration finds {} ({})",
            got.len(),
            want.len(),
            one_line(g)
        ));
    }
    for s in &found {
        if element_set(&b, &table, s).len() != 1 << s.order_log() {
            rep.fail(format!("{name}: subgroup order disagrees with its generating sequence ({})", one_line(g)));
        }
    }
    rep.count("subgroups of index at most 4", want.len());
    let comms: Vec<usize> = (0..order)
        .flat_map(|x| (0..order).map(move |y| (x, y)))
        .map(|(x, y)| {
            // x^-1 y^-1 x y: for 2-groups find inverses by search
            let inv = |a: usize| (0..order).find(|&z| table[a][z] == 0).unwrap();
            table[table[table[inv(x)][inv(y)]][x]][y]
        })
        .collect();
    let derived = brute::closure(&table, &comms);
    if element_set(&b, &table, &derived_subgroup(g, &Subgroup::whole(g))) != derived {
        rep.fail(format!("{name}: derived subgroup differs ({})", one_line(g)));
    }
    rep.count("groups", 1);
}

fn structure_suite(opts: &OracleOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Suite::Structure);
    for (name, g) in case_groups(6)? {
        compare_subgroups(&mut rep, &name, &g);
    }
    for (k, (g, _)) in small_tree(6)?.iter().enumerate() {
        compare_subgroups(&mut rep, &format!("tree group {k}"), g);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed);
    let mut k = 0;
    let mut tries = 0;
    while k < opts.random_presentations / 4 && tries < 100_000 {
        tries += 1;
        let g = random_presentation(&mut rng, 3 + tries % 4, 0.3);
        if g.is_consistent() {
            k += 1;
            compare_subgroups(&mut rep, "random", &g);
        }
    }
    Ok(rep)
}

fn cheap_invariants(g: &PcPresentation) -> (AbelianInvariants, Vec<AbelianInvariants>) {
    let mut maximal: Vec<AbelianInvariants> = low_index_subgroups(g, 1)
        .iter()
        .filter(|s| s.index_log() == 1)
        .map(|s| abelian_quotient_invariants(g, s))
        .collect();
    maximal.sort();
    (abelian_quotient_invariants(g, &Subgroup::whole(g)), maximal)
}

fn descend_suite(opts: &OracleOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Suite::Descend);
    let c2 = PcPresentation::elementary_abelian(2, 1);
    let kids = descendants_filtered(&c2, &root_automorphisms(&c2)?, Limits::default(), &mut |_| true)?.descendants;
    let c4 = parse_presentation("p=2 n=2\nx1^2 = x2")?;
    if kids.len() != 1 || !is_isomorphic(&kids[0].presentation, &c4)? {
        rep.fail(format!("[2] has {} immediate descendants, expected only [4]", kids.len()));
    }
    let v4 = PcPresentation::elementary_abelian(2, 2);
    let kids = descendants_filtered(&v4, &root_automorphisms(&v4)?, Limits::default(), &mut |_| true)?.descendants;
    let order8: Vec<&PcPresentation> = kids.iter().map(|d| &d.presentation).filter(|h| h.len() == 3).collect();
    let mut names = Vec::new();
    for h in &order8 {
        let mut which = Vec::new();
        for (name, text) in [("[2,4]", presentations::C2XC4), ("D4", presentations::D4), ("Q8", presentations::Q8)] {
            if is_isomorphic(h, &parse_presentation(text)?)? {
                which.push(name);
            }
        }
        names.push(which.join("|"));
    }
    names.sort();
    if names != ["D4", "Q8", "[2,4]"] {
        rep.fail(format!("order-8 descendants of [2,2] classified as {names:?}"));
    }
    rep.count("order-8 descendants of [2,2]", order8.len());

    let tree = small_tree(opts.descendant_order)?;
    for (k, (h, parent)) in tree.iter().enumerate() {
        let Some(pi) = *parent else { continue };
        let g = &tree[pi].0;
        let c = p_class(g);
        if p_class(h) != c + 1 {
            rep.fail(format!("descendant {k} has class {}, parent class {c} ({})", p_class(h), one_line(h)));
        }
        let (q, _) = class_quotient(h, c);
        if !is_isomorphic(&q, g)? {
            rep.fail(format!("descendant {k} modulo P_{c} is not its parent ({})", one_line(h)));
        }
        rep.count("descendants checked against their parent", 1);
    }
    // siblings of equal order must be pairwise non-isomorphic
    for (pi, (g, _)) in tree.iter().enumerate() {
        if g.len() > 6 {
            continue;
        }
        let kids: Vec<&PcPresentation> =
            tree.iter().filter(|(_, p)| *p == Some(pi)).map(|(h, _)| h).collect();
        // isomorphic groups share these, so only collisions need the brute test
        let inv: Vec<_> = kids.iter().map(|h| cheap_invariants(h)).collect();
        for a in 0..kids.len() {
            for b in a + 1..kids.len() {
                rep.count("sibling pairs", 1);
                if kids[a].len() != kids[b].len() || inv[a] != inv[b] {
                    continue;
                }
                rep.count("sibling pairs tested by brute isomorphism", 1);
                if is_isomorphic(kids[a], kids[b])? {
                    rep.fail(format!("isomorphic siblings: {} and {}", one_line(kids[a]), one_line(kids[b])));
                }
            }
        }
    }
    rep.count("groups in the trees", tree.len());
    Ok(rep)
}

fn determinism_suite(opts: &OracleOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Suite::Determinism);
    for id in &opts.cases {
        let c = cases::case(id)?;
        let cfg = c.config();
        let a = &cfg.assignments()[0];
        let mut first: Option<String> = None;
        for &jobs in &opts.jobs {
            let so = SearchOptions { jobs, ..Default::default() };
            let runs = run_config(&cfg, a, Some(0), &so)?;
            let text = report(&format!("{} stage 1", c.id), &runs);
            match &first {
                None => first = Some(text),
                Some(t) if *t != text => rep.fail(format!("{}: report with {jobs} jobs differs", c.id)),
                Some(_) => {}
            }
            rep.count("reports compared", 1);
        }
    }
    Ok(rep)
}
