use super::*;
use crate::cases::{self, presentations};
use crate::pcp::parse_presentation;
use crate::structure::is_isomorphic;

fn pc(text: &str) -> PcPresentation {
    parse_presentation(text).unwrap()
}

fn ab(s: &str) -> AbelianInvariants {
    s.parse().unwrap()
}

fn stage1_lattices(id: &str) -> (SearchConfig, Vec<ConstraintLattice>) {
    let cfg = cases::case(id).unwrap().config();
    let a = cfg.assignments().remove(0);
    let lats = cfg.lattices(0, &a).unwrap();
    (cfg, lats)
}

fn opts(max_order_log: usize, max_class: u32) -> SearchOptions {
    SearchOptions { limits: Limits { max_order_log: Some(max_order_log), max_class: Some(max_class) }, ..Default::default() }
}

fn v4_root() -> Root {
    Root { name: "C2xC2".into(), presentation: PcPresentation::elementary_abelian(2, 2), auts: None }
}

#[test]
fn targets_parse() {
    assert_eq!("unknown".parse::<Target>().unwrap(), Target::Unknown);
    assert_eq!("[2,8]".parse::<Target>().unwrap(), Target::Known(ab("[2,8]")));
    assert!(matches!("[2,".parse::<Target>(), Err(Error::Config(_))));
}

#[test]
fn direct_attachment() {
    let (_, lats) = stage1_lattices("-2379");
    let v4 = PcPresentation::elementary_abelian(2, 2);
    let pairs = init_pairs(&v4, &lats, Attach::Direct).unwrap();
    assert_eq!(pairs.len(), 1);
    assert_eq!(pairs[0].len(), 1);
    assert_eq!(pairs[0][0].len(), 5);
    let c4 = pc("p=2 n=2\nx1^2 = x2");
    assert!(matches!(init_pairs(&c4, &lats, Attach::Direct), Err(Error::Config(_))));
}

#[test]
fn surjective_attachment() {
    let h4 = pc(presentations::H4);
    let c2c4 = pc(presentations::C2XC4);
    let lat = crate::cases::case("-445").unwrap().config().lattices(1, &Assignment {
        index: 1,
        targets: cases::case("-445").unwrap().config().assignments()[0].targets.clone(),
    });
    let lat = lat.unwrap();
    assert_eq!(lat[0].entries.len(), 7);
    let pairs = init_pairs(&h4, &lat, Attach::Surjective).unwrap();
    assert!(!pairs.is_empty());
    assert!(pairs.len() <= all_surjections(&h4, &c2c4).len());
    let whole = lat[0].entries.iter().position(|e| e.label == "whole").unwrap();
    for f in &pairs {
        assert_eq!(f[0].len(), 7);
        assert_eq!(f[0][whole], Subgroup::whole(&h4));
    }
    // no surjection from a cyclic group onto [2,4]
    let c8 = pc("p=2 n=3\nx1^2 = x2\nx2^2 = x3");
    assert!(matches!(init_pairs(&c8, &lat, Attach::Surjective), Err(Error::NoSurjection(_))));
}

#[test]
fn no_lattices_give_one_pair() {
    let g = pc(presentations::D4);
    assert_eq!(init_pairs(&g, &[], Attach::Surjective).unwrap(), vec![Vec::<Vec<Subgroup>>::new()]);
    let lat = ConstraintLattice::unconstrained("L", PcPresentation::elementary_abelian(2, 2));
    let pairs = init_pairs(&g, &[lat], Attach::Surjective).unwrap();
    assert_eq!(pairs, vec![vec![Vec::<Subgroup>::new()]]);
}

#[test]
fn automorphism_group_orders() {
    assert_eq!(automorphisms_by_search(&pc(presentations::D4)).unwrap().order, 8);
    assert_eq!(automorphisms_by_search(&pc(presentations::Q8)).unwrap().order, 24);
    assert_eq!(automorphisms_by_search(&pc(presentations::C2XC4)).unwrap().order, 8);
}

#[test]
fn unconstrained_search_lists_the_tree() {
    let lat = ConstraintLattice::unconstrained("L", PcPresentation::elementary_abelian(2, 2));
    let r = search(vec![v4_root()], &[lat], Attach::Direct, &opts(4, 8)).unwrap();
    assert_eq!(r.status, Status::CapHit);
    // 2^3: [2,4], D4, Q8 below the root
    let eight: Vec<&Node> = r.nodes.iter().filter(|n| n.presentation.len() == 3).collect();
    assert_eq!(eight.len(), 3);
    assert!(r.nodes.iter().all(|n| n.candidate));
    for n in &r.nodes[1..] {
        let p = n.parent.unwrap();
        assert!(r.nodes[p].children.contains(&n.id));
        assert_eq!(n.class, r.nodes[p].class + 1);
        assert_eq!(r.ancestors(n.id).last(), Some(&0));
    }
    assert_eq!(r.levels[0], LevelStats { class: 1, groups: 1, pairs: 1, candidates: 1 });
    let total: usize = r.levels.iter().map(|l| l.groups).sum();
    assert_eq!(total, r.nodes.len());
}

#[test]
fn orbit_and_exhaustive_surjections_agree() {
    let (_, lats) = stage1_lattices("-445");
    let mut o = opts(6, 3);
    let a = search(vec![v4_root()], &lats, Attach::Direct, &o).unwrap();
    o.exhaustive_surjections = true;
    let b = search(vec![v4_root()], &lats, Attach::Direct, &o).unwrap();
    assert_eq!(a.nodes.len(), b.nodes.len());
    for (x, y) in a.nodes.iter().zip(&b.nodes) {
        assert_eq!(x.presentation, y.presentation);
        assert_eq!((x.pairs, x.candidate), (y.pairs, y.candidate));
    }
}

#[test]
fn search_is_independent_of_jobs() {
    let (_, lats) = stage1_lattices("-1015");
    let mut o = opts(6, 3);
    let a = search(vec![v4_root()], &lats, Attach::Direct, &o).unwrap();
    o.jobs = 3;
    let b = search(vec![v4_root()], &lats, Attach::Direct, &o).unwrap();
    assert_eq!(export_tree(&a, TreeMode::Full), export_tree(&b, TreeMode::Full));
    assert_eq!(a.levels, b.levels);
}

#[test]
fn filters() {
    let groups = vec![pc(presentations::H4), pc(presentations::H6), pc(presentations::D4)];
    assert_eq!(filter_required_quotients(&groups, &[]), vec![0, 1, 2]);
    let req = vec![pc(presentations::C2XC4), pc(presentations::D4)];
    let kept = filter_required_quotients(&groups, &req);
    assert!(kept.contains(&0));
    assert!(!kept.contains(&2));
    assert_eq!(filter_subgroup_aqi(&groups, 0, &ab("[4,4]")), vec![1]);
    assert!(filter_subgroup_aqi(&groups, 1, &ab("[64]")).is_empty());
    let h6 = &groups[1];
    assert!(is_isomorphic(h6, &pc(presentations::H6)).unwrap());
}

#[test]
fn exports() {
    let empty = SearchResult { nodes: vec![], roots: vec![], levels: vec![], status: Status::Terminated, lattices: vec![] };
    let dot = export_tree(&empty, TreeMode::Full);
    assert!(dot.starts_with("digraph"));
    assert!(!dot.contains("->"));
    assert_eq!(export_candidates(&empty, &[]), "");
    let lat = ConstraintLattice::unconstrained("L", PcPresentation::elementary_abelian(2, 2));
    let r = search(vec![v4_root()], &[lat], Attach::Direct, &opts(3, 8)).unwrap();
    let ids: Vec<usize> = (0..r.nodes.len()).collect();
    let text = export_candidates(&r, &ids);
    // every exported presentation parses back to the node's presentation
    let mut found = 0;
    for block in text.split("\n\n").filter(|b| b.contains("p=2")) {
        let start = block.find("p=2").unwrap();
        let g = pc(&block[start..]);
        assert!(r.nodes.iter().any(|n| n.presentation == g));
        found += 1;
    }
    assert_eq!(found, r.nodes.len());
    assert_eq!(export_tree(&r, TreeMode::Full).matches("->").count(), r.nodes.len() - 1);
    assert_eq!("paper".parse::<TreeMode>().unwrap(), TreeMode::Paper);
    assert!("other".parse::<TreeMode>().is_err());
}

#[test]
fn config_round_trip() {
    for id in cases::CASE_IDS {
        let cfg = cases::case(id).unwrap().config();
        let back = SearchConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(back.to_json(), cfg.to_json());
    }
    // the maximal-subgroup targets permute independently in both stages
    let a = cases::case("-2379").unwrap().config().assignments();
    assert_eq!(a.len(), 9);
    let mut first: Vec<_> = a.iter().map(|x| x.targets[0].clone()).collect();
    first.dedup();
    assert_eq!(first.len(), 3);
    assert_eq!(cases::case("-445").unwrap().config().assignments().len(), 36);
}

#[test]
fn config_errors() {
    assert!(matches!(SearchConfig::from_json("{"), Err(Error::Config(_))));
    let mut cfg = cases::case("-445").unwrap().config();
    cfg.stages.swap(0, 1);
    assert!(matches!(SearchConfig::from_json(&cfg.to_json()), Err(Error::Config(_))));
    let mut cfg = cases::case("-445").unwrap().config();
    cfg.stages[0].lattices[0].assign = vec![vec!["nope".into()]];
    assert!(matches!(SearchConfig::from_json(&cfg.to_json()), Err(Error::Config(_))));
    let cfg = cases::case("-445").unwrap().config();
    let a = cfg.assignments().remove(0);
    assert!(matches!(run_config(&cfg, &a, Some(5), &SearchOptions::default()), Err(Error::Config(_))));
}

#[test]
fn stage_one_for_445() {
    let cfg = cases::case("-445").unwrap().config();
    let a = cfg.assignments().remove(0);
    let runs = run_config(&cfg, &a, Some(0), &SearchOptions::default()).unwrap();
    let run = &runs[0];
    assert_eq!(run.survivors.len(), 3);
    assert_eq!(run.filtered_survivors.len(), 1);
    let g = &run.result.nodes[run.passed[0]].presentation;
    assert!(is_isomorphic(g, &pc(presentations::H4)).unwrap());
    let text = report("-445", &runs);
    assert!(text.contains("degree 4"));
}
