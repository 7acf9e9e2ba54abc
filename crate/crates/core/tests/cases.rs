use pgtower::cases::{self, fingerprint, CASE_IDS};
use pgtower::error::Error;

#[test]
fn lookup() {
    assert_eq!(cases::case("2379").unwrap().id, "-2379");
    assert_eq!(cases::case(" -445 ").unwrap().discriminant, -445);
    assert!(matches!(cases::case("-7"), Err(Error::UnknownCase(_))));
    assert_eq!(cases::all_cases().len(), CASE_IDS.len());
}

#[test]
fn final_families() {
    let sizes = [8, 2, 2, 2];
    for (id, n) in CASE_IDS.iter().zip(sizes) {
        let c = cases::case(id).unwrap();
        let groups = c.finals.groups().unwrap();
        assert_eq!(groups.len(), n);
        for (params, g) in &groups {
            assert_eq!(params.len(), c.finals.params.len());
            assert_eq!(g.len(), c.expected.order_log);
        }
    }
}

#[test]
fn fingerprints_are_recomputed() {
    let c = cases::case("-445").unwrap();
    for (_, g) in c.finals.groups().unwrap() {
        let f = fingerprint(&g);
        assert_eq!(f.order_log, 8);
        assert_eq!(f.class, 5);
        assert_eq!(f.index_p.len(), 3);
        assert!(f.center_log.is_some());
    }
}

#[test]
fn configs_validate() {
    for id in CASE_IDS {
        let cfg = cases::case(id).unwrap().config();
        assert_eq!(cfg.prime, 2);
        assert_eq!(cfg.stages.len(), 2);
        let a = &cfg.assignments()[0];
        for k in 0..cfg.stages.len() {
            assert!(!cfg.lattices(k, a).unwrap().is_empty());
        }
    }
}
