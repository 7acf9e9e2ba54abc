use super::*;
use crate::cases::{self, presentations};
use crate::oracle::brute::{all_subgroups, closure, BruteGroup};
use crate::pcp::parse_presentation;

fn pc(text: &str) -> PcPresentation {
    parse_presentation(text).unwrap()
}

fn ab(s: &str) -> AbelianInvariants {
    s.parse().unwrap()
}

fn final_group(id: &str) -> PcPresentation {
    cases::case(id).unwrap().finals.groups().unwrap().remove(0).1
}

#[test]
fn closure_extremes() {
    let g = pc(presentations::H4);
    let whole = subgroup_closure(&g, &g.generators());
    assert_eq!(whole.index_log(), 0);
    assert_eq!(whole, Subgroup::whole(&g));
    let triv = subgroup_closure(&g, &[]);
    assert_eq!(triv.order_log(), 0);
    assert!(!triv.contains(&g, &g.generator(0)));
    assert!(g.elements().iter().all(|a| whole.contains(&g, a)));
}

#[test]
fn cyclic_subgroup_in_h4() {
    let g = pc(presentations::H4);
    let s = subgroup_closure(&g, &[g.generator(0)]);
    assert_eq!(s.order(2), 4);
    assert_eq!(s.index_log(), 2);
    assert!(s.contains(&g, &g.generator(3)));
    // against closure in the brute-force Cayley table
    let mut b = BruteGroup::new(&g);
    let t = b.table().unwrap();
    let set = closure(&t, &[b.index(&g.generator(0))]);
    assert_eq!(set.len(), 4);
    for x in set {
        assert!(s.contains(&g, &b.element(x)));
    }
}

#[test]
fn derived_subgroups() {
    let v4 = PcPresentation::elementary_abelian(2, 2);
    assert!(derived_subgroup(&v4, &Subgroup::whole(&v4)).is_trivial());
    let g = pc(presentations::H4);
    let d = derived_subgroup(&g, &Subgroup::whole(&g));
    assert_eq!(d, subgroup_closure(&g, &[g.generator(2)]));
    let f = final_group("-2379");
    assert_eq!(derived_subgroup(&f, &Subgroup::whole(&f)).index_log(), 4);
}

#[test]
fn p_classes() {
    assert_eq!(p_class(&PcPresentation::elementary_abelian(2, 2)), 1);
    assert_eq!(p_class(&pc(presentations::H6)), 2);
    for (_, g) in cases::case("-445").unwrap().finals.groups().unwrap() {
        assert_eq!(p_class(&g), 5);
    }
}

#[test]
fn lower_series_properties() {
    let g = final_group("-1015");
    let series = lower_p_central_series(&g);
    for w in series.windows(2) {
        assert!(w[1].order_log() < w[0].order_log());
        assert!(w[1].is_subgroup_of(&g, &w[0]));
    }
    assert!(series.last().unwrap().is_trivial());
    let c = p_class(&g);
    for m in 1..=c + 1 {
        let (q, _) = class_quotient(&g, m);
        assert_eq!(p_class(&q), m.min(c));
    }
    // G / P_1 is elementary abelian
    let (q, _) = class_quotient(&g, 1);
    assert!(derived_subgroup(&q, &Subgroup::whole(&q)).is_trivial());
    assert!(frattini_subgroup(&q, &Subgroup::whole(&q)).is_trivial());
}

#[test]
fn quotients() {
    let g = pc(presentations::H6);
    let (q, f) = quotient_presentation(&g, &Subgroup::trivial(&g)).unwrap();
    assert_eq!((q.len(), p_class(&q)), (g.len(), p_class(&g)));
    assert!(f.is_surjective());
    let (q, _) = class_quotient(&g, 1);
    assert!(is_isomorphic(&q, &PcPresentation::elementary_abelian(2, 2)).unwrap());
    let non_normal = subgroup_closure(&g, &[g.generator(1)]);
    assert!(matches!(quotient_presentation(&g, &non_normal), Err(Error::NotNormal)));
    let (h4, h6) = (pc(presentations::H4), pc(presentations::H6));
    for (_, f) in cases::case("-2379").unwrap().finals.groups().unwrap() {
        let (q, _) = class_quotient(&f, 2);
        assert!(is_isomorphic(&q, &h4).unwrap() || is_isomorphic(&q, &h6).unwrap());
    }
}

#[test]
fn abelian_quotient_invariant_examples() {
    let g = pc(presentations::H6);
    assert_eq!(abelian_quotient_invariants(&g, &Subgroup::whole(&g)), ab("[4,4]"));
    assert_eq!(abelian_quotient_invariants(&g, &Subgroup::trivial(&g)), AbelianInvariants::trivial());
    for (_, f) in cases::case("-2379").unwrap().finals.groups().unwrap() {
        let p1 = &lower_p_central_series(&f)[1];
        assert_eq!(abelian_quotient_invariants(&f, p1), ab("[4,4,8]"));
        assert_eq!(derived_series_factors(&f)[0], abelian_quotient_invariants(&f, &Subgroup::whole(&f)));
    }
}

#[test]
fn derived_series_of_final_groups() {
    let want = [
        ("-2379", vec!["[4,4]", "[2,4,16]"]),
        ("-445", vec!["[2,4]", "[2,2,4]", "[2]"]),
        ("-1015", vec!["[2,8]", "[2,2,4]", "[2]"]),
    ];
    for (id, factors) in want {
        let factors: Vec<AbelianInvariants> = factors.into_iter().map(ab).collect();
        for (_, g) in cases::case(id).unwrap().finals.groups().unwrap() {
            assert_eq!(derived_series_factors(&g), factors, "{id}");
        }
    }
}

#[test]
fn low_index_counts() {
    assert_eq!(low_index_subgroups(&PcPresentation::elementary_abelian(2, 2), 2).len(), 5);
    assert_eq!(low_index_subgroups(&pc(presentations::C2XC4), 2).len(), 7);
    let d4 = pc(presentations::D4);
    let mut b = BruteGroup::new(&d4);
    let t = b.table().unwrap();
    let brute = all_subgroups(&t).into_iter().filter(|s| s.len() >= 2).count();
    assert_eq!(low_index_subgroups(&d4, 2).len(), brute);
    let subs = low_index_subgroups(&d4, 2);
    let mut dedup = subs.clone();
    dedup.dedup();
    assert_eq!(subs, dedup);
}

#[test]
fn homomorphisms_and_preimages() {
    let g = pc(presentations::H6);
    let id = Homomorphism::new(g.clone(), g.clone(), g.generators()).unwrap();
    let s = subgroup_closure(&g, &[g.generator(0)]);
    assert_eq!(id.preimage(&s), s);
    assert_eq!(id.image(&Subgroup::whole(&g)), Subgroup::whole(&g));
    let (q, f) = class_quotient(&g, 1);
    let k = f.preimage(&Subgroup::trivial(&q));
    assert_eq!(k.order(2), 8);
    assert_eq!(k, lower_p_central_series(&g)[1]);
    assert!(f.is_surjective());
    assert_eq!(f.image(&Subgroup::whole(&g)), Subgroup::whole(&q));
    // a map killing x2 is not surjective onto [2,2]
    let bad = Homomorphism::new(g.clone(), q.clone(), vec![q.generator(0), q.identity(), q.identity(), q.identity(), q.identity()]);
    assert!(!bad.unwrap().is_surjective());
    // [4] -> [2,2] sending x2 = x1^2 to a nonidentity element
    let c4 = pc("p=2 n=2\nx1^2 = x2");
    assert!(matches!(
        Homomorphism::new(c4.clone(), q.clone(), vec![q.generator(0), q.generator(1)]),
        Err(Error::NotHomomorphism(_))
    ));
}

#[test]
fn surjection_counts() {
    let v4 = PcPresentation::elementary_abelian(2, 2);
    assert_eq!(all_surjections(&v4, &v4).len(), 6);
    let c4 = pc("p=2 n=2\nx1^2 = x2");
    let c2 = PcPresentation::elementary_abelian(2, 1);
    assert_eq!(all_surjections(&c4, &c2).len(), 1);
    let h4 = pc(presentations::H4);
    let c2c4 = pc(presentations::C2XC4);
    let n = all_surjections(&h4, &c2c4).len();
    assert!(n > 0);
    // Aut([2,4]) has order 8 and acts freely by composition
    assert_eq!(n % 8, 0);
    for f in all_surjections(&h4, &c2c4) {
        assert!(f.is_surjective());
    }
}

#[test]
fn quotient_and_isomorphism_tests() {
    let h4 = pc(presentations::H4);
    assert!(has_quotient(&h4, &pc(presentations::C2XC4)));
    assert!(!has_quotient(&pc(presentations::C2XC4), &pc(presentations::D4)));
    // class-2 quotient of the -445 groups
    let (h3, _) = class_quotient(&final_group("-445"), 2);
    assert!(is_isomorphic(&h3, &h4).unwrap());
    assert!(!is_isomorphic(&pc(presentations::D4), &pc(presentations::Q8)).unwrap());
    let big = final_group("-1015");
    assert!(matches!(is_isomorphic(&big, &big), Err(Error::SizeLimit { .. })));
}

#[test]
fn standardize_keeps_the_group() {
    let g = final_group("-445");
    let s = standardize(&g);
    assert!(s.presentation.has_definitions());
    assert!(is_isomorphic(&s.presentation, &g).unwrap());
}

#[test]
fn preimage_of_non_normal_subgroups() {
    let d4 = pc(presentations::D4);
    let (h, _) = class_quotient(&final_group("-1015"), 3);
    let maps = all_surjections(&h, &d4);
    assert!(!maps.is_empty());
    let subs = low_index_subgroups(&d4, 2);
    assert!(subs.iter().any(|s| !s.is_normal(&d4)));
    for f in maps.iter().take(4) {
        for t in &subs {
            let pre = f.preimage(t);
            let want: Vec<Element> = h.elements().into_iter().filter(|q| t.contains(&d4, &f.apply(q))).collect();
            assert_eq!(1usize << pre.order_log(), want.len());
            assert!(want.iter().all(|q| pre.contains(&h, q)));
        }
    }
    let id = Homomorphism::new(d4.clone(), d4.clone(), d4.generators()).unwrap();
    for t in &subs {
        assert_eq!(&id.preimage(t), t);
    }
}

#[test]
fn intersections() {
    let g = pc(presentations::H6);
    let a = subgroup_closure(&g, &[g.generator(0)]);
    let b = subgroup_closure(&g, &[g.generator(1)]);
    assert!(intersection(&g, &a, &b).is_trivial());
    let whole = Subgroup::whole(&g);
    assert_eq!(intersection(&g, &a, &whole), a);
}
