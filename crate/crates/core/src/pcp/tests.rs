use super::*;
use proptest::prelude::*;

fn h4() -> PcPresentation {
    parse_presentation("p=2 n=4\nx1^2 = x4; [x2,x1] = x3").unwrap()
}

fn h6() -> PcPresentation {
    parse_presentation("p=2 n=5\nx1^2 = x4; x2^2 = x5; [x2,x1] = x3").unwrap()
}

fn el(v: &[u8]) -> Element {
    Element::from_exponents(v.to_vec())
}

/// Brute-force associativity of normal-form multiplication. Since the
/// collected product always satisfies the defining relations, it is
/// associative exactly when the presentation is consistent.
fn associative(pc: &PcPresentation) -> bool {
    let els = pc.elements();
    let table: Vec<Vec<Element>> = els.iter().map(|a| els.iter().map(|b| pc.multiply(a, b)).collect()).collect();
    let idx = |e: &Element| {
        e.exponents().iter().fold(0usize, |acc, &x| acc * pc.prime() as usize + x as usize)
    };
    for a in 0..els.len() {
        for b in 0..els.len() {
            let ab = idx(&table[a][b]);
            for c in 0..els.len() {
                let bc = idx(&table[b][c]);
                if table[ab][c] != table[a][bc] {
                    return false;
                }
            }
        }
    }
    true
}

#[test]
fn h4_basic_products() {
    let g = h4();
    // x2 x1 = x1 x2 [x2,x1]
    assert_eq!(g.multiply(&g.generator(1), &g.generator(0)), el(&[1, 1, 1, 0]));
    assert_eq!(g.power_of(&g.generator(0), 2), g.generator(3));
    assert_eq!(g.element_order(&g.generator(0)), 4);
    assert_eq!(g.element_order(&g.generator(1)), 2);
    assert!(g.is_consistent());
    assert_eq!(g.minimal_generators(), 2);
    assert_eq!(g.weights(), &[1, 1, 2, 2]);
    assert!(g.has_definitions());
}

#[test]
fn h6_commutator() {
    let g = h6();
    let c = g.commutator(&g.generator(1), &g.generator(0));
    assert_eq!(c, g.generator(2));
    let c2 = g.commutator(&g.generator(0), &g.generator(1));
    assert_eq!(c2, g.generator(2));
    assert!(associative(&g));
}

#[test]
fn inverse_and_identity() {
    let g = h6();
    for a in g.elements() {
        let ai = g.inverse(&a);
        assert!(g.multiply(&a, &ai).is_identity());
        assert!(g.multiply(&ai, &a).is_identity());
        assert_eq!(g.multiply(&a, &g.identity()), a);
        assert_eq!(g.multiply(&g.identity(), &a), a);
    }
}

#[test]
fn collect_words() {
    let g = h4();
    let w = vec![(1, 1), (0, 1), (1, -1), (0, -1)];
    // x2 x1 x2^-1 x1^-1 = [x2^-1, x1^-1] = x3 in this group
    assert_eq!(g.collect(&w), g.generator(2));
    assert_eq!(g.collect(&vec![(0, 4)]), g.identity());
    assert_eq!(g.collect(&vec![(0, -1)]), el(&[1, 0, 0, 1]));
}

#[test]
fn inconsistent_detected() {
    let text = "p=2 n=3\nx1^2 = x2; [x2,x1] = x3";
    let pc = PcPresentation::from_relations(
        2,
        3,
        vec![el(&[0, 1, 0]), el(&[0, 0, 0]), el(&[0, 0, 0])],
        vec![vec![], vec![el(&[0, 0, 1])], vec![el(&[0, 0, 0]), el(&[0, 0, 0])]],
    )
    .unwrap();
    assert!(!pc.is_consistent());
    assert!(!associative(&pc));
    assert!(matches!(parse_presentation(text), Err(Error::Inconsistent)));
}

#[test]
fn malformed_tail_rejected() {
    let r = parse_presentation("p=2 n=3\n[x3,x1] = x2");
    assert!(matches!(r, Err(Error::Malformed(_))));
}

#[test]
fn parse_errors() {
    assert!(matches!(parse_presentation("p=2 n=2\nx3^2 = x1"), Err(Error::UnknownGenerator { .. })));
    assert!(matches!(parse_presentation("p=2 n=2\nx1^2 x2"), Err(Error::Syntax(_))));
    assert!(matches!(parse_presentation("p=2 n=3\n[x1,x2] = x3"), Err(Error::Syntax(_))));
    assert!(matches!(parse_presentation("p=2 n=3\nx1^2 = x3 x2"), Err(Error::Syntax(_))));
    assert!(matches!(parse_presentation("p=4 n=1"), Err(Error::Syntax(_))));
}

#[test]
fn parameters_in_exponents() {
    let text = "p=2 n=3\n[x2,x1] = x3^{1-r}";
    let mut params = BTreeMap::new();
    params.insert("r".to_string(), 0);
    let g = parse_presentation_with(text, &params).unwrap();
    assert_eq!(g.comm_rhs(1, 0), &g.generator(2));
    params.insert("r".to_string(), 1);
    let g = parse_presentation_with(text, &params).unwrap();
    assert!(g.comm_rhs(1, 0).is_identity());
    assert_eq!(substitute_params("x3^{1-r} x4^r", &params), "x3^{1-1} x4^1");
}

#[test]
fn text_round_trip() {
    for g in [h4(), h6()] {
        let back = parse_presentation(&g.to_text()).unwrap();
        assert_eq!(back, g);
    }
}

use std::collections::BTreeMap;

fn arb_presentation(p: u8, n: usize) -> impl Strategy<Value = PcPresentation> {
    let slots = n + n * (n - 1) / 2;
    proptest::collection::vec(proptest::collection::vec(0..p, n), slots).prop_map(move |raw| {
        let mut it = raw.into_iter();
        let mask = |v: Vec<u8>, after: usize| {
            let mut v = v;
            v[..=after].iter_mut().for_each(|x| *x = 0);
            Element(v)
        };
        let power: Vec<Element> = (0..n).map(|i| mask(it.next().unwrap(), i)).collect();
        let comm: Vec<Vec<Element>> = (0..n).map(|j| (0..j).map(|_| mask(it.next().unwrap(), j)).collect()).collect();
        PcPresentation::from_relations(p, n, power, comm).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn consistency_matches_associativity_p2(g in (2usize..=4).prop_flat_map(|n| arb_presentation(2, n))) {
        prop_assert_eq!(g.is_consistent(), associative(&g));
    }

    #[test]
    fn consistency_matches_associativity_p3(g in arb_presentation(3, 3)) {
        prop_assert_eq!(g.is_consistent(), associative(&g));
    }

    #[test]
    fn collect_is_homomorphic(w1 in proptest::collection::vec((0usize..5, -3i64..4), 0..12),
                              w2 in proptest::collection::vec((0usize..5, -3i64..4), 0..12)) {
        let g = h6();
        let mut w = w1.clone();
        w.extend(w2.iter().copied());
        prop_assert_eq!(g.collect(&w), g.multiply(&g.collect(&w1), &g.collect(&w2)));
    }
}
