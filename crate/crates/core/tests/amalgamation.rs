mod oracles;

use proptest::prelude::*;
use snp_core::amalgamation::{
    decide_ap, decide_one_point_diagram, minimize_family, ApOptions, Diagram, ForbiddenFamily,
};
use snp_core::{Signature, Structure};

fn sig() -> Signature {
    Signature::new([("E", 2)]).unwrap()
}

fn digraph(n: usize, edges: &[(usize, usize)]) -> Structure {
    let mut s = Structure::new(sig(), n);
    for &(a, b) in edges {
        s.insert("E", &[a, b]).unwrap();
    }
    s
}

fn family(members: Vec<Structure>) -> ForbiddenFamily {
    ForbiddenFamily::new(sig(), members).unwrap()
}

fn strict_orders() -> ForbiddenFamily {
    family(vec![
        digraph(1, &[(0, 0)]),
        digraph(2, &[(0, 1), (1, 0)]),
        digraph(3, &[(0, 1), (1, 2)]),
        digraph(3, &[(0, 1), (1, 2), (2, 0)]),
    ])
}

fn matchings() -> ForbiddenFamily {
    family(vec![
        digraph(1, &[(0, 0)]),
        digraph(2, &[(0, 1)]),
        digraph(3, &[(0, 1), (1, 0), (1, 2), (2, 1)]),
        digraph(3, &[(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)]),
    ])
}

fn opts(strong: bool) -> ApOptions {
    ApOptions { strong, ..Default::default() }
}

fn oracle_holds(f: &ForbiddenFamily, max_b0: usize, strong: bool) -> bool {
    oracles::find_failing_diagram(f.signature(), f.members(), max_b0, strong).is_none()
}

#[test]
fn strict_orders_agree_with_oracle() {
    let f = strict_orders();
    for strong in [false, true] {
        let v = decide_ap(&f, &opts(strong)).unwrap();
        assert!(v.holds);
        assert!(oracle_holds(&f, 4, strong));
    }
}

#[test]
fn matchings_fail_only_when_points_stay_apart() {
    let f = matchings();
    let strong = decide_ap(&f, &opts(true)).unwrap();
    assert!(!strong.holds);
    assert!(!oracle_holds(&f, 3, true));
    let d = strong.witness.unwrap();
    assert_eq!(decide_one_point_diagram(&f, &d, true).unwrap(), None);

    assert!(decide_ap(&f, &opts(false)).unwrap().holds);
    assert!(oracle_holds(&f, 3, false));
}

#[test]
fn oracle_witness_is_rejected_by_library() {
    let f = matchings();
    let (b0, b1, b2) = oracles::find_failing_diagram(f.signature(), f.members(), 3, true).unwrap();
    let d = Diagram::new(b0, b1, b2).unwrap();
    assert_eq!(decide_one_point_diagram(&f, &d, true).unwrap(), None);
}

#[test]
fn amalgams_found_by_library_are_in_the_class() {
    let f = strict_orders();
    // two incomparable points above a common minimum
    let b0 = digraph(1, &[]);
    let b1 = digraph(2, &[(0, 1)]);
    let b2 = digraph(2, &[(0, 1)]);
    let d = Diagram::new(b0, b1, b2).unwrap();
    let c = decide_one_point_diagram(&f, &d, true).unwrap().unwrap();
    assert_eq!(c.size(), 3);
    assert!(oracles::admits(f.members(), &c));
}

fn arb_member(n: usize) -> impl Strategy<Value = Structure> {
    proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
        let mut s = Structure::new(sig(), n);
        for a in 0..n {
            for b in 0..n {
                if a != b && bits[a * n + b] {
                    s.insert("E", &[a, b]).unwrap();
                }
            }
        }
        s
    })
}

fn arb_family() -> impl Strategy<Value = ForbiddenFamily> {
    (arb_member(2), proptest::collection::vec(arb_member(3), 0..=3)).prop_map(|(pair, mut ms)| {
        ms.push(digraph(1, &[(0, 0)]));
        ms.push(pair);
        minimize_family(&family(ms)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn decide_ap_agrees_with_brute_force(f in arb_family(), strong in any::<bool>()) {
        let v = decide_ap(&f, &opts(strong)).unwrap();
        prop_assert_eq!(v.holds, oracle_holds(&f, 4, strong));
        if let Some(d) = &v.witness {
            prop_assert_eq!(decide_one_point_diagram(&f, d, strong).unwrap(), None);
        }
    }

    #[test]
    fn verdict_is_invariant_under_relabelling(f in arb_family(), strong in any::<bool>()) {
        let relabelled: Vec<Structure> = f
            .members()
            .iter()
            .map(|m| {
                let perm: Vec<usize> = (0..m.size()).rev().collect();
                m.relabel(&perm)
            })
            .collect();
        let g = family(relabelled);
        prop_assert_eq!(decide_ap(&f, &opts(strong)).unwrap().holds, decide_ap(&g, &opts(strong)).unwrap().holds);
    }
}
