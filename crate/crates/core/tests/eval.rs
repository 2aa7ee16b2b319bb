mod oracles;

use snp_core::eval::{check_closure_properties, equivalent_up_to, models_up_to, satisfies, EvalLimits, Evaluator};
use snp_core::logic::{classify, parse_sentence, SnpSentence};
use snp_core::structure::enumerate_structures;
use snp_core::{Signature, Structure};

const ACYCLIC: &str = include_str!("../../../corpus/acyclic.snp");
const THREE_COL: &str = include_str!("../../../corpus/three_colouring.snp");
const BETWEENNESS: &str = include_str!("../../../corpus/betweenness.snp");

fn over(text: &str, sig: &Signature) -> SnpSentence {
    parse_sentence(text, Some(sig)).unwrap()
}

#[test]
fn acyclicity_matches_topological_sort() {
    let sig = Signature::new([("E", 2)]).unwrap();
    let s = over(ACYCLIC, &sig);
    let ev = Evaluator::new(&s, EvalLimits::default());
    for n in 0..=3 {
        for a in oracles::all_digraphs(n) {
            assert_eq!(ev.satisfies(&a).unwrap(), oracles::acyclic_oracle(&a), "{a:?}");
        }
    }
    for a in enumerate_structures(sig.clone(), 4).unwrap() {
        assert_eq!(ev.satisfies(&a).unwrap(), oracles::acyclic_oracle(&a));
    }
}

#[test]
fn three_colouring_matches_brute_force() {
    let sig = Signature::new([("E", 2)]).unwrap();
    let s = over(THREE_COL, &sig);
    let ev = Evaluator::new(&s, EvalLimits::default());
    for n in 0..=5 {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        for bits in 0..1u32 << pairs.len() {
            let mut g = Structure::new(sig.clone(), n);
            for (i, &(a, b)) in pairs.iter().enumerate() {
                if bits >> i & 1 == 1 {
                    g.insert("E", &[a, b]).unwrap();
                    g.insert("E", &[b, a]).unwrap();
                }
            }
            assert_eq!(ev.satisfies(&g).unwrap(), oracles::colourable_oracle(&g, 3));
        }
    }
}

#[test]
fn betweenness_matches_linear_orders_on_three_points() {
    let sig = Signature::new([("Betw", 3)]).unwrap();
    let s = over(BETWEENNESS, &sig);
    let triples = oracles::all_tuples(3, 3);
    // every labelled structure with at most 4 triples
    let mut count = 0;
    let mut pick = vec![];
    fn go(i: usize, pick: &mut Vec<usize>, triples: &[Vec<usize>], f: &mut dyn FnMut(&[usize])) {
        f(pick);
        if pick.len() == 4 {
            return;
        }
        for j in i..triples.len() {
            pick.push(j);
            go(j + 1, pick, triples, f);
            pick.pop();
        }
    }
    go(0, &mut pick, &triples, &mut |p: &[usize]| {
        let mut a = Structure::new(sig.clone(), 3);
        for &j in p {
            a.insert("Betw", &triples[j]).unwrap();
        }
        assert_eq!(satisfies(&a, &s).unwrap(), oracles::betweenness_oracle(&a));
        count += 1;
    });
    assert!(count > 20_000);
}

#[test]
fn expansions_verify() {
    let sig = Signature::new([("E", 2)]).unwrap();
    let s = over(ACYCLIC, &sig);
    let ev = Evaluator::new(&s, EvalLimits::default());
    for a in enumerate_structures(sig, 3).unwrap() {
        if let Some(e) = ev.expansion(&a).unwrap() {
            assert!(e.verify(&s));
        }
    }
}

#[test]
fn models_are_closed_under_substructures() {
    let s = parse_sentence(ACYCLIC, None).unwrap();
    let models = models_up_to(&s, 3, EvalLimits::default()).unwrap();
    // 1 + 1 + 2 + 6 acyclic digraphs on at most three vertices
    assert_eq!(models.len(), 10);
    for m in &models {
        for drop in 0..m.size() {
            let keep: Vec<usize> = (0..m.size()).filter(|&v| v != drop).collect();
            assert!(satisfies(&m.induced_substructure(&keep).unwrap(), &s).unwrap());
        }
    }
}

#[test]
fn connected_monotone_corpus_is_closed() {
    for text in [ACYCLIC, THREE_COL, include_str!("../../../corpus/unreachable.snp")] {
        let s = parse_sentence(text, None).unwrap();
        let c = classify(&s);
        assert!(c.connected && c.monotone);
        let r = check_closure_properties(&s, 2, EvalLimits::default()).unwrap();
        assert!(r.is_clean());
    }
}

#[test]
fn disconnected_sentence_breaks_union_closure() {
    let s = parse_sentence(include_str!("../../../corpus/u_or_v.snp"), None).unwrap();
    let r = check_closure_properties(&s, 1, EvalLimits::default()).unwrap();
    assert!(!r.union_violations.is_empty());
    assert!(r.homomorphism_violations.is_empty());
}

#[test]
fn sentence_is_equivalent_to_itself() {
    let s = parse_sentence(THREE_COL, None).unwrap();
    assert!(equivalent_up_to(&s, &s, 3, EvalLimits::default()).unwrap().holds);
}

#[test]
fn size_cap_is_reported() {
    let s = parse_sentence(ACYCLIC, None).unwrap();
    let err = models_up_to(&s, 9, EvalLimits::default()).unwrap_err();
    assert!(err.is_cap());
}
