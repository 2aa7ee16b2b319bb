use snp_core::amalgamation::{decide_asnp, ApOptions, AsnpStage, FamilyLimits};
use snp_core::logic::parse_sentence;

fn decide(text: &str) -> snp_core::amalgamation::AsnpVerdict {
    let s = parse_sentence(text, None).unwrap();
    decide_asnp(&s, FamilyLimits::default(), &ApOptions::default()).unwrap()
}

#[test]
fn example_five_is_in_asnp() {
    assert!(decide(include_str!("../../../corpus/lt_acyclic.snp")).in_asnp);
}

#[test]
fn betweenness_is_in_asnp() {
    let v = decide(include_str!("../../../corpus/betweenness.snp"));
    assert!(v.in_asnp);
    assert_eq!(v.family.unwrap().len(), 4);
}

#[test]
fn cograph_part_fails_amalgamation() {
    let v = decide(
        "exists E/2. forall x,y,z,w.
           (E(x,x) -> false) & (E(x,y) -> E(y,x))
           & (E(x,y) & E(y,z) & E(z,w) -> E(x,z) | E(y,w) | E(x,w))
           & (G(x,y) -> E(x,y))",
    );
    assert!(!v.in_asnp);
    assert_eq!(v.failed, Some(AsnpStage::Amalgamation));
    assert!(v.ap.unwrap().witness.is_some());
}

#[test]
fn three_colouring_fails_the_shape() {
    let v = decide(include_str!("../../../corpus/three_colouring.snp"));
    assert!(!v.in_asnp);
    assert_eq!(v.failed, Some(AsnpStage::Shape));
}
