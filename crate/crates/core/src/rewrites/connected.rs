//! Rewriting a monotone sentence into a connected one.

use crate::error::{Error, Result};
use crate::logic::{classify, fresh_name, Clause, Literal, SnpSentence};
use crate::structure::Signature;

/// Adds a fresh binary existential `E` ("same component") and guards every
/// clause with `~E` over all pairs of its variables:
///
/// * `~R(x1..xp) | E(xi,xj)` for every input symbol `R` and `i < j <= p`,
/// * transitivity and symmetry of `E`,
/// * `E(x1,x1)`,
/// * `C | ~E(yi,yj)` (all `i < j`) for every clause `C` with variables `y`.
///
/// The reflexivity clause makes `E` an equivalence relation whose classes
/// are unions of components; without it a point `a` with `~E(a,a)` would
/// switch off every clause instance that sends two variables to `a`.
/// The result is connected and monotone, and equivalent to the input when
/// the input's models are closed under disjoint unions.
pub fn rewrite_connected(s: &SnpSentence) -> Result<SnpSentence> {
    let class = classify(s);
    if !class.monotone {
        return Err(Error::NotMonotone(format!("{:?}", class.witnesses.first())));
    }
    let full = s.full_signature();
    let e = fresh_name("E__c", |n| full.contains(n));
    let mut warnings = Vec::new();
    if e != "E__c" {
        warnings.push(format!("E__c is taken; the component relation is named {e}"));
    }

    let max_arity = s.input_sig().max_arity();
    let mut variables = s.variables().to_vec();
    let needed = 3.max(max_arity);
    let mut i = 1;
    while variables.len() < needed {
        let v = fresh_name(&format!("v{i}"), |n| variables.iter().any(|w| w == n));
        variables.push(v);
        i += 1;
    }

    let mut matrix = Vec::new();
    for sym in s.input_sig().symbols() {
        let args: Vec<usize> = (0..sym.arity).collect();
        for i in 0..sym.arity {
            for j in i + 1..sym.arity {
                matrix.push(Clause::new(vec![
                    Literal::neg(sym.name.clone(), args.clone()),
                    Literal::pos(e.clone(), vec![i, j]),
                ]));
            }
        }
    }
    matrix.push(Clause::new(vec![
        Literal::neg(e.clone(), vec![0, 1]),
        Literal::neg(e.clone(), vec![1, 2]),
        Literal::pos(e.clone(), vec![0, 2]),
    ]));
    matrix.push(Clause::new(vec![
        Literal::neg(e.clone(), vec![0, 1]),
        Literal::pos(e.clone(), vec![1, 0]),
    ]));
    matrix.push(Clause::new(vec![Literal::pos(e.clone(), vec![0, 0])]));
    for c in s.matrix() {
        let mut literals = c.literals.clone();
        let vars = c.variables();
        for (a, &yi) in vars.iter().enumerate() {
            for &yj in &vars[a + 1..] {
                literals.push(Literal::neg(e.clone(), vec![yi, yj]));
            }
        }
        matrix.push(Clause::new(literals));
    }

    let mut exist: Vec<(String, usize)> =
        s.exist_sig().symbols().iter().map(|sym| (sym.name.clone(), sym.arity)).collect();
    exist.push((e, 2));
    let out = SnpSentence::new(s.input_sig().clone(), Signature::new(exist)?, variables, matrix)?;
    Ok(out.with_warnings(warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{equivalent_up_to, EvalLimits};
    use crate::logic::parse_sentence;

    const LT_ACYCLIC: &str =
        "exists T/2. forall x,y,z. (lt(x,y) -> T(x,y)) & (T(x,y) & T(y,z) -> T(x,z)) & (T(x,x) -> false)";

    #[test]
    fn example_five_is_preserved() {
        let s = parse_sentence(LT_ACYCLIC, None).unwrap();
        let r = rewrite_connected(&s).unwrap();
        let c = classify(&r);
        assert!(c.monotone && c.connected);
        assert!(r.exist_sig().contains("E__c"));
        assert!(equivalent_up_to(&s, &r, 4, EvalLimits::default()).unwrap().holds);
    }

    #[test]
    fn guard_clause_instance() {
        let s = parse_sentence("forall x,y. (~E(x,y))", None).unwrap();
        let r = rewrite_connected(&s).unwrap();
        let text = r.to_string();
        assert!(text.contains("(~E(x,y) | E__c(x,y))"), "{text}");
        assert_eq!(r.variables().len(), 3);
        assert!(r.warnings().is_empty());
        let s = parse_sentence("exists E__c/1. forall x. (E__c(x))", None).unwrap();
        let r = rewrite_connected(&s).unwrap();
        assert!(r.exist_sig().contains("E__c__2"));
        assert_eq!(r.warnings().len(), 1);
    }

    #[test]
    fn disconnected_input_still_rewrites() {
        let s = parse_sentence("forall x,y. (~U(x) | ~U(y))", None).unwrap();
        let r = rewrite_connected(&s).unwrap();
        let c = classify(&r);
        assert!(c.monotone && c.connected);
    }

    #[test]
    fn reflexivity_is_needed() {
        // no U-element; the clause over x,y is only reachable through S
        let s = parse_sentence("exists S/2. forall x,y. (U(x) -> S(x,x)) & (S(x,y) -> false)", None).unwrap();
        let r = rewrite_connected(&s).unwrap();
        assert!(equivalent_up_to(&s, &r, 3, EvalLimits::default()).unwrap().holds);
        let without: Vec<Clause> = r
            .matrix()
            .iter()
            .filter(|c| !(c.literals.len() == 1 && c.literals[0].positive))
            .cloned()
            .collect();
        let weak = SnpSentence::new(r.input_sig().clone(), r.exist_sig().clone(), r.variables().to_vec(), without)
            .unwrap();
        let eq = equivalent_up_to(&s, &weak, 3, EvalLimits::default()).unwrap();
        assert!(!eq.holds);
    }

    #[test]
    fn rejects_non_monotone() {
        let s = parse_sentence("exists T/2. forall x,y. (lt(x,y) | T(x,y))", None).unwrap();
        assert!(matches!(rewrite_connected(&s), Err(Error::NotMonotone(_))));
    }
}
