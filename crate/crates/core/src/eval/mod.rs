//! Finite-model semantics: does a structure have an expansion satisfying
//! the first-order part of a sentence?
//!
//! A sentence is grounded over the domain of the input structure. Input
//! literals are decided by the structure, existential atoms become
//! propositional variables, and the resulting clause set is solved by a
//! small DPLL search. Clauses are instantiated under all maps from their own
//! variables to the domain, so on a nonempty domain this agrees with the
//! usual semantics of the universal quantifier prefix.

mod solver;

use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::logic::SnpSentence;
use crate::structure::{canonical_code, find_homomorphism, Enumerator, Signature, Structure};

pub use solver::first_violation;
use solver::{ground, Compiled, Solver};

/// Caps on the work done by one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalLimits {
    pub max_domain: usize,
    /// Existential atoms, i.e. candidate tuples of the existential relations.
    pub max_atoms: u64,
    pub max_ground_clauses: u64,
    /// Branching nodes of the expansion search.
    pub max_expansions: u64,
}

impl Default for EvalLimits {
    fn default() -> Self {
        EvalLimits {
            max_domain: 8,
            max_atoms: 1 << 25,
            max_ground_clauses: 1 << 25,
            max_expansions: 10_000_000,
        }
    }
}

/// An input structure together with interpretations of the existential
/// symbols over the same domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub base: Structure,
    pub exist: Structure,
}

impl Expansion {
    /// The expansion as one structure over input and existential symbols.
    pub fn combined(&self) -> Structure {
        let sig = self
            .base
            .signature()
            .union(self.exist.signature())
            .expect("disjoint signatures");
        let sig = Arc::new(sig);
        let mut out = self.base.expand_to(sig.clone()).expect("sub-signature");
        for (sym, s) in self.exist.signature().symbols().iter().enumerate() {
            let target = sig.index_of(&s.name).expect("present");
            for t in self.exist.tuples(sym) {
                out.insert_at(target, &t).expect("in range");
            }
        }
        out
    }

    /// Checks every clause under every assignment directly.
    pub fn verify(&self, s: &SnpSentence) -> bool {
        self.base.signature() == s.input_sig()
            && self.exist.signature() == s.exist_sig()
            && self.base.size() == self.exist.size()
            && first_violation(&self.combined(), s.matrix()).is_none()
    }
}

/// A sentence prepared for repeated evaluation.
#[derive(Debug, Clone)]
pub struct Evaluator {
    sentence: SnpSentence,
    compiled: Compiled,
    exist_sig: Arc<Signature>,
    limits: EvalLimits,
}

impl Evaluator {
    pub fn new(s: &SnpSentence, limits: EvalLimits) -> Self {
        Evaluator {
            sentence: s.clone(),
            compiled: Compiled::new(s),
            exist_sig: Arc::new(s.exist_sig().clone()),
            limits,
        }
    }

    pub fn sentence(&self) -> &SnpSentence {
        &self.sentence
    }

    pub fn limits(&self) -> &EvalLimits {
        &self.limits
    }

    fn check_input(&self, a: &Structure) -> Result<()> {
        if a.signature() != self.sentence.input_sig() {
            return Err(Error::SignatureMismatch(format!(
                "structure over {} but sentence over {}",
                a.signature(),
                self.sentence.input_sig()
            )));
        }
        if a.size() > self.limits.max_domain {
            return Err(Error::cap("domain size", a.size() as u128, self.limits.max_domain as u128));
        }
        Ok(())
    }

    /// Some satisfying expansion of `a`, or `None` if `a` is not a model.
    pub fn expansion(&self, a: &Structure) -> Result<Option<Expansion>> {
        self.check_input(a)?;
        let g = ground(&self.compiled, a, &self.limits)?;
        if g.trivially_false {
            return Ok(None);
        }
        let Some(values) = Solver::new(&g, self.limits.max_expansions).solve()? else {
            return Ok(None);
        };
        let mut exist = Structure::new(self.exist_sig.clone(), a.size());
        for (sym, &offset) in g.offsets.iter().enumerate() {
            let arity = self.exist_sig.symbols()[sym].arity;
            for idx in 0..a.size().pow(arity as u32) {
                if values[offset + idx] {
                    exist.insert_index(sym, idx);
                }
            }
        }
        let e = Expansion {
            base: a.clone(),
            exist,
        };
        if !e.verify(&self.sentence) {
            return Err(Error::Internal("expansion failed verification".into()));
        }
        Ok(Some(e))
    }

    pub fn satisfies(&self, a: &Structure) -> Result<bool> {
        Ok(self.expansion(a)?.is_some())
    }
}

/// Whether `a` is a model of `s`, with default limits.
pub fn satisfies(a: &Structure, s: &SnpSentence) -> Result<bool> {
    Evaluator::new(s, EvalLimits::default()).satisfies(a)
}

/// A satisfying expansion of `a`, if there is one.
pub fn find_expansion(a: &Structure, s: &SnpSentence, limits: EvalLimits) -> Result<Option<Expansion>> {
    Evaluator::new(s, limits).expansion(a)
}

/// One model per isomorphism class of size at most `n`, sorted by
/// canonical code. Model classes of SNP sentences are closed under induced
/// substructures, so the enumeration only extends models.
pub fn models_up_to(s: &SnpSentence, n: usize, limits: EvalLimits) -> Result<Vec<Structure>> {
    check_size(n, &limits)?;
    let ev = Evaluator::new(s, limits);
    Enumerator::new(s.input_sig().clone(), n)
        .try_hereditary(|a| ev.satisfies(a))
        .run()
}

fn check_size(n: usize, limits: &EvalLimits) -> Result<()> {
    if n > limits.max_domain {
        return Err(Error::cap("size bound", n as u128, limits.max_domain as u128));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equivalence {
    pub holds: bool,
    /// The disagreement with least canonical code.
    pub counterexample: Option<Structure>,
    /// Which sentence the counterexample satisfies (1 or 2).
    pub satisfied_by: Option<u8>,
    /// Isomorphism classes on which both sentences were evaluated.
    pub classes_checked: usize,
}

/// Compares two sentences over the same input signature on every
/// isomorphism class of size at most `n`. Classes that are non-models of
/// both sentences are not extended: their extensions are non-models too.
pub fn equivalent_up_to(
    s1: &SnpSentence,
    s2: &SnpSentence,
    n: usize,
    limits: EvalLimits,
) -> Result<Equivalence> {
    if s1.input_sig() != s2.input_sig() {
        return Err(Error::SignatureMismatch(format!(
            "{} vs {}",
            s1.input_sig(),
            s2.input_sig()
        )));
    }
    check_size(n, &limits)?;
    let (e1, e2) = (Evaluator::new(s1, limits), Evaluator::new(s2, limits));
    let mut checked = 0;
    let mut worst: Option<(crate::structure::CanonicalCode, Structure, u8)> = None;
    Enumerator::new(s1.input_sig().clone(), n)
        .try_hereditary(|a| {
            checked += 1;
            let (m1, m2) = (e1.satisfies(a)?, e2.satisfies(a)?);
            if m1 != m2 {
                let code = canonical_code(a);
                if worst.as_ref().is_none_or(|(c, _, _)| code < *c) {
                    worst = Some((code, a.clone(), if m1 { 1 } else { 2 }));
                }
            }
            Ok(m1 || m2)
        })
        .run()?;
    Ok(Equivalence {
        holds: worst.is_none(),
        satisfied_by: worst.as_ref().map(|w| w.2),
        counterexample: worst.map(|w| w.1),
        classes_checked: checked,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClosureReport {
    pub models: usize,
    /// Isomorphism classes evaluated: the models and the minimal
    /// non-models.
    pub classes: usize,
    /// Pairs of models whose disjoint union is not a model.
    pub union_violations: Vec<(Structure, Structure)>,
    /// Pairs (a, b) with b a model, a homomorphism a -> b, and a a minimal
    /// non-model.
    pub homomorphism_violations: Vec<(Structure, Structure)>,
}

impl ClosureReport {
    pub fn is_clean(&self) -> bool {
        self.union_violations.is_empty() && self.homomorphism_violations.is_empty()
    }
}

/// Tests closure of the model class under disjoint unions and inverse
/// homomorphisms on all isomorphism classes of size at most `n`. Unions of
/// two models (of size up to `2n`) are evaluated directly.
///
/// Homomorphisms are only tried from minimal non-models, those whose
/// proper induced substructures are all models. Every non-model of size at
/// most `n` contains one, so the class is closed under inverse
/// homomorphisms up to `n` exactly when no violation is reported.
pub fn check_closure_properties(s: &SnpSentence, n: usize, limits: EvalLimits) -> Result<ClosureReport> {
    check_size(2 * n, &limits)?;
    let ev = Evaluator::new(s, limits);
    let mut non_models = Vec::new();
    let mut model_codes = HashSet::new();
    let models = Enumerator::new(s.input_sig().clone(), n)
        .try_hereditary(|a| {
            if ev.satisfies(a)? {
                model_codes.insert(canonical_code(a));
                return Ok(true);
            }
            // levels come in order of size, so all smaller models are known
            let all: Vec<usize> = (0..a.size()).collect();
            let mut minimal = true;
            for v in 0..a.size() {
                let mut rest = all.clone();
                rest.remove(v);
                if !model_codes.contains(&canonical_code(&a.induced_substructure(&rest)?)) {
                    minimal = false;
                    break;
                }
            }
            if minimal {
                non_models.push(a.clone());
            }
            Ok(false)
        })
        .run()?;
    let mut report = ClosureReport {
        models: models.len(),
        classes: models.len() + non_models.len(),
        ..Default::default()
    };
    for (i, a) in models.iter().enumerate() {
        for b in &models[i..] {
            if !ev.satisfies(&a.disjoint_union(b)?)? {
                report.union_violations.push((a.clone(), b.clone()));
            }
        }
    }
    for a in &non_models {
        for b in &models {
            if find_homomorphism(a, b)?.is_some() {
                report.homomorphism_violations.push((a.clone(), b.clone()));
            }
        }
    }
    Ok(report)
}

/// Pairs of nonempty models with total size at most `max_total` whose
/// disjoint union is not a model.
pub fn union_closure_violations(
    s: &SnpSentence,
    max_total: usize,
    limits: EvalLimits,
) -> Result<Vec<(Structure, Structure)>> {
    check_size(max_total, &limits)?;
    let ev = Evaluator::new(s, limits);
    let models = models_up_to(s, max_total.saturating_sub(1), limits)?;
    let mut out = Vec::new();
    for (i, a) in models.iter().enumerate().filter(|(_, a)| a.size() > 0) {
        for b in models[i..].iter().filter(|b| b.size() > 0) {
            if a.size() + b.size() <= max_total && !ev.satisfies(&a.disjoint_union(b)?)? {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    Ok(out)
}

/// Serializable summary of a closure report.
#[derive(Debug, Clone, Serialize)]
pub struct ClosureSummary {
    pub models: usize,
    pub classes: usize,
    pub union_violations: usize,
    pub homomorphism_violations: usize,
}

impl From<&ClosureReport> for ClosureSummary {
    fn from(r: &ClosureReport) -> Self {
        ClosureSummary {
            models: r.models,
            classes: r.classes,
            union_violations: r.union_violations.len(),
            homomorphism_violations: r.homomorphism_violations.len(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_sentence;

    const ACYCLIC: &str = "exists T/2. forall x,y,z. (E(x,y) -> T(x,y)) & (T(x,y) & T(y,z) -> T(x,z)) & (T(x,x) -> false)";
    const THREE_COL: &str = "exists R/1, G/1, B/1. forall x,y.
        (R(x) | G(x) | B(x))
        & (E(x,y) & R(x) & R(y) -> false) & (E(x,y) & G(x) & G(y) -> false) & (E(x,y) & B(x) & B(y) -> false)";

    fn digraph(n: usize, edges: &[(usize, usize)]) -> Structure {
        let sig = Signature::new([("E", 2)]).unwrap();
        let mut s = Structure::new(sig, n);
        for &(a, b) in edges {
            s.insert("E", &[a, b]).unwrap();
        }
        s
    }

    fn graph(n: usize, edges: &[(usize, usize)]) -> Structure {
        let both: Vec<_> = edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
        digraph(n, &both)
    }

    #[test]
    fn path_is_acyclic_and_witness_verifies() {
        let s = parse_sentence(ACYCLIC, None).unwrap();
        let path = digraph(3, &[(0, 1), (1, 2)]);
        let e = find_expansion(&path, &s, EvalLimits::default()).unwrap().unwrap();
        assert!(e.verify(&s));
        assert!(e.exist.contains(0, &[0, 2]));
    }

    #[test]
    fn three_cycle_is_not_acyclic() {
        let s = parse_sentence(ACYCLIC, None).unwrap();
        assert!(!satisfies(&digraph(3, &[(0, 1), (1, 2), (2, 0)]), &s).unwrap());
    }

    #[test]
    fn three_colouring() {
        let s = parse_sentence(THREE_COL, None).unwrap();
        let k = |n: usize| {
            let mut e = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    e.push((i, j));
                }
            }
            graph(n, &e)
        };
        assert!(satisfies(&k(3), &s).unwrap());
        assert!(!satisfies(&k(4), &s).unwrap());
    }

    #[test]
    fn acyclic_models_on_two_elements() {
        let s = parse_sentence(ACYCLIC, None).unwrap();
        let models = models_up_to(&s, 2, EvalLimits::default()).unwrap();
        // empty, one point, two points without or with one edge
        let sizes: Vec<usize> = models.iter().map(|m| m.size()).collect();
        assert_eq!(sizes, vec![0, 1, 2, 2]);
        assert!(models.iter().all(|m| m.total_tuples() <= 1));
    }

    #[test]
    fn vacuous_sentences_admit_everything() {
        let s = parse_sentence("exists T/2. forall x. true", Some(&Signature::new([("E", 2)]).unwrap())).unwrap();
        assert_eq!(models_up_to(&s, 2, EvalLimits::default()).unwrap().len(), 1 + 2 + 10);
        let guard = parse_sentence("forall x,y. (E(x,y) -> false)", None).unwrap();
        let m = models_up_to(&guard, 3, EvalLimits::default()).unwrap();
        assert_eq!(m.len(), 4);
        assert!(m.iter().all(|a| a.total_tuples() == 0));
    }

    #[test]
    fn equivalence_finds_the_two_cycle() {
        let a = parse_sentence(ACYCLIC, None).unwrap();
        let t = parse_sentence("exists T/2. forall x. true", Some(a.input_sig())).unwrap();
        let r = equivalent_up_to(&a, &t, 2, EvalLimits::default()).unwrap();
        assert!(!r.holds);
        // the least non-acyclic structure is the single loop
        assert_eq!(r.counterexample.unwrap(), digraph(1, &[(0, 0)]));
        assert!(equivalent_up_to(&a, &a, 3, EvalLimits::default()).unwrap().holds);
    }

    #[test]
    fn closure_of_a_csp() {
        let s = parse_sentence(ACYCLIC, None).unwrap();
        assert!(check_closure_properties(&s, 3, EvalLimits::default()).unwrap().is_clean());
    }

    #[test]
    fn complete_digraphs_are_not_closed() {
        // not monotone: models are the complete digraphs with all loops
        let s = parse_sentence("forall x,y. (E(x,y))", None).unwrap();
        let r = check_closure_properties(&s, 2, EvalLimits::default()).unwrap();
        assert_eq!(r.models, 3);
        assert!(!r.union_violations.is_empty());
        // the edgeless point maps onto the loop
        assert!(r
            .homomorphism_violations
            .iter()
            .any(|(a, b)| a == &digraph(1, &[]) && b == &digraph(1, &[(0, 0)])));
    }

    #[test]
    fn signature_mismatch_is_an_error() {
        let s = parse_sentence(ACYCLIC, None).unwrap();
        let other = Structure::new(Signature::new([("F", 2)]).unwrap(), 1);
        assert!(matches!(satisfies(&other, &s), Err(Error::SignatureMismatch(_))));
    }

    #[test]
    fn caps_are_errors() {
        let s = parse_sentence(ACYCLIC, None).unwrap();
        let limits = EvalLimits {
            max_domain: 2,
            ..EvalLimits::default()
        };
        assert!(Evaluator::new(&s, limits).satisfies(&digraph(3, &[])).unwrap_err().is_cap());
    }
}
