//! The `R+ / R- / R'` translation of connected guarded sentences.

use std::collections::BTreeSet;

use crate::amalgamation::{minimal_forbidden_family, FamilyLimits, ForbiddenFamily};
use crate::error::{Error, Result};
use crate::logic::{classify, fresh_name, Atom, Clause, Literal, SnpSentence};
use crate::structure::Signature;

/// Names of the translated symbols, in signature order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationMap {
    /// `(R, R+, R-)` for every existential `R`.
    pub existential: Vec<(String, String, String)>,
    /// `(R, R')` for every input symbol `R`.
    pub input: Vec<(String, String)>,
}

impl TranslationMap {
    pub fn plus(&self, r: &str) -> Option<&str> {
        self.existential.iter().find(|e| e.0 == r).map(|e| e.1.as_str())
    }

    pub fn minus(&self, r: &str) -> Option<&str> {
        self.existential.iter().find(|e| e.0 == r).map(|e| e.2.as_str())
    }

    pub fn primed(&self, r: &str) -> Option<&str> {
        self.input.iter().find(|e| e.0 == r).map(|e| e.1.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct GmsnpTranslation {
    pub map: TranslationMap,
    /// The translated symbols.
    pub sigma: Signature,
    /// The translated matrix as a universal sentence over `sigma`.
    pub matrix: SnpSentence,
    /// Largest clause width of the input.
    pub n: usize,
    /// Minimal structures over `sigma` with at most `n` elements falsifying
    /// the translated matrix.
    pub family: ForbiddenFamily,
}

/// Replaces `R` by `R+` and `~R` by `R-` for existential `R`, and input
/// symbols `R` by `R'`, then collects the forbidden structures of the
/// result up to the largest clause width.
pub fn gmsnp_translate(s: &SnpSentence, limits: FamilyLimits) -> Result<GmsnpTranslation> {
    let class = classify(s);
    if !class.guarded {
        return Err(Error::NotGuarded(
            class.witnesses.last().map(|w| w.to_string()).unwrap_or_default(),
        ));
    }
    if !class.connected {
        return Err(Error::InvalidArgument("sentence is not connected".into()));
    }
    let full = s.full_signature();
    let mut taken: BTreeSet<String> = full.symbols().iter().map(|sym| sym.name.clone()).collect();
    let mut fresh = |base: String| {
        let name = fresh_name(&base, |n| taken.contains(n));
        taken.insert(name.clone());
        name
    };
    let mut map = TranslationMap {
        existential: Vec::new(),
        input: Vec::new(),
    };
    let mut symbols = Vec::new();
    for sym in s.exist_sig().symbols() {
        let plus = fresh(format!("{}__p", sym.name));
        let minus = fresh(format!("{}__m", sym.name));
        symbols.push((plus.clone(), sym.arity));
        symbols.push((minus.clone(), sym.arity));
        map.existential.push((sym.name.clone(), plus, minus));
    }
    for sym in s.input_sig().symbols() {
        let primed = fresh(format!("{}__i", sym.name));
        symbols.push((primed.clone(), sym.arity));
        map.input.push((sym.name.clone(), primed));
    }
    let sigma = Signature::new(symbols)?;

    let translate = |l: &Literal| -> Literal {
        let args = l.atom.args.clone();
        if let Some(primed) = map.primed(&l.atom.symbol) {
            return Literal {
                positive: l.positive,
                atom: Atom::new(primed, args),
            };
        }
        let name = if l.positive { map.plus(&l.atom.symbol) } else { map.minus(&l.atom.symbol) };
        Literal::pos(name.expect("symbol of the sentence"), args)
    };
    let clauses: Vec<Clause> = s
        .matrix()
        .iter()
        .map(|c| Clause::new(c.literals.iter().map(translate).collect()))
        .collect();
    let matrix = SnpSentence::new(sigma.clone(), Signature::empty(), s.variables().to_vec(), clauses)?;
    let n = s.max_clause_vars();
    let family = minimal_forbidden_family(matrix.matrix(), &sigma, n, limits)?;
    Ok(GmsnpTranslation {
        map,
        sigma,
        matrix,
        n,
        family,
    })
}
