//! Syntactic properties of sentences: monotone, monadic, connected,
//! guarded, and the clause shape required of ASNP sentences.

use std::fmt;

use serde::Serialize;

use super::{Clause, SnpSentence};
use crate::structure::{Signature, Structure};

/// Why a property fails, pointing at the first offending clause, literal
/// or symbol. Indices are zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "property", rename_all = "snake_case")]
pub enum Witness {
    /// A positive literal with an input symbol.
    Monotone { clause: usize, literal: usize },
    /// An existential symbol of arity other than one.
    Monadic { symbol: String },
    /// A clause whose negative literals leave its variables disconnected.
    Connected { clause: usize, components: usize },
    /// A positive literal that is not an existential atom covered by some
    /// negative literal of the same clause.
    Guarded { clause: usize, literal: usize },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Monotone { clause, literal } => {
                write!(f, "literal {} of clause {} has an input symbol and is positive", literal + 1, clause + 1)
            }
            Witness::Monadic { symbol } => write!(f, "{symbol} is not unary"),
            Witness::Connected { clause, components } => {
                write!(f, "clause {} has {components} components", clause + 1)
            }
            Witness::Guarded { clause, literal } => {
                write!(f, "literal {} of clause {} is not guarded", literal + 1, clause + 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub monotone: bool,
    pub monadic: bool,
    pub connected: bool,
    pub guarded: bool,
    pub witnesses: Vec<Witness>,
}

/// The structure on the variables of `c` (in order of first occurrence)
/// whose tuples are the arguments of the negative literals. Symbols absent
/// from `sig` are ignored.
pub fn clause_structure(c: &Clause, sig: &Signature) -> Structure {
    let vars = c.variables();
    let mut s = Structure::new(sig.clone(), vars.len());
    for l in c.literals.iter().filter(|l| !l.positive) {
        if let Some(sym) = sig.index_of(&l.atom.symbol) {
            let t: Vec<usize> = l
                .atom
                .args
                .iter()
                .map(|v| vars.iter().position(|w| w == v).expect("variable of clause"))
                .collect();
            s.insert_at(sym, &t).expect("in range");
        }
    }
    s
}

fn covered(c: &Clause, literal: usize) -> bool {
    let head = &c.literals[literal].atom.args;
    c.literals
        .iter()
        .filter(|l| !l.positive)
        .any(|body| head.iter().all(|v| body.atom.args.contains(v)))
}

fn monotone_violation(s: &SnpSentence, ci: usize) -> Option<usize> {
    s.matrix[ci]
        .literals
        .iter()
        .position(|l| l.positive && s.is_input(&l.atom.symbol))
}

fn guard_violation(s: &SnpSentence, ci: usize) -> Option<usize> {
    let c = &s.matrix[ci];
    (0..c.literals.len()).find(|&li| {
        let l = &c.literals[li];
        l.positive && (s.is_input(&l.atom.symbol) || !covered(c, li))
    })
}

fn components(s: &SnpSentence, sig: &Signature, ci: usize) -> usize {
    clause_structure(&s.matrix[ci], sig).connected_components().len()
}

pub fn classify(s: &SnpSentence) -> Classification {
    let sig = s.full_signature();
    let mut witnesses = Vec::new();

    let monotone_w = (0..s.matrix.len())
        .find_map(|ci| monotone_violation(s, ci).map(|li| Witness::Monotone { clause: ci, literal: li }));
    let monadic_w = s
        .exist_sig
        .symbols()
        .iter()
        .find(|sym| sym.arity != 1)
        .map(|sym| Witness::Monadic {
            symbol: sym.name.clone(),
        });
    let connected_w = (0..s.matrix.len()).find_map(|ci| {
        let n = components(s, &sig, ci);
        (n > 1).then_some(Witness::Connected {
            clause: ci,
            components: n,
        })
    });
    let guarded_w = (0..s.matrix.len())
        .find_map(|ci| guard_violation(s, ci).map(|li| Witness::Guarded { clause: ci, literal: li }));

    let out = Classification {
        monotone: monotone_w.is_none(),
        monadic: monadic_w.is_none(),
        connected: connected_w.is_none(),
        guarded: guarded_w.is_none(),
        witnesses: Vec::new(),
    };
    witnesses.extend(monotone_w);
    witnesses.extend(monadic_w);
    witnesses.extend(connected_w);
    witnesses.extend(guarded_w);
    Classification { witnesses, ..out }
}

impl Witness {
    /// Re-runs the failed check on the part of `s` the witness names.
    pub fn verify(&self, s: &SnpSentence) -> bool {
        let clause = |ci: usize| s.matrix.get(ci);
        match self {
            Witness::Monotone { clause: ci, literal } => clause(*ci)
                .and_then(|c| c.literals.get(*literal))
                .is_some_and(|l| l.positive && s.is_input(&l.atom.symbol)),
            Witness::Monadic { symbol } => s.exist_sig.arity(symbol).is_some_and(|a| a != 1),
            Witness::Connected { clause: ci, components: n } => {
                clause(*ci).is_some() && components(s, &s.full_signature(), *ci) == *n && *n > 1
            }
            Witness::Guarded { clause: ci, literal } => clause(*ci)
                .and_then(|c| c.literals.get(*literal).map(|l| (c, l)))
                .is_some_and(|(c, l)| {
                    l.positive && (s.is_input(&l.atom.symbol) || !covered(c, *literal))
                }),
        }
    }
}

/// Failure of the clause shape required of ASNP sentences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum ShapeViolation {
    NonBinary { symbol: String, arity: usize },
    PositiveInputLiteral { clause: usize, literal: usize },
    SeveralInputLiterals { clause: usize },
    /// An existential literal using a variable outside the input atom.
    UncoveredLiteral { clause: usize, literal: usize },
}

impl fmt::Display for ShapeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeViolation::NonBinary { symbol, arity } => {
                write!(f, "existential symbol {symbol} has arity {arity}")
            }
            ShapeViolation::PositiveInputLiteral { clause, literal } => write!(
                f,
                "clause {} literal {} is a positive input literal",
                clause + 1,
                literal + 1
            ),
            ShapeViolation::SeveralInputLiterals { clause } => {
                write!(f, "clause {} has more than one input literal", clause + 1)
            }
            ShapeViolation::UncoveredLiteral { clause, literal } => write!(
                f,
                "clause {} literal {} uses a variable outside the input atom",
                clause + 1,
                literal + 1
            ),
        }
    }
}

/// The two kinds of clauses of a sentence with ASNP shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsnpParts {
    /// Clauses over the existential symbols only.
    pub rho_part: Vec<Clause>,
    /// Clauses `S(x..) -> psi` with exactly one (negative) input literal.
    pub guarded_part: Vec<Clause>,
}

/// Checks that existential symbols are binary and every clause either
/// avoids input symbols or has exactly one input literal, which is negative
/// and contains every variable of the clause. Whether the existential part
/// defines an amalgamation class is left to the amalgamation module.
pub fn check_asnp_shape(s: &SnpSentence) -> Result<AsnpParts, ShapeViolation> {
    if let Some(sym) = s.exist_sig.symbols().iter().find(|sym| sym.arity != 2) {
        return Err(ShapeViolation::NonBinary {
            symbol: sym.name.clone(),
            arity: sym.arity,
        });
    }
    let mut parts = AsnpParts {
        rho_part: Vec::new(),
        guarded_part: Vec::new(),
    };
    for (ci, c) in s.matrix.iter().enumerate() {
        let inputs: Vec<usize> = (0..c.literals.len())
            .filter(|&li| s.is_input(&c.literals[li].atom.symbol))
            .collect();
        if let Some(&li) = inputs.iter().find(|&&li| c.literals[li].positive) {
            return Err(ShapeViolation::PositiveInputLiteral { clause: ci, literal: li });
        }
        match inputs.as_slice() {
            [] => parts.rho_part.push(c.clone()),
            [guard] => {
                let vars = &c.literals[*guard].atom.args;
                if let Some(li) = (0..c.literals.len())
                    .find(|&li| c.literals[li].atom.args.iter().any(|v| !vars.contains(v)))
                {
                    return Err(ShapeViolation::UncoveredLiteral { clause: ci, literal: li });
                }
                parts.guarded_part.push(c.clone());
            }
            _ => return Err(ShapeViolation::SeveralInputLiterals { clause: ci }),
        }
    }
    Ok(parts)
}
