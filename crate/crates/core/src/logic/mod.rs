//! SNP sentences in clausal form.
//!
//! A sentence `exists R1/a1, ... . forall x1, ... . C1 & C2 & ...` is kept
//! as its two signatures (input symbols and existential symbols), the list
//! of universally quantified variables and a list of clauses. Atom arguments
//! are indices into the variable list.

mod classify;
mod parse;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::structure::{is_identifier, Signature, Structure};

pub use classify::{
    check_asnp_shape, classify, clause_structure, AsnpParts, Classification, ShapeViolation,
    Witness,
};
pub(crate) use parse::parse_clause_list;
pub use parse::parse_sentence;

pub(crate) const RESERVED: &[&str] = &["exists", "forall", "true", "false"];

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub symbol: String,
    pub args: Vec<usize>,
}

impl Atom {
    pub fn new(symbol: impl Into<String>, args: Vec<usize>) -> Self {
        Atom {
            symbol: symbol.into(),
            args,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn pos(symbol: impl Into<String>, args: Vec<usize>) -> Self {
        Literal {
            positive: true,
            atom: Atom::new(symbol, args),
        }
    }

    pub fn neg(symbol: impl Into<String>, args: Vec<usize>) -> Self {
        Literal {
            positive: false,
            atom: Atom::new(symbol, args),
        }
    }

    pub fn negated(&self) -> Self {
        Literal {
            positive: !self.positive,
            atom: self.atom.clone(),
        }
    }
}

/// A disjunction of literals. The empty clause is false.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Clause {
    pub literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Self {
        Clause { literals }
    }

    /// Removes repeated literals, keeping first occurrences.
    pub fn dedup(mut self) -> Self {
        let mut seen = BTreeSet::new();
        self.literals.retain(|l| seen.insert(l.clone()));
        self
    }

    /// Variables in order of first occurrence.
    pub fn variables(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for l in &self.literals {
            for &v in &l.atom.args {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }

    pub fn is_tautology(&self) -> bool {
        self.literals.iter().any(|l| {
            l.positive
                && self
                    .literals
                    .iter()
                    .any(|m| !m.positive && m.atom == l.atom)
        })
    }
}

/// Whether a symbol of a sentence is part of the input or quantified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    Input,
    Existential,
}

#[derive(Debug, Clone)]
pub struct SnpSentence {
    input_sig: Signature,
    exist_sig: Signature,
    variables: Vec<String>,
    matrix: Vec<Clause>,
    warnings: Vec<String>,
}

impl PartialEq for SnpSentence {
    fn eq(&self, other: &Self) -> bool {
        self.input_sig == other.input_sig
            && self.exist_sig == other.exist_sig
            && self.variables == other.variables
            && self.matrix == other.matrix
    }
}

impl Eq for SnpSentence {}

impl SnpSentence {
    /// Builds a sentence, checking that symbols and variables are declared
    /// and used with their arity. Duplicate literals are removed.
    pub fn new(
        input_sig: Signature,
        exist_sig: Signature,
        variables: Vec<String>,
        matrix: Vec<Clause>,
    ) -> Result<Self> {
        for sym in exist_sig.symbols() {
            if input_sig.contains(&sym.name) {
                return Err(Error::InvalidSignature(format!(
                    "{} is both an input and an existential symbol",
                    sym.name
                )));
            }
        }
        for (i, v) in variables.iter().enumerate() {
            if !is_identifier(v) || RESERVED.contains(&v.as_str()) {
                return Err(Error::InvalidSignature(format!("bad variable name {v:?}")));
            }
            if variables[..i].contains(v) {
                return Err(Error::InvalidSignature(format!("variable {v} declared twice")));
            }
        }
        let mut warnings = Vec::new();
        let mut clauses = Vec::with_capacity(matrix.len());
        for (ci, clause) in matrix.into_iter().enumerate() {
            for l in &clause.literals {
                let arity = input_sig
                    .arity(&l.atom.symbol)
                    .or_else(|| exist_sig.arity(&l.atom.symbol))
                    .ok_or_else(|| Error::UnknownSymbol(l.atom.symbol.clone()))?;
                if arity != l.atom.args.len() {
                    return Err(Error::InvalidSignature(format!(
                        "{} has arity {arity} but is used with {} argument(s)",
                        l.atom.symbol,
                        l.atom.args.len()
                    )));
                }
                if let Some(&v) = l.atom.args.iter().find(|&&v| v >= variables.len()) {
                    return Err(Error::Internal(format!("variable index {v} out of range")));
                }
            }
            let clause = clause.dedup();
            if clause.is_tautology() {
                warnings.push(format!("clause {} is a tautology", ci + 1));
            }
            clauses.push(clause);
        }
        Ok(SnpSentence {
            input_sig,
            exist_sig,
            variables,
            matrix: clauses,
            warnings,
        })
    }

    pub fn input_sig(&self) -> &Signature {
        &self.input_sig
    }

    pub fn exist_sig(&self) -> &Signature {
        &self.exist_sig
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn matrix(&self) -> &[Clause] {
        &self.matrix
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Input and existential symbols together.
    pub fn full_signature(&self) -> Signature {
        self.input_sig
            .union(&self.exist_sig)
            .expect("disjoint by construction")
    }

    pub fn kind(&self, symbol: &str) -> Option<SymbolKind> {
        if self.input_sig.contains(symbol) {
            Some(SymbolKind::Input)
        } else if self.exist_sig.contains(symbol) {
            Some(SymbolKind::Existential)
        } else {
            None
        }
    }

    pub fn is_input(&self, symbol: &str) -> bool {
        self.kind(symbol) == Some(SymbolKind::Input)
    }

    /// Largest number of distinct variables in one clause.
    pub fn max_clause_vars(&self) -> usize {
        self.matrix
            .iter()
            .map(|c| c.variables().len())
            .max()
            .unwrap_or(0)
    }

    /// The same sentence with a larger input signature (for evaluation on
    /// structures that interpret symbols the sentence does not mention).
    pub fn with_input_sig(&self, sig: &Signature) -> Result<Self> {
        let input = self.input_sig.union(sig)?;
        SnpSentence::new(
            input,
            self.exist_sig.clone(),
            self.variables.clone(),
            self.matrix.clone(),
        )
    }

    pub(crate) fn with_warnings(mut self, warnings: Vec<String>) -> Self {
        self.warnings.extend(warnings);
        self
    }

    pub(crate) fn literal_text(&self, l: &Literal) -> String {
        let args: Vec<&str> = l.atom.args.iter().map(|&v| self.variables[v].as_str()).collect();
        format!(
            "{}{}({})",
            if l.positive { "" } else { "~" },
            l.atom.symbol,
            args.join(",")
        )
    }

    pub fn clause_text(&self, c: &Clause) -> String {
        if c.literals.is_empty() {
            return "(false)".to_string();
        }
        let lits: Vec<String> = c.literals.iter().map(|l| self.literal_text(l)).collect();
        format!("({})", lits.join(" | "))
    }

    /// The structure on a clause's variables given by its negative literals.
    pub fn clause_structure(&self, c: &Clause) -> Structure {
        clause_structure(c, &self.full_signature())
    }
}

/// Prints the sentence in the concrete syntax accepted by
/// [`parse_sentence`], one clause per line, in pure disjunctive form.
impl fmt::Display for SnpSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.exist_sig.is_empty() {
            let decls: Vec<String> = self
                .exist_sig
                .symbols()
                .iter()
                .map(|s| format!("{}/{}", s.name, s.arity))
                .collect();
            write!(f, "exists {}. ", decls.join(", "))?;
        }
        writeln!(f, "forall {}.", self.variables.join(", "))?;
        if self.matrix.is_empty() {
            return writeln!(f, "  true");
        }
        for (i, c) in self.matrix.iter().enumerate() {
            let sep = if i == 0 { "  " } else { "& " };
            writeln!(f, "{sep}{}", self.clause_text(c))?;
        }
        Ok(())
    }
}

/// A name based on `base` that is not taken.
pub(crate) fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> String {
    if !taken(base) {
        return base.to_string();
    }
    (2..)
        .map(|i| format!("{base}__{i}"))
        .find(|n| !taken(n))
        .expect("unbounded")
}
