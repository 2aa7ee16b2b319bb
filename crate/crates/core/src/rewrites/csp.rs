//! From a finitely bounded base class with an equality symbol and
//! quantifier-free definitions to an ASNP sentence.
//!
//! Description files look like
//!
//! ```text
//! signature S { lt/2; E/2; }
//! equality E;
//! structure loop over S { domain = 1; lt = { (0,0) }; E = { (0,0) }; }
//! define Betw(x, y, z) := (lt(x,y) | lt(z,y)) & (lt(y,z) | lt(y,x));
//! ```
//!
//! The structure blocks are the forbidden family of the base class.

use std::sync::Arc;

use crate::amalgamation::ForbiddenFamily;
use crate::error::{Error, Result};
use crate::lexer::Cursor;
use crate::logic::{parse_clause_list, Clause, Literal, SnpSentence};
use crate::structure::text::{parse_signature_block, parse_structure_block};
use crate::structure::{decode_tuple, Signature, Structure};

/// `target(x1..xk) <=> cnf` with `cnf` over the base signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationDefinition {
    pub target: String,
    /// Variable names; clause arguments index into this list.
    pub variables: Vec<String>,
    pub cnf: Vec<Clause>,
}

impl RelationDefinition {
    pub fn arity(&self) -> usize {
        self.variables.len()
    }
}

#[derive(Debug, Clone)]
pub struct CspDescription {
    pub signature_name: String,
    pub family: ForbiddenFamily,
    pub equality: String,
    pub definitions: Vec<RelationDefinition>,
}

/// Parses a description file.
pub fn parse_csp(text: &str) -> Result<CspDescription> {
    let mut cur = Cursor::new(text)?;
    let (sig_name, sig) = parse_signature_block(&mut cur)?;
    let sig = Arc::new(sig);
    let mut equality = None;
    let mut members = Vec::new();
    let mut definitions: Vec<RelationDefinition> = Vec::new();
    while !cur.at_eof() {
        if cur.is_keyword("equality") {
            cur.bump();
            let (name, tok) = cur.expect_ident()?;
            if equality.is_some() {
                return Err(cur.error_at(&tok, "equality symbol given twice"));
            }
            if sig.arity(&name) != Some(2) {
                return Err(cur.error_at(&tok, format!("{name} is not a binary symbol of {sig_name}")));
            }
            cur.expect_punct(";")?;
            equality = Some(name);
        } else if cur.is_keyword("structure") {
            let named = parse_structure_block(&mut cur, |name| (name == sig_name).then(|| sig.clone()))?;
            members.push(named.structure);
        } else if cur.is_keyword("define") {
            cur.bump();
            let (target, tok) = cur.expect_ident()?;
            if sig.contains(&target) || definitions.iter().any(|d| d.target == target) {
                return Err(cur.error_at(&tok, format!("{target} is already defined")));
            }
            cur.expect_punct("(")?;
            let mut variables: Vec<String> = Vec::new();
            loop {
                let (v, vtok) = cur.expect_ident()?;
                if variables.contains(&v) {
                    return Err(cur.error_at(&vtok, format!("variable {v} listed twice")));
                }
                variables.push(v);
                if cur.eat_punct(")") {
                    break;
                }
                cur.expect_punct(",")?;
            }
            cur.expect_punct(":=")?;
            let cnf = parse_clause_list(&mut cur, &sig, variables.clone())?;
            cur.expect_punct(";")?;
            definitions.push(RelationDefinition {
                target,
                variables,
                cnf,
            });
        } else {
            return Err(cur.error_here("expected `equality`, `structure` or `define`"));
        }
    }
    let equality = equality.ok_or_else(|| cur.error_here("missing `equality` declaration"))?;
    Ok(CspDescription {
        signature_name: sig_name,
        family: ForbiddenFamily::new(sig, members)?,
        equality,
        definitions,
    })
}

/// Builds the ASNP sentence over the defined symbols whose existential
/// part is the base signature. The clauses are, in order:
///
/// 1. for every member `M`, the negation of its diagram, with `E(xi,xj)`
///    standing for `xi = xj` (tautologies are skipped);
/// 2. reflexivity, symmetry and transitivity of `E`;
/// 3. `R(x1..xn) | ~R(y1..yn) | ~E(x1,y1) | .. | ~E(xn,yn)` for every base
///    symbol `R`;
/// 4. `~S(x1..xk) | C` for every clause `C` of the definition of `S`.
pub fn csp_to_asnp(family: &ForbiddenFamily, equality: &str, defs: &[RelationDefinition]) -> Result<SnpSentence> {
    let sig = family.signature();
    if !sig.is_binary() {
        return Err(Error::NonBinary(sig.to_string()));
    }
    let e = equality.to_string();
    if sig.arity(&e) != Some(2) {
        return Err(Error::InvalidArgument(format!("{e} is not a binary symbol of {sig}")));
    }
    let mut targets = Vec::new();
    for d in defs {
        if sig.contains(&d.target) {
            return Err(Error::InvalidArgument(format!("{} clashes with a base symbol", d.target)));
        }
        targets.push((d.target.clone(), d.arity()));
        for c in &d.cnf {
            for l in &c.literals {
                if sig.arity(&l.atom.symbol) != Some(l.atom.args.len()) {
                    return Err(Error::InvalidArgument(format!(
                        "definition of {} uses {} outside the base signature",
                        d.target, l.atom.symbol
                    )));
                }
            }
        }
    }
    let input = Signature::new(targets)?;

    let width = family
        .members()
        .iter()
        .map(Structure::size)
        .chain(defs.iter().map(RelationDefinition::arity))
        .chain([3])
        .max()
        .unwrap_or(3);
    let ys = sig.max_arity().max(1);
    let x = |i: usize| i;
    let y = |i: usize| width + i;
    let mut variables: Vec<String> = (1..=width).map(|i| format!("x{i}")).collect();
    variables.extend((1..=ys).map(|i| format!("y{i}")));

    let mut matrix = Vec::new();
    for m in family.members() {
        let mut literals = Vec::new();
        for (sym, symbol) in sig.symbols().iter().enumerate() {
            let mut t = vec![0; symbol.arity];
            for idx in 0..m.size().pow(symbol.arity as u32) {
                decode_tuple(idx, m.size(), &mut t);
                let args: Vec<usize> = t.iter().map(|&v| x(v)).collect();
                literals.push(if m.contains(sym, &t) {
                    Literal::neg(symbol.name.clone(), args)
                } else {
                    Literal::pos(symbol.name.clone(), args)
                });
            }
        }
        for i in 0..m.size() {
            for j in i + 1..m.size() {
                literals.push(Literal::pos(e.clone(), vec![x(i), x(j)]));
            }
        }
        let c = Clause::new(literals).dedup();
        if !c.is_tautology() {
            matrix.push(c);
        }
    }
    matrix.push(Clause::new(vec![Literal::pos(e.clone(), vec![x(0), x(0)])]));
    matrix.push(Clause::new(vec![
        Literal::neg(e.clone(), vec![x(0), x(1)]),
        Literal::pos(e.clone(), vec![x(1), x(0)]),
    ]));
    matrix.push(Clause::new(vec![
        Literal::neg(e.clone(), vec![x(0), x(1)]),
        Literal::neg(e.clone(), vec![x(1), x(2)]),
        Literal::pos(e.clone(), vec![x(0), x(2)]),
    ]));
    for symbol in sig.symbols() {
        let n = symbol.arity;
        let mut literals = vec![
            Literal::pos(symbol.name.clone(), (0..n).map(x).collect()),
            Literal::neg(symbol.name.clone(), (0..n).map(y).collect()),
        ];
        literals.extend((0..n).map(|i| Literal::neg(e.clone(), vec![x(i), y(i)])));
        matrix.push(Clause::new(literals));
    }
    for d in defs {
        let head = Literal::neg(d.target.clone(), (0..d.arity()).map(x).collect());
        for c in &d.cnf {
            let mut literals = vec![head.clone()];
            literals.extend(c.literals.iter().map(|l| Literal {
                positive: l.positive,
                atom: crate::logic::Atom::new(l.atom.symbol.clone(), l.atom.args.iter().map(|&v| x(v)).collect()),
            }));
            matrix.push(Clause::new(literals));
        }
    }
    SnpSentence::new(input, sig.clone(), variables, matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::check_asnp_shape;

    const ORDER: &str = "
        signature S { lt/2; E/2; }
        equality E;
        structure l over S { domain = 1; lt = { (0,0) }; E = { (0,0) }; }
        define Less(a, b) := (lt(a,b));
        define Betw(x, y, z) := (lt(x,y) | lt(z,y)) & (lt(y,z) | lt(y,x));
    ";

    #[test]
    fn parses_description() {
        let d = parse_csp(ORDER).unwrap();
        assert_eq!(d.equality, "E");
        assert_eq!(d.family.len(), 1);
        assert_eq!(d.definitions.len(), 2);
        assert_eq!(d.definitions[1].cnf.len(), 2);
        assert_eq!(d.definitions[1].arity(), 3);
    }

    #[test]
    fn parse_errors() {
        for bad in [
            "signature S { lt/2; }",
            "signature S { lt/2; } equality lt; define P(x) := (q(x));",
            "signature S { lt/2; U/1; } equality U;",
            "signature S { lt/2; } equality lt; define lt(x,y) := (lt(x,y));",
            "signature S { lt/2; } equality lt; define P(x,x) := (lt(x,x));",
        ] {
            assert!(matches!(parse_csp(bad), Err(Error::Parse { .. })), "{bad}");
        }
    }

    #[test]
    fn output_shape_and_clauses() {
        let d = parse_csp(ORDER).unwrap();
        let s = csp_to_asnp(&d.family, &d.equality, &d.definitions).unwrap();
        assert!(check_asnp_shape(&s).is_ok());
        let text = s.to_string();
        assert!(text.contains("(lt(x1,x2) | ~lt(y1,y2) | ~E(x1,y1) | ~E(x2,y2))"), "{text}");
        assert!(text.contains("(~Less(x1,x2) | lt(x1,x2))"), "{text}");
        assert!(text.contains("(~Betw(x1,x2,x3) | lt(x1,x2) | lt(x3,x2))"), "{text}");
        // the loop member forbids lt(x,x) when E(x,x) holds
        assert!(text.contains("(~E(x1,x1) | ~lt(x1,x1))"), "{text}");
    }

    #[test]
    fn argument_errors() {
        let d = parse_csp(ORDER).unwrap();
        assert!(matches!(
            csp_to_asnp(&d.family, "F", &d.definitions),
            Err(Error::InvalidArgument(_))
        ));
        let t = Arc::new(Signature::new([("R", 3), ("E", 2)]).unwrap());
        let f = ForbiddenFamily::new(t, vec![]).unwrap();
        assert!(matches!(csp_to_asnp(&f, "E", &[]), Err(Error::NonBinary(_))));
    }
}
