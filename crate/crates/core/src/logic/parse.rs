//! Parser for the sentence syntax.
//!
//! ```text
//! sentence := ["exists" decl {"," decl} "."] "forall" [var {"," var}] "." matrix
//! matrix   := "true" | conj {"&" conj}
//! conj     := "(" body ")"
//! body     := disj | atom {"&" atom} "->" (disj | "false") | "false"
//! disj     := lit {"|" lit}
//! lit      := atom | "~" atom
//! atom     := IDENT "(" var {"," var} ")"
//! ```

use std::collections::BTreeMap;

use super::{Clause, Literal, SnpSentence, RESERVED};
use crate::error::Result;
use crate::lexer::{Cursor, Tok, Token};
use crate::structure::Signature;

struct Parser<'e> {
    cur: Cursor,
    env: Option<&'e Signature>,
    exists: Vec<(String, usize)>,
    inferred: BTreeMap<String, usize>,
    vars: Vec<String>,
    // only symbols of `env` may be used
    closed: bool,
}

/// Parses a sentence. Input symbols take their arity from `env` when they
/// are declared there and from their first use otherwise; the input
/// signature of the result is `env` together with the inferred symbols.
pub fn parse_sentence(text: &str, env: Option<&Signature>) -> Result<SnpSentence> {
    let mut p = Parser {
        cur: Cursor::new(text)?,
        env,
        exists: Vec::new(),
        inferred: BTreeMap::new(),
        vars: Vec::new(),
        closed: false,
    };
    let matrix = p.sentence()?;
    let mut input: Vec<(String, usize)> = p.inferred.into_iter().collect();
    if let Some(env) = env {
        input.extend(env.symbols().iter().map(|s| (s.name.clone(), s.arity)));
    }
    input.sort();
    input.dedup();
    let input_sig = Signature::new(input)?;
    let exist_sig = Signature::new(p.exists)?;
    SnpSentence::new(input_sig, exist_sig, p.vars, matrix)
}

/// Parses `conj {"&" conj}` over the symbols of `sig` and the variables
/// `vars`, leaving the cursor after the last conjunct.
pub(crate) fn parse_clause_list(cur: &mut Cursor, sig: &Signature, vars: Vec<String>) -> Result<Vec<Clause>> {
    let mut p = Parser {
        cur: std::mem::replace(cur, Cursor::new("")?),
        env: Some(sig),
        exists: Vec::new(),
        inferred: BTreeMap::new(),
        vars,
        closed: true,
    };
    let mut out = Vec::new();
    let result = loop {
        match p.conjunct() {
            Ok(c) => out.push(c),
            Err(e) => break Err(e),
        }
        if !p.cur.eat_punct("&") {
            break Ok(out);
        }
    };
    *cur = p.cur;
    result
}

impl Parser<'_> {
    fn sentence(&mut self) -> Result<Vec<Clause>> {
        if self.cur.is_keyword("exists") {
            self.cur.bump();
            if !self.cur.eat_punct(".") {
                loop {
                    self.decl()?;
                    if self.cur.eat_punct(".") {
                        break;
                    }
                    self.cur.expect_punct(",")?;
                }
            }
        }
        self.cur.expect_keyword("forall")?;
        if !self.cur.eat_punct(".") {
            loop {
                let (name, tok) = self.name("variable")?;
                if self.vars.contains(&name) {
                    return Err(self.cur.error_at(&tok, format!("variable {name} declared twice")));
                }
                self.vars.push(name);
                if self.cur.eat_punct(".") {
                    break;
                }
                self.cur.expect_punct(",")?;
            }
        }
        let mut matrix = Vec::new();
        if self.cur.is_keyword("true") {
            self.cur.bump();
        } else {
            loop {
                matrix.push(self.conjunct()?);
                if !self.cur.eat_punct("&") {
                    break;
                }
            }
        }
        if !self.cur.at_eof() {
            return Err(self.cur.error_here(format!(
                "expected `&` or end of input, found {}",
                crate::lexer::describe(&self.cur.peek().tok)
            )));
        }
        Ok(matrix)
    }

    fn name(&mut self, what: &str) -> Result<(String, Token)> {
        let (name, tok) = self.cur.expect_ident()?;
        if RESERVED.contains(&name.as_str()) {
            return Err(self.cur.error_at(&tok, format!("`{name}` cannot be used as a {what} name")));
        }
        Ok((name, tok))
    }

    fn decl(&mut self) -> Result<()> {
        let (name, tok) = self.name("symbol")?;
        self.cur.expect_punct("/")?;
        let (arity, _) = self.cur.expect_nat()?;
        if arity == 0 {
            return Err(self.cur.error_at(&tok, format!("{name} must have positive arity")));
        }
        if self.exists.iter().any(|(n, _)| *n == name) {
            return Err(self.cur.error_at(&tok, format!("{name} declared twice")));
        }
        if self.env.is_some_and(|e| e.contains(&name)) {
            return Err(self.cur.error_at(
                &tok,
                format!("existential symbol {name} clashes with an input symbol"),
            ));
        }
        self.exists.push((name, arity));
        Ok(())
    }

    fn conjunct(&mut self) -> Result<Clause> {
        self.cur.expect_punct("(")?;
        if self.cur.is_keyword("false") && matches!(self.cur.peek_at(1), Tok::Punct(")")) {
            self.cur.bump();
            self.cur.bump();
            return Ok(Clause::default());
        }
        let first_tok = self.cur.peek().clone();
        let first = self.literal()?;
        let clause = if self.cur.is_punct("&") || self.cur.is_punct("->") {
            if !first.positive {
                return Err(self.cur.error_at(&first_tok, "negated atom in implication body"));
            }
            let mut body = vec![first];
            while self.cur.eat_punct("&") {
                let tok = self.cur.peek().clone();
                let l = self.literal()?;
                if !l.positive {
                    return Err(self.cur.error_at(&tok, "negated atom in implication body"));
                }
                body.push(l);
            }
            if self.cur.is_punct("|") {
                return Err(self.cur.error_here("mixing `&` and `|` is not supported; write clauses"));
            }
            self.cur.expect_punct("->")?;
            let mut literals: Vec<Literal> = body.iter().map(Literal::negated).collect();
            if self.cur.is_keyword("false") {
                self.cur.bump();
            } else {
                literals.extend(self.disjunction()?);
            }
            literals
        } else {
            let mut literals = vec![first];
            while self.cur.eat_punct("|") {
                literals.push(self.literal()?);
            }
            if self.cur.is_punct("&") || self.cur.is_punct("->") {
                return Err(self.cur.error_here("mixing `&` and `|` is not supported; write clauses"));
            }
            literals
        };
        self.cur.expect_punct(")")?;
        Ok(Clause::new(clause))
    }

    fn disjunction(&mut self) -> Result<Vec<Literal>> {
        let mut out = vec![self.literal()?];
        while self.cur.eat_punct("|") {
            out.push(self.literal()?);
        }
        Ok(out)
    }

    fn literal(&mut self) -> Result<Literal> {
        let positive = !self.cur.eat_punct("~");
        let (symbol, tok) = self.cur.expect_ident()?;
        if self.cur.is_punct("=") {
            return Err(self.cur.error_here("equality not allowed"));
        }
        if RESERVED.contains(&symbol.as_str()) {
            return Err(self.cur.error_at(&tok, format!("unexpected `{symbol}`")));
        }
        self.cur.expect_punct("(")?;
        let mut args = Vec::new();
        loop {
            let (v, vtok) = self.cur.expect_ident()?;
            let idx = self
                .vars
                .iter()
                .position(|d| *d == v)
                .ok_or_else(|| self.cur.error_at(&vtok, format!("undeclared variable {v}")))?;
            args.push(idx);
            if self.cur.is_punct("=") {
                return Err(self.cur.error_here("equality not allowed"));
            }
            if self.cur.eat_punct(")") {
                break;
            }
            self.cur.expect_punct(",")?;
        }
        self.check_arity(&symbol, args.len(), &tok)?;
        Ok(Literal {
            positive,
            atom: super::Atom { symbol, args },
        })
    }

    fn check_arity(&mut self, symbol: &str, found: usize, tok: &Token) -> Result<()> {
        let declared = self
            .exists
            .iter()
            .find(|(n, _)| n == symbol)
            .map(|(_, a)| *a)
            .or_else(|| self.env.and_then(|e| e.arity(symbol)))
            .or_else(|| self.inferred.get(symbol).copied());
        match declared {
            Some(a) if a != found => Err(self.cur.error_at(
                tok,
                format!("{symbol} has arity {a} but is used with {found} argument(s)"),
            )),
            Some(_) => Ok(()),
            None if self.closed => Err(self.cur.error_at(tok, format!("unknown symbol {symbol}"))),
            None => {
                self.inferred.insert(symbol.to_string(), found);
                Ok(())
            }
        }
    }
}
