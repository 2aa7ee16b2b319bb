//! Text format for signatures and structures.
//!
//! ```text
//! signature G { E/2; }
//! structure c3 over G { domain = 3; E = { (0,1), (1,2), (2,0) }; }
//! ```
//!
//! Omitted relations are empty, whitespace is insignificant and `#` starts
//! a comment.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use super::{Signature, Structure};
use crate::error::{Error, Result};
use crate::lexer::Cursor;

/// Signatures by name.
pub type SignatureTable = BTreeMap<String, Arc<Signature>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedStructure {
    pub name: String,
    pub signature_name: String,
    pub structure: Structure,
}

/// The blocks of a structure file, in file order.
#[derive(Debug, Clone, Default)]
pub struct Document {
    pub signatures: SignatureTable,
    pub structures: Vec<NamedStructure>,
}

/// Parses a file of `signature` and `structure` blocks. Structures may refer
/// to signatures declared earlier in the same file or in `env`.
pub fn parse_document(text: &str, env: &SignatureTable) -> Result<Document> {
    let mut cur = Cursor::new(text)?;
    let mut doc = Document::default();
    while !cur.at_eof() {
        if cur.is_keyword("signature") {
            let (name, sig) = parse_signature_block(&mut cur)?;
            doc.signatures.insert(name, Arc::new(sig));
        } else if cur.is_keyword("structure") {
            let named = parse_structure_block(&mut cur, |name| {
                doc.signatures.get(name).or_else(|| env.get(name)).cloned()
            })?;
            doc.structures.push(named);
        } else {
            return Err(cur.error_here("expected `signature` or `structure`"));
        }
    }
    Ok(doc)
}

/// Parses a file that must contain exactly one signature block.
pub fn parse_signature(text: &str) -> Result<(String, Signature)> {
    let mut cur = Cursor::new(text)?;
    let out = parse_signature_block(&mut cur)?;
    if !cur.at_eof() {
        return Err(cur.error_here("trailing input after signature"));
    }
    Ok(out)
}

pub(crate) fn parse_signature_block(cur: &mut Cursor) -> Result<(String, Signature)> {
    cur.expect_keyword("signature")?;
    let (name, _) = cur.expect_ident()?;
    cur.expect_punct("{")?;
    let mut symbols = Vec::new();
    while !cur.eat_punct("}") {
        let (sym, tok) = cur.expect_ident()?;
        cur.expect_punct("/")?;
        let (arity, _) = cur.expect_nat()?;
        if arity == 0 {
            return Err(cur.error_at(&tok, format!("symbol {sym} must have positive arity")));
        }
        if symbols.iter().any(|(s, _)| *s == sym) {
            return Err(cur.error_at(&tok, format!("symbol {sym} declared twice")));
        }
        symbols.push((sym, arity));
        if !cur.eat_punct(";") && !cur.is_punct("}") {
            return Err(cur.error_here("expected `;` or `}`"));
        }
    }
    Ok((name, Signature::new(symbols)?))
}

pub(crate) fn parse_structure_block(
    cur: &mut Cursor,
    lookup: impl Fn(&str) -> Option<Arc<Signature>>,
) -> Result<NamedStructure> {
    cur.expect_keyword("structure")?;
    let (name, _) = cur.expect_ident()?;
    cur.expect_keyword("over")?;
    let (sig_name, sig_tok) = cur.expect_ident()?;
    let sig = lookup(&sig_name)
        .ok_or_else(|| cur.error_at(&sig_tok, format!("unknown signature {sig_name}")))?;
    cur.expect_punct("{")?;
    cur.expect_keyword("domain")?;
    cur.expect_punct("=")?;
    let (size, _) = cur.expect_nat()?;
    let mut s = Structure::new(sig.clone(), size);
    let mut seen = Vec::new();
    loop {
        if cur.eat_punct(";") {
            continue;
        }
        if cur.eat_punct("}") {
            break;
        }
        let (rel, rel_tok) = cur.expect_ident()?;
        let sym = sig
            .index_of(&rel)
            .ok_or_else(|| cur.error_at(&rel_tok, format!("{rel} is not in signature {sig_name}")))?;
        if seen.contains(&sym) {
            return Err(cur.error_at(&rel_tok, format!("relation {rel} given twice")));
        }
        seen.push(sym);
        cur.expect_punct("=")?;
        cur.expect_punct("{")?;
        while !cur.eat_punct("}") {
            let open = cur.peek().clone();
            cur.expect_punct("(")?;
            let mut t = Vec::new();
            loop {
                let (e, _) = cur.expect_nat()?;
                t.push(e);
                if cur.eat_punct(")") {
                    break;
                }
                cur.expect_punct(",")?;
            }
            s.insert_at(sym, &t)
                .map_err(|e| cur.error_at(&open, e.to_string()))?;
            if !cur.eat_punct(",") && !cur.is_punct("}") {
                return Err(cur.error_here("expected `,` or `}`"));
            }
        }
    }
    Ok(NamedStructure {
        name,
        signature_name: sig_name,
        structure: s,
    })
}

pub fn write_signature(name: &str, sig: &Signature) -> String {
    let mut out = format!("signature {name} {{");
    for s in sig.symbols() {
        let _ = write!(out, " {}/{};", s.name, s.arity);
    }
    out.push_str(" }\n");
    out
}

pub fn write_structure(name: &str, sig_name: &str, s: &Structure) -> String {
    let mut out = format!("structure {name} over {sig_name} {{\n  domain = {};\n", s.size());
    for (sym, symbol) in s.signature().symbols().iter().enumerate() {
        let tuples: Vec<String> = s
            .tuples(sym)
            .map(|t| {
                let items: Vec<String> = t.iter().map(|e| e.to_string()).collect();
                format!("({})", items.join(","))
            })
            .collect();
        if tuples.is_empty() {
            let _ = writeln!(out, "  {} = {{}};", symbol.name);
        } else {
            let _ = writeln!(out, "  {} = {{ {} }};", symbol.name, tuples.join(", "));
        }
    }
    out.push_str("}\n");
    out
}

/// Convenience: the unique structure of a document, erroring otherwise.
pub fn parse_single_structure(text: &str, env: &SignatureTable) -> Result<Structure> {
    let doc = parse_document(text, env)?;
    match doc.structures.len() {
        1 => Ok(doc.structures.into_iter().next().unwrap().structure),
        n => Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("expected one structure block, found {n}"),
        }),
    }
}
