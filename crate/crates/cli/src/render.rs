//! Text and JSON renderings of library values.

use serde_json::{json, Map, Value};
use snp_core::amalgamation::{ApVerdict, Diagram, ForbiddenFamily};
use snp_core::logic::SnpSentence;
use snp_core::structure::text::{write_signature, write_structure};
use snp_core::{Signature, Structure};

pub fn structure_json(s: &Structure) -> Value {
    let mut rels = Map::new();
    for (sym, symbol) in s.signature().symbols().iter().enumerate() {
        let tuples: Vec<Value> = s.tuples(sym).map(|t| json!(t)).collect();
        rels.insert(symbol.name.clone(), Value::Array(tuples));
    }
    json!({ "domain": s.size(), "relations": rels })
}

pub fn signature_json(sig: &Signature) -> Value {
    let mut m = Map::new();
    for s in sig.symbols() {
        m.insert(s.name.clone(), json!(s.arity));
    }
    Value::Object(m)
}

/// A signature block followed by one structure block per item.
pub fn structures_text(sig_name: &str, sig: &Signature, items: &[(String, &Structure)]) -> String {
    let mut out = write_signature(sig_name, sig);
    for (name, s) in items {
        out.push_str(&write_structure(name, sig_name, s));
    }
    out
}

pub fn sentence_json(s: &SnpSentence) -> Value {
    let clauses: Vec<String> = s.matrix().iter().map(|c| s.clause_text(c)).collect();
    json!({
        "input_signature": signature_json(s.input_sig()),
        "existential_signature": signature_json(s.exist_sig()),
        "variables": s.variables(),
        "clauses": clauses,
        "warnings": s.warnings(),
        "text": s.to_string(),
    })
}

pub fn family_json(f: &ForbiddenFamily) -> Value {
    let members: Vec<Value> = f.members().iter().map(structure_json).collect();
    json!({
        "signature": signature_json(f.signature()),
        "members": members,
        "m": f.m(),
        "ell": f.ell(),
    })
}

pub fn family_text(sig_name: &str, f: &ForbiddenFamily) -> String {
    let items: Vec<(String, &Structure)> = f
        .members()
        .iter()
        .enumerate()
        .map(|(i, m)| (format!("f{}", i + 1), m))
        .collect();
    structures_text(sig_name, f.signature(), &items)
}

pub fn diagram_text(sig_name: &str, d: &Diagram) -> String {
    let n = d.b0().size();
    let mut out = format!("# b0 has {n} elements; p and q are element {n} of b1 and b2\n");
    out.push_str(&structures_text(
        sig_name,
        d.b0().signature(),
        &[("b0".into(), d.b0()), ("b1".into(), d.b1()), ("b2".into(), d.b2())],
    ));
    out
}

pub fn diagram_json(d: &Diagram) -> Value {
    json!({
        "b0": structure_json(d.b0()),
        "b1": structure_json(d.b1()),
        "b2": structure_json(d.b2()),
        "same_extension": d.same_extension(),
    })
}

pub fn ap_text(sig_name: &str, v: &ApVerdict) -> String {
    let mut out = format!(
        "AP: {}\nmode: {}\nm = {}, ell = {}, completions per pair = {}\nbound: |B0| <= {}\nshared parts: {}, diagrams: {}\n",
        if v.holds { "holds" } else { "fails" },
        if v.strong { "strong" } else { "standard" },
        v.m,
        v.ell.map_or("n/a".to_string(), |l| l.to_string()),
        v.completions,
        v.bound,
        v.b0_classes,
        v.diagrams,
    );
    if let Some(d) = &v.witness {
        out.push_str("failing diagram:\n");
        out.push_str(&diagram_text(sig_name, d));
    }
    out
}

pub fn ap_json(v: &ApVerdict) -> Value {
    json!({
        "holds": v.holds,
        "mode": if v.strong { "strong" } else { "standard" },
        "m": v.m,
        "ell": v.ell,
        "completions": v.completions,
        "bound": v.bound,
        "b0_classes": v.b0_classes,
        "diagrams": v.diagrams,
        "witness": v.witness.as_ref().map(diagram_json),
    })
}
