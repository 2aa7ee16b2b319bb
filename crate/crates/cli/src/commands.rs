use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use snp_core::amalgamation::{
    decide_ap, decide_asnp, minimal_forbidden_family, ApOptions, FamilyLimits, ForbiddenFamily,
};
use snp_core::eval::{
    check_closure_properties, equivalent_up_to, models_up_to, ClosureSummary, EvalLimits, Evaluator,
};
use snp_core::logic::{check_asnp_shape, classify, parse_sentence, SnpSentence, Witness};
use snp_core::rewrites::{csp_to_asnp, gmsnp_translate, parse_csp, rewrite_connected, split_disconnected};
use snp_core::structure::text::{parse_document, parse_signature, write_structure, SignatureTable};
use snp_core::{Error, Signature, Structure};

use crate::render::*;
use crate::Opts;

/// What a command prints and how it exits.
pub struct Outcome {
    pub code: i32,
    pub text: String,
    pub json: Value,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome { code: 0, text, json }
    }

    fn verdict(positive: bool, text: String, json: Value) -> Self {
        Outcome {
            code: if positive { 0 } else { 1 },
            text,
            json,
        }
    }
}

/// An error with the file it came from.
pub struct Failure {
    pub error: Error,
    pub path: Option<PathBuf>,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { error, path: None }
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn at<T>(path: &Path, r: snp_core::Result<T>) -> Run<T> {
    r.map_err(|error| Failure {
        error,
        path: Some(path.to_path_buf()),
    })
}

fn read(path: &Path) -> Run<String> {
    fs::read_to_string(path).map_err(|e| Failure {
        error: Error::InvalidArgument(format!("cannot read file: {e}")),
        path: Some(path.to_path_buf()),
    })
}

fn write(path: &Path, text: &str) -> Run<()> {
    fs::write(path, text).map_err(|e| Failure {
        error: Error::InvalidArgument(format!("cannot write file: {e}")),
        path: Some(path.to_path_buf()),
    })
}

pub struct Context {
    pub opts: Opts,
    env: Option<(String, Signature)>,
}

impl Context {
    pub fn new(opts: Opts) -> Run<Self> {
        let env = match &opts.sig {
            Some(p) => Some(at(p, parse_signature(&read(p)?))?),
            None => None,
        };
        Ok(Context { opts, env })
    }

    fn sentence(&self, path: &Path) -> Run<SnpSentence> {
        at(path, parse_sentence(&read(path)?, self.env.as_ref().map(|e| &e.1)))
    }

    fn table(&self) -> SignatureTable {
        let mut t = SignatureTable::new();
        if let Some((name, sig)) = &self.env {
            t.insert(name.clone(), sig.clone().into());
        }
        t
    }

    fn eval_limits(&self) -> EvalLimits {
        let mut l = EvalLimits::default();
        if let Some(n) = self.opts.max_expansions {
            l.max_expansions = n;
        }
        l
    }

    fn family_limits(&self) -> FamilyLimits {
        let mut l = FamilyLimits::default();
        if let Some(n) = self.opts.max_size {
            l.max_size = n;
        }
        l
    }

    fn ap_options(&self) -> ApOptions {
        let mut o = ApOptions {
            jobs: self.opts.jobs,
            strong: self.opts.strong,
            ..Default::default()
        };
        if let Some(b) = self.opts.max_b0 {
            o.max_b0 = b;
        }
        o
    }

    fn size_bound(&self) -> usize {
        self.opts.max_size.unwrap_or(3)
    }
}

fn witness_text(s: &SnpSentence, w: &Witness) -> String {
    match w {
        Witness::Monotone { clause, literal } | Witness::Guarded { clause, literal } => {
            let c = &s.matrix()[*clause];
            let kind = if matches!(w, Witness::Monotone { .. }) { "monotone" } else { "guarded" };
            format!(
                "not {kind}: clause {} {}, literal {}",
                clause + 1,
                s.clause_text(c),
                literal + 1
            )
        }
        Witness::Monadic { symbol } => format!("not monadic: {symbol} is not unary"),
        Witness::Connected { clause, components } => format!(
            "not connected: clause {} {} has {components} components",
            clause + 1,
            s.clause_text(&s.matrix()[*clause])
        ),
    }
}

pub fn parse(cx: &Context, file: &Path) -> Run<Outcome> {
    let s = cx.sentence(file)?;
    let mut text = s.to_string();
    for w in s.warnings() {
        let _ = writeln!(text, "# warning: {w}");
    }
    Ok(Outcome::ok(text, sentence_json(&s)))
}

pub fn classify_cmd(cx: &Context, file: &Path) -> Run<Outcome> {
    let s = cx.sentence(file)?;
    let c = classify(&s);
    let mut text = String::new();
    for (name, v) in [
        ("monotone", c.monotone),
        ("monadic", c.monadic),
        ("connected", c.connected),
        ("guarded", c.guarded),
    ] {
        let _ = writeln!(text, "{name}: {}", if v { "yes" } else { "no" });
    }
    for w in &c.witnesses {
        let _ = writeln!(text, "  {}", witness_text(&s, w));
    }
    Ok(Outcome::ok(text, serde_json::to_value(&c).expect("serializable")))
}

pub fn check_asnp(cx: &Context, file: &Path) -> Run<Outcome> {
    let s = cx.sentence(file)?;
    let v = at(file, decide_asnp(&s, cx.family_limits(), &cx.ap_options()))?;
    let mut text = format!("ASNP: {}\n", if v.in_asnp { "yes" } else { "no" });
    let mut j = json!({ "in_asnp": v.in_asnp, "failed_stage": v.failed.map(|f| f.name()) });
    match &v.shape_violation {
        Some(sv) => {
            let _ = writeln!(text, "shape: fails ({sv})");
            j["shape"] = json!({ "ok": false, "violation": sv, "message": sv.to_string() });
        }
        None => {
            let parts = v.parts.as_ref().expect("shape passed");
            let _ = writeln!(
                text,
                "shape: ok ({} existential-only clauses, {} guarded clauses)",
                parts.rho_part.len(),
                parts.guarded_part.len()
            );
            j["shape"] = json!({
                "ok": true,
                "rho_part": parts.rho_part.iter().map(|c| s.clause_text(c)).collect::<Vec<_>>(),
                "guarded_part": parts.guarded_part.iter().map(|c| s.clause_text(c)).collect::<Vec<_>>(),
            });
        }
    }
    if let (Some(f), Some(ap)) = (&v.family, &v.ap) {
        let _ = writeln!(text, "family: {} minimal members", f.len());
        if cx.opts.witness {
            text.push_str(&family_text("rho", f));
        }
        text.push_str(&ap_text("rho", ap));
        j["family"] = family_json(f);
        j["amalgamation"] = ap_json(ap);
    }
    Ok(Outcome::verdict(v.in_asnp, text, j))
}

fn load_family(cx: &Context, file: &Path) -> Run<(String, ForbiddenFamily)> {
    let text = read(file)?;
    if file.extension().is_some_and(|e| e == "snp") {
        let s = cx.sentence(file)?;
        let parts = match check_asnp_shape(&s) {
            Ok(p) => p,
            Err(v) => return Err(at::<()>(file, Err(Error::InvalidArgument(v.to_string()))).unwrap_err()),
        };
        let k = parts.rho_part.iter().map(|c| c.variables().len()).max().unwrap_or(0);
        let f = at(file, minimal_forbidden_family(&parts.rho_part, s.exist_sig(), k, cx.family_limits()))?;
        return Ok(("rho".into(), f));
    }
    let doc = at(file, parse_document(&text, &cx.table()))?;
    let mut names: Vec<&String> = doc.structures.iter().map(|s| &s.signature_name).collect();
    names.dedup();
    let sig_name = match (names.len(), doc.signatures.len()) {
        (1, _) => names[0].clone(),
        (0, 1) => doc.signatures.keys().next().unwrap().clone(),
        _ => {
            return Err(Failure {
                error: Error::InvalidArgument("a family file needs exactly one signature".into()),
                path: Some(file.to_path_buf()),
            })
        }
    };
    let sig = doc
        .signatures
        .get(&sig_name)
        .cloned()
        .or_else(|| cx.table().get(&sig_name).cloned())
        .expect("signature resolved by the parser");
    let members = doc.structures.into_iter().map(|s| s.structure).collect();
    Ok((sig_name, at(file, ForbiddenFamily::new(sig, members))?))
}

pub fn check_ap(cx: &Context, file: &Path) -> Run<Outcome> {
    let (sig_name, f) = load_family(cx, file)?;
    let v = at(file, decide_ap(&f, &cx.ap_options()))?;
    let mut text = format!("family: {} members\n", f.len());
    if cx.opts.witness {
        text.push_str(&family_text(&sig_name, &f));
    }
    text.push_str(&ap_text(&sig_name, &v));
    let j = json!({ "family": family_json(&f), "amalgamation": ap_json(&v) });
    Ok(Outcome::verdict(v.holds, text, j))
}

fn emit_sentence(cx: &Context, s: &SnpSentence) -> Run<Outcome> {
    let mut text = s.to_string();
    for w in s.warnings() {
        let _ = writeln!(text, "# warning: {w}");
    }
    if let Some(out) = &cx.opts.output {
        write(out, &s.to_string())?;
        text = format!("wrote {}\n", out.display());
    }
    Ok(Outcome::ok(text, sentence_json(s)))
}

pub fn rewrite(cx: &Context, file: &Path) -> Run<Outcome> {
    let s = cx.sentence(file)?;
    let r = at(file, rewrite_connected(&s))?;
    emit_sentence(cx, &r)
}

fn numbered(path: &Path, i: usize) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{i}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{i}"),
    };
    path.with_file_name(name)
}

pub fn split(cx: &Context, file: &Path) -> Run<Outcome> {
    let s = cx.sentence(file)?;
    let parts = at(file, split_disconnected(&s))?;
    let mut text = String::new();
    let mut files = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        match &cx.opts.output {
            Some(out) => {
                let path = numbered(out, i + 1);
                write(&path, &p.to_string())?;
                let _ = writeln!(text, "wrote {}", path.display());
                files.push(path.display().to_string());
            }
            None => {
                let _ = write!(text, "# part {}\n{p}", i + 1);
            }
        }
    }
    let j = json!({
        "parts": parts.iter().map(sentence_json).collect::<Vec<_>>(),
        "files": files,
    });
    Ok(Outcome::ok(text, j))
}

pub fn translate(cx: &Context, file: &Path) -> Run<Outcome> {
    let s = cx.sentence(file)?;
    let t = at(file, gmsnp_translate(&s, cx.family_limits()))?;
    let mut text = String::from("translation:\n");
    for (r, plus, minus) in &t.map.existential {
        let _ = writeln!(text, "  {r} -> {plus}, ~{r} -> {minus}");
    }
    for (r, primed) in &t.map.input {
        let _ = writeln!(text, "  {r} -> {primed}");
    }
    let _ = write!(text, "matrix:\n{}", t.matrix);
    let _ = writeln!(text, "family: {} minimal members of size <= {}", t.family.len(), t.n);
    text.push_str(&family_text("sigma", &t.family));
    let j = json!({
        "existential": t.map.existential.iter().map(|(r, p, m)| json!({"symbol": r, "plus": p, "minus": m})).collect::<Vec<_>>(),
        "input": t.map.input.iter().map(|(r, p)| json!({"symbol": r, "primed": p})).collect::<Vec<_>>(),
        "matrix": sentence_json(&t.matrix),
        "n": t.n,
        "family": family_json(&t.family),
    });
    Ok(Outcome::ok(text, j))
}

pub fn csp(cx: &Context, file: &Path) -> Run<Outcome> {
    let d = at(file, parse_csp(&read(file)?))?;
    let s = at(file, csp_to_asnp(&d.family, &d.equality, &d.definitions))?;
    if let Err(v) = check_asnp_shape(&s) {
        return Err(Failure {
            error: Error::Internal(format!("output fails the ASNP shape check: {v}")),
            path: Some(file.to_path_buf()),
        });
    }
    emit_sentence(cx, &s)
}

fn fit(s: &SnpSentence, a: &Structure) -> snp_core::Result<SnpSentence> {
    let t = s.with_input_sig(a.signature())?;
    if t.input_sig() != a.signature() {
        return Err(Error::SignatureMismatch(format!(
            "structure over {} but sentence over {}",
            a.signature(),
            s.input_sig()
        )));
    }
    Ok(t)
}

pub fn eval(cx: &Context, sentence: &Path, structures: &Path) -> Run<Outcome> {
    let s = cx.sentence(sentence)?;
    let doc = at(structures, parse_document(&read(structures)?, &cx.table()))?;
    let mut text = String::new();
    let mut results = Vec::new();
    let mut all = true;
    for named in &doc.structures {
        let fitted = at(structures, fit(&s, &named.structure))?;
        let e = at(structures, Evaluator::new(&fitted, cx.eval_limits()).expansion(&named.structure))?;
        all &= e.is_some();
        let _ = writeln!(
            text,
            "{}: {}",
            named.name,
            if e.is_some() { "model" } else { "not a model" }
        );
        let mut r = json!({ "name": named.name, "model": e.is_some() });
        if let (true, Some(e)) = (cx.opts.witness, &e) {
            let combined = e.combined();
            text.push_str(&structures_text(
                "expanded",
                combined.signature(),
                &[(format!("{}_expansion", named.name), &combined)],
            ));
            r["expansion"] = structure_json(&combined);
        }
        results.push(r);
    }
    Ok(Outcome::verdict(all, text, json!({ "results": results, "all_models": all })))
}

pub fn models(cx: &Context, file: &Path) -> Run<Outcome> {
    let s = cx.sentence(file)?;
    let n = cx.size_bound();
    let ms = at(file, models_up_to(&s, n, cx.eval_limits()))?;
    let mut counts = vec![0usize; n + 1];
    for m in &ms {
        counts[m.size()] += 1;
    }
    let mut text = format!("models up to size {n}: {}\n", ms.len());
    for (size, c) in counts.iter().enumerate() {
        let _ = writeln!(text, "  size {size}: {c}");
    }
    let items: Vec<(String, &Structure)> = ms.iter().enumerate().map(|(i, m)| (format!("m{}", i + 1), m)).collect();
    text.push_str(&structures_text("tau", s.input_sig(), &items));
    let j = json!({
        "max_size": n,
        "count": ms.len(),
        "by_size": counts,
        "models": ms.iter().map(structure_json).collect::<Vec<_>>(),
    });
    Ok(Outcome::ok(text, j))
}

pub fn equiv(cx: &Context, a: &Path, b: &Path) -> Run<Outcome> {
    let s1 = cx.sentence(a)?;
    let s2 = cx.sentence(b)?;
    let joint = at(a, s1.input_sig().union(s2.input_sig()))?;
    let s1 = at(a, s1.with_input_sig(&joint))?;
    let s2 = at(b, s2.with_input_sig(&joint))?;
    let n = cx.size_bound();
    let e = at(a, equivalent_up_to(&s1, &s2, n, cx.eval_limits()))?;
    let mut text = format!(
        "equivalent up to size {n}: {}\nclasses checked: {}\n",
        if e.holds { "yes" } else { "no" },
        e.classes_checked
    );
    if let (Some(c), Some(by)) = (&e.counterexample, e.satisfied_by) {
        let _ = writeln!(text, "counterexample (a model of sentence {by} only):");
        text.push_str(&structures_text("tau", &joint, &[("counterexample".into(), c)]));
    }
    let j = json!({
        "holds": e.holds,
        "max_size": n,
        "classes_checked": e.classes_checked,
        "counterexample": e.counterexample.as_ref().map(structure_json),
        "satisfied_by": e.satisfied_by,
    });
    Ok(Outcome::verdict(e.holds, text, j))
}

pub fn closure(cx: &Context, file: &Path) -> Run<Outcome> {
    let s = cx.sentence(file)?;
    let n = cx.size_bound();
    let r = at(file, check_closure_properties(&s, n, cx.eval_limits()))?;
    let summary = ClosureSummary::from(&r);
    let mut text = format!(
        "classes up to size {n}: {}\nmodels: {}\ndisjoint-union violations: {}\ninverse-homomorphism violations: {}\n",
        r.classes,
        r.models,
        r.union_violations.len(),
        r.homomorphism_violations.len()
    );
    let mut j = serde_json::to_value(&summary).expect("serializable");
    j["clean"] = json!(r.is_clean());
    if cx.opts.witness {
        let pairs = |v: &[(Structure, Structure)]| -> Vec<Value> {
            v.iter()
                .map(|(a, b)| json!([structure_json(a), structure_json(b)]))
                .collect()
        };
        j["union_violations"] = json!(pairs(&r.union_violations));
        j["homomorphism_violations"] = json!(pairs(&r.homomorphism_violations));
        for (i, (a, b)) in r.union_violations.iter().enumerate() {
            let _ = writeln!(text, "# union violation {}: a and b are models, their union is not", i + 1);
            text.push_str(&write_structure(&format!("u{}_a", i + 1), "tau", a));
            text.push_str(&write_structure(&format!("u{}_b", i + 1), "tau", b));
        }
        for (i, (a, b)) in r.homomorphism_violations.iter().enumerate() {
            let _ = writeln!(text, "# homomorphism violation {}: a maps to the model b but is not a model", i + 1);
            text.push_str(&write_structure(&format!("h{}_a", i + 1), "tau", a));
            text.push_str(&write_structure(&format!("h{}_b", i + 1), "tau", b));
        }
    }
    Ok(Outcome::verdict(r.is_clean(), text, j))
}
