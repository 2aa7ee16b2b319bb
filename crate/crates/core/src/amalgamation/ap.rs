//! One-point amalgamation diagrams and the bounded AP decision.
//!
//! A diagram is a structure `B0` in the class with two one-point
//! extensions `B0 + p` and `B0 + q`. An extension is encoded as a bit mask
//! over the atoms mentioning the new point (see [`Layout`]), and a member
//! `M` of the family that could appear in a completion is recorded as a
//! "killer": a pattern on the extension bits, plus, when `M` uses both new
//! points, the relations it needs between them. A pair of extensions fails
//! to amalgamate exactly when its killers cover every choice of relations
//! between `p` and `q`.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use super::family::{max_pair_completions, ForbiddenFamily};
use crate::error::{Error, Result};
use std::collections::HashSet;

use crate::structure::{canonical_labelling, for_each_embedding, CanonicalCode, Signature, Structure};

/// A one-point amalgamation diagram. `b1` and `b2` have one element more
/// than `b0` (the last one, standing for `p` and `q` respectively) and
/// induce `b0` on the others.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    b0: Structure,
    b1: Structure,
    b2: Structure,
}

impl Diagram {
    pub fn new(b0: Structure, b1: Structure, b2: Structure) -> Result<Self> {
        let n = b0.size();
        let shared: Vec<usize> = (0..n).collect();
        for (name, b) in [("first", &b1), ("second", &b2)] {
            if b.signature() != b0.signature() {
                return Err(Error::SignatureMismatch(format!(
                    "{name} side over {} but shared part over {}",
                    b.signature(),
                    b0.signature()
                )));
            }
            if b.size() != n + 1 || b.induced_substructure(&shared)? != b0 {
                return Err(Error::InvalidArgument(format!(
                    "{name} side is not a one-point extension of the shared part"
                )));
            }
        }
        Ok(Diagram { b0, b1, b2 })
    }

    pub fn b0(&self) -> &Structure {
        &self.b0
    }

    /// `B0 + p`, with `p` the last element.
    pub fn b1(&self) -> &Structure {
        &self.b1
    }

    /// `B0 + q`, with `q` the last element.
    pub fn b2(&self) -> &Structure {
        &self.b2
    }

    /// Whether `p` and `q` extend `B0` in the same way, so that identifying
    /// them gives an amalgam.
    pub fn same_extension(&self) -> bool {
        self.b1 == self.b2
    }

    /// Every structure on `B0 ∪ {p, q}` (with `p = n`, `q = n + 1`) that
    /// induces `b1` on `B0 ∪ {p}` and `b2` on `B0 ∪ {q}`. They differ only
    /// in the relations between `p` and `q`, and are listed by those bits:
    /// for the j-th binary symbol `R`, bit `2j` is `R(p,q)` and bit `2j+1`
    /// is `R(q,p)`.
    pub fn completions(&self) -> Result<Vec<Structure>> {
        let sig = self.b0.signature_arc().clone();
        if !sig.is_binary() {
            return Err(Error::NonBinary(sig.to_string()));
        }
        let n = self.b0.size();
        let (p, q) = (n, n + 1);
        let mut base = Structure::new(sig.clone(), n + 2);
        for (sym, t) in self.b1.all_tuples() {
            base.insert_at(sym, &t)?;
        }
        for (sym, t) in self.b2.all_tuples() {
            let t: Vec<usize> = t.iter().map(|&e| if e == n { q } else { e }).collect();
            base.insert_at(sym, &t)?;
        }
        let binary = binary_symbols(&sig);
        let cross = 2 * binary.len();
        if cross > 20 {
            return Err(Error::cap("completions", 1u128 << cross, 1 << 20));
        }
        let mut out = Vec::with_capacity(1 << cross);
        for x in 0u32..1 << cross {
            let mut d = base.clone();
            for (j, &sym) in binary.iter().enumerate() {
                if x >> (2 * j) & 1 == 1 {
                    d.insert_at(sym, &[p, q])?;
                }
                if x >> (2 * j + 1) & 1 == 1 {
                    d.insert_at(sym, &[q, p])?;
                }
            }
            out.push(d);
        }
        Ok(out)
    }
}

fn binary_symbols(sig: &Signature) -> Vec<usize> {
    (0..sig.len()).filter(|&i| sig.symbols()[i].arity == 2).collect()
}

/// Some amalgam of `d` in the class of `f`, or `None` when there is none.
///
/// Unless `strong` is set, `p` and `q` may be identified, which is possible
/// exactly when both sides extend `B0` in the same way; the amalgam
/// returned then is `b1` itself. Otherwise the completions are tried in
/// order and the first one admitted by `f` is returned.
pub fn decide_one_point_diagram(f: &ForbiddenFamily, d: &Diagram, strong: bool) -> Result<Option<Structure>> {
    if d.b0().signature() != f.signature() {
        return Err(Error::SignatureMismatch(format!(
            "diagram over {} but family over {}",
            d.b0().signature(),
            f.signature()
        )));
    }
    if !f.signature().is_binary() {
        return Err(Error::NonBinary(f.signature().to_string()));
    }
    for (name, b) in [("first", d.b1()), ("second", d.b2())] {
        if !f.admits(b)? {
            return Err(Error::InvalidArgument(format!("{name} side of the diagram is not in the class")));
        }
    }
    if !strong && d.same_extension() {
        return Ok(Some(d.b1().clone()));
    }
    for c in d.completions()? {
        if f.admits(&c)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Options for [`decide_ap`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApOptions {
    /// Largest shared part the search may be asked to cover.
    pub max_b0: usize,
    /// Cap on the number of diagrams (pairs of extensions) checked.
    pub max_diagrams: u64,
    /// Worker threads.
    pub jobs: usize,
    /// Require `p` and `q` to stay distinct in the amalgam.
    pub strong: bool,
}

impl Default for ApOptions {
    fn default() -> Self {
        ApOptions {
            max_b0: 8,
            max_diagrams: 10_000_000,
            jobs: 1,
            strong: false,
        }
    }
}

/// Outcome of [`decide_ap`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApVerdict {
    pub holds: bool,
    pub strong: bool,
    /// Largest member size.
    pub m: usize,
    /// Admitted two-element isomorphism types, when counted.
    pub ell: Option<usize>,
    /// Largest number of admitted completions between two fixed points.
    pub completions: usize,
    /// Largest shared part searched.
    pub bound: usize,
    /// Isomorphism classes of shared parts searched.
    pub b0_classes: usize,
    /// Diagrams (unordered pairs of extensions) in scope.
    pub diagrams: u64,
    /// The least failing diagram, when AP fails.
    pub witness: Option<Diagram>,
}

/// The size bound on shared parts searched by [`decide_ap`].
///
/// A failing diagram restricts to a failing diagram on the points used by
/// one killing copy per admissible completion; each copy uses at most
/// `m - 2` points of `B0`. Without strong amalgamation one more point may
/// be needed to keep the two extensions distinct.
pub fn ap_bound(m: usize, completions: usize, strong: bool) -> usize {
    let extra = if strong { 0 } else { 1 };
    (m.saturating_sub(2) * completions + extra).max(1)
}

/// Decides whether the class of finite structures admitted by `f` has the
/// amalgamation property, by checking all one-point diagrams whose shared
/// part has at most [`ap_bound`] elements.
pub fn decide_ap(f: &ForbiddenFamily, opts: &ApOptions) -> Result<ApVerdict> {
    let sig = f.signature_arc().clone();
    if !sig.is_binary() {
        return Err(Error::NonBinary(sig.to_string()));
    }
    let completions = max_pair_completions(f)?;
    let bound = ap_bound(f.m(), completions, opts.strong);
    if bound > opts.max_b0 {
        return Err(Error::cap("bound too large: amalgamation bound on |B0|", bound as u128, opts.max_b0 as u128));
    }
    let jobs = opts.jobs.max(1);
    let (b0s, extensions) = class_with_extensions(f, bound, jobs)?;
    let mut diagrams: u64 = 0;
    for ext in &extensions {
        let k = ext.len() as u64;
        diagrams += if opts.strong { k * (k + 1) / 2 } else { k * k.saturating_sub(1) / 2 };
    }
    if diagrams > opts.max_diagrams {
        return Err(Error::cap("one-point diagrams", diagrams as u128, opts.max_diagrams as u128));
    }

    let best = AtomicUsize::new(usize::MAX);
    let found: Mutex<Vec<(usize, u64, u64)>> = Mutex::new(Vec::new());
    let indices: Vec<usize> = (0..b0s.len()).collect();
    par_map(&indices, jobs, |&i| {
        if best.load(Ordering::SeqCst) < i {
            return Ok(());
        }
        if let Some((e1, e2)) = first_failing_pair(f, &b0s[i], &extensions[i], opts.strong)? {
            best.fetch_min(i, Ordering::SeqCst);
            found.lock().unwrap().push((i, e1, e2));
        }
        Ok(())
    })?;
    let found = found.into_inner().unwrap();
    let witness = match found.into_iter().min() {
        None => None,
        Some((i, e1, e2)) => {
            let layout = Layout::new(&sig, b0s[i].size());
            let d = Diagram::new(b0s[i].clone(), layout.extend(&b0s[i], e1), layout.extend(&b0s[i], e2))?;
            if decide_one_point_diagram(f, &d, opts.strong)?.is_some() {
                return Err(Error::Internal("failing diagram has an amalgam".into()));
            }
            Some(d)
        }
    };
    Ok(ApVerdict {
        holds: witness.is_none(),
        strong: opts.strong,
        m: f.m(),
        ell: f.ell(),
        completions,
        bound,
        b0_classes: b0s.len(),
        diagrams,
        witness,
    })
}

// Members of the class up to `bound` elements, one per isomorphism class
// in canonical order, with the valid extensions of each. Level s + 1 is
// read off the valid extensions of level s.
fn class_with_extensions(f: &ForbiddenFamily, bound: usize, jobs: usize) -> Result<(Vec<Structure>, Vec<Vec<u64>>)> {
    let sig = f.signature_arc().clone();
    let empty = Structure::new(sig.clone(), 0);
    if !f.admits(&empty)? {
        return Ok((Vec::new(), Vec::new()));
    }
    let mut b0s = vec![empty];
    let mut extensions = Vec::new();
    let mut level_start = 0;
    for size in 0..=bound {
        let level_ext = par_map(&b0s[level_start..], jobs, |b0| valid_extensions(f, b0))?;
        if size < bound {
            let layout = Layout::new(&sig, size);
            let mut seen = HashSet::new();
            let mut next: Vec<(CanonicalCode, Structure)> = Vec::new();
            for (b0, ext) in b0s[level_start..].iter().zip(&level_ext) {
                for &e in ext {
                    let child = layout.extend(b0, e);
                    let (code, perm) = canonical_labelling(&child);
                    if seen.insert(code.clone()) {
                        next.push((code, child.relabel(&perm)));
                    }
                }
            }
            next.sort_by(|a, b| a.0.cmp(&b.0));
            level_start = b0s.len();
            b0s.extend(next.into_iter().map(|(_, s)| s));
        }
        extensions.extend(level_ext);
        if level_start == b0s.len() {
            break;
        }
    }
    Ok((b0s, extensions))
}

const MAX_EXTENSION_ATOMS: usize = 26;

// Atoms mentioning the new point x over B0 = {0..n-1}, in signature order:
// U(x) for unary U; R(x,x), then R(x,b), R(b,x) for each b, for binary R.
struct Layout {
    n: usize,
    // first bit of each symbol
    start: Vec<usize>,
    arity: Vec<usize>,
    atoms: usize,
}

impl Layout {
    fn new(sig: &Signature, n: usize) -> Self {
        let mut start = Vec::new();
        let mut arity = Vec::new();
        let mut atoms = 0;
        for s in sig.symbols() {
            start.push(atoms);
            arity.push(s.arity);
            atoms += if s.arity == 1 { 1 } else { 1 + 2 * n };
        }
        Layout { n, start, arity, atoms }
    }

    fn self_bit(&self, sym: usize) -> usize {
        self.start[sym]
    }

    fn out_bit(&self, sym: usize, b: usize) -> usize {
        self.start[sym] + 1 + 2 * b
    }

    fn in_bit(&self, sym: usize, b: usize) -> usize {
        self.start[sym] + 2 + 2 * b
    }

    // B0 plus a new last element with the relations given by `mask`
    fn extend(&self, b0: &Structure, mask: u64) -> Structure {
        let x = self.n;
        let mut s = Structure::new(b0.signature_arc().clone(), self.n + 1);
        for (sym, t) in b0.all_tuples() {
            s.insert_at(sym, &t).expect("tuple within range");
        }
        let bit = |i: usize| mask >> i & 1 == 1;
        for sym in 0..self.start.len() {
            if self.arity[sym] == 1 {
                if bit(self.self_bit(sym)) {
                    s.insert_at(sym, &[x]).expect("tuple within range");
                }
                continue;
            }
            if bit(self.self_bit(sym)) {
                s.insert_at(sym, &[x, x]).expect("tuple within range");
            }
            for b in 0..self.n {
                if bit(self.out_bit(sym, b)) {
                    s.insert_at(sym, &[x, b]).expect("tuple within range");
                }
                if bit(self.in_bit(sym, b)) {
                    s.insert_at(sym, &[b, x]).expect("tuple within range");
                }
            }
        }
        s
    }

    // The bits a copy of `m` forces on the new point when `u` goes to the
    // new point and `rest[i]` goes to `image[i]`: (care, value).
    fn pattern(&self, m: &Structure, u: usize, rest: &[usize], image: &[usize]) -> (u64, u64) {
        let (mut care, mut value) = (0u64, 0u64);
        let mut set = |bit: usize, on: bool| {
            care |= 1 << bit;
            if on {
                value |= 1 << bit;
            }
        };
        for sym in 0..self.start.len() {
            if self.arity[sym] == 1 {
                set(self.self_bit(sym), m.contains(sym, &[u]));
                continue;
            }
            set(self.self_bit(sym), m.contains(sym, &[u, u]));
            for (&w, &b) in rest.iter().zip(image) {
                set(self.out_bit(sym, b), m.contains(sym, &[u, w]));
                set(self.in_bit(sym, b), m.contains(sym, &[w, u]));
            }
        }
        (care, value)
    }
}

struct PairKiller {
    care1: u64,
    value1: u64,
    care2: u64,
    value2: u64,
    cross: u32,
}

fn matches(e: u64, care: u64, value: u64) -> bool {
    e & care == value
}

// Extension masks of b0 whose one-point extension stays in the class.
fn valid_extensions(f: &ForbiddenFamily, b0: &Structure) -> Result<Vec<u64>> {
    let layout = Layout::new(f.signature(), b0.size());
    if layout.atoms > MAX_EXTENSION_ATOMS {
        return Err(Error::cap(
            format!("one-point extensions of a {}-element structure", b0.size()),
            1u128 << layout.atoms.min(127),
            1 << MAX_EXTENSION_ATOMS,
        ));
    }
    let mut killers: Vec<(u64, u64)> = Vec::new();
    for m in f.members() {
        for u in 0..m.size() {
            let rest: Vec<usize> = (0..m.size()).filter(|&w| w != u).collect();
            let sub = m.induced_substructure(&rest)?;
            for_each_embedding(&sub, b0, |image| {
                killers.push(layout.pattern(m, u, &rest, image));
                true
            })?;
        }
    }
    killers.sort_unstable();
    killers.dedup();
    // killers grouped by their highest care bit, checked as soon as that
    // bit is set during a depth-first walk over the bits
    let mut by_last: Vec<Vec<(u64, u64)>> = vec![Vec::new(); layout.atoms.max(1)];
    let mut always_killed = false;
    for &(c, v) in &killers {
        if c == 0 {
            always_killed = true;
        } else {
            by_last[63 - c.leading_zeros() as usize].push((c, v));
        }
    }
    let mut out = Vec::new();
    if !always_killed {
        extend_masks(&by_last, layout.atoms, 0, 0, &mut out);
    }
    out.sort_unstable();
    Ok(out)
}

fn extend_masks(by_last: &[Vec<(u64, u64)>], atoms: usize, bit: usize, mask: u64, out: &mut Vec<u64>) {
    if bit == atoms {
        out.push(mask);
        return;
    }
    for on in [false, true] {
        let m = if on { mask | 1 << bit } else { mask };
        if !by_last[bit].iter().any(|&(c, v)| matches(m, c, v)) {
            extend_masks(by_last, atoms, bit + 1, m, out);
        }
    }
}

fn pair_killers(f: &ForbiddenFamily, b0: &Structure, layout: &Layout) -> Result<Vec<PairKiller>> {
    let binary = binary_symbols(f.signature());
    let mut out = Vec::new();
    for m in f.members() {
        for u in 0..m.size() {
            for v in 0..m.size() {
                if u == v {
                    continue;
                }
                let rest: Vec<usize> = (0..m.size()).filter(|&w| w != u && w != v).collect();
                let sub = m.induced_substructure(&rest)?;
                let mut cross = 0u32;
                for (j, &sym) in binary.iter().enumerate() {
                    if m.contains(sym, &[u, v]) {
                        cross |= 1 << (2 * j);
                    }
                    if m.contains(sym, &[v, u]) {
                        cross |= 1 << (2 * j + 1);
                    }
                }
                for_each_embedding(&sub, b0, |image| {
                    let (care1, value1) = layout.pattern(m, u, &rest, image);
                    let (care2, value2) = layout.pattern(m, v, &rest, image);
                    out.push(PairKiller {
                        care1,
                        value1,
                        care2,
                        value2,
                        cross,
                    });
                    true
                })?;
            }
        }
    }
    Ok(out)
}

// The first pair (e1, e2) of valid extensions, in index order, whose
// completions are all killed.
fn first_failing_pair(f: &ForbiddenFamily, b0: &Structure, valid: &[u64], strong: bool) -> Result<Option<(u64, u64)>> {
    let layout = Layout::new(f.signature(), b0.size());
    let cross_bits = 2 * binary_symbols(f.signature()).len();
    if cross_bits > 20 {
        return Err(Error::cap("completions", 1u128 << cross_bits, 1 << 20));
    }
    let total = 1usize << cross_bits;
    let killers = pair_killers(f, b0, &layout)?;
    let mut killed = vec![0u64; total.div_ceil(64)];
    for (i, &e1) in valid.iter().enumerate() {
        let relevant: Vec<&PairKiller> = killers.iter().filter(|k| matches(e1, k.care1, k.value1)).collect();
        let from = if strong { i } else { i + 1 };
        for &e2 in &valid[from..] {
            killed.iter_mut().for_each(|w| *w = 0);
            let mut count = 0;
            for k in &relevant {
                if matches(e2, k.care2, k.value2) {
                    let x = k.cross as usize;
                    if killed[x / 64] >> (x % 64) & 1 == 0 {
                        killed[x / 64] |= 1 << (x % 64);
                        count += 1;
                    }
                }
            }
            if count == total {
                return Ok(Some((e1, e2)));
            }
        }
    }
    Ok(None)
}

// Applies `f` to every item on up to `jobs` threads, keeping input order.
fn par_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> Result<R> + Sync) -> Result<Vec<R>> {
    if jobs <= 1 || items.len() <= 1 {
        return items.iter().map(&f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<R>>>> = items.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(items.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= items.len() {
                    break;
                }
                *slots[i].lock().unwrap() = Some(f(&items[i]));
            });
        }
    });
    slots
        .into_iter()
        .map(|s| s.into_inner().unwrap().expect("every slot filled"))
        .collect()
}
