//! Isomorphism-free enumeration of small structures.
//!
//! Structures of size `s` are produced by extending every class
//! representative of size `s-1` by one new element in all possible ways,
//! and the candidates are deduplicated by canonical code. Every structure
//! of size `s` arises this way (delete its last element), so the output
//! holds exactly one representative per isomorphism class.
//!
//! A hereditary predicate (one closed under induced substructures) may be
//! supplied; rejected classes are never extended, which is what keeps
//! enumeration of models and of `Forb(F)` classes cheap.

use std::collections::HashSet;
use std::sync::Arc;

use super::canon::canonical_labelling;
use super::{decode_tuple, tuple_index, Signature, Structure};
use crate::error::{Error, Result};

type TupleFilter<'f> = Box<dyn Fn(usize, &[usize]) -> bool + 'f>;
type Keep<'f> = Box<dyn FnMut(&Structure) -> Result<bool> + 'f>;

/// Builder for an enumeration run.
pub struct Enumerator<'f> {
    sig: Arc<Signature>,
    max_size: usize,
    tuple_filter: Option<TupleFilter<'f>>,
    keep: Option<Keep<'f>>,
    max_candidates: u64,
}

/// Default cap on the number of labelled candidates inspected in one run.
pub const DEFAULT_MAX_CANDIDATES: u64 = 50_000_000;

impl<'f> Enumerator<'f> {
    pub fn new(sig: impl Into<Arc<Signature>>, max_size: usize) -> Self {
        Enumerator {
            sig: sig.into(),
            max_size,
            tuple_filter: None,
            keep: None,
            max_candidates: DEFAULT_MAX_CANDIDATES,
        }
    }

    /// Restricts which tuples may appear at all. The filter must only depend
    /// on the symbol and the equality pattern of the tuple.
    pub fn tuples(mut self, filter: impl Fn(usize, &[usize]) -> bool + 'f) -> Self {
        self.tuple_filter = Some(Box::new(filter));
        self
    }

    /// Keeps only classes satisfying `keep`, which must be isomorphism
    /// invariant and closed under induced substructures. It is called once
    /// per isomorphism class reached, on the canonical representative.
    pub fn hereditary(mut self, keep: impl FnMut(&Structure) -> bool + 'f) -> Self {
        let mut keep = keep;
        self.keep = Some(Box::new(move |s| Ok(keep(s))));
        self
    }

    /// Like [`Enumerator::hereditary`] for predicates that can fail.
    pub fn try_hereditary(mut self, keep: impl FnMut(&Structure) -> Result<bool> + 'f) -> Self {
        self.keep = Some(Box::new(keep));
        self
    }

    pub fn max_candidates(mut self, cap: u64) -> Self {
        self.max_candidates = cap;
        self
    }

    /// Runs the enumeration. The result is sorted by canonical code, hence
    /// by size first.
    pub fn run(mut self) -> Result<Vec<Structure>> {
        let mut out = Vec::new();
        let mut candidates: u64 = 0;
        let empty = Structure::new(self.sig.clone(), 0);
        let mut level = Vec::new();
        if self.accept(&empty)? {
            level.push(empty.clone());
            out.push(empty);
        }
        for size in 1..=self.max_size {
            if level.is_empty() {
                break;
            }
            let new_tuples = self.new_tuples(size);
            if new_tuples.len() >= 63 {
                return Err(Error::cap(
                    format!("one-element extensions at size {size}"),
                    1u128 << new_tuples.len().min(127),
                    self.max_candidates as u128,
                ));
            }
            let per_parent = 1u64 << new_tuples.len();
            let needed = per_parent.saturating_mul(level.len() as u64);
            if candidates.saturating_add(needed) > self.max_candidates {
                return Err(Error::cap(
                    format!("labelled candidates up to size {size}"),
                    candidates as u128 + needed as u128,
                    self.max_candidates as u128,
                ));
            }
            candidates += needed;

            let mut seen = HashSet::new();
            let mut next: Vec<(super::CanonicalCode, Structure)> = Vec::new();
            for parent in &level {
                let template = grow(parent, size);
                for mask in 0..per_parent {
                    let mut child = template.clone();
                    for (bit, &(sym, idx)) in new_tuples.iter().enumerate() {
                        if mask >> bit & 1 == 1 {
                            child.insert_index(sym, idx);
                        }
                    }
                    let (code, perm) = canonical_labelling(&child);
                    if seen.contains(&code) {
                        continue;
                    }
                    seen.insert(code.clone());
                    let rep = child.relabel(&perm);
                    if self.accept(&rep)? {
                        next.push((code, rep));
                    }
                }
            }
            next.sort_by(|a, b| a.0.cmp(&b.0));
            level = next.into_iter().map(|(_, s)| s).collect();
            out.extend(level.iter().cloned());
        }
        Ok(out)
    }

    fn accept(&mut self, s: &Structure) -> Result<bool> {
        match &mut self.keep {
            Some(keep) => keep(s),
            None => Ok(true),
        }
    }

    // (symbol, tuple index) of every admissible tuple over {0..size-1}
    // that mentions the new element size-1
    fn new_tuples(&self, size: usize) -> Vec<(usize, usize)> {
        let fresh = size - 1;
        let mut out = Vec::new();
        for (sym, s) in self.sig.symbols().iter().enumerate() {
            let mut t = vec![0; s.arity];
            for idx in 0..size.pow(s.arity as u32) {
                decode_tuple(idx, size, &mut t);
                if !t.contains(&fresh) {
                    continue;
                }
                if let Some(filter) = &self.tuple_filter {
                    if !filter(sym, &t) {
                        continue;
                    }
                }
                out.push((sym, idx));
            }
        }
        out
    }
}

// the same tuples re-indexed over a domain one larger
fn grow(parent: &Structure, size: usize) -> Structure {
    let mut out = Structure::new(parent.signature_arc().clone(), size);
    for sym in 0..parent.signature().len() {
        for t in parent.tuples(sym) {
            out.insert_index(sym, tuple_index(&t, size));
        }
    }
    out
}

/// One representative per isomorphism class of `sig`-structures with at
/// most `max_size` elements (the empty structure included).
///
/// The count grows doubly exponentially in the arity; sizes beyond 5 or 6
/// are only practical for restrictive signatures.
pub fn enumerate_structures(sig: impl Into<Arc<Signature>>, max_size: usize) -> Result<Vec<Structure>> {
    Enumerator::new(sig, max_size).run()
}
