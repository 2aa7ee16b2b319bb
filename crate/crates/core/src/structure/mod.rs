//! Finite relational structures over a fixed signature.
//!
//! Domains are always `{0, …, size-1}`. Each relation is stored as a bitset
//! over all `size^arity` candidate tuples, indexed big-endian so that index
//! order coincides with lexicographic tuple order.

mod canon;
mod enumerate;
mod morphism;
pub mod text;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

pub(crate) use canon::canonical_labelling;
pub use canon::{automorphisms, canonical_code, CanonicalCode};
pub use enumerate::{enumerate_structures, Enumerator, DEFAULT_MAX_CANDIDATES};
pub use morphism::{find_embedding, find_homomorphism, for_each_embedding, VertexMap};

/// A relation symbol together with its arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// A finite relational signature, kept sorted by symbol name.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Signature {
    symbols: Vec<Symbol>,
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Signature {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let mut symbols: Vec<Symbol> = symbols
            .into_iter()
            .map(|(name, arity)| Symbol {
                name: name.into(),
                arity,
            })
            .collect();
        for s in &symbols {
            if !is_identifier(&s.name) {
                return Err(Error::InvalidSignature(format!(
                    "`{}` is not an identifier",
                    s.name
                )));
            }
            if s.arity == 0 {
                return Err(Error::InvalidSignature(format!(
                    "symbol {} has arity 0",
                    s.name
                )));
            }
        }
        symbols.sort();
        for w in symbols.windows(2) {
            if w[0].name == w[1].name {
                return Err(Error::InvalidSignature(format!(
                    "symbol {} declared twice",
                    w[0].name
                )));
            }
        }
        Ok(Signature { symbols })
    }

    pub fn empty() -> Self {
        Signature::default()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols
            .binary_search_by(|s| s.name.as_str().cmp(name))
            .ok()
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.index_of(name).map(|i| self.symbols[i].arity)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    pub fn max_arity(&self) -> usize {
        self.symbols.iter().map(|s| s.arity).max().unwrap_or(0)
    }

    /// True when every symbol has arity at most two.
    pub fn is_binary(&self) -> bool {
        self.max_arity() <= 2
    }

    /// Union of two signatures; a symbol present in both must agree on arity.
    pub fn union(&self, other: &Signature) -> Result<Signature> {
        let mut all = self.symbols.clone();
        for s in &other.symbols {
            match self.arity(&s.name) {
                Some(a) if a == s.arity => {}
                Some(a) => {
                    return Err(Error::SignatureMismatch(format!(
                        "{} has arity {} and {}",
                        s.name, a, s.arity
                    )))
                }
                None => all.push(s.clone()),
            }
        }
        all.sort();
        Ok(Signature { symbols: all })
    }

    /// Restriction to the named symbols (unknown names are ignored).
    pub fn restrict<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Signature {
        let mut keep: Vec<Symbol> = names
            .into_iter()
            .filter_map(|n| self.index_of(n).map(|i| self.symbols[i].clone()))
            .collect();
        keep.sort();
        keep.dedup();
        Signature { symbols: keep }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}/{}", s.name, s.arity)?;
        }
        write!(f, "}}")
    }
}

/// A set of tuples of one relation, as a bitset over `size^arity` indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct TupleSet {
    words: Vec<u64>,
}

impl TupleSet {
    fn with_capacity(bits: usize) -> Self {
        TupleSet {
            words: vec![0; bits.div_ceil(64)],
        }
    }

    #[inline]
    pub(crate) fn contains(&self, idx: usize) -> bool {
        self.words[idx / 64] >> (idx % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn insert(&mut self, idx: usize) -> bool {
        let had = self.contains(idx);
        self.words[idx / 64] |= 1 << (idx % 64);
        !had
    }

    fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }
}

#[inline]
pub(crate) fn tuple_index(tuple: &[usize], size: usize) -> usize {
    tuple.iter().fold(0, |acc, &e| acc * size + e)
}

#[inline]
pub(crate) fn decode_tuple(mut idx: usize, size: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = idx % size;
        idx /= size;
    }
}

/// A finite structure: a signature, a domain size and one tuple set per symbol.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    sig: Arc<Signature>,
    size: usize,
    rels: Vec<TupleSet>,
}

impl Structure {
    /// The structure on `size` elements with all relations empty.
    pub fn new(sig: impl Into<Arc<Signature>>, size: usize) -> Self {
        let sig = sig.into();
        let rels = sig
            .symbols()
            .iter()
            .map(|s| TupleSet::with_capacity(size.pow(s.arity as u32)))
            .collect();
        Structure { sig, size, rels }
    }

    pub fn from_tuples<'a, T>(
        sig: impl Into<Arc<Signature>>,
        size: usize,
        tuples: impl IntoIterator<Item = (&'a str, T)>,
    ) -> Result<Self>
    where
        T: AsRef<[usize]>,
    {
        let mut s = Structure::new(sig, size);
        for (name, t) in tuples {
            s.insert(name, t.as_ref())?;
        }
        Ok(s)
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn signature_arc(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    fn check_tuple(&self, sym: usize, tuple: &[usize]) -> Result<()> {
        let symbol = &self.sig.symbols()[sym];
        if tuple.len() != symbol.arity {
            return Err(Error::TupleArity {
                symbol: symbol.name.clone(),
                tuple: tuple.to_vec(),
                found: tuple.len(),
                arity: symbol.arity,
            });
        }
        if let Some(&e) = tuple.iter().find(|&&e| e >= self.size) {
            return Err(Error::ElementOutOfRange {
                element: e,
                size: self.size,
            });
        }
        Ok(())
    }

    /// Adds a tuple to the relation of the named symbol.
    pub fn insert(&mut self, name: &str, tuple: &[usize]) -> Result<bool> {
        let sym = self
            .sig
            .index_of(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        self.insert_at(sym, tuple)
    }

    pub fn insert_at(&mut self, sym: usize, tuple: &[usize]) -> Result<bool> {
        self.check_tuple(sym, tuple)?;
        let idx = tuple_index(tuple, self.size);
        Ok(self.rels[sym].insert(idx))
    }

    pub(crate) fn insert_index(&mut self, sym: usize, idx: usize) {
        self.rels[sym].insert(idx);
    }

    #[inline]
    pub(crate) fn contains_index(&self, sym: usize, idx: usize) -> bool {
        self.rels[sym].contains(idx)
    }

    pub(crate) fn tuple_indices(&self, sym: usize) -> impl Iterator<Item = usize> + '_ {
        self.rels[sym].iter()
    }

    /// Membership test; tuples of the wrong length or with out-of-range
    /// entries are simply absent.
    pub fn contains(&self, sym: usize, tuple: &[usize]) -> bool {
        tuple.len() == self.sig.symbols()[sym].arity
            && tuple.iter().all(|&e| e < self.size)
            && self.rels[sym].contains(tuple_index(tuple, self.size))
    }

    pub fn contains_named(&self, name: &str, tuple: &[usize]) -> bool {
        self.sig
            .index_of(name)
            .is_some_and(|sym| self.contains(sym, tuple))
    }

    /// The tuples of symbol `sym` in lexicographic order.
    pub fn tuples(&self, sym: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
        let arity = self.sig.symbols()[sym].arity;
        let size = self.size;
        self.rels[sym].iter().map(move |idx| {
            let mut t = vec![0; arity];
            decode_tuple(idx, size, &mut t);
            t
        })
    }

    pub fn tuple_count(&self, sym: usize) -> usize {
        self.rels[sym].len()
    }

    pub fn total_tuples(&self) -> usize {
        self.rels.iter().map(TupleSet::len).sum()
    }

    /// All `(symbol index, tuple)` pairs, symbols in signature order.
    pub fn all_tuples(&self) -> Vec<(usize, Vec<usize>)> {
        (0..self.sig.len())
            .flat_map(|sym| self.tuples(sym).map(move |t| (sym, t)))
            .collect()
    }

    /// Same relations, element `i` renamed to `perm[i]`. `perm` must be a
    /// permutation of the domain.
    pub fn relabel(&self, perm: &[usize]) -> Structure {
        assert_eq!(perm.len(), self.size, "relabelling must cover the domain");
        let mut out = Structure::new(self.sig.clone(), self.size);
        for sym in 0..self.sig.len() {
            for t in self.tuples(sym) {
                let img: Vec<usize> = t.iter().map(|&e| perm[e]).collect();
                out.insert_index(sym, tuple_index(&img, self.size));
            }
        }
        out
    }

    /// The same structure re-expressed over a larger signature containing
    /// this one; the new symbols are empty.
    pub fn expand_to(&self, sig: impl Into<Arc<Signature>>) -> Result<Structure> {
        let sig = sig.into();
        let mut out = Structure::new(sig.clone(), self.size);
        for (sym, s) in self.sig.symbols().iter().enumerate() {
            let target = sig
                .index_of(&s.name)
                .filter(|&i| sig.symbols()[i].arity == s.arity)
                .ok_or_else(|| {
                    Error::SignatureMismatch(format!("{}/{} missing from {}", s.name, s.arity, sig))
                })?;
            out.rels[target] = self.rels[sym].clone();
        }
        Ok(out)
    }

    /// The reduct to a sub-signature.
    pub fn reduct(&self, sig: impl Into<Arc<Signature>>) -> Result<Structure> {
        let sig = sig.into();
        let mut out = Structure::new(sig.clone(), self.size);
        for (target, s) in sig.symbols().iter().enumerate() {
            let sym = self
                .sig
                .index_of(&s.name)
                .filter(|&i| self.sig.symbols()[i].arity == s.arity)
                .ok_or_else(|| {
                    Error::SignatureMismatch(format!("{}/{} missing from {}", s.name, s.arity, self.sig))
                })?;
            out.rels[target] = self.rels[sym].clone();
        }
        Ok(out)
    }

    /// Disjoint union: `self` on `{0,…,|a|-1}`, `other` shifted by `|a|`.
    pub fn disjoint_union(&self, other: &Structure) -> Result<Structure> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch(format!(
                "{} vs {}",
                self.sig, other.sig
            )));
        }
        let size = self.size + other.size;
        let mut out = Structure::new(self.sig.clone(), size);
        for sym in 0..self.sig.len() {
            for t in self.tuples(sym) {
                out.insert_index(sym, tuple_index(&t, size));
            }
            for t in other.tuples(sym) {
                let shifted: Vec<usize> = t.iter().map(|&e| e + self.size).collect();
                out.insert_index(sym, tuple_index(&shifted, size));
            }
        }
        Ok(out)
    }

    /// The substructure induced on `subset`; position `i` of `subset`
    /// becomes element `i` of the result.
    pub fn induced_substructure(&self, subset: &[usize]) -> Result<Structure> {
        let mut position = vec![usize::MAX; self.size];
        for (i, &e) in subset.iter().enumerate() {
            if e >= self.size {
                return Err(Error::ElementOutOfRange {
                    element: e,
                    size: self.size,
                });
            }
            if position[e] != usize::MAX {
                return Err(Error::DuplicateElement(e));
            }
            position[e] = i;
        }
        let size = subset.len();
        let mut out = Structure::new(self.sig.clone(), size);
        for sym in 0..self.sig.len() {
            'tuples: for t in self.tuples(sym) {
                let mut img = Vec::with_capacity(t.len());
                for &e in &t {
                    if position[e] == usize::MAX {
                        continue 'tuples;
                    }
                    img.push(position[e]);
                }
                out.insert_index(sym, tuple_index(&img, size));
            }
        }
        Ok(out)
    }

    /// Partition of the domain into the classes of the symmetric closure of
    /// "occur together in a tuple". Classes are sorted and listed by their
    /// least element; the empty structure has no classes.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.size).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for sym in 0..self.sig.len() {
            for t in self.tuples(sym) {
                for w in t.windows(2) {
                    let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; self.size];
        for e in 0..self.size {
            let root = find(&mut parent, e);
            if slot[root] == usize::MAX {
                slot[root] = classes.len();
                classes.push(Vec::new());
            }
            classes[slot[root]].push(e);
        }
        classes
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Structure(size={}", self.size)?;
        for (sym, s) in self.sig.symbols().iter().enumerate() {
            write!(f, ", {}={:?}", s.name, self.tuples(sym).collect::<Vec<_>>())?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn digraph(size: usize, edges: &[(usize, usize)]) -> Structure {
        let sig = Signature::new([("E", 2)]).unwrap();
        Structure::from_tuples(sig, size, edges.iter().map(|&(a, b)| ("E", [a, b]))).unwrap()
    }

    #[test]
    fn signature_is_sorted_and_unique() {
        let sig = Signature::new([("b", 1), ("a", 2)]).unwrap();
        assert_eq!(sig.symbols()[0].name, "a");
        assert!(Signature::new([("a", 1), ("a", 2)]).is_err());
        assert!(Signature::new([("a", 0)]).is_err());
        assert!(Signature::new([("=", 2)]).is_err());
    }

    #[test]
    fn union_of_single_vertices_is_edgeless() {
        let a = digraph(1, &[]);
        let u = a.disjoint_union(&a).unwrap();
        assert_eq!(u.size(), 2);
        assert_eq!(u.total_tuples(), 0);
    }

    #[test]
    fn union_shifts_second_block() {
        let a = digraph(2, &[(0, 1)]);
        let u = a.disjoint_union(&a).unwrap();
        assert_eq!(u.size(), 4);
        assert_eq!(u.tuples(0).collect::<Vec<_>>(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn union_requires_equal_signatures() {
        let a = digraph(1, &[]);
        let b = Structure::new(Signature::new([("U", 1)]).unwrap(), 1);
        assert!(matches!(a.disjoint_union(&b), Err(Error::SignatureMismatch(_))));
    }

    #[test]
    fn induced_substructures() {
        let k3 = digraph(3, &[(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)]);
        assert_eq!(k3.induced_substructure(&[0, 1]).unwrap(), digraph(2, &[(0, 1), (1, 0)]));
        let path = digraph(3, &[(0, 1), (1, 2)]);
        assert_eq!(path.induced_substructure(&[0, 2]).unwrap(), digraph(2, &[]));
        assert_eq!(path.induced_substructure(&[2, 1]).unwrap(), digraph(2, &[(1, 0)]));
        assert!(matches!(path.induced_substructure(&[0, 3]), Err(Error::ElementOutOfRange { .. })));
        assert!(matches!(path.induced_substructure(&[1, 1]), Err(Error::DuplicateElement(1))));
    }

    #[test]
    fn components() {
        assert_eq!(digraph(3, &[(0, 1), (1, 2)]).connected_components(), vec![vec![0, 1, 2]]);
        assert_eq!(
            digraph(4, &[(0, 1), (2, 3)]).connected_components(),
            vec![vec![0, 1], vec![2, 3]]
        );
        let betw = Signature::new([("Betw", 3)]).unwrap();
        let s = Structure::from_tuples(betw, 3, [("Betw", [0, 1, 2])]).unwrap();
        assert_eq!(s.connected_components().len(), 1);
        assert!(digraph(0, &[]).connected_components().is_empty());
        assert!(digraph(0, &[]).is_connected());
    }

    #[test]
    fn out_of_range_tuples_are_rejected() {
        let mut s = digraph(2, &[]);
        assert!(s.insert("E", &[0, 2]).is_err());
        assert!(s.insert("E", &[0]).is_err());
        assert!(s.insert("F", &[0, 1]).is_err());
    }
}
