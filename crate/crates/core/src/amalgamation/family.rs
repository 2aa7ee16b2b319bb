//! Finite families of forbidden substructures.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::eval::first_violation;
use crate::logic::Clause;
use crate::structure::{canonical_code, find_embedding, Enumerator, Signature, Structure, VertexMap};

/// A set of pairwise non-isomorphic structures `F`, standing for the class
/// of finite structures into which no member embeds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForbiddenFamily {
    sig: Arc<Signature>,
    members: Vec<Structure>,
    m: usize,
    ell: Option<usize>,
}

/// Caps for computing a family from clauses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyLimits {
    pub max_size: usize,
    pub max_candidates: u64,
}

impl Default for FamilyLimits {
    fn default() -> Self {
        FamilyLimits {
            max_size: 6,
            max_candidates: crate::structure::DEFAULT_MAX_CANDIDATES,
        }
    }
}

// two-element structures are only counted when there are few of them
const MAX_TWO_ELEMENT_ATOMS: usize = 16;

impl ForbiddenFamily {
    /// Builds a family, dropping isomorphic duplicates and sorting members
    /// by canonical code.
    pub fn new(sig: impl Into<Arc<Signature>>, members: Vec<Structure>) -> Result<Self> {
        let sig = sig.into();
        let mut seen = HashSet::new();
        let mut keyed = Vec::new();
        for s in members {
            if s.signature() != sig.as_ref() {
                return Err(Error::SignatureMismatch(format!(
                    "family over {sig} but member over {}",
                    s.signature()
                )));
            }
            let code = canonical_code(&s);
            if seen.insert(code.clone()) {
                keyed.push((code, s));
            }
        }
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        let members: Vec<Structure> = keyed.into_iter().map(|(_, s)| s).collect();
        let m = members.iter().map(Structure::size).max().unwrap_or(0);
        let mut out = ForbiddenFamily {
            sig,
            members,
            m,
            ell: None,
        };
        if out.sig.is_binary() && two_element_atoms(&out.sig) <= MAX_TWO_ELEMENT_ATOMS {
            out.ell = Some(two_element_types(&out.sig.clone(), &out)?);
        }
        Ok(out)
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn signature_arc(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn members(&self) -> &[Structure] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Largest member size.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Isomorphism types of admitted two-element structures, when the
    /// signature is binary and small enough to count them.
    pub fn ell(&self) -> Option<usize> {
        self.ell
    }

    /// The first member (by index) embedding into `a`, with the embedding.
    pub fn embedded_member(&self, a: &Structure) -> Result<Option<(usize, VertexMap)>> {
        for (i, f) in self.members.iter().enumerate() {
            if let Some(e) = find_embedding(f, a)? {
                return Ok(Some((i, e)));
            }
        }
        Ok(None)
    }

    /// Whether `a` lies in the class, i.e. no member embeds into it.
    pub fn admits(&self, a: &Structure) -> Result<bool> {
        Ok(self.embedded_member(a)?.is_none())
    }
}

fn two_element_atoms(sig: &Signature) -> usize {
    sig.symbols().iter().map(|s| 2usize.pow(s.arity as u32)).sum()
}

fn check_clauses(clauses: &[Clause], sig: &Signature, k: usize, limits: &FamilyLimits) -> Result<()> {
    for c in clauses {
        for l in &c.literals {
            match sig.arity(&l.atom.symbol) {
                Some(a) if a == l.atom.args.len() => {}
                Some(_) => {
                    return Err(Error::InvalidArgument(format!(
                        "{} used with the wrong arity",
                        l.atom.symbol
                    )))
                }
                None => return Err(Error::UnknownSymbol(l.atom.symbol.clone())),
            }
        }
        let width = c.variables().len();
        if width > k {
            return Err(Error::InvalidArgument(format!(
                "size bound {k} is below the clause width {width}"
            )));
        }
    }
    if k > limits.max_size {
        return Err(Error::cap("family size bound", k as u128, limits.max_size as u128));
    }
    Ok(())
}

/// All structures of size at most `k` (one per isomorphism class) that
/// falsify some clause under some assignment.
pub fn forbidden_family_from_matrix(
    clauses: &[Clause],
    sig: &Signature,
    k: usize,
    limits: FamilyLimits,
) -> Result<ForbiddenFamily> {
    check_clauses(clauses, sig, k, &limits)?;
    let all = Enumerator::new(sig.clone(), k)
        .max_candidates(limits.max_candidates)
        .run()?;
    let violators = all
        .into_iter()
        .filter(|s| first_violation(s, clauses).is_some())
        .collect();
    ForbiddenFamily::new(sig.clone(), violators)
}

/// The minimal violators among structures of size at most `k`: those
/// falsifying a clause while every proper induced substructure satisfies
/// all clauses. Equals `minimize_family(forbidden_family_from_matrix(..))`
/// but only extends models during the enumeration.
pub fn minimal_forbidden_family(
    clauses: &[Clause],
    sig: &Signature,
    k: usize,
    limits: FamilyLimits,
) -> Result<ForbiddenFamily> {
    check_clauses(clauses, sig, k, &limits)?;
    let mut minimal = Vec::new();
    Enumerator::new(sig.clone(), k)
        .max_candidates(limits.max_candidates)
        .try_hereditary(|s| {
            if first_violation(s, clauses).is_none() {
                return Ok(true);
            }
            let all: Vec<usize> = (0..s.size()).collect();
            let mut is_minimal = true;
            for v in 0..s.size() {
                let mut rest = all.clone();
                rest.remove(v);
                if first_violation(&s.induced_substructure(&rest)?, clauses).is_some() {
                    is_minimal = false;
                    break;
                }
            }
            if is_minimal {
                minimal.push(s.clone());
            }
            Ok(false)
        })
        .run()?;
    ForbiddenFamily::new(sig.clone(), minimal)
}

/// Drops every member into which another retained member embeds.
pub fn minimize_family(f: &ForbiddenFamily) -> Result<ForbiddenFamily> {
    // members are sorted by size, and equal-size embeddings are isomorphisms
    let mut kept: Vec<Structure> = Vec::new();
    for s in f.members() {
        let mut covered = false;
        for k in &kept {
            if find_embedding(k, s)?.is_some() {
                covered = true;
                break;
            }
        }
        if !covered {
            kept.push(s.clone());
        }
    }
    ForbiddenFamily::new(f.signature_arc().clone(), kept)
}

/// Number of isomorphism types of two-element structures admitted by `f`.
pub fn two_element_types(sig: &Signature, f: &ForbiddenFamily) -> Result<usize> {
    if !sig.is_binary() {
        return Err(Error::NonBinary(sig.to_string()));
    }
    if sig != f.signature() {
        return Err(Error::SignatureMismatch(format!("{sig} vs {}", f.signature())));
    }
    let classes = Enumerator::new(sig.clone(), 2)
        .try_hereditary(|a| f.admits(a))
        .run()?;
    Ok(classes.iter().filter(|a| a.size() == 2).count())
}

/// The largest number of admitted labelled two-element structures sharing
/// the same pair of one-element substructures. This is the number of
/// completions of a one-point diagram that can avoid every member whose
/// copy would use both new points.
pub fn max_pair_completions(f: &ForbiddenFamily) -> Result<usize> {
    let sig = f.signature_arc().clone();
    if !sig.is_binary() {
        return Err(Error::NonBinary(sig.to_string()));
    }
    let mut tuples = Vec::new();
    for (sym, s) in sig.symbols().iter().enumerate() {
        match s.arity {
            1 => tuples.extend([(sym, vec![0]), (sym, vec![1])]),
            _ => tuples.extend([(sym, vec![0, 0]), (sym, vec![0, 1]), (sym, vec![1, 0]), (sym, vec![1, 1])]),
        }
    }
    if tuples.len() > 24 {
        return Err(Error::cap("two-element structures", 1u128 << tuples.len(), 1 << 24));
    }
    let mut counts: BTreeMap<_, usize> = BTreeMap::new();
    for mask in 0u64..1 << tuples.len() {
        let mut s = Structure::new(sig.clone(), 2);
        for (bit, (sym, t)) in tuples.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                s.insert_at(*sym, t)?;
            }
        }
        if f.admits(&s)? {
            let key = (
                canonical_code(&s.induced_substructure(&[0])?),
                canonical_code(&s.induced_substructure(&[1])?),
            );
            *counts.entry(key).or_default() += 1;
        }
    }
    Ok(counts.values().copied().max().unwrap_or(0))
}
