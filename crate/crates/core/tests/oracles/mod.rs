//! Brute-force reference implementations shared by the integration tests
//! and the acceptance target. Nothing here calls into the library beyond
//! building and reading `Structure` values.

#![allow(dead_code)]

use std::collections::BTreeSet;

use snp_core::{Signature, Structure};

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

/// Injective maps from `0..k` into `0..n`.
pub fn injections(k: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !cur.contains(&v) {
                cur.push(v);
                go(k, n, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(k, n, &mut Vec::new(), &mut out);
    out
}

/// Every tuple over `0..n` of length `arity`.
pub fn all_tuples(n: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// Does `a` embed into `b` (injective, preserving and reflecting every
/// relation)? Checked by trying every injection.
pub fn embeds(a: &Structure, b: &Structure) -> bool {
    if a.size() > b.size() {
        return false;
    }
    let sig = a.signature();
    let checks: Vec<(usize, Vec<usize>)> = sig
        .symbols()
        .iter()
        .enumerate()
        .flat_map(|(s, sym)| all_tuples(a.size(), sym.arity).into_iter().map(move |t| (s, t)))
        .collect();
    injections(a.size(), b.size()).into_iter().any(|f| {
        checks.iter().all(|(s, t)| {
            let image: Vec<usize> = t.iter().map(|&x| f[x]).collect();
            a.contains(*s, t) == b.contains(*s, &image)
        })
    })
}

/// Like `embeds`, but only tries injections whose image contains `p` and `q`.
pub fn embeds_through(a: &Structure, b: &Structure, p: usize, q: usize) -> bool {
    let sig = a.signature();
    injections(a.size(), b.size())
        .into_iter()
        .filter(|f| f.contains(&p) && f.contains(&q))
        .any(|f| {
            sig.symbols().iter().enumerate().all(|(s, sym)| {
                all_tuples(a.size(), sym.arity).iter().all(|t| {
                    let image: Vec<usize> = t.iter().map(|&x| f[x]).collect();
                    a.contains(s, t) == b.contains(s, &image)
                })
            })
        })
}

pub fn admits(family: &[Structure], s: &Structure) -> bool {
    !family.iter().any(|m| embeds(m, s))
}

/// Bit positions of a binary-signature structure on `n` elements.
fn slots(sig: &Signature, n: usize) -> Vec<(usize, Vec<usize>)> {
    sig.symbols()
        .iter()
        .enumerate()
        .flat_map(|(s, sym)| all_tuples(n, sym.arity).into_iter().map(move |t| (s, t)))
        .collect()
}

fn build(sig: &Signature, n: usize, slots: &[(usize, Vec<usize>)], bits: u64) -> Structure {
    let mut out = Structure::new(sig.clone(), n);
    for (i, (s, t)) in slots.iter().enumerate() {
        if bits >> i & 1 == 1 {
            out.insert_at(*s, t).unwrap();
        }
    }
    out
}

fn code(s: &Structure, slots: &[(usize, Vec<usize>)]) -> u64 {
    let mut bits = 0u64;
    for (i, (sym, t)) in slots.iter().enumerate() {
        if s.contains(*sym, t) {
            bits |= 1 << i;
        }
    }
    bits
}

/// Least code over all relabellings: a naive canonical form.
fn min_code(s: &Structure, slots: &[(usize, Vec<usize>)]) -> u64 {
    permutations(s.size())
        .into_iter()
        .map(|p| code(&s.relabel(&p), slots))
        .min()
        .unwrap()
}

/// Members of the class on `n` elements, one per isomorphism type.
pub fn class_members(sig: &Signature, family: &[Structure], n: usize) -> Vec<Structure> {
    let sl = slots(sig, n);
    assert!(sl.len() < 40, "too many bits for the oracle");
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for bits in 0..1u64 << sl.len() {
        let s = build(sig, n, &sl, bits);
        if !admits(family, &s) {
            continue;
        }
        if seen.insert(min_code(&s, &sl)) {
            out.push(s);
        }
    }
    out
}

/// Tuples of a structure on `0..=n` that mention element `n`.
fn new_point_slots(sig: &Signature, n: usize) -> Vec<(usize, Vec<usize>)> {
    slots(sig, n + 1).into_iter().filter(|(_, t)| t.contains(&n)).collect()
}

/// Searches all one-point amalgamation diagrams whose shared part has at
/// most `max_b0` elements and returns the first one (b0, b1 bits, b2 bits)
/// that has no amalgam in the class.
pub fn find_failing_diagram(
    sig: &Signature,
    family: &[Structure],
    max_b0: usize,
    strong: bool,
) -> Option<(Structure, Structure, Structure)> {
    for k in 0..=max_b0 {
        let ext = new_point_slots(sig, k);
        // tuples of the amalgam on 0..k+2 that mention both p = k and q = k+1
        let cross: Vec<(usize, Vec<usize>)> = slots(sig, k + 2)
            .into_iter()
            .filter(|(_, t)| t.contains(&k) && t.contains(&(k + 1)))
            .collect();
        for b0 in class_members(sig, family, k) {
            let mut sides = Vec::new();
            for bits in 0..1u64 << ext.len() {
                let mut b1 = Structure::new(sig.clone(), k + 1);
                for (s, t) in b0.all_tuples() {
                    b1.insert_at(s, &t).unwrap();
                }
                for (i, (s, t)) in ext.iter().enumerate() {
                    if bits >> i & 1 == 1 {
                        b1.insert_at(*s, t).unwrap();
                    }
                }
                if admits(family, &b1) {
                    sides.push((bits, b1));
                }
            }
            for (i, (bits1, b1)) in sides.iter().enumerate() {
                for (bits2, b2) in &sides[i..] {
                    if !strong && bits1 == bits2 {
                        continue;
                    }
                    let amalgamates = (0..1u64 << cross.len()).any(|cb| {
                        let mut c = Structure::new(sig.clone(), k + 2);
                        for (s, t) in b1.all_tuples() {
                            c.insert_at(s, &t).unwrap();
                        }
                        for (s, t) in b2.all_tuples() {
                            let t: Vec<usize> = t.iter().map(|&x| if x == k { k + 1 } else { x }).collect();
                            c.insert_at(s, &t).unwrap();
                        }
                        for (j, (s, t)) in cross.iter().enumerate() {
                            if cb >> j & 1 == 1 {
                                c.insert_at(*s, t).unwrap();
                            }
                        }
                        // b1 and b2 are in the class, so a copy of a member
                        // must use both new points
                        !family.iter().any(|m| embeds_through(m, &c, k, k + 1))
                    });
                    if !amalgamates {
                        let _ = bits2;
                        return Some((b0.clone(), b1.clone(), b2.clone()));
                    }
                }
            }
        }
    }
    None
}

/// Is there an injective map into a line under which every triple of
/// `Betw` lies strictly monotone? Tries every linear order of the domain.
pub fn betweenness_oracle(a: &Structure) -> bool {
    let betw = a.signature().index_of("Betw").unwrap();
    let triples: Vec<Vec<usize>> = a.tuples(betw).collect();
    permutations(a.size()).into_iter().any(|pos| {
        triples.iter().all(|t| {
            let (x, y, z) = (pos[t[0]], pos[t[1]], pos[t[2]]);
            (x < y && y < z) || (z < y && y < x)
        })
    })
}

/// Kahn's algorithm: does the digraph `E` have a topological order?
pub fn acyclic_oracle(a: &Structure) -> bool {
    let e = a.signature().index_of("E").unwrap();
    let n = a.size();
    let mut indeg = vec![0usize; n];
    let edges: Vec<Vec<usize>> = a.tuples(e).collect();
    for t in &edges {
        indeg[t[1]] += 1;
    }
    let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut done = 0;
    while let Some(v) = ready.pop() {
        done += 1;
        for t in edges.iter().filter(|t| t[0] == v) {
            indeg[t[1]] -= 1;
            if indeg[t[1]] == 0 {
                ready.push(t[1]);
            }
        }
    }
    done == n
}

/// Tries all `k^n` colourings of the vertices.
pub fn colourable_oracle(a: &Structure, k: usize) -> bool {
    let e = a.signature().index_of("E").unwrap();
    let edges: Vec<Vec<usize>> = a.tuples(e).collect();
    let n = a.size();
    (0..k.pow(n as u32)).any(|mut c| {
        let mut col = vec![0; n];
        for v in col.iter_mut() {
            *v = c % k;
            c /= k;
        }
        edges.iter().all(|t| col[t[0]] != col[t[1]])
    })
}

/// All labelled digraphs (loops allowed) on `n` vertices.
pub fn all_digraphs(n: usize) -> impl Iterator<Item = Structure> {
    let sig = Signature::new([("E", 2)]).unwrap();
    let sl = slots(&sig, n);
    (0..1u64 << sl.len()).map(move |bits| build(&sig, n, &sl, bits))
}
