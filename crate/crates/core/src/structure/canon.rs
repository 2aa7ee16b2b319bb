//! Canonical codes for finite structures.
//!
//! Colour refinement runs on the incidence structure (a vertex's colour is
//! refined by the symbols, positions and colours of the tuples it occurs
//! in), then individualization-refinement explores the remaining colour
//! classes and keeps the lexicographically least encoding of the relabelled
//! structure. Automorphisms found at the leaves prune sibling branches.

use std::fmt;

use super::{decode_tuple, tuple_index, Structure};

/// Isomorphism-invariant byte encoding: equal codes iff isomorphic
/// structures (over the same signature).
///
/// Byte order sorts by domain size first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCode({})", self.to_hex())
    }
}

struct Incidence {
    n: usize,
    // (symbol, entries) for every tuple
    tuples: Vec<(usize, Vec<usize>)>,
}

impl Incidence {
    fn new(a: &Structure) -> Self {
        let mut tuples = Vec::with_capacity(a.total_tuples());
        for sym in 0..a.signature().len() {
            let arity = a.signature().symbols()[sym].arity;
            for idx in a.tuple_indices(sym) {
                let mut t = vec![0; arity];
                decode_tuple(idx, a.size(), &mut t);
                tuples.push((sym, t));
            }
        }
        Incidence { n: a.size(), tuples }
    }
}

#[inline]
fn mix(mut x: u64) -> u64 {
    // splitmix64 finalizer
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Refines `colours` (dense ranks `0..k`) to the coarsest equitable
/// refinement reachable by hashing; returns the number of classes.
fn refine(inc: &Incidence, colours: &mut [u32]) -> usize {
    let n = inc.n;
    let mut classes = count_classes(colours);
    let mut h = vec![0u64; n];
    let mut keyed: Vec<(u32, u64, usize)> = Vec::with_capacity(n);
    loop {
        for (v, hv) in h.iter_mut().enumerate() {
            *hv = mix(colours[v] as u64);
        }
        for (sym, t) in &inc.tuples {
            let mut th = mix(*sym as u64 + 1);
            for &e in t {
                th = mix(th ^ colours[e] as u64);
            }
            for (pos, &e) in t.iter().enumerate() {
                h[e] = h[e].wrapping_add(mix(th ^ (pos as u64 + 1).wrapping_mul(0x1000_0000_01b3)));
            }
        }
        keyed.clear();
        keyed.extend((0..n).map(|v| (colours[v], h[v], v)));
        keyed.sort_unstable();
        let mut rank = 0u32;
        for i in 0..n {
            if i > 0 && (keyed[i].0, keyed[i].1) != (keyed[i - 1].0, keyed[i - 1].1) {
                rank += 1;
            }
            colours[keyed[i].2] = rank;
        }
        let now = if n == 0 { 0 } else { rank as usize + 1 };
        if now == classes {
            return now;
        }
        classes = now;
    }
}

fn count_classes(colours: &[u32]) -> usize {
    let mut c: Vec<u32> = colours.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn encode(inc: &Incidence, a_sig_len: usize, perm: &[u32], out: &mut Vec<u8>) {
    let n = inc.n;
    out.clear();
    out.extend_from_slice(&(n as u32).to_be_bytes());
    let mut per_sym: Vec<Vec<u64>> = vec![Vec::new(); a_sig_len];
    let mut img = Vec::new();
    for (sym, t) in &inc.tuples {
        img.clear();
        img.extend(t.iter().map(|&e| perm[e] as usize));
        per_sym[*sym].push(tuple_index(&img, n) as u64);
    }
    for idxs in &mut per_sym {
        idxs.sort_unstable();
        out.extend_from_slice(&(idxs.len() as u32).to_be_bytes());
        for &i in idxs.iter() {
            out.extend_from_slice(&(i as u32).to_be_bytes());
        }
    }
}

struct Canon<'a> {
    inc: &'a Incidence,
    sig_len: usize,
    best: Option<(Vec<u8>, Vec<u32>)>,
    automorphisms: Vec<Vec<usize>>,
    scratch: Vec<u8>,
}

impl Canon<'_> {
    fn search(&mut self, colours: Vec<u32>, prefix: &mut Vec<usize>) {
        let n = self.inc.n;
        let classes = count_classes(&colours);
        if classes == n {
            encode(self.inc, self.sig_len, &colours, &mut self.scratch);
            match &self.best {
                Some((code, perm)) if *code == self.scratch => {
                    // leaf relabelling equals the best one: perm^-1 . colours
                    let mut inv = vec![0usize; n];
                    for (v, &c) in perm.iter().enumerate() {
                        inv[c as usize] = v;
                    }
                    let g: Vec<usize> = colours.iter().map(|&c| inv[c as usize]).collect();
                    if g.iter().enumerate().any(|(v, &w)| v != w) {
                        self.automorphisms.push(g);
                    }
                }
                Some((code, _)) if *code <= self.scratch => {}
                _ => self.best = Some((self.scratch.clone(), colours.clone())),
            }
            return;
        }
        // first non-singleton cell
        let mut counts = vec![0usize; n];
        for &c in &colours {
            counts[c as usize] += 1;
        }
        let target = (0..n).find(|&c| counts[c] > 1).expect("non-discrete colouring") as u32;
        let cell: Vec<usize> = (0..n).filter(|&v| colours[v] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if self.same_orbit(prefix, &explored, v) {
                continue;
            }
            explored.push(v);
            let mut child: Vec<u32> = colours
                .iter()
                .map(|&c| 2 * c + 1)
                .collect();
            child[v] = 2 * target;
            refine(self.inc, &mut child);
            prefix.push(v);
            self.search(child, prefix);
            prefix.pop();
        }
    }

    /// Whether `v` lies in the orbit of an already explored vertex under
    /// the automorphisms found so far that fix `prefix` pointwise.
    fn same_orbit(&self, prefix: &[usize], explored: &[usize], v: usize) -> bool {
        if explored.is_empty() || self.automorphisms.is_empty() {
            return false;
        }
        let n = self.inc.n;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for g in &self.automorphisms {
            if prefix.iter().all(|&p| g[p] == p) {
                for (x, &y) in g.iter().enumerate() {
                    let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                    if rx != ry {
                        parent[rx] = ry;
                    }
                }
            }
        }
        let rv = find(&mut parent, v);
        explored.iter().any(|&w| find(&mut parent, w) == rv)
    }
}

/// The canonical code of `a`.
pub fn canonical_code(a: &Structure) -> CanonicalCode {
    let inc = Incidence::new(a);
    let mut colours = vec![0u32; a.size()];
    refine(&inc, &mut colours);
    let mut canon = Canon {
        inc: &inc,
        sig_len: a.signature().len(),
        best: None,
        automorphisms: Vec::new(),
        scratch: Vec::new(),
    };
    canon.search(colours, &mut Vec::new());
    CanonicalCode(canon.best.expect("search reaches a leaf").0)
}

/// The relabelling `perm` (old element to new element) under which `a`
/// takes its canonical form, together with the code.
pub(crate) fn canonical_labelling(a: &Structure) -> (CanonicalCode, Vec<usize>) {
    let inc = Incidence::new(a);
    let mut colours = vec![0u32; a.size()];
    refine(&inc, &mut colours);
    let mut canon = Canon {
        inc: &inc,
        sig_len: a.signature().len(),
        best: None,
        automorphisms: Vec::new(),
        scratch: Vec::new(),
    };
    canon.search(colours, &mut Vec::new());
    let (code, perm) = canon.best.expect("search reaches a leaf");
    (CanonicalCode(code), perm.into_iter().map(|c| c as usize).collect())
}

/// All automorphisms of `a` (including the identity), each as the image
/// vector of the permutation, in lexicographic order.
pub fn automorphisms(a: &Structure) -> Vec<Vec<usize>> {
    let inc = Incidence::new(a);
    let mut colours = vec![0u32; a.size()];
    refine(&inc, &mut colours);
    let n = a.size();
    let mut out = Vec::new();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(
        a: &Structure,
        colours: &[u32],
        v: usize,
        map: &mut [usize],
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = a.size();
        if v == n {
            out.push(map.to_vec());
            return;
        }
        for w in 0..n {
            if used[w] || colours[w] != colours[v] {
                continue;
            }
            map[v] = w;
            if prefix_consistent(a, map, v) {
                used[w] = true;
                extend(a, colours, v + 1, map, used, out);
                used[w] = false;
            }
        }
        map[v] = usize::MAX;
    }
    extend(a, &colours, 0, &mut map, &mut used, &mut out);
    out
}

// tuples over {0..=v} that contain v are preserved and reflected by `map`
fn prefix_consistent(a: &Structure, map: &[usize], v: usize) -> bool {
    let n = a.size();
    let k = v + 1;
    for sym in 0..a.signature().len() {
        let arity = a.signature().symbols()[sym].arity;
        let mut t = vec![0; arity];
        let mut img = vec![0; arity];
        for idx in 0..k.pow(arity as u32) {
            decode_tuple(idx, k, &mut t);
            if !t.contains(&v) {
                continue;
            }
            for (slot, &e) in img.iter_mut().zip(&t) {
                *slot = map[e];
            }
            if a.contains_index(sym, tuple_index(&t, n)) != a.contains_index(sym, tuple_index(&img, n)) {
                return false;
            }
        }
    }
    true
}
