//! Backtracking search for homomorphisms and embeddings.

use serde::Serialize;

use super::{decode_tuple, tuple_index, Structure};
use crate::error::{Error, Result};

/// A total map from the domain of a source structure to the domain of a
/// target structure.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct VertexMap(Vec<usize>);

impl VertexMap {
    pub fn new(image: Vec<usize>) -> Self {
        VertexMap(image)
    }

    pub fn image(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, e: usize) -> usize {
        self.0[e]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = self.0.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    /// Checks that the map sends every tuple of `a` into `b`.
    pub fn is_homomorphism(&self, a: &Structure, b: &Structure) -> bool {
        if a.signature() != b.signature()
            || self.0.len() != a.size()
            || self.0.iter().any(|&e| e >= b.size())
        {
            return false;
        }
        (0..a.signature().len()).all(|sym| {
            a.tuples(sym).all(|t| {
                let img: Vec<usize> = t.iter().map(|&e| self.0[e]).collect();
                b.contains(sym, &img)
            })
        })
    }

    /// Checks injectivity and that tuples are both preserved and reflected.
    pub fn is_embedding(&self, a: &Structure, b: &Structure) -> bool {
        if !self.is_homomorphism(a, b) || !self.is_injective() {
            return false;
        }
        (0..a.signature().len()).all(|sym| {
            let arity = a.signature().symbols()[sym].arity;
            let total = a.size().pow(arity as u32);
            let mut t = vec![0; arity];
            (0..total).all(|idx| {
                decode_tuple(idx, a.size(), &mut t);
                let img: Vec<usize> = t.iter().map(|&e| self.0[e]).collect();
                a.contains_index(sym, idx) == b.contains(sym, &img)
            })
        })
    }
}

struct Search<'a> {
    a: &'a Structure,
    b: &'a Structure,
    injective: bool,
    reflect: bool,
    order: Vec<usize>,
    // for each step, the a-tuples whose entries are all assigned once the
    // vertex at that step is placed
    checks: Vec<Vec<(usize, Vec<usize>)>>,
    map: Vec<usize>,
    used: Vec<bool>,
}

/// Visit order: breadth-first along co-occurrence so that constraints fire
/// early, starting each component from its least element.
fn visit_order(a: &Structure) -> Vec<usize> {
    let n = a.size();
    let mut adj = vec![Vec::new(); n];
    for sym in 0..a.signature().len() {
        for t in a.tuples(sym) {
            for &x in &t {
                for &y in &t {
                    if x != y {
                        adj[x].push(y);
                    }
                }
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next = adj[v].clone();
            next.sort_unstable();
            next.dedup();
            for w in next {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

impl<'a> Search<'a> {
    fn new(a: &'a Structure, b: &'a Structure, embedding: bool) -> Self {
        let order = visit_order(a);
        let mut step_of = vec![0; a.size()];
        for (i, &v) in order.iter().enumerate() {
            step_of[v] = i;
        }
        let mut checks = vec![Vec::new(); a.size()];
        for sym in 0..a.signature().len() {
            for t in a.tuples(sym) {
                let last = t.iter().map(|&e| step_of[e]).max().expect("arity >= 1");
                checks[last].push((sym, t));
            }
        }
        Search {
            a,
            b,
            injective: embedding,
            reflect: embedding,
            order,
            checks,
            map: vec![usize::MAX; a.size()],
            used: vec![false; b.size()],
        }
    }

    fn consistent(&self, step: usize) -> bool {
        let size_b = self.b.size();
        let mut img = Vec::new();
        for (sym, t) in &self.checks[step] {
            img.clear();
            img.extend(t.iter().map(|&e| self.map[e]));
            if !self.b.contains_index(*sym, tuple_index(&img, size_b)) {
                return false;
            }
        }
        if self.reflect {
            // every tuple over the assigned prefix that uses the new vertex
            // and is absent in `a` must be absent in `b`
            let assigned = &self.order[..=step];
            let v = self.order[step];
            for sym in 0..self.a.signature().len() {
                let arity = self.a.signature().symbols()[sym].arity;
                let k = assigned.len();
                let total = k.pow(arity as u32);
                let mut pos = vec![0; arity];
                let mut t = vec![0; arity];
                for idx in 0..total {
                    decode_tuple(idx, k, &mut pos);
                    if !pos.contains(&step) {
                        continue;
                    }
                    for (slot, &p) in t.iter_mut().zip(&pos) {
                        *slot = assigned[p];
                    }
                    debug_assert!(t.contains(&v));
                    if self.a.contains_index(sym, tuple_index(&t, self.a.size())) {
                        continue;
                    }
                    img.clear();
                    img.extend(t.iter().map(|&e| self.map[e]));
                    if self.b.contains_index(sym, tuple_index(&img, size_b)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn run(&mut self, step: usize) -> bool {
        if step == self.order.len() {
            return true;
        }
        let v = self.order[step];
        for target in 0..self.b.size() {
            if self.injective && self.used[target] {
                continue;
            }
            self.map[v] = target;
            if self.consistent(step) {
                self.used[target] = true;
                if self.run(step + 1) {
                    return true;
                }
                self.used[target] = false;
            }
        }
        self.map[v] = usize::MAX;
        false
    }

    // calls `f` on every complete map; stops when `f` returns false
    fn run_all(&mut self, step: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if step == self.order.len() {
            return f(&self.map);
        }
        let v = self.order[step];
        for target in 0..self.b.size() {
            if self.injective && self.used[target] {
                continue;
            }
            self.map[v] = target;
            if self.consistent(step) {
                self.used[target] = true;
                let go_on = self.run_all(step + 1, f);
                self.used[target] = false;
                if !go_on {
                    self.map[v] = usize::MAX;
                    return false;
                }
            }
        }
        self.map[v] = usize::MAX;
        true
    }
}

fn same_signature(a: &Structure, b: &Structure) -> Result<()> {
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch(format!(
            "{} vs {}",
            a.signature(),
            b.signature()
        )));
    }
    Ok(())
}

/// Some homomorphism from `a` to `b`, or `None` if there is none.
pub fn find_homomorphism(a: &Structure, b: &Structure) -> Result<Option<VertexMap>> {
    same_signature(a, b)?;
    let mut search = Search::new(a, b, false);
    Ok(search.run(0).then_some(VertexMap(search.map)))
}

/// Some embedding (injective, preserving and reflecting every relation) of
/// `a` into `b`, or `None`.
pub fn find_embedding(a: &Structure, b: &Structure) -> Result<Option<VertexMap>> {
    same_signature(a, b)?;
    if a.size() > b.size() {
        return Ok(None);
    }
    let mut search = Search::new(a, b, true);
    Ok(search.run(0).then_some(VertexMap(search.map)))
}

/// Calls `f` on every embedding of `a` into `b` until it returns false.
pub fn for_each_embedding(
    a: &Structure,
    b: &Structure,
    mut f: impl FnMut(&[usize]) -> bool,
) -> Result<()> {
    same_signature(a, b)?;
    if a.size() > b.size() {
        return Ok(());
    }
    let mut search = Search::new(a, b, true);
    search.run_all(0, &mut f);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::Signature;

    fn graph(size: usize, edges: &[(usize, usize)]) -> Structure {
        let sig = Signature::new([("E", 2)]).unwrap();
        let mut s = Structure::new(sig, size);
        for &(a, b) in edges {
            s.insert("E", &[a, b]).unwrap();
            s.insert("E", &[b, a]).unwrap();
        }
        s
    }

    fn cycle(n: usize) -> Structure {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        graph(n, &edges)
    }

    fn clique(n: usize) -> Structure {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        graph(n, &edges)
    }

    // all maps A -> B, as an independent oracle
    fn brute_force(a: &Structure, b: &Structure, injective: bool, reflect: bool) -> bool {
        let n = a.size();
        let total = b.size().pow(n as u32);
        let mut img = vec![0; n];
        (0..total).any(|idx| {
            decode_tuple(idx, b.size(), &mut img);
            let m = VertexMap::new(img.clone());
            (!injective || m.is_injective())
                && if reflect { m.is_embedding(a, b) } else { m.is_homomorphism(a, b) }
        })
    }

    #[test]
    fn five_cycle_is_three_colourable() {
        let (c5, k3) = (cycle(5), clique(3));
        assert!(brute_force(&c5, &k3, false, false));
        let h = find_homomorphism(&c5, &k3).unwrap().unwrap();
        assert!(h.is_homomorphism(&c5, &k3));
    }

    #[test]
    fn k4_is_not_three_colourable() {
        assert!(!brute_force(&clique(4), &clique(3), false, false));
        assert_eq!(find_homomorphism(&clique(4), &clique(3)).unwrap(), None);
    }

    #[test]
    fn identity_is_a_homomorphism() {
        let a = cycle(4);
        let id = VertexMap::new((0..4).collect());
        assert!(id.is_homomorphism(&a, &a));
        assert!(find_homomorphism(&a, &a).unwrap().is_some());
    }

    #[test]
    fn embeddings_reflect_relations() {
        let k3 = clique(3);
        assert!(find_embedding(&graph(2, &[(0, 1)]), &k3).unwrap().is_some());

        let edgeless = graph(2, &[]);
        assert!(!brute_force(&edgeless, &k3, true, true));
        assert_eq!(find_embedding(&edgeless, &k3).unwrap(), None);

        let sig = Signature::new([("E", 2)]).unwrap();
        let path = Structure::from_tuples(sig.clone(), 3, [("E", [0, 1]), ("E", [1, 2])]).unwrap();
        let cyc =
            Structure::from_tuples(sig, 3, [("E", [0, 1]), ("E", [1, 2]), ("E", [2, 0])]).unwrap();
        assert!(!brute_force(&path, &cyc, true, true));
        assert_eq!(find_embedding(&path, &cyc).unwrap(), None);
        assert!(find_homomorphism(&path, &cyc).unwrap().is_some());
    }

    #[test]
    fn counts_all_embeddings() {
        // an edge embeds into K3 in 6 ways; the empty structure in 1
        let mut n = 0;
        for_each_embedding(&graph(2, &[(0, 1)]), &clique(3), |m| {
            assert!(VertexMap::new(m.to_vec()).is_embedding(&graph(2, &[(0, 1)]), &clique(3)));
            n += 1;
            true
        })
        .unwrap();
        assert_eq!(n, 6);
        let mut n = 0;
        for_each_embedding(&graph(0, &[]), &clique(3), |_| {
            n += 1;
            true
        })
        .unwrap();
        assert_eq!(n, 1);
    }

    #[test]
    fn empty_source_maps_anywhere() {
        let e = graph(0, &[]);
        assert_eq!(find_homomorphism(&e, &e).unwrap(), Some(VertexMap::new(vec![])));
        assert_eq!(find_homomorphism(&graph(1, &[]), &e).unwrap(), None);
    }
}
