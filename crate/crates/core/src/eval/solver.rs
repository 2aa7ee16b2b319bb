//! Grounding of a sentence over a fixed domain and a small DPLL search for
//! the existential relations.

use crate::error::{Error, Result};
use crate::logic::{Clause, SnpSentence};
use crate::structure::{tuple_index, Structure};

use super::EvalLimits;

#[derive(Debug, Clone)]
struct CLit {
    input: bool,
    positive: bool,
    sym: usize,
    // positions into the clause's variable list
    args: Vec<usize>,
}

#[derive(Debug, Clone)]
pub(crate) struct CClause {
    nvars: usize,
    lits: Vec<CLit>,
}

/// A sentence with symbols and variables resolved to indices.
#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    pub clauses: Vec<CClause>,
    exist_arities: Vec<usize>,
}

pub(crate) fn compile_clause(
    c: &Clause,
    input_index: impl Fn(&str) -> Option<usize>,
    exist_index: impl Fn(&str) -> Option<usize>,
) -> CClause {
    let vars = c.variables();
    let lits = c
        .literals
        .iter()
        .map(|l| {
            let (input, sym) = match input_index(&l.atom.symbol) {
                Some(i) => (true, i),
                None => (false, exist_index(&l.atom.symbol).expect("declared symbol")),
            };
            CLit {
                input,
                positive: l.positive,
                sym,
                args: l
                    .atom
                    .args
                    .iter()
                    .map(|v| vars.iter().position(|w| w == v).expect("clause variable"))
                    .collect(),
            }
        })
        .collect();
    CClause {
        nvars: vars.len(),
        lits,
    }
}

impl Compiled {
    pub fn new(s: &SnpSentence) -> Self {
        let clauses = s
            .matrix()
            .iter()
            .map(|c| {
                compile_clause(
                    c,
                    |n| s.input_sig().index_of(n),
                    |n| s.exist_sig().index_of(n),
                )
            })
            .collect();
        Compiled {
            clauses,
            exist_arities: s.exist_sig().symbols().iter().map(|x| x.arity).collect(),
        }
    }
}

/// Odometer over all maps from `k` variables to a domain of size `n`, in
/// lexicographic order.
pub(crate) fn for_each_assignment(k: usize, n: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if n == 0 && k > 0 {
        return;
    }
    let mut a = vec![0; k];
    loop {
        if !f(&a) {
            return;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            a[i] += 1;
            if a[i] < n {
                break;
            }
            a[i] = 0;
        }
    }
}

/// The first clause and assignment (clause index, values of the clause's
/// variables in order of first occurrence) falsified in `s`, where every
/// symbol of the clauses is interpreted by `s`.
pub fn first_violation(s: &Structure, clauses: &[Clause]) -> Option<(usize, Vec<usize>)> {
    let sig = s.signature();
    for (ci, c) in clauses.iter().enumerate() {
        let cc = compile_clause(c, |n| sig.index_of(n), |_| None);
        if let Some(a) = violation_of(s, &cc) {
            return Some((ci, a));
        }
    }
    None
}

// Nothing is violated on the empty domain: there are no assignments.
pub(crate) fn violation_of(s: &Structure, c: &CClause) -> Option<Vec<usize>> {
    let n = s.size();
    if n == 0 {
        return None;
    }
    let mut found = None;
    let mut img = Vec::new();
    for_each_assignment(c.nvars, n, |a| {
        let sat = c.lits.iter().any(|l| {
            img.clear();
            img.extend(l.args.iter().map(|&p| a[p]));
            s.contains_index(l.sym, tuple_index(&img, n)) == l.positive
        });
        if !sat {
            found = Some(a.to_vec());
        }
        sat
    });
    found
}

/// Ground clauses over propositional atoms `offset[sym] + tuple index`.
/// Literal encoding: `2 * atom + (negative as u32)`.
pub(crate) struct Grounding {
    pub clauses: Vec<Vec<u32>>,
    pub offsets: Vec<usize>,
    pub atoms: usize,
    /// some ground clause has no literal left
    pub trivially_false: bool,
}

pub(crate) fn ground(c: &Compiled, base: &Structure, limits: &EvalLimits) -> Result<Grounding> {
    let n = base.size();
    let mut offsets = Vec::with_capacity(c.exist_arities.len());
    let mut atoms: u128 = 0;
    for &ar in &c.exist_arities {
        offsets.push(atoms as usize);
        atoms += (n as u128).pow(ar as u32);
    }
    if atoms > limits.max_atoms as u128 {
        return Err(Error::cap(
            format!("existential atoms on a domain of size {n}"),
            atoms,
            limits.max_atoms as u128,
        ));
    }
    let total: u128 = c
        .clauses
        .iter()
        .map(|cl| (n as u128).pow(cl.nvars as u32))
        .sum();
    if total > limits.max_ground_clauses as u128 {
        return Err(Error::cap(
            format!("ground clauses on a domain of size {n}"),
            total,
            limits.max_ground_clauses as u128,
        ));
    }
    let mut out = Grounding {
        clauses: Vec::new(),
        offsets,
        atoms: atoms as usize,
        trivially_false: false,
    };
    if n == 0 {
        return Ok(out);
    }
    let mut img = Vec::new();
    for cl in &c.clauses {
        for_each_assignment(cl.nvars, n, |a| {
            let mut lits: Vec<u32> = Vec::new();
            for l in &cl.lits {
                img.clear();
                img.extend(l.args.iter().map(|&p| a[p]));
                let idx = tuple_index(&img, n);
                if l.input {
                    if base.contains_index(l.sym, idx) == l.positive {
                        return true;
                    }
                } else {
                    let atom = (out.offsets[l.sym] + idx) as u32;
                    let lit = 2 * atom + (!l.positive) as u32;
                    if lits.contains(&(lit ^ 1)) {
                        return true;
                    }
                    if !lits.contains(&lit) {
                        lits.push(lit);
                    }
                }
            }
            if lits.is_empty() {
                out.trivially_false = true;
                return false;
            }
            out.clauses.push(lits);
            true
        });
        if out.trivially_false {
            break;
        }
    }
    Ok(out)
}

/// DPLL with unit propagation over two watched literals. Branching picks
/// the first ground clause not yet satisfied and tries its free literals in
/// order, making the i-th true and the earlier ones false.
pub(crate) struct Solver {
    // literal order as grounded; `clauses` is reordered by the watches
    orig: Vec<Vec<u32>>,
    clauses: Vec<Vec<u32>>,
    watches: Vec<Vec<usize>>,
    value: Vec<i8>,
    trail: Vec<u32>,
    qhead: usize,
    nodes: u64,
    limit: u64,
}

impl Solver {
    pub fn new(g: &Grounding, limit: u64) -> Self {
        Solver {
            orig: g.clauses.clone(),
            clauses: g.clauses.clone(),
            watches: vec![Vec::new(); 2 * g.atoms],
            value: vec![-1; g.atoms],
            trail: Vec::new(),
            qhead: 0,
            nodes: 0,
            limit,
        }
    }

    fn lit_value(&self, l: u32) -> i8 {
        let v = self.value[(l >> 1) as usize];
        if v < 0 {
            -1
        } else {
            v ^ (l & 1) as i8
        }
    }

    fn assign(&mut self, l: u32) {
        self.value[(l >> 1) as usize] = 1 ^ (l & 1) as i8;
        self.trail.push(l >> 1);
    }

    fn undo(&mut self, mark: usize) {
        for &v in &self.trail[mark..] {
            self.value[v as usize] = -1;
        }
        self.trail.truncate(mark);
        self.qhead = mark;
    }

    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let var = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = 2 * var + self.value[var as usize] as u32;
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let mut i = 0;
            while i < ws.len() {
                let ci = ws[i];
                if self.clauses[ci][0] == false_lit {
                    self.clauses[ci].swap(0, 1);
                }
                let first = self.clauses[ci][0];
                if self.lit_value(first) == 1 {
                    i += 1;
                    continue;
                }
                let len = self.clauses[ci].len();
                let replacement = (2..len).find(|&k| self.lit_value(self.clauses[ci][k]) != 0);
                if let Some(k) = replacement {
                    self.clauses[ci].swap(1, k);
                    let w = self.clauses[ci][1];
                    self.watches[w as usize].push(ci);
                    ws.swap_remove(i);
                    continue;
                }
                if self.lit_value(first) == 0 {
                    self.watches[false_lit as usize] = ws;
                    return false;
                }
                self.assign(first);
                i += 1;
            }
            self.watches[false_lit as usize] = ws;
        }
        true
    }

    /// Runs the search. On success the assignment (unassigned atoms false)
    /// satisfies every ground clause.
    pub fn solve(&mut self) -> Result<Option<Vec<bool>>> {
        let mut units = Vec::new();
        for ci in 0..self.clauses.len() {
            match self.clauses[ci].len() {
                0 => return Ok(None),
                1 => units.push(self.clauses[ci][0]),
                _ => {
                    let (a, b) = (self.clauses[ci][0], self.clauses[ci][1]);
                    self.watches[a as usize].push(ci);
                    self.watches[b as usize].push(ci);
                }
            }
        }
        for l in units {
            match self.lit_value(l) {
                0 => return Ok(None),
                1 => {}
                _ => self.assign(l),
            }
        }
        if !self.propagate() {
            return Ok(None);
        }
        if self.search()? {
            Ok(Some(self.value.iter().map(|&v| v == 1).collect()))
        } else {
            Ok(None)
        }
    }

    fn first_open(&self) -> Option<usize> {
        (0..self.orig.len()).find(|&ci| self.orig[ci].iter().all(|&l| self.lit_value(l) != 1))
    }

    fn search(&mut self) -> Result<bool> {
        let Some(ci) = self.first_open() else {
            return Ok(true);
        };
        let free: Vec<u32> = self.orig[ci]
            .iter()
            .copied()
            .filter(|&l| self.lit_value(l) == -1)
            .collect();
        for i in 0..free.len() {
            self.nodes += 1;
            if self.nodes > self.limit {
                return Err(Error::cap("expansion search nodes", self.nodes as u128, self.limit as u128));
            }
            let mark = self.trail.len();
            for &l in &free[..i] {
                self.assign(l ^ 1);
            }
            self.assign(free[i]);
            if self.propagate() && self.search()? {
                return Ok(true);
            }
            self.undo(mark);
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(clauses: Vec<Vec<u32>>, atoms: usize) -> Option<Vec<bool>> {
        let g = Grounding {
            clauses,
            offsets: vec![],
            atoms,
            trivially_false: false,
        };
        Solver::new(&g, 1_000_000).solve().unwrap()
    }

    // brute force over all assignments
    fn sat(clauses: &[Vec<u32>], atoms: usize) -> bool {
        (0..1u32 << atoms).any(|m| {
            clauses
                .iter()
                .all(|c| c.iter().any(|&l| ((m >> (l >> 1)) & 1 == 1) != (l & 1 == 1)))
        })
    }

    #[test]
    fn agrees_with_truth_tables() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..400 {
            let atoms = rng.gen_range(1..7);
            let m = rng.gen_range(1..14);
            let clauses: Vec<Vec<u32>> = (0..m)
                .map(|_| {
                    let k = rng.gen_range(1..4);
                    let mut c: Vec<u32> = (0..k).map(|_| rng.gen_range(0..2 * atoms as u32)).collect();
                    c.sort();
                    c.dedup();
                    c
                })
                .filter(|c: &Vec<u32>| !c.iter().any(|&l| c.contains(&(l ^ 1))))
                .collect();
            let got = solve(clauses.clone(), atoms);
            assert_eq!(got.is_some(), sat(&clauses, atoms), "{clauses:?}");
            if let Some(v) = got {
                assert!(clauses.iter().all(|c| c.iter().any(|&l| v[(l >> 1) as usize] != (l & 1 == 1))));
            }
        }
    }

    #[test]
    fn assignments_are_lexicographic() {
        let mut seen = Vec::new();
        for_each_assignment(2, 2, |a| {
            seen.push(a.to_vec());
            true
        });
        assert_eq!(seen, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        let mut count = 0;
        for_each_assignment(0, 3, |_| {
            count += 1;
            true
        });
        assert_eq!(count, 1);
    }
}
