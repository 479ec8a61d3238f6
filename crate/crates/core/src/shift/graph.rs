//! De Bruijn presentation of a shift of finite type.
//!
//! Vertices are the admissible words of length `max(memory - 1, 1)`, edges
//! are admissible overlaps of length `vertex_len + 1`. The graph is forward
//! pruned, so every vertex starts an infinite path and the labels of finite
//! paths are exactly the admissible words of the one-sided shift.

use std::collections::HashMap;
use std::fmt::Write as _;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::Constraints;
use crate::word::{all_words, Symbol, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeBruijnGraph {
    alphabet: u8,
    vertex_len: usize,
    vertices: Vec<Word>,
    /// Successor lists, ordered by the appended symbol.
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    /// Vertices removed by forward pruning (admissible-looking but dead ends).
    pruned: Vec<Word>,
}

impl DeBruijnGraph {
    /// Builds the pruned graph for `alphabet` symbols avoiding `forbidden`.
    pub(crate) fn build(alphabet: u8, forbidden: &[Word], memory: usize) -> Self {
        let vertex_len = memory.saturating_sub(1).max(1);
        let allowed = |w: &[Symbol]| !forbidden.iter().any(|f| crate::word::contains_factor(w, f.symbols()));
        // Forbidden single symbols drop out of the alphabet here.
        let candidates: Vec<Word> = all_words(alphabet, vertex_len)
            .filter(|w| allowed(w.symbols()))
            .collect();
        let index: HashMap<&Word, usize> = candidates.iter().enumerate().map(|(i, w)| (w, i)).collect();

        let mut succ = vec![Vec::new(); candidates.len()];
        for (i, v) in candidates.iter().enumerate() {
            for s in 0..alphabet {
                let mut edge = v.symbols().to_vec();
                edge.push(s);
                if !allowed(&edge) {
                    continue;
                }
                let target = Word::from(&edge[1..]);
                if let Some(&j) = index.get(&target) {
                    succ[i].push(j);
                }
            }
        }

        // Forward pruning: drop vertices with no surviving out-edge.
        let mut alive = vec![true; candidates.len()];
        loop {
            let mut changed = false;
            for i in 0..candidates.len() {
                if alive[i] && !succ[i].iter().any(|&j| alive[j]) {
                    alive[i] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }

        let mut remap = vec![usize::MAX; candidates.len()];
        let mut vertices = Vec::new();
        let mut pruned = Vec::new();
        for (i, w) in candidates.iter().enumerate() {
            if alive[i] {
                remap[i] = vertices.len();
                vertices.push(w.clone());
            } else {
                pruned.push(w.clone());
            }
        }
        let mut new_succ = vec![Vec::new(); vertices.len()];
        let mut pred = vec![Vec::new(); vertices.len()];
        for (i, outs) in succ.iter().enumerate() {
            if !alive[i] {
                continue;
            }
            for &j in outs {
                if alive[j] {
                    new_succ[remap[i]].push(remap[j]);
                    pred[remap[j]].push(remap[i]);
                }
            }
        }

        DeBruijnGraph {
            alphabet,
            vertex_len,
            vertices,
            succ: new_succ,
            pred,
            pruned,
        }
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn vertex_len(&self) -> usize {
        self.vertex_len
    }

    pub fn vertices(&self) -> &[Word] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.pred[v]
    }

    pub fn pruned(&self) -> &[Word] {
        &self.pruned
    }

    /// Edge labels as words of length `vertex_len + 1`, in vertex order.
    pub fn edge_words(&self) -> Vec<Word> {
        let mut out = Vec::new();
        for (i, outs) in self.succ.iter().enumerate() {
            for &j in outs {
                let mut w = self.vertices[i].clone();
                w.push(*self.vertices[j].symbols().last().unwrap());
                out.push(w);
            }
        }
        out
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.vertices.binary_search(w).ok()
    }

    fn reach_from(&self, starts: impl IntoIterator<Item = usize>, reverse: bool) -> Vec<bool> {
        let mut seen = vec![false; self.vertices.len()];
        let mut stack: Vec<usize> = starts.into_iter().collect();
        for &s in &stack {
            seen[s] = true;
        }
        while let Some(v) = stack.pop() {
            let next = if reverse { &self.pred[v] } else { &self.succ[v] };
            for &w in next {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    pub fn is_strongly_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        self.reach_from([0], false).into_iter().all(|b| b) && self.reach_from([0], true).into_iter().all(|b| b)
    }

    /// Strongly connected components, each sorted, in a deterministic order.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut g = DiGraph::<(), ()>::new();
        let nodes: Vec<_> = (0..self.vertices.len()).map(|_| g.add_node(())).collect();
        for (i, outs) in self.succ.iter().enumerate() {
            for &j in outs {
                g.add_edge(nodes[i], nodes[j], ());
            }
        }
        let mut comps: Vec<Vec<usize>> = tarjan_scc(&g)
            .into_iter()
            .map(|c| {
                let mut c: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
                c.sort_unstable();
                c
            })
            .collect();
        comps.sort();
        comps
    }

    /// Vertices lying on some cycle.
    pub fn cyclic_vertices(&self) -> Vec<bool> {
        let mut on_cycle = vec![false; self.vertices.len()];
        for comp in self.components() {
            let cyclic = comp.len() > 1 || self.succ[comp[0]].contains(&comp[0]);
            if cyclic {
                for v in comp {
                    on_cycle[v] = true;
                }
            }
        }
        on_cycle
    }

    /// Vertices reachable from some cycle, i.e. having in-paths of every length.
    pub fn reachable_from_cycle(&self) -> Vec<bool> {
        let cyc = self.cyclic_vertices();
        let starts: Vec<usize> = (0..cyc.len()).filter(|&v| cyc[v]).collect();
        self.reach_from(starts, false)
    }

    /// Longest in-path ending at each vertex that is not reachable from a
    /// cycle (those vertices form a DAG closed under predecessors).
    /// `None` for vertices with unbounded in-paths.
    pub fn max_in_depth(&self) -> Vec<Option<usize>> {
        let from_cycle = self.reachable_from_cycle();
        let mut depth: Vec<Option<usize>> = vec![None; self.vertices.len()];
        // Predecessors of a vertex outside the cycle closure stay outside it.
        fn visit(g: &DeBruijnGraph, v: usize, depth: &mut Vec<Option<usize>>) -> usize {
            if let Some(d) = depth[v] {
                return d;
            }
            let d = g.pred[v].iter().map(|&p| 1 + visit(g, p, depth)).max().unwrap_or(0);
            depth[v] = Some(d);
            d
        }
        for v in 0..self.vertices.len() {
            if !from_cycle[v] {
                visit(self, v, &mut depth);
            }
        }
        for v in 0..self.vertices.len() {
            if from_cycle[v] {
                depth[v] = None;
            }
        }
        depth
    }

    /// gcd of cycle lengths of a strongly connected graph.
    pub fn period(&self) -> Option<u64> {
        if !self.is_strongly_connected() {
            return None;
        }
        let mut level = vec![usize::MAX; self.vertices.len()];
        level[0] = 0;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.succ[v] {
                if level[w] == usize::MAX {
                    level[w] = level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        let mut g = 0u64;
        for (v, outs) in self.succ.iter().enumerate() {
            for &w in outs {
                let diff = (level[v] as i64 + 1 - level[w] as i64).unsigned_abs();
                g = gcd(g, diff);
            }
        }
        Some(g)
    }

    /// Boolean adjacency matrix, row-major.
    pub fn adjacency(&self) -> BoolMatrix {
        let n = self.vertices.len();
        let mut m = BoolMatrix::zeros(n);
        for (i, outs) in self.succ.iter().enumerate() {
            for &j in outs {
                m.set(i, j);
            }
        }
        m
    }

    /// Least `e` with every entry of `A^e` positive, if the graph is primitive.
    pub fn primitivity_exponent(&self) -> Option<usize> {
        let n = self.vertices.len();
        if n == 0 || !self.is_strongly_connected() || self.period() != Some(1) {
            return None;
        }
        let a = self.adjacency();
        let mut p = a.clone();
        // Wielandt: (n-1)^2 + 1 suffices for primitive matrices.
        let bound = (n - 1) * (n - 1) + 1;
        for e in 1..=bound.max(1) {
            if p.all_set() {
                return Some(e);
            }
            p = p.mul(&a);
        }
        None
    }

    fn consistent(&self, v: usize, window: u64, constraints: &Constraints) -> bool {
        let word = self.vertices[v].symbols();
        constraints
            .range(window, window + self.vertex_len as u64 - 1)
            .all(|(p, s)| word[(p - window) as usize] == s)
    }

    /// Whether some point of the shift meets every constraint.
    pub(crate) fn feasible(&self, constraints: &Constraints) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let last = constraints.max_position().unwrap_or(0).max(self.vertex_len as u64);
        let windows = last - self.vertex_len as u64 + 1;
        let n = self.vertices.len();
        let mut cur: Vec<bool> = (0..n).map(|v| self.consistent(v, 1, constraints)).collect();
        let mut next = vec![false; n];
        for w in 2..=windows {
            let new_pos = w + self.vertex_len as u64 - 1;
            let required = constraints.get(new_pos);
            next.iter_mut().for_each(|b| *b = false);
            let mut any = false;
            for v in 0..n {
                if !cur[v] {
                    continue;
                }
                for &t in &self.succ[v] {
                    if next[t] {
                        continue;
                    }
                    let sym = *self.vertices[t].symbols().last().unwrap();
                    if required.is_none_or(|r| r == sym) {
                        next[t] = true;
                        any = true;
                    }
                }
            }
            if !any {
                return false;
            }
            std::mem::swap(&mut cur, &mut next);
        }
        cur.into_iter().any(|b| b)
    }

    /// Lexicographically least word of length `len` that is a prefix of a
    /// point and meets every constraint. Constraints beyond `len` are still
    /// honoured by the underlying point.
    pub(crate) fn least_completion(&self, constraints: &Constraints, len: usize) -> Option<Word> {
        if self.vertices.is_empty() {
            return None;
        }
        let l = self.vertex_len as u64;
        let last = constraints.max_position().unwrap_or(0).max(len as u64).max(l);
        let windows = (last - l + 1) as usize;
        let n = self.vertices.len();
        // ok[w][v]: vertex v at window w+1 can be continued through all later
        // constraints.
        let mut ok = vec![vec![false; n]; windows];
        for v in 0..n {
            ok[windows - 1][v] = self.consistent(v, windows as u64, constraints);
        }
        for w in (0..windows - 1).rev() {
            for v in 0..n {
                ok[w][v] = self.consistent(v, w as u64 + 1, constraints) && self.succ[v].iter().any(|&t| ok[w + 1][t]);
            }
        }
        let mut v = (0..n).find(|&v| ok[0][v])?;
        let mut out: Vec<Symbol> = self.vertices[v].symbols().to_vec();
        for row in ok.iter().skip(1) {
            if out.len() >= len {
                break;
            }
            v = *self.succ[v].iter().find(|&&t| row[t])?;
            out.push(*self.vertices[v].symbols().last().unwrap());
        }
        out.truncate(len);
        Some(Word::new(out))
    }

    /// Admissible words of length `n` (paths for `n >= vertex_len`, vertex
    /// prefixes otherwise), sorted.
    pub(crate) fn words(&self, n: usize) -> Vec<Word> {
        if self.vertices.is_empty() || n == 0 {
            return Vec::new();
        }
        if n <= self.vertex_len {
            let mut out: Vec<Word> = self.vertices.iter().map(|v| Word::from(&v.symbols()[..n])).collect();
            out.dedup();
            return out;
        }
        let mut out = Vec::new();
        let mut stack: Vec<(usize, Vec<Symbol>)> = self
            .vertices
            .iter()
            .enumerate()
            .rev()
            .map(|(i, w)| (i, w.symbols().to_vec()))
            .collect();
        while let Some((v, w)) = stack.pop() {
            if w.len() == n {
                out.push(Word::new(w));
                continue;
            }
            for &t in self.succ[v].iter().rev() {
                let mut next = w.clone();
                next.push(*self.vertices[t].symbols().last().unwrap());
                stack.push((t, next));
            }
        }
        out
    }

    /// Number of admissible words of length `n >= vertex_len` via path counting.
    pub(crate) fn count_words(&self, n: usize) -> num_bigint::BigUint {
        use num_bigint::BigUint;
        if self.vertices.is_empty() || n == 0 {
            return BigUint::from(0u32);
        }
        if n <= self.vertex_len {
            return BigUint::from(self.words(n).len());
        }
        let mut counts = vec![BigUint::from(1u32); self.vertices.len()];
        for _ in self.vertex_len..n {
            let mut next = vec![BigUint::from(0u32); self.vertices.len()];
            for (v, c) in counts.iter().enumerate() {
                for &t in &self.succ[v] {
                    next[t] += c;
                }
            }
            counts = next;
        }
        counts.into_iter().sum()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph debruijn {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "  v{} [label=\"{}\"];", i, v);
        }
        for (i, outs) in self.succ.iter().enumerate() {
            for &j in outs {
                let sym = self.vertices[j].symbols().last().unwrap();
                let _ = writeln!(s, "  v{} -> v{} [label=\"{}\"];", i, j, sym);
            }
        }
        s.push_str("}\n");
        s
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Square boolean matrix with bit-packed rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    n: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BoolMatrix {
    pub fn zeros(n: usize) -> Self {
        let words_per_row = n.div_ceil(64).max(1);
        BoolMatrix {
            n,
            words_per_row,
            bits: vec![0; n * words_per_row],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words_per_row + j / 64] |= 1 << (j % 64);
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words_per_row + j / 64] & (1 << (j % 64)) != 0
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    pub fn all_set(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j)))
    }

    pub fn mul(&self, other: &BoolMatrix) -> BoolMatrix {
        let mut out = BoolMatrix::zeros(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                if self.get(i, k) {
                    let src = other.row(k).to_vec();
                    let dst = &mut out.bits[i * self.words_per_row..(i + 1) * self.words_per_row];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d |= s;
                    }
                }
            }
        }
        out
    }

    /// True if some `i` in `from` and `j` in `to` have entry `(i, j)` set.
    pub fn connects(&self, from: &[bool], to: &[bool]) -> bool {
        (0..self.n).any(|i| from[i] && (0..self.n).any(|j| to[j] && self.get(i, j)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(ws: &[&str]) -> Vec<Word> {
        ws.iter().map(|w| w.parse().unwrap()).collect()
    }

    #[test]
    fn golden_mean_graph() {
        let g = DeBruijnGraph::build(2, &words(&["11"]), 2);
        assert_eq!(g.vertices(), &words(&["0", "1"])[..]);
        let edges: Vec<String> = g.edge_words().iter().map(|w| w.to_string()).collect();
        assert_eq!(edges, ["00", "01", "10"]);
        assert!(g.is_strongly_connected());
        assert_eq!(g.period(), Some(1));
        assert_eq!(g.primitivity_exponent(), Some(2));
    }

    #[test]
    fn one_way_graph() {
        let g = DeBruijnGraph::build(2, &words(&["01"]), 2);
        let edges: Vec<String> = g.edge_words().iter().map(|w| w.to_string()).collect();
        assert_eq!(edges, ["00", "10", "11"]);
        let zero = g.index_of(&"0".parse().unwrap()).unwrap();
        let one = g.index_of(&"1".parse().unwrap()).unwrap();
        assert!(!g.predecessors(one).contains(&zero));
        assert!(!g.is_strongly_connected());
        assert_eq!(g.components().len(), 2);
    }

    #[test]
    fn all_symbols_forbidden() {
        let g = DeBruijnGraph::build(2, &words(&["0", "1"]), 1);
        assert!(g.is_empty());
        assert!(!g.feasible(&Constraints::new()));
    }

    #[test]
    fn pruning_removes_dead_ends() {
        // "1" must be followed by 1, but 11 is forbidden: vertex 1 dies.
        let g = DeBruijnGraph::build(2, &words(&["10", "11"]), 2);
        assert_eq!(g.vertices(), &words(&["0"])[..]);
        assert_eq!(g.pruned(), &words(&["1"])[..]);
    }

    #[test]
    fn alternating_has_period_two() {
        let g = DeBruijnGraph::build(2, &words(&["00", "11"]), 2);
        assert_eq!(g.period(), Some(2));
        assert_eq!(g.primitivity_exponent(), None);
    }

    #[test]
    fn boolean_powers() {
        let g = DeBruijnGraph::build(2, &words(&["11"]), 2);
        let a = g.adjacency();
        assert!(!a.all_set());
        assert!(a.mul(&a).all_set());
        assert_eq!(BoolMatrix::identity(2).mul(&a), a);
    }
}
