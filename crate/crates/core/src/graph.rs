//! Simple undirected graphs on at most 64 vertices, as bitset adjacency rows.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::perm::{Partition, PointSet, Transformation};
use crate::MAX_DEGREE;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    rows: Vec<PointSet>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.n)?;
        for (i, (v, w)) in self.edges().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}-{}", v + 1, w + 1)?;
        }
        f.write_str("])")
    }
}

impl Graph {
    pub fn null(n: usize) -> Graph {
        assert!(n <= MAX_DEGREE, "graph too large");
        Graph {
            n,
            rows: vec![PointSet::EMPTY; n],
        }
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::null(n);
        for v in 0..n {
            g.rows[v] = PointSet::full(n).difference(PointSet::singleton(v));
        }
        g
    }

    pub fn cycle(n: usize) -> Graph {
        let mut g = Graph::null(n);
        for v in 0..n {
            g.add_edge(v, (v + 1) % n);
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        if n > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(n));
        }
        let mut g = Graph::null(n);
        for &(v, w) in edges {
            if v >= n || w >= n || v == w {
                return Err(Error::InvalidArgument(format!(
                    "bad edge {}-{} for {n} vertices",
                    v + 1,
                    w + 1
                )));
            }
            g.add_edge(v, w);
        }
        Ok(g)
    }

    /// Edges exactly between distinct blocks.
    pub fn complete_multipartite(blocks: &Partition) -> Result<Graph> {
        if blocks.len() < 2 {
            return Err(Error::InvalidPartition(
                "complete multipartite graph needs at least two blocks".into(),
            ));
        }
        let n = blocks.degree();
        let mut g = Graph::null(n);
        for v in 0..n {
            g.rows[v] = PointSet::full(n).difference(blocks.block_of(v));
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, v: usize, w: usize) {
        assert!(v != w, "loops are not allowed");
        self.rows[v].insert(w);
        self.rows[w].insert(v);
    }

    pub fn remove_edge(&mut self, v: usize, w: usize) {
        self.rows[v].remove(w);
        self.rows[w].remove(v);
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, v: usize, w: usize) -> bool {
        self.rows[v].contains(w)
    }

    /// Open neighbourhood `N(v)`.
    pub fn neighbours(&self, v: usize) -> PointSet {
        self.rows[v]
    }

    pub fn valency(&self, v: usize) -> usize {
        self.rows[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum::<usize>() / 2
    }

    /// Edges `(v, w)` with `v < w`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |v| {
            self.rows[v]
                .iter()
                .filter(move |&w| w > v)
                .map(move |w| (v, w))
        })
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::null(self.n);
        for v in 0..self.n {
            g.rows[v] = PointSet::full(self.n)
                .difference(self.rows[v])
                .difference(PointSet::singleton(v));
        }
        g
    }

    /// Induced subgraph on `set`, relabelled `0..|set|` in increasing order.
    pub fn induced(&self, set: PointSet) -> Graph {
        let vertices: Vec<usize> = set.iter().collect();
        let mut g = Graph::null(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            for (j, &w) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(v, w) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn is_null(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn is_complete(&self) -> bool {
        (0..self.n).all(|v| self.rows[v].len() == self.n - 1)
    }

    /// Null or complete.
    pub fn is_trivial(&self) -> bool {
        self.is_null() || self.is_complete()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = PointSet::singleton(0);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = PointSet::EMPTY;
            for v in frontier.iter() {
                next = next.union(self.rows[v]);
            }
            frontier = next.difference(seen);
            seen = seen.union(next);
        }
        seen.len() == self.n
    }

    /// The common valency, if every vertex has the same one.
    pub fn is_regular(&self) -> Option<usize> {
        let k = self.rows.first().map_or(0, |r| r.len());
        self.rows.iter().all(|r| r.len() == k).then_some(k)
    }

    /// Pairs `v < w` with `N(v) = N(w)`.
    pub fn equal_neighbourhood_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for v in 0..self.n {
            for w in v + 1..self.n {
                if self.rows[v] == self.rows[w] {
                    out.push((v, w));
                }
            }
        }
        out
    }

    /// Vertices in degeneracy order (repeatedly remove a minimum-degree vertex),
    /// reversed so high-core vertices come first.
    fn degeneracy_order(&self, within: PointSet) -> Vec<usize> {
        let mut remaining = within;
        let mut order = Vec::with_capacity(within.len());
        while !remaining.is_empty() {
            let v = remaining
                .iter()
                .min_by_key(|&v| (self.rows[v].intersection(remaining).len(), v))
                .expect("nonempty");
            order.push(v);
            remaining.remove(v);
        }
        order.reverse();
        order
    }

    /// Greedy colouring of `candidates` in the given order; returns vertices
    /// with their colour numbers (1-based), sorted by colour.
    fn colour_bound(&self, candidates: &[usize]) -> Vec<(usize, usize)> {
        let mut classes: Vec<PointSet> = Vec::new();
        let mut out = Vec::with_capacity(candidates.len());
        for &v in candidates {
            let k = classes
                .iter()
                .position(|c| c.intersection(self.rows[v]).is_empty())
                .unwrap_or_else(|| {
                    classes.push(PointSet::EMPTY);
                    classes.len() - 1
                });
            classes[k].insert(v);
        }
        for (k, c) in classes.iter().enumerate() {
            for v in candidates.iter().copied().filter(|&v| c.contains(v)) {
                out.push((v, k + 1));
            }
        }
        out
    }

    fn expand_clique(
        &self,
        current: &mut Vec<usize>,
        candidates: Vec<usize>,
        best: &mut Vec<usize>,
        target: usize,
    ) -> bool {
        let coloured = self.colour_bound(&candidates);
        let mut remaining: PointSet = candidates.iter().copied().collect();
        for &(v, colour) in coloured.iter().rev() {
            if current.len() + colour <= best.len() {
                return false;
            }
            current.push(v);
            let next: Vec<usize> = candidates
                .iter()
                .copied()
                .filter(|&w| remaining.contains(w) && self.rows[v].contains(w))
                .collect();
            if next.is_empty() {
                if current.len() > best.len() {
                    *best = current.clone();
                    if best.len() >= target {
                        current.pop();
                        return true;
                    }
                }
            } else if self.expand_clique(current, next, best, target) {
                current.pop();
                return true;
            }
            current.pop();
            remaining.remove(v);
        }
        false
    }

    /// A maximum clique inside `within`, or the first clique of size
    /// `target` found.
    fn search_clique(&self, within: PointSet, target: usize) -> Vec<usize> {
        let order = self.degeneracy_order(within);
        let mut best = Vec::new();
        if !order.is_empty() {
            self.expand_clique(&mut Vec::new(), order, &mut best, target);
        }
        best.sort_unstable();
        best
    }

    pub fn maximum_clique(&self) -> Vec<usize> {
        self.search_clique(PointSet::full(self.n), usize::MAX)
    }

    pub fn clique_number(&self) -> usize {
        self.maximum_clique().len()
    }

    /// A clique of exactly `size` vertices inside `within`, if one exists.
    pub fn find_clique(&self, within: PointSet, size: usize) -> Option<Vec<usize>> {
        if size == 0 {
            return Some(Vec::new());
        }
        let found = self.search_clique(within, size);
        (found.len() >= size).then(|| {
            let mut c = found;
            c.truncate(size);
            c
        })
    }

    /// Exact chromatic number.
    pub fn chromatic_number(&self) -> usize {
        if self.n == 0 {
            return 0;
        }
        let mut k = self.clique_number().max(1);
        loop {
            if self.colouring_with(k).is_some() {
                return k;
            }
            k += 1;
        }
    }

    /// A proper colouring with at most `k` colours, by DSATUR backtracking.
    pub fn colouring_with(&self, k: usize) -> Option<Vec<usize>> {
        let mut colour = vec![usize::MAX; self.n];
        let mut classes = vec![PointSet::EMPTY; k];
        if self.dsatur(&mut colour, &mut classes, 0, 0) {
            Some(colour)
        } else {
            None
        }
    }

    fn dsatur(
        &self,
        colour: &mut [usize],
        classes: &mut [PointSet],
        coloured: usize,
        used: usize,
    ) -> bool {
        if coloured == self.n {
            return true;
        }
        let mut pick = usize::MAX;
        let mut pick_key = (0usize, 0usize);
        for (v, &c) in colour.iter().enumerate() {
            if c != usize::MAX {
                continue;
            }
            let saturation = classes[..used]
                .iter()
                .filter(|c| !c.intersection(self.rows[v]).is_empty())
                .count();
            let key = (saturation, self.rows[v].len());
            if pick == usize::MAX || key > pick_key {
                pick = v;
                pick_key = key;
            }
        }
        let v = pick;
        let limit = (used + 1).min(classes.len());
        for c in 0..limit {
            if !classes[c].intersection(self.rows[v]).is_empty() {
                continue;
            }
            colour[v] = c;
            classes[c].insert(v);
            if self.dsatur(colour, classes, coloured + 1, used.max(c + 1)) {
                return true;
            }
            classes[c].remove(v);
            colour[v] = usize::MAX;
        }
        false
    }

    /// `r + 1` vertices inducing `K_{r+1}` minus exactly one edge.
    pub fn has_clique_plus_pendant(&self, r: usize) -> Option<Vec<usize>> {
        if r == 0 {
            return None;
        }
        for u in 0..self.n {
            for w in u + 1..self.n {
                if self.has_edge(u, w) {
                    continue;
                }
                let common = self.rows[u].intersection(self.rows[w]);
                if common.len() + 1 < r {
                    continue;
                }
                if let Some(mut clique) = self.find_clique(common, r - 1) {
                    clique.push(u);
                    clique.push(w);
                    clique.sort_unstable();
                    return Some(clique);
                }
            }
        }
        None
    }

    /// Every edge maps to an edge.
    pub fn is_endomorphism(&self, f: &Transformation) -> Result<bool> {
        if f.degree() != self.n {
            return Err(Error::DegreeMismatch {
                left: f.degree(),
                right: self.n,
            });
        }
        Ok(self.edges().all(|(v, w)| self.has_edge(f.apply(v), f.apply(w))))
    }

    pub fn is_automorphism(&self, p: &Transformation) -> Result<bool> {
        if !self.is_endomorphism(p)? || !p.is_permutation() {
            return Ok(false);
        }
        self.is_endomorphism(&p.inverse()?)
    }

    /// Deterministic DOT text with 1-based labels.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph {name} {{");
        for v in 0..self.n {
            let _ = writeln!(out, "  {};", v + 1);
        }
        for (v, w) in self.edges() {
            let _ = writeln!(out, "  {} -- {};", v + 1, w + 1);
        }
        out.push_str("}\n");
        out
    }

    /// One row of `0`/`1` characters per vertex.
    pub fn to_matrix_text(&self) -> String {
        let mut out = String::with_capacity(self.n * (self.n + 1));
        for v in 0..self.n {
            for w in 0..self.n {
                out.push(if self.has_edge(v, w) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    /// Reads an adjacency matrix of `0`/`1` entries, one row per line; entries
    /// may be separated by whitespace. Must be symmetric and irreflexive.
    pub fn from_matrix_text(text: &str) -> Result<Graph> {
        let rows: Vec<Vec<bool>> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        other => Err(Error::Parse(format!("bad matrix entry {other:?}"))),
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let n = rows.len();
        if n > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(n));
        }
        let mut g = Graph::null(n);
        for (v, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parse(format!("row {} has {} entries, expected {n}", v + 1, row.len())));
            }
            if row[v] {
                return Err(Error::Parse(format!("loop at vertex {}", v + 1)));
            }
            for (w, &e) in row.iter().enumerate() {
                if e != rows[w][v] {
                    return Err(Error::Parse(format!("matrix not symmetric at {},{}", v + 1, w + 1)));
                }
                if e && v < w {
                    g.add_edge(v, w);
                }
            }
        }
        Ok(g)
    }
}

/// The map collapsing `a_set` onto `a` and fixing everything else: an
/// idempotent endomorphism of the complete multipartite graph on `blocks`
/// when `a_set` lies inside one block.
pub fn witness_map_for_block(blocks: &Partition, a_set: PointSet, a: usize) -> Result<Transformation> {
    let n = blocks.degree();
    if !a_set.contains(a) {
        return Err(Error::InvalidArgument(format!("{} is not in {a_set}", a + 1)));
    }
    if !a_set.is_subset(blocks.block_of(a)) {
        return Err(Error::InvalidArgument(format!("{a_set} straddles blocks of {blocks}")));
    }
    let images = (0..n).map(|x| if a_set.contains(x) { a } else { x }).collect();
    Transformation::new(images)
}

/// A representation of a graph as an intersection graph of `k`-subsets of a
/// ground set of size `ground_size > 2k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionEmbedding {
    pub ground_size: usize,
    pub k: usize,
    pub sets: Vec<Vec<usize>>,
}

impl IntersectionEmbedding {
    /// Adjacency ⇔ intersecting, all sets of size `k`, and `m > 2k`.
    pub fn represents(&self, x: &Graph) -> bool {
        if self.sets.len() != x.vertex_count() || self.ground_size <= 2 * self.k {
            return false;
        }
        if self
            .sets
            .iter()
            .any(|s| s.len() != self.k || s.iter().any(|&p| p >= self.ground_size))
        {
            return false;
        }
        for v in 0..self.sets.len() {
            for w in v + 1..self.sets.len() {
                let meet = self.sets[v].iter().any(|p| self.sets[w].contains(p));
                if meet != x.has_edge(v, w) {
                    return false;
                }
            }
        }
        true
    }
}

/// Each vertex becomes the set of its incident edges, padded with private
/// points to a common size; the ground set is then padded to exceed `2k`.
pub fn intersection_embedding(x: &Graph) -> IntersectionEmbedding {
    let edges: Vec<(usize, usize)> = x.edges().collect();
    let mut sets: Vec<Vec<usize>> = vec![Vec::new(); x.vertex_count()];
    for (i, &(v, w)) in edges.iter().enumerate() {
        sets[v].push(i);
        sets[w].push(i);
    }
    let k = sets.iter().map(Vec::len).max().unwrap_or(0).max(1);
    let mut next = edges.len();
    for s in &mut sets {
        while s.len() < k {
            s.push(next);
            next += 1;
        }
    }
    IntersectionEmbedding {
        ground_size: next.max(2 * k + 1),
        k,
        sets,
    }
}
