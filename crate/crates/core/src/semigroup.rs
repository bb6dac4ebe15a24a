//! Brute-force semigroup closures and the structural tools around minimal
//! rank: rank-preserving elements, idempotents with a given kernel, Neumann's
//! graph `Δ`, `G`-sections and `G`-regular partitions.

use std::collections::BTreeSet;

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::group::PermutationGroup;
use crate::perm::{Partition, PointSet, Transformation};

pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;

/// Degrees up to this are packed four bits per point into a `u64`.
const PACKED_MAX_DEGREE: usize = 16;

#[derive(Debug, Clone)]
enum Store {
    Packed(Vec<u64>),
    Wide(Vec<Transformation>),
}

/// The semigroup generated by a list of maps (products of length at least
/// one), in breadth-first discovery order.
#[derive(Debug, Clone)]
pub struct SemigroupClosure {
    degree: usize,
    generators: Vec<Transformation>,
    store: Store,
    rank_spectrum: BTreeSet<usize>,
    /// `collapsed[v]`: points some element sends to the same image as `v`.
    collapsed: Vec<PointSet>,
    truncated: bool,
}

fn pack(t: &Transformation) -> u64 {
    t.as_slice()
        .iter()
        .enumerate()
        .fold(0u64, |acc, (x, &y)| acc | (u64::from(y) << (4 * x)))
}

fn unpack(code: u64, n: usize) -> Transformation {
    Transformation::from_raw((0..n).map(|x| ((code >> (4 * x)) & 0xf) as u8).collect())
}

#[inline]
fn packed_then(p: u64, g: &[u8; PACKED_MAX_DEGREE], n: usize) -> u64 {
    let mut out = 0u64;
    for x in 0..n {
        let y = ((p >> (4 * x)) & 0xf) as usize;
        out |= u64::from(g[y]) << (4 * x);
    }
    out
}

/// Degrees whose full transformation monoid fits a bitmap of at most
/// `2^24` bits; membership is then a bit lookup instead of a hash probe.
const DENSE_MAX_DEGREE: usize = 8;

enum Seen {
    Dense { bits: Vec<u64>, n: usize },
    Hashed(FxHashSet<u64>),
}

impl Seen {
    fn new(n: usize) -> Seen {
        if n <= DENSE_MAX_DEGREE {
            let size = n.pow(n as u32);
            Seen::Dense {
                bits: vec![0; size.div_ceil(64)],
                n,
            }
        } else {
            Seen::Hashed(FxHashSet::default())
        }
    }

    /// True if `code` was not present.
    #[inline]
    fn insert(&mut self, code: u64) -> bool {
        match self {
            Seen::Dense { bits, n } => {
                let mut index = 0usize;
                for x in (0..*n).rev() {
                    index = index * *n + ((code >> (4 * x)) & 0xf) as usize;
                }
                let (word, bit) = (index / 64, 1u64 << (index % 64));
                let fresh = bits[word] & bit == 0;
                bits[word] |= bit;
                fresh
            }
            Seen::Hashed(set) => set.insert(code),
        }
    }
}

/// Rank and same-image classes of one element, folded into the running totals.
fn record(images: impl Iterator<Item = usize> + Clone, n: usize, ranks: &mut BTreeSet<usize>, collapsed: &mut [PointSet]) {
    let mut by_image = [0u64; 64];
    for (x, y) in images.clone().enumerate() {
        by_image[y] |= 1 << x;
    }
    ranks.insert(by_image[..n].iter().filter(|&&m| m != 0).count());
    for (x, y) in images.enumerate() {
        collapsed[x] = collapsed[x].union(PointSet::from_bits(by_image[y]));
    }
}

/// [`record`] for a packed element.
#[inline]
fn record_packed(code: u64, n: usize, ranks: &mut [bool; PACKED_MAX_DEGREE + 1], collapsed: &mut [PointSet]) {
    let mut by_image = [0u64; PACKED_MAX_DEGREE];
    for x in 0..n {
        by_image[((code >> (4 * x)) & 0xf) as usize] |= 1 << x;
    }
    ranks[by_image[..n].iter().filter(|&&m| m != 0).count()] = true;
    for (x, c) in collapsed.iter_mut().enumerate().take(n) {
        let y = ((code >> (4 * x)) & 0xf) as usize;
        *c = c.union(PointSet::from_bits(by_image[y]));
    }
}

pub fn closure(generators: &[Transformation], cap: usize) -> Result<SemigroupClosure> {
    let degree = match generators.first() {
        Some(g) => g.degree(),
        None => return Err(Error::InvalidArgument("closure needs at least one generator".into())),
    };
    for g in generators {
        if g.degree() != degree {
            return Err(Error::DegreeMismatch {
                left: g.degree(),
                right: degree,
            });
        }
    }
    let mut ranks = BTreeSet::new();
    let mut collapsed = vec![PointSet::EMPTY; degree];
    let mut truncated = false;
    let store = if degree <= PACKED_MAX_DEGREE {
        let tables: Vec<[u8; PACKED_MAX_DEGREE]> = generators
            .iter()
            .map(|g| {
                let mut t = [0u8; PACKED_MAX_DEGREE];
                t[..degree].copy_from_slice(g.as_slice());
                t
            })
            .collect();
        let mut seen = Seen::new(degree);
        let mut elements: Vec<u64> = Vec::new();
        'gens: for g in generators {
            let code = pack(g);
            if seen.insert(code) {
                if elements.len() >= cap {
                    truncated = true;
                    break 'gens;
                }
                elements.push(code);
            }
        }
        let mut i = 0;
        'bfs: while i < elements.len() && !truncated {
            let s = elements[i];
            for t in &tables {
                let p = packed_then(s, t, degree);
                if seen.insert(p) {
                    if elements.len() >= cap {
                        truncated = true;
                        break 'bfs;
                    }
                    elements.push(p);
                }
            }
            i += 1;
        }
        let mut seen_ranks = [false; PACKED_MAX_DEGREE + 1];
        for &e in &elements {
            record_packed(e, degree, &mut seen_ranks, &mut collapsed);
        }
        ranks.extend((1..=degree).filter(|&r| seen_ranks[r]));
        Store::Packed(elements)
    } else {
        let mut seen: FxHashSet<Transformation> = FxHashSet::default();
        let mut elements: Vec<Transformation> = Vec::new();
        for g in generators {
            if seen.insert(g.clone()) {
                if elements.len() >= cap {
                    truncated = true;
                    break;
                }
                elements.push(g.clone());
            }
        }
        let mut i = 0;
        'wide: while i < elements.len() && !truncated {
            for g in generators {
                let p = elements[i].then(g);
                if !seen.contains(&p) {
                    if elements.len() >= cap {
                        truncated = true;
                        break 'wide;
                    }
                    seen.insert(p.clone());
                    elements.push(p);
                }
            }
            i += 1;
        }
        for e in &elements {
            record(e.as_slice().iter().map(|&y| y as usize), degree, &mut ranks, &mut collapsed);
        }
        Store::Wide(elements)
    };
    Ok(SemigroupClosure {
        degree,
        generators: generators.to_vec(),
        store,
        rank_spectrum: ranks,
        collapsed,
        truncated,
    })
}

/// `⟨G, f⟩`.
pub fn group_closure(group: &PermutationGroup, f: &Transformation, cap: usize) -> Result<SemigroupClosure> {
    let mut gens = group.generators().to_vec();
    gens.push(f.clone());
    closure(&gens, cap)
}

impl SemigroupClosure {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Transformation] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        match &self.store {
            Store::Packed(v) => v.len(),
            Store::Wide(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Elements in discovery order.
    pub fn elements(&self) -> Box<dyn Iterator<Item = Transformation> + '_> {
        match &self.store {
            Store::Packed(v) => Box::new(v.iter().map(move |&c| unpack(c, self.degree))),
            Store::Wide(v) => Box::new(v.iter().cloned()),
        }
    }

    pub fn contains(&self, t: &Transformation) -> bool {
        match &self.store {
            Store::Packed(v) => t.degree() == self.degree && v.contains(&pack(t)),
            Store::Wide(v) => v.contains(t),
        }
    }

    fn complete(&self) -> Result<()> {
        if self.truncated {
            Err(Error::OracleUnavailable { cap: self.len() })
        } else {
            Ok(())
        }
    }

    pub fn rank_spectrum(&self) -> Result<&BTreeSet<usize>> {
        self.complete()?;
        Ok(&self.rank_spectrum)
    }

    pub fn min_rank(&self) -> Result<usize> {
        self.complete()?;
        Ok(*self.rank_spectrum.first().expect("nonempty closure"))
    }

    pub fn contains_constant(&self) -> Result<bool> {
        Ok(self.min_rank()? == 1)
    }

    /// Pairs no element collapses: the graph `Gr` of this semigroup.
    pub fn gr(&self) -> Result<Graph> {
        self.complete()?;
        let n = self.degree;
        let mut g = Graph::null(n);
        for v in 0..n {
            for w in v + 1..n {
                if !self.collapsed[v].contains(w) {
                    g.add_edge(v, w);
                }
            }
        }
        Ok(g)
    }

    /// One element per line, in discovery order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for e in self.elements() {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }
}

/// Some `g` with `rank(f g f) = rank(f)`, i.e. `Im(f) g` is a section of
/// `ker(f)`. Searches the orbit of `Im(f)`, which must have at most `cap` sets.
pub fn find_rank_preserving_g(group: &PermutationGroup, f: &Transformation, cap: u64) -> Result<Option<Transformation>> {
    if group.degree() != f.degree() {
        return Err(Error::DegreeMismatch {
            left: group.degree(),
            right: f.degree(),
        });
    }
    let kernel = f.kernel();
    Ok(group
        .set_orbit(f.image_set(), cap)?
        .into_iter()
        .find(|(set, _)| kernel.is_section(*set))
        .map(|(_, g)| g))
}

/// An idempotent power `e = (f g)^k` with the kernel of `f`, and `k`.
pub fn idempotent_same_kernel(f: &Transformation, g: &Transformation) -> Result<(Transformation, u64)> {
    if f.degree() != g.degree() {
        return Err(Error::DegreeMismatch {
            left: f.degree(),
            right: g.degree(),
        });
    }
    if f.then(g).then(f).rank() != f.rank() {
        return Err(Error::Hypothesis(format!("rank(f g f) < rank(f) for f = {f}, g = {g}")));
    }
    let (e, k) = f.then(g).idempotent_power();
    if !e.is_idempotent() {
        return Err(Error::TheoremViolation(format!("(fg)^{k} = {e} is not idempotent")));
    }
    if e.kernel() != f.kernel() {
        return Err(Error::TheoremViolation(format!(
            "kernel {} of e differs from kernel {} of f",
            e.kernel(),
            f.kernel()
        )));
    }
    Ok((e, k))
}

/// Union of the `G`-orbits of pairs lying in a common block of `rho`.
pub fn neumann_delta(group: &PermutationGroup, rho: &Partition) -> Result<Graph> {
    let n = group.degree();
    if rho.degree() != n {
        return Err(Error::DegreeMismatch {
            left: rho.degree(),
            right: n,
        });
    }
    let mut delta = Graph::null(n);
    for orbit in group.pair_orbits() {
        if orbit.iter().any(|&(v, w)| rho.same_block(v, w)) {
            for &(v, w) in &orbit {
                delta.add_edge(v, w);
            }
        }
    }
    Ok(delta)
}

/// Every image `S g` is a section of `P`; the orbit of `S` must have at most
/// `cap` sets.
pub fn is_g_section(group: &PermutationGroup, set: PointSet, partition: &Partition, cap: u64) -> Result<bool> {
    if partition.degree() != group.degree() {
        return Err(Error::DegreeMismatch {
            left: partition.degree(),
            right: group.degree(),
        });
    }
    if set.len() != partition.len() {
        return Err(Error::InvalidArgument(format!(
            "section candidate {set} has {} points but the partition has {} blocks",
            set.len(),
            partition.len()
        )));
    }
    Ok(group
        .set_orbit(set, cap)?
        .iter()
        .all(|(image, _)| partition.is_section(*image)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GRegularPartition {
    pub partition: Partition,
    pub section: PointSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularPartitionSizes {
    /// Sizes `1 < s < n` admitting a `G`-regular partition, increasing.
    pub sizes: Vec<usize>,
    /// One witness per size, in the same order.
    pub witnesses: Vec<GRegularPartition>,
}

impl RegularPartitionSizes {
    /// `s2 - s1`, or `None` (infinite) with fewer than two sizes.
    pub fn depth(&self) -> Option<usize> {
        match self.sizes.as_slice() {
            [s1, s2, ..] => Some(s2 - s1),
            _ => None,
        }
    }
}

/// Largest degree handled by the exhaustive partition search.
pub const EXHAUSTIVE_MAX_DEGREE: usize = 12;

/// Sizes of nontrivial `G`-regular partitions. `P` is `G`-regular exactly
/// when the complement of `Δ_P` has a clique of size `|P|`; that clique is a
/// section. Only uniform partitions are searched unless `allow_nonuniform`.
pub fn regular_partition_sizes(group: &PermutationGroup, allow_nonuniform: bool) -> Result<RegularPartitionSizes> {
    let n = group.degree();
    if n > EXHAUSTIVE_MAX_DEGREE {
        return Err(Error::BeyondExhaustiveRegime {
            degree: n,
            max: EXHAUSTIVE_MAX_DEGREE,
        });
    }
    if !group.is_transitive() {
        return Err(Error::Intransitive);
    }
    let orbits = group.pair_orbits();
    let mut orbit_of = vec![usize::MAX; n * n];
    for (id, orbit) in orbits.iter().enumerate() {
        for &(v, w) in orbit {
            orbit_of[v * n + w] = id;
        }
    }
    let mut result = RegularPartitionSizes {
        sizes: Vec::new(),
        witnesses: Vec::new(),
    };
    for s in 2..n {
        if !allow_nonuniform && !n.is_multiple_of(s) {
            continue;
        }
        let block_size = (!allow_nonuniform).then_some(n / s);
        let mut found = None;
        for_each_partition(n, s, block_size, &mut |labels: &[u8]| {
            let mut in_delta = vec![false; orbits.len()];
            for v in 0..n {
                for w in v + 1..n {
                    if labels[v] == labels[w] {
                        in_delta[orbit_of[v * n + w]] = true;
                    }
                }
            }
            let mut complement = Graph::null(n);
            for v in 0..n {
                for w in v + 1..n {
                    if !in_delta[orbit_of[v * n + w]] {
                        complement.add_edge(v, w);
                    }
                }
            }
            match complement.find_clique(PointSet::full(n), s) {
                Some(clique) => {
                    found = Some(GRegularPartition {
                        partition: Partition::from_key(labels),
                        section: clique.into_iter().collect(),
                    });
                    true
                }
                None => false,
            }
        });
        if let Some(w) = found {
            result.sizes.push(s);
            result.witnesses.push(w);
        }
    }
    Ok(result)
}

/// Calls `visit` on the label vector of every partition of `n` points into
/// exactly `parts` blocks (labels in order of first appearance), optionally
/// with all blocks of size `block_size`. Stops when `visit` returns true.
fn for_each_partition(n: usize, parts: usize, block_size: Option<usize>, visit: &mut dyn FnMut(&[u8]) -> bool) {
    fn go(
        x: usize,
        n: usize,
        parts: usize,
        block_size: Option<usize>,
        labels: &mut Vec<u8>,
        sizes: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[u8]) -> bool,
    ) -> bool {
        if x == n {
            return sizes.len() == parts && visit(labels);
        }
        let open = sizes.len();
        if parts - open.min(parts) > n - x {
            return false;
        }
        for b in 0..=open {
            if b == open && open == parts {
                break;
            }
            if b < open && block_size.is_some_and(|k| sizes[b] == k) {
                continue;
            }
            if b == open {
                sizes.push(0);
            }
            sizes[b] += 1;
            labels.push(b as u8);
            let stop = go(x + 1, n, parts, block_size, labels, sizes, visit);
            labels.pop();
            sizes[b] -= 1;
            if b == open {
                sizes.pop();
            }
            if stop {
                return true;
            }
        }
        false
    }
    go(0, n, parts, block_size, &mut Vec::with_capacity(n), &mut Vec::new(), visit);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(n: usize, gens: &[&str]) -> PermutationGroup {
        PermutationGroup::new(n, gens.iter().map(|g| Transformation::parse(g, Some(n)).unwrap()).collect()).unwrap()
    }

    fn grid() -> PermutationGroup {
        group(9, &["(1 4)(2 5)(3 6)", "(1 4 7)(2 5 8)(3 6 9)", "(2 4)(3 7)(6 8)"])
    }

    fn rows() -> Partition {
        Partition::from_blocks(9, &[vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]]).unwrap()
    }

    fn row_projection() -> Transformation {
        Transformation::new((0..9).map(|x| 4 * (x / 3)).collect()).unwrap()
    }

    #[test]
    fn closure_of_a_constant() {
        let c = closure(&[Transformation::constant(4, 1)], 10).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.min_rank().unwrap(), 1);
    }

    #[test]
    fn closure_of_s3_and_a_map() {
        let s3 = group(3, &["(1 2)", "(1 2 3)"]);
        let c = group_closure(&s3, &"[1,1,3]".parse().unwrap(), 1000).unwrap();
        assert!(c.contains_constant().unwrap());
        // Full transformation monoid on three points.
        assert_eq!(c.len(), 27);
        assert_eq!(c.rank_spectrum().unwrap().iter().copied().collect::<Vec<_>>(), vec![1, 2, 3]);
        assert!(c.gr().unwrap().is_null());
    }

    #[test]
    fn truncation_is_flagged() {
        let s3 = group(3, &["(1 2)", "(1 2 3)"]);
        let c = group_closure(&s3, &"[1,1,3]".parse().unwrap(), 5).unwrap();
        assert!(c.truncated());
        assert_eq!(c.len(), 5);
        assert!(matches!(c.min_rank(), Err(Error::OracleUnavailable { .. })));
    }

    #[test]
    fn wide_closure_matches_packed() {
        let c = closure(&["[2,3,1]".parse().unwrap(), "[1,1,3]".parse().unwrap()], 100).unwrap();
        let mut wide_gens = Vec::new();
        for g in c.generators() {
            let mut v: Vec<usize> = g.images().collect();
            v.extend(3..20);
            wide_gens.push(Transformation::new(v).unwrap());
        }
        let w = closure(&wide_gens, 100).unwrap();
        assert_eq!(w.len(), c.len());
        assert_eq!(w.min_rank().unwrap(), c.min_rank().unwrap() + 17);
    }

    #[test]
    fn grid_closure() {
        let c = group_closure(&grid(), &row_projection(), DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(c.min_rank().unwrap(), 3);
        assert!(!c.contains_constant().unwrap());
        assert_eq!(c.gr().unwrap().edge_count(), 18);
    }

    #[test]
    fn rank_preserving_elements() {
        let f: Transformation = "[1,1,3]".parse().unwrap();
        let s3 = group(3, &["(1 2)", "(1 2 3)"]);
        assert!(find_rank_preserving_g(&s3, &f, 100).unwrap().unwrap().is_identity());
        let g = find_rank_preserving_g(&grid(), &row_projection(), 1000).unwrap().unwrap();
        let f = row_projection();
        assert_eq!(f.then(&g).then(&f).rank(), 3);
        let (e, _) = idempotent_same_kernel(&f, &g).unwrap();
        assert!(e.is_idempotent());
        assert_eq!(e.kernel(), rows());
    }

    #[test]
    fn idempotents() {
        let f: Transformation = "[1,1,3]".parse().unwrap();
        let id = Transformation::identity(3);
        assert_eq!(idempotent_same_kernel(&f, &id).unwrap(), (f.clone(), 1));
        let p: Transformation = "[2,3,1]".parse().unwrap();
        let (e, _) = idempotent_same_kernel(&p, &p.inverse().unwrap()).unwrap();
        assert!(e.is_identity());
        // Im(f) = {1,2} is one block of the kernel {1,2|3}: rank(fgf) drops.
        assert!(matches!(
            idempotent_same_kernel(&"[1,1,2]".parse().unwrap(), &id),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn delta_graphs() {
        let g = grid();
        assert!(neumann_delta(&g, &Partition::singletons(9)).unwrap().is_null());
        let d = neumann_delta(&g, &rows()).unwrap();
        assert_eq!(d.edge_count(), 18);
        let gr = crate::sync::gr_graph(&g, &row_projection()).unwrap();
        assert!(d.edges().all(|(v, w)| !gr.has_edge(v, w)));
        let s4 = group(4, &["(1 2)", "(1 2 3 4)"]);
        let rho = Partition::from_labels(&[0, 0, 1, 2]).unwrap();
        assert!(neumann_delta(&s4, &rho).unwrap().is_complete());
    }

    #[test]
    fn sections() {
        let triv = PermutationGroup::trivial(4).unwrap();
        let p = Partition::from_labels(&[0, 0, 1, 1]).unwrap();
        assert!(is_g_section(&triv, [0, 2].into_iter().collect(), &p, 10).unwrap());
        let diagonal: PointSet = [0, 4, 8].into_iter().collect();
        assert!(is_g_section(&grid(), diagonal, &rows(), 1000).unwrap());
        let row: PointSet = [0, 1, 2].into_iter().collect();
        assert!(!is_g_section(&grid(), row, &rows(), 1000).unwrap());
    }

    #[test]
    fn partition_enumeration_counts() {
        let count = |n, parts, size| {
            let mut c = 0;
            for_each_partition(n, parts, size, &mut |_| {
                c += 1;
                false
            });
            c
        };
        assert_eq!(count(4, 2, None), 7);
        assert_eq!(count(5, 3, None), 25);
        assert_eq!(count(9, 3, Some(3)), 280);
        assert_eq!(count(6, 3, Some(2)), 15);
    }

    #[test]
    fn regular_partitions() {
        let grid_sizes = regular_partition_sizes(&grid(), false).unwrap();
        assert!(grid_sizes.sizes.contains(&3));
        for w in &grid_sizes.witnesses {
            assert!(is_g_section(&grid(), w.section, &w.partition, 1000).unwrap());
        }
        let c5 = group(5, &["(1 2 3 4 5)"]);
        let r = regular_partition_sizes(&c5, false).unwrap();
        assert!(r.sizes.is_empty());
        assert_eq!(r.depth(), None);
        let s5 = group(5, &["(1 2)", "(1 2 3 4 5)"]);
        assert!(regular_partition_sizes(&s5, true).unwrap().sizes.is_empty());
        let c13 = group(13, &["(1 2 3 4 5 6 7 8 9 10 11 12 13)"]);
        assert!(matches!(
            regular_partition_sizes(&c13, false),
            Err(Error::BeyondExhaustiveRegime { .. })
        ));
    }
}
