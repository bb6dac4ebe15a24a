//! Permutation groups given by generators.

use std::collections::VecDeque;
use std::sync::OnceLock;

use num_bigint::BigUint;
use rustc_hash::FxHashMap;

use crate::chain::StabilizerChain;
use crate::error::{Error, Result};
use crate::perm::{Partition, PointSet, Transformation};
use crate::MAX_DEGREE;

/// A permutation group `⟨generators⟩` on `{0, .., degree-1}`.
///
/// Orbits, block systems and the stabilizer chain are computed on first use
/// and cached; the group is immutable and shareable afterwards.
#[derive(Debug, Clone)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Transformation>,
    orbits: OnceLock<Partition>,
    chain: OnceLock<StabilizerChain>,
    block_systems: OnceLock<Vec<BlockSystem>>,
}

/// A nontrivial system of imprimitivity: blocks of a common size `b`,
/// `1 < b < n`, permuted setwise by the group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockSystem {
    partition: Partition,
}

impl BlockSystem {
    pub fn new(group: &PermutationGroup, partition: Partition) -> Result<Self> {
        let n = group.degree();
        if partition.degree() != n {
            return Err(Error::DegreeMismatch {
                left: partition.degree(),
                right: n,
            });
        }
        let size = partition.blocks()[0].len();
        if !partition.is_uniform() || size <= 1 || size >= n {
            return Err(Error::InvalidPartition(format!(
                "{partition} is not a nontrivial uniform partition"
            )));
        }
        for g in group.generators() {
            for &b in partition.blocks() {
                let image = g.apply_set(b);
                if partition.block_of(image.first().expect("nonempty")) != image {
                    return Err(Error::InvalidPartition(format!(
                        "{partition} is not preserved by {g}"
                    )));
                }
            }
        }
        Ok(BlockSystem { partition })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn block_size(&self) -> usize {
        self.partition.blocks()[0].len()
    }

    pub fn num_blocks(&self) -> usize {
        self.partition.len()
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
        true
    }
}

impl PermutationGroup {
    pub fn new(degree: usize, generators: Vec<Transformation>) -> Result<Self> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(degree));
        }
        if generators.is_empty() {
            return Err(Error::InvalidArgument(
                "a group needs at least one generator".into(),
            ));
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: g.degree(),
                    right: degree,
                });
            }
            if !g.is_permutation() {
                return Err(Error::NotAPermutation(g.to_string()));
            }
        }
        Ok(PermutationGroup {
            degree,
            generators,
            orbits: OnceLock::new(),
            chain: OnceLock::new(),
            block_systems: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Result<Self> {
        PermutationGroup::new(degree, vec![Transformation::identity(degree)])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Transformation] {
        &self.generators
    }

    pub fn orbits(&self) -> &Partition {
        self.orbits.get_or_init(|| {
            let mut uf = UnionFind::new(self.degree);
            for g in &self.generators {
                for x in 0..self.degree {
                    uf.union(x, g.apply(x));
                }
            }
            let key: Vec<u8> = (0..self.degree).map(|x| uf.find(x) as u8).collect();
            Partition::from_key(&key)
        })
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits().len() == 1
    }

    /// Smallest block containing `seed` (its first element joined with all
    /// the others); the whole point set when no proper block contains it.
    pub fn minimal_block_containing(&self, seed: PointSet) -> Result<PointSet> {
        if !self.is_transitive() {
            return Err(Error::Intransitive);
        }
        let first = seed
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty seed set".into()))?;
        let mut uf = UnionFind::new(self.degree);
        let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
        for x in seed.iter().skip(1) {
            if uf.union(first, x) {
                queue.push_back((first, x));
            }
        }
        while let Some((x, y)) = queue.pop_front() {
            for g in &self.generators {
                let (gx, gy) = (g.apply(x), g.apply(y));
                if uf.union(gx, gy) {
                    queue.push_back((gx, gy));
                }
            }
        }
        let root = uf.find(first);
        Ok((0..self.degree).filter(|&x| uf.find(x) == root).collect())
    }

    pub fn minimal_block(&self, a: usize, b: usize) -> Result<PointSet> {
        if a == b || a >= self.degree || b >= self.degree {
            return Err(Error::InvalidArgument(format!(
                "minimal block needs two distinct points, got {} and {}",
                a + 1,
                b + 1
            )));
        }
        self.minimal_block_containing(PointSet::singleton(a).union(PointSet::singleton(b)))
    }

    pub fn is_primitive(&self) -> bool {
        self.is_transitive()
            && (1..self.degree).all(|b| {
                self.minimal_block(0, b).expect("transitive").len() == self.degree
            })
    }

    /// The images of a block under the group: the block system it generates.
    fn system_of_block(&self, block: PointSet) -> Partition {
        let mut labels = vec![u8::MAX; self.degree];
        let mut found = vec![block];
        let mut i = 0;
        while i < found.len() {
            let b = found[i];
            for g in &self.generators {
                let image = g.apply_set(b);
                if !found.contains(&image) {
                    found.push(image);
                }
            }
            i += 1;
        }
        for (l, b) in found.iter().enumerate() {
            for x in b.iter() {
                labels[x] = l as u8;
            }
        }
        Partition::from_key(&labels)
    }

    /// Every nontrivial block system, ordered by block size then by the block
    /// containing point 0. Empty for primitive or intransitive groups.
    pub fn block_systems(&self) -> &[BlockSystem] {
        self.block_systems.get_or_init(|| {
            if !self.is_transitive() {
                return Vec::new();
            }
            let full = PointSet::full(self.degree);
            let mut blocks: Vec<PointSet> = Vec::new();
            for b in 1..self.degree {
                let m = self.minimal_block(0, b).expect("transitive");
                if m != full && !blocks.contains(&m) {
                    blocks.push(m);
                }
            }
            // Every block through 0 is a join of minimal ones.
            let mut i = 0;
            while i < blocks.len() {
                for j in 0..i {
                    let joined = self
                        .minimal_block_containing(blocks[i].union(blocks[j]))
                        .expect("transitive");
                    if joined != full && !blocks.contains(&joined) {
                        blocks.push(joined);
                    }
                }
                i += 1;
            }
            blocks.sort_by_key(|b| (b.len(), b.bits()));
            blocks
                .into_iter()
                .map(|b| {
                    BlockSystem::new(self, self.system_of_block(b))
                        .expect("block systems from minimal blocks are valid")
                })
                .collect()
        })
    }

    fn chain(&self) -> &StabilizerChain {
        self.chain
            .get_or_init(|| StabilizerChain::new(self.degree, &self.generators, &[]))
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    /// Orbit lengths along the stabilizer chain for the base `0, 1, 2, ..`.
    pub fn chain_orbit_lengths(&self) -> Vec<usize> {
        self.chain().orbit_lengths()
    }

    pub fn order_u64(&self) -> Option<u64> {
        u64::try_from(self.order()).ok()
    }

    pub fn contains(&self, p: &Transformation) -> Result<bool> {
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: p.degree(),
                right: self.degree,
            });
        }
        if !p.is_permutation() {
            return Err(Error::NotAPermutation(p.to_string()));
        }
        Ok(self.chain().contains(p))
    }

    /// All elements; refuses when the order exceeds `cap`.
    pub fn elements(&self, cap: u64) -> Result<Vec<Transformation>> {
        let order = self.order();
        if order > BigUint::from(cap) {
            return Err(Error::TooLarge {
                what: "group order".into(),
                size: order.to_string(),
                cap,
            });
        }
        Ok(self.chain().elements())
    }

    /// Pointwise stabilizer of `point`.
    pub fn stabilizer(&self, point: usize) -> PermutationGroup {
        let chain = StabilizerChain::new(self.degree, &self.generators, &[point]);
        let gens = chain.stabilizer_generators(1);
        if gens.is_empty() {
            PermutationGroup::trivial(self.degree).expect("valid degree")
        } else {
            PermutationGroup::new(self.degree, gens).expect("stabilizer generators are permutations")
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(Transformation::is_identity)
    }

    /// One orbit on ordered pairs of distinct points.
    pub fn is_2_transitive(&self) -> bool {
        let n = self.degree;
        if n < 2 {
            return false;
        }
        let mut seen = vec![false; n * n];
        let mut stack = vec![(0usize, 1usize)];
        seen[1] = true;
        let mut count = 1;
        while let Some((x, y)) = stack.pop() {
            for g in &self.generators {
                let (gx, gy) = (g.apply(x), g.apply(y));
                if !seen[gx * n + gy] {
                    seen[gx * n + gy] = true;
                    count += 1;
                    stack.push((gx, gy));
                }
            }
        }
        count == n * (n - 1)
    }

    /// Orbits on unordered pairs `(v, w)`, `v < w`. Each orbit is sorted, and
    /// orbits are ordered by their least pair.
    pub fn pair_orbits(&self) -> Vec<Vec<(usize, usize)>> {
        let n = self.degree;
        let mut orbit_of = vec![usize::MAX; n * n];
        let mut orbits: Vec<Vec<(usize, usize)>> = Vec::new();
        for v in 0..n {
            for w in v + 1..n {
                if orbit_of[v * n + w] != usize::MAX {
                    continue;
                }
                let id = orbits.len();
                orbit_of[v * n + w] = id;
                let mut members = vec![(v, w)];
                let mut i = 0;
                while i < members.len() {
                    let (x, y) = members[i];
                    for g in &self.generators {
                        let (a, b) = (g.apply(x), g.apply(y));
                        let (a, b) = if a < b { (a, b) } else { (b, a) };
                        if orbit_of[a * n + b] == usize::MAX {
                            orbit_of[a * n + b] = id;
                            members.push((a, b));
                        }
                    }
                    i += 1;
                }
                members.sort_unstable();
                orbits.push(members);
            }
        }
        orbits
    }

    /// Orbit of a point set under the group, in breadth-first order, each
    /// with an element carrying `start` onto it. Fails if the orbit exceeds `cap`.
    pub fn set_orbit(&self, start: PointSet, cap: u64) -> Result<Vec<(PointSet, Transformation)>> {
        let mut index: FxHashMap<PointSet, ()> = FxHashMap::default();
        index.insert(start, ());
        let mut orbit = vec![(start, Transformation::identity(self.degree))];
        let mut i = 0;
        while i < orbit.len() {
            let (set, word) = orbit[i].clone();
            for g in &self.generators {
                let image = g.apply_set(set);
                if index.insert(image, ()).is_none() {
                    if orbit.len() as u64 >= cap {
                        return Err(Error::TooLarge {
                            what: "set orbit".into(),
                            size: format!(">{cap}"),
                            cap,
                        });
                    }
                    orbit.push((image, word.then(g)));
                }
            }
            i += 1;
        }
        Ok(orbit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str, n: usize) -> Transformation {
        Transformation::parse(s, Some(n)).unwrap()
    }

    fn group(n: usize, gens: &[&str]) -> PermutationGroup {
        PermutationGroup::new(n, gens.iter().map(|g| perm(g, n)).collect()).unwrap()
    }

    /// S3 wr S2 in product action on the 3x3 grid, point (i, j) = 3i + j.
    fn grid3() -> PermutationGroup {
        let idx = |i: usize, j: usize| 3 * i + j;
        let mut gens = Vec::new();
        for swap in [[1, 0, 2], [1, 2, 0]] {
            let mut images = vec![0; 9];
            for i in 0..3 {
                for j in 0..3 {
                    images[idx(i, j)] = idx(swap[i], j);
                }
            }
            gens.push(Transformation::new(images).unwrap());
        }
        let mut transpose = vec![0; 9];
        for i in 0..3 {
            for j in 0..3 {
                transpose[idx(i, j)] = idx(j, i);
            }
        }
        gens.push(Transformation::new(transpose).unwrap());
        PermutationGroup::new(9, gens).unwrap()
    }

    #[test]
    fn orbits_and_transitivity() {
        assert!(group(5, &["(1 2 3 4 5)"]).is_transitive());
        let g = group(3, &["(1 2)"]);
        assert!(!g.is_transitive());
        assert_eq!(g.orbits().to_string(), "{1,2|3}");
        assert!(grid3().is_transitive());
    }

    #[test]
    fn minimal_blocks() {
        let c4 = group(4, &["(1 2 3 4)"]);
        let block = c4.minimal_block(0, 2).unwrap();
        assert_eq!(block.to_string(), "{1,3}");
        let sys = BlockSystem::new(&c4, Partition::from_blocks(4, &[vec![0, 2], vec![1, 3]]).unwrap());
        assert!(sys.is_ok());
        let s5 = group(5, &["(1 2)", "(1 2 3 4 5)"]);
        for a in 0..5 {
            for b in 0..5 {
                if a != b {
                    assert_eq!(s5.minimal_block(a, b).unwrap(), PointSet::full(5));
                }
            }
        }
        let grid = grid3();
        for a in 0..9 {
            for b in 0..9 {
                if a != b {
                    assert_eq!(grid.minimal_block(a, b).unwrap(), PointSet::full(9));
                }
            }
        }
        assert_eq!(group(3, &["(1 2)"]).minimal_block(0, 1), Err(Error::Intransitive));
    }

    #[test]
    fn primitivity() {
        assert!(group(5, &["(1 2 3 4 5)"]).is_primitive());
        assert!(!group(4, &["(1 2 3 4)"]).is_primitive());
        assert!(grid3().is_primitive());
        assert!(!group(3, &["(1 2)"]).is_primitive());
    }

    #[test]
    fn block_systems_of_c6() {
        let c6 = group(6, &["(1 2 3 4 5 6)"]);
        let systems = c6.block_systems();
        let sizes: Vec<usize> = systems.iter().map(|s| s.block_size()).collect();
        assert_eq!(sizes, vec![2, 3]);
        assert_eq!(systems[0].partition().to_string(), "{1,4|2,5|3,6}");
        assert_eq!(systems[1].partition().to_string(), "{1,3,5|2,4,6}");
        assert!(group(5, &["(1 2 3 4 5)"]).block_systems().is_empty());
        // C8 has block sizes 2 and 4 only.
        let c8 = group(8, &["(1 2 3 4 5 6 7 8)"]);
        let sizes: Vec<usize> = c8.block_systems().iter().map(|s| s.block_size()).collect();
        assert_eq!(sizes, vec![2, 4]);
    }

    #[test]
    fn orders_and_membership() {
        let s3 = group(3, &["(1 2)", "(1 2 3)"]);
        assert_eq!(s3.order(), BigUint::from(6u32));
        assert!(s3.contains(&perm("(1 3)", 3)).unwrap());
        assert_eq!(grid3().order(), BigUint::from(72u32));
        let c4 = group(4, &["(1 2 3 4)"]);
        assert!(!c4.contains(&perm("(1 2)", 4)).unwrap());
        assert!(c4.contains(&perm("(1 3)(2 4)", 4)).unwrap());
        assert!(c4.contains(&Transformation::new(vec![0, 0, 1, 2]).unwrap()).is_err());
        let s10 = group(10, &["(1 2)", "(1 2 3 4 5 6 7 8 9 10)"]);
        assert_eq!(s10.order(), BigUint::from(3_628_800u32));
        assert!(matches!(s10.elements(1000), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn elements_enumerate_the_group() {
        let grid = grid3();
        let elements = grid.elements(1000).unwrap();
        assert_eq!(elements.len(), 72);
        let distinct: std::collections::HashSet<_> = elements.iter().collect();
        assert_eq!(distinct.len(), 72);
        assert!(elements.iter().all(|e| grid.contains(e).unwrap()));
        let product: usize = grid.chain_orbit_lengths().iter().product();
        assert_eq!(product, 72);
    }

    #[test]
    fn pair_orbits_and_2_transitivity() {
        let s4 = group(4, &["(1 2)", "(1 2 3 4)"]);
        assert!(s4.is_2_transitive());
        assert_eq!(s4.pair_orbits().len(), 1);
        let c5 = group(5, &["(1 2 3 4 5)"]);
        assert!(!c5.is_2_transitive());
        let orbits = c5.pair_orbits();
        assert_eq!(orbits.len(), 2);
        assert!(orbits[0].iter().all(|&(v, w)| (w - v) % 5 == 1 || (w - v) % 5 == 4));
        assert!(orbits[1].iter().all(|&(v, w)| (w - v) % 5 == 2 || (w - v) % 5 == 3));
        let grid = grid3();
        let orbits = grid.pair_orbits();
        assert_eq!(orbits.len(), 2);
        let same_line = |&(v, w): &(usize, usize)| v / 3 == w / 3 || v % 3 == w % 3;
        assert_eq!(orbits[0].len(), 18);
        assert!(orbits[0].iter().all(same_line));
        assert!(orbits[1].iter().all(|p| !same_line(p)));
    }

    #[test]
    fn stabilizers() {
        let s5 = group(5, &["(1 2)", "(1 2 3 4 5)"]);
        let h = s5.stabilizer(2);
        assert_eq!(h.order(), BigUint::from(24u32));
        assert!(h.generators().iter().all(|g| g.apply(2) == 2));
        let c5 = group(5, &["(1 2 3 4 5)"]);
        assert!(c5.stabilizer(0).is_trivial());
    }

    #[test]
    fn set_orbits_carry_transversal_elements() {
        let grid = grid3();
        let row: PointSet = [0, 1, 2].into_iter().collect();
        let orbit = grid.set_orbit(row, 100).unwrap();
        assert_eq!(orbit.len(), 6);
        for (set, g) in &orbit {
            assert_eq!(g.apply_set(row), *set);
        }
        assert!(grid.set_orbit(row, 3).is_err());
    }
}
