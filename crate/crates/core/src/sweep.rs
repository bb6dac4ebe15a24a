//! Enumerating maps up to the equivalence `f ~ g1 f g2` (`g1, g2 ∈ G`).
//!
//! `⟨G, f⟩ = ⟨G, g1 f g2⟩`: the right side lies in the left, and
//! `f = g1⁻¹ (g1 f g2) g2⁻¹`. The kernel of `g1 f` is the kernel of `f` moved
//! by `g1⁻¹`, and the image tuple of `f g2` is that of `f` moved by `g2`. So
//! one kernel per `G`-orbit of partitions, combined with one injective image
//! tuple per `G`-orbit of tuples, meets every class. The two reductions are
//! independent, so a class may be met more than once, but never missed.

use std::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use crate::group::PermutationGroup;
use crate::perm::{KernelType, Partition, PointSet, Transformation};

/// Every partition of `{0, .., n-1}` with kernel type `kt`, in a fixed order.
pub fn partitions_of_type(kt: &KernelType) -> Vec<Partition> {
    let n = kt.degree();
    let mut out = Vec::new();
    let mut sizes: Vec<usize> = kt.sizes().to_vec();
    let mut labels = vec![u8::MAX; n];
    fn go(
        free: PointSet,
        sizes: &mut Vec<usize>,
        next_label: u8,
        labels: &mut Vec<u8>,
        out: &mut Vec<Partition>,
    ) {
        let Some(x) = free.first() else {
            out.push(Partition::from_key(labels));
            return;
        };
        let rest = free.difference(PointSet::singleton(x));
        let mut tried = Vec::new();
        for i in 0..sizes.len() {
            let s = sizes[i];
            if tried.contains(&s) {
                continue;
            }
            tried.push(s);
            sizes.remove(i);
            labels[x] = next_label;
            for_each_subset(rest, s - 1, &mut |chosen: PointSet| {
                for y in chosen.iter() {
                    labels[y] = next_label;
                }
                go(rest.difference(chosen), sizes, next_label + 1, labels, out);
            });
            sizes.insert(i, s);
        }
    }
    go(PointSet::full(n), &mut sizes, 0, &mut labels, &mut out);
    out
}

/// Calls `visit` on every `k`-subset of `set`, in a fixed recursive order.
pub fn for_each_subset(set: PointSet, k: usize, visit: &mut dyn FnMut(PointSet)) {
    fn go(points: &[usize], k: usize, acc: PointSet, visit: &mut dyn FnMut(PointSet)) {
        if k == 0 {
            visit(acc);
            return;
        }
        if points.len() < k {
            return;
        }
        let mut with = acc;
        with.insert(points[0]);
        go(&points[1..], k - 1, with, visit);
        go(&points[1..], k, acc, visit);
    }
    let points: Vec<usize> = set.iter().collect();
    go(&points, k, PointSet::EMPTY, visit);
}

/// One partition per `G`-orbit on partitions of type `kt`: the first member
/// of each orbit in the order of [`partitions_of_type`].
pub fn kernel_orbit_representatives(group: &PermutationGroup, kt: &KernelType) -> Vec<Partition> {
    let all = partitions_of_type(kt);
    let index: FxHashMap<&[u8], usize> = all.iter().enumerate().map(|(i, p)| (p.labels(), i)).collect();
    let mut seen = vec![false; all.len()];
    let mut reps = Vec::new();
    for start in 0..all.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        reps.push(all[start].clone());
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for g in group.generators() {
                let image = all[i].image_under(g);
                let j = index[image.labels()];
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    reps
}

/// One injective `r`-tuple per orbit of `G` acting on tuples pointwise.
/// Each coordinate is an orbit representative of the stabilizer of the
/// earlier coordinates; once that stabilizer is trivial the rest is free.
pub fn for_each_tuple_representative(
    group: &PermutationGroup,
    r: usize,
    visit: &mut dyn FnMut(&[u8]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let n = group.degree();
    assert!(r <= n, "tuple longer than the degree");
    let mut tuple = Vec::with_capacity(r);
    tuple_step(group, n, r, PointSet::EMPTY, &mut tuple, visit)
}

fn tuple_step(
    group: &PermutationGroup,
    n: usize,
    r: usize,
    used: PointSet,
    tuple: &mut Vec<u8>,
    visit: &mut dyn FnMut(&[u8]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if tuple.len() == r {
        return visit(tuple);
    }
    if group.is_trivial() {
        return free_completion(n, r, used, tuple, visit);
    }
    let free = PointSet::full(n).difference(used);
    let reps: Vec<usize> = group
        .orbits()
        .blocks()
        .iter()
        .filter_map(|b| b.intersection(free).first())
        .collect();
    for x in reps {
        let stabilizer = group.stabilizer(x);
        tuple.push(x as u8);
        let flow = tuple_step(&stabilizer, n, r, used.union(PointSet::singleton(x)), tuple, visit);
        tuple.pop();
        flow?;
    }
    ControlFlow::Continue(())
}

fn free_completion(
    n: usize,
    r: usize,
    used: PointSet,
    tuple: &mut Vec<u8>,
    visit: &mut dyn FnMut(&[u8]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if tuple.len() == r {
        return visit(tuple);
    }
    for x in PointSet::full(n).difference(used).iter() {
        tuple.push(x as u8);
        let flow = free_completion(n, r, used.union(PointSet::singleton(x)), tuple, visit);
        tuple.pop();
        flow?;
    }
    ControlFlow::Continue(())
}

/// `x ↦ tuple[block index of x]`.
pub fn map_from_kernel_and_tuple(kernel: &Partition, tuple: &[u8]) -> Transformation {
    assert_eq!(kernel.len(), tuple.len(), "one image per block");
    Transformation::from_raw(kernel.labels().iter().map(|&b| tuple[b as usize]).collect())
}

/// Visits one map per class of `f ~ g1 f g2` with kernel type `kt`
/// (possibly some classes more than once).
pub fn for_each_map_representative(
    group: &PermutationGroup,
    kt: &KernelType,
    visit: &mut dyn FnMut(&Transformation) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let kernels = kernel_orbit_representatives(group, kt);
    for kernel in &kernels {
        for_each_tuple_representative(group, kt.rank(), &mut |tuple| {
            visit(&map_from_kernel_and_tuple(kernel, tuple))
        })?;
    }
    ControlFlow::Continue(())
}

/// Idempotents with kernel `kernel`: each block sent to one of its own points.
pub fn idempotents_with_kernel(kernel: &Partition) -> Vec<Transformation> {
    let mut out = Vec::new();
    let blocks = kernel.blocks();
    let mut tuple = vec![0u8; blocks.len()];
    fn go(blocks: &[PointSet], i: usize, tuple: &mut Vec<u8>, kernel: &Partition, out: &mut Vec<Transformation>) {
        if i == blocks.len() {
            out.push(map_from_kernel_and_tuple(kernel, tuple));
            return;
        }
        for x in blocks[i].iter() {
            tuple[i] = x as u8;
            go(blocks, i + 1, tuple, kernel, out);
        }
    }
    go(blocks, 0, &mut tuple, kernel, &mut out);
    out
}

/// Uniformly random maps from a seeded generator.
pub fn random_maps(degree: usize, count: usize, seed: u64) -> Vec<Transformation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| Transformation::from_raw((0..degree).map(|_| rng.gen_range(0..degree) as u8).collect()))
        .collect()
}

/// Random maps of rank at least `min_rank`: a random partition into `rank`
/// blocks, then a random injective image tuple.
pub fn random_maps_of_rank_at_least(degree: usize, min_rank: usize, count: usize, seed: u64) -> Vec<Transformation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let min_rank = min_rank.clamp(1, degree);
    (0..count)
        .map(|_| {
            let rank = rng.gen_range(min_rank..=degree);
            // Every block gets one point; the rest land anywhere.
            let mut order: Vec<usize> = (0..degree).collect();
            for i in (1..degree).rev() {
                order.swap(i, rng.gen_range(0..=i));
            }
            let mut labels = vec![0usize; degree];
            for (i, &x) in order.iter().enumerate() {
                labels[x] = if i < rank { i } else { rng.gen_range(0..rank) };
            }
            let mut images: Vec<usize> = (0..degree).collect();
            for i in (1..degree).rev() {
                images.swap(i, rng.gen_range(0..=i));
            }
            Transformation::from_raw(labels.iter().map(|&b| images[b] as u8).collect())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(n: usize, gens: &[&str]) -> PermutationGroup {
        PermutationGroup::new(n, gens.iter().map(|g| Transformation::parse(g, Some(n)).unwrap()).collect()).unwrap()
    }

    fn binomial(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn partition_counts() {
        let kt = |s: &str| s.parse::<KernelType>().unwrap();
        assert_eq!(partitions_of_type(&kt("3,3,3")).len(), 280);
        assert_eq!(partitions_of_type(&kt("2,1,1,1")).len(), 10);
        assert_eq!(partitions_of_type(&kt("2,2,1")).len(), 15);
        assert_eq!(partitions_of_type(&kt("1,1,1")).len(), 1);
        assert_eq!(partitions_of_type(&kt("3,2,1,1")).len() as u64, binomial(7, 3) * binomial(4, 2));
        for p in partitions_of_type(&kt("3,2,2,1")) {
            assert_eq!(p.kernel_type(), kt("3,2,2,1"));
        }
    }

    #[test]
    fn subsets() {
        let mut c = 0;
        for_each_subset(PointSet::full(6), 3, &mut |s| {
            assert_eq!(s.len(), 3);
            c += 1;
        });
        assert_eq!(c, 20);
    }

    #[test]
    fn kernel_representatives() {
        let s5 = group(5, &["(1 2)", "(1 2 3 4 5)"]);
        for kt in ["2,1,1,1", "2,2,1", "3,2"] {
            assert_eq!(kernel_orbit_representatives(&s5, &kt.parse().unwrap()).len(), 1);
        }
        assert_eq!(kernel_orbit_representatives(&s5, &"1,1,1,1,1".parse().unwrap()).len(), 1);
        let c5 = group(5, &["(1 2 3 4 5)"]);
        assert_eq!(kernel_orbit_representatives(&c5, &"2,1,1,1".parse().unwrap()).len(), 2);
        let grid = group(9, &["(1 4)(2 5)(3 6)", "(1 4 7)(2 5 8)(3 6 9)", "(2 4)(3 7)(6 8)"]);
        let reps = kernel_orbit_representatives(&grid, &"3,3,3".parse().unwrap());
        let rows = Partition::from_blocks(9, &[vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]]).unwrap();
        // The rows and columns form one orbit; find its representative.
        let row_orbit_rep = reps.iter().any(|p| {
            grid.elements(100).unwrap().iter().any(|g| p.image_under(g) == rows)
        });
        assert!(row_orbit_rep);
        assert!(reps.len() > 1);
    }

    #[test]
    fn tuple_representatives_count_orbits() {
        // n!/(n-r)! tuples, and a group acting freely on them divides that.
        let c5 = group(5, &["(1 2 3 4 5)"]);
        let mut c = 0;
        let _ = for_each_tuple_representative(&c5, 3, &mut |_| {
            c += 1;
            ControlFlow::Continue(())
        });
        assert_eq!(c, 60 / 5);
        let s4 = group(4, &["(1 2)", "(1 2 3 4)"]);
        let mut c = 0;
        let _ = for_each_tuple_representative(&s4, 4, &mut |t| {
            assert_eq!(t, &[0, 1, 2, 3]);
            c += 1;
            ControlFlow::Continue(())
        });
        assert_eq!(c, 1);
        let triv = PermutationGroup::trivial(3).unwrap();
        let mut c = 0;
        let _ = for_each_tuple_representative(&triv, 2, &mut |_| {
            c += 1;
            ControlFlow::Continue(())
        });
        assert_eq!(c, 6);
    }

    #[test]
    fn maps_from_kernels() {
        let k = Partition::from_labels(&[0, 0, 1, 2]).unwrap();
        assert_eq!(map_from_kernel_and_tuple(&k, &[3, 0, 1]).to_string(), "[4,4,1,2]");
        let ids = idempotents_with_kernel(&k);
        assert_eq!(ids.len(), 2);
        assert!(ids.iter().all(|e| e.is_idempotent() && e.kernel() == k));
    }

    #[test]
    fn random_maps_are_seeded() {
        assert_eq!(random_maps(6, 5, 1), random_maps(6, 5, 1));
        assert_ne!(random_maps(6, 5, 1), random_maps(6, 5, 2));
        for f in random_maps_of_rank_at_least(8, 6, 50, 3) {
            assert!(f.rank() >= 6);
        }
    }
}
