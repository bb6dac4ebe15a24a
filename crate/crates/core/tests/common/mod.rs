//! Brute-force oracles used only by tests. Each works on plain image
//! vectors so it shares no search code with the library.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use synchrolab::{PermutationGroup, Transformation};

pub fn letters(group: &PermutationGroup, f: &Transformation) -> Vec<Vec<usize>> {
    group
        .generators()
        .iter()
        .chain(std::iter::once(f))
        .map(|t| t.images().collect())
        .collect()
}

fn image(set: u64, letter: &[usize]) -> u64 {
    let mut out = 0u64;
    let mut s = set;
    while s != 0 {
        let x = s.trailing_zeros() as usize;
        out |= 1 << letter[x];
        s &= s - 1;
    }
    out
}

/// Every image set `Ω w` over nonempty words `w`.
pub fn reachable_image_sets(n: usize, letters: &[Vec<usize>]) -> HashSet<u64> {
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    for l in letters {
        let s = image(full, l);
        if seen.insert(s) {
            queue.push_back(s);
        }
    }
    while let Some(s) = queue.pop_front() {
        for l in letters {
            let t = image(s, l);
            if seen.insert(t) {
                queue.push_back(t);
            }
        }
    }
    seen
}

/// Minimum rank of the generated semigroup, from image sets alone.
pub fn min_rank_by_image_sets(n: usize, letters: &[Vec<usize>]) -> usize {
    reachable_image_sets(n, letters)
        .into_iter()
        .map(|s| s.count_ones() as usize)
        .min()
        .expect("at least one letter")
}

/// Length of a shortest word taking Ω to a single point, by BFS over
/// subsets. `None` when no such word exists.
pub fn shortest_word_length(n: usize, letters: &[Vec<usize>]) -> Option<usize> {
    let full = (1u64 << n) - 1;
    if n == 1 {
        return Some(0);
    }
    let mut dist = std::collections::HashMap::new();
    dist.insert(full, 0usize);
    let mut queue = VecDeque::from([full]);
    while let Some(s) = queue.pop_front() {
        let d = dist[&s];
        for l in letters {
            let t = image(s, l);
            if let std::collections::hash_map::Entry::Vacant(slot) = dist.entry(t) {
                if t.count_ones() == 1 {
                    return Some(d + 1);
                }
                slot.insert(d + 1);
                queue.push_back(t);
            }
        }
    }
    None
}

/// Pairs `v < w` that some word sends to one point, by forward search from
/// each pair separately.
pub fn forward_collapsible(n: usize, letters: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for v in 0..n {
        for w in v + 1..n {
            let mut seen = HashSet::from([(v, w)]);
            let mut queue = VecDeque::from([(v, w)]);
            let mut hit = false;
            'search: while let Some((a, b)) = queue.pop_front() {
                for l in letters {
                    let (x, y) = (l[a], l[b]);
                    if x == y {
                        hit = true;
                        break 'search;
                    }
                    let p = (x.min(y), x.max(y));
                    if seen.insert(p) {
                        queue.push_back(p);
                    }
                }
            }
            if hit {
                out.push((v, w));
            }
        }
    }
    out
}

/// The complement of the collapsible pairs: the edges of `Gr`.
pub fn forward_gr_edges(n: usize, letters: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let collapsible: HashSet<_> = forward_collapsible(n, letters).into_iter().collect();
    let mut out = Vec::new();
    for v in 0..n {
        for w in v + 1..n {
            if !collapsible.contains(&(v, w)) {
                out.push((v, w));
            }
        }
    }
    out
}

/// Applies the letters of a word (indices into `letters`) to every point.
pub fn evaluate_word(n: usize, letters: &[Vec<usize>], word: &[usize]) -> Vec<usize> {
    (0..n).map(|x| word.iter().fold(x, |y, &l| letters[l][y])).collect()
}

/// Brute-force closure over image vectors, `None` beyond `cap` elements.
pub fn closure_vectors(letters: &[Vec<usize>], cap: usize) -> Option<HashSet<Vec<usize>>> {
    let mut seen: HashSet<Vec<usize>> = letters.iter().cloned().collect();
    let mut queue: VecDeque<Vec<usize>> = seen.iter().cloned().collect();
    while let Some(t) = queue.pop_front() {
        for l in letters {
            let u: Vec<usize> = t.iter().map(|&x| l[x]).collect();
            if !seen.contains(&u) {
                if seen.len() >= cap {
                    return None;
                }
                seen.insert(u.clone());
                queue.push_back(u);
            }
        }
    }
    Some(seen)
}

pub fn rank_of(v: &[usize]) -> usize {
    v.iter().collect::<HashSet<_>>().len()
}
