//! Pair-collapse analysis of `⟨G, f⟩`: the synchronization verdict, the graph
//! `Gr(S)` and greedy synchronizing words.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::group::PermutationGroup;
use crate::perm::{PointSet, Transformation};

/// A letter of the alphabet `{g1, .., gk, f}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    /// The `i`-th generator of the group (0-based; shown as `g{i+1}`).
    Generator(usize),
    Map,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Generator(i) => write!(f, "g{}", i + 1),
            Letter::Map => f.write_str("f"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// The composite map, letters applied left to right.
    pub fn evaluate(&self, group: &PermutationGroup, f: &Transformation) -> Transformation {
        let mut t = Transformation::identity(f.degree());
        for &letter in &self.0 {
            t = t.then(match letter {
                Letter::Generator(i) => &group.generators()[i],
                Letter::Map => f,
            });
        }
        t
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("(empty)");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

const UNSET: u32 = u32::MAX;
const SINGLE: u32 = u32::MAX - 1;

/// Preimage lists of one letter in compressed form.
#[derive(Debug, Clone)]
struct Preimages {
    start: Vec<u16>,
    points: Vec<u8>,
}

impl Preimages {
    fn of(t: &Transformation) -> Preimages {
        let n = t.degree();
        let mut start = vec![0u16; n + 1];
        for y in t.images() {
            start[y + 1] += 1;
        }
        for y in 0..n {
            start[y + 1] += start[y];
        }
        let mut fill = start.clone();
        let mut points = vec![0u8; n];
        for (x, y) in t.images().enumerate() {
            points[fill[y] as usize] = x as u8;
            fill[y] += 1;
        }
        Preimages { start, points }
    }

    #[inline]
    fn of_point(&self, y: usize) -> &[u8] {
        &self.points[self.start[y] as usize..self.start[y + 1] as usize]
    }
}

/// Which unordered pairs some word over the letters collapses, with a shortest
/// collapsing word for each.
///
/// Pair `{v, w}` with `v < w` lives at index `v * n + w`.
#[derive(Debug, Clone)]
pub struct PairCollapseAutomaton {
    degree: usize,
    letters: Vec<Transformation>,
    /// Length of a shortest collapsing word, or `UNSET`.
    distance: Vec<u32>,
    /// First letter of that word and the pair it leads to (`SINGLE` once collapsed).
    step: Vec<(u32, u32)>,
    collapsible_count: usize,
}

impl PairCollapseAutomaton {
    /// Backward breadth-first search from the pairs that a single letter
    /// collapses, through preimages of every letter.
    pub fn from_letters(degree: usize, letters: &[Transformation]) -> Result<PairCollapseAutomaton> {
        for t in letters {
            if t.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: t.degree(),
                    right: degree,
                });
            }
        }
        let n = degree;
        let pre: Vec<Preimages> = letters.iter().map(Preimages::of).collect();
        let mut distance = vec![UNSET; n * n];
        let mut step = vec![(UNSET, UNSET); n * n];
        let mut queue: Vec<u32> = Vec::new();
        for (a, p) in pre.iter().enumerate() {
            for y in 0..n {
                let class = p.of_point(y);
                for (i, &v) in class.iter().enumerate() {
                    for &w in &class[i + 1..] {
                        let idx = pair_index(n, v as usize, w as usize);
                        if distance[idx] == UNSET {
                            distance[idx] = 1;
                            step[idx] = (a as u32, SINGLE);
                            queue.push(idx as u32);
                        }
                    }
                }
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let idx = queue[head] as usize;
            head += 1;
            let (y, z) = (idx / n, idx % n);
            let d = distance[idx] + 1;
            for (a, p) in pre.iter().enumerate() {
                for &v in p.of_point(y) {
                    for &w in p.of_point(z) {
                        let j = pair_index(n, v as usize, w as usize);
                        if distance[j] == UNSET {
                            distance[j] = d;
                            step[j] = (a as u32, idx as u32);
                            queue.push(j as u32);
                        }
                    }
                }
            }
        }
        Ok(PairCollapseAutomaton {
            degree,
            letters: letters.to_vec(),
            distance,
            step,
            collapsible_count: queue.len(),
        })
    }

    /// Letters are the generators of `group` followed by `f`.
    pub fn new(group: &PermutationGroup, f: &Transformation) -> Result<PairCollapseAutomaton> {
        let mut letters = group.generators().to_vec();
        letters.push(f.clone());
        PairCollapseAutomaton::from_letters(group.degree(), &letters)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_collapsible(&self, v: usize, w: usize) -> bool {
        v != w && self.distance[pair_index(self.degree, v, w)] != UNSET
    }

    pub fn collapsible_count(&self) -> usize {
        self.collapsible_count
    }

    /// Unordered pairs `(v, w)`, `v < w`, in lexicographic order.
    pub fn collapsible(&self) -> Vec<(usize, usize)> {
        let n = self.degree;
        (0..n)
            .flat_map(|v| (v + 1..n).map(move |w| (v, w)))
            .filter(|&(v, w)| self.is_collapsible(v, w))
            .collect()
    }

    /// Every pair collapses.
    pub fn is_complete(&self) -> bool {
        let n = self.degree;
        self.collapsible_count == n * n.saturating_sub(1) / 2
    }

    /// The complement of the collapsible relation.
    pub fn gr(&self) -> Graph {
        let n = self.degree;
        let mut g = Graph::null(n);
        for v in 0..n {
            for w in v + 1..n {
                if !self.is_collapsible(v, w) {
                    g.add_edge(v, w);
                }
            }
        }
        g
    }

    /// A shortest word collapsing `{v, w}`, as letter indices.
    pub fn collapsing_word(&self, v: usize, w: usize) -> Option<Vec<usize>> {
        if !self.is_collapsible(v, w) {
            return None;
        }
        let mut idx = pair_index(self.degree, v, w) as u32;
        let mut out = Vec::with_capacity(self.distance[idx as usize] as usize);
        loop {
            let (a, next) = self.step[idx as usize];
            out.push(a as usize);
            if next == SINGLE {
                return Some(out);
            }
            idx = next;
        }
    }

    /// Greedy reduction of the whole point set: repeatedly collapse the
    /// lexicographically least pair of the current image. `None` when some
    /// pair in the way is not collapsible.
    pub fn greedy_word(&self) -> Option<Vec<usize>> {
        let mut image = PointSet::full(self.degree);
        let mut word = Vec::new();
        while image.len() > 1 {
            let mut it = image.iter();
            let v = it.next().expect("two points");
            let w = it.next().expect("two points");
            let piece = self.collapsing_word(v, w)?;
            for &a in &piece {
                image = self.letters[a].apply_set(image);
            }
            word.extend(piece);
        }
        Some(word)
    }
}

#[inline]
fn pair_index(n: usize, v: usize, w: usize) -> usize {
    if v < w {
        v * n + w
    } else {
        w * n + v
    }
}

fn check_degrees(group: &PermutationGroup, f: &Transformation) -> Result<()> {
    if group.degree() != f.degree() {
        return Err(Error::DegreeMismatch {
            left: group.degree(),
            right: f.degree(),
        });
    }
    Ok(())
}

fn to_word(group: &PermutationGroup, indices: &[usize]) -> Word {
    let k = group.generators().len();
    Word(
        indices
            .iter()
            .map(|&a| if a < k { Letter::Generator(a) } else { Letter::Map })
            .collect(),
    )
}

/// Collapsible pairs of `⟨G, f⟩`.
pub fn collapsible_pairs(group: &PermutationGroup, f: &Transformation) -> Result<PairCollapseAutomaton> {
    check_degrees(group, f)?;
    PairCollapseAutomaton::new(group, f)
}

#[derive(Debug, Clone)]
pub struct SyncVerdict {
    pub synchronizes: bool,
    pub witness_word: Option<Word>,
    pub gr: Graph,
    /// Clique number of `gr`, which is the minimum rank in `⟨G, f⟩`.
    pub min_rank_bound: usize,
    /// `f` was a permutation, so `⟨G, f⟩` is a group.
    pub permutation_input: bool,
}

pub fn synchronizes(group: &PermutationGroup, f: &Transformation) -> Result<SyncVerdict> {
    let automaton = collapsible_pairs(group, f)?;
    let gr = automaton.gr();
    let synchronizes = automaton.is_complete();
    let witness_word = if synchronizes {
        let indices = automaton
            .greedy_word()
            .ok_or_else(|| Error::TheoremViolation("greedy reduction stalled on a complete collapse relation".into()))?;
        let word = to_word(group, &indices);
        let composite = word.evaluate(group, f);
        if composite.rank() != 1 {
            return Err(Error::TheoremViolation(format!(
                "witness word {word} composes to {composite}, not a constant"
            )));
        }
        Some(word)
    } else {
        None
    };
    Ok(SyncVerdict {
        synchronizes,
        witness_word,
        min_rank_bound: gr.clique_number(),
        gr,
        permutation_input: f.is_permutation(),
    })
}

/// The fast yes/no decision without building the graph.
pub fn is_synchronized(group: &PermutationGroup, f: &Transformation) -> Result<bool> {
    Ok(collapsible_pairs(group, f)?.is_complete())
}

pub fn gr_graph(group: &PermutationGroup, f: &Transformation) -> Result<Graph> {
    Ok(collapsible_pairs(group, f)?.gr())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyncWord {
    pub word: Word,
    pub length: usize,
    /// `(n - 1)^2`.
    pub cerny_bound: usize,
    /// `length / cerny_bound` (0 when the bound is 0).
    pub ratio: f64,
}

pub fn synchronizing_word(group: &PermutationGroup, f: &Transformation) -> Result<SyncWord> {
    let verdict = synchronizes(group, f)?;
    let word = verdict.witness_word.ok_or(Error::NotSynchronizing)?;
    let n = f.degree();
    let cerny_bound = (n - 1) * (n - 1);
    let length = word.len();
    Ok(SyncWord {
        word,
        length,
        cerny_bound,
        ratio: if cerny_bound == 0 {
            0.0
        } else {
            length as f64 / cerny_bound as f64
        },
    })
}

/// Clique number of `Gr(⟨G, f⟩)`, checked against its chromatic number.
pub fn min_rank_via_graph(group: &PermutationGroup, f: &Transformation) -> Result<usize> {
    let gr = gr_graph(group, f)?;
    let clique = gr.clique_number();
    let chromatic = gr.chromatic_number();
    if clique != chromatic {
        return Err(Error::TheoremViolation(format!(
            "Gr has clique number {clique} but chromatic number {chromatic}"
        )));
    }
    Ok(clique)
}
