//! Stabilizer chains by the Schreier–Sims algorithm.
//!
//! The base is always a full ordering of the points (a caller-chosen prefix
//! followed by the remaining points in ascending order), so a residue that
//! survives every level is the identity and the base never needs extending.

use num_bigint::BigUint;
use rustc_hash::FxHashSet;

use crate::perm::Transformation;

#[derive(Debug, Clone)]
struct Level {
    base_point: usize,
    gens: Vec<Transformation>,
    orbit: Vec<usize>,
    /// `reps[b]` maps the base point to `b`.
    reps: Vec<Option<Transformation>>,
    rep_inverses: Vec<Option<Transformation>>,
    processed: FxHashSet<(u32, u32)>,
}

impl Level {
    fn new(degree: usize, base_point: usize) -> Self {
        let mut reps = vec![None; degree];
        let mut rep_inverses = vec![None; degree];
        reps[base_point] = Some(Transformation::identity(degree));
        rep_inverses[base_point] = Some(Transformation::identity(degree));
        Level {
            base_point,
            gens: Vec::new(),
            orbit: vec![base_point],
            reps,
            rep_inverses,
            processed: FxHashSet::default(),
        }
    }

    /// Grows the orbit with the current generators, keeping existing
    /// representatives so already-processed Schreier generators stay valid.
    fn extend_orbit(&mut self) {
        let mut i = 0;
        while i < self.orbit.len() {
            let b = self.orbit[i];
            for s in &self.gens {
                let c = s.apply(b);
                if self.reps[c].is_none() {
                    let rep = self.reps[b].as_ref().expect("orbit point has rep").then(s);
                    self.rep_inverses[c] = Some(rep.inverse().expect("permutation"));
                    self.reps[c] = Some(rep);
                    self.orbit.push(c);
                }
            }
            i += 1;
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    pub fn new(degree: usize, generators: &[Transformation], base_prefix: &[usize]) -> Self {
        let mut base: Vec<usize> = base_prefix.to_vec();
        for x in 0..degree {
            if !base_prefix.contains(&x) {
                base.push(x);
            }
        }
        let mut chain = StabilizerChain {
            degree,
            levels: base.iter().map(|&b| Level::new(degree, b)).collect(),
        };
        for g in generators.iter().filter(|g| !g.is_identity()) {
            let depth = chain.first_moved_level(g);
            for level in &mut chain.levels[..=depth] {
                level.gens.push(g.clone());
            }
        }
        for level in &mut chain.levels {
            level.extend_orbit();
        }
        chain.complete();
        chain
    }

    fn first_moved_level(&self, g: &Transformation) -> usize {
        self.levels
            .iter()
            .position(|l| g.apply(l.base_point) != l.base_point)
            .expect("non-identity permutation moves some base point")
    }

    /// Sifts `g` starting at `from`; returns the residue and the level where
    /// sifting stopped (`levels.len()` when it passed every level).
    fn sift(&self, mut g: Transformation, from: usize) -> (Transformation, usize) {
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let b = g.apply(level.base_point);
            match &level.rep_inverses[b] {
                None => return (g, i),
                Some(inv) => g = g.then(inv),
            }
        }
        (g, self.levels.len())
    }

    fn complete(&mut self) {
        let depth = self.levels.len();
        let mut i = depth as isize - 1;
        'outer: while i >= 0 {
            let li = i as usize;
            let mut pending = Vec::new();
            {
                let level = &self.levels[li];
                for &b in &level.orbit {
                    for (si, _) in level.gens.iter().enumerate() {
                        if !level.processed.contains(&(b as u32, si as u32)) {
                            pending.push((b, si));
                        }
                    }
                }
            }
            for (b, si) in pending {
                let level = &mut self.levels[li];
                level.processed.insert((b as u32, si as u32));
                let s = &level.gens[si];
                let c = s.apply(b);
                let y = level.reps[b]
                    .as_ref()
                    .expect("rep")
                    .then(s)
                    .then(level.rep_inverses[c].as_ref().expect("rep"));
                if y.is_identity() {
                    continue;
                }
                let (h, j) = self.sift(y, li + 1);
                if j < depth {
                    for level in &mut self.levels[li + 1..=j] {
                        level.gens.push(h.clone());
                        level.extend_orbit();
                    }
                    i = j as isize;
                    continue 'outer;
                }
            }
            i -= 1;
        }
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn contains(&self, p: &Transformation) -> bool {
        let (residue, j) = self.sift(p.clone(), 0);
        j == self.levels.len() && residue.is_identity()
    }

    /// Strong generators of the pointwise stabilizer of the first `k` base points.
    pub fn stabilizer_generators(&self, k: usize) -> Vec<Transformation> {
        self.levels
            .get(k)
            .map(|l| l.gens.clone())
            .unwrap_or_default()
    }

    /// Every element, each exactly once, in a deterministic order.
    pub fn elements(&self) -> Vec<Transformation> {
        let mut elements = vec![Transformation::identity(self.degree)];
        for level in self.levels.iter().rev() {
            if level.orbit.len() == 1 {
                continue;
            }
            let mut next = Vec::with_capacity(elements.len() * level.orbit.len());
            for e in &elements {
                for &b in &level.orbit {
                    next.push(e.then(level.reps[b].as_ref().expect("rep")));
                }
            }
            elements = next;
        }
        elements
    }
}
