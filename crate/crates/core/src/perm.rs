//! Transformations of a finite point set and their rank/kernel calculus.
//!
//! Points are `0..n` internally and `1..=n` in every textual form. Maps act
//! on the right: `x(fg) = (xf)g`, so [`Transformation::then`] applies `self`
//! first and its argument second.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::MAX_DEGREE;

/// A set of points, one bit per point.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet(u64);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn from_bits(bits: u64) -> Self {
        PointSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= 64);
        if n == 64 {
            PointSet(u64::MAX)
        } else {
            PointSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(x: usize) -> Self {
        PointSet(1u64 << x)
    }

    pub fn contains(self, x: usize) -> bool {
        x < 64 && self.0 >> x & 1 == 1
    }

    pub fn insert(&mut self, x: usize) {
        self.0 |= 1u64 << x;
    }

    pub fn remove(&mut self, x: usize) {
        self.0 &= !(1u64 << x);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn union(self, other: PointSet) -> PointSet {
        PointSet(self.0 | other.0)
    }

    pub fn intersection(self, other: PointSet) -> PointSet {
        PointSet(self.0 & other.0)
    }

    pub fn difference(self, other: PointSet) -> PointSet {
        PointSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: PointSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> PointSetIter {
        PointSetIter(self.0)
    }
}

pub struct PointSetIter(u64);

impl Iterator for PointSetIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let x = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(x)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for PointSetIter {}

impl IntoIterator for PointSet {
    type Item = usize;
    type IntoIter = PointSetIter;

    fn into_iter(self) -> PointSetIter {
        self.iter()
    }
}

impl FromIterator<usize> for PointSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = PointSet::EMPTY;
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// 1-based, e.g. `{1,3}`.
impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", x + 1)?;
        }
        f.write_str("}")
    }
}

fn check_degree(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DEGREE {
        Err(Error::UnsupportedDegree(n))
    } else {
        Ok(())
    }
}

/// A total map on `{0, .., n-1}` stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transformation {
    images: Vec<u8>,
}

impl Transformation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        check_degree(n)?;
        let mut packed = Vec::with_capacity(n);
        for (point, &image) in images.iter().enumerate() {
            if image >= n {
                return Err(Error::ImageOutOfRange {
                    point,
                    image,
                    degree: n,
                });
            }
            packed.push(image as u8);
        }
        Ok(Transformation { images: packed })
    }

    /// Caller guarantees every entry is `< images.len()`.
    pub(crate) fn from_raw(images: Vec<u8>) -> Self {
        debug_assert!(images.iter().all(|&y| (y as usize) < images.len()));
        Transformation { images }
    }

    pub fn identity(n: usize) -> Self {
        Transformation {
            images: (0..n as u8).collect(),
        }
    }

    pub fn constant(n: usize, c: usize) -> Self {
        assert!(c < n, "constant value out of range");
        Transformation {
            images: vec![c as u8; n],
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.images
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|&y| y as usize)
    }

    /// `self` then `g`, i.e. `x ↦ (x self) g`.
    pub fn compose(&self, g: &Transformation) -> Result<Transformation> {
        if self.degree() != g.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: g.degree(),
            });
        }
        Ok(self.then(g))
    }

    /// Unchecked form of [`compose`](Self::compose); panics on a degree mismatch.
    #[inline]
    pub fn then(&self, g: &Transformation) -> Transformation {
        assert_eq!(self.degree(), g.degree(), "degree mismatch in composition");
        Transformation {
            images: self.images.iter().map(|&y| g.images[y as usize]).collect(),
        }
    }

    pub fn image_set(&self) -> PointSet {
        self.images.iter().map(|&y| y as usize).collect()
    }

    /// Image of a set of points.
    pub fn apply_set(&self, set: PointSet) -> PointSet {
        set.iter().map(|x| self.apply(x)).collect()
    }

    pub fn rank(&self) -> usize {
        self.image_set().len()
    }

    pub fn kernel(&self) -> Partition {
        Partition::from_key(&self.images)
    }

    pub fn kernel_type(&self) -> KernelType {
        self.kernel().kernel_type()
    }

    pub fn is_uniform(&self) -> bool {
        self.kernel().is_uniform()
    }

    pub fn is_permutation(&self) -> bool {
        self.rank() == self.degree()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x == y as usize)
    }

    pub fn is_constant(&self) -> bool {
        self.images.iter().all(|&y| y == self.images[0])
    }

    pub fn is_idempotent(&self) -> bool {
        self.images
            .iter()
            .all(|&y| self.images[y as usize] == y)
    }

    pub fn inverse(&self) -> Result<Transformation> {
        if !self.is_permutation() {
            return Err(Error::NotAPermutation(self.to_string()));
        }
        let mut inv = vec![0u8; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y as usize] = x as u8;
        }
        Ok(Transformation { images: inv })
    }

    /// `self^k` for `k ≥ 1`, by repeated squaring.
    pub fn power(&self, k: u64) -> Transformation {
        assert!(k >= 1, "power exponent must be positive");
        let mut result: Option<Transformation> = None;
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.then(&base),
                });
            }
            k >>= 1;
            if k > 0 {
                base = base.then(&base);
            }
        }
        result.expect("k >= 1")
    }

    /// Index `m` and period `p` of the cyclic semigroup `⟨f⟩`: the least
    /// `m ≥ 1` and `p ≥ 1` with `f^m = f^(m+p)`.
    pub fn index_and_period(&self) -> (u64, u64) {
        let n = self.degree();
        // The eventual range is the image of f^n; f permutes it.
        let stable = self.power(n as u64).image_set();
        let mut period = 1u64;
        let mut seen = PointSet::EMPTY;
        for start in stable.iter() {
            if seen.contains(start) {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            loop {
                seen.insert(x);
                len += 1;
                x = self.apply(x);
                if x == start {
                    break;
                }
            }
            period = lcm(period, len);
        }
        let mut index = 1u64;
        let mut current = self.clone();
        while current.rank() != stable.len() {
            current = current.then(self);
            index += 1;
        }
        (index, period)
    }

    /// The idempotent of `⟨f⟩`: `f^k` for the least `k ≥ 1` making it idempotent.
    pub fn idempotent_power(&self) -> (Transformation, u64) {
        let (index, period) = self.index_and_period();
        let k = index.div_ceil(period) * period;
        (self.power(k), k)
    }

    /// Parses `[i1,...,in]` (1-based images) or cycle notation such as
    /// `(1 2 3)(4 5)`. Cycle notation needs `degree` unless the largest
    /// mentioned point is the degree.
    pub fn parse(text: &str, degree: Option<usize>) -> Result<Transformation> {
        let text = text.trim();
        let t = if text.starts_with('[') {
            parse_image_list(text)?
        } else if text.starts_with('(') {
            parse_cycles(text, degree)?
        } else {
            return Err(Error::Parse(format!(
                "expected `[...]` or cycle notation, got {text:?}"
            )));
        };
        if let Some(n) = degree {
            if n != t.degree() {
                return Err(Error::DegreeMismatch {
                    left: t.degree(),
                    right: n,
                });
            }
        }
        Ok(t)
    }

    /// Disjoint-cycle notation, 1-based; `()` for the identity.
    pub fn cycle_string(&self) -> Result<String> {
        if !self.is_permutation() {
            return Err(Error::NotAPermutation(self.to_string()));
        }
        let mut out = String::new();
        let mut seen = vec![false; self.degree()];
        for start in 0..self.degree() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            out.push('(');
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    out.push(' ');
                }
                first = false;
                out.push_str(&(x + 1).to_string());
                x = self.apply(x);
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        Ok(out)
    }
}

fn parse_image_list(text: &str) -> Result<Transformation> {
    let inner = text
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("unbalanced brackets in {text:?}")))?;
    let mut images = Vec::new();
    for tok in inner.split(|c: char| c == ',' || c.is_whitespace()) {
        if tok.is_empty() {
            continue;
        }
        let v: usize = tok
            .parse()
            .map_err(|_| Error::Parse(format!("bad point {tok:?}")))?;
        if v == 0 {
            return Err(Error::Parse("points are 1-based".into()));
        }
        images.push(v - 1);
    }
    Transformation::new(images)
}

fn parse_cycles(text: &str, degree: Option<usize>) -> Result<Transformation> {
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut rest = text;
    while let Some(open) = rest.find('(') {
        if !rest[..open].trim().is_empty() {
            return Err(Error::Parse(format!("stray text in {text:?}")));
        }
        let close = rest[open..]
            .find(')')
            .map(|c| c + open)
            .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in {text:?}")))?;
        let mut cycle = Vec::new();
        for tok in rest[open + 1..close].split(|c: char| c == ',' || c.is_whitespace()) {
            if tok.is_empty() {
                continue;
            }
            let v: usize = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad point {tok:?}")))?;
            if v == 0 {
                return Err(Error::Parse("points are 1-based".into()));
            }
            cycle.push(v - 1);
        }
        cycles.push(cycle);
        rest = &rest[close + 1..];
    }
    if !rest.trim().is_empty() {
        return Err(Error::Parse(format!("stray text in {text:?}")));
    }
    let max_point = cycles.iter().flatten().map(|&x| x + 1).max().unwrap_or(0);
    let n = match degree {
        Some(n) if n < max_point => {
            return Err(Error::Parse(format!(
                "point {max_point} exceeds degree {n}"
            )))
        }
        Some(n) => n,
        None if max_point == 0 => {
            return Err(Error::Parse("identity `()` needs an explicit degree".into()))
        }
        None => max_point,
    };
    check_degree(n)?;
    let mut images: Vec<usize> = (0..n).collect();
    let mut used = vec![false; n];
    for cycle in &cycles {
        for &x in cycle {
            if used[x] {
                return Err(Error::Parse(format!(
                    "point {} appears twice in {text:?}",
                    x + 1
                )));
            }
            used[x] = true;
        }
        for i in 0..cycle.len() {
            images[cycle[i]] = cycle[(i + 1) % cycle.len()];
        }
    }
    Transformation::new(images)
}

impl FromStr for Transformation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Transformation::parse(s, None)
    }
}

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// 1-based image list, e.g. `[2,3,1]`.
impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, y) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", y + 1)?;
        }
        f.write_str("]")
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// A partition of `{0, .., n-1}` in canonical form: blocks ordered by their
/// minimum element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    labels: Vec<u8>,
    blocks: Vec<PointSet>,
}

impl Partition {
    /// Points with equal keys share a block.
    pub(crate) fn from_key(key: &[u8]) -> Partition {
        let mut relabel = [u8::MAX; 256];
        let mut labels = Vec::with_capacity(key.len());
        let mut blocks: Vec<PointSet> = Vec::new();
        for (x, &k) in key.iter().enumerate() {
            let slot = &mut relabel[k as usize];
            if *slot == u8::MAX {
                *slot = blocks.len() as u8;
                blocks.push(PointSet::EMPTY);
            }
            labels.push(*slot);
            blocks[*slot as usize].insert(x);
        }
        Partition { labels, blocks }
    }

    /// `labels[x]` names the block of `x`; any labelling is accepted.
    pub fn from_labels(labels: &[usize]) -> Result<Partition> {
        check_degree(labels.len())?;
        if labels.iter().any(|&l| l >= 256) {
            return Err(Error::InvalidPartition("label out of range".into()));
        }
        let key: Vec<u8> = labels.iter().map(|&l| l as u8).collect();
        Ok(Partition::from_key(&key))
    }

    pub fn from_blocks(degree: usize, blocks: &[Vec<usize>]) -> Result<Partition> {
        check_degree(degree)?;
        let mut labels = vec![usize::MAX; degree];
        for (i, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &x in block {
                if x >= degree {
                    return Err(Error::InvalidPartition(format!(
                        "point {} out of range",
                        x + 1
                    )));
                }
                if labels[x] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "point {} in two blocks",
                        x + 1
                    )));
                }
                labels[x] = i;
            }
        }
        if let Some(x) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidPartition(format!(
                "point {} is not covered",
                x + 1
            )));
        }
        Partition::from_labels(&labels)
    }

    pub fn singletons(n: usize) -> Partition {
        let key: Vec<u8> = (0..n as u8).collect();
        Partition::from_key(&key)
    }

    pub fn universal(n: usize) -> Partition {
        Partition::from_key(&vec![0; n])
    }

    pub fn degree(&self) -> usize {
        self.labels.len()
    }

    /// Number of blocks.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[PointSet] {
        &self.blocks
    }

    pub fn block_index(&self, x: usize) -> usize {
        self.labels[x] as usize
    }

    pub fn block_of(&self, x: usize) -> PointSet {
        self.blocks[self.labels[x] as usize]
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn same_block(&self, x: usize, y: usize) -> bool {
        self.labels[x] == self.labels[y]
    }

    pub fn kernel_type(&self) -> KernelType {
        KernelType::from_sizes(self.blocks.iter().map(|b| b.len()).collect())
    }

    pub fn is_uniform(&self) -> bool {
        let first = self.blocks[0].len();
        self.blocks.iter().all(|b| b.len() == first)
    }

    /// Every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.degree() == coarser.degree()
            && self
                .blocks
                .iter()
                .all(|b| b.is_subset(coarser.block_of(b.first().expect("nonempty block"))))
    }

    /// Image under a permutation: the partition with blocks `B p`.
    pub fn image_under(&self, p: &Transformation) -> Partition {
        let mut key = vec![0u8; self.degree()];
        for (x, &l) in self.labels.iter().enumerate() {
            key[p.apply(x)] = l;
        }
        Partition::from_key(&key)
    }

    /// `set` meets every block exactly once.
    pub fn is_section(&self, set: PointSet) -> bool {
        set.len() == self.len() && self.blocks.iter().all(|b| b.intersection(set).len() == 1)
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// 1-based, e.g. `{1,2|3|4,5}`.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            for (j, x) in b.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", x + 1)?;
            }
        }
        f.write_str("}")
    }
}

/// Block sizes of a partition, sorted descending.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KernelType(Vec<usize>);

impl KernelType {
    pub fn from_sizes(mut sizes: Vec<usize>) -> KernelType {
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        KernelType(sizes)
    }

    /// `head` followed by as many 1s as needed to reach `degree`, e.g.
    /// `with_ones(&[3, 2], 7)` is `(3,2,1,1)`.
    pub fn with_ones(head: &[usize], degree: usize) -> Result<KernelType> {
        let used: usize = head.iter().sum();
        if used > degree || head.contains(&0) {
            return Err(Error::InvalidArgument(format!(
                "kernel type head {head:?} does not fit degree {degree}"
            )));
        }
        let mut sizes = head.to_vec();
        sizes.extend(std::iter::repeat_n(1, degree - used));
        Ok(KernelType::from_sizes(sizes))
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_uniform(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    /// All kernel types of the given degree and rank, largest first.
    pub fn all_of_rank(degree: usize, rank: usize) -> Vec<KernelType> {
        fn go(remaining: usize, parts: usize, max: usize, acc: &mut Vec<usize>, out: &mut Vec<KernelType>) {
            if parts == 0 {
                if remaining == 0 {
                    out.push(KernelType(acc.clone()));
                }
                return;
            }
            let hi = max.min(remaining + 1 - parts);
            for s in (1..=hi).rev() {
                if s * parts < remaining {
                    break;
                }
                acc.push(s);
                go(remaining - s, parts - 1, s, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        if rank >= 1 && rank <= degree {
            go(degree, rank, degree, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl fmt::Debug for KernelType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for KernelType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str(")")
    }
}

/// Accepts `3,2,1,1` or `(3,2,1,1)`.
impl FromStr for KernelType {
    type Err = Error;

    fn from_str(s: &str) -> Result<KernelType> {
        let s = s.trim();
        let inner = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(s);
        let mut sizes = Vec::new();
        for tok in inner.split(',') {
            let tok = tok.trim();
            let v: usize = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad kernel part {tok:?}")))?;
            if v == 0 {
                return Err(Error::Parse("kernel parts are positive".into()));
            }
            sizes.push(v);
        }
        Ok(KernelType::from_sizes(sizes))
    }
}
