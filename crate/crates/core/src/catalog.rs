//! Programmatically built groups with declared properties, checked on load.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::group::PermutationGroup;
use crate::perm::Transformation;
use crate::MAX_DEGREE;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Symmetric,
    Alternating,
    Cyclic,
    Dihedral,
    /// `S_m ≀ S_2` in product action on an `m × m` grid.
    Grid,
    ProjectiveLinear,
    File,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Expected {
    pub transitive: Option<bool>,
    pub primitive: Option<bool>,
    pub order: Option<BigUint>,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub family: Family,
    pub group: PermutationGroup,
    pub expected: Expected,
}

impl CatalogEntry {
    /// Checks every declared expectation against the engine.
    pub fn new(name: String, family: Family, group: PermutationGroup, expected: Expected) -> Result<CatalogEntry> {
        let mismatch = |field, declared: String, computed: String| Error::CatalogMismatch {
            name: name.clone(),
            field,
            declared,
            computed,
        };
        if let Some(t) = expected.transitive {
            if group.is_transitive() != t {
                return Err(mismatch("transitive", t.to_string(), group.is_transitive().to_string()));
            }
        }
        if let Some(p) = expected.primitive {
            if group.is_primitive() != p {
                return Err(mismatch("primitive", p.to_string(), group.is_primitive().to_string()));
            }
        }
        if let Some(o) = &expected.order {
            let computed = group.order();
            if &computed != o {
                return Err(mismatch("order", o.to_string(), computed.to_string()));
            }
        }
        Ok(CatalogEntry {
            name,
            family,
            group,
            expected,
        })
    }

    pub fn degree(&self) -> usize {
        self.group.degree()
    }

    /// One line: name, degree, order, transitivity, primitivity.
    pub fn summary(&self) -> String {
        let g = &self.group;
        let kind = if g.is_primitive() {
            if g.is_2_transitive() {
                "2-transitive"
            } else {
                "primitive"
            }
        } else if g.is_transitive() {
            "imprimitive"
        } else {
            "intransitive"
        };
        format!("{:<10} degree {:>2}  order {:>10}  {kind}", self.name, g.degree(), g.order())
    }

    /// The group file text for this entry.
    pub fn to_group_file(&self) -> Result<String> {
        let mut out = format!("name: {}\ndegree {}\n", self.name, self.degree());
        for g in self.group.generators() {
            out.push_str(&g.cycle_string()?);
            out.push('\n');
        }
        Ok(out)
    }
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, k| acc * BigUint::from(k))
}

fn perm_from_fn(n: usize, f: impl Fn(usize) -> usize) -> Transformation {
    Transformation::new((0..n).map(f).collect()).expect("constructed permutation is in range")
}

fn cycle_gen(n: usize) -> Transformation {
    perm_from_fn(n, |x| (x + 1) % n)
}

fn transposition(n: usize, a: usize, b: usize) -> Transformation {
    perm_from_fn(n, |x| if x == a { b } else if x == b { a } else { x })
}

fn check_degree(n: usize, min: usize) -> Result<()> {
    if n < min || n > MAX_DEGREE {
        Err(Error::UnsupportedDegree(n))
    } else {
        Ok(())
    }
}

pub fn symmetric(n: usize) -> Result<CatalogEntry> {
    check_degree(n, 2)?;
    let gens = if n == 2 {
        vec![transposition(2, 0, 1)]
    } else {
        vec![transposition(n, 0, 1), cycle_gen(n)]
    };
    CatalogEntry::new(
        format!("S{n}"),
        Family::Symmetric,
        PermutationGroup::new(n, gens)?,
        Expected {
            transitive: Some(true),
            primitive: Some(true),
            order: Some(factorial(n)),
        },
    )
}

pub fn alternating(n: usize) -> Result<CatalogEntry> {
    check_degree(n, 3)?;
    let gens = (2..n)
        .map(|i| perm_from_fn(n, |x| if x == 0 { 1 } else if x == 1 { i } else if x == i { 0 } else { x }))
        .collect();
    CatalogEntry::new(
        format!("A{n}"),
        Family::Alternating,
        PermutationGroup::new(n, gens)?,
        Expected {
            transitive: Some(true),
            primitive: Some(true),
            order: Some(factorial(n) / BigUint::from(2u32)),
        },
    )
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub fn cyclic(n: usize) -> Result<CatalogEntry> {
    check_degree(n, 2)?;
    CatalogEntry::new(
        format!("C{n}"),
        Family::Cyclic,
        PermutationGroup::new(n, vec![cycle_gen(n)])?,
        Expected {
            transitive: Some(true),
            primitive: Some(is_prime(n)),
            order: Some(BigUint::from(n)),
        },
    )
}

/// Dihedral group of order `2p` on the vertices of a `p`-gon, `p` an odd prime.
pub fn dihedral(p: usize) -> Result<CatalogEntry> {
    check_degree(p, 3)?;
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("dihedral entries need an odd prime degree, got {p}")));
    }
    let reflection = perm_from_fn(p, |x| (p - x) % p);
    CatalogEntry::new(
        format!("D{p}"),
        Family::Dihedral,
        PermutationGroup::new(p, vec![cycle_gen(p), reflection])?,
        Expected {
            transitive: Some(true),
            primitive: Some(true),
            order: Some(BigUint::from(2 * p)),
        },
    )
}

/// `S_m ≀ S_2` on the `m × m` grid; point `(i, j)` is `m·i + j`.
pub fn grid(m: usize) -> Result<CatalogEntry> {
    if m < 2 || m * m > MAX_DEGREE {
        return Err(Error::UnsupportedDegree(m * m));
    }
    let n = m * m;
    let on_rows = |p: &Transformation| perm_from_fn(n, |x| m * p.apply(x / m) + x % m);
    let row_swap = on_rows(&transposition(m, 0, 1));
    let row_cycle = on_rows(&cycle_gen(m));
    let transpose = perm_from_fn(n, |x| m * (x % m) + x / m);
    let gens = if m == 2 {
        vec![row_swap, transpose]
    } else {
        vec![row_swap, row_cycle, transpose]
    };
    let half = factorial(m);
    CatalogEntry::new(
        format!("grid-{m}"),
        Family::Grid,
        PermutationGroup::new(n, gens)?,
        Expected {
            transitive: Some(true),
            primitive: Some(m >= 3),
            order: Some(BigUint::from(2u32) * &half * &half),
        },
    )
}

/// Arithmetic in `GF(p^k)`: elements are base-`p` digit vectors of
/// polynomials reduced modulo a monic irreducible of degree `k`.
#[derive(Debug, Clone)]
pub struct FiniteField {
    p: usize,
    k: usize,
    /// Coefficients of `x^k` expressed in lower powers (the negated tail of
    /// the modulus).
    reduction: Vec<usize>,
}

impl FiniteField {
    pub fn new(q: usize) -> Result<FiniteField> {
        let (p, k) = prime_power(q).ok_or_else(|| Error::InvalidArgument(format!("{q} is not a prime power")))?;
        if k == 1 {
            return Ok(FiniteField {
                p,
                k,
                reduction: vec![0],
            });
        }
        // x^k + tail is irreducible iff the quotient ring has no zero divisors.
        for code in 0..q {
            let tail = digits(code, p, k);
            let reduction: Vec<usize> = tail.iter().map(|&c| (p - c) % p).collect();
            let field = FiniteField { p, k, reduction };
            if field.has_no_zero_divisors() {
                return Ok(field);
            }
        }
        Err(Error::InvalidArgument(format!("no irreducible polynomial found for {q}")))
    }

    pub fn order(&self) -> usize {
        self.p.pow(self.k as u32)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (da, db) = (digits(a, self.p, self.k), digits(b, self.p, self.k));
        undigits(&da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect::<Vec<_>>(), self.p)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let (p, k) = (self.p, self.k);
        if k == 1 {
            return a * b % p;
        }
        let (da, db) = (digits(a, p, k), digits(b, p, k));
        let mut prod = vec![0usize; 2 * k - 1];
        for (i, x) in da.iter().enumerate() {
            for (j, y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for d in (k..2 * k - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, r) in self.reduction.iter().enumerate() {
                prod[d - k + i] = (prod[d - k + i] + c * r) % p;
            }
        }
        undigits(&prod[..k], p)
    }

    pub fn inverse(&self, a: usize) -> Option<usize> {
        (1..self.order()).find(|&b| self.mul(a, b) == 1)
    }

    fn has_no_zero_divisors(&self) -> bool {
        let q = self.order();
        (1..q).all(|a| (1..q).all(|b| self.mul(a, b) != 0))
    }

    /// Least element of multiplicative order `q - 1`.
    pub fn primitive_element(&self) -> usize {
        let q = self.order();
        (1..q)
            .find(|&c| {
                let mut x = c;
                let mut ord = 1;
                while x != 1 {
                    x = self.mul(x, c);
                    ord += 1;
                }
                ord == q - 1
            })
            .expect("finite fields have primitive elements")
    }
}

fn digits(mut x: usize, p: usize, k: usize) -> Vec<usize> {
    (0..k)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn undigits(d: &[usize], p: usize) -> usize {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

fn prime_power(q: usize) -> Option<(usize, usize)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut k = 0;
    let mut m = q;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

pub fn is_prime_power(q: usize) -> bool {
    q >= 2 && prime_power(q).is_some()
}

/// `PGL(2, q)` on the projective line `GF(q) ∪ {∞}`, with `∞` as point `q`.
pub fn pgl2(q: usize) -> Result<CatalogEntry> {
    check_degree(q + 1, 3)?;
    let field = FiniteField::new(q)?;
    let inf = q;
    let c = field.primitive_element();
    let translate = perm_from_fn(q + 1, |z| if z == inf { inf } else { field.add(z, 1) });
    let scale = perm_from_fn(q + 1, |z| if z == inf { inf } else { field.mul(z, c) });
    let invert = perm_from_fn(q + 1, |z| match z {
        0 => inf,
        z if z == inf => 0,
        z => field.inverse(z).expect("nonzero element"),
    });
    let mut gens = vec![translate];
    if !scale.is_identity() {
        gens.push(scale);
    }
    gens.push(invert);
    CatalogEntry::new(
        format!("PGL(2,{q})"),
        Family::ProjectiveLinear,
        PermutationGroup::new(q + 1, gens)?,
        Expected {
            transitive: Some(true),
            primitive: Some(true),
            order: Some(BigUint::from(q * (q * q - 1))),
        },
    )
}

/// Every family member of degree at most `max_degree`, ordered by degree and
/// then by family.
pub fn build_catalog(max_degree: usize) -> Result<Vec<CatalogEntry>> {
    if max_degree > MAX_DEGREE {
        return Err(Error::UnsupportedDegree(max_degree));
    }
    let mut out = Vec::new();
    for n in 2..=max_degree {
        out.push(symmetric(n)?);
        if n >= 3 {
            out.push(alternating(n)?);
        }
        out.push(cyclic(n)?);
        if n >= 3 && is_prime(n) {
            out.push(dihedral(n)?);
        }
        let m = (1..=n).find(|m| m * m == n);
        if let Some(m) = m.filter(|&m| m >= 2) {
            out.push(grid(m)?);
        }
        if is_prime_power(n - 1) && n >= 3 {
            out.push(pgl2(n - 1)?);
        }
    }
    Ok(out)
}

/// A single entry by name: `S5`, `A6`, `C6`, `D7`, `grid-3`, `PGL(2,5)`.
pub fn entry(name: &str) -> Result<CatalogEntry> {
    let unknown = || Error::UnknownEntry(name.to_string());
    let num = |s: &str| s.parse::<usize>().map_err(|_| unknown());
    if let Some(rest) = name.strip_prefix("grid-") {
        return grid(num(rest)?);
    }
    if let Some(rest) = name.strip_prefix("PGL(2,").and_then(|r| r.strip_suffix(')')) {
        return pgl2(num(rest)?);
    }
    let (head, tail) = name.split_at(name.chars().next().map_or(0, char::len_utf8));
    match head {
        "S" => symmetric(num(tail)?),
        "A" => alternating(num(tail)?),
        "C" => cyclic(num(tail)?),
        "D" => dihedral(num(tail)?),
        _ => Err(unknown()),
    }
}

/// Reads a group file:
///
/// ```text
/// name: grid-3
/// degree 9
/// (1 4)(2 5)(3 6)
/// (1 4 7)(2 5 8)(3 6 9)
/// (2 4)(3 7)(6 8)
/// ```
///
/// One generator per line in cycle or image-list notation; `#` starts a
/// comment. Optional `transitive:`, `primitive:` and `order:` lines declare
/// expectations that are checked.
pub fn parse_group_file(text: &str) -> Result<CatalogEntry> {
    let mut name = None;
    let mut degree = None;
    let mut expected = Expected::default();
    let mut gen_lines = Vec::new();
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_bool = |v: &str| match v.trim() {
            "true" | "yes" => Ok(true),
            "false" | "no" => Ok(false),
            other => Err(Error::Parse(format!("expected true/false, got {other:?}"))),
        };
        if let Some(v) = line.strip_prefix("name:") {
            name = Some(v.trim().to_string());
        } else if let Some(v) = line.strip_prefix("degree") {
            let v = v.trim_start_matches(':').trim();
            degree = Some(v.parse::<usize>().map_err(|_| Error::Parse(format!("bad degree {v:?}")))?);
        } else if let Some(v) = line.strip_prefix("transitive:") {
            expected.transitive = Some(parse_bool(v)?);
        } else if let Some(v) = line.strip_prefix("primitive:") {
            expected.primitive = Some(parse_bool(v)?);
        } else if let Some(v) = line.strip_prefix("order:") {
            expected.order = Some(v.trim().parse().map_err(|_| Error::Parse(format!("bad order {v:?}")))?);
        } else {
            gen_lines.push(line.to_string());
        }
    }
    let degree = degree.ok_or_else(|| Error::Parse("group file has no degree line".into()))?;
    let gens = gen_lines
        .iter()
        .map(|l| Transformation::parse(l, Some(degree)))
        .collect::<Result<Vec<_>>>()?;
    let group = if gens.is_empty() {
        PermutationGroup::trivial(degree)?
    } else {
        PermutationGroup::new(degree, gens)?
    };
    CatalogEntry::new(name.unwrap_or_else(|| "file".into()), Family::File, group, expected)
}
