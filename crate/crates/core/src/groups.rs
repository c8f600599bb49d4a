//! Finite groups given by multiplication tables, and counting of
//! homomorphisms from finitely generated abelian groups into them.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use num::integer::gcd;
use num::{BigInt, BigUint, One, Zero};

use crate::error::{Error, Result};
use crate::ring::Rational;

/// Largest group accepted unless the caller raises the bound.
pub const DEFAULT_MAX_ORDER: usize = 5040;

/// A finite group on elements `0..n` with `0` the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<usize>,
    n: usize,
    inverse: Vec<usize>,
    order_of: Vec<usize>,
    /// One-based permutation generators, when built from permutations.
    generators: Option<Vec<Vec<usize>>>,
}

impl FiniteGroup {
    /// Validates the group axioms on a multiplication table.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        Self::from_table_bounded(table, DEFAULT_MAX_ORDER)
    }

    pub fn from_table_bounded(table: Vec<Vec<usize>>, bound: usize) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty multiplication table".into()));
        }
        if n > bound {
            return Err(Error::GroupTooLarge { bound });
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidGroup(format!("entry {bad} in row {i} is out of range")));
            }
        }
        if (0..n).any(|i| table[0][i] != i || table[i][0] != i) {
            return Err(Error::InvalidGroup("element 0 is not the identity".into()));
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let at = |a: usize, b: usize| flat[a * n + b];
        let mut inverse = vec![usize::MAX; n];
        for (a, inv) in inverse.iter_mut().enumerate() {
            let mut seen = vec![false; n];
            for b in 0..n {
                let c = at(a, b);
                if seen[c] {
                    return Err(Error::InvalidGroup(format!("row {a} repeats element {c}")));
                }
                seen[c] = true;
                if c == 0 {
                    *inv = b;
                }
            }
        }
        for (a, &inv) in inverse.iter().enumerate() {
            if at(inv, a) != 0 {
                return Err(Error::InvalidGroup(format!("element {a} has no two-sided inverse")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::InvalidGroup(format!(
                            "table is not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(Self::assemble(flat, n, inverse, None))
    }

    /// Closes one-based permutations (each a list of images) under
    /// composition; elements are numbered in breadth-first order.
    pub fn from_permutations(gens: &[Vec<usize>]) -> Result<Self> {
        Self::from_permutations_bounded(gens, DEFAULT_MAX_ORDER)
    }

    pub fn from_permutations_bounded(gens: &[Vec<usize>], bound: usize) -> Result<Self> {
        let degree = gens.first().map_or(0, Vec::len);
        let mut zero_based = Vec::with_capacity(gens.len());
        for (gi, g) in gens.iter().enumerate() {
            if g.len() != degree {
                return Err(Error::InvalidGroup(format!(
                    "generator {} acts on {} points, expected {degree}",
                    gi + 1,
                    g.len()
                )));
            }
            let mut seen = vec![false; degree];
            let mut p = Vec::with_capacity(degree);
            for &x in g {
                if x == 0 || x > degree || seen[x - 1] {
                    return Err(Error::InvalidGroup(format!(
                        "generator {} is not a permutation of 1..={degree}",
                        gi + 1
                    )));
                }
                seen[x - 1] = true;
                p.push(x - 1);
            }
            zero_based.push(p);
        }

        // right[x][i] is the index of x * gen_i; parent[x] * gen[x] = x
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut right: Vec<Vec<usize>> = Vec::new();
        let mut parent = vec![(0, 0)];
        let mut head = 0;
        while head < elements.len() {
            let mut row = Vec::with_capacity(zero_based.len());
            for (gi, g) in zero_based.iter().enumerate() {
                let next = compose(&elements[head], g);
                let k = match index.get(&next) {
                    Some(&k) => k,
                    None => {
                        if elements.len() == bound {
                            return Err(Error::GroupTooLarge { bound });
                        }
                        let k = elements.len();
                        index.insert(next.clone(), k);
                        elements.push(next);
                        parent.push((head, gi));
                        k
                    }
                };
                row.push(k);
            }
            right.push(row);
            head += 1;
        }

        let n = elements.len();
        let mut flat = vec![0; n * n];
        let mut inverse = vec![0; n];
        for a in 0..n {
            flat[a * n] = a;
            for b in 1..n {
                let (p, gi) = parent[b];
                flat[a * n + b] = right[flat[a * n + p]][gi];
            }
            inverse[a] = flat[a * n..(a + 1) * n]
                .iter()
                .position(|&c| c == 0)
                .expect("every permutation has an inverse");
        }
        Ok(Self::assemble(flat, n, inverse, Some(gens.to_vec())))
    }

    fn assemble(table: Vec<usize>, n: usize, inverse: Vec<usize>, generators: Option<Vec<Vec<usize>>>) -> Self {
        let mut order_of = vec![1; n];
        for (a, slot) in order_of.iter_mut().enumerate() {
            let mut x = a;
            while x != 0 {
                x = table[x * n + a];
                *slot += 1;
            }
        }
        FiniteGroup {
            table,
            n,
            inverse,
            order_of,
            generators,
        }
    }

    pub fn trivial() -> Self {
        Self::assemble(vec![0], 1, vec![0], None)
    }

    /// `Z/n` generated by the cycle `(1 2 ... n)`.
    pub fn cyclic(n: usize) -> Result<Self> {
        Self::from_permutations(&Family::Cyclic.generators(n)?)
    }

    /// `S_n` generated by `(1 2)` and `(1 2 ... n)`.
    pub fn symmetric(n: usize) -> Result<Self> {
        Self::from_permutations(&Family::Symmetric.generators(n)?)
    }

    /// `A_n` generated by the 3-cycles `(1 2 k)`.
    pub fn alternating(n: usize) -> Result<Self> {
        Self::from_permutations(&Family::Alternating.generators(n)?)
    }

    /// Symmetries of a regular `n`-gon, of order `2n`.
    pub fn dihedral(n: usize) -> Result<Self> {
        Self::from_permutations(&Family::Dihedral.generators(n)?)
    }

    /// The quaternion group `{±1, ±i, ±j, ±k}`.
    pub fn quaternion() -> Self {
        // element s*4 + u is (-1)^s times the unit u in [1, i, j, k]
        const UNIT: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        let table = (0..8)
            .map(|a| {
                (0..8)
                    .map(|b| {
                        let (s, u) = UNIT[a % 4][b % 4];
                        ((s + a / 4 + b / 4) % 2) * 4 + u
                    })
                    .collect()
            })
            .collect();
        Self::from_table(table).expect("quaternion table satisfies the group axioms")
    }

    /// `G x H` with `(g, h)` numbered `g * |H| + h`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Result<Self> {
        let (n, m) = (self.n, other.n);
        let size = n.checked_mul(m).filter(|&s| s <= DEFAULT_MAX_ORDER);
        let Some(size) = size else {
            return Err(Error::GroupTooLarge {
                bound: DEFAULT_MAX_ORDER,
            });
        };
        let mut table = vec![0; size * size];
        let mut inverse = vec![0; size];
        for a in 0..size {
            inverse[a] = self.inverse[a / m] * m + other.inverse[a % m];
            for b in 0..size {
                table[a * size + b] = self.mul(a / m, b / m) * m + other.mul(a % m, b % m);
            }
        }
        Ok(Self::assemble(table, size, inverse, None))
    }

    /// Named groups: `trivial`, `Z/n` (or `Cn`), `Sn`, `An`, `Dn`, `Q8`.
    pub fn preset(name: &str) -> Result<Self> {
        Self::preset_bounded(name, DEFAULT_MAX_ORDER)
    }

    pub fn preset_bounded(name: &str, bound: usize) -> Result<Self> {
        let s = name.trim();
        let unknown = || Error::InvalidGroup(format!("unknown group `{name}`"));
        let family = match s {
            "trivial" | "1" | "e" => return Ok(Self::trivial()),
            "Q8" if bound >= 8 => return Ok(Self::quaternion()),
            "Q8" => return Err(Error::GroupTooLarge { bound }),
            _ if s.starts_with("Z/") => (Family::Cyclic, &s[2..]),
            _ if s.starts_with('C') => (Family::Cyclic, &s[1..]),
            _ if s.starts_with('S') => (Family::Symmetric, &s[1..]),
            _ if s.starts_with('A') => (Family::Alternating, &s[1..]),
            _ if s.starts_with('D') => (Family::Dihedral, &s[1..]),
            _ => return Err(unknown()),
        };
        let n: usize = family.1.parse().map_err(|_| unknown())?;
        Self::from_permutations_bounded(&family.0.generators(n)?, bound)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.order_of[a]
    }

    pub fn generators(&self) -> Option<&[Vec<usize>]> {
        self.generators.as_deref()
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    fn centralizers(&self) -> Vec<FixedBitSet> {
        let n = self.n;
        let mut out = vec![FixedBitSet::with_capacity(n); n];
        for a in 0..n {
            for b in 0..=a {
                if self.mul(a, b) == self.mul(b, a) {
                    out[a].insert(b);
                    out[b].insert(a);
                }
            }
        }
        out
    }

    /// Number of conjugacy classes.
    pub fn conjugacy_class_count(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut classes = 0;
        for x in 0..self.n {
            if seen[x] {
                continue;
            }
            classes += 1;
            for g in 0..self.n {
                seen[self.mul(self.mul(g, x), self.inverse[g])] = true;
            }
        }
        classes
    }
}

#[derive(Clone, Copy)]
enum Family {
    Cyclic,
    Symmetric,
    Alternating,
    Dihedral,
}

impl Family {
    fn generators(self, n: usize) -> Result<Vec<Vec<usize>>> {
        Ok(match self {
            Family::Cyclic if n == 0 => return Err(Error::InvalidGroup("cyclic group of order 0".into())),
            Family::Cyclic | Family::Symmetric | Family::Alternating if n <= 1 => Vec::new(),
            Family::Cyclic => vec![cycle(n)],
            Family::Symmetric => vec![transposition(n, 1, 2), cycle(n)],
            Family::Alternating => (3..=n)
                .map(|k| {
                    let mut p: Vec<usize> = (1..=n).collect();
                    p[0] = 2;
                    p[1] = k;
                    p[k - 1] = 1;
                    p
                })
                .collect(),
            Family::Dihedral if n < 3 => return Err(Error::InvalidGroup("dihedral groups need n >= 3".into())),
            Family::Dihedral => vec![cycle(n), (1..=n).map(|i| (n + 1 - i) % n + 1).collect()],
        })
    }
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}

fn cycle(n: usize) -> Vec<usize> {
    (1..=n).map(|i| i % n + 1).collect()
}

fn transposition(n: usize, i: usize, j: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (1..=n).collect();
    p.swap(i - 1, j - 1);
    p
}

/// `Z^m + Z/r_1 + ... + Z/r_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct AbelianGroupSpec {
    free_rank: usize,
    torsion: Vec<u64>,
}

impl AbelianGroupSpec {
    /// `Z/1` summands are trivial and dropped; `Z/0` is rejected.
    pub fn new(free_rank: usize, mut torsion: Vec<u64>) -> Result<Self> {
        if torsion.contains(&0) {
            return Err(Error::InvalidGroup(
                "torsion order 0; write Z for a free summand".into(),
            ));
        }
        torsion.retain(|&r| r > 1);
        torsion.sort_unstable();
        Ok(AbelianGroupSpec { free_rank, torsion })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(m: usize) -> Self {
        AbelianGroupSpec {
            free_rank: m,
            torsion: Vec::new(),
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }
}

/// Accepts `0`, `Z`, `Z^2`, `Z/3`, and sums such as `Z^2+Z/2` or `Z x Z/4`.
impl FromStr for AbelianGroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "0" || compact == "{0}" {
            return Ok(Self::zero());
        }
        let bad = || Error::Parse(format!("cannot read `{s}` as an abelian group such as Z^2+Z/3"));
        let mut free_rank = 0;
        let mut torsion = Vec::new();
        for part in compact.split(['+', 'x', '⊕', '×']) {
            if part == "Z" {
                free_rank += 1;
            } else if let Some(m) = part.strip_prefix("Z^") {
                free_rank += m.parse::<usize>().map_err(|_| bad())?;
            } else if let Some(r) = part.strip_prefix("Z/") {
                torsion.push(r.parse::<u64>().map_err(|_| bad())?);
            } else {
                return Err(bad());
            }
        }
        Self::new(free_rank, torsion)
    }
}

impl fmt::Display for AbelianGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            m => parts.push(format!("Z^{m}")),
        }
        parts.extend(self.torsion.iter().map(|r| format!("Z/{r}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

/// `|Hom(A, G)|`: tuples of pairwise commuting elements, one per generator
/// of `A`, with each torsion generator's image of order dividing `r_i`.
pub fn hom_count(a: &AbelianGroupSpec, g: &FiniteGroup) -> BigUint {
    // torsion slots first: they are the most selective
    let slots: Vec<Option<u64>> = a
        .torsion
        .iter()
        .map(|&r| Some(r))
        .chain(std::iter::repeat_n(None, a.free_rank))
        .collect();
    if slots.is_empty() {
        return BigUint::one();
    }
    let n = g.order();
    let allowed: Vec<FixedBitSet> = slots
        .iter()
        .map(|slot| {
            let mut s = FixedBitSet::with_capacity(n);
            for x in 0..n {
                if slot.is_none_or(|r| r % g.element_order(x) as u64 == 0) {
                    s.insert(x);
                }
            }
            s
        })
        .collect();
    let centralizers = g.centralizers();
    let mut all = FixedBitSet::with_capacity(n);
    all.insert_range(..);
    count_tuples(&allowed, &centralizers, &all)
}

fn count_tuples(allowed: &[FixedBitSet], centralizers: &[FixedBitSet], candidates: &FixedBitSet) -> BigUint {
    let (first, rest) = allowed.split_first().expect("at least one slot");
    let mut here = candidates.clone();
    here.intersect_with(first);
    if rest.is_empty() {
        return BigUint::from(here.count_ones(..));
    }
    let mut total = BigUint::zero();
    for x in here.ones() {
        let mut next = candidates.clone();
        next.intersect_with(&centralizers[x]);
        total += count_tuples(rest, centralizers, &next);
    }
    total
}

/// `|Hom(A, G)| / |G|`.
pub fn measured_value(a: &AbelianGroupSpec, g: &FiniteGroup) -> Rational {
    Rational::new(BigInt::from(hom_count(a, g)), BigInt::from(g.order()))
}

/// `|Hom(Z/r, Z/n)| = gcd(r, n)`, used as a cross-check.
pub fn cyclic_hom_count(r: u64, n: u64) -> u64 {
    gcd(r, n)
}
