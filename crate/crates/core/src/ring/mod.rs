//! Truncated graded-commutative polynomial quotient rings with exact coefficients.
//!
//! A [`RingPresentation`] lists degree-weighted generators and a triangular
//! set of rewrite rules `g^k -> (terms of lower g-power)`. Every
//! [`GradedElement`] is kept in normal form: no monomial is divisible by a
//! rule's left side, and nothing above the truncation degree survives.

mod coeff;
mod element;

pub use coeff::{int, parse_rational, rat, rational_pretty, rational_to_pq, Coeff, Rational};
pub use element::{GradedElement, TermJson};

use std::collections::{BTreeMap, HashMap};

use num::Zero;

use crate::error::{Error, Result};

pub type Monomial = Vec<u32>;

/// A rewrite rule `generator^power = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub generator: usize,
    pub power: u32,
    pub rhs: BTreeMap<Monomial, Rational>,
}

impl Relation {
    /// `generator^power = 0`.
    pub fn nilpotent(generator: usize, power: u32) -> Self {
        Relation {
            generator,
            power,
            rhs: BTreeMap::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingPresentation {
    generators: Vec<Generator>,
    relations: Vec<Relation>,
    truncation: u32,
    /// Names of the degree-0 coefficient parameters (e.g. `y`).
    params: Vec<String>,
}

impl RingPresentation {
    /// Validates and builds a presentation.
    ///
    /// Each relation must be homogeneous, must lower the power of its own
    /// generator, and may only mention generators that are either free or
    /// governed by an earlier relation. This makes rewriting terminate.
    pub fn new(
        generators: Vec<(String, u32)>,
        relations: Vec<Relation>,
        truncation: u32,
        params: Vec<String>,
    ) -> Result<Self> {
        let generators: Vec<Generator> = generators
            .into_iter()
            .map(|(name, degree)| Generator { name, degree })
            .collect();
        let n = generators.len();
        for (i, g) in generators.iter().enumerate() {
            if g.degree == 0 {
                return Err(Error::MalformedPresentation(format!(
                    "generator `{}` has degree 0",
                    g.name
                )));
            }
            if g.name.is_empty() || generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::MalformedPresentation(format!(
                    "duplicate or empty generator name `{}`",
                    g.name
                )));
            }
            if params.contains(&g.name) {
                return Err(Error::MalformedPresentation(format!(
                    "`{}` is both a generator and a parameter",
                    g.name
                )));
            }
        }
        let mut governed_by: Vec<Option<usize>> = vec![None; n];
        for (ri, rel) in relations.iter().enumerate() {
            if rel.generator >= n {
                return Err(Error::MalformedPresentation(format!(
                    "relation {ri} refers to generator {}",
                    rel.generator
                )));
            }
            if rel.power == 0 {
                return Err(Error::MalformedPresentation(format!("relation {ri} has power 0")));
            }
            if governed_by[rel.generator].is_some() {
                return Err(Error::MalformedPresentation(format!(
                    "generator `{}` has two relations",
                    generators[rel.generator].name
                )));
            }
            governed_by[rel.generator] = Some(ri);
        }
        for (ri, rel) in relations.iter().enumerate() {
            let lhs_deg = rel.power * generators[rel.generator].degree;
            for (m, c) in &rel.rhs {
                if c.is_zero() {
                    continue;
                }
                if m.len() != n {
                    return Err(Error::MalformedPresentation(format!(
                        "relation {ri}: monomial has {} exponents, expected {n}",
                        m.len()
                    )));
                }
                let d: u32 = m.iter().zip(&generators).map(|(e, g)| e * g.degree).sum();
                if d != lhs_deg {
                    return Err(Error::MalformedPresentation(format!(
                        "relation {ri}: right side has degree {d}, left side {lhs_deg}"
                    )));
                }
                if m[rel.generator] >= rel.power {
                    return Err(Error::MalformedPresentation(format!(
                        "relation {ri}: right side does not lower the power of `{}`",
                        generators[rel.generator].name
                    )));
                }
                for (gi, &e) in m.iter().enumerate() {
                    if e == 0 || gi == rel.generator {
                        continue;
                    }
                    if let Some(other) = governed_by[gi] {
                        if other > ri {
                            return Err(Error::MalformedPresentation(format!(
                                "relation {ri} uses `{}`, which is rewritten by a later relation",
                                generators[gi].name
                            )));
                        }
                    }
                }
            }
        }
        let relations = relations
            .into_iter()
            .map(|mut r| {
                r.rhs.retain(|_, c| !c.is_zero());
                r
            })
            .collect();
        Ok(RingPresentation {
            generators,
            relations,
            truncation,
            params,
        })
    }

    /// `Q[g]/(g^{n+1})` truncated at degree `n`, the Chow ring of `P^n`.
    pub fn truncated_polynomial(name: &str, n: u32) -> Self {
        RingPresentation::new(
            vec![(name.to_string(), 1)],
            vec![Relation::nilpotent(0, n + 1)],
            n,
            Vec::new(),
        )
        .expect("single nilpotent generator is a valid presentation")
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn degree_of(&self, m: &[u32]) -> u32 {
        m.iter().zip(&self.generators).map(|(e, g)| e * g.degree).sum()
    }

    /// Same ring with additional coefficient parameters appended.
    pub fn with_params(&self, extra: &[&str]) -> Result<Self> {
        let mut params = self.params.clone();
        for p in extra {
            if !params.iter().any(|q| q == p) {
                params.push((*p).to_string());
            }
        }
        RingPresentation::new(
            self.generators.iter().map(|g| (g.name.clone(), g.degree)).collect(),
            self.relations.clone(),
            self.truncation,
            params,
        )
    }

    /// Same generators and relations with a different truncation degree.
    pub fn with_truncation(&self, truncation: u32) -> Self {
        RingPresentation {
            truncation,
            ..self.clone()
        }
    }

    /// True when the rings agree up to coefficient parameters.
    pub fn same_quotient(&self, other: &RingPresentation) -> bool {
        self.generators == other.generators && self.relations == other.relations && self.truncation == other.truncation
    }

    fn reducer(&self, m: &[u32]) -> Option<&Relation> {
        self.relations.iter().find(|r| m[r.generator] >= r.power)
    }

    /// Normal form of a single monomial as a rational combination.
    fn reduce_monomial(
        &self,
        m: &Monomial,
        memo: &mut HashMap<Monomial, BTreeMap<Monomial, Rational>>,
    ) -> BTreeMap<Monomial, Rational> {
        if self.degree_of(m) > self.truncation {
            return BTreeMap::new();
        }
        if let Some(hit) = memo.get(m) {
            return hit.clone();
        }
        let out = match self.reducer(m) {
            None => {
                let mut one = BTreeMap::new();
                one.insert(m.clone(), Rational::from_integer(1.into()));
                one
            }
            Some(rel) => {
                let mut rest = m.clone();
                rest[rel.generator] -= rel.power;
                let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
                for (rm, rc) in &rel.rhs {
                    let next: Monomial = rest.iter().zip(rm).map(|(a, b)| a + b).collect();
                    for (nm, nc) in self.reduce_monomial(&next, memo) {
                        let slot = acc.entry(nm).or_insert_with(Rational::zero);
                        *slot += rc * nc;
                    }
                }
                acc.retain(|_, c| !c.is_zero());
                acc
            }
        };
        memo.insert(m.clone(), out.clone());
        out
    }

    /// Reduces raw terms to normal form, dropping everything above the
    /// truncation degree.
    pub fn normal_form(&self, raw: impl IntoIterator<Item = (Monomial, Coeff)>) -> BTreeMap<Monomial, Coeff> {
        let mut memo = HashMap::new();
        let mut out: BTreeMap<Monomial, Coeff> = BTreeMap::new();
        for (m, c) in raw {
            if c.is_zero() {
                continue;
            }
            assert_eq!(m.len(), self.generators.len(), "monomial arity mismatch");
            for (nm, r) in self.reduce_monomial(&m, &mut memo) {
                let slot = out.entry(nm).or_default();
                *slot += &c.scale(&r);
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    pub fn is_normal(&self, m: &[u32]) -> bool {
        self.degree_of(m) <= self.truncation && self.reducer(m).is_none()
    }
}
