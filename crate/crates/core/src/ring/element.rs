use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use super::coeff::{monomial_string, parse_term, split_signed_terms};
use super::{Coeff, Monomial, Rational, RingPresentation};
use crate::error::{Error, Result};

/// An element of a truncated quotient ring, always in normal form.
#[derive(Clone, Debug)]
pub struct GradedElement {
    ring: Arc<RingPresentation>,
    terms: BTreeMap<Monomial, Coeff>,
}

/// One entry of the JSON serialization of an element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub monomial: String,
    pub coeff: String,
}

impl PartialEq for GradedElement {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_quotient(&other.ring) && self.terms == other.terms
    }
}

impl Eq for GradedElement {}

fn compatible(a: &Arc<RingPresentation>, b: &Arc<RingPresentation>) -> Result<Arc<RingPresentation>> {
    if Arc::ptr_eq(a, b) || a == b {
        return Ok(a.clone());
    }
    if a.same_quotient(b) {
        // parameters are appended, so the longer list must extend the shorter
        let (short, long) = if a.params().len() <= b.params().len() {
            (a, b)
        } else {
            (b, a)
        };
        if long.params().starts_with(short.params()) {
            return Ok(long.clone());
        }
    }
    Err(Error::PresentationMismatch(format!(
        "rings over {:?} and {:?} differ",
        a.generator_names(),
        b.generator_names()
    )))
}

impl GradedElement {
    pub fn zero(ring: &Arc<RingPresentation>) -> Self {
        GradedElement {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<RingPresentation>) -> Self {
        Self::constant(ring, Coeff::one())
    }

    pub fn constant(ring: &Arc<RingPresentation>, c: Coeff) -> Self {
        let m = vec![0; ring.num_generators()];
        Self::from_terms(ring, [(m, c)])
    }

    pub fn from_int(ring: &Arc<RingPresentation>, n: i64) -> Self {
        Self::constant(ring, Coeff::from_int(n))
    }

    /// A single generator, looked up by name.
    pub fn generator(ring: &Arc<RingPresentation>, name: &str) -> Result<Self> {
        let i = ring
            .generator_index(name)
            .ok_or_else(|| Error::Parse(format!("unknown generator `{name}`")))?;
        let mut m = vec![0; ring.num_generators()];
        m[i] = 1;
        Ok(Self::from_terms(ring, [(m, Coeff::one())]))
    }

    /// Builds the normal form of raw (possibly reducible) terms.
    pub fn from_terms(ring: &Arc<RingPresentation>, raw: impl IntoIterator<Item = (Monomial, Coeff)>) -> Self {
        GradedElement {
            ring: ring.clone(),
            terms: ring.normal_form(raw),
        }
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Coeff> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[u32]) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Coeff {
        self.coeff(&vec![0; self.ring.num_generators()])
    }

    /// Moves the element into a ring with the same quotient and at least
    /// the same parameters.
    pub fn in_ring(&self, ring: &Arc<RingPresentation>) -> Result<Self> {
        let target = compatible(&self.ring, ring)?;
        if !(Arc::ptr_eq(&target, ring) || *target == **ring) {
            return Err(Error::PresentationMismatch(
                "target ring lacks parameters used by the element".into(),
            ));
        }
        Ok(GradedElement {
            ring: ring.clone(),
            terms: self.terms.clone(),
        })
    }

    /// Same element with extra coefficient parameters available.
    pub fn with_params(&self, extra: &[&str]) -> Result<Self> {
        let ring = Arc::new(self.ring.with_params(extra)?);
        Ok(GradedElement {
            ring,
            terms: self.terms.clone(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let ring = compatible(&self.ring, &other.ring)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let slot = terms.entry(m.clone()).or_default();
            *slot += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(GradedElement { ring, terms })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        GradedElement {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        GradedElement {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&Coeff::from_rational(r.clone()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let ring = compatible(&self.ring, &other.ring)?;
        let trunc = ring.truncation();
        let mut raw: BTreeMap<Monomial, Coeff> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            let d1 = ring.degree_of(m1);
            for (m2, c2) in &other.terms {
                if d1 + ring.degree_of(m2) > trunc {
                    continue;
                }
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                let slot = raw.entry(m).or_default();
                *slot += &(c1 * c2);
            }
        }
        Ok(GradedElement::from_terms(&ring, raw))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = GradedElement::one(&self.ring);
        for _ in 0..k {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// Product of a list of elements; the empty product is 1 in `ring`.
    pub fn product<'a>(
        ring: &Arc<RingPresentation>,
        factors: impl IntoIterator<Item = &'a GradedElement>,
    ) -> Result<Self> {
        let mut acc = GradedElement::one(ring);
        for f in factors {
            acc = acc.mul(f)?;
        }
        Ok(acc)
    }

    /// Homogeneous part of degree `d`.
    pub fn component(&self, d: u32) -> Self {
        GradedElement {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| self.ring.degree_of(m) == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|m| self.ring.degree_of(m) == d)
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| self.ring.degree_of(m)).max()
    }

    /// Inverse by the truncated geometric series `c^{-1} Σ (-u)^j`,
    /// where `a = c(1 + u)` and `c` is the constant term.
    pub fn invert_unit(&self) -> Result<Self> {
        let c = self.constant_term();
        let c = match c.as_rational() {
            Some(r) if !r.is_zero() => r,
            _ => {
                return Err(Error::NotInvertible(format!(
                    "constant term `{}` is not a nonzero rational",
                    c.to_pretty_string(self.ring.params())
                )))
            }
        };
        let cinv = c.recip();
        let one = GradedElement::one(&self.ring);
        let u = self.scale_rational(&cinv).sub(&one)?;
        let neg_u = u.neg();
        let mut acc = one.clone();
        let mut power = one;
        for _ in 0..self.ring.truncation() {
            power = power.mul(&neg_u)?;
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power)?;
        }
        Ok(acc.scale_rational(&cinv))
    }

    /// `exp(x)` for `x` with zero constant term.
    pub fn exp_nilpotent(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::Unsupported(
                "exp of an element with nonzero constant term".into(),
            ));
        }
        let mut acc = GradedElement::one(&self.ring);
        let mut term = acc.clone();
        for j in 1..=self.ring.truncation() {
            term = term.mul(self)?.scale_rational(&Rational::new(One::one(), j.into()));
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// `log(a)` for `a` with constant term 1.
    pub fn log_unit(&self) -> Result<Self> {
        if !self.constant_term().is_one() {
            return Err(Error::Unsupported("log of an element with constant term != 1".into()));
        }
        let u = self.sub(&GradedElement::one(&self.ring))?;
        let mut acc = GradedElement::zero(&self.ring);
        let mut power = GradedElement::one(&self.ring);
        for j in 1..=self.ring.truncation() {
            power = power.mul(&u)?;
            if power.is_zero() {
                break;
            }
            let sign = if j % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&power.scale_rational(&Rational::new(sign.into(), j.into())))?;
        }
        Ok(acc)
    }

    /// Substitutes a rational for the named coefficient parameter and
    /// returns the element in the ring without that parameter.
    pub fn substitute_param(&self, name: &str, value: &Rational) -> Result<Self> {
        let idx = self
            .ring
            .params()
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| Error::Parse(format!("unknown parameter `{name}`")))?;
        let mut params = self.ring.params().to_vec();
        params.remove(idx);
        let ring = Arc::new(RingPresentation::new(
            self.ring
                .generators()
                .iter()
                .map(|g| (g.name.clone(), g.degree))
                .collect(),
            self.ring.relations().to_vec(),
            self.ring.truncation(),
            params,
        )?);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c.substitute(idx, value)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Ok(GradedElement { ring, terms })
    }

    /// Recomputes the element in the same ring truncated at `m`.
    pub fn truncate_to(&self, m: u32) -> Self {
        let ring = Arc::new(self.ring.with_truncation(m));
        GradedElement::from_terms(&ring, self.terms.clone())
    }

    /// Sum of `c * m` over all terms, with the monomial rendered in the
    /// ring's generator names; ascending lex order.
    pub fn to_json_terms(&self) -> Vec<TermJson> {
        let names = self.ring.generator_names();
        self.terms
            .iter()
            .map(|(m, c)| {
                let mono = monomial_string(m, &names);
                TermJson {
                    monomial: if mono.is_empty() { "1".into() } else { mono },
                    coeff: c.to_pq_string(self.ring.params()),
                }
            })
            .collect()
    }

    pub fn from_json_terms(ring: &Arc<RingPresentation>, terms: &[TermJson]) -> Result<Self> {
        let names = ring.generator_names();
        let mut raw = Vec::new();
        for t in terms {
            let m = if t.monomial.trim() == "1" {
                vec![0; names.len()]
            } else {
                let (r, m) = parse_term(&t.monomial, &names)?;
                if !r.is_one() {
                    return Err(Error::Parse(format!("monomial `{}` has a coefficient", t.monomial)));
                }
                m
            };
            raw.push((m, Coeff::parse(&t.coeff, ring.params())?));
        }
        Ok(GradedElement::from_terms(ring, raw))
    }

    /// Parses a sum such as `1 + 3*h - 1/2*h^2` with rational coefficients.
    pub fn parse(ring: &Arc<RingPresentation>, s: &str) -> Result<Self> {
        let names = ring.generator_names();
        let mut raw = Vec::new();
        for (neg, term) in split_signed_terms(s)? {
            let (r, m) = parse_term(&term, &names)?;
            raw.push((m, Coeff::from_rational(if neg { -r } else { r })));
        }
        Ok(GradedElement::from_terms(ring, raw))
    }
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.ring.generator_names();
        let params = self.ring.params();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mono = monomial_string(m, &names);
            let body = match c.as_rational() {
                Some(r) => {
                    let neg = r < Rational::zero();
                    let abs = if neg { -r } else { r };
                    let s = super::rational_pretty(&abs);
                    let s = if mono.is_empty() {
                        s
                    } else if abs.is_one() {
                        mono.clone()
                    } else {
                        format!("{s}*{mono}")
                    };
                    (neg, s)
                }
                None => {
                    let s = format!("({})", c.to_pretty_string(params));
                    (false, if mono.is_empty() { s } else { format!("{s}*{mono}") })
                }
            };
            match (i, body.0) {
                (0, true) => write!(f, "-{}", body.1)?,
                (0, false) => write!(f, "{}", body.1)?,
                (_, true) => write!(f, " - {}", body.1)?,
                (_, false) => write!(f, " + {}", body.1)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::{int, Relation};
    use super::*;

    fn p2() -> Arc<RingPresentation> {
        Arc::new(RingPresentation::truncated_polynomial("h", 2))
    }

    /// `Q[t,h]` with `prod_{i=1..3} (h + t) = 0` solved for `h^3`.
    fn equivariant_p2_weights_111() -> Arc<RingPresentation> {
        let mut rhs = BTreeMap::new();
        rhs.insert(vec![1, 2], int(-3));
        rhs.insert(vec![2, 1], int(-3));
        rhs.insert(vec![3, 0], int(-1));
        Arc::new(
            RingPresentation::new(
                vec![("t".into(), 1), ("h".into(), 1)],
                vec![Relation {
                    generator: 1,
                    power: 3,
                    rhs,
                }],
                4,
                vec![],
            )
            .unwrap(),
        )
    }

    #[test]
    fn top_power_killed() {
        let r = Arc::new(RingPresentation::truncated_polynomial("h", 1));
        let h = GradedElement::generator(&r, "h").unwrap();
        assert!(h.mul(&h).unwrap().is_zero());
        let r = p2();
        let h = GradedElement::generator(&r, "h").unwrap();
        assert!(h.pow(3).is_zero());
    }

    #[test]
    fn equivariant_reduction_of_h_cubed() {
        let r = equivariant_p2_weights_111();
        let h = GradedElement::generator(&r, "h").unwrap();
        let expected = GradedElement::parse(&r, "-3*t*h^2 - 3*t^2*h - t^3").unwrap();
        assert_eq!(h.pow(3), expected);
    }

    #[test]
    fn products_in_p2() {
        let r = p2();
        let a = GradedElement::parse(&r, "1 + h").unwrap();
        assert_eq!(a.mul(&a).unwrap().to_string(), "1 + 2*h + h^2");
        assert_eq!(a.pow(3).to_string(), "1 + 3*h + 3*h^2");
        let b = GradedElement::parse(&r, "1 + 2*h").unwrap();
        let c = GradedElement::parse(&r, "1 - 2*h + 4*h^2").unwrap();
        assert_eq!(b.mul(&c).unwrap(), GradedElement::one(&r));
    }

    #[test]
    fn inverses() {
        let r = p2();
        let a = GradedElement::parse(&r, "1 + h").unwrap();
        assert_eq!(a.invert_unit().unwrap().to_string(), "1 - h + h^2");
        assert_eq!(a.pow(3).invert_unit().unwrap().to_string(), "1 - 3*h + 6*h^2");
        let one = GradedElement::one(&r);
        assert_eq!(one.invert_unit().unwrap(), one);
        let h = GradedElement::generator(&r, "h").unwrap();
        assert!(matches!(h.invert_unit(), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn non_rational_constant_is_not_a_unit() {
        let r = Arc::new(p2().with_params(&["y"]).unwrap());
        let y = GradedElement::constant(&r, Coeff::var(0));
        assert!(y.invert_unit().is_err());
    }

    #[test]
    fn components() {
        let r = p2();
        let a = GradedElement::parse(&r, "1 + 3*h + 3*h^2").unwrap();
        assert_eq!(a.component(1).to_string(), "3*h");
        assert_eq!(a.component(0).to_string(), "1");
        let e = equivariant_p2_weights_111();
        let b = GradedElement::parse(&e, "h*t + t^2").unwrap();
        assert_eq!(b.component(2), b);
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let a = GradedElement::one(&p2());
        let b = GradedElement::one(&Arc::new(RingPresentation::truncated_polynomial("h", 3)));
        assert!(matches!(a.mul(&b), Err(Error::PresentationMismatch(_))));
    }

    #[test]
    fn parameter_extension_and_substitution() {
        let r = p2();
        let a = GradedElement::parse(&r, "1 + h").unwrap();
        let ry = Arc::new(r.with_params(&["y"]).unwrap());
        let y = GradedElement::constant(&ry, Coeff::var(0));
        let prod = a.mul(&y).unwrap();
        assert_eq!(prod.ring().params(), ["y".to_string()]);
        let back = prod.substitute_param("y", &int(2)).unwrap();
        assert_eq!(back, a.scale_rational(&int(2)));
        assert!(back.ring().params().is_empty());
    }

    #[test]
    fn json_round_trip() {
        let r = equivariant_p2_weights_111();
        let a = GradedElement::parse(&r, "1 - 3*t*h^2 + 1/2*t").unwrap();
        let js = a.to_json_terms();
        assert_eq!(
            js[0],
            TermJson {
                monomial: "1".into(),
                coeff: "1/1".into()
            }
        );
        let back = GradedElement::from_json_terms(&r, &js).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn exp_log_inverse() {
        let r = p2();
        let a = GradedElement::parse(&r, "1 + 2*h + 5*h^2").unwrap();
        assert_eq!(a.log_unit().unwrap().exp_nilpotent().unwrap(), a);
    }
}
