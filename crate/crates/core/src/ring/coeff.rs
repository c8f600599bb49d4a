//! Exact coefficients: polynomials over Q in a small set of named parameters.
//!
//! A plain rational is the constant polynomial. Exponent vectors are stored
//! with trailing zeros trimmed, so appending a parameter to a ring never
//! changes the representation of existing coefficients.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats a rational as `p/q`, always with an explicit denominator.
pub fn rational_to_pq(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Formats a rational as an integer when it is one, else `p/q`.
pub fn rational_pretty(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim().replace('\u{2212}', "-");
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.as_str(), "1"),
    };
    let n: BigInt = n
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator `{n}`")))?;
    let d: BigInt = d
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator `{d}`")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Rational::new(n, d))
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Coeff {
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Coeff {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(Vec::new(), r);
        }
        Coeff { terms }
    }

    /// The parameter with index `i`.
    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, Rational::one());
        Coeff { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut c = Coeff::zero();
        for (e, r) in iter {
            c.add_term(trim(e), r);
        }
        c
    }

    fn add_term(&mut self, e: Vec<u32>, r: Rational) {
        if r.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(r);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += r;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    /// The value as a rational, if the polynomial is constant.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest parameter index that occurs, plus one.
    pub fn var_span(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Coeff::zero();
        }
        Coeff {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * r)).collect(),
        }
    }

    /// Substitutes `value` for parameter `i` and removes the parameter,
    /// shifting later parameters down by one.
    pub fn substitute(&self, i: usize, value: &Rational) -> Self {
        let mut out = Coeff::zero();
        for (e, c) in &self.terms {
            let k = e.get(i).copied().unwrap_or(0);
            let mut rest = e.clone();
            if i < rest.len() {
                rest.remove(i);
            }
            let factor = num::pow::pow(value.clone(), k as usize);
            out.add_term(trim(rest), c * factor);
        }
        out
    }

    /// Evaluates at the given parameter values; missing values are an error.
    pub fn eval(&self, values: &[Rational]) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let v = values
                    .get(i)
                    .ok_or_else(|| Error::Parse(format!("no value for parameter {i}")))?;
                t *= num::pow::pow(v.clone(), k as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Moves parameter `i` to position `map[i]`.
    pub fn reindex(&self, map: &[usize]) -> Self {
        let width = map.iter().copied().max().map_or(0, |m| m + 1);
        Coeff::from_terms(self.terms.iter().map(|(e, c)| {
            let mut out = vec![0; width];
            for (i, &k) in e.iter().enumerate() {
                out[map[i]] += k;
            }
            (out, c.clone())
        }))
    }

    /// Exact division by a nonzero rational.
    pub fn div_rational(&self, r: &Rational) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::NotInvertible("division by zero".into()));
        }
        Ok(self.scale(&r.recip()))
    }

    fn fmt_with(&self, names: &[String], pq: bool) -> String {
        if self.terms.is_empty() {
            return if pq { "0/1".into() } else { "0".into() };
        }
        let mut s = String::new();
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = monomial_string(e, names);
            let num = if pq {
                rational_to_pq(&abs)
            } else {
                rational_pretty(&abs)
            };
            if mono.is_empty() {
                s.push_str(&num);
            } else if !pq && abs.is_one() {
                s.push_str(&mono);
            } else {
                let _ = write!(s, "{num}*{mono}");
            }
        }
        s
    }

    /// Exact `p/q` form, e.g. `1/1 - 1/2*y`.
    pub fn to_pq_string(&self, names: &[String]) -> String {
        self.fmt_with(names, true)
    }

    /// Human form, e.g. `1 - y/2` is written `1 - 1/2*y`.
    pub fn to_pretty_string(&self, names: &[String]) -> String {
        self.fmt_with(names, false)
    }

    /// Parses either form produced by the formatters.
    pub fn parse(s: &str, names: &[String]) -> Result<Self> {
        let mut out = Coeff::zero();
        for (sign, term) in split_signed_terms(s)? {
            let (r, e) = parse_term(&term, names)?;
            out.add_term(trim(e), if sign { -r } else { r });
        }
        Ok(out)
    }
}

/// Renders an exponent vector as `a^2*b`; empty for the unit monomial.
pub(crate) fn monomial_string(e: &[u32], names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.iter().enumerate() {
        let name = names.get(i).map(String::as_str).unwrap_or("?");
        match k {
            0 => {}
            1 => parts.push(name.to_string()),
            _ => parts.push(format!("{name}^{k}")),
        }
    }
    parts.join("*")
}

/// Splits `a - b + c` into signed pieces; `true` means negated.
pub(crate) fn split_signed_terms(s: &str) -> Result<Vec<(bool, String)>> {
    let s = s.replace('\u{2212}', "-");
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for ch in s.chars() {
        match ch {
            '+' | '-' => {
                if cur.trim().is_empty() {
                    if ch == '-' {
                        neg = !neg;
                    }
                } else {
                    out.push((neg, cur.trim().to_string()));
                    cur.clear();
                    neg = ch == '-';
                }
            }
            _ => cur.push(ch),
        }
    }
    if cur.trim().is_empty() {
        if out.is_empty() && s.trim().is_empty() {
            return Err(Error::Parse("empty expression".into()));
        }
        if !out.is_empty() || neg {
            return Err(Error::Parse(format!("dangling sign in `{s}`")));
        }
    } else {
        out.push((neg, cur.trim().to_string()));
    }
    Ok(out)
}

/// Parses `3/2*h^2*t`, `h`, `5` against a list of variable names.
pub(crate) fn parse_term(term: &str, names: &[String]) -> Result<(Rational, Vec<u32>)> {
    let mut r = Rational::one();
    let mut e = vec![0u32; names.len()];
    for factor in term.split('*') {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in `{term}`")));
        }
        if factor.starts_with(|c: char| c.is_ascii_digit()) {
            r *= parse_rational(factor)?;
            continue;
        }
        let (name, pow) = match factor.split_once('^') {
            Some((n, p)) => (
                n.trim(),
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?,
            ),
            None => (factor, 1),
        };
        let idx = names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?;
        e[idx] += pow;
    }
    Ok((r, e))
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, rhs: &Coeff) -> Coeff {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&Coeff> for Coeff {
    fn add_assign(&mut self, rhs: &Coeff) {
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &Coeff) -> Coeff {
        self + &(-rhs)
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &Coeff) -> Coeff {
        let mut out = Coeff::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let n = e1.len().max(e2.len());
                let e: Vec<u32> = (0..n)
                    .map(|i| e1.get(i).copied().unwrap_or(0) + e2.get(i).copied().unwrap_or(0))
                    .collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl From<Rational> for Coeff {
    fn from(r: Rational) -> Self {
        Coeff::from_rational(r)
    }
}

impl From<i64> for Coeff {
    fn from(n: i64) -> Self {
        Coeff::from_int(n)
    }
}
