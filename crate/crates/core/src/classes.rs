//! Multiplicative characteristic classes from one-variable power series.
//!
//! A class is determined by a series `Q(a) = 1 + q_1 a + q_2 a^2 + ...` in a
//! Chern root `a`. For a bundle with `c(E) = prod (1 + a_i)` the class is
//! `prod Q(a_i) = exp(sum_k l_k p_k)` where `log Q = sum l_k a^k` and the
//! power sums `p_k = sum a_i^k` come from the Chern classes through
//! Newton's identities.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::{int, Coeff, GradedElement, Rational, RingPresentation};

/// Order to which the named series are precomputed.
pub const DEFAULT_ORDER: usize = 8;

/// Name of the genus parameter of the Hirzebruch series.
pub const Y: &str = "y";

/// The named series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeriesKind {
    /// `1 + a`
    Chern,
    /// `a / (1 - e^{-a})`
    Todd,
    /// `a / tanh(a)`
    L,
    /// `a(1+y) / (1 - e^{-a(1+y)}) - a y`
    Tdy,
}

impl SeriesKind {
    pub const ALL: [SeriesKind; 4] = [SeriesKind::Chern, SeriesKind::Todd, SeriesKind::L, SeriesKind::Tdy];

    pub fn name(self) -> &'static str {
        match self {
            SeriesKind::Chern => "chern",
            SeriesKind::Todd => "todd",
            SeriesKind::L => "l",
            SeriesKind::Tdy => "tdy",
        }
    }

    /// The series through `a^order`. Orders up to [`DEFAULT_ORDER`] come
    /// from a cache.
    pub fn series(self, order: usize) -> CharClassSeries {
        static CACHE: OnceLock<[CharClassSeries; 4]> = OnceLock::new();
        if order <= DEFAULT_ORDER {
            let cache = CACHE.get_or_init(|| SeriesKind::ALL.map(|k| k.compute(DEFAULT_ORDER)));
            let idx = SeriesKind::ALL.iter().position(|k| *k == self).unwrap();
            return cache[idx].truncated(order);
        }
        self.compute(order)
    }

    fn compute(self, order: usize) -> CharClassSeries {
        match self {
            SeriesKind::Chern => series_chern(order),
            SeriesKind::Todd => series_todd(order),
            SeriesKind::L => series_l(order),
            SeriesKind::Tdy => series_tdy(order),
        }
    }
}

impl fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SeriesKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "chern" | "c" => Ok(SeriesKind::Chern),
            "todd" | "td" => Ok(SeriesKind::Todd),
            "l" | "l-class" | "hirzebruch-l" => Ok(SeriesKind::L),
            "tdy" | "td_y" | "hirzebruch" => Ok(SeriesKind::Tdy),
            other => Err(Error::Parse(format!("unknown series `{other}`"))),
        }
    }
}

/// A power series in one Chern root with coefficients in `Q[params]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharClassSeries {
    coefficients: Vec<Coeff>,
    params: Vec<String>,
}

impl CharClassSeries {
    pub fn new(coefficients: Vec<Coeff>, params: Vec<String>) -> Result<Self> {
        if coefficients.first().is_none_or(|c| !c.is_one()) {
            return Err(Error::InvalidSeries("constant coefficient must be 1".into()));
        }
        if let Some(c) = coefficients.iter().find(|c| c.var_span() > params.len()) {
            return Err(Error::InvalidSeries(format!(
                "coefficient `{}` uses undeclared parameters",
                c.to_pq_string(&params)
            )));
        }
        Ok(CharClassSeries { coefficients, params })
    }

    pub fn from_rationals(coefficients: Vec<Rational>) -> Result<Self> {
        Self::new(coefficients.into_iter().map(Coeff::from_rational).collect(), Vec::new())
    }

    /// Highest power of `a` carried.
    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[Coeff] {
        &self.coefficients
    }

    pub fn coefficient(&self, k: usize) -> Coeff {
        self.coefficients.get(k).cloned().unwrap_or_default()
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn truncated(&self, order: usize) -> Self {
        let mut coefficients = self.coefficients.clone();
        coefficients.truncate(order + 1);
        CharClassSeries {
            coefficients,
            params: self.params.clone(),
        }
    }

    /// Coefficients of `log Q(a)` through the series order; index 0 is 0.
    pub fn log_coefficients(&self) -> Vec<Coeff> {
        let n = self.order();
        let mut u = self.coefficients.clone();
        u[0] = Coeff::zero();
        let mut out = vec![Coeff::zero(); n + 1];
        let mut power = {
            let mut p = vec![Coeff::zero(); n + 1];
            p[0] = Coeff::one();
            p
        };
        for j in 1..=n {
            power = mul_truncated(&power, &u, n);
            let w = Rational::new(if j % 2 == 1 { 1 } else { -1 }.into(), (j as i64).into());
            for (o, p) in out.iter_mut().zip(&power) {
                *o += &p.scale(&w);
            }
        }
        out
    }

    pub fn to_pretty_string(&self) -> String {
        let mut out = String::new();
        for (k, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let body = c.to_pretty_string(&self.params);
            let (neg, body) = match body.strip_prefix('-') {
                Some(rest) if c.terms().count() == 1 => (true, rest.to_string()),
                _ => (false, body),
            };
            let body = if c.terms().count() > 1 {
                format!("({body})")
            } else {
                body
            };
            let power = match k {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{k}"),
            };
            let term = match (body.as_str(), power.is_empty()) {
                (_, true) => body,
                ("1", false) => power,
                _ => format!("{body}*{power}"),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn mul_truncated(a: &[Coeff], b: &[Coeff], n: usize) -> Vec<Coeff> {
    let mut out = vec![Coeff::zero(); n + 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j > n {
                break;
            }
            out[i + j] += &(x * y);
        }
    }
    out
}

/// Inverse of a rational power series with nonzero constant term.
fn invert_rational_series(s: &[Rational], n: usize) -> Vec<Rational> {
    let c0 = s[0].recip();
    let mut out = vec![Rational::zero(); n + 1];
    out[0] = c0.clone();
    for k in 1..=n {
        let mut acc = Rational::zero();
        for i in 1..=k.min(s.len() - 1) {
            acc += &s[i] * &out[k - i];
        }
        out[k] = -acc * &c0;
    }
    out
}

fn factorial(k: usize) -> Rational {
    (1..=k).fold(Rational::one(), |acc, i| acc * int(i as i64))
}

/// Rational coefficients of `a / (1 - e^{-a})`.
fn todd_rational(n: usize) -> Vec<Rational> {
    // (1 - e^{-a}) / a = sum_k (-1)^k a^k / (k+1)!
    let denom: Vec<Rational> = (0..=n)
        .map(|k| {
            let s = if k % 2 == 0 { 1 } else { -1 };
            int(s) / factorial(k + 1)
        })
        .collect();
    invert_rational_series(&denom, n)
}

pub fn series_chern(order: usize) -> CharClassSeries {
    let mut c = vec![Coeff::zero(); order + 1];
    c[0] = Coeff::one();
    if order >= 1 {
        c[1] = Coeff::one();
    }
    CharClassSeries::new(c, Vec::new()).unwrap()
}

pub fn series_todd(order: usize) -> CharClassSeries {
    CharClassSeries::from_rationals(todd_rational(order)).unwrap()
}

/// `a cosh(a) / sinh(a)`.
pub fn series_l(order: usize) -> CharClassSeries {
    let sinh_over_a: Vec<Rational> = (0..=order)
        .map(|k| {
            if k % 2 == 0 {
                factorial(k + 1).recip()
            } else {
                Rational::zero()
            }
        })
        .collect();
    let cosh: Vec<Rational> = (0..=order)
        .map(|k| {
            if k % 2 == 0 {
                factorial(k).recip()
            } else {
                Rational::zero()
            }
        })
        .collect();
    let inv = invert_rational_series(&sinh_over_a, order);
    let mut out = vec![Rational::zero(); order + 1];
    for (i, x) in cosh.iter().enumerate() {
        for (j, z) in inv.iter().enumerate().take(order + 1 - i) {
            out[i + j] += x * z;
        }
    }
    CharClassSeries::from_rationals(out).unwrap()
}

/// The modified Todd series with coefficients in `Q[y]`.
///
/// With `b = a(1+y)` the first summand is the Todd series in `b`, so its
/// `a^k` coefficient is `td_k (1+y)^k`; the `-a y` correction only touches `k = 1`.
pub fn series_tdy(order: usize) -> CharClassSeries {
    let td = todd_rational(order);
    let one_plus_y = &Coeff::one() + &Coeff::var(0);
    let mut coefficients = Vec::with_capacity(order + 1);
    let mut pow = Coeff::one();
    for (k, t) in td.iter().enumerate() {
        let mut c = pow.scale(t);
        if k == 1 {
            c = &c - &Coeff::var(0);
        }
        coefficients.push(c);
        pow = &pow * &one_plus_y;
    }
    CharClassSeries::new(coefficients, vec![Y.to_string()]).unwrap()
}

/// Substitutes `y = y0` into every coefficient.
pub fn specialize_y(s: &CharClassSeries, y0: &Rational) -> CharClassSeries {
    let Some(idx) = s.params.iter().position(|p| p == Y) else {
        return s.clone();
    };
    let mut params = s.params.clone();
    params.remove(idx);
    CharClassSeries {
        coefficients: s.coefficients.iter().map(|c| c.substitute(idx, y0)).collect(),
        params,
    }
}

/// Total Chern class and rank of a vector bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleData {
    total_chern: GradedElement,
    rank: usize,
}

impl BundleData {
    pub fn new(total_chern: GradedElement, rank: usize) -> Result<Self> {
        if !total_chern.constant_term().is_one() {
            return Err(Error::InvalidBundle(
                "total Chern class must have constant term 1".into(),
            ));
        }
        let limit = (rank as u32).min(total_chern.ring().truncation());
        if total_chern.max_degree().unwrap_or(0) > limit {
            return Err(Error::InvalidBundle(format!(
                "Chern classes above the rank {rank} do not vanish"
            )));
        }
        Ok(BundleData { total_chern, rank })
    }

    pub fn trivial(ring: &Arc<RingPresentation>, rank: usize) -> Self {
        BundleData {
            total_chern: GradedElement::one(ring),
            rank,
        }
    }

    /// The line bundle with first Chern class `d`.
    pub fn line(d: &GradedElement) -> Result<Self> {
        if !d.is_homogeneous(1) {
            return Err(Error::InvalidBundle(
                "first Chern class must be homogeneous of degree 1".into(),
            ));
        }
        BundleData::new(GradedElement::one(d.ring()).add(d)?, 1)
    }

    pub fn total_chern(&self) -> &GradedElement {
        &self.total_chern
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn chern_class(&self, i: u32) -> GradedElement {
        if i as usize > self.rank {
            return GradedElement::zero(self.total_chern.ring());
        }
        self.total_chern.component(i)
    }

    pub fn direct_sum(&self, other: &BundleData) -> Result<Self> {
        Ok(BundleData {
            total_chern: self.total_chern.mul(&other.total_chern)?,
            rank: self.rank + other.rank,
        })
    }
}

/// Power sums `p_0 .. p_order` of the Chern roots, with `p_0 = rank`.
pub fn power_sums_from_chern(b: &BundleData, order: usize) -> Result<Vec<GradedElement>> {
    let ring = b.total_chern.ring();
    if order > ring.truncation() as usize {
        return Err(Error::SeriesTooShort {
            have: ring.truncation() as usize,
            need: order,
        });
    }
    let e: Vec<GradedElement> = (0..=order).map(|i| b.chern_class(i as u32)).collect();
    let mut p = vec![GradedElement::from_int(ring, b.rank as i64)];
    for k in 1..=order {
        // p_k = sum_{i<k} (-1)^{i-1} e_i p_{k-i} + (-1)^{k-1} k e_k
        let mut acc = e[k].scale_rational(&int(if k % 2 == 1 { k as i64 } else { -(k as i64) }));
        for i in 1..k {
            let term = e[i].mul(&p[k - i])?;
            acc = if i % 2 == 1 { acc.add(&term)? } else { acc.sub(&term)? };
        }
        p.push(acc);
    }
    Ok(p)
}

/// Elementary symmetric functions `e_0 .. e_n` from power sums `p_0 .. p_n`.
pub fn elementary_from_power_sums(p: &[GradedElement]) -> Result<Vec<GradedElement>> {
    let ring = p[0].ring();
    let mut e = vec![GradedElement::one(ring)];
    for k in 1..p.len() {
        // k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i
        let mut acc = GradedElement::zero(ring);
        for i in 1..=k {
            let term = e[k - i].mul(&p[i])?;
            acc = if i % 2 == 1 { acc.add(&term)? } else { acc.sub(&term)? };
        }
        e.push(acc.scale_rational(&int(k as i64).recip()));
    }
    Ok(e)
}

/// `prod_i Q(a_i)` for the Chern roots `a_i` of `b`, in the bundle's ring
/// extended by the series' parameters.
pub fn apply_series(s: &CharClassSeries, b: &BundleData) -> Result<GradedElement> {
    if !s.coefficient(0).is_one() {
        return Err(Error::InvalidSeries("constant coefficient must be 1".into()));
    }
    let base = b.total_chern.ring();
    let n = base.truncation() as usize;
    if s.order() < n {
        return Err(Error::SeriesTooShort {
            have: s.order(),
            need: n,
        });
    }
    let params: Vec<&str> = s.params.iter().map(String::as_str).collect();
    let ring = Arc::new(base.with_params(&params)?);
    let map: Vec<usize> = s
        .params
        .iter()
        .map(|p| ring.params().iter().position(|q| q == p).expect("parameter was added"))
        .collect();
    let b = BundleData {
        total_chern: b.total_chern.in_ring(&ring)?,
        rank: b.rank,
    };
    let p = power_sums_from_chern(&b, n)?;
    let logs = s.log_coefficients();
    let mut x = GradedElement::zero(&ring);
    for k in 1..=n {
        x = x.add(&p[k].scale(&logs[k].reindex(&map)))?;
    }
    x.exp_nilpotent()
}
