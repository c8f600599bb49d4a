//! Chern-Schwartz-MacPherson classes of smooth spaces, normal-crossing
//! complements and their strata.
//!
//! An [`Arrangement`] is a smooth ambient space `W` with divisors
//! `D_1..D_r` asserted to be smooth with normal crossings. Its strata are
//! indexed by subsets `I`: the open stratum of `I` is
//! `D_I - union_{j not in I} D_j` where `D_I` is the intersection of the
//! `D_i`, `i in I`. Every class is pushed into `A_*(W)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::Zero;

use crate::classes::BundleData;
use crate::error::{Error, Result};
use crate::ring::{GradedElement, Rational};
use crate::spaces::{DivisorSet, Space};

/// A subset of divisor indices, stored as a bit mask (bit `i` is `D_{i+1}`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DivisorSubset(pub u32);

impl DivisorSubset {
    pub const EMPTY: DivisorSubset = DivisorSubset(0);

    /// From zero-based indices.
    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        DivisorSubset(indices.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Zero-based indices in increasing order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }

    /// All subsets of `{0..r-1}`.
    pub fn all(r: usize) -> impl Iterator<Item = DivisorSubset> {
        (0..(1u32 << r)).map(DivisorSubset)
    }
}

/// Written one-based, e.g. `{1,3}`.
impl fmt::Display for DivisorSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl FromStr for DivisorSubset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|x| x.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("stratum key `{s}` must look like {{1,2}}")))?;
        let mut mask = 0u32;
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let i: usize = part
                .parse()
                .map_err(|_| Error::Parse(format!("bad divisor index `{part}`")))?;
            if i == 0 || i > 32 {
                return Err(Error::Parse(format!("divisor index {i} out of range 1..=32")));
            }
            mask |= 1 << (i - 1);
        }
        Ok(DivisorSubset(mask))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    ambient: Space,
    divisors: DivisorSet,
}

impl Arrangement {
    pub fn new(ambient: Space, divisors: DivisorSet) -> Result<Self> {
        if divisors.len() > 16 {
            return Err(Error::InvalidArrangement("at most 16 divisors are supported".into()));
        }
        for (i, d) in divisors.classes().iter().enumerate() {
            if !d.ring().same_quotient(ambient.ring()) {
                return Err(Error::InvalidArrangement(format!(
                    "divisor {} is not a class on {}",
                    i + 1,
                    ambient.label()
                )));
            }
        }
        Ok(Arrangement { ambient, divisors })
    }

    /// Builds the divisors from expressions such as `h` or `h1 + h2`.
    pub fn from_classes(ambient: Space, classes: &[&str]) -> Result<Self> {
        let ds = classes.iter().map(|c| ambient.element(c)).collect::<Result<Vec<_>>>()?;
        Arrangement::new(ambient, DivisorSet::new(ds, true)?)
    }

    pub fn ambient(&self) -> &Space {
        &self.ambient
    }

    pub fn divisors(&self) -> &DivisorSet {
        &self.divisors
    }

    pub fn len(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }

    pub fn strata(&self) -> impl Iterator<Item = DivisorSubset> {
        DivisorSubset::all(self.len())
    }

    fn check(&self) -> Result<()> {
        if !self.divisors.normal_crossings() {
            return Err(Error::InvalidArrangement(
                "divisors are not asserted to have normal crossings".into(),
            ));
        }
        Ok(())
    }

    fn check_subset(&self, i: DivisorSubset) -> Result<()> {
        if i.0 >> self.len() != 0 {
            return Err(Error::InvalidArrangement(format!(
                "stratum {i} refers to a divisor beyond D_{}",
                self.len()
            )));
        }
        Ok(())
    }

    /// `prod_{i in I} (1 + D_i)`.
    fn one_plus(&self, i: DivisorSubset) -> Result<GradedElement> {
        let ring = self.ambient.ring();
        let mut acc = GradedElement::one(ring);
        for k in i.indices() {
            acc = acc.mul(&GradedElement::one(ring).add(&self.divisors.classes()[k])?)?;
        }
        Ok(acc)
    }

    /// `[D_I] = prod_{i in I} D_i`.
    pub fn stratum_closure_class(&self, i: DivisorSubset) -> Result<GradedElement> {
        self.check_subset(i)?;
        let ring = self.ambient.ring();
        GradedElement::product(ring, i.indices().map(|k| &self.divisors.classes()[k]))
    }

    fn full(&self) -> DivisorSubset {
        DivisorSubset((1u32 << self.len()) - 1)
    }
}

/// A class in `A_*(W)` of a constructible function on the ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsmClass {
    pub value: GradedElement,
    pub ambient: Space,
    pub support: String,
}

impl CsmClass {
    /// Homogeneous part of dimension `k`, i.e. codimension `dim W - k`.
    pub fn dimension_component(&self, k: usize) -> GradedElement {
        if k > self.ambient.dim() {
            return GradedElement::zero(self.value.ring());
        }
        self.value.component((self.ambient.dim() - k) as u32)
    }
}

/// Rational values on the arrangement strata; missing strata are zero.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ArrangementFunction {
    values: BTreeMap<DivisorSubset, Rational>,
}

impl ArrangementFunction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn indicator(i: DivisorSubset) -> Self {
        Self::new().with(i, Rational::from_integer(1.into()))
    }

    /// The constant function `c` on every stratum.
    pub fn constant(r: usize, c: Rational) -> Self {
        let mut f = Self::new();
        for i in DivisorSubset::all(r) {
            f.set(i, c.clone());
        }
        f
    }

    pub fn with(mut self, i: DivisorSubset, v: Rational) -> Self {
        self.set(i, v);
        self
    }

    pub fn set(&mut self, i: DivisorSubset, v: Rational) {
        if v.is_zero() {
            self.values.remove(&i);
        } else {
            self.values.insert(i, v);
        }
    }

    pub fn get(&self, i: DivisorSubset) -> Rational {
        self.values.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DivisorSubset, &Rational)> {
        self.values.iter()
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: &Rational, other: &Self, b: &Rational) -> Self {
        let mut out = Self::new();
        for k in self.values.keys().chain(other.values.keys()) {
            out.set(*k, a * self.get(*k) + b * other.get(*k));
        }
        out
    }
}

/// `c(TX) ⌢ [X]`.
pub fn csm_smooth(x: &Space) -> CsmClass {
    CsmClass {
        value: x.tangent().total_chern().clone(),
        ambient: x.clone(),
        support: x.label().to_string(),
    }
}

/// CSM class of the complement `W - union D_i`: `c(TW) / prod (1 + D_i) ⌢ [W]`.
pub fn csm_complement(arr: &Arrangement) -> Result<CsmClass> {
    arr.check()?;
    let log_tangent = arr
        .ambient
        .tangent()
        .total_chern()
        .mul(&arr.one_plus(arr.full())?.invert_unit()?)?;
    Ok(CsmClass {
        value: log_tangent,
        ambient: arr.ambient.clone(),
        support: format!("{} - D", arr.ambient.label()),
    })
}

/// CSM class of the open stratum `D_I - union_{j not in I} D_j`.
///
/// Uses adjunction `c(TD_I) = c(TW) / prod_{i in I} (1 + D_i)`, the
/// complement formula on `D_I` with boundary `D_I ∩ D_j`, and pushes
/// forward by multiplying with `[D_I]`.
pub fn csm_stratum(arr: &Arrangement, i: DivisorSubset) -> Result<CsmClass> {
    arr.check()?;
    arr.check_subset(i)?;
    let support = format!("stratum {i}");
    let ring = arr.ambient.ring();
    if i.len() > arr.ambient.dim() {
        return Ok(CsmClass {
            value: GradedElement::zero(ring),
            ambient: arr.ambient.clone(),
            support,
        });
    }
    let c_tw = arr.ambient.tangent().total_chern();
    let c_td = c_tw.mul(&arr.one_plus(i)?.invert_unit()?)?;
    let outside = DivisorSubset(arr.full().0 & !i.0);
    let log_part = c_td.mul(&arr.one_plus(outside)?.invert_unit()?)?;
    let value = log_part.mul(&arr.stratum_closure_class(i)?)?;
    Ok(CsmClass {
        value,
        ambient: arr.ambient.clone(),
        support,
    })
}

/// `sum_I alpha_I * csm_stratum(I)`.
pub fn csm_of_function(arr: &Arrangement, alpha: &ArrangementFunction) -> Result<CsmClass> {
    arr.check()?;
    let mut value = GradedElement::zero(arr.ambient.ring());
    for (i, a) in alpha.iter() {
        let c = csm_stratum(arr, *i)?;
        value = value.add(&c.value.scale_rational(a))?;
    }
    Ok(CsmClass {
        value,
        ambient: arr.ambient.clone(),
        support: "function".into(),
    })
}

/// Degree of the class; equals the weighted Euler characteristic.
pub fn euler_degree(c: &CsmClass) -> Rational {
    c.ambient
        .integrate_rational(&c.value)
        .expect("CSM classes have rational coefficients on their ambient space")
}

/// `∫ c(E) ⌢ C_*(α)`.
pub fn enumerative_degree(x: &Space, e: &BundleData, alpha: &CsmClass) -> Result<Rational> {
    if !alpha.ambient.ring().same_quotient(x.ring()) {
        return Err(Error::PresentationMismatch(
            "class does not live on the given space".into(),
        ));
    }
    x.integrate_rational(&e.total_chern().mul(&alpha.value)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::int;
    use crate::spaces::{product, projective_space};

    fn set(ix: &[usize]) -> DivisorSubset {
        DivisorSubset::from_indices(ix.iter().map(|i| i - 1))
    }

    #[test]
    fn subset_text_form() {
        assert_eq!(set(&[1, 3]).to_string(), "{1,3}");
        assert_eq!("{}".parse::<DivisorSubset>().unwrap(), DivisorSubset::EMPTY);
        assert_eq!("{2, 1}".parse::<DivisorSubset>().unwrap(), set(&[1, 2]));
        assert!("{0}".parse::<DivisorSubset>().is_err());
        assert!("1,2".parse::<DivisorSubset>().is_err());
    }

    #[test]
    fn smooth_classes() {
        let c = csm_smooth(&projective_space(2));
        assert_eq!(c.value.to_string(), "1 + 3*h + 3*h^2");
        assert_eq!(euler_degree(&c), int(3));
        assert_eq!(euler_degree(&csm_smooth(&projective_space(0))), int(1));
        let p1 = projective_space(1);
        let q = csm_smooth(&product(&p1, &p1).unwrap());
        assert_eq!(q.value.to_string(), "1 + 2*h2 + 2*h1 + 4*h1*h2");
        assert_eq!(euler_degree(&q), int(4));
        assert_eq!(euler_degree(&csm_smooth(&projective_space(3))), int(4));
    }

    #[test]
    fn complements() {
        let a1 = Arrangement::from_classes(projective_space(1), &["h"]).unwrap();
        let c = csm_complement(&a1).unwrap();
        assert_eq!(c.value.to_string(), "1 + h");
        assert_eq!(euler_degree(&c), int(1));

        let a2 = Arrangement::from_classes(projective_space(2), &["h"]).unwrap();
        let c = csm_complement(&a2).unwrap();
        assert_eq!(c.value.to_string(), "1 + 2*h + h^2");
        assert_eq!(euler_degree(&c), int(1));

        let empty = Arrangement::from_classes(projective_space(2), &[]).unwrap();
        assert_eq!(
            csm_complement(&empty).unwrap().value,
            csm_smooth(&projective_space(2)).value
        );

        let c_star = Arrangement::from_classes(projective_space(1), &["h", "h"]).unwrap();
        assert_eq!(euler_degree(&csm_complement(&c_star).unwrap()), int(0));
    }

    #[test]
    fn strata_of_two_lines() {
        let arr = Arrangement::from_classes(projective_space(2), &["h", "h"]).unwrap();
        assert_eq!(euler_degree(&csm_stratum(&arr, set(&[1])).unwrap()), int(1));
        assert_eq!(euler_degree(&csm_stratum(&arr, set(&[1, 2])).unwrap()), int(1));
        assert_eq!(euler_degree(&csm_stratum(&arr, DivisorSubset::EMPTY).unwrap()), int(0));
        assert_eq!(
            csm_stratum(&arr, DivisorSubset::EMPTY).unwrap().value,
            csm_complement(&arr).unwrap().value
        );
    }

    #[test]
    fn deep_strata_are_zero() {
        let arr = Arrangement::from_classes(projective_space(1), &["h", "h"]).unwrap();
        assert!(csm_stratum(&arr, set(&[1, 2])).unwrap().value.is_zero());
        assert!(csm_stratum(&arr, set(&[3])).is_err());
    }

    #[test]
    fn functions_on_strata() {
        let p2 = projective_space(2);
        let arr = Arrangement::from_classes(p2.clone(), &["h"]).unwrap();
        let all = ArrangementFunction::constant(1, int(1));
        assert_eq!(csm_of_function(&arr, &all).unwrap().value, csm_smooth(&p2).value);
        let ind = ArrangementFunction::indicator(DivisorSubset::EMPTY);
        assert_eq!(
            csm_of_function(&arr, &ind).unwrap().value,
            csm_complement(&arr).unwrap().value
        );

        let arr = Arrangement::from_classes(projective_space(1), &["h"]).unwrap();
        let f = ArrangementFunction::new()
            .with(set(&[1]), int(2))
            .with(DivisorSubset::EMPTY, int(3));
        assert_eq!(euler_degree(&csm_of_function(&arr, &f).unwrap()), int(5));
    }

    #[test]
    fn enumerative_degrees() {
        let p2 = projective_space(2);
        let c = csm_smooth(&p2);
        let o1 = BundleData::line(&p2.element("h").unwrap()).unwrap();
        assert_eq!(enumerative_degree(&p2, &o1, &c).unwrap(), int(6));
        let trivial = BundleData::trivial(p2.ring(), 2);
        assert_eq!(enumerative_degree(&p2, &trivial, &c).unwrap(), euler_degree(&c));
        let p1 = projective_space(1);
        let o2 = BundleData::line(&p1.element("2*h").unwrap()).unwrap();
        assert_eq!(enumerative_degree(&p1, &o2, &csm_smooth(&p1)).unwrap(), int(4));
    }

    #[test]
    fn zero_class_has_degree_zero() {
        let p2 = projective_space(2);
        let z = CsmClass {
            value: GradedElement::zero(p2.ring()),
            ambient: p2,
            support: "empty".into(),
        };
        assert_eq!(euler_degree(&z), int(0));
    }

    #[test]
    fn missing_normal_crossing_assertion_is_rejected() {
        let p2 = projective_space(2);
        let ds = DivisorSet::new(vec![p2.element("h").unwrap()], false).unwrap();
        let arr = Arrangement::new(p2, ds).unwrap();
        assert!(matches!(csm_complement(&arr), Err(Error::InvalidArrangement(_))));
    }

    #[test]
    fn top_component_is_fundamental_class() {
        let c = csm_smooth(&projective_space(3));
        assert_eq!(c.dimension_component(3).to_string(), "1");
        assert!(c.dimension_component(4).is_zero());
    }
}
