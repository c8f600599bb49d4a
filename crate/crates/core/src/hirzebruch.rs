//! The Hirzebruch class transformation `T_y*` on formal sums of catalog
//! varieties mapping to a space, and the χ_y-genus.

use std::fmt;
use std::sync::Arc;

use crate::classes::{apply_series, series_tdy, BundleData, CharClassSeries, DEFAULT_ORDER, Y};
use crate::csm::{Arrangement, DivisorSubset};
use crate::error::{Error, Result};
use crate::ring::{Coeff, GradedElement, Rational, RingPresentation};
use crate::spaces::Space;

/// A class in `A_*(X) ⊗ Q[y]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HirzebruchClass {
    pub value: GradedElement,
    pub space: Space,
}

impl HirzebruchClass {
    /// The class with `y` set to a number.
    pub fn specialize(&self, y: &Rational) -> Result<GradedElement> {
        self.value.substitute_param(Y, y)
    }

    /// Degree of the class, a polynomial in `y`.
    pub fn degree(&self) -> Result<Coeff> {
        self.space.integrate(&self.value)
    }
}

fn tdy() -> CharClassSeries {
    series_tdy(DEFAULT_ORDER)
}

fn tdy_of(b: &BundleData) -> Result<GradedElement> {
    let s = tdy();
    if s.order() < b.total_chern().ring().truncation() as usize {
        return apply_series(&series_tdy(b.total_chern().ring().truncation() as usize), b);
    }
    apply_series(&s, b)
}

/// `td_y(TX) ⌢ [X]`.
pub fn ty_smooth(x: &Space) -> Result<HirzebruchClass> {
    Ok(HirzebruchClass {
        value: tdy_of(x.tangent())?,
        space: x.clone(),
    })
}

/// `χ_y(X)`, with `y` as parameter 0 of the returned coefficient.
pub fn chi_y(x: &Space) -> Result<Coeff> {
    ty_smooth(x)?.degree()
}

/// Evaluates a polynomial in `y` at a number.
pub fn eval_y(p: &Coeff, y: &Rational) -> Rational {
    p.eval(std::slice::from_ref(y))
        .expect("a polynomial in y alone evaluates at one value")
}

/// Where a term of a [`MotivicClass`] comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermSource {
    /// `[X -> X]`.
    Identity,
    /// The inclusion of the closed stratum `D_I` of the class's arrangement.
    ClosedStratum(DivisorSubset),
    /// A catalog space mapped to a point of `X`.
    ConstantToPoint(Space),
    /// A variety outside the catalog; evaluating it fails.
    Opaque(String),
}

impl fmt::Display for TermSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermSource::Identity => write!(f, "[X]"),
            TermSource::ClosedStratum(i) => write!(f, "[D{i}]"),
            TermSource::ConstantToPoint(v) => write!(f, "[{} -> pt]", v.label()),
            TermSource::Opaque(label) => write!(f, "[{label}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotivicTerm {
    pub weight: i64,
    pub source: TermSource,
}

/// An integer combination of classes `[V -> X]` in the Grothendieck group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotivicClass {
    pub target: Space,
    pub arrangement: Option<Arrangement>,
    pub terms: Vec<MotivicTerm>,
}

impl MotivicClass {
    pub fn identity(x: &Space) -> Self {
        MotivicClass {
            target: x.clone(),
            arrangement: None,
            terms: vec![MotivicTerm {
                weight: 1,
                source: TermSource::Identity,
            }],
        }
    }

    pub fn push(&mut self, weight: i64, source: TermSource) {
        self.terms.push(MotivicTerm { weight, source });
    }
}

impl fmt::Display for MotivicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let sign = if t.weight < 0 { "-" } else { "+" };
            match (i, t.weight.abs()) {
                (0, 1) if t.weight > 0 => write!(f, "{}", t.source)?,
                (0, w) if t.weight > 0 => write!(f, "{w}{}", t.source)?,
                (0, 1) => write!(f, "-{}", t.source)?,
                (0, w) => write!(f, "-{w}{}", t.source)?,
                (_, 1) => write!(f, " {sign} {}", t.source)?,
                (_, w) => write!(f, " {sign} {w}{}", t.source)?,
            }
        }
        Ok(())
    }
}

/// `[D_I - union_{j not in I} D_j] = sum_{J ⊇ I} (-1)^{|J - I|} [D_J]`.
pub fn scissor_decompose_stratum(arr: &Arrangement, i: DivisorSubset) -> Result<MotivicClass> {
    // reuse the stratum checks of the CSM code
    crate::csm::csm_stratum(arr, i)?;
    let mut m = MotivicClass {
        target: arr.ambient().clone(),
        arrangement: Some(arr.clone()),
        terms: Vec::new(),
    };
    for j in arr.strata().filter(|j| j.0 & i.0 == i.0) {
        if j.len() > arr.ambient().dim() {
            continue;
        }
        let sign = if (j.len() - i.len()).is_multiple_of(2) { 1 } else { -1 };
        let source = if j.is_empty() {
            TermSource::Identity
        } else {
            TermSource::ClosedStratum(j)
        };
        m.push(sign, source);
    }
    Ok(m)
}

/// The complement of all divisors as a signed sum of closed strata.
pub fn scissor_decompose(arr: &Arrangement) -> Result<MotivicClass> {
    scissor_decompose_stratum(arr, DivisorSubset::EMPTY)
}

/// `T_y*` of a formal sum, term by term.
///
/// A closed stratum contributes `td_y(TW) / prod_{i in I} td_y(O(D_i)) ⌢ [D_I]`
/// and a space `V` mapped to a point contributes `χ_y(V) [pt]`.
pub fn ty_of_class(m: &MotivicClass) -> Result<HirzebruchClass> {
    let x = &m.target;
    let smooth = ty_smooth(x)?;
    let ring: Arc<RingPresentation> = smooth.value.ring().clone();
    let mut value = GradedElement::zero(&ring);
    for t in &m.terms {
        let part = match &t.source {
            TermSource::Identity => smooth.value.clone(),
            TermSource::ClosedStratum(i) => {
                let arr = m
                    .arrangement
                    .as_ref()
                    .ok_or_else(|| Error::UncomputableTerm(format!("{} needs an arrangement", t.source)))?;
                if !arr.ambient().ring().same_quotient(x.ring()) {
                    return Err(Error::UncomputableTerm(format!(
                        "{}: arrangement does not live on {}",
                        t.source,
                        x.label()
                    )));
                }
                let mut part = smooth.value.mul(&arr.stratum_closure_class(*i)?)?;
                for k in i.indices() {
                    let normal = BundleData::line(&arr.divisors().classes()[k])?;
                    part = part.mul(&tdy_of(&normal)?.invert_unit()?)?;
                }
                part
            }
            TermSource::ConstantToPoint(v) => {
                let chi = chi_y(v)?;
                GradedElement::constant(&ring, chi).mul(&x.point_class().in_ring(&ring)?)?
            }
            TermSource::Opaque(label) => {
                return Err(Error::UncomputableTerm(format!("`{label}` is not a catalog space")))
            }
        };
        value = value.add(&part.scale_rational(&Rational::from_integer(t.weight.into())))?;
    }
    Ok(HirzebruchClass {
        value,
        space: x.clone(),
    })
}

/// `T_y*` of an open arrangement stratum.
pub fn ty_stratum(arr: &Arrangement, i: DivisorSubset) -> Result<HirzebruchClass> {
    ty_of_class(&scissor_decompose_stratum(arr, i)?)
}

/// Finite-level model of the scaled class of a point under a rank-one
/// torus: `Q((1+k)^{l+1})^{-1} * Q(T P^l)` in `Q[k]/(k^{l+1})`. It is 1 at
/// every level for every multiplicative series.
pub fn equivariant_scaling_approx(series: &CharClassSeries, level: usize) -> Result<GradedElement> {
    if level == 0 {
        return Err(Error::InvalidModel("approximation level must be at least 1".into()));
    }
    if series.order() < level {
        return Err(Error::SeriesTooShort {
            have: series.order(),
            need: level,
        });
    }
    let ring = Arc::new(RingPresentation::truncated_polynomial("k", level as u32));
    let k = GradedElement::generator(&ring, "k")?;
    let c = GradedElement::one(&ring).add(&k)?.pow(level as u32 + 1);
    let universal = BundleData::new(c.clone(), level + 1)?;
    let tangent = BundleData::new(c, level)?;
    apply_series(series, &universal)?
        .invert_unit()?
        .mul(&apply_series(series, &tangent)?)
}
