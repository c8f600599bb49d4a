//! Finite-stabilizer quotient stacks `[X/G]` described by a stratification
//! of the coarse space, with per-stratum stabilizers.
//!
//! Functions on a model come at two levels. Invariant-level values live on
//! the atlas `X`; underline-level values live on the coarse space. They
//! differ by the stabilizer order: `alpha_j = |G_j| * underline_j`.

use std::sync::Arc;

use num::{BigInt, One, Zero};

use crate::csm::{csm_of_function, euler_degree, Arrangement, ArrangementFunction, DivisorSubset};
use crate::error::{Error, Result};
use crate::groups::{hom_count, measured_value, AbelianGroupSpec, FiniteGroup};
use crate::ring::Rational;
use crate::spaces::projective_space;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub label: String,
    /// Compactly supported Euler characteristic of the coarse stratum.
    pub chi_c: i64,
    pub stabilizer: FiniteGroup,
}

impl Stratum {
    pub fn new(label: impl Into<String>, chi_c: i64, stabilizer: FiniteGroup) -> Self {
        Stratum {
            label: label.into(),
            chi_c,
            stabilizer,
        }
    }
}

/// Ties each stratum of a model to one stratum of an arrangement on the atlas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbientLink {
    pub arrangement: Arrangement,
    pub strata: Vec<DivisorSubset>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratifiedStackModel {
    label: String,
    strata: Vec<Stratum>,
    /// Order of the presenting group; 0 when unknown.
    total_group_order: usize,
    link: Option<AmbientLink>,
}

impl StratifiedStackModel {
    pub fn new(label: impl Into<String>, strata: Vec<Stratum>, total_group_order: usize) -> Result<Self> {
        if strata.is_empty() {
            return Err(Error::InvalidModel("a model needs at least one stratum".into()));
        }
        for (i, s) in strata.iter().enumerate() {
            if strata[..i].iter().any(|t| t.label == s.label) {
                return Err(Error::InvalidModel(format!("duplicate stratum label `{}`", s.label)));
            }
            if total_group_order != 0 && !total_group_order.is_multiple_of(s.stabilizer.order()) {
                return Err(Error::InvalidModel(format!(
                    "stabilizer of `{}` has order {}, which does not divide {total_group_order}",
                    s.label,
                    s.stabilizer.order()
                )));
            }
        }
        Ok(StratifiedStackModel {
            label: label.into(),
            strata,
            total_group_order,
            link: None,
        })
    }

    /// Attaches an arrangement on the atlas. Each linked arrangement stratum
    /// must have the atlas Euler characteristic of its model stratum.
    pub fn with_link(mut self, arrangement: Arrangement, subsets: Vec<DivisorSubset>) -> Result<Self> {
        if subsets.len() != self.strata.len() {
            return Err(Error::InvalidModel(format!(
                "link lists {} arrangement strata for {} model strata",
                subsets.len(),
                self.strata.len()
            )));
        }
        for (j, i) in subsets.iter().enumerate() {
            if subsets[..j].contains(i) {
                return Err(Error::InvalidModel(format!("arrangement stratum {i} is linked twice")));
            }
            let chi = euler_degree(&crate::csm::csm_stratum(&arrangement, *i)?);
            let expected = Rational::from_integer(self.atlas_chi(j).into());
            if chi != expected {
                return Err(Error::InvalidModel(format!(
                    "stratum `{}` has atlas Euler characteristic {expected}, but arrangement stratum {i} has {chi}",
                    self.strata[j].label
                )));
            }
        }
        self.link = Some(AmbientLink {
            arrangement,
            strata: subsets,
        });
        Ok(self)
    }

    /// `[pt/G]`.
    pub fn point(g: FiniteGroup) -> Self {
        let order = g.order();
        StratifiedStackModel {
            label: "pt".into(),
            strata: vec![Stratum::new("pt", 1, g)],
            total_group_order: order,
            link: None,
        }
    }

    /// `P^1` modulo the rotation `z -> -z`: two fixed points with stabilizer
    /// `Z/2` and a free open part, linked to `P^1` with the fixed points as
    /// divisors.
    pub fn projective_line_mod_involution() -> Self {
        let z2 = FiniteGroup::cyclic(2).expect("Z/2");
        let model = StratifiedStackModel::new(
            "P1/Z2",
            vec![
                Stratum::new("fix1", 1, z2.clone()),
                Stratum::new("fix2", 1, z2),
                Stratum::new("open", 0, FiniteGroup::trivial()),
            ],
            2,
        )
        .expect("valid strata");
        let arr = Arrangement::from_classes(projective_space(1), &["h", "h"]).expect("two points on P1");
        model
            .with_link(
                arr,
                vec![
                    DivisorSubset::from_indices([0]),
                    DivisorSubset::from_indices([1]),
                    DivisorSubset::EMPTY,
                ],
            )
            .expect("link matches the strata")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }

    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    pub fn total_group_order(&self) -> usize {
        self.total_group_order
    }

    pub fn link(&self) -> Option<&AmbientLink> {
        self.link.as_ref()
    }

    pub fn stratum_index(&self, label: &str) -> Option<usize> {
        self.strata.iter().position(|s| s.label == label)
    }

    /// `|G| / |G_j|`, or 1 when the group order is unknown.
    pub fn orbit_factor(&self, j: usize) -> i64 {
        if self.total_group_order == 0 {
            1
        } else {
            (self.total_group_order / self.strata[j].stabilizer.order()) as i64
        }
    }

    /// Euler characteristic of the preimage of stratum `j` in the atlas.
    pub fn atlas_chi(&self, j: usize) -> i64 {
        self.strata[j].chi_c * self.orbit_factor(j)
    }

    pub fn coarse_euler_characteristic(&self) -> i64 {
        self.strata.iter().map(|s| s.chi_c).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    /// Values of a `G`-invariant function on the atlas.
    Invariant,
    /// Values on the coarse space.
    Underline,
}

#[derive(Clone, Debug)]
pub struct ConstructibleFunction {
    model: Arc<StratifiedStackModel>,
    values: Vec<Rational>,
    level: Level,
}

impl PartialEq for ConstructibleFunction {
    /// Equal when they live on the same model and agree at invariant level.
    fn eq(&self, other: &Self) -> bool {
        same_model(&self.model, &other.model) && self.invariant_values() == other.invariant_values()
    }
}

fn same_model(a: &Arc<StratifiedStackModel>, b: &Arc<StratifiedStackModel>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn to_rational(n: num::BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl ConstructibleFunction {
    pub fn new(model: &Arc<StratifiedStackModel>, values: Vec<Rational>, level: Level) -> Result<Self> {
        if values.len() != model.len() {
            return Err(Error::ModelMismatch(format!(
                "{} values for a model with {} strata",
                values.len(),
                model.len()
            )));
        }
        Ok(ConstructibleFunction {
            model: model.clone(),
            values,
            level,
        })
    }

    pub fn from_integers(model: &Arc<StratifiedStackModel>, values: &[i64], level: Level) -> Result<Self> {
        Self::new(
            model,
            values.iter().map(|&v| Rational::from_integer(v.into())).collect(),
            level,
        )
    }

    pub fn zero(model: &Arc<StratifiedStackModel>) -> Self {
        Self::constant(model, Rational::zero())
    }

    /// The constant invariant function `c`; `c = 1` is `1^(0)`.
    pub fn constant(model: &Arc<StratifiedStackModel>, c: Rational) -> Self {
        ConstructibleFunction {
            model: model.clone(),
            values: vec![c; model.len()],
            level: Level::Invariant,
        }
    }

    /// `1_X`: the stabilizer order `|G_j|` on each stratum.
    pub fn stabilizer_order(model: &Arc<StratifiedStackModel>) -> Self {
        let values = model
            .strata
            .iter()
            .map(|s| Rational::from_integer(s.stabilizer.order().into()))
            .collect();
        ConstructibleFunction {
            model: model.clone(),
            values,
            level: Level::Invariant,
        }
    }

    pub fn model(&self) -> &Arc<StratifiedStackModel> {
        &self.model
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    fn stab(&self, j: usize) -> Rational {
        Rational::from_integer(self.model.strata[j].stabilizer.order().into())
    }

    pub fn invariant_values(&self) -> Vec<Rational> {
        match self.level {
            Level::Invariant => self.values.clone(),
            Level::Underline => (0..self.values.len()).map(|j| &self.values[j] * self.stab(j)).collect(),
        }
    }

    pub fn underline_values(&self) -> Vec<Rational> {
        match self.level {
            Level::Underline => self.values.clone(),
            Level::Invariant => (0..self.values.len()).map(|j| &self.values[j] / self.stab(j)).collect(),
        }
    }

    pub fn to_level(&self, level: Level) -> Self {
        let values = match level {
            Level::Invariant => self.invariant_values(),
            Level::Underline => self.underline_values(),
        };
        ConstructibleFunction {
            model: self.model.clone(),
            values,
            level,
        }
    }

    fn check_same_model(&self, other: &Self) -> Result<()> {
        if !same_model(&self.model, &other.model) {
            return Err(Error::ModelMismatch(format!(
                "functions live on `{}` and `{}`",
                self.model.label, other.model.label
            )));
        }
        Ok(())
    }

    /// Pointwise product of invariant-level values.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_model(other)?;
        let values = self
            .invariant_values()
            .iter()
            .zip(other.invariant_values())
            .map(|(a, b)| a * b)
            .collect();
        Self::new(&self.model, values, Level::Invariant)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_model(other)?;
        let values = self
            .invariant_values()
            .iter()
            .zip(other.invariant_values())
            .map(|(a, b)| a + b)
            .collect();
        Self::new(&self.model, values, Level::Invariant)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        ConstructibleFunction {
            model: self.model.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
            level: self.level,
        }
    }

    /// Integral over the atlas: `sum_j chi_c(j) * |G|/|G_j| * alpha_j`.
    pub fn integral(&self) -> Rational {
        self.invariant_values()
            .iter()
            .enumerate()
            .map(|(j, a)| a * Rational::from_integer(self.model.atlas_chi(j).into()))
            .sum()
    }

    /// Integral over the coarse space: `sum_j chi_c(j) * underline_j`.
    pub fn underline_integral(&self) -> Rational {
        self.underline_values()
            .iter()
            .zip(&self.model.strata)
            .map(|(a, s)| a * Rational::from_integer(s.chi_c.into()))
            .sum()
    }
}

/// `1^A`: `|Hom(A, G_j)|` on each stratum, at invariant level.
pub fn canonical_function(a: &AbelianGroupSpec, model: &Arc<StratifiedStackModel>) -> ConstructibleFunction {
    let values = model
        .strata
        .iter()
        .map(|s| to_rational(hom_count(a, &s.stabilizer)))
        .collect();
    ConstructibleFunction {
        model: model.clone(),
        values,
        level: Level::Invariant,
    }
}

/// Multiplication by `1^A`. The level of the input is kept.
pub fn t_a(alpha: &ConstructibleFunction, a: &AbelianGroupSpec) -> ConstructibleFunction {
    let counts = canonical_function(a, &alpha.model).values;
    ConstructibleFunction {
        model: alpha.model.clone(),
        values: alpha.values.iter().zip(&counts).map(|(v, c)| v * c).collect(),
        level: alpha.level,
    }
}

/// Division by `1^A`; always defined since `|Hom(A, G)| >= 1`.
pub fn t_a_inverse(alpha: &ConstructibleFunction, a: &AbelianGroupSpec) -> ConstructibleFunction {
    let counts = canonical_function(a, &alpha.model).values;
    ConstructibleFunction {
        model: alpha.model.clone(),
        values: alpha.values.iter().zip(&counts).map(|(v, c)| v / c).collect(),
        level: alpha.level,
    }
}

/// A proper representable map between models, described by the Euler
/// characteristics `fiber[j][k]` of the fibers of source stratum `j` over a
/// point of target stratum `k`, both taken on atlases.
#[derive(Clone, Debug)]
pub struct StratifiedMap {
    source: Arc<StratifiedStackModel>,
    target: Arc<StratifiedStackModel>,
    fiber: Vec<Vec<i64>>,
}

impl StratifiedMap {
    /// Checks `sum_k fiber[j][k] * atlas_chi(k) = atlas_chi(j)` for every `j`.
    pub fn new(
        source: &Arc<StratifiedStackModel>,
        target: &Arc<StratifiedStackModel>,
        fiber: Vec<Vec<i64>>,
    ) -> Result<Self> {
        if fiber.len() != source.len() || fiber.iter().any(|row| row.len() != target.len()) {
            return Err(Error::InvalidMap(format!(
                "fiber matrix must be {} x {}",
                source.len(),
                target.len()
            )));
        }
        for (j, row) in fiber.iter().enumerate() {
            let pushed: i64 = row.iter().enumerate().map(|(k, e)| e * target.atlas_chi(k)).sum();
            if pushed != source.atlas_chi(j) {
                return Err(Error::InvalidMap(format!(
                    "fibers over the target add up to Euler characteristic {pushed}, but stratum `{}` has {}",
                    source.strata[j].label,
                    source.atlas_chi(j)
                )));
            }
        }
        Ok(StratifiedMap {
            source: source.clone(),
            target: target.clone(),
            fiber,
        })
    }

    pub fn identity(model: &Arc<StratifiedStackModel>) -> Self {
        let n = model.len();
        let fiber = (0..n).map(|j| (0..n).map(|k| i64::from(j == k)).collect()).collect();
        StratifiedMap {
            source: model.clone(),
            target: model.clone(),
            fiber,
        }
    }

    /// The map to `[pt/trivial]`.
    pub fn to_point(model: &Arc<StratifiedStackModel>) -> Self {
        let fiber = (0..model.len()).map(|j| vec![model.atlas_chi(j)]).collect();
        StratifiedMap {
            source: model.clone(),
            target: Arc::new(StratifiedStackModel::point(FiniteGroup::trivial())),
            fiber,
        }
    }

    pub fn source(&self) -> &Arc<StratifiedStackModel> {
        &self.source
    }

    pub fn target(&self) -> &Arc<StratifiedStackModel> {
        &self.target
    }

    pub fn fiber(&self) -> &[Vec<i64>] {
        &self.fiber
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &StratifiedMap) -> Result<StratifiedMap> {
        if !same_model(&self.target, &next.source) {
            return Err(Error::ModelMismatch(format!(
                "cannot compose: `{}` is not `{}`",
                self.target.label, next.source.label
            )));
        }
        let fiber = self
            .fiber
            .iter()
            .map(|row| {
                (0..next.target.len())
                    .map(|l| row.iter().zip(&next.fiber).map(|(e, r)| e * r[l]).sum())
                    .collect()
            })
            .collect();
        Ok(StratifiedMap {
            source: self.source.clone(),
            target: next.target.clone(),
            fiber,
        })
    }
}

/// `(f_* alpha)_k = sum_j fiber[j][k] * alpha_j` at invariant level.
///
/// Pushing to `[pt/G]` yields a single number; the finer G-degree as a
/// function over `BG` is not modelled.
pub fn pushforward(f: &StratifiedMap, alpha: &ConstructibleFunction) -> Result<ConstructibleFunction> {
    if !same_model(&f.source, &alpha.model) {
        return Err(Error::ModelMismatch(format!(
            "function lives on `{}`, map starts at `{}`",
            alpha.model.label, f.source.label
        )));
    }
    let a = alpha.invariant_values();
    let values = (0..f.target.len())
        .map(|k| {
            a.iter()
                .zip(&f.fiber)
                .map(|(v, row)| v * Rational::from_integer(row[k].into()))
                .sum()
        })
        .collect();
    ConstructibleFunction::new(&f.target, values, Level::Invariant)
}

/// `f^A_* = (T^A)^{-1} ∘ f_* ∘ T^A`.
pub fn modified_pushforward(
    f: &StratifiedMap,
    alpha: &ConstructibleFunction,
    a: &AbelianGroupSpec,
) -> Result<ConstructibleFunction> {
    Ok(t_a_inverse(&pushforward(f, &t_a(alpha, a))?, a))
}

/// `sum_j chi_c(j) * |Hom(A, G_j)| / |G_j|`; for `A = Z^2` this is the
/// orbifold Euler number.
pub fn orbifold_euler(model: &StratifiedStackModel, a: &AbelianGroupSpec) -> Rational {
    model
        .strata
        .iter()
        .map(|s| Rational::from_integer(s.chi_c.into()) * measured_value(a, &s.stabilizer))
        .sum()
}

/// Degree of `C^A_*(alpha)` computed two ways.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReport {
    /// Degree of the CSM class of `T^A(alpha)` on the linked arrangement.
    pub class_degree: Rational,
    /// `sum_j atlas_chi(j) * T^A(alpha)_j`.
    pub direct_integral: Rational,
    /// The same integral on the coarse space.
    pub underline: Rational,
}

impl DegreeReport {
    pub fn agrees(&self) -> bool {
        self.class_degree == self.direct_integral
    }
}

pub fn degree_ca(alpha: &ConstructibleFunction, a: &AbelianGroupSpec) -> Result<DegreeReport> {
    let model = &alpha.model;
    let link = model
        .link
        .as_ref()
        .ok_or_else(|| Error::InvalidModel(format!("model `{}` has no ambient arrangement link", model.label)))?;
    let weighted = t_a(alpha, a);
    let mut f = ArrangementFunction::new();
    for (i, v) in link.strata.iter().zip(weighted.invariant_values()) {
        f.set(*i, v);
    }
    let class_degree = euler_degree(&csm_of_function(&link.arrangement, &f)?);
    Ok(DegreeReport {
        class_degree,
        direct_integral: weighted.integral(),
        underline: weighted.underline_integral(),
    })
}

/// `|Hom(A, G)|` as a rational, for callers working with function values.
pub fn hom_count_rational(a: &AbelianGroupSpec, g: &FiniteGroup) -> Rational {
    to_rational(hom_count(a, g))
}

/// Convenience: the canonical function `1^(0) = 1`.
pub fn one(model: &Arc<StratifiedStackModel>) -> ConstructibleFunction {
    ConstructibleFunction::constant(model, Rational::one())
}
