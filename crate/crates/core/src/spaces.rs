//! Catalog of smooth spaces with explicit Chow rings.
//!
//! Every space carries its ring, its dimension, the total Chern class of its
//! tangent bundle and a point class used for integration. Torus-equivariant
//! projective spaces and the finite Borel models `X x_G U` live here too.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{One, Zero};

use crate::classes::BundleData;
use crate::error::{Error, Result};
use crate::ring::{int, Coeff, GradedElement, Monomial, Rational, Relation, RingPresentation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Space {
    label: String,
    ring: Arc<RingPresentation>,
    dim: usize,
    tangent: BundleData,
    point_class: GradedElement,
}

impl Space {
    pub fn new(
        label: impl Into<String>,
        ring: Arc<RingPresentation>,
        dim: usize,
        tangent: BundleData,
        point_class: GradedElement,
    ) -> Result<Self> {
        if point_class.terms().len() != 1 || !point_class.is_homogeneous(dim as u32) {
            return Err(Error::Unsupported(
                "point class must be a single monomial of top degree".into(),
            ));
        }
        if tangent.rank() != dim {
            return Err(Error::InvalidBundle(format!(
                "tangent rank {} differs from dimension {dim}",
                tangent.rank()
            )));
        }
        Ok(Space {
            label: label.into(),
            ring,
            dim,
            tangent,
            point_class,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tangent(&self) -> &BundleData {
        &self.tangent
    }

    pub fn point_class(&self) -> &GradedElement {
        &self.point_class
    }

    /// The unit of the ring, i.e. the class paired with `[X]`.
    pub fn fundamental_class(&self) -> GradedElement {
        GradedElement::one(&self.ring)
    }

    pub fn generator(&self, name: &str) -> Result<GradedElement> {
        GradedElement::generator(&self.ring, name)
    }

    /// Parses an element of this space's ring, e.g. `1 + 3*h`.
    pub fn element(&self, s: &str) -> Result<GradedElement> {
        GradedElement::parse(&self.ring, s)
    }

    /// Degree of the zero-dimensional part of `a`.
    pub fn integrate(&self, a: &GradedElement) -> Result<Coeff> {
        if !a.ring().same_quotient(&self.ring) {
            return Err(Error::PresentationMismatch(format!(
                "element does not live on {}",
                self.label
            )));
        }
        let (m, c) = self.point_class.terms().iter().next().expect("one term");
        let c = c.as_rational().expect("point class has a rational coefficient");
        a.coeff(m).div_rational(&c)
    }

    /// [`Space::integrate`] for classes with rational coefficients.
    pub fn integrate_rational(&self, a: &GradedElement) -> Result<Rational> {
        let c = self.integrate(a)?;
        c.as_rational().ok_or_else(|| {
            Error::Unsupported(format!(
                "degree `{}` is not a rational number",
                c.to_pretty_string(a.ring().params())
            ))
        })
    }

    /// `integrate(c(TX))`, the topological Euler characteristic.
    pub fn euler_characteristic(&self) -> Rational {
        self.integrate_rational(self.tangent.total_chern())
            .expect("tangent class lives in the space's ring")
    }
}

fn binomial_power(ring: &Arc<RingPresentation>, gen: &str, scale: i64, exp: u32) -> GradedElement {
    let g = GradedElement::generator(ring, gen).expect("generator exists");
    GradedElement::one(ring)
        .add(&g.scale_rational(&int(scale)))
        .expect("same ring")
        .pow(exp)
}

/// `P^n` with hyperplane class `h`; `c(TP^n) = (1+h)^{n+1}`.
pub fn projective_space(n: usize) -> Space {
    if n == 0 {
        let ring = Arc::new(RingPresentation::new(vec![], vec![], 0, vec![]).unwrap());
        let one = GradedElement::one(&ring);
        return Space::new("P0", ring.clone(), 0, BundleData::trivial(&ring, 0), one).unwrap();
    }
    let ring = Arc::new(RingPresentation::truncated_polynomial("h", n as u32));
    let c = binomial_power(&ring, "h", 1, n as u32 + 1);
    let pt = GradedElement::generator(&ring, "h").unwrap().pow(n as u32);
    Space::new(format!("P{n}"), ring, n, BundleData::new(c, n).unwrap(), pt).unwrap()
}

pub fn point() -> Space {
    projective_space(0)
}

/// A smooth degree-`d` hypersurface in `P^n`, modelled in the ambient
/// ring `Q[h]/(h^n)` with `integrate(h^{n-1}) = d` and
/// `c(T) = (1+h)^{n+1} / (1+dh)`.
pub fn hypersurface(n: usize, d: u32) -> Result<Space> {
    if n == 0 || d == 0 {
        return Err(Error::Unsupported("hypersurface needs n >= 1 and d >= 1".into()));
    }
    let dim = n - 1;
    let ring = Arc::new(
        RingPresentation::new(
            vec![("h".into(), 1)],
            vec![Relation::nilpotent(0, n as u32)],
            dim as u32,
            vec![],
        )
        .unwrap(),
    );
    let num = binomial_power(&ring, "h", 1, n as u32 + 1);
    let den = binomial_power(&ring, "h", d as i64, 1);
    let c = num.mul(&den.invert_unit()?)?;
    let pt = if dim == 0 {
        GradedElement::one(&ring)
    } else {
        GradedElement::generator(&ring, "h")?.pow(dim as u32)
    }
    .scale_rational(&Rational::new(One::one(), d.into()));
    let label = match (n, d) {
        (2, 1) => "line".to_string(),
        (2, 2) => "conic".to_string(),
        (2, 3) => "cubic".to_string(),
        _ => format!("V{d}inP{n}"),
    };
    Space::new(label, ring, dim, BundleData::new(c, dim)?, pt)
}

fn rename_clashes(left: &[String], right: &[String]) -> (Vec<String>, Vec<String>) {
    let mut l = left.to_vec();
    let mut r = right.to_vec();
    loop {
        let clash: Vec<String> = l.iter().filter(|n| r.contains(n)).cloned().collect();
        if clash.is_empty() {
            return (l, r);
        }
        for name in clash {
            for x in l.iter_mut().filter(|x| **x == name) {
                x.push('1');
            }
            for x in r.iter_mut().filter(|x| **x == name) {
                x.push('2');
            }
        }
    }
}

fn shift(m: &Monomial, offset: usize, total: usize) -> Monomial {
    let mut out = vec![0; total];
    out[offset..offset + m.len()].copy_from_slice(m);
    out
}

fn embed(e: &GradedElement, ring: &Arc<RingPresentation>, offset: usize) -> GradedElement {
    let n = ring.num_generators();
    GradedElement::from_terms(ring, e.terms().iter().map(|(m, c)| (shift(m, offset, n), c.clone())))
}

/// `X x Y` with the tensor-product presentation. Clashing generator names
/// get the suffixes `1` and `2`.
pub fn product(x: &Space, y: &Space) -> Result<Space> {
    if !x.ring.params().is_empty() || !y.ring.params().is_empty() {
        return Err(Error::Unsupported("products of parameterized rings".into()));
    }
    let (ln, rn) = rename_clashes(&x.ring.generator_names(), &y.ring.generator_names());
    let nx = ln.len();
    let total = nx + rn.len();
    let gens: Vec<(String, u32)> = ln
        .iter()
        .zip(x.ring.generators())
        .chain(rn.iter().zip(y.ring.generators()))
        .map(|(name, g)| (name.clone(), g.degree))
        .collect();
    let mut relations = Vec::new();
    for rel in x.ring.relations() {
        relations.push(Relation {
            generator: rel.generator,
            power: rel.power,
            rhs: rel.rhs.iter().map(|(m, c)| (shift(m, 0, total), c.clone())).collect(),
        });
    }
    for rel in y.ring.relations() {
        relations.push(Relation {
            generator: rel.generator + nx,
            power: rel.power,
            rhs: rel.rhs.iter().map(|(m, c)| (shift(m, nx, total), c.clone())).collect(),
        });
    }
    let dim = x.dim + y.dim;
    let ring = Arc::new(RingPresentation::new(gens, relations, dim as u32, vec![])?);
    let cx = embed(x.tangent.total_chern(), &ring, 0);
    let cy = embed(y.tangent.total_chern(), &ring, nx);
    let pt = embed(&x.point_class, &ring, 0).mul(&embed(&y.point_class, &ring, nx))?;
    let label = match (x.dim, y.dim) {
        (_, 0) => x.label.clone(),
        (0, _) => y.label.clone(),
        _ => format!("{}x{}", x.label, y.label),
    };
    Space::new(label, ring, dim, BundleData::new(cx.mul(&cy)?, dim)?, pt)
}

/// Divisor classes on an ambient space, with the user's assertion that
/// they are smooth with normal crossings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorSet {
    classes: Vec<GradedElement>,
    normal_crossings: bool,
}

impl DivisorSet {
    pub fn new(classes: Vec<GradedElement>, normal_crossings: bool) -> Result<Self> {
        for (i, d) in classes.iter().enumerate() {
            if d.is_zero() || !d.is_homogeneous(1) {
                return Err(Error::InvalidArrangement(format!(
                    "divisor {} is not a nonzero class of degree 1",
                    i + 1
                )));
            }
        }
        Ok(DivisorSet {
            classes,
            normal_crossings,
        })
    }

    pub fn classes(&self) -> &[GradedElement] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn normal_crossings(&self) -> bool {
        self.normal_crossings
    }
}

/// Name of the torus parameter generator.
pub const T: &str = "t";

/// `P(V)` for a rank-one torus acting with the given weights, in the stable
/// ring `Q[t,h] / prod (h + w_i t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantSpace {
    label: String,
    ring: Arc<RingPresentation>,
    dim: usize,
    weights: Vec<i64>,
    torus_rank: usize,
    tangent: BundleData,
}

/// `prod_i (h + w_i k)` as raw terms in generators `[k, h]`.
fn weight_product(weights: &[i64]) -> BTreeMap<Monomial, Rational> {
    let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
    acc.insert(vec![0, 0], Rational::one());
    for &w in weights {
        let mut next: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in &acc {
            *next.entry(vec![m[0], m[1] + 1]).or_insert_with(Rational::zero) += c;
            if w != 0 {
                *next.entry(vec![m[0] + 1, m[1]]).or_insert_with(Rational::zero) += c * int(w);
            }
        }
        acc = next;
    }
    acc.retain(|_, c| !c.is_zero());
    acc
}

/// The relation `h^{r+1} = -(prod (h + w_i k) - h^{r+1})` on generators `[k, h]`.
fn weight_relation(weights: &[i64]) -> Relation {
    let r1 = weights.len() as u32;
    let rhs = weight_product(weights)
        .into_iter()
        .filter(|(m, _)| m[1] < r1)
        .map(|(m, c)| (m, -c))
        .collect();
    Relation {
        generator: 1,
        power: r1,
        rhs,
    }
}

/// `prod_i (1 + h + w_i k)` in a ring whose generators include `k` and `h`.
fn equivariant_euler_class(ring: &Arc<RingPresentation>, k: &str, weights: &[i64]) -> Result<GradedElement> {
    let h = GradedElement::generator(ring, "h")?;
    let kk = GradedElement::generator(ring, k)?;
    let one = GradedElement::one(ring);
    let mut acc = one.clone();
    for &w in weights {
        let f = one.add(&h)?.add(&kk.scale_rational(&int(w)))?;
        acc = acc.mul(&f)?;
    }
    Ok(acc)
}

/// Equivariant `P^r` with truncation `dim + 2`.
pub fn equivariant_projective_space(weights: &[i64]) -> Result<EquivariantSpace> {
    let dim = weights.len().saturating_sub(1);
    equivariant_projective_space_truncated(weights, dim as u32 + 2)
}

pub fn equivariant_projective_space_truncated(weights: &[i64], truncation: u32) -> Result<EquivariantSpace> {
    if weights.is_empty() {
        return Err(Error::Unsupported(
            "equivariant projective space needs at least one weight".into(),
        ));
    }
    let dim = weights.len() - 1;
    if (truncation as usize) < dim {
        return Err(Error::Unsupported(format!(
            "truncation {truncation} is below the dimension {dim}"
        )));
    }
    let ring = Arc::new(RingPresentation::new(
        vec![(T.into(), 1), ("h".into(), 1)],
        vec![weight_relation(weights)],
        truncation,
        vec![],
    )?);
    let c = equivariant_euler_class(&ring, T, weights)?;
    let label = format!(
        "P{dim}[{}]",
        weights.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
    );
    Ok(EquivariantSpace {
        label,
        dim,
        weights: weights.to_vec(),
        torus_rank: 1,
        tangent: BundleData::new(c, dim)?,
        ring,
    })
}

impl EquivariantSpace {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn torus_rank(&self) -> usize {
        self.torus_rank
    }

    /// `c^T(TP^r) = prod (1 + h + w_i t)`.
    pub fn tangent(&self) -> &BundleData {
        &self.tangent
    }

    pub fn element(&self, s: &str) -> Result<GradedElement> {
        GradedElement::parse(&self.ring, s)
    }

    /// Pushforward to the point: the polynomial in `t` multiplying `h^r`
    /// in the normal form, returned as an element of the same ring.
    pub fn integrate(&self, a: &GradedElement) -> Result<GradedElement> {
        if !a.ring().same_quotient(&self.ring) {
            return Err(Error::PresentationMismatch(format!(
                "element does not live on {}",
                self.label
            )));
        }
        let r = self.dim as u32;
        Ok(GradedElement::from_terms(
            a.ring(),
            a.terms()
                .iter()
                .filter(|(m, _)| m[1] == r)
                .map(|(m, c)| (vec![m[0], 0], c.clone())),
        ))
    }

    /// The non-equivariant `P^r`.
    pub fn underlying(&self) -> Space {
        projective_space(self.dim)
    }

    /// Sets `t = 0` and maps into the ring of the underlying space.
    pub fn forget(&self, a: &GradedElement) -> Result<GradedElement> {
        if !a.ring().same_quotient(&self.ring) {
            return Err(Error::PresentationMismatch(format!(
                "element does not live on {}",
                self.label
            )));
        }
        let base = self.underlying();
        let n = base.ring().num_generators();
        Ok(GradedElement::from_terms(
            base.ring(),
            a.terms()
                .iter()
                .filter(|(m, _)| m[0] == 0)
                .map(|(m, c)| (if n == 0 { vec![] } else { vec![m[1]] }, c.clone())),
        ))
    }
}

/// Fiber of a finite Borel model `X x_G U` with `U_G = P^level`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BorelFiber {
    Point,
    Projective { weights: Vec<i64> },
}

impl BorelFiber {
    pub fn dim(&self) -> usize {
        match self {
            BorelFiber::Point => 0,
            BorelFiber::Projective { weights } => weights.len().saturating_sub(1),
        }
    }
}

impl From<&EquivariantSpace> for BorelFiber {
    fn from(x: &EquivariantSpace) -> Self {
        BorelFiber::Projective {
            weights: x.weights.clone(),
        }
    }
}

/// `c(TU_G)^{-1} c(T X_G)` on a finite Borel model, as a class paired with
/// `[X_G]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorelClass {
    pub value: GradedElement,
    pub level: usize,
    pub fiber_dim: usize,
}

impl BorelClass {
    /// Terms of equivariant dimension `n`: the codimension `fiber_dim - n`
    /// part of the model class. `None` once the codimension exceeds the
    /// level, where the finite model is no longer faithful.
    pub fn equivariant_component(&self, n: i64) -> Option<BTreeMap<Monomial, Coeff>> {
        let codim = self.fiber_dim as i64 - n;
        if codim < 0 || codim > self.level as i64 {
            return None;
        }
        Some(self.value.component(codim as u32).terms().clone())
    }

    /// Degreewise agreement with another level, over the dimensions both
    /// models resolve.
    pub fn stable_agreement(&self, other: &BorelClass) -> bool {
        if self.fiber_dim != other.fiber_dim {
            return false;
        }
        let lowest = self.fiber_dim as i64 - self.level.min(other.level) as i64;
        (lowest..=self.fiber_dim as i64).all(|n| self.equivariant_component(n) == other.equivariant_component(n))
    }

    /// True when the class is exactly `[X_G]`.
    pub fn is_fundamental_class(&self) -> bool {
        self.value == GradedElement::one(self.value.ring())
    }
}

/// Finite-level approximation of the equivariant CSM class of `X` for a
/// rank-one torus, using `U = C^{level+1} - 0` with the weight-one action.
pub fn borel_approximation(torus_rank: usize, fiber: &BorelFiber, level: usize) -> Result<BorelClass> {
    if torus_rank != 1 {
        return Err(Error::Unsupported(format!(
            "torus rank {torus_rank}; only rank 1 is modelled"
        )));
    }
    if level == 0 {
        return Err(Error::Unsupported("Borel level must be at least 1".into()));
    }
    let l = level as u32;
    let (ring, c_total) = match fiber {
        BorelFiber::Point => {
            let ring = Arc::new(RingPresentation::truncated_polynomial("k", l));
            let c = binomial_power(&ring, "k", 1, l + 1);
            (ring, c)
        }
        BorelFiber::Projective { weights } => {
            if weights.is_empty() {
                return Err(Error::Unsupported("empty weight list".into()));
            }
            let r = weights.len() as u32 - 1;
            let ring = Arc::new(RingPresentation::new(
                vec![("k".into(), 1), ("h".into(), 1)],
                vec![Relation::nilpotent(0, l + 1), weight_relation(weights)],
                l + r,
                vec![],
            )?);
            // T X_G = pi^* T P^level + relative tangent of P(sum O(w_i))
            let base = binomial_power(&ring, "k", 1, l + 1);
            let rel = equivariant_euler_class(&ring, "k", weights)?;
            (ring.clone(), base.mul(&rel)?)
        }
    };
    let tu = binomial_power(&ring, "k", 1, l + 1);
    let value = tu.invert_unit()?.mul(&c_total)?;
    Ok(BorelClass {
        value,
        level,
        fiber_dim: fiber.dim(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_tangent_classes() {
        assert_eq!(projective_space(0).tangent().total_chern().to_string(), "1");
        assert_eq!(projective_space(1).tangent().total_chern().to_string(), "1 + 2*h");
        assert_eq!(
            projective_space(2).tangent().total_chern().to_string(),
            "1 + 3*h + 3*h^2"
        );
    }

    #[test]
    fn euler_characteristics() {
        for n in 0..6 {
            assert_eq!(projective_space(n).euler_characteristic(), int(n as i64 + 1));
        }
        let p1 = projective_space(1);
        assert_eq!(product(&p1, &p1).unwrap().euler_characteristic(), int(4));
        // plane curves: 3d - d^2
        for (d, chi) in [(1, 2), (2, 2), (3, 0)] {
            assert_eq!(hypersurface(2, d).unwrap().euler_characteristic(), int(chi));
        }
        // quadric surface in P^3 is P1xP1
        assert_eq!(hypersurface(3, 2).unwrap().euler_characteristic(), int(4));
    }

    #[test]
    fn product_of_lines() {
        let p1 = projective_space(1);
        let q = product(&p1, &p1).unwrap();
        assert_eq!(q.ring().generator_names(), ["h1", "h2"]);
        assert_eq!(
            q.tangent().total_chern(),
            &q.element("1 + 2*h1 + 2*h2 + 4*h1*h2").unwrap()
        );
        assert_eq!(q.point_class(), &q.element("h1*h2").unwrap());
        assert_eq!(q.integrate(&q.element("2*h1*h2").unwrap()).unwrap(), Coeff::from_int(2));
    }

    #[test]
    fn product_with_point_is_isomorphic() {
        let p2 = projective_space(2);
        let x = product(&p2, &point()).unwrap();
        assert!(x.ring().same_quotient(p2.ring()));
        assert_eq!(x.tangent(), p2.tangent());
        assert_eq!(x.label(), "P2");
    }

    #[test]
    fn conic_tangent() {
        let c = hypersurface(2, 2).unwrap();
        assert_eq!(c.tangent().total_chern().to_string(), "1 + h");
        let cubic = hypersurface(2, 3).unwrap();
        assert_eq!(cubic.tangent().total_chern().to_string(), "1");
    }

    #[test]
    fn equivariant_p1_weights_0_1() {
        let x = equivariant_projective_space(&[0, 1]).unwrap();
        assert_eq!(x.tangent().total_chern(), &x.element("1 + 2*h + t").unwrap());
        let h = x.element("h").unwrap();
        assert_eq!(h.pow(2), x.element("-t*h").unwrap());
        let deg = x.integrate(x.tangent().total_chern()).unwrap();
        assert_eq!(deg, x.element("2").unwrap());
    }

    #[test]
    fn equivariant_p1_weights_1_1() {
        let x = equivariant_projective_space(&[1, 1]).unwrap();
        let h = x.element("h").unwrap();
        assert_eq!(h.pow(2), x.element("-2*h*t - t^2").unwrap());
        let expected = x.element("1 + h + t").unwrap().pow(2);
        assert_eq!(x.tangent().total_chern(), &expected);
    }

    #[test]
    fn zero_weights_are_inert() {
        let x = equivariant_projective_space(&[0, 0, 0]).unwrap();
        assert!(x.tangent().total_chern().terms().keys().all(|m| m[0] == 0));
        let forgotten = x.forget(x.tangent().total_chern()).unwrap();
        assert_eq!(&forgotten, projective_space(2).tangent().total_chern());
    }

    #[test]
    fn empty_weights_rejected() {
        assert!(equivariant_projective_space(&[]).is_err());
    }

    #[test]
    fn borel_point() {
        let b3 = borel_approximation(1, &BorelFiber::Point, 3).unwrap();
        assert!(b3.is_fundamental_class());
        let b5 = borel_approximation(1, &BorelFiber::Point, 5).unwrap();
        assert!(b5.is_fundamental_class());
        assert!(b3.stable_agreement(&b5));
    }

    #[test]
    fn borel_p1_trivial_action() {
        let b = borel_approximation(1, &BorelFiber::Projective { weights: vec![0, 0] }, 2).unwrap();
        assert_eq!(b.value.to_string(), "1 + 2*h");
    }

    #[test]
    fn borel_rejects_unsupported() {
        assert!(borel_approximation(2, &BorelFiber::Point, 2).is_err());
        assert!(borel_approximation(1, &BorelFiber::Point, 0).is_err());
    }
}
