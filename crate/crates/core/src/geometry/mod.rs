//! Morphisms between superdomain charts.
//!
//! A [`Morphism`] stores the pullback of every target coordinate as a
//! superfunction on the source chart. Pullbacks of even coordinates are
//! absolute values, so the reduced image of the source center is just the
//! constant term. A morphism is either exact (polynomial) or a jet known up
//! to a given even degree around the source center.

mod inverse;
mod product;
mod tangent;

use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub(crate) use inverse::newton_solve;
pub use inverse::{adapted_coordinates, invert_local, AdaptedChart};
pub use product::ProductChart;
pub use tangent::{differential_at, rank_profile, RankProfile, TangentMap};

use crate::error::{Error, Result};
use crate::named::NamedList;
use crate::scalar::Scalar;
use crate::superalg::{ChartSignature, Coord, SuperPolynomial, TermRepr};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Morphism {
    source: Arc<ChartSignature>,
    target: Arc<ChartSignature>,
    pullbacks: Vec<SuperPolynomial>,
    order: Option<u32>,
}

impl Morphism {
    /// `pullbacks` are listed in the target's flat coordinate order.
    pub fn new(
        source: &Arc<ChartSignature>,
        target: &Arc<ChartSignature>,
        pullbacks: Vec<SuperPolynomial>,
        order: Option<u32>,
    ) -> Result<Self> {
        if pullbacks.len() != target.n_coords() {
            return Err(Error::SignatureMismatch(format!(
                "{} pullbacks for {} target coordinates",
                pullbacks.len(),
                target.n_coords()
            )));
        }
        let mut checked = Vec::with_capacity(pullbacks.len());
        for (k, f) in pullbacks.into_iter().enumerate() {
            if f.signature() != source {
                return Err(Error::SignatureMismatch(format!(
                    "pullback of `{}` lives on {:?}, expected {:?}",
                    target.name_of(target.coord_at(k)),
                    f.signature(),
                    source
                )));
            }
            let c = target.coord_at(k);
            let ok = match c {
                Coord::Even(_) => f.is_even(),
                Coord::Odd(_) => f.is_odd(),
            };
            if !ok {
                return Err(Error::ParityMismatch {
                    coordinate: target.name_of(c).to_string(),
                    expected: if matches!(c, Coord::Even(_)) { "even" } else { "odd" },
                    value: f.to_string(),
                });
            }
            checked.push(match order {
                Some(d) => f.truncated(d),
                None => f,
            });
        }
        Ok(Morphism { source: source.clone(), target: target.clone(), pullbacks: checked, order })
    }

    /// Build from `(target coordinate name, pullback)` pairs in any order.
    pub fn from_named(
        source: &Arc<ChartSignature>,
        target: &Arc<ChartSignature>,
        pairs: Vec<(String, SuperPolynomial)>,
        order: Option<u32>,
    ) -> Result<Self> {
        let mut slots: Vec<Option<SuperPolynomial>> = vec![None; target.n_coords()];
        for (name, f) in pairs {
            let c = target.lookup(&name).ok_or_else(|| Error::UnknownCoordinate(name.clone()))?;
            let k = target.flat_index(c);
            if slots[k].is_some() {
                return Err(Error::Signature(format!("pullback of `{name}` given twice")));
            }
            slots[k] = Some(f);
        }
        let pullbacks = slots
            .into_iter()
            .enumerate()
            .map(|(k, f)| f.ok_or_else(|| Error::MissingCoordinate(target.name_of(target.coord_at(k)).to_string())))
            .collect::<Result<Vec<_>>>()?;
        Morphism::new(source, target, pullbacks, order)
    }

    pub fn identity(sig: &Arc<ChartSignature>) -> Self {
        let pullbacks = sig.coords().map(|c| SuperPolynomial::coordinate_at(sig, c)).collect();
        Morphism { source: sig.clone(), target: sig.clone(), pullbacks, order: None }
    }

    /// The constant map onto a reduced point of the target.
    pub fn constant(source: &Arc<ChartSignature>, target: &Arc<ChartSignature>, point: &[Scalar]) -> Result<Self> {
        if point.len() != target.n_even() {
            return Err(Error::DimensionMismatch(format!(
                "point has {} entries, target has {} even coordinates",
                point.len(),
                target.n_even()
            )));
        }
        let pullbacks = target
            .coords()
            .map(|c| match c {
                Coord::Even(i) => SuperPolynomial::constant(source, point[i].clone()),
                Coord::Odd(_) => SuperPolynomial::zero(source),
            })
            .collect();
        Ok(Morphism { source: source.clone(), target: target.clone(), pullbacks, order: None })
    }

    pub fn source(&self) -> &Arc<ChartSignature> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ChartSignature> {
        &self.target
    }

    pub fn pullbacks(&self) -> &[SuperPolynomial] {
        &self.pullbacks
    }

    pub fn pullback(&self, name: &str) -> Option<&SuperPolynomial> {
        self.target.lookup(name).map(|c| self.pullback_at(c))
    }

    pub fn pullback_at(&self, c: Coord) -> &SuperPolynomial {
        &self.pullbacks[self.target.flat_index(c)]
    }

    /// `None` for exact morphisms, otherwise the jet order.
    pub fn order(&self) -> Option<u32> {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order.is_none()
    }

    /// Image of the source center under the reduced map.
    pub fn reduced_image(&self) -> Vec<Scalar> {
        self.pullbacks[..self.target.n_even()].iter().map(SuperPolynomial::constant_term).collect()
    }

    /// Image of an arbitrary reduced point (exact morphisms only).
    pub fn reduced_value(&self, p: &[Scalar]) -> Result<Vec<Scalar>> {
        if p != self.source.center() && !self.is_exact() {
            return Err(Error::CenterMismatch(format!("jet at {:?} evaluated away from its center", self.source)));
        }
        self.pullbacks[..self.target.n_even()].iter().map(|f| f.value_at(p)).collect()
    }

    /// Re-expand around another source point. Jets cannot move.
    pub fn recentered(&self, p: &[Scalar]) -> Result<Morphism> {
        if p == self.source.center() {
            return Ok(self.clone());
        }
        if !self.is_exact() {
            return Err(Error::CenterMismatch(format!(
                "jet expanded at {:?} cannot be moved to another point",
                self.source
            )));
        }
        let source = Arc::new(self.source.with_center(p.to_vec())?);
        let pullbacks = self.pullbacks.iter().map(|f| f.recenter(p)).collect::<Result<Vec<_>>>()?;
        Ok(Morphism { source, target: self.target.clone(), pullbacks, order: None })
    }

    /// Same map, target chart re-expanded around its reduced image.
    pub fn with_target_center(&self, c: &[Scalar]) -> Result<Morphism> {
        let target = Arc::new(self.target.with_center(c.to_vec())?);
        Ok(Morphism { target, ..self.clone() })
    }

    /// The jet of order `d` (or lower, if already coarser).
    pub fn jet(&self, d: u32) -> Morphism {
        let d = self.order.map_or(d, |o| o.min(d));
        Morphism { pullbacks: self.pullbacks.iter().map(|f| f.truncated(d)).collect(), order: Some(d), ..self.clone() }
    }

    /// Per-coordinate difference `self - other`, truncated to the coarser order.
    pub fn difference(&self, other: &Morphism) -> Result<Vec<(String, SuperPolynomial)>> {
        if self.source != other.source || !self.target.same_coordinates(&other.target) {
            return Err(Error::SignatureMismatch(format!(
                "{:?} -> {:?} vs {:?} -> {:?}",
                self.source, self.target, other.source, other.target
            )));
        }
        let order = match (self.order, other.order) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.target
            .coords()
            .enumerate()
            .map(|(k, c)| {
                let d = self.pullbacks[k].try_sub(&other.pullbacks[k])?;
                let d = order.map_or(d.clone(), |o| d.truncated(o));
                Ok((self.target.name_of(c).to_string(), d))
            })
            .collect()
    }

    /// True when both agree up to the coarser order.
    pub fn agrees_with(&self, other: &Morphism) -> Result<bool> {
        Ok(self.difference(other)?.iter().all(|(_, d)| d.is_zero()))
    }
}

/// Extra jet order needed so that composing with a map into `sig` keeps
/// the requested order: products of pure-odd terms can lower the even degree
/// by at most half the odd dimension.
pub fn guard(sig: &ChartSignature) -> u32 {
    (sig.n_odd() / 2) as u32
}

/// `ψ ∘ φ`: first `phi`, then `psi`.
pub fn compose(phi: &Morphism, psi: &Morphism) -> Result<Morphism> {
    if !phi.target.same_coordinates(&psi.source) {
        return Err(Error::SignatureMismatch(format!(
            "cannot compose {:?} -> {:?} with {:?} -> {:?}",
            phi.source, phi.target, psi.source, psi.target
        )));
    }
    let probe = SuperPolynomial::zero(&psi.source);
    let (_, order) = probe.substitute_tracked(psi.order, &phi.pullbacks, phi.order, &phi.source)?;
    let mut out = Vec::with_capacity(psi.pullbacks.len());
    for f in &psi.pullbacks {
        let (g, _) = f.substitute_tracked(psi.order, &phi.pullbacks, phi.order, &phi.source)?;
        out.push(g);
    }
    Morphism::new(&phi.source, &psi.target, out, order)
}

#[derive(Serialize, Deserialize)]
struct MorphismRepr {
    source: ChartSignature,
    target: ChartSignature,
    order: Option<u32>,
    reduced_image: NamedList<Scalar>,
    pullbacks: NamedList<Vec<TermRepr>>,
}

impl Serialize for Morphism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let names = self.target.even_names();
        MorphismRepr {
            source: (*self.source).clone(),
            target: (*self.target).clone(),
            order: self.order,
            reduced_image: names.iter().cloned().zip(self.reduced_image()).collect(),
            pullbacks: self
                .target
                .coords()
                .zip(&self.pullbacks)
                .map(|(c, f)| (self.target.name_of(c).to_string(), f.to_term_reprs()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Morphism {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = MorphismRepr::deserialize(d)?;
        let source = Arc::new(repr.source);
        let target = Arc::new(repr.target);
        let pairs = repr
            .pullbacks
            .0
            .into_iter()
            .map(|(name, terms)| Ok((name, SuperPolynomial::from_term_reprs(&source, &terms)?)))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        let m = Morphism::from_named(&source, &target, pairs, repr.order).map_err(D::Error::custom)?;
        for (name, v) in repr.reduced_image.iter() {
            let c = target.lookup(name).ok_or_else(|| D::Error::custom(format!("unknown `{name}`")))?;
            let actual = m.pullback_at(c).constant_term();
            if matches!(c, Coord::Odd(_)) && !v.is_zero() || matches!(c, Coord::Even(_)) && &actual != v {
                return Err(D::Error::custom(format!("reduced image of `{name}` is {actual}, document says {v}")));
            }
        }
        Ok(m)
    }
}
