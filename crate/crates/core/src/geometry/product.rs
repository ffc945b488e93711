use std::sync::Arc;

use super::Morphism;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::superalg::{ChartSignature, SuperPolynomial};

/// A product of charts together with the position of each factor's
/// coordinates inside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductChart {
    sig: Arc<ChartSignature>,
    factors: Vec<Arc<ChartSignature>>,
    suffixes: Vec<String>,
    maps: Vec<Vec<usize>>,
}

impl ProductChart {
    /// Factors with the suffix appended to their coordinate names.
    pub fn new(factors: &[(&Arc<ChartSignature>, &str)]) -> Result<Self> {
        let refs: Vec<(&ChartSignature, &str)> = factors.iter().map(|(s, x)| (s.as_ref(), *x)).collect();
        let sig = Arc::new(ChartSignature::product(&refs)?);
        let n_total = sig.n_even();
        let (mut even_off, mut odd_off) = (0, 0);
        let mut maps = Vec::new();
        for (f, _) in factors {
            let mut map: Vec<usize> = (0..f.n_even()).map(|i| even_off + i).collect();
            map.extend((0..f.n_odd()).map(|j| n_total + odd_off + j));
            even_off += f.n_even();
            odd_off += f.n_odd();
            maps.push(map);
        }
        Ok(ProductChart {
            sig,
            factors: factors.iter().map(|(s, _)| (*s).clone()).collect(),
            suffixes: factors.iter().map(|(_, x)| x.to_string()).collect(),
            maps,
        })
    }

    pub fn signature(&self) -> &Arc<ChartSignature> {
        &self.sig
    }

    pub fn n_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn factor(&self, k: usize) -> &Arc<ChartSignature> {
        &self.factors[k]
    }

    /// Flat index in the product of each flat coordinate of factor `k`.
    pub fn embedding(&self, k: usize) -> &[usize] {
        &self.maps[k]
    }

    /// Factor index and flat index within the factor of a product coordinate.
    pub fn locate(&self, flat: usize) -> (usize, usize) {
        for (k, map) in self.maps.iter().enumerate() {
            if let Some(i) = map.iter().position(|&t| t == flat) {
                return (k, i);
            }
        }
        unreachable!("every product coordinate belongs to a factor")
    }

    /// A function of factor `k` viewed on the product.
    pub fn lift(&self, k: usize, f: &SuperPolynomial) -> Result<SuperPolynomial> {
        if f.signature().as_ref() != self.factors[k].as_ref() {
            return Err(Error::SignatureMismatch(format!(
                "function on {:?} lifted to factor {:?}",
                f.signature(),
                self.factors[k]
            )));
        }
        f.lift(&self.sig, &self.maps[k])
    }

    /// The coordinates of factor `k`, as functions on the product.
    pub fn factor_coordinates(&self, k: usize) -> Vec<SuperPolynomial> {
        self.maps[k].iter().map(|&t| SuperPolynomial::coordinate_at(&self.sig, self.sig.coord_at(t))).collect()
    }

    pub fn projection(&self, k: usize) -> Morphism {
        Morphism::new(&self.sig, &self.factors[k], self.factor_coordinates(k), None).expect("projection is well formed")
    }

    /// `(φ₁, φ₂, …)`: a map into the product from maps into the factors.
    pub fn pair(&self, parts: &[&Morphism]) -> Result<Morphism> {
        if parts.len() != self.factors.len() {
            return Err(Error::DimensionMismatch(format!("{} maps for {} factors", parts.len(), self.factors.len())));
        }
        let source = parts.first().map(|m| m.source().clone()).unwrap_or_else(|| Arc::new(ChartSignature::point()));
        let mut slots: Vec<Option<SuperPolynomial>> = vec![None; self.sig.n_coords()];
        let mut order: Option<u32> = None;
        for (k, m) in parts.iter().enumerate() {
            if m.source() != &source {
                return Err(Error::SignatureMismatch("paired maps have different sources".into()));
            }
            if !m.target().same_coordinates(&self.factors[k]) {
                return Err(Error::SignatureMismatch(format!(
                    "map into {:?} paired as factor {:?}",
                    m.target(),
                    self.factors[k]
                )));
            }
            if let Some(o) = m.order() {
                order = Some(order.map_or(o, |p| p.min(o)));
            }
            for (i, &t) in self.maps[k].iter().enumerate() {
                slots[t] = Some(m.pullbacks()[i].clone());
            }
        }
        let pullbacks = slots.into_iter().map(|s| s.expect("factors cover the product")).collect();
        Morphism::new(&source, &self.sig, pullbacks, order)
    }

    /// `φ₁ × φ₂ × …` from `self` into `target`.
    pub fn product_map(&self, target: &ProductChart, parts: &[&Morphism]) -> Result<Morphism> {
        let legs = parts
            .iter()
            .enumerate()
            .map(|(k, m)| super::compose(&self.projection(k), m))
            .collect::<Result<Vec<_>>>()?;
        target.pair(&legs.iter().collect::<Vec<_>>())
    }

    /// Same factors re-expanded around other centers.
    pub fn recentered(&self, centers: &[Vec<Scalar>]) -> Result<ProductChart> {
        let factors = self
            .factors
            .iter()
            .zip(centers)
            .map(|(f, c)| Ok(Arc::new(f.with_center(c.clone())?)))
            .collect::<Result<Vec<_>>>()?;
        let pairs: Vec<(&Arc<ChartSignature>, &str)> =
            factors.iter().zip(self.suffixes.iter().map(String::as_str)).collect();
        ProductChart::new(&pairs)
    }
}
