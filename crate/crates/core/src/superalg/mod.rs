//! Exact arithmetic of superfunctions on a chart: canonical Grassmann
//! polynomials, substitution, recentering and jets.

mod monomial;
mod poly;
mod signature;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub(crate) use monomial::odd_merge_sign;
pub use monomial::Monomial;
pub use poly::SuperPolynomial;
pub use signature::{ChartSignature, Coord, MAX_ODD};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(c: Coord) -> Parity {
        match c {
            Coord::Even(_) => Parity::Even,
            Coord::Odd(_) => Parity::Odd,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

/// A superfunction known up to terms of even degree greater than `order`
/// around its chart center.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Jet {
    body: SuperPolynomial,
    order: u32,
}

impl Jet {
    pub(crate) fn from_parts(body: SuperPolynomial, order: u32) -> Self {
        Jet { body, order }
    }

    pub fn new(f: &SuperPolynomial, order: u32) -> Self {
        Jet { body: f.truncated(order), order }
    }

    pub fn body(&self) -> &SuperPolynomial {
        &self.body
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn into_body(self) -> SuperPolynomial {
        self.body
    }

    pub fn add(&self, other: &Jet) -> Result<Jet> {
        let order = self.order.min(other.order);
        Ok(Jet { body: self.body.try_add(&other.body)?.truncated(order), order })
    }

    pub fn sub(&self, other: &Jet) -> Result<Jet> {
        let order = self.order.min(other.order);
        Ok(Jet { body: self.body.try_sub(&other.body)?.truncated(order), order })
    }

    pub fn mul(&self, other: &Jet) -> Result<Jet> {
        if self.body.signature() != other.body.signature() {
            return Err(Error::SignatureMismatch("jet product".into()));
        }
        let order = self.order.min(other.order);
        Ok(Jet { body: self.body.mul_trunc(&other.body, Some(order)), order })
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }
}

/// One term of a serialized superfunction. `odd` lists 1-based odd indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRepr {
    pub even: Vec<u16>,
    pub odd: Vec<usize>,
    pub coeff: Scalar,
}

impl SuperPolynomial {
    /// Terms in canonical (graded-lex) order, local exponents.
    pub fn to_term_reprs(&self) -> Vec<TermRepr> {
        self.terms()
            .map(|(m, c)| TermRepr {
                even: m.even().to_vec(),
                odd: m.odd_indices().into_iter().map(|j| j + 1).collect(),
                coeff: c.clone(),
            })
            .collect()
    }

    pub fn from_term_reprs(sig: &Arc<ChartSignature>, terms: &[TermRepr]) -> Result<Self> {
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            if t.even.len() != sig.n_even() {
                return Err(Error::SignatureMismatch(format!(
                    "term has {} even exponents, chart has {}",
                    t.even.len(),
                    sig.n_even()
                )));
            }
            let mut mask = 0u16;
            let mut prev = 0usize;
            for &j in &t.odd {
                if j == 0 || j > sig.n_odd() || j <= prev {
                    return Err(Error::Signature(format!(
                        "odd indices must be strictly increasing within 1..={}",
                        sig.n_odd()
                    )));
                }
                prev = j;
                mask |= 1 << (j - 1);
            }
            out.push((Monomial::from_parts(&t.even, mask), t.coeff.clone()));
        }
        Ok(SuperPolynomial::from_terms(sig, out))
    }
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    signature: ChartSignature,
    terms: Vec<TermRepr>,
}

impl Serialize for SuperPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr { signature: (**self.signature()).clone(), terms: self.to_term_reprs() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SuperPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(d)?;
        let sig = Arc::new(repr.signature);
        SuperPolynomial::from_term_reprs(&sig, &repr.terms).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests;
