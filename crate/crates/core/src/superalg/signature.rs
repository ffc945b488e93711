use std::collections::HashSet;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Odd subsets are stored as `u16` bitmasks.
pub const MAX_ODD: usize = 16;

/// Position of a coordinate inside a chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coord {
    Even(usize),
    Odd(usize),
}

/// Coordinates of a superdomain chart: ordered even and odd names plus the
/// reduced point around which functions are expanded.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SignatureRepr", into = "SignatureRepr")]
pub struct ChartSignature {
    even: Vec<String>,
    odd: Vec<String>,
    center: Vec<Scalar>,
}

#[derive(Serialize, Deserialize)]
struct SignatureRepr {
    even: Vec<String>,
    odd: Vec<String>,
    center: Vec<Scalar>,
}

impl TryFrom<SignatureRepr> for ChartSignature {
    type Error = Error;
    fn try_from(r: SignatureRepr) -> Result<Self> {
        ChartSignature::new(r.even, r.odd, r.center)
    }
}

impl From<ChartSignature> for SignatureRepr {
    fn from(s: ChartSignature) -> Self {
        SignatureRepr { even: s.even, odd: s.odd, center: s.center }
    }
}

impl ChartSignature {
    pub fn new(even: Vec<String>, odd: Vec<String>, center: Vec<Scalar>) -> Result<Self> {
        if odd.len() > MAX_ODD {
            return Err(Error::TooManyOdd(odd.len()));
        }
        if center.len() != even.len() {
            return Err(Error::Signature(format!(
                "center has {} entries for {} even coordinates",
                center.len(),
                even.len()
            )));
        }
        let mut seen = HashSet::new();
        for name in even.iter().chain(odd.iter()) {
            if !seen.insert(name.as_str()) {
                return Err(Error::Signature(format!("duplicate coordinate `{name}`")));
            }
        }
        Ok(ChartSignature { even, odd, center })
    }

    /// Chart centered at the origin.
    pub fn at_origin<S: Into<String>>(
        even: impl IntoIterator<Item = S>,
        odd: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let even: Vec<String> = even.into_iter().map(Into::into).collect();
        let center = vec![Scalar::zero(); even.len()];
        Self::new(even, odd.into_iter().map(Into::into).collect(), center)
    }

    /// The point superdomain of dimension (0|0).
    pub fn point() -> Self {
        ChartSignature { even: vec![], odd: vec![], center: vec![] }
    }

    pub fn even_names(&self) -> &[String] {
        &self.even
    }

    pub fn odd_names(&self) -> &[String] {
        &self.odd
    }

    pub fn center(&self) -> &[Scalar] {
        &self.center
    }

    pub fn n_even(&self) -> usize {
        self.even.len()
    }

    pub fn n_odd(&self) -> usize {
        self.odd.len()
    }

    pub fn n_coords(&self) -> usize {
        self.even.len() + self.odd.len()
    }

    /// Dimension pair `(n|m)`.
    pub fn dim(&self) -> (usize, usize) {
        (self.even.len(), self.odd.len())
    }

    pub fn lookup(&self, name: &str) -> Option<Coord> {
        if let Some(i) = self.even.iter().position(|n| n == name) {
            return Some(Coord::Even(i));
        }
        self.odd.iter().position(|n| n == name).map(Coord::Odd)
    }

    pub fn name_of(&self, c: Coord) -> &str {
        match c {
            Coord::Even(i) => &self.even[i],
            Coord::Odd(j) => &self.odd[j],
        }
    }

    /// Flat index: evens first, then odds.
    pub fn flat_index(&self, c: Coord) -> usize {
        match c {
            Coord::Even(i) => i,
            Coord::Odd(j) => self.even.len() + j,
        }
    }

    pub fn coord_at(&self, flat: usize) -> Coord {
        if flat < self.even.len() {
            Coord::Even(flat)
        } else {
            Coord::Odd(flat - self.even.len())
        }
    }

    /// All coordinates in flat order.
    pub fn coords(&self) -> impl Iterator<Item = Coord> + '_ {
        (0..self.n_coords()).map(|k| self.coord_at(k))
    }

    pub fn with_center(&self, center: Vec<Scalar>) -> Result<Self> {
        ChartSignature::new(self.even.clone(), self.odd.clone(), center)
    }

    /// Same names in the same order; centers may differ.
    pub fn same_coordinates(&self, other: &ChartSignature) -> bool {
        self.even == other.even && self.odd == other.odd
    }

    /// Product chart. Each factor's names get the given suffix; odd
    /// coordinates are ordered factor by factor.
    pub fn product(factors: &[(&ChartSignature, &str)]) -> Result<Self> {
        let mut even = Vec::new();
        let mut odd = Vec::new();
        let mut center = Vec::new();
        for (sig, suffix) in factors {
            even.extend(sig.even.iter().map(|n| format!("{n}{suffix}")));
            odd.extend(sig.odd.iter().map(|n| format!("{n}{suffix}")));
            center.extend(sig.center.iter().cloned());
        }
        ChartSignature::new(even, odd, center)
    }

    /// Copy of this chart with every name suffixed.
    pub fn renamed(&self, suffix: &str) -> Self {
        ChartSignature {
            even: self.even.iter().map(|n| format!("{n}{suffix}")).collect(),
            odd: self.odd.iter().map(|n| format!("{n}{suffix}")).collect(),
            center: self.center.clone(),
        }
    }

    /// Parse a point assignment `name -> value` covering every even coordinate.
    pub fn point_from_pairs(&self, pairs: &[(String, Scalar)]) -> Result<Vec<Scalar>> {
        let mut out: Vec<Option<Scalar>> = vec![None; self.even.len()];
        for (name, v) in pairs {
            match self.lookup(name) {
                Some(Coord::Even(i)) => out[i] = Some(v.clone()),
                Some(Coord::Odd(_)) => {
                    if !v.is_zero() {
                        return Err(Error::Signature(format!("odd coordinate `{name}` of a reduced point must be 0")));
                    }
                }
                None => return Err(Error::UnknownCoordinate(name.clone())),
            }
        }
        out.into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::MissingCoordinate(self.even[i].clone())))
            .collect()
    }
}

impl fmt::Debug for ChartSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (n, c)) in self.even.iter().zip(&self.center).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}@{c}")?;
        }
        write!(f, " | {})", self.odd.join(", "))
    }
}
