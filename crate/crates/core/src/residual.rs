use crate::error::Result;
use crate::geometry::Morphism;
use crate::superalg::SuperPolynomial;

/// Per-coordinate difference between two sides of an identity, truncated at
/// the order the identity is checked to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub label: String,
    pub components: Vec<(String, SuperPolynomial)>,
    /// Order to which the components are reliable; `None` when exact.
    pub valid_to: Option<u32>,
    pub required: u32,
}

impl Residual {
    pub fn new(
        label: impl Into<String>,
        components: Vec<(String, SuperPolynomial)>,
        valid_to: Option<u32>,
        required: u32,
    ) -> Self {
        let components = components.into_iter().map(|(n, f)| (n, f.truncated(required))).collect();
        Residual { label: label.into(), components, valid_to, required }
    }

    /// `lhs - rhs` for two maps with the same source and target.
    pub fn between(label: impl Into<String>, lhs: &Morphism, rhs: &Morphism, required: u32) -> Result<Self> {
        let valid_to = match (lhs.order(), rhs.order()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Ok(Residual::new(label, lhs.difference(rhs)?, valid_to, required))
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|(_, f)| f.is_zero())
    }

    /// Zero and known to the required order.
    pub fn passed(&self) -> bool {
        self.is_zero() && self.valid_to.is_none_or(|o| o >= self.required)
    }

    /// The first nonzero component.
    pub fn witness(&self) -> Option<(&str, &SuperPolynomial)> {
        self.components.iter().find(|(_, f)| !f.is_zero()).map(|(n, f)| (n.as_str(), f))
    }

    /// Several residuals under one label; component names get the part's label as prefix.
    pub fn merged(label: impl Into<String>, parts: Vec<Residual>, required: u32) -> Self {
        let mut components = Vec::new();
        let mut valid_to: Option<u32> = None;
        for p in parts {
            if let Some(o) = p.valid_to {
                valid_to = Some(valid_to.map_or(o, |v| v.min(o)));
            }
            components.extend(p.components.into_iter().map(|(n, f)| (format!("{}:{}", p.label, n), f)));
        }
        Residual { label: label.into(), components, valid_to, required }
    }
}

/// A named list of residuals; passes when every residual does.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Report {
    pub residuals: Vec<Residual>,
}

impl Report {
    pub fn push(&mut self, r: Residual) {
        self.residuals.push(r);
    }

    pub fn passed(&self) -> bool {
        self.residuals.iter().all(Residual::passed)
    }

    pub fn get(&self, label: &str) -> Option<&Residual> {
        self.residuals.iter().find(|r| r.label == label)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Residual> {
        self.residuals.iter().filter(|r| !r.passed())
    }
}
