use serde::{Deserialize, Serialize};

use super::Morphism;
use crate::error::Result;
use crate::linalg::{self, Matrix};
use crate::scalar::Scalar;
use crate::superalg::Coord;

/// The differential at a reduced point. Mixed-parity blocks vanish there,
/// so the even and odd blocks describe it completely.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangentMap {
    /// target even × source even
    pub even: Matrix,
    /// target odd × source odd
    pub odd: Matrix,
    pub source_dim: (usize, usize),
    pub target_dim: (usize, usize),
}

impl TangentMap {
    pub fn identity(dim: (usize, usize)) -> Self {
        TangentMap { even: linalg::identity(dim.0), odd: linalg::identity(dim.1), source_dim: dim, target_dim: dim }
    }

    /// Chain rule: the differential of `next ∘ self`.
    pub fn then(&self, next: &TangentMap) -> TangentMap {
        TangentMap {
            even: linalg::mat_mul(&next.even, &self.even, self.target_dim.0, self.source_dim.0),
            odd: linalg::mat_mul(&next.odd, &self.odd, self.target_dim.1, self.source_dim.1),
            source_dim: self.source_dim,
            target_dim: next.target_dim,
        }
    }

    pub fn even_rank(&self) -> usize {
        linalg::rank(&self.even, self.source_dim.0)
    }

    pub fn odd_rank(&self) -> usize {
        linalg::rank(&self.odd, self.source_dim.1)
    }

    /// Both blocks inverted, if square and nonsingular.
    pub fn inverse(&self) -> Option<TangentMap> {
        Some(TangentMap {
            even: linalg::inverse(&self.even)?,
            odd: linalg::inverse(&self.odd)?,
            source_dim: self.target_dim,
            target_dim: self.source_dim,
        })
    }

    /// Columns of `self` followed by the columns of `other`, both blocks.
    pub fn hstack(&self, other: &TangentMap) -> TangentMap {
        let join = |a: &Matrix, b: &Matrix| -> Matrix {
            a.iter().zip(b).map(|(x, y)| x.iter().chain(y).cloned().collect()).collect()
        };
        TangentMap {
            even: join(&self.even, &other.even),
            odd: join(&self.odd, &other.odd),
            source_dim: (self.source_dim.0 + other.source_dim.0, self.source_dim.1 + other.source_dim.1),
            target_dim: self.target_dim,
        }
    }
}

/// `(dφ)_p`. Exact morphisms are re-expanded at `p`; jets only have a
/// differential at their own center.
pub fn differential_at(phi: &Morphism, p: &[Scalar]) -> Result<TangentMap> {
    let phi = phi.recentered(p)?;
    let (sn, sm) = phi.source().dim();
    let (tn, tm) = phi.target().dim();
    let even = (0..tn)
        .map(|i| (0..sn).map(|j| phi.pullback_at(Coord::Even(i)).linear_coefficient(Coord::Even(j))).collect())
        .collect();
    let odd = (0..tm)
        .map(|a| (0..sm).map(|b| phi.pullback_at(Coord::Odd(a)).linear_coefficient(Coord::Odd(b))).collect())
        .collect();
    Ok(TangentMap { even, odd, source_dim: (sn, sm), target_dim: (tn, tm) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankProfile {
    pub even_rank: usize,
    pub odd_rank: usize,
    pub is_submersion: bool,
    pub is_immersion: bool,
}

pub fn rank_profile(phi: &Morphism, p: &[Scalar]) -> Result<RankProfile> {
    let t = differential_at(phi, p)?;
    let (even_rank, odd_rank) = (t.even_rank(), t.odd_rank());
    Ok(RankProfile {
        even_rank,
        odd_rank,
        is_submersion: even_rank == t.target_dim.0 && odd_rank == t.target_dim.1,
        is_immersion: even_rank == t.source_dim.0 && odd_rank == t.source_dim.1,
    })
}
