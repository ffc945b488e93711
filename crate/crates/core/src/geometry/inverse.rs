use std::sync::Arc;

use num_traits::Zero;

use super::{compose, differential_at, rank_profile, Morphism, TangentMap};
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Scalar;
use crate::superalg::{ChartSignature, Coord, SuperPolynomial};

/// Chord iteration `x ← x - J⁻¹ r(x)` with the differential frozen at the
/// base point. Each step gains at least one degree in the maximal ideal, so
/// the iteration is stationary after `order + m + 1` steps. `x` holds even
/// unknowns first; `residual` returns even components first.
pub(crate) fn newton_solve<F>(
    mut x: Vec<SuperPolynomial>,
    n_even: usize,
    jinv: &TangentMap,
    order: u32,
    max_iter: usize,
    mut residual: F,
) -> Result<Vec<SuperPolynomial>>
where
    F: FnMut(&[SuperPolynomial]) -> Result<Vec<SuperPolynomial>>,
{
    let r_even = jinv.source_dim.0;
    for _ in 0..max_iter {
        let r = residual(&x)?;
        if r.iter().all(SuperPolynomial::is_zero) {
            return Ok(x);
        }
        for (i, xi) in x.iter_mut().enumerate() {
            let (row, comps) =
                if i < n_even { (&jinv.even[i], &r[..r_even]) } else { (&jinv.odd[i - n_even], &r[r_even..]) };
            let mut step = SuperPolynomial::zero(xi.signature());
            for (c, rj) in row.iter().zip(comps) {
                if !c.is_zero() && !rj.is_zero() {
                    step = &step + &rj.scale(c);
                }
            }
            if !step.is_zero() {
                *xi = (&*xi - &step).truncated(order);
            }
        }
    }
    Err(Error::NoConvergence(max_iter))
}

/// The local inverse of `phi` near `p`, as a jet of order `d` expanded
/// around `phi(p)`.
pub fn invert_local(phi: &Morphism, p: &[Scalar], d: u32) -> Result<Morphism> {
    if phi.source().dim() != phi.target().dim() {
        return Err(Error::DimensionMismatch(format!("cannot invert {:?} -> {:?}", phi.source(), phi.target())));
    }
    let phi = phi.recentered(p)?;
    let jinv = differential_at(&phi, p)?
        .inverse()
        .ok_or_else(|| Error::SingularDifferential(format!("at {:?}", phi.source())))?;
    let src = phi.source().clone();
    let tgt = Arc::new(phi.target().with_center(phi.reduced_image())?);
    let (n, m) = src.dim();

    let local = |c: Coord| SuperPolynomial::local_coordinate(&tgt, c);
    let mut x0 = Vec::with_capacity(n + m);
    for (i, pi) in p.iter().enumerate().take(n) {
        let mut v = SuperPolynomial::constant(&tgt, pi.clone());
        for (j, c) in jinv.even[i].iter().enumerate() {
            v = &v + &local(Coord::Even(j)).scale(c);
        }
        x0.push(v);
    }
    for a in 0..m {
        let mut v = SuperPolynomial::zero(&tgt);
        for (b, c) in jinv.odd[a].iter().enumerate() {
            v = &v + &local(Coord::Odd(b)).scale(c);
        }
        x0.push(v);
    }

    let ids: Vec<SuperPolynomial> = tgt.coords().map(|c| SuperPolynomial::coordinate_at(&tgt, c)).collect();
    let mut valid = d;
    let x = newton_solve(x0, n, &jinv, d, d as usize + m + 4, |x| {
        let mut r = Vec::with_capacity(n + m);
        for (f, y) in phi.pullbacks().iter().zip(&ids) {
            let (v, o) = f.substitute_tracked(phi.order(), x, Some(d), &tgt)?;
            let o = o.unwrap_or(d);
            valid = valid.min(o);
            r.push(v.try_sub(y)?.truncated(o));
        }
        Ok(r)
    })?;
    if valid < d {
        return Err(Error::InsufficientOrder(format!("inverse known only to order {valid}, requested {d}")));
    }
    Morphism::new(&tgt, &src, x, Some(d))
}

/// Coordinates in which a submersion becomes a coordinate projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptedChart {
    /// New chart: pivot coordinates first (they carry the target's values),
    /// then the untouched source coordinates.
    pub chart: Arc<ChartSignature>,
    /// Old chart → new chart.
    pub change: Morphism,
    /// New chart → old chart, jet of the requested order.
    pub inverse: Morphism,
    pub pivot_even: Vec<usize>,
    pub pivot_odd: Vec<usize>,
    /// `phi` written in the new chart.
    pub normal_form: Morphism,
}

impl AdaptedChart {
    pub fn non_pivot_even(&self) -> Vec<usize> {
        let n = self.change.source().n_even();
        (0..n).filter(|i| !self.pivot_even.contains(i)).collect()
    }

    pub fn non_pivot_odd(&self) -> Vec<usize> {
        let m = self.change.source().n_odd();
        (0..m).filter(|j| !self.pivot_odd.contains(j)).collect()
    }
}

pub fn adapted_coordinates(phi: &Morphism, p: &[Scalar], d: u32) -> Result<AdaptedChart> {
    let prof = rank_profile(phi, p)?;
    if !prof.is_submersion {
        return Err(Error::NotSubmersion(format!(
            "ranks ({}|{}) into a ({}|{}) chart",
            prof.even_rank,
            prof.odd_rank,
            phi.target().n_even(),
            phi.target().n_odd()
        )));
    }
    let phi = phi.recentered(p)?;
    let tm = differential_at(&phi, p)?;
    let (_, pivot_even) = linalg::rref(&tm.even, tm.source_dim.0);
    let (_, pivot_odd) = linalg::rref(&tm.odd, tm.source_dim.1);
    let src = phi.source().clone();
    let (n, m) = src.dim();
    let rest_even: Vec<usize> = (0..n).filter(|i| !pivot_even.contains(i)).collect();
    let rest_odd: Vec<usize> = (0..m).filter(|j| !pivot_odd.contains(j)).collect();

    let q = phi.reduced_image();
    let even_names: Vec<String> = pivot_even.iter().chain(&rest_even).map(|&i| src.even_names()[i].clone()).collect();
    let odd_names: Vec<String> = pivot_odd.iter().chain(&rest_odd).map(|&j| src.odd_names()[j].clone()).collect();
    let center: Vec<Scalar> = q.iter().cloned().chain(rest_even.iter().map(|&i| p[i].clone())).collect();
    let chart = Arc::new(ChartSignature::new(even_names, odd_names, center)?);

    let tn = phi.target().n_even();
    let mut pulls: Vec<SuperPolynomial> = Vec::with_capacity(n + m);
    pulls.extend((0..tn).map(|k| phi.pullback_at(Coord::Even(k)).clone()));
    pulls.extend(rest_even.iter().map(|&i| SuperPolynomial::coordinate_at(&src, Coord::Even(i))));
    pulls.extend((0..phi.target().n_odd()).map(|k| phi.pullback_at(Coord::Odd(k)).clone()));
    pulls.extend(rest_odd.iter().map(|&j| SuperPolynomial::coordinate_at(&src, Coord::Odd(j))));
    let change = Morphism::new(&src, &chart, pulls, phi.order())?;
    let inverse = invert_local(&change, p, d)?;
    let normal_form = compose(&inverse, &phi)?;

    let projection = Morphism::new(
        &chart,
        phi.target(),
        phi.target()
            .coords()
            .map(|c| match c {
                Coord::Even(k) => SuperPolynomial::coordinate_at(&chart, Coord::Even(k)),
                Coord::Odd(k) => SuperPolynomial::coordinate_at(&chart, Coord::Odd(k)),
            })
            .collect(),
        None,
    )?;
    if !normal_form.agrees_with(&projection)? {
        return Err(Error::Inconsistent("adapted chart does not straighten the map".into()));
    }
    Ok(AdaptedChart { chart, change, inverse, pivot_even, pivot_odd, normal_form })
}
