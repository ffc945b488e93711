//! Ideals given by generators whose linear parts are independent at the
//! chart center, and reduction modulo them.
//!
//! Row reduction of the linear parts puts the generators in the form
//! `z_p - h_p` with one pivot coordinate `z_p` each. Solving for the pivots
//! gives a normal form: a function lies in the ideal (to the working order)
//! exactly when it vanishes after the pivots are replaced by their solved
//! values.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{newton_solve, ProductChart, TangentMap};
use crate::linalg::{self, Matrix};
use crate::superalg::{ChartSignature, Coord, SuperPolynomial, TermRepr};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealPresentation {
    chart: Arc<ChartSignature>,
    generators: Vec<SuperPolynomial>,
    /// Jet order of the generators, `None` when exact.
    order: Option<u32>,
}

/// Generators solved for their pivot coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotForm {
    chart: Arc<ChartSignature>,
    pub pivot_even: Vec<usize>,
    pub pivot_odd: Vec<usize>,
    /// Flat assignment: pivots get their solved values, free coordinates themselves.
    solution: Vec<SuperPolynomial>,
    order: u32,
    exact: bool,
}

impl IdealPresentation {
    pub fn new(chart: &Arc<ChartSignature>, generators: Vec<SuperPolynomial>) -> Result<Self> {
        Self::with_order(chart, generators, None)
    }

    pub fn with_order(
        chart: &Arc<ChartSignature>,
        generators: Vec<SuperPolynomial>,
        order: Option<u32>,
    ) -> Result<Self> {
        for g in &generators {
            if g.signature() != chart {
                return Err(Error::SignatureMismatch(format!(
                    "generator {g} lives on {:?}, ideal on {:?}",
                    g.signature(),
                    chart
                )));
            }
            if g.parity().is_none() {
                return Err(Error::Signature(format!("generator {g} has mixed parity")));
            }
        }
        Ok(IdealPresentation { chart: chart.clone(), generators, order })
    }

    pub fn chart(&self) -> &Arc<ChartSignature> {
        &self.chart
    }

    pub fn generators(&self) -> &[SuperPolynomial] {
        &self.generators
    }

    pub fn order(&self) -> Option<u32> {
        self.order
    }

    /// The same generators pulled back to factor `k` of a product.
    pub fn lift(&self, pc: &ProductChart, k: usize) -> Result<IdealPresentation> {
        let generators = self.generators.iter().map(|g| pc.lift(k, g)).collect::<Result<Vec<_>>>()?;
        Self::with_order(pc.signature(), generators, self.order)
    }

    pub fn sum(&self, other: &IdealPresentation) -> Result<IdealPresentation> {
        let order = match (self.order, other.order) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let generators = self.generators.iter().chain(&other.generators).cloned().collect();
        Self::with_order(&self.chart, generators, order)
    }

    /// Row-reduce the linear parts and solve for the pivots modulo even
    /// degree above `w`.
    pub fn pivot_form(&self, w: u32) -> Result<PivotForm> {
        let sig = &self.chart;
        let (n, m) = sig.dim();
        for g in &self.generators {
            if !g.constant_term().is_zero() {
                return Err(Error::GeneratorNotVanishing(format!("{g} at {:?}", sig)));
            }
        }
        let (even, odd): (Vec<&SuperPolynomial>, Vec<&SuperPolynomial>) =
            self.generators.iter().partition(|g| g.is_even());
        let (pivot_even, even_gens) = triangulate(&even, n, Coord::Even)?;
        let (pivot_odd, odd_gens) = triangulate(&odd, m, Coord::Odd)?;

        let coords: Vec<SuperPolynomial> = sig.coords().map(|c| SuperPolynomial::coordinate_at(sig, c)).collect();
        let assemble = |x: &[SuperPolynomial]| -> Vec<SuperPolynomial> {
            let mut a = coords.clone();
            for (k, &p) in pivot_even.iter().enumerate() {
                a[p] = x[k].clone();
            }
            for (k, &p) in pivot_odd.iter().enumerate() {
                a[n + p] = x[pivot_even.len() + k].clone();
            }
            a
        };
        let x0: Vec<SuperPolynomial> = pivot_even
            .iter()
            .map(|&p| SuperPolynomial::constant(sig, sig.center()[p].clone()))
            .chain(pivot_odd.iter().map(|_| SuperPolynomial::zero(sig)))
            .collect();
        let dims = (pivot_even.len(), pivot_odd.len());
        let jinv = TangentMap::identity(dims);
        let gens: Vec<SuperPolynomial> = even_gens.into_iter().chain(odd_gens).collect();
        let mut valid = w;
        let x = newton_solve(x0, dims.0, &jinv, w, w as usize + m + 4, |x| {
            let a = assemble(x);
            gens.iter()
                .map(|g| {
                    let (v, o) = g.substitute_tracked(self.order, &a, Some(w), sig)?;
                    let o = o.unwrap_or(w);
                    valid = valid.min(o);
                    Ok(v.truncated(o))
                })
                .collect()
        })?;
        let solution = assemble(&x);
        let exact = self.order.is_none()
            && gens.iter().try_fold(true, |ok, g| Ok::<_, Error>(ok && g.substitute(&solution, sig)?.is_zero()))?;
        Ok(PivotForm { chart: sig.clone(), pivot_even, pivot_odd, solution, order: valid, exact })
    }

    /// Normal form of `f` and the order to which it is valid.
    pub fn reduce(&self, f: &SuperPolynomial, w: u32) -> Result<(SuperPolynomial, u32)> {
        self.pivot_form(w)?.reduce(f, None)
    }
}

/// Row-reduce the linear parts; returns pivot columns and the transformed
/// generators `g'_i = Σ T_ij g_j` whose linear parts are in reduced echelon form.
fn triangulate(
    gens: &[&SuperPolynomial],
    cols: usize,
    coord: impl Fn(usize) -> Coord,
) -> Result<(Vec<usize>, Vec<SuperPolynomial>)> {
    let r = gens.len();
    if r == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let mut aug: Matrix = linalg::zeros(r, cols + r);
    for (i, g) in gens.iter().enumerate() {
        for (j, slot) in aug[i].iter_mut().take(cols).enumerate() {
            *slot = g.linear_coefficient(coord(j));
        }
        aug[i][cols + i] = One::one();
    }
    let (red, pivots) = linalg::rref(&aug, cols + r);
    let pivots: Vec<usize> = pivots.into_iter().take_while(|&p| p < cols).collect();
    if pivots.len() < r {
        let bad = gens.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", ");
        return Err(Error::DependentGenerators(bad));
    }
    let sig = gens[0].signature();
    let out = red
        .iter()
        .map(|row| {
            let mut acc = SuperPolynomial::zero(sig);
            for (j, g) in gens.iter().enumerate() {
                let c = &row[cols + j];
                if !c.is_zero() {
                    acc = &acc + &g.scale(c);
                }
            }
            acc
        })
        .collect();
    Ok((pivots, out))
}

impl PivotForm {
    pub fn chart(&self) -> &Arc<ChartSignature> {
        &self.chart
    }

    /// Order to which the solved pivot values are known.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// True when the solved values satisfy the generators identically.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn free_even(&self) -> Vec<usize> {
        (0..self.chart.n_even()).filter(|i| !self.pivot_even.contains(i)).collect()
    }

    pub fn free_odd(&self) -> Vec<usize> {
        (0..self.chart.n_odd()).filter(|j| !self.pivot_odd.contains(j)).collect()
    }

    /// Solved value of each coordinate, in flat order.
    pub fn solution(&self) -> &[SuperPolynomial] {
        &self.solution
    }

    /// Normal form of `f`, known to order `own` (`None` = exact).
    pub fn reduce(&self, f: &SuperPolynomial, own: Option<u32>) -> Result<(SuperPolynomial, u32)> {
        let (v, o) = f.substitute_tracked(own, &self.solution, Some(self.order), &self.chart)?;
        let o = o.unwrap_or(self.order);
        Ok((v.truncated(o), o))
    }
}

#[derive(Serialize, Deserialize)]
struct IdealRepr {
    chart: ChartSignature,
    order: Option<u32>,
    generators: Vec<Vec<TermRepr>>,
}

impl Serialize for IdealPresentation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IdealRepr {
            chart: (*self.chart).clone(),
            order: self.order,
            generators: self.generators.iter().map(SuperPolynomial::to_term_reprs).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IdealPresentation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = IdealRepr::deserialize(d)?;
        let chart = Arc::new(r.chart);
        let gens = r
            .generators
            .iter()
            .map(|t| SuperPolynomial::from_term_reprs(&chart, t))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        IdealPresentation::with_order(&chart, gens, r.order).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn gl11() -> Arc<ChartSignature> {
        Arc::new(
            ChartSignature::new(
                vec!["a".into(), "b".into()],
                vec!["alpha".into(), "beta".into()],
                vec![Scalar::one(), Scalar::one()],
            )
            .unwrap(),
        )
    }

    fn v(s: &Arc<ChartSignature>, n: &str) -> SuperPolynomial {
        SuperPolynomial::coordinate(s, n).unwrap()
    }

    #[test]
    fn coordinate_ideal_reduces_its_members() {
        let s = gl11();
        let one = SuperPolynomial::one(&s);
        let ideal = IdealPresentation::new(&s, vec![&v(&s, "a") - &one, v(&s, "beta")]).unwrap();
        let pf = ideal.pivot_form(4).unwrap();
        assert_eq!((pf.pivot_even.clone(), pf.pivot_odd.clone()), (vec![0], vec![1]));
        let member = &(&(&v(&s, "a") - &one) * &v(&s, "b")) + &(&v(&s, "alpha") * &v(&s, "beta"));
        assert!(pf.reduce(&member, None).unwrap().0.is_zero());
        let (nf, _) = pf.reduce(&v(&s, "alpha"), None).unwrap();
        assert_eq!(nf, v(&s, "alpha"));
        assert_eq!(pf.reduce(&v(&s, "a"), None).unwrap().0, one);
    }

    #[test]
    fn triangular_generators_are_solved() {
        // x - y^2 - t*s and t - y*s on (x, y | t, s)
        let s = Arc::new(ChartSignature::at_origin(["x", "y"], ["t", "u"]).unwrap());
        let (x, y, t, u) = (v(&s, "x"), v(&s, "y"), v(&s, "t"), v(&s, "u"));
        let g1 = &(&x - &(&y * &y)) - &(&t * &u);
        let g2 = &t - &(&y * &u);
        let ideal = IdealPresentation::new(&s, vec![g1.clone(), g2.clone()]).unwrap();
        let pf = ideal.pivot_form(5).unwrap();
        assert_eq!(pf.solution()[0], &y * &y);
        assert_eq!(pf.solution()[2], &y * &u);
        let f = &(&g1 * &y) + &(&g2 * &u);
        assert!(pf.reduce(&f, None).unwrap().0.is_zero());
    }

    #[test]
    fn dependent_and_nonvanishing_generators_fail() {
        let s = gl11();
        let one = SuperPolynomial::one(&s);
        let a1 = &v(&s, "a") - &one;
        let dep = IdealPresentation::new(&s, vec![a1.clone(), a1.scale(&Scalar::from_int(2))]).unwrap();
        assert!(matches!(dep.pivot_form(3), Err(Error::DependentGenerators(_))));
        let nil = IdealPresentation::new(&s, vec![&v(&s, "alpha") * &v(&s, "beta")]).unwrap();
        assert!(matches!(nil.pivot_form(3), Err(Error::DependentGenerators(_))));
        let off = IdealPresentation::new(&s, vec![v(&s, "a")]).unwrap();
        assert!(matches!(off.pivot_form(3), Err(Error::GeneratorNotVanishing(_))));
    }
}
