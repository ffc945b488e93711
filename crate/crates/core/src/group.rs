//! Lie supergroups presented by a polynomial multiplication law on a single
//! chart centered at the identity.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{compose, differential_at, guard, newton_solve, rank_profile, Morphism, ProductChart};
use crate::ideal::{IdealPresentation, PivotForm};
use crate::reduced::solve_reduced;
use crate::residual::{Report, Residual};
use crate::scalar::Scalar;
use crate::superalg::{ChartSignature, Coord, Parity, SuperPolynomial};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieSupergroup {
    name: String,
    chart: Arc<ChartSignature>,
    pair: ProductChart,
    mul: Morphism,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl LieSupergroup {
    /// `chart` is centered at the identity; `mul` lists the pullback of each
    /// coordinate on the product chart whose names carry suffixes `1`, `2`.
    pub fn new(name: impl Into<String>, chart: &Arc<ChartSignature>, mul: Vec<SuperPolynomial>) -> Result<Self> {
        let pair = ProductChart::new(&[(chart, "1"), (chart, "2")])?;
        let mul = Morphism::new(pair.signature(), chart, mul, None)?;
        Ok(LieSupergroup { name: name.into(), chart: chart.clone(), pair, mul })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn chart(&self) -> &Arc<ChartSignature> {
        &self.chart
    }

    pub fn identity(&self) -> &[Scalar] {
        self.chart.center()
    }

    pub fn dim(&self) -> (usize, usize) {
        self.chart.dim()
    }

    /// `G × G` with coordinate suffixes `1`, `2`.
    pub fn pair(&self) -> &ProductChart {
        &self.pair
    }

    pub fn mul(&self) -> &Morphism {
        &self.mul
    }

    /// `G × G × G` with coordinate suffixes `1`, `2`, `3`.
    pub fn triple(&self) -> Result<ProductChart> {
        ProductChart::new(&[(&self.chart, "1"), (&self.chart, "2"), (&self.chart, "3")])
    }

    /// Coordinates of the identity as constants on `over`.
    pub fn identity_values(&self, over: &Arc<ChartSignature>) -> Vec<SuperPolynomial> {
        point_values(&self.chart, self.identity(), over)
    }

    /// `ν(g, h)` for group-valued families `g`, `h` on a common chart.
    pub fn product(
        &self,
        g: &[SuperPolynomial],
        h: &[SuperPolynomial],
        over: &Arc<ChartSignature>,
        assigned: Option<u32>,
    ) -> Result<(Vec<SuperPolynomial>, Option<u32>)> {
        let mut a = vec![SuperPolynomial::zero(over); self.pair.signature().n_coords()];
        for (i, &t) in self.pair.embedding(0).iter().enumerate() {
            a[t] = g[i].clone();
        }
        for (i, &t) in self.pair.embedding(1).iter().enumerate() {
            a[t] = h[i].clone();
        }
        let mut order = assigned;
        let mut out = Vec::with_capacity(self.chart.n_coords());
        for f in self.mul.pullbacks() {
            let (v, o) = f.substitute_tracked(None, &a, assigned, over)?;
            order = o;
            out.push(v);
        }
        Ok((out, order))
    }

    /// `ν(g, h)` of two reduced points.
    pub fn reduced_product(&self, g: &[Scalar], h: &[Scalar]) -> Result<Vec<Scalar>> {
        let p: Vec<Scalar> = g.iter().chain(h).cloned().collect();
        self.mul.reduced_value(&p)
    }
}

/// A reduced point of `chart` as constant functions on `over`.
pub(crate) fn point_values(
    chart: &ChartSignature,
    point: &[Scalar],
    over: &Arc<ChartSignature>,
) -> Vec<SuperPolynomial> {
    chart
        .coords()
        .map(|c| match c {
            Coord::Even(i) => SuperPolynomial::constant(over, point[i].clone()),
            Coord::Odd(_) => SuperPolynomial::zero(over),
        })
        .collect()
}

fn coordinates(over: &Arc<ChartSignature>) -> Vec<SuperPolynomial> {
    over.coords().map(|c| SuperPolynomial::coordinate_at(over, c)).collect()
}

fn labelled(chart: &ChartSignature, values: Vec<SuperPolynomial>) -> Vec<(String, SuperPolynomial)> {
    chart.coords().map(|c| chart.name_of(c).to_string()).zip(values).collect()
}

fn minus(a: &[SuperPolynomial], b: &[SuperPolynomial]) -> Result<Vec<SuperPolynomial>> {
    a.iter().zip(b).map(|(x, y)| x.try_sub(y)).collect()
}

/// Residuals of the group axioms at order `d`: associativity, both identity
/// laws, the inverse law on both sides, and `ι² = id`.
pub fn verify_group_axioms(g: &LieSupergroup, d: u32) -> Result<Report> {
    let mut report = Report::default();
    let chart = g.chart();

    let t = g.triple()?;
    let ts = t.signature();
    let (x1, x2, x3) = (t.factor_coordinates(0), t.factor_coordinates(1), t.factor_coordinates(2));
    let (x12, _) = g.product(&x1, &x2, ts, None)?;
    let (left, _) = g.product(&x12, &x3, ts, None)?;
    let (x23, _) = g.product(&x2, &x3, ts, None)?;
    let (right, _) = g.product(&x1, &x23, ts, None)?;
    report.push(Residual::new("associativity", labelled(chart, minus(&left, &right)?), None, d));

    let x = coordinates(chart);
    let e = g.identity_values(chart);
    let (ex, _) = g.product(&e, &x, chart, None)?;
    report.push(Residual::new("left identity", labelled(chart, minus(&ex, &x)?), None, d));
    let (xe, _) = g.product(&x, &e, chart, None)?;
    report.push(Residual::new("right identity", labelled(chart, minus(&xe, &x)?), None, d));

    let w = d + guard(chart);
    let iota = derive_inverse(g, w)?;
    let (ix, o1) = g.product(iota.pullbacks(), &x, chart, iota.order())?;
    let (xi, o2) = g.product(&x, iota.pullbacks(), chart, iota.order())?;
    let inverse = Residual::merged(
        "inverse",
        vec![
            Residual::new("left", labelled(chart, minus(&ix, &e)?), o1, d),
            Residual::new("right", labelled(chart, minus(&xi, &e)?), o2, d),
        ],
        d,
    );
    report.push(inverse);
    let twice = compose(&iota, &iota)?;
    report.push(Residual::between("involution", &twice, &Morphism::identity(chart), d)?);
    Ok(report)
}

/// Left or right translation by a reduced point, as an exact morphism.
pub fn translation_morphism(g: &LieSupergroup, point: &[Scalar], side: Side) -> Result<Morphism> {
    let chart = g.chart();
    if point.len() != chart.n_even() {
        return Err(Error::DimensionMismatch(format!("{} values for {:?}", point.len(), chart)));
    }
    let x = coordinates(chart);
    let p = point_values(chart, point, chart);
    let (vals, _) = match side {
        Side::Left => g.product(&p, &x, chart, None)?,
        Side::Right => g.product(&x, &p, chart, None)?,
    };
    let m = Morphism::new(chart, chart, vals, None)?;
    if differential_at(&m, g.identity())?.inverse().is_none() {
        return Err(Error::NotInvertible(format!("{point:?} in {}", g.name())));
    }
    Ok(m)
}

/// The reduced point `h` with `ν(g, h) = e`.
pub fn reduced_inverse(g: &LieSupergroup, point: &[Scalar]) -> Result<Vec<Scalar>> {
    let chart = g.chart();
    translation_morphism(g, point, Side::Left)?;
    let x = coordinates(chart);
    let p = point_values(chart, point, chart);
    let (vals, _) = g.product(&p, &x, chart, None)?;
    let system: Vec<SuperPolynomial> = (0..chart.n_even())
        .map(|i| vals[i].try_sub(&SuperPolynomial::constant(chart, g.identity()[i].clone())))
        .collect::<Result<_>>()?;
    if system.is_empty() {
        return Ok(Vec::new());
    }
    solve_reduced(&system, g.identity())
        .ok_or_else(|| Error::NotInvertible(format!("no reduced inverse found for {point:?}")))
}

/// `ι` as a jet of order `d` at the identity, solving `ν(g, ι(g)) = e`
/// with the inverse function theorem applied to `h ↦ ν(g, h)`.
pub fn derive_inverse(g: &LieSupergroup, d: u32) -> Result<Morphism> {
    let chart = g.chart();
    let (_, m) = chart.dim();
    let left_e = {
        let x = coordinates(chart);
        let (vals, _) = g.product(&g.identity_values(chart), &x, chart, None)?;
        Morphism::new(chart, chart, vals, None)?
    };
    let jinv = differential_at(&left_e, g.identity())?
        .inverse()
        .ok_or_else(|| Error::SingularDifferential(format!("h -> gh at the identity of {}", g.name())))?;
    let x = coordinates(chart);
    let e = g.identity_values(chart);
    let h = newton_solve(e.clone(), chart.n_even(), &jinv, d, d as usize + m + 4, |h| {
        let (v, _) = g.product(&x, h, chart, Some(d))?;
        Ok(minus(&v, &e)?.into_iter().map(|f| f.truncated(d)).collect())
    })?;
    Morphism::new(chart, chart, h, Some(d))
}

/// Structure constants of the Lie superalgebra on the coordinate basis at `e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LieSuperalgebra {
    pub basis: Vec<(String, Parity)>,
    /// `constants[k][i][j]` is the `k`-th component of `[X_i, X_j]`.
    pub constants: Vec<Vec<Vec<Scalar>>>,
}

impl LieSuperalgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn sign(&self, i: usize, j: usize) -> Scalar {
        if self.basis[i].1.is_odd() && self.basis[j].1.is_odd() {
            -Scalar::one()
        } else {
            Scalar::one()
        }
    }

    pub fn bracket(&self, i: usize, j: usize) -> Vec<Scalar> {
        (0..self.dim()).map(|k| self.constants[k][i][j].clone()).collect()
    }

    fn bracket_with(&self, i: usize, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim()];
        for (l, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                let t = &self.constants[k][i][l] * c;
                *o += &t;
            }
        }
        out
    }

    /// Pairs violating `[X_i, X_j] = -(-1)^{|i||j|} [X_j, X_i]`.
    pub fn antisymmetry_failures(&self) -> Vec<(usize, usize)> {
        let n = self.dim();
        let mut bad = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let s = self.sign(i, j);
                let ok = (0..n).all(|k| self.constants[k][i][j] == -(&s * &self.constants[k][j][i]));
                if !ok {
                    bad.push((i, j));
                }
            }
        }
        bad
    }

    /// Triples where the graded Jacobi sum is nonzero, with that sum.
    pub fn jacobi_failures(&self) -> Vec<((usize, usize, usize), Vec<Scalar>)> {
        let n = self.dim();
        let mut bad = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut total = vec![Scalar::zero(); n];
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        let inner = self.bracket(b, c);
                        let outer = self.bracket_with(a, &inner);
                        let s = self.sign(a, c);
                        for (t, o) in total.iter_mut().zip(outer) {
                            *t += &(&s * &o);
                        }
                    }
                    if total.iter().any(|t| !t.is_zero()) {
                        bad.push(((i, j, k), total));
                    }
                }
            }
        }
        bad
    }
}

/// Reads `b^k_ij`, the coefficient of `z1_i z2_j` in `ν*(z_k)` at `(e, e)`,
/// and forms `c^k_ij = b^k_ij - (-1)^{|i||j|} b^k_ji`.
pub fn lie_superalgebra(g: &LieSupergroup) -> Result<LieSuperalgebra> {
    let chart = g.chart();
    let pc = g.pair();
    let ps = pc.signature();
    let n = chart.n_coords();
    let mono = |i: usize, j: usize| -> SuperPolynomial {
        let a = SuperPolynomial::local_coordinate(ps, ps.coord_at(pc.embedding(0)[i]));
        let b = SuperPolynomial::local_coordinate(ps, ps.coord_at(pc.embedding(1)[j]));
        &a * &b
    };
    let b = |k: usize, i: usize, j: usize| -> Scalar {
        let m = mono(i, j);
        let (mm, s) = m.terms().next().expect("distinct coordinates give a nonzero product");
        &g.mul().pullbacks()[k].coefficient(mm) * s
    };
    let basis: Vec<(String, Parity)> = chart.coords().map(|c| (chart.name_of(c).to_string(), Parity::of(c))).collect();
    let mut constants = vec![vec![vec![Scalar::zero(); n]; n]; n];
    for (k, plane) in constants.iter_mut().enumerate() {
        for i in 0..n {
            for j in 0..n {
                let s = if basis[i].1.is_odd() && basis[j].1.is_odd() { -Scalar::one() } else { Scalar::one() };
                plane[i][j] = &b(k, i, j) - &(&s * &b(k, j, i));
            }
        }
    }
    let alg = LieSuperalgebra { basis, constants };
    if let Some(((i, j, k), _)) = alg.jacobi_failures().into_iter().next() {
        return Err(Error::Inconsistent(format!(
            "Jacobi identity fails on ({}, {}, {})",
            alg.basis[i].0, alg.basis[j].0, alg.basis[k].0
        )));
    }
    Ok(alg)
}

/// A subsupergroup cut out by an ideal in the group chart, with its own
/// chart on the free coordinates of the pivot form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subsupergroup {
    parent: LieSupergroup,
    ideal: IdealPresentation,
    chart: Arc<ChartSignature>,
    embed: Morphism,
    pivots: PivotForm,
    report: Report,
}

impl Subsupergroup {
    /// Pivot form, chart, embedding and invariance residuals. Does not fail
    /// on nonzero residuals; see [`check_subsupergroup`].
    pub fn analyze(g: &LieSupergroup, ideal: &IdealPresentation, d: u32) -> Result<Subsupergroup> {
        let chart = g.chart();
        if ideal.chart() != chart {
            return Err(Error::SignatureMismatch(format!(
                "ideal lives on {:?}, group chart is {:?}",
                ideal.chart(),
                chart
            )));
        }
        let w = d + guard(chart);
        let pf = ideal.pivot_form(w)?;
        let mut report = Report::default();

        let pc = g.pair();
        let both = ideal.lift(pc, 0)?.sum(&ideal.lift(pc, 1)?)?;
        let pf2 = both.pivot_form(d)?;
        let mut nu_parts = Vec::new();
        let mut valid = None::<u32>;
        for f in ideal.generators() {
            let pulled = f.substitute(g.mul().pullbacks(), pc.signature())?;
            let (nf, o) = pf2.reduce(&pulled, None)?;
            valid = Some(valid.map_or(o, |v: u32| v.min(o)));
            nu_parts.push((f.to_string(), nf));
        }
        report.push(Residual::new("nu-invariance", nu_parts, valid, d));

        let iota = derive_inverse(g, w)?;
        let mut iota_parts = Vec::new();
        let mut valid = None::<u32>;
        for f in ideal.generators() {
            let (pulled, o1) = f.substitute_tracked(None, iota.pullbacks(), iota.order(), chart)?;
            let (nf, o) = pf.reduce(&pulled.truncated_opt(o1), o1)?;
            valid = Some(valid.map_or(o, |v: u32| v.min(o)));
            iota_parts.push((f.to_string(), nf));
        }
        report.push(Residual::new("iota-invariance", iota_parts, valid, d));

        let free_even = pf.free_even();
        let free_odd = pf.free_odd();
        let h_chart = Arc::new(ChartSignature::new(
            free_even.iter().map(|&i| chart.even_names()[i].clone()).collect(),
            free_odd.iter().map(|&j| chart.odd_names()[j].clone()).collect(),
            free_even.iter().map(|&i| chart.center()[i].clone()).collect(),
        )?);
        let restrict: Vec<SuperPolynomial> = chart
            .coords()
            .map(|c| match c {
                Coord::Even(i) => match free_even.iter().position(|&f| f == i) {
                    Some(k) => SuperPolynomial::coordinate_at(&h_chart, Coord::Even(k)),
                    None => SuperPolynomial::constant(&h_chart, chart.center()[i].clone()),
                },
                Coord::Odd(j) => match free_odd.iter().position(|&f| f == j) {
                    Some(k) => SuperPolynomial::coordinate_at(&h_chart, Coord::Odd(k)),
                    None => SuperPolynomial::zero(&h_chart),
                },
            })
            .collect();
        let pulls = pf.solution().iter().map(|f| f.substitute(&restrict, &h_chart)).collect::<Result<Vec<_>>>()?;
        let order = if pf.is_exact() { None } else { Some(pf.order()) };
        let embed = Morphism::new(&h_chart, chart, pulls, order)?;
        if !rank_profile(&embed, h_chart.center())?.is_immersion {
            return Err(Error::Inconsistent("subgroup embedding is not an immersion at e".into()));
        }
        Ok(Subsupergroup { parent: g.clone(), ideal: ideal.clone(), chart: h_chart, embed, pivots: pf, report })
    }

    pub fn parent(&self) -> &LieSupergroup {
        &self.parent
    }

    pub fn ideal(&self) -> &IdealPresentation {
        &self.ideal
    }

    pub fn chart(&self) -> &Arc<ChartSignature> {
        &self.chart
    }

    pub fn embed(&self) -> &Morphism {
        &self.embed
    }

    pub fn pivots(&self) -> &PivotForm {
        &self.pivots
    }

    pub fn report(&self) -> &Report {
        &self.report
    }

    pub(crate) fn push_residual(&mut self, r: Residual) {
        self.report.push(r);
    }

    pub fn dim(&self) -> (usize, usize) {
        self.chart.dim()
    }

    /// The subgroup as a supergroup in its own chart (needs an exact embedding).
    pub fn as_group(&self, name: impl Into<String>) -> Result<LieSupergroup> {
        if !self.embed.is_exact() {
            return Err(Error::InsufficientOrder("subgroup embedding is only a jet".into()));
        }
        let hh = ProductChart::new(&[(&self.chart, "1"), (&self.chart, "2")])?;
        let lift = |k: usize| -> Result<Vec<SuperPolynomial>> {
            self.embed.pullbacks().iter().map(|f| hh.lift(k, f)).collect()
        };
        let (vals, _) = self.parent.product(&lift(0)?, &lift(1)?, hh.signature(), None)?;
        let g_chart = self.parent.chart();
        let pulls: Vec<SuperPolynomial> = self
            .pivots
            .free_even()
            .into_iter()
            .map(|i| vals[g_chart.flat_index(Coord::Even(i))].clone())
            .chain(self.pivots.free_odd().into_iter().map(|j| vals[g_chart.flat_index(Coord::Odd(j))].clone()))
            .collect();
        LieSupergroup::new(name, &self.chart, pulls)
    }
}

/// Builds the subsupergroup and fails with a witness when `ν` or `ι` does
/// not preserve the ideal.
pub fn check_subsupergroup(g: &LieSupergroup, ideal: &IdealPresentation, d: u32) -> Result<Subsupergroup> {
    let h = Subsupergroup::analyze(g, ideal, d)?;
    if let Some(r) = h.report.failures().next() {
        let w = r.witness().map(|(n, f)| format!("{n}: {f}")).unwrap_or_else(|| "insufficient order".into());
        return Err(Error::NotInvariant(format!("{} residual {w}", r.label)));
    }
    Ok(h)
}

#[derive(Serialize, Deserialize)]
struct GroupRepr {
    name: String,
    chart: ChartSignature,
    mul: Morphism,
}

impl Serialize for LieSupergroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupRepr { name: self.name.clone(), chart: (*self.chart).clone(), mul: self.mul.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LieSupergroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = GroupRepr::deserialize(d)?;
        let chart = Arc::new(r.chart);
        let g = LieSupergroup::new(r.name, &chart, r.mul.pullbacks().to_vec()).map_err(D::Error::custom)?;
        if g.mul != r.mul {
            return Err(D::Error::custom("multiplication does not live on the product chart"));
        }
        Ok(g)
    }
}

#[derive(Serialize, Deserialize)]
struct SubgroupRepr {
    parent: LieSupergroup,
    ideal: IdealPresentation,
    order: u32,
}

impl Serialize for Subsupergroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let order = self.report.residuals.first().map_or(0, |r| r.required);
        SubgroupRepr { parent: self.parent.clone(), ideal: self.ideal.clone(), order }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subsupergroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = SubgroupRepr::deserialize(d)?;
        Subsupergroup::analyze(&r.parent, &r.ideal, r.order).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, scalars};

    fn coord(g: &LieSupergroup, name: &str) -> SuperPolynomial {
        SuperPolynomial::coordinate(g.chart(), name).unwrap()
    }

    #[test]
    fn bundled_groups_satisfy_the_axioms() {
        for g in [fixtures::gl11(), fixtures::translation(), fixtures::affine(), fixtures::gl2()] {
            let report = verify_group_axioms(&g, 4).unwrap();
            assert_eq!(report.residuals.len(), 5);
            for r in &report.residuals {
                assert!(r.passed(), "{} fails {}: {:?}", g.name(), r.label, r.witness());
            }
        }
    }

    #[test]
    fn broken_group_fails_associativity_only() {
        let report = verify_group_axioms(&fixtures::broken_gl11(), 4).unwrap();
        let assoc = report.get("associativity").unwrap();
        assert!(!assoc.passed());
        let (name, w) = assoc.witness().unwrap();
        assert_eq!(name, "alpha");
        assert_eq!(w.to_absolute().to_string(), "-alpha1*beta2*alpha3");
        assert!(report.get("left identity").unwrap().passed());
        assert!(report.get("right identity").unwrap().passed());
    }

    #[test]
    fn translation_inverse_is_negation() {
        let g = fixtures::translation();
        let iota = derive_inverse(&g, 4).unwrap();
        assert_eq!(iota.pullbacks()[0], -coord(&g, "t"));
        assert_eq!(iota.pullbacks()[1], -coord(&g, "tau"));
    }

    #[test]
    fn translations_of_gl11() {
        let g = fixtures::gl11();
        let le = translation_morphism(&g, g.identity(), Side::Left).unwrap();
        assert!(le.agrees_with(&Morphism::identity(g.chart())).unwrap());
        let two = Scalar::from_int(2);
        let l = translation_morphism(&g, &scalars(&[2, 1]), Side::Left).unwrap();
        assert_eq!(l.pullback("a").unwrap(), &coord(&g, "a").scale(&two));
        assert_eq!(l.pullback("alpha").unwrap(), &coord(&g, "alpha").scale(&two));
        assert_eq!(l.pullback("beta").unwrap(), &coord(&g, "beta"));
        assert_eq!(l.pullback("b").unwrap(), &coord(&g, "b"));
        assert!(matches!(translation_morphism(&g, &scalars(&[0, 1]), Side::Left), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn right_translations_compose_in_reverse() {
        let g = fixtures::gl2();
        let p = scalars(&[1, 2, 0, 1]);
        let q = scalars(&[3, 0, 1, 1]);
        let rp = translation_morphism(&g, &p, Side::Right).unwrap();
        let rq = translation_morphism(&g, &q, Side::Right).unwrap();
        let qp = g.reduced_product(&q, &p).unwrap();
        let r_qp = translation_morphism(&g, &qp, Side::Right).unwrap();
        assert!(compose(&rq, &rp).unwrap().agrees_with(&r_qp).unwrap());
    }

    #[test]
    fn left_translation_by_inverse_undoes_it() {
        let g = fixtures::gl2();
        let p = scalars(&[2, 1, 1, 1]);
        let inv = reduced_inverse(&g, &p).unwrap();
        assert_eq!(inv, scalars(&[1, -1, -1, 2]));
        let l = translation_morphism(&g, &p, Side::Left).unwrap();
        let l_inv = translation_morphism(&g, &inv, Side::Left).unwrap();
        assert!(compose(&l, &l_inv).unwrap().agrees_with(&Morphism::identity(g.chart())).unwrap());
    }

    #[test]
    fn gl11_superalgebra() {
        let alg = lie_superalgebra(&fixtures::gl11()).unwrap();
        let idx = |n: &str| alg.basis.iter().position(|(b, _)| b == n).unwrap();
        let (a, b, al, be) = (idx("a"), idx("b"), idx("alpha"), idx("beta"));
        let unit = |k: usize, s: i64| {
            let mut v = vec![Scalar::zero(); 4];
            v[k] = Scalar::from_int(s);
            v
        };
        assert_eq!(alg.bracket(a, al), unit(al, 1));
        assert_eq!(alg.bracket(b, be), unit(be, 1));
        assert_eq!(alg.bracket(a, be), unit(be, -1));
        assert_eq!(alg.bracket(b, al), unit(al, -1));
        assert_eq!(alg.bracket(al, be), scalars(&[1, 1, 0, 0]));
        assert_eq!(alg.bracket(a, b), scalars(&[0, 0, 0, 0]));
        assert!(alg.antisymmetry_failures().is_empty());
        assert!(alg.jacobi_failures().is_empty());
    }

    #[test]
    fn abelian_superalgebra() {
        let alg = lie_superalgebra(&fixtures::translation()).unwrap();
        assert!(alg.constants.iter().flatten().flatten().all(Scalar::is_zero));
    }

    #[test]
    fn upper_triangular_subgroup() {
        let g = fixtures::gl11();
        let h = check_subsupergroup(&g, &fixtures::gl11_upper(&g), 4).unwrap();
        assert_eq!(h.dim(), (1, 1));
        assert_eq!(h.chart().even_names(), ["b"]);
        assert_eq!(h.chart().odd_names(), ["alpha"]);
        assert!(h.embed().is_exact());
        let hg = h.as_group("Upper").unwrap();
        assert!(verify_group_axioms(&hg, 4).unwrap().passed());
    }

    #[test]
    fn trivial_and_reduced_subgroups() {
        let g = fixtures::gl11();
        let all: Vec<SuperPolynomial> = ["a", "b"]
            .iter()
            .map(|n| &coord(&g, n) - &SuperPolynomial::one(g.chart()))
            .chain(["alpha", "beta"].iter().map(|n| coord(&g, n)))
            .collect();
        let e = check_subsupergroup(&g, &IdealPresentation::new(g.chart(), all).unwrap(), 4).unwrap();
        assert_eq!(e.dim(), (0, 0));
        let odd = vec![coord(&g, "alpha"), coord(&g, "beta")];
        let red = check_subsupergroup(&g, &IdealPresentation::new(g.chart(), odd).unwrap(), 4).unwrap();
        assert_eq!(red.dim(), (2, 0));
        let gl1sq = red.as_group("GL1xGL1").unwrap();
        assert_eq!(gl1sq.mul().pullback("a").unwrap().to_absolute().to_string(), "a1*a2");
    }

    #[test]
    fn non_invariant_ideal_is_rejected() {
        let g = fixtures::gl11();
        let ideal =
            IdealPresentation::new(g.chart(), vec![&coord(&g, "a") - &SuperPolynomial::one(g.chart())]).unwrap();
        let h = Subsupergroup::analyze(&g, &ideal, 4).unwrap();
        assert!(!h.report().get("nu-invariance").unwrap().passed());
        assert!(matches!(check_subsupergroup(&g, &ideal, 4), Err(Error::NotInvariant(_))));
    }

    #[test]
    fn serde_round_trip() {
        let g = fixtures::affine();
        let json = serde_json::to_string(&g).unwrap();
        let back: LieSupergroup = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
        let gl = fixtures::gl11();
        let h = check_subsupergroup(&gl, &fixtures::gl11_upper(&gl), 3).unwrap();
        let back: Subsupergroup = serde_json::from_str(&serde_json::to_string(&h).unwrap()).unwrap();
        assert_eq!(back, h);
    }
}
