//! Actions of a supergroup on a chart: axioms, orbit maps, fundamental
//! fields, transitivity, stabilizers and the equivariant identification of
//! a homogeneous space with a coset space.

use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::coset::{CosetAtlas, CosetChart};
use crate::error::{Error, Result};
use crate::geometry::{
    adapted_coordinates, compose, differential_at, guard, rank_profile, AdaptedChart, Morphism, ProductChart,
    RankProfile, TangentMap,
};
use crate::group::{derive_inverse, point_values, translation_morphism, LieSupergroup, Side, Subsupergroup};
use crate::ideal::IdealPresentation;
use crate::residual::{Report, Residual};
use crate::scalar::Scalar;
use crate::superalg::{ChartSignature, Coord, Parity, SuperPolynomial};

/// `μ: G × M → M` with pullbacks on the product chart whose coordinate
/// names are those of `G` followed by those of `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Action {
    name: String,
    group: LieSupergroup,
    space: Arc<ChartSignature>,
    product: ProductChart,
    mu: Morphism,
}

impl Action {
    pub fn new(
        name: impl Into<String>,
        group: &LieSupergroup,
        space: &Arc<ChartSignature>,
        mu: Vec<SuperPolynomial>,
        order: Option<u32>,
    ) -> Result<Self> {
        let product = ProductChart::new(&[(group.chart(), ""), (space, "")])?;
        let mu = Morphism::new(product.signature(), space, mu, order)?;
        Ok(Action { name: name.into(), group: group.clone(), space: space.clone(), product, mu })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn group(&self) -> &LieSupergroup {
        &self.group
    }

    pub fn space(&self) -> &Arc<ChartSignature> {
        &self.space
    }

    pub fn product(&self) -> &ProductChart {
        &self.product
    }

    pub fn mu(&self) -> &Morphism {
        &self.mu
    }

    /// `μ(g, m)` for families on a common chart.
    pub fn act(
        &self,
        g: &[SuperPolynomial],
        m: &[SuperPolynomial],
        over: &Arc<ChartSignature>,
        assigned: Option<u32>,
    ) -> Result<(Vec<SuperPolynomial>, Option<u32>)> {
        let mut a = vec![SuperPolynomial::zero(over); self.product.signature().n_coords()];
        for (i, &t) in self.product.embedding(0).iter().enumerate() {
            a[t] = g[i].clone();
        }
        for (i, &t) in self.product.embedding(1).iter().enumerate() {
            a[t] = m[i].clone();
        }
        let mut order = assigned;
        let mut out = Vec::with_capacity(self.space.n_coords());
        for f in self.mu.pullbacks() {
            let (v, o) = f.substitute_tracked(self.mu.order(), &a, assigned, over)?;
            order = o;
            out.push(v);
        }
        Ok((out, order))
    }

    /// Reduced image `g·x`.
    pub fn reduced_act(&self, g: &[Scalar], x: &[Scalar]) -> Result<Vec<Scalar>> {
        self.check_point(x)?;
        let p: Vec<Scalar> = g.iter().chain(x).cloned().collect();
        if !self.mu.is_exact() && p != self.product.signature().center() {
            return Err(Error::PointNotInChart(format!("{p:?} away from the center of a jet action")));
        }
        self.mu.reduced_value(&p)
    }

    fn check_point(&self, x: &[Scalar]) -> Result<()> {
        if x.len() != self.space.n_even() {
            return Err(Error::PointNotInChart(format!("{} values for {:?}", x.len(), self.space)));
        }
        if !self.mu.is_exact() && x != self.space.center() {
            return Err(Error::PointNotInChart(format!("{x:?} is not the center of {:?}", self.space)));
        }
        Ok(())
    }
}

fn coords(over: &Arc<ChartSignature>) -> Vec<SuperPolynomial> {
    over.coords().map(|c| SuperPolynomial::coordinate_at(over, c)).collect()
}

fn labelled(chart: &ChartSignature, values: Vec<SuperPolynomial>) -> Result<Vec<(String, SuperPolynomial)>> {
    Ok(chart.coords().map(|c| chart.name_of(c).to_string()).zip(values).collect())
}

fn diff(a: &[SuperPolynomial], b: &[SuperPolynomial]) -> Result<Vec<SuperPolynomial>> {
    a.iter().zip(b).map(|(x, y)| x.try_sub(y)).collect()
}

fn min_order(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    }
}

/// Residuals of `μ∘(ν×id) = μ∘(id×μ)` and `μ∘(ε×id) = id` at order `d`.
pub fn verify_action_axioms(a: &Action, d: u32) -> Result<Report> {
    let g = a.group();
    let m = a.space();
    let triple = ProductChart::new(&[(g.chart(), "1"), (g.chart(), "2"), (m, "")])?;
    let ts = triple.signature();
    let (x1, x2, y) = (triple.factor_coordinates(0), triple.factor_coordinates(1), triple.factor_coordinates(2));
    let (x12, _) = g.product(&x1, &x2, ts, None)?;
    let (lhs, o1) = a.act(&x12, &y, ts, None)?;
    let (inner, o2) = a.act(&x2, &y, ts, None)?;
    let (rhs, o3) = a.act(&x1, &inner, ts, o2)?;
    let mut report = Report::default();
    report.push(Residual::new("compatibility", labelled(m, diff(&lhs, &rhs)?)?, min_order(o1, o3), d));
    let (ey, o) = a.act(&g.identity_values(m), &coords(m), m, None)?;
    report.push(Residual::new("identity", labelled(m, diff(&ey, &coords(m))?)?, o, d));
    Ok(report)
}

/// `μ_x: G → M`, `g ↦ g·x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitMorphism {
    pub base: Vec<Scalar>,
    pub morphism: Morphism,
}

pub fn orbit_map(a: &Action, x: &[Scalar]) -> Result<OrbitMorphism> {
    a.check_point(x)?;
    let gc = a.group().chart();
    let m = a.space();
    let (vals, _) = a.act(&coords(gc), &point_values(m, x, gc), gc, None)?;
    let image = a.reduced_act(a.group().identity(), x)?;
    let target = Arc::new(m.with_center(image)?);
    let morphism = Morphism::new(gc, &target, vals, a.mu().order())?;
    Ok(OrbitMorphism { base: x.to_vec(), morphism })
}

/// `l̄_g: M → M`, `m ↦ g·m`.
pub fn space_translation(a: &Action, g: &[Scalar]) -> Result<Morphism> {
    let m = a.space();
    let (vals, order) = a.act(&point_values(a.group().chart(), g, m), &coords(m), m, None)?;
    Morphism::new(m, m, vals, order)
}

/// `μ_x∘r_g - μ_{gx}` and `μ_x∘l_g - l̄_g∘μ_x`.
pub fn translation_identities(a: &Action, x: &[Scalar], g: &[Scalar], d: u32) -> Result<Report> {
    let mu_x = orbit_map(a, x)?.morphism;
    let gx = a.reduced_act(g, x)?;
    let mu_gx = orbit_map(a, &gx)?.morphism;
    let r = translation_morphism(a.group(), g, Side::Right)?;
    let l = translation_morphism(a.group(), g, Side::Left)?;
    let lbar = space_translation(a, g)?;
    let mut report = Report::default();
    report.push(Residual::between("right translation", &compose(&r, &mu_x)?, &mu_gx, d)?);
    report.push(Residual::between("left translation", &compose(&l, &mu_x)?, &compose(&mu_x, &lbar)?, d)?);
    Ok(report)
}

/// The vector field on `M` induced by one coordinate direction of `G` at `e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FundamentalField {
    pub generator: String,
    pub parity: Parity,
    pub base: Vec<Scalar>,
    /// Coefficient of `∂/∂z` for each space coordinate `z`, expanded at `base`.
    pub coefficients: Vec<(String, SuperPolynomial)>,
}

impl FundamentalField {
    /// The tangent vector at the base point: values of the coefficients of
    /// the coordinates with the field's parity.
    pub fn value(&self) -> Vec<Scalar> {
        self.coefficients
            .iter()
            .zip(self.parities())
            .filter(|(_, p)| *p == self.parity)
            .map(|((_, f), _)| f.constant_term())
            .collect()
    }

    fn parities(&self) -> Vec<Parity> {
        let n_even = self.base.len();
        (0..self.coefficients.len()).map(|k| if k < n_even { Parity::Even } else { Parity::Odd }).collect()
    }
}

/// `X ↦ (ε×id)∘(X⊕0)∘μ`: the left derivative of `μ` along the group
/// coordinate `generator` at `g = e`, as functions near `x`.
pub fn fundamental_field(a: &Action, generator: Coord, x: &[Scalar], d: u32) -> Result<FundamentalField> {
    a.check_point(x)?;
    let gc = a.group().chart();
    let m = a.space();
    let mx = Arc::new(m.with_center(x.to_vec())?);
    let pc = a.product();
    let along = pc.signature().coord_at(pc.embedding(0)[gc.flat_index(generator)]);
    let mut assignment = vec![SuperPolynomial::zero(&mx); pc.signature().n_coords()];
    for (v, &t) in point_values(gc, gc.center(), &mx).into_iter().zip(pc.embedding(0)) {
        assignment[t] = v;
    }
    for (c, &t) in mx.coords().zip(pc.embedding(1)) {
        assignment[t] = SuperPolynomial::coordinate_at(&mx, c);
    }
    let coefficients = m
        .coords()
        .zip(a.mu().pullbacks())
        .map(|(c, f)| {
            let (v, _) = f.derivative(along).substitute_tracked(a.mu().order(), &assignment, None, &mx)?;
            Ok((m.name_of(c).to_string(), v.truncated(d)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FundamentalField {
        generator: gc.name_of(generator).to_string(),
        parity: Parity::of(generator),
        base: x.to_vec(),
        coefficients,
    })
}

/// Both transitivity criteria at a point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transitivity {
    /// Rank data of `(dμ_x)_e`.
    pub profile: RankProfile,
    /// The values of the fundamental fields at `x` span `T_x M`.
    pub fields_span: bool,
    /// Every field value equals the matching column of `(dμ_x)_e`.
    pub fields_match_differential: bool,
}

impl Transitivity {
    pub fn is_transitive(&self) -> bool {
        self.profile.is_submersion && self.fields_span
    }

    pub fn criteria_agree(&self) -> bool {
        self.profile.is_submersion == self.fields_span
    }
}

pub fn is_transitive_at(a: &Action, x: &[Scalar]) -> Result<Transitivity> {
    let om = orbit_map(a, x)?;
    let gc = a.group().chart();
    let profile = rank_profile(&om.morphism, gc.center())?;
    let dmu = differential_at(&om.morphism, gc.center())?;
    let (n, m) = a.space().dim();
    let mut even = vec![vec![Scalar::zero(); gc.n_even()]; n];
    let mut odd = vec![vec![Scalar::zero(); gc.n_odd()]; m];
    for c in gc.coords() {
        let field = fundamental_field(a, c, x, 1)?;
        let value = field.value();
        match c {
            Coord::Even(j) => value.into_iter().enumerate().for_each(|(i, v)| even[i][j] = v),
            Coord::Odd(j) => value.into_iter().enumerate().for_each(|(i, v)| odd[i][j] = v),
        }
    }
    let ev = TangentMap { even, odd, source_dim: gc.dim(), target_dim: (n, m) };
    let fields_span = ev.even_rank() == n && ev.odd_rank() == m;
    Ok(Transitivity { profile, fields_span, fields_match_differential: ev == dmu })
}

/// The stationary subgroup of a point with its adapted chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilizer {
    pub subgroup: Subsupergroup,
    /// Coordinates on `G` in which `μ_x` is a coordinate projection.
    pub adapted: AdaptedChart,
}

pub fn stabilizer_subgroup(a: &Action, x: &[Scalar], d: u32) -> Result<Stabilizer> {
    let t = is_transitive_at(a, x)?;
    if !t.profile.is_submersion {
        return Err(Error::NotTransitive(format!(
            "ranks ({}|{}) at {}",
            t.profile.even_rank,
            t.profile.odd_rank,
            crate::coset::fmt_point(x)
        )));
    }
    let g = a.group();
    let gc = g.chart();
    let om = orbit_map(a, x)?;
    let target = om.morphism.target();
    let gens = target
        .coords()
        .map(|c| match c {
            Coord::Even(i) => {
                om.morphism.pullback_at(c).try_sub(&SuperPolynomial::constant(gc, target.center()[i].clone()))
            }
            Coord::Odd(_) => Ok(om.morphism.pullback_at(c).clone()),
        })
        .collect::<Result<Vec<_>>>()?;
    let adapted = adapted_coordinates(&om.morphism, gc.center(), d)?;
    let ideal = IdealPresentation::with_order(gc, gens.clone(), om.morphism.order())?;
    let mut subgroup = Subsupergroup::analyze(g, &ideal, d)?;

    let w = d + guard(gc);
    let iota = derive_inverse(g, w)?;
    let mut pulled = Vec::new();
    let mut order = om.morphism.order().map_or(w, |o| o.min(w));
    for f in &gens {
        let (v, o) = f.substitute_tracked(om.morphism.order(), iota.pullbacks(), iota.order(), gc)?;
        if let Some(o) = o {
            order = order.min(o);
        }
        pulled.push(v);
    }
    let image = IdealPresentation::with_order(gc, pulled, Some(order))?;
    let pf = image.pivot_form(d)?;
    let mut parts = Vec::new();
    let mut valid = order;
    for f in &gens {
        let (nf, v) = pf.reduce(f, om.morphism.order())?;
        valid = valid.min(v);
        parts.push((f.to_string(), nf));
    }
    subgroup.push_residual(Residual::new("iota-containment", parts, Some(valid), d));
    let twice = compose(&iota, &iota)?;
    subgroup.push_residual(Residual::between("involution", &twice, &Morphism::identity(gc), d)?);
    if let Some(r) = subgroup.report().failures().next() {
        let w = r.witness().map(|(n, f)| format!("{n}: {f}")).unwrap_or_else(|| "insufficient order".into());
        return Err(Error::NotInvariant(format!("{} residual {w}", r.label)));
    }
    Ok(Stabilizer { subgroup, adapted })
}

/// `β: G/H → M` chart by chart with its checks.
#[derive(Clone, Debug)]
pub struct EquivariantIso {
    /// `β_k = μ_x ∘ i_{g_k}` on the slice chart of atlas chart `k`.
    pub charts: Vec<Morphism>,
    pub report: Report,
}

/// `β = μ_x ∘ i_g` per chart; checks invertibility, `μ_x` constant along
/// `H` on the trivialization, `μ∘(id×β) = β∘α` at the samples, and
/// `β∘p = μ_x` per chart.
pub fn equivariant_iso(
    a: &Action,
    x: &[Scalar],
    atlas: &CosetAtlas,
    samples: &[(usize, Vec<Scalar>)],
    d: u32,
) -> Result<EquivariantIso> {
    if atlas.group() != a.group() {
        return Err(Error::SignatureMismatch("atlas belongs to another group".into()));
    }
    let om = orbit_map(a, x)?;
    let mut report = Report::default();
    let mut charts = Vec::new();
    for (k, chart) in atlas.charts().iter().enumerate() {
        let beta = chart_beta(&om, chart)?;
        if differential_at(&beta, chart.chart.center())?.inverse().is_none() {
            return Err(Error::SingularDifferential(format!("beta on chart {k}")));
        }
        let mu_here = om.morphism.recentered(&chart.representative)?;
        report.push(Residual::between(
            format!("beta after projection [{k}]"),
            &compose(&chart.projection, &beta)?,
            &mu_here,
            d,
        )?);
        charts.push(beta);
    }

    let t = atlas.trivialization();
    let pr_s = t.product().projection(0);
    let flat = compose(&compose(&pr_s, atlas.slice().embed())?, &om.morphism)?;
    report.push(Residual::between("orbit map on the trivialization", &compose(t.forward(), &om.morphism)?, &flat, d)?);

    let id_g = Morphism::identity(a.group().chart());
    for (k, s) in samples {
        let alpha = crate::coset::alpha_at(atlas, *k, s, d)?;
        let beta = charts.get(*k).ok_or_else(|| Error::DimensionMismatch(format!("no chart {k}")))?.recentered(s)?;
        let moved = alpha.product().product_map(a.product(), &[&id_g, &beta])?;
        let lhs = compose(&moved, a.mu())?;
        let rhs = compose(alpha.mu(), &beta)?;
        report.push(Residual::between(format!("equivariance [{k} at {}]", crate::coset::fmt_point(s)), &lhs, &rhs, d)?);
    }
    Ok(EquivariantIso { charts, report })
}

fn chart_beta(om: &OrbitMorphism, chart: &CosetChart) -> Result<Morphism> {
    compose(&chart.section, &om.morphism)
}
