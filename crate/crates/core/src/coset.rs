//! The coset supermanifold `G/H`: a slice transversal to `H`, the local
//! trivialization `S × H → G`, right-invariant functions, an atlas of
//! translated charts with transitions, and the induced action of `G`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::action::{verify_action_axioms, Action};
use crate::error::{Error, Result};
use crate::geometry::{compose, differential_at, guard, invert_local, Morphism, ProductChart, TangentMap};
use crate::group::{point_values, translation_morphism, LieSupergroup, Side, Subsupergroup};
use crate::reduced::solve_reduced;
use crate::residual::{Report, Residual};
use crate::scalar::Scalar;
use crate::superalg::{odd_merge_sign, ChartSignature, Coord, Monomial, SuperPolynomial};

/// A submanifold through `e` complementary to `H`, parametrized by the
/// pivot coordinates of `H`'s ideal (suffixed `_s`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slice {
    chart: Arc<ChartSignature>,
    embed: Morphism,
    witness: TangentMap,
}

impl Slice {
    pub fn chart(&self) -> &Arc<ChartSignature> {
        &self.chart
    }

    pub fn embed(&self) -> &Morphism {
        &self.embed
    }

    /// `[dS | dH]` at the identity; square and invertible.
    pub fn witness(&self) -> &TangentMap {
        &self.witness
    }

    pub fn dim(&self) -> (usize, usize) {
        self.chart.dim()
    }
}

pub fn transversal_slice(h: &Subsupergroup) -> Result<Slice> {
    let gc = h.parent().chart();
    let pe = &h.pivots().pivot_even;
    let po = &h.pivots().pivot_odd;
    let chart = Arc::new(ChartSignature::new(
        pe.iter().map(|&i| format!("{}_s", gc.even_names()[i])).collect(),
        po.iter().map(|&j| format!("{}_s", gc.odd_names()[j])).collect(),
        pe.iter().map(|&i| gc.center()[i].clone()).collect(),
    )?);
    let pulls = gc
        .coords()
        .map(|c| match c {
            Coord::Even(i) => match pe.iter().position(|&p| p == i) {
                Some(k) => SuperPolynomial::coordinate_at(&chart, Coord::Even(k)),
                None => SuperPolynomial::constant(&chart, gc.center()[i].clone()),
            },
            Coord::Odd(j) => match po.iter().position(|&p| p == j) {
                Some(k) => SuperPolynomial::coordinate_at(&chart, Coord::Odd(k)),
                None => SuperPolynomial::zero(&chart),
            },
        })
        .collect();
    let embed = Morphism::new(&chart, gc, pulls, None)?;
    let witness = differential_at(&embed, chart.center())?.hstack(&differential_at(h.embed(), h.chart().center())?);
    if witness.inverse().is_none() {
        return Err(Error::SingularDifferential("slice is not transversal to the subgroup".into()));
    }
    Ok(Slice { chart, embed, witness })
}

fn with_source(m: &Morphism, source: &Arc<ChartSignature>) -> Result<Morphism> {
    let ids: Vec<SuperPolynomial> = source.coords().map(|c| SuperPolynomial::coordinate_at(source, c)).collect();
    let pulls = m.pullbacks().iter().map(|f| f.substitute(&ids, source)).collect::<Result<Vec<_>>>()?;
    Morphism::new(source, m.target(), pulls, m.order())
}

/// Pullbacks of the coordinates of factor `k` of the target product.
fn project(m: &Morphism, pc: &ProductChart, k: usize) -> Result<Morphism> {
    let tgt = Arc::new(
        pc.factor(k).with_center(
            pc.embedding(k)
                .iter()
                .filter(|&&t| t < pc.signature().n_even())
                .map(|&t| m.target().center()[t].clone())
                .collect(),
        )?,
    );
    let pulls = pc.embedding(k).iter().map(|&t| m.pullbacks()[t].clone()).collect();
    Morphism::new(m.source(), &tgt, pulls, m.order())
}

/// `(s, h) ↦ rep · s · h` on `S × H`, with the target chart centered at `rep`.
fn translated_forward(
    g: &LieSupergroup,
    rep: &[Scalar],
    slice: &Slice,
    embed_h: &Morphism,
    pc: &ProductChart,
) -> Result<Morphism> {
    let ps = pc.signature();
    let sv: Vec<SuperPolynomial> = slice.embed.pullbacks().iter().map(|f| pc.lift(0, f)).collect::<Result<_>>()?;
    let hv: Vec<SuperPolynomial> = embed_h.pullbacks().iter().map(|f| pc.lift(1, f)).collect::<Result<_>>()?;
    let (gs, _) = g.product(&point_values(g.chart(), rep, ps), &sv, ps, None)?;
    let (vals, order) = g.product(&gs, &hv, ps, embed_h.order())?;
    let target = Arc::new(g.chart().with_center(rep.to_vec())?);
    Morphism::new(ps, &target, vals, order)
}

/// `S × H → G` near `(e, e)` and its local inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trivialization {
    product: ProductChart,
    embed_h: Morphism,
    forward: Morphism,
    inverse: Morphism,
}

impl Trivialization {
    /// `S × H` with the subgroup coordinates suffixed `_h`.
    pub fn product(&self) -> &ProductChart {
        &self.product
    }

    pub fn forward(&self) -> &Morphism {
        &self.forward
    }

    pub fn inverse(&self) -> &Morphism {
        &self.inverse
    }

    /// The embedding of `H`, written on its `_h` chart.
    pub fn subgroup_embed(&self) -> &Morphism {
        &self.embed_h
    }

    /// `pr_S ∘ inverse`, the projection `G → S` near `e`.
    pub fn projection(&self) -> Result<Morphism> {
        project(&self.inverse, &self.product, 0)
    }

    pub fn differential(&self) -> Result<TangentMap> {
        differential_at(&self.forward, self.product.signature().center())
    }

    /// Both composites against the identity at order `d`.
    pub fn round_trip(&self, d: u32) -> Result<Report> {
        let mut report = Report::default();
        let fi = compose(&self.inverse, &self.forward)?;
        report.push(Residual::between("forward after inverse", &fi, &Morphism::identity(self.inverse.source()), d)?);
        let inf = compose(&self.forward, &self.inverse)?;
        report.push(Residual::between("inverse after forward", &inf, &Morphism::identity(self.forward.source()), d)?);
        Ok(report)
    }
}

pub fn build_trivialization(h: &Subsupergroup, slice: &Slice, d: u32) -> Result<Trivialization> {
    let g = h.parent();
    let hc = Arc::new(h.chart().renamed("_h"));
    let embed_h = with_source(h.embed(), &hc)?;
    let product = ProductChart::new(&[(&slice.chart, ""), (&hc, "")])?;
    let forward = translated_forward(g, g.identity(), slice, &embed_h, &product)?;
    let inverse = invert_local(&forward, product.signature().center(), d + guard(g.pair().signature()))?;
    Ok(Trivialization { product, embed_h, forward, inverse })
}

/// Writes `f` on a two-factor product as `Σ h_j g_j` with `h_j` running
/// over the distinct monomials (in absolute coordinates) of factor `w` and
/// `g_j` functions on the other factor. Monomials come by total degree,
/// even before odd.
pub fn decompose_product_function(
    f: &SuperPolynomial,
    pc: &ProductChart,
    w: usize,
) -> Result<Vec<(SuperPolynomial, SuperPolynomial)>> {
    if pc.n_factors() != 2 || w > 1 {
        return Err(Error::DimensionMismatch("decomposition needs a two-factor product".into()));
    }
    if f.signature().as_ref() != pc.signature().as_ref() {
        return Err(Error::SignatureMismatch(format!("{:?} is not {:?}", f.signature(), pc.signature())));
    }
    let o = 1 - w;
    let sig = pc.signature();
    let n = sig.n_even();
    let zeroed = |k: usize| -> Result<Arc<ChartSignature>> {
        let fk = pc.factor(k);
        Ok(Arc::new(fk.with_center(vec![Scalar::zero(); fk.n_even()])?))
    };
    let (wz, oz) = (zeroed(w)?, zeroed(o)?);
    let mut groups: BTreeMap<Monomial, Vec<(Monomial, Scalar)>> = BTreeMap::new();
    for (m, c) in f.to_absolute().terms() {
        let mut even = [vec![0u16; pc.factor(0).n_even()], vec![0u16; pc.factor(1).n_even()]];
        for (i, &e) in m.even().iter().enumerate() {
            if e > 0 {
                let (k, idx) = pc.locate(i);
                even[k][idx] = e;
            }
        }
        let mut local = [0u16; 2];
        let mut global = [0u16; 2];
        for j in m.odd_indices() {
            let (k, idx) = pc.locate(n + j);
            local[k] |= 1 << (idx - pc.factor(k).n_even());
            global[k] |= 1 << j;
        }
        let coeff = if odd_merge_sign(global[w], global[o]) { -c.clone() } else { c.clone() };
        groups
            .entry(Monomial::from_parts(&even[w], local[w]))
            .or_default()
            .push((Monomial::from_parts(&even[o], local[o]), coeff));
    }
    let mut groups: Vec<_> = groups.into_iter().collect();
    groups.sort_by_key(|(m, _)| (m.even_degree() + m.odd_degree(), m.odd_degree()));
    groups
        .into_iter()
        .map(|(mw, terms)| {
            let h = SuperPolynomial::from_terms(&wz, [(mw, Scalar::one())]).recenter(pc.factor(w).center())?;
            let g = SuperPolynomial::from_terms(&oz, terms).recenter(pc.factor(o).center())?;
            Ok((h, g))
        })
        .collect()
}

/// `Σ h_j g_j` on the product.
pub fn reassemble(
    terms: &[(SuperPolynomial, SuperPolynomial)],
    pc: &ProductChart,
    w: usize,
) -> Result<SuperPolynomial> {
    let mut total = SuperPolynomial::zero(pc.signature());
    for (h, g) in terms {
        total = total.try_add(&pc.lift(w, h)?.mul(&pc.lift(1 - w, g)?)?)?;
    }
    Ok(total)
}

/// `f(g·h) - f(g)` reduced modulo the ideal of `H` in the second factor.
/// `f` lives on the group chart, possibly re-centered, and is known to
/// order `own`.
pub fn is_right_invariant(h: &Subsupergroup, f: &SuperPolynomial, own: Option<u32>, d: u32) -> Result<Residual> {
    let g = h.parent();
    let fc = f.signature();
    if !fc.same_coordinates(g.chart()) {
        return Err(Error::SignatureMismatch(format!("{:?} is not a chart of {}", fc, g.name())));
    }
    let pc = ProductChart::new(&[(fc, "1"), (g.chart(), "2")])?;
    let center: Vec<Scalar> = fc.center().iter().chain(g.identity()).cloned().collect();
    let nu = g.mul().recentered(&center)?;
    let ps = pc.signature();
    let (pulled, o) = f.substitute_tracked(own, nu.pullbacks(), None, ps)?;
    let delta = pulled.try_sub(&pc.lift(0, f)?)?;
    let pf = h.ideal().lift(&pc, 1)?.pivot_form(d)?;
    let valid = match (o, own) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    let (nf, v) = pf.reduce(&delta, valid)?;
    Ok(Residual::new("right invariance", vec![(f.to_string(), nf)], Some(v), d))
}

/// An invariant function recovered from its restriction to the slice.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    /// `f ∘ forward` split along the monomials of the subgroup factor.
    pub decomposition: Vec<(SuperPolynomial, SuperPolynomial)>,
    /// The coefficient of the constant monomial, a function on the slice.
    pub descended: SuperPolynomial,
    /// Higher coefficients and `descended ∘ p - f`.
    pub residual: Residual,
}

pub fn reconstruct_invariant(t: &Trivialization, f: &SuperPolynomial, d: u32) -> Result<Reconstruction> {
    let pc = &t.product;
    let ps = pc.signature();
    let (pulled, o) = f.substitute_tracked(None, t.forward.pullbacks(), t.forward.order(), ps)?;
    let pulled = pulled.truncated_opt(o);
    let decomposition = decompose_product_function(&pulled, pc, 1)?;
    let sc = pc.factor(0);
    let one = SuperPolynomial::one(pc.factor(1));
    let mut descended = SuperPolynomial::zero(sc);
    let mut comps = Vec::new();
    for (hj, gj) in &decomposition {
        if *hj == one {
            descended = gj.clone();
        } else {
            comps.push((format!("coefficient of {hj}"), gj.clone()));
        }
    }
    let p = t.projection()?;
    let (back, o2) = descended.substitute_tracked(o, p.pullbacks(), p.order(), p.source())?;
    comps.push(("descended after projection".into(), back.try_sub(f)?));
    let valid = match (o, o2) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    Ok(Reconstruction { decomposition, descended, residual: Residual::new("reconstruction", comps, valid, d) })
}

/// The chart of `G/H` around `rep · H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetChart {
    pub representative: Vec<Scalar>,
    /// Slice coordinates.
    pub chart: Arc<ChartSignature>,
    /// `i_g: s ↦ rep · s`, into the group chart centered at `rep`.
    pub section: Morphism,
    /// `p_g`: group chart at `rep` to slice coordinates.
    pub projection: Morphism,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Overlap {
    pub from: usize,
    pub to: usize,
    pub sample: Vec<Scalar>,
    pub transition: Morphism,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetAtlas {
    subgroup: Subsupergroup,
    slice: Slice,
    trivialization: Trivialization,
    charts: Vec<CosetChart>,
    overlaps: Vec<Overlap>,
    order: u32,
    report: Report,
}

impl CosetAtlas {
    pub fn group(&self) -> &LieSupergroup {
        self.subgroup.parent()
    }

    pub fn subgroup(&self) -> &Subsupergroup {
        &self.subgroup
    }

    pub fn slice(&self) -> &Slice {
        &self.slice
    }

    pub fn trivialization(&self) -> &Trivialization {
        &self.trivialization
    }

    pub fn charts(&self) -> &[CosetChart] {
        &self.charts
    }

    pub fn overlaps(&self) -> &[Overlap] {
        &self.overlaps
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `p∘i_g = id` and right invariance of every projection.
    pub fn report(&self) -> &Report {
        &self.report
    }

    fn chart(&self, k: usize) -> Result<&CosetChart> {
        self.charts.get(k).ok_or_else(|| Error::DimensionMismatch(format!("no chart {k}")))
    }

    fn forward(&self, k: usize) -> Result<Morphism> {
        let c = self.chart(k)?;
        translated_forward(
            self.group(),
            &c.representative,
            &self.slice,
            &self.trivialization.embed_h,
            &self.trivialization.product,
        )
    }

    /// The point `(s, h)` of `S × H` with `rep_k · s · h = point`.
    pub fn locate(&self, k: usize, point: &[Scalar]) -> Result<Vec<Scalar>> {
        let fwd = self.forward(k)?;
        let ps = fwd.source().clone();
        if !fwd.is_exact() {
            return if fwd.reduced_image() == point {
                Ok(ps.center().to_vec())
            } else {
                Err(Error::PointNotInChart(format!("{point:?} away from chart {k} of a jet subgroup")))
            };
        }
        let system: Vec<SuperPolynomial> = (0..self.group().chart().n_even())
            .map(|i| fwd.pullbacks()[i].try_sub(&SuperPolynomial::constant(&ps, point[i].clone())))
            .collect::<Result<_>>()?;
        if system.is_empty() {
            return Ok(Vec::new());
        }
        solve_reduced(&system, ps.center())
            .ok_or_else(|| Error::PointNotInChart(format!("{point:?} not reached from chart {k}")))
    }

    /// Slice coordinates in chart `k` of a group point, with the projection
    /// expanded there to order `w`.
    pub fn projection_at(&self, k: usize, point: &[Scalar], w: u32) -> Result<Morphism> {
        let q = self.locate(k, point)?;
        let inv = invert_local(&self.forward(k)?, &q, w)?;
        project(&inv, &self.trivialization.product, 0)
    }

    /// `Ψ = p_j ∘ i_i` expanded at the slice point `sample` of chart `i`,
    /// valid to order `d`.
    pub fn transition(&self, i: usize, j: usize, sample: &[Scalar], d: u32) -> Result<Morphism> {
        let from = self.chart(i)?;
        self.chart(j)?;
        let section = from.section.recentered(sample)?;
        let gamma = section.reduced_image();
        let p = self.projection_at(j, &gamma, d + guard(&self.slice.chart)).map_err(|e| match e {
            Error::PointNotInChart(_) => Error::MissingTransition(i, j),
            other => other,
        })?;
        let psi = compose(&section, &p)?;
        if differential_at(&psi, sample)?.inverse().is_none() {
            return Err(Error::SingularDifferential(format!("transition {i} -> {j} at {sample:?}")));
        }
        Ok(psi)
    }
}

/// Charts at the given representatives and transitions at the given
/// `(from, to, slice point of from)` samples.
pub fn coset_atlas(
    h: &Subsupergroup,
    representatives: &[Vec<Scalar>],
    samples: &[(usize, usize, Vec<Scalar>)],
    d: u32,
) -> Result<CosetAtlas> {
    let g = h.parent();
    let slice = transversal_slice(h)?;
    let trivialization = build_trivialization(h, &slice, d)?;
    let w = d + guard(g.pair().signature()) + guard(&slice.chart);
    let sc = slice.chart.clone();
    let mut atlas = CosetAtlas {
        subgroup: h.clone(),
        slice,
        trivialization,
        charts: Vec::new(),
        overlaps: Vec::new(),
        order: d,
        report: Report::default(),
    };
    for (k, rep) in representatives.iter().enumerate() {
        translation_morphism(g, rep, Side::Left)?;
        let fwd =
            translated_forward(g, rep, &atlas.slice, &atlas.trivialization.embed_h, &atlas.trivialization.product)?;
        let inv = invert_local(&fwd, atlas.trivialization.product.signature().center(), w)?;
        let projection = project(&inv, &atlas.trivialization.product, 0)?;
        let (vals, _) = g.product(&point_values(g.chart(), rep, &sc), atlas.slice.embed.pullbacks(), &sc, None)?;
        let section = Morphism::new(&sc, fwd.target(), vals, None)?;
        let pi = compose(&section, &projection)?;
        atlas.report.push(Residual::between(
            format!("section then projection [{k}]"),
            &pi,
            &Morphism::identity(&sc),
            d,
        )?);
        let parts = projection
            .pullbacks()
            .iter()
            .map(|f| is_right_invariant(h, f, projection.order(), d))
            .collect::<Result<Vec<_>>>()?;
        let named: Vec<Residual> = parts
            .into_iter()
            .zip(sc.coords())
            .map(|(mut r, c)| {
                r.label = sc.name_of(c).to_string();
                r.components = r.components.into_iter().map(|(_, f)| ("p".to_string(), f)).collect();
                r
            })
            .collect();
        atlas.report.push(Residual::merged(format!("right invariance [{k}]"), named, d));
        atlas.charts.push(CosetChart { representative: rep.clone(), chart: sc.clone(), section, projection });
    }
    for (i, j, s) in samples {
        let transition = atlas.transition(*i, *j, s, d + guard(&sc))?;
        atlas.overlaps.push(Overlap { from: *i, to: *j, sample: s.clone(), transition });
    }
    Ok(atlas)
}

/// `Ψ_ik - Ψ_jk ∘ Ψ_ij` for each `(i, j, k, slice point of i)`.
pub fn verify_cocycle(atlas: &CosetAtlas, triples: &[(usize, usize, usize, Vec<Scalar>)], d: u32) -> Result<Report> {
    let w = d + guard(&atlas.slice.chart);
    let mut report = Report::default();
    for (i, j, k, s) in triples {
        let ij = atlas.transition(*i, *j, s, w)?;
        let jk = atlas.transition(*j, *k, &ij.reduced_image(), w)?;
        let ik = atlas.transition(*i, *k, s, w)?;
        report.push(Residual::between(format!("cocycle ({i}, {j}, {k})"), &compose(&ij, &jk)?, &ik, d)?);
    }
    Ok(report)
}

/// The action of `G` on `G/H` expanded at sampled chart points.
#[derive(Clone, Debug)]
pub struct CosetAction {
    /// `(chart, slice point, α there)`.
    pub samples: Vec<(usize, Vec<Scalar>, Action)>,
    /// Action axioms per sample and agreement across overlaps.
    pub report: Report,
}

/// `α = p ∘ ν ∘ (id × i_g)` on `G × S` around `(e, s)` in chart `k`.
pub fn alpha_at(atlas: &CosetAtlas, k: usize, s: &[Scalar], d: u32) -> Result<Action> {
    let g = atlas.group();
    let chart = atlas.chart(k)?;
    let ss = Arc::new(atlas.slice.chart.with_center(s.to_vec())?);
    let pc = ProductChart::new(&[(g.chart(), ""), (&ss, "")])?;
    let ps = pc.signature();
    let section = chart.section.recentered(s)?;
    let gamma = section.reduced_image();
    let sv: Vec<SuperPolynomial> = section.pullbacks().iter().map(|f| pc.lift(1, f)).collect::<Result<_>>()?;
    let (vals, _) = g.product(&pc.factor_coordinates(0), &sv, ps, None)?;
    let target = Arc::new(g.chart().with_center(gamma.clone())?);
    let phi = Morphism::new(ps, &target, vals, None)?;
    let triple = ChartSignature::product(&[(g.chart(), "1"), (g.chart(), "2"), (&ss, "")])?;
    let w = d + guard(&triple);
    let p = atlas.projection_at(k, &gamma, w + guard(ps))?;
    let alpha = compose(&phi, &p)?;
    let order = alpha.order();
    Action::new(format!("alpha[{k}]"), g, &ss, alpha.pullbacks().to_vec(), order)
}

/// `α` at each `(chart, slice point)` sample with its axioms, and agreement
/// with every recorded overlap whose source sample is among them.
pub fn coset_action_alpha(atlas: &CosetAtlas, samples: &[(usize, Vec<Scalar>)], d: u32) -> Result<CosetAction> {
    let mut report = Report::default();
    let mut out = Vec::new();
    for (k, s) in samples {
        let a = alpha_at(atlas, *k, s, d)?;
        for mut r in verify_action_axioms(&a, d)?.residuals {
            r.label = format!("{} [{k} at {}]", r.label, fmt_point(s));
            report.push(r);
        }
        out.push((*k, s.clone(), a));
    }
    let g = atlas.group();
    for ov in &atlas.overlaps {
        let Some((_, _, ai)) = out.iter().find(|(k, s, _)| *k == ov.from && *s == ov.sample) else { continue };
        let pci = ai.product().clone();
        let psi = atlas.transition(ov.from, ov.to, &ov.sample, d + guard(pci.signature()))?;
        let sj = psi.reduced_image();
        let aj = alpha_at(atlas, ov.to, &sj, d)?;
        let lhs = compose(ai.mu(), &psi)?;
        let id_g = Morphism::identity(g.chart());
        let moved = pci.product_map(aj.product(), &[&id_g, &psi])?;
        let rhs = compose(&moved, aj.mu())?;
        report.push(Residual::between(format!("alpha agreement {} -> {}", ov.from, ov.to), &lhs, &rhs, d)?);
    }
    Ok(CosetAction { samples: out, report })
}

pub(crate) fn fmt_point(p: &[Scalar]) -> String {
    let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

#[derive(Serialize, Deserialize)]
struct ChartRepr {
    representative: Vec<Scalar>,
    section: Morphism,
    projection: Morphism,
}

#[derive(Serialize, Deserialize)]
struct OverlapRepr {
    from: usize,
    to: usize,
    sample: Vec<Scalar>,
    transition: Morphism,
}

#[derive(Serialize, Deserialize)]
struct AtlasRepr {
    subgroup: Subsupergroup,
    order: u32,
    charts: Vec<ChartRepr>,
    overlaps: Vec<OverlapRepr>,
}

impl Serialize for CosetAtlas {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AtlasRepr {
            subgroup: self.subgroup.clone(),
            order: self.order,
            charts: self
                .charts
                .iter()
                .map(|c| ChartRepr {
                    representative: c.representative.clone(),
                    section: c.section.clone(),
                    projection: c.projection.clone(),
                })
                .collect(),
            overlaps: self
                .overlaps
                .iter()
                .map(|o| OverlapRepr {
                    from: o.from,
                    to: o.to,
                    sample: o.sample.clone(),
                    transition: o.transition.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CosetAtlas {
    /// Rebuilds the derived data and checks the stored charts against it.
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = AtlasRepr::deserialize(d)?;
        let reps: Vec<Vec<Scalar>> = r.charts.iter().map(|c| c.representative.clone()).collect();
        let samples: Vec<(usize, usize, Vec<Scalar>)> =
            r.overlaps.iter().map(|o| (o.from, o.to, o.sample.clone())).collect();
        let atlas = coset_atlas(&r.subgroup, &reps, &samples, r.order).map_err(D::Error::custom)?;
        let same_charts =
            atlas.charts.iter().zip(&r.charts).all(|(a, b)| a.section == b.section && a.projection == b.projection);
        let same_overlaps = atlas.overlaps.iter().zip(&r.overlaps).all(|(a, b)| a.transition == b.transition);
        if !same_charts || !same_overlaps {
            return Err(D::Error::custom("stored charts disagree with the subgroup they claim to come from"));
        }
        Ok(atlas)
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::fixtures::{self, scalars};
    use crate::group::check_subsupergroup;
    use crate::ideal::IdealPresentation;

    fn upper() -> Subsupergroup {
        let g = fixtures::gl11();
        check_subsupergroup(&g, &fixtures::gl11_upper(&g), 4).unwrap()
    }

    fn var(sig: &Arc<ChartSignature>, name: &str) -> SuperPolynomial {
        SuperPolynomial::coordinate(sig, name).unwrap()
    }

    /// `1/x` around `x = 1` as `Σ (1 - x)^k`, `k ≤ d`.
    fn reciprocal(x: &SuperPolynomial, d: u32) -> SuperPolynomial {
        let one = SuperPolynomial::one(x.signature());
        let step = &one - x;
        let mut term = one.clone();
        let mut sum = one;
        for _ in 0..d {
            term = &term * &step;
            sum = &sum + &term;
        }
        sum
    }

    #[test]
    fn slices_are_complements() {
        let s = transversal_slice(&upper()).unwrap();
        assert_eq!(s.chart().even_names(), ["a_s"]);
        assert_eq!(s.chart().odd_names(), ["beta_s"]);
        let g = fixtures::gl11();
        let everything: Vec<SuperPolynomial> = vec![
            &var(g.chart(), "a") - &SuperPolynomial::one(g.chart()),
            &var(g.chart(), "b") - &SuperPolynomial::one(g.chart()),
            var(g.chart(), "alpha"),
            var(g.chart(), "beta"),
        ];
        let e = check_subsupergroup(&g, &IdealPresentation::new(g.chart(), everything).unwrap(), 4).unwrap();
        assert_eq!(transversal_slice(&e).unwrap().dim(), g.dim());
        let whole = check_subsupergroup(&g, &IdealPresentation::new(g.chart(), vec![]).unwrap(), 4).unwrap();
        assert_eq!(transversal_slice(&whole).unwrap().dim(), (0, 0));
    }

    #[test]
    fn trivialization_of_gl11() {
        let h = upper();
        let s = transversal_slice(&h).unwrap();
        let t = build_trivialization(&h, &s, 4).unwrap();
        let ps = t.product().signature().clone();
        let v = |n: &str| var(&ps, n);
        let fwd = t.forward();
        assert_eq!(fwd.pullback("a").unwrap(), &v("a_s"));
        assert_eq!(fwd.pullback("alpha").unwrap(), &(&v("a_s") * &v("alpha_h")));
        assert_eq!(fwd.pullback("beta").unwrap(), &v("beta_s"));
        assert_eq!(fwd.pullback("b").unwrap(), &(&(&v("beta_s") * &v("alpha_h")) + &v("b_h")));
        assert_eq!(t.differential().unwrap(), *s.witness());
        assert!(t.round_trip(4).unwrap().passed());

        let gc = h.parent().chart().clone();
        let w = |n: &str| var(&gc, n);
        let inv_a = reciprocal(&w("a"), 4);
        let expect = [
            ("a_s", w("a")),
            ("b_h", &w("b") - &(&(&w("beta") * &w("alpha")) * &inv_a)),
            ("beta_s", w("beta")),
            ("alpha_h", &w("alpha") * &inv_a),
        ];
        let inv = t.inverse();
        for (name, f) in expect {
            let got = inv.pullback(name).unwrap().truncated(4);
            assert_eq!(got, f.truncated(4), "{name}");
        }
    }

    #[test]
    fn trivial_subgroup_trivializes_by_identity() {
        let g = fixtures::gl11();
        let one = SuperPolynomial::one(g.chart());
        let all = vec![
            &var(g.chart(), "a") - &one,
            &var(g.chart(), "b") - &one,
            var(g.chart(), "alpha"),
            var(g.chart(), "beta"),
        ];
        let e = check_subsupergroup(&g, &IdealPresentation::new(g.chart(), all).unwrap(), 4).unwrap();
        let s = transversal_slice(&e).unwrap();
        let t = build_trivialization(&e, &s, 4).unwrap();
        for (k, c) in g.chart().coords().enumerate() {
            let name = format!("{}_s", g.chart().name_of(c));
            assert_eq!(t.forward().pullbacks()[k], var(t.product().signature(), &name));
            assert_eq!(t.inverse().pullback(&name).unwrap(), &var(g.chart(), g.chart().name_of(c)));
        }
    }

    #[test]
    fn decomposition_examples() {
        let h = upper();
        let s = transversal_slice(&h).unwrap();
        let t = build_trivialization(&h, &s, 4).unwrap();
        let pc = t.product();
        let ps = pc.signature();
        let f = &(&var(ps, "a_s") * &var(ps, "b_h")) + &(&var(ps, "beta_s") * &var(ps, "alpha_h"));
        let terms = decompose_product_function(&f, pc, 0).unwrap();
        let sc = pc.factor(0);
        let hc = pc.factor(1);
        assert_eq!(terms, vec![(var(sc, "a_s"), var(hc, "b_h")), (var(sc, "beta_s"), var(hc, "alpha_h"))]);
        let only_h = pc.lift(1, &var(hc, "b_h")).unwrap();
        assert_eq!(
            decompose_product_function(&only_h, pc, 0).unwrap(),
            vec![(SuperPolynomial::one(sc), var(hc, "b_h"))]
        );
        // odd factors on the right pick up the reordering sign
        let swapped = decompose_product_function(&f, pc, 1).unwrap();
        assert!(swapped.contains(&(var(hc, "alpha_h"), -var(sc, "beta_s"))));
        assert_eq!(reassemble(&swapped, pc, 1).unwrap(), f);
    }

    fn random_product_function() -> impl Strategy<Value = Vec<(Vec<u16>, u16, i64)>> {
        prop::collection::vec((prop::collection::vec(0u16..3, 2), 0u16..4, -5i64..=5), 0..8)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn decompose_then_reassemble(raw in random_product_function(), w in 0usize..2) {
            let h = upper();
            let s = transversal_slice(&h).unwrap();
            let t = build_trivialization(&h, &s, 4).unwrap();
            let pc = t.product();
            let ps = pc.signature();
            let mut f = SuperPolynomial::zero(ps);
            for (even, odd, c) in raw {
                f = &f + &SuperPolynomial::from_terms(ps, [(Monomial::from_parts(&even, odd), Scalar::from_int(c))]);
            }
            let f = f.truncated(4);
            let terms = decompose_product_function(&f, pc, w).unwrap();
            prop_assert_eq!(reassemble(&terms, pc, w).unwrap().truncated(4), f);
        }
    }

    #[test]
    fn right_invariant_coordinates() {
        let h = upper();
        let gc = h.parent().chart().clone();
        let check = |f: SuperPolynomial| is_right_invariant(&h, &f, None, 4).unwrap().passed();
        assert!(check(var(&gc, "a")));
        assert!(check(var(&gc, "beta")));
        assert!(!check(var(&gc, "alpha")));
        assert!(!check(var(&gc, "b")));
        assert!(check(SuperPolynomial::constant(&gc, Scalar::from_int(7))));
    }

    #[test]
    fn projections_descend_and_invariants_are_reconstructed() {
        let h = upper();
        let s = transversal_slice(&h).unwrap();
        let t = build_trivialization(&h, &s, 4).unwrap();
        let p = t.projection().unwrap();
        for f in p.pullbacks() {
            assert!(is_right_invariant(&h, f, p.order(), 4).unwrap().passed());
        }
        let gc = h.parent().chart().clone();
        let (a, beta) = (var(&gc, "a"), var(&gc, "beta"));
        for f in [a.clone(), beta.clone(), &(&a * &a) + &(&a * &beta), SuperPolynomial::one(&gc)] {
            assert!(is_right_invariant(&h, &f, None, 4).unwrap().passed());
            let r = reconstruct_invariant(&t, &f, 4).unwrap();
            assert!(r.residual.passed(), "{f}: {:?}", r.residual.witness());
        }
        let r = reconstruct_invariant(&t, &var(&gc, "b"), 4).unwrap();
        assert!(!r.residual.passed());
    }

    #[test]
    fn only_constants_are_invariant_on_the_subgroup_itself() {
        let hg = upper().as_group("Upper").unwrap();
        let whole = Subsupergroup::analyze(&hg, &IdealPresentation::new(hg.chart(), vec![]).unwrap(), 4).unwrap();
        for c in hg.chart().coords() {
            let f = SuperPolynomial::coordinate_at(hg.chart(), c);
            assert!(!is_right_invariant(&whole, &f, None, 4).unwrap().passed());
        }
        let one = SuperPolynomial::one(hg.chart());
        assert!(is_right_invariant(&whole, &one, None, 4).unwrap().passed());
    }

    fn gl11_atlas() -> CosetAtlas {
        coset_atlas(&upper(), &[scalars(&[1, 1]), scalars(&[2, 1])], &[(0, 1, scalars(&[2]))], 4).unwrap()
    }

    #[test]
    fn two_chart_transition() {
        let atlas = gl11_atlas();
        assert!(atlas.report().passed());
        let psi = &atlas.overlaps()[0].transition;
        let sc = psi.source();
        assert_eq!(psi.pullback("a_s").unwrap(), &var(sc, "a_s").scale(&Scalar::from_ratio(1, 2)));
        assert_eq!(psi.pullback("beta_s").unwrap(), &var(sc, "beta_s"));
        assert_eq!(psi.reduced_image(), scalars(&[1]));
        let report = verify_cocycle(&atlas, &[(0, 1, 0, scalars(&[2])), (0, 0, 1, scalars(&[3]))], 4).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn single_chart_atlas() {
        let atlas = coset_atlas(&upper(), &[scalars(&[1, 1])], &[], 4).unwrap();
        assert!(atlas.overlaps().is_empty());
        assert!(atlas.report().passed());
        let same = atlas.transition(0, 0, &scalars(&[3]), 4).unwrap();
        assert!(same.agrees_with(&Morphism::identity(same.source())).unwrap());
    }

    #[test]
    fn points_outside_a_chart_are_reported() {
        let g = fixtures::gl2();
        let h = check_subsupergroup(&g, &fixtures::gl2_borel(&g), 4).unwrap();
        let atlas = coset_atlas(&h, &[scalars(&[1, 0, 0, 1]), scalars(&[0, 1, 1, 0])], &[], 4).unwrap();
        // c = 0 is the point at infinity of the second chart
        assert!(matches!(atlas.transition(0, 1, &scalars(&[0]), 4), Err(Error::MissingTransition(0, 1))));
    }

    #[test]
    fn projective_line() {
        let g = fixtures::gl2();
        let h = check_subsupergroup(&g, &fixtures::gl2_borel(&g), 4).unwrap();
        let reps = [scalars(&[1, 0, 0, 1]), scalars(&[0, 1, 1, 0]), scalars(&[2, 0, 0, 1])];
        let atlas = coset_atlas(&h, &reps, &[(0, 1, scalars(&[1])), (0, 2, scalars(&[1]))], 4).unwrap();
        assert!(atlas.report().passed());
        let flip = &atlas.overlaps()[0].transition;
        let y = var(flip.source(), "c_s");
        assert_eq!(flip.pullbacks()[0].truncated(4), reciprocal(&y, 4).truncated(4));
        let scale = &atlas.overlaps()[1].transition;
        assert_eq!(scale.pullbacks()[0], y.scale(&Scalar::from_int(2)));
        let triples =
            [(0, 1, 2, scalars(&[1])), (1, 2, 0, scalars(&[1])), (2, 0, 1, scalars(&[2])), (0, 2, 1, scalars(&[3]))];
        let report = verify_cocycle(&atlas, &triples, 4).unwrap();
        for r in &report.residuals {
            assert!(r.passed(), "{}: {:?}", r.label, r.witness());
        }
    }

    #[test]
    fn induced_action_in_the_identity_chart() {
        let atlas = gl11_atlas();
        let samples = [(0, scalars(&[1])), (0, scalars(&[2])), (1, scalars(&[1]))];
        let ca = coset_action_alpha(&atlas, &samples, 4).unwrap();
        for r in &ca.report.residuals {
            assert!(r.passed(), "{}: {:?}", r.label, r.witness());
        }
        assert!(ca.report.residuals.iter().any(|r| r.label.starts_with("alpha agreement")));
        // g · [[a_s, 0], [beta_s, 1]] · H has slice coordinates (a a_s + alpha beta_s | beta a_s + b beta_s)
        let (_, _, alpha) = &ca.samples[0];
        let ps = alpha.product().signature();
        let v = |n: &str| var(ps, n);
        let a_new = &(&v("a") * &v("a_s")) + &(&v("alpha") * &v("beta_s"));
        let b_new = &(&v("beta") * &v("a_s")) + &(&v("b") * &v("beta_s"));
        assert_eq!(alpha.mu().pullback("a_s").unwrap().truncated(4), a_new.truncated(4));
        assert_eq!(alpha.mu().pullback("beta_s").unwrap().truncated(4), b_new.truncated(4));
        let space = alpha.space();
        let ids: Vec<SuperPolynomial> = space.coords().map(|c| SuperPolynomial::coordinate_at(space, c)).collect();
        let (at_e, _) = alpha.act(&alpha.group().identity_values(space), &ids, space, None).unwrap();
        assert_eq!(at_e.iter().map(|f| f.truncated(4)).collect::<Vec<_>>(), ids);
    }

    #[test]
    fn atlas_json_round_trip() {
        let atlas = gl11_atlas();
        let json = serde_json::to_string(&atlas).unwrap();
        let back: CosetAtlas = serde_json::from_str(&json).unwrap();
        assert_eq!(back, atlas);
        let mut value: serde_json::Value = serde_json::from_str(&json).unwrap();
        value["order"] = serde_json::json!(3);
        assert!(serde_json::from_value::<CosetAtlas>(value).is_err());
    }
}
