//! Name resolution: turns a [`ModelFile`] into groups, ideals, actions and
//! points of the core engine.

use std::collections::HashSet;
use std::sync::Arc;

use num_traits::Zero;
use supercoset_core::action::Action;
use supercoset_core::ideal::IdealPresentation;
use supercoset_core::{ChartSignature, Coord, LieSupergroup, Parity, ProductChart, Scalar, SuperPolynomial};

use crate::syntax::{
    self, print_expr, Assignment, AtlasDecl, DeclKind, Diagnostic, Expr, Ident, ModelFile, Span, SpannedExpr,
};

/// Parses and resolves a model document.
pub fn parse_model(text: &str) -> Result<Model, Diagnostic> {
    Model::build(syntax::parse(text)?)
}

#[derive(Clone, Debug)]
pub struct SubgroupEntry {
    pub group: String,
    pub ideal: IdealPresentation,
}

#[derive(Clone, Debug)]
pub struct PointEntry {
    pub action: String,
    pub point: Vec<Scalar>,
}

#[derive(Clone, Debug)]
pub struct AtlasEntry {
    pub target: String,
    pub reps: Vec<Vec<Scalar>>,
    pub decl: AtlasDecl,
}

#[derive(Clone, Debug)]
pub enum Entity {
    Group(LieSupergroup),
    Subgroup(SubgroupEntry),
    Action(Action),
    Point(PointEntry),
    Atlas(AtlasEntry),
}

impl Entity {
    pub fn kind(&self) -> &'static str {
        match self {
            Entity::Group(_) => "supergroup",
            Entity::Subgroup(_) => "subgroup",
            Entity::Action(_) => "action",
            Entity::Point(_) => "point",
            Entity::Atlas(_) => "atlas",
        }
    }
}

/// A resolved model; entities keep declaration order.
#[derive(Clone, Debug)]
pub struct Model {
    pub file: ModelFile,
    entities: Vec<(String, Entity)>,
}

impl Model {
    pub fn build(file: ModelFile) -> Result<Model, Diagnostic> {
        let mut m = Model { file: ModelFile::default(), entities: Vec::new() };
        for d in &file.decls {
            let name = d.name();
            if m.get(&name.name).is_some() {
                return Err(Diagnostic::new(name.span, format!("duplicate declaration `{}`", name.name)));
            }
            let e = match &d.kind {
                DeclKind::Group(g) => Entity::Group(build_group(g)?),
                DeclKind::Subgroup(s) => {
                    let g = m.group_ref(&s.group)?;
                    let gens = s.ideal.iter().map(|e| eval(e, g.chart())).collect::<Result<Vec<_>, _>>()?;
                    let ideal = IdealPresentation::new(g.chart(), gens).map_err(|e| engine(s.name.span, e))?;
                    Entity::Subgroup(SubgroupEntry { group: s.group.name.clone(), ideal })
                }
                DeclKind::Action(a) => Entity::Action(build_action(a, m.group_ref(&a.group)?)?),
                DeclKind::Point(p) => {
                    let a = match m.get(&p.action.name) {
                        Some(Entity::Action(a)) => a,
                        other => return Err(wrong_kind(&p.action, "action", other)),
                    };
                    let point = reduced_point(a.space(), Some(a.space().center()), &p.values, &p.name)?;
                    Entity::Point(PointEntry { action: p.action.name.clone(), point })
                }
                DeclKind::Atlas(a) => Entity::Atlas(m.build_atlas(a)?),
            };
            m.entities.push((name.name.clone(), e));
        }
        m.file = file;
        Ok(m)
    }

    pub fn get(&self, name: &str) -> Option<&Entity> {
        self.entities.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }

    pub fn entities(&self) -> impl Iterator<Item = (&str, &Entity)> {
        self.entities.iter().map(|(n, e)| (n.as_str(), e))
    }

    pub fn group(&self, name: &str) -> Option<&LieSupergroup> {
        match self.get(name)? {
            Entity::Group(g) => Some(g),
            _ => None,
        }
    }

    pub fn action(&self, name: &str) -> Option<&Action> {
        match self.get(name)? {
            Entity::Action(a) => Some(a),
            _ => None,
        }
    }

    fn group_ref(&self, id: &Ident) -> Result<&LieSupergroup, Diagnostic> {
        match self.get(&id.name) {
            Some(Entity::Group(g)) => Ok(g),
            other => Err(wrong_kind(id, "supergroup", other)),
        }
    }

    /// The group a subgroup, point or atlas target lives in.
    pub fn parent_group(&self, name: &str) -> Option<&LieSupergroup> {
        match self.get(name)? {
            Entity::Group(g) => Some(g),
            Entity::Subgroup(s) => self.group(&s.group),
            Entity::Action(a) => Some(a.group()),
            Entity::Point(p) => self.action(&p.action).map(Action::group),
            Entity::Atlas(a) => self.parent_group(&a.target),
        }
    }

    fn build_atlas(&self, a: &AtlasDecl) -> Result<AtlasEntry, Diagnostic> {
        let g = match self.get(&a.target.name) {
            Some(Entity::Subgroup(s)) => self.group(&s.group).expect("resolved"),
            Some(Entity::Point(p)) => self.action(&p.action).expect("resolved").group(),
            other => return Err(wrong_kind(&a.target, "subgroup or point", other)),
        };
        let reps = if a.reps.is_empty() {
            vec![g.identity().to_vec()]
        } else {
            a.reps
                .iter()
                .map(|(span, r)| {
                    let at = Ident { name: "representative".into(), span: *span };
                    reduced_point(g.chart(), Some(g.identity()), r, &at)
                })
                .collect::<Result<_, _>>()?
        };
        let n = reps.len();
        let check = |i: &syntax::Index| {
            if i.value < n {
                Ok(())
            } else {
                Err(Diagnostic::new(i.span, format!("chart index {} out of range; the atlas has {n} charts", i.value)))
            }
        };
        for o in &a.overlaps {
            check(&o.from)?;
            check(&o.to)?;
        }
        for c in &a.cocycles {
            c.charts.iter().try_for_each(check)?;
        }
        for s in &a.samples {
            check(&s.chart)?;
        }
        Ok(AtlasEntry { target: a.target.name.clone(), reps, decl: a.clone() })
    }
}

fn wrong_kind(id: &Ident, wanted: &str, found: Option<&Entity>) -> Diagnostic {
    match found {
        None => Diagnostic::new(id.span, format!("unknown {wanted} `{}`", id.name)),
        Some(e) => Diagnostic::new(
            id.span,
            format!("`{}` is {} {}, expected {} {wanted}", id.name, article(e.kind()), e.kind(), article(wanted)),
        ),
    }
}

fn article(word: &str) -> &'static str {
    if word.starts_with(['a', 'e', 'i', 'o', 'u']) {
        "an"
    } else {
        "a"
    }
}

pub(crate) fn engine(span: Span, e: supercoset_core::Error) -> Diagnostic {
    Diagnostic::new(span, e.to_string())
}

/// Evaluates an expression over the coordinates of `sig`.
pub fn eval(e: &SpannedExpr, sig: &Arc<ChartSignature>) -> Result<SuperPolynomial, Diagnostic> {
    eval_expr(&e.expr, sig)
}

fn eval_expr(e: &Expr, sig: &Arc<ChartSignature>) -> Result<SuperPolynomial, Diagnostic> {
    Ok(match e {
        Expr::Num(c) => SuperPolynomial::constant(sig, c.clone()),
        Expr::Var(v) => SuperPolynomial::coordinate(sig, &v.name)
            .map_err(|_| Diagnostic::new(v.span, format!("unknown identifier `{}`", v.name)))?,
        Expr::Neg(x) => -eval_expr(x, sig)?,
        Expr::Add(a, b) => eval_expr(a, sig)? + eval_expr(b, sig)?,
        Expr::Sub(a, b) => eval_expr(a, sig)? - eval_expr(b, sig)?,
        Expr::Mul(a, b) => eval_expr(a, sig)? * eval_expr(b, sig)?,
        Expr::Pow(b, n) => {
            let base = eval_expr(b, sig)?;
            let mut acc = SuperPolynomial::one(sig);
            for _ in 0..*n {
                acc = &acc * &base;
                if acc.is_zero() {
                    break;
                }
            }
            acc
        }
    })
}

/// A numeric expression; names are rejected.
pub fn eval_constant(e: &SpannedExpr) -> Result<Scalar, Diagnostic> {
    Ok(eval(e, &Arc::new(ChartSignature::point()))?.constant_term())
}

/// A reduced point of `chart` from `name = value` pairs. Unnamed even
/// coordinates take `defaults`, or are an error without them; odd
/// coordinates may only be set to zero.
pub fn reduced_point(
    chart: &ChartSignature,
    defaults: Option<&[Scalar]>,
    values: &[Assignment],
    owner: &Ident,
) -> Result<Vec<Scalar>, Diagnostic> {
    let mut point: Vec<Option<Scalar>> = match defaults {
        Some(d) => d.iter().cloned().map(Some).collect(),
        None => vec![None; chart.n_even()],
    };
    let mut seen = HashSet::new();
    for a in values {
        if !seen.insert(a.name.name.as_str()) {
            return Err(Diagnostic::new(a.name.span, format!("`{}` given twice", a.name.name)));
        }
        let v = eval_constant(&a.value)?;
        match chart.lookup(&a.name.name) {
            Some(Coord::Even(i)) => point[i] = Some(v),
            Some(Coord::Odd(_)) if v.is_zero() => {}
            Some(Coord::Odd(_)) => {
                return Err(Diagnostic::new(
                    a.value.span,
                    format!("odd coordinate `{}` of a reduced point must be 0", a.name.name),
                ))
            }
            None => {
                let known: Vec<&str> = chart.coords().map(|c| chart.name_of(c)).collect();
                return Err(Diagnostic::new(
                    a.name.span,
                    format!("unknown coordinate `{}`; expected one of {}", a.name.name, known.join(", ")),
                ));
            }
        }
    }
    point
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| {
                Diagnostic::new(owner.span, format!("no value for `{}` in `{}`", chart.even_names()[i], owner.name))
            })
        })
        .collect()
}

fn coordinate_names(even: &[Ident], odd: &[Ident]) -> Result<(Vec<String>, Vec<String>), Diagnostic> {
    let mut seen = HashSet::new();
    for id in even.iter().chain(odd) {
        if !seen.insert(id.name.as_str()) {
            return Err(Diagnostic::new(id.span, format!("duplicate coordinate `{}`", id.name)));
        }
    }
    let names = |v: &[Ident]| v.iter().map(|i| i.name.clone()).collect();
    Ok((names(even), names(odd)))
}

/// One right-hand side per coordinate of `target`, in chart order, each of
/// the coordinate's parity.
fn pullbacks(
    owner: &Ident,
    keyword: &str,
    target: &ChartSignature,
    over: &Arc<ChartSignature>,
    rules: &[Assignment],
) -> Result<Vec<SuperPolynomial>, Diagnostic> {
    let mut out: Vec<Option<SuperPolynomial>> = vec![None; target.n_coords()];
    for r in rules {
        let c = target.lookup(&r.name.name).ok_or_else(|| {
            Diagnostic::new(r.name.span, format!("`{}` is not a coordinate of `{}`", r.name.name, owner.name))
        })?;
        let k = target.flat_index(c);
        if out[k].is_some() {
            return Err(Diagnostic::new(r.name.span, format!("second `{keyword}` rule for `{}`", r.name.name)));
        }
        let f = eval(&r.value, over)?;
        check_parity(&r.name.name, Parity::of(c), &f, &r.value)?;
        out[k] = Some(f);
    }
    out.into_iter()
        .enumerate()
        .map(|(k, f)| {
            f.ok_or_else(|| {
                let name = target.name_of(target.coord_at(k));
                Diagnostic::new(owner.span, format!("no `{keyword}` rule for `{name}` in `{}`", owner.name))
            })
        })
        .collect()
}

fn check_parity(name: &str, expected: Parity, f: &SuperPolynomial, rhs: &SpannedExpr) -> Result<(), Diagnostic> {
    let word = |p: Parity| if p.is_odd() { "odd" } else { "even" };
    let found = match f.parity() {
        _ if f.is_zero() => return Ok(()),
        Some(p) if p == expected => return Ok(()),
        Some(p) => word(p),
        None => "of mixed parity",
    };
    Err(Diagnostic::new(
        rhs.span,
        format!("parity mismatch: `{name}` is {} but `{}` is {found}", word(expected), print_expr(&rhs.expr)),
    ))
}

fn build_group(d: &syntax::GroupDecl) -> Result<LieSupergroup, Diagnostic> {
    let (even, odd) = coordinate_names(&d.even, &d.odd)?;
    let bare = ChartSignature::at_origin(even.clone(), odd.clone()).map_err(|e| engine(d.name.span, e))?;
    for a in &d.identity {
        if let Some(Coord::Odd(_)) = bare.lookup(&a.name.name) {
            return Err(Diagnostic::new(a.name.span, format!("the identity has no value for odd `{}`", a.name.name)));
        }
    }
    let center = reduced_point(&bare, None, &d.identity, &d.name)?;
    let chart = Arc::new(ChartSignature::new(even, odd, center).map_err(|e| engine(d.name.span, e))?);
    let pair = ProductChart::new(&[(&chart, "1"), (&chart, "2")]).map_err(|e| engine(d.name.span, e))?;
    let mul = pullbacks(&d.name, "mul", &chart, pair.signature(), &d.mul)?;
    LieSupergroup::new(d.name.name.clone(), &chart, mul).map_err(|e| engine(d.name.span, e))
}

fn build_action(d: &syntax::ActionDecl, g: &LieSupergroup) -> Result<Action, Diagnostic> {
    let (even, odd) = coordinate_names(&d.even, &d.odd)?;
    let bare = ChartSignature::at_origin(even.clone(), odd.clone()).map_err(|e| engine(d.name.span, e))?;
    let zeros = bare.center().to_vec();
    let center = reduced_point(&bare, Some(&zeros), &d.center, &d.name)?;
    let space = Arc::new(ChartSignature::new(even, odd, center).map_err(|e| engine(d.name.span, e))?);
    let product = ProductChart::new(&[(g.chart(), ""), (&space, "")]).map_err(|_| {
        Diagnostic::new(d.name.span, format!("coordinates of `{}` clash with those of `{}`", d.name.name, g.name()))
    })?;
    let mu = pullbacks(&d.name, "mu", &space, product.signature(), &d.mu)?;
    Action::new(d.name.name.clone(), g, &space, mu, None).map_err(|e| engine(d.name.span, e))
}
