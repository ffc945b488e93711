use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde_json::{json, Map, Value};
use supercoset_core::action::{equivariant_iso, stabilizer_subgroup, verify_action_axioms, Action};
use supercoset_core::coset::{coset_action_alpha, coset_atlas, transversal_slice, verify_cocycle};
use supercoset_core::group::verify_group_axioms;
use supercoset_core::{ChartSignature, Morphism, Residual, Scalar, Subsupergroup};

use crate::model::{reduced_point, AtlasEntry, Entity, Model};
use crate::report::Report;
use crate::syntax::{parse_assignments, Assignment, Diagnostic, Ident, Span};

pub const DEFAULT_ORDER: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    CheckGroup,
    CheckAction,
    Stabilizer,
    CosetAtlas,
    Cocycle,
    Equivariance,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CheckGroup => "check-group",
            Command::CheckAction => "check-action",
            Command::Stabilizer => "stabilizer",
            Command::CosetAtlas => "coset-atlas",
            Command::Cocycle => "cocycle",
            Command::Equivariance => "equivariance",
        }
    }

    /// Entity kinds accepted as the command's target.
    fn targets(self) -> &'static [&'static str] {
        match self {
            Command::CheckGroup => &["supergroup"],
            Command::CheckAction => &["action"],
            Command::Stabilizer => &["point", "action"],
            Command::CosetAtlas => &["atlas", "subgroup", "point", "action"],
            Command::Cocycle => &["atlas"],
            Command::Equivariance => &["atlas", "point", "action"],
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Command as clap::ValueEnum>::from_str(s, false)
    }
}

/// Command-line overrides. Values are kept as syntax so that names resolve
/// against whichever chart the command ends up using.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub order: Option<u32>,
    pub reps: Option<Vec<Vec<Assignment>>>,
    pub point: Option<Vec<Assignment>>,
}

impl Options {
    /// `--reps` takes `;`-separated lists such as `a=1,b=1;a=2,b=1`.
    pub fn parse_reps(text: &str) -> Result<Vec<Vec<Assignment>>, Diagnostic> {
        text.split(';').map(|part| parse_assignments(part.trim())).collect()
    }

    pub fn parse_point(text: &str) -> Result<Vec<Assignment>, Diagnostic> {
        parse_assignments(text)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Model(#[from] Diagnostic),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Engine(#[from] supercoset_core::Error),
}

type RResult<T> = Result<T, RunError>;

fn cli_ident(what: &str) -> Ident {
    Ident { name: what.into(), span: Span::default() }
}

fn option_diagnostic(flag: &str, d: Diagnostic) -> RunError {
    RunError::Usage(format!("{flag}: {}", d.message))
}

/// Runs `command` on the named entity, or on the only entity of a fitting
/// kind when `target` is `None`.
pub fn run_command(model: &Model, command: Command, target: Option<&str>, opts: &Options) -> RResult<Report> {
    let start = Instant::now();
    let name = resolve_target(model, command, target)?;
    let entity = model.get(&name).expect("resolved");
    if opts.point.is_some() && !matches!(entity, Entity::Action(_)) {
        return Err(RunError::Usage(format!("--point only applies when the target is an action, `{name}` is not")));
    }
    if opts.reps.is_some() && !matches!(command, Command::CosetAtlas | Command::Equivariance) {
        return Err(RunError::Usage(format!("--reps does not apply to {command}")));
    }
    let order = opts
        .order
        .or(match entity {
            Entity::Atlas(a) => a.decl.order,
            _ => None,
        })
        .unwrap_or(DEFAULT_ORDER);
    let task = format!("{command} {name}");
    let (residuals, artifacts) = match command {
        Command::CheckGroup => {
            let g = model.group(&name).expect("kind checked");
            let r = verify_group_axioms(g, order)?;
            let (n, m) = g.dim();
            (r.residuals, object([("dimension", json!([n, m]))]))
        }
        Command::CheckAction => {
            let a = model.action(&name).expect("kind checked");
            let r = verify_action_axioms(a, order)?;
            let (n, m) = a.space().dim();
            (r.residuals, object([("group", json!(a.group().name())), ("space_dimension", json!([n, m]))]))
        }
        Command::Stabilizer => {
            let (a, x) = action_point(model, &name, opts)?;
            let st = stabilizer_subgroup(a, &x, order)?;
            let h = &st.subgroup;
            let gens: Vec<String> = h.ideal().generators().iter().map(|f| f.to_string()).collect();
            let (n, m) = h.dim();
            let artifacts = object([
                ("point", named(a.space(), &x)),
                ("generators", json!(gens)),
                ("dimension", json!([n, m])),
                ("embedding", serde_json::to_value(h.embed()).expect("serializable")),
            ]);
            (h.report().residuals.clone(), artifacts)
        }
        Command::CosetAtlas | Command::Cocycle | Command::Equivariance => {
            run_atlas(model, command, &name, entity, opts, order)?
        }
    };
    let mut report = Report::new(task, order, &residuals, artifacts);
    report.timing_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

fn object<const N: usize>(pairs: [(&str, Value); N]) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn named(chart: &ChartSignature, point: &[Scalar]) -> Value {
    let map: Map<String, Value> =
        chart.even_names().iter().zip(point).map(|(n, v)| (n.clone(), json!(v.to_string()))).collect();
    Value::Object(map)
}

fn pullback_strings(m: &Morphism) -> Value {
    let t = m.target();
    Value::Object(t.coords().map(|c| (t.name_of(c).to_string(), json!(m.pullback_at(c).to_string()))).collect())
}

fn resolve_target(model: &Model, command: Command, target: Option<&str>) -> RResult<String> {
    let kinds = command.targets();
    if let Some(t) = target {
        return match model.get(t) {
            None => Err(RunError::Usage(format!("no entity named `{t}` in the model"))),
            Some(e) if kinds.contains(&e.kind()) => Ok(t.to_string()),
            Some(e) => {
                Err(RunError::Usage(format!("{command} expects a {}, `{t}` is a {}", kinds.join(" or "), e.kind())))
            }
        };
    }
    // without a name, take the only entity of the preferred kind
    for kind in kinds {
        let found: Vec<&str> = model.entities().filter(|(_, e)| e.kind() == *kind).map(|(n, _)| n).collect();
        match found.as_slice() {
            [] => continue,
            [one] => return Ok(one.to_string()),
            many => return Err(RunError::Usage(format!("{command} needs a target; candidates: {}", many.join(", ")))),
        }
    }
    Err(RunError::Usage(format!("the model declares no {} for {command}", kinds.join(" or "))))
}

/// The action and reduced point named by a point declaration, or by an
/// action together with `--point`.
fn action_point<'m>(model: &'m Model, name: &str, opts: &Options) -> RResult<(&'m Action, Vec<Scalar>)> {
    match model.get(name) {
        Some(Entity::Point(p)) => Ok((model.action(&p.action).expect("resolved"), p.point.clone())),
        Some(Entity::Action(a)) => {
            let values = opts
                .point
                .as_ref()
                .ok_or_else(|| RunError::Usage(format!("`{name}` is an action; pass --point or name a point")))?;
            let x = reduced_point(a.space(), Some(a.space().center()), values, &cli_ident("--point"))
                .map_err(|d| option_diagnostic("--point", d))?;
            Ok((a, x))
        }
        _ => Err(RunError::Usage(format!("`{name}` is not a point or an action"))),
    }
}

struct Setup<'m> {
    subgroup: Subsupergroup,
    /// Present when the subgroup is a stabilizer.
    orbit: Option<(&'m Action, Vec<Scalar>)>,
    reps: Vec<Vec<Scalar>>,
    atlas: Option<&'m AtlasEntry>,
}

fn setup<'m>(model: &'m Model, name: &str, opts: &Options, order: u32) -> RResult<Setup<'m>> {
    let (base, atlas) = match model.get(name) {
        Some(Entity::Atlas(a)) => (a.target.as_str(), Some(a)),
        _ => (name, None),
    };
    let (subgroup, orbit) = match model.get(base) {
        Some(Entity::Subgroup(s)) => {
            let g = model.group(&s.group).expect("resolved");
            (Subsupergroup::analyze(g, &s.ideal, order)?, None)
        }
        _ => {
            let (a, x) = action_point(model, base, opts)?;
            (stabilizer_subgroup(a, &x, order)?.subgroup, Some((a, x)))
        }
    };
    let g = subgroup.parent();
    let reps = match (&opts.reps, atlas) {
        (Some(r), _) => r
            .iter()
            .map(|vals| reduced_point(g.chart(), Some(g.identity()), vals, &cli_ident("--reps")))
            .collect::<Result<_, _>>()
            .map_err(|d| option_diagnostic("--reps", d))?,
        (None, Some(a)) => a.reps.clone(),
        (None, None) => vec![g.identity().to_vec()],
    };
    if let Some(a) = atlas {
        if opts.reps.is_some() && reps.len() != a.reps.len() {
            return Err(RunError::Usage(format!(
                "--reps gives {} charts but atlas `{name}` indexes {}",
                reps.len(),
                a.reps.len()
            )));
        }
    }
    Ok(Setup { subgroup, orbit, reps, atlas })
}

fn slice_point(slice: &ChartSignature, values: &[Assignment], what: &str) -> RResult<Vec<Scalar>> {
    Ok(reduced_point(slice, Some(slice.center()), values, &cli_ident(what))?)
}

fn run_atlas(
    model: &Model,
    command: Command,
    name: &str,
    entity: &Entity,
    opts: &Options,
    order: u32,
) -> RResult<(Vec<Residual>, Map<String, Value>)> {
    if command == Command::Cocycle && !matches!(entity, Entity::Atlas(_)) {
        return Err(RunError::Usage("cocycle needs an atlas declaration with cocycle triples".into()));
    }
    let s = setup(model, name, opts, order)?;
    let mut residuals = s.subgroup.report().residuals.clone();
    if !s.subgroup.report().passed() {
        return Ok((residuals, Map::new()));
    }
    let slice = transversal_slice(&s.subgroup)?;
    let sc = slice.chart().clone();
    let decl = s.atlas.map(|a| &a.decl);
    let mut overlaps = Vec::new();
    let mut samples = Vec::new();
    let mut triples = Vec::new();
    if let Some(d) = decl {
        for o in &d.overlaps {
            overlaps.push((o.from.value, o.to.value, slice_point(&sc, &o.at, "overlap")?));
        }
        for c in &d.cocycles {
            let [i, j, k] = &c.charts;
            triples.push((i.value, j.value, k.value, slice_point(&sc, &c.at, "cocycle")?));
        }
        for smp in &d.samples {
            samples.push((smp.chart.value, slice_point(&sc, &smp.at, "sample")?));
        }
    }
    let atlas = coset_atlas(&s.subgroup, &s.reps, &overlaps, order)?;
    let mut artifacts = Map::new();
    match command {
        Command::CosetAtlas => {
            residuals.extend(atlas.report().residuals.iter().cloned());
            if !samples.is_empty() {
                residuals.extend(coset_action_alpha(&atlas, &samples, order)?.report.residuals);
            }
            let (n, m) = slice.dim();
            artifacts.insert("slice_dimension".into(), json!([n, m]));
            let transitions: Vec<Value> = atlas
                .overlaps()
                .iter()
                .map(|o| {
                    json!({
                        "from": o.from,
                        "to": o.to,
                        "sample": named(&sc, &o.sample),
                        "pullbacks": pullback_strings(&o.transition),
                    })
                })
                .collect();
            artifacts.insert("transitions".into(), Value::Array(transitions));
            artifacts.insert("atlas".into(), serde_json::to_value(&atlas).expect("serializable"));
        }
        Command::Cocycle => {
            if triples.is_empty() {
                return Err(RunError::Usage(format!("atlas `{name}` declares no cocycle triples")));
            }
            residuals = verify_cocycle(&atlas, &triples, order)?.residuals;
        }
        Command::Equivariance => {
            let (a, x) = s
                .orbit
                .as_ref()
                .ok_or_else(|| RunError::Usage("equivariance needs the stabilizer of a point".into()))?;
            if samples.is_empty() {
                samples = atlas.charts().iter().enumerate().map(|(k, c)| (k, c.chart.center().to_vec())).collect();
            }
            let iso = equivariant_iso(a, x, &atlas, &samples, order)?;
            residuals.extend(iso.report.residuals);
            let beta: Vec<Value> = iso.charts.iter().map(pullback_strings).collect();
            artifacts.insert("beta".into(), Value::Array(beta));
        }
        _ => unreachable!("not an atlas command"),
    }
    Ok((residuals, artifacts))
}
