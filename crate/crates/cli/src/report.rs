//! Command reports and the JSON import/export helpers.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use supercoset_core::coset::CosetAtlas;
use supercoset_core::{Morphism, Residual, SuperPolynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn of(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// The first nonzero component of a residual.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub component: String,
    pub display: String,
    pub function: SuperPolynomial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualEntry {
    pub label: String,
    pub status: Status,
    pub required: u32,
    pub valid_to: Option<u32>,
    pub nonzero: Vec<String>,
    pub witness: Option<Witness>,
}

impl From<&Residual> for ResidualEntry {
    fn from(r: &Residual) -> Self {
        ResidualEntry {
            label: r.label.clone(),
            status: Status::of(r.passed()),
            required: r.required,
            valid_to: r.valid_to,
            nonzero: r.components.iter().filter(|(_, f)| !f.is_zero()).map(|(n, _)| n.clone()).collect(),
            witness: r.witness().map(|(n, f)| Witness {
                component: n.to_string(),
                display: f.to_string(),
                function: f.clone(),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub task: String,
    pub status: Status,
    pub order: u32,
    pub residuals: Vec<ResidualEntry>,
    pub artifacts: Map<String, Value>,
    pub timing_ms: f64,
}

impl Report {
    pub fn new(task: String, order: u32, residuals: &[Residual], artifacts: Map<String, Value>) -> Report {
        let residuals: Vec<ResidualEntry> = residuals.iter().map(ResidualEntry::from).collect();
        let status = Status::of(residuals.iter().all(|r| r.status == Status::Pass));
        Report { task, status, order, residuals, artifacts, timing_ms: 0.0 }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Plain-text summary, one line per residual.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "{}: {} (order {}, {} residuals)\n",
            self.task,
            if self.passed() { "pass" } else { "FAIL" },
            self.order,
            self.residuals.len()
        );
        for r in &self.residuals {
            let mark = if r.status == Status::Pass { "ok  " } else { "FAIL" };
            out.push_str(&format!("  {mark} {}", r.label));
            if let Some(w) = &r.witness {
                out.push_str(&format!(": {} -> {}", w.component, w.display));
            } else if r.status == Status::Fail {
                out.push_str(&format!(": known only to order {}", r.valid_to.unwrap_or(0)));
            }
            out.push('\n');
        }
        for (k, v) in &self.artifacts {
            if let Some(s) = compact(v) {
                out.push_str(&format!("  {k}: {s}\n"));
            }
        }
        out
    }
}

/// Short artifacts are echoed in the text summary; bulky ones only go to JSON.
fn compact(v: &Value) -> Option<String> {
    let s = v.to_string();
    (s.len() <= 120).then_some(s)
}

/// Pretty JSON with a trailing newline.
pub fn export_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn import_json<T: DeserializeOwned>(text: &str) -> Result<T, serde_json::Error> {
    serde_json::from_str(text)
}

pub fn import_morphism(text: &str) -> Result<Morphism, serde_json::Error> {
    import_json(text)
}

/// Rebuilds the atlas from its subgroup and representatives and rejects the
/// document if the recorded charts differ from the rebuilt ones.
pub fn import_atlas(text: &str) -> Result<CosetAtlas, serde_json::Error> {
    import_json(text)
}

pub fn import_report(text: &str) -> Result<Report, serde_json::Error> {
    import_json(text)
}
