//! Front end for `supercoset`: a small model language for supergroups,
//! subgroups, actions and atlases, the command runner behind the binary and
//! JSON reports.

pub mod model;
pub mod report;
pub mod run;
pub mod syntax;

pub use model::{parse_model, Entity, Model};
pub use report::{export_json, import_atlas, import_morphism, import_report, Report, Status};
pub use run::{run_command, Command, Options, RunError};
pub use syntax::{pretty_print, Diagnostic};
