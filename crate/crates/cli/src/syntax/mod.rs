//! Syntax trees for model files, with a lexer, a recursive-descent parser and
//! a canonical printer.
//!
//! ```text
//! supergroup GL11 {
//!     even a, b;
//!     odd alpha, beta;
//!     identity a = 1, b = 1;
//!     mul a = a1*a2 + alpha1*beta2;
//!     ...
//! }
//! subgroup Upper of GL11 { ideal a - 1, beta; }
//! action Std of GL11 on { even y; odd eta; mu y = a*y + alpha*eta; ... }
//! point e1 of Std { y = 1; }
//! atlas Cosets of Upper { order 4; rep a = 2; overlap 0 -> 1 at a_s = 2; ... }
//! ```

mod lexer;
mod parser;
mod pretty;

use std::fmt;

use supercoset_core::Scalar;

pub use parser::{parse, parse_assignments};
pub use pretty::{pretty_print, print_expr};

/// A 1-based line and column.
#[derive(Clone, Copy, Debug, Default, Eq, PartialOrd, Ord)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

/// Locations never take part in comparing syntax trees.
impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// An error tied to a place in the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub span: Span,
    pub message: String,
}

impl Diagnostic {
    pub fn new(span: Span, message: impl Into<String>) -> Self {
        Diagnostic { span, message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.span.line, self.span.column, self.message)
    }
}

impl std::error::Error for Diagnostic {}

#[derive(Clone, Debug, PartialEq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Scalar),
    Var(Ident),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpannedExpr {
    pub expr: Expr,
    pub span: Span,
}

/// `name = expr`.
#[derive(Clone, Debug, PartialEq)]
pub struct Assignment {
    pub name: Ident,
    pub value: SpannedExpr,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupDecl {
    pub name: Ident,
    pub even: Vec<Ident>,
    pub odd: Vec<Ident>,
    pub identity: Vec<Assignment>,
    pub mul: Vec<Assignment>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubgroupDecl {
    pub name: Ident,
    pub group: Ident,
    pub ideal: Vec<SpannedExpr>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ActionDecl {
    pub name: Ident,
    pub group: Ident,
    pub even: Vec<Ident>,
    pub odd: Vec<Ident>,
    pub center: Vec<Assignment>,
    pub mu: Vec<Assignment>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointDecl {
    pub name: Ident,
    pub action: Ident,
    pub values: Vec<Assignment>,
}

/// A chart index as written, with its location.
#[derive(Clone, Debug, PartialEq)]
pub struct Index {
    pub value: usize,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OverlapDecl {
    pub from: Index,
    pub to: Index,
    pub at: Vec<Assignment>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CocycleDecl {
    pub charts: [Index; 3],
    pub at: Vec<Assignment>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleDecl {
    pub chart: Index,
    pub at: Vec<Assignment>,
}

/// Representatives, overlaps, cocycle triples and sample points for the coset
/// space of a subgroup, or of the stabilizer of a declared point.
#[derive(Clone, Debug, PartialEq)]
pub struct AtlasDecl {
    pub name: Ident,
    pub target: Ident,
    pub order: Option<u32>,
    pub reps: Vec<(Span, Vec<Assignment>)>,
    pub overlaps: Vec<OverlapDecl>,
    pub cocycles: Vec<CocycleDecl>,
    pub samples: Vec<SampleDecl>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DeclKind {
    Group(GroupDecl),
    Subgroup(SubgroupDecl),
    Action(ActionDecl),
    Point(PointDecl),
    Atlas(AtlasDecl),
}

/// A declaration with the `#` comment lines directly above it.
#[derive(Clone, Debug, PartialEq)]
pub struct Decl {
    pub comments: Vec<String>,
    pub kind: DeclKind,
}

impl Decl {
    pub fn name(&self) -> &Ident {
        match &self.kind {
            DeclKind::Group(d) => &d.name,
            DeclKind::Subgroup(d) => &d.name,
            DeclKind::Action(d) => &d.name,
            DeclKind::Point(d) => &d.name,
            DeclKind::Atlas(d) => &d.name,
        }
    }

    pub fn keyword(&self) -> &'static str {
        match &self.kind {
            DeclKind::Group(_) => "supergroup",
            DeclKind::Subgroup(_) => "subgroup",
            DeclKind::Action(_) => "action",
            DeclKind::Point(_) => "point",
            DeclKind::Atlas(_) => "atlas",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ModelFile {
    pub decls: Vec<Decl>,
}
