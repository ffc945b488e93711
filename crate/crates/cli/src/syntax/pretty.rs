use std::fmt::Write;

use super::*;

/// Canonical text of a model: four-space bodies, statements grouped by kind,
/// one blank line between declarations.
pub fn pretty_print(model: &ModelFile) -> String {
    let mut out = String::new();
    for (k, d) in model.decls.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        for c in &d.comments {
            if c.is_empty() {
                out.push_str("#\n");
            } else {
                let _ = writeln!(out, "# {c}");
            }
        }
        match &d.kind {
            DeclKind::Group(g) => {
                let _ = writeln!(out, "supergroup {} {{", g.name.name);
                names(&mut out, "even", &g.even);
                names(&mut out, "odd", &g.odd);
                assignments(&mut out, "identity", &g.identity);
                for m in &g.mul {
                    let _ = writeln!(out, "    mul {} = {};", m.name.name, print_expr(&m.value.expr));
                }
            }
            DeclKind::Subgroup(s) => {
                let _ = writeln!(out, "subgroup {} of {} {{", s.name.name, s.group.name);
                let gens: Vec<String> = s.ideal.iter().map(|e| print_expr(&e.expr)).collect();
                if gens.is_empty() {
                    out.push_str("    ideal;\n");
                } else {
                    let _ = writeln!(out, "    ideal {};", gens.join(", "));
                }
            }
            DeclKind::Action(a) => {
                let _ = writeln!(out, "action {} of {} on {{", a.name.name, a.group.name);
                names(&mut out, "even", &a.even);
                names(&mut out, "odd", &a.odd);
                assignments(&mut out, "center", &a.center);
                for m in &a.mu {
                    let _ = writeln!(out, "    mu {} = {};", m.name.name, print_expr(&m.value.expr));
                }
            }
            DeclKind::Point(p) => {
                let _ = writeln!(out, "point {} of {} {{", p.name.name, p.action.name);
                if !p.values.is_empty() {
                    let _ = writeln!(out, "    {};", assignment_list(&p.values));
                }
            }
            DeclKind::Atlas(a) => {
                let _ = writeln!(out, "atlas {} of {} {{", a.name.name, a.target.name);
                if let Some(o) = a.order {
                    let _ = writeln!(out, "    order {o};");
                }
                for (_, r) in &a.reps {
                    if r.is_empty() {
                        out.push_str("    rep;\n");
                    } else {
                        let _ = writeln!(out, "    rep {};", assignment_list(r));
                    }
                }
                for o in &a.overlaps {
                    let _ = writeln!(out, "    overlap {} -> {}{};", o.from.value, o.to.value, at(&o.at));
                }
                for c in &a.cocycles {
                    let [i, j, k] = &c.charts;
                    let _ = writeln!(out, "    cocycle {} -> {} -> {}{};", i.value, j.value, k.value, at(&c.at));
                }
                for s in &a.samples {
                    let _ = writeln!(out, "    sample {}{};", s.chart.value, at(&s.at));
                }
            }
        }
        out.push_str("}\n");
    }
    out
}

fn names(out: &mut String, kw: &str, list: &[Ident]) {
    if !list.is_empty() {
        let names: Vec<&str> = list.iter().map(|i| i.name.as_str()).collect();
        let _ = writeln!(out, "    {kw} {};", names.join(", "));
    }
}

fn assignments(out: &mut String, kw: &str, list: &[Assignment]) {
    if !list.is_empty() {
        let _ = writeln!(out, "    {kw} {};", assignment_list(list));
    }
}

fn assignment_list(list: &[Assignment]) -> String {
    list.iter().map(|a| format!("{} = {}", a.name.name, print_expr(&a.value.expr))).collect::<Vec<_>>().join(", ")
}

fn at(list: &[Assignment]) -> String {
    if list.is_empty() {
        String::new()
    } else {
        format!(" at {}", assignment_list(list))
    }
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Level {
    Sum,
    Product,
    Unary,
    Atom,
}

/// Prints with the fewest parentheses that parse back to the same tree.
pub fn print_expr(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e, Level::Sum);
    s
}

fn level(e: &Expr) -> Level {
    match e {
        Expr::Add(..) | Expr::Sub(..) => Level::Sum,
        Expr::Mul(..) => Level::Product,
        Expr::Neg(_) | Expr::Pow(..) => Level::Unary,
        Expr::Num(c) if c.to_string().starts_with('(') => Level::Atom,
        Expr::Num(c) if !c.is_real() || !c.re().is_integer() => Level::Unary,
        Expr::Num(_) | Expr::Var(_) => Level::Atom,
    }
}

fn write_expr(s: &mut String, e: &Expr, min: Level) {
    if level(e) < min {
        s.push('(');
        write_expr(s, e, Level::Sum);
        s.push(')');
        return;
    }
    match e {
        Expr::Num(c) => {
            let _ = write!(s, "{c}");
        }
        Expr::Var(v) => s.push_str(&v.name),
        Expr::Neg(x) => {
            s.push('-');
            write_expr(s, x, Level::Unary);
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            write_expr(s, a, Level::Sum);
            s.push_str(if matches!(e, Expr::Add(..)) { " + " } else { " - " });
            write_expr(s, b, Level::Product);
        }
        Expr::Mul(a, b) => {
            write_expr(s, a, Level::Product);
            s.push('*');
            write_expr(s, b, Level::Unary);
        }
        Expr::Pow(b, n) => {
            write_expr(s, b, Level::Atom);
            let _ = write!(s, "^{n}");
        }
    }
}
