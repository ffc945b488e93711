use supercoset_core::Scalar;

use super::lexer::{tokenize, Tok};
use super::*;

/// Parses the surface syntax only; name resolution happens in
/// [`crate::model::Model::build`].
pub fn parse(src: &str) -> Result<ModelFile, Diagnostic> {
    let mut p = Parser { toks: tokenize(src)?, pos: 0 };
    let mut model = ModelFile::default();
    loop {
        let comments = p.comments();
        if p.peek() == &Tok::Eof {
            return Ok(model);
        }
        let kind = p.decl()?;
        model.decls.push(Decl { comments, kind });
    }
}

/// A bare `name = value, ...` list, as given on the command line.
pub fn parse_assignments(src: &str) -> Result<Vec<Assignment>, Diagnostic> {
    let mut p = Parser { toks: tokenize(src)?, pos: 0 };
    let out = p.assignments()?;
    if p.peek() != &Tok::Eof {
        return p.error("`,` or end of input");
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

type PResult<T> = Result<T, Diagnostic>;

impl Parser {
    fn skip_comments(&mut self) {
        while matches!(self.toks[self.pos].0, Tok::Comment(_)) {
            self.pos += 1;
        }
    }

    fn comments(&mut self) -> Vec<String> {
        let mut out = Vec::new();
        while let Tok::Comment(c) = &self.toks[self.pos].0 {
            out.push(c.clone());
            self.pos += 1;
        }
        out
    }

    fn peek(&mut self) -> &Tok {
        self.skip_comments();
        &self.toks[self.pos].0
    }

    fn span(&mut self) -> Span {
        self.skip_comments();
        self.toks[self.pos].1
    }

    fn next(&mut self) -> (Tok, Span) {
        self.skip_comments();
        let t = self.toks[self.pos].clone();
        if t.0 != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&mut self, expected: &str) -> PResult<T> {
        let span = self.span();
        let found = self.peek().describe();
        Err(Diagnostic::new(span, format!("expected {expected}, found {found}")))
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> PResult<Span> {
        if self.peek() == t {
            Ok(self.next().1)
        } else {
            self.error(&format!("`{}`", t.symbol()))
        }
    }

    fn is_keyword(&mut self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        if self.is_keyword(kw) {
            self.next();
            Ok(())
        } else {
            self.error(&format!("`{kw}`"))
        }
    }

    fn ident(&mut self) -> PResult<Ident> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let (_, span) = self.next();
                Ok(Ident { name, span })
            }
            _ => self.error("a name"),
        }
    }

    fn index(&mut self) -> PResult<Index> {
        match *self.peek() {
            Tok::Int(value) => {
                let (_, span) = self.next();
                Ok(Index { value, span })
            }
            _ => self.error("a chart index"),
        }
    }

    fn ident_list(&mut self) -> PResult<Vec<Ident>> {
        let mut out = vec![self.ident()?];
        while self.eat(&Tok::Comma) {
            out.push(self.ident()?);
        }
        self.expect(&Tok::Semi)?;
        Ok(out)
    }

    fn assignment(&mut self) -> PResult<Assignment> {
        let name = self.ident()?;
        self.expect(&Tok::Eq)?;
        Ok(Assignment { name, value: self.spanned_expr()? })
    }

    /// Zero or more comma-separated assignments up to, not including, `;`.
    fn assignments(&mut self) -> PResult<Vec<Assignment>> {
        let mut out = Vec::new();
        if self.peek() == &Tok::Semi {
            return Ok(out);
        }
        out.push(self.assignment()?);
        while self.eat(&Tok::Comma) {
            out.push(self.assignment()?);
        }
        Ok(out)
    }

    fn decl(&mut self) -> PResult<DeclKind> {
        let kw = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return self.error("a declaration"),
        };
        match kw.as_str() {
            "supergroup" => {
                self.next();
                self.group().map(DeclKind::Group)
            }
            "subgroup" => {
                self.next();
                self.subgroup().map(DeclKind::Subgroup)
            }
            "action" => {
                self.next();
                self.action().map(DeclKind::Action)
            }
            "point" => {
                self.next();
                self.point().map(DeclKind::Point)
            }
            "atlas" => {
                self.next();
                self.atlas().map(DeclKind::Atlas)
            }
            _ => self.error("`supergroup`, `subgroup`, `action`, `point` or `atlas`"),
        }
    }

    fn group(&mut self) -> PResult<GroupDecl> {
        let name = self.ident()?;
        self.expect(&Tok::LBrace)?;
        let mut d = GroupDecl { name, even: vec![], odd: vec![], identity: vec![], mul: vec![] };
        while !self.eat(&Tok::RBrace) {
            let stmt = self.ident()?;
            match stmt.name.as_str() {
                "even" => d.even.extend(self.ident_list()?),
                "odd" => d.odd.extend(self.ident_list()?),
                "identity" => {
                    d.identity.extend(self.assignments()?);
                    self.expect(&Tok::Semi)?;
                }
                "mul" => {
                    d.mul.push(self.assignment()?);
                    self.expect(&Tok::Semi)?;
                }
                other => {
                    return Err(Diagnostic::new(
                        stmt.span,
                        format!("expected `even`, `odd`, `identity` or `mul`, found `{other}`"),
                    ))
                }
            }
        }
        Ok(d)
    }

    fn subgroup(&mut self) -> PResult<SubgroupDecl> {
        let name = self.ident()?;
        self.keyword("of")?;
        let group = self.ident()?;
        self.expect(&Tok::LBrace)?;
        let mut ideal = Vec::new();
        while !self.eat(&Tok::RBrace) {
            self.keyword("ideal")?;
            if self.peek() != &Tok::Semi {
                ideal.push(self.spanned_expr()?);
                while self.eat(&Tok::Comma) {
                    ideal.push(self.spanned_expr()?);
                }
            }
            self.expect(&Tok::Semi)?;
        }
        Ok(SubgroupDecl { name, group, ideal })
    }

    fn action(&mut self) -> PResult<ActionDecl> {
        let name = self.ident()?;
        self.keyword("of")?;
        let group = self.ident()?;
        self.keyword("on")?;
        self.expect(&Tok::LBrace)?;
        let mut d = ActionDecl { name, group, even: vec![], odd: vec![], center: vec![], mu: vec![] };
        while !self.eat(&Tok::RBrace) {
            let stmt = self.ident()?;
            match stmt.name.as_str() {
                "even" => d.even.extend(self.ident_list()?),
                "odd" => d.odd.extend(self.ident_list()?),
                "center" => {
                    d.center.extend(self.assignments()?);
                    self.expect(&Tok::Semi)?;
                }
                "mu" => {
                    d.mu.push(self.assignment()?);
                    self.expect(&Tok::Semi)?;
                }
                other => {
                    return Err(Diagnostic::new(
                        stmt.span,
                        format!("expected `even`, `odd`, `center` or `mu`, found `{other}`"),
                    ))
                }
            }
        }
        Ok(d)
    }

    fn point(&mut self) -> PResult<PointDecl> {
        let name = self.ident()?;
        self.keyword("of")?;
        let action = self.ident()?;
        self.expect(&Tok::LBrace)?;
        let mut values = Vec::new();
        while !self.eat(&Tok::RBrace) {
            values.extend(self.assignments()?);
            self.expect(&Tok::Semi)?;
        }
        Ok(PointDecl { name, action, values })
    }

    fn at_clause(&mut self) -> PResult<Vec<Assignment>> {
        let at = if self.is_keyword("at") {
            self.next();
            self.assignments()?
        } else {
            Vec::new()
        };
        self.expect(&Tok::Semi)?;
        Ok(at)
    }

    fn atlas(&mut self) -> PResult<AtlasDecl> {
        let name = self.ident()?;
        self.keyword("of")?;
        let target = self.ident()?;
        self.expect(&Tok::LBrace)?;
        let mut d =
            AtlasDecl { name, target, order: None, reps: vec![], overlaps: vec![], cocycles: vec![], samples: vec![] };
        while !self.eat(&Tok::RBrace) {
            let stmt = self.ident()?;
            match stmt.name.as_str() {
                "order" => {
                    let i = self.index()?;
                    if d.order.is_some() {
                        return Err(Diagnostic::new(stmt.span, "`order` given twice"));
                    }
                    d.order = Some(i.value as u32);
                    self.expect(&Tok::Semi)?;
                }
                "rep" => {
                    let rep = self.assignments()?;
                    self.expect(&Tok::Semi)?;
                    d.reps.push((stmt.span, rep));
                }
                "overlap" => {
                    let from = self.index()?;
                    self.expect(&Tok::Arrow)?;
                    let to = self.index()?;
                    d.overlaps.push(OverlapDecl { from, to, at: self.at_clause()? });
                }
                "cocycle" => {
                    let i = self.index()?;
                    self.expect(&Tok::Arrow)?;
                    let j = self.index()?;
                    self.expect(&Tok::Arrow)?;
                    let k = self.index()?;
                    d.cocycles.push(CocycleDecl { charts: [i, j, k], at: self.at_clause()? });
                }
                "sample" => {
                    let chart = self.index()?;
                    d.samples.push(SampleDecl { chart, at: self.at_clause()? });
                }
                other => {
                    return Err(Diagnostic::new(
                        stmt.span,
                        format!("expected `order`, `rep`, `overlap`, `cocycle` or `sample`, found `{other}`"),
                    ))
                }
            }
        }
        Ok(d)
    }

    fn spanned_expr(&mut self) -> PResult<SpannedExpr> {
        let span = self.span();
        Ok(SpannedExpr { expr: self.expr()?, span })
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(&Tok::Minus) {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::Star) {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.eat(&Tok::Minus) {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            return match *self.peek() {
                Tok::Int(n) if n <= u32::MAX as usize => {
                    self.next();
                    Ok(Expr::Pow(Box::new(base), n as u32))
                }
                _ => self.error("a non-negative integer exponent"),
            };
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.next();
                Ok(Expr::Num(Scalar::from_int(n as i64)))
            }
            Tok::Num(c) => {
                self.next();
                Ok(Expr::Num(c))
            }
            Tok::Ident(_) => Ok(Expr::Var(self.ident()?)),
            Tok::LParen => {
                self.next();
                let e = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            _ => self.error("an expression"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expr(src: &str) -> Expr {
        let m = parse(&format!("subgroup H of G {{ ideal {src}; }}")).unwrap();
        match &m.decls[0].kind {
            DeclKind::Subgroup(s) => s.ideal[0].expr.clone(),
            _ => unreachable!(),
        }
    }

    fn var(n: &str) -> Box<Expr> {
        Box::new(Expr::Var(Ident { name: n.into(), span: Span::default() }))
    }

    #[test]
    fn empty_document() {
        assert_eq!(parse("").unwrap(), ModelFile::default());
        assert_eq!(parse("  # only a comment\n").unwrap(), ModelFile::default());
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(expr("a - b - c"), Expr::Sub(Box::new(Expr::Sub(var("a"), var("b"))), var("c")));
        assert_eq!(expr("a + b*c"), Expr::Add(var("a"), Box::new(Expr::Mul(var("b"), var("c")))));
        assert_eq!(expr("-a*b"), Expr::Mul(Box::new(Expr::Neg(var("a"))), var("b")));
        assert_eq!(expr("(a + b)^2"), Expr::Pow(Box::new(Expr::Add(var("a"), var("b"))), 2));
        assert_eq!(expr("1/2*a"), Expr::Mul(Box::new(Expr::Num(Scalar::from_ratio(1, 2))), var("a")));
    }

    #[test]
    fn group_declaration() {
        let src = "supergroup T {\n  even t;\n  odd tau;\n  identity t = 0;\n  mul t = t1 + t2;\n  mul tau = tau1 + tau2;\n}\n";
        let m = parse(src).unwrap();
        let DeclKind::Group(g) = &m.decls[0].kind else { panic!() };
        assert_eq!(g.name.name, "T");
        assert_eq!(g.mul.len(), 2);
        assert_eq!((g.mul[1].name.span.line, g.mul[1].name.span.column), (6, 7));
    }

    #[test]
    fn comments_attach_to_the_next_declaration() {
        let m = parse("# first\n# second\npoint p of A { y = 1; }\n").unwrap();
        assert_eq!(m.decls[0].comments, vec!["first".to_string(), "second".to_string()]);
    }

    #[test]
    fn atlas_statements() {
        let m = parse(
            "atlas X of H { order 3; rep a = 2; rep; overlap 0 -> 1 at a_s = 2; cocycle 0 -> 1 -> 0; sample 1; }",
        )
        .unwrap();
        let DeclKind::Atlas(a) = &m.decls[0].kind else { panic!() };
        assert_eq!(a.order, Some(3));
        assert_eq!(a.reps.len(), 2);
        assert!(a.reps[1].1.is_empty());
        assert_eq!(a.overlaps[0].to.value, 1);
        assert_eq!(a.cocycles[0].charts[2].value, 0);
        assert!(a.samples[0].at.is_empty());
    }

    #[test]
    fn errors_carry_locations() {
        let e = parse("supergroup G {\n  even a\n}").unwrap_err();
        assert_eq!((e.span.line, e.span.column), (3, 1));
        assert!(e.message.contains("expected `;`"), "{e}");
        let e = parse("supergroup G { weird x; }").unwrap_err();
        assert_eq!((e.span.line, e.span.column), (1, 16));
        let e = parse("subgroup H of G { ideal a +; }").unwrap_err();
        assert_eq!((e.span.line, e.span.column), (1, 28));
        assert!(parse("banana").unwrap_err().message.contains("`supergroup`"));
        let e = parse("atlas X of H { order 1; order 2; }").unwrap_err();
        assert!(e.message.contains("twice"));
    }
}
