use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use supercoset_core::Scalar;

use super::{Diagnostic, Span};

#[derive(Clone, Debug, PartialEq)]
pub(super) enum Tok {
    Ident(String),
    /// Literal with an optional `i` suffix already applied.
    Num(Scalar),
    /// Plain non-negative integer, kept for indices, orders and exponents.
    Int(usize),
    Comment(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Semi,
    Eq,
    Plus,
    Minus,
    Star,
    Caret,
    Arrow,
    Eof,
}

impl Tok {
    pub(super) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(c) => format!("number `{c}`"),
            Tok::Int(n) => format!("number `{n}`"),
            Tok::Comment(_) => "comment".into(),
            Tok::Eof => "end of input".into(),
            t => format!("`{}`", t.symbol()),
        }
    }

    pub(super) fn symbol(&self) -> &'static str {
        match self {
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Eq => "=",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Caret => "^",
            Tok::Arrow => "->",
            _ => "?",
        }
    }
}

pub(super) fn tokenize(src: &str) -> Result<Vec<(Tok, Span)>, Diagnostic> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let bump = |i: &mut usize, col: &mut usize, n: usize| {
        *i += n;
        *col += n;
    };
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, column: col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            bump(&mut i, &mut col, 1);
            continue;
        }
        if c == '#' {
            let start = i + 1;
            while i < chars.len() && chars[i] != '\n' {
                bump(&mut i, &mut col, 1);
            }
            let text: String = chars[start..i].iter().collect();
            out.push((Tok::Comment(text.strip_prefix(' ').unwrap_or(&text).trim_end().to_string()), span));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                bump(&mut i, &mut col, 1);
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), span));
            continue;
        }
        if c.is_ascii_digit() {
            let digits = |i: &mut usize, col: &mut usize| {
                let start = *i;
                while *i < chars.len() && chars[*i].is_ascii_digit() {
                    *i += 1;
                    *col += 1;
                }
                chars[start..*i].iter().collect::<String>()
            };
            let num = digits(&mut i, &mut col);
            let mut den = None;
            if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                bump(&mut i, &mut col, 1);
                den = Some(digits(&mut i, &mut col));
            }
            let imaginary = i < chars.len() && chars[i] == 'i';
            if imaginary {
                bump(&mut i, &mut col, 1);
            }
            if i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                return Err(Diagnostic::new(
                    Span { line, column: col },
                    "a number must not run into a name; write `*` for products",
                ));
            }
            let n: BigInt = num.parse().expect("digits");
            let d: BigInt = match &den {
                Some(s) => s.parse().expect("digits"),
                None => BigInt::from(1),
            };
            if d.is_zero() {
                return Err(Diagnostic::new(span, "zero denominator"));
            }
            let tok = match (&den, imaginary) {
                (None, false) => match num.parse::<usize>() {
                    Ok(v) => Tok::Int(v),
                    Err(_) => Tok::Num(Scalar::from(BigRational::from_integer(n))),
                },
                (_, false) => Tok::Num(Scalar::from(BigRational::new(n, d))),
                (_, true) => Tok::Num(Scalar::new(BigRational::zero(), BigRational::new(n, d))),
            };
            out.push((tok, span));
            continue;
        }
        let tok = match c {
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '=' => Tok::Eq,
            '+' => Tok::Plus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '-' if chars.get(i + 1) == Some(&'>') => {
                bump(&mut i, &mut col, 2);
                out.push((Tok::Arrow, span));
                continue;
            }
            '-' => Tok::Minus,
            _ => return Err(Diagnostic::new(span, format!("unexpected character `{c}`"))),
        };
        bump(&mut i, &mut col, 1);
        out.push((tok, span));
    }
    out.push((Tok::Eof, Span { line, column: col }));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<Tok> {
        tokenize(src).unwrap().into_iter().map(|(t, _)| t).collect()
    }

    #[test]
    fn literals() {
        assert_eq!(kinds("12")[0], Tok::Int(12));
        assert_eq!(kinds("3/2")[0], Tok::Num(Scalar::from_ratio(3, 2)));
        assert_eq!(kinds("2i")[0], Tok::Num(Scalar::new(BigRational::zero(), BigRational::from_integer(2.into()))));
        assert_eq!(kinds("a -> b")[1], Tok::Arrow);
        assert_eq!(kinds("a - b")[1], Tok::Minus);
    }

    #[test]
    fn positions_and_comments() {
        let toks = tokenize("# head\n  ab;\n").unwrap();
        assert_eq!(toks[0].0, Tok::Comment("head".into()));
        assert_eq!((toks[1].1.line, toks[1].1.column), (2, 3));
        assert_eq!((toks[2].1.line, toks[2].1.column), (2, 5));
    }

    #[test]
    fn juxtaposition_rejected() {
        let err = tokenize("x = 2a").unwrap_err();
        assert_eq!((err.span.line, err.span.column), (1, 6));
        assert!(tokenize("1/0").is_err());
        assert!(tokenize("a $ b").unwrap_err().message.contains('$'));
    }
}
