//! Line-based model files.
//!
//! ```text
//! # complex projective plane
//! name "cp2"
//! generator x 2
//! generator y 5
//! d y = x^3
//! ```
//!
//! One statement per line; `#` starts a comment. Generators must be declared
//! before a `d` line uses them, and generators without a `d` line are cocycles.
//! Coefficients are integers or fractions `p/q`; a product is evaluated in
//! the order written, so `y*x` for odd `x`, `y` means `-x*y`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::dga::SullivanPresentation;
use crate::error::{Error, Result};
use crate::gca::{Generator, Polynomial};
use crate::linalg::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Str(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Eq,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn tokenize(text: &str, line: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            break;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '/' => Some(Tok::Slash),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token { tok, column });
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Token {
                tok: Tok::Int(digits.parse().expect("ascii digits")),
                column,
            });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                column,
            });
            continue;
        }
        if c == '"' {
            let mut s = String::new();
            i += 1;
            loop {
                match chars.get(i) {
                    None => return Err(syntax(line, column, "unterminated string")),
                    Some('"') => break,
                    Some('\\') => {
                        match chars.get(i + 1) {
                            Some(&e @ ('"' | '\\')) => s.push(e),
                            _ => return Err(syntax(line, i + 1, "invalid escape in string")),
                        }
                        i += 2;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                    }
                }
            }
            i += 1;
            out.push(Token {
                tok: Tok::Str(s),
                column,
            });
            continue;
        }
        return Err(syntax(line, column, format!("unexpected character `{c}`")));
    }
    Ok(out)
}

/// A factor `name^exp` as written, with its column for error reporting.
#[derive(Clone, Debug)]
struct Factor {
    name: String,
    exponent: u32,
    column: usize,
}

#[derive(Clone, Debug)]
struct Term {
    coeff: Q,
    factors: Vec<Factor>,
}

struct TermParser<'a> {
    tokens: &'a [Token],
    pos: usize,
    line: usize,
    end_column: usize,
}

impl<'a> TermParser<'a> {
    fn peek(&self) -> Option<&'a Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn column(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map_or(self.end_column, |t| t.column)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        syntax(self.line, self.column(), msg)
    }

    fn nat(&mut self) -> Result<BigInt> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.err("expected a natural number")),
        }
    }

    fn factor(&mut self) -> Result<Factor> {
        let column = self.column();
        let name = match self.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return Err(self.err("expected a generator name")),
        };
        self.pos += 1;
        let mut exponent = 1;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let col = self.column();
            let n = self.nat()?;
            exponent =
                u32::try_from(n).map_err(|_| syntax(self.line, col, "exponent too large"))?;
        }
        Ok(Factor {
            name,
            exponent,
            column,
        })
    }

    fn term(&mut self) -> Result<Term> {
        let mut coeff = Q::one();
        let mut factors = Vec::new();
        if let Some(Tok::Int(_)) = self.peek() {
            let num = self.nat()?;
            let mut den = BigInt::one();
            if self.peek() == Some(&Tok::Slash) {
                self.pos += 1;
                let col = self.column();
                den = self.nat()?;
                if den.is_zero() {
                    return Err(syntax(self.line, col, "zero denominator"));
                }
            }
            coeff = Q::new(num, den);
            while self.peek() == Some(&Tok::Star) {
                self.pos += 1;
                factors.push(self.factor()?);
            }
        } else {
            factors.push(self.factor()?);
            while self.peek() == Some(&Tok::Star) {
                self.pos += 1;
                factors.push(self.factor()?);
            }
        }
        Ok(Term { coeff, factors })
    }

    /// polyexpr := ["-"|"+"] term (("+"|"-") term)*
    fn polyexpr(&mut self) -> Result<Vec<Term>> {
        let mut terms = Vec::new();
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        loop {
            let mut t = self.term()?;
            if negate {
                t.coeff = -t.coeff;
            }
            terms.push(t);
            match self.peek() {
                Some(Tok::Plus) => negate = false,
                Some(Tok::Minus) => negate = true,
                None => break,
                Some(_) => return Err(self.err("expected `+`, `-` or end of expression")),
            }
            self.pos += 1;
        }
        Ok(terms)
    }
}

/// Evaluates parsed terms in ΛV. `resolve` maps a factor to a generator id.
/// Returns the polynomial and whether an odd generator was raised to a power ≥ 2.
fn evaluate(
    gens: &[Generator],
    terms: &[Term],
    mut resolve: impl FnMut(&Factor) -> Result<usize>,
) -> Result<(Polynomial, bool)> {
    let n = gens.len();
    let mut odd_power = false;
    let mut total = Polynomial::zero();
    for t in terms {
        let mut acc = Polynomial::one(n).scale(&t.coeff);
        for f in &t.factors {
            let id = resolve(f)?;
            if gens[id].is_odd() && f.exponent >= 2 {
                odd_power = true;
            }
            let g = Polynomial::generator(n, id);
            acc = acc.mul(gens, &g.pow(gens, f.exponent, n));
        }
        total = total.add(&acc);
    }
    Ok((total, odd_power))
}

/// Parses an element of ΛV written over the generators of `context`.
pub fn parse_polynomial(text: &str, context: &SullivanPresentation) -> Result<Polynomial> {
    parse_polynomial_flagged(text, context).map(|(p, _)| p)
}

/// Like [`parse_polynomial`], also reporting whether an odd generator was
/// raised to a power ≥ 2 (such terms denote zero).
pub fn parse_polynomial_flagged(
    text: &str,
    context: &SullivanPresentation,
) -> Result<(Polynomial, bool)> {
    if text.contains('\n') {
        return Err(syntax(
            1,
            text.find('\n').unwrap() + 1,
            "expected a single line",
        ));
    }
    let tokens = tokenize(text, 1)?;
    let mut tp = TermParser {
        tokens: &tokens,
        pos: 0,
        line: 1,
        end_column: text.chars().count() + 1,
    };
    let terms = tp.polyexpr()?;
    evaluate(context.generators(), &terms, |f| {
        context
            .generator_id(&f.name)
            .ok_or_else(|| syntax(1, f.column, format!("unknown generator `{}`", f.name)))
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParseWarnings {
    /// Lines of `d` statements where an odd generator was raised to a power ≥ 2.
    pub odd_powers: Vec<usize>,
}

pub fn parse_model(text: &str) -> Result<SullivanPresentation> {
    parse_model_with_warnings(text).map(|(p, _)| p)
}

pub fn parse_model_with_warnings(text: &str) -> Result<(SullivanPresentation, ParseWarnings)> {
    let mut name = None;
    let mut gens: Vec<Generator> = Vec::new();
    let mut declared: HashMap<String, (usize, usize)> = HashMap::new(); // name -> (id, line)
    let mut diffs: Vec<(usize, String, usize, Vec<Term>)> = Vec::new(); // (line, target, column, terms)

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let tokens = tokenize(raw, line)?;
        let Some(first) = tokens.first() else {
            continue;
        };
        let end_column = raw.chars().count() + 1;
        let col_at = |i: usize| tokens.get(i).map_or(end_column, |t| t.column);
        match &first.tok {
            Tok::Ident(kw) if kw == "name" => match tokens.get(1).map(|t| &t.tok) {
                Some(Tok::Str(s)) if tokens.len() == 2 => name = Some(s.clone()),
                Some(Tok::Str(_)) => return Err(syntax(line, col_at(2), "unexpected token")),
                _ => return Err(syntax(line, col_at(1), "expected a quoted name")),
            },
            Tok::Ident(kw) if kw == "generator" => {
                let gname = match tokens.get(1).map(|t| &t.tok) {
                    Some(Tok::Ident(s)) => s.clone(),
                    _ => return Err(syntax(line, col_at(1), "expected a generator name")),
                };
                let degree = match tokens.get(2).map(|t| &t.tok) {
                    Some(Tok::Int(n)) => u32::try_from(n.clone())
                        .map_err(|_| syntax(line, col_at(2), "degree too large"))?,
                    _ => return Err(syntax(line, col_at(2), "expected a degree")),
                };
                if tokens.len() > 3 {
                    return Err(syntax(line, col_at(3), "unexpected token"));
                }
                if degree < 2 {
                    return Err(syntax(
                        line,
                        col_at(2),
                        "generator degree must be at least 2",
                    ));
                }
                if declared.contains_key(&gname) {
                    return Err(Error::DuplicateGenerator { name: gname, line });
                }
                declared.insert(gname.clone(), (gens.len(), line));
                gens.push(Generator::new(gname, degree));
            }
            Tok::Ident(kw) if kw == "d" => {
                let (target, tcol) = match tokens.get(1) {
                    Some(Token {
                        tok: Tok::Ident(s),
                        column,
                    }) => (s.clone(), *column),
                    _ => return Err(syntax(line, col_at(1), "expected a generator name")),
                };
                if tokens.get(2).map(|t| &t.tok) != Some(&Tok::Eq) {
                    return Err(syntax(line, col_at(2), "expected `=`"));
                }
                let mut tp = TermParser {
                    tokens: &tokens[3..],
                    pos: 0,
                    line,
                    end_column,
                };
                let terms = tp.polyexpr()?;
                diffs.push((line, target, tcol, terms));
            }
            _ => {
                return Err(syntax(
                    line,
                    first.column,
                    "expected `name`, `generator` or `d`",
                ))
            }
        }
    }

    let n = gens.len();
    let mut differentials = vec![Polynomial::zero(); n];
    let mut assigned = vec![false; n];
    let mut warnings = ParseWarnings::default();
    for (line, target, _tcol, terms) in &diffs {
        let line = *line;
        let lookup = |name: &str| match declared.get(name) {
            Some(&(id, decl_line)) if decl_line < line => Ok(id),
            _ => Err(Error::UndeclaredGenerator {
                name: name.to_string(),
                line,
            }),
        };
        let id = lookup(target)?;
        if assigned[id] {
            return Err(Error::DuplicateDifferential {
                name: target.clone(),
                line,
            });
        }
        assigned[id] = true;
        let (poly, odd) = evaluate(&gens, terms, |f| lookup(&f.name))?;
        if odd {
            warnings.odd_powers.push(line);
        }
        differentials[id] = poly;
    }
    let p = SullivanPresentation::new(name, gens, differentials)?;
    Ok((p, warnings))
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Writes the presentation in the model file format; generators appear in
/// their canonical (degree-sorted) order, so parsing the output reproduces
/// the presentation exactly.
pub fn serialize_model(p: &SullivanPresentation) -> String {
    let mut out = String::new();
    if let Some(name) = p.name() {
        out.push_str(&format!("name {}\n", quote(name)));
    }
    for g in p.generators() {
        out.push_str(&format!("generator {} {}\n", g.name, g.degree));
    }
    for (i, g) in p.generators().iter().enumerate() {
        let d = p.differential(i);
        if !d.is_zero() {
            out.push_str(&format!("d {} = {}\n", g.name, d.display(p.generators())));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gca::Monomial;
    use crate::linalg::q;

    #[test]
    fn reads_simple_model() {
        let p = parse_model("generator x 2\ngenerator y 3\nd y = x^2").unwrap();
        assert_eq!(p.arity(), 2);
        assert_eq!(
            p.differential(1),
            &Polynomial::monomial(Monomial::from_exponents(vec![2, 0]), q(1))
        );
        assert!(p.differential(0).is_zero());
    }

    #[test]
    fn undeclared_generator() {
        let err = parse_model("generator x 2\nd y = x^2").unwrap_err();
        assert_eq!(
            err,
            Error::UndeclaredGenerator {
                name: "y".into(),
                line: 2
            }
        );
    }

    #[test]
    fn use_before_declaration_is_undeclared() {
        let err = parse_model("generator y 3\nd y = x^2\ngenerator x 2").unwrap_err();
        assert!(matches!(err, Error::UndeclaredGenerator { ref name, line: 2 } if name == "x"));
    }

    #[test]
    fn default_zero_differential() {
        let p = parse_model("generator x 3").unwrap();
        assert_eq!(p.arity(), 1);
        assert!(p.differential(0).is_zero());
    }

    #[test]
    fn duplicates() {
        assert!(matches!(
            parse_model("generator x 2\ngenerator x 3"),
            Err(Error::DuplicateGenerator { line: 2, .. })
        ));
        assert!(matches!(
            parse_model("generator x 2\ngenerator y 3\nd y = x^2\nd y = 2*x^2"),
            Err(Error::DuplicateDifferential { line: 4, .. })
        ));
    }

    #[test]
    fn syntax_error_position() {
        let err = parse_model("generator x 2\ngenerator y 3\nd y = x^ + 1").unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                line: 3,
                column: 10,
                message: "expected a natural number".into()
            }
        );
        assert!(matches!(
            parse_model("generator x 1"),
            Err(Error::Syntax {
                line: 1,
                column: 13,
                ..
            })
        ));
        assert!(matches!(
            parse_model("generator x 2 $"),
            Err(Error::Syntax {
                line: 1,
                column: 15,
                ..
            })
        ));
    }

    #[test]
    fn comments_and_blank_lines() {
        let p = parse_model(
            "# header\n\nname \"s2\"  # trailing\ngenerator x 2\n  generator   y 3 \nd y=x^2 # dy",
        )
        .unwrap();
        assert_eq!(p.name(), Some("s2"));
        assert_eq!(p.arity(), 2);
    }

    #[test]
    fn polynomial_examples() {
        let ctx = parse_model("generator x 2\ngenerator y 2").unwrap();
        let p = parse_polynomial("x^2 + 3*x*y", &ctx).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.coefficient(&Monomial::from_exponents(vec![2, 0])), q(1));
        assert_eq!(p.coefficient(&Monomial::from_exponents(vec![1, 1])), q(3));

        let p = parse_polynomial("1/2 * x^3 - x^3", &ctx).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(
            p.coefficient(&Monomial::from_exponents(vec![3, 0])),
            Q::new((-1).into(), 2.into())
        );

        let odd = parse_model("generator y 3").unwrap();
        let (p, flagged) = parse_polynomial_flagged("y^2", &odd).unwrap();
        assert!(p.is_zero());
        assert!(flagged);

        assert!(matches!(
            parse_polynomial("x*q", &ctx),
            Err(Error::Syntax { column: 3, .. })
        ));
    }

    #[test]
    fn written_order_sign() {
        let ctx = parse_model("generator y 3\ngenerator z 3").unwrap();
        let a = parse_polynomial("z*y", &ctx).unwrap();
        let b = parse_polynomial("-y*z", &ctx).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn serialize_examples() {
        let s3 = parse_model("name \"sphere-S3\"\ngenerator x 3").unwrap();
        assert_eq!(serialize_model(&s3), "name \"sphere-S3\"\ngenerator x 3\n");
        let cp2 = parse_model("generator x 2\ngenerator y 5\nd y = x^3").unwrap();
        let text = serialize_model(&cp2);
        assert_eq!(text, "generator x 2\ngenerator y 5\nd y = x^3\n");
        assert_eq!(parse_model(&text).unwrap(), cp2);
    }

    #[test]
    fn quoted_names_round_trip() {
        let p = parse_model("name \"a \\\"b\\\" \\\\ c\"\ngenerator x 3").unwrap();
        assert_eq!(p.name(), Some("a \"b\" \\ c"));
        assert_eq!(parse_model(&serialize_model(&p)).unwrap(), p);
    }
}
