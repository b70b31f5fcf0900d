//! Recursive-descent parser for the identity language.
//!
//! ```text
//! identity := expr ("==" expr | "===" expr "mod" INT)
//! expr     := term (("+"|"-") term)*
//! term     := INT "*" chain | chain
//! chain    := factor (("*"|"/") factor)*
//! factor   := atom ("^" SIGNED_INT)?
//! atom     := INT | "q" ("^" INT)? | "f" INT | "psi" ("(" "q" "^" INT ")")?
//!           | "theta" "(" ["-"] "q" "^" INT "," ["-"] "q" "^" INT ")"
//!           | "RD" "(" INT "," INT "|" INT "n" "+" INT ")"
//!           | "auxA" | "auxB" | "dissectA" | "(" expr ")"
//! ```
//!
//! A term that opens with an integer literal followed by `*` is a scalar
//! multiple of the rest of the term.

use crate::error::{Error, Result};
use crate::special::{Sign, ThetaSpec};

use super::expr::Expr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Exact,
    CongruentMod(u64),
}

/// The two sides of a parsed identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedIdentity {
    pub lhs: Expr,
    pub rhs: Expr,
    pub relation: Relation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Pipe,
    Eq2,
    Eq3,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str, line0: usize, col0: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, line0, col0);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line: tl, column: tc });
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let v = s.parse::<u64>().map_err(|_| Error::Parse {
                line: tl,
                column: tc,
                message: format!("integer literal `{s}` out of range"),
            })?;
            col += i - start;
            push(&mut out, Tok::Int(v));
            continue;
        }
        if c.is_ascii_alphabetic() {
            // `f` followed by digits is a single name; `6n` lexes as INT then `n`
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            col += i - start;
            push(&mut out, Tok::Ident(chars[start..i].iter().collect()));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '|' => Tok::Pipe,
            '=' => {
                let run = chars[i..].iter().take_while(|&&x| x == '=').count();
                match run {
                    2 => Tok::Eq2,
                    3 => Tok::Eq3,
                    _ => {
                        return Err(Error::Parse {
                            line: tl,
                            column: tc,
                            message: "expected `==` or `===`".into(),
                        })
                    }
                }
            }
            other => {
                return Err(Error::Parse {
                    line: tl,
                    column: tc,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        let width = match tok {
            Tok::Eq2 => 2,
            Tok::Eq3 => 3,
            _ => 1,
        };
        i += width;
        col += width;
        push(&mut out, tok);
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let t = &self.tokens[self.pos];
        Error::Parse {
            line: t.line,
            column: t.column,
            message: message.into(),
        }
    }

    fn describe(tok: &Tok) -> String {
        match tok {
            Tok::Int(v) => format!("`{v}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::End => "end of input".into(),
            t => format!("{t:?}"),
        }
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {}, found {}", Self::describe(&want), Self::describe(self.peek()))))
        }
    }

    fn expect_int(&mut self) -> Result<u64> {
        match *self.peek() {
            Tok::Int(v) => {
                self.bump();
                Ok(v)
            }
            ref t => Err(self.error(format!("expected integer, found {}", Self::describe(t)))),
        }
    }

    fn expect_ident(&mut self, name: &str) -> Result<()> {
        match self.peek() {
            Tok::Ident(s) if s == name => {
                self.bump();
                Ok(())
            }
            t => Err(self.error(format!("expected `{name}`, found {}", Self::describe(t)))),
        }
    }

    fn identity(&mut self) -> Result<ParsedIdentity> {
        let lhs = self.expr()?;
        let relation = match self.peek() {
            Tok::Eq2 => {
                self.bump();
                None
            }
            Tok::Eq3 => {
                self.bump();
                Some(())
            }
            t => return Err(self.error(format!("expected `==` or `===`, found {}", Self::describe(t)))),
        };
        let rhs = self.expr()?;
        let relation = match relation {
            None => Relation::Exact,
            Some(()) => {
                self.expect_ident("mod")?;
                let m = self.expect_int()?;
                if m < 2 {
                    return Err(self.error("congruence modulus must be >= 2"));
                }
                Relation::CongruentMod(m)
            }
        };
        if *self.peek() != Tok::End {
            return Err(self.error(format!("unexpected {}", Self::describe(self.peek()))));
        }
        Ok(ParsedIdentity { lhs, rhs, relation })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = Expr::add(acc, self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = Expr::sub(acc, self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        if let (Tok::Int(c), Tok::Star) = (self.peek().clone(), self.peek_at(1)) {
            self.bump();
            self.bump();
            return Ok(Expr::scalar(c, self.chain()?));
        }
        self.chain()
    }

    fn chain(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = Expr::mul(acc, self.factor()?);
                }
                Tok::Slash => {
                    self.bump();
                    acc = Expr::div(acc, self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let negative = if *self.peek() == Tok::Minus {
                self.bump();
                true
            } else {
                false
            };
            let v = self.expect_int()?;
            let v = i64::try_from(v).map_err(|_| self.error("exponent out of range"))?;
            return Ok(Expr::pow(base, if negative { -v } else { v }));
        }
        Ok(base)
    }

    /// `q^INT` inside `psi(...)` and `theta(...)`.
    fn q_power(&mut self) -> Result<usize> {
        self.expect_ident("q")?;
        self.expect(Tok::Caret)?;
        Ok(self.expect_int()? as usize)
    }

    fn signed_q_power(&mut self) -> Result<(Sign, usize)> {
        let sign = if *self.peek() == Tok::Minus {
            self.bump();
            Sign::Minus
        } else {
            Sign::Plus
        };
        Ok((sign, self.q_power()?))
    }

    fn atom(&mut self) -> Result<Expr> {
        let token = self.bump();
        match token.tok {
            Tok::Int(v) => Ok(Expr::Int(v)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(ref name) => self.named_atom(name, &token),
            t => Err(Error::Parse {
                line: token.line,
                column: token.column,
                message: format!("expected an atom, found {}", Self::describe(&t)),
            }),
        }
    }

    fn named_atom(&mut self, name: &str, token: &Token) -> Result<Expr> {
        match name {
            "q" => {
                // `q^INT` is one atom; `q^-k` is a power of `q` (and fails at evaluation)
                if *self.peek() == Tok::Caret && matches!(self.peek_at(1), Tok::Int(_)) {
                    self.bump();
                    return Ok(Expr::QPower(self.expect_int()? as usize));
                }
                Ok(Expr::QPower(1))
            }
            "psi" => {
                if *self.peek() == Tok::LParen {
                    self.bump();
                    let k = self.q_power()?;
                    self.expect(Tok::RParen)?;
                    if k == 0 {
                        return Err(self.error("psi(q^k) needs k >= 1"));
                    }
                    return Ok(Expr::Psi(k));
                }
                Ok(Expr::Psi(1))
            }
            "theta" => {
                self.expect(Tok::LParen)?;
                let (a_sign, a_exp) = self.signed_q_power()?;
                self.expect(Tok::Comma)?;
                let (b_sign, b_exp) = self.signed_q_power()?;
                self.expect(Tok::RParen)?;
                let spec = ThetaSpec::new(a_sign, a_exp, b_sign, b_exp).map_err(|e| Error::Parse {
                    line: token.line,
                    column: token.column,
                    message: e.to_string(),
                })?;
                Ok(Expr::Theta(spec))
            }
            "RD" => {
                self.expect(Tok::LParen)?;
                let ell = self.expect_int()? as usize;
                self.expect(Tok::Comma)?;
                let t = self.expect_int()? as usize;
                self.expect(Tok::Pipe)?;
                let m = self.expect_int()? as usize;
                self.expect_ident("n")?;
                self.expect(Tok::Plus)?;
                let r = self.expect_int()? as usize;
                self.expect(Tok::RParen)?;
                let at = |message: &str| Error::Parse {
                    line: token.line,
                    column: token.column,
                    message: message.into(),
                };
                if ell < 2 || t < 2 {
                    return Err(at("RD needs ell, t >= 2"));
                }
                if m == 0 || r >= m {
                    return Err(at("RD progression needs m >= 1 and 0 <= r < m"));
                }
                Ok(Expr::RdExtract { ell, t, m, r })
            }
            "auxA" => Ok(Expr::AuxA),
            "auxB" => Ok(Expr::AuxB),
            "dissectA" => Ok(Expr::DissectA),
            _ => {
                if let Some(k) = name.strip_prefix('f').and_then(|d| d.parse::<usize>().ok()) {
                    if k >= 1 && name[1..].chars().all(|c| c.is_ascii_digit()) {
                        return Ok(Expr::EtaF(k));
                    }
                }
                Err(Error::UnknownSymbol {
                    name: name.to_string(),
                    line: token.line,
                    column: token.column,
                })
            }
        }
    }
}

/// Parses `lhs == rhs` or `lhs === rhs mod m`.
pub fn parse_identity(text: &str) -> Result<ParsedIdentity> {
    parse_identity_at(text, 1, 1)
}

/// As [`parse_identity`], reporting positions relative to `(line, column)`.
pub fn parse_identity_at(text: &str, line: usize, column: usize) -> Result<ParsedIdentity> {
    let tokens = lex(text, line, column)?;
    Parser { tokens, pos: 0 }.identity()
}

/// Parses a single expression.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let tokens = lex(text, 1, 1)?;
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error(format!("unexpected {}", Parser::describe(p.peek()))));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_two_dissection() {
        let p = parse_identity("f3^3/f1 == f4^3*f6^2/(f2^2*f12) + q*f12^3/f4").unwrap();
        assert_eq!(p.relation, Relation::Exact);
        assert_eq!(p.lhs, Expr::div(Expr::pow(Expr::EtaF(3), 3), Expr::EtaF(1)));
        let expected = Expr::add(
            Expr::eta_quotient(&[(4, 3), (6, 2), (2, -2), (12, -1)]),
            Expr::shifted(1, Expr::eta_quotient(&[(12, 3), (4, -1)])),
        );
        assert_eq!(p.rhs, expected);
    }

    #[test]
    fn parses_trivial_and_congruence() {
        let p = parse_identity("f1 == f1").unwrap();
        assert_eq!((p.lhs, p.rhs), (Expr::EtaF(1), Expr::EtaF(1)));
        let p = parse_identity("RD(4,9|6n+2) === 2*f1^4 mod 6").unwrap();
        assert_eq!(p.relation, Relation::CongruentMod(6));
        assert_eq!(p.lhs, Expr::RdExtract { ell: 4, t: 9, m: 6, r: 2 });
        assert_eq!(p.rhs, Expr::scalar(2, Expr::pow(Expr::EtaF(1), 4)));
    }

    #[test]
    fn whitespace_insensitive() {
        let a = parse_identity("RD( 4 , 9 | 6 n + 2 )===2 * f1 ^ 4 mod 6").unwrap();
        let b = parse_identity("RD(4,9|6n+2) === 2*f1^4 mod 6").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn atoms() {
        assert_eq!(parse_expr("q^5").unwrap(), Expr::QPower(5));
        assert_eq!(parse_expr("psi(q^3)").unwrap(), Expr::Psi(3));
        assert_eq!(parse_expr("f1^-8").unwrap(), Expr::pow(Expr::EtaF(1), -8));
        assert_eq!(
            parse_expr("theta(-q^2,-q^1)").unwrap(),
            Expr::Theta(ThetaSpec::minus(2, 1).unwrap())
        );
        assert_eq!(parse_expr("(q)^2").unwrap(), Expr::pow(Expr::QPower(1), 2));
        assert_eq!(parse_expr("1/f1").unwrap(), Expr::div(Expr::Int(1), Expr::EtaF(1)));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_identity("f1 == f2 +") {
            Err(Error::Parse { line: 1, column: 11, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_identity("f1\n == (f2") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_identity("f1 = f1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_identity("f1 === f1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_identity("f1 === f1 mod 1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_identity("RD(4,9|6n+6) == f1"), Err(Error::Parse { .. })));
    }

    #[test]
    fn unknown_symbols() {
        match parse_identity("f1 == g2") {
            Err(Error::UnknownSymbol { name, line: 1, column: 7 }) => assert_eq!(name, "g2"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expr("f0"), Err(Error::UnknownSymbol { .. })));
        assert!(matches!(parse_expr("fx1"), Err(Error::UnknownSymbol { .. })));
    }
}
