//! Abstract syntax for series identities and its canonical printer.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::special::{Sign, ThetaSpec};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Expr {
    Int(u64),
    /// `q^j`
    QPower(usize),
    /// `f_k`
    EtaF(usize),
    /// `psi(q^k)`
    Psi(usize),
    Theta(ThetaSpec),
    /// The 5-dissection factor `a` of `f_1`.
    DissectA,
    /// `sum_n RD^(ell,t)(m n + r) q^n`
    RdExtract {
        ell: usize,
        t: usize,
        m: usize,
        r: usize,
    },
    /// `f_1^2`
    AuxA,
    /// `psi(q) psi(q^3)`
    AuxB,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    ScalarMul(u64, Box<Expr>),
}

impl Expr {
    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Expr, e: i64) -> Expr {
        Expr::Pow(Box::new(a), e)
    }

    pub fn scalar(c: u64, e: Expr) -> Expr {
        Expr::ScalarMul(c, Box::new(e))
    }

    /// `q^j * e`, or just `e` when `j = 0`. The power of `q` goes to the
    /// front of a product chain, the shape the parser produces for `q^j*a/b`.
    pub fn shifted(j: usize, e: Expr) -> Expr {
        match e {
            e if j == 0 => e,
            Expr::Mul(a, b) => Expr::Mul(Box::new(Expr::shifted(j, *a)), b),
            Expr::Div(a, b) => Expr::Div(Box::new(Expr::shifted(j, *a)), b),
            e => Expr::mul(Expr::QPower(j), e),
        }
    }

    /// Product of `f_k^e` factors, numerator over denominator.
    pub fn eta_quotient(factors: &[(usize, i64)]) -> Expr {
        let power = |k: usize, e: i64| if e == 1 { Expr::EtaF(k) } else { Expr::pow(Expr::EtaF(k), e) };
        let product = |items: Vec<Expr>| items.into_iter().reduce(Expr::mul);
        let num = product(factors.iter().filter(|f| f.1 > 0).map(|&(k, e)| power(k, e)).collect());
        let den = product(factors.iter().filter(|f| f.1 < 0).map(|&(k, e)| power(k, -e)).collect());
        match (num, den) {
            (Some(n), Some(d)) => Expr::div(n, d),
            (Some(n), None) => n,
            (None, Some(d)) => Expr::div(Expr::Int(1), d),
            (None, None) => Expr::Int(1),
        }
    }

    /// The deepest truncation order any atom needs when the whole
    /// expression is evaluated to `terms` coefficients.
    pub fn required_depth(&self, terms: usize) -> usize {
        match self {
            Expr::RdExtract { m, r, .. } => m * terms + r,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.required_depth(terms).max(b.required_depth(terms))
            }
            Expr::Pow(a, _) | Expr::ScalarMul(_, a) => a.required_depth(terms),
            _ => terms,
        }
    }

    fn is_sum(&self) -> bool {
        matches!(self, Expr::Add(..) | Expr::Sub(..))
    }

    fn is_product(&self) -> bool {
        matches!(self, Expr::Mul(..) | Expr::Div(..))
    }

    fn fmt_sum(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.fmt_sum(f)?;
                f.write_str(if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                if b.is_sum() {
                    f.write_str("(")?;
                    b.fmt_sum(f)?;
                    f.write_str(")")
                } else {
                    b.fmt_term(f)
                }
            }
            _ => self.fmt_term(f),
        }
    }

    fn fmt_term(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::ScalarMul(c, e) => {
                write!(f, "{c}*")?;
                e.fmt_chain(f)
            }
            _ => self.fmt_chain(f),
        }
    }

    /// A left-associated run of `*` and `/`.
    fn fmt_chain(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                let op = if matches!(self, Expr::Mul(..)) { "*" } else { "/" };
                match a.as_ref() {
                    a if a.is_product() => a.fmt_chain(f)?,
                    // a bare integer before `*` would read back as a scalar multiple
                    Expr::Int(n) if op == "*" => write!(f, "({n})")?,
                    a => a.fmt_factor(f)?,
                }
                f.write_str(op)?;
                b.fmt_factor(f)
            }
            _ => self.fmt_factor(f),
        }
    }

    fn fmt_factor(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Pow(base, e) => {
                match base.as_ref() {
                    Expr::QPower(_) => {
                        f.write_str("(")?;
                        base.fmt_atom(f)?;
                        f.write_str(")")?;
                    }
                    b if b.is_atom() => b.fmt_atom(f)?,
                    b => {
                        f.write_str("(")?;
                        b.fmt_sum(f)?;
                        f.write_str(")")?;
                    }
                }
                write!(f, "^{e}")
            }
            e if e.is_atom() => e.fmt_atom(f),
            e => {
                f.write_str("(")?;
                e.fmt_sum(f)?;
                f.write_str(")")
            }
        }
    }

    fn is_atom(&self) -> bool {
        !matches!(
            self,
            Expr::Add(..) | Expr::Sub(..) | Expr::Mul(..) | Expr::Div(..) | Expr::Pow(..) | Expr::ScalarMul(..)
        )
    }

    fn fmt_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::QPower(1) => f.write_str("q"),
            Expr::QPower(j) => write!(f, "q^{j}"),
            Expr::EtaF(k) => write!(f, "f{k}"),
            Expr::Psi(1) => f.write_str("psi"),
            Expr::Psi(k) => write!(f, "psi(q^{k})"),
            Expr::Theta(spec) => {
                let sign = |s: Sign| if s == Sign::Minus { "-" } else { "" };
                write!(
                    f,
                    "theta({}q^{},{}q^{})",
                    sign(spec.a_sign),
                    spec.a_exp,
                    sign(spec.b_sign),
                    spec.b_exp
                )
            }
            Expr::DissectA => f.write_str("dissectA"),
            Expr::RdExtract { ell, t, m, r } => write!(f, "RD({ell},{t}|{m}n+{r})"),
            Expr::AuxA => f.write_str("auxA"),
            Expr::AuxB => f.write_str("auxB"),
            _ => unreachable!("not an atom"),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_sum(f)
    }
}
