use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::series::TruncatedSeries;
use crate::special::{self, EtaQuotientSpec};

use super::expr::Expr;

/// Evaluates `expr` to `order` coefficients in `ring`.
///
/// Atoms are built directly at `order`, except `RD(ℓ,t|mn+r)`, whose
/// generating function is expanded to `m*order + r` before extraction.
/// Failures name the innermost subexpression that raised them.
pub fn evaluate<R: Ring>(expr: &Expr, order: usize, ring: &R) -> Result<TruncatedSeries<R>> {
    let here = |e: Error| match e {
        e @ Error::Eval { .. } => e,
        e => Error::Eval {
            expr: expr.to_string(),
            source: Box::new(e),
        },
    };
    let r = ring.clone();
    let out = match expr {
        Expr::Int(v) => TruncatedSeries::constant(r, order, ring.from_bigint(&(*v).into())),
        Expr::QPower(j) => TruncatedSeries::monomial(r, order, *j),
        Expr::EtaF(k) => special::eta_f(*k, order, r),
        Expr::Psi(k) => special::psi_power(*k, order, r),
        Expr::Theta(spec) => special::theta_f(spec, order, r),
        Expr::DissectA => special::five_dissection_a(order, r).map_err(here)?,
        Expr::RdExtract { ell, t, m, r: residue } => {
            let spec = EtaQuotientSpec::regular_distinct(*ell, *t);
            special::eta_quotient(&spec, m * order + residue, r)
                .and_then(|s| s.extract_progression(*m, *residue))
                .map_err(here)?
                .truncate(order)
        }
        Expr::AuxA => special::eta_quotient(&EtaQuotientSpec::new([(1, 2)]), order, r).map_err(here)?,
        Expr::AuxB => special::psi(order, r.clone())
            .mul(&special::psi_power(3, order, r))
            .map_err(here)?,
        Expr::Add(a, b) => evaluate(a, order, ring)?.add(&evaluate(b, order, ring)?).map_err(here)?,
        Expr::Sub(a, b) => evaluate(a, order, ring)?.sub(&evaluate(b, order, ring)?).map_err(here)?,
        Expr::Mul(a, b) => evaluate(a, order, ring)?.mul(&evaluate(b, order, ring)?).map_err(here)?,
        Expr::Div(a, b) => evaluate(a, order, ring)?.div(&evaluate(b, order, ring)?).map_err(here)?,
        Expr::Pow(a, e) => evaluate(a, order, ring)?.pow(*e).map_err(here)?,
        Expr::ScalarMul(c, a) => evaluate(a, order, ring)?.scale(&ring.from_bigint(&(*c).into())),
    };
    Ok(out)
}
