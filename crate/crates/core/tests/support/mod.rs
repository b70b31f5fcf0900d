//! Randomized property checks shared by the property tests and the
//! acceptance harness. Each runs `cases` trials and returns the first
//! failure, shrunk.

#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use rdq::catalog::{builtin_catalog, parse_expr, Expr};
use rdq::partition::{count_distinct, count_regular};
use rdq::special::{is_prime, legendre, Sign, ThetaSpec};
use rdq::{BigInt, ExactSeries, Integers, ModSeries, Modular, TruncatedSeries};

pub type Outcome = Result<(), String>;

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Outcome {
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

pub fn exact(coeffs: &[i64]) -> ExactSeries {
    TruncatedSeries::from_i64s(Integers::new(), coeffs)
}

fn same_order_triple(max_order: usize) -> impl Strategy<Value = (Vec<i64>, Vec<i64>, Vec<i64>)> {
    (0..=max_order).prop_flat_map(|n| {
        let v = || prop::collection::vec(-50i64..50, n);
        (v(), v(), v())
    })
}

fn check(cond: bool, what: &str) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(what.to_string()))
    }
}

fn ring_axioms_for<R: rdq::Ring>(a: &TruncatedSeries<R>, b: &TruncatedSeries<R>, c: &TruncatedSeries<R>) -> Result<(), TestCaseError> {
    let ring = a.ring().clone();
    let n = a.order();
    let one = TruncatedSeries::one(ring.clone(), n);
    let zero = TruncatedSeries::zero(ring, n);
    let e = |r: rdq::Result<TruncatedSeries<R>>| r.map_err(|e| TestCaseError::fail(e.to_string()));
    check(e(e(a.add(b))?.add(c))? == e(a.add(&e(b.add(c))?))?, "addition is associative")?;
    check(e(a.add(b))? == e(b.add(a))?, "addition is commutative")?;
    check(e(a.add(&zero))? == *a, "zero is additive identity")?;
    check(e(a.sub(a))? == zero, "a - a = 0")?;
    check(e(a.add(&a.neg()))? == zero, "a + (-a) = 0")?;
    check(e(e(a.mul(b))?.mul(c))? == e(a.mul(&e(b.mul(c))?))?, "multiplication is associative")?;
    check(e(a.mul(b))? == e(b.mul(a))?, "multiplication is commutative")?;
    check(e(a.mul(&one))? == *a, "one is multiplicative identity")?;
    check(
        e(a.mul(&e(b.add(c))?))? == e(e(a.mul(b))?.add(&e(a.mul(c))?))?,
        "multiplication distributes over addition",
    )?;
    if let Ok(inv) = b.invert() {
        check(e(b.mul(&inv))? == one, "b * b^-1 = 1")?;
        check(e(e(a.div(b))?.mul(b))? == *a, "(a / b) * b = a")?;
    }
    Ok(())
}

/// Commutative ring axioms for truncated series over `Z` and `Z/mZ`.
pub fn ring_axioms(cases: u32) -> Outcome {
    run(cases, (same_order_triple(64), 2u64..40, any::<bool>()), |((x, y, z), m, unit)| {
        let mut y = y;
        if unit && !y.is_empty() {
            y[0] = 1;
        }
        let (a, b, c) = (exact(&x), exact(&y), exact(&z));
        ring_axioms_for(&a, &b, &c)?;
        let r = |s: &ExactSeries| -> ModSeries { s.reduce_mod(m).unwrap() };
        ring_axioms_for(&r(&a), &r(&b), &r(&c))
    })
}

/// `s = sum_r q^r * E_{m,r}(s)(q^m)` up to the valid order.
pub fn dissection_completeness(cases: u32) -> Outcome {
    run(cases, (prop::collection::vec(-1000i64..1000, 0..120), 1usize..12), |(v, m)| {
        let s = exact(&v);
        let n = s.order();
        let mut acc = TruncatedSeries::zero(Integers::new(), n);
        for r in 0..m {
            let part = s.extract_progression(m, r).unwrap().substitute_power(m).unwrap();
            let part = part.shift(r);
            let part = if part.order() >= n {
                part.truncate(n)
            } else {
                // a short component only happens when it has no terms below n
                let mut c = part.into_coeffs();
                c.resize(n, BigInt::from(0));
                TruncatedSeries::from_coeffs(Integers::new(), c)
            };
            acc = acc.add(&part).unwrap();
        }
        check(acc == s, "components reassemble the series")
    })
}

/// Extraction is linear: `E(a + b) = E(a) + E(b)`, `E(c a) = c E(a)`.
pub fn extract_linearity(cases: u32) -> Outcome {
    run(
        cases,
        (same_order_triple(150), 1usize..10, 0usize..10, -20i64..20),
        |((x, y, _), m, r, c)| {
            let r = r % m;
            let (a, b) = (exact(&x), exact(&y));
            let e = |s: &ExactSeries| s.extract_progression(m, r).unwrap();
            check(e(&a.add(&b).unwrap()) == e(&a).add(&e(&b)).unwrap(), "additive")?;
            let k = BigInt::from(c);
            check(e(&a.scale(&k)) == e(&a).scale(&k), "homogeneous")
        },
    )
}

/// Reduction mod m commutes with `+`, `*` and, for unit leading terms, `/`.
pub fn reduce_mod_homomorphism(cases: u32) -> Outcome {
    run(cases, (same_order_triple(80), 2u64..100), |((x, y, _), m)| {
        let mut y = y;
        if let Some(c) = y.first_mut() {
            *c = 1;
        }
        let (a, b) = (exact(&x), exact(&y));
        let r = |s: &ExactSeries| s.reduce_mod(m).unwrap();
        check(r(&a.add(&b).unwrap()) == r(&a).add(&r(&b)).unwrap(), "sum")?;
        check(r(&a.mul(&b).unwrap()) == r(&a).mul(&r(&b)).unwrap(), "product")?;
        check(r(&a.div(&b).unwrap()) == r(&a).div(&r(&b)).unwrap(), "quotient")
    })
}

fn arb_theta() -> impl Strategy<Value = ThetaSpec> {
    let sign = prop_oneof![Just(Sign::Plus), Just(Sign::Minus)];
    (sign.clone(), 0usize..30, sign, 1usize..30).prop_map(|(sa, a, sb, b)| ThetaSpec::new(sa, a, sb, b).unwrap())
}

pub fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0u64..60).prop_map(Expr::Int),
        (0usize..8).prop_map(Expr::QPower),
        (1usize..40).prop_map(Expr::EtaF),
        (1usize..6).prop_map(Expr::Psi),
        arb_theta().prop_map(Expr::Theta),
        Just(Expr::DissectA),
        Just(Expr::AuxA),
        Just(Expr::AuxB),
        (2usize..10, 2usize..10, 1usize..60, 0usize..60)
            .prop_map(|(ell, t, m, r)| Expr::RdExtract { ell, t, m, r: r % m }),
    ];
    leaf.prop_recursive(5, 48, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::div(a, b)),
            (inner.clone(), -6i64..7).prop_map(|(a, e)| Expr::pow(a, e)),
            (0u64..100, inner).prop_map(|(c, a)| Expr::scalar(c, a)),
        ]
    })
}

/// `parse(print(e)) = e` for random trees and for every catalog entry.
pub fn parser_round_trip(cases: u32) -> Outcome {
    for entry in builtin_catalog() {
        for side in [&entry.lhs, &entry.rhs] {
            let text = side.to_string();
            match parse_expr(&text) {
                Ok(back) if back == *side => {}
                other => return Err(format!("{}: `{text}` re-parsed as {other:?}", entry.id)),
            }
        }
    }
    run(cases, arb_expr(), |e| {
        let text = e.to_string();
        let back = parse_expr(&text).map_err(|err| TestCaseError::fail(format!("`{text}`: {err}")))?;
        check(back == e, &format!("`{text}` re-parsed differently"))
    })
}

/// `ell`-distinct and `ell`-regular partitions are equinumerous.
pub fn glaisher(cases: u32) -> Outcome {
    for ell in [2, 3, 4, 9] {
        let d = count_distinct(ell, 300, Integers::new()).unwrap();
        let r = count_regular(ell, 300, Integers::new()).unwrap();
        if d.counts != r.counts {
            return Err(format!("tables differ for ell = {ell}"));
        }
    }
    run(cases, (prop::sample::select(vec![2usize, 3, 4, 9]), 0usize..=300, 2u64..1000), |(ell, n, m)| {
        let ring = Modular::new(m);
        let d = count_distinct(ell, n, ring).unwrap();
        let r = count_regular(ell, n, ring).unwrap();
        check(d.counts == r.counts, "distinct and regular counts agree")
    })
}

fn arb_odd_prime() -> impl Strategy<Value = u64> {
    (3u64..2000).prop_filter_map("prime", |n| is_prime(n).then_some(n))
}

/// `(ab/p) = (a/p)(b/p)`, and Euler's criterion matches a table of squares.
pub fn legendre_multiplicativity(cases: u32) -> Outcome {
    run(cases, (arb_odd_prime(), -100_000i64..100_000, -100_000i64..100_000), |(p, a, b)| {
        let pi = p as i64;
        prop_assume!(a.rem_euclid(pi) != 0 && b.rem_euclid(pi) != 0);
        let la = legendre(a, p).unwrap();
        let lb = legendre(b, p).unwrap();
        check(legendre(a * b, p).unwrap() == la * lb, "multiplicative")?;
        let square = (1..p).any(|x| (x * x) % p == a.rem_euclid(pi) as u64);
        check((la == 1) == square, "agrees with brute-force squares")
    })
}
