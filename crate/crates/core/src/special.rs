//! Named q-series: Euler products `f_k`, eta quotients, Ramanujan's theta
//! function `f(a, b)`, `psi(q)`, the 5-dissection factor of `f_1`, the
//! p-dissections of `psi` and `f_1`, and the Legendre symbol.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::series::TruncatedSeries;
use crate::Integers;

/// `f_k = prod_{n>=1} (1 - q^{kn})`, from the pentagonal number theorem:
/// `f_1 = sum_{n in Z} (-1)^n q^{n(3n+1)/2}`, rescaled by `q -> q^k`.
pub fn eta_f<R: Ring>(k: usize, order: usize, ring: R) -> TruncatedSeries<R> {
    assert!(k >= 1, "eta_f needs k >= 1");
    let mut terms = Vec::new();
    // n >= 0 and n < 0 both give increasing exponents as |n| grows.
    for sign in [1i64, -1] {
        let start = if sign == 1 { 0 } else { 1 };
        for m in start.. {
            let n = sign * m;
            let e = (n * (3 * n + 1) / 2) as usize * k;
            if e >= order {
                break;
            }
            terms.push((e, if n % 2 == 0 { 1 } else { -1 }));
        }
    }
    TruncatedSeries::from_terms(ring, order, terms)
}

/// `(q^r; q^s)_inf = prod_{n>=0} (1 - q^{r + s n})`, exact below `order`.
pub fn q_pochhammer<R: Ring>(r: usize, s: usize, order: usize, ring: R) -> TruncatedSeries<R> {
    assert!(r >= 1 && s >= 1, "q_pochhammer needs r, s >= 1");
    let mut c = TruncatedSeries::one(ring.clone(), order).into_coeffs();
    let mut e = r;
    while e < order {
        for i in (e..order).rev() {
            c[i] = ring.sub(&c[i], &c[i - e]);
        }
        e += s;
    }
    TruncatedSeries::from_coeffs(ring, c)
}

/// A product `prod f_k^{e_k}`. Repeated `k` values multiply exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaQuotientSpec {
    pub factors: Vec<(usize, i64)>,
}

impl EtaQuotientSpec {
    pub fn new(factors: impl IntoIterator<Item = (usize, i64)>) -> Self {
        EtaQuotientSpec {
            factors: factors.into_iter().collect(),
        }
    }

    /// The generating function of RD^(ℓ,t): `f_t f_ℓ / (f_1 f_{ℓt})`.
    pub fn regular_distinct(ell: usize, t: usize) -> Self {
        Self::new([(t, 1), (ell, 1), (1, -1), (ell * t, -1)])
    }

    /// Exponents merged by `k`, zero exponents dropped, sorted by `k`.
    pub fn normalized(&self) -> BTreeMap<usize, i64> {
        let mut m = BTreeMap::new();
        for &(k, e) in &self.factors {
            *m.entry(k).or_insert(0) += e;
        }
        m.retain(|_, e| *e != 0);
        m
    }
}

impl fmt::Display for EtaQuotientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|(k, e)| format!("f{k}^{e}")).collect();
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

pub fn eta_quotient<R: Ring>(spec: &EtaQuotientSpec, order: usize, ring: R) -> Result<TruncatedSeries<R>> {
    let mut acc = TruncatedSeries::one(ring.clone(), order);
    let normalized = spec.normalized();
    // numerators first keeps intermediate values small in the exact ring
    for (&k, &e) in normalized.iter().filter(|(_, e)| **e > 0) {
        let fk = eta_f(k, order, ring.clone());
        for _ in 0..e {
            acc = acc.mul(&fk)?;
        }
    }
    for (&k, &e) in normalized.iter().filter(|(_, e)| **e < 0) {
        let fk = eta_f(k, order, ring.clone());
        for _ in 0..-e {
            acc = acc.div(&fk)?;
        }
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn pow(self, e: i64) -> i64 {
        match self {
            Sign::Minus if e % 2 != 0 => -1,
            _ => 1,
        }
    }
}

/// `f(a, b)` with `a = ±q^{a_exp}` and `b = ±q^{b_exp}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThetaSpec {
    pub a_sign: Sign,
    pub a_exp: usize,
    pub b_sign: Sign,
    pub b_exp: usize,
}

impl ThetaSpec {
    pub fn new(a_sign: Sign, a_exp: usize, b_sign: Sign, b_exp: usize) -> Result<Self> {
        if a_exp + b_exp == 0 {
            return Err(Error::InvalidArgument(
                "theta function needs a_exp + b_exp >= 1".into(),
            ));
        }
        Ok(ThetaSpec {
            a_sign,
            a_exp,
            b_sign,
            b_exp,
        })
    }

    pub fn plus(a_exp: usize, b_exp: usize) -> Result<Self> {
        Self::new(Sign::Plus, a_exp, Sign::Plus, b_exp)
    }

    pub fn minus(a_exp: usize, b_exp: usize) -> Result<Self> {
        Self::new(Sign::Minus, a_exp, Sign::Minus, b_exp)
    }
}

/// Ramanujan's `f(a, b) = sum_{n in Z} a^{n(n+1)/2} b^{n(n-1)/2}`.
pub fn theta_f<R: Ring>(spec: &ThetaSpec, order: usize, ring: R) -> TruncatedSeries<R> {
    assert!(spec.a_exp + spec.b_exp >= 1, "theta spec violates a_exp + b_exp >= 1");
    let (a, b) = (spec.a_exp as i64, spec.b_exp as i64);
    let mut terms = Vec::new();
    for sign in [1i64, -1] {
        let start = if sign == 1 { 0 } else { 1 };
        // exponent is nondecreasing in |n| on each side
        for m in start.. {
            let n = sign * m;
            let (ta, tb) = (n * (n + 1) / 2, n * (n - 1) / 2);
            let e = a * ta + b * tb;
            if e as usize >= order {
                break;
            }
            terms.push((e as usize, spec.a_sign.pow(ta) * spec.b_sign.pow(tb)));
        }
    }
    TruncatedSeries::from_terms(ring, order, terms)
}

/// `psi(q) = sum_{n>=0} q^{n(n+1)/2}`.
pub fn psi<R: Ring>(order: usize, ring: R) -> TruncatedSeries<R> {
    psi_power(1, order, ring)
}

/// `psi(q^k)`.
pub fn psi_power<R: Ring>(k: usize, order: usize, ring: R) -> TruncatedSeries<R> {
    assert!(k >= 1, "psi_power needs k >= 1");
    let terms = (0usize..)
        .map(|n| k * n * (n + 1) / 2)
        .take_while(|&e| e < order)
        .map(|e| (e, 1));
    TruncatedSeries::from_terms(ring, order, terms)
}

/// Mechanically enumerated readings of the 5-dissection factor `a` in
/// `f_1 = f_25 (a - q - q^2/a)`, each a quotient of `(q^r; q^25)_inf` factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FiveDissectionVariant {
    /// `(q^10, q^15; q^25) / (q^5, q^20; q^25)`
    Candidate,
    /// `(q^5, q^20; q^25) / (q^10, q^15; q^25)`
    Reciprocal,
    /// `(q^5, q^15; q^25) / (q^10, q^20; q^25)`
    Swapped,
}

impl FiveDissectionVariant {
    pub const ALL: [FiveDissectionVariant; 3] = [
        FiveDissectionVariant::Candidate,
        FiveDissectionVariant::Reciprocal,
        FiveDissectionVariant::Swapped,
    ];

    fn residues(self) -> ([usize; 2], [usize; 2]) {
        match self {
            FiveDissectionVariant::Candidate => ([10, 15], [5, 20]),
            FiveDissectionVariant::Reciprocal => ([5, 20], [10, 15]),
            FiveDissectionVariant::Swapped => ([5, 15], [10, 20]),
        }
    }

    pub fn series<R: Ring>(self, order: usize, ring: R) -> Result<TruncatedSeries<R>> {
        let (num, den) = self.residues();
        let p = |r| q_pochhammer(r, 25, order, ring.clone());
        p(num[0]).mul(&p(num[1]))?.div(&p(den[0]).mul(&p(den[1]))?)
    }
}

/// Depth to which the 5-dissection factor is validated before use.
pub const FIVE_DISSECTION_CHECK_DEPTH: usize = 200;

/// Right side `f_25 (a - q - q^2/a)` for a given `a`.
pub fn five_dissection_rhs<R: Ring>(a: &TruncatedSeries<R>) -> Result<TruncatedSeries<R>> {
    let ring = a.ring().clone();
    let n = a.order();
    let q = TruncatedSeries::monomial(ring.clone(), n, 1);
    let q2_over_a = TruncatedSeries::monomial(ring.clone(), n, 2).div(a)?;
    eta_f(25, n, ring).mul(&a.sub(&q)?.sub(&q2_over_a)?)
}

/// Tries each variant in order and returns the first for which the
/// 5-dissection holds to [`FIVE_DISSECTION_CHECK_DEPTH`] terms.
pub fn resolve_five_dissection_a() -> Option<FiveDissectionVariant> {
    static RESOLVED: OnceLock<Option<FiveDissectionVariant>> = OnceLock::new();
    *RESOLVED.get_or_init(|| {
        let n = FIVE_DISSECTION_CHECK_DEPTH;
        let f1 = eta_f(1, n, Integers::new());
        FiveDissectionVariant::ALL.into_iter().find(|v| {
            v.series(n, Integers::new())
                .and_then(|a| five_dissection_rhs(&a))
                .and_then(|rhs| rhs.eq_up_to(&f1, n))
                .map(|c| c.is_equal())
                .unwrap_or(false)
        })
    })
}

/// The factor `a` of the 5-dissection of `f_1`, using the verified reading.
pub fn five_dissection_a<R: Ring>(order: usize, ring: R) -> Result<TruncatedSeries<R>> {
    let variant = resolve_five_dissection_a().ok_or_else(|| {
        Error::Unverified("no reading of the 5-dissection factor satisfies f1 = f25(a - q - q^2/a)".into())
    })?;
    variant.series(order, ring)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(Error::BadPrime {
            p,
            reason: "expected an odd prime".into(),
        });
    }
    Ok(())
}

/// `sum_{k=0}^{(p-3)/2} q^{k(k+1)/2} f(q^{(p^2+(2k+1)p)/2}, q^{(p^2-(2k+1)p)/2})
///  + q^{(p^2-1)/8} psi(q^{p^2})`, which equals `psi(q)` for every odd prime `p`.
pub fn psi_p_dissection_rhs<R: Ring>(p: u64, order: usize, ring: R) -> Result<TruncatedSeries<R>> {
    require_odd_prime(p)?;
    let p = p as usize;
    let mut acc = TruncatedSeries::zero(ring.clone(), order);
    for k in 0..=(p - 3) / 2 {
        let spec = ThetaSpec::plus((p * p + (2 * k + 1) * p) / 2, (p * p - (2 * k + 1) * p) / 2)?;
        let term = theta_f(&spec, order, ring.clone()).shift(k * (k + 1) / 2);
        acc = acc.add(&term)?;
    }
    let tail = psi_power(p * p, order, ring).shift((p * p - 1) / 8);
    acc.add(&tail)
}

/// The excluded summation index `(±p - 1)/6` of the p-dissection of `f_1`.
pub fn f1_dissection_excluded_index(p: u64) -> i64 {
    let p = p as i64;
    if p % 6 == 1 {
        (p - 1) / 6
    } else {
        (-p - 1) / 6
    }
}

/// `sum_{k=(1-p)/2, k != (±p-1)/6}^{(p-1)/2} (-1)^k q^{k(3k+1)/2}
///  f(-q^{(3p^2+(6k+1)p)/2}, -q^{(3p^2-(6k+1)p)/2})
///  + (-1)^{(±p-1)/6} q^{(p^2-1)/24} f_{p^2}`, which equals `f_1` for primes `p >= 5`.
pub fn f1_p_dissection_rhs<R: Ring>(p: u64, order: usize, ring: R) -> Result<TruncatedSeries<R>> {
    if p < 5 || !is_prime(p) {
        return Err(Error::BadPrime {
            p,
            reason: "expected a prime p >= 5".into(),
        });
    }
    let excluded = f1_dissection_excluded_index(p);
    let pi = p as i64;
    let half = (pi - 1) / 2;
    let mut acc = TruncatedSeries::zero(ring.clone(), order);
    for k in -half..=half {
        if k == excluded {
            continue;
        }
        let a_exp = (3 * pi * pi + (6 * k + 1) * pi) / 2;
        let b_exp = (3 * pi * pi - (6 * k + 1) * pi) / 2;
        let spec = ThetaSpec::minus(a_exp as usize, b_exp as usize)?;
        let mut term = theta_f(&spec, order, ring.clone()).shift((k * (3 * k + 1) / 2) as usize);
        if k % 2 != 0 {
            term = term.neg();
        }
        acc = acc.add(&term)?;
    }
    let p2 = (p * p) as usize;
    let mut tail = eta_f(p2, order, ring).shift((p2 - 1) / 24);
    if excluded % 2 != 0 {
        tail = tail.neg();
    }
    acc.add(&tail)
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * base as u128 % m as u128) as u64;
        }
        base = (base as u128 * base as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Legendre symbol `(delta / p)` by Euler's criterion.
pub fn legendre(delta: i64, p: u64) -> Result<i8> {
    require_odd_prime(p)?;
    let residue = (delta as i128).rem_euclid(p as i128) as u64;
    if residue == 0 {
        return Err(Error::NotCoprime { value: delta, p });
    }
    Ok(if pow_mod(residue, (p - 1) / 2, p) == 1 { 1 } else { -1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Modular;

    fn ints<R: Ring>(s: &TruncatedSeries<R>) -> Vec<i64> {
        s.coeffs_bigint().iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    #[test]
    fn eta_f1_pentagonal_terms() {
        let f1 = ints(&eta_f(1, 13, Integers::new()));
        let mut expected = vec![0i64; 13];
        for (e, v) in [(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1)] {
            expected[e] = v;
        }
        assert_eq!(f1, expected);
    }

    #[test]
    fn eta_f_large_k_is_one() {
        assert_eq!(ints(&eta_f(10, 10, Integers::new())), ints(&TruncatedSeries::one(Integers::new(), 10)));
        assert_eq!(ints(&eta_f(25, 10, Integers::new()))[0], 1);
    }

    #[test]
    fn eta_quotient_of_nothing_is_one() {
        let s = eta_quotient(&EtaQuotientSpec::default(), 10, Integers::new()).unwrap();
        assert_eq!(s, TruncatedSeries::one(Integers::new(), 10));
        let s = eta_quotient(&EtaQuotientSpec::new([(1, 1), (1, -1)]), 10, Integers::new()).unwrap();
        assert_eq!(s, TruncatedSeries::one(Integers::new(), 10));
    }

    #[test]
    fn rd_4_9_generating_function_start() {
        let s = eta_quotient(&EtaQuotientSpec::regular_distinct(4, 9), 7, Integers::new()).unwrap();
        // RD(4) = 4: (3,1), (2,2), (2,1,1), (1^4)
        assert_eq!(ints(&s), vec![1, 1, 2, 3, 4, 6, 9]);
    }

    #[test]
    fn psi_examples() {
        let s = ints(&psi(11, Integers::new()));
        let ones: Vec<usize> = (0..11).filter(|&i| s[i] == 1).collect();
        assert_eq!(ones, vec![0, 1, 3, 6, 10]);
        assert_eq!(s[2], 0);
    }

    #[test]
    fn theta_specializations() {
        let n = 200;
        let z = Integers::new();
        assert_eq!(theta_f(&ThetaSpec::plus(1, 3).unwrap(), n, z), psi(n, z));
        assert_eq!(theta_f(&ThetaSpec::minus(2, 1).unwrap(), n, z), eta_f(1, n, z));
        // phi(q) = f(q, q) = sum_n q^{n^2}: direct bilateral sum
        let mut phi = vec![0i64; 50];
        for k in -10i64..=10 {
            if ((k * k) as usize) < 50 {
                phi[(k * k) as usize] += 1;
            }
        }
        assert_eq!(ints(&theta_f(&ThetaSpec::plus(1, 1).unwrap(), 50, z)), phi);
        assert!(ThetaSpec::plus(0, 0).is_err());
    }

    #[test]
    fn theta_with_zero_exponent() {
        // f(1, q) = 2 + 2q + 2q^3 + ...: n and 1 - n give the same exponent
        let s = ints(&theta_f(&ThetaSpec::plus(0, 1).unwrap(), 7, Integers::new()));
        assert_eq!(s, vec![2, 2, 0, 2, 0, 0, 2]);
    }

    #[test]
    fn q_pochhammer_matches_definition() {
        // (q; q)_inf = f_1
        assert_eq!(q_pochhammer(1, 1, 100, Integers::new()), eta_f(1, 100, Integers::new()));
        // (q; q^2)_inf (q^2; q^2)_inf = f_1
        let z = Integers::new();
        let prod = q_pochhammer(1, 2, 100, z).mul(&q_pochhammer(2, 2, 100, z)).unwrap();
        assert_eq!(prod, eta_f(1, 100, z));
    }

    #[test]
    fn five_dissection_candidate_resolves() {
        assert_eq!(resolve_five_dissection_a(), Some(FiveDissectionVariant::Candidate));
        let a = five_dissection_a(200, Integers::new()).unwrap();
        let c = ints(&a);
        assert_eq!(c[0], 1);
        assert!(c.iter().enumerate().all(|(i, v)| i % 5 == 0 || *v == 0));
        let rhs = five_dissection_rhs(&a).unwrap();
        assert!(rhs.eq_up_to(&eta_f(1, 200, Integers::new()), 200).unwrap().is_equal());
    }

    #[test]
    fn other_five_dissection_readings_fail() {
        let f1 = eta_f(1, 200, Integers::new());
        for v in [FiveDissectionVariant::Reciprocal, FiveDissectionVariant::Swapped] {
            let rhs = five_dissection_rhs(&v.series(200, Integers::new()).unwrap()).unwrap();
            assert!(!rhs.eq_up_to(&f1, 200).unwrap().is_equal(), "{v:?}");
        }
    }

    #[test]
    fn psi_dissections() {
        let z = Integers::new();
        for p in [3, 5, 7] {
            let rhs = psi_p_dissection_rhs(p, 300, z).unwrap();
            assert!(rhs.eq_up_to(&psi(300, z), 300).unwrap().is_equal(), "p = {p}");
        }
        assert_eq!((5 * 5 - 1) / 8, 3);
        assert!(matches!(psi_p_dissection_rhs(2, 10, z), Err(Error::BadPrime { .. })));
        assert!(matches!(psi_p_dissection_rhs(9, 10, z), Err(Error::BadPrime { .. })));
    }

    #[test]
    fn f1_dissections() {
        let z = Integers::new();
        assert_eq!(f1_dissection_excluded_index(5), -1);
        assert_eq!(f1_dissection_excluded_index(7), 1);
        assert_eq!((5 * 5 - 1) / 24, 1);
        for p in [5, 7, 11] {
            let rhs = f1_p_dissection_rhs(p, 300, z).unwrap();
            assert!(rhs.eq_up_to(&eta_f(1, 300, z), 300).unwrap().is_equal(), "p = {p}");
        }
        assert!(matches!(f1_p_dissection_rhs(3, 10, z), Err(Error::BadPrime { .. })));
        assert!(matches!(f1_p_dissection_rhs(25, 10, z), Err(Error::BadPrime { .. })));
    }

    #[test]
    fn dissections_in_modular_ring() {
        let r = Modular::new(24);
        let rhs = f1_p_dissection_rhs(7, 200, r).unwrap();
        assert_eq!(rhs, eta_f(1, 200, r));
    }

    #[test]
    fn legendre_examples() {
        for p in [3, 5, 7, 11, 13] {
            assert_eq!(legendre(1, p).unwrap(), 1);
        }
        assert_eq!(legendre(-1, 3).unwrap(), -1);
        // squares mod 5 are {1, 4}; -3 = 2 (mod 5) is not among them
        let squares: Vec<i64> = (1..5).map(|x| x * x % 5).collect();
        assert!(!squares.contains(&(-3i64).rem_euclid(5)));
        assert_eq!(legendre(-3, 5).unwrap(), -1);
        assert!(matches!(legendre(10, 5), Err(Error::NotCoprime { .. })));
        assert!(matches!(legendre(3, 2), Err(Error::BadPrime { .. })));
        assert!(matches!(legendre(3, 15), Err(Error::BadPrime { .. })));
    }

    #[test]
    fn minus_one_is_nonresidue_exactly_for_three_mod_four() {
        for p in (3..200).filter(|&p| is_prime(p)) {
            assert_eq!(legendre(-1, p).unwrap() == -1, p % 4 == 3, "p = {p}");
        }
    }

    #[test]
    fn triangular_numbers_avoid_the_psi_tail_residue() {
        for p in (3..=13u64).filter(|&p| is_prime(p)) {
            let target = (p * p - 1) / 8 % p;
            for m in 0..=(p - 3) / 2 {
                assert_ne!((m * m + m) / 2 % p, target, "p = {p}, m = {m}");
            }
        }
    }
}
