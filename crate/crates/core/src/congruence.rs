//! Congruence claims `c(A n + B) ≡ 0 (mod M)` for partition counts and the
//! two auxiliary series, their checks against coefficient tables, and a
//! brute-force scan for new ones.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::catalog::{evaluate, Expr};
use crate::error::{Error, Result};
use crate::partition::{count_rd, CountTable};
use crate::report::{Counterexample, VerificationReport};
use crate::ring::{Modular, Ring};
use crate::series::TruncatedSeries;
use crate::special::{eta_quotient, is_prime, legendre, EtaQuotientSpec};
use crate::Integers;

/// Largest argument `A n + B` the default check ranges reach.
pub const DEFAULT_ARGUMENT_BOUND: u64 = 100_000;

/// Which sequence a claim is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Source {
    Rd { ell: usize, t: usize },
    /// Coefficients of `f_1^2`.
    AuxA,
    /// Coefficients of `psi(q) psi(q^3)`.
    AuxB,
}

impl Source {
    pub fn series_expr(&self) -> Expr {
        match *self {
            Source::Rd { ell, t } => Expr::RdExtract { ell, t, m: 1, r: 0 },
            Source::AuxA => Expr::AuxA,
            Source::AuxB => Expr::AuxB,
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Rd { ell, t } => write!(f, "RD({ell},{t})"),
            Source::AuxA => f.write_str("a"),
            Source::AuxB => f.write_str("b"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceClaim {
    pub source: Source,
    pub a: u64,
    pub b: u64,
    pub modulus: u64,
    /// Family name and parameter bindings, e.g. `thm3.1[p=7,alpha=0,i=2]`.
    pub provenance: String,
}

impl CongruenceClaim {
    pub fn new(source: Source, a: u64, b: u64, modulus: u64, provenance: impl Into<String>) -> Result<Self> {
        if a == 0 {
            return Err(Error::InvalidArgument("progression step A must be positive".into()));
        }
        if modulus < 2 {
            return Err(Error::InvalidArgument(format!("modulus must be at least 2, got {modulus}")));
        }
        Ok(CongruenceClaim {
            source,
            a,
            b,
            modulus,
            provenance: provenance.into(),
        })
    }

    pub fn rd49(a: u64, b: u64, modulus: u64, provenance: impl Into<String>) -> Result<Self> {
        Self::new(Source::Rd { ell: 4, t: 9 }, a, b, modulus, provenance)
    }

    pub fn argument(&self, n: u64) -> u64 {
        self.a * n + self.b
    }

    /// Same claim with `B` moved by `delta`; used for negative controls.
    pub fn shifted(&self, delta: u64) -> Self {
        CongruenceClaim {
            b: self.b + delta,
            provenance: format!("{}+{delta}", self.provenance),
            ..self.clone()
        }
    }

    /// Largest `n` keeping the argument within `bound`, or `None` if even
    /// `n = 0` exceeds it.
    pub fn n_max_within(&self, bound: u64) -> Option<u64> {
        bound.checked_sub(self.b).map(|room| room / self.a)
    }
}

impl fmt::Display for CongruenceClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}n+{}) ≡ 0 (mod {})", self.source, self.a, self.b, self.modulus)
    }
}

/// Coefficients `c(0), c(1), ...` of one source sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTable<R: Ring> {
    pub source: Source,
    pub ring: R,
    pub values: Vec<R::Elem>,
}

impl<R: Ring> CoefficientTable<R> {
    /// Highest index present.
    pub fn nmax(&self) -> Option<usize> {
        self.values.len().checked_sub(1)
    }

    pub fn from_series(source: Source, series: TruncatedSeries<R>) -> Self {
        CoefficientTable {
            source,
            ring: series.ring().clone(),
            values: series.into_coeffs(),
        }
    }
}

impl<R: Ring> CountTable<R> {
    /// Views an RD count table as a coefficient table. Tables without both an
    /// `ell` and a `t` bound are rejected.
    pub fn into_coefficients(self) -> Result<CoefficientTable<R>> {
        match (self.constraint.ell, self.constraint.t) {
            (Some(ell), Some(t)) => Ok(CoefficientTable {
                source: Source::Rd { ell, t },
                ring: self.ring,
                values: self.counts,
            }),
            _ => Err(Error::InvalidArgument(format!("{} is not a regular-distinct constraint", self.constraint))),
        }
    }
}

/// RD counts for `n <= nmax` from the partition recurrence.
pub fn rd_table<R: Ring>(ell: usize, t: usize, nmax: usize, ring: R) -> Result<CoefficientTable<R>> {
    count_rd(ell, t, nmax, ring)?.into_coefficients()
}

/// RD counts for `n <= nmax` from `f_ell f_t / (f_1 f_{ell t})`, for
/// cross-checking against [`rd_table`].
pub fn rd_table_from_series<R: Ring>(ell: usize, t: usize, nmax: usize, ring: R) -> Result<CoefficientTable<R>> {
    let series = eta_quotient(&EtaQuotientSpec::regular_distinct(ell, t), nmax + 1, ring)?;
    Ok(CoefficientTable::from_series(Source::Rd { ell, t }, series))
}

/// Exact coefficients of `f_1^2` or `psi(q) psi(q^3)` for `n <= nmax`.
pub fn aux_table(source: Source, nmax: usize) -> Result<CoefficientTable<Integers>> {
    if matches!(source, Source::Rd { .. }) {
        return Err(Error::InvalidArgument("aux_table takes AuxA or AuxB".into()));
    }
    let series = evaluate(&source.series_expr(), nmax + 1, &Integers::new())?;
    Ok(CoefficientTable::from_series(source, series))
}

/// Checks `c(A n + B) ≡ 0 (mod M)` for `0 <= n <= n_max`.
///
/// A table too short for the last argument gives an insufficient-precision
/// report; a modular table whose modulus is not a multiple of `M` is a
/// ring mismatch.
pub fn check_claim<R: Ring>(claim: &CongruenceClaim, n_max: u64, table: &CoefficientTable<R>) -> Result<VerificationReport> {
    if claim.source != table.source {
        return Err(Error::InvalidArgument(format!(
            "claim is about {} but the table holds {}",
            claim.source, table.source
        )));
    }
    if let Some(v) = table.values.first() {
        if table.ring.residue(v, claim.modulus).is_none() {
            return Err(Error::RingMismatch {
                left: table.ring.kind(),
                right: Modular::new(claim.modulus).kind(),
            });
        }
    }
    let depth = table.values.len();
    let last = claim.argument(n_max);
    if last >= depth as u64 {
        return Ok(VerificationReport::insufficient(
            &claim.provenance,
            depth,
            format!("argument {last} needed, table ends at {}", depth as i64 - 1),
        ));
    }
    for n in 0..=n_max {
        let argument = claim.argument(n);
        let value = &table.values[argument as usize];
        let residue = table.ring.residue(value, claim.modulus).expect("checked above");
        if residue != 0 {
            return Ok(VerificationReport::fail(
                &claim.provenance,
                n as usize + 1,
                depth,
                Counterexample::Claim {
                    n,
                    argument,
                    value: residue.to_string(),
                },
            ));
        }
    }
    Ok(VerificationReport::pass(&claim.provenance, n_max as usize + 1, depth))
}

/// The seven congruences for `RD(4,9)` along progressions of step 4, 6, 8.
pub fn claims_lemma11() -> Vec<CongruenceClaim> {
    [(4, 3, 3), (6, 2, 2), (6, 3, 3), (6, 4, 4), (6, 5, 6), (6, 7, 12), (8, 5, 6)]
        .iter()
        .enumerate()
        .map(|(i, &(a, b, m))| CongruenceClaim::rd49(a, b, m, format!("lemma1.1[{}]", i + 1)).expect("valid"))
        .collect()
}

fn odd_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::BadPrime {
            p,
            reason: "an odd prime is required".into(),
        });
    }
    Ok(())
}

fn checked_pow(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e)
        .ok_or_else(|| Error::TooLarge(format!("{p}^{e} overflows 64 bits")))
}

/// Claims `(A, B, M)` with `A = c p^{2α+2}`, `B = c p^{2α+1} i + d p^{2α+2} + 1`
/// for `1 <= i <= p - 1`.
fn family(name: &str, p: u64, alpha: u32, c: u64, d: u64, modulus: u64) -> Result<Vec<CongruenceClaim>> {
    let hi = checked_pow(p, 2 * alpha + 2)?;
    let mid = checked_pow(p, 2 * alpha + 1)?;
    let a = c.checked_mul(hi).ok_or_else(|| Error::TooLarge("progression step overflows".into()))?;
    (1..p)
        .map(|i| {
            let b = c * mid * i + d * hi + 1;
            CongruenceClaim::rd49(a, b, modulus, format!("{name}[p={p},alpha={alpha},i={i}]"))
        })
        .collect()
}

/// `RD(4,9)(12 p^{2α+1}(p n + i) + p^{2α+2} + 1) ≡ 0 (mod 4)` for primes
/// `p ≡ 3 (mod 4)`.
pub fn claims_thm31(p: u64, alpha: u32) -> Result<Vec<CongruenceClaim>> {
    odd_prime(p)?;
    if legendre(-1, p)? != -1 {
        return Err(Error::BadPrime {
            p,
            reason: "p must be 3 mod 4".into(),
        });
    }
    family("thm3.1", p, alpha, 12, 1, 4)
}

/// `RD(4,9)(6·5^{2α+2} n + 6·5^{2α+1} i + 5^{2α+2} + 1) ≡ 0 (mod 6)`.
pub fn claims_thm41(alpha: u32) -> Result<Vec<CongruenceClaim>> {
    let mut claims = family("thm4.1", 5, alpha, 6, 1, 6)?;
    for c in &mut claims {
        c.provenance = c.provenance.replace("p=5,", "");
    }
    Ok(claims)
}

/// `RD(4,9)(6 p^{2α+1}(p n + i) + 3 p^{2α+2} + 1) ≡ 0 (mod 12)` for primes
/// `p ≡ 5 (mod 6)`.
pub fn claims_thm51(p: u64, alpha: u32) -> Result<Vec<CongruenceClaim>> {
    odd_prime(p)?;
    if p == 3 || legendre(-3, p)? != -1 {
        return Err(Error::BadPrime {
            p,
            reason: "p must be 5 mod 6".into(),
        });
    }
    family("thm5.1", p, alpha, 6, 3, 12)
}

/// Mod 24 congruences along `24n + 23`, `48n + 29`, `96n + 89`.
pub fn claims_thm61() -> Vec<CongruenceClaim> {
    [(24, 23), (48, 29), (96, 89)]
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| CongruenceClaim::rd49(a, b, 24, format!("thm6.1[{}]", i + 1)).expect("valid"))
        .collect()
}

/// Offset `(p^{2k} - 1) / d` used by the auxiliary-series statements, where
/// `d = 12` for `a` and `d = 2` for `b`.
fn aux_offset(source: Source, p: u64, k: u32) -> Result<u64> {
    let d = match source {
        Source::AuxA => 12,
        Source::AuxB => 2,
        Source::Rd { .. } => return Err(Error::InvalidArgument("expected AuxA or AuxB".into())),
    };
    let pk = checked_pow(p, 2 * k)?;
    if (pk - 1) % d != 0 {
        return Err(Error::BadPrime {
            p,
            reason: format!("({p}^{} - 1)/{d} is not an integer", 2 * k),
        });
    }
    Ok((pk - 1) / d)
}

fn aux_prime(source: Source, p: u64) -> Result<()> {
    odd_prime(p)?;
    let (delta, reason) = match source {
        Source::AuxA => (-1, "p must be 3 mod 4"),
        Source::AuxB => (-3, "p must be 5 mod 6"),
        Source::Rd { .. } => return Err(Error::InvalidArgument("expected AuxA or AuxB".into())),
    };
    if p == 3 && source == Source::AuxB || legendre(delta, p)? != -1 {
        return Err(Error::BadPrime { p, reason: reason.into() });
    }
    aux_offset(source, p, 1).map(|_| ())
}

fn aux_id(source: Source) -> &'static str {
    match source {
        Source::AuxA => "a",
        _ => "b",
    }
}

/// Checks that `c(p^2 n + p i + off) = 0` exactly for `n <= n_max` and
/// `1 <= i <= p - 1`, where `off = (p^2 - 1)/12` for `a` (`p ≡ 3 mod 4`) and
/// `(p^2 - 1)/2` for `b` (`p ≡ 5 mod 6`).
pub fn check_vanishing_family(source: Source, p: u64, n_max: u64) -> Result<VerificationReport> {
    aux_prime(source, p)?;
    let off = aux_offset(source, p, 1)?;
    let id = format!("{}-vanishing[p={p}]", aux_id(source));
    let last = p * p * n_max + p * (p - 1) + off;
    let table = aux_table(source, last as usize)?;
    let mut checked = 0;
    for n in 0..=n_max {
        for i in 1..p {
            let argument = p * p * n + p * i + off;
            let value = &table.values[argument as usize];
            checked += 1;
            if *value != BigInt::from(0) {
                return Ok(VerificationReport::fail(
                    id,
                    checked,
                    table.values.len(),
                    Counterexample::Claim {
                        n,
                        argument,
                        value: value.to_string(),
                    },
                ));
            }
        }
    }
    Ok(VerificationReport::pass(id, checked, table.values.len()))
}

/// Checks `c(p^{2α} n + off_α) = c(n)` exactly for `n <= n_max`, with
/// `off_α = (p^{2α} - 1)/12` for `a` and `(p^{2α} - 1)/2` for `b`.
pub fn check_self_similarity(source: Source, p: u64, alpha: u32, n_max: u64) -> Result<VerificationReport> {
    aux_prime(source, p)?;
    let off = aux_offset(source, p, alpha)?;
    let step = checked_pow(p, 2 * alpha)?;
    let id = format!("{}-self-similarity[p={p},alpha={alpha}]", aux_id(source));
    let last = step
        .checked_mul(n_max)
        .and_then(|x| x.checked_add(off))
        .filter(|&x| x <= 50_000_000)
        .ok_or_else(|| Error::TooLarge(format!("argument for n = {n_max} exceeds the table limit")))?;
    let table = aux_table(source, last as usize)?;
    for n in 0..=n_max {
        let left = &table.values[(step * n + off) as usize];
        let right = &table.values[n as usize];
        if left != right {
            return Ok(VerificationReport::fail(
                id,
                n as usize + 1,
                table.values.len(),
                Counterexample::Coefficient {
                    index: n as usize,
                    left: left.to_string(),
                    right: right.to_string(),
                },
            ));
        }
    }
    Ok(VerificationReport::pass(id, n_max as usize + 1, table.values.len()))
}

/// A progression found by [`scan_congruences`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ScanHit {
    pub a: u64,
    pub b: u64,
    pub modulus: u64,
}

impl ScanHit {
    /// Whether `self` being true forces `other` to be true.
    pub fn implies(&self, other: &ScanHit) -> bool {
        other.a.is_multiple_of(self.a)
            && other.b >= self.b
            && (other.b - self.b).is_multiple_of(self.a)
            && self.modulus.is_multiple_of(other.modulus)
    }
}

impl fmt::Display for ScanHit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}n+{}) mod {}", self.a, self.b, self.modulus)
    }
}

/// Searches `A <= a_max`, `B < 2A`, `M` in `moduli` for progressions on
/// which `RD(ell,t)` vanishes mod `M` for every `n <= n_evidence`.
///
/// Candidates with `B < A` are scanned first and deduplicated among
/// themselves: a hit implied by an earlier one (see [`ScanHit::implies`])
/// is dropped, moduli being taken largest first. Late-start candidates
/// `A <= B < 2A`, such as `6n + 7`, are then added when nothing already
/// listed implies them; they never remove a `B < A` hit. The result is
/// sorted by `(A, B, M)`. With `n_evidence = 0` a single coefficient
/// decides each candidate.
pub fn scan_congruences(ell: usize, t: usize, a_max: u64, moduli: &[u64], n_evidence: u64) -> Result<Vec<ScanHit>> {
    if a_max == 0 || a_max > 200 {
        return Err(Error::InvalidArgument(format!("A_max must be in 1..=200, got {a_max}")));
    }
    let mut moduli: Vec<u64> = moduli.to_vec();
    moduli.sort_unstable_by(|x, y| y.cmp(x));
    moduli.dedup();
    if moduli.iter().any(|&m| m < 2) {
        return Err(Error::InvalidArgument("moduli must be at least 2".into()));
    }
    if moduli.is_empty() {
        return Ok(Vec::new());
    }
    let lcm = moduli
        .iter()
        .try_fold(1u64, |acc, &m| Some(num_integer::lcm(acc, m)).filter(|&l| l < 1 << 62))
        .ok_or_else(|| Error::TooLarge("lcm of the moduli".into()))?;
    let nmax = a_max * n_evidence + 2 * a_max - 1;
    let table = rd_table(ell, t, nmax as usize, Modular::new(lcm))?;
    let ring = &table.ring;
    let holds = |h: &ScanHit| (0..=n_evidence).all(|n| ring.residue(&table.values[(h.a * n + h.b) as usize], h.modulus) == Some(0));
    let mut hits: Vec<ScanHit> = Vec::new();
    for late in [false, true] {
        for &m in &moduli {
            for a in 1..=a_max {
                let bs = if late { a..2 * a } else { 0..a };
                for b in bs {
                    let hit = ScanHit { a, b, modulus: m };
                    if !hits.iter().any(|h| h.implies(&hit)) && holds(&hit) {
                        hits.push(hit);
                    }
                }
            }
        }
    }
    hits.sort_unstable();
    Ok(hits)
}
