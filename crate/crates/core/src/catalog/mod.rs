//! Identity catalog: a small text language for series identities and
//! congruences, its evaluator, and the built-in list of identities.

mod eval;
mod expr;
mod parser;

use std::sync::OnceLock;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{Counterexample, VerificationReport};
use crate::ring::{Modular, Ring};
use crate::series::Comparison;
use crate::special::{f1_dissection_excluded_index, ThetaSpec};
use crate::Integers;

pub use eval::evaluate;
pub use expr::Expr;
pub use parser::{parse_expr, parse_identity, parse_identity_at, ParsedIdentity, Relation};

/// Fewest coefficients a catalog identity may be certified with.
pub const MIN_CERTIFIED_TERMS: usize = 200;

const BUILTIN_TEXT: &str = include_str!("builtin.cat");

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryParams {
    pub p: Option<u64>,
    pub k: Option<u32>,
    pub m: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityEntry {
    pub id: String,
    pub lhs: Expr,
    pub rhs: Expr,
    pub relation: Relation,
    /// Number of coefficients compared by default.
    pub default_depth: usize,
    pub params: Option<EntryParams>,
    pub note: Option<String>,
}

impl IdentityEntry {
    pub fn new(id: impl Into<String>, parsed: ParsedIdentity, default_depth: usize) -> Self {
        IdentityEntry {
            id: id.into(),
            lhs: parsed.lhs,
            rhs: parsed.rhs,
            relation: parsed.relation,
            default_depth,
            params: None,
            note: None,
        }
    }

    pub fn parse(id: impl Into<String>, text: &str, default_depth: usize) -> Result<Self> {
        Ok(Self::new(id, parse_identity(text)?, default_depth))
    }

    /// The identity in the catalog language.
    pub fn identity_text(&self) -> String {
        match self.relation {
            Relation::Exact => format!("{} == {}", self.lhs, self.rhs),
            Relation::CongruentMod(m) => format!("{} === {} mod {}", self.lhs, self.rhs, m),
        }
    }

    pub fn catalog_line(&self) -> String {
        format!("id: {} depth={} {}", self.id, self.default_depth, self.identity_text())
    }

    /// Base series order the evaluation of `terms` coefficients reaches.
    pub fn required_depth(&self, terms: usize) -> usize {
        self.lhs.required_depth(terms).max(self.rhs.required_depth(terms))
    }
}

/// How congruence entries are evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum VerifyMode {
    /// Both sides computed in `Z/mZ` from the start.
    #[default]
    Modular,
    /// Both sides computed exactly, then reduced; slower, for auditing.
    ExactThenReduce,
}

fn compare_sides<R: Ring>(entry: &IdentityEntry, terms: usize, ring: &R) -> Result<std::result::Result<Comparison<R::Elem>, Error>> {
    let lhs = evaluate(&entry.lhs, terms, ring);
    let rhs = evaluate(&entry.rhs, terms, ring);
    match (lhs, rhs) {
        (Ok(l), Ok(r)) => match l.eq_up_to(&r, terms) {
            Ok(c) => Ok(Ok(c)),
            Err(e @ Error::InsufficientPrecision { .. }) => Ok(Err(e)),
            Err(e) => Err(e),
        },
        (Err(e), _) | (_, Err(e)) if e.is_insufficient_precision() => Ok(Err(e)),
        (Err(e), _) | (_, Err(e)) => Err(e),
    }
}

fn to_report<R: Ring>(
    entry: &IdentityEntry,
    terms: usize,
    ring: &R,
    outcome: std::result::Result<Comparison<R::Elem>, Error>,
) -> VerificationReport {
    let depth = entry.required_depth(terms);
    match outcome {
        Ok(Comparison::Equal) => VerificationReport::pass(&entry.id, terms, depth),
        Ok(Comparison::Mismatch { index, left, right }) => VerificationReport::fail(
            &entry.id,
            terms,
            depth,
            Counterexample::Coefficient {
                index,
                left: ring.to_bigint(&left).to_string(),
                right: ring.to_bigint(&right).to_string(),
            },
        ),
        Err(e) => VerificationReport::insufficient(&entry.id, depth, e.to_string()),
    }
}

/// Compares the first `terms` coefficients of both sides, with no floor on
/// `terms`.
pub fn check_identity(entry: &IdentityEntry, terms: usize, mode: VerifyMode) -> Result<VerificationReport> {
    let start = Instant::now();
    let report = match entry.relation {
        Relation::Exact => {
            let z = Integers::new();
            to_report(entry, terms, &z, compare_sides(entry, terms, &z)?)
        }
        Relation::CongruentMod(m) => {
            let ring = Modular::try_new(m).ok_or_else(|| Error::InvalidArgument(format!("bad modulus {m}")))?;
            match mode {
                VerifyMode::Modular => to_report(entry, terms, &ring, compare_sides(entry, terms, &ring)?),
                VerifyMode::ExactThenReduce => {
                    let z = Integers::new();
                    let lhs = evaluate(&entry.lhs, terms, &z)?.reduce_mod(m)?;
                    let rhs = evaluate(&entry.rhs, terms, &z)?.reduce_mod(m)?;
                    let outcome = match lhs.eq_up_to(&rhs, terms) {
                        Err(e @ Error::InsufficientPrecision { .. }) => Err(e),
                        other => Ok(other?),
                    };
                    to_report(entry, terms, &ring, outcome)
                }
            }
        }
    };
    let report = match &entry.note {
        Some(n) => report.with_note(n.clone()),
        None => report,
    };
    Ok(report.with_elapsed(start.elapsed()))
}

/// Verifies an entry to `terms` coefficients. Requests below
/// [`MIN_CERTIFIED_TERMS`] are reported as insufficient precision rather
/// than checked.
pub fn verify_identity(entry: &IdentityEntry, terms: usize) -> Result<VerificationReport> {
    if terms < MIN_CERTIFIED_TERMS {
        return Ok(VerificationReport::insufficient(
            &entry.id,
            entry.required_depth(terms),
            format!("{terms} terms requested, at least {MIN_CERTIFIED_TERMS} required"),
        ));
    }
    check_identity(entry, terms, VerifyMode::Modular)
}

/// Parses catalog text: `#` comments, blank lines, and lines of the form
/// `id: <name> [depth=<N>] <identity>`. Lines without an `id:` prefix are
/// named `line<N>`.
pub fn parse_catalog(text: &str) -> Result<Vec<IdentityEntry>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let mut rest = content;
        let mut id = format!("line{line_no}");
        let mut depth = MIN_CERTIFIED_TERMS;
        if let Some(after) = rest.trim_start().strip_prefix("id:") {
            let after = after.trim_start();
            let end = after.find(char::is_whitespace).unwrap_or(after.len());
            if end == 0 {
                return Err(Error::Parse {
                    line: line_no,
                    column: 1,
                    message: "missing entry id after `id:`".into(),
                });
            }
            id = after[..end].to_string();
            rest = &after[end..];
        }
        if let Some(after) = rest.trim_start().strip_prefix("depth=") {
            let end = after.find(char::is_whitespace).unwrap_or(after.len());
            depth = after[..end].parse().map_err(|_| Error::Parse {
                line: line_no,
                column: content.len() - after.len() + 1,
                message: format!("bad depth `{}`", &after[..end]),
            })?;
            rest = &after[end..];
        }
        let column = content.len() - rest.len() + 1;
        let parsed = parse_identity_at(rest, line_no, column)?;
        out.push(IdentityEntry::new(id, parsed, depth));
    }
    Ok(out)
}

pub fn format_catalog(entries: &[IdentityEntry]) -> String {
    entries.iter().map(|e| e.catalog_line() + "\n").collect()
}

fn with_params(mut entry: IdentityEntry, p: u64, k: Option<u32>, m: Option<u64>) -> IdentityEntry {
    entry.params = Some(EntryParams { p: Some(p), k, m });
    entry
}

/// `psi(q)` against its p-dissection.
pub fn psi_dissection_entry(p: u64) -> Result<IdentityEntry> {
    crate::special::psi_p_dissection_rhs(p, 1, Integers::new())?;
    let pu = p as usize;
    let mut rhs: Option<Expr> = None;
    for k in 0..=(pu - 3) / 2 {
        let spec = ThetaSpec::plus((pu * pu + (2 * k + 1) * pu) / 2, (pu * pu - (2 * k + 1) * pu) / 2)?;
        let term = Expr::shifted(k * (k + 1) / 2, Expr::Theta(spec));
        rhs = Some(match rhs {
            None => term,
            Some(acc) => Expr::add(acc, term),
        });
    }
    let tail = Expr::shifted((pu * pu - 1) / 8, Expr::Psi(pu * pu));
    let rhs = match rhs {
        None => tail,
        Some(acc) => Expr::add(acc, tail),
    };
    let entry = IdentityEntry {
        id: format!("eq5[{p}]"),
        lhs: Expr::Psi(1),
        rhs,
        relation: Relation::Exact,
        default_depth: 300,
        params: None,
        note: None,
    };
    Ok(with_params(entry, p, None, None))
}

/// `f_1` against its p-dissection, `p >= 5`.
pub fn f1_dissection_entry(p: u64) -> Result<IdentityEntry> {
    crate::special::f1_p_dissection_rhs(p, 1, Integers::new())?;
    let pi = p as i64;
    let excluded = f1_dissection_excluded_index(p);
    let half = (pi - 1) / 2;
    let mut terms: Vec<(bool, Expr)> = Vec::new();
    for k in -half..=half {
        if k == excluded {
            continue;
        }
        let a = (3 * pi * pi + (6 * k + 1) * pi) / 2;
        let b = (3 * pi * pi - (6 * k + 1) * pi) / 2;
        let spec = ThetaSpec::minus(a as usize, b as usize)?;
        terms.push((k % 2 == 0, Expr::shifted((k * (3 * k + 1) / 2) as usize, Expr::Theta(spec))));
    }
    let p2 = (p * p) as usize;
    terms.push((excluded % 2 == 0, Expr::shifted((p2 - 1) / 24, Expr::EtaF(p2))));
    // positive terms first so the sum never opens with a subtraction
    terms.sort_by_key(|(positive, _)| !*positive);
    let mut iter = terms.into_iter();
    let (_, first) = iter.next().expect("at least one term");
    let rhs = iter.fold(first, |acc, (positive, t)| if positive { Expr::add(acc, t) } else { Expr::sub(acc, t) });
    let entry = IdentityEntry {
        id: format!("eq6[{p}]"),
        lhs: Expr::EtaF(1),
        rhs,
        relation: Relation::Exact,
        default_depth: 300,
        params: None,
        note: None,
    };
    Ok(with_params(entry, p, None, None))
}

/// Readings of the exponent on `f_{pm}` in `f_{pm}^e ≡ f_m^{p^k} (mod p^k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PowerCongruenceReading {
    /// `e = p^k - 1`
    Printed,
    /// `e = p^(k-1)`
    Standard,
}

impl PowerCongruenceReading {
    pub fn exponent(self, p: u64, k: u32) -> i64 {
        match self {
            PowerCongruenceReading::Printed => p.pow(k) as i64 - 1,
            PowerCongruenceReading::Standard => p.pow(k - 1) as i64,
        }
    }

    fn label(self) -> &'static str {
        match self {
            PowerCongruenceReading::Printed => "p^k-1",
            PowerCongruenceReading::Standard => "p^(k-1)",
        }
    }
}

/// `f_{pm}^e === f_m^{p^k} mod p^k` for the given reading.
pub fn power_congruence_entry(p: u64, k: u32, m: u64, reading: PowerCongruenceReading) -> IdentityEntry {
    let suffix = if m == 1 { String::new() } else { format!(",m={m}") };
    let lhs_exp = reading.exponent(p, k);
    let power = |base: usize, e: i64| if e == 1 { Expr::EtaF(base) } else { Expr::pow(Expr::EtaF(base), e) };
    let entry = IdentityEntry {
        id: format!("eq7[{p},{k}{suffix}]"),
        lhs: power((p * m) as usize, lhs_exp),
        rhs: power(m as usize, p.pow(k) as i64),
        relation: Relation::CongruentMod(p.pow(k)),
        default_depth: MIN_CERTIFIED_TERMS,
        params: None,
        note: None,
    };
    with_params(entry, p, Some(k), Some(m))
}

fn power_congruence_holds(p: u64, k: u32, m: u64, reading: PowerCongruenceReading) -> bool {
    let entry = power_congruence_entry(p, k, m, reading);
    check_identity(&entry, MIN_CERTIFIED_TERMS, VerifyMode::Modular)
        .map(|r| r.passed())
        .unwrap_or(false)
}

/// Triples `(p, k, m)` used to decide between the exponent readings.
pub const POWER_CONGRUENCE_PROBES: [(u64, u32, u64); 4] = [(2, 1, 1), (2, 2, 1), (3, 1, 1), (3, 2, 1)];

/// The first reading (printed, then standard) that holds for every probe.
pub fn resolve_power_congruence_reading() -> Option<PowerCongruenceReading> {
    static RESOLVED: OnceLock<Option<PowerCongruenceReading>> = OnceLock::new();
    *RESOLVED.get_or_init(|| {
        [PowerCongruenceReading::Printed, PowerCongruenceReading::Standard]
            .into_iter()
            .find(|&r| POWER_CONGRUENCE_PROBES.iter().all(|&(p, k, m)| power_congruence_holds(p, k, m, r)))
    })
}

/// `(p, k)` pairs carried in the built-in catalog.
pub const POWER_CONGRUENCE_PAIRS: [(u64, u32); 5] = [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1)];

fn builtin_entries() -> Result<Vec<IdentityEntry>> {
    let mut text_entries = parse_catalog(BUILTIN_TEXT)?;
    let split = text_entries
        .iter()
        .position(|e| e.id == "psi-product")
        .map_or(text_entries.len(), |i| i + 1);
    let tail = text_entries.split_off(split);
    let mut out = text_entries;
    for p in [3, 5, 7] {
        out.push(psi_dissection_entry(p)?);
    }
    for p in [5, 7, 11] {
        out.push(f1_dissection_entry(p)?);
    }
    let reading = resolve_power_congruence_reading()
        .ok_or_else(|| Error::Unverified("neither exponent reading of f_{pm}^e = f_m^{p^k} holds".into()))?;
    for (p, k) in POWER_CONGRUENCE_PAIRS {
        let mut entry = power_congruence_entry(p, k, 1, reading);
        let printed_holds = power_congruence_holds(p, k, 1, PowerCongruenceReading::Printed);
        entry.note = Some(format!(
            "exponent read as {}; {} reading {}",
            reading.label(),
            PowerCongruenceReading::Printed.label(),
            if printed_holds { "also holds" } else { "fails" }
        ));
        out.push(entry);
    }
    out.extend(tail);
    Ok(out)
}

/// Every built-in identity, in a fixed order.
pub fn builtin_catalog() -> &'static [IdentityEntry] {
    static CATALOG: OnceLock<Vec<IdentityEntry>> = OnceLock::new();
    CATALOG.get_or_init(|| builtin_entries().expect("built-in catalog is well formed"))
}

pub fn find_entry<'a>(entries: &'a [IdentityEntry], id: &str) -> Result<&'a IdentityEntry> {
    entries
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::UnknownEntry(id.to_string()))
}
