//! `rdq`: partition tables, identity checks and congruence checks for
//! regular-distinct partitions.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use rdq::catalog::{builtin_catalog, check_identity, parse_catalog, verify_identity, IdentityEntry, VerifyMode};
use rdq::congruence::{
    check_claim, claims_lemma11, claims_thm31, claims_thm41, claims_thm51, claims_thm61, rd_table,
    rd_table_from_series, scan_congruences, CongruenceClaim, DEFAULT_ARGUMENT_BOUND,
};
use rdq::partition::{count_distinct, count_rd, count_regular, enumerate_rd, CountTable};
use rdq::report::{Status, VerificationReport};
use rdq::{Error, Integers, Modular, Ring};

const SCHEMA_VERSION: &str = "1";

/// Largest table a theorem check will build.
const TABLE_LIMIT: u64 = 5_000_000;

#[derive(Parser)]
#[command(name = "rdq", version, about = "Partition counts and congruences for RD(l,t)")]
struct Cli {
    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a table of partition counts.
    Compute {
        #[command(subcommand)]
        kind: ComputeKind,
    },
    /// List the RD(l,t) partitions of n.
    Enumerate {
        #[arg(long, default_value_t = 4)]
        ell: usize,
        #[arg(long, default_value_t = 9)]
        t: usize,
        #[arg(long)]
        n: usize,
    },
    /// Check catalog identities or congruence families.
    Verify {
        #[command(subcommand)]
        kind: VerifyKind,
    },
    /// Search for progressions on which RD(l,t) vanishes modulo M.
    Scan {
        #[arg(long, default_value_t = 4)]
        ell: usize,
        #[arg(long, default_value_t = 9)]
        t: usize,
        #[arg(long, default_value_t = 24)]
        amax: u64,
        #[arg(long = "mod", value_delimiter = ',', default_values_t = [2u64, 3, 4, 6, 12, 24])]
        moduli: Vec<u64>,
        /// Every n up to this bound must vanish.
        #[arg(long, default_value_t = 200)]
        evidence: u64,
    },
    /// Inspect the identity catalog.
    Catalog {
        #[command(subcommand)]
        kind: CatalogKind,
    },
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    nmax: usize,
    /// Reduce counts modulo m.
    #[arg(long = "mod")]
    modulus: Option<u64>,
}

#[derive(Subcommand)]
enum ComputeKind {
    /// Parts not divisible by l, each used fewer than t times.
    Rd {
        #[arg(long, default_value_t = 4)]
        ell: usize,
        #[arg(long, default_value_t = 9)]
        t: usize,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Parts not divisible by l.
    Regular {
        #[arg(long)]
        ell: usize,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Each part used fewer than t times.
    Distinct {
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        table: TableArgs,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Theorem {
    #[value(name = "lemma1.1")]
    Lemma11,
    #[value(name = "3.1")]
    Thm31,
    #[value(name = "4.1")]
    Thm41,
    #[value(name = "5.1")]
    Thm51,
    #[value(name = "6.1")]
    Thm61,
}

impl Theorem {
    fn name(self) -> &'static str {
        match self {
            Theorem::Lemma11 => "lemma1.1",
            Theorem::Thm31 => "3.1",
            Theorem::Thm41 => "4.1",
            Theorem::Thm51 => "5.1",
            Theorem::Thm61 => "6.1",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableSource {
    /// Partition-counting recurrence.
    Recurrence,
    /// Coefficients of the eta quotient.
    Series,
}

impl TableSource {
    fn name(self) -> &'static str {
        match self {
            TableSource::Recurrence => "recurrence",
            TableSource::Series => "series",
        }
    }
}

#[derive(Subcommand)]
enum VerifyKind {
    /// Check one catalog entry, or `all`.
    Identity {
        id: String,
        /// Coefficients to compare; defaults to each entry's own depth.
        #[arg(long)]
        depth: Option<usize>,
        /// Read entries from this file instead of the built-in catalog.
        #[arg(long)]
        catalog: Option<PathBuf>,
        /// Compute congruences exactly and reduce afterwards.
        #[arg(long)]
        audit: bool,
    },
    /// Check a congruence family.
    Theorem {
        theorem: Theorem,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long)]
        alpha: Option<u32>,
        /// Check n = 0..=nmax for every claim.
        #[arg(long)]
        nmax: Option<u64>,
        #[arg(long, value_enum, default_value_t = TableSource::Recurrence)]
        table: TableSource,
    },
}

#[derive(Subcommand)]
enum CatalogKind {
    List {
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct RunConfig {
    command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_max: Option<u64>,
    modulus: ModulusMode,
    selection: Vec<String>,
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
enum ModulusMode {
    Exact,
    Mod(u64),
    Moduli(Vec<u64>),
}

#[derive(Serialize)]
struct Output<'a, T: Serialize> {
    version: &'static str,
    config: &'a RunConfig,
    results: &'a [T],
}

#[derive(Serialize)]
struct TableRow {
    n: usize,
    value: String,
}

#[derive(Serialize)]
struct PartitionRow {
    n: usize,
    partition: String,
}

#[derive(Serialize)]
struct CatalogRow {
    id: String,
    depth: usize,
    identity: String,
}

/// Writes the report; a closed stdout (say, piped into `head`) ends output quietly.
fn emit<T: Serialize>(json: bool, config: &RunConfig, rows: &[T], line: impl Fn(&T) -> String) {
    let mut out = std::io::stdout().lock();
    let written = if json {
        let doc = Output {
            version: SCHEMA_VERSION,
            config,
            results: rows,
        };
        serde_json::to_writer_pretty(&mut out, &doc)
            .map_err(std::io::Error::from)
            .and_then(|()| writeln!(out))
    } else {
        rows.iter().try_for_each(|r| writeln!(out, "{}", line(r)))
    };
    if let Err(e) = written.and_then(|()| out.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
        }
    }
}

fn exit_for(reports: &[VerificationReport]) -> ExitCode {
    if reports.iter().any(|r| r.status == Status::Fail) {
        ExitCode::from(1)
    } else if reports.iter().any(|r| r.status == Status::InsufficientPrecision) {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}

fn table_rows<R: Ring>(table: &CountTable<R>) -> Vec<TableRow> {
    table
        .counts
        .iter()
        .enumerate()
        .map(|(n, v)| TableRow {
            n,
            value: table.ring.to_bigint(v).to_string(),
        })
        .collect()
}

fn count_for<R: Ring>(kind: &ComputeKind, nmax: usize, ring: R) -> Result<CountTable<R>, Error> {
    match *kind {
        ComputeKind::Rd { ell, t, .. } => count_rd(ell, t, nmax, ring),
        ComputeKind::Regular { ell, .. } => count_regular(ell, nmax, ring),
        ComputeKind::Distinct { t, .. } => count_distinct(t, nmax, ring),
    }
}

fn compute(kind: ComputeKind) -> Result<(RunConfig, Vec<TableRow>), Error> {
    let (name, table) = match &kind {
        ComputeKind::Rd { ell, t, table } => (format!("compute rd ell={ell} t={t}"), table),
        ComputeKind::Regular { ell, table } => (format!("compute regular ell={ell}"), table),
        ComputeKind::Distinct { t, table } => (format!("compute distinct t={t}"), table),
    };
    let nmax = table.nmax;
    let rows = match table.modulus {
        None => table_rows(&count_for(&kind, nmax, Integers::new())?),
        Some(m) => {
            let ring = Modular::try_new(m).ok_or_else(|| Error::InvalidArgument(format!("bad modulus {m}")))?;
            table_rows(&count_for(&kind, nmax, ring)?)
        }
    };
    let config = RunConfig {
        command: name,
        depth: None,
        n_max: Some(nmax as u64),
        modulus: table.modulus.map_or(ModulusMode::Exact, ModulusMode::Mod),
        selection: Vec::new(),
    };
    Ok((config, rows))
}

fn load_catalog(path: Option<&PathBuf>) -> Result<Vec<IdentityEntry>, Error> {
    match path {
        None => Ok(builtin_catalog().to_vec()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", p.display())))?;
            parse_catalog(&text)
        }
    }
}

fn verify_identities(
    id: &str,
    depth: Option<usize>,
    catalog: Option<&PathBuf>,
    audit: bool,
) -> Result<(RunConfig, Vec<VerificationReport>), Error> {
    let entries = load_catalog(catalog)?;
    let selected: Vec<&IdentityEntry> = if id == "all" {
        entries.iter().collect()
    } else {
        vec![rdq::catalog::find_entry(&entries, id)?]
    };
    let reports = selected
        .par_iter()
        .map(|e| {
            let terms = depth.unwrap_or(e.default_depth);
            if audit && terms >= rdq::catalog::MIN_CERTIFIED_TERMS {
                check_identity(e, terms, VerifyMode::ExactThenReduce)
            } else {
                verify_identity(e, terms)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let config = RunConfig {
        command: format!("verify identity{}", if audit { " audit" } else { "" }),
        depth,
        n_max: None,
        modulus: ModulusMode::Exact,
        selection: selected.iter().map(|e| e.id.clone()).collect(),
    };
    Ok((config, reports))
}

fn theorem_claims(which: Theorem, prime: Option<u64>, alpha: Option<u32>) -> Result<Vec<CongruenceClaim>, Error> {
    let alphas = |default: &[u32]| alpha.map_or(default.to_vec(), |a| vec![a]);
    let primes = |default: &[u64]| prime.map_or(default.to_vec(), |p| vec![p]);
    let mut claims = Vec::new();
    match which {
        Theorem::Lemma11 => claims = claims_lemma11(),
        Theorem::Thm61 => claims = claims_thm61(),
        Theorem::Thm41 => {
            for a in alphas(&[0, 1]) {
                claims.extend(claims_thm41(a)?);
            }
        }
        Theorem::Thm31 => {
            for p in primes(&[3, 7, 11]) {
                for a in alphas(&[0, 1]) {
                    claims.extend(claims_thm31(p, a)?);
                }
            }
        }
        Theorem::Thm51 => {
            for p in primes(&[5, 11]) {
                for a in alphas(&[0, 1]) {
                    claims.extend(claims_thm51(p, a)?);
                }
            }
        }
    }
    Ok(claims)
}

/// Checks run to `--nmax` when given. Otherwise the `lemma1.1` and `6.1` families use
/// `n <= 1000` and the other families stop before arguments pass 10^5.
fn claim_n_max(which: Theorem, nmax: Option<u64>, claim: &CongruenceClaim) -> u64 {
    match (nmax, which) {
        (Some(n), _) => n,
        (None, Theorem::Lemma11 | Theorem::Thm61) => 1000,
        (None, _) => claim.n_max_within(DEFAULT_ARGUMENT_BOUND).unwrap_or(0),
    }
}

fn verify_theorem(
    which: Theorem,
    prime: Option<u64>,
    alpha: Option<u32>,
    nmax: Option<u64>,
    source: TableSource,
) -> Result<(RunConfig, Vec<VerificationReport>), Error> {
    let claims = theorem_claims(which, prime, alpha)?;
    let plan: Vec<(CongruenceClaim, u64)> = claims
        .into_iter()
        .map(|c| {
            let n = claim_n_max(which, nmax, &c);
            (c, n)
        })
        .collect();
    let needed = plan
        .iter()
        .map(|(c, n)| c.a.checked_mul(*n).and_then(|x| x.checked_add(c.b)))
        .try_fold(0u64, |acc, x| x.map(|x| acc.max(x)))
        .filter(|&x| x <= TABLE_LIMIT)
        .ok_or_else(|| Error::TooLarge(format!("arguments beyond {TABLE_LIMIT}")))?;
    let ring = Modular::new(24);
    let table = match source {
        TableSource::Recurrence => rd_table(4, 9, needed as usize, ring)?,
        TableSource::Series => rd_table_from_series(4, 9, needed as usize, ring)?,
    };
    let reports = plan
        .par_iter()
        .map(|(c, n)| check_claim(c, *n, &table))
        .collect::<Result<Vec<_>, _>>()?;
    let config = RunConfig {
        command: format!("verify theorem {} table={}", which.name(), source.name()),
        depth: Some(table.values.len()),
        n_max: nmax,
        modulus: ModulusMode::Mod(24),
        selection: plan.iter().map(|(c, _)| c.provenance.clone()).collect(),
    };
    Ok((config, reports))
}

struct CliError(Error);

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError(e)
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let json = cli.json;
    let report_line = |r: &VerificationReport| r.to_string();
    match cli.command {
        Command::Compute { kind } => {
            let (config, rows) = compute(kind)?;
            emit(json, &config, &rows, |r| format!("{} {}", r.n, r.value));
            Ok(ExitCode::SUCCESS)
        }
        Command::Enumerate { ell, t, n } => {
            let rows: Vec<PartitionRow> = enumerate_rd(ell, t, n)?
                .into_iter()
                .map(|p| PartitionRow {
                    n,
                    partition: p.to_string(),
                })
                .collect();
            let config = RunConfig {
                command: format!("enumerate ell={ell} t={t}"),
                depth: None,
                n_max: Some(n as u64),
                modulus: ModulusMode::Exact,
                selection: Vec::new(),
            };
            emit(json, &config, &rows, |r| r.partition.clone());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { kind } => {
            let (config, reports) = match kind {
                VerifyKind::Identity {
                    id,
                    depth,
                    catalog,
                    audit,
                } => verify_identities(&id, depth, catalog.as_ref(), audit)?,
                VerifyKind::Theorem {
                    theorem,
                    prime,
                    alpha,
                    nmax,
                    table,
                } => verify_theorem(theorem, prime, alpha, nmax, table)?,
            };
            emit(json, &config, &reports, report_line);
            Ok(exit_for(&reports))
        }
        Command::Scan {
            ell,
            t,
            amax,
            moduli,
            evidence,
        } => {
            let hits = scan_congruences(ell, t, amax, &moduli, evidence)?;
            let config = RunConfig {
                command: format!("scan ell={ell} t={t} amax={amax} evidence={evidence}"),
                depth: None,
                n_max: Some(evidence),
                modulus: ModulusMode::Moduli(moduli),
                selection: Vec::new(),
            };
            emit(json, &config, &hits, |h| format!("{} {} {}", h.a, h.b, h.modulus));
            Ok(ExitCode::SUCCESS)
        }
        Command::Catalog {
            kind: CatalogKind::List { catalog },
        } => {
            let rows: Vec<CatalogRow> = load_catalog(catalog.as_ref())?
                .iter()
                .map(|e| CatalogRow {
                    id: e.id.clone(),
                    depth: e.default_depth,
                    identity: e.identity_text(),
                })
                .collect();
            let config = RunConfig {
                command: "catalog list".into(),
                depth: None,
                n_max: None,
                modulus: ModulusMode::Exact,
                selection: rows.iter().map(|r| r.id.clone()).collect(),
            };
            emit(json, &config, &rows, |r| format!("{}: {}", r.id, r.identity));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs as usize).build();
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(cli)) {
        Ok(code) => code,
        Err(CliError(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
