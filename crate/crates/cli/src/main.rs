//! `splitter-lab`: search, verify and use splittings of `Z_n` from the shell.
//!
//! Exit codes: 0 affirmative, 1 definite negative, 2 inconclusive (budget),
//! 64 usage error. With `--json` every command prints one JSON document.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use splitter_core::characters::{
    character_splitter, is_k_radius_prime, radius_prime_splitting, scan_characters, Character,
    CharacterSpec, RadiusReport,
};
use splitter_core::codec::{decode, encode, syndrome, CodeSpec, Correction, Word};
use splitter_core::factorization::{verify_factorization, GroupContext};
use splitter_core::logarithms::{
    bootstrap_from_prime, direct_complement, enumerate_logarithms, find_split_primes,
    index_logarithm, is_bijective_logarithm, is_injective, is_logarithm, km_check,
    lift_8k_with_complement, KmMode, LogTable, ScanOptions,
};
use splitter_core::splitting::{
    find_splitter, search_primes, verify_splitting, MultiplierSet, SearchConfig,
    SplittingCertificate,
};
use splitter_core::structure::{
    build_b1, coset_cycle, verify_structure_theorem, B1Config, Family, Variant,
};
use splitter_core::zmod::is_prime;
use splitter_core::{Error, SearchOutcome, DEFAULT_BUDGET};

#[derive(Parser)]
#[command(
    name = "splitter-lab",
    version,
    about = "Splittings of Z_n by multiplier sets: search, verification, direct logarithms and a limited-magnitude error codec"
)]
struct Cli {
    /// Print one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for range scans. Output does not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Search node budget (per prime for scans). Defaults depend on the command.
    #[arg(long, global = true, env = "SPLITTER_LAB_BUDGET")]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that M*S covers Z_n \ {0} exactly once.
    Verify(VerifyArgs),
    /// Look for a splitter set of M at one modulus or every prime in a range.
    Search(SearchArgs),
    /// Find primes carrying a character with prescribed values.
    Scan(ScanArgs),
    /// Inspect a logarithm table, enumerate tables, or scan for split primes.
    Logarithm(LogarithmArgs),
    /// Test a table against the Kummer-Mills conditions.
    KmCheck(KmCheckArgs),
    /// Lift a direct logarithm f to 8f on Z_8k, with its block complement.
    Lift(TableArgs),
    /// List k-radius primes in a range.
    Radius(RadiusArgs),
    /// Build B1 for [-1,5]* from a family and one sign per coset.
    BuildB1(BuildB1Args),
    /// Enumerate splitter sets of [-1,5]* mod p and classify their trace on H.
    StructureReport(StructureArgs),
    /// Encode, decode or take syndromes with the code of a splitting.
    Codec(CodecArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, conflicts_with_all = ["modulus", "multipliers", "splitters"])]
    certificate: Option<PathBuf>,
    #[arg(long)]
    modulus: Option<u64>,
    /// `a..b` for [a,b] without 0, or a comma list.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_multipliers)]
    multipliers: Option<MultiplierSet>,
    #[arg(long, value_delimiter = ',')]
    splitters: Option<Vec<u64>>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_multipliers)]
    multipliers: MultiplierSet,
    #[arg(long, required_unless_present = "prime_range", conflicts_with = "prime_range")]
    modulus: Option<u64>,
    /// Inclusive `lo..hi`; every prime in it is searched.
    #[arg(long, value_parser = parse_range)]
    prime_range: Option<(u64, u64)>,
    /// Search in full even when M contains -1 and 1 and has odd size.
    #[arg(long)]
    no_guard: bool,
}

#[derive(Args)]
struct ScanArgs {
    /// Character spec JSON: {"k": .., "bases": [..], "targets": [..]}.
    #[arg(long, conflicts_with_all = ["k", "bases", "targets"])]
    spec: Option<PathBuf>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    bases: Option<Vec<i64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    targets: Option<Vec<i64>>,
    #[arg(long, value_parser = parse_range)]
    range: (u64, u64),
    /// Also pull back a splitting of this set through each character found.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_multipliers)]
    split: Option<MultiplierSet>,
}

#[derive(Args)]
struct TableArgs {
    /// Table JSON: {"domain": [..], "k": .., "values": [..]}.
    #[arg(long, conflicts_with_all = ["domain", "values", "k"])]
    table: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_multipliers)]
    domain: Option<MultiplierSet>,
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<u64>>,
    #[arg(long)]
    k: Option<u64>,
}

#[derive(Args)]
struct LogarithmArgs {
    #[command(flatten)]
    table: TableArgs,
    /// Index logarithm of a certificate of a prime field.
    #[arg(long, conflicts_with_all = ["table", "domain", "values", "k"])]
    certificate: Option<PathBuf>,
    /// `k1,k2,k`: list every bijective logarithm [-k1,k2]* -> Z_k.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    enumerate: Option<Vec<u64>>,
    /// Scan primes up to this bound for splittings of the table's domain.
    #[arg(long)]
    split_primes: Option<u64>,
    /// Start the scan from a splitting of this prime field instead of a table.
    #[arg(long, requires_all = ["multipliers", "split_primes"])]
    bootstrap: Option<u64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_multipliers)]
    multipliers: Option<MultiplierSet>,
    /// Keep at most this many certificates.
    #[arg(long)]
    max: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    AsStated,
    Strict,
}

#[derive(Args)]
struct KmCheckArgs {
    #[command(flatten)]
    table: TableArgs,
    #[arg(long, value_enum, default_value = "strict")]
    mode: ModeArg,
}

#[derive(Args)]
struct RadiusArgs {
    #[arg(long)]
    k: u64,
    #[arg(long, value_parser = parse_range)]
    range: (u64, u64),
    /// Attach the splittings of [1,k] and [-k,k]* at each prime.
    #[arg(long)]
    split: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    A,
    B,
}

#[derive(Args)]
struct BuildB1Args {
    #[arg(long)]
    prime: u64,
    #[arg(long, value_enum)]
    variant: VariantArg,
    /// One sign per coset, `+`/`-` or `1`/`-1`, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_sign)]
    signs: Vec<i8>,
}

#[derive(Args)]
struct StructureArgs {
    #[arg(long, required_unless_present = "range", conflicts_with = "range")]
    prime: Option<u64>,
    /// Every prime p = 1 (mod 6) in `lo..hi`.
    #[arg(long, value_parser = parse_range)]
    range: Option<(u64, u64)>,
}

#[derive(Args)]
struct CodecArgs {
    #[arg(long, conflicts_with_all = ["modulus", "multipliers", "splitters"])]
    certificate: Option<PathBuf>,
    #[arg(long)]
    modulus: Option<u64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_multipliers)]
    multipliers: Option<MultiplierSet>,
    /// Splitters in position order.
    #[arg(long, value_delimiter = ',')]
    splitters: Option<Vec<u64>>,
    /// Message symbols; the check symbol is appended.
    #[arg(long, value_delimiter = ',', num_args = 0.., conflicts_with_all = ["decode", "syndrome"])]
    encode: Option<Vec<u64>>,
    #[arg(long, value_delimiter = ',', conflicts_with = "syndrome")]
    decode: Option<Vec<u64>>,
    #[arg(long, value_delimiter = ',')]
    syndrome: Option<Vec<u64>>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Status {
    Yes,
    No,
    Unknown,
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Yes => 0,
            Status::No => 1,
            Status::Unknown => 2,
        }
    }

    fn from_outcomes<'a, T: 'a>(outcomes: impl IntoIterator<Item = &'a SearchOutcome<T>>) -> Self {
        let mut status = Status::No;
        for o in outcomes {
            match o {
                SearchOutcome::Found(_) => return Status::Yes,
                SearchOutcome::Inconclusive { .. } => status = Status::Unknown,
                SearchOutcome::Exhausted => {}
            }
        }
        status
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            let inconclusive = matches!(e.downcast_ref::<Error>(), Some(Error::Inconclusive { .. }));
            ExitCode::from(if inconclusive { 2 } else { 64 })
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<Status> {
    let out = Out { json: cli.json };
    let budget = cli.budget.unwrap_or(DEFAULT_BUDGET);
    let jobs = cli.jobs.max(1);
    match &cli.command {
        Command::Verify(a) => verify_cmd(out, a),
        Command::Search(a) => search_cmd(out, a, budget, jobs),
        Command::Scan(a) => scan_cmd(out, a, jobs),
        Command::Logarithm(a) => logarithm_cmd(out, a, cli.budget, jobs),
        Command::KmCheck(a) => km_cmd(out, a),
        Command::Lift(a) => lift_cmd(out, a),
        Command::Radius(a) => radius_cmd(out, a),
        Command::BuildB1(a) => build_b1_cmd(out, a),
        Command::StructureReport(a) => structure_cmd(out, a, budget),
        Command::Codec(a) => codec_cmd(out, a),
    }
}

#[derive(Clone, Copy)]
struct Out {
    json: bool,
}

impl Out {
    fn emit<T: Serialize>(self, value: &T, text: impl FnOnce() -> String) -> anyhow::Result<()> {
        let text = if self.json {
            serde_json::to_string(value)? + "\n"
        } else {
            text()
        };
        let mut stdout = std::io::stdout().lock();
        match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
            // a closed pipe downstream (`| head`) is not our failure
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        }
    }
}

fn parse_multipliers(s: &str) -> Result<MultiplierSet, String> {
    s.parse::<MultiplierSet>().map_err(|e| e.to_string())
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected lo..hi, got {s:?}"))?;
    let lo: u64 = lo.trim().parse().map_err(|e| format!("{lo:?}: {e}"))?;
    let hi: u64 = hi.trim().parse().map_err(|e| format!("{hi:?}: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {s}"));
    }
    Ok((lo, hi))
}

fn parse_sign(s: &str) -> Result<i8, String> {
    match s.trim() {
        "+" | "1" | "+1" => Ok(1),
        "-" | "-1" => Ok(-1),
        other => Err(format!("sign must be + or -, got {other:?}")),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn load_certificate(path: &Path) -> anyhow::Result<SplittingCertificate> {
    Ok(SplittingCertificate::from_json(&read(path)?)?)
}

fn require<T: Clone>(value: &Option<T>, flag: &str) -> anyhow::Result<T> {
    value.clone().ok_or_else(|| anyhow!("missing --{flag}"))
}

#[derive(Serialize)]
struct Rejected<'a> {
    modulus: u64,
    multipliers: &'a [i64],
    splitters: &'a [u64],
    verified: bool,
}

fn verify_cmd(out: Out, a: &VerifyArgs) -> anyhow::Result<Status> {
    if let Some(path) = &a.certificate {
        let cert = load_certificate(path)?;
        out.emit(&cert, || describe(&cert))?;
        return Ok(Status::Yes);
    }
    let n = require(&a.modulus, "modulus")?;
    let m = require(&a.multipliers, "multipliers")?;
    let mut s = require(&a.splitters, "splitters")?;
    s.sort_unstable();
    if verify_splitting(&m, &s, n) {
        let cert = SplittingCertificate::new(m, s, n)?;
        out.emit(&cert, || describe(&cert))?;
        return Ok(Status::Yes);
    }
    let rejected = Rejected {
        modulus: n,
        multipliers: m.elements(),
        splitters: &s,
        verified: false,
    };
    out.emit(&rejected, || format!("{m} * {{{}}} does not split Z_{n}\n", join(&s)))?;
    Ok(Status::No)
}

fn describe(cert: &SplittingCertificate) -> String {
    format!(
        "{} splits Z_{} with S = {{{}}}{}\n",
        cert.multipliers(),
        cert.modulus(),
        join(cert.splitters()),
        if cert.nonsingular() { "" } else { " (singular)" }
    )
}

#[derive(Serialize)]
struct SearchEntry {
    modulus: u64,
    outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<SplittingCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nodes: Option<u64>,
}

impl SearchEntry {
    fn new(modulus: u64, outcome: &SearchOutcome<SplittingCertificate>) -> Self {
        let (label, certificate, nodes) = match outcome {
            SearchOutcome::Found(c) => ("found", Some(c.clone()), None),
            SearchOutcome::Exhausted => ("none", None, None),
            SearchOutcome::Inconclusive { nodes } => ("inconclusive", None, Some(*nodes)),
        };
        SearchEntry {
            modulus,
            outcome: label,
            certificate,
            nodes,
        }
    }

    fn line(&self) -> String {
        match (&self.certificate, self.nodes) {
            (Some(c), _) => format!("{:>8}  found  S = {{{}}}\n", self.modulus, join(c.splitters())),
            (None, Some(nodes)) => format!("{:>8}  inconclusive after {nodes} nodes\n", self.modulus),
            (None, None) => format!("{:>8}  none\n", self.modulus),
        }
    }
}

#[derive(Serialize)]
struct RangeSearch<'a> {
    multipliers: &'a [i64],
    range: [u64; 2],
    results: Vec<SearchEntry>,
}

fn search_cmd(out: Out, a: &SearchArgs, budget: u64, jobs: usize) -> anyhow::Result<Status> {
    let config = SearchConfig {
        budget,
        use_guard: !a.no_guard,
    };
    if let Some(n) = a.modulus {
        let outcome = find_splitter(&a.multipliers, n, &config);
        let entry = SearchEntry::new(n, &outcome);
        out.emit(&entry, || entry.line())?;
        return Ok(Status::from_outcomes([&outcome]));
    }
    let (lo, hi) = a.prime_range.expect("clap requires a modulus or a range");
    let outcomes = search_primes(&a.multipliers, lo, hi, &config, jobs);
    let status = Status::from_outcomes(outcomes.iter().map(|(_, o)| o));
    let report = RangeSearch {
        multipliers: a.multipliers.elements(),
        range: [lo, hi],
        results: outcomes.iter().map(|(p, o)| SearchEntry::new(*p, o)).collect(),
    };
    out.emit(&report, || {
        let mut text: String = report
            .results
            .iter()
            .filter(|e| e.outcome != "none")
            .map(SearchEntry::line)
            .collect();
        let count = |label| report.results.iter().filter(|e| e.outcome == label).count();
        text += &format!(
            "{} over primes in [{lo}, {hi}]: {} found, {} none, {} inconclusive\n",
            a.multipliers,
            count("found"),
            count("none"),
            count("inconclusive")
        );
        text
    })?;
    Ok(status)
}

#[derive(Serialize)]
struct ScanReport {
    spec: CharacterSpec,
    range: [u64; 2],
    characters: Vec<Character>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificates: Option<Vec<SplittingCertificate>>,
}

fn scan_cmd(out: Out, a: &ScanArgs, jobs: usize) -> anyhow::Result<Status> {
    let spec = match &a.spec {
        Some(path) => CharacterSpec::from_json(&read(path)?)?,
        None => CharacterSpec::new(
            require(&a.k, "k")?,
            require(&a.bases, "bases")?,
            require(&a.targets, "targets")?,
        )?,
    };
    let (lo, hi) = a.range;
    let characters = scan_characters(&spec, lo, hi, jobs);
    let certificates = match &a.split {
        Some(m) => {
            let mut certs = Vec::new();
            for chi in &characters {
                if let Some(c) = character_splitter(chi, m)? {
                    certs.push(c);
                }
            }
            Some(certs)
        }
        None => None,
    };
    let found = !characters.is_empty();
    let report = ScanReport {
        spec,
        range: [lo, hi],
        characters,
        certificates,
    };
    out.emit(&report, || {
        let mut text = String::new();
        for chi in &report.characters {
            text += &format!("p = {:<8} g = {:<6} x = {}\n", chi.p, chi.g, chi.x);
        }
        for c in report.certificates.iter().flatten() {
            text += &describe(c);
        }
        text += &format!("{} matching primes in [{lo}, {hi}]\n", report.characters.len());
        text
    })?;
    Ok(if found { Status::Yes } else { Status::No })
}

fn load_table(a: &TableArgs) -> anyhow::Result<LogTable> {
    if let Some(path) = &a.table {
        return Ok(LogTable::from_json(&read(path)?)?);
    }
    Ok(LogTable::new(
        require(&a.domain, "domain")?,
        require(&a.k, "k")?,
        require(&a.values, "values")?,
    )?)
}

fn has_table(a: &TableArgs) -> bool {
    a.table.is_some() || a.domain.is_some() || a.values.is_some() || a.k.is_some()
}

#[derive(Serialize)]
struct TableReport {
    table: LogTable,
    logarithm: bool,
    injective: bool,
    bijective: bool,
    /// `None` when the complement search ran out of budget.
    direct: Option<bool>,
    complement: Option<Vec<u64>>,
}

#[derive(Serialize)]
struct Certificates {
    count: usize,
    certificates: Vec<SplittingCertificate>,
}

#[derive(Serialize)]
struct Tables {
    tables: Vec<LogTable>,
}

fn logarithm_cmd(out: Out, a: &LogarithmArgs, budget: Option<u64>, jobs: usize) -> anyhow::Result<Status> {
    if let Some(spec) = &a.enumerate {
        let [k1, k2, k] = spec[..] else {
            bail!("--enumerate takes k1,k2,k");
        };
        let tables = Tables {
            tables: enumerate_logarithms(k1, k2, k)?,
        };
        out.emit(&tables, || {
            let mut text: String = tables.tables.iter().map(|t| t.to_json() + "\n").collect();
            text += &format!("{} bijective logarithms\n", tables.tables.len());
            text
        })?;
        return Ok(if tables.tables.is_empty() { Status::No } else { Status::Yes });
    }
    if let Some(bound) = a.split_primes {
        let options = ScanOptions {
            jobs,
            budget: budget.unwrap_or(ScanOptions::default().budget),
            max_results: a.max,
        };
        let certificates = match a.bootstrap {
            Some(q) => bootstrap_from_prime(&require(&a.multipliers, "multipliers")?, q, bound, &options)?,
            None => find_split_primes(&table_or_certificate(a)?, bound, &options)?,
        };
        let report = Certificates {
            count: certificates.len(),
            certificates,
        };
        out.emit(&report, || {
            let mut text: String = report.certificates.iter().map(describe).collect();
            text += &format!("{} split primes up to {bound}\n", report.count);
            text
        })?;
        return Ok(if report.count > 0 { Status::Yes } else { Status::No });
    }
    let table = table_or_certificate(a)?;
    let logarithm = is_logarithm(&table);
    let injective = is_injective(&table);
    let (direct, complement) = if logarithm && injective {
        match direct_complement(&table, budget.unwrap_or(DEFAULT_BUDGET)) {
            SearchOutcome::Found(c) => (Some(true), Some(c)),
            SearchOutcome::Exhausted => (Some(false), None),
            SearchOutcome::Inconclusive { .. } => (None, None),
        }
    } else {
        (Some(false), None)
    };
    let report = TableReport {
        bijective: is_bijective_logarithm(&table),
        table,
        logarithm,
        injective,
        direct,
        complement,
    };
    out.emit(&report, || {
        let mut text = report.table.to_json() + "\n";
        text += &format!(
            "logarithm: {}\ninjective: {}\nbijective: {}\n",
            report.logarithm, report.injective, report.bijective
        );
        text += &match (&report.direct, &report.complement) {
            (Some(true), Some(c)) => format!("direct: true, complement {{{}}}\n", join(c)),
            (None, _) => "direct: inconclusive\n".to_string(),
            _ => "direct: false\n".to_string(),
        };
        text
    })?;
    Ok(match report.direct {
        Some(true) => Status::Yes,
        Some(false) => Status::No,
        None => Status::Unknown,
    })
}

fn table_or_certificate(a: &LogarithmArgs) -> anyhow::Result<LogTable> {
    match &a.certificate {
        Some(path) => Ok(index_logarithm(&load_certificate(path)?)?.0),
        None if has_table(&a.table) => load_table(&a.table),
        None => bail!("give a table (--table or --domain/--values/--k) or --certificate"),
    }
}

fn km_cmd(out: Out, a: &KmCheckArgs) -> anyhow::Result<Status> {
    let table = load_table(&a.table)?;
    let mode = match a.mode {
        ModeArg::AsStated => KmMode::AsStated,
        ModeArg::Strict => KmMode::Strict,
    };
    let verdict = km_check(&table, mode)?;
    out.emit(&verdict, || {
        let mut text = format!(
            "{} ({:?} clause, {:?} mode)\n",
            if verdict.admissible { "admissible" } else { "not admissible" },
            verdict.clause,
            verdict.mode
        );
        for v in &verdict.violations {
            text += &format!("  {v}\n");
        }
        text
    })?;
    Ok(if verdict.admissible { Status::Yes } else { Status::No })
}

#[derive(Serialize)]
struct Lifted {
    table: LogTable,
    complement: Vec<u64>,
}

fn lift_cmd(out: Out, a: &TableArgs) -> anyhow::Result<Status> {
    let (table, complement) = lift_8k_with_complement(&load_table(a)?)?;
    let lifted = Lifted { table, complement };
    out.emit(&lifted, || {
        format!(
            "{}\ncomplement {{{}}}\n",
            lifted.table.to_json(),
            join(&lifted.complement)
        )
    })?;
    Ok(Status::Yes)
}

#[derive(Serialize)]
struct RadiusEntry {
    #[serde(flatten)]
    report: RadiusReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificates: Option<[SplittingCertificate; 2]>,
}

#[derive(Serialize)]
struct RadiusList {
    k: u64,
    range: [u64; 2],
    primes: Vec<RadiusEntry>,
}

fn radius_cmd(out: Out, a: &RadiusArgs) -> anyhow::Result<Status> {
    if a.k == 0 {
        bail!("k must be positive");
    }
    let (lo, hi) = a.range;
    let mut primes = Vec::new();
    for p in (lo.max(2)..=hi).filter(|&p| is_prime(p)) {
        let report = is_k_radius_prime(p, a.k)?;
        if !report.is_radius_prime() {
            continue;
        }
        let certificates = if a.split {
            let (interval, symmetric) = radius_prime_splitting(p, a.k)?;
            Some([interval, symmetric])
        } else {
            None
        };
        primes.push(RadiusEntry { report, certificates });
    }
    let list = RadiusList {
        k: a.k,
        range: [lo, hi],
        primes,
    };
    out.emit(&list, || {
        let mut text = String::new();
        for e in &list.primes {
            text += &format!("{}\n", e.report.p);
            for c in e.certificates.iter().flatten() {
                text += &format!("  {}", describe(c));
            }
        }
        text
    })?;
    Ok(if list.primes.is_empty() { Status::No } else { Status::Yes })
}

#[derive(Serialize)]
struct B1Report {
    p: u64,
    variant: Variant,
    cycle_length: usize,
    signs: Vec<i8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b1: Option<Vec<u64>>,
    /// `[-1,5]* · B1 = H` as a factorization.
    #[serde(skip_serializing_if = "Option::is_none")]
    factors_h: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    conflict: Option<usize>,
}

fn build_b1_cmd(out: Out, a: &BuildB1Args) -> anyhow::Result<Status> {
    let p = a.prime;
    let variant = match a.variant {
        VariantArg::A => Variant::A,
        VariantArg::B => Variant::B,
    };
    let cycle = coset_cycle(p, variant)?;
    let config = B1Config {
        variant,
        signs: a.signs.clone(),
    };
    let mut report = B1Report {
        p,
        variant,
        cycle_length: cycle.length,
        signs: a.signs.clone(),
        b1: None,
        factors_h: None,
        conflict: None,
    };
    match build_b1(p, &config) {
        Ok(b1) => {
            let h = GroupContext::generated(p, &[-1, 2, 3, 4, 5])?;
            let m: Vec<u64> = [-1i64, 1, 2, 3, 4, 5]
                .iter()
                .map(|&x| x.rem_euclid(p as i64) as u64)
                .collect();
            report.factors_h = Some(verify_factorization(&m, &b1, &h)?);
            report.b1 = Some(b1);
        }
        Err(Error::SignConflict(k)) => report.conflict = Some(k),
        Err(e) => return Err(e.into()),
    }
    out.emit(&report, || match (&report.b1, report.conflict) {
        (Some(b1), _) => format!(
            "B1 = {{{}}}\ncosets: {}\n[-1,5]* * B1 = H: {}\n",
            join(b1),
            report.cycle_length,
            report.factors_h == Some(true)
        ),
        (None, Some(k)) => format!("sign {k} makes two cosets collide\n"),
        (None, None) => unreachable!("either built or conflicting"),
    })?;
    Ok(if report.factors_h == Some(true) { Status::Yes } else { Status::No })
}

fn structure_cmd(out: Out, a: &StructureArgs, budget: u64) -> anyhow::Result<Status> {
    let primes: Vec<u64> = match (a.prime, a.range) {
        (Some(p), _) => vec![p],
        (None, Some((lo, hi))) => (lo..=hi).filter(|&p| p % 6 == 1 && is_prime(p)).collect(),
        (None, None) => unreachable!("clap requires one of them"),
    };
    let mut reports = Vec::new();
    for p in primes {
        reports.push(verify_structure_theorem(p, budget)?);
    }
    let holds = reports.iter().all(|r| {
        r.forced_memberships && (r.splitters_found == 0 || r.family != Family::None)
    });
    let value = match &reports[..] {
        [one] if a.prime.is_some() => OneOrMany::One(one),
        all => OneOrMany::Many(all),
    };
    out.emit(&value, || {
        reports
            .iter()
            .map(|r| {
                format!(
                    "p = {}: {} traces on H, family {:?}, forced memberships {}\n",
                    r.p,
                    r.splitters_found,
                    r.family,
                    if r.forced_memberships { "hold" } else { "fail" }
                )
            })
            .collect()
    })?;
    Ok(if holds { Status::Yes } else { Status::No })
}

#[derive(Serialize)]
#[serde(untagged)]
enum OneOrMany<'a, T> {
    One(&'a T),
    Many(&'a [T]),
}

#[derive(Serialize)]
struct CodecReport {
    operation: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    word: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    syndrome: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    correction: Option<Correction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    uncorrectable: Option<u64>,
}

fn codec_cmd(out: Out, a: &CodecArgs) -> anyhow::Result<Status> {
    let spec = match &a.certificate {
        Some(path) => CodeSpec::from_certificate(load_certificate(path)?)?,
        None => CodeSpec::new(
            require(&a.modulus, "modulus")?,
            require(&a.multipliers, "multipliers")?,
            require(&a.splitters, "splitters")?,
        )?,
    };
    let mut report = CodecReport {
        operation: "",
        word: None,
        syndrome: None,
        correction: None,
        uncorrectable: None,
    };
    if let Some(message) = &a.encode {
        report.operation = "encode";
        report.word = Some(encode(&spec, message)?.symbols);
    } else if let Some(received) = &a.decode {
        report.operation = "decode";
        match decode(&spec, &Word::new(received.clone())) {
            Ok(d) => {
                report.word = Some(d.word.symbols);
                report.correction = d.correction;
            }
            Err(Error::Uncorrectable(s)) => report.uncorrectable = Some(s),
            Err(e) => return Err(e.into()),
        }
    } else if let Some(word) = &a.syndrome {
        report.operation = "syndrome";
        report.syndrome = Some(syndrome(&spec, &Word::new(word.clone()))?);
    } else {
        bail!("give one of --encode, --decode, --syndrome");
    }
    out.emit(&report, || {
        let mut text = String::new();
        if let Some(w) = &report.word {
            text += &format!("word {}\n", join(w));
        }
        if let Some(s) = report.syndrome {
            text += &format!("syndrome {s}\n");
        }
        if let Some(c) = &report.correction {
            text += &format!("corrected {:+} at position {}\n", c.magnitude, c.position);
        }
        if let Some(s) = report.uncorrectable {
            text += &format!("uncorrectable: syndrome {s} is no m*s_i\n");
        }
        text
    })?;
    Ok(if report.uncorrectable.is_some() { Status::No } else { Status::Yes })
}
