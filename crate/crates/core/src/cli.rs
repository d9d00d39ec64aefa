//! Command-line front end of the `tdw` binary.

use std::ffi::OsString;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::check::{
    check_kontsevich_barannikov, check_log_corollary, check_log_quasi_iso, check_sum_of_vanishing_cycles,
    linear_change, milnor_number, random_unimodular, CheckOptions, Evidence, LabeledTrace, Scope, TheoremVerdict,
};
use crate::cohomology::{
    koszul_cohomology_dims, log_koszul_cohomology_dims, truncated_complex_dims, ComplexSpec, DimensionReport, Operator,
    Truncation,
};
use crate::error::{Error, Result};
use crate::forms::FormContext;
use crate::parse::{parse_polynomial, render_monomial, VarDecl};
use crate::poly::{Exponents, MonomialOrder, Polynomial};

/// Long options that may also be spelled with a single dash.
const LONG_FLAGS: &[&str] = &["vars", "log", "order", "format", "seed", "timing", "d0", "pole-bound", "max-doublings", "meromorphic"];

#[derive(Parser, Debug)]
#[command(name = "tdw", version, about = "Exact cohomology dimensions of Koszul and twisted de Rham complexes")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Milnor number dim Q[x]/J(f)
    Milnor(InputArgs),
    /// Cohomology of (Ω, df∧), or of its log variant with --log
    Koszul(InputArgs),
    /// Cohomology of (Ω, d − df∧), in log mode with --log, meromorphic with --meromorphic
    Twisted(InputArgs),
    /// twisted = Koszul dimensions
    CheckKb(InputArgs),
    /// twisted-log = log-Koszul dimensions
    CheckLog(InputArgs),
    /// sum of Milnor numbers = twisted dimensions
    CheckSum(InputArgs),
    /// log = meromorphic (twisted) and log-Koszul = pole-graded meromorphic
    CheckQuasiIso(InputArgs),
    /// Runs every applicable check on a JSONL corpus
    Corpus(CorpusArgs),
}

#[derive(Args, Debug, Clone)]
struct InputArgs {
    /// Polynomial expression
    #[arg(short = 'f')]
    f: String,
    /// Comma-separated variable names; inferred from the expression when absent
    #[arg(long, value_delimiter = ',')]
    vars: Option<Vec<String>>,
    /// Comma-separated divisor variables
    #[arg(long = "log", value_delimiter = ',')]
    divisor: Option<Vec<String>>,
    /// Use meromorphic coefficients along the divisor (twisted only)
    #[arg(long)]
    meromorphic: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug, Clone)]
struct CorpusArgs {
    /// JSONL corpus file
    path: PathBuf,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// Initial weighted degree bound of the truncation window
    #[arg(long)]
    d0: Option<i64>,
    /// Initial pole bound for meromorphic windows
    #[arg(long, default_value_t = 2)]
    pole_bound: u32,
    /// Number of window doublings before giving up
    #[arg(long, env = "TDW_MAX_DOUBLINGS", default_value_t = 4)]
    max_doublings: u32,
    /// Monomial order: degrevlex, lex, or wdegrevlex:w1,w2,...
    #[arg(long, default_value = "degrevlex")]
    order: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report to a file instead of stdout
    #[arg(short = 'o')]
    output: Option<PathBuf>,
    /// Seed for randomized coordinate-change checks in corpus runs
    #[arg(long)]
    seed: Option<u64>,
    /// Include wall-clock timings (reports are then no longer reproducible)
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Milnor,
    Koszul,
    Twisted,
    CheckKb,
    CheckLog,
    CheckSum,
    CheckQuasiIso,
    Corpus,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Milnor => "milnor",
            Command::Koszul => "koszul",
            Command::Twisted => "twisted",
            Command::CheckKb => "check-kb",
            Command::CheckLog => "check-log",
            Command::CheckSum => "check-sum",
            Command::CheckQuasiIso => "check-quasi-iso",
            Command::Corpus => "corpus",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    /// Expression text, or the corpus path for `corpus`.
    pub f: String,
    pub vars: Option<Vec<String>>,
    pub divisor: Vec<String>,
    pub meromorphic: bool,
    pub truncation: Truncation,
    pub order: MonomialOrder,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
    pub timing: bool,
}

impl RunConfig {
    pub fn new(command: Command, f: &str) -> Self {
        RunConfig {
            command,
            f: f.into(),
            vars: None,
            divisor: Vec::new(),
            meromorphic: false,
            truncation: Truncation::default(),
            order: MonomialOrder::DegRevLex,
            format: Format::Json,
            output: None,
            seed: None,
            timing: false,
        }
    }

    fn options(&self) -> CheckOptions {
        CheckOptions { order: self.order.clone(), truncation: self.truncation.clone() }
    }
}

/// Rewrites `-vars` to `--vars` for the known long options.
fn normalize_args<I: IntoIterator<Item = OsString>>(args: I) -> Vec<OsString> {
    args.into_iter()
        .map(|a| match a.to_str() {
            Some(s) if s.starts_with('-') && !s.starts_with("--") => {
                let name = s[1..].split('=').next().unwrap_or("");
                if LONG_FLAGS.contains(&name) {
                    OsString::from(format!("-{s}"))
                } else {
                    a
                }
            }
            _ => a,
        })
        .collect()
}

pub fn parse_order(s: &str) -> Result<MonomialOrder> {
    match s {
        "degrevlex" | "grevlex" => Ok(MonomialOrder::DegRevLex),
        "lex" => Ok(MonomialOrder::Lex),
        _ => {
            let w = s
                .strip_prefix("wdegrevlex:")
                .ok_or_else(|| Error::InvalidInput(format!("unknown monomial order `{s}`")))?;
            let weights = w
                .split(',')
                .map(|x| x.trim().parse::<u64>().ok().filter(|&v| v > 0))
                .collect::<Option<Vec<u64>>>()
                .ok_or_else(|| Error::InvalidInput(format!("bad weights `{w}`")))?;
            Ok(MonomialOrder::WeightedDegRevLex(weights))
        }
    }
}

fn config_from(command: Command, f: String, input: Option<&InputArgs>, common: &CommonArgs) -> Result<RunConfig> {
    if matches!(common.d0, Some(d) if d <= 0) || common.pole_bound == 0 {
        return Err(Error::InvalidInput("truncation bounds must be positive".into()));
    }
    Ok(RunConfig {
        command,
        f,
        vars: input.and_then(|i| i.vars.clone()),
        divisor: input.and_then(|i| i.divisor.clone()).unwrap_or_default(),
        meromorphic: input.is_some_and(|i| i.meromorphic),
        truncation: Truncation {
            initial_degree: common.d0,
            pole_bound: common.pole_bound,
            max_doublings: common.max_doublings,
        },
        order: parse_order(&common.order)?,
        format: common.format,
        output: common.output.clone(),
        seed: common.seed,
        timing: common.timing,
    })
}

/// Parses command-line arguments (program name first) into a configuration.
pub fn parse_args<I: IntoIterator<Item = OsString>>(args: I) -> std::result::Result<Result<RunConfig>, clap::Error> {
    let cli = Cli::try_parse_from(normalize_args(args))?;
    let (command, input) = match cli.command {
        Cmd::Corpus(c) => {
            return Ok(config_from(Command::Corpus, c.path.to_string_lossy().into_owned(), None, &c.common));
        }
        Cmd::Milnor(i) => (Command::Milnor, i),
        Cmd::Koszul(i) => (Command::Koszul, i),
        Cmd::Twisted(i) => (Command::Twisted, i),
        Cmd::CheckKb(i) => (Command::CheckKb, i),
        Cmd::CheckLog(i) => (Command::CheckLog, i),
        Cmd::CheckSum(i) => (Command::CheckSum, i),
        Cmd::CheckQuasiIso(i) => (Command::CheckQuasiIso, i),
    };
    Ok(config_from(command, input.f.clone(), Some(&input), &input.common))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputEcho {
    pub f: String,
    pub vars: Vec<String>,
    pub divisor: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictJson {
    pub id: String,
    pub left: Value,
    pub right: Value,
    pub equal: Option<bool>,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvidenceJson {
    pub staircase: Vec<String>,
    pub truncation_trace: Vec<LabeledTrace>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorJson {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
}

/// One command result; key order is the serialized order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub input: InputEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evidence: Option<EvidenceJson>,
    pub timing_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorJson>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match (&self.error, &self.verdict) {
            (Some(e), _) => e.exit_code,
            (None, Some(v)) if v.equal == Some(false) => 1,
            _ => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusMemberReport {
    pub name: String,
    pub passed: bool,
    pub reports: Vec<Report>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusReport {
    pub command: String,
    pub members: Vec<CorpusMemberReport>,
    pub passed: usize,
    pub failed: usize,
    pub timing_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
pub struct CorpusEntry {
    pub name: String,
    pub f: String,
    #[serde(default)]
    pub vars: Option<Vec<String>>,
    #[serde(default)]
    pub divisor: Option<Vec<String>>,
    #[serde(default)]
    pub expected: Option<Expected>,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
pub struct Expected {
    pub milnor: usize,
    /// Where the expected value came from; required whenever a value is given.
    pub provenance: String,
}

pub fn read_corpus(path: &Path) -> Result<Vec<CorpusEntry>> {
    let file = std::fs::File::open(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read corpus {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (k, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::InvalidInput(format!("corpus line {}: {e}", k + 1)))?;
        if line.trim().is_empty() {
            continue;
        }
        let entry: CorpusEntry = serde_json::from_str(&line)
            .map_err(|e| Error::InvalidInput(format!("corpus line {}: {e}", k + 1)))?;
        if matches!(&entry.expected, Some(e) if e.provenance.trim().is_empty()) {
            return Err(Error::InvalidInput(format!("corpus line {}: expected value without provenance", k + 1)));
        }
        out.push(entry);
    }
    Ok(out)
}

fn staircase_strings(basis: &[Exponents], names: &[String]) -> Vec<String> {
    basis
        .iter()
        .map(|e| {
            let m = render_monomial(e, names);
            if m.is_empty() {
                "1".into()
            } else {
                m
            }
        })
        .collect()
}

fn evidence_json(ev: &Evidence, names: &[String]) -> EvidenceJson {
    EvidenceJson {
        staircase: staircase_strings(&ev.staircase, names),
        truncation_trace: ev.traces.clone(),
        notes: ev.notes.clone(),
    }
}

fn verdict_report(v: &TheoremVerdict, names: &[String]) -> (VerdictJson, EvidenceJson) {
    let (left, right) = if v.parts.len() == 1 {
        (json!(v.left()), json!(v.right()))
    } else {
        (
            Value::Array(v.parts.iter().map(|p| json!(p.left)).collect()),
            Value::Array(v.parts.iter().map(|p| json!(p.right)).collect()),
        )
    };
    let mut ev = evidence_json(&v.evidence, names);
    if v.parts.len() > 1 {
        for p in &v.parts {
            ev.notes.push(format!("{}: {}", p.label, if p.equal { "equal" } else { "differ" }));
        }
    }
    let verdict = VerdictJson { id: v.id.as_str().into(), left, right, equal: Some(v.equal), certified: v.certified };
    (verdict, ev)
}

fn dims_report(id: &str, r: &DimensionReport, names: &[String]) -> (VerdictJson, EvidenceJson) {
    let verdict = VerdictJson { id: id.into(), left: json!(r.dims), right: Value::Null, equal: None, certified: r.certified };
    let ev = EvidenceJson {
        staircase: staircase_strings(&r.staircase, names),
        truncation_trace: if r.trace.is_empty() {
            Vec::new()
        } else {
            vec![LabeledTrace { label: id.into(), levels: r.trace.clone() }]
        },
        notes: r.notes.clone(),
    };
    (verdict, ev)
}

fn declaration(config: &RunConfig) -> Result<VarDecl> {
    let decl = match &config.vars {
        Some(v) => VarDecl::plain(v)?,
        None => VarDecl::infer(&config.f)?,
    };
    decl.with_divisor(&config.divisor)
}

fn compute(config: &RunConfig, decl: &VarDecl, f: &Polynomial) -> Result<(VerdictJson, EvidenceJson)> {
    let names = decl.names();
    let opts = config.options();
    let s = decl.divisor();
    let needs_divisor = || {
        if s.is_empty() {
            Err(Error::InvalidInput(format!("{} needs divisor variables (--log)", config.command.name())))
        } else {
            Ok(())
        }
    };
    Ok(match config.command {
        Command::Milnor => {
            let m = milnor_number(f, &config.order)?;
            let scope = match m.scope {
                Scope::LocalAtOrigin => "local-at-origin",
                Scope::Global => "global",
            };
            let verdict = VerdictJson {
                id: "milnor".into(),
                left: json!(m.value),
                right: Value::Null,
                equal: None,
                certified: true,
            };
            let ev = EvidenceJson {
                staircase: staircase_strings(&m.staircase, names),
                truncation_trace: Vec::new(),
                notes: vec![format!("scope: {scope}")],
            };
            (verdict, ev)
        }
        Command::Koszul => {
            let r = if s.is_empty() {
                koszul_cohomology_dims(f, &config.order, &config.truncation)?
            } else {
                log_koszul_cohomology_dims(f, s, &config.order, &config.truncation)?
            };
            dims_report("koszul", &r, names)
        }
        Command::Twisted => {
            let n = names.len();
            let context = match (s.is_empty(), config.meromorphic) {
                (true, false) => FormContext::plain(n),
                (true, true) => return Err(Error::InvalidInput("--meromorphic needs divisor variables (--log)".into())),
                (false, false) => FormContext::log(n, s)?,
                (false, true) => FormContext::meromorphic(n, s)?,
            };
            let spec = ComplexSpec {
                context,
                f: f.in_ring(context.coefficient_ring())?,
                operator: Operator::Twisted,
                truncation: config.truncation.clone(),
            };
            dims_report("twisted", &truncated_complex_dims(&spec)?, names)
        }
        Command::CheckKb => verdict_report(&check_kontsevich_barannikov(f, &opts)?, names),
        Command::CheckSum => verdict_report(&check_sum_of_vanishing_cycles(f, &opts)?, names),
        Command::CheckLog => {
            needs_divisor()?;
            verdict_report(&check_log_corollary(f, s, &opts)?, names)
        }
        Command::CheckQuasiIso => {
            needs_divisor()?;
            verdict_report(&check_log_quasi_iso(f, s, &opts)?, names)
        }
        Command::Corpus => return Err(Error::InvalidInput("corpus is not a single-input command".into())),
    })
}

fn error_json(e: &Error) -> ErrorJson {
    let kind = match e {
        Error::Unstable { .. } => "unstable",
        Error::Internal(_) => "internal",
        Error::NonIsolated(_) => "non-isolated",
        Error::Degenerate(_) => "degenerate",
        Error::Syntax { .. } => "syntax",
        Error::UndeclaredVariable(_) => "undeclared-variable",
        Error::NegativePower(_) => "negative-power",
        Error::ConstantPolynomial | Error::ZeroPolynomial => "constant-polynomial",
        _ => "invalid-input",
    };
    ErrorJson { kind: kind.into(), message: e.to_string(), exit_code: e.exit_code() }
}

/// Runs a single-input command.
pub fn run_single(config: &RunConfig) -> Report {
    let start = Instant::now();
    let mut input = InputEcho { f: config.f.clone(), vars: config.vars.clone().unwrap_or_default(), divisor: config.divisor.clone() };
    let outcome = declaration(config).and_then(|decl| {
        input.vars = decl.names().to_vec();
        let f = parse_polynomial(&config.f, &decl)?;
        compute(config, &decl, &f)
    });
    let timing_ms = config.timing.then(|| start.elapsed().as_millis() as u64);
    match outcome {
        Ok((verdict, evidence)) => Report {
            command: config.command.name().into(),
            input,
            verdict: Some(verdict),
            evidence: Some(evidence),
            timing_ms,
            error: None,
        },
        Err(e) => Report {
            command: config.command.name().into(),
            input,
            verdict: None,
            evidence: None,
            timing_ms,
            error: Some(error_json(&e)),
        },
    }
}

fn member_config(config: &RunConfig, entry: &CorpusEntry, command: Command) -> RunConfig {
    RunConfig {
        command,
        f: entry.f.clone(),
        vars: entry.vars.clone(),
        divisor: if matches!(command, Command::CheckLog | Command::CheckQuasiIso) {
            entry.divisor.clone().unwrap_or_default()
        } else {
            Vec::new()
        },
        ..config.clone()
    }
}

/// Milnor report compared against the corpus value, plus an optional check
/// that a seeded unimodular coordinate change leaves it unchanged.
fn milnor_member_report(config: &RunConfig, entry: &CorpusEntry, index: usize) -> Report {
    let mut report = run_single(&member_config(config, entry, Command::Milnor));
    let Some(v) = report.verdict.as_mut() else { return report };
    let value = v.left.as_u64().expect("milnor value") as usize;
    if let Some(e) = &entry.expected {
        v.right = json!(e.milnor);
        v.equal = Some(value == e.milnor);
        if let Some(ev) = report.evidence.as_mut() {
            ev.notes.push(format!("expected value: {}", e.provenance));
        }
    }
    if let Some(seed) = config.seed {
        let changed = declaration(&member_config(config, entry, Command::Milnor)).and_then(|decl| {
            let f = parse_polynomial(&entry.f, &decl)?;
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed.wrapping_add(index as u64));
            let g = linear_change(&f, &random_unimodular(f.nvars(), &mut rng))?;
            Ok(milnor_number(&g, &config.order)?.value)
        });
        let ok = matches!(changed, Ok(m) if m == value);
        if let Some(ev) = report.evidence.as_mut() {
            ev.notes.push(format!("unimodular coordinate change: milnor {:?}", changed.map_err(|e| e.to_string())));
        }
        if !ok {
            v.equal = Some(false);
        }
    }
    report
}

fn run_member(config: &RunConfig, entry: &CorpusEntry, index: usize) -> CorpusMemberReport {
    let mut reports = vec![milnor_member_report(config, entry, index)];
    let mut commands = vec![Command::CheckKb, Command::CheckSum];
    if entry.divisor.as_ref().is_some_and(|d| !d.is_empty()) {
        commands.extend([Command::CheckLog, Command::CheckQuasiIso]);
    }
    reports.extend(commands.into_iter().map(|c| run_single(&member_config(config, entry, c))));
    let passed = reports.iter().all(|r| r.exit_code() == 0);
    CorpusMemberReport { name: entry.name.clone(), passed, reports }
}

pub fn run_corpus(config: &RunConfig, entries: &[CorpusEntry]) -> CorpusReport {
    let start = Instant::now();
    let members: Vec<CorpusMemberReport> = entries
        .par_iter()
        .enumerate()
        .map(|(i, e)| run_member(config, e, i))
        .collect();
    let passed = members.iter().filter(|m| m.passed).count();
    CorpusReport {
        command: "corpus".into(),
        failed: members.len() - passed,
        passed,
        members,
        timing_ms: config.timing.then(|| start.elapsed().as_millis() as u64),
    }
}

fn dims_text(v: &Value) -> String {
    serde_json::to_string(v).expect("json")
}

fn report_text(r: &Report) -> String {
    let mut out = format!("{}: f = {}", r.command, r.input.f);
    out.push_str(&format!("  vars = {}", r.input.vars.join(",")));
    if !r.input.divisor.is_empty() {
        out.push_str(&format!("  divisor = {}", r.input.divisor.join(",")));
    }
    out.push('\n');
    if let Some(e) = &r.error {
        out.push_str(&format!("error ({}): {}\n", e.kind, e.message));
    }
    if let Some(v) = &r.verdict {
        out.push_str(&format!("{}: {}", v.id, dims_text(&v.left)));
        if !v.right.is_null() {
            out.push_str(&format!(" vs {}", dims_text(&v.right)));
        }
        if let Some(eq) = v.equal {
            out.push_str(if eq { "  equal" } else { "  MISMATCH" });
        }
        out.push_str(if v.certified { "  certified" } else { "  uncertified" });
        out.push('\n');
    }
    if let Some(ev) = &r.evidence {
        if !ev.staircase.is_empty() {
            out.push_str(&format!("staircase: {}\n", ev.staircase.join(", ")));
        }
        for t in &ev.truncation_trace {
            let levels: Vec<String> = t.levels.iter().map(ToString::to_string).collect();
            out.push_str(&format!("trace {}: {}\n", t.label, levels.join("  ")));
        }
        for n in &ev.notes {
            out.push_str(&format!("note: {n}\n"));
        }
    }
    if let Some(ms) = r.timing_ms {
        out.push_str(&format!("time: {ms} ms\n"));
    }
    out
}

fn corpus_text(c: &CorpusReport) -> String {
    let mut out = String::new();
    for m in &c.members {
        for r in &m.reports {
            let status = match r.exit_code() {
                0 => "ok",
                1 => "FAIL",
                3 => "UNSTABLE",
                _ => "ERROR",
            };
            let detail = match (&r.verdict, &r.error) {
                (Some(v), _) => {
                    if v.right.is_null() {
                        dims_text(&v.left)
                    } else {
                        format!("{} vs {}", dims_text(&v.left), dims_text(&v.right))
                    }
                }
                (None, Some(e)) => e.message.clone(),
                _ => String::new(),
            };
            out.push_str(&format!("{:<8} {:<16} {:<16} {}\n", status, m.name, r.command, detail));
        }
    }
    out.push_str(&format!("passed {} failed {}\n", c.passed, c.failed));
    if let Some(ms) = c.timing_ms {
        out.push_str(&format!("time: {ms} ms\n"));
    }
    out
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Runs a configuration and returns the rendered report and exit code.
pub fn run_command(config: &RunConfig) -> (String, i32) {
    if config.command == Command::Corpus {
        let entries = match read_corpus(Path::new(&config.f)) {
            Ok(e) => e,
            Err(e) => {
                let report = Report {
                    command: "corpus".into(),
                    input: InputEcho { f: config.f.clone(), vars: Vec::new(), divisor: Vec::new() },
                    verdict: None,
                    evidence: None,
                    timing_ms: None,
                    error: Some(error_json(&e)),
                };
                let text = match config.format {
                    Format::Json => to_json(&report),
                    Format::Text => report_text(&report),
                };
                return (text, e.exit_code());
            }
        };
        let report = run_corpus(config, &entries);
        let code = if report.failed > 0 { 1 } else { 0 };
        let text = match config.format {
            Format::Json => to_json(&report),
            Format::Text => corpus_text(&report),
        };
        return (text, code);
    }
    let report = run_single(config);
    let text = match config.format {
        Format::Json => to_json(&report),
        Format::Text => report_text(&report),
    };
    (text, report.exit_code())
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with_args<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let config = match parse_args(args) {
        Ok(Ok(c)) => c,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (text, code) = run_command(&config);
    match &config.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 2;
            }
        }
        None => print!("{text}"),
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &[&str]) -> Vec<OsString> {
        std::iter::once("tdw").chain(s.iter().copied()).map(OsString::from).collect()
    }

    #[test]
    fn single_dash_long_flags() {
        let c = parse_args(args(&["check-log", "-f", "x+y^2", "-vars", "x,y", "-log", "x"])).unwrap().unwrap();
        assert_eq!(c.vars, Some(vec!["x".to_string(), "y".to_string()]));
        assert_eq!(c.divisor, ["x"]);
        assert_eq!(c.command, Command::CheckLog);
    }

    #[test]
    fn exit_codes() {
        let c = parse_args(args(&["milnor", "-f", "x^3+y^3"])).unwrap().unwrap();
        let (out, code) = run_command(&RunConfig { format: Format::Json, ..c });
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["verdict"]["left"], 4);
        let c = parse_args(args(&["twisted", "-f", "x", "--d0", "1", "--max-doublings", "0"])).unwrap().unwrap();
        assert_eq!(run_command(&c).1, 3);
        let c = parse_args(args(&["milnor", "-f", "x^-1"])).unwrap().unwrap();
        assert_eq!(run_command(&c).1, 2);
        let c = parse_args(args(&["check-kb", "-f", "x^3 - 3*x"])).unwrap().unwrap();
        assert_eq!(run_command(&c).1, 0);
    }

    #[test]
    fn key_order() {
        let (out, _) = run_command(&RunConfig::new(Command::CheckKb, "x^3+y^3"));
        let keys = ["\"command\"", "\"input\"", "\"verdict\"", "\"evidence\"", "\"timing_ms\""];
        let pos: Vec<usize> = keys.iter().map(|k| out.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "{out}");
        let inner = ["\"id\"", "\"left\"", "\"right\"", "\"equal\"", "\"certified\""];
        let pos: Vec<usize> = inner.iter().map(|k| out.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
    }
}
