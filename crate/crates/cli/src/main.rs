//! Batch front-end: run private-computation sessions, privacy audits, rate
//! tables, and code-algebra queries. Outputs are JSON (CSV for rate tables)
//! and always embed the tool version, the seed, and a hash of the config
//! file, so every artifact is self-describing and replayable.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use num_rational::Ratio;
use serde::Serialize;
use sha2::{Digest, Sha256};

use starpc::algebra::{FieldElement, FieldSpec};
use starpc::codes::LinearCode;
use starpc::config::SessionConfig;
use starpc::error::Error as CoreError;
use starpc::privacy::{
    mutual_information, AuditScheme, PrivacyReportWire, SupportSpec, AUDIT_GUARD,
};
use starpc::scheme::systematic::rs_rate;
use starpc::simnet::{run_session, SchemeConfig};
use starpc::transcript::{CodeDescriptor, FieldDescriptor, RateWire};
use starpc::QuerySpace;

const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "starpc",
    version,
    about = "T-private computation sessions, audits, and code algebra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a replicated-data session from a config file.
    RunReplicated(RunArgs),
    /// Run a systematically-encoded-data session from a config file.
    RunSystematic(RunArgs),
    /// Exact privacy audit of colluding subsets.
    Audit(AuditArgs),
    /// Rate table over ranges of N, K, T, G (formula vs measured).
    RateTable(RateTableArgs),
    /// Star products and star powers of codes.
    CodeStar(CodeStarArgs),
    /// Encode the data matrix into server shares.
    Encode(EncodeArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Session config JSON.
    #[arg(long)]
    config: PathBuf,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the transcript here; without it the transcript is inlined into
    /// the summary on stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Audit one subset of 1-based server indices, e.g. "1,2". Repeatable.
    #[arg(long)]
    subset: Vec<String>,
    /// Audit every subset of this size.
    #[arg(long)]
    all_subsets: Option<usize>,
    /// Exit 0 even when a subset leaks (for deliberate over-collusion runs).
    #[arg(long)]
    expect_leak: bool,
    /// Enumeration guard (states); audits refusing to exceed it fail fast.
    #[arg(long, default_value_t = AUDIT_GUARD as u64)]
    guard_limit: u64,
    /// Force a sampled Φ support of this size instead of the automatic
    /// full/sampled choice.
    #[arg(long)]
    support_size: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RateTableArgs {
    /// Comma-separated N values.
    #[arg(long, default_value = "8")]
    n_list: String,
    /// Comma-separated K values.
    #[arg(long, default_value = "1,2,3,4")]
    k_list: String,
    /// Comma-separated T values.
    #[arg(long, default_value = "1,2,3")]
    t_list: String,
    /// Comma-separated G values.
    #[arg(long, default_value = "1,2,3,4")]
    g_list: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// csv (default) or json.
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CodeStarArgs {
    /// JSON: {"left": CodeDescriptor, "right": CodeDescriptor} or
    /// {"left": CodeDescriptor, "power": G}.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EncodeArgs {
    /// Session config JSON (scheme decides the storage code).
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct ErrorJson {
    error: String,
    kind: String,
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::RunReplicated(args) => cmd_run(args, "replicated"),
        Command::RunSystematic(args) => cmd_run(args, "systematic"),
        Command::Audit(args) => cmd_audit(args),
        Command::RateTable(args) => cmd_rate_table(args),
        Command::CodeStar(args) => cmd_code_star(args),
        Command::Encode(args) => cmd_encode(args),
    };
    if let Err(e) = result {
        let kind = e
            .downcast_ref::<CoreError>()
            .map(error_kind)
            .unwrap_or("cli");
        let json = serde_json::to_string_pretty(&ErrorJson {
            error: format!("{e:#}"),
            kind: kind.to_string(),
        })
        .expect("error json");
        print_stdout(&json);
        std::process::exit(1);
    }
}

fn error_kind(e: &CoreError) -> &'static str {
    match e {
        CoreError::Config(_) => "config",
        CoreError::EnumerationGuard { .. } => "enumeration-guard",
        CoreError::InfeasibleConfiguration(_) => "infeasible",
        CoreError::QueryOutsideSpace => "query-space",
        _ => "core",
    }
}

fn read_config(path: &Path) -> anyhow::Result<(String, String)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let digest = Sha256::digest(text.as_bytes());
    let hash: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    Ok((text, hash))
}

/// Print to stdout, tolerating a closed pipe (e.g. `starpc ... | head`).
fn print_stdout(content: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout(), "{content}");
}

fn write_output(out: &Option<PathBuf>, content: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, content).with_context(|| format!("writing {}", path.display()))?
        }
        None => print_stdout(content),
    }
    Ok(())
}

#[derive(Serialize)]
struct RunSummary {
    tool_version: String,
    seed: u64,
    config_hash: String,
    scheme: String,
    n: usize,
    t: usize,
    k: usize,
    b: usize,
    g: u32,
    m_vars: usize,
    q_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    f: Option<usize>,
    iterations: u64,
    rate: RateWire,
    uploaded_base_symbols: u64,
    downloaded_ext_symbols: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    transcript_path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    transcript: Option<starpc::transcript::SessionTranscript>,
}

fn cmd_run(args: RunArgs, expected_scheme: &str) -> anyhow::Result<()> {
    let (text, config_hash) = read_config(&args.config)?;
    let mut config = SessionConfig::from_json(&text)?;
    if config.scheme != expected_scheme {
        bail!(
            "config declares scheme {:?} but the subcommand expects {expected_scheme:?}",
            config.scheme
        );
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let session = config.load()?;
    let result = run_session(&session.scheme, &session.phis, &session.x, session.seed)?;
    let transcript_json = serde_json::to_string_pretty(&result.transcript)?;
    let mut summary = RunSummary {
        tool_version: TOOL_VERSION.into(),
        seed: session.seed,
        config_hash,
        scheme: result.transcript.scheme.clone(),
        n: result.transcript.n,
        t: result.transcript.t,
        k: result.transcript.k,
        b: result.transcript.b,
        g: result.transcript.g,
        m_vars: result.transcript.m_vars,
        q_dim: result.transcript.q_dim,
        f: result.transcript.f,
        iterations: result.accounting.iterations,
        rate: result.transcript.rate.clone(),
        uploaded_base_symbols: result.accounting.uploaded_base_symbols,
        downloaded_ext_symbols: result.accounting.downloaded_ext_symbols,
        transcript_path: None,
        transcript: None,
    };
    match &args.out {
        Some(path) => {
            std::fs::write(path, &transcript_json)
                .with_context(|| format!("writing {}", path.display()))?;
            summary.transcript_path = Some(path.display().to_string());
        }
        None => summary.transcript = Some(result.transcript.clone()),
    }
    print_stdout(&serde_json::to_string_pretty(&summary)?);
    Ok(())
}

fn parse_subset(text: &str, n: usize) -> anyhow::Result<Vec<usize>> {
    let subset: Vec<usize> = text
        .split(',')
        .map(|s| {
            let v: usize = s.trim().parse().context("subset indices are integers")?;
            if v == 0 || v > n {
                bail!("server index {v} out of range 1..={n}");
            }
            Ok(v - 1)
        })
        .collect::<anyhow::Result<_>>()?;
    Ok(subset)
}

fn size_t_subsets(n: usize, t: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(n: usize, t: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == t {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, t, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, t, 0, &mut cur, &mut out);
    out
}

#[derive(Serialize)]
struct AuditOutput {
    tool_version: String,
    seed: u64,
    config_hash: String,
    scheme: String,
    guard_limit: u64,
    all_private: bool,
    expect_leak: bool,
    reports: Vec<PrivacyReportWire>,
}

fn cmd_audit(args: AuditArgs) -> anyhow::Result<()> {
    let (text, config_hash) = read_config(&args.config)?;
    let mut config = SessionConfig::from_json(&text)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let session = config.load()?;
    let guard = args.guard_limit as u128;
    let (scheme, space, n, t, b): (AuditScheme, &QuerySpace, usize, usize, usize) =
        match &session.scheme {
            SchemeConfig::Replicated(cfg) => (
                AuditScheme::Replicated(cfg),
                cfg.space(),
                cfg.servers(),
                cfg.collusion(),
                cfg.block_length(),
            ),
            SchemeConfig::Systematic(cfg) => (
                AuditScheme::Systematic(cfg),
                cfg.space(),
                cfg.servers(),
                cfg.collusion(),
                cfg.block_length(),
            ),
        };

    let mut subsets: Vec<Vec<usize>> = args
        .subset
        .iter()
        .map(|s| parse_subset(s, n))
        .collect::<anyhow::Result<_>>()?;
    if let Some(size) = args.all_subsets {
        subsets.extend(size_t_subsets(n, size));
    }
    if subsets.is_empty() {
        subsets = size_t_subsets(n, t);
    }

    // Full Φ support when small, else a seeded sub-support.
    let full_support = (space.field().order() as u128)
        .checked_pow((space.dimension() * b) as u32)
        .unwrap_or(u128::MAX);
    let support = match args.support_size {
        Some(count) => SupportSpec::Sampled {
            count,
            seed: session.seed,
        },
        None if full_support <= 4096 => SupportSpec::Full,
        None => SupportSpec::Sampled {
            count: 256,
            seed: session.seed,
        },
    };

    let mut reports = Vec::new();
    let mut all_private = true;
    for subset in &subsets {
        let report = mutual_information(&scheme, subset, support, guard)?;
        all_private &= report.private;
        reports.push(report.to_wire(space, 4096)?);
    }
    let output = AuditOutput {
        tool_version: TOOL_VERSION.into(),
        seed: session.seed,
        config_hash,
        scheme: config.scheme.clone(),
        guard_limit: args.guard_limit,
        all_private,
        expect_leak: args.expect_leak,
        reports,
    };
    write_output(&args.out, &serde_json::to_string_pretty(&output)?)?;
    if !all_private && !args.expect_leak {
        std::process::exit(1);
    }
    Ok(())
}

fn parse_list(text: &str) -> anyhow::Result<Vec<usize>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .context("list values are integers")
        })
        .collect()
}

#[derive(Serialize)]
struct RateRow {
    n: usize,
    k: usize,
    t: usize,
    g: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    f: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<usize>,
    rate_formula: String,
    rate_measured: String,
    rate_formula_decimal: String,
    rate_measured_decimal: String,
}

fn smallest_prime_at_least(n: u64) -> u64 {
    let mut p = n.max(2);
    loop {
        if (2..p)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
        {
            return p;
        }
        p += 1;
    }
}

/// One measured session for a rate-table row. K = 1 rows run the replicated
/// scheme (rate (N−T)/N); K ≥ 2 rows run the systematic scheme over RS codes
/// (Theorem rate min{N−(G(K−1)+T), K}/N).
fn measure_row(n: usize, k: usize, t: usize, g: u32, seed: u64) -> anyhow::Result<RateRow> {
    let mut row = RateRow {
        n,
        k,
        t,
        g,
        f: None,
        s: None,
        rate_formula: "infeasible".into(),
        rate_measured: String::new(),
        rate_formula_decimal: String::new(),
        rate_measured_decimal: String::new(),
    };
    if t >= n || k > n {
        return Ok(row);
    }
    let p = smallest_prime_at_least(n as u64);
    let config = SessionConfig {
        scheme: if k == 1 { "replicated" } else { "systematic" }.into(),
        base_field: FieldDescriptor {
            p,
            m: 1,
            modulus: None,
        },
        ext_field: None,
        n,
        t,
        k: if k == 1 { None } else { Some(k) },
        b: None,
        m_vars: 1,
        g,
        retrieval_code: None,
        storage_code: None,
        seed,
        data: None,
        functions: None,
    };
    let formula = if k == 1 {
        Some(Ratio::new((n - t) as u64, n as u64))
    } else {
        match rs_rate(n, k, t, g) {
            Ok(r) if *r.numer() > 0 => Some(r),
            _ => None,
        }
    };
    let Some(formula) = formula else {
        return Ok(row);
    };
    let session = match config.load() {
        Ok(s) => s,
        Err(CoreError::InfeasibleConfiguration(_)) => return Ok(row),
        Err(e) => return Err(e.into()),
    };
    let result = run_session(&session.scheme, &session.phis, &session.x, session.seed)?;
    let measured = result.transcript.rate.to_ratio()?;
    let formula_wire = RateWire::of(formula);
    let measured_wire = RateWire::of(measured);
    row.f = result.transcript.f.or(Some(n - t));
    row.s = Some(result.accounting.iterations as usize);
    row.rate_formula = formula_wire.fraction;
    row.rate_formula_decimal = format!("{}", formula_wire.decimal);
    row.rate_measured = measured_wire.fraction;
    row.rate_measured_decimal = format!("{}", measured_wire.decimal);
    if measured != formula {
        bail!(
            "measured rate {} disagrees with formula {} at N={n} K={k} T={t} G={g}",
            row.rate_measured,
            row.rate_formula
        );
    }
    Ok(row)
}

fn cmd_rate_table(args: RateTableArgs) -> anyhow::Result<()> {
    let ns = parse_list(&args.n_list)?;
    let ks = parse_list(&args.k_list)?;
    let ts = parse_list(&args.t_list)?;
    let gs = parse_list(&args.g_list)?;
    let mut rows = Vec::new();
    for &n in &ns {
        for &k in &ks {
            for &t in &ts {
                for &g in &gs {
                    rows.push(measure_row(n, k, t, g as u32, args.seed)?);
                }
            }
        }
    }
    let content = match args.format.as_str() {
        "csv" => {
            let mut out = format!("# starpc {TOOL_VERSION} seed={}\n", args.seed);
            out.push_str(
                "N,K,T,G,F,S,rate_formula,rate_measured,rate_formula_decimal,rate_measured_decimal\n",
            );
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{}\n",
                    r.n,
                    r.k,
                    r.t,
                    r.g,
                    r.f.map(|v| v.to_string()).unwrap_or_default(),
                    r.s.map(|v| v.to_string()).unwrap_or_default(),
                    r.rate_formula,
                    r.rate_measured,
                    r.rate_formula_decimal,
                    r.rate_measured_decimal
                ));
            }
            out
        }
        "json" => serde_json::to_string_pretty(&serde_json::json!({
            "tool_version": TOOL_VERSION,
            "seed": args.seed,
            "rows": rows,
        }))?,
        other => bail!("unknown format {other:?} (expected csv or json)"),
    };
    write_output(&args.out, &content)?;
    Ok(())
}

#[derive(serde::Deserialize)]
struct CodeStarConfig {
    left: CodeDescriptor,
    #[serde(default)]
    right: Option<CodeDescriptor>,
    #[serde(default)]
    power: Option<usize>,
}

#[derive(Serialize)]
struct CodeStarOutput {
    tool_version: String,
    config_hash: String,
    operation: String,
    result: CodeDescriptor,
    length: usize,
    dimension: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_distance: Option<usize>,
    contains_repetition: bool,
}

fn cmd_code_star(args: CodeStarArgs) -> anyhow::Result<()> {
    let (text, config_hash) = read_config(&args.config)?;
    let config: CodeStarConfig = serde_json::from_str(&text).context("parsing code-star config")?;
    let left = config.left.to_code()?;
    let (result, operation) = match (&config.right, config.power) {
        (Some(right), None) => (left.star_product(&right.to_code()?)?, "star".to_string()),
        (None, Some(g)) => (left.star_power(g)?, format!("star-power-{g}")),
        _ => bail!("config needs exactly one of \"right\" or \"power\""),
    };
    let output = CodeStarOutput {
        tool_version: TOOL_VERSION.into(),
        config_hash,
        operation,
        length: result.length(),
        dimension: result.dimension(),
        min_distance: result.min_distance().ok(),
        contains_repetition: result.contains_repetition(),
        result: CodeDescriptor::of(&result)?,
    };
    write_output(&args.out, &serde_json::to_string_pretty(&output)?)?;
    Ok(())
}

#[derive(Serialize)]
struct ShareJson {
    server: usize,
    share: Vec<String>,
}

#[derive(Serialize)]
struct EncodeOutput {
    tool_version: String,
    seed: u64,
    config_hash: String,
    field: FieldDescriptor,
    storage_code: CodeDescriptor,
    servers: Vec<ShareJson>,
}

fn cmd_encode(args: EncodeArgs) -> anyhow::Result<()> {
    let (text, config_hash) = read_config(&args.config)?;
    let mut config = SessionConfig::from_json(&text)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let session = config.load()?;
    let (storage, ext): (LinearCode, Arc<FieldSpec>) = match &session.scheme {
        SchemeConfig::Replicated(cfg) => (
            LinearCode::repetition(cfg.servers(), cfg.space().field())?,
            Arc::clone(cfg.ext_field()),
        ),
        SchemeConfig::Systematic(cfg) => (cfg.storage_code().clone(), Arc::clone(cfg.ext_field())),
    };
    let servers = starpc::simnet::encode_storage(&session.x, &storage)?;
    let shares = servers
        .iter()
        .map(|srv| {
            Ok(ShareJson {
                server: srv.index() + 1,
                share: srv
                    .share()
                    .iter()
                    .map(FieldElement::canonical_text)
                    .collect::<starpc::Result<_>>()?,
            })
        })
        .collect::<starpc::Result<Vec<_>>>()?;
    let output = EncodeOutput {
        tool_version: TOOL_VERSION.into(),
        seed: session.seed,
        config_hash,
        field: FieldDescriptor::of(&ext),
        storage_code: CodeDescriptor::of(&storage)?,
        servers: shares,
    };
    write_output(&args.out, &serde_json::to_string_pretty(&output)?)?;
    Ok(())
}
