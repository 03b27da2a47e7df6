//! Command line for cube vertex Turán computations. Subcommands:
//! construct, check, exact, bound, chains, table, export.
//!
//! Exit codes: 0 success, 1 infeasible input or timed-out inexact search,
//! 2 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use serde::Serialize;

use qturan::chains;
use qturan::construct::{self, ConstructionKind};
use qturan::detect;
use qturan::hypercube::{parse_qfam, write_qfam, MAX_FAMILY_DIM};
use qturan::solver::{self, SolveMethod, SolveOptions};
use qturan::{Dim, Error, Pattern};

#[derive(Parser)]
#[command(
    name = "qturan",
    version,
    about = "Vertex Turán numbers for directed patterns in the oriented hypercube"
)]
struct Cli {
    /// Seed for randomized strategies (reserved; the shipped subcommands
    /// are deterministic).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the best known pattern-free construction and verify it
    Construct {
        /// Pattern spec: P:<k>, V:<r>, C4, or file:<path> (QPAT v1)
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        n: u32,
        /// Write the family as QFAM v1
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether a QFAM family avoids a pattern
    Check {
        #[arg(long)]
        pattern: String,
        /// Family file in QFAM v1
        #[arg(long)]
        family: PathBuf,
    },
    /// Exact optimum by brute force (2^n <= 16) or branch-and-bound
    Exact {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        /// Time budget in seconds (default 300)
        #[arg(long)]
        timeout: Option<u64>,
        /// Emit the JSON report (includes elapsed_ms)
        #[arg(long)]
        json: bool,
        /// Emit the canonical JSON report: byte-identical across runs
        #[arg(long)]
        json_canonical: bool,
    },
    /// Certified lower bound and the best available upper bound
    Bound {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        json: bool,
    },
    /// Chain statistics of a QFAM family (all of them when no flag given)
    Chains {
        #[arg(long)]
        family: PathBuf,
        /// Lubell mass: sum of 1/binomial(n,|F|)
        #[arg(long)]
        lubell: bool,
        /// Counts of maximal chains by number of members met
        #[arg(long)]
        profile: bool,
        /// Number of chains meeting at least <FAT> members
        #[arg(long)]
        fat: Option<u32>,
        /// Total chain weight (equals |family| * n!)
        #[arg(long)]
        weight: bool,
    },
    /// CSV of lower/upper bounds for P:<k> or V:2 over a range of n
    Table {
        #[arg(long)]
        pattern: String,
        /// Inclusive range, e.g. 3..12
        #[arg(long, value_name = "A..B")]
        n_range: String,
        /// Write to a file instead of stdout
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Export the MaxSAT instance in classic WCNF
    Export {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        wcnf: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Bruteforce,
    Bnb,
}

/// Parses and runs; returns the process exit code. Reports go to `out`,
/// errors to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    2
                }
            };
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::PatternSpec(_) => 2,
                _ => 1,
            }
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32, Error> {
    // The global --seed is accepted for reproducibility of any future
    // randomized strategy; no shipped subcommand draws randomness.
    let Cli { seed: _, cmd } = cli;
    match cmd {
        Cmd::Construct { pattern, n, out: out_path } => cmd_construct(&pattern, n, out_path, out),
        Cmd::Check { pattern, family } => cmd_check(&pattern, &family, out),
        Cmd::Exact { pattern, n, method, timeout, json, json_canonical } => {
            cmd_exact(&pattern, n, method, timeout, json, json_canonical, out)
        }
        Cmd::Bound { pattern, n, json } => cmd_bound(&pattern, n, json, out),
        Cmd::Chains { family, lubell, profile, fat, weight } => {
            cmd_chains(&family, lubell, profile, fat, weight, out)
        }
        Cmd::Table { pattern, n_range, csv } => cmd_table(&pattern, &n_range, csv, out),
        Cmd::Export { pattern, n, wcnf } => cmd_export(&pattern, n, &wcnf, out),
    }
}

fn kind_label(kind: &ConstructionKind) -> String {
    match kind {
        ConstructionKind::Residue { k, j } => {
            format!("levels outside residue {j} mod {k}")
        }
        ConstructionKind::V2 => "alternate levels from n-1 down, plus the top set".into(),
        ConstructionKind::Vr { r } => {
            format!("top {r} levels, then every other level below a gap")
        }
    }
}

fn cmd_construct(
    pattern: &str,
    n: u32,
    out_path: Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<i32, Error> {
    let p = Pattern::parse(pattern)?;
    let dim = Dim::new(n)?;
    let (kind, levels) = construct::best_construction(n, &p)?;
    let fam = construct::levels_family(dim, &levels)?;

    let mut proofs: Vec<String> = Vec::new();
    if let Some(reason) = construct::certify_levels_free(&levels, &p) {
        proofs.push(format!("structural: {reason}"));
    }
    if n <= 12 || (proofs.is_empty() && n <= MAX_FAMILY_DIM) {
        if detect::contains_copy(&fam, &p).is_some() {
            return Err(Error::NotFree(p.name().to_string()));
        }
        proofs.push("detector: no embedding found".into());
    }
    assert!(!proofs.is_empty(), "construction left unverified");

    writeln!(out, "construction for {} in Q_{n}: {}", p.name(), kind_label(&kind))?;
    let level_list: Vec<String> = levels.levels().iter().map(u32::to_string).collect();
    writeln!(out, "levels {{{}}}", level_list.join(","))?;
    writeln!(out, "size {}", fam.len())?;
    writeln!(out, "free: verified ({})", proofs.join("; "))?;
    if let Some(path) = out_path {
        std::fs::write(&path, write_qfam(&fam))?;
        writeln!(out, "wrote {}", path.display())?;
    }
    Ok(0)
}

fn cmd_check(pattern: &str, family: &PathBuf, out: &mut dyn Write) -> Result<i32, Error> {
    let p = Pattern::parse(pattern)?;
    let fam = parse_qfam(&std::fs::read_to_string(family)?)?;
    match detect::contains_copy(&fam, &p) {
        None => writeln!(out, "free")?,
        Some(e) => {
            let images: Vec<String> =
                e.images().iter().map(|v| v.set_string()).collect();
            writeln!(out, "not free")?;
            writeln!(out, "copy of {}: [{}]", p.name(), images.join(", "))?;
        }
    }
    Ok(0)
}

fn cmd_exact(
    pattern: &str,
    n: u32,
    method: MethodArg,
    timeout: Option<u64>,
    json: bool,
    json_canonical: bool,
    out: &mut dyn Write,
) -> Result<i32, Error> {
    let p = Pattern::parse(pattern)?;
    let dim = Dim::new(n)?;
    let opts = SolveOptions {
        method: match method {
            MethodArg::Auto => SolveMethod::Auto,
            MethodArg::Bruteforce => SolveMethod::BruteForce,
            MethodArg::Bnb => SolveMethod::BranchAndBound,
        },
        timeout_ms: Some(timeout.unwrap_or(300) * 1000),
        node_cap: None,
    };
    let r = solver::exact_exv(dim, &p, &opts)?;
    if json || json_canonical {
        writeln!(out, "{}", solver::exact_report_json(p.name(), n, &r, json_canonical))?;
    } else if r.exact {
        writeln!(out, "ex_v({}, Q_{n}) = {}", p.name(), r.value)?;
        writeln!(out, "exact ({}, {} nodes, {} ms)", r.method, r.nodes, r.elapsed_ms)?;
    } else {
        writeln!(out, "ex_v({}, Q_{n}) in [{}, {}]", p.name(), r.value, r.upper_bound)?;
        writeln!(
            out,
            "inexact: timed out ({}, {} nodes, {} ms); lower bound witnessed",
            r.method, r.nodes, r.elapsed_ms
        )?;
    }
    Ok(if r.exact { 0 } else { 1 })
}

#[derive(Serialize)]
struct BoundReport<'a> {
    pattern: &'a str,
    n: u32,
    height: usize,
    lower: String,
    lower_certified: bool,
    upper: String,
    upper_certified: bool,
    upper_kind: &'a str,
}

fn cmd_bound(pattern: &str, n: u32, json: bool, out: &mut dyn Write) -> Result<i32, Error> {
    let p = Pattern::parse(pattern)?;
    let info = p.info();
    let (_, levels) = construct::best_construction(n, &p)?;
    let lower = levels.size();
    let (upper, upper_certified, upper_kind) = if p.is_directed_path() {
        let f = chains::formula_pk(n, p.vertex_count() as u32)?;
        (f.value, true, "formula")
    } else {
        let est = chains::tree_upper_estimate(n, info.height as u32, p.vertex_count() as u32)?;
        (est, false, "estimate")
    };
    if json {
        let report = BoundReport {
            pattern: p.name(),
            n,
            height: info.height,
            lower: lower.to_string(),
            lower_certified: true,
            upper: upper.to_string(),
            upper_certified,
            upper_kind,
        };
        writeln!(out, "{}", serde_json::to_string(&report).expect("serializes"))?;
    } else {
        writeln!(out, "lower {} (construction, certified)", lower)?;
        if upper_certified {
            writeln!(out, "upper {} ({upper_kind}, certified)", upper)?;
        } else {
            writeln!(out, "upper {} ({upper_kind}, NOT certified: asymptotic-only)", upper)?;
        }
    }
    Ok(0)
}

fn cmd_chains(
    family: &PathBuf,
    lubell: bool,
    profile: bool,
    fat: Option<u32>,
    weight: bool,
    out: &mut dyn Write,
) -> Result<i32, Error> {
    let fam = parse_qfam(&std::fs::read_to_string(family)?)?;
    let n = fam.dim().n();
    let all = !(lubell || profile || fat.is_some() || weight);
    writeln!(out, "family: n={n}, size={}", fam.len())?;
    if lubell || all {
        let l = chains::lubell(&fam);
        writeln!(
            out,
            "lubell = {}/{} = {:.6}",
            l.numerator(),
            l.denominator(),
            l.as_f64()
        )?;
    }
    if profile || all {
        let stats = chains::chain_profile(&fam)?;
        let parts: Vec<String> =
            stats.counts().iter().enumerate().map(|(t, c)| format!("C_{t}={c}")).collect();
        writeln!(out, "profile {}", parts.join(" "))?;
    }
    if let Some(k) = fat {
        writeln!(out, "fat-chains(k={k}) = {}", chains::fat_chain_count(&fam, k)?)?;
    }
    if weight || all {
        let w = chains::total_chain_weight(&fam)?;
        writeln!(out, "total chain weight = {w} (|family| * n!)")?;
    }
    Ok(0)
}

fn parse_range(range: &str) -> Result<(u32, u32), Error> {
    let parts: Vec<&str> = range.split("..").collect();
    let parse = |s: &str| {
        s.parse::<u32>()
            .map_err(|_| Error::PatternSpec(format!("bad n-range `{range}`; expected A..B")))
    };
    match parts.as_slice() {
        [a, b] => {
            let (a, b) = (parse(a)?, parse(b)?);
            if a > b {
                return Err(Error::PatternSpec(format!("empty n-range `{range}`")));
            }
            Ok((a, b))
        }
        _ => Err(Error::PatternSpec(format!("bad n-range `{range}`; expected A..B"))),
    }
}

fn cmd_table(
    pattern: &str,
    n_range: &str,
    csv: Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<i32, Error> {
    let (a, b) = parse_range(n_range)?;
    enum TableKind {
        Path(u32),
        Cherry,
    }
    let kind = if pattern == "V:2" {
        TableKind::Cherry
    } else if let Some(k) = pattern.strip_prefix("P:") {
        let k: u32 = k
            .parse()
            .map_err(|_| Error::PatternSpec(format!("bad path length in `{pattern}`")))?;
        if k == 0 {
            return Err(Error::PatternSpec("path length must be positive".into()));
        }
        TableKind::Path(k)
    } else {
        return Err(Error::PatternSpec(format!(
            "table supports P:<k> or V:2, got `{pattern}`"
        )));
    };
    let min_n = match kind {
        TableKind::Path(k) => k,
        TableKind::Cherry => 2,
    };
    if a < min_n {
        return Err(Error::PatternSpec(format!(
            "n-range must start at {min_n} or above for `{pattern}`"
        )));
    }

    let mut table = String::from("n,lower,upper,exact,certified,method\n");
    for n in a..=b {
        // Lower: construction size by binomial sums. Upper: the matching
        // closed form, computed by an independent route.
        let (lower, upper) = match kind {
            TableKind::Path(k) => {
                let (j, _) = construct::best_residue(n, k)?;
                let lower = construct::residue_level_set(n, k, j)?.size();
                let upper = chains::formula_pk(n, k)?.value;
                (lower, upper)
            }
            TableKind::Cherry => {
                let lower = construct::v2_size(n)?;
                let upper = (BigUint::from(1u32) << (n - 1)) + 1u32;
                (lower, upper)
            }
        };
        let exact = lower == upper;
        table.push_str(&format!("{n},{lower},{upper},{exact},true,formula\n"));
    }
    match csv {
        Some(path) => {
            std::fs::write(&path, &table)?;
            writeln!(out, "wrote {} ({} rows)", path.display(), b - a + 1)?;
        }
        None => write!(out, "{table}")?,
    }
    Ok(0)
}

fn cmd_export(pattern: &str, n: u32, wcnf: &PathBuf, out: &mut dyn Write) -> Result<i32, Error> {
    let p = Pattern::parse(pattern)?;
    let dim = Dim::new(n)?;
    let file = std::fs::File::create(wcnf)?;
    let stats = solver::export_wcnf(dim, &p, std::io::BufWriter::new(file))?;
    writeln!(
        out,
        "wrote {}: {} variables, {} soft + {} hard clauses",
        wcnf.display(),
        stats.variables,
        stats.soft_clauses,
        stats.hard_clauses
    )?;
    Ok(0)
}
