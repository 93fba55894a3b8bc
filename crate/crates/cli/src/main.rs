//! `flagdesign`: construct, verify and analyze flag-transitive designs, and
//! run the parameter and number-theory searches.
//!
//! Exit status: 0 when every check passes, 1 when a verified property
//! fails, 2 for usage, parse or cap errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use flagdesign::design::{self, DesignParams};
use flagdesign::format::{read_design_file, write_design_file, DesignFile, GroupSpec};
use flagdesign::geometry;
use flagdesign::numth;
use flagdesign::params::{self, DesignParameters, Family};
use flagdesign::report::{self, Verdict};

/// Largest `--lambda-max` accepted by `params`.
const MAX_LAMBDA: u64 = 100_000;

#[derive(Parser, Debug)]
#[command(name = "flagdesign", version, about = "Flag-transitive 2-design toolkit")]
struct Cli {
    /// Print results as JSON instead of text.
    #[arg(long, global = true)]
    json_output: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the 2-design axioms and print the parameters.
    Verify(FileArgs),
    /// Run the full classification report.
    Analyze(AnalyzeArgs),
    /// Build a design from a finite geometry, with its group.
    Construct(ConstructArgs),
    /// Tabulate a symmetric parameter family.
    Params(ParamsArgs),
    /// Number-theory searches and closed forms.
    #[command(subcommand)]
    Numth(NumthCommand),
}

#[derive(Args, Debug)]
struct FileArgs {
    file: PathBuf,
    /// Accept repeated blocks.
    #[arg(long)]
    multiset: bool,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    file: PathBuf,
    /// Write the report here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
enum Construction {
    PgCollinear,
    PgNoncollinear,
    AgLines,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(value_enum)]
    kind: Construction,
    /// Vector space dimension.
    #[arg(long, value_parser = decimal_usize)]
    h: usize,
    /// Field order.
    #[arg(long, value_parser = decimal_u64)]
    q: u64,
    /// Include field automorphisms in the group.
    #[arg(long)]
    include_frobenius: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FamilyArg {
    Type1,
    Type2,
    K0eq2,
}

#[derive(Args, Debug)]
struct ParamsArgs {
    #[arg(value_enum)]
    family: FamilyArg,
    #[arg(long, value_parser = decimal_u64)]
    lambda_max: u64,
}

#[derive(Subcommand, Debug)]
enum NumthCommand {
    /// Largest divisor of a^e - 1 coprime to every a^i - 1 with i < e.
    PrimitivePart {
        #[arg(value_parser = decimal_u64)]
        a: u64,
        #[arg(value_parser = decimal_u32)]
        e: u32,
    },
    /// Odd prime powers p^m with u = p^m + 2 prime and u | p^z - 1, z <= 4m.
    LemmaDiv {
        #[arg(long, value_parser = decimal_u64)]
        pm_max: u64,
    },
    /// Solutions of u^h = p^m + 2 in primes p, u.
    Pillai {
        #[arg(long, value_parser = decimal_u64)]
        bound: u64,
    },
    /// Gaussian binomial [h t]_q.
    Qbin {
        #[arg(value_parser = decimal_u32)]
        h: u32,
        #[arg(value_parser = decimal_u32)]
        t: u32,
        #[arg(value_parser = decimal_u64)]
        q: u64,
    },
    /// (s + 2) / gcd(s + 2, 3(a - 1) aut).
    Rho {
        #[arg(value_parser = decimal_u64)]
        s: u64,
        #[arg(value_parser = decimal_u64)]
        a: u64,
        #[arg(value_parser = decimal_big)]
        aut: BigUint,
    },
}

fn digits(s: &str) -> Result<&str, String> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("`{s}` is not a plain decimal integer"));
    }
    Ok(s)
}

fn decimal_u64(s: &str) -> Result<u64, String> {
    digits(s)?.parse().map_err(|e| format!("`{s}`: {e}"))
}

fn decimal_u32(s: &str) -> Result<u32, String> {
    digits(s)?.parse().map_err(|e| format!("`{s}`: {e}"))
}

fn decimal_usize(s: &str) -> Result<usize, String> {
    digits(s)?.parse().map_err(|e| format!("`{s}`: {e}"))
}

fn decimal_big(s: &str) -> Result<BigUint, String> {
    digits(s)?.parse().map_err(|e| format!("`{s}`: {e}"))
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
struct VerifyOutput {
    v: usize,
    b: usize,
    params: Option<DesignParams>,
    failure: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
struct ConstructOutput {
    kind: Construction,
    h: usize,
    q: u64,
    v: usize,
    b: usize,
    group_order: BigUint,
    output: Option<PathBuf>,
    design_file: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
struct ValueOutput {
    value: String,
}

struct Output {
    json: bool,
}

impl Output {
    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) -> Result<()> {
        let mut out = std::io::stdout().lock();
        if self.json {
            serde_json::to_writer_pretty(&mut out, value)?;
            writeln!(out)?;
        } else {
            write!(out, "{}", text())?;
        }
        Ok(())
    }
}

fn verify(out: &Output, args: &FileArgs) -> Result<u8> {
    let file = read_design_file(&args.file, args.multiset)?;
    let d = &file.design;
    let (params, failure) = match design::is_2design(d) {
        Ok(p) => (Some(p), None),
        Err(f) => (None, Some(f.to_string())),
    };
    let result = VerifyOutput { v: d.v(), b: d.b(), params, failure };
    out.emit(&result, || match (&result.params, &result.failure) {
        (Some(p), _) => format!(
            "{p}, b={}, symmetric: {}\n",
            p.b,
            if p.symmetric && !d.is_multiset() { "yes" } else { "no" }
        ),
        (None, Some(f)) => format!("not a 2-design: {f}\n"),
        (None, None) => unreachable!(),
    })?;
    Ok(if result.params.is_some() { 0 } else { 1 })
}

fn analyze(out: &Output, args: &AnalyzeArgs) -> Result<u8> {
    let r = report::full_report_path(&args.file)?;
    let text = if out.json { serde_json::to_string_pretty(&r)? + "\n" } else { r.to_text() };
    match &args.output {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    let failed = r.checks.iter().any(|c| c.verdict == Verdict::Fail);
    Ok(if failed { 1 } else { 0 })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn construct(out: &Output, args: &ConstructArgs) -> Result<u8> {
    let (design, group) = match args.kind {
        Construction::PgCollinear => (
            geometry::collinear_triples_design(args.h, args.q)?,
            geometry::projective_group(args.h, args.q, args.include_frobenius)?,
        ),
        Construction::PgNoncollinear => (
            geometry::noncollinear_triples_design(args.h, args.q)?,
            geometry::projective_group(args.h, args.q, args.include_frobenius)?,
        ),
        Construction::AgLines => (
            geometry::ag_lines_design(args.h, args.q)?,
            geometry::affine_group(args.h, args.q, args.include_frobenius)?,
        ),
    };
    let (v, b, group_order) = (design.v(), design.b(), group.order());
    let file = DesignFile {
        design,
        group: Some(GroupSpec { degree: group.degree(), generators: group.generators().to_vec() }),
        partition: None,
    };
    let text = write_design_file(&file);
    if let Some(path) = &args.output {
        write_file(path, &text)?;
    }
    let result = ConstructOutput {
        kind: args.kind,
        h: args.h,
        q: args.q,
        v,
        b,
        group_order,
        output: args.output.clone(),
        design_file: args.output.is_none().then(|| text.clone()),
    };
    out.emit(&result, || match &args.output {
        Some(p) => format!("wrote {} (v={v}, b={b}, group order {})\n", p.display(), result.group_order),
        None => text.clone(),
    })?;
    Ok(0)
}

fn params_cmd(out: &Output, args: &ParamsArgs) -> Result<u8> {
    if args.lambda_max > MAX_LAMBDA {
        bail!("--lambda-max {} exceeds the cap of {MAX_LAMBDA}", args.lambda_max);
    }
    let families: &[Family] = match args.family {
        FamilyArg::Type1 => &[Family::Type1],
        FamilyArg::Type2 => &[Family::Type2],
        FamilyArg::K0eq2 => &[Family::PairsFirst, Family::PairsSecond],
    };
    let mut rows: Vec<DesignParameters> = Vec::new();
    for &f in families {
        rows.extend(params::enumerate(f, args.lambda_max)?);
    }
    out.emit(&rows, || {
        rows.iter()
            .map(|p| {
                format!(
                    "{} lambda={}: 2-({},{},{}) c={} d={} k0={}\n",
                    p.family, p.lambda, p.v, p.k, p.lambda, p.c, p.d, p.k0
                )
            })
            .collect()
    })?;
    Ok(0)
}

fn numth_cmd(out: &Output, cmd: &NumthCommand) -> Result<u8> {
    match cmd {
        NumthCommand::PrimitivePart { a, e } => {
            let value = numth::primitive_part(*a, *e)?.to_string();
            out.emit(&ValueOutput { value: value.clone() }, || format!("{value}\n"))?;
        }
        NumthCommand::LemmaDiv { pm_max } => {
            eprintln!("searching prime powers up to {pm_max}");
            let sols = numth::lemma_div_solutions(*pm_max)?;
            eprintln!("done: {} solutions", sols.len());
            out.emit(&sols, || {
                sols.iter()
                    .map(|s| format!("p^m={} ({}^{}) u={} z={}\n", s.pm, s.p, s.m, s.u, s.z))
                    .collect()
            })?;
        }
        NumthCommand::Pillai { bound } => {
            eprintln!("searching p^m up to {bound}");
            let sols = numth::pillai_solutions(*bound)?;
            eprintln!("done: {} solutions", sols.len());
            out.emit(&sols, || {
                sols.iter()
                    .map(|s| format!("{}^{} + 2 = {}^{}\n", s.p, s.m, s.u, s.h))
                    .collect()
            })?;
        }
        NumthCommand::Qbin { h, t, q } => {
            if *q < 2 {
                bail!("q must be at least 2");
            }
            let value = numth::gaussian_binomial(*h, *t, *q).to_string();
            out.emit(&ValueOutput { value: value.clone() }, || format!("{value}\n"))?;
        }
        NumthCommand::Rho { s, a, aut } => {
            let value = numth::compute_rho(*s, *a, aut)?.to_string();
            out.emit(&ValueOutput { value: value.clone() }, || format!("{value}\n"))?;
        }
    }
    Ok(0)
}

fn run(cli: &Cli) -> Result<u8> {
    let out = Output { json: cli.json_output };
    match &cli.command {
        Command::Verify(a) => verify(&out, a),
        Command::Analyze(a) => analyze(&out, a),
        Command::Construct(a) => construct(&out, a),
        Command::Params(a) => params_cmd(&out, a),
        Command::Numth(c) => numth_cmd(&out, c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", anyhow!(e));
            ExitCode::from(2)
        }
    }
}
