use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::json;

use blockmf::chr::{CharGroup, Character};
use blockmf::grp::Params;
use blockmf::morita::{
    commutation_pairing, ext_quiver, mf_number, params_for_target, recover_theta, simples,
    DEFAULT_PRIME_CAP,
};
use blockmf::ttb0::B0Context;
use blockmf::verify::{find_check, Suite, Verifier, CHECKS, DEFAULT_SEED};

/// Exact computations with the blocks B(theta) of ((D x| P) x (D x| P)) x| H
/// and their Morita-Frobenius numbers.
#[derive(Parser, Debug)]
#[command(name = "blockmf", version)]
struct Cli {
    /// File of `key = value` lines supplying defaults for missing flags.
    #[arg(long, global = true)]
    config: Option<String>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Morita-Frobenius number of r, or the (r, p) recipe for a target n.
    Mf(MfArgs),
    /// Run the named property checks and stream one JSON line per check.
    Verify(VerifyArgs),
    /// Emit the Ext quiver of B0.
    Quiver(QuiverArgs),
    /// Print the commutation pairing and the recovered pair {j, r - j}.
    Recover(BlockArgs),
}

#[derive(Args, Debug)]
struct MfArgs {
    #[arg(long)]
    ell: u64,
    #[arg(long, conflicts_with = "r", required_unless_present = "r")]
    n: Option<u32>,
    #[arg(long)]
    r: Option<u64>,
    /// Upper bound for the prime search in recipe mode.
    #[arg(long, default_value_t = DEFAULT_PRIME_CAP)]
    cap: u64,
}

#[derive(Args, Debug)]
struct BlockArgs {
    #[arg(long)]
    ell: u64,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    r: u64,
    /// Exponent j of the faithful character theta_j of Z.
    #[arg(long, default_value_t = 1)]
    theta: u64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    block: BlockArgs,
    #[arg(long, default_value = "quick")]
    suite: Suite,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Comma-separated subset of check names.
    #[arg(long)]
    checks: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Dot,
    Json,
}

#[derive(Args, Debug)]
struct QuiverArgs {
    #[command(flatten)]
    block: BlockArgs,
    #[arg(long, value_enum, default_value = "dot")]
    out: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<String>,
}

/// Appends `--key value` for config keys the chosen subcommand accepts and
/// the command line does not already set.
fn apply_config(args: Vec<String>) -> Result<Vec<String>> {
    let Some(pos) = args.iter().position(|a| a == "--config") else {
        if let Some(a) = args.iter().find(|a| a.starts_with("--config=")) {
            let path = a["--config=".len()..].to_string();
            return merge_config(args.clone(), &path);
        }
        return Ok(args);
    };
    let path = args
        .get(pos + 1)
        .context("--config needs a file name")?
        .clone();
    merge_config(args, &path)
}

fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("config line {}: expected key = value", no + 1);
        };
        out.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(out)
}

fn merge_config(mut args: Vec<String>, path: &str) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading config {path}"))?;
    let entries = parse_config(&text)?;
    let cmd = Cli::command();
    let Some(sub) = args
        .iter()
        .find_map(|a| cmd.get_subcommands().find(|s| s.get_name() == a))
    else {
        return Ok(args);
    };
    let accepted: Vec<String> = sub
        .get_arguments()
        .filter_map(|a| a.get_long().map(str::to_string))
        .collect();
    for (k, v) in entries {
        if k == "config" || !accepted.contains(&k) {
            continue;
        }
        let flag = format!("--{k}");
        let present = args
            .iter()
            .any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if !present {
            args.push(flag);
            args.push(v);
        }
    }
    Ok(args)
}

fn block_context(b: &BlockArgs) -> Result<B0Context> {
    let params = Arc::new(Params::new(b.ell, b.p, b.r)?);
    let theta = Character::new(&params, CharGroup::Z, b.theta as i64);
    if !theta.is_faithful(&params) {
        bail!("theta_{} is not faithful on Z of order {}", b.theta, b.r);
    }
    Ok(B0Context::new(params, theta)?)
}

fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn cmd_mf(a: &MfArgs) -> Result<()> {
    let line = match (a.n, a.r) {
        (Some(n), _) => {
            let (r, p) = params_for_target(a.ell, n, a.cap)?;
            json!({ "ell": a.ell, "n": n, "r": r, "p": p, "mf": mf_number(a.ell, r)? })
        }
        (None, Some(r)) => json!({ "ell": a.ell, "r": r, "mf": mf_number(a.ell, r)? }),
        (None, None) => bail!("one of --n or --r is required"),
    };
    emit(&format!("{line}\n"))?;
    Ok(())
}

fn cmd_verify(a: &VerifyArgs) -> Result<bool> {
    let ctx = block_context(&a.block)?;
    let verifier = Verifier {
        ctx,
        suite: a.suite,
        seed: a.seed,
    };
    let specs: Vec<_> = match &a.checks {
        None => CHECKS.iter().collect(),
        Some(list) => list
            .split(',')
            .map(|n| find_check(n.trim()).with_context(|| format!("unknown check '{n}'")))
            .collect::<Result<_>>()?,
    };
    let stdout = std::io::stdout();
    let mut ok = true;
    for spec in specs {
        let report = verifier.run(spec);
        ok &= report.status == blockmf::verify::Status::Pass;
        let mut out = stdout.lock();
        writeln!(out, "{}", serde_json::to_string(&report)?)?;
        out.flush()?;
    }
    Ok(ok)
}

fn cmd_quiver(a: &QuiverArgs) -> Result<()> {
    let ctx = block_context(&a.block)?;
    let degrees: BTreeMap<_, _> = simples(ctx.p(), &ctx.theta)?.into_iter().collect();
    let (labels, table) = ext_quiver(&ctx)?;
    let names: Vec<String> = labels.iter().map(|l| l.name()).collect();
    let text = match a.out {
        Format::Json => {
            let vertices: Vec<_> = labels
                .iter()
                .map(|l| json!({ "label": l.name(), "degree": degrees[l] }))
                .collect();
            let doc = json!({
                "params": { "ell": a.block.ell, "p": a.block.p, "r": a.block.r, "theta": a.block.theta },
                "vertices": vertices,
                "ext": table,
            });
            serde_json::to_string_pretty(&doc)? + "\n"
        }
        Format::Dot => {
            let mut s = String::from("digraph quiver {\n");
            for (l, name) in labels.iter().zip(&names) {
                s += &format!("  \"{name}\" [degree={}];\n", degrees[l]);
            }
            for (i, row) in table.iter().enumerate() {
                for (j, &k) in row.iter().enumerate() {
                    for _ in 0..k {
                        s += &format!("  \"{}\" -> \"{}\";\n", names[i], names[j]);
                    }
                }
            }
            s + "}\n"
        }
    };
    match &a.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {path}"))?,
        None => emit(&text)?,
    }
    Ok(())
}

fn cmd_recover(a: &BlockArgs) -> Result<()> {
    let ctx = block_context(a)?;
    let p = ctx.p();
    let table = commutation_pairing(&ctx)?;
    let (j1, j2) = recover_theta(&table, p)?;
    let line = json!({
        "params": { "ell": a.ell, "p": a.p, "r": a.r, "theta": a.theta },
        "pairing": table.to_json(p.f()),
        "recovered": [j1, j2],
    });
    emit(&format!("{line}\n"))?;
    Ok(())
}

fn run() -> Result<ExitCode> {
    let args = apply_config(std::env::args().collect())?;
    let cli = Cli::try_parse_from(args).unwrap_or_else(|e| e.exit());
    match &cli.cmd {
        Cmd::Mf(a) => cmd_mf(a)?,
        Cmd::Verify(a) => {
            if !cmd_verify(a)? {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Quiver(a) => cmd_quiver(a)?,
        Cmd::Recover(a) => cmd_recover(a)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e)
            if e
                .downcast_ref::<std::io::Error>()
                .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
