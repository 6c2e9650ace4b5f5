//! `yw`: build pyramids, compute generator tables of finite W-algebras and
//! run verification suites.
//!
//! Exit codes: 0 when everything passes, 1 when a checked claim fails,
//! 2 on usage or configuration errors. Output is deterministic.

mod config;
mod suites;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::process::ExitCode;
use yw_core::json::{to_pretty, TableJson, SCHEMA};
use yw_core::relations::{check_construction, hilbert_counts};
use yw_core::{CheckReport, Invariants, Kind, Shape, ShiftMatrix};

use config::{CliError, Corruption, ShapeArg};

#[derive(Parser)]
#[command(name = "yw", version, about = "Finite W-algebras of type A: generators and machine-checked relations")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Shift matrix, row lengths, shapes and centralizer counts of a pyramid.
    Pyramid(PyramidArgs),
    /// Generator table D, D̃, E, F of W(π) as JSON.
    Generators(GenArgs),
    /// Run verification suites and emit a JSON report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct PyramidSel {
    /// Column heights, e.g. 2,2,3,1.
    #[arg(long)]
    q: String,
    /// Height bound n (default: the tallest column).
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct PyramidArgs {
    #[command(flatten)]
    pyr: PyramidSel,
    /// Largest degree for the Hilbert counts.
    #[arg(long = "d-max", default_value_t = 6)]
    d_max: usize,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Also write the JSON document to this file.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    pyr: PyramidSel,
    /// Shape: a composition of n, "minimal" or "ones".
    #[arg(long, default_value = "ones")]
    shape: ShapeArg,
    /// Truncation order (default 2l + 2).
    #[arg(long = "K")]
    k: Option<usize>,
    /// Also build the table by Gauss factorization and compare.
    #[arg(long = "cross-check")]
    cross_check: bool,
    /// Write the table to this file instead of standard output.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    pyr: PyramidSel,
    /// Shape: a composition of n, "minimal" or "ones".
    #[arg(long, default_value = "ones")]
    shape: ShapeArg,
    /// Truncation order (default 2l + 2).
    #[arg(long = "K")]
    k: Option<usize>,
    /// Largest degree for the PBW audit and the Miura rank probe.
    #[arg(long = "d-max", default_value_t = 6)]
    d_max: usize,
    /// Suite to run (repeatable): relations, parabolic, truncation,
    /// invariance, pbw-audit, traninv, construction, miura, comult, rect.
    #[arg(long)]
    suite: Vec<String>,
    /// Run every applicable suite.
    #[arg(long)]
    all: bool,
    /// Negative control: perturb generator KIND:a:i:j:r.
    #[arg(long)]
    corrupt: Option<Corruption>,
    /// Seed for randomised identities.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report to this file instead of standard output.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Serialize)]
struct PyramidJson {
    schema: &'static str,
    q: Vec<usize>,
    n: usize,
    #[serde(rename = "N")]
    big_n: usize,
    l: usize,
    p: Vec<usize>,
    sigma: ShiftMatrix,
    minimal_shape: Shape,
    admissible_shapes: Vec<Shape>,
    centralizer_count: usize,
    hilbert: Vec<u128>,
}

fn emit(text: &str, out: &Option<std::path::PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn order(k: Option<usize>, l: usize) -> Result<usize, CliError> {
    match k {
        Some(0) => Err(CliError::Usage("--K must be at least 1".into())),
        Some(k) => Ok(k),
        None => Ok(2 * l + 2),
    }
}

fn cmd_pyramid(a: &PyramidArgs) -> Result<ExitCode, CliError> {
    let pyr = config::pyramid(&a.pyr.q, a.pyr.n)?;
    let sigma = pyr.shift_matrix()?;
    let cent = sigma.centralizer_index_set(pyr.p());
    let degrees: Vec<usize> = cent.iter().map(|x| x.2).collect();
    let doc = PyramidJson {
        schema: SCHEMA,
        q: pyr.q().to_vec(),
        n: pyr.n(),
        big_n: pyr.big_n(),
        l: pyr.l(),
        p: pyr.p().to_vec(),
        minimal_shape: sigma.minimal_shape(),
        admissible_shapes: sigma.admissible_shapes(),
        centralizer_count: cent.len(),
        hilbert: hilbert_counts(&degrees, a.d_max),
        sigma,
    };
    let json = to_pretty(&doc);
    if let Some(path) = &a.out {
        std::fs::write(path, &json)?;
    }
    if a.json {
        print!("{json}");
    } else {
        let list = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        println!("q = ({})  n = {}  N = {}  l = {}", list(&doc.q), doc.n, doc.big_n, doc.l);
        println!("p = ({})", list(&doc.p));
        let rows: Vec<String> = doc.sigma.rows().iter().map(|r| format!("[{}]", list(r))).collect();
        println!("sigma = [{}]", rows.join(","));
        println!("minimal shape = ({})", list(doc.minimal_shape.parts()));
        let shapes: Vec<String> = doc.admissible_shapes.iter().map(|s| format!("({})", list(s.parts()))).collect();
        println!("admissible shapes = {}", shapes.join(" "));
        println!("centralizer indices = {}", doc.centralizer_count);
        let h: Vec<String> = doc.hilbert.iter().map(|x| x.to_string()).collect();
        println!("hilbert counts (degree <= 0..={}) = {}", a.d_max, h.join(" "));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_generators(a: &GenArgs) -> Result<ExitCode, CliError> {
    let pyr = config::pyramid(&a.pyr.q, a.pyr.n)?;
    let sigma = pyr.shift_matrix()?;
    let nu = config::shape(&a.shape, &sigma)?;
    let k = order(a.k, pyr.l())?;
    let inv = Invariants::new(pyr.clone(), k)?;
    let tab = inv.generators_direct(&nu)?;
    emit(&to_pretty(&TableJson::encode(inv.algebra(), pyr.spec(), &tab)), &a.out)?;
    let counts: Vec<String> =
        [Kind::D, Kind::Dt, Kind::E, Kind::F].iter().map(|&kd| format!("{kd}: {}", suites::count_kind(&tab, kd))).collect();
    eprintln!("generators: {} entries ({})", tab.entries().len(), counts.join(", "));
    if a.cross_check {
        let rep = check_construction(&inv, &nu)?;
        summarize("cross-check", &rep);
        if !rep.all_pass() {
            return Ok(ExitCode::from(1));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn summarize(what: &str, rep: &CheckReport) {
    eprintln!(
        "{what}: {} claims, {} passed ({} vacuously), {} failed",
        rep.claims.len(),
        rep.summary.pass,
        rep.summary.vacuous,
        rep.summary.fail
    );
    let shown = 10;
    let total = rep.failures().count();
    for c in rep.failures().take(shown) {
        let idx: Vec<String> = c.idx.iter().map(|x| x.to_string()).collect();
        let detail = match (&c.witness, &c.residue) {
            (Some(w), _) => w.clone(),
            (None, Some(r)) => format!("nonzero residue with {} terms", r.terms.len()),
            (None, None) => "failed".into(),
        };
        eprintln!("FAIL {} [{}]: {detail}", c.id, idx.join(","));
    }
    if total > shown {
        eprintln!("... and {} more failures", total - shown);
    }
}

fn cmd_verify(a: &VerifyArgs) -> Result<ExitCode, CliError> {
    let pyr = config::pyramid(&a.pyr.q, a.pyr.n)?;
    let sigma = pyr.shift_matrix()?;
    let nu = config::shape(&a.shape, &sigma)?;
    let k = order(a.k, pyr.l())?;
    let ctx = suites::Context::new(pyr, nu, k, a.d_max, a.seed, a.corrupt)?;
    let mut names: Vec<String> = if a.all {
        suites::ALL.iter().filter(|s| ctx.applicable(s)).map(|s| s.to_string()).collect()
    } else {
        a.suite.clone()
    };
    if names.is_empty() {
        return Err(CliError::Usage("select suites with --suite NAME or --all".into()));
    }
    names.dedup();
    let mut rep = CheckReport::new();
    for name in &names {
        let r = ctx.run(name)?;
        summarize(name, &r);
        rep.merge(r);
    }
    rep.finish();
    emit(&to_pretty(&rep), &a.out)?;
    if let Some(c) = ctx.corrupt {
        eprintln!("corrupted generator: {}", c.label());
    }
    Ok(if rep.all_pass() { ExitCode::SUCCESS } else { ExitCode::from(1) })
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
    let result = match &cli.cmd {
        Command::Pyramid(a) => cmd_pyramid(a),
        Command::Generators(a) => cmd_generators(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
