use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::Value;
use sfpa_core::solver::REDUCTION_CAP;
use sfpa_core::{
    generate, generate_corpus, immediate_dominators, minimal_cut_set_via_reduction, oracle_unreliability, parse_ft,
    serialize_ft, solve_sfpa, solve_sfpa2, solve_treelike, Coefficient, FaultTree, GenConfig, GenError, OracleError,
    Rational, ReductionError, SolveReport,
};

use crate::error::{CliError, CliResult};
use crate::Algo;

/// Float results may stray this far outside `[0, 1]` before it counts as a bug.
pub const SLACK: f64 = 1e-9;

pub fn read_tree(path: &Path) -> CliResult<FaultTree> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_ft(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Value plus whatever counters the algorithm reports.
pub struct Outcome<C> {
    pub value: C,
    pub report: Option<SolveReport<C>>,
    pub seconds: f64,
}

pub fn run_algo<C: Coefficient>(t: &FaultTree, algo: Algo) -> CliResult<Outcome<C>> {
    let start = Instant::now();
    let plain = |value: C| Outcome { value, report: None, seconds: start.elapsed().as_secs_f64() };
    match algo {
        Algo::Sfpa | Algo::Sfpa2 => {
            let report = if algo == Algo::Sfpa { solve_sfpa::<C>(t) } else { solve_sfpa2::<C>(t) };
            let seconds = report.wall_time.as_secs_f64();
            Ok(Outcome { value: report.unreliability.clone(), report: Some(report), seconds })
        }
        Algo::Treelike => solve_treelike::<C>(t).map(plain).map_err(|e| CliError::Precondition(e.to_string())),
        Algo::Oracle => oracle_unreliability::<C>(t, sfpa_core::DEFAULT_ENUMERATION_CAP)
            .map(plain)
            .map_err(|e: OracleError| CliError::Precondition(e.to_string())),
    }
}

/// Clamps a float result into `[0, 1]`, failing if it is off by more than [`SLACK`].
pub fn checked_value(v: f64) -> CliResult<f64> {
    if (-SLACK..=1.0 + SLACK).contains(&v) {
        Ok(v.clamp(0.0, 1.0))
    } else {
        Err(CliError::Internal(format!("unreliability {v} is not a probability")))
    }
}

fn report_json<C>(json: &mut serde_json::Map<String, Value>, report: Option<&SolveReport<C>>) {
    let field = |f: fn(&SolveReport<C>) -> usize| report.map_or(Value::Null, |r| f(r).into());
    json.insert("max_live_vars".into(), field(|r| r.max_live_vars));
    json.insert("max_terms".into(), field(|r| r.max_terms));
    json.insert("substitutions".into(), field(|r| r.substitutions));
    json.insert("multiplications".into(), field(|r| r.multiplications));
}

pub fn solve(file: &Path, algo: Algo, exact: bool) -> CliResult<ExitCode> {
    let t = read_tree(file)?;
    let mut out = serde_json::Map::new();
    out.insert("file".into(), file.display().to_string().into());
    out.insert("algo".into(), algo.name().into());
    out.insert("exact".into(), exact.into());
    out.insert("nodes".into(), t.len().into());
    out.insert("bes".into(), t.basic_events().len().into());
    out.insert("multiparent".into(), t.multiparent_count().into());
    if exact {
        let o = run_algo::<Rational>(&t, algo)?;
        let approx = checked_value(o.value.to_f64())?;
        out.insert("unreliability".into(), o.value.to_string().into());
        out.insert("unreliability_f64".into(), approx.into());
        report_json(&mut out, o.report.as_ref());
        out.insert("wall_time_s".into(), o.seconds.into());
    } else {
        let o = run_algo::<f64>(&t, algo)?;
        out.insert("unreliability".into(), checked_value(o.value)?.into());
        report_json(&mut out, o.report.as_ref());
        out.insert("wall_time_s".into(), o.seconds.into());
    }
    println!("{}", serde_json::to_string_pretty(&Value::Object(out)).expect("json values serialize"));
    Ok(ExitCode::SUCCESS)
}

enum Verdict {
    Pass(f64),
    Fail(String),
    Skip(String),
    Error(String),
}

fn check_one(path: &Path, cap: usize) -> Verdict {
    let t = match read_tree(path) {
        Ok(t) => t,
        Err(e) => return Verdict::Error(e.to_string()),
    };
    let bes = t.basic_events().len();
    if bes > cap {
        return Verdict::Skip(format!("{bes} basic events exceed cap {cap}"));
    }
    let u = match oracle_unreliability::<f64>(&t, cap) {
        Ok(u) => u,
        Err(e) => return Verdict::Skip(e.to_string()),
    };
    let values =
        [("oracle", u), ("sfpa", solve_sfpa::<f64>(&t).unreliability), ("sfpa2", solve_sfpa2::<f64>(&t).unreliability)];
    for (i, &(a, x)) in values.iter().enumerate() {
        for &(b, y) in &values[i + 1..] {
            if (x - y).abs() > SLACK {
                return Verdict::Fail(format!("{a} = {x}, {b} = {y}"));
            }
        }
    }
    Verdict::Pass(u)
}

fn collect_inputs(path: &Path) -> CliResult<Vec<PathBuf>> {
    if !path.is_dir() {
        return Ok(vec![path.to_owned()]);
    }
    let entries = fs::read_dir(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "dft"))
        .collect();
    files.sort();
    Ok(files)
}

pub fn check(path: &Path, cap: usize) -> CliResult<ExitCode> {
    let files = collect_inputs(path)?;
    let verdicts: Vec<Verdict> = files.par_iter().map(|f| check_one(f, cap)).collect();
    let (mut failed, mut errors) = (0, 0);
    for (f, v) in files.iter().zip(&verdicts) {
        let f = f.display();
        match v {
            Verdict::Pass(u) => println!("PASS {f} {u}"),
            Verdict::Fail(msg) => {
                failed += 1;
                println!("FAIL {f} {msg}");
            }
            Verdict::Skip(msg) => println!("SKIP {f} {msg}"),
            Verdict::Error(msg) => {
                errors += 1;
                println!("ERROR {f} {msg}");
            }
        }
    }
    Ok(if failed > 0 {
        ExitCode::from(3)
    } else if errors > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn gen_error(e: GenError) -> CliError {
    match e {
        GenError::Infeasible(_) => CliError::Precondition(e.to_string()),
        _ => CliError::Input(e.to_string()),
    }
}

pub fn gen(cfg: &GenConfig, out: Option<&Path>, count: usize) -> CliResult<ExitCode> {
    let Some(dir) = out else {
        if count != 1 {
            return Err(CliError::Input("--count needs --out".into()));
        }
        print!("{}", serialize_ft(&generate(cfg).map_err(gen_error)?));
        return Ok(ExitCode::SUCCESS);
    };
    let grid: Vec<GenConfig> =
        (0..count as u64).map(|i| GenConfig { seed: cfg.seed.wrapping_add(i), ..cfg.clone() }).collect();
    let manifest = generate_corpus(&grid, dir).map_err(gen_error)?;
    eprintln!("wrote {} trees to {}", manifest.len(), dir.display());
    Ok(ExitCode::SUCCESS)
}

pub fn mcs(file: &Path) -> CliResult<ExitCode> {
    let t = read_tree(file)?;
    let f = minimal_cut_set_via_reduction(&t, REDUCTION_CAP)
        .map_err(|e: ReductionError| CliError::Precondition(e.to_string()))?;
    let mut names: Vec<&str> = f.failed().into_iter().map(|v| t.name(v)).collect();
    names.sort_unstable();
    println!("{}", names.join(" "));
    Ok(ExitCode::SUCCESS)
}

pub fn dom(file: &Path) -> CliResult<ExitCode> {
    let t = read_tree(file)?;
    let info = immediate_dominators(&t);
    for &v in info.topo_order() {
        if let Some(d) = info.idom(v) {
            println!("{} -> {}", t.name(v), t.name(d));
        }
    }
    Ok(ExitCode::SUCCESS)
}
