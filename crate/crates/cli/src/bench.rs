use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use rayon::prelude::*;
use sfpa_core::generator::ManifestRow;
use sfpa_core::Manifest;

use crate::commands::{checked_value, read_tree, run_algo};
use crate::error::{CliError, CliResult};
use crate::Algo;

pub const HEADER: [&str; 9] =
    ["file", "nodes", "multiparent", "c", "algo", "value", "wall_time_s", "max_terms", "error"];

pub struct Options {
    pub manifest: PathBuf,
    pub out: Option<PathBuf>,
    pub repeats: usize,
    pub algos: Vec<Algo>,
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub file: String,
    pub nodes: usize,
    pub multiparent: usize,
    pub c: usize,
    pub algo: Algo,
    pub value: Option<f64>,
    pub wall_time_s: Option<f64>,
    pub max_terms: Option<usize>,
    pub error: Option<String>,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs[xs.len() / 2]
}

fn measure(dir: &Path, row: &ManifestRow, algo: Algo, repeats: usize) -> Record {
    let mut rec = Record {
        file: row.file.clone(),
        nodes: row.nodes,
        multiparent: row.multiparent,
        c: row.c,
        algo,
        value: None,
        wall_time_s: None,
        max_terms: None,
        error: None,
    };
    let run = || -> CliResult<(f64, f64, Option<usize>)> {
        let t = read_tree(&dir.join(&row.file))?;
        let mut times = Vec::with_capacity(repeats);
        let mut last = None;
        for _ in 0..repeats.max(1) {
            let o = run_algo::<f64>(&t, algo)?;
            times.push(o.seconds);
            last = Some(o);
        }
        let o = last.expect("at least one repeat");
        Ok((checked_value(o.value)?, median(times), o.report.map(|r| r.max_terms)))
    };
    match run() {
        Ok((value, secs, terms)) => {
            rec.value = Some(value);
            rec.wall_time_s = Some(secs);
            rec.max_terms = terms;
        }
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec
}

/// Every (file, algo) pair, in manifest order, then stably sorted by `(c, nodes)`.
pub fn collect(manifest: &Manifest, dir: &Path, algos: &[Algo], repeats: usize) -> Vec<Record> {
    let jobs: Vec<(&ManifestRow, Algo)> =
        manifest.rows.iter().flat_map(|r| algos.iter().map(move |&a| (r, a))).collect();
    let mut records: Vec<Record> = jobs.par_iter().map(|&(r, a)| measure(dir, r, a, repeats)).collect();
    records.sort_by_key(|r| (r.c, r.nodes));
    records
}

pub fn write<W: io::Write>(records: &[Record], w: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(HEADER)?;
    let opt = |x: Option<String>| x.unwrap_or_default();
    for r in records {
        w.write_record([
            r.file.clone(),
            r.nodes.to_string(),
            r.multiparent.to_string(),
            r.c.to_string(),
            r.algo.name().to_owned(),
            opt(r.value.map(|v| v.to_string())),
            opt(r.wall_time_s.map(|v| v.to_string())),
            opt(r.max_terms.map(|v| v.to_string())),
            opt(r.error.clone()),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn run(opts: &Options) -> CliResult<ExitCode> {
    let manifest = Manifest::read(&opts.manifest).map_err(|e| CliError::Input(e.to_string()))?;
    let dir = opts.manifest.parent().unwrap_or(Path::new(".")).to_owned();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    let records = pool.install(|| collect(&manifest, &dir, &opts.algos, opts.repeats));
    let written = match &opts.out {
        Some(path) => std::fs::File::create(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
            .and_then(|f| write(&records, f).map_err(|e| CliError::Input(e.to_string()))),
        None => write(&records, io::stdout().lock()).map_err(|e| CliError::Input(e.to_string())),
    };
    written?;
    Ok(ExitCode::SUCCESS)
}
