//! Run several algorithms over a directory of instances.
//!
//! CSV columns, in order: `instance, algorithm, peak, lower_bound, opt,
//! ratio, wall_ms`. Rationals are written as `num/den`; `opt` is empty when
//! the oracle gave up, in which case `ratio` is taken against the lower
//! bound instead.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use anyhow::{Context, Result};
use peakpack::exact::{self, Limits};
use peakpack::{bounds, ratio, Instance, Q};

use crate::algo::{self, Algorithm};

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub instance: String,
    pub algorithm: Algorithm,
    pub peak: u64,
    pub lower_bound: Q,
    pub opt: Option<u64>,
    pub ratio: Q,
    pub wall_ms: u128,
}

#[derive(Debug, Clone)]
pub struct Failure {
    pub instance: String,
    pub algorithm: Algorithm,
    pub error: String,
}

#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub failures: Vec<Failure>,
}

pub struct BenchOptions {
    pub algorithms: Vec<Algorithm>,
    pub eps: Q,
    pub workers: usize,
    pub oracle_limits: Limits,
}

pub fn instance_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

fn bench_one(name: &str, instance: &Instance, opts: &BenchOptions) -> (Vec<BenchRow>, Vec<Failure>) {
    let lb = bounds::lower_bound(instance).t;
    let opt = exact::exact_opt(instance, opts.oracle_limits).ok().map(|s| s.opt);
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for &a in &opts.algorithms {
        let clock = Instant::now();
        match algo::run(instance, a, &opts.eps, opts.oracle_limits) {
            Ok(run) => {
                let wall_ms = clock.elapsed().as_millis();
                let denom = match opt {
                    Some(o) => ratio::int(o),
                    None => lb.clone(),
                };
                rows.push(BenchRow {
                    instance: name.to_string(),
                    algorithm: a,
                    peak: run.peak,
                    lower_bound: lb.clone(),
                    opt,
                    ratio: ratio::int(run.peak) / denom,
                    wall_ms,
                });
            }
            Err(e) => failures.push(Failure {
                instance: name.to_string(),
                algorithm: a,
                error: e.to_string(),
            }),
        }
    }
    (rows, failures)
}

pub fn bench(instances: &[(String, Instance)], opts: &BenchOptions) -> BenchReport {
    let next = AtomicUsize::new(0);
    type Slot = (usize, Vec<BenchRow>, Vec<Failure>);
    let results: Mutex<Vec<Slot>> = Mutex::new(Vec::new());
    let workers = opts.workers.max(1).min(instances.len().max(1));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some((name, inst)) = instances.get(k) else {
                    break;
                };
                let (rows, fails) = bench_one(name, inst, opts);
                results.lock().expect("bench results lock").push((k, rows, fails));
            });
        }
    });
    let mut results = results.into_inner().expect("bench results lock");
    results.sort_by_key(|r| r.0);
    let mut report = BenchReport::default();
    for (_, rows, fails) in results {
        report.rows.extend(rows);
        report.failures.extend(fails);
    }
    report
}

pub fn to_csv(report: &BenchReport) -> String {
    let mut out = String::from("instance,algorithm,peak,lower_bound,opt,ratio,wall_ms\n");
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.instance,
            r.algorithm,
            r.peak,
            ratio::format(&r.lower_bound),
            r.opt.map(|o| o.to_string()).unwrap_or_default(),
            ratio::format(&r.ratio),
            r.wall_ms
        ));
    }
    out
}

/// Per algorithm: `(rows, max ratio, mean ratio)`.
pub fn summary(report: &BenchReport) -> BTreeMap<String, (usize, Q, f64)> {
    let mut acc: BTreeMap<String, (usize, Q, Q)> = BTreeMap::new();
    for r in &report.rows {
        let e = acc
            .entry(r.algorithm.to_string())
            .or_insert_with(|| (0, ratio::zero(), ratio::zero()));
        e.0 += 1;
        e.1 = ratio::max(&e.1, &r.ratio);
        e.2 += &r.ratio;
    }
    acc.into_iter()
        .map(|(k, (n, max, sum))| {
            let mean = ratio::to_f64(&sum) / n as f64;
            (k, (n, max, mean))
        })
        .collect()
}

pub fn summary_text(report: &BenchReport) -> String {
    let mut out = String::new();
    for (alg, (n, max, mean)) in summary(report) {
        out.push_str(&format!(
            "{alg}: {n} rows, max ratio {} ({:.4}), mean ratio {mean:.4}\n",
            ratio::format(&max),
            ratio::to_f64(&max)
        ));
    }
    for f in &report.failures {
        out.push_str(&format!("failed: {} on {}: {}\n", f.algorithm, f.instance, f.error));
    }
    out
}
