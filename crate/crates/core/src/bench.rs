//! Reproducible benchmark harness: instance sets from derived seeds, every
//! configured solver on every instance, per-record CSV and per-group summary.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;

use crate::encoding::{is_valid_coloring, swap_count};
use crate::error::{Error, Result};
use crate::instances::{write_instances, BpspInstance};
use crate::qaoa::MixerKind;
use crate::rqaoa::DEFAULT_CUTOFF;
use crate::seed::Seed;
use crate::solver::{solver, SolverOptions};

pub const RECORDS_HEADER: &str = "n,instance,seed,algorithm,swaps,ratio,time_ms,restarts";
pub const SUMMARY_HEADER: &str = "algorithm,n,count,mean,std,min,max";
pub const RESTARTS_HEADER: &str = "n,instance,seed,algorithm,restart,swaps,ratio";

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub instances: usize,
    pub algorithms: Vec<String>,
    pub restarts: usize,
    pub mixer: MixerKind,
    pub cutoff: usize,
    pub seed: u64,
    /// `None` uses the machine's parallelism.
    pub workers: Option<usize>,
    pub records: Option<PathBuf>,
    pub summary: Option<PathBuf>,
    /// Optional dump of the generated instances.
    pub instances_out: Option<PathBuf>,
    /// Optional per-restart records for multi-start solvers.
    pub restart_records: Option<PathBuf>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![128],
            instances: 50,
            algorithms: vec!["rf".into(), "greedy".into(), "rg".into(), "rsg".into()],
            restarts: 10,
            mixer: MixerKind::XEqY,
            cutoff: DEFAULT_CUTOFF,
            seed: 0,
            workers: None,
            records: None,
            summary: None,
            instances_out: None,
            restart_records: None,
        }
    }
}

fn parse_list<T: std::str::FromStr>(value: &str) -> std::result::Result<Vec<T>, T::Err> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::parse).collect()
}

impl BenchConfig {
    /// Parses `key = value` lines. `#` starts a comment; lists are
    /// comma-separated; unknown keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = BenchConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: i + 1, msg };
            let (key, value) = line.split_once('=').ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| v.parse::<usize>().map_err(|e| err(format!("{key}: {e}")));
            match key {
                "sizes" => cfg.sizes = parse_list(value).map_err(|e| err(format!("sizes: {e}")))?,
                "instances" => cfg.instances = num(value)?,
                "algorithms" => cfg.algorithms = value.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
                "restarts" => cfg.restarts = num(value)?,
                "mixer" => cfg.mixer = value.parse().map_err(|e: Error| err(e.to_string()))?,
                "cutoff" => cfg.cutoff = num(value)?,
                "seed" => cfg.seed = value.parse().map_err(|e| err(format!("seed: {e}")))?,
                "workers" => cfg.workers = Some(num(value)?),
                "records" => cfg.records = Some(value.into()),
                "summary" => cfg.summary = Some(value.into()),
                "instances_out" => cfg.instances_out = Some(value.into()),
                "restart_records" => cfg.restart_records = Some(value.into()),
                _ => return Err(err(format!("unknown key `{key}`"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return bad("sizes must be a non-empty list of positive integers");
        }
        if self.instances == 0 {
            return bad("instances must be at least 1");
        }
        if self.restarts == 0 {
            return bad("restarts must be at least 1");
        }
        if self.workers == Some(0) {
            return bad("workers must be at least 1");
        }
        if self.algorithms.is_empty() {
            return bad("at least one algorithm is required");
        }
        if !(1..=24).contains(&self.cutoff) {
            return bad("cutoff must be in 1..=24");
        }
        let opts = self.solver_options();
        for a in &self.algorithms {
            solver(a, &opts)?;
        }
        Ok(())
    }

    fn solver_options(&self) -> SolverOptions {
        SolverOptions { restarts: self.restarts, mixer: self.mixer, cutoff: self.cutoff, ..Default::default() }
    }

    /// Seed of instance `index` at size `n`.
    pub fn instance_seed(&self, n: usize, index: usize) -> Seed {
        Seed(self.seed).derive_all(&[n as u64, index as u64])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub n: usize,
    pub instance: usize,
    pub seed: u64,
    pub algorithm: String,
    pub swaps: usize,
    pub ratio: f64,
    pub time_ms: f64,
    pub restarts: usize,
}

/// Rounded result of one restart of a multi-start solver.
#[derive(Debug, Clone, PartialEq)]
pub struct RestartRecord {
    pub n: usize,
    pub instance: usize,
    pub seed: u64,
    pub algorithm: String,
    pub restart: usize,
    pub swaps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub algorithm: String,
    pub n: usize,
    pub count: usize,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchOutput {
    pub records: Vec<BenchRecord>,
    pub summary: Vec<SummaryRow>,
    pub restarts: Vec<RestartRecord>,
    pub instances: Vec<BpspInstance>,
}

/// Runs every configured algorithm once on every instance. Records come out
/// in `(size, instance, algorithm)` order regardless of the worker count.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<BenchOutput> {
    cfg.validate()?;
    let opts = cfg.solver_options();
    let solvers = cfg.algorithms.iter().map(|a| solver(a, &opts)).collect::<Result<Vec<_>>>()?;
    let slots: Vec<(usize, usize)> = cfg.sizes.iter().flat_map(|&n| (0..cfg.instances).map(move |i| (n, i))).collect();
    let instances = slots
        .iter()
        .map(|&(n, i)| BpspInstance::random(n, cfg.instance_seed(n, i)))
        .collect::<Result<Vec<_>>>()?;
    let tasks: Vec<(usize, usize)> = (0..slots.len()).flat_map(|s| (0..solvers.len()).map(move |a| (s, a))).collect();

    let run_task = |&(s, a): &(usize, usize)| -> Result<(BenchRecord, Vec<RestartRecord>)> {
        let (n, i) = slots[s];
        let x = &instances[s];
        let seed = cfg.instance_seed(n, i);
        let start = Instant::now();
        let out = solvers[a].solve(x, seed)?;
        let time_ms = start.elapsed().as_secs_f64() * 1e3;
        let name = solvers[a].name();
        if !is_valid_coloring(x, &out.coloring)? || swap_count(&out.coloring) != out.cost {
            return Err(Error::Solver { solver: name.into(), msg: format!("invalid colouring on instance {i} of size {n}") });
        }
        log::debug!("n={n} instance={i} {name}: {} swaps in {time_ms:.1} ms", out.cost);
        let restarts = out
            .restart_costs
            .iter()
            .enumerate()
            .map(|(r, &swaps)| RestartRecord { n, instance: i, seed: seed.0, algorithm: name.into(), restart: r, swaps })
            .collect();
        let record = BenchRecord {
            n,
            instance: i,
            seed: seed.0,
            algorithm: name.into(),
            swaps: out.cost,
            ratio: out.cost as f64 / n as f64,
            time_ms,
            restarts: out.restarts,
        };
        Ok((record, restarts))
    };

    let results: Vec<Result<(BenchRecord, Vec<RestartRecord>)>> = {
        let threads = cfg.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
        pool.install(|| tasks.par_iter().map(run_task).collect())
    };
    let mut records = Vec::with_capacity(results.len());
    let mut restarts = Vec::new();
    for r in results {
        let (rec, rs) = r?;
        records.push(rec);
        restarts.extend(rs);
    }
    let summary = summarize(&records);
    Ok(BenchOutput { records, summary, restarts, instances })
}

/// Groups by `(algorithm, n)` in order of first appearance. The standard
/// deviation uses the `count - 1` denominator and is 0 for a single record.
pub fn summarize(records: &[BenchRecord]) -> Vec<SummaryRow> {
    let mut order: Vec<(String, usize)> = Vec::new();
    let mut groups: HashMap<(String, usize), Vec<f64>> = HashMap::new();
    for r in records {
        let key = (r.algorithm.clone(), r.n);
        groups
            .entry(key.clone())
            .or_insert_with(|| {
                order.push(key);
                Vec::new()
            })
            .push(r.ratio);
    }
    order
        .into_iter()
        .map(|key| {
            let v = &groups[&key];
            let count = v.len();
            let mean = v.iter().sum::<f64>() / count as f64;
            let std = if count > 1 {
                (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1) as f64).sqrt()
            } else {
                0.0
            };
            let min = v.iter().copied().fold(f64::INFINITY, f64::min);
            let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            SummaryRow { algorithm: key.0, n: key.1, count, mean, std, min, max }
        })
        .collect()
}

/// A float with 17 significant digits in plain decimal notation.
pub fn format_g17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (16 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn write_records_csv<W: Write>(mut w: W, records: &[BenchRecord]) -> Result<()> {
    writeln!(w, "{RECORDS_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{:.3},{}",
            r.n,
            r.instance,
            r.seed,
            r.algorithm,
            r.swaps,
            format_g17(r.ratio),
            r.time_ms,
            r.restarts
        )?;
    }
    Ok(())
}

pub fn write_summary_csv<W: Write>(mut w: W, rows: &[SummaryRow]) -> Result<()> {
    writeln!(w, "{SUMMARY_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.algorithm,
            r.n,
            r.count,
            format_g17(r.mean),
            format_g17(r.std),
            format_g17(r.min),
            format_g17(r.max)
        )?;
    }
    Ok(())
}

pub fn write_restarts_csv<W: Write>(mut w: W, rows: &[RestartRecord]) -> Result<()> {
    writeln!(w, "{RESTARTS_HEADER}")?;
    for r in rows {
        let ratio = r.swaps as f64 / r.n as f64;
        writeln!(w, "{},{},{},{},{},{},{}", r.n, r.instance, r.seed, r.algorithm, r.restart, r.swaps, format_g17(ratio))?;
    }
    Ok(())
}

/// Writes every output the config names a path for.
pub fn write_outputs(cfg: &BenchConfig, out: &BenchOutput) -> Result<()> {
    let create = |p: &PathBuf| File::create(p).map(BufWriter::new);
    if let Some(p) = &cfg.records {
        let mut w = create(p)?;
        write_records_csv(&mut w, &out.records)?;
        w.flush()?;
    }
    if let Some(p) = &cfg.summary {
        let mut w = create(p)?;
        write_summary_csv(&mut w, &out.summary)?;
        w.flush()?;
    }
    if let Some(p) = &cfg.instances_out {
        let mut w = create(p)?;
        write_instances(&mut w, &out.instances)?;
        w.flush()?;
    }
    if let Some(p) = &cfg.restart_records {
        let mut w = create(p)?;
        write_restarts_csv(&mut w, &out.restarts)?;
        w.flush()?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(algorithm: &str, n: usize, ratio: f64) -> BenchRecord {
        BenchRecord { n, instance: 0, seed: 0, algorithm: algorithm.into(), swaps: 0, ratio, time_ms: 0.0, restarts: 1 }
    }

    #[test]
    fn summary_arithmetic() {
        let rows = summarize(&[record("rf", 10, 0.3), record("rf", 10, 0.4), record("rf", 10, 0.5), record("rg", 10, 0.2)]);
        assert_eq!(rows.len(), 2);
        assert!((rows[0].mean - 0.4).abs() < 1e-15);
        assert!((rows[0].std - 0.1).abs() < 1e-15);
        assert_eq!((rows[0].min, rows[0].max, rows[0].count), (0.3, 0.5, 3));
        assert_eq!((rows[1].algorithm.as_str(), rows[1].std), ("rg", 0.0));
        assert!(summarize(&[]).is_empty());
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_g17(0.6640625), "0.66406250000000000");
        assert_eq!(format_g17(1.5), "1.5000000000000000");
        assert_eq!(format_g17(0.0), "0");
        let x = 47.0 / 128.0;
        assert_eq!(format_g17(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn config_parsing() {
        let cfg = BenchConfig::parse(
            "# smoke\nsizes = 8, 16\ninstances = 3\nalgorithms = rf, rsg\nseed = 5 # trailing\nworkers = 2\nrecords = out.csv\n",
        )
        .unwrap();
        assert_eq!(cfg.sizes, vec![8, 16]);
        assert_eq!(cfg.algorithms, vec!["rf", "rsg"]);
        assert_eq!((cfg.instances, cfg.seed, cfg.workers), (3, 5, Some(2)));
        assert_eq!(cfg.records, Some(PathBuf::from("out.csv")));
        assert!(matches!(BenchConfig::parse("size = 3"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(BenchConfig::parse("sizes = 0"), Err(Error::Config(_))));
        assert!(matches!(BenchConfig::parse("instances = 0"), Err(Error::Config(_))));
        assert!(matches!(BenchConfig::parse("restarts = 0"), Err(Error::Config(_))));
        assert!(matches!(BenchConfig::parse("algorithms = sdp"), Err(Error::UnknownAlgorithm(_))));
        assert!(matches!(BenchConfig::parse("\n\nsizes"), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn forced_instance() {
        let cfg = BenchConfig { sizes: vec![1], instances: 1, ..Default::default() };
        let out = run_benchmark(&cfg).unwrap();
        assert_eq!(out.records.len(), 4);
        assert!(out.records.iter().all(|r| r.swaps == 1 && r.ratio == 1.0));
    }

    #[test]
    fn scheduling_independence() {
        let base = BenchConfig {
            sizes: vec![6, 20],
            instances: 3,
            algorithms: vec!["rsg".into(), "xqaoa".into(), "rqaoa".into()],
            restarts: 3,
            seed: 11,
            ..Default::default()
        };
        let strip = |o: BenchOutput| {
            o.records.into_iter().map(|r| BenchRecord { time_ms: 0.0, ..r }).collect::<Vec<_>>()
        };
        let one = strip(run_benchmark(&BenchConfig { workers: Some(1), ..base.clone() }).unwrap());
        let four = strip(run_benchmark(&BenchConfig { workers: Some(4), ..base.clone() }).unwrap());
        assert_eq!(one, four);
        assert_eq!(one.len(), 18);
        let order: Vec<(usize, usize, &str)> = one.iter().map(|r| (r.n, r.instance, r.algorithm.as_str())).collect();
        assert_eq!(&order[..4], &[(6, 0, "rsg"), (6, 0, "xqaoa"), (6, 0, "rqaoa"), (6, 1, "rsg")]);
        assert!(one.iter().filter(|r| r.algorithm == "xqaoa").all(|r| r.restarts == 3));
    }
}
