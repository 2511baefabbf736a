//! Wall-clock timing of the fast construction paths.

use std::fmt::Write as _;
use std::time::Instant;

use cbcdbd_core::construct::{cbc_dbd, ConstructionConfig, Path};
use cbcdbd_core::quality::{PodStateTable, ProductStateTable, SinLogTable};
use cbcdbd_core::weights::{PodWeights, ProductWeights, WeightScheme};
use cbcdbd_core::Limits;
use serde::Serialize;

use crate::error::{CliError, Result};

/// POD weights `γ_j = 1/j²`, `Γ_ℓ = ℓ!`.
pub fn default_pod(s: usize) -> PodWeights {
    let gammas = (1..=s).map(|j| 1.0 / (j * j) as f64).collect();
    let mut orders = vec![1.0];
    for l in 1..=s {
        orders.push(orders[l - 1] * l as f64);
    }
    PodWeights::new(orders, gammas).expect("positive")
}

/// Product weights `γ_j = 1/j²`.
pub fn default_product(s: usize) -> ProductWeights {
    ProductWeights::new((1..=s).map(|j| 1.0 / (j * j) as f64).collect()).expect("positive")
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub n: u32,
    pub s: usize,
    pub median_seconds: f64,
    pub samples: Vec<f64>,
    /// Doubles held by the accumulator tables and the sine-log table.
    pub table_doubles: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Ratio {
    /// `"N"` or `"s"`: which parameter doubled (or grew).
    pub varied: &'static str,
    pub from: (u32, usize),
    pub to: (u32, usize),
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub path: &'static str,
    pub timings: Vec<Timing>,
    pub ratios: Vec<Ratio>,
    /// Largest `table_doubles / (N s)` over the runs.
    pub memory_per_point_dimension: f64,
}

pub fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(f64::total_cmp);
    let mid = samples.len() / 2;
    if samples.len() % 2 == 1 {
        samples[mid]
    } else {
        0.5 * (samples[mid - 1] + samples[mid])
    }
}

fn scheme_for(path: Path, s: usize) -> WeightScheme {
    match path {
        Path::FastProduct => default_product(s).into(),
        _ => default_pod(s).into(),
    }
}

/// Table footprint of one construction, in doubles.
pub fn table_doubles(path: Path, n: u32, s: usize) -> Result<usize> {
    let table = SinLogTable::new(n)?;
    let sin_log = (1usize << (n - 1)) + 1;
    Ok(sin_log
        + match path {
            Path::FastProduct => {
                ProductStateTable::new(default_product(s).gammas(), n, s, &table)?.table_doubles()
            }
            _ => PodStateTable::new(&default_pod(s), n, s, &table)?.table_doubles(),
        })
}

/// Times one construction per `(n, s)` pair, `repeats` times each.
pub fn time_construction(path: Path, n: u32, s: usize, repeats: usize) -> Result<Timing> {
    let config = ConstructionConfig::new(n, s, scheme_for(path, s))
        .with_path(path)
        .with_limits(Limits::default())
        .with_diagnostics(false);
    // warm caches and the allocator before sampling
    std::hint::black_box(cbc_dbd(&config)?);
    let mut samples = Vec::with_capacity(repeats);
    for _ in 0..repeats.max(1) {
        let start = Instant::now();
        let result = cbc_dbd(&config)?;
        samples.push(start.elapsed().as_secs_f64());
        std::hint::black_box(result);
    }
    let mut sorted = samples.clone();
    Ok(Timing {
        n,
        s,
        median_seconds: median(&mut sorted),
        samples,
        table_doubles: table_doubles(path, n, s)?,
    })
}

pub fn run(path: Path, n_list: &[u32], s_list: &[usize], repeats: usize) -> Result<BenchReport> {
    if !matches!(path, Path::FastPod | Path::FastProduct) {
        return Err(CliError::Usage(format!(
            "benchmarks run on fast-pod or fast-product, not {path}"
        )));
    }
    if n_list.is_empty() || s_list.is_empty() {
        return Err(CliError::Usage("empty n or s list".into()));
    }
    let mut timings = Vec::new();
    for &s in s_list {
        for &n in n_list {
            timings.push(time_construction(path, n, s, repeats)?);
        }
    }
    let find = |n: u32, s: usize| timings.iter().find(|t| t.n == n && t.s == s).unwrap();
    let mut ratios = Vec::new();
    for &s in s_list {
        for pair in n_list.windows(2) {
            ratios.push(Ratio {
                varied: "N",
                from: (pair[0], s),
                to: (pair[1], s),
                ratio: find(pair[1], s).median_seconds / find(pair[0], s).median_seconds,
            });
        }
    }
    for &n in n_list {
        for pair in s_list.windows(2) {
            ratios.push(Ratio {
                varied: "s",
                from: (n, pair[0]),
                to: (n, pair[1]),
                ratio: find(n, pair[1]).median_seconds / find(n, pair[0]).median_seconds,
            });
        }
    }
    let memory_per_point_dimension = timings
        .iter()
        .map(|t| t.table_doubles as f64 / ((1u64 << t.n) as f64 * t.s as f64))
        .fold(0.0, f64::max);
    Ok(BenchReport {
        path: path.name(),
        timings,
        ratios,
        memory_per_point_dimension,
    })
}

pub fn to_table(report: &BenchReport) -> String {
    let mut out = format!("path {}\nn,s,median_seconds,table_doubles\n", report.path);
    for t in &report.timings {
        writeln!(out, "{},{},{:.6},{}", t.n, t.s, t.median_seconds, t.table_doubles).unwrap();
    }
    out.push_str("varied,from,to,ratio\n");
    for r in &report.ratios {
        writeln!(
            out,
            "{},n={} s={},n={} s={},{:.3}",
            r.varied, r.from.0, r.from.1, r.to.0, r.to.1, r.ratio
        )
        .unwrap();
    }
    writeln!(
        out,
        "max table doubles per N*s: {:.3}",
        report.memory_per_point_dimension
    )
    .unwrap();
    out
}
