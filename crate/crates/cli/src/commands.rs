//! The four subcommands, callable without going through argument parsing.

use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::time::Instant;

use cbcdbd_core::construct::{cbc_dbd, Construction, ConstructionConfig, Path as ConstructionPath};
use cbcdbd_core::Limits;

use crate::bench::{self, BenchReport};
use crate::campaign::{self, CampaignConfig, Row, Summary};
use crate::convergence::{self, ConvergenceConfig, ConvergenceReport};
use crate::error::{CliError, Result};
use crate::formats::{load_weights, write_json, VectorFile};
use crate::manifest::RunManifest;

#[derive(Clone, Debug)]
pub struct ConstructArgs {
    pub n: u32,
    pub s: usize,
    pub weights: PathBuf,
    pub path: ConstructionPath,
    pub out: Option<PathBuf>,
    pub diagnostics: bool,
    pub limits: Limits,
}

pub fn construct(args: &ConstructArgs) -> Result<(Construction, VectorFile)> {
    let scheme = load_weights(&args.weights, &args.limits)?;
    let config = ConstructionConfig {
        path: args.path,
        limits: args.limits,
        diagnostics: args.diagnostics,
        ..ConstructionConfig::new(args.n, args.s, scheme)
    };
    let start = Instant::now();
    let mut result = cbc_dbd(&config)?;
    if args.diagnostics {
        result
            .diagnostics
            .timing
            .insert("construct_seconds".into(), start.elapsed().as_secs_f64());
    }
    let file = VectorFile::new(
        &result.vector,
        args.diagnostics.then_some(&result.diagnostics),
    );
    if let Some(out) = &args.out {
        write_json(out, &file)?;
        let mut manifest = RunManifest::new(
            "construct",
            format!(
                "n={} s={} path={} subset_cap={} diagnostics={}",
                args.n,
                args.s,
                args.path,
                args.limits.subset_cap,
                args.diagnostics
            ),
        );
        manifest.inputs.push(args.weights.clone());
        manifest.outputs.push(out.clone());
        manifest.write_beside(out)?;
    }
    Ok((result, file))
}

#[derive(Clone, Debug)]
pub struct VerifyArgs {
    pub campaign: CampaignConfig,
    /// Writes `<prefix>.csv` and `<prefix>.json`.
    pub out: Option<PathBuf>,
}

fn with_extension(prefix: &Path, ext: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(".");
    name.push(ext);
    PathBuf::from(name)
}

/// Runs the campaigns and writes the reports. Violations are reported in
/// the returned summary; callers map them to an exit status.
pub fn verify(args: &VerifyArgs) -> Result<(Vec<Row>, Summary)> {
    let rows = campaign::run(&args.campaign)?;
    let summary = campaign::summarize(&rows);
    if let Some(prefix) = &args.out {
        let csv = with_extension(prefix, "csv");
        let json = with_extension(prefix, "json");
        fs::write(&csv, campaign::to_csv(&rows)).map_err(|e| CliError::io(&csv, e))?;
        write_json(
            &json,
            &serde_json::json!({ "summary": &summary, "rows": &rows }),
        )?;
        let c = &args.campaign;
        let names: Vec<_> = c.campaigns.iter().map(|c| c.name()).collect();
        let mut manifest = RunManifest::new(
            "verify",
            format!(
                "campaigns={} n={}..={} s={}..={} draws={} seed={} subset_cap={} budget={}",
                names.join("+"),
                c.n_min,
                c.n_max,
                c.s_min,
                c.s_max,
                c.draws,
                c.seed,
                c.limits.subset_cap,
                c.limits.brute_force_budget
            ),
        );
        manifest.seed = Some(c.seed);
        manifest.outputs = vec![csv.clone(), json];
        manifest.write_beside(&csv)?;
    }
    Ok((rows, summary))
}

#[derive(Clone, Debug)]
pub struct ConvergenceArgs {
    pub alpha: u32,
    pub n_range: RangeInclusive<u32>,
    pub s: usize,
    pub weights: PathBuf,
    pub construct_exponent: Option<f64>,
    pub out: Option<PathBuf>,
    pub limits: Limits,
}

pub fn convergence(args: &ConvergenceArgs) -> Result<ConvergenceReport> {
    let scheme = load_weights(&args.weights, &args.limits)?;
    let report = convergence::run(&ConvergenceConfig {
        alpha: args.alpha,
        n_range: args.n_range.clone(),
        s: args.s,
        scheme,
        construct_exponent: args.construct_exponent,
        limits: args.limits,
    })?;
    if let Some(out) = &args.out {
        fs::write(out, convergence::to_csv(&report)).map_err(|e| CliError::io(out, e))?;
        let mut manifest = RunManifest::new(
            "convergence",
            format!(
                "alpha={} n={}..={} s={} construct_exponent={}",
                args.alpha,
                args.n_range.start(),
                args.n_range.end(),
                args.s,
                report.construct_exponent
            ),
        );
        manifest.inputs.push(args.weights.clone());
        manifest.outputs.push(out.clone());
        manifest.write_beside(out)?;
    }
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct BenchArgs {
    pub path: ConstructionPath,
    pub n_list: Vec<u32>,
    pub s_list: Vec<usize>,
    pub repeats: usize,
    pub out: Option<PathBuf>,
}

pub fn bench(args: &BenchArgs) -> Result<BenchReport> {
    let report = bench::run(args.path, &args.n_list, &args.s_list, args.repeats)?;
    if let Some(out) = &args.out {
        write_json(out, &report)?;
    }
    Ok(report)
}

/// Parses `a..b` or `a..=b` (both inclusive) or a single `a`.
pub fn parse_range(text: &str) -> std::result::Result<RangeInclusive<u32>, String> {
    let bad = || format!("expected a range like 6..14, got `{text}`");
    let (a, b) = match text.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (text, text),
    };
    let a: u32 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().parse().map_err(|_| bad())?;
    Ok(a..=b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("6..14").unwrap(), 6..=14);
        assert_eq!(parse_range("6..=14").unwrap(), 6..=14);
        assert_eq!(parse_range("3").unwrap(), 3..=3);
        assert!(parse_range("a..3").is_err());
        assert!(parse_range("5..4").unwrap().is_empty());
    }
}
