//! Dual-lattice error of constructed vectors as `N` grows, with the fitted
//! power-law rate.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use cbcdbd_core::construct::{cbc_dbd, ConstructionConfig};
use cbcdbd_core::lattice::dual_error_even_alpha;
use cbcdbd_core::weights::WeightScheme;
use cbcdbd_core::Limits;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::formats::fmt_f64;

#[derive(Clone, Debug)]
pub struct ConvergenceConfig {
    pub alpha: u32,
    pub n_range: RangeInclusive<u32>,
    pub s: usize,
    /// Weights of the error being measured.
    pub scheme: WeightScheme,
    /// Exponent applied to the weights for the construction itself; `None`
    /// means `1/α`.
    pub construct_exponent: Option<f64>,
    pub limits: Limits,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergencePoint {
    pub n: u32,
    #[serde(rename = "N")]
    pub modulus: u64,
    pub dual_error: f64,
    pub z: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub alpha: u32,
    pub s: usize,
    pub construct_exponent: f64,
    pub points: Vec<ConvergencePoint>,
    /// Least-squares slope of `log e` against `log N`.
    pub slope: f64,
    pub strictly_decreasing: bool,
}

/// Least-squares slope of `y` against `x`.
pub fn fitted_slope(x: &[f64], y: &[f64]) -> f64 {
    let len = x.len() as f64;
    let mx = x.iter().sum::<f64>() / len;
    let my = y.iter().sum::<f64>() / len;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

pub fn run(config: &ConvergenceConfig) -> Result<ConvergenceReport> {
    if !matches!(config.alpha, 2 | 4 | 6) {
        return Err(CliError::Usage(format!(
            "alpha must be 2, 4 or 6, got {}",
            config.alpha
        )));
    }
    if config.n_range.is_empty() || *config.n_range.start() == 0 {
        return Err(CliError::Usage("empty or invalid n range".into()));
    }
    let exponent = config
        .construct_exponent
        .unwrap_or(1.0 / f64::from(config.alpha));
    let construction_weights = config.scheme.pow(exponent)?;
    let mut points = Vec::new();
    for n in config.n_range.clone() {
        let construction = ConstructionConfig::new(n, config.s, construction_weights.clone())
            .with_limits(config.limits)
            .with_diagnostics(false);
        let gv = cbc_dbd(&construction)?.vector;
        let dual_error = dual_error_even_alpha(config.alpha, &config.scheme, &gv, &config.limits)?;
        points.push(ConvergencePoint {
            n,
            modulus: gv.modulus(),
            dual_error,
            z: gv.components().to_vec(),
        });
    }
    let x: Vec<f64> = points.iter().map(|p| (p.modulus as f64).ln()).collect();
    let y: Vec<f64> = points.iter().map(|p| p.dual_error.ln()).collect();
    let slope = if points.len() > 1 { fitted_slope(&x, &y) } else { f64::NAN };
    let strictly_decreasing = points.windows(2).all(|w| w[1].dual_error < w[0].dual_error);
    Ok(ConvergenceReport {
        alpha: config.alpha,
        s: config.s,
        construct_exponent: exponent,
        points,
        slope,
        strictly_decreasing,
    })
}

/// Rows `n,N,dual_error` followed by a `# slope` line.
pub fn to_csv(report: &ConvergenceReport) -> String {
    let mut out = String::from("n,N,dual_error\n");
    for p in &report.points {
        writeln!(out, "{},{},{}", p.n, p.modulus, fmt_f64(p.dual_error)).unwrap();
    }
    writeln!(out, "# slope,{}", fmt_f64(report.slope)).unwrap();
    out
}
