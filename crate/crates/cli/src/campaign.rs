//! Randomized bound-check campaigns over constructed vectors.
//!
//! Every instance `(n, s, draw)` gets its own generator seeded from the
//! campaign seed and the instance coordinates, so the weights drawn for an
//! instance do not depend on which campaigns run or in which order.

use std::fmt::Write as _;
use std::str::FromStr;

use cbcdbd_core::bounds::{self, BoundReport};
use cbcdbd_core::construct::{cbc_dbd, ConstructionConfig};
use cbcdbd_core::lattice::GeneratingVector;
use cbcdbd_core::weights::{GeneralWeights, PodWeights, ProductWeights, WeightScheme};
use cbcdbd_core::Limits;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::formats::fmt_f64;

/// Largest dimension for which campaigns draw general weight tables.
pub const GENERAL_DRAW_MAX_DIMENSION: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Campaign {
    Thm2,
    Induction,
    Hbound,
    Prop1,
}

impl Campaign {
    pub const ALL: [Campaign; 4] = [
        Campaign::Thm2,
        Campaign::Induction,
        Campaign::Hbound,
        Campaign::Prop1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Campaign::Thm2 => "thm2",
            Campaign::Induction => "induction",
            Campaign::Hbound => "hbound",
            Campaign::Prop1 => "prop1",
        }
    }
}

/// A `--campaign` value: one campaign or all of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CampaignSet(pub Vec<Campaign>);

impl FromStr for CampaignSet {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s == "all" {
            return Ok(CampaignSet(Campaign::ALL.to_vec()));
        }
        Campaign::ALL
            .iter()
            .find(|c| c.name() == s)
            .map(|&c| CampaignSet(vec![c]))
            .ok_or_else(|| format!("unknown campaign `{s}` (expected thm2, induction, hbound, prop1 or all)"))
    }
}

/// Weight family drawn for an instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Product,
    Pod,
    General,
}

/// Log-uniform on `[0.01, 1]`.
pub fn log_uniform(rng: &mut impl Rng) -> f64 {
    (0.01f64.ln() * rng.gen::<f64>()).exp()
}

/// `Γ_0 = 1` and `Γ_ℓ` all equal to 1, to `ℓ!` or to `1/ℓ!`.
pub fn draw_orders(rng: &mut impl Rng, s: usize) -> Vec<f64> {
    let choice = rng.gen_range(0..3);
    let mut orders = vec![1.0];
    let mut factorial = 1.0;
    for l in 1..=s {
        factorial *= l as f64;
        orders.push(match choice {
            0 => 1.0,
            1 => factorial,
            _ => 1.0 / factorial,
        });
    }
    orders
}

pub fn draw_product(rng: &mut impl Rng, s: usize) -> WeightScheme {
    let gammas = (0..s).map(|_| log_uniform(rng)).collect();
    ProductWeights::new(gammas).expect("positive").into()
}

pub fn draw_pod(rng: &mut impl Rng, s: usize) -> WeightScheme {
    let gammas = (0..s).map(|_| log_uniform(rng)).collect();
    let orders = draw_orders(rng, s);
    PodWeights::new(orders, gammas).expect("positive").into()
}

pub fn draw_general(rng: &mut impl Rng, s: usize, limits: &Limits) -> Result<WeightScheme> {
    Ok(GeneralWeights::from_fn(s, |_| log_uniform(rng), limits)?.into())
}

/// Seed of instance `(n, s, draw)` under the campaign seed.
pub fn instance_seed(seed: u64, n: u32, s: usize, draw: usize) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for word in [seed, u64::from(n), s as u64, draw as u64] {
        for byte in word.to_le_bytes() {
            h ^= u64::from(byte);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

/// Draws cycle through product, POD and (for small `s`) general weights.
pub fn family_for(s: usize, draw: usize) -> Family {
    let families = if s <= GENERAL_DRAW_MAX_DIMENSION { 3 } else { 2 };
    match draw % families {
        0 => Family::Product,
        1 => Family::Pod,
        _ => Family::General,
    }
}

pub fn draw_scheme(family: Family, seed: u64, s: usize, limits: &Limits) -> Result<WeightScheme> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match family {
        Family::Product => Ok(draw_product(&mut rng, s)),
        Family::Pod => Ok(draw_pod(&mut rng, s)),
        Family::General => draw_general(&mut rng, s, limits),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CampaignConfig {
    pub campaigns: Vec<Campaign>,
    pub n_min: u32,
    pub n_max: u32,
    pub s_min: usize,
    pub s_max: usize,
    pub draws: usize,
    pub seed: u64,
    pub limits: Limits,
}

impl CampaignConfig {
    fn validate(&self) -> Result<()> {
        if self.n_min == 0 || self.n_min > self.n_max || self.n_max > cbcdbd_core::MAX_DIGITS {
            return Err(CliError::Usage(format!(
                "invalid n range {}..={}",
                self.n_min, self.n_max
            )));
        }
        if self.s_min == 0 || self.s_min > self.s_max {
            return Err(CliError::Usage(format!(
                "invalid s range {}..={}",
                self.s_min, self.s_max
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Satisfied,
    Violated,
    Skipped,
}

/// One line of a bound report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub campaign: Campaign,
    pub theorem: &'static str,
    pub n: u32,
    /// The dimension checked (the component `r` for induction rows).
    pub s: usize,
    pub draw: usize,
    pub family: Family,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub outcome: Outcome,
    /// Seed of the instance's weight draw.
    pub seed: u64,
    pub vector: Vec<u64>,
}

impl Row {
    fn from_report(
        campaign: Campaign,
        instance: &Instance,
        s: usize,
        report: std::result::Result<BoundReport, cbcdbd_core::Error>,
    ) -> Result<Row> {
        let (lhs, rhs, outcome) = match report {
            Ok(r) => (
                Some(r.lhs),
                Some(r.rhs),
                if r.satisfied {
                    Outcome::Satisfied
                } else {
                    Outcome::Violated
                },
            ),
            Err(e) if e.is_budget() => (None, None, Outcome::Skipped),
            Err(e) => return Err(e.into()),
        };
        Ok(Row {
            campaign,
            theorem: campaign.name(),
            n: instance.n,
            s,
            draw: instance.draw,
            family: instance.family,
            lhs,
            rhs,
            outcome,
            seed: instance.seed,
            vector: instance.vector.components().to_vec(),
        })
    }
}

struct Instance {
    n: u32,
    draw: usize,
    family: Family,
    seed: u64,
    scheme: WeightScheme,
    vector: GeneratingVector,
}

/// The construction behind instance `(n, s, draw)`.
pub fn instance_scheme(seed: u64, n: u32, s: usize, draw: usize, limits: &Limits) -> Result<(Family, u64, WeightScheme)> {
    let family = family_for(s, draw);
    let instance_seed = instance_seed(seed, n, s, draw);
    Ok((family, instance_seed, draw_scheme(family, instance_seed, s, limits)?))
}

fn build_instance(config: &CampaignConfig, n: u32, s: usize, draw: usize) -> Result<Instance> {
    let (family, seed, scheme) = instance_scheme(config.seed, n, s, draw, &config.limits)?;
    let construction = ConstructionConfig::new(n, s, scheme.clone())
        .with_limits(config.limits)
        .with_diagnostics(false);
    let vector = cbc_dbd(&construction)?.vector;
    Ok(Instance {
        n,
        draw,
        family,
        seed,
        scheme,
        vector,
    })
}

fn check(campaign: Campaign, instance: &Instance, limits: &Limits) -> Result<Vec<Row>> {
    let (scheme, gv) = (&instance.scheme, &instance.vector);
    let s = gv.dimension();
    Ok(match campaign {
        Campaign::Thm2 => vec![Row::from_report(
            campaign,
            instance,
            s,
            bounds::check_thm2(scheme, gv, limits),
        )?],
        Campaign::Hbound => vec![Row::from_report(
            campaign,
            instance,
            s,
            bounds::check_h_bound_general(scheme, gv, limits),
        )?],
        Campaign::Prop1 => vec![Row::from_report(
            campaign,
            instance,
            s,
            bounds::check_prop1(2, scheme, gv, limits),
        )?],
        Campaign::Induction => (2..=s)
            .map(|r| {
                Row::from_report(
                    campaign,
                    instance,
                    r,
                    bounds::check_h_induction(scheme, gv, r, limits),
                )
            })
            .collect::<Result<_>>()?,
    })
}

/// Runs the campaigns; rows are ordered by campaign, `n`, `s`, draw and
/// (for induction rows) component.
pub fn run(config: &CampaignConfig) -> Result<Vec<Row>> {
    config.validate()?;
    let coordinates: Vec<(u32, usize, usize)> = (config.n_min..=config.n_max)
        .flat_map(|n| {
            (config.s_min..=config.s_max)
                .flat_map(move |s| (0..config.draws).map(move |d| (n, s, d)))
        })
        .collect();
    let mut campaigns = config.campaigns.clone();
    campaigns.sort();
    campaigns.dedup();
    let per_instance: Vec<Vec<Row>> = coordinates
        .par_iter()
        .map(|&(n, s, draw)| {
            let instance = build_instance(config, n, s, draw)?;
            let mut rows = Vec::new();
            for &campaign in &campaigns {
                rows.extend(check(campaign, &instance, &config.limits)?);
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    let mut rows: Vec<Row> = per_instance.into_iter().flatten().collect();
    // stable sort keeps draw and component order within (campaign, n, s)
    rows.sort_by_key(|r| (r.campaign, r.n));
    Ok(rows)
}

pub const CSV_HEADER: &str = "campaign,theorem,n,s,lhs,rhs,satisfied,seed";

pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let num = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
        let satisfied = match r.outcome {
            Outcome::Satisfied => "true",
            Outcome::Violated => "false",
            Outcome::Skipped => "skipped",
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.campaign.name(),
            r.theorem,
            r.n,
            r.s,
            num(r.lhs),
            num(r.rhs),
            satisfied,
            r.seed
        )
        .unwrap();
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub satisfied: usize,
    pub violated: usize,
    pub skipped: usize,
}

pub fn summarize(rows: &[Row]) -> Summary {
    let mut summary = Summary::default();
    for r in rows {
        match r.outcome {
            Outcome::Satisfied => summary.satisfied += 1,
            Outcome::Violated => summary.violated += 1,
            Outcome::Skipped => summary.skipped += 1,
        }
    }
    summary
}
