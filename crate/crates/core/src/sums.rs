//! Weighted subset sums `∑_{∅≠u⊆{1:s}} γ_u ∏_{j∈u} x_j`, either through the
//! order-factored form of the weights or by enumerating every subset.

use alloc::{vec, vec::Vec};

use crate::weights::WeightScheme;
use crate::{Error, Limits, Result};

pub(crate) enum SubsetSum {
    Product {
        gammas: Vec<f64>,
    },
    Order {
        coefficients: Vec<f64>,
        gammas: Vec<f64>,
        elementary: Vec<f64>,
    },
    Enumerated {
        // γ_u by bit mask over {1..s}
        weights: Vec<f64>,
        products: Vec<f64>,
    },
}

fn check_dimension(scheme: &WeightScheme, s: usize) -> Result<()> {
    if s > scheme.s_max() {
        return Err(Error::DimensionMismatch {
            expected: scheme.s_max(),
            found: s,
        });
    }
    Ok(())
}

impl SubsetSum {
    /// Uses the factored form when the weights have one on `{1..s}`.
    pub(crate) fn new(scheme: &WeightScheme, s: usize, limits: &Limits) -> Result<Self> {
        check_dimension(scheme, s)?;
        match scheme.factored(s) {
            Some(f) if f.is_product => Ok(SubsetSum::Product { gammas: f.gammas }),
            Some(f) => Ok(SubsetSum::Order {
                elementary: vec![0.0; s + 1],
                coefficients: f.coefficients,
                gammas: f.gammas,
            }),
            None => Self::enumerated(scheme, s, limits),
        }
    }

    pub(crate) fn enumerated(scheme: &WeightScheme, s: usize, limits: &Limits) -> Result<Self> {
        check_dimension(scheme, s)?;
        limits.check_subsets(s)?;
        let weights = (0u64..1 << s)
            .map(|bits| scheme.gamma_unchecked(crate::Subset::from_bits(bits)))
            .collect();
        Ok(SubsetSum::Enumerated {
            weights,
            products: vec![1.0; 1 << s],
        })
    }

    /// `∑_{∅≠u} γ_u ∏_{j∈u} x[j-1]`; `x` must have length `s`.
    pub(crate) fn eval(&mut self, x: &[f64]) -> f64 {
        match self {
            SubsetSum::Product { gammas } => {
                debug_assert_eq!(gammas.len(), x.len());
                let mut q = 0.0;
                for (&g, &xj) in gammas.iter().zip(x) {
                    let y = g * xj;
                    q += y * (1.0 + q);
                }
                q
            }
            SubsetSum::Order {
                coefficients,
                gammas,
                elementary,
            } => {
                debug_assert_eq!(gammas.len(), x.len());
                elementary.fill(0.0);
                elementary[0] = 1.0;
                for (j, (&g, &xj)) in gammas.iter().zip(x).enumerate() {
                    let y = g * xj;
                    for l in (1..=j + 1).rev() {
                        elementary[l] += y * elementary[l - 1];
                    }
                }
                coefficients
                    .iter()
                    .zip(elementary.iter())
                    .skip(1)
                    .map(|(c, e)| c * e)
                    .sum()
            }
            SubsetSum::Enumerated { weights, products } => {
                debug_assert_eq!(products.len(), 1 << x.len());
                let mut total = 0.0;
                for mask in 1..products.len() {
                    let low = mask.trailing_zeros() as usize;
                    let p = products[mask & (mask - 1)] * x[low];
                    products[mask] = p;
                    total += weights[mask] * p;
                }
                total
            }
        }
    }
}

/// `∑_{∅≠u⊆{1:s}} γ_u g(|u|)`.
pub(crate) fn order_weighted_sum<G>(
    scheme: &WeightScheme,
    s: usize,
    limits: &Limits,
    g: G,
) -> Result<f64>
where
    G: Fn(usize) -> f64,
{
    check_dimension(scheme, s)?;
    if let Some(f) = scheme.factored(s) {
        let mut elementary = vec![0.0; s + 1];
        elementary[0] = 1.0;
        for (j, &gamma) in f.gammas.iter().enumerate() {
            for l in (1..=j + 1).rev() {
                elementary[l] += gamma * elementary[l - 1];
            }
        }
        return Ok((1..=s).map(|l| f.coefficients[l] * elementary[l] * g(l)).sum());
    }
    limits.check_subsets(s)?;
    Ok((1u64..1 << s)
        .map(|bits| {
            let u = crate::Subset::from_bits(bits);
            scheme.gamma_unchecked(u) * g(u.len())
        })
        .sum())
}
