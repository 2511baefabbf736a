//! Rank-1 lattice rules with `N = 2^n` points and the error functionals
//! evaluated on them.

use alloc::{collections::BTreeMap, string::String, vec, vec::Vec};
use core::f64::consts::PI;

use crate::digest::Fnv;
use crate::sums::SubsetSum;
use crate::weights::WeightScheme;
use crate::{Error, Limits, Result, Subset, MAX_DIGITS};

/// Generating vector `z = (z_1, …, z_s)` of odd integers in `1..N`, with the
/// optional per-digit history `z_{r,1}, …, z_{r,n}` left by a construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingVector {
    n: u32,
    z: Vec<u64>,
    history: Option<Vec<Vec<u64>>>,
}

impl GeneratingVector {
    pub fn new(n: u32, z: Vec<u64>) -> Result<Self> {
        if n == 0 || n > MAX_DIGITS {
            return Err(Error::InvalidDigits(n));
        }
        if z.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        let modulus = 1u64 << n;
        for (i, &zj) in z.iter().enumerate() {
            if zj % 2 == 0 || zj >= modulus {
                return Err(Error::InvalidComponent {
                    index: i + 1,
                    value: zj,
                });
            }
        }
        Ok(GeneratingVector {
            n,
            z,
            history: None,
        })
    }

    /// `history[r - 1][v - 1]` is `z_{r,v}`; it must satisfy
    /// `z_{r,v} = z_r mod 2^v` for every `v = 1..=n`.
    pub fn with_history(n: u32, z: Vec<u64>, history: Vec<Vec<u64>>) -> Result<Self> {
        let mut gv = Self::new(n, z)?;
        if history.len() != gv.z.len() {
            return Err(Error::DimensionMismatch {
                expected: gv.z.len(),
                found: history.len(),
            });
        }
        for (r, (digits, &zr)) in history.iter().zip(&gv.z).enumerate() {
            if digits.len() != n as usize {
                return Err(Error::InvalidHistory {
                    component: r + 1,
                    level: digits.len() as u32,
                });
            }
            for (v, &zrv) in (1..=n).zip(digits) {
                if zrv != zr & ((1u64 << v) - 1) {
                    return Err(Error::InvalidHistory {
                        component: r + 1,
                        level: v,
                    });
                }
            }
        }
        gv.history = Some(history);
        Ok(gv)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `N = 2^n`.
    pub fn modulus(&self) -> u64 {
        1 << self.n
    }

    pub fn components(&self) -> &[u64] {
        &self.z
    }

    pub fn dimension(&self) -> usize {
        self.z.len()
    }

    pub fn digit_history(&self) -> Option<&[Vec<u64>]> {
        self.history.as_deref()
    }

    /// The first `r` components (and their history).
    pub fn truncated(&self, r: usize) -> Result<Self> {
        if r == 0 || r > self.z.len() {
            return Err(Error::DimensionMismatch {
                expected: self.z.len(),
                found: r,
            });
        }
        Ok(GeneratingVector {
            n: self.n,
            z: self.z[..r].to_vec(),
            history: self.history.as_ref().map(|h| h[..r].to_vec()),
        })
    }

    pub fn digest(&self) -> u64 {
        let mut h = Fnv::new();
        h.u64(u64::from(self.n));
        self.z.iter().for_each(|&z| h.u64(z));
        h.finish()
    }

    /// `{k z_j / N}` for every component.
    pub fn point_into(&self, k: u64, out: &mut [f64]) {
        let mask = self.modulus() - 1;
        let scale = 1.0 / self.modulus() as f64;
        for (x, &zj) in out.iter_mut().zip(&self.z) {
            *x = (k.wrapping_mul(zj) & mask) as f64 * scale;
        }
    }
}

/// An integer frequency vector `m ∈ Z^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencyVector {
    m: Vec<i64>,
}

impl FrequencyVector {
    pub fn new(m: Vec<i64>) -> Self {
        FrequencyVector { m }
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.m
    }

    pub fn dimension(&self) -> usize {
        self.m.len()
    }

    /// `{j : m_j ≠ 0}`.
    /// The coordinates where `m` is nonzero. Panics beyond
    /// [`Subset::MAX_COMPONENT`] coordinates.
    pub fn support(&self) -> Subset {
        assert!(self.m.len() <= Subset::MAX_COMPONENT);
        let bits = self
            .m
            .iter()
            .enumerate()
            .filter(|(_, &mj)| mj != 0)
            .fold(0u64, |acc, (j, _)| acc | 1 << j);
        Subset::from_bits(bits)
    }
}

/// `log(1/sin²(π a / 2^t))`. Infinite when `2^t` divides `a`.
pub fn log_inv_sin2(a: u64, t: u32) -> f64 {
    debug_assert!((1..=62).contains(&t));
    let modulus = 1u64 << t;
    let m = a & (modulus - 1);
    log_inv_sin2_reduced(m.min(modulus - m), t)
}

// `m ≤ 2^{t-1}`. The argument is formed as (m·π)/2^t so that the same
// angle at a finer level (m·2^d, t+d) rounds identically.
#[inline]
pub(crate) fn log_inv_sin2_reduced(m: u64, t: u32) -> f64 {
    let x = (m as f64 * PI) / (1u64 << t) as f64;
    -2.0 * libm::log(libm::sin(x))
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// All `N` lattice points; point `k` has coordinates `(k z_j mod N) / N`.
pub fn lattice_points(gv: &GeneratingVector) -> Vec<Vec<f64>> {
    (0..gv.modulus())
        .map(|k| {
            let mut p = vec![0.0; gv.dimension()];
            gv.point_into(k, &mut p);
            p
        })
        .collect()
}

/// Equal-weight average of `f` over the lattice points.
pub fn qmc_integrate<F>(gv: &GeneratingVector, mut f: F) -> f64
where
    F: FnMut(&[f64]) -> f64,
{
    let mut point = vec![0.0; gv.dimension()];
    let mut acc = Compensated::default();
    for k in 0..gv.modulus() {
        gv.point_into(k, &mut point);
        acc.add(f(&point));
    }
    acc.value() / gv.modulus() as f64
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidSmoothness(alpha))
    }
}

/// `r_{α,γ}(m) = γ_{supp(m)}^{-1} ∏_{j∈supp(m)} |m_j|^α`, equal to 1 at
/// `m = 0`.
pub fn r_alpha_gamma(alpha: f64, scheme: &WeightScheme, m: &FrequencyVector) -> Result<f64> {
    check_alpha(alpha)?;
    check_scheme_dimension(scheme, m.dimension())?;
    if m.dimension() > Subset::MAX_COMPONENT {
        return Err(Error::EnumerationCap {
            dimension: m.dimension(),
            cap: Subset::MAX_COMPONENT,
        });
    }
    let support = m.support();
    let gamma = scheme.gamma(support)?;
    let product: f64 = m
        .as_slice()
        .iter()
        .filter(|&&mj| mj != 0)
        .map(|&mj| libm::pow(mj.unsigned_abs() as f64, alpha))
        .product();
    Ok(product / gamma)
}

fn check_scheme_dimension(scheme: &WeightScheme, s: usize) -> Result<()> {
    if s > scheme.s_max() {
        Err(Error::DimensionMismatch {
            expected: scheme.s_max(),
            found: s,
        })
    } else {
        Ok(())
    }
}

/// Truncated dual-lattice sum
/// `T_{α,γ}(N, z) = ∑ 1/r_{α,γ}(m)` over `0 ≠ m ∈ {-(N-1), …, N-1}^s` with
/// `m·z ≡ 0 (mod N)`, by exhaustive enumeration.
pub fn t_brute_force(
    alpha: f64,
    scheme: &WeightScheme,
    gv: &GeneratingVector,
    limits: &Limits,
) -> Result<f64> {
    check_alpha(alpha)?;
    let s = gv.dimension();
    check_scheme_dimension(scheme, s)?;
    let modulus = gv.modulus();
    let side = u128::from(2 * modulus - 1);
    let candidates = (0..s).try_fold(1u128, |acc, _| acc.checked_mul(side));
    match candidates {
        Some(c) if c <= limits.brute_force_budget => {}
        _ => {
            return Err(Error::BudgetExceeded {
                candidates: candidates.unwrap_or(u128::MAX),
                budget: limits.brute_force_budget,
            })
        }
    }

    let gammas: Vec<f64> = (0u64..1 << s)
        .map(|bits| scheme.gamma_unchecked(Subset::from_bits(bits)))
        .collect();
    // |m|^{-α} for |m| < N
    let decay: Vec<f64> = (0..modulus)
        .map(|m| if m == 0 { 1.0 } else { libm::pow(m as f64, -alpha) })
        .collect();

    struct Walk<'a> {
        z: &'a [u64],
        mask: u64,
        modulus: u64,
        decay: &'a [f64],
        gammas: &'a [f64],
        total: Compensated,
    }

    impl Walk<'_> {
        fn visit(&mut self, j: usize, residue: u64, support: usize, weight: f64) {
            if j == self.z.len() {
                if residue == 0 && support != 0 {
                    self.total.add(self.gammas[support] * weight);
                }
                return;
            }
            let zj = self.z[j];
            let n = self.modulus as i64;
            for m in -(n - 1)..n {
                let step = (m as u64).wrapping_mul(zj);
                let next = residue.wrapping_add(step) & self.mask;
                if m == 0 {
                    self.visit(j + 1, next, support, weight);
                } else {
                    let d = self.decay[m.unsigned_abs() as usize];
                    self.visit(j + 1, next, support | 1 << j, weight * d);
                }
            }
        }
    }

    let mut walk = Walk {
        z: gv.components(),
        mask: modulus - 1,
        modulus,
        decay: &decay,
        gammas: &gammas,
        total: Compensated::default(),
    };
    walk.visit(0, 0, 0, 1.0);
    Ok(walk.total.value())
}

fn h_with(mut sum: SubsetSum, gv: &GeneratingVector) -> f64 {
    let n = gv.n();
    let mut w = vec![0.0; gv.dimension()];
    let mut acc = Compensated::default();
    for k in 1..gv.modulus() {
        for (wj, &zj) in w.iter_mut().zip(gv.components()) {
            *wj = log_inv_sin2(k.wrapping_mul(zj), n);
        }
        acc.add(sum.eval(&w));
    }
    acc.value()
}

/// `H_{s,n,γ}(z) = ∑_{k=1}^{N-1} ∑_{∅≠u⊆{1:s}} γ_u ∏_{j∈u} log(1/sin²(π k z_j / N))`.
///
/// Product and POD weights (and shifts of them by sets outside `{1..s}`)
/// are accumulated in factored form; other weights enumerate subsets.
pub fn h_direct(scheme: &WeightScheme, gv: &GeneratingVector, limits: &Limits) -> Result<f64> {
    Ok(h_with(SubsetSum::new(scheme, gv.dimension(), limits)?, gv))
}

/// [`h_direct`] with subset enumeration for every weight family.
pub fn h_direct_enumerated(
    scheme: &WeightScheme,
    gv: &GeneratingVector,
    limits: &Limits,
) -> Result<f64> {
    Ok(h_with(
        SubsetSum::enumerated(scheme, gv.dimension(), limits)?,
        gv,
    ))
}

/// Bernoulli polynomial `B_α(x)` for `α ∈ {2, 4, 6}`.
pub fn bernoulli(alpha: u32, x: f64) -> Result<f64> {
    let x2 = x * x;
    Ok(match alpha {
        2 => x2 - x + 1.0 / 6.0,
        4 => x2 * x2 - 2.0 * x2 * x + x2 - 1.0 / 30.0,
        6 => x2 * x2 * x2 - 3.0 * x2 * x2 * x + 2.5 * x2 * x2 - 0.5 * x2 + 1.0 / 42.0,
        _ => return Err(Error::UnsupportedSmoothness(alpha)),
    })
}

/// `∑_{m≠0} e^{2πimx} / |m|^α = (-1)^{α/2+1} (2π)^α / α! · B_α(x)` on `[0, 1]`.
pub fn fourier_kernel(alpha: u32, x: f64) -> Result<f64> {
    let b = bernoulli(alpha, x)?;
    let factorial: f64 = (1..=alpha).map(f64::from).product();
    let sign = if (alpha / 2) % 2 == 1 { 1.0 } else { -1.0 };
    Ok(sign * libm::pow(2.0 * PI, f64::from(alpha)) / factorial * b)
}

/// The full dual-lattice sum `∑_{0≠m, m·z≡0 (mod N)} 1/r_{α,γ}(m)` for even
/// `α ∈ {2, 4, 6}`, evaluated as
/// `(1/N) ∑_k ∑_{∅≠u} γ_u ∏_{j∈u} b_α({k z_j / N})`.
pub fn dual_error_even_alpha(
    alpha: u32,
    scheme: &WeightScheme,
    gv: &GeneratingVector,
    limits: &Limits,
) -> Result<f64> {
    if !matches!(alpha, 2 | 4 | 6) {
        return Err(Error::UnsupportedSmoothness(alpha));
    }
    let mut sum = SubsetSum::new(scheme, gv.dimension(), limits)?;
    let modulus = gv.modulus();
    let kernel = (0..modulus)
        .map(|m| fourier_kernel(alpha, m as f64 / modulus as f64))
        .collect::<Result<Vec<f64>>>()?;
    let mask = modulus - 1;
    let mut b = vec![0.0; gv.dimension()];
    let mut acc = Compensated::default();
    for k in 0..modulus {
        for (bj, &zj) in b.iter_mut().zip(gv.components()) {
            *bj = kernel[(k.wrapping_mul(zj) & mask) as usize];
        }
        acc.add(sum.eval(&b));
    }
    Ok(acc.value() / modulus as f64)
}

/// Quantities measured on one generating vector.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    /// `T_{1,γ}(N, z)` when it was computed.
    pub t_value: Option<f64>,
    /// `H_{s,n,γ}(z)` when within the enumeration caps.
    pub h_value: Option<f64>,
    pub dual_error: Option<f64>,
    /// Right-hand sides of the bounds, by name.
    pub bound_values: BTreeMap<String, f64>,
    /// Wall-clock seconds per phase, filled in by callers that have a clock.
    pub timing: BTreeMap<String, f64>,
}
