//! Right-hand sides of the error and `H` estimates, and checkers comparing
//! them with exactly computed left-hand sides.
//!
//! A check is satisfied when `lhs ≤ rhs + 1e-9 · max(1, |rhs|)`; the slack
//! only absorbs summation-order rounding in inequalities that hold exactly.

use core::f64::consts::LN_2;
use core::fmt;

use crate::lattice::{dual_error_even_alpha, h_direct, t_brute_force, GeneratingVector};
use crate::sums::order_weighted_sum;
use crate::weights::WeightScheme;
use crate::{Error, Limits, Result, Subset};

const LOG4: f64 = 2.0 * LN_2;

/// Relative slack of every inequality check.
pub const SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundKind {
    /// Dual-lattice error minus truncated error against `∑ γ_u (4ζ(α))^{|u|} / N^α`.
    Prop1,
    /// Truncated error for `α = 1` against the `H`-based estimate.
    Thm2,
    /// One step of the induction on `H` over the dimension.
    HInduction,
    /// `H ≤ N ∑ (log 4)^{|v|} γ_v` for constructed vectors.
    HBoundGeneral,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Prop1 => "prop1",
            BoundKind::Thm2 => "thm2",
            BoundKind::HInduction => "induction",
            BoundKind::HBoundGeneral => "hbound",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundContext {
    pub n: u32,
    pub s: usize,
    pub scheme_digest: u64,
    pub vector_digest: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    pub context: BoundContext,
    /// Caveat attached to the check, if any.
    pub note: Option<&'static str>,
}

impl BoundReport {
    fn new(kind: BoundKind, lhs: f64, rhs: f64, scheme: &WeightScheme, gv: &GeneratingVector) -> Self {
        BoundReport {
            kind,
            lhs,
            rhs,
            satisfied: inequality_holds(lhs, rhs),
            context: BoundContext {
                n: gv.n(),
                s: gv.dimension(),
                scheme_digest: scheme.digest(),
                vector_digest: gv.digest(),
            },
            note: None,
        }
    }
}

/// `lhs ≤ rhs` up to the relative [`SLACK`].
pub fn inequality_holds(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + SLACK * rhs.abs().max(1.0)
}

// Bernoulli numbers B_2, B_4, …, B_12 divided by the matching factorials
const EM_COEFFICIENTS: [f64; 6] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
];

/// Riemann zeta function for real `x > 1`, by Euler–Maclaurin summation.
pub fn zeta(x: f64) -> Result<f64> {
    if !(x > 1.0 && x.is_finite()) {
        return Err(Error::InvalidSmoothness(x));
    }
    const K: f64 = 16.0;
    let mut sum = 0.0;
    for k in (1..16).rev() {
        sum += libm::pow(f64::from(k), -x);
    }
    sum += libm::pow(K, 1.0 - x) / (x - 1.0) + 0.5 * libm::pow(K, -x);
    // rising factorial x (x+1) … (x+2j-2) times K^{-x-2j+1}
    let mut factor = x * libm::pow(K, -x - 1.0);
    for (j, c) in EM_COEFFICIENTS.iter().enumerate() {
        sum += c * factor;
        let a = x + 2.0 * j as f64 + 1.0;
        factor *= a * (a + 1.0) / (K * K);
    }
    Ok(sum)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 1.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSmoothness(alpha))
    }
}

/// The `N`-free factor `∑_{∅≠u⊆{1:s}} γ_u (4ζ(α))^{|u|}` of the truncation
/// bound.
pub fn prop1_factor(alpha: f64, scheme: &WeightScheme, s: usize, limits: &Limits) -> Result<f64> {
    check_alpha(alpha)?;
    let c = 4.0 * zeta(alpha)?;
    order_weighted_sum(scheme, s, limits, |l| libm::pow(c, l as f64))
}

/// `(1/N^α) ∑_{∅≠u⊆{1:s}} γ_u (4ζ(α))^{|u|}` with `N = 2^n`.
pub fn prop1_rhs(alpha: f64, scheme: &WeightScheme, n: u32, s: usize, limits: &Limits) -> Result<f64> {
    let modulus = libm::ldexp(1.0, n as i32);
    Ok(prop1_factor(alpha, scheme, s, limits)? / libm::pow(modulus, alpha))
}

/// The estimate of `T_{1,γ}(N, z)` in terms of `H = H_{s,n,γ}(z)`:
///
/// `∑ γ_u/N (log 4 + 2(1 + log N))^{|u|} − ∑ γ_u (log 4)^{|u|}
///  + ∑ γ_u/N · 2|u| (1 + 2 log N)^{|u|} (1 + log N) + H/N`,
///
/// all sums over `∅≠u⊆{1:s}`.
pub fn thm2_rhs(scheme: &WeightScheme, n: u32, s: usize, h: f64, limits: &Limits) -> Result<f64> {
    let big_n = libm::ldexp(1.0, n as i32);
    let log_n = f64::from(n) * LN_2;
    let a = LOG4 + 2.0 * (1.0 + log_n);
    let b = 1.0 + 2.0 * log_n;
    let first = order_weighted_sum(scheme, s, limits, |l| libm::pow(a, l as f64))?;
    let second = order_weighted_sum(scheme, s, limits, |l| libm::pow(LOG4, l as f64))?;
    let third = order_weighted_sum(scheme, s, limits, |l| {
        2.0 * l as f64 * libm::pow(b, l as f64) * (1.0 + log_n)
    })?;
    Ok(first / big_n - second + third / big_n + h / big_n)
}

/// `N ∑_{∅≠v⊆{1:s}} (log 4)^{|v|} γ_v`.
pub fn h_upper_bound(scheme: &WeightScheme, n: u32, s: usize, limits: &Limits) -> Result<f64> {
    let big_n = libm::ldexp(1.0, n as i32);
    Ok(big_n * order_weighted_sum(scheme, s, limits, |l| libm::pow(LOG4, l as f64))?)
}

/// `T_{1,γ}(N, z)` by brute force against [`thm2_rhs`].
pub fn check_thm2(scheme: &WeightScheme, gv: &GeneratingVector, limits: &Limits) -> Result<BoundReport> {
    let lhs = t_brute_force(1.0, scheme, gv, limits)?;
    let h = h_direct(scheme, gv, limits)?;
    let rhs = thm2_rhs(scheme, gv.n(), gv.dimension(), h, limits)?;
    Ok(BoundReport::new(BoundKind::Thm2, lhs, rhs, scheme, gv))
}

/// For even `α`: the full dual-lattice error minus `T_{α,γ}(N, z)` against
/// [`prop1_rhs`].
pub fn check_prop1(
    alpha: u32,
    scheme: &WeightScheme,
    gv: &GeneratingVector,
    limits: &Limits,
) -> Result<BoundReport> {
    let dual = dual_error_even_alpha(alpha, scheme, gv, limits)?;
    let truncated = t_brute_force(f64::from(alpha), scheme, gv, limits)?;
    let rhs = prop1_rhs(f64::from(alpha), scheme, gv.n(), gv.dimension(), limits)?;
    Ok(BoundReport::new(BoundKind::Prop1, dual - truncated, rhs, scheme, gv))
}

/// The induction step at component `r ≥ 2`:
/// `H_r(z_{1:r}) ≤ H_{r-1}(z_{1:r-1}) + log 4 [γ_{{r}} N + H_{r-1,γ∪{r}}(z_{1:r-1})]`.
///
/// The inequality is a property of digits chosen by the construction; for a
/// vector without digit history the report carries a note saying so.
pub fn check_h_induction(
    scheme: &WeightScheme,
    gv: &GeneratingVector,
    r: usize,
    limits: &Limits,
) -> Result<BoundReport> {
    if r < 2 || r > gv.dimension() {
        return Err(Error::DimensionMismatch {
            expected: gv.dimension(),
            found: r,
        });
    }
    if r > Subset::MAX_COMPONENT {
        return Err(Error::ComponentOutOfRange {
            component: r,
            s_max: Subset::MAX_COMPONENT,
        });
    }
    let current = gv.truncated(r)?;
    let earlier = gv.truncated(r - 1)?;
    let single = Subset::singleton(r);
    let lhs = h_direct(scheme, &current, limits)?;
    let shifted = scheme.shifted(single)?;
    let rhs = h_direct(scheme, &earlier, limits)?
        + LOG4
            * (scheme.gamma(single)? * gv.modulus() as f64 + h_direct(&shifted, &earlier, limits)?);
    let mut report = BoundReport::new(BoundKind::HInduction, lhs, rhs, scheme, &current);
    if gv.digit_history().is_none() {
        report.note = Some("vector has no digit history; the inequality is only guaranteed for constructed vectors");
    }
    Ok(report)
}

/// `H_{s,n,γ}(z)` against [`h_upper_bound`].
pub fn check_h_bound_general(
    scheme: &WeightScheme,
    gv: &GeneratingVector,
    limits: &Limits,
) -> Result<BoundReport> {
    let lhs = h_direct(scheme, gv, limits)?;
    let rhs = h_upper_bound(scheme, gv.n(), gv.dimension(), limits)?;
    Ok(BoundReport::new(BoundKind::HBoundGeneral, lhs, rhs, scheme, gv))
}

/// `∑_{j=1}^{s} tilde γ_j`, the partial sum whose boundedness the
/// dimension-independent estimates require.
pub fn summability_diagnostic(scheme: &WeightScheme, s: usize, limits: &Limits) -> Result<f64> {
    (1..=s).map(|j| scheme.tilde_gamma(j, limits)).sum()
}
