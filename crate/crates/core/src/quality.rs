//! The digit-wise quality function `h_{r,n,v,γ}(x)` that drives each digit
//! decision of the construction.
//!
//! [`h_naive`] evaluates the defining double sum by enumerating subsets and
//! works for any weights. For POD weights, [`PodStateTable`] keeps the
//! order-`ℓ` accumulators
//! `P_{r,ℓ,t}(k) = ∑_{u⊆{1:r}, |u|=ℓ} Γ_ℓ ∏_{j∈u} γ_j log(1/sin²(π k z_j / 2^t))`
//! per level `t` and evaluates `h` in time independent of the subset count.
//! [`ProductStateTable`] is the single-row version for product weights.
//!
//! Both tables store level `t` contiguously at offset `2^{t-1} - 1`, one slot
//! per odd `k < 2^t` at index `(k - 1) / 2`. At step `(r, v)` of a
//! construction, levels `t < v` already hold component `r` and levels
//! `t ≥ v` still hold component `r - 1`; every level carries a stamp with the
//! component it holds and evaluations check it.

use alloc::{vec, vec::Vec};

use crate::lattice::{log_inv_sin2, log_inv_sin2_reduced};
use crate::weights::{PodWeights, WeightScheme};
use crate::{Error, Limits, Result, Subset, MAX_DIGITS};

#[inline]
fn level_offset(t: u32) -> usize {
    (1usize << (t - 1)) - 1
}

#[inline]
fn level_len(t: u32) -> usize {
    1usize << (t - 1)
}

/// `log(1/sin²(π m / 2^n))` for `0 ≤ m ≤ 2^{n-1}`, from which every
/// `log(1/sin²(π a / 2^t))` with `t ≤ n` is a lookup.
///
/// Lookups return exactly the value of
/// [`log_inv_sin2`](crate::lattice::log_inv_sin2).
#[derive(Clone, Debug)]
pub struct SinLogTable {
    n: u32,
    values: Vec<f64>,
}

impl SinLogTable {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 || n > MAX_DIGITS {
            return Err(Error::InvalidDigits(n));
        }
        let values = (0..=1u64 << (n - 1))
            .map(|m| log_inv_sin2_reduced(m, n))
            .collect();
        Ok(SinLogTable { n, values })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `log(1/sin²(π a / 2^t))` for `1 ≤ t ≤ n`.
    #[inline]
    pub fn get(&self, a: u64, t: u32) -> f64 {
        debug_assert!(t >= 1 && t <= self.n);
        let full = 1u64 << self.n;
        let m = (a & ((1u64 << t) - 1)) << (self.n - t);
        self.values[m.min(full - m) as usize]
    }

    /// `w(t, k) = log(1/sin²(π k z / 2^t))` for odd `k < 2^t`, written to
    /// `out[(k - 1) / 2]`.
    pub fn fill_level(&self, z: u64, t: u32, out: &mut [f64]) {
        for (i, w) in out[..level_len(t)].iter_mut().enumerate() {
            *w = self.get((2 * i as u64 + 1).wrapping_mul(z), t);
        }
    }

    pub fn level(&self, z: u64, t: u32) -> Vec<f64> {
        let mut out = vec![0.0; level_len(t)];
        self.fill_level(z, t, &mut out);
        out
    }
}

fn check_level(v: u32, n: u32) -> Result<()> {
    if v < 2 || v > n {
        Err(Error::InvalidLevel { level: v, n })
    } else {
        Ok(())
    }
}

/// Accumulators `P_{r,ℓ,t}` of the fast POD evaluation, for `ℓ = 1..=s` and
/// `t = 2..=n`, plus the cached level sums
/// `S0 = ∑_ℓ P_{r,ℓ,t}` and `S1 = ∑_ℓ (Γ_{ℓ+1}/Γ_ℓ) P_{r,ℓ,t}`.
#[derive(Clone, Debug)]
pub struct PodStateTable {
    n: u32,
    dims: usize,
    stride: usize,
    rows: Vec<f64>,
    sums: Vec<f64>,
    ratio_sums: Vec<f64>,
    stamps: Vec<usize>,
    // up[ℓ] = Γ_ℓ/Γ_{ℓ-1}, next[ℓ] = Γ_{ℓ+1}/Γ_ℓ
    up: Vec<f64>,
    next: Vec<f64>,
    gammas: Vec<f64>,
    order_one: f64,
}

impl PodStateTable {
    /// Tables for a construction of `s` components with `N = 2^n`,
    /// initialized with component 1 (`z_1 = 1`):
    /// `P_{1,1,t}(k) = Γ_1 γ_1 log(1/sin²(π k / 2^t))`.
    pub fn new(weights: &PodWeights, n: u32, s: usize, table: &SinLogTable) -> Result<Self> {
        if s == 0 || s > weights.s_max() {
            return Err(Error::DimensionMismatch {
                expected: weights.s_max(),
                found: s,
            });
        }
        if table.n() != n {
            return Err(Error::InvalidDigits(n));
        }
        let orders = weights.orders();
        let stride = (1usize << n) - 1;
        let mut up = vec![0.0; s + 1];
        let mut next = vec![0.0; s + 1];
        for l in 1..=s {
            up[l] = orders[l] / orders[l - 1];
            if l < s {
                next[l] = orders[l + 1] / orders[l];
            }
        }
        let mut state = PodStateTable {
            n,
            dims: s,
            stride,
            rows: vec![0.0; s * stride],
            sums: vec![0.0; stride],
            ratio_sums: vec![0.0; stride],
            stamps: vec![1; n as usize + 1],
            up,
            next,
            gammas: weights.gammas()[..s].to_vec(),
            order_one: orders[1],
        };
        let first = state.order_one * state.gammas[0];
        for t in 2..=n {
            let off = level_offset(t);
            for i in 0..level_len(t) {
                state.rows[off + i] = first * table.get(2 * i as u64 + 1, t);
            }
            state.refresh_sums(t, 1);
        }
        Ok(state)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of components the table was sized for.
    pub fn dims(&self) -> usize {
        self.dims
    }

    /// The component whose data level `t` currently holds.
    pub fn component_at(&self, t: u32) -> usize {
        self.stamps[t as usize]
    }

    /// Number of `f64` slots held by the accumulator rows and level sums.
    pub fn table_doubles(&self) -> usize {
        self.rows.len() + self.sums.len() + self.ratio_sums.len()
    }

    /// `P_{r,ℓ,t}(k 2^{n-t})` for odd `k < 2^t`, where `r` is
    /// [`component_at(t)`](Self::component_at). `ℓ = 0` gives 1 and
    /// `ℓ > r` gives 0.
    pub fn value(&self, l: usize, t: u32, k: u64) -> f64 {
        debug_assert!(k % 2 == 1 && k < 1 << t);
        if l == 0 {
            1.0
        } else if l > self.component_at(t) {
            0.0
        } else {
            self.rows[(l - 1) * self.stride + level_offset(t) + (k as usize - 1) / 2]
        }
    }

    fn refresh_sums(&mut self, t: u32, r: usize) {
        if r >= self.dims {
            return;
        }
        let off = level_offset(t);
        for i in 0..level_len(t) {
            let mut s0 = 0.0;
            let mut s1 = 0.0;
            for l in 1..=r {
                let p = self.rows[(l - 1) * self.stride + off + i];
                s0 += p;
                s1 += self.next[l] * p;
            }
            self.sums[off + i] = s0;
            self.ratio_sums[off + i] = s1;
        }
    }

    /// Folds the next component into level `v`, given its digit-truncated
    /// value `z_{r,v}`:
    /// `P_{r,ℓ,v} = P_{r-1,ℓ,v} + (Γ_ℓ/Γ_{ℓ-1}) γ_r log(1/sin²(π k z_{r,v}/2^v)) P_{r-1,ℓ-1,v}`.
    pub fn pod_update(&mut self, table: &SinLogTable, z_rv: u64, v: u32) -> Result<()> {
        check_level(v, self.n)?;
        if z_rv % 2 == 0 {
            return Err(Error::EvenCandidate(z_rv));
        }
        if z_rv >= 1 << v {
            return Err(Error::InvalidComponent {
                index: self.component_at(v) + 1,
                value: z_rv,
            });
        }
        let w = table.level(z_rv, v);
        self.update_with(v, &w)
    }

    /// [`pod_update`](Self::pod_update) with the level-`v` logarithms of the
    /// chosen digit already computed.
    pub(crate) fn update_with(&mut self, v: u32, w: &[f64]) -> Result<()> {
        let r = self.component_at(v) + 1;
        if r > self.dims {
            return Err(Error::StateMismatch {
                level: v,
                expected: self.dims - 1,
                found: r - 1,
            });
        }
        let off = level_offset(v);
        let len = level_len(v);
        let gamma = self.gammas[r - 1];
        for l in (1..=r).rev() {
            let factor = self.up[l] * gamma;
            let (lower, upper) = self.rows.split_at_mut((l - 1) * self.stride);
            let target = &mut upper[off..off + len];
            if l == 1 {
                for (p, &wi) in target.iter_mut().zip(w) {
                    *p += factor * wi;
                }
            } else {
                let source = &lower[(l - 2) * self.stride + off..][..len];
                for ((p, &wi), &q) in target.iter_mut().zip(w).zip(source) {
                    *p += factor * wi * q;
                }
            }
        }
        self.stamps[v as usize] = r;
        self.refresh_sums(v, r);
        Ok(())
    }

    /// `h_{r,n,v,γ}(x)` for the component `r` following the one held at the
    /// levels `t ≥ v`.
    pub fn h_fast_pod(&self, table: &SinLogTable, v: u32, x: u64) -> Result<f64> {
        check_level(v, self.n)?;
        if x % 2 == 0 {
            return Err(Error::EvenCandidate(x));
        }
        self.h_with(v, &table.level(x, v))
    }

    /// `lx[i] = log(1/sin²(π (2i+1) x / 2^v))` for the candidate `x`.
    pub(crate) fn h_with(&self, v: u32, lx: &[f64]) -> Result<f64> {
        let previous = self.component_at(v);
        for t in v..=self.n {
            if self.component_at(t) != previous {
                return Err(Error::StateMismatch {
                    level: t,
                    expected: previous,
                    found: self.component_at(t),
                });
            }
        }
        let r = previous + 1;
        if r > self.dims {
            return Err(Error::StateMismatch {
                level: v,
                expected: self.dims - 1,
                found: previous,
            });
        }
        let gamma = self.gammas[r - 1];
        let lmask = level_len(v) - 1;
        let mut total = 0.0;
        for t in (v..=self.n).rev() {
            let off = level_offset(t);
            let len = level_len(t);
            let s0 = &self.sums[off..off + len];
            let s1 = &self.ratio_sums[off..off + len];
            let mut level = 0.0;
            for (i, (&a, &b)) in s0.iter().zip(s1).enumerate() {
                let l = lx[i & lmask];
                level += a + gamma * l * (self.order_one + b);
            }
            total += level / (1u64 << (t - v)) as f64;
        }
        Ok(total)
    }
}

/// Single accumulator `q_{r,t}(k) = ∑_{∅≠u⊆{1:r}} γ_u ∏_{j∈u} w_j(t, k)` for
/// product weights, updated as `q ← q + γ_r w_r (1 + q)`.
#[derive(Clone, Debug)]
pub struct ProductStateTable {
    n: u32,
    dims: usize,
    q: Vec<f64>,
    stamps: Vec<usize>,
    gammas: Vec<f64>,
}

impl ProductStateTable {
    pub fn new(gammas: &[f64], n: u32, s: usize, table: &SinLogTable) -> Result<Self> {
        if s == 0 || s > gammas.len() {
            return Err(Error::DimensionMismatch {
                expected: gammas.len(),
                found: s,
            });
        }
        if table.n() != n {
            return Err(Error::InvalidDigits(n));
        }
        let mut q = vec![0.0; (1usize << n) - 1];
        for t in 2..=n {
            let off = level_offset(t);
            for i in 0..level_len(t) {
                q[off + i] = gammas[0] * table.get(2 * i as u64 + 1, t);
            }
        }
        Ok(ProductStateTable {
            n,
            dims: s,
            q,
            stamps: vec![1; n as usize + 1],
            gammas: gammas[..s].to_vec(),
        })
    }

    pub fn component_at(&self, t: u32) -> usize {
        self.stamps[t as usize]
    }

    pub fn table_doubles(&self) -> usize {
        self.q.len()
    }

    /// `q_{r,t}(k 2^{n-t})` for the component held at level `t`.
    pub fn value(&self, t: u32, k: u64) -> f64 {
        self.q[level_offset(t) + (k as usize - 1) / 2]
    }

    pub(crate) fn update_with(&mut self, v: u32, w: &[f64]) -> Result<()> {
        let r = self.component_at(v) + 1;
        if r > self.dims {
            return Err(Error::StateMismatch {
                level: v,
                expected: self.dims - 1,
                found: r - 1,
            });
        }
        let gamma = self.gammas[r - 1];
        let off = level_offset(v);
        for (q, &wi) in self.q[off..off + level_len(v)].iter_mut().zip(w) {
            *q += gamma * wi * (1.0 + *q);
        }
        self.stamps[v as usize] = r;
        Ok(())
    }

    pub(crate) fn h_with(&self, v: u32, lx: &[f64]) -> Result<f64> {
        let previous = self.component_at(v);
        for t in v..=self.n {
            if self.component_at(t) != previous {
                return Err(Error::StateMismatch {
                    level: t,
                    expected: previous,
                    found: self.component_at(t),
                });
            }
        }
        let r = previous + 1;
        if r > self.dims {
            return Err(Error::StateMismatch {
                level: v,
                expected: self.dims - 1,
                found: previous,
            });
        }
        let gamma = self.gammas[r - 1];
        let lmask = level_len(v) - 1;
        let mut total = 0.0;
        for t in (v..=self.n).rev() {
            let off = level_offset(t);
            let mut level = 0.0;
            for (i, &q) in self.q[off..off + level_len(t)].iter().enumerate() {
                level += q + gamma * lx[i & lmask] * (1.0 + q);
            }
            total += level / (1u64 << (t - v)) as f64;
        }
        Ok(total)
    }
}

/// The digit-wise quality function by direct evaluation of its defining
/// double sum,
///
/// `∑_{t=v}^{n} 2^{-(t-v)} ∑_{odd k<2^t} [ ∑_{∅≠u⊆{1:r-1}} γ_u ∏_{j∈u} w_j
///  + log(1/sin²(π k x / 2^v)) ∑_{u⊆{1:r-1}} γ_{u∪{r}} ∏_{j∈u} w_j ]`
///
/// with `w_j = log(1/sin²(π k z_j / 2^t))`. Subsets of `{1..r-1}` are
/// enumerated, so `r - 1` must be within the subset cap.
pub fn h_naive(
    r: usize,
    n: u32,
    v: u32,
    scheme: &WeightScheme,
    previous: &[u64],
    x: u64,
    limits: &Limits,
) -> Result<f64> {
    if n == 0 || n > MAX_DIGITS {
        return Err(Error::InvalidDigits(n));
    }
    if v == 0 || v > n {
        return Err(Error::InvalidLevel { level: v, n });
    }
    if r == 0 || r > scheme.s_max() {
        return Err(Error::ComponentOutOfRange {
            component: r,
            s_max: scheme.s_max(),
        });
    }
    if previous.len() != r - 1 {
        return Err(Error::DimensionMismatch {
            expected: r - 1,
            found: previous.len(),
        });
    }
    if x % 2 == 0 {
        return Err(Error::EvenCandidate(x));
    }
    if let Some(j) = previous.iter().position(|z| z % 2 == 0) {
        return Err(Error::InvalidComponent {
            index: j + 1,
            value: previous[j],
        });
    }
    limits.check_subsets(r - 1)?;

    let subsets = 1usize << (r - 1);
    let current = Subset::singleton(r);
    let own: Vec<f64> = (0..subsets as u64)
        .map(|b| scheme.gamma_unchecked(Subset::from_bits(b)))
        .collect();
    let joint: Vec<f64> = (0..subsets as u64)
        .map(|b| scheme.gamma_unchecked(Subset::from_bits(b).union(current)))
        .collect();
    let mut products = vec![1.0; subsets];
    let mut w = vec![0.0; r - 1];

    let mut total = 0.0;
    for t in (v..=n).rev() {
        let mut level = 0.0;
        for k in (1..1u64 << t).step_by(2) {
            for (wj, &zj) in w.iter_mut().zip(previous) {
                *wj = log_inv_sin2(k.wrapping_mul(zj), t);
            }
            let lx = log_inv_sin2(k.wrapping_mul(x), v);
            let mut without = 0.0;
            let mut with = joint[0];
            for mask in 1..subsets {
                let p = products[mask & (mask - 1)] * w[mask.trailing_zeros() as usize];
                products[mask] = p;
                without += own[mask] * p;
                with += joint[mask] * p;
            }
            level += without + lx * with;
        }
        total += level / (1u64 << (t - v)) as f64;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::ProductWeights;
    use rand::{Rng, SeedableRng};

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs())
    }

    fn pod(orders: &[f64], g: &[f64]) -> PodWeights {
        PodWeights::new(orders.to_vec(), g.to_vec()).unwrap()
    }

    #[test]
    fn table_matches_direct_evaluation_bitwise() {
        let table = SinLogTable::new(9).unwrap();
        for t in 1..=9 {
            for a in (1..1u64 << (t + 2)).step_by(2) {
                assert_eq!(table.get(a, t).to_bits(), log_inv_sin2(a, t).to_bits());
            }
        }
    }

    #[test]
    fn table_entries_are_bounded() {
        let table = SinLogTable::new(12).unwrap();
        for t in 1..=12 {
            let bound = 2.0 * ((1u64 << t) as f64 / core::f64::consts::PI).ln() + 1.0;
            for z in [1u64, 3, 77, 4095] {
                for w in table.level(z, t) {
                    assert!(w.is_finite() && (0.0..=bound).contains(&w), "t={t} w={w}");
                }
            }
        }
    }

    #[test]
    fn level_depends_on_residue_only() {
        let table = SinLogTable::new(8).unwrap();
        for t in 2..=8 {
            assert_eq!(table.level(201, t), table.level(201 % (1 << t), t));
        }
    }

    #[test]
    fn h_naive_product_tie() {
        let w: WeightScheme = ProductWeights::new(vec![1.0, 1.0]).unwrap().into();
        let limits = Limits::default();
        let ln2 = 2f64.ln();
        let expected = 2.0 * (2.0 * ln2 + ln2 * ln2);
        let h1 = h_naive(2, 2, 2, &w, &[1], 1, &limits).unwrap();
        let h3 = h_naive(2, 2, 2, &w, &[1], 3, &limits).unwrap();
        assert!(close(h1, expected, 1e-14), "{h1} vs {expected}");
        assert_eq!(h1.to_bits(), h3.to_bits());
    }

    #[test]
    fn h_naive_small_joint_weights_approach_constant() {
        let limits = Limits::default();
        let eps = 1e-9;
        let w: WeightScheme = crate::weights::GeneralWeights::from_entries(
            2,
            [
                (Subset::from_components(&[1]).unwrap(), 1.0),
                (Subset::from_components(&[2]).unwrap(), eps),
                (Subset::from_components(&[1, 2]).unwrap(), eps),
            ],
            &limits,
        )
        .unwrap()
        .into();
        let constant: f64 = (1..4).step_by(2).map(|k| log_inv_sin2(k, 2)).sum();
        for x in [1, 3] {
            let h = h_naive(2, 2, 2, &w, &[1], x, &limits).unwrap();
            assert!((h - constant).abs() < 10.0 * eps, "{h} vs {constant}");
        }
    }

    #[test]
    fn h_naive_rejects_bad_input() {
        let w: WeightScheme = ProductWeights::new(vec![1.0, 1.0]).unwrap().into();
        let limits = Limits::default();
        assert!(matches!(h_naive(2, 3, 2, &w, &[1], 2, &limits), Err(Error::EvenCandidate(2))));
        assert!(h_naive(2, 3, 4, &w, &[1], 1, &limits).is_err());
        assert!(h_naive(2, 3, 2, &w, &[], 1, &limits).is_err());
        assert!(h_naive(3, 3, 2, &w, &[1, 1], 1, &limits).is_err());
        assert!(h_naive(2, 3, 2, &w, &[2], 1, &limits).is_err());
        let tight = Limits { subset_cap: 0, ..limits };
        assert!(h_naive(2, 3, 2, &w, &[1], 1, &tight).unwrap_err().is_budget());
    }

    #[test]
    fn fast_pod_matches_naive_examples() {
        let limits = Limits::default();
        let ln2 = 2f64.ln();
        let weights = pod(&[1.0, 1.0, 1.0], &[1.0, 1.0]);
        let table = SinLogTable::new(2).unwrap();
        let state = PodStateTable::new(&weights, 2, 2, &table).unwrap();
        let h = state.h_fast_pod(&table, 2, 1).unwrap();
        assert!(close(h, 2.0 * (2.0 * ln2 + ln2 * ln2), 1e-14));

        let weights = pod(&[1.0, 1.0, 2.0], &[1.0, 1.0]);
        let scheme = WeightScheme::Pod(weights.clone());
        let table = SinLogTable::new(3).unwrap();
        let state = PodStateTable::new(&weights, 3, 2, &table).unwrap();
        for x in [1, 3] {
            let fast = state.h_fast_pod(&table, 2, x).unwrap();
            let slow = h_naive(2, 3, 2, &scheme, &[1], x, &limits).unwrap();
            assert!(close(fast, slow, 1e-10), "{fast} vs {slow}");
        }
    }

    #[test]
    fn tiny_current_weight_leaves_x_independent_part() {
        let table = SinLogTable::new(5).unwrap();
        let weights = pod(&[1.0, 1.0, 2.0, 6.0], &[0.8, 1e-300, 0.5]);
        let state = PodStateTable::new(&weights, 5, 3, &table).unwrap();
        let a = state.h_fast_pod(&table, 3, 1).unwrap();
        let b = state.h_fast_pod(&table, 3, 5).unwrap();
        assert_eq!(a, b);
    }

    // ∑_{u⊆{1:r}, |u|=ℓ} Γ_ℓ ∏ γ_j w_j(t, k), by enumeration
    fn subset_sum_oracle(weights: &PodWeights, z: &[u64], l: usize, t: u32, k: u64) -> f64 {
        let r = z.len();
        (0u64..1 << r)
            .filter(|b| b.count_ones() as usize == l)
            .map(|b| {
                let u = Subset::from_bits(b);
                weights.orders()[l]
                    * u.components()
                        .map(|j| weights.gammas()[j - 1] * log_inv_sin2(k * z[j - 1], t))
                        .product::<f64>()
            })
            .sum()
    }

    #[test]
    fn pod_update_rows_equal_subset_sums() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for n in 2..=6 {
            for s in 1..=5 {
                let g: Vec<f64> = (0..s).map(|_| rng.gen_range(0.05..1.2)).collect();
                let mut orders = vec![1.0];
                orders.extend((0..s).map(|_| rng.gen_range(0.2..4.0)));
                let weights = pod(&orders, &g);
                let table = SinLogTable::new(n).unwrap();
                let mut state = PodStateTable::new(&weights, n, s, &table).unwrap();
                let mut z = vec![1u64];
                for _ in 2..=s {
                    let zr = rng.gen_range(0..1u64 << (n - 1)) * 2 + 1;
                    for v in 2..=n {
                        state.pod_update(&table, zr % (1 << v), v).unwrap();
                    }
                    z.push(zr);
                }
                let r = z.len();
                for t in 2..=n {
                    assert_eq!(state.component_at(t), r);
                    for k in (1..1u64 << t).step_by(2) {
                        for l in 0..=s + 1 {
                            let got = state.value(l, t, k);
                            let want = if l == 0 {
                                1.0
                            } else {
                                subset_sum_oracle(&weights, &z, l, t, k)
                            };
                            assert!(
                                (got - want).abs() <= 1e-12 * want.abs().max(1e-300),
                                "n={n} r={r} l={l} t={t} k={k}: {got} vs {want}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn pod_update_first_row_and_periodicity() {
        let weights = pod(&[1.0, 1.5, 2.0, 3.0], &[0.7, 0.4, 0.9]);
        let table = SinLogTable::new(6).unwrap();
        let base = PodStateTable::new(&weights, 6, 3, &table).unwrap();
        let v = 4;
        let z_r = 45u64;
        let mut a = base.clone();
        a.pod_update(&table, z_r % 16, v).unwrap();
        let mut b = base.clone();
        b.update_with(v, &table.level(z_r, v)).unwrap();
        for k in (1..16u64).step_by(2) {
            let expected = base.value(1, v, k) + 1.5 * 0.4 * log_inv_sin2(k * 13, v);
            assert!(close(a.value(1, v, k), expected, 1e-15));
            assert_eq!(a.value(1, v, k).to_bits(), b.value(1, v, k).to_bits());
            assert_eq!(a.value(2, v, k).to_bits(), b.value(2, v, k).to_bits());
            assert_eq!(a.value(3, v, k), 0.0);
        }
        assert!(matches!(a.pod_update(&table, 2, v), Err(Error::EvenCandidate(2))));
        assert!(a.pod_update(&table, 17, v).is_err());
    }

    #[test]
    fn stale_levels_are_detected() {
        let weights = pod(&[1.0, 1.0, 1.0, 1.0], &[0.5, 0.5, 0.5]);
        let table = SinLogTable::new(4).unwrap();
        let mut state = PodStateTable::new(&weights, 4, 3, &table).unwrap();
        state.pod_update(&table, 3, 3).unwrap();
        // level 3 now holds component 2 while level 2 still holds component 1
        assert!(matches!(
            state.h_fast_pod(&table, 2, 1),
            Err(Error::StateMismatch { level: 3, .. })
        ));
        assert!(state.h_fast_pod(&table, 4, 1).is_ok());
        assert!(state.h_fast_pod(&table, 3, 1).is_err());
    }
}
