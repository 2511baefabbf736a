//! Weight families `γ = {γ_u}` indexed by finite coordinate sets `u`.
//!
//! Every family evaluates `γ_∅ = 1`. Product weights are `γ_u = ∏_{j∈u} γ_j`,
//! POD (product and order dependent) weights are `γ_u = Γ_{|u|} ∏_{j∈u} γ_j`
//! with `Γ_0 = 1`, and general weights are an explicit complete table over
//! the nonempty subsets of `{1, …, s_max}`. A [`ShiftedWeights`] view
//! evaluates `u ↦ γ_{u∪v}` for a fixed set `v`.
//!
//! Schemes are immutable once built.

use alloc::{boxed::Box, vec, vec::Vec};

use crate::digest::Fnv;
use crate::{Error, Limits, Result, Subset};

fn check_positive(what: &'static str, values: &[f64], offset: usize) -> Result<()> {
    for (i, &value) in values.iter().enumerate() {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidWeight {
                what,
                index: i + offset,
                value,
            });
        }
    }
    Ok(())
}

/// Largest dimension of product and POD weights. General weight tables are
/// limited to [`Subset::MAX_COMPONENT`] coordinates.
pub const MAX_FACTORED_DIMENSION: usize = 1 << 16;

fn check_dimension(s_max: usize, bound: usize) -> Result<()> {
    if s_max == 0 || s_max > bound {
        return Err(Error::MalformedWeights(if bound == Subset::MAX_COMPONENT {
            "s_max must lie in 1..=63 for general weights"
        } else {
            "s_max must lie in 1..=65536"
        }));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductWeights {
    gammas: Vec<f64>,
}

impl ProductWeights {
    /// `gammas[j - 1]` is `γ_j`.
    pub fn new(gammas: Vec<f64>) -> Result<Self> {
        check_dimension(gammas.len(), MAX_FACTORED_DIMENSION)?;
        check_positive("gammas", &gammas, 1)?;
        Ok(ProductWeights { gammas })
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn s_max(&self) -> usize {
        self.gammas.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PodWeights {
    orders: Vec<f64>,
    gammas: Vec<f64>,
}

impl PodWeights {
    /// `orders` is `(Γ_0, …, Γ_{s_max})` with `Γ_0 = 1`; `gammas[j - 1]` is
    /// `γ_j`.
    pub fn new(orders: Vec<f64>, gammas: Vec<f64>) -> Result<Self> {
        check_dimension(gammas.len(), MAX_FACTORED_DIMENSION)?;
        if orders.len() != gammas.len() + 1 {
            return Err(Error::MalformedWeights(
                "POD weights need exactly s_max + 1 order coefficients",
            ));
        }
        check_positive("Gammas", &orders, 0)?;
        check_positive("gammas", &gammas, 1)?;
        if orders[0] != 1.0 {
            return Err(Error::MalformedWeights("Gamma_0 must equal 1"));
        }
        Ok(PodWeights { orders, gammas })
    }

    /// Product weights seen as POD weights with `Γ_ℓ = 1`.
    pub fn from_product(product: &ProductWeights) -> Self {
        PodWeights {
            orders: vec![1.0; product.s_max() + 1],
            gammas: product.gammas.clone(),
        }
    }

    pub fn orders(&self) -> &[f64] {
        &self.orders
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn s_max(&self) -> usize {
        self.gammas.len()
    }
}

/// A complete table of weights over the nonempty subsets of `{1, …, s_max}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralWeights {
    s_max: usize,
    // indexed by subset bit mask; entry 0 is γ_∅ = 1
    values: Vec<f64>,
}

impl GeneralWeights {
    /// Builds the table from `(subset, value)` pairs. Every nonempty subset of
    /// `{1, …, s_max}` must appear exactly once.
    pub fn from_entries<I>(s_max: usize, entries: I, limits: &Limits) -> Result<Self>
    where
        I: IntoIterator<Item = (Subset, f64)>,
    {
        check_dimension(s_max, Subset::MAX_COMPONENT)?;
        limits.check_subsets(s_max)?;
        let full = Subset::prefix(s_max);
        let mut values = vec![f64::NAN; 1 << s_max];
        values[0] = 1.0;
        for (u, value) in entries {
            if u.is_empty() {
                return Err(Error::MalformedWeights("the empty set carries no weight entry"));
            }
            if !u.is_subset_of(full) {
                return Err(Error::SubsetOutOfRange { subset: u, s_max });
            }
            let slot = &mut values[u.bits() as usize];
            if !slot.is_nan() {
                return Err(Error::DuplicateSubset(u));
            }
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidWeight {
                    what: "values",
                    index: u.bits() as usize,
                    value,
                });
            }
            *slot = value;
        }
        if let Some(mask) = values.iter().position(|v| v.is_nan()) {
            return Err(Error::MissingSubset(Subset::from_bits(mask as u64)));
        }
        Ok(GeneralWeights { s_max, values })
    }

    /// Tabulates `f` over every nonempty subset of `{1, …, s_max}`.
    pub fn from_fn<F>(s_max: usize, mut f: F, limits: &Limits) -> Result<Self>
    where
        F: FnMut(Subset) -> f64,
    {
        check_dimension(s_max, Subset::MAX_COMPONENT)?;
        limits.check_subsets(s_max)?;
        let entries: Vec<_> = (1u64..1 << s_max)
            .map(|bits| {
                let u = Subset::from_bits(bits);
                (u, f(u))
            })
            .collect();
        Self::from_entries(s_max, entries, limits)
    }

    pub fn s_max(&self) -> usize {
        self.s_max
    }

    /// Nonempty subsets and their weights, ordered by bit mask.
    pub fn entries(&self) -> impl Iterator<Item = (Subset, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .skip(1)
            .map(|(mask, &v)| (Subset::from_bits(mask as u64), v))
    }
}

/// The view `u ↦ γ_{u∪v}` of a base scheme.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftedWeights {
    base: Box<WeightScheme>,
    shift: Subset,
}

impl ShiftedWeights {
    pub fn base(&self) -> &WeightScheme {
        &self.base
    }

    pub fn shift(&self) -> Subset {
        self.shift
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum WeightScheme {
    Product(ProductWeights),
    Pod(PodWeights),
    General(GeneralWeights),
    Shifted(ShiftedWeights),
}

/// Weights of the form `γ_u = c_{|u|} ∏_{j∈u} γ_j` on subsets of `{1, …, s}`.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct OrderFactored {
    /// `c_0, …, c_s`.
    pub(crate) coefficients: Vec<f64>,
    /// `γ_1, …, γ_s`.
    pub(crate) gammas: Vec<f64>,
    /// All `c_ℓ` equal to one.
    pub(crate) is_product: bool,
}

impl WeightScheme {
    pub fn s_max(&self) -> usize {
        match self {
            WeightScheme::Product(w) => w.s_max(),
            WeightScheme::Pod(w) => w.s_max(),
            WeightScheme::General(w) => w.s_max(),
            WeightScheme::Shifted(w) => w.base.s_max(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            WeightScheme::Product(_) => "product",
            WeightScheme::Pod(_) => "pod",
            WeightScheme::General(_) => "general",
            WeightScheme::Shifted(_) => "shifted",
        }
    }

    /// `γ_u`, with `γ_∅ = 1`.
    pub fn gamma(&self, u: Subset) -> Result<f64> {
        let s_max = self.s_max();
        if !u.is_subset_of(Subset::prefix(s_max)) {
            return Err(Error::SubsetOutOfRange { subset: u, s_max });
        }
        Ok(self.gamma_unchecked(u))
    }

    // `u` must lie within {1..s_max}.
    pub(crate) fn gamma_unchecked(&self, u: Subset) -> f64 {
        match self {
            WeightScheme::Product(w) => u.components().map(|j| w.gammas[j - 1]).product(),
            WeightScheme::Pod(w) => {
                w.orders[u.len()] * u.components().map(|j| w.gammas[j - 1]).product::<f64>()
            }
            WeightScheme::General(w) => w.values[u.bits() as usize],
            WeightScheme::Shifted(w) => w.base.gamma_unchecked(u.union(w.shift)),
        }
    }

    /// The scheme `γ ∪ v`, i.e. `u ↦ γ_{u∪v}`.
    pub fn shifted(&self, shift: Subset) -> Result<WeightScheme> {
        let s_max = self.s_max();
        if !shift.is_subset_of(Subset::prefix(s_max)) {
            return Err(Error::SubsetOutOfRange {
                subset: shift,
                s_max,
            });
        }
        Ok(WeightScheme::Shifted(ShiftedWeights {
            base: Box::new(self.clone()),
            shift,
        }))
    }

    /// `u ↦ γ_u^e`. Product and POD weights keep their form.
    pub fn pow(&self, exponent: f64) -> Result<WeightScheme> {
        if !(exponent.is_finite() && exponent > 0.0) {
            return Err(Error::InvalidExponent(exponent));
        }
        let powed = |v: &[f64]| v.iter().map(|&g| libm::pow(g, exponent)).collect::<Vec<_>>();
        Ok(match self {
            WeightScheme::Product(w) => WeightScheme::Product(ProductWeights {
                gammas: powed(&w.gammas),
            }),
            WeightScheme::Pod(w) => WeightScheme::Pod(PodWeights {
                orders: powed(&w.orders),
                gammas: powed(&w.gammas),
            }),
            WeightScheme::General(w) => WeightScheme::General(GeneralWeights {
                s_max: w.s_max,
                values: powed(&w.values),
            }),
            WeightScheme::Shifted(w) => WeightScheme::Shifted(ShiftedWeights {
                base: Box::new(w.base.pow(exponent)?),
                shift: w.shift,
            }),
        })
    }

    /// `max_{v ⊆ {1..j-1}} γ_{v∪{j}} / γ_v`, using closed forms for product
    /// and POD weights and subset enumeration otherwise.
    pub fn tilde_gamma(&self, j: usize, limits: &Limits) -> Result<f64> {
        self.check_component(j)?;
        match self {
            WeightScheme::Product(w) => Ok(w.gammas[j - 1]),
            WeightScheme::Pod(w) => {
                let best = w.orders[..=j]
                    .windows(2)
                    .map(|pair| pair[1] / pair[0])
                    .fold(f64::NEG_INFINITY, f64::max);
                Ok(w.gammas[j - 1] * best)
            }
            _ => self.tilde_gamma_enumerated(j, limits),
        }
    }

    /// [`tilde_gamma`](Self::tilde_gamma) by enumerating every `v ⊆ {1..j-1}`,
    /// whatever the weight family.
    pub fn tilde_gamma_enumerated(&self, j: usize, limits: &Limits) -> Result<f64> {
        self.check_component(j)?;
        limits.check_subsets(j - 1)?;
        let single = Subset::singleton(j);
        let best = (0u64..1 << (j - 1))
            .map(|bits| {
                let v = Subset::from_bits(bits);
                self.gamma_unchecked(v.union(single)) / self.gamma_unchecked(v)
            })
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(best)
    }

    fn check_component(&self, j: usize) -> Result<()> {
        let s_max = self.s_max();
        if j == 0 || j > s_max {
            Err(Error::ComponentOutOfRange {
                component: j,
                s_max,
            })
        } else {
            Ok(())
        }
    }

    /// The order-factored form of the weights restricted to `{1..s}`, when
    /// one exists without subset enumeration.
    pub(crate) fn factored(&self, s: usize) -> Option<OrderFactored> {
        if s > self.s_max() {
            return None;
        }
        match self {
            WeightScheme::Product(w) => Some(OrderFactored {
                coefficients: vec![1.0; s + 1],
                gammas: w.gammas[..s].to_vec(),
                is_product: true,
            }),
            WeightScheme::Pod(w) => Some(OrderFactored {
                coefficients: w.orders[..=s].to_vec(),
                gammas: w.gammas[..s].to_vec(),
                is_product: w.orders[..=s].iter().all(|&c| c == 1.0),
            }),
            WeightScheme::General(_) => None,
            WeightScheme::Shifted(w) => {
                if w.shift.intersects(Subset::prefix(s)) {
                    return None;
                }
                let need = s.max(w.shift.max_component());
                let base = w.base.factored(need)?;
                let shift_len = w.shift.len();
                let shift_product: f64 = w.shift.components().map(|j| base.gammas[j - 1]).product();
                let coefficients: Vec<f64> = (0..=s)
                    .map(|l| base.coefficients[l + shift_len] * shift_product)
                    .collect();
                Some(OrderFactored {
                    is_product: coefficients.iter().all(|&c| c == 1.0),
                    coefficients,
                    gammas: base.gammas[..s].to_vec(),
                })
            }
        }
    }

    /// Fingerprint of the kind and every stored value.
    pub fn digest(&self) -> u64 {
        let mut h = Fnv::new();
        self.feed(&mut h);
        h.finish()
    }

    fn feed(&self, h: &mut Fnv) {
        h.bytes(self.kind().as_bytes());
        match self {
            WeightScheme::Product(w) => w.gammas.iter().for_each(|&g| h.f64(g)),
            WeightScheme::Pod(w) => {
                w.orders.iter().for_each(|&g| h.f64(g));
                w.gammas.iter().for_each(|&g| h.f64(g));
            }
            WeightScheme::General(w) => w.values.iter().for_each(|&g| h.f64(g)),
            WeightScheme::Shifted(w) => {
                h.u64(w.shift.bits());
                w.base.feed(h);
            }
        }
    }
}

impl From<ProductWeights> for WeightScheme {
    fn from(w: ProductWeights) -> Self {
        WeightScheme::Product(w)
    }
}

impl From<PodWeights> for WeightScheme {
    fn from(w: PodWeights) -> Self {
        WeightScheme::Pod(w)
    }
}

impl From<GeneralWeights> for WeightScheme {
    fn from(w: GeneralWeights) -> Self {
        WeightScheme::General(w)
    }
}

pub fn gamma(scheme: &WeightScheme, u: Subset) -> Result<f64> {
    scheme.gamma(u)
}

pub fn tilde_gamma(scheme: &WeightScheme, j: usize, limits: &Limits) -> Result<f64> {
    scheme.tilde_gamma(j, limits)
}

pub fn pow_weights(scheme: &WeightScheme, exponent: f64) -> Result<WeightScheme> {
    scheme.pow(exponent)
}
