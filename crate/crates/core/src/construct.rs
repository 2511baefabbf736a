//! The CBC-DBD construction: components are chosen one after another, and
//! each component one binary digit at a time, by comparing the digit-wise
//! quality function at the two possible extensions.
//!
//! All paths share the digit loop and differ only in how `h` is evaluated:
//! [`Path::Naive`] enumerates subsets for any weights, [`Path::FastPod`]
//! keeps the POD accumulator tables and [`Path::FastProduct`] the single
//! product accumulator. Ties go to the smaller digit.
//!
//! Many digit decisions are exact ties in exact arithmetic (the two
//! candidates give the same multiset of terms), and each path rounds its sum
//! differently. Values within [`TIE_TOLERANCE`] of each other, relative to
//! the larger one, therefore count as a tie.

use alloc::{string::ToString, vec, vec::Vec};
use core::fmt;
use core::str::FromStr;

use crate::bounds;
use crate::lattice::{h_direct, Diagnostics, GeneratingVector};
use crate::quality::{h_naive, PodStateTable, ProductStateTable, SinLogTable};
use crate::weights::{PodWeights, WeightScheme};
use crate::{Error, Limits, Result, MAX_DIGITS};

/// Relative difference below which the two candidate values are a tie.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// How `h` is evaluated during the construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Path {
    /// Fast product for product weights, fast POD for POD weights, naive
    /// otherwise.
    Auto,
    Naive,
    FastPod,
    FastProduct,
}

impl Path {
    pub fn name(self) -> &'static str {
        match self {
            Path::Auto => "auto",
            Path::Naive => "naive",
            Path::FastPod => "fast-pod",
            Path::FastProduct => "fast-product",
        }
    }

    /// The concrete path `Auto` stands for on `scheme`.
    pub fn resolve(self, scheme: &WeightScheme) -> Path {
        match (self, scheme) {
            (Path::Auto, WeightScheme::Product(_)) => Path::FastProduct,
            (Path::Auto, WeightScheme::Pod(_)) => Path::FastPod,
            (Path::Auto, _) => Path::Naive,
            (path, _) => path,
        }
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Error returned when a path name is not recognized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownPath(pub alloc::string::String);

impl fmt::Display for UnknownPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown path `{}` (expected auto, naive, fast-pod or fast-product)",
            self.0
        )
    }
}

impl core::error::Error for UnknownPath {}

impl FromStr for Path {
    type Err = UnknownPath;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Path::Auto),
            "naive" => Ok(Path::Naive),
            "fast-pod" => Ok(Path::FastPod),
            "fast-product" => Ok(Path::FastProduct),
            other => Err(UnknownPath(other.to_string())),
        }
    }
}

/// Rule for equal `h` values. Only one is offered: keep the digit 0.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieBreak {
    #[default]
    PreferZero,
}

#[derive(Clone, Debug)]
pub struct ConstructionConfig {
    pub n: u32,
    pub s: usize,
    pub scheme: WeightScheme,
    pub tie_break: TieBreak,
    pub path: Path,
    pub limits: Limits,
    /// Compute `H` and the bound right-hand sides of the result.
    pub diagnostics: bool,
}

impl ConstructionConfig {
    /// Automatic path, default limits, diagnostics on.
    pub fn new(n: u32, s: usize, scheme: impl Into<WeightScheme>) -> Self {
        ConstructionConfig {
            n,
            s,
            scheme: scheme.into(),
            tie_break: TieBreak::PreferZero,
            path: Path::Auto,
            limits: Limits::default(),
            diagnostics: true,
        }
    }

    pub fn with_path(mut self, path: Path) -> Self {
        self.path = path;
        self
    }

    pub fn with_diagnostics(mut self, on: bool) -> Self {
        self.diagnostics = on;
        self
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > MAX_DIGITS {
            return Err(Error::InvalidDigits(self.n));
        }
        if self.s == 0 || self.s > self.scheme.s_max() {
            return Err(Error::DimensionMismatch {
                expected: self.scheme.s_max(),
                found: self.s,
            });
        }
        Ok(())
    }
}

/// One digit decision, as reported to an observer.
#[derive(Clone, Copy, Debug)]
pub struct StepRecord<'a> {
    /// The component `r` being built.
    pub component: usize,
    /// The digit level `v`.
    pub level: u32,
    /// The components chosen so far, `z_1, …, z_{r-1}`.
    pub earlier: &'a [u64],
    /// `z_{r,v-1}` and `z_{r,v-1} + 2^{v-1}`.
    pub candidates: [u64; 2],
    /// `h` at both candidates.
    pub values: [f64; 2],
    pub chosen: u64,
}

#[derive(Clone, Debug)]
pub struct Construction {
    /// The generating vector, with its digit history.
    pub vector: GeneratingVector,
    pub diagnostics: Diagnostics,
    /// The path that actually ran.
    pub path: Path,
}

/// Runs the construction on the path named in the configuration.
pub fn cbc_dbd(config: &ConstructionConfig) -> Result<Construction> {
    cbc_dbd_observed(config, &mut |_| {})
}

/// [`cbc_dbd`], calling `observer` after every digit decision.
pub fn cbc_dbd_observed(
    config: &ConstructionConfig,
    observer: &mut dyn FnMut(&StepRecord),
) -> Result<Construction> {
    config.validate()?;
    let path = config.path.resolve(&config.scheme);
    let (n, s) = (config.n, config.s);
    let vector = match path {
        Path::Naive => {
            config.limits.check_subsets(s - 1)?;
            let mut eval = Naive {
                config,
                z: Vec::new(),
            };
            run(n, s, &mut eval, observer)?
        }
        Path::FastPod => {
            let pod = match &config.scheme {
                WeightScheme::Pod(w) => w.clone(),
                WeightScheme::Product(w) => PodWeights::from_product(w),
                other => {
                    return Err(Error::SchemeMismatch {
                        path: path.name(),
                        kind: other.kind(),
                    })
                }
            };
            let table = SinLogTable::new(n)?;
            let state = PodStateTable::new(&pod, n, s, &table)?;
            run(n, s, &mut Fast::new(table, State::Pod(state)), observer)?
        }
        Path::FastProduct => {
            let gammas = match &config.scheme {
                WeightScheme::Product(w) => w.gammas(),
                other => {
                    return Err(Error::SchemeMismatch {
                        path: path.name(),
                        kind: other.kind(),
                    })
                }
            };
            let table = SinLogTable::new(n)?;
            let state = ProductStateTable::new(gammas, n, s, &table)?;
            run(n, s, &mut Fast::new(table, State::Product(state)), observer)?
        }
        Path::Auto => unreachable!("resolved above"),
    };
    let diagnostics = if config.diagnostics {
        diagnose(&config.scheme, &vector, &config.limits)?
    } else {
        Diagnostics::default()
    };
    Ok(Construction {
        vector,
        diagnostics,
        path,
    })
}

/// The construction on the fast POD path. Product weights are accepted and
/// run as POD weights with all `Γ_ℓ = 1`.
pub fn cbc_dbd_fast_pod(config: &ConstructionConfig) -> Result<Construction> {
    cbc_dbd(&config.clone().with_path(Path::FastPod))
}

/// The construction on the fast product path.
pub fn cbc_dbd_fast_product(config: &ConstructionConfig) -> Result<Construction> {
    cbc_dbd(&config.clone().with_path(Path::FastProduct))
}

trait Evaluator {
    /// Prepare for component `r` given `z_1, …, z_{r-1}`.
    fn begin(&mut self, earlier: &[u64]);
    /// `h_{r,n,v}` at both candidates.
    fn evaluate(&mut self, v: u32, candidates: [u64; 2]) -> Result<[f64; 2]>;
    /// Record the chosen digit `which` at level `v`.
    fn commit(&mut self, v: u32, which: usize) -> Result<()>;
}

fn run(
    n: u32,
    s: usize,
    eval: &mut dyn Evaluator,
    observer: &mut dyn FnMut(&StepRecord),
) -> Result<GeneratingVector> {
    let mut z = vec![1u64];
    let mut history = vec![vec![1u64; n as usize]];
    for r in 2..=s {
        eval.begin(&z);
        let mut digits = Vec::with_capacity(n as usize);
        let mut current = 1u64;
        digits.push(current);
        for v in 2..=n {
            let candidates = [current, current + (1u64 << (v - 1))];
            let values = eval.evaluate(v, candidates)?;
            let which = usize::from(!is_tie(values) && values[1] < values[0]);
            eval.commit(v, which)?;
            current = candidates[which];
            digits.push(current);
            observer(&StepRecord {
                component: r,
                level: v,
                earlier: &z,
                candidates,
                values,
                chosen: current,
            });
        }
        z.push(current);
        history.push(digits);
    }
    GeneratingVector::with_history(n, z, history)
}

fn is_tie(values: [f64; 2]) -> bool {
    (values[0] - values[1]).abs() <= TIE_TOLERANCE * values[0].abs().max(values[1].abs())
}

struct Naive<'c> {
    config: &'c ConstructionConfig,
    z: Vec<u64>,
}

impl Evaluator for Naive<'_> {
    fn begin(&mut self, earlier: &[u64]) {
        self.z = earlier.to_vec();
    }

    fn evaluate(&mut self, v: u32, candidates: [u64; 2]) -> Result<[f64; 2]> {
        let c = self.config;
        let r = self.z.len() + 1;
        let h = |x| h_naive(r, c.n, v, &c.scheme, &self.z, x, &c.limits);
        Ok([h(candidates[0])?, h(candidates[1])?])
    }

    fn commit(&mut self, _v: u32, _which: usize) -> Result<()> {
        Ok(())
    }
}

enum State {
    Pod(PodStateTable),
    Product(ProductStateTable),
}

struct Fast {
    table: SinLogTable,
    state: State,
    // level-v logarithms of both candidates, reused for the update
    levels: [Vec<f64>; 2],
}

impl Fast {
    fn new(table: SinLogTable, state: State) -> Self {
        let len = 1usize << (table.n() - 1);
        Fast {
            table,
            state,
            levels: [vec![0.0; len], vec![0.0; len]],
        }
    }
}

impl Evaluator for Fast {
    fn begin(&mut self, _earlier: &[u64]) {}

    fn evaluate(&mut self, v: u32, candidates: [u64; 2]) -> Result<[f64; 2]> {
        let len = 1usize << (v - 1);
        let mut values = [0.0; 2];
        for (i, &x) in candidates.iter().enumerate() {
            self.table.fill_level(x, v, &mut self.levels[i]);
            let lx = &self.levels[i][..len];
            values[i] = match &self.state {
                State::Pod(state) => state.h_with(v, lx)?,
                State::Product(state) => state.h_with(v, lx)?,
            };
        }
        Ok(values)
    }

    fn commit(&mut self, v: u32, which: usize) -> Result<()> {
        let w = &self.levels[which][..1usize << (v - 1)];
        match &mut self.state {
            State::Pod(state) => state.update_with(v, w),
            State::Product(state) => state.update_with(v, w),
        }
    }
}

/// `H`, its upper bound and the bound on the truncated error for a
/// constructed vector. `H` is skipped when it would need subset enumeration
/// beyond the caps.
fn diagnose(
    scheme: &WeightScheme,
    vector: &GeneratingVector,
    limits: &Limits,
) -> Result<Diagnostics> {
    let (n, s) = (vector.n(), vector.dimension());
    let mut diagnostics = Diagnostics::default();
    let factored = scheme.factored(s).is_some();
    let affordable = s <= limits.subset_cap && (s as u32 + n) <= 28;
    if factored || affordable {
        let h = h_direct(scheme, vector, limits)?;
        diagnostics.h_value = Some(h);
        diagnostics
            .bound_values
            .insert("thm2_rhs".to_string(), bounds::thm2_rhs(scheme, n, s, h, limits)?);
    }
    if factored || s <= limits.subset_cap {
        diagnostics.bound_values.insert(
            "h_upper_bound".to_string(),
            bounds::h_upper_bound(scheme, n, s, limits)?,
        );
    }
    Ok(diagnostics)
}
