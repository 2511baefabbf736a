//! JSON weight specifications, vector files and number formatting.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use cbcdbd_core::lattice::{Diagnostics, GeneratingVector};
use cbcdbd_core::weights::{GeneralWeights, PodWeights, ProductWeights, WeightScheme};
use cbcdbd_core::{Limits, Subset};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKind {
    Product,
    Pod,
    General,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubsetValue {
    pub subset: Vec<usize>,
    pub value: f64,
}

/// On-disk weight specification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSpec {
    pub kind: WeightKind,
    pub s_max: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gammas: Option<Vec<f64>>,
    #[serde(rename = "Gammas", default, skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<SubsetValue>>,
}

fn schema(path: &Path, message: impl Into<String>) -> CliError {
    CliError::Schema {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

impl WeightSpec {
    /// Builds the weight scheme, checking that exactly the fields of the
    /// declared kind are present and consistent with `s_max`.
    pub fn to_scheme(&self, limits: &Limits, origin: &Path) -> Result<WeightScheme> {
        let fail = |m: &str| schema(origin, m);
        let want_len = |v: &Option<Vec<f64>>, field: &str, len: usize| -> Result<Vec<f64>> {
            match v {
                Some(v) if v.len() == len => Ok(v.clone()),
                Some(v) => Err(fail(&format!(
                    "\"{field}\" has {} entries, expected {len}",
                    v.len()
                ))),
                None => Err(fail(&format!("\"{field}\" is required for this kind"))),
            }
        };
        let scheme = match self.kind {
            WeightKind::Product => {
                if self.orders.is_some() || self.values.is_some() {
                    return Err(fail("product weights take only \"gammas\""));
                }
                let g = want_len(&self.gammas, "gammas", self.s_max)?;
                ProductWeights::new(g)?.into()
            }
            WeightKind::Pod => {
                if self.values.is_some() {
                    return Err(fail("POD weights take \"gammas\" and \"Gammas\""));
                }
                let g = want_len(&self.gammas, "gammas", self.s_max)?;
                let orders = want_len(&self.orders, "Gammas", self.s_max + 1)?;
                PodWeights::new(orders, g)?.into()
            }
            WeightKind::General => {
                if self.gammas.is_some() || self.orders.is_some() {
                    return Err(fail("general weights take only \"values\""));
                }
                let values = self
                    .values
                    .as_ref()
                    .ok_or_else(|| fail("\"values\" is required for general weights"))?;
                let entries = values
                    .iter()
                    .map(|e| Ok((Subset::from_components(&e.subset)?, e.value)))
                    .collect::<Result<Vec<_>>>()?;
                GeneralWeights::from_entries(self.s_max, entries, limits)?.into()
            }
        };
        Ok(scheme)
    }

    /// The specification of a product, POD or general scheme.
    pub fn from_scheme(scheme: &WeightScheme) -> Option<Self> {
        Some(match scheme {
            WeightScheme::Product(w) => WeightSpec {
                kind: WeightKind::Product,
                s_max: w.s_max(),
                gammas: Some(w.gammas().to_vec()),
                orders: None,
                values: None,
            },
            WeightScheme::Pod(w) => WeightSpec {
                kind: WeightKind::Pod,
                s_max: w.s_max(),
                gammas: Some(w.gammas().to_vec()),
                orders: Some(w.orders().to_vec()),
                values: None,
            },
            WeightScheme::General(w) => WeightSpec {
                kind: WeightKind::General,
                s_max: w.s_max(),
                gammas: None,
                orders: None,
                values: Some(
                    w.entries()
                        .map(|(u, value)| SubsetValue {
                            subset: u.components().collect(),
                            value,
                        })
                        .collect(),
                ),
            },
            WeightScheme::Shifted(_) => return None,
        })
    }
}

pub fn load_weights(path: &Path, limits: &Limits) -> Result<WeightScheme> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let spec: WeightSpec =
        serde_json::from_str(&text).map_err(|e| schema(path, e.to_string()))?;
    spec.to_scheme(limits, path)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsFile {
    #[serde(rename = "T_value", default)]
    pub t_value: Option<f64>,
    #[serde(rename = "H_value", default)]
    pub h_value: Option<f64>,
    #[serde(default)]
    pub dual_error: Option<f64>,
    #[serde(default)]
    pub bound_values: BTreeMap<String, f64>,
    #[serde(default)]
    pub timing: BTreeMap<String, f64>,
}

impl From<&Diagnostics> for DiagnosticsFile {
    fn from(d: &Diagnostics) -> Self {
        DiagnosticsFile {
            t_value: d.t_value,
            h_value: d.h_value,
            dual_error: d.dual_error,
            bound_values: d.bound_values.clone(),
            timing: d.timing.clone(),
        }
    }
}

/// A generating vector with its digit history and diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorFile {
    pub n: u32,
    #[serde(rename = "N")]
    pub modulus: u64,
    pub z: Vec<u64>,
    #[serde(default)]
    pub digit_history: Option<Vec<Vec<u64>>>,
    #[serde(default)]
    pub diagnostics: Option<DiagnosticsFile>,
}

impl VectorFile {
    pub fn new(gv: &GeneratingVector, diagnostics: Option<&Diagnostics>) -> Self {
        VectorFile {
            n: gv.n(),
            modulus: gv.modulus(),
            z: gv.components().to_vec(),
            digit_history: gv.digit_history().map(<[_]>::to_vec),
            diagnostics: diagnostics.map(DiagnosticsFile::from),
        }
    }

    pub fn to_vector(&self, origin: &Path) -> Result<GeneratingVector> {
        if self.n == 0 || self.n > cbcdbd_core::MAX_DIGITS || self.modulus != 1u64 << self.n {
            return Err(schema(origin, format!("\"N\" must equal 2^n, got N = {} with n = {}", self.modulus, self.n)));
        }
        let gv = match &self.digit_history {
            Some(history) => GeneratingVector::with_history(self.n, self.z.clone(), history.clone())?,
            None => GeneratingVector::new(self.n, self.z.clone())?,
        };
        Ok(gv)
    }
}

pub fn load_vector(path: &Path) -> Result<GeneratingVector> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let file: VectorFile =
        serde_json::from_str(&text).map_err(|e| schema(path, e.to_string()))?;
    file.to_vector(path)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// A double with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}
