//! JSON exchange format for tensors.
//!
//! ```json
//! {"kind": "circulant", "order": 3, "dim": 2, "root": [1, -1, -1, 3]}
//! {"kind": "dense", "order": 2, "dim": 2, "entries": [2, 1, 1, 2]}
//! {"kind": "diag_root", "order": 4, "c": [1, 1]}
//! ```
//!
//! Entries are row-major. Values may be JSON numbers or decimal strings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special_root::DiagRootSpec;
use crate::tensor::{is_circulant, CirculantTensor, DenseTensor, Tensor};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Num {
    Number(f64),
    Text(String),
}

impl Num {
    fn value(&self) -> Result<f64> {
        let v = match self {
            Num::Number(v) => *v,
            Num::Text(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("not a number: {s:?}")))?,
        };
        if !v.is_finite() {
            return Err(Error::Parse(format!("non-finite value {v}")));
        }
        Ok(v)
    }
}

fn values(raw: &[Num]) -> Result<Vec<f64>> {
    raw.iter().map(Num::value).collect()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum Doc {
    Circulant {
        order: usize,
        dim: usize,
        root: Vec<Num>,
    },
    Dense {
        order: usize,
        dim: usize,
        entries: Vec<Num>,
    },
    DiagRoot {
        order: usize,
        c: Vec<Num>,
    },
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum DocOut<'a> {
    Circulant {
        order: usize,
        dim: usize,
        root: &'a [f64],
    },
    Dense {
        order: usize,
        dim: usize,
        entries: &'a [f64],
    },
    DiagRoot {
        order: usize,
        c: &'a [f64],
    },
}

/// A parsed tensor document.
#[derive(Debug, Clone, PartialEq)]
pub enum TensorInput {
    Circulant(CirculantTensor),
    Dense(DenseTensor),
    DiagRoot(DiagRootSpec),
}

impl TensorInput {
    pub fn parse(json: &str) -> Result<Self> {
        let doc: Doc = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(match doc {
            Doc::Circulant { order, dim, root } => TensorInput::Circulant(
                CirculantTensor::from_root_entries(order, dim, values(&root)?)?,
            ),
            Doc::Dense {
                order,
                dim,
                entries,
            } => TensorInput::Dense(DenseTensor::new(order, dim, values(&entries)?)?),
            Doc::DiagRoot { order, c } => {
                TensorInput::DiagRoot(DiagRootSpec::new(order, values(&c)?)?)
            }
        })
    }

    pub fn order(&self) -> usize {
        match self {
            TensorInput::Circulant(a) => a.order(),
            TensorInput::Dense(t) => t.order(),
            TensorInput::DiagRoot(s) => s.order,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            TensorInput::Circulant(a) => a.dim(),
            TensorInput::Dense(t) => t.dim(),
            TensorInput::DiagRoot(s) => s.dim(),
        }
    }

    /// The circulant form of the input: always available for circulant and
    /// diagonal-root documents, and for dense documents that are exactly
    /// circulant.
    pub fn to_circulant(&self) -> Result<Option<CirculantTensor>> {
        Ok(match self {
            TensorInput::Circulant(a) => Some(a.clone()),
            TensorInput::DiagRoot(s) => Some(s.expand()),
            TensorInput::Dense(t) if is_circulant(t, 0.0) => Some(CirculantTensor::project(t)?),
            TensorInput::Dense(_) => None,
        })
    }

    pub fn to_dense(&self, budget: usize) -> Result<DenseTensor> {
        match self {
            TensorInput::Circulant(a) => a.to_dense(budget),
            TensorInput::Dense(t) => Ok(t.clone()),
            TensorInput::DiagRoot(s) => s.expand().to_dense(budget),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

impl Serialize for TensorInput {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match self {
            TensorInput::Circulant(a) => DocOut::Circulant {
                order: a.order(),
                dim: a.dim(),
                root: a.root().entries(),
            },
            TensorInput::Dense(t) => DocOut::Dense {
                order: t.order(),
                dim: t.dim(),
                entries: t.entries(),
            },
            TensorInput::DiagRoot(s) => DocOut::DiagRoot {
                order: s.order,
                c: &s.c,
            },
        }
        .serialize(serializer)
    }
}
