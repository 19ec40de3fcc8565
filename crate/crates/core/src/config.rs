//! JSON system definitions.
//!
//! Complex matrices are nested row-major arrays of `[re, im]` pairs. A config
//! is either explicit (`lindblad_terms`, optional `hamiltonian`) or names a
//! built-in model under `builtin`:
//!
//! ```json
//! {"name": "v", "builtin": {"kind": "vsys", "gamma1": 1.0, "gamma2": 2.0}}
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::quantum::LindbladSystem;
use crate::{qubit, systems};

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &CMatrix) -> MatrixJson {
    m.row_iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

/// Parses a square complex matrix.
pub fn matrix_from_json(rows: &MatrixJson) -> Result<CMatrix> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::Config("empty matrix".into()));
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::Config(format!(
            "matrix is not square: {n} rows but a row of length {}",
            bad.len()
        )));
    }
    if rows.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(CMatrix::from_fn(n, n, |i, j| linalg::c(rows[i][j][0], rows[i][j][1])))
}

fn default_gamma1() -> f64 {
    1.0
}

fn default_gamma2() -> f64 {
    2.0
}

fn default_nu() -> f64 {
    0.5
}

/// Built-in models; rates default to (γ₁, γ₂) = (1, 2) and ν to 0.5.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Builtin {
    Lambda {
        #[serde(default = "default_gamma1")]
        gamma1: f64,
        #[serde(default = "default_gamma2")]
        gamma2: f64,
    },
    Vsys {
        #[serde(default = "default_gamma1")]
        gamma1: f64,
        #[serde(default = "default_gamma2")]
        gamma2: f64,
    },
    Spinspin,
    QubitRankOne {
        #[serde(default = "default_nu")]
        nu: f64,
    },
}

impl Builtin {
    pub fn build(&self) -> Result<LindbladSystem> {
        match *self {
            Builtin::Lambda { gamma1, gamma2 } => systems::make_lambda_system(gamma1, gamma2),
            Builtin::Vsys { gamma1, gamma2 } => systems::make_v_system(gamma1, gamma2),
            Builtin::Spinspin => Ok(systems::make_spin_spin()),
            Builtin::QubitRankOne { nu } => {
                if !(0.0..1.0).contains(&nu) {
                    return Err(Error::InvalidParameter(format!("ν must lie in [0, 1), got {nu}")));
                }
                LindbladSystem::dissipative(vec![qubit::v_tilde(nu)])
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lindblad_terms: Option<Vec<MatrixJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<Builtin>,
}

impl SystemConfig {
    pub fn builtin(name: &str, builtin: Builtin) -> Self {
        Self {
            name: Some(name.to_string()),
            dimension: None,
            hamiltonian: None,
            lindblad_terms: None,
            builtin: Some(builtin),
        }
    }

    pub fn explicit(name: &str, hamiltonian: Option<&CMatrix>, terms: &[CMatrix]) -> Self {
        Self {
            name: Some(name.to_string()),
            dimension: terms.first().map(|t| t.nrows()),
            hamiltonian: hamiltonian.map(matrix_to_json),
            lindblad_terms: Some(terms.iter().map(matrix_to_json).collect()),
            builtin: None,
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate_shape()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    fn validate_shape(&self) -> Result<()> {
        let explicit = self.lindblad_terms.is_some() || self.hamiltonian.is_some();
        match (explicit, self.builtin.is_some()) {
            (true, true) => Err(Error::Config(
                "give either explicit matrices or a builtin, not both".into(),
            )),
            (false, false) => Err(Error::Config(
                "config needs lindblad_terms or a builtin".into(),
            )),
            _ => Ok(()),
        }
    }

    pub fn build(&self) -> Result<LindbladSystem> {
        self.validate_shape()?;
        if let Some(builtin) = &self.builtin {
            let sys = builtin.build()?;
            if let Some(n) = self.dimension {
                if n != sys.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: sys.dim(),
                        got: n,
                    });
                }
            }
            return Ok(sys);
        }
        let terms = self
            .lindblad_terms
            .as_ref()
            .ok_or_else(|| Error::Config("missing lindblad_terms".into()))?
            .iter()
            .map(matrix_from_json)
            .collect::<Result<Vec<_>>>()?;
        let n = match (self.dimension, terms.first()) {
            (Some(n), _) => n,
            (None, Some(t)) => t.nrows(),
            (None, None) => return Err(Error::NoLindbladTerms),
        };
        let h0 = match &self.hamiltonian {
            Some(h) => matrix_from_json(h)?,
            None => linalg::zeros(n),
        };
        if h0.nrows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: h0.nrows(),
            });
        }
        LindbladSystem::new(h0, terms)
    }
}
