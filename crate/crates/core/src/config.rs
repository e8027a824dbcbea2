//! Session configuration files.
//!
//! A config names the fields, the codes, and the scheme parameters; data and
//! functions may be given explicitly or left out, in which case they are
//! sampled deterministically from the seed (on ChaCha streams far away from
//! the per-iteration mask streams).

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::field::{FieldElement, FieldSpec};
use crate::algebra::matrix::Matrix;
use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::polyspace::{Polynomial, QuerySpace};
use crate::scheme::replicated::ReplicatedConfig;
use crate::scheme::systematic::SystematicConfig;
use crate::simnet::SchemeConfig;
use crate::transcript::{poly_from_wire, CodeDescriptor, FieldDescriptor, PolyWire};

/// ChaCha streams reserved for data/function sampling; mask streams use the
/// iteration index, far below these.
const DATA_STREAM: u64 = 1 << 32;
const FUNCTIONS_STREAM: u64 = (1 << 32) + 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SessionConfig {
    /// "replicated" or "systematic".
    pub scheme: String,
    pub base_field: FieldDescriptor,
    /// Defaults to the base field.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ext_field: Option<FieldDescriptor>,
    pub n: usize,
    pub t: usize,
    /// Storage dimension; systematic scheme only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Block length. Replicated default: N−T. Systematic default: least
    /// B ≥ 1 with F | K·B.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<usize>,
    pub m_vars: usize,
    pub g: u32,
    /// Defaults to RS_T over α = [0..N) (repetition code when T = 1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retrieval_code: Option<CodeDescriptor>,
    /// Defaults to systematized RS_K over α = [0..N); systematic only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub storage_code: Option<CodeDescriptor>,
    pub seed: u64,
    /// Data matrix X as M rows of K element strings; sampled when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<Vec<Vec<String>>>,
    /// The B requested functions; sampled from the query space when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functions: Option<Vec<PolyWire>>,
}

/// A fully materialized session: scheme configuration, functions, and data.
pub struct LoadedSession {
    pub scheme: SchemeConfig,
    pub phis: Vec<Polynomial>,
    pub x: Matrix,
    pub seed: u64,
}

impl SessionConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("bad config JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    fn default_retrieval(&self, base: &Arc<FieldSpec>) -> Result<LinearCode> {
        if self.t == 1 {
            return LinearCode::repetition(self.n, base);
        }
        if (self.n as u64) > base.order() {
            return Err(Error::Config(format!(
                "no default [N={}, T={}] MDS code over {}; supply retrieval_code",
                self.n, self.t, base
            )));
        }
        let alpha: Vec<FieldElement> = (0..self.n as u64).map(|i| base.from_index(i)).collect();
        LinearCode::reed_solomon(&alpha, self.t)
    }

    fn default_storage(&self, base: &Arc<FieldSpec>, k: usize) -> Result<LinearCode> {
        if (self.n as u64) > base.order() {
            return Err(Error::Config(format!(
                "no default [N={}, K={k}] RS code over {}; supply storage_code",
                self.n, base
            )));
        }
        let alpha: Vec<FieldElement> = (0..self.n as u64).map(|i| base.from_index(i)).collect();
        LinearCode::reed_solomon(&alpha, k)?.to_systematic()
    }

    /// Materialize the session: build codes and scheme config, then parse or
    /// sample the data and functions.
    pub fn load(&self) -> Result<LoadedSession> {
        let base = self.base_field.to_field()?;
        let ext = match &self.ext_field {
            Some(d) => d.to_field()?,
            None => Arc::clone(&base),
        };
        let retrieval = match &self.retrieval_code {
            Some(d) => d.to_code()?,
            None => self.default_retrieval(&base)?,
        };
        let space = QuerySpace::polynomials(&base, self.m_vars, self.g)?;

        let scheme = match self.scheme.as_str() {
            "replicated" => {
                let b = self.b.unwrap_or(self.n - self.t);
                SchemeConfig::Replicated(ReplicatedConfig::new(
                    self.n,
                    self.t,
                    b,
                    space.clone(),
                    retrieval,
                    Arc::clone(&ext),
                )?)
            }
            "systematic" => {
                let storage = match &self.storage_code {
                    Some(d) => d.to_code()?,
                    None => {
                        let k = self.k.ok_or_else(|| {
                            Error::Config("systematic scheme needs k or storage_code".into())
                        })?;
                        self.default_storage(&base, k)?
                    }
                };
                if let Some(k) = self.k {
                    if storage.dimension() != k {
                        return Err(Error::Config(format!(
                            "k = {k} but storage code has dimension {}",
                            storage.dimension()
                        )));
                    }
                }
                SchemeConfig::Systematic(SystematicConfig::new(
                    storage,
                    retrieval,
                    self.g,
                    self.b,
                    self.m_vars,
                    Arc::clone(&ext),
                )?)
            }
            other => return Err(Error::Config(format!("unknown scheme {other:?}"))),
        };

        let (k_cols, b_len) = match &scheme {
            SchemeConfig::Replicated(cfg) => (1usize, cfg.block_length()),
            SchemeConfig::Systematic(cfg) => (cfg.columns(), cfg.block_length()),
        };

        let x = match &self.data {
            Some(rows) => {
                if rows.len() != self.m_vars || rows.iter().any(|r| r.len() != k_cols) {
                    return Err(Error::Config(format!(
                        "data must be {} rows of {} elements",
                        self.m_vars, k_cols
                    )));
                }
                let entries = rows
                    .iter()
                    .flat_map(|r| r.iter())
                    .map(|s| ext.parse_element(s))
                    .collect::<Result<Vec<_>>>()?;
                Matrix::new(Arc::clone(&ext), self.m_vars, k_cols, entries)?
            }
            None => {
                let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
                rng.set_stream(DATA_STREAM);
                let entries: Vec<FieldElement> = (0..self.m_vars * k_cols)
                    .map(|_| ext.from_index(rng.random_range(0..ext.order())))
                    .collect();
                Matrix::new(Arc::clone(&ext), self.m_vars, k_cols, entries)?
            }
        };

        let phis = match &self.functions {
            Some(wires) => {
                if wires.len() != b_len {
                    return Err(Error::Config(format!(
                        "expected {} functions, found {}",
                        b_len,
                        wires.len()
                    )));
                }
                wires
                    .iter()
                    .map(|w| {
                        let poly = poly_from_wire(&base, self.m_vars, w)?;
                        if !space.contains(&poly) {
                            return Err(Error::QueryOutsideSpace);
                        }
                        Ok(poly)
                    })
                    .collect::<Result<Vec<_>>>()?
            }
            None => {
                let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
                rng.set_stream(FUNCTIONS_STREAM);
                (0..b_len).map(|_| space.sample_uniform(&mut rng)).collect()
            }
        };

        Ok(LoadedSession {
            scheme,
            phis,
            x,
            seed: self.seed,
        })
    }
}
