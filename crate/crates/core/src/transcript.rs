//! JSON wire formats: field and code descriptors, polynomial encoding,
//! session transcripts, and accounting.
//!
//! Field elements travel as their canonical text encoding (base-p digits,
//! little-endian, no separators). Struct field order is fixed, so a
//! transcript serialized twice from the same session is byte-identical.

use std::sync::Arc;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::algebra::field::{FieldElement, FieldSpec};
use crate::algebra::matrix::Matrix;
use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::polyspace::{Monomial, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u64,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
}

impl FieldDescriptor {
    pub fn of(field: &FieldSpec) -> Self {
        FieldDescriptor {
            p: field.characteristic(),
            m: field.degree(),
            modulus: if field.degree() > 1 {
                Some(field.modulus().to_vec())
            } else {
                None
            },
        }
    }

    pub fn to_field(&self) -> Result<Arc<FieldSpec>> {
        match &self.modulus {
            Some(q) => FieldSpec::with_modulus(self.p, self.m, q.clone()),
            None if self.m == 1 => FieldSpec::prime(self.p),
            None => FieldSpec::extension(self.p, self.m),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDescriptor {
    pub field: FieldDescriptor,
    pub n: usize,
    pub k: usize,
    /// Row-major canonical element strings.
    pub generator: Vec<String>,
    /// "generic" or "rs".
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<String>>,
}

impl CodeDescriptor {
    pub fn of(code: &LinearCode) -> Result<Self> {
        let generator = code
            .generator()
            .rows_iter()
            .flat_map(|row| row.iter())
            .map(FieldElement::canonical_text)
            .collect::<Result<Vec<_>>>()?;
        let alpha = match code.rs_alpha() {
            Some(a) => Some(
                a.iter()
                    .map(FieldElement::canonical_text)
                    .collect::<Result<Vec<_>>>()?,
            ),
            None => None,
        };
        Ok(CodeDescriptor {
            field: FieldDescriptor::of(code.field()),
            n: code.length(),
            k: code.dimension(),
            generator,
            kind: if alpha.is_some() { "rs" } else { "generic" }.into(),
            alpha,
        })
    }

    pub fn to_code(&self) -> Result<LinearCode> {
        let field = self.field.to_field()?;
        if self.generator.len() != self.n * self.k {
            return Err(Error::Config(format!(
                "generator needs {} entries, found {}",
                self.n * self.k,
                self.generator.len()
            )));
        }
        let entries = self
            .generator
            .iter()
            .map(|s| field.parse_element(s))
            .collect::<Result<Vec<_>>>()?;
        let gen = Matrix::new(Arc::clone(&field), self.k, self.n, entries)?;
        match (&self.alpha, self.kind.as_str()) {
            (Some(alpha), "rs") => {
                let alpha = alpha
                    .iter()
                    .map(|s| field.parse_element(s))
                    .collect::<Result<Vec<_>>>()?;
                // Rebuild through the RS constructor to validate alpha, then
                // check the stored generator spans the same code.
                let rs = LinearCode::reed_solomon(&alpha, self.k)?;
                let given = LinearCode::from_generator(gen)?;
                if given != rs {
                    return Err(Error::Config(
                        "generator does not span the declared RS code".into(),
                    ));
                }
                // Keep the declared generator (it may be e.g. systematic).
                Ok(given.with_rs_alpha(alpha))
            }
            (None, "generic") => LinearCode::from_generator(gen),
            _ => Err(Error::Config(
                "kind \"rs\" requires alpha and vice versa".into(),
            )),
        }
    }
}

pub type PolyWire = Vec<PolyTermWire>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyTermWire {
    pub exponents: Vec<u32>,
    pub coeff: String,
}

pub fn poly_to_wire(poly: &Polynomial) -> Result<PolyWire> {
    poly.terms()
        .map(|(m, c)| {
            Ok(PolyTermWire {
                exponents: m.exponents().to_vec(),
                coeff: c.canonical_text()?,
            })
        })
        .collect()
}

pub fn poly_from_wire(
    field: &Arc<FieldSpec>,
    num_vars: usize,
    wire: &[PolyTermWire],
) -> Result<Polynomial> {
    let terms = wire
        .iter()
        .map(|t| {
            Ok((
                Monomial::new(t.exponents.clone()),
                field.parse_element(&t.coeff)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Polynomial::from_terms(field, num_vars, terms)
}

pub fn elements_to_strings(elems: &[FieldElement]) -> Result<Vec<String>> {
    elems.iter().map(FieldElement::canonical_text).collect()
}

pub fn elements_from_strings(
    field: &Arc<FieldSpec>,
    texts: &[String],
) -> Result<Vec<FieldElement>> {
    texts.iter().map(|s| field.parse_element(s)).collect()
}

/// Exact rational rendered as "p/q" plus a decimal aid for plotting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateWire {
    pub fraction: String,
    pub decimal: f64,
}

impl RateWire {
    pub fn of(rate: Ratio<u64>) -> Self {
        RateWire {
            fraction: format!("{}/{}", rate.numer(), rate.denom()),
            decimal: *rate.numer() as f64 / *rate.denom() as f64,
        }
    }

    pub fn to_ratio(&self) -> Result<Ratio<u64>> {
        let (n, d) = self
            .fraction
            .split_once('/')
            .ok_or_else(|| Error::Config(format!("bad rate {:?}", self.fraction)))?;
        let n: u64 = n.parse().map_err(|_| Error::Config("bad rate".into()))?;
        let d: u64 = d.parse().map_err(|_| Error::Config("bad rate".into()))?;
        Ok(Ratio::new(n, d))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccountingWire {
    /// Base-field symbols sent to servers: S·N·Q.
    pub uploaded_base_symbols: u64,
    /// Extension-field symbols received: S·N.
    pub downloaded_ext_symbols: u64,
    pub iterations: u64,
}

/// One slot of the systematic schedule (1-based, matching server/function
/// numbering on the wire).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotWire {
    pub server: usize,
    pub function: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationRecord {
    /// The Q retrieval-code codeword draws, each N element strings.
    pub codewords: Vec<Vec<String>>,
    /// Queries ρ_1..ρ_N in wire format.
    pub queries: Vec<PolyWire>,
    /// Responses ρ_n(y_n), N extension-field element strings.
    pub responses: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub syndrome: Option<Vec<String>>,
    /// Values decoded this iteration.
    pub decoded: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionTranscript {
    pub scheme: String,
    pub seed: u64,
    pub base_field: FieldDescriptor,
    pub ext_field: FieldDescriptor,
    pub n: usize,
    pub t: usize,
    pub k: usize,
    pub b: usize,
    pub m_vars: usize,
    pub g: u32,
    pub q_dim: usize,
    pub retrieval_code: CodeDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub storage_code: Option<CodeDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub response_code: Option<CodeDescriptor>,
    /// Values decoded per iteration in the systematic scheme.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<Vec<SlotWire>>>,
    /// The requested functions φ_1..φ_B.
    pub functions: Vec<PolyWire>,
    /// The data matrix X, M rows of K element strings.
    pub data: Vec<Vec<String>>,
    pub iterations: Vec<IterationRecord>,
    /// Decoded values φ_b(x_k): B rows of K element strings (K = 1 for the
    /// replicated scheme).
    pub values: Vec<Vec<String>>,
    pub accounting: AccountingWire,
    pub rate: RateWire,
}

/// Query message sent to one server.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryMessage {
    pub server: usize,
    pub query: PolyWire,
}

/// Response message from one server.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResponseMessage {
    pub server: usize,
    pub value: String,
}
