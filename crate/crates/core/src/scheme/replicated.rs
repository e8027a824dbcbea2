//! T-private computation of replicated data.
//!
//! Every server stores a copy of the data column X. An iteration masks the
//! next N−T requested functions, sends ρ_n = ψ_n + φ_n to the first N−T
//! servers and the bare mask to the rest, and recovers the wanted values by
//! right-multiplying the response row with the systematic parity check of
//! the retrieval code: the mask contribution ψ(X) lies in D_K and is
//! annihilated. B functions take S = B/(N−T) iterations, for download rate
//! (N−T)/N.

use std::sync::Arc;

use num_rational::Ratio;

use crate::algebra::field::{FieldElement, FieldSpec};
use crate::algebra::matrix::Matrix;
use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::polyspace::{Polynomial, QuerySpace};
use crate::scheme::{make_masks, mask_rng, MaskSet};
use crate::simnet::{encode_storage, serve_query, ServerState};
use crate::transcript::{
    self, AccountingWire, CodeDescriptor, FieldDescriptor, IterationRecord, RateWire,
    SessionTranscript,
};

/// Configuration of the replicated scheme.
#[derive(Clone, Debug)]
pub struct ReplicatedConfig {
    n: usize,
    t: usize,
    b: usize,
    space: QuerySpace,
    retrieval_code: LinearCode,
    ext_field: Arc<FieldSpec>,
}

impl ReplicatedConfig {
    /// Validates: 1 ≤ T < N, the retrieval code is an [N, T] MDS code over
    /// the query space's base field, N−T divides B, and the extension field
    /// admits the base field's coefficients.
    pub fn new(
        n: usize,
        t: usize,
        b: usize,
        space: QuerySpace,
        retrieval_code: LinearCode,
        ext_field: Arc<FieldSpec>,
    ) -> Result<Self> {
        if t < 1 || t >= n {
            return Err(Error::Config(format!("need 1 <= T < N, got T={t}, N={n}")));
        }
        if retrieval_code.field() != space.field() {
            return Err(Error::OwnerMismatch);
        }
        if retrieval_code.length() != n || retrieval_code.dimension() != t {
            return Err(Error::Config(format!(
                "retrieval code is [{}, {}], expected [{n}, {t}]",
                retrieval_code.length(),
                retrieval_code.dimension()
            )));
        }
        if !retrieval_code.is_mds()? {
            return Err(Error::Config("retrieval code is not MDS".into()));
        }
        if b == 0 || !b.is_multiple_of(n - t) {
            return Err(Error::Config(format!(
                "N−T = {} must divide B = {b}",
                n - t
            )));
        }
        let base = space.field();
        if ext_field.characteristic() != base.characteristic() {
            return Err(Error::CharacteristicMismatch(
                base.characteristic(),
                ext_field.characteristic(),
            ));
        }
        if !base.is_prime_field() && base != &ext_field {
            return Err(Error::Config(
                "base field must be prime or equal to the extension field".into(),
            ));
        }
        Ok(ReplicatedConfig {
            n,
            t,
            b,
            space,
            retrieval_code,
            ext_field,
        })
    }

    pub fn servers(&self) -> usize {
        self.n
    }

    pub fn collusion(&self) -> usize {
        self.t
    }

    pub fn block_length(&self) -> usize {
        self.b
    }

    /// Functions recovered per iteration.
    pub fn per_iteration(&self) -> usize {
        self.n - self.t
    }

    pub fn iterations(&self) -> usize {
        self.b / (self.n - self.t)
    }

    pub fn space(&self) -> &QuerySpace {
        &self.space
    }

    pub fn retrieval_code(&self) -> &LinearCode {
        &self.retrieval_code
    }

    pub fn ext_field(&self) -> &Arc<FieldSpec> {
        &self.ext_field
    }

    /// Exact download rate (N−T)/N.
    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new((self.n - self.t) as u64, self.n as u64)
    }

    /// Which function index server `server` carries during `iteration`,
    /// if any. The first N−T servers carry the batch, in order.
    pub fn assigned_function(&self, iteration: usize, server: usize) -> Option<usize> {
        if server < self.n - self.t {
            Some(iteration * (self.n - self.t) + server)
        } else {
            None
        }
    }
}

/// ρ_n = ψ_n + φ_n for n ≤ N−T, else ρ_n = ψ_n. The batch holds exactly the
/// N−T functions of the current iteration.
pub fn build_queries(masks: &MaskSet, batch: &[Polynomial]) -> Result<Vec<Polynomial>> {
    let n = masks.masks().len();
    if batch.len() > n {
        return Err(Error::BatchSizeMismatch {
            expected: n,
            got: batch.len(),
        });
    }
    masks
        .masks()
        .iter()
        .enumerate()
        .map(|(i, psi)| match batch.get(i) {
            Some(phi) => psi.add(phi),
            None => Ok(psi.clone()),
        })
        .collect()
}

/// Recover [φ_1(X), …, φ_{N−T}(X)] from the total response row by
/// right-multiplying the systematic parity check of D (embedded into the
/// extension field). The mask contribution lies in D_K and vanishes.
pub fn decode_responses(
    responses: &[FieldElement],
    h_systematic: &Matrix,
) -> Result<Vec<FieldElement>> {
    if responses.len() != h_systematic.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{} responses for a parity check with {} rows",
            responses.len(),
            h_systematic.rows()
        )));
    }
    h_systematic.row_vec_mul(responses)
}

/// Outcome of a full replicated session.
pub struct ReplicatedRun {
    /// φ_b(X) for b = 1..B, in request order.
    pub values: Vec<FieldElement>,
    pub transcript: SessionTranscript,
}

/// Execute the full scheme: S = B/(N−T) iterations with fresh independent
/// masks per iteration (ChaCha stream = iteration index under the session
/// seed).
pub fn run_replicated(
    config: &ReplicatedConfig,
    phis: &[Polynomial],
    x: &[FieldElement],
    seed: u64,
) -> Result<ReplicatedRun> {
    if phis.len() != config.b {
        return Err(Error::BatchSizeMismatch {
            expected: config.b,
            got: phis.len(),
        });
    }
    for phi in phis {
        if !config.space.contains(phi) {
            return Err(Error::QueryOutsideSpace);
        }
    }
    if x.len() != config.space.num_vars() {
        return Err(Error::ArityMismatch {
            expected: config.space.num_vars(),
            got: x.len(),
        });
    }
    let ext = &config.ext_field;
    let x_matrix = Matrix::new(Arc::clone(ext), x.len(), 1, x.to_vec())?;
    let rep_code = LinearCode::repetition(config.n, config.space.field())?;
    let servers: Vec<ServerState> = encode_storage(&x_matrix, &rep_code)?;

    let h = config.retrieval_code.systematic_parity_check()?;
    let h_ext = h.embed_into(ext)?;

    let per_iter = config.per_iteration();
    let s_count = config.iterations();
    let mut values = Vec::with_capacity(config.b);
    let mut records = Vec::with_capacity(s_count);
    for s in 0..s_count {
        let mut rng = mask_rng(seed, s as u64);
        let masks = make_masks(&config.retrieval_code, &config.space, &mut rng)?;
        let batch = &phis[s * per_iter..(s + 1) * per_iter];
        let queries = build_queries(&masks, batch)?;
        let responses = servers
            .iter()
            .zip(&queries)
            .map(|(srv, q)| serve_query(srv, q))
            .collect::<Result<Vec<_>>>()?;
        let decoded = decode_responses(&responses, &h_ext)?;
        records.push(IterationRecord {
            codewords: masks
                .codewords()
                .iter()
                .map(|cw| transcript::elements_to_strings(cw))
                .collect::<Result<Vec<_>>>()?,
            queries: queries
                .iter()
                .map(transcript::poly_to_wire)
                .collect::<Result<Vec<_>>>()?,
            responses: transcript::elements_to_strings(&responses)?,
            syndrome: None,
            decoded: transcript::elements_to_strings(&decoded)?,
        });
        values.extend(decoded);
    }

    let q_dim = config.space.dimension();
    let accounting = AccountingWire {
        uploaded_base_symbols: (s_count * config.n * q_dim) as u64,
        downloaded_ext_symbols: (s_count * config.n) as u64,
        iterations: s_count as u64,
    };
    let transcript = SessionTranscript {
        scheme: "replicated".into(),
        seed,
        base_field: FieldDescriptor::of(config.space.field()),
        ext_field: FieldDescriptor::of(ext),
        n: config.n,
        t: config.t,
        k: 1,
        b: config.b,
        m_vars: config.space.num_vars(),
        g: config.space.degree_bound(),
        q_dim,
        retrieval_code: CodeDescriptor::of(&config.retrieval_code)?,
        storage_code: None,
        response_code: None,
        f: None,
        schedule: None,
        functions: phis
            .iter()
            .map(transcript::poly_to_wire)
            .collect::<Result<Vec<_>>>()?,
        data: x
            .iter()
            .map(|e| Ok(vec![e.canonical_text()?]))
            .collect::<Result<Vec<_>>>()?,
        iterations: records,
        values: values
            .iter()
            .map(|v| Ok(vec![v.canonical_text()?]))
            .collect::<Result<Vec<_>>>()?,
        accounting,
        // KB/(NS) with K = 1 reduces exactly to (N−T)/N.
        rate: RateWire::of(Ratio::new(config.b as u64, (config.n * s_count) as u64)),
    };
    Ok(ReplicatedRun { values, transcript })
}
