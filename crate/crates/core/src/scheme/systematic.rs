//! T-private polynomial computation of systematically encoded data.
//!
//! The data matrix X is spread over N servers by a systematic [N, K] storage
//! code C, so server k ≤ K holds the raw column x_k. Queries are degree-≤G
//! polynomials. The mask contribution of every response row lies in the
//! response code E = C^{⋆G} ⋆ D, so after multiplying by a parity check of E
//! the requested values survive as "errors in prescribed positions": with
//! F = min{D_E−1, K} values injected per iteration, the corresponding F rows
//! of H_E stay linearly independent and the syndrome system has a unique
//! solution. Iterations walk the B×K value matrix F slots at a time in
//! row-major order, wrapping from the last systematic server back to the
//! first, for S = KB/F iterations and rate F/N.

use std::sync::Arc;

use num_rational::Ratio;

use crate::algebra::field::{FieldElement, FieldSpec};
use crate::algebra::matrix::{solve_row_system, Matrix};
use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::polyspace::{Polynomial, QuerySpace};
use crate::scheme::{make_masks, mask_rng, MaskSet};
use crate::simnet::{encode_storage, serve_query, ServerState};
use crate::transcript::{
    self, AccountingWire, CodeDescriptor, FieldDescriptor, IterationRecord, RateWire,
    SessionTranscript, SlotWire,
};

/// E = C^{⋆G} ⋆ D over the base field. Requires rep(N) ⊆ C, which guarantees
/// C^{Q} = (C_K)^{⋆G} for the polynomial query space; the extension of E to
/// K reuses the same generator and parity check.
pub fn response_code(storage: &LinearCode, retrieval: &LinearCode, g: u32) -> Result<LinearCode> {
    if storage.field() != retrieval.field() {
        return Err(Error::OwnerMismatch);
    }
    if storage.length() != retrieval.length() {
        return Err(Error::DimensionMismatch(format!(
            "storage length {} vs retrieval length {}",
            storage.length(),
            retrieval.length()
        )));
    }
    if !storage.contains_repetition() {
        return Err(Error::Config(
            "storage code must contain the repetition code (C ⊆ C ⋆ C)".into(),
        ));
    }
    storage.star_power(g as usize)?.star_product(retrieval)
}

/// F = min{D_E − 1, K}: the number of values each iteration can carry.
pub fn compute_f(response: &LinearCode, k: usize) -> Result<usize> {
    let d_e = response.min_distance()?;
    let f = (d_e - 1).min(k);
    if f == 0 {
        return Err(Error::InfeasibleConfiguration(
            "response code has minimum distance 1; no values can be decoded".into(),
        ));
    }
    Ok(f)
}

/// Row-major walk over the B×K value matrix, F slots per iteration:
/// global slot t ∈ [0, KB) maps to function b = t div K, server k = t mod K
/// (0-based), and iteration s handles slots [sF, (s+1)F).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchedulePlan {
    k: usize,
    b: usize,
    f: usize,
    /// Per-iteration (server, function) pairs, 0-based, exactly F each.
    iterations: Vec<Vec<(usize, usize)>>,
}

impl SchedulePlan {
    pub fn iteration_count(&self) -> usize {
        self.iterations.len()
    }

    pub fn per_iteration(&self) -> usize {
        self.f
    }

    /// The (server, function) pairs of one iteration, 0-based.
    pub fn assignment(&self, iteration: usize) -> &[(usize, usize)] {
        &self.iterations[iteration]
    }

    pub fn iterations(&self) -> &[Vec<(usize, usize)>] {
        &self.iterations
    }

    pub fn to_wire(&self) -> Vec<Vec<SlotWire>> {
        self.iterations
            .iter()
            .map(|it| {
                it.iter()
                    .map(|&(server, function)| SlotWire {
                        server: server + 1,
                        function: function + 1,
                    })
                    .collect()
            })
            .collect()
    }

    pub fn from_wire(wire: &[Vec<SlotWire>], k: usize, b: usize) -> Result<SchedulePlan> {
        let f = wire.first().map_or(0, Vec::len);
        let iterations = wire
            .iter()
            .map(|it| {
                it.iter()
                    .map(|s| {
                        if s.server == 0 || s.function == 0 {
                            return Err(Error::Config("schedule indices are 1-based".into()));
                        }
                        Ok((s.server - 1, s.function - 1))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SchedulePlan {
            k,
            b,
            f,
            iterations,
        })
    }
}

/// S = KB/F iterations covering every (function, server) pair exactly once.
pub fn build_schedule(k: usize, b: usize, f: usize) -> Result<SchedulePlan> {
    if k == 0 || b == 0 || f == 0 {
        return Err(Error::Config("schedule needs K, B, F >= 1".into()));
    }
    if f > k {
        return Err(Error::Config(format!("F = {f} cannot exceed K = {k}")));
    }
    if !(k * b).is_multiple_of(f) {
        return Err(Error::InfeasibleConfiguration(format!(
            "F = {f} must divide K·B = {}",
            k * b
        )));
    }
    let s = k * b / f;
    let iterations = (0..s)
        .map(|iter| {
            (iter * f..(iter + 1) * f)
                .map(|slot| (slot % k, slot / k))
                .collect()
        })
        .collect();
    Ok(SchedulePlan {
        k,
        b,
        f,
        iterations,
    })
}

/// Configuration of the systematic scheme, with the derived response code,
/// F, and schedule.
#[derive(Clone, Debug)]
pub struct SystematicConfig {
    storage_code: LinearCode,
    retrieval_code: LinearCode,
    space: QuerySpace,
    ext_field: Arc<FieldSpec>,
    b: usize,
    response_code: LinearCode,
    f: usize,
    schedule: SchedulePlan,
}

impl SystematicConfig {
    /// Validates the storage code (systematic, contains the repetition
    /// code), the retrieval code ([N, T] MDS, same field), computes
    /// E = C^{⋆G} ⋆ D and F = min{D_E−1, K}, and builds the schedule.
    /// When `b` is None, the least B ≥ 1 with F | K·B is chosen.
    pub fn new(
        storage_code: LinearCode,
        retrieval_code: LinearCode,
        g: u32,
        b: Option<usize>,
        m_vars: usize,
        ext_field: Arc<FieldSpec>,
    ) -> Result<Self> {
        if !storage_code.is_systematic() {
            return Err(Error::Config(
                "storage code must be systematic (left K×K identity)".into(),
            ));
        }
        if retrieval_code.field() != storage_code.field() {
            return Err(Error::OwnerMismatch);
        }
        if retrieval_code.length() != storage_code.length() {
            return Err(Error::DimensionMismatch("code length mismatch".into()));
        }
        if !retrieval_code.is_mds()? {
            return Err(Error::Config("retrieval code is not MDS".into()));
        }
        let base = storage_code.field();
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
        let space = QuerySpace::polynomials(base, m_vars, g)?;
        let response = response_code(&storage_code, &retrieval_code, g)?;
        let k = storage_code.dimension();
        let f = compute_f(&response, k)?;
        let b = match b {
            Some(b) => {
                if b == 0 || !(k * b).is_multiple_of(f) {
                    return Err(Error::InfeasibleConfiguration(format!(
                        "F = {f} must divide K·B = {}",
                        k * b
                    )));
                }
                b
            }
            None => (1..)
                .find(|b| (k * b).is_multiple_of(f))
                .expect("b <= f works"),
        };
        let schedule = build_schedule(k, b, f)?;
        Ok(SystematicConfig {
            storage_code,
            retrieval_code,
            space,
            ext_field,
            b,
            response_code: response,
            f,
            schedule,
        })
    }

    pub fn storage_code(&self) -> &LinearCode {
        &self.storage_code
    }

    pub fn retrieval_code(&self) -> &LinearCode {
        &self.retrieval_code
    }

    pub fn response_code(&self) -> &LinearCode {
        &self.response_code
    }

    pub fn space(&self) -> &QuerySpace {
        &self.space
    }

    pub fn ext_field(&self) -> &Arc<FieldSpec> {
        &self.ext_field
    }

    pub fn servers(&self) -> usize {
        self.storage_code.length()
    }

    pub fn columns(&self) -> usize {
        self.storage_code.dimension()
    }

    pub fn collusion(&self) -> usize {
        self.retrieval_code.dimension()
    }

    pub fn block_length(&self) -> usize {
        self.b
    }

    pub fn values_per_iteration(&self) -> usize {
        self.f
    }

    pub fn schedule(&self) -> &SchedulePlan {
        &self.schedule
    }

    pub fn iterations(&self) -> usize {
        self.schedule.iteration_count()
    }

    /// Exact measured rate KB/(NS) = F/N.
    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new(
            (self.columns() * self.b) as u64,
            (self.servers() * self.iterations()) as u64,
        )
    }
}

/// Closed-form rate for Reed-Solomon storage and retrieval codes:
/// min{N − (G(K−1) + T), K}/N, defined when G(K−1) + T ≤ N.
pub fn rs_rate(n: usize, k: usize, t: usize, g: u32) -> Result<Ratio<u64>> {
    let load = g as usize * (k - 1) + t;
    if load > n {
        return Err(Error::InfeasibleConfiguration(format!(
            "G(K−1)+T = {load} exceeds N = {n}"
        )));
    }
    Ok(Ratio::new(((n - load).min(k)) as u64, n as u64))
}

/// ρ_n = ψ_n + φ_b for each assigned (server n ↦ function b), else ψ_n.
/// Assignments may only touch systematic servers (index < K).
pub fn build_queries_iter(
    masks: &MaskSet,
    assignment: &[(usize, usize)],
    phis: &[Polynomial],
    k: usize,
) -> Result<Vec<Polynomial>> {
    let mut queries: Vec<Polynomial> = masks.masks().to_vec();
    for &(server, function) in assignment {
        if server >= k {
            return Err(Error::Config(format!(
                "assignment touches non-systematic server {} (K = {k})",
                server + 1
            )));
        }
        let phi = phis
            .get(function)
            .ok_or_else(|| Error::Config(format!("function index {function} out of range")))?;
        queries[server] = queries[server].add(phi)?;
    }
    Ok(queries)
}

/// Prescribed-position error decoding: the syndrome of the response row
/// against H_E is solved on the rows of H_E at the assigned positions, which
/// are linearly independent whenever |assignment| ≤ D_E − 1. The recovered
/// "errors" are exactly the values φ_b(x_k), in assignment order.
pub fn decode_iteration(
    responses: &[FieldElement],
    h_ext: &Matrix,
    assignment: &[(usize, usize)],
) -> Result<Vec<FieldElement>> {
    let syndrome = h_ext.row_vec_mul(responses)?;
    let field = Arc::clone(h_ext.field());
    let rows: Vec<FieldElement> = assignment
        .iter()
        .flat_map(|&(server, _)| h_ext.row(server).iter().cloned())
        .collect();
    let sub = Matrix::new(field, assignment.len(), h_ext.cols(), rows)?;
    match solve_row_system(&sub, &syndrome) {
        Ok(e) => Ok(e),
        Err(Error::NoSolution) => Err(Error::CorruptedResponse),
        Err(Error::AmbiguousSolution) => Err(Error::InvariantViolation(
            "prescribed-position rows of H_E are dependent".into(),
        )),
        Err(e) => Err(e),
    }
}

/// Outcome of a full systematic session.
pub struct SystematicRun {
    /// values\[b\]\[k\] = φ_b(x_k).
    pub values: Vec<Vec<FieldElement>>,
    pub transcript: SessionTranscript,
}

/// Execute the full scheme over the schedule, with fresh independent masks
/// per iteration.
pub fn run_systematic(
    config: &SystematicConfig,
    phis: &[Polynomial],
    x: &Matrix,
    seed: u64,
) -> Result<SystematicRun> {
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
    if x.rows() != config.space.num_vars() || x.cols() != config.columns() {
        return Err(Error::DimensionMismatch(format!(
            "data must be {}×{}, got {}×{}",
            config.space.num_vars(),
            config.columns(),
            x.rows(),
            x.cols()
        )));
    }
    if x.field() != &config.ext_field {
        return Err(Error::OwnerMismatch);
    }
    let servers: Vec<ServerState> = encode_storage(x, &config.storage_code)?;
    let h_ext = config
        .response_code
        .parity_check()
        .embed_into(&config.ext_field)?;

    let k = config.columns();
    let mut values = vec![vec![config.ext_field.zero(); k]; config.b];
    let mut records = Vec::with_capacity(config.iterations());
    for s in 0..config.iterations() {
        let mut rng = mask_rng(seed, s as u64);
        let masks = make_masks(&config.retrieval_code, &config.space, &mut rng)?;
        let assignment = config.schedule.assignment(s);
        let queries = build_queries_iter(&masks, assignment, phis, k)?;
        let responses = servers
            .iter()
            .zip(&queries)
            .map(|(srv, q)| serve_query(srv, q))
            .collect::<Result<Vec<_>>>()?;
        let syndrome = h_ext.row_vec_mul(&responses)?;
        let decoded = decode_iteration(&responses, &h_ext, assignment)?;
        for (&(server, function), value) in assignment.iter().zip(&decoded) {
            values[function][server] = value.clone();
        }
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
            syndrome: Some(transcript::elements_to_strings(&syndrome)?),
            decoded: transcript::elements_to_strings(&decoded)?,
        });
    }

    let s_count = config.iterations();
    let n = config.servers();
    let q_dim = config.space.dimension();
    let transcript = SessionTranscript {
        scheme: "systematic".into(),
        seed,
        base_field: FieldDescriptor::of(config.space.field()),
        ext_field: FieldDescriptor::of(&config.ext_field),
        n,
        t: config.collusion(),
        k,
        b: config.b,
        m_vars: config.space.num_vars(),
        g: config.space.degree_bound(),
        q_dim,
        retrieval_code: CodeDescriptor::of(&config.retrieval_code)?,
        storage_code: Some(CodeDescriptor::of(&config.storage_code)?),
        response_code: Some(CodeDescriptor::of(&config.response_code)?),
        f: Some(config.f),
        schedule: Some(config.schedule.to_wire()),
        functions: phis
            .iter()
            .map(transcript::poly_to_wire)
            .collect::<Result<Vec<_>>>()?,
        data: (0..x.rows())
            .map(|r| transcript::elements_to_strings(x.row(r)))
            .collect::<Result<Vec<_>>>()?,
        iterations: records,
        values: values
            .iter()
            .map(|row| transcript::elements_to_strings(row))
            .collect::<Result<Vec<_>>>()?,
        accounting: AccountingWire {
            uploaded_base_symbols: (s_count * n * q_dim) as u64,
            downloaded_ext_symbols: (s_count * n) as u64,
            iterations: s_count as u64,
        },
        rate: RateWire::of(config.rate()),
    };
    Ok(SystematicRun { values, transcript })
}
