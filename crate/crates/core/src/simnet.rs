//! Deterministic in-process server fleet.
//!
//! Servers are state machines behind a message interface (polynomial in,
//! element out), not sockets: server n holds only its share y_n = column n
//! of X·G_C and never sees X, the other shares, or which queries carry
//! payload. The orchestration here runs full sessions, verifies the
//! accounting identities, and can replay a recorded transcript through the
//! decoder alone.

use std::sync::Arc;

use crate::algebra::field::{FieldElement, FieldSpec};
use crate::algebra::matrix::Matrix;
use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::polyspace::Polynomial;
use crate::scheme::replicated::{decode_responses, run_replicated, ReplicatedConfig};
use crate::scheme::systematic::{decode_iteration, run_systematic, SchedulePlan, SystematicConfig};
use crate::transcript::{self, poly_from_wire, QueryMessage, ResponseMessage, SessionTranscript};

/// One server: its index and the share it stores.
#[derive(Clone, Debug)]
pub struct ServerState {
    index: usize,
    share: Vec<FieldElement>,
}

impl ServerState {
    /// 0-based server index.
    pub fn index(&self) -> usize {
        self.index
    }

    /// y_n ∈ K^{M×1}.
    pub fn share(&self) -> &[FieldElement] {
        &self.share
    }
}

/// Encode the data matrix across N servers: Y = X·G_C with the generator
/// entries embedded into the data field. Server n receives column n.
pub fn encode_storage(x: &Matrix, code: &LinearCode) -> Result<Vec<ServerState>> {
    if x.cols() != code.dimension() {
        return Err(Error::DimensionMismatch(format!(
            "data has {} columns for a code of dimension {}",
            x.cols(),
            code.dimension()
        )));
    }
    let gen_ext = code.generator().embed_into(x.field())?;
    let y = x.mul(&gen_ext)?;
    Ok((0..y.cols())
        .map(|n| ServerState {
            index: n,
            share: y.col(n),
        })
        .collect())
}

/// A server's answer: ρ_n(y_n). Pure and deterministic.
pub fn serve_query(server: &ServerState, query: &Polynomial) -> Result<FieldElement> {
    query.evaluate(&server.share)
}

/// Serve a wire-format query message, producing a wire-format response.
pub fn serve_message(
    server: &ServerState,
    base_field: &Arc<FieldSpec>,
    message: &QueryMessage,
) -> Result<ResponseMessage> {
    if message.server != server.index + 1 {
        return Err(Error::Config(format!(
            "message for server {} delivered to server {}",
            message.server,
            server.index + 1
        )));
    }
    let query = poly_from_wire(base_field, server.share.len(), &message.query)?;
    let value = serve_query(server, &query)?;
    Ok(ResponseMessage {
        server: message.server,
        value: value.canonical_text()?,
    })
}

/// Upload/download accounting for a session.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Accounting {
    /// Base-field symbols uploaded: S·N·Q.
    pub uploaded_base_symbols: u64,
    /// Extension-field symbols downloaded: S·N.
    pub downloaded_ext_symbols: u64,
    pub iterations: u64,
}

/// Scheme dispatch for [`run_session`].
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum SchemeConfig {
    Replicated(ReplicatedConfig),
    Systematic(SystematicConfig),
}

pub struct SessionResult {
    /// values\[b\]\[k\] = φ_b(x_k); K = 1 for the replicated scheme.
    pub values: Vec<Vec<FieldElement>>,
    pub transcript: SessionTranscript,
    pub accounting: Accounting,
}

/// Full orchestration: encode, iterate (queries → responses → decode),
/// aggregate, and verify the accounting identities.
pub fn run_session(
    config: &SchemeConfig,
    phis: &[Polynomial],
    x: &Matrix,
    seed: u64,
) -> Result<SessionResult> {
    let (values, transcript) = match config {
        SchemeConfig::Replicated(cfg) => {
            if x.cols() != 1 {
                return Err(Error::DimensionMismatch(
                    "replicated data is a single column".into(),
                ));
            }
            let run = run_replicated(cfg, phis, &x.col(0), seed)?;
            let values = run.values.into_iter().map(|v| vec![v]).collect();
            (values, run.transcript)
        }
        SchemeConfig::Systematic(cfg) => {
            let run = run_systematic(cfg, phis, x, seed)?;
            (run.values, run.transcript)
        }
    };
    let s = transcript.iterations.len() as u64;
    let n = transcript.n as u64;
    let q = transcript.q_dim as u64;
    let accounting = Accounting {
        uploaded_base_symbols: transcript.accounting.uploaded_base_symbols,
        downloaded_ext_symbols: transcript.accounting.downloaded_ext_symbols,
        iterations: transcript.accounting.iterations,
    };
    if accounting.uploaded_base_symbols != s * n * q
        || accounting.downloaded_ext_symbols != s * n
        || accounting.iterations != s
    {
        return Err(Error::InvariantViolation("accounting identities".into()));
    }
    Ok(SessionResult {
        values,
        transcript,
        accounting,
    })
}

/// Re-run only the decoding over a recorded transcript: parses the code
/// descriptors, decodes every iteration from the recorded responses, and
/// reassembles the value matrix. Byte-equal to `transcript.values` for any
/// honestly recorded session.
pub fn replay_transcript(t: &SessionTranscript) -> Result<Vec<Vec<String>>> {
    let ext = t.ext_field.to_field()?;
    match t.scheme.as_str() {
        "replicated" => {
            let retrieval = t.retrieval_code.to_code()?;
            let h = retrieval.systematic_parity_check()?.embed_into(&ext)?;
            let per_iter = t.n - t.t;
            let mut values = Vec::with_capacity(t.b);
            for record in &t.iterations {
                let responses = transcript::elements_from_strings(&ext, &record.responses)?;
                let decoded = decode_responses(&responses, &h)?;
                if decoded.len() != per_iter {
                    return Err(Error::InvariantViolation("decode width".into()));
                }
                for v in decoded {
                    values.push(vec![v.canonical_text()?]);
                }
            }
            Ok(values)
        }
        "systematic" => {
            let response_code = t
                .response_code
                .as_ref()
                .ok_or_else(|| Error::Config("transcript lacks response code".into()))?
                .to_code()?;
            let schedule_wire = t
                .schedule
                .as_ref()
                .ok_or_else(|| Error::Config("transcript lacks schedule".into()))?;
            let schedule = SchedulePlan::from_wire(schedule_wire, t.k, t.b)?;
            let h_ext = response_code.parity_check().embed_into(&ext)?;
            let mut values = vec![vec![ext.zero().canonical_text()?; t.k]; t.b];
            for (s, record) in t.iterations.iter().enumerate() {
                let responses = transcript::elements_from_strings(&ext, &record.responses)?;
                let assignment = schedule.assignment(s);
                let decoded = decode_iteration(&responses, &h_ext, assignment)?;
                for (&(server, function), v) in assignment.iter().zip(&decoded) {
                    values[function][server] = v.canonical_text()?;
                }
            }
            Ok(values)
        }
        other => Err(Error::Config(format!("unknown scheme {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyspace::QuerySpace;
    use crate::scheme::mask_rng;
    use rand::Rng;

    fn gf(p: u64) -> Arc<FieldSpec> {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn repetition_storage_replicates() {
        let f2 = gf(2);
        let f4 = FieldSpec::extension(2, 2).unwrap();
        let x = Matrix::new(
            Arc::clone(&f4),
            2,
            1,
            vec![f4.from_index(2), f4.from_index(3)],
        )
        .unwrap();
        let rep = LinearCode::repetition(3, &f2).unwrap();
        let servers = encode_storage(&x, &rep).unwrap();
        assert_eq!(servers.len(), 3);
        for srv in &servers {
            assert_eq!(srv.share(), x.col(0).as_slice());
        }
    }

    #[test]
    fn systematic_storage_keeps_raw_columns() {
        let f = gf(11);
        let alpha: Vec<FieldElement> = (0..8).map(|i| f.from_index(i)).collect();
        let code = LinearCode::reed_solomon(&alpha, 3)
            .unwrap()
            .to_systematic()
            .unwrap();
        let x = Matrix::from_rows_of_indices(&f, &[vec![4, 7, 2], vec![1, 0, 9]]).unwrap();
        let servers = encode_storage(&x, &code).unwrap();
        for k in 0..3 {
            assert_eq!(servers[k].share(), x.col(k).as_slice());
        }
    }

    #[test]
    fn mds_storage_recoverable_from_any_k_shares() {
        // Any K shares determine X: solve against the K-column generator
        // submatrix.
        let f = gf(11);
        let alpha: Vec<FieldElement> = (0..6).map(|i| f.from_index(i)).collect();
        let code = LinearCode::reed_solomon(&alpha, 3).unwrap();
        let mut rng = mask_rng(9, 0);
        let x = Matrix::from_rows_of_indices(
            &f,
            &[(0..3).map(|_| rng.random_range(0..11)).collect::<Vec<_>>()],
        )
        .unwrap();
        let servers = encode_storage(&x, &code).unwrap();
        for subset in [[0usize, 1, 2], [1, 3, 5], [2, 4, 5]] {
            // Generator columns at the subset, transposed into a 3x3 system.
            let mut cols: Vec<FieldElement> = Vec::with_capacity(9);
            for r in 0..3 {
                for &c in &subset {
                    cols.push(code.generator().at(r, c).clone());
                }
            }
            let sub = Matrix::new(Arc::clone(&f), 3, 3, cols).unwrap();
            let shares: Vec<FieldElement> = subset
                .iter()
                .map(|&c| servers[c].share()[0].clone())
                .collect();
            let recovered = crate::algebra::matrix::solve_row_system(&sub, &shares).unwrap();
            assert_eq!(recovered, x.row(0));
        }
    }

    #[test]
    fn serve_query_basics() {
        let f2 = gf(2);
        let f4 = FieldSpec::extension(2, 2).unwrap();
        let x = Matrix::new(
            Arc::clone(&f4),
            2,
            1,
            vec![f4.from_index(2), f4.from_index(3)],
        )
        .unwrap();
        let rep = LinearCode::repetition(2, &f2).unwrap();
        let servers = encode_storage(&x, &rep).unwrap();
        let zero = Polynomial::zero(&f2, 2);
        assert!(serve_query(&servers[0], &zero).unwrap().is_zero());
        // Single monomial = product of share powers.
        let space = QuerySpace::polynomials(&f2, 2, 3).unwrap();
        for q in 0..space.dimension() {
            let psi = space.basis_poly(q);
            let expect = {
                let exps = space.basis()[q].exponents();
                let mut acc = f4.one();
                for (xm, &e) in servers[0].share().iter().zip(exps) {
                    acc = acc.mul(&xm.pow(e as u64)).unwrap();
                }
                acc
            };
            assert_eq!(serve_query(&servers[0], &psi).unwrap(), expect);
        }
    }

    #[test]
    fn serve_query_is_linear_for_degree_one() {
        let f3 = gf(3);
        let f9 = FieldSpec::extension(3, 2).unwrap();
        let x = Matrix::new(
            Arc::clone(&f9),
            2,
            1,
            vec![f9.from_index(5), f9.from_index(7)],
        )
        .unwrap();
        let rep = LinearCode::repetition(1, &f3).unwrap();
        let servers = encode_storage(&x, &rep).unwrap();
        let space = QuerySpace::linear(&f3, 2).unwrap();
        let a = f3.from_int(2);
        let b = f3.from_int(1);
        let combo = crate::polyspace::linear_combine(
            &[a.clone(), b.clone()],
            &[space.basis_poly(0), space.basis_poly(1)],
        )
        .unwrap();
        let lhs = serve_query(&servers[0], &combo).unwrap();
        let rhs = a
            .embed_into(&f9)
            .unwrap()
            .mul(&serve_query(&servers[0], &space.basis_poly(0)).unwrap())
            .unwrap()
            .add(
                &b.embed_into(&f9)
                    .unwrap()
                    .mul(&serve_query(&servers[0], &space.basis_poly(1)).unwrap())
                    .unwrap(),
            )
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn message_interface_round_trip() {
        let f2 = gf(2);
        let f4 = FieldSpec::extension(2, 2).unwrap();
        let x = Matrix::new(Arc::clone(&f4), 1, 1, vec![f4.from_index(2)]).unwrap();
        let rep = LinearCode::repetition(2, &f2).unwrap();
        let servers = encode_storage(&x, &rep).unwrap();
        let space = QuerySpace::polynomials(&f2, 1, 2).unwrap();
        let query = space.basis_poly(1);
        let msg = QueryMessage {
            server: 1,
            query: transcript::poly_to_wire(&query).unwrap(),
        };
        let resp = serve_message(&servers[0], &f2, &msg).unwrap();
        assert_eq!(resp.server, 1);
        assert_eq!(
            resp.value,
            serve_query(&servers[0], &query)
                .unwrap()
                .canonical_text()
                .unwrap()
        );
        // Misrouted message is rejected.
        assert!(serve_message(&servers[1], &f2, &msg).is_err());
    }
}
