//! Exact verification of T-privacy.
//!
//! Everything here is decided by exhaustive enumeration with exact rational
//! arithmetic: the mask randomness of a session is finite (one message
//! vector per basis polynomial per iteration), so the joint distribution of
//! (requested functions, queries observed by a colluding subset) can be
//! tabulated and compared against the product of its marginals. Mutual
//! information is zero exactly when the total-variation distance between
//! joint and product is zero, so the divergence reported here is that
//! distance — no logarithms, no floats.
//!
//! Enumeration works in coefficient space: a query is its coordinate vector
//! over the query-space basis, and the mask a server sees is just the column
//! of the sampled codeword matrix at that server.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::field::FieldSpec;
use crate::algebra::matrix::Matrix;
use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::polyspace::QuerySpace;
use crate::scheme::replicated::ReplicatedConfig;
use crate::scheme::systematic::SystematicConfig;
use crate::transcript::{poly_to_wire, PolyWire};

/// Default enumeration guard for audits.
pub const AUDIT_GUARD: u128 = 1 << 20;

fn ratio(num: u128, den: u128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Odometer over `len` digits in base `radix`; calls `visit` for every
/// combination, reusing one buffer.
fn for_each_digit_vector(radix: u64, len: usize, mut visit: impl FnMut(&[u64])) {
    let mut digits = vec![0u64; len];
    loop {
        visit(&digits);
        let mut i = 0;
        loop {
            if i == len {
                return;
            }
            digits[i] += 1;
            if digits[i] < radix {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Index-level scalar products of one generator column: table[digit] is the
/// index of digit·entry, so mask coordinates cost one lookup + one add.
fn scalar_table(field: &Arc<FieldSpec>, entry_index: u64) -> Vec<u64> {
    let entry = field.from_index(entry_index);
    (0..field.order())
        .map(|d| field.from_index(d).mul(&entry).expect("same field").index())
        .collect()
}

/// Exact pmf of the mask tuple (ψ_{n_1}, …, ψ_{n_j}) over all codeword
/// draws, keyed by the concatenated coefficient vectors (element indices).
#[derive(Clone, Debug)]
pub struct MaskTuplePmf {
    subset: Vec<usize>,
    q_dim: usize,
    draws: u128,
    counts: BTreeMap<Vec<u64>, u64>,
}

impl MaskTuplePmf {
    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn draws(&self) -> u128 {
        self.draws
    }

    pub fn support_len(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &BTreeMap<Vec<u64>, u64> {
        &self.counts
    }

    pub fn probability(&self, key: &[u64]) -> BigRational {
        let c = self.counts.get(key).copied().unwrap_or(0);
        ratio(c as u128, self.draws)
    }

    /// True iff the tuple is uniform over the whole of Q^{|subset|}.
    pub fn is_uniform(&self, field_order: u64) -> bool {
        let total = (field_order as u128).pow((self.q_dim * self.subset.len()) as u32);
        if self.counts.len() as u128 != total {
            return false;
        }
        let per = self.draws / total;
        self.draws.is_multiple_of(total) && self.counts.values().all(|&c| c as u128 == per)
    }
}

/// Tabulate the distribution of the mask tuple seen by `subset` (0-based
/// server indices) under all |F|^{T·Q} codeword draws.
pub fn mask_tuple_distribution(
    code: &LinearCode,
    space: &QuerySpace,
    subset: &[usize],
    guard: u128,
) -> Result<MaskTuplePmf> {
    validate_subset(subset, code.length())?;
    let field = code.field();
    let order = field.order();
    let t = code.dimension();
    let q_dim = space.dimension();
    let draws = (order as u128)
        .checked_pow((t * q_dim) as u32)
        .unwrap_or(u128::MAX);
    if draws > guard {
        return Err(Error::EnumerationGuard { size: draws, guard });
    }
    // tables[j][tt][digit] = index of digit · G_D[tt][subset[j]].
    let tables: Vec<Vec<Vec<u64>>> = subset
        .iter()
        .map(|&col| {
            (0..t)
                .map(|row| scalar_table(field, code.generator().at(row, col).index()))
                .collect()
        })
        .collect();
    let mut counts: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    // Digits: message symbol tt of codeword q at position q*t + tt.
    for_each_digit_vector(order, t * q_dim, |digits| {
        let mut key = Vec::with_capacity(subset.len() * q_dim);
        for tables_j in &tables {
            for q in 0..q_dim {
                let mut acc = 0u64;
                for (tt, table) in tables_j.iter().enumerate() {
                    acc = field.add_index(acc, table[digits[q * t + tt] as usize]);
                }
                key.push(acc);
            }
        }
        *counts.entry(key).or_insert(0) += 1;
    });
    Ok(MaskTuplePmf {
        subset: subset.to_vec(),
        q_dim,
        draws,
        counts,
    })
}

fn validate_subset(subset: &[usize], n: usize) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::Config("empty colluding subset".into()));
    }
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != subset.len() || subset.iter().any(|&i| i >= n) {
        return Err(Error::Config(format!(
            "subset must be distinct server indices below {n}"
        )));
    }
    Ok(())
}

/// Which scheme an audit runs against.
pub enum AuditScheme<'a> {
    Replicated(&'a ReplicatedConfig),
    Systematic(&'a SystematicConfig),
}

/// How the public function distribution 𝖰 is enumerated: the full support
/// Q^B, or a seeded uniform sub-support of the given size.
#[derive(Clone, Copy, Debug)]
pub enum SupportSpec {
    Full,
    Sampled { count: usize, seed: u64 },
}

/// Scheme-independent view of what the auditor needs.
struct AuditView {
    base: Arc<FieldSpec>,
    space: QuerySpace,
    gen_d: Matrix,
    t_dim: usize,
    n: usize,
    b: usize,
    /// Per-iteration (server, function) payload assignments, 0-based.
    assignments: Vec<Vec<(usize, usize)>>,
}

impl<'a> AuditScheme<'a> {
    fn view(&self) -> AuditView {
        match self {
            AuditScheme::Replicated(cfg) => {
                let per = cfg.per_iteration();
                let assignments = (0..cfg.iterations())
                    .map(|s| (0..per).map(|i| (i, s * per + i)).collect())
                    .collect();
                AuditView {
                    base: Arc::clone(cfg.space().field()),
                    space: cfg.space().clone(),
                    gen_d: cfg.retrieval_code().generator().clone(),
                    t_dim: cfg.collusion(),
                    n: cfg.servers(),
                    b: cfg.block_length(),
                    assignments,
                }
            }
            AuditScheme::Systematic(cfg) => AuditView {
                base: Arc::clone(cfg.space().field()),
                space: cfg.space().clone(),
                gen_d: cfg.retrieval_code().generator().clone(),
                t_dim: cfg.retrieval_code().dimension(),
                n: cfg.servers(),
                b: cfg.block_length(),
                assignments: cfg.schedule().iterations().to_vec(),
            },
        }
    }
}

/// Verdict plus exact divergence for one colluding subset.
#[derive(Clone, Debug)]
pub struct PrivacyReport {
    /// 0-based server indices.
    pub subset: Vec<usize>,
    /// Iterations covered by one exact joint enumeration. Equal to the
    /// session's S when the full joint fit the guard; 1 when the audit fell
    /// back to per-iteration enumeration plus the independence-composition
    /// argument.
    pub audited_iterations: usize,
    pub composition: bool,
    pub support_label: String,
    pub support_size: u128,
    pub mask_draws: u128,
    /// Total-variation distance between the joint and the product of
    /// marginals; zero iff I(𝖰; 𝖯_T) = 0.
    pub divergence: BigRational,
    pub private: bool,
    /// Marginal pmf of the observed query tuple (full-joint audits only):
    /// key → probability, key = element indices of the concatenated query
    /// coefficient vectors.
    pub tuple_pmf: Option<BTreeMap<Vec<u64>, BigRational>>,
    /// Joint pmf (Φ index, tuple key) → probability (full-joint audits with
    /// small supports only).
    pub joint_pmf: Option<BTreeMap<(usize, Vec<u64>), BigRational>>,
    /// The Φ support as coefficient vectors, parallel to the joint pmf's
    /// Φ indices.
    pub support: Vec<Vec<Vec<u64>>>,
}

/// Wire rendering keeps probabilities as exact "a/b" strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrivacyReportWire {
    /// 1-based server indices.
    pub subset: Vec<usize>,
    pub audited_iterations: usize,
    pub composition: bool,
    pub support_label: String,
    pub support_size: u64,
    pub mask_draws: u64,
    pub divergence: String,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tuple_pmf: Option<Vec<TuplePmfEntryWire>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub joint_pmf: Option<Vec<JointPmfEntryWire>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TuplePmfEntryWire {
    /// Per audited iteration, per subset server, the observed query.
    pub queries: Vec<Vec<PolyWire>>,
    pub probability: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JointPmfEntryWire {
    pub functions: Vec<PolyWire>,
    pub queries: Vec<Vec<PolyWire>>,
    pub probability: String,
}

impl PrivacyReport {
    pub fn verdict_str(&self) -> &'static str {
        if self.private {
            "private"
        } else {
            "leaking"
        }
    }

    /// Render for JSON output; needs the query space to turn coefficient
    /// keys back into polynomials. pmfs larger than `pmf_limit` entries are
    /// omitted.
    pub fn to_wire(&self, space: &QuerySpace, pmf_limit: usize) -> Result<PrivacyReportWire> {
        let q_dim = space.dimension();
        let subset_len = self.subset.len();
        let render_key = |key: &[u64]| -> Result<Vec<Vec<PolyWire>>> {
            key.chunks(subset_len * q_dim)
                .map(|iter_chunk| {
                    iter_chunk
                        .chunks(q_dim)
                        .map(|coeffs| {
                            let elems: Vec<_> = coeffs
                                .iter()
                                .map(|&i| space.field().from_index(i))
                                .collect();
                            poly_to_wire(&space.from_coeff_vector(&elems)?)
                        })
                        .collect()
                })
                .collect()
        };
        let tuple_pmf = match &self.tuple_pmf {
            Some(pmf) if pmf.len() <= pmf_limit => Some(
                pmf.iter()
                    .map(|(key, p)| {
                        Ok(TuplePmfEntryWire {
                            queries: render_key(key)?,
                            probability: p.to_string(),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
            _ => None,
        };
        let joint_pmf = match &self.joint_pmf {
            Some(pmf) if pmf.len() <= pmf_limit => Some(
                pmf.iter()
                    .map(|((phi_idx, key), p)| {
                        let functions = self.support[*phi_idx]
                            .iter()
                            .map(|coeffs| {
                                let elems: Vec<_> = coeffs
                                    .iter()
                                    .map(|&i| space.field().from_index(i))
                                    .collect();
                                poly_to_wire(&space.from_coeff_vector(&elems)?)
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok(JointPmfEntryWire {
                            functions,
                            queries: render_key(key)?,
                            probability: p.to_string(),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
            _ => None,
        };
        Ok(PrivacyReportWire {
            subset: self.subset.iter().map(|i| i + 1).collect(),
            audited_iterations: self.audited_iterations,
            composition: self.composition,
            support_label: self.support_label.clone(),
            support_size: self.support_size.min(u64::MAX as u128) as u64,
            mask_draws: self.mask_draws.min(u64::MAX as u128) as u64,
            divergence: self.divergence.to_string(),
            verdict: self.verdict_str().into(),
            tuple_pmf,
            joint_pmf,
        })
    }
}

/// Decide I(𝖰; 𝖯_T) = 0 exactly for the colluding subset, by enumerating
/// the joint distribution of (Φ, queries at the subset over the audited
/// iterations).
pub fn mutual_information(
    scheme: &AuditScheme,
    subset: &[usize],
    support: SupportSpec,
    guard: u128,
) -> Result<PrivacyReport> {
    let view = scheme.view();
    validate_subset(subset, view.n)?;
    let order = view.base.order();
    let q_dim = view.space.dimension();
    let s_total = view.assignments.len();
    let draws_per_iter = (order as u128)
        .checked_pow((view.t_dim * q_dim) as u32)
        .unwrap_or(u128::MAX);

    let full_support_size = (order as u128)
        .checked_pow((q_dim * view.b) as u32)
        .unwrap_or(u128::MAX);
    let (support_label, support_size) = match support {
        SupportSpec::Full => ("full".to_string(), full_support_size),
        SupportSpec::Sampled { count, .. } => ("sampled".to_string(), count as u128),
    };

    let joint_draws = draws_per_iter
        .checked_pow(s_total as u32)
        .unwrap_or(u128::MAX);
    let full_cost = joint_draws.saturating_mul(support_size);
    if full_cost <= guard {
        return audit_joint(&view, subset, &support, s_total, guard);
    }
    // Fall back to per-iteration audits composed via independent mask
    // streams: each iteration's observed queries depend only on that
    // iteration's function slice and masks, so per-iteration independence
    // implies joint independence. The support shrinks to the functions the
    // iteration actually carries.
    let mut worst = BigRational::zero();
    let mut private = true;
    let mut first: Option<PrivacyReport> = None;
    for s in 0..s_total {
        let assignment = &view.assignments[s];
        let mut involved: Vec<usize> = assignment.iter().map(|&(_, f)| f).collect();
        involved.sort_unstable();
        involved.dedup();
        let remapped: Vec<(usize, usize)> = assignment
            .iter()
            .map(|&(srv, f)| (srv, involved.binary_search(&f).expect("involved")))
            .collect();
        let single = AuditView {
            base: Arc::clone(&view.base),
            space: view.space.clone(),
            gen_d: view.gen_d.clone(),
            t_dim: view.t_dim,
            n: view.n,
            b: involved.len().max(1),
            assignments: vec![remapped],
        };
        let report = audit_joint(&single, subset, &support, 1, guard)?;
        if report.divergence > worst {
            worst = report.divergence.clone();
        }
        private &= report.private;
        if first.is_none() {
            first = Some(report);
        }
    }
    let first = first.expect("at least one iteration");
    Ok(PrivacyReport {
        subset: subset.to_vec(),
        audited_iterations: 1,
        composition: true,
        support_label,
        support_size,
        mask_draws: draws_per_iter,
        divergence: worst,
        private,
        tuple_pmf: first.tuple_pmf,
        joint_pmf: None,
        support: first.support,
    })
}

/// One exact joint enumeration over the given iterations.
fn audit_joint(
    view: &AuditView,
    subset: &[usize],
    support: &SupportSpec,
    audited_iterations: usize,
    guard: u128,
) -> Result<PrivacyReport> {
    let order = view.base.order();
    let q_dim = view.space.dimension();
    let s_total = view.assignments.len();
    let digits_per_iter = view.t_dim * q_dim;
    let draws = (order as u128)
        .checked_pow((digits_per_iter * s_total) as u32)
        .unwrap_or(u128::MAX);

    // The functions that actually reach the subset; only their coefficients
    // matter for the observed queries, which keeps sampled supports honest.
    let support_list = build_support(view, support, guard, draws)?;
    let support_size = support_list.len() as u128;
    let total = draws.saturating_mul(support_size);
    if total > guard {
        return Err(Error::EnumerationGuard { size: total, guard });
    }

    // tables[j][tt][digit] = index of digit · G_D[tt][subset[j]].
    let tables: Vec<Vec<Vec<u64>>> = subset
        .iter()
        .map(|&col| {
            (0..view.t_dim)
                .map(|row| scalar_table(&view.base, view.gen_d.at(row, col).index()))
                .collect()
        })
        .collect();
    // assignment lookup: per iteration, per subset position, the function
    // index whose coefficients are added to the mask.
    let payload: Vec<Vec<Option<usize>>> = view
        .assignments
        .iter()
        .map(|assignment| {
            subset
                .iter()
                .map(|&srv| {
                    assignment
                        .iter()
                        .find(|&&(server, _)| server == srv)
                        .map(|&(_, function)| function)
                })
                .collect()
        })
        .collect();

    let mut joint: BTreeMap<(usize, Vec<u64>), u64> = BTreeMap::new();
    let mut marginal: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    for (phi_idx, phi) in support_list.iter().enumerate() {
        for_each_digit_vector(order, digits_per_iter * s_total, |digits| {
            let mut key = Vec::with_capacity(s_total * subset.len() * q_dim);
            for (s, payload_s) in payload.iter().enumerate() {
                let iter_digits = &digits[s * digits_per_iter..(s + 1) * digits_per_iter];
                for (j, carried) in payload_s.iter().enumerate() {
                    for q in 0..q_dim {
                        let mut acc = 0u64;
                        for (tt, table) in tables[j].iter().enumerate() {
                            acc = view
                                .base
                                .add_index(acc, table[iter_digits[q * view.t_dim + tt] as usize]);
                        }
                        if let Some(function) = carried {
                            acc = view.base.add_index(acc, phi[*function][q]);
                        }
                        key.push(acc);
                    }
                }
            }
            *marginal.entry(key.clone()).or_insert(0) += 1;
            *joint.entry((phi_idx, key)).or_insert(0) += 1;
        });
    }

    // TV distance between joint and product of marginals; Φ is uniform on
    // the support by construction.
    let mut divergence = BigRational::zero();
    let phi_prob = ratio(1, support_size);
    for (key, &mcount) in &marginal {
        let key_prob = ratio(mcount as u128, total);
        for phi_idx in 0..support_list.len() {
            let jcount = joint.get(&(phi_idx, key.clone())).copied().unwrap_or(0);
            let joint_prob = ratio(jcount as u128, total);
            let product = &phi_prob * &key_prob;
            divergence += (joint_prob - product).abs();
        }
    }
    divergence /= BigRational::from(BigInt::from(2));
    let private = divergence.is_zero();

    let tuple_pmf = marginal
        .iter()
        .map(|(k, &c)| (k.clone(), ratio(c as u128, total)))
        .collect();
    let joint_pmf = joint
        .iter()
        .map(|(k, &c)| (k.clone(), ratio(c as u128, total)))
        .collect();
    Ok(PrivacyReport {
        subset: subset.to_vec(),
        audited_iterations,
        composition: false,
        support_label: match support {
            SupportSpec::Full => "full".into(),
            SupportSpec::Sampled { .. } => "sampled".into(),
        },
        support_size,
        mask_draws: draws,
        divergence,
        private,
        tuple_pmf: Some(tuple_pmf),
        joint_pmf: Some(joint_pmf),
        support: support_list,
    })
}

/// Materialize the Φ support: every tuple in Q^B, or a seeded sample of
/// distinct tuples.
fn build_support(
    view: &AuditView,
    support: &SupportSpec,
    guard: u128,
    draws: u128,
) -> Result<Vec<Vec<Vec<u64>>>> {
    let order = view.base.order();
    let q_dim = view.space.dimension();
    match support {
        SupportSpec::Full => {
            let size = (order as u128)
                .checked_pow((q_dim * view.b) as u32)
                .unwrap_or(u128::MAX);
            if size.saturating_mul(draws) > guard {
                return Err(Error::EnumerationGuard {
                    size: size.saturating_mul(draws),
                    guard,
                });
            }
            let mut out = Vec::with_capacity(size as usize);
            for_each_digit_vector(order, q_dim * view.b, |digits| {
                out.push(
                    digits
                        .chunks(q_dim)
                        .map(|chunk| chunk.to_vec())
                        .collect::<Vec<_>>(),
                );
            });
            Ok(out)
        }
        SupportSpec::Sampled { count, seed } => {
            let mut rng = ChaCha12Rng::seed_from_u64(*seed);
            let mut seen = std::collections::HashSet::new();
            let mut out = Vec::with_capacity(*count);
            let space_size = (order as u128)
                .checked_pow((q_dim * view.b) as u32)
                .unwrap_or(u128::MAX);
            let target = (*count as u128).min(space_size) as usize;
            while out.len() < target {
                let tuple: Vec<Vec<u64>> = (0..view.b)
                    .map(|_| (0..q_dim).map(|_| rng.random_range(0..order)).collect())
                    .collect();
                if seen.insert(tuple.clone()) {
                    out.push(tuple);
                }
            }
            Ok(out)
        }
    }
}

/// Report of the one-time-pad convolution check.
#[derive(Clone, Debug)]
pub struct OtpReport {
    pub vector_space_size: u128,
    pub distributions_checked: usize,
    pub all_uniform: bool,
    pub all_independent: bool,
}

/// Verify the masking lemma on V = field^dim by exact convolution: for every
/// Z distribution in a grid of rational pmfs and U uniform independent of Z,
/// W = U + Z is uniform on V and independent of Z.
pub fn otp_check(
    field: &Arc<FieldSpec>,
    dim: usize,
    grid_size: usize,
    guard: u128,
) -> Result<OtpReport> {
    let order = field.order();
    let size = (order as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
    if size > guard {
        return Err(Error::EnumerationGuard { size, guard });
    }
    let size_us = size as usize;
    // Vector addition on flat indices, coordinate by coordinate.
    let add_vec = |a: usize, b: usize| -> usize {
        let (mut a, mut b) = (a as u64, b as u64);
        let mut out = 0u64;
        let mut mult = 1u64;
        for _ in 0..dim {
            out += field.add_index(a % order, b % order) * mult;
            mult *= order;
            a /= order;
            b /= order;
        }
        out as usize
    };

    let mut grid: Vec<Vec<BigRational>> = Vec::new();
    // Point masses.
    for v in 0..size_us.min(4) {
        let mut pmf = vec![BigRational::zero(); size_us];
        pmf[v] = BigRational::one();
        grid.push(pmf);
    }
    // Uniform.
    grid.push(vec![ratio(1, size); size_us]);
    // Seeded rational pmfs.
    let mut rng = ChaCha12Rng::seed_from_u64(0x0707);
    while grid.len() < grid_size {
        let weights: Vec<u64> = (0..size_us).map(|_| rng.random_range(0..=16)).collect();
        let total: u64 = weights.iter().sum();
        if total == 0 {
            continue;
        }
        grid.push(
            weights
                .iter()
                .map(|&w| ratio(w as u128, total as u128))
                .collect(),
        );
    }

    let uniform = ratio(1, size);
    let mut all_uniform = true;
    let mut all_independent = true;
    for z_pmf in &grid {
        debug_assert!(z_pmf.iter().sum::<BigRational>() == BigRational::one());
        // W = U + Z by literal convolution.
        let mut w_pmf = vec![BigRational::zero(); size_us];
        for (z, pz) in z_pmf.iter().enumerate() {
            if pz.is_zero() {
                continue;
            }
            for u in 0..size_us {
                let w = add_vec(u, z);
                w_pmf[w] += pz * &uniform;
            }
        }
        all_uniform &= w_pmf.iter().all(|p| p == &uniform);
        // Joint P(W = w, Z = z) = P_Z(z)/|V| must equal P_W(w)·P_Z(z).
        'outer: for (z, pz) in z_pmf.iter().enumerate() {
            for u in 0..size_us {
                let w = add_vec(u, z);
                let joint = pz * &uniform;
                if joint != &w_pmf[w] * pz {
                    all_independent = false;
                    break 'outer;
                }
            }
        }
    }
    Ok(OtpReport {
        vector_space_size: size,
        distributions_checked: grid.len(),
        all_uniform,
        all_independent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix::Matrix;
    use crate::codes::LinearCode;

    fn gf(p: u64) -> Arc<FieldSpec> {
        FieldSpec::prime(p).unwrap()
    }

    fn example_retrieval(f: &Arc<FieldSpec>) -> LinearCode {
        LinearCode::from_generator(
            Matrix::from_rows_of_indices(f, &[vec![1, 0, 1], vec![0, 1, 1]]).unwrap(),
        )
        .unwrap()
    }

    fn example_config(m_vars: usize) -> ReplicatedConfig {
        let f2 = gf(2);
        let f4 = FieldSpec::extension(2, 2).unwrap();
        let space = QuerySpace::polynomials(&f2, m_vars, 2).unwrap();
        ReplicatedConfig::new(3, 2, 1, space, example_retrieval(&f2), f4).unwrap()
    }

    #[test]
    fn mask_tuple_uniform_on_t_subsets() {
        // N=3, T=2, GF(2), Q=2: each of the 16 tuples has probability 1/16.
        let f2 = gf(2);
        let d = example_retrieval(&f2);
        let space = QuerySpace::polynomials(&f2, 1, 2).unwrap();
        for subset in [[0usize, 1], [0, 2], [1, 2]] {
            let pmf = mask_tuple_distribution(&d, &space, &subset, AUDIT_GUARD).unwrap();
            assert_eq!(pmf.draws(), 16);
            assert!(pmf.is_uniform(2), "subset {subset:?}");
            assert_eq!(pmf.support_len(), 16);
            for &c in pmf.counts().values() {
                assert_eq!(c, 1);
            }
        }
    }

    #[test]
    fn mask_tuple_not_uniform_beyond_t() {
        // Projecting a T-dimensional code onto T+1 coordinates cannot cover
        // Q^{T+1}: the support is a proper subspace.
        let f5 = gf(5);
        let alpha: Vec<_> = (0..4).map(|i| f5.from_index(i)).collect();
        let d = LinearCode::reed_solomon(&alpha, 2).unwrap();
        let space = QuerySpace::polynomials(&f5, 1, 1).unwrap();
        let pmf = mask_tuple_distribution(&d, &space, &[0, 1, 2], AUDIT_GUARD).unwrap();
        assert!(!pmf.is_uniform(5));
        assert_eq!(pmf.support_len(), 25); // |D projected|^Q = 5^2.
    }

    #[test]
    fn mask_tuple_guard() {
        let f5 = gf(5);
        let alpha: Vec<_> = (0..5).map(|i| f5.from_index(i)).collect();
        let d = LinearCode::reed_solomon(&alpha, 3).unwrap();
        let space = QuerySpace::polynomials(&f5, 2, 3).unwrap();
        assert!(matches!(
            mask_tuple_distribution(&d, &space, &[0, 1, 2], 1 << 10),
            Err(Error::EnumerationGuard { .. })
        ));
    }

    #[test]
    fn example_subsets_are_private() {
        // 3-server config with M=1, G=2: Q-dim 2 over GF(2).
        let cfg = example_config(1);
        for subset in [[0usize, 1], [0, 2], [1, 2]] {
            let report = mutual_information(
                &AuditScheme::Replicated(&cfg),
                &subset,
                SupportSpec::Full,
                AUDIT_GUARD,
            )
            .unwrap();
            assert!(report.private, "subset {subset:?}");
            assert!(report.divergence.is_zero());
            assert_eq!(report.support_size, 4);
            assert_eq!(report.mask_draws, 16);
            // pmfs sum to one exactly.
            let total: BigRational = report.tuple_pmf.as_ref().unwrap().values().sum();
            assert_eq!(total, BigRational::one());
            let jtotal: BigRational = report.joint_pmf.as_ref().unwrap().values().sum();
            assert_eq!(jtotal, BigRational::one());
        }
    }

    #[test]
    fn full_collusion_leaks() {
        let cfg = example_config(1);
        let report = mutual_information(
            &AuditScheme::Replicated(&cfg),
            &[0, 1, 2],
            SupportSpec::Full,
            AUDIT_GUARD,
        )
        .unwrap();
        assert!(!report.private);
        assert!(report.divergence > BigRational::zero());
    }

    #[test]
    fn unqueried_servers_alone_are_private() {
        // Servers that never receive a payload see functions of the masks
        // alone.
        let cfg = example_config(1);
        for subset in [vec![1usize], vec![2], vec![1, 2]] {
            let report = mutual_information(
                &AuditScheme::Replicated(&cfg),
                &subset,
                SupportSpec::Full,
                AUDIT_GUARD,
            )
            .unwrap();
            assert!(report.private);
        }
    }

    #[test]
    fn systematic_audit_private_on_t_subsets() {
        let f = gf(3);
        let alpha: Vec<_> = (0..3).map(|i| f.from_index(i)).collect();
        let storage = LinearCode::reed_solomon(&alpha, 2)
            .unwrap()
            .to_systematic()
            .unwrap();
        let retrieval = LinearCode::reed_solomon(&alpha, 1).unwrap();
        let cfg = SystematicConfig::new(storage, retrieval, 1, Some(1), 1, Arc::clone(&f)).unwrap();
        for subset in [[0usize], [1], [2]] {
            let report = mutual_information(
                &AuditScheme::Systematic(&cfg),
                &subset,
                SupportSpec::Full,
                AUDIT_GUARD,
            )
            .unwrap();
            assert!(report.private, "subset {subset:?}");
        }
        // Two colluders exceed T = 1 here and the queried pair leaks.
        let report = mutual_information(
            &AuditScheme::Systematic(&cfg),
            &[0, 1],
            SupportSpec::Full,
            AUDIT_GUARD,
        )
        .unwrap();
        assert!(!report.private);
    }

    #[test]
    fn multi_iteration_full_enumeration_and_composition_agree() {
        // B = 2 over the 3-server retrieval code: S = 2 iterations.
        let f2 = gf(2);
        let f4 = FieldSpec::extension(2, 2).unwrap();
        let space = QuerySpace::polynomials(&f2, 1, 2).unwrap();
        let cfg = ReplicatedConfig::new(3, 2, 2, space, example_retrieval(&f2), f4).unwrap();
        // Full S=2 joint: 16^2 draws × 16 Φ tuples = 4096 states.
        let full = mutual_information(
            &AuditScheme::Replicated(&cfg),
            &[0, 1],
            SupportSpec::Full,
            AUDIT_GUARD,
        )
        .unwrap();
        assert_eq!(full.audited_iterations, 2);
        assert!(!full.composition);
        assert!(full.private);
        assert!(full.divergence.is_zero());
        // A tight guard forces the per-iteration composition fallback, which
        // must agree.
        let composed = mutual_information(
            &AuditScheme::Replicated(&cfg),
            &[0, 1],
            SupportSpec::Full,
            1 << 10,
        )
        .unwrap();
        assert_eq!(composed.audited_iterations, 1);
        assert!(composed.composition);
        assert!(composed.private);
        assert!(composed.divergence.is_zero());
    }

    #[test]
    fn otp_point_mass_and_rational_grids() {
        let f2 = gf(2);
        let report = otp_check(&f2, 2, 20, AUDIT_GUARD).unwrap();
        assert!(report.all_uniform);
        assert!(report.all_independent);
        assert_eq!(report.vector_space_size, 4);
        let f3 = gf(3);
        let report = otp_check(&f3, 1, 25, AUDIT_GUARD).unwrap();
        assert!(report.all_uniform && report.all_independent);
        // Degenerate V = {0}.
        let report = otp_check(&f3, 0, 20, AUDIT_GUARD).unwrap();
        assert_eq!(report.vector_space_size, 1);
        assert!(report.all_uniform && report.all_independent);
    }
}
