//! Linear codes over finite fields: star (Schur) products, Reed-Solomon
//! construction, minimum distance, systematic forms, and base-field
//! extension.
//!
//! A code is held by its generator matrix (validated full row rank). Code
//! equality is decided canonically: two codes are equal iff the reduced
//! row-echelon forms of their generators match entry for entry. The parity
//! check, canonical generator, and minimum distance are cached lazily.

use std::sync::{Arc, OnceLock};

use crate::algebra::field::{FieldElement, FieldSpec};
use crate::algebra::matrix::Matrix;
use crate::error::{Error, Result};

/// Enumeration cap for brute-force minimum distance: |field|^K codewords.
pub const MIN_DISTANCE_GUARD: u128 = 1 << 24;

/// An [N, K] linear code over a finite field.
#[derive(Clone)]
pub struct LinearCode {
    field: Arc<FieldSpec>,
    n: usize,
    k: usize,
    generator: Matrix,
    /// Evaluation vector when the code is known to be Reed-Solomon; carried
    /// through star products and field extension so RS distances can use the
    /// closed form N−K+1.
    alpha: Option<Vec<FieldElement>>,
    canonical: OnceLock<Matrix>,
    parity: OnceLock<Matrix>,
    min_dist: OnceLock<usize>,
}

impl LinearCode {
    /// Code spanned by the rows of `generator`, which must have full row rank.
    pub fn from_generator(generator: Matrix) -> Result<Self> {
        let k = generator.rows();
        let n = generator.cols();
        if k == 0 || n == 0 {
            return Err(Error::DimensionMismatch("empty generator".into()));
        }
        let rref = generator.rref();
        if rref.rank != k {
            return Err(Error::NotFullRank);
        }
        let code = LinearCode {
            field: Arc::clone(generator.field()),
            n,
            k,
            generator,
            alpha: None,
            canonical: OnceLock::new(),
            parity: OnceLock::new(),
            min_dist: OnceLock::new(),
        };
        let _ = code.canonical.set(rref.matrix);
        Ok(code)
    }

    /// The [N, 1] repetition code: all-ones generator, distance N.
    pub fn repetition(n: usize, field: &Arc<FieldSpec>) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionMismatch("repetition length 0".into()));
        }
        let entries = vec![field.one(); n];
        let gen = Matrix::new(Arc::clone(field), 1, n, entries)?;
        let mut code = Self::from_generator(gen)?;
        let _ = code.min_dist.set(n);
        code.alpha = None;
        Ok(code)
    }

    /// The [N, K] Reed-Solomon code with Vandermonde generator row q equal to
    /// [α(1)^q, …, α(N)^q]. Evaluation points must be pairwise distinct.
    pub fn reed_solomon(alpha: &[FieldElement], k: usize) -> Result<Self> {
        let n = alpha.len();
        if n == 0 || k == 0 || k > n {
            return Err(Error::DimensionMismatch(format!(
                "reed-solomon needs 1 <= K <= N, got K={k}, N={n}"
            )));
        }
        let field = Arc::clone(alpha[0].field());
        for (i, a) in alpha.iter().enumerate() {
            if a.field() != &field {
                return Err(Error::OwnerMismatch);
            }
            for b in &alpha[..i] {
                if a == b {
                    return Err(Error::RepeatedAlpha);
                }
            }
        }
        let mut entries = Vec::with_capacity(k * n);
        for q in 0..k {
            for a in alpha {
                entries.push(a.pow(q as u64));
            }
        }
        let gen = Matrix::new(Arc::clone(&field), k, n, entries)?;
        let mut code = Self::from_generator(gen)?;
        code.alpha = Some(alpha.to_vec());
        Ok(code)
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    /// Evaluation vector, when the code was built as (or derived from)
    /// Reed-Solomon codes over a common α.
    pub fn rs_alpha(&self) -> Option<&[FieldElement]> {
        self.alpha.as_deref()
    }

    /// The rref of the generator; the canonical representative used for
    /// code equality.
    pub fn canonical_generator(&self) -> &Matrix {
        self.canonical.get_or_init(|| self.generator.rref().matrix)
    }

    /// Cached parity-check matrix H (N×(N−K)) with generator·H = 0, taken as
    /// the deterministic null-space basis. Not normalized; see
    /// [`LinearCode::systematic_parity_check`] for the identity-top form.
    pub fn parity_check(&self) -> &Matrix {
        self.parity.get_or_init(|| self.generator.null_space())
    }

    /// Minimum distance. Uses the MDS closed form N−K+1 when the code is
    /// flagged Reed-Solomon, otherwise enumerates codewords (guarded).
    pub fn min_distance(&self) -> Result<usize> {
        if let Some(&d) = self.min_dist.get() {
            return Ok(d);
        }
        let d = if self.alpha.is_some() {
            self.n - self.k + 1
        } else {
            self.min_distance_brute_force()?
        };
        let _ = self.min_dist.set(d);
        Ok(d)
    }

    /// Minimum Hamming weight over all nonzero codewords, by enumeration.
    ///
    /// Guarded at 2^24 codewords. Enumerates one representative per
    /// projective class (first nonzero message digit fixed to 1), which
    /// preserves the minimum since weight is invariant under scaling.
    pub fn min_distance_brute_force(&self) -> Result<usize> {
        let q = self.field.order() as u128;
        let total = q.checked_pow(self.k as u32).unwrap_or(u128::MAX);
        if total > MIN_DISTANCE_GUARD {
            return Err(Error::EnumerationGuard {
                size: total,
                guard: MIN_DISTANCE_GUARD,
            });
        }
        let m = self.field.degree();
        // Flat little-endian digit buffers: one scaled copy of each generator
        // row per scalar, so the recursion below only ever adds rows.
        let scaled: Vec<Vec<Vec<u64>>> = (0..self.k)
            .map(|r| {
                (0..self.field.order())
                    .map(|s| {
                        let scalar = self.field.from_index(s);
                        let mut buf = Vec::with_capacity(self.n * m);
                        for e in self.generator.row(r) {
                            buf.extend_from_slice(scalar.mul(e).expect("same field").coeffs());
                        }
                        buf
                    })
                    .collect()
            })
            .collect();

        let mut best = self.n + 1;
        let mut current = vec![0u64; self.n * m];
        self.min_weight_rec(&scaled, 0, true, &mut current, &mut best);
        if best > self.n {
            return Err(Error::InvariantViolation(
                "no nonzero codeword found".into(),
            ));
        }
        Ok(best)
    }

    fn min_weight_rec(
        &self,
        scaled: &[Vec<Vec<u64>>],
        row: usize,
        all_zero_so_far: bool,
        current: &mut Vec<u64>,
        best: &mut usize,
    ) {
        let m = self.field.degree();
        if row == self.k {
            if all_zero_so_far {
                return;
            }
            let weight = current
                .chunks(m)
                .filter(|c| c.iter().any(|&d| d != 0))
                .count();
            if weight < *best {
                *best = weight;
            }
            return;
        }
        let q = self.field.order();
        // While the message prefix is all zero, the first nonzero digit can
        // be fixed to 1: every codeword is a scalar multiple of such a one.
        let last = if all_zero_so_far { 1 } else { q - 1 };
        for s in 0..=last {
            if s != 0 {
                self.field
                    .add_digits_assign(current, &scaled[row][s as usize]);
            }
            self.min_weight_rec(scaled, row + 1, all_zero_so_far && s == 0, current, best);
            if s != 0 {
                // Undo by adding the scaled row for the negated scalar.
                let neg_idx = self.field.from_index(s).neg().index() as usize;
                self.field.add_digits_assign(current, &scaled[row][neg_idx]);
            }
        }
    }

    /// True iff the code is MDS: D = N−K+1.
    pub fn is_mds(&self) -> Result<bool> {
        Ok(self.min_distance()? == self.n - self.k + 1)
    }

    /// Star (Schur) product: the span of all coordinatewise products of
    /// codewords, generated by the pairwise products of generator rows.
    /// The result's generator is in rref canonical form.
    ///
    /// When both inputs carry the same Reed-Solomon evaluation vector, the
    /// result is flagged RS of dimension min{K+L−1, N} (cross-checked against
    /// the computed span dimension).
    pub fn star_product(&self, other: &LinearCode) -> Result<LinearCode> {
        if self.field != other.field {
            return Err(Error::OwnerMismatch);
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "star product of lengths {} and {}",
                self.n, other.n
            )));
        }
        // C ⋆ rep(N) = C: a repetition factor only rescales coordinates, so
        // the other operand survives untouched (with its RS data).
        if other.is_repetition() {
            return self.canonical_code();
        }
        if self.is_repetition() {
            return other.canonical_code();
        }
        let mut rows = Vec::with_capacity(self.k * other.k * self.n);
        for a in self.generator.rows_iter() {
            for b in other.generator.rows_iter() {
                for (x, y) in a.iter().zip(b) {
                    rows.push(x.mul(y)?);
                }
            }
        }
        let products = Matrix::new(Arc::clone(&self.field), self.k * other.k, self.n, rows)?;
        let rref = products.rref();
        let dim = rref.rank;
        let gen_entries: Vec<FieldElement> = (0..dim)
            .flat_map(|r| rref.matrix.row(r).iter().cloned())
            .collect();
        let gen = Matrix::new(Arc::clone(&self.field), dim, self.n, gen_entries)?;
        let mut code = LinearCode::from_generator(gen)?;
        if let (Some(a), Some(b)) = (&self.alpha, &other.alpha) {
            if a == b && dim == (self.k + other.k - 1).min(self.n) {
                code.alpha = Some(a.clone());
            }
        }
        Ok(code)
    }

    /// G-fold star product of the code with itself; G = 1 returns the code
    /// with canonical generator.
    pub fn star_power(&self, g: usize) -> Result<LinearCode> {
        if g < 1 {
            return Err(Error::DimensionMismatch("star power needs G >= 1".into()));
        }
        let mut acc = self.canonical_code()?;
        for _ in 1..g {
            acc = acc.star_product(self)?;
        }
        Ok(acc)
    }

    /// The same code with its canonical (rref) generator.
    fn canonical_code(&self) -> Result<LinearCode> {
        let gen = self.canonical_generator().clone();
        let mut code = LinearCode::from_generator(gen)?;
        code.alpha = self.alpha.clone();
        if let Some(&d) = self.min_dist.get() {
            let _ = code.min_dist.set(d);
        }
        Ok(code)
    }

    /// Parity-check matrix with identity top block: for any codeword c and
    /// error prefix e of length N−K, (c + [e, 0])·H = e.
    pub fn systematic_parity_check(&self) -> Result<Matrix> {
        let h = self.parity_check();
        let r = self.n - self.k;
        if r == 0 {
            return Ok(Matrix::zero(&self.field, self.n, 0));
        }
        // Top r×r block of H, to be inverted by solving against the identity.
        let mut top_entries = Vec::with_capacity(r * r);
        for i in 0..r {
            top_entries.extend(h.row(i).iter().cloned());
        }
        let top = Matrix::new(Arc::clone(&self.field), r, r, top_entries)?;
        let rref = top.rref();
        if rref.rank < r {
            return Err(Error::NoSystematicForm);
        }
        // H · top^{-1} has identity in its top block.
        let inv = invert_square(&top)?;
        h.mul(&inv)
    }

    /// Equivalent generator with identity left K×K block. Fails (rather than
    /// permuting columns) when the first K columns are dependent: column
    /// permutation would change which servers are systematic.
    pub fn to_systematic(&self) -> Result<LinearCode> {
        let rref = self.generator.rref();
        let expected: Vec<usize> = (0..self.k).collect();
        if rref.pivot_cols != expected {
            return Err(Error::CannotSystematize);
        }
        let mut code = LinearCode::from_generator(rref.matrix)?;
        code.alpha = self.alpha.clone();
        if let Some(&d) = self.min_dist.get() {
            let _ = code.min_dist.set(d);
        }
        Ok(code)
    }

    /// True iff the code is the repetition code rep(N).
    pub fn is_repetition(&self) -> bool {
        self.k == 1
            && self
                .canonical_generator()
                .row(0)
                .iter()
                .all(FieldElement::is_one)
    }

    /// True iff the generator's left K×K block is the identity.
    pub fn is_systematic(&self) -> bool {
        for r in 0..self.k {
            for c in 0..self.k {
                let e = self.generator.at(r, c);
                if (r == c && !e.is_one()) || (r != c && !e.is_zero()) {
                    return false;
                }
            }
        }
        true
    }

    /// Base-field extension: the same generator with entries embedded into
    /// `target`. Length, dimension, and minimum distance are unchanged, and
    /// the parity-check matrix embeds verbatim.
    pub fn extend_to(&self, target: &Arc<FieldSpec>) -> Result<LinearCode> {
        if &self.field == target {
            return Ok(self.clone());
        }
        let gen = self.generator.embed_into(target)?;
        let mut code = LinearCode::from_generator(gen)?;
        code.alpha = match &self.alpha {
            Some(a) => Some(
                a.iter()
                    .map(|e| e.embed_into(target))
                    .collect::<Result<Vec<_>>>()?,
            ),
            None => None,
        };
        if let Some(&d) = self.min_dist.get() {
            let _ = code.min_dist.set(d);
        }
        Ok(code)
    }

    /// True iff the all-ones vector lies in the row space.
    pub fn contains_repetition(&self) -> bool {
        let ones = Matrix::new(
            Arc::clone(&self.field),
            1,
            self.n,
            vec![self.field.one(); self.n],
        )
        .expect("shape");
        match self.generator.vstack(&ones) {
            Ok(stacked) => stacked.rref().rank == self.k,
            Err(_) => false,
        }
    }

    /// Attach a Reed-Solomon evaluation vector. Callers must have verified
    /// that the code really is RS_K over `alpha` (descriptor parsing checks
    /// against the Vandermonde construction before calling this).
    pub(crate) fn with_rs_alpha(mut self, alpha: Vec<FieldElement>) -> LinearCode {
        self.alpha = Some(alpha);
        self
    }

    /// True iff `word` is a codeword.
    pub fn contains_word(&self, word: &[FieldElement]) -> Result<bool> {
        if word.len() != self.n {
            return Err(Error::DimensionMismatch("word length".into()));
        }
        let row = Matrix::new(Arc::clone(&self.field), 1, self.n, word.to_vec())?;
        Ok(self.generator.vstack(&row)?.rref().rank == self.k)
    }

    /// True iff every codeword of `other` is a codeword of `self`.
    pub fn contains_code(&self, other: &LinearCode) -> Result<bool> {
        if self.field != other.field || self.n != other.n {
            return Ok(false);
        }
        Ok(self.generator.vstack(&other.generator)?.rref().rank == self.k)
    }
}

/// Inverse of a square matrix via elimination of [M | I].
fn invert_square(m: &Matrix) -> Result<Matrix> {
    let n = m.rows();
    if n != m.cols() {
        return Err(Error::DimensionMismatch("inverse of non-square".into()));
    }
    let field = Arc::clone(m.field());
    let id = Matrix::identity(&field, n);
    let mut entries = Vec::with_capacity(n * 2 * n);
    for r in 0..n {
        entries.extend(m.row(r).iter().cloned());
        entries.extend(id.row(r).iter().cloned());
    }
    let aug = Matrix::new(Arc::clone(&field), n, 2 * n, entries)?;
    let rref = aug.rref();
    if rref.pivot_cols.iter().take(n).cloned().collect::<Vec<_>>() != (0..n).collect::<Vec<_>>() {
        return Err(Error::NoSystematicForm);
    }
    let mut inv = Matrix::zero(&field, n, n);
    for r in 0..n {
        for c in 0..n {
            *inv.at_mut(r, c) = rref.matrix.at(r, n + c).clone();
        }
    }
    Ok(inv)
}

impl PartialEq for LinearCode {
    /// Canonical code equality: same field and length, identical rref
    /// generators.
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.n == other.n
            && self.k == other.k
            && self.canonical_generator() == other.canonical_generator()
    }
}

impl Eq for LinearCode {}

impl std::fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}, {}] code over {}{}",
            self.n,
            self.k,
            self.field,
            if self.alpha.is_some() { " (RS)" } else { "" }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::FieldSpec;

    fn gf(p: u64) -> Arc<FieldSpec> {
        FieldSpec::prime(p).unwrap()
    }

    fn alpha_range(field: &Arc<FieldSpec>, n: usize) -> Vec<FieldElement> {
        (0..n as u64).map(|i| field.from_index(i)).collect()
    }

    #[test]
    fn repetition_code_basics() {
        let f = gf(2);
        let rep = LinearCode::repetition(3, &f).unwrap();
        assert_eq!(
            rep.generator().row(0).iter().filter(|e| e.is_one()).count(),
            3
        );
        assert_eq!(rep.min_distance().unwrap(), 3);
        assert!(rep.is_mds().unwrap());
        let rep5 = LinearCode::repetition(5, &gf(3)).unwrap();
        assert_eq!(rep5.min_distance_brute_force().unwrap(), 5);
    }

    #[test]
    fn star_with_repetition_is_identity() {
        let f = gf(3);
        let c = LinearCode::from_generator(
            Matrix::from_rows_of_indices(&f, &[vec![1, 0, 2, 1, 0], vec![0, 1, 1, 2, 2]]).unwrap(),
        )
        .unwrap();
        let rep = LinearCode::repetition(5, &f).unwrap();
        assert_eq!(c.star_product(&rep).unwrap(), c);
        // Independent route: the raw span of all row-pair products must give
        // the same code as the repetition shortcut.
        let mut rows = Vec::new();
        for a in c.generator().rows_iter() {
            for b in rep.generator().rows_iter() {
                for (x, y) in a.iter().zip(b) {
                    rows.push(x.mul(y).unwrap());
                }
            }
        }
        let span = Matrix::new(Arc::clone(&f), 2, 5, rows).unwrap();
        let oracle = LinearCode::from_generator(span.rref().matrix).unwrap();
        assert_eq!(c.star_product(&rep).unwrap(), oracle);
    }

    #[test]
    fn rs_generator_is_vandermonde() {
        let f = gf(3);
        let code = LinearCode::reed_solomon(&alpha_range(&f, 3), 2).unwrap();
        let expect = Matrix::from_rows_of_indices(&f, &[vec![1, 1, 1], vec![0, 1, 2]]).unwrap();
        assert_eq!(code.generator(), &expect);
    }

    #[test]
    fn rs_k1_is_repetition() {
        let f = gf(5);
        let rs = LinearCode::reed_solomon(&alpha_range(&f, 4), 1).unwrap();
        let rep = LinearCode::repetition(4, &f).unwrap();
        assert_eq!(rs, rep);
    }

    #[test]
    fn rs_rejects_repeated_alpha() {
        let f = gf(5);
        let alpha = vec![f.from_int(1), f.from_int(1), f.from_int(2)];
        assert_eq!(
            LinearCode::reed_solomon(&alpha, 2).unwrap_err(),
            Error::RepeatedAlpha
        );
    }

    #[test]
    fn rs_min_distance_matches_closed_form_gf7() {
        let f = gf(7);
        for n in 1..=7usize {
            let alpha = alpha_range(&f, n);
            for k in 1..=n {
                let code = LinearCode::reed_solomon(&alpha, k).unwrap();
                assert_eq!(code.min_distance_brute_force().unwrap(), n - k + 1);
                assert_eq!(code.min_distance().unwrap(), n - k + 1);
            }
        }
    }

    #[test]
    fn rs_star_identities_gf5() {
        let f = gf(5);
        let n = 4;
        let alpha = alpha_range(&f, n);
        let rs2 = LinearCode::reed_solomon(&alpha, 2).unwrap();
        let rs3 = LinearCode::reed_solomon(&alpha, 3).unwrap();
        assert_eq!(rs2.star_product(&rs2).unwrap(), rs3);
        // Star-power identity.
        for g in 1..=4usize {
            let lhs = rs2.star_power(g).unwrap();
            let rhs = LinearCode::reed_solomon(&alpha, (g + 1).min(n)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn star_product_span_check_exhaustive() {
        // Every c⋆d of exhaustively enumerated codewords lies in the result.
        let f = gf(3);
        let c = LinearCode::from_generator(
            Matrix::from_rows_of_indices(&f, &[vec![1, 0, 2, 1, 0], vec![0, 1, 1, 2, 2]]).unwrap(),
        )
        .unwrap();
        let d = LinearCode::from_generator(
            Matrix::from_rows_of_indices(&f, &[vec![1, 1, 0, 0, 1], vec![0, 2, 1, 0, 1]]).unwrap(),
        )
        .unwrap();
        let star = c.star_product(&d).unwrap();
        assert!(star.dimension() <= (c.dimension() * d.dimension()).min(5));
        for mc in 0..9u64 {
            for md in 0..9u64 {
                let vc = c
                    .generator()
                    .row_vec_mul(&[f.from_index(mc % 3), f.from_index(mc / 3)])
                    .unwrap();
                let vd = d
                    .generator()
                    .row_vec_mul(&[f.from_index(md % 3), f.from_index(md / 3)])
                    .unwrap();
                let prod: Vec<FieldElement> =
                    vc.iter().zip(&vd).map(|(a, b)| a.mul(b).unwrap()).collect();
                assert!(star.contains_word(&prod).unwrap());
            }
        }
    }

    #[test]
    fn star_power_monotone_when_contains_repetition() {
        let f = gf(5);
        let c = LinearCode::reed_solomon(&alpha_range(&f, 5), 2).unwrap();
        assert!(c.contains_repetition());
        let c1 = c.star_power(1).unwrap();
        let c2 = c.star_power(2).unwrap();
        assert!(c2.contains_code(&c1).unwrap());
    }

    #[test]
    fn min_distance_brute_force_matches_full_enumeration() {
        let f = gf(2);
        let gen = Matrix::from_rows_of_indices(
            &f,
            &[
                vec![1, 0, 1, 1, 0, 0],
                vec![0, 1, 1, 0, 1, 0],
                vec![1, 1, 0, 0, 0, 1],
            ],
        )
        .unwrap();
        let code = LinearCode::from_generator(gen.clone()).unwrap();
        // Independent oracle: all 8 messages.
        let mut best = usize::MAX;
        for msg in 1..8u64 {
            let m: Vec<FieldElement> = (0..3).map(|i| f.from_index((msg >> i) & 1)).collect();
            let word = gen.row_vec_mul(&m).unwrap();
            let w = word.iter().filter(|e| !e.is_zero()).count();
            best = best.min(w);
        }
        assert_eq!(code.min_distance_brute_force().unwrap(), best);
    }

    #[test]
    fn min_distance_guard_trips() {
        let f = gf(7);
        let gen = Matrix::identity(&f, 10);
        let code = LinearCode::from_generator(gen).unwrap();
        assert!(matches!(
            code.min_distance_brute_force(),
            Err(Error::EnumerationGuard { .. })
        ));
    }

    #[test]
    fn systematic_parity_check_example_code() {
        // The [3,2] code with generator [[1,0,1],[0,1,1]] over GF(2) has the
        // all-ones column as its systematic parity check.
        let f = gf(2);
        let d = LinearCode::from_generator(
            Matrix::from_rows_of_indices(&f, &[vec![1, 0, 1], vec![0, 1, 1]]).unwrap(),
        )
        .unwrap();
        let h = d.systematic_parity_check().unwrap();
        assert_eq!(h.rows(), 3);
        assert_eq!(h.cols(), 1);
        for r in 0..3 {
            assert!(h.at(r, 0).is_one());
        }
        assert!(d.generator().mul(&h).unwrap().is_zero());
    }

    #[test]
    fn systematic_parity_check_repetition() {
        let f = gf(5);
        let rep = LinearCode::repetition(4, &f).unwrap();
        let h = rep.systematic_parity_check().unwrap();
        // Top (N−1)x(N−1) identity, bottom row all −1.
        for i in 0..3 {
            for j in 0..3 {
                let e = h.at(i, j);
                assert_eq!(e.is_one(), i == j);
                assert_eq!(e.is_zero(), i != j);
            }
        }
        for j in 0..3 {
            assert_eq!(h.at(3, j), &f.from_int(4));
        }
        assert!(rep.generator().mul(&h).unwrap().is_zero());
    }

    #[test]
    fn systematic_parity_check_extracts_error_prefix() {
        let f = gf(7);
        let d = LinearCode::reed_solomon(&alpha_range(&f, 5), 3).unwrap();
        let h = d.systematic_parity_check().unwrap();
        // v = c + [e1, e2, 0, 0, 0] satisfies v·H = [e1, e2].
        let c = d
            .generator()
            .row_vec_mul(&[f.from_int(2), f.from_int(5), f.from_int(1)])
            .unwrap();
        let e = [f.from_int(3), f.from_int(6)];
        let mut v = c.clone();
        v[0] = &v[0] + &e[0];
        v[1] = &v[1] + &e[1];
        let vm = Matrix::new(Arc::clone(&f), 1, 5, v).unwrap();
        let syndrome = vm.mul(&h).unwrap();
        assert_eq!(syndrome.at(0, 0), &e[0]);
        assert_eq!(syndrome.at(0, 1), &e[1]);
    }

    #[test]
    fn to_systematic_vandermonde() {
        let f = gf(5);
        let rs = LinearCode::reed_solomon(&alpha_range(&f, 4), 2).unwrap();
        let sys = rs.to_systematic().unwrap();
        assert!(sys.is_systematic());
        assert_eq!(sys, rs);
        // Already systematic input is unchanged.
        let again = sys.to_systematic().unwrap();
        assert_eq!(again.generator(), sys.generator());
    }

    #[test]
    fn to_systematic_refuses_column_permutation() {
        let f = gf(2);
        // First column zero: cannot systematize without permuting.
        let gen = Matrix::from_rows_of_indices(&f, &[vec![0, 1, 1]]).unwrap();
        let code = LinearCode::from_generator(gen).unwrap();
        assert_eq!(code.to_systematic().unwrap_err(), Error::CannotSystematize);
    }

    #[test]
    fn extend_field_preserves_everything() {
        let f2 = gf(2);
        let f4 = FieldSpec::extension(2, 2).unwrap();
        let c = LinearCode::from_generator(
            Matrix::from_rows_of_indices(&f2, &[vec![1, 0, 1, 1], vec![0, 1, 1, 0]]).unwrap(),
        )
        .unwrap();
        let ck = c.extend_to(&f4).unwrap();
        assert_eq!(ck.length(), 4);
        assert_eq!(ck.dimension(), 2);
        assert_eq!(
            ck.min_distance_brute_force().unwrap(),
            c.min_distance_brute_force().unwrap()
        );
        // The base-field parity check works verbatim for the extension.
        let h_embedded = c.parity_check().embed_into(&f4).unwrap();
        assert!(ck.generator().mul(&h_embedded).unwrap().is_zero());
        // Generator pattern is identical.
        for r in 0..2 {
            for col in 0..4 {
                assert_eq!(
                    ck.generator().at(r, col),
                    &c.generator().at(r, col).embed_into(&f4).unwrap()
                );
            }
        }
        // Star product commutes with extension.
        let d = LinearCode::repetition(4, &f2).unwrap();
        let lhs = c.star_product(&d).unwrap().extend_to(&f4).unwrap();
        let rhs = ck.star_product(&d.extend_to(&f4).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn extension_of_rs_is_rs() {
        let f5 = gf(5);
        let f25 = FieldSpec::extension(5, 2).unwrap();
        let rs = LinearCode::reed_solomon(&alpha_range(&f5, 4), 2).unwrap();
        let ext = rs.extend_to(&f25).unwrap();
        let alpha_k: Vec<FieldElement> = alpha_range(&f5, 4)
            .iter()
            .map(|a| a.embed_into(&f25).unwrap())
            .collect();
        assert_eq!(ext, LinearCode::reed_solomon(&alpha_k, 2).unwrap());
        assert!(ext.rs_alpha().is_some());
    }

    #[test]
    fn contains_repetition_cases() {
        let f = gf(2);
        assert!(LinearCode::repetition(4, &f).unwrap().contains_repetition());
        let no =
            LinearCode::from_generator(Matrix::from_rows_of_indices(&f, &[vec![1, 0]]).unwrap())
                .unwrap();
        assert!(!no.contains_repetition());
        let f7 = gf(7);
        let rs = LinearCode::reed_solomon(&alpha_range(&f7, 6), 3).unwrap();
        assert!(rs.contains_repetition());
    }

    #[test]
    fn mds_every_k_columns_independent() {
        fn subsets(
            n: usize,
            k: usize,
            start: usize,
            cur: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                subsets(n, k, i + 1, cur, out);
                cur.pop();
            }
        }
        let f11 = gf(11);
        let f7 = gf(7);
        let mds_codes = [
            LinearCode::reed_solomon(&alpha_range(&f11, 8), 3).unwrap(),
            LinearCode::reed_solomon(&alpha_range(&f7, 6), 4).unwrap(),
            LinearCode::repetition(5, &f7).unwrap(),
        ];
        for code in &mds_codes {
            assert!(code.is_mds().unwrap());
            let (k, n) = (code.dimension(), code.length());
            let mut all = vec![];
            subsets(n, k, 0, &mut vec![], &mut all);
            for cols in all {
                let mut entries: Vec<FieldElement> = Vec::with_capacity(k * k);
                for r in 0..k {
                    for &c in &cols {
                        entries.push(code.generator().at(r, c).clone());
                    }
                }
                let sub = Matrix::new(Arc::clone(code.field()), k, k, entries).unwrap();
                assert_eq!(sub.rank(), k);
            }
        }
    }

    #[test]
    fn parity_check_defining_property() {
        let f = gf(7);
        let code = LinearCode::reed_solomon(&alpha_range(&f, 6), 2).unwrap();
        let h = code.parity_check();
        assert_eq!(h.rows(), 6);
        assert_eq!(h.cols(), 4);
        assert!(code.generator().mul(h).unwrap().is_zero());
        assert_eq!(h.rank(), 4);
    }
}
