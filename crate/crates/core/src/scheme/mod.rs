//! The two T-private computation schemes and their shared mask machinery.
//!
//! Both schemes hide the requested functions behind masks built from random
//! codewords of an [N, T] MDS retrieval code D: sample codewords d^1..d^Q
//! uniformly and give server n the mask
//!
//! ψ_n = d^1(n)·ψ^1 + ··· + d^Q(n)·ψ^Q
//!
//! where ψ^1..ψ^Q is the basis of the public query space. Any T servers see
//! a uniform tuple on Q^T (the MDS projection onto T coordinates is
//! surjective), so adding a requested function to a mask reveals nothing.

pub mod replicated;
pub mod systematic;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::algebra::field::FieldElement;
use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::polyspace::{linear_combine, Polynomial, QuerySpace};

/// Per-iteration randomness: one ChaCha stream per iteration index, all
/// derived from the session seed. Streams are independent, which is what
/// makes per-iteration privacy compose across iterations.
pub fn mask_rng(seed: u64, iteration: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(iteration);
    rng
}

/// The sampled codewords d^1..d^Q of the retrieval code, plus the masks
/// ψ_1..ψ_N they define.
#[derive(Clone, Debug)]
pub struct MaskSet {
    codewords: Vec<Vec<FieldElement>>,
    masks: Vec<Polynomial>,
}

impl MaskSet {
    /// The Q codeword draws, each of length N.
    pub fn codewords(&self) -> &[Vec<FieldElement>] {
        &self.codewords
    }

    /// ψ_1..ψ_N (0-indexed).
    pub fn masks(&self) -> &[Polynomial] {
        &self.masks
    }

    pub fn mask(&self, server: usize) -> &Polynomial {
        &self.masks[server]
    }
}

/// Sample Q i.i.d.-uniform codewords of `code` (uniform message vector times
/// the generator) and form the masks.
pub fn make_masks<R: Rng + ?Sized>(
    code: &LinearCode,
    space: &QuerySpace,
    rng: &mut R,
) -> Result<MaskSet> {
    let field = code.field();
    let order = field.order();
    let t = code.dimension();
    let codewords = (0..space.dimension())
        .map(|_| {
            let message: Vec<FieldElement> = (0..t)
                .map(|_| field.from_index(rng.random_range(0..order)))
                .collect();
            code.generator().row_vec_mul(&message)
        })
        .collect::<Result<Vec<_>>>()?;
    make_masks_from_codewords(code, space, codewords)
}

/// Deterministic core of [`make_masks`]: build ψ_n = Σ_q d^q(n)·ψ^q from
/// explicit codewords (each validated to lie in the code).
pub fn make_masks_from_codewords(
    code: &LinearCode,
    space: &QuerySpace,
    codewords: Vec<Vec<FieldElement>>,
) -> Result<MaskSet> {
    if codewords.len() != space.dimension() {
        return Err(Error::DimensionMismatch(format!(
            "{} codewords for a query space of dimension {}",
            codewords.len(),
            space.dimension()
        )));
    }
    for cw in &codewords {
        if !code.contains_word(cw)? {
            return Err(Error::InvariantViolation(
                "mask codeword outside the retrieval code".into(),
            ));
        }
    }
    let basis_polys: Vec<Polynomial> = (0..space.dimension())
        .map(|q| space.basis_poly(q))
        .collect();
    let masks = (0..code.length())
        .map(|n| {
            let scalars: Vec<FieldElement> = codewords.iter().map(|cw| cw[n].clone()).collect();
            linear_combine(&scalars, &basis_polys)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MaskSet { codewords, masks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::FieldSpec;
    use rand::Rng;

    #[test]
    fn all_zero_codewords_give_zero_masks() {
        let f = FieldSpec::prime(2).unwrap();
        let d = LinearCode::repetition(3, &f).unwrap();
        let space = QuerySpace::polynomials(&f, 1, 2).unwrap();
        let zeros = vec![vec![f.zero(); 3]; space.dimension()];
        let masks = make_masks_from_codewords(&d, &space, zeros).unwrap();
        assert!(masks.masks().iter().all(Polynomial::is_zero));
    }

    #[test]
    fn masks_recompute_from_codewords() {
        let f = FieldSpec::prime(5).unwrap();
        let alpha: Vec<_> = (0..4).map(|i| f.from_index(i)).collect();
        let d = LinearCode::reed_solomon(&alpha, 2).unwrap();
        let space = QuerySpace::polynomials(&f, 2, 2).unwrap();
        for seed in 0..5u64 {
            let masks = make_masks(&d, &space, &mut mask_rng(seed, 0)).unwrap();
            // ψ_n = Σ_q d^q(n)·ψ^q, recomputed independently.
            for n in 0..4 {
                let mut expect = Polynomial::zero(&f, 2);
                for q in 0..space.dimension() {
                    expect = expect
                        .add(&space.basis_poly(q).scale(&masks.codewords()[q][n]).unwrap())
                        .unwrap();
                }
                assert_eq!(masks.mask(n), &expect);
            }
        }
    }

    #[test]
    fn mask_rng_streams_are_reproducible_and_distinct() {
        let mut a = mask_rng(7, 0);
        let mut b = mask_rng(7, 0);
        let mut c = mask_rng(7, 1);
        let xs: Vec<u64> = (0..8).map(|_| a.random()).collect();
        let ys: Vec<u64> = (0..8).map(|_| b.random()).collect();
        let zs: Vec<u64> = (0..8).map(|_| c.random()).collect();
        assert_eq!(xs, ys);
        assert_ne!(xs, zs);
    }

    #[test]
    fn rejects_codeword_outside_code() {
        let f = FieldSpec::prime(2).unwrap();
        let d = crate::codes::LinearCode::from_generator(
            crate::algebra::matrix::Matrix::from_rows_of_indices(
                &f,
                &[vec![1, 0, 1], vec![0, 1, 1]],
            )
            .unwrap(),
        )
        .unwrap();
        let space = QuerySpace::polynomials(&f, 1, 1).unwrap();
        // [1,0,0] is not in the code (codewords have even weight on the
        // parity position).
        let bad = vec![vec![f.one(), f.zero(), f.zero()]];
        assert!(make_masks_from_codewords(&d, &space, bad).is_err());
    }
}
