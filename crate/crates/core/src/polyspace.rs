//! Multivariate polynomial query spaces.
//!
//! The query space of degree bound G in M variables holds every polynomial
//! with base-field coefficients, no constant term, and total degree at most
//! G. Its basis is the set of monomials with degree in [1, G], ordered
//! graded-lexicographically so wire formats and transcripts are
//! reproducible. Queries, masks, and requested functions all live here;
//! evaluation embeds the base-field coefficients into the extension field
//! the data lives in.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use crate::algebra::field::{FieldElement, FieldSpec};
use crate::error::{Error, Result};

/// A monomial X_1^{a_1}···X_M^{a_M}, stored as its exponent vector.
///
/// Ordering is graded-lexicographic: first by total degree, then by exponent
/// vector with X_1 heaviest (so for M = 2, G = 2: X1, X2, X1², X1X2, X2²).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial { exponents }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn num_vars(&self) -> usize {
        self.exponents.len()
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// Evaluate at a point, one element per variable.
    pub fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.exponents.len() {
            return Err(Error::ArityMismatch {
                expected: self.exponents.len(),
                got: point.len(),
            });
        }
        let field = Arc::clone(point[0].field());
        let mut acc = field.one();
        for (x, &e) in point.iter().zip(&self.exponents) {
            if e > 0 {
                acc = acc.mul(&x.pow(e as u64))?;
            }
        }
        Ok(acc)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.exponents.cmp(&self.exponents))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Debug for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut wrote = false;
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if wrote {
                write!(f, "·")?;
            }
            write!(f, "X{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// A sparse multivariate polynomial with base-field coefficients. Stored
/// coefficients are always nonzero; the zero polynomial has no terms.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: Arc<FieldSpec>,
    num_vars: usize,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl Polynomial {
    pub fn zero(field: &Arc<FieldSpec>, num_vars: usize) -> Self {
        Polynomial {
            field: Arc::clone(field),
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        field: &Arc<FieldSpec>,
        num_vars: usize,
        terms: impl IntoIterator<Item = (Monomial, FieldElement)>,
    ) -> Result<Self> {
        let mut poly = Self::zero(field, num_vars);
        for (m, c) in terms {
            poly.add_term(m, c)?;
        }
        Ok(poly)
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> FieldElement {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: FieldElement) -> Result<()> {
        if m.num_vars() != self.num_vars {
            return Err(Error::ArityMismatch {
                expected: self.num_vars,
                got: m.num_vars(),
            });
        }
        if c.field() != &self.field {
            return Err(Error::OwnerMismatch);
        }
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&c)?;
                if sum.is_zero() {
                    o.remove();
                } else {
                    o.insert(sum);
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        if self.num_vars != other.num_vars {
            return Err(Error::ArityMismatch {
                expected: self.num_vars,
                got: other.num_vars,
            });
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, s: &FieldElement) -> Result<Polynomial> {
        let mut out = Self::zero(&self.field, self.num_vars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), s.mul(c)?)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        let minus_one = self.field.one().neg();
        self.add(&other.scale(&minus_one)?)
    }

    /// Evaluate at a column of extension-field elements; coefficients are
    /// embedded into the point's field. Σ coeff · Π x_m^{a_m}.
    pub fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.num_vars {
            return Err(Error::ArityMismatch {
                expected: self.num_vars,
                got: point.len(),
            });
        }
        let target = if point.is_empty() {
            Arc::clone(&self.field)
        } else {
            Arc::clone(point[0].field())
        };
        let mut acc = target.zero();
        for (m, c) in &self.terms {
            let term = c.embed_into(&target)?.mul(&m.evaluate(point)?)?;
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }
}

impl std::fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("{c:?}·{m:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// F-linear combination Σ scalars\[i\]·polys\[i\] with zero-coefficient cleanup.
pub fn linear_combine(scalars: &[FieldElement], polys: &[Polynomial]) -> Result<Polynomial> {
    if scalars.len() != polys.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} scalars for {} polynomials",
            scalars.len(),
            polys.len()
        )));
    }
    if polys.is_empty() {
        return Err(Error::DimensionMismatch("empty combination".into()));
    }
    let mut acc = Polynomial::zero(polys[0].field(), polys[0].num_vars());
    for (s, p) in scalars.iter().zip(polys) {
        acc = acc.add(&p.scale(s)?)?;
    }
    Ok(acc)
}

/// The query space: monomials with total degree in [1, G] over M variables,
/// in graded-lexicographic order, with coefficients in a base field.
///
/// `from_monomials` is the generic hook for other F-linear spaces given by a
/// monomial basis (e.g. the degree-exactly-1 linear maps).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuerySpace {
    field: Arc<FieldSpec>,
    num_vars: usize,
    degree_bound: u32,
    basis: Vec<Monomial>,
}

impl QuerySpace {
    /// All monomials with 1 ≤ degree ≤ G: dimension C(M+G, M) − 1.
    pub fn polynomials(field: &Arc<FieldSpec>, num_vars: usize, degree_bound: u32) -> Result<Self> {
        if num_vars < 1 || degree_bound < 1 {
            return Err(Error::Config("query space needs M >= 1 and G >= 1".into()));
        }
        let mut basis = Vec::new();
        let mut exps = vec![0u32; num_vars];
        enumerate_exponents(&mut exps, 0, degree_bound, &mut basis);
        basis.sort();
        Ok(QuerySpace {
            field: Arc::clone(field),
            num_vars,
            degree_bound,
            basis,
        })
    }

    /// The space of linear functionals: monomials of degree exactly 1.
    pub fn linear(field: &Arc<FieldSpec>, num_vars: usize) -> Result<Self> {
        Self::polynomials(field, num_vars, 1)
    }

    /// Generic hook: a space spanned by an explicit duplicate-free monomial
    /// list (sorted into graded-lex order).
    pub fn from_monomials(
        field: &Arc<FieldSpec>,
        num_vars: usize,
        mut basis: Vec<Monomial>,
    ) -> Result<Self> {
        if basis.is_empty() || basis.iter().any(|m| m.num_vars() != num_vars) {
            return Err(Error::Config("bad monomial basis".into()));
        }
        basis.sort();
        basis.dedup();
        let degree_bound = basis.iter().map(Monomial::degree).max().unwrap_or(0);
        Ok(QuerySpace {
            field: Arc::clone(field),
            num_vars,
            degree_bound,
            basis,
        })
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    /// Q = dim over the base field.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// The q-th basis polynomial ψ^q (a single monomial with coefficient 1).
    pub fn basis_poly(&self, q: usize) -> Polynomial {
        let mut poly = Polynomial::zero(&self.field, self.num_vars);
        poly.add_term(self.basis[q].clone(), self.field.one())
            .expect("basis term");
        poly
    }

    /// Uniform sample: each basis coefficient i.i.d. uniform over the field.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Polynomial {
        let order = self.field.order();
        let mut poly = Polynomial::zero(&self.field, self.num_vars);
        for m in &self.basis {
            let c = self.field.from_index(rng.random_range(0..order));
            poly.add_term(m.clone(), c).expect("basis term");
        }
        poly
    }

    /// True iff every monomial of `poly` lies in the basis (and fields and
    /// arities agree).
    pub fn contains(&self, poly: &Polynomial) -> bool {
        poly.field() == &self.field
            && poly.num_vars() == self.num_vars
            && poly
                .terms()
                .all(|(m, _)| self.basis.binary_search(m).is_ok())
    }

    /// Coordinates of `poly` in the basis.
    pub fn coeff_vector(&self, poly: &Polynomial) -> Result<Vec<FieldElement>> {
        if !self.contains(poly) {
            return Err(Error::QueryOutsideSpace);
        }
        Ok(self.basis.iter().map(|m| poly.coefficient(m)).collect())
    }

    /// Polynomial with the given coordinates in the basis.
    pub fn from_coeff_vector(&self, coeffs: &[FieldElement]) -> Result<Polynomial> {
        if coeffs.len() != self.basis.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a basis of {}",
                coeffs.len(),
                self.basis.len()
            )));
        }
        let mut poly = Polynomial::zero(&self.field, self.num_vars);
        for (m, c) in self.basis.iter().zip(coeffs) {
            poly.add_term(m.clone(), c.clone())?;
        }
        Ok(poly)
    }

    /// Number of elements of the space: |F|^Q.
    pub fn cardinality(&self) -> u128 {
        (self.field.order() as u128).pow(self.dimension() as u32)
    }

    /// All polynomials of the space in coefficient counting order.
    pub fn enumerate(&self) -> impl Iterator<Item = Polynomial> + '_ {
        let order = self.field.order() as u128;
        (0..self.cardinality()).map(move |mut idx| {
            let coeffs: Vec<FieldElement> = (0..self.dimension())
                .map(|_| {
                    let c = self.field.from_index((idx % order) as u64);
                    idx /= order;
                    c
                })
                .collect();
            self.from_coeff_vector(&coeffs).expect("basis length")
        })
    }
}

fn enumerate_exponents(exps: &mut Vec<u32>, var: usize, remaining: u32, out: &mut Vec<Monomial>) {
    if var == exps.len() {
        if exps.iter().any(|&e| e > 0) {
            out.push(Monomial::new(exps.clone()));
        }
        return;
    }
    for e in 0..=remaining {
        exps[var] = e;
        enumerate_exponents(exps, var + 1, remaining - e, out);
    }
    exps[var] = 0;
}
