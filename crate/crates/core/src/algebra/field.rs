//! Exact arithmetic in GF(p) and GF(p^m).
//!
//! A [`FieldSpec`] owns the field parameters: the characteristic `p`, the
//! extension degree `m`, and (for `m > 1`) a monic irreducible modulus over
//! Z_p. Elements are little-endian coefficient vectors mod p and always carry
//! a shared reference to their owning spec, so cross-field arithmetic is
//! rejected instead of silently producing garbage.
//!
//! Supported fields are towers GF(p) ⊂ GF(p^m) with order at most 2^20;
//! everything is computed exactly, with no lookup tables.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Maximum supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// Parameters of a finite field GF(p^m).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u64,
    m: usize,
    /// Little-endian coefficients of the monic irreducible modulus,
    /// length `m + 1`. Empty exactly when `m == 1`.
    modulus: Vec<u64>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Degree of a little-endian polynomial over Z_p, or None for the zero poly.
fn poly_degree(coeffs: &[u64]) -> Option<usize> {
    coeffs.iter().rposition(|&c| c != 0)
}

/// Remainder of `a` divided by monic `q` over Z_p, in place on a copy.
fn poly_rem(a: &[u64], q: &[u64], p: u64) -> Vec<u64> {
    let qd = poly_degree(q).expect("divisor must be nonzero");
    let mut r = a.to_vec();
    while let Some(rd) = poly_degree(&r) {
        if rd < qd {
            break;
        }
        let lead = r[rd];
        let shift = rd - qd;
        for (j, &qc) in q.iter().enumerate().take(qd + 1) {
            let sub = (lead * qc) % p;
            let idx = shift + j;
            r[idx] = (r[idx] + p - sub % p) % p;
        }
    }
    r.truncate(qd);
    r.resize(qd, 0);
    r
}

/// True iff the monic polynomial `q` (degree m >= 1) is irreducible over Z_p,
/// by trial division against every monic polynomial of degree 1..=m/2.
fn is_irreducible(q: &[u64], p: u64) -> bool {
    let m = poly_degree(q).expect("modulus must be nonzero");
    if m == 0 {
        return false;
    }
    for d in 1..=m / 2 {
        // Enumerate monic candidates of degree d by counting the low digits.
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut g = vec![0u64; d + 1];
            let mut v = idx;
            for slot in g.iter_mut().take(d) {
                *slot = v % p;
                v /= p;
            }
            g[d] = 1;
            if poly_degree(&poly_rem(q, &g, p)).is_none() {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible of degree `m` over Z_p in low-digit counting order.
/// This yields the classic moduli for the small fields: x^2+x+1 for GF(4),
/// x^3+x+1 for GF(8), x^2+1 for GF(9), x^4+x+1 for GF(16).
fn find_irreducible(p: u64, m: usize) -> Vec<u64> {
    let count = p.pow(m as u32);
    for idx in 0..count {
        let mut q = vec![0u64; m + 1];
        let mut v = idx;
        for slot in q.iter_mut().take(m) {
            *slot = v % p;
            v /= p;
        }
        q[m] = 1;
        if is_irreducible(&q, p) {
            return q;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over Z_p")
}

impl FieldSpec {
    /// The prime field GF(p).
    pub fn prime(p: u64) -> Result<Arc<FieldSpec>> {
        Self::extension(p, 1)
    }

    /// GF(p^m) with an automatically chosen modulus (first monic irreducible
    /// in counting order; deterministic across runs).
    pub fn extension(p: u64, m: usize) -> Result<Arc<FieldSpec>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::InvalidModulus(
                "extension degree must be >= 1".into(),
            ));
        }
        let order = (p as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
        if order > MAX_FIELD_ORDER as u128 {
            return Err(Error::FieldTooLarge(order.min(u64::MAX as u128) as u64));
        }
        let modulus = if m == 1 {
            Vec::new()
        } else {
            find_irreducible(p, m)
        };
        Ok(Arc::new(FieldSpec { p, m, modulus }))
    }

    /// GF(p^m) with a caller-supplied modulus (little-endian, length m+1,
    /// monic, irreducible). `modulus` must be empty when m == 1.
    pub fn with_modulus(p: u64, m: usize, modulus: Vec<u64>) -> Result<Arc<FieldSpec>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 1 {
            if !modulus.is_empty() {
                return Err(Error::InvalidModulus("prime fields take no modulus".into()));
            }
            return Self::prime(p);
        }
        if modulus.len() != m + 1 {
            return Err(Error::InvalidModulus(format!(
                "expected {} coefficients, got {}",
                m + 1,
                modulus.len()
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidModulus("coefficient out of range".into()));
        }
        if modulus[m] != 1 {
            return Err(Error::InvalidModulus("modulus must be monic".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidModulus("modulus is reducible".into()));
        }
        let order = (p as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
        if order > MAX_FIELD_ORDER as u128 {
            return Err(Error::FieldTooLarge(order.min(u64::MAX as u128) as u64));
        }
        Ok(Arc::new(FieldSpec { p, m, modulus }))
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    /// Little-endian modulus coefficients; empty for prime fields.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.m as u32)
    }

    pub fn is_prime_field(&self) -> bool {
        self.m == 1
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement {
            field: Arc::clone(self),
            coeffs: vec![0; self.m],
        }
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        let mut coeffs = vec![0; self.m];
        coeffs[0] = 1;
        FieldElement {
            field: Arc::clone(self),
            coeffs,
        }
    }

    /// Element from explicit little-endian coefficients (length must be m,
    /// each in [0, p)).
    pub fn element(self: &Arc<Self>, coeffs: Vec<u64>) -> Result<FieldElement> {
        if coeffs.len() != self.m || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidModulus(format!(
                "element needs {} coefficients below {}",
                self.m, self.p
            )));
        }
        Ok(FieldElement {
            field: Arc::clone(self),
            coeffs,
        })
    }

    /// Element with index `i` in [0, order): little-endian base-p digits.
    pub fn from_index(self: &Arc<Self>, i: u64) -> FieldElement {
        debug_assert!(i < self.order());
        let mut coeffs = vec![0; self.m];
        let mut v = i;
        for c in coeffs.iter_mut() {
            *c = v % self.p;
            v /= self.p;
        }
        FieldElement {
            field: Arc::clone(self),
            coeffs,
        }
    }

    /// The image of the integer `n` under the ring map Z -> GF(p^m).
    pub fn from_int(self: &Arc<Self>, n: u64) -> FieldElement {
        let mut coeffs = vec![0; self.m];
        coeffs[0] = n % self.p;
        FieldElement {
            field: Arc::clone(self),
            coeffs,
        }
    }

    /// All field elements in index order.
    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |i| self.from_index(i))
    }

    /// Parse the canonical text encoding (base-p digits, little-endian,
    /// no separators). Ambiguous for p > 10 with m > 1, which is rejected.
    pub fn parse_element(self: &Arc<Self>, text: &str) -> Result<FieldElement> {
        let bad = || Error::BadElementText {
            text: text.to_string(),
            p: self.p,
            m: self.m,
        };
        if self.m == 1 {
            let v: u64 = text.parse().map_err(|_| bad())?;
            if v >= self.p {
                return Err(bad());
            }
            return self.element(vec![v]);
        }
        if self.p > 10 {
            return Err(Error::UnsupportedTextCodec);
        }
        let digits: Vec<u64> = text
            .chars()
            .map(|c| c.to_digit(10).map(u64::from).ok_or_else(bad))
            .collect::<Result<_>>()?;
        if digits.len() != self.m || digits.iter().any(|&d| d >= self.p) {
            return Err(bad());
        }
        self.element(digits)
    }

    /// Digit-slice addition used by enumeration hot paths: dst += src mod p.
    pub(crate) fn add_digits_assign(&self, dst: &mut [u64], src: &[u64]) {
        for (d, &s) in dst.iter_mut().zip(src) {
            *d = (*d + s) % self.p;
        }
    }

    /// Sum of the elements with indices `a` and `b`, as an index. Digitwise
    /// base-p addition; allocation-free path for exhaustive enumerations.
    pub fn add_index(&self, a: u64, b: u64) -> u64 {
        if self.m == 1 {
            return (a + b) % self.p;
        }
        let mut out = 0u64;
        let mut mult = 1u64;
        let (mut x, mut y) = (a, b);
        for _ in 0..self.m {
            out += ((x % self.p + y % self.p) % self.p) * mult;
            mult *= self.p;
            x /= self.p;
            y /= self.p;
        }
        out
    }

    fn reduce(&self, scratch: &mut Vec<u64>) -> Vec<u64> {
        // scratch has degree <= 2m-2; clear everything at and above m using
        // the monic modulus.
        for i in (self.m..scratch.len()).rev() {
            let c = scratch[i];
            if c == 0 {
                continue;
            }
            let shift = i - self.m;
            for (j, &qc) in self.modulus.iter().enumerate() {
                let sub = (c * qc) % self.p;
                scratch[shift + j] = (scratch[shift + j] + self.p - sub) % self.p;
            }
        }
        scratch.truncate(self.m);
        scratch.clone()
    }

    pub(crate) fn mul_coeffs(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if self.m == 1 {
            return vec![(a[0] * b[0]) % self.p];
        }
        let mut scratch = vec![0u64; 2 * self.m - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                scratch[i + j] = (scratch[i + j] + ai * bj) % self.p;
            }
        }
        self.reduce(&mut scratch)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "GF({})", self.p)
        } else {
            write!(f, "GF({}^{})", self.p, self.m)
        }
    }
}

/// An element of GF(p^m): `m` little-endian coefficients in Z_p plus a shared
/// handle on the owning [`FieldSpec`].
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<FieldSpec>,
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Index of this element in [0, order): little-endian base-p digits.
    pub fn index(&self) -> u64 {
        let p = self.field.p;
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    fn same_field(&self, other: &FieldElement) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::OwnerMismatch)
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        let p = self.field.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a + b) % p)
            .collect();
        Ok(FieldElement {
            field: Arc::clone(&self.field),
            coeffs,
        })
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        let p = self.field.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a + p - b) % p)
            .collect();
        Ok(FieldElement {
            field: Arc::clone(&self.field),
            coeffs,
        })
    }

    pub fn neg(&self) -> FieldElement {
        let p = self.field.p;
        FieldElement {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|&a| (p - a) % p).collect(),
        }
    }

    /// Product in GF(p^m): polynomial product reduced by the modulus.
    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(FieldElement {
            field: Arc::clone(&self.field),
            coeffs: self.field.mul_coeffs(&self.coeffs, &other.coeffs),
        })
    }

    /// Multiplicative inverse via extended Euclid on the polynomial
    /// representation (Fermat exponentiation for prime fields).
    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.field.p;
        if self.field.m == 1 {
            return Ok(FieldElement {
                field: Arc::clone(&self.field),
                coeffs: vec![mod_pow(self.coeffs[0], p - 2, p)],
            });
        }
        // Extended Euclid over Z_p[x] between self and the modulus.
        let inv = poly_xgcd_inverse(&self.coeffs, &self.field.modulus, p);
        let mut coeffs = inv;
        coeffs.resize(self.field.m, 0);
        Ok(FieldElement {
            field: Arc::clone(&self.field),
            coeffs,
        })
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            base = base.mul(&base).expect("same field");
            e >>= 1;
        }
        acc
    }

    /// Constant-polynomial image of a prime-field element in `target`.
    /// A ring homomorphism GF(p) -> GF(p^m); identity when the fields match.
    pub fn embed_into(&self, target: &Arc<FieldSpec>) -> Result<FieldElement> {
        if &self.field == target {
            return Ok(self.clone());
        }
        if self.field.p != target.p {
            return Err(Error::CharacteristicMismatch(self.field.p, target.p));
        }
        if !self.field.is_prime_field() {
            return Err(Error::OwnerMismatch);
        }
        let mut coeffs = vec![0; target.m];
        coeffs[0] = self.coeffs[0];
        Ok(FieldElement {
            field: Arc::clone(target),
            coeffs,
        })
    }

    /// Canonical text encoding: base-p digits little-endian, no separators
    /// (GF(4) ω+1 ↔ "11"). Rejected for p > 10 with m > 1, where the format
    /// cannot be parsed back.
    pub fn canonical_text(&self) -> Result<String> {
        if self.field.m > 1 && self.field.p > 10 {
            return Err(Error::UnsupportedTextCodec);
        }
        Ok(self
            .coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<String>())
    }
}

fn mod_pow(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Inverse of `a` modulo the irreducible `q` over Z_p, via extended Euclid.
/// `a` must be nonzero with degree < deg q.
fn poly_xgcd_inverse(a: &[u64], q: &[u64], p: u64) -> Vec<u64> {
    // Invariants: r0 = s0*a (mod q), r1 = s1*a (mod q).
    let mut r0: Vec<u64> = q.to_vec();
    let mut r1: Vec<u64> = a.to_vec();
    let mut s0: Vec<u64> = vec![0];
    let mut s1: Vec<u64> = vec![1];

    while poly_degree(&r1).is_some() {
        let (quot, rem) = poly_divmod(&r0, &r1, p);
        let s_next = poly_sub(&s0, &poly_mul(&quot, &s1, p), p);
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = s_next;
    }
    // r0 is now a nonzero constant gcd; scale s0 by its inverse.
    let g = r0[poly_degree(&r0).expect("gcd nonzero")];
    let ginv = mod_pow(g, p - 2, p);
    let mut out: Vec<u64> = s0.iter().map(|&c| c * ginv % p).collect();
    // Reduce mod q to keep degree < deg q.
    out = poly_rem(&out, q, p);
    out
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![0];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    out
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let av = a.get(i).copied().unwrap_or(0);
            let bv = b.get(i).copied().unwrap_or(0);
            (av + p - bv) % p
        })
        .collect()
}

fn poly_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let bd = poly_degree(b).expect("division by zero polynomial");
    let lead_inv = mod_pow(b[bd], p - 2, p);
    let mut rem = a.to_vec();
    let mut quot = vec![0u64; a.len().max(bd + 1)];
    while let Some(rd) = poly_degree(&rem) {
        if rd < bd {
            break;
        }
        let factor = rem[rd] * lead_inv % p;
        let shift = rd - bd;
        quot[shift] = factor;
        for (j, &bc) in b.iter().enumerate().take(bd + 1) {
            let sub = factor * bc % p;
            rem[shift + j] = (rem[shift + j] + p - sub) % p;
        }
    }
    (quot, rem)
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}

impl Eq for FieldElement {}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}∈{}", self.coeffs, self.field)
    }
}

// Operator sugar for call sites that have already validated field ownership.
// These panic on mismatched fields; use the checked methods at boundaries.
impl std::ops::Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        FieldElement::add(self, rhs).expect("mismatched fields")
    }
}

impl std::ops::Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        FieldElement::sub(self, rhs).expect("mismatched fields")
    }
}

impl std::ops::Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        FieldElement::mul(self, rhs).expect("mismatched fields")
    }
}

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> Arc<FieldSpec> {
        FieldSpec::prime(p).unwrap()
    }

    fn gf4() -> Arc<FieldSpec> {
        FieldSpec::extension(2, 2).unwrap()
    }

    #[test]
    fn default_moduli_match_the_classics() {
        assert_eq!(FieldSpec::extension(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FieldSpec::extension(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(FieldSpec::extension(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(
            FieldSpec::extension(2, 4).unwrap().modulus(),
            &[1, 1, 0, 0, 1]
        );
    }

    #[test]
    fn rejects_bad_specs() {
        assert_eq!(FieldSpec::prime(4).unwrap_err(), Error::NotPrime(4));
        assert_eq!(FieldSpec::prime(1).unwrap_err(), Error::NotPrime(1));
        // x^2 + 1 is reducible over GF(2): (x+1)^2.
        assert!(matches!(
            FieldSpec::with_modulus(2, 2, vec![1, 0, 1]),
            Err(Error::InvalidModulus(_))
        ));
        // Not monic.
        assert!(matches!(
            FieldSpec::with_modulus(3, 2, vec![1, 0, 2]),
            Err(Error::InvalidModulus(_))
        ));
        assert!(matches!(
            FieldSpec::extension(2, 21),
            Err(Error::FieldTooLarge(_))
        ));
    }

    #[test]
    fn mul_gf5() {
        let f = gf(5);
        let a = f.from_int(3);
        let b = f.from_int(4);
        assert_eq!(a.mul(&b).unwrap(), f.from_int(2));
        assert_eq!(a.mul(&f.one()).unwrap(), a);
    }

    #[test]
    fn mul_gf4_omega_squared() {
        // ω·ω = ω+1 in GF(4) = GF(2)[x]/(x²+x+1).
        let f = gf4();
        let omega = f.element(vec![0, 1]).unwrap();
        let omega_plus_one = f.element(vec![1, 1]).unwrap();
        assert_eq!(omega.mul(&omega).unwrap(), omega_plus_one);
    }

    #[test]
    fn mul_owner_mismatch() {
        let a = gf(5).from_int(2);
        let b = gf(7).from_int(2);
        assert_eq!(a.mul(&b).unwrap_err(), Error::OwnerMismatch);
    }

    #[test]
    fn inv_gf5() {
        let f = gf(5);
        assert_eq!(f.from_int(2).inv().unwrap(), f.from_int(3));
        assert_eq!(f.one().inv().unwrap(), f.one());
        assert_eq!(f.zero().inv().unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn inv_gf4_matches_exhaustive_search() {
        let f = gf4();
        let omega = f.element(vec![0, 1]).unwrap();
        // Oracle: scan all elements for ω·x = 1.
        let expect = f
            .elements()
            .find(|x| omega.mul(x).unwrap().is_one())
            .unwrap();
        assert_eq!(omega.inv().unwrap(), expect);
        assert_eq!(expect, f.element(vec![1, 1]).unwrap());
    }

    #[test]
    fn embed_constants() {
        let f2 = gf(2);
        let f4 = gf4();
        let f3 = gf(3);
        let f9 = FieldSpec::extension(3, 2).unwrap();
        assert_eq!(f2.one().embed_into(&f4).unwrap(), f4.one());
        assert_eq!(
            f3.from_int(2).embed_into(&f9).unwrap(),
            f9.element(vec![2, 0]).unwrap()
        );
        assert!(matches!(
            f3.one().embed_into(&f4),
            Err(Error::CharacteristicMismatch(3, 2))
        ));
    }

    #[test]
    fn embed_is_injective_ring_hom() {
        // Exhaustive over every prime base field of order <= 9 (and beyond).
        for (p, m) in [(2u64, 2usize), (3, 2), (5, 2), (7, 2)] {
            let base = gf(p);
            let ext = FieldSpec::extension(p, m).unwrap();
            let mut images = std::collections::HashSet::new();
            for a in base.elements() {
                images.insert(a.embed_into(&ext).unwrap().index());
                for b in base.elements() {
                    let lhs_add = a
                        .embed_into(&ext)
                        .unwrap()
                        .add(&b.embed_into(&ext).unwrap());
                    assert_eq!(
                        lhs_add.unwrap(),
                        a.add(&b).unwrap().embed_into(&ext).unwrap()
                    );
                    let lhs_mul = a
                        .embed_into(&ext)
                        .unwrap()
                        .mul(&b.embed_into(&ext).unwrap());
                    assert_eq!(
                        lhs_mul.unwrap(),
                        a.mul(&b).unwrap().embed_into(&ext).unwrap()
                    );
                }
            }
            assert_eq!(images.len() as u64, p, "injective for GF({p})");
        }
    }

    #[test]
    fn field_axioms_exhaustive_small_orders() {
        // Every shipped spec with order <= 64.
        let specs: Vec<Arc<FieldSpec>> = vec![
            gf(2),
            gf(3),
            gf(5),
            gf(7),
            gf(11),
            FieldSpec::extension(2, 2).unwrap(),
            FieldSpec::extension(2, 3).unwrap(),
            FieldSpec::extension(2, 4).unwrap(),
            FieldSpec::extension(2, 5).unwrap(),
            FieldSpec::extension(2, 6).unwrap(),
            FieldSpec::extension(3, 2).unwrap(),
            FieldSpec::extension(3, 3).unwrap(),
            FieldSpec::extension(5, 2).unwrap(),
            FieldSpec::extension(7, 2).unwrap(),
        ];
        for f in specs {
            assert!(f.order() <= 64, "{f}");
            let elems: Vec<FieldElement> = f.elements().collect();
            for a in &elems {
                // Inverses.
                assert!(a.add(&a.neg()).unwrap().is_zero());
                if !a.is_zero() {
                    assert!(a.mul(&a.inv().unwrap()).unwrap().is_one());
                }
                for b in &elems {
                    assert_eq!(a.add(b).unwrap(), b.add(a).unwrap());
                    assert_eq!(a.mul(b).unwrap(), b.mul(a).unwrap());
                    for c in &elems {
                        let assoc_a = a.add(b).unwrap().add(c).unwrap();
                        let assoc_b = a.add(&b.add(c).unwrap()).unwrap();
                        assert_eq!(assoc_a, assoc_b);
                        let massoc_a = a.mul(b).unwrap().mul(c).unwrap();
                        let massoc_b = a.mul(&b.mul(c).unwrap()).unwrap();
                        assert_eq!(massoc_a, massoc_b);
                        let dist_a = a.mul(&b.add(c).unwrap()).unwrap();
                        let dist_b = a.mul(b).unwrap().add(&a.mul(c).unwrap()).unwrap();
                        assert_eq!(dist_a, dist_b);
                    }
                }
            }
        }
    }

    #[test]
    fn index_roundtrip_and_text_codec() {
        let f9 = FieldSpec::extension(3, 2).unwrap();
        for i in 0..f9.order() {
            let e = f9.from_index(i);
            assert_eq!(e.index(), i);
            let text = e.canonical_text().unwrap();
            assert_eq!(f9.parse_element(&text).unwrap(), e);
        }
        let f4 = gf4();
        assert_eq!(
            f4.element(vec![1, 1]).unwrap().canonical_text().unwrap(),
            "11"
        );
        assert_eq!(
            f4.parse_element("01").unwrap(),
            f4.element(vec![0, 1]).unwrap()
        );
        // GF(11) single digit is the whole decimal string.
        let f11 = gf(11);
        assert_eq!(f11.from_int(10).canonical_text().unwrap(), "10");
        assert_eq!(f11.parse_element("10").unwrap(), f11.from_int(10));
        assert!(f11.parse_element("11").is_err());
        // Ambiguous codec rejected.
        let f121 = FieldSpec::extension(11, 2).unwrap();
        assert_eq!(
            f121.one().canonical_text().unwrap_err(),
            Error::UnsupportedTextCodec
        );
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let f8 = FieldSpec::extension(2, 3).unwrap();
        for e in f8.elements() {
            let mut acc = f8.one();
            for k in 0..10u64 {
                assert_eq!(e.pow(k), acc);
                acc = acc.mul(&e).unwrap();
            }
        }
    }
}
