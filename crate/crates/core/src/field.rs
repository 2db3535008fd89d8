//! Arithmetic in GF(p^k).
//!
//! Elements are coefficient vectors over Z_p in a fixed polynomial basis
//! modulo a monic irreducible modulus of degree k; for k = 1 the modulus is
//! the placeholder `x` and the arithmetic is plain mod-p. The module also
//! provides traces, trace-dual bases, elements of prescribed multiplicative
//! order, and the canonical enumeration of all q = p^k elements.

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_prime, pow_mod};
use crate::error::{Error, Result};

/// Default cap on q = p^k. Keeps every exhaustive oracle in the crate
/// (element enumeration, character-sum scans) tractable; raise it explicitly
/// with [`make_field_with_cap`] if you know what you are doing.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 20;

/// A concrete finite field GF(p^k): the characteristic, the extension
/// degree, and the monic irreducible modulus (coefficients `c0..=ck`,
/// constant term first, `ck = 1`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub k: usize,
    pub modulus: Vec<u64>,
}

/// An element of GF(p^k): coefficients `c0..c_{k-1}` (constant term first)
/// relative to the polynomial basis of a [`FieldSpec`].
///
/// Elements are plain data and do not carry a reference to their field;
/// operations verify the shape (length k, coefficients below p), which is
/// as much cross-field mixing as can be detected from the element alone.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement {
    coeffs: Vec<u64>,
}

impl FieldElement {
    /// The raw coefficient vector, constant term first.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    fn from_coeffs(coeffs: Vec<u64>) -> Self {
        FieldElement { coeffs }
    }
}

/// An ordered basis of GF(p^k) over Z_p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OrderedBasis {
    elements: Vec<FieldElement>,
}

impl OrderedBasis {
    /// Builds a basis from `k` elements; linear independence is verified
    /// when the dual basis is computed.
    pub fn new(elements: Vec<FieldElement>) -> Self {
        OrderedBasis { elements }
    }

    pub fn elements(&self) -> &[FieldElement] {
        &self.elements
    }
}

/// The trace-dual of an [`OrderedBasis`]: elements `d_1..d_k` with
/// `Tr(d_i * b_j) = [i == j]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DualBasis {
    elements: Vec<FieldElement>,
}

impl DualBasis {
    pub fn elements(&self) -> &[FieldElement] {
        &self.elements
    }
}

/// Constructs GF(p^k) with the canonical modulus: the lexicographically
/// smallest monic irreducible of degree k, comparing coefficient vectors
/// constant term first. Enforces the default size cap [`DEFAULT_FIELD_CAP`].
pub fn make_field(p: u64, k: usize) -> Result<FieldSpec> {
    make_field_with_cap(p, k, DEFAULT_FIELD_CAP)
}

/// Same as [`make_field`] with an explicit cap on q = p^k.
pub fn make_field_with_cap(p: u64, k: usize, cap: u64) -> Result<FieldSpec> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::invalid("extension degree k must be at least 1"));
    }
    let q = checked_q(p, k, cap)?;
    debug_assert!(q >= 2);
    let modulus = smallest_irreducible(p, k);
    Ok(FieldSpec { p, k, modulus })
}

fn checked_q(p: u64, k: usize, cap: u64) -> Result<u64> {
    let too_large = || Error::FieldTooLarge { p, k, cap };
    if k > 63 {
        return Err(too_large());
    }
    let q = p.checked_pow(k as u32).ok_or_else(too_large)?;
    if q > cap {
        return Err(too_large());
    }
    Ok(q)
}

/// The lexicographically smallest monic irreducible of degree k over Z_p,
/// comparing `(c0, c1, ..., c_{k-1})` with the constant term most
/// significant. Always terminates: irreducibles of every degree exist.
fn smallest_irreducible(p: u64, k: usize) -> Vec<u64> {
    let mut coeffs = vec![0u64; k + 1];
    coeffs[k] = 1;
    loop {
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
        // Advance (c0, ..., c_{k-1}) in lexicographic order: the last
        // coordinate varies fastest, the constant term most significant.
        let mut i = k;
        loop {
            debug_assert!(i > 0, "no irreducible of degree {k} found");
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
        }
    }
}

/// Trial division by every monic polynomial of degree 1..=k/2.
fn is_irreducible(modulus: &[u64], p: u64) -> bool {
    let k = modulus.len() - 1;
    if k == 1 {
        return true;
    }
    for d in 1..=k / 2 {
        let mut div = vec![0u64; d + 1];
        div[d] = 1;
        loop {
            if poly_rem(modulus, &div, p).is_empty() {
                return false;
            }
            let mut i = d;
            let mut done = false;
            loop {
                if i == 0 {
                    done = true;
                    break;
                }
                i -= 1;
                div[i] += 1;
                if div[i] < p {
                    break;
                }
                div[i] = 0;
            }
            if done {
                break;
            }
        }
    }
    true
}

/// Remainder of `a` divided by monic-leading `b` over Z_p, with trailing
/// zeros trimmed (empty vector means zero).
fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let db = poly_deg(b).expect("division by zero polynomial");
    let lead_inv = pow_mod(b[db], p - 2, p);
    let mut r: Vec<u64> = a.to_vec();
    while let Some(dr) = poly_deg(&r) {
        if dr < db {
            break;
        }
        let factor = mul_p(r[dr], lead_inv, p);
        let shift = dr - db;
        for j in 0..=db {
            let sub = mul_p(factor, b[j], p);
            r[shift + j] = (r[shift + j] + p - sub) % p;
        }
    }
    trim(r)
}

fn poly_deg(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn mul_p(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl FieldSpec {
    /// Constructs GF(p^k) with a caller-supplied monic irreducible modulus
    /// (coefficients `c0..=ck`). Subject to the default size cap.
    pub fn with_modulus(p: u64, k: usize, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::invalid("extension degree k must be at least 1"));
        }
        checked_q(p, k, DEFAULT_FIELD_CAP)?;
        if modulus.len() != k + 1 {
            return Err(Error::invalid(format!(
                "modulus must have k+1 = {} coefficients, got {}",
                k + 1,
                modulus.len()
            )));
        }
        if modulus[k] != 1 {
            return Err(Error::invalid("modulus must be monic"));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::invalid("modulus coefficient out of range"));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::invalid("modulus is reducible"));
        }
        Ok(FieldSpec { p, k, modulus })
    }

    /// Re-validates a spec that arrived from outside (e.g. deserialized).
    pub fn validate(&self) -> Result<()> {
        let checked = FieldSpec::with_modulus(self.p, self.k, self.modulus.clone());
        match checked {
            Ok(_) => Ok(()),
            // Re-run without the cap applied to q: validate() only checks
            // well-formedness, construction helpers own the size policy.
            Err(Error::FieldTooLarge { .. }) => {
                if self.k <= 63 && self.p.checked_pow(self.k as u32).is_some() {
                    Ok(())
                } else {
                    Err(Error::FieldTooLarge {
                        p: self.p,
                        k: self.k,
                        cap: u64::MAX,
                    })
                }
            }
            Err(e) => Err(e),
        }
    }

    /// The field order q = p^k.
    pub fn q(&self) -> u64 {
        self.p.pow(self.k as u32)
    }

    /// The additive identity.
    pub fn zero(&self) -> FieldElement {
        FieldElement::from_coeffs(vec![0; self.k])
    }

    /// The multiplicative identity.
    pub fn one(&self) -> FieldElement {
        let mut c = vec![0; self.k];
        c[0] = 1;
        FieldElement::from_coeffs(c)
    }

    /// Builds an element from explicit coefficients (constant term first).
    pub fn element(&self, coeffs: &[u64]) -> Result<FieldElement> {
        let el = FieldElement::from_coeffs(coeffs.to_vec());
        self.check_element(&el)?;
        Ok(el)
    }

    /// Verifies that `a` has the shape of an element of this field.
    pub fn check_element(&self, a: &FieldElement) -> Result<()> {
        if a.coeffs.len() != self.k {
            return Err(Error::mismatched(format!(
                "element has {} coefficients, field has degree {}",
                a.coeffs.len(),
                self.k
            )));
        }
        if a.coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::mismatched(format!(
                "coefficient out of range for p = {}",
                self.p
            )));
        }
        Ok(())
    }

    /// The canonical index of an element: its coefficient vector read as a
    /// base-p integer with the constant term least significant. Index 0 is
    /// the zero element, index 1 is one.
    pub fn index_of(&self, a: &FieldElement) -> Result<u64> {
        self.check_element(a)?;
        Ok(self.index_raw(a))
    }

    pub(crate) fn index_raw(&self, a: &FieldElement) -> u64 {
        let mut idx = 0u64;
        for &c in a.coeffs.iter().rev() {
            idx = idx * self.p + c;
        }
        idx
    }

    /// The element at a canonical index in `0..q`.
    pub fn from_index(&self, idx: u64) -> Result<FieldElement> {
        if idx >= self.q() {
            return Err(Error::invalid(format!(
                "element index {idx} out of range for q = {}",
                self.q()
            )));
        }
        Ok(self.from_index_raw(idx))
    }

    pub(crate) fn from_index_raw(&self, mut idx: u64) -> FieldElement {
        let mut coeffs = vec![0u64; self.k];
        for c in coeffs.iter_mut() {
            *c = idx % self.p;
            idx /= self.p;
        }
        FieldElement::from_coeffs(coeffs)
    }

    /// All q elements in canonical order (the constant coefficient varies
    /// fastest); the element at position 0 is zero.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q()).map(move |i| self.from_index_raw(i))
    }

    /// Field addition.
    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(self.add_raw(a, b))
    }

    pub(crate) fn add_raw(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        FieldElement::from_coeffs(coeffs)
    }

    /// Additive inverse.
    pub fn neg(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check_element(a)?;
        Ok(self.neg_raw(a))
    }

    pub(crate) fn neg_raw(&self, a: &FieldElement) -> FieldElement {
        let coeffs = a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect();
        FieldElement::from_coeffs(coeffs)
    }

    /// Field subtraction.
    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(self.add_raw(a, &self.neg_raw(b)))
    }

    /// Field multiplication.
    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(self.mul_raw(a, b))
    }

    pub(crate) fn mul_raw(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let k = self.k;
        let p = self.p as u128;
        // Convolution, then reduction by the monic modulus from the top.
        let mut tmp = vec![0u128; 2 * k - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                tmp[i + j] = (tmp[i + j] + x as u128 * y as u128) % p;
            }
        }
        for i in (k..2 * k - 1).rev() {
            let c = tmp[i];
            if c == 0 {
                continue;
            }
            tmp[i] = 0;
            for j in 0..k {
                let m = self.modulus[j] as u128;
                if m != 0 {
                    tmp[i - k + j] = (tmp[i - k + j] + c * (p - m)) % p;
                }
            }
        }
        let coeffs = tmp[..k].iter().map(|&c| c as u64).collect();
        FieldElement::from_coeffs(coeffs)
    }

    /// `base^e` by square-and-multiply.
    pub fn pow(&self, base: &FieldElement, e: u64) -> Result<FieldElement> {
        self.check_element(base)?;
        Ok(self.pow_raw(base, e))
    }

    pub(crate) fn pow_raw(&self, base: &FieldElement, mut e: u64) -> FieldElement {
        let mut acc = self.one();
        let mut b = base.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(&acc, &b);
            }
            b = self.mul_raw(&b, &b);
            e >>= 1;
        }
        acc
    }

    /// The multiplicative inverse, with zero mapped to zero (the convention
    /// used throughout the point-set constructions).
    pub fn inv_or_zero(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check_element(a)?;
        Ok(self.inv_or_zero_raw(a))
    }

    pub(crate) fn inv_or_zero_raw(&self, a: &FieldElement) -> FieldElement {
        if a.coeffs.iter().all(|&c| c == 0) {
            return self.zero();
        }
        // Extended Euclid on (modulus, a): maintain s with s*a = r (mod modulus).
        let p = self.p;
        let mut r0: Vec<u64> = trim(self.modulus.clone());
        let mut r1: Vec<u64> = trim(a.coeffs.clone());
        let mut s0: Vec<u64> = vec![];
        let mut s1: Vec<u64> = vec![1];
        while !r1.is_empty() {
            let (quot, rem) = poly_divmod(&r0, &r1, p);
            let s_next = poly_sub(&s0, &poly_mul(&quot, &s1, p), p);
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s_next;
        }
        // r0 is the gcd; irreducibility makes it a nonzero constant.
        debug_assert_eq!(r0.len(), 1, "gcd with irreducible modulus not constant");
        let scale = pow_mod(r0[0], p - 2, p);
        let s = poly_rem(&poly_scale(&s0, scale, p), &self.modulus, p);
        let mut coeffs = vec![0u64; self.k];
        coeffs[..s.len()].copy_from_slice(&s);
        FieldElement::from_coeffs(coeffs)
    }

    /// The trace Tr(z) = z + z^p + ... + z^(p^(k-1)), a value in Z_p.
    pub fn trace(&self, a: &FieldElement) -> Result<u64> {
        self.check_element(a)?;
        Ok(self.trace_raw(a))
    }

    pub(crate) fn trace_raw(&self, a: &FieldElement) -> u64 {
        let mut acc = a.clone();
        let mut cur = a.clone();
        for _ in 1..self.k {
            cur = self.pow_raw(&cur, self.p);
            acc = self.add_raw(&acc, &cur);
        }
        debug_assert!(
            acc.coeffs[1..].iter().all(|&c| c == 0),
            "trace did not land in the prime subfield"
        );
        acc.coeffs[0]
    }

    /// The polynomial basis {1, x, ..., x^(k-1)}.
    pub fn polynomial_basis(&self) -> OrderedBasis {
        let elements = (0..self.k)
            .map(|j| {
                let mut c = vec![0u64; self.k];
                c[j] = 1;
                FieldElement::from_coeffs(c)
            })
            .collect();
        OrderedBasis { elements }
    }

    /// The trace-dual basis of `basis`: solves the Gram system
    /// `[Tr(b_i b_m)] a = e_j` over Z_p for each j. Fails with
    /// [`Error::DegenerateBasis`] when the elements are linearly dependent.
    pub fn dual_basis(&self, basis: &OrderedBasis) -> Result<DualBasis> {
        let k = self.k;
        if basis.elements.len() != k {
            return Err(Error::invalid(format!(
                "basis must have k = {k} elements, got {}",
                basis.elements.len()
            )));
        }
        for b in &basis.elements {
            self.check_element(b)?;
        }
        let mut gram = vec![vec![0u64; k]; k];
        for m in 0..k {
            for i in 0..k {
                gram[m][i] = self.trace_raw(&self.mul_raw(&basis.elements[i], &basis.elements[m]));
            }
        }
        let inv = invert_matrix_mod_p(&gram, self.p).ok_or(Error::DegenerateBasis)?;
        let elements = (0..k)
            .map(|j| {
                let mut acc = self.zero();
                for i in 0..k {
                    if inv[i][j] != 0 {
                        let coeff = self.from_index_raw(inv[i][j]);
                        // coeff is a constant (inv entries are < p), so this
                        // scales basis element i by the solved coordinate.
                        acc = self.add_raw(&acc, &self.mul_raw(&coeff, &basis.elements[i]));
                    }
                }
                acc
            })
            .collect();
        Ok(DualBasis { elements })
    }

    /// An element of exact multiplicative order `t`, namely g^((q-1)/t) for
    /// the first multiplicative generator g in canonical enumeration order.
    /// `t` must divide q - 1.
    pub fn element_of_order(&self, t: u64) -> Result<FieldElement> {
        let q = self.q();
        if t == 0 {
            return Err(Error::invalid("order t must be positive"));
        }
        if (q - 1) % t != 0 {
            return Err(Error::OrderDoesNotDivide { t, q });
        }
        let prime_factors: Vec<u64> = factorize(q - 1).into_iter().map(|(p, _)| p).collect();
        let one = self.one();
        for idx in 1..q {
            let g = self.from_index_raw(idx);
            let generates = prime_factors
                .iter()
                .all(|&r| self.pow_raw(&g, (q - 1) / r) != one);
            if generates {
                return Ok(self.pow_raw(&g, (q - 1) / t));
            }
        }
        unreachable!("every finite field has a multiplicative generator")
    }
}

/// Gauss-Jordan inversion of a k x k matrix over Z_p; `None` when singular.
fn invert_matrix_mod_p(m: &[Vec<u64>], p: u64) -> Option<Vec<Vec<u64>>> {
    let k = m.len();
    let mut a: Vec<Vec<u64>> = m.to_vec();
    let mut inv: Vec<Vec<u64>> = (0..k)
        .map(|i| (0..k).map(|j| u64::from(i == j)).collect())
        .collect();
    for col in 0..k {
        let pivot = (col..k).find(|&r| a[r][col] != 0)?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let scale = pow_mod(a[col][col], p - 2, p);
        for j in 0..k {
            a[col][j] = mul_p(a[col][j], scale, p);
            inv[col][j] = mul_p(inv[col][j], scale, p);
        }
        for r in 0..k {
            if r == col || a[r][col] == 0 {
                continue;
            }
            let f = a[r][col];
            for j in 0..k {
                let sub_a = mul_p(f, a[col][j], p);
                a[r][j] = (a[r][j] + p - sub_a) % p;
                let sub_i = mul_p(f, inv[col][j], p);
                inv[r][j] = (inv[r][j] + p - sub_i) % p;
            }
        }
    }
    Some(inv)
}

fn poly_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let db = poly_deg(b).expect("division by zero polynomial");
    let lead_inv = pow_mod(b[db], p - 2, p);
    let mut r: Vec<u64> = a.to_vec();
    let da = match poly_deg(&r) {
        Some(d) if d >= db => d,
        _ => return (vec![], trim(r)),
    };
    let mut quot = vec![0u64; da - db + 1];
    while let Some(dr) = poly_deg(&r) {
        if dr < db {
            break;
        }
        let factor = mul_p(r[dr], lead_inv, p);
        let shift = dr - db;
        quot[shift] = factor;
        for j in 0..=db {
            let sub = mul_p(factor, b[j], p);
            r[shift + j] = (r[shift + j] + p - sub) % p;
        }
    }
    (trim(quot), trim(r))
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_p(x, y, p)) % p;
        }
    }
    trim(out)
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + p - y) % p;
    }
    trim(out)
}

fn poly_scale(a: &[u64], c: u64, p: u64) -> Vec<u64> {
    trim(a.iter().map(|&x| mul_p(x, c, p)).collect())
}

/// Precomputed traces of the monomial basis, for O(k) traces of arbitrary
/// elements (by linearity of the trace over Z_p).
#[derive(Debug, Clone)]
pub struct TraceTable {
    p: u64,
    tr_pow: Vec<u64>,
}

impl TraceTable {
    pub fn new(spec: &FieldSpec) -> Self {
        let basis = spec.polynomial_basis();
        let tr_pow = basis
            .elements()
            .iter()
            .map(|m| spec.trace_raw(m))
            .collect();
        TraceTable { p: spec.p, tr_pow }
    }

    /// Trace of the element with the given coefficients.
    pub fn trace_coeffs(&self, coeffs: &[u64]) -> u64 {
        let mut acc = 0u64;
        for (&c, &t) in coeffs.iter().zip(&self.tr_pow) {
            acc = ((acc as u128 + c as u128 * t as u128 % self.p as u128) % self.p as u128) as u64;
        }
        acc
    }

    /// Trace of the element at a canonical index.
    pub fn trace_index(&self, mut idx: u64) -> u64 {
        let mut acc = 0u128;
        for &t in &self.tr_pow {
            let c = idx % self.p;
            acc = (acc + c as u128 * t as u128) % self.p as u128;
            idx /= self.p;
        }
        acc as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize;
    use rand_core::{RngCore, SeedableRng};

    fn gf(p: u64, k: usize) -> FieldSpec {
        make_field(p, k).unwrap()
    }

    fn el(spec: &FieldSpec, coeffs: &[u64]) -> FieldElement {
        spec.element(coeffs).unwrap()
    }

    #[test]
    fn canonical_moduli() {
        assert_eq!(gf(5, 1).modulus, vec![0, 1]);
        assert_eq!(gf(5, 1).q(), 5);
        // x^2 + x + 1 is the first irreducible quadratic over Z_2.
        assert_eq!(gf(2, 2).modulus, vec![1, 1, 1]);
        // x^2 + 1 over Z_3: every (0, c1) candidate is divisible by x.
        assert_eq!(gf(3, 2).modulus, vec![1, 0, 1]);
        assert_eq!(gf(2, 4).q(), 16);
    }

    #[test]
    fn modulus_has_no_roots() {
        for (p, k) in [(2u64, 2usize), (2, 3), (2, 5), (3, 2), (3, 3), (5, 2), (7, 2)] {
            let spec = gf(p, k);
            for r in 0..p {
                let mut val = 0u64;
                for &c in spec.modulus.iter().rev() {
                    val = (val * r + c) % p;
                }
                assert_ne!(val, 0, "root {r} of modulus for p={p}, k={k}");
            }
        }
    }

    #[test]
    fn construction_errors() {
        assert_eq!(make_field(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(make_field(1, 1).unwrap_err(), Error::NotPrime(1));
        assert!(matches!(
            make_field(2, 21).unwrap_err(),
            Error::FieldTooLarge { .. }
        ));
        assert!(matches!(
            make_field(2, 0).unwrap_err(),
            Error::InvalidParameter(_)
        ));
        // Reducible modulus rejected: x^2 + 1 = (x+1)^2 over Z_2.
        assert!(FieldSpec::with_modulus(2, 2, vec![1, 0, 1]).is_err());
        // A valid alternative modulus is accepted: x^2 + 2x + 2 over Z_3.
        assert!(FieldSpec::with_modulus(3, 2, vec![2, 2, 1]).is_ok());
    }

    #[test]
    fn gf4_multiplication_pins() {
        let spec = gf(2, 2);
        let x = el(&spec, &[0, 1]);
        let x1 = el(&spec, &[1, 1]);
        assert_eq!(spec.mul(&x, &x).unwrap(), x1); // x^2 = x + 1
        assert_eq!(spec.mul(&x, &x1).unwrap(), spec.one()); // x(x+1) = 1
    }

    #[test]
    fn gf5_inverse_pin() {
        let spec = gf(5, 1);
        let two = el(&spec, &[2]);
        assert_eq!(spec.inv_or_zero(&two).unwrap(), el(&spec, &[3]));
        assert_eq!(spec.inv_or_zero(&spec.zero()).unwrap(), spec.zero());
    }

    #[test]
    fn inverse_is_exact_everywhere() {
        for (p, k) in [(2u64, 1usize), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (5, 2), (7, 1), (2, 4)] {
            let spec = gf(p, k);
            for z in spec.elements() {
                let inv = spec.inv_or_zero(&z).unwrap();
                if z == spec.zero() {
                    assert_eq!(inv, spec.zero());
                } else {
                    assert_eq!(spec.mul(&z, &inv).unwrap(), spec.one(), "p={p}, k={k}");
                }
            }
        }
    }

    #[test]
    fn trace_pins_gf4() {
        let spec = gf(2, 2);
        assert_eq!(spec.trace(&el(&spec, &[0, 1])).unwrap(), 1); // Tr(x) = 1
        assert_eq!(spec.trace(&spec.one()).unwrap(), 0); // Tr(1) = 0 in char 2
    }

    #[test]
    fn trace_is_additive_and_lands_in_prime_field() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for (p, k) in [(2u64, 3usize), (3, 2), (3, 3), (5, 2), (7, 2), (2, 5)] {
            let spec = gf(p, k);
            let q = spec.q();
            for _ in 0..200 {
                let a = spec.from_index(rng.next_u64() % q).unwrap();
                let b = spec.from_index(rng.next_u64() % q).unwrap();
                let lhs = spec.trace(&spec.add(&a, &b).unwrap()).unwrap();
                let rhs = (spec.trace(&a).unwrap() + spec.trace(&b).unwrap()) % p;
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn trace_table_matches_direct_trace() {
        for (p, k) in [(2u64, 4usize), (3, 3), (5, 2), (7, 2)] {
            let spec = gf(p, k);
            let table = TraceTable::new(&spec);
            for (idx, z) in spec.elements().enumerate() {
                assert_eq!(table.trace_index(idx as u64), spec.trace(&z).unwrap());
                assert_eq!(table.trace_coeffs(z.coeffs()), spec.trace(&z).unwrap());
            }
        }
    }

    #[test]
    fn dual_basis_pin_gf4() {
        let spec = gf(2, 2);
        let dual = spec.dual_basis(&spec.polynomial_basis()).unwrap();
        assert_eq!(
            dual.elements(),
            &[el(&spec, &[1, 1]), el(&spec, &[1, 0])] // {1 + x, 1}
        );
    }

    #[test]
    fn dual_basis_kronecker_property() {
        for (p, k) in [(2u64, 2usize), (2, 3), (3, 2), (5, 2), (3, 3)] {
            let spec = gf(p, k);
            let basis = spec.polynomial_basis();
            let dual = spec.dual_basis(&basis).unwrap();
            for (i, d) in dual.elements().iter().enumerate() {
                for (j, b) in basis.elements().iter().enumerate() {
                    let tr = spec.trace(&spec.mul(d, b).unwrap()).unwrap();
                    assert_eq!(tr, u64::from(i == j), "p={p}, k={k}, i={i}, j={j}");
                }
            }
        }
    }

    #[test]
    fn dual_basis_rejects_dependent_sets() {
        let spec = gf(2, 2);
        let dep = OrderedBasis::new(vec![spec.one(), spec.one()]);
        assert_eq!(spec.dual_basis(&dep).unwrap_err(), Error::DegenerateBasis);
    }

    #[test]
    fn element_of_order_pins_gf7() {
        let spec = gf(7, 1);
        // 3 is the first generator of GF(7)*; 3^2 = 2 has order 3.
        assert_eq!(spec.element_of_order(3).unwrap(), el(&spec, &[2]));
        assert_eq!(spec.element_of_order(6).unwrap(), el(&spec, &[3]));
        assert_eq!(
            spec.element_of_order(4).unwrap_err(),
            Error::OrderDoesNotDivide { t: 4, q: 7 }
        );
    }

    #[test]
    fn element_of_order_is_exact() {
        for (p, k) in [(2u64, 2usize), (5, 1), (7, 1), (3, 2), (13, 1), (2, 4)] {
            let spec = gf(p, k);
            let q = spec.q();
            let mut t = 1;
            while t * t <= q - 1 {
                if (q - 1) % t == 0 {
                    for tt in [t, (q - 1) / t] {
                        let theta = spec.element_of_order(tt).unwrap();
                        assert_eq!(spec.pow(&theta, tt).unwrap(), spec.one());
                        for (r, _) in factorize(tt) {
                            assert_ne!(
                                spec.pow(&theta, tt / r).unwrap(),
                                spec.one(),
                                "order of theta divides {}/{r}",
                                tt
                            );
                        }
                    }
                }
                t += 1;
            }
        }
    }

    #[test]
    fn enumeration_pin_gf4_and_roundtrip() {
        let spec = gf(2, 2);
        let all: Vec<FieldElement> = spec.elements().collect();
        assert_eq!(
            all,
            vec![
                el(&spec, &[0, 0]),
                el(&spec, &[1, 0]),
                el(&spec, &[0, 1]),
                el(&spec, &[1, 1]),
            ]
        );
        for (p, k) in [(3u64, 2usize), (5, 1), (2, 4)] {
            let spec = gf(p, k);
            for (i, z) in spec.elements().enumerate() {
                assert_eq!(spec.index_of(&z).unwrap(), i as u64);
                assert_eq!(spec.from_index(i as u64).unwrap(), z);
            }
        }
    }

    #[test]
    fn field_axioms_randomized() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (p, k) in [(2u64, 2usize), (3, 2), (5, 1), (5, 2), (2, 4), (3, 3), (7, 1)] {
            let spec = gf(p, k);
            let q = spec.q();
            for _ in 0..1000 {
                let a = spec.from_index(rng.next_u64() % q).unwrap();
                let b = spec.from_index(rng.next_u64() % q).unwrap();
                let c = spec.from_index(rng.next_u64() % q).unwrap();
                let ab = spec.mul(&a, &b).unwrap();
                assert_eq!(ab, spec.mul(&b, &a).unwrap());
                assert_eq!(
                    spec.mul(&ab, &c).unwrap(),
                    spec.mul(&a, &spec.mul(&b, &c).unwrap()).unwrap()
                );
                let bc = spec.add(&b, &c).unwrap();
                assert_eq!(
                    spec.mul(&a, &bc).unwrap(),
                    spec.add(&ab, &spec.mul(&a, &c).unwrap()).unwrap()
                );
                assert_eq!(spec.add(&a, &spec.neg(&a).unwrap()).unwrap(), spec.zero());
                assert_eq!(spec.mul(&a, &spec.one()).unwrap(), a);
            }
        }
    }

    #[test]
    fn shape_mismatch_is_rejected(){
        let gf4 = gf(2, 2);
        let gf8 = gf(2, 3);
        let a = gf8.one();
        assert!(matches!(gf4.add(&a, &a), Err(Error::MismatchedField(_))));
        assert!(matches!(gf4.element(&[2, 0]), Err(Error::MismatchedField(_))));
        assert!(matches!(gf4.from_index(4), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn spec_serde_roundtrip() {
        let spec = gf(3, 2);
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, r#"{"p":3,"k":2,"modulus":[1,0,1]}"#);
        let back: FieldSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
        back.validate().unwrap();
    }
}
