//! Arithmetic in the small finite fields `F_{p^m}` with `p^m <= 64`, plus the
//! canonical half-set `F^+` that keeps exactly one of `x` and `-x` per
//! nonzero element.
//!
//! The modulus is pinned to the lexicographically smallest monic irreducible
//! polynomial (coefficients compared constant-first) so that vertex labels
//! and edge orbits are reproducible across runs.

use std::fmt;

use crate::error::{capacity, input, Error, Result};

/// A concrete construction of `F_{p^m}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    p: u32,
    m: u32,
    /// Coefficients `[c_0, …, c_{m-1}]` of the monic modulus
    /// `x^m + c_{m-1} x^{m-1} + … + c_0`.
    modulus: Vec<u32>,
}

/// An element of `F_{p^m}` as a reduced coefficient vector `[c_0, …, c_{m-1}]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    coeffs: Vec<u32>,
}

impl FieldElem {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_plain())
    }
}

impl FieldElem {
    /// Prime-field elements print as plain integers, extension-field
    /// elements as coefficient tuples `(c0,c1,…)`.
    pub fn display_plain(&self) -> String {
        if self.coeffs.len() == 1 {
            format!("{}", self.coeffs[0])
        } else {
            let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
            format!("({})", parts.join(","))
        }
    }
}

pub(crate) fn is_prime(p: u32) -> bool {
    p >= 2
        && (2..p)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

impl FieldSpec {
    /// Builds `F_{p^m}` with the canonical modulus.
    pub fn new(p: u32, m: u32) -> Result<FieldSpec> {
        if !is_prime(p) {
            return Err(input(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(input("field degree m must be positive"));
        }
        let order = (p as u64).checked_pow(m);
        match order {
            Some(q) if q <= 64 => {}
            _ => return Err(capacity(format!("field order {p}^{m} exceeds 64"))),
        }
        let modulus = smallest_irreducible(p, m).ok_or_else(|| {
            Error::Input(format!(
                "no irreducible polynomial of degree {m} over F_{p}"
            ))
        })?;
        Ok(FieldSpec { p, m, modulus })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Field order `p^m`.
    pub fn order(&self) -> usize {
        (self.p as usize).pow(self.m)
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem {
            coeffs: vec![0; self.m as usize],
        }
    }

    pub fn one(&self) -> FieldElem {
        self.from_u32(1)
    }

    /// The element with constant coefficient `c` (reduced mod p).
    pub fn from_u32(&self, c: u32) -> FieldElem {
        let mut coeffs = vec![0; self.m as usize];
        coeffs[0] = c % self.p;
        FieldElem { coeffs }
    }

    /// Canonical index: the coefficient vector read as base-`p` digits with
    /// `c_0` most significant, so index order equals lexicographic order on
    /// coefficient vectors.
    pub fn index_of(&self, x: &FieldElem) -> usize {
        x.coeffs
            .iter()
            .fold(0usize, |acc, &c| acc * self.p as usize + c as usize)
    }

    pub fn elem_of_index(&self, mut idx: usize) -> FieldElem {
        let mut coeffs = vec![0u32; self.m as usize];
        for c in coeffs.iter_mut().rev() {
            *c = (idx % self.p as usize) as u32;
            idx /= self.p as usize;
        }
        FieldElem { coeffs }
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> Vec<FieldElem> {
        (0..self.order()).map(|i| self.elem_of_index(i)).collect()
    }

    pub fn is_zero(&self, x: &FieldElem) -> bool {
        x.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        FieldElem { coeffs }
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        let coeffs = a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect();
        FieldElem { coeffs }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let m = self.m as usize;
        let p = self.p as u64;
        // Schoolbook product, then reduce by the monic modulus.
        let mut prod = vec![0u64; 2 * m];
        for (i, &x) in a.coeffs.iter().enumerate() {
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for d in (m..2 * m).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            // x^d = x^{d-m} * (-(c_{m-1} x^{m-1} + … + c_0))
            for (k, &mc) in self.modulus.iter().enumerate() {
                let idx = d - m + k;
                prod[idx] = (prod[idx] + c * (p - mc as u64)) % p;
            }
        }
        FieldElem {
            coeffs: prod[..m].iter().map(|&c| c as u32).collect(),
        }
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        if self.is_zero(a) {
            return Err(input("inverse of zero"));
        }
        // a^(q-2) in a field of order q.
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = self.order() as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// The canonical half-set `F^+`: keeps `x` iff its coefficient vector is
    /// lexicographically at most that of `-x`. For `p = 2` every nonzero
    /// element is its own negative, so all of `F^*` is returned.
    pub fn plus_set(&self) -> Vec<FieldElem> {
        (1..self.order())
            .map(|i| self.elem_of_index(i))
            .filter(|x| x.coeffs <= self.neg(x).coeffs)
            .collect()
    }

    /// Maps a nonzero element to its representative in `F^+`.
    pub fn plus_representative(&self, x: &FieldElem) -> FieldElem {
        let neg = self.neg(x);
        if x.coeffs <= neg.coeffs {
            x.clone()
        } else {
            neg
        }
    }
}

/// Lexicographically smallest monic irreducible polynomial of degree `m`
/// over `F_p`, as its non-leading coefficients `[c_0, …, c_{m-1}]`.
fn smallest_irreducible(p: u32, m: u32) -> Option<Vec<u32>> {
    let m = m as usize;
    let count = (p as u64).pow(m as u32);
    (0..count)
        .map(|idx| {
            // Enumerate coefficient vectors in lexicographic order, c_0 first.
            let mut coeffs = vec![0u32; m];
            let mut rest = idx;
            for c in coeffs.iter_mut().rev() {
                *c = (rest % p as u64) as u32;
                rest /= p as u64;
            }
            coeffs
        })
        .find(|coeffs| is_irreducible(p, coeffs))
}

/// Trial division by every monic polynomial of degree `1..=m/2`.
fn is_irreducible(p: u32, coeffs: &[u32]) -> bool {
    let m = coeffs.len();
    if m == 1 {
        return true;
    }
    let mut poly: Vec<u32> = coeffs.to_vec();
    poly.push(1);
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut div = vec![0u32; d + 1];
            let mut rest = idx;
            for c in div.iter_mut().take(d) {
                *c = (rest % p as u64) as u32;
                rest /= p as u64;
            }
            div[d] = 1;
            if poly_remainder_is_zero(p, &poly, &div) {
                return false;
            }
        }
    }
    true
}

fn poly_remainder_is_zero(p: u32, poly: &[u32], div: &[u32]) -> bool {
    let mut rem: Vec<u64> = poly.iter().map(|&c| c as u64).collect();
    let d = div.len() - 1;
    let p = p as u64;
    for i in (d..rem.len()).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        rem[i] = 0;
        for (k, &dc) in div.iter().take(d).enumerate() {
            rem[i - d + k] = (rem[i - d + k] + c * (p - dc as u64)) % p;
        }
    }
    rem.iter().all(|&c| c == 0)
}
