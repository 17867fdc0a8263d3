//! Arithmetic in `F_{p^s}` for `p^s <= 2^16`.
//!
//! Elements are encoded as integers `Σ c_i p^i`, where `c_i` is the coefficient of
//! `x^i` in the polynomial representative modulo the field's modulus.

use crate::error::{Error, Result};
use crate::grid::is_prime;

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u32 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    p: u32,
    s: u32,
    order: u32,
    /// Monic modulus, constant term first, length `s + 1`.
    modulus: Vec<u32>,
}

/// Drops trailing zero coefficients.
fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Remainder of `a` modulo the monic polynomial `m` over `Z_p`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            let idx = shift + i;
            r[idx] = (r[idx] + p - (lead * c) % p) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_from_index(mut idx: u32, degree: u32, p: u32) -> Vec<u32> {
    let mut coeffs = Vec::with_capacity(degree as usize + 1);
    for _ in 0..degree {
        coeffs.push(idx % p);
        idx /= p;
    }
    coeffs.push(1);
    coeffs
}

/// Irreducibility of a monic polynomial by trial division against every monic
/// polynomial of degree `1..=deg/2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let poly = trim(poly.to_vec());
    if poly.len() < 2 {
        return false;
    }
    let deg = (poly.len() - 1) as u32;
    for d in 1..=deg / 2 {
        for idx in 0..p.pow(d) {
            let divisor = poly_from_index(idx, d, p);
            if poly_rem(&poly, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The least monic irreducible polynomial of degree `s` over `Z_p`, ordering
/// candidates by the integer `Σ c_i p^i` of their lower coefficients.
pub fn find_irreducible(p: u32, s: u32) -> Result<Vec<u32>> {
    check_order(p, s)?;
    (0..p.pow(s))
        .map(|idx| poly_from_index(idx, s, p))
        .find(|poly| is_irreducible(poly, p))
        .ok_or_else(|| {
            Error::Internal(format!(
                "no irreducible polynomial of degree {s} over Z_{p}"
            ))
        })
}

fn check_order(p: u32, s: u32) -> Result<u32> {
    if !is_prime(p) || s == 0 {
        return Err(Error::InvalidParams(format!(
            "F_{{{p}^{s}}} is not a field"
        )));
    }
    p.checked_pow(s)
        .filter(|&q| q <= MAX_FIELD_ORDER)
        .ok_or_else(|| Error::InvalidParams(format!("{p}^{s} exceeds {MAX_FIELD_ORDER}")))
}

impl FieldSpec {
    pub fn new(p: u32, modulus: Vec<u32>) -> Result<Self> {
        let modulus = trim(modulus);
        if modulus.len() < 2 || modulus.last() != Some(&1) {
            return Err(Error::InvalidParams(
                "modulus must be monic of degree >= 1".into(),
            ));
        }
        let s = (modulus.len() - 1) as u32;
        let order = check_order(p, s)?;
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidParams(format!(
                "modulus coefficients must be below {p}"
            )));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidParams(format!(
                "{modulus:?} is reducible over Z_{p}"
            )));
        }
        Ok(FieldSpec {
            p,
            s,
            order,
            modulus,
        })
    }

    /// The field with the deterministic modulus from [`find_irreducible`].
    pub fn with_degree(p: u32, s: u32) -> Result<Self> {
        Self::new(p, find_irreducible(p, s)?)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.s
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order
    }

    pub fn coeffs(&self, mut e: u32) -> Vec<u32> {
        (0..self.s)
            .map(|_| {
                let c = e % self.p;
                e /= self.p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<u32> {
        if coeffs.len() > self.s as usize {
            return Err(Error::LengthMismatch {
                expected: self.s as usize,
                got: coeffs.len(),
            });
        }
        let mut e = 0;
        for &c in coeffs.iter().rev() {
            if c >= self.p {
                return Err(Error::DigitOutOfRange {
                    digit: c,
                    k: self.p,
                });
            }
            e = e * self.p + c;
        }
        Ok(e)
    }

    pub fn add(&self, x: u32, y: u32) -> u32 {
        let (mut x, mut y) = (x, y);
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.s {
            out += ((x % self.p + y % self.p) % self.p) * scale;
            x /= self.p;
            y /= self.p;
            scale *= self.p;
        }
        out
    }

    pub fn neg(&self, x: u32) -> u32 {
        let mut x = x;
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.s {
            out += ((self.p - x % self.p) % self.p) * scale;
            x /= self.p;
            scale *= self.p;
        }
        out
    }

    pub fn sub(&self, x: u32, y: u32) -> u32 {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: u32, y: u32) -> u32 {
        let a = self.coeffs(x);
        let b = self.coeffs(y);
        let mut prod = vec![0u32; a.len() + b.len()];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % self.p;
            }
        }
        let r = poly_rem(&prod, &self.modulus, self.p);
        self.from_coeffs(&r).expect("remainder has degree below s")
    }

    pub fn pow(&self, x: u32, mut e: u64) -> u32 {
        let mut base = x;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, x: u32) -> Option<u32> {
        (x != 0).then(|| self.pow(x, self.order as u64 - 2))
    }
}
