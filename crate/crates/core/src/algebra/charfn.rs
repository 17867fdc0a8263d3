//! Linear characteristic functions on a block of coordinates.
//!
//! Each maps a vector of colors, indexed by the elements of some index group, to
//! an element of that index group. The property every construction relies on is
//! that moving one coordinate by a fixed shift moves the characteristic value by
//! an amount that is distinct for distinct coordinates.

use crate::algebra::field::FieldSpec;
use crate::error::{Error, Result};
use crate::grid::{is_prime, GroupSpec};

/// Base-`k` digits of `i`, most significant first, `m` of them.
pub fn index_digits(i: usize, k: u32, m: u32) -> Vec<u32> {
    let mut out = vec![0; m as usize];
    let mut rest = i;
    for d in out.iter_mut().rev() {
        *d = (rest % k as usize) as u32;
        rest /= k as usize;
    }
    out
}

fn check_prime(k: u32) -> Result<()> {
    if is_prime(k) {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("k={k} must be prime")))
    }
}

/// `Σ_i (Σ_j x_{i,j}) · i` over `Z_k^m`, where the coordinate `(i, j)` sits at
/// position `i * r + j` and `i` runs over `Z_k^m` in base-`k` order.
///
/// Returns the `m` digits of the result, most significant first.
pub fn q_prime(x: &[u32], k: u32, m: u32, r: usize) -> Result<Vec<u32>> {
    check_prime(k)?;
    let blocks = (k as usize).pow(m);
    if x.len() != blocks * r {
        return Err(Error::LengthMismatch {
            expected: blocks * r,
            got: x.len(),
        });
    }
    let mut acc = vec![0u32; m as usize];
    for (i, row) in x.chunks(r.max(1)).enumerate().take(blocks) {
        let sum = row.iter().fold(0u32, |s, &v| (s + v % k) % k);
        if sum == 0 {
            continue;
        }
        for (a, d) in acc.iter_mut().zip(index_digits(i, k, m)) {
            *a = (*a + sum * d) % k;
        }
    }
    Ok(acc)
}

/// Allocation-free form of [`q_prime`] returning the encoded value
/// `Σ digit_l k^(m-1-l)`.
#[derive(Clone, Debug)]
pub struct PrimeChar {
    k: u32,
    m: u32,
    r: usize,
    index_count: usize,
}

impl PrimeChar {
    pub fn new(k: u32, m: u32, r: usize) -> Result<Self> {
        check_prime(k)?;
        if r == 0 {
            return Err(Error::InvalidParams("r must be positive".into()));
        }
        let index_count = (k as usize)
            .checked_pow(m)
            .filter(|&c| c <= u32::MAX as usize)
            .ok_or(Error::Overflow("k^m"))?;
        Ok(PrimeChar {
            k,
            m,
            r,
            index_count,
        })
    }

    pub fn len(&self) -> usize {
        self.index_count * self.r
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn value_count(&self) -> usize {
        self.index_count
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, x: &[u32]) -> u32 {
        let k = self.k;
        let mut acc = 0u32;
        // the encoded digit vector of index i is i itself
        for (i, row) in x.chunks(self.r).enumerate() {
            let sum = row.iter().fold(0u32, |s, &v| (s + v) % k);
            if sum != 0 {
                acc = add_scaled(acc, i as u32, sum, k, self.m);
            }
        }
        acc
    }
}

/// `acc + scalar * v` digit-wise over `Z_k`, for `m`-digit encoded vectors.
fn add_scaled(acc: u32, v: u32, scalar: u32, k: u32, m: u32) -> u32 {
    let (mut acc, mut v) = (acc, v);
    let mut out = 0;
    let mut scale = 1;
    for _ in 0..m {
        out += ((acc % k + scalar * (v % k)) % k) * scale;
        acc /= k;
        v /= k;
        scale *= k;
    }
    out
}

/// `q_prime(x - shift·e_{(i,j)})`, evaluated directly.
pub fn shift_identity_prime(
    x: &[u32],
    k: u32,
    m: u32,
    r: usize,
    shift: u32,
    i: usize,
    j: usize,
) -> Result<Vec<u32>> {
    let pos = i * r + j;
    if j >= r || pos >= x.len() {
        return Err(Error::InvalidParams(format!(
            "index ({i}, {j}) out of range"
        )));
    }
    let mut y = x.to_vec();
    y[pos] = (y[pos] + k - shift % k) % k;
    q_prime(&y, k, m, r)
}

/// The scalar-like product `u ⊛ v` of an element of `[k]` with an element of
/// `[b]`: each prime block of `v` is multiplied by the least significant digit of
/// the same prime's block of `u`.
pub fn circledast(u: u32, v: u32, kspec: &GroupSpec, bspec: &GroupSpec) -> Result<u32> {
    let lsd = block_scalars(u, kspec, bspec)?;
    let mut digits = bspec.decode(v);
    let mut pos = 0;
    for (block, &(p, beta)) in bspec.factors().iter().enumerate() {
        for d in &mut digits[pos..pos + beta as usize] {
            *d = (*d * lsd[block]) % p;
        }
        pos += beta as usize;
    }
    bspec.encode(&digits)
}

/// For each prime block of `bspec`, the least significant digit of `u`'s block
/// for the same prime.
fn block_scalars(u: u32, kspec: &GroupSpec, bspec: &GroupSpec) -> Result<Vec<u32>> {
    let digits = kspec.decode(u);
    let mut ends = Vec::with_capacity(kspec.factors().len());
    let mut pos = 0usize;
    for &(p, alpha) in kspec.factors() {
        pos += alpha as usize;
        ends.push((p, pos - 1));
    }
    bspec
        .factors()
        .iter()
        .map(|&(p, _)| {
            ends.iter()
                .find(|&&(q, _)| q == p)
                .map(|&(_, last)| digits[last])
                .ok_or(Error::IncompatibleGroups(p))
        })
        .collect()
}

/// Table-driven evaluator of `q(x) = Σ_i x_i ⊛ i`, with `x` indexed by the
/// encoded elements of `[b]`.
#[derive(Clone, Debug)]
pub struct GeneralChar {
    kspec: GroupSpec,
    bspec: GroupSpec,
    /// `table[u * b + i] = u ⊛ i`
    table: Vec<u32>,
}

impl GeneralChar {
    pub fn new(kspec: &GroupSpec, bspec: &GroupSpec) -> Result<Self> {
        let (k, b) = (kspec.k(), bspec.k());
        let mut table = Vec::with_capacity((k * b) as usize);
        for u in 0..k {
            for i in 0..b {
                table.push(circledast(u, i, kspec, bspec)?);
            }
        }
        Ok(GeneralChar {
            kspec: kspec.clone(),
            bspec: bspec.clone(),
            table,
        })
    }

    pub fn kspec(&self) -> &GroupSpec {
        &self.kspec
    }

    pub fn bspec(&self) -> &GroupSpec {
        &self.bspec
    }

    #[inline]
    pub fn term(&self, u: u32, i: usize) -> u32 {
        self.table[u as usize * self.bspec.k() as usize + i]
    }

    pub fn eval(&self, x: &[u32]) -> Result<u32> {
        let b = self.bspec.k() as usize;
        if x.len() != b {
            return Err(Error::LengthMismatch {
                expected: b,
                got: x.len(),
            });
        }
        Ok(self.eval_unchecked(x))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, x: &[u32]) -> u32 {
        x.iter()
            .enumerate()
            .fold(0, |acc, (i, &u)| self.bspec.add(acc, self.term(u, i)))
    }
}

/// `q(x) = Σ_i x_i ⊛ i` for `x` of length `b` over `[k]`.
pub fn q_general(x: &[u32], kspec: &GroupSpec, bspec: &GroupSpec) -> Result<u32> {
    GeneralChar::new(kspec, bspec)?.eval(x)
}

/// Evaluator of `q(x) = Σ_i q'(Σ_j x_{i,j}) · i` over `F_{p^s}`, where the row
/// sums are taken in the parity group of the colors and `i` runs over the field
/// elements in encoded order.
#[derive(Clone, Debug)]
pub struct FieldChar {
    field: FieldSpec,
    group: GroupSpec,
    r: usize,
    qprime: Vec<u32>,
    /// `table[v * order + i] = q'(v) · i`
    table: Vec<u32>,
}

impl FieldChar {
    pub fn new(field: &FieldSpec, group: &GroupSpec, r: usize, qprime: Vec<u32>) -> Result<Self> {
        if qprime.len() != group.k() as usize {
            return Err(Error::LengthMismatch {
                expected: group.k() as usize,
                got: qprime.len(),
            });
        }
        if let Some(&v) = qprime.iter().find(|&&v| v >= field.order()) {
            return Err(Error::DigitOutOfRange {
                digit: v,
                k: field.order(),
            });
        }
        if r == 0 {
            return Err(Error::InvalidParams("r must be positive".into()));
        }
        let order = field.order();
        let mut table = Vec::with_capacity(qprime.len() * order as usize);
        for &v in &qprime {
            for i in 0..order {
                table.push(field.mul(v, i));
            }
        }
        Ok(FieldChar {
            field: field.clone(),
            group: group.clone(),
            r,
            qprime,
            table,
        })
    }

    /// Reads the base-`p` digits of each color as the coefficients of a field
    /// element. Requires `k = p^m` with `m <= s`.
    pub fn default_qprime(field: &FieldSpec, k: u32) -> Result<Vec<u32>> {
        if (field.p() as u64).pow(field.degree()) < k as u64 {
            return Err(Error::InvalidParams(format!(
                "F_{} is too small to embed {k} colors",
                field.order()
            )));
        }
        Ok((0..k).collect())
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn qprime(&self) -> &[u32] {
        &self.qprime
    }

    pub fn len(&self) -> usize {
        self.field.order() as usize * self.r
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn eval(&self, x: &[u32]) -> Result<u32> {
        if x.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: x.len(),
            });
        }
        if let Some(&c) = x.iter().find(|&&c| c >= self.group.k()) {
            return Err(Error::DigitOutOfRange {
                digit: c,
                k: self.group.k(),
            });
        }
        Ok(self.eval_unchecked(x))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, x: &[u32]) -> u32 {
        let order = self.field.order() as usize;
        x.chunks(self.r).enumerate().fold(0, |acc, (i, row)| {
            let v = self.group.sum(row.iter().copied());
            self.field.add(acc, self.table[v as usize * order + i])
        })
    }
}

/// `q(x) = Σ_i q'(Σ_j x_{i,j}) · i` over `F_{p^s}`; see [`FieldChar`].
pub fn q_field(
    x: &[u32],
    field: &FieldSpec,
    group: &GroupSpec,
    r: usize,
    qprime: &[u32],
) -> Result<u32> {
    FieldChar::new(field, group, r, qprime.to_vec())?.eval(x)
}
