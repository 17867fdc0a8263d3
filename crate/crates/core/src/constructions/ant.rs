//! `[a, n-t]_k^n` for prime `k`, `0 <= t < k`, `1 <= a < n - t`.
//!
//! The coordinates split into an `x` block of `k^m r` coordinates indexed by
//! `(i, j) ∈ Z_k^m × [r]`, a `y` block of `t` and a `z` block of `a`. The pivot
//! set `M` holds the parity-0 points whose characteristic value is one of the
//! first `a'` elements of `Z_k^m`. An `x`-line through a pivot marks the point
//! of parity `s`, where `s` is the partition class of (pivot value, `j`); every
//! other `x`-line and every `z`-line marks its parity-0 point; the `i`-th
//! `y`-line marks parity `i`.

use super::Options;
use crate::algebra::PrimeChar;
use crate::error::{Error, Result};
use crate::grid::{is_prime, solve_digit, GroupSpec, Marking, Shape};

/// Derived parameters of the construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntParams {
    pub k: u32,
    pub n: usize,
    pub a: usize,
    pub t: usize,
    /// `n - t - a = k^m r` with `gcd(r, k) = 1`
    pub m: u32,
    pub r: usize,
    /// `a' = ((k-1)a - t) / r`, the number of pivot values
    pub aprime: usize,
    /// Encoded pivot values, the first `a'` elements of `Z_k^m`.
    pub w: Vec<u32>,
    /// `partition[s - 1]` lists the pairs `(γ, j)` of class `s`, for `s` in `1..k`.
    pub partition: Vec<Vec<(usize, usize)>>,
}

impl AntParams {
    pub fn x_len(&self) -> usize {
        self.n - self.t - self.a
    }

    /// Partition class of each flattened pair `γ * r + j`.
    pub fn class_table(&self) -> Vec<u32> {
        let mut table = vec![0u32; self.aprime * self.r];
        for (s, block) in self.partition.iter().enumerate() {
            for &(gamma, j) in block {
                table[gamma * self.r + j] = s as u32 + 1;
            }
        }
        table
    }
}

/// `(v, rest)` with `n = p^v * rest` and `p ∤ rest`.
pub(crate) fn valuation(mut n: usize, p: usize) -> (u32, usize) {
    let mut v = 0;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    (v, n)
}

/// Lexicographic partition of `[a'] × [r]` into `k - 1` classes: the first `t`
/// of size `a - 1`, the remaining `k - 1 - t` of size `a`.
pub(crate) fn lexicographic_partition(
    aprime: usize,
    r: usize,
    k: u32,
    a: usize,
    t: usize,
) -> Vec<Vec<(usize, usize)>> {
    let mut pairs = (0..aprime).flat_map(|g| (0..r).map(move |j| (g, j)));
    (0..k as usize - 1)
        .map(|s| {
            let size = if s < t { a - 1 } else { a };
            pairs.by_ref().take(size).collect()
        })
        .collect()
}

pub fn derive_ant_params(k: u32, n: usize, a: usize, t: usize) -> Result<AntParams> {
    let reject = |why: String| Err(Error::Precondition(why));
    if !is_prime(k) {
        return reject(format!("k={k} is not prime"));
    }
    let kk = k as usize;
    if t > kk - 1 {
        return reject(format!("t={t} exceeds k-1={}", kk - 1));
    }
    if a < 1 || a + t >= n {
        return reject(format!(
            "need 1 <= a < n-t, got a={a}, n-t={}",
            n.saturating_sub(t)
        ));
    }
    if kk * a > n {
        return reject(format!("n={n} is below k*a={}", kk * a));
    }
    let (m, r) = valuation(n - t - a, kk);
    if !(n - kk * a).is_multiple_of(r) {
        return reject(format!("r={r} does not divide n-ka={}", n - kk * a));
    }
    let aprime = ((kk - 1) * a - t) / r;
    let index_count = kk.pow(m);
    if aprime > index_count {
        return Err(Error::Internal(format!(
            "a'={aprime} exceeds k^m={index_count}"
        )));
    }
    Ok(AntParams {
        k,
        n,
        a,
        t,
        m,
        r,
        aprime,
        w: (0..aprime as u32).collect(),
        partition: lexicographic_partition(aprime, r, k, a, t),
    })
}

/// The line-marking rule shared with the prime-power variant: `classify` maps
/// the `x` block of a parity-0 point to the index of its pivot value, if any.
pub(crate) struct AntLayout<'a, F> {
    pub group: &'a GroupSpec,
    pub x_len: usize,
    pub r: usize,
    pub t: usize,
    pub classes: Vec<u32>,
    pub classify: F,
}

impl<F> AntLayout<'_, F>
where
    F: Fn(&[u32]) -> Option<usize>,
{
    pub(crate) fn build(&self, shape: Shape) -> Marking {
        let g = self.group;
        let mut scratch = vec![0u32; self.x_len];
        Marking::from_fn(shape, |dir, coords| {
            let rest = g.sum(coords.iter().copied());
            if dir < self.x_len {
                let zero = solve_digit(rest, 0, g);
                scratch.copy_from_slice(&coords[..self.x_len]);
                scratch[dir] = zero;
                match (self.classify)(&scratch) {
                    Some(gamma) => {
                        let s = self.classes[gamma * self.r + dir % self.r];
                        solve_digit(rest, s, g)
                    }
                    None => zero,
                }
            } else if dir < self.x_len + self.t {
                solve_digit(rest, (dir - self.x_len + 1) as u32, g)
            } else {
                solve_digit(rest, 0, g)
            }
        })
    }
}

/// Builds `[a, n-t]_k^n` for prime `k`.
pub fn construct_ant(k: u32, n: usize, a: usize, t: usize, opts: &Options) -> Result<Marking> {
    let ap = derive_ant_params(k, n, a, t)?;
    let shape = Shape::with_cap(k, n, opts.cell_cap)?;
    let group = GroupSpec::cyclic(k)?;
    let q = PrimeChar::new(k, ap.m, ap.r)?;
    debug_assert_eq!(q.len(), ap.x_len());
    let aprime = ap.aprime as u32;
    let layout = AntLayout {
        group: &group,
        x_len: ap.x_len(),
        r: ap.r,
        t,
        classes: ap.class_table(),
        classify: |x: &[u32]| {
            let v = q.eval_unchecked(x);
            (v < aprime).then_some(v as usize)
        },
    };
    Ok(layout.build(shape))
}
