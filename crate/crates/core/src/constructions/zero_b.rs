//! `[0,b]_k^n`: every point is unmarked or marked exactly `b` times.
//!
//! After dividing out a factor handled by [`scale_marking`], write
//! `n = t b + h` and split the coordinates into an `x` block of `b` (indexed by
//! the index group `[b]`), a `y` block of `(t-1) b` and a `z` block of `h`.
//! Pivots are parity-0 points whose characteristic value is among the first `h`
//! elements of `[b]`. An `x`-line marks its pivot when it has one and its
//! parity-`s*` point otherwise; `y`-line `(i, j)` marks parity `τ(i)`; `z`-lines
//! mark parity `s*`.

use super::combinators::scale_marking;
use super::Options;
use crate::algebra::{GeneralChar, PrimeChar};
use crate::error::{Error, Result};
use crate::feasibility::{feasibility, Params};
use crate::grid::{factorize, is_prime, solve_digit, GroupSpec, Marking, Shape};

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `(t, h)` with `n = t b + h`, `1 <= t <= k-1`, `0 <= h <= b`, preferring the
/// largest `t`.
pub fn split_tb_h(k: u32, n: usize, b: usize) -> Result<(usize, usize)> {
    if b == 0 || n < b || n > k as usize * b {
        return Err(Error::Precondition(format!(
            "need b <= n <= kb, got b={b}, n={n}"
        )));
    }
    let t = (k as usize - 1).min(n / b);
    Ok((t, n - t * b))
}

fn check_zero_b(k: u32, n: usize, b: usize) -> Result<()> {
    if b == 0 || b > n || n > k as usize * b {
        return Err(Error::Precondition(format!(
            "need 1 <= b <= n <= kb, got b={b}, n={n}"
        )));
    }
    match feasibility(&Params::new(k, n, 0, b)?) {
        Ok(_) => Ok(()),
        Err(Error::Infeasible) => Err(Error::Precondition(format!(
            "(kb-n)/b * k^(n-1) is not an integer for k={k}, n={n}, b={b}"
        ))),
        Err(e) => Err(e),
    }
}

struct ZeroBLayout<'a, F> {
    group: &'a GroupSpec,
    b: usize,
    t: usize,
    s_star: u32,
    /// parity targets of the `t - 1` groups of `y`-lines
    tau: Vec<u32>,
    is_pivot_value: F,
}

impl<F> ZeroBLayout<'_, F>
where
    F: Fn(&[u32]) -> bool,
{
    fn build(&self, shape: Shape) -> Marking {
        let g = self.group;
        let b = self.b;
        let mut scratch = vec![0u32; b];
        Marking::from_fn(shape, |dir, coords| {
            let rest = g.sum(coords.iter().copied());
            if dir < b {
                let zero = solve_digit(rest, 0, g);
                scratch.copy_from_slice(&coords[..b]);
                scratch[dir] = zero;
                if (self.is_pivot_value)(&scratch) {
                    zero
                } else {
                    solve_digit(rest, self.s_star, g)
                }
            } else if dir < self.t * b {
                solve_digit(rest, self.tau[(dir - b) / b], g)
            } else {
                solve_digit(rest, self.s_star, g)
            }
        })
    }
}

/// `[0,b]_k^n` for prime `k`, over `Z_k` with `s* = 1` and `τ(i) = i + 1`.
pub fn construct_0b_prime(k: u32, n: usize, b: usize, opts: &Options) -> Result<Marking> {
    if !is_prime(k) {
        return Err(Error::Precondition(format!("k={k} is not prime")));
    }
    check_zero_b(k, n, b)?;
    let r = gcd(b, n);
    if r > 1 {
        let inner = construct_0b_prime(k, n / r, b / r, opts)?;
        return scale_marking(&inner, r, opts.cell_cap);
    }
    let shape = Shape::with_cap(k, n, opts.cell_cap)?;
    let (m, rest) = super::ant::valuation(b, k as usize);
    if rest != 1 {
        return Err(Error::Internal(format!(
            "b={b} is not a power of k={k} after reduction"
        )));
    }
    let (t, h) = split_tb_h(k, n, b)?;
    let group = GroupSpec::cyclic(k)?;
    let q = PrimeChar::new(k, m, 1)?;
    let h = h as u32;
    Ok(ZeroBLayout {
        group: &group,
        b,
        t,
        s_star: 1,
        tau: (2..=t as u32).collect(),
        is_pivot_value: |x: &[u32]| q.eval_unchecked(x) < h,
    }
    .build(shape))
}

/// Splits `b = d r` with `gcd(r, k) = 1` and every prime of `d` dividing `k`.
pub fn split_coprime(k: u32, b: usize) -> (usize, usize) {
    let mut d = 1usize;
    let mut r = b;
    for (p, _) in factorize(k) {
        let (v, rest) = super::ant::valuation(r, p as usize);
        d *= (p as usize).pow(v);
        r = rest;
    }
    (d, r)
}

/// `[0,b]_k^n` for any `k`, over the product group structure on `[k]` with
/// `s*` the all-ones element and the characteristic function `Σ x_i ⊛ i`.
pub fn construct_a0(k: u32, n: usize, b: usize, opts: &Options) -> Result<Marking> {
    check_zero_b(k, n, b)?;
    let (d, r) = split_coprime(k, b);
    if r > 1 {
        if !n.is_multiple_of(r) {
            return Err(Error::Internal(format!(
                "coprime part r={r} of b does not divide n={n}"
            )));
        }
        let inner = construct_a0(k, n / r, d, opts)?;
        return scale_marking(&inner, r, opts.cell_cap);
    }
    let shape = Shape::with_cap(k, n, opts.cell_cap)?;
    let (t, h) = split_tb_h(k, n, b)?;
    let kspec = GroupSpec::product(k)?;
    let bspec = GroupSpec::product(b as u32)?;
    let q = GeneralChar::new(&kspec, &bspec)?;
    let s_star = kspec.all_ones();
    let tau: Vec<u32> = (0..k)
        .filter(|&e| e != 0 && e != s_star)
        .take(t - 1)
        .collect();
    if tau.len() != t - 1 {
        return Err(Error::Internal(format!(
            "cannot fit {} y-groups into k={k}",
            t - 1
        )));
    }
    let h = h as u32;
    Ok(ZeroBLayout {
        group: &kspec,
        b,
        t,
        s_star,
        tau,
        is_pivot_value: |x: &[u32]| q.eval_unchecked(x) < h,
    }
    .build(shape))
}
