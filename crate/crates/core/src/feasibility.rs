//! The double-counting condition on `(k, n, a, b)`.
//!
//! A marking in which every point of `[k]^n` is marked `a` or `b` times must have
//! `s` points marked `a` times and `t` marked `b` times with `s + t = k^n` and
//! `a*s + b*t = n*k^(n-1)`. All arithmetic is checked 128-bit.

use std::fmt;

use crate::constructions::{plan, Route};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Params {
    pub k: u32,
    pub n: usize,
    pub a: usize,
    pub b: usize,
}

impl Params {
    pub fn new(k: u32, n: usize, a: usize, b: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParams(format!("k={k} must be at least 2")));
        }
        if n < 1 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        if a > b || b > n {
            return Err(Error::InvalidParams(format!(
                "need 0 <= a <= b <= n, got a={a}, b={b}, n={n}"
            )));
        }
        Ok(Params { k, n, a, b })
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]_{}^{}", self.a, self.b, self.k, self.n)
    }
}

/// Number of `a`-marked points (`s`) and `b`-marked points (`t`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FeasibilityWitness {
    pub s: u128,
    pub t: u128,
}

pub(crate) fn checked_pow(base: u128, exp: usize) -> Result<u128> {
    let mut acc = 1u128;
    for _ in 0..exp {
        acc = acc.checked_mul(base).ok_or(Error::Overflow("k^n"))?;
    }
    Ok(acc)
}

/// Closed-form witness, or [`Error::Infeasible`] when `s` or `t` is not a
/// nonnegative integer. For `a = b` the instance is feasible iff `n = k*a`, with
/// witness `(k^n, 0)`.
pub fn feasibility(p: &Params) -> Result<FeasibilityWitness> {
    let k = p.k as u128;
    let (n, a, b) = (p.n as u128, p.a as u128, p.b as u128);
    let points = checked_pow(k, p.n)?;
    if a == b {
        return if n == k * a {
            Ok(FeasibilityWitness { s: points, t: 0 })
        } else {
            Err(Error::Infeasible)
        };
    }
    // s = k^(n-1) (kb - n) / (b - a), t = k^(n-1) (n - ka) / (b - a)
    if k * a > n || n > k * b {
        return Err(Error::Infeasible);
    }
    let lines = checked_pow(k, p.n - 1)?;
    let s_num = lines
        .checked_mul(k * b - n)
        .ok_or(Error::Overflow("k^(n-1) (kb - n)"))?;
    let t_num = lines
        .checked_mul(n - k * a)
        .ok_or(Error::Overflow("k^(n-1) (n - ka)"))?;
    let d = b - a;
    if s_num % d != 0 || t_num % d != 0 {
        return Err(Error::Infeasible);
    }
    let w = FeasibilityWitness {
        s: s_num / d,
        t: t_num / d,
    };
    debug_assert_eq!(w.s + w.t, points);
    Ok(w)
}

pub fn is_feasible(p: &Params) -> Result<bool> {
    match feasibility(p) {
        Ok(_) => Ok(true),
        Err(Error::Infeasible) => Ok(false),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub a: usize,
    pub b: usize,
    pub witness: Option<FeasibilityWitness>,
    pub route: Option<Route>,
}

/// One row per pair `0 <= a < b <= n`, with the witness and the construction
/// route for feasible pairs.
pub fn feasible_table(k: u32, n: usize) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for b in 1..=n {
        for a in 0..b {
            let p = Params::new(k, n, a, b)?;
            let row = match feasibility(&p) {
                Ok(w) => TableRow {
                    a,
                    b,
                    witness: Some(w),
                    route: Some(Route::of(&plan(&p))),
                },
                Err(Error::Infeasible) => TableRow {
                    a,
                    b,
                    witness: None,
                    route: None,
                },
                Err(e) => return Err(e),
            };
            rows.push(row);
        }
    }
    rows.sort_by_key(|r| (r.a, r.b));
    Ok(rows)
}
