//! `[a, n-t]_k^n` for `k = p^m` when `n - t - a = p^s r` with `s >= m`.
//!
//! Same layout as the prime construction, with the `x` block indexed by
//! `F_{p^s} × [r]` and characteristic value `Σ_i q'(row sum of i) · i` in the
//! field. Whether a given `q'` and parity group yield a valid marking is left
//! to the verifier: the default table is tried first, then seeded random ones.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ant::{lexicographic_partition, valuation, AntLayout};
use super::{Options, QPRIME_SEED};
use crate::algebra::field::MAX_FIELD_ORDER;
use crate::algebra::{FieldChar, FieldSpec};
use crate::error::{Error, Result};
use crate::feasibility::Params;
use crate::grid::{prime_power, GroupSpec, Marking, Shape};
use crate::verify::{verify_with_cap, VerifyReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppendixParams {
    pub k: u32,
    pub p: u32,
    pub m: u32,
    pub n: usize,
    pub a: usize,
    pub t: usize,
    /// `n - t - a = p^s r` with `p ∤ r`
    pub s: u32,
    pub r: usize,
    pub aprime: usize,
    pub partition: Vec<Vec<(usize, usize)>>,
}

impl AppendixParams {
    pub fn field_order(&self) -> usize {
        (self.p as usize).pow(self.s)
    }

    pub fn x_len(&self) -> usize {
        self.n - self.t - self.a
    }

    fn class_table(&self) -> Vec<u32> {
        let mut table = vec![0u32; self.aprime * self.r];
        for (s, block) in self.partition.iter().enumerate() {
            for &(gamma, j) in block {
                table[gamma * self.r + j] = s as u32 + 1;
            }
        }
        table
    }
}

pub fn solve_appendix(k: u32, n: usize, a: usize, t: usize) -> Result<AppendixParams> {
    let reject = |why: String| Err(Error::Precondition(why));
    let Some((p, m)) = prime_power(k) else {
        return reject(format!("k={k} is not a prime power"));
    };
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
    let (s, r) = valuation(n - t - a, p as usize);
    if s < m {
        return reject(format!("p-adic valuation s={s} of n-t-a is below m={m}"));
    }
    if !(n - kk * a).is_multiple_of(r) {
        return reject(format!("r={r} does not divide n-ka={}", n - kk * a));
    }
    let order = (p as usize)
        .checked_pow(s)
        .filter(|&o| o <= MAX_FIELD_ORDER as usize);
    let Some(order) = order else {
        return reject(format!("field order {p}^{s} exceeds {MAX_FIELD_ORDER}"));
    };
    let aprime = ((kk - 1) * a - t) / r;
    if aprime > order {
        return reject(format!("a'={aprime} exceeds the field order {order}"));
    }
    Ok(AppendixParams {
        k,
        p,
        m,
        n,
        a,
        t,
        s,
        r,
        aprime,
        partition: lexicographic_partition(aprime, r, k, a, t),
    })
}

fn build(ap: &AppendixParams, shape: &Shape, group: &GroupSpec, q: &FieldChar) -> Marking {
    let aprime = ap.aprime as u32;
    AntLayout {
        group,
        x_len: ap.x_len(),
        r: ap.r,
        t: ap.t,
        classes: ap.class_table(),
        classify: |x: &[u32]| {
            let v = q.eval_unchecked(x);
            (v < aprime).then_some(v as usize)
        },
    }
    .build(shape.clone())
}

fn summarize(p: &Params, report: &VerifyReport) -> String {
    format!(
        "{p}: {} points off target, count_a={}, count_b={}",
        report.violation_count, report.count_a, report.count_b
    )
}

/// Builds and verifies the prime-power marking. With `qprime = None` the
/// identity table is tried first and, on failure, up to `opts.qprime_retries`
/// random tables; an explicit `qprime` is tried alone.
pub fn construct_appendix(
    k: u32,
    n: usize,
    a: usize,
    t: usize,
    qprime: Option<Vec<u32>>,
    opts: &Options,
) -> Result<Marking> {
    let ap = solve_appendix(k, n, a, t)?;
    let params = Params::new(k, n, a, n - t)?;
    let shape = Shape::with_cap(k, n, opts.cell_cap)?;
    let group = GroupSpec::new(k, opts.appendix_group)?;
    let field = FieldSpec::with_degree(ap.p, ap.s)?;
    let retries = if qprime.is_some() {
        0
    } else {
        opts.qprime_retries
    };
    let first = match qprime {
        Some(table) => table,
        None => FieldChar::default_qprime(&field, k)?,
    };

    let attempt = |table: Vec<u32>| -> Result<(Marking, VerifyReport)> {
        let q = FieldChar::new(&field, &group, ap.r, table)?;
        let m = build(&ap, &shape, &group, &q);
        let report = verify_with_cap(&m, &params, opts.cell_cap)?;
        Ok((m, report))
    };

    let (m, first_report) = attempt(first)?;
    if first_report.ok {
        return Ok(m);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(QPRIME_SEED);
    for _ in 0..retries {
        let table = (0..k).map(|_| rng.gen_range(0..field.order())).collect();
        let (m, report) = attempt(table)?;
        if report.ok {
            return Ok(m);
        }
    }
    Err(Error::ExperimentalFailure {
        attempts: 1 + retries,
        summary: summarize(&params, &first_report),
        report: Box::new(first_report),
    })
}
