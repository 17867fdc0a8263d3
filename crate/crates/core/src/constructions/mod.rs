//! Marking constructors, the lift and scale combinators, and the planner that
//! reduces a feasible instance to one of the base constructions.

pub mod ant;
pub mod appendix;
pub mod combinators;
pub mod zero_b;

use std::fmt;

pub use ant::{construct_ant, derive_ant_params, AntParams};
pub use appendix::{construct_appendix, solve_appendix, AppendixParams};
pub use combinators::{lift, scale, unit_marking};
pub use zero_b::{construct_0b_prime, construct_a0, split_coprime, split_tb_h};

use crate::error::{Error, Result};
use crate::feasibility::{feasibility, Params};
use crate::grid::{is_prime, prime_power, GroupKind, Marking, DEFAULT_CELL_CAP};
use crate::verify::{verify_with_cap, VerifyReport};

/// Seed of the random `q'` tables tried by the prime-power construction.
pub const QPRIME_SEED: u64 = 0x5eed_0001;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    /// Largest `n k^n` any intermediate marking may reach.
    pub cell_cap: u128,
    /// Parity group of the prime-power construction.
    pub appendix_group: GroupKind,
    /// Random `q'` tables tried after the default one fails.
    pub qprime_retries: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            cell_cap: DEFAULT_CELL_CAP,
            appendix_group: GroupKind::Product,
            qprime_retries: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Plan {
    /// `[1,1]_k^k`
    Unit {
        k: u32,
    },
    Base0b {
        k: u32,
        n: usize,
        b: usize,
    },
    BaseA0General {
        k: u32,
        n: usize,
        b: usize,
    },
    BaseAnt {
        k: u32,
        n: usize,
        a: usize,
        t: usize,
    },
    BaseAppendix {
        k: u32,
        n: usize,
        a: usize,
        t: usize,
    },
    Lift(Box<Plan>),
    Scale(Box<Plan>, usize),
}

impl Plan {
    /// `(k, n, a, b)` of the marking the plan produces.
    pub fn target(&self) -> (u32, usize, usize, usize) {
        match *self {
            Plan::Unit { k } => (k, k as usize, 1, 1),
            Plan::Base0b { k, n, b } | Plan::BaseA0General { k, n, b } => (k, n, 0, b),
            Plan::BaseAnt { k, n, a, t } | Plan::BaseAppendix { k, n, a, t } => (k, n, a, n - t),
            Plan::Lift(ref c) => {
                let (k, n, a, b) = c.target();
                (k, n + k as usize, a + 1, b + 1)
            }
            Plan::Scale(ref c, r) => {
                let (k, n, a, b) = c.target();
                (k, r * n, r * a, r * b)
            }
        }
    }

    /// Number of lift steps above the base construction.
    pub fn lift_depth(&self) -> usize {
        match self {
            Plan::Lift(c) => 1 + c.lift_depth(),
            Plan::Scale(c, _) => c.lift_depth(),
            _ => 0,
        }
    }
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Plan::Unit { k } => write!(f, "unit(k={k})"),
            Plan::Base0b { k, n, b } => write!(f, "zero-b-prime(k={k}, n={n}, b={b})"),
            Plan::BaseA0General { k, n, b } => write!(f, "zero-b-general(k={k}, n={n}, b={b})"),
            Plan::BaseAnt { k, n, a, t } => write!(f, "ant(k={k}, n={n}, a={a}, t={t})"),
            Plan::BaseAppendix { k, n, a, t } => {
                write!(f, "prime-power(k={k}, n={n}, a={a}, t={t})")
            }
            Plan::Lift(c) => write!(f, "lift({c})"),
            Plan::Scale(c, r) => write!(f, "scale({c}, r={r})"),
        }
    }
}

/// Coarse construction route, as listed in feasibility tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    ZeroB,
    AntBase,
    LiftRecursion,
    Appendix,
    Uniform,
    Unsupported,
}

impl Route {
    pub fn of(plan: &Result<Plan>) -> Route {
        match plan {
            Ok(Plan::Unit { .. }) => Route::Uniform,
            Ok(Plan::Scale(c, _)) => Route::of(&Ok((**c).clone())),
            Ok(Plan::Base0b { .. } | Plan::BaseA0General { .. }) => Route::ZeroB,
            Ok(Plan::BaseAnt { .. }) => Route::AntBase,
            Ok(Plan::BaseAppendix { .. }) => Route::Appendix,
            Ok(Plan::Lift(_)) => Route::LiftRecursion,
            Err(_) => Route::Unsupported,
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::ZeroB => "0b",
            Route::AntBase => "a,n-t",
            Route::LiftRecursion => "lift-recursion",
            Route::Appendix => "appendix",
            Route::Uniform => "uniform",
            Route::Unsupported => "unsupported-open-case",
        })
    }
}

/// Chooses the construction for a feasible instance.
pub fn plan(p: &Params) -> Result<Plan> {
    feasibility(p)?;
    plan_feasible(p.k, p.n, p.a, p.b)
}

fn plan_feasible(k: u32, n: usize, a: usize, b: usize) -> Result<Plan> {
    let kk = k as usize;
    if a == b {
        if n != kk * a {
            return Err(Error::Infeasible);
        }
        let unit = Plan::Unit { k };
        return Ok(if a == 1 {
            unit
        } else {
            Plan::Scale(Box::new(unit), a)
        });
    }
    if a == 0 {
        return Ok(if is_prime(k) {
            Plan::Base0b { k, n, b }
        } else {
            Plan::BaseA0General { k, n, b }
        });
    }
    if is_prime(k) {
        if b + kk > n {
            return Ok(Plan::BaseAnt { k, n, a, t: n - b });
        }
        return Ok(Plan::Lift(Box::new(plan_feasible(
            k,
            n - kk,
            a - 1,
            b - 1,
        )?)));
    }
    let t = n - b;
    if prime_power(k).is_some() && solve_appendix(k, n, a, t).is_ok() {
        return Ok(Plan::BaseAppendix { k, n, a, t });
    }
    Err(Error::UnsupportedOpenCase { k, n, a, b })
}

/// Runs a plan without a final verification pass.
pub fn execute(plan: &Plan, opts: &Options) -> Result<Marking> {
    match *plan {
        Plan::Unit { k } => unit_marking(k),
        Plan::Base0b { k, n, b } => construct_0b_prime(k, n, b, opts),
        Plan::BaseA0General { k, n, b } => construct_a0(k, n, b, opts),
        Plan::BaseAnt { k, n, a, t } => construct_ant(k, n, a, t, opts),
        Plan::BaseAppendix { k, n, a, t } => construct_appendix(k, n, a, t, None, opts),
        Plan::Lift(ref c) => combinators::lift_marking(&execute(c, opts)?, opts.cell_cap),
        Plan::Scale(ref c, r) => combinators::scale_marking(&execute(c, opts)?, r, opts.cell_cap),
    }
}

/// A marking together with the report that certifies it.
#[derive(Clone, Debug)]
pub struct Certified {
    pub params: Params,
    pub plan: Plan,
    pub marking: Marking,
    pub report: VerifyReport,
}

/// Plans, builds and verifies `p`. Never returns an unverified marking.
pub fn construct(p: &Params, opts: &Options) -> Result<Certified> {
    let plan = plan(p)?;
    let marking = execute(&plan, opts)?;
    let report = verify_with_cap(&marking, p, opts.cell_cap)?;
    if !report.ok {
        return Err(Error::Internal(format!(
            "{plan} produced a marking that fails verification as {p}:\n{}",
            report.render()
        )));
    }
    Ok(Certified {
        params: *p,
        plan,
        marking,
        report,
    })
}
