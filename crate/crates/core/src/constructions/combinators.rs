//! The unit marking and the two combinators that grow certified markings.

use super::Options;
use crate::error::{Error, Result};
use crate::feasibility::Params;
use crate::grid::{Marking, Shape};
use crate::verify::verify_with_cap;

/// `[1,1]_k^k`: the line along direction `d` marks its point whose coordinate
/// sum is `d` mod `k`, so every point is marked exactly once.
pub fn unit_marking(k: u32) -> Result<Marking> {
    let shape = Shape::new(k, k as usize)?;
    Ok(Marking::from_fn(shape, |dir, coords| {
        let rest = coords.iter().fold(0u32, |s, &c| (s + c) % k);
        (dir as u32 % k + k - rest) % k
    }))
}

fn require_certified(m: &Marking, a: usize, b: usize, opts: &Options) -> Result<()> {
    let p = Params::new(m.k(), m.n(), a, b)?;
    if verify_with_cap(m, &p, opts.cell_cap)?.ok {
        Ok(())
    } else {
        Err(Error::NotCertified { a, b })
    }
}

/// `[a,b]_k^n -> [a+1,b+1]_k^(n+k)`. Rejects input that does not verify.
pub fn lift(m: &Marking, a: usize, b: usize, opts: &Options) -> Result<Marking> {
    require_certified(m, a, b, opts)?;
    lift_marking(m, opts.cell_cap)
}

/// Old directions keep the input's marks and ignore the `k` new coordinates; the
/// new directions follow the unit marking on the new block alone.
pub(crate) fn lift_marking(m: &Marking, cap: u128) -> Result<Marking> {
    let k = m.k();
    let n = m.n();
    let old = m.shape();
    let shape = Shape::with_cap(k, n + k as usize, cap)?;
    Ok(Marking::from_fn(shape, |dir, coords| {
        if dir < n {
            let base = old.index(&coords[..n]);
            let slot = old.slot(crate::grid::LineId { dir, base });
            m.marks()[slot] as u32
        } else {
            let rest = coords[n..].iter().fold(0u32, |s, &c| (s + c) % k);
            ((dir - n) as u32 % k + k - rest) % k
        }
    }))
}

/// `[a,b]_k^n -> [ra,rb]_k^(rn)`. Rejects input that does not verify.
pub fn scale(m: &Marking, a: usize, b: usize, r: usize, opts: &Options) -> Result<Marking> {
    if r == 0 {
        return Err(Error::InvalidParams("scale factor must be positive".into()));
    }
    require_certified(m, a, b, opts)?;
    scale_marking(m, r, opts.cell_cap)
}

/// The coordinates of `[k]^(rn)` form `r` blocks of `n`; a point projects to
/// the block-wise sum mod `k` in `[k]^n`. The line along coordinate `i` of block
/// `j` projects bijectively onto a line along `i`, and marks the preimage of
/// the point the input marks there. Mark counts therefore multiply by `r`.
pub(crate) fn scale_marking(m: &Marking, r: usize, cap: u128) -> Result<Marking> {
    if r == 1 {
        return Ok(m.clone());
    }
    let k = m.k();
    let n = m.n();
    let small = m.shape();
    let shape = Shape::with_cap(k, r * n, cap)?;
    let mut proj = vec![0u32; n];
    Ok(Marking::from_fn(shape, |dir, coords| {
        let i = dir % n;
        proj.iter_mut().for_each(|v| *v = 0);
        for block in coords.chunks(n) {
            for (v, &c) in proj.iter_mut().zip(block) {
                *v = (*v + c) % k;
            }
        }
        // coords[dir] is 0, so proj[i] is the sum over the other blocks
        let rest = proj[i];
        proj[i] = 0;
        let base = small.index(&proj);
        let target = m.marks()[small.slot(crate::grid::LineId { dir: i, base })] as u32;
        (target + k - rest) % k
    }))
}
