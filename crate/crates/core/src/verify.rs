//! Exhaustive certification of markings, and the hat-guessing reading of a marking.
//!
//! Verification makes one pass over the lines, bumping a 16-bit counter for the
//! marked point of each, so it costs `O(n k^(n-1))` time and `O(k^n)` memory.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::feasibility::{feasibility, FeasibilityWitness, Params};
use crate::grid::{Marking, Point, DEFAULT_CELL_CAP};

/// Most violations listed individually in a report.
pub const MAX_LISTED_VIOLATIONS: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub ok: bool,
    pub a: usize,
    pub b: usize,
    /// mark count -> number of points with that count
    pub histogram: BTreeMap<u32, u64>,
    pub count_a: u64,
    /// Points marked `b` times; always 0 when `a = b`.
    pub count_b: u64,
    pub expected: Option<FeasibilityWitness>,
    pub violation_count: u64,
    /// `(point index, observed count)`, first few by index.
    pub violations: Vec<(u64, u32)>,
}

impl VerifyReport {
    /// `key=value` lines, one per field, then one line per listed violation and
    /// the full histogram.
    pub fn render(&self) -> String {
        let opt = |v: Option<u128>| v.map_or_else(|| "none".to_string(), |v| v.to_string());
        let mut out = String::new();
        let _ = writeln!(out, "ok={}", self.ok);
        let _ = writeln!(out, "count_a={}", self.count_a);
        let _ = writeln!(out, "count_b={}", self.count_b);
        let _ = writeln!(out, "expected_s={}", opt(self.expected.map(|w| w.s)));
        let _ = writeln!(out, "expected_t={}", opt(self.expected.map(|w| w.t)));
        let _ = writeln!(out, "violations={}", self.violation_count);
        for (point, marks) in &self.violations {
            let _ = writeln!(out, "violation point={point} marks={marks}");
        }
        let hist: Vec<String> = self
            .histogram
            .iter()
            .map(|(c, pts)| format!("{c}:{pts}"))
            .collect();
        let _ = writeln!(out, "histogram={}", hist.join(","));
        out
    }

    pub fn total_points(&self) -> u64 {
        self.histogram.values().sum()
    }

    pub fn total_marks(&self) -> u64 {
        self.histogram.iter().map(|(&c, &p)| c as u64 * p).sum()
    }
}

/// Number of lines marking each point, indexed by point index.
pub fn mark_counts(m: &Marking) -> Result<Vec<u16>> {
    mark_counts_with_cap(m, DEFAULT_CELL_CAP)
}

pub fn mark_counts_with_cap(m: &Marking, cap: u128) -> Result<Vec<u16>> {
    let shape = m.shape();
    if shape.cells() > cap {
        return Err(Error::CapExceeded {
            cells: shape.cells(),
            cap,
        });
    }
    if shape.n() > u16::MAX as usize {
        return Err(Error::InvalidParams(format!(
            "n={} exceeds counter width",
            shape.n()
        )));
    }
    let mut counts = vec![0u16; shape.num_points() as usize];
    let marks = m.marks();
    let mut slot = 0usize;
    for dir in 0..shape.n() {
        let step = shape.pow(dir);
        let block = shape.pow(dir + 1);
        for high in 0..shape.num_points() / block {
            let offset = high * block;
            for low in 0..step {
                let digit = marks[slot] as u64;
                counts[(offset + low + digit * step) as usize] += 1;
                slot += 1;
            }
        }
    }
    Ok(counts)
}

/// Checks that every point is marked `p.a` or `p.b` times and that the counts
/// of such points equal the closed-form witness.
pub fn verify(m: &Marking, p: &Params) -> Result<VerifyReport> {
    verify_with_cap(m, p, DEFAULT_CELL_CAP)
}

pub fn verify_with_cap(m: &Marking, p: &Params, cap: u128) -> Result<VerifyReport> {
    if m.k() != p.k || m.n() != p.n {
        return Err(Error::InvalidParams(format!(
            "marking is over [{}]^{} but parameters are {p}",
            m.k(),
            m.n()
        )));
    }
    let counts = mark_counts_with_cap(m, cap)?;
    let expected = match feasibility(p) {
        Ok(w) => Some(w),
        Err(Error::Infeasible) => None,
        Err(e) => return Err(e),
    };
    let (a, b) = (p.a as u32, p.b as u32);
    let mut histogram = BTreeMap::new();
    let mut count_a = 0u64;
    let mut count_b = 0u64;
    let mut violation_count = 0u64;
    let mut violations = Vec::new();
    for (idx, &c) in counts.iter().enumerate() {
        let c = c as u32;
        *histogram.entry(c).or_insert(0u64) += 1;
        if c == a {
            count_a += 1;
        } else if c == b {
            count_b += 1;
        } else {
            violation_count += 1;
            if violations.len() < MAX_LISTED_VIOLATIONS {
                violations.push((idx as u64, c));
            }
        }
    }
    let ok = violation_count == 0
        && expected.is_some_and(|w| w.s == count_a as u128 && w.t == count_b as u128);
    Ok(VerifyReport {
        ok,
        a: p.a,
        b: p.b,
        histogram,
        count_a,
        count_b,
        expected,
        violation_count,
        violations,
    })
}

/// Guess of `player` when the other players' hats are `others` (in player order,
/// skipping `player`): the marked free coordinate of the corresponding line.
pub fn hat_guess(m: &Marking, player: usize, others: &[u32]) -> Result<u32> {
    let shape = m.shape();
    if player >= shape.n() {
        return Err(Error::DirOutOfRange {
            dir: player,
            n: shape.n(),
        });
    }
    if others.len() + 1 != shape.n() {
        return Err(Error::LengthMismatch {
            expected: shape.n() - 1,
            got: others.len(),
        });
    }
    let mut coords = others.to_vec();
    coords.insert(player, 0);
    let line = shape.point_line(&Point::new(coords), player)?;
    m.get(line)
}

/// Number of players guessing their own hat correctly under `assignment`.
pub fn hat_play(m: &Marking, assignment: &Point) -> Result<usize> {
    m.shape().check_point(assignment)?;
    let mut correct = 0;
    for player in 0..m.n() {
        let mut others = assignment.coords.clone();
        let own = others.remove(player);
        if hat_guess(m, player, &others)? == own {
            correct += 1;
        }
    }
    Ok(correct)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::unit_marking;
    use crate::grid::Shape;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn all_zero_marking_counts() {
        let s = Shape::new(2, 2).unwrap();
        let m = Marking::new(s.clone(), vec![0; 4]).unwrap();
        let c = mark_counts(&m).unwrap();
        assert_eq!(c[s.index(&[0, 0]) as usize], 2);
        assert_eq!(c[s.index(&[1, 0]) as usize], 1);
        assert_eq!(c[s.index(&[0, 1]) as usize], 1);
        assert_eq!(c[s.index(&[1, 1]) as usize], 0);
    }

    #[test]
    fn unit_marking_reports() {
        let m = unit_marking(2).unwrap();
        assert!(mark_counts(&m).unwrap().iter().all(|&c| c == 1));

        let m = unit_marking(3).unwrap();
        let r = verify(&m, &Params::new(3, 3, 1, 1).unwrap()).unwrap();
        assert!(r.ok);
        assert_eq!(r.histogram, BTreeMap::from([(1, 27)]));
        assert_eq!((r.count_a, r.count_b), (27, 0));
    }

    #[test]
    fn wrong_parameters_fail() {
        let m = unit_marking(3).unwrap();
        let r = verify(&m, &Params::new(3, 3, 0, 2).unwrap()).unwrap();
        assert!(!r.ok);
        assert_eq!(r.violation_count, 27);
        assert_eq!(r.violations.len(), MAX_LISTED_VIOLATIONS);
        assert!(r.render().contains("violations=27\n"));
        assert!(verify(&m, &Params::new(3, 4, 0, 2).unwrap()).is_err());
    }

    #[test]
    fn conservation_on_random_markings() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let k = rng.gen_range(2..5u32);
            let n = rng.gen_range(1..5usize);
            let s = Shape::new(k, n).unwrap();
            let marks = (0..s.num_lines())
                .map(|_| rng.gen_range(0..k) as u16)
                .collect();
            let m = Marking::new(s.clone(), marks).unwrap();
            let counts = mark_counts(&m).unwrap();
            let total: u64 = counts.iter().map(|&c| c as u64).sum();
            assert_eq!(total, s.num_lines());
            for idx in 0..s.num_points() {
                let p = Point::new(s.coords(idx));
                assert_eq!(hat_play(&m, &p).unwrap(), counts[idx as usize] as usize);
            }
            let r = verify(&m, &Params::new(k, n, 0, n).unwrap()).unwrap();
            assert_eq!(r.total_points(), s.num_points());
            assert_eq!(r.total_marks(), s.num_lines());
        }
    }

    #[test]
    fn hat_examples() {
        let m = unit_marking(3).unwrap();
        let s = m.shape().clone();
        for idx in 0..s.num_points() {
            assert_eq!(hat_play(&m, &Point::new(s.coords(idx))).unwrap(), 1);
        }
        let one = Marking::new(Shape::new(2, 1).unwrap(), vec![1]).unwrap();
        assert_eq!(hat_guess(&one, 0, &[]).unwrap(), 1);
        assert_eq!(hat_play(&one, &Point::new(vec![1])).unwrap(), 1);
        assert_eq!(hat_play(&one, &Point::new(vec![0])).unwrap(), 0);
        assert!(hat_guess(&one, 1, &[]).is_err());
        assert!(hat_play(&one, &Point::new(vec![2])).is_err());
    }

    #[test]
    fn cap_exceeded() {
        let m = unit_marking(3).unwrap();
        assert!(matches!(
            verify_with_cap(&m, &Params::new(3, 3, 1, 1).unwrap(), 10),
            Err(Error::CapExceeded { .. })
        ));
    }
}
