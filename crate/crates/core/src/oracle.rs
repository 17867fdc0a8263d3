//! Brute-force existence search for tiny instances.
//!
//! Lines are assigned in slot order, digits in ascending order. Each point
//! keeps its current count and the number of its lines still undecided; a
//! branch is cut as soon as some point can no longer end at `a` or `b`. The
//! first line is pinned to digit 0, which loses nothing since translating every
//! point along coordinate 0 maps valid markings to valid markings.

use std::time::{Duration, Instant};

use crate::error::Result;
use crate::feasibility::Params;
use crate::grid::{Marking, Shape};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchLimits {
    pub max_nodes: u64,
    pub max_seconds: f64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_nodes: 100_000_000,
            max_seconds: 60.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Marking),
    /// The whole tree was explored without finding a marking.
    NoneExists,
    /// A budget ran out first; no claim either way.
    Exhausted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub elapsed: Duration,
}

struct Search {
    shape: Shape,
    a: u16,
    b: u16,
    counts: Vec<u16>,
    undecided: Vec<u16>,
    marks: Vec<u16>,
    nodes: u64,
    max_nodes: u64,
    deadline: Instant,
    out_of_budget: bool,
}

impl Search {
    #[inline]
    fn reachable(&self, idx: usize) -> bool {
        let c = self.counts[idx];
        let hi = c + self.undecided[idx];
        (c <= self.a && self.a <= hi) || (c <= self.b && self.b <= hi)
    }

    fn dfs(&mut self, slot: usize) -> bool {
        if slot == self.marks.len() {
            return true;
        }
        let line = self.shape.line_at(slot);
        let step = self.shape.pow(line.dir);
        let k = self.shape.k() as u64;
        let points: Vec<usize> = (0..k).map(|c| (line.base + c * step) as usize).collect();
        for &p in &points {
            self.undecided[p] -= 1;
        }
        let digits = if slot == 0 { 1 } else { k };
        let mut found = false;
        for d in 0..digits {
            self.nodes += 1;
            if self.nodes > self.max_nodes
                || (self.nodes.is_multiple_of(4096) && Instant::now() > self.deadline)
            {
                self.out_of_budget = true;
                break;
            }
            let target = points[d as usize];
            self.counts[target] += 1;
            if points.iter().all(|&p| self.reachable(p)) {
                self.marks[slot] = d as u16;
                if self.dfs(slot + 1) {
                    found = true;
                }
            }
            self.counts[target] -= 1;
            if found || self.out_of_budget {
                break;
            }
        }
        for &p in &points {
            self.undecided[p] += 1;
        }
        found
    }
}

pub fn search(p: &Params, lim: &SearchLimits) -> Result<SearchOutcome> {
    search_with_stats(p, lim).map(|(o, _)| o)
}

pub fn search_with_stats(p: &Params, lim: &SearchLimits) -> Result<(SearchOutcome, SearchStats)> {
    let shape = Shape::new(p.k, p.n)?;
    let start = Instant::now();
    let secs = if lim.max_seconds.is_finite() && lim.max_seconds > 0.0 {
        lim.max_seconds.min(1e9)
    } else {
        0.0
    };
    let mut s = Search {
        counts: vec![0; shape.num_points() as usize],
        undecided: vec![p.n as u16; shape.num_points() as usize],
        marks: vec![0; shape.num_lines() as usize],
        a: p.a as u16,
        b: p.b as u16,
        nodes: 0,
        max_nodes: lim.max_nodes,
        deadline: start + Duration::from_secs_f64(secs),
        out_of_budget: false,
        shape,
    };
    let found = s.dfs(0);
    let stats = SearchStats {
        nodes: s.nodes,
        elapsed: start.elapsed(),
    };
    let outcome = if found {
        SearchOutcome::Found(Marking::new(s.shape, s.marks)?)
    } else if s.out_of_budget {
        SearchOutcome::Exhausted
    } else {
        SearchOutcome::NoneExists
    };
    Ok((outcome, stats))
}
