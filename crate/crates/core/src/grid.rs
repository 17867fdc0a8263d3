//! Points, coordinate lines and markings of `[k]^n`, plus the abelian group
//! structure used for the parity function.
//!
//! Colors are the residues `0..k`. A point is stored as its little-endian base-`k`
//! index (coordinate 0 least significant). A line is identified by its free
//! direction and its base point, the point of the line whose free coordinate is
//! zero. Markings are dense: one free-coordinate digit per line, direction-major,
//! then by ascending base index.

use crate::error::{Error, Result};

/// Default bound on `n * k^n`, the number of point-direction cells.
pub const DEFAULT_CELL_CAP: u128 = 100_000_000;

/// Largest `k` for which group addition is served from a lookup table.
const TABLE_LIMIT: u32 = 256;

pub fn is_prime(k: u32) -> bool {
    if k < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= k as u64 {
        if k.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as `(prime, exponent)` pairs with increasing primes.
pub fn factorize(mut k: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= k as u64 {
        if k.is_multiple_of(d) {
            let mut e = 0;
            while k.is_multiple_of(d) {
                k /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if k > 1 {
        out.push((k, 1));
    }
    out
}

/// `Some((p, m))` when `k = p^m` for a prime `p`.
pub fn prime_power(k: u32) -> Option<(u32, u32)> {
    match factorize(k).as_slice() {
        [(p, m)] => Some((*p, *m)),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// `Z_k` with a single digit.
    Cyclic,
    /// `Z_{p_1}^{α_1} × … × Z_{p_l}^{α_l}`, one digit per prime factor occurrence.
    Product,
}

/// An abelian group of order `k` laid over the colors `0..k`. Order 1 is the
/// trivial group with no digits.
///
/// Elements are handled in encoded form. For [`GroupKind::Product`] the digits
/// are grouped by prime in increasing order, each block most-significant digit
/// first, and the block of the largest prime is least significant overall.
#[derive(Clone, Debug)]
pub struct GroupSpec {
    k: u32,
    kind: GroupKind,
    factors: Vec<(u32, u32)>,
    radices: Vec<u32>,
    add_table: Option<Vec<u32>>,
    neg_table: Vec<u32>,
}

impl PartialEq for GroupSpec {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.kind == other.kind
    }
}

impl Eq for GroupSpec {}

impl GroupSpec {
    pub fn new(k: u32, kind: GroupKind) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParams("group order must be positive".into()));
        }
        let factors = factorize(k);
        let radices = match kind {
            _ if k == 1 => Vec::new(),
            GroupKind::Cyclic => vec![k],
            GroupKind::Product => factors
                .iter()
                .flat_map(|&(p, e)| std::iter::repeat_n(p, e as usize))
                .collect(),
        };
        let mut spec = GroupSpec {
            k,
            kind,
            factors,
            radices,
            add_table: None,
            neg_table: Vec::new(),
        };
        spec.neg_table = (0..k).map(|e| spec.neg_slow(e)).collect();
        if k <= TABLE_LIMIT {
            let mut table = Vec::with_capacity((k * k) as usize);
            for x in 0..k {
                for y in 0..k {
                    table.push(spec.add_slow(x, y));
                }
            }
            spec.add_table = Some(table);
        }
        Ok(spec)
    }

    pub fn cyclic(k: u32) -> Result<Self> {
        Self::new(k, GroupKind::Cyclic)
    }

    pub fn product(k: u32) -> Result<Self> {
        Self::new(k, GroupKind::Product)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.factors
    }

    /// Radix of every digit, most significant first.
    pub fn radices(&self) -> &[u32] {
        &self.radices
    }

    pub fn digit_count(&self) -> usize {
        self.radices.len()
    }

    pub fn decode(&self, mut e: u32) -> Vec<u32> {
        debug_assert!(e < self.k);
        let mut digits = vec![0; self.radices.len()];
        for (d, &radix) in digits.iter_mut().zip(&self.radices).rev() {
            *d = e % radix;
            e /= radix;
        }
        digits
    }

    pub fn encode(&self, digits: &[u32]) -> Result<u32> {
        if digits.len() != self.radices.len() {
            return Err(Error::LengthMismatch {
                expected: self.radices.len(),
                got: digits.len(),
            });
        }
        let mut e = 0u32;
        for (&d, &radix) in digits.iter().zip(&self.radices) {
            if d >= radix {
                return Err(Error::DigitOutOfRange { digit: d, k: radix });
            }
            e = e * radix + d;
        }
        Ok(e)
    }

    fn add_slow(&self, x: u32, y: u32) -> u32 {
        let mut out = 0u32;
        let mut scale = 1u32;
        let (mut x, mut y) = (x, y);
        for &radix in self.radices.iter().rev() {
            out += ((x % radix + y % radix) % radix) * scale;
            x /= radix;
            y /= radix;
            scale *= radix;
        }
        out
    }

    fn neg_slow(&self, x: u32) -> u32 {
        let mut out = 0u32;
        let mut scale = 1u32;
        let mut x = x;
        for &radix in self.radices.iter().rev() {
            out += ((radix - x % radix) % radix) * scale;
            x /= radix;
            scale *= radix;
        }
        out
    }

    #[inline]
    pub fn add(&self, x: u32, y: u32) -> u32 {
        match &self.add_table {
            Some(t) => t[(x * self.k + y) as usize],
            None => self.add_slow(x, y),
        }
    }

    #[inline]
    pub fn neg(&self, x: u32) -> u32 {
        self.neg_table[x as usize]
    }

    #[inline]
    pub fn sub(&self, x: u32, y: u32) -> u32 {
        self.add(x, self.neg(y))
    }

    pub fn sum<I: IntoIterator<Item = u32>>(&self, items: I) -> u32 {
        items.into_iter().fold(0, |acc, v| self.add(acc, v))
    }

    /// The element whose every digit is 1.
    pub fn all_ones(&self) -> u32 {
        let ones = vec![1; self.radices.len()];
        self.encode(&ones).expect("all-ones digits are in range")
    }
}

/// Dimensions of `[k]^n` with cached powers of `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shape {
    k: u32,
    n: usize,
    pow: Vec<u64>,
}

impl Shape {
    pub fn new(k: u32, n: usize) -> Result<Self> {
        if k < 2 || n < 1 {
            return Err(Error::InvalidParams(format!(
                "need k >= 2 and n >= 1, got k={k}, n={n}"
            )));
        }
        if k > u16::MAX as u32 {
            return Err(Error::InvalidParams(format!("k={k} exceeds {}", u16::MAX)));
        }
        let mut pow = Vec::with_capacity(n + 1);
        let mut acc = 1u64;
        pow.push(acc);
        for _ in 0..n {
            acc = acc.checked_mul(k as u64).ok_or(Error::Overflow("k^n"))?;
            pow.push(acc);
        }
        Ok(Shape { k, n, pow })
    }

    /// Like [`Shape::new`] but rejects grids with more than `cap` point-direction cells.
    pub fn with_cap(k: u32, n: usize, cap: u128) -> Result<Self> {
        let cells = cell_count(k, n).ok_or(Error::Overflow("n * k^n"))?;
        if cells > cap {
            return Err(Error::CapExceeded { cells, cap });
        }
        Self::new(k, n)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn pow(&self, e: usize) -> u64 {
        self.pow[e]
    }

    pub fn num_points(&self) -> u64 {
        self.pow[self.n]
    }

    pub fn lines_per_dir(&self) -> u64 {
        self.pow[self.n - 1]
    }

    pub fn num_lines(&self) -> u64 {
        self.n as u64 * self.lines_per_dir()
    }

    pub fn cells(&self) -> u128 {
        self.n as u128 * self.num_points() as u128
    }

    pub fn coords(&self, index: u64) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.n);
        let mut rest = index;
        for _ in 0..self.n {
            out.push((rest % self.k as u64) as u32);
            rest /= self.k as u64;
        }
        out
    }

    pub fn index(&self, coords: &[u32]) -> u64 {
        coords
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.k as u64 + c as u64)
    }

    #[inline]
    pub fn digit(&self, index: u64, dir: usize) -> u32 {
        ((index / self.pow[dir]) % self.k as u64) as u32
    }

    /// Dense slot of a line: direction-major, then ascending base index.
    #[inline]
    pub fn slot(&self, line: LineId) -> usize {
        let low = line.base % self.pow[line.dir];
        let high = line.base / self.pow[line.dir + 1];
        (line.dir as u64 * self.lines_per_dir() + high * self.pow[line.dir] + low) as usize
    }

    #[inline]
    pub fn line_at(&self, slot: usize) -> LineId {
        let per = self.lines_per_dir();
        let dir = (slot as u64 / per) as usize;
        let rank = slot as u64 % per;
        let low = rank % self.pow[dir];
        let high = rank / self.pow[dir];
        LineId {
            dir,
            base: high * self.pow[dir + 1] + low,
        }
    }

    pub fn check_point(&self, p: &Point) -> Result<()> {
        if p.coords.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: p.coords.len(),
            });
        }
        if let Some(&c) = p.coords.iter().find(|&&c| c >= self.k) {
            return Err(Error::DigitOutOfRange {
                digit: c,
                k: self.k,
            });
        }
        Ok(())
    }

    /// Line through `p` along `dir`.
    pub fn point_line(&self, p: &Point, dir: usize) -> Result<LineId> {
        self.check_point(p)?;
        if dir >= self.n {
            return Err(Error::DirOutOfRange { dir, n: self.n });
        }
        let index = self.index(&p.coords);
        Ok(LineId {
            dir,
            base: index - self.digit(index, dir) as u64 * self.pow[dir],
        })
    }

    pub fn line_points(&self, line: LineId) -> Result<Vec<Point>> {
        self.check_line(line)?;
        Ok((0..self.k)
            .map(|c| Point {
                coords: self.coords(line.base + c as u64 * self.pow[line.dir]),
            })
            .collect())
    }

    pub fn check_line(&self, line: LineId) -> Result<()> {
        if line.dir >= self.n {
            return Err(Error::DirOutOfRange {
                dir: line.dir,
                n: self.n,
            });
        }
        if line.base >= self.num_points() || self.digit(line.base, line.dir) != 0 {
            return Err(Error::InvalidParams(format!(
                "base {} is not a canonical base point for direction {}",
                line.base, line.dir
            )));
        }
        Ok(())
    }
}

/// Number of point-direction cells `n * k^n`, `None` on overflow.
pub fn cell_count(k: u32, n: usize) -> Option<u128> {
    let mut acc = n as u128;
    for _ in 0..n {
        acc = acc.checked_mul(k as u128)?;
    }
    Some(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub coords: Vec<u32>,
}

impl Point {
    pub fn new(coords: Vec<u32>) -> Self {
        Point { coords }
    }
}

/// A coordinate line: free direction plus the base point whose free coordinate is 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineId {
    pub dir: usize,
    pub base: u64,
}

/// One marked point per line of `[k]^n`, stored as the free-coordinate digit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Marking {
    shape: Shape,
    marks: Vec<u16>,
}

impl Marking {
    pub fn new(shape: Shape, marks: Vec<u16>) -> Result<Self> {
        if marks.len() as u64 != shape.num_lines() {
            return Err(Error::LengthMismatch {
                expected: shape.num_lines() as usize,
                got: marks.len(),
            });
        }
        if let Some(&d) = marks.iter().find(|&&d| d as u32 >= shape.k) {
            return Err(Error::DigitOutOfRange {
                digit: d as u32,
                k: shape.k,
            });
        }
        Ok(Marking { shape, marks })
    }

    /// Builds a marking by asking `f(dir, base_coords)` for the free-coordinate
    /// digit of every line, in dense slot order.
    pub fn from_fn<F>(shape: Shape, mut f: F) -> Marking
    where
        F: FnMut(usize, &[u32]) -> u32,
    {
        let n = shape.n;
        let k = shape.k;
        let mut marks = Vec::with_capacity(shape.num_lines() as usize);
        let mut coords = vec![0u32; n];
        for dir in 0..n {
            coords.iter_mut().for_each(|c| *c = 0);
            for _ in 0..shape.lines_per_dir() {
                let digit = f(dir, &coords);
                debug_assert!(digit < k);
                marks.push(digit as u16);
                // odometer over every coordinate except `dir`
                for (pos, c) in coords.iter_mut().enumerate() {
                    if pos == dir {
                        continue;
                    }
                    *c += 1;
                    if *c < k {
                        break;
                    }
                    *c = 0;
                }
            }
        }
        Marking { shape, marks }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn k(&self) -> u32 {
        self.shape.k
    }

    pub fn n(&self) -> usize {
        self.shape.n
    }

    pub fn marks(&self) -> &[u16] {
        &self.marks
    }

    pub fn marks_mut(&mut self) -> &mut [u16] {
        &mut self.marks
    }

    pub fn get(&self, line: LineId) -> Result<u32> {
        self.shape.check_line(line)?;
        Ok(self.marks[self.shape.slot(line)] as u32)
    }

    /// Marked point on `line`: the base with its free coordinate replaced by the stored digit.
    pub fn marked_point(&self, line: LineId) -> Result<Point> {
        let digit = self.get(line)?;
        Ok(Point {
            coords: self
                .shape
                .coords(line.base + digit as u64 * self.shape.pow[line.dir]),
        })
    }

    /// Index of the marked point of the line in `slot`.
    #[inline]
    pub fn marked_index(&self, slot: usize) -> u64 {
        let line = self.shape.line_at(slot);
        line.base + self.marks[slot] as u64 * self.shape.pow[line.dir]
    }
}

/// Group sum of the coordinates of `p`.
pub fn parity(p: &Point, g: &GroupSpec) -> Result<u32> {
    if let Some(&c) = p.coords.iter().find(|&&c| c >= g.k()) {
        return Err(Error::DigitOutOfRange { digit: c, k: g.k() });
    }
    Ok(g.sum(p.coords.iter().copied()))
}

/// The free-coordinate digit that gives a line with the other coordinates
/// summing to `rest` the parity `target`.
#[inline]
pub fn solve_digit(rest: u32, target: u32, g: &GroupSpec) -> u32 {
    g.sub(target, rest)
}

/// The unique point of `line` whose parity is `target`.
pub fn solve_parity(shape: &Shape, line: LineId, target: u32, g: &GroupSpec) -> Result<Point> {
    if g.k() != shape.k() {
        return Err(Error::MismatchedK {
            expected: shape.k(),
            got: g.k(),
        });
    }
    shape.check_line(line)?;
    if target >= g.k() {
        return Err(Error::DigitOutOfRange {
            digit: target,
            k: g.k(),
        });
    }
    let mut coords = shape.coords(line.base);
    let rest = g.sum(coords.iter().copied());
    coords[line.dir] = solve_digit(rest, target, g);
    Ok(Point { coords })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorization() {
        assert_eq!(factorize(12), vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(7), vec![(7, 1)]);
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(6), None);
        assert!(is_prime(2) && is_prime(13) && !is_prime(1) && !is_prime(9));
    }

    #[test]
    fn parity_examples() {
        let g3 = GroupSpec::cyclic(3).unwrap();
        assert_eq!(parity(&Point::new(vec![0, 0, 0]), &g3).unwrap(), 0);
        assert_eq!(parity(&Point::new(vec![1, 2, 2]), &g3).unwrap(), 2);

        let g6 = GroupSpec::product(6).unwrap();
        assert_eq!(g6.decode(5), vec![1, 2]);
        assert_eq!(parity(&Point::new(vec![5, 5]), &g6).unwrap(), 1);
        assert!(parity(&Point::new(vec![6]), &g6).is_err());
    }

    #[test]
    fn solve_parity_examples() {
        let g3 = GroupSpec::cyclic(3).unwrap();
        let s3 = Shape::new(3, 3).unwrap();
        let l = s3.point_line(&Point::new(vec![2, 0, 0]), 0).unwrap();
        assert_eq!(solve_parity(&s3, l, 0, &g3).unwrap().coords, vec![0, 0, 0]);
        let l = s3.point_line(&Point::new(vec![1, 1, 2]), 0).unwrap();
        assert_eq!(solve_parity(&s3, l, 0, &g3).unwrap().coords, vec![0, 1, 2]);

        let g2 = GroupSpec::cyclic(2).unwrap();
        let s2 = Shape::new(2, 3).unwrap();
        let l = s2.point_line(&Point::new(vec![1, 0, 1]), 1).unwrap();
        assert_eq!(solve_parity(&s2, l, 1, &g2).unwrap().coords, vec![1, 1, 1]);

        let g4 = GroupSpec::cyclic(4).unwrap();
        assert!(matches!(
            solve_parity(&s3, l, 0, &g4),
            Err(Error::MismatchedK { .. })
        ));
    }

    #[test]
    fn line_plumbing_examples() {
        let s = Shape::new(3, 2).unwrap();
        let l = s.point_line(&Point::new(vec![2, 1]), 0).unwrap();
        assert_eq!(
            l,
            LineId {
                dir: 0,
                base: s.index(&[0, 1])
            }
        );
        let pts: Vec<_> = s
            .line_points(l)
            .unwrap()
            .into_iter()
            .map(|p| p.coords)
            .collect();
        assert_eq!(pts, vec![vec![0, 1], vec![1, 1], vec![2, 1]]);
        assert!(s.point_line(&Point::new(vec![2, 1]), 2).is_err());

        let s = Shape::new(3, 3).unwrap();
        let mut m = Marking::new(s.clone(), vec![0; s.num_lines() as usize]).unwrap();
        let line = LineId {
            dir: 1,
            base: s.index(&[1, 0, 0]),
        };
        let slot = s.slot(line);
        m.marks_mut()[slot] = 2;
        assert_eq!(m.marked_point(line).unwrap().coords, vec![1, 2, 0]);
        assert!(m.get(LineId { dir: 3, base: 0 }).is_err());
    }

    #[test]
    fn encode_decode_bijective() {
        for k in [2, 3, 4, 6, 12] {
            for kind in [GroupKind::Cyclic, GroupKind::Product] {
                let g = GroupSpec::new(k, kind).unwrap();
                for e in 0..k {
                    assert_eq!(g.encode(&g.decode(e)).unwrap(), e);
                }
                // every digit vector decodes back to itself
                let mut vectors: Vec<Vec<u32>> = vec![Vec::new()];
                for &radix in g.radices() {
                    vectors = vectors
                        .into_iter()
                        .flat_map(|v| {
                            (0..radix).map(move |d| {
                                let mut w = v.clone();
                                w.push(d);
                                w
                            })
                        })
                        .collect();
                }
                let mut seen = 0;
                for digits in vectors {
                    let e = g.encode(&digits).unwrap();
                    assert_eq!(g.decode(e), digits);
                    seen += 1;
                }
                assert_eq!(seen, k);
            }
        }
    }

    #[test]
    fn parity_is_bijective_on_every_line() {
        for k in 2..=12u32 {
            for n in 1..=4usize {
                if k.pow(n as u32) > 20_000 {
                    continue;
                }
                let s = Shape::new(k, n).unwrap();
                for kind in [GroupKind::Cyclic, GroupKind::Product] {
                    let g = GroupSpec::new(k, kind).unwrap();
                    for slot in 0..s.num_lines() as usize {
                        let line = s.line_at(slot);
                        let mut seen = vec![false; k as usize];
                        for p in s.line_points(line).unwrap() {
                            let v = parity(&p, &g).unwrap();
                            assert!(!seen[v as usize]);
                            seen[v as usize] = true;
                            assert_eq!(solve_parity(&s, line, v, &g).unwrap(), p);
                            assert_eq!(s.point_line(&p, line.dir).unwrap(), line);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn slots_are_dense_and_ordered() {
        let s = Shape::new(3, 3).unwrap();
        let m = Marking::from_fn(s.clone(), |_, _| 0);
        let mut slot = 0;
        for dir in 0..3 {
            let mut bases: Vec<u64> = (0..s.num_points())
                .filter(|&i| s.digit(i, dir) == 0)
                .collect();
            bases.sort();
            for base in bases {
                let l = LineId { dir, base };
                assert_eq!(s.slot(l), slot);
                assert_eq!(s.line_at(slot), l);
                slot += 1;
            }
        }
        assert_eq!(m.marks().len(), slot);
    }

    #[test]
    fn from_fn_visits_base_points_in_slot_order() {
        let s = Shape::new(3, 3).unwrap();
        let mut seen = Vec::new();
        Marking::from_fn(s.clone(), |dir, coords| {
            seen.push(LineId {
                dir,
                base: s.index(coords),
            });
            0
        });
        let expected: Vec<_> = (0..s.num_lines() as usize).map(|i| s.line_at(i)).collect();
        assert_eq!(seen, expected);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(Shape::with_cap(10, 8, DEFAULT_CELL_CAP).is_err());
        assert!(Shape::with_cap(10, 7, DEFAULT_CELL_CAP).is_ok());
    }
}
