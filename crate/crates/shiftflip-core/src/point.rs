use crate::alphabet::Symbol;
use crate::error::Error;
use crate::word::Word;
use crate::Result;

/// Coordinate access to a bi-infinite sequence.
///
/// Implementors are total functions `Z -> Symbol`; lazy views (shifted,
/// flipped or locally rewritten sequences) implement this without
/// materializing anything.
pub trait Coord {
    fn at(&self, i: i64) -> Symbol;
}

/// A periodic bi-infinite point `x` with `x_i = w_{i mod n}` for a fixed
/// nonempty word `w` of length `n`.
///
/// The phase matters: two rotations of the same word are different points.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PeriodicPoint {
    word: Word,
}

impl PeriodicPoint {
    pub fn new(word: Word) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::domain("periodic point needs a nonempty word"));
        }
        Ok(PeriodicPoint { word })
    }

    /// The repeating word; its length is the (not necessarily least) period.
    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn period(&self) -> usize {
        self.word.len()
    }

    /// The point shifted left by `k`: `y_i = x_{i+k}`.
    pub fn shifted(&self, k: i64) -> PeriodicPoint {
        let n = self.period() as i64;
        let offset = k.rem_euclid(n) as usize;
        let mut v = alloc::vec::Vec::with_capacity(self.period());
        for i in 0..self.period() {
            v.push(self.word.symbols()[(i + offset) % self.period()]);
        }
        PeriodicPoint { word: Word::new(v) }
    }

    /// Whether two periodic points agree at every coordinate, regardless of
    /// how their repeating words are presented.
    pub fn coordinate_eq(&self, other: &PeriodicPoint) -> bool {
        let l = lcm(self.period(), other.period()) as i64;
        (0..l).all(|i| self.at(i) == other.at(i))
    }

    /// Least period of the point (a divisor of `period()`).
    pub fn least_period(&self) -> usize {
        let n = self.period();
        let s = self.word.symbols();
        'outer: for d in 1..=n {
            if n % d != 0 {
                continue;
            }
            for i in d..n {
                if s[i] != s[i - d] {
                    continue 'outer;
                }
            }
            return d;
        }
        n
    }
}

impl Coord for PeriodicPoint {
    fn at(&self, i: i64) -> Symbol {
        let n = self.period() as i64;
        self.word.symbols()[i.rem_euclid(n) as usize]
    }
}

/// An eventually periodic bi-infinite point: a left-infinite tail repeating
/// `left`, then a finite `center`, then a right-infinite tail repeating
/// `right`.
///
/// Layout, with `cs` the first center coordinate:
///
/// ```text
///   ... left left | center | right right ...
///                 cs       cs + |center|
/// ```
///
/// A copy of `left` ends exactly at `cs - 1`, and a copy of `right` starts
/// exactly at `cs + |center|`.  The center may be empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventuallyPeriodicPoint {
    left: Word,
    center: Word,
    right: Word,
    center_start: i64,
}

impl EventuallyPeriodicPoint {
    pub fn new(left: Word, center: Word, right: Word, center_start: i64) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::domain(
                "eventually periodic point needs nonempty tail words",
            ));
        }
        Ok(EventuallyPeriodicPoint {
            left,
            center,
            right,
            center_start,
        })
    }

    /// View a periodic point as eventually periodic (empty center at 0).
    pub fn from_periodic(p: &PeriodicPoint) -> Self {
        EventuallyPeriodicPoint {
            left: p.word().clone(),
            center: Word::empty(),
            right: p.word().clone(),
            center_start: 0,
        }
    }

    pub fn left(&self) -> &Word {
        &self.left
    }

    pub fn center(&self) -> &Word {
        &self.center
    }

    pub fn right(&self) -> &Word {
        &self.right
    }

    /// First coordinate of the center (also the first tail-free coordinate
    /// when the center is nonempty).
    pub fn center_start(&self) -> i64 {
        self.center_start
    }

    /// Last coordinate of the center; `center_start - 1` when the center is
    /// empty.
    pub fn center_end(&self) -> i64 {
        self.center_start + self.center.len() as i64 - 1
    }

    /// The point shifted left by `k`: `y_i = x_{i+k}`.
    pub fn shifted(&self, k: i64) -> EventuallyPeriodicPoint {
        EventuallyPeriodicPoint {
            left: self.left.clone(),
            center: self.center.clone(),
            right: self.right.clone(),
            center_start: self.center_start - k,
        }
    }

    /// The finite window `x_{[lo, hi]}` (inclusive).
    pub fn window(&self, lo: i64, hi: i64) -> Word {
        let mut v = alloc::vec::Vec::new();
        let mut i = lo;
        while i <= hi {
            v.push(self.at(i));
            i += 1;
        }
        Word::new(v)
    }

    /// Exact equality as bi-infinite sequences.
    ///
    /// It suffices to compare a finite window: the points are left-periodic
    /// left of `S = min` of the center starts and right-periodic right of
    /// `T = max` of the center ends, so agreement on one common period of each
    /// tail, plus the stretch between, pins down everything.
    pub fn coordinate_eq(&self, other: &EventuallyPeriodicPoint) -> bool {
        let s = self.center_start.min(other.center_start);
        let t = self.center_end().max(other.center_end());
        let left_l = lcm(self.left.len(), other.left.len()) as i64;
        let right_l = lcm(self.right.len(), other.right.len()) as i64;
        let (lo, hi) = (s - left_l, t + right_l);
        (lo..=hi).all(|i| self.at(i) == other.at(i))
    }
}

impl Coord for EventuallyPeriodicPoint {
    fn at(&self, i: i64) -> Symbol {
        if i < self.center_start {
            let l = self.left.len() as i64;
            self.left.symbols()[(i - self.center_start).rem_euclid(l) as usize]
        } else if i <= self.center_end() {
            self.center.symbols()[(i - self.center_start) as usize]
        } else {
            let r = self.right.len() as i64;
            let off = i - self.center_start - self.center.len() as i64;
            self.right.symbols()[off.rem_euclid(r) as usize]
        }
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}
