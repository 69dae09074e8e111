//! Invariants attached to a flip of a shift space.
//!
//! The central one: for each `n >= 1`, the set `F(phi; n)` of `n`-periodic
//! points fixed by the flip. A shift-commuting conjugacy carrying one flip
//! to another restricts to a bijection between these sets for every `n`, so
//! the vector of counts is an invariant of the pair (space, flip), and a
//! first index where two vectors disagree certifies non-conjugacy.

use alloc::format;
use alloc::vec::Vec;

use crate::error::Error;
use crate::flip::{apply_flip_ep, apply_flip_periodic, Flip};
use crate::point::{lcm, Coord, EventuallyPeriodicPoint, PeriodicPoint};
use crate::sft::SftPresentation;
use crate::word::Word;
use crate::Result;

/// Counts `|F(phi; n)|` for `n = 1 ..= horizon`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FVector {
    counts: Vec<u64>,
}

impl FVector {
    pub fn new(counts: Vec<u64>) -> Self {
        FVector { counts }
    }

    pub fn horizon(&self) -> usize {
        self.counts.len()
    }

    /// The count at period `n` (1-based); `None` beyond the horizon.
    pub fn get(&self, n: usize) -> Option<u64> {
        if n == 0 {
            return None;
        }
        self.counts.get(n - 1).copied()
    }

    /// The count at period `n` (1-based). Panics outside `1..=horizon`.
    pub fn count(&self, n: usize) -> u64 {
        self.get(n).expect("period within horizon")
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// The same counts cut down to the first `horizon` periods.
    pub fn truncated(&self, horizon: usize) -> FVector {
        FVector {
            counts: self.counts[..horizon.min(self.counts.len())].to_vec(),
        }
    }
}

/// A first period where two count vectors disagree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NonConjugacyCertificate {
    pub n: usize,
    pub left_count: u64,
    pub right_count: u64,
}

/// Where a point stands relative to the finite-difference class of a flip:
/// the set of `x` with `phi(x) != x` but `phi(x)_i = x_i` for all but
/// finitely many `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AMembership {
    /// `phi(x) = x`: the difference set is empty, so not a member.
    Fixed,
    /// A member; the (finite, nonempty) set of differing coordinates.
    In { difference: Vec<i64> },
    /// The difference set is infinite; a differing coordinate inside one of
    /// the periodic tails witnesses this.
    InfiniteDifference { sample: i64 },
}

impl AMembership {
    pub fn is_in(&self) -> bool {
        matches!(self, AMembership::In { .. })
    }
}

/// One deferred check inside the fixed-point search.
enum Constraint {
    /// The cyclic factor of length `step + 1` starting at `start` must be an
    /// allowed block.
    Adjacency { start: usize },
    /// Coordinate `pos` must equal the flip rule applied to its reflected
    /// window.
    FlipEq { pos: usize },
}

/// All points of `space` with period dividing `n` that the flip fixes,
/// sorted by their length-`n` repeating word.
///
/// The search assigns cyclic coordinates from both ends inward
/// (`0, n-1, 1, n-2, ...`), mirroring how the flip couples coordinate `i`
/// to coordinates near `-i`; every adjacency window and every flip equation
/// fires as soon as the last coordinate it reads is placed, pruning the
/// traversal.
pub fn fixed_points(space: &SftPresentation, flip: &Flip, n: usize) -> Result<Vec<PeriodicPoint>> {
    if n == 0 {
        return Err(Error::domain("period must be at least 1"));
    }
    let m = space.step();
    let r = flip.radius();
    let k = flip.shift();
    let ni = n as i64;

    // Fill order: two pointers meeting in the middle.
    let mut order = Vec::with_capacity(n);
    let (mut lo, mut hi) = (0usize, n - 1);
    while lo <= hi {
        order.push(lo);
        if lo != hi {
            order.push(hi);
        }
        if hi == 0 {
            break;
        }
        lo += 1;
        hi -= 1;
    }
    let mut step_of = alloc::vec![0usize; n];
    for (t, &p) in order.iter().enumerate() {
        step_of[p] = t;
    }

    // Group constraints by the search step at which they become checkable;
    // adjacency checks are queued before flip equations at equal steps.
    let mut per_step: Vec<Vec<Constraint>> = (0..n).map(|_| Vec::new()).collect();
    for start in 0..n {
        let trigger = (0..=m)
            .map(|t| step_of[(start + t) % n])
            .max()
            .unwrap_or(0);
        per_step[trigger].push(Constraint::Adjacency { start });
    }
    for pos in 0..n {
        let center = -(pos as i64) - k;
        let trigger = (-(r as i64)..=r as i64)
            .map(|t| step_of[(center + t).rem_euclid(ni) as usize])
            .chain(core::iter::once(step_of[pos]))
            .max()
            .unwrap();
        per_step[trigger].push(Constraint::FlipEq { pos });
    }

    struct Search<'a> {
        space: &'a SftPresentation,
        flip: &'a Flip,
        n: usize,
        m: usize,
        r: i64,
        k: i64,
        order: &'a [usize],
        per_step: &'a [Vec<Constraint>],
        buf: Vec<crate::alphabet::Symbol>,
        scratch: Vec<crate::alphabet::Symbol>,
        out: Vec<PeriodicPoint>,
    }

    impl Search<'_> {
        fn satisfied(&mut self, c: &Constraint) -> Result<bool> {
            match *c {
                Constraint::Adjacency { start } => {
                    self.scratch.clear();
                    for t in 0..=self.m {
                        self.scratch.push(self.buf[(start + t) % self.n]);
                    }
                    Ok(self.space.allows(&self.scratch))
                }
                Constraint::FlipEq { pos } => {
                    let ni = self.n as i64;
                    let center = -(pos as i64) - self.k;
                    self.scratch.clear();
                    for t in -self.r..=self.r {
                        self.scratch
                            .push(self.buf[(center + t).rem_euclid(ni) as usize]);
                    }
                    match self.flip.apply_rule(&self.scratch) {
                        Some(s) => Ok(s == self.buf[pos]),
                        None => Err(Error::domain(
                            "flip rule is undefined on a window of the point",
                        )),
                    }
                }
            }
        }

        fn dfs(&mut self, t: usize) -> Result<()> {
            if t == self.n {
                self.out
                    .push(PeriodicPoint::new(Word::new(self.buf.clone()))?);
                return Ok(());
            }
            let pos = self.order[t];
            let checks = self.per_step; // shared slice, independent of &mut self
            for s in self.space.alphabet().symbols() {
                self.buf[pos] = s;
                let mut ok = true;
                for c in &checks[t] {
                    if !self.satisfied(c)? {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    self.dfs(t + 1)?;
                }
            }
            Ok(())
        }
    }

    let mut search = Search {
        space,
        flip,
        n,
        m,
        r: r as i64,
        k,
        order: &order,
        per_step: &per_step,
        buf: alloc::vec![crate::alphabet::Symbol(0); n],
        scratch: Vec::with_capacity((2 * r + 1).max(m + 1)),
        out: Vec::new(),
    };
    search.dfs(0)?;
    let mut out = search.out;
    out.sort();
    Ok(out)
}

/// `|F(phi; n)|`.
pub fn fixed_count(space: &SftPresentation, flip: &Flip, n: usize) -> Result<u64> {
    Ok(fixed_points(space, flip, n)?.len() as u64)
}

/// The count vector for `n = 1 ..= horizon`.
pub fn fvector(space: &SftPresentation, flip: &Flip, horizon: usize) -> Result<FVector> {
    let mut counts = Vec::with_capacity(horizon);
    for n in 1..=horizon {
        counts.push(fixed_count(space, flip, n)?);
    }
    Ok(FVector::new(counts))
}

/// First period (up to the common horizon) where the two count vectors
/// disagree, if any. The horizons must match exactly, so that absence of a
/// certificate always means "agreement everywhere both were computed".
pub fn certify_nonconjugate(
    left: &FVector,
    right: &FVector,
) -> Result<Option<NonConjugacyCertificate>> {
    if left.horizon() != right.horizon() {
        return Err(Error::domain(format!(
            "count vectors have different horizons: {} vs {}",
            left.horizon(),
            right.horizon()
        )));
    }
    for n in 1..=left.horizon() {
        let (a, b) = (left.count(n), right.count(n));
        if a != b {
            return Ok(Some(NonConjugacyCertificate {
                n,
                left_count: a,
                right_count: b,
            }));
        }
    }
    Ok(None)
}

/// Classify an eventually periodic point against the finite-difference
/// class of a flip.
///
/// Both the point and its image are eventually periodic, so outside the
/// interval spanned by the two centers each side is periodic with period
/// dividing the corresponding tail lcm; one clean window of that length per
/// side shows the tails agree everywhere, making the difference set finite
/// and confined to the scanned interval. (On a subshift of finite type
/// every point is eventually periodic in both directions, so this
/// classification covers every point the crate can represent.)
pub fn a_membership(
    space: &SftPresentation,
    flip: &Flip,
    x: &EventuallyPeriodicPoint,
) -> Result<AMembership> {
    if !space.contains_ep(x) {
        return Err(Error::precondition("point does not lie in the space"));
    }
    let y = apply_flip_ep(flip, x)?;
    let s = x.center_start().min(y.center_start());
    let t = x.center_end().max(y.center_end());
    let left_span = lcm(x.left().len(), y.left().len()) as i64;
    let right_span = lcm(x.right().len(), y.right().len()) as i64;
    for i in (s - left_span)..s {
        if x.at(i) != y.at(i) {
            return Ok(AMembership::InfiniteDifference { sample: i });
        }
    }
    for i in (t + 1)..=(t + right_span) {
        if x.at(i) != y.at(i) {
            return Ok(AMembership::InfiniteDifference { sample: i });
        }
    }
    let difference: Vec<i64> = (s..=t).filter(|&i| x.at(i) != y.at(i)).collect();
    if difference.is_empty() {
        Ok(AMembership::Fixed)
    } else {
        Ok(AMembership::In { difference })
    }
}

/// Fixed points of the flip among all points of period dividing `n`,
/// obtained by filtering the full periodic-point list. Quadratically slower
/// than [`fixed_points`] but with no shared machinery; the two must agree.
pub fn fixed_points_by_filter(
    space: &SftPresentation,
    flip: &Flip,
    n: usize,
) -> Result<Vec<PeriodicPoint>> {
    let mut out = Vec::new();
    for p in space.periodic_points(n) {
        if apply_flip_periodic(flip, &p)? == p {
            out.push(p);
        }
    }
    out.sort();
    Ok(out)
}
