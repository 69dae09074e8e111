use alloc::boxed::Box;
use alloc::collections::BTreeSet;

use crate::error::Error;
use crate::Result;

/// A (possibly infinite) set of integer coordinates, kept as an exact
/// expression tree.  Membership is decidable for every integer, so the sets
/// can safely describe subsets of the coordinate line such as "all marker
/// positions left of the origin".
///
/// `HalfBand(n)` is the periodic set of residues `r mod n` with `1 <= r` and
/// `2r < n`, i.e. the "first half" of each period, excluding both the residue
/// `0` and the middle residue when `n` is even.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexSet {
    All,
    Empty,
    HalfBand(u64),
    Residues {
        modulus: u64,
        residues: BTreeSet<u64>,
    },
    Translate(i64, Box<IndexSet>),
    Negate(Box<IndexSet>),
    Complement(Box<IndexSet>),
    Union(Box<IndexSet>, Box<IndexSet>),
    SymmDiff(Box<IndexSet>, Box<IndexSet>),
}

impl IndexSet {
    pub fn all() -> Self {
        IndexSet::All
    }

    pub fn empty() -> Self {
        IndexSet::Empty
    }

    /// `H(n)`: residues `r` modulo `n` with `1 <= r` and `2r < n`.
    pub fn half_band(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("half band needs a positive modulus"));
        }
        Ok(IndexSet::HalfBand(n))
    }

    /// The periodic set `modulus * Z + residues`.
    pub fn residues(modulus: u64, residues: impl IntoIterator<Item = u64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::domain("residue set needs a positive modulus"));
        }
        let residues: BTreeSet<u64> = residues.into_iter().collect();
        if let Some(&r) = residues.iter().next_back() {
            if r >= modulus {
                return Err(Error::domain("residue at or above the modulus"));
            }
        }
        Ok(IndexSet::Residues { modulus, residues })
    }

    /// `k + self`.
    pub fn translate(self, k: i64) -> Self {
        IndexSet::Translate(k, Box::new(self))
    }

    /// `-self`.
    pub fn negate(self) -> Self {
        IndexSet::Negate(Box::new(self))
    }

    pub fn complement(self) -> Self {
        IndexSet::Complement(Box::new(self))
    }

    pub fn union(self, other: IndexSet) -> Self {
        IndexSet::Union(Box::new(self), Box::new(other))
    }

    pub fn symm_diff(self, other: IndexSet) -> Self {
        IndexSet::SymmDiff(Box::new(self), Box::new(other))
    }

    /// Exact membership test.
    pub fn contains(&self, i: i64) -> bool {
        match self {
            IndexSet::All => true,
            IndexSet::Empty => false,
            IndexSet::HalfBand(n) => {
                let r = i.rem_euclid(*n as i64) as u64;
                r >= 1 && 2 * r < *n
            }
            IndexSet::Residues { modulus, residues } => {
                residues.contains(&(i.rem_euclid(*modulus as i64) as u64))
            }
            IndexSet::Translate(k, s) => match i.checked_sub(*k) {
                Some(j) => s.contains(j),
                None => s.contains(i.wrapping_sub(*k)),
            },
            IndexSet::Negate(s) => s.contains(i.wrapping_neg()),
            IndexSet::Complement(s) => !s.contains(i),
            IndexSet::Union(a, b) => a.contains(i) || b.contains(i),
            IndexSet::SymmDiff(a, b) => a.contains(i) != b.contains(i),
        }
    }

    /// True if the set contains no point of `candidates`.
    pub fn disjoint_from<'a>(&self, candidates: impl IntoIterator<Item = &'a i64>) -> bool {
        candidates.into_iter().all(|&i| !self.contains(i))
    }
}
