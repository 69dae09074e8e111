//! A coded system over `{0, 1, 2}` built from stability-filtered blocks.
//!
//! A block is *stable* when two conditions hold:
//!
//! 1. the adjacent pairs `12` and `21` do not appear, and
//! 2. embedding the block in zeros, every maximal nonzero run (which
//!    condition 1 forces to be uniform, say `n` copies of `a` flanked by
//!    zeros at positions `i` and `j`) satisfies: `a = 1` exactly when
//!    membership of `n` in the doubling-interval set agrees with the
//!    context pair `(x[i-n], x[j+n])` being zero on both sides or nonzero
//!    on both sides.
//!
//! The code consists of `0` together with every stable block padded by
//! zero runs one longer than itself; the closure of that code is a
//! synchronized system that is far from being of finite type. This module
//! provides the membership predicates, enumeration, closure reports
//! (reversal, concatenation), a rigidity scan over symbol involutions, and
//! sparse points determined by their zero sets — desk-scale evidence that
//! the system's only flips are shift compositions of plain reversal.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Error;
use crate::Result;

/// Symbols of the system are `0`, `1`, `2` as plain bytes.
pub const SYMBOL_COUNT: u8 = 3;

fn check_symbols(w: &[u8]) -> Result<()> {
    match w.iter().find(|&&s| s >= SYMBOL_COUNT) {
        Some(&s) => Err(Error::domain(format!("symbol {s} is out of range"))),
        None => Ok(()),
    }
}

/// Parse a block from its text form, one digit per symbol.
pub fn parse_symbols(text: &str) -> Result<Vec<u8>> {
    text.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            '2' => Ok(2),
            other => Err(Error::domain(format!("invalid symbol {other:?}"))),
        })
        .collect()
}

/// Render a block as digits.
pub fn render_symbols(w: &[u8]) -> String {
    w.iter().map(|s| char::from(b'0' + s)).collect()
}

// ---------------------------------------------------------------------------
// The doubling-interval set and the context pair set
// ---------------------------------------------------------------------------

/// Whether `n` lies in some interval `[4^k, 2·4^k]` with `k ≥ 1`.
///
/// Uses the binary logarithm: the intervals are `[2^(2k), 2^(2k+1)]`, so
/// membership means the exponent is even and at least 2, or `n` is exactly
/// a power of two with odd exponent at least 3.
pub fn in_doubling_intervals(n: u64) -> Result<bool> {
    if n == 0 {
        return Err(Error::domain("interval membership needs a positive integer"));
    }
    let e = n.ilog2();
    Ok((e >= 2 && e % 2 == 0) || (e >= 3 && e % 2 == 1 && n == 1u64 << e))
}

/// Independent re-implementation of [`in_doubling_intervals`] that walks
/// the intervals directly.
pub fn in_doubling_intervals_alt(n: u64) -> Result<bool> {
    if n == 0 {
        return Err(Error::domain("interval membership needs a positive integer"));
    }
    let mut lo: u64 = 4;
    while lo <= n {
        if n <= 2 * lo {
            return Ok(true);
        }
        if lo > u64::MAX / 4 {
            break;
        }
        lo *= 4;
    }
    Ok(false)
}

/// Whether a context pair is allowed: both symbols zero, or both nonzero.
pub fn context_pair_allowed(left: u8, right: u8) -> bool {
    (left == 0) == (right == 0)
}

// ---------------------------------------------------------------------------
// Stability
// ---------------------------------------------------------------------------

/// Outcome of the stability check, distinguishing which condition failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    /// Both conditions hold.
    Stable,
    /// The block contains `12` or `21`.
    UnstableCondition1,
    /// Some maximal run violates the run-context biconditional.
    UnstableCondition2,
}

impl Stability {
    /// Whether the block is stable.
    pub fn is_stable(self) -> bool {
        self == Stability::Stable
    }

    /// The fixed report string used by the command-line front end.
    pub fn describe(self) -> &'static str {
        match self {
            Stability::Stable => "stable",
            Stability::UnstableCondition1 => "unstable (condition 1)",
            Stability::UnstableCondition2 => "unstable (condition 2)",
        }
    }
}

/// Decide stability of a block by embedding it in zeros.
///
/// The embedded window is `0^(L+1) w 0^(L+1)` for `L = |w|`; every context
/// position referenced by a maximal run provably stays inside this window,
/// and the checker errors rather than assumes if that bound were violated.
pub fn is_stable(w: &[u8]) -> Result<Stability> {
    check_symbols(w)?;
    if w.windows(2).any(|p| p == [1, 2] || p == [2, 1]) {
        return Ok(Stability::UnstableCondition1);
    }
    let l = w.len();
    let mut x = alloc::vec![0u8; 3 * l + 2];
    x[l + 1..l + 1 + l].copy_from_slice(w);

    let mut idx = 0;
    while idx < x.len() {
        if x[idx] == 0 {
            idx += 1;
            continue;
        }
        let start = idx;
        while idx < x.len() && x[idx] != 0 {
            idx += 1;
        }
        let end = idx - 1;
        let a = x[start];
        debug_assert!(x[start..=end].iter().all(|&t| t == a));
        let n = end - start + 1;
        // Flanking zeros exist because the word sits strictly inside the
        // zero padding.
        let i = start - 1;
        let j = end + 1;
        let left = i
            .checked_sub(n)
            .ok_or_else(|| Error::internal("run context reaches past the embedded window"))?;
        let right = j + n;
        if right >= x.len() {
            return Err(Error::internal("run context reaches past the embedded window"));
        }
        let ctx = context_pair_allowed(x[left], x[right]);
        let member = in_doubling_intervals(n as u64)?;
        if (a == 1) != (member == ctx) {
            return Ok(Stability::UnstableCondition2);
        }
    }
    Ok(Stability::Stable)
}

/// Independent re-implementation of [`is_stable`]: no embedding, direct
/// index arithmetic with virtual zeros outside the block, and the
/// alternative interval predicate.
pub fn is_stable_alt(w: &[u8]) -> Result<Stability> {
    check_symbols(w)?;
    let len = w.len() as i64;
    let at = |i: i64| -> u8 {
        if i < 0 || i >= len {
            0
        } else {
            w[i as usize]
        }
    };
    for i in 0..len.saturating_sub(1) {
        let (p, q) = (at(i), at(i + 1));
        if p != 0 && q != 0 && p != q {
            return Ok(Stability::UnstableCondition1);
        }
    }
    let mut s: i64 = 0;
    while s < len {
        if at(s) == 0 {
            s += 1;
            continue;
        }
        let mut e = s;
        while at(e + 1) == at(s) {
            e += 1;
        }
        let n = e - s + 1;
        let ctx = (at(s - 1 - n) == 0) == (at(e + 1 + n) == 0);
        let member = in_doubling_intervals_alt(n as u64)?;
        if (at(s) == 1) != (member == ctx) {
            return Ok(Stability::UnstableCondition2);
        }
        s = e + 1;
    }
    Ok(Stability::Stable)
}

/// All stable blocks of length `1..=max_len`, shortest first and
/// lexicographic within a length.
pub fn enumerate_stable(max_len: usize) -> Result<Vec<Vec<u8>>> {
    if max_len == 0 {
        return Err(Error::domain("length bound must be at least 1"));
    }
    let mut out = Vec::new();
    for len in 1..=max_len {
        let mut digits = alloc::vec![0u8; len];
        loop {
            if is_stable(&digits)?.is_stable() {
                out.push(digits.clone());
            }
            let mut pos = len;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < SYMBOL_COUNT {
                    break;
                }
                digits[pos] = 0;
            }
            if digits.iter().all(|&d| d == 0) {
                break;
            }
        }
    }
    Ok(out)
}

/// The code element induced by a stable block: the block padded on both
/// sides by a zero run one longer than itself.
pub fn code_element(w: &[u8]) -> Result<Vec<u8>> {
    if w.is_empty() {
        return Err(Error::precondition("code elements come from nonempty blocks"));
    }
    if !is_stable(w)?.is_stable() {
        return Err(Error::precondition("code elements come from stable blocks"));
    }
    let pad = w.len() + 1;
    let mut out = alloc::vec![0u8; pad];
    out.extend_from_slice(w);
    out.extend(core::iter::repeat(0).take(pad));
    Ok(out)
}

// ---------------------------------------------------------------------------
// Membership of blocks in the system
// ---------------------------------------------------------------------------

/// Result of the bounded membership search: a certificate, or no verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// A stable block of length at most the bound contains the query as a
    /// factor; the least such block (shortest, then lexicographic).
    Yes {
        /// The certifying stable block.
        certificate: Vec<u8>,
    },
    /// No certificate within the bound; this is not a refutation.
    Unknown,
}

/// Largest allowed excess of the certificate bound over the query length;
/// the search enumerates all completions, which grows as `3^excess`.
const MEMBER_SEARCH_MAX_EXCESS: usize = 10;

/// Search for a stable block of length at most `bound` containing `w` as a
/// factor. `Unknown` means the bound was exhausted, not that no
/// certificate exists.
pub fn member_certificate(w: &[u8], bound: usize) -> Result<Membership> {
    check_symbols(w)?;
    if bound > w.len() + MEMBER_SEARCH_MAX_EXCESS {
        return Err(Error::search_bound(format!(
            "membership bound exceeds the query length by more than {MEMBER_SEARCH_MAX_EXCESS}"
        )));
    }
    for total in w.len()..=bound {
        let extra = total - w.len();
        let mut candidates: BTreeSet<Vec<u8>> = BTreeSet::new();
        for prefix_len in 0..=extra {
            let suffix_len = extra - prefix_len;
            let mut prefix = alloc::vec![0u8; prefix_len];
            loop {
                let mut suffix = alloc::vec![0u8; suffix_len];
                loop {
                    let mut cand = Vec::with_capacity(total);
                    cand.extend_from_slice(&prefix);
                    cand.extend_from_slice(w);
                    cand.extend_from_slice(&suffix);
                    candidates.insert(cand);
                    if !increment(&mut suffix) {
                        break;
                    }
                }
                if !increment(&mut prefix) {
                    break;
                }
            }
        }
        for cand in candidates {
            if is_stable(&cand)?.is_stable() {
                return Ok(Membership::Yes { certificate: cand });
            }
        }
    }
    Ok(Membership::Unknown)
}

/// Advance a base-3 odometer in place; false when it wraps to all zeros.
fn increment(digits: &mut [u8]) -> bool {
    let mut pos = digits.len();
    loop {
        if pos == 0 {
            return false;
        }
        pos -= 1;
        digits[pos] += 1;
        if digits[pos] < SYMBOL_COUNT {
            return true;
        }
        digits[pos] = 0;
    }
}

// ---------------------------------------------------------------------------
// Closure reports
// ---------------------------------------------------------------------------

/// Witnesses for the four joint membership classes of `(n, n + j)` under
/// the doubling-interval set.
#[derive(Debug, Clone)]
pub struct ShiftClassReport {
    /// The offset `j`.
    pub offset: i64,
    /// Witness count requested per class.
    pub requested: usize,
    /// Scan bound on `n`.
    pub bound: u64,
    /// Witnesses with both `n` and `n + j` members.
    pub both: Vec<u64>,
    /// Witnesses with `n` a member and `n + j` not.
    pub first_only: Vec<u64>,
    /// Witnesses with `n` not a member and `n + j` a member.
    pub second_only: Vec<u64>,
    /// Witnesses with neither a member.
    pub neither: Vec<u64>,
}

impl ShiftClassReport {
    /// Whether every class reached the requested witness count.
    pub fn satisfied(&self) -> bool {
        self.both.len() >= self.requested
            && self.first_only.len() >= self.requested
            && self.second_only.len() >= self.requested
            && self.neither.len() >= self.requested
    }
}

/// Scan `n ≤ bound` for witnesses in all four joint membership classes of
/// `(n, n + j)`. A shortfall is reported, not an error: the classes are
/// all infinite, but the scan is finite evidence.
pub fn shifted_membership_report(
    offset: i64,
    requested: usize,
    bound: u64,
) -> Result<ShiftClassReport> {
    if offset == 0 {
        return Err(Error::domain("offset must be nonzero"));
    }
    let mut report = ShiftClassReport {
        offset,
        requested,
        bound,
        both: Vec::new(),
        first_only: Vec::new(),
        second_only: Vec::new(),
        neither: Vec::new(),
    };
    for n in 1..=bound {
        let shifted = n as i64 + offset;
        if shifted < 1 {
            continue;
        }
        let a = in_doubling_intervals(n)?;
        let b = in_doubling_intervals(shifted as u64)?;
        let class = match (a, b) {
            (true, true) => &mut report.both,
            (true, false) => &mut report.first_only,
            (false, true) => &mut report.second_only,
            (false, false) => &mut report.neither,
        };
        if class.len() < requested {
            class.push(n);
        }
        if report.satisfied() {
            break;
        }
    }
    Ok(report)
}

/// Outcome of checking a closure property over all stable blocks up to a
/// length bound.
#[derive(Debug, Clone)]
pub struct ClosureReport {
    /// Length bound of the scan.
    pub max_len: usize,
    /// Number of checks performed.
    pub checked: u64,
    /// Blocks whose derived block failed the stability check.
    pub failures: Vec<Vec<u8>>,
}

/// Verify that the reversal of every stable block of length `≤ max_len` is
/// stable. Failures are collected, never swallowed.
pub fn reversal_closure(max_len: usize) -> Result<ClosureReport> {
    let mut report = ClosureReport {
        max_len,
        checked: 0,
        failures: Vec::new(),
    };
    for w in enumerate_stable(max_len)? {
        let rev: Vec<u8> = w.iter().rev().copied().collect();
        report.checked += 1;
        if !is_stable(&rev)?.is_stable() {
            report.failures.push(w);
        }
    }
    Ok(report)
}

/// Outcome of the concatenation closure scan.
#[derive(Debug, Clone)]
pub struct ConcatReport {
    /// Length bound for the sampled stable blocks.
    pub max_len: usize,
    /// Pairs `w 0^(n+1) w'` checked, `n = max(|w|, |w'|)`.
    pub pairs_checked: usize,
    /// Concatenations of code elements checked.
    pub code_checks: usize,
    /// Derived blocks that failed the stability check.
    pub failures: Vec<Vec<u8>>,
}

/// Check that sampled pairs of stable blocks joined by a long-enough zero
/// run stay stable, and that concatenations of code elements are stable.
///
/// Pairs run in deterministic order (both blocks ranging over the stable
/// enumeration) up to `max(min_pairs, 1000)` checks.
pub fn concatenation_closure(max_len: usize, min_pairs: usize) -> Result<ConcatReport> {
    let stable = enumerate_stable(max_len)?;
    let mut report = ConcatReport {
        max_len,
        pairs_checked: 0,
        code_checks: 0,
        failures: Vec::new(),
    };
    let cap = min_pairs.max(1000);
    'pairs: for w1 in &stable {
        for w2 in &stable {
            let n = w1.len().max(w2.len());
            let mut joined = Vec::with_capacity(w1.len() + n + 1 + w2.len());
            joined.extend_from_slice(w1);
            joined.extend(core::iter::repeat(0).take(n + 1));
            joined.extend_from_slice(w2);
            if !is_stable(&joined)?.is_stable() {
                report.failures.push(joined);
            }
            report.pairs_checked += 1;
            if report.pairs_checked >= cap {
                break 'pairs;
            }
        }
    }

    // Code-element corollary: every finite concatenation of code blocks is
    // stable; spot-check pairs and one triple over the first few elements.
    let mut elements: Vec<Vec<u8>> = alloc::vec![alloc::vec![0u8]];
    for w in stable.iter().take(5) {
        elements.push(code_element(w)?);
    }
    for c1 in &elements {
        for c2 in &elements {
            let mut joined = c1.clone();
            joined.extend_from_slice(c2);
            if !is_stable(&joined)?.is_stable() {
                report.failures.push(joined);
            }
            report.code_checks += 1;
        }
    }
    if elements.len() >= 3 {
        let mut triple = elements[0].clone();
        triple.extend_from_slice(&elements[1]);
        triple.extend_from_slice(&elements[2]);
        if !is_stable(&triple)?.is_stable() {
            report.failures.push(triple);
        }
        report.code_checks += 1;
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Rigidity scan
// ---------------------------------------------------------------------------

/// Evidence about one symbol involution under the star operation
/// (reversal composed with the involution) on stable blocks.
#[derive(Debug, Clone)]
pub struct InvolutionReport {
    /// Display name of the involution.
    pub name: String,
    /// The involution as a symbol map.
    pub map: [u8; 3],
    /// Whether every stable block's star image stayed stable.
    pub survives: bool,
    /// First failing block and its unstable star image, in scan order.
    pub first_failure: Option<(Vec<u8>, Vec<u8>)>,
    /// Per symbol `a`: least `n ≤ 64` with `a^n` stable but its image
    /// unstable.
    pub power_failures: Vec<(u8, u64)>,
}

/// Outcome of the rigidity scan over all symbol involutions.
#[derive(Debug, Clone)]
pub struct RigidityReport {
    /// Length bound of the scan.
    pub max_len: usize,
    /// One report per involution, identity first.
    pub involutions: Vec<InvolutionReport>,
}

impl RigidityReport {
    /// Names of the involutions that survived.
    pub fn survivors(&self) -> Vec<&str> {
        self.involutions
            .iter()
            .filter(|r| r.survives)
            .map(|r| r.name.as_str())
            .collect()
    }
}

const INVOLUTIONS: [([u8; 3], &str); 4] = [
    ([0, 1, 2], "identity"),
    ([1, 0, 2], "0<->1"),
    ([2, 1, 0], "0<->2"),
    ([0, 2, 1], "1<->2"),
];

fn star_image(w: &[u8], map: &[u8; 3]) -> Vec<u8> {
    w.iter().rev().map(|&s| map[s as usize]).collect()
}

/// For every symbol involution, check whether the star operation carries
/// stable blocks of length `≤ max_len` to stable blocks, recording the
/// first counterexample and, for failing involutions, the least failing
/// uniform power of each symbol. Only the identity is expected to survive
/// once the bound reaches 4; this is finite evidence, not a proof.
pub fn rigidity_scan(max_len: usize) -> Result<RigidityReport> {
    let stable = enumerate_stable(max_len)?;
    let mut involutions = Vec::new();
    for (map, name) in INVOLUTIONS {
        let mut first_failure = None;
        for w in &stable {
            let image = star_image(w, &map);
            if !is_stable(&image)?.is_stable() {
                first_failure = Some((w.clone(), image));
                break;
            }
        }
        let survives = first_failure.is_none();
        let mut power_failures = Vec::new();
        if !survives {
            for a in 0..SYMBOL_COUNT {
                for n in 1..=64usize {
                    let base = alloc::vec![a; n];
                    let image = alloc::vec![map[a as usize]; n];
                    if is_stable(&base)?.is_stable() && !is_stable(&image)?.is_stable() {
                        power_failures.push((a, n as u64));
                        break;
                    }
                }
            }
        }
        involutions.push(InvolutionReport {
            name: String::from(name),
            map,
            survives,
            first_failure,
            power_failures,
        });
    }
    Ok(RigidityReport {
        max_len,
        involutions,
    })
}

// ---------------------------------------------------------------------------
// Sparse points and zero sets
// ---------------------------------------------------------------------------

/// A point of the system with finitely many nonzero coordinates, certified
/// at construction: its central block (nonzero span with interior zeros)
/// must itself be stable. Zero padding never changes stability, so the
/// central block certifies every larger central window of the point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoint {
    support: BTreeMap<i64, u8>,
    certificate: Vec<u8>,
}

fn core_word(support: &BTreeMap<i64, u8>) -> Vec<u8> {
    match (support.keys().next(), support.keys().next_back()) {
        (Some(&lo), Some(&hi)) => (lo..=hi)
            .map(|i| support.get(&i).copied().unwrap_or(0))
            .collect(),
        _ => Vec::new(),
    }
}

impl SparsePoint {
    /// Certify a support map (positions to symbols `1` or `2`; all other
    /// coordinates zero) as a point of the system.
    pub fn new(support: BTreeMap<i64, u8>) -> Result<Self> {
        for (&pos, &v) in &support {
            if v != 1 && v != 2 {
                return Err(Error::domain(format!(
                    "support value {v} at {pos} is not a nonzero symbol"
                )));
            }
        }
        let certificate = core_word(&support);
        if !is_stable(&certificate)?.is_stable() {
            return Err(Error::construction(
                "central block is unstable; the sparse point is not a member",
            ));
        }
        Ok(SparsePoint {
            support,
            certificate,
        })
    }

    /// The nonzero coordinates and their symbols.
    pub fn support(&self) -> &BTreeMap<i64, u8> {
        &self.support
    }

    /// The stable central block recorded at construction.
    pub fn certificate(&self) -> &[u8] {
        &self.certificate
    }

    /// Sorted nonzero positions.
    pub fn nonzero_positions(&self) -> Vec<i64> {
        self.support.keys().copied().collect()
    }
}

/// The zero set of a sparse point, described by its finite complement:
/// every integer except the listed positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroSet {
    /// The positions excluded from the zero set.
    pub nonzero: Vec<i64>,
}

/// The zero set of a certified sparse point. Certification is enforced by
/// the type, so this cannot fail.
pub fn zero_set(p: &SparsePoint) -> ZeroSet {
    ZeroSet {
        nonzero: p.nonzero_positions(),
    }
}

/// Reconstruct the unique sparse point with the given nonzero positions.
///
/// The run-context biconditional decides each run's symbol from the zero
/// set alone: context membership depends only on which positions are zero,
/// so every maximal run of nonzero positions gets the symbol forced by its
/// length and context. The result is certified before returning.
pub fn forced_point(nonzero: &[i64]) -> Result<SparsePoint> {
    let positions: BTreeSet<i64> = nonzero.iter().copied().collect();
    let sorted: Vec<i64> = positions.iter().copied().collect();
    let mut support = BTreeMap::new();
    let mut idx = 0;
    while idx < sorted.len() {
        let start = sorted[idx];
        let mut end = start;
        while idx + 1 < sorted.len() && sorted[idx + 1] == end + 1 {
            idx += 1;
            end = sorted[idx];
        }
        idx += 1;
        let n = (end - start + 1) as u64;
        let left_zero = !positions.contains(&(start - 1 - n as i64));
        let right_zero = !positions.contains(&(end + 1 + n as i64));
        let ctx = left_zero == right_zero;
        let member = in_doubling_intervals(n)?;
        let symbol = if member == ctx { 1 } else { 2 };
        for pos in start..=end {
            support.insert(pos, symbol);
        }
    }
    SparsePoint::new(support)
}

/// Verify that two certified sparse points with the same zero set are the
/// same point, by reconstructing from the shared zero set and comparing.
///
/// Differing zero sets are a precondition error; a reconstruction that
/// disagrees with either point would falsify the determination property
/// and is reported as a hard error.
pub fn verify_zero_set_rigidity(p1: &SparsePoint, p2: &SparsePoint) -> Result<()> {
    let positions = p1.nonzero_positions();
    if positions != p2.nonzero_positions() {
        return Err(Error::precondition("the two points have different zero sets"));
    }
    let rebuilt = forced_point(&positions)?;
    if rebuilt.support() != p1.support() || rebuilt.support() != p2.support() {
        return Err(Error::construction(
            "zero set fails to determine the symbols",
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stable_str(text: &str) -> Stability {
        is_stable(&parse_symbols(text).unwrap()).unwrap()
    }

    #[test]
    fn interval_membership_matches_the_listed_values() {
        assert!(in_doubling_intervals(4).unwrap());
        assert!(in_doubling_intervals(8).unwrap());
        assert!(!in_doubling_intervals(9).unwrap());
        assert!(in_doubling_intervals(16).unwrap());
        assert!(in_doubling_intervals(32).unwrap());
        assert!(!in_doubling_intervals(33).unwrap());
        assert!(in_doubling_intervals(64).unwrap());
        assert!(!in_doubling_intervals(1).unwrap());
        assert!(!in_doubling_intervals(3).unwrap());
        assert!(in_doubling_intervals(0).is_err());
    }

    #[test]
    fn interval_implementations_agree() {
        for n in 1..=4096u64 {
            assert_eq!(
                in_doubling_intervals(n).unwrap(),
                in_doubling_intervals_alt(n).unwrap(),
                "disagreement at {n}"
            );
        }
    }

    #[test]
    fn stability_of_listed_blocks() {
        assert_eq!(stable_str("1111"), Stability::Stable);
        assert_eq!(stable_str("11"), Stability::UnstableCondition2);
        assert_eq!(stable_str("222"), Stability::Stable);
        assert_eq!(stable_str("2222"), Stability::UnstableCondition2);
        assert_eq!(stable_str("12"), Stability::UnstableCondition1);
        assert_eq!(stable_str("21"), Stability::UnstableCondition1);
        assert_eq!(stable_str("000"), Stability::Stable);
        assert_eq!(stable_str(""), Stability::Stable);
        // Single nonzero symbols: the isolated run has length 1, outside
        // the interval set, with an allowed all-zero context, so the
        // biconditional forces the symbol 2.
        assert_eq!(stable_str("1"), Stability::UnstableCondition2);
        assert_eq!(stable_str("2"), Stability::Stable);
        assert_eq!(stable_str("101"), Stability::Stable);
        assert_eq!(stable_str("020"), Stability::Stable);
        assert_eq!(stable_str("202"), Stability::UnstableCondition2);
        assert!(is_stable(&[3]).is_err());
    }

    #[test]
    fn uniform_powers_follow_interval_membership() {
        for n in 1..=64usize {
            let ones = alloc::vec![1u8; n];
            let twos = alloc::vec![2u8; n];
            let zeros = alloc::vec![0u8; n];
            let member = in_doubling_intervals(n as u64).unwrap();
            assert_eq!(is_stable(&ones).unwrap().is_stable(), member, "1^{n}");
            assert_eq!(is_stable(&twos).unwrap().is_stable(), !member, "2^{n}");
            assert!(is_stable(&zeros).unwrap().is_stable(), "0^{n}");
        }
    }

    #[test]
    fn zero_padding_never_changes_stability() {
        for w in enumerate_stable(4).unwrap() {
            for pad in 1..=3usize {
                let mut padded = alloc::vec![0u8; pad];
                padded.extend_from_slice(&w);
                padded.extend(core::iter::repeat(0).take(pad));
                assert!(is_stable(&padded).unwrap().is_stable());
            }
        }
        // and an unstable block stays unstable under padding
        assert_eq!(stable_str("0110"), Stability::UnstableCondition2);
    }

    #[test]
    fn dual_implementations_agree_on_short_blocks() {
        for len in 0..=8usize {
            let mut digits = alloc::vec![0u8; len];
            loop {
                assert_eq!(
                    is_stable(&digits).unwrap(),
                    is_stable_alt(&digits).unwrap(),
                    "disagreement on {digits:?}"
                );
                if !increment(&mut digits) {
                    break;
                }
            }
        }
    }

    #[test]
    fn enumeration_is_ordered_and_matches_hand_checks() {
        let l1 = enumerate_stable(1).unwrap();
        let rendered: Vec<String> = l1.iter().map(|w| render_symbols(w)).collect();
        assert_eq!(rendered, alloc::vec!["0", "2"]);

        let l2 = enumerate_stable(2).unwrap();
        let rendered: Vec<String> = l2.iter().map(|w| render_symbols(w)).collect();
        assert!(rendered.contains(&String::from("00")));
        assert!(rendered.contains(&String::from("02")));
        assert!(!rendered.contains(&String::from("12")));
        assert!(!rendered.contains(&String::from("21")));
        assert!(!rendered.contains(&String::from("11")));
        // shortest first, lexicographic within a length
        let mut sorted = l2.clone();
        sorted.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        assert_eq!(l2, sorted);
        assert!(enumerate_stable(0).is_err());
    }

    #[test]
    fn no_stable_block_contains_forbidden_adjacency() {
        for w in enumerate_stable(6).unwrap() {
            assert!(!w.windows(2).any(|p| p == [1, 2] || p == [2, 1]));
        }
    }

    #[test]
    fn membership_certificates() {
        let m = member_certificate(&parse_symbols("11").unwrap(), 8).unwrap();
        assert_eq!(
            m,
            Membership::Yes {
                certificate: parse_symbols("1111").unwrap()
            }
        );
        let m = member_certificate(&parse_symbols("12").unwrap(), 10).unwrap();
        assert_eq!(m, Membership::Unknown);
        let m = member_certificate(&parse_symbols("101").unwrap(), 8).unwrap();
        assert_eq!(
            m,
            Membership::Yes {
                certificate: parse_symbols("101").unwrap()
            }
        );
        assert!(member_certificate(&[1], 100).is_err());
    }

    #[test]
    fn shifted_membership_classes_have_witnesses() {
        let report = shifted_membership_report(1, 3, 600).unwrap();
        assert!(report.satisfied());
        assert_eq!(report.both.first(), Some(&4));
        // members whose successor is not a member are the interval right
        // endpoints 8, 32, 128, ...
        assert_eq!(report.first_only, alloc::vec![8, 32, 128]);
        assert_eq!(report.second_only.first(), Some(&3));
        assert_eq!(report.neither.first(), Some(&1));
        let back = shifted_membership_report(-1, 3, 600).unwrap();
        assert!(back.satisfied());
        assert!(shifted_membership_report(0, 1, 10).is_err());

        // a too-small scan bound reports the shortfall instead of failing:
        // below 100 the first class above has only two witnesses
        let short = shifted_membership_report(1, 3, 100).unwrap();
        assert!(!short.satisfied());
        assert_eq!(short.first_only, alloc::vec![8, 32]);
    }

    #[test]
    fn reversal_closure_holds() {
        let report = reversal_closure(6).unwrap();
        assert!(report.checked > 0);
        assert!(report.failures.is_empty());
    }

    #[test]
    fn concatenation_closure_holds() {
        let report = concatenation_closure(4, 100).unwrap();
        assert!(report.pairs_checked >= 100);
        assert!(report.code_checks > 0);
        assert!(report.failures.is_empty());

        // the listed example: joined by a zero run of length 5
        let mut joined = parse_symbols("1111").unwrap();
        joined.extend(core::iter::repeat(0).take(5));
        joined.extend_from_slice(&parse_symbols("222").unwrap());
        assert!(is_stable(&joined).unwrap().is_stable());
    }

    #[test]
    fn rigidity_scan_leaves_only_the_identity() {
        let report = rigidity_scan(6).unwrap();
        assert_eq!(report.survivors(), alloc::vec!["identity"]);

        let by_name = |name: &str| {
            report
                .involutions
                .iter()
                .find(|r| r.name == name)
                .unwrap()
        };
        let swap01 = by_name("0<->1");
        assert_eq!(
            swap01.first_failure,
            Some((parse_symbols("0").unwrap(), parse_symbols("1").unwrap()))
        );
        assert!(swap01.power_failures.contains(&(0, 1)));

        let swap12 = by_name("1<->2");
        assert_eq!(
            swap12.first_failure,
            Some((parse_symbols("2").unwrap(), parse_symbols("1").unwrap()))
        );
        // the uniform power witness: 1111 stable, 2222 not
        assert!(swap12.power_failures.contains(&(1, 4)));
        assert!(swap12.power_failures.contains(&(2, 1)));

        let swap02 = by_name("0<->2");
        assert_eq!(
            swap02.first_failure,
            Some((parse_symbols("020").unwrap(), parse_symbols("202").unwrap()))
        );
        assert!(swap02.power_failures.contains(&(0, 4)));
    }

    #[test]
    fn sparse_points_certify_and_reconstruct() {
        let mut support = BTreeMap::new();
        for i in 0..4 {
            support.insert(i, 1u8);
        }
        let p = SparsePoint::new(support).unwrap();
        assert_eq!(render_symbols(p.certificate()), "1111");
        assert_eq!(zero_set(&p).nonzero, alloc::vec![0, 1, 2, 3]);

        // an isolated 1 is not a member; an isolated 2 is
        let mut bad = BTreeMap::new();
        bad.insert(0i64, 1u8);
        assert!(SparsePoint::new(bad).is_err());
        let mut good = BTreeMap::new();
        good.insert(0i64, 2u8);
        assert!(SparsePoint::new(good).is_ok());

        // reconstruction from the zero set alone
        let rebuilt = forced_point(&[0, 1, 2, 3]).unwrap();
        assert_eq!(rebuilt.support(), p.support());

        let forced = forced_point(&[0, 1, 3]).unwrap();
        assert_eq!(render_symbols(forced.certificate()), "2201");
        let expected: BTreeMap<i64, u8> =
            [(0, 2), (1, 2), (3, 1)].into_iter().collect();
        assert_eq!(forced.support(), &expected);

        verify_zero_set_rigidity(&p, &rebuilt).unwrap();
        assert!(verify_zero_set_rigidity(&p, &forced).is_err());

        let empty = SparsePoint::new(BTreeMap::new()).unwrap();
        assert!(zero_set(&empty).nonzero.is_empty());
        assert!(empty.certificate().is_empty());
    }

    #[test]
    fn parsing_and_rendering_round_trip() {
        let w = parse_symbols("0120210").unwrap();
        assert_eq!(render_symbols(&w), "0120210");
        assert!(parse_symbols("013").is_err());
    }
}
