//! Witness constructions for flips.
//!
//! Everything here answers one of two questions about an irreducible,
//! infinite shift space with a one-block flip:
//!
//! * can we exhibit a point that differs from its flip image in finitely
//!   many, but not zero, coordinates (an "asymmetric" point), and
//! * can we build a second flip on the same space whose fixed-point counts
//!   strictly dominate those of the first?
//!
//! The second construction rewrites the flip image near occurrences of a
//! long marker word, and iterating it (with a recoding pass between rounds)
//! yields arbitrarily large families of pairwise non-conjugate flips; the
//! [`flip_family`] driver packages that pipeline with explicit certificates.
//!
//! All searches are shortest-then-lexicographic and bounded by
//! [`SearchLimits`]; every constructed object is re-verified against its
//! defining property before it is returned, and a failed verification is a
//! hard error rather than a silently degraded result.

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::alphabet::{Symbol, SymbolInvolution};
use crate::conjugacy::{higher_block, recode_one_block, ConjugacyDescriptor};
use crate::error::Error;
use crate::flip::{apply_flip_periodic, validate_flip, Flip, ThetaRule};
use crate::index_set::IndexSet;
use crate::invariants::{
    a_membership, certify_nonconjugate, fixed_count, fixed_points, fvector, AMembership, FVector,
    NonConjugacyCertificate,
};
use crate::limits::SearchLimits;
use crate::point::{Coord, EventuallyPeriodicPoint, PeriodicPoint};
use crate::sft::SftPresentation;
use crate::word::Word;
use crate::Result;

/// Least word `w` (shortest, then lexicographically smallest) such that
/// `prefix w suffix` is in the language and `accept(w)` holds, searching
/// lengths `0..=max_len`.
///
/// The search prunes on admissibility of `prefix` followed by the partial
/// word, which keeps it proportional to the language growth rather than to
/// the full tree over the alphabet.
fn least_extension(
    space: &SftPresentation,
    prefix: &Word,
    suffix: &Word,
    max_len: usize,
    accept: &mut dyn FnMut(&Word) -> bool,
) -> Result<Word> {
    fn dfs(
        space: &SftPresentation,
        prefix: &Word,
        suffix: &Word,
        target: usize,
        buf: &mut Vec<Symbol>,
        accept: &mut dyn FnMut(&Word) -> bool,
    ) -> Option<Word> {
        if buf.len() == target {
            let w = Word::new(buf.clone());
            let full = prefix.concat(&w).concat(suffix);
            if space.in_language(&full) && accept(&w) {
                return Some(w);
            }
            return None;
        }
        for s in space.alphabet().symbols() {
            buf.push(s);
            let mut partial: Vec<Symbol> = prefix.to_vec();
            partial.extend_from_slice(buf);
            if space.in_language(&partial) {
                if let Some(w) = dfs(space, prefix, suffix, target, buf, accept) {
                    return Some(w);
                }
            }
            buf.pop();
        }
        None
    }

    for len in 0..=max_len {
        let mut buf = Vec::with_capacity(len);
        if let Some(w) = dfs(space, prefix, suffix, len, &mut buf, accept) {
            return Ok(w);
        }
    }
    Err(Error::search_bound(format!(
        "no word of length at most {max_len} fits between {} and {}",
        space.alphabet().render(prefix),
        space.alphabet().render(suffix),
    )))
}

/// The least admissible symbol fixed by `tau`, as a one-symbol word.
pub fn star_fixed_anchor(space: &SftPresentation, tau: &SymbolInvolution) -> Option<Word> {
    space
        .alphabet()
        .symbols()
        .find(|&s| tau.fixes(s) && space.in_language(&[s]))
        .map(|s| Word::new([s].to_vec()))
}

fn anchor_symbol(space: &SftPresentation, tau: &SymbolInvolution) -> Result<Word> {
    if let Some(w) = star_fixed_anchor(space, tau) {
        return Ok(w);
    }
    space
        .alphabet()
        .symbols()
        .find(|&s| space.in_language(&[s]))
        .map(|s| Word::new([s].to_vec()))
        .ok_or_else(|| Error::internal("essential space with no admissible symbol"))
}

// ---------------------------------------------------------------------------
// Seed blocks
// ---------------------------------------------------------------------------

/// Continuation words around an anchor block, used as raw material by the
/// witness constructions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedBlocks {
    /// Least `a` with `f a f` admissible.
    pub a: Word,
    /// Least `b` with `f b f` admissible that is not a chain `(a f)^n a`.
    pub b: Word,
}

/// Whether `w` equals `(af)^n a` for some `n >= 0`.
fn is_anchor_chain(w: &Word, a: &Word, f: &Word) -> bool {
    let unit = a.len() + f.len();
    if w.len() < a.len() || (w.len() - a.len()) % unit != 0 {
        return false;
    }
    let n = (w.len() - a.len()) / unit;
    let mut chain: Vec<Symbol> = Vec::with_capacity(w.len());
    for _ in 0..n {
        chain.extend_from_slice(a);
        chain.extend_from_slice(f);
    }
    chain.extend_from_slice(a);
    chain.as_slice() == &w[..]
}

/// Find the two continuation words around `f` described on [`SeedBlocks`].
///
/// Requires an irreducible infinite space and an admissible nonempty `f`.
/// Three facts are re-verified before returning, and any failure is a hard
/// error: both words embed as claimed, `f` does not occur inside `b`, and
/// `f b f a` avoids every point of period `|a| + |f|` over the full
/// alphabet (not merely over the space).
pub fn seed_blocks(space: &SftPresentation, f: &Word, limits: &SearchLimits) -> Result<SeedBlocks> {
    if f.is_empty() {
        return Err(Error::precondition("anchor block must be nonempty"));
    }
    if !space.in_language(f) {
        return Err(Error::precondition("anchor block must be admissible"));
    }
    if !space.is_infinite()? {
        return Err(Error::precondition(
            "seed blocks exist only on infinite spaces",
        ));
    }

    let a = least_extension(space, f, f, limits.word_search_max_len, &mut |_| true)?;
    let b = least_extension(space, f, f, limits.word_search_max_len, &mut |w| {
        !is_anchor_chain(w, &a, f)
    })?;

    for w in [&a, &b] {
        let full = f.concat(w).concat(f);
        if !space.in_language(&full) {
            return Err(Error::internal("seed search returned an inadmissible word"));
        }
    }
    if b.contains_subword(f) {
        return Err(Error::construction(
            "second seed word contains the anchor block; the separation argument does not apply",
        ));
    }

    // `f b f a` must avoid every (|a| + |f|)-periodic point over the full
    // alphabet; otherwise repeated `(f a)` tails could swallow it.
    let q = f.concat(&b).concat(f).concat(&a);
    let p = a.len() + f.len();
    let sigma = space.alphabet().len() as u64;
    let mut total: u64 = 1;
    for _ in 0..p {
        total = total
            .checked_mul(sigma)
            .filter(|&t| t <= limits.validation_block_cap)
            .ok_or_else(|| Error::search_bound("periodicity scan for seed words is too large"))?;
    }
    // counter over all length-p words
    let mut digits = alloc::vec![0u16; p];
    loop {
        let u = Word::new(digits.iter().map(|&d| Symbol(d)).collect());
        for phase in 0..p {
            if q.iter()
                .enumerate()
                .all(|(t, &s)| s == u[(phase + t) % p])
            {
                return Err(Error::construction(format!(
                    "seed word pattern embeds in the periodic point {}",
                    space.alphabet().render(&u),
                )));
            }
        }
        // increment
        let mut carry = true;
        for d in digits.iter_mut() {
            if !carry {
                break;
            }
            *d += 1;
            if u64::from(*d) < sigma {
                carry = false;
            } else {
                *d = 0;
            }
        }
        if carry {
            break;
        }
    }

    Ok(SeedBlocks { a, b })
}

// ---------------------------------------------------------------------------
// Finite-difference witness
// ---------------------------------------------------------------------------

/// A point that differs from its flip image in finitely many, but not zero,
/// coordinates, together with the data used to assemble it.
#[derive(Debug, Clone)]
pub struct DifferenceWitness {
    /// Continuation words around the anchor.
    pub seeds: SeedBlocks,
    /// Number of `(f a)` repetitions appended to the central pattern.
    pub repetitions: usize,
    /// Half-width of the central pattern: it occupies `[-M, M + |f| - 1]`.
    pub half_width: usize,
    /// The central pattern itself.
    pub pattern: Word,
    /// The witness point.
    pub point: EventuallyPeriodicPoint,
    /// Coordinates where the point and its flip image differ.
    pub difference: Vec<i64>,
}

/// Build a point whose flip image differs from it in finitely many, but not
/// zero, coordinates, anchored at a star-symmetric admissible block `f`.
///
/// The point repeats `(f a)` to the right and its star image to the left of
/// a central pattern `a f a (f b)^2 (f a)^(2N)`, with `N` large enough that
/// the asymmetric `b`-section cannot be mirrored away. Admissibility and
/// membership are re-verified; failure is a hard error.
pub fn finite_difference_witness(
    space: &SftPresentation,
    flip: &Flip,
    f: &Word,
    limits: &SearchLimits,
) -> Result<DifferenceWitness> {
    let tau = flip
        .as_one_block()
        .ok_or_else(|| Error::precondition("witness construction needs a one-block flip"))?
        .clone();
    if f.is_empty() || !space.in_language(f) {
        return Err(Error::precondition("anchor block must be nonempty and admissible"));
    }
    if !f.is_star_symmetric(&tau) {
        return Err(Error::precondition(
            "anchor block must equal its own star image",
        ));
    }

    let seeds = seed_blocks(space, f, limits)?;
    let (a, b) = (&seeds.a, &seeds.b);
    let unit = a.len() + f.len();
    let need = 2 * a.len() + f.len() + 2 * (b.len() + f.len());
    let mut reps = 1usize;
    while (reps - 1) * unit < need {
        reps += 1;
        if reps > limits.repeat_max {
            return Err(Error::search_bound(
                "repetition count for the witness pattern exceeds the limit",
            ));
        }
    }

    let fa = f.concat(a);
    let fb = f.concat(b);
    let pattern = a
        .concat(f)
        .concat(a)
        .concat(&fb.repeat(2))
        .concat(&fa.repeat(2 * reps));
    let half_width = a.len() + b.len() + f.len() + reps * unit;
    if pattern.len() != 2 * half_width + f.len() {
        return Err(Error::internal("witness pattern length bookkeeping failed"));
    }

    let left = fa.star(&tau);
    let point = EventuallyPeriodicPoint::new(
        left,
        pattern.clone(),
        fa.clone(),
        -(half_width as i64),
    )?;
    if !space.contains_ep(&point) {
        return Err(Error::construction("witness point leaves the language"));
    }
    match a_membership(space, flip, &point)? {
        AMembership::In { difference } => Ok(DifferenceWitness {
            seeds,
            repetitions: reps,
            half_width,
            pattern,
            point,
            difference,
        }),
        other => Err(Error::construction(format!(
            "witness point fails the membership check: {other:?}"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Asymmetry witness
// ---------------------------------------------------------------------------

/// Which composite the exhibited point certifies as asymmetric.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessBranch {
    /// The point differs finitely from its image under the flip itself.
    Flip,
    /// The point differs finitely from its image under the shift composed
    /// with the flip.
    ShiftFlip,
}

/// Outcome of the asymmetry search: a system conjugate to the input (or to
/// its shift composite), together with a point on it that differs from its
/// flip image in finitely many nonzero coordinates.
#[derive(Debug, Clone)]
pub struct AsymmetryWitness {
    /// Which composite the witness certifies.
    pub branch: WitnessBranch,
    /// Anchor block the search pivoted on.
    pub anchor: Word,
    /// Least word with `f v f` admissible; used for the repeated tails.
    pub bridge: Word,
    /// Least word with `f* w f` admissible; its length parity and star
    /// symmetry select the branch.
    pub probe: Word,
    /// Conjugacies applied to reach the exhibited system.
    pub chain: Vec<ConjugacyDescriptor>,
    /// The system the witness point lives on.
    pub space: SftPresentation,
    /// The flip on that system fixing no tail of the witness.
    pub flip: Flip,
    /// The witness point.
    pub point: EventuallyPeriodicPoint,
    /// Coordinates where the point and its flip image differ.
    pub difference: Vec<i64>,
}

/// For an irreducible infinite space with a valid one-block flip, exhibit a
/// point differing from its image in finitely many nonzero coordinates,
/// either for the flip itself or for its shift composite.
///
/// Every branch re-verifies admissibility and membership of the point it
/// returns. When the probe word is symmetric the construction delegates to
/// [`finite_difference_witness`] — directly, or after a two-block pass that
/// turns the shift composite into a plain flip.
pub fn asymmetry_witness(
    space: &SftPresentation,
    flip: &Flip,
    limits: &SearchLimits,
) -> Result<AsymmetryWitness> {
    if flip.as_one_block().is_none() {
        return Err(Error::precondition("asymmetry search needs a one-block flip"));
    }
    if !space.is_infinite()? {
        return Err(Error::precondition(
            "asymmetry search needs an infinite space",
        ));
    }

    // When the presentation's memory forces anchors longer than one symbol,
    // pass to an odd higher-block presentation first; oddness keeps the
    // transported flip a plain flip rather than a shift composite.
    let mut chain: Vec<ConjugacyDescriptor> = Vec::new();
    let mut cur_space = space.clone();
    let mut cur_flip = flip.clone();
    if space.synchronizing_block().len() > 1 {
        let len = space.synchronizing_block().len();
        let lift = if len % 2 == 1 { len } else { len + 1 };
        let (s2, f2, desc) = higher_block(&cur_space, &cur_flip, lift, limits)?;
        chain.push(desc);
        cur_space = s2;
        cur_flip = f2;
    }
    let tau = cur_flip
        .as_one_block()
        .expect("odd block pass preserves one-block flips")
        .clone();

    let anchor = anchor_symbol(&cur_space, &tau)?;
    let anchor_star = anchor.star(&tau);
    let bridge = least_extension(&cur_space, &anchor, &anchor, limits.word_search_max_len, &mut |_| true)?;
    let probe = least_extension(
        &cur_space,
        &anchor_star,
        &anchor,
        limits.word_search_max_len,
        &mut |_| true,
    )?;

    let symmetric = probe.is_star_symmetric(&tau);
    let odd = probe.len() % 2 == 1;

    if !symmetric {
        // Direct witness: centre the asymmetric probe and mirror repeated
        // `(f v)` tails around it.
        let (branch, wit_flip, center_start) = if odd {
            (WitnessBranch::Flip, cur_flip.clone(), -((probe.len() as i64 - 1) / 2))
        } else {
            (
                WitnessBranch::ShiftFlip,
                cur_flip.compose_shift(1),
                -(probe.len() as i64 / 2),
            )
        };
        let fv = anchor.concat(&bridge);
        let point = EventuallyPeriodicPoint::new(
            fv.star(&tau),
            probe.clone(),
            fv,
            center_start,
        )?;
        if !cur_space.contains_ep(&point) {
            return Err(Error::construction("asymmetry witness leaves the language"));
        }
        let difference = match a_membership(&cur_space, &wit_flip, &point)? {
            AMembership::In { difference } => difference,
            other => {
                return Err(Error::construction(format!(
                    "asymmetry witness fails the membership check: {other:?}"
                )))
            }
        };
        return Ok(AsymmetryWitness {
            branch,
            anchor,
            bridge,
            probe,
            chain,
            space: cur_space,
            flip: wit_flip,
            point,
            difference,
        });
    }

    if odd {
        // Symmetric odd probe: the direct centre would be fixed by the
        // flip, so fall back to the finite-difference construction, which
        // needs a star-symmetric anchor.
        let wit = finite_difference_witness(&cur_space, &cur_flip, &anchor, limits)?;
        return Ok(AsymmetryWitness {
            branch: WitnessBranch::Flip,
            anchor,
            bridge,
            probe,
            chain,
            space: cur_space,
            flip: cur_flip,
            point: wit.point,
            difference: wit.difference,
        });
    }

    // Symmetric even probe: the obstruction sits between coordinates, so
    // pass to the two-block presentation, where the shift composite becomes
    // a plain flip, and run the finite-difference construction there.
    let (s2, f2, desc) = higher_block(&cur_space, &cur_flip, 2, limits)?;
    chain.push(desc);
    let tau2 = f2
        .as_one_block()
        .expect("two-block pass yields a one-block flip")
        .clone();
    let g = star_fixed_anchor(&s2, &tau2).ok_or_else(|| {
        Error::precondition("no star-fixed symbol exists after the two-block pass")
    })?;
    let wit = finite_difference_witness(&s2, &f2, &g, limits)?;
    Ok(AsymmetryWitness {
        branch: WitnessBranch::ShiftFlip,
        anchor,
        bridge,
        probe,
        chain,
        space: s2,
        flip: f2,
        point: wit.point,
        difference: wit.difference,
    })
}

// ---------------------------------------------------------------------------
// Marker rewriting on points
// ---------------------------------------------------------------------------

/// Lazy view of a marker rewrite applied to a point: coordinates within the
/// core zone of a marker whose centre lies in the active set are replaced
/// by the reflected base image; everything else passes through.
pub struct MarkerRewriteView<'a, C: Coord> {
    /// The rewrite rule supplying marker detection and the base involution.
    pub rule: &'a ThetaRule,
    /// Marker centres at which the rewrite is switched on.
    pub active: &'a IndexSet,
    /// The underlying point.
    pub inner: &'a C,
}

impl<'a, C: Coord> Coord for MarkerRewriteView<'a, C> {
    fn at(&self, i: i64) -> Symbol {
        let alpha = self.rule.alpha() as i64;
        for j in (i - alpha)..=(i + alpha) {
            if self.active.contains(j) && self.rule.marker_at(self.inner, j) {
                return self.rule.base().apply(self.inner.at(2 * j - i));
            }
        }
        self.inner.at(i)
    }
}

/// Lazy view of a flip image: coordinate `i` is the flip rule evaluated on
/// the window of the underlying point. Panics if the rule is partial on a
/// window it encounters; use only with total rules.
pub struct FlipImageView<'a, C: Coord> {
    /// The flip to apply.
    pub flip: &'a Flip,
    /// The underlying point.
    pub inner: &'a C,
}

impl<'a, C: Coord> Coord for FlipImageView<'a, C> {
    fn at(&self, i: i64) -> Symbol {
        self.flip
            .eval_at(self.inner, i)
            .expect("flip rule must be total on the points it views")
    }
}

/// Apply a marker rewrite with active set `active` to a periodic point.
///
/// The active set must be compatible with the period: for every marker
/// centre `j` in one period, membership of `j - n` and `j + n` must agree
/// with membership of `j`. Violations are precondition errors.
pub fn rewrite_periodic(
    rule: &ThetaRule,
    active: &IndexSet,
    point: &PeriodicPoint,
) -> Result<PeriodicPoint> {
    let n = point.period() as i64;
    for j in 0..n {
        if rule.marker_at(point, j) {
            for t in [j - n, j + n] {
                if active.contains(t) != active.contains(j) {
                    return Err(Error::precondition(
                        "active set is not aligned with the period at a marker",
                    ));
                }
            }
        }
    }
    let view = MarkerRewriteView {
        rule,
        active,
        inner: point,
    };
    let word = Word::new((0..n).map(|i| view.at(i)).collect());
    PeriodicPoint::new(word)
}

// ---------------------------------------------------------------------------
// Structural validation of marker rewrite flips
// ---------------------------------------------------------------------------

/// Splice two copies of equal-length marker windows at offset `delta`
/// (second starts `delta` after the first). Returns `None` when the overlap
/// is inconsistent, i.e. the configuration is impossible as strings.
fn overlap_word(w1: &Word, w2: &Word, delta: usize) -> Option<Word> {
    let l = w1.len();
    debug_assert_eq!(l, w2.len());
    debug_assert!(delta <= l);
    for t in 0..l - delta {
        if w1[t + delta] != w2[t] {
            return None;
        }
    }
    let mut combined: Vec<Symbol> = w1.to_vec();
    combined.extend_from_slice(&w2[l - delta..]);
    Some(Word::new(combined))
}

/// Certify, without enumerating blocks, that a marker rewrite composed with
/// its base involution satisfies the flip axioms on `space`.
///
/// The certificate rests on four checked facts: the base involution is
/// itself a valid flip; both marker words are admissible, distinct, and
/// exchanged by the star operation; the space's memory does not exceed the
/// frame length; and no two marker centres can sit within `|core| + |frame|`
/// of each other (each candidate offset is refuted either as strings or by
/// inadmissibility of the spliced word). Together these force rewritten
/// zones to lie deep inside single marker windows, whose rewritten content
/// is the opposite marker word — so images stay in the language and the
/// rewrite undoes itself. Any unrefuted offset is a hard error: the flip
/// may still be valid, but this certificate cannot establish it.
pub fn validate_theta_structural(
    space: &SftPresentation,
    rule: &ThetaRule,
    limits: &SearchLimits,
) -> Result<()> {
    let base = Flip::one_block(rule.base().clone());
    let report = validate_flip(space, &base, limits)?;
    if !report.is_valid() {
        return Err(Error::construction(
            "marker rewrite built over an involution that is not a valid flip",
        ));
    }

    let plus = rule.marker_plus();
    let minus = rule.marker_minus();
    if !space.in_language(plus) || !space.in_language(minus) {
        return Err(Error::construction("marker words leave the language"));
    }
    if plus == minus {
        return Err(Error::construction(
            "core is star-symmetric, so the two marker words coincide",
        ));
    }
    if &plus.star(rule.base()) != minus {
        return Err(Error::internal("marker words are not star images"));
    }
    if space.step() > rule.frame().len() {
        return Err(Error::construction(
            "space memory exceeds the frame length; windows could escape a marker",
        ));
    }

    let span = rule.core().len() + rule.frame().len();
    for delta in 1..=span {
        for (w1, w2) in [(plus, plus), (plus, minus), (minus, plus), (minus, minus)] {
            if let Some(combined) = overlap_word(w1, w2, delta) {
                if space.in_language(&combined) {
                    return Err(Error::construction(format!(
                        "two marker centres could sit {delta} apart; separation cannot be certified"
                    )));
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Marker companion flip
// ---------------------------------------------------------------------------

/// The assembled data of a marker rewrite companion, before verification.
#[derive(Debug, Clone)]
pub struct CompanionPlan {
    /// Continuation words around the anchor.
    pub seeds: SeedBlocks,
    /// Odd-length non-symmetric core rewritten at marker centres.
    pub core: Word,
    /// Frame word flanking the core inside the marker words.
    pub frame: Word,
    /// Repetitions of `(f a)` inside the frame.
    pub repetitions: usize,
    /// Connector closing the doubled marker pattern into a periodic point.
    pub connector: Word,
    /// The rewrite rule.
    pub rule: ThetaRule,
    /// Period of the extra fixed point.
    pub witness_period: usize,
    /// Periodic point fixed by the companion but not by the base flip.
    pub extra_point: PeriodicPoint,
    /// Marker centres of the extra point within one period.
    pub marker_positions: Vec<i64>,
}

/// Construct the companion data for a star-fixed admissible anchor symbol,
/// without running the count comparisons.
pub fn companion_plan(
    space: &SftPresentation,
    flip: &Flip,
    f: &Word,
    limits: &SearchLimits,
) -> Result<CompanionPlan> {
    let tau = flip
        .as_one_block()
        .ok_or_else(|| Error::precondition("companion construction needs a one-block flip"))?
        .clone();
    if f.len() != 1 {
        return Err(Error::precondition("companion anchor must be a single symbol"));
    }
    if !space.in_language(f) || !f.is_star_symmetric(&tau) {
        return Err(Error::precondition(
            "companion anchor must be admissible and star-fixed",
        ));
    }

    let seeds = seed_blocks(space, f, limits)?;
    let (a, b) = (&seeds.a, &seeds.b);

    let core = least_extension(space, f, f, limits.word_search_max_len, &mut |w| {
        w.len() % 2 == 1 && !w.is_star_symmetric(&tau)
    })?;

    let unit = a.len() + 1;
    let need = a.len() + 2 * b.len() + core.len() + 2;
    let mut reps = 1usize;
    while (reps - 1) * unit < need {
        reps += 1;
        if reps > limits.repeat_max {
            return Err(Error::search_bound(
                "frame repetition count exceeds the limit",
            ));
        }
    }
    let fa = f.concat(a);
    let frame = f.concat(b).concat(&fa.repeat(reps));
    let rule = ThetaRule::new(tau.clone(), core.clone(), frame.clone())?;

    if !space.in_language(rule.marker_plus()) || !space.in_language(rule.marker_minus()) {
        return Err(Error::construction("marker words leave the language"));
    }

    // Close the doubled marker pattern into a periodic orbit with the least
    // connector; linear admissibility of prefix-connector-suffix prunes the
    // search, the cyclic check decides acceptance.
    let frame_star = frame.star(&tau);
    let core_star = core.star(&tau);
    let first_half = frame_star.concat(&core).concat(&frame);
    let second_half = frame_star.concat(&core_star).concat(&frame);
    let block_of = |w: &Word| -> Word {
        first_half
            .concat(w)
            .concat(&second_half)
            .concat(w)
    };
    let connector = least_extension(
        space,
        &first_half,
        &second_half,
        limits.connector_max_len,
        &mut |w| match PeriodicPoint::new(block_of(w)) {
            Ok(p) => space.contains_periodic(&p),
            Err(_) => false,
        },
    )?;

    let block = block_of(&connector);
    let witness_period = block.len();
    let beta = rule.beta() as i64;
    let extra_point = PeriodicPoint::new(block)?.shifted(beta);

    let marker_positions: Vec<i64> = (0..witness_period as i64)
        .filter(|&j| rule.marker_at(&extra_point, j))
        .collect();
    let half = (witness_period / 2) as i64;
    if marker_positions != [0, half] {
        return Err(Error::construction(format!(
            "extra point carries markers at {marker_positions:?}, expected [0, {half}]"
        )));
    }

    Ok(CompanionPlan {
        seeds,
        core,
        frame,
        repetitions: reps,
        connector,
        rule,
        witness_period,
        extra_point,
        marker_positions,
    })
}

/// A verified companion flip whose fixed-point counts strictly dominate the
/// base flip's.
#[derive(Debug, Clone)]
pub struct MarkerCompanion {
    /// The assembled construction data.
    pub plan: CompanionPlan,
    /// The companion flip itself.
    pub companion: Flip,
    /// Fixed-point counts of the base flip up to the witness period.
    pub base_counts: FVector,
    /// Fixed-point counts of the companion up to the witness period.
    pub companion_counts: FVector,
    /// Coordinates where the asymmetry evidence point differs from its
    /// companion image.
    pub evidence_difference: Vec<i64>,
}

/// Build and fully verify a marker rewrite companion for `flip`, anchored
/// at the star-fixed symbol `f`.
///
/// Verified facts, each a hard error on failure: the companion satisfies
/// the flip axioms; its rule agrees with an independent view-composition
/// evaluation on every window (when tabulation fits the limit); old fixed
/// points transport into companion fixed points via half-band rewrites for
/// all small periods; the extra point is fixed by the companion, moved by
/// the base flip, and untouched by the half-band rewrite at its period;
/// counts dominate entrywise with strict excess at the witness period; and
/// the finite-difference witness still shows finite nonzero difference
/// under the companion.
pub fn marker_companion(
    space: &SftPresentation,
    flip: &Flip,
    f: &Word,
    limits: &SearchLimits,
) -> Result<MarkerCompanion> {
    let plan = companion_plan(space, flip, f, limits)?;
    let companion = Flip::from_theta(plan.rule.clone());

    let report = validate_flip(space, &companion, limits)?;
    if !report.is_valid() {
        return Err(Error::construction("companion fails the flip axioms"));
    }

    // Independent evaluation route: rewrite view over a flip image view,
    // compared against the packaged rule on every window.
    let radius = companion.effective_radius();
    let width = 2 * radius + 1;
    if space.language_count(width)? <= limits.table_block_cap {
        let base_flip = Flip::one_block(plan.rule.base().clone());
        let everywhere = IndexSet::all();
        let mut mismatch: Option<Word> = None;
        space.for_each_block(width, &mut |u| {
            if mismatch.is_some() {
                return;
            }
            let win = WindowCoord {
                symbols: u,
                radius: radius as i64,
            };
            let image = FlipImageView {
                flip: &base_flip,
                inner: &win,
            };
            let view = MarkerRewriteView {
                rule: &plan.rule,
                active: &everywhere,
                inner: &image,
            };
            let direct = plan.rule.apply(u);
            if view.at(0) != direct {
                mismatch = Some(Word::new(u.to_vec()));
            }
        });
        if let Some(u) = mismatch {
            return Err(Error::internal(format!(
                "rule and view evaluation disagree on {}",
                space.alphabet().render(&u),
            )));
        }
    }

    let n_wit = plan.witness_period;
    let base_counts = fvector(space, flip, n_wit)?;
    let companion_counts = fvector(space, &companion, n_wit)?;
    for n in 1..=n_wit {
        if base_counts.count(n) > companion_counts.count(n) {
            return Err(Error::construction(format!(
                "companion loses fixed points at period {n}"
            )));
        }
    }
    if companion_counts.count(n_wit) < base_counts.count(n_wit) + 1 {
        return Err(Error::construction(
            "companion shows no strict excess at the witness period",
        ));
    }

    // Transport of old fixed points through half-band rewrites.
    for n in 1..=limits.clause_horizon.min(n_wit) {
        let band = IndexSet::half_band(n as u64)?;
        for p in fixed_points(space, flip, n)? {
            let q = rewrite_periodic(&plan.rule, &band, &p)?;
            if !space.contains_periodic(&q) {
                return Err(Error::construction(format!(
                    "half-band rewrite leaves the space at period {n}"
                )));
            }
            if apply_flip_periodic(&companion, &q)? != q {
                return Err(Error::construction(format!(
                    "half-band rewrite of a fixed point is not companion-fixed at period {n}"
                )));
            }
        }
    }

    // The extra point: companion-fixed, not base-fixed, half-band inert.
    let z = &plan.extra_point;
    if !space.contains_periodic(z) {
        return Err(Error::construction("extra point leaves the space"));
    }
    if apply_flip_periodic(&companion, z)? != *z {
        return Err(Error::construction("companion does not fix the extra point"));
    }
    if apply_flip_periodic(flip, z)? == *z {
        return Err(Error::construction("base flip also fixes the extra point"));
    }
    let band = IndexSet::half_band(n_wit as u64)?;
    if rewrite_periodic(&plan.rule, &band, z)? != *z {
        return Err(Error::construction(
            "half-band rewrite moves the extra point",
        ));
    }

    // Asymmetry evidence transfers to the companion.
    let evidence = finite_difference_witness(space, flip, f, limits)?;
    let evidence_difference = match a_membership(space, &companion, &evidence.point)? {
        AMembership::In { difference } => difference,
        other => {
            return Err(Error::construction(format!(
                "asymmetry evidence fails under the companion: {other:?}"
            )))
        }
    };

    Ok(MarkerCompanion {
        plan,
        companion,
        base_counts,
        companion_counts,
        evidence_difference,
    })
}

/// Fixed-size window around the origin; panics outside `[-radius, radius]`.
struct WindowCoord<'a> {
    symbols: &'a [Symbol],
    radius: i64,
}

impl<'a> Coord for WindowCoord<'a> {
    fn at(&self, i: i64) -> Symbol {
        let idx = i + self.radius;
        assert!(
            (0..self.symbols.len() as i64).contains(&idx),
            "window read out of range",
        );
        self.symbols[idx as usize]
    }
}

// ---------------------------------------------------------------------------
// Family driver
// ---------------------------------------------------------------------------

/// How a family member was obtained from the input system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MemberOrigin {
    /// The input flip itself.
    Input,
    /// Produced by the asymmetry search (possibly after block passes).
    BlockPass,
    /// A marker rewrite companion.
    MarkerRewrite,
    /// The recoded image of a previous round's companion.
    Recoded,
}

/// One flip in a pairwise non-conjugate family.
#[derive(Debug, Clone)]
pub struct FamilyMember {
    /// How the member was obtained.
    pub origin: MemberOrigin,
    /// Conjugacies applied along the way, input system first.
    pub chain: Vec<ConjugacyDescriptor>,
    /// The system the member's flip lives on.
    pub space: SftPresentation,
    /// The flip itself.
    pub flip: Flip,
    /// Fixed-point counts up to the driver's horizon.
    pub counts: FVector,
}

/// A fixed-point count disagreement separating two family members.
#[derive(Debug, Clone)]
pub struct PairCertificate {
    /// Index of the first member.
    pub left: usize,
    /// Index of the second member.
    pub right: usize,
    /// The count disagreement.
    pub certificate: NonConjugacyCertificate,
}

/// Whether the driver delivered the requested family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Completion {
    /// All requested members found and pairwise separated.
    Complete,
    /// The horizon is too short to separate the listed candidate pairs.
    HorizonInsufficient {
        /// Pairs of member indices that could not be separated.
        pairs: Vec<(usize, usize)>,
    },
    /// A search limit stopped the pipeline; the detail says which.
    CapHalted {
        /// Human-readable description of the halt.
        detail: String,
    },
}

/// Result of the family driver.
#[derive(Debug, Clone)]
pub struct FlipFamily {
    /// The members found, input system first.
    pub members: Vec<FamilyMember>,
    /// Certificates separating every pair of members.
    pub certificates: Vec<PairCertificate>,
    /// Whether the requested count was reached.
    pub completion: Completion,
}

/// Extend counts to `horizon` entries, reusing a prefix already computed.
fn counts_to_horizon(
    space: &SftPresentation,
    flip: &Flip,
    have: &FVector,
    horizon: usize,
) -> Result<FVector> {
    if horizon <= have.horizon() {
        return Ok(have.truncated(horizon));
    }
    let mut counts: Vec<u64> = have.counts().to_vec();
    for n in have.horizon() + 1..=horizon {
        counts.push(fixed_count(space, flip, n)?);
    }
    Ok(FVector::new(counts))
}

/// Build a family of `k` pairwise non-conjugate flips starting from a valid
/// one-block flip on an irreducible infinite space.
///
/// Each round contributes up to three members — the round's input system,
/// the asymmetry-search system, and the marker companion — keeping only
/// those whose count vectors differ from every member already collected.
/// Further rounds recode the companion to a one-block flip and repeat. The
/// driver stops early, with an explicit [`Completion`] report, when a
/// recoding would exceed the alphabet limit or when the horizon cannot
/// separate a candidate that provably separates at a longer period.
pub fn flip_family(
    space: &SftPresentation,
    flip: &Flip,
    k: usize,
    horizon: usize,
    limits: &SearchLimits,
) -> Result<FlipFamily> {
    if k == 0 {
        return Err(Error::domain("family size must be at least 1"));
    }
    if horizon == 0 {
        return Err(Error::domain("horizon must be at least 1"));
    }
    let report = validate_flip(space, flip, limits)?;
    if !report.is_valid() {
        return Err(Error::precondition("input flip fails validation"));
    }

    let mut members: Vec<FamilyMember> = Vec::new();
    let mut completion = Completion::Complete;

    let mut chain_prefix: Vec<ConjugacyDescriptor> = Vec::new();
    let mut cur_space = space.clone();
    let mut cur_flip = flip.clone();
    let mut cur_origin = MemberOrigin::Input;

    'rounds: loop {
        // Candidate 1: the current round's input system.
        let counts = fvector(&cur_space, &cur_flip, horizon)?;
        if members.iter().all(|m| m.counts != counts) {
            members.push(FamilyMember {
                origin: cur_origin,
                chain: chain_prefix.clone(),
                space: cur_space.clone(),
                flip: cur_flip.clone(),
                counts,
            });
        }
        if members.len() >= k {
            break;
        }

        // Candidate 2: the asymmetry-search system.
        let wit = asymmetry_witness(&cur_space, &cur_flip, limits)?;
        let counts = fvector(&wit.space, &wit.flip, horizon)?;
        if members.iter().all(|m| m.counts != counts) {
            let mut chain = chain_prefix.clone();
            chain.extend(wit.chain.iter().cloned());
            members.push(FamilyMember {
                origin: MemberOrigin::BlockPass,
                chain,
                space: wit.space,
                flip: wit.flip,
                counts,
            });
        }
        if members.len() >= k {
            break;
        }

        // Candidate 3: the marker companion.
        let tau = cur_flip
            .as_one_block()
            .expect("round inputs are one-block flips")
            .clone();
        let anchor = match star_fixed_anchor(&cur_space, &tau) {
            Some(w) => w,
            None => {
                completion = Completion::CapHalted {
                    detail: "no star-fixed symbol; the companion construction needs one".to_owned(),
                };
                break;
            }
        };
        let comp = marker_companion(&cur_space, &cur_flip, &anchor, limits)?;
        let counts = counts_to_horizon(&cur_space, &comp.companion, &comp.companion_counts, horizon)?;
        let fresh = members.iter().all(|m| m.counts != counts);
        if fresh {
            members.push(FamilyMember {
                origin: MemberOrigin::MarkerRewrite,
                chain: chain_prefix.clone(),
                space: cur_space.clone(),
                flip: comp.companion.clone(),
                counts,
            });
        } else if horizon < comp.plan.witness_period {
            // The companion provably separates at its witness period, which
            // lies beyond the horizon; report the shortfall rather than
            // silently dropping it.
            completion = Completion::HorizonInsufficient {
                pairs: alloc::vec![(members.len() - 1, members.len())],
            };
            break;
        }
        if members.len() >= k {
            break;
        }

        // Prepare the next round: recode the companion to a one-block flip.
        let radius = comp.companion.effective_radius();
        let projected = cur_space.language_count(2 * radius + 1)?;
        if projected > limits.alphabet_cap as u64 {
            completion = Completion::CapHalted {
                detail: format!(
                    "recoding the companion needs an alphabet of {projected} symbols, over the limit of {}",
                    limits.alphabet_cap,
                ),
            };
            break 'rounds;
        }
        let (next_space, next_flip, desc) = recode_one_block(&cur_space, &comp.companion, limits)?;
        chain_prefix.push(desc);
        cur_space = next_space;
        cur_flip = next_flip;
        cur_origin = MemberOrigin::Recoded;
    }

    let mut certificates = Vec::new();
    let mut unsplit: Vec<(usize, usize)> = Vec::new();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            match certify_nonconjugate(&members[i].counts, &members[j].counts)? {
                Some(certificate) => certificates.push(PairCertificate {
                    left: i,
                    right: j,
                    certificate,
                }),
                None => unsplit.push((i, j)),
            }
        }
    }
    if !unsplit.is_empty() {
        completion = Completion::HorizonInsufficient { pairs: unsplit };
    }

    Ok(FlipFamily {
        members,
        certificates,
        completion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn golden() -> (SftPresentation, Flip) {
        let space = presets::golden_mean();
        let flip = Flip::one_block(presets::identity_involution(&space));
        (space, flip)
    }

    #[test]
    fn seed_blocks_on_the_golden_mean() {
        let (space, _) = golden();
        let limits = SearchLimits::default();
        let f = Word::parse(space.alphabet(), "0").unwrap();
        let seeds = seed_blocks(&space, &f, &limits).unwrap();
        assert_eq!(space.alphabet().render(&seeds.a), "");
        assert_eq!(space.alphabet().render(&seeds.b), "1");
    }

    #[test]
    fn seed_blocks_need_an_infinite_space() {
        let alphabet = crate::Alphabet::new(["0", "1"]).unwrap();
        // Two fixed points only: both symbols frozen.
        let space = SftPresentation::from_forbidden(
            alphabet,
            1,
            [
                Word::new(alloc::vec![Symbol(0), Symbol(1)]),
                Word::new(alloc::vec![Symbol(1), Symbol(0)]),
            ],
        )
        .unwrap();
        let f = Word::new(alloc::vec![Symbol(0)]);
        assert!(seed_blocks(&space, &f, &SearchLimits::default()).is_err());
    }

    #[test]
    fn chain_detection_matches_explicit_words() {
        let a = Word::new(alloc::vec![Symbol(0)]);
        let f = Word::new(alloc::vec![Symbol(1)]);
        // (af)^2 a = 0 1 0 1 0
        let chain = Word::new(alloc::vec![Symbol(0), Symbol(1), Symbol(0), Symbol(1), Symbol(0)]);
        assert!(is_anchor_chain(&chain, &a, &f));
        let not_chain = Word::new(alloc::vec![Symbol(0), Symbol(1), Symbol(1)]);
        assert!(!is_anchor_chain(&not_chain, &a, &f));
        // empty a: chains are f^n... with a = empty, (af)^n a = f^n
        let empty = Word::new(Vec::new());
        assert!(is_anchor_chain(&empty, &empty, &f));
        assert!(is_anchor_chain(&Word::new(alloc::vec![Symbol(1)]), &empty, &f));
        assert!(!is_anchor_chain(&Word::new(alloc::vec![Symbol(0)]), &empty, &f));
    }

    #[test]
    fn difference_witness_on_the_golden_mean() {
        let (space, flip) = golden();
        let limits = SearchLimits::default();
        let f = Word::parse(space.alphabet(), "0").unwrap();
        let wit = finite_difference_witness(&space, &flip, &f, &limits).unwrap();
        assert_eq!(wit.repetitions, 6);
        assert_eq!(wit.half_width, 8);
        assert_eq!(
            space.alphabet().render(&wit.pattern),
            "00101000000000000"
        );
        assert_eq!(wit.difference, alloc::vec![-6, -4, 4, 6]);
    }

    #[test]
    fn asymmetry_witness_on_the_golden_mean_delegates_to_two_blocks() {
        let (space, flip) = golden();
        let limits = SearchLimits::default();
        let wit = asymmetry_witness(&space, &flip, &limits).unwrap();
        assert_eq!(wit.branch, WitnessBranch::ShiftFlip);
        assert_eq!(space.alphabet().render(&wit.anchor), "0");
        assert!(wit.bridge.is_empty());
        assert!(wit.probe.is_empty());
        assert_eq!(wit.chain, alloc::vec![ConjugacyDescriptor::HigherBlock { n: 2 }]);
        assert_eq!(wit.space.alphabet().len(), 3);
        assert_eq!(wit.difference, alloc::vec![-9, -8, -6, -5, 5, 6, 8, 9]);
    }

    #[test]
    fn asymmetry_witness_direct_branch_on_the_full_shift() {
        // Binary full shift with the exchange flip: the probe between "1"
        // (the star of "0") and "0" is empty, so the even symmetric branch
        // again delegates; but the exchange has no fixed symbol, so anchor
        // selection falls back and the two-block pass must supply one.
        let space = presets::full_shift(2).unwrap();
        let flip = Flip::one_block(presets::binary_exchange(&space));
        let limits = SearchLimits::default();
        let wit = asymmetry_witness(&space, &flip, &limits).unwrap();
        assert!(!wit.difference.is_empty());
        let member = a_membership(&wit.space, &wit.flip, &wit.point).unwrap();
        assert!(member.is_in());
    }

    #[test]
    fn companion_plan_matches_hand_checked_values() {
        let (space, flip) = golden();
        let limits = SearchLimits::default();
        let f = Word::parse(space.alphabet(), "0").unwrap();
        let plan = companion_plan(&space, &flip, &f, &limits).unwrap();
        let alphabet = space.alphabet();

        assert_eq!(alphabet.render(&plan.core), "001");
        assert_eq!(plan.repetitions, 8);
        assert_eq!(alphabet.render(&plan.frame), "0100000000");
        assert!(plan.connector.is_empty());
        assert_eq!(plan.rule.alpha(), 1);
        assert_eq!(plan.rule.beta(), 11);
        assert_eq!(plan.witness_period, 46);
        assert_eq!(plan.marker_positions, alloc::vec![0, 23]);
        assert_eq!(
            alphabet.render(plan.rule.marker_plus()),
            "00000000100010100000000"
        );
        assert_eq!(
            alphabet.render(plan.rule.marker_minus()),
            "00000000101000100000000"
        );
    }

    #[test]
    fn extra_point_is_admissible_and_core_phased() {
        let (space, flip) = golden();
        let limits = SearchLimits::default();
        let f = Word::parse(space.alphabet(), "0").unwrap();
        let plan = companion_plan(&space, &flip, &f, &limits).unwrap();
        let z = &plan.extra_point;
        assert!(space.contains_periodic(z));
        // The core sits on [-alpha, alpha].
        let alpha = plan.rule.alpha() as i64;
        for (t, &s) in plan.core.iter().enumerate() {
            assert_eq!(z.at(t as i64 - alpha), s);
        }
    }

    #[test]
    fn rewrite_periodic_is_involutive_and_respects_the_active_set() {
        let (space, flip) = golden();
        let limits = SearchLimits::default();
        let f = Word::parse(space.alphabet(), "0").unwrap();
        let plan = companion_plan(&space, &flip, &f, &limits).unwrap();
        let z = &plan.extra_point;

        let everywhere = IndexSet::all();
        let once = rewrite_periodic(&plan.rule, &everywhere, z).unwrap();
        assert_ne!(&once, z);
        assert!(space.contains_periodic(&once));
        let twice = rewrite_periodic(&plan.rule, &everywhere, &once).unwrap();
        assert_eq!(&twice, z);

        let nothing = IndexSet::empty();
        assert_eq!(&rewrite_periodic(&plan.rule, &nothing, z).unwrap(), z);

        let band = IndexSet::half_band(plan.witness_period as u64).unwrap();
        assert_eq!(&rewrite_periodic(&plan.rule, &band, z).unwrap(), z);
    }

    #[test]
    fn structural_certificate_covers_the_companion() {
        let (space, flip) = golden();
        let limits = SearchLimits::default();
        let f = Word::parse(space.alphabet(), "0").unwrap();
        let plan = companion_plan(&space, &flip, &f, &limits).unwrap();
        validate_theta_structural(&space, &plan.rule, &limits).unwrap();
    }

    #[test]
    fn overlapping_marker_windows_are_refuted() {
        let w1 = Word::new(alloc::vec![Symbol(0), Symbol(1), Symbol(0)]);
        let w2 = Word::new(alloc::vec![Symbol(0), Symbol(1), Symbol(0)]);
        // offset 1: w1[1..] = "10" vs w2[..2] = "01" — inconsistent.
        assert!(overlap_word(&w1, &w2, 1).is_none());
        // offset 2: w1[2..] = "0" vs w2[..1] = "0" — consistent splice.
        let spliced = overlap_word(&w1, &w2, 2).unwrap();
        assert_eq!(
            spliced,
            Word::new(alloc::vec![Symbol(0), Symbol(1), Symbol(0), Symbol(1), Symbol(0)])
        );
        // offset 3 = full length: plain concatenation.
        let stacked = overlap_word(&w1, &w2, 3).unwrap();
        assert_eq!(stacked.len(), 6);
    }

    #[test]
    fn family_of_two_on_the_golden_mean() {
        let (space, flip) = golden();
        let limits = SearchLimits::default();
        let family = flip_family(&space, &flip, 2, 10, &limits).unwrap();
        assert_eq!(family.members.len(), 2);
        assert_eq!(family.completion, Completion::Complete);
        assert_eq!(family.certificates.len(), 1);
        let cert = &family.certificates[0].certificate;
        assert_eq!(cert.n, 2);
        assert_eq!(cert.left_count, 3);
        assert_eq!(cert.right_count, 1);
        assert_eq!(family.members[0].origin, MemberOrigin::Input);
        assert_eq!(family.members[1].origin, MemberOrigin::BlockPass);
    }

    #[test]
    fn family_size_one_is_immediate() {
        let (space, flip) = golden();
        let family = flip_family(&space, &flip, 1, 4, &SearchLimits::default()).unwrap();
        assert_eq!(family.members.len(), 1);
        assert!(family.certificates.is_empty());
        assert_eq!(family.completion, Completion::Complete);
    }

    #[test]
    fn family_rejects_invalid_flips() {
        let space = presets::golden_mean();
        let flip = Flip::one_block(presets::binary_exchange(&space));
        assert!(flip_family(&space, &flip, 2, 4, &SearchLimits::default()).is_err());
    }
}
