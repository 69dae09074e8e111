//! Conjugacies that transport a flip from one presentation to another.
//!
//! Each routine returns the rebuilt space, the transported flip, and a
//! descriptor recording which standard conjugacy was applied. All of them
//! run internal consistency checks (block-count identities, involution
//! closure) and refuse to return a result that fails one.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::alphabet::{Alphabet, Symbol, SymbolInvolution};
use crate::error::Error;
use crate::flip::Flip;
use crate::limits::SearchLimits;
use crate::sft::SftPresentation;
use crate::word::Word;
use crate::Result;

/// Which standard conjugacy a construction step applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConjugacyDescriptor {
    /// Conjugation by a power of the shift (carries `sigma^a phi` to
    /// `sigma^{a + 2k} phi`).
    ShiftPower { k: i64 },
    /// Passage to the sliding presentation over length-`n` blocks.
    HigherBlock { n: usize },
    /// The pairing recode that turns a flip of window radius `radius` into
    /// a one-block flip on a new space.
    PairRecode { radius: usize },
}

/// Recode `(space, flip)` so the flip becomes one-block.
///
/// New symbols are the realized pairs `(x_i, phi(x)_{-i})`; reading the
/// pair at every coordinate is a conjugacy of the space onto its image, and
/// it carries `phi` to the flip that swaps each pair's components (and
/// reverses coordinates). The image is a step `m + 2R` space, `R` the
/// centered window radius of `phi`.
///
/// Always verified before returning: the pair alphabet is closed under the
/// swap, and the block-count identity
/// `|B_n(image)| = |pair images of B_{n+2R}(space)|` holds for all
/// `n <= step + 3`.
pub fn recode_one_block(
    space: &SftPresentation,
    flip: &Flip,
    limits: &SearchLimits,
) -> Result<(SftPresentation, Flip, ConjugacyDescriptor)> {
    let m = space.step();
    let big_r = flip.effective_radius();
    let width = 2 * big_r + 1;
    let k_new = m + 2 * big_r;

    let need = space.language_count(k_new + 1 + 2 * big_r)?;
    if need > limits.table_block_cap {
        return Err(Error::search_bound(format!(
            "recoding needs {need} blocks of length {}, over the cap",
            k_new + 1 + 2 * big_r
        )));
    }

    let pair_of = |u: &[Symbol]| -> Result<(Symbol, Symbol)> {
        let mirrored = flip.apply_centered(u).ok_or_else(|| {
            Error::domain("flip rule is undefined on a window during recoding")
        })?;
        Ok((u[big_r], mirrored))
    };

    // Realized pair symbols, in (first, second) order.
    let mut pairs: BTreeSet<(Symbol, Symbol)> = BTreeSet::new();
    let mut err: Option<Error> = None;
    space.for_each_block(width, &mut |u: &[Symbol]| {
        if err.is_some() {
            return;
        }
        match pair_of(u) {
            Ok(p) => {
                pairs.insert(p);
            }
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    let pair_list: Vec<(Symbol, Symbol)> = pairs.iter().copied().collect();
    let pair_index: BTreeMap<(Symbol, Symbol), Symbol> = pair_list
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, Symbol(i as u16)))
        .collect();
    let a = space.alphabet();
    let names: Vec<String> = pair_list
        .iter()
        .map(|&(x, y)| format!("({},{})", a.name(x), a.name(y)))
        .collect();
    let alphabet = Alphabet::new(names)?;

    // Swap closure: the mirrored pair of some block realizes (b, a) for
    // every realized (a, b); this is what makes the swap an involution of
    // the new alphabet.
    let mut swap_map = Vec::with_capacity(pair_list.len());
    for &(x, y) in &pair_list {
        match pair_index.get(&(y, x)) {
            Some(&s) => swap_map.push(s),
            None => {
                return Err(Error::construction(format!(
                    "pair alphabet is not closed under the swap: ({},{}) has no partner",
                    a.name(x),
                    a.name(y)
                )))
            }
        }
    }
    let tau = SymbolInvolution::new(&alphabet, swap_map)?;

    // Image blocks of length n are windows of pair symbols read along
    // blocks of length n + 2R.
    let image_words = |n: usize| -> Result<BTreeSet<Word>> {
        let mut out = BTreeSet::new();
        let mut err: Option<Error> = None;
        space.for_each_block(n + 2 * big_r, &mut |u: &[Symbol]| {
            if err.is_some() {
                return;
            }
            let mut w = Vec::with_capacity(n);
            for j in 0..n {
                match pair_of(&u[j..j + width]) {
                    Ok(p) => w.push(pair_index[&p]),
                    Err(e) => {
                        err = Some(e);
                        return;
                    }
                }
            }
            out.insert(Word::new(w));
        });
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    };

    let blocks = image_words(k_new + 1)?;
    let image = SftPresentation::from_allowed_blocks(alphabet, k_new, blocks)?;

    for n in 0..=k_new + 3 {
        let direct = image.language_count(n)?;
        let via_source = image_words(n)?.len() as u64;
        if direct != via_source {
            return Err(Error::construction(format!(
                "block-count identity fails at length {n}: {direct} vs {via_source}"
            )));
        }
    }

    Ok((
        image,
        Flip::one_block(tau),
        ConjugacyDescriptor::PairRecode { radius: big_r },
    ))
}

/// Pass to the presentation over length-`n` blocks, transporting a
/// one-block flip.
///
/// New symbols are the admissible `n`-blocks; the transported flip is again
/// one-block, sending a block symbol to its reversed-and-involuted block.
/// In the original coordinates that flip acts as `sigma^{1-n} . phi`, so
/// for odd `n` the result is conjugate to `(space, phi)` itself and for
/// even `n` to `(space, sigma . phi)` — shift offsets of even difference
/// are conjugate via [`even_shift_conjugacy`].
///
/// Verified before returning: the block alphabet is closed under
/// reverse-and-involute, and `|B_k(image)| = |B_{k+n-1}(space)|` for all
/// `k <= step + 3`.
pub fn higher_block(
    space: &SftPresentation,
    flip: &Flip,
    n: usize,
    limits: &SearchLimits,
) -> Result<(SftPresentation, Flip, ConjugacyDescriptor)> {
    if n == 0 {
        return Err(Error::domain("block length must be at least 1"));
    }
    let tau = flip.as_one_block().ok_or_else(|| {
        Error::precondition("higher-block transport requires a one-block flip")
    })?;
    let m = space.step();
    let k_new = if m + 1 > n { m + 1 - n } else { 1 };

    let need = space.language_count(n + k_new)?;
    if need > limits.table_block_cap {
        return Err(Error::search_bound(format!(
            "higher-block pass needs {need} blocks of length {}, over the cap",
            n + k_new
        )));
    }

    let base = space.alphabet();
    let block_list: Vec<Word> = space.language(n);
    let block_index: BTreeMap<Word, Symbol> = block_list
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), Symbol(i as u16)))
        .collect();
    let single_char = base.names().iter().all(|s| s.chars().count() == 1);
    let names: Vec<String> = block_list
        .iter()
        .map(|w| {
            if single_char {
                w.render(base)
            } else {
                let parts: Vec<&str> = w.symbols().iter().map(|&s| base.name(s)).collect();
                parts.join(",")
            }
        })
        .collect();
    let alphabet = Alphabet::new(names)?;

    let mut star_map = Vec::with_capacity(block_list.len());
    for w in &block_list {
        let image = w.star(tau);
        match block_index.get(&image) {
            Some(&s) => star_map.push(s),
            None => {
                return Err(Error::construction(format!(
                    "block alphabet is not closed under the flip: {} maps out",
                    w.render(base)
                )))
            }
        }
    }
    let tau_blocks = SymbolInvolution::new(&alphabet, star_map)?;

    let mut blocks: BTreeSet<Word> = BTreeSet::new();
    space.for_each_block(n + k_new, &mut |u: &[Symbol]| {
        let w: Vec<Symbol> = (0..=k_new)
            .map(|j| block_index[&Word::new(u[j..j + n].to_vec())])
            .collect();
        blocks.insert(Word::new(w));
    });
    let image = SftPresentation::from_allowed_blocks(alphabet, k_new, blocks)?;

    for k in 0..=k_new + 3 {
        let direct = image.language_count(k)?;
        let expect = space.language_count(k + n - 1)?;
        // Length 0 on both sides is the empty word.
        let expect = if k == 0 { 1 } else { expect };
        if direct != expect {
            return Err(Error::construction(format!(
                "block-count identity fails at length {k}: {direct} vs {expect}"
            )));
        }
    }

    Ok((
        image,
        Flip::one_block(tau_blocks),
        ConjugacyDescriptor::HigherBlock { n },
    ))
}

/// Certify that two shift-composites of one rule are conjugate.
///
/// For `sigma^a phi` and `sigma^b phi` with `b - a = 2k`, conjugating by
/// `sigma^k` carries one to the other. Odd differences are rejected: no
/// shift power can bridge them, and in general nothing does. The
/// intertwining is verified on every fixed set up to `horizon`.
pub fn even_shift_conjugacy(
    space: &SftPresentation,
    from: &Flip,
    to: &Flip,
    horizon: usize,
) -> Result<ConjugacyDescriptor> {
    if from.rule() != to.rule() || from.radius() != to.radius() {
        return Err(Error::precondition(
            "shift-power conjugacy applies to composites of a single rule",
        ));
    }
    let delta = to.shift() - from.shift();
    if delta.rem_euclid(2) != 0 {
        return Err(Error::precondition(
            "shift offsets differ by an odd amount; no shift power conjugates them",
        ));
    }
    let k = delta / 2;
    for n in 1..=horizon {
        let mut lhs: Vec<_> = crate::invariants::fixed_points(space, from, n)?
            .into_iter()
            .map(|p| p.shifted(k))
            .collect();
        lhs.sort();
        let rhs = crate::invariants::fixed_points(space, to, n)?;
        if lhs != rhs {
            return Err(Error::internal(format!(
                "shift-power intertwining fails on the period-{n} fixed set"
            )));
        }
    }
    Ok(ConjugacyDescriptor::ShiftPower { k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::fvector;
    use crate::presets;

    fn limits() -> SearchLimits {
        SearchLimits::default()
    }

    #[test]
    fn radius_zero_recode_reproduces_the_golden_mean_shift() {
        let space = presets::golden_mean();
        let rho = Flip::one_block(presets::identity_involution(&space));
        let (image, psi, desc) = recode_one_block(&space, &rho, &limits()).unwrap();
        assert_eq!(desc, ConjugacyDescriptor::PairRecode { radius: 0 });
        assert_eq!(image.step(), 1);
        assert_eq!(image.alphabet().len(), 2);
        assert_eq!(image.alphabet().names()[0], "(0,0)");
        assert!(psi.as_one_block().unwrap().is_identity());
        assert_eq!(
            fvector(&image, &psi, 10).unwrap(),
            fvector(&space, &rho, 10).unwrap()
        );
    }

    #[test]
    fn recoding_a_shifted_flip_preserves_the_counts() {
        let space = presets::golden_mean();
        let shifted = Flip::one_block(presets::identity_involution(&space)).compose_shift(1);
        let (image, psi, desc) = recode_one_block(&space, &shifted, &limits()).unwrap();
        assert_eq!(desc, ConjugacyDescriptor::PairRecode { radius: 1 });
        assert_eq!(image.step(), 3);
        assert_eq!(
            fvector(&image, &psi, 8).unwrap(),
            fvector(&space, &shifted, 8).unwrap()
        );
    }

    #[test]
    fn two_block_pass_matches_the_expected_presentation() {
        let space = presets::golden_mean();
        let rho = Flip::one_block(presets::identity_involution(&space));
        let (image, phi2, desc) = higher_block(&space, &rho, 2, &limits()).unwrap();
        assert_eq!(desc, ConjugacyDescriptor::HigherBlock { n: 2 });
        assert_eq!(image.step(), 1);
        let names: Vec<&str> = image.alphabet().names().iter().map(|s| s.as_str()).collect();
        assert_eq!(names, ["00", "01", "10"]);
        assert_eq!(image.allowed_count(), 5);
        let tau = phi2.as_one_block().unwrap();
        let a = image.alphabet();
        assert!(tau.fixes(a.require("00").unwrap()));
        assert_eq!(tau.apply(a.require("01").unwrap()), a.require("10").unwrap());
        // Block counts line up shifted by one.
        for k in 1..=8 {
            assert_eq!(
                image.language_count(k).unwrap(),
                space.language_count(k + 1).unwrap()
            );
        }
        // Even block length lands at the shift-composed flip.
        let s_rho = Flip::one_block(presets::identity_involution(&space)).compose_shift(1);
        assert_eq!(
            fvector(&image, &phi2, 10).unwrap(),
            fvector(&space, &s_rho, 10).unwrap()
        );
    }

    #[test]
    fn odd_block_pass_preserves_the_counts_directly() {
        let space = presets::golden_mean();
        let rho = Flip::one_block(presets::identity_involution(&space));
        let (image, phi3, _) = higher_block(&space, &rho, 3, &limits()).unwrap();
        assert_eq!(
            fvector(&image, &phi3, 10).unwrap(),
            fvector(&space, &rho, 10).unwrap()
        );
    }

    #[test]
    fn one_block_pass_is_the_identity() {
        let space = presets::golden_mean();
        let rho = Flip::one_block(presets::identity_involution(&space));
        let (image, psi, _) = higher_block(&space, &rho, 1, &limits()).unwrap();
        assert_eq!(image.alphabet().names(), space.alphabet().names());
        assert_eq!(image.step(), space.step());
        assert_eq!(image.allowed_count(), space.allowed_count());
        assert!(psi.as_one_block().unwrap().is_identity());
    }

    #[test]
    fn higher_block_requires_a_one_block_flip() {
        let space = presets::golden_mean();
        let shifted = Flip::one_block(presets::identity_involution(&space)).compose_shift(1);
        assert!(higher_block(&space, &shifted, 2, &limits()).is_err());
    }

    #[test]
    fn even_shift_offsets_are_conjugate_and_odd_ones_are_rejected() {
        let space = presets::golden_mean();
        let rho = Flip::one_block(presets::identity_involution(&space));
        let far = rho.compose_shift(2);
        let desc = even_shift_conjugacy(&space, &rho, &far, 8).unwrap();
        assert_eq!(desc, ConjugacyDescriptor::ShiftPower { k: 1 });
        let near = rho.compose_shift(1);
        assert!(even_shift_conjugacy(&space, &rho, &near, 8).is_err());
    }

    #[test]
    fn caps_abort_the_recode_cleanly() {
        let space = presets::golden_mean();
        let rho = Flip::one_block(presets::identity_involution(&space));
        let mut tiny = limits();
        tiny.table_block_cap = 1;
        assert!(recode_one_block(&space, &rho, &tiny).is_err());
    }
}
