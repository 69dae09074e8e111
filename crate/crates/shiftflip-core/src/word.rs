use alloc::vec::Vec;
use core::fmt;
use core::ops::Deref;

use crate::alphabet::{Alphabet, Symbol, SymbolInvolution};
use crate::Result;

/// A finite word over an interned alphabet.
///
/// `Word` orders first by length, then lexicographically by symbol ids; that is
/// exactly the "shortest, then least" order used by every search in the crate.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Parse a word from symbol names.
    pub fn from_names<S: AsRef<str>>(
        alphabet: &Alphabet,
        names: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        names
            .into_iter()
            .map(|n| alphabet.require(n.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    /// Parse from a string of single-character symbol names.
    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Self> {
        let mut buf = [0u8; 4];
        text.chars()
            .map(|c| alphabet.require(c.encode_utf8(&mut buf)))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    #[inline]
    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn repeat(&self, times: usize) -> Word {
        let mut v = Vec::with_capacity(self.len() * times);
        for _ in 0..times {
            v.extend_from_slice(&self.0);
        }
        Word(v)
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn reversed(&self) -> Word {
        let mut v = self.0.clone();
        v.reverse();
        Word(v)
    }

    /// The star of a word: reverse it and apply the symbol involution to each
    /// letter.  Stars compose contravariantly: `(uv)* = v* u*`, and star is an
    /// involution on words.
    pub fn star(&self, tau: &SymbolInvolution) -> Word {
        Word(self.0.iter().rev().map(|&s| tau.apply(s)).collect())
    }

    /// Is the word equal to its own star?
    pub fn is_star_symmetric(&self, tau: &SymbolInvolution) -> bool {
        let n = self.0.len();
        (0..n).all(|i| self.0[i] == tau.apply(self.0[n - 1 - i]))
    }

    pub fn contains_subword(&self, needle: &[Symbol]) -> bool {
        if needle.is_empty() {
            return true;
        }
        self.0.windows(needle.len()).any(|w| w == needle)
    }

    pub fn render(&self, alphabet: &Alphabet) -> alloc::string::String {
        alphabet.render(&self.0)
    }

    pub fn into_vec(self) -> Vec<Symbol> {
        self.0
    }
}

/// Star of a raw symbol slice (reverse + involution).
pub fn star_block(block: &[Symbol], tau: &SymbolInvolution) -> Vec<Symbol> {
    block.iter().rev().map(|&s| tau.apply(s)).collect()
}

impl Deref for Word {
    type Target = [Symbol];

    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl FromIterator<Symbol> for Word {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter().map(|s| s.0)).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Alphabet, SymbolInvolution) {
        let a = Alphabet::new(["0", "1"]).unwrap();
        let tau = SymbolInvolution::from_names(&a, [("0", "1"), ("1", "0")]).unwrap();
        (a, tau)
    }

    #[test]
    fn parse_and_render() {
        let (a, _) = setup();
        let w = Word::parse(&a, "0110").unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(w.render(&a), "0110");
        assert!(Word::parse(&a, "012").is_err());
    }

    #[test]
    fn star_reverses_and_exchanges() {
        let (a, tau) = setup();
        let w = Word::parse(&a, "001").unwrap();
        assert_eq!(w.star(&tau).render(&a), "011");
        // Star twice is the identity.
        assert_eq!(w.star(&tau).star(&tau), w);
    }

    #[test]
    fn star_is_antimultiplicative() {
        let (a, tau) = setup();
        let u = Word::parse(&a, "01").unwrap();
        let v = Word::parse(&a, "110").unwrap();
        assert_eq!(u.concat(&v).star(&tau), v.star(&tau).concat(&u.star(&tau)));
    }

    #[test]
    fn shortlex_order() {
        let (a, _) = setup();
        let long = Word::parse(&a, "00").unwrap();
        let short = Word::parse(&a, "1").unwrap();
        assert!(short < long, "length dominates the order");
        assert!(Word::parse(&a, "01").unwrap() < Word::parse(&a, "10").unwrap());
        assert!(Word::empty() < short);
    }

    #[test]
    fn symmetric_words() {
        let (a, tau) = setup();
        assert!(Word::parse(&a, "01").unwrap().is_star_symmetric(&tau));
        assert!(Word::parse(&a, "0011").unwrap().is_star_symmetric(&tau));
        assert!(!Word::parse(&a, "00").unwrap().is_star_symmetric(&tau));
        assert!(Word::empty().is_star_symmetric(&tau));
    }
}
