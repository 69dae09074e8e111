use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;
use crate::Result;

/// Interned symbol: an index into its [`Alphabet`].
///
/// Symbol order (and hence every lexicographic order in the crate) is the
/// declaration order of the alphabet, not the textual order of the names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u16);

impl Symbol {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite ordered alphabet with unique, nonempty symbol names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    index: BTreeMap<String, Symbol>,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(|s| s.as_ref().to_string()).collect();
        if names.is_empty() {
            return Err(Error::domain("alphabet must be nonempty"));
        }
        if names.len() > u16::MAX as usize {
            return Err(Error::domain("alphabet too large"));
        }
        let mut index = BTreeMap::new();
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::domain("symbol names must be nonempty"));
            }
            if index.insert(name.clone(), Symbol(i as u16)).is_some() {
                return Err(Error::domain(alloc::format!(
                    "duplicate symbol name {name:?}"
                )));
            }
        }
        Ok(Alphabet { names, index })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.names.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Look a symbol up by name.
    pub fn get(&self, name: &str) -> Option<Symbol> {
        self.index.get(name).copied()
    }

    /// Like [`Alphabet::get`] but with a descriptive error.
    pub fn require(&self, name: &str) -> Result<Symbol> {
        self.get(name)
            .ok_or_else(|| Error::domain(alloc::format!("unknown symbol {name:?}")))
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.names[s.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// All symbols in declaration order.
    pub fn symbols(&self) -> impl DoubleEndedIterator<Item = Symbol> + Clone + '_ {
        (0..self.names.len() as u16).map(Symbol)
    }

    pub fn contains(&self, s: Symbol) -> bool {
        s.index() < self.names.len()
    }

    /// Render a block of symbols using this alphabet's names.  Single-char
    /// names concatenate bare; longer names are bracketed.
    pub fn render(&self, block: &[Symbol]) -> String {
        let mut out = String::new();
        for &s in block {
            let name = self.name(s);
            if name.chars().count() == 1 {
                out.push_str(name);
            } else {
                out.push('[');
                out.push_str(name);
                out.push(']');
            }
        }
        out
    }
}

/// An involution of an alphabet: a symbol permutation `tau` with
/// `tau(tau(a)) = a` for every symbol.
#[derive(Clone, PartialEq, Eq)]
pub struct SymbolInvolution {
    map: Vec<Symbol>,
}

impl SymbolInvolution {
    pub fn identity(alphabet: &Alphabet) -> Self {
        SymbolInvolution {
            map: alphabet.symbols().collect(),
        }
    }

    /// Build from an explicit image vector (position `i` holds `tau(i)`).
    pub fn new(alphabet: &Alphabet, map: Vec<Symbol>) -> Result<Self> {
        if map.len() != alphabet.len() {
            return Err(Error::domain("involution map must cover the alphabet"));
        }
        for (i, &s) in map.iter().enumerate() {
            if !alphabet.contains(s) {
                return Err(Error::domain("involution maps outside the alphabet"));
            }
            if map[s.index()] != Symbol(i as u16) {
                return Err(Error::domain(alloc::format!(
                    "map is not an involution at symbol {:?}",
                    alphabet.name(Symbol(i as u16))
                )));
            }
        }
        Ok(SymbolInvolution { map })
    }

    /// Build from a full name-to-name mapping.
    pub fn from_names<'a>(
        alphabet: &Alphabet,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self> {
        let mut map: Vec<Option<Symbol>> = alloc::vec![None; alphabet.len()];
        for (from, to) in pairs {
            let from = alphabet.require(from)?;
            let to = alphabet.require(to)?;
            if map[from.index()].replace(to).is_some() {
                return Err(Error::domain(alloc::format!(
                    "symbol {:?} mapped twice",
                    alphabet.name(from)
                )));
            }
        }
        let map: Vec<Symbol> = map
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                s.ok_or_else(|| {
                    Error::domain(alloc::format!(
                        "symbol {:?} has no image",
                        alphabet.name(Symbol(i as u16))
                    ))
                })
            })
            .collect::<Result<_>>()?;
        SymbolInvolution::new(alphabet, map)
    }

    /// The involution that swaps two symbols and fixes everything else.
    pub fn swap(alphabet: &Alphabet, a: Symbol, b: Symbol) -> Result<Self> {
        if !alphabet.contains(a) || !alphabet.contains(b) {
            return Err(Error::domain("swap outside the alphabet"));
        }
        let mut map: Vec<Symbol> = alphabet.symbols().collect();
        map.swap(a.index(), b.index());
        Ok(SymbolInvolution { map })
    }

    #[inline]
    pub fn apply(&self, s: Symbol) -> Symbol {
        self.map[s.index()]
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &s)| s.index() == i)
    }

    pub fn fixes(&self, s: Symbol) -> bool {
        self.apply(s) == s
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Image vector, position `i` holds `tau(i)`.
    pub fn image_vec(&self) -> &[Symbol] {
        &self.map
    }
}

impl fmt::Debug for SymbolInvolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.map.iter().map(|s| s.0))
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_interns_in_declaration_order() {
        let a = Alphabet::new(["b", "a", "c"]).unwrap();
        assert_eq!(a.get("b"), Some(Symbol(0)));
        assert_eq!(a.get("a"), Some(Symbol(1)));
        assert_eq!(a.get("c"), Some(Symbol(2)));
        assert_eq!(a.name(Symbol(2)), "c");
        assert!(a.get("d").is_none());
    }

    #[test]
    fn alphabet_rejects_bad_input() {
        assert!(Alphabet::new(core::iter::empty::<&str>()).is_err());
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(["a", ""]).is_err());
    }

    #[test]
    fn involution_roundtrips() {
        let a = Alphabet::new(["0", "1", "2"]).unwrap();
        let tau = SymbolInvolution::from_names(&a, [("0", "1"), ("1", "0"), ("2", "2")]).unwrap();
        assert_eq!(tau.apply(Symbol(0)), Symbol(1));
        assert_eq!(tau.apply(Symbol(1)), Symbol(0));
        assert!(tau.fixes(Symbol(2)));
        assert!(!tau.is_identity());
    }

    #[test]
    fn involution_rejects_non_involutions() {
        let a = Alphabet::new(["0", "1", "2"]).unwrap();
        // 0 -> 1 -> 2 -> 0 is a 3-cycle, not an involution.
        let cyc = SymbolInvolution::from_names(&a, [("0", "1"), ("1", "2"), ("2", "0")]);
        assert!(cyc.is_err());
    }

    #[test]
    fn render_brackets_long_names() {
        let a = Alphabet::new(["0", "ab"]).unwrap();
        assert_eq!(a.render(&[Symbol(0), Symbol(1), Symbol(0)]), "0[ab]0");
    }
}
