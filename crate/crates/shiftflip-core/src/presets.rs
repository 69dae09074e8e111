//! Ready-made example spaces used by tests and the command line.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::alphabet::{Alphabet, SymbolInvolution};
use crate::sft::SftPresentation;
use crate::word::Word;
use crate::Result;

/// The golden mean shift: binary, one-step, no adjacent ones.
pub fn golden_mean() -> SftPresentation {
    let a = Alphabet::new(["0", "1"]).unwrap();
    let f = Word::parse(&a, "11").unwrap();
    SftPresentation::from_forbidden(a, 1, [f]).unwrap()
}

/// The full shift on `k` symbols named `0..k-1`.
pub fn full_shift(k: usize) -> Result<SftPresentation> {
    let names: Vec<_> = (0..k).map(|i| i.to_string()).collect();
    let a = Alphabet::new(names)?;
    SftPresentation::from_forbidden(a, 0, [])
}

/// A two-step example: binary, no three consecutive ones.
pub fn no_triple_one() -> SftPresentation {
    let a = Alphabet::new(["0", "1"]).unwrap();
    let f = Word::parse(&a, "111").unwrap();
    SftPresentation::from_forbidden(a, 2, [f]).unwrap()
}

/// The symbol exchange 0 <-> 1 on a binary alphabet.
pub fn binary_exchange(space: &SftPresentation) -> SymbolInvolution {
    SymbolInvolution::from_names(space.alphabet(), [("0", "1"), ("1", "0")]).unwrap()
}

/// The identity involution on the space's alphabet.
pub fn identity_involution(space: &SftPresentation) -> SymbolInvolution {
    SymbolInvolution::identity(space.alphabet())
}
