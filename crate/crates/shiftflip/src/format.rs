//! File formats: JSON presentations of shift spaces and flips, conversion
//! to and from the core types, and provenance stamps for outputs.
//!
//! Words serialize as arrays of symbol names; involutions as objects
//! mapping symbol to symbol. Reading and re-writing a file goes through
//! ordered maps, so output is deterministic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use shiftflip_core::conjugacy::ConjugacyDescriptor;
use shiftflip_core::flip::{Flip, LocalRule, RuleTable, ThetaRule};
use shiftflip_core::invariants::FVector;
use shiftflip_core::sft::SftPresentation;
use shiftflip_core::word::Word;
use shiftflip_core::{Alphabet, Error, SymbolInvolution};

/// A shift-space presentation file: alphabet, step, forbidden blocks of
/// length `step + 1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceFile {
    pub alphabet: Vec<String>,
    pub step: usize,
    pub forbidden: Vec<Vec<String>>,
}

impl SpaceFile {
    /// Build the validated presentation this file describes.
    pub fn to_space(&self) -> Result<SftPresentation, Error> {
        let alphabet = Alphabet::new(self.alphabet.iter().map(|s| s.as_str()))?;
        let mut forbidden = Vec::with_capacity(self.forbidden.len());
        for block in &self.forbidden {
            forbidden.push(parse_word(&alphabet, block)?);
        }
        SftPresentation::from_forbidden(alphabet, self.step, forbidden)
    }

    /// Describe a presentation as a file: the forbidden list is the
    /// complement of the allowed blocks, in lexicographic order.
    pub fn from_space(space: &SftPresentation) -> SpaceFile {
        let alphabet = space.alphabet();
        let width = space.step() + 1;
        let mut forbidden = Vec::new();
        let mut block = vec![shiftflip_core::Symbol(0); width];
        'all: loop {
            if !space.allows(&block) {
                forbidden.push(render_word(alphabet, &block));
            }
            let mut pos = width;
            loop {
                if pos == 0 {
                    break 'all;
                }
                pos -= 1;
                let next = block[pos].index() + 1;
                if next < alphabet.len() {
                    block[pos] = shiftflip_core::Symbol(next as u16);
                    break;
                }
                block[pos] = shiftflip_core::Symbol(0);
            }
        }
        SpaceFile {
            alphabet: alphabet.names().to_vec(),
            step: space.step(),
            forbidden,
        }
    }
}

/// One row of an explicit sliding-rule table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableEntryFile {
    pub window: Vec<String>,
    pub out: String,
}

/// A flip presentation file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FlipFile {
    /// Reversal through a symbol involution: `x_i -> tau(x_{-i-shift})`.
    OneBlock {
        symbol_map: BTreeMap<String, String>,
        #[serde(default, skip_serializing_if = "is_zero")]
        shift: i64,
    },
    /// Reversal through an explicit window-to-symbol table.
    Sliding {
        radius: usize,
        rule: Vec<TableEntryFile>,
        #[serde(default, skip_serializing_if = "is_zero")]
        shift: i64,
    },
    /// Reversal through an involution with a marker-driven local rewrite.
    MarkerRewrite {
        symbol_map: BTreeMap<String, String>,
        core: Vec<String>,
        frame: Vec<String>,
        #[serde(default, skip_serializing_if = "is_zero")]
        shift: i64,
    },
}

fn is_zero(k: &i64) -> bool {
    *k == 0
}

impl FlipFile {
    /// Build the flip this file describes over the given alphabet.
    pub fn to_flip(&self, alphabet: &Alphabet) -> Result<Flip, Error> {
        match self {
            FlipFile::OneBlock { symbol_map, shift } => {
                let tau = parse_involution(alphabet, symbol_map)?;
                Ok(Flip::one_block(tau).compose_shift(*shift))
            }
            FlipFile::Sliding {
                radius,
                rule,
                shift,
            } => {
                let mut entries = Vec::with_capacity(rule.len());
                for entry in rule {
                    let window = parse_word(alphabet, &entry.window)?;
                    let out = alphabet.require(&entry.out)?;
                    entries.push((window, out));
                }
                let table = RuleTable::new(*radius, entries)?;
                Ok(Flip::from_table(table).compose_shift(*shift))
            }
            FlipFile::MarkerRewrite {
                symbol_map,
                core,
                frame,
                shift,
            } => {
                let tau = parse_involution(alphabet, symbol_map)?;
                let core = parse_word(alphabet, core)?;
                let frame = parse_word(alphabet, frame)?;
                let rule = ThetaRule::new(tau, core, frame)?;
                Ok(Flip::from_theta(rule).compose_shift(*shift))
            }
        }
    }

    /// Describe a flip as a file, losslessly.
    pub fn from_flip(flip: &Flip, alphabet: &Alphabet) -> FlipFile {
        let shift = flip.shift();
        match flip.rule() {
            LocalRule::Symbol(tau) => FlipFile::OneBlock {
                symbol_map: render_involution(alphabet, tau),
                shift,
            },
            LocalRule::Table(table) => FlipFile::Sliding {
                radius: table.radius(),
                rule: table
                    .entries()
                    .map(|(window, out)| TableEntryFile {
                        window: render_word(alphabet, window),
                        out: alphabet.name(out).to_string(),
                    })
                    .collect(),
                shift,
            },
            LocalRule::Theta(rule) => FlipFile::MarkerRewrite {
                symbol_map: render_involution(alphabet, rule.base()),
                core: render_word(alphabet, rule.core()),
                frame: render_word(alphabet, rule.frame()),
                shift,
            },
        }
    }
}

/// A conjugacy step in serialized form.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DescriptorFile {
    ShiftPower { k: i64 },
    HigherBlock { n: usize },
    SlidingCode { radius: usize },
}

impl DescriptorFile {
    pub fn from_descriptor(d: &ConjugacyDescriptor) -> DescriptorFile {
        match d {
            ConjugacyDescriptor::ShiftPower { k } => DescriptorFile::ShiftPower { k: *k },
            ConjugacyDescriptor::HigherBlock { n } => DescriptorFile::HigherBlock { n: *n },
            ConjugacyDescriptor::PairRecode { radius } => {
                DescriptorFile::SlidingCode { radius: *radius }
            }
        }
    }
}

/// Provenance of one input file: path as given and content hash.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InputStamp {
    pub path: String,
    pub sha256: String,
}

impl InputStamp {
    pub fn new(path: &std::path::Path, bytes: &[u8]) -> InputStamp {
        let mut hasher = Sha256::new();
        hasher.update(bytes);
        InputStamp {
            path: path.display().to_string(),
            sha256: hex::encode(hasher.finalize()),
        }
    }
}

/// Render an F-vector as CSV with an `n,count` header.
pub fn fvector_csv(v: &FVector) -> String {
    let mut out = String::from("n,count\n");
    for (i, c) in v.counts().iter().enumerate() {
        out.push_str(&format!("{},{}\n", i + 1, c));
    }
    out
}

/// Rows `(n, count)` for JSON output.
pub fn fvector_rows(v: &FVector) -> Vec<(usize, u64)> {
    v.counts()
        .iter()
        .enumerate()
        .map(|(i, &c)| (i + 1, c))
        .collect()
}

pub fn parse_word(alphabet: &Alphabet, names: &[String]) -> Result<Word, Error> {
    let mut symbols = Vec::with_capacity(names.len());
    for name in names {
        symbols.push(alphabet.require(name)?);
    }
    Ok(Word::new(symbols))
}

pub fn render_word(alphabet: &Alphabet, word: &[shiftflip_core::Symbol]) -> Vec<String> {
    word.iter().map(|&s| alphabet.name(s).to_string()).collect()
}

fn parse_involution(
    alphabet: &Alphabet,
    map: &BTreeMap<String, String>,
) -> Result<SymbolInvolution, Error> {
    SymbolInvolution::from_names(alphabet, map.iter().map(|(a, b)| (a.as_str(), b.as_str())))
}

fn render_involution(alphabet: &Alphabet, tau: &SymbolInvolution) -> BTreeMap<String, String> {
    alphabet
        .symbols()
        .map(|s| {
            (
                alphabet.name(s).to_string(),
                alphabet.name(tau.apply(s)).to_string(),
            )
        })
        .collect()
}
