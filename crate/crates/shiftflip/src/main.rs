//! Command-line front end: space summaries, fixed-point count tables,
//! the non-conjugate flip family driver, and the coded-system toolkit.
//!
//! Outputs are deterministic: identical inputs produce byte-identical
//! outputs. JSON payloads carry the tool version and the SHA-256 of every
//! input file. Exit codes: 0 success, 1 usage, 2 validation failure,
//! 3 search-bound or horizon exhaustion, 4 internal-consistency error.

mod format;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use format::{
    fvector_csv, fvector_rows, DescriptorFile, FlipFile, InputStamp, SpaceFile,
};
use shiftflip_core::coded;
use shiftflip_core::construct::{flip_family, Completion, MemberOrigin};
use shiftflip_core::flip::validate_flip;
use shiftflip_core::invariants::fvector;
use shiftflip_core::sft::SftPresentation;
use shiftflip_core::{Error, Flip, SearchLimits};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "shiftflip",
    version,
    about = "Shift spaces, flips, fixed-point invariants, and the coded-system toolkit"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Summarize a shift-space presentation file
    Info {
        /// Presentation JSON file
        #[arg(long)]
        space: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Directory to write the output file into (default: stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fixed-point counts of a flip for each period up to a horizon
    Fvector {
        #[arg(long)]
        space: PathBuf,
        /// Flip JSON file
        #[arg(long)]
        flip: PathBuf,
        /// Largest period to count
        #[arg(long)]
        horizon: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grow pairwise non-conjugate flips from a seed flip and certify them
    Family {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        flip: PathBuf,
        /// Number of flips to separate
        #[arg(long)]
        count: usize,
        /// Largest period compared when certifying
        #[arg(long)]
        horizon: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coded-system toolkit over the alphabet {0, 1, 2}
    W {
        #[command(subcommand)]
        cmd: WCmd,
    },
}

#[derive(Subcommand)]
enum WCmd {
    /// Decide stability of a block
    Stable { block: String },
    /// List all stable blocks up to a length, shortest first
    Enumerate {
        max_len: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Search for a stable block containing the query, up to a length bound
    Member { block: String, bound: usize },
    /// Survey symbol involutions for closure of the stable blocks under star
    Rigidity { max_len: usize },
    /// Run the bundled property checks at a length bound
    Props { max_len: usize },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Domain(_) | Error::Precondition(_) => 2,
            Error::SearchBound(_) | Error::Horizon(_) => 3,
            Error::Construction(_) | Error::Internal(_) => 4,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.cmd {
        Cmd::Info { space, format, out } => cmd_info(&space, format, out.as_deref()),
        Cmd::Fvector {
            space,
            flip,
            horizon,
            format,
            out,
        } => cmd_fvector(&space, &flip, horizon, format, out.as_deref()),
        Cmd::Family {
            space,
            flip,
            count,
            horizon,
            out,
        } => cmd_family(&space, &flip, count, horizon, out.as_deref()),
        Cmd::W { cmd } => cmd_w(cmd),
    }
}

// ---------------------------------------------------------------------------
// Input loading
// ---------------------------------------------------------------------------

fn read_input(path: &Path) -> Result<(Vec<u8>, InputStamp), Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure {
        code: 2,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    let stamp = InputStamp::new(path, &bytes);
    Ok((bytes, stamp))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, bytes: &[u8]) -> Result<T, Failure> {
    serde_json::from_slice(bytes).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })
}

fn load_space(path: &Path) -> Result<(SftPresentation, InputStamp), Failure> {
    let (bytes, stamp) = read_input(path)?;
    let file: SpaceFile = parse_json(path, &bytes)?;
    let space = file.to_space()?;
    Ok((space, stamp))
}

fn load_flip(path: &Path, space: &SftPresentation) -> Result<(Flip, InputStamp), Failure> {
    let (bytes, stamp) = read_input(path)?;
    let file: FlipFile = parse_json(path, &bytes)?;
    let flip = file.to_flip(space.alphabet())?;
    Ok((flip, stamp))
}

fn emit(text: &str, out: Option<&Path>, file_name: &str) -> Result<(), Failure> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(dir) => {
            let path = dir.join(file_name);
            std::fs::write(&path, text).map_err(|e| Failure {
                code: 2,
                message: format!("cannot write {}: {e}", path.display()),
            })?;
            println!("{}", path.display());
            Ok(())
        }
    }
}

fn to_pretty(value: &impl Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable report");
    text.push('\n');
    text
}

// ---------------------------------------------------------------------------
// info
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct InfoReport {
    version: &'static str,
    inputs: Inputs,
    alphabet: Vec<String>,
    step: usize,
    irreducible: bool,
    /// Undetermined (null) when the presentation is reducible.
    infinite: Option<bool>,
    synchronizing_block: Vec<String>,
    block_counts: Vec<(usize, u64)>,
}

#[derive(Serialize)]
struct Inputs {
    space: InputStamp,
    #[serde(skip_serializing_if = "Option::is_none")]
    flip: Option<InputStamp>,
}

fn cmd_info(path: &Path, format: Format, out: Option<&Path>) -> Result<u8, Failure> {
    let (space, stamp) = load_space(path)?;
    let irreducible = space.is_irreducible();
    let infinite = if irreducible {
        Some(space.is_infinite()?)
    } else {
        None
    };
    let mut block_counts = Vec::new();
    for n in 1..=8usize {
        block_counts.push((n, space.language_count(n)?));
    }
    let sync = space.synchronizing_block();
    let report = InfoReport {
        version: VERSION,
        inputs: Inputs {
            space: stamp,
            flip: None,
        },
        alphabet: space.alphabet().names().to_vec(),
        step: space.step(),
        irreducible,
        infinite,
        synchronizing_block: format::render_word(space.alphabet(), &sync),
        block_counts,
    };
    let text = match format {
        Format::Json => to_pretty(&report),
        Format::Csv => {
            let mut text = String::new();
            text.push_str(&format!("alphabet: {}\n", report.alphabet.join(" ")));
            text.push_str(&format!("step: {}\n", report.step));
            text.push_str(&format!("irreducible: {}\n", report.irreducible));
            match report.infinite {
                Some(b) => text.push_str(&format!("infinite: {b}\n")),
                None => text.push_str("infinite: undetermined (reducible presentation)\n"),
            }
            text.push_str(&format!(
                "synchronizing block: {}\n",
                report.synchronizing_block.join("")
            ));
            text.push_str("block counts:\n");
            text.push_str("n,count\n");
            for (n, c) in &report.block_counts {
                text.push_str(&format!("{n},{c}\n"));
            }
            text
        }
    };
    let file_name = match format {
        Format::Csv => "info.txt",
        Format::Json => "info.json",
    };
    emit(&text, out, file_name)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// fvector
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct FvectorReport {
    version: &'static str,
    inputs: Inputs,
    horizon: usize,
    rows: Vec<(usize, u64)>,
}

fn cmd_fvector(
    space_path: &Path,
    flip_path: &Path,
    horizon: usize,
    format: Format,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    if horizon == 0 {
        return Err(Failure::usage("--horizon must be at least 1"));
    }
    let (space, space_stamp) = load_space(space_path)?;
    let (flip, flip_stamp) = load_flip(flip_path, &space)?;
    let report = validate_flip(&space, &flip, &SearchLimits::default())?;
    if !report.is_valid() {
        let mut message = String::from("the flip does not validate on this space");
        for violation in &report.violations {
            message.push_str(&format!("\n  {}", violation.describe(space.alphabet())));
        }
        return Err(Failure { code: 2, message });
    }
    let v = fvector(&space, &flip, horizon)?;
    let text = match format {
        Format::Csv => fvector_csv(&v),
        Format::Json => to_pretty(&FvectorReport {
            version: VERSION,
            inputs: Inputs {
                space: space_stamp,
                flip: Some(flip_stamp),
            },
            horizon,
            rows: fvector_rows(&v),
        }),
    };
    let file_name = match format {
        Format::Csv => "fvector.csv",
        Format::Json => "fvector.json",
    };
    emit(&text, out, file_name)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// family
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct FamilyReport {
    version: &'static str,
    inputs: Inputs,
    requested: usize,
    horizon: usize,
    completion: CompletionReport,
    members: Vec<MemberReport>,
    certificates: Vec<CertificateReport>,
}

#[derive(Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
enum CompletionReport {
    Complete,
    HorizonInsufficient { pairs: Vec<(usize, usize)> },
    CapHalted { detail: String },
}

#[derive(Serialize)]
struct MemberReport {
    origin: &'static str,
    chain: Vec<DescriptorFile>,
    space: SpaceFile,
    flip: FlipFile,
    fvector: Vec<(usize, u64)>,
}

#[derive(Serialize)]
struct CertificateReport {
    left: usize,
    right: usize,
    period: usize,
    left_count: u64,
    right_count: u64,
}

fn cmd_family(
    space_path: &Path,
    flip_path: &Path,
    count: usize,
    horizon: usize,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    if count == 0 {
        return Err(Failure::usage("--count must be at least 1"));
    }
    if horizon == 0 {
        return Err(Failure::usage("--horizon must be at least 1"));
    }
    let (space, space_stamp) = load_space(space_path)?;
    let (flip, flip_stamp) = load_flip(flip_path, &space)?;
    let family = flip_family(&space, &flip, count, horizon, &SearchLimits::default())?;

    let completion = match &family.completion {
        Completion::Complete => CompletionReport::Complete,
        Completion::HorizonInsufficient { pairs } => CompletionReport::HorizonInsufficient {
            pairs: pairs.clone(),
        },
        Completion::CapHalted { detail } => CompletionReport::CapHalted {
            detail: detail.clone(),
        },
    };
    let members = family
        .members
        .iter()
        .map(|m| MemberReport {
            origin: match m.origin {
                MemberOrigin::Input => "input",
                MemberOrigin::BlockPass => "block_pass",
                MemberOrigin::MarkerRewrite => "marker_rewrite",
                MemberOrigin::Recoded => "recoded",
            },
            chain: m.chain.iter().map(DescriptorFile::from_descriptor).collect(),
            space: SpaceFile::from_space(&m.space),
            flip: FlipFile::from_flip(&m.flip, m.space.alphabet()),
            fvector: fvector_rows(&m.counts),
        })
        .collect();
    let certificates = family
        .certificates
        .iter()
        .map(|c| CertificateReport {
            left: c.left,
            right: c.right,
            period: c.certificate.n,
            left_count: c.certificate.left_count,
            right_count: c.certificate.right_count,
        })
        .collect();
    let complete = matches!(family.completion, Completion::Complete);
    if let Completion::CapHalted { detail } = &family.completion {
        eprintln!("alphabet-growth cap halted the iteration: {detail}");
    }
    let report = FamilyReport {
        version: VERSION,
        inputs: Inputs {
            space: space_stamp,
            flip: Some(flip_stamp),
        },
        requested: count,
        horizon,
        completion,
        members,
        certificates,
    };
    emit(&to_pretty(&report), out, "family.json")?;
    Ok(if complete { 0 } else { 3 })
}

// ---------------------------------------------------------------------------
// w
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct EnumerateReport {
    version: &'static str,
    max_len: usize,
    stable: Vec<String>,
}

fn cmd_w(cmd: WCmd) -> Result<u8, Failure> {
    match cmd {
        WCmd::Stable { block } => {
            let w = coded::parse_symbols(&block)?;
            println!("{}", coded::is_stable(&w)?.describe());
            Ok(0)
        }
        WCmd::Enumerate { max_len, format } => {
            let stable = coded::enumerate_stable(max_len)?;
            match format {
                Format::Csv => {
                    for w in &stable {
                        println!("{}", coded::render_symbols(w));
                    }
                }
                Format::Json => {
                    let report = EnumerateReport {
                        version: VERSION,
                        max_len,
                        stable: stable.iter().map(|w| coded::render_symbols(w)).collect(),
                    };
                    print!("{}", to_pretty(&report));
                }
            }
            Ok(0)
        }
        WCmd::Member { block, bound } => {
            let w = coded::parse_symbols(&block)?;
            match coded::member_certificate(&w, bound)? {
                coded::Membership::Yes { certificate } => {
                    println!("member (certificate {})", coded::render_symbols(&certificate));
                    Ok(0)
                }
                coded::Membership::Unknown => {
                    println!("unknown (no stable superblock within length {bound})");
                    Ok(3)
                }
            }
        }
        WCmd::Rigidity { max_len } => {
            let report = coded::rigidity_scan(max_len)?;
            println!("surviving involutions: {}", report.survivors().join(", "));
            for inv in &report.involutions {
                if inv.survives {
                    continue;
                }
                let (from, to) = inv
                    .first_failure
                    .as_ref()
                    .expect("failed involutions carry a counterexample");
                let powers: Vec<String> = inv
                    .power_failures
                    .iter()
                    .map(|&(a, n)| format!("{a}^{n} -> {}^{n}", inv.map[a as usize]))
                    .collect();
                println!(
                    "{}: first counterexample {} -> {}; power counterexamples {}",
                    inv.name,
                    coded::render_symbols(from),
                    coded::render_symbols(to),
                    powers.join(", ")
                );
            }
            Ok(0)
        }
        WCmd::Props { max_len } => cmd_w_props(max_len),
    }
}

fn cmd_w_props(max_len: usize) -> Result<u8, Failure> {
    let mut failed = false;
    let mut short = false;

    let classes = coded::shifted_membership_report(1, 3, 600)?;
    let firsts: Vec<String> = [
        &classes.both,
        &classes.first_only,
        &classes.second_only,
        &classes.neither,
    ]
    .iter()
    .map(|c| {
        c.first()
            .map(|n| n.to_string())
            .unwrap_or_else(|| "-".to_string())
    })
    .collect();
    if classes.satisfied() {
        println!(
            "shifted membership classes (offset 1): satisfied (first witnesses {})",
            firsts.join(", ")
        );
    } else {
        short = true;
        println!("shifted membership classes (offset 1): witness shortfall within bound 600");
    }

    let reversal = coded::reversal_closure(max_len)?;
    println!(
        "reversal closure up to length {}: {} blocks, {} failures",
        max_len,
        reversal.checked,
        reversal.failures.len()
    );
    failed |= !reversal.failures.is_empty();

    let concat = coded::concatenation_closure(max_len.min(4), 100)?;
    println!(
        "concatenation closure: {} pairs, {} code checks, {} failures",
        concat.pairs_checked,
        concat.code_checks,
        concat.failures.len()
    );
    failed |= !concat.failures.is_empty();

    let forced = coded::forced_point(&[0, 1, 3])?;
    println!(
        "zero-set reconstruction: {} from nonzero positions [0, 1, 3]",
        coded::render_symbols(forced.certificate())
    );

    if failed {
        Err(Failure {
            code: 4,
            message: "a closure property failed; see the report above".to_string(),
        })
    } else if short {
        Err(Failure {
            code: 3,
            message: "witness scan fell short of the requested count".to_string(),
        })
    } else {
        Ok(0)
    }
}
