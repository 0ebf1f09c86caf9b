//! Command dispatch for the `gog` binary. [`run`] returns the exit code and
//! the report instead of printing, so tests can drive it directly.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use graphgroups::analysis::{rank_bound, recognize_abelian, AnalysisError};
use graphgroups::moves::{self, MoveError, SplitShape};
use graphgroups::quotients::{abelianization, enumerate_cosets, QuotientError, QuotientOracle};
use graphgroups::words::{self, WordError};
use graphgroups::{parse_gog, serialize_gog, GraphOfGroups, GroupError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PRECONDITION: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_ORACLE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "gog", version, about = "Graphs of groups: presentations, moves, word problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the graph and group data.
    Validate { file: PathBuf },
    /// Graph of groups (injective maps) or diagram.
    Classify { file: PathBuf },
    /// Presentation of the fundamental group.
    Pi1 { file: PathBuf },
    /// Invariant factors of the abelianized fundamental group.
    Abelianize { file: PathBuf },
    /// Contract an edge whose own map is an isomorphism.
    Contract {
        #[arg(long)]
        edge: String,
        file: PathBuf,
    },
    /// Contract every spanning-tree edge.
    Collapse { file: PathBuf },
    /// Replace a diagram by vertex images in a quotient of π1.
    Convert {
        /// `abel`, `free` or `enum:CAP`
        #[arg(long, value_parser = parse_oracle)]
        oracle: QuotientOracle,
        file: PathBuf,
    },
    /// Split π1 along one edge orbit.
    Decompose {
        #[arg(long)]
        edge: String,
        file: PathBuf,
    },
    /// Pinch-reduce a word.
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        file: PathBuf,
    },
    /// Decide whether a word is the identity.
    Trivial {
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        file: PathBuf,
    },
    /// Decide whether π1 is abelian (free abelian groups only).
    RecognizeAbelian { file: PathBuf },
    /// One more than the largest vertex geometric rank.
    RankBound { file: PathBuf },
    /// Coset enumeration over the trivial subgroup.
    Enumerate {
        #[arg(long)]
        cap: usize,
        file: PathBuf,
    },
}

fn parse_oracle(s: &str) -> Result<QuotientOracle, String> {
    QuotientOracle::parse(s).ok_or_else(|| format!("unknown oracle {s:?}; expected abel, free or enum:CAP"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub report: String,
}

impl Outcome {
    fn ok(report: String) -> Self {
        Outcome { code: EXIT_OK, report }
    }
}

struct Failure {
    code: i32,
    msg: String,
}

impl Failure {
    fn new(code: i32, msg: impl ToString) -> Self {
        Failure {
            code,
            msg: msg.to_string(),
        }
    }
}

fn quotient_failure(e: &QuotientError) -> Failure {
    Failure::new(EXIT_ORACLE, e)
}

impl From<graphgroups::GogError> for Failure {
    fn from(e: graphgroups::GogError) -> Self {
        Failure::new(EXIT_PRECONDITION, e)
    }
}

impl From<WordError> for Failure {
    fn from(e: WordError) -> Self {
        let code = match &e {
            WordError::UnknownLetter(_)
            | WordError::Syntax(_)
            | WordError::NonLoop(_)
            | WordError::Group(GroupError::Parse(..)) => EXIT_PARSE,
            _ => EXIT_PRECONDITION,
        };
        Failure::new(code, e)
    }
}

impl From<MoveError> for Failure {
    fn from(e: MoveError) -> Self {
        match &e {
            MoveError::Quotient(q) => quotient_failure(q),
            _ => Failure::new(EXIT_PRECONDITION, e),
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Move(m) => m.into(),
            AnalysisError::Word(w) => w.into(),
            other => Failure::new(EXIT_PRECONDITION, other),
        }
    }
}

fn load(path: &PathBuf) -> Result<GraphOfGroups, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    parse_gog(&text).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn load_valid(path: &PathBuf) -> Result<GraphOfGroups, Failure> {
    let g = load(path)?;
    g.ensure_valid()?;
    Ok(g)
}

fn serialize(g: &GraphOfGroups) -> Result<String, Failure> {
    serialize_gog(g).map_err(|e| Failure::new(EXIT_PRECONDITION, e))
}

fn dispatch(command: Command) -> Result<Outcome, Failure> {
    let report = match command {
        Command::Validate { file } => {
            let report = load(&file)?.validate();
            let code = if report.is_valid() { EXIT_OK } else { EXIT_PRECONDITION };
            return Ok(Outcome {
                code,
                report: format!("{report}\n"),
            });
        }
        Command::Classify { file } => format!("{}\n", load_valid(&file)?.classify()),
        Command::Pi1 { file } => load_valid(&file)?.pi1_presentation()?.to_text(),
        Command::Abelianize { file } => {
            let p = load_valid(&file)?.pi1_presentation()?;
            format!("{}\n", abelianization(&p))
        }
        Command::Contract { edge, file } => serialize(&moves::contract_edge(&load(&file)?, &edge)?)?,
        Command::Collapse { file } => serialize(&moves::collapse_tree(&load(&file)?)?)?,
        Command::Convert { oracle, file } => {
            let c = moves::convert_diagram(&load(&file)?, oracle)?;
            let order = c.order.map_or("unknown".to_string(), |n| n.to_string());
            format!("{}\n# order {order} {}\n", serialize(&c.graph)?.trim_end(), c.soundness)
        }
        Command::Decompose { edge, file } => {
            let d = moves::decompose_along_edge(&load(&file)?, &edge)?;
            let shape = match d.shape {
                SplitShape::Amalgam => "amalgam",
                SplitShape::Hnn => "hnn",
            };
            let mut out = format!("{shape} along {} over {}\n", d.orbit, d.edge_group);
            out += &format!("left:\n{}", d.left.to_text());
            if let Some(right) = &d.right {
                out += &format!("right:\n{}", right.to_text());
            }
            let full = d.reassemble();
            out += "attaching:\n";
            for r in d.attaching_relators() {
                out += &format!("{}\n", full.format_word(r));
            }
            out
        }
        Command::Reduce { word, file } => {
            let g = load_valid(&file)?;
            let w = words::parse_word(&g, &word)?;
            let r = words::reduce(&g, &w)?;
            format!("{}\npinches {}\n", r.word.format(&g), r.pinches.len())
        }
        Command::Trivial { word, file } => {
            let g = load_valid(&file)?;
            let w = words::parse_word(&g, &word)?;
            format!("{}\n", words::is_trivial(&g, &w)?)
        }
        Command::RecognizeAbelian { file } => {
            let g = load_valid(&file)?;
            recognize_abelian(&g)?.report(&g)
        }
        Command::RankBound { file } => format!("{}\n", rank_bound(&load_valid(&file)?)),
        Command::Enumerate { cap, file } => {
            let p = load_valid(&file)?.pi1_presentation()?;
            let table = enumerate_cosets(&p, cap);
            if !table.completed() {
                return Err(quotient_failure(&QuotientError::CapExceeded(cap)));
            }
            table.dump()
        }
    };
    Ok(Outcome::ok(report))
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            return Outcome {
                code,
                report: e.render().to_string(),
            };
        }
    };
    dispatch(cli.command).unwrap_or_else(|f| Outcome {
        code: f.code,
        report: format!("error: {}\n", f.msg),
    })
}
