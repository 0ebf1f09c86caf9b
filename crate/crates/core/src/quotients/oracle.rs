use std::fmt;

use thiserror::Error;

use super::abelian::AbelianQuotient;
use super::coset::{enumerate_cosets, CosetTable};
use crate::gog::Presentation;
use crate::groups::free::{self, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("coset enumeration did not complete within {0} cosets")]
    CapExceeded(usize),
    #[error("oracle incomplete: coset enumeration did not complete within {0} cosets")]
    OracleIncomplete(usize),
}

/// How elements of a fundamental group are tested for triviality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuotientOracle {
    /// Works in the abelianization; exact only if the group is abelian.
    Abelianization,
    /// Capped coset enumeration; exact whenever it completes.
    FiniteEnumeration { cap: usize },
    /// Free reduction; exact only for relator-free presentations.
    FreeReduction,
}

impl QuotientOracle {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "abel" => Some(QuotientOracle::Abelianization),
            "free" => Some(QuotientOracle::FreeReduction),
            _ => {
                let cap = s.strip_prefix("enum:")?.parse().ok().filter(|&c| c > 0)?;
                Some(QuotientOracle::FiniteEnumeration { cap })
            }
        }
    }

    pub fn prepare(self, p: &Presentation) -> Result<PreparedOracle, QuotientError> {
        match self {
            QuotientOracle::Abelianization => Ok(PreparedOracle::Abelian(AbelianQuotient::new(p))),
            QuotientOracle::FiniteEnumeration { cap } => {
                let table = enumerate_cosets(p, cap);
                if !table.completed() {
                    return Err(QuotientError::OracleIncomplete(cap));
                }
                Ok(PreparedOracle::Cosets(table))
            }
            QuotientOracle::FreeReduction => Ok(PreparedOracle::Free {
                relator_free: p.relators.iter().all(|r| free::reduce(r).is_empty()),
            }),
        }
    }
}

impl fmt::Display for QuotientOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientOracle::Abelianization => f.write_str("abel"),
            QuotientOracle::FiniteEnumeration { cap } => write!(f, "enum:{cap}"),
            QuotientOracle::FreeReduction => f.write_str("free"),
        }
    }
}

/// Condition under which an oracle answer is the true answer in π1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Soundness {
    Exact,
    IfAbelian,
    IfRelatorFree,
}

impl fmt::Display for Soundness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Soundness::Exact => "exact",
            Soundness::IfAbelian => "sound-iff-abelian",
            Soundness::IfRelatorFree => "sound-iff-relator-free",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TaggedAnswer {
    pub trivial: bool,
    pub soundness: Soundness,
}

/// An oracle with its per-presentation data computed once.
#[derive(Clone, Debug)]
pub enum PreparedOracle {
    Abelian(AbelianQuotient),
    Cosets(CosetTable),
    Free { relator_free: bool },
}

impl PreparedOracle {
    pub fn soundness(&self) -> Soundness {
        match self {
            PreparedOracle::Abelian(_) => Soundness::IfAbelian,
            PreparedOracle::Cosets(_) => Soundness::Exact,
            PreparedOracle::Free { relator_free: true } => Soundness::Exact,
            PreparedOracle::Free { relator_free: false } => Soundness::IfRelatorFree,
        }
    }

    pub fn is_trivial(&self, w: &[Letter]) -> bool {
        match self {
            PreparedOracle::Abelian(q) => q.is_trivial(w),
            PreparedOracle::Cosets(t) => t.is_trivial(w).expect("completed table"),
            PreparedOracle::Free { .. } => free::reduce(w).is_empty(),
        }
    }

    pub fn answer(&self, w: &[Letter]) -> TaggedAnswer {
        TaggedAnswer {
            trivial: self.is_trivial(w),
            soundness: self.soundness(),
        }
    }
}

pub fn oracle_answer(o: QuotientOracle, p: &Presentation, w: &[Letter]) -> Result<TaggedAnswer, QuotientError> {
    Ok(o.prepare(p)?.answer(w))
}
