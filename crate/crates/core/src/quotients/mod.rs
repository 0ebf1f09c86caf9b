//! Integer normal forms, abelianization, coset enumeration, and the
//! quotient oracles built on them.

mod abelian;
mod coset;
mod matrix;
mod oracle;

pub use abelian::{abelianization, relator_matrix, AbelianQuotient, InvariantFactors};
pub use coset::{enumerate_cosets, CosetTable};
pub use matrix::{column_hnf, smith_normal_form, ColumnHnf, IntMatrix, SmithForm};
pub use oracle::{oracle_answer, PreparedOracle, QuotientError, QuotientOracle, Soundness, TaggedAnswer};

/// Coset enumeration that fails with `CapExceeded` when incomplete.
pub fn coset_enumeration(p: &crate::gog::Presentation, cap: usize) -> Result<CosetTable, QuotientError> {
    let t = enumerate_cosets(p, cap);
    if t.completed() {
        Ok(t)
    } else {
        Err(QuotientError::CapExceeded(cap))
    }
}
