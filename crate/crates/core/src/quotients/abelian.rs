use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::{smith_normal_form, IntMatrix};
use crate::gog::Presentation;
use crate::groups::free::{self, Letter};

/// Abelian group Z/d1 + ... + Z/dk + Z^r with d1 | d2 | ... | dk, each >= 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InvariantFactors {
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

impl InvariantFactors {
    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }

    /// Order of the group when finite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }
}

impl fmt::Display for InvariantFactors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let torsion: Vec<String> = self.torsion.iter().map(|d| d.to_string()).collect();
        write!(
            f,
            "free_rank={} torsion=[{}]",
            self.free_rank,
            torsion.join(",")
        )
    }
}

/// Relator exponent-sum matrix: one row per relator, one column per generator.
pub fn relator_matrix(p: &Presentation) -> IntMatrix {
    let n = p.generators.len();
    let rows: Vec<Vec<i64>> = p.relators.iter().map(|r| free::exponent_sums(r, n)).collect();
    IntMatrix::from_rows(&rows, n)
}

pub fn abelianization(p: &Presentation) -> InvariantFactors {
    AbelianQuotient::new(p).factors()
}

/// The abelianization of a presentation with explicit coordinates: a word
/// maps to `(y_1 mod d_1, ..., y_k mod d_k, free part)`.
#[derive(Clone, Debug)]
pub struct AbelianQuotient {
    generators: usize,
    /// Transposed right Smith transform: exponent vector -> Smith coordinates.
    change: IntMatrix,
    /// Smith diagonal entry per coordinate (zero for free coordinates).
    moduli: Vec<BigInt>,
}

impl AbelianQuotient {
    pub fn new(p: &Presentation) -> Self {
        let m = relator_matrix(p);
        let n = m.cols();
        let snf = smith_normal_form(&m);
        let diag = snf.diagonal_entries();
        let moduli = (0..n)
            .map(|i| diag.get(i).cloned().unwrap_or_else(BigInt::zero))
            .collect();
        // Row lattice of m = (row lattice of D) * V^-1, so x lies in it iff
        // x * V does in D's; x * V = (V^T x)^T.
        AbelianQuotient {
            generators: n,
            change: snf.right.transpose(),
            moduli,
        }
    }

    pub fn factors(&self) -> InvariantFactors {
        InvariantFactors {
            torsion: self.moduli.iter().filter(|d| **d > BigInt::one()).cloned().collect(),
            free_rank: self.moduli.iter().filter(|d| d.is_zero()).count(),
        }
    }

    /// Coordinates of the exponent vector, torsion entries reduced into
    /// `0..d`, coordinates with modulus 1 dropped. Order: torsion then free.
    pub fn coordinates(&self, exponents: &[BigInt]) -> Vec<BigInt> {
        let y = self.change.mul_vec(exponents);
        let mut torsion = Vec::new();
        let mut free_part = Vec::new();
        for (yi, d) in y.into_iter().zip(&self.moduli) {
            if d.is_zero() {
                free_part.push(yi);
            } else if !d.is_one() {
                torsion.push(yi.mod_floor(d));
            }
        }
        torsion.extend(free_part);
        torsion
    }

    pub fn word_coordinates(&self, w: &[Letter]) -> Vec<BigInt> {
        let e: Vec<BigInt> = free::exponent_sums(w, self.generators)
            .into_iter()
            .map(BigInt::from)
            .collect();
        self.coordinates(&e)
    }

    pub fn is_trivial(&self, w: &[Letter]) -> bool {
        self.word_coordinates(w).iter().all(Zero::is_zero)
    }

    /// Torsion moduli (each >= 2) followed by zeros for the free coordinates,
    /// aligned with `coordinates`.
    pub fn coordinate_moduli(&self) -> Vec<BigInt> {
        let f = self.factors();
        let mut m = f.torsion;
        m.extend(std::iter::repeat_n(BigInt::zero(), f.free_rank));
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(names: &[&str], rels: &[&str]) -> Presentation {
        Presentation::from_names(names, rels).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn free_cyclic() {
        let a = abelianization(&pres(&["t"], &[]));
        assert_eq!(a, InvariantFactors { torsion: vec![], free_rank: 1 });
    }

    #[test]
    fn trefoil() {
        let a = abelianization(&pres(&["x", "y"], &["x x y^-1 y^-1 y^-1"]));
        assert_eq!(a.free_rank, 1);
        assert!(a.torsion.is_empty());
    }

    #[test]
    fn torus() {
        let a = abelianization(&pres(&["a", "t"], &["t a t^-1 a^-1"]));
        assert_eq!(a.free_rank, 2);
        assert!(a.torsion.is_empty());
    }

    #[test]
    fn z2_free_z3() {
        let a = abelianization(&pres(&["a", "b", "t"], &["a a", "b b b", "t"]));
        assert_eq!(a.torsion, ints(&[6]));
        assert_eq!(a.free_rank, 0);
        assert_eq!(a.order(), Some(BigInt::from(6)));
    }

    #[test]
    fn coordinates_detect_triviality() {
        let p = pres(&["a", "b"], &["a a a a", "b b b b b b", "a b^-1 b^-1 b^-1"]);
        let q = AbelianQuotient::new(&p);
        assert_eq!(q.factors().torsion, ints(&[6]));
        assert!(q.is_trivial(&p.parse_word("a b^-1 b^-1 b^-1").unwrap()));
        assert!(q.is_trivial(&p.parse_word("b b b b b b").unwrap()));
        assert!(!q.is_trivial(&p.parse_word("b").unwrap()));
        assert!(q.is_trivial(&p.parse_word("a b a^-1 b^-1").unwrap()));
    }
}
