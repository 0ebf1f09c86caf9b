//! The computable group classes used for vertex and edge groups: free
//! abelian groups, finite groups given by tables, and free groups.

mod finite;
pub mod free;
mod hom;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

pub use finite::FiniteTable;
pub use free::{FoldedGraph, Letter};
pub use hom::{Hom, HomData, MembershipAnswer};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("not a homomorphism: {0}")]
    NotAHom(String),
    #[error("not an isomorphism")]
    NotIso,
    #[error("group of order {0} exceeds the table cap")]
    CapExceeded(usize),
    #[error("cannot parse element {0:?}: {1}")]
    Parse(String, String),
    #[error("integer {0} too large for this operation")]
    TooLarge(BigInt),
}

pub type Result<T, E = GroupError> = std::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupDesc {
    /// Z^n on named basis vectors.
    FreeAbelian { gens: Vec<String> },
    Finite(Arc<FiniteTable>),
    /// Free group on named letters.
    Free { gens: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Vector(Vec<BigInt>),
    Index(usize),
    Word(Vec<Letter>),
}

fn default_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

impl GroupDesc {
    pub fn free_abelian(n: usize) -> Self {
        GroupDesc::FreeAbelian {
            gens: default_names("z", n),
        }
    }

    pub fn free_abelian_named(names: &[&str]) -> Self {
        GroupDesc::FreeAbelian {
            gens: names.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn free(n: usize) -> Self {
        GroupDesc::Free {
            gens: default_names("x", n),
        }
    }

    pub fn free_named(names: &[&str]) -> Self {
        GroupDesc::Free {
            gens: names.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn finite(table: FiniteTable) -> Self {
        GroupDesc::Finite(Arc::new(table))
    }

    pub fn trivial() -> Self {
        Self::free_abelian(0)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            GroupDesc::FreeAbelian { .. } => "free-abelian",
            GroupDesc::Finite(_) => "finite",
            GroupDesc::Free { .. } => "free",
        }
    }

    pub fn order(&self) -> Option<usize> {
        match self {
            GroupDesc::Finite(t) => Some(t.order()),
            GroupDesc::FreeAbelian { gens } | GroupDesc::Free { gens } if gens.is_empty() => Some(1),
            _ => None,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == Some(1)
    }

    pub fn table(&self) -> Option<&FiniteTable> {
        match self {
            GroupDesc::Finite(t) => Some(t),
            _ => None,
        }
    }

    /// Names of the generators used in presentations: the basis or letters,
    /// or the labels of the minimal generating set of a finite group.
    pub fn generator_names(&self) -> Vec<String> {
        match self {
            GroupDesc::FreeAbelian { gens } | GroupDesc::Free { gens } => gens.clone(),
            GroupDesc::Finite(t) => t
                .minimal_generating_set()
                .iter()
                .map(|&i| t.label(i).to_string())
                .collect(),
        }
    }

    pub fn generators(&self) -> Vec<Element> {
        match self {
            GroupDesc::FreeAbelian { gens } => (0..gens.len()).map(|i| unit_vector(gens.len(), i)).collect(),
            GroupDesc::Free { gens } => (0..gens.len()).map(|i| Element::Word(vec![free::letter(i, false)])).collect(),
            GroupDesc::Finite(t) => t.minimal_generating_set().iter().map(|&i| Element::Index(i)).collect(),
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            GroupDesc::FreeAbelian { gens } => Element::Vector(vec![BigInt::zero(); gens.len()]),
            GroupDesc::Finite(t) => Element::Index(t.identity()),
            GroupDesc::Free { .. } => Element::Word(Vec::new()),
        }
    }

    pub fn check(&self, x: &Element) -> Result<()> {
        match (self, x) {
            (GroupDesc::FreeAbelian { gens }, Element::Vector(v)) if v.len() == gens.len() => Ok(()),
            (GroupDesc::Finite(t), Element::Index(i)) if *i < t.order() => Ok(()),
            (GroupDesc::Free { gens }, Element::Word(w))
                if free::is_reduced(w) && w.iter().all(|&l| free::generator_of(l) < gens.len()) =>
            {
                Ok(())
            }
            _ => Err(GroupError::ShapeMismatch(format!("{x:?} is not an element of {}", self.describe()))),
        }
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(match (self, x, y) {
            (GroupDesc::FreeAbelian { .. }, Element::Vector(a), Element::Vector(b)) => {
                Element::Vector(a.iter().zip(b).map(|(p, q)| p + q).collect())
            }
            (GroupDesc::Finite(t), Element::Index(a), Element::Index(b)) => Element::Index(t.mul(*a, *b)),
            (GroupDesc::Free { .. }, Element::Word(a), Element::Word(b)) => Element::Word(free::reduce_concat(&[a, b])),
            _ => unreachable!("checked above"),
        })
    }

    pub fn inv(&self, x: &Element) -> Result<Element> {
        self.check(x)?;
        Ok(match (self, x) {
            (GroupDesc::FreeAbelian { .. }, Element::Vector(a)) => Element::Vector(a.iter().map(|p| -p).collect()),
            (GroupDesc::Finite(t), Element::Index(a)) => Element::Index(t.inv(*a)),
            (GroupDesc::Free { .. }, Element::Word(a)) => Element::Word(free::inverse(a)),
            _ => unreachable!("checked above"),
        })
    }

    pub fn pow(&self, x: &Element, k: &BigInt) -> Result<Element> {
        self.check(x)?;
        Ok(match (self, x) {
            (GroupDesc::FreeAbelian { .. }, Element::Vector(a)) => Element::Vector(a.iter().map(|p| p * k).collect()),
            (GroupDesc::Finite(t), Element::Index(a)) => {
                let n = BigInt::from(t.order());
                let e = ((k % &n) + &n) % &n;
                Element::Index(t.pow(*a, e.to_i64().unwrap()))
            }
            (GroupDesc::Free { .. }, Element::Word(a)) => Element::Word(free::power(a, small(k)?)),
            _ => unreachable!("checked above"),
        })
    }

    pub fn product<'a>(&self, items: impl IntoIterator<Item = &'a Element>) -> Result<Element> {
        let mut acc = self.identity();
        for x in items {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    pub fn is_identity(&self, x: &Element) -> bool {
        *x == self.identity()
    }

    /// Writes an element as a word in `generators()`.
    pub fn spell(&self, x: &Element) -> Result<Vec<Letter>> {
        self.check(x)?;
        Ok(match (self, x) {
            (GroupDesc::FreeAbelian { .. }, Element::Vector(v)) => {
                let mut w = Vec::new();
                for (i, k) in v.iter().enumerate() {
                    w.extend(free::power(&[free::letter(i, false)], small(k)?));
                }
                w
            }
            (GroupDesc::Finite(t), Element::Index(i)) => t.spellings()[*i].clone(),
            (GroupDesc::Free { .. }, Element::Word(w)) => w.clone(),
            _ => unreachable!("checked above"),
        })
    }

    /// Evaluates a word in `generators()`.
    pub fn evaluate(&self, w: &[Letter]) -> Result<Element> {
        let gens = self.generators();
        let mut acc = self.identity();
        for &l in w {
            let g = gens
                .get(free::generator_of(l))
                .ok_or_else(|| GroupError::ShapeMismatch(format!("letter {l} out of range")))?;
            let g = if l < 0 { self.inv(g)? } else { g.clone() };
            acc = self.mul(&acc, &g)?;
        }
        Ok(acc)
    }

    /// Text form: `[k1,k2]` (free abelian), element label (finite), word
    /// with `.` between letters (free).
    pub fn format_element(&self, x: &Element) -> String {
        match (self, x) {
            (GroupDesc::FreeAbelian { .. }, Element::Vector(v)) => {
                format!("[{}]", v.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","))
            }
            (GroupDesc::Finite(t), Element::Index(i)) if *i < t.order() => t.label(*i).to_string(),
            (GroupDesc::Free { gens }, Element::Word(w)) => free::format_word(w, gens, "."),
            _ => format!("{x:?}"),
        }
    }

    pub fn parse_element(&self, s: &str) -> Result<Element> {
        let s = s.trim();
        let err = |msg: &str| GroupError::Parse(s.to_string(), msg.to_string());
        match self {
            GroupDesc::FreeAbelian { gens } => {
                let inner = s
                    .strip_prefix('[')
                    .and_then(|r| r.strip_suffix(']'))
                    .ok_or_else(|| err("expected [k1,k2,...]"))?;
                let v: Vec<BigInt> = if inner.trim().is_empty() {
                    Vec::new()
                } else {
                    inner
                        .split(',')
                        .map(|p| p.trim().parse::<BigInt>().map_err(|_| err("bad integer")))
                        .collect::<Result<_>>()?
                };
                if v.len() != gens.len() {
                    return Err(err(&format!("expected {} coordinates", gens.len())));
                }
                Ok(Element::Vector(v))
            }
            GroupDesc::Finite(t) => {
                if let Some(idx) = s.strip_prefix('#') {
                    let i: usize = idx.parse().map_err(|_| err("bad index"))?;
                    if i >= t.order() {
                        return Err(err("index out of range"));
                    }
                    Ok(Element::Index(i))
                } else {
                    t.index_of(s).map(Element::Index).ok_or_else(|| err("unknown element label"))
                }
            }
            GroupDesc::Free { gens } => free::parse_word(s, gens).map(Element::Word).map_err(|m| err(&m)),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            GroupDesc::FreeAbelian { gens } if gens.is_empty() => "1".to_string(),
            GroupDesc::FreeAbelian { gens } => format!("Z^{}", gens.len()),
            GroupDesc::Finite(t) => format!("finite group of order {}", t.order()),
            GroupDesc::Free { gens } => format!("F{}", gens.len()),
        }
    }
}

impl fmt::Display for GroupDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

pub(crate) fn unit_vector(n: usize, i: usize) -> Element {
    let mut v = vec![BigInt::zero(); n];
    v[i] = BigInt::from(1);
    Element::Vector(v)
}

pub(crate) fn small(k: &BigInt) -> Result<i64> {
    k.to_i64()
        .filter(|x| x.unsigned_abs() <= 1 << 20)
        .ok_or_else(|| GroupError::TooLarge(k.clone()))
}

/// Minimal number of generators.
pub fn group_rank(g: &GroupDesc) -> usize {
    match g {
        GroupDesc::FreeAbelian { gens } | GroupDesc::Free { gens } => gens.len(),
        GroupDesc::Finite(t) => t.rank(),
    }
}

/// Largest n with Z^n embedding, for the three classes in closed form.
pub fn geometric_rank_class(g: &GroupDesc) -> usize {
    match g {
        GroupDesc::FreeAbelian { gens } => gens.len(),
        GroupDesc::Finite(_) => 0,
        GroupDesc::Free { gens } => usize::from(!gens.is_empty()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vec(v: &[i64]) -> Element {
        Element::Vector(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn element_arithmetic() {
        let z2 = GroupDesc::free_abelian(2);
        assert_eq!(z2.mul(&vec(&[1, 0]), &vec(&[0, 3])).unwrap(), vec(&[1, 3]));
        let f2 = GroupDesc::free_named(&["a", "b"]);
        let ab = f2.parse_element("ab").unwrap();
        let bia = f2.parse_element("b^-1a").unwrap();
        assert_eq!(f2.mul(&ab, &bia).unwrap(), f2.parse_element("aa").unwrap());
        let z4 = GroupDesc::finite(FiniteTable::cyclic(4));
        assert_eq!(z4.inv(&Element::Index(1)).unwrap(), Element::Index(3));
    }

    #[test]
    fn shape_mismatch() {
        let z2 = GroupDesc::free_abelian(2);
        assert!(matches!(z2.mul(&vec(&[1]), &vec(&[0, 3])), Err(GroupError::ShapeMismatch(_))));
        let z4 = GroupDesc::finite(FiniteTable::cyclic(4));
        assert!(z4.check(&Element::Index(4)).is_err());
        assert!(GroupDesc::free(1).check(&Element::Word(vec![1, -1])).is_err());
    }

    #[test]
    fn ranks() {
        assert_eq!(group_rank(&GroupDesc::trivial()), 0);
        assert_eq!(group_rank(&GroupDesc::free(0)), 0);
        assert_eq!(group_rank(&GroupDesc::finite(FiniteTable::elementary_abelian(3))), 3);
        assert_eq!(group_rank(&GroupDesc::finite(FiniteTable::cyclic(6))), 1);
        assert_eq!(geometric_rank_class(&GroupDesc::free_abelian(3)), 3);
        assert_eq!(geometric_rank_class(&GroupDesc::finite(FiniteTable::symmetric(3))), 0);
        assert_eq!(geometric_rank_class(&GroupDesc::free(3)), 1);
        assert_eq!(geometric_rank_class(&GroupDesc::free(0)), 0);
    }

    #[test]
    fn spell_and_evaluate_agree() {
        let groups = [
            GroupDesc::free_abelian(3),
            GroupDesc::finite(FiniteTable::symmetric(3)),
            GroupDesc::free(2),
        ];
        let samples = [
            vec![vec(&[2, -1, 0]), vec(&[0, 0, 0])],
            (0..6).map(Element::Index).collect(),
            vec![Element::Word(vec![1, -2, -2]), Element::Word(vec![])],
        ];
        for (g, xs) in groups.iter().zip(samples) {
            for x in xs {
                assert_eq!(g.evaluate(&g.spell(&x).unwrap()).unwrap(), x);
                assert_eq!(g.parse_element(&g.format_element(&x)).unwrap(), x);
            }
        }
    }
}
