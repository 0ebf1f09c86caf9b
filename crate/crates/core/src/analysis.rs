//! Deciding whether π1 of a graph of free abelian groups is abelian, with
//! checkable certificates, and the vertex-rank bound on geometric rank.

use std::fmt;

use thiserror::Error;

use crate::gog::{DiagramClass, GraphOfGroups};
use crate::graph::EdgeOrbit;
use crate::groups::{geometric_rank_class, group_rank, Element, FiniteTable, GroupDesc, GroupError, Hom};
use crate::moves::{self, MoveError};
use crate::words::{self, LoopWord, PinchFreeForm, Syllable, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("unsupported group class: {0}")]
    UnsupportedClass(String),
    #[error("not a graph of groups: {0}")]
    NotGraphOfGroups(DiagramClass),
    #[error("family size {0} is larger than 4")]
    FamilyTooLarge(usize),
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Which part of the procedure produced a witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessStep {
    /// A tree edge with no isomorphic side: `[g_u, t g_v t⁻¹]`.
    Amalgam,
    /// Two loops after collapsing: `[t1, t2]`.
    TwoLoops,
    /// One loop with a non-surjective side: `a t a⁻¹ t⁻¹`.
    NonSurjective,
    /// One loop, both sides isomorphisms but different.
    Twisted,
}

impl fmt::Display for WitnessStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WitnessStep::Amalgam => "step 1",
            WitnessStep::TwoLoops => "step 3",
            WitnessStep::NonSurjective => "step 4a",
            WitnessStep::Twisted => "step 4b",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AbelianVerdict {
    /// π1 ≅ Z^rank; `note` is "G_v × Z" with one loop, "G_v" with none.
    Abelian { rank: usize, note: &'static str },
    /// `witness` is a commutator that is not the identity, as `reduced`
    /// (pinch-free) shows.
    NonAbelian {
        witness: LoopWord,
        reduced: PinchFreeForm,
        step: WitnessStep,
    },
}

impl AbelianVerdict {
    pub fn is_abelian(&self) -> bool {
        matches!(self, AbelianVerdict::Abelian { .. })
    }

    /// Text report; words use the loop grammar of `g`.
    pub fn report(&self, g: &GraphOfGroups) -> String {
        match self {
            AbelianVerdict::Abelian { rank, note } => format!("Abelian rank {rank} ({note})\n"),
            AbelianVerdict::NonAbelian { witness, reduced, step } => format!(
                "NonAbelian {step}\nwitness: {}\nreduced: {}\n",
                witness.format(g),
                reduced.word.format(g)
            ),
        }
    }
}

fn cogenerator(h: &Hom) -> Result<Element, AnalysisError> {
    Ok(h.cogenerator()?.expect("map is not surjective"))
}

fn inv(g: &GraphOfGroups, v: &str, x: &Element) -> Result<Element, AnalysisError> {
    Ok(g.vertex_group(v).inv(x)?)
}

/// `[g_x, g_y]` across a tree orbit with no isomorphic side in `h`, as
/// syllables; tree letters are trivial so only the vertex pieces remain.
fn amalgam_syllables(h: &GraphOfGroups, o: &EdgeOrbit) -> Result<Vec<Syllable>, AnalysisError> {
    let x = h.graph.origin(&o.plus).to_string();
    let y = h.graph.origin(&o.minus).to_string();
    let gx = cogenerator(h.edge_map(&o.plus))?;
    let gy = cogenerator(h.edge_map(&o.minus))?;
    Ok(vec![
        Syllable::Vertex(x.clone(), gx.clone()),
        Syllable::Vertex(y.clone(), gy.clone()),
        Syllable::Vertex(x.clone(), inv(h, &x, &gx)?),
        Syllable::Vertex(y.clone(), inv(h, &y, &gy)?),
    ])
}

fn certify(g: &GraphOfGroups, syllables: &[Syllable], step: WitnessStep) -> Result<AbelianVerdict, AnalysisError> {
    let witness = words::word_from_syllables(g, syllables)?;
    let reduced = words::reduce(g, &witness)?;
    assert!(!words::is_trivial(g, &witness)?, "witness for {step} is trivial");
    Ok(AbelianVerdict::NonAbelian { witness, reduced, step })
}

/// Decides whether π1 is abelian for a graph of free abelian groups.
///
/// Witnesses are built in the partly collapsed graph and pulled back to
/// `g` through syllables, which the collapse leaves unchanged: surviving
/// vertices keep their groups and non-tree orbits keep their letters.
pub fn recognize_abelian(g: &GraphOfGroups) -> Result<AbelianVerdict, AnalysisError> {
    g.ensure_valid().map_err(MoveError::from)?;
    match g.classify() {
        DiagramClass::GraphOfGroups => {}
        other => return Err(AnalysisError::NotGraphOfGroups(other)),
    }
    let groups = g.vgroup.values().chain(g.egroup.values());
    if let Some(bad) = groups.into_iter().find(|x| !matches!(x, GroupDesc::FreeAbelian { .. })) {
        return Err(AnalysisError::UnsupportedClass(bad.kind().to_string()));
    }

    for o in g.tree() {
        if !g.edge_map(&o.plus).is_iso()? && !g.edge_map(&o.minus).is_iso()? {
            return certify(g, &amalgam_syllables(g, &o)?, WitnessStep::Amalgam);
        }
    }
    let h = match moves::collapse_until_stuck(g)? {
        Ok(h) => h,
        Err((h, o)) => return certify(g, &amalgam_syllables(&h, &o)?, WitnessStep::Amalgam),
    };

    let v = h.base();
    let rank = group_rank(h.vertex_group(&v));
    let loops = h.orbits();
    match loops.as_slice() {
        [] => Ok(AbelianVerdict::Abelian { rank, note: "G_v" }),
        [o] => {
            let t = Syllable::Edge(o.plus.clone());
            let tb = Syllable::Edge(o.minus.clone());
            // With α1 = f_t̄ and α2 = f_t, t⁻¹ α1(c) t = α2(c).
            let (a1, a2) = (h.edge_map(&o.minus), h.edge_map(&o.plus));
            for (e, side) in [(&o.plus, a1), (&o.minus, a2)] {
                if let Some(a) = side.cogenerator()? {
                    // a outside im f_ē for the traversed e: e a⁻¹ ē cannot pinch
                    let syl = vec![
                        Syllable::Vertex(v.clone(), a.clone()),
                        Syllable::Edge(e.clone()),
                        Syllable::Vertex(v.clone(), inv(&h, &v, &a)?),
                        Syllable::Edge(h.graph.bar_of(e).to_string()),
                    ];
                    return certify(g, &syl, WitnessStep::NonSurjective);
                }
            }
            for c in h.egroup[o].generators() {
                let (x, y) = (a1.apply(&c)?, a2.apply(&c)?);
                if x != y {
                    let syl = vec![
                        Syllable::Vertex(v.clone(), x.clone()),
                        tb.clone(),
                        Syllable::Vertex(v.clone(), inv(&h, &v, &x)?),
                        t.clone(),
                    ];
                    return certify(g, &syl, WitnessStep::Twisted);
                }
            }
            Ok(AbelianVerdict::Abelian {
                rank: rank + 1,
                note: "G_v × Z",
            })
        }
        [o1, o2, ..] => {
            let syl = vec![
                Syllable::Edge(o1.plus.clone()),
                Syllable::Edge(o2.plus.clone()),
                Syllable::Edge(o1.minus.clone()),
                Syllable::Edge(o2.minus.clone()),
            ];
            certify(g, &syl, WitnessStep::TwoLoops)
        }
    }
}

/// `1 + max` geometric rank over the vertex groups.
pub fn rank_bound(g: &GraphOfGroups) -> usize {
    1 + g.vgroup.values().map(geometric_rank_class).max().unwrap_or(0)
}

/// `base × (Z/2)^m`, a finite group of rank at least `m`.
pub fn product_rank_family(m: usize, base: &FiniteTable) -> Result<GroupDesc, AnalysisError> {
    if m > 4 {
        return Err(AnalysisError::FamilyTooLarge(m));
    }
    let table = base.direct_product(&FiniteTable::elementary_abelian(m))?;
    let g = GroupDesc::finite(table);
    assert!(group_rank(&g) >= m);
    Ok(g)
}
