//! Graphs of groups and diagrams of groups, and presentations of their
//! fundamental groups.

mod presentation;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::graph::{AbstractGraph, EdgeId, EdgeOrbit, GraphError, ValidationReport, VertexId};
use crate::groups::free::{self, Letter};
use crate::groups::{Element, GroupDesc, GroupError, Hom};

pub use presentation::{Generator, GeneratorOwner, Presentation, PresentationError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GogError {
    #[error("invalid graph of groups:\n{0}")]
    Invalid(ValidationReport),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("cannot spell {0} in its vertex group")]
    SpellingFailure(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiagramClass {
    /// Every edge map is injective.
    GraphOfGroups,
    /// Some edge map is not injective.
    Diagram,
    /// Injectivity could not be decided for some edge map.
    Unknown,
}

impl fmt::Display for DiagramClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagramClass::GraphOfGroups => "graph-of-groups",
            DiagramClass::Diagram => "diagram",
            DiagramClass::Unknown => "unknown",
        })
    }
}

/// Graph with vertex groups, one edge group per orbit, and a map from the
/// edge group into the origin's vertex group for every half-edge.
///
/// Fields are public so that malformed data can be represented and
/// reported by [`GraphOfGroups::validate`]; every operation validates first.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GraphOfGroups {
    pub graph: AbstractGraph,
    pub vgroup: BTreeMap<VertexId, GroupDesc>,
    pub egroup: BTreeMap<EdgeOrbit, GroupDesc>,
    pub emap: BTreeMap<EdgeId, Hom>,
    /// Basepoint; the least vertex when absent.
    pub base: Option<VertexId>,
    /// Spanning tree; the breadth-first tree when absent.
    pub tree: Option<BTreeSet<EdgeOrbit>>,
}

/// What produced a relator of the fundamental-group presentation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RelatorSource {
    /// Defining relator of a vertex group.
    Vertex(VertexId),
    /// Edge relation `t_e · f_ē(c) · t_e⁻¹ = f_e(c)`.
    Edge(EdgeOrbit),
    /// `t_e = 1` for a tree orbit.
    Tree(EdgeOrbit),
}

/// Where each presentation generator comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    /// First global generator index of each vertex's generators.
    pub vertex_offset: BTreeMap<VertexId, usize>,
    /// Generator index of each orbit's stable letter, by positive half-edge.
    pub edge_letter: BTreeMap<EdgeId, usize>,
}

impl GraphOfGroups {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, v: &str, group: GroupDesc) -> Result<(), GogError> {
        self.graph.add_vertex(v)?;
        self.vgroup.insert(v.to_string(), group);
        Ok(())
    }

    /// Adds the orbit `{e, bar}` from `from` to `to` with edge group `group`,
    /// `f_e = along` and `f_bar = back`.
    #[allow(clippy::too_many_arguments)]
    pub fn add_edge(&mut self, e: &str, bar: &str, from: &str, to: &str, group: GroupDesc, along: Hom, back: Hom) -> Result<(), GogError> {
        self.graph.add_edge(e, bar, from, to)?;
        self.egroup.insert(EdgeOrbit::new(e, bar), group);
        self.emap.insert(e.to_string(), along);
        self.emap.insert(bar.to_string(), back);
        Ok(())
    }

    pub fn base(&self) -> VertexId {
        self.base
            .clone()
            .or_else(|| self.graph.least_vertex().cloned())
            .unwrap_or_default()
    }

    pub fn tree(&self) -> BTreeSet<EdgeOrbit> {
        self.tree.clone().unwrap_or_else(|| self.graph.spanning_tree())
    }

    pub fn vertex_group(&self, v: &str) -> &GroupDesc {
        &self.vgroup[v]
    }

    pub fn edge_group(&self, e: &str) -> &GroupDesc {
        &self.egroup[&self.graph.orbit_of(e)]
    }

    pub fn edge_map(&self, e: &str) -> &Hom {
        &self.emap[e]
    }

    pub fn orbits(&self) -> Vec<EdgeOrbit> {
        self.graph.orbits()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = self.graph.validate();
        let g = &self.graph;
        for v in &g.vertices {
            if !self.vgroup.contains_key(v) {
                report.push(format!("vertex {v}: no vertex group"));
            }
        }
        for v in self.vgroup.keys() {
            if !g.vertices.contains(v) {
                report.push(format!("vertex group given for unknown vertex {v}"));
            }
        }
        if !report.is_valid() {
            return report;
        }
        let orbits = g.orbits();
        for o in &orbits {
            let Some(group) = self.egroup.get(o) else {
                report.push(format!("edge {}: no edge group", o.plus));
                continue;
            };
            for e in [&o.plus, &o.minus] {
                let Some(h) = self.emap.get(e) else {
                    report.push(format!("edge {e}: no edge map"));
                    continue;
                };
                if h.src() != group {
                    report.push(format!(
                        "edge {e}: map source {} differs from the orbit's edge group {}",
                        h.src(),
                        group
                    ));
                }
                let target = &self.vgroup[g.origin(e)];
                if h.dst() != target {
                    report.push(format!(
                        "edge {e}: map target {} differs from the group {} at {}",
                        h.dst(),
                        target,
                        g.origin(e)
                    ));
                }
            }
        }
        for o in self.egroup.keys() {
            if !orbits.contains(o) {
                report.push(format!("edge group given for unknown orbit {o}"));
            }
        }
        for e in self.emap.keys() {
            if !g.has_edge(e) {
                report.push(format!("edge map given for unknown edge {e}"));
            }
        }
        if let Some(b) = &self.base {
            if !g.vertices.contains(b) {
                report.push(format!("base {b} is not a vertex"));
            }
        }
        if let Some(t) = &self.tree {
            if let Err(msg) = g.is_spanning_tree(t) {
                report.push(format!("tree: {msg}"));
            }
        }
        report
    }

    pub fn ensure_valid(&self) -> Result<(), GogError> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(GogError::Invalid(report))
        }
    }

    pub fn classify(&self) -> DiagramClass {
        let mut unknown = false;
        for h in self.emap.values() {
            match h.is_injective() {
                Ok(true) => {}
                Ok(false) => return DiagramClass::Diagram,
                Err(_) => unknown = true,
            }
        }
        if unknown {
            DiagramClass::Unknown
        } else {
            DiagramClass::GraphOfGroups
        }
    }

    /// Generator order: vertex generators (vertices sorted), then one
    /// stable letter per orbit (orbits sorted).
    pub fn layout(&self) -> Layout {
        let mut next = 0;
        let mut vertex_offset = BTreeMap::new();
        for (v, g) in &self.vgroup {
            vertex_offset.insert(v.clone(), next);
            next += g.generators().len();
        }
        let mut edge_letter = BTreeMap::new();
        for o in self.orbits() {
            edge_letter.insert(o.plus.clone(), next);
            next += 1;
        }
        Layout {
            vertex_offset,
            edge_letter,
        }
    }

    fn generators(&self) -> Vec<Generator> {
        let mut gens: Vec<Generator> = Vec::new();
        let edge_names: BTreeSet<String> = self.orbits().into_iter().map(|o| o.plus).collect();
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        for g in self.vgroup.values() {
            for name in g.generator_names() {
                *counts.entry(name).or_default() += 1;
            }
        }
        for (v, g) in &self.vgroup {
            for (k, name) in g.generator_names().into_iter().enumerate() {
                let name = if counts[&name] > 1 || edge_names.contains(&name) {
                    format!("{v}.{name}")
                } else {
                    name
                };
                gens.push(Generator {
                    name,
                    owner: GeneratorOwner::Vertex(v.clone(), k),
                });
            }
        }
        for o in self.orbits() {
            gens.push(Generator {
                name: o.plus.clone(),
                owner: GeneratorOwner::Edge(o.plus.clone()),
            });
        }
        gens
    }

    /// `x` at vertex `v` as a word in the presentation generators.
    pub fn spell_at(&self, layout: &Layout, v: &str, x: &Element) -> Result<Vec<Letter>, GogError> {
        let g = &self.vgroup[v];
        let w = g
            .spell(x)
            .map_err(|_| GogError::SpellingFailure(g.format_element(x)))?;
        let offset = layout.vertex_offset[v] as Letter;
        Ok(w.into_iter().map(|l| l.signum() * (l.abs() + offset)).collect())
    }

    /// Stable letter of a half-edge: `t_e` for the positive half-edge,
    /// its inverse for the other.
    pub fn edge_letter(&self, layout: &Layout, e: &str) -> Letter {
        let o = self.graph.orbit_of(e);
        let l = layout.edge_letter[&o.plus] as Letter + 1;
        if o.plus == e {
            l
        } else {
            -l
        }
    }

    fn vertex_relators(&self, layout: &Layout, v: &str) -> Vec<Vec<Letter>> {
        let offset = layout.vertex_offset[v];
        let shift = |w: &[Letter]| -> Vec<Letter> { w.iter().map(|&l| l.signum() * (l.abs() + offset as Letter)).collect() };
        match &self.vgroup[v] {
            GroupDesc::FreeAbelian { gens } => {
                let mut out = Vec::new();
                for i in 0..gens.len() {
                    for j in i + 1..gens.len() {
                        let (a, b) = (free::letter(i, false), free::letter(j, false));
                        out.push(shift(&[a, b, -a, -b]));
                    }
                }
                out
            }
            GroupDesc::Free { .. } => Vec::new(),
            GroupDesc::Finite(t) => {
                let gens = t.minimal_generating_set();
                let spell = t.spellings();
                let mut out = Vec::new();
                for x in 0..t.order() {
                    for (k, &s) in gens.iter().enumerate() {
                        let xs = t.mul(x, s);
                        let r = free::reduce_concat(&[&spell[x], &[free::letter(k, false)], &free::inverse(&spell[xs])]);
                        if !r.is_empty() && !out.contains(&shift(&r)) {
                            out.push(shift(&r));
                        }
                    }
                }
                out
            }
        }
    }

    /// `t_e · w(f_ē(c)) · t_e⁻¹ · w(f_e(c))⁻¹` for each generator `c` of the
    /// edge group of the orbit, `e` its positive half-edge.
    pub fn edge_relators(&self, layout: &Layout, o: &EdgeOrbit) -> Result<Vec<Vec<Letter>>, GogError> {
        let g = &self.graph;
        let t = self.edge_letter(layout, &o.plus);
        let along = &self.emap[&o.plus];
        let back = &self.emap[&o.minus];
        let mut out = Vec::new();
        for c in self.egroup[o].generators() {
            let fe = self.spell_at(layout, g.origin(&o.plus), &along.apply(&c)?)?;
            let fb = self.spell_at(layout, g.origin(&o.minus), &back.apply(&c)?)?;
            let r = free::reduce_concat(&[&[t], &fb, &[-t], &free::inverse(&fe)]);
            if !r.is_empty() {
                out.push(r);
            }
        }
        Ok(out)
    }

    /// Relators of `pi1_presentation` tagged with what produced them.
    pub fn relators_by_source(&self) -> Result<Vec<(RelatorSource, Vec<Letter>)>, GogError> {
        self.ensure_valid()?;
        let layout = self.layout();
        let mut out = Vec::new();
        for v in self.vgroup.keys() {
            for r in self.vertex_relators(&layout, v) {
                out.push((RelatorSource::Vertex(v.clone()), r));
            }
        }
        for o in self.orbits() {
            for r in self.edge_relators(&layout, &o)? {
                out.push((RelatorSource::Edge(o.clone()), r));
            }
        }
        for o in self.tree() {
            let r = vec![self.edge_letter(&layout, &o.plus)];
            out.push((RelatorSource::Tree(o), r));
        }
        Ok(out)
    }

    pub fn pi1_presentation(&self) -> Result<Presentation, GogError> {
        let relators = self.relators_by_source()?.into_iter().map(|(_, r)| r).collect();
        Ok(Presentation {
            generators: self.generators(),
            relators,
        })
    }

    /// The part on `vertices`, without the orbit `skip`. The stored tree is
    /// kept only if its restriction still spans.
    pub fn subgraph(&self, vertices: &BTreeSet<VertexId>, skip: Option<&EdgeOrbit>) -> GraphOfGroups {
        let graph = self.graph.induced(vertices, skip);
        let orbits: BTreeSet<EdgeOrbit> = graph.orbits().into_iter().collect();
        let tree = self.tree.as_ref().map(|t| t.intersection(&orbits).cloned().collect::<BTreeSet<_>>());
        let tree = tree.filter(|t| graph.is_spanning_tree(t).is_ok());
        GraphOfGroups {
            vgroup: vertices.iter().map(|v| (v.clone(), self.vgroup[v].clone())).collect(),
            egroup: orbits.iter().map(|o| (o.clone(), self.egroup[o].clone())).collect(),
            emap: graph.edges().map(|e| (e.clone(), self.emap[e].clone())).collect(),
            base: None,
            tree,
            graph,
        }
    }
}
