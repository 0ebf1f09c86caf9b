//! Abstract graphs: vertices, half-edges with a fixed-point-free involution
//! `bar`, and an origin map `d0`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

pub type VertexId = String;
pub type EdgeId = String;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {0} is a loop and cannot be contracted")]
    LoopContraction(EdgeId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("duplicate id {0}")]
    Duplicate(String),
}

/// A pair `{e, bar(e)}` oriented by its lexicographically least half-edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeOrbit {
    pub plus: EdgeId,
    pub minus: EdgeId,
}

impl EdgeOrbit {
    pub fn new(e: &str, bar: &str) -> Self {
        let (plus, minus) = if e <= bar { (e, bar) } else { (bar, e) };
        EdgeOrbit {
            plus: plus.to_string(),
            minus: minus.to_string(),
        }
    }

    pub fn contains(&self, e: &str) -> bool {
        self.plus == e || self.minus == e
    }
}

impl fmt::Display for EdgeOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.plus, self.minus)
    }
}

/// Violated invariants, one message each; empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, msg: impl Into<String>) {
        self.violations.push(msg.into());
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "violation: {v}")?;
        }
        Ok(())
    }
}

/// Raw graph data. Nothing is enforced on construction; use
/// [`AbstractGraph::validate`] to check the invariants.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AbstractGraph {
    pub vertices: BTreeSet<VertexId>,
    pub bar: BTreeMap<EdgeId, EdgeId>,
    pub d0: BTreeMap<EdgeId, VertexId>,
}

impl AbstractGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, v: &str) -> Result<(), GraphError> {
        if !self.vertices.insert(v.to_string()) {
            return Err(GraphError::Duplicate(v.to_string()));
        }
        Ok(())
    }

    /// Adds `e` from `from` to `to` together with `bar` going back.
    pub fn add_edge(&mut self, e: &str, bar: &str, from: &str, to: &str) -> Result<(), GraphError> {
        for id in [e, bar] {
            if self.d0.contains_key(id) {
                return Err(GraphError::Duplicate(id.to_string()));
            }
        }
        if e == bar {
            return Err(GraphError::Duplicate(e.to_string()));
        }
        for v in [from, to] {
            if !self.vertices.contains(v) {
                return Err(GraphError::UnknownVertex(v.to_string()));
            }
        }
        self.bar.insert(e.to_string(), bar.to_string());
        self.bar.insert(bar.to_string(), e.to_string());
        self.d0.insert(e.to_string(), from.to_string());
        self.d0.insert(bar.to_string(), to.to_string());
        Ok(())
    }

    /// All half-edges in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = &EdgeId> {
        self.d0.keys()
    }

    pub fn has_edge(&self, e: &str) -> bool {
        self.d0.contains_key(e) && self.bar.contains_key(e)
    }

    pub fn bar_of(&self, e: &str) -> &str {
        &self.bar[e]
    }

    pub fn origin(&self, e: &str) -> &str {
        &self.d0[e]
    }

    /// `d0(bar(e))`.
    pub fn terminus(&self, e: &str) -> &str {
        self.origin(self.bar_of(e))
    }

    pub fn is_loop(&self, e: &str) -> bool {
        self.origin(e) == self.terminus(e)
    }

    pub fn orbit_of(&self, e: &str) -> EdgeOrbit {
        EdgeOrbit::new(e, self.bar_of(e))
    }

    /// Edge orbits sorted by positive half-edge.
    pub fn orbits(&self) -> Vec<EdgeOrbit> {
        let set: BTreeSet<EdgeOrbit> = self.d0.keys().map(|e| self.orbit_of(e)).collect();
        set.into_iter().collect()
    }

    /// Half-edges with origin `v`, sorted.
    pub fn edges_at<'a>(&'a self, v: &'a str) -> impl Iterator<Item = &'a EdgeId> + 'a {
        self.d0.iter().filter(move |(_, o)| o.as_str() == v).map(|(e, _)| e)
    }

    pub fn least_vertex(&self) -> Option<&VertexId> {
        self.vertices.iter().next()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        if self.vertices.is_empty() {
            report.push("graph has no vertices");
        }
        for (e, b) in &self.bar {
            if e == b {
                report.push(format!("edge {e}: involution has fixed point"));
            } else if !self.bar.contains_key(b) {
                report.push(format!("edge {e}: bar partner {b} does not exist"));
            } else if self.bar[b] != *e {
                report.push(format!("edge {e}: bar is not an involution ({b} maps to {})", self.bar[b]));
            }
            if !self.d0.contains_key(e) {
                report.push(format!("edge {e}: origin missing"));
            }
        }
        for (e, v) in &self.d0 {
            if !self.bar.contains_key(e) {
                report.push(format!("edge {e}: bar missing"));
            }
            if !self.vertices.contains(v) {
                report.push(format!("edge {e}: origin vertex {v} does not exist"));
            }
        }
        if report.is_valid() && !self.vertices.is_empty() {
            let components = self.components(None);
            if components.len() > 1 {
                let list: Vec<String> = components
                    .iter()
                    .map(|c| c.iter().cloned().collect::<Vec<_>>().join(","))
                    .collect();
                report.push(format!("disconnected: components {{{}}}", list.join("} {")));
            }
        }
        report
    }

    /// Connected components ignoring the edges of `skip`, each sorted, listed
    /// by least vertex.
    pub fn components(&self, skip: Option<&EdgeOrbit>) -> Vec<BTreeSet<VertexId>> {
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        let mut out = Vec::new();
        for start in &self.vertices {
            if seen.contains(start.as_str()) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut queue = VecDeque::from([start.as_str()]);
            seen.insert(start);
            while let Some(v) = queue.pop_front() {
                comp.insert(v.to_string());
                for e in self.edges_at(v) {
                    if skip.is_some_and(|o| o.contains(e)) {
                        continue;
                    }
                    let w = self.terminus(e);
                    if seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Breadth-first spanning tree from the least vertex, taking half-edges
    /// at each vertex in sorted order.
    pub fn spanning_tree(&self) -> BTreeSet<EdgeOrbit> {
        let mut tree = BTreeSet::new();
        let Some(root) = self.least_vertex() else {
            return tree;
        };
        let mut seen: BTreeSet<&str> = BTreeSet::from([root.as_str()]);
        let mut queue = VecDeque::from([root.as_str()]);
        while let Some(v) = queue.pop_front() {
            for e in self.edges_at(v) {
                let w = self.terminus(e);
                if seen.insert(w) {
                    tree.insert(self.orbit_of(e));
                    queue.push_back(w);
                }
            }
        }
        tree
    }

    /// Whether `tree` is a spanning tree: no loops, |V| - 1 orbits, connected.
    pub fn is_spanning_tree(&self, tree: &BTreeSet<EdgeOrbit>) -> Result<(), String> {
        for o in tree {
            if !self.has_edge(&o.plus) || self.bar_of(&o.plus) != o.minus {
                return Err(format!("tree orbit {o} is not an edge orbit"));
            }
            if self.is_loop(&o.plus) {
                return Err(format!("tree orbit {o} is a loop"));
            }
        }
        if tree.len() + 1 != self.vertices.len() {
            return Err(format!(
                "tree has {} orbits but the graph has {} vertices",
                tree.len(),
                self.vertices.len()
            ));
        }
        let sub = self.restrict_to(tree);
        if sub.components(None).len() != 1 {
            return Err("tree does not span the graph".into());
        }
        Ok(())
    }

    /// Same vertices, only the edges of `orbits`.
    pub fn restrict_to(&self, orbits: &BTreeSet<EdgeOrbit>) -> AbstractGraph {
        let mut g = AbstractGraph {
            vertices: self.vertices.clone(),
            ..Default::default()
        };
        for o in orbits {
            for e in [&o.plus, &o.minus] {
                g.bar.insert(e.clone(), self.bar[e].clone());
                g.d0.insert(e.clone(), self.d0[e].clone());
            }
        }
        g
    }

    /// Subgraph induced on `vertices` minus the orbit `skip`.
    pub fn induced(&self, vertices: &BTreeSet<VertexId>, skip: Option<&EdgeOrbit>) -> AbstractGraph {
        let mut g = AbstractGraph {
            vertices: vertices.clone(),
            ..Default::default()
        };
        for (e, v) in &self.d0 {
            if skip.is_some_and(|o| o.contains(e)) {
                continue;
            }
            if vertices.contains(v) && vertices.contains(self.terminus(e)) {
                g.d0.insert(e.clone(), v.clone());
                g.bar.insert(e.clone(), self.bar[e].clone());
            }
        }
        g
    }

    /// Contracts the non-loop edge `e`: `d0(e)` merges into `d0(bar(e))`.
    /// Returns the new graph and the vertex merge map.
    pub fn contract_edge_graph(&self, e: &str) -> Result<(AbstractGraph, BTreeMap<VertexId, VertexId>), GraphError> {
        if !self.has_edge(e) {
            return Err(GraphError::UnknownEdge(e.to_string()));
        }
        if self.is_loop(e) {
            return Err(GraphError::LoopContraction(e.to_string()));
        }
        let absorbed = self.origin(e).to_string();
        let survivor = self.terminus(e).to_string();
        let merge: BTreeMap<VertexId, VertexId> = self
            .vertices
            .iter()
            .map(|v| {
                let image = if *v == absorbed { survivor.clone() } else { v.clone() };
                (v.clone(), image)
            })
            .collect();
        let bar = self.bar_of(e);
        let mut g = AbstractGraph {
            vertices: self.vertices.iter().filter(|v| **v != absorbed).cloned().collect(),
            ..Default::default()
        };
        for (f, v) in &self.d0 {
            if f == e || f == bar {
                continue;
            }
            g.d0.insert(f.clone(), merge[v].clone());
            g.bar.insert(f.clone(), self.bar[f].clone());
        }
        Ok((g, merge))
    }
}
