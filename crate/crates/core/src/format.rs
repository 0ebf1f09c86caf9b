//! Text file format for graphs of groups (TOML).
//!
//! ```toml
//! base = "v"            # optional
//! tree = ["e"]          # optional; one half-edge per tree orbit
//!
//! [vertices.v]
//! kind = "free-abelian" # or "free", "finite"
//! gens = ["a"]
//!
//! [vertices.w]
//! kind = "finite"
//! preset = "cyclic:4"   # or elements = [...] and table = [[...]]
//!
//! [edges.t]
//! bar = "t_bar"
//! from = "v"
//! to = "v"
//! group = { kind = "free-abelian", gens = ["c"] }
//! map = { matrix = [[1]] }      # f_t
//! bar_map = { matrix = [[1]] }  # f_t_bar
//! ```
//!
//! A map is one of `matrix` (target free abelian; column j is the image of
//! generator j), `images` (element strings of the target, one per source
//! generator; for a finite source the generators are `on` or the minimal
//! generating set), or `table` (finite source; image of every element).

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use toml::Spanned;

use crate::gog::GraphOfGroups;
use crate::groups::{Element, FiniteTable, GroupDesc, Hom, HomData};
use crate::quotients::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {key}: {msg}")]
    Semantic { line: usize, key: String, msg: String },
    #[error("cannot serialize: {0}")]
    Serialize(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tree: Option<Vec<String>>,
    #[serde(default)]
    vertices: BTreeMap<String, Spanned<GroupDoc>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    edges: BTreeMap<String, Spanned<EdgeDoc>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupDoc {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gens: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    elements: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    table: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    #[serde(default)]
    bar: Option<String>,
    from: String,
    to: String,
    group: GroupDoc,
    map: MapDoc,
    bar_map: MapDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    images: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    on: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    table: Option<Vec<String>>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

fn preset(spec: &str) -> Result<FiniteTable, String> {
    let (name, n) = match spec.split_once(':') {
        Some((name, n)) => (name, Some(n.parse::<usize>().map_err(|_| format!("bad size in preset {spec:?}"))?)),
        None => (spec, None),
    };
    let table = match (name, n) {
        ("trivial", None) => FiniteTable::trivial(),
        ("quaternion", None) => FiniteTable::quaternion(),
        ("cyclic", Some(n)) if n >= 1 => FiniteTable::cyclic(n),
        ("dihedral", Some(n)) if n >= 1 => FiniteTable::dihedral(n),
        ("symmetric", Some(n)) if (1..=6).contains(&n) => FiniteTable::symmetric(n),
        ("alternating", Some(n)) if (1..=6).contains(&n) => FiniteTable::alternating(n),
        ("elementary-abelian", Some(n)) if n <= 12 => FiniteTable::elementary_abelian(n),
        _ => return Err(format!("unknown preset {spec:?}")),
    };
    Ok(table)
}

fn group_from_doc(doc: &GroupDoc) -> Result<GroupDesc, String> {
    let names = |gens: &Option<Vec<String>>| -> Result<Vec<String>, String> {
        gens.clone().ok_or_else(|| "missing gens".to_string())
    };
    let check_unused = |fields: &[(&str, bool)]| -> Result<(), String> {
        match fields.iter().find(|(_, present)| *present) {
            Some((name, _)) => Err(format!("field {name} does not apply to kind {}", doc.kind)),
            None => Ok(()),
        }
    };
    match doc.kind.as_str() {
        "free-abelian" | "free" => {
            check_unused(&[
                ("preset", doc.preset.is_some()),
                ("elements", doc.elements.is_some()),
                ("table", doc.table.is_some()),
            ])?;
            let gens = names(&doc.gens)?;
            let gens: Vec<&str> = gens.iter().map(String::as_str).collect();
            let mut seen = std::collections::BTreeSet::new();
            if let Some(dup) = gens.iter().find(|g| !seen.insert(**g)) {
                return Err(format!("duplicate generator {dup}"));
            }
            if let Some(bad) = gens.iter().find(|g| !valid_name(g)) {
                return Err(format!("bad generator name {bad:?}"));
            }
            Ok(if doc.kind == "free" {
                GroupDesc::free_named(&gens)
            } else {
                GroupDesc::free_abelian_named(&gens)
            })
        }
        "finite" => {
            check_unused(&[("gens", doc.gens.is_some())])?;
            let table = match (&doc.preset, &doc.elements, &doc.table) {
                (Some(p), None, None) => preset(p)?,
                (None, Some(labels), Some(mul)) => FiniteTable::new(labels.clone(), mul.clone()).map_err(|e| e.to_string())?,
                _ => return Err("finite group needs either preset or elements and table".into()),
            };
            Ok(GroupDesc::finite(table))
        }
        other => Err(format!("unknown kind {other:?}")),
    }
}

/// Letters, digits, and `_`, starting with a letter or `_`.
fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

fn group_to_doc(g: &GroupDesc) -> GroupDoc {
    let mut doc = GroupDoc {
        kind: g.kind().to_string(),
        gens: None,
        preset: None,
        elements: None,
        table: None,
    };
    match g {
        GroupDesc::FreeAbelian { gens } | GroupDesc::Free { gens } => doc.gens = Some(gens.clone()),
        GroupDesc::Finite(t) => {
            doc.elements = Some(t.labels().to_vec());
            doc.table = Some(t.table().to_vec());
        }
    }
    doc
}

fn map_from_doc(doc: &MapDoc, src: &GroupDesc, dst: &GroupDesc) -> Result<Hom, String> {
    let parse_all = |group: &GroupDesc, items: &[String]| -> Result<Vec<Element>, String> {
        items.iter().map(|s| group.parse_element(s).map_err(|e| e.to_string())).collect()
    };
    let hom = match (&doc.matrix, &doc.images, &doc.table) {
        (Some(rows), None, None) => {
            if doc.on.is_some() {
                return Err("on only applies to images".into());
            }
            let cols = src.generators().len();
            if rows.iter().any(|r| r.len() != cols) {
                return Err(format!("matrix rows must have {cols} entries"));
            }
            Hom::from_matrix(src.clone(), dst.clone(), IntMatrix::from_rows(rows, cols))
        }
        (None, Some(images), None) => {
            let images = parse_all(dst, images)?;
            match src {
                GroupDesc::Finite(_) => {
                    let on = match &doc.on {
                        Some(on) => parse_all(src, on)?,
                        None => src.generators(),
                    };
                    let on: Vec<usize> = on
                        .iter()
                        .map(|x| match x {
                            Element::Index(i) => *i,
                            _ => unreachable!("finite group"),
                        })
                        .collect();
                    if on.len() != images.len() {
                        return Err(format!("{} images for {} generators", images.len(), on.len()));
                    }
                    Hom::extend_finite(src, dst, &on, &images)
                }
                _ => {
                    if doc.on.is_some() {
                        return Err("on only applies to finite sources".into());
                    }
                    Hom::from_images(src.clone(), dst.clone(), images)
                }
            }
        }
        (None, None, Some(table)) => {
            if doc.on.is_some() {
                return Err("on only applies to images".into());
            }
            Hom::from_table(src.clone(), dst.clone(), parse_all(dst, table)?)
        }
        _ => return Err("map needs exactly one of matrix, images, table".into()),
    };
    hom.map_err(|e| e.to_string())
}

fn map_to_doc(h: &Hom) -> Result<MapDoc, FormatError> {
    let mut doc = MapDoc {
        matrix: None,
        images: None,
        on: None,
        table: None,
    };
    let format_all = |xs: &[Element]| xs.iter().map(|x| h.dst().format_element(x)).collect();
    match h.data() {
        HomData::Matrix(m) => {
            let rows = m
                .to_rows()
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|k| k.to_i64().ok_or_else(|| FormatError::Serialize(format!("entry {k} too large"))))
                        .collect()
                })
                .collect::<Result<_, _>>()?;
            doc.matrix = Some(rows);
        }
        HomData::Images(xs) => doc.images = Some(format_all(xs)),
        HomData::Table(xs) => doc.table = Some(format_all(xs)),
    }
    Ok(doc)
}

/// Parses a graph of groups. The result is structurally checked (every
/// edge has a partner, groups and maps are well formed) but not validated
/// as a whole; call [`GraphOfGroups::validate`] for that.
pub fn parse_gog(text: &str) -> Result<GraphOfGroups, FormatError> {
    let doc: FileDoc = toml::from_str(text).map_err(|e| FormatError::Syntax {
        line: e.span().map(|s| line_of(text, s.start)).unwrap_or(1),
        msg: e.message().to_string(),
    })?;
    let semantic = |span: std::ops::Range<usize>, key: String, msg: String| FormatError::Semantic {
        line: line_of(text, span.start),
        key,
        msg,
    };
    let mut g = GraphOfGroups::new();
    for (v, doc) in &doc.vertices {
        let key = format!("vertices.{v}");
        if !valid_name(v) {
            return Err(semantic(doc.span(), key, "bad vertex name".into()));
        }
        let group = group_from_doc(doc.get_ref()).map_err(|m| semantic(doc.span(), key.clone(), m))?;
        g.add_vertex(v, group).map_err(|e| semantic(doc.span(), key, e.to_string()))?;
    }
    for (e, spanned) in &doc.edges {
        let key = format!("edges.{e}");
        let err = |msg: String| semantic(spanned.span(), key.clone(), msg);
        let edge = spanned.get_ref();
        let bar = edge.bar.as_ref().ok_or_else(|| err(format!("edge {e} has no bar partner")))?;
        if !valid_name(e) || !valid_name(bar) {
            return Err(err("bad edge name".into()));
        }
        for v in [&edge.from, &edge.to] {
            if !g.graph.vertices.contains(v) {
                return Err(err(format!("unknown vertex {v}")));
            }
        }
        let group = group_from_doc(&edge.group).map_err(|m| err(format!("group: {m}")))?;
        let along = map_from_doc(&edge.map, &group, g.vertex_group(&edge.from)).map_err(|m| err(format!("map: {m}")))?;
        let back =
            map_from_doc(&edge.bar_map, &group, g.vertex_group(&edge.to)).map_err(|m| err(format!("bar_map: {m}")))?;
        g.add_edge(e, bar, &edge.from, &edge.to, group, along, back)
            .map_err(|x| err(x.to_string()))?;
    }
    g.base = doc.base.clone();
    if let Some(tree) = &doc.tree {
        let mut orbits = std::collections::BTreeSet::new();
        for e in tree {
            if !g.graph.has_edge(e) {
                return Err(FormatError::Semantic {
                    line: 1,
                    key: "tree".into(),
                    msg: format!("unknown edge {e}"),
                });
            }
            orbits.insert(g.graph.orbit_of(e));
        }
        g.tree = Some(orbits);
    }
    Ok(g)
}

/// Canonical text: one `[edges.e]` per orbit keyed by its positive
/// half-edge, finite groups as explicit tables.
pub fn serialize_gog(g: &GraphOfGroups) -> Result<String, FormatError> {
    let spanned = |x| Spanned::new(0..0, x);
    let mut doc = FileDoc {
        base: g.base.clone(),
        tree: g.tree.as_ref().map(|t| t.iter().map(|o| o.plus.clone()).collect()),
        vertices: BTreeMap::new(),
        edges: BTreeMap::new(),
    };
    for (v, group) in &g.vgroup {
        doc.vertices.insert(v.clone(), spanned(group_to_doc(group)));
    }
    for o in g.orbits() {
        let edge = EdgeDoc {
            bar: Some(o.minus.clone()),
            from: g.graph.origin(&o.plus).to_string(),
            to: g.graph.origin(&o.minus).to_string(),
            group: group_to_doc(&g.egroup[&o]),
            map: map_to_doc(g.edge_map(&o.plus))?,
            bar_map: map_to_doc(g.edge_map(&o.minus))?,
        };
        doc.edges.insert(o.plus.clone(), Spanned::new(0..0, edge));
    }
    toml::to_string(&doc).map_err(|e| FormatError::Serialize(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gog::DiagramClass;

    const TORUS: &str = r#"
[vertices.v]
kind = "free-abelian"
gens = ["a"]

[edges.t]
bar = "t_bar"
from = "v"
to = "v"
group = { kind = "free-abelian", gens = ["c"] }
map = { matrix = [[1]] }
bar_map = { matrix = [[1]] }
"#;

    #[test]
    fn torus_parses() {
        let g = parse_gog(TORUS).unwrap();
        assert!(g.validate().is_valid());
        assert_eq!(g.pi1_presentation().unwrap().to_text(), "a\nt\n--\nt a t^-1 a^-1\n");
    }

    #[test]
    fn round_trip_is_stable() {
        let g = parse_gog(TORUS).unwrap();
        let text = serialize_gog(&g).unwrap();
        let h = parse_gog(&text).unwrap();
        assert_eq!(g, h);
        assert_eq!(serialize_gog(&h).unwrap(), text);
    }

    #[test]
    fn finite_presets_and_images() {
        let text = r#"
base = "u"
tree = ["e"]

[vertices.u]
kind = "finite"
preset = "cyclic:4"

[vertices.w]
kind = "finite"
preset = "cyclic:6"

[edges.e]
bar = "e_bar"
from = "u"
to = "w"
group = { kind = "finite", preset = "cyclic:4" }
map = { images = ["c1"] }
bar_map = { images = ["c3"], on = ["c1"] }
"#;
        let g = parse_gog(text).unwrap();
        assert_eq!(g.classify(), DiagramClass::Diagram);
        let s = serialize_gog(&g).unwrap();
        let h = parse_gog(&s).unwrap();
        assert_eq!(g, h);
        assert_eq!(serialize_gog(&h).unwrap(), s);
    }

    #[test]
    fn free_vertex_images() {
        let text = r#"
[vertices.x]
kind = "free"
gens = ["a", "b"]

[edges.e]
bar = "f"
from = "x"
to = "x"
group = { kind = "free-abelian", gens = ["c"] }
map = { images = ["a.b.a^-1.b^-1"] }
bar_map = { images = ["1"] }
"#;
        let g = parse_gog(text).unwrap();
        let s = serialize_gog(&g).unwrap();
        assert_eq!(parse_gog(&s).unwrap(), g);
    }

    #[test]
    fn missing_bar_names_the_edge() {
        let text = TORUS.replace("bar = \"t_bar\"\n", "");
        let err = parse_gog(&text).unwrap_err();
        assert!(err.to_string().contains("edge t has no bar partner"), "{err}");
        assert!(matches!(err, FormatError::Semantic { line: 6, .. }), "{err:?}");
    }

    #[test]
    fn syntax_errors_have_lines() {
        let err = parse_gog("[vertices.v]\nkind = \n").unwrap_err();
        assert!(matches!(err, FormatError::Syntax { line: 2, .. }), "{err:?}");
        let err = parse_gog("[vertices.v]\nkind = \"weird\"\n").unwrap_err();
        assert!(err.to_string().contains("unknown kind"), "{err}");
    }
}
