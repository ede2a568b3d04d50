//! Canonical JSON for graphs, maps and towers, and DOT export.
//!
//! Encoders are byte-exact: compact JSON, fields in fixed order, edges
//! `[a, b]` with `a < b` sorted lexicographically, loops omitted. Decoders
//! reject anything an encoder would not produce.

use std::fmt::Write as _;
use std::io::{self, Read, Write};

use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::builder::ProductVertex;
use crate::graph::FiniteGraph;
use crate::morphism::GraphMap;
use crate::tower::{verify_tower, Tower, TowerError, TowerViolation};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Content(String),
    #[error(transparent)]
    Tower(#[from] TowerError),
}

/// Failure to load a tower: either the bytes do not describe one, or they
/// describe one that breaks an invariant.
#[derive(Debug, Error)]
pub enum DecodeError {
    #[error("malformed tower file: {0}")]
    Malformed(#[from] FormatError),
    #[error("tower invariant violated: {0}")]
    Invalid(TowerViolation),
}

struct EdgeList<'a>(&'a FiniteGraph);

impl Serialize for EdgeList<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.cross_edge_count()))?;
        for (a, b) in self.0.edges() {
            seq.serialize_element(&[a, b])?;
        }
        seq.end()
    }
}

/// Serializes as `{"v": order, "edges": [[a, b], …]}`.
pub struct GraphJson<'a>(pub &'a FiniteGraph);

impl Serialize for GraphJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Graph", 2)?;
        st.serialize_field("v", &self.0.order())?;
        st.serialize_field("edges", &EdgeList(self.0))?;
        st.end()
    }
}

/// Serializes as `{"parent": [image(0), image(1), …]}`.
pub struct MapJson<'a>(pub &'a GraphMap);

impl Serialize for MapJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Map", 1)?;
        st.serialize_field("parent", self.0.image())?;
        st.end()
    }
}

struct TowerJson<'a>(&'a Tower);

struct Levels<'a>(&'a Tower);

impl Serialize for Levels<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.levels().iter().map(|g| GraphJson(g)))
    }
}

struct Bonds<'a>(&'a Tower);

impl Serialize for Bonds<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.bonds().iter().map(MapJson))
    }
}

impl Serialize for TowerJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let t = self.0;
        let mut st = s.serialize_struct("Tower", 5)?;
        st.serialize_field("n", &t.n())?;
        st.serialize_field("seed", &t.seed())?;
        st.serialize_field("levels", &Levels(t))?;
        st.serialize_field("bonds", &Bonds(t))?;
        st.serialize_field("per_level_m", t.per_level_m())?;
        st.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraph {
    v: usize,
    edges: Vec<[usize; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMap {
    parent: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTower {
    n: usize,
    seed: u64,
    levels: Vec<RawGraph>,
    bonds: Vec<RawMap>,
    per_level_m: Vec<usize>,
}

impl RawGraph {
    fn into_graph(self) -> Result<FiniteGraph, FormatError> {
        let mut g =
            FiniteGraph::discrete(self.v).map_err(|e| FormatError::Content(e.to_string()))?;
        let mut prev: Option<[usize; 2]> = None;
        for e @ [a, b] in self.edges {
            if a >= b || b >= self.v {
                return Err(FormatError::Content(format!(
                    "edge [{a},{b}] is not of the form a < b < {}",
                    self.v
                )));
            }
            if prev.is_some_and(|p| p >= e) {
                return Err(FormatError::Content(format!(
                    "edge [{a},{b}] is out of canonical order"
                )));
            }
            prev = Some(e);
            g.set_edge(a, b, true).expect("checked range");
        }
        Ok(g)
    }
}

pub fn encode_graph(g: &FiniteGraph) -> String {
    serde_json::to_string(&GraphJson(g)).expect("serializing to a string cannot fail")
}

pub fn decode_graph(s: &str) -> Result<FiniteGraph, FormatError> {
    serde_json::from_str::<RawGraph>(s)?.into_graph()
}

pub fn encode_map(h: &GraphMap) -> String {
    serde_json::to_string(&MapJson(h)).expect("serializing to a string cannot fail")
}

/// Image array of a `{"parent": […]}` document.
pub fn decode_map_image(s: &str) -> Result<Vec<usize>, FormatError> {
    Ok(serde_json::from_str::<RawMap>(s)?.parent)
}

/// Writes the canonical tower document followed by a newline.
pub fn write_tower<W: Write>(mut w: W, t: &Tower) -> Result<(), FormatError> {
    serde_json::to_writer(&mut w, &TowerJson(t))?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn encode_tower(t: &Tower) -> Vec<u8> {
    let mut out = Vec::new();
    write_tower(&mut out, t).expect("writing to memory cannot fail");
    out
}

/// Parses a tower checking only its shape, not its invariants.
pub fn read_tower_unchecked<R: Read>(r: R) -> Result<Tower, FormatError> {
    let raw: RawTower = serde_json::from_reader(io::BufReader::new(r))?;
    let levels = raw
        .levels
        .into_iter()
        .map(RawGraph::into_graph)
        .collect::<Result<Vec<_>, _>>()?;
    let bonds = raw.bonds.into_iter().map(|b| b.parent).collect();
    Ok(Tower::from_parts(
        raw.n,
        raw.seed,
        levels,
        bonds,
        raw.per_level_m,
    )?)
}

/// Parses a tower and re-verifies every invariant.
pub fn read_tower<R: Read>(r: R) -> Result<Tower, DecodeError> {
    let t = read_tower_unchecked(r)?;
    verify_tower(&t).map_err(DecodeError::Invalid)?;
    Ok(t)
}

pub fn decode_tower(bytes: &[u8]) -> Result<Tower, DecodeError> {
    read_tower(bytes)
}

fn vertex_label(t: &Tower, level: usize, v: usize) -> String {
    if level == 0 {
        v.to_string()
    } else {
        let p = ProductVertex::from_flat(v, t.per_level_m()[level - 1]);
        format!("({},{})", p.base, p.copy)
    }
}

/// DOT source for one level: vertices labeled by their product coordinates
/// `(i,s)` over the level below, loops omitted, edges in canonical order.
pub fn export_dot(t: &Tower, level: usize) -> Result<String, TowerError> {
    if level > t.depth() {
        return Err(TowerError::DepthOutOfRange {
            requested: level,
            available: t.depth(),
        });
    }
    let g = t.level(level);
    let mut out = String::new();
    writeln!(out, "graph level{level} {{").unwrap();
    for v in 0..g.order() {
        writeln!(out, "  {v} [label=\"{}\"];", vertex_label(t, level, v)).unwrap();
    }
    for (a, b) in g.edges() {
        writeln!(out, "  {a} -- {b};").unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::BuildMode;
    use crate::tower::build_tower;
    use std::sync::Arc;

    #[test]
    fn graph_json_is_canonical() {
        let g = FiniteGraph::from_edges(4, [(2, 1), (0, 3), (0, 1)]).unwrap();
        let s = encode_graph(&g);
        assert_eq!(s, r#"{"v":4,"edges":[[0,1],[0,3],[1,2]]}"#);
        assert_eq!(decode_graph(&s).unwrap(), g);
    }

    #[test]
    fn graph_decoder_rejects_non_canonical_input() {
        for bad in [
            r#"{"v":3,"edges":[[1,0]]}"#,
            r#"{"v":3,"edges":[[0,3]]}"#,
            r#"{"v":3,"edges":[[1,2],[0,1]]}"#,
            r#"{"v":3,"edges":[[0,1],[0,1]]}"#,
            r#"{"v":3,"edges":[[1,1]]}"#,
            r#"{"v":0,"edges":[]}"#,
            r#"{"v":3,"edges":[],"x":1}"#,
            r#"{"v":3}"#,
        ] {
            assert!(decode_graph(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn map_json() {
        let k3 = Arc::new(FiniteGraph::complete(3).unwrap());
        let k2 = Arc::new(FiniteGraph::complete(2).unwrap());
        let h = GraphMap::new(k3, k2, vec![0, 0, 1]).unwrap();
        let s = encode_map(&h);
        assert_eq!(s, r#"{"parent":[0,0,1]}"#);
        assert_eq!(decode_map_image(&s).unwrap(), vec![0, 0, 1]);
    }

    #[test]
    fn tower_round_trip_is_byte_identical() {
        let t = build_tower(2, 2, 5, BuildMode::Certified, None).unwrap();
        let bytes = encode_tower(&t);
        assert!(bytes.starts_with(br#"{"n":2,"seed":5,"levels":[{"v":2,"edges":[[0,1]]}"#));
        assert!(bytes.ends_with(b",\"per_level_m\":[6,12]}\n"));
        let back = decode_tower(&bytes).unwrap();
        assert_eq!(encode_tower(&back), bytes);
    }

    #[test]
    fn truncated_tower_is_malformed() {
        let t = build_tower(2, 1, 5, BuildMode::Certified, None).unwrap();
        let bytes = encode_tower(&t);
        let cut = &bytes[..bytes.len() / 2];
        assert!(matches!(decode_tower(cut), Err(DecodeError::Malformed(_))));
    }

    #[test]
    fn dot_export() {
        let t = build_tower(3, 1, 1, BuildMode::Certified, None).unwrap();
        let dot = export_dot(&t, 0).unwrap();
        assert_eq!(
            dot,
            "graph level0 {\n  0 [label=\"0\"];\n  1 [label=\"1\"];\n  2 [label=\"2\"];\n  0 -- 1;\n  0 -- 2;\n  1 -- 2;\n}\n"
        );
        let dot1 = export_dot(&t, 1).unwrap();
        assert!(dot1.contains("  41 [label=\"(1,1)\"];\n"));
        assert_eq!(dot1.matches(" -- ").count(), t.level(1).cross_edge_count());
        assert!(export_dot(&t, 2).is_err());
    }
}
