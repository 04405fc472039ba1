//! JSON form of the K3-graph together with the table of complements.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use twoelem::k3graph::{table1, K3Edge, K3Graph, K3Vertex};
use twoelem::lattice::{EdgeKind, LatticeTriple};

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<EdgeDoc>,
    pub table: Vec<RowDoc>,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDoc {
    pub triple: [i64; 3],
    pub g: i64,
    pub k: i64,
    pub perp: Option<String>,
    pub verified: bool,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub source: [i64; 3],
    pub target: [i64; 3],
    pub kind: String,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowDoc {
    pub g: i64,
    pub perp: String,
    pub perp_triple: [i64; 3],
    pub m_triple: [i64; 3],
}

fn arr(t: &LatticeTriple) -> [i64; 3] {
    [t.r, t.l, i64::from(t.delta)]
}

fn triple(a: [i64; 3]) -> Result<LatticeTriple> {
    let delta = u8::try_from(a[2]).context("δ must be 0 or 1")?;
    Ok(LatticeTriple::new(a[0], a[1], delta)?)
}

fn kind(name: &str) -> Result<EdgeKind> {
    EdgeKind::ALL.into_iter().find(|k| k.name() == name).with_context(|| format!("unknown edge kind {name:?}"))
}

pub fn export(g: &K3Graph) -> Result<GraphDoc> {
    let vertices = g
        .vertices
        .values()
        .map(|v| VertexDoc { triple: arr(&v.triple), g: v.g, k: v.k, perp: v.perp_label.clone(), verified: v.verified })
        .collect();
    let edges = g.edges.iter().map(|e| EdgeDoc { source: arr(&e.source), target: arr(&e.target), kind: e.kind.name().into() }).collect();
    let mut table = Vec::new();
    for row in table1() {
        table.push(RowDoc { g: row.g, perp: row.perp.to_string(), perp_triple: arr(&row.perp_triple()?), m_triple: arr(&row.m_triple()?) });
    }
    Ok(GraphDoc { vertices, edges, table })
}

/// Rebuilds the graph and checks it: stored genera must match the triples and
/// the edges must obey the transition rules.
pub fn import(doc: &GraphDoc) -> Result<K3Graph> {
    let mut g = K3Graph::default();
    for v in &doc.vertices {
        let t = triple(v.triple)?;
        if (t.genus_g()?, t.genus_k()?) != (v.g, v.k) {
            bail!("vertex {t}: stored g, k = {}, {} do not match", v.g, v.k);
        }
        let vertex = K3Vertex { triple: t, g: v.g, k: v.k, perp_label: v.perp.clone(), verified: v.verified };
        if g.vertices.insert(t, vertex).is_some() {
            bail!("vertex {t} listed twice");
        }
    }
    for e in &doc.edges {
        g.edges.push(K3Edge { source: triple(e.source)?, target: triple(e.target)?, kind: kind(&e.kind)? });
    }
    g.edges.sort();
    g.check()?;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use twoelem::k3graph::table1_graph;

    #[test]
    fn round_trip() {
        let g = table1_graph(None).unwrap();
        let doc = export(&g).unwrap();
        let text = serde_json::to_string(&doc).unwrap();
        let back: GraphDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(import(&back).unwrap(), g);
        assert_eq!(doc.table.len(), 43);
    }

    #[test]
    fn rejects_broken_edges() {
        let g = table1_graph(Some(1)).unwrap();
        let mut doc = export(&g).unwrap();
        doc.edges[0].kind = if doc.edges[0].kind == "odd" { "even_wu".into() } else { "odd".into() };
        assert!(import(&doc).is_err());
        let mut doc = export(&g).unwrap();
        doc.vertices[0].g += 1;
        assert!(import(&doc).is_err());
    }
}
