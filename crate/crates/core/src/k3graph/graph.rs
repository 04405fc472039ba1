use alloc::collections::btree_map::Entry;
use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use super::table::table1;
use crate::error::{Error, Result};
use crate::lattice::{EdgeKind, LatticeTriple};

/// A vertex `[M]` of the K3-graph, identified with the triple of `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K3Vertex {
    pub triple: LatticeTriple,
    pub g: i64,
    pub k: i64,
    /// `M⊥` as listed in the table of complements, when the vertex appears there.
    pub perp_label: Option<String>,
    /// False for vertices produced by the transition rules alone: their
    /// existence as a K3 type is not checked here.
    pub verified: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct K3Edge {
    pub source: LatticeTriple,
    pub target: LatticeTriple,
    pub kind: EdgeKind,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct K3Graph {
    pub vertices: BTreeMap<LatticeTriple, K3Vertex>,
    pub edges: Vec<K3Edge>,
}

/// Lorentzian sublattice triples that fit in the K3 lattice: `1 ≤ r ≤ 20`,
/// parity of `r − l`, and `g = (22 − r − l)/2 ≥ 0`.
pub fn admissible(t: &LatticeTriple) -> bool {
    (1..=20).contains(&t.r) && t.genus_g().is_ok() && t.genus_k().is_ok()
}

fn vertex(t: LatticeTriple) -> Result<K3Vertex> {
    Ok(K3Vertex { triple: t, g: t.genus_g()?, k: t.genus_k()?, perp_label: None, verified: false })
}

/// Closure of `seeds` under the odd, even Wu and even non-Wu transitions,
/// `depth` steps deep (unbounded when `None`; `r` grows along every edge so the
/// closure is finite).
pub fn build_graph(seeds: &[LatticeTriple], depth: Option<usize>) -> Result<K3Graph> {
    let mut g = K3Graph::default();
    let mut queue = VecDeque::new();
    for &s in seeds {
        if !admissible(&s) {
            return Err(Error::InvalidTriple(format!("seed {s} is not admissible")));
        }
        if let Entry::Vacant(e) = g.vertices.entry(s) {
            e.insert(vertex(s)?);
            queue.push_back((s, 0usize));
        }
    }
    let mut seen_edges = BTreeSet::new();
    while let Some((t, d)) = queue.pop_front() {
        if depth.is_some_and(|m| d >= m) {
            continue;
        }
        for kind in EdgeKind::ALL {
            let Ok(next) = t.perp_transition(kind) else { continue };
            if !admissible(&next) {
                continue;
            }
            if !seen_edges.insert((t, next)) {
                return Err(Error::Inconsistent(format!("multiple edges {t} → {next}")));
            }
            g.edges.push(K3Edge { source: t, target: next, kind });
            if let Entry::Vacant(e) = g.vertices.entry(next) {
                e.insert(vertex(next)?);
                queue.push_back((next, d + 1));
            }
        }
    }
    g.edges.sort();
    Ok(g)
}

/// The graph generated by the `M` triples of the complement table, with those
/// vertices marked verified and labelled by their `M⊥`.
pub fn table1_graph(depth: Option<usize>) -> Result<K3Graph> {
    let rows = table1();
    let mut seeds = Vec::with_capacity(rows.len());
    let mut labels = BTreeMap::new();
    for r in &rows {
        let m = r.validate()?.complement()?;
        seeds.push(m);
        labels.insert(m, r.perp.to_string());
    }
    let mut g = build_graph(&seeds, depth)?;
    for (t, label) in labels {
        if let Some(v) = g.vertices.get_mut(&t) {
            v.perp_label = Some(label);
            v.verified = true;
        }
    }
    Ok(g)
}

impl K3Graph {
    pub fn out_edges(&self, t: &LatticeTriple) -> impl Iterator<Item = &K3Edge> {
        let t = *t;
        self.edges.iter().filter(move |e| e.source == t)
    }

    /// Structural checks: endpoints exist and follow the transition rule, no
    /// multiple edges, at most three outgoing edges, odd edges lower `g` by one
    /// and even edges keep it.
    pub fn check(&self) -> Result<()> {
        let mut pairs = BTreeSet::new();
        let mut out: BTreeMap<LatticeTriple, usize> = BTreeMap::new();
        for e in &self.edges {
            let (Some(s), Some(t)) = (self.vertices.get(&e.source), self.vertices.get(&e.target)) else {
                return Err(Error::Inconsistent(format!("dangling edge {} → {}", e.source, e.target)));
            };
            if e.source.perp_transition(e.kind)? != e.target {
                return Err(Error::Inconsistent(format!("edge {} → {} breaks the {} rule", e.source, e.target, e.kind.name())));
            }
            if !pairs.insert((e.source, e.target)) {
                return Err(Error::Inconsistent(format!("multiple edges {} → {}", e.source, e.target)));
            }
            *out.entry(e.source).or_default() += 1;
            let drop = if e.kind == EdgeKind::Odd { 1 } else { 0 };
            if s.g - t.g != drop {
                return Err(Error::Inconsistent(format!("genus jump along {} → {}", e.source, e.target)));
            }
        }
        if let Some((t, n)) = out.iter().find(|(_, n)| **n > 3) {
            return Err(Error::Inconsistent(format!("{t} has {n} outgoing edges")));
        }
        Ok(())
    }

    /// Graphviz source. Vertices are labelled `(r,l,δ) g=·`; unverified ones
    /// are drawn dashed. Odd edges are solid, even Wu dashed, even non-Wu dotted.
    pub fn to_dot(&self) -> String {
        let id = |t: &LatticeTriple| format!("v{}_{}_{}", t.r, t.l, t.delta);
        let mut s = String::from("digraph K3 {\n  node [shape=box];\n");
        for v in self.vertices.values() {
            let style = if v.verified { "solid" } else { "dashed" };
            let _ = writeln!(s, "  {} [label=\"{} g={}\", style={style}];", id(&v.triple), v.triple, v.g);
        }
        for e in &self.edges {
            let style = match e.kind {
                EdgeKind::Odd => "solid",
                EdgeKind::EvenWu => "dashed",
                EdgeKind::EvenNonWu => "dotted",
            };
            let _ = writeln!(s, "  {} -> {} [style={style}, label=\"{}\"];", id(&e.source), id(&e.target), e.kind.name());
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(r: i64, l: i64, d: u8) -> LatticeTriple {
        LatticeTriple::new(r, l, d).unwrap()
    }

    #[test]
    fn one_odd_step() {
        let g = build_graph(&[t(1, 1, 1)], Some(1)).unwrap();
        let odd: Vec<_> = g.edges.iter().filter(|e| e.kind == EdgeKind::Odd).collect();
        assert_eq!(odd.len(), 1);
        assert_eq!(odd[0].target, t(2, 2, 1));
        assert_eq!(g.edges.len(), 3);
        g.check().unwrap();
    }

    #[test]
    fn table_graph_is_simple() {
        let g = table1_graph(None).unwrap();
        g.check().unwrap();
        assert!(g.vertices.len() >= 43);
        assert_eq!(g.vertices.values().filter(|v| v.verified).count(), 43);
        assert!(g.vertices.keys().all(admissible));
        for v in g.vertices.keys() {
            assert!(g.out_edges(v).count() <= 3);
        }
    }

    #[test]
    fn closure_from_a_point() {
        let g = build_graph(&[t(1, 1, 1)], None).unwrap();
        g.check().unwrap();
        assert!(g.vertices.keys().any(|v| v.r == 20));
        assert!(g.vertices.values().all(|v| v.g >= 0 && v.k >= 0));
    }

    #[test]
    fn rejects_bad_seed() {
        assert!(build_graph(&[t(21, 1, 1)], None).is_err());
        assert!(build_graph(&[t(20, 4, 1)], None).is_err());
    }

    #[test]
    fn dot_shape() {
        let g = build_graph(&[t(19, 1, 1)], None).unwrap();
        let dot = g.to_dot();
        assert!(dot.starts_with("digraph K3 {"));
        assert!(dot.contains("label=\"(19,1,1) g=1\""));
        assert!(dot.contains("v19_1_1 -> v20_2_1 [style=solid"));
        assert!(dot.trim_end().ends_with('}'));
    }
}
