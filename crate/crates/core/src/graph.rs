use std::collections::HashMap;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;

use crate::diagram::ChordDiagram;
use crate::error::{Error, Result};

/// Dense vertex index. Labels live in a side table on the graph or diagram.
pub type Vertex = usize;

/// Undirected simple graph with bitset adjacency, optionally carrying a chord
/// diagram that witnesses it as a circle graph.
#[derive(Clone, Debug)]
pub struct CircleGraph {
    labels: Vec<String>,
    adj: Vec<FixedBitSet>,
    diagram: Option<ChordDiagram>,
}

impl PartialEq for CircleGraph {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.adj == other.adj
    }
}

impl Eq for CircleGraph {}

impl CircleGraph {
    /// Edgeless graph on the given labels.
    pub fn new(labels: Vec<String>) -> Self {
        let n = labels.len();
        CircleGraph {
            labels,
            adj: vec![FixedBitSet::with_capacity(n); n],
            diagram: None,
        }
    }

    pub fn from_edges(labels: Vec<String>, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut g = CircleGraph::new(labels);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Builds a graph from labeled edges; vertices are numbered by first appearance.
    pub fn from_labeled_edges<'a, I>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut index: HashMap<&str, Vertex> = HashMap::new();
        let mut labels = Vec::new();
        let mut pairs = Vec::new();
        for (a, b) in edges {
            let mut id = |s: &'a str| {
                *index.entry(s).or_insert_with(|| {
                    labels.push(s.to_string());
                    labels.len() - 1
                })
            };
            let u = id(a);
            let v = id(b);
            pairs.push((u, v));
        }
        CircleGraph::from_edges(labels, &pairs)
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        let n = self.vertex_count();
        if u >= n {
            return Err(Error::UnknownVertex(format!("#{u}")));
        }
        if v >= n {
            return Err(Error::UnknownVertex(format!("#{v}")));
        }
        if u == v {
            return Err(Error::Parse {
                line: 0,
                message: format!("self-loop on `{}`", self.labels[u]),
            });
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|row| row.count_ones(..)).sum::<usize>() / 2
    }

    #[inline]
    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adj[v].ones()
    }

    pub fn neighborhood(&self, v: Vertex) -> &FixedBitSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].count_ones(..)
    }

    pub fn label(&self, v: Vertex) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex(&self, label: &str) -> Result<Vertex> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.vertex_count() {
            out.extend(self.adj[u].ones().filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    pub fn diagram(&self) -> Option<&ChordDiagram> {
        self.diagram.as_ref()
    }

    /// Attaches a diagram. The diagram must use the same labels in the same
    /// order and its alternation relation must equal this adjacency.
    pub fn with_diagram(mut self, diagram: ChordDiagram) -> Result<Self> {
        if diagram.labels() != self.labels.as_slice() {
            return Err(Error::FactViolated(
                "diagram labels differ from graph labels".into(),
            ));
        }
        let derived = diagram.to_graph();
        if derived.adj != self.adj {
            return Err(Error::FactViolated(
                "diagram alternation differs from graph adjacency".into(),
            ));
        }
        self.diagram = Some(diagram);
        Ok(self)
    }

    pub(crate) fn attach_diagram_unchecked(mut self, diagram: ChordDiagram) -> Self {
        self.diagram = Some(diagram);
        self
    }

    /// Subgraph induced by `vertices`, in the given order. The diagram is dropped.
    pub fn induced(&self, vertices: &[Vertex]) -> CircleGraph {
        let labels = vertices.iter().map(|&v| self.labels[v].clone()).collect();
        let mut g = CircleGraph::new(labels);
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.adjacent(u, v) {
                    g.adj[i].insert(j);
                    g.adj[j].insert(i);
                }
            }
        }
        g
    }

    /// Parses the edge-list format: one `u v` pair per line, `#` starts a comment.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("expected `u v`, found {} token(s)", toks.len()),
                });
            }
            if toks[0] == toks[1] {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("self-loop on `{}`", toks[0]),
                });
            }
            edges.push((toks[0], toks[1]));
        }
        CircleGraph::from_labeled_edges(edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{} {}", self.labels[u], self.labels[v]);
        }
        out
    }
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => line[..i].trim(),
        None => line.trim(),
    }
}

/// Non-adjacent pairs `{u, v}` (with `u < v`) that share a neighbor.
pub fn common_neighbor_pairs(g: &CircleGraph) -> Vec<(Vertex, Vertex)> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if !g.adjacent(u, v) && !g.adj[u].is_disjoint(&g.adj[v]) {
                out.push((u, v));
            }
        }
    }
    out
}

/// Some K4 in `g`, vertices sorted ascending.
pub fn find_induced_k4(g: &CircleGraph) -> Option<[Vertex; 4]> {
    for (u, v) in g.edges() {
        let mut common = g.adj[u].clone();
        common.intersect_with(&g.adj[v]);
        for a in common.ones() {
            if a < v {
                continue;
            }
            for b in common.ones() {
                if b > a && g.adjacent(a, b) {
                    let mut q = [u, v, a, b];
                    q.sort_unstable();
                    return Some(q);
                }
            }
        }
    }
    None
}

/// Whether the neighborhood of `v` (restricted to `within`) contains a triangle.
pub(crate) fn has_triangle_in(g: &CircleGraph, within: &FixedBitSet) -> bool {
    for a in within.ones() {
        for b in g.adj[a].ones() {
            if b <= a || !within.contains(b) {
                continue;
            }
            let mut c = g.adj[a].clone();
            c.intersect_with(&g.adj[b]);
            c.intersect_with(within);
            if c.ones().any(|x| x > b) {
                return true;
            }
        }
    }
    false
}
