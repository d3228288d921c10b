use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{strip_comment, CircleGraph, Vertex};

/// Chord diagram in rolled-out form: a line of `2n` endpoints, each chord
/// label appearing exactly twice. Chords are numbered by first appearance
/// unless an explicit label table is supplied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChordDiagram {
    labels: Vec<String>,
    endpoints: Vec<Vertex>,
    spans: Vec<(usize, usize)>,
}

impl ChordDiagram {
    /// Parses whitespace-separated endpoint labels.
    pub fn parse(line: &str) -> Result<Self> {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let mut labels: Vec<String> = Vec::new();
        for t in &tokens {
            if !labels.iter().any(|l| l == t) {
                labels.push(t.to_string());
            }
        }
        Self::from_tokens(labels, &tokens)
    }

    /// Parses endpoint labels against a fixed label table, so chord `i` is `labels[i]`.
    pub fn parse_with_labels(labels: &[String], line: &str) -> Result<Self> {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        Self::from_tokens(labels.to_vec(), &tokens)
    }

    fn from_tokens(labels: Vec<String>, tokens: &[&str]) -> Result<Self> {
        let index: HashMap<&str, Vertex> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let mut endpoints = Vec::with_capacity(tokens.len());
        for t in tokens {
            match index.get(t) {
                Some(&v) => endpoints.push(v),
                None => return Err(Error::UnknownVertex(t.to_string())),
            }
        }
        Self::from_endpoints(labels, endpoints)
    }

    /// Builds a diagram from chord indices; `endpoints[i]` names the chord at position `i`.
    pub fn from_endpoints(labels: Vec<String>, endpoints: Vec<Vertex>) -> Result<Self> {
        let n = labels.len();
        let mut seen: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (pos, &v) in endpoints.iter().enumerate() {
            if v >= n {
                return Err(Error::UnknownVertex(format!("#{v}")));
            }
            seen[v].push(pos);
        }
        let mut spans = Vec::with_capacity(n);
        for (v, positions) in seen.iter().enumerate() {
            if positions.len() != 2 {
                return Err(Error::MalformedDiagram {
                    label: labels[v].clone(),
                    count: positions.len(),
                });
            }
            spans.push((positions[0], positions[1]));
        }
        Ok(ChordDiagram {
            labels,
            endpoints,
            spans,
        })
    }

    pub fn chord_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: Vertex) -> &str {
        &self.labels[v]
    }

    pub fn vertex(&self, label: &str) -> Result<Vertex> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn endpoints(&self) -> &[Vertex] {
        &self.endpoints
    }

    /// Left and right endpoint positions of chord `v`.
    pub fn span(&self, v: Vertex) -> (usize, usize) {
        self.spans[v]
    }

    /// Exactly one endpoint of `v` lies strictly between the endpoints of `u`.
    #[inline]
    pub fn crosses(&self, u: Vertex, v: Vertex) -> bool {
        let (a, b) = self.spans[u];
        let (c, d) = self.spans[v];
        (a < c && c < b && b < d) || (c < a && a < d && d < b)
    }

    /// Both endpoints of `inner` lie strictly between the endpoints of `outer`.
    #[inline]
    pub fn encases(&self, outer: Vertex, inner: Vertex) -> bool {
        let (a, b) = self.spans[outer];
        let (c, d) = self.spans[inner];
        a < c && d < b
    }

    pub fn directly_encases(&self, outer: Vertex, inner: Vertex) -> bool {
        self.encases(outer, inner)
            && !(0..self.chord_count()).any(|w| self.encases(outer, w) && self.encases(w, inner))
    }

    /// Chords that directly encase `v`, ascending.
    pub fn direct_encasers(&self, v: Vertex) -> Vec<Vertex> {
        (0..self.chord_count())
            .filter(|&u| self.directly_encases(u, v))
            .collect()
    }

    /// Chords directly encased by `u`, ascending.
    pub fn direct_children(&self, u: Vertex) -> Vec<Vertex> {
        (0..self.chord_count())
            .filter(|&v| self.directly_encases(u, v))
            .collect()
    }

    /// One endpoint pair lies entirely before the other.
    pub fn disjoint(&self, u: Vertex, v: Vertex) -> bool {
        let (a, b) = self.spans[u];
        let (c, d) = self.spans[v];
        b < c || d < a
    }

    /// Alternation graph of the diagram; the result carries `self` as its witness.
    pub fn to_graph(&self) -> CircleGraph {
        let n = self.chord_count();
        let mut g = CircleGraph::new(self.labels.clone());
        for u in 0..n {
            for v in u + 1..n {
                if self.crosses(u, v) {
                    g.add_edge(u, v).expect("indices in range");
                }
            }
        }
        g.attach_diagram_unchecked(self.clone())
    }

    pub fn levels(&self) -> LevelMap {
        self.levels_with(LevelRule::default())
    }

    pub fn levels_with(&self, rule: LevelRule) -> LevelMap {
        let n = self.chord_count();
        let mut by_left: Vec<Vertex> = (0..n).collect();
        by_left.sort_by_key(|&v| self.spans[v].0);
        // every encaser has a smaller left endpoint, so it is finished first
        let mut level = vec![0u32; n];
        for &v in &by_left {
            let parent = match rule {
                LevelRule::LongestChain => (0..n)
                    .filter(|&u| self.encases(u, v))
                    .map(|u| level[u])
                    .max(),
                LevelRule::ShallowestEncaser => {
                    self.direct_encasers(v).into_iter().map(|u| level[u]).min()
                }
            };
            level[v] = parent.map_or(1, |p| p + 1);
        }
        LevelMap { level }
    }
}

impl fmt::Display for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &v) in self.endpoints.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(&self.labels[v])?;
        }
        Ok(())
    }
}

/// Alias kept for callers that think in terms of the operation rather than the method.
pub fn adjacency_from_diagram(diagram: &ChordDiagram) -> CircleGraph {
    diagram.to_graph()
}

/// How a chord's level is derived from the chords around it.
///
/// `LongestChain` puts `v` one level below the deepest chord encasing it, so
/// every chord sits strictly below each of its direct encasers.
/// `ShallowestEncaser` uses one plus the minimum level over direct encasers.
/// The two agree whenever all direct encasers of a chord share a level.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LevelRule {
    #[default]
    LongestChain,
    ShallowestEncaser,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelMap {
    level: Vec<u32>,
}

impl LevelMap {
    pub fn from_levels(level: Vec<u32>) -> Self {
        LevelMap { level }
    }

    #[inline]
    pub fn get(&self, v: Vertex) -> u32 {
        self.level[v]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.level
    }

    pub fn depth(&self) -> u32 {
        self.level.iter().copied().max().unwrap_or(0)
    }

    pub fn members(&self, l: u32) -> Vec<Vertex> {
        (0..self.level.len())
            .filter(|&v| self.level[v] == l)
            .collect()
    }

    /// Difference between the highest and lowest level among `vertices`.
    pub fn spread(&self, vertices: &[Vertex]) -> u32 {
        let lo = vertices.iter().map(|&v| self.level[v]).min().unwrap_or(0);
        let hi = vertices.iter().map(|&v| self.level[v]).max().unwrap_or(0);
        hi - lo
    }
}

/// Base graph plus spine order for the book-embedding reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpineInstance {
    labels: Vec<String>,
    order: Vec<Vertex>,
    edges: Vec<(Vertex, Vertex)>,
}

impl SpineInstance {
    pub fn new(
        labels: Vec<String>,
        order: Vec<Vertex>,
        edges: Vec<(Vertex, Vertex)>,
    ) -> Result<Self> {
        let n = labels.len();
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n || seen[v] {
                return Err(Error::InvalidOrder(format!(
                    "spine order is not a permutation of the {n} vertices"
                )));
            }
            seen[v] = true;
        }
        if order.len() != n {
            return Err(Error::InvalidOrder(format!(
                "spine order lists {} of {n} vertices",
                order.len()
            )));
        }
        let mut norm = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::UnknownVertex(format!("#{}", u.max(v))));
            }
            if u == v {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("self-loop on `{}`", labels[u]),
                });
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        norm.dedup();
        Ok(SpineInstance {
            labels,
            order,
            edges: norm,
        })
    }

    /// Text form: the first non-blank line lists every vertex in spine order,
    /// each further line is an edge `u v`. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut labels: Vec<String> = Vec::new();
        let mut edges = Vec::new();
        let mut have_order = false;
        for (i, raw) in text.lines().enumerate() {
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if !have_order {
                for t in toks {
                    if labels.iter().any(|l| l == t) {
                        return Err(Error::Parse {
                            line: i + 1,
                            message: format!("`{t}` repeated in spine order"),
                        });
                    }
                    labels.push(t.to_string());
                }
                have_order = true;
                continue;
            }
            if toks.len() != 2 {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("expected `u v`, found {} token(s)", toks.len()),
                });
            }
            let find = |t: &str| {
                labels
                    .iter()
                    .position(|l| l == t)
                    .ok_or_else(|| Error::UnknownVertex(t.to_string()))
            };
            let (u, v) = (find(toks[0])?, find(toks[1])?);
            if u == v {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("self-loop on `{}`", toks[0]),
                });
            }
            edges.push((u, v));
        }
        let order = (0..labels.len()).collect();
        SpineInstance::new(labels, order, edges)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }
}

/// Conflict graph of a spine order: one chord per base edge, two chords
/// adjacent iff the edges' endpoints alternate along the spine. Chord labels
/// are `u-v` with `u` before `v` on the spine; chords are numbered in
/// lexicographic order of their spine positions.
pub fn conflict_graph_from_book(instance: &SpineInstance) -> CircleGraph {
    let n = instance.labels.len();
    let mut pos = vec![0usize; n];
    for (i, &v) in instance.order.iter().enumerate() {
        pos[v] = i;
    }
    let mut arcs: Vec<(usize, usize)> = instance
        .edges
        .iter()
        .map(|&(u, v)| (pos[u].min(pos[v]), pos[u].max(pos[v])))
        .collect();
    arcs.sort_unstable();
    let labels: Vec<String> = arcs
        .iter()
        .map(|&(a, b)| {
            format!(
                "{}-{}",
                instance.labels[instance.order[a]], instance.labels[instance.order[b]]
            )
        })
        .collect();

    // Arcs sharing a spine vertex must not cross: at each slot close arcs
    // innermost first, then open arcs outermost first.
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut opening: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (id, &(a, b)) in arcs.iter().enumerate() {
        opening[a].push(id);
        closing[b].push(id);
    }
    let mut endpoints = Vec::with_capacity(2 * arcs.len());
    for slot in 0..n {
        let mut c = closing[slot].clone();
        c.sort_by(|&x, &y| arcs[y].0.cmp(&arcs[x].0));
        let mut o = opening[slot].clone();
        o.sort_by(|&x, &y| arcs[y].1.cmp(&arcs[x].1));
        endpoints.extend(c);
        endpoints.extend(o);
    }
    ChordDiagram::from_endpoints(labels, endpoints)
        .expect("each arc contributes two endpoints")
        .to_graph()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> ChordDiagram {
        ChordDiagram::parse(s).unwrap()
    }

    #[test]
    fn interleaving_pair_is_an_edge() {
        assert_eq!(d("a b a b").to_graph().edges(), vec![(0, 1)]);
        assert!(d("a a b b").to_graph().edges().is_empty());
    }

    #[test]
    fn malformed_diagram_names_label() {
        assert_eq!(
            ChordDiagram::parse("a b a"),
            Err(Error::MalformedDiagram {
                label: "b".into(),
                count: 1
            })
        );
        assert!(matches!(
            ChordDiagram::parse("a a a b b"),
            Err(Error::MalformedDiagram { count: 3, .. })
        ));
    }

    #[test]
    fn nesting_and_crossing() {
        let x = d("u v v u");
        assert!(x.encases(0, 1));
        assert!(!x.encases(1, 0));
        let y = d("u v u v");
        assert!(!y.encases(0, 1) && !y.encases(1, 0));
    }

    #[test]
    fn encasement_figure_situation() {
        // u encases v and x; v and w directly encase x, w crosses v
        let g = d("u v w x x v w u");
        let (u, v, w, x) = (0, 1, 2, 3);
        assert!(g.crosses(v, w));
        assert!(g.encases(u, x));
        assert!(g.directly_encases(u, v));
        assert!(!g.directly_encases(u, x));
        assert!(g.directly_encases(v, x));
        assert!(g.directly_encases(w, x));
    }

    #[test]
    fn side_by_side_chords_do_not_encase() {
        let g = d("a a b b");
        assert!(!g.directly_encases(0, 1));
        assert!(g.disjoint(0, 1));
    }

    #[test]
    fn level_rules() {
        let g = d("a b b a");
        assert_eq!(g.levels().as_slice(), &[1, 2]);
        let all_cross = d("a b c a b c");
        assert_eq!(all_cross.levels().as_slice(), &[1, 1, 1]);
        // x is directly encased by a (level 1) and by c (level 2)
        let mixed = d("a b c x x c b a");
        assert_eq!(mixed.levels().as_slice(), &[1, 2, 3, 4]);
        let split = d("a c b x x a b c");
        // c encases b; x directly encased by a (level 1) and b (level 2)
        let lc = split.levels_with(LevelRule::LongestChain);
        let se = split.levels_with(LevelRule::ShallowestEncaser);
        let x = split.vertex("x").unwrap();
        assert_eq!(lc.get(x), 3);
        assert_eq!(se.get(x), 2);
    }

    #[test]
    fn with_labels_fixes_numbering() {
        let labels = vec!["b".to_string(), "a".to_string()];
        let g = ChordDiagram::parse_with_labels(&labels, "a b a b").unwrap();
        assert_eq!(g.label(0), "b");
        assert_eq!(g.span(0), (1, 3));
    }

    #[test]
    fn display_round_trips() {
        let g = d("p q r p r q");
        assert_eq!(d(&g.to_string()), g);
    }

    #[test]
    fn path_on_natural_order_has_no_conflicts() {
        let s = SpineInstance::parse("1 2 3\n1 2\n2 3\n").unwrap();
        let h = conflict_graph_from_book(&s);
        assert_eq!(h.vertex_count(), 2);
        assert_eq!(h.edge_count(), 0);
    }

    #[test]
    fn c4_with_crossed_order_conflicts() {
        let s = SpineInstance::parse("1 3 2 4\n1 2\n2 3\n3 4\n4 1\n").unwrap();
        let h = conflict_graph_from_book(&s);
        assert!(h.edge_count() >= 1);
    }

    #[test]
    fn spine_parse_errors() {
        assert!(matches!(
            SpineInstance::parse("a b a\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            SpineInstance::parse("a b\na z\n"),
            Err(Error::UnknownVertex(_))
        ));
    }
}
