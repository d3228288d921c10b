use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use fixedbitset::FixedBitSet;

use crate::diagram::{ChordDiagram, LevelMap};
use crate::error::{Error, Result};
use crate::graph::{find_induced_k4, CircleGraph, Vertex};

pub const DEFAULT_MAX_CYCLE: usize = 12;

/// Largest pattern accepted by [`realizable_assignments`].
pub const REALIZABLE_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternKind {
    /// Triangle plus a pendant vertex adjacent to exactly one triangle vertex.
    TailTriangle,
    /// Induced C4.
    Square,
    /// K4 minus one edge.
    BoxSlash,
    /// Induced C5.
    Pentagon,
    /// Induced Ck, k >= 6.
    LongCycle(usize),
}

impl PatternKind {
    pub fn is_cycle(self) -> bool {
        matches!(self, PatternKind::Pentagon | PatternKind::LongCycle(_))
    }

    pub fn vertex_count(self) -> usize {
        match self {
            PatternKind::TailTriangle | PatternKind::Square | PatternKind::BoxSlash => 4,
            PatternKind::Pentagon => 5,
            PatternKind::LongCycle(k) => k,
        }
    }

    fn cycle(k: usize) -> Self {
        if k == 5 {
            PatternKind::Pentagon
        } else {
            PatternKind::LongCycle(k)
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "TailTriangle" => Some(PatternKind::TailTriangle),
            "Square" => Some(PatternKind::Square),
            "BoxSlash" => Some(PatternKind::BoxSlash),
            "Pentagon" => Some(PatternKind::Pentagon),
            _ => s
                .strip_prefix("Cycle")
                .and_then(|k| k.parse().ok())
                .filter(|&k| k >= 6)
                .map(PatternKind::LongCycle),
        }
    }
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternKind::TailTriangle => f.write_str("TailTriangle"),
            PatternKind::Square => f.write_str("Square"),
            PatternKind::BoxSlash => f.write_str("BoxSlash"),
            PatternKind::Pentagon => f.write_str("Pentagon"),
            PatternKind::LongCycle(k) => write!(f, "Cycle{k}"),
        }
    }
}

/// An induced pattern occurrence.
///
/// Vertex order is significant:
/// * `TailTriangle`: pendant, its triangle neighbor, then the other two triangle vertices;
/// * `BoxSlash`: the non-adjacent pair, then the shared edge;
/// * `Square` and cycles: cyclic order starting at the smallest vertex, heading
///   toward its smaller neighbor.
///
/// `pairs` are the constrained non-adjacent pairs, each stored as `(min, max)`:
/// `[p q1, p q2]` for a tail triangle, the two diagonals for a square, the
/// non-adjacent pair for a box-slash, and `v_i v_{i+2}` for cycles.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ImportantSubgraph {
    pub kind: PatternKind,
    pub vertices: Vec<Vertex>,
    pub pairs: Vec<(Vertex, Vertex)>,
}

fn pair(a: Vertex, b: Vertex) -> (Vertex, Vertex) {
    (a.min(b), a.max(b))
}

impl ImportantSubgraph {
    pub fn tail_triangle(pendant: Vertex, attach: Vertex, q1: Vertex, q2: Vertex) -> Self {
        let (q1, q2) = (q1.min(q2), q1.max(q2));
        ImportantSubgraph {
            kind: PatternKind::TailTriangle,
            vertices: vec![pendant, attach, q1, q2],
            pairs: vec![pair(pendant, q1), pair(pendant, q2)],
        }
    }

    pub fn box_slash(u: Vertex, v: Vertex, a: Vertex, b: Vertex) -> Self {
        ImportantSubgraph {
            kind: PatternKind::BoxSlash,
            vertices: vec![u.min(v), u.max(v), a.min(b), a.max(b)],
            pairs: vec![pair(u, v)],
        }
    }

    /// A cycle in the given cyclic order, rotated and reflected to canonical form.
    pub fn cycle(order: &[Vertex]) -> Self {
        let k = order.len();
        let start = (0..k).min_by_key(|&i| order[i]).unwrap_or(0);
        let next = order[(start + 1) % k];
        let prev = order[(start + k - 1) % k];
        let vertices: Vec<Vertex> = if next <= prev {
            (0..k).map(|i| order[(start + i) % k]).collect()
        } else {
            (0..k).map(|i| order[(start + k - i) % k]).collect()
        };
        let pairs = if k == 4 {
            vec![
                pair(vertices[0], vertices[2]),
                pair(vertices[1], vertices[3]),
            ]
        } else {
            (0..k)
                .map(|i| pair(vertices[i], vertices[(i + 2) % k]))
                .collect()
        };
        let kind = if k == 4 {
            PatternKind::Square
        } else {
            PatternKind::cycle(k)
        };
        ImportantSubgraph {
            kind,
            vertices,
            pairs,
        }
    }

    pub fn vertex_set(&self) -> BTreeSet<Vertex> {
        self.vertices.iter().copied().collect()
    }

    /// `KIND v1 v2 ... | pairs: {a,b} {c,d}`
    pub fn report_line(&self, g: &CircleGraph) -> String {
        let mut s = self.kind.to_string();
        for &v in &self.vertices {
            s.push(' ');
            s.push_str(g.label(v));
        }
        s.push_str(" | pairs:");
        for &(a, b) in &self.pairs {
            let _ = write!(s, " {{{},{}}}", g.label(a), g.label(b));
        }
        s
    }

    /// Whether `vertices` induce exactly the declared pattern in `g`, checked
    /// against the adjacency matrix each kind prescribes for its stored order.
    pub fn matches(&self, g: &CircleGraph) -> bool {
        let v = &self.vertices;
        if v.len() != self.kind.vertex_count() {
            return false;
        }
        let distinct: BTreeSet<_> = v.iter().collect();
        if distinct.len() != v.len() {
            return false;
        }
        let k = v.len();
        let expect = |i: usize, j: usize| -> bool {
            match self.kind {
                PatternKind::TailTriangle => {
                    let e = [(0, 1), (1, 2), (1, 3), (2, 3)];
                    e.contains(&(i.min(j), i.max(j)))
                }
                PatternKind::BoxSlash => (i.min(j), i.max(j)) != (0, 1),
                _ => (i + 1) % k == j || (j + 1) % k == i,
            }
        };
        for i in 0..k {
            for j in i + 1..k {
                if g.adjacent(v[i], v[j]) != expect(i, j) {
                    return false;
                }
            }
        }
        true
    }
}

/// Enumeration output plus any warnings about truncation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Candidates {
    pub subgraphs: Vec<ImportantSubgraph>,
    pub warnings: Vec<String>,
}

fn reject_k4(g: &CircleGraph) -> Result<()> {
    if let Some(q) = find_induced_k4(g) {
        return Err(Error::InducedK4(q.map(|v| g.label(v).to_string())));
    }
    Ok(())
}

/// All induced occurrences of the four-vertex patterns and of cycles of
/// length `5..=max_cycle`, canonically sorted.
pub fn enumerate_candidates(g: &CircleGraph, max_cycle: usize) -> Result<Candidates> {
    if max_cycle < 5 {
        return Err(Error::InvalidPattern(format!(
            "max_cycle must be at least 5, got {max_cycle}"
        )));
    }
    reject_k4(g)?;
    let mut out = four_vertex_patterns(g);
    let mut all = FixedBitSet::with_capacity(g.vertex_count());
    all.insert_range(..);
    let mut truncated = false;
    induced_cycles(g, &all, max_cycle, &mut out, &mut truncated);
    out.sort();
    out.dedup();
    Ok(Candidates {
        subgraphs: out,
        warnings: cap_warning(truncated, max_cycle),
    })
}

fn cap_warning(truncated: bool, max_cycle: usize) -> Vec<String> {
    if truncated {
        vec![format!(
            "induced paths reach the cycle cap {max_cycle}; longer induced cycles may be missing"
        )]
    } else {
        Vec::new()
    }
}

fn four_vertex_patterns(g: &CircleGraph) -> Vec<ImportantSubgraph> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    // box-slash: shared edge (a, b) plus two non-adjacent common neighbors
    for (a, b) in g.edges() {
        let mut common = g.neighborhood(a).clone();
        common.intersect_with(g.neighborhood(b));
        let c: Vec<Vertex> = common.ones().collect();
        for (i, &u) in c.iter().enumerate() {
            for &v in &c[i + 1..] {
                if !g.adjacent(u, v) {
                    out.push(ImportantSubgraph::box_slash(u, v, a, b));
                }
            }
        }
    }
    // tail triangle: attachment vertex a, triangle a q1 q2, pendant p on a only
    for a in 0..n {
        let nb: Vec<Vertex> = g.neighbors(a).collect();
        for (i, &q1) in nb.iter().enumerate() {
            for &q2 in &nb[i + 1..] {
                if !g.adjacent(q1, q2) {
                    continue;
                }
                for &p in &nb {
                    if p != q1 && p != q2 && !g.adjacent(p, q1) && !g.adjacent(p, q2) {
                        out.push(ImportantSubgraph::tail_triangle(p, a, q1, q2));
                    }
                }
            }
        }
    }
    // squares: smallest vertex a, opposite vertex c, two non-adjacent common neighbors
    for a in 0..n {
        for c in a + 1..n {
            if g.adjacent(a, c) {
                continue;
            }
            let mut common = g.neighborhood(a).clone();
            common.intersect_with(g.neighborhood(c));
            let cn: Vec<Vertex> = common.ones().filter(|&x| x > a).collect();
            for (i, &b) in cn.iter().enumerate() {
                for &d in &cn[i + 1..] {
                    if !g.adjacent(b, d) {
                        out.push(ImportantSubgraph::cycle(&[a, b, c, d]));
                    }
                }
            }
        }
    }
    out
}

/// Induced cycles of length 5..=max_len inside `mask`. Each cycle is rooted
/// at its smallest vertex and walked toward the smaller of its two neighbors.
fn induced_cycles(
    g: &CircleGraph,
    mask: &FixedBitSet,
    max_len: usize,
    out: &mut Vec<ImportantSubgraph>,
    truncated: &mut bool,
) {
    let n = g.vertex_count();
    let mut interior_adj = vec![0u32; n];
    let mut on_path = FixedBitSet::with_capacity(n);
    let mut path: Vec<Vertex> = Vec::with_capacity(max_len);
    for s in mask.ones() {
        path.clear();
        path.push(s);
        on_path.insert(s);
        extend(
            g,
            mask,
            max_len,
            &mut path,
            &mut on_path,
            &mut interior_adj,
            out,
            truncated,
        );
        on_path.set(s, false);
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    g: &CircleGraph,
    mask: &FixedBitSet,
    max_len: usize,
    path: &mut Vec<Vertex>,
    on_path: &mut FixedBitSet,
    interior_adj: &mut [u32],
    out: &mut Vec<ImportantSubgraph>,
    truncated: &mut bool,
) {
    let s = path[0];
    let last = *path.last().expect("path starts non-empty");
    let next: Vec<Vertex> = g
        .neighbors(last)
        .filter(|&x| x > s && mask.contains(x) && !on_path.contains(x) && interior_adj[x] == 0)
        .collect();
    for x in next {
        let len = path.len() + 1;
        if path.len() >= 2 && g.adjacent(x, s) {
            if len >= 5 && path[1] < x {
                let mut cyc = path.clone();
                cyc.push(x);
                out.push(ImportantSubgraph::cycle(&cyc));
            }
            continue;
        }
        if len >= max_len {
            *truncated = true;
            continue;
        }
        // `last` becomes interior once x is appended
        if path.len() >= 2 {
            for y in g.neighbors(last) {
                interior_adj[y] += 1;
            }
        }
        path.push(x);
        on_path.insert(x);
        extend(
            g,
            mask,
            max_len,
            path,
            on_path,
            interior_adj,
            out,
            truncated,
        );
        on_path.set(x, false);
        path.pop();
        if path.len() >= 2 {
            for y in g.neighbors(last) {
                interior_adj[y] -= 1;
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FilterVariant {
    #[default]
    ExtendedAbstract,
    Thesis,
}

impl FilterVariant {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ea" | "extended-abstract" | "extendedabstract" => {
                Some(FilterVariant::ExtendedAbstract)
            }
            "thesis" => Some(FilterVariant::Thesis),
            _ => None,
        }
    }
}

/// Rule deciding whether a non-adjacent pair may constrain a four-vertex pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairRule {
    /// Same level, or one chord directly encases the other.
    SameLevelOrDirect,
    /// One chord directly encases the other, or the chords are side by side.
    DirectOrDisjoint,
    Always,
}

/// Filter configuration. The thesis rules for squares and cycles are not
/// known; `square_rule` and `cycle_spread` make the stand-ins explicit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Filter {
    pub variant: FilterVariant,
    /// Rule for squares under the thesis variant.
    pub square_rule: PairRule,
    /// Largest allowed level spread for cycles (1 = two adjacent levels).
    pub cycle_spread: u32,
}

impl Filter {
    pub fn new(variant: FilterVariant) -> Self {
        Filter {
            variant,
            square_rule: PairRule::SameLevelOrDirect,
            cycle_spread: 1,
        }
    }

    /// Human-readable description of stand-in rules in force.
    pub fn notes(&self) -> Vec<String> {
        match self.variant {
            FilterVariant::ExtendedAbstract => Vec::new(),
            FilterVariant::Thesis => vec![
                format!(
                    "thesis variant: Square uses {:?} (stand-in)",
                    self.square_rule
                ),
                format!(
                    "thesis variant: cycles kept iff level spread <= {} (stand-in)",
                    self.cycle_spread
                ),
            ],
        }
    }

    fn pair_ok(
        &self,
        rule: PairRule,
        d: &ChordDiagram,
        lv: &LevelMap,
        (a, b): (Vertex, Vertex),
    ) -> bool {
        match rule {
            PairRule::SameLevelOrDirect => {
                lv.get(a) == lv.get(b) || d.directly_encases(a, b) || d.directly_encases(b, a)
            }
            PairRule::DirectOrDisjoint => {
                d.directly_encases(a, b) || d.directly_encases(b, a) || d.disjoint(a, b)
            }
            PairRule::Always => true,
        }
    }

    pub fn keeps(&self, h: &ImportantSubgraph, d: &ChordDiagram, lv: &LevelMap) -> bool {
        if h.kind.is_cycle() {
            return lv.spread(&h.vertices) <= self.cycle_spread;
        }
        let rule = match (self.variant, h.kind) {
            (FilterVariant::ExtendedAbstract, _) => PairRule::SameLevelOrDirect,
            (FilterVariant::Thesis, PatternKind::Square) => self.square_rule,
            (FilterVariant::Thesis, PatternKind::BoxSlash) => PairRule::DirectOrDisjoint,
            (FilterVariant::Thesis, PatternKind::TailTriangle) => {
                let v = &h.vertices;
                return lv.spread(&[v[0], v[2], v[3]]) <= 1;
            }
            (FilterVariant::Thesis, _) => unreachable!("cycles handled above"),
        };
        h.pairs.iter().all(|&p| self.pair_ok(rule, d, lv, p))
    }
}

pub fn filter_important(
    candidates: &[ImportantSubgraph],
    diagram: &ChordDiagram,
    filter: &Filter,
) -> Vec<ImportantSubgraph> {
    let lv = diagram.levels();
    candidates
        .iter()
        .filter(|h| filter.keeps(h, diagram, &lv))
        .cloned()
        .collect()
}

/// Enumerates and filters in one pass. Cycles are only searched for inside
/// windows of `cycle_spread + 1` consecutive levels, which yields the same
/// result as filtering the full candidate list but stays tractable on large
/// graphs with many levels.
pub fn important_subgraphs(
    g: &CircleGraph,
    diagram: &ChordDiagram,
    filter: &Filter,
    max_cycle: usize,
) -> Result<Candidates> {
    if max_cycle < 5 {
        return Err(Error::InvalidPattern(format!(
            "max_cycle must be at least 5, got {max_cycle}"
        )));
    }
    reject_k4(g)?;
    let lv = diagram.levels();
    let mut out: Vec<ImportantSubgraph> = four_vertex_patterns(g)
        .into_iter()
        .filter(|h| filter.keeps(h, diagram, &lv))
        .collect();
    let depth = lv.depth();
    let width = filter.cycle_spread + 1;
    let mut truncated = false;
    let mut low = 1;
    loop {
        let mut mask = FixedBitSet::with_capacity(g.vertex_count());
        for v in 0..g.vertex_count() {
            if lv.get(v) >= low && lv.get(v) < low + width {
                mask.insert(v);
            }
        }
        induced_cycles(g, &mask, max_cycle, &mut out, &mut truncated);
        if low + width > depth {
            break;
        }
        low += 1;
    }
    out.sort();
    out.dedup();
    Ok(Candidates {
        subgraphs: out,
        warnings: cap_warning(truncated, max_cycle),
    })
}

/// Distinct projections of the proper 3-colorings of `h` onto its pairs:
/// entry `i` is true iff the endpoints of `h.pairs[i]` share a color.
pub fn realizable_assignments(
    h: &ImportantSubgraph,
    host: &CircleGraph,
) -> Result<BTreeSet<Vec<bool>>> {
    let k = h.vertices.len();
    if k > REALIZABLE_LIMIT {
        return Err(Error::Capacity {
            what: "pattern for realizability enumeration",
            size: k,
            limit: REALIZABLE_LIMIT,
        });
    }
    let sub = host.induced(&h.vertices);
    let local: Vec<(usize, usize)> = h
        .pairs
        .iter()
        .map(|&(a, b)| {
            let i = h.vertices.iter().position(|&v| v == a);
            let j = h.vertices.iter().position(|&v| v == b);
            match (i, j) {
                (Some(i), Some(j)) => Ok((i, j)),
                _ => Err(Error::InvalidPattern("pair outside the pattern".into())),
            }
        })
        .collect::<Result<_>>()?;
    let mut out = BTreeSet::new();
    let mut col = vec![0u8; k];
    colorings(&sub, 0, &mut col, &mut |c| {
        out.insert(local.iter().map(|&(i, j)| c[i] == c[j]).collect());
    });
    Ok(out)
}

fn colorings(g: &CircleGraph, v: usize, col: &mut [u8], visit: &mut dyn FnMut(&[u8])) {
    if v == col.len() {
        visit(col);
        return;
    }
    for c in 1..=3u8 {
        if (0..v).all(|u| !g.adjacent(u, v) || col[u] != c) {
            col[v] = c;
            colorings(g, v + 1, col, visit);
        }
    }
    col[v] = 0;
}
