//! Exact 3-coloring, the direct CNF encoding, and reconstruction of a
//! coloring from pair values.

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::formula::{Assignment, Clause, Formula, Lit, VarKey};
use crate::graph::{CircleGraph, Vertex};

pub const BRUTE_FORCE_LIMIT: usize = 40;
/// Quotients up to this many classes are colored exhaustively.
pub const EXHAUSTIVE_QUOTIENT: usize = 25;
/// Search-node allowance for larger quotients.
pub const QUOTIENT_NODE_BUDGET: u64 = 200_000;

/// Ok iff `coloring` is total with values in `1..=3` and proper.
pub fn check_coloring(g: &CircleGraph, coloring: &[u8]) -> Result<()> {
    for v in 0..g.vertex_count() {
        match coloring.get(v) {
            Some(1..=3) => {}
            _ => return Err(Error::PartialColoring(g.label(v).to_string())),
        }
    }
    for (u, v) in g.edges() {
        if coloring[u] == coloring[v] {
            return Err(Error::ImproperColoring(
                g.label(u).to_string(),
                g.label(v).to_string(),
            ));
        }
    }
    Ok(())
}

/// Whether every edge is bichromatic; partial colorings are an error.
pub fn validate_coloring(g: &CircleGraph, coloring: &[u8]) -> Result<bool> {
    match check_coloring(g, coloring) {
        Ok(()) => Ok(true),
        Err(Error::ImproperColoring(..)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Lexicographically first proper 3-coloring (vertex order, colors 1 < 2 < 3).
pub fn brute_force_3color(g: &CircleGraph) -> Result<Option<Vec<u8>>> {
    let n = g.vertex_count();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::Capacity {
            what: "graph for exhaustive 3-coloring",
            size: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut col = vec![0u8; n];
    // bit c-1 set: color c still available
    let mut domain = vec![0b111u8; n];
    Ok(if color_from(g, 0, &mut col, &mut domain) {
        Some(col)
    } else {
        None
    })
}

fn color_from(g: &CircleGraph, v: usize, col: &mut [u8], domain: &mut [u8]) -> bool {
    if v == col.len() {
        return true;
    }
    for c in 1..=3u8 {
        let bit = 1 << (c - 1);
        if domain[v] & bit == 0 {
            continue;
        }
        col[v] = c;
        let mut touched = Vec::new();
        let mut wipeout = false;
        for u in g.neighbors(v) {
            if u > v && domain[u] & bit != 0 {
                domain[u] &= !bit;
                touched.push(u);
                if domain[u] == 0 {
                    wipeout = true;
                }
            }
        }
        if !wipeout && color_from(g, v + 1, col, domain) {
            return true;
        }
        for u in touched {
            domain[u] |= bit;
        }
    }
    col[v] = 0;
    false
}

/// Standard encoding: variable `3v + c - 1` means "v has color c".
pub fn direct_coloring_cnf(g: &CircleGraph) -> Formula {
    let n = g.vertex_count() as u32;
    let var = |v: Vertex, c: u32| 3 * v as u32 + c;
    let mut cls = Vec::new();
    for v in 0..g.vertex_count() {
        cls.push(Clause::new((0..3).map(|c| Lit::pos(var(v, c))).collect()));
        for c in 0..3 {
            for d in c + 1..3 {
                cls.push(Clause::new(vec![Lit::neg(var(v, c)), Lit::neg(var(v, d))]));
            }
        }
    }
    for (u, v) in g.edges() {
        for c in 0..3 {
            cls.push(Clause::new(vec![Lit::neg(var(u, c)), Lit::neg(var(v, c))]));
        }
    }
    Formula::plain(3 * n, cls)
}

/// Reads a coloring back from a model of [`direct_coloring_cnf`].
pub fn decode_direct(g: &CircleGraph, a: &Assignment) -> Vec<u8> {
    (0..g.vertex_count())
        .map(|v| {
            (0..3u32)
                .find(|&c| a.get(3 * v as u32 + c) == Some(true))
                .map_or(0, |c| c as u8 + 1)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reconstruction {
    pub coloring: Option<Vec<u8>>,
    pub classes: usize,
    pub diagnostic: Option<String>,
}

impl Reconstruction {
    fn failed(classes: usize, msg: String) -> Self {
        Reconstruction {
            coloring: None,
            classes,
            diagnostic: Some(msg),
        }
    }
}

/// Merges vertices along true pairs, separates classes along graph edges and
/// false pairs, and 3-colors the resulting quotient graph.
pub fn reconstruct_coloring(g: &CircleGraph, phi: &Formula, a: &Assignment) -> Reconstruction {
    let n = g.vertex_count();
    let mut uf = UnionFind::<usize>::new(n);
    let mut unequal: Vec<(Vertex, Vertex)> = g.edges();
    for (i, key) in phi.vars().iter().enumerate() {
        if let VarKey::Pair(u, v) = *key {
            match a.get(i as u32) {
                Some(true) => {
                    uf.union(u, v);
                }
                Some(false) => unequal.push((u, v)),
                None => {
                    return Reconstruction::failed(
                        0,
                        format!("pair ({},{}) is unassigned", g.label(u), g.label(v)),
                    )
                }
            }
        }
    }
    let labels = uf.into_labeling();
    let mut class_of = vec![usize::MAX; n];
    let mut reps: Vec<usize> = Vec::new();
    for &r in &labels {
        if class_of[r] == usize::MAX {
            class_of[r] = reps.len();
            reps.push(r);
        }
    }
    let class = |v: Vertex| class_of[labels[v]];
    let k = reps.len();
    let mut adj = vec![vec![false; k]; k];
    for &(u, v) in &unequal {
        let (cu, cv) = (class(u), class(v));
        if cu == cv {
            let members: Vec<&str> = (0..n)
                .filter(|&w| class(w) == cu)
                .map(|w| g.label(w))
                .collect();
            return Reconstruction::failed(
                k,
                format!(
                    "class {{{}}} must separate {} and {}",
                    members.join(","),
                    g.label(u),
                    g.label(v)
                ),
            );
        }
        adj[cu][cv] = true;
        adj[cv][cu] = true;
    }
    let budget = if k <= EXHAUSTIVE_QUOTIENT {
        None
    } else {
        Some(QUOTIENT_NODE_BUDGET)
    };
    match dsatur(&adj, budget) {
        Some(qc) => {
            let c: Vec<u8> = (0..n).map(|v| qc[class(v)]).collect();
            debug_assert!(check_coloring(g, &c).is_ok());
            Reconstruction {
                coloring: Some(c),
                classes: k,
                diagnostic: None,
            }
        }
        None if budget.is_some() => Reconstruction::failed(
            k,
            format!("no 3-coloring of the {k}-class quotient found within the search budget"),
        ),
        None => Reconstruction::failed(k, format!("the {k}-class quotient is not 3-colorable")),
    }
}

/// Backtracking 3-coloring choosing the most constrained vertex first.
fn dsatur(adj: &[Vec<bool>], budget: Option<u64>) -> Option<Vec<u8>> {
    let k = adj.len();
    let mut col = vec![0u8; k];
    let mut nodes = 0u64;
    fn go(
        adj: &[Vec<bool>],
        col: &mut [u8],
        left: usize,
        nodes: &mut u64,
        budget: Option<u64>,
    ) -> bool {
        if left == 0 {
            return true;
        }
        *nodes += 1;
        if budget.is_some_and(|b| *nodes > b) {
            return false;
        }
        let k = adj.len();
        let mut best = None;
        let mut best_key = (0usize, 0usize);
        for v in 0..k {
            if col[v] != 0 {
                continue;
            }
            let mut seen = 0u8;
            let mut deg = 0;
            for u in 0..k {
                if adj[v][u] {
                    if col[u] != 0 {
                        seen |= 1 << (col[u] - 1);
                    } else {
                        deg += 1;
                    }
                }
            }
            let key = (seen.count_ones() as usize, deg);
            if best.is_none() || key > best_key {
                best = Some(v);
                best_key = key;
            }
        }
        let v = best.expect("an uncolored vertex remains");
        for c in 1..=3u8 {
            if (0..k).any(|u| adj[v][u] && col[u] == c) {
                continue;
            }
            col[v] = c;
            if go(adj, col, left - 1, nodes, budget) {
                return true;
            }
        }
        col[v] = 0;
        false
    }
    if go(adj, &mut col, k, &mut nodes, budget) {
        Some(col)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::build_phi;
    use crate::solvers::{solve_dpll, Outcome};
    use crate::subgraphs::enumerate_candidates;

    fn cycle(k: usize) -> CircleGraph {
        let labels = (1..=k).map(|i| format!("v{i}")).collect();
        let edges: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
        CircleGraph::from_edges(labels, &edges).unwrap()
    }

    #[test]
    fn c5_colorable_and_validates() {
        let g = cycle(5);
        let c = brute_force_3color(&g).unwrap().unwrap();
        assert_eq!(c, vec![1, 2, 1, 2, 3]);
        assert!(validate_coloring(&g, &c).unwrap());
    }

    #[test]
    fn monochromatic_edge_is_invalid() {
        let g = CircleGraph::parse_edge_list("u v\n").unwrap();
        assert!(!validate_coloring(&g, &[1, 1]).unwrap());
        assert!(matches!(
            validate_coloring(&g, &[1]),
            Err(Error::PartialColoring(_))
        ));
        assert!(matches!(
            validate_coloring(&g, &[1, 4]),
            Err(Error::PartialColoring(_))
        ));
    }

    #[test]
    fn k4_not_colorable() {
        let g = CircleGraph::parse_edge_list("a b\na c\na d\nb c\nb d\nc d\n").unwrap();
        assert_eq!(brute_force_3color(&g).unwrap(), None);
        let s = solve_dpll(&direct_coloring_cnf(&g));
        assert_eq!(s.outcome, Outcome::Unsat);
    }

    #[test]
    fn direct_encoding_decodes() {
        let g = cycle(7);
        let s = solve_dpll(&direct_coloring_cnf(&g));
        let Outcome::Sat(a) = s.outcome else {
            panic!("odd cycle is 3-colorable")
        };
        assert!(validate_coloring(&g, &decode_direct(&g, &a)).unwrap());
    }

    #[test]
    fn box_slash_reconstruction() {
        let g = CircleGraph::parse_edge_list("a b\na c\na d\nb c\nb d\n").unwrap();
        let c = enumerate_candidates(&g, 12).unwrap().subgraphs;
        let phi = build_phi(&g, &c).unwrap();
        let a = Assignment::total(&[true]);
        let r = reconstruct_coloring(&g, &phi, &a);
        let col = r.coloring.unwrap();
        assert!(validate_coloring(&g, &col).unwrap());
        assert_eq!(col[2], col[3]);
    }

    #[test]
    fn merged_class_containing_an_edge_is_diagnosed() {
        let g = cycle(5);
        let cands = enumerate_candidates(&g, 12).unwrap().subgraphs;
        let phi = build_phi(&g, &cands).unwrap();
        let mut a = Assignment::unassigned(phi.var_count());
        for i in 0..phi.var_count() as u32 {
            a.set(i, false);
        }
        // v1 ~ v3 ~ v5, but v1 v5 is an edge
        a.set(phi.pair_var(0, 2).unwrap(), true);
        a.set(phi.pair_var(2, 4).unwrap(), true);
        let r = reconstruct_coloring(&g, &phi, &a);
        assert!(r.coloring.is_none());
        assert!(r.diagnostic.unwrap().contains("must separate"));
    }

    #[test]
    fn square_with_equal_diagonals_reconstructs() {
        let sq = CircleGraph::parse_edge_list("a b\nb c\nc d\nd a\n").unwrap();
        let cands = enumerate_candidates(&sq, 12).unwrap().subgraphs;
        let phi = build_phi(&sq, &cands).unwrap();
        let ok = reconstruct_coloring(&sq, &phi, &Assignment::total(&[true, true]));
        assert_eq!(ok.classes, 2);
        assert!(ok.coloring.is_some());
    }

    #[test]
    fn capacity_enforced() {
        let g = cycle(41);
        assert!(matches!(
            brute_force_3color(&g),
            Err(Error::Capacity { .. })
        ));
    }
}
