//! Exponential diagram search for small graphs.
//!
//! Endpoints are laid down left to right. Each step either opens an unopened
//! chord or closes an open one; the adjacency of a chord is fully determined
//! at the moment it closes, so every inconsistency is caught there.

use fixedbitset::FixedBitSet;

use crate::diagram::{ChordDiagram, LevelRule};
use crate::error::{Error, Result};
use crate::graph::{CircleGraph, Vertex};

pub const DEFAULT_BOUND: usize = 12;

/// Structural constraints a realization must satisfy beyond adjacency.
#[derive(Clone, Debug, Default)]
pub struct Facts {
    /// Exact direct-encasement relation: when set, `direct[u]` must equal the
    /// set of chords directly encased by `u`.
    pub direct: Option<Vec<Vec<Vertex>>>,
    /// Required level per chord.
    pub levels: Option<Vec<u32>>,
    pub level_rule: LevelRule,
}

impl Facts {
    pub fn with_direct(mut self, direct: Vec<Vec<Vertex>>) -> Self {
        self.direct = Some(
            direct
                .into_iter()
                .map(|mut c| {
                    c.sort_unstable();
                    c
                })
                .collect(),
        );
        self
    }

    pub fn with_levels(mut self, levels: Vec<u32>) -> Self {
        self.levels = Some(levels);
        self
    }
}

pub fn realize_diagram(g: &CircleGraph, facts: &Facts) -> Result<ChordDiagram> {
    realize_diagram_bounded(g, facts, DEFAULT_BOUND)
}

pub fn realize_diagram_bounded(
    g: &CircleGraph,
    facts: &Facts,
    bound: usize,
) -> Result<ChordDiagram> {
    let n = g.vertex_count();
    if n > bound {
        return Err(Error::Capacity {
            what: "realizer input",
            size: n,
            limit: bound,
        });
    }
    if let Some(d) = &facts.direct {
        if d.len() != n {
            return Err(Error::FactViolated(format!(
                "direct-encasement table has {} rows for {n} chords",
                d.len()
            )));
        }
    }
    if let Some(l) = &facts.levels {
        if l.len() != n {
            return Err(Error::FactViolated(format!(
                "level table has {} entries for {n} chords",
                l.len()
            )));
        }
    }
    let mut s = Search {
        g,
        facts,
        n,
        open_at: vec![usize::MAX; n],
        close_at: vec![usize::MAX; n],
        seq: Vec::with_capacity(2 * n),
        open: FixedBitSet::with_capacity(n),
    };
    if s.step() {
        let d = ChordDiagram::from_endpoints(g.labels().to_vec(), s.seq)
            .expect("search emits each chord twice");
        Ok(d)
    } else {
        Err(Error::Unrealizable)
    }
}

struct Search<'a> {
    g: &'a CircleGraph,
    facts: &'a Facts,
    n: usize,
    open_at: Vec<usize>,
    close_at: Vec<usize>,
    seq: Vec<Vertex>,
    open: FixedBitSet,
}

impl Search<'_> {
    fn step(&mut self) -> bool {
        let t = self.seq.len();
        if t == 2 * self.n {
            return self.final_check();
        }
        for u in 0..self.n {
            if self.open_at[u] == usize::MAX {
                if self.can_open(u) {
                    self.open_at[u] = t;
                    self.open.insert(u);
                    self.seq.push(u);
                    if self.step() {
                        return true;
                    }
                    self.seq.pop();
                    self.open.set(u, false);
                    self.open_at[u] = usize::MAX;
                }
            } else if self.open.contains(u) && self.can_close(u) {
                self.close_at[u] = t;
                self.open.set(u, false);
                self.seq.push(u);
                if self.step() {
                    return true;
                }
                self.seq.pop();
                self.open.insert(u);
                self.close_at[u] = usize::MAX;
            }
        }
        false
    }

    fn can_open(&self, u: Vertex) -> bool {
        // closed chords lie wholly to the left of u
        (0..self.n).all(|w| self.close_at[w] == usize::MAX || !self.g.adjacent(u, w))
    }

    fn can_close(&self, u: Vertex) -> bool {
        let start = self.open_at[u];
        let mut inside = Vec::new();
        for w in 0..self.n {
            if w == u {
                continue;
            }
            let adj = self.g.adjacent(u, w);
            let ow = self.open_at[w];
            if ow == usize::MAX {
                if adj {
                    return false;
                }
                continue;
            }
            if ow > start {
                let still_open = self.open.contains(w);
                if still_open != adj {
                    return false;
                }
                if !still_open {
                    inside.push(w);
                }
            }
        }
        if let Some(direct) = &self.facts.direct {
            let children: Vec<Vertex> = inside
                .iter()
                .copied()
                .filter(|&c| {
                    !inside.iter().any(|&w| {
                        self.open_at[w] < self.open_at[c] && self.close_at[c] < self.close_at[w]
                    })
                })
                .collect();
            if children != direct[u] {
                return false;
            }
        }
        true
    }

    fn final_check(&self) -> bool {
        let d = ChordDiagram::from_endpoints(self.g.labels().to_vec(), self.seq.clone())
            .expect("complete sequence");
        if let Some(levels) = &self.facts.levels {
            if d.levels_with(self.facts.level_rule).as_slice() != levels.as_slice() {
                return false;
            }
        }
        true
    }
}
