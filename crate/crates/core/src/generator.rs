//! Random 3-colorable circle graphs built by incremental chord insertion,
//! plus the plain-text instance format and corpus plumbing.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::ChordDiagram;
use crate::error::{Error, Result};
use crate::graph::{has_triangle_in, CircleGraph, Vertex};
use crate::solvers::coloring::check_coloring;

pub const DEFAULT_MAX_RETRIES: usize = 100_000;
pub const MANIFEST_NAME: &str = "manifest.csv";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub target_n: usize,
    pub seed: u64,
    /// Consecutive rejected placements tolerated before giving up.
    pub max_retries_per_vertex: usize,
}

impl GenParams {
    pub fn new(target_n: usize, seed: u64) -> Self {
        GenParams {
            target_n,
            seed,
            max_retries_per_vertex: DEFAULT_MAX_RETRIES,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedInstance {
    /// Carries its diagram.
    pub graph: CircleGraph,
    /// Colors in `1..=3`, indexed by vertex.
    pub witness: Vec<u8>,
    pub seed: u64,
}

pub fn gen_instance(p: GenParams) -> Result<GeneratedInstance> {
    if p.target_n < 3 {
        return Err(Error::Capacity {
            what: "target vertex count (minimum)",
            size: p.target_n,
            limit: 3,
        });
    }
    let n = p.target_n;
    let labels: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut g = CircleGraph::new(labels.clone());
    let mut seq: Vec<Vertex> = Vec::with_capacity(2 * n);
    let mut colors: Vec<u8> = Vec::with_capacity(n);
    let mut count = vec![0u8; n];

    for v in 0..n {
        let mut placed = false;
        for _ in 0..p.max_retries_per_vertex.max(1) {
            let gaps = seq.len() + 1;
            let (lo, hi) = if seq.is_empty() {
                (0, 0)
            } else {
                let a = rng.gen_range(0..gaps);
                let mut b = rng.gen_range(0..gaps - 1);
                if b >= a {
                    b += 1;
                }
                (a.min(b), a.max(b))
            };
            // chords with exactly one endpoint in seq[lo..hi]
            count.iter_mut().for_each(|c| *c = 0);
            for &u in &seq[lo..hi] {
                count[u] += 1;
            }
            let mut nbrs = FixedBitSet::with_capacity(n);
            for (u, &c) in count.iter().enumerate().take(v) {
                if c == 1 {
                    nbrs.insert(u);
                }
            }
            if has_triangle_in(&g, &nbrs) {
                continue;
            }
            let mut used = [false; 4];
            for u in nbrs.ones() {
                used[colors[u] as usize] = true;
            }
            let Some(c) = (1..=3u8).find(|&c| !used[c as usize]) else {
                continue;
            };
            for u in nbrs.ones() {
                g.add_edge(u, v)?;
            }
            seq.insert(hi, v);
            seq.insert(lo, v);
            colors.push(c);
            placed = true;
            break;
        }
        if !placed {
            return Err(Error::Generation {
                achieved: v,
                target: n,
            });
        }
    }
    let diagram = ChordDiagram::from_endpoints(labels, seq)?;
    let graph = g.attach_diagram_unchecked(diagram);
    debug_assert!(check_coloring(&graph, &colors).is_ok());
    Ok(GeneratedInstance {
        graph,
        witness: colors,
        seed: p.seed,
    })
}

/// One instance on disk: graph with diagram, optional witness, and free-form
/// `key = value` expectations following an `[expect]` line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub graph: CircleGraph,
    pub seed: u64,
    pub witness: Option<Vec<u8>>,
    pub expect: Vec<(String, String)>,
}

impl From<GeneratedInstance> for InstanceFile {
    fn from(g: GeneratedInstance) -> Self {
        InstanceFile {
            graph: g.graph,
            seed: g.seed,
            witness: Some(g.witness),
            expect: Vec::new(),
        }
    }
}

impl InstanceFile {
    pub fn expectation(&self, key: &str) -> Option<&str> {
        self.expect
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let g = &self.graph;
        let mut out = String::new();
        let _ = writeln!(out, "{} {} {}", g.vertex_count(), g.edge_count(), self.seed);
        match g.diagram() {
            Some(d) => {
                let _ = writeln!(out, "{d}");
            }
            None => out.push_str("none\n"),
        }
        out.push_str(&g.to_edge_list());
        match &self.witness {
            Some(w) => {
                let toks: Vec<String> = w
                    .iter()
                    .enumerate()
                    .map(|(v, c)| format!("{}:{c}", g.label(v)))
                    .collect();
                let _ = writeln!(out, "{}", toks.join(" "));
            }
            None => out.push_str("none\n"),
        }
        if !self.expect.is_empty() {
            out.push_str("[expect]\n");
            for (k, v) in &self.expect {
                let _ = writeln!(out, "{k} = {v}");
            }
        }
        out
    }

    /// Parses [`InstanceFile::render`] output. The diagram is mandatory and its
    /// alternation must reproduce the edge list exactly.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, crate::graph::strip_comment(l)))
            .filter(|(_, l)| !l.is_empty());
        let err = |line: usize, message: String| Error::Parse { line, message };

        let (ln, header) = lines
            .next()
            .ok_or_else(|| err(1, "empty instance".into()))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 3 {
            return Err(err(ln, "header must be `n m seed`".into()));
        }
        let num = |s: &str| s.parse::<u64>().map_err(|e| err(ln, format!("`{s}`: {e}")));
        let (n, m, seed) = (num(h[0])? as usize, num(h[1])? as usize, num(h[2])?);

        let (ln, dline) = lines
            .next()
            .ok_or_else(|| err(ln + 1, "missing diagram line".into()))?;
        let diagram = ChordDiagram::parse(dline).map_err(|e| err(ln, e.to_string()))?;
        if diagram.chord_count() != n {
            return Err(err(
                ln,
                format!(
                    "diagram has {} chords, header says {n}",
                    diagram.chord_count()
                ),
            ));
        }
        // vertices are numbered in natural label order (v2 before v10)
        let mut labels = diagram.labels().to_vec();
        labels.sort_by_cached_key(|l| natural_key(l));
        let diagram = ChordDiagram::parse_with_labels(&labels, dline)?;
        let mut g = CircleGraph::new(labels);
        let mut last = ln;
        for _ in 0..m {
            let (ln, l) = lines
                .next()
                .ok_or_else(|| err(last + 1, format!("expected {m} edge lines")))?;
            last = ln;
            let t: Vec<&str> = l.split_whitespace().collect();
            if t.len() != 2 {
                return Err(err(ln, "expected `u v`".into()));
            }
            let u = g.vertex(t[0]).map_err(|e| err(ln, e.to_string()))?;
            let v = g.vertex(t[1]).map_err(|e| err(ln, e.to_string()))?;
            if u == v {
                return Err(err(ln, format!("self-loop on `{}`", t[0])));
            }
            if g.adjacent(u, v) {
                return Err(err(ln, format!("duplicate edge {} {}", t[0], t[1])));
            }
            g.add_edge(u, v)?;
        }
        let g = g
            .with_diagram(diagram)
            .map_err(|e| err(ln, e.to_string()))?;

        let (ln, wline) = lines
            .next()
            .ok_or_else(|| err(last + 1, "missing witness line".into()))?;
        let witness = if wline == "none" {
            None
        } else {
            let mut w = vec![0u8; n];
            let mut seen = vec![false; n];
            for tok in wline.split_whitespace() {
                let (label, c) = tok
                    .rsplit_once(':')
                    .ok_or_else(|| err(ln, format!("witness token `{tok}` is not label:color")))?;
                let v = g.vertex(label).map_err(|e| err(ln, e.to_string()))?;
                let c: u8 = c
                    .parse()
                    .map_err(|_| err(ln, format!("bad color in `{tok}`")))?;
                if !(1..=3).contains(&c) || seen[v] {
                    return Err(err(ln, format!("bad witness token `{tok}`")));
                }
                seen[v] = true;
                w[v] = c;
            }
            Some(w)
        };

        let mut expect = Vec::new();
        if let Some((ln, l)) = lines.next() {
            if l != "[expect]" {
                return Err(err(ln, format!("unexpected trailing line `{l}`")));
            }
            for (ln, l) in lines {
                let (k, v) = l
                    .split_once('=')
                    .ok_or_else(|| err(ln, "expectation must be `key = value`".into()))?;
                expect.push((k.trim().to_string(), v.trim().to_string()));
            }
        }
        Ok(InstanceFile {
            graph: g,
            seed,
            witness,
            expect,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.render())?;
        Ok(())
    }
}

fn natural_key(label: &str) -> (String, Option<u64>, String) {
    let digits = label.len() - label.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    let (head, tail) = label.split_at(label.len() - digits);
    (head.to_string(), tail.parse().ok(), label.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestRow {
    pub file: String,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
}

/// Writes `count` instances named `inst_0000.txt`... plus `manifest.csv`.
/// Instance `i` uses seed `seed + i`; its size comes from a stream seeded by `seed`.
pub fn gen_corpus(
    count: usize,
    n_min: usize,
    n_max: usize,
    seed: u64,
    dir: &Path,
) -> Result<Vec<ManifestRow>> {
    if count == 0 || n_min < 3 || n_max < n_min {
        return Err(Error::Capacity {
            what: "corpus parameters (count >= 1, 3 <= n_min <= n_max)",
            size: n_min,
            limit: n_max,
        });
    }
    fs::create_dir_all(dir)?;
    let mut sizes = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(count);
    for i in 0..count {
        let n = sizes.gen_range(n_min..=n_max);
        let s = seed.wrapping_add(i as u64);
        let inst = gen_instance(GenParams::new(n, s))?;
        let file = format!("inst_{i:04}.txt");
        let m = inst.graph.edge_count();
        InstanceFile::from(inst).write(&dir.join(&file))?;
        rows.push(ManifestRow {
            file,
            n,
            m,
            seed: s,
        });
    }
    let mut csv = String::from("file,n,m,seed\n");
    for r in &rows {
        let _ = writeln!(csv, "{},{},{},{}", r.file, r.n, r.m, r.seed);
    }
    fs::write(dir.join(MANIFEST_NAME), csv)?;
    Ok(rows)
}

/// Instance files of a corpus directory, from the manifest if present,
/// otherwise every `*.txt` file; sorted by name.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let manifest = dir.join(MANIFEST_NAME);
    let mut files: Vec<PathBuf> = if manifest.exists() {
        fs::read_to_string(&manifest)?
            .lines()
            .skip(1)
            .filter_map(|l| l.split(',').next())
            .filter(|f| !f.is_empty())
            .map(|f| dir.join(f))
            .collect()
    } else {
        fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "txt"))
            .collect()
    };
    files.sort();
    Ok(files)
}
