//! Built-in instances on which the claimed algorithm fails, and the checks
//! that confirm each failure.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use crate::diagram::ChordDiagram;
use crate::error::{Error, Result};
use crate::formula::{build_phi, clauses_for, Formula, KeyLit, VarKey};
use crate::generator::InstanceFile;
use crate::graph::{CircleGraph, Vertex};
use crate::realize::{realize_diagram, Facts};
use crate::solvers::coloring::brute_force_3color;
use crate::solvers::unger::parse_trace_line;
use crate::solvers::{
    solve_dpll, solve_unger, Budget, ConflictChoice, JumpChoice, Outcome, UngerConfig,
    VariableOrder,
};
use crate::subgraphs::{
    important_subgraphs, Filter, FilterVariant, ImportantSubgraph, PatternKind, DEFAULT_MAX_CYCLE,
};

pub const C5_INSTANCE: &str = include_str!("../data/c5/c5.inst");
pub const C5_ORDER: &str = include_str!("../data/c5/order.txt");
pub const C5_JUMPS: &str = include_str!("../data/c5/jumps.txt");
pub const C5_TRACE: &str = include_str!("../data/c5/trace.golden");

/// A literal on a named pair: `(u, v, positive)`.
pub type PairLit = (String, String, bool);

/// One expected important subgraph together with its clauses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectedRow {
    pub kind: PatternKind,
    pub vertices: Vec<String>,
    pub clauses: Vec<Vec<PairLit>>,
}

/// Settings for replaying a recorded jump-backtracking run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UngerSetup {
    /// Variable names; unlisted variables follow in table order.
    pub order: String,
    pub conflict: ConflictChoice,
    /// Jump targets by name, consumed in order.
    pub script: String,
    /// Expected trace in the rendered trace format.
    pub golden: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expectations {
    /// Filter variant the clause expectations refer to.
    pub variant: FilterVariant,
    pub colorable: Option<bool>,
    pub phi_satisfiable: Option<bool>,
    /// Clause entries counted over non-redundant subgraphs.
    pub clause_entries: Option<usize>,
    pub pair_vars: Option<usize>,
    pub rows: Vec<ExpectedRow>,
    /// Vertex sets of subgraphs that occur but repeat clauses of another row.
    pub redundant: Vec<Vec<String>>,
    /// Pairs whose constraint is recorded with `rows` only as a set.
    pub box_slash_pairs: Vec<(String, String)>,
    pub assignment: Vec<PairLit>,
    /// Pairs no important subgraph may contain.
    pub excluded_pairs: Vec<(String, String)>,
    pub unger: Option<UngerSetup>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fact {
    pub name: String,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct NamedInstance {
    pub name: String,
    /// Carries its diagram.
    pub graph: CircleGraph,
    pub expected: Expectations,
    pub facts: Vec<Fact>,
}

fn labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("v{i}")).collect()
}

fn s(x: &str) -> String {
    x.to_string()
}

fn pl(u: &str, v: &str, positive: bool) -> PairLit {
    (s(u), s(v), positive)
}

fn row(kind: PatternKind, vs: &[&str], clauses: Vec<Vec<PairLit>>) -> ExpectedRow {
    ExpectedRow {
        kind,
        vertices: vs.iter().map(|v| s(v)).collect(),
        clauses,
    }
}

fn tail(vs: &[&str], (a, b): (&str, &str), (c, d): (&str, &str)) -> ExpectedRow {
    row(
        PatternKind::TailTriangle,
        vs,
        vec![
            vec![pl(a, b, true), pl(c, d, true)],
            vec![pl(a, b, false), pl(c, d, false)],
        ],
    )
}

const EA_EDGES: [(usize, usize); 14] = [
    (1, 3),
    (1, 4),
    (1, 5),
    (1, 8),
    (2, 3),
    (2, 4),
    (2, 5),
    (2, 6),
    (2, 7),
    (4, 5),
    (4, 8),
    (6, 7),
    (6, 8),
    (7, 8),
];

/// The eight-vertex graph: not 3-colorable, yet its formula is satisfiable.
pub fn instance_ea() -> NamedInstance {
    let edges: Vec<(Vertex, Vertex)> = EA_EDGES.iter().map(|&(u, v)| (u - 1, v - 1)).collect();
    let g = CircleGraph::from_edges(labels(8), &edges).expect("static edge list");
    // direct children per chord, 0-based
    let direct = vec![
        vec![1, 5, 6],
        vec![],
        vec![3, 4],
        vec![5, 6],
        vec![5, 6, 7],
        vec![],
        vec![],
        vec![],
    ];
    let facts = Facts::default()
        .with_direct(direct)
        .with_levels(vec![1, 2, 1, 2, 2, 3, 3, 3]);
    let d = realize_diagram(&g, &facts).expect("the eight-vertex graph is realizable");
    let graph = g
        .with_diagram(d)
        .expect("realizer output matches adjacency");

    let sq = |vs: &[&str], a: (&str, &str), b: (&str, &str)| {
        row(
            PatternKind::Square,
            vs,
            vec![vec![pl(a.0, a.1, true), pl(b.0, b.1, true)]],
        )
    };
    let bs =
        |vs: &[&str], a: &str, b: &str| row(PatternKind::BoxSlash, vs, vec![vec![pl(a, b, true)]]);
    let rows = vec![
        sq(&["v1", "v2", "v3", "v4"], ("v1", "v2"), ("v3", "v4")),
        sq(&["v1", "v2", "v3", "v5"], ("v1", "v2"), ("v3", "v5")),
        bs(&["v1", "v2", "v4", "v5"], "v1", "v2"),
        bs(&["v1", "v4", "v5", "v8"], "v5", "v8"),
        tail(&["v1", "v6", "v7", "v8"], ("v1", "v6"), ("v1", "v7")),
        tail(&["v1", "v3", "v4", "v5"], ("v3", "v4"), ("v3", "v5")),
        tail(&["v2", "v3", "v4", "v5"], ("v3", "v4"), ("v3", "v5")),
        tail(&["v2", "v4", "v6", "v7"], ("v4", "v6"), ("v4", "v7")),
        tail(&["v2", "v5", "v6", "v7"], ("v5", "v6"), ("v5", "v7")),
        tail(&["v2", "v4", "v5", "v6"], ("v4", "v6"), ("v5", "v6")),
        tail(&["v2", "v4", "v5", "v7"], ("v4", "v7"), ("v5", "v7")),
    ];
    let t = |u: &str, v: &str| pl(u, v, true);
    let f = |u: &str, v: &str| pl(u, v, false);
    let expected = Expectations {
        variant: FilterVariant::ExtendedAbstract,
        colorable: Some(false),
        phi_satisfiable: Some(true),
        clause_entries: Some(18),
        pair_vars: Some(11),
        rows,
        redundant: vec![vec![s("v4"), s("v6"), s("v7"), s("v8")]],
        box_slash_pairs: Vec::new(),
        // v2v5 is also listed as true in the source table, but it is an edge
        // and therefore not a variable; it is left out here.
        assignment: vec![
            t("v1", "v2"),
            t("v1", "v7"),
            t("v3", "v4"),
            t("v4", "v6"),
            t("v5", "v7"),
            t("v5", "v8"),
            f("v1", "v6"),
            f("v4", "v7"),
            f("v5", "v6"),
            f("v3", "v5"),
        ],
        excluded_pairs: vec![(s("v2"), s("v8")), (s("v3"), s("v8"))],
        unger: None,
    };
    let facts = ea_facts(&graph);
    NamedInstance {
        name: s("ea"),
        graph,
        expected,
        facts,
    }
}

/// Neighborhood identities the eight-vertex graph is built to satisfy.
pub fn ea_facts(g: &CircleGraph) -> Vec<Fact> {
    let v = |i: usize| i - 1;
    let common = |vs: &[usize]| -> BTreeSet<usize> {
        (0..g.vertex_count())
            .filter(|&w| vs.iter().all(|&u| g.adjacent(v(u), w)))
            .map(|w| w + 1)
            .collect()
    };
    let set = |xs: &[usize]| xs.iter().copied().collect::<BTreeSet<usize>>();
    let edge = |a: usize, b: usize| g.adjacent(v(a), v(b));
    let in_triangle = |a: usize| {
        g.neighbors(v(a))
            .any(|b| g.neighbors(b).any(|c| c != v(a) && g.adjacent(c, v(a))))
    };
    let mut c4s: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let n = g.vertex_count();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let q = [a, b, c, d];
                    let deg_two = q
                        .iter()
                        .all(|&x| q.iter().filter(|&&y| g.adjacent(x, y)).count() == 2);
                    let m = q
                        .iter()
                        .enumerate()
                        .flat_map(|(i, &x)| q[i + 1..].iter().map(move |&y| (x, y)))
                        .filter(|&(x, y)| g.adjacent(x, y))
                        .count();
                    if deg_two && m == 4 {
                        c4s.insert(q.iter().map(|x| x + 1).collect());
                    }
                }
            }
        }
    }
    let fact = |name: &str, holds: bool| Fact {
        name: s(name),
        holds,
    };
    vec![
        fact(
            "N(v1)∩N(v2) = {v3,v4,v5}",
            common(&[1, 2]) == set(&[3, 4, 5]),
        ),
        fact("N(v1)∩N(v6)∩N(v7) = {v8}", common(&[1, 6, 7]) == set(&[8])),
        fact(
            "N(v3)∩N(v4)∩N(v5) = {v1,v2}",
            common(&[3, 4, 5]) == set(&[1, 2]),
        ),
        fact(
            "N(v4)∩N(v5)∩N(v6)∩N(v7) = {v2}",
            common(&[4, 5, 6, 7]) == set(&[2]),
        ),
        fact("v8 ∈ N(v4)∩N(v6)∩N(v7)", common(&[4, 6, 7]).contains(&8)),
        fact(
            "N(v1)∩N(v6) = N(v1)∩N(v7) = {v8}",
            common(&[1, 6]) == set(&[8]) && common(&[1, 7]) == set(&[8]),
        ),
        fact("v3 lies in no triangle", !in_triangle(3)),
        fact(
            "{v2,v4,v5} is a clique",
            edge(2, 4) && edge(2, 5) && edge(4, 5),
        ),
        fact(
            "N(v4)∩N(v6) = N(v4)∩N(v7) = {v2,v8}",
            common(&[4, 6]) == set(&[2, 8]) && common(&[4, 7]) == set(&[2, 8]),
        ),
        fact("v2 and v8 are not adjacent", !edge(2, 8)),
        fact(
            "N(v5)∩N(v6) = N(v5)∩N(v7) = {v2}",
            common(&[5, 6]) == set(&[2]) && common(&[5, 7]) == set(&[2]),
        ),
        fact("N(v5)∩N(v8) = {v1,v4}", common(&[5, 8]) == set(&[1, 4])),
        fact("v1v4 and v1v8 are edges", edge(1, 4) && edge(1, 8)),
        fact(
            "chordless 4-cycles are {v1,v2,v3,v4} {v1,v2,v3,v5} {v2,v4,v6,v8} {v2,v4,v7,v8}",
            c4s == [
                set(&[1, 2, 3, 4]),
                set(&[1, 2, 3, 5]),
                set(&[2, 4, 6, 8]),
                set(&[2, 4, 7, 8]),
            ]
            .into_iter()
            .collect(),
        ),
    ]
}

/// The five-cycle with the recorded assignment order and jump choices.
pub fn instance_c5() -> NamedInstance {
    let file = InstanceFile::parse(C5_INSTANCE).expect("bundled five-cycle instance");
    NamedInstance {
        name: s("c5"),
        graph: file.graph,
        expected: Expectations {
            variant: FilterVariant::ExtendedAbstract,
            colorable: Some(true),
            phi_satisfiable: Some(true),
            unger: Some(UngerSetup {
                order: s(C5_ORDER),
                conflict: ConflictChoice::Last,
                script: s(C5_JUMPS),
                golden: s(C5_TRACE),
            }),
            ..Expectations::default()
        },
        facts: Vec::new(),
    }
}

const THESIS_BOX_SLASH: [(&str, &str); 6] = [
    ("v1", "v2"),
    ("v4", "v5"),
    ("v1", "v7"),
    ("v2", "v10"),
    ("v6", "v8"),
    ("v8", "v9"),
];

/// Reads the ten-vertex instance for the thesis variant from an instance file.
///
/// The file may carry `true = u-v ...` and `false = u-v ...` lines in its
/// `[expect]` block giving the assignment to check. The loader rejects data
/// that contradicts a known property of the instance, naming that property.
pub fn load_thesis_instance(path: &Path) -> Result<NamedInstance> {
    let file = InstanceFile::read(path)?;
    thesis_from_file(file)
}

pub fn thesis_from_file(file: InstanceFile) -> Result<NamedInstance> {
    let g = file.graph.clone();
    let d = g
        .diagram()
        .cloned()
        .ok_or_else(|| Error::FactViolated(s("diagram missing")))?;
    let fail = |what: &str| Err(Error::FactViolated(s(what)));
    for i in 1..=10 {
        g.vertex(&format!("v{i}"))
            .map_err(|_| Error::FactViolated(format!("vertex v{i} is missing")))?;
    }
    let v = |l: &str| g.vertex(l).expect("checked above");
    if !g.adjacent(v("v2"), v("v7")) {
        return fail("v2v7 must be an edge (v1 shares its color with both v2 and v7)");
    }
    let lv = d.levels();
    for l in 1..=lv.depth() {
        if lv.members(l).len() > 3 {
            return fail("each level holds at most three chords");
        }
    }
    let filter = Filter::new(FilterVariant::Thesis);
    let imp = important_subgraphs(&g, &d, &filter, DEFAULT_MAX_CYCLE)?.subgraphs;
    if imp.iter().any(|h| h.kind.is_cycle()) {
        return fail("no important induced cycle of length above four");
    }
    let want: BTreeSet<(Vertex, Vertex)> = THESIS_BOX_SLASH
        .iter()
        .map(|&(a, b)| (v(a).min(v(b)), v(a).max(v(b))))
        .collect();
    let got: BTreeSet<(Vertex, Vertex)> = imp
        .iter()
        .filter(|h| h.kind == PatternKind::BoxSlash)
        .map(|h| h.pairs[0])
        .collect();
    if got != want {
        return fail("box-slash pairs are exactly v1v2 v4v5 v1v7 v2v10 v6v8 v8v9");
    }
    let tt = imp.iter().any(|h| {
        h.kind == PatternKind::TailTriangle
            && h.vertex_set() == [v("v2"), v("v6"), v("v7"), v("v8")].into_iter().collect()
            && h.vertices[0] == v("v6")
    });
    if !tt {
        return fail("{v2,v6,v7,v8} is an important tail triangle with pendant v6");
    }
    if brute_force_3color(&g)?.is_some() {
        return fail("the graph is not 3-colorable");
    }

    let mut assignment = Vec::new();
    for (key, value) in [("true", true), ("false", false)] {
        if let Some(list) = file.expectation(key) {
            for tok in list.split_whitespace() {
                let (a, b) = tok
                    .split_once('-')
                    .ok_or_else(|| Error::FactViolated(format!("bad pair `{tok}`")))?;
                g.vertex(a)?;
                g.vertex(b)?;
                assignment.push((s(a), s(b), value));
            }
        }
    }
    let expected = Expectations {
        variant: FilterVariant::Thesis,
        colorable: Some(false),
        phi_satisfiable: Some(true),
        box_slash_pairs: THESIS_BOX_SLASH
            .iter()
            .map(|&(a, b)| (s(a), s(b)))
            .collect(),
        rows: vec![tail(&["v2", "v6", "v7", "v8"], ("v6", "v7"), ("v6", "v8"))],
        assignment,
        ..Expectations::default()
    };
    Ok(NamedInstance {
        name: s("thesis"),
        graph: g,
        expected,
        facts: Vec::new(),
    })
}

/// Graph with its first diagram found by the realizer, for ad hoc checks.
pub fn plain_instance(name: &str, g: CircleGraph) -> Result<NamedInstance> {
    let g = if g.diagram().is_some() {
        g
    } else {
        let d = realize_diagram(&g, &Facts::default())?;
        g.with_diagram(d)?
    };
    Ok(NamedInstance {
        name: s(name),
        graph: g,
        expected: Expectations::default(),
        facts: Vec::new(),
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RefutationReport {
    pub instance: String,
    pub variant: FilterVariant,
    pub colorable_by_oracle: Option<bool>,
    pub phi_satisfiable: bool,
    pub assignment_valid: Option<bool>,
    /// Every expected row occurs with its clause set.
    pub rows_present: Option<bool>,
    /// Additionally, nothing else occurs apart from declared redundancies.
    pub clause_set_match: Option<bool>,
    pub counts_match: Option<bool>,
    pub excluded_pairs_ok: Option<bool>,
    pub facts_ok: Option<bool>,
    pub unger_unsat: Option<bool>,
    pub trace_match: Option<bool>,
    pub important_subgraphs: usize,
    pub clause_entries: usize,
    pub distinct_clauses: usize,
    pub pair_vars: usize,
    pub overall: bool,
    pub notes: Vec<String>,
}

fn yn(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "yes",
        Some(false) => "no",
        None => "n/a",
    }
}

impl RefutationReport {
    fn rows(&self) -> Vec<(&'static str, String)> {
        vec![
            ("instance", self.instance.clone()),
            (
                "variant",
                match self.variant {
                    FilterVariant::ExtendedAbstract => s("ea"),
                    FilterVariant::Thesis => s("thesis"),
                },
            ),
            ("colorable_by_oracle", s(yn(self.colorable_by_oracle))),
            ("phi_satisfiable", s(yn(Some(self.phi_satisfiable)))),
            ("assignment_valid", s(yn(self.assignment_valid))),
            ("rows_present", s(yn(self.rows_present))),
            ("clause_set_match", s(yn(self.clause_set_match))),
            ("counts_match", s(yn(self.counts_match))),
            ("excluded_pairs_ok", s(yn(self.excluded_pairs_ok))),
            ("facts_ok", s(yn(self.facts_ok))),
            ("unger_unsat", s(yn(self.unger_unsat))),
            ("trace_match", s(yn(self.trace_match))),
            ("important_subgraphs", self.important_subgraphs.to_string()),
            ("clause_entries", self.clause_entries.to_string()),
            ("distinct_clauses", self.distinct_clauses.to_string()),
            ("pair_vars", self.pair_vars.to_string()),
            ("overall", s(yn(Some(self.overall)))),
        ]
    }

    /// `key=value` lines; booleans as true/false/null.
    pub fn to_key_values(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.rows() {
            let v = match v.as_str() {
                "yes" => s("true"),
                "no" => s("false"),
                "n/a" => s("null"),
                _ => v,
            };
            out.push_str(&format!("{k}={v}\n"));
        }
        for n in &self.notes {
            out.push_str(&format!("note={n}\n"));
        }
        out
    }
}

impl fmt::Display for RefutationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self.rows();
        let w = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in rows {
            writeln!(f, "{k:<w$}  {v}")?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

fn lit_set(clauses: &[(Vec<KeyLit>, String)]) -> BTreeSet<BTreeSet<KeyLit>> {
    clauses
        .iter()
        .map(|(lits, _)| lits.iter().cloned().collect())
        .collect()
}

fn expected_lit_set(g: &CircleGraph, r: &ExpectedRow) -> Result<BTreeSet<BTreeSet<KeyLit>>> {
    r.clauses
        .iter()
        .map(|c| {
            c.iter()
                .map(|(a, b, p)| Ok((VarKey::pair(g.vertex(a)?, g.vertex(b)?), *p)))
                .collect()
        })
        .collect()
}

fn vertex_set(g: &CircleGraph, vs: &[String]) -> Result<BTreeSet<Vertex>> {
    vs.iter().map(|v| g.vertex(v)).collect()
}

/// Runs every check the instance's expectations call for.
pub fn verify(inst: &NamedInstance, variant: FilterVariant) -> Result<RefutationReport> {
    let g = &inst.graph;
    let d: ChordDiagram = g
        .diagram()
        .cloned()
        .ok_or_else(|| Error::FactViolated(s("instance has no diagram")))?;
    let exp = &inst.expected;
    let mut r = RefutationReport {
        instance: inst.name.clone(),
        variant,
        ..RefutationReport::default()
    };

    r.colorable_by_oracle = match brute_force_3color(g) {
        Ok(c) => Some(c.is_some()),
        Err(e) => {
            r.notes.push(format!("oracle skipped: {e}"));
            None
        }
    };
    let filter = Filter::new(variant);
    r.notes.extend(filter.notes());
    let cands = important_subgraphs(g, &d, &filter, DEFAULT_MAX_CYCLE)?;
    r.notes.extend(cands.warnings.iter().cloned());
    let imp = cands.subgraphs;
    let phi = build_phi(g, &imp)?;
    r.important_subgraphs = imp.len();
    r.distinct_clauses = phi.distinct_clause_indices().len();
    r.pair_vars = phi.pair_var_count();
    r.phi_satisfiable = solve_dpll(&phi).outcome.is_sat();

    let redundant: Vec<BTreeSet<Vertex>> = exp
        .redundant
        .iter()
        .map(|vs| vertex_set(g, vs))
        .collect::<Result<_>>()?;
    r.clause_entries = (0..phi.clause_count())
        .filter(|&i| match phi.provenance(i).subgraph {
            Some(si) => !redundant.contains(&imp[si].vertex_set()),
            None => true,
        })
        .count();

    if !exp.assignment.is_empty() {
        r.assignment_valid = Some(check_assignment(g, &phi, &exp.assignment, &mut r.notes));
    }

    let same_variant = variant == exp.variant;
    if same_variant && !exp.rows.is_empty() {
        let (present, exact) = match_rows(g, &imp, exp, &redundant, &mut r.notes)?;
        r.rows_present = Some(present);
        r.clause_set_match = Some(exact);
    }
    if same_variant && !exp.box_slash_pairs.is_empty() {
        let want: BTreeSet<(Vertex, Vertex)> = exp
            .box_slash_pairs
            .iter()
            .map(|(a, b)| Ok(VarKey::pair(g.vertex(a)?, g.vertex(b)?)))
            .collect::<Result<BTreeSet<VarKey>>>()?
            .into_iter()
            .filter_map(|k| match k {
                VarKey::Pair(a, b) => Some((a, b)),
                _ => None,
            })
            .collect();
        let got: BTreeSet<(Vertex, Vertex)> = imp
            .iter()
            .filter(|h| h.kind == PatternKind::BoxSlash)
            .map(|h| h.pairs[0])
            .collect();
        let ok = want == got;
        if !ok {
            r.notes.push(s("box-slash pair set differs"));
        }
        r.rows_present = Some(r.rows_present.unwrap_or(true) && ok);
        r.clause_set_match = Some(r.clause_set_match.unwrap_or(true) && ok);
    }
    if same_variant && (exp.clause_entries.is_some() || exp.pair_vars.is_some()) {
        let mut ok = true;
        if let Some(c) = exp.clause_entries {
            if c != r.clause_entries {
                ok = false;
                r.notes.push(format!(
                    "clause entries: expected {c}, found {}",
                    r.clause_entries
                ));
            }
        }
        if let Some(p) = exp.pair_vars {
            if p != r.pair_vars {
                ok = false;
                r.notes.push(format!(
                    "pair variables: expected {p}, found {}",
                    r.pair_vars
                ));
            }
        }
        r.counts_match = Some(ok);
    }
    if same_variant && !exp.excluded_pairs.is_empty() {
        let mut ok = true;
        for (a, b) in &exp.excluded_pairs {
            let (a, b) = (g.vertex(a)?, g.vertex(b)?);
            if imp
                .iter()
                .any(|h| h.vertices.contains(&a) && h.vertices.contains(&b))
            {
                ok = false;
                r.notes.push(format!(
                    "pair {{{},{}}} occurs in an important subgraph",
                    g.label(a),
                    g.label(b)
                ));
            }
        }
        r.excluded_pairs_ok = Some(ok);
    }
    if !inst.facts.is_empty() {
        let ok = inst.facts.iter().all(|f| f.holds);
        for f in inst.facts.iter().filter(|f| !f.holds) {
            r.notes.push(format!("fact fails: {}", f.name));
        }
        r.facts_ok = Some(ok);
    }

    if let Some(u) = &exp.unger {
        let (unsat, trace_ok) = replay_unger(&phi, u, &mut r.notes)?;
        r.unger_unsat = Some(unsat);
        r.trace_match = Some(trace_ok);
        r.overall = unsat && r.phi_satisfiable && trace_ok;
    } else {
        r.overall = r.colorable_by_oracle == Some(false) && r.phi_satisfiable;
    }
    Ok(r)
}

fn check_assignment(
    g: &CircleGraph,
    phi: &Formula,
    lits: &[PairLit],
    notes: &mut Vec<String>,
) -> bool {
    let mut keys = Vec::new();
    for (a, b, val) in lits {
        match (g.vertex(a), g.vertex(b)) {
            (Ok(u), Ok(v)) => keys.push((VarKey::pair(u, v), *val)),
            _ => {
                notes.push(format!("assignment names unknown vertex in {a}-{b}"));
                return false;
            }
        }
    }
    let mut a = match phi.assignment_from_keys(keys.iter().map(|(k, b)| (k, *b))) {
        Ok(a) => a,
        Err(e) => {
            notes.push(format!("assignment: {e}"));
            return false;
        }
    };
    if let Err(e) = phi.extend_h(&mut a) {
        notes.push(format!("assignment: {e}"));
        return false;
    }
    match phi.eval(&a) {
        crate::formula::Eval::Satisfied => true,
        other => {
            notes.push(format!("assignment evaluates to {other:?}"));
            false
        }
    }
}

/// Returns whether every expected row occurs with the same clause set, and
/// whether, beyond that, every other important subgraph is declared
/// redundant and repeats the clauses of some row.
fn match_rows(
    g: &CircleGraph,
    imp: &[ImportantSubgraph],
    exp: &Expectations,
    redundant: &[BTreeSet<Vertex>],
    notes: &mut Vec<String>,
) -> Result<(bool, bool)> {
    let mut ok = true;
    let mut expected_sets = Vec::new();
    let mut matched = vec![false; imp.len()];
    for r in &exp.rows {
        let vs = vertex_set(g, &r.vertices)?;
        let want = expected_lit_set(g, r)?;
        expected_sets.push(want.clone());
        let hit = imp
            .iter()
            .position(|h| h.kind == r.kind && h.vertex_set() == vs);
        match hit {
            Some(i) => {
                matched[i] = true;
                let got = lit_set(&clauses_for(&imp[i])?.clauses);
                if got != want {
                    ok = false;
                    notes.push(format!(
                        "clauses differ for {} {}",
                        r.kind,
                        r.vertices.join(" ")
                    ));
                }
            }
            None => {
                ok = false;
                notes.push(format!("missing {} {}", r.kind, r.vertices.join(" ")));
            }
        }
    }
    let present = ok;
    // the thesis expectations list only some rows
    if exp.variant == FilterVariant::Thesis {
        return Ok((present, ok));
    }
    for (i, h) in imp.iter().enumerate() {
        if matched[i] {
            continue;
        }
        let dup = redundant.contains(&h.vertex_set())
            && !h.kind.is_cycle()
            && expected_sets.contains(&lit_set(&clauses_for(h)?.clauses));
        if dup {
            notes.push(format!("redundant: {}", h.report_line(g)));
        } else {
            ok = false;
            notes.push(format!("unexpected: {}", h.report_line(g)));
        }
    }
    Ok((present, ok))
}

fn replay_unger(phi: &Formula, u: &UngerSetup, notes: &mut Vec<String>) -> Result<(bool, bool)> {
    let order = VariableOrder::parse(phi, &u.order)?;
    let script = u
        .script
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace)
        .map(|t| phi.var_by_name(t))
        .collect::<Result<Vec<u32>>>()?;
    let config = UngerConfig {
        conflict: u.conflict,
        jump: JumpChoice::Scripted(script),
        trace: true,
    };
    let run = solve_unger(phi, &order, Budget::unlimited(), &config)?;
    let unsat = run.stats.outcome == Outcome::Unsat;
    let golden = u
        .golden
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| parse_trace_line(phi, l))
        .collect::<Result<Vec<_>>>()?;
    let mut ok = golden.len() == run.trace.len();
    if !ok {
        notes.push(format!(
            "trace has {} events, expected {}",
            run.trace.len(),
            golden.len()
        ));
    }
    for (e, want) in run.trace.iter().zip(&golden) {
        let got = phi.clause(e.clause).sorted();
        let target = match e.action {
            crate::solvers::TraceAction::Flip(v) | crate::solvers::TraceAction::Jump(v) => Some(v),
            crate::solvers::TraceAction::ReportUnsat => None,
        };
        if e.index != want.index || got != want.lits || target != want.target {
            ok = false;
            notes.push(format!("trace event ({}) differs", e.index));
        }
    }
    Ok((unsat, ok))
}
