use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{CircleGraph, Vertex};
use crate::subgraphs::{ImportantSubgraph, PatternKind};

/// Cycle-encoding variable `h(v_anchor, v_target)` of one cycle occurrence.
/// Positions are 1-based indices into the cycle's stored vertex order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HVar {
    pub cycle: usize,
    pub anchor_pos: usize,
    pub target_pos: usize,
    pub anchor: Vertex,
    pub target: Vertex,
}

/// Variable identity. The derived order is the DIMACS numbering order:
/// pair variables lexicographically, then h-variables by cycle, anchor, target.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKey {
    /// `X(u,v)` with `u < v`: "same color".
    Pair(Vertex, Vertex),
    H(HVar),
    /// Anonymous variable, used for formulas read from DIMACS.
    Plain(u32),
}

impl VarKey {
    pub fn pair(u: Vertex, v: Vertex) -> Self {
        VarKey::Pair(u.min(v), u.max(v))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    pub var: u32,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: u32) -> Self {
        Lit {
            var,
            positive: true,
        }
    }

    pub fn neg(var: u32) -> Self {
        Lit {
            var,
            positive: false,
        }
    }

    pub fn negated(self) -> Self {
        Lit {
            var: self.var,
            positive: !self.positive,
        }
    }

    pub fn dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.positive {
            v
        } else {
            -v
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    pub lits: Vec<Lit>,
}

impl Clause {
    pub fn new(lits: Vec<Lit>) -> Self {
        Clause { lits }
    }

    /// Literals sorted, for order-insensitive comparison.
    pub fn sorted(&self) -> Vec<Lit> {
        let mut l = self.lits.clone();
        l.sort_unstable();
        l
    }
}

/// Where a clause came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    /// Index into [`Formula::subgraphs`], absent for formulas without a graph.
    pub subgraph: Option<usize>,
    /// Short role tag within the fragment, e.g. `at-least-one` or `R(1,4)a`.
    pub tag: String,
}

/// Truth assignment indexed by variable number; `None` is unassigned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    pub fn unassigned(vars: usize) -> Self {
        Assignment {
            values: vec![None; vars],
        }
    }

    pub fn from_values(values: Vec<Option<bool>>) -> Self {
        Assignment { values }
    }

    pub fn total(values: &[bool]) -> Self {
        Assignment {
            values: values.iter().map(|&b| Some(b)).collect(),
        }
    }

    #[inline]
    pub fn get(&self, var: u32) -> Option<bool> {
        self.values.get(var as usize).copied().flatten()
    }

    pub fn set(&mut self, var: u32, value: bool) {
        self.values[var as usize] = Some(value);
    }

    pub fn unset(&mut self, var: u32) {
        self.values[var as usize] = None;
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Option<bool>] {
        &self.values
    }

    pub fn is_total(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    #[inline]
    pub fn lit_value(&self, l: Lit) -> Option<bool> {
        self.get(l.var).map(|v| v == l.positive)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Eval {
    Satisfied,
    /// Index of the first clause whose literals are all false.
    Falsified(usize),
    Undetermined,
}

/// How variables are printed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NameStyle {
    /// `X(u,v)` and `h(c0,u,v)`; unambiguous across cycles.
    Full,
    /// `(u,v)` and `h(u,v)`, the notation used for single-cycle traces.
    Short,
}

/// CNF formula with a variable table and per-clause provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    vars: Vec<VarKey>,
    index: HashMap<VarKey, u32>,
    clauses: Vec<Clause>,
    provenance: Vec<Provenance>,
    subgraphs: Vec<ImportantSubgraph>,
    labels: Vec<String>,
}

impl Formula {
    /// Formula over anonymous variables `0..vars`.
    pub fn plain(vars: u32, clauses: Vec<Clause>) -> Self {
        let keys: Vec<VarKey> = (0..vars).map(VarKey::Plain).collect();
        let index = keys.iter().cloned().zip(0..).collect();
        let provenance = vec![
            Provenance {
                subgraph: None,
                tag: String::new(),
            };
            clauses.len()
        ];
        Formula {
            vars: keys,
            index,
            clauses,
            provenance,
            subgraphs: Vec::new(),
            labels: Vec::new(),
        }
    }

    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn clause(&self, i: usize) -> &Clause {
        &self.clauses[i]
    }

    pub fn provenance(&self, i: usize) -> &Provenance {
        &self.provenance[i]
    }

    pub fn subgraphs(&self) -> &[ImportantSubgraph] {
        &self.subgraphs
    }

    pub fn vars(&self) -> &[VarKey] {
        &self.vars
    }

    pub fn key(&self, var: u32) -> &VarKey {
        &self.vars[var as usize]
    }

    pub fn var(&self, key: &VarKey) -> Option<u32> {
        self.index.get(key).copied()
    }

    pub fn pair_var(&self, u: Vertex, v: Vertex) -> Option<u32> {
        self.var(&VarKey::pair(u, v))
    }

    pub fn pair_var_count(&self) -> usize {
        self.vars
            .iter()
            .filter(|k| matches!(k, VarKey::Pair(..)))
            .count()
    }

    /// Clause indices in order, skipping later byte-identical repeats.
    pub fn distinct_clause_indices(&self) -> Vec<usize> {
        let mut seen = std::collections::HashSet::new();
        (0..self.clauses.len())
            .filter(|&i| seen.insert(&self.clauses[i]))
            .collect()
    }

    pub fn var_name(&self, var: u32, style: NameStyle) -> String {
        let label = |v: Vertex| -> String {
            self.labels
                .get(v)
                .cloned()
                .unwrap_or_else(|| format!("#{v}"))
        };
        match (&self.vars[var as usize], style) {
            (VarKey::Pair(u, v), NameStyle::Full) => format!("X({},{})", label(*u), label(*v)),
            (VarKey::Pair(u, v), NameStyle::Short) => format!("({},{})", label(*u), label(*v)),
            (VarKey::H(h), NameStyle::Full) => {
                format!("h(c{},{},{})", h.cycle, label(h.anchor), label(h.target))
            }
            (VarKey::H(h), NameStyle::Short) => {
                format!("h({},{})", label(h.anchor), label(h.target))
            }
            (VarKey::Plain(i), _) => format!("x{}", i + 1),
        }
    }

    pub fn lit_name(&self, l: Lit, style: NameStyle) -> String {
        let n = self.var_name(l.var, style);
        if l.positive {
            n
        } else {
            format!("¬{n}")
        }
    }

    /// Literals joined by ` ∨ `, in stored order.
    pub fn render_clause(&self, c: &Clause, style: NameStyle) -> String {
        c.lits
            .iter()
            .map(|&l| self.lit_name(l, style))
            .collect::<Vec<_>>()
            .join(" ∨ ")
    }

    /// Looks a variable up by its printed name in either style.
    pub fn var_by_name(&self, name: &str) -> Result<u32> {
        let name = name.trim();
        (0..self.vars.len() as u32)
            .find(|&v| {
                self.var_name(v, NameStyle::Full) == name
                    || self.var_name(v, NameStyle::Short) == name
            })
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn eval(&self, a: &Assignment) -> Eval {
        let mut undetermined = false;
        for (i, c) in self.clauses.iter().enumerate() {
            let mut sat = false;
            let mut open = false;
            for &l in &c.lits {
                match a.lit_value(l) {
                    Some(true) => {
                        sat = true;
                        break;
                    }
                    Some(false) => {}
                    None => open = true,
                }
            }
            if !sat {
                if open {
                    undetermined = true;
                } else {
                    return Eval::Falsified(i);
                }
            }
        }
        if undetermined {
            Eval::Undetermined
        } else {
            Eval::Satisfied
        }
    }

    /// Builds an assignment from named values; every name must be a declared variable.
    pub fn assignment_from_keys<'a, I>(&self, values: I) -> Result<Assignment>
    where
        I: IntoIterator<Item = (&'a VarKey, bool)>,
    {
        let mut a = Assignment::unassigned(self.var_count());
        for (k, b) in values {
            let v = self
                .var(k)
                .ok_or_else(|| Error::UnknownVariable(format!("{k:?}")))?;
            a.set(v, b);
        }
        Ok(a)
    }

    /// Fills every h-variable from the pair values via the cycle recursion.
    /// Pair variables of each cycle must be assigned.
    pub fn extend_h(&self, a: &mut Assignment) -> Result<()> {
        for (ci, h) in self.subgraphs.iter().enumerate() {
            if !h.kind.is_cycle() {
                continue;
            }
            let k = h.vertices.len();
            let vx = |p: usize| h.vertices[p - 1];
            let x_val = |p: usize, q: usize| -> Result<bool> {
                let var = self
                    .pair_var(vx(p), vx(q))
                    .ok_or_else(|| Error::UnknownVariable(format!("pair of cycle {ci}")))?;
                a.get(var).ok_or_else(|| {
                    Error::UnknownVariable(format!(
                        "{} is unassigned",
                        self.var_name(var, NameStyle::Full)
                    ))
                })
            };
            let mut vals: BTreeMap<(usize, usize), bool> = BTreeMap::new();
            for x in 1..=2 {
                vals.insert((x, x + 1), false);
                vals.insert((x, x + 2), x_val(x, x + 2)?);
                for i in x + 3..=k {
                    let v = if x_val(i - 2, i)? {
                        vals[&(x, i - 2)]
                    } else {
                        !vals[&(x, i - 2)] && !vals[&(x, i - 1)]
                    };
                    vals.insert((x, i), v);
                }
            }
            for ((x, i), v) in vals {
                let key = VarKey::H(HVar {
                    cycle: ci,
                    anchor_pos: x,
                    target_pos: i,
                    anchor: vx(x),
                    target: vx(i),
                });
                if let Some(var) = self.var(&key) {
                    a.set(var, v);
                }
            }
        }
        Ok(())
    }

    /// DIMACS text; byte-identical repeated clauses are written once.
    pub fn export_dimacs(&self) -> String {
        self.dimacs_for(&self.distinct_clause_indices())
    }

    /// DIMACS text with every clause, duplicates included.
    pub fn export_dimacs_raw(&self) -> String {
        self.dimacs_for(&(0..self.clauses.len()).collect::<Vec<_>>())
    }

    fn dimacs_for(&self, keep: &[usize]) -> String {
        let mut out = String::new();
        for v in 0..self.vars.len() as u32 {
            let _ = writeln!(out, "c {} = {}", v + 1, self.var_name(v, NameStyle::Full));
        }
        let _ = writeln!(out, "p cnf {} {}", self.vars.len(), keep.len());
        for &i in keep {
            for l in &self.clauses[i].lits {
                let _ = write!(out, "{} ", l.dimacs());
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Literal with a symbolic variable, used while fragments are assembled.
pub type KeyLit = (VarKey, bool);

/// Clause list over symbolic variables, prior to numbering.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Fragment {
    pub clauses: Vec<(Vec<KeyLit>, String)>,
}

impl Fragment {
    fn push(&mut self, tag: impl Into<String>, lits: Vec<KeyLit>) {
        self.clauses.push((lits, tag.into()));
    }
}

fn x(u: Vertex, v: Vertex, positive: bool) -> KeyLit {
    (VarKey::pair(u, v), positive)
}

/// Clauses of a four-vertex pattern.
pub fn clauses_for(h: &ImportantSubgraph) -> Result<Fragment> {
    let mut f = Fragment::default();
    match h.kind {
        PatternKind::BoxSlash => {
            let (u, v) = h.pairs[0];
            f.push("equal", vec![x(u, v, true)]);
        }
        PatternKind::Square => {
            let (a, c) = h.pairs[0];
            let (b, d) = h.pairs[1];
            f.push("some-diagonal", vec![x(a, c, true), x(b, d, true)]);
        }
        PatternKind::TailTriangle => {
            let (p1, q1) = h.pairs[0];
            let (p2, q2) = h.pairs[1];
            f.push("at-least-one", vec![x(p1, q1, true), x(p2, q2, true)]);
            f.push("at-most-one", vec![x(p1, q1, false), x(p2, q2, false)]);
        }
        PatternKind::Pentagon | PatternKind::LongCycle(_) => {
            return Err(Error::InvalidPattern(format!(
                "{} needs the cycle encoding",
                h.kind
            )))
        }
    }
    Ok(f)
}

/// h-encoding of an induced cycle `v1..vk` (the stored vertex order).
///
/// Clause order: the three falsity units, the four base/end equivalences
/// as two clauses each, then the recursion for `x = 1` over `i = 4..=k`
/// and for `x = 2` over `i = 5..=k`, grouped as
/// `[a b | x=1] [a b | x=2] [c d | x=1] [e | x=1] [c d | x=2] [e | x=2]` with
///
/// * a: `¬X(i-2,i) ∨ ¬h(x,i) ∨ h(x,i-2)`
/// * b: `¬X(i-2,i) ∨ h(x,i) ∨ ¬h(x,i-2)`
/// * c: `X(i-2,i) ∨ ¬h(x,i) ∨ ¬h(x,i-2)`
/// * d: `X(i-2,i) ∨ ¬h(x,i) ∨ ¬h(x,i-1)`
/// * e: `X(i-2,i) ∨ h(x,i) ∨ h(x,i-2) ∨ h(x,i-1)`
pub fn cycle_clauses(h: &ImportantSubgraph, cycle_id: usize) -> Result<Fragment> {
    if !h.kind.is_cycle() || h.vertices.len() < 5 {
        return Err(Error::InvalidPattern(format!(
            "{} is not a cycle of length at least 5",
            h.kind
        )));
    }
    let k = h.vertices.len();
    let v = |p: usize| h.vertices[p - 1];
    let hv = |a: usize, t: usize, positive: bool| -> KeyLit {
        (
            VarKey::H(HVar {
                cycle: cycle_id,
                anchor_pos: a,
                target_pos: t,
                anchor: v(a),
                target: v(t),
            }),
            positive,
        )
    };
    let xv = |p: usize, q: usize, positive: bool| x(v(p), v(q), positive);
    let mut f = Fragment::default();
    f.push("U(1,2)", vec![hv(1, 2, false)]);
    f.push("U(2,3)", vec![hv(2, 3, false)]);
    f.push(format!("U(1,{k})"), vec![hv(1, k, false)]);
    for (a, t) in [(1, 3), (2, 4), (1, k - 1), (2, k)] {
        f.push(
            format!("E({a},{t})+"),
            vec![hv(a, t, true), xv(a, t, false)],
        );
        f.push(
            format!("E({a},{t})-"),
            vec![hv(a, t, false), xv(a, t, true)],
        );
    }
    let range = |x: usize| x + 3..=k;
    let ab = |f: &mut Fragment, x: usize| {
        for i in range(x) {
            f.push(
                format!("R({x},{i})a"),
                vec![xv(i - 2, i, false), hv(x, i, false), hv(x, i - 2, true)],
            );
            f.push(
                format!("R({x},{i})b"),
                vec![xv(i - 2, i, false), hv(x, i, true), hv(x, i - 2, false)],
            );
        }
    };
    let cd = |f: &mut Fragment, x: usize| {
        for i in range(x) {
            f.push(
                format!("R({x},{i})c"),
                vec![xv(i - 2, i, true), hv(x, i, false), hv(x, i - 2, false)],
            );
            f.push(
                format!("R({x},{i})d"),
                vec![xv(i - 2, i, true), hv(x, i, false), hv(x, i - 1, false)],
            );
        }
    };
    let e = |f: &mut Fragment, x: usize| {
        for i in range(x) {
            f.push(
                format!("R({x},{i})e"),
                vec![
                    xv(i - 2, i, true),
                    hv(x, i, true),
                    hv(x, i - 2, true),
                    hv(x, i - 1, true),
                ],
            );
        }
    };
    ab(&mut f, 1);
    ab(&mut f, 2);
    cd(&mut f, 1);
    e(&mut f, 1);
    cd(&mut f, 2);
    e(&mut f, 2);
    Ok(f)
}

/// Conjunction of all fragments. Cycle occurrences are numbered in list
/// order; the same pair in several subgraphs shares one variable.
pub fn build_phi(g: &CircleGraph, important: &[ImportantSubgraph]) -> Result<Formula> {
    let mut raw: Vec<(Vec<KeyLit>, Provenance)> = Vec::new();
    for (si, h) in important.iter().enumerate() {
        let frag = if h.kind.is_cycle() {
            cycle_clauses(h, si)?
        } else {
            clauses_for(h)?
        };
        for (lits, tag) in frag.clauses {
            raw.push((
                lits,
                Provenance {
                    subgraph: Some(si),
                    tag,
                },
            ));
        }
    }
    let mut keys: Vec<VarKey> = raw
        .iter()
        .flat_map(|(lits, _)| lits.iter().map(|(k, _)| k.clone()))
        .collect();
    keys.sort();
    keys.dedup();
    let index: HashMap<VarKey, u32> = keys.iter().cloned().zip(0..).collect();
    let mut clauses = Vec::with_capacity(raw.len());
    let mut provenance = Vec::with_capacity(raw.len());
    for (lits, p) in raw {
        clauses.push(Clause::new(
            lits.iter()
                .map(|(k, pos)| Lit {
                    var: index[k],
                    positive: *pos,
                })
                .collect(),
        ));
        provenance.push(p);
    }
    Ok(Formula {
        vars: keys,
        index,
        clauses,
        provenance,
        subgraphs: important.to_vec(),
        labels: g.labels().to_vec(),
    })
}

/// Pair values read off a proper 3-coloring (`coloring[v]` in `1..=3`);
/// h-variables stay unassigned.
pub fn caux_from_coloring(g: &CircleGraph, coloring: &[u8], phi: &Formula) -> Result<Assignment> {
    crate::solvers::coloring::check_coloring(g, coloring)?;
    let mut a = Assignment::unassigned(phi.var_count());
    for (v, key) in phi.vars.iter().enumerate() {
        if let VarKey::Pair(p, q) = key {
            a.set(v as u32, coloring[*p] == coloring[*q]);
        }
    }
    Ok(a)
}

/// Largest variable count [`parse_dimacs`] accepts.
pub const MAX_DIMACS_VARS: u32 = 1 << 22;

/// Strict DIMACS reader: comments, one `p cnf` header, 0-terminated clauses
/// that may span lines. Variables become [`VarKey::Plain`].
pub fn parse_dimacs(text: &str) -> Result<Formula> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = i + 1;
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(Error::Parse {
                    line: lineno,
                    message: "duplicate problem line".into(),
                });
            }
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() != 4 || t[0] != "p" || t[1] != "cnf" {
                return Err(Error::Parse {
                    line: lineno,
                    message: "expected `p cnf <vars> <clauses>`".into(),
                });
            }
            let vars = t[2].parse::<u32>().map_err(|e| Error::Parse {
                line: lineno,
                message: format!("variable count: {e}"),
            })?;
            let cls = t[3].parse::<usize>().map_err(|e| Error::Parse {
                line: lineno,
                message: format!("clause count: {e}"),
            })?;
            if vars > MAX_DIMACS_VARS {
                return Err(Error::Capacity {
                    what: "DIMACS variable count",
                    size: vars as usize,
                    limit: MAX_DIMACS_VARS as usize,
                });
            }
            header = Some((vars, cls));
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(Error::Parse {
                line: lineno,
                message: "clause before problem line".into(),
            });
        };
        for tok in line.split_whitespace() {
            let n: i64 = tok.parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("bad literal `{tok}`"),
            })?;
            if n == 0 {
                clauses.push(Clause::new(std::mem::take(&mut current)));
                continue;
            }
            let var = n.unsigned_abs();
            if var > vars as u64 {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("literal {n} exceeds declared {vars} variables"),
                });
            }
            current.push(Lit {
                var: (var - 1) as u32,
                positive: n > 0,
            });
        }
    }
    let Some((vars, count)) = header else {
        return Err(Error::Parse {
            line: 0,
            message: "missing problem line".into(),
        });
    };
    if !current.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "last clause is not 0-terminated".into(),
        });
    }
    if clauses.len() != count {
        return Err(Error::Parse {
            line: 0,
            message: format!("header declares {count} clauses, found {}", clauses.len()),
        });
    }
    Ok(Formula::plain(vars, clauses))
}
