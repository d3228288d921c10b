//! Benchmark harness: every instance of a corpus against each solver, one
//! CSV record per (instance, method).

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chordcolor::formula::{build_phi, Eval, Formula};
use chordcolor::generator::{corpus_files, InstanceFile};
use chordcolor::solvers::coloring::{reconstruct_coloring, validate_coloring};
use chordcolor::solvers::{
    solve_chrono, solve_dpll_with_budget, solve_unger, Budget, Outcome, SearchStats, UngerConfig,
    VariableOrder,
};
use chordcolor::subgraphs::{important_subgraphs, Filter, FilterVariant, DEFAULT_MAX_CYCLE};
use rayon::prelude::*;

use crate::CliError;

pub const CSV_HEADER: [&str; 9] = [
    "instance_id",
    "n",
    "m",
    "method",
    "outcome",
    "leaves",
    "jumps",
    "elapsed_ms",
    "coloring_valid",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Unger,
    Chrono,
    Dpll,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Unger => "unger",
            Method::Chrono => "chrono",
            Method::Dpll => "dpll",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unger" => Ok(Method::Unger),
            "chrono" => Ok(Method::Chrono),
            "dpll" => Ok(Method::Dpll),
            _ => Err(format!(
                "unknown method `{s}` (expected unger, chrono or dpll)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColoringValid {
    Yes,
    No,
    NotApplicable,
}

impl ColoringValid {
    fn as_str(self) -> &'static str {
        match self {
            ColoringValid::Yes => "yes",
            ColoringValid::No => "no",
            ColoringValid::NotApplicable => "n/a",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRecord {
    pub instance_id: String,
    pub n: usize,
    pub m: usize,
    pub method: Method,
    /// `sat`, `unsat` or `budget`.
    pub outcome: String,
    pub leaves: u64,
    pub jumps: u64,
    pub elapsed_ms: u64,
    pub coloring_valid: ColoringValid,
    /// Whether the instance file carries a witness coloring.
    pub has_witness: bool,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub methods: Vec<Method>,
    pub budget: Budget,
    pub variant: FilterVariant,
    /// Zero `elapsed_ms` so the CSV is byte-stable.
    pub no_time: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            methods: vec![Method::Unger, Method::Chrono, Method::Dpll],
            budget: Budget::seconds(10.0),
            variant: FilterVariant::ExtendedAbstract,
            no_time: false,
        }
    }
}

struct Loaded {
    id: String,
    file: InstanceFile,
    phi: Formula,
}

fn load(path: &Path, variant: FilterVariant) -> Result<Loaded, CliError> {
    let file = InstanceFile::read(path)?;
    let g = &file.graph;
    let d = g
        .diagram()
        .ok_or_else(|| CliError::Input(format!("{}: no diagram", path.display())))?;
    let imp = important_subgraphs(g, d, &Filter::new(variant), DEFAULT_MAX_CYCLE)?;
    let phi = build_phi(g, &imp.subgraphs)?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(Loaded { id, file, phi })
}

/// Runs one method on one formula.
pub fn run_method(phi: &Formula, method: Method, budget: Budget) -> Result<SearchStats, CliError> {
    let order = VariableOrder::table(phi);
    Ok(match method {
        Method::Unger => solve_unger(phi, &order, budget, &UngerConfig::default())?.stats,
        Method::Chrono => solve_chrono(phi, &order, budget),
        Method::Dpll => solve_dpll_with_budget(phi, budget),
    })
}

fn record(inst: &Loaded, method: Method, cfg: &BenchConfig) -> Result<BenchRecord, CliError> {
    let stats = run_method(&inst.phi, method, cfg.budget)?;
    let g = &inst.file.graph;
    let coloring_valid = match &stats.outcome {
        Outcome::Sat(a) => {
            if inst.phi.eval(a) != Eval::Satisfied {
                return Err(CliError::Input(format!(
                    "{}: {method} returned a non-model",
                    inst.id
                )));
            }
            match reconstruct_coloring(g, &inst.phi, a).coloring {
                Some(c) if validate_coloring(g, &c)? => ColoringValid::Yes,
                _ => ColoringValid::No,
            }
        }
        _ => ColoringValid::NotApplicable,
    };
    Ok(BenchRecord {
        instance_id: inst.id.clone(),
        n: g.vertex_count(),
        m: g.edge_count(),
        method,
        outcome: stats.outcome.label().to_string(),
        leaves: stats.leaves,
        jumps: stats.jumps,
        elapsed_ms: if cfg.no_time {
            0
        } else {
            stats.elapsed.as_millis() as u64
        },
        coloring_valid,
        has_witness: inst.file.witness.is_some(),
    })
}

/// Benchmarks every readable instance file. Unreadable files are skipped
/// with a warning. Records come back in (instance_id, method) order.
pub fn run_bench(files: &[PathBuf], cfg: &BenchConfig) -> Vec<BenchRecord> {
    let loaded: Vec<Loaded> = files
        .par_iter()
        .filter_map(|p| match load(p, cfg.variant) {
            Ok(l) => Some(l),
            Err(e) => {
                log::warn!("skipping {}: {e}", p.display());
                None
            }
        })
        .collect();
    let tasks: Vec<(&Loaded, Method)> = loaded
        .iter()
        .flat_map(|l| cfg.methods.iter().map(move |&m| (l, m)))
        .collect();
    let mut records: Vec<BenchRecord> = tasks
        .par_iter()
        .filter_map(|&(l, m)| match record(l, m, cfg) {
            Ok(r) => Some(r),
            Err(e) => {
                log::warn!("skipping {} / {m}: {e}", l.id);
                None
            }
        })
        .collect();
    records.sort_by(|a, b| (&a.instance_id, a.method).cmp(&(&b.instance_id, b.method)));
    records
}

pub fn run_bench_dir(dir: &Path, cfg: &BenchConfig) -> Result<Vec<BenchRecord>, CliError> {
    Ok(run_bench(&corpus_files(dir)?, cfg))
}

pub fn write_csv<W: Write>(out: W, records: &[BenchRecord]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.instance_id.clone(),
            r.n.to_string(),
            r.m.to_string(),
            r.method.to_string(),
            r.outcome.clone(),
            r.leaves.to_string(),
            r.jumps.to_string(),
            r.elapsed_ms.to_string(),
            r.coloring_valid.as_str().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a bench CSV back. The header must match [`CSV_HEADER`] exactly.
pub fn read_csv(text: &str) -> Result<Vec<BenchRecord>, CliError> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rd.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(CliError::Input(format!("unexpected CSV header {header:?}")));
    }
    let mut out = Vec::new();
    for (i, row) in rd.records().enumerate() {
        let row = row?;
        let bad = |what: &str| CliError::Input(format!("row {}: bad {what}", i + 2));
        let num = |k: usize, what: &str| row[k].parse::<u64>().map_err(|_| bad(what));
        let coloring_valid = match &row[8] {
            "yes" => ColoringValid::Yes,
            "no" => ColoringValid::No,
            "n/a" => ColoringValid::NotApplicable,
            _ => return Err(bad("coloring_valid")),
        };
        let outcome = row[4].to_string();
        if !matches!(outcome.as_str(), "sat" | "unsat" | "budget") {
            return Err(bad("outcome"));
        }
        out.push(BenchRecord {
            instance_id: row[0].to_string(),
            n: num(1, "n")? as usize,
            m: num(2, "m")? as usize,
            method: row[3].parse().map_err(|_| bad("method"))?,
            outcome,
            leaves: num(5, "leaves")?,
            jumps: num(6, "jumps")?,
            elapsed_ms: num(7, "elapsed_ms")?,
            coloring_valid,
            has_witness: true,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MethodSummary {
    pub method: Method,
    pub runs: usize,
    pub sat: usize,
    pub unsat: usize,
    pub budget: usize,
    /// Unsat verdicts on instances that carry a witness coloring.
    pub false_negatives: usize,
    pub valid_colorings: usize,
    pub mean_leaves: f64,
    pub max_leaves: u64,
}

impl MethodSummary {
    pub fn solve_rate(&self) -> f64 {
        ratio(self.sat, self.runs)
    }

    pub fn false_negative_rate(&self) -> f64 {
        ratio(self.false_negatives, self.runs)
    }
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

pub fn summarize(records: &[BenchRecord]) -> Vec<MethodSummary> {
    let mut methods: Vec<Method> = records.iter().map(|r| r.method).collect();
    methods.sort();
    methods.dedup();
    methods
        .into_iter()
        .map(|m| {
            let rs: Vec<&BenchRecord> = records.iter().filter(|r| r.method == m).collect();
            let count = |o: &str| rs.iter().filter(|r| r.outcome == o).count();
            let leaves: Vec<u64> = rs.iter().map(|r| r.leaves).collect();
            MethodSummary {
                method: m,
                runs: rs.len(),
                sat: count("sat"),
                unsat: count("unsat"),
                budget: count("budget"),
                false_negatives: rs
                    .iter()
                    .filter(|r| r.outcome == "unsat" && r.has_witness)
                    .count(),
                valid_colorings: rs
                    .iter()
                    .filter(|r| r.coloring_valid == ColoringValid::Yes)
                    .count(),
                mean_leaves: if leaves.is_empty() {
                    0.0
                } else {
                    leaves.iter().sum::<u64>() as f64 / leaves.len() as f64
                },
                max_leaves: leaves.iter().copied().max().unwrap_or(0),
            }
        })
        .collect()
}

pub fn render_summary(s: &[MethodSummary]) -> String {
    let mut out = String::from(
        "method  runs  sat  unsat  budget  solve_rate  false_neg_rate  valid_colorings  mean_leaves\n",
    );
    for m in s {
        out.push_str(&format!(
            "{:<6}  {:>4}  {:>3}  {:>5}  {:>6}  {:>10.3}  {:>14.3}  {:>15}  {:>11.1}\n",
            m.method.name(),
            m.runs,
            m.sat,
            m.unsat,
            m.budget,
            m.solve_rate(),
            m.false_negative_rate(),
            m.valid_colorings,
            m.mean_leaves
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, method: Method, outcome: &str, leaves: u64) -> BenchRecord {
        BenchRecord {
            instance_id: id.into(),
            n: 5,
            m: 5,
            method,
            outcome: outcome.into(),
            leaves,
            jumps: 0,
            elapsed_ms: 0,
            coloring_valid: if outcome == "sat" {
                ColoringValid::Yes
            } else {
                ColoringValid::NotApplicable
            },
            has_witness: true,
        }
    }

    #[test]
    fn csv_round_trip() {
        let rs = vec![
            rec("a", Method::Unger, "unsat", 3),
            rec("a", Method::Dpll, "sat", 1),
        ];
        let mut buf = Vec::new();
        write_csv(&mut buf, &rs).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(
            "instance_id,n,m,method,outcome,leaves,jumps,elapsed_ms,coloring_valid\n"
        ));
        assert_eq!(read_csv(&text).unwrap(), rs);
    }

    #[test]
    fn empty_csv_is_header_only() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "instance_id,n,m,method,outcome,leaves,jumps,elapsed_ms,coloring_valid\n"
        );
    }

    #[test]
    fn summary_counts() {
        let rs = vec![
            rec("a", Method::Unger, "unsat", 3),
            rec("b", Method::Unger, "sat", 5),
        ];
        let s = summarize(&rs);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].false_negatives, 1);
        assert_eq!(s[0].solve_rate(), 0.5);
        assert_eq!(s[0].mean_leaves, 4.0);
    }

    #[test]
    fn rejects_foreign_header() {
        assert!(read_csv("a,b\n1,2\n").is_err());
    }
}
