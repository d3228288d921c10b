//! Search procedures over [`Formula`] and exact coloring oracles.
//!
//! Leaf accounting, shared by the backtracking solvers: a leaf is recorded
//! whenever an assignment step leaves some clause with every literal false,
//! and once more when a satisfying assignment is completed.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::formula::{Assignment, Formula, Lit};

pub mod chrono;
pub mod coloring;
pub mod dpll;
pub mod unger;

pub use chrono::solve_chrono;
pub use dpll::{solve_dpll, solve_dpll_with_budget};
pub use unger::{
    solve_unger, ConflictChoice, JumpChoice, TraceAction, TraceEvent, UngerConfig, UngerRun,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Sat(Assignment),
    Unsat,
    BudgetExhausted,
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Sat(_) => "sat",
            Outcome::Unsat => "unsat",
            Outcome::BudgetExhausted => "budget",
        }
    }

    pub fn is_sat(&self) -> bool {
        matches!(self, Outcome::Sat(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchStats {
    pub leaves: u64,
    pub jumps: u64,
    pub nodes: u64,
    pub elapsed: Duration,
    pub outcome: Outcome,
}

/// Resource limit for a run. Time is polled every few hundred nodes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    pub time: Option<Duration>,
    pub nodes: Option<u64>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn seconds(s: f64) -> Self {
        Budget {
            time: Some(Duration::from_secs_f64(s)),
            nodes: None,
        }
    }

    pub fn nodes(n: u64) -> Self {
        Budget {
            time: None,
            nodes: Some(n),
        }
    }
}

pub(crate) struct Clock {
    start: Instant,
    budget: Budget,
}

impl Clock {
    pub(crate) fn start(budget: Budget) -> Self {
        Clock {
            start: Instant::now(),
            budget,
        }
    }

    pub(crate) fn exhausted(&self, nodes: u64) -> bool {
        if let Some(limit) = self.budget.nodes {
            if nodes >= limit {
                return true;
            }
        }
        match self.budget.time {
            Some(t) if nodes.is_multiple_of(256) => self.start.elapsed() >= t,
            _ => false,
        }
    }

    pub(crate) fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }
}

/// Sequence in which a backtracking solver assigns variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableOrder {
    vars: Vec<u32>,
}

impl VariableOrder {
    /// Variable-table order: pairs lexicographically, then h-variables.
    pub fn table(phi: &Formula) -> Self {
        VariableOrder {
            vars: (0..phi.var_count() as u32).collect(),
        }
    }

    /// An explicit order covering every variable exactly once.
    pub fn new(phi: &Formula, vars: Vec<u32>) -> Result<Self> {
        Self::check(phi, &vars)?;
        if vars.len() != phi.var_count() {
            return Err(Error::InvalidOrder(format!(
                "order lists {} of {} variables",
                vars.len(),
                phi.var_count()
            )));
        }
        Ok(VariableOrder { vars })
    }

    /// A prefix of the order; variables it omits follow in table order.
    pub fn with_prefix(phi: &Formula, prefix: Vec<u32>) -> Result<Self> {
        Self::check(phi, &prefix)?;
        let mut seen = vec![false; phi.var_count()];
        for &v in &prefix {
            seen[v as usize] = true;
        }
        let mut vars = prefix;
        vars.extend((0..phi.var_count() as u32).filter(|&v| !seen[v as usize]));
        Ok(VariableOrder { vars })
    }

    /// Whitespace-separated variable names (either naming style); `#` comments.
    /// Unlisted variables are appended in table order.
    pub fn parse(phi: &Formula, text: &str) -> Result<Self> {
        let mut prefix = Vec::new();
        for line in text.lines() {
            let line = match line.find('#') {
                Some(i) => &line[..i],
                None => line,
            };
            for tok in line.split_whitespace() {
                prefix.push(phi.var_by_name(tok)?);
            }
        }
        Self::with_prefix(phi, prefix)
    }

    fn check(phi: &Formula, vars: &[u32]) -> Result<()> {
        if vars.is_empty() && phi.clause_count() > 0 {
            return Err(Error::InvalidOrder(
                "empty order for a non-empty formula".into(),
            ));
        }
        let mut seen = vec![false; phi.var_count()];
        for &v in vars {
            let slot = seen.get_mut(v as usize).ok_or_else(|| {
                Error::InvalidOrder(format!("variable index {v} is not in the formula"))
            })?;
            if *slot {
                return Err(Error::InvalidOrder(format!(
                    "{} listed twice",
                    phi.var_name(v, crate::formula::NameStyle::Full)
                )));
            }
            *slot = true;
        }
        Ok(())
    }

    pub fn vars(&self) -> &[u32] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }
}

/// Per-clause count of false literals under a changing partial assignment.
pub(crate) struct FalseCounter {
    occ: Vec<Vec<usize>>,
    len: Vec<usize>,
    count: Vec<usize>,
    falsified: std::collections::BTreeSet<usize>,
}

#[inline]
pub(crate) fn lit_index(l: Lit) -> usize {
    2 * l.var as usize + usize::from(!l.positive)
}

impl FalseCounter {
    pub(crate) fn new(phi: &Formula) -> Self {
        let mut occ = vec![Vec::new(); 2 * phi.var_count()];
        for (i, c) in phi.clauses().iter().enumerate() {
            for &l in &c.lits {
                occ[lit_index(l)].push(i);
            }
        }
        let len: Vec<usize> = phi.clauses().iter().map(|c| c.lits.len()).collect();
        let falsified = (0..len.len()).filter(|&i| len[i] == 0).collect();
        FalseCounter {
            occ,
            len,
            count: vec![0; phi.clause_count()],
            falsified,
        }
    }

    /// Records `var := value`: every literal of the opposite polarity turns false.
    pub(crate) fn assign(&mut self, var: u32, value: bool) {
        let falsified_lit = Lit {
            var,
            positive: !value,
        };
        for &c in &self.occ[lit_index(falsified_lit)] {
            self.count[c] += 1;
            if self.count[c] == self.len[c] {
                self.falsified.insert(c);
            }
        }
    }

    pub(crate) fn unassign(&mut self, var: u32, value: bool) {
        let falsified_lit = Lit {
            var,
            positive: !value,
        };
        for &c in &self.occ[lit_index(falsified_lit)] {
            if self.count[c] == self.len[c] {
                self.falsified.remove(&c);
            }
            self.count[c] -= 1;
        }
    }

    pub(crate) fn any(&self) -> bool {
        !self.falsified.is_empty()
    }

    pub(crate) fn first(&self) -> Option<usize> {
        self.falsified.first().copied()
    }

    pub(crate) fn last(&self) -> Option<usize> {
        self.falsified.last().copied()
    }
}
