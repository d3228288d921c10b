//! Jump-based backtracking.
//!
//! Variables are assigned in order, true first. When an assignment leaves a
//! clause with all literals false, the current variable is flipped. If some
//! clause is still all-false, the search jumps to a variable of that clause
//! which lies on the current root path and is still true (so its false
//! branch is untried): that variable is set to false in place, every other
//! value is kept, and the clauses are re-checked. A remaining conflict is
//! handled by another jump; otherwise the interrupted variable is retried
//! from true. When no clause variable qualifies, the formula is reported
//! unsatisfiable, which need not be correct.
//!
//! The original condition for a jump target asks that flipping it makes a
//! literal of the clause true and that the corresponding child edge does not
//! yet exist. Every variable of an all-false clause meets the first part, and
//! with true tried first the second part means "currently true".

use std::fmt::Write as _;

use super::{Budget, Clock, FalseCounter, Outcome, SearchStats, VariableOrder};
use crate::error::{Error, Result};
use crate::formula::{Assignment, Formula, Lit, NameStyle};

/// Which all-false clause drives an event when several exist.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ConflictChoice {
    /// Lowest clause index.
    #[default]
    First,
    /// Highest clause index.
    Last,
}

/// Which qualifying variable a jump targets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum JumpChoice {
    /// Closest to the conflict on the root path.
    #[default]
    Deepest,
    /// Closest to the root.
    Shallowest,
    /// Targets consumed one per jump; each must qualify when used. Once the
    /// script runs out, `Deepest` applies.
    Scripted(Vec<u32>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UngerConfig {
    pub conflict: ConflictChoice,
    pub jump: JumpChoice,
    pub trace: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceAction {
    /// The variable just assigned true is set to false.
    Flip(u32),
    /// An ancestor is set to false.
    Jump(u32),
    ReportUnsat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEvent {
    /// 1-based event number.
    pub index: usize,
    /// Assignment steps taken before the event.
    pub node: u64,
    pub clause: usize,
    pub action: TraceAction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UngerRun {
    pub stats: SearchStats,
    pub trace: Vec<TraceEvent>,
}

struct State<'a> {
    phi: &'a Formula,
    fc: FalseCounter,
    a: Assignment,
    nodes: u64,
}

impl State<'_> {
    fn set(&mut self, v: u32, value: bool) {
        if let Some(old) = self.a.get(v) {
            self.fc.unassign(v, old);
        }
        self.a.set(v, value);
        self.fc.assign(v, value);
        self.nodes += 1;
    }

    fn conflict(&self, choice: ConflictChoice) -> Option<usize> {
        match choice {
            ConflictChoice::First => self.fc.first(),
            ConflictChoice::Last => self.fc.last(),
        }
    }
}

pub fn solve_unger(
    phi: &Formula,
    order: &VariableOrder,
    budget: Budget,
    config: &UngerConfig,
) -> Result<UngerRun> {
    let clock = Clock::start(budget);
    let vars = order.vars();
    let n = vars.len();
    let mut pos = vec![usize::MAX; phi.var_count()];
    for (i, &v) in vars.iter().enumerate() {
        pos[v as usize] = i;
    }
    let mut st = State {
        phi,
        fc: FalseCounter::new(phi),
        a: Assignment::unassigned(phi.var_count()),
        nodes: 0,
    };
    let mut trace = Vec::new();
    let (mut leaves, mut jumps) = (0u64, 0u64);
    let mut script_at = 0usize;

    let record = |trace: &mut Vec<TraceEvent>, node: u64, clause: usize, action| {
        if config.trace {
            trace.push(TraceEvent {
                index: trace.len() + 1,
                node,
                clause,
                action,
            });
        }
    };

    macro_rules! finish {
        ($outcome:expr) => {
            return Ok(UngerRun {
                stats: SearchStats {
                    leaves,
                    jumps,
                    nodes: st.nodes,
                    elapsed: clock.elapsed(),
                    outcome: $outcome,
                },
                trace,
            })
        };
    }

    if let Some(k) = st.conflict(config.conflict) {
        leaves += 1;
        record(&mut trace, 0, k, TraceAction::ReportUnsat);
        finish!(Outcome::Unsat);
    }

    let mut d = 0usize;
    'advance: loop {
        if d == n {
            leaves += 1;
            let a = st.a.clone();
            debug_assert_eq!(st.phi.eval(&a), crate::formula::Eval::Satisfied);
            finish!(Outcome::Sat(a));
        }
        if clock.exhausted(st.nodes) {
            finish!(Outcome::BudgetExhausted);
        }
        let c = vars[d];
        st.set(c, true);
        let Some(k) = st.conflict(config.conflict) else {
            d += 1;
            continue 'advance;
        };
        leaves += 1;
        record(&mut trace, st.nodes, k, TraceAction::Flip(c));
        st.set(c, false);
        loop {
            let Some(k) = st.conflict(config.conflict) else {
                d += 1;
                continue 'advance;
            };
            if clock.exhausted(st.nodes) {
                finish!(Outcome::BudgetExhausted);
            }
            leaves += 1;
            let mut eligible: Vec<u32> = phi
                .clause(k)
                .lits
                .iter()
                .map(|l| l.var)
                .filter(|&v| pos[v as usize] <= d && st.a.get(v) == Some(true))
                .collect();
            eligible.sort_by_key(|&v| pos[v as usize]);
            eligible.dedup();
            if eligible.is_empty() {
                record(&mut trace, st.nodes, k, TraceAction::ReportUnsat);
                finish!(Outcome::Unsat);
            }
            let y = match &config.jump {
                JumpChoice::Scripted(script) if script_at < script.len() => {
                    let want = script[script_at];
                    script_at += 1;
                    if !eligible.contains(&want) {
                        return Err(Error::ScriptViolation(format!(
                            "jump {} targets {}, which does not qualify for clause {}",
                            script_at,
                            phi.var_name(want, NameStyle::Full),
                            phi.render_clause(phi.clause(k), NameStyle::Full)
                        )));
                    }
                    want
                }
                JumpChoice::Shallowest => eligible[0],
                _ => *eligible.last().expect("non-empty"),
            };
            record(&mut trace, st.nodes, k, TraceAction::Jump(y));
            jumps += 1;
            st.set(y, false);
            if st.fc.any() {
                continue;
            }
            st.set(c, true);
            let Some(k) = st.conflict(config.conflict) else {
                d += 1;
                continue 'advance;
            };
            leaves += 1;
            record(&mut trace, st.nodes, k, TraceAction::Flip(c));
            st.set(c, false);
        }
    }
}

/// One line per event: `(<k>) | <clause> | <target or n.a.>`.
pub fn render_trace(phi: &Formula, trace: &[TraceEvent]) -> String {
    let mut out = String::new();
    for e in trace {
        let target = match e.action {
            TraceAction::Flip(v) | TraceAction::Jump(v) => phi.var_name(v, NameStyle::Short),
            TraceAction::ReportUnsat => "n.a.".to_string(),
        };
        let _ = writeln!(
            out,
            "({}) | {} | {}",
            e.index,
            phi.render_clause(phi.clause(e.clause), NameStyle::Short),
            target
        );
    }
    out
}

/// A trace line read back: event number, clause literals (sorted) and target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceLine {
    pub index: usize,
    pub lits: Vec<Lit>,
    pub target: Option<u32>,
}

/// Parses a line in the [`render_trace`] format against `phi`'s variable names.
pub fn parse_trace_line(phi: &Formula, line: &str) -> Result<TraceLine> {
    let bad = |m: &str| Error::Parse {
        line: 0,
        message: format!("{m}: `{line}`"),
    };
    let parts: Vec<&str> = line.split('|').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(bad("expected three `|`-separated fields"));
    }
    let index = parts[0]
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| bad("bad event number"))?;
    let mut lits = Vec::new();
    for tok in parts[1].split('∨') {
        let tok = tok.trim();
        let (positive, name) = match tok.strip_prefix('¬') {
            Some(rest) => (false, rest.trim()),
            None => (true, tok),
        };
        lits.push(Lit {
            var: phi.var_by_name(name)?,
            positive,
        });
    }
    lits.sort_unstable();
    let target = match parts[2] {
        "n.a." => None,
        name => Some(phi.var_by_name(name)?),
    };
    Ok(TraceLine {
        index,
        lits,
        target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Clause;

    fn unit() -> Formula {
        Formula::plain(1, vec![Clause::new(vec![Lit::pos(0)])])
    }

    #[test]
    fn unit_clause_sat_without_jumps() {
        let phi = unit();
        let r = solve_unger(
            &phi,
            &VariableOrder::table(&phi),
            Budget::unlimited(),
            &UngerConfig::default(),
        )
        .unwrap();
        assert!(r.stats.outcome.is_sat());
        assert_eq!(r.stats.jumps, 0);
        assert_eq!(r.stats.leaves, 1);
    }

    #[test]
    fn contradiction_is_unsat() {
        let phi = Formula::plain(
            1,
            vec![
                Clause::new(vec![Lit::pos(0)]),
                Clause::new(vec![Lit::neg(0)]),
            ],
        );
        let cfg = UngerConfig {
            trace: true,
            ..Default::default()
        };
        let r = solve_unger(&phi, &VariableOrder::table(&phi), Budget::unlimited(), &cfg).unwrap();
        assert_eq!(r.stats.outcome, Outcome::Unsat);
        assert_eq!(r.trace.len(), 2);
        assert_eq!(r.trace[0].action, TraceAction::Flip(0));
        assert_eq!(r.trace[1].action, TraceAction::ReportUnsat);
    }

    #[test]
    fn jump_reaches_a_solution() {
        // x1 true first; x2 then conflicts both ways until x1 is dropped
        let phi = Formula::plain(
            2,
            vec![
                Clause::new(vec![Lit::neg(0), Lit::pos(1)]),
                Clause::new(vec![Lit::neg(0), Lit::neg(1)]),
            ],
        );
        let cfg = UngerConfig {
            trace: true,
            ..Default::default()
        };
        let r = solve_unger(&phi, &VariableOrder::table(&phi), Budget::unlimited(), &cfg).unwrap();
        assert!(r.stats.outcome.is_sat());
        assert_eq!(r.stats.jumps, 1);
        assert_eq!(r.trace[1].action, TraceAction::Jump(0));
    }

    #[test]
    fn script_violation_is_reported() {
        let phi = Formula::plain(
            2,
            vec![
                Clause::new(vec![Lit::neg(0), Lit::pos(1)]),
                Clause::new(vec![Lit::neg(0), Lit::neg(1)]),
            ],
        );
        let cfg = UngerConfig {
            jump: JumpChoice::Scripted(vec![1]),
            ..Default::default()
        };
        assert!(matches!(
            solve_unger(&phi, &VariableOrder::table(&phi), Budget::unlimited(), &cfg),
            Err(Error::ScriptViolation(_))
        ));
    }

    #[test]
    fn trace_line_round_trip() {
        let phi = Formula::plain(2, vec![Clause::new(vec![Lit::neg(0), Lit::pos(1)])]);
        let ev = TraceEvent {
            index: 3,
            node: 0,
            clause: 0,
            action: TraceAction::Jump(0),
        };
        let text = render_trace(&phi, &[ev]);
        assert_eq!(text, "(3) | ¬x1 ∨ x2 | x1\n");
        let back = parse_trace_line(&phi, text.trim_end()).unwrap();
        assert_eq!(back.index, 3);
        assert_eq!(back.target, Some(0));
        assert_eq!(back.lits, vec![Lit::neg(0), Lit::pos(1)]);
    }
}
