use super::{lit_index, Budget, Clock, Outcome, SearchStats};
use crate::formula::{Assignment, Formula, Lit};

/// Complete search with two-watched-literal unit propagation. Decisions take
/// the lowest unassigned variable, true first; backtracking is chronological.
pub fn solve_dpll(phi: &Formula) -> SearchStats {
    solve_dpll_with_budget(phi, Budget::unlimited())
}

pub fn solve_dpll_with_budget(phi: &Formula, budget: Budget) -> SearchStats {
    let clock = Clock::start(budget);
    let mut s = Dpll::new(phi);
    let outcome = s.run(&clock);
    SearchStats {
        leaves: s.leaves,
        jumps: 0,
        nodes: s.nodes,
        elapsed: clock.elapsed(),
        outcome,
    }
}

struct Dpll {
    nvars: usize,
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    value: Vec<Option<bool>>,
    trail: Vec<Lit>,
    /// Trail position of each decision and whether its other branch is in use.
    decisions: Vec<(usize, bool)>,
    qhead: usize,
    units: Vec<Lit>,
    empty: bool,
    leaves: u64,
    nodes: u64,
}

impl Dpll {
    fn new(phi: &Formula) -> Self {
        let nvars = phi.var_count();
        let mut watches = vec![Vec::new(); 2 * nvars];
        let mut clauses = Vec::new();
        let mut units = Vec::new();
        let mut empty = false;
        for c in phi.clauses() {
            match c.lits.len() {
                0 => empty = true,
                1 => units.push(c.lits[0]),
                _ => {
                    let id = clauses.len();
                    watches[lit_index(c.lits[0])].push(id);
                    watches[lit_index(c.lits[1])].push(id);
                    clauses.push(c.lits.clone());
                }
            }
        }
        Dpll {
            nvars,
            clauses,
            watches,
            value: vec![None; nvars],
            trail: Vec::new(),
            decisions: Vec::new(),
            qhead: 0,
            units,
            empty,
            leaves: 0,
            nodes: 0,
        }
    }

    #[inline]
    fn lit_value(&self, l: Lit) -> Option<bool> {
        self.value[l.var as usize].map(|v| v == l.positive)
    }

    fn enqueue(&mut self, l: Lit) -> bool {
        match self.lit_value(l) {
            Some(v) => v,
            None => {
                self.value[l.var as usize] = Some(l.positive);
                self.trail.push(l);
                true
            }
        }
    }

    /// Returns false on conflict.
    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let falsified = self.trail[self.qhead].negated();
            self.qhead += 1;
            let fi = lit_index(falsified);
            let mut ws = std::mem::take(&mut self.watches[fi]);
            let mut i = 0;
            let mut ok = true;
            while i < ws.len() {
                let cid = ws[i];
                let c = &mut self.clauses[cid];
                if c[0] == falsified {
                    c.swap(0, 1);
                }
                let other = c[0];
                if self.value[other.var as usize].map(|v| v == other.positive) == Some(true) {
                    i += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..c.len() {
                    let l = c[k];
                    if self.value[l.var as usize].map(|v| v == l.positive) != Some(false) {
                        c.swap(1, k);
                        self.watches[lit_index(l)].push(cid);
                        ws.swap_remove(i);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                if !self.enqueue(other) {
                    ok = false;
                    break;
                }
                i += 1;
            }
            self.watches[fi].extend(ws);
            if !ok {
                return false;
            }
        }
        true
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let l = self.trail.pop().expect("trail longer than target");
            self.value[l.var as usize] = None;
        }
        self.qhead = len;
    }

    /// Flips the most recent decision whose second branch is untried.
    fn backtrack(&mut self) -> bool {
        while let Some((at, flipped)) = self.decisions.pop() {
            let l = self.trail[at];
            self.undo_to(at);
            if !flipped {
                self.decisions.push((at, true));
                self.nodes += 1;
                self.enqueue(l.negated());
                return true;
            }
        }
        false
    }

    fn run(&mut self, clock: &Clock) -> Outcome {
        if self.empty {
            self.leaves = 1;
            return Outcome::Unsat;
        }
        for l in std::mem::take(&mut self.units) {
            if !self.enqueue(l) {
                self.leaves = 1;
                return Outcome::Unsat;
            }
        }
        let mut next_var = 0usize;
        loop {
            if !self.propagate() {
                self.leaves += 1;
                if !self.backtrack() {
                    return Outcome::Unsat;
                }
                next_var = 0;
                continue;
            }
            if clock.exhausted(self.nodes) {
                return Outcome::BudgetExhausted;
            }
            while next_var < self.nvars && self.value[next_var].is_some() {
                next_var += 1;
            }
            if next_var == self.nvars {
                self.leaves += 1;
                let a = Assignment::from_values(self.value.clone());
                return Outcome::Sat(a);
            }
            self.decisions.push((self.trail.len(), false));
            self.nodes += 1;
            self.enqueue(Lit::pos(next_var as u32));
        }
    }
}
