use super::{Budget, Clock, FalseCounter, Outcome, SearchStats, VariableOrder};
use crate::formula::{Assignment, Eval, Formula};

/// Plain depth-first search over `order`, true branch first, no propagation.
pub fn solve_chrono(phi: &Formula, order: &VariableOrder, budget: Budget) -> SearchStats {
    let clock = Clock::start(budget);
    let vars = order.vars();
    let n = vars.len();
    let mut fc = FalseCounter::new(phi);
    let mut a = Assignment::unassigned(phi.var_count());
    // 0: nothing tried, 1: true tried, 2: both tried
    let mut tried = vec![0u8; n];
    let (mut leaves, mut nodes) = (0u64, 0u64);
    let finish = |outcome, leaves, nodes| SearchStats {
        leaves,
        jumps: 0,
        nodes,
        elapsed: clock.elapsed(),
        outcome,
    };
    if fc.any() {
        return finish(Outcome::Unsat, 1, 0);
    }
    let mut d = 0usize;
    loop {
        if d == n {
            leaves += 1;
            debug_assert_eq!(phi.eval(&a), Eval::Satisfied);
            return finish(Outcome::Sat(a), leaves, nodes);
        }
        if clock.exhausted(nodes) {
            return finish(Outcome::BudgetExhausted, leaves, nodes);
        }
        let v = vars[d];
        if let Some(old) = a.get(v) {
            fc.unassign(v, old);
            a.unset(v);
        }
        let value = match tried[d] {
            0 => true,
            1 => false,
            _ => {
                tried[d] = 0;
                if d == 0 {
                    return finish(Outcome::Unsat, leaves, nodes);
                }
                d -= 1;
                continue;
            }
        };
        tried[d] += 1;
        nodes += 1;
        a.set(v, value);
        fc.assign(v, value);
        if fc.any() {
            leaves += 1;
        } else {
            d += 1;
        }
    }
}
