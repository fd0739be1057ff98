//! Reference semantics of finite-trace formulas, by direct induction on
//! positions. LTLf formulas are evaluated at position 0, PPLTL formulas
//! at the last position of the trace.

use crate::error::Error;
use crate::formula::{Dialect, FiniteFormula, Valuation};

fn holds(phi: &FiniteFormula, trace: &[Valuation], i: usize) -> bool {
    use FiniteFormula::*;
    let n = trace.len();
    match phi {
        Atom(a) => trace[i].contains(a),
        True => true,
        False => false,
        Not(p) => !holds(p, trace, i),
        And(p, q) => holds(p, trace, i) && holds(q, trace, i),
        Or(p, q) => holds(p, trace, i) || holds(q, trace, i),
        Implies(p, q) => !holds(p, trace, i) || holds(q, trace, i),
        Iff(p, q) => holds(p, trace, i) == holds(q, trace, i),
        Next(p) => i + 1 < n && holds(p, trace, i + 1),
        WeakNext(p) => i + 1 >= n || holds(p, trace, i + 1),
        Until(p, q) => (i..n).any(|k| {
            holds(q, trace, k) && (i..k).all(|j| holds(p, trace, j))
        }),
        Eventually(p) => (i..n).any(|k| holds(p, trace, k)),
        Always(p) => (i..n).all(|k| holds(p, trace, k)),
        Last => i + 1 == n,
        Yesterday(p) => i > 0 && holds(p, trace, i - 1),
        Since(p, q) => (0..=i).any(|k| {
            holds(q, trace, k) && (k + 1..=i).all(|j| holds(p, trace, j))
        }),
        Once(p) => (0..=i).any(|k| holds(p, trace, k)),
        Historically(p) => (0..=i).all(|k| holds(p, trace, k)),
        First => i == 0,
    }
}

/// Evaluate a finite-trace formula on a non-empty finite trace.
pub fn eval_finite(
    phi: &FiniteFormula,
    dialect: Dialect,
    trace: &[Valuation],
) -> Result<bool, Error> {
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let pos = match dialect {
        Dialect::Ltlf => 0,
        Dialect::Ppltl => trace.len() - 1,
    };
    Ok(holds(phi, trace, pos))
}
