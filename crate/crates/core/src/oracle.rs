//! Brute-force reference: every constraint re-evaluated on every row of its
//! domain. Slow on purpose; the engine is tested against it.

use std::collections::BTreeSet;

use crate::engine::{check_domain_row, ConstraintViolation, Outcome, Verdict, Violation};
use crate::store::{Database, RowOp};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    /// Sorted by (constraint, witness).
    pub violations: Vec<ConstraintViolation>,
    /// `|D|` summed over constraints.
    pub rows_scanned: u64,
}

impl OracleReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn full_check(db: &Database) -> OracleReport {
    let schema = db.schema();
    let mut violations = Vec::new();
    let mut rows_scanned = 0;
    for c in schema.constraints() {
        for x in db.rows(c.domain) {
            rows_scanned += 1;
            violations.extend(check_domain_row(db, c, x));
        }
    }
    OracleReport {
        violations,
        rows_scanned,
    }
}

/// Applies `op` to a copy of `db`; rejects iff the copy shows a violation
/// that `db` did not already have. `db` changes only on acceptance.
pub fn oracle_apply(db: &mut Database, op: &RowOp) -> Verdict {
    let start = db.rows_inspected();
    let pre: BTreeSet<_> = full_check(db)
        .violations
        .into_iter()
        .map(|v| (v.constraint, v.witness))
        .collect();
    let mut copy = db.clone();
    let applied = match copy.apply(op) {
        Ok(applied) => applied,
        Err(e) => return Verdict::store_error(e, copy.rows_inspected() - start),
    };
    let fresh: Vec<Violation> = full_check(&copy)
        .violations
        .into_iter()
        .filter(|v| !pre.contains(&(v.constraint.clone(), v.witness)))
        .map(Violation::Constraint)
        .collect();
    let rows_inspected = copy.rows_inspected() - start;
    if fresh.is_empty() {
        *db = copy;
        Verdict {
            outcome: Outcome::Applied,
            violations: Vec::new(),
            inserted: applied.inserted,
            rows_inspected,
        }
    } else {
        Verdict {
            outcome: Outcome::Rejected,
            violations: fresh,
            inserted: None,
            rows_inspected,
        }
    }
}
