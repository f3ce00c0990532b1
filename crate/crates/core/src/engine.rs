//! Incremental enforcement of diagram constraints.
//!
//! A mutation is staged against the store, checked in the post-state and
//! undone on rejection. Only rows whose chain values can have changed are
//! examined: the new row itself for inserts into a constraint domain, the
//! updated row for changes of an innermost function, and the reverse-index
//! preimage of the updated row for changes further out in a chain.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value as Json};

use crate::dsl::{Action, BindingValue, Mutation};
use crate::model::{
    ChainSpec, ConstraintKind, DiagramConstraint, FunctionId, RowId, Schema, SetId, Side, Value,
};
use crate::store::{Bindings, Database, RowOp, StoreError};

/// One chain position of one constraint, planted on `(dom(fᵢ), fᵢ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Occurrence {
    /// Index into [`Schema::constraints`].
    pub constraint: usize,
    pub side: Side,
    /// 1-based, outermost first.
    pub position: usize,
}

/// Static placement of checks: every chain position of every constraint,
/// keyed by the function's domain and the function.
pub fn dispatch(schema: &Schema) -> BTreeMap<(SetId, FunctionId), Vec<Occurrence>> {
    let mut map: BTreeMap<(SetId, FunctionId), Vec<Occurrence>> = BTreeMap::new();
    for (index, c) in schema.constraints().iter().enumerate() {
        for side in [Side::Left, Side::Right] {
            for (position, f) in c.chain(side).positions() {
                map.entry((schema.function(f).domain, f))
                    .or_default()
                    .push(Occurrence {
                        constraint: index,
                        side,
                        position,
                    });
            }
        }
    }
    map
}

/// `f₁ ∘ … ∘ fₙ (x)`, or `None` as soon as a link is null.
pub fn eval_chain(db: &Database, chain: &ChainSpec, x: RowId) -> Option<Value> {
    let start = db.lookup(x, chain.innermost());
    eval_prefix(db, chain, chain.len(), start)
}

/// `f₁ ∘ … ∘ fᵢ₋₁ (start)`; position 1 returns `start` unchanged.
pub fn eval_prefix(
    db: &Database,
    chain: &ChainSpec,
    position: usize,
    start: Option<Value>,
) -> Option<Value> {
    let mut value = start;
    for j in (1..position).rev() {
        let row = value?.as_row()?;
        value = db.lookup(row, chain.at(j));
    }
    value
}

/// `{ x ∈ D : fᵢ₊₁ ∘ … ∘ fₙ (x) = r }`, ascending by `x`.
pub fn affected_rows(db: &Database, chain: &ChainSpec, position: usize, r: RowId) -> Vec<RowId> {
    let mut frontier = vec![r];
    for j in position + 1..=chain.len() {
        let f = chain.at(j);
        let mut next = BTreeSet::new();
        for row in &frontier {
            next.extend(db.inverse(f, *row));
        }
        frontier = next.into_iter().collect();
        if frontier.is_empty() {
            break;
        }
    }
    frontier
}

/// Row-level check of `x ∈ D` in the current state of `db`.
pub fn check_domain_row(
    db: &Database,
    constraint: &DiagramConstraint,
    x: RowId,
) -> Option<ConstraintViolation> {
    let left = eval_chain(db, &constraint.left, x)?;
    let right = eval_chain(db, &constraint.right, x)?;
    constraint
        .kind
        .violated_by(&left, &right)
        .then(|| ConstraintViolation::new(db, constraint, x, left, right, None))
}

/// Check for `fᵢ(r) := new_value` at a position below the top of its chain.
/// `db` must already hold the post-update state.
pub fn check_link_update(
    db: &Database,
    constraint: &DiagramConstraint,
    occurrence: Occurrence,
    r: RowId,
    new_value: Option<Value>,
) -> Vec<ConstraintViolation> {
    let chain = constraint.chain(occurrence.side);
    let other = constraint.chain(occurrence.side.other());
    let Some(head) = eval_prefix(db, chain, occurrence.position, new_value) else {
        return Vec::new();
    };
    let changed = ChangedLink {
        function: chain.at(occurrence.position),
        row: r,
    };
    let mut out = Vec::new();
    for x in affected_rows(db, chain, occurrence.position, r) {
        let Some(value) = eval_chain(db, other, x) else {
            continue;
        };
        let (left, right) = match occurrence.side {
            Side::Left => (head.clone(), value),
            Side::Right => (value, head.clone()),
        };
        if constraint.kind.violated_by(&left, &right) {
            out.push(ConstraintViolation::new(
                db,
                constraint,
                x,
                left,
                right,
                Some(changed),
            ));
        }
    }
    out
}

/// The link update that exposed a violation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChangedLink {
    pub function: FunctionId,
    pub row: RowId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintViolation {
    pub constraint: String,
    pub kind: ConstraintKind,
    pub witness: RowId,
    /// Composed values; both are non-null by construction.
    pub left: Value,
    pub right: Value,
    pub changed: Option<ChangedLink>,
    pub message: String,
}

impl ConstraintViolation {
    fn new(
        db: &Database,
        c: &DiagramConstraint,
        witness: RowId,
        left: Value,
        right: Value,
        changed: Option<ChangedLink>,
    ) -> Self {
        let schema = db.schema();
        let lv = db.display_value(Some(&left));
        let rv = db.display_value(Some(&right));
        let label = format!(
            "{} ({})",
            schema.row_label(witness),
            db.display_value(Some(&Value::Row(witness)))
        );
        let body = match &c.message {
            Some(template) => template
                .replace("{left}", &lv)
                .replace("{right}", &rv)
                .replace("{witness}", &label),
            None => {
                let relation = match c.kind {
                    ConstraintKind::Commutative => "must be equal to",
                    ConstraintKind::AntiCommutative => "must never be equal to",
                };
                format!(
                    "{label}: {} = {lv} {relation} {} = {rv}",
                    schema.chain_text(&c.left),
                    schema.chain_text(&c.right)
                )
            }
        };
        let message = match changed {
            Some(link) => format!(
                "cannot change {}.{}: {body}",
                schema.row_label(link.row),
                schema.function(link.function).name
            ),
            None => body,
        };
        Self {
            constraint: c.id.clone(),
            kind: c.kind,
            witness,
            left,
            right,
            changed,
            message,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Constraint(ConstraintViolation),
    Store(StoreError),
}

impl Violation {
    pub fn as_constraint(&self) -> Option<&ConstraintViolation> {
        match self {
            Violation::Constraint(v) => Some(v),
            Violation::Store(_) => None,
        }
    }

    /// One-line rendering for terminal output.
    pub fn line(&self, schema: &Schema) -> String {
        match self {
            Violation::Constraint(v) => format!(
                "{} [{}] at {}: {}",
                v.constraint,
                v.kind.as_str(),
                schema.row_label(v.witness),
                v.message
            ),
            Violation::Store(e) => format!("store [{}]: {e}", e.code()),
        }
    }

    pub fn to_json(&self, schema: &Schema) -> Json {
        match self {
            Violation::Constraint(v) => json!({
                "constraint": v.constraint,
                "kind": v.kind.as_str(),
                "witness": row_json(schema, v.witness),
                "left": value_json(schema, &v.left),
                "right": value_json(schema, &v.right),
                "changed": v.changed.map(|c| json!({
                    "set": schema.set(c.row.set).name,
                    "function": schema.function(c.function).name,
                    "row": c.row.x,
                })),
                "message": v.message,
            }),
            Violation::Store(e) => json!({
                "constraint": null,
                "kind": "store",
                "code": e.code(),
                "witness": null,
                "left": null,
                "right": null,
                "changed": null,
                "message": e.to_string(),
            }),
        }
    }
}

fn row_json(schema: &Schema, row: RowId) -> Json {
    json!({ "set": schema.set(row.set).name, "x": row.x })
}

fn value_json(schema: &Schema, value: &Value) -> Json {
    match value {
        Value::Text(s) => json!(s),
        Value::Integer(i) => json!(i),
        Value::Row(row) => row_json(schema, *row),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Applied,
    Rejected,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Applied => "APPLIED",
            Outcome::Rejected => "REJECTED",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    /// Non-empty iff rejected; sorted by (constraint, witness).
    pub violations: Vec<Violation>,
    /// Row created by an applied insert.
    pub inserted: Option<RowId>,
    /// Rows the store touched while deciding this verdict.
    pub rows_inspected: u64,
}

impl Verdict {
    pub fn is_applied(&self) -> bool {
        self.outcome == Outcome::Applied
    }

    pub(crate) fn store_error(error: StoreError, rows_inspected: u64) -> Self {
        Self {
            outcome: Outcome::Rejected,
            violations: vec![Violation::Store(error)],
            inserted: None,
            rows_inspected,
        }
    }
}

/// Constraint enforcement for one schema.
#[derive(Debug, Clone)]
pub struct Engine {
    schema: Arc<Schema>,
    dispatch: BTreeMap<(SetId, FunctionId), Vec<Occurrence>>,
    /// Constraint indexes per common domain.
    by_domain: Vec<Vec<usize>>,
}

impl Engine {
    pub fn new(schema: Arc<Schema>) -> Self {
        let mut by_domain = vec![Vec::new(); schema.sets().len()];
        for (index, c) in schema.constraints().iter().enumerate() {
            by_domain[c.domain.0].push(index);
        }
        Self {
            dispatch: dispatch(&schema),
            by_domain,
            schema,
        }
    }

    pub fn schema(&self) -> &Arc<Schema> {
        &self.schema
    }

    pub fn occurrences(&self, set: SetId, function: FunctionId) -> &[Occurrence] {
        self.dispatch
            .get(&(set, function))
            .map_or(&[], Vec::as_slice)
    }

    /// Applies `op` if it introduces no new violation; otherwise leaves `db`
    /// exactly as it was.
    pub fn apply_mutation(&self, db: &mut Database, op: &RowOp) -> Verdict {
        let start = db.rows_inspected();
        let before = match op {
            RowOp::Update { row, .. } => db.row_values(*row).cloned(),
            _ => None,
        };
        let applied = match db.apply(op) {
            Ok(applied) => applied,
            Err(e) => return Verdict::store_error(e, db.rows_inspected() - start),
        };

        let mut found = Vec::new();
        match op {
            RowOp::Insert { set, .. } => {
                let row = applied.inserted.expect("insert yields a row");
                for &c in &self.by_domain[set.0] {
                    found.extend(
                        check_domain_row(db, &self.schema.constraints()[c], row).map(|v| (c, v)),
                    );
                }
            }
            RowOp::Update { row, values } => {
                let before = before.expect("staged update had a row");
                let changed: Bindings = values
                    .iter()
                    .filter(|(f, v)| before[self.schema.function(*f).slot] != *v)
                    .cloned()
                    .collect();
                found = self.check_update(db, *row, &changed);
            }
            // RESTRICT leaves no chain through the deleted row.
            RowOp::Delete { .. } => {}
        }

        if found.is_empty() {
            return Verdict {
                outcome: Outcome::Applied,
                violations: Vec::new(),
                inserted: applied.inserted,
                rows_inspected: db.rows_inspected() - start,
            };
        }

        // Only violations the mutation introduced count against it.
        db.undo(applied.undo);
        found.retain(|(c, v)| {
            check_domain_row(db, &self.schema.constraints()[*c], v.witness).is_none()
        });
        if found.is_empty() {
            let redone = db.apply(op).expect("replaying a validated operation");
            return Verdict {
                outcome: Outcome::Applied,
                violations: Vec::new(),
                inserted: redone.inserted,
                rows_inspected: db.rows_inspected() - start,
            };
        }
        found.sort_by_key(|(c, v)| (*c, v.witness.x));
        Verdict {
            outcome: Outcome::Rejected,
            violations: found
                .into_iter()
                .map(|(_, v)| Violation::Constraint(v))
                .collect(),
            inserted: None,
            rows_inspected: db.rows_inspected() - start,
        }
    }

    /// Checks for the `changed` columns of `row`, deduplicated by
    /// (constraint, witness).
    fn check_update(
        &self,
        db: &Database,
        row: RowId,
        changed: &Bindings,
    ) -> Vec<(usize, ConstraintViolation)> {
        let mut seen = BTreeSet::new();
        let mut domain_checked = BTreeSet::new();
        let mut out = Vec::new();
        for (f, value) in changed {
            for occ in self.occurrences(row.set, *f) {
                let c = &self.schema.constraints()[occ.constraint];
                let found = if occ.position == c.chain(occ.side).len() {
                    if !domain_checked.insert(occ.constraint) {
                        continue;
                    }
                    check_domain_row(db, c, row).into_iter().collect()
                } else {
                    check_link_update(db, c, *occ, row, value.clone())
                };
                for v in found {
                    if seen.insert((occ.constraint, v.witness)) {
                        out.push((occ.constraint, v));
                    }
                }
            }
        }
        out
    }
}

/// An engine, a database and the script handles bound so far.
#[derive(Debug, Clone)]
pub struct Session {
    engine: Engine,
    db: Database,
    handles: BTreeMap<String, RowId>,
}

impl Session {
    pub fn new(schema: Arc<Schema>) -> Self {
        Self {
            engine: Engine::new(Arc::clone(&schema)),
            db: Database::new(schema),
            handles: BTreeMap::new(),
        }
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn db(&self) -> &Database {
        &self.db
    }

    pub fn db_mut(&mut self) -> &mut Database {
        &mut self.db
    }

    pub fn handle(&self, name: &str) -> Option<RowId> {
        self.handles.get(name).copied()
    }

    /// Turns handles into rows.
    pub fn resolve(&self, m: &Mutation) -> Result<RowOp, StoreError> {
        let row = |name: &str| {
            self.handle(name).ok_or_else(|| StoreError::UnboundHandle {
                handle: name.to_string(),
            })
        };
        let mut values = Vec::with_capacity(m.bindings.len());
        for b in &m.bindings {
            let value = match &b.value {
                BindingValue::Text(s) => Some(Value::Text(s.clone())),
                BindingValue::Integer(i) => Some(Value::Integer(*i)),
                BindingValue::Handle(h) => Some(Value::Row(row(h)?)),
                BindingValue::Null => None,
            };
            values.push((b.function, value));
        }
        let target = || row(m.row.as_deref().expect("update and delete name a row"));
        Ok(match m.action {
            Action::Insert => RowOp::Insert { set: m.set, values },
            Action::Update => RowOp::Update {
                row: target()?,
                values,
            },
            Action::Delete => RowOp::Delete { row: target()? },
        })
    }

    /// Applies `m` under constraint enforcement. `as h` binds only when the
    /// insert is applied.
    pub fn apply(&mut self, m: &Mutation) -> Verdict {
        let op = match self.resolve(m) {
            Ok(op) => op,
            Err(e) => return Verdict::store_error(e, 0),
        };
        let verdict = self.engine.apply_mutation(&mut self.db, &op);
        self.bind(m, verdict.inserted);
        verdict
    }

    /// Applies `m` with store-level checks only.
    pub fn apply_unchecked(&mut self, m: &Mutation) -> Result<Option<RowId>, StoreError> {
        let op = self.resolve(m)?;
        let inserted = self.db.apply(&op)?.inserted;
        self.bind(m, inserted);
        Ok(inserted)
    }

    fn bind(&mut self, m: &Mutation, inserted: Option<RowId>) {
        if let (Some(h), Some(row)) = (&m.bind_as, inserted) {
            self.handles.insert(h.clone(), row);
        }
    }
}
