//! In-memory relational store.
//!
//! Every set is a table keyed by its surrogate `x`, assigned per set from 1
//! upward and never reused. Link functions are foreign keys: each one keeps a
//! reverse index from target `x` to the `x`s of the rows pointing at it, so
//! that preimages are answered without scanning.
//!
//! The store enforces referential integrity, nullability and value types. It
//! knows nothing about diagram constraints; see [`crate::engine`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use thiserror::Error;

use crate::model::{Codomain, FunctionId, RowId, ScalarType, Schema, SetId, Value};

/// Column values of one row, indexed by [`crate::model::FunctionDef::slot`].
pub type Row = Vec<Option<Value>>;

/// `(function, value)` assignments; `None` writes null.
pub type Bindings = Vec<(FunctionId, Option<Value>)>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StoreError {
    #[error("function `{function}` is not defined on set {set}")]
    UnknownFunction { set: String, function: String },
    #[error("missing required value for {set}.{function}")]
    MissingRequired { set: String, function: String },
    #[error("{set}.{function} references missing row {target}")]
    DanglingReference {
        set: String,
        function: String,
        target: String,
    },
    #[error("value for {set}.{function} must be {expected}")]
    TypeMismatch {
        set: String,
        function: String,
        expected: String,
    },
    #[error("no row {row}")]
    UnknownRow { row: String },
    #[error("row {row} is still referenced by {}", referencing.join(", "))]
    RestrictViolation {
        row: String,
        referencing: Vec<String>,
    },
    #[error("handle @{handle} is not bound to a live row")]
    UnboundHandle { handle: String },
}

impl StoreError {
    pub fn code(&self) -> &'static str {
        match self {
            StoreError::UnknownFunction { .. } => "unknown-function",
            StoreError::MissingRequired { .. } => "missing-required",
            StoreError::DanglingReference { .. } => "dangling-reference",
            StoreError::TypeMismatch { .. } => "type-mismatch",
            StoreError::UnknownRow { .. } => "unknown-row",
            StoreError::RestrictViolation { .. } => "restrict-violation",
            StoreError::UnboundHandle { .. } => "unbound-handle",
        }
    }
}

/// A single write request against the store.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowOp {
    Insert { set: SetId, values: Bindings },
    Update { row: RowId, values: Bindings },
    Delete { row: RowId },
}

/// Complete observable state of a database, comparable for equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoreState {
    tables: Vec<BTreeMap<u64, Row>>,
    next_x: Vec<u64>,
    /// Per function; `None` for attribute functions.
    reverse: Vec<Option<BTreeMap<u64, BTreeSet<u64>>>>,
}

/// Token that reverts one applied [`RowOp`].
#[derive(Debug)]
#[must_use]
pub struct Undo(UndoEntry);

#[derive(Debug)]
enum UndoEntry {
    Insert { row: RowId, previous_next: u64 },
    Update { row: RowId, old: Bindings },
    Delete { row: RowId, values: Row },
}

#[derive(Debug)]
pub struct Applied {
    pub inserted: Option<RowId>,
    pub undo: Undo,
}

pub struct Database {
    schema: Arc<Schema>,
    state: StoreState,
    inspected: AtomicU64,
}

impl Clone for Database {
    fn clone(&self) -> Self {
        Self {
            schema: Arc::clone(&self.schema),
            state: self.state.clone(),
            inspected: AtomicU64::new(self.rows_inspected()),
        }
    }
}

impl std::fmt::Debug for Database {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Database")
            .field("schema", &self.schema.name)
            .field(
                "rows",
                &self.state.tables.iter().map(BTreeMap::len).sum::<usize>(),
            )
            .finish()
    }
}

impl Database {
    pub fn new(schema: Arc<Schema>) -> Self {
        let reverse = schema
            .functions()
            .iter()
            .map(|f| f.is_link().then(BTreeMap::new))
            .collect();
        let sets = schema.sets().len();
        Self {
            state: StoreState {
                tables: vec![BTreeMap::new(); sets],
                next_x: vec![1; sets],
                reverse,
            },
            schema,
            inspected: AtomicU64::new(0),
        }
    }

    pub fn schema(&self) -> &Arc<Schema> {
        &self.schema
    }

    /// Rows touched since creation. Reads through [`lookup`](Self::lookup),
    /// [`inverse`](Self::inverse), [`rows`](Self::rows) and
    /// [`contains`](Self::contains) count one per row; every write counts one.
    pub fn rows_inspected(&self) -> u64 {
        self.inspected.load(Ordering::Relaxed)
    }

    fn touch(&self, n: u64) {
        self.inspected.fetch_add(n, Ordering::Relaxed);
    }

    pub fn snapshot(&self) -> StoreState {
        self.state.clone()
    }

    pub fn state(&self) -> &StoreState {
        &self.state
    }

    pub fn row_count(&self, set: SetId) -> usize {
        self.state.tables[set.0].len()
    }

    pub fn contains(&self, row: RowId) -> bool {
        self.touch(1);
        self.exists(row)
    }

    fn exists(&self, row: RowId) -> bool {
        self.state
            .tables
            .get(row.set.0)
            .is_some_and(|t| t.contains_key(&row.x))
    }

    /// Value of `function` at `row`; `None` for null or a missing row.
    pub fn lookup(&self, row: RowId, function: FunctionId) -> Option<Value> {
        self.touch(1);
        self.peek(row, function).cloned()
    }

    /// Uncounted read, for rendering and dumps.
    pub fn peek(&self, row: RowId, function: FunctionId) -> Option<&Value> {
        let slot = self.schema.function(function).slot;
        self.state.tables[row.set.0]
            .get(&row.x)
            .and_then(|values| values[slot].as_ref())
    }

    /// Uncounted access to a whole row.
    pub fn row_values(&self, row: RowId) -> Option<&Row> {
        self.state.tables.get(row.set.0)?.get(&row.x)
    }

    /// Exact preimage `{ r : function(r) = target }`, ascending by `x`.
    pub fn inverse(&self, function: FunctionId, target: RowId) -> Vec<RowId> {
        let domain = self.schema.function(function).domain;
        let found: Vec<RowId> = self.state.reverse[function.0]
            .as_ref()
            .and_then(|index| index.get(&target.x))
            .map(|sources| sources.iter().map(|x| RowId::new(domain, *x)).collect())
            .unwrap_or_default();
        self.touch(found.len() as u64);
        found
    }

    /// All rows of `set`, ascending by `x`.
    pub fn rows(&self, set: SetId) -> impl Iterator<Item = RowId> + '_ {
        self.state.tables[set.0].keys().map(move |x| {
            self.touch(1);
            RowId::new(set, *x)
        })
    }

    pub fn insert_row(
        &mut self,
        set: SetId,
        values: &[(FunctionId, Option<Value>)],
    ) -> Result<RowId, StoreError> {
        let applied = self.apply(&RowOp::Insert {
            set,
            values: values.to_vec(),
        })?;
        Ok(applied.inserted.expect("insert yields a row"))
    }

    pub fn set_value(
        &mut self,
        row: RowId,
        function: FunctionId,
        value: Option<Value>,
    ) -> Result<(), StoreError> {
        self.set_values(row, &[(function, value)])
    }

    /// Writes several columns of one row at once; nothing is written unless
    /// every assignment is valid.
    pub fn set_values(
        &mut self,
        row: RowId,
        values: &[(FunctionId, Option<Value>)],
    ) -> Result<(), StoreError> {
        self.apply(&RowOp::Update {
            row,
            values: values.to_vec(),
        })
        .map(|_| ())
    }

    /// Deletes `row` unless another row references it (RESTRICT).
    pub fn delete_row(&mut self, row: RowId) -> Result<(), StoreError> {
        self.apply(&RowOp::Delete { row }).map(|_| ())
    }

    /// Applies `op` and returns a token that reverts it exactly.
    pub fn apply(&mut self, op: &RowOp) -> Result<Applied, StoreError> {
        match op {
            RowOp::Insert { set, values } => {
                let row = self.validated_row(*set, None, values)?;
                let x = self.state.next_x[set.0];
                let id = RowId::new(*set, x);
                self.state.next_x[set.0] = x + 1;
                self.place(id, row);
                Ok(Applied {
                    inserted: Some(id),
                    undo: Undo(UndoEntry::Insert {
                        row: id,
                        previous_next: x,
                    }),
                })
            }
            RowOp::Update { row, values } => {
                if !self.contains(*row) {
                    return Err(self.unknown_row(*row));
                }
                let current = self.state.tables[row.set.0][&row.x].clone();
                let updated = self.validated_row(row.set, Some(current.clone()), values)?;
                let old = values
                    .iter()
                    .map(|(f, _)| (*f, current[self.schema.function(*f).slot].clone()))
                    .collect();
                self.remove(*row);
                self.place(*row, updated);
                Ok(Applied {
                    inserted: None,
                    undo: Undo(UndoEntry::Update { row: *row, old }),
                })
            }
            RowOp::Delete { row } => {
                if !self.contains(*row) {
                    return Err(self.unknown_row(*row));
                }
                let mut referencing = Vec::new();
                for f in self.schema.links_into(row.set) {
                    for source in self.inverse(f, *row) {
                        if source != *row {
                            referencing.push(format!(
                                "{}.{}",
                                self.schema.row_label(source),
                                self.schema.function(f).name
                            ));
                        }
                    }
                }
                if !referencing.is_empty() {
                    return Err(StoreError::RestrictViolation {
                        row: self.schema.row_label(*row),
                        referencing,
                    });
                }
                let values = self.remove(*row);
                Ok(Applied {
                    inserted: None,
                    undo: Undo(UndoEntry::Delete { row: *row, values }),
                })
            }
        }
    }

    /// Reverts an [`Applied`] operation. Undo tokens must be replayed in
    /// reverse order of application.
    pub fn undo(&mut self, undo: Undo) {
        match undo.0 {
            UndoEntry::Insert { row, previous_next } => {
                self.remove(row);
                self.state.next_x[row.set.0] = previous_next;
            }
            UndoEntry::Update { row, old } => {
                let mut values = self.remove(row);
                for (f, value) in old {
                    values[self.schema.function(f).slot] = value;
                }
                self.place(row, values);
            }
            UndoEntry::Delete { row, values } => self.place(row, values),
        }
    }

    fn unknown_row(&self, row: RowId) -> StoreError {
        StoreError::UnknownRow {
            row: self.schema.row_label(row),
        }
    }

    /// Builds the post-write row for `set`, starting from `base` (or all
    /// nulls), and checks every store-level rule.
    fn validated_row(
        &self,
        set: SetId,
        base: Option<Row>,
        values: &[(FunctionId, Option<Value>)],
    ) -> Result<Row, StoreError> {
        let schema = &self.schema;
        let set_def = schema.set(set);
        let mut row = base.unwrap_or_else(|| vec![None; set_def.functions.len()]);
        for (f, value) in values {
            let def = match schema.functions().get(f.0) {
                Some(def) if def.domain == set => def,
                other => {
                    return Err(StoreError::UnknownFunction {
                        set: set_def.name.clone(),
                        function: other.map_or_else(|| format!("#{}", f.0), |d| d.name.clone()),
                    })
                }
            };
            if let Some(value) = value {
                let type_ok = match (def.codomain, value) {
                    (Codomain::Set(target), Value::Row(row)) => row.set == target,
                    (Codomain::Scalar(ScalarType::Text), Value::Text(_)) => true,
                    (Codomain::Scalar(ScalarType::Integer), Value::Integer(_)) => true,
                    _ => false,
                };
                if !type_ok {
                    return Err(StoreError::TypeMismatch {
                        set: set_def.name.clone(),
                        function: def.name.clone(),
                        expected: schema.describe_codomain(def.codomain),
                    });
                }
                if let Value::Row(target) = value {
                    if !self.contains(*target) {
                        return Err(StoreError::DanglingReference {
                            set: set_def.name.clone(),
                            function: def.name.clone(),
                            target: schema.row_label(*target),
                        });
                    }
                }
            }
            row[def.slot] = value.clone();
        }
        for f in &set_def.functions {
            let def = schema.function(*f);
            if !def.nullable && row[def.slot].is_none() {
                return Err(StoreError::MissingRequired {
                    set: set_def.name.clone(),
                    function: def.name.clone(),
                });
            }
        }
        Ok(row)
    }

    fn place(&mut self, id: RowId, row: Row) {
        self.touch(1);
        for f in &self.schema.set(id.set).functions {
            let def = self.schema.function(*f);
            if let Some(Value::Row(target)) = &row[def.slot] {
                self.state.reverse[f.0]
                    .as_mut()
                    .expect("link functions carry a reverse index")
                    .entry(target.x)
                    .or_default()
                    .insert(id.x);
            }
        }
        self.state.tables[id.set.0].insert(id.x, row);
    }

    fn remove(&mut self, id: RowId) -> Row {
        self.touch(1);
        let row = self.state.tables[id.set.0]
            .remove(&id.x)
            .expect("row exists");
        for f in &self.schema.set(id.set).functions {
            let def = self.schema.function(*f);
            if let Some(Value::Row(target)) = &row[def.slot] {
                let index = self.state.reverse[f.0].as_mut().expect("link index");
                if let Some(sources) = index.get_mut(&target.x) {
                    sources.remove(&id.x);
                    if sources.is_empty() {
                        index.remove(&target.x);
                    }
                }
            }
        }
        row
    }

    /// Line-oriented debugging dump: one row per line, `SET#x fn=value ...`.
    /// Text values are quoted, links print as `@SET#x`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for set in self.schema.set_ids() {
            let def = self.schema.set(set);
            for (x, row) in &self.state.tables[set.0] {
                let _ = write!(out, "{}#{}", def.name, x);
                for f in &def.functions {
                    let fdef = self.schema.function(*f);
                    let _ = write!(out, " {}=", fdef.name);
                    match &row[fdef.slot] {
                        None => out.push_str("null"),
                        Some(Value::Text(s)) => {
                            let _ = write!(out, "{s:?}");
                        }
                        Some(Value::Integer(i)) => {
                            let _ = write!(out, "{i}");
                        }
                        Some(Value::Row(r)) => {
                            let _ = write!(out, "@{}", self.schema.row_label(*r));
                        }
                    }
                }
                out.push('\n');
            }
        }
        out
    }

    /// Display text of a value: rows print their name attribute.
    pub fn display_value(&self, value: Option<&Value>) -> String {
        match value {
            None => "null".to_string(),
            Some(Value::Text(s)) => s.clone(),
            Some(Value::Integer(i)) => i.to_string(),
            Some(Value::Row(row)) => {
                let name = self.schema.set(row.set).name_attribute;
                match self.peek(*row, name) {
                    Some(Value::Text(s)) => s.clone(),
                    Some(Value::Integer(i)) => i.to_string(),
                    _ => self.schema.row_label(*row),
                }
            }
        }
    }
}
