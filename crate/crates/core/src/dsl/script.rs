use std::collections::BTreeMap;

use crate::model::{Codomain, FunctionId, ScalarType, Schema, SetId};

use super::diagnostic::{Diagnostic, DiagnosticCode, Pos};
use super::{PResult, Parser, Tok};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Insert,
    Update,
    Delete,
}

impl Action {
    pub fn as_str(self) -> &'static str {
        match self {
            Action::Insert => "insert",
            Action::Update => "update",
            Action::Delete => "delete",
        }
    }
}

/// Right-hand side of `fn = ...` before handles are resolved to rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BindingValue {
    Text(String),
    Integer(i64),
    Handle(String),
    Null,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binding {
    pub function: FunctionId,
    pub value: BindingValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expectation {
    Accept,
    Reject,
}

impl Expectation {
    pub fn as_str(self) -> &'static str {
        match self {
            Expectation::Accept => "accept",
            Expectation::Reject => "reject",
        }
    }
}

/// One script statement, type-checked against a schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mutation {
    pub action: Action,
    /// Target set; for update/delete, the set the handle was bound to.
    pub set: SetId,
    /// Handle naming the affected row (update/delete only).
    pub row: Option<String>,
    pub bindings: Vec<Binding>,
    /// `as h` on an insert.
    pub bind_as: Option<String>,
    pub expectation: Option<Expectation>,
}

/// Parses a script. Handles must be bound by an earlier `insert ... as h`.
pub fn parse_script(source: &str, schema: &Schema) -> Result<Vec<Mutation>, Vec<Diagnostic>> {
    parse_script_spanned(source, schema).map(|ms| ms.into_iter().map(|(_, m)| m).collect())
}

/// [`parse_script`] keeping the position of each statement.
pub fn parse_script_spanned(
    source: &str,
    schema: &Schema,
) -> Result<Vec<(Pos, Mutation)>, Vec<Diagnostic>> {
    let mut p = Parser::new(source);
    let mut cx = ScriptCx {
        schema,
        handles: BTreeMap::new(),
        semantic: Vec::new(),
    };
    let mut out = Vec::new();
    while !p.at_eof() {
        match statement(&mut p, &mut cx) {
            Ok(Some(m)) => out.push(m),
            Ok(None) => {}
            Err(_) => {
                p.recover_statement();
                if p.at_punct('}') {
                    p.advance();
                }
            }
        }
    }
    let mut diagnostics = p.diagnostics;
    diagnostics.extend(cx.semantic);
    if diagnostics.is_empty() {
        Ok(out)
    } else {
        diagnostics.sort_by_key(|d| (d.line, d.column));
        Err(diagnostics)
    }
}

struct ScriptCx<'a> {
    schema: &'a Schema,
    handles: BTreeMap<String, SetId>,
    semantic: Vec<Diagnostic>,
}

impl ScriptCx<'_> {
    fn error(&mut self, pos: Pos, code: DiagnosticCode, message: String) {
        self.semantic.push(Diagnostic::error(pos, code, message));
    }

    fn handle_set(&mut self, name: &str, pos: Pos) -> Option<SetId> {
        let set = self.handles.get(name).copied();
        if set.is_none() {
            self.error(
                pos,
                DiagnosticCode::UnboundHandle,
                format!("handle @{name} is not bound by an earlier insert"),
            );
        }
        set
    }
}

/// `Ok(None)` means the statement parsed but failed semantic checks.
fn statement(p: &mut Parser, cx: &mut ScriptCx<'_>) -> PResult<Option<(Pos, Mutation)>> {
    let start = p.pos();
    if p.at_keyword("insert") {
        p.advance();
        let (set_name, set_pos) = p.ident("a set name")?;
        let set = cx.schema.set_by_name(&set_name);
        if set.is_none() {
            cx.error(
                set_pos,
                DiagnosticCode::UnknownSet,
                format!("unknown set `{set_name}`"),
            );
        }
        p.punct('(')?;
        let mut raw = Vec::new();
        if !p.at_punct(')') {
            loop {
                raw.push(binding(p)?);
                if p.at_punct(',') {
                    p.advance();
                } else {
                    break;
                }
            }
        }
        p.punct(')')?;
        let mut bind_as = None;
        if p.at_keyword("as") {
            p.advance();
            let (name, _) = p.ident("a handle name")?;
            bind_as = Some(name);
        }
        let expectation = expectation(p)?;
        p.punct(';')?;
        let Some(set) = set else { return Ok(None) };
        let bindings = check_bindings(cx, set, raw);
        if let Some(h) = &bind_as {
            cx.handles.insert(h.clone(), set);
        }
        Ok(bindings.map(|bindings| {
            (
                start,
                Mutation {
                    action: Action::Insert,
                    set,
                    row: None,
                    bindings,
                    bind_as,
                    expectation,
                },
            )
        }))
    } else if p.at_keyword("update") {
        p.advance();
        let (handle, hpos) = handle(p)?;
        p.keyword("set")?;
        let mut raw = vec![binding(p)?];
        while p.at_punct(',') {
            p.advance();
            raw.push(binding(p)?);
        }
        let expectation = expectation(p)?;
        p.punct(';')?;
        let Some(set) = cx.handle_set(&handle, hpos) else {
            return Ok(None);
        };
        Ok(check_bindings(cx, set, raw).map(|bindings| {
            (
                start,
                Mutation {
                    action: Action::Update,
                    set,
                    row: Some(handle),
                    bindings,
                    bind_as: None,
                    expectation,
                },
            )
        }))
    } else if p.at_keyword("delete") {
        p.advance();
        let (handle, hpos) = handle(p)?;
        let expectation = expectation(p)?;
        p.punct(';')?;
        let Some(set) = cx.handle_set(&handle, hpos) else {
            return Ok(None);
        };
        Ok(Some((
            start,
            Mutation {
                action: Action::Delete,
                set,
                row: Some(handle),
                bindings: Vec::new(),
                bind_as: None,
                expectation,
            },
        )))
    } else {
        Err(p.error_here("`insert`, `update` or `delete`"))
    }
}

fn handle(p: &mut Parser) -> PResult<(String, Pos)> {
    match &p.peek().tok {
        Tok::Handle(h) => {
            let h = h.clone();
            Ok((h, p.advance().pos))
        }
        _ => Err(p.error_here("a handle such as `@row`")),
    }
}

struct RawBinding {
    name: String,
    name_pos: Pos,
    value: BindingValue,
    value_pos: Pos,
}

fn binding(p: &mut Parser) -> PResult<RawBinding> {
    let (name, name_pos) = p.ident("a function name")?;
    p.punct('=')?;
    let value_pos = p.pos();
    let value = match &p.peek().tok {
        Tok::Str(s) => BindingValue::Text(s.clone()),
        Tok::Int(i) => BindingValue::Integer(*i),
        Tok::Handle(h) => BindingValue::Handle(h.clone()),
        Tok::Ident(s) if s == "null" => BindingValue::Null,
        _ => return Err(p.error_here("a string, integer, handle or `null`")),
    };
    p.advance();
    Ok(RawBinding {
        name,
        name_pos,
        value,
        value_pos,
    })
}

fn expectation(p: &mut Parser) -> PResult<Option<Expectation>> {
    if !p.at_keyword("expect") {
        return Ok(None);
    }
    p.advance();
    let e = if p.at_keyword("accept") {
        Expectation::Accept
    } else if p.at_keyword("reject") {
        Expectation::Reject
    } else {
        return Err(p.error_here("`accept` or `reject`"));
    };
    p.advance();
    Ok(Some(e))
}

fn check_bindings(cx: &mut ScriptCx<'_>, set: SetId, raw: Vec<RawBinding>) -> Option<Vec<Binding>> {
    let mut ok = true;
    let mut out: Vec<Binding> = Vec::with_capacity(raw.len());
    for b in raw {
        let Some(function) = cx.schema.function_on(set, &b.name) else {
            let set_name = cx.schema.set(set).name.clone();
            cx.error(
                b.name_pos,
                DiagnosticCode::UnknownFunction,
                format!("set {set_name} has no function `{}`", b.name),
            );
            ok = false;
            continue;
        };
        if out.iter().any(|o| o.function == function) {
            cx.error(
                b.name_pos,
                DiagnosticCode::DuplicateBinding,
                format!("`{}` is bound more than once", b.name),
            );
            ok = false;
            continue;
        }
        let codomain = cx.schema.function(function).codomain;
        let fits = match (&b.value, codomain) {
            (BindingValue::Null, _) => true,
            (BindingValue::Text(_), Codomain::Scalar(ScalarType::Text)) => true,
            (BindingValue::Integer(_), Codomain::Scalar(ScalarType::Integer)) => true,
            (BindingValue::Handle(h), Codomain::Set(target)) => {
                match cx.handle_set(h, b.value_pos) {
                    Some(bound) => bound == target,
                    None => {
                        ok = false;
                        continue;
                    }
                }
            }
            _ => false,
        };
        if !fits {
            let expected = cx.schema.describe_codomain(codomain);
            let found = match &b.value {
                BindingValue::Text(_) => "a text literal".to_string(),
                BindingValue::Integer(_) => "an integer literal".to_string(),
                BindingValue::Handle(h) => {
                    let bound = cx.handles[h];
                    format!("@{h}, a row of {}", cx.schema.set(bound).name)
                }
                BindingValue::Null => unreachable!(),
            };
            cx.error(
                b.value_pos,
                DiagnosticCode::TypeMismatch,
                format!("`{}` expects {expected}, found {found}", b.name),
            );
            ok = false;
            continue;
        }
        out.push(Binding {
            function,
            value: b.value,
        });
    }
    ok.then_some(out)
}
