use std::fmt::Write;

use crate::model::{RawChain, RawCodomain, Schema, IDENTITY};

use super::lexer::quote;
use super::script::{Action, BindingValue, Mutation};

/// Canonical source text for `schema`; parsing it yields an equal schema.
pub fn print_schema(schema: &Schema) -> String {
    let raw = schema.to_raw();
    let mut out = format!("schema {};\n", raw.name);
    for set in &raw.sets {
        let _ = writeln!(out, "\nset {} {{", set.name);
        for f in &set.functions {
            let opt = if f.nullable { " ?" } else { "" };
            let name = if f.is_name { "name " } else { "" };
            match &f.codomain {
                RawCodomain::Scalar(ty) => {
                    let _ = writeln!(out, "    {name}{} : {}{opt};", f.name, ty.as_str());
                }
                RawCodomain::Set(target) => {
                    let _ = writeln!(out, "    {} -> {target}{opt};", f.name);
                }
            }
        }
        out.push_str("}\n");
    }
    for c in &raw.constraints {
        let _ = writeln!(
            out,
            "\nconstraint {} {} on {} {{",
            c.id,
            c.kind.as_str(),
            c.domain
        );
        let _ = writeln!(out, "    left = {};", chain(&c.left));
        let _ = writeln!(out, "    right = {};", chain(&c.right));
        if let Some(m) = &c.message {
            let _ = writeln!(out, "    message = {};", quote(m));
        }
        out.push_str("}\n");
    }
    out
}

fn chain(chain: &RawChain) -> String {
    match chain {
        RawChain::Identity => IDENTITY.to_string(),
        RawChain::Functions(names) => names.join(" . "),
    }
}

/// One statement, terminated by `;`.
pub fn print_mutation(schema: &Schema, m: &Mutation) -> String {
    let bindings = m
        .bindings
        .iter()
        .map(|b| {
            let value = match &b.value {
                BindingValue::Text(s) => quote(s),
                BindingValue::Integer(i) => i.to_string(),
                BindingValue::Handle(h) => format!("@{h}"),
                BindingValue::Null => "null".to_string(),
            };
            format!("{} = {value}", schema.function(b.function).name)
        })
        .collect::<Vec<_>>()
        .join(", ");
    let mut out = match m.action {
        Action::Insert => format!("insert {} ({bindings})", schema.set(m.set).name),
        Action::Update => format!("update @{} set {bindings}", m.row.as_deref().unwrap_or("")),
        Action::Delete => format!("delete @{}", m.row.as_deref().unwrap_or("")),
    };
    if let Some(h) = &m.bind_as {
        let _ = write!(out, " as {h}");
    }
    if let Some(e) = m.expectation {
        let _ = write!(out, " expect {}", e.as_str());
    }
    out.push(';');
    out
}

pub fn print_script(schema: &Schema, mutations: &[Mutation]) -> String {
    mutations
        .iter()
        .map(|m| print_mutation(schema, m) + "\n")
        .collect()
}
