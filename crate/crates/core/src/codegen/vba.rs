//! Event-handler surface: Access SQL row sources and VBA `BeforeUpdate`
//! procedures.

use crate::model::{ConstraintKind, DiagramConstraint, FunctionId, Schema, Side};

use super::{is_text, relation_text, Chain, Site};

/// Column names that must be bracketed inside SQL strings.
const RESERVED: &[&str] = &[
    "AND", "AS", "BY", "DATE", "FROM", "GROUP", "IN", "IS", "JOIN", "KEY", "LEVEL", "NAME", "NOT",
    "NULL", "ON", "OR", "ORDER", "SELECT", "TABLE", "VALUE", "WHERE",
];

fn col(name: &str) -> String {
    if RESERVED.contains(&name.to_ascii_uppercase().as_str()) {
        format!("[{name}]")
    } else {
        name.to_string()
    }
}

/// VBA string literal.
fn vb(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

/// Piece of a VBA string expression: literal text or spliced code.
enum Seg {
    Lit(String),
    Expr(String),
}

fn lit(s: impl Into<String>) -> Seg {
    Seg::Lit(s.into())
}

fn render(segs: &[Seg]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut pending = String::new();
    for seg in segs {
        match seg {
            Seg::Lit(s) => pending.push_str(s),
            Seg::Expr(e) => {
                if !pending.is_empty() {
                    parts.push(vb(&pending));
                    pending.clear();
                }
                parts.push(e.clone());
            }
        }
    }
    if !pending.is_empty() || parts.is_empty() {
        parts.push(vb(&pending));
    }
    parts.join(" & ")
}

/// `value` spliced into SQL text, quoted when it is text.
fn sql_value(expr: &str, text: bool) -> Vec<Seg> {
    if text {
        vec![
            lit("'"),
            Seg::Expr(format!("Replace({expr}, \"'\", \"''\")")),
            lit("'"),
        ]
    } else {
        vec![Seg::Expr(expr.to_string())]
    }
}

pub(super) fn row_source(schema: &Schema, spec: &crate::model::ChainSpec) -> String {
    let chain = Chain::new(schema, spec);
    let n = chain.len();
    if n == 1 {
        let target = schema
            .function(spec.outermost())
            .target_set()
            .expect("link");
        let set = schema.set(target);
        let name = &schema.function(set.name_attribute).name;
        return format!(
            "SELECT [{t}].[x], [{t}].[{name}] FROM {t}\nORDER BY [{name}];\n",
            t = set.name
        );
    }

    // Joined tables T₁ … Tₖ are dom(f₁) … dom(fₙ₋₁).
    let k = n - 1;
    let tables: Vec<&str> = (1..=k).map(|j| chain.dom(j)).collect();
    let columns = |table: &str| -> Vec<String> {
        let set = schema.set(schema.set_by_name(table).expect("joined table"));
        std::iter::once("x".to_string())
            .chain(
                set.functions
                    .iter()
                    .map(|f| schema.function(*f).name.clone()),
            )
            .collect()
    };
    let display = tables
        .iter()
        .map(|t| {
            let set = schema.set(schema.set_by_name(t).expect("joined table"));
            let name = &schema.function(set.name_attribute).name;
            let owners = tables.iter().filter(|u| columns(u).contains(name)).count();
            if owners > 1 {
                format!("[{t}].[{name}]")
            } else {
                format!("[{name}]")
            }
        })
        .collect::<Vec<_>>()
        .join(" & \", \" & ");
    let alias = (2..=n).map(|j| chain.f(j)).collect::<Vec<_>>().join(", ");

    let mut from = tables[k - 1].to_string();
    if k >= 2 {
        from = format!(
            "{} RIGHT JOIN {} ON {}.{} = {}.x",
            tables[k - 2],
            tables[k - 1],
            tables[k - 1],
            chain.f(k),
            tables[k - 2]
        );
        for j in (1..k - 1).rev() {
            from = format!(
                "{} RIGHT JOIN ({from}) ON {}.x = {}.{}",
                tables[j - 1],
                tables[j - 1],
                tables[j],
                chain.f(j + 1)
            );
        }
    }

    format!(
        "SELECT {last}.x, {display} AS [{alias}],\n{first}.{f1}\nFROM {from}\nORDER BY {display};\n",
        last = tables[k - 1],
        first = tables[0],
        f1 = chain.f(1),
    )
}

fn header(out: &mut String, procedure: &str, c: &DiagramConstraint, schema: &Schema) {
    let op = match c.kind {
        ConstraintKind::Commutative => "=",
        ConstraintKind::AntiCommutative => "<>",
    };
    out.push_str(&format!("Sub {procedure}(Cancel As Integer)\n...\n"));
    out.push_str(&format!(
        "'enforces constraint {}: {} {op} {}\n",
        c.id,
        schema.chain_text(&c.left),
        schema.chain_text(&c.right)
    ));
}

/// First message line: the custom template with `{left}`/`{right}` spliced,
/// or the generic relation sentence.
fn headline(schema: &Schema, c: &DiagramConstraint, left: &str, right: &str) -> String {
    match &c.message {
        Some(template) => {
            let mut segs = Vec::new();
            let mut rest = template.as_str();
            while let Some(at) = rest.find('{') {
                let (before, tail) = rest.split_at(at);
                segs.push(lit(before));
                if let Some(t) = tail.strip_prefix("{left}") {
                    segs.push(Seg::Expr(left.to_string()));
                    rest = t;
                } else if let Some(t) = tail.strip_prefix("{right}") {
                    segs.push(Seg::Expr(right.to_string()));
                    rest = t;
                } else {
                    segs.push(lit("{"));
                    rest = &tail[1..];
                }
            }
            segs.push(lit(rest));
            render(&segs)
        }
        None => vb(&format!(
            "{} {} {}!",
            schema.chain_text(&c.left),
            relation_text(c),
            schema.chain_text(&c.right)
        )),
    }
}

pub(super) fn domain_check(schema: &Schema, c: &DiagramConstraint) -> String {
    let left = Chain::new(schema, &c.left);
    let right = Chain::new(schema, &c.right);
    let text = is_text(left.codomain());
    let fname = left.f(left.len());
    let gname = right.f(right.len());
    let value = |chain: &Chain<'_>, other: &Chain<'_>| {
        let name = chain.f(chain.len());
        if chain.len() > 1 {
            format!("{name}.Column(2)")
        } else if other.len() > 1 && !text {
            // Column(2) of the other combo box is a string.
            format!("CStr({name})")
        } else {
            name.to_string()
        }
    };
    let lv = value(&left, &right);
    let rv = value(&right, &left);
    let op = match c.kind {
        ConstraintKind::Commutative => "<>",
        ConstraintKind::AntiCommutative => "=",
    };

    let mut out = String::new();
    header(&mut out, "Form_BeforeUpdate", c, schema);
    out.push_str(&format!(
        "If Not Cancel And Not IsNull({fname}) And Not IsNull({gname}) Then\n"
    ));
    let guards: Vec<String> = [(&left, &lv), (&right, &rv)]
        .into_iter()
        .filter(|(chain, _)| chain.len() > 1)
        .map(|(_, v)| format!("Not IsNull({v})"))
        .collect();
    out.push_str(&format!("  If {} Then\n", guards.join(" And ")));
    out.push_str(&format!("    If {lv} {op} {rv} Then\n"));
    out.push_str("      Cancel = True\n      Beep\n");
    out.push_str(&format!(
        "      MsgBox {} & Chr(13) & _\n        {}, _\n        vbCritical, \"Request rejected...\"\n",
        headline(schema, c, &lv, &rv),
        vb(&format!(
            "Please change accordingly the value(s) of either {fname} or/and {gname}."
        ))
    ));
    out.push_str("    End If\n  End If\nEnd If\nEnd Sub\n");
    out
}

/// Condition on rows of D: `fᵢ₊₁ ∘ … ∘ fₙ (row) = x`, as nested `IN`s.
fn affected(chain: &Chain<'_>, i: usize) -> Vec<Seg> {
    let n = chain.len();
    let mut segs = Vec::new();
    for j in (i + 1..=n).rev() {
        if j == i + 1 {
            segs.push(lit(format!("{} =", col(chain.f(j)))));
            segs.push(Seg::Expr("x".into()));
        } else {
            segs.push(lit(format!(
                "{} IN (SELECT x FROM {} WHERE ",
                col(chain.f(j)),
                chain.dom(j - 1)
            )));
        }
    }
    segs.push(lit(")".repeat(n - i - 1)));
    segs
}

/// `DLookup` of `g₁ ∘ … ∘ gₘ` over the rows of D matching `cond`.
fn other_value(other: &Chain<'_>, cond: Vec<Seg>) -> String {
    let m = other.len();
    let mut segs = Vec::new();
    for k in 2..=m {
        segs.push(lit(format!(
            "x IN (SELECT {} FROM {} WHERE ",
            col(other.f(k)),
            other.dom(k)
        )));
    }
    segs.extend(cond);
    segs.push(lit(")".repeat(m - 1)));
    format!(
        "DLookup({}, {}, {})",
        vb(other.f(1)),
        vb(other.dom(1)),
        render(&segs)
    )
}

/// `f₁ ∘ … ∘ fᵢ₋₁` applied to the new value of `fᵢ`; `i > 1`.
fn head_value(chain: &Chain<'_>, i: usize) -> String {
    let mut segs = Vec::new();
    for k in 2..i {
        segs.push(lit(format!(
            "x IN (SELECT {} FROM {} WHERE ",
            col(chain.f(k)),
            chain.dom(k)
        )));
    }
    segs.push(lit("x ="));
    segs.push(Seg::Expr(chain.f(i).to_string()));
    segs.push(lit(")".repeat(i - 2)));
    format!(
        "DLookup({}, {}, {})",
        vb(chain.f(1)),
        vb(chain.dom(1)),
        render(&segs)
    )
}

/// Condition on rows of D: `g₁ ∘ … ∘ gₘ (row) = w`.
fn other_equals(other: &Chain<'_>, w: &str, text: bool) -> Vec<Seg> {
    let m = other.len();
    let mut segs = Vec::new();
    for k in (2..=m).rev() {
        segs.push(lit(format!(
            "{} IN (SELECT x FROM {} WHERE ",
            col(other.f(k)),
            other.dom(k - 1)
        )));
    }
    segs.push(lit(format!("{} =", col(other.f(1)))));
    segs.extend(sql_value(w, text));
    segs.push(lit(")".repeat(m - 1)));
    segs
}

pub(super) fn link_check(
    schema: &Schema,
    c: &DiagramConstraint,
    function: FunctionId,
    sites: &[Site],
) -> String {
    let name = &schema.function(function).name;
    let text = is_text(Chain::new(schema, &c.left).codomain());
    let needs_w = sites.iter().any(|(_, i)| *i > 1);

    let mut out = String::new();
    header(&mut out, &format!("{name}_BeforeUpdate"), c, schema);
    out.push_str(if needs_w {
        "Dim v, w As Variant\n"
    } else {
        "Dim v As Variant\n"
    });
    for &(side, i) in sites {
        let chain = Chain::new(schema, c.chain(side));
        let other = Chain::new(schema, c.chain(side.other()));
        let w = if i == 1 {
            name.to_string()
        } else {
            "w".to_string()
        };
        let (lw, rw) = match side {
            Side::Left => (w.as_str(), "v"),
            Side::Right => ("v", w.as_str()),
        };
        let message = (
            match c.kind {
                ConstraintKind::Commutative => headline(schema, c, lw, rw),
                ConstraintKind::AntiCommutative => headline(schema, c, &w, &w),
            },
            vb(&format!(
                "You cannot change {}'s value but with one that leaves {}'s unchanged.",
                chain.f(i),
                chain.f(1)
            )),
        );

        out.push_str(&format!(
            "If Not Cancel And Not NewRecord And {name} <> {name}.OldValue And Not IsNull({name}) Then\n"
        ));
        match c.kind {
            ConstraintKind::Commutative => {
                out.push_str(&format!(
                    "  v = {}\n",
                    other_value(&other, affected(&chain, i))
                ));
                out.push_str("  If Not IsNull(v) Then\n");
                let mut indent = "    ".to_string();
                if i > 1 {
                    out.push_str(&format!("    w = {}\n", head_value(&chain, i)));
                    out.push_str("    If Not IsNull(w) Then\n");
                    indent.push_str("  ");
                }
                let test = if text {
                    format!("v <> {w}")
                } else {
                    format!("CLng(v) <> CLng({w})")
                };
                out.push_str(&format!("{indent}If {test} Then\n"));
                push_reject(&mut out, &indent, &message);
                out.push_str(&format!("{indent}End If\n"));
                if i > 1 {
                    out.push_str("    End If\n");
                }
                out.push_str("  End If\n");
            }
            ConstraintKind::AntiCommutative => {
                let mut indent = "  ".to_string();
                if i > 1 {
                    out.push_str(&format!("  w = {}\n", head_value(&chain, i)));
                    out.push_str("  If Not IsNull(w) Then\n");
                    indent.push_str("  ");
                }
                let mut cond = affected(&chain, i);
                cond.push(lit(" AND "));
                cond.extend(other_equals(&other, &w, text));
                out.push_str(&format!(
                    "{indent}v = DLookup(\"x\", {}, {})\n",
                    vb(chain.dom(chain.len())),
                    render(&cond)
                ));
                out.push_str(&format!("{indent}If Not IsNull(v) Then\n"));
                push_reject(&mut out, &indent, &message);
                out.push_str(&format!("{indent}End If\n"));
                if i > 1 {
                    out.push_str("  End If\n");
                }
            }
        }
        out.push_str("End If\n");
    }
    out.push_str("End Sub\n");
    out
}

fn push_reject(out: &mut String, indent: &str, (first, second): &(String, String)) {
    out.push_str(&format!(
        "{indent}  Cancel = True\n{indent}  Beep\n\
         {indent}  MsgBox {first} & Chr(13) & _\n\
         {indent}    {second}, _\n\
         {indent}    vbCritical, \"Request rejected...\"\n\
         {indent}  Undo\n"
    ));
}
