//! SQLite-compatible DDL and `AFTER` triggers that `RAISE(ABORT, ...)`.

use crate::model::{
    ChainSpec, Codomain, ConstraintKind, DiagramConstraint, FunctionId, Schema, Side,
};

use super::{relation_text, Chain, Site};

fn ident(name: &str) -> String {
    format!("\"{name}\"")
}

fn string(s: &str) -> String {
    format!("'{}'", s.replace('\'', "''"))
}

/// `CREATE TABLE` statements for every set, in declaration order. Links are
/// foreign keys, so deletes are restricted by the database itself.
pub fn gen_ddl(schema: &Schema) -> String {
    let mut out = String::new();
    for set in schema.sets() {
        out.push_str(&format!(
            "CREATE TABLE {} (\n  \"x\" INTEGER PRIMARY KEY",
            ident(&set.name)
        ));
        for f in &set.functions {
            let def = schema.function(*f);
            let ty = match def.codomain {
                Codomain::Scalar(crate::model::ScalarType::Text) => "TEXT".to_string(),
                Codomain::Scalar(crate::model::ScalarType::Integer) => "INTEGER".to_string(),
                Codomain::Set(target) => format!(
                    "INTEGER REFERENCES {}(\"x\")",
                    ident(&schema.set(target).name)
                ),
            };
            let null = if def.nullable { "" } else { " NOT NULL" };
            out.push_str(&format!(",\n  {} {ty}{null}", ident(&def.name)));
        }
        out.push_str("\n);\n");
    }
    out
}

pub(super) fn row_source(schema: &Schema, spec: &ChainSpec) -> String {
    let chain = Chain::new(schema, spec);
    let n = chain.len();
    let name_of = |table: &str| {
        let set = schema.set(schema.set_by_name(table).expect("known table"));
        schema.function(set.name_attribute).name.clone()
    };
    if n == 1 {
        let target = schema
            .function(spec.outermost())
            .target_set()
            .expect("link");
        let t = &schema.set(target).name;
        let name = name_of(t);
        return format!(
            "SELECT {t}.\"x\", {t}.{name} FROM {t}\nORDER BY {t}.{name};\n",
            t = ident(t),
            name = ident(&name)
        );
    }
    // Tables dom(f₁) … dom(fₙ₋₁), aliased t1 … tk, joined from the innermost.
    let k = n - 1;
    let display = (1..=k)
        .map(|j| format!("t{j}.{}", ident(&name_of(chain.dom(j)))))
        .collect::<Vec<_>>()
        .join(" || ', ' || ");
    let alias = (2..=n).map(|j| chain.f(j)).collect::<Vec<_>>().join(", ");
    let mut from = format!("{} AS t{k}", ident(chain.dom(k)));
    for j in (1..k).rev() {
        from.push_str(&format!(
            "\nLEFT JOIN {} AS t{j} ON t{j}.\"x\" = t{}.{}",
            ident(chain.dom(j)),
            j + 1,
            ident(chain.f(j + 1))
        ));
    }
    format!(
        "SELECT t{k}.\"x\", {display} AS {}, t1.{}\nFROM {from}\nORDER BY 2;\n",
        ident(&alias),
        ident(chain.f(1))
    )
}

/// `f₁ ∘ … ∘ fⱼ₋₁ (start)` as nested scalar subqueries.
fn prefix(chain: &Chain<'_>, position: usize, start: String) -> String {
    let mut value = start;
    for j in (1..position).rev() {
        value = format!(
            "(SELECT {} FROM {} WHERE \"x\" = {value})",
            ident(chain.f(j)),
            ident(chain.dom(j))
        );
    }
    value
}

/// Whole chain evaluated on the row aliased `row`.
fn walk(chain: &Chain<'_>, row: &str) -> String {
    let n = chain.len();
    prefix(chain, n, format!("{row}.{}", ident(chain.f(n))))
}

fn comparison(c: &DiagramConstraint) -> &'static str {
    match c.kind {
        ConstraintKind::Commutative => "<>",
        ConstraintKind::AntiCommutative => "=",
    }
}

fn abort_message(schema: &Schema, c: &DiagramConstraint) -> String {
    let text = c.message.clone().unwrap_or_else(|| {
        format!(
            "{} {} {}",
            schema.chain_text(&c.left),
            relation_text(c),
            schema.chain_text(&c.right)
        )
    });
    string(&format!("{}: {text}", c.id))
}

pub(super) fn domain_check(schema: &Schema, c: &DiagramConstraint) -> String {
    let left = Chain::new(schema, &c.left);
    let right = Chain::new(schema, &c.right);
    let d = ident(&schema.set(c.domain).name);
    let cond = format!(
        "{} {} {}",
        walk(&left, "NEW"),
        comparison(c),
        walk(&right, "NEW")
    );
    let raise = format!("  SELECT RAISE(ABORT, {});\n", abort_message(schema, c));
    let columns: Vec<String> = {
        let mut cols = vec![left.f(left.len()), right.f(right.len())];
        cols.dedup();
        cols.into_iter().map(ident).collect()
    };
    let mut out = format!(
        "-- enforces {}: {} {} {}\n",
        c.id,
        schema.chain_text(&c.left),
        match c.kind {
            ConstraintKind::Commutative => "=",
            ConstraintKind::AntiCommutative => "<>",
        },
        schema.chain_text(&c.right)
    );
    out.push_str(&format!(
        "CREATE TRIGGER {} AFTER INSERT ON {d}\nFOR EACH ROW WHEN {cond}\nBEGIN\n{raise}END;\n",
        ident(&format!("{}_{}_insert", c.id, schema.set(c.domain).name)),
    ));
    out.push_str(&format!(
        "CREATE TRIGGER {} AFTER UPDATE OF {} ON {d}\nFOR EACH ROW WHEN {cond}\nBEGIN\n{raise}END;\n",
        ident(&format!("{}_{}_update", c.id, schema.set(c.domain).name)),
        columns.join(", "),
    ));
    out
}

/// Condition on D rows aliased `d`: `fᵢ₊₁ ∘ … ∘ fₙ (d) = NEW.x`.
fn affected(chain: &Chain<'_>, i: usize) -> String {
    let n = chain.len();
    let mut cond = format!("{} = NEW.\"x\"", ident(chain.f(i + 1)));
    for j in i + 2..=n {
        cond = format!(
            "{} IN (SELECT \"x\" FROM {} WHERE {cond})",
            ident(chain.f(j)),
            ident(chain.dom(j - 1))
        );
    }
    format!("d.{cond}")
}

pub(super) fn link_check(
    schema: &Schema,
    c: &DiagramConstraint,
    function: FunctionId,
    sites: &[Site],
) -> String {
    let def = schema.function(function);
    let table = ident(&schema.set(def.domain).name);
    let column = ident(&def.name);
    let d = ident(&schema.set(c.domain).name);
    let mut out = format!(
        "-- enforces {} on changes of {}.{}\n",
        c.id,
        schema.set(def.domain).name,
        def.name
    );
    out.push_str(&format!(
        "CREATE TRIGGER {} AFTER UPDATE OF {column} ON {table}\n\
         FOR EACH ROW WHEN NEW.{column} IS NOT OLD.{column} AND NEW.{column} IS NOT NULL\nBEGIN\n",
        ident(&format!(
            "{}_{}_{}",
            c.id,
            schema.set(def.domain).name,
            def.name
        )),
    ));
    for &(side, i) in sites {
        let chain = Chain::new(schema, c.chain(side));
        let other = Chain::new(schema, c.chain(side.other()));
        let head = prefix(&chain, i, format!("NEW.{column}"));
        let (l, r) = match side {
            Side::Left => (head, walk(&other, "d")),
            Side::Right => (walk(&other, "d"), head),
        };
        out.push_str(&format!(
            "  SELECT RAISE(ABORT, {})\n  WHERE EXISTS (SELECT 1 FROM {d} AS d\n    WHERE {}\n    AND {l} {} {r});\n",
            abort_message(schema, c),
            affected(&chain, i),
            comparison(c),
        ));
    }
    out.push_str("END;\n");
    out
}
