//! Text generation for the enforcement artifacts of a constraint: combo-box
//! row sources, the row-level check on the common domain, and one check per
//! link below the top of each chain.
//!
//! Two dialects are produced. [`Dialect::PaperStyle`] is event-handler code
//! in the VBA surface (`Sub f_BeforeUpdate`, `DLookup`, `Cancel = True`).
//! [`Dialect::GenericSql`] is `CREATE TRIGGER` text that SQLite executes;
//! triggers fire after the write and abort the statement, so they see the
//! post-state like the engine does.

mod normalize;
mod sql;
mod vba;

use std::fmt;

use crate::model::{ChainSpec, Codomain, DiagramConstraint, FunctionId, Schema, SetId, Side};

pub use normalize::normalize_text;
pub use sql::gen_ddl;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dialect {
    PaperStyle,
    GenericSql,
}

impl Dialect {
    pub fn as_str(self) -> &'static str {
        match self {
            Dialect::PaperStyle => "paper-style",
            Dialect::GenericSql => "generic-sql",
        }
    }
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where a unit is meant to live.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitTarget {
    /// Row source of the combo box for `function` on `set`.
    RowSource { set: SetId, function: FunctionId },
    /// Row-level check on the common domain.
    Row { set: SetId },
    /// Check attached to one column.
    Function { set: SetId, function: FunctionId },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmittedUnit {
    pub constraint: String,
    pub target: UnitTarget,
    pub dialect: Dialect,
    pub body: String,
}

impl EmittedUnit {
    /// `<set>_<function>_<constraint>.<dialect>.txt`. Row-level units use
    /// `Form` as the function part, row sources `<function>_RowSource`.
    pub fn file_name(&self, schema: &Schema) -> String {
        let stem = match self.target {
            UnitTarget::RowSource { set, function } => format!(
                "{}_{}_RowSource",
                schema.set(set).name,
                schema.function(function).name
            ),
            UnitTarget::Row { set } => format!("{}_Form", schema.set(set).name),
            UnitTarget::Function { set, function } => {
                format!(
                    "{}_{}",
                    schema.set(set).name,
                    schema.function(function).name
                )
            }
        };
        format!("{stem}_{}.{}.txt", self.constraint, self.dialect)
    }
}

/// Row source for the combo box of the innermost function of `side`.
/// `None` when that chain is a single attribute: there is no combo box.
pub fn gen_row_source(
    schema: &Schema,
    constraint: &DiagramConstraint,
    side: Side,
    dialect: Dialect,
) -> Option<EmittedUnit> {
    let chain = constraint.chain(side);
    let innermost = schema.function(chain.innermost());
    if chain.len() == 1 && !innermost.is_link() {
        return None;
    }
    let body = match dialect {
        Dialect::PaperStyle => vba::row_source(schema, chain),
        Dialect::GenericSql => sql::row_source(schema, chain),
    };
    Some(EmittedUnit {
        constraint: constraint.id.clone(),
        target: UnitTarget::RowSource {
            set: innermost.domain,
            function: chain.innermost(),
        },
        dialect,
        body,
    })
}

/// Row-level check on the common domain.
pub fn gen_domain_check(
    schema: &Schema,
    constraint: &DiagramConstraint,
    dialect: Dialect,
) -> EmittedUnit {
    let body = match dialect {
        Dialect::PaperStyle => vba::domain_check(schema, constraint),
        Dialect::GenericSql => sql::domain_check(schema, constraint),
    };
    EmittedUnit {
        constraint: constraint.id.clone(),
        target: UnitTarget::Row {
            set: constraint.domain,
        },
        dialect,
        body,
    }
}

/// One unit per `(dom(fᵢ), fᵢ)` with `i` below the chain length, left side
/// first and positions ascending. Positions of both sides that land on the
/// same column share one unit.
pub fn gen_link_checks(
    schema: &Schema,
    constraint: &DiagramConstraint,
    dialect: Dialect,
) -> Vec<EmittedUnit> {
    link_targets(schema, constraint)
        .into_iter()
        .map(|(set, function, sites)| {
            let body = match dialect {
                Dialect::PaperStyle => vba::link_check(schema, constraint, function, &sites),
                Dialect::GenericSql => sql::link_check(schema, constraint, function, &sites),
            };
            EmittedUnit {
                constraint: constraint.id.clone(),
                target: UnitTarget::Function { set, function },
                dialect,
                body,
            }
        })
        .collect()
}

/// Every unit for `constraint`, in emission order.
pub fn gen_all(
    schema: &Schema,
    constraint: &DiagramConstraint,
    dialect: Dialect,
) -> Vec<EmittedUnit> {
    let mut units: Vec<EmittedUnit> = [Side::Left, Side::Right]
        .into_iter()
        .filter_map(|side| gen_row_source(schema, constraint, side, dialect))
        .collect();
    units.push(gen_domain_check(schema, constraint, dialect));
    units.extend(gen_link_checks(schema, constraint, dialect));
    units
}

/// A chain position `(side, i)` with `i` below the top.
type Site = (Side, usize);

fn link_targets(schema: &Schema, c: &DiagramConstraint) -> Vec<(SetId, FunctionId, Vec<Site>)> {
    let mut out: Vec<(SetId, FunctionId, Vec<Site>)> = Vec::new();
    for side in [Side::Left, Side::Right] {
        let chain = c.chain(side);
        for i in 1..chain.len() {
            let f = chain.at(i);
            match out.iter_mut().find(|(_, g, _)| *g == f) {
                Some((_, _, sites)) => sites.push((side, i)),
                None => out.push((schema.function(f).domain, f, vec![(side, i)])),
            }
        }
    }
    out
}

/// Name-based view of a resolved chain.
struct Chain<'a> {
    schema: &'a Schema,
    spec: &'a ChainSpec,
}

impl<'a> Chain<'a> {
    fn new(schema: &'a Schema, spec: &'a ChainSpec) -> Self {
        Self { schema, spec }
    }

    fn len(&self) -> usize {
        self.spec.len()
    }

    /// Name of `fⱼ`.
    fn f(&self, j: usize) -> &'a str {
        &self.schema.function(self.spec.at(j)).name
    }

    /// Table name of `dom(fⱼ)`.
    fn dom(&self, j: usize) -> &'a str {
        &self
            .schema
            .set(self.schema.function(self.spec.at(j)).domain)
            .name
    }

    fn codomain(&self) -> Codomain {
        self.schema.function(self.spec.outermost()).codomain
    }
}

fn is_text(codomain: Codomain) -> bool {
    codomain == Codomain::Scalar(crate::model::ScalarType::Text)
}

fn relation_text(c: &DiagramConstraint) -> &'static str {
    match c.kind {
        crate::model::ConstraintKind::Commutative => "must be equal to",
        crate::model::ConstraintKind::AntiCommutative => "must never be equal to",
    }
}
